//! Exact scalar arithmetic in the rationals and in quadratic extensions Q(√θ).
//!
//! Every scalar in the system is a [`FieldElement`]: a pair `a + b·√θ` of
//! arbitrary-precision rationals tagged with the [`FieldDescriptor`] it lives
//! in. Over the plain rationals `b` is identically zero. There is no floating
//! point anywhere; all operations are exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::MasseyError;

/// The coefficient field: either Q or a quadratic extension Q(√θ).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldDescriptor {
    theta: Option<BigRational>,
}

impl FieldDescriptor {
    /// The rational numbers.
    pub fn rationals() -> Self {
        FieldDescriptor { theta: None }
    }

    /// The extension Q(√θ). Rejects θ = 0 and rational squares, for which
    /// the "extension" would collapse.
    pub fn quadratic(theta: BigRational) -> Result<Self, MasseyError> {
        if theta.is_zero() {
            return Err(MasseyError::InvalidField(
                "cannot adjoin the square root of zero".into(),
            ));
        }
        if is_square_in_rationals(&theta) {
            return Err(MasseyError::InvalidField(format!(
                "{} is a square of a rational; the extension would be trivial",
                format_rational(&theta)
            )));
        }
        Ok(FieldDescriptor { theta: Some(theta) })
    }

    pub fn is_extension(&self) -> bool {
        self.theta.is_some()
    }

    pub fn theta(&self) -> Option<&BigRational> {
        self.theta.as_ref()
    }

    /// True when `self` embeds into `target`: equal descriptors, or Q into
    /// any quadratic extension.
    pub fn embeds_into(&self, target: &FieldDescriptor) -> bool {
        self == target || self.theta.is_none()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            a: BigRational::zero(),
            b: BigRational::zero(),
            desc: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            a: BigRational::one(),
            b: BigRational::zero(),
            desc: self.clone(),
        }
    }

    pub fn from_rational(&self, a: BigRational) -> FieldElement {
        FieldElement {
            a,
            b: BigRational::zero(),
            desc: self.clone(),
        }
    }

    pub fn from_integer(&self, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The element √θ. Errors over the plain rationals.
    pub fn sqrt_theta(&self) -> Result<FieldElement, MasseyError> {
        if self.theta.is_none() {
            return Err(MasseyError::InvalidField(
                "no square root has been adjoined to the rationals".into(),
            ));
        }
        Ok(FieldElement {
            a: BigRational::zero(),
            b: BigRational::one(),
            desc: self.clone(),
        })
    }

    /// Builds `a + b√θ`; `b` must be zero over the rationals.
    pub fn element(&self, a: BigRational, b: BigRational) -> Result<FieldElement, MasseyError> {
        if self.theta.is_none() && !b.is_zero() {
            return Err(MasseyError::InvalidField(
                "nonzero √θ part over the rationals".into(),
            ));
        }
        Ok(FieldElement {
            a,
            b,
            desc: self.clone(),
        })
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.theta {
            None => write!(f, "Q"),
            Some(t) => write!(f, "Q(sqrt({}))", format_rational(t)),
        }
    }
}

/// True iff q is the square of a rational number.
pub fn is_square_in_rationals(q: &BigRational) -> bool {
    rational_sqrt(q).is_some()
}

/// The nonnegative rational square root of q, when it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let num = q.numer();
    let den = q.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// An exact scalar `a + b·√θ` in the field named by its descriptor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
    desc: FieldDescriptor,
}

impl FieldElement {
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// The rational value when the √θ part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<(), MasseyError> {
        if self.desc != other.desc {
            return Err(MasseyError::FieldMismatch {
                left: self.desc.to_string(),
                right: other.desc.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, MasseyError> {
        self.check_same_field(other)?;
        Ok(FieldElement {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            desc: self.desc.clone(),
        })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement, MasseyError> {
        self.check_same_field(other)?;
        Ok(FieldElement {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            desc: self.desc.clone(),
        })
    }

    /// (a+b√θ)(c+d√θ) = (ac + bdθ) + (ad + bc)√θ.
    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, MasseyError> {
        self.check_same_field(other)?;
        let (a, b, c, d) = (&self.a, &self.b, &other.a, &other.b);
        let bd = b * d;
        let rational = match self.desc.theta() {
            Some(t) if !bd.is_zero() => a * c + bd * t,
            _ => a * c,
        };
        let sqrt = a * d + b * c;
        Ok(FieldElement {
            a: rational,
            b: sqrt,
            desc: self.desc.clone(),
        })
    }

    /// The field norm a² − θb² (just a² over the rationals).
    pub fn norm(&self) -> BigRational {
        match self.desc.theta() {
            Some(t) => &self.a * &self.a - (&self.b * &self.b) * t,
            None => &self.a * &self.a,
        }
    }

    /// The conjugate a − b√θ.
    pub fn conjugate(&self) -> FieldElement {
        FieldElement {
            a: self.a.clone(),
            b: -self.b.clone(),
            desc: self.desc.clone(),
        }
    }

    pub fn inverse(&self) -> Result<FieldElement, MasseyError> {
        if self.is_zero() {
            return Err(MasseyError::DivisionByZero);
        }
        let n = self.norm();
        if n.is_zero() {
            // cannot happen for a non-square θ, kept as a hard guard
            return Err(MasseyError::Internal(
                "zero norm for a nonzero field element".into(),
            ));
        }
        let conj = self.conjugate();
        Ok(FieldElement {
            a: conj.a / &n,
            b: conj.b / &n,
            desc: self.desc.clone(),
        })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, MasseyError> {
        self.check_same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Rescales by an integer; handy for small sign and scale tweaks.
    pub fn scale_int(&self, n: i64) -> FieldElement {
        let n = BigRational::from_integer(BigInt::from(n));
        FieldElement {
            a: &self.a * &n,
            b: &self.b * &n,
            desc: self.desc.clone(),
        }
    }

    /// Image of this element under the inclusion into `target`.
    ///
    /// The source must be the rationals (or `target` itself); the map is the
    /// ring homomorphism a ↦ a + 0·√θ.
    pub fn embed(&self, target: &FieldDescriptor) -> Result<FieldElement, MasseyError> {
        if &self.desc == target {
            return Ok(self.clone());
        }
        if !self.desc.embeds_into(target) {
            return Err(MasseyError::FieldMismatch {
                left: self.desc.to_string(),
                right: target.to_string(),
            });
        }
        Ok(FieldElement {
            a: self.a.clone(),
            b: BigRational::zero(),
            desc: target.clone(),
        })
    }

    /// A square root in the same field, when one exists.
    ///
    /// Complete for quadratic extensions: x = A + B√θ is a square iff either
    /// B = 0 and A or A/θ is a rational square, or B ≠ 0, the norm A² − θB²
    /// is the square of some rational r, and one of (A ± r)/2 is a rational
    /// square p²; then √x = p + (B/2p)√θ.
    pub fn sqrt(&self) -> Option<FieldElement> {
        let theta = match self.desc.theta() {
            None => {
                let r = rational_sqrt(&self.a)?;
                return Some(self.desc.from_rational(r));
            }
            Some(t) => t,
        };
        let (big_a, big_b) = (&self.a, &self.b);
        if big_b.is_zero() {
            if let Some(p) = rational_sqrt(big_a) {
                return Some(FieldElement {
                    a: p,
                    b: BigRational::zero(),
                    desc: self.desc.clone(),
                });
            }
            if let Some(q) = rational_sqrt(&(big_a / theta)) {
                // A = θq², so √A = q√θ
                return Some(FieldElement {
                    a: BigRational::zero(),
                    b: q,
                    desc: self.desc.clone(),
                });
            }
            return None;
        }
        let norm = big_a * big_a - (big_b * big_b) * theta;
        let r = rational_sqrt(&norm)?;
        let two = BigRational::from_integer(BigInt::from(2));
        for cand in [(big_a + &r) / &two, (big_a - &r) / &two] {
            if let Some(p) = rational_sqrt(&cand) {
                if p.is_zero() {
                    continue;
                }
                let q = big_b / (&two * &p);
                let root = FieldElement {
                    a: p,
                    b: q,
                    desc: self.desc.clone(),
                };
                debug_assert_eq!(root.checked_mul(&root).unwrap(), *self);
                return Some(root);
            }
        }
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field operation on mismatched descriptors")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            a: -self.a.clone(),
            b: -self.b.clone(),
            desc: self.desc.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    /// `p/q`, `p`, or `p/q + r/s*s`, where the bare token `s` is √θ.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.a.is_zero() {
            parts.push(format_rational(&self.a));
        }
        if !self.b.is_zero() {
            let coeff = if self.b.is_one() {
                "s".to_string()
            } else if (-&self.b).is_one() {
                "-s".to_string()
            } else {
                format!("{}*s", format_rational(&self.b))
            };
            parts.push(coeff);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn gauss() -> FieldDescriptor {
        FieldDescriptor::quadratic(rat(-1, 1)).unwrap()
    }

    #[test]
    fn norm_of_one_plus_i() {
        let f = gauss();
        let x = f.element(rat(1, 1), rat(1, 1)).unwrap();
        let y = f.element(rat(1, 1), rat(-1, 1)).unwrap();
        assert_eq!(x.checked_mul(&y).unwrap(), f.from_integer(2));
    }

    #[test]
    fn multiplicative_identity() {
        let f = gauss();
        let x = f.element(rat(3, 7), rat(-2, 5)).unwrap();
        assert_eq!(x.checked_mul(&f.one()).unwrap(), x);
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let f = FieldDescriptor::quadratic(rat(2, 1)).unwrap();
        let s = f.sqrt_theta().unwrap();
        assert_eq!(s.checked_mul(&s).unwrap(), f.from_integer(2));
    }

    #[test]
    fn square_detection() {
        assert!(is_square_in_rationals(&rat(4, 1)));
        assert!(!is_square_in_rationals(&rat(-1, 1)));
        assert!(!is_square_in_rationals(&rat(2, 1)));
        assert!(is_square_in_rationals(&rat(9, 4)));
        assert!(!is_square_in_rationals(&rat(9, 8)));
    }

    #[test]
    fn square_theta_rejected() {
        assert!(FieldDescriptor::quadratic(rat(4, 1)).is_err());
        assert!(FieldDescriptor::quadratic(rat(0, 1)).is_err());
        assert!(FieldDescriptor::quadratic(rat(9, 4)).is_err());
        assert!(FieldDescriptor::quadratic(rat(-1, 1)).is_ok());
    }

    #[test]
    fn embed_preserves_values() {
        let q = FieldDescriptor::rationals();
        let f = gauss();
        let x = q.from_rational(rat(3, 2));
        let y = x.embed(&f).unwrap();
        assert_eq!(y.rational_part(), &rat(3, 2));
        assert!(y.sqrt_part().is_zero());
        assert_eq!(q.zero().embed(&f).unwrap(), f.zero());
    }

    #[test]
    fn embed_rejects_cross_extensions() {
        let f2 = FieldDescriptor::quadratic(rat(2, 1)).unwrap();
        let f3 = FieldDescriptor::quadratic(rat(3, 1)).unwrap();
        let x = f2.sqrt_theta().unwrap();
        assert!(x.embed(&f3).is_err());
    }

    #[test]
    fn division_by_zero_rejected() {
        let f = gauss();
        assert!(f.one().checked_div(&f.zero()).is_err());
    }

    #[test]
    fn mismatched_descriptors_rejected() {
        let f = gauss();
        let q = FieldDescriptor::rationals();
        assert!(f.one().checked_add(&q.one()).is_err());
    }

    #[test]
    fn sqrt_in_gauss_field() {
        let f = gauss();
        // √(-1) = s
        let m1 = f.from_integer(-1);
        assert_eq!(m1.sqrt().unwrap(), f.sqrt_theta().unwrap());
        // 2s = (1+s)^2
        let x = f.element(rat(0, 1), rat(2, 1)).unwrap();
        let r = x.sqrt().unwrap();
        assert_eq!(r.checked_mul(&r).unwrap(), x);
        // 1 + s has norm 2, not a square
        let y = f.element(rat(1, 1), rat(1, 1)).unwrap();
        assert!(y.sqrt().is_none());
    }

    #[test]
    fn sqrt_in_sqrt2_field() {
        let f = FieldDescriptor::quadratic(rat(2, 1)).unwrap();
        let two = f.from_integer(2);
        assert_eq!(two.sqrt().unwrap(), f.sqrt_theta().unwrap());
        // 3 + 2√2 = (1+√2)^2
        let x = f.element(rat(3, 1), rat(2, 1)).unwrap();
        let r = x.sqrt().unwrap();
        assert_eq!(r.checked_mul(&r).unwrap(), x);
        assert!(f.from_integer(3).sqrt().is_none());
    }

    #[test]
    fn display_round_style() {
        let f = gauss();
        assert_eq!(f.zero().to_string(), "0");
        assert_eq!(f.from_rational(rat(-3, 2)).to_string(), "-3/2");
        assert_eq!(
            f.element(rat(1, 2), rat(3, 4)).unwrap().to_string(),
            "1/2 + 3/4*s"
        );
        assert_eq!(
            f.element(rat(1, 2), rat(-1, 1)).unwrap().to_string(),
            "1/2 - s"
        );
        assert_eq!(f.sqrt_theta().unwrap().to_string(), "s");
    }
}
