//! Multivariate polynomials in named parameters with exact field
//! coefficients, and algebra elements whose coefficients are such
//! polynomials. These carry the generic defining systems of the Massey
//! engine and the constraint systems handed to the solver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::MasseyError;
use crate::field::{FieldDescriptor, FieldElement};
use crate::gca::{Dga, DgaId, Element, Monomial};

pub type ParamId = u32;

/// Interns parameter names; ids are creation order, names are `k1`, `k2`, …
#[derive(Clone, Default, Debug)]
pub struct ParamRegistry {
    names: Vec<String>,
}

impl ParamRegistry {
    pub fn new() -> Self {
        ParamRegistry { names: Vec::new() }
    }

    pub fn fresh(&mut self) -> ParamId {
        let id = self.names.len() as ParamId;
        self.names.push(format!("k{}", id + 1));
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> + '_ {
        (0..self.names.len() as ParamId).collect::<Vec<_>>().into_iter()
    }
}

/// A power product of parameters, sorted by id.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VarMonomial(Vec<(ParamId, u32)>);

impl VarMonomial {
    pub fn one() -> Self {
        VarMonomial(Vec::new())
    }

    pub fn var(id: ParamId) -> Self {
        VarMonomial(vec![(id, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, id: ParamId) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| *v == id)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = ParamId> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    fn mul(&self, other: &VarMonomial) -> VarMonomial {
        let mut out: Vec<(ParamId, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VarMonomial(out)
    }

    /// The monomial with `id` removed, paired with its exponent there.
    fn without(&self, id: ParamId) -> (VarMonomial, u32) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(v, e)| {
                if *v == id {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (VarMonomial(rest), exp)
    }
}

/// A polynomial over the field in the registry's parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    desc: FieldDescriptor,
    terms: BTreeMap<VarMonomial, FieldElement>,
}

impl Poly {
    pub fn zero(desc: &FieldDescriptor) -> Self {
        Poly {
            desc: desc.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let desc = c.descriptor().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(VarMonomial::one(), c);
        }
        Poly { desc, terms }
    }

    pub fn var(id: ParamId, desc: &FieldDescriptor) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(VarMonomial::var(id), desc.one());
        Poly {
            desc: desc.clone(),
            terms,
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.terms.is_empty() {
            return Some(self.desc.zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&VarMonomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, id: ParamId) -> u32 {
        self.terms.keys().map(|m| m.degree_in(id)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<ParamId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    fn insert(&mut self, m: VarMonomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            desc: self.desc.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.desc);
        }
        Poly {
            desc: self.desc.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.desc);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Replaces `id` by the given polynomial.
    pub fn substitute(&self, id: ParamId, value: &Poly) -> Poly {
        let mut out = Poly::zero(&self.desc);
        for (m, c) in &self.terms {
            let (rest, exp) = m.without(id);
            if exp == 0 {
                out.insert(rest, c.clone());
                continue;
            }
            let mut power = Poly::constant(self.desc.one());
            for _ in 0..exp {
                power = power.mul(value);
            }
            let rest_poly = Poly {
                desc: self.desc.clone(),
                terms: BTreeMap::from([(rest, c.clone())]),
            };
            out = out.add(&rest_poly.mul(&power));
        }
        out
    }

    /// Evaluates with every variable assigned; unassigned variables are an
    /// internal error.
    pub fn eval(&self, assignment: &BTreeMap<ParamId, FieldElement>) -> FieldElement {
        let mut acc = self.desc.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.0.iter() {
                let value = assignment
                    .get(v)
                    .expect("evaluation requires a total assignment");
                for _ in 0..*e {
                    term = &term * value;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Writes `self = A·var + B` when the polynomial is linear in `var`,
    /// returning (A, B).
    pub fn split_linear(&self, id: ParamId) -> Option<(Poly, Poly)> {
        if self.degree_in(id) != 1 {
            return None;
        }
        let mut coeff = Poly::zero(&self.desc);
        let mut rest = Poly::zero(&self.desc);
        for (m, c) in &self.terms {
            let (others, exp) = m.without(id);
            if exp == 1 {
                coeff.insert(others, c.clone());
            } else {
                rest.insert(m.clone(), c.clone());
            }
        }
        Some((coeff, rest))
    }

    /// Coefficients [c0, c1, c2] when the polynomial is univariate in `id`
    /// of degree ≤ 2.
    pub fn univariate_coeffs(&self, id: ParamId) -> Option<[FieldElement; 3]> {
        let mut coeffs = [self.desc.zero(), self.desc.zero(), self.desc.zero()];
        for (m, c) in &self.terms {
            let (others, exp) = m.without(id);
            if !others.is_one() || exp > 2 {
                return None;
            }
            coeffs[exp as usize] = &coeffs[exp as usize] + c;
        }
        Some(coeffs)
    }

    pub fn embed(&self, target: &FieldDescriptor) -> Result<Poly, MasseyError> {
        Ok(Poly {
            desc: target.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| Ok((m.clone(), c.embed(target)?)))
                .collect::<Result<_, MasseyError>>()?,
        })
    }

    pub fn display(&self, registry: &ParamRegistry) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // highest total degree first, then the map order
        let mut terms: Vec<(&VarMonomial, &FieldElement)> = self.terms.iter().collect();
        terms.sort_by(|(m1, _), (m2, _)| {
            m2.total_degree()
                .cmp(&m1.total_degree())
                .then_with(|| m1.cmp(m2))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let mono = if m.is_one() {
                String::new()
            } else {
                let mut s = String::new();
                for (j, (v, e)) in m.0.iter().enumerate() {
                    if j > 0 {
                        s.push('*');
                    }
                    s.push_str(registry.name(*v));
                    if *e > 1 {
                        let _ = write!(s, "^{e}");
                    }
                }
                s
            };
            let printed = c.to_string();
            let body = if mono.is_empty() {
                if printed.contains(' ') {
                    format!("({printed})")
                } else {
                    printed.clone()
                }
            } else if c.is_one() {
                mono.clone()
            } else if (-(*c).clone()).is_one() {
                format!("-{mono}")
            } else if printed.contains(' ') {
                format!("({printed})*{mono}")
            } else {
                format!("{printed}*{mono}")
            };
            if i == 0 {
                out.push_str(&body);
            } else if let Some(rest) = body.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }
}

/// An algebra element whose coefficients are polynomials in the parameters.
#[derive(Clone, PartialEq, Debug)]
pub struct ParametricElement {
    ctx: DgaId,
    desc: FieldDescriptor,
    terms: BTreeMap<Monomial, Poly>,
}

impl ParametricElement {
    pub fn zero(dga: &Dga) -> Self {
        ParametricElement {
            ctx: dga.id(),
            desc: dga.descriptor().clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_element(dga: &Dga, x: &Element) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in x.terms() {
            terms.insert(m.clone(), Poly::constant(c.clone()));
        }
        ParametricElement {
            ctx: dga.id(),
            desc: dga.descriptor().clone(),
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    fn insert(&mut self, m: Monomial, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&p);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ParametricElement) -> ParametricElement {
        debug_assert_eq!(self.ctx, other.ctx);
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.insert(m.clone(), p.clone());
        }
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> ParametricElement {
        let mut out = ParametricElement {
            ctx: self.ctx,
            desc: self.desc.clone(),
            terms: BTreeMap::new(),
        };
        for (m, q) in &self.terms {
            out.insert(m.clone(), q.mul(p));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> ParametricElement {
        self.scale_poly(&Poly::constant(self.desc.from_integer(n)))
    }

    /// Adds `poly · element`.
    pub fn add_scaled_element(&self, dga: &Dga, x: &Element, p: &Poly) -> ParametricElement {
        let mut out = self.clone();
        for (m, c) in x.terms() {
            out.insert(m.clone(), p.scale(c));
        }
        let _ = dga;
        out
    }

    pub fn mul(&self, dga: &Dga, other: &ParametricElement) -> ParametricElement {
        debug_assert_eq!(self.ctx, dga.id());
        debug_assert_eq!(other.ctx, dga.id());
        let mut out = ParametricElement::zero(dga);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &other.terms {
                let base = dga.mul_monomials(m1, m2);
                if base.is_zero() {
                    continue;
                }
                let p = p1.mul(p2);
                for (m3, c3) in base.terms() {
                    out.insert(m3.clone(), p.scale(c3));
                }
            }
        }
        out
    }

    pub fn differential(&self, dga: &Dga) -> ParametricElement {
        let mut out = ParametricElement::zero(dga);
        for (m, p) in &self.terms {
            let dm = dga.differential(&dga.monomial_element(m.clone()));
            for (m2, c2) in dm.terms() {
                out.insert(m2.clone(), p.scale(c2));
            }
        }
        out
    }

    /// Polynomial coordinates in the monomial basis of `degree`; errors when
    /// a term lives in another degree.
    pub fn coords(&self, dga: &Dga, degree: u32) -> Result<Vec<Poly>, MasseyError> {
        let basis = dga.basis(degree);
        let mut v = vec![Poly::zero(&self.desc); basis.dim()];
        for (m, p) in &self.terms {
            let Some(&i) = basis.index.get(m) else {
                return Err(MasseyError::DegreeMismatch(format!(
                    "parametric element has a component outside degree {degree}"
                )));
            };
            v[i] = p.clone();
        }
        Ok(v)
    }

    pub fn specialize(
        &self,
        dga: &Dga,
        assignment: &BTreeMap<ParamId, FieldElement>,
    ) -> Element {
        dga.element_from_terms(
            self.terms
                .iter()
                .map(|(m, p)| (m.clone(), p.eval(assignment))),
        )
    }

    pub fn embed(&self, target: &Dga) -> Result<ParametricElement, MasseyError> {
        Ok(ParametricElement {
            ctx: target.id(),
            desc: target.descriptor().clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, p)| Ok((m.clone(), p.embed(target.descriptor())?)))
                .collect::<Result<_, MasseyError>>()?,
        })
    }

    pub fn display(&self, dga: &Dga, registry: &ParamRegistry) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, p) in &self.terms {
            parts.push(format!("({})*{}", p.display(registry), dga.monomial_label(m)));
        }
        parts.join(" + ")
    }
}

/// Applies an exact matrix to a vector of polynomials.
pub fn matrix_apply_polys(m: &crate::linalg::Matrix, v: &[Poly]) -> Vec<Poly> {
    assert_eq!(v.len(), m.cols());
    let desc = m.descriptor();
    (0..m.rows())
        .map(|r| {
            let mut acc = Poly::zero(desc);
            for c in 0..m.cols() {
                let e = m.at(r, c);
                if !e.is_zero() && !v[c].is_zero() {
                    acc = acc.add(&v[c].scale(e));
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    #[test]
    fn polynomial_arithmetic() {
        let d = q();
        let mut reg = ParamRegistry::new();
        let a = reg.fresh();
        let b = reg.fresh();
        let pa = Poly::var(a, &d);
        let pb = Poly::var(b, &d);
        let one = Poly::constant(d.one());
        // (a + b)(a - b) = a^2 - b^2
        let prod = pa.add(&pb).mul(&pa.sub(&pb));
        let direct = pa.mul(&pa).sub(&pb.mul(&pb));
        assert_eq!(prod, direct);
        assert_eq!(prod.total_degree(), 2);
        assert_eq!(prod.display(&reg), "k1^2 - k2^2");
        assert_eq!(one.add(&pa).display(&reg), "k1 + 1");
    }

    #[test]
    fn substitution_and_eval() {
        let d = q();
        let mut reg = ParamRegistry::new();
        let a = reg.fresh();
        let b = reg.fresh();
        let p = Poly::var(a, &d)
            .mul(&Poly::var(b, &d))
            .add(&Poly::constant(d.from_integer(1)));
        // substitute a := -b gives 1 - b^2
        let sub = p.substitute(a, &Poly::var(b, &d).neg());
        let pb = Poly::var(b, &d);
        assert_eq!(
            sub,
            Poly::constant(d.from_integer(1)).sub(&pb.mul(&pb))
        );
        let assignment = BTreeMap::from([(a, d.from_integer(2)), (b, d.from_integer(3))]);
        assert_eq!(p.eval(&assignment), d.from_integer(7));
    }

    #[test]
    fn linear_split_and_univariate() {
        let d = q();
        let mut reg = ParamRegistry::new();
        let a = reg.fresh();
        let b = reg.fresh();
        // 2a + b^2 - 1: linear in a with constant coefficient
        let p = Poly::var(a, &d)
            .scale(&d.from_integer(2))
            .add(&Poly::var(b, &d).mul(&Poly::var(b, &d)))
            .sub(&Poly::constant(d.one()));
        let (coeff, rest) = p.split_linear(a).unwrap();
        assert_eq!(coeff.as_constant().unwrap(), d.from_integer(2));
        assert!(rest.degree_in(a) == 0);
        assert!(p.split_linear(b).is_none());

        let u = Poly::var(b, &d)
            .mul(&Poly::var(b, &d))
            .add(&Poly::constant(d.one()));
        let c = u.univariate_coeffs(b).unwrap();
        assert_eq!(c[0], d.one());
        assert!(c[1].is_zero());
        assert_eq!(c[2], d.one());
        assert!(p.univariate_coeffs(a).is_none()); // contains b too
    }

    #[test]
    fn parametric_elements_on_a_dga() {
        let dga = crate::corpus::build("iwasawa_real", None).unwrap();
        let mut reg = ParamRegistry::new();
        let t = reg.fresh();
        let e1 = dga.generator_element("eta1").unwrap();
        let e2 = dga.generator_element("eta2").unwrap();
        // x = eta1 + t*eta2
        let x = ParametricElement::from_element(&dga, &e1).add_scaled_element(
            &dga,
            &e2,
            &Poly::var(t, dga.descriptor()),
        );
        // x * x = 2t * eta1*eta2? No: (e1 + t e2)^2 = t(e1e2) + t(e2e1) = 0
        let sq = x.mul(&dga, &x);
        assert!(sq.is_zero());
        // x * eta3
        let y = ParametricElement::from_element(&dga, &dga.generator_element("eta3").unwrap());
        let prod = x.mul(&dga, &y);
        let assignment = BTreeMap::from([(t, dga.descriptor().from_integer(5))]);
        let specialized = prod.specialize(&dga, &assignment);
        let direct = dga
            .mul(
                &dga.add(&e1, &dga.scale_int(&e2, 5)),
                &dga.generator_element("eta3").unwrap(),
            )
            .unwrap();
        assert_eq!(specialized, direct);
        // differential commutes with specialization
        let xe = ParametricElement::from_element(&dga, &dga.generator_element("eta5").unwrap());
        let dxe = xe.differential(&dga).specialize(&dga, &assignment);
        assert_eq!(dxe, dga.differential(&dga.generator_element("eta5").unwrap()));
    }
}
