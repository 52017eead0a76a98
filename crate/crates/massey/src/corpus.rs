//! Built-in model algebras used by the tests and the CLI.

use std::sync::Arc;

use num::rational::BigRational;

use crate::constructions;
use crate::dsl;
use crate::error::MasseyError;
use crate::field::{format_rational, is_square_in_rationals};
use crate::gca::Dga;
use num::traits::Zero;

const IWASAWA_REAL: &str = "\
field rationals

generators
  eta1 : 1
  eta2 : 1
  eta3 : 1
  eta4 : 1
  eta5 : 1
  eta6 : 1

differentials
  eta5 = eta1*eta3 - eta2*eta4
  eta6 = eta2*eta3 + eta1*eta4
";

const IWASAWA_COMPLEX: &str = "\
field rationals adjoin_sqrt -1

generators
  phi1 : 1
  phibar1 : 1
  phi2 : 1
  phibar2 : 1
  phi3 : 1
  phibar3 : 1

differentials
  phi3 = phi1*phi2
  phibar3 = phibar1*phibar2
";

const HEISENBERG_SQUARED: &str = "\
field rationals

generators
  x1 : 1
  x2 : 1
  x3 : 1
  y1 : 1
  y2 : 1
  y3 : 1

differentials
  x3 = x1*x2
  y3 = y1*y2
";

/// The known corpus ids, with one-line descriptions.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "iwasawa_real",
            "six odd generators, d(eta5) = eta1*eta3 - eta2*eta4, d(eta6) = eta2*eta3 + eta1*eta4",
        ),
        (
            "iwasawa_complex",
            "exterior algebra on phi_j, conj(phi_j) over Q(sqrt(-1)) with d(phi3) = phi1*phi2",
        ),
        (
            "heisenberg_squared",
            "six odd generators, d(x3) = x1*x2, d(y3) = y1*y2",
        ),
        (
            "iwasawa_truncated",
            "iwasawa_real modulo everything of degree >= 3",
        ),
        (
            "quadruple",
            "Λ(x,y,a,b,u,v,w) with d(w) = 2xu - a^2 + θb^2; accepts quadruple@θ, default θ = -1",
        ),
    ]
}

/// Builds a corpus algebra. `quadruple` takes the parameter θ (a nonzero
/// rational that is not a square), defaulting to −1.
pub fn build(id: &str, param: Option<BigRational>) -> Result<Dga, MasseyError> {
    match id {
        "iwasawa_real" => dsl::parse_document(IWASAWA_REAL),
        "iwasawa_complex" => dsl::parse_document(IWASAWA_COMPLEX),
        "heisenberg_squared" => dsl::parse_document(HEISENBERG_SQUARED),
        "iwasawa_truncated" => {
            let a = Arc::new(dsl::parse_document(IWASAWA_REAL)?);
            let (b, _) = constructions::truncate(&a, 3)?;
            Ok(Arc::try_unwrap(b).unwrap_or_else(|arc| {
                panic!("truncation handle should be unique, got {} owners", Arc::strong_count(&arc))
            }))
        }
        "quadruple" => {
            let theta = param.unwrap_or_else(|| -BigRational::from_integer(1.into()));
            if theta.is_zero() || is_square_in_rationals(&theta) {
                return Err(MasseyError::InvalidInput(format!(
                    "quadruple parameter must be a nonzero non-square rational, got {}",
                    format_rational(&theta)
                )));
            }
            let doc = format!(
                "field rationals\n\
                 generators\n  x : 2\n  y : 3\n  a : 4\n  b : 4\n  u : 6\n  v : 6\n  w : 7\n\
                 differentials\n  a = x*y\n  u = a*y\n  v = b*y\n  w = 2*x*u - a^2 + ({})*b^2\n",
                format_rational(&theta)
            );
            dsl::parse_document(&doc)
        }
        other => Err(MasseyError::UnknownCorpusId(other.to_string())),
    }
}

/// Parses a corpus reference of the form `id` or `id@param`.
pub fn build_from_ref(reference: &str) -> Result<Dga, MasseyError> {
    match reference.split_once('@') {
        None => build(reference, None),
        Some((id, param)) => {
            let q = dsl::parse_rational(param)?;
            build(id, Some(q))
        }
    }
}

pub fn is_corpus_ref(reference: &str) -> bool {
    let id = reference.split_once('@').map_or(reference, |(i, _)| i);
    list().iter().any(|(known, _)| *known == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_rational;

    #[test]
    fn all_entries_are_valid_dgas() {
        for (id, _) in list() {
            let dga = build(id, None).unwrap();
            assert!(dga.check_d_squared(), "{id} fails d^2 = 0");
            assert!(dga.is_connected(), "{id} is not connected");
        }
    }

    #[test]
    fn quadruple_matches_both_displays() {
        // θ = −1 reproduces d(w) = 2xu − a² − b²
        let a = build("quadruple", Some(parse_rational("-1").unwrap())).unwrap();
        let w = a.generator_index("w").unwrap();
        assert_eq!(
            a.format_element(a.diff_of_generator(w)),
            "2*x*u - a^2 - b^2"
        );
        let b = build("quadruple", Some(parse_rational("2").unwrap())).unwrap();
        let w = b.generator_index("w").unwrap();
        assert_eq!(
            b.format_element(b.diff_of_generator(w)),
            "2*x*u - a^2 + 2*b^2"
        );
    }

    #[test]
    fn quadruple_rejects_square_theta() {
        assert!(build("quadruple", Some(parse_rational("4").unwrap())).is_err());
        assert!(build("quadruple", Some(parse_rational("0").unwrap())).is_err());
    }

    #[test]
    fn unknown_id_rejected() {
        assert!(matches!(
            build("nope", None),
            Err(MasseyError::UnknownCorpusId(_))
        ));
    }

    #[test]
    fn reference_parsing() {
        assert!(build_from_ref("quadruple@2").is_ok());
        assert!(build_from_ref("quadruple@1/4").is_err());
        assert!(is_corpus_ref("quadruple@-1"));
        assert!(is_corpus_ref("iwasawa_real"));
        assert!(!is_corpus_ref("some_file.dga"));
    }

    #[test]
    fn truncated_model_has_bounded_degrees() {
        let b = build("iwasawa_truncated", None).unwrap();
        assert_eq!(b.top_degree(), Some(2));
        assert_eq!(b.dim(0) + b.dim(1) + b.dim(2), 22);
    }
}
