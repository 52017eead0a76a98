//! Helpers shared by the integration suites: a small JSON-Schema checker for
//! the checked-in schemas, and seeded random sampling of elements and
//! well-defined class tuples.

#![allow(dead_code)]

use massey::cohomology::CohomologyClass;
use massey::field::FieldDescriptor;
use massey::gca::{Dga, Element};
use massey::linalg::Matrix;

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

// ----- schema validation (the subset our schemas use) -----

pub fn validate_schema(value: &Value, schema: &Value) -> Result<(), String> {
    if let Some(allowed) = schema.get("enum") {
        let ok = allowed
            .as_array()
            .map_or(false, |options| options.contains(value));
        if !ok {
            return Err(format!("{value} is not one of {allowed}"));
        }
        return Ok(());
    }
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => return Err("malformed schema type".into()),
        };
        let matches = names.iter().any(|name| match *name {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
            "number" => value.is_number(),
            _ => false,
        });
        if !matches {
            return Err(format!("{value} does not have type {names:?}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !obj.contains_key(key) {
                    return Err(format!("missing required key `{key}`"));
                }
            }
        }
        let props = schema.get("properties").and_then(|p| p.as_object());
        let additional = schema.get("additionalProperties");
        for (key, item) in obj {
            if let Some(sub) = props.and_then(|p| p.get(key)) {
                validate_schema(item, sub).map_err(|e| format!("{key}: {e}"))?;
            } else {
                match additional {
                    Some(Value::Bool(false)) => {
                        return Err(format!("unexpected key `{key}`"));
                    }
                    Some(Value::Bool(true)) | None => {}
                    Some(sub) => {
                        validate_schema(item, sub).map_err(|e| format!("{key}: {e}"))?
                    }
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, item) in arr.iter().enumerate() {
            validate_schema(item, items).map_err(|e| format!("[{i}]: {e}"))?;
        }
    }
    Ok(())
}

pub fn load_schema(name: &str) -> Value {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file exists"))
        .expect("schema parses")
}

pub fn golden_path(name: &str) -> String {
    format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))
}

// ----- seeded sampling -----

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n = rng.gen_range(-6i64..=6);
    let d = rng.gen_range(1i64..=4);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let q = random_rational(rng);
        if q != BigRational::from_integer(BigInt::from(0)) {
            return q;
        }
    }
}

/// A random homogeneous element of the given degree with small rational
/// coordinates (possibly zero).
pub fn random_element(rng: &mut ChaCha8Rng, dga: &Dga, degree: u32) -> Element {
    let dim = dga.dim(degree);
    let coords: Vec<_> = (0..dim)
        .map(|_| dga.descriptor().from_rational(random_rational(rng)))
        .collect();
    dga.from_coords(degree, &coords)
}

/// A random cohomology class of the given degree.
pub fn random_class(rng: &mut ChaCha8Rng, dga: &Dga, degree: u32) -> CohomologyClass {
    let dim = dga.cohomology_dim(degree);
    CohomologyClass {
        degree,
        coords: (0..dim)
            .map(|_| dga.descriptor().from_rational(random_rational(rng)))
            .collect(),
    }
}

pub fn random_nonzero_class(
    rng: &mut ChaCha8Rng,
    dga: &Dga,
    degree: u32,
) -> Option<CohomologyClass> {
    if dga.cohomology_dim(degree) == 0 {
        return None;
    }
    for _ in 0..50 {
        let c = random_class(rng, dga, degree);
        if !c.is_zero() {
            return Some(c);
        }
    }
    None
}

/// A random class annihilating `z` from the right: an element of the kernel
/// of cup-by-z on H^degree.
pub fn random_annihilator(
    rng: &mut ChaCha8Rng,
    dga: &Dga,
    z: &CohomologyClass,
    degree: u32,
) -> Option<CohomologyClass> {
    let matrix: Matrix = dga.cup_matrix(z, degree).ok()?;
    let kernel = matrix.kernel_basis();
    if kernel.is_empty() {
        return None;
    }
    for _ in 0..50 {
        let mut coords = vec![dga.descriptor().zero(); dga.cohomology_dim(degree)];
        let mut nonzero = false;
        for v in &kernel {
            let c = dga.descriptor().from_rational(random_rational(rng));
            if !c.is_zero() {
                nonzero = true;
            }
            for (k, entry) in v.iter().enumerate() {
                if !entry.is_zero() {
                    coords[k] = &coords[k] + &(&c * entry);
                }
            }
        }
        if nonzero && coords.iter().any(|c| !c.is_zero()) {
            return Some(CohomologyClass { degree, coords });
        }
    }
    None
}

/// A chain z_1, …, z_n with every consecutive cup product zero, built by
/// walking kernels of multiplication maps. For n = 3 this is exactly
/// well-definedness of the triple product.
pub fn random_consecutive_zero_tuple(
    rng: &mut ChaCha8Rng,
    dga: &Dga,
    degrees: &[u32],
) -> Option<Vec<CohomologyClass>> {
    let mut out = Vec::with_capacity(degrees.len());
    let first = random_nonzero_class(rng, dga, degrees[0])?;
    out.push(first);
    for &d in &degrees[1..] {
        let prev = out.last().unwrap();
        let next = random_annihilator(rng, dga, prev, d)?;
        out.push(next);
    }
    Some(out)
}

/// A tuple of proportional degree-one classes c_i·z, the shape every
/// well-defined degree-one tuple takes on the real Iwasawa model.
pub fn proportional_degree_one_tuple(
    rng: &mut ChaCha8Rng,
    dga: &Dga,
    n: usize,
) -> Option<Vec<CohomologyClass>> {
    let base = random_nonzero_class(rng, dga, 1)?;
    let mut out = vec![base.clone()];
    for _ in 1..n {
        let c = dga.descriptor().from_rational(nonzero_rational(rng));
        out.push(CohomologyClass {
            degree: 1,
            coords: base.coords.iter().map(|x| x * &c).collect(),
        });
    }
    Some(out)
}
