//! Stable JSON shapes: the structure dump every algebra serializes to (and
//! loads from), and the verdict objects the CLI prints.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cohomology::CohomologyClass;
use crate::dsl;
use crate::engine::MasseyOutcome;
use crate::error::MasseyError;
use crate::field::{format_rational, FieldDescriptor};
use crate::gca::{Dga, Element, Monomial, TableData};

pub const DUMP_FORMAT: &str = "massey.dga/1";

#[derive(Serialize, Deserialize, Debug)]
pub struct FieldDump {
    pub base: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjoin_sqrt: Option<String>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct GeneratorDump {
    pub name: String,
    pub degree: u32,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct DegreeDump {
    pub degree: u32,
    pub basis: Vec<String>,
}

/// One sparse element: pairs of basis index (in the implied target degree)
/// and scalar.
pub type SparseValue = Vec<(u32, String)>;

#[derive(Serialize, Deserialize, Debug)]
pub struct DiffDump {
    pub degree: u32,
    pub index: u32,
    pub value: SparseValue,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct ProductDump {
    pub left_degree: u32,
    pub left_index: u32,
    pub right_degree: u32,
    pub right_index: u32,
    pub value: SparseValue,
}

/// The structure dump: a free presentation or an explicit table.
#[derive(Serialize, Deserialize, Debug)]
pub struct DgaDump {
    pub format: String,
    pub field: FieldDump,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorDump>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differentials: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<DegreeDump>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differential: Option<Vec<DiffDump>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<ProductDump>>,
}

fn field_dump(desc: &FieldDescriptor) -> FieldDump {
    FieldDump {
        base: "rationals".to_string(),
        adjoin_sqrt: desc.theta().map(format_rational),
    }
}

fn field_from_dump(f: &FieldDump) -> Result<FieldDescriptor, MasseyError> {
    if f.base != "rationals" {
        return Err(MasseyError::InvalidInput(format!(
            "unsupported base field `{}`",
            f.base
        )));
    }
    match &f.adjoin_sqrt {
        None => Ok(FieldDescriptor::rationals()),
        Some(q) => FieldDescriptor::quadratic(dsl::parse_rational(q)?),
    }
}

fn sparse_value(dga: &Dga, x: &Element, target_degree: u32) -> SparseValue {
    let basis = dga.basis(target_degree);
    x.terms()
        .map(|(m, c)| (basis.index[m] as u32, c.to_string()))
        .collect()
}

/// Serializes any algebra: free ones by presentation, table-backed ones by
/// their full basis, differential, and product tables.
pub fn dump_dga(dga: &Dga) -> DgaDump {
    if dga.is_free() {
        let mut differentials = BTreeMap::new();
        for (i, g) in dga.generators().iter().enumerate() {
            let d = dga.diff_of_generator(i);
            if !d.is_zero() {
                differentials.insert(g.name.clone(), dga.format_element(d));
            }
        }
        DgaDump {
            format: DUMP_FORMAT.to_string(),
            field: field_dump(dga.descriptor()),
            kind: "free".to_string(),
            generators: Some(
                dga.generators()
                    .iter()
                    .map(|g| GeneratorDump {
                        name: g.name.clone(),
                        degree: g.degree,
                    })
                    .collect(),
            ),
            differentials: Some(differentials),
            degrees: None,
            differential: None,
            products: None,
        }
    } else {
        let top = dga.top_degree().expect("tables are bounded");
        let mut degrees = Vec::new();
        let mut differential = Vec::new();
        let mut products = Vec::new();
        for k in 0..=top {
            let basis = dga.basis(k);
            degrees.push(DegreeDump {
                degree: k,
                basis: basis
                    .monomials
                    .iter()
                    .map(|m| dga.monomial_label(m))
                    .collect(),
            });
            for (i, m) in basis.monomials.iter().enumerate() {
                let d = dga.differential(&dga.monomial_element(m.clone()));
                if !d.is_zero() {
                    differential.push(DiffDump {
                        degree: k,
                        index: i as u32,
                        value: sparse_value(dga, &d, k + 1),
                    });
                }
            }
        }
        for d1 in 0..=top {
            for d2 in 0..=(top.saturating_sub(d1)) {
                let b1 = dga.basis(d1);
                let b2 = dga.basis(d2);
                for (i1, m1) in b1.monomials.iter().enumerate() {
                    for (i2, m2) in b2.monomials.iter().enumerate() {
                        let p = dga.mul_monomials(m1, m2);
                        if !p.is_zero() {
                            products.push(ProductDump {
                                left_degree: d1,
                                left_index: i1 as u32,
                                right_degree: d2,
                                right_index: i2 as u32,
                                value: sparse_value(dga, &p, d1 + d2),
                            });
                        }
                    }
                }
            }
        }
        DgaDump {
            format: DUMP_FORMAT.to_string(),
            field: field_dump(dga.descriptor()),
            kind: "table".to_string(),
            generators: None,
            differentials: None,
            degrees: Some(degrees),
            differential: Some(differential),
            products: Some(products),
        }
    }
}

pub fn dump_to_string(dga: &Dga) -> String {
    serde_json::to_string_pretty(&dump_dga(dga)).expect("dump serializes")
}

/// Reconstructs an algebra from a dump. Table dumps are fully validated
/// (shape, unit, d² = 0, graded commutativity, associativity, Leibniz).
pub fn load_dump(text: &str) -> Result<Dga, MasseyError> {
    let dump: DgaDump = serde_json::from_str(text)
        .map_err(|e| MasseyError::InvalidInput(format!("malformed dump: {e}")))?;
    if dump.format != DUMP_FORMAT {
        return Err(MasseyError::InvalidInput(format!(
            "unsupported dump format `{}`",
            dump.format
        )));
    }
    let desc = field_from_dump(&dump.field)?;
    match dump.kind.as_str() {
        "free" => {
            let gens = dump
                .generators
                .ok_or_else(|| MasseyError::InvalidInput("free dump without generators".into()))?;
            let mut builder = Dga::free_builder(
                desc,
                gens.into_iter().map(|g| (g.name, g.degree)).collect(),
            )?;
            for (name, expr) in dump.differentials.unwrap_or_default() {
                let value = dsl::parse_expression(&builder, &expr, 1, 0)?;
                builder.set_diff(&name, value)?;
            }
            builder.build()
        }
        "table" => {
            let degrees = dump
                .degrees
                .ok_or_else(|| MasseyError::InvalidInput("table dump without degrees".into()))?;
            let mut labels: Vec<Vec<String>> = Vec::new();
            for (expect, d) in degrees.iter().enumerate() {
                if d.degree as usize != expect {
                    return Err(MasseyError::InvalidInput(
                        "table degrees must be listed consecutively from 0".into(),
                    ));
                }
                labels.push(d.basis.clone());
            }
            let dims: Vec<usize> = labels.iter().map(|l| l.len()).collect();
            let parse_sparse = |value: &SparseValue,
                                target: u32,
                                id|
             -> Result<Element, MasseyError> {
                let Some(&target_dim) = dims.get(target as usize) else {
                    if value.is_empty() {
                        return Ok(Element::from_terms(id, []));
                    }
                    return Err(MasseyError::InvalidInput(format!(
                        "entry lands in missing degree {target}"
                    )));
                };
                let mut terms = Vec::new();
                for (idx, coeff) in value {
                    if *idx as usize >= target_dim {
                        return Err(MasseyError::InvalidInput(format!(
                            "index {idx} out of range in degree {target}"
                        )));
                    }
                    terms.push((
                        Monomial::Basis {
                            degree: target,
                            index: *idx,
                        },
                        dsl::parse_scalar(&desc, coeff)?,
                    ));
                }
                Ok(Element::from_terms(id, terms))
            };
            let diffs = dump.differential.unwrap_or_default();
            let prods = dump.products.unwrap_or_default();
            let dga = Dga::from_table(desc.clone(), |id| {
                let mut diff: Vec<Vec<Element>> = dims
                    .iter()
                    .map(|&n| vec![Element::from_terms(id, []); n])
                    .collect();
                for entry in &diffs {
                    let (d, i) = (entry.degree as usize, entry.index as usize);
                    if d >= dims.len() || i >= dims[d] {
                        return Err(MasseyError::InvalidInput(
                            "differential entry out of range".into(),
                        ));
                    }
                    diff[d][i] = parse_sparse(&entry.value, entry.degree + 1, id)?;
                }
                let mut prod = HashMap::new();
                for entry in &prods {
                    let (d1, i1) = (entry.left_degree, entry.left_index);
                    let (d2, i2) = (entry.right_degree, entry.right_index);
                    if d1 as usize >= dims.len()
                        || d2 as usize >= dims.len()
                        || i1 as usize >= dims[d1 as usize]
                        || i2 as usize >= dims[d2 as usize]
                    {
                        return Err(MasseyError::InvalidInput(
                            "product entry out of range".into(),
                        ));
                    }
                    let value = parse_sparse(&entry.value, d1 + d2, id)?;
                    if !value.is_zero() {
                        prod.insert((d1, i1, d2, i2), value);
                    }
                }
                Ok(TableData {
                    labels: labels.clone(),
                    diff,
                    prod,
                })
            })?;
            dga.validate_table()?;
            Ok(dga)
        }
        other => Err(MasseyError::InvalidInput(format!(
            "unknown dump kind `{other}`"
        ))),
    }
}

// ----- verdicts -----

#[derive(Serialize, Deserialize, Debug)]
pub struct ObstructionJson {
    pub kind: String,
    pub equation: Option<String>,
    pub detail: String,
    pub reduced_system: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug)]
pub struct VerdictJson {
    pub well_defined: bool,
    pub trivial: String,
    pub witness: Option<BTreeMap<String, String>>,
    pub obstruction: Option<ObstructionJson>,
}

pub fn verdict_json(outcome: &MasseyOutcome) -> VerdictJson {
    VerdictJson {
        well_defined: outcome.well_defined,
        trivial: outcome.trivial.as_str().to_string(),
        witness: outcome.witness.as_ref().map(|w| {
            w.iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect()
        }),
        obstruction: outcome.obstruction.as_ref().map(|o| ObstructionJson {
            kind: o.kind.clone(),
            equation: o.equation.clone(),
            detail: o.detail.clone(),
            reduced_system: o.reduced_system.clone(),
        }),
    }
}

#[derive(Serialize, Deserialize, Debug)]
pub struct CohomologyJson {
    pub degree: u32,
    pub dimension: usize,
    pub representatives: Vec<String>,
}

pub fn cohomology_json(dga: &Dga, degree: u32) -> CohomologyJson {
    let basis: Vec<CohomologyClass> = dga.cohomology_basis(degree);
    CohomologyJson {
        degree,
        dimension: basis.len(),
        representatives: basis
            .iter()
            .map(|c| dga.format_element(&dga.representative(c)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::corpus;
    use std::sync::Arc;

    #[test]
    fn free_dump_round_trip() {
        for id in ["iwasawa_real", "iwasawa_complex", "quadruple"] {
            let dga = corpus::build(id, None).unwrap();
            let text = dump_to_string(&dga);
            let again = load_dump(&text).unwrap();
            assert!(dga == again, "{id} dump did not round-trip");
        }
    }

    #[test]
    fn table_dump_round_trip() {
        let a = Arc::new(corpus::build("iwasawa_real", None).unwrap());
        let (b, _) = constructions::truncate(&a, 3).unwrap();
        let text = dump_to_string(&b);
        let again = load_dump(&text).unwrap();
        assert!(*b == again);
        assert_eq!(again.cohomology_dim(2), 13);
    }

    #[test]
    fn dualized_dump_round_trip() {
        let a = Arc::new(corpus::build("heisenberg_squared", None).unwrap());
        let (b, _) = constructions::truncate(&a, 3).unwrap();
        let p = constructions::poincare_dualize(&b, 5).unwrap();
        let text = dump_to_string(p.algebra());
        let again = load_dump(&text).unwrap();
        assert!(**p.algebra() == again);
    }

    #[test]
    fn corrupted_table_rejected() {
        let a = Arc::new(corpus::build("iwasawa_real", None).unwrap());
        let (b, _) = constructions::truncate(&a, 3).unwrap();
        let mut dump = dump_dga(&b);
        // break associativity/commutativity by tampering with one product
        if let Some(products) = &mut dump.products {
            let entry = products
                .iter_mut()
                .find(|p| p.left_degree == 1 && p.right_degree == 1)
                .unwrap();
            entry.value[0].1 = "7".to_string();
        }
        let text = serde_json::to_string(&dump).unwrap();
        assert!(load_dump(&text).is_err());
    }

    #[test]
    fn verdict_shape() {
        let a = corpus::build("quadruple", None).unwrap();
        let zx = a.class_of(&a.generator_element("x").unwrap()).unwrap();
        let zy = a.class_of(&a.generator_element("y").unwrap()).unwrap();
        let out = crate::engine::decide(
            &a,
            &[zx.clone(), zy.clone(), zy.clone(), zx.clone()],
            a.descriptor(),
        )
        .unwrap();
        let v = verdict_json(&out);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"trivial\":\"no\""));
        assert!(text.contains("univariate_no_root"));
    }
}
