//! Defining systems and the decision procedure for n-fold Massey products.
//!
//! For classes z_1, …, z_n a defining system is a choice of representatives
//! a_{i,i} and, for every 1 ≤ i < j ≤ n except (1, n), an element a_{i,j}
//! with
//!
//! ```text
//! d(a_{i,j}) = Σ_{k=i}^{j-1} (−1)^{|a_{i,k}|} a_{i,k} a_{k+1,j},
//! ```
//!
//! and the product is the set of classes of
//! Σ_{k=1}^{n-1} (−1)^{|a_{1,k}|} a_{1,k} a_{k+1,n} over all defining
//! systems. The generic construction materializes one parametric defining
//! system: each slot takes δ of the image part of its right-hand side plus a
//! fresh parameter for every kernel basis vector of its degree, constraints
//! (the C- and I-components that obstruct exactness) are emitted stage by
//! stage, and solvability of the resulting polynomial systems is exactly
//! well-definedness resp. triviality of the product.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cohomology::CohomologyClass;
use crate::constructions;
use crate::error::MasseyError;
use crate::field::{FieldDescriptor, FieldElement};
use crate::gca::{Dga, Element};
use crate::linalg::SpanBuilder;
use crate::poly::{ParamId, ParamRegistry, ParametricElement, Poly};
use crate::solve::{
    self, describe_certificate, NoSolutionCertificate, PolySystem, SolveConfig, SolveOutcome,
};

fn sign_of_degree(d: u32) -> i64 {
    if d % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Degree of the slot (i, j): Σ_{k=i..j} |z_k| − (j − i). 1-indexed.
fn slot_degree(degrees: &[u32], i: usize, j: usize) -> i64 {
    let sum: i64 = degrees[i - 1..j].iter().map(|&d| d as i64).sum();
    sum - (j - i) as i64
}

/// A concrete defining system: validated degrees and d-equations.
pub struct DefiningSystem {
    n: usize,
    degrees: Vec<u32>,
    entries: BTreeMap<(usize, usize), Element>,
}

impl DefiningSystem {
    /// Validates slot degrees, closedness of the diagonal, and every
    /// d(a_{i,j}) equation.
    pub fn new(
        dga: &Dga,
        degrees: Vec<u32>,
        entries: BTreeMap<(usize, usize), Element>,
    ) -> Result<Self, MasseyError> {
        let n = degrees.len();
        if n < 3 {
            return Err(MasseyError::InvalidDefiningSystem(
                "defining systems start at n = 3".into(),
            ));
        }
        for i in 1..=n {
            for j in i..=n {
                if (i, j) == (1, n) {
                    continue;
                }
                let deg = slot_degree(&degrees, i, j);
                if deg < 0 {
                    return Err(MasseyError::InvalidDefiningSystem(format!(
                        "slot ({i},{j}) has negative degree {deg}"
                    )));
                }
                let entry = entries.get(&(i, j)).ok_or_else(|| {
                    MasseyError::InvalidDefiningSystem(format!("missing entry ({i},{j})"))
                })?;
                dga.check_ctx(entry)?;
                if !entry.is_zero() && dga.degree_of(entry) != Some(deg as u32) {
                    return Err(MasseyError::InvalidDefiningSystem(format!(
                        "entry ({i},{j}) is not homogeneous of degree {deg}"
                    )));
                }
            }
        }
        let ds = DefiningSystem { n, degrees, entries };
        for i in 1..=n {
            let diag = ds.entry(i, i);
            if !dga.differential(diag).is_zero() {
                return Err(MasseyError::InvalidDefiningSystem(format!(
                    "diagonal entry ({i},{i}) is not closed"
                )));
            }
        }
        for i in 1..=n {
            for j in (i + 1)..=n {
                if (i, j) == (1, n) {
                    continue;
                }
                let lhs = dga.differential(ds.entry(i, j));
                let rhs = ds.rhs(dga, i, j)?;
                if lhs != rhs {
                    return Err(MasseyError::InvalidDefiningSystem(format!(
                        "d(a[{i},{j}]) does not match its defining sum"
                    )));
                }
            }
        }
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[&(i, j)]
    }

    /// Σ_{k=i}^{j-1} (−1)^{|a_{i,k}|} a_{i,k} a_{k+1,j}.
    fn rhs(&self, dga: &Dga, i: usize, j: usize) -> Result<Element, MasseyError> {
        let mut acc = dga.zero();
        for k in i..j {
            let sign = sign_of_degree(slot_degree(&self.degrees, i, k).max(0) as u32);
            let prod = dga.mul(self.entry(i, k), self.entry(k + 1, j))?;
            acc = dga.add(&acc, &dga.scale_int(&prod, sign));
        }
        Ok(acc)
    }
}

/// The closed element Σ_{k=1}^{n-1} (−1)^{|a_{1,k}|} a_{1,k} a_{k+1,n}
/// representing the product for this defining system.
pub fn massey_representative(dga: &Dga, ds: &DefiningSystem) -> Result<Element, MasseyError> {
    let mut acc = dga.zero();
    for k in 1..ds.n {
        let sign = sign_of_degree(slot_degree(&ds.degrees, 1, k).max(0) as u32);
        let prod = dga.mul(ds.entry(1, k), ds.entry(k + 1, ds.n))?;
        acc = dga.add(&acc, &dga.scale_int(&prod, sign));
    }
    if !dga.differential(&acc).is_zero() {
        return Err(MasseyError::Internal(
            "massey representative of a valid defining system must be closed".into(),
        ));
    }
    Ok(acc)
}

/// Engine options. With `parametric_diagonals` the representatives of the
/// input classes also vary over their coset of boundaries, through fresh
/// parameters on the image basis of each diagonal degree; the default keeps
/// the canonical representatives fixed.
#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    pub parametric_diagonals: bool,
    pub solve: SolveConfig,
}

/// The parametric defining system of a Massey product query, with the two
/// constraint systems whose solvability decides it.
pub struct GenericMasseyProblem {
    n: usize,
    degrees: Vec<u32>,
    pub registry: Arc<ParamRegistry>,
    pub entries: BTreeMap<(usize, usize), ParametricElement>,
    pub final_representative: ParametricElement,
    pub well_definedness: PolySystem,
    pub triviality: PolySystem,
}

/// Builds the generic defining system. Entries are constructed level by
/// level (j − i = 1, 2, …): each right-hand side is decomposed along the
/// splitting of its degree, its C- and I-coordinates join the
/// well-definedness system, and the entry is δ of the image part plus fresh
/// parameters on the kernel basis of the slot degree. The triviality system
/// appends the C- and I-coordinates of the final representative.
pub fn generic_defining_system(
    dga: &Dga,
    classes: &[CohomologyClass],
    options: &DecideOptions,
) -> Result<GenericMasseyProblem, MasseyError> {
    let n = classes.len();
    if n < 3 {
        return Err(MasseyError::InvalidInput(
            "massey products need at least three classes".into(),
        ));
    }
    let degrees: Vec<u32> = classes.iter().map(|z| z.degree).collect();
    for i in 1..=n {
        for j in i..=n {
            if (i, j) == (1, n) {
                continue;
            }
            if slot_degree(&degrees, i, j) < 0 {
                return Err(MasseyError::InvalidInput(format!(
                    "slot ({i},{j}) would have negative degree; the product is not defined"
                )));
            }
        }
    }
    let value_degree = slot_degree(&degrees, 1, n) + 1;
    if value_degree < 0 {
        return Err(MasseyError::InvalidInput(
            "the product would land in negative degree".into(),
        ));
    }

    let desc = dga.descriptor().clone();
    let mut registry = ParamRegistry::new();
    let mut entries: BTreeMap<(usize, usize), ParametricElement> = BTreeMap::new();
    let mut wd_constraints: Vec<Poly> = Vec::new();

    // diagonals
    for (i, class) in classes.iter().enumerate() {
        let rep = dga.representative(class);
        let mut entry = ParametricElement::from_element(dga, &rep);
        if options.parametric_diagonals {
            let split = dga.splitting(class.degree);
            for t in 0..split.dim_image() {
                let vec = dga.from_coords(class.degree, split.image_vector(t));
                let p = Poly::var(registry.fresh(), &desc);
                entry = entry.add_scaled_element(dga, &vec, &p);
            }
        }
        entries.insert((i + 1, i + 1), entry);
    }

    // fresh kernel parameters for one slot
    let kernel_params = |dga: &Dga,
                             registry: &mut ParamRegistry,
                             degree: u32,
                             base: ParametricElement|
     -> ParametricElement {
        let split = dga.splitting(degree);
        let mut entry = base;
        for t in 0..split.dim_image() {
            let vec = dga.from_coords(degree, split.image_vector(t));
            let p = Poly::var(registry.fresh(), &desc);
            entry = entry.add_scaled_element(dga, &vec, &p);
        }
        for t in 0..split.dim_cohomology() {
            let vec = dga.from_coords(degree, split.cohomology_vector(t));
            let p = Poly::var(registry.fresh(), &desc);
            entry = entry.add_scaled_element(dga, &vec, &p);
        }
        entry
    };

    let parametric_rhs = |dga: &Dga,
                          entries: &BTreeMap<(usize, usize), ParametricElement>,
                          degrees: &[u32],
                          i: usize,
                          j: usize|
     -> ParametricElement {
        let mut acc = ParametricElement::zero(dga);
        for k in i..j {
            let sign = sign_of_degree(slot_degree(degrees, i, k) as u32);
            let prod = entries[&(i, k)].mul(dga, &entries[&(k + 1, j)]);
            acc = acc.add(&prod.scale_int(sign));
        }
        acc
    };

    for level in 1..=(n - 2) {
        for i in 1..=(n - level) {
            let j = i + level;
            let rhs = parametric_rhs(dga, &entries, &degrees, i, j);
            let slot_deg = slot_degree(&degrees, i, j) as u32;
            let rhs_degree = slot_deg + 1;
            let coords = rhs.coords(dga, rhs_degree)?;
            let (im, c, iv) = dga.splitting(rhs_degree).decompose_polys(&coords);
            for p in c.into_iter().chain(iv) {
                if !p.is_zero() {
                    wd_constraints.push(p);
                }
            }
            // δ of the image part
            let mut entry = ParametricElement::zero(dga);
            for (t, p) in im.into_iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let mut unit = vec![desc.zero(); dga.splitting(rhs_degree).dim_image()];
                unit[t] = desc.one();
                let delta_t = dga.delta_from_image_coords(rhs_degree, &unit);
                entry = entry.add(&ParametricElement::from_element(dga, &delta_t).scale_poly(&p));
            }
            let entry = kernel_params(dga, &mut registry, slot_deg, entry);
            entries.insert((i, j), entry);
        }
    }

    let final_representative = parametric_rhs(dga, &entries, &degrees, 1, n);
    let coords = final_representative.coords(dga, value_degree as u32)?;
    let (_, c, iv) = dga
        .splitting(value_degree as u32)
        .decompose_polys(&coords);
    let mut triv_constraints = wd_constraints.clone();
    for p in c.into_iter().chain(iv) {
        if !p.is_zero() {
            triv_constraints.push(p);
        }
    }

    let registry = Arc::new(registry);
    let problem = GenericMasseyProblem {
        n,
        degrees,
        registry: Arc::clone(&registry),
        entries,
        final_representative,
        well_definedness: PolySystem::new(desc.clone(), Arc::clone(&registry), wd_constraints),
        triviality: PolySystem::new(desc, registry, triv_constraints),
    };
    debug_assert!(
        problem.triviality.max_total_degree() <= (n as u32 + 1) / 2,
        "constraint degrees stay within ceil(n/2)"
    );
    Ok(problem)
}

impl GenericMasseyProblem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// The same problem with all coefficients embedded into the field of
    /// `target`, which must be `extend_scalars` of the original algebra.
    pub fn embed(&self, target: &Dga) -> Result<GenericMasseyProblem, MasseyError> {
        Ok(GenericMasseyProblem {
            n: self.n,
            degrees: self.degrees.clone(),
            registry: Arc::clone(&self.registry),
            entries: self
                .entries
                .iter()
                .map(|(k, pe)| Ok((*k, pe.embed(target)?)))
                .collect::<Result<_, MasseyError>>()?,
            final_representative: self.final_representative.embed(target)?,
            well_definedness: self.well_definedness.embed(target.descriptor())?,
            triviality: self.triviality.embed(target.descriptor())?,
        })
    }

    /// Specializes the parameters, validates the resulting defining system,
    /// and returns it with its representative.
    pub fn specialize(
        &self,
        dga: &Dga,
        assignment: &BTreeMap<ParamId, FieldElement>,
    ) -> Result<(DefiningSystem, Element), MasseyError> {
        let entries: BTreeMap<(usize, usize), Element> = self
            .entries
            .iter()
            .map(|(k, pe)| (*k, pe.specialize(dga, assignment)))
            .collect();
        let ds = DefiningSystem::new(dga, self.degrees.clone(), entries)?;
        let rep = massey_representative(dga, &ds)?;
        let direct = self.final_representative.specialize(dga, assignment);
        if rep != direct {
            return Err(MasseyError::Internal(
                "specialized representative disagrees with the parametric one".into(),
            ));
        }
        Ok((ds, rep))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Triviality {
    Yes,
    No,
    Unknown,
}

impl Triviality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Triviality::Yes => "yes",
            Triviality::No => "no",
            Triviality::Unknown => "unknown",
        }
    }
}

/// Display-level obstruction attached to a negative or undecided verdict.
#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub kind: String,
    pub equation: Option<String>,
    pub detail: String,
    pub reduced_system: Vec<String>,
}

/// The verdict for one Massey product query.
pub struct MasseyOutcome {
    pub well_defined: bool,
    pub trivial: Triviality,
    pub witness: Option<BTreeMap<String, FieldElement>>,
    pub obstruction: Option<ObstructionReport>,
    /// Raw certificate for replay, when the verdict rests on one.
    pub certificate: Option<NoSolutionCertificate>,
    /// The verified defining system behind a Yes verdict.
    pub witness_system: Option<DefiningSystem>,
    /// The extended algebra the witness system lives in, when the query ran
    /// over a proper extension of the input's field.
    pub extended_algebra: Option<Dga>,
}

fn route_solve(system: &PolySystem, config: &SolveConfig) -> Result<SolveOutcome, MasseyError> {
    if system.is_linear() {
        solve::solve_linear(system)
    } else {
        Ok(solve::eliminate_and_decide(system, config))
    }
}

fn witness_map(
    registry: &ParamRegistry,
    assignment: &BTreeMap<ParamId, FieldElement>,
) -> BTreeMap<String, FieldElement> {
    assignment
        .iter()
        .map(|(id, v)| (registry.name(*id).to_string(), v.clone()))
        .collect()
}

/// Decides well-definedness and triviality of ⟨z_1, …, z_n⟩ over `field`,
/// which is either the algebra's own field or a quadratic extension of it
/// (classes are embedded along the inclusion).
pub fn decide(
    dga: &Dga,
    classes: &[CohomologyClass],
    field: &FieldDescriptor,
) -> Result<MasseyOutcome, MasseyError> {
    decide_with_options(dga, classes, field, &DecideOptions::default())
}

pub fn decide_with_options(
    dga: &Dga,
    classes: &[CohomologyClass],
    field: &FieldDescriptor,
    options: &DecideOptions,
) -> Result<MasseyOutcome, MasseyError> {
    let problem = generic_defining_system(dga, classes, options)?;
    if field == dga.descriptor() {
        decide_problem(dga, &problem, options)
    } else if dga.descriptor().embeds_into(field) {
        let extended = constructions::extend_scalars(dga, field)?;
        let embedded = problem.embed(&extended)?;
        let mut outcome = decide_problem(&extended, &embedded, options)?;
        outcome.extended_algebra = Some(extended);
        Ok(outcome)
    } else {
        Err(MasseyError::FieldMismatch {
            left: dga.descriptor().to_string(),
            right: field.to_string(),
        })
    }
}

fn exhausted_report(system: &PolySystem, reduced: &solve::ReducedSystem, what: &str) -> ObstructionReport {
    ObstructionReport {
        kind: "undecided".to_string(),
        equation: None,
        detail: format!("{what}: the elimination ladder exhausted its budget"),
        reduced_system: reduced
            .equations
            .iter()
            .map(|p| format!("{} = 0", p.display(&system.registry)))
            .collect(),
    }
}

fn certificate_report(system: &PolySystem, cert: &NoSolutionCertificate) -> ObstructionReport {
    let (kind, equation, detail) = describe_certificate(system, cert);
    ObstructionReport {
        kind,
        equation,
        detail,
        reduced_system: Vec::new(),
    }
}

fn decide_problem(
    dga: &Dga,
    problem: &GenericMasseyProblem,
    options: &DecideOptions,
) -> Result<MasseyOutcome, MasseyError> {
    match route_solve(&problem.well_definedness, &options.solve)? {
        SolveOutcome::NoSolution(cert) => Ok(MasseyOutcome {
            well_defined: false,
            trivial: Triviality::No,
            witness: None,
            obstruction: Some(certificate_report(&problem.well_definedness, &cert)),
            certificate: Some(cert),
            witness_system: None,
            extended_algebra: None,
        }),
        SolveOutcome::Unknown(reduced) => Ok(MasseyOutcome {
            // undecided overall; reported through trivial = Unknown
            well_defined: false,
            trivial: Triviality::Unknown,
            witness: None,
            obstruction: Some(exhausted_report(
                &problem.well_definedness,
                &reduced,
                "well-definedness undecided",
            )),
            certificate: None,
            witness_system: None,
            extended_algebra: None,
        }),
        SolveOutcome::Solution(_) => match route_solve(&problem.triviality, &options.solve)? {
            SolveOutcome::Solution(assignment) => {
                let (ds, rep) = problem.specialize(dga, &assignment)?;
                let exact = rep.is_zero() || dga.is_exact(&rep)?;
                if !exact {
                    return Err(MasseyError::Internal(
                        "triviality witness produced a non-exact representative".into(),
                    ));
                }
                Ok(MasseyOutcome {
                    well_defined: true,
                    trivial: Triviality::Yes,
                    witness: Some(witness_map(&problem.registry, &assignment)),
                    obstruction: None,
                    certificate: None,
                    witness_system: Some(ds),
                    extended_algebra: None,
                })
            }
            SolveOutcome::NoSolution(cert) => Ok(MasseyOutcome {
                well_defined: true,
                trivial: Triviality::No,
                witness: None,
                obstruction: Some(certificate_report(&problem.triviality, &cert)),
                certificate: Some(cert),
                witness_system: None,
                extended_algebra: None,
            }),
            SolveOutcome::Unknown(reduced) => Ok(MasseyOutcome {
                well_defined: true,
                trivial: Triviality::Unknown,
                witness: None,
                obstruction: Some(exhausted_report(
                    &problem.triviality,
                    &reduced,
                    "triviality undecided",
                )),
                certificate: None,
                witness_system: None,
                extended_algebra: None,
            }),
        },
    }
}

// ----- triple products as a single coset -----

/// Basis of the subspace z₁·H + H·z₃ in the target degree of a triple
/// product; the product is trivial exactly when its value lies here.
pub struct IndeterminacySpace {
    pub degree: u32,
    pub basis: Vec<CohomologyClass>,
}

impl IndeterminacySpace {
    pub fn contains(&self, dga: &Dga, class: &CohomologyClass) -> bool {
        if class.degree != self.degree {
            return false;
        }
        let dim = dga.cohomology_dim(self.degree);
        let mut span = SpanBuilder::new(dim, dga.descriptor());
        for b in &self.basis {
            span.insert(&b.coords);
        }
        span.contains(&class.coords)
    }
}

/// The triple product as a single class modulo its indeterminacy. Requires
/// z₁z₂ = 0 and z₂z₃ = 0 in cohomology.
pub fn triple_value(
    dga: &Dga,
    z1: &CohomologyClass,
    z2: &CohomologyClass,
    z3: &CohomologyClass,
) -> Result<(CohomologyClass, IndeterminacySpace), MasseyError> {
    let (d1, d2, d3) = (z1.degree, z2.degree, z3.degree);
    let target = d1 + d2 + d3 - 1;
    let rep1 = dga.representative(z1);
    let rep2 = dga.representative(z2);
    let rep3 = dga.representative(z3);

    let p12 = dga.scale_int(&dga.mul(&rep1, &rep2)?, sign_of_degree(d1));
    let a12 = dga.primitive(&p12).map_err(|_| {
        MasseyError::NotWellDefined("z1·z2 is not trivial in cohomology".into())
    })?;
    let p23 = dga.scale_int(&dga.mul(&rep2, &rep3)?, sign_of_degree(d2));
    let a23 = dga.primitive(&p23).map_err(|_| {
        MasseyError::NotWellDefined("z2·z3 is not trivial in cohomology".into())
    })?;

    let rep = representative_from_primitives(dga, &rep1, &rep3, &a12, &a23, d1, d2)?;
    let value = dga.class_of_in_degree(&rep, target)?;

    let mut basis = Vec::new();
    let mut span = SpanBuilder::new(dga.cohomology_dim(target), dga.descriptor());
    if target >= d1 {
        for h in dga.cohomology_basis(target - d1) {
            let prod = dga.cup(z1, &h)?;
            if !prod.is_zero() && span.insert(&prod.coords) {
                basis.push(prod);
            }
        }
    }
    if target >= d3 {
        for h in dga.cohomology_basis(target - d3) {
            let prod = dga.cup(&h, z3)?;
            if !prod.is_zero() && span.insert(&prod.coords) {
                basis.push(prod);
            }
        }
    }
    Ok((value, IndeterminacySpace { degree: target, basis }))
}

/// (−1)^{|z1|} rep1·a23 + (−1)^{|a12|} a12·rep3.
fn representative_from_primitives(
    dga: &Dga,
    rep1: &Element,
    rep3: &Element,
    a12: &Element,
    a23: &Element,
    d1: u32,
    d2: u32,
) -> Result<Element, MasseyError> {
    let t1 = dga.scale_int(&dga.mul(rep1, a23)?, sign_of_degree(d1));
    let t2 = dga.scale_int(&dga.mul(a12, rep3)?, sign_of_degree(d1 + d2 + 1));
    Ok(dga.add(&t1, &t2))
}

/// The single class z₀·⟨z₁, z₂, z₃⟩, defined when z₀ annihilates z₁ and z₃;
/// independence of the defining system is asserted by recomputing with a
/// perturbed one.
pub fn taylor_product(
    dga: &Dga,
    z0: &CohomologyClass,
    z1: &CohomologyClass,
    z2: &CohomologyClass,
    z3: &CohomologyClass,
) -> Result<CohomologyClass, MasseyError> {
    if !dga.cup(z0, z1)?.is_zero() || !dga.cup(z0, z3)?.is_zero() {
        return Err(MasseyError::InvalidInput(
            "z0 must annihilate z1 and z3 for the product to be single-valued".into(),
        ));
    }
    if z0.is_zero() {
        return Ok(dga.zero_class(z0.degree + z1.degree + z2.degree + z3.degree - 1));
    }
    let (d1, d2, _d3) = (z1.degree, z2.degree, z3.degree);
    let rep0 = dga.representative(z0);
    let rep1 = dga.representative(z1);
    let rep2 = dga.representative(z2);
    let rep3 = dga.representative(z3);
    let p12 = dga.scale_int(&dga.mul(&rep1, &rep2)?, sign_of_degree(d1));
    let a12 = dga.primitive(&p12).map_err(|_| {
        MasseyError::NotWellDefined("z1·z2 is not trivial in cohomology".into())
    })?;
    let p23 = dga.scale_int(&dga.mul(&rep2, &rep3)?, sign_of_degree(d2));
    let a23 = dga.primitive(&p23).map_err(|_| {
        MasseyError::NotWellDefined("z2·z3 is not trivial in cohomology".into())
    })?;

    let target = z0.degree + z1.degree + z2.degree + z3.degree - 1;
    let product_class = |a12: &Element, a23: &Element| -> Result<CohomologyClass, MasseyError> {
        let rep = representative_from_primitives(dga, &rep1, &rep3, a12, a23, d1, d2)?;
        let with_z0 = dga.mul(&rep0, &rep)?;
        dga.class_of_in_degree(&with_z0, target)
    };
    let first = product_class(&a12, &a23)?;

    // a second defining system, perturbing each primitive by a closed element
    let perturb = |x: &Element, degree: u32| -> Element {
        let split = dga.splitting(degree);
        if split.dim_cohomology() > 0 {
            let v = dga.from_coords(degree, split.cohomology_vector(0));
            dga.add(x, &v)
        } else if split.dim_image() > 0 {
            let v = dga.from_coords(degree, split.image_vector(0));
            dga.add(x, &v)
        } else {
            x.clone()
        }
    };
    let second = product_class(
        &perturb(&a12, d1 + d2 - 1),
        &perturb(&a23, d2 + z3.degree - 1),
    )?;
    if first != second {
        return Err(MasseyError::Internal(
            "taylor product depends on the defining system despite the annihilation hypothesis"
                .into(),
        ));
    }
    Ok(first)
}
