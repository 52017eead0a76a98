//! Exact solvability decisions for the constraint systems the Massey engine
//! emits.
//!
//! Two routes: [`solve_linear`] is plain Gaussian elimination with a
//! Farkas-style multiplier certificate on failure. [`eliminate_and_decide`]
//! is a ladder — substitute variables that occur linearly with a constant
//! coefficient, decide residual univariates of degree ≤ 2 by square roots in
//! the field, and fall back to a bounded small-height search. The search
//! never claims NoSolution; when everything is exhausted the reduced system
//! is returned as Unknown. Every Solution is re-substituted into the original
//! system before it is returned, and every NoSolution certificate replays
//! from the input by [`verify_certificate`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::MasseyError;
use crate::field::{FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::poly::{ParamId, ParamRegistry, Poly};

/// A system of polynomial equations `p = 0` over one field.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub descriptor: FieldDescriptor,
    pub registry: Arc<ParamRegistry>,
    pub equations: Vec<Poly>,
}

impl PolySystem {
    pub fn new(
        descriptor: FieldDescriptor,
        registry: Arc<ParamRegistry>,
        equations: Vec<Poly>,
    ) -> Self {
        PolySystem {
            descriptor,
            registry,
            equations,
        }
    }

    pub fn max_total_degree(&self) -> u32 {
        self.equations
            .iter()
            .map(|p| p.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_linear(&self) -> bool {
        self.max_total_degree() <= 1
    }

    /// Variables appearing in the equations, ascending.
    pub fn variables(&self) -> Vec<ParamId> {
        let mut set = std::collections::BTreeSet::new();
        for e in &self.equations {
            set.extend(e.vars());
        }
        set.into_iter().collect()
    }

    pub fn embed(&self, target: &FieldDescriptor) -> Result<PolySystem, MasseyError> {
        Ok(PolySystem {
            descriptor: target.clone(),
            registry: Arc::clone(&self.registry),
            equations: self
                .equations
                .iter()
                .map(|p| p.embed(target))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn display_equations(&self) -> Vec<String> {
        self.equations
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| format!("{} = 0", p.display(&self.registry)))
            .collect()
    }

    fn check_assignment(&self, assignment: &BTreeMap<ParamId, FieldElement>) -> bool {
        self.equations.iter().all(|p| p.eval(assignment).is_zero())
    }

    /// The all-zero assignment over every registry parameter.
    pub fn zero_assignment(&self) -> BTreeMap<ParamId, FieldElement> {
        self.registry
            .ids()
            .map(|id| (id, self.descriptor.zero()))
            .collect()
    }
}

/// Why a system has no solution; replayable against the input system.
#[derive(Clone, Debug)]
pub enum NoSolutionCertificate {
    /// Multipliers λ with Σ λ_i·eq_i equal to the stated nonzero constant.
    LinearCombination {
        multipliers: Vec<FieldElement>,
        value: FieldElement,
    },
    /// After applying the recorded substitutions to the input, the equation
    /// at `equation_index` reduces to the stated obstruction.
    Derived {
        substitutions: Vec<(ParamId, Poly)>,
        equation_index: usize,
        kind: DerivedObstruction,
    },
}

#[derive(Clone, Debug)]
pub enum DerivedObstruction {
    /// The equation reduces to a nonzero constant.
    Constant { value: FieldElement },
    /// The equation reduces to the monic univariate t² + c1·t + c0 with no
    /// root in the field.
    UnivariateNoRoot {
        var: ParamId,
        c0: FieldElement,
        c1: FieldElement,
    },
}

/// The state the ladder ran aground on, for honest Unknown reporting.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub substitutions: Vec<(ParamId, Poly)>,
    pub equations: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solution(BTreeMap<ParamId, FieldElement>),
    NoSolution(NoSolutionCertificate),
    Unknown(ReducedSystem),
}

impl SolveOutcome {
    pub fn is_solution(&self) -> bool {
        matches!(self, SolveOutcome::Solution(_))
    }
    pub fn is_no_solution(&self) -> bool {
        matches!(self, SolveOutcome::NoSolution(_))
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, SolveOutcome::Unknown(_))
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Bound on numerator/denominator size in the witness search.
    pub search_height: u32,
    /// Bound on the number of candidate evaluations in the search.
    pub search_budget: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            search_height: 12,
            search_budget: 50_000,
        }
    }
}

// ----- linear route -----

/// Exact Gaussian elimination for systems of degree ≤ 1. A Solution sets the
/// free variables to zero; NoSolution carries the multiplier row showing
/// 0 = 1.
pub fn solve_linear(system: &PolySystem) -> Result<SolveOutcome, MasseyError> {
    if !system.is_linear() {
        return Err(MasseyError::InvalidInput(
            "solve_linear requires a linear system".into(),
        ));
    }
    let vars = system.variables();
    let col_of: BTreeMap<ParamId, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n_eq = system.equations.len();
    let n_var = vars.len();
    let desc = &system.descriptor;

    // [A | b | I] — the identity block tracks row operations for the
    // multiplier certificate
    let mut m = Matrix::zero(n_eq, n_var + 1 + n_eq, desc);
    for (r, eq) in system.equations.iter().enumerate() {
        for v in eq.vars() {
            let (coeff, _) = eq.split_linear(v).expect("linear equation");
            *m.at_mut(r, col_of[&v]) = coeff
                .as_constant()
                .expect("coefficients of a linear system are constants");
        }
        let constant = eq.substitute_all_zero(&vars);
        *m.at_mut(r, n_var) = constant;
        *m.at_mut(r, n_var + 1 + r) = desc.one();
    }

    // eliminate only over the variable and constant columns
    let rref = {
        // restrict pivot search to the first n_var + 1 columns by zeroing is
        // not possible with the shared rref; do elimination manually
        let mut mm = m.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..=n_var {
            if row == mm.rows() {
                break;
            }
            let Some(pr) = (row..mm.rows()).find(|&r| !mm.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..mm.cols() {
                    let a = mm.at(row, c).clone();
                    let b = mm.at(pr, c).clone();
                    *mm.at_mut(row, c) = b;
                    *mm.at_mut(pr, c) = a;
                }
            }
            let inv = mm.at(row, col).inverse().expect("pivot nonzero");
            for c in 0..mm.cols() {
                let v = mm.at(row, c) * &inv;
                *mm.at_mut(row, c) = v;
            }
            for r in 0..mm.rows() {
                if r != row && !mm.at(r, col).is_zero() {
                    let f = mm.at(r, col).clone();
                    for c in 0..mm.cols() {
                        let v = mm.at(r, c) - &(&f * mm.at(row, c));
                        *mm.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (mm, pivots)
    };
    let (reduced, pivots) = rref;

    if let Some(pos) = pivots.iter().position(|&p| p == n_var) {
        // inconsistent: that pivot row reads 0·vars = 1
        let multipliers: Vec<FieldElement> = (0..n_eq)
            .map(|j| reduced.at(pos, n_var + 1 + j).clone())
            .collect();
        let cert = NoSolutionCertificate::LinearCombination {
            multipliers,
            value: desc.one(),
        };
        debug_assert!(verify_certificate(system, &cert));
        return Ok(SolveOutcome::NoSolution(cert));
    }

    let mut assignment = system.zero_assignment();
    for (i, &p) in pivots.iter().enumerate() {
        // row i: var(p) + Σ free = constant  ⇒ with frees at zero,
        // var(p) = -constant? The augmented column already holds the
        // constant moved to the left-hand side: eq = Σ a·x + b = 0, so
        // x_pivot = -b.
        let b = reduced.at(i, n_var).clone();
        assignment.insert(vars[p], -b);
    }
    if !system.check_assignment(&assignment) {
        return Err(MasseyError::Internal(
            "linear solution failed re-substitution".into(),
        ));
    }
    Ok(SolveOutcome::Solution(assignment))
}

/// Dimension of the affine solution space over the variables that appear;
/// None when the system is inconsistent.
pub fn linear_nullity(system: &PolySystem) -> Result<Option<usize>, MasseyError> {
    if !system.is_linear() {
        return Err(MasseyError::InvalidInput(
            "linear_nullity requires a linear system".into(),
        ));
    }
    match solve_linear(system)? {
        SolveOutcome::NoSolution(_) => Ok(None),
        _ => {
            let vars = system.variables();
            let desc = &system.descriptor;
            let mut m = Matrix::zero(system.equations.len(), vars.len(), desc);
            for (r, eq) in system.equations.iter().enumerate() {
                for (c, v) in vars.iter().enumerate() {
                    if let Some((coeff, _)) = eq.split_linear(*v) {
                        *m.at_mut(r, c) = coeff.as_constant().expect("constant coefficient");
                    }
                }
            }
            Ok(Some(vars.len() - m.rank()))
        }
    }
}

impl Poly {
    /// The value at the origin of the given variables (i.e. the constant
    /// term for a linear polynomial).
    fn substitute_all_zero(&self, vars: &[ParamId]) -> FieldElement {
        let assignment: BTreeMap<ParamId, FieldElement> = vars
            .iter()
            .map(|&v| (v, self.descriptor().zero()))
            .collect();
        self.eval(&assignment)
    }
}

// ----- elimination ladder -----

struct Ladder<'a> {
    system: &'a PolySystem,
    eqs: Vec<Poly>,
    subs: Vec<(ParamId, Poly)>,
    config: &'a SolveConfig,
    budget: u64,
}

pub fn eliminate_and_decide(system: &PolySystem, config: &SolveConfig) -> SolveOutcome {
    // the all-zero specialization first: it is the canonical uniform witness
    let zero = system.zero_assignment();
    if system.check_assignment(&zero) {
        return SolveOutcome::Solution(zero);
    }
    let mut ladder = Ladder {
        system,
        eqs: system.equations.clone(),
        subs: Vec::new(),
        config,
        budget: config.search_budget,
    };
    let outcome = ladder.run();
    if let SolveOutcome::Solution(a) = &outcome {
        assert!(
            system.check_assignment(a),
            "solver invariant: solutions re-substitute to zero"
        );
    }
    if let SolveOutcome::NoSolution(cert) = &outcome {
        assert!(
            verify_certificate(system, cert),
            "solver invariant: certificates replay"
        );
    }
    outcome
}

enum StepResult {
    Progress,
    Stuck,
    Failed(usize, DerivedObstruction),
}

impl<'a> Ladder<'a> {
    fn desc(&self) -> &FieldDescriptor {
        &self.system.descriptor
    }

    fn run(&mut self) -> SolveOutcome {
        loop {
            // constant contradictions
            for (i, eq) in self.eqs.iter().enumerate() {
                if let Some(c) = eq.as_constant() {
                    if !c.is_zero() {
                        return self.fail(i, DerivedObstruction::Constant { value: c });
                    }
                }
            }
            if self.eqs.iter().all(|e| e.is_zero()) {
                return self.finish_with_free_zero();
            }
            match self.substitution_step() {
                StepResult::Progress => continue,
                StepResult::Failed(i, k) => return self.fail(i, k),
                StepResult::Stuck => {}
            }
            match self.univariate_step() {
                StepResult::Progress => continue,
                StepResult::Failed(i, k) => return self.fail(i, k),
                StepResult::Stuck => {}
            }
            return self.search();
        }
    }

    fn fail(&self, equation_index: usize, kind: DerivedObstruction) -> SolveOutcome {
        SolveOutcome::NoSolution(NoSolutionCertificate::Derived {
            substitutions: self.subs.clone(),
            equation_index,
            kind,
        })
    }

    fn apply_substitution(&mut self, var: ParamId, value: Poly) {
        for eq in &mut self.eqs {
            *eq = eq.substitute(var, &value);
        }
        self.subs.push((var, value));
    }

    /// Substitutes the first variable (ascending) that occurs linearly with a
    /// nonzero constant coefficient in some equation (by index).
    fn substitution_step(&mut self) -> StepResult {
        let mut vars = std::collections::BTreeSet::new();
        for eq in &self.eqs {
            vars.extend(eq.vars());
        }
        for v in vars {
            for i in 0..self.eqs.len() {
                let eq = &self.eqs[i];
                if eq.is_zero() {
                    continue;
                }
                let Some((coeff, rest)) = eq.split_linear(v) else {
                    continue;
                };
                let Some(c) = coeff.as_constant() else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                let inv = c.inverse().expect("nonzero constant");
                let value = rest.scale(&-inv);
                self.apply_substitution(v, value);
                return StepResult::Progress;
            }
        }
        StepResult::Stuck
    }

    /// Decides the first equation that is univariate of degree two, by the
    /// quadratic formula with exact square roots in the field.
    fn univariate_step(&mut self) -> StepResult {
        for i in 0..self.eqs.len() {
            let eq = &self.eqs[i];
            if eq.is_zero() {
                continue;
            }
            let vars: Vec<ParamId> = eq.vars().into_iter().collect();
            if vars.len() != 1 {
                continue;
            }
            let v = vars[0];
            let Some([c0, c1, c2]) = eq.univariate_coeffs(v) else {
                continue;
            };
            if c2.is_zero() {
                // degree ≤ 1 univariate is handled by the substitution step
                continue;
            }
            // normalize monic: t² + b t + a
            let inv = c2.inverse().expect("leading coefficient nonzero");
            let a = &c0 * &inv;
            let b = &c1 * &inv;
            // discriminant b² − 4a
            let four = self.desc().from_integer(4);
            let disc = &(&b * &b) - &(&four * &a);
            match disc.sqrt() {
                Some(r) => {
                    let two_inv = self
                        .desc()
                        .from_integer(2)
                        .inverse()
                        .expect("2 is invertible");
                    let root = &(&(-&b) + &r) * &two_inv;
                    self.apply_substitution(v, Poly::constant(root));
                    return StepResult::Progress;
                }
                None => {
                    return StepResult::Failed(
                        i,
                        DerivedObstruction::UnivariateNoRoot { var: v, c0: a, c1: b },
                    );
                }
            }
        }
        StepResult::Stuck
    }

    fn finish_with_free_zero(&self) -> SolveOutcome {
        let mut assignment = self.system.zero_assignment();
        // later substitutions depend only on still-free variables; resolve
        // them first, then walk back
        for (v, p) in self.subs.iter().rev() {
            let value = p.eval(&assignment);
            assignment.insert(*v, value);
        }
        SolveOutcome::Solution(assignment)
    }

    /// Bounded small-height witness search on the remaining variables. Never
    /// produces NoSolution.
    fn search(&mut self) -> SolveOutcome {
        let mut vars = std::collections::BTreeSet::new();
        for eq in &self.eqs {
            vars.extend(eq.vars());
        }
        let Some(&v) = vars.iter().next() else {
            return SolveOutcome::Unknown(ReducedSystem {
                substitutions: self.subs.clone(),
                equations: self.eqs.iter().filter(|e| !e.is_zero()).cloned().collect(),
            });
        };
        for value in candidate_values(self.desc(), self.config.search_height) {
            if self.budget == 0 {
                break;
            }
            self.budget -= 1;
            let mut child = Ladder {
                system: self.system,
                eqs: self
                    .eqs
                    .iter()
                    .map(|e| e.substitute(v, &Poly::constant(value.clone())))
                    .collect(),
                subs: {
                    let mut s = self.subs.clone();
                    s.push((v, Poly::constant(value.clone())));
                    s
                },
                config: self.config,
                budget: self.budget,
            };
            let outcome = child.run();
            self.budget = child.budget;
            match outcome {
                SolveOutcome::Solution(a) => return SolveOutcome::Solution(a),
                // a failure under a guessed value proves nothing globally
                SolveOutcome::NoSolution(_) | SolveOutcome::Unknown(_) => continue,
            }
        }
        SolveOutcome::Unknown(ReducedSystem {
            substitutions: self.subs.clone(),
            equations: self.eqs.iter().filter(|e| !e.is_zero()).cloned().collect(),
        })
    }
}

/// Candidate field values ordered by height: 0, then ±p/q with
/// max(|p|, q) = h for h = 1..=H; over a quadratic extension, a + b√θ runs
/// over pairs with max height h.
fn candidate_values(desc: &FieldDescriptor, height: u32) -> Vec<FieldElement> {
    use num::BigInt;
    use num::BigRational;
    let mut rationals = vec![BigRational::from_integer(BigInt::from(0))];
    for h in 1..=(height as i64) {
        let mut level = Vec::new();
        // p/q with max(|p|, q) == h
        for p in [h, -h] {
            for q in 1..=h {
                let r = BigRational::new(BigInt::from(p), BigInt::from(q));
                if r.numer().magnitude() <= &num::BigUint::from(h as u64)
                    && !level.contains(&r)
                    && !rationals.contains(&r)
                {
                    level.push(r);
                }
            }
        }
        for q in [h] {
            for p in -(h - 1)..=(h - 1) {
                if p == 0 {
                    continue;
                }
                let r = BigRational::new(BigInt::from(p), BigInt::from(q));
                if !level.contains(&r) && !rationals.contains(&r) {
                    level.push(r);
                }
            }
        }
        rationals.extend(level);
    }
    match desc.theta() {
        None => rationals
            .into_iter()
            .map(|q| desc.from_rational(q))
            .collect(),
        Some(_) => {
            // pairs (a, b) ordered by combined height; pure values first
            let mut out = Vec::new();
            for (i, a) in rationals.iter().enumerate() {
                for (j, b) in rationals.iter().enumerate() {
                    if i + j <= rationals.len() {
                        out.push((i + j, desc.element(a.clone(), b.clone()).expect("valid pair")));
                    }
                }
            }
            out.sort_by_key(|(w, _)| *w);
            out.into_iter().map(|(_, e)| e).collect()
        }
    }
}

// ----- certificate replay -----

/// Re-derives a NoSolution certificate from the input system.
pub fn verify_certificate(system: &PolySystem, cert: &NoSolutionCertificate) -> bool {
    match cert {
        NoSolutionCertificate::LinearCombination { multipliers, value } => {
            if multipliers.len() != system.equations.len() || value.is_zero() {
                return false;
            }
            let mut combo = Poly::zero(&system.descriptor);
            for (l, eq) in multipliers.iter().zip(system.equations.iter()) {
                combo = combo.add(&eq.scale(l));
            }
            combo.as_constant().map_or(false, |c| c == *value)
        }
        NoSolutionCertificate::Derived {
            substitutions,
            equation_index,
            kind,
        } => {
            let Some(eq) = system.equations.get(*equation_index) else {
                return false;
            };
            let mut reduced = eq.clone();
            for (v, p) in substitutions {
                reduced = reduced.substitute(*v, p);
            }
            match kind {
                DerivedObstruction::Constant { value } => {
                    !value.is_zero() && reduced.as_constant().map_or(false, |c| c == *value)
                }
                DerivedObstruction::UnivariateNoRoot { var, c0, c1 } => {
                    let Some([r0, r1, r2]) = reduced.univariate_coeffs(*var) else {
                        return false;
                    };
                    if r2.is_zero() {
                        return false;
                    }
                    let inv = r2.inverse().expect("nonzero");
                    if &(&r0 * &inv) != c0 || &(&r1 * &inv) != c1 {
                        return false;
                    }
                    // replay the no-root decision on t² + c1 t + c0
                    let four = system.descriptor.from_integer(4);
                    let disc = &(c1 * c1) - &(&four * c0);
                    disc.sqrt().is_none()
                }
            }
        }
    }
}

/// Human-readable rendering of a certificate.
pub fn describe_certificate(
    system: &PolySystem,
    cert: &NoSolutionCertificate,
) -> (String, Option<String>, String) {
    let reg = &system.registry;
    match cert {
        NoSolutionCertificate::LinearCombination { value, .. } => (
            "inconsistent_linear_system".to_string(),
            None,
            format!(
                "a linear combination of the equations reduces to {} = 0",
                value
            ),
        ),
        NoSolutionCertificate::Derived {
            equation_index,
            kind,
            substitutions,
        } => match kind {
            DerivedObstruction::Constant { value } => (
                "inconsistent_equation".to_string(),
                Some(system.equations[*equation_index].display(reg)),
                format!(
                    "after {} substitutions, equation {} reduces to {} = 0",
                    substitutions.len(),
                    equation_index + 1,
                    value
                ),
            ),
            DerivedObstruction::UnivariateNoRoot { var, c0, c1 } => {
                let d = &system.descriptor;
                let t = Poly::var(*var, d);
                let monic = t
                    .mul(&t)
                    .add(&t.scale(c1))
                    .add(&Poly::constant(c0.clone()));
                let four = system.descriptor.from_integer(4);
                let disc = &(c1 * c1) - &(&four * c0);
                (
                    "univariate_no_root".to_string(),
                    Some(format!("{} = 0", monic.display(reg))),
                    format!(
                        "the discriminant {disc} is not a square in {}",
                        system.descriptor
                    ),
                )
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_rational;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn gauss() -> FieldDescriptor {
        FieldDescriptor::quadratic(parse_rational("-1").unwrap()).unwrap()
    }

    struct Vars {
        reg: Arc<ParamRegistry>,
        ids: Vec<ParamId>,
    }

    fn vars(n: usize) -> Vars {
        let mut reg = ParamRegistry::new();
        let ids = (0..n).map(|_| reg.fresh()).collect();
        Vars {
            reg: Arc::new(reg),
            ids,
        }
    }

    fn v(desc: &FieldDescriptor, id: ParamId) -> Poly {
        Poly::var(id, desc)
    }

    fn c(desc: &FieldDescriptor, n: i64) -> Poly {
        Poly::constant(desc.from_integer(n))
    }

    #[test]
    fn homogeneous_linear_system_solved_at_zero() {
        let d = q();
        let vs = vars(4);
        let [k4, k6, k5, k7] = [vs.ids[0], vs.ids[1], vs.ids[2], vs.ids[3]];
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![
                v(&d, k4).add(&v(&d, k6)),
                v(&d, k5).add(&v(&d, k7)),
            ],
        );
        let SolveOutcome::Solution(a) = solve_linear(&sys).unwrap() else {
            panic!("expected a solution");
        };
        for id in vs.ids {
            assert!(a[&id].is_zero());
        }
    }

    #[test]
    fn inconsistent_linear_system_certified() {
        let d = q();
        let vs = vars(1);
        let a = vs.ids[0];
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![
                v(&d, a).sub(&c(&d, 1)),
                v(&d, a).sub(&c(&d, 2)),
            ],
        );
        let SolveOutcome::NoSolution(cert) = solve_linear(&sys).unwrap() else {
            panic!("expected no solution");
        };
        assert!(verify_certificate(&sys, &cert));
    }

    #[test]
    fn quadruple_relations_over_q_and_gauss() {
        // {k1 + k3 = 0, k1·k3 = 1}
        for (desc, solvable) in [(q(), false), (gauss(), true)] {
            let vs = vars(2);
            let (k1, k3) = (vs.ids[0], vs.ids[1]);
            let sys = PolySystem::new(
                desc.clone(),
                Arc::clone(&vs.reg),
                vec![
                    v(&desc, k1).add(&v(&desc, k3)),
                    v(&desc, k1).mul(&v(&desc, k3)).sub(&c(&desc, 1)),
                ],
            );
            let out = eliminate_and_decide(&sys, &SolveConfig::default());
            if solvable {
                let SolveOutcome::Solution(a) = out else {
                    panic!("expected a solution over {desc}");
                };
                // k1 = -k3 and k1² = -1
                assert_eq!(a[&k1], -a[&k3].clone());
                let sq = &a[&k1] * &a[&k1];
                assert_eq!(sq, desc.from_integer(-1));
            } else {
                let SolveOutcome::NoSolution(cert) = out else {
                    panic!("expected no solution over {desc}");
                };
                assert!(verify_certificate(&sys, &cert));
                match cert {
                    NoSolutionCertificate::Derived {
                        kind: DerivedObstruction::UnivariateNoRoot { c0, c1, .. },
                        ..
                    } => {
                        // t² + 1 = 0
                        assert_eq!(c0, desc.from_integer(1));
                        assert!(c1.is_zero());
                    }
                    other => panic!("unexpected certificate {other:?}"),
                }
            }
        }
    }

    #[test]
    fn sqrt_two_witness() {
        let d = FieldDescriptor::quadratic(parse_rational("2").unwrap()).unwrap();
        let vs = vars(1);
        let k = vs.ids[0];
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![v(&d, k).mul(&v(&d, k)).sub(&c(&d, 2))],
        );
        let SolveOutcome::Solution(a) = eliminate_and_decide(&sys, &SolveConfig::default())
        else {
            panic!("expected a solution");
        };
        assert_eq!(a[&k], d.sqrt_theta().unwrap());
    }

    #[test]
    fn zero_witness_preferred() {
        let d = q();
        let vs = vars(3);
        let (a, b, cc) = (vs.ids[0], vs.ids[1], vs.ids[2]);
        // a·b + c² = 0 admits the zero witness
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![v(&d, a).mul(&v(&d, b)).add(&v(&d, cc).mul(&v(&d, cc)))],
        );
        let SolveOutcome::Solution(sol) = eliminate_and_decide(&sys, &SolveConfig::default())
        else {
            panic!("expected a solution");
        };
        for id in [a, b, cc] {
            assert!(sol[&id].is_zero());
        }
    }

    #[test]
    fn search_finds_nonzero_witness() {
        let d = q();
        let vs = vars(2);
        let (p, r) = (vs.ids[0], vs.ids[1]);
        // {p² + r² = 2, p·r = 1} has the solution p = r = ±1 but no linear or
        // univariate step applies at the start
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![
                v(&d, p)
                    .mul(&v(&d, p))
                    .add(&v(&d, r).mul(&v(&d, r)))
                    .sub(&c(&d, 2)),
                v(&d, p).mul(&v(&d, r)).sub(&c(&d, 1)),
            ],
        );
        let SolveOutcome::Solution(sol) = eliminate_and_decide(&sys, &SolveConfig::default())
        else {
            panic!("expected a solution");
        };
        assert_eq!(&sol[&p] * &sol[&r], d.one());
    }

    #[test]
    fn unknown_is_honest() {
        let d = q();
        let vs = vars(2);
        let (p, r) = (vs.ids[0], vs.ids[1]);
        // p² + r² + 1 = 0 has no rational solution, but the ladder cannot
        // certify that; it must answer Unknown, not NoSolution
        let sys = PolySystem::new(
            d.clone(),
            Arc::clone(&vs.reg),
            vec![v(&d, p)
                .mul(&v(&d, p))
                .add(&v(&d, r).mul(&v(&d, r)))
                .add(&c(&d, 1))],
        );
        let out = eliminate_and_decide(
            &sys,
            &SolveConfig {
                search_height: 3,
                search_budget: 500,
            },
        );
        assert!(out.is_unknown());
    }

    #[test]
    fn lemma_style_solution_space() {
        // the degree-one product relations for fixed generic α: four linear
        // equations in β with a one-dimensional solution space
        let d = q();
        let mut reg = ParamRegistry::new();
        let b: Vec<ParamId> = (0..4).map(|_| reg.fresh()).collect();
        let reg = Arc::new(reg);
        let alpha = [3i64, -2, 5, 7];
        let bp = |i: usize| v(&d, b[i]);
        let ca = |i: usize| c(&d, alpha[i]);
        let eq1 = ca(0)
            .mul(&bp(2))
            .sub(&ca(2).mul(&bp(0)))
            .add(&ca(1).mul(&bp(3)))
            .sub(&ca(3).mul(&bp(1)));
        let eq2 = ca(0)
            .mul(&bp(3))
            .sub(&ca(3).mul(&bp(0)))
            .sub(&ca(1).mul(&bp(2)))
            .add(&ca(2).mul(&bp(1)));
        let eq3 = ca(0).mul(&bp(1)).sub(&ca(1).mul(&bp(0)));
        let eq4 = ca(2).mul(&bp(3)).sub(&ca(3).mul(&bp(2)));
        let sys = PolySystem::new(d.clone(), reg, vec![eq1, eq2, eq3, eq4]);
        assert_eq!(linear_nullity(&sys).unwrap(), Some(1));
    }
}
