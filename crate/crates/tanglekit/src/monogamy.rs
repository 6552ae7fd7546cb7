//! Monogamy constraints: CKW equality, the Osborne–Verstraete inequality, the
//! degree-4 and degree-8 sum rules, the combined two/three-tangle constraint,
//! the residual inequality beyond three-way correlations, and the
//! multipartite-entanglement criterion, assembled into structured reports.
//!
//! Checks whose terms contain best-found convex-roof values are three-valued:
//! pass, inconclusive, or violation. An upper bound on a three-tangle can
//! certify a pass of an inequality but never a violation, so such checks are
//! flagged `conservative` and a failing residual is reported as inconclusive.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::convexroof::{three_tangle_mixed, ConvexRoofConfig};
use crate::error::{Error, Result};
use crate::invariants::{
    concurrence, one_tangle, pair_invariants, three_tangle_pure, PairInvariants,
};
use crate::qstate::PureState;

/// Absolute tolerance for identity checks (double precision with polynomial
/// amplification up to degree 16).
pub const IDENTITY_TOL: f64 = 1e-8;
/// Tolerance for roof-free inequality checks.
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Tolerance for checks that involve best-found convex-roof values.
pub const ROOF_TOL: f64 = 1e-6;
/// Default threshold of the multipartite-entanglement criterion.
pub const CRITERION_THRESHOLD: f64 = 1e-9;

/// Three-valued outcome of a constraint check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Pass,
    /// Failed, but the check used convex-roof upper bounds, so a violation
    /// cannot be certified.
    Inconclusive,
    Violation,
}

/// One evaluated constraint.
#[derive(Clone, Debug)]
pub struct ConstraintVerdict {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub status: VerdictStatus,
    /// True when convex-roof upper bounds make the check one-sided.
    pub conservative: bool,
}

impl ConstraintVerdict {
    pub fn pass(&self) -> bool {
        self.status == VerdictStatus::Pass
    }

    fn identity(id: &'static str, lhs: f64, rhs: f64, tol: f64, conservative: bool) -> Self {
        let residual = lhs - rhs;
        let status = if residual.abs() <= tol {
            VerdictStatus::Pass
        } else if conservative {
            VerdictStatus::Inconclusive
        } else {
            VerdictStatus::Violation
        };
        Self { id, lhs, rhs, residual, status, conservative }
    }

    fn inequality(id: &'static str, lhs: f64, rhs: f64, tol: f64, conservative: bool) -> Self {
        let residual = lhs - rhs;
        let status = if residual >= -tol {
            VerdictStatus::Pass
        } else if conservative {
            VerdictStatus::Inconclusive
        } else {
            VerdictStatus::Violation
        };
        Self { id, lhs, rhs, residual, status, conservative }
    }

    /// Reported value without a pass/fail contract.
    fn informational(id: &'static str, lhs: f64, rhs: f64, conservative: bool) -> Self {
        Self { id, lhs, rhs, residual: lhs - rhs, status: VerdictStatus::Pass, conservative }
    }
}

/// Per-pair block of a tangle report.
#[derive(Clone, Debug)]
pub struct PairReport {
    /// Partner qubit position.
    pub j: usize,
    pub invariants: PairInvariants,
}

/// Per-triple block of a tangle report.
#[derive(Clone, Debug)]
pub struct TripleReport {
    pub j: usize,
    pub k: usize,
    /// Pure three-tangle for N = 3, best-found convex-roof upper bound
    /// otherwise.
    pub three_tangle: f64,
    pub conservative: bool,
    /// (restarts, iterations, converged) of the roof search when one ran.
    pub roof: Option<(usize, usize, bool)>,
}

/// Tangles of one focus qubit: one-tangle, all pair invariants, all triple
/// tangles.
#[derive(Clone, Debug)]
pub struct TangleReport {
    pub focus: usize,
    pub n_qubits: usize,
    pub one_tangle: f64,
    pub pairs: Vec<PairReport>,
    pub triples: Vec<TripleReport>,
    pub multipartite: MultipartiteCriterion,
}

/// Residuals of the degree-4 and degree-8 sum rules.
#[derive(Clone, Debug)]
pub struct SumRuleReport {
    /// `sum_j n4(rho_1j)`
    pub sum_n4: f64,
    /// `sum_j n4(rho_1j) - tau_1` (the summed coherences)
    pub x_sum: f64,
    /// `delta_1j = 4 n8(rho_1j) - 1/4 sum_{k != j} tau^2_{1|j|k}` per pair
    pub delta: Vec<(usize, f64)>,
    /// `Delta_1j = delta_1j + active chi_1j` per pair
    pub delta_with_chi: Vec<(usize, f64)>,
}

/// Outcome of the multipartite-entanglement criterion.
#[derive(Clone, Debug)]
pub struct MultipartiteCriterion {
    pub threshold: f64,
    /// `(j, flag)`: pair passes when both `n4 > threshold` and
    /// `2 n8 > threshold`.
    pub pairs: Vec<(usize, bool)>,
    /// Conjunction over all pairs.
    pub witnessed: bool,
}

/// Everything `full_report` produces: tangles, sum rules, verdicts.
#[derive(Clone, Debug)]
pub struct FullReport {
    pub tangles: TangleReport,
    pub sum_rules: SumRuleReport,
    pub verdicts: Vec<ConstraintVerdict>,
}

fn partners(n: usize, focus: usize) -> Vec<usize> {
    (1..=n).filter(|&q| q != focus).collect()
}

fn require_focus(state: &PureState, focus: usize, min_qubits: usize) -> Result<()> {
    let n = state.n_qubits();
    if focus < 1 || focus > n {
        return Err(Error::QubitOutOfRange { qubit: focus, n });
    }
    if n < min_qubits {
        return Err(Error::QubitCountOutOfRange { n, min: min_qubits, max: crate::qstate::MAX_QUBITS });
    }
    Ok(())
}

fn pair_invariants_for(state: &PureState, focus: usize, j: usize) -> Result<PairInvariants> {
    pair_invariants(&state.marginal(&[focus, j])?)
}

/// Three-tangle of the `(focus, j, k)` triple: the pure formula when the
/// state has exactly three qubits, a convex-roof upper bound on the marginal
/// otherwise.
fn triple_tangle(
    state: &PureState,
    focus: usize,
    j: usize,
    k: usize,
    roof: &ConvexRoofConfig,
    ordinal: u64,
) -> Result<TripleReport> {
    if state.n_qubits() == 3 {
        let value = three_tangle_pure(state, focus, j, k)?;
        Ok(TripleReport { j, k, three_tangle: value, conservative: false, roof: None })
    } else {
        let rho = state.marginal(&[focus, j, k])?;
        let cfg = ConvexRoofConfig {
            seed: crate::qstate::derive_seed(roof.seed, ordinal),
            ..roof.clone()
        };
        let res = three_tangle_mixed(&rho, &cfg)?;
        Ok(TripleReport {
            j,
            k,
            three_tangle: res.value,
            conservative: true,
            roof: Some((res.restarts_used, res.iterations, res.converged)),
        })
    }
}

/// CKW equality for a three-qubit pure state:
/// `tau_{1|23} = tau^2_{1|2} + tau^2_{1|3} + tau_{1|2|3}`.
pub fn ckw_check(state: &PureState, focus: usize) -> Result<ConstraintVerdict> {
    require_focus(state, focus, 3)?;
    if state.n_qubits() != 3 {
        return Err(Error::QubitCountOutOfRange { n: state.n_qubits(), min: 3, max: 3 });
    }
    let ps = partners(3, focus);
    let tau1 = one_tangle(state, focus)?;
    let mut rhs = three_tangle_pure(state, focus, ps[0], ps[1])?;
    for &j in &ps {
        let t = concurrence(&state.marginal(&[focus, j])?)?.two_tangle;
        rhs += t * t;
    }
    Ok(ConstraintVerdict::identity("ckw", tau1, rhs, IDENTITY_TOL, false))
}

/// Osborne–Verstraete inequality: `tau_{1|2..N} >= sum_j tau^2_{1|j}`.
pub fn ov_check(state: &PureState, focus: usize) -> Result<ConstraintVerdict> {
    require_focus(state, focus, 3)?;
    let tau1 = one_tangle(state, focus)?;
    let mut rhs = 0.0;
    for j in partners(state.n_qubits(), focus) {
        let t = concurrence(&state.marginal(&[focus, j])?)?.two_tangle;
        rhs += t * t;
    }
    Ok(ConstraintVerdict::inequality("ov", tau1, rhs, INEQUALITY_TOL, false))
}

/// Degree-4 sum rule: `sum_j n4(rho_1j) = tau_1` for odd N (an identity); for
/// even N the sum of coherences is nonzero and only reported.
pub fn n4_sum_rule(state: &PureState, focus: usize) -> Result<(SumRuleReport, ConstraintVerdict)> {
    require_focus(state, focus, 3)?;
    let n = state.n_qubits();
    let tau1 = one_tangle(state, focus)?;
    let mut sum_n4 = 0.0;
    for j in partners(n, focus) {
        sum_n4 += pair_invariants_for(state, focus, j)?.n4;
    }
    let x_sum = sum_n4 - tau1;
    let verdict = if n % 2 == 1 {
        ConstraintVerdict::identity("n4sum", sum_n4, tau1, IDENTITY_TOL, false)
    } else {
        ConstraintVerdict::informational("n4sum", sum_n4, tau1, false)
    };
    let report = SumRuleReport { sum_n4, x_sum, delta: Vec::new(), delta_with_chi: Vec::new() };
    Ok((report, verdict))
}

/// Shared computation behind the degree-8 sum rule and the downstream
/// constraint checks.
struct TripleSet {
    values: Vec<TripleReport>,
}

impl TripleSet {
    fn compute(state: &PureState, focus: usize, roof: &ConvexRoofConfig) -> Result<Self> {
        let ps = partners(state.n_qubits(), focus);
        let mut values = Vec::new();
        let mut ordinal = 0u64;
        for a in 0..ps.len() {
            for b in a + 1..ps.len() {
                values.push(triple_tangle(state, focus, ps[a], ps[b], roof, ordinal)?);
                ordinal += 1;
            }
        }
        Ok(Self { values })
    }

    /// `sum_{k != j} tau^2_{1|j|k}`
    fn sum_sq_with(&self, j: usize) -> f64 {
        self.values
            .iter()
            .filter(|t| t.j == j || t.k == j)
            .map(|t| t.three_tangle * t.three_tangle)
            .sum()
    }

    fn conservative(&self) -> bool {
        self.values.iter().any(|t| t.conservative)
    }
}

fn sum_rules_from(
    pairs: &[(usize, PairInvariants)],
    triples: &TripleSet,
    tau1: f64,
) -> SumRuleReport {
    let sum_n4: f64 = pairs.iter().map(|(_, p)| p.n4).sum();
    let mut delta = Vec::with_capacity(pairs.len());
    let mut delta_with_chi = Vec::with_capacity(pairs.len());
    for (j, p) in pairs {
        let d = 4.0 * p.n8 - 0.25 * triples.sum_sq_with(*j);
        delta.push((*j, d));
        delta_with_chi.push((*j, d + p.active_chi()));
    }
    SumRuleReport { sum_n4, x_sum: sum_n4 - tau1, delta, delta_with_chi }
}

fn n8_verdict(
    n: usize,
    pairs: &[(usize, PairInvariants)],
    triples: &TripleSet,
    rules: &SumRuleReport,
) -> ConstraintVerdict {
    if n == 3 {
        // identity 16 n8(rho_1j) = tau^2_{1|2|3} for both pairs
        let tau3 = triples.values[0].three_tangle;
        let rhs = tau3 * tau3;
        let (_, worst) = pairs
            .iter()
            .map(|(j, p)| (*j, 16.0 * p.n8))
            .max_by(|a, b| (a.1 - rhs).abs().partial_cmp(&(b.1 - rhs).abs()).unwrap())
            .unwrap();
        ConstraintVerdict::identity("n8sum", worst, rhs, IDENTITY_TOL, false)
    } else {
        let sum_delta: f64 = rules.delta.iter().map(|(_, d)| d).sum();
        ConstraintVerdict::informational("n8sum", sum_delta, 0.0, triples.conservative())
    }
}

/// Degree-8 sum rule. For N = 3 this is the identity
/// `16 n8(rho_1j) = tau^2_{1|2|3}`; for N > 3 the per-pair residuals
/// `delta_1j` and their sum are reported (conservatively, since the
/// three-tangles entering them are upper bounds).
pub fn n8_sum_rule(
    state: &PureState,
    focus: usize,
    roof: &ConvexRoofConfig,
) -> Result<(SumRuleReport, ConstraintVerdict)> {
    require_focus(state, focus, 3)?;
    let n = state.n_qubits();
    let mut pairs = Vec::new();
    for j in partners(n, focus) {
        pairs.push((j, pair_invariants_for(state, focus, j)?));
    }
    let triples = TripleSet::compute(state, focus, roof)?;
    let tau1 = one_tangle(state, focus)?;
    let rules = sum_rules_from(&pairs, &triples, tau1);
    let verdict = n8_verdict(n, &pairs, &triples, &rules);
    Ok((rules, verdict))
}

fn two_three_verdict(
    n: usize,
    pairs: &[(usize, PairInvariants)],
    triples: &TripleSet,
    rules: &SumRuleReport,
) -> ConstraintVerdict {
    let mut lhs = 0.0;
    for (_, p) in pairs {
        let gap = p.n4 - p.two_tangle * p.two_tangle;
        lhs += gap * gap;
    }
    lhs -= 0.5
        * triples
            .values
            .iter()
            .map(|t| t.three_tangle * t.three_tangle)
            .sum::<f64>();
    if n == 3 {
        // with delta_1j = 0 the right-hand side is the chi residuals alone
        let rhs: f64 = pairs.iter().map(|(_, p)| p.active_chi()).sum();
        ConstraintVerdict::identity("two_three", lhs, rhs, IDENTITY_TOL, false)
    } else {
        let rhs: f64 = rules.delta_with_chi.iter().map(|(_, d)| d).sum();
        ConstraintVerdict::identity("two_three", lhs, rhs, ROOF_TOL, true)
    }
}

/// Constraint on two- and three-tangles:
/// `sum_j (n4 - tau^2_{1|j})^2 - 1/2 sum_{j<k} tau^2_{1|j|k} = sum_j Delta_1j`.
pub fn two_three_constraint(
    state: &PureState,
    focus: usize,
    roof: &ConvexRoofConfig,
) -> Result<ConstraintVerdict> {
    require_focus(state, focus, 3)?;
    let n = state.n_qubits();
    let mut pairs = Vec::new();
    for j in partners(n, focus) {
        pairs.push((j, pair_invariants_for(state, focus, j)?));
    }
    let triples = TripleSet::compute(state, focus, roof)?;
    let tau1 = one_tangle(state, focus)?;
    let rules = sum_rules_from(&pairs, &triples, tau1);
    Ok(two_three_verdict(n, &pairs, &triples, &rules))
}

fn residual_beyond_three_verdict(
    tau1: f64,
    pairs: &[(usize, PairInvariants)],
    triples: &TripleSet,
) -> ConstraintVerdict {
    let sum_tau2: f64 = pairs.iter().map(|(_, p)| p.two_tangle * p.two_tangle).sum();
    // sum over ordered (j, k != j) pairs doubles the unordered sum
    let sum_triple_sq: f64 =
        2.0 * triples.values.iter().map(|t| t.three_tangle * t.three_tangle).sum::<f64>();
    let rhs = sum_tau2 + 0.5 * sum_triple_sq.sqrt();
    let conservative = triples.conservative();
    let tol = if conservative { ROOF_TOL } else { INEQUALITY_TOL };
    ConstraintVerdict::inequality("residual3", tau1, rhs, tol, conservative)
}

/// Residual correlations beyond three-way:
/// `tau_1 - sum_j tau^2_{1|j} - 1/2 sqrt(sum_j sum_{k!=j} tau^2_{1|j|k}) >= 0`.
///
/// Convex-roof upper bounds can only decrease the left side, so a pass is a
/// sound verification; a negative value with the conservative flag set is
/// inconclusive, not a violation.
pub fn residual_beyond_three(
    state: &PureState,
    focus: usize,
    roof: &ConvexRoofConfig,
) -> Result<ConstraintVerdict> {
    require_focus(state, focus, 3)?;
    let n = state.n_qubits();
    let mut pairs = Vec::new();
    for j in partners(n, focus) {
        pairs.push((j, pair_invariants_for(state, focus, j)?));
    }
    let triples = TripleSet::compute(state, focus, roof)?;
    let tau1 = one_tangle(state, focus)?;
    Ok(residual_beyond_three_verdict(tau1, &pairs, &triples))
}

/// Multipartite-entanglement criterion: a pair witnesses correlations beyond
/// two-way iff `n4(rho_1j) > threshold` and `2 n8(rho_1j) > threshold`
/// (`2 n8 = (tr rho rho~)^2 - tr (rho rho~)^2`).
pub fn multipartite_criterion(
    state: &PureState,
    focus: usize,
    threshold: f64,
) -> Result<MultipartiteCriterion> {
    require_focus(state, focus, 3)?;
    let mut pairs = Vec::new();
    let mut witnessed = true;
    for j in partners(state.n_qubits(), focus) {
        let p = pair_invariants_for(state, focus, j)?;
        let flag = p.n4 > threshold && 2.0 * p.n8 > threshold;
        witnessed &= flag;
        pairs.push((j, flag));
    }
    Ok(MultipartiteCriterion { threshold, pairs, witnessed })
}

fn pair_closure_verdict(
    pairs: &[(usize, PairInvariants)],
    triples: &TripleSet,
    rules: &SumRuleReport,
) -> ConstraintVerdict {
    let mut worst = (0.0f64, 0.0f64, 0.0f64); // (|residual|, lhs, rhs)
    for (idx, (j, p)) in pairs.iter().enumerate() {
        let lhs = p.n4 - p.two_tangle * p.two_tangle;
        let radicand = 0.25 * triples.sum_sq_with(*j) + rules.delta_with_chi[idx].1;
        let rhs = radicand.max(0.0).sqrt();
        if (lhs - rhs).abs() >= worst.0 {
            worst = ((lhs - rhs).abs(), lhs, rhs);
        }
    }
    ConstraintVerdict::identity("pair_closure", worst.1, worst.2, 1e-7, triples.conservative())
}

/// Computes the one-tangle, every pair invariant block, every triple tangle,
/// the sum rules, the multipartite criterion, and all constraint verdicts in
/// one pass.
pub fn full_report(
    state: &PureState,
    focus: usize,
    roof: &ConvexRoofConfig,
) -> Result<FullReport> {
    require_focus(state, focus, 3)?;
    let n = state.n_qubits();
    let tau1 = one_tangle(state, focus)?;

    let mut pairs = Vec::new();
    for j in partners(n, focus) {
        pairs.push((j, pair_invariants_for(state, focus, j)?));
    }
    let triples = TripleSet::compute(state, focus, roof)?;
    let rules = sum_rules_from(&pairs, &triples, tau1);
    let multipartite = multipartite_criterion(state, focus, CRITERION_THRESHOLD)?;

    let mut verdicts = Vec::new();
    if n == 3 {
        verdicts.push(ckw_check(state, focus)?);
    }
    verdicts.push(ov_check(state, focus)?);
    verdicts.push(if n % 2 == 1 {
        ConstraintVerdict::identity("n4sum", rules.sum_n4, tau1, IDENTITY_TOL, false)
    } else {
        ConstraintVerdict::informational("n4sum", rules.sum_n4, tau1, false)
    });
    verdicts.push(n8_verdict(n, &pairs, &triples, &rules));
    verdicts.push(two_three_verdict(n, &pairs, &triples, &rules));
    verdicts.push(residual_beyond_three_verdict(tau1, &pairs, &triples));
    verdicts.push(pair_closure_verdict(&pairs, &triples, &rules));

    let tangles = TangleReport {
        focus,
        n_qubits: n,
        one_tangle: tau1,
        pairs: pairs
            .into_iter()
            .map(|(j, invariants)| PairReport { j, invariants })
            .collect(),
        triples: triples.values,
        multipartite,
    };
    Ok(FullReport { tangles, sum_rules: rules, verdicts })
}

// --- report serialization -------------------------------------------------

/// JSON shape of one pair entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairJson {
    pub j: usize,
    pub n4: f64,
    pub n8: f64,
    pub n12: f64,
    pub n16: f64,
    pub chi_active: f64,
    pub two_tangle: f64,
}

/// JSON shape of one triple entry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleJson {
    pub j: usize,
    pub k: usize,
    pub three_tangle: f64,
    pub conservative: bool,
}

/// JSON shape of one verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictJson {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
    pub conservative: bool,
}

/// JSON report emitted by the CLI and consumed by downstream tooling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub state_meta: BTreeMap<String, String>,
    pub focus: usize,
    pub one_tangle: f64,
    pub pairs: Vec<PairJson>,
    pub triples: Vec<TripleJson>,
    pub verdicts: Vec<VerdictJson>,
}

impl FullReport {
    /// Flattens the report into the documented JSON schema.
    pub fn to_json(&self, state_meta: BTreeMap<String, String>) -> ReportJson {
        ReportJson {
            state_meta,
            focus: self.tangles.focus,
            one_tangle: self.tangles.one_tangle,
            pairs: self
                .tangles
                .pairs
                .iter()
                .map(|p| PairJson {
                    j: p.j,
                    n4: p.invariants.n4,
                    n8: p.invariants.n8,
                    n12: p.invariants.n12,
                    n16: p.invariants.n16,
                    chi_active: p.invariants.active_chi(),
                    two_tangle: p.invariants.two_tangle,
                })
                .collect(),
            triples: self
                .tangles
                .triples
                .iter()
                .map(|t| TripleJson {
                    j: t.j,
                    k: t.k,
                    three_tangle: t.three_tangle,
                    conservative: t.conservative,
                })
                .collect(),
            verdicts: self
                .verdicts
                .iter()
                .map(|v| VerdictJson {
                    id: v.id.to_string(),
                    lhs: v.lhs,
                    rhs: v.rhs,
                    residual: v.residual,
                    pass: v.pass(),
                    conservative: v.conservative,
                })
                .collect(),
        }
    }

    /// True when every verdict that does not rest on convex-roof upper bounds
    /// passes; the CLI exit-code contract.
    pub fn hard_pass(&self) -> bool {
        self.verdicts.iter().filter(|v| !v.conservative).all(|v| v.pass())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{named_state, StateFamily};

    fn fast_roof() -> ConvexRoofConfig {
        ConvexRoofConfig { restarts: 4, max_iterations: 400, ..Default::default() }
    }

    fn ghz3() -> PureState {
        named_state(&StateFamily::Ghz { n: 3 }).unwrap()
    }

    fn w3() -> PureState {
        named_state(&StateFamily::W { n: 3 }).unwrap()
    }

    fn zero3() -> PureState {
        named_state(&StateFamily::Product { n: 3, bits: vec![] }).unwrap()
    }

    #[test]
    fn ckw_anchors() {
        for state in [ghz3(), w3(), zero3()] {
            let v = ckw_check(&state, 1).unwrap();
            assert!(v.pass(), "{state:?}: residual {}", v.residual);
            assert!(v.residual.abs() < 1e-10);
        }
    }

    #[test]
    fn ckw_requires_three_qubits() {
        let ghz4 = named_state(&StateFamily::Ghz { n: 4 }).unwrap();
        assert!(ckw_check(&ghz4, 1).is_err());
    }

    #[test]
    fn ov_w3_saturates_and_ghz4_slack_is_one() {
        let v = ov_check(&w3(), 1).unwrap();
        assert!(v.pass());
        assert!(v.residual.abs() < 1e-10);

        let ghz4 = named_state(&StateFamily::Ghz { n: 4 }).unwrap();
        let v = ov_check(&ghz4, 1).unwrap();
        assert!(v.pass());
        assert!((v.residual - 1.0).abs() < 1e-10);
    }

    #[test]
    fn n4_sum_rule_anchors() {
        let (rules, v) = n4_sum_rule(&ghz3(), 1).unwrap();
        assert!(v.pass());
        assert!(rules.x_sum.abs() < 1e-12);
        assert!((rules.sum_n4 - 1.0).abs() < 1e-12);

        // even N: reported, never asserted
        let ghz4 = named_state(&StateFamily::Ghz { n: 4 }).unwrap();
        let (rules, v) = n4_sum_rule(&ghz4, 1).unwrap();
        assert!(v.pass());
        assert!((rules.x_sum - 0.5).abs() < 1e-12);
    }

    #[test]
    fn n8_sum_rule_anchors() {
        let (rules, v) = n8_sum_rule(&ghz3(), 1, &fast_roof()).unwrap();
        assert!(v.pass());
        assert!((v.lhs - 1.0).abs() < 1e-10, "16 n8 = {}", v.lhs);
        assert!((v.rhs - 1.0).abs() < 1e-10);
        for (_, d) in &rules.delta {
            assert!(d.abs() < 1e-10);
        }

        let (_, v) = n8_sum_rule(&w3(), 1, &fast_roof()).unwrap();
        assert!(v.pass());
        assert!(v.lhs.abs() < 1e-12 && v.rhs.abs() < 1e-12);

        // GHZ4: marginal triples are product mixtures, so delta_1j = 4 n8 = 1/4
        let ghz4 = named_state(&StateFamily::Ghz { n: 4 }).unwrap();
        let (rules, v) = n8_sum_rule(&ghz4, 1, &fast_roof()).unwrap();
        assert!(v.conservative);
        for (_, d) in &rules.delta {
            assert!((d - 0.25).abs() < 1e-6, "delta = {d}");
        }
        let sum: f64 = rules.delta.iter().map(|(_, d)| d).sum();
        assert!((sum - 0.75).abs() < 1e-6);
    }

    #[test]
    fn two_three_anchors() {
        let v = two_three_constraint(&zero3(), 1, &fast_roof()).unwrap();
        assert!(v.pass());
        assert!(v.lhs.abs() < 1e-12);

        let v = two_three_constraint(&ghz3(), 1, &fast_roof()).unwrap();
        assert!(v.pass(), "residual {}", v.residual);
        // lhs = 1/4 + 1/4 - 1/2 = 0 and chi residuals vanish
        assert!(v.lhs.abs() < 1e-10);
        assert!(v.rhs.abs() < 1e-10);
    }

    #[test]
    fn residual_beyond_three_anchors() {
        let v = residual_beyond_three(&ghz3(), 1, &fast_roof()).unwrap();
        assert!(v.pass());
        assert!((v.residual - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-9);

        let v = residual_beyond_three(&w3(), 1, &fast_roof()).unwrap();
        assert!(v.pass());
        assert!(v.residual.abs() < 1e-9);
    }

    #[test]
    fn multipartite_criterion_anchors() {
        let m = multipartite_criterion(&ghz3(), 1, CRITERION_THRESHOLD).unwrap();
        assert!(m.witnessed);
        assert!(m.pairs.iter().all(|(_, f)| *f));

        // Bell pair times |0>: pair (1,2) has n4 = 1 but n8 = 0
        let bell = named_state(&StateFamily::BellTimesRest { n: 3, pair: (1, 2) }).unwrap();
        let m = multipartite_criterion(&bell, 1, CRITERION_THRESHOLD).unwrap();
        assert!(!m.witnessed);
        assert!(m.pairs.iter().all(|(_, f)| !*f));

        let m = multipartite_criterion(&zero3(), 1, CRITERION_THRESHOLD).unwrap();
        assert!(!m.witnessed);
    }

    #[test]
    fn full_report_ghz3() {
        let report = full_report(&ghz3(), 1, &fast_roof()).unwrap();
        assert!((report.tangles.one_tangle - 1.0).abs() < 1e-12);
        for p in &report.tangles.pairs {
            assert!(p.invariants.two_tangle.abs() < 1e-12);
        }
        assert_eq!(report.tangles.triples.len(), 1);
        assert!((report.tangles.triples[0].three_tangle - 1.0).abs() < 1e-12);
        assert!(report.verdicts.iter().all(|v| v.pass()));
        assert!(report.hard_pass());
    }

    #[test]
    fn full_report_w3() {
        let report = full_report(&w3(), 1, &fast_roof()).unwrap();
        assert!((report.tangles.one_tangle - 8.0 / 9.0).abs() < 1e-12);
        for p in &report.tangles.pairs {
            assert!((p.invariants.two_tangle - 2.0 / 3.0).abs() < 1e-12);
        }
        assert!(report.tangles.triples[0].three_tangle.abs() < 1e-12);
        assert!(report.verdicts.iter().all(|v| v.pass()));
    }

    #[test]
    fn full_report_rejects_small_registers() {
        let bell = named_state(&StateFamily::BellTimesRest { n: 2, pair: (1, 2) }).unwrap();
        assert!(full_report(&bell, 1, &fast_roof()).is_err());
    }

    #[test]
    fn report_json_has_documented_fields() {
        let report = full_report(&ghz3(), 1, &fast_roof()).unwrap();
        let json = serde_json::to_value(report.to_json(BTreeMap::new())).unwrap();
        for key in ["state_meta", "focus", "one_tangle", "pairs", "triples", "verdicts"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let pair = &json["pairs"][0];
        for key in ["j", "n4", "n8", "n12", "n16", "chi_active", "two_tangle"] {
            assert!(pair.get(key).is_some(), "missing pair key {key}");
        }
        let verdict = &json["verdicts"][0];
        for key in ["id", "lhs", "rhs", "residual", "pass", "conservative"] {
            assert!(verdict.get(key).is_some(), "missing verdict key {key}");
        }
    }
}
