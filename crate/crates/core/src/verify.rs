//! Self-checks over the exchange chain: closed forms, counts, the brute
//! force generation oracle, graph lemmas, dense trajectory agreement and
//! the edging-sequence identities.
//!
//! Each suite returns a [`Report`] of named pass/fail checks.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cases::{case_d_block_size, MeasurementCase};
use crate::closure::{
    chain_closed_form, generate, generate_reference, AccessibleSet, Axis, REFERENCE_CAP,
};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, check_label_symmetry, check_simple, is_connected, partition_k_finite,
    verify_block_regeneration,
};
use crate::hamiltonian::{build_exchange_chain, HamiltonianSpec, MeasurementSpec};
use crate::oracle::{product_density, DenseOracle};
use crate::pauli::identities::{
    check_bilinear_decomposition, check_even_pair_removal, check_permutation_invariance,
};
use crate::pauli::{bracket_normalized, Cell, PauliString, WeightedPauliSum};
use crate::pipeline::generate_ordered;
use crate::statespace::{
    build_model, initial_state_vector, simulate, InitialState, Integrator, TimeGrid,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(
        &mut self,
        suite: &str,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            suite: suite.into(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{tag} {}: {}", c.suite, c.name)?;
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Prop2,
    CaseDCount,
    Oracle,
    Lemmas,
    CaseBBlocks,
    Trajectory,
    Structure,
    Appendix,
    Nesting,
    Regeneration,
    Span,
    All,
}

impl Suite {
    pub const NAMES: [(&'static str, Suite); 12] = [
        ("prop2", Suite::Prop2),
        ("case-d-count", Suite::CaseDCount),
        ("oracle", Suite::Oracle),
        ("lemmas", Suite::Lemmas),
        ("case-b-blocks", Suite::CaseBBlocks),
        ("trajectory", Suite::Trajectory),
        ("structure", Suite::Structure),
        ("appendix", Suite::Appendix),
        ("nesting", Suite::Nesting),
        ("regeneration", Suite::Regeneration),
        ("span", Suite::Span),
        ("all", Suite::All),
    ];

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::NAMES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{name}'")))
    }

    pub fn name(self) -> &'static str {
        Suite::NAMES
            .iter()
            .find(|(_, s)| *s == self)
            .expect("every suite is named")
            .0
    }

    /// Chain sizes used when none are given.
    pub fn default_range(self) -> RangeInclusive<usize> {
        match self {
            Suite::Prop2 => 2..=12,
            Suite::CaseDCount => 2..=10,
            Suite::Oracle => 2..=3,
            Suite::Lemmas | Suite::Structure => 2..=8,
            Suite::CaseBBlocks => 6..=6,
            Suite::Trajectory => 2..=5,
            Suite::Appendix => 2..=4,
            Suite::Nesting => 2..=6,
            Suite::Regeneration | Suite::Span => 2..=4,
            Suite::All => 2..=4,
        }
    }
}

/// Tunables shared by the suites.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub exponential_tol: f64,
    pub stepping_tol: f64,
    pub stepping_step: f64,
    pub t_max: f64,
    pub t_sample: f64,
    pub commutator_depth: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 2024,
            samples: 500,
            exponential_tol: 1e-8,
            stepping_tol: 1e-6,
            stepping_step: 1e-3,
            t_max: 10.0,
            t_sample: 0.01,
            commutator_depth: 8,
        }
    }
}

pub fn run_suite(suite: Suite, range: RangeInclusive<usize>, opts: &Options) -> Result<Report> {
    match suite {
        Suite::Prop2 => prop2(range),
        Suite::CaseDCount => case_d_count(range),
        Suite::Oracle => prop1(range),
        Suite::Lemmas => lemmas(range),
        Suite::CaseBBlocks => case_b_blocks(*range.end()),
        Suite::Trajectory => trajectory(range, opts),
        Suite::Structure => structure(range, opts.seed),
        Suite::Appendix => appendix(opts.samples, opts.seed),
        Suite::Nesting => nesting(range),
        Suite::Regeneration => regeneration(range),
        Suite::Span => span(range, opts.commutator_depth),
        Suite::All => {
            let mut all = Report::default();
            for (_, s) in Suite::NAMES.iter().filter(|(_, s)| *s != Suite::All) {
                all.extend(run_suite(*s, s.default_range(), opts)?);
            }
            Ok(all)
        }
    }
}

fn chain_digamma(n: usize) -> Result<Vec<PauliString>> {
    Ok(build_exchange_chain(n, &vec![1.0; n - 1])?.digamma())
}

fn chain_sizes(range: RangeInclusive<usize>) -> impl Iterator<Item = usize> {
    let (lo, hi) = range.into_inner();
    lo.max(2)..=hi
}

fn labels(set: &HashSet<PauliString>) -> String {
    let mut v: Vec<&PauliString> = set.iter().collect();
    v.sort();
    v.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Closed-form chains against generation.
pub fn prop2(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    for n in chain_sizes(range) {
        let d = chain_digamma(n)?;
        let mut bad = Vec::new();
        for m in 1..=n {
            for axis in [Axis::X, Axis::Y] {
                let closed = chain_closed_form(n, m, axis)?;
                let seeds: Vec<PauliString> = closed
                    .seeds()
                    .into_iter()
                    .map(|i| closed.members()[i].clone())
                    .collect();
                let generated = generate(&d, &seeds)?;
                if closed.member_set() != generated.member_set() {
                    bad.push(format!("m={m} {axis:?}"));
                }
            }
        }
        r.push("prop2", format!("N={n}"), bad.is_empty(), bad.join("; "));
    }
    Ok(r)
}

/// Block sizes and total for the `Y₁Z₂` seed.
pub fn case_d_count(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    for n in chain_sizes(range) {
        let d = chain_digamma(n)?;
        let set = generate(&d, &[MeasurementCase::D.seed_checked(n)?])?;
        let part = partition_k_finite(&set)?;
        let got = part.block_sizes();
        let expected: Vec<(usize, usize)> = (2..=n).map(|k| (k, case_d_block_size(k))).collect();
        let total = (n * n * n - n * n) / 2;
        let ok = got == expected && set.len() == total;
        r.push(
            "case-d-count",
            format!("N={n}"),
            ok,
            format!("|G|={} expected {total}, blocks {got:?}", set.len()),
        );
    }
    Ok(r)
}

/// Breadth-first generation against the brute-force trace rule.
pub fn prop1(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    for n in chain_sizes(range) {
        if n > REFERENCE_CAP {
            r.push(
                "oracle",
                format!("N={n}"),
                false,
                format!("reference rule is capped at {REFERENCE_CAP} qubits"),
            );
            continue;
        }
        let d = chain_digamma(n)?;
        for case in MeasurementCase::ALL {
            let Some(seed) = case.seed(n) else { continue };
            let fast = generate(&d, std::slice::from_ref(&seed))?.member_set();
            let slow = generate_reference(&d, &[seed], REFERENCE_CAP)?.member_set();
            let detail = if fast == slow {
                format!("{} members", fast.len())
            } else {
                labels(&fast) + " vs " + &labels(&slow)
            };
            r.push("oracle", format!("N={n} case {case}"), fast == slow, detail);
        }
    }
    Ok(r)
}

/// Simplicity, label symmetry, connectivity and single-member regeneration.
pub fn lemmas(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    for n in chain_sizes(range) {
        let d = chain_digamma(n)?;
        for case in MeasurementCase::ALL {
            let Some(seed) = case.seed(n) else { continue };
            let set = generate(&d, &[seed])?;
            let g = build_graph(&set, &d)?;
            let name = format!("N={n} case {case}");
            r.push("lemmas", format!("{name} simple"), check_simple(&g), "");
            r.push(
                "lemmas",
                format!("{name} label symmetry"),
                check_label_symmetry(&set, &g)?,
                "",
            );
            r.push("lemmas", format!("{name} connected"), is_connected(&g), "");
            let target = set.member_set();
            let mut failed = 0;
            for m in set.members() {
                if generate(&d, std::slice::from_ref(m))?.member_set() != target {
                    failed += 1;
                }
            }
            r.push(
                "lemmas",
                format!("{name} single-member regeneration"),
                failed == 0,
                format!("{failed} of {} members fail", set.len()),
            );
        }
    }
    Ok(r)
}

/// First two blocks for the `Z₁` seed.
pub fn case_b_blocks(n: usize) -> Result<Report> {
    let mut r = Report::default();
    let d = chain_digamma(n.max(2))?;
    let n = n.max(2);
    let set = generate(&d, &[MeasurementCase::B.seed_checked(n)?])?;
    let part = partition_k_finite(&set)?;
    let block = |k: usize| -> HashSet<String> {
        part.block(k)
            .map(|b| {
                b.members
                    .iter()
                    .map(|&i| set.members()[i].to_string())
                    .collect()
            })
            .unwrap_or_default()
    };
    let b1 = block(1);
    let b2 = block(2);
    let want1: HashSet<String> = ["Z1"].into_iter().map(String::from).collect();
    let want2: HashSet<String> = ["Z2", "X1 Y2", "Y1 X2"]
        .into_iter()
        .map(String::from)
        .collect();
    r.push(
        "case-b-blocks",
        format!("N={n} k=1"),
        b1 == want1,
        format!("{b1:?}"),
    );
    r.push(
        "case-b-blocks",
        format!("N={n} k=2"),
        b2 == want2,
        format!("{b2:?}"),
    );
    Ok(r)
}

/// Random Bloch vector on the unit sphere.
pub fn random_bloch(rng: &mut StdRng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

pub fn random_couplings(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n - 1).map(|_| rng.random_range(0.5..=2.0)).collect()
}

/// Largest output deviations of one reduced model from the dense oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryErrors {
    pub exponential: f64,
    pub stepping: f64,
}

/// Compares the reduced model of one measurement case with dense evolution.
pub fn trajectory_errors(
    spec: &HamiltonianSpec,
    seed: &PauliString,
    blochs: &[[f64; 3]],
    opts: &Options,
) -> Result<TrajectoryErrors> {
    let meas = MeasurementSpec::from_strings(std::slice::from_ref(seed))?;
    let ordered = generate_ordered(spec, &meas)?;
    let model = build_model(&ordered.set, spec, &meas)?;
    let initial = InitialState::Product(blochs.to_vec());
    let x0 = initial_state_vector(&initial, model.ordering())?;
    let times = TimeGrid {
        start: 0.0,
        stop: opts.t_max,
        step: opts.t_sample,
    }
    .points()?;
    let dense = DenseOracle::default().evolve_expectation(
        spec,
        &WeightedPauliSum::from_terms(seed.n_qubits(), [(1.0, seed.clone())])?,
        &product_density(blochs),
        &times,
    )?;
    let max_err = |series: Vec<f64>| {
        series
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let exp = simulate(&model, &x0, &times, Integrator::Exponential)?;
    let rk = simulate(
        &model,
        &x0,
        &times,
        Integrator::RungeKutta {
            max_step: opts.stepping_step,
        },
    )?;
    Ok(TrajectoryErrors {
        exponential: max_err(exp.output_series(0)),
        stepping: max_err(rk.output_series(0)),
    })
}

/// Reduced against dense trajectories with random couplings and states.
pub fn trajectory(range: RangeInclusive<usize>, opts: &Options) -> Result<Report> {
    let mut r = Report::default();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for n in chain_sizes(range) {
        let spec = build_exchange_chain(n, &random_couplings(&mut rng, n))?;
        for case in MeasurementCase::ALL {
            let Some(seed) = case.seed(n) else { continue };
            let blochs: Vec<[f64; 3]> = (0..n).map(|_| random_bloch(&mut rng)).collect();
            let e = trajectory_errors(&spec, &seed, &blochs, opts)?;
            let name = format!("N={n} case {case}");
            r.push(
                "trajectory",
                format!("{name} exponential"),
                e.exponential <= opts.exponential_tol,
                format!("max err {:.2e}", e.exponential),
            );
            r.push(
                "trajectory",
                format!("{name} stepping"),
                e.stepping <= opts.stepping_tol,
                format!("max err {:.2e}", e.stepping),
            );
        }
    }
    Ok(r)
}

/// Exact antisymmetry under integer couplings and pattern agreement with
/// the access graph under nonzero couplings.
pub fn structure(range: RangeInclusive<usize>, seed: u64) -> Result<Report> {
    let mut r = Report::default();
    let mut rng = StdRng::seed_from_u64(seed);
    for n in chain_sizes(range) {
        for case in MeasurementCase::ALL {
            let Some(s) = case.seed(n) else { continue };
            let meas = MeasurementSpec::from_strings(&[s])?;
            let ints: Vec<f64> = (0..n - 1).map(|_| rng.random_range(1..=3) as f64).collect();
            let spec = build_exchange_chain(n, &ints)?;
            let ordered = generate_ordered(&spec, &meas)?;
            let model = build_model(&ordered.set, &spec, &meas)?;
            let name = format!("N={n} case {case}");
            let defect = model.antisymmetry_defect();
            r.push(
                "structure",
                format!("{name} antisymmetry"),
                defect == 0.0,
                format!("max |A+Aᵀ| = {defect:e}"),
            );
            let floats = random_couplings(&mut rng, n);
            let spec = build_exchange_chain(n, &floats)?;
            let model = build_model(&ordered.set, &spec, &meas)?;
            let same = model.a_pattern() == ordered.graph.adjacency_pattern();
            r.push("structure", format!("{name} pattern"), same, "");
        }
    }
    Ok(r)
}

fn random_string_on(rng: &mut StdRng, n: usize, sites: &[usize]) -> PauliString {
    let mut p = PauliString::identity(n);
    for &s in sites {
        p.set_cell(s, Cell::ALL[rng.random_range(0..4)]);
    }
    p
}

/// Walks `len` random anticommuting steps from `start` over `digamma`.
fn random_path(
    rng: &mut StdRng,
    start: &PauliString,
    digamma: &[PauliString],
    len: usize,
) -> Result<Vec<PauliString>> {
    let mut cur = start.clone();
    let mut seq = Vec::new();
    for _ in 0..len {
        let options: Vec<&PauliString> =
            digamma.iter().filter(|nu| !cur.commutes_with(nu)).collect();
        if options.is_empty() {
            break;
        }
        let nu = options[rng.random_range(0..options.len())].clone();
        cur = bracket_normalized(&cur, &nu)?.expect("anticommuting");
        seq.push(nu);
    }
    Ok(seq)
}

fn shuffled(rng: &mut StdRng, len: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

/// Randomized instances of the three edging identities.
pub fn appendix(samples: usize, seed: u64) -> Result<Report> {
    let mut r = Report::default();
    let mut rng = StdRng::seed_from_u64(seed);

    let mut failures = 0;
    for _ in 0..samples {
        let n = rng.random_range(2..=4);
        let split = rng.random_range(1..n);
        let left: Vec<usize> = (0..split).collect();
        let right: Vec<usize> = (split..n).collect();
        let a = random_string_on(&mut rng, n, &left);
        let b = random_string_on(&mut rng, n, &left);
        let d = random_string_on(&mut rng, n, &right);
        let e = random_string_on(&mut rng, n, &right);
        if !check_bilinear_decomposition(&a, &d, &b, &e)? {
            failures += 1;
        }
    }
    r.push(
        "appendix",
        "bilinear decomposition",
        failures == 0,
        format!("{failures} of {samples} fail"),
    );

    let mut failures = 0;
    let mut walked = 0;
    for _ in 0..samples {
        let n = rng.random_range(2..=4);
        let d = chain_digamma(n)?;
        let all: Vec<usize> = (0..n).collect();
        let start = random_string_on(&mut rng, n, &all);
        let len = rng.random_range(2..=8);
        let seq = random_path(&mut rng, &start, &d, len)?;
        walked += seq.len();
        let orders: Vec<Vec<usize>> = (0..6).map(|_| shuffled(&mut rng, seq.len())).collect();
        if !check_permutation_invariance(&start, &seq, &orders)? {
            failures += 1;
        }
    }
    r.push(
        "appendix",
        "permutation invariance",
        failures == 0,
        format!("{failures} of {samples} fail, {walked} steps walked"),
    );

    let mut failures = 0;
    let mut with_pairs = 0;
    for _ in 0..samples {
        let n = rng.random_range(2..=3);
        let d = chain_digamma(n)?;
        let all: Vec<usize> = (0..n).collect();
        let start = random_string_on(&mut rng, n, &all);
        let len = rng.random_range(2..=10);
        let seq = random_path(&mut rng, &start, &d, len)?;
        if seq
            .iter()
            .any(|nu| seq.iter().filter(|m| *m == nu).count() >= 2)
        {
            with_pairs += 1;
        }
        if !check_even_pair_removal(&start, &seq)? {
            failures += 1;
        }
    }
    r.push(
        "appendix",
        "even-pair removal",
        failures == 0,
        format!("{failures} of {samples} fail, {with_pairs} with repeated operators"),
    );
    Ok(r)
}

fn truncated(set: &AccessibleSet, k: usize) -> Result<HashSet<PauliString>> {
    set.members()
        .iter()
        .filter(|m| m.highest_site().is_some_and(|h| h < k))
        .map(|m| m.resized(k))
        .collect()
}

/// The `i`-site set equals the blocks `k ≤ i` of the `j`-site set.
pub fn nesting(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    let sizes: Vec<usize> = chain_sizes(range).collect();
    let Some(&j) = sizes.last() else { return Ok(r) };
    let dj = chain_digamma(j)?;
    for case in MeasurementCase::ALL {
        let Some(seed_j) = case.seed(j) else { continue };
        let big = generate(&dj, &[seed_j])?;
        for &i in sizes.iter().filter(|&&i| i < j) {
            let Some(seed_i) = case.seed(i) else { continue };
            let small = generate(&chain_digamma(i)?, &[seed_i])?.member_set();
            let ok = small == truncated(&big, i)?;
            r.push("nesting", format!("case {case} N={i} in N={j}"), ok, "");
        }
    }
    Ok(r)
}

/// Every block regenerates from each of its members.
pub fn regeneration(range: RangeInclusive<usize>) -> Result<Report> {
    let mut r = Report::default();
    for n in chain_sizes(range) {
        let d = chain_digamma(n)?;
        for case in MeasurementCase::ALL {
            let Some(seed) = case.seed(n) else { continue };
            let set = generate(&d, &[seed])?;
            let part = partition_k_finite(&set)?;
            let checks = verify_block_regeneration(&set, &part, &d)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            r.push(
                "regeneration",
                format!("N={n} case {case}"),
                failed == 0,
                format!("{failed} of {} fail", checks.len()),
            );
        }
    }
    Ok(r)
}

/// Nested commutators of each seed decompose inside the accessible set.
pub fn span(range: RangeInclusive<usize>, depth: usize) -> Result<Report> {
    let mut r = Report::default();
    let oracle = DenseOracle::default();
    for n in chain_sizes(range) {
        let spec = build_exchange_chain(n, &vec![1.0; n - 1])?;
        for case in MeasurementCase::ALL {
            let Some(seed) = case.seed(n) else { continue };
            let seeds = [seed];
            let set = generate(&spec.digamma(), &seeds)?;
            let escapes = oracle.span_escapes(&spec, &seeds, &set, depth)?;
            let mut detail = String::new();
            for e in &escapes {
                let _ = write!(detail, "{e}; ");
            }
            r.push(
                "span",
                format!("N={n} case {case}"),
                escapes.is_empty(),
                detail,
            );
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for (name, s) in Suite::NAMES {
            assert_eq!(Suite::parse(name).unwrap(), s);
            assert_eq!(s.name(), name);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn small_suites_pass() {
        let opts = Options {
            samples: 50,
            ..Options::default()
        };
        for (suite, range) in [
            (Suite::Prop2, 2..=5),
            (Suite::CaseDCount, 2..=5),
            (Suite::Oracle, 2..=3),
            (Suite::Lemmas, 2..=4),
            (Suite::CaseBBlocks, 6..=6),
            (Suite::Structure, 2..=4),
            (Suite::Appendix, 2..=4),
            (Suite::Nesting, 2..=5),
            (Suite::Regeneration, 2..=4),
            (Suite::Span, 2..=3),
        ] {
            let report = run_suite(suite, range, &opts).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn report_formats_lines() {
        let mut r = Report::default();
        r.push("x", "one", true, "");
        r.push("x", "two", false, "why");
        assert_eq!(
            r.to_string(),
            "PASS x: one\nFAIL x: two (why)\n2 checks, 1 failed\n"
        );
    }
}
