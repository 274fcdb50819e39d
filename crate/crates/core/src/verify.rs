//! Independent oracles and property checks.
//!
//! The rewrite oracle expands words in `x` and `U` term by term on its own
//! dense `i128` representation, so agreement with [`crate::ring`] is evidence
//! rather than a restatement. The path and partition suites sample the
//! planners on seeded random pairs together with constructed boundary pairs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::{secat_sphere_bundle, tc_dimension_upper, tc_sphere_bundle, RuleId, TCReport};
use crate::bundle::{k_fold_sum, whitney_sum, BaseSpace, BundleDescriptor};
use crate::planner::{
    classify_pair, plan, plan_hopf, BundlePoint, PlannedPath, PlannerError, ProjectiveRep,
    DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL,
};
use crate::ring::LHElement;

pub const DEFAULT_SEED: u64 = 0x5eca_7202;
pub const PATH_TOLERANCE: f64 = 1e-9;
pub const LIPSCHITZ_BOUND: f64 = 2.0 * PI + 2.0;
pub const LIPSCHITZ_STEP: f64 = 1e-4;
pub const DEFAULT_SAMPLES: usize = 1001;

/// A formal expression in `x` and `U` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(i64),
    X,
    U,
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn pow(self, k: u32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn negated(self) -> Self {
        Expr::Neg(Box::new(self))
    }

    pub fn scaled(self, c: i64) -> Self {
        Expr::Product(vec![Expr::Const(c), self])
    }

    /// `x^a U^b`.
    pub fn monomial(a: u32, b: u32) -> Self {
        Expr::Product(vec![Expr::X.pow(a), Expr::U.pow(b)])
    }
}

/// Dense normal form `a + b·U` with `a[k]`, `b[k]` the coefficients of `x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub a: Vec<i128>,
    pub b: Vec<i128>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&c| c == 0)
    }

    /// Coefficient-wise comparison with a Leray–Hirsch class over `CP^n`.
    pub fn matches(&self, element: &LHElement) -> bool {
        let agree = |dense: &[i128], sparse: &crate::ring::RingElement| {
            let within = sparse
                .terms()
                .all(|(exps, _)| (exps[0] as usize) < dense.len());
            within
                && dense
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| sparse.coefficient(&[k as u32]) == num_bigint::BigInt::from(c))
        };
        agree(&self.a, element.base()) && agree(&self.b, element.fiber())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |dense: &[i128]| {
            let parts: Vec<String> = dense
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, c)| format!("{c}x^{k}"))
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            }
        };
        write!(f, "({}) + ({})U", render(&self.a), render(&self.b))
    }
}

/// Unreduced term `coeff · x^x · U^u`.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: i128,
    x: u32,
    u: u32,
}

fn checked(value: Option<i128>) -> i128 {
    value.expect("oracle coefficient overflow")
}

fn expand(expr: &Expr) -> Vec<Term> {
    match expr {
        Expr::Const(c) => vec![Term {
            coeff: i128::from(*c),
            x: 0,
            u: 0,
        }],
        Expr::X => vec![Term {
            coeff: 1,
            x: 1,
            u: 0,
        }],
        Expr::U => vec![Term {
            coeff: 1,
            x: 0,
            u: 1,
        }],
        Expr::Sum(parts) => parts.iter().flat_map(expand).collect(),
        Expr::Neg(inner) => expand(inner)
            .into_iter()
            .map(|t| Term {
                coeff: checked(t.coeff.checked_neg()),
                ..t
            })
            .collect(),
        Expr::Product(factors) => factors.iter().fold(
            vec![Term {
                coeff: 1,
                x: 0,
                u: 0,
            }],
            |acc, factor| distribute(&acc, &expand(factor)),
        ),
        Expr::Pow(base, k) => {
            let terms = expand(base);
            (0..*k).fold(
                vec![Term {
                    coeff: 1,
                    x: 0,
                    u: 0,
                }],
                |acc, _| distribute(&acc, &terms),
            )
        }
    }
}

fn distribute(left: &[Term], right: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            out.push(Term {
                coeff: checked(l.coeff.checked_mul(r.coeff)),
                x: l.x + r.x,
                u: l.u + r.u,
            });
        }
    }
    out
}

/// Expands `expr` in the cohomology of the unit sphere bundle of `η ⊕ ε`-type
/// bundles of rank `q` over `CP^n`, by rewriting with `x^{n+1} = 0` and
/// `U^2 = e·U`, where `e = x^{(q-1)/2}` for odd `q` and `e = 0` for even `q`.
///
/// Panics if an intermediate coefficient overflows `i128`.
pub fn lh_rewrite_oracle(expr: &Expr, n: u32, q: u32) -> NormalForm {
    let euler_exponent = (q % 2 == 1).then_some((q - 1) / 2);
    let mut a = vec![0i128; n as usize + 1];
    let mut b = vec![0i128; n as usize + 1];
    for mut term in expand(expr) {
        while term.u >= 2 {
            match euler_exponent {
                Some(e) => {
                    term.u -= 1;
                    term.x += e;
                }
                None => {
                    term.coeff = 0;
                    break;
                }
            }
        }
        if term.coeff == 0 || term.x > n {
            continue;
        }
        let slot = if term.u == 0 { &mut a } else { &mut b };
        slot[term.x as usize] = checked(slot[term.x as usize].checked_add(term.coeff));
    }
    NormalForm { a, b }
}

/// Largest `k` with `expr^k != 0` according to the oracle, searching up to
/// `limit`; `None` if every power up to `limit` is nonzero.
pub fn oracle_height(expr: &Expr, n: u32, q: u32, limit: u32) -> Option<u32> {
    if lh_rewrite_oracle(expr, n, q).is_zero() {
        return Some(0);
    }
    (1..=limit).find(|&k| lh_rewrite_oracle(&expr.clone().pow(k + 1), n, q).is_zero())
}

/// `U - x`.
pub fn kernel_generator_expr() -> Expr {
    Expr::Sum(vec![Expr::U, Expr::X.negated()])
}

/// `-x + 2U`.
pub fn ddot_euler_expr() -> Expr {
    Expr::Sum(vec![Expr::X.negated(), Expr::U.scaled(2)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub invariant: String,
    pub measured: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Worst observed value per measured quantity.
    pub measurements: BTreeMap<String, f64>,
}

impl VerificationOutcome {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            cases: 0,
            failures: Vec::new(),
            measurements: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(
        &mut self,
        input: impl Into<String>,
        invariant: impl Into<String>,
        measured: impl Into<Option<f64>>,
    ) {
        self.failures.push(Failure {
            input: input.into(),
            invariant: invariant.into(),
            measured: measured.into(),
        });
    }

    fn record(&mut self, key: &str, value: f64) {
        let slot = self.measurements.entry(key.to_string()).or_insert(value);
        if value > *slot {
            *slot = value;
        }
    }

    /// Folds another outcome's cases, failures and maxima into this one.
    pub fn absorb(&mut self, other: VerificationOutcome) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        for (k, v) in other.measurements {
            self.record(&k, v);
        }
    }
}

impl fmt::Display for VerificationOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "{status} {} ({} cases, {} failures)",
            self.suite,
            self.cases,
            self.failures.len()
        )?;
        for (k, v) in &self.measurements {
            writeln!(f, "  max {k} = {v:.3e}")?;
        }
        for failure in self.failures.iter().take(20) {
            match failure.measured {
                Some(m) => writeln!(
                    f,
                    "  {}: {} (measured {m:.3e})",
                    failure.input, failure.invariant
                )?,
                None => writeln!(f, "  {}: {}", failure.input, failure.invariant)?,
            }
        }
        if self.failures.len() > 20 {
            writeln!(f, "  ... {} more", self.failures.len() - 20)?;
        }
        Ok(())
    }
}

/// Anything that can be evaluated as a path in one fiber.
pub trait FiberPath {
    fn start(&self) -> &BundlePoint;
    fn end(&self) -> &BundlePoint;
    fn eval(&self, t: f64) -> BundlePoint;
}

impl FiberPath for PlannedPath {
    fn start(&self) -> &BundlePoint {
        PlannedPath::start(self)
    }

    fn end(&self) -> &BundlePoint {
        PlannedPath::end(self)
    }

    fn eval(&self, t: f64) -> BundlePoint {
        PlannedPath::eval(self, t)
    }
}

fn line_overlap(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm()
}

fn inspect_path<P: FiberPath + ?Sized>(
    path: &P,
    samples: usize,
    label: &str,
    outcome: &mut VerificationOutcome,
) {
    let samples = samples.max(2);
    let grid: Vec<f64> = (0..samples)
        .map(|k| k as f64 / (samples - 1) as f64)
        .collect();
    let points: Vec<BundlePoint> = grid.iter().map(|&t| path.eval(t)).collect();

    let endpoint = points[0]
        .distance(path.start())
        .max(points[samples - 1].distance(path.end()));
    let reference = points[0].observed_line();
    let mut drift: f64 = 0.0;
    let mut norm_error: f64 = 0.0;
    let mut lipschitz: f64 = 0.0;
    for (k, (&t, p)) in grid.iter().zip(&points).enumerate() {
        drift = drift.max(1.0 - line_overlap(&reference, &p.observed_line()));
        norm_error = norm_error.max((p.norm() - 1.0).abs());
        if k + 1 < samples {
            let chord = p.distance(&points[k + 1]) / (grid[k + 1] - t);
            lipschitz = lipschitz.max(chord);
        }
        if t + LIPSCHITZ_STEP <= 1.0 {
            let local = p.distance(&path.eval(t + LIPSCHITZ_STEP)) / LIPSCHITZ_STEP;
            lipschitz = lipschitz.max(local);
        }
    }

    outcome.cases += 1;
    outcome.record("endpoint_error", endpoint);
    outcome.record("base_drift", drift);
    outcome.record("norm_drift", norm_error);
    outcome.record("lipschitz", lipschitz);
    if endpoint > PATH_TOLERANCE {
        outcome.fail(label, "endpoint exactness", endpoint);
    }
    if drift > PATH_TOLERANCE {
        outcome.fail(label, "fiber invariance", drift);
    }
    if norm_error > PATH_TOLERANCE {
        outcome.fail(label, "normalization", norm_error);
    }
    if lipschitz > LIPSCHITZ_BOUND {
        outcome.fail(label, "sampled continuity", lipschitz);
    }
}

/// Checks endpoints, fiber invariance, normalization and sampled continuity
/// on a uniform grid of `samples` points.
pub fn check_path<P: FiberPath + ?Sized>(path: &P, samples: usize) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new("path");
    inspect_path(path, samples, "path", &mut outcome);
    outcome
}

/// Generator used by every randomized suite.
pub type SuiteRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SuiteRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A uniformly random unit representative in `C^{n+1}`.
pub fn random_rep(rng: &mut ChaCha8Rng, n: usize) -> ProjectiveRep {
    loop {
        let z: Vec<Complex64> = (0..=n).map(|_| gaussian_complex(rng)).collect();
        if let Ok(rep) = ProjectiveRep::normalized(z) {
            return rep;
        }
    }
}

/// A uniformly random point of the fiber over `[z]`.
pub fn random_fiber_point(rng: &mut ChaCha8Rng, z: &ProjectiveRep) -> BundlePoint {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        let c = Complex64::new(v[0] / norm, v[1] / norm);
        if let Ok(p) = BundlePoint::from_line_coordinate(z.clone(), c, v[2] / norm) {
            return p;
        }
    }
}

/// A random same-fiber pair; the second point carries a random gauge.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (BundlePoint, BundlePoint) {
    let z = random_rep(rng, n);
    let x = random_fiber_point(rng, &z);
    let gauge = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
    let y = random_fiber_point(rng, &z.with_gauge(gauge));
    (x, y)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Representatives in each cell of `CP^n`: the coordinate points and a
/// generic point whose last nonzero coordinate is the `j`-th, plus points with
/// that coordinate just above the cell tolerance.
fn boundary_reps(n: usize) -> Vec<(String, ProjectiveRep)> {
    let mut out = Vec::new();
    for j in 0..=n {
        out.push((format!("e{j}"), ProjectiveRep::coordinate_point(n, j)));
        let generic: Vec<Complex64> = (0..=n)
            .map(|i| {
                if i <= j {
                    Complex64::from_polar(1.0 + i as f64, 0.7 * i as f64 + 0.3)
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        out.push((
            format!("cell{j}"),
            ProjectiveRep::normalized(generic).expect("nonzero"),
        ));
        if j > 0 {
            let mut thin = vec![c(0.0, 0.0); n + 1];
            thin[0] = c(1.0, 0.0);
            thin[j] = c(0.0, 1e-9);
            out.push((
                format!("thin{j}"),
                ProjectiveRep::normalized(thin).expect("nonzero"),
            ));
        }
    }
    out
}

/// The unit vector obtained by turning `v` by `angle` toward a fiber
/// direction orthogonal to it.
fn turn(v: &BundlePoint, angle: f64) -> BundlePoint {
    let z = v.z().clone();
    let line = z.coords();
    let coeff: Complex64 = line.iter().zip(v.w()).map(|(a, b)| a.conj() * b).sum();
    // Orthonormal frame of the fiber (Re c, Im c, s); rotate within it.
    let coords = [coeff.re, coeff.im, v.s()];
    let pick = if coords[2].abs() < 0.9 {
        [0.0, 0.0, 1.0]
    } else {
        [1.0, 0.0, 0.0]
    };
    let dot: f64 = coords.iter().zip(&pick).map(|(a, b)| a * b).sum();
    let mut perp = [0.0; 3];
    for i in 0..3 {
        perp[i] = pick[i] - dot * coords[i];
    }
    let pn = perp.iter().map(|x| x * x).sum::<f64>().sqrt();
    let out: Vec<f64> = (0..3)
        .map(|i| angle.cos() * coords[i] + angle.sin() * perp[i] / pn)
        .collect();
    BundlePoint::from_line_coordinate(z, c(out[0], out[1]), out[2]).expect("unit")
}

/// Hand-built pairs on and around the partition boundaries.
pub fn boundary_pairs(n: usize) -> Vec<(String, BundlePoint, BundlePoint)> {
    let mut pairs = Vec::new();
    for (name, z) in boundary_reps(n) {
        let sigma = BundlePoint::section(z.clone());
        let off = BundlePoint::from_line_coordinate(z.clone(), c(0.6, 0.0), 0.8).unwrap();
        let tilted =
            BundlePoint::from_line_coordinate(z.clone(), c(-0.3, 0.4), -0.75f64.sqrt()).unwrap();
        let equator = BundlePoint::from_line_coordinate(z.clone(), c(0.0, 1.0), 0.0).unwrap();
        let above =
            BundlePoint::from_line_coordinate(z.clone(), c(2e-8, 0.0), (1.0f64 - 4e-16).sqrt())
                .unwrap();
        let below =
            BundlePoint::from_line_coordinate(z.clone(), c(0.0, 5e-9), -(1.0f64 - 2.5e-17).sqrt())
                .unwrap();
        let regauged = z.with_gauge(Complex64::from_polar(1.0, 2.1));
        let mut add = |label: &str, x: &BundlePoint, y: &BundlePoint| {
            pairs.push((format!("{name}/{label}"), x.clone(), y.clone()));
        };
        add("equal", &off, &off);
        add("orthogonal", &off, &equator);
        add("antipodal-off", &off, &off.negated());
        add("antipodal-tilted", &tilted, &tilted.negated());
        add("antipodal-equator", &equator, &equator.negated());
        add("sigma", &sigma, &sigma.negated());
        add("minus-sigma", &sigma.negated(), &sigma);
        add(
            "sigma-regauged",
            &sigma,
            &sigma.negated().with_gauge(Complex64::from_polar(1.0, -0.4)),
        );
        add("w-above-tol", &above, &above.negated());
        add("w-below-tol", &below, &below.negated());
        add("near-antipodal-off", &off, &turn(&off.negated(), 1e-5));
        add(
            "near-antipodal-sigma",
            &sigma,
            &turn(&sigma.negated(), 1e-5),
        );
        // Inner product -1 + 2·tol_anti: routed to the interpolation piece.
        let delta = (4.0 * DEFAULT_TOL_ANTI).sqrt();
        add("threshold-inside", &off, &turn(&off.negated(), delta));
        add("threshold-sigma", &sigma, &turn(&sigma.negated(), delta));
        let sigma_g = BundlePoint::section(regauged.clone());
        add("sigma-gauge-mixed", &sigma_g, &sigma.negated());
    }
    pairs
}

fn plan_with_defaults(x: &BundlePoint, y: &BundlePoint) -> Result<PlannedPath, PlannerError> {
    plan(x, y, DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL)
}

/// Path invariants for `trials` seeded random pairs plus all boundary pairs
/// over `CP^n`.
pub fn check_planner(n: usize, trials: usize, seed: u64, samples: usize) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new(format!("planner n={n}"));
    let mut rng = seeded_rng(seed ^ n as u64);
    let random = (0..trials).map(|i| {
        let (x, y) = random_pair(&mut rng, n);
        (format!("n={n} random#{i}"), x, y)
    });
    let constructed: Vec<_> = boundary_pairs(n)
        .into_iter()
        .map(|(label, x, y)| (format!("n={n} {label}"), x, y))
        .collect();
    for (label, x, y) in random.collect::<Vec<_>>().into_iter().chain(constructed) {
        match plan_with_defaults(&x, &y) {
            Ok(path) => inspect_path(&path, samples, &label, &mut outcome),
            Err(e) => {
                outcome.cases += 1;
                outcome.fail(label, format!("planning failed: {e}"), None);
            }
        }
    }
    outcome
}

/// Plans each pair with and without a random change of representative and
/// compares the paths on a grid.
pub fn check_gauge_invariance(n: usize, trials: usize, seed: u64) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new(format!("gauge n={n}"));
    let mut rng = seeded_rng(seed.wrapping_add(17) ^ n as u64);
    let mut pairs: Vec<_> = (0..trials)
        .map(|i| {
            let (x, y) = random_pair(&mut rng, n);
            (format!("random#{i}"), x, y)
        })
        .collect();
    pairs.extend(boundary_pairs(n));
    for (label, x, y) in pairs {
        outcome.cases += 1;
        let gx = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
        let gy = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
        let (Ok(p), Ok(q)) = (
            plan_with_defaults(&x, &y),
            plan_with_defaults(&x.with_gauge(gx), &y.with_gauge(gy)),
        ) else {
            outcome.fail(label, "planning failed", None);
            continue;
        };
        let gap = (0..=64)
            .map(|k| {
                let t = k as f64 / 64.0;
                p.eval(t).distance(&q.eval(t))
            })
            .fold(0.0, f64::max);
        outcome.record("gauge_gap", gap);
        if p.piece() != q.piece() {
            outcome.fail(&label, "piece changed under gauge", q.piece() as f64);
        }
        if gap > PATH_TOLERANCE {
            outcome.fail(label, "gauge invariance", gap);
        }
    }
    outcome
}

/// How often each partition piece is hit by random and boundary pairs.
pub fn partition_census(n: usize, trials: usize, seed: u64) -> BTreeMap<usize, usize> {
    let mut rng = seeded_rng(seed ^ (n as u64) << 8);
    let mut census = BTreeMap::new();
    let random: Vec<_> = (0..trials).map(|_| random_pair(&mut rng, n)).collect();
    let boundary = boundary_pairs(n).into_iter().map(|(_, x, y)| (x, y));
    for (x, y) in random.into_iter().chain(boundary) {
        if let Ok(piece) = classify_pair(&x, &y, DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL) {
            *census.entry(piece).or_insert(0) += 1;
        }
    }
    census
}

/// Classification is total and in range, the planner agrees with it, poles
/// are the only members of pieces `2..=n+2`, and every piece is witnessed.
pub fn check_partition(n: usize, trials: usize, seed: u64) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new(format!("partition n={n}"));
    let mut rng = seeded_rng(seed ^ (n as u64) << 8);
    let mut witnessed = vec![0usize; n + 3];
    let mut pairs: Vec<_> = (0..trials)
        .map(|i| {
            let (x, y) = random_pair(&mut rng, n);
            (format!("random#{i}"), x, y)
        })
        .collect();
    pairs.extend(boundary_pairs(n));
    for (label, x, y) in pairs {
        outcome.cases += 1;
        let piece = match classify_pair(&x, &y, DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL) {
            Ok(piece) => piece,
            Err(e) => {
                outcome.fail(label, format!("classification failed: {e}"), None);
                continue;
            }
        };
        if piece > n + 2 {
            outcome.fail(&label, "piece out of range", piece as f64);
            continue;
        }
        witnessed[piece] += 1;
        let w_norm = x.w().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if piece >= 2 && w_norm > DEFAULT_TOL_ANTI {
            outcome.fail(&label, "pole piece away from the poles", w_norm);
        }
        match plan_with_defaults(&x, &y) {
            Ok(path) if path.piece() == piece => {}
            Ok(path) => outcome.fail(&label, "planner piece disagrees", path.piece() as f64),
            Err(e) => outcome.fail(&label, format!("planning failed: {e}"), None),
        }
    }

    outcome.cases += 1;
    let x = BundlePoint::section(ProjectiveRep::coordinate_point(n, 0));
    let y = BundlePoint::section(ProjectiveRep::coordinate_point(n, n));
    if !matches!(
        classify_pair(&x, &y, DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL),
        Err(PlannerError::NotSameFiber { .. })
    ) {
        outcome.fail("different fibers", "not rejected", None);
    }

    for (piece, &count) in witnessed.iter().enumerate() {
        if count == 0 {
            outcome.fail(format!("piece {piece}"), "piece not witnessed", 0.0);
        }
    }
    outcome.record(
        "pieces_witnessed",
        witnessed.iter().filter(|&&c| c > 0).count() as f64,
    );
    outcome
}

/// Phase planner on the Hopf bundle for random and antipodal pairs.
pub fn check_hopf_planner(n: usize, trials: usize, seed: u64) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new(format!("hopf planner n={n}"));
    let mut rng = seeded_rng(seed.wrapping_add(99) ^ n as u64);
    for i in 0..trials + 1 {
        let z = random_rep(&mut rng, n);
        let phase = if i == trials {
            c(-1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, rng.random_range(-PI..PI))
        };
        let target: Vec<Complex64> = z.coords().iter().map(|c| c * phase).collect();
        let label = format!("hopf#{i}");
        match plan_hopf(z.coords(), &target, DEFAULT_TOL_ANTI) {
            Ok(path) => inspect_path(&path, DEFAULT_SAMPLES, &label, &mut outcome),
            Err(e) => {
                outcome.cases += 1;
                outcome.fail(label, format!("planning failed: {e}"), None);
            }
        }
    }
    outcome
}

fn compare(
    outcome: &mut VerificationOutcome,
    label: String,
    report: Result<TCReport, impl fmt::Display>,
    check: impl FnOnce(&TCReport) -> Result<(), String>,
) {
    outcome.cases += 1;
    match report {
        Ok(r) => {
            if let Err(why) = check(&r) {
                outcome.fail(label, why, r.lower as f64);
            }
        }
        Err(e) => outcome.fail(label, format!("engine error: {e}"), None),
    }
}

fn canonical(n: u32) -> BundleDescriptor {
    let base = BaseSpace::complex_projective(n);
    BundleDescriptor::canonical_line(&base, 0).expect("CP^n has a canonical line")
}

/// Regenerates the sectional category and complexity tables for `kη` and
/// `η ⊕ ε` over `CP^n`, `n ≤ n_max`, against the published values.
pub fn check_bounds_tables(n_max: u32) -> VerificationOutcome {
    let mut outcome = VerificationOutcome::new(format!("bounds tables n<={n_max}"));
    for n in 1..=n_max {
        let eta = canonical(n);
        for k in 1..=n_max {
            let expected = n / k;
            let report = k_fold_sum(&eta, k)
                .map_err(|e| e.to_string())
                .and_then(|b| secat_sphere_bundle(&b).map_err(|e| e.to_string()));
            compare(&mut outcome, format!("secat {k}eta CP^{n}"), report, |r| {
                (r.exact_value() == Some(expected))
                    .then_some(())
                    .ok_or_else(|| format!("expected exact {expected}, got {}", r.summary()))
            });
        }

        compare(
            &mut outcome,
            format!("TC eta CP^{n}"),
            tc_sphere_bundle(&eta),
            |r| {
                (r.exact_value() == Some(1))
                    .then_some(())
                    .ok_or_else(|| format!("expected exact 1, got {}", r.summary()))
            },
        );

        let base = eta.base().clone();
        let sum = whitney_sum(&eta, &BundleDescriptor::trivial_line(&base))
            .map_err(|e| e.to_string())
            .and_then(|b| tc_sphere_bundle(&b).map_err(|e| e.to_string()));
        compare(&mut outcome, format!("TC eta+eps CP^{n}"), sum, |r| {
            if n % 2 == 0 {
                (r.exact_value() == Some(n + 2) && r.has_rule(RuleId::TrivialSummandLower))
                    .then_some(())
                    .ok_or_else(|| format!("expected exact {}, got {}", n + 2, r.summary()))
            } else {
                let within = r.lower > n && r.upper.finite().is_some_and(|u| u <= n + 2);
                let flagged = !r.exact || r.has_rule(RuleId::StrongerThanPublished);
                (within && flagged).then_some(()).ok_or_else(|| {
                    format!(
                        "expected within [{}, {}], got {}",
                        n + 1,
                        n + 2,
                        r.summary()
                    )
                })
            }
        });

        outcome.cases += 1;
        let dim = tc_dimension_upper(2, 1, 2 * n);
        if dim != n + 2 {
            outcome.fail(
                format!("dimension upper CP^{n}"),
                "expected n+2",
                dim as f64,
            );
        }
    }
    outcome
}

/// Oracle agreement for products of basis monomials `x^a U^b` (`a ≤ n`,
/// `b ≤ 2`) and heights of `U - x` and `-x + 2U`, over `CP^n` for `n ≤ n_max`.
pub fn check_lh_oracle(n_max: u32) -> VerificationOutcome {
    use crate::ring::{RingDescriptor, RingElement};

    let mut outcome = VerificationOutcome::new(format!("leray-hirsch oracle n<={n_max}"));
    for n in 1..=n_max {
        let ring = RingDescriptor::cohomology_cp(n);
        let x = RingElement::generator(&ring, 0).expect("generator");
        let one = LHElement::from_base(RingElement::one(&ring), x.clone(), 2).expect("unit");
        let u = LHElement::fundamental_class(x.clone(), 2).expect("U");
        let xl = LHElement::from_base(x.clone(), x.clone(), 2).expect("x");
        let basis = |a: u32, b: u32| -> LHElement {
            let mut acc = one.clone();
            for _ in 0..a {
                acc = acc.cup(&xl).expect("same module");
            }
            for _ in 0..b {
                acc = acc.cup(&u).expect("same module");
            }
            acc
        };
        for a in 0..=n {
            for b in 0..=2 {
                for a2 in 0..=n {
                    for b2 in 0..=2 {
                        outcome.cases += 1;
                        let product = basis(a, b).cup(&basis(a2, b2)).expect("same module");
                        let expr =
                            Expr::Product(vec![Expr::monomial(a, b), Expr::monomial(a2, b2)]);
                        let oracle = lh_rewrite_oracle(&expr, n, 3);
                        if !oracle.matches(&product) {
                            outcome.fail(
                                format!("n={n} x^{a}U^{b} * x^{a2}U^{b2}"),
                                format!("ring gives {product}, oracle {oracle}"),
                                None,
                            );
                        }
                    }
                }
            }
        }

        let kernel = LHElement::kernel_generator(x.clone(), 2).expect("kernel generator");
        let ddot = LHElement::new(x.negated(), RingElement::constant(&ring, 2), x.clone(), 2)
            .expect("ddot euler");
        for (name, element, expr, expected) in [
            ("U - x", &kernel, kernel_generator_expr(), Some(n + 1)),
            ("-x + 2U", &ddot, ddot_euler_expr(), None),
        ] {
            outcome.cases += 1;
            let ring_height = element.height().ok();
            let oracle = oracle_height(&expr, n, 3, 4 * n + 8);
            if ring_height != oracle || expected.is_some_and(|h| ring_height != Some(h)) {
                outcome.fail(
                    format!("height({name}) n={n}"),
                    format!("ring {ring_height:?}, oracle {oracle:?}, expected {expected:?}"),
                    ring_height.map(f64::from),
                );
            }
            for k in 1..=n + 2 {
                outcome.cases += 1;
                let oracle = lh_rewrite_oracle(&expr.clone().pow(k), n, 3);
                if !oracle.matches(&element.power(k)) {
                    outcome.fail(
                        format!("({name})^{k} n={n}"),
                        format!("ring {}, oracle {oracle}", element.power(k)),
                        None,
                    );
                }
            }
        }
    }
    outcome
}

/// A [`FiberPath`] whose `s` component is negated for `t > 1/2`.
pub struct CorruptedPath<P> {
    pub inner: P,
}

impl<P: FiberPath> FiberPath for CorruptedPath<P> {
    fn start(&self) -> &BundlePoint {
        self.inner.start()
    }

    fn end(&self) -> &BundlePoint {
        self.inner.end()
    }

    fn eval(&self, t: f64) -> BundlePoint {
        let p = self.inner.eval(t);
        if t > 0.5 {
            let z = p.z().clone();
            BundlePoint::new(z, p.w().to_vec(), -p.s()).expect("reflection keeps invariants")
        } else {
            p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::plan_default;
    use proptest::prelude::*;

    #[test]
    fn oracle_examples() {
        let uu = lh_rewrite_oracle(&Expr::Product(vec![Expr::U, Expr::U]), 3, 3);
        assert_eq!(
            uu,
            NormalForm {
                a: vec![0; 4],
                b: vec![0, 1, 0, 0]
            }
        );
        let sq = lh_rewrite_oracle(&kernel_generator_expr().pow(2), 3, 3);
        assert_eq!(
            sq,
            NormalForm {
                a: vec![0, 0, 1, 0],
                b: vec![0, -1, 0, 0]
            }
        );
        assert!(lh_rewrite_oracle(&Expr::X.pow(4), 3, 3).is_zero());
        assert!(lh_rewrite_oracle(&Expr::U.pow(2), 3, 4).is_zero());
        assert_eq!(lh_rewrite_oracle(&Expr::Const(-7), 1, 3).a, vec![-7, 0]);
    }

    #[test]
    fn oracle_heights() {
        for n in 1..=6 {
            assert_eq!(
                oracle_height(&kernel_generator_expr(), n, 3, 40),
                Some(n + 1)
            );
            assert_eq!(
                oracle_height(&ddot_euler_expr(), n, 3, 40),
                Some(n + (n + 1) % 2)
            );
        }
        assert_eq!(oracle_height(&Expr::Const(0), 2, 3, 5), Some(0));
        assert_eq!(oracle_height(&Expr::Const(1), 2, 3, 5), None);
    }

    #[test]
    fn oracle_matches_ring() {
        let outcome = check_lh_oracle(4);
        assert!(outcome.passed(), "{outcome}");
    }

    #[test]
    fn constant_and_interpolation_paths_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (x, y) = random_pair(&mut rng, 2);
        let path = plan_default(&x, &x).unwrap();
        assert!(check_path(&path, 101).passed());
        let path = plan_default(&x, &y).unwrap();
        assert_eq!(path.piece(), 0);
        let outcome = check_path(&path, 257);
        assert!(outcome.passed(), "{outcome}");
    }

    #[test]
    fn corrupted_path_fails_continuity() {
        let z = ProjectiveRep::coordinate_point(2, 1);
        let x = BundlePoint::from_line_coordinate(z.clone(), c(0.6, 0.0), 0.8).unwrap();
        let y = BundlePoint::from_line_coordinate(z, c(0.0, 0.6), 0.8).unwrap();
        let path = CorruptedPath {
            inner: plan_default(&x, &y).unwrap(),
        };
        let outcome = check_path(&path, 101);
        assert!(!outcome.passed());
        assert!(outcome
            .failures
            .iter()
            .any(|f| f.invariant == "sampled continuity"));
    }

    #[test]
    fn boundary_pairs_cover_all_pieces() {
        for n in 1..=3 {
            let outcome = check_partition(n, 200, DEFAULT_SEED);
            assert!(outcome.passed(), "{outcome}");
            let census = partition_census(n, 50, DEFAULT_SEED);
            assert_eq!(
                census.keys().copied().collect::<Vec<_>>(),
                (0..n + 3).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn planner_suite_small() {
        let outcome = check_planner(2, 300, DEFAULT_SEED, 257);
        assert!(outcome.passed(), "{outcome}");
        assert!(outcome.measurements["lipschitz"] <= LIPSCHITZ_BOUND);
    }

    #[test]
    fn gauge_suite_small() {
        let outcome = check_gauge_invariance(3, 200, DEFAULT_SEED);
        assert!(outcome.passed(), "{outcome}");
    }

    #[test]
    fn hopf_suite_small() {
        let outcome = check_hopf_planner(3, 100, DEFAULT_SEED);
        assert!(outcome.passed(), "{outcome}");
    }

    #[test]
    fn tables_pass() {
        let outcome = check_bounds_tables(8);
        assert!(outcome.passed(), "{outcome}");
    }

    #[test]
    fn outcome_json_round_trip() {
        let mut outcome = VerificationOutcome::new("demo");
        outcome.cases = 2;
        outcome.fail("input", "invariant", 0.5);
        outcome.record("lipschitz", 3.0);
        let json = serde_json::to_string(&outcome).unwrap();
        let back: VerificationOutcome = serde_json::from_str(&json).unwrap();
        assert_eq!(back, outcome);
        assert!(!back.passed());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_paths_satisfy_invariants(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded_rng(seed);
            let (x, y) = random_pair(&mut rng, n);
            let path = plan_default(&x, &y).unwrap();
            let outcome = check_path(&path, 129);
            prop_assert!(outcome.passed(), "{}", outcome);
        }

        #[test]
        fn antipodal_paths_satisfy_invariants(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = seeded_rng(seed);
            let z = random_rep(&mut rng, n);
            let x = random_fiber_point(&mut rng, &z);
            let path = plan_default(&x, &x.negated()).unwrap();
            prop_assert_eq!(path.piece(), 1);
            let outcome = check_path(&path, 129);
            prop_assert!(outcome.passed(), "{}", outcome);
        }

        #[test]
        fn oracle_sum_is_additive(a in 0u32..4, b in 0u32..3, c in 0u32..4, d in 0u32..3) {
            let left = lh_rewrite_oracle(
                &Expr::Sum(vec![Expr::monomial(a, b), Expr::monomial(c, d)]), 3, 3);
            let p = lh_rewrite_oracle(&Expr::monomial(a, b), 3, 3);
            let q = lh_rewrite_oracle(&Expr::monomial(c, d), 3, 3);
            let a_sum: Vec<i128> = p.a.iter().zip(&q.a).map(|(x, y)| x + y).collect();
            let b_sum: Vec<i128> = p.b.iter().zip(&q.b).map(|(x, y)| x + y).collect();
            prop_assert_eq!(left, NormalForm { a: a_sum, b: b_sum });
        }
    }
}
