//! Interval bounds for sectional category and parametrized topological
//! complexity of sphere bundles.
//!
//! Every entry point collects the applicable rules, intersects the intervals
//! they give, and records each contribution in the report's provenance. Two
//! rules claiming different exact values is a hard error.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bundle::{ddot_of, whitney_sum, BundleDescriptor, BundleError};
use crate::ring::{Coefficients, LHElement, RingElement, RingError};

/// Largest number of atomic summands for which splittings are enumerated.
const MAX_SPLIT_ATOMS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("rules disagree: {first} claims {first_value}, {second} claims {second_value}")]
    Contradiction {
        first: RuleId,
        first_value: String,
        second: RuleId,
        second_value: String,
    },
    #[error("rank {found} is too small, at least {required} is required")]
    RankTooSmall { required: u32, found: u32 },
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SecatSphereBundle,
    SecatDdot,
    ParametrizedTc,
}

impl Quantity {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantity::SecatSphereBundle => "secat",
            Quantity::SecatDdot => "secat(ddot)",
            Quantity::ParametrizedTc => "TC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    SwHeightLower,
    EulerHeightLower,
    EulerHeightExact,
    NowhereZeroSection,
    ComplexStructureSection,
    FiberSphereTc,
    DdotEulerLower,
    TrivialSummandLower,
    DdotSecatUpper,
    DdotDimensionExact,
    DimensionConnectivityUpper,
    ComplexStructureExact,
    SplitSummandUpper,
    ContractibleFiber,
    NoUpperRule,
    StrongerThanPublished,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::SwHeightLower => "sw-height-lower",
            RuleId::EulerHeightLower => "euler-height-lower",
            RuleId::EulerHeightExact => "euler-height-exact",
            RuleId::NowhereZeroSection => "nowhere-zero-section",
            RuleId::ComplexStructureSection => "complex-structure-section",
            RuleId::FiberSphereTc => "fiber-sphere-tc",
            RuleId::DdotEulerLower => "ddot-euler-lower",
            RuleId::TrivialSummandLower => "trivial-summand-lower",
            RuleId::DdotSecatUpper => "ddot-secat-upper",
            RuleId::DdotDimensionExact => "ddot-dimension-exact",
            RuleId::DimensionConnectivityUpper => "dimension-connectivity-upper",
            RuleId::ComplexStructureExact => "complex-structure-exact",
            RuleId::SplitSummandUpper => "split-summand-upper",
            RuleId::ContractibleFiber => "contractible-fiber",
            RuleId::NoUpperRule => "no-upper-rule",
            RuleId::StrongerThanPublished => "stronger-than-published",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::SwHeightLower => {
                "secat of the sphere bundle is at least the height of w_q"
            }
            RuleId::EulerHeightLower => {
                "oriented case: secat of the sphere bundle is at least the height of the Euler class"
            }
            RuleId::EulerHeightExact => {
                "secat equals the Euler-class height h when dim B <= q*h + q (obstructions vanish)"
            }
            RuleId::NowhereZeroSection => "a nowhere-zero section gives secat = 0",
            RuleId::ComplexStructureSection => {
                "a complex structure gives the global section e -> i*e of the orthogonal-complement bundle"
            }
            RuleId::FiberSphereTc => {
                "TC of the fiber bounds TC from below; TC(S^m) is 1 for m odd and 2 for m even"
            }
            RuleId::DdotEulerLower => {
                "TC >= h(e(ddot)) + 1 from the cup-length of the diagonal kernel"
            }
            RuleId::TrivialSummandLower => {
                "for eta + eps with q odd: TC >= h(e(eta)) + 1, and + 2 when the height is even without 2-torsion"
            }
            RuleId::DdotSecatUpper => "TC <= secat(ddot) + 1",
            RuleId::DdotDimensionExact => {
                "TC = h(e(ddot)) + 1 when dim B <= (q-1)*h(e(ddot))"
            }
            RuleId::DimensionConnectivityUpper => {
                "TC < (2 dim X + dim B + 1)/(r + 1) for an r-connected fiber X"
            }
            RuleId::ComplexStructureExact => "a complex structure gives TC = 1",
            RuleId::SplitSummandUpper => {
                "for a splitting xi = eta + tau: TC <= secat(tau ddot) + secat(tau dot) + 2"
            }
            RuleId::ContractibleFiber => "a contractible fiber over a paracompact base gives TC = 0",
            RuleId::NoUpperRule => "no upper-bound rule applies",
            RuleId::StrongerThanPublished => {
                "exact value follows from the dimension criterion; the published conclusion for this family is only the interval"
            }
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `+∞` or a finite bound. Serialized as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperBound {
    Finite(u32),
    Infinite,
}

impl UpperBound {
    pub fn finite(self) -> Option<u32> {
        match self {
            UpperBound::Finite(v) => Some(v),
            UpperBound::Infinite => None,
        }
    }

    fn min(self, v: u32) -> Self {
        match self {
            UpperBound::Finite(u) => UpperBound::Finite(u.min(v)),
            UpperBound::Infinite => UpperBound::Finite(v),
        }
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(v) => write!(f, "{v}"),
            UpperBound::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for UpperBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperBound::Finite(v) => serializer.serialize_u32(*v),
            UpperBound::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for UpperBound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct UpperVisitor;
        impl Visitor<'_> for UpperVisitor {
            type Value = UpperBound;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<UpperBound, E> {
                u32::try_from(v)
                    .map(UpperBound::Finite)
                    .map_err(|_| E::custom("upper bound out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<UpperBound, E> {
                if v == "inf" {
                    Ok(UpperBound::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        deserializer.deserialize_any(UpperVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contribution {
    Lower(u32),
    Upper(u32),
    Exact(u32),
    Note,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub rule: RuleId,
    pub citation: String,
    pub contribution: Contribution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCReport {
    pub quantity: Quantity,
    pub lower: u32,
    pub upper: UpperBound,
    pub exact: bool,
    pub provenance: Vec<ProvenanceEntry>,
}

impl TCReport {
    pub fn exact_value(&self) -> Option<u32> {
        self.exact.then_some(self.lower)
    }

    pub fn has_rule(&self, rule: RuleId) -> bool {
        self.provenance.iter().any(|p| p.rule == rule)
    }

    /// Rules whose contribution attains the final interval.
    pub fn deciding_rules(&self) -> Vec<RuleId> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in &self.provenance {
            let decides = match p.contribution {
                Contribution::Lower(v) => v == self.lower,
                Contribution::Upper(v) => UpperBound::Finite(v) == self.upper,
                Contribution::Exact(_) => true,
                Contribution::Note => p.rule == RuleId::StrongerThanPublished,
            };
            if decides && seen.insert(p.rule) {
                out.push(p.rule);
            }
        }
        out
    }

    /// One-line summary such as `TC = 4 (exact) [rule; rule]`.
    pub fn summary(&self) -> String {
        let rules: Vec<&str> = self
            .deciding_rules()
            .into_iter()
            .map(RuleId::as_str)
            .collect();
        let value = match (self.exact, self.upper) {
            (true, _) => format!("{} = {} (exact)", self.quantity.symbol(), self.lower),
            (false, UpperBound::Infinite) => {
                format!("{} >= {}", self.quantity.symbol(), self.lower)
            }
            (false, UpperBound::Finite(u)) => {
                format!("{} in [{}, {}]", self.quantity.symbol(), self.lower, u)
            }
        };
        format!("{value} [{}]", rules.join("; "))
    }
}

impl fmt::Display for TCReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary())?;
        for p in &self.provenance {
            let what = match p.contribution {
                Contribution::Lower(v) => format!(">= {v}"),
                Contribution::Upper(v) => format!("<= {v}"),
                Contribution::Exact(v) => format!("= {v}"),
                Contribution::Note => "note".to_string(),
            };
            writeln!(f, "  {:<30} {:<6} {}", p.rule.as_str(), what, p.citation)?;
        }
        Ok(())
    }
}

struct Accumulator {
    quantity: Quantity,
    lower: u32,
    upper: UpperBound,
    exact: Option<(RuleId, u32)>,
    provenance: Vec<ProvenanceEntry>,
}

impl Accumulator {
    fn new(quantity: Quantity) -> Self {
        Self {
            quantity,
            lower: 0,
            upper: UpperBound::Infinite,
            exact: None,
            provenance: Vec::new(),
        }
    }

    fn record(&mut self, rule: RuleId, contribution: Contribution) {
        self.provenance.push(ProvenanceEntry {
            rule,
            citation: rule.citation().to_string(),
            contribution,
        });
    }

    fn lower(&mut self, rule: RuleId, v: u32) {
        self.lower = self.lower.max(v);
        self.record(rule, Contribution::Lower(v));
    }

    fn upper(&mut self, rule: RuleId, v: u32) {
        self.upper = self.upper.min(v);
        self.record(rule, Contribution::Upper(v));
    }

    fn exact(&mut self, rule: RuleId, v: u32) -> Result<(), BoundsError> {
        if let Some((first, w)) = self.exact {
            if w != v {
                return Err(BoundsError::Contradiction {
                    first,
                    first_value: format!("= {w}"),
                    second: rule,
                    second_value: format!("= {v}"),
                });
            }
        } else {
            self.exact = Some((rule, v));
        }
        self.lower = self.lower.max(v);
        self.upper = self.upper.min(v);
        self.record(rule, Contribution::Exact(v));
        Ok(())
    }

    fn note(&mut self, rule: RuleId) {
        self.record(rule, Contribution::Note);
    }

    fn is_exact(&self) -> bool {
        UpperBound::Finite(self.lower) == self.upper
    }

    fn finish(mut self) -> Result<TCReport, BoundsError> {
        if let UpperBound::Finite(u) = self.upper {
            if self.lower > u {
                let lower_rule = self
                    .provenance
                    .iter()
                    .rev()
                    .find(|p| matches!(p.contribution, Contribution::Lower(v) | Contribution::Exact(v) if v == self.lower))
                    .map_or(RuleId::NoUpperRule, |p| p.rule);
                let upper_rule = self
                    .provenance
                    .iter()
                    .find(|p| matches!(p.contribution, Contribution::Upper(v) | Contribution::Exact(v) if v == u))
                    .map_or(RuleId::NoUpperRule, |p| p.rule);
                return Err(BoundsError::Contradiction {
                    first: lower_rule,
                    first_value: format!(">= {}", self.lower),
                    second: upper_rule,
                    second_value: format!("<= {u}"),
                });
            }
        } else {
            self.note(RuleId::NoUpperRule);
        }
        Ok(TCReport {
            quantity: self.quantity,
            lower: self.lower,
            exact: self.is_exact(),
            upper: self.upper,
            provenance: self.provenance,
        })
    }
}

/// Sectional category of the unit sphere bundle of `xi`.
pub fn secat_sphere_bundle(xi: &BundleDescriptor) -> Result<TCReport, BoundsError> {
    let q = xi.rank();
    let mut acc = Accumulator::new(Quantity::SecatSphereBundle);
    acc.lower(RuleId::SwHeightLower, xi.top_sw_class().height()?);
    if xi.independent_sections() >= 1 || xi.trivial_summands() >= 1 {
        acc.exact(RuleId::NowhereZeroSection, 0)?;
    }
    if let Some(euler) = xi.euler() {
        let h = euler.height()?;
        acc.lower(RuleId::EulerHeightLower, h);
        if xi.base().dimension() <= q * h + q {
            acc.exact(RuleId::EulerHeightExact, h)?;
        }
    }
    acc.finish()
}

/// Sectional category of the orthogonal-complement bundle over the unit
/// sphere bundle of `xi`.
pub fn secat_ddot(xi: &BundleDescriptor) -> Result<TCReport, BoundsError> {
    let d = ddot_of(xi)?;
    let mut acc = Accumulator::new(Quantity::SecatDdot);
    if let Some(hint) = d.secat_ddot_hint() {
        acc.exact(RuleId::ComplexStructureSection, hint)?;
    }
    if let Some(euler) = d.euler_ddot() {
        let h = euler.height()?;
        acc.lower(RuleId::EulerHeightLower, h);
        let fiber_rank = xi.rank() - 1;
        if d.sphere_bundle_dimension() <= fiber_rank * h + fiber_rank {
            acc.exact(RuleId::EulerHeightExact, h)?;
        }
    }
    for tau in split_candidates(xi)? {
        let tau_ddot = secat_ddot(&tau)?.upper.finite();
        let tau_dot = secat_sphere_bundle(&tau)?.upper.finite();
        if let (Some(a), Some(b)) = (tau_ddot, tau_dot) {
            acc.upper(RuleId::SplitSummandUpper, a + b + 1);
        }
    }
    if xi.independent_sections() >= 2 {
        // τ = ε ⊕ ε: complex with a section, both secats vanish.
        acc.upper(RuleId::SplitSummandUpper, 1);
    }
    acc.finish()
}

/// Parametrized topological complexity of the unit sphere bundle of `xi`.
pub fn tc_sphere_bundle(xi: &BundleDescriptor) -> Result<TCReport, BoundsError> {
    let q = xi.rank();
    if q < 2 {
        return Err(BoundsError::RankTooSmall {
            required: 2,
            found: q,
        });
    }
    let dim_base = xi.base().dimension();
    let d = ddot_of(xi)?;
    let mut acc = Accumulator::new(Quantity::ParametrizedTc);

    acc.lower(
        RuleId::FiberSphereTc,
        if q.is_multiple_of(2) { 1 } else { 2 },
    );

    if xi.has_complex_structure() {
        acc.exact(RuleId::ComplexStructureExact, 1)?;
    }

    let ddot_height = d.euler_ddot().map(LHElement::height).transpose()?;
    if let Some(h) = ddot_height {
        acc.lower(RuleId::DdotEulerLower, h + 1);
    }

    let mut published_interval_only = false;
    if q % 2 == 1 {
        if let Some(e_eta) = xi
            .complement_of_trivial_line()
            .and_then(|eta| eta.euler().cloned())
        {
            let eh = e_eta.height()?;
            let upgraded = eh % 2 == 0 && !xi.base().has_two_torsion((q - 1) * eh);
            acc.lower(
                RuleId::TrivialSummandLower,
                if upgraded { eh + 2 } else { eh + 1 },
            );
            published_interval_only = !upgraded;
        }
    }

    if let Some(u) = secat_ddot(xi)?.upper.finite() {
        acc.upper(RuleId::DdotSecatUpper, u + 1);
    }

    if let Some(h) = ddot_height {
        if dim_base <= (q - 1) * h {
            acc.exact(RuleId::DdotDimensionExact, h + 1)?;
        }
    }

    acc.upper(
        RuleId::DimensionConnectivityUpper,
        tc_dimension_upper(q - 1, q - 2, dim_base),
    );

    if xi.independent_sections() >= 2 {
        acc.upper(RuleId::SplitSummandUpper, tc_split_upper(0, 0));
    }
    for tau in split_candidates(xi)? {
        let tau_ddot = secat_ddot(&tau)?.upper.finite();
        let tau_dot = secat_sphere_bundle(&tau)?.upper.finite();
        if let (Some(a), Some(b)) = (tau_ddot, tau_dot) {
            acc.upper(RuleId::SplitSummandUpper, tc_split_upper(a, b));
        }
    }

    if published_interval_only && acc.is_exact() {
        acc.note(RuleId::StrongerThanPublished);
    }
    acc.finish()
}

/// Proper sub-sums `τ` of rank at least 2, one per distinct label.
fn split_candidates(xi: &BundleDescriptor) -> Result<Vec<BundleDescriptor>, BoundsError> {
    let atoms = xi.summands();
    if atoms.len() < 2 || atoms.len() > MAX_SPLIT_ATOMS {
        return Ok(Vec::new());
    }
    let full = (1u32 << atoms.len()) - 1;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1..full {
        let mut chosen = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a);
        let first = chosen.next().expect("mask is nonzero").clone();
        let tau = chosen.try_fold(first, |acc, a| whitney_sum(&acc, a))?;
        if tau.rank() >= 2 && seen.insert(tau.label().to_string()) {
            out.push(tau);
        }
    }
    Ok(out)
}

/// Largest integer strictly below `(2·dim X + dim B + 1)/(r + 1)`.
pub fn tc_dimension_upper(fiber_dim: u32, fiber_connectivity: u32, base_dim: u32) -> u32 {
    let numerator = 2 * fiber_dim + base_dim + 1;
    numerator.div_ceil(fiber_connectivity + 1) - 1
}

pub fn tc_split_upper(secat_tau_ddot: u32, secat_tau_dot: u32) -> u32 {
    secat_tau_ddot + secat_tau_dot + 2
}

/// `Some(0)` exactly when the fiber is contractible.
pub fn tc_trivial_fiber_rule(fiber_contractible: bool) -> Option<u32> {
    fiber_contractible.then_some(0)
}

/// Cup-lengths of the kernel of restriction along a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCupLength {
    pub integral: Option<u32>,
    pub mod_two: Option<u32>,
}

/// Cup-length of `ker s*` for a sphere bundle of rank `q` with a section,
/// computed as the height of the kernel generator `U - e`.
pub fn kernel_cuplength(
    q: u32,
    euler_eta: Option<&RingElement>,
    sw_top: Option<&RingElement>,
) -> Result<KernelCupLength, BoundsError> {
    if q < 2 {
        return Err(BoundsError::RankTooSmall {
            required: 2,
            found: q,
        });
    }
    let cup_length = |class: &RingElement, coefficients: Coefficients| {
        if class.ring().coefficients() != coefficients {
            return Err(BoundsError::InvalidInput(format!(
                "expected {coefficients:?} coefficients"
            )));
        }
        class.expect_degree(q - 1)?;
        Ok(LHElement::kernel_generator(class.clone(), q - 1)?.height()?)
    };
    Ok(KernelCupLength {
        integral: euler_eta
            .map(|e| cup_length(e, Coefficients::Integer))
            .transpose()?,
        mod_two: sw_top
            .map(|w| cup_length(w, Coefficients::ModTwo))
            .transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{k_fold_sum, BaseSpace, CustomBundle};
    use crate::ring::RingDescriptor;

    fn eta(n: u32) -> BundleDescriptor {
        BundleDescriptor::canonical_line(&BaseSpace::complex_projective(n), 0).unwrap()
    }

    fn eta_plus_eps(n: u32) -> BundleDescriptor {
        let e = eta(n);
        whitney_sum(&e, &BundleDescriptor::trivial_line(e.base())).unwrap()
    }

    #[test]
    fn secat_examples() {
        assert_eq!(secat_sphere_bundle(&eta(4)).unwrap().exact_value(), Some(4));
        let two_eta = k_fold_sum(&eta(5), 2).unwrap();
        assert_eq!(
            secat_sphere_bundle(&two_eta).unwrap().exact_value(),
            Some(2)
        );
        let nine = k_fold_sum(&eta(3), 5).unwrap();
        assert_eq!(secat_sphere_bundle(&nine).unwrap().exact_value(), Some(0));
    }

    #[test]
    fn secat_floor_table() {
        for n in 1..=8 {
            for k in 1..=8 {
                let r = secat_sphere_bundle(&k_fold_sum(&eta(n), k).unwrap()).unwrap();
                assert_eq!(r.exact_value(), Some(n / k), "n={n} k={k}");
                assert!(r.has_rule(RuleId::EulerHeightExact));
            }
        }
    }

    #[test]
    fn secat_without_upper_rule() {
        // A rank-2 bundle with Euler class 0 over a high-dimensional base,
        // sections undeclared: only the trivial lower bound survives.
        let base = BaseSpace::complex_projective(3);
        let nu = BundleDescriptor::custom(
            &base,
            CustomBundle {
                label: "nu".into(),
                rank: 2,
                euler: Some(RingElement::zero(base.ring())),
                sw_total: RingElement::one(base.ring_mod2()),
                has_complex_structure: false,
                independent_sections: 0,
            },
        )
        .unwrap();
        let r = secat_sphere_bundle(&nu).unwrap();
        assert_eq!(r.lower, 0);
        assert_eq!(r.upper, UpperBound::Infinite);
        assert!(!r.exact);
        assert!(r.has_rule(RuleId::NoUpperRule));
    }

    #[test]
    fn dimension_upper() {
        for n in 0..=8 {
            assert_eq!(tc_dimension_upper(2, 1, 2 * n), n + 2);
            assert_eq!(tc_dimension_upper(1, 0, 2 * n), 2 * n + 2);
        }
        assert_eq!(tc_dimension_upper(3, 2, 0), 2);
    }

    #[test]
    fn split_upper_and_trivial_fiber() {
        assert_eq!(tc_split_upper(0, 0), 2);
        assert_eq!(tc_split_upper(1, 2), 5);
        assert_eq!(tc_split_upper(0, 7), 9);
        assert_eq!(tc_trivial_fiber_rule(true), Some(0));
        assert_eq!(tc_trivial_fiber_rule(false), None);
    }

    #[test]
    fn kernel_cuplengths() {
        for n in 1..=6 {
            let ring = RingDescriptor::cohomology_cp(n);
            let x = RingElement::generator(&ring, 0).unwrap();
            let w = x.mod2_reduce().unwrap();
            let k = kernel_cuplength(3, Some(&x), Some(&w)).unwrap();
            assert_eq!(k.integral, Some(n + 1));
            assert_eq!(k.mod_two, Some(n + 1));
        }
        let ring = RingDescriptor::cohomology_cp(4);
        let zero = RingElement::zero(&ring);
        assert_eq!(
            kernel_cuplength(3, Some(&zero), None).unwrap().integral,
            Some(1)
        );
        let x = RingElement::generator(&ring, 0).unwrap();
        assert!(kernel_cuplength(5, Some(&x), None).is_err());
        assert!(kernel_cuplength(1, None, None).is_err());
        assert!(kernel_cuplength(3, None, Some(&x)).is_err());
    }

    #[test]
    fn hopf_tc_is_one() {
        for n in 1..=8 {
            let r = tc_sphere_bundle(&eta(n)).unwrap();
            assert_eq!(r.exact_value(), Some(1));
            assert!(r.has_rule(RuleId::ComplexStructureExact));
        }
    }

    #[test]
    fn eta_plus_eps_even() {
        for n in [2, 4, 6, 8] {
            let r = tc_sphere_bundle(&eta_plus_eps(n)).unwrap();
            assert_eq!(r.exact_value(), Some(n + 2), "n={n}");
            assert!(r.has_rule(RuleId::TrivialSummandLower));
            assert!(r.has_rule(RuleId::DdotDimensionExact));
            assert!(!r.has_rule(RuleId::StrongerThanPublished));
        }
        assert_eq!(
            tc_sphere_bundle(&eta_plus_eps(2)).unwrap().summary(),
            "TC = 4 (exact) [ddot-euler-lower; trivial-summand-lower; ddot-secat-upper; ddot-dimension-exact; dimension-connectivity-upper; split-summand-upper]"
        );
    }

    #[test]
    fn eta_plus_eps_odd() {
        for n in [1, 3, 5, 7] {
            let r = tc_sphere_bundle(&eta_plus_eps(n)).unwrap();
            assert!(r.lower > n);
            assert!(r.upper.finite().unwrap() <= n + 2);
            assert_eq!(r.exact_value(), Some(n + 1));
            assert!(r.has_rule(RuleId::StrongerThanPublished));
        }
    }

    #[test]
    fn two_sections_give_upper_two() {
        let base = BaseSpace::complex_projective(3);
        let nu = BundleDescriptor::custom(
            &base,
            CustomBundle {
                label: "nu".into(),
                rank: 4,
                euler: Some(RingElement::zero(base.ring())),
                sw_total: RingElement::one(base.ring_mod2()),
                has_complex_structure: false,
                independent_sections: 2,
            },
        )
        .unwrap();
        let r = tc_sphere_bundle(&nu).unwrap();
        assert_eq!(r.upper, UpperBound::Finite(2));
        assert_eq!(r.lower, 1);
        assert!(r.has_rule(RuleId::SplitSummandUpper));
    }

    #[test]
    fn complex_summand_with_section() {
        // η ⊕ (ε ⊕ ε): τ = ε ⊕ ε is complex with a section.
        let e = eta(3);
        let xi = whitney_sum(&e, &BundleDescriptor::trivial(e.base(), 2).unwrap()).unwrap();
        let r = tc_sphere_bundle(&xi).unwrap();
        // The whole sum is complex, so the exact value 1 is below the split bound.
        assert_eq!(r.exact_value(), Some(1));

        let nu = BundleDescriptor::custom(
            e.base(),
            CustomBundle {
                label: "nu".into(),
                rank: 3,
                euler: None,
                sw_total: RingElement::one(e.base().ring_mod2()),
                has_complex_structure: false,
                independent_sections: 0,
            },
        )
        .unwrap();
        let xi = whitney_sum(&nu, &BundleDescriptor::trivial(e.base(), 2).unwrap()).unwrap();
        let r = tc_sphere_bundle(&xi).unwrap();
        assert_eq!(r.upper, UpperBound::Finite(2));
        assert_eq!(r.lower, 2);
        assert!(r.exact);
    }

    #[test]
    fn rank_one_is_rejected() {
        let e = eta(2);
        assert_eq!(
            tc_sphere_bundle(&BundleDescriptor::trivial_line(e.base())),
            Err(BoundsError::RankTooSmall {
                required: 2,
                found: 1
            })
        );
    }

    #[test]
    fn contradiction_tripwire() {
        let mut acc = Accumulator::new(Quantity::ParametrizedTc);
        acc.exact(RuleId::ComplexStructureExact, 1).unwrap();
        assert!(matches!(
            acc.exact(RuleId::DdotDimensionExact, 3),
            Err(BoundsError::Contradiction { .. })
        ));
        let mut acc = Accumulator::new(Quantity::ParametrizedTc);
        acc.lower(RuleId::FiberSphereTc, 3);
        acc.upper(RuleId::DimensionConnectivityUpper, 2);
        assert!(matches!(
            acc.finish(),
            Err(BoundsError::Contradiction { .. })
        ));
    }

    #[test]
    fn report_json_round_trip() {
        for r in [
            tc_sphere_bundle(&eta_plus_eps(3)).unwrap(),
            secat_sphere_bundle(&eta(2)).unwrap(),
        ] {
            let text = serde_json::to_string(&r).unwrap();
            let back: TCReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r);
        }
        let text = serde_json::to_string(&UpperBound::Infinite).unwrap();
        assert_eq!(text, "\"inf\"");
        assert_eq!(
            serde_json::from_str::<UpperBound>(&text).unwrap(),
            UpperBound::Infinite
        );
    }

    #[test]
    fn report_invariants_hold_across_families() {
        for n in 1..=6 {
            for k in 1..=4 {
                let xi = k_fold_sum(&eta(n), k).unwrap();
                let with_eps =
                    whitney_sum(&xi, &BundleDescriptor::trivial_line(xi.base())).unwrap();
                for b in [&xi, &with_eps] {
                    for r in [
                        tc_sphere_bundle(b).unwrap(),
                        secat_sphere_bundle(b).unwrap(),
                    ] {
                        if let UpperBound::Finite(u) = r.upper {
                            assert!(r.lower <= u);
                        }
                        assert_eq!(r.exact, r.upper == UpperBound::Finite(r.lower));
                    }
                }
            }
        }
    }
}
