//! Vector bundles described by their characteristic classes.
//!
//! A [`BundleDescriptor`] records rank, orientability, the Euler class and the
//! total Stiefel–Whitney class together with structural facts that the bound
//! rules consume (complex structure, trivial summands, nowhere-zero
//! sections). Structural flags are declared, never verified. Whitney sums keep
//! the list of atomic summands so the rule engine can look for splittings.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ring::{Coefficients, Generator, LHElement, RingDescriptor, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("bundles live over different base spaces")]
    BaseMismatch,
    #[error("rank {found} is too small, at least {required} is required")]
    RankTooSmall { required: u32, found: u32 },
    #[error("invalid bundle descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid base space: {0}")]
    InvalidBase(String),
    #[error("no symbolic Euler class is available for the orthogonal-complement bundle")]
    NoSymbolicDdot,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseFamily {
    Point,
    ComplexProjective { n: u32 },
    ProductComplexProjective { dims: Vec<u32> },
    Custom { name: String },
}

impl fmt::Display for BaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseFamily::Point => f.write_str("pt"),
            BaseFamily::ComplexProjective { n } => write!(f, "CP^{n}"),
            BaseFamily::ProductComplexProjective { dims } => {
                let parts: Vec<String> = dims.iter().map(|n| format!("CP^{n}")).collect();
                f.write_str(&parts.join(" x "))
            }
            BaseFamily::Custom { name } => f.write_str(name),
        }
    }
}

/// A CW base space known through its integral cohomology ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseSpace {
    family: BaseFamily,
    ring: Arc<RingDescriptor>,
    ring_mod2: Arc<RingDescriptor>,
    dimension: u32,
    /// Degrees `d` where `H^d(B; Z)` has 2-torsion. Empty for the built-in
    /// bases, whose integral cohomology is free.
    two_torsion_degrees: BTreeSet<u32>,
}

impl BaseSpace {
    pub fn point() -> Arc<Self> {
        let ring = RingDescriptor::cohomology_point();
        Arc::new(Self {
            family: BaseFamily::Point,
            ring_mod2: ring.mod_two_shadow(),
            ring,
            dimension: 0,
            two_torsion_degrees: BTreeSet::new(),
        })
    }

    pub fn complex_projective(n: u32) -> Arc<Self> {
        let ring = RingDescriptor::cohomology_cp(n);
        Arc::new(Self {
            family: BaseFamily::ComplexProjective { n },
            ring_mod2: ring.mod_two_shadow(),
            ring,
            dimension: 2 * n,
            two_torsion_degrees: BTreeSet::new(),
        })
    }

    /// `CP^{n_1} x ... x CP^{n_k}` with generators `x1, ..., xk`.
    pub fn product_complex_projective(dims: &[u32]) -> Result<Arc<Self>, BundleError> {
        if dims.is_empty() {
            return Err(BundleError::InvalidBase("empty product".into()));
        }
        let generators = dims
            .iter()
            .enumerate()
            .map(|(i, n)| Generator::new(format!("x{}", i + 1), 2, n + 1))
            .collect();
        let ring = RingDescriptor::new(generators, Coefficients::Integer)?;
        Ok(Arc::new(Self {
            family: BaseFamily::ProductComplexProjective {
                dims: dims.to_vec(),
            },
            ring_mod2: ring.mod_two_shadow(),
            ring,
            dimension: dims.iter().map(|n| 2 * n).sum(),
            two_torsion_degrees: BTreeSet::new(),
        }))
    }

    pub fn custom(
        name: impl Into<String>,
        ring: Arc<RingDescriptor>,
        dimension: u32,
        two_torsion_degrees: BTreeSet<u32>,
    ) -> Result<Arc<Self>, BundleError> {
        if ring.coefficients() != Coefficients::Integer {
            return Err(BundleError::InvalidBase(
                "base ring must have integer coefficients".into(),
            ));
        }
        if dimension < ring.top_degree() {
            return Err(BundleError::InvalidBase(format!(
                "dimension {dimension} is below the top cohomological degree {}",
                ring.top_degree()
            )));
        }
        Ok(Arc::new(Self {
            family: BaseFamily::Custom { name: name.into() },
            ring_mod2: ring.mod_two_shadow(),
            ring,
            dimension,
            two_torsion_degrees,
        }))
    }

    pub fn family(&self) -> &BaseFamily {
        &self.family
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn ring_mod2(&self) -> &Arc<RingDescriptor> {
        &self.ring_mod2
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn has_two_torsion(&self, degree: u32) -> bool {
        self.two_torsion_degrees.contains(&degree)
    }
}

/// A real vector bundle over a [`BaseSpace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDescriptor {
    base: Arc<BaseSpace>,
    label: String,
    rank: u32,
    orientable: bool,
    euler: Option<RingElement>,
    sw_total: RingElement,
    has_complex_structure: bool,
    trivial_summands: u32,
    independent_sections: u32,
    /// Atomic summands, sorted; empty when `self` is itself atomic.
    summands: Vec<BundleDescriptor>,
}

/// Characteristic data for [`BundleDescriptor::custom`].
#[derive(Debug, Clone)]
pub struct CustomBundle {
    pub label: String,
    pub rank: u32,
    pub euler: Option<RingElement>,
    pub sw_total: RingElement,
    pub has_complex_structure: bool,
    pub independent_sections: u32,
}

impl BundleDescriptor {
    /// The canonical complex line bundle of one `CP^n` factor, viewed as a
    /// real rank-2 bundle.
    pub fn canonical_line(base: &Arc<BaseSpace>, factor: usize) -> Result<Self, BundleError> {
        let label = match base.family {
            BaseFamily::ProductComplexProjective { .. } => format!("eta{}", factor + 1),
            BaseFamily::ComplexProjective { .. } => "eta".to_string(),
            _ => {
                return Err(BundleError::InvalidBase(format!(
                    "{} has no canonical line bundle",
                    base.family
                )))
            }
        };
        let x = RingElement::generator(&base.ring, factor)?;
        let sw_total = &RingElement::one(&base.ring_mod2) + &x.mod2_reduce()?;
        Ok(Self {
            base: Arc::clone(base),
            label,
            rank: 2,
            orientable: true,
            euler: Some(x),
            sw_total,
            has_complex_structure: true,
            trivial_summands: 0,
            independent_sections: 0,
            summands: Vec::new(),
        })
    }

    pub fn trivial_line(base: &Arc<BaseSpace>) -> Self {
        Self {
            base: Arc::clone(base),
            label: "eps".to_string(),
            rank: 1,
            orientable: true,
            euler: Some(RingElement::zero(&base.ring)),
            sw_total: RingElement::one(&base.ring_mod2),
            has_complex_structure: false,
            trivial_summands: 1,
            independent_sections: 1,
            summands: Vec::new(),
        }
    }

    pub fn trivial(base: &Arc<BaseSpace>, rank: u32) -> Result<Self, BundleError> {
        k_fold_sum(&Self::trivial_line(base), rank)
    }

    /// An atomic bundle with user-supplied characteristic classes.
    pub fn custom(base: &Arc<BaseSpace>, spec: CustomBundle) -> Result<Self, BundleError> {
        let invalid = |msg: String| Err(BundleError::InvalidDescriptor(msg));
        if spec.rank == 0 {
            return invalid("rank must be at least 1".into());
        }
        if spec.sw_total.ring() != &base.ring_mod2 {
            return invalid("total Stiefel-Whitney class must live in the mod-2 base ring".into());
        }
        let degree_zero = spec.sw_total.component(0);
        if !degree_zero.is_one() {
            return invalid("total Stiefel-Whitney class must start with 1".into());
        }
        let top = spec.sw_total.component(spec.rank);
        let beyond_rank = spec
            .sw_total
            .terms()
            .any(|(e, _)| base.ring_mod2.monomial_degree(e) > spec.rank);
        if beyond_rank {
            return invalid("Stiefel-Whitney classes above the rank must vanish".into());
        }
        if let Some(euler) = &spec.euler {
            if euler.ring() != &base.ring {
                return invalid("Euler class must live in the integral base ring".into());
            }
            euler.expect_degree(spec.rank)?;
            if euler.mod2_reduce()? != top {
                return invalid(
                    "Euler class does not reduce to the top Stiefel-Whitney class".into(),
                );
            }
        }
        if spec.has_complex_structure && !spec.rank.is_multiple_of(2) {
            return invalid("a complex structure needs even rank".into());
        }
        if spec.independent_sections > spec.rank {
            return invalid("more independent sections than the rank".into());
        }
        if spec.independent_sections >= 1 {
            let euler_vanishes = spec.euler.as_ref().is_none_or(RingElement::is_zero);
            if !euler_vanishes || !top.is_zero() {
                return invalid("a nowhere-zero section forces the top classes to vanish".into());
            }
        }
        Ok(Self {
            base: Arc::clone(base),
            label: spec.label,
            rank: spec.rank,
            orientable: spec.euler.is_some(),
            euler: spec.euler,
            sw_total: spec.sw_total,
            has_complex_structure: spec.has_complex_structure,
            trivial_summands: 0,
            independent_sections: spec.independent_sections,
            summands: Vec::new(),
        })
    }

    /// Declares a complex structure on the whole bundle.
    pub fn declare_complex_structure(mut self) -> Result<Self, BundleError> {
        if !self.rank.is_multiple_of(2) {
            return Err(BundleError::InvalidDescriptor(
                "a complex structure needs even rank".into(),
            ));
        }
        self.has_complex_structure = true;
        Ok(self)
    }

    /// Declares `count` pointwise linearly independent nowhere-zero sections.
    pub fn declare_independent_sections(mut self, count: u32) -> Result<Self, BundleError> {
        if count > self.rank {
            return Err(BundleError::InvalidDescriptor(
                "more independent sections than the rank".into(),
            ));
        }
        if count >= 1 {
            let euler_vanishes = self.euler.as_ref().is_none_or(RingElement::is_zero);
            if !euler_vanishes || !self.top_sw_class().is_zero() {
                return Err(BundleError::InvalidDescriptor(
                    "a nowhere-zero section forces the top classes to vanish".into(),
                ));
            }
        }
        self.independent_sections = self.independent_sections.max(count);
        Ok(self)
    }

    pub fn base(&self) -> &Arc<BaseSpace> {
        &self.base
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn euler(&self) -> Option<&RingElement> {
        self.euler.as_ref()
    }

    pub fn sw_total(&self) -> &RingElement {
        &self.sw_total
    }

    /// `w_q` for `q` the rank.
    pub fn top_sw_class(&self) -> RingElement {
        self.sw_total.component(self.rank)
    }

    pub fn has_complex_structure(&self) -> bool {
        self.has_complex_structure
    }

    pub fn trivial_summands(&self) -> u32 {
        self.trivial_summands
    }

    pub fn independent_sections(&self) -> u32 {
        self.independent_sections
    }

    /// Atomic summands; an atomic bundle is its own single summand.
    pub fn summands(&self) -> &[BundleDescriptor] {
        if self.summands.is_empty() {
            std::slice::from_ref(self)
        } else {
            &self.summands
        }
    }

    fn is_trivial_line(&self) -> bool {
        self.rank == 1 && self.trivial_summands == 1
    }

    /// For `self = η ⊕ ε`, the summand `η` complementary to one trivial line.
    pub fn complement_of_trivial_line(&self) -> Option<BundleDescriptor> {
        let atoms = self.summands();
        let pos = atoms.iter().position(BundleDescriptor::is_trivial_line)?;
        let mut rest = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, a)| a.clone());
        let first = rest.next()?;
        Some(rest.fold(first, |acc, a| {
            whitney_sum(&acc, &a).expect("summands share a base")
        }))
    }
}

impl fmt::Display for BundleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.label, self.base.family)
    }
}

fn atoms_carry_complex_structure(atoms: &[BundleDescriptor]) -> bool {
    let trivial = atoms.iter().filter(|a| a.is_trivial_line()).count();
    trivial % 2 == 0
        && atoms
            .iter()
            .filter(|a| !a.is_trivial_line())
            .all(|a| a.has_complex_structure)
}

fn sum_label(atoms: &[BundleDescriptor]) -> String {
    let mut parts: Vec<(String, usize)> = Vec::new();
    for a in atoms {
        match parts.last_mut() {
            Some((label, count)) if *label == a.label => *count += 1,
            _ => parts.push((a.label.clone(), 1)),
        }
    }
    parts
        .into_iter()
        .map(|(label, count)| {
            if count == 1 {
                label
            } else {
                format!("{count}{label}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Whitney sum `a ⊕ b`.
pub fn whitney_sum(
    a: &BundleDescriptor,
    b: &BundleDescriptor,
) -> Result<BundleDescriptor, BundleError> {
    if a.base != b.base {
        return Err(BundleError::BaseMismatch);
    }
    let mut summands: Vec<BundleDescriptor> =
        a.summands().iter().chain(b.summands()).cloned().collect();
    summands.sort_by(|x, y| (&x.label, x.rank).cmp(&(&y.label, y.rank)));
    let euler = match (&a.euler, &b.euler) {
        (Some(ea), Some(eb)) => Some(ea.cup(eb)?),
        _ => None,
    };
    Ok(BundleDescriptor {
        base: Arc::clone(&a.base),
        label: sum_label(&summands),
        rank: a.rank + b.rank,
        orientable: a.orientable && b.orientable,
        euler,
        sw_total: a.sw_total.cup(&b.sw_total)?,
        has_complex_structure: (a.has_complex_structure && b.has_complex_structure)
            || atoms_carry_complex_structure(&summands),
        trivial_summands: a.trivial_summands + b.trivial_summands,
        independent_sections: a.independent_sections + b.independent_sections,
        summands,
    })
}

/// `a ⊕ a ⊕ ... ⊕ a` with `k` copies.
pub fn k_fold_sum(a: &BundleDescriptor, k: u32) -> Result<BundleDescriptor, BundleError> {
    if k == 0 {
        return Err(BundleError::InvalidDescriptor(
            "a k-fold sum needs k >= 1".into(),
        ));
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = whitney_sum(&acc, a)?;
    }
    Ok(acc)
}

/// The bundle over the unit sphere bundle whose fiber at `e` is the sphere of
/// unit vectors orthogonal to `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdotDescriptor {
    parent: BundleDescriptor,
    euler_ddot: Option<LHElement>,
    secat_ddot_hint: Option<u32>,
}

impl DdotDescriptor {
    pub fn parent(&self) -> &BundleDescriptor {
        &self.parent
    }

    /// The Euler class in the Leray–Hirsch module, when modeled.
    pub fn euler_ddot(&self) -> Option<&LHElement> {
        self.euler_ddot.as_ref()
    }

    pub fn secat_ddot_hint(&self) -> Option<u32> {
        self.secat_ddot_hint
    }

    /// Total-space dimension of the parent's unit sphere bundle.
    pub fn sphere_bundle_dimension(&self) -> u32 {
        self.parent.base.dimension + self.parent.rank - 1
    }

    /// Closed-form height of the Euler class from the parity rule:
    /// `h(e(η)) + 1` when `h(e(η))` is even and the base has no 2-torsion in
    /// degree `(q-1)·h(e(η))`, and `h(e(η))` otherwise.
    pub fn ddot_euler_height(&self) -> Result<u32, BundleError> {
        let euler = self
            .euler_ddot
            .as_ref()
            .ok_or(BundleError::NoSymbolicDdot)?;
        let eta_height = euler.euler_eta().height()?;
        let torsion_degree = euler.u_degree() * eta_height;
        if eta_height % 2 == 0 && !self.parent.base.has_two_torsion(torsion_degree) {
            Ok(eta_height + 1)
        } else {
            Ok(eta_height)
        }
    }
}

pub fn ddot_of(parent: &BundleDescriptor) -> Result<DdotDescriptor, BundleError> {
    if parent.rank < 2 {
        return Err(BundleError::RankTooSmall {
            required: 2,
            found: parent.rank,
        });
    }
    let secat_ddot_hint = parent.has_complex_structure.then_some(0);
    let euler_ddot = if parent.rank % 2 == 1 {
        match parent.complement_of_trivial_line() {
            Some(eta) => match eta.euler() {
                Some(e_eta) => {
                    // e(ξ̈) = -e(η) + 2U
                    let ring = e_eta.ring().clone();
                    Some(LHElement::new(
                        e_eta.negated(),
                        RingElement::constant(&ring, 2),
                        e_eta.clone(),
                        parent.rank - 1,
                    )?)
                }
                None => None,
            },
            None => None,
        }
    } else {
        None
    };
    Ok(DdotDescriptor {
        parent: parent.clone(),
        euler_ddot,
        secat_ddot_hint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eta(n: u32) -> BundleDescriptor {
        BundleDescriptor::canonical_line(&BaseSpace::complex_projective(n), 0).unwrap()
    }

    fn x_power(n: u32, k: u32) -> RingElement {
        let ring = RingDescriptor::cohomology_cp(n);
        RingElement::monomial(&ring, &[k], 1).unwrap()
    }

    #[test]
    fn sum_of_canonical_lines() {
        let e = eta(5);
        let s = whitney_sum(&e, &e).unwrap();
        assert_eq!(s.rank(), 4);
        assert_eq!(s.euler(), Some(&x_power(5, 2)));
        assert!(s.has_complex_structure());
        assert_eq!(s.label(), "2eta");
        assert_eq!(k_fold_sum(&e, 2).unwrap(), s);
    }

    #[test]
    fn trivial_summand_kills_top_classes() {
        let e = eta(3);
        let eps = BundleDescriptor::trivial_line(e.base());
        let s = whitney_sum(&e, &eps).unwrap();
        assert_eq!(s.rank(), 3);
        assert!(s.euler().unwrap().is_zero());
        assert!(s.top_sw_class().is_zero());
        assert_eq!(s.trivial_summands(), 1);
        assert!(!s.has_complex_structure());
        assert_eq!(s.complement_of_trivial_line().unwrap(), e);
    }

    #[test]
    fn two_trivial_lines() {
        let base = BaseSpace::point();
        let eps = BundleDescriptor::trivial_line(&base);
        let s = whitney_sum(&eps, &eps).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.independent_sections(), 2);
        assert!(s.has_complex_structure());
        assert_eq!(BundleDescriptor::trivial(&base, 2).unwrap(), s);
    }

    #[test]
    fn k_fold_edge_cases() {
        let e = eta(4);
        assert_eq!(k_fold_sum(&e, 1).unwrap(), e);
        assert!(k_fold_sum(&eta(3), 4).unwrap().euler().unwrap().is_zero());
        assert!(k_fold_sum(&e, 0).is_err());
    }

    #[test]
    fn base_mismatch() {
        assert_eq!(
            whitney_sum(&eta(2), &eta(3)),
            Err(BundleError::BaseMismatch)
        );
    }

    #[test]
    fn ddot_of_eta_plus_eps() {
        let e = eta(4);
        let xi = whitney_sum(&e, &BundleDescriptor::trivial_line(e.base())).unwrap();
        let d = ddot_of(&xi).unwrap();
        let class = d.euler_ddot().unwrap();
        let x = x_power(4, 1);
        assert_eq!(class.base(), &x.negated());
        assert_eq!(class.fiber(), &RingElement::constant(x.ring(), 2));
        assert_eq!(class.euler_eta(), &x);
        assert_eq!(class.u_degree(), 2);
        assert_eq!(d.secat_ddot_hint(), None);
        assert_eq!(d.sphere_bundle_dimension(), 10);
    }

    #[test]
    fn ddot_of_complex_bundle() {
        let d = ddot_of(&eta(3)).unwrap();
        assert_eq!(d.secat_ddot_hint(), Some(0));
        assert!(d.euler_ddot().is_none());
        assert_eq!(d.ddot_euler_height(), Err(BundleError::NoSymbolicDdot));
    }

    #[test]
    fn ddot_of_generic_and_small() {
        let base = BaseSpace::complex_projective(2);
        let generic = BundleDescriptor::custom(
            &base,
            CustomBundle {
                label: "nu".into(),
                rank: 2,
                euler: Some(x_power(2, 1).scaled(3)),
                sw_total: &RingElement::one(base.ring_mod2())
                    + &x_power(2, 1).mod2_reduce().unwrap(),
                has_complex_structure: false,
                independent_sections: 0,
            },
        )
        .unwrap();
        let d = ddot_of(&generic).unwrap();
        assert!(d.euler_ddot().is_none());
        assert_eq!(d.secat_ddot_hint(), None);
        assert_eq!(
            ddot_of(&BundleDescriptor::trivial_line(&base)),
            Err(BundleError::RankTooSmall {
                required: 2,
                found: 1
            })
        );
    }

    #[test]
    fn ddot_heights() {
        let at = |n: u32| {
            let e = eta(n);
            let xi = whitney_sum(&e, &BundleDescriptor::trivial_line(e.base())).unwrap();
            ddot_of(&xi).unwrap()
        };
        assert_eq!(at(2).ddot_euler_height().unwrap(), 3);
        assert_eq!(at(3).ddot_euler_height().unwrap(), 3);
        for n in 1..=8 {
            let d = at(n);
            assert_eq!(
                d.ddot_euler_height().unwrap(),
                d.euler_ddot().unwrap().height().unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn ddot_height_with_vanishing_euler() {
        // ξ = ε ⊕ ε ⊕ ε over CP^2: the complement is trivial with e(η) = 0.
        let base = BaseSpace::complex_projective(2);
        let xi = BundleDescriptor::trivial(&base, 3).unwrap();
        let d = ddot_of(&xi).unwrap();
        assert!(d.euler_ddot().unwrap().euler_eta().is_zero());
        assert_eq!(d.ddot_euler_height().unwrap(), 1);
        assert_eq!(d.euler_ddot().unwrap().height().unwrap(), 1);
    }

    #[test]
    fn two_torsion_blocks_the_upgrade() {
        let ring = RingDescriptor::cohomology_cp(2);
        let base = BaseSpace::custom("T", ring, 4, BTreeSet::from([4])).unwrap();
        let x = RingElement::generator(base.ring(), 0).unwrap();
        let e = BundleDescriptor::custom(
            &base,
            CustomBundle {
                label: "eta".into(),
                rank: 2,
                euler: Some(x.clone()),
                sw_total: &RingElement::one(base.ring_mod2()) + &x.mod2_reduce().unwrap(),
                has_complex_structure: true,
                independent_sections: 0,
            },
        )
        .unwrap();
        let xi = whitney_sum(&e, &BundleDescriptor::trivial_line(&base)).unwrap();
        assert_eq!(ddot_of(&xi).unwrap().ddot_euler_height().unwrap(), 2);
    }

    #[test]
    fn custom_validation() {
        let base = BaseSpace::complex_projective(3);
        let one = RingElement::one(base.ring_mod2());
        let x = x_power(3, 1);
        let good = CustomBundle {
            label: "nu".into(),
            rank: 2,
            euler: Some(x.clone()),
            sw_total: &one + &x.mod2_reduce().unwrap(),
            has_complex_structure: false,
            independent_sections: 0,
        };
        assert!(BundleDescriptor::custom(&base, good.clone()).is_ok());

        let wrong_reduction = CustomBundle {
            sw_total: one.clone(),
            ..good.clone()
        };
        assert!(BundleDescriptor::custom(&base, wrong_reduction).is_err());

        let section_with_euler = CustomBundle {
            independent_sections: 1,
            ..good.clone()
        };
        assert!(BundleDescriptor::custom(&base, section_with_euler).is_err());

        let odd_complex = CustomBundle {
            rank: 3,
            euler: Some(RingElement::zero(base.ring())),
            sw_total: one.clone(),
            has_complex_structure: true,
            ..good.clone()
        };
        assert!(BundleDescriptor::custom(&base, odd_complex).is_err());

        let wrong_degree = CustomBundle {
            euler: Some(x_power(3, 2)),
            ..good
        };
        assert!(BundleDescriptor::custom(&base, wrong_degree).is_err());
    }

    #[test]
    fn declared_flags() {
        let base = BaseSpace::complex_projective(2);
        let xi = BundleDescriptor::trivial(&base, 3).unwrap();
        assert!(xi.clone().declare_complex_structure().is_err());
        assert!(eta(2).declare_independent_sections(1).is_err());
        let four = BundleDescriptor::trivial(&base, 4).unwrap();
        assert_eq!(
            four.declare_independent_sections(2)
                .unwrap()
                .independent_sections(),
            4
        );
    }

    fn atom(n: u32, which: u8) -> BundleDescriptor {
        let e = eta(n);
        match which {
            0 => e,
            1 => BundleDescriptor::trivial_line(e.base()),
            _ => whitney_sum(&e, &e).unwrap(),
        }
    }

    proptest! {
        #[test]
        fn sums_are_associative_and_commutative(
            n in 1u32..6, a in 0u8..3, b in 0u8..3, c in 0u8..3
        ) {
            let (a, b, c) = (atom(n, a), atom(n, b), atom(n, c));
            let left = whitney_sum(&whitney_sum(&a, &b).unwrap(), &c).unwrap();
            let right = whitney_sum(&a, &whitney_sum(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(whitney_sum(&a, &b).unwrap(), whitney_sum(&b, &a).unwrap());
        }

        #[test]
        fn euler_reduces_to_top_sw(n in 1u32..6, a in 0u8..3, b in 0u8..3) {
            let s = whitney_sum(&atom(n, a), &atom(n, b)).unwrap();
            prop_assert_eq!(s.euler().unwrap().mod2_reduce().unwrap(), s.top_sw_class());
        }
    }
}
