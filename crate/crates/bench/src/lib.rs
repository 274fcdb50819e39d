//! Fixtures shared by the criterion benches.

use paramtc_core::planner::BundlePoint;
use paramtc_core::verify::{boundary_pairs, random_pair, seeded_rng};
use paramtc_core::{whitney_sum, BaseSpace, BundleDescriptor};

pub use paramtc_core::verify::DEFAULT_SEED;

pub fn eta(n: u32) -> BundleDescriptor {
    BundleDescriptor::canonical_line(&BaseSpace::complex_projective(n), 0)
        .expect("CP^n has a canonical line")
}

pub fn eta_plus_eps(n: u32) -> BundleDescriptor {
    let e = eta(n);
    whitney_sum(&e, &BundleDescriptor::trivial_line(e.base())).expect("same base")
}

/// `count` seeded random same-fiber pairs over `CP^n`.
pub fn random_pairs(n: usize, count: usize) -> Vec<(BundlePoint, BundlePoint)> {
    let mut rng = seeded_rng(DEFAULT_SEED);
    (0..count).map(|_| random_pair(&mut rng, n)).collect()
}

/// One antipodal pair for each partition piece `1..=n+2`.
pub fn antipodal_pairs(n: usize) -> Vec<(BundlePoint, BundlePoint)> {
    boundary_pairs(n)
        .into_iter()
        .filter(|(label, _, _)| label.ends_with("/antipodal-off") || label.ends_with("/sigma"))
        .map(|(_, x, y)| (x, y))
        .collect()
}
