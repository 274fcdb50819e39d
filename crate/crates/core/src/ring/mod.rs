//! Truncated graded-commutative cohomology rings.
//!
//! A ring is `R[g_1, ..., g_m] / (g_1^{t_1}, ..., g_m^{t_m})` with `R = Z` or
//! `R = Z/2`. Over the integers every generator has even degree, so the ring
//! is strictly commutative and no Koszul signs appear. Elements are sparse
//! maps from exponent vectors to nonzero coefficients.

mod leray_hirsch;

pub use leray_hirsch::LHElement;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("elements live in different rings")]
    DescriptorMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("height is undefined for a nonzero class of degree 0")]
    ZeroDegree,
    #[error("element already has mod-2 coefficients")]
    AlreadyModTwo,
    #[error("expected degree {expected}, found degree {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("exponent vector has length {found}, ring has {expected} generators")]
    ArityMismatch { expected: usize, found: usize },
    #[error("generator index {0} out of range")]
    NoSuchGenerator(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coefficients {
    Integer,
    ModTwo,
}

/// A polynomial generator `g` with `g^truncation = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub truncation: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32, truncation: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            truncation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    generators: Vec<Generator>,
    coefficients: Coefficients,
}

impl RingDescriptor {
    pub fn new(
        generators: Vec<Generator>,
        coefficients: Coefficients,
    ) -> Result<Arc<Self>, RingError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::InvalidDescriptor(format!(
                    "generator {} has degree 0",
                    g.name
                )));
            }
            if g.truncation == 0 {
                return Err(RingError::InvalidDescriptor(format!(
                    "generator {} has truncation 0",
                    g.name
                )));
            }
            if coefficients == Coefficients::Integer && g.degree % 2 != 0 {
                return Err(RingError::InvalidDescriptor(format!(
                    "generator {} has odd degree {} over the integers",
                    g.name, g.degree
                )));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(RingError::InvalidDescriptor(format!(
                    "duplicate generator name {}",
                    g.name
                )));
            }
        }
        Ok(Arc::new(Self {
            generators,
            coefficients,
        }))
    }

    /// `H^*(CP^n; Z) = Z[x]/(x^{n+1})` with `deg x = 2`.
    pub fn cohomology_cp(n: u32) -> Arc<Self> {
        Self::new(vec![Generator::new("x", 2, n + 1)], Coefficients::Integer)
            .expect("CP^n descriptor is valid")
    }

    /// The integral cohomology of a point.
    pub fn cohomology_point() -> Arc<Self> {
        Self::new(Vec::new(), Coefficients::Integer).expect("empty descriptor is valid")
    }

    /// The same generators with `Z/2` coefficients.
    pub fn mod_two_shadow(&self) -> Arc<Self> {
        Arc::new(Self {
            generators: self.generators.clone(),
            coefficients: Coefficients::ModTwo,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Degree of the top nonzero monomial.
    pub fn top_degree(&self) -> u32 {
        self.generators
            .iter()
            .map(|g| g.degree * (g.truncation - 1))
            .sum()
    }

    pub fn monomial_degree(&self, exponents: &[u32]) -> u32 {
        exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    fn survives(&self, exponents: &[u32]) -> bool {
        exponents
            .iter()
            .zip(&self.generators)
            .all(|(e, g)| *e < g.truncation)
    }

    fn reduce(&self, c: BigInt) -> BigInt {
        match self.coefficients {
            Coefficients::Integer => c,
            Coefficients::ModTwo => {
                if (&c % 2u32).is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
        }
    }
}

/// A class in a truncated polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Arc<RingDescriptor>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl RingElement {
    pub fn zero(ring: &Arc<RingDescriptor>) -> Self {
        Self {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingDescriptor>) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Arc<RingDescriptor>, c: impl Into<BigInt>) -> Self {
        let exps = vec![0; ring.generators.len()];
        Self::monomial(ring, &exps, c).expect("constant has the right arity")
    }

    pub fn generator(ring: &Arc<RingDescriptor>, index: usize) -> Result<Self, RingError> {
        if index >= ring.generators.len() {
            return Err(RingError::NoSuchGenerator(index));
        }
        let mut exps = vec![0; ring.generators.len()];
        exps[index] = 1;
        Self::monomial(ring, &exps, 1)
    }

    /// `c * g^exponents`; zero when some exponent reaches its truncation.
    pub fn monomial(
        ring: &Arc<RingDescriptor>,
        exponents: &[u32],
        c: impl Into<BigInt>,
    ) -> Result<Self, RingError> {
        let mut out = Self::zero(ring);
        out.accumulate(exponents.to_vec(), c.into())?;
        Ok(out)
    }

    pub fn from_terms<I, C>(ring: &Arc<RingDescriptor>, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero(ring);
        for (exps, c) in terms {
            out.accumulate(exps, c.into())?;
        }
        Ok(out)
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: BigInt) -> Result<(), RingError> {
        if exps.len() != self.ring.generators.len() {
            return Err(RingError::ArityMismatch {
                expected: self.ring.generators.len(),
                found: exps.len(),
            });
        }
        if !self.ring.survives(&exps) {
            return Ok(());
        }
        let current = self.terms.remove(&exps).unwrap_or_default();
        let next = self.ring.reduce(current + c);
        if !next.is_zero() {
            self.terms.insert(exps, next);
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| e.iter().all(|x| *x == 0) && c.is_one())
    }

    /// `Ok(None)` for the zero class, which is homogeneous of every degree.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, RingError> {
        let mut degrees = self.terms.keys().map(|e| self.ring.monomial_degree(e));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(RingError::NotHomogeneous)
        }
    }

    /// Checks that `self` is zero or homogeneous of degree `degree`.
    pub fn expect_degree(&self, degree: u32) -> Result<(), RingError> {
        match self.homogeneous_degree()? {
            None => Ok(()),
            Some(d) if d == degree => Ok(()),
            Some(d) => Err(RingError::DegreeMismatch {
                expected: degree,
                found: d,
            }),
        }
    }

    /// The degree-`degree` part of `self`.
    pub fn component(&self, degree: u32) -> Self {
        Self {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| self.ring.monomial_degree(e) == degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1)
    }

    pub fn scaled(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut out = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            out.accumulate(e.clone(), v * &c)
                .expect("exponents come from the same ring");
        }
        out
    }

    /// Cup product.
    pub fn cup(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.accumulate(exps, ca * cb)?;
            }
        }
        Ok(out)
    }

    /// `self^k`, with `self^0 = 1`.
    pub fn power(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = acc.cup(self).expect("same ring");
        }
        acc
    }

    /// Largest `k` with `self^k != 0`; zero for the zero class.
    pub fn height(&self) -> Result<u32, RingError> {
        let Some(degree) = self.homogeneous_degree()? else {
            return Ok(0);
        };
        if degree == 0 {
            return Err(RingError::ZeroDegree);
        }
        let mut k = 0;
        let mut acc = Self::one(&self.ring);
        loop {
            let next = acc.cup(self)?;
            if next.is_zero() {
                return Ok(k);
            }
            acc = next;
            k += 1;
        }
    }

    /// Reduction of integral coefficients modulo 2.
    pub fn mod2_reduce(&self) -> Result<Self, RingError> {
        if self.ring.coefficients == Coefficients::ModTwo {
            return Err(RingError::AlreadyModTwo);
        }
        let target = self.ring.mod_two_shadow();
        let mut out = Self::zero(&target);
        for (e, c) in &self.terms {
            out.accumulate(e.clone(), c.clone())?;
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms.iter().enumerate() {
            let monomial: Vec<String> = exps
                .iter()
                .zip(&self.ring.generators)
                .filter(|(e, _)| **e > 0)
                .map(|(e, g)| {
                    if *e == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{}", g.name, e)
                    }
                })
                .collect();
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if monomial.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str(&monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

// The operator impls panic on mismatched descriptors; use the `checked_*`
// methods and `cup` when the rings are not known to agree.

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: Self) -> RingElement {
        self.checked_add(rhs).expect("ring descriptors differ")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: Self) -> RingElement {
        self.checked_sub(rhs).expect("ring descriptors differ")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: Self) -> RingElement {
        self.cup(rhs).expect("ring descriptors differ")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.negated()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(n: u32) -> (Arc<RingDescriptor>, RingElement) {
        let ring = RingDescriptor::cohomology_cp(n);
        let x = RingElement::generator(&ring, 0).unwrap();
        (ring, x)
    }

    #[test]
    fn cup_in_truncated_ring() {
        let (ring, x) = cp(2);
        assert_eq!(&x * &x, RingElement::monomial(&ring, &[2], 1).unwrap());
        let x2 = x.power(2);
        assert!((&x2 * &x2).is_zero());
    }

    #[test]
    fn mod_two_squaring_drops_cross_term() {
        let ring =
            RingDescriptor::new(vec![Generator::new("w", 1, 3)], Coefficients::ModTwo).unwrap();
        let w = RingElement::generator(&ring, 0).unwrap();
        let one_plus_w = &RingElement::one(&ring) + &w;
        let sq = &one_plus_w * &one_plus_w;
        assert_eq!(sq, &RingElement::one(&ring) + &w.power(2));
    }

    #[test]
    fn powers() {
        let (ring, x) = cp(4);
        assert_eq!(x.power(4), RingElement::monomial(&ring, &[4], 1).unwrap());
        assert!(x.power(5).is_zero());
        assert!(RingElement::one(&ring).cup(&x).unwrap() == x);
        assert!(x.power(0).is_one());

        let (_, y) = cp(5);
        assert!(y.power(2).power(3).is_zero());
    }

    #[test]
    fn heights() {
        let (ring, x) = cp(4);
        assert_eq!(RingElement::zero(&ring).height().unwrap(), 0);
        assert_eq!(x.height().unwrap(), 4);
        let (_, y) = cp(5);
        assert_eq!(y.power(2).height().unwrap(), 2);
        assert_eq!(y.scaled(3).height().unwrap(), 5);
    }

    #[test]
    fn height_rejects_inhomogeneous_and_constants() {
        let (ring, x) = cp(3);
        let mixed = &x + &x.power(2);
        assert_eq!(mixed.height(), Err(RingError::NotHomogeneous));
        assert_eq!(RingElement::one(&ring).height(), Err(RingError::ZeroDegree));
    }

    #[test]
    fn reduction_mod_two() {
        let (ring, x) = cp(4);
        assert!(x.scaled(2).mod2_reduce().unwrap().is_zero());
        let e = &x + &x.power(2).scaled(3);
        let r = e.mod2_reduce().unwrap();
        let xr = x.mod2_reduce().unwrap();
        assert_eq!(r, &xr + &xr.power(2));
        let neg_top = RingElement::monomial(&ring, &[4], -1).unwrap();
        assert_eq!(neg_top.mod2_reduce().unwrap(), xr.power(4));
        assert_eq!(r.mod2_reduce(), Err(RingError::AlreadyModTwo));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let (_, x) = cp(2);
        let (_, y) = cp(3);
        assert_eq!(x.cup(&y), Err(RingError::DescriptorMismatch));
        assert_eq!(x.checked_add(&y), Err(RingError::DescriptorMismatch));
    }

    #[test]
    fn descriptor_validation() {
        assert!(
            RingDescriptor::new(vec![Generator::new("a", 3, 2)], Coefficients::Integer).is_err()
        );
        assert!(RingDescriptor::new(vec![Generator::new("a", 3, 2)], Coefficients::ModTwo).is_ok());
        assert!(
            RingDescriptor::new(vec![Generator::new("a", 0, 2)], Coefficients::ModTwo).is_err()
        );
        assert!(
            RingDescriptor::new(vec![Generator::new("a", 2, 0)], Coefficients::Integer).is_err()
        );
        assert!(RingDescriptor::new(
            vec![Generator::new("a", 2, 2), Generator::new("a", 4, 2)],
            Coefficients::Integer
        )
        .is_err());
    }

    #[test]
    fn display() {
        let (ring, x) = cp(4);
        let e =
            RingElement::from_terms(&ring, [(vec![0], 1), (vec![1], -2), (vec![3], 1)]).unwrap();
        assert_eq!(e.to_string(), "1 - 2*x + x^3");
        assert_eq!(x.negated().to_string(), "-x");
        assert_eq!(RingElement::zero(&ring).to_string(), "0");
    }

    // Two generators with small truncations: x (deg 2, x^3 = 0), y (deg 4, y^2 = 0).
    fn two_generator_ring(coefficients: Coefficients) -> Arc<RingDescriptor> {
        RingDescriptor::new(
            vec![Generator::new("x", 2, 3), Generator::new("y", 4, 2)],
            coefficients,
        )
        .unwrap()
    }

    fn element(ring: &Arc<RingDescriptor>, coeffs: &[i64]) -> RingElement {
        let mut terms = Vec::new();
        let mut i = 0;
        for a in 0..3 {
            for b in 0..2 {
                terms.push((vec![a, b], coeffs[i]));
                i += 1;
            }
        }
        RingElement::from_terms(ring, terms).unwrap()
    }

    fn coeffs() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..=4, 6)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in coeffs(), b in coeffs(), c in coeffs()) {
            let ring = two_generator_ring(Coefficients::Integer);
            let (a, b, c) = (element(&ring, &a), element(&ring, &b), element(&ring, &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &RingElement::one(&ring), a.clone());
        }

        #[test]
        fn reduction_is_a_ring_map(a in coeffs(), b in coeffs()) {
            let ring = two_generator_ring(Coefficients::Integer);
            let (a, b) = (element(&ring, &a), element(&ring, &b));
            let lhs = (&a * &b).mod2_reduce().unwrap();
            let rhs = &a.mod2_reduce().unwrap() * &b.mod2_reduce().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn height_characterization(n in 1u32..10, d in 1u32..5, c in -3i64..=3) {
            let ring = RingDescriptor::cohomology_cp(n);
            let a = RingElement::monomial(&ring, &[d], c).unwrap();
            let h = a.height().unwrap();
            if !a.is_zero() {
                prop_assert!(!a.power(h).is_zero());
            }
            prop_assert!(a.power(h + 1).is_zero());
            prop_assert!(h <= ring.top_degree() / (2 * d));
        }
    }
}
