use std::fmt;

use num_bigint::BigInt;

use super::{RingElement, RingError};

/// A class `a + b⌣U` in the cohomology of a sphere bundle with a section.
///
/// The Leray–Hirsch basis `{1, U}` makes the pair `(a, b)` unique. With `U`
/// normalized to vanish on the half-space opposite the section, the module is
/// a ring under `U⌣U = e⌣U`, where `e` is the Euler class of the complement of
/// the section. `u_degree` is the degree of `U` (one less than the rank).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LHElement {
    base: RingElement,
    fiber: RingElement,
    euler_eta: RingElement,
    u_degree: u32,
}

impl LHElement {
    pub fn new(
        base: RingElement,
        fiber: RingElement,
        euler_eta: RingElement,
        u_degree: u32,
    ) -> Result<Self, RingError> {
        if base.ring() != fiber.ring() || base.ring() != euler_eta.ring() {
            return Err(RingError::DescriptorMismatch);
        }
        euler_eta.expect_degree(u_degree)?;
        Ok(Self {
            base,
            fiber,
            euler_eta,
            u_degree,
        })
    }

    pub fn from_base(
        base: RingElement,
        euler_eta: RingElement,
        u_degree: u32,
    ) -> Result<Self, RingError> {
        let fiber = RingElement::zero(base.ring());
        Self::new(base, fiber, euler_eta, u_degree)
    }

    /// The fundamental class `U`.
    pub fn fundamental_class(euler_eta: RingElement, u_degree: u32) -> Result<Self, RingError> {
        let ring = euler_eta.ring().clone();
        Self::new(
            RingElement::zero(&ring),
            RingElement::one(&ring),
            euler_eta,
            u_degree,
        )
    }

    /// The generator `x₀ = U − e` of the kernel of restriction along the section.
    pub fn kernel_generator(euler_eta: RingElement, u_degree: u32) -> Result<Self, RingError> {
        let ring = euler_eta.ring().clone();
        Self::new(
            euler_eta.negated(),
            RingElement::one(&ring),
            euler_eta,
            u_degree,
        )
    }

    pub fn base(&self) -> &RingElement {
        &self.base
    }

    pub fn fiber(&self) -> &RingElement {
        &self.fiber
    }

    pub fn euler_eta(&self) -> &RingElement {
        &self.euler_eta
    }

    pub fn u_degree(&self) -> u32 {
        self.u_degree
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.fiber.is_zero()
    }

    fn with_parts(&self, base: RingElement, fiber: RingElement) -> Self {
        Self {
            base,
            fiber,
            euler_eta: self.euler_eta.clone(),
            u_degree: self.u_degree,
        }
    }

    fn check_same_module(&self, other: &Self) -> Result<(), RingError> {
        if self.base.ring() == other.base.ring()
            && self.euler_eta == other.euler_eta
            && self.u_degree == other.u_degree
        {
            Ok(())
        } else {
            Err(RingError::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_module(other)?;
        Ok(self.with_parts(
            self.base.checked_add(&other.base)?,
            self.fiber.checked_add(&other.fiber)?,
        ))
    }

    pub fn scaled(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        self.with_parts(self.base.scaled(c.clone()), self.fiber.scaled(c))
    }

    /// `(a + bU)(a' + b'U) = aa' + (ab' + a'b + bb'e)U`.
    pub fn cup(&self, other: &Self) -> Result<Self, RingError> {
        self.check_same_module(other)?;
        let base = self.base.cup(&other.base)?;
        let fiber = self
            .base
            .cup(&other.fiber)?
            .checked_add(&other.base.cup(&self.fiber)?)?
            .checked_add(&self.fiber.cup(&other.fiber)?.cup(&self.euler_eta)?)?;
        Ok(self.with_parts(base, fiber))
    }

    pub fn power(&self, k: u32) -> Self {
        let ring = self.base.ring();
        let mut acc = self.with_parts(RingElement::one(ring), RingElement::zero(ring));
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = acc.cup(self).expect("same module");
        }
        acc
    }

    /// Total degree; `Ok(None)` for zero.
    pub fn degree(&self) -> Result<Option<u32>, RingError> {
        let from_base = self.base.homogeneous_degree()?;
        let from_fiber = self.fiber.homogeneous_degree()?.map(|d| d + self.u_degree);
        match (from_base, from_fiber) {
            (Some(a), Some(b)) if a != b => Err(RingError::NotHomogeneous),
            (a, b) => Ok(a.or(b)),
        }
    }

    /// Largest `k` with `self^k != 0`; zero for the zero class.
    pub fn height(&self) -> Result<u32, RingError> {
        let Some(degree) = self.degree()? else {
            return Ok(0);
        };
        if degree == 0 {
            return Err(RingError::ZeroDegree);
        }
        let mut k = 0;
        let mut acc = self.power(0);
        loop {
            let next = acc.cup(self)?;
            if next.is_zero() {
                return Ok(k);
            }
            acc = next;
            k += 1;
        }
    }

    /// Pullback along the section: `s*(a + bU) = a + b⌣e`.
    pub fn restrict_to_section(&self) -> RingElement {
        &self.base + &(&self.fiber * &self.euler_eta)
    }
}

impl fmt::Display for LHElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})·U", self.base, self.fiber)
    }
}
