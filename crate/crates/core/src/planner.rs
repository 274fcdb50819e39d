//! Fiberwise motion planners on sphere bundles over `CP^n`.
//!
//! Points of the unit sphere bundle of `η ⊕ ε` are triples `(z, w, s)`: a unit
//! representative `z ∈ C^{n+1}` of the base line, a vector `w` in that line
//! (the `η` component) and a real `s` (the `ε` component) with
//! `|w|^2 + s^2 = 1`. Replacing `z` by `λz` with `|λ| = 1` gives the same
//! point, and every formula here only reads `z` through gauge-invariant
//! quantities.
//!
//! [`plan`] realizes the `n + 3` piece partition of pairs in a common fiber:
//! non-antipodal pairs, antipodal pairs off the poles `±σ`, and one piece per
//! cell of `CP^n` for antipodal pairs at the poles. [`plan_hopf`] is the
//! two-piece planner on the Hopf bundle. All paths are parametrized
//! proportionally to arc length.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

pub const DEFAULT_TOL_ANTI: f64 = 1e-8;
pub const DEFAULT_TOL_CELL: f64 = 1e-10;

/// Tolerance on `|z| = 1` for base representatives.
pub const REP_TOLERANCE: f64 = 1e-12;
/// Tolerance on the bundle-point invariants and on fiber membership.
pub const POINT_TOLERANCE: f64 = 1e-9;
/// Endpoint deviation above which a correcting segment is appended.
pub const SNAP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlannerError {
    #[error("vector has norm {norm}, expected 1")]
    NotUnit { norm: f64 },
    #[error("points lie in different fibers (|<z, z'>| = {overlap})")]
    NotSameFiber { overlap: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("all coordinates of the representative are below {tol}")]
    DegenerateRepresentative { tol: f64 },
    #[error("coordinate {index} has modulus {modulus}, at or below {tol}")]
    CellSectionUndefined {
        index: usize,
        modulus: f64,
        tol: f64,
    },
    #[error("w deviates from the line [z] by {deviation}")]
    NotInLine { deviation: f64 },
    #[error("point on the trivial summand: the retraction to the equator is undefined")]
    OnTrivialSummand,
    #[error("target is not a unit multiple of the source (|<z, z'>| = {overlap})")]
    NotProportional { overlap: f64 },
    #[error("parameter t = {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
}

fn hermitian(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn complex_norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// A unit representative of a point of `CP^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveRep {
    z: Vec<Complex64>,
}

impl ProjectiveRep {
    pub fn new(z: Vec<Complex64>) -> Result<Self, PlannerError> {
        let norm = complex_norm(&z);
        if z.is_empty() || (norm - 1.0).abs() > REP_TOLERANCE {
            return Err(PlannerError::NotUnit { norm });
        }
        Ok(Self { z })
    }

    /// Scales `z` to unit length.
    pub fn normalized(z: Vec<Complex64>) -> Result<Self, PlannerError> {
        let norm = complex_norm(&z);
        if z.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(PlannerError::NotUnit { norm });
        }
        Ok(Self {
            z: z.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// The base point `[0 : ... : 0 : 1 : 0 : ... : 0]` with the 1 at `index`.
    pub fn coordinate_point(n: usize, index: usize) -> Self {
        let mut z = vec![Complex64::new(0.0, 0.0); n + 1];
        z[index] = Complex64::new(1.0, 0.0);
        Self { z }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.z
    }

    /// Complex dimension `n` of the projective space.
    pub fn n(&self) -> usize {
        self.z.len() - 1
    }

    /// `|<z, z'>|`, equal to 1 exactly when both represent the same line.
    pub fn overlap(&self, other: &Self) -> f64 {
        hermitian(&self.z, &other.z).norm()
    }

    pub fn with_gauge(&self, phase: Complex64) -> Self {
        Self {
            z: self.z.iter().map(|c| c * phase).collect(),
        }
    }

    fn check_same_line(&self, other: &Self) -> Result<(), PlannerError> {
        if self.z.len() != other.z.len() {
            return Err(PlannerError::DimensionMismatch {
                left: self.z.len(),
                right: other.z.len(),
            });
        }
        let overlap = self.overlap(other);
        if overlap < 1.0 - POINT_TOLERANCE {
            return Err(PlannerError::NotSameFiber { overlap });
        }
        Ok(())
    }
}

/// A vector `(w, s)` in one fiber of `η ⊕ ε`, in ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberVector {
    pub w: Vec<Complex64>,
    pub s: f64,
}

impl FiberVector {
    fn dot(&self, other: &Self) -> f64 {
        hermitian(&self.w, &other.w).re + self.s * other.s
    }

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn scale(&self, c: f64) -> Self {
        Self {
            w: self.w.iter().map(|x| x * c).collect(),
            s: self.s * c,
        }
    }

    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self {
            w: self
                .w
                .iter()
                .zip(&other.w)
                .map(|(x, y)| x * a + y * b)
                .collect(),
            s: self.s * a + other.s * b,
        }
    }

    fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    fn distance(&self, other: &Self) -> f64 {
        self.combine(1.0, other, -1.0).norm()
    }

    /// Angle between two unit vectors, accurate near 0 and near π.
    fn angle_to(&self, other: &Self) -> f64 {
        let diff = self.combine(1.0, other, -1.0).norm();
        let sum = self.combine(1.0, other, 1.0).norm();
        2.0 * diff.atan2(sum)
    }
}

/// A point of the unit sphere bundle of `η ⊕ ε` over `CP^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint {
    z: ProjectiveRep,
    v: FiberVector,
}

impl BundlePoint {
    pub fn new(z: ProjectiveRep, w: Vec<Complex64>, s: f64) -> Result<Self, PlannerError> {
        if w.len() != z.z.len() {
            return Err(PlannerError::DimensionMismatch {
                left: z.z.len(),
                right: w.len(),
            });
        }
        let coefficient = hermitian(&z.z, &w);
        let deviation = complex_norm(
            &w.iter()
                .zip(&z.z)
                .map(|(wi, zi)| wi - coefficient * zi)
                .collect::<Vec<_>>(),
        );
        if deviation > POINT_TOLERANCE {
            return Err(PlannerError::NotInLine { deviation });
        }
        let v = FiberVector { w, s };
        let norm = v.norm();
        if (norm - 1.0).abs() > POINT_TOLERANCE {
            return Err(PlannerError::NotUnit { norm });
        }
        Ok(Self { z, v })
    }

    /// The point with `w = c·z`.
    pub fn from_line_coordinate(
        z: ProjectiveRep,
        c: Complex64,
        s: f64,
    ) -> Result<Self, PlannerError> {
        let w = z.z.iter().map(|zi| zi * c).collect();
        Self::new(z, w, s)
    }

    /// `σ(b) = (w = 0, s = 1)`.
    pub fn section(z: ProjectiveRep) -> Self {
        let w = vec![Complex64::new(0.0, 0.0); z.z.len()];
        Self {
            z,
            v: FiberVector { w, s: 1.0 },
        }
    }

    fn from_parts(z: &ProjectiveRep, v: FiberVector) -> Self {
        Self { z: z.clone(), v }
    }

    pub fn z(&self) -> &ProjectiveRep {
        &self.z
    }

    pub fn w(&self) -> &[Complex64] {
        &self.v.w
    }

    pub fn s(&self) -> f64 {
        self.v.s
    }

    pub fn vector(&self) -> &FiberVector {
        &self.v
    }

    pub fn n(&self) -> usize {
        self.z.n()
    }

    pub fn negated(&self) -> Self {
        Self::from_parts(&self.z, self.v.scale(-1.0))
    }

    /// The same point with base representative `λz`.
    pub fn with_gauge(&self, phase: Complex64) -> Self {
        Self {
            z: self.z.with_gauge(phase),
            v: self.v.clone(),
        }
    }

    /// Euclidean distance in the fiber; both points must share a fiber.
    pub fn distance(&self, other: &Self) -> f64 {
        self.v.distance(&other.v)
    }

    pub fn norm(&self) -> f64 {
        self.v.norm()
    }

    /// `ẑ = w/|w|` when `|w| > 1e-6`, else the stored representative.
    pub fn observed_line(&self) -> Vec<Complex64> {
        let norm = complex_norm(&self.v.w);
        if norm > 1e-6 {
            self.v.w.iter().map(|c| c / norm).collect()
        } else {
            self.z.z.clone()
        }
    }
}

/// Fiber metric: `Re<w, w'> + s·s'`.
pub fn fiber_inner(x: &BundlePoint, y: &BundlePoint) -> Result<f64, PlannerError> {
    x.z.check_same_line(&y.z)?;
    Ok(x.v.dot(&y.v))
}

/// Index `j` of the open cell `e^{2j}` containing `[z]`: the largest
/// coordinate index with `|z_j| > tol_cell`.
pub fn cell_index(z: &ProjectiveRep, tol_cell: f64) -> Result<usize, PlannerError> {
    z.z.iter()
        .rposition(|c| c.norm() > tol_cell)
        .ok_or(PlannerError::DegenerateRepresentative { tol: tol_cell })
}

/// The section of `η` over the cell `e^{2j}`: the unit vector of `[z]` whose
/// `j`-th coordinate is real and positive.
pub fn cell_section(
    z: &ProjectiveRep,
    j: usize,
    tol_cell: f64,
) -> Result<Vec<Complex64>, PlannerError> {
    let zj = *z.z.get(j).ok_or(PlannerError::DimensionMismatch {
        left: z.z.len(),
        right: j + 1,
    })?;
    let modulus = zj.norm();
    if modulus <= tol_cell {
        return Err(PlannerError::CellSectionUndefined {
            index: j,
            modulus,
            tol: tol_cell,
        });
    }
    let phase = zj.conj() / modulus;
    Ok(z.z.iter().map(|c| c * phase).collect())
}

/// `(w, keep·s)/|(w, keep·s)|`; `keep = 1 - t` gives `α_t`.
fn shrink_toward_equator(v: &FiberVector, keep: f64) -> FiberVector {
    FiberVector {
        w: v.w.clone(),
        s: keep * v.s,
    }
    .normalized()
}

/// The deformation `α_t` from `x` (at `t = 0`) to its projection onto the
/// equatorial sphere `s = 0` (at `t = 1`).
pub fn alpha_deform(x: &BundlePoint, t: f64) -> Result<BundlePoint, PlannerError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(PlannerError::ParameterOutOfRange(t));
    }
    if complex_norm(&x.v.w) == 0.0 {
        return Err(PlannerError::OnTrivialSummand);
    }
    Ok(BundlePoint::from_parts(
        &x.z,
        shrink_toward_equator(&x.v, 1.0 - t),
    ))
}

/// The retraction `pr = α_1` onto the equatorial sphere.
pub fn retract_to_equator(x: &BundlePoint) -> Result<BundlePoint, PlannerError> {
    alpha_deform(x, 1.0)
}

/// Partition piece of a same-fiber pair, in `0..=n+2`.
pub fn classify_pair(
    x: &BundlePoint,
    y: &BundlePoint,
    tol_anti: f64,
    tol_cell: f64,
) -> Result<usize, PlannerError> {
    if fiber_inner(x, y)? > -1.0 + tol_anti {
        return Ok(0);
    }
    if complex_norm(&x.v.w) > tol_anti {
        return Ok(1);
    }
    Ok(2 + cell_index(&x.z, tol_cell)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    Interpolation,
    PhaseRotation,
    AlphaDeformation,
    PolarRotation,
}

/// One analytic piece of a planned path, parametrized by `u ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// Normalized interpolation between non-antipodal unit vectors, at
    /// constant angular speed.
    Interpolation { from: FiberVector, to: FiberVector },
    /// `e^{i(start + sweep·u)}` applied to the `w` part of an equatorial point.
    PhaseRotation {
        equatorial: FiberVector,
        start: f64,
        sweep: f64,
    },
    /// `α_τ(point)` with `τ(u)` chosen so the latitude shrinks linearly;
    /// `reversed` runs from `pr(point)` back to `point`.
    AlphaDeformation { point: FiberVector, reversed: bool },
    /// `cos(πu)·from + sin(πu)·direction`, `direction ⟂ from`.
    PolarRotation {
        from: FiberVector,
        direction: FiberVector,
    },
}

impl Segment {
    pub fn kind(&self) -> SegmentKind {
        match self {
            Segment::Interpolation { .. } => SegmentKind::Interpolation,
            Segment::PhaseRotation { .. } => SegmentKind::PhaseRotation,
            Segment::AlphaDeformation { .. } => SegmentKind::AlphaDeformation,
            Segment::PolarRotation { .. } => SegmentKind::PolarRotation,
        }
    }

    /// Arc length traversed on the unit sphere.
    pub fn length(&self) -> f64 {
        match self {
            Segment::Interpolation { from, to } => from.angle_to(to),
            Segment::PhaseRotation { sweep, .. } => sweep.abs(),
            Segment::AlphaDeformation { point, .. } => point.s.atan2(complex_norm(&point.w)).abs(),
            Segment::PolarRotation { .. } => PI,
        }
    }

    pub fn eval(&self, u: f64) -> FiberVector {
        match self {
            Segment::Interpolation { from, to } => {
                let theta = from.angle_to(to);
                if theta == 0.0 {
                    return from.clone();
                }
                let sin = theta.sin();
                from.combine(((1.0 - u) * theta).sin() / sin, to, (u * theta).sin() / sin)
                    .normalized()
            }
            Segment::PhaseRotation {
                equatorial,
                start,
                sweep,
            } => {
                let phase = Complex64::from_polar(1.0, start + sweep * u);
                FiberVector {
                    w: equatorial.w.iter().map(|c| c * phase).collect(),
                    s: equatorial.s,
                }
            }
            Segment::AlphaDeformation { point, reversed } => {
                let progress = if *reversed { 1.0 - u } else { u };
                let latitude = point.s.atan2(complex_norm(&point.w));
                let keep = if latitude == 0.0 {
                    1.0
                } else {
                    ((1.0 - progress) * latitude).tan() / latitude.tan()
                };
                shrink_toward_equator(point, keep)
            }
            Segment::PolarRotation { from, direction } => {
                let angle = PI * u;
                from.combine(angle.cos(), direction, angle.sin())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedSegment {
    pub start: f64,
    pub end: f64,
    pub segment: Segment,
}

/// A path inside one fiber, tagged with the partition piece that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPath {
    piece: usize,
    segments: Vec<TimedSegment>,
    start: BundlePoint,
    end: BundlePoint,
}

impl PlannedPath {
    /// Lays `segments` out on `[0, 1]` proportionally to arc length, after
    /// appending a correcting interpolation if they do not end at `end`.
    fn assemble(
        piece: usize,
        mut segments: Vec<Segment>,
        start: &BundlePoint,
        end: &BundlePoint,
    ) -> Self {
        let reached = segments
            .last()
            .map_or_else(|| start.v.clone(), |s| s.eval(1.0));
        if reached.distance(&end.v) > SNAP_TOLERANCE {
            segments.push(Segment::Interpolation {
                from: reached,
                to: end.v.clone(),
            });
        }
        let lengths: Vec<f64> = segments.iter().map(Segment::length).collect();
        let total: f64 = lengths.iter().sum();
        let count = segments.len() as f64;
        let mut cursor = 0.0;
        let mut timed = Vec::with_capacity(segments.len());
        for (i, (segment, length)) in segments.into_iter().zip(lengths).enumerate() {
            let share = if total > 0.0 {
                length / total
            } else {
                1.0 / count
            };
            let stop = if i + 1 == timed.capacity() {
                1.0
            } else {
                cursor + share
            };
            timed.push(TimedSegment {
                start: cursor,
                end: stop,
                segment,
            });
            cursor = stop;
        }
        Self {
            piece,
            segments: timed,
            start: start.clone(),
            end: end.clone(),
        }
    }

    pub fn piece(&self) -> usize {
        self.piece
    }

    pub fn segments(&self) -> &[TimedSegment] {
        &self.segments
    }

    pub fn start(&self) -> &BundlePoint {
        &self.start
    }

    pub fn end(&self) -> &BundlePoint {
        &self.end
    }

    /// Segment boundaries, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.segments.iter().map(|s| s.end))
            .collect()
    }

    /// Closed-form evaluation; `t` is clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> BundlePoint {
        let t = t.clamp(0.0, 1.0);
        let timed = self
            .segments
            .iter()
            .find(|s| t <= s.end)
            .unwrap_or_else(|| self.segments.last().expect("paths have a segment"));
        let span = timed.end - timed.start;
        let u = if span > 0.0 {
            ((t - timed.start) / span).clamp(0.0, 1.0)
        } else {
            1.0
        };
        BundlePoint::from_parts(&self.start.z, timed.segment.eval(u))
    }

    /// `samples` evaluations on a uniform grid of `[0, 1]`.
    pub fn sample(&self, samples: usize) -> Vec<(f64, BundlePoint)> {
        let last = samples.saturating_sub(1).max(1) as f64;
        (0..samples.max(2))
            .map(|k| {
                let t = k as f64 / last;
                (t, self.eval(t))
            })
            .collect()
    }
}

/// The `n + 3` piece planner on the unit sphere bundle of `η ⊕ ε` over `CP^n`.
pub fn plan(
    x: &BundlePoint,
    y: &BundlePoint,
    tol_anti: f64,
    tol_cell: f64,
) -> Result<PlannedPath, PlannerError> {
    let piece = classify_pair(x, y, tol_anti, tol_cell)?;
    let segments = match piece {
        0 => vec![Segment::Interpolation {
            from: x.v.clone(),
            to: y.v.clone(),
        }],
        1 => {
            let equatorial = retract_to_equator(x)?.v;
            vec![
                Segment::AlphaDeformation {
                    point: x.v.clone(),
                    reversed: false,
                },
                Segment::PhaseRotation {
                    equatorial,
                    start: 0.0,
                    sweep: PI,
                },
                Segment::AlphaDeformation {
                    point: x.v.scale(-1.0),
                    reversed: true,
                },
            ]
        }
        _ => {
            let phi = FiberVector {
                w: cell_section(&x.z, piece - 2, tol_cell)?,
                s: 0.0,
            };
            // Exactly orthogonal at the poles; the projection keeps the
            // rotation on the unit sphere for points within tol_anti of them.
            let direction = phi.combine(1.0, &x.v, -phi.dot(&x.v)).normalized();
            vec![Segment::PolarRotation {
                from: x.v.clone(),
                direction,
            }]
        }
    };
    Ok(PlannedPath::assemble(piece, segments, x, y))
}

/// [`plan`] with the default tolerances.
pub fn plan_default(x: &BundlePoint, y: &BundlePoint) -> Result<PlannedPath, PlannerError> {
    plan(x, y, DEFAULT_TOL_ANTI, DEFAULT_TOL_CELL)
}

/// The two-piece planner on the Hopf bundle `S^{2n+1} → CP^n`: rotate by the
/// phase `φ ∈ (-π, π)` of `z'/z`, or by `π` for antipodal pairs.
pub fn plan_hopf(
    z: &[Complex64],
    z_target: &[Complex64],
    tol_anti: f64,
) -> Result<PlannedPath, PlannerError> {
    let base = ProjectiveRep::new(z.to_vec()).or_else(|_| {
        let norm = complex_norm(z);
        if (norm - 1.0).abs() > POINT_TOLERANCE {
            Err(PlannerError::NotUnit { norm })
        } else {
            ProjectiveRep::normalized(z.to_vec())
        }
    })?;
    if z_target.len() != z.len() {
        return Err(PlannerError::DimensionMismatch {
            left: z.len(),
            right: z_target.len(),
        });
    }
    let target_norm = complex_norm(z_target);
    if (target_norm - 1.0).abs() > POINT_TOLERANCE {
        return Err(PlannerError::NotUnit { norm: target_norm });
    }
    let ratio = hermitian(z, z_target);
    if ratio.norm() < 1.0 - POINT_TOLERANCE {
        return Err(PlannerError::NotProportional {
            overlap: ratio.norm(),
        });
    }
    let start = BundlePoint::new(base.clone(), z.to_vec(), 0.0)?;
    let end = BundlePoint::new(base, z_target.to_vec(), 0.0)?;
    let (piece, sweep) = if ratio.re <= -1.0 + tol_anti {
        (1, PI)
    } else {
        (0, ratio.arg())
    };
    let segments = vec![Segment::PhaseRotation {
        equatorial: start.v.clone(),
        start: 0.0,
        sweep,
    }];
    Ok(PlannedPath::assemble(piece, segments, &start, &end))
}
