//! Knots and links in S³ and ℝ³: stereographic transfer, crossing-diagram
//! linking numbers with a Gauss-integral oracle, linking of vector fields,
//! writhe, self-linking, rotation and Bennequin numbers, torus knots and the
//! invariants of the directrices of closed homogeneous curves.

use crate::curves::{maslov_index, strain_table, Domain};
use crate::error::{Error, Result};
use crate::frames::canonical_frame_at;
use crate::homogeneous::{curvatures_from_params, parametrize, HomogeneousClass, HomogeneousParams, Rational};
use crate::jet::Jet;
use crate::symplectic::{contact_frame, directrices, lift_frame, symplectic_spin, S3Path, Spin};
use nalgebra::{Matrix4, Vector3, Vector4};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;

type V3 = Vector3<f64>;

/// Minimum distance between non-adjacent segments, relative to the diameter.
pub const SIMPLE_TOL: f64 = 1e-4;
/// Minimum sine of the angle at a projected crossing.
pub const ANGLE_TOL: f64 = 1e-3;
/// Largest accepted distance of a degree or linking estimate from an integer.
pub const ROUND_GUARD: f64 = 0.1;
const RETRIES: usize = 12;

/// Closed curve in ℝ³ sampled uniformly in its parameter over one period,
/// with first and second derivatives.
#[derive(Clone, Debug)]
pub struct SpatialKnot {
    pub period: f64,
    pub points: Vec<V3>,
    pub tangents: Vec<V3>,
    pub accels: Vec<V3>,
}

fn periodic_diff(f: &[V3], h: f64) -> Vec<V3> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let at = |k: isize| f[(i as isize + k).rem_euclid(n as isize) as usize];
            (at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2)) / (12.0 * h)
        })
        .collect()
}

impl SpatialKnot {
    /// Samples `f(t) = (γ, γ', γ'')` at `n` points of `[0, period)`.
    pub fn from_fn<F: Fn(f64) -> (V3, V3, V3)>(period: f64, n: usize, f: F) -> Result<Self> {
        let (mut points, mut tangents, mut accels) = (vec![], vec![], vec![]);
        for i in 0..n {
            let (p, d, dd) = f(period * i as f64 / n as f64);
            points.push(p);
            tangents.push(d);
            accels.push(dd);
        }
        Self::checked(SpatialKnot { period, points, tangents, accels })
    }

    /// Knot from points and tangents; second derivatives by periodic differences.
    pub fn from_points_tangents(period: f64, points: Vec<V3>, tangents: Vec<V3>) -> Result<Self> {
        if points.len() != tangents.len() {
            return Err(Error::Usage("points and tangents differ in length".into()));
        }
        let h = period / points.len().max(1) as f64;
        let accels = periodic_diff(&tangents, h);
        Self::checked(SpatialKnot { period, points, tangents, accels })
    }

    /// Knot from uniform samples only; derivatives by periodic differences.
    pub fn from_points(period: f64, points: Vec<V3>) -> Result<Self> {
        let h = period / points.len().max(1) as f64;
        let tangents = periodic_diff(&points, h);
        Self::from_points_tangents(period, points, tangents)
    }

    fn checked(k: SpatialKnot) -> Result<Self> {
        if k.points.len() < 8 {
            return Err(Error::Usage("a knot needs at least 8 samples".into()));
        }
        if !(k.period > 0.0) {
            return Err(Error::Usage("period must be positive".into()));
        }
        let scale = k.diameter();
        if k.points.iter().chain(&k.tangents).any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::Numeric("knot samples are not finite".into()));
        }
        let speed = k.tangents.iter().fold(f64::INFINITY, |a, t| a.min(t.norm()));
        if speed <= 1e-12 * scale / k.period {
            return Err(Error::Domain("knot is not immersed".into()));
        }
        let d = k.min_self_distance();
        if d < SIMPLE_TOL * scale {
            return Err(Error::Domain(format!("knot is not simple (segments {d:e} apart)")));
        }
        Ok(k)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.period / self.len() as f64
    }

    pub fn param(&self, i: usize) -> f64 {
        self.period * i as f64 / self.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = (self.points[0], self.points[0]);
        for p in &self.points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (hi - lo).norm()
    }

    fn segment(&self, i: usize) -> (V3, V3) {
        (self.points[i], self.points[(i + 1) % self.len()])
    }

    fn max_segment(&self) -> f64 {
        (0..self.len()).map(|i| {
            let (a, b) = self.segment(i);
            (b - a).norm()
        }).fold(0.0, f64::max)
    }

    /// Smallest distance between segments more than `2 SIMPLE_TOL · diameter`
    /// apart along the curve.
    pub fn min_self_distance(&self) -> f64 {
        let n = self.len();
        let mut arc = vec![0.0];
        for i in 0..n {
            let (a, b) = self.segment(i);
            arc.push(arc[i] + (b - a).norm());
        }
        let total = arc[n];
        let local = 2.0 * SIMPLE_TOL * self.diameter();
        let cell = self.max_segment().max(local).max(1e-300);
        let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        let key = |p: &V3| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64, (p.z / cell).floor() as i64);
        for i in 0..n {
            let (a, b) = self.segment(i);
            let (lo, hi) = (key(&a.inf(&b)), key(&a.sup(&b)));
            for x in lo.0..=hi.0 {
                for y in lo.1..=hi.1 {
                    for z in lo.2..=hi.2 {
                        grid.entry((x, y, z)).or_default().push(i);
                    }
                }
            }
        }
        let mut best = f64::INFINITY;
        for (c, list) in &grid {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        let Some(other) = grid.get(&(c.0 + dx, c.1 + dy, c.2 + dz)) else { continue };
                        for &i in list {
                            for &j in other {
                                if j <= i {
                                    continue;
                                }
                                // arc length strictly between the two segments
                                let inner = arc[j] - arc[i + 1];
                                let outer = total - (arc[j + 1] - arc[i]);
                                if j == i + 1 || (i == 0 && j == n - 1) || inner.min(outer) <= local {
                                    continue;
                                }
                                let (a, b) = self.segment(i);
                                let (c2, d) = self.segment(j);
                                best = best.min(segment_distance(a, b, c2, d));
                            }
                        }
                    }
                }
            }
        }
        // pairs in non-neighbouring cells are at least one cell apart
        best.min(cell)
    }

    /// Frenet-type fields `S_n = -γ'×(γ'×γ'')`, `S_b = γ'×γ''` (unit).
    pub fn frenet_fields(&self) -> Result<(Vec<V3>, Vec<V3>)> {
        let mut sn = vec![];
        let mut sb = vec![];
        let kappa = self.curvatures();
        let kmax = kappa.iter().cloned().fold(0.0, f64::max);
        for (i, (t, a)) in self.tangents.iter().zip(&self.accels).enumerate() {
            if kappa[i] < 1e-6 * kmax.max(1e-300) || kappa[i] == 0.0 {
                return Err(Error::Domain(format!("inflection point at t = {}", self.param(i))));
            }
            let b = t.cross(a);
            let nn = -t.cross(&b);
            sn.push(nn / nn.norm());
            sb.push(b / b.norm());
        }
        Ok((sn, sb))
    }

    pub fn curvatures(&self) -> Vec<f64> {
        self.tangents.iter().zip(&self.accels).map(|(t, a)| t.cross(a).norm() / t.norm().powi(3)).collect()
    }

    /// Resamples `factor` times more densely by quintic Hermite interpolation
    /// of points, tangents and second derivatives.
    pub fn refine(&self, factor: usize) -> SpatialKnot {
        if factor <= 1 {
            return self.clone();
        }
        let (n, h) = (self.len(), self.step());
        let mut out = SpatialKnot { period: self.period, points: vec![], tangents: vec![], accels: vec![] };
        for i in 0..n {
            let j = (i + 1) % n;
            let vals = [
                self.points[i],
                self.tangents[i] * h,
                self.accels[i] * (h * h),
                self.accels[j] * (h * h),
                self.tangents[j] * h,
                self.points[j],
            ];
            for r in 0..factor {
                let s = r as f64 / factor as f64;
                let mut d = [V3::zeros(); 3];
                for (b, v) in QUINTIC.iter().zip(&vals) {
                    for (order, dk) in d.iter_mut().enumerate() {
                        *dk += v * poly_derivative(b, s, order);
                    }
                }
                out.points.push(d[0]);
                out.tangents.push(d[1] / h);
                out.accels.push(d[2] / (h * h));
            }
        }
        out
    }

    /// Rigid motion `x ↦ R x + c`.
    pub fn transform(&self, r: &nalgebra::Matrix3<f64>, c: &V3) -> Result<Self> {
        Self::checked(SpatialKnot {
            period: self.period,
            points: self.points.iter().map(|p| r * p + c).collect(),
            tangents: self.tangents.iter().map(|t| r * t).collect(),
            accels: self.accels.iter().map(|a| r * a).collect(),
        })
    }
}

/// Quintic Hermite basis in the order (p0, d0, a0, a1, d1, p1), coefficients
/// of 1, s, …, s⁵.
const QUINTIC: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
];

fn poly_derivative(c: &[f64], s: f64, order: usize) -> f64 {
    let mut total = 0.0;
    for (k, &ck) in c.iter().enumerate().skip(order) {
        let falling: f64 = (0..order).map(|r| (k - r) as f64).product();
        total += ck * falling * s.powi((k - order) as i32);
    }
    total
}

/// Cubic Hermite resampling of a periodic field.
fn refine_field(f: &[V3], h: f64, factor: usize) -> Vec<V3> {
    if factor <= 1 {
        return f.to_vec();
    }
    let n = f.len();
    let df = periodic_diff(f, h);
    let mut out = vec![];
    for i in 0..n {
        let j = (i + 1) % n;
        for r in 0..factor {
            let s = r as f64 / factor as f64;
            let (s2, s3) = (s * s, s * s * s);
            out.push(
                f[i] * (2.0 * s3 - 3.0 * s2 + 1.0)
                    + df[i] * (h * (s3 - 2.0 * s2 + s))
                    + f[j] * (-2.0 * s3 + 3.0 * s2)
                    + df[j] * (h * (s3 - s2)),
            );
        }
    }
    out
}

fn segment_distance(p1: V3, q1: V3, p2: V3, q2: V3) -> f64 {
    let (d1, d2, r) = (q1 - p1, q2 - p2, p1 - p2);
    let (a, e, f) = (d1.dot(&d1), d2.dot(&d2), d2.dot(&r));
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
    let mut t = if e > 0.0 { (b * s + f) / e } else { 0.0 };
    if t < 0.0 {
        t = 0.0;
        s = if a > 0.0 { (-c / a).clamp(0.0, 1.0) } else { 0.0 };
    } else if t > 1.0 {
        t = 1.0;
        s = if a > 0.0 { ((b - c) / a).clamp(0.0, 1.0) } else { 0.0 };
    }
    ((p1 + d1 * s) - (p2 + d2 * t)).norm()
}

/// A crossing of a link or knot diagram.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Crossing {
    pub t: f64,
    #[serde(rename = "t̃")]
    pub t_hat: f64,
    pub sign: i32,
}

/// Crossings of the orthogonal projection along `projection`.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingDiagram {
    pub projection: [f64; 3],
    pub crossings: Vec<Crossing>,
}

struct RawCrossing {
    i: usize,
    s: f64,
    j: usize,
    u: f64,
    /// `(x_i - x_j)·v`
    gap: f64,
    /// `(d_i × d_j)·v` of the projected segment directions
    cross: f64,
}

fn plane_basis(v: &V3) -> (V3, V3) {
    let w = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
        V3::x()
    } else if v.y.abs() <= v.z.abs() {
        V3::y()
    } else {
        V3::z()
    };
    let a = v.cross(&w).normalize();
    (a, v.cross(&a))
}

/// All transversal crossings between the projected polygons `a` and `b`
/// (`same` for self-crossings); `None` when some crossing is too shallow.
fn projected_crossings(a: &SpatialKnot, b: &SpatialKnot, same: bool, v: &V3) -> Option<Vec<RawCrossing>> {
    let (e1, e2) = plane_basis(v);
    let pa: Vec<[f64; 2]> = a.points.iter().map(|p| [p.dot(&e1), p.dot(&e2)]).collect();
    let pb: Vec<[f64; 2]> = b.points.iter().map(|p| [p.dot(&e1), p.dot(&e2)]).collect();
    let (na, nb) = (pa.len(), pb.len());
    let seg = |p: &[[f64; 2]], i: usize| (p[i], p[(i + 1) % p.len()]);
    let mut cell = 0.0f64;
    for (p, n) in [(&pa, na), (&pb, nb)] {
        for i in 0..n {
            let (x, y) = seg(p, i);
            cell = cell.max((y[0] - x[0]).abs()).max((y[1] - x[1]).abs());
        }
    }
    let cell = cell.max(1e-300);
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for i in 0..nb {
        let (x, y) = seg(&pb, i);
        let lo = key(x[0].min(y[0]), x[1].min(y[1]));
        let hi = key(x[0].max(y[0]), x[1].max(y[1]));
        for gx in lo.0..=hi.0 {
            for gy in lo.1..=hi.1 {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    let mut out = vec![];
    for i in 0..na {
        let (p, q) = seg(&pa, i);
        let d = [q[0] - p[0], q[1] - p[1]];
        let lo = key(p[0].min(q[0]), p[1].min(q[1]));
        let hi = key(p[0].max(q[0]), p[1].max(q[1]));
        for gx in lo.0..=hi.0 {
            for gy in lo.1..=hi.1 {
                let Some(list) = grid.get(&(gx, gy)) else { continue };
                for &j in list {
                    if same {
                        let gap = (j as isize - i as isize).rem_euclid(na as isize) as usize;
                        if j <= i || gap <= 1 || gap >= na - 1 {
                            continue;
                        }
                    }
                    let (r, s2) = seg(&pb, j);
                    let e = [s2[0] - r[0], s2[1] - r[1]];
                    let den = d[0] * e[1] - d[1] * e[0];
                    if den == 0.0 {
                        continue;
                    }
                    let w = [r[0] - p[0], r[1] - p[1]];
                    let s = (w[0] * e[1] - w[1] * e[0]) / den;
                    let u = (w[0] * d[1] - w[1] * d[0]) / den;
                    if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&u) {
                        continue;
                    }
                    let x = [p[0] + s * d[0], p[1] + s * d[1]];
                    if key(x[0], x[1]) != (gx, gy) {
                        continue;
                    }
                    let sin = den.abs() / ((d[0] * d[0] + d[1] * d[1]).sqrt() * (e[0] * e[0] + e[1] * e[1]).sqrt());
                    if sin < ANGLE_TOL {
                        return None;
                    }
                    let (a0, a1) = a.segment(i);
                    let (b0, b1) = b.segment(j);
                    let xa = a0 + (a1 - a0) * s;
                    let xb = b0 + (b1 - b0) * u;
                    out.push(RawCrossing { i, s, j, u, gap: (xa - xb).dot(v), cross: den });
                }
            }
        }
    }
    Some(out)
}

fn random_direction(rng: &mut ChaCha8Rng) -> V3 {
    loop {
        let v = V3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Linking number from a generic link diagram: `½ Σ ε`.
pub fn crossing_linking(k: &SpatialKnot, kh: &SpatialKnot, seed: u64) -> Result<(i64, CrossingDiagram)> {
    let scale = k.diameter().max(kh.diameter());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let v = random_direction(&mut rng);
        let Some(raw) = projected_crossings(k, kh, false, &v) else { continue };
        if let Some(c) = raw.iter().find(|c| c.gap.abs() < 1e-12 * scale) {
            let d = c.gap.abs();
            if d < SIMPLE_TOL * 1e-4 * scale {
                return Err(Error::Domain("knots intersect".into()));
            }
            continue;
        }
        let mut total = 0i64;
        let mut crossings = vec![];
        for c in &raw {
            let sign = if c.gap * c.cross > 0.0 { 1 } else { -1 };
            total += sign as i64;
            crossings.push(Crossing {
                t: k.param(c.i) + c.s * k.step(),
                t_hat: kh.param(c.j) + c.u * kh.step(),
                sign,
            });
        }
        if total % 2 != 0 {
            continue;
        }
        return Ok((total / 2, CrossingDiagram { projection: [v.x, v.y, v.z], crossings }));
    }
    Err(Error::Numeric("no generic projection found for the link diagram".into()))
}

/// Gauss double integral by the product trapezoid rule at full and half
/// resolution, combined by Richardson extrapolation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussEstimate {
    pub value: f64,
    pub fine: f64,
    pub coarse: f64,
}

impl GaussEstimate {
    pub fn residual(&self) -> f64 {
        (self.value - self.value.round()).abs()
    }
}

fn gauss_sum(k: &SpatialKnot, kh: &SpatialKnot, stride: usize) -> f64 {
    let mut total = 0.0;
    for i in (0..k.len()).step_by(stride) {
        let (p, t) = (k.points[i], k.tangents[i]);
        let mut row = 0.0;
        for j in (0..kh.len()).step_by(stride) {
            let d = p - kh.points[j];
            let r2 = d.norm_squared();
            row += d.dot(&t.cross(&kh.tangents[j])) / (r2 * r2.sqrt());
        }
        total += row;
    }
    total * k.step() * kh.step() * (stride * stride) as f64 / (4.0 * PI)
}

pub fn gauss_linking(k: &SpatialKnot, kh: &SpatialKnot) -> GaussEstimate {
    let fine = gauss_sum(k, kh, 1);
    let coarse = gauss_sum(k, kh, 2);
    GaussEstimate { value: (4.0 * fine - coarse) / 3.0, fine, coarse }
}

/// Smooth cutoff: 1 on `|x| ≤ 1/2`, 0 on `|x| ≥ 1`.
fn cutoff(x: f64) -> f64 {
    let y = 2.0 - 2.0 * x.abs();
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 1.0;
    }
    let (a, b) = ((-1.0 / y).exp(), (-1.0 / (1.0 - y)).exp());
    a / (a + b)
}

/// Gauss integral of a knot against a push-off sampled at the same
/// parameters. The integrand, cut off smoothly within `band` samples of the
/// diagonal, is summed on the full grid in the second variable; the smooth
/// remainder and the outer variable use every `stride`-th sample.
fn banded_gauss_sum(k: &SpatialKnot, kh: &SpatialKnot, stride: usize, band: usize, step: usize) -> f64 {
    let n = k.len() as isize;
    let f = |i: usize, j: usize| {
        let d = k.points[i] - kh.points[j];
        let r2 = d.norm_squared();
        d.dot(&k.tangents[i].cross(&kh.tangents[j])) / (r2 * r2.sqrt())
    };
    let b = band as isize;
    let (mut near, mut far) = (0.0, 0.0);
    for i in (0..k.len()).step_by(stride * step) {
        let mut row = 0.0;
        for dj in (-b..=b).step_by(step) {
            let j = (i as isize + dj).rem_euclid(n) as usize;
            row += f(i, j) * cutoff(dj as f64 / b as f64);
        }
        near += row;
        for j in (0..kh.len()).step_by(stride * step) {
            let mut dj = (j as isize - i as isize).rem_euclid(n);
            if dj > n / 2 {
                dj -= n;
            }
            far += f(i, j) * (1.0 - cutoff(dj as f64 / b as f64));
        }
    }
    let h = k.step() * kh.step();
    let s = (stride * step) as f64;
    (near * s * step as f64 + far * s * s) * h / (4.0 * PI)
}

fn banded_gauss(k: &SpatialKnot, kh: &SpatialKnot, stride: usize, band: usize) -> GaussEstimate {
    let fine = banded_gauss_sum(k, kh, stride, band, 1);
    let coarse = banded_gauss_sum(k, kh, stride, band, 2);
    GaussEstimate { value: (4.0 * fine - coarse) / 3.0, fine, coarse }
}

/// Linking number with its diagram and the Gauss-integral cross-check.
#[derive(Clone, Debug, Serialize)]
pub struct LinkReport {
    pub linking: i64,
    pub gauss: GaussEstimate,
    pub diagram: CrossingDiagram,
}

/// Crossing-diagram linking number, validated against the Gauss integral.
pub fn linking_number(k: &SpatialKnot, kh: &SpatialKnot, seed: u64) -> Result<LinkReport> {
    let (linking, diagram) = crossing_linking(k, kh, seed)?;
    let gauss = gauss_linking(k, kh);
    if gauss.value.round() as i64 != linking || gauss.residual() > ROUND_GUARD {
        return Err(Error::Consistency {
            what: format!("crossing count {linking} against Gauss integral {:.6}", gauss.value),
            achieved: (gauss.value - linking as f64).abs(),
            tol: ROUND_GUARD,
        });
    }
    Ok(LinkReport { linking, gauss, diagram })
}

/// Linking number of a vector field along a knot.
#[derive(Clone, Debug, Serialize)]
pub struct FieldLinking {
    pub linking: i64,
    pub eta: f64,
    pub halvings: [i64; 3],
    pub gauss: GaussEstimate,
}

fn normal_field(k: &SpatialKnot, field: &[V3]) -> Result<Vec<V3>> {
    if field.len() != k.len() {
        return Err(Error::Usage("field and knot differ in length".into()));
    }
    let mut out = vec![];
    for (i, (x, t)) in field.iter().zip(&k.tangents).enumerate() {
        let tn = t / t.norm();
        let nx = x - tn * x.dot(&tn);
        if nx.norm() <= 1e-8 * x.norm() || x.norm() == 0.0 {
            return Err(Error::Domain(format!("field is tangent to the knot at t = {}", k.param(i))));
        }
        out.push(nx / nx.norm());
    }
    Ok(out)
}

/// Radius below which normal push-offs stay inside a tubular neighbourhood.
pub fn reach_estimate(k: &SpatialKnot) -> f64 {
    let kmax = k.curvatures().into_iter().fold(0.0, f64::max).max(1e-300);
    let n = k.len();
    let mut arc = vec![0.0];
    for i in 0..n {
        let (a, b) = k.segment(i);
        arc.push(arc[i] + (b - a).norm());
    }
    let total = arc[n];
    let sep = PI / kmax;
    let mut dmin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let s = (arc[j] - arc[i]).min(total - (arc[j] - arc[i]));
            if s >= sep {
                dmin = dmin.min((k.points[i] - k.points[j]).norm());
            }
        }
    }
    (1.0 / kmax).min(0.5 * dmin)
}

fn push_off(k: &SpatialKnot, nf: &[V3], eta: f64) -> Result<SpatialKnot> {
    let points: Vec<V3> = k.points.iter().zip(nf).map(|(p, x)| p + x * eta).collect();
    let dx = periodic_diff(nf, k.step());
    let tangents: Vec<V3> = k.tangents.iter().zip(&dx).map(|(t, d)| t + d * eta).collect();
    SpatialKnot::from_points_tangents(k.period, points, tangents)
}

/// `Lk(K, K + ηX^⊥)`, constant under three successive halvings of `η`, with
/// the Gauss integral checked at the largest `η`.
pub fn linking_of_field(k: &SpatialKnot, field: &[V3], seed: u64) -> Result<FieldLinking> {
    normal_field(k, field)?;
    let eta = 0.2 * reach_estimate(k);
    let factor = (4.0 * k.max_segment() / eta).ceil().max(1.0) as usize;
    if factor > 32 {
        return Err(Error::Numeric(format!("sampling too coarse for a push-off of size {eta:e}; increase samples")));
    }
    let field = refine_field(field, k.step(), factor);
    let k = &k.refine(factor);
    let nf = normal_field(k, &field)?;
    let mut halvings = [0i64; 3];
    for (n, e) in [eta, eta / 2.0, eta / 4.0].iter().enumerate() {
        let off = push_off(k, &nf, *e)?;
        halvings[n] = crossing_linking(k, &off, seed.wrapping_add(n as u64))?.0;
    }
    if halvings.iter().any(|&l| l != halvings[0]) {
        return Err(Error::Numeric(format!("push-off linking unstable: {halvings:?}")));
    }
    let gauss = banded_gauss(k, &push_off(k, &nf, eta)?, factor, 16 * factor);
    if gauss.value.round() as i64 != halvings[0] || gauss.residual() > ROUND_GUARD {
        return Err(Error::Consistency {
            what: format!("push-off crossing count {} against Gauss integral {:.6}", halvings[0], gauss.value),
            achieved: (gauss.value - halvings[0] as f64).abs(),
            tol: ROUND_GUARD,
        });
    }
    Ok(FieldLinking { linking: halvings[0], eta, halvings, gauss })
}

/// Integral writhe along `v`: the sum over double points of
/// `sgn(v·(γ'(t)×γ'(t')))`, `γ(t)` being the strand closer to `v`.
pub fn writhe(k: &SpatialKnot, v: &[f64; 3], seed: u64) -> Result<i64> {
    let v0 = V3::new(v[0], v[1], v[2]);
    if v0.norm() == 0.0 {
        return Err(Error::Usage("projection direction must be nonzero".into()));
    }
    let v0 = v0.normalize();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir = v0;
    for _ in 0..RETRIES {
        if let Some(raw) = projected_crossings(k, k, true, &dir) {
            let scale = k.diameter();
            if raw.iter().all(|c| c.gap.abs() > 1e-12 * scale) {
                // `cross` is (d_i × d_j)·v; the over strand comes first in the index
                let total: i64 = raw.iter().map(|c| if c.gap * c.cross > 0.0 { 1 } else { -1 }).sum();
                return Ok(total);
            }
        }
        dir = (v0 + random_direction(&mut rng) * 1e-3).normalize();
    }
    Err(Error::Numeric("no generic projection near the requested direction".into()))
}

/// Self-linking number `Lk_K(N)`.
pub fn self_linking(k: &SpatialKnot, seed: u64) -> Result<i64> {
    let (n, _) = k.frenet_fields()?;
    Ok(linking_of_field(k, &n, seed)?.linking)
}

/// Degree of `p ↦ (X·N, X·B)`.
pub fn rotation_number(k: &SpatialKnot, field: &[V3]) -> Result<i64> {
    let (n, b) = k.frenet_fields()?;
    if field.len() != k.len() {
        return Err(Error::Usage("field and knot differ in length".into()));
    }
    let psi: Vec<(f64, f64)> = field.iter().zip(n.iter().zip(&b)).map(|(x, (n, b))| (x.dot(n), x.dot(b))).collect();
    let mut total = 0.0;
    for i in 0..psi.len() {
        let (x0, y0) = psi[i];
        let (x1, y1) = psi[(i + 1) % psi.len()];
        let r = (x0 * x0 + y0 * y0).sqrt();
        if r <= 1e-12 * field[i].norm() || r == 0.0 {
            return Err(Error::Domain(format!("rotation map vanishes at t = {}", k.param(i))));
        }
        let da = (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
        if da.abs() > 0.5 {
            return Err(Error::Numeric("field turns too fast for the sampling".into()));
        }
        total += da;
    }
    let turns = total / (2.0 * PI);
    if (turns - turns.round()).abs() > ROUND_GUARD {
        return Err(Error::Numeric(format!("rotation degree {turns} is not an integer")));
    }
    Ok(turns.round() as i64)
}

/// Stereographic projection from a pole `P` followed by the reflection in
/// the `xy`-plane; poles other than `e₄` are first rotated to `e₄`.
#[derive(Clone, Copy, Debug)]
pub struct Stereographic {
    pub pole: Vector4<f64>,
    rotation: Matrix4<f64>,
}

impl Default for Stereographic {
    fn default() -> Self {
        Stereographic { pole: Vector4::new(0.0, 0.0, 0.0, 1.0), rotation: Matrix4::identity() }
    }
}

impl Stereographic {
    pub fn new(pole: [f64; 4]) -> Result<Self> {
        let p = Vector4::from(pole);
        let n = p.norm();
        if (n - 1.0).abs() > 1e-8 {
            return Err(Error::Domain("pole is not on the unit sphere".into()));
        }
        let p = p / n;
        let e4 = Vector4::new(0.0, 0.0, 0.0, 1.0);
        let u = p - e4;
        if u.norm() < 1e-14 {
            return Ok(Self::default());
        }
        let u = u / u.norm();
        let house = Matrix4::identity() - u * u.transpose() * 2.0;
        let flip = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
        Ok(Stereographic { pole: p, rotation: flip * house })
    }

    /// The pole clearing the paths best among `e₄` and 512 seeded random
    /// candidates, so that the images stay compact.
    pub fn avoiding(paths: &[&S3Path], seed: u64) -> Result<Self> {
        let pts: Vec<Vector4<f64>> = paths.iter().flat_map(|p| p.points.iter().map(|x| Vector4::from(*x))).collect();
        let clear = |c: &Vector4<f64>| pts.iter().fold(f64::INFINITY, |a, x| a.min((x - c).norm()));
        let e4 = Vector4::new(0.0, 0.0, 0.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = (clear(&e4), e4);
        for _ in 0..512 {
            let c = Vector4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
            if c.norm() < 0.1 {
                continue;
            }
            let c = c / c.norm();
            let d = clear(&c);
            if d > best.0 {
                best = (d, c);
            }
        }
        if best.0 < 1e-3 {
            return Err(Error::Numeric("no pole clears the curves".into()));
        }
        Self::new([best.1[0], best.1[1], best.1[2], best.1[3]])
    }

    fn rotated(&self, p: &[f64; 4]) -> Result<Vector4<f64>> {
        let y = self.rotation * Vector4::from(*p);
        if (y - Vector4::new(0.0, 0.0, 0.0, 1.0)).norm() < 1e-6 {
            return Err(Error::Domain("point too close to the projection pole".into()));
        }
        Ok(y)
    }

    pub fn map(&self, p: &[f64; 4]) -> Result<V3> {
        let y = self.rotated(p)?;
        Ok(V3::new(y[0], y[1], -y[2]) / (1.0 - y[3]))
    }

    /// Differential at `p` applied to `v`.
    pub fn push(&self, p: &[f64; 4], v: &[f64; 4]) -> Result<V3> {
        let y = self.rotated(p)?;
        let w = self.rotation * Vector4::from(*v);
        let den = 1.0 - y[3];
        Ok(V3::new(w[0], w[1], -w[2]) / den + V3::new(y[0], y[1], -y[2]) * (w[3] / (den * den)))
    }

    /// Image of a sampled closed path of period `period`.
    pub fn knot(&self, path: &S3Path, period: f64) -> Result<SpatialKnot> {
        let mut points = vec![];
        let mut tangents = vec![];
        for (p, v) in path.points.iter().zip(&path.velocities) {
            points.push(self.map(p)?);
            tangents.push(self.push(p, v)?);
        }
        SpatialKnot::from_points_tangents(period, points, tangents)
    }
}

/// Stereographic projection from `e₄` composed with `z ↦ -z`.
pub fn stereographic(p: &[f64; 4]) -> Result<[f64; 3]> {
    let x = Stereographic::default().map(p)?;
    Ok([x.x, x.y, x.z])
}

/// Bennequin number from both contact sections.
#[derive(Clone, Debug, Serialize)]
pub struct BennequinReport {
    pub value: i64,
    pub e1: FieldLinking,
    pub e2: FieldLinking,
}

/// Bennequin number of a closed path transverse to the contact distribution,
/// as the linking number of the pushed-forward section `E₁` (checked on `E₂`).
pub fn bennequin(path: &S3Path, period: f64, st: &Stereographic, seed: u64) -> Result<BennequinReport> {
    let mut sign = 0.0;
    for (p, v) in path.points.iter().zip(&path.velocities) {
        let z = crate::symplectic::contact_eval(p, v)?;
        if z == 0.0 || (sign != 0.0 && z * sign < 0.0) {
            return Err(Error::Domain("path is not transverse to the contact distribution".into()));
        }
        sign = z.signum();
    }
    let k = st.knot(path, period)?;
    let mut w1 = vec![];
    let mut w2 = vec![];
    for p in &path.points {
        let (e1, e2) = contact_frame(p);
        w1.push(st.push(p, &e1)?);
        w2.push(st.push(p, &e2)?);
    }
    let e1 = linking_of_field(&k, &w1, seed)?;
    let e2 = linking_of_field(&k, &w2, seed.wrapping_add(17))?;
    if e1.linking != e2.linking {
        return Err(Error::Consistency {
            what: format!("Bennequin number from E1 ({}) and E2 ({})", e1.linking, e2.linking),
            achieved: (e1.linking - e2.linking).abs() as f64,
            tol: 0.0,
        });
    }
    Ok(BennequinReport { value: e1.linking, e1, e2 })
}

/// Torus-knot families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TorusKind {
    Standard,
    Starred,
    Check,
}

impl std::str::FromStr for TorusKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(TorusKind::Standard),
            "starred" => Ok(TorusKind::Starred),
            "check" => Ok(TorusKind::Check),
            _ => Err(Error::Usage(format!("unknown torus-knot kind {s}"))),
        }
    }
}

fn jet3(f: impl Fn(&Jet) -> [Jet; 3], t: f64) -> (V3, V3, V3) {
    let c = f(&Jet::variable(t));
    let at = |n: usize| V3::new(c[0].derivative(n), c[1].derivative(n), c[2].derivative(n));
    (at(0), at(1), at(2))
}

/// Torus knots on the standard torus (`r = 1/2` standard, `1/4` starred),
/// and the check family `(3 sin qt, 4 sin pt, 3 cos qt)/(4 cos pt - 5)`.
pub fn torus_knot(kind: TorusKind, p: i64, q: i64, n: usize) -> Result<SpatialKnot> {
    if p <= 0 || q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::Domain(format!("torus-knot type ({p},{q}) must be positive and coprime")));
    }
    if kind != TorusKind::Check && q <= p {
        return Err(Error::Domain("torus-knot type needs q > p".into()));
    }
    let (pf, qf) = (p as f64, q as f64);
    match kind {
        TorusKind::Standard | TorusKind::Starred => {
            let r = if kind == TorusKind::Standard { 0.5 } else { 0.25 };
            SpatialKnot::from_fn(2.0 * PI, n, |t| {
                jet3(
                    |t| {
                        let (sp, cp) = (*t * pf).sin_cos();
                        let (sq, cq) = (*t * qf).sin_cos();
                        let rad = cp * r + 1.0;
                        [rad.clone() * cq, rad * sq, sp * (-r)]
                    },
                    t,
                )
            })
        }
        TorusKind::Check => SpatialKnot::from_fn(2.0 * PI, n, |t| {
            jet3(
                |t| {
                    let (sp, cp) = (*t * pf).sin_cos();
                    let (sq, cq) = (*t * qf).sin_cos();
                    let w = (cp * 4.0 - 5.0).recip();
                    [sq * 3.0 * w.clone(), sp * 4.0 * w.clone(), cq * 3.0 * w]
                },
                t,
            )
        }),
    }
}

/// The check family with the opposite sign of the third component, the
/// mirror image of [`TorusKind::Check`].
pub fn mirrored_check_knot(p: i64, q: i64, n: usize) -> Result<SpatialKnot> {
    let k = torus_knot(TorusKind::Check, p, q, n)?;
    k.transform(&nalgebra::Matrix3::from_diagonal(&V3::new(1.0, 1.0, -1.0)), &V3::zeros())
}

/// The closed S³ curves `(-2A sin qu, (1-A²) sin pu, 2A cos qu, (A²-1) cos pu)/(1+A²)`
/// and `((1-A²) cos qu, 2A cos pu, (1-A²) sin qu, 2A sin pu)/(1+A²)`, `u ∈ [0, 2π)`.
pub fn transverse_torus_pair(big_a: f64, p: i64, q: i64, n: usize) -> Result<(S3Path, S3Path)> {
    if !(big_a > 1.0) || p <= 0 || q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::Domain("transverse torus knots need A > 1 and coprime positive (p, q)".into()));
    }
    let (pf, qf) = (p as f64, q as f64);
    let s = 1.0 + big_a * big_a;
    let (c1, c2) = (2.0 * big_a / s, (big_a * big_a - 1.0) / s);
    let mut g = S3Path { u: vec![], points: vec![], velocities: vec![] };
    let mut gs = g.clone();
    for i in 0..n {
        let u = 2.0 * PI * i as f64 / n as f64;
        let (sq, cq) = (qf * u).sin_cos();
        let (sp, cp) = (pf * u).sin_cos();
        g.u.push(u);
        g.points.push([-c1 * sq, -c2 * sp, c1 * cq, c2 * cp]);
        g.velocities.push([-c1 * qf * cq, -c2 * pf * cp, -c1 * qf * sq, -c2 * pf * sp]);
        gs.u.push(u);
        gs.points.push([-c2 * cq, c1 * cp, -c2 * sq, c1 * sp]);
        gs.velocities.push([c2 * qf * sq, -c1 * pf * sp, -c2 * qf * cq, c1 * pf * cp]);
    }
    Ok((g, gs))
}

/// Predicted invariants of the directrices of a closed `C2i` curve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Prediction {
    pub p: i64,
    pub q: i64,
    pub linking: i64,
    pub bennequin: i64,
    pub maslov: i64,
    pub spin: f64,
}

impl Prediction {
    /// `p/q = (n-m)/(n+m)` reduced, `Lk = pq`, `b = pq - p - q`, Maslov `n`;
    /// the lift over one period is `(-1)^{n+m}` times the identity.
    pub fn new(m: i64, n: i64) -> Self {
        let (num, den) = (n - m, n + m);
        let g = num.gcd(&den);
        let (p, q) = (num / g, den / g);
        let spin = if (n + m) % 2 == 0 { 1.0 } else { 0.5 };
        Prediction { p, q, linking: p * q, bennequin: p * q - p - q, maslov: n, spin }
    }
}

/// Invariants of a closed homogeneous curve of class `C2i` and its directrices.
#[derive(Clone, Debug, Serialize)]
pub struct DirectrixReport {
    pub a: f64,
    pub m: i64,
    pub n: i64,
    pub k: f64,
    pub h: f64,
    pub conformal_length: f64,
    pub maslov: i64,
    pub spin: Spin,
    pub spin_gap: f64,
    pub directrix_period: f64,
    pub closure_gap: f64,
    pub early_return_gap: f64,
    pub contact_min: f64,
    pub samples: usize,
    pub pole: [f64; 4],
    pub link: LinkReport,
    pub bennequin_gamma: BennequinReport,
    pub bennequin_gamma_star: BennequinReport,
    pub predicted: Prediction,
    pub agree: bool,
    /// Directrices over one period.
    #[serde(skip)]
    pub gamma: S3Path,
    #[serde(skip)]
    pub gamma_star: S3Path,
}

/// Options for [`directrix_invariants`].
#[derive(Clone, Copy, Debug)]
pub struct DirectrixOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for DirectrixOptions {
    fn default() -> Self {
        DirectrixOptions { samples: 4096, seed: 7, tol: 1e-11 }
    }
}

fn path_slice(d: &S3Path, n: usize) -> S3Path {
    S3Path { u: d.u[..n].to_vec(), points: d.points[..n].to_vec(), velocities: d.velocities[..n].to_vec() }
}

/// Builds the closed `C2i` curve with parameters `(a, m/n)`, integrates its
/// lifted frame from a lift of the canonical frame, and computes Maslov index,
/// spin, `Lk(Γ, Γ*)` and both Bennequin numbers.
pub fn directrix_invariants(a: f64, m: i64, n: i64, opts: &DirectrixOptions) -> Result<DirectrixReport> {
    if !(a > 0.0 && a < 1.0) || !(0 < m && m < n) || m.gcd(&n) != 1 {
        return Err(Error::Domain("need a ∈ (0,1), 0 < m < n and gcd(m, n) = 1".into()));
    }
    let params = HomogeneousParams::with_rational(a, Rational::new(m, n)?);
    let (k, h) = curvatures_from_params(HomogeneousClass::C2i, &params)?;
    let curve = parametrize(HomogeneousClass::C2i, &params)?;
    let (start, period) = match curve.domain {
        Domain::Periodic { start, period } => (start, period),
        _ => return Err(Error::Numeric("closed curve without a period".into())),
    };
    let maslov = maslov_index(&curve)?;
    let ell = *strain_table(&curve, start, start + period, 64 * n as usize)?.u.last().unwrap_or(&0.0);
    let spin = symplectic_spin(&curve)?;
    let x0 = lift_frame(&canonical_frame_at(&curve, start)?.frame.m)?;
    let t_dir = ell / spin.spin.value();
    let mut samples = opts.samples.max(64);
    loop {
        let outputs: Vec<f64> = (0..=samples).map(|i| t_dir * i as f64 / samples as f64).collect();
        let d = directrices(&|_| k, &|_| h, &x0, 0.0, &outputs, opts.tol)?;
        let closure_gap = (d.lifts[samples] - d.lifts[0]).amax() / d.lifts[0].amax();
        if closure_gap > 1e-6 {
            return Err(Error::Consistency { what: "directrix closure".into(), achieved: closure_gap, tol: 1e-6 });
        }
        let g = path_slice(&d.gamma, samples);
        let gs = path_slice(&d.gamma_star, samples);
        let dist = |x: &[f64; 4], y: &[f64; 4]| x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let early_return_gap = (1..samples)
            .filter(|&i| i * 100 > samples && i * 100 < 99 * samples)
            .map(|i| dist(&g.points[i], &g.points[0]).min(dist(&gs.points[i], &gs.points[0])))
            .fold(f64::INFINITY, f64::min);
        let st = Stereographic::avoiding(&[&g, &gs], opts.seed)?;
        let attempt = (|| -> Result<(LinkReport, BennequinReport, BennequinReport)> {
            let kg = st.knot(&g, t_dir)?;
            let kgs = st.knot(&gs, t_dir)?;
            let link = linking_number(&kg, &kgs, opts.seed)?;
            let bg = bennequin(&g, t_dir, &st, opts.seed)?;
            let bgs = bennequin(&gs, t_dir, &st, opts.seed)?;
            Ok((link, bg, bgs))
        })();
        let (link, bg, bgs) = match attempt {
            Ok(r) => r,
            Err(Error::Numeric(_)) | Err(Error::Consistency { .. }) if samples < 64 * opts.samples.max(64) => {
                samples *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        let predicted = Prediction::new(m, n);
        let agree = link.linking == predicted.linking
            && bg.value == predicted.bennequin
            && bgs.value == predicted.bennequin
            && maslov == predicted.maslov
            && spin.spin.value() == predicted.spin;
        return Ok(DirectrixReport {
            a,
            m,
            n,
            k,
            h,
            conformal_length: ell,
            maslov,
            spin: spin.spin,
            spin_gap: spin.gap,
            directrix_period: t_dir,
            closure_gap,
            early_return_gap,
            contact_min: d.contact_min,
            samples,
            pole: [st.pole[0], st.pole[1], st.pole[2], st.pole[3]],
            link,
            bennequin_gamma: bg,
            bennequin_gamma_star: bgs,
            predicted,
            agree,
            gamma: g,
            gamma_star: gs,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_pair_links_pq_times() {
        let k = torus_knot(TorusKind::Standard, 3, 7, 1500).unwrap();
        let ks = torus_knot(TorusKind::Starred, 3, 7, 1500).unwrap();
        let r = linking_number(&k, &ks, 1).unwrap();
        assert_eq!(r.linking, 21);
        assert_eq!(r.diagram.crossings.len() % 2, 0);
    }

    #[test]
    fn check_knot_self_linking() {
        let k = torus_knot(TorusKind::Check, 3, 5, 3000).unwrap();
        assert_eq!(writhe(&k, &[0.0, 1.0, 0.0], 3).unwrap(), 12);
        assert_eq!(self_linking(&k, 3).unwrap(), 12);
    }

    #[test]
    fn antipode_maps_to_origin() {
        assert_eq!(stereographic(&[0.0, 0.0, 0.0, -1.0]).unwrap(), [0.0, 0.0, 0.0]);
        assert!(stereographic(&[0.0, 0.0, 0.0, 1.0]).is_err());
    }
}
