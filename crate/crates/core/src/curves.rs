//! Timelike curves: component splitting, strain density, osculating spaces,
//! conformal vertices, Maslov index and reparametrization by strain.

use crate::error::{Error, Result};
use crate::geometry::{self, pdot, BasisKind, EinsteinPoint, POINCARE_DIAG};
use crate::jet::{compose5, d5, diag_product, scale5, values5, Jet, Jet5, ORDER};
use crate::quad::gauss_legendre;
use nalgebra::{DMatrix, DVector, Matrix5, Vector5};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Curve evaluator on jets, returning Poincaré components of a null lift.
pub type Evaluator = Arc<dyn Fn(&Jet) -> Jet5 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    Interval { start: f64, end: f64 },
    Periodic { start: f64, period: f64 },
}

impl Domain {
    pub fn start(&self) -> f64 {
        match *self {
            Domain::Interval { start, .. } | Domain::Periodic { start, .. } => start,
        }
    }

    pub fn end(&self) -> f64 {
        match *self {
            Domain::Interval { end, .. } => end,
            Domain::Periodic { start, period } => start + period,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DerivativeMode {
    Exact,
    Sampled,
}

/// A timelike curve in the null-cone model.
#[derive(Clone)]
pub struct TimelikeCurve {
    eval: Evaluator,
    pub domain: Domain,
    pub mode: DerivativeMode,
    pub warnings: Vec<String>,
}

impl std::fmt::Debug for TimelikeCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimelikeCurve").field("domain", &self.domain).field("mode", &self.mode).finish()
    }
}

impl TimelikeCurve {
    pub fn new(eval: Evaluator, domain: Domain) -> Self {
        TimelikeCurve { eval, domain, mode: DerivativeMode::Exact, warnings: Vec::new() }
    }

    /// Curve given in components of `basis`.
    pub fn in_basis<F>(basis: BasisKind, domain: Domain, f: F) -> Self
    where
        F: Fn(&Jet) -> Jet5 + Send + Sync + 'static,
    {
        if basis == BasisKind::Poincare {
            return TimelikeCurve::new(Arc::new(f), domain);
        }
        let t = geometry::basis_transition(BasisKind::Poincare, basis);
        TimelikeCurve::new(Arc::new(move |s: &Jet| apply5(&t, &f(s))), domain)
    }

    /// Raw lift on a jet argument.
    pub fn lift(&self, t: &Jet) -> Jet5 {
        (self.eval)(t)
    }

    /// Section representative (time part of unit length) on a jet argument.
    pub fn section(&self, t: &Jet) -> Jet5 {
        let g = self.lift(t);
        let r = (g[0] * g[0] + g[1] * g[1]).sqrt();
        scale5(&g, &r.recip())
    }

    /// Section jet about `t`.
    pub fn jet(&self, t: f64) -> Jet5 {
        self.section(&Jet::variable(t))
    }

    pub fn point(&self, t: f64) -> EinsteinPoint {
        let v = values5(&self.lift(&Jet::constant(t)));
        let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let s = (v[2] * v[2] + v[3] * v[3] + v[4] * v[4]).sqrt();
        EinsteinPoint { x: [v[0] / r, v[1] / r, v[2] / s, v[3] / s, v[4] / s] }
    }

    /// Image under a conformal transformation given in Möbius components.
    pub fn transform(&self, f: &Matrix5<f64>) -> TimelikeCurve {
        let tmp = geometry::t_mp();
        let inv = tmp.try_inverse().unwrap();
        let a = inv * f * tmp;
        let src = self.eval.clone();
        let mut c = self.clone();
        c.eval = Arc::new(move |t: &Jet| apply5(&a, &src(t)));
        c
    }

    /// `γ ∘ f` for an orientation-preserving change of parameter `f`.
    pub fn reparametrize<F>(&self, f: F, domain: Domain) -> TimelikeCurve
    where
        F: Fn(&Jet) -> Jet + Send + Sync + 'static,
    {
        let src = self.eval.clone();
        let mut c = self.clone();
        c.eval = Arc::new(move |t: &Jet| src(&f(t)));
        c.domain = domain;
        c
    }

    /// Curve through samples in Poincaré components, with derivatives from
    /// local least-squares polynomials.
    pub fn from_samples(ts: Vec<f64>, xs: Vec<[f64; 5]>, periodic: bool) -> Result<Self> {
        if ts.len() != xs.len() || ts.len() < 2 * FIT_HALF + 2 {
            return Err(Error::Usage("too few samples".into()));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("sample parameters must increase".into()));
        }
        let n = ts.len();
        let domain = if periodic {
            let step = ts[n - 1] - ts[n - 2];
            Domain::Periodic { start: ts[0], period: ts[n - 1] - ts[0] + step }
        } else {
            Domain::Interval { start: ts[0], end: ts[n - 1] }
        };
        let data = Arc::new((ts, xs));
        let eval = Arc::new(move |t: &Jet| sampled_jet(&data.0, &data.1, periodic, domain, t));
        Ok(TimelikeCurve { eval, domain, mode: DerivativeMode::Sampled, warnings: Vec::new() })
    }

    /// Samples `(t, x0..x4)` of the section on a uniform grid.
    pub fn sample(&self, n: usize) -> Vec<(f64, EinsteinPoint)> {
        let (a, b) = (self.domain.start(), self.domain.end());
        let closed = matches!(self.domain, Domain::Periodic { .. });
        let den = if closed { n as f64 } else { (n - 1).max(1) as f64 };
        (0..n)
            .map(|i| {
                let t = a + (b - a) * i as f64 / den;
                (t, self.point(t))
            })
            .collect()
    }
}

pub(crate) fn apply5(a: &Matrix5<f64>, v: &Jet5) -> Jet5 {
    let mut out = [Jet::zero(); 5];
    for i in 0..5 {
        for j in 0..5 {
            if a[(i, j)] != 0.0 {
                out[i] += v[j].scale(a[(i, j)]);
            }
        }
    }
    out
}

/// Strain density below which a point counts as a vertex. The density is a
/// fourth root, so round-off of order 1e-16 in the normal part already
/// yields values near 1e-8.
pub const CYCLE_TOL: f64 = 1e-6;

const FIT_HALF: usize = 7;
const FIT_DEG: usize = 8;

fn sampled_jet(ts: &[f64], xs: &[[f64; 5]], periodic: bool, domain: Domain, t: &Jet) -> Jet5 {
    let n = ts.len();
    let mut t0 = t.value();
    let mut shift = 0.0;
    if let Domain::Periodic { start, period } = domain {
        let k = ((t0 - start) / period).floor();
        shift = k * period;
        t0 -= shift;
    }
    let idx = match ts.binary_search_by(|x| x.partial_cmp(&t0).unwrap()) {
        Ok(i) => i,
        Err(i) => i.min(n - 1),
    } as isize;
    let period = match domain {
        Domain::Periodic { period, .. } => period,
        _ => 0.0,
    };
    let (lo, hi) = if periodic {
        (idx - FIT_HALF as isize, idx + FIT_HALF as isize)
    } else {
        let lo = (idx - FIT_HALF as isize).clamp(0, (n - 2 * FIT_HALF - 1) as isize);
        (lo, lo + 2 * FIT_HALF as isize)
    };
    let rows = (hi - lo + 1) as usize;
    let mut pts = Vec::with_capacity(rows);
    for j in lo..=hi {
        let (i, off) = if periodic {
            let m = j.rem_euclid(n as isize) as usize;
            (m, ((j - m as isize) / n as isize) as f64 * period)
        } else {
            (j as usize, 0.0)
        };
        pts.push((ts[i] + off, xs[i]));
    }
    let h = (pts[rows - 1].0 - pts[0].0) / 2.0;
    let mut v = DMatrix::zeros(rows, FIT_DEG + 1);
    for (r, (tt, _)) in pts.iter().enumerate() {
        let s = (tt - t0) / h;
        let mut p = 1.0;
        for c in 0..=FIT_DEG {
            v[(r, c)] = p;
            p *= s;
        }
    }
    let svd = v.svd(true, true);
    let mut out = [Jet::zero(); 5];
    for k in 0..5 {
        let rhs = DVector::from_iterator(rows, pts.iter().map(|p| p.1[k]));
        let coef = svd.solve(&rhs, 1e-14).expect("svd solve");
        let mut jet = Jet::zero();
        let mut hp = 1.0;
        for c in 0..=FIT_DEG.min(ORDER) {
            jet.c[c] = coef[c] / hp;
            hp *= h;
        }
        jet.c[0] = coef[0];
        let mut inner = *t;
        inner.c[0] -= shift;
        out[k] = jet.compose(&inner);
    }
    out
}

/// Time and space components of the section at `t`.
pub fn split_components(curve: &TimelikeCurve, t: f64) -> ([f64; 2], [f64; 3]) {
    let p = curve.point(t);
    (p.time(), p.space())
}

fn det3(g: &[[Jet; 3]; 3]) -> Jet {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Normal part of the third derivative of a lift jet, together with
/// `|<γ',γ'>|`.
pub fn normal_jet(g: &Jet5) -> (Jet5, Jet) {
    let d1 = d5(g);
    let d2 = d5(&d1);
    let d3 = d5(&d2);
    let vs = [g, &d1, &d2];
    let mut gm = [[Jet::zero(); 3]; 3];
    let mut b = [Jet::zero(); 3];
    for i in 0..3 {
        for j in i..3 {
            gm[i][j] = diag_product(vs[i], vs[j], &POINCARE_DIAG);
            gm[j][i] = gm[i][j];
        }
        b[i] = diag_product(&d3, vs[i], &POINCARE_DIAG);
    }
    let det = det3(&gm);
    let mut adj = [[Jet::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            adj[i][j] = gm[r0][c0] * gm[r1][c1] - gm[r0][c1] * gm[r1][c0];
        }
    }
    let mut n = d3;
    for i in 0..3 {
        let mut coef = Jet::zero();
        for j in 0..3 {
            coef += adj[i][j] * b[j];
        }
        let coef = coef / det;
        for k in 0..5 {
            n[k] = n[k] - coef * vs[i][k];
        }
    }
    let mut v2 = diag_product(&d1, &d1, &POINCARE_DIAG);
    if v2.value() > 0.0 {
        v2 = -v2;
    }
    (n, -v2)
}

/// Fourth power of the strain density as a jet, together with
/// `|<γ',γ'>|`. Input is a lift jet in Poincaré components.
pub fn strain_quartic(g: &Jet5) -> (Jet, Jet) {
    let (n, c2) = normal_jet(g);
    (diag_product(&n, &n, &POINCARE_DIAG), c2)
}

/// Strain density jet of a lift jet. Fails at vertices.
pub fn strain_jet(g: &Jet5, t: f64) -> Result<Jet> {
    let (q, c2) = strain_quartic(g);
    if c2.value() <= 0.0 {
        return Err(Error::Degenerate(format!("tangent not timelike at t = {t}")));
    }
    let r = q / c2;
    if r.value() <= CYCLE_TOL.powi(4) {
        return Err(Error::NotGeneric(t));
    }
    Ok(r.powf(0.25))
}

/// Strain density `υ(t)`.
pub fn strain_density(curve: &TimelikeCurve, t: f64) -> Result<f64> {
    let g = curve.jet(t);
    let (q, c2) = strain_quartic(&g);
    if c2.value() <= 0.0 {
        return Err(Error::Degenerate(format!("tangent not timelike at t = {t}")));
    }
    Ok((q.value() / c2.value()).max(0.0).powf(0.25))
}

/// Lift jet re-expanded in the local conformal parameter about `t`
/// (the new parameter vanishes at `t`). Also returns `υ(t)`.
pub fn conformal_jet(curve: &TimelikeCurve, t: f64) -> Result<(Jet5, f64)> {
    let g = curve.jet(t);
    let ups = strain_jet(&g, t)?;
    let u = ups.integral();
    let mut tu = u.revert();
    tu.c[0] = t;
    Ok((compose5(&g, &tu), ups.value()))
}

/// Orthonormal basis of the osculating space with Gram `diag(-1,-1,+1)`
/// and the projector onto its orthogonal complement.
#[derive(Clone, Debug)]
pub struct OsculatingSpace {
    pub basis: [[f64; 5]; 3],
    /// Matrix of `π_N` on Poincaré components.
    pub normal_projector: Matrix5<f64>,
}

impl OsculatingSpace {
    pub fn project_normal(&self, v: &[f64; 5]) -> [f64; 5] {
        let r = self.normal_projector * Vector5::from_column_slice(v);
        [r[0], r[1], r[2], r[3], r[4]]
    }
}

fn axpy5(a: &[f64; 5], s: f64, b: &[f64; 5]) -> [f64; 5] {
    let mut r = *a;
    for i in 0..5 {
        r[i] += s * b[i];
    }
    r
}

fn scal5(s: f64, a: &[f64; 5]) -> [f64; 5] {
    let mut r = *a;
    r.iter_mut().for_each(|x| *x *= s);
    r
}

/// Osculating space `span(γ, γ', γ'')` at `t`.
pub fn osculating_space(curve: &TimelikeCurve, t: f64) -> Result<OsculatingSpace> {
    let g = curve.jet(t);
    let v0 = values5(&g);
    let v1 = values5(&d5(&g));
    let v2 = values5(&d5(&d5(&g)));
    let n1 = pdot(&v1, &v1);
    if n1 >= 0.0 {
        return Err(Error::Degenerate(format!("tangent not timelike at t = {t}")));
    }
    let e1 = scal5(1.0 / (-n1).sqrt(), &v1);
    // remove e1 from γ and γ''
    let a = axpy5(&v0, pdot(&v0, &e1), &e1);
    let b = axpy5(&v2, pdot(&v2, &e1), &e1);
    let (gaa, gab, gbb) = (pdot(&a, &a), pdot(&a, &b), pdot(&b, &b));
    let sm = nalgebra::Matrix2::new(gaa, gab, gab, gbb);
    let eig = sm.symmetric_eigen();
    let mut neg = None;
    let mut pos = None;
    for k in 0..2 {
        let lam = eig.eigenvalues[k];
        let w = eig.eigenvectors.column(k);
        let v = axpy5(&scal5(w[0], &a), w[1], &b);
        let scale = lam.abs().sqrt();
        if scale < 1e-12 {
            return Err(Error::Degenerate(format!("osculating span has rank < 3 at t = {t}")));
        }
        let v = scal5(1.0 / scale, &v);
        if lam < 0.0 {
            neg = Some(v);
        } else {
            pos = Some(v);
        }
    }
    let (e2, e3) = match (neg, pos) {
        (Some(n), Some(p)) => (n, p),
        _ => return Err(Error::Degenerate(format!("osculating space has wrong signature at t = {t}"))),
    };
    let basis = [e1, e2, e3];
    let signs = [-1.0, -1.0, 1.0];
    let mut proj = Matrix5::identity();
    let gd = Matrix5::from_diagonal(&Vector5::from_column_slice(&POINCARE_DIAG));
    for k in 0..3 {
        let e = Vector5::from_column_slice(&basis[k]);
        // v -> v - s <v, e> e
        proj -= signs[k] * e * (gd * e).transpose();
    }
    Ok(OsculatingSpace { basis, normal_projector: proj })
}

/// Result of a vertex search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum VertexReport {
    /// The strain vanishes on the whole interval.
    Cycle,
    Vertices(Vec<f64>),
}

fn normal_third(curve: &TimelikeCurve, t: f64) -> ([f64; 5], [f64; 5]) {
    let (n, _) = normal_jet(&curve.jet(t));
    (values5(&n), values5(&d5(&n)))
}

/// Conformal vertices on `[t0, t1]`, located on a grid of `n` cells and
/// refined to `1e-10`.
pub fn find_vertices(curve: &TimelikeCurve, t0: f64, t1: f64, n: usize) -> Result<VertexReport> {
    let ts: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
    let ups: Vec<f64> = ts.iter().map(|&t| strain_density(curve, t)).collect::<Result<_>>()?;
    if ups.iter().all(|&u| u < CYCLE_TOL) {
        return Ok(VertexReport::Cycle);
    }
    let scale = ups.iter().cloned().fold(0.0, f64::max);
    let mut found: Vec<f64> = Vec::new();
    for i in 0..=n {
        let left = if i > 0 { ups[i - 1] } else { f64::INFINITY };
        let right = if i < n { ups[i + 1] } else { f64::INFINITY };
        if ups[i] <= left && ups[i] <= right && ups[i] < 0.5 * scale {
            if let Some(r) = refine_vertex(curve, ts[i], t0, t1) {
                if !found.iter().any(|f| (f - r).abs() < 1e-7) {
                    found.push(r);
                }
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(VertexReport::Vertices(found))
}

fn refine_vertex(curve: &TimelikeCurve, start: f64, lo: f64, hi: f64) -> Option<f64> {
    let dot = |a: &[f64; 5], b: &[f64; 5]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm0 = {
        let (v, d) = normal_third(curve, start);
        dot(&v, &v).sqrt().max(dot(&d, &d).sqrt()).max(1e-300)
    };
    let mut t = start;
    // Gauss-Newton on the vector π_N(γ''')
    for _ in 0..200 {
        let (v, d) = normal_third(curve, t);
        let dd = dot(&d, &d);
        if dd == 0.0 {
            break;
        }
        let step = -dot(&v, &d) / dd;
        t = (t + step).clamp(lo, hi);
        if step.abs() < 1e-14 {
            break;
        }
    }
    // polish through the derivative when the zero is multiple
    let (v, _) = normal_third(curve, t);
    let mut best = (t, dot(&v, &v).sqrt());
    let mut s = t;
    for _ in 0..60 {
        let h = 1e-4;
        let (_, d0) = normal_third(curve, s);
        let (_, dp) = normal_third(curve, s + h);
        let (_, dm) = normal_third(curve, s - h);
        let dd: Vec<f64> = (0..5).map(|k| (dp[k] - dm[k]) / (2.0 * h)).collect();
        let den: f64 = dd.iter().map(|x| x * x).sum();
        if den == 0.0 {
            break;
        }
        let step = -(0..5).map(|k| d0[k] * dd[k]).sum::<f64>() / den;
        s = (s + step).clamp(lo, hi);
        let (vs, _) = normal_third(curve, s);
        let nv = dot(&vs, &vs).sqrt();
        if nv <= best.1 {
            best = (s, nv);
        }
        if step.abs() < 1e-14 {
            break;
        }
    }
    if best.1 < 1e-7 * norm0.max(1.0) {
        Some(best.0)
    } else {
        None
    }
}

/// Degree of the time component over one period.
pub fn maslov_index(curve: &TimelikeCurve) -> Result<i64> {
    let (start, period) = match curve.domain {
        Domain::Periodic { start, period } => (start, period),
        _ => return Err(Error::Usage("Maslov index needs a closed curve".into())),
    };
    let total = winding(|t| curve.point(t).time(), start, start + period, 256);
    let turns = total / (2.0 * PI);
    let r = turns.round();
    if (turns - r).abs() > 0.1 {
        return Err(Error::Consistency { what: "time component does not close".into(), achieved: (turns - r).abs(), tol: 0.1 });
    }
    Ok(r as i64)
}

/// Accumulated angle of a planar map, refining until every increment is
/// below 0.5 rad.
pub fn winding<F: Fn(f64) -> [f64; 2]>(f: F, a: f64, b: f64, n0: usize) -> f64 {
    let mut n = n0.max(8);
    loop {
        let mut total = 0.0;
        let mut ok = true;
        let mut prev = f(a);
        for i in 1..=n {
            let t = a + (b - a) * i as f64 / n as f64;
            let cur = f(t);
            let d = (prev[0] * cur[1] - prev[1] * cur[0]).atan2(prev[0] * cur[0] + prev[1] * cur[1]);
            if d.abs() > 0.5 {
                ok = false;
                break;
            }
            total += d;
            prev = cur;
        }
        if ok || n > (1 << 22) {
            return total;
        }
        n *= 4;
    }
}

/// Cumulative strain table used for the conformal reparametrization.
#[derive(Clone, Debug)]
pub struct StrainTable {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
}

const GL_POINTS: usize = 10;

fn strain_on(curve: &TimelikeCurve, a: f64, b: f64, x: &[f64], w: &[f64]) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        s += wi * strain_density(curve, c + h * xi)?;
    }
    Ok(s * h)
}

/// Accumulated strain `u(t)` with `u(t0) = 0` on an `n`-cell grid.
pub fn strain_table(curve: &TimelikeCurve, t0: f64, t1: f64, n: usize) -> Result<StrainTable> {
    let (x, w) = gauss_legendre(GL_POINTS);
    let mut t = vec![t0];
    let mut u = vec![0.0];
    for i in 1..=n {
        let a = t0 + (t1 - t0) * (i - 1) as f64 / n as f64;
        let b = t0 + (t1 - t0) * i as f64 / n as f64;
        let s = strain_on(curve, a, b, &x, &w)?;
        t.push(b);
        u.push(u[i - 1] + s);
    }
    Ok(StrainTable { t, u })
}

/// Samples of `(t, υ(t), u(t))`.
#[derive(Clone, Debug, Serialize)]
pub struct StrainProfile {
    pub t: Vec<f64>,
    pub density: Vec<f64>,
    pub strain: Vec<f64>,
}

pub fn strain_profile(curve: &TimelikeCurve, t0: f64, t1: f64, n: usize) -> Result<StrainProfile> {
    let tab = strain_table(curve, t0, t1, n)?;
    let density = tab.t.iter().map(|&t| strain_density(curve, t)).collect::<Result<_>>()?;
    Ok(StrainProfile { t: tab.t, density, strain: tab.u })
}

impl StrainTable {
    /// Parameter `t` with accumulated strain `u`.
    pub fn invert(&self, curve: &TimelikeCurve, u: f64) -> Result<f64> {
        let n = self.u.len();
        let i = match self.u.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
            Ok(i) => return Ok(self.t[i]),
            Err(i) => i.clamp(1, n - 1),
        };
        let (ta, tb) = (self.t[i - 1], self.t[i]);
        let (ua, ub) = (self.u[i - 1], self.u[i]);
        let (x, w) = gauss_legendre(GL_POINTS);
        let mut t = ta + (tb - ta) * (u - ua) / (ub - ua);
        for _ in 0..50 {
            let f = ua + strain_on(curve, ta, t, &x, &w)? - u;
            let d = strain_density(curve, t)?;
            if d <= 0.0 {
                return Err(Error::NotGeneric(t));
            }
            let step = f / d;
            t -= step;
            if step.abs() < 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }
}

/// Curve in the conformal parameter, starting at `u = 0` at `t0`.
pub fn reparametrize_by_strain(curve: &TimelikeCurve, t0: f64, t1: f64, cells: usize) -> Result<TimelikeCurve> {
    if let VertexReport::Vertices(v) = find_vertices(curve, t0, t1, cells)? {
        if let Some(&t) = v.first() {
            return Err(Error::NotGeneric(t));
        }
    } else {
        return Err(Error::NotGeneric(t0));
    }
    let table = Arc::new(strain_table(curve, t0, t1, cells)?);
    let total = *table.u.last().unwrap();
    let closed = matches!(curve.domain, Domain::Periodic { period, start } if (start + period - t1).abs() < 1e-12 && (start - t0).abs() < 1e-12);
    let domain = if closed {
        Domain::Periodic { start: 0.0, period: total }
    } else {
        Domain::Interval { start: 0.0, end: total }
    };
    let src = curve.clone();
    let period_t = t1 - t0;
    let eval = Arc::new(move |uj: &Jet| {
        let u0 = uj.value();
        let (wrap, uu) = if closed {
            let k = (u0 / total).floor();
            (k * period_t, u0 - k * total)
        } else {
            (0.0, u0)
        };
        let t = table.invert(&src, uu).unwrap_or(f64::NAN) + wrap;
        let g = src.jet(t);
        let ups = match strain_jet(&g, t) {
            Ok(v) => v,
            Err(_) => return [Jet::constant(f64::NAN); 5],
        };
        let mut tu = ups.integral().revert();
        tu.c[0] = t;
        let tj = tu.compose(uj);
        compose5(&g, &tj)
    });
    let mut c = TimelikeCurve::new(eval, domain);
    c.mode = curve.mode;
    c.warnings = curve.warnings.clone();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle() -> TimelikeCurve {
        TimelikeCurve::new(
            Arc::new(|t: &Jet| {
                let (s, c) = t.sin_cos();
                [c, s, Jet::constant(1.0), Jet::zero(), Jet::zero()]
            }),
            Domain::Periodic { start: 0.0, period: 2.0 * PI },
        )
    }

    #[test]
    fn cycle_has_zero_strain() {
        let c = cycle();
        assert!(strain_density(&c, 0.4).unwrap() < 1e-6);
        assert_eq!(find_vertices(&c, 0.0, 1.0, 20).unwrap(), VertexReport::Cycle);
        assert_eq!(maslov_index(&c).unwrap(), 1);
    }

    #[test]
    fn split_of_cycle() {
        let (eta, beta) = split_components(&cycle(), 0.3);
        assert!((eta[0] - 0.3f64.cos()).abs() < 1e-15);
        assert_eq!(beta, [1.0, 0.0, 0.0]);
    }
}
