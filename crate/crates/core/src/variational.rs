//! Critical curves of the conformal strain functional: Euler–Lagrange
//! equations, elliptic curvature solutions, momentum, integration of the
//! extended system, the period map and closed critical curves.

use crate::curves::{winding, Domain, TimelikeCurve};
use crate::elliptic::{ellip_k, ellip_pi, jacobi_am, jacobi_sncndn_jet};
use crate::error::{Error, Result};
use crate::frames::{frenet_matrix, group_defect, lie_basis, mat_from, mat_into, reorthonormalize, MobiusFrame};
use crate::frames::{M01, M02, M03, M13, M42};
use crate::geometry::{mgram, BasisKind, EinsteinPoint};
use crate::homogeneous::Rational;
use crate::jet::{Jet, Jet5, ORDER};
use crate::ode::{self, OdeOptions};
use nalgebra::Matrix5;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Maximal disagreement between integrated and closed-form curvatures.
pub const CROSS_TOL: f64 = 1e-7;
/// Frame recurrence gap accepted as closure.
pub const CLOSURE_TOL: f64 = 1e-5;
/// Relative tolerance of the integrations behind the period map.
pub const PERIOD_TOL: f64 = 1e-12;
/// Largest node spacing of a sampled critical path; the dense evaluator
/// expands the extended system in Taylor series about the nearest node.
pub const NODE_STEP: f64 = 0.05;

/// Parameters `(e1, e2)` of a critical curve with its phase type and the
/// elliptic constants `(m, p)`. Type 3 stores `m = 1`, `p = e2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalParams {
    pub e1: f64,
    pub e2: f64,
    pub phase_type: u8,
    pub m: f64,
    pub p: f64,
}

/// Classifies `(e1, e2)` into the three phase types.
pub fn phase_type(e1: f64, e2: f64) -> Result<CriticalParams> {
    if !(e1.is_finite() && e2.is_finite() && e1 < e2 && e2 > 0.0) {
        return Err(Error::Domain(format!("(e1, e2) = ({e1}, {e2}) needs e1 < e2 and e2 > 0")));
    }
    let (phase_type, m, p) = if e1 > 0.0 {
        (1, (e2 - e1) / e2, e2)
    } else if e1 < 0.0 {
        (2, e2 / (e2 - e1), e2 - e1)
    } else {
        (3, 1.0, e2)
    };
    Ok(CriticalParams { e1, e2, phase_type, m, p })
}

impl CriticalParams {
    pub fn new(e1: f64, e2: f64) -> Result<Self> {
        phase_type(e1, e2)
    }

    /// Period of the curvatures in the conformal parameter; none for type 3.
    pub fn curvature_period(&self) -> Option<f64> {
        let k = ellip_k(self.m).ok()?;
        match self.phase_type {
            1 => Some(2.0 * k / self.p.sqrt()),
            2 => Some(4.0 * k / self.p.sqrt()),
            _ => None,
        }
    }
}

/// Euler–Lagrange residuals `(k'' - k³ + 2kh, h' - 3kk')` at `u`, with exact
/// derivatives from jets.
pub fn el_residual(k: &dyn Fn(&Jet) -> Jet, h: &dyn Fn(&Jet) -> Jet, u: f64) -> (f64, f64) {
    let x = Jet::variable(u);
    let (kj, hj) = (k(&x), h(&x));
    let (k0, h0, k1) = (kj.value(), hj.value(), kj.derivative(1));
    (kj.derivative(2) - k0 * k0 * k0 + 2.0 * k0 * h0, hj.derivative(1) - 3.0 * k0 * k1)
}

/// Closed-form curvatures of a critical curve with phase shift zero.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSolution {
    pub params: CriticalParams,
    pub warnings: Vec<String>,
}

/// Curvature solution for the given parameters. `h` always comes from the
/// first integral `h = 3k²/2 - (e1 + e2)/2`.
pub fn curvature_solution(params: &CriticalParams) -> CurvatureSolution {
    let mut warnings = Vec::new();
    if params.phase_type == 3 {
        warnings.push("phase type 3: k uses the sech solution sqrt(e2) sech(sqrt(e2) u) of the first integral".into());
    }
    CurvatureSolution { params: *params, warnings }
}

fn sncndn(x: &Jet, m: f64) -> (Jet, Jet, Jet) {
    jacobi_sncndn_jet(x, m).unwrap_or_else(|_| {
        let nan = Jet::constant(f64::NAN);
        (nan, nan, nan)
    })
}

impl CurvatureSolution {
    pub fn k_jet(&self, u: &Jet) -> Jet {
        let CriticalParams { m, p, .. } = self.params;
        let x = u.scale(p.sqrt());
        match self.params.phase_type {
            1 => sncndn(&x, m).2.recip().scale((p * (1.0 - m)).sqrt()),
            2 => {
                let (s, _, d) = sncndn(&x, m);
                (s / d).scale((p * (1.0 - m) * m).sqrt())
            }
            _ => x.cosh().recip().scale(p.sqrt()),
        }
    }

    pub fn h_jet(&self, u: &Jet) -> Jet {
        let k = self.k_jet(u);
        (k * k).scale(1.5) - 0.5 * (self.params.e1 + self.params.e2)
    }

    /// `(k, k', h)` at `u`.
    pub fn state(&self, u: f64) -> (f64, f64, f64) {
        let k = self.k_jet(&Jet::variable(u));
        let k0 = k.value();
        (k0, k.derivative(1), 1.5 * k0 * k0 - 0.5 * (self.params.e1 + self.params.e2))
    }

    pub fn k(&self, u: f64) -> f64 {
        self.state(u).0
    }

    pub fn h(&self, u: f64) -> f64 {
        self.state(u).2
    }

    pub fn period(&self) -> Option<f64> {
        self.params.curvature_period()
    }

    /// `k'² + (k² - e1)(k² - e2)` at `u`.
    pub fn phase_residual(&self, u: f64) -> f64 {
        let (k, kd, _) = self.state(u);
        kd * kd + (k * k - self.params.e1) * (k * k - self.params.e2)
    }

    /// Euler–Lagrange residuals at `u`.
    pub fn el_residual(&self, u: f64) -> (f64, f64) {
        el_residual(&|x| self.k_jet(x), &|x| self.h_jet(x), u)
    }

    /// `|H' - [H, K]|` at `u`.
    pub fn lax_residual(&self, u: f64) -> f64 {
        let x = Jet::variable(u);
        let (kj, hj) = (self.k_jet(&x), self.h_jet(&x));
        let (k, kd, kdd) = (kj.value(), kj.derivative(1), kj.derivative(2));
        let (h, hd) = (hj.value(), hj.derivative(1));
        let b = lie_basis();
        let dh = b[M13] * (-kd) + b[M03] * kdd + b[M02] * (hd - 2.0 * k * kd);
        let hm = momentum_generator(k, kd, h);
        let km = frenet_matrix(h, k);
        (dh - (hm * km - km * hm)).amax()
    }
}

/// Momentum: a constant element of the Lie algebra along a critical curve.
pub type MomentumMatrix = Matrix5<f64>;

/// `H = -M01 - M42 - k M13 + k' M03 + (h - k²) M02`.
pub fn momentum_generator(k: f64, kd: f64, h: f64) -> Matrix5<f64> {
    let b = lie_basis();
    -b[M01] - b[M42] - b[M13] * k + b[M03] * kd + b[M02] * (h - k * k)
}

/// `M H M^{-1}` for the canonical frame `M`.
pub fn momentum(frame: &MobiusFrame, k: f64, kd: f64, h: f64) -> MomentumMatrix {
    frame.m * momentum_generator(k, kd, h) * frame.dual()
}

/// The invariant contact form `½(μ¹₀ + μ²₄ + (k² - h)μ²₀ - k'μ³₀ + kμ³₁)` on a
/// tangent vector with Maurer–Cartan component `mu`.
pub fn contact_form(mu: &Matrix5<f64>, k: f64, kd: f64, h: f64) -> f64 {
    0.5 * (mu[(1, 0)] + mu[(2, 4)] + (k * k - h) * mu[(2, 0)] - kd * mu[(3, 0)] + k * mu[(3, 1)])
}

const STATE: usize = 28;

fn xi_field(y: &[f64], dy: &mut [f64]) {
    let m = mat_from(y);
    let (k, kd, h) = (y[25], y[26], y[27]);
    mat_into(&(m * frenet_matrix(h, k)), dy);
    dy[25] = kd;
    dy[26] = k * k * k - 2.0 * k * h;
    dy[27] = 3.0 * k * kd;
}

/// Taylor series of the extended system about a state.
struct XiSeries {
    k: Jet,
    h: Jet,
    m: Vec<Matrix5<f64>>,
}

fn xi_series(y: &[f64]) -> XiSeries {
    let mut k = Jet::constant(y[25]);
    k.c[1] = y[26];
    let mut h = Jet::constant(y[27]);
    for n in 0..ORDER {
        h.c[n + 1] = 3.0 * (k * k.d()).c[n] / (n + 1) as f64;
        if n + 2 <= ORDER {
            let f = k * k * k - (k * h).scale(2.0);
            k.c[n + 2] = f.c[n] / ((n + 1) * (n + 2)) as f64;
        }
    }
    let k0 = frenet_matrix(0.0, 0.0);
    let kh = frenet_matrix(1.0, 0.0) - k0;
    let kk = frenet_matrix(0.0, 1.0) - k0;
    let coef: Vec<Matrix5<f64>> =
        (0..=ORDER).map(|i| if i == 0 { frenet_matrix(h.c[0], k.c[0]) } else { kh * h.c[i] + kk * k.c[i] }).collect();
    let mut m = vec![mat_from(y)];
    for n in 0..ORDER {
        let mut s = Matrix5::zeros();
        for j in 0..=n {
            s += m[j] * coef[n - j];
        }
        m.push(s / (n + 1) as f64);
    }
    XiSeries { k, h, m }
}

fn poly(c: &[f64], d: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * d + x)
}

fn advance(y: &[f64], d: f64) -> [f64; STATE] {
    let s = xi_series(y);
    let mut out = [0.0; STATE];
    let mut m = Matrix5::zeros();
    for a in s.m.iter().rev() {
        m = m * d + a;
    }
    mat_into(&m, &mut out);
    out[25] = poly(&s.k.c, d);
    out[26] = poly(&s.k.d().c, d);
    out[27] = poly(&s.h.c, d);
    out
}

/// Sampled solution of the extended system `(M, k, k', h)`.
#[derive(Clone, Debug)]
pub struct CriticalPath {
    pub params: CriticalParams,
    pub u: Vec<f64>,
    pub frames: Vec<MobiusFrame>,
    pub k: Vec<f64>,
    pub kdot: Vec<f64>,
    pub h: Vec<f64>,
    /// Largest deviation of `(k, h)` from the closed form.
    pub curvature_error: f64,
}

fn state_of(path: &CriticalPath, i: usize) -> [f64; STATE] {
    let mut y = [0.0; STATE];
    mat_into(&path.frames[i].m, &mut y);
    y[25] = path.k[i];
    y[26] = path.kdot[i];
    y[27] = path.h[i];
    y
}

fn nearest(u: &[f64], t: f64) -> usize {
    let i = u.partition_point(|&x| x < t);
    if i == 0 {
        0
    } else if i == u.len() || t - u[i - 1] <= u[i] - t {
        i - 1
    } else {
        i
    }
}

/// Normalized point of the Einstein universe spanned by the first column.
pub fn frame_point(m: &Matrix5<f64>) -> EinsteinPoint {
    let v = MobiusFrame { m: *m }.column_poincare(0);
    let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let s = (v[2] * v[2] + v[3] * v[3] + v[4] * v[4]).sqrt();
    EinsteinPoint { x: [v[0] / r, v[1] / r, v[2] / s, v[3] / s, v[4] / s] }
}

impl CriticalPath {
    pub fn momentum(&self, i: usize) -> MomentumMatrix {
        momentum(&self.frames[i], self.k[i], self.kdot[i], self.h[i])
    }

    /// Largest `|m(u) - m(u0)|` (Frobenius) over the samples.
    pub fn momentum_drift(&self) -> f64 {
        let m0 = self.momentum(0);
        (0..self.u.len()).map(|i| (self.momentum(i) - m0).norm()).fold(0.0, f64::max)
    }

    /// Largest residual of the two first integrals over the samples.
    pub fn first_integral_residual(&self) -> f64 {
        let (e1, e2) = (self.params.e1, self.params.e2);
        (0..self.u.len())
            .map(|i| {
                let (k, kd, h) = (self.k[i], self.kdot[i], self.h[i]);
                let a = kd * kd + (k * k - e1) * (k * k - e2);
                let b = h - 1.5 * k * k + 0.5 * (e1 + e2);
                a.abs().max(b.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Extended state at `u` from the Taylor series about the nearest node.
    pub fn state_at(&self, u: f64) -> [f64; STATE] {
        let i = nearest(&self.u, u);
        advance(&state_of(self, i), u - self.u[i])
    }

    pub fn frame_at(&self, u: f64) -> Matrix5<f64> {
        mat_from(&self.state_at(u))
    }

    /// Points of the Einstein universe at the samples.
    pub fn curve_points(&self) -> Vec<EinsteinPoint> {
        self.frames.iter().map(|f| frame_point(&f.m)).collect()
    }

    /// The critical curve as a timelike curve with exact jets.
    pub fn curve(&self, domain: Domain) -> TimelikeCurve {
        let path = Arc::new(self.clone());
        TimelikeCurve::in_basis(BasisKind::Mobius, domain, move |t: &Jet| {
            let y = path.state_at(t.value());
            let s = xi_series(&y);
            let mut out: Jet5 = [Jet::zero(); 5];
            for (r, o) in out.iter_mut().enumerate() {
                let mut c = Jet::zero();
                for (n, a) in s.m.iter().enumerate() {
                    c.c[n] = a[(r, 0)];
                }
                *o = c.compose(t);
            }
            out
        })
    }
}

/// Integrates the extended system `M' = M K(h,k)`, `k'' = k³ - 2kh`,
/// `h' = 3kk'` from `m0` at `u0` with initial curvatures from the closed form,
/// reporting at `outputs`. Fails if the integrated curvatures leave the
/// closed form by more than [`CROSS_TOL`].
pub fn integrate_critical(
    params: &CriticalParams,
    m0: &MobiusFrame,
    u0: f64,
    outputs: &[f64],
    tol: f64,
) -> Result<CriticalPath> {
    let sol = curvature_solution(params);
    let (k0, kd0, h0) = sol.state(u0);
    let mut y0 = vec![0.0; STATE];
    mat_into(&m0.m, &mut y0);
    y0[25] = k0;
    y0[26] = kd0;
    y0[27] = h0;
    let project = |y: &mut [f64]| {
        let mut m = mat_from(y);
        if group_defect(&m) > 1e-13 * m.amax().powi(2).max(1.0) {
            reorthonormalize(&mut m);
            mat_into(&m, y);
        }
    };
    let ys = ode::integrate(|_, y, dy| xi_field(y, dy), u0, &y0, outputs, &OdeOptions::with_tol(tol), project)?;
    let mut path = CriticalPath {
        params: *params,
        u: outputs.to_vec(),
        frames: ys.iter().map(|y| MobiusFrame { m: mat_from(y) }).collect(),
        k: ys.iter().map(|y| y[25]).collect(),
        kdot: ys.iter().map(|y| y[26]).collect(),
        h: ys.iter().map(|y| y[27]).collect(),
        curvature_error: 0.0,
    };
    let mut err = 0.0f64;
    for (i, &u) in outputs.iter().enumerate() {
        let (k, _, h) = sol.state(u);
        err = err.max((k - path.k[i]).abs()).max((h - path.h[i]).abs());
    }
    path.curvature_error = err;
    if !(err <= CROSS_TOL) {
        return Err(Error::Consistency { what: "integrated curvatures against the closed form".into(), achieved: err, tol: CROSS_TOL });
    }
    Ok(path)
}

/// Uniform nodes on `[u0, u1]` with spacing at most [`NODE_STEP`], `u0` excluded.
pub fn nodes(u0: f64, u1: f64) -> Vec<f64> {
    let n = (((u1 - u0).abs() / NODE_STEP).ceil() as usize).max(1);
    (1..=n).map(|i| u0 + (u1 - u0) * i as f64 / n as f64).collect()
}

/// Critical path on `[u0, u1]` sampled densely enough for [`CriticalPath::curve`].
pub fn critical_path(params: &CriticalParams, m0: &MobiusFrame, u0: f64, u1: f64, tol: f64) -> Result<CriticalPath> {
    let mut out = vec![u0];
    out.extend(nodes(u0, u1));
    integrate_critical(params, m0, u0, &out, tol)
}

/// Membership in the family `b - a > 2`, `a + b < -sqrt((a - b)² - 4)` of
/// type-2 parameters whose momentum generates a compact torus.
pub fn in_d_star(e1: f64, e2: f64) -> bool {
    let s = e2 - e1;
    s > 2.0 && e2 > 0.0 && e1 + e2 < -(s * s - 4.0).sqrt()
}

/// Image region of the period map: `0 < psi2 < psi1 < 1`, `1 - psi1² < psi2`.
pub fn in_period_image(psi1: f64, psi2: f64) -> bool {
    0.0 < psi2 && psi2 < psi1 && psi1 < 1.0 && 1.0 - psi1 * psi1 < psi2
}

/// Rotation rates `(ξ1, ξ2)` of the momentum on its invariant planes.
pub fn rotation_rates(e1: f64, e2: f64) -> [f64; 2] {
    let r = ((e2 - e1).powi(2) - 4.0).sqrt();
    [(0.5 * (e1 + e2 + r).abs()).sqrt(), (0.5 * (e1 + e2 - r).abs()).sqrt()]
}

fn check_d_star(e1: f64, e2: f64) -> Result<()> {
    if !in_d_star(e1, e2) {
        return Err(Error::Domain(format!("(e1, e2) = ({e1}, {e2}) outside the compact-momentum family")));
    }
    let xi = rotation_rates(e1, e2);
    if xi[0] < 1e-6 || (xi[1] - xi[0]).abs() < 1e-6 {
        return Err(Error::Domain(format!("degenerate momentum spectrum ξ = {xi:?}")));
    }
    Ok(())
}

/// Value of the period map with its diagnostics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PeriodPoint {
    pub e1: f64,
    pub e2: f64,
    pub psi: [f64; 2],
    pub xi: [f64; 2],
    /// Curvature period `4K(m)/sqrt(p)`.
    pub omega: f64,
    /// Angle mismatch between the accumulated winding and the monodromy.
    pub monodromy_defect: f64,
    /// Mismatch between the momentum spectrum and `ξ`.
    pub spectrum_defect: f64,
}

/// Spectral projector of `a` (with `a² = -ξ²` on the plane) onto the plane
/// of rate `xj`, the other rate being `xl`.
fn plane_projector(a2: &Matrix5<f64>, xj: f64, xl: f64) -> Matrix5<f64> {
    a2 * (a2 + Matrix5::identity() * (xl * xl)) / (xj * xj * (xj * xj - xl * xl))
}

/// Basis `(v, a v / ξ)` of an invariant plane, with `|<v, v>| = 1`.
fn plane_basis(p: &Matrix5<f64>, a: &Matrix5<f64>, xj: f64) -> (nalgebra::Vector5<f64>, nalgebra::Vector5<f64>) {
    let g = mgram();
    let v = (0..5)
        .map(|i| p.column(i).into_owned())
        .max_by(|x, y| (x.transpose() * g * x)[0].abs().total_cmp(&(y.transpose() * g * y)[0].abs()))
        .unwrap_or_else(nalgebra::Vector5::zeros);
    let v = &v / (v.transpose() * g * v)[0].abs().sqrt();
    let w = a * &v / xj;
    (v, w)
}

fn wrap(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Period map: the rotation numbers, per curvature period, of the curve on
/// the two invariant planes of its momentum. Computed by integrating the
/// extended system from the identity frame over one period.
pub fn period_map(e1: f64, e2: f64) -> Result<PeriodPoint> {
    check_d_star(e1, e2)?;
    let params = CriticalParams::new(e1, e2)?;
    let omega = params.curvature_period().ok_or_else(|| Error::Numeric("no curvature period".into()))?;
    let path = critical_path(&params, &MobiusFrame::identity(), 0.0, omega, PERIOD_TOL)?;
    let a = path.momentum(0);
    let a2 = a * a;
    let xi = rotation_rates(e1, e2);
    let t2 = -a2.trace() / 2.0;
    let t4 = (a2 * a2).trace() / 2.0;
    let want2 = xi[0].powi(2) + xi[1].powi(2);
    let want4 = xi[0].powi(4) + xi[1].powi(4);
    let spectrum_defect = ((t2 - want2) / want2).abs().max(((t4 - want4) / want4).abs());
    if spectrum_defect > 1e-8 {
        return Err(Error::Consistency { what: "momentum spectrum against ξ".into(), achieved: spectrum_defect, tol: 1e-8 });
    }
    let g = mgram();
    let mon = path.frames.last().map(|f| f.m).unwrap_or_else(Matrix5::identity);
    let mut psi = [0.0; 2];
    let mut defect = 0.0f64;
    for (j, (xj, xl)) in [(xi[0], xi[1]), (xi[1], xi[0])].into_iter().enumerate() {
        let p = plane_projector(&a2, xj, xl);
        let (v, w) = plane_basis(&p, &a, xj);
        let coords = |x: nalgebra::Vector5<f64>| {
            let q = p * x;
            [(q.transpose() * g * v)[0], (q.transpose() * g * w)[0]]
        };
        let total = winding(|u| coords(path.frame_at(u).column(0).into_owned()), 0.0, omega, 256);
        psi[j] = total / (2.0 * PI);
        let c = coords(mon * v);
        let c0 = coords(v);
        let turn = (c0[0] * c[1] - c0[1] * c[0]).atan2(c0[0] * c[0] + c0[1] * c[1]);
        defect = defect.max(wrap(turn - total).abs());
    }
    Ok(PeriodPoint { e1, e2, psi, xi, omega, monodromy_defect: defect, spectrum_defect })
}

/// `Φ_j(u)` for the rate `xi`, with the prefactor `ξ/(p(m-1) + ξ²)`.
pub fn phi_closed_form(params: &CriticalParams, xi: f64, u: f64) -> Result<f64> {
    let CriticalParams { m, p, .. } = *params;
    let x2 = xi * xi;
    let n = m * (x2 + p * (m - 1.0)) / x2;
    let am = jacobi_am(p.sqrt() * u, m)?;
    Ok(xi / (p * (m - 1.0) + x2) * (u + p.sqrt() * (m - 1.0) / x2 * ellip_pi(n, am, m)?))
}

/// Period map from the closed-form angle functions `Φ_j`.
pub fn period_map_closed_form(e1: f64, e2: f64) -> Result<[f64; 2]> {
    check_d_star(e1, e2)?;
    let params = CriticalParams::new(e1, e2)?;
    let omega = params.curvature_period().ok_or_else(|| Error::Numeric("no curvature period".into()))?;
    let xi = rotation_rates(e1, e2);
    let mut out = [0.0; 2];
    for j in 0..2 {
        out[j] = (phi_closed_form(&params, xi[j], omega)? - phi_closed_form(&params, xi[j], 0.0)?) / (2.0 * PI);
    }
    Ok(out)
}

// Coordinates z = (ln(s - 2), logit λ) on the family, where s = e2 - e1 and
// e1 + e2 = -s + λ (s - sqrt(s² - 4)).
fn from_z(z: [f64; 2]) -> (f64, f64) {
    let s = 2.0 + z[0].exp();
    let l = 1.0 / (1.0 + (-z[1]).exp());
    let t = -s + l * (s - (s * s - 4.0).sqrt());
    (0.5 * (t - s), 0.5 * (t + s))
}

struct Seed {
    z: [f64; 2],
    psi: [f64; 2],
}

fn seed_grid() -> &'static Vec<Seed> {
    static GRID: OnceLock<Vec<Seed>> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut out = Vec::new();
        for i in 0..24 {
            for j in 0..24 {
                let z = [-4.0 + 6.0 * i as f64 / 23.0, -4.0 + 8.0 * j as f64 / 23.0];
                let (e1, e2) = from_z(z);
                if let Ok(psi) = period_map_closed_form(e1, e2) {
                    if psi.iter().all(|x| x.is_finite()) {
                        out.push(Seed { z, psi });
                    }
                }
            }
        }
        out
    })
}

/// Result of inverting the period map.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Inversion {
    pub target: [f64; 2],
    pub e1: f64,
    pub e2: f64,
    pub psi: [f64; 2],
    pub residual: f64,
    pub iterations: usize,
}

/// Parameters whose period map equals `(q1, q2)`, by damped Newton with a
/// finite-difference Jacobian started from the nearest coarse-grid seed.
pub fn invert_period_map(q1: Rational, q2: Rational) -> Result<Inversion> {
    invert_period_map_f64(q1.value(), q2.value())
}

/// As [`invert_period_map`] for real targets.
pub fn invert_period_map_f64(q1: f64, q2: f64) -> Result<Inversion> {
    if !in_period_image(q1, q2) {
        return Err(Error::Domain(format!("target ({q1}, {q2}) outside the image 0 < q2 < q1 < 1, 1 - q1² < q2")));
    }
    let target = [q1, q2];
    let eval = |z: [f64; 2]| -> Result<[f64; 2]> {
        let (e1, e2) = from_z(z);
        let p = period_map(e1, e2)?.psi;
        Ok([p[0] - q1, p[1] - q2])
    };
    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let seed = seed_grid()
        .iter()
        .min_by(|a, b| {
            let da = (a.psi[0] - q1).hypot(a.psi[1] - q2);
            let db = (b.psi[0] - q1).hypot(b.psi[1] - q2);
            da.total_cmp(&db)
        })
        .ok_or_else(|| Error::Numeric("empty seed grid".into()))?;
    let mut z = seed.z;
    let mut r = eval(z)?;
    let mut it = 0;
    while norm(r) > 1e-11 && it < 60 {
        it += 1;
        let hstep = 1e-6;
        let mut jac = [[0.0; 2]; 2];
        for c in 0..2 {
            let mut zp = z;
            zp[c] += hstep;
            let rp = eval(zp)?;
            for row in 0..2 {
                jac[row][c] = (rp[row] - r[row]) / hstep;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return Err(Error::Numeric("singular Jacobian of the period map".into()));
        }
        let dz = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];
        let mut lam = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let zn = [z[0] + lam * dz[0], z[1] + lam * dz[1]];
            if let Ok(rn) = eval(zn) {
                if norm(rn) < norm(r) {
                    z = zn;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let residual = norm(r);
    if residual > 1e-6 {
        return Err(Error::Numeric(format!("period map inversion stalled at residual {residual:e}")));
    }
    let (e1, e2) = from_z(z);
    Ok(Inversion { target, e1, e2, psi: [r[0] + q1, r[1] + q2], residual, iterations: it })
}

/// Frame and curve recurrence gaps after `periods` curvature periods,
/// starting from the identity frame.
pub fn recurrence_gap(params: &CriticalParams, periods: u64) -> Result<(f64, f64)> {
    let omega = params.curvature_period().ok_or_else(|| Error::Usage("type 3 curvatures are not periodic".into()))?;
    let length = periods as f64 * omega;
    let path = integrate_critical(params, &MobiusFrame::identity(), 0.0, &[length], PERIOD_TOL)?;
    let m = path.frames[0].m;
    let a = frame_point(&Matrix5::identity());
    let b = frame_point(&m);
    let cg = a.x.iter().zip(b.x.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    Ok(((m - Matrix5::identity()).norm(), cg))
}

/// A closed critical curve with its closure diagnostics.
#[derive(Clone, Debug)]
pub struct ClosedCritical {
    pub target: [Rational; 2],
    pub inversion: Inversion,
    pub omega: f64,
    /// Number of curvature periods, the lcm of the target denominators.
    pub periods: u64,
    pub length: f64,
    pub frame_gap: f64,
    pub curve_gap: f64,
    pub path: CriticalPath,
    pub curve: TimelikeCurve,
}

/// Closed critical curve whose period map equals `(q1, q2)`. The curve closes
/// after `lcm(den q1, den q2)` curvature periods.
pub fn closed_critical_curve(q1: Rational, q2: Rational) -> Result<ClosedCritical> {
    let inversion = invert_period_map(q1, q2)?;
    let params = CriticalParams::new(inversion.e1, inversion.e2)?;
    let omega = params.curvature_period().ok_or_else(|| Error::Numeric("no curvature period".into()))?;
    let periods = num_integer::lcm(q1.den, q2.den) as u64;
    let length = periods as f64 * omega;
    let path = critical_path(&params, &MobiusFrame::identity(), 0.0, length, PERIOD_TOL)?;
    let last = path.frames.last().map(|f| f.m).unwrap_or_else(Matrix5::identity);
    let frame_gap = (last - path.frames[0].m).norm();
    let a = frame_point(&path.frames[0].m);
    let b = frame_point(&last);
    let curve_gap = a.x.iter().zip(b.x.iter()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    if frame_gap > CLOSURE_TOL || curve_gap > CLOSURE_TOL {
        return Err(Error::Consistency { what: "closure after the predicted period".into(), achieved: frame_gap.max(curve_gap), tol: CLOSURE_TOL });
    }
    let curve = path.curve(Domain::Periodic { start: 0.0, period: length });
    Ok(ClosedCritical { target: [q1, q2], inversion, omega, periods, length, frame_gap, curve_gap, path, curve })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_types() {
        let p = phase_type(1.0, 2.0).unwrap();
        assert_eq!((p.phase_type, p.m, p.p), (1, 0.5, 2.0));
        let p = phase_type(-1.0, 1.0).unwrap();
        assert_eq!((p.phase_type, p.m, p.p), (2, 0.5, 2.0));
        assert_eq!(phase_type(0.0, 3.0).unwrap().phase_type, 3);
        assert!(phase_type(2.0, 1.0).is_err());
        assert!(phase_type(-2.0, -1.0).is_err());
    }

    #[test]
    fn constant_critical_curvatures() {
        let r = el_residual(&|_| Jet::constant(1.0), &|_| Jet::constant(0.5), 0.3);
        assert_eq!(r, (0.0, 0.0));
        let r = el_residual(&|_| Jet::constant(1.0), &|_| Jet::constant(0.0), 0.3);
        assert_eq!(r, (-1.0, 0.0));
    }

    #[test]
    fn initial_values() {
        let s = curvature_solution(&phase_type(-1.0, 1.0).unwrap());
        let (k, kd, h) = s.state(0.0);
        assert!(k.abs() < 1e-15 && (kd * kd - 1.0).abs() < 1e-14 && h.abs() < 1e-15);
        let s = curvature_solution(&phase_type(1.0, 2.0).unwrap());
        let (k, kd, _) = s.state(0.0);
        assert!((k - 1.0).abs() < 1e-15 && kd.abs() < 1e-15);
    }

    #[test]
    fn series_advance_matches_integration() {
        let p = phase_type(-1.2, 0.4).unwrap();
        let path = integrate_critical(&p, &MobiusFrame::identity(), 0.0, &[0.0, 0.05], 1e-13).unwrap();
        let y = advance(&state_of(&path, 0), 0.05);
        assert!((mat_from(&y) - path.frames[1].m).amax() < 1e-11);
        assert!((y[25] - path.k[1]).abs() < 1e-11);
    }
}
