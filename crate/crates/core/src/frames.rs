//! Canonical conformal frames, conformal curvatures, Frenet integration and
//! the curvature operator. Frames are 5×5 matrices whose columns are Möbius
//! components of `M0..M4`.

use crate::curves::{conformal_jet, strain_table, TimelikeCurve};
use crate::error::{Error, Result};
use crate::geometry::{mgram, t_mp};
use crate::jet::{d5, diag_product, scale5, values5, Jet, Jet5};
use crate::ode::{self, OdeOptions};
use nalgebra::Matrix5;
use serde::Serialize;

/// `E^i_j`: the matrix unit with a one in row `i`, column `j`.
pub fn unit(i: usize, j: usize) -> Matrix5<f64> {
    let mut e = Matrix5::zeros();
    e[(i, j)] = 1.0;
    e
}

/// The basis `M^i_j` of the Lie algebra of the conformal group, in the order
/// `M00, M01, M02, M03, M12, M13, M23, M41, M42, M43`.
pub fn lie_basis() -> [Matrix5<f64>; 10] {
    let e = unit;
    [
        e(0, 0) - e(4, 4),
        e(0, 1) - e(1, 4),
        e(0, 2) + e(2, 4),
        e(0, 3) + e(3, 4),
        e(1, 2) + e(2, 1),
        e(1, 3) + e(3, 1),
        e(2, 3) - e(3, 2),
        e(4, 1) - e(1, 0),
        e(4, 2) + e(2, 0),
        e(4, 3) + e(3, 0),
    ]
}

pub const M00: usize = 0;
pub const M01: usize = 1;
pub const M02: usize = 2;
pub const M03: usize = 3;
pub const M12: usize = 4;
pub const M13: usize = 5;
pub const M23: usize = 6;
pub const M41: usize = 7;
pub const M42: usize = 8;
pub const M43: usize = 9;

/// Frenet matrix `K(h,k) = M02 - M41 - k M23 - h M01`.
pub fn frenet_matrix(h: f64, k: f64) -> Matrix5<f64> {
    let b = lie_basis();
    b[M02] - b[M41] - b[M23] * k - b[M01] * h
}

/// Residual of `X^t m + m X = 0`.
pub fn algebra_defect(x: &Matrix5<f64>) -> f64 {
    let g = mgram();
    (x.transpose() * g + g * x).amax()
}

/// Residual of `M^t m M = m`.
pub fn group_defect(m: &Matrix5<f64>) -> f64 {
    let g = mgram();
    (m.transpose() * g * m - g).amax()
}

/// Möbius frame: columns are Möbius components of `M0..M4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MobiusFrame {
    pub m: Matrix5<f64>,
}

impl MobiusFrame {
    pub fn identity() -> Self {
        MobiusFrame { m: Matrix5::identity() }
    }

    /// Validates the Möbius-basis relations and orientation.
    pub fn new(m: Matrix5<f64>, tol: f64) -> Result<Self> {
        let d = group_defect(&m);
        if d > tol {
            return Err(Error::Consistency { what: "frame Gram relations".into(), achieved: d, tol });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol {
            return Err(Error::Consistency { what: "frame determinant".into(), achieved: (det - 1.0).abs(), tol });
        }
        Ok(MobiusFrame { m })
    }

    /// Dual basis `m^{-1} M^t m`, which is the inverse of the frame.
    pub fn dual(&self) -> Matrix5<f64> {
        let g = mgram();
        g * self.m.transpose() * g
    }

    /// Column `j` in Poincaré components.
    pub fn column_poincare(&self, j: usize) -> [f64; 5] {
        let inv = t_mp().try_inverse().unwrap();
        let v = inv * self.m.column(j);
        [v[0], v[1], v[2], v[3], v[4]]
    }
}

/// Curvature operator `M K(h,k) M^*`.
pub fn curvature_operator(frame: &MobiusFrame, k: f64, h: f64) -> Matrix5<f64> {
    frame.m * frenet_matrix(h, k) * frame.dual()
}

/// Canonical frame at a point together with the curvatures and strain density.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CanonicalFrame {
    pub frame: MobiusFrame,
    pub k: f64,
    pub h: f64,
    pub strain_density: f64,
}

fn pdot_jet(a: &Jet5, b: &Jet5) -> Jet {
    diag_product(a, b, &crate::geometry::POINCARE_DIAG)
}

fn lin(terms: &[(f64, &Jet5)]) -> Jet5 {
    let mut out = [Jet::zero(); 5];
    for (s, v) in terms {
        for i in 0..5 {
            out[i] += v[i].scale(*s);
        }
    }
    out
}

fn lin_jet(a: &Jet5, s: &Jet, b: &Jet5) -> Jet5 {
    let mut out = *a;
    for i in 0..5 {
        out[i] += *s * b[i];
    }
    out
}

/// Canonical frame from the jet of a lift in the conformal parameter.
pub fn frame_from_conformal_jet(g: &Jet5) -> Result<(MobiusFrame, f64, f64)> {
    let g1 = d5(g);
    let c2 = -pdot_jet(&g1, &g1);
    if c2.value() <= 0.0 {
        return Err(Error::Degenerate("tangent not timelike".into()));
    }
    let m0 = scale5(g, &c2.sqrt().recip());
    let m1 = d5(&m0);
    let m0pp = d5(&m1);
    let h = pdot_jet(&m0pp, &m0pp).scale(-0.5);
    // M4 = -M0'' - h M0
    let m4 = lin_jet(&lin(&[(-1.0, &m0pp)]), &(-h), &m0);
    // M2 = M4' - h M1
    let m2 = lin_jet(&d5(&m4), &(-h), &m1);
    let v0 = values5(&m0);
    let v1 = values5(&m1);
    let v2 = values5(&m2);
    let v4 = values5(&m4);
    let v3 = complement(&[v0, v1, v2, v4])?;
    let tmp = t_mp();
    let mut m = Matrix5::zeros();
    for (j, v) in [v0, v1, v2, v3, v4].iter().enumerate() {
        let x = tmp * nalgebra::Vector5::from_column_slice(v);
        m.set_column(j, &x);
    }
    if m.determinant() < 0.0 {
        let c = -m.column(3);
        m.set_column(3, &c);
    }
    let mut p3 = [0.0; 5];
    let inv = tmp.try_inverse().unwrap();
    let c3 = inv * m.column(3);
    p3.copy_from_slice(c3.as_slice());
    let dm2 = values5(&d5(&m2));
    let k = crate::geometry::pdot(&dm2, &p3);
    Ok((MobiusFrame { m }, k, h.value()))
}

/// Unit spacelike vector orthogonal to four given vectors (Poincaré components).
fn complement(vs: &[[f64; 5]; 4]) -> Result<[f64; 5]> {
    let g = crate::geometry::POINCARE_DIAG;
    // kernel of the covector matrix through signed 4x4 minors
    let mut v = [0.0; 5];
    for j in 0..5 {
        let mut minor = nalgebra::Matrix4::zeros();
        for (i, row) in vs.iter().enumerate() {
            let mut c = 0;
            for l in 0..5 {
                if l != j {
                    minor[(i, c)] = row[l] * g[l];
                    c += 1;
                }
            }
        }
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        v[j] = s * minor.determinant();
    }
    let n = crate::geometry::pdot(&v, &v);
    if n <= 0.0 {
        return Err(Error::Degenerate("normal complement is not spacelike".into()));
    }
    let s = n.sqrt();
    v.iter_mut().for_each(|x| *x /= s);
    Ok(v)
}

/// Canonical frame at parameter `t` of an arbitrary parametrization.
pub fn canonical_frame_at(curve: &TimelikeCurve, t: f64) -> Result<CanonicalFrame> {
    let (g, ups) = conformal_jet(curve, t)?;
    let (frame, k, h) = frame_from_conformal_jet(&g)?;
    Ok(CanonicalFrame { frame, k, h, strain_density: ups })
}

/// Samples `(u, k(u), h(u))` with `u` the conformal parameter.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureProfile {
    pub u: Vec<f64>,
    pub t: Vec<f64>,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
}

/// Curvatures on `n` points equally spaced in conformal parameter over
/// `[t0, t1]`.
pub fn curvature_profile(curve: &TimelikeCurve, t0: f64, t1: f64, n: usize) -> Result<CurvatureProfile> {
    let cells = 64.max(n);
    let table = strain_table(curve, t0, t1, cells)?;
    let total = *table.u.last().unwrap();
    let mut prof = CurvatureProfile { u: vec![], t: vec![], k: vec![], h: vec![] };
    for i in 0..n {
        let u = total * i as f64 / (n.max(2) - 1) as f64;
        let t = table.invert(curve, u)?;
        let cf = canonical_frame_at(curve, t)?;
        prof.u.push(u);
        prof.t.push(t);
        prof.k.push(cf.k);
        prof.h.push(cf.h);
    }
    Ok(prof)
}

/// Sampled solution of the Frenet equations.
#[derive(Clone, Debug)]
pub struct FramePath {
    pub u: Vec<f64>,
    pub frames: Vec<MobiusFrame>,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
}

impl FramePath {
    /// First frame column as a point of the Einstein universe.
    pub fn curve_points(&self) -> Vec<crate::geometry::EinsteinPoint> {
        self.frames
            .iter()
            .map(|f| {
                let v = f.column_poincare(0);
                let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
                let s = (v[2] * v[2] + v[3] * v[3] + v[4] * v[4]).sqrt();
                crate::geometry::EinsteinPoint { x: [v[0] / r, v[1] / r, v[2] / s, v[3] / s, v[4] / s] }
            })
            .collect()
    }
}

pub(crate) fn mat_from(y: &[f64]) -> Matrix5<f64> {
    Matrix5::from_column_slice(&y[..25])
}

pub(crate) fn mat_into(m: &Matrix5<f64>, y: &mut [f64]) {
    y[..25].copy_from_slice(m.as_slice());
}

/// Restores the Möbius relations of a nearly Möbius frame.
pub fn reorthonormalize(m: &mut Matrix5<f64>) {
    let g = mgram();
    let ip = |a: &nalgebra::Vector5<f64>, b: &nalgebra::Vector5<f64>| (a.transpose() * g * b)[0];
    let mut c: Vec<nalgebra::Vector5<f64>> = (0..5).map(|j| m.column(j).into_owned()).collect();
    let signs = [0.0, -1.0, 1.0, 1.0, 0.0];
    for &j in &[1usize, 2, 3] {
        for &i in &[1usize, 2, 3] {
            if i == j {
                break;
            }
            let p = ip(&c[j], &c[i]) * signs[i];
            c[j] = &c[j] - &c[i] * p;
        }
        let n = ip(&c[j], &c[j]) * signs[j];
        c[j] /= n.abs().sqrt();
    }
    for &j in &[0usize, 4] {
        for &i in &[1usize, 2, 3] {
            let p = ip(&c[j], &c[i]) * signs[i];
            c[j] = &c[j] - &c[i] * p;
        }
    }
    for _ in 0..3 {
        let c04 = ip(&c[0], &c[4]);
        let a = ip(&c[0], &c[0]);
        c[0] = &c[0] - &c[4] * (a / (2.0 * c04));
        let b = ip(&c[4], &c[4]);
        let c04 = ip(&c[0], &c[4]);
        c[4] = &c[4] - &c[0] * (b / (2.0 * c04));
    }
    let s = (-1.0 / ip(&c[0], &c[4])).sqrt();
    c[0] *= s;
    c[4] *= s;
    for j in 0..5 {
        m.set_column(j, &c[j]);
    }
}

/// Integrates `M' = M K(h(u), k(u))` from `m0` at `u0`, reporting at `outputs`.
pub fn integrate_frenet(
    k: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> f64,
    m0: &MobiusFrame,
    u0: f64,
    outputs: &[f64],
    tol: f64,
) -> Result<FramePath> {
    let mut y0 = vec![0.0; 25];
    mat_into(&m0.m, &mut y0);
    let rhs = |u: f64, y: &[f64], dy: &mut [f64]| {
        let m = mat_from(y);
        mat_into(&(m * frenet_matrix(h(u), k(u))), dy);
    };
    let project = |y: &mut [f64]| {
        let mut m = mat_from(y);
        if group_defect(&m) > 1e-13 * m.amax().powi(2).max(1.0) {
            reorthonormalize(&mut m);
            mat_into(&m, y);
        }
    };
    let sol = ode::integrate(rhs, u0, &y0, outputs, &OdeOptions::with_tol(tol), project)?;
    Ok(FramePath {
        u: outputs.to_vec(),
        frames: sol.iter().map(|y| MobiusFrame { m: mat_from(y) }).collect(),
        k: outputs.iter().map(|&u| k(u)).collect(),
        h: outputs.iter().map(|&u| h(u)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frenet_matrix_matches_display() {
        let (h, k) = (0.3, -1.7);
        let want = Matrix5::from_row_slice(&[
            0.0, -h, 1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, h, //
            0.0, 0.0, 0.0, -k, 1.0, //
            0.0, 0.0, k, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0, 0.0,
        ]);
        assert_eq!(frenet_matrix(h, k), want);
        assert!(algebra_defect(&want) < 1e-15);
    }

    #[test]
    fn basis_lies_in_algebra() {
        for b in lie_basis().iter() {
            assert!(algebra_defect(b) < 1e-15);
        }
    }

    #[test]
    fn reorthonormalize_fixes_perturbation() {
        let mut m = (frenet_matrix(0.2, 0.7) * 0.4).exp();
        m[(1, 3)] += 1e-6;
        m[(0, 4)] -= 2e-6;
        reorthonormalize(&mut m);
        assert!(group_defect(&m) < 1e-13);
    }
}
