//! The symplectic group Sp(4,R): the double covering onto the conformal
//! group, the lifted Frenet matrix, directrices on S³, the standard contact
//! form and the symplectic spin of closed curves.

use crate::curves::{Domain, TimelikeCurve};
use crate::error::{Error, Result};
use crate::frames::canonical_frame_at;
use crate::geometry::mgram;
use crate::ode::{self, OdeOptions};
use nalgebra::{Matrix2, Matrix4, Matrix5, Matrix6, Vector4, Vector6};
use serde::{Serialize, Serializer};
use std::f64::consts::FRAC_1_SQRT_2;

/// Relative symplectic defect accepted on input matrices.
pub const SP_TOL: f64 = 1e-9;

/// Matrix of `ω(x, y) = x¹y³ + x²y⁴ - x³y¹ - x⁴y²`.
pub fn omega_matrix() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 2)] = 1.0;
    j[(1, 3)] = 1.0;
    j[(2, 0)] = -1.0;
    j[(3, 1)] = -1.0;
    j
}

/// `|XᵗJX - J|` (max entry).
pub fn symplectic_defect(x: &Matrix4<f64>) -> f64 {
    let j = omega_matrix();
    (x.transpose() * j * x - j).amax()
}

/// `|AᵗJ + JA|` (max entry).
pub fn sp_algebra_defect(a: &Matrix4<f64>) -> f64 {
    let j = omega_matrix();
    (a.transpose() * j + j * a).amax()
}

/// The element with blocks `((a, b), (c, -aᵗ))`; `b` and `c` must be symmetric.
pub fn sp_element(a: &Matrix2<f64>, b: &Matrix2<f64>, c: &Matrix2<f64>) -> Result<Matrix4<f64>> {
    if (b - b.transpose()).amax() > 1e-12 || (c - c.transpose()).amax() > 1e-12 {
        return Err(Error::Domain("off-diagonal blocks must be symmetric".into()));
    }
    let mut x = Matrix4::zeros();
    x.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    x.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    x.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    x.fixed_view_mut::<2, 2>(2, 2).copy_from(&(-a.transpose()));
    Ok(x)
}

fn form(i: usize, j: usize) -> Matrix4<f64> {
    let mut a = Matrix4::zeros();
    a[(i, j)] = 1.0;
    a[(j, i)] = -1.0;
    a
}

/// Basis `E0..E4` of the 2-forms orthogonal to `ω`, as skew matrices
/// `α(x, y) = xᵗ α y`. `E2` carries the sign that makes the covering send the
/// lifted Frenet matrix to the Frenet matrix.
pub fn two_form_basis() -> [Matrix4<f64>; 5] {
    let s = FRAC_1_SQRT_2;
    [
        form(0, 1),
        (form(0, 3) - form(1, 2)) * s,
        -(form(0, 3) + form(1, 2)) * s,
        (form(0, 2) - form(1, 3)) * s,
        -form(2, 3),
    ]
}

/// Invariant scalar product of 2-forms: `α ∧ β = (α, β) e¹∧e²∧e³∧e⁴`.
pub fn wedge_pairing(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
    a[(0, 1)] * b[(2, 3)] - a[(0, 2)] * b[(1, 3)] + a[(0, 3)] * b[(1, 2)] + a[(1, 2)] * b[(0, 3)] - a[(1, 3)] * b[(0, 2)]
        + a[(2, 3)] * b[(0, 1)]
}

/// Coordinates of a 2-form in `E0..E4`, computed with the Gram matrix.
fn coords(a: &Matrix4<f64>, basis: &[Matrix4<f64>; 5]) -> [f64; 5] {
    let g = mgram();
    let p: Vec<f64> = basis.iter().map(|e| wedge_pairing(a, e)).collect();
    let mut c = [0.0; 5];
    for i in 0..5 {
        c[i] = (0..5).map(|l| g[(i, l)] * p[l]).sum();
    }
    c
}

fn check_symplectic(x: &Matrix4<f64>) -> Result<()> {
    let d = symplectic_defect(x);
    let scale = x.amax().powi(2).max(1.0);
    if !(d <= SP_TOL * scale) {
        return Err(Error::Domain(format!("matrix is not symplectic (defect {d:e})")));
    }
    Ok(())
}

/// The covering `Sp(4,R) → A(2,3)`: the action `α ↦ α(X⁻¹·, X⁻¹·)` on the
/// 2-forms orthogonal to `ω`, in Möbius components.
pub fn rho(x: &Matrix4<f64>) -> Result<Matrix5<f64>> {
    check_symplectic(x)?;
    let xi = x.try_inverse().ok_or_else(|| Error::Domain("singular matrix".into()))?;
    let basis = two_form_basis();
    let mut r = Matrix5::zeros();
    for (j, e) in basis.iter().enumerate() {
        let c = coords(&(xi.transpose() * e * xi), &basis);
        for i in 0..5 {
            r[(i, j)] = c[i];
        }
    }
    Ok(r)
}

/// Differential of [`rho`] at the identity: `α ↦ -Aᵗα - αA`.
pub fn rho_star(a: &Matrix4<f64>) -> Matrix5<f64> {
    let basis = two_form_basis();
    let mut r = Matrix5::zeros();
    for (j, e) in basis.iter().enumerate() {
        let c = coords(&(-a.transpose() * e - e * a), &basis);
        for i in 0..5 {
            r[(i, j)] = c[i];
        }
    }
    r
}

/// Lifted Frenet matrix `K̃(h, k)`, with `rho_star(K̃(h,k)) = K(h,k)`.
pub fn lifted_frenet(h: f64, k: f64) -> Matrix4<f64> {
    let s = FRAC_1_SQRT_2;
    Matrix4::new(
        0.0, -k / 2.0, -s, 0.0, //
        k / 2.0, 0.0, 0.0, -s, //
        (h - 1.0) * s, 0.0, 0.0, -k / 2.0, //
        0.0, (h + 1.0) * s, k / 2.0, 0.0,
    )
}

/// Pulls a nearly symplectic matrix back onto Sp(4,R) by Newton steps on
/// `X (JᵗXᵗJX)^{-1/2}`.
pub fn sp_reorthonormalize(x: &mut Matrix4<f64>) {
    let j = omega_matrix();
    for _ in 0..6 {
        let s = j.transpose() * x.transpose() * j * *x;
        let e = s - Matrix4::identity();
        if e.amax() < 1e-15 {
            break;
        }
        *x *= Matrix4::identity() - e * 0.5;
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn skew_vec(a: &Matrix4<f64>) -> Vector6<f64> {
    Vector6::from_iterator(PAIRS.iter().map(|&(i, j)| a[(i, j)]))
}

fn skew_mat(v: &Vector6<f64>) -> Matrix4<f64> {
    let mut a = Matrix4::zeros();
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        a[(i, j)] = v[n];
        a[(j, i)] = -v[n];
    }
    a
}

/// Orthogonal projector onto the column plane of a rank-2 skew matrix.
fn plane_projector(b: &Matrix4<f64>) -> Matrix4<f64> {
    let bb = b * b.transpose();
    bb / (0.5 * bb.trace())
}

/// Unit vector spanning the common line of planes through it.
fn common_line(projectors: &[Matrix4<f64>]) -> Vector4<f64> {
    let s: Matrix4<f64> = projectors.iter().sum();
    let e = s.symmetric_eigen();
    let i = e.eigenvalues.imax();
    e.eigenvectors.column(i).into_owned()
}

/// A symplectic matrix `X` with `rho(X) = m`; the other preimage is `-X`.
/// Recovered from the action of `Y = X⁻ᵗ` on decomposable 2-forms:
/// `Y (eᵢ∧eⱼ) Yᵗ = yᵢ∧yⱼ`.
pub fn lift_frame(m: &Matrix5<f64>) -> Result<Matrix4<f64>> {
    let basis = two_form_basis();
    let mut cols: Vec<Vector6<f64>> = basis.iter().map(skew_vec).collect();
    cols.push(skew_vec(&omega_matrix()));
    let b = Matrix6::from_columns(&cols);
    let binv = b.try_inverse().ok_or_else(|| Error::Numeric("2-form basis is singular".into()))?;
    let mut img = cols.clone();
    for j in 0..5 {
        let mut v = Vector6::zeros();
        for i in 0..5 {
            v += cols[i] * m[(i, j)];
        }
        img[j] = v;
    }
    let l = Matrix6::from_columns(&img) * binv;
    let image = |i: usize, j: usize| -> Matrix4<f64> {
        let n = PAIRS.iter().position(|&p| p == (i, j)).unwrap_or(0);
        skew_mat(&l.column(n).into_owned())
    };
    let proj = |i: usize, j: usize| plane_projector(&image(i.min(j), i.max(j)));
    let v: Vec<Vector4<f64>> = (0..4)
        .map(|i| common_line(&(0..4).filter(|&j| j != i).map(|j| proj(i, j)).collect::<Vec<_>>()))
        .collect();
    let coef = |i: usize, j: usize| {
        let w = v[i] * v[j].transpose() - v[j] * v[i].transpose();
        image(i, j).dot(&w) / w.norm_squared()
    };
    let l1sq = coef(0, 1) * coef(0, 2) / coef(1, 2);
    if !(l1sq > 0.0) {
        return Err(Error::Numeric("frame has no symplectic lift (scale recovery failed)".into()));
    }
    let l1 = l1sq.sqrt();
    let lam = [l1, coef(0, 1) / l1, coef(0, 2) / l1, coef(0, 3) / l1];
    let y = Matrix4::from_columns(&[v[0] * lam[0], v[1] * lam[1], v[2] * lam[2], v[3] * lam[3]]);
    let mut x = y.transpose().try_inverse().ok_or_else(|| Error::Numeric("singular lift".into()))?;
    sp_reorthonormalize(&mut x);
    let err = (rho(&x)? - m).amax();
    if err > 1e-8 * m.amax().powi(2).max(1.0) {
        return Err(Error::Consistency { what: "lift of the frame".into(), achieved: err, tol: 1e-8 });
    }
    Ok(x)
}

/// `ζ = x₁dx₃ + x₂dx₄ - x₃dx₁ - x₄dx₂` at `p` on `v`.
pub fn contact_eval(p: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = p.iter().zip(v).map(|(a, b)| a * b).sum();
    if (n - 1.0).abs() > 1e-8 || dot.abs() > 1e-8 * vn.max(1.0) {
        return Err(Error::Domain("vector is not tangent to the unit sphere at the point".into()));
    }
    Ok(zeta(p, v))
}

fn zeta(p: &[f64; 4], v: &[f64; 4]) -> f64 {
    p[0] * v[2] + p[1] * v[3] - p[2] * v[0] - p[3] * v[1]
}

/// Unit sections `(E1, E2)` of the contact distribution at `p`.
pub fn contact_frame(p: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
    ([-p[3], p[2], -p[1], p[0]], [-p[1], p[0], p[3], -p[2]])
}

/// Samples of a curve on S³ with velocities.
#[derive(Clone, Debug, Serialize)]
pub struct S3Path {
    pub u: Vec<f64>,
    pub points: Vec<[f64; 4]>,
    pub velocities: Vec<[f64; 4]>,
}

/// Directrices `Γ`, `Γ*` (normalized third and fourth columns of the lift).
#[derive(Clone, Debug)]
pub struct Directrices {
    pub u: Vec<f64>,
    pub lifts: Vec<Matrix4<f64>>,
    pub gamma: S3Path,
    pub gamma_star: S3Path,
    /// Smallest `|ζ(Γ')|` over both directrices; `ζ` keeps one sign.
    pub contact_min: f64,
    pub symplectic_drift: f64,
}

fn column_path(u: &[f64], lifts: &[Matrix4<f64>], vel: &[Matrix4<f64>], j: usize) -> S3Path {
    let mut path = S3Path { u: u.to_vec(), points: vec![], velocities: vec![] };
    for (x, dx) in lifts.iter().zip(vel) {
        let c = x.column(j);
        let dc = dx.column(j);
        let n = c.norm();
        let p = c / n;
        let v = dc / n - p * (p.dot(&dc) / n);
        path.points.push([p[0], p[1], p[2], p[3]]);
        path.velocities.push([v[0], v[1], v[2], v[3]]);
    }
    path
}

/// Integrates `X' = X K̃(h(u), k(u))` from `x0` at `u0`, reporting at
/// `outputs`, and extracts the directrices.
pub fn directrices(
    k: &dyn Fn(f64) -> f64,
    h: &dyn Fn(f64) -> f64,
    x0: &Matrix4<f64>,
    u0: f64,
    outputs: &[f64],
    tol: f64,
) -> Result<Directrices> {
    check_symplectic(x0)?;
    let rhs = |u: f64, y: &[f64], dy: &mut [f64]| {
        let x = Matrix4::from_column_slice(y);
        dy.copy_from_slice((x * lifted_frenet(h(u), k(u))).as_slice());
    };
    let project = |y: &mut [f64]| {
        let mut x = Matrix4::from_column_slice(y);
        if symplectic_defect(&x) > 1e-12 {
            sp_reorthonormalize(&mut x);
            y.copy_from_slice(x.as_slice());
        }
    };
    let ys = ode::integrate(rhs, u0, x0.as_slice(), outputs, &OdeOptions::with_tol(tol), project)?;
    let lifts: Vec<Matrix4<f64>> = ys.iter().map(|y| Matrix4::from_column_slice(y)).collect();
    let vel: Vec<Matrix4<f64>> = lifts.iter().zip(outputs).map(|(x, &u)| x * lifted_frenet(h(u), k(u))).collect();
    let gamma = column_path(outputs, &lifts, &vel, 2);
    let gamma_star = column_path(outputs, &lifts, &vel, 3);
    let mut zs = Vec::new();
    for p in [&gamma, &gamma_star] {
        for (x, v) in p.points.iter().zip(&p.velocities) {
            zs.push(zeta(x, v));
        }
    }
    let positive = zs.iter().all(|&z| z > 0.0);
    let negative = zs.iter().all(|&z| z < 0.0);
    let contact_min = zs.iter().fold(f64::INFINITY, |a, z| a.min(z.abs()));
    if !(positive || negative) || contact_min < 1e-12 {
        return Err(Error::Consistency { what: "directrix transversality".into(), achieved: contact_min, tol: 1e-12 });
    }
    let symplectic_drift = lifts.iter().map(symplectic_defect).fold(0.0, f64::max);
    Ok(Directrices { u: outputs.to_vec(), lifts, gamma, gamma_star, contact_min, symplectic_drift })
}

/// Symplectic spin: 1 when the lift of a closed frame path closes, 1/2 when
/// it returns to its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    One,
    Half,
}

impl Spin {
    pub fn value(self) -> f64 {
        match self {
            Spin::One => 1.0,
            Spin::Half => 0.5,
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

/// Classifies `end` against `±start`.
pub fn spin_from_lifts(start: &Matrix4<f64>, end: &Matrix4<f64>, tol: f64) -> Result<(Spin, f64)> {
    let scale = start.amax().max(1.0);
    let plus = (end - start).amax() / scale;
    let minus = (end + start).amax() / scale;
    if plus <= tol {
        Ok((Spin::One, plus))
    } else if minus <= tol {
        Ok((Spin::Half, minus))
    } else {
        Err(Error::Consistency { what: "lift returns to neither ±start".into(), achieved: plus.min(minus), tol })
    }
}

/// `X(length)` for `X' = X K̃(h, k)`, `X(0) = I`.
pub fn lift_monodromy(k: &dyn Fn(f64) -> f64, h: &dyn Fn(f64) -> f64, length: f64, tol: f64) -> Result<Matrix4<f64>> {
    let d = directrices(k, h, &Matrix4::identity(), 0.0, &[length], tol)?;
    Ok(d.lifts[0])
}

/// Spin of a closed curve with its lift mismatch.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpinReport {
    pub spin: Spin,
    pub gap: f64,
    pub samples: usize,
}

/// Spin of a closed generic curve from a continuous lift of its canonical
/// frame over one period.
pub fn symplectic_spin(curve: &TimelikeCurve) -> Result<SpinReport> {
    let (start, period) = match curve.domain {
        Domain::Periodic { start, period } => (start, period),
        _ => return Err(Error::Usage("symplectic spin needs a closed curve".into())),
    };
    let mut n = 256;
    'refine: loop {
        let x0 = lift_frame(&canonical_frame_at(curve, start)?.frame.m)?;
        let mut x = x0;
        for i in 1..=n {
            let t = start + period * i as f64 / n as f64;
            let y = lift_frame(&canonical_frame_at(curve, t)?.frame.m)?;
            let (dp, dm) = ((y - x).amax(), (y + x).amax());
            let scale = x.amax().max(y.amax());
            if dp.min(dm) > 0.25 * scale {
                if n >= 1 << 16 {
                    return Err(Error::Numeric("lift sign ambiguous at the finest sampling".into()));
                }
                n *= 4;
                continue 'refine;
            }
            x = if dp <= dm { y } else { -y };
        }
        let (spin, gap) = spin_from_lifts(&x0, &x, 1e-6)?;
        return Ok(SpinReport { spin, gap, samples: n });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frenet_matrix;

    #[test]
    fn basis_gram_is_mobius() {
        let b = two_form_basis();
        let g = mgram();
        for i in 0..5 {
            for j in 0..5 {
                assert!((wedge_pairing(&b[i], &b[j]) - g[(i, j)]).abs() < 1e-15);
            }
            assert_eq!(wedge_pairing(&b[i], &omega_matrix()), 0.0);
        }
    }

    #[test]
    fn center_is_kernel() {
        assert!((rho(&Matrix4::identity()).unwrap() - Matrix5::identity()).amax() < 1e-15);
        assert!((rho(&-Matrix4::identity()).unwrap() - Matrix5::identity()).amax() < 1e-15);
    }

    #[test]
    fn lifted_frenet_covers_frenet() {
        let (h, k) = (0.3, -1.1);
        assert!(sp_algebra_defect(&lifted_frenet(h, k)) == 0.0);
        assert!((rho_star(&lifted_frenet(h, k)) - frenet_matrix(h, k)).amax() < 1e-15);
    }

    #[test]
    fn lift_inverts_rho() {
        let x = (lifted_frenet(0.4, 0.9) * 0.7).exp();
        let m = rho(&x).unwrap();
        let y = lift_frame(&m).unwrap();
        assert!((y - x).amax().min((y + x).amax()) < 1e-10);
    }

    #[test]
    fn contact_sections() {
        let p = [0.5, -0.5, 0.5, 0.5];
        let (e1, e2) = contact_frame(&p);
        assert_eq!(contact_eval(&p, &e1).unwrap(), 0.0);
        assert_eq!(contact_eval(&p, &e2).unwrap(), 0.0);
        assert_eq!(contact_eval(&p, &[-p[2], -p[3], p[0], p[1]]).unwrap(), 1.0);
        assert!(contact_eval(&p, &p).is_err());
    }
}
