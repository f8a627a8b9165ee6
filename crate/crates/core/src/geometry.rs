//! Linear algebra of R^{2,3}, basis conventions, the Einstein-universe point
//! model, chambers, conformal embeddings and the toroidal projection.
//!
//! Internally every point lives in Poincare coordinates, where the model
//! constraints are `x0^2 + x1^2 = 1` and `x2^2 + x3^2 + x4^2 = 1`.

use crate::error::{Error, Result};
use nalgebra::{Matrix5, Vector3, Vector5};
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

/// Default wall tolerance for chamber classification.
pub const WALL_TOL: f64 = 1e-9;
/// Relative null-cone tolerance for ray inputs.
pub const NULL_TOL: f64 = 1e-9;

/// The three standard bases of R^{2,3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Mobius,
    Poincare,
    Lie,
}

impl BasisKind {
    /// Gram matrix of the basis.
    pub fn gram(self) -> Matrix5<f64> {
        let mut g = Matrix5::zeros();
        match self {
            BasisKind::Mobius => {
                g[(0, 4)] = -1.0;
                g[(4, 0)] = -1.0;
                g[(1, 1)] = -1.0;
                g[(2, 2)] = 1.0;
                g[(3, 3)] = 1.0;
            }
            BasisKind::Poincare => {
                g[(0, 0)] = -1.0;
                g[(1, 1)] = -1.0;
                g[(2, 2)] = 1.0;
                g[(3, 3)] = 1.0;
                g[(4, 4)] = 1.0;
            }
            BasisKind::Lie => {
                g[(0, 4)] = -1.0;
                g[(4, 0)] = -1.0;
                g[(1, 3)] = -1.0;
                g[(3, 1)] = -1.0;
                g[(2, 2)] = 1.0;
            }
        }
        g
    }

    /// Matrix `T` with `B_self = M° T`, i.e. the transition from the Mobius basis.
    fn from_mobius(self) -> Matrix5<f64> {
        match self {
            BasisKind::Mobius => Matrix5::identity(),
            BasisKind::Poincare => t_mp(),
            BasisKind::Lie => t_ml(),
        }
    }
}

/// Möbius Gram matrix `m`.
pub fn mgram() -> Matrix5<f64> {
    BasisKind::Mobius.gram()
}

/// Diagonal of the Poincaré Gram matrix.
pub const POINCARE_DIAG: [f64; 5] = [-1.0, -1.0, 1.0, 1.0, 1.0];

/// Möbius to Poincaré transition `P° = M° T_mp`.
pub fn t_mp() -> Matrix5<f64> {
    let s = FRAC_1_SQRT_2;
    let mut t = Matrix5::zeros();
    t[(0, 0)] = s;
    t[(4, 0)] = s;
    t[(1, 1)] = 1.0;
    t[(2, 2)] = 1.0;
    t[(3, 3)] = 1.0;
    t[(4, 4)] = s;
    t[(0, 4)] = -s;
    t
}

/// Möbius to Lie transition `L° = M° T_ml`.
pub fn t_ml() -> Matrix5<f64> {
    let s = FRAC_1_SQRT_2;
    let mut t = Matrix5::zeros();
    t[(0, 0)] = 1.0;
    t[(1, 1)] = -s;
    t[(1, 3)] = -s;
    t[(2, 2)] = 1.0;
    t[(3, 1)] = s;
    t[(3, 3)] = -s;
    t[(4, 4)] = 1.0;
    t
}

/// Transition matrix `T` with `B_to = B_from T`. Components transform as
/// `x_from = T x_to`.
pub fn basis_transition(from: BasisKind, to: BasisKind) -> Matrix5<f64> {
    if from == to {
        return Matrix5::identity();
    }
    let inv = from.from_mobius().try_inverse().expect("standard transitions are invertible");
    inv * to.from_mobius()
}

/// Converts a component array between bases.
pub fn convert(x: &[f64; 5], from: BasisKind, to: BasisKind) -> [f64; 5] {
    if from == to {
        return *x;
    }
    let t = basis_transition(to, from);
    let v = t * Vector5::from_column_slice(x);
    [v[0], v[1], v[2], v[3], v[4]]
}

/// A vector of R^{2,3} with components in a declared basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Vec5 {
    pub c: [f64; 5],
    pub basis: BasisKind,
}

impl Vec5 {
    pub fn new(c: [f64; 5], basis: BasisKind) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite component".into()));
        }
        Ok(Vec5 { c, basis })
    }

    pub fn poincare(c: [f64; 5]) -> Self {
        Vec5 { c, basis: BasisKind::Poincare }
    }

    pub fn to_basis(&self, to: BasisKind) -> Vec5 {
        Vec5 { c: convert(&self.c, self.basis, to), basis: to }
    }
}

/// Scalar product of two vectors expressed in `basis`.
pub fn product(u: &Vec5, v: &Vec5, basis: BasisKind) -> Result<f64> {
    if u.basis != basis || v.basis != basis {
        return Err(Error::Usage(format!(
            "vectors in {:?}/{:?} paired with {:?} Gram matrix",
            u.basis, v.basis, basis
        )));
    }
    Ok(gram_product(&u.c, &v.c, &basis.gram()))
}

/// `u^T G v`.
pub fn gram_product(u: &[f64; 5], v: &[f64; 5], g: &Matrix5<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            s += u[i] * g[(i, j)] * v[j];
        }
    }
    s
}

/// Poincaré-coordinate product.
pub fn pdot(u: &[f64; 5], v: &[f64; 5]) -> f64 {
    -u[0] * v[0] - u[1] * v[1] + u[2] * v[2] + u[3] * v[3] + u[4] * v[4]
}

/// Point of the Einstein universe on the section `S^1 x S^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EinsteinPoint {
    pub x: [f64; 5],
}

impl EinsteinPoint {
    /// Validates both unit constraints to `1e-12`.
    pub fn new(x: [f64; 5]) -> Result<Self> {
        let t = x[0] * x[0] + x[1] * x[1];
        let s = x[2] * x[2] + x[3] * x[3] + x[4] * x[4];
        if (t - 1.0).abs() > 1e-12 || (s - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("not on S1 x S2: |eta|^2 = {t}, |beta|^2 = {s}")));
        }
        Ok(EinsteinPoint { x })
    }

    pub fn time(&self) -> [f64; 2] {
        [self.x[0], self.x[1]]
    }

    pub fn space(&self) -> [f64; 3] {
        [self.x[2], self.x[3], self.x[4]]
    }
}

/// Positive multiple of a null vector lying on `S^1 x S^2`.
pub fn ray_normalize(v: &Vec5) -> Result<EinsteinPoint> {
    let y = v.to_basis(BasisKind::Poincare).c;
    let e2: f64 = y.iter().map(|a| a * a).sum();
    if e2 == 0.0 {
        return Err(Error::Domain("zero vector".into()));
    }
    if pdot(&y, &y).abs() / e2 > NULL_TOL {
        return Err(Error::Domain("vector is not null".into()));
    }
    let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
    if r < 1e-300 {
        return Err(Error::Degenerate("zero time component".into()));
    }
    let mut x = [0.0; 5];
    for i in 0..2 {
        x[i] = y[i] / r;
    }
    let s = (y[2] * y[2] + y[3] * y[3] + y[4] * y[4]).sqrt();
    for i in 2..5 {
        x[i] = y[i] / s;
    }
    Ok(EinsteinPoint { x })
}

/// Tri-state side of a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Positive,
    Wall,
    Negative,
}

/// de Sitter side; the wall splits into the two points-sets `x1 = +1` and `x1 = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DsSide {
    Positive,
    WallPlus,
    WallMinus,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberReport {
    pub ads: Side,
    pub minkowski: Side,
    pub de_sitter: DsSide,
}

fn side(v: f64, tol: f64) -> Side {
    if v > tol {
        Side::Positive
    } else if v < -tol {
        Side::Negative
    } else {
        Side::Wall
    }
}

/// Chamber membership with the default wall tolerance.
pub fn chamber(p: &EinsteinPoint) -> ChamberReport {
    chamber_tol(p, WALL_TOL)
}

pub fn chamber_tol(p: &EinsteinPoint, tol: f64) -> ChamberReport {
    let x = &p.x;
    // <X,P2> = x2 ; -<X,P0> - <X,P4> = x0 - x4
    let ads = side(x[2], tol);
    let minkowski = side(x[0] - x[4], tol);
    let de_sitter = if x[0] > tol {
        DsSide::Positive
    } else if x[0] < -tol {
        DsSide::Negative
    } else if x[1] > 0.0 {
        DsSide::WallPlus
    } else {
        DsSide::WallMinus
    };
    ChamberReport { ads, minkowski, de_sitter }
}

/// The 2:1 branched covering onto the solid toroid.
pub fn toroidal_projection(p: &EinsteinPoint) -> Vector3<f64> {
    let x = &p.x;
    Vector3::new(x[0] * x[2] - x[1] * (x[3] + 2.0), x[1] * x[2] + x[0] * (x[3] + 2.0), x[4])
}

/// Distance of a point of R^3 from the core circle of radius 2.
pub fn toroid_distance(v: &Vector3<f64>) -> f64 {
    let r = (v[0] * v[0] + v[1] * v[1]).sqrt() - 2.0;
    (r * r + v[2] * v[2]).sqrt()
}

/// Conformal models embedded in the Einstein universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    AntiDeSitter,
    Minkowski,
    DeSitter,
}

/// Conformal embedding of a point of the given model.
///
/// * adS: `(x1, x2, y1, y2)` with `-x1^2 - x2^2 + y1^2 + y2^2 = -1`
/// * Minkowski: `(x1, x2, x3)` with the product `-x1^2 + x2^2 + x3^2`
/// * dS: `(w1, w2, w3, w4)` with `-w1^2 + w2^2 + w3^2 + w4^2 = 1`
pub fn embed(model: Model, c: &[f64]) -> Result<EinsteinPoint> {
    let need = if model == Model::Minkowski { 3 } else { 4 };
    if c.len() != need {
        return Err(Error::Usage(format!("{model:?} takes {need} coordinates")));
    }
    let v = match model {
        Model::AntiDeSitter => {
            let q = -c[0] * c[0] - c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
            if (q + 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!("off the adS quadric by {}", q + 1.0)));
            }
            let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
            Vec5::poincare([c[0] / r, c[1] / r, 1.0 / r, c[2] / r, c[3] / r])
        }
        Model::Minkowski => {
            let q = -c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            Vec5 { c: [1.0, c[0], c[1], c[2], 0.5 * q], basis: BasisKind::Mobius }
        }
        Model::DeSitter => {
            let q = -c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
            if (q - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!("off the dS quadric by {}", q - 1.0)));
            }
            let r = (1.0 + c[0] * c[0]).sqrt();
            Vec5::poincare([1.0 / r, c[0] / r, c[1] / r, c[2] / r, c[3] / r])
        }
    };
    ray_normalize(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_gram_entries() {
        let g = mgram();
        assert_eq!(g[(0, 4)], -1.0);
        assert_eq!(g[(1, 1)], -1.0);
        assert_eq!(g[(2, 2)], 1.0);
    }

    #[test]
    fn tmp_converts_gram() {
        let t = t_mp();
        let g = t.transpose() * mgram() * t;
        assert!((g - BasisKind::Poincare.gram()).norm() < 1e-15);
        let t = t_ml();
        let g = t.transpose() * mgram() * t;
        assert!((g - BasisKind::Lie.gram()).norm() < 1e-15);
    }

    #[test]
    fn torus_image_of_reference_point() {
        let p = EinsteinPoint::new([1.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let v = toroidal_projection(&p);
        assert!((v - Vector3::new(1.0, 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scaled_ray() {
        let p = ray_normalize(&Vec5::poincare([2.0, 0.0, 2.0, 0.0, 0.0])).unwrap();
        assert_eq!(p.x, [1.0, 0.0, 1.0, 0.0, 0.0]);
    }
}
