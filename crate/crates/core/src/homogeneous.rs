//! Timelike curves with constant conformal curvatures: strata, closed-form
//! parametrizations, the curvature maps and chamber containment.

use crate::curves::{Domain, TimelikeCurve};
use crate::error::{Error, Result};
use crate::geometry::{chamber, BasisKind, DsSide, Side, POINCARE_DIAG};
use crate::jet::{d5, diag_product, values5, Jet, Jet5};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

/// Tolerance for membership in the equality strata.
pub const STRATUM_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HomogeneousClass {
    C1,
    C2i,
    C2ii,
    C3,
    C4,
    C5,
    C6,
    C7i,
    C7ii,
    C8,
    C9,
}

pub const ALL_CLASSES: [HomogeneousClass; 11] = [
    HomogeneousClass::C1,
    HomogeneousClass::C2i,
    HomogeneousClass::C2ii,
    HomogeneousClass::C3,
    HomogeneousClass::C4,
    HomogeneousClass::C5,
    HomogeneousClass::C6,
    HomogeneousClass::C7i,
    HomogeneousClass::C7ii,
    HomogeneousClass::C8,
    HomogeneousClass::C9,
];

impl HomogeneousClass {
    pub fn is_regular(self) -> bool {
        use HomogeneousClass::*;
        matches!(self, C1 | C2i | C2ii | C3 | C4)
    }

    /// Whether the parametrization uses the parameter `a`.
    pub fn uses_a(self) -> bool {
        self.is_regular()
    }

    /// Whether the parametrization uses the parameter `b`.
    pub fn uses_b(self) -> bool {
        self != HomogeneousClass::C9
    }
}

impl fmt::Display for HomogeneousClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for HomogeneousClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_CLASSES
            .iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Usage(format!("unknown class {s}")))
    }
}

/// Exact rational number `num/den` with `den > 0` and coprime terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Usage("zero denominator".into()));
        }
        let g = num_integer::gcd(num, den);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Rational { num: s * num / g, den: s * den / g })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("expected an integer or m/n, got {s}"));
        match s.split_once('/') {
            Some((a, b)) => Rational::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Rational::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Parameters of a homogeneous curve. `b_exact` keeps a rational `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HomogeneousParams {
    pub a: f64,
    pub b: f64,
    pub b_exact: Option<Rational>,
}

impl HomogeneousParams {
    pub fn new(a: f64, b: f64) -> Self {
        HomogeneousParams { a, b, b_exact: None }
    }

    pub fn with_rational(a: f64, b: Rational) -> Self {
        HomogeneousParams { a, b: b.value(), b_exact: Some(b) }
    }
}

/// Membership of `(a, b)` in the parameter domain of a class.
pub fn in_domain(class: HomogeneousClass, a: f64, b: f64) -> bool {
    use HomogeneousClass::*;
    match class {
        C1 => a > -1.0 && a < 1.0 && b > 0.0 && (1.0 + b + a * (b - 1.0)) * (b - 1.0 + a * (1.0 + b)) < 0.0,
        C2i => a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0,
        C2ii => a > 0.0 && a < 1.0 && b > 1.0 && (1.0 - a * a) * b * b < 1.0,
        C3 => a > 0.25 && b > 1.0 && 4.0 * a * (b * b - 1.0) - (b * b + 1.0) > 0.0,
        C4 => a > 0.0 && a < 1.0 && b > 0.0 && a * a + (a * a - 1.0) * b * b > 0.0,
        C5 | C7i | C7ii => b > 1.0,
        C6 | C8 => b > 0.0 && b < 1.0,
        C9 => true,
    }
}

fn check_domain(class: HomogeneousClass, p: &HomogeneousParams) -> Result<()> {
    if !in_domain(class, p.a, p.b) {
        return Err(Error::Domain(format!("(a, b) = ({}, {}) outside the domain of {class}", p.a, p.b)));
    }
    Ok(())
}

/// Stratum of `(k, h)` with `k > 0`.
pub fn classify(k: f64, h: f64) -> Result<HomogeneousClass> {
    use HomogeneousClass::*;
    if k < 0.0 {
        return Err(Error::Usage("k must be non-negative; flip the orientation first".into()));
    }
    if k == 0.0 {
        return Err(Error::Domain("k = 0: the curve lies in an adS-wall".into()));
    }
    let tol = STRATUM_TOL;
    let s = k * k - 2.0 * h;
    let wall = -1.0 / (2.0 * k * k);
    if (k - 1.0).abs() < tol && (h + 0.5).abs() < tol {
        return Ok(C9);
    }
    if (h - wall).abs() < tol {
        return Ok(if k > 1.0 { C5 } else { C6 });
    }
    if (s + 2.0).abs() < tol {
        return Ok(C7i);
    }
    if (s - 2.0).abs() < tol {
        return Ok(if k > 1.0 { C7ii } else { C8 });
    }
    Ok(if s > -2.0 && s < 2.0 {
        C1
    } else if s < -2.0 {
        C2i
    } else if h < wall {
        C4
    } else if k > 1.0 {
        C2ii
    } else {
        C3
    })
}

/// Orientation normalization: returns `(|k|, h)` and whether a flip was applied.
pub fn normalize_orientation(k: f64, h: f64) -> (f64, f64, bool) {
    (k.abs(), h, k < 0.0)
}

/// Curvatures of the regular classes from the closed-form expressions.
/// Exceptional classes are evaluated through [`reduction_curvatures`].
pub fn curvatures_from_params(class: HomogeneousClass, p: &HomogeneousParams) -> Result<(f64, f64)> {
    use HomogeneousClass::*;
    check_domain(class, p)?;
    let (a, b) = (p.a, p.b);
    Ok(match class {
        C1 => {
            let k = ((1.0 + b * b) * (1.0 - a * a) / (2.0 * b * (1.0 + a * a))).sqrt();
            let b2 = b * b;
            let b4 = b2 * b2;
            let h = (1.0 - 6.0 * b2 + b4 + 8.0 * a * b * (b2 - 1.0) - a * a * (b4 - 6.0 * b2 + 1.0))
                / (4.0 * b * (1.0 + a * a) * (1.0 + b2));
            (k, h)
        }
        C2i => {
            let q = (1.0 - a * a).sqrt();
            let k = a * b.sqrt() / ((1.0 - b * b).powi(2) * (1.0 - a * a)).powf(0.25);
            let h = (1.0 - b.powi(4) * (1.0 - a * a)) / (2.0 * b * (1.0 - b * b) * q);
            (k, h)
        }
        C2ii => {
            let q = (1.0 - a * a).sqrt();
            let k = a * b.sqrt() / ((b * b - 1.0).powi(2) * (1.0 - a * a)).powf(0.25);
            let h = (1.0 - b.powi(4) * (1.0 - a * a)) / (2.0 * b * (b * b - 1.0) * q);
            (k, h)
        }
        C3 => {
            let r = (16.0 * a * a - 1.0).sqrt();
            let k = (2.0 * b).sqrt() / ((b * b - 1.0).powi(2) * (16.0 * a * a - 1.0)).powf(0.25);
            let h = (4.0 * a + 1.0 - (4.0 * a - 1.0) * b.powi(4)) / (2.0 * b * (b * b - 1.0) * r);
            (k, h)
        }
        C4 => {
            let k = b.sqrt() / (a * a * (1.0 - a * a) * (1.0 + b * b).powi(2)).powf(0.25);
            let h = (a * a * (b.powi(4) - 1.0) - b.powi(4)) / (2.0 * a * b * (1.0 - a * a).sqrt() * (1.0 + b * b));
            (k, h)
        }
        _ => {
            let c = parametrize(class, p)?;
            let r = reduction_curvatures(&c, 0.0)?;
            (r.k, r.h)
        }
    })
}

/// Result of the orbit reduction for a homogeneous curve.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Reduction {
    pub k: f64,
    pub h: f64,
    /// `R c`, the strain density in the given parameter.
    pub strain_density: f64,
    /// Residual of `<M2, M1> = 0` for the frame built in the reduction.
    pub frame_residual: f64,
}

fn comb(terms: &[(Jet, &Jet5)]) -> Jet5 {
    let mut out = [Jet::zero(); 5];
    for (s, v) in terms {
        for i in 0..5 {
            out[i] += *s * v[i];
        }
    }
    out
}

/// Curvatures of a homogeneous curve from its constant scalar products,
/// independently of the jet-based canonical frame. Returns `|k|`.
pub fn reduction_curvatures(curve: &TimelikeCurve, t: f64) -> Result<Reduction> {
    let ip = |a: &Jet5, b: &Jet5| diag_product(a, b, &POINCARE_DIAG);
    let g = curve.lift(&Jet::variable(t));
    let g1 = d5(&g);
    let g2 = d5(&g1);
    let c2 = -ip(&g1, &g1);
    if c2.value() <= 0.0 {
        return Err(Error::Degenerate("tangent not timelike".into()));
    }
    let c = c2.sqrt();
    let n22 = ip(&g2, &g2);
    let c4 = c2 * c2;
    // Gamma4 = -g''/c^2 + <g'',g''> g / (2 c^4)
    let gam4 = comb(&[(-c2.recip(), &g2), (n22 / c4.scale(2.0), &g)]);
    let gam4d = d5(&gam4);
    let vv = ip(&g1, &g1);
    let r4 = ip(&gam4d, &gam4d) / c2 + ip(&gam4d, &g1) * n22 / (c4 * c2) + n22 * n22 * vv / (c4 * c4 * c2).scale(4.0);
    if r4.value() <= 0.0 {
        return Err(Error::NotGeneric(t));
    }
    let r = r4.powf(0.25);
    let r2 = r * r;
    // M2 = Gamma4'/(R^2 c) + <g'',g''> g' / (2 c^5 R^2)
    let m1 = comb(&[(c.recip(), &g1)]);
    let m2 = comb(&[((r2 * c).recip(), &gam4d), (n22 / (c4 * c * r2).scale(2.0), &g1)]);
    let m2d = d5(&m2);
    let rc = r * c;
    let w = comb(&[(Jet::constant(1.0), &m2d), (-(r2 * c), &g)]);
    let wv = values5(&w);
    let ww = crate::geometry::pdot(&wv, &wv);
    let k = ww.max(0.0).sqrt() / rc.value();
    let h = -n22.value() / (2.0 * c4.value() * r2.value());
    let frame_residual = crate::geometry::pdot(&values5(&m2), &values5(&m1)).abs();
    Ok(Reduction { k, h, strain_density: rc.value(), frame_residual })
}

fn lie(v: [Jet; 5]) -> [Jet; 5] {
    v
}

/// Closed-form homogeneous curve of a class.
pub fn parametrize(class: HomogeneousClass, p: &HomogeneousParams) -> Result<TimelikeCurve> {
    use HomogeneousClass::*;
    check_domain(class, p)?;
    let (a, b) = (p.a, p.b);
    // the lift grows like e^{±bt}; a short window keeps the jets well conditioned
    let default = Domain::Interval { start: -1.0, end: 1.0 };
    let curve = match class {
        C1 => {
            let s = -(2.0 * (1.0 - a * a)).sqrt();
            // centred where e^{±bt} balance, narrowing as b grows
            let w = (2.0 / b).min(1.0);
            let window = Domain::Interval { start: FRAC_PI_4 - w, end: FRAC_PI_4 + w };
            TimelikeCurve::in_basis(BasisKind::Lie, window, move |t: &Jet| {
                let (sn, cs) = t.sin_cos();
                let ep = ((*t - FRAC_PI_4) * b).exp();
                let em = ((*t - FRAC_PI_4) * (-b)).exp();
                lie([
                    ep * (cs + sn * a),
                    -(em * (sn + cs * a)),
                    Jet::constant(s),
                    ep * (cs * a - sn),
                    em * (cs - sn * a),
                ])
            })
        }
        C2i | C2ii => {
            let domain = match p.b_exact {
                Some(r) => Domain::Periodic { start: 0.0, period: 2.0 * PI * r.den as f64 },
                None => default,
            };
            let q = (1.0 - a * a).sqrt();
            let (sa, sb) = if class == C2i { (a, -1.0) } else { (-a, 1.0) };
            TimelikeCurve::in_basis(BasisKind::Poincare, domain, move |t: &Jet| {
                let (sn, cs) = t.sin_cos();
                let (sb_, cb) = (*t * b).sin_cos();
                [cs, sn, Jet::constant(sa), cb * q, sb_ * (q * sb)]
            })
        }
        // the Lie basis is taken with the orientation that makes k positive
        C3 => TimelikeCurve::in_basis(BasisKind::Lie, default, move |t: &Jet| {
            [
                t.exp() * ((1.0 + 4.0 * a) / 4.0),
                (*t * (-b)).exp(),
                Jet::constant(-1.0),
                (*t * b).exp() * ((1.0 - 4.0 * a) / 4.0),
                (-*t).exp(),
            ]
        }),
        C4 => {
            let q = (1.0 - a * a).sqrt();
            TimelikeCurve::in_basis(BasisKind::Poincare, default, move |t: &Jet| {
                let (sh, ch) = t.sinh_cosh();
                let (sn, cs) = (*t * b).sin_cos();
                [Jet::constant(1.0), sh * a, ch * (-a), cs * q, sn * q]
            })
        }
        C5 => TimelikeCurve::in_basis(BasisKind::Mobius, default, move |t: &Jet| {
            let (sn, cs) = t.sin_cos();
            [(1.0 - *t * *t * (b * b)) * 0.5, *t * b, cs, -sn, Jet::constant(1.0)]
        }),
        C6 => TimelikeCurve::in_basis(BasisKind::Mobius, default, move |t: &Jet| {
            let (sh, ch) = t.sinh_cosh();
            [(1.0 + *t * *t * (b * b)) * 0.5, sh, ch, *t * b, Jet::constant(1.0)]
        }),
        C7i => TimelikeCurve::in_basis(BasisKind::Lie, default, move |t: &Jet| {
            let (sn, cs) = t.sin_cos();
            let x0 = (cs * (b * b - 1.0) - *t * sn) / b;
            let x1 = (*t * cs + sn * (b * b - 1.0)) / b;
            [x0, -x1, Jet::constant((2.0 * (b * b - 1.0) / b).sqrt()), -sn, cs]
        }),
        C7ii => TimelikeCurve::in_basis(BasisKind::Lie, default, move |t: &Jet| {
            let (sn, cs) = t.sin_cos();
            let x0 = cs * (1.0 + b * b) + *t * sn;
            let x3 = *t * cs - sn * (1.0 + b * b);
            [x0, sn * (-b), Jet::constant(-(2.0 * b * (1.0 + b * b)).sqrt()), x3, cs * b]
        }),
        C8 => TimelikeCurve::in_basis(BasisKind::Lie, default, move |t: &Jet| {
            let e = t.exp();
            let em = (-*t).exp();
            let r = (1.0 - b).sqrt();
            [
                (b - *t) * e,
                e * (-r),
                Jet::constant(2.0 * (b * b * (1.0 - b)).powf(0.25)),
                -((b + *t) * em),
                em * r,
            ]
        }),
        C9 => TimelikeCurve::in_basis(BasisKind::Lie, default, |t: &Jet| {
            let t2 = *t * *t;
            [
                (t2 * t2 + t2 * 6.0 - 3.0) / 24.0,
                *t * (t2 + 3.0) / 6.0,
                (t2 + 1.0) * 0.5,
                *t,
                Jet::constant(-1.0),
            ]
        }),
    };
    let mut curve = curve;
    if class == C6 {
        curve.warnings.push("C6 parametrization: the coefficient of M4 is reconstructed from the null condition".into());
    }
    Ok(curve)
}

/// Inverts the curvature map of a class.
pub fn params_from_curvatures(class: HomogeneousClass, k: f64, h: f64) -> Result<HomogeneousParams> {
    if classify(k, h)? != class {
        return Err(Error::Domain(format!("(k, h) = ({k}, {h}) is not in {class}")));
    }
    if class == HomogeneousClass::C9 {
        return Ok(HomogeneousParams::new(0.0, 0.0));
    }
    if class.is_regular() {
        invert_regular(class, k, h)
    } else {
        invert_exceptional(class, k)
    }
}

fn curv_map(class: HomogeneousClass, a: f64, b: f64) -> Option<(f64, f64)> {
    if !in_domain(class, a, b) {
        return None;
    }
    curvatures_from_params(class, &HomogeneousParams::new(a, b)).ok()
}

fn seeds(class: HomogeneousClass) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let n = 24;
    for i in 1..n {
        for j in 1..n {
            let s = i as f64 / n as f64;
            let r = j as f64 / n as f64;
            let (a, b) = match class {
                HomogeneousClass::C1 => (2.0 * s - 1.0, 10f64.powf(3.0 * r - 1.5)),
                HomogeneousClass::C2i => (s, r),
                HomogeneousClass::C2ii => (s, 1.0 + 10f64.powf(3.0 * r - 2.5)),
                HomogeneousClass::C3 => (0.25 + 10f64.powf(3.0 * s - 2.0), 1.0 + 10f64.powf(3.0 * r - 2.0)),
                HomogeneousClass::C4 => (s, 10f64.powf(3.0 * r - 1.5)),
                _ => unreachable!(),
            };
            if in_domain(class, a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

fn invert_regular(class: HomogeneousClass, k: f64, h: f64) -> Result<HomogeneousParams> {
    let resid = |a: f64, b: f64| curv_map(class, a, b).map(|(kk, hh)| (kk - k, hh - h));
    let norm = |r: (f64, f64)| r.0.hypot(r.1);
    let mut starts: Vec<(f64, f64, f64)> = seeds(class)
        .into_iter()
        .filter_map(|(a, b)| resid(a, b).map(|r| (a, b, norm(r))))
        .collect();
    starts.sort_by(|x, y| x.2.partial_cmp(&y.2).unwrap());
    let mut best = (f64::NAN, f64::NAN, f64::INFINITY);
    for &(a0, b0, _) in starts.iter().take(8) {
        let (mut a, mut b) = (a0, b0);
        let mut r = resid(a, b).unwrap();
        for _ in 0..100 {
            if norm(r) < 1e-14 {
                break;
            }
            let ea = 1e-7 * (1.0 + a.abs());
            let eb = 1e-7 * (1.0 + b.abs());
            let (ra, rb) = match (resid(a + ea, b), resid(a, b + eb)) {
                (Some(x), Some(y)) => (x, y),
                _ => match (resid(a - ea, b), resid(a, b - eb)) {
                    (Some(x), Some(y)) => ((r.0 * 2.0 - x.0, r.1 * 2.0 - x.1), (r.0 * 2.0 - y.0, r.1 * 2.0 - y.1)),
                    _ => break,
                },
            };
            let j = [[(ra.0 - r.0) / ea, (rb.0 - r.0) / eb], [(ra.1 - r.1) / ea, (rb.1 - r.1) / eb]];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det.abs() < 1e-300 {
                break;
            }
            let da = -(j[1][1] * r.0 - j[0][1] * r.1) / det;
            let db = -(-j[1][0] * r.0 + j[0][0] * r.1) / det;
            let mut lam = 1.0;
            let mut moved = false;
            while lam > 1e-10 {
                if let Some(rn) = resid(a + lam * da, b + lam * db) {
                    if norm(rn) < norm(r) {
                        a += lam * da;
                        b += lam * db;
                        r = rn;
                        moved = true;
                        break;
                    }
                }
                lam *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if norm(r) < best.2 {
            best = (a, b, norm(r));
        }
        if best.2 < 1e-12 {
            break;
        }
    }
    if best.2 > 1e-10 {
        return Err(Error::Numeric(format!("curvature inversion for {class} stalled at residual {:e}", best.2)));
    }
    Ok(HomogeneousParams::new(best.0, best.1))
}

fn invert_exceptional(class: HomogeneousClass, k: f64) -> Result<HomogeneousParams> {
    use HomogeneousClass::*;
    let kb = |b: f64| curvatures_from_params(class, &HomogeneousParams::new(0.0, b)).map(|x| x.0 - k);
    let grid: Vec<f64> = match class {
        C5 | C7i | C7ii => (1..400).map(|i| 1.0 + 10f64.powf(-4.0 + 7.0 * i as f64 / 400.0)).collect(),
        C6 | C8 => (1..400).map(|i| i as f64 / 400.0).collect(),
        _ => unreachable!(),
    };
    let mut prev: Option<(f64, f64)> = None;
    for &b in &grid {
        let v = kb(b)?;
        if let Some((pb, pv)) = prev {
            if pv * v <= 0.0 {
                let (mut lo, mut hi, mut flo) = (pb, b, pv);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = kb(mid)?;
                    if fm * flo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                    if hi - lo < 1e-15 * hi {
                        break;
                    }
                }
                return Ok(HomogeneousParams::new(0.0, 0.5 * (lo + hi)));
            }
        }
        prev = Some((b, v));
    }
    Err(Error::Numeric(format!("no parameter of {class} has k = {k}")))
}

/// Whether a sampled trajectory stays inside one open chamber of each family.
#[derive(Clone, Debug, Serialize)]
pub struct TrappedReport {
    pub ads: Option<Side>,
    pub minkowski: Option<Side>,
    pub de_sitter: Option<DsSide>,
    pub samples: usize,
}

fn common<T: PartialEq + Copy>(xs: &[T], open: &[T]) -> Option<T> {
    let first = *xs.first()?;
    if open.contains(&first) && xs.iter().all(|x| *x == first) {
        Some(first)
    } else {
        None
    }
}

/// Chamber containment of the samples of a curve over `[t0, t1]`.
pub fn trapped_report(curve: &TimelikeCurve, t0: f64, t1: f64, n: usize) -> TrappedReport {
    let reps: Vec<_> = (0..n).map(|i| chamber(&curve.point(t0 + (t1 - t0) * i as f64 / (n - 1) as f64))).collect();
    let ads: Vec<Side> = reps.iter().map(|r| r.ads).collect();
    let mk: Vec<Side> = reps.iter().map(|r| r.minkowski).collect();
    let ds: Vec<DsSide> = reps.iter().map(|r| r.de_sitter).collect();
    TrappedReport {
        ads: common(&ads, &[Side::Positive, Side::Negative]),
        minkowski: common(&mk, &[Side::Positive, Side::Negative]),
        de_sitter: common(&ds, &[DsSide::Positive, DsSide::Negative]),
        samples: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strata_examples() {
        assert_eq!(classify(1.0, -0.5).unwrap(), HomogeneousClass::C9);
        assert_eq!(classify(1.0, 0.5).unwrap(), HomogeneousClass::C1);
        assert_eq!(classify(2.0, 0.5).unwrap(), HomogeneousClass::C2ii);
        assert!(classify(-1.0, 0.0).is_err());
    }

    #[test]
    fn rational_parsing() {
        let r: Rational = "4/6".parse().unwrap();
        assert_eq!((r.num, r.den), (2, 3));
        assert!("x/2".parse::<Rational>().is_err());
    }
}
