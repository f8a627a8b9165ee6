//! Jacobi elliptic functions and elliptic integrals, parameter convention `m`.
//!
//! `K` uses the arithmetic-geometric mean, the amplitude uses the descending
//! Landen (AGM) recursion, and the incomplete third-kind integral is evaluated
//! by adaptive quadrature of its defining integral.

use crate::error::{Error, Result};
use crate::jet::{Jet, ORDER};
use crate::quad;
use std::f64::consts::{FRAC_PI_2, PI};

fn check_m(m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!("parameter m = {m} outside [0, 1)")));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind `K(m)`.
pub fn ellip_k(m: f64) -> Result<f64> {
    check_m(m)?;
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(FRAC_PI_2 / a)
}

/// Jacobi amplitude `am(u, m)`.
pub fn jacobi_am(u: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if m == 0.0 {
        return Ok(u);
    }
    let mut a = [0.0f64; 32];
    let mut c = [0.0f64; 32];
    a[0] = 1.0;
    let mut b = (1.0 - m).sqrt();
    c[0] = m.sqrt();
    let mut n = 0;
    while n < 30 {
        if c[n].abs() <= 1e-17 * a[n] {
            break;
        }
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    Ok(phi)
}

/// `(sn, cn, dn)` at `(u, m)`.
pub fn jacobi_sncndn(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    let phi = jacobi_am(u, m)?;
    let (s, c) = phi.sin_cos();
    let d = (1.0 - m * s * s).sqrt();
    Ok((s, c, d))
}

pub fn jacobi_sn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_sncndn(u, m)?.0)
}

pub fn jacobi_cn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_sncndn(u, m)?.1)
}

pub fn jacobi_dn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_sncndn(u, m)?.2)
}

/// `sd = sn / dn`.
pub fn jacobi_sd(u: f64, m: f64) -> Result<f64> {
    let (s, _, d) = jacobi_sncndn(u, m)?;
    Ok(s / d)
}

/// `nd = 1 / dn`.
pub fn jacobi_nd(u: f64, m: f64) -> Result<f64> {
    Ok(1.0 / jacobi_dn(u, m)?)
}

/// `(sn, cn, dn)` composed with a jet argument, from the Taylor recursion of
/// `sn' = cn dn`, `cn' = -sn dn`, `dn' = -m sn cn`.
pub fn jacobi_sncndn_jet(x: &Jet, m: f64) -> Result<(Jet, Jet, Jet)> {
    let (s0, c0, d0) = jacobi_sncndn(x.value(), m)?;
    let (mut s, mut c, mut d) = (Jet::constant(s0), Jet::constant(c0), Jet::constant(d0));
    for n in 1..=ORDER {
        let (cd, sd, sc) = (c * d, s * d, s * c);
        let (mut a, mut b, mut e) = (0.0, 0.0, 0.0);
        for k in 1..=n {
            let w = k as f64 * x.c[k];
            a += w * cd.c[n - k];
            b += w * sd.c[n - k];
            e += w * sc.c[n - k];
        }
        s.c[n] = a / n as f64;
        c.c[n] = -b / n as f64;
        d.c[n] = -m * e / n as f64;
    }
    Ok((s, c, d))
}

/// Incomplete elliptic integral of the first kind `F(phi | m)`.
pub fn ellip_f(phi: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    let k = ellip_k(m)?;
    // F(phi + j pi) = F(phi) + 2 j K
    let j = (phi / PI).round();
    let r = phi - j * PI;
    let v = quad::integrate(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, r, 1e-14);
    Ok(v + 2.0 * j * k)
}

/// Incomplete elliptic integral of the third kind
/// `Pi(x, phi, m) = int_0^phi dθ / (sqrt(1 - m sin²θ) (1 - x sin²θ))`.
///
/// Fails when the integrand has a pole on the path.
pub fn ellip_pi(x: f64, phi: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if x >= 1.0 {
        let th = (1.0 / x).sqrt().asin();
        if phi.abs() >= th - 1e-12 {
            return Err(Error::Domain(format!("pole of Pi at theta = {th} on the path to {phi}")));
        }
    }
    let f = |t: f64| {
        let s2 = t.sin().powi(2);
        1.0 / ((1.0 - m * s2).sqrt() * (1.0 - x * s2))
    };
    // pieces between multiples of pi/2 keep the integrand monotone
    let sign = phi.signum();
    let a = phi.abs();
    let n = (a / FRAC_PI_2).floor() as usize;
    let quarter = if n > 0 { quad::integrate(f, 0.0, FRAC_PI_2, 1e-14) } else { 0.0 };
    let total = n as f64 * quarter + quad::integrate(f, n as f64 * FRAC_PI_2, a, 1e-14);
    Ok(sign * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matches_derivatives() {
        let m = 0.6;
        let (s, c, d) = jacobi_sncndn_jet(&Jet::variable(0.4), m).unwrap();
        let (s0, c0, d0) = jacobi_sncndn(0.4, m).unwrap();
        assert!((s.derivative(1) - c0 * d0).abs() < 1e-14);
        assert!((c.derivative(1) + s0 * d0).abs() < 1e-14);
        // dn'' = -m (sn cn)' = -m (cn² - sn²) dn
        let want = -m * (c0 * c0 * d0 - s0 * s0 * d0);
        assert!((d.derivative(2) - want).abs() < 1e-13);
        let h = 1e-3;
        let fd = (jacobi_sn(0.4 + h, m).unwrap() - 2.0 * s0 + jacobi_sn(0.4 - h, m).unwrap()) / (h * h);
        assert!((s.derivative(2) - fd).abs() < 1e-5);
    }

    #[test]
    fn k_at_zero() {
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn am_trivial_cases() {
        assert_eq!(jacobi_am(0.7, 0.0).unwrap(), 0.7);
        assert!(jacobi_am(0.0, 0.4).unwrap().abs() < 1e-16);
        assert!((jacobi_nd(0.0, 0.3).unwrap() - 1.0).abs() < 1e-16);
    }

    #[test]
    fn am_inverts_f() {
        for &(u, m) in &[(0.3, 0.5), (2.0, 0.9), (-1.7, 0.2), (7.5, 0.99)] {
            let phi = jacobi_am(u, m).unwrap();
            assert!((ellip_f(phi, m).unwrap() - u).abs() < 1e-12, "{u} {m}");
        }
    }

    #[test]
    fn pi_rejects_pole() {
        assert!(ellip_pi(4.0, 1.0, 0.3).is_err());
    }
}
