//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `c[n] = f^(n)(t0) / n!`
//! of a scalar function about a base point. Closed-form curves are evaluated on
//! jets, which yields exact derivatives up to [`ORDER`] without finite
//! differences.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Highest stored derivative order.
pub const ORDER: usize = 10;
const LEN: usize = ORDER + 1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function expanded about `t0`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = t0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn zero() -> Self {
        Jet { c: [0.0; LEN] }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// n-th derivative at the base point.
    pub fn derivative(&self, n: usize) -> f64 {
        let mut f = 1.0;
        for i in 2..=n {
            f *= i as f64;
        }
        self.c[n] * f
    }

    /// Jet of the derivative. The top coefficient is lost.
    pub fn d(&self) -> Self {
        let mut c = [0.0; LEN];
        for n in 0..ORDER {
            c[n] = (n + 1) as f64 * self.c[n + 1];
        }
        Jet { c }
    }

    /// Jet of the antiderivative vanishing at the base point.
    pub fn integral(&self) -> Self {
        let mut c = [0.0; LEN];
        for n in 1..LEN {
            c[n] = self.c[n - 1] / n as f64;
        }
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= s);
        Jet { c }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    pub fn exp(&self) -> Self {
        let mut e = [0.0; LEN];
        e[0] = self.c[0].exp();
        for n in 1..LEN {
            let mut s = 0.0;
            for k in 1..=n {
                s += k as f64 * self.c[k] * e[n - k];
            }
            e[n] = s / n as f64;
        }
        Jet { c: e }
    }

    pub fn ln(&self) -> Self {
        let a0 = self.c[0];
        let mut l = [0.0; LEN];
        l[0] = a0.ln();
        for n in 1..LEN {
            let mut s = 0.0;
            for k in 1..n {
                s += k as f64 * l[k] * self.c[n - k];
            }
            l[n] = (self.c[n] - s / n as f64) / a0;
        }
        Jet { c: l }
    }

    /// Returns `(sin, cos)` of the jet.
    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for n in 1..LEN {
            let (mut ss, mut cc) = (0.0, 0.0);
            for k in 1..=n {
                let w = k as f64 * self.c[k];
                ss += w * c[n - k];
                cc += w * s[n - k];
            }
            s[n] = ss / n as f64;
            c[n] = -cc / n as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Returns `(sinh, cosh)` of the jet.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for n in 1..LEN {
            let (mut ss, mut cc) = (0.0, 0.0);
            for k in 1..=n {
                let w = k as f64 * self.c[k];
                ss += w * c[n - k];
                cc += w * s[n - k];
            }
            s[n] = ss / n as f64;
            c[n] = cc / n as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    /// Real power; the base value must be positive unless `r` is a
    /// non-negative integer.
    pub fn powf(&self, r: f64) -> Self {
        let a0 = self.c[0];
        let mut p = [0.0; LEN];
        p[0] = a0.powf(r);
        for n in 1..LEN {
            let mut s = 0.0;
            for k in 1..=n {
                s += (r * k as f64 - (n - k) as f64) * self.c[k] * p[n - k];
            }
            p[n] = s / (n as f64 * a0);
        }
        Jet { c: p }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut r = Jet::constant(1.0);
        for _ in 0..n {
            r = r * *self;
        }
        r
    }

    /// Evaluates the Taylor polynomial stored in `self` (expanded about
    /// `inner.value()`) at the jet `inner`.
    pub fn compose(&self, inner: &Jet) -> Self {
        let mut delta = *inner;
        delta.c[0] = 0.0;
        let mut r = Jet::constant(self.c[ORDER]);
        for n in (0..ORDER).rev() {
            r = r * delta;
            r.c[0] += self.c[n];
        }
        r
    }

    /// Inverse series: if `self` is u(t) about t0 with u'(t0) != 0, returns
    /// t(u) about u(t0).
    pub fn revert(&self) -> Self {
        let a1 = self.c[1];
        let mut b = [0.0; LEN];
        b[1] = 1.0 / a1;
        // delta-form of self, without the constant term
        let mut u = *self;
        u.c[0] = 0.0;
        for n in 2..LEN {
            let mut tn = Jet { c: b };
            tn.c[0] = 0.0;
            // composition u(t(s)) with current truncation
            let mut acc = Jet::zero();
            let mut pw = tn;
            for k in 1..LEN {
                acc = acc + pw.scale(u.c[k]);
                pw = pw * tn;
            }
            b[n] = -acc.c[n] / a1;
        }
        b[0] = 0.0;
        let mut out = Jet { c: b };
        out.c[0] = 0.0;
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c.iter()) {
            *x += y;
        }
        Jet { c }
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        for (x, y) in self.c.iter_mut().zip(o.c.iter()) {
            *x += y;
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (x, y) in c.iter_mut().zip(o.c.iter()) {
            *x -= y;
        }
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for n in 0..LEN {
            let mut s = 0.0;
            for i in 0..=n {
                s += self.c[i] * o.c[n - i];
            }
            c[n] = s;
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut q = [0.0; LEN];
        for n in 0..LEN {
            let mut s = self.c[n];
            for i in 1..=n {
                s -= o.c[i] * q[n - i];
            }
            q[n] = s / o.c[0];
        }
        Jet { c: q }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, o: f64) -> Jet {
        self.c[0] -= o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        o.scale(self)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        o + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        -o + self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        self.scale(1.0 / o)
    }
}

/// A point of R^5 with jet entries.
pub type Jet5 = [Jet; 5];

pub fn values5(v: &Jet5) -> [f64; 5] {
    [v[0].c[0], v[1].c[0], v[2].c[0], v[3].c[0], v[4].c[0]]
}

pub fn d5(v: &Jet5) -> Jet5 {
    [v[0].d(), v[1].d(), v[2].d(), v[3].d(), v[4].d()]
}

pub fn scale5(v: &Jet5, s: &Jet) -> Jet5 {
    [v[0] * *s, v[1] * *s, v[2] * *s, v[3] * *s, v[4] * *s]
}

pub fn compose5(v: &Jet5, inner: &Jet) -> Jet5 {
    [
        v[0].compose(inner),
        v[1].compose(inner),
        v[2].compose(inner),
        v[3].compose(inner),
        v[4].compose(inner),
    ]
}

/// Bilinear form with a diagonal Gram matrix.
pub fn diag_product(u: &Jet5, v: &Jet5, g: &[f64; 5]) -> Jet {
    let mut s = Jet::zero();
    for i in 0..5 {
        s += (u[i] * v[i]).scale(g[i]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_derivatives() {
        let x = Jet::variable(0.3);
        let s = x.sin();
        assert!((s.derivative(3) + 0.3f64.cos()).abs() < 1e-14);
        assert!((s.derivative(4) - 0.3f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn powf_matches_sqrt() {
        let x = Jet::variable(2.0) * Jet::variable(2.0);
        let r = x.sqrt();
        // sqrt(t^2) = t near t = 2
        assert!((r.c[1] - 1.0).abs() < 1e-14);
        assert!(r.c[2].abs() < 1e-14);
    }

    #[test]
    fn revert_exp() {
        // u = e^t - 1 about 0 reverts to t = ln(1 + u)
        let u = Jet::variable(0.0).exp() - 1.0;
        let t = u.revert();
        let want = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25, 0.2];
        for (n, w) in want.iter().enumerate() {
            assert!((t.c[n] - w).abs() < 1e-13, "{n}: {}", t.c[n]);
        }
    }
}
