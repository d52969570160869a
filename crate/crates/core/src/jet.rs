//! Truncated Taylor series ("jets") in one variable.
//!
//! Coefficient `k` is `f^(k)(x0) / k!`. Only what the tail certificate of the
//! Plancherel integral needs is implemented.

use std::ops::{Add, Mul};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn zero(len: usize) -> Self {
        Jet(vec![0.0; len])
    }

    pub fn constant(c: f64, len: usize) -> Self {
        let mut j = Jet::zero(len);
        j.0[0] = c;
        j
    }

    /// The jet of `x ↦ x` at `x0`.
    pub fn variable(x0: f64, len: usize) -> Self {
        let mut j = Jet::constant(x0, len);
        if len > 1 {
            j.0[1] = 1.0;
        }
        j
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.0.iter_mut().for_each(|c| *c *= s);
        self
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.0[k] * fact
    }

    pub fn recip(&self) -> Self {
        let n = self.len();
        let a = &self.0;
        let mut r = vec![0.0; n];
        r[0] = 1.0 / a[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| a[j] * r[k - j]).sum();
            r[k] = -s * r[0];
        }
        Jet(r)
    }

    /// `exp(self)` via `e' = a' e`.
    pub fn exp(&self) -> Self {
        let n = self.len();
        let a = &self.0;
        let mut e = vec![0.0; n];
        e[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet(e)
    }

    /// Composes an outer series `outer` (coefficients about `self[0]`) with
    /// `self`, i.e. the jet of `F(x(·))` where `outer` is the jet of `F` at
    /// `x(x0)`.
    pub fn compose_into(&self, outer: &Jet) -> Jet {
        let n = self.len().min(outer.len());
        let mut shift = self.clone();
        shift.0.truncate(n);
        shift.0[0] = 0.0;
        let mut out = vec![0.0; n];
        let mut power = Jet::constant(1.0, n);
        for (j, &cj) in outer.0.iter().take(n).enumerate() {
            // shift^j has no terms below degree j.
            for k in j..n {
                out[k] += cj * power.0[k];
            }
            if j + 1 < n {
                power = &power * &shift;
            }
        }
        Jet(out)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.len().min(rhs.len());
        let (a, b) = (&self.0, &rhs.0);
        Jet((0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect())
    }
}
