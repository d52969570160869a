//! Principal congruence subgroups Γ(N) ⊂ SL₂(ℤ) and the surfaces X(N).
//!
//! Level data is exact: indices, genera and cusp counts are big integers
//! computed from exact rationals, and every division that the theory says is
//! exact is checked. Only the systole length and the area are floating point.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hyp::{length_from_trace, GeodesicLength};

/// A 2×2 integer matrix of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerMatrix2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntegerMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::domain(
                "SL(2,Z) element",
                format!("[[{a}, {b}], [{c}, {d}]] has determinant {det}, not 1"),
            ));
        }
        Ok(IntegerMatrix2 { a, b, c, d })
    }

    pub fn identity() -> Self {
        IntegerMatrix2 {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2
    }
}

impl fmt::Display for IntegerMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Exact invariants of the congruence surface X(N) = Γ(N)\ℍ.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceSurfaceData {
    pub level: u64,
    /// Index of ±Γ(N) in PSL₂(ℤ).
    pub index_d: BigInt,
    pub genus: BigInt,
    pub cusps: BigInt,
    /// `2cosh(systole/2) = N² − 2`.
    pub systole: GeodesicLength,
    /// `π·d_N/6`.
    pub area: f64,
}

impl CongruenceSurfaceData {
    /// Number of cusps as a machine integer.
    pub fn cusp_count(&self) -> u64 {
        self.cusps
            .to_u64()
            .expect("cusp count fits in u64 for every supported level")
    }

    /// Genus after pairing the cusps and closing each pair with a geodesic,
    /// `g_N + b_N/2`; the Euler characteristic is unchanged.
    pub fn compacted_genus(&self) -> BigInt {
        &self.genus + &self.cusps / 2u32
    }
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

fn exact_integer(value: BigRational, what: &str, level: u64) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::InternalInvariantViolation(format!(
            "{what} for level {level} is {value}, not an integer"
        )))
    }
}

/// `d_N`: 12 for `N = 2`, otherwise `N³·∏_{p|N}(1 − 1/p²)`.
pub fn index_d(level: u64) -> Result<BigInt> {
    if level < 2 {
        return Err(Error::domain("level", format!("index needs N ≥ 2, got {level}")));
    }
    if level == 2 {
        return Ok(BigInt::from(12));
    }
    let n = BigInt::from(level);
    let mut value = BigRational::from_integer(&n * &n * &n);
    for p in prime_divisors(level) {
        let p2 = BigInt::from(p) * BigInt::from(p);
        value *= BigRational::one() - BigRational::new(BigInt::one(), p2);
    }
    exact_integer(value, "index d_N", level)
}

/// Exact level data of X(N) for torsion-free levels `N ≥ 3`.
pub fn surface_data(level: u64) -> Result<CongruenceSurfaceData> {
    if level < 3 {
        return Err(Error::domain(
            "level",
            format!("Γ(N) is torsion-free only for N ≥ 3, got {level}"),
        ));
    }
    let d = index_d(level)?;
    let n = BigInt::from(level);
    let genus = BigRational::one()
        + BigRational::new(&d * (&n - BigInt::from(6)), BigInt::from(24) * &n);
    let genus = exact_integer(genus, "genus g_N", level)?;
    let cusps = exact_integer(
        BigRational::new(d.clone(), BigInt::from(2) * &n),
        "cusp count b_N",
        level,
    )?;
    if !(&cusps % 2u32).is_zero() {
        return Err(Error::InternalInvariantViolation(format!(
            "cusp count {cusps} of level {level} is odd"
        )));
    }
    let n2 = level as f64 * level as f64;
    let systole = length_from_trace(n2 - 2.0)?;
    let area = PI * d.to_f64().unwrap_or(f64::INFINITY) / 6.0;
    Ok(CongruenceSurfaceData {
        level,
        index_d: d,
        genus,
        cusps,
        systole,
        area,
    })
}

/// Whether `m ≡ I (mod N)`.
pub fn is_in_gamma(m: &IntegerMatrix2, level: u64) -> Result<bool> {
    if level < 3 {
        return Err(Error::domain("level", format!("expected N ≥ 3, got {level}")));
    }
    let n = level as i64;
    let [a, b, c, d] = m.entries();
    Ok(a.rem_euclid(n) == 1 && d.rem_euclid(n) == 1 && b.rem_euclid(n) == 0 && c.rem_euclid(n) == 0)
}

/// `[[1 − N², N], [−N, 1]] ∈ Γ(N)`, whose trace has absolute value `N² − 2`.
pub fn witness_matrix(level: u64) -> Result<IntegerMatrix2> {
    if level < 3 {
        return Err(Error::domain("level", format!("expected N ≥ 3, got {level}")));
    }
    let n = i64::try_from(level)
        .ok()
        .filter(|&n| n <= 3_000_000_000)
        .ok_or_else(|| Error::domain("level", format!("{level} is too large for the witness")))?;
    IntegerMatrix2::new(1 - n * n, n, -n, 1)
}

/// Residues `r (mod N)` in `[-bound, bound]`, ascending.
fn residues(r: i64, n: i64, bound: i64) -> impl Iterator<Item = i64> {
    let start = -bound + (r - (-bound)).rem_euclid(n);
    (0..)
        .map(move |k| start + k * n)
        .take_while(move |&x| x <= bound)
}

fn residue_count(n: i64, bound: i64) -> u128 {
    (2 * bound as u128 + 1) / n as u128 + 1
}

/// Upper estimate of the `(a, b, d)` triples visited by [`min_hyperbolic_trace`].
pub fn search_candidates(level: u64, entry_bound: u64) -> u128 {
    let n = level.max(1) as i64;
    let b = entry_bound.min(i64::MAX as u64 / 4) as i64;
    residue_count(n, b).pow(3)
}

/// Smallest `|tr|` over hyperbolic elements of Γ(N) with all entries in
/// `[-entry_bound, entry_bound]`.
///
/// Walks `a ≡ d ≡ 1`, `b ≡ 0 (mod N)` and solves `c = (ad − 1)/b`, keeping it
/// only when it is integral, in the box and `≡ 0 (mod N)`. `b = 0` forces
/// `a = d = 1` (parabolic), so it is skipped. The minimum does not depend on
/// how the `a`-range is split across threads.
pub fn min_hyperbolic_trace(level: u64, entry_bound: u64) -> Result<Option<u64>> {
    if level < 3 {
        return Err(Error::domain("level", format!("expected N ≥ 3, got {level}")));
    }
    let n2 = level.checked_mul(level).unwrap_or(u64::MAX);
    if entry_bound < n2 {
        return Err(Error::domain(
            "entry bound",
            format!("{entry_bound} < N² = {n2}; the systole witness would lie outside the box"),
        ));
    }
    if entry_bound > i64::MAX as u64 / 4 {
        return Err(Error::domain("entry bound", format!("{entry_bound} is too large")));
    }
    Ok(search_min_trace(level as i64, entry_bound as i64))
}

fn search_min_trace(n: i64, bound: i64) -> Option<u64> {
    let a_values: Vec<i64> = residues(1, n, bound).collect();
    let best = a_values
        .par_iter()
        .filter_map(|&a| {
            let mut best: Option<i64> = None;
            for b in residues(0, n, bound).filter(|&b| b != 0) {
                for d in residues(1, n, bound) {
                    let tr = (a + d).abs();
                    if tr <= 2 || best.is_some_and(|m| tr >= m) {
                        continue;
                    }
                    let num = a as i128 * d as i128 - 1;
                    let b128 = b as i128;
                    if num % b128 != 0 {
                        continue;
                    }
                    let c = num / b128;
                    if c.abs() > bound as i128 || c.rem_euclid(n as i128) != 0 {
                        continue;
                    }
                    best = Some(tr);
                }
            }
            best
        })
        .min();
    best.map(|t| t as u64)
}
