//! Truncated power series with exact rational coefficients, the loop
//! generating series, and sphere-summand multiplicities by Möbius inversion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lyndon::LieDimTable;
use crate::rewrite::HilbertTable;

/// `sum_{i <= cap} c_i t^i`, known exactly up to and including `t^cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSeries({self})")
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            match (i, m.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{m}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{m}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.cap() + 1)
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl PowerSeries {
    pub fn zero(cap: u32) -> Self {
        PowerSeries { coeffs: vec![BigRational::zero(); cap as usize + 1] }
    }

    pub fn one(cap: u32) -> Self {
        Self::monomial(cap, 0, int(1))
    }

    pub fn monomial(cap: u32, degree: u32, c: BigRational) -> Self {
        let mut s = Self::zero(cap);
        if degree <= cap {
            s.coeffs[degree as usize] = c;
        }
        s
    }

    /// Truncates (or zero-pads) the given coefficients to `0..=cap`.
    pub fn from_coeffs(cap: u32, coeffs: impl IntoIterator<Item = BigRational>) -> Self {
        let mut s = Self::zero(cap);
        for (i, c) in coeffs.into_iter().take(cap as usize + 1).enumerate() {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn from_ints(cap: u32, coeffs: &[i64]) -> Self {
        Self::from_coeffs(cap, coeffs.iter().map(|&c| int(c)))
    }

    /// A polynomial given as `(degree, coefficient)` pairs; terms past `cap` are dropped.
    pub fn polynomial(cap: u32, terms: &[(u32, i64)]) -> Self {
        let mut s = Self::zero(cap);
        for &(d, c) in terms {
            if d <= cap {
                s.coeffs[d as usize] += int(c);
            }
        }
        s
    }

    pub fn cap(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32) -> BigRational {
        self.coeffs.get(i as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, cap: u32) -> Self {
        Self::from_coeffs(cap.min(self.cap()), self.coeffs.iter().cloned())
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        Self::from_coeffs(cap, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        Self::from_coeffs(cap, self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.cap(), self.coeffs.iter().map(|a| a * c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap()) as usize;
        let mut out = vec![BigRational::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Series("inverse needs a nonzero constant term".into()));
        }
        let inv0 = a0.recip();
        let cap = self.cap() as usize;
        let mut b = vec![BigRational::zero(); cap + 1];
        b[0] = inv0.clone();
        for n in 1..=cap {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &b[n - k];
                }
            }
            b[n] = -acc * &inv0;
        }
        Ok(PowerSeries { coeffs: b })
    }

    pub fn derivative(&self) -> Self {
        let cap = self.cap().saturating_sub(1);
        Self::from_coeffs(cap, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)))
    }

    /// Antiderivative with zero constant term; the result has cap one higher.
    pub fn integral(&self) -> Self {
        let coeffs = std::iter::once(BigRational::zero())
            .chain(self.coeffs.iter().enumerate().map(|(i, c)| c / int(i as i64 + 1)));
        Self::from_coeffs(self.cap() + 1, coeffs)
    }

    /// Formal logarithm; the constant term must be 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log needs constant term 1".into()));
        }
        if self.cap() == 0 {
            return Ok(Self::zero(0));
        }
        // log a = ∫ a'/a
        let quotient = self.derivative().mul(&self.inverse()?.truncate(self.cap() - 1));
        Ok(quotient.integral())
    }

    /// Formal exponential; the constant term must be 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp needs constant term 0".into()));
        }
        let cap = self.cap() as usize;
        let mut b = vec![BigRational::zero(); cap + 1];
        b[0] = int(1);
        // n b_n = sum_{k=1}^n k a_k b_{n-k}
        for n in 1..=cap {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * int(k as i64) * &b[n - k];
                }
            }
            b[n] = acc / int(n as i64);
        }
        Ok(PowerSeries { coeffs: b })
    }

    /// `self^e` for an integer exponent (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.cap());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Substitutes `t -> t^k`.
    pub fn substitute_power(&self, k: u32) -> Self {
        let mut s = Self::zero(self.cap());
        for (i, c) in self.coeffs.iter().enumerate() {
            let d = i * k as usize;
            if d > self.cap() as usize {
                break;
            }
            s.coeffs[d] = c.clone();
        }
        s
    }

    /// Divides by `t`; the constant term must vanish. The cap drops by one.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("cannot divide by t: nonzero constant term".into()));
        }
        if self.cap() == 0 {
            return Err(Error::Series("cannot divide a cap-0 series by t".into()));
        }
        Ok(Self::from_coeffs(self.cap() - 1, self.coeffs[1..].iter().cloned()))
    }

    /// Multiplies by `t^k`, keeping the cap.
    pub fn shift_up(&self, k: u32) -> Self {
        let coeffs = std::iter::repeat_n(BigRational::zero(), k as usize).chain(self.coeffs.iter().cloned());
        Self::from_coeffs(self.cap(), coeffs)
    }
}

/// `1 - r t^{n-1} - r t^n + t^{2n-1}`: the generating polynomial of the loop
/// homology in loop degree. Its reciprocal is the Hilbert series of
/// `H_*(ΩM)`.
pub fn loop_generating_series(n: u32, r: u32, cap: u32) -> Result<PowerSeries> {
    check_nr(n, r)?;
    let r = r as i64;
    Ok(PowerSeries::polynomial(cap, &[(0, 1), (n - 1, -r), (n, -r), (2 * n - 1, 1)]))
}

/// `1 - r t^n - r t^{n+1} + t^{2n+1}`, the same pattern indexed by the
/// degrees of `H_*(M)` rather than of `H_*(ΩM)`. Kept for comparison only;
/// the summand counts are computed from [`loop_generating_series`].
pub fn manifold_degree_series(n: u32, r: u32, cap: u32) -> Result<PowerSeries> {
    check_nr(n, r)?;
    let r = r as i64;
    Ok(PowerSeries::polynomial(cap, &[(0, 1), (n, -r), (n + 1, -r), (2 * n + 1, 1)]))
}

fn check_nr(n: u32, r: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidManifold(format!("n = {n} must be >= 2")));
    }
    if r == 0 {
        return Err(Error::SphereFallback { dim: 2 * n + 1 });
    }
    Ok(())
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut m = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Multiplicities `l[w]`: `l[w]` copies of `S^{w+1}` (equivalently of `ΩS^{w+1}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandCounts {
    counts: BTreeMap<u32, u64>,
    cap: u32,
}

impl SummandCounts {
    pub fn from_vec(counts: &[u64]) -> Self {
        let cap = counts.len().saturating_sub(1) as u32;
        let counts = counts.iter().enumerate().skip(1).map(|(w, &c)| (w as u32, c)).collect();
        SummandCounts { counts, cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn get(&self, w: u32) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    /// `[0, l[1], ..., l[cap]]`.
    pub fn to_vec(&self) -> Vec<u64> {
        (0..=self.cap).map(|w| self.get(w)).collect()
    }

    /// Nonzero `(w, l[w])` pairs in increasing `w`.
    pub fn nonzero(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.counts.iter().filter(|(_, &c)| c > 0).map(|(&w, &c)| (w, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn render(&self) -> String {
        (1..=self.cap).map(|w| format!("l[{w}]={}", self.get(w))).collect::<Vec<_>>().join(" ")
    }
}

/// `l[w] = -sum_{j | w} mu(j) eta_{w/j} / j`, where `eta_m` is the
/// coefficient of `t^m` in `log q(t)`; equivalently `q = prod (1 - t^w)^{l[w]}`.
pub fn summand_counts_from_series(q: &PowerSeries) -> Result<SummandCounts> {
    let eta = q.log()?;
    let cap = q.cap();
    let mut counts = vec![0u64; cap as usize + 1];
    for w in 1..=cap as u64 {
        let mut l = BigRational::zero();
        for j in divisors(w) {
            let mu = mobius(j);
            if mu != 0 {
                l -= int(mu) * eta.coeff((w / j) as u32) / int(j as i64);
            }
        }
        if !l.is_integer() || l.is_negative() {
            return Err(Error::NonIntegralCount { degree: w as usize, value: l.to_string() });
        }
        counts[w as usize] = l.to_integer().to_u64().ok_or(Error::Overflow(w as u32))?;
    }
    Ok(SummandCounts::from_vec(&counts))
}

pub fn sphere_summand_counts(n: u32, r: u32, cap: u32) -> Result<SummandCounts> {
    summand_counts_from_series(&loop_generating_series(n, r, cap)?)
}

/// `prod_{w=1}^{cap} (1 - t^w)^{-dims[w]}`.
pub fn pbw_product(dims: &[u64], cap: u32) -> Result<PowerSeries> {
    let mut acc = PowerSeries::one(cap);
    for (w, &d) in dims.iter().enumerate().skip(1).take(cap as usize) {
        if d == 0 {
            continue;
        }
        let factor = PowerSeries::polynomial(cap, &[(0, 1), (w as u32, -1)]);
        acc = acc.mul(&factor.pow(-(d as i64))?);
    }
    Ok(acc)
}

/// True iff `prod (1 - t^w)^{-lie[w]}` agrees with the Hilbert series to `cap`.
pub fn pbw_series_check(lie: &LieDimTable, hilbert: &HilbertTable, cap: u32) -> bool {
    if lie.cap() < cap || hilbert.cap() < cap {
        return false;
    }
    match pbw_product(&lie.dims, cap) {
        Ok(product) => product.coeffs().iter().zip(hilbert.as_rationals()).all(|(a, b)| *a == b),
        Err(_) => false,
    }
}
