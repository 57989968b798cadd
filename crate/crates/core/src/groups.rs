//! Finitely generated abelian groups in invariant-factor form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prime factorization as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Z/d1 ⊕ ... ⊕ Z/dk` with `d1 | d2 | ... | dk`, every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(order: u64) -> Result<Self> {
        Self::from_cyclic_orders(&[order])
    }

    /// Normalizes `Z/a1 ⊕ Z/a2 ⊕ ...` to invariant factors. Orders of 1 are
    /// trivial summands; 0 (an infinite cyclic group) is rejected.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic order 0 is not a finite group".into()));
        }
        // prime -> exponents of its primary cyclic parts
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &a in orders {
            for (p, e) in factorize(a) {
                primary.entry(p).or_default().push(e);
            }
        }
        let length = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; length];
        for (p, mut exps) in primary {
            exps.sort_unstable();
            // largest exponents go to the last invariant factors
            let offset = length - exps.len();
            for (i, e) in exps.into_iter().enumerate() {
                factors[offset + i] = factors[offset + i]
                    .checked_mul(p.checked_pow(e).ok_or_else(|| Error::InvalidGroup("order overflow".into()))?)
                    .ok_or_else(|| Error::InvalidGroup("order overflow".into()))?;
            }
        }
        Ok(FiniteAbelianGroup { invariant_factors: factors })
    }

    /// Parses `"2,4,3"` (comma-separated cyclic orders) or `"-"` for the trivial group.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "-" || text.is_empty() || text == "0" {
            return Ok(Self::trivial());
        }
        let orders = text
            .split(',')
            .map(|s| {
                let s = s.trim();
                let order: u64 = s.parse().map_err(|_| Error::InvalidGroup(format!("bad cyclic order {s:?}")))?;
                if order < 2 {
                    return Err(Error::InvalidGroup(format!("cyclic order {order} must be >= 2")));
                }
                Ok(order)
            })
            .collect::<Result<Vec<u64>>>()?;
        Self::from_cyclic_orders(&orders)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn primes(&self) -> BTreeSet<u64> {
        self.invariant_factors.iter().flat_map(|&d| factorize(d).into_iter().map(|(p, _)| p)).collect()
    }

    /// `dim_{F_p}(G ⊗ Z/p)`: the number of invariant factors divisible by `p`.
    pub fn p_rank(&self, p: u64) -> usize {
        self.invariant_factors.iter().filter(|&&d| d % p == 0).count()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let orders: Vec<u64> = self.invariant_factors.iter().chain(&other.invariant_factors).copied().collect();
        Self::from_cyclic_orders(&orders).expect("invariant factors are nonzero")
    }

    /// `k` copies of `self`.
    pub fn power(&self, k: u64) -> Self {
        let mut orders = Vec::with_capacity(self.invariant_factors.len() * k as usize);
        for _ in 0..k {
            orders.extend_from_slice(&self.invariant_factors);
        }
        Self::from_cyclic_orders(&orders).expect("invariant factors are nonzero")
    }

    /// Kills the `p`-primary part for every `p` in `primes`.
    pub fn localize(&self, primes: &BTreeSet<u64>) -> Self {
        let orders: Vec<u64> = self
            .invariant_factors
            .iter()
            .map(|&d| {
                let mut d = d;
                for &p in primes {
                    while d % p == 0 {
                        d /= p;
                    }
                }
                d
            })
            .filter(|&d| d > 1)
            .collect();
        Self::from_cyclic_orders(&orders).expect("invariant factors are nonzero")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^rank ⊕ torsion`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: u64,
    pub torsion: FiniteAbelianGroup,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u64) -> Self {
        AbelianGroup { free_rank: rank, torsion: FiniteAbelianGroup::trivial() }
    }

    pub fn torsion(torsion: FiniteAbelianGroup) -> Self {
        AbelianGroup { free_rank: 0, torsion }
    }

    pub fn new(free_rank: u64, torsion: FiniteAbelianGroup) -> Self {
        AbelianGroup { free_rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_trivial()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        AbelianGroup { free_rank: self.free_rank + other.free_rank, torsion: self.torsion.direct_sum(&other.torsion) }
    }

    pub fn power(&self, k: u64) -> Self {
        AbelianGroup { free_rank: self.free_rank * k, torsion: self.torsion.power(k) }
    }

    pub fn localize(&self, primes: &BTreeSet<u64>) -> Self {
        AbelianGroup { free_rank: self.free_rank, torsion: self.torsion.localize(primes) }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        if !self.torsion.is_trivial() {
            parts.push(self.torsion.to_string());
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::str::FromStr for AbelianGroup {
    type Err = Error;

    /// Inverse of `Display`: `"Z^2 + Z/3 + Z/9"`, `"Z"`, `"0"`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut free_rank = 0u64;
        let mut orders = Vec::new();
        for part in text.split('+').map(str::trim) {
            let bad = || Error::InvalidGroup(format!("cannot parse group summand {part:?}"));
            if part == "Z" {
                free_rank += 1;
            } else if let Some(rank) = part.strip_prefix("Z^") {
                free_rank += rank.parse::<u64>().map_err(|_| bad())?;
            } else if let Some(order) = part.strip_prefix("Z/") {
                let order: u64 = order.parse().map_err(|_| bad())?;
                if order < 2 {
                    return Err(bad());
                }
                orders.push(order);
            } else {
                return Err(bad());
            }
        }
        Ok(AbelianGroup { free_rank, torsion: FiniteAbelianGroup::from_cyclic_orders(&orders)? })
    }
}

/// Degree-indexed abelian groups; degrees not present are zero.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedAbelianGroup {
    groups: BTreeMap<u32, AbelianGroup>,
}

impl GradedAbelianGroup {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, degree: u32, group: AbelianGroup) {
        if group.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }

    pub fn add(&mut self, degree: u32, group: &AbelianGroup) {
        let sum = self.get(degree).direct_sum(group);
        self.set(degree, sum);
    }

    pub fn get(&self, degree: u32) -> AbelianGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    /// Nonzero degrees in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &AbelianGroup)> {
        self.groups.iter().map(|(&d, g)| (d, g))
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.groups.keys().next_back().copied()
    }
}
