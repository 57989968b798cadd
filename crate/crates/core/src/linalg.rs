//! Dense Gaussian elimination over the rationals and over prime fields.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational number, `None` when its denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(n.into())).expect("integers embed in every field")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
}

/// The field with `p` elements; `p` must be prime and below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..(1 << 31)).contains(&p) && is_prime(p), "{p} is not a supported prime");
        PrimeField { p }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn reduce(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        m.to_u64().expect("residue fits")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce(q.denom());
        if den == 0 {
            return None;
        }
        let num = self.reduce(q.numer());
        Some(self.mul(&num, &self.inv(&den)))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Incrementally maintained reduced row-echelon basis of a subspace of `F^ncols`.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    /// Rows normalized to pivot 1, fully reduced against each other.
    rows: Vec<(usize, Vec<F::Elem>)>,
    pivot_of_col: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivot_of_col: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F::Elem]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    /// Reduces `row` against the current basis.
    pub fn reduce(&self, mut row: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.field;
        for (pivot, basis_row) in &self.rows {
            let c = row[*pivot].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, b) in row.iter_mut().zip(basis_row) {
                if !f.is_zero(b) {
                    *x = f.sub(x, &f.mul(&c, b));
                }
            }
        }
        row
    }

    pub fn contains(&self, row: Vec<F::Elem>) -> bool {
        let f = &self.field;
        self.reduce(row).iter().all(|x| f.is_zero(x))
    }

    /// Adds `row` to the span; returns whether it was independent.
    pub fn insert(&mut self, row: Vec<F::Elem>) -> bool {
        assert_eq!(row.len(), self.ncols, "row length");
        let f = &self.field;
        let mut row = self.reduce(row);
        let Some(pivot) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[pivot]);
        for x in row.iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        for (_, other) in self.rows.iter_mut() {
            let c = other[pivot].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (x, b) in other.iter_mut().zip(&row) {
                if !f.is_zero(b) {
                    *x = f.sub(x, &f.mul(&c, b));
                }
            }
        }
        self.pivot_of_col[pivot] = Some(self.rows.len());
        self.rows.push((pivot, row));
        true
    }

    /// Basis of `{x : <row, x> = 0 for every row}`.
    pub fn annihilator(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.ncols];
            v[free] = f.one();
            for (pivot, row) in &self.rows {
                v[*pivot] = f.neg(&row[free]);
            }
            out.push(v);
        }
        out
    }
}

pub fn rank<F: Field>(field: F, ncols: usize, rows: impl IntoIterator<Item = Vec<F::Elem>>) -> usize {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of the right nullspace `{x : A x = 0}` of the matrix with the given rows.
pub fn nullspace<F: Field>(field: F, ncols: usize, rows: impl IntoIterator<Item = Vec<F::Elem>>) -> Vec<Vec<F::Elem>> {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
    }
    e.annihilator()
}

/// Clears denominators and divides by the content so that vectors spanning
/// the same line print identically.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| if x.is_negative() { -BigInt::one() } else { BigInt::one() });
    let g = g * sign.unwrap_or_else(BigInt::one);
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(Rationals, 3, rows), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![vec![q(0), q(1), q(-1), q(0)]];
        let ns = nullspace(Rationals, 4, rows.clone());
        assert_eq!(ns.len(), 3);
        for v in &ns {
            let dot: BigRational = v.iter().zip(&rows[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5);
        assert_eq!(f.inv(&2), 3);
        assert_eq!(f.from_rational(&BigRational::new(1.into(), 2.into())), Some(3));
        assert_eq!(f.from_rational(&BigRational::new(1.into(), 5.into())), None);
        assert_eq!(f.from_int(-1), 4);
        // rows (1,1), (1,-1) are dependent only in characteristic 2
        let rows = |f: PrimeField| vec![vec![f.from_int(1), f.from_int(1)], vec![f.from_int(1), f.from_int(-1)]];
        assert_eq!(rank(PrimeField::new(2), 2, rows(PrimeField::new(2))), 1);
        assert_eq!(rank(PrimeField::new(3), 2, rows(PrimeField::new(3))), 2);
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![BigRational::new((-1).into(), 2.into()), q(0), q(1)];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(1), BigInt::from(0), BigInt::from(-2)]);
    }
}
