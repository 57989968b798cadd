//! The `(n, r, G)` model of an `(n-1)`-connected `(2n+1)`-manifold: its
//! (co)homology, torsion primes, the cup-product form algebra, and the
//! presentation of its loop homology.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{AbelianGroup, FiniteAbelianGroup, GradedAbelianGroup};
use crate::koszul::QuadraticAlgebra;
use crate::linalg::{is_prime, Echelon, Field, PrimeField, Rationals};
use crate::rewrite::QuadraticPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldModel {
    n: u32,
    r: u32,
    torsion: FiniteAbelianGroup,
}

impl ManifoldModel {
    pub fn new(n: u32, r: u32, torsion: FiniteAbelianGroup) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidManifold(format!("n must be >= 2 (got {n})")));
        }
        Ok(ManifoldModel { n, r, torsion })
    }

    /// `torsion` in the shared input grammar: comma-separated cyclic orders or `-`.
    pub fn parse(n: u32, r: u32, torsion: &str) -> Result<Self> {
        Self::new(n, r, FiniteAbelianGroup::parse(torsion)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn torsion(&self) -> &FiniteAbelianGroup {
        &self.torsion
    }

    pub fn dim(&self) -> u32 {
        2 * self.n + 1
    }

    pub fn homology(&self) -> GradedAbelianGroup {
        let mut h = GradedAbelianGroup::new();
        h.add(0, &AbelianGroup::free(1));
        h.add(self.n, &AbelianGroup::new(self.r as u64, self.torsion.clone()));
        h.add(self.n + 1, &AbelianGroup::free(self.r as u64));
        h.add(self.dim(), &AbelianGroup::free(1));
        h
    }

    pub fn cohomology(&self) -> GradedAbelianGroup {
        let mut h = GradedAbelianGroup::new();
        h.add(0, &AbelianGroup::free(1));
        h.add(self.n, &AbelianGroup::free(self.r as u64));
        h.add(self.n + 1, &AbelianGroup::new(self.r as u64, self.torsion.clone()));
        h.add(self.dim(), &AbelianGroup::free(1));
        h
    }

    /// Primes `p` with `G ⊗ Z/p != 0`.
    pub fn sigma_primes(&self) -> BTreeSet<u64> {
        self.torsion.primes()
    }

    pub fn coefficient_ring(&self) -> CoefficientRing {
        CoefficientRing { inverted: self.sigma_primes() }
    }

    pub fn loop_presentation(&self) -> Result<QuadraticPresentation> {
        QuadraticPresentation::loop_homology(self.n, self.r)
    }

    /// The cohomology ring over `Q` (`p = 0`) or `F_p` as a form algebra.
    pub fn form_algebra(&self, p: u64) -> Result<FormAlgebra> {
        let s = if p == 0 { self.r as usize } else { self.r as usize + self.torsion.p_rank(p) };
        FormAlgebra::hyperbolic(p, self.n, s)
    }
}

impl fmt::Display for ManifoldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} r={} G={}", self.n, self.r, self.torsion)
    }
}

/// `Z` with a finite set of primes inverted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRing {
    pub inverted: BTreeSet<u64>,
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted.is_empty() {
            return write!(f, "Z");
        }
        let parts: Vec<String> = self.inverted.iter().map(|p| format!("1/{p}")).collect();
        write!(f, "Z[{}]", parts.join(","))
    }
}

/// `k ⊕ V ⊕ k·z` with `v1 · v2 = φ(v1, v2) z`, over `Q` (characteristic 0)
/// or `F_p`. Entries of the form are stored as rationals; over `F_p` they
/// are read modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormAlgebra {
    characteristic: u64,
    degrees: Vec<u32>,
    form: Vec<Vec<BigRational>>,
}

impl FormAlgebra {
    pub fn new(characteristic: u64, degrees: Vec<u32>, form: Vec<Vec<BigRational>>) -> Result<Self> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(Error::InvalidManifold(format!("characteristic {characteristic} is not 0 or a prime")));
        }
        let d = degrees.len();
        if form.len() != d || form.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: form.len() });
        }
        let alg = FormAlgebra { characteristic, degrees, form };
        alg.check_graded_symmetry()?;
        Ok(alg)
    }

    /// The cup-product pairing of `s` classes `w_i` in degree `n` with the
    /// dual classes `w_i'` in degree `n + 1`.
    pub fn hyperbolic(characteristic: u64, n: u32, s: usize) -> Result<Self> {
        let mut degrees = vec![n; s];
        degrees.extend(std::iter::repeat_n(n + 1, s));
        let mut form = vec![vec![BigRational::zero(); 2 * s]; 2 * s];
        for i in 0..s {
            form[i][s + i] = BigRational::one();
            form[s + i][i] = BigRational::one();
        }
        Self::new(characteristic, degrees, form)
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `s` for a hyperbolic form: half the dimension of `V`.
    pub fn s(&self) -> usize {
        self.dim() / 2
    }

    fn check_graded_symmetry(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let sign = if (self.degrees[i] * self.degrees[j]).is_multiple_of(2) { 1 } else { -1 };
                let lhs = self.entry(i, j);
                let rhs = self.entry(j, i) * BigRational::from_integer(sign.into());
                if !self.equal_in_field(&lhs, &rhs) {
                    return Err(Error::InvalidManifold(format!("form is not graded-symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    fn entry(&self, i: usize, j: usize) -> BigRational {
        self.form[i][j].clone()
    }

    fn equal_in_field(&self, a: &BigRational, b: &BigRational) -> bool {
        if self.characteristic == 0 {
            a == b
        } else {
            let f = PrimeField::new(self.characteristic);
            f.from_rational(a) == f.from_rational(b)
        }
    }

    fn is_zero_in_field(&self, a: &BigRational) -> bool {
        self.equal_in_field(a, &BigRational::zero())
    }

    fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && !self.form[i][j].is_zero() {
                    acc += xi * &self.form[i][j] * yj;
                }
            }
        }
        acc
    }

    /// Basis vectors and homogeneous two-term combinations `e_i ± e_j`.
    fn candidates(&self) -> Vec<Vec<BigRational>> {
        let d = self.dim();
        let unit = |i: usize| {
            let mut v = vec![BigRational::zero(); d];
            v[i] = BigRational::one();
            v
        };
        let mut out: Vec<Vec<BigRational>> = (0..d).map(unit).collect();
        for i in 0..d {
            for j in i + 1..d {
                if self.degrees[i] != self.degrees[j] {
                    continue;
                }
                for sign in [1i64, -1] {
                    let mut v = unit(i);
                    v[j] = BigRational::from_integer(sign.into());
                    out.push(v);
                }
            }
        }
        out
    }

    /// Searches for `v1, v2` with `φ(v1,v1) = φ(v2,v2) = 0` and
    /// `φ(v1,v2)` a unit, i.e. a copy of the symmetric or antisymmetric
    /// hyperbolic plane inside `V`.
    pub fn is_quadratic(&self) -> bool {
        if self.dim() == 0 {
            return true;
        }
        let candidates = self.candidates();
        let isotropic: Vec<&Vec<BigRational>> =
            candidates.iter().filter(|v| self.is_zero_in_field(&self.pair(v, v))).collect();
        isotropic.iter().any(|a| {
            isotropic.iter().any(|b| {
                let ab = self.pair(a, b);
                let ba = self.pair(b, a);
                !self.is_zero_in_field(&ab) && (self.equal_in_field(&ab, &ba) || self.equal_in_field(&ab, &-ba))
            })
        })
    }

    /// Basis of `R = Ker(V ⊗ V -> k, v ⊗ w -> φ(v, w))`, coordinate
    /// `i * dim + j` for `e_i ⊗ e_j`. Over `F_p` the entries are residues.
    pub fn kernel_relations(&self) -> Vec<Vec<BigRational>> {
        let d = self.dim();
        let row: Vec<BigRational> = (0..d * d).map(|idx| self.form[idx / d][idx % d].clone()).collect();
        if self.characteristic == 0 {
            let mut e = Echelon::new(Rationals, d * d);
            e.insert(row);
            e.annihilator()
        } else {
            let f = PrimeField::new(self.characteristic);
            let mut e = Echelon::new(f, d * d);
            e.insert(row.iter().map(|x| f.from_rational(x).expect("form entries are p-integral")).collect());
            e.annihilator()
                .into_iter()
                .map(|v| v.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect()
        }
    }

    /// Weight dimensions of the quadratic algebra `A(V, Ker φ)`.
    pub fn quadratic_weight_dims(&self, cap: u32) -> Result<Vec<u128>> {
        let relations = self.kernel_relations();
        let d = self.dim();
        if self.characteristic == 0 {
            QuadraticAlgebra::new(Rationals, d, relations)?.weight_dims(cap)
        } else {
            let f = PrimeField::new(self.characteristic);
            let rel = relations
                .iter()
                .map(|v| v.iter().map(|x| f.from_rational(x).expect("residues")).collect())
                .collect();
            QuadraticAlgebra::new(f, d, rel)?.weight_dims(cap)
        }
    }

    /// `dim(V^{⊗3}) - dim(R ⊗ V + V ⊗ R)`; zero means `A(V, R)` has nothing
    /// beyond weight 2, as the form algebra does.
    pub fn weight3_dim(&self) -> Result<u128> {
        Ok(self.quadratic_weight_dims(3)?[3])
    }
}

/// The spanning set `{w_i⊗w_j, w_i'⊗w_j', w_i⊗w_i' − w_i'⊗w_i, w_i⊗w_j', w_i'⊗w_j (i ≠ j)}`
/// for a hyperbolic form on `s` pairs, in the coordinates of
/// [`FormAlgebra::kernel_relations`].
pub fn listed_relation_spanning_set(s: usize) -> Vec<Vec<BigRational>> {
    let d = 2 * s;
    let coord = |a: usize, b: usize| a * d + b;
    let unit = |idx: usize| {
        let mut v = vec![BigRational::zero(); d * d];
        v[idx] = BigRational::one();
        v
    };
    let mut out = Vec::new();
    for i in 0..s {
        for j in 0..s {
            out.push(unit(coord(i, j)));
            out.push(unit(coord(s + i, s + j)));
            if i != j {
                out.push(unit(coord(i, s + j)));
                out.push(unit(coord(s + i, j)));
            }
        }
        let mut v = unit(coord(i, s + i));
        v[coord(s + i, i)] = -BigRational::one();
        out.push(v);
    }
    out
}
