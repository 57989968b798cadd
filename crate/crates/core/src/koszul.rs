//! Quadratic algebras `A(V, R) = T(V)/(R)` given by an arbitrary relation
//! subspace `R ⊂ V ⊗ V`, graded by weight (tensor length). Used for Koszul
//! duals and for form algebras, where the single-relation rewriting of
//! [`crate::rewrite`] does not apply.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Field, Rationals};

/// Largest ambient dimension `dim(V)^k` handled by dense elimination.
pub const DENSE_LIMIT: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct QuadraticAlgebra<F: Field> {
    field: F,
    dim: usize,
    relations: Vec<Vec<F::Elem>>,
}

impl<F: Field + Clone> QuadraticAlgebra<F> {
    /// Relations are vectors in `V ⊗ V`, coordinate `i * dim + j` for `v_i ⊗ v_j`.
    pub fn new(field: F, dim: usize, relations: Vec<Vec<F::Elem>>) -> Result<Self> {
        for r in &relations {
            if r.len() != dim * dim {
                return Err(Error::DimensionMismatch { expected: dim * dim, found: r.len() });
            }
        }
        Ok(QuadraticAlgebra { field, dim, relations })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relations(&self) -> &[Vec<F::Elem>] {
        &self.relations
    }

    /// Echelon basis of the weight-`k` part `I_k` of the ideal, `k >= 2`.
    fn ideal_step(&self, previous: &Echelon<F>, k: u32) -> Result<Echelon<F>> {
        let dim = self.dim;
        let ambient = dim.checked_pow(k).filter(|&a| a <= DENSE_LIMIT).ok_or(Error::TooLarge(dim.saturating_pow(k)))?;
        let mut ideal = Echelon::new(self.field.clone(), ambient);
        // I_k = I_{k-1} ⊗ V + V^{⊗(k-2)} ⊗ R
        for row in previous.rows() {
            for j in 0..dim {
                let mut v = vec![self.field.zero(); ambient];
                for (idx, x) in row.iter().enumerate() {
                    if !self.field.is_zero(x) {
                        v[idx * dim + j] = x.clone();
                    }
                }
                ideal.insert(v);
            }
        }
        let prefixes = dim.pow(k - 2);
        for prefix in 0..prefixes {
            for rel in &self.relations {
                let mut v = vec![self.field.zero(); ambient];
                for (idx, x) in rel.iter().enumerate() {
                    if !self.field.is_zero(x) {
                        v[prefix * dim * dim + idx] = x.clone();
                    }
                }
                ideal.insert(v);
            }
        }
        Ok(ideal)
    }

    /// `dim A_k` for `k = 0..=cap`. Once a weight vanishes every higher
    /// weight vanishes too, and no further elimination is done.
    pub fn weight_dims(&self, cap: u32) -> Result<Vec<u128>> {
        let mut dims = vec![0u128; cap as usize + 1];
        dims[0] = 1;
        if cap == 0 {
            return Ok(dims);
        }
        dims[1] = self.dim as u128;
        if self.dim == 0 {
            return Ok(dims);
        }
        let mut ideal = Echelon::new(self.field.clone(), self.dim * self.dim);
        for r in &self.relations {
            ideal.insert(r.clone());
        }
        for k in 2..=cap {
            if k > 2 {
                ideal = self.ideal_step(&ideal, k)?;
            }
            let d = (ideal.ncols() - ideal.rank()) as u128;
            dims[k as usize] = d;
            if d == 0 {
                break;
            }
        }
        Ok(dims)
    }

    /// `dim(V⊗V⊗V) - dim(R⊗V + V⊗R)`.
    pub fn weight3_dim(&self) -> Result<u128> {
        Ok(self.weight_dims(3)?[3])
    }
}

/// The dual algebra `A^! = A(V*, R^⊥)`.
pub type KoszulDual = QuadraticAlgebra<Rationals>;

/// Basis of `R^⊥ ⊂ V* ⊗ V*` for `R` spanned by the given (independent) vectors.
pub fn koszul_dual(dim: usize, relations: &[Vec<BigRational>]) -> Result<KoszulDual> {
    let mut echelon = Echelon::new(Rationals, dim * dim);
    for r in relations {
        if r.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: r.len() });
        }
        echelon.insert(r.clone());
    }
    if echelon.rank() < relations.len() {
        return Err(Error::DependentRelations { rank: echelon.rank(), count: relations.len() });
    }
    QuadraticAlgebra::new(Rationals, dim, echelon.annihilator())
}

/// `dim(V^{⊗3}) - dim(R⊗V + V⊗R)` over the rationals.
pub fn weight3_dim(dim: usize, relations: &[Vec<BigRational>]) -> Result<u128> {
    QuadraticAlgebra::new(Rationals, dim, relations.to_vec())?.weight3_dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, PrimeField};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn vec_of(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn dual_of_zero_relations_is_everything() {
        let dual = koszul_dual(2, &[]).unwrap();
        assert_eq!(dual.relations().len(), 4);
        assert_eq!(dual.weight_dims(4).unwrap(), vec![1, 2, 0, 0, 0]);
    }

    #[test]
    fn dual_of_commutator() {
        // coordinates: v1v1, v1v2, v2v1, v2v2
        let dual = koszul_dual(2, &[vec_of(&[0, 1, -1, 0])]).unwrap();
        assert_eq!(dual.relations().len(), 3);
        let expected = [vec_of(&[1, 0, 0, 0]), vec_of(&[0, 0, 0, 1]), vec_of(&[0, 1, 1, 0])];
        let all: Vec<Vec<BigRational>> = dual.relations().iter().cloned().chain(expected.iter().cloned()).collect();
        assert_eq!(rank(Rationals, 4, all), 3);
        // exterior algebra on two generators
        assert_eq!(dual.weight_dims(4).unwrap(), vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn dependent_relations_rejected() {
        let r = vec_of(&[0, 1, -1, 0]);
        let err = koszul_dual(2, &[r.clone(), r]).unwrap_err();
        assert_eq!(err, Error::DependentRelations { rank: 1, count: 2 });
    }

    #[test]
    fn weight3_of_full_and_empty_relations() {
        let all: Vec<Vec<BigRational>> = (0..4).map(|i| (0..4).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
        assert_eq!(weight3_dim(2, &all).unwrap(), 0);
        assert_eq!(weight3_dim(1, &[]).unwrap(), 1);
    }

    #[test]
    fn polynomial_ring_dims() {
        // commutative polynomials in 2 variables: dims k + 1
        let alg = QuadraticAlgebra::new(Rationals, 2, vec![vec_of(&[0, 1, -1, 0])]).unwrap();
        assert_eq!(alg.weight_dims(6).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
        let f = PrimeField::new(2);
        let alg2 = QuadraticAlgebra::new(f, 2, vec![vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(alg2.weight_dims(6).unwrap(), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn zero_dimensional_space() {
        let alg = QuadraticAlgebra::new(Rationals, 0, vec![]).unwrap();
        assert_eq!(alg.weight_dims(3).unwrap(), vec![1, 0, 0, 0]);
    }
}
