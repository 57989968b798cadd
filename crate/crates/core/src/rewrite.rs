//! Rewriting modulo a single quadratic relation.
//!
//! A relation `r = x_a x_b - (lower terms)` with `a != b` never overlaps
//! itself, so the one rule `x_a x_b -> lower terms` is confluent and the
//! words avoiding the bigram `x_a x_b` form a basis of `T(V)/(r)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{compare_words, Alphabet, Coeff, NCPoly, OrderScheme, Word};
use crate::error::{Error, Result};

/// Degrees up to which [`hilbert_dims_verified`] also enumerates words.
pub const ENUMERATION_THRESHOLD: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Rewrite the first occurrence of the leading bigram.
    Leftmost,
    /// Rewrite the last occurrence of the leading bigram.
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Relation {
    /// Normalized so the leading word has coefficient 1.
    poly: NCPoly,
    leading: [u8; 2],
    lower_terms: NCPoly,
}

/// `T(V)/(r)` for at most one relation `r` of word-length 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticPresentation {
    alphabet: Arc<Alphabet>,
    relation: Option<Relation>,
    order: OrderScheme,
}

impl QuadraticPresentation {
    /// The tensor algebra itself.
    pub fn free(alphabet: Arc<Alphabet>) -> Self {
        QuadraticPresentation { alphabet, relation: None, order: OrderScheme::DegreeLengthReverseLex }
    }

    /// Uses the degree, length, reverse-lex order; the leading word is the
    /// order-maximal term of `relation`.
    pub fn new(relation: NCPoly) -> Result<Self> {
        Self::with_order(relation, OrderScheme::DegreeLengthReverseLex)
    }

    pub fn with_order(relation: NCPoly, order: OrderScheme) -> Result<Self> {
        let leading = relation
            .leading_term(order)
            .map(|(w, _)| w.clone())
            .ok_or_else(|| Error::InvalidPresentation("zero relation".into()))?;
        Self::with_leading(relation, leading, order)
    }

    /// Explicit leading bigram; every other term must be strictly smaller
    /// under `order`.
    pub fn with_leading(relation: NCPoly, leading: Word, order: OrderScheme) -> Result<Self> {
        let alphabet = relation.alphabet().clone();
        if relation.is_zero() {
            return Err(Error::InvalidPresentation("zero relation".into()));
        }
        if let Some(w) = relation.terms().keys().find(|w| w.len() != 2) {
            return Err(Error::InvalidPresentation(format!(
                "term {} has length {}, expected 2",
                alphabet.render(w),
                w.len()
            )));
        }
        if leading.len() != 2 || leading.0[0] == leading.0[1] {
            return Err(Error::InvalidPresentation(format!(
                "leading word {} must consist of two distinct letters",
                alphabet.render(&leading)
            )));
        }
        let lc = relation.coefficient(&leading);
        if lc.is_zero() {
            return Err(Error::InvalidPresentation(format!(
                "leading word {} does not occur in the relation",
                alphabet.render(&leading)
            )));
        }
        let poly = relation.scale(&lc.recip());
        for w in poly.terms().keys() {
            if *w != leading && compare_words(&alphabet, w, &leading, order) != std::cmp::Ordering::Less {
                return Err(Error::InvalidPresentation(format!(
                    "term {} is not smaller than the leading word {}",
                    alphabet.render(w),
                    alphabet.render(&leading)
                )));
            }
        }
        let lower_terms = NCPoly::word(alphabet.clone(), leading.clone()).sub(&poly)?;
        let leading = [leading.0[0], leading.0[1]];
        Ok(QuadraticPresentation { alphabet, relation: Some(Relation { poly, leading, lower_terms }), order })
    }

    /// `T(u1, u1', ..., ur, ur')/(sum_i u_i u_i' - u_i' u_i)`, the loop
    /// homology of an `(n-1)`-connected `(2n+1)`-manifold with `H_n` of rank `r`.
    pub fn loop_homology(n: u32, r: u32) -> Result<Self> {
        Self::loop_homology_with_sign(n, r, 1)
    }

    /// As [`Self::loop_homology`], with the relation multiplied by `sign`.
    pub fn loop_homology_with_sign(n: u32, r: u32, sign: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::SphereFallback { dim: 2 * n + 1 });
        }
        let alphabet = Arc::new(Alphabet::loop_generators(n, r)?);
        let sigma = sigma_relation(&alphabet, r).scale(&BigRational::from_integer(sign.into()));
        let leading = Word(vec![0, 1]);
        Self::with_leading(sigma, leading, OrderScheme::DegreeLengthReverseLex)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn order(&self) -> OrderScheme {
        self.order
    }

    pub fn relation(&self) -> Option<&NCPoly> {
        self.relation.as_ref().map(|r| &r.poly)
    }

    pub fn leading(&self) -> Option<Word> {
        self.relation.as_ref().map(|r| Word(r.leading.to_vec()))
    }

    pub fn leading_bigram(&self) -> Option<[u8; 2]> {
        self.relation.as_ref().map(|r| r.leading)
    }

    pub fn lower_terms(&self) -> Option<&NCPoly> {
        self.relation.as_ref().map(|r| &r.lower_terms)
    }

    /// The same presentation with every letter in degree 1.
    pub fn with_unit_weights(&self) -> Self {
        let alphabet = Arc::new(self.alphabet.with_unit_weights());
        let relation = self.relation.as_ref().map(|r| Relation {
            poly: NCPoly::from_terms(alphabet.clone(), r.poly.terms().clone()),
            leading: r.leading,
            lower_terms: NCPoly::from_terms(alphabet.clone(), r.lower_terms.terms().clone()),
        });
        QuadraticPresentation { alphabet, relation, order: self.order }
    }

    /// Relation as a vector in the `dim(V)^2` coordinates of `V ⊗ V`
    /// (coordinate `i * dim + j` for `x_i x_j`).
    pub fn relation_vector(&self) -> Option<Vec<BigRational>> {
        let dim = self.alphabet.len();
        self.relation.as_ref().map(|r| {
            let mut v = vec![BigRational::zero(); dim * dim];
            for (w, c) in r.poly.terms() {
                v[w.0[0] as usize * dim + w.0[1] as usize] = c.clone();
            }
            v
        })
    }

    pub fn is_irreducible(&self, word: &Word) -> bool {
        match &self.relation {
            None => true,
            Some(r) => !word.contains_bigram(r.leading),
        }
    }

    pub fn normal_form(&self, p: &NCPoly) -> Result<NCPoly> {
        self.normal_form_with(p, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, p: &NCPoly, strategy: Strategy) -> Result<NCPoly> {
        if !Arc::ptr_eq(p.alphabet(), &self.alphabet) && **p.alphabet() != *self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let Some(rel) = &self.relation else {
            return Ok(NCPoly::from_terms(self.alphabet.clone(), p.terms().clone()));
        };
        let mut work: BTreeMap<Word, Coeff> = p.terms().clone();
        let mut done = NCPoly::zero(self.alphabet.clone());
        loop {
            let next = match strategy {
                Strategy::Leftmost => work.pop_first(),
                Strategy::Rightmost => work.pop_last(),
            };
            let Some((word, c)) = next else { break };
            let position = match strategy {
                Strategy::Leftmost => word.bigram_positions(rel.leading).next(),
                Strategy::Rightmost => word.bigram_positions(rel.leading).last(),
            };
            let Some(i) = position else {
                done.add_term(word, c);
                continue;
            };
            for (lower, lc) in rel.lower_terms.terms() {
                let mut letters = Vec::with_capacity(word.len());
                letters.extend_from_slice(&word.0[..i]);
                letters.extend_from_slice(&lower.0);
                letters.extend_from_slice(&word.0[i + 2..]);
                add_into(&mut work, Word(letters), &c * lc);
            }
        }
        Ok(done)
    }

    /// Dimensions of `A^d` for `d = 0..=cap` by counting irreducible words with
    /// a last-letter transfer matrix.
    pub fn hilbert_dims(&self, cap: u32) -> Result<HilbertTable> {
        let k = self.alphabet.len();
        let degrees: Vec<u32> = (0..k as u8).map(|l| self.alphabet.degree_of_letter(l)).collect();
        let forbidden = self.leading_bigram();
        // by_last[d][j]: irreducible words of degree d ending in letter j
        let mut by_last: Vec<Vec<u128>> = vec![vec![0; k]; cap as usize + 1];
        let mut dims = vec![0u128; cap as usize + 1];
        dims[0] = 1;
        for d in 1..=cap as usize {
            for j in 0..k {
                let dj = degrees[j] as usize;
                if dj > d {
                    continue;
                }
                let prev = d - dj;
                let mut total: u128 = 0;
                if prev == 0 {
                    total = 1;
                } else {
                    for (i, &count) in by_last[prev].iter().enumerate() {
                        if forbidden == Some([i as u8, j as u8]) {
                            continue;
                        }
                        total = total.checked_add(count).ok_or(Error::Overflow(d as u32))?;
                    }
                }
                by_last[d][j] = total;
                dims[d] = dims[d].checked_add(total).ok_or(Error::Overflow(d as u32))?;
            }
        }
        Ok(HilbertTable { dims })
    }

    /// All irreducible words of homological degree exactly `degree`, in lex order.
    pub fn irreducible_words(&self, degree: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_irreducible(degree, &mut current, &mut out);
        out.sort();
        out
    }

    fn extend_irreducible(&self, remaining: u32, current: &mut Vec<u8>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word(current.clone()));
            return;
        }
        for l in 0..self.alphabet.len() as u8 {
            let d = self.alphabet.degree_of_letter(l);
            if d > remaining {
                continue;
            }
            if let (Some(&last), Some(b)) = (current.last(), self.leading_bigram()) {
                if [last, l] == b {
                    continue;
                }
            }
            current.push(l);
            self.extend_irreducible(remaining - d, current, out);
            current.pop();
        }
    }

    /// Koszul shape test for this presentation's relation.
    pub fn is_koszul_single_relation(&self) -> bool {
        match &self.relation {
            None => true,
            Some(r) => is_koszul_single_relation(&r.poly),
        }
    }
}

fn add_into(map: &mut BTreeMap<Word, Coeff>, word: Word, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match map.entry(word) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `sum_i (u_i u_i' - u_i' u_i)` over [`Alphabet::loop_generators`].
pub fn sigma_relation(alphabet: &Arc<Alphabet>, r: u32) -> NCPoly {
    let mut sigma = NCPoly::zero(alphabet.clone());
    for i in 0..r as u8 {
        let (u, v) = (2 * i, 2 * i + 1);
        sigma.add_term(Word(vec![u, v]), Coeff::one());
        sigma.add_term(Word(vec![v, u]), -Coeff::one());
    }
    sigma
}

/// Graded dimensions `dims[d] = dim A^d`, `d = 0..=cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTable {
    pub dims: Vec<u128>,
}

impl HilbertTable {
    pub fn cap(&self) -> u32 {
        self.dims.len() as u32 - 1
    }

    pub fn as_rationals(&self) -> Vec<BigRational> {
        self.dims.iter().map(|&d| BigRational::from_integer(BigInt::from(d))).collect()
    }
}

/// Dimensions by listing every irreducible word.
pub fn enumerated_dims(p: &QuadraticPresentation, cap: u32) -> HilbertTable {
    let dims = (0..=cap).map(|d| p.irreducible_words(d).len() as u128).collect();
    HilbertTable { dims }
}

/// Transfer-matrix dimensions, cross-checked by enumeration for degrees up to
/// [`ENUMERATION_THRESHOLD`].
pub fn hilbert_dims_verified(p: &QuadraticPresentation, cap: u32) -> Result<HilbertTable> {
    let table = p.hilbert_dims(cap)?;
    let enumerated = enumerated_dims(p, cap.min(ENUMERATION_THRESHOLD));
    for (d, (&a, &b)) in table.dims.iter().zip(&enumerated.dims).enumerate() {
        if a != b {
            return Err(Error::InvalidPresentation(format!(
                "degree {d}: transfer matrix gives {a}, enumeration gives {b}"
            )));
        }
    }
    Ok(table)
}

/// True when, for some order of the alphabet, the relation reads
/// `v_i v_j + sum a_kl v_k v_l` with `i != j` and every other term
/// lexicographically smaller (`k < i`, or `k = i` and `l < j`).
pub fn is_koszul_single_relation(relation: &NCPoly) -> bool {
    if relation.is_zero() || relation.terms().keys().any(|w| w.len() != 2) {
        return false;
    }
    let terms: Vec<(u8, u8)> = relation.terms().keys().map(|w| (w.0[0], w.0[1])).collect();
    terms.iter().filter(|(a, b)| a != b).any(|&(a, b)| {
        // constraints x < y required for (a, b) to be the lex-max term
        let mut edges: HashSet<(u8, u8)> = HashSet::new();
        for &(c, d) in &terms {
            if (c, d) == (a, b) {
                continue;
            }
            if c != a {
                edges.insert((c, a));
            } else {
                edges.insert((d, b));
            }
        }
        if edges.iter().any(|(x, y)| x == y) {
            return false;
        }
        is_acyclic(&edges)
    })
}

fn is_acyclic(edges: &HashSet<(u8, u8)>) -> bool {
    let mut indegree: HashMap<u8, usize> = HashMap::new();
    let mut out: HashMap<u8, Vec<u8>> = HashMap::new();
    for &(x, y) in edges {
        indegree.entry(x).or_insert(0);
        *indegree.entry(y).or_insert(0) += 1;
        out.entry(x).or_default().push(y);
    }
    let mut ready: Vec<u8> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &w in out.get(&v).into_iter().flatten() {
            let d = indegree.get_mut(&w).expect("vertex");
            *d -= 1;
            if *d == 0 {
                ready.push(w);
            }
        }
    }
    seen == indegree.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifold(n: u32, r: u32) -> QuadraticPresentation {
        QuadraticPresentation::loop_homology(n, r).unwrap()
    }

    fn poly(p: &QuadraticPresentation, s: &str) -> NCPoly {
        NCPoly::parse(p.alphabet().clone(), s).unwrap()
    }

    #[test]
    fn reversed_bigram_is_already_normal() {
        let p = manifold(2, 1);
        let x = poly(&p, "u1' u1");
        assert_eq!(p.normal_form(&x).unwrap(), x);
    }

    #[test]
    fn leading_bigram_rewrites_to_lower_terms() {
        let p = manifold(2, 2);
        assert_eq!(p.leading(), Some(Word(vec![0, 1])));
        let nf = p.normal_form(&poly(&p, "u1 u1'")).unwrap();
        assert_eq!(nf, poly(&p, "u1' u1 - u2 u2' + u2' u2"));
    }

    #[test]
    fn overlapping_occurrences_agree_across_strategies() {
        let p = manifold(2, 2);
        let x = poly(&p, "u1 u1' u1' + u1 u1 u1' + u1 u1' u1 u1'");
        let left = p.normal_form_with(&x, Strategy::Leftmost).unwrap();
        let right = p.normal_form_with(&x, Strategy::Rightmost).unwrap();
        assert_eq!(left, right);
        assert!(left.terms().keys().all(|w| p.is_irreducible(w)));
        assert_eq!(p.normal_form(&left).unwrap(), left);
    }

    #[test]
    fn irreducibility() {
        let p = manifold(2, 2);
        assert!(p.is_irreducible(&Word::empty()));
        assert!(!p.is_irreducible(&p.alphabet().parse_word("u1 u1' u2").unwrap()));
        assert!(p.is_irreducible(&p.alphabet().parse_word("u1' u1").unwrap()));
    }

    #[test]
    fn abelian_case_dims() {
        let p = manifold(2, 1);
        assert_eq!(p.hilbert_dims(6).unwrap().dims, vec![1, 1, 2, 2, 3, 3, 4]);
        assert_eq!(enumerated_dims(&p, 6).dims, vec![1, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn two_handle_dims() {
        let p = manifold(2, 2);
        assert_eq!(p.hilbert_dims(3).unwrap().dims, vec![1, 2, 6, 15]);
        assert_eq!(hilbert_dims_verified(&p, 10).unwrap().dims[..4], [1, 2, 6, 15]);
    }

    #[test]
    fn free_one_letter() {
        let a = Arc::new(Alphabet::uniform(1, 1).unwrap());
        let p = QuadraticPresentation::free(a);
        assert!(p.hilbert_dims(12).unwrap().dims.iter().all(|&d| d == 1));
    }

    #[test]
    fn koszul_shapes() {
        for r in 1..=4 {
            assert!(manifold(3, r).is_koszul_single_relation());
        }
        let a = Arc::new(Alphabet::uniform(2, 1).unwrap());
        assert!(!is_koszul_single_relation(&NCPoly::parse(a.clone(), "aa").unwrap()));
        assert!(is_koszul_single_relation(&NCPoly::parse(a.clone(), "ab").unwrap()));
        assert!(is_koszul_single_relation(&NCPoly::parse(a.clone(), "ab - ba + aa").unwrap()));
        // only squares: no admissible leading monomial
        assert!(!is_koszul_single_relation(&NCPoly::parse(a, "aa + bb").unwrap()));
    }

    #[test]
    fn invalid_presentations() {
        let a = Arc::new(Alphabet::uniform(2, 1).unwrap());
        let square = NCPoly::parse(a.clone(), "aa - ab").unwrap();
        assert!(QuadraticPresentation::with_leading(square, Word(vec![0, 0]), OrderScheme::DegreeLengthReverseLex).is_err());
        let cubic = NCPoly::parse(a.clone(), "aab").unwrap();
        assert!(QuadraticPresentation::new(cubic).is_err());
        // ba is larger than ab in reverse-lex, so ab cannot lead
        let rel = NCPoly::parse(a, "ab - ba").unwrap();
        let err = QuadraticPresentation::with_leading(rel, Word(vec![1, 0]), OrderScheme::DegreeLengthReverseLex);
        assert!(matches!(err, Err(Error::InvalidPresentation(_))));
        assert!(matches!(QuadraticPresentation::loop_homology(2, 0), Err(Error::SphereFallback { dim: 5 })));
    }

    #[test]
    fn sign_of_sigma_does_not_matter() {
        for (n, r) in [(2, 1), (2, 2), (3, 2)] {
            let plus = QuadraticPresentation::loop_homology_with_sign(n, r, 1).unwrap();
            let minus = QuadraticPresentation::loop_homology_with_sign(n, r, -1).unwrap();
            assert_eq!(plus, minus);
            assert_eq!(plus.hilbert_dims(12).unwrap(), minus.hilbert_dims(12).unwrap());
        }
    }

    #[test]
    fn lex_and_reverse_lex_orders_give_the_same_dims() {
        for (n, r) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
            let canonical = manifold(n, r);
            let sigma = canonical.relation().unwrap().clone();
            let lex = QuadraticPresentation::with_order(sigma, OrderScheme::DegreeLengthLex).unwrap();
            assert_ne!(lex.leading(), canonical.leading());
            assert_eq!(lex.hilbert_dims(12).unwrap(), canonical.hilbert_dims(12).unwrap());
        }
    }
}
