//! Lyndon words over a graded alphabet and the Lyndon basis of the Lie
//! algebra `L(V, R)` of a single bracket relation.
//!
//! Enumeration walks the tree of prenecklaces (Fredricksen–Kessler–Maiorana)
//! with homological degree as the bound instead of length, so letters of
//! different degrees are handled directly.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::algebra::{Alphabet, NCPoly, Word};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Rationals};
use crate::rewrite::QuadraticPresentation;

/// A Lyndon word with its standard factorization `l = l1 l2`, where `l2` is
/// the longest proper Lyndon suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonWord {
    word: Word,
    factorization: Option<(Box<LyndonWord>, Box<LyndonWord>)>,
}

impl LyndonWord {
    pub fn new(word: Word) -> Option<Self> {
        if !is_lyndon(word.letters()) {
            return None;
        }
        let factorization = standard_split(word.letters()).map(|i| {
            let left = LyndonWord::new(Word(word.0[..i].to_vec())).expect("standard prefix is Lyndon");
            let right = LyndonWord::new(Word(word.0[i..].to_vec())).expect("standard suffix is Lyndon");
            (Box::new(left), Box::new(right))
        });
        Some(LyndonWord { word, factorization })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn factorization(&self) -> Option<(&LyndonWord, &LyndonWord)> {
        self.factorization.as_ref().map(|(a, b)| (a.as_ref(), b.as_ref()))
    }
}

/// Strictly smaller than every proper rotation.
pub fn is_lyndon(w: &[u8]) -> bool {
    if w.is_empty() {
        return false;
    }
    let n = w.len();
    (1..n).all(|i| {
        let rotated = w[i..].iter().chain(&w[..i]);
        w.iter().cmp(rotated) == std::cmp::Ordering::Less
    })
}

/// Split point of the standard factorization, `None` for a single letter.
pub fn standard_split(w: &[u8]) -> Option<usize> {
    (1..w.len()).find(|&i| is_lyndon(&w[i..]))
}

/// Depth-first walk over prenecklaces of degree `<= cap` avoiding the
/// optional bigram; calls `visit(word, degree)` on every Lyndon word, in
/// lexicographic order.
fn walk_lyndon(alphabet: &Alphabet, cap: u32, exclusion: Option<[u8; 2]>, visit: &mut impl FnMut(&[u8], u32)) {
    let degrees: Vec<u32> = alphabet.letters().iter().map(|l| l.degree).collect();
    // a[0] is a sentinel equal to the smallest letter
    let mut a: Vec<u8> = vec![0];
    fn go(
        a: &mut Vec<u8>,
        t: usize,
        p: usize,
        degree: u32,
        degrees: &[u32],
        cap: u32,
        exclusion: Option<[u8; 2]>,
        visit: &mut impl FnMut(&[u8], u32),
    ) {
        let start = a[t - p];
        for j in start..degrees.len() as u8 {
            let d = degree + degrees[j as usize];
            if d > cap {
                continue;
            }
            if t >= 2 && exclusion == Some([a[t - 1], j]) {
                continue;
            }
            a.push(j);
            let period = if j == start { p } else { t };
            if period == t {
                visit(&a[1..], d);
            }
            go(a, t + 1, period, d, degrees, cap, exclusion, visit);
            a.pop();
        }
    }
    if !degrees.is_empty() {
        go(&mut a, 1, 1, 0, &degrees, cap, exclusion, visit);
    }
}

/// Lyndon words of degree `<= cap`, grouped by degree (index 0 is empty)
/// and sorted lexicographically within each degree.
pub fn enumerate_lyndon(alphabet: &Alphabet, cap: u32) -> Vec<Vec<LyndonWord>> {
    enumerate_lyndon_avoiding(alphabet, cap, None)
}

pub fn enumerate_lyndon_avoiding(alphabet: &Alphabet, cap: u32, exclusion: Option<[u8; 2]>) -> Vec<Vec<LyndonWord>> {
    let mut out: Vec<Vec<LyndonWord>> = vec![Vec::new(); cap as usize + 1];
    walk_lyndon(alphabet, cap, exclusion, &mut |w, d| {
        out[d as usize].push(LyndonWord::new(Word(w.to_vec())).expect("walk yields Lyndon words"));
    });
    out
}

/// Number of Lyndon words per degree `0..=cap`, without materializing them.
pub fn count_lyndon(alphabet: &Alphabet, cap: u32, exclusion: Option<[u8; 2]>) -> Vec<u64> {
    let mut counts = vec![0u64; cap as usize + 1];
    walk_lyndon(alphabet, cap, exclusion, &mut |_, d| counts[d as usize] += 1);
    counts
}

/// A Lyndon word together with its bracketing `b(l)` expanded in `T(V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieBasisElement {
    pub lyndon: LyndonWord,
    pub bracketing: NCPoly,
    pub degree: u32,
    /// Dimension of the sphere whose loop space carries this generator.
    pub sphere_dim: u32,
    /// Display name of the Whitehead product including this summand.
    pub whitehead_label: String,
}

/// `b(a) = a`, `b(l1 l2) = [b(l1), b(l2)]`.
pub fn bracketing(alphabet: &Arc<Alphabet>, l: &LyndonWord) -> NCPoly {
    match l.factorization() {
        None => NCPoly::word(alphabet.clone(), l.word().clone()),
        Some((left, right)) => {
            let a = bracketing(alphabet, left);
            let b = bracketing(alphabet, right);
            a.bracket(&b).expect("same alphabet")
        }
    }
}

pub fn bracket_of(alphabet: &Arc<Alphabet>, l: &LyndonWord) -> LieBasisElement {
    let bracketing = bracketing(alphabet, l);
    let degree = alphabet.degree(l.word());
    LieBasisElement {
        whitehead_label: format!("lambda[{}]", render_bracket(alphabet, l)),
        lyndon: l.clone(),
        bracketing,
        degree,
        sphere_dim: degree + 1,
    }
}

/// `[u1,[u1,u2]]`-style rendering of the bracketing.
pub fn render_bracket(alphabet: &Alphabet, l: &LyndonWord) -> String {
    match l.factorization() {
        None => alphabet.render(l.word()),
        Some((a, b)) => format!("[{},{}]", render_bracket(alphabet, a), render_bracket(alphabet, b)),
    }
}

/// The bigram excluded from standard Lyndon words: among the bracket
/// monomials `ab` (`a < b`) of the relation, the largest for the
/// length-then-reverse-lex order, i.e. the lexicographically smallest.
/// `None` for the free algebra.
pub fn exclusion_bigram(p: &QuadraticPresentation) -> Result<Option<[u8; 2]>> {
    let Some(relation) = p.relation() else {
        return Ok(None);
    };
    let mut bracket_monomials = Vec::new();
    for (w, c) in relation.terms() {
        let (a, b) = (w.0[0], w.0[1]);
        if a == b {
            return Err(Error::NotALieRelation);
        }
        let partner = relation.coefficient(&Word(vec![b, a]));
        if (c + &partner) != BigRational::zero() {
            return Err(Error::NotALieRelation);
        }
        if a < b {
            bracket_monomials.push([a, b]);
        }
    }
    Ok(bracket_monomials.into_iter().min())
}

/// Standard Lyndon words of degree `<= cap` with their bracketings, grouped
/// by degree.
pub fn standard_lyndon(p: &QuadraticPresentation, cap: u32) -> Result<Vec<Vec<LieBasisElement>>> {
    let exclusion = exclusion_bigram(p)?;
    let alphabet = p.alphabet();
    Ok(enumerate_lyndon_avoiding(alphabet, cap, exclusion)
        .into_iter()
        .map(|words| words.iter().map(|l| bracket_of(alphabet, l)).collect())
        .collect())
}

/// `dims[w]` = number of standard Lyndon words of degree `w` (`dims[0] = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieDimTable {
    pub dims: Vec<u64>,
}

impl LieDimTable {
    pub fn cap(&self) -> u32 {
        self.dims.len() as u32 - 1
    }
}

pub fn lie_dims(p: &QuadraticPresentation, cap: u32) -> Result<LieDimTable> {
    let exclusion = exclusion_bigram(p)?;
    Ok(LieDimTable { dims: count_lyndon(p.alphabet(), cap, exclusion) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRank {
    pub degree: u32,
    pub standard_words: usize,
    pub irreducible_words: usize,
    pub rank: usize,
}

/// Certifies that the normal forms of `b(l)`, `l` standard, are linearly
/// independent in every degree `1..=cap`.
pub fn independence_certificate(p: &QuadraticPresentation, cap: u32) -> Result<Vec<DegreeRank>> {
    let standard = standard_lyndon(p, cap)?;
    let mut report = Vec::new();
    for degree in 1..=cap {
        let basis = p.irreducible_words(degree);
        let column: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut echelon = Echelon::new(Rationals, basis.len());
        for element in &standard[degree as usize] {
            let nf = p.normal_form(&element.bracketing)?;
            let mut row = vec![BigRational::zero(); basis.len()];
            for (w, c) in nf.terms() {
                row[column[w]] = c.clone();
            }
            echelon.insert(row);
        }
        let entry = DegreeRank {
            degree,
            standard_words: standard[degree as usize].len(),
            irreducible_words: basis.len(),
            rank: echelon.rank(),
        };
        if entry.rank < entry.standard_words {
            return Err(Error::RankDeficient { degree, rank: entry.rank, count: entry.standard_words });
        }
        report.push(entry);
    }
    Ok(report)
}

/// Lex-smallest word of `b(l)` and its coefficient.
pub fn lex_leading(bracketing: &NCPoly) -> Option<(Word, bool)> {
    bracketing.terms().iter().next().map(|(w, c)| (w.clone(), c.abs() == BigRational::from_integer(1.into())))
}
