//! Weighted alphabets, words and noncommutative polynomials with exact
//! rational coefficients: the tensor algebra `T(V)` on a graded basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient type used throughout.
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 1-based position in the alphabet order.
    pub index: usize,
    pub degree: u32,
    pub label: String,
}

/// A totally ordered, graded alphabet. Letter `i` (0-based) is smaller than
/// letter `j` iff `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let letters: Vec<Letter> = letters
            .into_iter()
            .enumerate()
            .map(|(i, (label, degree))| Letter { index: i + 1, degree, label: label.into() })
            .collect();
        if letters.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!("{} letters (max 255)", letters.len())));
        }
        if let Some(l) = letters.iter().find(|l| l.degree == 0) {
            return Err(Error::InvalidAlphabet(format!("letter {} has degree 0", l.label)));
        }
        for (i, a) in letters.iter().enumerate() {
            if letters[..i].iter().any(|b| b.label == a.label) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {}", a.label)));
            }
        }
        Ok(Alphabet { letters })
    }

    /// `q` letters `a < b < c < ...`, all of the given degree.
    pub fn uniform(q: usize, degree: u32) -> Result<Self> {
        let labels = (0..q).map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{}", i + 1)
            }
        });
        Alphabet::new(labels.map(|l| (l, degree)))
    }

    /// Generators of the loop homology of an `(n-1)`-connected `(2n+1)`-manifold:
    /// `u1 < u1' < u2 < u2' < ... < ur < ur'` with degrees `n-1` and `n`.
    pub fn loop_generators(n: u32, r: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidAlphabet(format!("n = {n} must be >= 2")));
        }
        let mut letters = Vec::with_capacity(2 * r as usize);
        for i in 1..=r {
            letters.push((format!("u{i}"), n - 1));
            letters.push((format!("u{i}'"), n));
        }
        Alphabet::new(letters)
    }

    /// Same letters and order, every degree replaced by 1 (weight grading).
    pub fn with_unit_weights(&self) -> Self {
        let letters = self.letters.iter().map(|l| Letter { degree: 1, ..l.clone() }).collect();
        Alphabet { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, position: u8) -> &Letter {
        &self.letters[position as usize]
    }

    pub fn degree_of_letter(&self, position: u8) -> u32 {
        self.letters[position as usize].degree
    }

    pub fn degree(&self, word: &Word) -> u32 {
        word.0.iter().map(|&l| self.degree_of_letter(l)).sum()
    }

    pub fn position(&self, label: &str) -> Option<u8> {
        self.letters.iter().position(|l| l.label == label).map(|p| p as u8)
    }

    /// Parses a word written as whitespace- or `*`-separated labels
    /// (`"u1 u1'"`), or as a concatenation when every label is one character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let pieces: Vec<&str> = text.split(|c: char| c.is_whitespace() || c == '*').filter(|s| !s.is_empty()).collect();
        if pieces.len() > 1 || self.position(text).is_some() {
            let letters = pieces
                .iter()
                .map(|p| self.position(p).ok_or_else(|| Error::InvalidAlphabet(format!("unknown letter {p:?}"))))
                .collect::<Result<Vec<u8>>>()?;
            return Ok(Word(letters));
        }
        if self.letters.iter().all(|l| l.label.chars().count() == 1) {
            let letters = text
                .chars()
                .map(|c| {
                    let s = c.to_string();
                    self.position(&s).ok_or_else(|| Error::InvalidAlphabet(format!("unknown letter {s:?}")))
                })
                .collect::<Result<Vec<u8>>>()?;
            return Ok(Word(letters));
        }
        Err(Error::InvalidAlphabet(format!("cannot parse word {text:?}")))
    }

    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.0.iter().map(|&l| self.letters[l as usize].label.as_str()).collect()
    }
}

/// A word over an alphabet, stored as 0-based letter positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(position: u8) -> Self {
        Word(vec![position])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Positions `i` with `self[i..i+2] == bigram`.
    pub fn bigram_positions(&self, bigram: [u8; 2]) -> impl Iterator<Item = usize> + '_ {
        self.0.windows(2).enumerate().filter(move |(_, w)| w[0] == bigram[0] && w[1] == bigram[1]).map(|(i, _)| i)
    }

    pub fn contains_bigram(&self, bigram: [u8; 2]) -> bool {
        self.bigram_positions(bigram).next().is_some()
    }
}

/// Word orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderScheme {
    /// Plain lexicographic order (a proper prefix is smaller).
    Lex,
    /// Length first (shorter is smaller); equal lengths compare by reversed
    /// lexicographic order, so the lex-smaller word is the larger one.
    LengthReverseLex,
    /// Homological degree first, then `LengthReverseLex`. This is the order
    /// the rewriting system decreases along.
    DegreeLengthReverseLex,
    /// Homological degree, then length, then plain lexicographic order.
    DegreeLengthLex,
}

pub fn compare_words(alphabet: &Alphabet, a: &Word, b: &Word, scheme: OrderScheme) -> Ordering {
    match scheme {
        OrderScheme::Lex => a.cmp(b),
        OrderScheme::LengthReverseLex => a.len().cmp(&b.len()).then_with(|| b.cmp(a)),
        OrderScheme::DegreeLengthReverseLex => alphabet
            .degree(a)
            .cmp(&alphabet.degree(b))
            .then_with(|| compare_words(alphabet, a, b, OrderScheme::LengthReverseLex)),
        OrderScheme::DegreeLengthLex => alphabet
            .degree(a)
            .cmp(&alphabet.degree(b))
            .then_with(|| a.len().cmp(&b.len()))
            .then_with(|| a.cmp(b)),
    }
}

/// Checked comparison for words that might come from different alphabets.
pub fn compare_words_in(
    alphabet: &Alphabet,
    a: (&Alphabet, &Word),
    b: (&Alphabet, &Word),
    scheme: OrderScheme,
) -> Result<Ordering> {
    if a.0 != alphabet || b.0 != alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(compare_words(alphabet, a.1, b.1, scheme))
}

/// A noncommutative polynomial: a finite map `Word -> Coeff` with no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NCPoly {
    alphabet: Arc<Alphabet>,
    terms: BTreeMap<Word, Coeff>,
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}

impl NCPoly {
    pub fn zero(alphabet: Arc<Alphabet>) -> Self {
        NCPoly { alphabet, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: Arc<Alphabet>) -> Self {
        Self::monomial(alphabet, Word::empty(), Coeff::one())
    }

    pub fn monomial(alphabet: Arc<Alphabet>, word: Word, c: Coeff) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(word, c);
        p
    }

    pub fn word(alphabet: Arc<Alphabet>, word: Word) -> Self {
        Self::monomial(alphabet, word, Coeff::one())
    }

    pub fn letter(alphabet: Arc<Alphabet>, position: u8) -> Self {
        Self::word(alphabet, Word::letter(position))
    }

    pub fn from_terms(alphabet: Arc<Alphabet>, terms: impl IntoIterator<Item = (Word, Coeff)>) -> Self {
        let mut p = Self::zero(alphabet);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Parses a signed sum such as `"u1 u1' - u1' u1 + 2/3 u2"` where words
    /// are written as in [`Alphabet::parse_word`].
    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Self> {
        let mut p = Self::zero(alphabet.clone());
        let normalized = text.replace('-', "+-");
        for chunk in normalized.split('+') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (sign, body) = match chunk.strip_prefix('-') {
                Some(rest) => (-Coeff::one(), rest.trim()),
                None => (Coeff::one(), chunk),
            };
            let mut parts = body.splitn(2, char::is_whitespace);
            let first = parts.next().unwrap_or("");
            let (c, word_text) = match first.parse::<BigRational>() {
                Ok(c) => (c, parts.next().unwrap_or("")),
                Err(_) => (Coeff::one(), body),
            };
            p.add_term(alphabet.parse_word(word_text)?, sign * c);
        }
        Ok(p)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Coeff> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &Word) -> Coeff {
        self.terms.get(word).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, word: Word, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
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

    /// Degree of every term, if they all agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|w| self.alphabet.degree(w));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check(&self, other: &NCPoly) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero(self.alphabet.clone());
        }
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        NCPoly { alphabet: self.alphabet.clone(), terms }
    }

    pub fn neg(&self) -> NCPoly {
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), -x)).collect();
        NCPoly { alphabet: self.alphabet.clone(), terms }
    }

    /// Concatenation product, extended bilinearly.
    pub fn mul(&self, other: &NCPoly) -> Result<NCPoly> {
        self.check(other)?;
        let mut out = NCPoly::zero(self.alphabet.clone());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        Ok(out)
    }

    /// Ungraded commutator `pq - qp`.
    pub fn bracket(&self, other: &NCPoly) -> Result<NCPoly> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Largest word under `scheme`, with its coefficient.
    pub fn leading_term(&self, scheme: OrderScheme) -> Option<(&Word, &Coeff)> {
        self.terms.iter().max_by(|a, b| compare_words(&self.alphabet, a.0, b.0, scheme))
    }

    /// Smallest word under `scheme`, with its coefficient.
    pub fn trailing_term(&self, scheme: OrderScheme) -> Option<(&Word, &Coeff)> {
        self.terms.iter().min_by(|a, b| compare_words(&self.alphabet, a.0, b.0, scheme))
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let word = self.alphabet.render(w);
            if magnitude.is_one() {
                write!(f, "{word}")?;
            } else if w.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude} {word}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Arc::new(Alphabet::loop_generators(2, 2).unwrap())
    }

    fn poly(a: &Arc<Alphabet>, s: &str) -> NCPoly {
        NCPoly::parse(a.clone(), s).unwrap()
    }

    #[test]
    fn lex_comparisons() {
        let a = ab();
        let u1 = a.parse_word("u1").unwrap();
        assert_eq!(compare_words(&a, &u1, &u1, OrderScheme::Lex), Ordering::Equal);
        let x = a.parse_word("u1 u2").unwrap();
        let y = a.parse_word("u2 u1").unwrap();
        assert_eq!(compare_words(&a, &x, &y, OrderScheme::Lex), Ordering::Less);
    }

    #[test]
    fn preceq_prefers_lex_smaller_at_equal_length() {
        let a = ab();
        let big = a.parse_word("u1 u1'").unwrap();
        let small = a.parse_word("u2 u2'").unwrap();
        assert_eq!(compare_words(&a, &small, &big, OrderScheme::LengthReverseLex), Ordering::Less);
        let longer = a.parse_word("u2 u2 u2").unwrap();
        assert_eq!(compare_words(&a, &big, &longer, OrderScheme::LengthReverseLex), Ordering::Less);
    }

    #[test]
    fn unit_and_concatenation() {
        let a = ab();
        let p = poly(&a, "u1 u2 - 3 u2'");
        assert_eq!(NCPoly::one(a.clone()).mul(&p).unwrap(), p);
        assert_eq!(p.mul(&NCPoly::one(a.clone())).unwrap(), p);
        let prod = poly(&a, "u1").mul(&poly(&a, "u1'")).unwrap();
        assert_eq!(prod, poly(&a, "u1 u1'"));
    }

    #[test]
    fn bilinear_noncommutative_product() {
        let a = ab();
        let p = poly(&a, "u1 - u2").mul(&poly(&a, "u1 + u2")).unwrap();
        assert_eq!(p, poly(&a, "u1 u1 + u1 u2 - u2 u1 - u2 u2"));
    }

    #[test]
    fn bracket_basics() {
        let a = ab();
        let p = poly(&a, "u1 u2 + 2 u2'");
        assert!(p.bracket(&p).unwrap().is_zero());
        assert_eq!(poly(&a, "u1").bracket(&poly(&a, "u1'")).unwrap(), poly(&a, "u1 u1' - u1' u1"));
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = ab();
        let b = Arc::new(Alphabet::uniform(2, 1).unwrap());
        let p = NCPoly::letter(a, 0);
        let q = NCPoly::letter(b, 0);
        assert_eq!(p.mul(&q), Err(Error::AlphabetMismatch));
        assert_eq!(p.bracket(&q), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn parse_and_display() {
        let a = ab();
        let p = poly(&a, "u1 u1' - u1' u1 + 2/3 u2");
        assert_eq!(p.to_string(), "u1u1' - u1'u1 + 2/3 u2");
        let b = Arc::new(Alphabet::uniform(2, 1).unwrap());
        assert_eq!(poly(&b, "aab - 2 aba + baa").len(), 3);
    }

    #[test]
    fn degrees() {
        let a = ab();
        assert_eq!(a.degree(&a.parse_word("u1 u1' u2").unwrap()), 4);
        assert_eq!(a.degree(&Word::empty()), 0);
        assert_eq!(poly(&a, "u1 u1' - u2").homogeneous_degree(), None);
        assert_eq!(poly(&a, "u1 u1' - u2' u2").homogeneous_degree(), Some(3));
    }

    #[test]
    fn zero_degree_letters_rejected() {
        assert!(Alphabet::new([("x", 0)]).is_err());
        assert!(Alphabet::new([("x", 1), ("x", 2)]).is_err());
    }
}
