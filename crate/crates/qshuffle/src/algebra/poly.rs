//! Formal linear combinations of words with exact rational coefficients.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Rational;

use super::word::{LetterId, Word};

/// A finite sparse mapping `Word -> nonzero rational`.
///
/// The canonical-form invariant — no stored coefficient is zero — is
/// maintained by every constructor and operation, so derived equality is
/// equality of canonical term mappings.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Word, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    /// The multiplicative unit: the empty word with coefficient one.
    pub fn one() -> Self {
        Poly::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational::from_integer(1.into()));
        Poly { terms }
    }

    pub fn from_letter(a: LetterId) -> Self {
        Poly::from_word(Word::single(a))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (w, c) in it {
            p.add_term(w, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (w, c) in other.terms() {
            self.add_term(w.clone(), c);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled_assign(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (w, k) in other.terms() {
            self.add_term(w.clone(), &(k * c));
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled_assign(other, &Rational::from_integer((-1).into()));
        out
    }

    pub fn neg(&self) -> Poly {
        self.scaled(&Rational::from_integer((-1).into()))
    }

    pub fn scaled(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    /// Maps every word `w` to `w·a`, keeping coefficients.
    pub fn append_letter(&self, a: LetterId) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(w, c)| (w.appended(a), c.clone())).collect(),
        }
    }

    /// True when every word in the support has length one.
    pub fn is_letter_combination(&self) -> bool {
        self.terms.keys().all(|w| w.len() == 1)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }
}
