//! The bracket table of structure constants.
//!
//! A table stores the letters of one alphabet together with the symmetric
//! bilinear bracket on their span. Entries are linear combinations of
//! letters; an absent entry means zero. Symmetry is enforced by keying
//! entries on the sorted id pair, closure by validating entries on
//! insertion, and associativity by [`BracketTable::validate`].

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::rational::{parse_rational, render_rational, Rational};

use super::poly::Poly;
use super::word::{Letter, LetterId, Word};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable {
    letters: BTreeMap<LetterId, Letter>,
    // canonical letter order (insertion order) for deterministic output
    order: Vec<LetterId>,
    entries: BTreeMap<(LetterId, LetterId), Poly>,
}

fn key(a: LetterId, b: LetterId) -> (LetterId, LetterId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl BracketTable {
    /// A table with the given letters and the all-zero bracket.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self, AlgebraError> {
        let mut map = BTreeMap::new();
        let mut order = Vec::new();
        let mut labels = std::collections::BTreeSet::new();
        for l in letters {
            if l.grade == 0 {
                return Err(AlgebraError::ZeroGrade(l.label));
            }
            if !labels.insert(l.label.clone()) {
                return Err(AlgebraError::DuplicateLetter(l.label));
            }
            if map.insert(l.id, l.clone()).is_some() {
                return Err(AlgebraError::DuplicateLetter(l.label));
            }
            order.push(l.id);
        }
        Ok(BracketTable { letters: map, order, entries: BTreeMap::new() })
    }

    pub fn letters(&self) -> impl Iterator<Item = &Letter> {
        self.order.iter().map(|id| &self.letters[id])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn contains(&self, id: LetterId) -> bool {
        self.letters.contains_key(&id)
    }

    pub fn letter(&self, id: LetterId) -> Result<&Letter, AlgebraError> {
        self.letters
            .get(&id)
            .ok_or_else(|| AlgebraError::UnknownLetter(format!("#{}", id.0)))
    }

    pub fn label(&self, id: LetterId) -> String {
        match self.letters.get(&id) {
            Some(l) => l.label.clone(),
            None => format!("#{}", id.0),
        }
    }

    pub fn by_label(&self, label: &str) -> Option<LetterId> {
        self.letters.values().find(|l| l.label == label).map(|l| l.id)
    }

    pub fn grade(&self, id: LetterId) -> Result<u32, AlgebraError> {
        Ok(self.letter(id)?.grade)
    }

    /// Word grade: sum of letter grades, zero for the empty word.
    pub fn word_grade(&self, w: &Word) -> Result<u32, AlgebraError> {
        let mut g = 0;
        for &a in w.letters() {
            g += self.grade(a)?;
        }
        Ok(g)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), AlgebraError> {
        for &a in w.letters() {
            self.letter(a)?;
        }
        Ok(())
    }

    pub fn check_poly(&self, p: &Poly) -> Result<(), AlgebraError> {
        for (w, _) in p.terms() {
            self.check_word(w)?;
        }
        Ok(())
    }

    /// Sets `[a, b] = [b, a] = p`; `p` must be a linear combination of
    /// letters of this alphabet. A zero `p` clears the entry.
    pub fn set_entry(&mut self, a: LetterId, b: LetterId, p: Poly) -> Result<(), AlgebraError> {
        self.letter(a)?;
        self.letter(b)?;
        if !p.is_letter_combination() {
            return Err(AlgebraError::EntryNotLinear(self.label(a), self.label(b)));
        }
        self.check_poly(&p)?;
        if p.is_zero() {
            self.entries.remove(&key(a, b));
        } else {
            self.entries.insert(key(a, b), p);
        }
        Ok(())
    }

    pub fn entry_ref(&self, a: LetterId, b: LetterId) -> Option<&Poly> {
        self.entries.get(&key(a, b))
    }

    /// `[a, b]` as a polynomial; zero when no entry is stored.
    pub fn entry(&self, a: LetterId, b: LetterId) -> Result<Poly, AlgebraError> {
        self.letter(a)?;
        self.letter(b)?;
        Ok(self.entry_ref(a, b).cloned().unwrap_or_else(Poly::zero))
    }

    /// Nonzero entries with `a <= b` in id order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (LetterId, LetterId, &Poly)> {
        self.entries.iter().map(|(&(a, b), p)| (a, b, p))
    }

    /// Bilinear extension of the bracket to letter combinations.
    pub fn bracket_linear(&self, p: &Poly, q: &Poly) -> Result<Poly, AlgebraError> {
        let mut out = Poly::zero();
        for (wp, cp) in p.terms() {
            let a = single_letter(wp)?;
            for (wq, cq) in q.terms() {
                let b = single_letter(wq)?;
                if let Some(e) = self.entry_ref(a, b) {
                    out.add_scaled_assign(e, &(cp * cq));
                }
            }
        }
        Ok(out)
    }

    /// Checks `[a, [b, c]] = [[a, b], c]` over all letter triples.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        for &a in &self.order {
            let pa = Poly::from_letter(a);
            for &b in &self.order {
                let pb = Poly::from_letter(b);
                for &c in &self.order {
                    let pc = Poly::from_letter(c);
                    let left = self.bracket_linear(&pa, &self.bracket_linear(&pb, &pc)?)?;
                    let right = self.bracket_linear(&self.bracket_linear(&pa, &pb)?, &pc)?;
                    if left != right {
                        return Err(AlgebraError::NotAssociative(
                            self.label(a),
                            self.label(b),
                            self.label(c),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical term order: grade ascending, then word length descending,
    /// then lexicographic on letter ids.
    pub fn cmp_words(&self, v: &Word, w: &Word) -> Ordering {
        let gv = self.word_grade(v).unwrap_or(u32::MAX);
        let gw = self.word_grade(w).unwrap_or(u32::MAX);
        gv.cmp(&gw)
            .then(w.len().cmp(&v.len()))
            .then_with(|| v.letters().cmp(w.letters()))
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<String> = w.letters().iter().map(|&a| self.label(a)).collect();
        parts.join(".")
    }

    /// Canonical text rendering, e.g. `2 (x1.x1) + 1 (t)`.
    pub fn render_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Word, &Rational)> = p.terms().collect();
        terms.sort_by(|(v, _), (w, _)| self.cmp_words(v, w));
        let mut out = String::new();
        for (i, (w, c)) in terms.iter().enumerate() {
            let neg = crate::rational::is_negative(c);
            let mag = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&render_rational(&mag));
            out.push_str(" (");
            out.push_str(&self.render_word(w));
            out.push(')');
        }
        out
    }

    pub fn poly_to_dto(&self, p: &Poly) -> PolyDto {
        let mut terms: Vec<(&Word, &Rational)> = p.terms().collect();
        terms.sort_by(|(v, _), (w, _)| self.cmp_words(v, w));
        PolyDto {
            terms: terms
                .into_iter()
                .map(|(w, c)| TermDto {
                    coeff: render_rational(c),
                    word: w.letters().iter().map(|&a| self.label(a)).collect(),
                })
                .collect(),
        }
    }

    pub fn poly_from_dto(&self, dto: &PolyDto) -> Result<Poly, AlgebraError> {
        let mut p = Poly::zero();
        for t in &dto.terms {
            let c = parse_rational(&t.coeff)
                .map_err(|e| AlgebraError::MalformedPoly(e.to_string()))?;
            let mut ids = Vec::with_capacity(t.word.len());
            for label in &t.word {
                let id = self
                    .by_label(label)
                    .ok_or_else(|| AlgebraError::UnknownLetter(label.clone()))?;
                ids.push(id);
            }
            p.add_term(Word::from_letters(ids), &c);
        }
        Ok(p)
    }

    /// Parses a dot-joined word like `x1.x1.t`; `""` and `"ε"` denote the
    /// empty word.
    pub fn word_from_labels(&self, s: &str) -> Result<Word, AlgebraError> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Word::empty());
        }
        let mut ids = Vec::new();
        for label in s.split('.') {
            let id = self
                .by_label(label.trim())
                .ok_or_else(|| AlgebraError::UnknownLetter(label.trim().to_string()))?;
            ids.push(id);
        }
        Ok(Word::from_letters(ids))
    }
}

fn single_letter(w: &Word) -> Result<LetterId, AlgebraError> {
    if w.len() == 1 {
        Ok(w.letters()[0])
    } else {
        Err(AlgebraError::MalformedPoly(format!(
            "expected a single-letter word, got length {}",
            w.len()
        )))
    }
}

/// JSON form of one polynomial term.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermDto {
    pub coeff: String,
    pub word: Vec<String>,
}

/// JSON form of a polynomial, terms in canonical order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyDto {
    pub terms: Vec<TermDto>,
}
