//! Letters and words (the free monoid underlying the algebra).

use std::fmt;

/// Opaque identifier of a letter within one alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub u32);

impl fmt::Debug for LetterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A letter: opaque id, positive grade, display label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub id: LetterId,
    pub grade: u32,
    pub label: String,
}

impl Letter {
    pub fn new(id: u32, grade: u32, label: impl Into<String>) -> Self {
        Letter { id: LetterId(id), grade, label: label.into() }
    }
}

/// A finite ordered sequence of letter ids; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<LetterId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(a: LetterId) -> Self {
        Word(vec![a])
    }

    pub fn from_letters(ids: impl IntoIterator<Item = LetterId>) -> Self {
        Word(ids.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[LetterId] {
        &self.0
    }

    /// Juxtaposition `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn appended(&self, a: LetterId) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    /// Splits off the last letter, `va -> (v, a)`.
    pub fn split_last(&self) -> Option<(Word, LetterId)> {
        let (last, init) = self.0.split_last()?;
        Some((Word(init.to_vec()), *last))
    }

    /// `(prefix of length k, remaining suffix)`; `k <= len`.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(k);
        (Word(a.to_vec()), Word(b.to_vec()))
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|a| a.0.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Juxtaposition of two words; the empty word is the unit.
pub fn concat(v: &Word, w: &Word) -> Word {
    v.concat(w)
}

/// All `|w| + 1` splittings `(u, v)` with `uv = w`, left to right.
pub fn deconcat(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|k| w.split_at(k)).collect()
}
