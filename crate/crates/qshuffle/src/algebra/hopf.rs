//! The antipode of the quasi-shuffle Hopf algebra.
//!
//! With deconcatenation as the coproduct, the antipode is determined by
//! the convolution identity: for every nonempty word `w`,
//! `sum over uv = w of S(u) * v = 0`. Solving for `S(w)` gives the
//! recursion `S(ε) = ε`, `S(w) = -w - sum over proper splittings uv = w
//! of S(u) * v`, which we evaluate bottom-up over the prefixes of `w`.

use super::bracket::BracketTable;
use super::poly::Poly;
use super::product::quasi_shuffle;
use super::word::Word;
use super::AlgebraError;

pub fn antipode(w: &Word, table: &BracketTable) -> Result<Poly, AlgebraError> {
    table.check_word(w)?;
    // s[k] = S(prefix of length k)
    let mut s: Vec<Poly> = Vec::with_capacity(w.len() + 1);
    s.push(Poly::one());
    for k in 1..=w.len() {
        let wk = w.prefix(k);
        let mut acc = Poly::from_word(wk.clone()).neg();
        for (j, su) in s.iter().enumerate().take(k).skip(1) {
            let (_, v) = wk.split_at(j);
            let term = quasi_shuffle(su, &Poly::from_word(v), table)?;
            acc = acc.sub(&term);
        }
        s.push(acc);
    }
    Ok(s.pop().expect("at least S(ε)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word::{deconcat, Letter, LetterId};
    use crate::rational::rat;

    fn table_ab_c() -> BracketTable {
        let mut t = BracketTable::new(vec![
            Letter::new(0, 1, "a"),
            Letter::new(1, 1, "b"),
            Letter::new(2, 2, "c"),
        ])
        .unwrap();
        t.set_entry(LetterId(0), LetterId(1), Poly::from_letter(LetterId(2))).unwrap();
        t
    }

    fn ids(v: &[u32]) -> Word {
        Word::from_letters(v.iter().map(|&i| LetterId(i)))
    }

    /// Brute-force convolution sum over all splittings of `w`.
    fn convolution(w: &Word, t: &BracketTable) -> Poly {
        let mut acc = Poly::zero();
        for (u, v) in deconcat(w) {
            let su = antipode(&u, t).unwrap();
            acc.add_assign(&quasi_shuffle(&su, &Poly::from_word(v), t).unwrap());
        }
        acc
    }

    #[test]
    fn antipode_of_unit_and_letters() {
        let t = table_ab_c();
        assert_eq!(antipode(&Word::empty(), &t).unwrap(), Poly::one());
        let a = LetterId(0);
        assert_eq!(antipode(&Word::single(a), &t).unwrap(), Poly::from_letter(a).neg());
    }

    #[test]
    fn antipode_of_ab_with_bracket() {
        // S(ab) = -ab - S(a)*b = -ab + (ab + ba + c) = ba + c,
        // confirmed below by the convolution identity.
        let t = table_ab_c();
        let s = antipode(&ids(&[0, 1]), &t).unwrap();
        assert_eq!(
            s,
            Poly::from_terms(vec![(ids(&[1, 0]), rat(1)), (ids(&[2]), rat(1))])
        );
        assert!(convolution(&ids(&[0, 1]), &t).is_zero());
    }

    #[test]
    fn convolution_identity_short_words() {
        let t = table_ab_c();
        for w in [
            ids(&[0]),
            ids(&[1]),
            ids(&[2]),
            ids(&[0, 0]),
            ids(&[0, 1]),
            ids(&[1, 0, 2]),
            ids(&[0, 1, 0, 1]),
        ] {
            assert!(convolution(&w, &t).is_zero(), "convolution failed for {:?}", w);
        }
    }
}
