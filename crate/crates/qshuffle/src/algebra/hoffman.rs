//! The Hoffman exponential and logarithm.
//!
//! Both maps act word by word through compositions of the word length.
//! For `w = a_1 ... a_n` and a composition `(i_1, ..., i_k)` of `n`, the
//! letters are grouped into consecutive blocks of sizes `i_1, ..., i_k`;
//! each block is contracted to a letter combination by the (associative,
//! commutative) bracket, and the contracted blocks are concatenated into
//! length-`k` words. The exponential weighs a composition by
//! `1/(i_1! ... i_k!)`, the logarithm by `(-1)^(n-k)/(i_1 ... i_k)`.
//! The exponential is an algebra map from the shuffle to the quasi-shuffle
//! product, and the two maps are mutually inverse.

use num_bigint::BigInt;

use crate::rational::{factorial, Rational};

use super::bracket::BracketTable;
use super::poly::Poly;
use super::word::{LetterId, Word};
use super::AlgebraError;

pub fn hoffman_exp(p: &Poly, table: &BracketTable) -> Result<Poly, AlgebraError> {
    table.check_poly(p)?;
    apply(p, table, |comp| {
        let mut denom = Rational::from_integer(1.into());
        for &i in comp {
            denom *= factorial(i);
        }
        Rational::from_integer(1.into()) / denom
    })
}

pub fn hoffman_log(p: &Poly, table: &BracketTable) -> Result<Poly, AlgebraError> {
    table.check_poly(p)?;
    apply(p, table, |comp| {
        let n: usize = comp.iter().sum();
        let k = comp.len();
        let mut denom = BigInt::from(1);
        for &i in comp {
            denom *= BigInt::from(i);
        }
        let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
        Rational::new(BigInt::from(sign), denom)
    })
}

fn apply(
    p: &Poly,
    table: &BracketTable,
    weight: impl Fn(&[usize]) -> Rational,
) -> Result<Poly, AlgebraError> {
    let mut out = Poly::zero();
    for (w, c) in p.terms() {
        let image = apply_word(w, table, &weight)?;
        out.add_scaled_assign(&image, c);
    }
    Ok(out)
}

fn apply_word(
    w: &Word,
    table: &BracketTable,
    weight: &impl Fn(&[usize]) -> Rational,
) -> Result<Poly, AlgebraError> {
    if w.is_empty() {
        return Ok(Poly::one());
    }
    let n = w.len();
    let mut out = Poly::zero();
    for comp in compositions(n) {
        let coeff = weight(&comp);
        // contract each block to a letter combination
        let mut blocks: Vec<Poly> = Vec::with_capacity(comp.len());
        let mut pos = 0;
        for &size in &comp {
            blocks.push(contract_block(&w.letters()[pos..pos + size], table)?);
            pos += size;
        }
        // multilinear concatenation of the blocks
        let mut acc: Vec<(Word, Rational)> = vec![(Word::empty(), coeff)];
        for block in &blocks {
            let mut next = Vec::with_capacity(acc.len() * block.num_terms());
            for (prefix, c) in &acc {
                for (bw, bc) in block.terms() {
                    next.push((prefix.concat(bw), c * bc));
                }
            }
            acc = next;
        }
        for (word, c) in acc {
            out.add_term(word, &c);
        }
    }
    Ok(out)
}

/// Iterated bracket of a block of letters; a single letter is itself.
fn contract_block(letters: &[LetterId], table: &BracketTable) -> Result<Poly, AlgebraError> {
    let mut acc = Poly::from_letter(letters[0]);
    for &next in &letters[1..] {
        acc = table.bracket_linear(&acc, &Poly::from_letter(next))?;
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// All compositions of `n` in lexicographic first-part-major order.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = Vec::with_capacity(rest.len() + 1);
            c.push(first);
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::product::{quasi_shuffle, shuffle};
    use crate::algebra::word::Letter;
    use crate::rational::{rat, ratio};

    fn ids(v: &[u32]) -> Word {
        Word::from_letters(v.iter().map(|&i| LetterId(i)))
    }

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

    #[test]
    fn compositions_count_is_power_of_two() {
        assert_eq!(compositions(0).len(), 1);
        assert_eq!(compositions(1), vec![vec![1]]);
        assert_eq!(compositions(4).len(), 8);
    }

    #[test]
    fn exp_fixes_letters() {
        let t = table_ab_c();
        let a = Poly::from_letter(LetterId(0));
        assert_eq!(hoffman_exp(&a, &t).unwrap(), a);
        assert_eq!(hoffman_log(&a, &t).unwrap(), a);
    }

    #[test]
    fn exp_of_ab_adds_half_bracket() {
        // exp(ab) = ab + 1/2 [a,b] = ab + 1/2 c
        let t = table_ab_c();
        let e = hoffman_exp(&Poly::from_word(ids(&[0, 1])), &t).unwrap();
        assert_eq!(
            e,
            Poly::from_terms(vec![(ids(&[0, 1]), rat(1)), (ids(&[2]), ratio(1, 2))])
        );
        // log inverts it
        assert_eq!(hoffman_log(&e, &t).unwrap(), Poly::from_word(ids(&[0, 1])));
    }

    #[test]
    fn exp_is_homomorphism_at_length_one() {
        // exp(a ⧢ b) = exp(ab + ba) = ab + ba + [a,b] = a * b
        let t = table_ab_c();
        let a = Poly::from_letter(LetterId(0));
        let b = Poly::from_letter(LetterId(1));
        let lhs = hoffman_exp(&shuffle(&a, &b), &t).unwrap();
        let rhs = quasi_shuffle(&a, &b, &t).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_log_round_trip_on_longer_words() {
        let t = table_ab_c();
        for w in [ids(&[0, 1, 0]), ids(&[1, 1, 0, 0]), ids(&[0, 0, 0])] {
            let p = Poly::from_word(w);
            let e = hoffman_exp(&p, &t).unwrap();
            assert_eq!(hoffman_log(&e, &t).unwrap(), p);
            let l = hoffman_log(&p, &t).unwrap();
            assert_eq!(hoffman_exp(&l, &t).unwrap(), p);
        }
    }
}
