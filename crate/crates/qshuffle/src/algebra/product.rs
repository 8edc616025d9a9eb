//! Quasi-shuffle and shuffle products.
//!
//! Both are bilinear extensions of the word recursion
//! `va * wb = (v * wb)a + (va * w)b + (v * w)[a, b]`;
//! the shuffle product is the specialization with an identically zero
//! bracket. Word pairs are memoized per product call, which turns the
//! exponential re-derivation of shared subproducts into a table lookup.

use std::collections::HashMap;

use super::bracket::BracketTable;
use super::poly::Poly;
use super::word::Word;
use super::AlgebraError;

/// Quasi-shuffle product of two polynomials over the table's alphabet.
pub fn quasi_shuffle(p: &Poly, q: &Poly, table: &BracketTable) -> Result<Poly, AlgebraError> {
    table.check_poly(p)?;
    table.check_poly(q)?;
    product(p, q, Some(table))
}

/// Shuffle product: the quasi-shuffle with the all-zero bracket table.
pub fn shuffle(p: &Poly, q: &Poly) -> Poly {
    product(p, q, None).expect("shuffle cannot fail")
}

fn product(p: &Poly, q: &Poly, table: Option<&BracketTable>) -> Result<Poly, AlgebraError> {
    let mut memo: HashMap<(Word, Word), Poly> = HashMap::new();
    let mut out = Poly::zero();
    for (v, cv) in p.terms() {
        for (w, cw) in q.terms() {
            let prod = word_product(v, w, table, &mut memo)?;
            out.add_scaled_assign(&prod, &(cv * cw));
        }
    }
    Ok(out)
}

fn word_product(
    v: &Word,
    w: &Word,
    table: Option<&BracketTable>,
    memo: &mut HashMap<(Word, Word), Poly>,
) -> Result<Poly, AlgebraError> {
    if v.is_empty() {
        return Ok(Poly::from_word(w.clone()));
    }
    if w.is_empty() {
        return Ok(Poly::from_word(v.clone()));
    }
    // the product is commutative; key on the sorted pair
    let k = if v <= w { (v.clone(), w.clone()) } else { (w.clone(), v.clone()) };
    if let Some(hit) = memo.get(&k) {
        return Ok(hit.clone());
    }
    let (v1, a) = v.split_last().expect("nonempty");
    let (w1, b) = w.split_last().expect("nonempty");

    let mut acc = word_product(&v1, w, table, memo)?.append_letter(a);
    acc.add_assign(&word_product(v, &w1, table, memo)?.append_letter(b));
    if let Some(t) = table {
        if let Some(br) = t.entry_ref(a, b) {
            let inner = word_product(&v1, &w1, table, memo)?;
            for (cw, cc) in br.terms() {
                // bracket entries are letter combinations
                let c = cw.letters()[0];
                acc.add_scaled_assign(&inner.append_letter(c), cc);
            }
        }
    }
    memo.insert(k, acc.clone());
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::word::{Letter, LetterId};
    use crate::rational::rat;

    fn ids(v: &[u32]) -> Word {
        Word::from_letters(v.iter().map(|&i| LetterId(i)))
    }

    fn zero_table() -> BracketTable {
        BracketTable::new(vec![
            Letter::new(0, 1, "a"),
            Letter::new(1, 1, "b"),
            Letter::new(2, 2, "c"),
        ])
        .unwrap()
    }

    fn table_ab_c() -> BracketTable {
        let mut t = zero_table();
        t.set_entry(LetterId(0), LetterId(1), Poly::from_letter(LetterId(2))).unwrap();
        t
    }

    #[test]
    fn shuffle_of_single_letters() {
        let p = shuffle(&Poly::from_letter(LetterId(0)), &Poly::from_letter(LetterId(1)));
        assert_eq!(p, Poly::from_terms(vec![(ids(&[0, 1]), rat(1)), (ids(&[1, 0]), rat(1))]));
    }

    #[test]
    fn shuffle_three_letter_example() {
        // (ab, c) -> abc + acb + cab
        let p = shuffle(&Poly::from_word(ids(&[0, 1])), &Poly::from_letter(LetterId(2)));
        assert_eq!(
            p,
            Poly::from_terms(vec![
                (ids(&[0, 1, 2]), rat(1)),
                (ids(&[0, 2, 1]), rat(1)),
                (ids(&[2, 0, 1]), rat(1)),
            ])
        );
    }

    #[test]
    fn shuffle_unit_law() {
        let w = Poly::from_word(ids(&[0, 1, 2]));
        assert_eq!(shuffle(&Poly::one(), &w), w);
        assert_eq!(shuffle(&w, &Poly::one()), w);
    }

    #[test]
    fn quasi_shuffle_with_zero_bracket_is_shuffle() {
        let t = zero_table();
        let p = Poly::from_letter(LetterId(0));
        let q = Poly::from_letter(LetterId(1));
        assert_eq!(quasi_shuffle(&p, &q, &t).unwrap(), shuffle(&p, &q));
    }

    #[test]
    fn quasi_shuffle_one_step_unfolding() {
        // (a, b) with [a,b] = c -> ab + ba + c
        let t = table_ab_c();
        let p = quasi_shuffle(&Poly::from_letter(LetterId(0)), &Poly::from_letter(LetterId(1)), &t)
            .unwrap();
        assert_eq!(
            p,
            Poly::from_terms(vec![
                (ids(&[0, 1]), rat(1)),
                (ids(&[1, 0]), rat(1)),
                (ids(&[2]), rat(1)),
            ])
        );
    }

    #[test]
    fn wiener_letter_squares_to_2xx_plus_t() {
        // single-Wiener alphabet {x, t} with [x,x] = t: x * x = 2 xx + t
        let mut t = BracketTable::new(vec![Letter::new(0, 1, "x"), Letter::new(1, 2, "t")])
            .unwrap();
        t.set_entry(LetterId(0), LetterId(0), Poly::from_letter(LetterId(1))).unwrap();
        let x = Poly::from_letter(LetterId(0));
        let p = quasi_shuffle(&x, &x, &t).unwrap();
        assert_eq!(
            p,
            Poly::from_terms(vec![(ids(&[0, 0]), rat(2)), (ids(&[1]), rat(1))])
        );
    }

    #[test]
    fn unknown_letter_is_rejected() {
        let t = zero_table();
        let p = Poly::from_letter(LetterId(9));
        assert!(matches!(
            quasi_shuffle(&p, &Poly::one(), &t),
            Err(AlgebraError::UnknownLetter(_))
        ));
    }

    #[test]
    fn bracket_entry_with_combination_expands_bilinearly() {
        // [a,b] = 2c + 3a
        let mut t = zero_table();
        let mut e = Poly::from_letter(LetterId(2)).scaled(&rat(2));
        e.add_assign(&Poly::from_letter(LetterId(0)).scaled(&rat(3)));
        t.set_entry(LetterId(0), LetterId(1), e).unwrap();
        let p = quasi_shuffle(&Poly::from_letter(LetterId(0)), &Poly::from_letter(LetterId(1)), &t)
            .unwrap();
        assert_eq!(p.coeff(&ids(&[2])), rat(2));
        assert_eq!(p.coeff(&ids(&[0])), rat(3));
        assert_eq!(p.coeff(&ids(&[0, 1])), rat(1));
        assert_eq!(p.coeff(&ids(&[1, 0])), rat(1));
    }
}
