//! Evaluation of iterated Itô integrals along a sampled path.
//!
//! Words are evaluated jointly over their prefix closure: `I_ε = 1` and
//! `I_{ua}` integrates `I_u` against the letter `a`. For pure-jump
//! families every `I_u` is a polynomial in `t` between jumps (the time
//! coordinate of a letter integrates polynomials; at a jump event each
//! letter increments by its counter coordinate and
//! `I_{ua} += I_u(s-)·ΔI_a`), so with rational jump times the whole
//! evaluation is exact rational arithmetic. Diffusive families use an
//! Euler left-point scheme on the Brownian grid, with jump events
//! inserted between grid points at their exact times; only the
//! Brownian/drift interplay carries discretization error.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::Word;
use crate::alphabet::Alphabet;
use crate::levy::Basis;
use crate::rational::{to_f64, Rational};

use super::sample::PathRecord;
use super::PathError;

/// Result of a single-word evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum IteratedValue {
    Exact(Rational),
    Grid(f64),
}

impl IteratedValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            IteratedValue::Exact(r) => to_f64(r),
            IteratedValue::Grid(x) => *x,
        }
    }
}

/// Scalar abstraction so the event-driven evaluator runs both exactly
/// and in floating point.
pub(crate) trait PathScalar: Clone + num_traits::Zero + num_traits::One {
    fn add_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_usize(&self, k: usize) -> Self;
    fn from_rational(r: &Rational) -> Self;
}

impl PathScalar for f64 {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_usize(&self, k: usize) -> Self {
        self / k as f64
    }
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

impl PathScalar for Rational {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_usize(&self, k: usize) -> Self {
        self / Rational::from_integer(k.into())
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Prefix-closed word set with parent links; index 0 is the empty word,
/// parents precede children.
pub(crate) struct WordIndex {
    pub words: Vec<Word>,
    pub parent: Vec<usize>,
    /// Slot into the letter-coordinate table for the last letter.
    pub last: Vec<usize>,
    pub index_of: HashMap<Word, usize>,
    pub letters: Vec<crate::algebra::LetterId>,
}

impl WordIndex {
    pub fn build(targets: &[Word]) -> WordIndex {
        let mut set: std::collections::BTreeSet<Word> = std::collections::BTreeSet::new();
        for w in targets {
            for k in 0..=w.len() {
                set.insert(w.prefix(k));
            }
        }
        let mut words: Vec<Word> = set.into_iter().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index_of: HashMap<Word, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut letters = Vec::new();
        let mut slot_of = HashMap::new();
        let mut parent = vec![0usize; words.len()];
        let mut last = vec![0usize; words.len()];
        for (i, w) in words.iter().enumerate().skip(1) {
            let (init, a) = w.split_last().expect("nonempty");
            parent[i] = index_of[&init];
            last[i] = *slot_of.entry(a).or_insert_with(|| {
                letters.push(a);
                letters.len() - 1
            });
        }
        WordIndex { words, parent, last, index_of, letters }
    }
}

/// Per-letter coordinates split by basis kind.
pub(crate) struct LetterCoords {
    pub time: Rational,
    /// `(process, coefficient)` over Brownian drivers.
    pub brownian: Vec<(usize, Rational)>,
    /// `(process, atom) -> jump size contribution`.
    pub jump: HashMap<(usize, usize), Rational>,
}

pub(crate) fn letter_coords(
    alpha: &Alphabet,
    widx: &WordIndex,
) -> Result<Vec<LetterCoords>, PathError> {
    widx.letters
        .iter()
        .map(|&id| {
            let v = alpha
                .vector(id)?
                .ok_or_else(|| PathError::NoCoordinateForm(alpha.table().label(id)))?;
            let mut c = LetterCoords {
                time: Rational::zero(),
                brownian: Vec::new(),
                jump: HashMap::new(),
            };
            for (b, coef) in v.coords() {
                match b {
                    Basis::Time => c.time = coef.clone(),
                    Basis::Brownian(i) => c.brownian.push((*i, coef.clone())),
                    Basis::Counter(i, j) => {
                        c.jump.insert((*i, *j), coef.clone());
                    }
                }
            }
            Ok(c)
        })
        .collect()
}

/// Event-driven evaluation for families without a Brownian grid.
/// Between jumps every `I_u` is a polynomial in local time; jumps apply
/// left-limit updates.
pub(crate) fn event_driven_eval<S: PathScalar>(
    path: &PathRecord,
    widx: &WordIndex,
    coords: &[LetterCoords],
) -> Vec<S> {
    let n = widx.words.len();
    let mut vals: Vec<S> = vec![S::zero(); n];
    vals[0] = S::one();
    let mut cur: Rational = Zero::zero();

    let mut boundaries: Vec<(Rational, Option<usize>)> = path
        .jump_events
        .iter()
        .enumerate()
        .map(|(k, e)| (e.time.clone(), Some(k)))
        .collect();
    boundaries.push((path.horizon.clone(), None));

    for (time, event) in boundaries {
        let delta = S::from_rational(&(&time - &cur));
        // polynomials in the local segment variable, by increasing length
        let mut polys: Vec<Vec<S>> = Vec::with_capacity(n);
        polys.push(vec![S::one()]);
        for i in 1..n {
            let c_time = &coords[widx.last[i]].time;
            let mut p = vec![vals[i].clone()];
            if !c_time.is_zero() {
                let ct = S::from_rational(c_time);
                let par = &polys[widx.parent[i]];
                p.reserve(par.len());
                for (k, a) in par.iter().enumerate() {
                    p.push(a.div_usize(k + 1).mul_ref(&ct));
                }
            }
            polys.push(p);
        }
        for i in 1..n {
            vals[i] = horner(&polys[i], &delta);
        }
        if let Some(k) = event {
            let e = &path.jump_events[k];
            // left limits: longer words first
            for i in (1..n).rev() {
                if let Some(d) = coords[widx.last[i]].jump.get(&(e.process, e.atom)) {
                    if !d.is_zero() {
                        let inc = vals[widx.parent[i]].mul_ref(&S::from_rational(d));
                        vals[i] = vals[i].add_ref(&inc);
                    }
                }
            }
        }
        cur = time;
    }
    vals
}

fn horner<S: PathScalar>(p: &[S], x: &S) -> S {
    let mut acc = p.last().cloned().unwrap_or_else(S::zero);
    for a in p.iter().rev().skip(1) {
        acc = acc.mul_ref(x).add_ref(a);
    }
    acc
}

/// Float letter coordinates for the grid scheme.
struct CoordsF {
    time: f64,
    brownian: Vec<(usize, f64)>,
    jump: HashMap<(usize, usize), f64>,
}

/// Euler left-point evaluation on the Brownian grid, with jumps inserted
/// between grid points; the Brownian increment of a step is allocated to
/// sub-segments proportionally to their length.
pub(crate) fn grid_eval(path: &PathRecord, widx: &WordIndex, coords: &[LetterCoords]) -> Vec<f64> {
    let grid = path.brownian_grid.as_ref().expect("grid evaluation needs a Brownian grid");
    let cf: Vec<CoordsF> = coords
        .iter()
        .map(|c| CoordsF {
            time: to_f64(&c.time),
            brownian: c.brownian.iter().map(|(i, r)| (*i, to_f64(r))).collect(),
            jump: c.jump.iter().map(|(k, r)| (*k, to_f64(r))).collect(),
        })
        .collect();

    let n = widx.words.len();
    let mut vals = vec![0.0f64; n];
    vals[0] = 1.0;
    let t_end = to_f64(&path.horizon);
    let dt = grid.dt;
    let jumps: Vec<(f64, usize, usize)> = path
        .jump_events
        .iter()
        .map(|e| (to_f64(&e.time), e.process, e.atom))
        .collect();

    let advance = |vals: &mut Vec<f64>, from: f64, to: f64, step: usize| {
        let len = to - from;
        if len <= 0.0 {
            return;
        }
        let frac = len / dt;
        // letter increments over the sub-segment
        let deltas: Vec<f64> = cf
            .iter()
            .map(|c| {
                let mut d = c.time * len;
                for (proc, coef) in &c.brownian {
                    d += coef * grid.increments[proc - 1][step] * frac;
                }
                d
            })
            .collect();
        for i in (1..n).rev() {
            let d = deltas[widx.last[i]];
            if d != 0.0 {
                vals[i] += vals[widx.parent[i]] * d;
            }
        }
    };

    let mut ev = 0usize;
    for k in 0..grid.n_steps {
        let t0 = k as f64 * dt;
        let t1 = if k + 1 == grid.n_steps { t_end } else { (k + 1) as f64 * dt };
        let mut cur = t0;
        while ev < jumps.len() && jumps[ev].0 <= t1 {
            let (s, proc, atom) = jumps[ev];
            advance(&mut vals, cur, s, k);
            for i in (1..n).rev() {
                if let Some(d) = cf[widx.last[i]].jump.get(&(proc, atom)) {
                    if *d != 0.0 {
                        vals[i] += vals[widx.parent[i]] * d;
                    }
                }
            }
            cur = s;
            ev += 1;
        }
        advance(&mut vals, cur, t1, k);
    }
    vals
}

fn is_pure_jump(alpha: &Alphabet) -> bool {
    alpha.family().iter().all(|s| s.sigma.is_zero())
}

/// Exact values of `I_w(T)` for every requested word; requires a
/// pure-jump family.
pub fn eval_words_exact(
    path: &PathRecord,
    words: &[Word],
    alpha: &Alphabet,
) -> Result<BTreeMap<Word, Rational>, PathError> {
    if !is_pure_jump(alpha) || path.brownian_grid.is_some() {
        return Err(PathError::ExactNeedsPureJump);
    }
    for w in words {
        alpha.table().check_word(w)?;
    }
    let widx = WordIndex::build(words);
    let coords = letter_coords(alpha, &widx)?;
    let vals = event_driven_eval::<Rational>(path, &widx, &coords);
    Ok(words.iter().map(|w| (w.clone(), vals[widx.index_of[w]].clone())).collect())
}

/// Floating-point values of `I_w(T)`: event driven when the path has no
/// Brownian grid, Euler grid evaluation otherwise.
pub fn eval_words_grid(
    path: &PathRecord,
    words: &[Word],
    alpha: &Alphabet,
) -> Result<BTreeMap<Word, f64>, PathError> {
    for w in words {
        alpha.table().check_word(w)?;
    }
    let widx = WordIndex::build(words);
    let coords = letter_coords(alpha, &widx)?;
    let vals = if path.brownian_grid.is_some() {
        grid_eval(path, &widx, &coords)
    } else {
        event_driven_eval::<f64>(path, &widx, &coords)
    };
    Ok(words.iter().map(|w| (w.clone(), vals[widx.index_of[w]])).collect())
}

/// `I_w(T)` along one path: exact rational when the family is pure jump,
/// grid floating point otherwise.
pub fn eval_iterated(
    path: &PathRecord,
    w: &Word,
    alpha: &Alphabet,
) -> Result<IteratedValue, PathError> {
    let words = vec![w.clone()];
    if is_pure_jump(alpha) && path.brownian_grid.is_none() {
        let m = eval_words_exact(path, &words, alpha)?;
        Ok(IteratedValue::Exact(m.into_iter().next().expect("one word").1))
    } else {
        let m = eval_words_grid(path, &words, alpha)?;
        Ok(IteratedValue::Grid(m.into_iter().next().expect("one word").1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::build_alphabet;
    use crate::levy::LevySpec;
    use crate::pathsim::sample::{sample_path, JumpEvent};
    use crate::rational::{rat, ratio};

    fn pm_one_alphabet() -> Alphabet {
        let spec = LevySpec::with_atoms(
            "x1",
            rat(0),
            rat(0),
            rat(2),
            vec![(rat(1), ratio(1, 2)), (rat(-1), ratio(1, 2))],
        );
        build_alphabet(&[spec], 6).unwrap()
    }

    fn manual_path(events: Vec<(Rational, usize)>) -> PathRecord {
        PathRecord {
            horizon: rat(1),
            jump_events: events
                .into_iter()
                .map(|(time, atom)| JumpEvent { time, process: 1, atom })
                .collect(),
            brownian_grid: None,
            seed: 0,
        }
    }

    #[test]
    fn unit_and_time_words() {
        let a = pm_one_alphabet();
        let path = manual_path(vec![]);
        let eps = a.word_from_labels("ε").unwrap();
        let t = a.word_from_labels("t").unwrap();
        let m = eval_words_exact(&path, &[eps.clone(), t.clone()], &a).unwrap();
        assert_eq!(m[&eps], rat(1));
        assert_eq!(m[&t], rat(1));
    }

    #[test]
    fn jump_sum_with_zero_drift() {
        // jumps +1 at 1/2 and -1 at 3/4: I_(x1) = 0
        let a = pm_one_alphabet();
        let path = manual_path(vec![(ratio(1, 2), 1), (ratio(3, 4), 2)]);
        let x = a.word_from_labels("x1").unwrap();
        let m = eval_words_exact(&path, std::slice::from_ref(&x), &a).unwrap();
        assert_eq!(m[&x], rat(0));
    }

    #[test]
    fn mixed_time_and_jump_integrals() {
        // one +1 jump at s = 1/2, horizon 1:
        // I_(t.x1) = s, I_(x1.t) = 1 - s
        let a = pm_one_alphabet();
        let path = manual_path(vec![(ratio(1, 2), 1)]);
        let tx = a.word_from_labels("t.x1").unwrap();
        let xt = a.word_from_labels("x1.t").unwrap();
        let m = eval_words_exact(&path, &[tx.clone(), xt.clone()], &a).unwrap();
        assert_eq!(m[&tx], ratio(1, 2));
        assert_eq!(m[&xt], ratio(1, 2));
    }

    #[test]
    fn square_identity_on_a_manual_path() {
        // X^2 = 2 I_(x1.x1) + I_(x1^2) pathwise
        let a = pm_one_alphabet();
        let path = manual_path(vec![(ratio(1, 4), 1), (ratio(1, 2), 1), (ratio(7, 8), 2)]);
        let x = a.word_from_labels("x1").unwrap();
        let xx = a.word_from_labels("x1.x1").unwrap();
        let b = a.word_from_labels("x1^2").unwrap();
        let m = eval_words_exact(&path, &[x.clone(), xx.clone(), b.clone()], &a).unwrap();
        assert_eq!(m[&x], rat(1));
        assert_eq!(m[&xx], rat(-1));
        assert_eq!(m[&b], rat(3));
        assert_eq!(&m[&x] * &m[&x], rat(2) * &m[&xx] + &m[&b]);
    }

    #[test]
    fn jump_exactly_at_horizon_counts() {
        let a = pm_one_alphabet();
        let path = manual_path(vec![(rat(1), 1)]);
        let x = a.word_from_labels("x1").unwrap();
        let m = eval_words_exact(&path, std::slice::from_ref(&x), &a).unwrap();
        assert_eq!(m[&x], rat(1));
    }

    #[test]
    fn exact_mode_rejects_diffusive_families() {
        let spec = LevySpec::continuous("x1", rat(0), rat(1));
        let a = build_alphabet(std::slice::from_ref(&spec), 6).unwrap();
        let path = sample_path(&[spec], &rat(1), 3, Some(&ratio(1, 10))).unwrap();
        let x = a.word_from_labels("x1").unwrap();
        assert!(matches!(
            eval_words_exact(&path, &[x], &a),
            Err(PathError::ExactNeedsPureJump)
        ));
    }

    #[test]
    fn grid_integration_by_parts_is_close() {
        // W^2 vs 2 I_(x1.x1) + I_t on a modest grid
        let spec = LevySpec::continuous("x1", rat(0), rat(1));
        let a = build_alphabet(std::slice::from_ref(&spec), 6).unwrap();
        let path = sample_path(&[spec], &rat(1), 11, Some(&ratio(1, 1000))).unwrap();
        let x = a.word_from_labels("x1").unwrap();
        let xx = a.word_from_labels("x1.x1").unwrap();
        let t = a.word_from_labels("t").unwrap();
        let m = eval_words_grid(&path, &[x.clone(), xx.clone(), t.clone()], &a).unwrap();
        assert!((m[&t] - 1.0).abs() < 1e-12);
        let lhs = m[&x] * m[&x];
        let rhs = 2.0 * m[&xx] + m[&t];
        assert!((lhs - rhs).abs() < 0.2, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn eval_iterated_picks_the_arithmetic_mode() {
        let a = pm_one_alphabet();
        let path = manual_path(vec![(ratio(1, 2), 1)]);
        let x = a.word_from_labels("x1").unwrap();
        match eval_iterated(&path, &x, &a).unwrap() {
            IteratedValue::Exact(v) => assert_eq!(v, rat(1)),
            other => panic!("expected exact value, got {other:?}"),
        }
        let spec = LevySpec::continuous("x1", rat(0), rat(1));
        let ad = build_alphabet(std::slice::from_ref(&spec), 6).unwrap();
        let pd = sample_path(&[spec], &rat(1), 3, Some(&ratio(1, 10))).unwrap();
        let t = ad.word_from_labels("t").unwrap();
        match eval_iterated(&pd, &t, &ad).unwrap() {
            IteratedValue::Grid(v) => assert!((v - 1.0).abs() < 1e-12),
            other => panic!("expected grid value, got {other:?}"),
        }
    }

    #[test]
    fn float_event_driven_matches_exact() {
        let a = pm_one_alphabet();
        let path = manual_path(vec![(ratio(1, 3), 1), (ratio(2, 3), 2)]);
        let words: Vec<Word> = ["x1", "x1.x1", "t.x1", "x1^2.t"]
            .iter()
            .map(|s| a.word_from_labels(s).unwrap())
            .collect();
        let exact = eval_words_exact(&path, &words, &a).unwrap();
        let float = eval_words_grid(&path, &words, &a).unwrap();
        for w in &words {
            assert!((to_f64(&exact[w]) - float[w]).abs() < 1e-12);
        }
    }
}
