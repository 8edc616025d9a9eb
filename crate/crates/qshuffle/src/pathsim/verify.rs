//! Pathwise verification of `I_v · I_w = I_{quasi_shuffle(v, w)}`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{quasi_shuffle, Poly, Word};
use crate::alphabet::Alphabet;
use crate::rational::{to_f64, Rational};

use super::eval::{event_driven_eval, grid_eval, letter_coords, WordIndex};
use super::sample::sample_path;
use super::{substream, PathError};

/// Aggregate error report of one verification run.
///
/// `exact` records the arithmetic mode; when set, evaluation was rational
/// end to end and the isomorphism forces `max_abs_error == 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub n_paths: usize,
    pub max_abs_error: f64,
    pub rms_error: f64,
    pub exact: bool,
}

impl std::fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "paths: {}  max |error|: {:e}  rms error: {:e}  exact: {}",
            self.n_paths, self.max_abs_error, self.rms_error, self.exact
        )
    }
}

/// Sampling and arithmetic parameters of a verification run.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub n_paths: usize,
    pub horizon: Rational,
    pub seed: u64,
    pub dt: Option<Rational>,
    /// Rational arithmetic end to end; requires a pure-jump family.
    pub exact: bool,
}

/// Verifies one product identity over `n_paths` sampled paths.
pub fn verify_product(
    v: &Word,
    w: &Word,
    alpha: &Alphabet,
    params: &VerifyParams,
) -> Result<ErrorReport, PathError> {
    let mut reports = verify_products(&[(v.clone(), w.clone())], alpha, params)?;
    Ok(reports.pop().expect("one pair"))
}

/// Verifies many product identities over one shared set of paths. The
/// per-pair reports are identical to separate [`verify_product`] calls
/// with the same parameters: paths depend only on the seed and family,
/// never on the word pair.
pub fn verify_products(
    pairs: &[(Word, Word)],
    alpha: &Alphabet,
    params: &VerifyParams,
) -> Result<Vec<ErrorReport>, PathError> {
    if params.n_paths == 0 {
        return Err(PathError::NoPaths);
    }
    let family = alpha.family();
    let diffusive = family.iter().any(|s| s.sigma.is_positive());
    if params.exact && diffusive {
        return Err(PathError::ExactNeedsPureJump);
    }

    struct Prepared {
        left: usize,
        right: usize,
        terms: Vec<(usize, Rational)>,
    }

    let mut all_words: Vec<Word> = Vec::new();
    let mut products: Vec<Poly> = Vec::with_capacity(pairs.len());
    for (v, w) in pairs {
        let p = quasi_shuffle(
            &Poly::from_word(v.clone()),
            &Poly::from_word(w.clone()),
            alpha.table(),
        )?;
        all_words.push(v.clone());
        all_words.push(w.clone());
        all_words.extend(p.terms().map(|(u, _)| u.clone()));
        products.push(p);
    }
    let widx = WordIndex::build(&all_words);
    let coords = letter_coords(alpha, &widx)?;
    let prepared: Vec<Prepared> = pairs
        .iter()
        .zip(&products)
        .map(|((v, w), p)| Prepared {
            left: widx.index_of[v],
            right: widx.index_of[w],
            terms: p.terms().map(|(u, c)| (widx.index_of[u], c.clone())).collect(),
        })
        .collect();

    let m = pairs.len();
    if params.exact {
        let mut max = vec![Rational::zero(); m];
        let mut sumsq = vec![Rational::zero(); m];
        for k in 0..params.n_paths {
            let path =
                sample_path(family, &params.horizon, substream(params.seed, k as u64), None)?;
            let vals = event_driven_eval::<Rational>(&path, &widx, &coords);
            for (i, prep) in prepared.iter().enumerate() {
                let mut rhs = Rational::zero();
                for (idx, c) in &prep.terms {
                    rhs += c * &vals[*idx];
                }
                let err = (&vals[prep.left] * &vals[prep.right] - rhs).abs();
                sumsq[i] += &err * &err;
                if err > max[i] {
                    max[i] = err;
                }
            }
        }
        Ok((0..m)
            .map(|i| ErrorReport {
                n_paths: params.n_paths,
                max_abs_error: to_f64(&max[i]),
                rms_error: to_f64(&sumsq[i]).max(0.0).sqrt() / (params.n_paths as f64).sqrt(),
                exact: true,
            })
            .collect())
    } else {
        let mut max = vec![0.0f64; m];
        let mut sumsq = vec![NeumaierSum::default(); m];
        for k in 0..params.n_paths {
            let path = sample_path(
                family,
                &params.horizon,
                substream(params.seed, k as u64),
                params.dt.as_ref(),
            )?;
            let vals = if path.brownian_grid.is_some() {
                grid_eval(&path, &widx, &coords)
            } else {
                event_driven_eval::<f64>(&path, &widx, &coords)
            };
            for (i, prep) in prepared.iter().enumerate() {
                let mut rhs = 0.0;
                for (idx, c) in &prep.terms {
                    rhs += to_f64(c) * vals[*idx];
                }
                let err = (vals[prep.left] * vals[prep.right] - rhs).abs();
                if err > max[i] {
                    max[i] = err;
                }
                sumsq[i].add(err * err);
            }
        }
        Ok((0..m)
            .map(|i| ErrorReport {
                n_paths: params.n_paths,
                max_abs_error: max[i],
                rms_error: (sumsq[i].value() / params.n_paths as f64).max(0.0).sqrt(),
                exact: false,
            })
            .collect())
    }
}

/// Neumaier compensated summation, so aggregation is insensitive to
/// path ordering at double precision.
#[derive(Clone, Copy, Default)]
struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
