//! Teugels martingales: Gram matrix of sharp brackets, strong
//! orthogonalization, degeneracy detection, and span expansion.
//!
//! The compensated power-jump processes `Y^(n)` of a Lévy process carry
//! the inner product `⟨Y^(i), Y^(j)⟩_t = (α_{i+j} + σ²·1_{i=j=1})·t`.
//! Everything decidable about linear spans of power brackets lives in
//! this moment algebra: Gram–Schmidt in coefficient space produces the
//! strongly orthogonal `H^(n)` together with their norms `h_n`, the first
//! vanishing norm marks the onset of degeneracy, and projections onto the
//! nonzero `H^(i)` expand higher power brackets over lower ones. This is
//! the moment-only route; it must agree with coordinate reduction
//! ([`crate::levy::reduce_against`]) whenever the spec has coordinates.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::levy::{moment, LevyError, LevySpec};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TeugelsError {
    #[error(transparent)]
    Levy(#[from] LevyError),
    #[error("matrix is not symmetric positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),
    #[error("inconsistent moment data: h_{zero} = 0 but h_{nonzero} != 0; no measure realizes these moments")]
    InconsistentMoments { zero: usize, nonzero: usize },
    #[error("no degeneracy within truncation order {0}")]
    DegeneracyNotFound(usize),
    #[error("span expansion needs order n >= k0 = {k0}, got {got}")]
    OrderBelowDegeneracy { k0: usize, got: usize },
    #[error("residual norm is nonzero: the target is not in the span (inconsistent moments)")]
    NotInSpan,
}

/// `G[i][j] = α_{i+j} + σ²·1_{i=j=1}` for `1 <= i, j <= n` (stored 0-based).
pub fn gram_matrix(spec: &LevySpec, n: usize) -> Result<Vec<Vec<Rational>>, TeugelsError> {
    let mut g = vec![vec![Rational::zero(); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = moment(spec, i + j + 2)?;
        }
    }
    if n > 0 {
        let s2 = &spec.sigma * &spec.sigma;
        g[0][0] += s2;
    }
    Ok(g)
}

/// Result of strong orthogonalization of the Teugels martingales.
///
/// Rows of `c` express `Y^(n) = Σ_{i<=n} c[n][i]·H^(i)` with unit
/// diagonal; `h[n]` is the coefficient of `t` in `⟨H^(n), H^(n)⟩`.
/// Degenerate steps (`h[k] = 0`) record a zero projection coefficient
/// rather than dropping dimensions, so `c` stays square lower-triangular
/// and the exact factorization `G = C·diag(h)·Cᵀ` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramData {
    n: usize,
    gram: Vec<Vec<Rational>>,
    c: Vec<Vec<Rational>>,
    h: Vec<Rational>,
    // rows of H over the Y basis (the inverse triangle of c)
    y_rows: Vec<Vec<Rational>>,
}

impl GramData {
    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn c_matrix(&self) -> &[Vec<Rational>] {
        &self.c
    }

    /// `h[k]` for the 1-based order `k`.
    pub fn norm(&self, order: usize) -> &Rational {
        &self.h[order - 1]
    }

    pub fn norms(&self) -> &[Rational] {
        &self.h
    }

    /// Least 1-based order `k` with `h_k = 0`, within the truncation.
    pub fn first_zero_index(&self) -> Option<usize> {
        self.h.iter().position(Rational::is_zero).map(|i| i + 1)
    }
}

/// Gram–Schmidt in coefficient space over the `Y` basis.
pub fn strong_orthogonalize(g: &[Vec<Rational>]) -> Result<GramData, TeugelsError> {
    let n = g.len();
    for (i, row) in g.iter().enumerate() {
        if row.len() != n {
            return Err(TeugelsError::NotPositiveSemidefinite("matrix is not square".into()));
        }
        for (j, cell) in row.iter().enumerate() {
            if *cell != g[j][i] {
                return Err(TeugelsError::NotPositiveSemidefinite("matrix is not symmetric".into()));
            }
        }
    }

    // inner product of two Y-coefficient vectors under G
    let ip = |a: &[Rational], b: &[Rational]| -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                acc += ai * bj * &g[i][j];
            }
        }
        acc
    };

    let mut c = vec![vec![Rational::zero(); n]; n];
    let mut h: Vec<Rational> = Vec::with_capacity(n);
    let mut y_rows: Vec<Vec<Rational>> = Vec::with_capacity(n);

    for row in 0..n {
        let mut d = vec![Rational::zero(); n];
        d[row] = Rational::from_integer(1.into());
        for k in 0..row {
            // ⟨Y_row, H_k⟩ = Σ_j d_k[j]·G[row][j]
            let cross: Rational = y_rows[k]
                .iter()
                .enumerate()
                .map(|(j, dj)| dj * &g[row][j])
                .sum();
            if h[k].is_zero() {
                if !cross.is_zero() {
                    return Err(TeugelsError::NotPositiveSemidefinite(format!(
                        "zero-norm direction H_{} has nonzero inner product with Y_{}",
                        k + 1,
                        row + 1
                    )));
                }
                // degenerate step: record a zero coefficient
                continue;
            }
            let coeff = cross / &h[k];
            for j in 0..n {
                let delta = &coeff * &y_rows[k][j];
                d[j] -= delta;
            }
            c[row][k] = coeff;
        }
        c[row][row] = Rational::from_integer(1.into());
        let norm = ip(&d, &d);
        if norm.is_negative() {
            return Err(TeugelsError::NotPositiveSemidefinite(format!(
                "negative norm at order {}",
                row + 1
            )));
        }
        h.push(norm);
        y_rows.push(d);
    }

    // monotone degeneracy: once h_k = 0 every later norm must vanish;
    // moment data violating this is realized by no measure
    if let Some(k) = h.iter().position(Rational::is_zero) {
        for (m, hm) in h.iter().enumerate().skip(k + 1) {
            if !hm.is_zero() {
                return Err(TeugelsError::InconsistentMoments { zero: k + 1, nonzero: m + 1 });
            }
        }
    }

    Ok(GramData { n, gram: g.to_vec(), c, h, y_rows })
}

/// Builds the Gram data of a spec directly.
pub fn gram_data(spec: &LevySpec, n: usize) -> Result<GramData, TeugelsError> {
    strong_orthogonalize(&gram_matrix(spec, n)?)
}

/// Expands `[X]^(n)` over `{t, [X]^(1), ..., [X]^(k0-1)}` where `k0` is
/// the first degenerate order of `gd`. Returns the coefficient list
/// `[c_t, c_1, ..., c_{k0-1}]`.
///
/// The route is moment-only: project `Y^(n)` onto the nonzero `H^(i)`,
/// convert back to the `Y` basis, then restore the deterministic `t`
/// parts via `[X]^(i) = Y^(i) + δ_i·t` with `δ_1 = drift` and
/// `δ_i = α_i + σ²·1_{i=2}` for `i >= 2`.
pub fn span_expansion(
    spec: &LevySpec,
    n: usize,
    gd: &GramData,
) -> Result<Vec<Rational>, TeugelsError> {
    let k0 = gd
        .first_zero_index()
        .ok_or(TeugelsError::DegeneracyNotFound(gd.truncation()))?;
    if n < k0 {
        return Err(TeugelsError::OrderBelowDegeneracy { k0, got: n });
    }
    let dim = k0 - 1;

    // ⟨Y_n, Y_j⟩ for 1-based j <= dim; here n >= k0 >= 2 > j is impossible
    // only when j = n, so the σ² correction never applies
    let y_inner = |j: usize| -> Result<Rational, TeugelsError> {
        debug_assert!(j < n);
        Ok(moment(spec, n + j)?)
    };

    // projections onto the nonzero H^(i)
    let mut proj = vec![Rational::zero(); dim];
    for i in 1..=dim {
        let cross: Rational = {
            let mut acc = Rational::zero();
            for (j, dj) in gd.y_rows[i - 1].iter().enumerate().take(dim) {
                if !dj.is_zero() {
                    acc += dj * y_inner(j + 1)?;
                }
            }
            acc
        };
        debug_assert!(!gd.h[i - 1].is_zero(), "orders below k0 have nonzero norms");
        proj[i - 1] = cross / &gd.h[i - 1];
    }

    // back to the Y basis: b_j = Σ_i proj_i · d_i[j]
    let mut b = vec![Rational::zero(); dim];
    for (p, d_row) in proj.iter().zip(&gd.y_rows) {
        if p.is_zero() {
            continue;
        }
        for (bj, dj) in b.iter_mut().zip(d_row) {
            *bj += p * dj;
        }
    }

    // residual norm ⟨r, r⟩ with r = Y_n − Σ b_j Y_j; needs α_{2n}, which a
    // truncated moment sequence may not supply — then Lemma-style
    // persistence of degeneracy is the guarantee and the check is skipped
    if let Ok(ynn) = moment(spec, 2 * n) {
        let mut res = ynn;
        for j in 1..=dim {
            let yj = y_inner(j)?;
            res -= Rational::from_integer(2.into()) * &b[j - 1] * yj;
        }
        for j in 0..dim {
            for l in 0..dim {
                res += &b[j] * &b[l] * &gd.gram[j][l];
            }
        }
        if !res.is_zero() {
            return Err(TeugelsError::NotInSpan);
        }
    }

    // restore the deterministic t parts
    let sigma2 = &spec.sigma * &spec.sigma;
    let delta = |order: usize| -> Result<Rational, TeugelsError> {
        if order == 1 {
            Ok(spec.drift.clone())
        } else {
            let mut d = moment(spec, order)?;
            if order == 2 {
                d += &sigma2;
            }
            Ok(d)
        }
    };
    let mut c_t = delta(n)?;
    for j in 1..=dim {
        c_t -= &b[j - 1] * delta(j)?;
    }

    let mut out = Vec::with_capacity(dim + 1);
    out.push(c_t);
    out.extend(b);
    Ok(out)
}
