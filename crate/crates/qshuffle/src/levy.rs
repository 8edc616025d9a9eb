//! Lévy processes as exact coordinate vectors.
//!
//! A process is described by its decomposition `X = α·t + σ·W + J` with a
//! compensated jump part `J`. When the jump law has finitely many atoms,
//! every power bracket of `X` has an exact coordinate vector over the
//! basis `{T} ∪ {W_i} ∪ {C_{i,j}}`, where `T` is deterministic time, `W_i`
//! the unit-variance Brownian driver of process `i`, and `C_{i,j}` the
//! uncompensated counter of jumps of process `i` with the `j`-th atom
//! size. Linear-span questions then reduce to exact rational Gaussian
//! elimination.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{parse_rational, render_rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LevyError {
    #[error("process `{0}` has no coordinate form (moment-sequence jump law)")]
    NoCoordinateForm(String),
    #[error("moment α_{order} of process `{name}` is unavailable")]
    MomentUnavailable { name: String, order: usize },
    #[error("power-bracket order must be >= {min}, got {got}")]
    InvalidOrder { min: usize, got: usize },
    #[error("invalid Lévy specification `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },
}

/// One jump-size atom of a compound-Poisson law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub size: Rational,
    pub prob: Rational,
}

/// Jump law of a Lévy process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JumpLaw {
    /// Compound Poisson with rate `rate` and finitely many atoms.
    FiniteAtoms { rate: Rational, atoms: Vec<Atom> },
    /// Only the raw moments `α_n = ∫ x^n ν(dx)` are known;
    /// `alpha[0]` is `α_2`, `alpha[1]` is `α_3`, and so on.
    MomentSequence { alpha: Vec<Rational> },
}

/// One Lévy process: `X = drift·t + sigma·W + J` with `J` compensated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevySpec {
    pub name: String,
    pub drift: Rational,
    pub sigma: Rational,
    pub jumps: Option<JumpLaw>,
}

impl LevySpec {
    /// A continuous process `drift·t + sigma·W`.
    pub fn continuous(name: impl Into<String>, drift: Rational, sigma: Rational) -> Self {
        LevySpec { name: name.into(), drift, sigma, jumps: None }
    }

    /// A jump diffusion with a finite-atom jump law.
    pub fn with_atoms(
        name: impl Into<String>,
        drift: Rational,
        sigma: Rational,
        rate: Rational,
        atoms: Vec<(Rational, Rational)>,
    ) -> Self {
        LevySpec {
            name: name.into(),
            drift,
            sigma,
            jumps: Some(JumpLaw::FiniteAtoms {
                rate,
                atoms: atoms.into_iter().map(|(size, prob)| Atom { size, prob }).collect(),
            }),
        }
    }

    /// Converts the raw parametrization `X = raw_drift·t + σW + Σ Y_i`
    /// (uncompensated jumps) to the canonical compensated form via
    /// `drift = raw_drift + λ Σ p_j a_j`.
    pub fn from_raw_drift(
        name: impl Into<String>,
        raw_drift: Rational,
        sigma: Rational,
        rate: Rational,
        atoms: Vec<(Rational, Rational)>,
    ) -> Self {
        let mean: Rational = atoms.iter().map(|(a, p)| a * p).sum();
        let drift = raw_drift + &rate * mean;
        Self::with_atoms(name, drift, sigma, rate, atoms)
    }

    pub fn is_continuous(&self) -> bool {
        self.jumps.is_none()
    }

    pub fn has_coordinates(&self) -> bool {
        !matches!(self.jumps, Some(JumpLaw::MomentSequence { .. }))
    }

    /// `α_1 = λ Σ p_j a_j` — the jump compensation per unit time.
    pub fn jump_mean(&self) -> Rational {
        match &self.jumps {
            Some(JumpLaw::FiniteAtoms { rate, atoms }) => {
                let m: Rational = atoms.iter().map(|a| &a.size * &a.prob).sum();
                rate * m
            }
            _ => Rational::zero(),
        }
    }

    /// Structural validation; position in a family is not checked here.
    pub fn validate(&self) -> Result<(), LevyError> {
        let invalid = |reason: String| LevyError::InvalidSpec { name: self.name.clone(), reason };
        if self.sigma.is_negative() {
            return Err(invalid("sigma must be nonnegative".into()));
        }
        match &self.jumps {
            None => {
                if self.sigma.is_zero() {
                    return Err(invalid(
                        "deterministic process: sigma = 0 and no jump law".into(),
                    ));
                }
            }
            Some(JumpLaw::FiniteAtoms { rate, atoms }) => {
                if !rate.is_positive() {
                    return Err(invalid("jump rate must be positive".into()));
                }
                if atoms.is_empty() {
                    return Err(invalid("finite-atom law needs at least one atom".into()));
                }
                let mut total = Rational::zero();
                for (j, atom) in atoms.iter().enumerate() {
                    if atom.size.is_zero() {
                        return Err(invalid(format!("atom {} has size 0", j + 1)));
                    }
                    if !atom.prob.is_positive() {
                        return Err(invalid(format!("atom {} has nonpositive probability", j + 1)));
                    }
                    for other in &atoms[..j] {
                        if other.size == atom.size {
                            return Err(invalid(format!(
                                "atom size {} repeated",
                                render_rational(&atom.size)
                            )));
                        }
                    }
                    total += &atom.prob;
                }
                if total != Rational::from_integer(1.into()) {
                    return Err(invalid("atom probabilities must sum to 1".into()));
                }
            }
            Some(JumpLaw::MomentSequence { alpha }) => {
                if alpha.is_empty() {
                    return Err(invalid("moment sequence must supply at least α_2".into()));
                }
                if !alpha[0].is_positive() {
                    return Err(invalid("α_2 must be positive for a nontrivial jump part".into()));
                }
            }
        }
        Ok(())
    }
}

/// `α_n = ∫ x^n ν(dx)` for `n >= 2`; zero for continuous processes.
pub fn moment(spec: &LevySpec, n: usize) -> Result<Rational, LevyError> {
    if n < 2 {
        return Err(LevyError::InvalidOrder { min: 2, got: n });
    }
    match &spec.jumps {
        None => Ok(Rational::zero()),
        Some(JumpLaw::FiniteAtoms { rate, atoms }) => {
            let mut acc = Rational::zero();
            for a in atoms {
                acc += &a.prob * num_traits::pow(a.size.clone(), n);
            }
            Ok(rate * acc)
        }
        Some(JumpLaw::MomentSequence { alpha }) => alpha
            .get(n - 2)
            .cloned()
            .ok_or_else(|| LevyError::MomentUnavailable { name: spec.name.clone(), order: n }),
    }
}

/// Basis symbol for process coordinates; the derived order
/// (`T`, then `W_i`, then `C_{i,j}`) is the canonical pivot order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Basis {
    Time,
    /// Brownian driver of the 1-based process index.
    Brownian(usize),
    /// Jump counter of (1-based process index, 1-based atom index).
    Counter(usize, usize),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Time => write!(f, "T"),
            Basis::Brownian(i) => write!(f, "W{i}"),
            Basis::Counter(i, j) => write!(f, "C{i}.{j}"),
        }
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("invalid basis symbol `{s}`");
        if s == "T" {
            return Ok(Basis::Time);
        }
        if let Some(i) = s.strip_prefix('W') {
            return i.parse().map(Basis::Brownian).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('C') {
            let (i, j) = rest.split_once('.').ok_or_else(bad)?;
            let i = i.parse().map_err(|_| bad())?;
            let j = j.parse().map_err(|_| bad())?;
            return Ok(Basis::Counter(i, j));
        }
        Err(bad())
    }
}

/// Exact coordinates of a semimartingale over `{T, W_i, C_{i,j}}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProcessVector {
    coords: BTreeMap<Basis, Rational>,
}

impl ProcessVector {
    pub fn zero() -> Self {
        ProcessVector::default()
    }

    pub fn from_coords(it: impl IntoIterator<Item = (Basis, Rational)>) -> Self {
        let mut v = ProcessVector::zero();
        for (b, c) in it {
            v.add_coord(b, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, b: Basis) -> Rational {
        self.coords.get(&b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&Basis, &Rational)> {
        self.coords.iter()
    }

    pub fn add_coord(&mut self, b: Basis, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let cur = self.coords.entry(b).or_insert_with(Rational::zero);
        *cur += c;
        if cur.is_zero() {
            self.coords.remove(&b);
        }
    }

    pub fn add_scaled_assign(&mut self, other: &ProcessVector, c: &Rational) {
        for (b, k) in other.coords() {
            self.add_coord(*b, &(k * c));
        }
    }

    pub fn scaled(&self, c: &Rational) -> ProcessVector {
        if c.is_zero() {
            return ProcessVector::zero();
        }
        ProcessVector {
            coords: self.coords.iter().map(|(b, k)| (*b, k * c)).collect(),
        }
    }

    pub fn sub(&self, other: &ProcessVector) -> ProcessVector {
        let mut out = self.clone();
        out.add_scaled_assign(other, &Rational::from_integer((-1).into()));
        out
    }
}

impl fmt::Display for ProcessVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(b, c)| format!("{}: {}", b, render_rational(c)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Canonical coordinates of the process itself:
/// `X = drift·T + σ·W_i + Σ_j a_j·C_{i,j} − (λ Σ_j p_j a_j)·T`.
///
/// `process_index` is the 1-based position of the spec in its family.
pub fn canonicalize(spec: &LevySpec, process_index: usize) -> Result<ProcessVector, LevyError> {
    match &spec.jumps {
        Some(JumpLaw::MomentSequence { .. }) => {
            Err(LevyError::NoCoordinateForm(spec.name.clone()))
        }
        None => {
            let mut v = ProcessVector::zero();
            v.add_coord(Basis::Time, &spec.drift);
            v.add_coord(Basis::Brownian(process_index), &spec.sigma);
            Ok(v)
        }
        Some(JumpLaw::FiniteAtoms { atoms, .. }) => {
            let mut v = ProcessVector::zero();
            v.add_coord(Basis::Time, &(&spec.drift - spec.jump_mean()));
            v.add_coord(Basis::Brownian(process_index), &spec.sigma);
            for (j, atom) in atoms.iter().enumerate() {
                v.add_coord(Basis::Counter(process_index, j + 1), &atom.size);
            }
            Ok(v)
        }
    }
}

/// Coordinates of the power bracket `[X]^(n)`:
/// `n = 1` is the process itself, `n >= 2` is
/// `σ²·1_{n=2}·T + Σ_j a_j^n·C_{i,j}`.
pub fn power_bracket_vector(
    spec: &LevySpec,
    process_index: usize,
    n: usize,
) -> Result<ProcessVector, LevyError> {
    if n == 0 {
        return Err(LevyError::InvalidOrder { min: 1, got: 0 });
    }
    if n == 1 {
        return canonicalize(spec, process_index);
    }
    if !spec.has_coordinates() {
        return Err(LevyError::NoCoordinateForm(spec.name.clone()));
    }
    let mut v = ProcessVector::zero();
    if n == 2 {
        v.add_coord(Basis::Time, &(&spec.sigma * &spec.sigma));
    }
    if let Some(JumpLaw::FiniteAtoms { atoms, .. }) = &spec.jumps {
        for (j, atom) in atoms.iter().enumerate() {
            v.add_coord(
                Basis::Counter(process_index, j + 1),
                &num_traits::pow(atom.size.clone(), n),
            );
        }
    }
    Ok(v)
}

/// Quadratic covariation on coordinates: bilinear extension of
/// `[T, ·] = 0`, `[W_i, W_i] = T`, `[C_{i,j}, C_{i,j}] = C_{i,j}`,
/// and zero for all other basis pairs (independence).
pub fn bracket_vectors(u: &ProcessVector, v: &ProcessVector) -> ProcessVector {
    let mut out = ProcessVector::zero();
    for (bu, cu) in u.coords() {
        for (bv, cv) in v.coords() {
            let image = match (bu, bv) {
                (Basis::Brownian(i), Basis::Brownian(j)) if i == j => Some(Basis::Time),
                (Basis::Counter(i, j), Basis::Counter(k, l)) if i == k && j == l => {
                    Some(Basis::Counter(*i, *j))
                }
                _ => None,
            };
            if let Some(b) = image {
                out.add_coord(b, &(cu * cv));
            }
        }
    }
    out
}

/// Outcome of a linear reduction attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// The target is not in the linear span of the basis.
    Independent,
    /// `target = Σ c_k · basis_k` with these exact coefficients.
    Coefficients(Vec<Rational>),
}

/// Exact Gaussian elimination with deterministic pivoting (first nonzero
/// coordinate in canonical basis order). When the system is solvable but
/// underdetermined, free coefficients are set to zero.
pub fn reduce_against(target: &ProcessVector, basis: &[ProcessVector]) -> Reduction {
    let mut symbols: std::collections::BTreeSet<Basis> = target.coords().map(|(b, _)| *b).collect();
    for v in basis {
        symbols.extend(v.coords().map(|(b, _)| *b));
    }
    let symbols: Vec<Basis> = symbols.into_iter().collect();
    let m = symbols.len();
    let n = basis.len();
    if m == 0 {
        // zero target: trivially in the span with zero coefficients
        return Reduction::Coefficients(vec![Rational::zero(); n]);
    }
    // rows: symbols in canonical order; columns: basis vectors, then target
    let mut mat: Vec<Vec<Rational>> = symbols
        .iter()
        .map(|&s| {
            let mut row: Vec<Rational> = basis.iter().map(|v| v.coord(s)).collect();
            row.push(target.coord(s));
            row
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot_row) = (rank..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot_row);
        let p = mat[rank][col].clone();
        for x in &mut mat[rank] {
            *x /= &p;
        }
        let pivot = mat[rank].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, pc) in row.iter_mut().zip(&pivot) {
                    *x -= pc * &f;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    // inconsistency: a zero coefficient row with nonzero target entry
    for row in mat.iter().skip(rank) {
        if !row[n].is_zero() {
            return Reduction::Independent;
        }
    }
    let mut coeffs = vec![Rational::zero(); n];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            coeffs[col] = mat[*r][n].clone();
        }
    }
    Reduction::Coefficients(coeffs)
}

/// Canonical JSON form of a jump law.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum JumpLawDto {
    FiniteAtoms { rate: String, atoms: Vec<AtomDto> },
    MomentSequence { alpha: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomDto {
    pub size: String,
    pub prob: String,
}

/// Canonical JSON form of a Lévy spec (compensated drift).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevySpecDto {
    pub name: String,
    pub drift: String,
    pub sigma: String,
    pub jumps: Option<JumpLawDto>,
}

pub fn spec_to_dto(spec: &LevySpec) -> LevySpecDto {
    LevySpecDto {
        name: spec.name.clone(),
        drift: render_rational(&spec.drift),
        sigma: render_rational(&spec.sigma),
        jumps: spec.jumps.as_ref().map(|j| match j {
            JumpLaw::FiniteAtoms { rate, atoms } => JumpLawDto::FiniteAtoms {
                rate: render_rational(rate),
                atoms: atoms
                    .iter()
                    .map(|a| AtomDto {
                        size: render_rational(&a.size),
                        prob: render_rational(&a.prob),
                    })
                    .collect(),
            },
            JumpLaw::MomentSequence { alpha } => JumpLawDto::MomentSequence {
                alpha: alpha.iter().map(render_rational).collect(),
            },
        }),
    }
}

pub fn spec_from_dto(dto: &LevySpecDto) -> Result<LevySpec, LevyError> {
    let bad = |field: &str, e: crate::rational::ParseRationalError| LevyError::InvalidSpec {
        name: dto.name.clone(),
        reason: format!("{field}: {e}"),
    };
    let spec = LevySpec {
        name: dto.name.clone(),
        drift: parse_rational(&dto.drift).map_err(|e| bad("drift", e))?,
        sigma: parse_rational(&dto.sigma).map_err(|e| bad("sigma", e))?,
        jumps: match &dto.jumps {
            None => None,
            Some(JumpLawDto::FiniteAtoms { rate, atoms }) => Some(JumpLaw::FiniteAtoms {
                rate: parse_rational(rate).map_err(|e| bad("jumps.rate", e))?,
                atoms: atoms
                    .iter()
                    .map(|a| {
                        Ok(Atom {
                            size: parse_rational(&a.size).map_err(|e| bad("atom size", e))?,
                            prob: parse_rational(&a.prob).map_err(|e| bad("atom prob", e))?,
                        })
                    })
                    .collect::<Result<Vec<_>, LevyError>>()?,
            }),
            Some(JumpLawDto::MomentSequence { alpha }) => Some(JumpLaw::MomentSequence {
                alpha: alpha
                    .iter()
                    .map(|a| parse_rational(a).map_err(|e| bad("alpha", e)))
                    .collect::<Result<Vec<_>, LevyError>>()?,
            }),
        },
    };
    spec.validate()?;
    Ok(spec)
}

/// JSON form of a coordinate vector: basis symbol to coefficient.
pub fn vector_to_dto(v: &ProcessVector) -> BTreeMap<String, String> {
    v.coords().map(|(b, c)| (b.to_string(), render_rational(c))).collect()
}

pub fn vector_from_dto(dto: &BTreeMap<String, String>) -> Result<ProcessVector, String> {
    let mut v = ProcessVector::zero();
    for (k, c) in dto {
        let b: Basis = k.parse()?;
        let c = parse_rational(c).map_err(|e| e.to_string())?;
        v.add_coord(b, &c);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    pub(crate) fn wiener(name: &str) -> LevySpec {
        LevySpec::continuous(name, rat(0), rat(1))
    }

    /// Compensated standard Poisson: λ=1, single atom of size 1, drift 0.
    pub(crate) fn compensated_poisson() -> LevySpec {
        LevySpec::with_atoms("x1", rat(0), rat(0), rat(1), vec![(rat(1), rat(1))])
    }

    /// λ=2, atoms ±1 with probability 1/2 each.
    pub(crate) fn pm_one() -> LevySpec {
        LevySpec::with_atoms(
            "x1",
            rat(0),
            rat(0),
            rat(2),
            vec![(rat(1), ratio(1, 2)), (rat(-1), ratio(1, 2))],
        )
    }

    #[test]
    fn canonicalize_wiener() {
        let v = canonicalize(&wiener("x1"), 1).unwrap();
        assert_eq!(v, ProcessVector::from_coords(vec![(Basis::Brownian(1), rat(1))]));
    }

    #[test]
    fn canonicalize_compensated_poisson() {
        // α_1 = 1, so X = C - T
        let v = canonicalize(&compensated_poisson(), 1).unwrap();
        assert_eq!(
            v,
            ProcessVector::from_coords(vec![
                (Basis::Counter(1, 1), rat(1)),
                (Basis::Time, rat(-1)),
            ])
        );
    }

    #[test]
    fn canonicalize_pm_one_has_no_time_part() {
        // α_1 = 2(1/2 - 1/2) = 0
        let v = canonicalize(&pm_one(), 1).unwrap();
        assert_eq!(
            v,
            ProcessVector::from_coords(vec![
                (Basis::Counter(1, 1), rat(1)),
                (Basis::Counter(1, 2), rat(-1)),
            ])
        );
    }

    #[test]
    fn moments_of_pm_one() {
        let s = pm_one();
        assert_eq!(moment(&s, 2).unwrap(), rat(2));
        assert_eq!(moment(&s, 3).unwrap(), rat(0));
        assert_eq!(moment(&s, 4).unwrap(), rat(2));
    }

    #[test]
    fn moments_of_standard_poisson_are_one() {
        let s = compensated_poisson();
        for n in 2..=9 {
            assert_eq!(moment(&s, n).unwrap(), rat(1));
        }
    }

    #[test]
    fn moment_bounds() {
        assert!(matches!(moment(&pm_one(), 1), Err(LevyError::InvalidOrder { .. })));
        let ms = LevySpec {
            name: "m".into(),
            drift: rat(0),
            sigma: rat(0),
            jumps: Some(JumpLaw::MomentSequence { alpha: vec![rat(2), rat(6)] }),
        };
        assert_eq!(moment(&ms, 2).unwrap(), rat(2));
        assert_eq!(moment(&ms, 3).unwrap(), rat(6));
        assert!(matches!(moment(&ms, 4), Err(LevyError::MomentUnavailable { .. })));
    }

    #[test]
    fn power_bracket_of_wiener() {
        let s = wiener("x1");
        assert_eq!(
            power_bracket_vector(&s, 1, 2).unwrap(),
            ProcessVector::from_coords(vec![(Basis::Time, rat(1))])
        );
        assert!(power_bracket_vector(&s, 1, 3).unwrap().is_zero());
    }

    #[test]
    fn power_bracket_of_pm_one_order_three_is_x() {
        let s = pm_one();
        assert_eq!(
            power_bracket_vector(&s, 1, 3).unwrap(),
            canonicalize(&s, 1).unwrap()
        );
    }

    #[test]
    fn bracket_of_brownian_drivers() {
        let w1 = ProcessVector::from_coords(vec![(Basis::Brownian(1), rat(1))]);
        let w2 = ProcessVector::from_coords(vec![(Basis::Brownian(2), rat(1))]);
        assert_eq!(
            bracket_vectors(&w1, &w1),
            ProcessVector::from_coords(vec![(Basis::Time, rat(1))])
        );
        assert!(bracket_vectors(&w1, &w2).is_zero());
    }

    #[test]
    fn bracket_squares_coefficients_on_counters() {
        let x = canonicalize(&pm_one(), 1).unwrap();
        assert_eq!(
            bracket_vectors(&x, &x),
            ProcessVector::from_coords(vec![
                (Basis::Counter(1, 1), rat(1)),
                (Basis::Counter(1, 2), rat(1)),
            ])
        );
    }

    #[test]
    fn power_bracket_chains_through_bracket_vectors() {
        // [X]^(n+m) = [[X]^(n), [X]^(m)] on coordinates
        for spec in [pm_one(), compensated_poisson(), wiener("x1")] {
            for n in 1..=4usize {
                for m in 1..=4usize {
                    let lhs = power_bracket_vector(&spec, 1, n + m).unwrap();
                    let rhs = bracket_vectors(
                        &power_bracket_vector(&spec, 1, n).unwrap(),
                        &power_bracket_vector(&spec, 1, m).unwrap(),
                    );
                    assert_eq!(lhs, rhs, "spec {:?} n={} m={}", spec.name, n, m);
                }
            }
        }
    }

    #[test]
    fn reduce_trivial() {
        let t = ProcessVector::from_coords(vec![(Basis::Time, rat(1))]);
        assert_eq!(
            reduce_against(&t, std::slice::from_ref(&t)),
            Reduction::Coefficients(vec![rat(1)])
        );
    }

    #[test]
    fn reduce_compensated_poisson_square_bracket() {
        // [X]^(2) = t + X
        let s = compensated_poisson();
        let target = power_bracket_vector(&s, 1, 2).unwrap();
        let basis = vec![
            ProcessVector::from_coords(vec![(Basis::Time, rat(1))]),
            canonicalize(&s, 1).unwrap(),
        ];
        assert_eq!(
            reduce_against(&target, &basis),
            Reduction::Coefficients(vec![rat(1), rat(1)])
        );
    }

    #[test]
    fn reduce_atoms_one_two_witness() {
        // atoms {1, 2}: [X]^(4) = 0·t - 2·[X]^(2) + 3·[X]^(3)
        let s = LevySpec::with_atoms(
            "x1",
            rat(0),
            rat(0),
            rat(1),
            vec![(rat(1), ratio(1, 2)), (rat(2), ratio(1, 2))],
        );
        let target = power_bracket_vector(&s, 1, 4).unwrap();
        let basis = vec![
            ProcessVector::from_coords(vec![(Basis::Time, rat(1))]),
            power_bracket_vector(&s, 1, 2).unwrap(),
            power_bracket_vector(&s, 1, 3).unwrap(),
        ];
        assert_eq!(
            reduce_against(&target, &basis),
            Reduction::Coefficients(vec![rat(0), rat(-2), rat(3)])
        );
    }

    #[test]
    fn reduce_detects_independence() {
        let s = pm_one();
        let target = power_bracket_vector(&s, 1, 2).unwrap();
        let basis = vec![
            ProcessVector::from_coords(vec![(Basis::Time, rat(1))]),
            canonicalize(&s, 1).unwrap(),
        ];
        assert_eq!(reduce_against(&target, &basis), Reduction::Independent);
    }

    #[test]
    fn vandermonde_independence_of_power_brackets() {
        // k distinct nonzero atoms, σ = 0: [X]^(2), ..., [X]^(k+1) independent
        let s = LevySpec::with_atoms(
            "x1",
            rat(0),
            rat(0),
            rat(1),
            vec![
                (rat(1), ratio(1, 3)),
                (rat(2), ratio(1, 3)),
                (rat(-3), ratio(1, 3)),
            ],
        );
        for n in 2..=4usize {
            let target = power_bracket_vector(&s, 1, n).unwrap();
            let basis: Vec<ProcessVector> = (2..=4usize)
                .filter(|&m| m != n)
                .map(|m| power_bracket_vector(&s, 1, m).unwrap())
                .collect();
            assert_eq!(reduce_against(&target, &basis), Reduction::Independent);
        }
    }

    #[test]
    fn raw_drift_conversion() {
        // uncompensated standard Poisson: raw drift 0 -> canonical drift 1
        let s = LevySpec::from_raw_drift("p", rat(0), rat(0), rat(1), vec![(rat(1), rat(1))]);
        assert_eq!(s.drift, rat(1));
        // X = t + (C - t) = C
        assert_eq!(
            canonicalize(&s, 1).unwrap(),
            ProcessVector::from_coords(vec![(Basis::Counter(1, 1), rat(1))])
        );
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let det = LevySpec::continuous("d", rat(1), rat(0));
        assert!(det.validate().is_err());
        let zero_atom = LevySpec::with_atoms("z", rat(0), rat(0), rat(1), vec![(rat(0), rat(1))]);
        assert!(zero_atom.validate().is_err());
        let bad_probs =
            LevySpec::with_atoms("p", rat(0), rat(0), rat(1), vec![(rat(1), ratio(1, 3))]);
        assert!(bad_probs.validate().is_err());
        let dup = LevySpec::with_atoms(
            "q",
            rat(0),
            rat(0),
            rat(1),
            vec![(rat(1), ratio(1, 2)), (rat(1), ratio(1, 2))],
        );
        assert!(dup.validate().is_err());
        assert!(pm_one().validate().is_ok());
    }
}
