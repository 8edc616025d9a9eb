//! Trajectory sampling for families of Lévy processes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::levy::{moment, JumpLaw, LevySpec};
use crate::rational::{to_f64, Rational};

use super::{substream, PathError};

/// One jump: exact rational time in `(0, T]`, 1-based process and atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpEvent {
    pub time: Rational,
    pub process: usize,
    pub atom: usize,
}

/// Brownian grid shared by all diffusive processes of a path.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianGrid {
    /// Actual step `T / n_steps`.
    pub dt: f64,
    pub n_steps: usize,
    /// `increments[i-1][k]` is `ΔW_i` on step `k`, scaled by `sqrt(dt)`;
    /// empty for processes with `sigma = 0`.
    pub increments: Vec<Vec<f64>>,
}

/// One sampled trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct PathRecord {
    pub horizon: Rational,
    /// Strictly increasing in time.
    pub jump_events: Vec<JumpEvent>,
    /// Present iff some spec has `sigma > 0`.
    pub brownian_grid: Option<BrownianGrid>,
    pub seed: u64,
}

fn two_pow_64() -> BigInt {
    BigInt::one() << 64
}

/// A rational in `(0, 1]` from a uniform 64-bit draw.
fn unit_fraction(u: u64) -> Rational {
    Rational::new(BigInt::from(u) + 1, two_pow_64())
}

/// A rational in `[0, 1)` from a uniform 64-bit draw.
fn unit_fraction_halfopen(u: u64) -> Rational {
    Rational::new(BigInt::from(u), two_pow_64())
}

/// Samples one path. Jump counts are Poisson(λ·T), jump times uniform on
/// the rational `2^64` grid of `(0, T]`, atoms categorical per their
/// probabilities; Brownian increments are i.i.d. centered Gaussians of
/// variance `dt`. Deterministic given `(seed, family, horizon, dt)`.
pub fn sample_path(
    family: &[LevySpec],
    horizon: &Rational,
    seed: u64,
    dt: Option<&Rational>,
) -> Result<PathRecord, PathError> {
    if !horizon.is_positive() {
        return Err(PathError::NonPositiveHorizon);
    }
    for spec in family {
        if !spec.has_coordinates() {
            return Err(PathError::UnsupportedSpec(spec.name.clone()));
        }
    }
    let diffusive = family.iter().any(|s| s.sigma.is_positive());
    let n_steps = match (diffusive, dt) {
        (true, None) => return Err(PathError::MissingGrid),
        (true, Some(step)) => {
            if !step.is_positive() {
                return Err(PathError::NonPositiveStep);
            }
            grid_steps(horizon, step)
        }
        (false, _) => 0,
    };

    let mut events: Vec<JumpEvent> = Vec::new();
    let mut increments: Vec<Vec<f64>> = Vec::with_capacity(family.len());

    for (i0, spec) in family.iter().enumerate() {
        let idx = i0 + 1;
        let mut rng = ChaCha12Rng::seed_from_u64(substream(seed, idx as u64));

        if let Some(JumpLaw::FiniteAtoms { rate, atoms }) = &spec.jumps {
            let mean = to_f64(rate) * to_f64(horizon);
            let n_jumps = Poisson::new(mean)
                .map(|p| p.sample(&mut rng) as usize)
                .unwrap_or(0);
            // cumulative atom thresholds for the categorical draw
            let mut cumulative: Vec<Rational> = Vec::with_capacity(atoms.len());
            let mut acc = Rational::zero();
            for a in atoms {
                acc += &a.prob;
                cumulative.push(acc.clone());
            }
            for _ in 0..n_jumps {
                let time = horizon * unit_fraction(rng.next_u64());
                let u = unit_fraction_halfopen(rng.next_u64());
                let atom = cumulative.iter().position(|c| u < *c).unwrap_or(atoms.len() - 1);
                events.push(JumpEvent { time, process: idx, atom: atom + 1 });
            }
        }

        if spec.sigma.is_positive() {
            let sqrt_dt = (to_f64(horizon) / n_steps as f64).sqrt();
            let incs: Vec<f64> = (0..n_steps)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * sqrt_dt
                })
                .collect();
            increments.push(incs);
        } else {
            increments.push(Vec::new());
        }
    }

    // simultaneous jumps have probability zero; enforce distinct times by
    // redrawing colliding events from the reserved substream
    events.sort_by(|a, b| a.time.cmp(&b.time).then(a.process.cmp(&b.process)));
    let mut dedup_rng: Option<ChaCha12Rng> = None;
    loop {
        let dup = (1..events.len()).find(|&k| events[k].time == events[k - 1].time);
        let Some(k) = dup else { break };
        let rng =
            dedup_rng.get_or_insert_with(|| ChaCha12Rng::seed_from_u64(substream(seed, 0)));
        events[k].time = horizon * unit_fraction(rng.next_u64());
        events.sort_by(|a, b| a.time.cmp(&b.time).then(a.process.cmp(&b.process)));
    }

    let brownian_grid = if diffusive {
        Some(BrownianGrid {
            dt: to_f64(horizon) / n_steps as f64,
            n_steps,
            increments,
        })
    } else {
        None
    };

    Ok(PathRecord { horizon: horizon.clone(), jump_events: events, brownian_grid, seed })
}

/// `round(T / dt)`, at least 1.
fn grid_steps(horizon: &Rational, dt: &Rational) -> usize {
    let ratio = horizon / dt;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = (ratio + half).floor();
    let n = rounded.to_integer();
    let n: usize = n.try_into().unwrap_or(usize::MAX);
    n.max(1)
}

/// Value of the Teugels martingale `Y^(order)` of one process at the
/// horizon, in floating point:
/// `Y^(1)_T = σ·W_T + Σ jump sizes − α_1·T`, and for `n >= 2`
/// `Y^(n)_T = Σ (jump sizes)^n − α_n·T`.
pub fn teugels_at_horizon(
    path: &PathRecord,
    family: &[LevySpec],
    process: usize,
    order: usize,
) -> Result<f64, PathError> {
    let spec = process
        .checked_sub(1)
        .and_then(|i| family.get(i))
        .ok_or_else(|| PathError::UnsupportedSpec(format!("process index {process}")))?;
    let t = to_f64(&path.horizon);
    let sizes: Vec<f64> = match &spec.jumps {
        Some(JumpLaw::FiniteAtoms { atoms, .. }) => atoms.iter().map(|a| to_f64(&a.size)).collect(),
        Some(JumpLaw::MomentSequence { .. }) => {
            return Err(PathError::UnsupportedSpec(spec.name.clone()))
        }
        None => Vec::new(),
    };
    let jump_sum: f64 = path
        .jump_events
        .iter()
        .filter(|e| e.process == process)
        .map(|e| sizes[e.atom - 1].powi(order as i32))
        .sum();
    if order == 1 {
        let w_t: f64 = path
            .brownian_grid
            .as_ref()
            .map(|g| g.increments[process - 1].iter().sum())
            .unwrap_or(0.0);
        Ok(to_f64(&spec.sigma) * w_t + jump_sum - to_f64(&spec.jump_mean()) * t)
    } else {
        Ok(jump_sum - to_f64(&moment(spec, order)?) * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn pm_one() -> LevySpec {
        LevySpec::with_atoms(
            "x1",
            rat(0),
            rat(0),
            rat(2),
            vec![(rat(1), ratio(1, 2)), (rat(-1), ratio(1, 2))],
        )
    }

    #[test]
    fn continuous_family_has_no_jumps() {
        let f = vec![LevySpec::continuous("x1", rat(0), rat(1))];
        let p = sample_path(&f, &rat(1), 7, Some(&ratio(1, 100))).unwrap();
        assert!(p.jump_events.is_empty());
        let g = p.brownian_grid.unwrap();
        assert_eq!(g.n_steps, 100);
        assert_eq!(g.increments[0].len(), 100);
    }

    #[test]
    fn sampling_is_deterministic() {
        let f = vec![pm_one()];
        let a = sample_path(&f, &rat(1), 42, None).unwrap();
        let b = sample_path(&f, &rat(1), 42, None).unwrap();
        assert_eq!(a, b);
        let c = sample_path(&f, &rat(1), 43, None).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn jump_times_are_strictly_increasing_in_horizon() {
        let f = vec![pm_one()];
        for seed in 0..50 {
            let p = sample_path(&f, &rat(2), seed, None).unwrap();
            for k in 1..p.jump_events.len() {
                assert!(p.jump_events[k - 1].time < p.jump_events[k].time);
            }
            for e in &p.jump_events {
                assert!(e.time.is_positive() && e.time <= rat(2));
            }
        }
    }

    #[test]
    fn mean_jump_count_matches_poisson_rate() {
        // λT = 2; mean over 10^5 paths within 4 standard errors of 2
        let f = vec![pm_one()];
        let n = 100_000;
        let mut total = 0usize;
        for seed in 0..n {
            total += sample_path(&f, &rat(1), substream(9, seed), None).unwrap().jump_events.len();
        }
        let mean = total as f64 / n as f64;
        let se = (2.0f64 / n as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * se, "mean {mean} outside 2 ± {}", 4.0 * se);
    }

    #[test]
    fn diffusive_family_requires_dt() {
        let f = vec![LevySpec::continuous("x1", rat(0), rat(1))];
        assert!(matches!(sample_path(&f, &rat(1), 1, None), Err(PathError::MissingGrid)));
    }

    #[test]
    fn moment_sequence_is_rejected() {
        let f = vec![LevySpec {
            name: "m".into(),
            drift: rat(0),
            sigma: rat(0),
            jumps: Some(JumpLaw::MomentSequence { alpha: vec![rat(1)] }),
        }];
        assert!(matches!(
            sample_path(&f, &rat(1), 1, None),
            Err(PathError::UnsupportedSpec(_))
        ));
    }

    #[test]
    fn teugels_values_from_events() {
        // ±1 law: Y^(1) = sum of signs, Y^(2) = count - 2T
        let f = vec![pm_one()];
        let p = sample_path(&f, &rat(1), 5, None).unwrap();
        let count = p.jump_events.len() as f64;
        let y2 = teugels_at_horizon(&p, &f, 1, 2).unwrap();
        assert!((y2 - (count - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn grid_steps_rounds() {
        assert_eq!(grid_steps(&rat(1), &ratio(1, 100)), 100);
        assert_eq!(grid_steps(&rat(1), &ratio(3, 1000)), 333);
        assert_eq!(grid_steps(&rat(1), &rat(5)), 1);
    }
}
