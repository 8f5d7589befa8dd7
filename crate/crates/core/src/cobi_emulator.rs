//! Software stand-ins for the fixed-capacity Ising chip.
//!
//! [`solve_exhaustive`] enumerates every state and is used as the exact
//! oracle; [`solve_anneal`] is a budgeted Metropolis annealer that returns the
//! best state it visited.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomposer::Subproblem;
use crate::error::{Error, Result};
use crate::ising_graph::SpinState;

/// Largest subproblem [`solve_exhaustive`] accepts.
pub const MAX_EXHAUSTIVE_SPINS: usize = 22;

const ENERGY_EPS: f64 = 1e-9;

/// Geometric temperature schedule over a fixed number of sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub t_start: f64,
    pub t_end: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            sweeps: 500,
            t_start: 3.0,
            t_end: 0.05,
        }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(Error::InvalidConfig("sweeps must be at least 1".into()));
        }
        if !(self.t_end > 0.0 && self.t_start >= self.t_end && self.t_start.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "temperatures must satisfy t_start ≥ t_end > 0 (got {} → {})",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    /// Temperature of sweep `k` (0-based); the last sweep runs at `t_end`.
    pub fn temperature(&self, k: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_end;
        }
        let frac = k as f64 / (self.sweeps - 1) as f64;
        self.t_start * (self.t_end / self.t_start).powf(frac)
    }
}

/// Local fields `f_a = h'_a + Σ_b J_ab s_b`; flipping spin `a` changes the
/// energy by `2 s_a f_a`.
fn local_fields(sub: &Subproblem, s: &[i8]) -> Vec<f64> {
    (0..sub.len())
        .map(|a| {
            sub.h_local()[a]
                + sub
                    .coupling_row(a)
                    .iter()
                    .zip(s)
                    .map(|(&j, &sb)| j * f64::from(sb))
                    .sum::<f64>()
        })
        .collect()
}

fn apply_flip(sub: &Subproblem, s: &mut [i8], fields: &mut [f64], a: usize) {
    let before = f64::from(s[a]);
    s[a] = -s[a];
    // s_a changes by −2·before
    for (f, &j) in fields.iter_mut().zip(sub.coupling_row(a)) {
        *f -= 2.0 * before * j;
    }
}

/// Exact minimizer of `H_sub`. Among equal-energy minimizers the
/// lexicographically smallest state (−1 before +1) is returned.
pub fn solve_exhaustive(sub: &Subproblem) -> Result<(SpinState, f64)> {
    let k = sub.len();
    if k > MAX_EXHAUSTIVE_SPINS {
        return Err(Error::TooLargeForExhaustive {
            size: k,
            limit: MAX_EXHAUSTIVE_SPINS,
        });
    }
    // Spin a is +1 iff bit (k-1-a) of the code is set, so integer order of
    // codes is lexicographic order of states. Codes are visited in Gray
    // order so each step is a single flip.
    let mut s = vec![-1i8; k];
    let mut fields = local_fields(sub, &s);
    let mut energy = sub.energy(&SpinState::all_down(k))?;
    let mut best_code: u64 = 0;
    let mut best_energy = energy;
    let mut code: u64 = 0;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        let a = k - 1 - bit;
        energy += 2.0 * f64::from(s[a]) * fields[a];
        apply_flip(sub, &mut s, &mut fields, a);
        code ^= 1 << bit;
        if energy < best_energy - ENERGY_EPS
            || (energy <= best_energy + ENERGY_EPS && code < best_code)
        {
            best_energy = best_energy.min(energy);
            best_code = code;
        }
    }
    let state = SpinState::new(
        (0..k)
            .map(|a| if (best_code >> (k - 1 - a)) & 1 == 1 { 1 } else { -1 })
            .collect(),
    )?;
    let e = sub.energy(&state)?;
    Ok((state, e))
}

/// Metropolis single-spin-flip annealing from `init`.
///
/// One sweep proposes a flip of every spin in index order. The result is the
/// best state seen over the whole run (including `init`); among states tied
/// at the best energy the most recently visited one is kept, so a run that
/// finds no improvement can still move along an energy plateau.
pub fn solve_anneal<R: Rng + ?Sized>(
    sub: &Subproblem,
    schedule: &AnnealSchedule,
    init: &SpinState,
    rng: &mut R,
) -> Result<(SpinState, f64)> {
    schedule.validate()?;
    let k = sub.len();
    if init.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: init.len(),
        });
    }
    let mut s = init.as_slice().to_vec();
    let mut fields = local_fields(sub, &s);
    let mut energy = sub.energy(init)?;
    let mut best = s.clone();
    let mut best_energy = energy;

    for sweep in 0..schedule.sweeps {
        let beta = 1.0 / schedule.temperature(sweep);
        for a in 0..k {
            let delta = 2.0 * f64::from(s[a]) * fields[a];
            if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                apply_flip(sub, &mut s, &mut fields, a);
                energy += delta;
                if energy < best_energy - ENERGY_EPS {
                    best_energy = energy;
                    best.copy_from_slice(&s);
                } else if energy <= best_energy + ENERGY_EPS {
                    best.copy_from_slice(&s);
                }
            }
        }
    }
    let state = SpinState::new(best)?;
    let e = sub.energy(&state)?;
    Ok((state, e))
}
