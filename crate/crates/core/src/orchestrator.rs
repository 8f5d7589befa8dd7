//! Iterative refinement: select → clamp/extract → solve → feedback → check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chancellor::{encode, ising_energy, IsingModel};
use crate::cnf_io::CnfFormula;
use crate::cobi_emulator::{solve_anneal, solve_exhaustive, AnnealSchedule};
use crate::decomposer::{bfs_select, extract_subproblem, random_start, FrontierOrder};
use crate::error::{Error, Result};
use crate::ising_graph::{build_csr, SpinState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsolver {
    Anneal,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Total spins (variables + ancillas) a subproblem may hold.
    pub capacity: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub schedule: AnnealSchedule,
    pub subsolver: Subsolver,
    pub frontier: FrontierOrder,
    /// Start the annealer from the current global spins of the subproblem
    /// rather than a random state.
    pub warm_start: bool,
    /// Also test the random initial state before the first iteration.
    pub check_initial: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            capacity: 50,
            max_iters: 5000,
            seed: 0,
            schedule: AnnealSchedule::default(),
            subsolver: Subsolver::Anneal,
            frontier: FrontierOrder::Shuffled,
            warm_start: false,
            check_initial: false,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.capacity < 4 {
            return Err(Error::InvalidConfig(format!(
                "capacity {} cannot hold a single clause gadget (needs 4)",
                self.capacity
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        self.schedule.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 0-based start variable of the breadth-first selection.
    pub start_var: usize,
    pub subproblem_size: usize,
    pub sub_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub satisfied: bool,
    pub iterations_used: usize,
    /// Global energy of the final spin state, ancillas as they stand.
    pub final_energy: f64,
    /// Global energy after each iteration's feedback.
    pub energy_trace: Vec<f64>,
    /// Satisfying assignment of the variables, present iff `satisfied`.
    pub assignment: Option<Vec<bool>>,
    pub per_iteration: Vec<IterationRecord>,
}

/// Uniformly random ±1 state over all spins of the model.
pub fn initialize<R: Rng + ?Sized>(model: &IsingModel, rng: &mut R) -> SpinState {
    SpinState::random(model.num_spins(), rng)
}

/// Writes `sub_result[k]` into `s_global[global_ids[k]]`.
pub fn feedback(s_global: &mut SpinState, sub_result: &SpinState, global_ids: &[usize]) -> Result<()> {
    if sub_result.len() != global_ids.len() {
        return Err(Error::LengthMismatch {
            expected: global_ids.len(),
            got: sub_result.len(),
        });
    }
    if let Some(&bad) = global_ids.iter().find(|&&g| g >= s_global.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: s_global.len(),
        });
    }
    for (k, &g) in global_ids.iter().enumerate() {
        s_global.set(g, sub_result.get(k) > 0);
    }
    Ok(())
}

fn check_sat(formula: &CnfFormula, s: &SpinState) -> Result<Option<Vec<bool>>> {
    let x = s.to_bits(formula.num_vars());
    let (ok, _) = formula.evaluate(&x)?;
    Ok(ok.then_some(x))
}

/// Runs the refinement loop until the formula is satisfied or `max_iters`
/// iterations have been spent.
///
/// Each iteration draws a uniform start variable, selects a subproblem by
/// breadth-first search (frontier order per `config.frontier`), solves it with the configured subsolver and writes
/// the result back. The satisfiability check runs after the write-back and
/// decodes only the variable spins. A reported assignment has always been
/// verified against the formula.
pub fn run(formula: &CnfFormula, config: &SolveConfig) -> Result<RunReport> {
    config.validate()?;
    let n = formula.num_vars();
    let model = encode(formula);
    let graph = build_csr(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut s = initialize(&model, &mut rng);

    let mut report = RunReport {
        satisfied: false,
        iterations_used: 0,
        final_energy: ising_energy(&model, &s)?,
        energy_trace: Vec::new(),
        assignment: None,
        per_iteration: Vec::new(),
    };

    if n == 0 || config.check_initial {
        if let Some(x) = check_sat(formula, &s)? {
            report.satisfied = true;
            report.assignment = Some(x);
            return Ok(report);
        }
    }

    for iter in 1..=config.max_iters {
        let start = random_start(n, &mut rng);
        let v_sub = bfs_select(&graph, n, start, config.capacity, config.frontier, &mut rng)?;
        let sub = extract_subproblem(&model, &graph, n, &v_sub, &s, config.capacity)?;
        let (sub_state, sub_energy) = match config.subsolver {
            Subsolver::Exhaustive => solve_exhaustive(&sub)?,
            Subsolver::Anneal => {
                let init = if config.warm_start {
                    s.restrict(sub.global_ids())?
                } else {
                    SpinState::random(sub.len(), &mut rng)
                };
                solve_anneal(&sub, &config.schedule, &init, &mut rng)?
            }
        };
        feedback(&mut s, &sub_state, sub.global_ids())?;

        let energy = ising_energy(&model, &s)?;
        report.energy_trace.push(energy);
        report.per_iteration.push(IterationRecord {
            start_var: start,
            subproblem_size: sub.len(),
            sub_energy,
        });
        report.iterations_used = iter;
        report.final_energy = energy;

        if let Some(x) = check_sat(formula, &s)? {
            debug_assert_eq!(
                ising_energy(&model, &crate::chancellor::complete_with_ancillas(&model, &x)?)?,
                0.0
            );
            report.satisfied = true;
            report.assignment = Some(x);
            break;
        }
    }
    Ok(report)
}
