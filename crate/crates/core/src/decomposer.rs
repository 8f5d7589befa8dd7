//! Subproblem selection and extraction.
//!
//! A subproblem is a connected set of variable spins (chosen by breadth-first
//! search) together with every ancilla coupled to them. All other spins are
//! clamped at their current global value and folded into the local fields:
//!
//! ```text
//! h'_i = h_i + Σ_{j ∉ free} J_ij · s_j
//! ```
//!
//! so that `H_global(s) = H_sub(s_free) + K` with `K` independent of the free
//! spins.
//!
//! Spins `0..n` are the variables; every spin `≥ n` is treated as an ancilla.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chancellor::{ising_energy, IsingModel};
use crate::error::{Error, Result};
use crate::ising_graph::{CsrGraph, SpinState};

const NOT_FREE: usize = usize::MAX;

/// A clamped local problem ready for a capacity-limited subsolver.
///
/// Local index `k` corresponds to global spin `global_ids[k]`; the selected
/// variables come first, followed by their coupled ancillas in ascending
/// global order.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    global_ids: Vec<usize>,
    j_local: Vec<f64>,
    h_local: Vec<f64>,
    num_vars_selected: usize,
    offset: f64,
}

impl Subproblem {
    /// Builds a subproblem from a dense row-major coupling matrix.
    pub fn from_parts(
        global_ids: Vec<usize>,
        j_local: Vec<f64>,
        h_local: Vec<f64>,
        num_vars_selected: usize,
    ) -> Result<Self> {
        let k = global_ids.len();
        if h_local.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: h_local.len(),
            });
        }
        if j_local.len() != k * k {
            return Err(Error::LengthMismatch {
                expected: k * k,
                got: j_local.len(),
            });
        }
        if num_vars_selected > k {
            return Err(Error::InvalidConfig(format!(
                "{num_vars_selected} selected variables in a {k}-spin subproblem"
            )));
        }
        let mut seen = global_ids.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("duplicate global ids".into()));
        }
        for a in 0..k {
            if j_local[a * k + a] != 0.0 {
                return Err(Error::InvalidConfig(format!("self-coupling on local spin {a}")));
            }
            for b in a + 1..k {
                if j_local[a * k + b] != j_local[b * k + a] {
                    return Err(Error::InvalidConfig(format!(
                        "asymmetric coupling between local spins {a} and {b}"
                    )));
                }
            }
        }
        Ok(Self {
            global_ids,
            j_local,
            h_local,
            num_vars_selected,
            offset: 0.0,
        })
    }

    /// The whole model as one subproblem (nothing clamped).
    pub fn from_model(model: &IsingModel) -> Self {
        let k = model.num_spins();
        let mut j_local = vec![0.0; k * k];
        for (&(i, j), &v) in model.couplings() {
            j_local[i * k + j] = v;
            j_local[j * k + i] = v;
        }
        Self {
            global_ids: (0..k).collect(),
            j_local,
            h_local: model.fields().to_vec(),
            num_vars_selected: k,
            offset: model.constant(),
        }
    }

    pub fn len(&self) -> usize {
        self.global_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global_ids.is_empty()
    }

    pub fn global_ids(&self) -> &[usize] {
        &self.global_ids
    }

    pub fn num_vars_selected(&self) -> usize {
        self.num_vars_selected
    }

    pub fn num_ancillas(&self) -> usize {
        self.global_ids.len() - self.num_vars_selected
    }

    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.j_local[a * self.len() + b]
    }

    /// Dense row `a` of the local coupling matrix.
    pub fn coupling_row(&self, a: usize) -> &[f64] {
        let k = self.len();
        &self.j_local[a * k..(a + 1) * k]
    }

    pub fn h_local(&self) -> &[f64] {
        &self.h_local
    }

    /// `K` such that `H_global = H_sub + K` at the clamp point.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `H_sub(s) = −Σ_{a<b} J_ab s_a s_b − Σ_a h'_a s_a` (no offset).
    pub fn energy(&self, state: &SpinState) -> Result<f64> {
        let k = self.len();
        if state.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: state.len(),
            });
        }
        let s = state.as_slice();
        let mut e = 0.0;
        for a in 0..k {
            let sa = f64::from(s[a]);
            let row = self.coupling_row(a);
            let mut pair = 0.0;
            for b in a + 1..k {
                pair += row[b] * f64::from(s[b]);
            }
            e -= sa * (pair + self.h_local[a]);
        }
        Ok(e)
    }
}

/// Ancillas coupled to variable `v`, ascending.
pub fn coupled_ancillas(graph: &CsrGraph, n: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
    let (cols, _) = graph.row(v);
    cols.iter().copied().filter(move |&u| u >= n)
}

/// Variables adjacent to `v` directly or through a shared ancilla, ascending.
///
/// Under the clause gadget same-clause variables are usually directly
/// coupled, but opposite-sign clauses over the same pair can cancel that
/// coupling; the ancilla hop keeps them adjacent.
pub fn variable_neighbors(graph: &CsrGraph, n: usize, v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let (cols, _) = graph.row(v);
    for &u in cols {
        if u < n {
            out.push(u);
        } else {
            out.extend(graph.row(u).0.iter().copied().filter(|&w| w < n && w != v));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Order in which a dequeued variable's neighbors are offered to the
/// selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontierOrder {
    /// Ascending variable index.
    Ascending,
    /// A fresh seeded permutation for every dequeued variable.
    #[default]
    Shuffled,
}

/// Uniform start variable in `0..n`.
pub fn random_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    rng.gen_range(0..n)
}

/// Breadth-first variable selection under a total-spin budget.
///
/// A variable is admitted only if the selected variables plus the union of
/// their coupled ancillas still fit in `capacity`. A variable that does not
/// fit is skipped, stays unvisited (a later frontier node may offer it
/// again) and the search carries on with the rest of the frontier.
/// Neighbors are offered in `order`; `rng` is only drawn from for
/// [`FrontierOrder::Shuffled`]. The search stops when the frontier empties or
/// the budget is exactly used.
pub fn bfs_select<R: Rng + ?Sized>(
    graph: &CsrGraph,
    n: usize,
    start: usize,
    capacity: usize,
    order: FrontierOrder,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if start >= n {
        return Err(Error::IndexOutOfRange {
            index: start,
            len: n,
        });
    }
    if capacity == 0 {
        return Err(Error::InvalidConfig("capacity must be at least 1".into()));
    }
    let total = graph.num_nodes();
    let mut visited = vec![false; n];
    let mut is_ancilla_taken = vec![false; total];
    let mut ancilla_count = 0usize;

    let new_ancillas = |v: usize, taken: &[bool]| coupled_ancillas(graph, n, v).filter(|&a| !taken[a]).count();

    let start_cost = 1 + new_ancillas(start, &is_ancilla_taken);
    if start_cost > capacity {
        return Err(Error::CapacityExceeded {
            needed: start_cost,
            capacity,
        });
    }

    let mut selected = vec![start];
    visited[start] = true;
    for a in coupled_ancillas(graph, n, start) {
        is_ancilla_taken[a] = true;
        ancilla_count += 1;
    }
    let mut queue = std::collections::VecDeque::from([start]);

    'outer: while let Some(v) = queue.pop_front() {
        let mut frontier = variable_neighbors(graph, n, v);
        if order == FrontierOrder::Shuffled {
            frontier.shuffle(rng);
        }
        for u in frontier {
            if selected.len() + ancilla_count >= capacity {
                break 'outer;
            }
            if visited[u] {
                continue;
            }
            let extra = new_ancillas(u, &is_ancilla_taken);
            if selected.len() + 1 + ancilla_count + extra > capacity {
                continue;
            }
            visited[u] = true;
            selected.push(u);
            for a in coupled_ancillas(graph, n, u) {
                if !is_ancilla_taken[a] {
                    is_ancilla_taken[a] = true;
                    ancilla_count += 1;
                }
            }
            queue.push_back(u);
        }
    }
    Ok(selected)
}

fn free_marker(num_spins: usize, free_set: &[usize]) -> Result<Vec<usize>> {
    let mut local = vec![NOT_FREE; num_spins];
    for (k, &g) in free_set.iter().enumerate() {
        if g >= num_spins {
            return Err(Error::IndexOutOfRange {
                index: g,
                len: num_spins,
            });
        }
        if local[g] != NOT_FREE {
            return Err(Error::InvalidConfig(format!("spin {g} listed twice")));
        }
        local[g] = k;
    }
    Ok(local)
}

/// Modified fields `h'` for `free_set` (same order), clamping every other
/// spin at `s_global`.
pub fn clamp(
    model: &IsingModel,
    graph: &CsrGraph,
    free_set: &[usize],
    s_global: &SpinState,
) -> Result<Vec<f64>> {
    let marker = free_marker(model.num_spins(), free_set)?;
    clamp_with_marker(model, graph, free_set, &marker, s_global)
}

fn clamp_with_marker(
    model: &IsingModel,
    graph: &CsrGraph,
    free_set: &[usize],
    marker: &[usize],
    s_global: &SpinState,
) -> Result<Vec<f64>> {
    if s_global.len() != model.num_spins() {
        return Err(Error::LengthMismatch {
            expected: model.num_spins(),
            got: s_global.len(),
        });
    }
    let s = s_global.as_slice();
    let h = model.fields();
    Ok(free_set
        .iter()
        .map(|&i| {
            let (cols, vals) = graph.row(i);
            h[i] + cols
                .iter()
                .zip(vals)
                .filter(|(&j, _)| marker[j] == NOT_FREE)
                .map(|(&j, &v)| v * f64::from(s[j]))
                .sum::<f64>()
        })
        .collect())
}

/// Builds the clamped subproblem over the selected variables `v_sub` and
/// every ancilla (spin `≥ num_vars`) coupled to one of them.
pub fn extract_subproblem(
    model: &IsingModel,
    graph: &CsrGraph,
    num_vars: usize,
    v_sub: &[usize],
    s_global: &SpinState,
    capacity: usize,
) -> Result<Subproblem> {
    if v_sub.is_empty() {
        return Err(Error::EmptySelection);
    }
    let total = model.num_spins();
    if let Some(&bad) = v_sub.iter().find(|&&v| v >= num_vars) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: num_vars,
        });
    }
    let mut ancillas: Vec<usize> = v_sub
        .iter()
        .flat_map(|&v| coupled_ancillas(graph, num_vars, v))
        .collect();
    ancillas.sort_unstable();
    ancillas.dedup();

    let mut global_ids = v_sub.to_vec();
    global_ids.extend(ancillas);
    let k = global_ids.len();
    if k > capacity {
        return Err(Error::CapacityExceeded {
            needed: k,
            capacity,
        });
    }

    let marker = free_marker(total, &global_ids)?;
    let h_local = clamp_with_marker(model, graph, &global_ids, &marker, s_global)?;
    let mut j_local = vec![0.0; k * k];
    for (a, &g) in global_ids.iter().enumerate() {
        let (cols, vals) = graph.row(g);
        for (&j, &v) in cols.iter().zip(vals) {
            let b = marker[j];
            if b != NOT_FREE {
                j_local[a * k + b] = v;
            }
        }
    }

    let mut sub = Subproblem {
        global_ids,
        j_local,
        h_local,
        num_vars_selected: v_sub.len(),
        offset: 0.0,
    };
    let restricted = s_global.restrict(&sub.global_ids)?;
    sub.offset = ising_energy(model, s_global)? - sub.energy(&restricted)?;
    Ok(sub)
}
