//! 3-SAT → QUBO → Ising.
//!
//! Each clause `(l1 ∨ l2 ∨ l3)` over literal binaries `a, b, c` (a literal
//! on a negated variable is `1 − x`) contributes
//!
//! ```text
//! 1 − a − b − c + ab + ac + bc + w·(2 − a − b − c)
//! ```
//!
//! with one ancilla binary `w` per clause. Minimized over `w` this is 0 for a
//! satisfied clause and 1 for a violated one, so the QUBO objective of a
//! formula counts violated clauses once ancillas are optimal. Binaries are laid
//! out as the `n` SAT variables followed by the `m` clause ancillas.
//!
//! The Ising form uses `s = 2x − 1` and the single-count convention
//! `H(s) = −Σ_{i<j} J_ij s_i s_j − Σ_i h_i s_i + constant`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cnf_io::{Clause, CnfFormula};
use crate::error::{Error, Result};
use crate::ising_graph::SpinState;

/// Sparse upper-triangular QUBO: `E(x) = Σ_{i≤j} Q_ij x_i x_j + constant`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboProblem {
    num_binaries: usize,
    terms: BTreeMap<(usize, usize), f64>,
    constant: f64,
}

impl QuboProblem {
    pub fn new(num_binaries: usize) -> Self {
        Self {
            num_binaries,
            terms: BTreeMap::new(),
            constant: 0.0,
        }
    }

    pub fn num_binaries(&self) -> usize {
        self.num_binaries
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Nonzero coefficients keyed by `(i, j)` with `i ≤ j`; `(i, i)` is linear.
    pub fn terms(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.terms
    }

    pub fn term(&self, i: usize, j: usize) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    /// Adds `c·x_i·x_j`. For `i == j` this is the linear term `c·x_i`.
    /// Coefficients that cancel to zero are dropped from the map.
    pub fn add_term(&mut self, i: usize, j: usize, c: f64) {
        let key = if i <= j { (i, j) } else { (j, i) };
        assert!(key.1 < self.num_binaries, "QUBO index {} out of range", key.1);
        let entry = self.terms.entry(key).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn value(&self, x: &[bool]) -> Result<f64> {
        if x.len() != self.num_binaries {
            return Err(Error::LengthMismatch {
                expected: self.num_binaries,
                got: x.len(),
            });
        }
        let mut e = self.constant;
        for (&(i, j), &q) in &self.terms {
            if x[i] && x[j] {
                e += q;
            }
        }
        Ok(e)
    }
}

/// A literal's binary as `offset + slope·x`.
fn literal_affine(negated: bool) -> (f64, f64) {
    if negated {
        (1.0, -1.0)
    } else {
        (0.0, 1.0)
    }
}

fn add_clause_penalty(q: &mut QuboProblem, clause: &Clause, ancilla: usize) {
    let vars = clause.map(|l| l.index());
    let aff = clause.map(|l| literal_affine(l.is_negated()));

    q.add_constant(1.0);
    // −a − b − c
    for k in 0..3 {
        let (alpha, beta) = aff[k];
        q.add_constant(-alpha);
        q.add_term(vars[k], vars[k], -beta);
    }
    // ab + ac + bc
    for a in 0..3 {
        for b in a + 1..3 {
            let (alpha_a, beta_a) = aff[a];
            let (alpha_b, beta_b) = aff[b];
            q.add_constant(alpha_a * alpha_b);
            q.add_term(vars[b], vars[b], alpha_a * beta_b);
            q.add_term(vars[a], vars[a], beta_a * alpha_b);
            q.add_term(vars[a], vars[b], beta_a * beta_b);
        }
    }
    // w·(2 − a − b − c)
    q.add_term(ancilla, ancilla, 2.0);
    for k in 0..3 {
        let (alpha, beta) = aff[k];
        q.add_term(ancilla, ancilla, -alpha);
        q.add_term(vars[k], ancilla, -beta);
    }
}

/// QUBO terms of one clause gadget, over binaries `0..=max(vars, ancilla)`.
pub fn clause_penalty(clause: &Clause, ancilla: usize) -> Result<QuboProblem> {
    for a in 0..3 {
        for b in a + 1..3 {
            if clause[a].variable() == clause[b].variable() {
                return Err(Error::DuplicateVariable {
                    clause: 0,
                    var: clause[a].variable(),
                });
            }
        }
    }
    let top = clause.iter().map(|l| l.index()).max().unwrap().max(ancilla);
    if clause.iter().any(|l| l.index() == ancilla) {
        return Err(Error::InvalidConfig(format!(
            "ancilla index {ancilla} collides with a clause variable"
        )));
    }
    let mut q = QuboProblem::new(top + 1);
    add_clause_penalty(&mut q, clause, ancilla);
    Ok(q)
}

/// Sums the clause gadgets of `formula`; clause `j` uses ancilla `n + j`.
pub fn build_qubo(formula: &CnfFormula) -> QuboProblem {
    let n = formula.num_vars();
    let mut q = QuboProblem::new(n + formula.num_clauses());
    for (j, clause) in formula.clauses().iter().enumerate() {
        add_clause_penalty(&mut q, clause, n + j);
    }
    q
}

/// Ising model with couplings on unordered pairs and per-spin fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IsingModel {
    num_spins: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    constant: f64,
}

impl IsingModel {
    pub fn new(num_spins: usize) -> Self {
        Self {
            num_spins,
            couplings: BTreeMap::new(),
            fields: vec![0.0; num_spins],
            constant: 0.0,
        }
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    /// Nonzero couplings keyed by `(i, j)` with `i < j`.
    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = if i < j { (i, j) } else { (j, i) };
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn add_coupling(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidConfig(format!("self-coupling on spin {i}")));
        }
        let key = if i < j { (i, j) } else { (j, i) };
        if key.1 >= self.num_spins {
            return Err(Error::IndexOutOfRange {
                index: key.1,
                len: self.num_spins,
            });
        }
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!("non-finite coupling {value}")));
        }
        let entry = self.couplings.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.couplings.remove(&key);
        }
        Ok(())
    }

    pub fn add_field(&mut self, i: usize, value: f64) -> Result<()> {
        if i >= self.num_spins {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.num_spins,
            });
        }
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!("non-finite field {value}")));
        }
        self.fields[i] += value;
        Ok(())
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn energy(&self, state: &SpinState) -> Result<f64> {
        ising_energy(self, state)
    }

    /// Text edge list, one item per line:
    ///
    /// ```text
    /// c ising <num_spins> <num_couplings> <constant>
    /// <i> <j> <J_ij>        # one line per nonzero coupling, i < j, ascending
    /// <i> <h_i>             # one line per spin, ascending
    /// ```
    ///
    /// Indices are 0-based; values use the shortest round-trip decimal form.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "c ising {} {} {}",
            self.num_spins,
            self.couplings.len(),
            self.constant
        )
        .unwrap();
        for (&(i, j), &v) in &self.couplings {
            writeln!(out, "{i} {j} {v}").unwrap();
        }
        for (i, h) in self.fields.iter().enumerate() {
            writeln!(out, "{i} {h}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty edge list".into(),
        })?;
        let head: Vec<&str> = head.split_whitespace().collect();
        if head.len() != 5 || head[0] != "c" || head[1] != "ising" {
            return Err(Error::Parse {
                line: 1,
                msg: "expected `c ising <spins> <couplings> <constant>`".into(),
            });
        }
        let bad = |line: usize| Error::Parse {
            line,
            msg: "malformed edge-list line".into(),
        };
        let num_spins: usize = head[2].parse().map_err(|_| bad(1))?;
        let mut model = IsingModel::new(num_spins);
        model.constant = head[4].parse().map_err(|_| bad(1))?;
        for (idx, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.len() {
                3 => {
                    let i = toks[0].parse().map_err(|_| bad(idx + 1))?;
                    let j = toks[1].parse().map_err(|_| bad(idx + 1))?;
                    let v = toks[2].parse().map_err(|_| bad(idx + 1))?;
                    model.add_coupling(i, j, v)?;
                }
                2 => {
                    let i = toks[0].parse().map_err(|_| bad(idx + 1))?;
                    let h = toks[1].parse().map_err(|_| bad(idx + 1))?;
                    model.add_field(i, h)?;
                }
                _ => return Err(bad(idx + 1)),
            }
        }
        Ok(model)
    }
}

/// Converts with `x = (s + 1) / 2`; the energy is preserved exactly.
pub fn qubo_to_ising(qubo: &QuboProblem) -> IsingModel {
    let mut model = IsingModel::new(qubo.num_binaries());
    model.constant = qubo.constant();
    for (&(i, j), &q) in qubo.terms() {
        if i == j {
            // q·(s+1)/2
            model.fields[i] -= q / 2.0;
            model.constant += q / 2.0;
        } else {
            // q·(s_i s_j + s_i + s_j + 1)/4
            *model.couplings.entry((i, j)).or_insert(0.0) -= q / 4.0;
            model.fields[i] -= q / 4.0;
            model.fields[j] -= q / 4.0;
            model.constant += q / 4.0;
        }
    }
    model
}

/// Ising model of a formula: `build_qubo` followed by `qubo_to_ising`.
pub fn encode(formula: &CnfFormula) -> IsingModel {
    qubo_to_ising(&build_qubo(formula))
}

pub fn ising_energy(model: &IsingModel, state: &SpinState) -> Result<f64> {
    if state.len() != model.num_spins {
        return Err(Error::LengthMismatch {
            expected: model.num_spins,
            got: state.len(),
        });
    }
    let s = state.as_slice();
    let mut e = model.constant;
    for (&(i, j), &v) in &model.couplings {
        e -= v * f64::from(s[i]) * f64::from(s[j]);
    }
    for (h, &si) in model.fields.iter().zip(s) {
        e -= h * f64::from(si);
    }
    Ok(e)
}

/// Full spin state for a variable assignment, with every spin at index
/// `≥ assignment.len()` set to its energy-minimizing value given the variable
/// spins. Ancillas couple only to their own clause's variables, so they can be
/// minimized independently. Ties go to −1.
pub fn complete_with_ancillas(model: &IsingModel, assignment: &[bool]) -> Result<SpinState> {
    let n = assignment.len();
    if n > model.num_spins {
        return Err(Error::LengthMismatch {
            expected: model.num_spins,
            got: n,
        });
    }
    let mut spins: Vec<i8> = assignment.iter().map(|&b| if b { 1 } else { -1 }).collect();
    let mut local = model.fields[n..].to_vec();
    for (&(i, j), &v) in &model.couplings {
        if i < n && j >= n {
            local[j - n] += v * f64::from(spins[i]);
        }
    }
    spins.extend(local.iter().map(|&f| if f > 0.0 { 1i8 } else { -1 }));
    SpinState::new(spins)
}
