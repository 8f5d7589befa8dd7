//! Coupling-graph storage and spin states.

use std::collections::BTreeMap;

use rand::Rng;

use crate::chancellor::IsingModel;
use crate::error::{Error, Result};

/// A vector of ±1 spins.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin(i64::from(bad)));
        }
        Ok(Self(spins))
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self(bits.iter().map(|&b| if b { 1 } else { -1 }).collect())
    }

    pub fn all_down(len: usize) -> Self {
        Self(vec![-1; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, up: bool) {
        self.0[i] = if up { 1 } else { -1 };
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    /// `x = (s + 1) / 2` for the first `count` spins.
    pub fn to_bits(&self, count: usize) -> Vec<bool> {
        self.0[..count].iter().map(|&s| s > 0).collect()
    }

    pub fn restrict(&self, ids: &[usize]) -> Result<SpinState> {
        ids.iter()
            .map(|&i| {
                self.0.get(i).copied().ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: self.0.len(),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(SpinState)
    }
}

/// Symmetric CSR adjacency of the nonzero couplings. Each undirected
/// coupling is stored in both rows; column indices ascend within a row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrGraph {
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrGraph {
    pub fn num_nodes(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Distinct undirected couplings (`nnz / 2`).
    pub fn num_edges(&self) -> usize {
        self.col_idx.len() / 2
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row_ptr[v + 1] - self.row_ptr[v]
    }

    /// Row `v` as parallel slices of neighbor indices and coupling values.
    pub fn row(&self, v: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[v]..self.row_ptr[v + 1];
        (&self.col_idx[range.clone()], &self.values[range])
    }

    pub fn neighbors(&self, v: usize) -> Result<impl Iterator<Item = (usize, f64)> + '_> {
        if v >= self.num_nodes() {
            return Err(Error::IndexOutOfRange {
                index: v,
                len: self.num_nodes(),
            });
        }
        let (cols, vals) = self.row(v);
        Ok(cols.iter().copied().zip(vals.iter().copied()))
    }

    /// Storage in 32-bit words as `N + 1` row pointers plus one column index
    /// and one value per distinct coupling: `(N + 1 + 2E) × 32` bits.
    /// The in-memory layout holds both directions, i.e. `2E` entries of each.
    pub fn storage_bits(&self) -> u64 {
        storage_bits(self.num_nodes(), self.num_edges())
    }

    /// Coupling map (`i < j`) recovered from the upper triangle.
    pub fn to_coupling_map(&self) -> BTreeMap<(usize, usize), f64> {
        let mut map = BTreeMap::new();
        for i in 0..self.num_nodes() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if i < j {
                    map.insert((i, j), v);
                }
            }
        }
        map
    }
}

pub fn storage_bits(num_nodes: usize, num_edges: usize) -> u64 {
    (num_nodes as u64 + 1 + 2 * num_edges as u64) * 32
}

pub fn build_csr(model: &IsingModel) -> CsrGraph {
    let n = model.num_spins();
    let mut degree = vec![0usize; n];
    for &(i, j) in model.couplings().keys() {
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    for d in &degree {
        row_ptr.push(row_ptr.last().unwrap() + d);
    }
    let nnz = *row_ptr.last().unwrap();
    let mut col_idx = vec![0usize; nnz];
    let mut values = vec![0f64; nnz];
    let mut cursor = row_ptr[..n].to_vec();
    // Keys arrive in lexicographic (i, j) order, so row v first receives its
    // lower partners (as the `j` side) in ascending order, then its higher
    // partners (as the `i` side) in ascending order: rows come out sorted.
    for (&(i, j), &v) in model.couplings() {
        col_idx[cursor[i]] = j;
        values[cursor[i]] = v;
        cursor[i] += 1;
        col_idx[cursor[j]] = i;
        values[cursor[j]] = v;
        cursor[j] += 1;
    }
    debug_assert!((0..n).all(|v| col_idx[row_ptr[v]..row_ptr[v + 1]]
        .windows(2)
        .all(|w| w[0] < w[1])));
    CsrGraph {
        row_ptr,
        col_idx,
        values,
    }
}
