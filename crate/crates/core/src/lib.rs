//! Solving 3-SAT on a capacity-limited Ising subsolver.
//!
//! The pipeline: parse a DIMACS formula ([`cnf_io`]), encode it as an Ising
//! model with one ancilla per clause ([`chancellor`]), store the couplings in
//! CSR form ([`ising_graph`]), and iterate breadth-first subproblem selection
//! with boundary clamping ([`decomposer`]) and a small-subproblem solver
//! ([`cobi_emulator`]) until the formula is satisfied ([`orchestrator`]).
//! [`timing_model`] is an analytical latency/energy model of the same loop
//! running on a decomposition accelerator next to the Ising chip.

pub mod chancellor;
pub mod cnf_io;
pub mod cobi_emulator;
pub mod decomposer;
pub mod error;
pub mod ising_graph;
pub mod orchestrator;
pub mod timing_model;

pub use chancellor::{build_qubo, encode, ising_energy, qubo_to_ising, IsingModel, QuboProblem};
pub use cnf_io::{parse_dimacs, CnfFormula, Literal};
pub use cobi_emulator::{solve_anneal, solve_exhaustive, AnnealSchedule};
pub use decomposer::{bfs_select, clamp, extract_subproblem, FrontierOrder, Subproblem};
pub use error::{Error, Result};
pub use ising_graph::{build_csr, CsrGraph, SpinState};
pub use orchestrator::{run, RunReport, SolveConfig, Subsolver};
pub use timing_model::{LatencyMode, TimingConfig, TimingReport};
