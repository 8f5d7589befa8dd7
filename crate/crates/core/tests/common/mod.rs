#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ising_decomp::cnf_io::parse_assignment;
use ising_decomp::{parse_dimacs, CnfFormula};

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(path: &Path) -> CnfFormula {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_dimacs(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// The uf20 benchmark set. `SATLIB_DIR` (a flat directory of SATLIB files)
/// takes precedence over the vendored copies.
pub fn uf20_instances() -> Vec<(String, CnfFormula)> {
    instances(
        &["uf20-01.cnf", "uf20-02.cnf", "uf20-03.cnf"],
        &["satlib/uf20-01.cnf", "generated/uf20-gen-02.cnf", "generated/uf20-gen-03.cnf"],
    )
}

pub fn uf50_instances() -> Vec<(String, CnfFormula)> {
    instances(&["uf50-01.cnf"], &["generated/uf50-gen-01.cnf"])
}

fn instances(satlib: &[&str], vendored: &[&str]) -> Vec<(String, CnfFormula)> {
    if let Ok(dir) = std::env::var("SATLIB_DIR") {
        return satlib
            .iter()
            .map(|f| (f.to_string(), load(&Path::new(&dir).join(f))))
            .collect();
    }
    vendored
        .iter()
        .map(|f| (f.to_string(), load(&data_dir().join(f))))
        .collect()
}

/// Tiny fixtures with their satisfiability, decided by enumeration.
pub fn tiny_instances() -> Vec<(String, CnfFormula)> {
    let mut files: Vec<PathBuf> = fs::read_dir(data_dir().join("tiny"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), load(p)))
        .collect()
}

pub fn certificate(name: &str, num_vars: usize) -> Option<Vec<bool>> {
    let stem = name.trim_end_matches(".cnf");
    let path = data_dir().join("certificates").join(format!("{stem}.sol"));
    let text = fs::read_to_string(path).ok()?;
    Some(parse_assignment(&text, num_vars).unwrap())
}

/// Satisfiability by enumerating every assignment of the variables.
pub fn brute_force_sat(formula: &CnfFormula) -> Option<Vec<bool>> {
    let n = formula.num_vars();
    assert!(n <= 24);
    (0u64..1 << n)
        .map(|code| (0..n).map(|i| code >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|x| formula.evaluate(x).unwrap().0)
}
