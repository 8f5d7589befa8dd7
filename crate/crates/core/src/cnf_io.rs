//! DIMACS CNF input for 3-SAT formulas.
//!
//! Variables are 1-based in the file format and in [`Literal::variable`];
//! [`Literal::index`] gives the 0-based position used everywhere else.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    variable: usize,
    negated: bool,
}

impl Literal {
    pub fn new(variable: usize, negated: bool) -> Self {
        assert!(variable >= 1, "DIMACS variables are 1-based");
        Self { variable, negated }
    }

    /// Builds a literal from its signed DIMACS form (`-3` is `¬x3`).
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 {
            return None;
        }
        Some(Self::new(lit.unsigned_abs() as usize, lit < 0))
    }

    pub fn variable(&self) -> usize {
        self.variable
    }

    pub fn index(&self) -> usize {
        self.variable - 1
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn to_dimacs(&self) -> i64 {
        if self.negated {
            -(self.variable as i64)
        } else {
            self.variable as i64
        }
    }

    pub fn is_true_under(&self, assignment: &[bool]) -> bool {
        assignment[self.index()] != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

pub type Clause = [Literal; 3];

/// A validated 3-SAT instance: every clause has three literals over three
/// distinct variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (ci, clause) in clauses.iter().enumerate() {
            validate_clause(ci + 1, clause, num_vars)?;
        }
        Ok(Self { num_vars, clauses })
    }

    /// Convenience constructor from signed DIMACS literals.
    pub fn from_signed(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self> {
        let mut out = Vec::with_capacity(clauses.len());
        for (ci, c) in clauses.iter().enumerate() {
            let mut lits = [Literal::new(1, false); 3];
            for (k, &l) in c.iter().enumerate() {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::VariableOutOfRange {
                        clause: ci + 1,
                        var: l,
                        num_vars,
                    });
                }
                lits[k] = Literal::from_dimacs(l).unwrap();
            }
            out.push(lits);
        }
        Self::new(num_vars, out)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Returns `(satisfied, unsat_count)`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<(bool, usize)> {
        if assignment.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: assignment.len(),
            });
        }
        let unsat = self
            .clauses
            .iter()
            .filter(|c| !c.iter().any(|l| l.is_true_under(assignment)))
            .count();
        Ok((unsat == 0, unsat))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }
}

fn validate_clause(clause_no: usize, clause: &Clause, num_vars: usize) -> Result<()> {
    for lit in clause {
        if lit.variable() > num_vars {
            return Err(Error::VariableOutOfRange {
                clause: clause_no,
                var: lit.to_dimacs(),
                num_vars,
            });
        }
    }
    for a in 0..3 {
        for b in a + 1..3 {
            if clause[a].variable() == clause[b].variable() {
                // covers both repeated literals and tautologies (x ∨ ¬x ∨ y)
                return Err(Error::DuplicateVariable {
                    clause: clause_no,
                    var: clause[a].variable(),
                });
            }
        }
    }
    Ok(())
}

/// Parses a DIMACS CNF document holding a 3-SAT instance.
///
/// Accepts `c` comment lines, CRLF line endings, clauses spanning several
/// lines, and the `%` / `0` trailer that SATLIB files end with. Everything
/// after a `%` line is ignored.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<i64> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(parse_err(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2]
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, "bad variable count"))?;
            let m = parts[3]
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let (num_vars, _) =
            header.ok_or_else(|| parse_err(line_no, "clause before `p cnf` header"))?;
        for tok in line.split_whitespace() {
            let v = tok
                .parse::<i64>()
                .map_err(|_| parse_err(line_no, &format!("bad literal {tok:?}")))?;
            if v != 0 {
                pending.push(v);
                continue;
            }
            let clause_no = clauses.len() + 1;
            if pending.len() != 3 {
                return Err(Error::ClauseArity {
                    clause: clause_no,
                    found: pending.len(),
                });
            }
            let mut lits = [Literal::new(1, false); 3];
            for (k, &l) in pending.iter().enumerate() {
                if l.unsigned_abs() as usize > num_vars {
                    return Err(Error::VariableOutOfRange {
                        clause: clause_no,
                        var: l,
                        num_vars,
                    });
                }
                lits[k] = Literal::from_dimacs(l).unwrap();
            }
            validate_clause(clause_no, &lits, num_vars)?;
            clauses.push(lits);
            pending.clear();
        }
    }

    let (num_vars, declared) = header.ok_or_else(|| parse_err(0, "missing `p cnf` header"))?;
    if !pending.is_empty() {
        return Err(parse_err(0, "last clause is not terminated by 0"));
    }
    if clauses.len() != declared {
        return Err(Error::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Reads a certificate of the form `v 1 -2 3 ... 0` (the `v` prefix and the
/// trailing zero are optional) into a boolean assignment of length `num_vars`.
/// Variables not mentioned default to false.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let mut out = vec![false; num_vars];
    for (lineno, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            if tok == "v" || tok == "s" || tok == "SATISFIABLE" {
                continue;
            }
            let v = tok
                .parse::<i64>()
                .map_err(|_| parse_err(lineno + 1, &format!("bad literal {tok:?}")))?;
            if v == 0 {
                continue;
            }
            let idx = v.unsigned_abs() as usize;
            if idx > num_vars {
                return Err(Error::VariableOutOfRange {
                    clause: 0,
                    var: v,
                    num_vars,
                });
            }
            out[idx - 1] = v > 0;
        }
    }
    Ok(out)
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
