use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{GolombError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: Rational,
    /// `None` is +infinity.
    pub upper: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

impl Row {
    pub fn activity(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (j, a)| &acc + &(a * &point[*j]))
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        let lhs = self.activity(point);
        match self.cmp {
            Cmp::Le => lhs <= self.rhs,
            Cmp::Ge => lhs >= self.rhs,
            Cmp::Eq => lhs == self.rhs,
        }
    }
}

/// A linear program with exact rational data and finite lower bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub vars: Vec<Variable>,
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> LinearProgram {
        LinearProgram {
            sense,
            vars: Vec::new(),
            objective: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Rational, upper: Option<Rational>) -> usize {
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.objective.push(Rational::zero());
        self.vars.len() - 1
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, cmp: Cmp, rhs: Rational) -> usize {
        self.rows.push(Row { coeffs, cmp, rhs });
        self.rows.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.vars.len() {
            return Err(GolombError::InvalidConfig("objective length mismatch".into()));
        }
        for (k, r) in self.rows.iter().enumerate() {
            if let Some((j, _)) = r.coeffs.iter().find(|(j, _)| *j >= self.vars.len()) {
                return Err(GolombError::InvalidConfig(format!(
                    "row {k} references undeclared variable {j}"
                )));
            }
        }
        Ok(())
    }

    /// True when `point` satisfies every bound and row exactly.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.vars.len()
            && self
                .vars
                .iter()
                .zip(point)
                .all(|(v, x)| *x >= v.lower && v.upper.as_ref().is_none_or(|u| x <= u))
            && self.rows.iter().all(|r| r.is_satisfied(point))
    }

    /// Writes the program in CPLEX LP text format with `p/q` coefficients.
    pub fn to_lp_format(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}",
            match self.sense {
                Sense::Minimize => "Minimize",
                Sense::Maximize => "Maximize",
            }
        );
        let _ = writeln!(
            s,
            " obj: {}",
            self.linear_expr(
                self.objective
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (j, c.clone()))
            )
        );
        let _ = writeln!(s, "Subject To");
        for (k, r) in self.rows.iter().enumerate() {
            let op = match r.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "=",
            };
            let _ = writeln!(
                s,
                " c{k}: {} {op} {}",
                self.linear_expr(r.coeffs.iter().cloned()),
                r.rhs
            );
        }
        let _ = writeln!(s, "Bounds");
        for v in &self.vars {
            match &v.upper {
                Some(u) => {
                    let _ = writeln!(s, " {} <= {} <= {}", v.lower, v.name, u);
                }
                None => {
                    let _ = writeln!(s, " {} >= {}", v.name, v.lower);
                }
            }
        }
        let _ = writeln!(s, "End");
        s
    }

    fn linear_expr(&self, terms: impl Iterator<Item = (usize, Rational)>) -> String {
        let mut out = String::new();
        for (k, (j, c)) in terms.enumerate() {
            let name = &self.vars[j].name;
            if c.is_negative() {
                let _ = write!(out, "{}{} {name}", if k == 0 { "-" } else { " - " }, c.abs());
            } else {
                let _ = write!(out, "{}{} {name}", if k == 0 { "" } else { " + " }, c);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; meaningful only when optimal.
    pub value: Rational,
    /// Values of the structural variables; empty unless optimal.
    pub point: Vec<Rational>,
    pub pivots: u64,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}
