//! Preset scenario grids for the published error-rate tables.

use cmc_core::subset::DEFAULT_SUBSET_LIMIT;
use cmc_core::{Criterion, Scenario};

use crate::error::{CliError, Result};

pub const TABLE_ALPHAS: [f64; 3] = [0.9, 0.5, 0.1];

#[derive(Debug, Clone, PartialEq)]
pub struct PresetRow {
    pub label: String,
    pub scenario: Scenario,
    pub criteria: Vec<Criterion>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Criteria as columns, one rate pair per cell.
    Grid,
    /// One CMC level per row.
    Schedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub table: u8,
    pub title: &'static str,
    pub row_header: &'static str,
    pub layout: Layout,
    pub rows: Vec<PresetRow>,
    /// Enumeration limit covering the widest row.
    pub limit: usize,
}

fn weak_row(n: usize, p: usize, p_active: usize, criteria: Vec<Criterion>) -> PresetRow {
    PresetRow { label: format!("({n}, {p}, {p_active})"), scenario: Scenario::weak(n, p, p_active), criteria }
}

pub fn table1() -> Preset {
    let mut rows = Vec::new();
    for (p, p_active) in [(10, 5), (20, 10), (30, 15)] {
        for mult in [2, 3, 4, 5] {
            rows.push(weak_row(mult * p, p, p_active, Criterion::standard_set(&TABLE_ALPHAS)));
        }
    }
    Preset { table: 1, title: "weakly correlated predictors", row_header: "(n, p, p*)", layout: Layout::Grid, rows, limit: 30 }
}

pub fn table2() -> Preset {
    let rows = [(40, 0.9), (60, 0.5), (100, 0.1)]
        .into_iter()
        .map(|(n, alpha)| weak_row(n, 20, 10, vec![Criterion::cmc(alpha)]))
        .collect();
    Preset { table: 2, title: "CMC consistency", row_header: "(n, p, p*)", layout: Layout::Schedule, rows, limit: DEFAULT_SUBSET_LIMIT }
}

pub fn table3() -> Preset {
    let mut rows = Vec::new();
    for (rho, ns) in [(0.3, &[40, 60, 100, 200][..]), (0.5, &[40, 60, 100, 200]), (0.8, &[40, 60, 100, 200, 400])] {
        for &n in ns {
            rows.push(PresetRow {
                label: format!("({rho}, {n})"),
                scenario: Scenario::correlated(n, 20, 10, rho),
                criteria: Criterion::standard_set(&TABLE_ALPHAS),
            });
        }
    }
    Preset {
        table: 3,
        title: "correlated predictors, (p, p*) = (20, 10)",
        row_header: "(rho, n)",
        layout: Layout::Grid,
        rows,
        limit: DEFAULT_SUBSET_LIMIT,
    }
}

pub fn preset(table: u8) -> Result<Preset> {
    match table {
        1 => Ok(table1()),
        2 => Ok(table2()),
        3 => Ok(table3()),
        _ => Err(CliError::Config(format!("unknown table {table}; expected 1, 2 or 3"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_shapes() {
        assert_eq!(table1().rows.len(), 12);
        assert_eq!(table2().rows.len(), 3);
        assert_eq!(table3().rows.len(), 13);
        let labels: Vec<String> = table1().rows[0].criteria.iter().map(Criterion::label).collect();
        assert_eq!(labels, ["adjr2", "cp_aic", "bic", "cmc_0.9", "cmc_0.5", "cmc_0.1"]);
        for p in [table1(), table2(), table3()] {
            for row in p.rows {
                assert!(row.scenario.p <= p.limit);
                row.scenario.validate().unwrap();
                assert!(row.scenario.is_reference_design());
            }
        }
        assert!(preset(4).is_err());
    }
}
