//! Closed-form figure data: fidelity and probability curves over the
//! entanglement parameter.

use anyhow::Result;
use clap::ValueEnum;
use telefock::closed_form::{self, FidelityCurvePoint};

use crate::config::SweepConfig;
use crate::output::{write_table, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    /// Average and post-selected fidelity: columns (q, F_av, F_1)
    Fig2,
    /// N-photon output probabilities: columns (q, P1..P4)
    Fig3,
    /// Cloning fidelities: columns (q, F_1, F_2, F_3, F_4, F_100)
    Fig4,
}

pub fn run(which: FigureKind, cfg: &SweepConfig) -> Result<()> {
    let qs = cfg.figure_q_values();
    let mut table = match which {
        FigureKind::Fig2 => Table::new(&["q", "F_av", "F_1"]),
        FigureKind::Fig3 => Table::new(&["q", "P1", "P2", "P3", "P4"]),
        FigureKind::Fig4 => Table::new(&["q", "F_1", "F_2", "F_3", "F_4", "F_100"]),
    };
    for &q in &qs {
        let row: Vec<Cell> = match which {
            FigureKind::Fig2 => vec![
                q.into(),
                FidelityCurvePoint::f_average(q).value.into(),
                FidelityCurvePoint::f_one(q).value.into(),
            ],
            FigureKind::Fig3 => {
                let mut row: Vec<Cell> = vec![q.into()];
                row.extend((1..=4).map(|n| Cell::from(closed_form::total_p(q, n))));
                row
            }
            FigureKind::Fig4 => {
                let mut row: Vec<Cell> = vec![q.into()];
                row.extend(
                    [1, 2, 3, 4, 100].map(|n| Cell::from(FidelityCurvePoint::f_clone(q, n).value)),
                );
                row
            }
        };
        table.push_row(row);
    }
    write_table(&cfg.output, cfg.format, &table)?;
    println!(
        "wrote {} rows to {}",
        table.rows.len(),
        cfg.output.display()
    );
    Ok(())
}
