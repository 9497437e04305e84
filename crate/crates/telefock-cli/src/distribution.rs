//! Joint photon-number table for one squeezing value and input qubit:
//! numeric quadrature values next to the closed forms of the
//! basis-equivalent frame, with pointwise differences.

use anyhow::{bail, Result};
use num_complex::Complex64 as C64;
use telefock::closed_form;
use telefock::fock::TruncationConfig;
use telefock::quadrature::{numeric_joint_distribution, DistributionLayout, JointFrame, QuadratureGrid};
use telefock::teleport::{PolarizationQubit, SqueezingParameter};

use crate::config::SweepConfig;
use crate::output::{write_table, Cell, Table};

/// Accepts `re,im,re,im`; amplitudes off the unit sphere by less than 1e-6
/// are normalized with a warning, anything farther off is rejected.
pub fn parse_qubit(raw: &str) -> Result<PolarizationQubit> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("qubit must be four comma-separated reals: cH_re,cH_im,cV_re,cV_im");
    }
    let values: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| anyhow::anyhow!("bad qubit component {p:?}: {e}"))
        })
        .collect::<Result<_>>()?;
    let c_h = C64::new(values[0], values[1]);
    let c_v = C64::new(values[2], values[3]);
    let norm_sqr = c_h.norm_sqr() + c_v.norm_sqr();
    if !norm_sqr.is_finite() || (norm_sqr.sqrt() - 1.0).abs() >= 1e-6 {
        bail!(
            "qubit amplitudes have norm {:.9}; must be 1 within 1e-6",
            norm_sqr.sqrt()
        );
    }
    if (norm_sqr - 1.0).abs() > 1e-12 {
        eprintln!(
            "warning: renormalizing qubit amplitudes (|norm - 1| = {:.3e})",
            (norm_sqr.sqrt() - 1.0).abs()
        );
    }
    Ok(PolarizationQubit::normalized(c_h, c_v)?)
}

pub fn run(q_value: f64, qubit: &PolarizationQubit, cfg: &SweepConfig) -> Result<()> {
    cfg.check_numeric_range(q_value)?;
    let q = SqueezingParameter::new(q_value)?;
    let trunc = TruncationConfig::with_dim(cfg.dim)?;
    let grid = QuadratureGrid::for_params(q, cfg.radial, cfg.angular, cfg.radius_mult)?;
    let n_max = cfg.n_max.min(trunc.dim().saturating_sub(6));
    let joint = numeric_joint_distribution(q, qubit, n_max, &grid, &trunc)?;
    let DistributionLayout::Joint { frame, .. } = joint.layout() else {
        unreachable!("joint distribution has joint layout");
    };
    let (col_a, col_b) = match frame {
        JointFrame::QubitAligned => ("n_par", "n_perp"),
        _ => ("n_h", "n_v"),
    };
    let mut table = Table::new(&[col_a, col_b, "numeric", "closed_form", "abs_diff"]);
    for i in 0..=n_max {
        for j in 0..=n_max {
            let numeric = joint.joint(i, j);
            // closed form in the frame the axes refer to: the signal photon
            // sits on the first axis except for the vertical basis input.
            let closed = match frame {
                JointFrame::VerticalHorizontal => closed_form::joint_p(q_value, j, i),
                _ => closed_form::joint_p(q_value, i, j),
            };
            table.push_row(vec![
                Cell::Number(i as f64),
                Cell::Number(j as f64),
                Cell::Number(numeric),
                Cell::Number(closed),
                Cell::Number((numeric - closed).abs()),
            ]);
        }
    }
    write_table(&cfg.output, cfg.format, &table)?;
    println!(
        "wrote {} rows to {} (residual mass {:.3e}, grid error {:.3e})",
        table.rows.len(),
        cfg.output.display(),
        joint.residual_mass(),
        joint.grid_estimate_error()
    );
    Ok(())
}
