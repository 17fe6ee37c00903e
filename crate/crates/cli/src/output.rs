use std::io::Write;

use fracmat::{Grid, Solution, StackedField};
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Serialize)]
struct GridInfo {
    a: f64,
    b: f64,
    t_final: f64,
    m: usize,
    n: usize,
    h: f64,
    tau: f64,
    unknowns: usize,
    x: Vec<f64>,
    t: Vec<f64>,
}

/// JSON document; fields are indexed `[j][i]` (time layer, then space).
#[derive(Debug, Serialize)]
struct JsonOutput<'a> {
    config: &'a RunConfig,
    grid: GridInfo,
    residual_inf: f64,
    elapsed_ms: f64,
    field_y: Vec<Vec<f64>>,
    field_u: Option<Vec<Vec<f64>>>,
}

fn grid_info(g: &Grid, unknowns: usize) -> GridInfo {
    GridInfo {
        a: g.a(),
        b: g.b(),
        t_final: g.t_final(),
        m: g.m(),
        n: g.n(),
        h: g.h(),
        tau: g.tau(),
        unknowns,
        x: (0..=g.m()).map(|i| g.x(i)).collect(),
        t: (0..=g.n()).map(|j| g.t(j)).collect(),
    }
}

pub fn write_json(out: impl Write, cfg: &RunConfig, sol: &Solution) -> Result<(), CliError> {
    let doc = JsonOutput {
        config: cfg,
        grid: grid_info(sol.y.grid(), sol.unknowns),
        residual_inf: sol.report.residual_inf_norm,
        elapsed_ms: sol.report.elapsed.as_secs_f64() * 1e3,
        field_y: sol.y.unstack(),
        field_u: sol.u.as_ref().map(StackedField::unstack),
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// Header `x,t,y[,u]`; rows by ascending `x`, then ascending `t`.
pub fn write_csv(out: impl Write, sol: &Solution) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let g = sol.y.grid();
    if sol.u.is_some() {
        w.write_record(["x", "t", "y", "u"])?;
    } else {
        w.write_record(["x", "t", "y"])?;
    }
    for i in 0..=g.m() {
        for j in 0..=g.n() {
            let mut row = vec![
                g.x(i).to_string(),
                g.t(j).to_string(),
                sol.y.value(i, j).to_string(),
            ];
            if let Some(u) = &sol.u {
                row.push(u.value(i, j).to_string());
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}
