use std::path::Path;

use mixcenter::discrete_mix::{
    enumerate_centers, ex01_couplings, lp_feasible_center, FeasibilityOptions,
};
use mixcenter::Coupling;
use serde::Serialize;

use super::{load_finite_marginals, write_json};
use crate::args::{CentersArgs, Ex01Args, FeasibleArgs, LpArgs};
use crate::error::CliResult;
use crate::output::{fmt_f64, Output, Table};

fn options(lp: &LpArgs) -> FeasibilityOptions {
    FeasibilityOptions {
        tol: lp.tol,
        exact: lp.exact,
    }
}

fn coupling_rows(label: Option<&str>, c: &Coupling, rows: &mut Vec<Vec<String>>) {
    for (tuple, &w) in c.support.iter().zip(&c.weights) {
        let mut row: Vec<String> = label.map(String::from).into_iter().collect();
        row.extend(tuple.iter().map(|&x| fmt_f64(x)));
        row.push(fmt_f64(w));
        rows.push(row);
    }
}

fn coupling_headers(label: bool, n: usize) -> Vec<String> {
    let mut h: Vec<String> = label.then(|| "coupling".to_string()).into_iter().collect();
    h.extend((1..=n).map(|j| format!("x{j}")));
    h.push("weight".into());
    h
}

pub fn feasible(args: &FeasibleArgs) -> CliResult<Output> {
    let marginals = load_finite_marginals(&args.marginals)?;
    let verdict = lp_feasible_center(&marginals, args.center, options(&args.lp))?;
    let mut out = Output::new(&verdict);
    if let Some(c) = verdict.coupling() {
        let mut rows = Vec::new();
        coupling_rows(None, c, &mut rows);
        out = out.with_table(Table {
            headers: coupling_headers(false, c.n),
            rows,
        });
    }
    Ok(out)
}

pub fn centers(args: &CentersArgs) -> CliResult<Output> {
    let marginals = load_finite_marginals(&args.marginals)?;
    let set = enumerate_centers(&marginals, options(&args.lp))?;
    let rows = set.centers.iter().map(|&c| vec![fmt_f64(c)]).collect();
    Ok(Output::new(&set).with_table(Table {
        headers: vec!["center".into()],
        rows,
    }))
}

#[derive(Debug, Serialize)]
struct Ex01Result<'a> {
    k: u32,
    x: &'a Coupling,
    y: &'a Coupling,
    x_row_sums: Vec<f64>,
    y_row_sums: Vec<f64>,
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

pub fn ex01(args: &Ex01Args) -> CliResult<Output> {
    let e = ex01_couplings(args.k)?;
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).map_err(crate::error::CliError::io(dir))?;
        write_json(&Path::new(dir).join("ex01_x.json"), &e.mix_x)?;
        write_json(&Path::new(dir).join("ex01_y.json"), &e.mix_y)?;
    }
    let mut rows = Vec::new();
    coupling_rows(Some("x"), &e.mix_x, &mut rows);
    coupling_rows(Some("y"), &e.mix_y, &mut rows);
    Ok(Output::new(Ex01Result {
        k: e.k,
        x: &e.mix_x,
        y: &e.mix_y,
        x_row_sums: distinct(e.mix_x.row_sums()),
        y_row_sums: distinct(e.mix_y.row_sums()),
    })
    .with_table(Table {
        headers: coupling_headers(true, 3),
        rows,
    }))
}
