//! The `coverage-grid` command: map the region of user positions whose
//! ergodic sum rate clears a target, one layer per FGM dependence parameter.
//!
//! Output is long-format CSV (`theta_fgm,d1,d2,rate,in_region`) so plotting
//! tools can facet on theta without reshaping.

use crate::csvout::CsvDoc;
use crate::numfmt::{fmt_bool, fmt_num};
use crate::params::{db_to_linear, method_name, GridArgs, GridParams};
use anyhow::{Context, Result};
use dirtymac::{coverage_region, AvgSnrPair, CoverageResult, DependenceModel, GridSpec};

pub struct GridOutput {
    pub doc: CsvDoc,
    /// (theta, covered area) per requested layer, in input order.
    pub areas: Vec<(f64, f64)>,
}

pub fn build(p: &GridParams) -> Result<GridOutput> {
    let gbar1 = db_to_linear(p.gbar1_db);
    let unit_snrs = AvgSnrPair::new(gbar1, p.mu * gbar1)?;
    let grid = GridSpec::new(p.d1_max, p.d2_max, p.n1, p.n2)?;

    let mut doc = CsvDoc::new("coverage-grid");
    if let Some(name) = &p.preset {
        doc.meta("preset", name);
    }
    doc.meta("alpha", fmt_num(p.alpha));
    doc.meta("gbar1_db", fmt_num(p.gbar1_db));
    doc.meta("mu", fmt_num(p.mu));
    doc.meta(
        "theta_fgm",
        p.theta_fgm.iter().map(|&t| fmt_num(t)).collect::<Vec<_>>().join(","),
    );
    doc.meta("target_rate", fmt_num(p.target_rate));
    doc.meta("grid", format!("{}x{}", p.n1, p.n2));
    doc.meta("d1_max", fmt_num(p.d1_max));
    doc.meta("d2_max", fmt_num(p.d2_max));
    doc.meta("method", method_name(p.method));

    let mut layers: Vec<(f64, CoverageResult)> = Vec::new();
    for &theta in &p.theta_fgm {
        let model = DependenceModel::fgm(theta)?;
        let result = coverage_region(model, unit_snrs, p.alpha, p.target_rate, grid, p.method)
            .with_context(|| format!("coverage layer theta = {theta}"))?;
        layers.push((theta, result));
    }
    let areas: Vec<(f64, f64)> = layers.iter().map(|(t, r)| (*t, r.area)).collect();
    for &(theta, area) in &areas {
        doc.meta(&format!("area_t{}", fmt_num(theta)), fmt_num(area));
    }

    doc.header(
        ["theta_fgm", "d1", "d2", "rate", "in_region"]
            .map(String::from)
            .to_vec(),
    );
    for (theta, result) in &layers {
        for i1 in 0..p.n1 {
            for i2 in 0..p.n2 {
                doc.row(vec![
                    fmt_num(*theta),
                    fmt_num(grid.d1_center(i1)),
                    fmt_num(grid.d2_center(i2)),
                    fmt_num(result.rate_at(i1, i2)),
                    fmt_bool(result.in_region_at(i1, i2)),
                ]);
            }
        }
    }
    Ok(GridOutput { doc, areas })
}

pub fn run(args: &GridArgs) -> Result<()> {
    let p = GridParams::resolve(args)?;
    let out = build(&p)?;
    out.doc.save(&args.out)?;
    for (theta, area) in &out.areas {
        println!(
            "coverage-grid: theta_fgm = {} covers area {}",
            fmt_num(*theta),
            fmt_num(*area)
        );
    }
    println!(
        "coverage-grid: {} rows -> {}",
        out.doc.rows(),
        args.out.display()
    );
    Ok(())
}
