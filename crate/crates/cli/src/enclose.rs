use std::path::Path;

use anyhow::{anyhow, bail, Context};
use darboux_core::darboux::{self, DirichletOracle, HistoryPoint, ThomaeOracle};
use darboux_core::{parse, DarbouxEnclosure, ExtendedExpr, Interval, RangeOracle};
use serde::Serialize;

use crate::args::EncloseArgs;
use crate::report::Report;

#[derive(Debug, Serialize)]
struct Input<'a> {
    f: Option<&'a str>,
    oracle: Option<&'a str>,
    zero_extend: bool,
    a: f64,
    b: f64,
    tol: f64,
    max_steps: usize,
}

#[derive(Debug, Serialize)]
struct Summary {
    lower_integral: Interval,
    upper_integral: Interval,
    lower_sum: f64,
    upper_sum: f64,
    gap: f64,
    partition_size: usize,
    refinement_steps: usize,
    converged: bool,
    inconclusive: bool,
    history_points: usize,
}

impl From<&DarbouxEnclosure> for Summary {
    fn from(e: &DarbouxEnclosure) -> Self {
        Summary {
            lower_integral: e.lower_integral,
            upper_integral: e.upper_integral,
            lower_sum: e.best_lower_sum(),
            upper_sum: e.best_upper_sum(),
            gap: e.gap(),
            partition_size: e.partition_size,
            refinement_steps: e.refinement_steps,
            converged: e.converged,
            inconclusive: e.inconclusive,
            history_points: e.history.len(),
        }
    }
}

pub fn domain(a: f64, b: f64) -> anyhow::Result<Interval> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        bail!("domain endpoints must be finite with a < b (got a = {a}, b = {b})");
    }
    Ok(Interval::new(a, b).unwrap())
}

pub fn parse_expr(src: &str, zero_extend: bool) -> anyhow::Result<ExtendedExpr> {
    let e = parse(src).map_err(|e| anyhow!("{e}"))?;
    Ok(ExtendedExpr::new(e, zero_extend))
}

pub fn write_history(path: &Path, history: &[HistoryPoint]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for point in history {
        w.serialize(point)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &EncloseArgs) -> anyhow::Result<u8> {
    let dom = domain(args.a, args.b)?;
    let oracle: Box<dyn RangeOracle> = match (&args.f, args.oracle.as_deref()) {
        (Some(src), _) => Box::new(parse_expr(src, args.zero_extend)?),
        (None, Some("dirichlet")) => Box::new(DirichletOracle),
        (None, Some("thomae-like")) => Box::new(ThomaeOracle::default()),
        (None, other) => bail!("unknown oracle {other:?}"),
    };
    let enclosure = darboux::enclose(oracle.as_ref(), dom, args.tol, args.max_steps)?;
    if let Some(path) = &args.csv {
        write_history(path, &enclosure.history)?;
    }
    let code = if enclosure.converged { 0 } else { 2 };
    let input = Input {
        f: args.f.as_deref(),
        oracle: args.oracle.as_deref(),
        zero_extend: args.zero_extend,
        a: args.a,
        b: args.b,
        tol: args.tol,
        max_steps: args.max_steps,
    };
    Report::new("enclose", input, Summary::from(&enclosure), code).emit(args.output.out.as_deref())?;
    Ok(code)
}
