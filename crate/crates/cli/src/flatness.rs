use anyhow::{anyhow, bail};
use darboux_core::flatness::{
    self, ChainTrace, ConditionReport, ConditionStatus, FlatCandidate, FlatnessError,
};
use darboux_core::Interval;
use serde::Serialize;

use crate::args::FlatnessArgs;
use crate::enclose::parse_expr;
use crate::report::Report;

#[derive(Debug, Serialize)]
struct Input<'a> {
    f: &'a str,
    zero_extend: bool,
    c: f64,
    n: &'a [u32],
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum MinEn {
    /// `|f(x)| < x^n` on all of the scanned range.
    Empty,
    Bracket { bracket: Interval },
    Inconclusive { reason: String },
}

#[derive(Debug, Serialize)]
struct MinEnEntry {
    n: u32,
    #[serde(flatten)]
    min_en: MinEn,
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum Chain {
    Evaluated { trace: ChainTrace },
    Skipped { reason: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Serialize)]
struct ChainEntry {
    n: u32,
    #[serde(flatten)]
    chain: Chain,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Verdict {
    Certified,
    Inconclusive,
    Falsified,
}

#[derive(Debug, Serialize)]
struct Outcome {
    verdict: Verdict,
    zero: ConditionReport,
    uno: Vec<ConditionReport>,
    stoica: ConditionReport,
    /// Certified bound on `|f'|` over `[2^-20, 1]`, present when zero and
    /// stoica both hold.
    derivative_bound: Option<f64>,
    min_en: Vec<MinEnEntry>,
    chains: Vec<ChainEntry>,
}

fn is_inconclusive(r: &ConditionReport) -> bool {
    matches!(r.status, ConditionStatus::Inconclusive { .. })
}

pub fn run(args: &FlatnessArgs) -> anyhow::Result<u8> {
    if let Some(&n) = args.n.iter().find(|&&n| n < 2) {
        bail!("{}", FlatnessError::InvalidOrder(n));
    }
    let f = parse_expr(&args.f, args.zero_extend)?;
    let cand = FlatCandidate::new(f, args.c).map_err(|e| anyhow!("{e} (got {})", args.c))?;

    let zero = flatness::check_zero(&cand);
    let stoica = flatness::check_stoica(&cand);
    let uno = args
        .n
        .iter()
        .map(|&n| flatness::check_uno(&cand, n))
        .collect::<Result<Vec<_>, _>>()?;
    let derivative_bound = if zero.holds() && stoica.holds() {
        flatness::derivative_bound(&cand).ok()
    } else {
        None
    };

    let min_en: Vec<MinEnEntry> = args
        .n
        .iter()
        .map(|&n| MinEnEntry {
            n,
            min_en: match flatness::locate_min_en(&cand, n) {
                Ok(None) => MinEn::Empty,
                Ok(Some(bracket)) => MinEn::Bracket { bracket },
                Err(e) => MinEn::Inconclusive { reason: e.to_string() },
            },
        })
        .collect();

    let chains: Vec<ChainEntry> = args
        .n
        .iter()
        .map(|&n| ChainEntry {
            n,
            chain: match flatness::chain_evaluate(&cand, n) {
                Ok(trace) => Chain::Evaluated { trace },
                Err(e @ FlatnessError::PreconditionViolated { .. }) => Chain::Skipped { reason: e.to_string() },
                Err(e) => Chain::Inconclusive { reason: e.to_string() },
            },
        })
        .collect();

    let conditions = || std::iter::once(&zero).chain(&uno).chain(std::iter::once(&stoica));
    let verdict = if conditions().any(ConditionReport::is_falsified) {
        Verdict::Falsified
    } else if conditions().any(is_inconclusive)
        || min_en.iter().any(|m| matches!(m.min_en, MinEn::Inconclusive { .. }))
        || chains.iter().any(|c| matches!(c.chain, Chain::Inconclusive { .. }))
    {
        Verdict::Inconclusive
    } else {
        Verdict::Certified
    };
    let code = match verdict {
        Verdict::Certified => 0,
        Verdict::Inconclusive => 2,
        Verdict::Falsified => 4,
    };

    let outcome = Outcome { verdict, zero, uno, stoica, derivative_bound, min_en, chains };
    let input = Input { f: &args.f, zero_extend: args.zero_extend, c: args.c, n: &args.n };
    Report::new("flatness", input, outcome, code).emit(args.output.out.as_deref())?;
    Ok(code)
}
