use anyhow::bail;
use darboux_core::volterra::{self, SandwichVerdict, VolterraError};
use darboux_core::{Interval, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::VolterraArgs;
use crate::enclose::{domain, parse_expr};
use crate::report::Report;

#[derive(Debug, Serialize)]
struct Input<'a> {
    big_h: &'a str,
    derivative: String,
    zero_extend: bool,
    a: f64,
    b: f64,
    uniform: &'a [usize],
    random: &'a [usize],
    seed: u64,
    ftc: bool,
    tol: f64,
    max_steps: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum PartitionKind {
    Uniform,
    Random,
}

#[derive(Debug, Serialize)]
struct Verdict {
    kind: PartitionKind,
    blocks: usize,
    #[serde(flatten)]
    verdict: SandwichVerdict,
}

#[derive(Debug, Serialize)]
struct Ftc {
    converged: bool,
    lower_sum: f64,
    upper_sum: f64,
    refinement_steps: usize,
    increment_enclosure: Option<Interval>,
    /// For a converged run: the bracket meets the increment. Otherwise:
    /// the sandwich with the final sums holds.
    consistent: bool,
}

#[derive(Debug, Serialize)]
struct Outcome {
    all_pass: bool,
    unverified_hypothesis: bool,
    note: Option<&'static str>,
    verdicts: Vec<Verdict>,
    ftc: Option<Ftc>,
}

/// `blocks` pieces with uniformly random interior points.
pub fn random_partition(rng: &mut ChaCha8Rng, a: f64, b: f64, blocks: usize) -> Partition {
    loop {
        let mut pts: Vec<f64> = (1..blocks).map(|_| a + (b - a) * rng.gen::<f64>()).collect();
        pts.push(a);
        pts.push(b);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        if pts.len() == blocks + 1 {
            if let Ok(p) = Partition::new(pts) {
                return p;
            }
        }
    }
}

pub fn run(args: &VolterraArgs) -> anyhow::Result<u8> {
    let dom = domain(args.a, args.b)?;
    let big_h = parse_expr(&args.big_h, args.zero_extend)?;
    if args.uniform.is_empty() && args.random.is_empty() {
        bail!("no partitions requested; pass --uniform and/or --random");
    }
    if args.uniform.iter().chain(&args.random).any(|&n| n == 0) {
        bail!("partition block counts must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut partitions = Vec::new();
    for &n in &args.uniform {
        partitions.push((PartitionKind::Uniform, n, Partition::uniform(args.a, args.b, n)?));
    }
    for &n in &args.random {
        partitions.push((PartitionKind::Random, n, random_partition(&mut rng, args.a, args.b, n)));
    }

    let mut verdicts = Vec::new();
    let mut unverified = false;
    for (kind, blocks, p) in &partitions {
        match volterra::sandwich_check(&big_h, dom, p) {
            Ok(verdict) => verdicts.push(Verdict { kind: *kind, blocks: *blocks, verdict }),
            Err(VolterraError::UnverifiedHypothesis) => {
                unverified = true;
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }

    let ftc = if args.ftc && !unverified {
        Some(match volterra::ftc_reconstruct(&big_h, dom, args.tol, args.max_steps) {
            Ok(r) => Ftc {
                converged: true,
                lower_sum: r.bracket.lo(),
                upper_sum: r.bracket.hi(),
                refinement_steps: r.enclosure.refinement_steps,
                increment_enclosure: Some(r.increment),
                consistent: r.contains_increment,
            },
            Err(VolterraError::NotConverged { enclosure, increment, sandwich_holds }) => Ftc {
                converged: false,
                lower_sum: enclosure.best_lower_sum(),
                upper_sum: enclosure.best_upper_sum(),
                refinement_steps: enclosure.refinement_steps,
                increment_enclosure: increment,
                consistent: sandwich_holds,
            },
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };

    let all_pass = !unverified && verdicts.iter().all(|v| v.verdict.pass);
    let code = if unverified {
        3
    } else if all_pass {
        0
    } else {
        2
    };
    let outcome = Outcome {
        all_pass,
        unverified_hypothesis: unverified,
        note: unverified.then_some("unverified-hypothesis: H' could not be certified bounded on the domain"),
        verdicts,
        ftc,
    };
    let input = Input {
        big_h: &args.big_h,
        derivative: big_h.base.derivative().to_string(),
        zero_extend: args.zero_extend,
        a: args.a,
        b: args.b,
        uniform: &args.uniform,
        random: &args.random,
        seed: args.seed,
        ftc: args.ftc,
        tol: args.tol,
        max_steps: args.max_steps,
    };
    Report::new("volterra", input, outcome, code).emit(args.output.out.as_deref())?;
    Ok(code)
}
