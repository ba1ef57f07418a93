use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use commat_core::analytic::{euler_f_infinity, plane_constant, shifted_plane_constant};
use commat_core::asymptotics::{
    c_bound_report, pole_products, prop_bound_diag, remainders, CoefficientTable,
};
use commat_core::brute::{
    count_commuting_nilpotent_pairs, count_commuting_pairs, count_nilpotent, DEFAULT_BUDGET,
};
use commat_core::cohen_lenstra::{nilp_ratio_series, CLSeriesParams};
use commat_core::counts::{
    commuting_growth_ratio, commuting_pairs, commuting_series, nilpotent_commuting_pairs,
    nilpotent_commuting_series_coeff, nilpotent_count, nilpotent_series_coeff,
};
use commat_core::validation::{checks, run_guarded, Level};
use commat_core::{Error, PrimePower};
use num_bigint::BigUint;

use crate::args::{
    BruteKind, Command, CountKind, FieldArgs, NilpotentKind, OutputArgs, VerifyLevel,
};
use crate::output::{Emitter, OutputRecord};
use crate::{EXIT_INCONSISTENT, EXIT_OK, EXIT_REFUSED, EXIT_USAGE};

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_refusal() {
            EXIT_REFUSED
        } else if e.is_inconsistency() {
            EXIT_INCONSISTENT
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("write failed: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

fn field(args: &FieldArgs) -> Result<PrimePower, Failure> {
    Ok(match (args.q, args.p) {
        (Some(q), _) => PrimePower::from_q(q)?,
        (None, Some(p)) => PrimePower::new(p, args.r.unwrap_or(1))?,
        (None, None) => return Err(usage("one of --q or --p is required")),
    })
}

/// Shared state for one subcommand: emitter, echoed params and timing.
struct Session<'a> {
    command: &'static str,
    params: BTreeMap<String, String>,
    digits: u32,
    timing: bool,
    emitter: Emitter<'a>,
}

impl<'a> Session<'a> {
    fn new(command: &'static str, out_args: &OutputArgs, out: &'a mut dyn Write) -> Self {
        let mut params = BTreeMap::new();
        params.insert("digits".to_string(), out_args.digits.to_string());
        Session {
            command,
            params,
            digits: out_args.digits,
            timing: out_args.timing,
            emitter: Emitter::new(out_args.format, out),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    fn record(&self, label: &str) -> OutputRecord {
        OutputRecord::new(self.command, &self.params, label)
    }

    fn emit(&mut self, mut rec: OutputRecord, started: Instant) -> Result<(), Failure> {
        if self.timing {
            rec.elapsed_ms = started.elapsed().as_millis() as u64;
        }
        Ok(self.emitter.emit(&rec)?)
    }
}

pub fn execute(command: Command, env_budget: Option<String>, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Count {
            field: f,
            n,
            kind,
            out: o,
        } => count(&field(&f)?, &n, kind, &o, out),
        Command::Nilpotent {
            field: f,
            n,
            kind,
            out: o,
        } => nilpotent(&field(&f)?, &n, kind, &o, out),
        Command::CoeffC {
            field: f,
            m,
            n,
            bounds,
            epsilon,
            out: o,
        } => coeff_c(&field(&f)?, &m, n.as_deref(), bounds, epsilon, &o, out),
        Command::Expand {
            field: f,
            n,
            big_n,
            out: o,
        } => expand(&field(&f)?, &n, big_n, &o, out),
        Command::Remainder {
            field: f,
            n,
            big_n,
            out: o,
        } => remainder(&field(&f)?, &n, big_n, &o, out),
        Command::ClSeries {
            field: f,
            n,
            big_m,
            big_n,
            out: o,
        } => cl_series(&field(&f)?, &n, big_m, big_n, &o, out),
        Command::Brute {
            field: f,
            n,
            kind,
            budget,
            out: o,
        } => {
            let budget = match (budget, env_budget) {
                (Some(b), _) => b,
                (None, Some(s)) => s.trim().parse().map_err(|_| {
                    usage(format!(
                        "{} must be a non-negative integer, got {s:?}",
                        crate::BUDGET_ENV
                    ))
                })?,
                (None, None) => DEFAULT_BUDGET,
            };
            brute(&field(&f)?, &n, kind, budget, &o, out)
        }
        Command::Constants { field: f, out: o } => constants(&field(&f)?, &o, out),
        Command::Verify { level, out: o } => verify(level, &o, out),
    }
}

fn count(
    q: &PrimePower,
    ns: &[u32],
    kind: CountKind,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    let mut s = Session::new("count", o, out);
    s.param("q", q);
    let series = match kind {
        CountKind::Series => commuting_series(q, ns.iter().copied().max().unwrap_or(0)),
        _ => Vec::new(),
    };
    for &n in ns {
        let t = Instant::now();
        s.param("n", n);
        let rec = match kind {
            CountKind::Pairs => s.record("Q").integer(&commuting_pairs(q, n)?.value),
            CountKind::Series => s.record("Q/|GL|").rational(&series[n as usize], s.digits),
            CountKind::Growth => s
                .record("Q/q^(n^2+n)")
                .rational(&commuting_growth_ratio(q, n)?, s.digits),
        };
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn nilpotent(
    q: &PrimePower,
    ns: &[u32],
    kind: NilpotentKind,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    let mut s = Session::new("nilpotent", o, out);
    s.param("q", q);
    for &n in ns {
        let t = Instant::now();
        s.param("n", n);
        let rec = match kind {
            NilpotentKind::Count => s.record("|Nilp|").integer(&nilpotent_count(q, n)?.value),
            NilpotentKind::Ratio => s
                .record("|Nilp|/|GL|")
                .rational(&nilpotent_series_coeff(q, n), s.digits),
            NilpotentKind::Pairs => s
                .record("nilpotent pairs")
                .integer(&nilpotent_commuting_pairs(q, n)?.value),
            NilpotentKind::PairsRatio => s
                .record("nilpotent pairs/|GL|")
                .rational(&nilpotent_commuting_series_coeff(q, n), s.digits),
        };
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn coeff_c(
    q: &PrimePower,
    ms: &[u32],
    ns: Option<&[u32]>,
    bounds: bool,
    epsilon: f64,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    if ms.contains(&0) {
        return Err(usage("--m values must be >= 1"));
    }
    let mut s = Session::new("coeff-c", o, out);
    s.param("q", q);
    for &m in ms {
        let t = Instant::now();
        let poles = pole_products(q, m, s.digits)?;
        s.param("m", m);
        let residues: Vec<u32> = match ns {
            Some(ns) => ns.to_vec(),
            None => (1..=m).collect(),
        };
        for n in residues {
            let t = Instant::now();
            s.param("n", n);
            let c = poles.coefficient(n as i64)?;
            let rec = s
                .record("C")
                .ball(&c, s.digits)
                .with_param("residue", n % m);
            s.emit(rec, t)?;
        }
        s.params.remove("n");
        if bounds {
            let report = c_bound_report(q, m, s.digits)?;
            let rec = s.record("c_bound").ball(&report.bound, s.digits);
            s.emit(rec, t)?;
            let mut rec = s.record("argmax_j").integer(&BigUint::from(report.argmax));
            rec.detail = Some(format!(
                "|P_m F| at the m-th roots: {}",
                report
                    .moduli
                    .iter()
                    .map(|v| format!("{v:.6e}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            s.emit(rec, t)?;
            let diag = prop_bound_diag(q, m, epsilon, s.digits)?;
            let rec = s
                .record("exp_bound")
                .ball(&diag, s.digits)
                .with_param("epsilon", epsilon);
            s.emit(rec, t)?;
        }
    }
    Ok(EXIT_OK)
}

fn expand(q: &PrimePower, ns: &[u32], big_n: u32, o: &OutputArgs, out: &mut dyn Write) -> Outcome {
    if big_n == 0 {
        return Err(usage("--N must be >= 1 for expand"));
    }
    let mut s = Session::new("expand", o, out);
    s.param("q", q);
    s.param("N", big_n);
    let table = CoefficientTable::build(q, big_n, s.digits)?;
    for &n in ns {
        let t = Instant::now();
        s.param("n", n);
        let v = table.expansion(n, big_n)?;
        let rec = s.record("expansion").ball(&v, s.digits);
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn remainder(
    q: &PrimePower,
    ns: &[u32],
    big_n: u32,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    let mut s = Session::new("remainder", o, out);
    s.param("q", q);
    s.param("N", big_n);
    let t = Instant::now();
    let rems = remainders(q, ns, big_n, s.digits)?;
    for (&n, r) in ns.iter().zip(&rems) {
        s.param("n", n);
        let rec = s.record("remainder").ball(r, s.digits);
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn cl_series(
    q: &PrimePower,
    ns: &[u32],
    big_m: u32,
    big_n: u32,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    let mut s = Session::new("cl-series", o, out);
    s.param("q", q);
    s.param("M", big_m);
    s.param("N", big_n);
    for &n in ns {
        let t = Instant::now();
        s.param("n", n);
        let params = CLSeriesParams::new(q.clone(), n, big_m, big_n, s.digits)?;
        let v = nilp_ratio_series(&params)?;
        let rec = s.record("series").ball(&v.value, s.digits);
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn brute(
    q: &PrimePower,
    ns: &[u32],
    kind: BruteKind,
    budget: u128,
    o: &OutputArgs,
    out: &mut dyn Write,
) -> Outcome {
    if q.r() != 1 {
        return Err(usage(format!(
            "brute-force enumeration needs a prime field, got q = {q}"
        )));
    }
    let p = u32::try_from(q.p()).map_err(|_| usage("p is too large for enumeration"))?;
    let mut s = Session::new("brute", o, out);
    s.param("q", q);
    s.param("budget", budget);
    for &n in ns {
        let t = Instant::now();
        s.param("n", n);
        let (label, v) = match kind {
            BruteKind::Pairs => ("Q", count_commuting_pairs(p, n as usize, budget)?),
            BruteKind::Nilpotent => ("|Nilp|", count_nilpotent(p, n as usize, budget)?),
            BruteKind::NilpotentPairs => (
                "nilpotent pairs",
                count_commuting_nilpotent_pairs(p, n as usize, budget)?,
            ),
        };
        let rec = s.record(label).integer(&v);
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn constants(q: &PrimePower, o: &OutputArgs, out: &mut dyn Write) -> Outcome {
    let mut s = Session::new("constants", o, out);
    s.param("q", q);
    let d = s.digits;
    let t = Instant::now();
    let items = [
        ("plane_constant", plane_constant(q, d)?),
        ("f_infinity", euler_f_infinity(q, d)?),
        ("C_1", shifted_plane_constant(q, d)?),
    ];
    for (label, v) in items {
        let rec = s.record(label).ball(&v, d);
        s.emit(rec, t)?;
    }
    Ok(EXIT_OK)
}

fn verify(level: VerifyLevel, o: &OutputArgs, out: &mut dyn Write) -> Outcome {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let mut s = Session::new("verify", o, out);
    s.params.remove("digits");
    s.param(
        "level",
        if level == Level::Quick {
            "quick"
        } else {
            "full"
        },
    );
    let mut failed = 0;
    for check in checks().iter().filter(|c| level == Level::Full || c.quick) {
        let t = Instant::now();
        s.param("id", check.id);
        let outcome = run_guarded(check, level);
        let mut rec = s.record(check.name);
        rec.certified_error = "n/a".into();
        match outcome {
            Ok(detail) => {
                rec.value = "pass".into();
                rec.detail = Some(detail);
            }
            Err(detail) => {
                failed += 1;
                rec.value = "fail".into();
                rec.detail = Some(detail);
            }
        }
        s.emit(rec, t)?;
    }
    Ok(if failed == 0 {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    })
}
