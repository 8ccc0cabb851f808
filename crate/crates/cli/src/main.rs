mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use overrank::arith::{dedekind_sum, Fraction};
use overrank::asymptotic::{default_kcap, estimate_a, zuckerman_pbar, Estimate};
use overrank::bounds::{
    bound_modulus, bound_report_c, crossover_c, inequality_ids, verify_inequality_with, CrossoverReport, InequalityReport,
};
use overrank::expsums::{kloosterman_a, kloosterman_b, kloosterman_d};
use overrank::hp::{ComplexVal, Real};
use overrank::qseries::{
    class_vector, load_table, pbar_series, rank_table, save_table_csv, save_table_json, zeta_eval_prec, RankTable,
    DEFAULT_TABLE_CAP,
};
use overrank::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use output::{Format, Rendered};

#[derive(Parser)]
#[command(name = "overrank", version, about = "Exact and asymptotic Dyson-rank computations for overpartitions")]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Rank-table cache file (.json or .csv); built on demand and reused.
    #[arg(long, global = true, env = "OVERRANK_CACHE")]
    cache: Option<PathBuf>,

    /// Worker threads for range verification (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Allow table sizes above 2500.
    #[arg(long, global = true)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "A", alias = "a")]
    A,
}

#[derive(Subcommand)]
enum Command {
    /// p̄(0..=n), or the convergent series at n.
    Pbar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        zuckerman: bool,
        /// Series truncation (default 5⌈√n⌉).
        #[arg(long)]
        kcap: Option<i64>,
    },
    /// N̄(m, n) for 0 ≤ n ≤ nmax and m ≥ 0 (N̄(−m, n) = N̄(m, n)).
    Ranks {
        #[arg(long)]
        nmax: usize,
    },
    /// N̄(a, c, n) for every residue a.
    Classes {
        #[arg(long)]
        c: i64,
        #[arg(long)]
        nmax: usize,
    },
    /// A(a/c; n) from the exact table.
    EvalZeta {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: usize,
    },
    /// Truncated main-term estimate of A(a/c; n).
    Asym {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        breakdown: bool,
    },
    /// Estimate against the exact value.
    Compare {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        n: u64,
    },
    /// Exact check of a rank inequality over a range of n (`--id all` for every id).
    Verify {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 0)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Explicit error-bound components at n.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        c: i64,
    },
    /// Smallest n from which the main term dominates every bound.
    Crossover {
        #[arg(long, default_value_t = 10)]
        c: i64,
    },
    /// Dedekind sum s(h, k).
    Dedekind {
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        k: i64,
    },
    /// Kloosterman-type sums; m may be half-integral for D (e.g. -1/2).
    Kloosterman {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        m: String,
    },
}

/// Exit status: 0 pass, 1 violation, 2 usage, 3 internal consistency.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) | Error::Cache(_) | Error::Io(_) | Error::Json(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Rendered, Failure>;

struct Ctx {
    prec: usize,
    cache: Option<PathBuf>,
    threads: usize,
    force: bool,
}

impl Ctx {
    fn digits(&self) -> usize {
        (self.prec as f64 * std::f64::consts::LOG10_2) as usize
    }

    fn check_size(&self, n: usize) -> Result<(), Failure> {
        if n > DEFAULT_TABLE_CAP && !self.force {
            return Err(Failure::Usage(format!("n = {n} exceeds {DEFAULT_TABLE_CAP}; pass --force to allow it")));
        }
        Ok(())
    }

    /// A table covering 0..=n, from the cache when it is large enough.
    fn table(&self, n: usize) -> Result<RankTable, Failure> {
        self.check_size(n)?;
        let Some(path) = &self.cache else { return Ok(rank_table(n)) };
        if path.exists() {
            let t = load_table(path)?;
            if t.n_max() >= n {
                return Ok(t);
            }
        }
        let t = rank_table(n);
        save_cache(&t, path)?;
        Ok(t)
    }
}

fn save_cache(t: &RankTable, path: &Path) -> Result<(), Error> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => save_table_csv(t, path),
        _ => save_table_json(t, path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Ctx { prec: cli.precision as usize, cache: cli.cache, threads: cli.threads, force: cli.force };
    let result = run(&ctx, cli.command);
    match result {
        Ok(r) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(r.render(cli.format).as_bytes());
            ExitCode::from(if r.violation { 1 } else { 0 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(ctx: &Ctx, cmd: Command) -> CmdResult {
    match cmd {
        Command::Pbar { n, zuckerman: false, .. } => pbar(ctx, n),
        Command::Pbar { n, zuckerman: true, kcap } => pbar_series_eval(ctx, n, kcap),
        Command::Ranks { nmax } => ranks(ctx, nmax),
        Command::Classes { c, nmax } => classes(ctx, c, nmax),
        Command::EvalZeta { a, c, n } => eval_zeta(ctx, a, c, n),
        Command::Asym { a, c, n, breakdown } => asym(ctx, a, c, n, breakdown),
        Command::Compare { a, c, n } => compare(ctx, a, c, n),
        Command::Verify { id, from, to } => verify(ctx, &id, from, to),
        Command::Bounds { n, c } => bounds(ctx, n, c),
        Command::Crossover { c } => crossover_cmd(ctx, c),
        Command::Dedekind { h, k } => dedekind(h, k),
        Command::Kloosterman { kind, a, c, k, n, m } => kloosterman(ctx, kind, a, c, k, n, &m),
    }
}

fn pbar(ctx: &Ctx, n: usize) -> CmdResult {
    ctx.check_size(n)?;
    let s = pbar_series(n);
    let values: Vec<String> = s.coeffs().iter().map(|v| v.to_string()).collect();
    Ok(Rendered {
        json: json!({ "n_max": n, "values": values }),
        csv_header: vec!["n", "pbar"],
        csv_rows: values.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.clone()]).collect(),
        text: format!("{}\n", values.join(",")),
        violation: false,
    })
}

fn pbar_series_eval(ctx: &Ctx, n: usize, kcap: Option<i64>) -> CmdResult {
    ctx.check_size(n)?;
    let k_cap = kcap.unwrap_or_else(|| default_kcap(n as u64));
    let v = zuckerman_pbar(n as u64, k_cap, ctx.prec)?;
    let rounded = v.round_to_bigint().ok_or_else(|| Failure::Internal("series value is not finite".into()))?;
    let exact = pbar_series(n).coeff(n).cloned().unwrap_or_default();
    let value = v.to_decimal(v_digits(&v, ctx));
    let matches = rounded == exact;
    Ok(Rendered {
        json: json!({
            "n": n, "k_cap": k_cap, "value": value,
            "rounded": rounded.to_string(), "exact": exact.to_string(), "matches": matches,
        }),
        csv_header: vec!["n", "k_cap", "value", "rounded", "exact", "matches"],
        csv_rows: vec![vec![
            n.to_string(),
            k_cap.to_string(),
            value.clone(),
            rounded.to_string(),
            exact.to_string(),
            matches.to_string(),
        ]],
        text: format!(
            "series(n={n}, k_cap={k_cap}) = {value}\nrounded = {rounded}\nexact   = {exact}\n{}\n",
            if matches { "match" } else { "MISMATCH" }
        ),
        violation: !matches,
    })
}

/// Digits enough to show the integer part plus the requested precision.
fn v_digits(v: &Real, ctx: &Ctx) -> usize {
    let int_digits = v.exponent().map_or(0, |e| (e.max(0) as f64 * std::f64::consts::LOG10_2) as usize + 1);
    int_digits + ctx.digits()
}

fn ranks(ctx: &Ctx, nmax: usize) -> CmdResult {
    let t = ctx.table(nmax)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for n in 0..=nmax {
        let row = t.row(n)?;
        json_rows.push(Value::from(row.iter().map(|(m, v)| json!([m, v.to_string()])).collect::<Vec<_>>()));
        let cells: Vec<String> = row.iter().map(|(m, v)| format!("{m}:{v}")).collect();
        text.push_str(&format!("n={n} {}\n", cells.join(" ")));
        rows.extend(row.into_iter().map(|(m, v)| vec![n.to_string(), m.to_string(), v.to_string()]));
    }
    Ok(Rendered {
        json: json!({ "n_max": nmax, "rows": json_rows }),
        csv_header: vec!["n", "m", "count"],
        csv_rows: rows,
        text,
        violation: false,
    })
}

fn classes(ctx: &Ctx, c: i64, nmax: usize) -> CmdResult {
    if c < 2 {
        return Err(Failure::Usage(format!("c = {c} must be at least 2")));
    }
    let t = ctx.table(nmax)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut text = String::new();
    for n in 0..=nmax {
        let v: Vec<String> = class_vector(c, n, &t)?.iter().map(BigInt::to_string).collect();
        text.push_str(&format!("n={n} ({})\n", v.join(",")));
        rows.extend(v.iter().enumerate().map(|(a, x)| vec![n.to_string(), a.to_string(), x.clone()]));
        json_rows.push(Value::from(v));
    }
    Ok(Rendered {
        json: json!({ "c": c, "n_max": nmax, "rows": json_rows }),
        csv_header: vec!["n", "a", "count"],
        csv_rows: rows,
        text,
        violation: false,
    })
}

fn eval_zeta(ctx: &Ctx, a: i64, c: i64, n: usize) -> CmdResult {
    let t = ctx.table(n)?;
    let z = zeta_eval_prec(a, c, n, &t, ctx.prec)?;
    let reduced = z.element.cyclotomic_reduce();
    let exact = reduced.iter().skip(1).all(|x| x == &BigInt::default()).then(|| reduced[0].to_string());
    let coeffs: Vec<String> = z.element.coeffs().iter().map(BigInt::to_string).collect();
    let value = z.value.to_decimal(v_digits(&z.value, ctx));
    let imag = z.imag.to_decimal(6);
    Ok(Rendered {
        json: json!({ "a": a, "c": c, "n": n, "element": coeffs, "exact": exact, "value": value, "imag": imag }),
        csv_header: vec!["a", "c", "n", "exact", "value", "imag"],
        csv_rows: vec![vec![
            a.to_string(),
            c.to_string(),
            n.to_string(),
            exact.clone().unwrap_or_default(),
            value.clone(),
            imag.clone(),
        ]],
        text: format!("A({a}/{c}; {n}) = {}\n", exact.unwrap_or(value)),
        violation: false,
    })
}

fn complex_json(z: &ComplexVal, digits: usize) -> Value {
    json!({ "re": z.re.to_decimal(digits), "im": z.im.to_decimal(digits) })
}

fn estimate_parts(e: &Estimate, digits: usize) -> (Value, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|t| {
            let (re, im) = (t.contribution.re.to_decimal(digits), t.contribution.im.to_decimal(digits));
            rows.push(vec![
                t.kind.to_string(),
                t.k.to_string(),
                t.r.to_string(),
                t.delta.to_string(),
                t.twice_m.to_string(),
                re.clone(),
                im.clone(),
            ]);
            json!({ "kind": t.kind.to_string(), "k": t.k, "r": t.r, "delta": t.delta.to_string(),
                    "twice_m": t.twice_m, "re": re, "im": im })
        })
        .collect();
    (Value::from(terms), rows)
}

const TERM_HEADER: [&str; 7] = ["kind", "k", "r", "delta", "twice_m", "re", "im"];

fn term_table(rows: &[Vec<String>]) -> String {
    let mut s = format!("{:<4} {:>5} {:>3} {:>10} {:>7}  contribution\n", "kind", "k", "r", "delta", "2m");
    for r in rows {
        s.push_str(&format!("{:<4} {:>5} {:>3} {:>10} {:>7}  {} {}i\n", r[0], r[1], r[2], r[3], r[4], r[5], r[6]));
    }
    s
}

fn asym(ctx: &Ctx, a: i64, c: i64, n: u64, breakdown: bool) -> CmdResult {
    let e = estimate_a(a, c, n, ctx.prec)?;
    let digits = ctx.digits().min(30);
    let (terms, rows) = estimate_parts(&e, digits);
    let mut text = format!("A({a}/{c}; {n}) ≈ {} (imag {})\n", e.value.re.to_decimal(digits), e.value.im.to_decimal(6));
    if breakdown {
        text.push_str(&term_table(&rows));
    }
    let mut j = json!({ "a": a, "c": c, "n": n, "k_max": e.k_max, "value": complex_json(&e.value, digits) });
    if breakdown {
        j["terms"] = terms;
    }
    let (csv_header, csv_rows) = if breakdown {
        (TERM_HEADER.to_vec(), rows)
    } else {
        (vec!["a", "c", "n", "re", "im"], vec![vec![
            a.to_string(),
            c.to_string(),
            n.to_string(),
            e.value.re.to_decimal(digits),
            e.value.im.to_decimal(digits),
        ]])
    };
    Ok(Rendered { json: j, csv_header, csv_rows, text, violation: false })
}

fn compare(ctx: &Ctx, a: i64, c: i64, n: u64) -> CmdResult {
    let t = ctx.table(n as usize)?;
    let exact = zeta_eval_prec(a, c, n as usize, &t, ctx.prec)?.value;
    let e = estimate_a(a, c, n, ctx.prec)?;
    let digits = ctx.digits().min(30);
    let rel = if exact.is_zero() { None } else { Some(((&e.value.re - &exact) / &exact).abs()) };
    let rel_s = rel.as_ref().map(|r| r.to_decimal(6));
    let est_s = e.value.re.to_decimal(digits);
    let exact_s = exact.to_decimal(digits);
    Ok(Rendered {
        json: json!({ "a": a, "c": c, "n": n, "estimate": complex_json(&e.value, digits),
                      "exact": exact_s, "relative_error": rel_s }),
        csv_header: vec!["a", "c", "n", "estimate", "exact", "relative_error"],
        csv_rows: vec![vec![
            a.to_string(),
            c.to_string(),
            n.to_string(),
            est_s.clone(),
            exact_s.clone(),
            rel_s.clone().unwrap_or_default(),
        ]],
        text: format!(
            "estimate = {est_s}\nexact    = {exact_s}\nrelative error = {}\n",
            rel_s.unwrap_or_else(|| "undefined (exact value is 0)".into())
        ),
        violation: false,
    })
}

fn verify(ctx: &Ctx, id: &str, from: usize, to: usize) -> CmdResult {
    let ids: Vec<&str> = if id == "all" { inequality_ids() } else { vec![id] };
    if from > to {
        return Err(Failure::Usage(format!("empty range {from}..={to}")));
    }
    let t = ctx.table(to)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.threads)
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let mut crossovers: Vec<CrossoverReport> = Vec::new();
    let mut reports = Vec::new();
    for id in ids {
        let known = match bound_modulus(id)? {
            Some(c) => {
                if !crossovers.iter().any(|x| x.c == c) {
                    crossovers.push(crossover_c(c, 64)?);
                }
                crossovers.iter().find(|x| x.c == c)
            }
            None => None,
        };
        // chunks merge in order, so the report does not depend on the thread count
        let chunk = ((to - from) / 64).max(50);
        let starts: Vec<usize> = (from..=to).step_by(chunk).collect();
        let parts: Vec<Result<InequalityReport, Error>> = pool.install(|| {
            starts
                .par_iter()
                .map(|&lo| verify_inequality_with(id, lo, (lo + chunk - 1).min(to), &t, known))
                .collect()
        });
        let mut merged: Option<InequalityReport> = None;
        for p in parts {
            let p = p?;
            match &mut merged {
                None => merged = Some(p),
                Some(m) => {
                    m.checked += p.checked;
                    m.violations.extend(p.violations);
                    m.range[1] = p.range[1];
                }
            }
        }
        reports.push(merged.expect("non-empty range"));
    }
    let violation = reports.iter().any(|r| !r.passed());
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        let shown: Vec<String> = r.violations.iter().take(20).map(usize::to_string).collect();
        text.push_str(&format!(
            "{} {} on [{}, {}]: {} values checked, {} violations{}{}\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.id,
            r.range[0],
            r.range[1],
            r.checked,
            r.violations.len(),
            if shown.is_empty() { String::new() } else { format!(" (first: {})", shown.join(",")) },
            r.crossover_used.map_or(String::new(), |c| format!("; bounds dominate from n = {c}"))
        ));
        rows.push(vec![
            r.id.clone(),
            r.range[0].to_string(),
            r.range[1].to_string(),
            r.checked.to_string(),
            r.violations.len().to_string(),
            r.crossover_used.map_or(String::new(), |c| c.to_string()),
        ]);
    }
    let json = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Rendered {
        json,
        csv_header: vec!["id", "from", "to", "checked", "violations", "crossover_used"],
        csv_rows: rows,
        text,
        violation,
    })
}

fn bounds(ctx: &Ctx, n: u64, c: i64) -> CmdResult {
    let r = bound_report_c(c, n, ctx.prec)?;
    let mut rows = Vec::new();
    let mut text = format!("n = {n}, c = {c}\nmain  = {}\n", r.main.to_decimal(12));
    for s in &r.sides {
        for (name, v) in &s.components {
            text.push_str(&format!("a={} {:<13} {}\n", s.a, name, v.to_decimal(12)));
            rows.push(vec![s.a.to_string(), name.to_string(), v.to_decimal(12)]);
        }
    }
    text.push_str(&format!("total = {}\ndominated = {}\n", r.total.to_decimal(12), r.dominated));
    rows.push(vec![String::new(), "main".into(), r.main.to_decimal(12)]);
    rows.push(vec![String::new(), "total".into(), r.total.to_decimal(12)]);
    Ok(Rendered { json: r.to_json(), csv_header: vec!["a", "component", "value"], csv_rows: rows, text, violation: false })
}

fn crossover_cmd(ctx: &Ctx, c: i64) -> CmdResult {
    let x = crossover_c(c, ctx.prec.min(128))?;
    let json = serde_json::to_value(&x).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Rendered {
        json,
        csv_header: vec!["c", "crossover"],
        csv_rows: vec![vec![c.to_string(), x.crossover.to_string()]],
        text: format!("crossover(c = {c}) = {}\nassembly: {}\n", x.crossover, x.bound_assembly),
        violation: false,
    })
}

fn dedekind(h: i64, k: i64) -> CmdResult {
    let s = dedekind_sum(h, k)?;
    Ok(Rendered {
        json: json!({ "h": h, "k": k, "value": s.to_string() }),
        csv_header: vec!["h", "k", "value"],
        csv_rows: vec![vec![h.to_string(), k.to_string(), s.to_string()]],
        text: format!("s({h},{k}) = {s}\n"),
        violation: false,
    })
}

/// Parses an integer or a fraction such as `-1/2`.
fn parse_fraction(s: &str) -> Result<Fraction, Failure> {
    let bad = || Failure::Usage(format!("cannot parse `{s}` as an integer or fraction"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::from(1)),
    };
    if den == BigInt::default() {
        return Err(bad());
    }
    Ok(Fraction::new(num, den))
}

fn kloosterman(ctx: &Ctx, kind: Kind, a: i64, c: i64, k: i64, n: i64, m: &str) -> CmdResult {
    let m = parse_fraction(m)?;
    let as_int = |x: &Fraction, what: &str| -> Result<i64, Failure> {
        if !x.is_integer() {
            return Err(Failure::Usage(format!("{what} must be an integer, got {x}")));
        }
        x.to_integer().try_into().map_err(|_| Failure::Usage(format!("{what} out of range")))
    };
    let (name, z) = match kind {
        Kind::B => ("B", kloosterman_b(a, c, k, n, as_int(&m, "m")?, ctx.prec)?),
        Kind::A => ("A", kloosterman_a(a, c, k, n, as_int(&m, "m")?, ctx.prec)?),
        Kind::D => ("D", kloosterman_d(a, c, k, n, as_int(&(&m * BigInt::from(2)), "2m")?, ctx.prec)?),
    };
    let digits = ctx.digits();
    let (re, im) = (z.re.to_decimal(digits), z.im.to_decimal(digits));
    Ok(Rendered {
        json: json!({ "kind": name, "a": a, "c": c, "k": k, "n": n, "m": m.to_string(), "re": re, "im": im }),
        csv_header: vec!["kind", "a", "c", "k", "n", "m", "re", "im"],
        csv_rows: vec![vec![
            name.into(),
            a.to_string(),
            c.to_string(),
            k.to_string(),
            n.to_string(),
            m.to_string(),
            re,
            im,
        ]],
        text: format!("{name}_{{{a},{c},{k}}}({n}, {m}) = {z}\n"),
        violation: false,
    })
}
