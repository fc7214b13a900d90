use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;

use quartic_els::arith::{is_squarefree, prime_divisors, PrimeTable};
use quartic_els::counting::{count_l, density_check, log_exponent, CountCheckpoint, CountContext, DENSITY_TOLERANCE};
use quartic_els::criterion::{is_els_criterion, CriterionBundle, DirectRoots, TwistTerm};
use quartic_els::localsolve::{els_direct_reports, local_report, SolvabilityReport};
use quartic_els::quartic::{classify_galois, mean_rho, GaloisType, Quartic, RootTable};
use quartic_els::series::{
    f_coefficients, first_filtration_failure_mod8, first_filtration_failure_modr, rho_coefficients, FrobenianRho,
};
use quartic_els::zeta::verify_all;
use quartic_els::{fit_cf, Error, FitReport, RootCache};
use serde::Serialize;

use crate::{Command, CountArgs, Failure, Format, OutputArgs, PolyArg, StreamKind, Suite};

type Outcome = Result<(), Failure>;

pub fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze { poly, out } => analyze(&poly, &out),
        Command::Local { poly, q, p, out } => local(&poly, q, p, &out),
        Command::Els { poly, q, out } => els(&poly, q, &out),
        Command::Count { poly, range, out } => count(&poly, &range, &out),
        Command::Fit {
            poly,
            range,
            input,
            out,
        } => fit(&poly, &range, input.as_deref(), &out),
        Command::Terms { poly, out } => terms(&poly, &out),
        Command::Verify {
            suite,
            poly,
            n,
            group,
            bound,
            r,
            out,
        } => verify(suite, &poly, n, group.as_deref(), bound, &r, &out),
        Command::Stream { poly, kind, n, out } => stream(&poly, kind, n, &out),
    }
}

fn emit(out: &OutputArgs, body: &str) -> Outcome {
    match &out.output {
        Some(path) => fs::write(path, body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn format_or(out: &OutputArgs, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let fmt = out.format.unwrap_or(default);
    if allowed.contains(&fmt) {
        Ok(fmt)
    } else {
        Err(Failure::Usage(format!("format {fmt:?} is not available for this command")))
    }
}

/// Snake-case name of a serde unit variant.
fn variant_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn join_terms(terms: &[TwistTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        let text = t.to_string();
        match (i, text.strip_prefix('-')) {
            (0, _) => s.push_str(&text),
            (_, Some(rest)) => write!(s, " - {rest}").unwrap(),
            (_, None) => write!(s, " + {text}").unwrap(),
        }
    }
    s
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    #[serde(flatten)]
    bundle: &'a CriterionBundle,
    mean_rho: String,
    m: String,
}

fn analyze(poly: &PolyArg, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    let bundle = CriterionBundle::new(&f)?;
    let fmt = format_or(out, Format::Text, &[Format::Text, Format::Json])?;
    if fmt == Format::Json {
        let report = AnalyzeReport {
            bundle: &bundle,
            mean_rho: mean_rho(bundle.galois).to_string(),
            m: log_exponent(bundle.galois).to_string(),
        };
        return emit(out, &to_json(&report)?);
    }
    let list = |set: &std::collections::BTreeSet<u8>| {
        if set.is_empty() {
            "none".to_string()
        } else {
            set.iter().map(u8::to_string).collect::<Vec<_>>().join(", ")
        }
    };
    let mut s = String::new();
    writeln!(s, "f        {}", f.pretty()).unwrap();
    writeln!(s, "disc     {}", bundle.disc).unwrap();
    writeln!(s, "galois   {}", bundle.galois).unwrap();
    writeln!(s, "m(rho)   {}", mean_rho(bundle.galois)).unwrap();
    writeln!(s, "m        {}", log_exponent(bundle.galois)).unwrap();
    writeln!(
        s,
        "p = 2    odd classes {{{}}}, even classes 2*{{{}}}",
        list(&bundle.mod8.odd),
        list(&bundle.mod8.half)
    )
    .unwrap();
    for t in &bundle.odd_tables {
        writeln!(
            s,
            "p = {}  u = {}, p not dividing q: {}, p dividing q: {}",
            t.p,
            t.u,
            variant_name(&t.coprime_rule),
            variant_name(&t.dividing_rule)
        )
        .unwrap();
    }
    writeln!(s, "condition sets ({}):", bundle.sets.len()).unwrap();
    for set in &bundle.sets {
        writeln!(s, "  {set}").unwrap();
    }
    writeln!(s, "F(s) = {}", join_terms(&bundle.terms)).unwrap();
    emit(out, &s)
}

fn describe(report: &SolvabilityReport) -> String {
    let verdict = if report.solvable { "solvable" } else { "not solvable" };
    match &report.witness {
        Some(w) => format!(
            "{verdict}, depth {}, witness {}",
            report.depth_used,
            serde_json::to_string(w).unwrap_or_default()
        ),
        None => format!("{verdict}, depth {}", report.depth_used),
    }
}

fn local(poly: &PolyArg, q: i64, p: u64, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    if q == 0 || !is_squarefree(q.unsigned_abs()) {
        return Err(Error::NotSquarefree(q.unsigned_abs()).into());
    }
    let report = local_report(&f, q, p)?;
    match format_or(out, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => emit(out, &to_json(&report)?),
        _ => emit(out, &format!("H_{q} at p = {p}: {}\n", describe(&report))),
    }
}

#[derive(Serialize)]
struct LocalEntry {
    p: u64,
    #[serde(flatten)]
    report: SolvabilityReport,
}

#[derive(Serialize)]
struct ElsReport {
    q: u64,
    criterion: bool,
    oracle: bool,
    local: Vec<LocalEntry>,
}

fn els(poly: &PolyArg, q: u64, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    let bundle = CriterionBundle::new(&f)?;
    let criterion = is_els_criterion(&bundle, q, &DirectRoots(&f))?;
    let reports = els_direct_reports(&f, q)?;
    let oracle = reports.iter().all(|(_, r)| r.solvable);
    let report = ElsReport {
        q,
        criterion,
        oracle,
        local: reports
            .into_iter()
            .map(|(p, report)| LocalEntry { p, report })
            .collect(),
    };
    let body = match format_or(out, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => to_json(&report)?,
        _ => {
            let mut s = format!("q          {q}\ncriterion  {criterion}\noracle     {oracle}\n");
            for e in &report.local {
                writeln!(s, "p = {}: {}", e.p, describe(&e.report)).unwrap();
            }
            s
        }
    };
    emit(out, &body)?;
    if criterion != oracle {
        return Err(Error::CriterionMismatch {
            q,
            criterion,
            direct: oracle,
        }
        .into());
    }
    Ok(())
}

fn checkpoints(range: &CountArgs) -> Result<Vec<u64>, Failure> {
    if range.xmax < 2 {
        return Err(Failure::Usage("--xmax must be at least 2".into()));
    }
    let mut cps = range.checkpoints.clone();
    if cps.is_empty() {
        let mut x = 10;
        while x < range.xmax {
            cps.push(x);
            x *= 10;
        }
        cps.push(range.xmax);
    }
    cps.sort_unstable();
    cps.dedup();
    if let Some(&bad) = cps.iter().find(|&&x| x == 0 || x > range.xmax) {
        return Err(Failure::Usage(format!("checkpoint {bad} outside 1..={}", range.xmax)));
    }
    Ok(cps)
}

fn run_count(f: &Quartic, range: &CountArgs) -> Result<(CriterionBundle, Vec<CountCheckpoint>), Failure> {
    let cps = checkpoints(range)?;
    let bundle = CriterionBundle::new(f)?;
    let limit = u32::try_from(range.xmax).map_err(|_| Failure::Usage(format!("--xmax {} too large", range.xmax)))?;
    let spf = PrimeTable::new(limit)?;
    let cache = if range.no_cache {
        RootCache::Disabled
    } else {
        RootCache::from_env()
    };
    let roots = cache.root_table(f, range.xmax)?;
    let ctx = CountContext {
        bundle: &bundle,
        spf: &spf,
        roots: &roots,
    };
    let counts = count_l(&ctx, &cps)?;
    Ok((bundle, counts))
}

fn checkpoint_table(cps: &[CountCheckpoint], fmt: Format) -> String {
    let mut s = String::new();
    match fmt {
        Format::Csv => {
            s.push_str("x,L,c\n");
            for c in cps {
                writeln!(s, "{},{},{:.6}", c.x, c.lx, c.c).unwrap();
            }
        }
        _ => {
            writeln!(s, "{:>12} {:>12} {:>10}", "x", "L(x)", "c(x)").unwrap();
            for c in cps {
                writeln!(s, "{:>12} {:>12} {:>10.6}", c.x, c.lx, c.c).unwrap();
            }
        }
    }
    s
}

fn count(poly: &PolyArg, range: &CountArgs, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    let fmt = format_or(out, Format::Csv, &[Format::Csv, Format::Json, Format::Text])?;
    let (_, counts) = run_count(&f, range)?;
    let body = match fmt {
        Format::Json => to_json(&counts)?,
        _ => checkpoint_table(&counts, fmt),
    };
    emit(out, &body)
}

fn read_counts(path: &std::path::Path) -> Result<Vec<CountCheckpoint>, Failure> {
    let text = fs::read_to_string(path)?;
    let mut cps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with('x')) {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = |name: &str| -> Result<u64, Failure> {
            fields
                .next()
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Failure::Usage(format!("{}:{}: bad {name} field", path.display(), i + 1)))
        };
        let x = next("x")?;
        let lx = next("L")?;
        cps.push(CountCheckpoint { x, lx, c: 0.0 });
    }
    Ok(cps)
}

fn fit(poly: &PolyArg, range: &CountArgs, input: Option<&std::path::Path>, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    let fmt = format_or(out, Format::Text, &[Format::Text, Format::Json, Format::Csv])?;
    let (galois, counts) = match input {
        Some(path) => (classify_galois(&f), read_counts(path)?),
        None => {
            let (bundle, counts) = run_count(&f, range)?;
            (bundle.galois, counts)
        }
    };
    let report: FitReport = fit_cf(&counts, galois)?;
    let body = match fmt {
        Format::Json => to_json(&report)?,
        Format::Csv => checkpoint_table(&report.checkpoints, Format::Csv),
        Format::Text => {
            let mut s = format!(
                "galois       {galois}\nm_used       {}\ncf_estimate  {:.6}\ntrend        {:+.4}\n",
                report.m_used, report.cf_estimate, report.trend
            );
            s.push_str(&checkpoint_table(&report.checkpoints, Format::Text));
            s
        }
    };
    emit(out, &body)
}

fn terms(poly: &PolyArg, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    let bundle = CriterionBundle::new(&f)?;
    match format_or(out, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => emit(out, &to_json(&bundle.terms)?),
        _ => {
            let mut s = String::new();
            for t in &bundle.terms {
                writeln!(s, "{t}").unwrap();
            }
            writeln!(s, "F(s) = {}", join_terms(&bundle.terms)).unwrap();
            emit(out, &s)
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    suite: String,
    pass: bool,
    checks: Vec<String>,
    failure: Option<String>,
}

fn verify(
    suite: Suite,
    poly: &PolyArg,
    n: Option<usize>,
    group: Option<&str>,
    bound: u64,
    rs: &[u64],
    out: &OutputArgs,
) -> Outcome {
    let fmt = format_or(out, Format::Text, &[Format::Text, Format::Json])?;
    let mut checks = Vec::new();
    let failure = match suite {
        Suite::Filtration => verify_filtration(&poly.required()?, n.unwrap_or(10_000), rs, &mut checks)?,
        Suite::Terms => verify_terms(&poly.required()?, n.unwrap_or(10_000), &mut checks)?,
        Suite::Zeta => {
            let group = match (group, poly.optional()?) {
                (Some(g), _) => Some(g.parse::<GaloisType>()?),
                (None, Some(f)) => Some(classify_galois(&f)),
                (None, None) => None,
            };
            verify_zeta(group, &mut checks)
        }
        Suite::Density => verify_density(&poly.required()?, bound, &mut checks)?,
        Suite::Oracle => verify_oracle(&poly.required()?, n.unwrap_or(2000) as u64, &mut checks)?,
    };
    let report = VerifyReport {
        suite: variant_name_of_suite(suite),
        pass: failure.is_none(),
        checks,
        failure: failure.clone(),
    };
    let body = match fmt {
        Format::Json => to_json(&report)?,
        _ => {
            let mut s = String::new();
            for c in &report.checks {
                writeln!(s, "{c}").unwrap();
            }
            let status = if report.pass { "PASS" } else { "FAIL" };
            writeln!(s, "{}: {status}", report.suite).unwrap();
            s
        }
    };
    emit(out, &body)?;
    match failure {
        None => Ok(()),
        Some(msg) => Err(Failure::Verification(msg)),
    }
}

fn variant_name_of_suite(s: Suite) -> String {
    format!("{s:?}").to_lowercase()
}

type Check = Result<Option<String>, Failure>;

fn verify_filtration(f: &Quartic, n: usize, rs: &[u64], checks: &mut Vec<String>) -> Check {
    let rho = FrobenianRho::new(f, n as u64);
    let g = rho_coefficients(&rho, n)?;
    for c in [1u8, 3, 5, 7] {
        if let Some(k) = first_filtration_failure_mod8(&g, c, n) {
            return Ok(Some(format!("class {c} mod 8 fails at n = {k}")));
        }
        checks.push(format!("class {c} mod 8: ok for n <= {n}"));
    }
    let mut moduli: Vec<u64> = if rs.is_empty() {
        let mut v: Vec<u64> = prime_divisors(f.discriminant()).into_iter().filter(|&p| p != 2).collect();
        v.extend([3, 5]);
        v
    } else {
        rs.to_vec()
    };
    moduli.sort_unstable();
    moduli.dedup();
    for r in moduli {
        if r < 3 || r % 2 == 0 || !quartic_els::arith::is_prime(r) {
            return Err(Failure::Usage(format!("filtration modulus {r} is not an odd prime")));
        }
        for sign in [1i8, -1] {
            if let Some(k) = first_filtration_failure_modr(&g, r, sign, n) {
                return Ok(Some(format!("r = {r}, sign {sign:+} fails at n = {k}")));
            }
            checks.push(format!("r = {r}, sign {sign:+}: ok for n <= {n}"));
        }
    }
    Ok(None)
}

fn verify_terms(f: &Quartic, n: usize, checks: &mut Vec<String>) -> Check {
    let bundle = CriterionBundle::new(f)?;
    let rho = FrobenianRho::new(f, n as u64);
    let coeffs = f_coefficients(&bundle, &rho, n)?;
    let roots = RootTable::build(f, n as u64);
    for k in 1..=n {
        let els = is_squarefree(k as u64) && is_els_criterion(&bundle, k as u64, &roots)?;
        let want = if els { 1 } else { 0 };
        if coeffs.get(k) != want.into() {
            return Ok(Some(format!(
                "coefficient at n = {k} is {}, ELS indicator is {want}",
                coeffs.get(k)
            )));
        }
    }
    checks.push(format!("F(s) = {}", join_terms(&bundle.terms)));
    checks.push(format!("coefficients equal the ELS indicator for n <= {n}"));
    Ok(None)
}

fn verify_zeta(group: Option<GaloisType>, checks: &mut Vec<String>) -> Option<String> {
    let mut failure = None;
    for c in verify_all() {
        if group.is_some_and(|g| g != c.galois) {
            continue;
        }
        let status = if c.holds { "holds" } else { "FAILS" };
        checks.push(format!("{} {}: {status}, residual {}", c.galois, c.cycle_type, c.residual));
        if !c.holds && failure.is_none() {
            failure = Some(format!("{} at cycle type {}: residual {}", c.galois, c.cycle_type, c.residual));
        }
    }
    failure
}

fn verify_density(f: &Quartic, bound: u64, checks: &mut Vec<String>) -> Check {
    let g = classify_galois(f);
    let rho = FrobenianRho::new(f, bound);
    let r = density_check(&rho, g, bound, DENSITY_TOLERANCE)?;
    let line = format!(
        "{g}: root fraction {:.5} over primes <= {bound}, mean {} (tolerance {})",
        r.fraction, r.target, r.tolerance
    );
    checks.push(line.clone());
    Ok((!r.pass).then_some(line))
}

fn verify_oracle(f: &Quartic, n: u64, checks: &mut Vec<String>) -> Check {
    let bundle = CriterionBundle::new(f)?;
    let roots = DirectRoots(f);
    let mut compared = 0;
    for q in (1..=n).filter(|&q| is_squarefree(q)) {
        let criterion = is_els_criterion(&bundle, q, &roots)?;
        let direct = quartic_els::is_els_direct(f, q)?;
        if criterion != direct {
            return Err(Error::CriterionMismatch { q, criterion, direct }.into());
        }
        compared += 1;
    }
    checks.push(format!("criterion and direct search agree on {compared} squarefree q <= {n}"));
    Ok(None)
}

fn stream(poly: &PolyArg, kind: StreamKind, n: usize, out: &OutputArgs) -> Outcome {
    let f = poly.required()?;
    format_or(out, Format::Csv, &[Format::Csv])?;
    let rho = FrobenianRho::new(&f, n as u64);
    let s = match kind {
        StreamKind::Rho => rho_coefficients(&rho, n)?,
        StreamKind::F => f_coefficients(&CriterionBundle::new(&f)?, &rho, n)?,
    };
    emit(out, &s.to_csv())
}
