//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --release -p quartic-els --test acceptance`.

use std::cell::RefCell;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::{One, Zero};

use quartic_els::arith::{is_squarefree, jacobi, PrimeTable};
use quartic_els::counting::{count_l, density_check, fit_cf, log_exponent, CountContext, DENSITY_TOLERANCE};
use quartic_els::criterion::{is_els_criterion, CriterionBundle, DirectRoots};
use quartic_els::localsolve::{is_els_direct, is_locally_solvable};
use quartic_els::quartic::{
    classify_galois, cross_check_galois, factorization_type_mod_p, mean_rho, GaloisType, Quartic,
    RootTable,
};
use quartic_els::series::{
    f_coefficients, filtration_check_mod8, filtration_check_modr, rho_coefficients, FrobenianRho,
    Q,
};
use quartic_els::zeta::{truncated_residual, verify_all, verify_identity_case, ZetaCase};
use quartic_els::{Error, FactorizationType};

fn corpus() -> Vec<(Quartic, GaloisType)> {
    [
        ((0, 0, -1, 1), GaloisType::S4),
        ((0, 0, 8, 12), GaloisType::A4),
        ((0, 0, 0, -2), GaloisType::D4),
        ((1, 1, 1, 1), GaloisType::C4),
        ((0, 0, 0, 1), GaloisType::V4),
    ]
    .into_iter()
    .map(|((a3, a2, a1, a0), g)| (Quartic::new(a3, a2, a1, a0).unwrap(), g))
    .collect()
}

thread_local! {
    static TRIPWIRES: RefCell<Vec<String>> = const { RefCell::new(Vec::new()) };
}

/// Records tripwire errors so the last criterion can report them.
fn note<T>(r: Result<T, Error>) -> Result<T, Error> {
    if let Err(e) = &r {
        if e.is_tripwire() {
            TRIPWIRES.with(|t| t.borrow_mut().push(e.to_string()));
        }
    }
    r
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Outcome {
    if elapsed <= limit {
        Ok(format!("{detail}; {:.1}s", elapsed.as_secs_f64()))
    } else {
        Err(format!(
            "{detail}; took {:.1}s, limit {}s",
            elapsed.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn local_facts() -> Outcome {
    let start = Instant::now();
    let f = Quartic::new(0, 0, -1, 1).unwrap();
    let facts: [(i64, u64, bool); 12] = [
        (1, 229, true),
        (2, 229, true),
        (229, 229, true),
        (458, 229, false),
        (1, 2, true),
        (-1, 2, true),
        (5, 2, true),
        (-5, 2, true),
        (2, 2, false),
        (-2, 2, false),
        (10, 2, false),
        (-10, 2, false),
    ];
    for (t, p, expect) in facts {
        let got = note(is_locally_solvable(&f, t, p)).map_err(|e| e.to_string())?;
        if got != expect {
            return Err(format!("H_{t} at p = {p}: got {got}, expected {expect}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "12 local facts reproduced".into())
}

fn criterion_matches_oracle() -> Outcome {
    let start = Instant::now();
    let mut compared = 0;
    for (f, _) in corpus() {
        let bundle = note(CriterionBundle::new(&f)).map_err(|e| e.to_string())?;
        let roots = DirectRoots(&f);
        for t in (1..=2000u64).filter(|&t| is_squarefree(t)) {
            let crit = note(is_els_criterion(&bundle, t, &roots)).map_err(|e| e.to_string())?;
            let direct = note(is_els_direct(&f, t)).map_err(|e| e.to_string())?;
            if crit != direct {
                let e = note::<()>(Err(Error::CriterionMismatch {
                    q: t,
                    criterion: crit,
                    direct,
                }))
                .unwrap_err();
                return Err(format!("{}: {e}", f.pretty()));
            }
            compared += 1;
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(600),
        format!("{compared} (quartic, q) pairs agree"),
    )
}

fn mean_table() -> Outcome {
    let expected = [
        (GaloisType::V4, Ratio::new(1, 4), Ratio::new(3, 4)),
        (GaloisType::C4, Ratio::new(1, 4), Ratio::new(3, 4)),
        (GaloisType::D4, Ratio::new(3, 8), Ratio::new(5, 8)),
        (GaloisType::A4, Ratio::new(3, 4), Ratio::new(1, 4)),
        (GaloisType::S4, Ratio::new(5, 8), Ratio::new(3, 8)),
    ];
    for (g, mean, m) in expected {
        if mean_rho(g) != mean || log_exponent(g) != m {
            return Err(format!(
                "{g}: mean {} (want {mean}), m {} (want {m})",
                mean_rho(g),
                log_exponent(g)
            ));
        }
    }
    Ok("five groups match".into())
}

fn expansion_identity() -> Outcome {
    const N: usize = 100_000;
    let f = Quartic::new(0, 0, -1, 1).unwrap();
    let bundle = note(CriterionBundle::new(&f)).map_err(|e| e.to_string())?;
    let rho = FrobenianRho::new(&f, N as u64);
    let from_bundle = f_coefficients(&bundle, &rho, N).map_err(|e| e.to_string())?;
    let g = rho_coefficients(&rho, N).map_err(|e| e.to_string())?;
    let half = Q::new(1, 2);
    let roots = RootTable::build(&f, N as u64);
    for n in 1..=N {
        // g + (1/2) 229^-s g + (1/2) 229^-s g^{psi_229}, evaluated by hand.
        let mut expect = g.get(n);
        if n % 229 == 0 {
            let k = n / 229;
            let psi = jacobi(k as i64, 229).unwrap() as i64;
            expect += half * g.get(k) + half * g.get(k) * Q::from_integer(psi);
        }
        if from_bundle.get(n) != expect {
            return Err(format!("n = {n}: bundle gives {}, formula {expect}", from_bundle.get(n)));
        }
        // Coefficients are the indicator of the ELS twists.
        let indicator = if is_squarefree(n as u64) {
            note(is_els_criterion(&bundle, n as u64, &roots)).map_err(|e| e.to_string())?
        } else {
            false
        };
        let want = if indicator { Q::one() } else { Q::zero() };
        if expect != want {
            return Err(format!("n = {n}: coefficient {expect}, ELS indicator {indicator}"));
        }
    }
    Ok(format!("n <= {N} exact"))
}

fn filtrations() -> Outcome {
    const N: usize = 100_000;
    for (f, _) in corpus() {
        let rho = FrobenianRho::new(&f, N as u64);
        let g = rho_coefficients(&rho, N).map_err(|e| e.to_string())?;
        for c in [1, 3, 5, 7] {
            if !filtration_check_mod8(&g, c, N) {
                return Err(format!("{}: class {c} mod 8", f.pretty()));
            }
        }
        for r in [229, 5] {
            for sign in [1, -1] {
                if !filtration_check_modr(&g, r, sign, N) {
                    return Err(format!("{}: r = {r}, sign {sign}", f.pretty()));
                }
            }
        }
    }
    Ok(format!("4 classes mod 8 and r in {{229, 5}} with both signs, n <= {N}, all corpus quartics"))
}

fn zeta_identities() -> Outcome {
    let start = Instant::now();
    let checks = verify_all();
    for c in &checks {
        if !c.holds || c.residual.exponent(1) != 0 {
            return Err(format!("{} {}: residual {}", c.galois, c.cycle_type, c.residual));
        }
    }
    let elapsed = start.elapsed();
    // Per-prime redundancy: truncated series at every unramified p <= 1000.
    for (f, g) in corpus() {
        let case = ZetaCase::new(g);
        for p in quartic_els::arith::primes_up_to(1000) {
            if f.discriminant() % p as i64 == 0 {
                continue;
            }
            let t = note(factorization_type_mod_p(&f, p)).map_err(|e| e.to_string())?;
            let q = truncated_residual(&case, t, 12).map_err(|e| e.to_string())?;
            if q[1] != 0 {
                return Err(format!("{} p = {p}: linear residual {}", f.pretty(), q[1]));
            }
        }
    }
    // The exponent -5 on the Galois-closure factor leaves (1+t)^48 at split
    // primes; -3 is the only value that balances all classes.
    let alt = ZetaCase {
        l_exp: -5,
        ..ZetaCase::new(GaloisType::S4)
    };
    let failing: Vec<FactorizationType> = FactorizationType::ALL
        .into_iter()
        .filter(|&t| !verify_identity_case(&alt, t).unwrap().holds)
        .collect();
    if failing != [FactorizationType::Split] {
        return Err(format!("S4 with exponent -5 fails at {failing:?}"));
    }
    within(
        elapsed,
        Duration::from_secs(1),
        format!(
            "{} (group, type) pairs hold; S4 uses exponent -3 on the closure factor, -5 fails only at (1,1,1,1)",
            checks.len()
        ),
    )
}

fn chebotarev_density() -> Outcome {
    const B: u64 = 1_000_000;
    let start = Instant::now();
    let mut parts = Vec::new();
    for (f, g) in corpus() {
        let rho = FrobenianRho::new(&f, B);
        let r = density_check(&rho, g, B, DENSITY_TOLERANCE).map_err(|e| e.to_string())?;
        parts.push(format!("{g} {:.4} vs {}", r.fraction, r.target));
        if !r.pass {
            return Err(parts.join(", "));
        }
    }
    within(start.elapsed(), Duration::from_secs(120), parts.join(", "))
}

fn asymptotic_behaviour() -> Outcome {
    const X: u64 = 10_000_000;
    let start = Instant::now();
    let spf = PrimeTable::new(X as u32).map_err(|e| e.to_string())?;
    let cps = [10_000, 100_000, 1_000_000, X];
    let mut parts = Vec::new();
    let mut ok = true;
    for (f, g) in corpus() {
        let bundle = note(CriterionBundle::new(&f)).map_err(|e| e.to_string())?;
        let roots = RootTable::build(&f, X);
        let ctx = CountContext {
            bundle: &bundle,
            spf: &spf,
            roots: &roots,
        };
        let counts = count_l(&ctx, &cps).map_err(|e| e.to_string())?;
        let fit = fit_cf(&counts, g).map_err(|e| e.to_string())?;
        let cs: Vec<String> = fit.checkpoints.iter().map(|c| format!("{:.4}", c.c)).collect();
        parts.push(format!("{g} c = [{}] trend {:+.3}", cs.join(", "), fit.trend));
        ok &= fit.checkpoints.iter().all(|c| c.c > 0.0) && fit.trend.abs() < 0.25;
    }
    let detail = parts.join("; ");
    if !ok {
        return Err(detail);
    }
    within(start.elapsed(), Duration::from_secs(900), detail)
}

fn no_tripwires() -> Outcome {
    for (f, g) in corpus() {
        if classify_galois(&f) != g {
            return Err(format!("{} classified as {}", f.pretty(), classify_galois(&f)));
        }
        let _ = note(cross_check_galois(&f, g, 10_000));
    }
    let fired = TRIPWIRES.with(|t| t.borrow().clone());
    check(
        fired.is_empty(),
        if fired.is_empty() {
            "no depth-cap, classification or agreement tripwire fired".into()
        } else {
            fired.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("local facts for x^4 - x + 1", local_facts),
        ("criterion equals direct oracle, q <= 2000", criterion_matches_oracle),
        ("m(rho) and m tables", mean_table),
        ("F(s) expansion for x^4 - x + 1, n <= 1e5", expansion_identity),
        ("filtration identities, n <= 1e5", filtrations),
        ("zeta local identities", zeta_identities),
        ("Chebotarev density at 1e6", chebotarev_density),
        ("c(x) positive and settling, 1e4..1e7", asymptotic_behaviour),
        ("no tripwires", no_tripwires),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
