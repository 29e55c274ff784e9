//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lyapabs::abstraction::build_quotient;
use lyapabs::graph::Digraph;
use lyapabs::logic::{eval_ltl_lasso, lasso_accepts, parse_ltl, random, to_buchi, Letter};
use lyapabs::lyapunov::{level_sequence, verify_contraction};
use lyapabs::problem::{load_problem, Problem};
use lyapabs::simulate::{sample_points, simulate_abstraction};
use lyapabs::verify::{check_formula, f_star_fixpoint, f_star_scc};
use lyapabs::{Abstraction, Cell, Constraint, Execution, Observation, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn paper() -> Problem {
    load_problem(fixture("paper_example.json")).expect("paper fixture loads")
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Result<String, String> {
    let p = paper();
    let start = Instant::now();
    let seq = level_sequence(&p.gamma_d, &p.gamma_x, p.lf.rho()).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start, "level_sequence")?;
    ensure(seq.n() == 11, || format!("N = {}", seq.n()))?;
    // 5.063 · (50/47)^10 with plain big-integer powers.
    let expected = Rational::new(
        BigInt::from(5063) * BigInt::from(50).pow(10),
        BigInt::from(1000) * BigInt::from(47).pow(10),
    );
    ensure(seq.gamma(10) == &expected, || format!("Γ10 = {}", seq.gamma(10)))?;
    let gap = lyapabs::rational::abs(&(seq.gamma(10) - Rational::new(94000.into(), 10000.into())));
    ensure(gap <= Rational::new(1.into(), 1000.into()), || {
        format!("|Γ10 - 9.4| = {gap}")
    })?;
    Ok(format!("N=11, Γ10={:.7}", lyapabs::rational::to_f64(seq.gamma(10))))
}

fn criterion_2() -> Result<String, String> {
    let p = paper();
    let start = Instant::now();
    let rho_star = verify_contraction(&p.lf, &p.system).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start, "verify_contraction")?;
    ensure(rho_star <= Rational::new(19.into(), 20.into()), || {
        format!("ρ* = {rho_star}")
    })?;
    Ok(format!("ρ* = {rho_star}"))
}

fn build_paper() -> Result<(Abstraction, Duration), String> {
    let p = paper();
    let start = Instant::now();
    let abs = build_quotient(&p.system, &p.lf, &p.gamma_d, &p.gamma_x, &p.regions).map_err(|e| e.to_string())?;
    Ok((abs, start.elapsed()))
}

fn criterion_3(abs: &Abstraction, build_time: Duration) -> Result<String, String> {
    ensure(build_time < Duration::from_secs(300), || {
        format!("build took {build_time:?}")
    })?;
    let audit = abs.audit(Execution::default()).map_err(|e| e.to_string())?;
    ensure(
        audit.disjoint && audit.covering && audit.slice_aligned && audit.observation_pure,
        || format!("audit failures: {:?}", audit.failures),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let blocks: Vec<(usize, &Cell)> = abs.partition.blocks().map(|b| (b.id, &b.cell)).collect();
    let mut checked = 0;
    let mut k = 0;
    while checked < 1000 {
        let (id, cell) = blocks[k % blocks.len()];
        k += 1;
        let x = cell
            .sample_points(2, &mut rng)
            .map_err(|e| e.to_string())?
            .pop()
            .unwrap();
        let image = if id == abs.quotient.d_state() {
            x.clone()
        } else {
            abs.system.step(&x).map_err(|e| e.to_string())?
        };
        let got = abs.cell_of(&image).map_err(|e| e.to_string())?;
        ensure(abs.cell_of(&x).map_err(|e| e.to_string())? == id, || {
            format!("sample of block {id} located elsewhere")
        })?;
        ensure(got == abs.quotient.successor(id), || {
            format!("A·x for x in block {id} lands in {got}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "{} states built in {:.1}s, audits pass, 1000/1000 successor samples agree",
        abs.quotient.len(),
        build_time.as_secs_f64()
    ))
}

fn criterion_4(abs: &Abstraction) -> Result<String, String> {
    let points = sample_points(abs, 500, 99).map_err(|e| e.to_string())?;
    let mut agree = 0;
    for x in &points {
        let concrete = simulate_abstraction(abs, x).map_err(|e| e.to_string())?.word();
        let q = abs.cell_of(x).map_err(|e| e.to_string())?;
        if abs.word(q).map_err(|e| e.to_string())? == concrete {
            agree += 1;
        }
    }
    ensure(agree == points.len(), || {
        format!("{agree}/{} words agree", points.len())
    })?;
    Ok(format!("{agree}/{} words agree", points.len()))
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet = [
        Letter::empty(),
        Letter::atom("a"),
        Letter::atom("b"),
        Letter::atom("pid"),
    ];
    let words = random::all_lassos(&alphabet, 3, 3);
    let formulas: Vec<_> = (0..100).map(|_| random::formula(&mut rng, &["a", "b"], 4)).collect();
    let disagreements: Vec<usize> = Execution::default().map(&formulas, |f| {
        let b = to_buchi(f);
        words
            .iter()
            .filter(|w| lasso_accepts(&b, w) != eval_ltl_lasso(f, w))
            .count()
    });
    within(Duration::from_secs(120), start, "oracle sweep")?;
    let bad: usize = disagreements.iter().sum();
    ensure(bad == 0, || {
        let first = disagreements.iter().position(|&d| d > 0).unwrap();
        format!("{bad} disagreements, first formula {}", formulas[first])
    })?;
    Ok(format!(
        "{} formulas x {} lassos agree in {:.1}s",
        formulas.len(),
        words.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_6(abs: &Abstraction) -> Result<String, String> {
    let mut notes = Vec::new();
    for text in [
        "G !r2 & F r1 & (r3 -> X !r1)",
        "G !r2 & F r1 & G (r3 -> X !r1)",
        "F pid",
        "G !pid",
    ] {
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let sat = check_formula(abs, &f).map_err(|e| e.to_string())?;
        for &q in abs.quotient.states() {
            let w = abs.word(q).map_err(|e| e.to_string())?;
            ensure(sat.contains(q) == eval_ltl_lasso(&f, &w), || {
                format!("{text}: state {q} disagrees")
            })?;
        }
        notes.push(format!("{}/{}", sat.len(), abs.quotient.len()));
    }
    ensure(notes[2] == format!("{0}/{0}", abs.quotient.len()), || {
        "F pid is not universal".into()
    })?;
    ensure(notes[3].starts_with("0/"), || "G !pid is satisfiable".into())?;
    Ok(format!(
        "satisfying counts literal/global/F pid/G !pid: {}",
        notes.join(", ")
    ))
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let n = rng.gen_range(1..=50);
        let p = rng.gen_range(0.0..0.15);
        let mut g = Digraph::new(n);
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(p) {
                    g.add_edge(a, b);
                }
            }
        }
        let accepting: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        ensure(f_star_fixpoint(&g, &accepting) == f_star_scc(&g, &accepting), || {
            format!("graph {k} differs")
        })?;
    }
    Ok("200 random digraphs agree".into())
}

fn criterion_8() -> Result<String, String> {
    let p = load_problem(fixture("toy_1d.json")).map_err(|e| e.to_string())?;
    let abs = build_quotient(&p.system, &p.lf, &p.gamma_d, &p.gamma_x, &p.regions).map_err(|e| e.to_string())?;
    let q = &abs.quotient;
    ensure(q.len() == 3, || format!("{} states", q.len()))?;
    let d = q.d_state();
    ensure(q.successor(d) == d, || "D has no self-loop".into())?;
    let bound = |sign: i64, offset: i64, strict: bool| {
        Constraint::new(
            vec![Rational::from_integer(sign.into())],
            Rational::from_integer(offset.into()),
            strict,
        )
        .unwrap()
    };
    let interval = |lo: i64, lo_open: bool, hi: i64, hi_open: bool| {
        let expected = Cell::new(1, vec![bound(-1, -lo, lo_open), bound(1, hi, hi_open)]).unwrap();
        move |cell: &Cell| cell.same_set(&expected).unwrap()
    };
    let d_ok = interval(-1, false, 1, false);
    ensure(d_ok(abs.partition.eq(d).unwrap()), || "D block is not [-1, 1]".into())?;
    let left = interval(-2, false, -1, true);
    let right = interval(1, true, 2, false);
    let mut seen = (false, false);
    for &s in q.states().iter().filter(|&&s| s != d) {
        ensure(q.successor(s) == d, || format!("state {s} does not go to D"))?;
        ensure(q.observation(s) == &Observation::Empty, || {
            format!("state {s} is observed")
        })?;
        let cell = abs.partition.eq(s).unwrap();
        if left(cell) {
            seen.0 = true;
        } else if right(cell) {
            seen.1 = true;
        }
    }
    ensure(seen == (true, true), || "outer blocks are not [-2,-1) and (1,2]".into())?;
    Ok("3 states: D=[-1,1], [-2,-1) -> D, (1,2] -> D".into())
}

fn report(n: usize, result: std::thread::Result<Result<String, String>>) -> bool {
    match result {
        Ok(Ok(msg)) => {
            println!("PASS criterion {n}: {msg}");
            true
        }
        Ok(Err(msg)) => {
            println!("FAIL criterion {n}: {msg}");
            false
        }
        Err(_) => {
            println!("FAIL criterion {n}: panicked");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= report(1, catch_unwind(criterion_1));
    ok &= report(2, catch_unwind(criterion_2));
    let built = catch_unwind(build_paper);
    match &built {
        Ok(Ok((abs, t))) => {
            ok &= report(3, catch_unwind(AssertUnwindSafe(|| criterion_3(abs, *t))));
            ok &= report(4, catch_unwind(AssertUnwindSafe(|| criterion_4(abs))));
        }
        Ok(Err(e)) => {
            ok &= report(3, Ok(Err(format!("build failed: {e}"))));
            ok &= report(4, Ok(Err("no abstraction".into())));
        }
        Err(_) => {
            ok &= report(3, Ok(Err("build panicked".into())));
            ok &= report(4, Ok(Err("no abstraction".into())));
        }
    }
    ok &= report(5, catch_unwind(criterion_5));
    match &built {
        Ok(Ok((abs, _))) => ok &= report(6, catch_unwind(AssertUnwindSafe(|| criterion_6(abs)))),
        _ => ok &= report(6, Ok(Err("no abstraction".into()))),
    }
    ok &= report(7, catch_unwind(criterion_7));
    ok &= report(8, catch_unwind(criterion_8));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
