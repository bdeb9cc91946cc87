//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p dstab-cli --test acceptance`.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use dstab_cli::doc::MatrixDocument;
use dstab_cli::sweep::{run_sweep, ParamSpec, SweepGrid, SweepOptions};
use dstab_core::dstability::{
    certify, crit1_value, enumerate_alpha_beta, reduced_forms_n4, CertificateKind, CertifyOptions, PivotChain,
    SearchPolicy,
};
use dstab_core::exec::Exec;
use dstab_core::linalg::{
    complex_det, det, det_via_leading_block, det_via_pivot, minor_table, principal_minor, rat, ratio,
    schur_complement, ImagSign,
};
use dstab_core::oracle::{
    expan_identity_check, expand_f, im_det_expansion, monomial_for, re_det_expansion, search_counterexample,
};
use dstab_core::stability::{hurwitz_stable, necessary_dstability};
use dstab_core::{Error, IndexSet, Matrix, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and budgets.
const EXACT: &str = "exact (zero tolerance)";
const C1_BUDGET: Duration = Duration::from_secs(1);
const C2_BUDGET: Duration = Duration::from_secs(5);
const C3_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_TRIALS: usize = 10_000;
const FAILED_NECESSARY_TRIALS: usize = 100_000;
const HURWITZ_OFFSET: (i64, i64) = (1, 100);
const BOUNDARY_OFFSET: (i64, i64) = (1, 1000);
const BOUNDARY_POINTS: usize = 20;
const COEFF_MATRICES_PER_N: usize = 100;
const IDENTITY_INSTANCES: usize = 200;
const IDENTITY_MAX_DIM: usize = 6;
const SOUNDNESS_MATRICES: usize = 500;
const ORACLE_SEED: u64 = 2024;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, format!("took {elapsed:?}, budget {budget:?}"))
}

fn ex1() -> Matrix {
    Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]])
}

fn ex2(q: &Rational) -> Matrix {
    Matrix::from_rows(vec![
        vec![rat(-1), rat(0), q.clone()],
        vec![rat(-1), rat(-1), rat(0)],
        vec![rat(-1), rat(-1), rat(-1)],
    ])
    .unwrap()
}

fn ex3(p: &Rational, q: &Rational) -> Matrix {
    Matrix::from_rows(vec![
        vec![rat(-1), rat(0), q.clone(), p.clone()],
        vec![rat(-1), rat(-1), rat(0), rat(0)],
        vec![rat(-1), rat(-1), rat(-1), rat(0)],
        vec![rat(-1), rat(-1), rat(-1), rat(-1)],
    ])
    .unwrap()
}

fn set(v: &[usize]) -> IndexSet {
    IndexSet::from_indices(v.iter().map(|i| i - 1))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let m = ex1();
    let minors = [
        (principal_minor(&m, set(&[1, 2])).unwrap(), 7),
        (principal_minor(&m, set(&[1, 3])).unwrap(), 11),
        (principal_minor(&m, set(&[2, 3])).unwrap(), 17),
        (det(&m), -235),
    ];
    for (got, want) in &minors {
        ensure(got == &rat(*want), format!("minor {got} != {want}"))?;
    }
    let t = minor_table(&m).unwrap();
    let v = crit1_value(&t, 2, set(&[1, 2]), IndexSet::EMPTY).unwrap().value;
    ensure(v == rat(-118), format!("condition value {v} != -118"))?;
    let c = certify(&m, &CertifyOptions::default()).unwrap();
    ensure(c.kind == CertificateKind::Inconclusive, format!("certify gave {}", c.kind))?;
    let o = search_counterexample(&m, ORACLE_TRIALS, ORACLE_SEED);
    ensure(o.counterexample.is_none(), "oracle found a counterexample")?;
    let elapsed = start.elapsed();
    within(elapsed, C1_BUDGET)?;
    Ok(format!("minors 7/11/17, det -235, value -118 {EXACT}; inconclusive; {ORACLE_TRIALS} trials clean; {elapsed:.2?}"))
}

fn sweep_doc(csv: &str) -> MatrixDocument {
    MatrixDocument::parse_csv(csv).unwrap()
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let doc = sweep_doc("-1,0,q\n-1,-1,0\n-1,-1,-1\n");
    let grid = SweepGrid::new(vec![ParamSpec::parse("q=-2:4:1/4").unwrap()]).unwrap();
    let opts = SweepOptions {
        oracle_trials: None,
        seed: ORACLE_SEED,
        exec: Exec::default(),
    };
    let csv = run_sweep(&doc, &grid, &opts).map_err(|e| e.to_string())?;
    let mut points = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let q = dstab_core::linalg::parse_rational(cols[0]).unwrap();
        let certified = cols[3] == "1";
        ensure(certified == (q >= rat(-1)), format!("q = {q}: certified = {certified}"))?;
        // branch split: pivot 3 alone covers q >= 0, pivot 2 covers [-1, 0]
        let m = ex2(&q);
        let by = |k: usize| {
            let opts = CertifyOptions {
                policy: SearchPolicy::Fixed(PivotChain(vec![k])),
                ..Default::default()
            };
            certify(&m, &opts).unwrap().kind == CertificateKind::DStable
        };
        ensure(by(2) == (q >= rat(0)), format!("q = {q}: pivot 3 branch"))?;
        ensure(by(1) == (q >= rat(-1) && q <= rat(0)), format!("q = {q}: pivot 2 branch"))?;
        points += 1;
    }
    ensure(points == 25, format!("{points} grid points"))?;
    let boundary = ratio(-8, 3);
    let eps = ratio(HURWITZ_OFFSET.0, HURWITZ_OFFSET.1);
    ensure(hurwitz_stable(&ex2(&(&boundary + &eps))).stable, "unstable just above -8/3")?;
    ensure(!hurwitz_stable(&ex2(&(&boundary - &eps))).stable, "stable just below -8/3")?;
    let at = hurwitz_stable(&ex2(&boundary));
    ensure(!at.stable && at.degenerate, "-8/3 is not the exact boundary")?;
    let elapsed = start.elapsed();
    within(elapsed, C2_BUDGET)?;
    Ok(format!("25 points, certified iff q >= -1; flip at -8/3 +/- 1/100 {EXACT}; {elapsed:.2?}"))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    for q in [ratio(1, 2), rat(1), rat(2), rat(5)] {
        let p = &q * rat(2);
        let m = ex3(&p, &q);
        let c = certify(&m, &CertifyOptions::default()).unwrap();
        ensure(c.kind == CertificateKind::DStable, format!("q = {q}: {}", c.kind))?;
        ensure(c.pivot_chain == Some(PivotChain(vec![3, 2])), format!("q = {q}: chain"))?;
        ensure(c.levels[0].instances.len() == 13, "13 pivot-4 inequalities")?;
        let r = reduced_forms_n4(&m).unwrap();
        let two: Vec<Rational> = r.two.iter().map(|f| f.value.clone()).collect();
        let one: Vec<Rational> = r.one.iter().map(|f| f.value.clone()).collect();
        let two_q = &q * rat(2);
        ensure(two == vec![p.clone(), &p - &two_q, rat(0)], format!("pairwise forms {two:?}"))?;
        ensure(one == vec![&p - &two_q, rat(0), -two_q.clone()], format!("single-index forms {one:?}"))?;
        ensure(r.two.iter().all(|f| f.satisfied) && r.one.iter().all(|f| f.satisfied), "sign pattern")?;
    }
    // Routh-Hurwitz boundary in the (q, p) plane
    let boundary = |q: &Rational| -((q + rat(8)) * (q * rat(3) + rat(8))) / ((q + rat(4)) * rat(4));
    let eps = ratio(BOUNDARY_OFFSET.0, BOUNDARY_OFFSET.1);
    for i in 0..BOUNDARY_POINTS {
        let q = ratio(-39, 10) + ratio(i as i64 * 7, 20);
        let p = boundary(&q);
        let on = hurwitz_stable(&ex3(&p, &q));
        ensure(!on.stable && on.degenerate, format!("q = {q}: boundary not degenerate"))?;
        ensure(hurwitz_stable(&ex3(&(&p + &eps), &q)).stable, format!("q = {q}: unstable above"))?;
        ensure(!hurwitz_stable(&ex3(&(&p - &eps), &q)).stable, format!("q = {q}: stable below"))?;
    }
    // the grid sweep agrees with the closed form
    let doc = sweep_doc("-1,0,q,p\n-1,-1,0,0\n-1,-1,-1,0\n-1,-1,-1,-1\n");
    let grid = SweepGrid::new(vec![ParamSpec::parse("p=-4:4:1").unwrap(), ParamSpec::parse("q=-4:4:1").unwrap()]).unwrap();
    let opts = SweepOptions {
        oracle_trials: None,
        seed: ORACLE_SEED,
        exec: Exec::default(),
    };
    for line in run_sweep(&doc, &grid, &opts).map_err(|e| e.to_string())?.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let p = dstab_core::linalg::parse_rational(cols[0]).unwrap();
        let q = dstab_core::linalg::parse_rational(cols[1]).unwrap();
        let expected = q > rat(-4) && p > boundary(&q);
        ensure((cols[2] == "1") == expected, format!("grid point p = {p}, q = {q}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, C3_BUDGET)?;
    Ok(format!("p = 2q certified via (4,3); reduced forms p, p-2q, 0, -2q; {BOUNDARY_POINTS} boundary points {EXACT}; {elapsed:.2?}"))
}

fn random_rational(r: &mut ChaCha8Rng) -> Rational {
    ratio(r.random_range(-9..=9), r.random_range(1..=5))
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::from_rows((0..n).map(|_| (0..n).map(|_| random_rational(r)).collect()).collect()).unwrap()
}

fn random_diag(r: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| ratio(r.random_range(1..=30), r.random_range(1..=7))).collect()
}

fn criterion_4() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    ensure(enumerate_alpha_beta(3, 2).unwrap().len() == 4, "n = 3 pair count")?;
    ensure(enumerate_alpha_beta(4, 3).unwrap().len() == 13, "n = 4 pair count")?;
    let mut compared = 0;
    for n in 3..=5 {
        let mut done = 0;
        while done < COEFF_MATRICES_PER_N {
            let m = random_matrix(&mut r, n);
            let k = r.random_range(0..n);
            if m.get(k, k).is_zero() {
                continue;
            }
            let t = minor_table(&m).unwrap();
            let poly = expand_f(&t, k).unwrap();
            let pairs = enumerate_alpha_beta(n, k).unwrap();
            let mut covered = 1; // the all-squares monomial
            ensure(poly.coefficient(&vec![2; n - 1]).is_one(), "leading coefficient")?;
            for &(a, b) in &pairs {
                let v = crit1_value(&t, k, a, b).unwrap().value;
                let c = poly.coefficient(&monomial_for(n, k, a, b));
                ensure(c == v, format!("n = {n}, k = {k}, alpha {a}, beta {b}: {c} != {v}"))?;
                if !c.is_zero() {
                    covered += 1;
                }
                compared += 1;
            }
            ensure(covered == poly.len(), format!("n = {n}: polynomial has unmatched monomials"))?;
            done += 1;
        }
    }
    Ok(format!("{compared} coefficients over 3x{COEFF_MATRICES_PER_N} matrices {EXACT}; pair counts 4 and 13"))
}

fn criterion_5() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut counts = [0usize; 5];
    while counts.iter().any(|&c| c < IDENTITY_INSTANCES) {
        let n = r.random_range(2..=IDENTITY_MAX_DIM);
        let m = random_matrix(&mut r, n);
        let d = random_diag(&mut r, n);
        let last = n - 1;
        // Sylvester minor identity at a random pivot
        let k = r.random_range(0..n);
        if !m.get(k, k).is_zero() && counts[0] < IDENTITY_INSTANCES {
            let b = schur_complement(&m, k).unwrap();
            let rest: Vec<usize> = (0..n).filter(|&i| i != k).collect();
            for t in IndexSet::full(n - 1).subsets() {
                let orig = IndexSet::from_indices(t.iter().map(|i| rest[i])).with(k);
                ensure(
                    principal_minor(&b, t).unwrap() == principal_minor(&m, orig).unwrap() / m.get(k, k),
                    "Sylvester identity",
                )?;
            }
            counts[0] += 1;
        }
        let full = det(&m);
        if !m.get(last, last).is_zero() && counts[1] < IDENTITY_INSTANCES {
            ensure(det_via_pivot(&m).unwrap() == full, "determinant quotient")?;
            counts[1] += 1;
        }
        match det_via_leading_block(&m) {
            Ok(v) if counts[2] < IDENTITY_INSTANCES && !m.get(last, last).is_zero() => {
                ensure(v == full && det_via_pivot(&m).unwrap() == v, "two-branch expansion")?;
                counts[2] += 1;
            }
            Ok(_) | Err(Error::Singular) => {}
            Err(e) => return Err(e.to_string()),
        }
        if counts[3] < IDENTITY_INSTANCES {
            match expan_identity_check(&m, &d) {
                Ok(true) => counts[3] += 1,
                Ok(false) => return Err("complex expansion identity failed".into()),
                Err(Error::ZeroPivot { .. }) | Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
        if counts[4] < IDENTITY_INSTANCES {
            let t = minor_table(&m).unwrap();
            for sign in [ImagSign::Plus, ImagSign::Minus] {
                let z = complex_det(&m, &d, sign);
                let re = re_det_expansion(&t, &d).unwrap();
                let im = im_det_expansion(&t, &d).unwrap();
                let im = if sign == ImagSign::Plus { im } else { -im };
                ensure(z.re == re && z.im == im, "Re/Im expansion")?;
            }
            counts[4] += 1;
        }
    }
    Ok(format!("5 identities x {IDENTITY_INSTANCES} instances, n <= {IDENTITY_MAX_DIM}, {EXACT}"))
}

fn random_stable(r: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { -r.random_range(0..=5) } else { r.random_range(-4..=4) }).collect())
            .collect();
        let m = Matrix::from_i64(&rows);
        if hurwitz_stable(&m).stable {
            return m;
        }
    }
}

fn criterion_6() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let (mut certified, mut failed, mut hits, mut other) = (0, 0, 0, 0);
    for i in 0..SOUNDNESS_MATRICES {
        let m = random_stable(&mut r, 3 + i % 2);
        let c = certify(&m, &CertifyOptions::default()).unwrap();
        match c.kind {
            CertificateKind::DStable => {
                certified += 1;
                let o = search_counterexample(&m, ORACLE_TRIALS, ORACLE_SEED);
                ensure(o.counterexample.is_none(), format!("certified {m} has a counterexample"))?;
            }
            CertificateKind::NecessaryFailed => {
                failed += 1;
                ensure(!necessary_dstability(&m).unwrap().passed, "necessary check disagrees")?;
                if search_counterexample(&m, FAILED_NECESSARY_TRIALS, ORACLE_SEED).counterexample.is_some() {
                    hits += 1;
                }
            }
            _ => other += 1,
        }
    }
    ensure(certified > 0, "no matrix was certified")?;
    Ok(format!(
        "{SOUNDNESS_MATRICES} stable matrices: {certified} certified, none falsified; {failed} failed the necessary check, {hits} counterexamples found; {other} other"
    ))
}

fn run_bin(dir: &std::path::Path, threads: &str, args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_dstab"))
        .current_dir(dir)
        .env("DSTAB_THREADS", threads)
        .args(args)
        .output()
        .expect("spawn dstab");
    let mut bytes = o.status.code().unwrap_or(-1).to_string().into_bytes();
    bytes.extend(o.stdout);
    bytes
}

fn criterion_7() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = dir.path();
    fs::write(p.join("ex1.csv"), "-6,-5,1\n-1,-2,-5\n-5,3,-1\n").unwrap();
    fs::write(p.join("ex3.csv"), "-1,0,q,p\n-1,-1,0,0\n-1,-1,-1,0\n-1,-1,-1,-1\n").unwrap();
    fs::write(p.join("bad.csv"), "1,-4\n2,-3\n").unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "ex1.csv"],
        vec!["check", "ex3.csv", "--set", "q=1", "--set", "p=2", "--all-chains"],
        vec!["--seed", "7", "oracle", "ex1.csv", "--trials", "5000"],
        vec!["--seed", "7", "oracle", "bad.csv", "--trials", "5000"],
        vec!["--seed", "3", "sweep", "ex3.csv", "--param", "q=-1:2:1/2", "--param", "p=-2:2:1", "--oracle-trials", "300"],
    ];
    for args in &commands {
        let reference = run_bin(p, "1", args);
        for threads in ["1", "2", "4"] {
            ensure(run_bin(p, threads, args) == reference, format!("{args:?} differs with {threads} threads"))?;
        }
        let mut seq = args.clone();
        seq.insert(0, "--sequential");
        ensure(run_bin(p, "4", &seq) == reference, format!("{args:?} differs in sequential mode"))?;
    }
    Ok(format!("{} commands byte-identical across 1/2/4 threads and sequential mode", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("1 inconclusive 3x3 exact values", criterion_1),
        ("2 one-parameter 3x3 region", criterion_2),
        ("3 two-parameter 4x4 family", criterion_3),
        ("4 coefficient theorem", criterion_4),
        ("5 identity suite", criterion_5),
        ("6 soundness sampling", criterion_6),
        ("7 determinism", criterion_7),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
