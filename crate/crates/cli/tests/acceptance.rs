//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every random instance comes from a fixed-seed ChaCha stream, so a failure
//! is reproducible by rerunning the target.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use farkas_core::{
    alternatives_lemma, caratheodory_reduce, check_optimal_pair, cone_distance, detect_arbitrage,
    farkas, fredholm, minimax_gap, optimal_strategy_vertices, primal_from_dual, rank, solve_game,
    solve_linear_system, solve_lp, stiemke, superhedge_price, verify_certificate, ArbitrageOutcome,
    Certificate, Claim, FarkasCertificate, LinearSolution, LpOutcome, LpProblem, MarketModel,
    Problem, Rat, RatMat, RatVec, Verdict,
};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, body and wall-clock limit in seconds (0 for none).
type Criterion = (&'static str, fn() -> Outcome, u64);

type TimedCall<'a> = (&'static str, Box<dyn Fn() -> Result<(), String> + 'a>);

/// Common denominator of every generated entry.
const SCALE: i64 = 12;

/// Entry `k/d` with `k` in -3..=3 and `d` in 1..=4, returned as `12 k / d`.
fn scaled_entry(rng: &mut ChaCha8Rng) -> i64 {
    let k = rng.gen_range(-3..=3);
    let d = rng.gen_range(1..=4);
    k * SCALE / d
}

fn scaled_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| (0..n).map(|_| scaled_entry(rng)).collect())
        .collect()
}

fn to_vec(v: &[i64]) -> RatVec {
    RatVec::new(v.iter().map(|&x| Rat::new(x, SCALE)).collect())
}

fn to_mat(rows: &[Vec<i64>]) -> RatMat {
    RatMat::from_rows(rows.iter().map(|r| to_vec(r).into_entries()).collect()).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> RatVec {
    to_vec(&(0..n).map(|_| scaled_entry(rng)).collect::<Vec<_>>())
}

fn random_mat(rng: &mut ChaCha8Rng, m: usize, n: usize) -> RatMat {
    to_mat(&scaled_matrix(rng, m, n))
}

fn random_nonneg(rng: &mut ChaCha8Rng, n: usize, max: i64) -> RatVec {
    RatVec::new(
        (0..n)
            .map(|_| Rat::new(rng.gen_range(0..=max), rng.gen_range(1..=4)))
            .collect(),
    )
}

fn random_positive(rng: &mut ChaCha8Rng, n: usize) -> RatVec {
    RatVec::new(
        (0..n)
            .map(|_| Rat::new(rng.gen_range(1..=4), rng.gen_range(1..=4)))
            .collect(),
    )
}

fn dims(rng: &mut ChaCha8Rng, max: usize) -> (usize, usize) {
    (rng.gen_range(1..=max), rng.gen_range(1..=max))
}

fn accept(v: Verdict, what: &str) -> Result<(), String> {
    match v {
        Verdict::Accept => Ok(()),
        Verdict::Reject(why) => Err(format!("{what}: {why}")),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: farkas_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn soundness_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut firsts = [0usize; 4];
    for _ in 0..1000 {
        let (m, n) = dims(&mut rng, 5);
        let a = random_mat(&mut rng, m, n);
        let b = random_vec(&mut rng, m);
        let c = core(farkas(&a, &b))?;
        firsts[0] += c.is_first_alternative() as usize;
        accept(
            verify_certificate(Problem::Farkas(&a, &b), &Certificate::Farkas(c)),
            "farkas",
        )?;
        let c = core(fredholm(&a, &b))?;
        firsts[1] += c.is_first_alternative() as usize;
        accept(
            verify_certificate(Problem::Fredholm(&a, &b), &Certificate::Fredholm(c)),
            "fredholm",
        )?;
        let c = core(stiemke(&a))?;
        firsts[2] += c.is_first_alternative() as usize;
        accept(
            verify_certificate(Problem::Stiemke(&a), &Certificate::Stiemke(c)),
            "stiemke",
        )?;
        let c = core(alternatives_lemma(&a))?;
        firsts[3] += c.is_first_alternative() as usize;
        accept(
            verify_certificate(Problem::Alternatives(&a), &Certificate::Alternatives(c)),
            "alternatives",
        )?;
    }
    Ok(format!(
        "4000 certificates accepted; first-alternative counts {firsts:?}"
    ))
}

/// Grid values {-2,-1,-1/2,0,1/2,1,2} doubled to integers.
const GRID: [i64; 7] = [-4, -2, -1, 0, 1, 2, 4];

fn grid_separates(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<i64>> {
    let (m, n) = (a.len(), a[0].len());
    (0..m)
        .map(|_| GRID.iter().copied())
        .multi_cartesian_product()
        .find(|xi| {
            xi.iter().zip(b).map(|(x, y)| x * y).sum::<i64>() < 0
                && (0..n).all(|j| (0..m).map(|i| xi[i] * a[i][j]).sum::<i64>() >= 0)
        })
}

fn nonneg_solution_on_some_support(a: &RatMat, b: &RatVec) -> Option<RatVec> {
    if b.is_zero() {
        return Some(RatVec::zeros(a.cols()));
    }
    (1..=a.cols())
        .flat_map(|k| (0..a.cols()).combinations(k))
        .find_map(
            |s| match solve_linear_system(&a.select_columns(&s).unwrap(), b).unwrap() {
                LinearSolution::Solution(x) if x.is_nonneg() => Some(x.pad(&s, a.cols())),
                _ => None,
            },
        )
}

fn exclusivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut combos, mut seps, mut draws) = (0, 0, 0);
    while combos < 200 || seps < 200 {
        draws += 1;
        let (m, n) = dims(&mut rng, 5);
        let a = scaled_matrix(&mut rng, m, n);
        let bi: Vec<i64> = if draws % 2 == 0 {
            let q: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            a.iter()
                .map(|row| row.iter().zip(&q).map(|(x, y)| x * y).sum())
                .collect()
        } else {
            (0..m).map(|_| scaled_entry(&mut rng)).collect()
        };
        let (ar, b) = (to_mat(&a), to_vec(&bi));
        match core(farkas(&ar, &b))? {
            FarkasCertificate::Combination { .. } if combos < 200 => {
                combos += 1;
                if let Some(xi) = grid_separates(&a, &bi) {
                    return Err(format!(
                        "grid ξ = {xi:?} (halves) separates a Combination instance"
                    ));
                }
            }
            FarkasCertificate::Separation { .. } if seps < 200 => {
                seps += 1;
                if let Some(q) = nonneg_solution_on_some_support(&ar, &b) {
                    return Err(format!("nonnegative q = {q} solves a Separation instance"));
                }
            }
            _ => {}
        }
    }
    Ok(format!(
        "200 combinations and 200 separations checked ({draws} draws)"
    ))
}

fn cone_kkt_and_sampling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut faces = 0;
    for _ in 0..500 {
        let (m, n) = dims(&mut rng, 5);
        let ai = scaled_matrix(&mut rng, m, n);
        let bi: Vec<i64> = (0..m).map(|_| scaled_entry(&mut rng)).collect();
        let (a, b) = (to_mat(&ai), to_vec(&bi));
        let proj = core(cone_distance(&a, &b))?;
        faces += proj.face.len();

        let q = proj.padded_coefficients(n);
        ensure(q.is_nonneg() && a.mul_vec(&q) == proj.nearest, || {
            "nearest point not in the cone".into()
        })?;
        let residual = &b - &proj.nearest;
        ensure(residual.norm_sq() == proj.dist_sq, || {
            "dist_sq ≠ |b - nearest|²".into()
        })?;
        ensure(
            (0..n).all(|j| !residual.dot(&a.column(j)).is_positive()),
            || "residual has positive inner product with a generator".into(),
        )?;
        ensure(residual.dot(&proj.nearest).is_zero(), || {
            "residual not orthogonal to nearest".into()
        })?;

        // |b - A k/d|² = |d·bi - Ai·k|² / (d·SCALE)²; compare numerators exactly.
        let thresholds: Vec<Rat> = (1..=4)
            .map(|d| &proj.dist_sq * &Rat::from_int((d * SCALE) * (d * SCALE)))
            .collect();
        for _ in 0..10_000 {
            let d = rng.gen_range(1..=4i64);
            let k: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
            let sq: i64 = (0..m)
                .map(|i| {
                    let r = d * bi[i] - (0..n).map(|j| ai[i][j] * k[j]).sum::<i64>();
                    r * r
                })
                .sum();
            if Rat::from_int(sq) < thresholds[(d - 1) as usize] {
                return Err(format!(
                    "combination {k:?}/{d} beats dist_sq = {}",
                    proj.dist_sq
                ));
            }
        }
    }
    Ok(format!(
        "500 projections, 5,000,000 samples, mean face size {:.2}",
        faces as f64 / 500.0
    ))
}

fn caratheodory() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut shrunk = 0;
    for _ in 0..500 {
        let (m, n) = dims(&mut rng, 5);
        let a = random_mat(&mut rng, m, n);
        let q = random_nonneg(&mut rng, n, 4);
        let (j, qr) = core(caratheodory_reduce(&a, &q))?;
        ensure(qr.is_nonneg(), || "q' has a negative entry".into())?;
        ensure(a.mul_vec(&qr.pad(&j, n)) == a.mul_vec(&q), || {
            "A_J·q' ≠ A·q".into()
        })?;
        let independent = j.is_empty() || rank(&core(a.select_columns(&j))?) == j.len();
        ensure(independent, || format!("support {j:?} is dependent"))?;
        ensure(j.len() <= rank(&a), || {
            format!("|J| = {} exceeds rank(A)", j.len())
        })?;
        shrunk += (j.len() < n) as usize;
    }
    Ok(format!(
        "500 reductions exact, {shrunk} strictly shrank the support"
    ))
}

fn lp_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let (m, n) = dims(&mut rng, 5);
        let a = random_mat(&mut rng, m, n);
        let x0 = random_nonneg(&mut rng, n, 3);
        let b = a.mul_vec(&x0);
        let c = &a.vec_mul(&random_vec(&mut rng, m)) + &random_nonneg(&mut rng, n, 3);
        let prob = core(LpProblem::new(a, b, c))?;
        match core(solve_lp(&prob))? {
            LpOutcome::Optimal { x, u, value } => {
                ensure(
                    prob.c().dot(&x) == prob.b().dot(&u) && prob.c().dot(&x) == value,
                    || "c·x ≠ b·u".into(),
                )?;
                accept(check_optimal_pair(&prob, &x, &u), "solve_lp pair")?;
                let xr = core(primal_from_dual(&prob, &u))?;
                accept(check_optimal_pair(&prob, &xr, &u), "recovered pair")?;
            }
            other => return Err(format!("feasible bounded LP reported {other:?}")),
        }
    }
    Ok("300 LPs optimal with zero gap and recoverable primal".into())
}

fn gadget() -> Outcome {
    let one = RatVec::from_ints(&[1]);
    for x in [-1, 0] {
        let c = core(farkas(&RatMat::from_ints(&[&[x]]), &one))?;
        ensure(matches!(c, FarkasCertificate::Separation { .. }), || {
            format!("x = {x}: {c:?}")
        })?;
    }
    let c = core(farkas(&RatMat::from_ints(&[&[2]]), &one))?;
    ensure(
        c == FarkasCertificate::Combination {
            q: RatVec::new(vec![Rat::new(1, 2)]),
        },
        || format!("x = 2: {c:?}"),
    )?;
    Ok("x ∈ {-1, 0} separate, x = 2 gives q = (1/2)".into())
}

fn sorted(vs: Vec<RatVec>) -> Vec<String> {
    vs.iter().map(|v| v.to_string()).sorted().collect()
}

fn minimax() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let (m, n) = dims(&mut rng, 4);
        let a = random_mat(&mut rng, m, n);
        let (lo, hi) = core(minimax_gap(&a))?;
        ensure(lo == hi, || format!("gap {lo} ≠ {hi}"))?;
    }
    let pennies = core(solve_game(&RatMat::from_ints(&[&[1, -1], &[-1, 1]])))?;
    let half = RatVec::new(vec![Rat::new(1, 2), Rat::new(1, 2)]);
    ensure(
        pennies.value.is_zero() && pennies.row_strategy == half && pennies.col_strategy == half,
        || format!("matching pennies: {pennies:?}"),
    )?;
    let v = core(solve_game(&RatMat::from_ints(&[&[2, 1], &[0, 3]])))?.value;
    ensure(v == Rat::new(3, 2), || format!("[[2,1],[0,3]] value {v}"))?;
    for _ in 0..100 {
        let (m, n) = dims(&mut rng, 4);
        let a = random_mat(&mut rng, m, n);
        let t = Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        let shifted = RatMat::from_rows(
            a.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| &x + &t).collect())
                .collect(),
        )
        .unwrap();
        let (v0, v1) = (
            core(solve_game(&a))?.value,
            core(solve_game(&shifted))?.value,
        );
        ensure(v1 == &v0 + &t, || {
            format!("value {v1} after shift by {t}, expected {v0} + {t}")
        })?;
        let (p0, q0) = core(optimal_strategy_vertices(&a))?;
        let (p1, q1) = core(optimal_strategy_vertices(&shifted))?;
        ensure(sorted(p0) == sorted(p1) && sorted(q0) == sorted(q1), || {
            format!("optimal strategy sets moved under shift by {t}")
        })?;
    }
    Ok("300 zero gaps, pennies, 3/2, 100 shifts".into())
}

/// Builds `A` with `A·p = 0` by solving each row for its last entry.
fn martingale_market(rng: &mut ChaCha8Rng, p: &RatVec, m: usize) -> RatMat {
    let n = p.dim();
    let rows = (0..m)
        .map(|_| {
            let mut row = random_vec(rng, n).into_entries();
            let partial: Rat = (0..n - 1).map(|j| &row[j] * &p[j]).sum();
            row[n - 1] = -(&partial / &p[n - 1]);
            row
        })
        .collect();
    RatMat::from_rows(rows).unwrap()
}

/// Max of `c·p` over `{p >= 0, sum p = 1, A p = 0}` by enumerating basic solutions.
fn martingale_max(a: &RatMat, c: &RatVec) -> Option<Rat> {
    let n = a.cols();
    let sys = a
        .vcat(&RatMat::from_rows(vec![vec![Rat::one(); n]]).unwrap())
        .unwrap();
    let mut rhs = RatVec::zeros(a.rows() + 1);
    rhs[a.rows()] = Rat::one();
    (1..=n.min(a.rows() + 1))
        .flat_map(|k| (0..n).combinations(k))
        .filter_map(|s| {
            match solve_linear_system(&sys.select_columns(&s).unwrap(), &rhs).unwrap() {
                LinearSolution::Solution(x) if x.is_nonneg() => Some(c.dot(&x.pad(&s, n))),
                _ => None,
            }
        })
        .max()
}

fn superhedging() -> Outcome {
    let h = core(superhedge_price(
        &MarketModel::new(RatMat::from_ints(&[&[1, -1]])),
        &core(Claim::new(RatVec::from_ints(&[1, 0])))?,
    ))?;
    ensure(
        h.price == Rat::new(1, 2) && h.strategy == RatVec::new(vec![Rat::new(1, 2)]),
        || format!("two-state example: price {}, ξ = {}", h.price, h.strategy),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(1..=4);
        let p = random_positive(&mut rng, n);
        let a = martingale_market(&mut rng, &p, m);
        let c = random_nonneg(&mut rng, n, 4);
        let h = core(superhedge_price(
            &MarketModel::new(a.clone()),
            &core(Claim::new(c.clone()))?,
        ))?;
        let oracle = martingale_max(&a, &c).ok_or("oracle found no vertex")?;
        ensure(h.price == oracle, || {
            format!("price {} ≠ oracle {oracle}", h.price)
        })?;
    }
    Ok("example at 1/2 and 200 markets match the vertex oracle".into())
}

fn stiemke_dichotomy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut arbitrage = 0;
    for _ in 0..300 {
        let (m, n) = dims(&mut rng, 5);
        let a = random_mat(&mut rng, m, n);
        let c = core(stiemke(&a))?;
        arbitrage += c.is_first_alternative() as usize;
        accept(
            verify_certificate(Problem::Stiemke(&a), &Certificate::Stiemke(c)),
            "stiemke",
        )?;
    }
    for _ in 0..100 {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(1..=4);
        let p = random_positive(&mut rng, n);
        let a = martingale_market(&mut rng, &p, m);
        let out = core(detect_arbitrage(&MarketModel::new(a)))?;
        ensure(matches!(out, ArbitrageOutcome::NoArbitrage { .. }), || {
            format!("{out:?} with known measure")
        })?;
    }
    for _ in 0..100 {
        let (m, n) = dims(&mut rng, 5);
        let a = arbitrage_market(&mut rng, m, n);
        let out = core(detect_arbitrage(&MarketModel::new(a)))?;
        ensure(matches!(out, ArbitrageOutcome::Arbitrage { .. }), || {
            format!("{out:?} with known arbitrage")
        })?;
    }
    Ok(format!(
        "300 random ({arbitrage} arbitrage), 100 measure-built, 100 arbitrage-built"
    ))
}

/// Random market whose row combination `xi·A` equals a chosen semipositive gain.
fn arbitrage_market(rng: &mut ChaCha8Rng, m: usize, n: usize) -> RatMat {
    let mut gain = random_nonneg(rng, n, 3);
    let hit = rng.gen_range(0..n);
    gain[hit] = &gain[hit] + &Rat::one();
    let mut xi = random_vec(rng, m);
    let k = rng.gen_range(0..m);
    if xi[k].is_zero() {
        xi[k] = Rat::one();
    }
    let mut rows = random_mat(rng, m, n).to_rows();
    let rest: Vec<Rat> = (0..n)
        .map(|j| {
            (0..m)
                .filter(|&i| i != k)
                .map(|i| &xi[i] * &rows[i][j])
                .sum()
        })
        .collect();
    rows[k] = (0..n).map(|j| &(&gain[j] - &rest[j]) / &xi[k]).collect();
    RatMat::from_rows(rows).unwrap()
}

fn write_instance(
    dir: &tempfile::TempDir,
    name: &str,
    a: &RatMat,
    b: &RatVec,
) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let body = serde_json::json!({ "A": a, "b": b });
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn scale_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let budget = Duration::from_secs(30);
    let mut slowest = Duration::ZERO;
    for _ in 0..3 {
        let a = random_mat(&mut rng, 5, 12);
        let b = random_vec(&mut rng, 5);
        let timed: [TimedCall; 4] = [
            ("far", Box::new(|| core(farkas(&a, &b)).map(drop))),
            ("fred", Box::new(|| core(fredholm(&a, &b)).map(drop))),
            ("stiemke", Box::new(|| core(stiemke(&a)).map(drop))),
            ("alt", Box::new(|| core(alternatives_lemma(&a)).map(drop))),
        ];
        for (name, call) in timed.iter() {
            let start = Instant::now();
            call()?;
            let took = start.elapsed();
            ensure(took < budget, || {
                format!("{name} on n = 12 took {took:.1?}")
            })?;
            slowest = slowest.max(took);
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let wide = write_instance(
        &dir,
        "wide.json",
        &random_mat(&mut rng, 2, 21),
        &random_vec(&mut rng, 2),
    );
    for cmd in ["far", "fred", "stiemke", "alt"] {
        let status = Command::new(env!("CARGO_BIN_EXE_farkas"))
            .arg(cmd)
            .arg(&wide)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(3), || {
            format!("`farkas {cmd}` on n = 21 exited with {status}")
        })?;
    }
    Ok(format!(
        "slowest n = 12 decide call {slowest:.2?}; n = 21 exits 3"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("certificate soundness sweep", soundness_sweep, 60),
        ("exclusivity", exclusivity, 120),
        ("cone distance KKT and sampling", cone_kkt_and_sampling, 120),
        ("Carathéodory exactness", caratheodory, 0),
        ("LP strong duality", lp_duality, 0),
        ("one-column gadget", gadget, 0),
        ("minimax", minimax, 0),
        ("superhedging duality", superhedging, 0),
        ("Stiemke/arbitrage dichotomy", stiemke_dichotomy, 0),
        ("scale limit", scale_limit, 0),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let took = start.elapsed();
        let result = match result {
            Ok(_) if *limit > 0 && took > Duration::from_secs(*limit) => {
                Err(format!("took {took:.1?}, limit {limit} s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {took:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}
