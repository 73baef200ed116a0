//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs as `cargo test --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::*;
use stochprod::analysis::partial_sums;
use stochprod::cli::SequenceFile;
use stochprod::{
    accumulate, check_theorem, classify_schedule, communication_classes, gantmacher_form, generate,
    run_consensus, run_markov, segment, Direction, GapSchedule, GeneratorSpec, MatrixSequence,
    RunOptions, SeriesClass, StochasticMatrix, TheoremOptions, ZeroPattern,
};

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Duration, Check); 9] = [
        ("1 tau laws", Duration::from_secs(5), tau_laws),
        ("2 min+ law", Duration::from_secs(5), min_plus_law),
        (
            "3 gantmacher correctness",
            Duration::from_secs(10),
            gantmacher_correctness,
        ),
        (
            "4 segmentation at desk scale",
            Duration::from_secs(30),
            segmentation_desk_scale,
        ),
        (
            "5 block consensus conclusion",
            Duration::from_secs(30),
            block_consensus,
        ),
        (
            "6 schedule boundary",
            Duration::from_secs(60),
            schedule_boundary,
        ),
        ("7 degroot oracle", Duration::from_secs(5), degroot_oracle),
        (
            "8 cross-module consistency",
            Duration::from_secs(30),
            cross_module,
        ),
        ("9 cli", Duration::from_secs(60), cli_suite),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| Err(panic_message(&p)));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => {
                Err(format!("{detail}; took {elapsed:.2?} > {limit:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name:<30} {elapsed:>9.2?}  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:<30} {elapsed:>9.2?}  {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn tau_laws() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_gap = f64::NEG_INFINITY;
    for k in 0..1000 {
        let n = rng.gen_range(1..=8);
        let a = random_matrix(&mut rng, n, false);
        let b = random_matrix(&mut rng, n, false);
        let ab = a.multiply(&b).map_err(|e| e.to_string())?;
        for m in [&a, &b, &ab] {
            let tau = m.ergodicity_coefficient();
            ensure!(
                (0.0..=1.0).contains(&tau),
                "pair {k}: tau {tau} outside [0,1]"
            );
            let oracle = tau_oracle(m);
            ensure!(
                (tau - oracle).abs() < 1e-12,
                "pair {k}: tau {tau} vs definition {oracle}"
            );
        }
        let gap =
            ab.ergodicity_coefficient() - a.ergodicity_coefficient() * b.ergodicity_coefficient();
        worst_gap = worst_gap.max(gap);
        ensure!(
            gap <= 1e-12,
            "pair {k}: tau(AB) exceeds tau(A)tau(B) by {gap:e}"
        );

        let row = a.row(rng.gen_range(0..n)).to_vec();
        let equal = StochasticMatrix::from_rows(vec![row; n]).map_err(|e| e.to_string())?;
        ensure!(
            equal.ergodicity_coefficient() == 0.0,
            "pair {k}: equal rows give nonzero tau"
        );
    }
    Ok(format!("max tau(AB) - tau(A)tau(B) = {worst_gap:.2e}"))
}

fn min_plus_law() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tightest = f64::INFINITY;
    for k in 0..1000 {
        let n = rng.gen_range(1..=8);
        let a = random_matrix(&mut rng, n, false);
        let b = random_matrix(&mut rng, n, false);
        ensure!(
            a.as_slice().iter().all(|&v| v == 0.0 || v >= 1e-6),
            "pair {k}: corpus entry below 1e-6"
        );
        let ab = a.multiply(&b).map_err(|e| e.to_string())?;
        ensure!(
            a.min_plus() == min_plus_oracle(&a),
            "pair {k}: min+ differs from definition"
        );
        let slack = ab.min_plus() - a.min_plus() * b.min_plus();
        tightest = tightest.min(slack);
        ensure!(
            slack >= -1e-12,
            "pair {k}: min+(AB) below product by {slack:e}"
        );
    }
    Ok(format!("min slack {tightest:.2e}"))
}

fn gantmacher_correctness() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut blocks = 0;
    for k in 0..1000 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.0..0.4);
        let p = random_positive_diagonal_pattern(&mut rng, n, density);
        let a = StochasticMatrix::normalized(
            n,
            (0..n * n)
                .map(|x| if p.get(x / n, x % n) { 1.0 } else { 0.0 })
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let form = gantmacher_form(&a).map_err(|e| e.to_string())?;
        let perm = form.permutation();
        let part = form.partition();
        blocks += form.num_blocks();

        let oracle = classes_oracle(&p);
        let mut got: Vec<(Vec<usize>, bool)> = part
            .classes()
            .iter()
            .enumerate()
            .map(|(c, class)| {
                let mut s = class.clone();
                s.sort_unstable();
                (s, c < part.essential_count())
            })
            .collect();
        got.sort();
        ensure!(
            got == oracle,
            "pattern {k}: classes {got:?} vs closure oracle {oracle:?}"
        );

        let q = ZeroPattern::from_fn(n, |r, c| p.get(perm[r], perm[c]));
        let block_of: Vec<usize> = (0..n)
            .map(|r| {
                (0..form.num_blocks())
                    .find(|&b| form.block_range(b).contains(&r))
                    .unwrap()
            })
            .collect();
        let reach = closure(&grid(&q));
        for r in 0..n {
            for c in 0..n {
                if q.get(r, c) {
                    ensure!(
                        block_of[c] <= block_of[r],
                        "pattern {k}: entry above block diagonal"
                    );
                    if block_of[r] < form.essential_count() {
                        ensure!(
                            block_of[c] == block_of[r],
                            "pattern {k}: essential block leaks"
                        );
                    }
                }
                if block_of[r] == block_of[c] {
                    ensure!(
                        reach[r][c],
                        "pattern {k}: diagonal block not strongly connected"
                    );
                }
            }
        }
        for b in form.essential_count()..form.num_blocks() {
            let range = form.block_range(b);
            let linked = range.clone().any(|r| (0..range.start).any(|c| q.get(r, c)));
            ensure!(
                linked,
                "pattern {k}: inessential block {b} has no positive earlier block"
            );
        }
    }
    Ok(format!("{blocks} blocks checked"))
}

fn segmentation_desk_scale() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut windows = 0;
    for k in 0..200u64 {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(0.05..0.5);
        let support = random_positive_diagonal_pattern(&mut rng, n, density);
        let spec = GeneratorSpec::random_positive_diagonal(n, k, 0.01, rng.gen_range(0.2..0.8))
            .with_support(support);
        let seq = MatrixSequence::from_generator(spec, 300).map_err(|e| e.to_string())?;
        let steps: Vec<Vec<Vec<bool>>> = (0..300)
            .map(|t| positive_grid(&seq.matrix(t).unwrap()))
            .collect();
        for direction in [Direction::Backward, Direction::Forward] {
            let seg = segment(&seq, direction, 300).map_err(|e| e.to_string())?;
            ensure!(
                seg.stabilized,
                "sequence {k} {direction:?}: not stabilized, cuts {:?}",
                seg.saturation_cuts
            );
            let common = grid(&seg.segment_pattern);
            for (s, t) in seg.windows() {
                windows += 1;
                let mut p = closure(&vec![vec![false; n]; n]);
                for step in &steps[s..t] {
                    p = match direction {
                        Direction::Forward => bool_product(&p, step),
                        Direction::Backward => bool_product(step, &p),
                    };
                }
                ensure!(
                    p == common,
                    "sequence {k} {direction:?}: window [{s},{t}] has another pattern"
                );
            }
            // block dichotomy on the closure-oracle classes
            let classes = classes_oracle(&seg.segment_pattern);
            for (ck, _) in &classes {
                for (cl, _) in &classes {
                    let values: Vec<bool> = ck
                        .iter()
                        .flat_map(|&i| cl.iter().map(move |&j| (i, j)))
                        .map(|(i, j)| common[i][j])
                        .collect();
                    let all = values.iter().all(|&v| v);
                    let none = values.iter().all(|&v| !v);
                    ensure!(
                        all || none,
                        "sequence {k} {direction:?}: mixed block {ck:?} x {cl:?}"
                    );
                    ensure!(
                        ck != cl || all,
                        "sequence {k} {direction:?}: diagonal block {ck:?} not positive"
                    );
                }
            }
        }
    }
    Ok(format!("{windows} windows, 0 violations"))
}

fn clusters_match(
    run_clusters: &[Vec<usize>],
    essential: &[Vec<usize>],
    inessential: &[usize],
) -> bool {
    let essential_clusters: Vec<Vec<usize>> = run_clusters
        .iter()
        .map(|c| {
            c.iter()
                .copied()
                .filter(|i| !inessential.contains(i))
                .collect::<Vec<_>>()
        })
        .filter(|c: &Vec<usize>| !c.is_empty())
        .collect();
    let mut a: Vec<Vec<usize>> = essential_clusters;
    let mut b: Vec<Vec<usize>> = essential
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    a.sort();
    b.sort();
    a == b
}

fn block_consensus() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases: Vec<(String, MatrixSequence)> = Vec::new();
    for k in 0..10 {
        let n = rng.gen_range(2..=8);
        let rows = (0..n)
            .map(|_| {
                let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
                let s: f64 = u.iter().sum();
                u.into_iter().map(|v| v / s).collect()
            })
            .collect();
        let a = StochasticMatrix::from_rows(rows).map_err(|e| e.to_string())?;
        cases.push((
            format!("constant positive #{k}"),
            MatrixSequence::constant(a, 500).unwrap(),
        ));
    }
    let supports = [
        ("full", ZeroPattern::full(3)),
        (
            "two closed classes",
            ZeroPattern::from_fn(3, |i, j| (i < 2) == (j < 2)),
        ),
        (
            "absorbing pair + follower",
            ZeroPattern::from_fn(3, |i, j| i == j || i == 2),
        ),
    ];
    for (label, support) in supports {
        for seed in 0..3 {
            let spec = GeneratorSpec::adversarial_gap(3, seed, 0.3, GapSchedule::constant(0.3, 5))
                .with_support(support.clone());
            let seq = MatrixSequence::from_generator(spec, 500).map_err(|e| e.to_string())?;
            cases.push((format!("adversarial {label} seed {seed}"), seq));
        }
    }
    let mut worst: f64 = 0.0;
    for (label, seq) in &cases {
        let report = check_theorem(seq, &TheoremOptions::new(500)).map_err(|e| e.to_string())?;
        let tau = report.residuals.max_tau();
        let jj = report.residuals.inessential_norm;
        worst = worst.max(tau).max(jj);
        ensure!(tau < 1e-8, "{label}: essential tau residual {tau:e}");
        ensure!(jj < 1e-8, "{label}: [J,J] norm {jj:e}");

        let x0: Vec<f64> = (0..seq.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let run =
            run_consensus(seq, &x0, &RunOptions::with_horizon(500)).map_err(|e| e.to_string())?;
        let inessential = report.classes.inessential_indices();
        ensure!(
            clusters_match(
                &run.report.clusters,
                report.classes.essential_classes(),
                &inessential
            ),
            "{label}: clusters {:?} vs essential classes {:?}",
            run.report.clusters,
            report.classes.essential_classes()
        );
    }
    Ok(format!(
        "{} sequences, worst residual {worst:.1e}",
        cases.len()
    ))
}

fn schedule_boundary() -> Result<String, String> {
    let diverging = GapSchedule::loglog(1.0, 0.9);
    let spec = GeneratorSpec::adversarial_gap(3, 6, 0.3, diverging.clone()).with_lazy_bursts();
    let seq = MatrixSequence::from_generator(spec, 400).map_err(|e| e.to_string())?;
    let mut opts = TheoremOptions::new(400);
    opts.schedule = Some(diverging.clone());
    let report = check_theorem(&seq, &opts).map_err(|e| e.to_string())?;
    ensure!(
        classify_schedule(&diverging) == SeriesClass::Divergent,
        "loglog 0.9 not divergent"
    );
    ensure!(
        report.hypothesis.certified,
        "loglog 0.9: hypothesis not certified"
    );
    let res = report.residuals.max_asserted();
    ensure!(res < 1e-6, "loglog 0.9: residual {res:e}");

    let stalling = GapSchedule::log(1.0, 0.25);
    let spec = GeneratorSpec::adversarial_gap(3, 6, 0.3, stalling.clone()).with_lazy_bursts();
    let seq = MatrixSequence::from_generator(spec, 1000).map_err(|e| e.to_string())?;
    ensure!(
        classify_schedule(&stalling) == SeriesClass::Convergent,
        "log 0.25 not convergent"
    );
    let mut stall = Vec::new();
    for h in [500, 1000] {
        let mut opts = TheoremOptions::new(h);
        opts.schedule = Some(stalling.clone());
        let report = check_theorem(&seq, &opts).map_err(|e| e.to_string())?;
        ensure!(
            !report.hypothesis.certified,
            "log 0.25: hypothesis certified"
        );
        stall.push(report.residuals.max_tau());
    }

    let log = partial_sums(&stalling, &[100_000, 1_000_000]).map_err(|e| e.to_string())?;
    let d_log = log[1].1 - log[0].1;
    ensure!(d_log < 0.1, "log 0.25: S(1e6) - S(1e5) = {d_log}");
    let loglog = partial_sums(&GapSchedule::loglog(1.0, 0.25), &[100_000, 1_000_000])
        .map_err(|e| e.to_string())?;
    let d_loglog = loglog[1].1 - loglog[0].1;
    ensure!(d_loglog > 1.0, "loglog 0.25: S(1e6) - S(1e5) = {d_loglog}");
    Ok(format!(
        "loglog residual {res:.1e}; log tau stalls {:.3} -> {:.3}; increments {d_log:.4} / {d_loglog:.0}",
        stall[0], stall[1]
    ))
}

fn degroot_oracle() -> Result<String, String> {
    let a = StochasticMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
    let seq = MatrixSequence::constant(a, 1000).unwrap();
    let opts = RunOptions::with_horizon(1000);
    let run = run_consensus(&seq, &[0.0, 1.0], &opts).map_err(|e| e.to_string())?;
    let x = &run.final_state().x;
    ensure!(
        x.iter().all(|v| (v - 2.0 / 3.0).abs() < 1e-6),
        "consensus {x:?}"
    );
    let m = run_markov(&seq, &[1.0, 0.0], &opts).map_err(|e| e.to_string())?;
    let p = &m.trace.last().unwrap().p;
    ensure!(
        (p[0] - 1.0 / 3.0).abs() < 1e-6 && (p[1] - 2.0 / 3.0).abs() < 1e-6,
        "stationary {p:?}"
    );
    Ok(format!("x = {:.9}, p = ({:.9}, {:.9})", x[0], p[0], p[1]))
}

fn cross_module() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for k in 0..10u64 {
        let n = rng.gen_range(2..=8);
        let spec = GeneratorSpec::random_positive_diagonal(n, k, 0.01, 0.3);
        let seq = MatrixSequence::from_generator(spec, 200).map_err(|e| e.to_string())?;
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let opts = RunOptions {
            tol: 0.0,
            ..RunOptions::with_horizon(200)
        };
        let run = run_consensus(&seq, &x0, &opts).map_err(|e| e.to_string())?;
        ensure!(
            run.trace.len() == 201,
            "run {k}: trace length {}",
            run.trace.len()
        );
        for _ in 0..20 {
            let t = rng.gen_range(0..=200);
            let acc = accumulate(&seq, Direction::Backward, 0, t).map_err(|e| e.to_string())?;
            let expected = acc.value.apply(&x0).map_err(|e| e.to_string())?;
            let err = expected
                .iter()
                .zip(&run.trace[t].x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(err);
            checks += 1;
            ensure!(err <= 1e-9, "run {k}, t = {t}: trace differs by {err:e}");
        }
    }
    Ok(format!("{checks} checkpoints, max difference {worst:.1e}"))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stochprod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let out = cli(args);
    ensure!(
        out.status.code() == Some(0),
        "{args:?}: exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: {e}"))
}

fn last_csv_row(out: &Output) -> Vec<f64> {
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().last().unwrap_or("");
    line.split(',')
        .skip(1)
        .map(|v| v.parse().unwrap_or(f64::NAN))
        .collect()
}

fn cli_suite() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name);
    let s = |p: &Path| p.to_str().unwrap().to_string();

    // degroot through the binary
    let a = StochasticMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.25, 0.75]]).unwrap();
    let degroot = path("degroot.json");
    SequenceFile::Generator {
        spec: GeneratorSpec::constant(a.clone()),
        horizon: None,
    }
    .save(&degroot)
    .map_err(|e| e.to_string())?;
    let short = path("short.json");
    SequenceFile::Stored(vec![a; 3])
        .save(&short)
        .map_err(|e| e.to_string())?;
    let out = cli(&["simulate", &s(&degroot), "--x0", "0,1", "--horizon", "1000"]);
    ensure!(out.status.success(), "simulate failed");
    let x = last_csv_row(&out);
    ensure!(
        x.iter().all(|v| (v - 2.0 / 3.0).abs() < 1e-6),
        "cli consensus {x:?}"
    );
    let out = cli(&[
        "simulate",
        &s(&degroot),
        "--process",
        "markov",
        "--x0",
        "1,0",
        "--horizon",
        "1000",
    ]);
    let p = last_csv_row(&out);
    ensure!(
        (p[0] - 1.0 / 3.0).abs() < 1e-6 && (p[1] - 2.0 / 3.0).abs() < 1e-6,
        "cli markov {p:?}"
    );

    // generate, then verify bit-exact round trip against the library
    let spec = GeneratorSpec::random_positive_diagonal(5, 9, 0.01, 0.3)
        .with_support(ZeroPattern::from_fn(5, |i, j| i >= j || (i < 2 && j < 2)));
    let spec_path = path("spec.json");
    std::fs::write(&spec_path, serde_json::to_string(&spec).unwrap()).unwrap();
    let seq_path = path("seq.json");
    let out = cli(&[
        "generate",
        "--spec",
        &s(&spec_path),
        "--count",
        "300",
        "--out",
        &s(&seq_path),
    ]);
    ensure!(out.status.success(), "generate failed");
    let SequenceFile::Stored(ms) = SequenceFile::load(&seq_path).map_err(|e| e.to_string())? else {
        return Err("generate wrote a generator file".into());
    };
    for (t, m) in ms.iter().enumerate() {
        ensure!(
            *m == generate(&spec, t).unwrap(),
            "generated matrix {t} differs after round trip"
        );
    }

    // segmentation and block structure
    let seg = cli_json(&["segment", &s(&seq_path), "--direction", "bwd"])?;
    ensure!(
        seg["stabilized"] == Value::Bool(true),
        "cli segment not stabilized"
    );
    ensure!(
        seg["block_violations"]
            .as_array()
            .is_some_and(|v| v.is_empty()),
        "cli block violations"
    );
    let expected = communication_classes(
        &segment(
            &MatrixSequence::from_matrices(ms).unwrap(),
            Direction::Backward,
            300,
        )
        .unwrap()
        .segment_pattern,
    )
    .unwrap();
    ensure!(
        seg["gantmacher"]["partition"]["classes"]
            == serde_json::to_value(expected.classes()).unwrap(),
        "cli classes differ"
    );

    // conclusion on an adversarial generator file
    let adv = path("adv.json");
    let gen = SequenceFile::Generator {
        spec: GeneratorSpec::adversarial_gap(3, 1, 0.3, GapSchedule::constant(0.3, 5)),
        horizon: Some(500),
    };
    gen.save(&adv).map_err(|e| e.to_string())?;
    let report = cli_json(&[
        "check",
        &s(&adv),
        "--schedule",
        "constant",
        "--schedule-delta",
        "0.3",
        "--schedule-gap",
        "5",
    ])?;
    ensure!(
        report["conclusion_verified"] == Value::Bool(true),
        "cli check not verified"
    );
    ensure!(
        report["hypothesis"]["certified"] == Value::Bool(true),
        "cli check not certified"
    );

    // series
    let log = cli_json(&[
        "series", "--kind", "log", "--delta", "0.25", "--upto", "1000000", "--format", "json",
    ])?;
    ensure!(
        log["classification"] == "convergent",
        "cli log classification {}",
        log["classification"]
    );
    let sums = log["partial_sums"].as_array().unwrap();
    let inc = sums[sums.len() - 1]["partial_sum"].as_f64().unwrap()
        - sums[sums.len() - 2]["partial_sum"].as_f64().unwrap();
    ensure!(inc < 0.1, "cli log increment {inc}");
    let ll = cli_json(&[
        "series", "--kind", "loglog", "--delta", "0.25", "--upto", "1000000", "--format", "json",
    ])?;
    ensure!(
        ll["classification"] == "divergent",
        "cli loglog classification"
    );

    // exit codes
    let bad = path("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let zero_diag = path("zero.json");
    std::fs::write(&zero_diag, r#"{"n": 2, "matrices": [[[0, 1], [1, 0]]]}"#).unwrap();
    let cases: [(Vec<String>, i32); 8] = [
        (
            vec![
                "simulate".into(),
                s(&short),
                "--x0".into(),
                "0,1".into(),
                "--horizon".into(),
                "4".into(),
            ],
            2,
        ),
        (vec!["check".into(), s(&path("missing.json"))], 2),
        (vec!["check".into(), s(&bad)], 2),
        (vec!["check".into(), s(&zero_diag)], 2),
        (
            vec![
                "simulate".into(),
                s(&degroot),
                "--x0".into(),
                "1,2,3".into(),
            ],
            2,
        ),
        (vec!["frobnicate".into()], 2),
        (
            vec![
                "series".into(),
                "--kind".into(),
                "log".into(),
                "--delta".into(),
                "1.5".into(),
                "--upto".into(),
                "10".into(),
            ],
            2,
        ),
        (
            vec![
                "check".into(),
                s(&degroot),
                "--out".into(),
                s(&path("no/such/dir/out.json")),
            ],
            1,
        ),
    ];
    for (args, code) in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = cli(&args).status.code();
        ensure!(
            got == Some(*code),
            "{args:?}: exit {got:?}, expected {code}"
        );
    }
    Ok(format!("{} exit-code cases", cases.len()))
}
