//! Acceptance criteria, one line of output each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use maglab_core::approximation::*;
use maglab_core::geometry::*;
use maglab_core::metric::{diagonal_embedding, l1_product, magnitude_finite, FiniteMetricSpace, Metric, PointCloud};
use maglab_core::numeric::elementary_symmetric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nondecreasing(seq: &[f64]) -> bool {
    seq.windows(2).all(|w| w[0] <= w[1])
}

fn interval_target() -> Outcome {
    let p = Polytope::new(vec![vec![0.0], vec![1.0]]).map_err(|e| e.to_string())?;
    let seq = magnitude_lower_sequence(&p, 64, SampleScheme::FarthestPoint, 0).map_err(|e| e.to_string())?;
    let last = *seq.last().unwrap();
    ensure(seq.len() == 64, || format!("chain has {} entries", seq.len()))?;
    ensure(nondecreasing(&seq), || "sequence decreases".into())?;
    ensure((1.48..=1.5).contains(&last), || format!("final value {last}"))?;
    ensure(seq.iter().all(|&m| m <= 1.5 + 1e-8), || "exceeds 1.5".into())?;
    Ok(format!("final {last:.6}"))
}

fn square_target() -> Outcome {
    let p = Polytope::unit_box(&[1.0, 1.0]).map_err(|e| e.to_string())?;
    let formula = convex_magnitude_l1(&p).map_err(|e| e.to_string())?.value;
    ensure((formula - 2.25).abs() <= 1e-12, || format!("formula {formula}"))?;
    let seq = magnitude_lower_sequence(&p, 256, SampleScheme::FarthestPoint, 0).map_err(|e| e.to_string())?;
    let last = *seq.last().unwrap();
    ensure(nondecreasing(&seq), || "sequence decreases".into())?;
    ensure(last >= 2.18, || format!("final value {last}"))?;
    ensure(seq.iter().all(|&m| m <= 2.25 + 1e-8), || "exceeds 2.25".into())?;
    Ok(format!("formula {formula}, 256-point sample {last:.6}"))
}

fn simplex_cross_check() -> Outcome {
    let p = Polytope::coordinate_simplex(&[1.0, 1.0]).map_err(|e| e.to_string())?;
    let iv = intrinsic_volumes(&p).map_err(|e| e.to_string())?;
    for (k, want) in [1.0, 2.0, 0.5].into_iter().enumerate() {
        ensure((iv.get(k) - want).abs() <= 1e-12, || format!("V'_{k} = {}", iv.get(k)))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for _ in 0..5 {
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..4.0)).collect();
            let fast = coordinate_simplex_intrinsic_volumes(&a).map_err(|e| e.to_string())?;
            let full = intrinsic_volumes_enumerated(&Polytope::coordinate_simplex(&a).map_err(|e| e.to_string())?);
            for k in 0..=n {
                let err = (fast.get(k) - full.get(k)).abs() / fast.get(k).abs().max(1.0);
                worst = worst.max(err);
                ensure(err <= 1e-9, || format!("N={n} k={k}: {} vs {}", fast.get(k), full.get(k)))?;
            }
        }
    }
    Ok(format!("40 random simplices, worst relative gap {worst:.1e}"))
}

fn harmonic_oracle(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

fn divergence() -> Outcome {
    let mut n_list: Vec<usize> = (1..=100).collect();
    n_list.extend([150, 227, 300]);
    let report = divergence_experiment(&SequenceSpec::Harmonic, &n_list, &DivergenceOptions::default())
        .map_err(|e| e.to_string())?;
    let at_100 = report.half_sums[99];
    ensure((at_100 - 2.5937).abs() <= 1e-3, || format!("half sum at N=100 is {at_100}"))?;
    let rows = &report.table.rows;
    for (i, row) in rows.iter().enumerate() {
        ensure(row.formula_value >= report.half_sums[i], || format!("formula below half sum at N={}", row.param))?;
        if i > 0 {
            ensure(row.formula_value > rows[i - 1].formula_value, || {
                format!("formula not increasing at N={}", row.param)
            })?;
        }
    }
    let crossing = report
        .crossings
        .iter()
        .find(|c| c.threshold == 3.0)
        .and_then(|c| c.n)
        .ok_or("no crossing for M=3")?;
    let oracle = (1..).find(|&n| harmonic_oracle(n) >= 6.0).unwrap();
    ensure(crossing == oracle && crossing == 227, || format!("crossing {crossing}, oracle {oracle}"))?;
    Ok(format!("half sum at 100 = {at_100:.6}, M=3 crossed at N={crossing}"))
}

fn convergent_contrast() -> Outcome {
    let n_list: Vec<usize> = (1..=30).collect();
    let report = divergence_experiment(&SequenceSpec::Geometric { r: 0.5 }, &n_list, &DivergenceOptions::default())
        .map_err(|e| e.to_string())?;
    let mut top: f64 = 0.0;
    for (row, half) in report.table.rows.iter().zip(&report.half_sums) {
        ensure(row.formula_value <= half.exp() + 1e-9, || format!("N={} above exp bound", row.param))?;
        ensure(row.formula_value < 0.5f64.exp(), || format!("N={} reaches e^(1/2)", row.param))?;
        top = top.max(row.formula_value);
    }
    Ok(format!("max over N<=30 is {top:.9} < {:.9}", 0.5f64.exp()))
}

fn one_point_sweep_square() -> Outcome {
    let p = Polytope::unit_box(&[1.0, 1.0]).map_err(|e| e.to_string())?;
    let ts = [1.0, 0.1, 0.01, 0.001];
    let table = one_point_sweep(&p, &ts, &SweepOptions::default()).map_err(|e| e.to_string())?;
    for (row, &t) in table.rows.iter().zip(&ts) {
        let closed = (1.0 + t / 2.0) * (1.0 + t / 2.0);
        ensure((row.formula_value - closed).abs() <= 1e-12, || format!("t={t}: formula {}", row.formula_value))?;
        ensure(1.0 <= row.sample_magnitude, || format!("t={t}: sample below 1"))?;
        ensure(row.sample_magnitude <= closed, || format!("t={t}: sample above formula"))?;
        ensure(closed <= (6.0 * t).exp() + 1e-8, || format!("t={t}: formula above exp bound"))?;
        if t <= 0.01 {
            ensure(row.formula_value - 1.0 <= 10.0 * t, || format!("t={t}: formula far from 1"))?;
        }
    }
    let flags: Vec<&str> = table.rows.iter().map(|r| r.flag.as_str()).collect();
    Ok(format!("4 rows, flags {flags:?}"))
}

fn inequality_suite_1000() -> Outcome {
    let cfg = SuiteConfig {
        count: 1000,
        seed: 0,
        max_vertices: 8,
        max_dim: 6,
        tol: 1e-8,
        ..SuiteConfig::default()
    };
    let report = inequality_suite(&cfg).map_err(|e| e.to_string())?;
    ensure(report.total_violations() == 0, || format!("{:?}", report.violations))?;
    let checked: usize = report.checks.iter().map(|c| c.passed).sum();
    Ok(format!("{checked} checks passed, 0 violations"))
}

fn random_space(rng: &mut ChaCha8Rng) -> FiniteMetricSpace {
    loop {
        let n = rng.random_range(1..=6);
        let dim = rng.random_range(1..=3);
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect())
            .collect();
        if let Ok(space) = PointCloud::new(pts, Metric::L1).and_then(|c| c.to_space()) {
            return space;
        }
    }
}

fn mag(space: &FiniteMetricSpace) -> Result<f64, String> {
    magnitude_finite(space).map(|w| w.magnitude).map_err(|e| e.to_string())
}

fn product_and_power_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_product, mut worst_power): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for _ in 0..200 {
        let a = random_space(&mut rng);
        let b = random_space(&mut rng);
        let (ma, mb) = (mag(&a)?, mag(&b)?);
        let gap = (mag(&l1_product(&a, &b))? - ma * mb).abs();
        worst_product = worst_product.max(gap);
        ensure(gap <= 1e-8, || format!("product gap {gap}"))?;
        for n in [2usize, 3] {
            let scaled = mag(&a.scale(n as f64).map_err(|e| e.to_string())?)?;
            let diagonal = mag(&diagonal_embedding(&a, n).map_err(|e| e.to_string())?)?;
            let excess = scaled - ma.powi(n as i32);
            worst_power = worst_power.max(excess);
            ensure(excess <= 1e-9, || format!("|{n}A| exceeds |A|^{n} by {excess}"))?;
            ensure((scaled - diagonal).abs() <= 1e-9 * scaled, || "diagonal embedding differs from nA".into())?;
        }
    }
    Ok(format!(
        "worst product gap {worst_product:.1e}, worst power excess {worst_power:.2e}"
    ))
}

fn wills_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.random_range(1..=8);
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
        let product: f64 = a.iter().map(|x| x + 1.0).product();
        let sum: f64 = elementary_symmetric(&a).iter().sum();
        ensure((product - sum).abs() <= 1e-9 * product, || format!("box {a:?}: {product} vs {sum}"))?;
        let check = wills_identity_check(
            &Polytope::unit_box(&a).map_err(|e| e.to_string())?,
            WillsMethod::Auto { samples: 0, seed: 0 },
        )
        .map_err(|e| e.to_string())?;
        ensure(check.route == WillsRoute::BoxProduct, || "box not detected".into())?;
        ensure((check.dilated_volume - check.intrinsic_sum).abs() <= 1e-9 * product, || {
            format!("box {a:?}: {} vs {}", check.dilated_volume, check.intrinsic_sum)
        })?;
    }
    let mut worst_sigma: f64 = 0.0;
    for i in 0..10 {
        let m = rng.random_range(4..=8);
        let verts: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let p = Polytope::new(verts).map_err(|e| e.to_string())?;
        let check = wills_identity_check(&p, WillsMethod::MonteCarlo { samples: 1_000_000, seed: i })
            .map_err(|e| e.to_string())?;
        let se = check.stderr.ok_or("no standard error")?;
        let sigma = (check.dilated_volume - check.intrinsic_sum).abs() / se;
        worst_sigma = worst_sigma.max(sigma);
        ensure(sigma <= 3.0, || format!("polytope {i}: {sigma:.2} standard errors"))?;
    }
    Ok(format!("50 boxes exact; Monte Carlo worst {worst_sigma:.2} standard errors"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

/// Stdout plus every file the command wrote to its output directory.
fn run_cli(args: &[String], threads: &str, out_dir: &Path) -> Result<Vec<u8>, String> {
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maglab"));
    cmd.env_clear().args(args).args(["--threads", threads]);
    let needs_output = args.iter().any(|a| a == "sweep" || a == "diverge");
    if needs_output {
        cmd.arg("--output").arg(out_dir.join("table.csv"));
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    let mut bytes = out.stdout;
    if needs_output {
        for name in ["table.csv", "table.json"] {
            bytes.extend(std::fs::read(out_dir.join(name)).map_err(|e| e.to_string())?);
        }
    }
    Ok(bytes)
}

fn library_outputs() -> String {
    let p = Polytope::new(vec![
        vec![0.1, 0.0, 0.3],
        vec![1.0, 0.2, 0.0],
        vec![0.0, 1.1, 0.4],
        vec![0.5, 0.5, 1.2],
        vec![0.9, 0.8, 0.7],
    ])
    .unwrap();
    let wills = wills_identity_check(&p, WillsMethod::MonteCarlo { samples: 100_000, seed: 1 }).unwrap();
    let iv = intrinsic_volumes_enumerated(&Polytope::coordinate_simplex(&[0.3, 0.9, 1.7, 0.4, 1.1, 2.0]).unwrap());
    let seq = magnitude_lower_sequence(&p, 48, SampleScheme::VertexGrid, 2).unwrap();
    format!("{wills:?}|{:?}|{seq:?}", iv.values)
}

fn determinism() -> Outcome {
    let tmp = TempDir::new().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let interval = write(dir, "interval.json", r#"{"vertices": [[0], [1]]}"#);
    let square = write(dir, "square.json", r#"{"vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}"#);
    let simplex2 = write(dir, "simplex2.json", r#"{"vertices": [[0, 0], [1, 0], [0, 1]]}"#);
    let legs = [0.3, 0.9, 1.7, 0.4, 1.1, 2.0, 0.6, 1.3];
    let mut verts = vec![vec![0.0; 8]];
    for (i, a) in legs.iter().enumerate() {
        let mut v = vec![0.0; 8];
        v[i] = *a;
        verts.push(v);
    }
    let simplex8 = write(dir, "simplex8.json", &format!(r#"{{"vertices": {verts:?}}}"#));
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cloud = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        (0..5).map(|_| (0..2).map(|_| rng.random_range(-1.5..1.5)).collect()).collect()
    };
    let (a, b) = (cloud(&mut rng), cloud(&mut rng));
    let product: Vec<Vec<f64>> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| [x.as_slice(), y.as_slice()].concat()))
        .collect();
    let cloud_a = write(dir, "a.json", &format!(r#"{{"points": {a:?}, "metric": "l1"}}"#));
    let cloud_ab = write(dir, "ab.json", &format!(r#"{{"points": {product:?}, "metric": "l1"}}"#));
    let geometric_n: Vec<String> = (1..=30).map(|n| n.to_string()).collect();

    let runs: Vec<Vec<String>> = [
        vec!["sweep", "--input", &interval, "--budget", "64", "--t-list", "1"],
        vec!["sweep", "--input", &square, "--budget", "256", "--t-list", "1"],
        vec!["convex-mag", "--input", &square],
        vec!["ivol", "--input", &simplex2],
        vec!["ivol", "--input", &simplex8],
        vec!["diverge", "--spec", "harmonic", "--n-list", "10,100,227"],
        vec!["diverge", "--spec", "geometric:0.5", "--n-list", &geometric_n.join(",")],
        vec!["sweep", "--input", &square, "--t-list", "1,0.1,0.01,0.001"],
        vec!["check", "--count", "1000", "--seed", "0"],
        vec!["mag", "--input", &cloud_a],
        vec!["mag", "--input", &cloud_ab],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect();
    for (i, args) in runs.iter().enumerate() {
        let one = run_cli(args, "1", &dir.join(format!("run{i}_t1")))?;
        let four = run_cli(args, "4", &dir.join(format!("run{i}_t4")))?;
        ensure(one == four, || format!("{args:?} differs between 1 and 4 threads"))?;
    }
    let pooled = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(library_outputs)
    };
    ensure(pooled(1) == pooled(4), || "library outputs differ between pools".into())?;
    Ok(format!("{} CLI runs and the Wills check byte-identical", runs.len()))
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { name: "interval target", limit: Some(Duration::from_secs(1)), run: interval_target },
        Criterion { name: "square target", limit: Some(Duration::from_secs(5)), run: square_target },
        Criterion { name: "simplex cross-check", limit: None, run: simplex_cross_check },
        Criterion { name: "harmonic divergence", limit: None, run: divergence },
        Criterion { name: "convergent contrast", limit: None, run: convergent_contrast },
        Criterion { name: "one-point sweep", limit: Some(Duration::from_secs(10)), run: one_point_sweep_square },
        Criterion { name: "inequality suite", limit: Some(Duration::from_secs(120)), run: inequality_suite_1000 },
        Criterion { name: "product and power laws", limit: Some(Duration::from_secs(30)), run: product_and_power_laws },
        Criterion { name: "Wills identity", limit: None, run: wills_identity },
        Criterion { name: "determinism across thread counts", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{status} criterion {:>2}: {} [{elapsed:.2?}] {detail}", i + 1, c.name);
        failed += usize::from(result.is_err());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
