//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! `cargo test -p qst-core --test acceptance` runs the default set;
//! append `-- --slow` for the full-scale 4-qubit and 7-qubit runs.

mod common;

use std::fmt::Display;
use std::time::Instant;

use common::*;
use qst_core::dataset::{generate_dataset, DatasetFile, SamplingSpec};
use qst_core::nn::{init_params, loss_cosine, Checkpoint, ModelParams};
use qst_core::pipeline::*;
use qst_core::quantum::*;
use rand::Rng;
use rand_distr::StandardNormal;

const SEEDS: [u64; 3] = [1, 2, 3];
const TEST_SEED_OFFSET: u64 = 1_000_000;
const TEST_RECORDS: usize = 1000;
const SIZES: [usize; 4] = [500, 1000, 5000, 10000];

#[derive(Default)]
struct Suite {
    passed: usize,
    failed: usize,
    skipped: usize,
}

impl Suite {
    fn check(&mut self, id: &str, title: &str, ok: bool, detail: impl Display) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} [{id}] {title}: {detail}");
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn info(&self, id: &str, title: &str, detail: impl Display) {
        println!("INFO [{id}] {title}: {detail}");
    }

    fn skip(&mut self, id: &str, title: &str, why: &str) {
        println!("SKIP [{id}] {title}: {why}");
        self.skipped += 1;
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.4}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let slow = args.iter().any(|a| a == "--slow");
    let mut suite = Suite::default();
    let start = Instant::now();

    oracle_closure(&mut suite);
    gradient_check(&mut suite);
    pauli_algebra(&mut suite);
    fidelity_identities(&mut suite);
    scale_invariance(&mut suite);
    determinism(&mut suite);
    measurement_oracle(&mut suite);
    table_two(&mut suite);
    if slow {
        full_scale(&mut suite);
        seven_qubit_chain(&mut suite);
    } else {
        suite.skip("4", "full-scale 4-qubit reproduction", "pass --slow to run");
        suite.skip("5", "7-qubit open chain", "pass --slow to run");
        suite.skip(
            "S1",
            "trained model cos angle to true h",
            "pass --slow to run",
        );
    }

    println!(
        "acceptance: {} passed, {} failed, {} skipped in {:.1?}",
        suite.passed,
        suite.failed,
        suite.skipped,
        start.elapsed()
    );
    if suite.failed > 0 {
        std::process::exit(1);
    }
}

fn full4() -> SamplingSpec {
    SamplingSpec::with_defaults(Topology::full(4).unwrap())
}

fn oracle_closure(suite: &mut Suite) {
    let data = generate_dataset(&full4(), 1000, 7, workers()).unwrap();
    let truth = coefficient_matrix(&data.records).unwrap();
    let opts = EvalOptions {
        workers: workers(),
        ..Default::default()
    };
    let report = evaluate_predictions(&data.records, truth.view(), &opts).unwrap();
    let worst = report
        .records
        .iter()
        .map(|r| {
            (1.0 - r.f1.unwrap_or(0.0))
                .abs()
                .max((1.0 - r.f2.unwrap_or(0.0)).abs())
        })
        .fold(0.0, f64::max);
    suite.check(
        "7",
        "oracle closure, 1000 records",
        report.failures == 0 && worst <= 1e-10,
        format!(
            "max |1 - f| = {worst:.2e}, failures {} (tol 1e-10)",
            report.failures
        ),
    );
}

fn gradient_check(suite: &mut Suite) {
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let mut sizes = vec![r.gen_range(2..=6)];
        for _ in 0..r.gen_range(1..=3) {
            sizes.push(r.gen_range(2..=8));
        }
        worst = worst.max(gradient_check_error(sizes, 500 + case));
    }
    suite.check(
        "8",
        "backprop vs central differences, 20 networks",
        worst <= 1e-5,
        format!("max relative error {worst:.2e} (tol 1e-5)"),
    );
}

fn pauli_algebra(suite: &mut Suite) {
    use PauliLabel::*;
    let mut worst_orth: f64 = 0.0;
    let mut worst_trip: f64 = 0.0;
    let mut r = rng(9);
    for n in 1..=4usize {
        let strings: Vec<Vec<PauliLabel>> = (1..4usize.pow(n as u32))
            .map(|mut k| {
                (0..n)
                    .map(|_| {
                        let l = [I, X, Y, Z][k % 4];
                        k /= 4;
                        l
                    })
                    .collect()
            })
            .collect();
        let ops: Vec<Operator> = strings
            .iter()
            .map(|s| build_basis_element(s).unwrap())
            .collect();
        for (a, oa) in ops.iter().enumerate() {
            for (b, ob) in ops.iter().enumerate() {
                let want = if a == b { (1usize << n) as f64 } else { 0.0 };
                worst_orth = worst_orth.max((oa.trace_product(ob) - c(want, 0.0)).norm());
            }
        }
        let mut topologies = vec![Topology::full(n).unwrap()];
        if n >= 2 {
            topologies.push(Topology::chain(n).unwrap());
        }
        if n >= 3 {
            topologies.push(Topology::ti_ring(n).unwrap());
        }
        for t in topologies {
            for _ in 0..20 {
                let v: Vec<f64> = (0..t.coeff_dim()).map(|_| r.gen_range(-2.0..2.0)).collect();
                let h = CoeffVector::new(t.clone(), v).unwrap();
                let back = project_to_coeffs(&build_hamiltonian(&h), &t).unwrap();
                for (a, b) in back.values().iter().zip(h.values()) {
                    worst_trip = worst_trip.max((a - b).abs());
                }
            }
        }
    }
    suite.check(
        "9",
        "Pauli orthogonality and project/build round trip, n <= 4",
        worst_orth <= 1e-12 && worst_trip <= 1e-12,
        format!("orthogonality {worst_orth:.2e}, round trip {worst_trip:.2e} (tol 1e-12)"),
    );
}

fn fidelity_identities(suite: &mut Suite) {
    let mut r = rng(10);
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let n = 1 + k % 4;
        let a = random_state(&mut r, n).density_matrix();
        let b = random_state(&mut r, n).density_matrix();
        let f1 = fidelity_f1(a.as_operator(), b.as_operator()).unwrap();
        let f2 = fidelity_f2(&a, &b).unwrap();
        worst = worst.max((f1 - f2 * f2).abs());
    }
    let zero = PureState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0)])
        .unwrap()
        .density_matrix();
    let mixed = DensityMatrix::maximally_mixed(2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e1 = (fidelity_f1(zero.as_operator(), mixed.as_operator()).unwrap() - s).abs();
    let e2 = (fidelity_f2(&zero, &mixed).unwrap() - s).abs();
    suite.check(
        "10",
        "fidelity identities",
        worst <= 1e-10 && e1 <= 1e-12 && e2 <= 1e-12,
        format!("max |f1 - f2^2| {worst:.2e} (tol 1e-10); |0><0| vs I/2 errors {e1:.1e}, {e2:.1e} (tol 1e-12)"),
    );
}

fn scale_invariance(suite: &mut Suite) {
    let t = Topology::full(4).unwrap();
    let mut r = rng(11);
    let mut worst_state: f64 = 0.0;
    let mut worst_loss: f64 = 0.0;
    let mut loss_exact = 0;
    let mut loss_cases = 0;
    let mut tested = 0;
    while tested < 20 {
        let v: Vec<f64> = (0..t.coeff_dim())
            .map(|_| r.sample(StandardNormal))
            .collect();
        let target: Vec<f64> = (0..t.coeff_dim())
            .map(|_| r.sample(StandardNormal))
            .collect();
        let h = CoeffVector::new(t.clone(), v.clone()).unwrap();
        let Ok(base) = ground_state(&build_hamiltonian(&h), DEFAULT_GAP_TOL) else {
            continue;
        };
        let (base_loss, _) = loss_cosine(&v, &target).unwrap();
        for scale in [0.1, 1.0, 10.0] {
            let psi = ground_state(
                &build_hamiltonian(&h.scaled(scale)),
                DEFAULT_GAP_TOL * scale,
            )
            .unwrap();
            let f2 = fidelity_f2(&base.density_matrix(), &psi.density_matrix()).unwrap();
            worst_state = worst_state.max((1.0 - f2).abs());
            let scaled: Vec<f64> = v.iter().map(|x| x * scale).collect();
            let (loss, _) = loss_cosine(&scaled, &target).unwrap();
            worst_loss = worst_loss.max((loss - base_loss).abs());
            loss_cases += 1;
            if loss == base_loss {
                loss_exact += 1;
            }
        }
        tested += 1;
    }
    suite.check(
        "11a",
        "ground state invariant under H -> cH, c in {0.1, 1, 10}",
        worst_state <= 1e-10,
        format!("max |1 - f2| {worst_state:.2e} (tol 1e-10)"),
    );
    // c*y is rounded before the loss sees it, so bit equality is not
    // guaranteed for c = 0.1 or 10; the deviation is reported alongside.
    suite.check(
        "11b",
        "loss_cosine(c*y, t) == loss_cosine(y, t) exactly, c in {0.1, 1, 10}",
        loss_exact == loss_cases,
        format!("bit-equal in {loss_exact}/{loss_cases} cases, max |change| {worst_loss:.1e}"),
    );
}

fn dataset_bytes(file: &DatasetFile) -> Vec<u8> {
    let mut buf = Vec::new();
    file.write_to(&mut buf).unwrap();
    buf
}

fn determinism(suite: &mut Suite) {
    let one = generate_dataset(&full4(), 1000, 12, 1).unwrap();
    let four = generate_dataset(&full4(), 1000, 12, 4).unwrap();
    let same_data = dataset_bytes(&one) == dataset_bytes(&four);

    let layers = default_layer_spec(one.topology());
    let cfg = qst_core::nn::TrainConfig::new(layers, 2, 12);
    let ckpt = |p: ModelParams| {
        Checkpoint::new(p, 12, serde_json::Value::Null)
            .to_bytes()
            .unwrap()
    };
    let a = ckpt(train_on_records(&one.records, &cfg).unwrap().params);
    let b = ckpt(train_on_records(&one.records, &cfg).unwrap().params);
    suite.check(
        "12",
        "determinism",
        same_data && a == b,
        format!("datasets workers 1 vs 4 identical: {same_data}; repeated training checkpoints identical: {}", a == b),
    );
}

fn measurement_oracle(suite: &mut Suite) {
    let t = Topology::full(4).unwrap();
    let mut r = rng(13);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = random_state(&mut r, 4);
        let m = measure_local(&psi, &t).unwrap();
        let rho = psi.density_matrix();
        for (term, got) in t.terms().iter().zip(m.values()) {
            let want = match term.label {
                TermLabel::Single { qubit, pauli } => {
                    let rdm = partial_trace(&rho, (qubit, (qubit + 1) % 4)).unwrap();
                    (to_dmatrix(rdm.as_operator())
                        * pauli_2x2(pauli).kronecker(&pauli_2x2(PauliLabel::I)))
                    .trace()
                    .re
                }
                TermLabel::Pair {
                    edge,
                    first,
                    second,
                } => {
                    let rdm = partial_trace(&rho, edge).unwrap();
                    (to_dmatrix(rdm.as_operator()) * pauli_2x2(first).kronecker(&pauli_2x2(second)))
                        .trace()
                        .re
                }
            };
            worst = worst.max((got - want).abs());
        }
    }
    suite.check(
        "13",
        "measure_local vs partial-trace route, 100 random 4-qubit states",
        worst <= 1e-10,
        format!("max deviation {worst:.2e} (tol 1e-10)"),
    );
}

struct SeedRun {
    f1: Vec<f64>,
    f2: Vec<f64>,
    std_f1: f64,
    std_f2: f64,
    cos: f64,
    untrained_f1: f64,
    noise: (f64, f64, f64, f64),
    non_divergence: f64,
    consistent: bool,
}

fn run_table_seed(seed: u64) -> SeedRun {
    let spec = full4();
    let w = workers();
    let base = generate_dataset(&spec, *SIZES.last().unwrap(), seed, w).unwrap();
    let test = generate_dataset(&spec, TEST_RECORDS, TEST_SEED_OFFSET + seed, w).unwrap();
    let layers = default_layer_spec(&spec.topology);
    let grid = SweepGrid {
        sizes: SIZES.to_vec(),
        epochs: vec![100],
        batch_sizes: vec![512],
        layer_spec: layers.clone(),
        lr: 1e-3,
        seed,
        validation_fraction: 0.2,
    };
    let opts = EvalOptions {
        workers: w,
        ..Default::default()
    };
    let mut largest: Option<ModelParams> = None;
    let cells = run_sweep(
        &grid,
        &base.records,
        &test.records,
        &opts,
        |cell, params| {
            eprintln!(
                "  seed {seed} size {:>5}: {}",
                cell.size,
                cell.report.summary_line()
            );
            if cell.size == *SIZES.last().unwrap() {
                largest = Some(params.clone());
            }
        },
    )
    .unwrap();
    let top = cells.last().unwrap();
    let f1s = top.report.f1.unwrap();
    let f2s = top.report.f2.unwrap();

    let untrained = evaluate_model(&init_params(&layers, seed), &test.records, &opts).unwrap();
    let noise = noise_robustness_eval(
        largest.as_ref().unwrap(),
        &test.records,
        &[0.0, 0.05],
        seed,
        &opts,
    )
    .unwrap();

    // largest rise of training loss after any epoch E >= 20
    let losses: Vec<f64> = top.history.iter().map(|h| h.train_loss).collect();
    let non_divergence = (19..losses.len())
        .map(|e| losses[e..].iter().fold(f64::NEG_INFINITY, |m, &l| m.max(l)) - losses[e])
        .fold(0.0, f64::max);

    let consistent = cells.iter().all(|c| {
        let again = EvalReport::from_records(c.report.records.clone());
        let ordered = [c.report.f1, c.report.f2]
            .iter()
            .flatten()
            .all(|s| s.min <= s.mean && s.mean <= s.max);
        again == c.report && ordered
    });

    SeedRun {
        f1: cells.iter().map(|c| c.report.mean_f1()).collect(),
        f2: cells.iter().map(|c| c.report.mean_f2()).collect(),
        std_f1: f1s.std,
        std_f2: f2s.std,
        cos: top.report.mean_cos_angle,
        untrained_f1: untrained.mean_f1(),
        noise: (
            noise[0].report.mean_f1(),
            noise[1].report.mean_f1(),
            noise[0].report.mean_f2(),
            noise[1].report.mean_f2(),
        ),
        non_divergence,
        consistent,
    }
}

fn table_two(suite: &mut Suite) {
    let start = Instant::now();
    let runs: Vec<SeedRun> = SEEDS.iter().map(|&s| run_table_seed(s)).collect();
    eprintln!("  training-size runs took {:.1?}", start.elapsed());
    let at = |size_idx: usize, f: fn(&SeedRun) -> &Vec<f64>| -> (f64, Vec<f64>) {
        let per: Vec<f64> = runs.iter().map(|r| f(r)[size_idx]).collect();
        (mean(&per), per)
    };

    let (f1, f1_per) = at(2, |r| &r.f1);
    let (f2, f2_per) = at(2, |r| &r.f2);
    suite.check(
        "1",
        "5,000 records, epoch 100, batch 512",
        (f1 - 0.897).abs() <= 0.04 && (f2 - 0.947).abs() <= 0.03,
        format!(
            "mean f1 {f1:.4} (0.897 +/- 0.04) [{}], mean f2 {f2:.4} (0.947 +/- 0.03) [{}]",
            fmt_list(&f1_per),
            fmt_list(&f2_per)
        ),
    );

    let (f1, f1_per) = at(3, |r| &r.f1);
    let (f2, f2_per) = at(3, |r| &r.f2);
    suite.check(
        "2",
        "10,000 records, epoch 100, batch 512",
        (f1 - 0.933).abs() <= 0.03 && (f2 - 0.966).abs() <= 0.02,
        format!(
            "mean f1 {f1:.4} (0.933 +/- 0.03) [{}], mean f2 {f2:.4} (0.966 +/- 0.02) [{}]",
            fmt_list(&f1_per),
            fmt_list(&f2_per)
        ),
    );

    let curve: Vec<f64> = (0..SIZES.len()).map(|i| at(i, |r| &r.f1).0).collect();
    suite.check(
        "3",
        "mean f1 strictly increases over sizes 500, 1000, 5000, 10000",
        curve.windows(2).all(|w| w[1] > w[0]),
        format!("[{}]", fmt_list(&curve)),
    );

    let std1 = mean(&runs.iter().map(|r| r.std_f1).collect::<Vec<_>>());
    let std2 = mean(&runs.iter().map(|r| r.std_f2).collect::<Vec<_>>());
    suite.check(
        "6",
        "std(f2) < std(f1) at 10,000 records",
        std2 < std1,
        format!("std f2 {std2:.3e} vs std f1 {std1:.3e}"),
    );

    let cos = mean(&runs.iter().map(|r| r.cos).collect::<Vec<_>>());
    suite.info(
        "S1",
        "cos angle to true h at 10,000 records",
        format!("mean cos {cos:.4}; the > 0.9 check runs at full scale with --slow"),
    );
    let untrained = mean(&runs.iter().map(|r| r.untrained_f1).collect::<Vec<_>>());
    suite.check(
        "S2",
        "untrained baseline is clearly worse",
        untrained < 0.9 && untrained < curve[3] - 0.1,
        format!(
            "untrained mean f1 {untrained:.4} vs trained {:.4}",
            curve[3]
        ),
    );
    let rise = runs.iter().map(|r| r.non_divergence).fold(0.0, f64::max);
    suite.check(
        "S3",
        "training loss does not rise after epoch 20",
        rise <= 1e-3,
        format!("max rise {rise:.2e} (tol 1e-3)"),
    );
    let n0 = mean(&runs.iter().map(|r| r.noise.0).collect::<Vec<_>>());
    let n1 = mean(&runs.iter().map(|r| r.noise.1).collect::<Vec<_>>());
    let m0 = mean(&runs.iter().map(|r| r.noise.2).collect::<Vec<_>>());
    let m1 = mean(&runs.iter().map(|r| r.noise.3).collect::<Vec<_>>());
    suite.check(
        "S4",
        "measurement noise sigma 0.05 does not raise fidelity",
        n1 <= n0 + 1e-9 && m1 <= m0 + 1e-9,
        format!("f1 {n0:.4} -> {n1:.4}, f2 {m0:.4} -> {m1:.4}"),
    );
    suite.check(
        "S5",
        "report aggregates recomputable from per-record values",
        runs.iter().all(|r| r.consistent),
        "min <= mean <= max and recomputation identical",
    );
}

fn slow_run(topology: Topology, n_base: usize, epochs: usize, seed: u64) -> EvalReport {
    let spec = SamplingSpec::with_defaults(topology);
    let w = workers();
    let base = generate_dataset(&spec, n_base, seed, w).unwrap();
    let test = generate_dataset(&spec, TEST_RECORDS, TEST_SEED_OFFSET + seed, w).unwrap();
    let mut cfg = qst_core::nn::TrainConfig::new(default_layer_spec(&spec.topology), epochs, seed);
    cfg.batch_size = 512;
    let trained = train_on_records(&base.records, &cfg).unwrap();
    let opts = EvalOptions {
        workers: w,
        ..Default::default()
    };
    let report = evaluate_model(&trained.params, &test.records, &opts).unwrap();
    eprintln!("  seed {seed}: {}", report.summary_line());
    report
}

fn full_scale(suite: &mut Suite) {
    let reports: Vec<EvalReport> = SEEDS
        .iter()
        .map(|&s| slow_run(Topology::full(4).unwrap(), 120_000, 300, s))
        .collect();
    let f1 = mean(&reports.iter().map(|r| r.mean_f1()).collect::<Vec<_>>());
    let f2 = mean(&reports.iter().map(|r| r.mean_f2()).collect::<Vec<_>>());
    suite.check(
        "4",
        "120,000 records, epoch 300, batch 512",
        f1 >= 0.955 && f2 >= 0.975,
        format!("mean f1 {f1:.4} (>= 0.955), mean f2 {f2:.4} (>= 0.975)"),
    );
    let cos = mean(&reports.iter().map(|r| r.mean_cos_angle).collect::<Vec<_>>());
    suite.check(
        "S1",
        "trained model cos angle to true h, full scale",
        cos > 0.9,
        format!("mean cos {cos:.4} (> 0.9)"),
    );
}

fn seven_qubit_chain(suite: &mut Suite) {
    let reports: Vec<EvalReport> = SEEDS
        .iter()
        .map(|&s| slow_run(Topology::chain(7).unwrap(), 50_000, 100, s))
        .collect();
    let f1 = mean(&reports.iter().map(|r| r.mean_f1()).collect::<Vec<_>>());
    suite.check(
        "5",
        "7-qubit open chain, 50,000 records, epoch 100",
        f1 >= 0.90,
        format!("mean f1 {f1:.4} (>= 0.90)"),
    );
}
