//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Run alone with `cargo test -p pvlab --test acceptance`. Reference values
//! are computed here from closed forms, independently of the library.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use pvlab::harness::{
    estimate_holder, longest_decreasing_run, run_convergence, ConvergenceTable, ExperimentSpec, HolderSpec, RequestSpec,
};
use pvlab_core::combinatorics::{alpha_permanent, complete_bell, gaussian_even_moment, SymMatrix};
use pvlab_core::hilbert::Functional;
use pvlab_core::limits::{expected_quadratic_variation, increment_variance, k_r, tau_n, GaussianMeasureSampler, Weight};
use pvlab_core::rng::{derive_seed, path_rng};
use pvlab_core::simulator::{increment_norm_sq, stream_path};
use pvlab_core::{DomainSpec, RegimeParams, SimConfig};
use rand::Rng;

const ZETA2: f64 = PI * PI / 6.0;

fn zeta4() -> f64 {
    PI.powi(4) / 90.0
}

/// `4(x₁² + x₂)` with `x_ℓ = (ℓ-1)!/2 · ζ(2ℓ)`.
fn fourth_order_constant() -> f64 {
    let (x1, x2) = (ZETA2 / 2.0, zeta4() / 2.0);
    4.0 * (x1 * x1 + x2)
}

fn gamma_fn(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// `(γ - d/2 - r)/(2γ)` above the critical value, `1/2` at and below it.
fn alpha_of(r: f64) -> f64 {
    if r <= -0.5 {
        0.5
    } else {
        (0.5 - r) / 2.0
    }
}

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn record(&mut self, id: &str, passed: bool, detail: String) {
        println!("[{}] {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        self.lines.push((id.to_string(), passed, detail));
    }

    fn info(&self, id: &str, detail: String) {
        println!("[INFO] {id}: {detail}");
    }
}

fn params(r: f64) -> RegimeParams {
    RegimeParams::new(r, 1.0, DomainSpec::pi_interval()).unwrap()
}

fn experiment(name: &str, requests: Vec<RequestSpec>, truncation: usize, grid: Vec<f64>, horizon: f64, m: usize, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        sim: SimConfig::additive(params(requests[0].r), truncation, grid[0], horizon, 1.0, seed),
        requests,
        delta_grid: grid,
        replicates: m,
        output_dir: None,
        sigma_sq_integral: None,
        target_samples: 0,
    }
}

fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|e| 2f64.powi(-e)).collect()
}

fn print_table(table: &ConvergenceTable, label: &str) {
    for r in table.rows_for(label) {
        println!(
            "       {label:<16} Δ=2^{:<4} V(T)={:.5} ± {:.5}  target={:.5}  |err|={:.5}  sup={:.5}",
            r.delta.log2(),
            r.mean_v_at_t,
            r.std_error,
            r.theoretical_limit,
            r.abs_error,
            r.sup_error_over_grid
        );
    }
}

/// Criteria 1, 2, 3 and 10 share one set of paths: the norm index `r` only
/// enters the estimator.
fn thm_a(report: &mut Report) {
    let q2 = RequestSpec::power(-1.0, 2.0);
    let q4 = RequestSpec::power(-1.0, 4.0);
    let s4 = RequestSpec::power(0.0, 4.0);
    let labels = [q2.label.clone(), q4.label.clone(), s4.label.clone()];
    let spec = experiment("thmA", vec![q2, q4, s4], 4096, dyadic(8, 12), 1.0, 200, 20_240_601);
    let table = run_convergence(&spec).unwrap();
    for l in &labels {
        print_table(&table, l);
    }
    let finest = |label: &str| *table.rows_for(label).last().unwrap();

    let row = finest(&labels[0]);
    let rel = (row.mean_v_at_t - ZETA2).abs() / ZETA2;
    report.record(
        "1 quadratic variation, r=-1",
        rel < 0.025 && row.sup_error_over_grid < 0.06,
        format!("mean {:.5} vs ζ(2) {:.5} (rel {:.4} < 0.025); sup deviation {:.4} < 0.06", row.mean_v_at_t, ZETA2, rel, row.sup_error_over_grid),
    );

    let target = fourth_order_constant();
    let row = finest(&labels[1]);
    let rel = (row.mean_v_at_t - target).abs() / target;
    report.record(
        "2 fourth-order variation, r=-1",
        rel < 0.06,
        format!("mean {:.5} vs 4(x1²+x2) {:.5} (rel {:.4} < 0.06)", row.mean_v_at_t, target, rel),
    );

    let row = finest(&labels[2]);
    let rel = (row.mean_v_at_t - PI).abs() / PI;
    report.record(
        "3 exact-variation order 4, r=0",
        rel < 0.06,
        format!("mean {:.5} vs K_0² = π (rel {:.4} < 0.06)", row.mean_v_at_t, rel),
    );

    let runs: Vec<usize> = labels
        .iter()
        .map(|l| longest_decreasing_run(&table.rows_for(l).iter().map(|r| r.abs_error).collect::<Vec<_>>()))
        .collect();
    // exact expectation of the r=0 order-4 statistic, at the simulated truncation and with the mode tail added
    let expected = |tail: bool| -> Vec<String> {
        (8..=12)
            .map(|e| format!("{:+.4}", expected_fourth_variation_r0(2f64.powi(-e), 4096, tail) - PI))
            .collect()
    };
    report.info(
        "10 expected error of r=0:power4, levels 2^-8..2^-12",
        format!("K=4096: [{}]; all modes: [{}]", expected(false).join(", "), expected(true).join(", ")),
    );
    report.record(
        "10 monotone error decrease over ≥3 dyadic levels",
        runs.iter().all(|&n| n >= 3),
        format!("longest decreasing runs {runs:?} (levels 2^-8..2^-12)"),
    );
}

/// `E V(1)` for the fourth-order variation in `H_0` with `σ = γ = 1` on `(0, π)`.
/// Each increment is centred Gaussian with independent coordinates, so
/// `E‖X‖⁴ = (Σ v_k)² + 2 Σ v_k²`. With `tail`, modes beyond `truncation` are
/// added through the integral of their stationary increment variance.
fn expected_fourth_variation_r0(delta: f64, truncation: usize, tail: bool) -> f64 {
    let lambdas: Vec<f64> = (1..=truncation).map(|k| (k * k) as f64).collect();
    let a: Vec<f64> = lambdas.iter().map(|l| (1.0 - (-l * delta).exp()).powi(2) / (2.0 * l)).collect();
    let b: Vec<f64> = lambdas.iter().map(|l| (1.0 - (-2.0 * l * delta).exp()) / (2.0 * l)).collect();
    let rest = if tail {
        let kh = truncation as f64 + 0.5;
        (1.0 - (-kh * kh * delta).exp()) / kh + (PI * delta).sqrt() * statrs::function::erf::erfc(kh * delta.sqrt())
    } else {
        0.0
    };
    let steps = (1.0 / delta).round() as usize;
    let mut total = 0.0;
    for i in 0..steps {
        let t = i as f64 * delta;
        let (mut s1, mut s2) = (rest, 0.0);
        for ((l, a), b) in lambdas.iter().zip(&a).zip(&b) {
            let v = a * (1.0 - (-2.0 * l * t).exp()) + b;
            s1 += v;
            s2 += v * v;
        }
        total += s1 * s1 + 2.0 * s2;
    }
    // V = Δ Σ ‖X‖⁴ / τ⁴ and τ⁴ = Δ here
    total
}

fn critical(report: &mut Report) {
    // at the criterion-1 mesh the log normalization is still far from its limit
    let p = params(-0.5);
    let coarse = 2f64.powi(-12);
    let v = expected_quadratic_variation(&p, coarse, 4096, tau_n(&p, coarse).unwrap(), 4096).unwrap();
    report.info("4 critical regime", format!("exact E[V(1)] at Δ=2^-12, K=4096: {v:.4} (rel {:+.3} from 1/2)", v / 0.5 - 1.0));

    let delta = 2f64.powi(-28);
    let horizon = 2f64.powi(-14);
    let spec = experiment("critical", vec![RequestSpec::power(-0.5, 2.0)], 1 << 16, vec![delta], horizon, 2, 7);
    let table = run_convergence(&spec).unwrap();
    let row = &table.rows[0];
    let per_time = row.mean_v_at_t / horizon;
    let rel = (per_time - 0.5).abs() / 0.5;
    let exact = expected_quadratic_variation(&p, delta, 1 << 14, tau_n(&p, delta).unwrap(), 1 << 16).unwrap() / horizon;
    report.record(
        "4 critical regime, r=-1/2",
        rel < 0.10,
        format!(
            "Δ=2^-28, T=2^-14, K=2^16, M=2: V(T)/T {per_time:.4} ± {:.4} vs 1/2 (rel {rel:.4} < 0.10); exact mean {exact:.4}",
            row.std_error / horizon
        ),
    );
}

fn holder(report: &mut Report) {
    let mut all = true;
    let mut parts = Vec::new();
    for (r, truncation, m) in [(-1.0, 4096, 1000), (0.0, 1 << 16, 200), (0.25, 1 << 18, 200)] {
        let spec = HolderSpec {
            params: params(r),
            sigma: 1.0,
            truncation,
            t0: 0.5,
            delta_grid: dyadic(8, 14),
            replicates: m,
            seed: 99,
        };
        let est = estimate_holder(&spec).unwrap();
        let ok = (est.slope - alpha_of(r)).abs() <= 0.03;
        all &= ok;
        parts.push(format!("r={r}: {:.4} vs {:.4} (CI [{:.3}, {:.3}])", est.slope, alpha_of(r), est.ci_low, est.ci_high));
    }
    report.record("5 Hölder slopes ±0.03", all, parts.join("; "));
}

/// `Var(a_k(t) - a_k(t-Δ))` summed with weights `λ^r`, from the OU covariance
/// `Cov(a(t), a(s)) = e^{-λ(t-s)} Var a(s)`, `γ = 1`.
fn increment_variance_oracle(r: f64, delta: f64, t: f64, k: usize) -> f64 {
    (1..=k)
        .rev()
        .map(|j| {
            let l = (j * j) as f64;
            let v = |s: f64| (1.0 - (-2.0 * l * s).exp()) / (2.0 * l);
            l.powf(r) * (v(t) + v(t - delta) - 2.0 * (-l * delta).exp() * v(t - delta))
        })
        .sum()
}

fn increment_identity(report: &mut Report) {
    let mut rng = path_rng(606);
    let k = 256;
    let paths = 10_000;
    let mut ok = true;
    let mut worst_z: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for tuple in 0..10 {
        let r: f64 = rng.random_range(-1.5..0.45);
        let delta = 2f64.powi(-rng.random_range(4..=10));
        let i: usize = rng.random_range(1..=32);
        let p = params(r);
        let lib = increment_variance(&p, delta, i as f64 * delta, k).unwrap().value;
        let oracle = increment_variance_oracle(r, delta, i as f64 * delta, k);
        worst_oracle = worst_oracle.max((lib - oracle).abs() / oracle);
        let w: Vec<f64> = (1..=k).map(|j| ((j * j) as f64).powf(r)).collect();
        let cfg = SimConfig::additive(p, k, delta, (i.max(2)) as f64 * delta, 1.0, 0);
        let samples: Vec<f64> = (0..paths)
            .map(|j| {
                let mut c = cfg.clone();
                c.seed = derive_seed(tuple, j);
                let mut out = 0.0;
                stream_path(&c, |step, prev, cur| {
                    if step == i {
                        out = increment_norm_sq(prev, cur, &w);
                    }
                    Ok(())
                })
                .unwrap();
                out
            })
            .collect();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let se = (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt();
        let z = (mean - oracle).abs() / se;
        worst_z = worst_z.max(z);
        ok &= z < 3.0;
    }
    ok &= worst_oracle < 1e-10;
    let mut ratios = Vec::new();
    let delta = 2f64.powi(-14);
    for (r, kr) in [(-1.0, ZETA2), (0.0, PI.sqrt()), (0.25, gamma_fn(0.75) / 0.5)] {
        let p = params(r);
        let tau = tau_n(&p, delta).unwrap();
        let v = increment_variance(&p, delta, 0.5, 1 << 22).unwrap().value;
        let rel = v / (tau * tau) / kr - 1.0;
        ok &= rel.abs() < 0.01;
        ratios.push(format!("r={r}: {rel:+.4}"));
    }
    report.record(
        "6 increment-variance identity",
        ok,
        format!(
            "10 tuples, 10^4 paths: worst |z| {worst_z:.2} < 3, library vs oracle {worst_oracle:.1e}; \
             E/τ²/K_r - 1 at Δ=2^-14: {}",
            ratios.join(", ")
        ),
    );
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    permutations(p - 1)
        .into_iter()
        .flat_map(|s| {
            (0..p).map(move |pos| {
                let mut t = s.clone();
                t.insert(pos, p - 1);
                t
            })
        })
        .collect()
}

fn brute_permanent(a: &[Vec<f64>], alpha: f64) -> f64 {
    permutations(a.len())
        .iter()
        .map(|s| {
            let mut seen = vec![false; s.len()];
            let mut cycles = 0;
            for i in 0..s.len() {
                if !seen[i] {
                    cycles += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = s[j];
                    }
                }
            }
            alpha.powi(cycles) * (0..s.len()).map(|i| a[i][s[i]]).product::<f64>()
        })
        .sum()
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(a: &[Vec<f64>]) -> f64 {
    let mut m = a.to_vec();
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    det
}

fn wick(c: &[Vec<f64>], items: &mut Vec<usize>) -> f64 {
    if items.is_empty() {
        return 1.0;
    }
    let first = items.remove(0);
    let mut total = 0.0;
    for k in 0..items.len() {
        let partner = items.remove(k);
        total += c[first][partner] * wick(c, items);
        items.insert(k, partner);
    }
    items.insert(0, first);
    total
}

fn bell_partitions(x: &[f64], blocks: &mut Vec<usize>) -> f64 {
    if blocks.iter().sum::<usize>() == x.len() {
        return blocks.iter().map(|b| x[b - 1]).product();
    }
    // place the next element into an existing block or a new one
    let mut total = 0.0;
    for i in 0..blocks.len() {
        blocks[i] += 1;
        total += bell_partitions(x, blocks);
        blocks[i] -= 1;
    }
    blocks.push(1);
    total += bell_partitions(x, blocks);
    blocks.pop();
    total
}

fn combinatorics(report: &mut Report) {
    let mut rng = path_rng(7);
    let mut worst: [f64; 4] = [0.0; 4];
    for p in 1..=6 {
        for _ in 0..5 {
            let mut a = vec![vec![0.0; p]; p];
            for i in 0..p {
                for j in i..p {
                    let v: f64 = rng.random_range(-1.0..1.0);
                    a[i][j] = v;
                    a[j][i] = v;
                }
            }
            let sym = SymMatrix::new(p, a.concat()).unwrap();
            for alpha in [0.5, 1.0, 2.0, -0.7] {
                let b = brute_permanent(&a, alpha);
                worst[0] = worst[0].max((alpha_permanent(&sym, alpha).unwrap() - b).abs() / (1.0 + b.abs()));
            }
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let det = determinant(&a);
            worst[1] = worst[1].max((alpha_permanent(&sym, -1.0).unwrap() - sign * det).abs() / (1.0 + det.abs()));
            let c: Vec<Vec<f64>> =
                (0..p).map(|i| (0..p).map(|j| (0..p).map(|k| a[i][k] * a[j][k]).sum()).collect()).collect();
            let cs = SymMatrix::new(p, c.concat()).unwrap();
            let mut items: Vec<usize> = (0..p).flat_map(|i| [i, i]).collect();
            let w = wick(&c, &mut items);
            worst[2] = worst[2].max((gaussian_even_moment(&cs).unwrap() - w).abs() / (1.0 + w.abs()));
            let x: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
            let b = bell_partitions(&x, &mut Vec::new());
            worst[3] = worst[3].max((complete_bell(&x) - b).abs() / (1.0 + b.abs()));
        }
    }
    report.record(
        "7 combinatorics oracles, p ≤ 6",
        worst.iter().all(|w| *w <= 1e-10),
        format!(
            "permanent {:.1e}, det {:.1e}, Wick {:.1e}, Bell {:.1e} (≤ 1e-10)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    );
}

fn gaussian_measure(report: &mut Report) {
    let sampler = GaussianMeasureSampler::new(&params(-1.0), &Weight::Constant(1.0), 2000).unwrap();
    let sq: Functional = Arc::new(|h| h.hr_norm_sq());
    let quartic: Functional = Arc::new(|h| h.hr_norm_sq().powi(2));
    let a = sampler.estimate(&sq, 100_000, 1).unwrap();
    let b = sampler.estimate(&quartic, 100_000, 2).unwrap();
    let za = (a.mean - ZETA2).abs() / a.std_error;
    let zb = (b.mean - fourth_order_constant()).abs() / b.std_error;
    report.record(
        "8 Gaussian measure sampler",
        za < 3.0 && zb < 3.0,
        format!(
            "E‖H‖² {:.4} ± {:.4} vs ζ(2) (z {za:.2}); E‖H‖⁴ {:.4} ± {:.4} vs {:.4} (z {zb:.2})",
            a.mean,
            a.std_error,
            b.mean,
            b.std_error,
            fourth_order_constant()
        ),
    );
}

fn consistency(report: &mut Report) {
    let mut rng = path_rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r: f64 = rng.random_range(-0.4999..0.4999);
        let closed = gamma_fn(r + 0.5) / (2.0 * (0.5 - r));
        worst = worst.max((k_r(&params(r)).unwrap() - closed).abs() / closed.max(1.0));
    }
    report.record("9 K_r consistency", worst <= 1e-10, format!("20 random r, max rel error {worst:.1e} ≤ 1e-10"));
}

fn main() {
    let mut report = Report { lines: Vec::new() };
    let start = Instant::now();
    combinatorics(&mut report);
    consistency(&mut report);
    gaussian_measure(&mut report);
    increment_identity(&mut report);
    holder(&mut report);
    critical(&mut report);
    thm_a(&mut report);
    let failed: Vec<&str> = report.lines.iter().filter(|l| !l.1).map(|l| l.0.as_str()).collect();
    println!("acceptance: {} passed, {} failed in {:.0?}", report.lines.len() - failed.len(), failed.len(), start.elapsed());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
