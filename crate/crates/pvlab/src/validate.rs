//! Self-check suite behind the `validate` subcommand: library routines against
//! brute-force reference implementations, and the limit constants against a
//! table of known values.

use pvlab_core::combinatorics::{alpha_permanent, complete_bell, gaussian_even_moment, SymMatrix};
use pvlab_core::limits::{holder_exponent, k_r, limit_constant_even_power};
use pvlab_core::rng::path_rng;
use pvlab_core::spectrum::spectral_zeta;
use pvlab_core::{DomainSpec, RegimeParams};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, worst: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: worst <= tolerance, detail: format!("max error {worst:.3e} (tolerance {tolerance:.0e})") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsTable {
    pub entries: Vec<ConstantsEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsEntry {
    pub r: f64,
    #[serde(default = "unit_gamma")]
    pub gamma: f64,
    #[serde(default = "DomainSpec::pi_interval")]
    pub domain: DomainSpec,
    pub k_r: f64,
    /// `(p, K(r, p))` for the order `2p`.
    #[serde(default)]
    pub constants: Vec<(u32, f64)>,
    #[serde(default)]
    pub holder_alpha: Option<f64>,
    pub tolerance: f64,
}

fn unit_gamma() -> f64 {
    1.0
}

impl ConstantsTable {
    /// Known values on `(0, π)` with `γ = 1`.
    pub fn builtin() -> Self {
        let pi = std::f64::consts::PI;
        let z2 = pi * pi / 6.0;
        let z4 = pi.powi(4) / 90.0;
        let entry = |r: f64, k: f64, constants: Vec<(u32, f64)>, alpha: f64| ConstantsEntry {
            r,
            gamma: 1.0,
            domain: DomainSpec::pi_interval(),
            k_r: k,
            constants,
            holder_alpha: Some(alpha),
            tolerance: 1e-8,
        };
        Self {
            entries: vec![
                entry(-1.0, z2, vec![(1, z2), (2, z2 * z2 + 2.0 * z4)], 0.5),
                entry(-0.5, 0.5, vec![(1, 0.5), (2, 0.25), (3, 0.125)], 0.5),
                entry(0.0, pi.sqrt(), vec![(1, pi.sqrt()), (2, pi)], 0.25),
            ],
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read constants table {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }
}

/// Runs every check; the suite passes when all results pass.
pub fn run_suite(table: &ConstantsTable) -> Vec<CheckResult> {
    vec![
        check_permanent_enumeration(),
        check_determinant(),
        check_wick(),
        check_bell(),
        check_zeta(),
        check_super_constant(),
        check_table(table),
    ]
}

fn random_symmetric(rng: &mut impl Rng, p: usize) -> SymMatrix {
    let mut e = vec![0.0; p * p];
    for i in 0..p {
        for j in i..p {
            let v = rng.random_range(-1.5..1.5);
            e[i * p + j] = v;
            e[j * p + i] = v;
        }
    }
    SymMatrix::new(p, e).expect("symmetric by construction")
}

fn random_covariance(rng: &mut impl Rng, p: usize) -> SymMatrix {
    let a = random_symmetric(rng, p).to_dmatrix();
    let c = &a * a.transpose();
    SymMatrix::new(p, c.iter().copied().collect()).expect("Gram matrices are symmetric")
}

/// All permutations of `0..p` by recursive insertion.
fn permutations(p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(p - 1) {
        for pos in 0..=perm.len() {
            let mut next = perm.clone();
            next.insert(pos, p - 1);
            out.push(next);
        }
    }
    out
}

fn cycles(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut count = 0;
    for start in 0..perm.len() {
        if !seen[start] {
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    count
}

fn permanent_by_enumeration(a: &SymMatrix, alpha: f64) -> f64 {
    permutations(a.size())
        .iter()
        .map(|s| alpha.powi(cycles(s)) * s.iter().enumerate().map(|(i, &j)| a.get(i, j)).product::<f64>())
        .sum()
}

fn check_permanent_enumeration() -> CheckResult {
    let mut rng = path_rng(1);
    let mut worst: f64 = 0.0;
    for p in 1..=6 {
        for _ in 0..4 {
            let a = random_symmetric(&mut rng, p);
            for alpha in [-1.0, 0.5, 1.0, 2.3] {
                let x = alpha_permanent(&a, alpha).unwrap_or(f64::NAN);
                let y = permanent_by_enumeration(&a, alpha);
                worst = worst.max((x - y).abs() / (1.0 + y.abs()));
            }
        }
    }
    CheckResult::new("alpha-permanent vs permutation enumeration", nan_to_inf(worst), 1e-10)
}

fn check_determinant() -> CheckResult {
    let mut rng = path_rng(2);
    let mut worst: f64 = 0.0;
    for p in 1..=6 {
        for _ in 0..4 {
            let a = random_symmetric(&mut rng, p);
            let det = a.to_dmatrix().determinant();
            let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
            let per = alpha_permanent(&a, -1.0).unwrap_or(f64::NAN);
            worst = worst.max((per - sign * det).abs() / (1.0 + det.abs()));
        }
    }
    CheckResult::new("(-1)-permanent vs signed determinant", nan_to_inf(worst), 1e-10)
}

/// `E[∏ X_i²]` as the sum over perfect matchings of the index multiset `{1,1,…,p,p}`.
fn wick_even_moment(c: &SymMatrix) -> f64 {
    fn pair(items: &mut Vec<usize>, c: &SymMatrix) -> f64 {
        if items.is_empty() {
            return 1.0;
        }
        let first = items.remove(0);
        let mut total = 0.0;
        for k in 0..items.len() {
            let partner = items.remove(k);
            total += c.get(first, partner) * pair(items, c);
            items.insert(k, partner);
        }
        items.insert(0, first);
        total
    }
    let mut items: Vec<usize> = (0..c.size()).flat_map(|i| [i, i]).collect();
    pair(&mut items, c)
}

fn check_wick() -> CheckResult {
    let mut rng = path_rng(3);
    let mut worst: f64 = 0.0;
    for p in 1..=6 {
        for _ in 0..3 {
            let c = random_covariance(&mut rng, p);
            let x = gaussian_even_moment(&c).unwrap_or(f64::NAN);
            let y = wick_even_moment(&c);
            worst = worst.max((x - y).abs() / (1.0 + y.abs()));
        }
    }
    CheckResult::new("Gaussian even moment vs Wick pairings", nan_to_inf(worst), 1e-10)
}

/// `B_p(x) = ∑_{partitions π of {1..p}} ∏_{blocks b} x_{|b|}`, by restricted growth strings.
fn bell_by_partitions(x: &[f64]) -> f64 {
    fn walk(labels: &mut Vec<usize>, p: usize, x: &[f64]) -> f64 {
        if labels.len() == p {
            let blocks = labels.iter().max().map_or(0, |m| m + 1);
            let mut sizes = vec![0usize; blocks];
            for &l in labels.iter() {
                sizes[l] += 1;
            }
            return sizes.iter().map(|s| x[s - 1]).product();
        }
        let next = labels.iter().max().map_or(0, |m| m + 1);
        let mut total = 0.0;
        for l in 0..=next {
            labels.push(l);
            total += walk(labels, p, x);
            labels.pop();
        }
        total
    }
    walk(&mut Vec::new(), x.len(), x)
}

fn check_bell() -> CheckResult {
    let mut rng = path_rng(4);
    let mut worst: f64 = 0.0;
    for p in 1..=6 {
        for _ in 0..4 {
            let x: Vec<f64> = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y = bell_by_partitions(&x);
            worst = worst.max((complete_bell(&x) - y).abs() / (1.0 + y.abs()));
        }
    }
    CheckResult::new("Bell recurrence vs set-partition enumeration", worst, 1e-10)
}

/// Riemann zeta by Euler–Maclaurin with six Bernoulli corrections.
fn riemann_zeta(s: f64) -> f64 {
    const B: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];
    let n: f64 = 40.0;
    let mut sum: f64 = (1..40).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let (mut rising, mut fact) = (s, 2.0);
    for (j, b) in B.iter().enumerate() {
        let m = (2 * j + 2) as f64;
        sum += b / fact * rising * n.powf(-s - m + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
    }
    sum
}

fn check_zeta() -> CheckResult {
    let d = DomainSpec::pi_interval();
    let mut worst: f64 = 0.0;
    for z in [1.0, 1.25, 1.5, 2.0, 3.0] {
        let v = spectral_zeta(&d, z, 20_000).map(|v| v.value).unwrap_or(f64::NAN);
        worst = worst.max((v - riemann_zeta(2.0 * z)).abs());
    }
    CheckResult::new("spectral zeta on (0, π) vs Euler–Maclaurin", nan_to_inf(worst), 1e-10)
}

fn check_super_constant() -> CheckResult {
    let mut rng = path_rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r: f64 = rng.random_range(-0.499..0.499);
        let closed = statrs::function::gamma::gamma(r + 0.5) / (2.0 * (0.5 - r));
        let k = RegimeParams::new(r, 1.0, DomainSpec::pi_interval()).and_then(|p| k_r(&p)).unwrap_or(f64::NAN);
        worst = worst.max((k - closed).abs() / closed.max(1.0));
    }
    CheckResult::new("K_r closed form vs Γ(r+1/2)/(2(1/2-r))", nan_to_inf(worst), 1e-10)
}

fn check_table(table: &ConstantsTable) -> CheckResult {
    let mut failures = Vec::new();
    for e in &table.entries {
        let params = match RegimeParams::new(e.r, e.gamma, e.domain.clone()) {
            Ok(p) => p,
            Err(err) => {
                failures.push(format!("r = {}: {err}", e.r));
                continue;
            }
        };
        let mut compare = |what: String, got: pvlab_core::Result<f64>, want: f64| match got {
            Ok(v) if (v - want).abs() <= e.tolerance * want.abs().max(1.0) => {}
            Ok(v) => failures.push(format!("r = {}: {what} = {v} but table says {want}", e.r)),
            Err(err) => failures.push(format!("r = {}: {what}: {err}", e.r)),
        };
        compare("K_r".into(), k_r(&params), e.k_r);
        for &(p, v) in &e.constants {
            compare(format!("K(r, {p})"), limit_constant_even_power(&params, p, 1.0), v);
        }
        if let Some(a) = e.holder_alpha {
            compare("alpha".into(), holder_exponent(&params), a);
        }
    }
    CheckResult {
        name: "limit constants vs table".into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} entries match", table.entries.len())
        } else {
            failures.join("; ")
        },
    }
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}
