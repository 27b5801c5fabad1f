//! End-to-end acceptance suite. Every criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.
//!
//! Set `QCFEM_ACCEPTANCE_EXTENDED=1` to include the h = 1/32 row in the
//! layer-example comparisons (several minutes).

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcfem_core::analysis::convergence::{convergence_study, interpolation_study, ConvergenceRecord, StudyConfig};
use qcfem_core::analysis::manufactured::{manufactured, ExampleKind, ManufacturedSolution};
use qcfem_core::analysis::verify::{
    verify_commuting, verify_complex, verify_jump_property, verify_poincare_identity, verify_unisolvence,
};
use qcfem_core::assembly_solve::ProblemParams;
use qcfem_core::exact;
use qcfem_core::mesh::Mesh;
use qcfem_core::polynomials::{rational_to_f64, Poly3, PolyVec3};
use qcfem_core::reference_element::shared_dual_basis;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn extended() -> bool {
    std::env::var("QCFEM_ACCEPTANCE_EXTENDED").is_ok_and(|v| !v.is_empty() && v != "0")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn order(e0: f64, e1: f64) -> f64 {
    (e0 / e1).log2()
}

/// Least-squares slope of `log e` against `log h`.
fn fitted_order(h: &[f64], e: &[f64]) -> f64 {
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn study(example: ExampleKind, r: usize, eps: f64, levels: (u32, u32)) -> Vec<ConvergenceRecord> {
    let config = StudyConfig {
        example,
        r,
        params: ProblemParams::new(eps, 1.0, 1.0).unwrap(),
        levels,
        ..StudyConfig::default()
    };
    convergence_study(&config).unwrap()
}

// ---------------------------------------------------------------- 1

fn unisolvence() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for r in [1, 2] {
        let b = shared_dual_basis(r).unwrap();
        let gc = exact::to_f64(&exact::multiply(&b.dof_matrix, &b.dual));
        let mut dev = 0.0f64;
        for (i, row) in gc.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                dev = dev.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        let rep = verify_unisolvence(r).unwrap();
        ok &= rep.rank == rep.dimension && dev <= 1e-12 && rep.duality_error <= 1e-12;
        notes.push(format!(
            "r={r}: rank {}/{}, |GC-I| {dev:.1e}, quadrature duality {:.1e}",
            rep.rank, rep.dimension, rep.duality_error
        ));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 2

type Terms<'a> = [&'a [([u32; 3], i64, i64)]; 3];

fn field(t: Terms<'_>) -> PolyVec3 {
    PolyVec3::new(Poly3::from_terms(t[0]), Poly3::from_terms(t[1]), Poly3::from_terms(t[2]))
}

fn coefficient_map(v: &PolyVec3) -> BTreeMap<(usize, [u32; 3]), f64> {
    v.coefficients().into_iter().map(|(k, e, c)| ((k, e), rational_to_f64(&c))).collect()
}

/// `min_s max |a − s b|` over `s = ±1`.
fn signed_distance(a: &PolyVec3, b: &PolyVec3) -> f64 {
    let (ma, mb) = (coefficient_map(a), coefficient_map(b));
    let keys: std::collections::BTreeSet<_> = ma.keys().chain(mb.keys()).collect();
    [1.0, -1.0]
        .iter()
        .map(|s| {
            keys.iter()
                .map(|k| (ma.get(k).unwrap_or(&0.0) - s * mb.get(k).unwrap_or(&0.0)).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn published_dual_basis() -> Verdict {
    let n6e = field([
        &[([2, 1, 0], 3, 64), ([0, 3, 0], 3, 64), ([0, 1, 0], -1, 16)],
        &[
            ([1, 0, 0], 3, 16),
            ([1, 2, 0], -3, 64),
            ([1, 0, 1], -1, 8),
            ([3, 0, 0], -3, 64),
            ([0, 2, 1], 3, 64),
            ([0, 0, 3], 3, 64),
            ([0, 0, 1], -3, 16),
            ([0, 0, 0], 1, 8),
        ],
        &[([0, 1, 0], 1, 16), ([0, 1, 2], -3, 64), ([0, 3, 0], -3, 64)],
    ]);
    let n21f = field([
        &[([2, 0, 1], 3, 64), ([1, 0, 1], 1, 24), ([0, 0, 1], -1, 64)],
        &[],
        &[([1, 0, 0], 3, 64), ([2, 0, 0], -1, 24), ([3, 0, 0], -3, 64), ([0, 0, 0], 1, 24)],
    ]);
    let n22f = field([
        &[([0, 1, 0], 1, 64), ([1, 1, 0], -1, 24), ([2, 1, 0], -3, 64)],
        &[([3, 0, 0], 3, 64), ([2, 0, 0], 1, 24), ([1, 0, 0], -3, 64), ([0, 0, 0], -1, 24)],
        &[],
    ]);
    let b = shared_dual_basis(1).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, target) in [("N6e", &n6e), ("N21f", &n21f), ("N22f", &n22f)] {
        let (j, d) = b
            .functions
            .iter()
            .enumerate()
            .map(|(j, f)| (j, signed_distance(f, target)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        ok &= d <= 1e-12;
        notes.push(format!("{name} ~ basis[{j}] ({:?}) diff {d:.1e}", b.dofs[j].kind));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 3

fn poincare_identities() -> Verdict {
    let rep = verify_poincare_identity(50, 2024);
    verdict(
        rep.passed() && rep.fields == 68,
        format!("{} fields (18 generators + 50 random cubic), {} failures", rep.fields, rep.failures),
    )
}

// ---------------------------------------------------------------- 4

fn complex_exactness() -> Verdict {
    let mut ok = true;
    let mut failed = Vec::new();
    let mut sample = String::new();
    for n in [2, 3] {
        let mesh = Arc::new(Mesh::unit_cube(n).unwrap());
        for r in [1, 2] {
            for bc in [false, true] {
                let rep = verify_complex(mesh.clone(), r, bc).unwrap();
                if !rep.passed() {
                    ok = false;
                    for c in rep.checks.iter().filter(|c| !c.passed) {
                        failed.push(format!("n={n} r={r} bc={bc}: {} {}", c.name, c.detail));
                    }
                }
                if n == 2 && r == 1 && bc {
                    ok &= rep.dims == [1, 30, 36, 7] && rep.alternating_sum == 0;
                    sample = format!("2^3 r=1 with BC dims {:?}, alternating sum {}", rep.dims, rep.alternating_sum);
                }
            }
        }
    }
    let detail = if failed.is_empty() { format!("8 complexes exact; {sample}") } else { failed.join("; ") };
    verdict(ok, detail)
}

// ---------------------------------------------------------------- 5

fn commuting() -> Verdict {
    let mesh = Arc::new(Mesh::unit_cube(2).unwrap());
    let mut ok = true;
    let mut notes = Vec::new();
    for r in [1, 2] {
        let rep = verify_commuting(mesh.clone(), r, 20, 99 + r as u64).unwrap();
        ok &= rep.samples == 20 && rep.max_residual() <= 1e-10;
        notes.push(format!("r={r}: max residual {:.1e} over {} fields", rep.max_residual(), rep.samples));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 6

fn jump_property() -> Verdict {
    let mesh = Mesh::unit_cube(2).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for r in [1, 2] {
        let rep = verify_jump_property(r, &mesh).unwrap();
        ok &= rep.residual <= 1e-12;
        notes.push(format!("r={r}: {:.1e}", rep.residual));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 7, 8

// Published reference values for the layer example at h = 1/4 .. 1/32.

const LAYER_L2: [f64; 4] = [3.231e-01, 1.623e-01, 8.261e-02, 4.168e-02];
const LAYER_CURL: [f64; 4] = [3.451e+00, 1.937e+00, 1.295e+00, 9.049e-01];
const EPS8_ENERGY: [f64; 4] = [3.781e+00, 2.108e+00, 1.389e+00, 9.628e-01];
const EPS0_ENERGY: [f64; 4] = [3.774e+00, 2.100e+00, 1.378e+00, 9.466e-01];
const ORDERS_L2: [f64; 3] = [0.99, 0.97, 0.99];
const ORDERS_CURL: [f64; 3] = [0.83, 0.58, 0.52];
const EPS8_ENERGY_ORDERS: [f64; 3] = [0.84, 0.60, 0.53];
const EPS0_ENERGY_ORDERS: [f64; 3] = [0.85, 0.61, 0.54];

fn layer_reference(eps: f64, energy: &[f64; 4], energy_orders: &[f64; 3]) -> Verdict {
    let top = if extended() { 5 } else { 4 };
    let recs = study(ExampleKind::Layer, 1, eps, (2, top));
    let mut misses = Vec::new();
    let columns: [(&str, fn(&ConvergenceRecord) -> f64, &[f64], &[f64]); 3] = [
        ("l2", |r| r.errors.l2, &LAYER_L2, &ORDERS_L2),
        ("curl", |r| r.errors.curl_l2, &LAYER_CURL, &ORDERS_CURL),
        ("energy", |r| r.errors.energy, energy, energy_orders),
    ];
    let mut rows = Vec::new();
    for (name, get, values, orders) in columns {
        let got: Vec<f64> = recs.iter().map(get).collect();
        for (i, g) in got.iter().enumerate() {
            if rel(*g, values[i]) > 0.02 {
                misses.push(format!("{name}[1/{}] {g:.4e} vs {:.4e} ({:+.1}%)", 4 << i, values[i], 100.0 * (g / values[i] - 1.0)));
            }
        }
        for i in 1..got.len() {
            let o = order(got[i - 1], got[i]);
            if (o - orders[i - 1]).abs() > 0.05 {
                misses.push(format!("{name} order {o:.3} vs {:.2}", orders[i - 1]));
            }
        }
        rows.push(format!("{name} {}", got.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>().join(" ")));
    }
    let detail = if misses.is_empty() { rows.join("; ") } else { format!("{}; computed {}", misses.join("; "), rows.join("; ")) };
    verdict(misses.is_empty(), detail)
}

// ---------------------------------------------------------------- 9, 10

struct SmoothRuns {
    eps1_r1: Vec<ConvergenceRecord>,
    eps6_r1: Vec<ConvergenceRecord>,
    eps1_r2: Vec<ConvergenceRecord>,
}

fn smooth_runs() -> SmoothRuns {
    SmoothRuns {
        eps1_r1: study(ExampleKind::Smooth, 1, 1.0, (2, 4)),
        eps6_r1: study(ExampleKind::Smooth, 1, 1e-6, (2, 4)),
        eps1_r2: study(ExampleKind::Smooth, 2, 1.0, (2, 4)),
    }
}

fn last_order(recs: &[ConvergenceRecord], get: fn(&ConvergenceRecord) -> f64) -> f64 {
    let n = recs.len();
    order(get(&recs[n - 2]), get(&recs[n - 1]))
}

fn smooth_rates(runs: &SmoothRuns) -> Verdict {
    // All orders at the h = 1/8 -> 1/16 transition.
    let gc = last_order(&runs.eps1_r1, |r| r.errors.gradcurl);
    let en = last_order(&runs.eps6_r1, |r| r.errors.energy);
    let l2_r1 = last_order(&runs.eps1_r1, |r| r.errors.l2);
    let l2_r2 = last_order(&runs.eps1_r2, |r| r.errors.l2);
    let first = |recs: &[ConvergenceRecord]| order(recs[0].errors.l2, recs[1].errors.l2);
    let ok = (0.85..=1.15).contains(&gc) && (1.7..=2.2).contains(&en) && l2_r2 - l2_r1 >= 0.5;
    verdict(
        ok,
        format!(
            "eps=1 gradcurl order {gc:.3}; eps=1e-6 energy order {en:.3}; L2 order r=2 {l2_r2:.3} vs r=1 {l2_r1:.3} \
             (1/4->1/8: {:.3} vs {:.3})",
            first(&runs.eps1_r2),
            first(&runs.eps1_r1)
        ),
    )
}

fn multiplier_vanishes(runs: &SmoothRuns) -> Verdict {
    let worst = [&runs.eps1_r1, &runs.eps6_r1, &runs.eps1_r2]
        .iter()
        .flat_map(|recs| recs.iter().map(|r| r.p_norm / r.f_norm))
        .fold(0.0, f64::max);
    verdict(worst <= 1e-8, format!("max |p_h|/|f| {worst:.2e} over 9 solves"))
}

// ---------------------------------------------------------------- 11

fn interpolation_orders() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for r in [1usize, 2] {
        let config = StudyConfig {
            example: ExampleKind::Smooth,
            r,
            levels: (2, 4),
            ..StudyConfig::default()
        };
        let recs = interpolation_study(&config).unwrap();
        let h: Vec<f64> = recs.iter().map(|x| x.h).collect();
        let l2 = fitted_order(&h, &recs.iter().map(|x| x.r_errors.l2).collect::<Vec<_>>());
        let curl = fitted_order(&h, &recs.iter().map(|x| x.r_errors.curl_l2).collect::<Vec<_>>());
        ok &= l2 >= r as f64 - 0.2 && curl >= 1.8;
        notes.push(format!("r={r}: L2 order {l2:.3} (>= {:.1}), curl order {curl:.3} (>= 1.8)", r as f64 - 0.2));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 12

const FD_STEP: f64 = 1e-5;

/// Central difference `∂_j f_i` at `x`; `wide` adds the ±2h points for the
/// fourth-order stencil (diagnostic only).
fn central(f: &dyn Fn([f64; 3]) -> [f64; 3], x: [f64; 3], i: usize, j: usize, wide: bool) -> f64 {
    let at = |t: f64| {
        let mut p = x;
        p[j] += t;
        f(p)[i]
    };
    let h = FD_STEP;
    if wide {
        (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
    } else {
        (at(h) - at(-h)) / (2.0 * h)
    }
}

fn fd_curl(f: &dyn Fn([f64; 3]) -> [f64; 3], x: [f64; 3], wide: bool) -> [f64; 3] {
    let d = |i, j| central(f, x, i, j, wide);
    [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
}

fn max_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
}

/// Worst deviations `[curl, grad curl, curl curl, curl Δ curl]` from
/// finite differences of the next lower analytic quantity.
fn fd_worst(sol: &ManufacturedSolution, points: &[[f64; 3]], wide: bool) -> [f64; 4] {
    // curl³ u, the intermediate for curl Δ curl u = −curl curl³ u; it is
    // itself checked against differences of curl curl u.
    let curl3 = sol.curl_curl.curl();
    let mut worst = [0.0f64; 4];
    for &x in points {
        worst[0] = worst[0].max(max_diff(sol.curl(x), fd_curl(&|y| sol.u(y), x, wide)));
        let ga = sol.grad_curl(x);
        for (i, row) in ga.iter().enumerate() {
            let fd: [f64; 3] = std::array::from_fn(|j| central(&|y| sol.curl(y), x, i, j, wide));
            worst[1] = worst[1].max(max_diff(*row, fd));
        }
        worst[2] = worst[2].max(max_diff(sol.curl_curl(x), fd_curl(&|y| sol.curl(y), x, wide)));
        worst[2] = worst[2].max(max_diff(curl3.evaluate(x), fd_curl(&|y| sol.curl_curl(y), x, wide)));
        let clc = fd_curl(&|y| curl3.evaluate(y), x, wide).map(|v| -v);
        worst[3] = worst[3].max(max_diff(sol.curl_laplace_curl(x), clc));
    }
    worst
}

fn manufactured_self_check() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut notes = Vec::new();
    let mut ok = true;
    for (kind, eps) in [(ExampleKind::Smooth, 1.0), (ExampleKind::Layer, 1e-8)] {
        let sol = manufactured(kind, &ProblemParams::new(eps, 1.0, 1.0).unwrap());
        let points: Vec<[f64; 3]> = (0..100).map(|_| std::array::from_fn(|_| rng.gen_range(0.0..1.0))).collect();
        let w = fd_worst(&sol, &points, false);
        let w4 = fd_worst(&sol, &points, true);
        ok &= w.iter().all(|v| *v <= 1e-5);
        notes.push(format!(
            "{}: curl {:.1e}, grad curl {:.1e}, curl curl {:.1e}, curl lap curl {:.1e} (4th-order stencil: {:.1e})",
            kind.name(),
            w[0],
            w[1],
            w[2],
            w[3],
            w4.iter().cloned().fold(0.0, f64::max)
        ));
    }
    verdict(ok, notes.join("; "))
}

// ----------------------------------------------------------------

fn run(id: usize, name: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = std::time::Instant::now();
    let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        verdict(false, format!("panicked: {msg}"))
    });
    println!(
        "{} criterion {id:>2} {name}: {} [{:.1}s]",
        if v.passed { "PASS" } else { "FAIL" },
        v.detail,
        start.elapsed().as_secs_f64()
    );
    v.passed
}

fn main() -> ExitCode {
    // Libtest-style flags from `cargo test` are accepted and ignored.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut results = vec![
        run(1, "unisolvence and duality", unisolvence),
        run(2, "dual basis matches the published functions", published_dual_basis),
        run(3, "Poincaré identities", poincare_identities),
        run(4, "complex exactness", complex_exactness),
        run(5, "commuting diagram", commuting),
        run(6, "jump property", jump_property),
        run(7, "layer example, eps = 1e-8", || layer_reference(1e-8, &EPS8_ENERGY, &EPS8_ENERGY_ORDERS)),
        run(8, "layer example, eps = 0", || layer_reference(0.0, &EPS0_ENERGY, &EPS0_ENERGY_ORDERS)),
    ];
    let runs = catch_unwind(smooth_runs).ok();
    match &runs {
        Some(runs) => {
            results.push(run(9, "smooth-solution rates", || smooth_rates(runs)));
            results.push(run(10, "multiplier vanishes", || multiplier_vanishes(runs)));
        }
        None => {
            results.push(run(9, "smooth-solution rates", || verdict(false, "smooth solves failed")));
            results.push(run(10, "multiplier vanishes", || verdict(false, "smooth solves failed")));
        }
    }
    results.push(run(11, "interpolation orders", interpolation_orders));
    results.push(run(12, "manufactured-solution derivatives", manufactured_self_check));
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
