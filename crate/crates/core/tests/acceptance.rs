//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed. A criterion
//! listed in `EXPECTED_FAILURES` is still computed and reported; it does not
//! fail the run while it keeps failing for the documented reason.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bstar::bounds::{rho_lower, rho_upper, ubiquity_bound};
use bstar::constructions::{bose_sets, random_integer_set, ruzsa_sets, singer_sets};
use bstar::field::is_prime;
use bstar::intervals::{
    a_of_s, grid_symmetric_max, largest_symmetric_subset, trivial_lower_bounds, DeltaKOptions, Geometry,
    IntervalSet,
};
use bstar::kernel::{
    alpha_mix_optimum, delta_lower_certificate, hurwitz_zeta, zeta_integral_check, BoundCertificate,
    PiecewiseLinearKernel,
};
use bstar::search::{Decision, SearchKind, SearchProblem, Searcher};
use bstar::sets::IntSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The ratio column of the witness table lists 2/√7 ≈ 0.756 for g = 4, while
/// 12/√(2·4·31) ≈ 0.762.
const EXPECTED_FAILURES: &[u32] = &[1];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Ordered-pair counts by direct enumeration.
fn naive_max_rep(elems: &[u64], modulus: Option<u64>) -> u64 {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for &a in elems {
        for &b in elems {
            let s = match modulus {
                Some(n) => (a + b) % n,
                None => a + b,
            };
            *counts.entry(s).or_default() += 1;
        }
    }
    counts.values().copied().max().unwrap_or(0)
}

const WITNESSES: &[(u64, u64, &[u64], f64)] = &[
    (2, 7, &[1, 2, 5, 7], 0.756),
    (3, 5, &[1, 2, 3, 5], 0.730),
    (4, 31, &[1, 2, 4, 10, 11, 12, 14, 19, 25, 26, 30, 31], 0.756),
    (5, 9, &[1, 2, 3, 4, 5, 7, 9], 0.738),
    (6, 20, &[1, 2, 3, 4, 5, 6, 9, 10, 13, 15, 19, 20], 0.775),
    (7, 15, &[1, 2, 3, 7, 8, 9, 10, 11, 12, 13, 15], 0.759),
    (8, 30, &[1, 2, 5, 7, 8, 9, 11, 12, 13, 14, 16, 18, 26, 27, 28, 29, 30], 0.776),
    (9, 24, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 13, 14, 15, 17, 22, 23, 24], 0.770),
    (10, 33, &[1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 13, 15, 20, 21, 22, 23, 30, 31, 32, 33], 0.778),
    (11, 25, &[1, 2, 3, 4, 5, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 23, 25], 0.768),
];

const WITNESS_SIZES: [usize; 10] = [4, 4, 12, 7, 12, 11, 17, 16, 20, 18];

fn witness_table() -> Check {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (i, &(g, x, elems, ratio)) in WITNESSES.iter().enumerate() {
        let set = IntSet::integer(elems.iter().copied()).map_err(|e| e.to_string())?;
        ensure(bstar::sets::is_bstar(&set, g), || format!("g={g}: not B*[{g}]"))?;
        ensure(naive_max_rep(elems, None) <= g, || format!("g={g}: oracle count exceeds g"))?;
        ensure(set.len() == WITNESS_SIZES[i], || format!("g={g}: size {}", set.len()))?;
        ensure(set.max() == Some(x), || format!("g={g}: max {:?} != {x}", set.max()))?;
        let r = set.len() as f64 / ((2 * g * x) as f64).sqrt();
        if (r * 1000.0).round() != (ratio * 1000.0f64).round() {
            mismatches.push(format!("g={g}: |S|/sqrt(2gx) = {r:.4}, table {ratio}"));
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    if mismatches.is_empty() {
        Ok(format!("10 witnesses verified in {elapsed:?}"))
    } else {
        Err(format!("witnesses verify; ratio mismatch: {}", mismatches.join("; ")))
    }
}

/// `(k, [min n for g = 2, 3, ...])` from the integer table, exact entries only.
const R_TABLE: &[(u64, &[u64])] = &[
    (3, &[4]),
    (4, &[7, 5]),
    (5, &[12, 8, 6]),
    (6, &[18, 13, 8, 7]),
    (7, &[26, 19, 11, 9, 8]),
    (8, &[35, 25, 14, 12, 10, 9]),
    (9, &[45, 35, 18, 15, 12, 11]),
    (10, &[56, 46, 22, 19, 14, 13]),
];

const C_TABLE: &[(u64, &[u64])] = &[
    (3, &[6]),
    (4, &[12, 7]),
    (5, &[21, 11, 8]),
    (6, &[31, 19, 11, 9]),
    (7, &[48, 29, 14, 13, 10]),
    (8, &[57, 43, 22, 17, 12]),
    (9, &[73, 57, 28, 19, 16]),
];

fn reproduce(kind: SearchKind, table: &[(u64, &[u64])], g_max: u64, searcher: &mut Searcher) -> Result<usize, String> {
    let mut cells = 0;
    for &(k, row) in table {
        for (i, &expected) in row.iter().enumerate() {
            let g = 2 + i as u64;
            if g > g_max {
                continue;
            }
            let r = searcher.min_n(&SearchProblem::new(kind, g, k)).map_err(|e| e.to_string())?;
            ensure(r.exhaustive, || format!("g={g} k={k}: not exhaustive"))?;
            ensure(r.min_n == Some(expected), || format!("g={g} k={k}: got {:?}, table {expected}", r.min_n))?;
            let w = r.witness.ok_or(format!("g={g} k={k}: no witness"))?;
            ensure(w.len() as u64 == k, || format!("g={g} k={k}: witness size {}", w.len()))?;
            let modulus = (kind == SearchKind::Modular).then_some(expected);
            ensure(naive_max_rep(w.elements(), modulus) <= g, || format!("g={g} k={k}: witness fails"))?;
            if kind == SearchKind::Integer {
                ensure(w.max().unwrap() <= expected && w.min().unwrap() >= 1, || format!("g={g} k={k}: witness out of range"))?;
            }
            cells += 1;
        }
    }
    Ok(cells)
}

fn integer_table() -> Check {
    let start = Instant::now();
    let mut s = Searcher::default();
    let cells = reproduce(SearchKind::Integer, R_TABLE, 7, &mut s)?;
    match s.exists_set(SearchKind::Integer, 2, 34, 8).map_err(|e| e.to_string())? {
        Decision::Infeasible => {}
        Decision::Found(w) => return Err(format!("found {w} in {{1..34}}")),
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!("{cells} cells match, n=34 infeasible for g=2 k=8, {elapsed:?}"))
}

fn modular_table() -> Check {
    let start = Instant::now();
    let mut s = Searcher::default();
    let cells = reproduce(SearchKind::Modular, C_TABLE, 6, &mut s)?;
    let r = s
        .min_n(&SearchProblem::new(SearchKind::Modular, 5, 10))
        .map_err(|e| e.to_string())?;
    ensure(r.min_n == Some(28) && r.exhaustive, || format!("g=5 k=10: {:?}", r.min_n))?;
    let w = r.witness.ok_or("no witness for g=5 k=10")?;
    ensure(w.len() == 10 && naive_max_rep(w.elements(), Some(28)) <= 5, || format!("witness {w} fails"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1800), || format!("took {elapsed:?}"))?;
    Ok(format!("{} cells match incl. g=5 k=10 -> 28 ({w}), {elapsed:?}", cells + 1))
}

fn construction_sweep() -> Check {
    let mut checked = 0;
    for p in (2..=31u64).filter(|&p| is_prime(p)) {
        for k in 1..p.min(5) {
            let g = 2 * k * k;
            let cases = [
                ("ruzsa", ruzsa_sets(p, k), p * (p - 1), k * (p - 1)),
                ("bose", bose_sets(p, k), p * p - 1, k * p),
                ("singer", singer_sets(p, k), p * p + p + 1, k * p + 1),
            ];
            for (name, report, modulus, size) in cases {
                let r = report.map_err(|e| format!("{name} p={p} k={k}: {e}"))?;
                ensure(r.set.modulus() == Some(modulus), || format!("{name} p={p} k={k}: modulus {:?}", r.set.modulus()))?;
                ensure(r.set.len() as u64 == size, || format!("{name} p={p} k={k}: size {}", r.set.len()))?;
                ensure(naive_max_rep(r.set.elements(), Some(modulus)) <= g, || format!("{name} p={p} k={k}: not B*[{g}]"))?;
                ensure(r.verified, || format!("{name} p={p} k={k}: report not verified"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} constructions, zero failures"))
}

fn kernel_constants() -> Check {
    let p = 4.0 / 3.0;
    let near = |x: f64, y: f64| (x - y).abs() <= 5e-7;

    let start = Instant::now();
    let k4 = PiecewiseLinearKernel::arctan_family(10_000).map_err(|e| e.to_string())?;
    let khat0 = k4.khat0();
    let tail1 = k4.tail_norm(1, p).map_err(|e| e.to_string())?.value;
    let full = k4.tail_norm(0, p).map_err(|e| e.to_string())?.value;
    let t4 = start.elapsed();
    ensure(near(khat0, 0.870250799), || format!("arctan K̂(0) = {khat0:.10}"))?;
    ensure(near(tail1, 0.208784534), || format!("arctan tail1 = {tail1:.10}"))?;
    ensure(full < 0.9658413, || format!("arctan full norm = {full:.10}"))?;
    ensure(t4 < Duration::from_secs(30), || format!("arctan took {t4:?}"))?;

    let start = Instant::now();
    let k6 = PiecewiseLinearKernel::power_family(10_000).map_err(|e| e.to_string())?;
    let (a, b) = (k6.khat0(), k6.khat(1));
    let tail2 = k6.tail_norm(2, p).map_err(|e| e.to_string())?.value;
    let t6 = start.elapsed();
    ensure(near(a, 0.631932628), || format!("power K̂(0) = {a:.10}"))?;
    ensure(near(b, 0.270776892), || format!("power K̂(1) = {b:.10}"))?;
    ensure(near(tail2, 0.239175395), || format!("power tail2 = {tail2:.10}"))?;
    ensure(t6 < Duration::from_secs(30), || format!("power took {t6:?}"))?;
    Ok(format!(
        "arctan: {khat0:.9} / {tail1:.9} / norm {full:.9} ({t4:?}); power: {a:.9} / {b:.9} / {tail2:.9} ({t6:?})"
    ))
}

fn certificate() -> Check {
    let k4 = PiecewiseLinearKernel::arctan_family(10_000).map_err(|e| e.to_string())?;
    let k6 = PiecewiseLinearKernel::power_family(10_000).map_err(|e| e.to_string())?;
    let cert = BoundCertificate::from_kernels(&k6, &k4).map_err(|e| e.to_string())?;
    let c = delta_lower_certificate(&cert, 1e-6, 1.182778).map_err(|e| e.to_string())?;
    ensure(c.target_check.certified, || format!("threshold 1.182778 not certified: {:?}", c.target_check))?;
    ensure(c.best_threshold >= 1.182778, || format!("best threshold {}", c.best_threshold))?;
    let mix = alpha_mix_optimum(k4.khat0(), k4.tail_norm(1, 4.0 / 3.0).map_err(|e| e.to_string())?.value, 4.0 / 3.0)
        .map_err(|e| e.to_string())?;
    ensure(mix.bound >= 1.14915, || format!("alpha-mix bound {}", mix.bound))?;
    Ok(format!(
        "certified {:.8} (Δ/ε² >= {:.7}); alpha-mix bound {:.7} (Δ/ε² >= {:.7})",
        c.best_threshold,
        c.delta_constant,
        mix.bound,
        mix.bound / 2.0
    ))
}

fn bridge() -> Check {
    let rat = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    for &(g, x, elems, _) in WITNESSES {
        let set = IntSet::integer(elems.iter().copied()).map_err(|e| e.to_string())?;
        let d = largest_symmetric_subset(&a_of_s(&set, x).map_err(|e| e.to_string())?).d_value;
        let expected = rat(naive_max_rep(elems, None), x);
        ensure(d == expected, || format!("g={g}: D = {d}, expected {expected}"))?;
    }
    let fib = IntSet::integer([1, 2, 3, 5, 8, 13]).map_err(|e| e.to_string())?;
    let d = largest_symmetric_subset(&a_of_s(&fib, 13).map_err(|e| e.to_string())?).d_value;
    ensure(d == rat(3, 13), || format!("Fibonacci set: D = {d}"))?;
    Ok("10 witnesses exact; {1,2,3,5,8,13} -> 3/13".into())
}

fn grid_oracle() -> Check {
    const DENOM: i64 = 50_000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut max_diff = 0.0f64;
    for sample in 0..1000 {
        let k = rng.gen_range(3..=5);
        let mut pts: Vec<i64> = (0..2 * k).map(|_| rng.gen_range(0..=DENOM)).collect();
        pts.sort_unstable();
        pts.dedup();
        let rows: Vec<(BigRational, BigRational)> = pts
            .chunks_exact(2)
            .filter(|c| c[0] < c[1])
            .map(|c| (BigRational::new(c[0].into(), DENOM.into()), BigRational::new(c[1].into(), DENOM.into())))
            .collect();
        let exact = IntervalSet::from_unsorted(Geometry::Line, rows).map_err(|e| e.to_string())?;
        let d = largest_symmetric_subset(&exact).d_value;
        let (lin, quad) = trivial_lower_bounds(&exact);
        ensure(d >= lin && d >= quad, || format!("sample {sample}: trivial bound violated"))?;
        let float = exact.to_float();
        let dc = largest_symmetric_subset(&float).d_value;
        let dg = grid_symmetric_max(&float, 100_000);
        ensure(dc >= dg - 1e-12, || format!("sample {sample}: grid {dg} exceeds {dc}"))?;
        max_diff = max_diff.max(dc - dg);
        ensure(dc - dg <= 1e-9, || format!("sample {sample}: gap {}", dc - dg))?;
    }
    Ok(format!("1000 samples, max candidate-grid gap {max_diff:.2e}"))
}

fn delta_k() -> Check {
    let start = Instant::now();
    let opts = DeltaKOptions::default();
    let two = bstar::intervals::delta_k_upper(2, 0.75, &opts).map_err(|e| e.to_string())?;
    ensure((two.value - 0.5).abs() <= 1e-3, || format!("k=2: {}", two.value))?;
    ensure((two.witness.measure() - 0.75).abs() < 1e-9, || format!("k=2: witness measure {}", two.witness.measure()))?;
    let recomputed = largest_symmetric_subset(&two.witness).d_value;
    ensure(recomputed <= 0.5 + 1e-3 && two.witness.len() <= 2, || format!("k=2 witness gives {recomputed}"))?;
    let three = bstar::intervals::delta_k_upper(3, 4.0 / 7.0, &opts).map_err(|e| e.to_string())?;
    ensure(three.value <= 2.0 / 7.0 + 1e-3, || format!("k=3: {}", three.value))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("k=2: {:.6}, k=3: {:.6} (2/7 = {:.6}), {elapsed:?}", two.value, three.value, 2.0 / 7.0))
}

fn quadrature() -> Check {
    use std::f64::consts::PI;
    let v = zeta_integral_check();
    ensure((v - 3f64.sqrt() / 2.0).abs() <= 1e-9, || format!("integral {v}"))?;
    let z1 = hurwitz_zeta(2.0, 1.0).map_err(|e| e.to_string())?;
    let z2 = hurwitz_zeta(2.0, 0.5).map_err(|e| e.to_string())?;
    ensure((z1 - PI * PI / 6.0).abs() <= 1e-12, || format!("zeta(2,1) = {z1}"))?;
    ensure((z2 - PI * PI / 2.0).abs() <= 1e-12, || format!("zeta(2,1/2) = {z2}"))?;
    Ok(format!("integral {v:.12}"))
}

fn probabilistic() -> Check {
    let (n, gamma) = (10_000u64, 100.0);
    let e0 = 2.0 * (gamma * n as f64 / std::f64::consts::PI).sqrt() - gamma / std::f64::consts::PI;
    let g_cap = gamma + 4.0 * (gamma * (3.0 * n as f64).ln()).sqrt();
    let mut sizes = Vec::new();
    let mut within = 0;
    for seed in 0..100 {
        let r = random_integer_set(n, gamma, seed).map_err(|e| e.to_string())?;
        sizes.push(r.set.len() as f64);
        let g = naive_max_rep(r.set.elements(), None);
        ensure(g == r.achieved_g, || format!("seed {seed}: reported g {} vs {g}", r.achieved_g))?;
        if (g as f64) <= g_cap {
            within += 1;
        }
    }
    let mean = sizes.iter().sum::<f64>() / 100.0;
    let sd = (sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
    let se = sd / 10.0;
    ensure((mean - e0).abs() <= 3.0 * se, || format!("mean {mean:.2} vs E0 {e0:.2}, SE {se:.2}"))?;
    ensure(within >= 95, || format!("g bound held in {within}/100 draws"))?;
    Ok(format!("mean {mean:.2}, E0 {e0:.2}, SE {se:.2}; g <= {g_cap:.1} in {within}/100"))
}

fn calculators() -> Check {
    let lower = rho_lower(12).map_err(|e| e.to_string())?.lower.unwrap();
    ensure((lower - 3f64.sqrt() / 5f64.sqrt()).abs() <= 1e-12, || format!("rho_lower(12) = {lower}"))?;
    let upper = rho_upper(2).map_err(|e| e.to_string())?.upper_sq_formula.unwrap();
    ensure((upper - 1.238015).abs() <= 1e-6, || format!("rho_upper(2) = {upper}"))?;
    let u = ubiquity_bound(0.7, 0.25).map_err(|e| e.to_string())?;
    ensure(u.kappa_complicated > 0.0137382, || format!("ubiquity {}", u.kappa_complicated))?;
    Ok(format!("rho_lower(12) {lower:.12}, rho_upper(2) {upper:.6}, kappa {:.9}", u.kappa_complicated))
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Check)> = vec![
        (1, "witness table", witness_table),
        (2, "integer min-n table", integer_table),
        (3, "modular min-n table", modular_table),
        (4, "construction sweep", construction_sweep),
        (5, "kernel constants", kernel_constants),
        (6, "autoconvolution certificate", certificate),
        (7, "interval bridge exactness", bridge),
        (8, "symmetric-subset grid oracle", grid_oracle),
        (9, "k-interval optimizer", delta_k),
        (10, "quadrature self-test", quadrature),
        (11, "probabilistic construction", probabilistic),
        (12, "bound calculators", calculators),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        match &outcome {
            Ok(msg) => println!("criterion {id:>2} {name}: PASS ({msg})"),
            Err(msg) if expected_fail => println!("criterion {id:>2} {name}: FAIL, known ({msg})"),
            Err(msg) => println!("criterion {id:>2} {name}: FAIL ({msg})"),
        }
        if outcome.is_err() != expected_fail {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
