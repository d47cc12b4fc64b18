use std::time::Instant;

use ballfix::banach::{dist, solve_banach, verify_banach_sc, AffineMap, Point};
use ballfix::sweep::{gfpt_sweep, nfpt_sweep, topo_sweep, Counterexample};
use ballfix::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::report::RunReport;
use crate::InputError;

pub const BANACH_COUNT_CAP: usize = 10_000;

fn summarize<S: Serialize>(
    name: &str,
    summary: &S,
    counterexamples: &[Counterexample],
) -> RunReport {
    let mut report = RunReport::new(name, "sweep");
    if let Value::Object(fields) = serde_json::to_value(summary).expect("summary serializes") {
        report.outputs = fields;
    }
    for c in counterexamples {
        report.contradiction(format!(
            "{} points, map {:?}, sets {:?}: {}",
            c.points, c.map, c.sets, c.detail
        ));
    }
    report
}

pub fn nfpt(max_points: usize, max_balls: usize) -> Result<RunReport, InputError> {
    let started = Instant::now();
    let s = nfpt_sweep(max_points, max_balls)?;
    let mut report = summarize(
        &format!("nfpt sweep |X| <= {max_points}, <= {max_balls} balls"),
        &s,
        &s.counterexamples,
    );
    report.elapsed = started.elapsed();
    Ok(report)
}

pub fn gfpt(max_points: usize) -> Result<RunReport, InputError> {
    let started = Instant::now();
    let s = gfpt_sweep(max_points)?;
    let mut report = summarize(
        &format!("gfpt sweep |X| <= {max_points}"),
        &s,
        &s.counterexamples,
    );
    report.elapsed = started.elapsed();
    Ok(report)
}

pub fn topo(max_points: usize) -> Result<RunReport, InputError> {
    let started = Instant::now();
    let s = topo_sweep(max_points)?;
    let mut report = summarize(
        &format!("topo sweep <= {max_points} points"),
        &s,
        &s.counterexamples,
    );
    report.elapsed = started.elapsed();
    Ok(report)
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64, den: i64) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(-bound..=bound)),
        BigInt::from(den),
    )
}

/// Affine map on `ℚ^dim` with every row sum of `|a_ij|` at most `1/2`.
fn random_contraction(rng: &mut ChaCha8Rng, dim: usize) -> AffineMap<Rational> {
    let den = 4 * dim as i64;
    let a = (0..dim)
        .map(|_| (0..dim).map(|_| random_rational(rng, 2, den)).collect())
        .collect();
    let b = (0..dim).map(|_| random_rational(rng, 20, 7)).collect();
    AffineMap::new(a, b).expect("square by construction")
}

#[derive(Default, Serialize)]
struct BanachSummary {
    maps: usize,
    passed: usize,
    max_iterations: usize,
}

/// Seeded random contractions: each is solved from two starts, the orbit
/// inequalities are verified, and the two certificate balls must overlap
/// since both contain the unique fixed point.
pub fn banach(count: usize, seed: u64) -> Result<RunReport, InputError> {
    if count == 0 || count > BANACH_COUNT_CAP {
        return Err(InputError::Invalid(format!(
            "count must be in 1..={BANACH_COUNT_CAP}"
        )));
    }
    let started = Instant::now();
    let half = Rational::new(1.into(), 2.into());
    let eps = Rational::new(1.into(), BigInt::from(1u64 << 20));
    let results: Vec<Result<usize, String>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let dim = rng.gen_range(1..=3);
            let map = random_contraction(&mut rng, dim);
            let starts: Vec<Point<Rational>> = (0..2)
                .map(|_| Point((0..dim).map(|_| random_rational(&mut rng, 50, 3)).collect()))
                .collect();
            let spec = map
                .clone()
                .into_spec(half.clone())
                .map_err(|e| e.to_string())?;
            let sc = verify_banach_sc(&spec, &starts[0], 6).map_err(|e| e.to_string())?;
            if !sc.checks.all_passed() {
                return Err(format!("map {i}: orbit check failed\n{}", sc.checks));
            }
            let a =
                solve_banach(&spec, &starts[0], &eps, 200).map_err(|e| format!("map {i}: {e}"))?;
            let b =
                solve_banach(&spec, &starts[1], &eps, 200).map_err(|e| format!("map {i}: {e}"))?;
            let gap = dist(&a.certificate.center, &b.certificate.center);
            if gap > a.certificate.radius.clone() + b.certificate.radius.clone() {
                return Err(format!(
                    "map {i}: disjoint certificates {:?} and {:?}",
                    a.point, b.point
                ));
            }
            Ok(a.iterations.max(b.iterations))
        })
        .collect();
    let mut summary = BanachSummary::default();
    let mut failures = Vec::new();
    for r in results {
        summary.maps += 1;
        match r {
            Ok(iterations) => {
                summary.passed += 1;
                summary.max_iterations = summary.max_iterations.max(iterations);
            }
            Err(e) => failures.push(e),
        }
    }
    let mut report = summarize(
        &format!("banach sweep {count} maps, seed {seed}"),
        &summary,
        &[],
    );
    report.output("seed", seed);
    for f in failures {
        report.contradiction(f);
    }
    report.elapsed = started.elapsed();
    Ok(report)
}
