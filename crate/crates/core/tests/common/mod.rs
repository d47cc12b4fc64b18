//! Independent oracles and seeded generators shared by the integration
//! tests. Nothing here calls the solvers under test.
#![allow(dead_code)]

use ballfix::hahn::HahnSeries;
use ballfix::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Solves `(I − A) x = b` by exact Gaussian elimination.
pub fn affine_fixed_point(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Rational> {
    let n = b.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one() - &a[i][j]
                    } else {
                        -a[i][j].clone()
                    }
                })
                .collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("I - A is invertible");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n].clone()).collect()
}

/// Residues `x mod p^k` with `x² ≡ a`.
pub fn square_roots_mod(a: i128, p: i128, k: u32) -> Vec<i128> {
    let m = p.pow(k);
    (0..m).filter(|x| (x * x - a).rem_euclid(m) == 0).collect()
}

/// `{ z : d(x, z) ≤ d(x, y) }` from a raw distance table and order.
pub fn ball_extension(
    dist: &[Vec<usize>],
    leq: &dyn Fn(usize, usize) -> bool,
    x: usize,
    y: usize,
) -> Vec<bool> {
    (0..dist.len())
        .map(|z| leq(dist[x][z], dist[x][y]))
        .collect()
}

pub fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&p, &q)| !p || q)
}

/// Random ultrametric over the chain `0 < 1 < .. < depth`: points get
/// distinct addresses of length `depth` and `d(x, y) = depth − |common
/// prefix|`.
pub fn chain_ultrametric(rng: &mut impl Rng, n: usize, depth: usize) -> Vec<Vec<usize>> {
    let addresses = distinct_addresses(rng, n, depth, true);
    prefix_distance(&addresses, depth)
}

/// Random ultrametric over the product of two chains `0..=depth`, stored
/// as `i * (depth + 1) + j`: coordinatewise prefix distances from two
/// address systems that jointly separate points.
pub fn product_ultrametric(rng: &mut impl Rng, n: usize, depth: usize) -> Vec<Vec<usize>> {
    loop {
        let a = distinct_addresses(rng, n, depth, false);
        let b = distinct_addresses(rng, n, depth, false);
        let separated = (0..n).all(|x| (0..n).all(|y| x == y || a[x] != a[y] || b[x] != b[y]));
        if !separated {
            continue;
        }
        let (da, db) = (prefix_distance(&a, depth), prefix_distance(&b, depth));
        return (0..n)
            .map(|x| (0..n).map(|y| da[x][y] * (depth + 1) + db[x][y]).collect())
            .collect();
    }
}

fn distinct_addresses(rng: &mut impl Rng, n: usize, depth: usize, distinct: bool) -> Vec<Vec<u8>> {
    loop {
        let addr: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..depth).map(|_| rng.gen_range(0..2)).collect())
            .collect();
        if !distinct || (0..n).all(|x| (0..x).all(|y| addr[x] != addr[y])) {
            return addr;
        }
    }
}

fn prefix_distance(addr: &[Vec<u8>], depth: usize) -> Vec<Vec<usize>> {
    addr.iter()
        .map(|a| {
            addr.iter()
                .map(|b| depth - a.iter().zip(b).take_while(|(p, q)| p == q).count())
                .collect()
        })
        .collect()
}

/// Leading exponent computed from the raw term list.
pub fn lead(s: &HahnSeries) -> Option<i64> {
    s.terms().iter().map(|t| t.0).min()
}

/// `a ≤ b` in the series order, from the raw term lists.
pub fn series_leq(a: &HahnSeries, b: &HahnSeries) -> bool {
    let mut diff: std::collections::BTreeMap<i64, Rational> = std::collections::BTreeMap::new();
    for (e, c) in b.terms() {
        *diff.entry(*e).or_insert_with(Rational::zero) += c;
    }
    for (e, c) in a.terms() {
        *diff.entry(*e).or_insert_with(Rational::zero) -= c;
    }
    diff.values()
        .find(|c| !c.is_zero())
        .is_none_or(|c| c.is_positive())
}

pub fn series_abs_leq(a: &HahnSeries, r: &HahnSeries) -> bool {
    series_leq(a, r) && series_leq(&-a.clone(), r)
}

/// Random series with integer exponents in `[lo, hi)`.
pub fn random_series(rng: &mut impl Rng, lo: i64, hi: i64, terms: usize, trunc: i64) -> HahnSeries {
    let t: Vec<(i64, Rational)> = (0..terms)
        .map(|_| {
            (
                rng.gen_range(lo..hi),
                q(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
            )
        })
        .collect();
    HahnSeries::from_terms(t, trunc)
}

/// Strictly descending ultrametric nest `(x_μ, y_μ)` of the given depth:
/// `x_{μ+1} = x_μ + w` with `v(w) ≤ v(x_μ − y_μ)` and `y_{μ+1} − x_{μ+1}`
/// of strictly larger exponent.
pub fn random_um_nest(
    rng: &mut impl Rng,
    depth: usize,
    trunc: i64,
) -> Vec<(HahnSeries, HahnSeries)> {
    let mut e = rng.gen_range(-3..3);
    let x = random_series(rng, -3, 8, 4, trunc);
    let mut nest = vec![(x.clone(), &x + &monomial(rng, e, trunc))];
    for _ in 1..depth {
        let (px, _) = nest.last().unwrap().clone();
        let w = random_series(rng, e, e + 6, 3, trunc);
        let nx = &px + &w;
        e += rng.gen_range(1..4);
        let ny = &nx + &(&monomial(rng, e, trunc) + &random_series(rng, e + 1, e + 5, 2, trunc));
        nest.push((nx, ny));
    }
    nest
}

fn monomial(rng: &mut impl Rng, e: i64, trunc: i64) -> HahnSeries {
    let mut c = rng.gen_range(-9..=9);
    if c == 0 {
        c = 1;
    }
    HahnSeries::monomial(q(c, rng.gen_range(1..=4)), e, trunc)
}
