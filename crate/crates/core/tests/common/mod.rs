//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ternary_core::arith::{pow, valuation};
use ternary_core::forms::{enumerate_reduced_by_disc, find_isometry};
use ternary_core::localdata::same_genus;
use ternary_core::matrix::{self, Mat3};
use ternary_core::spinor::{square_class, F2Span};
use ternary_core::TernaryForm;

pub fn data_file(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!(
        "{}/tests/fixtures/{name}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap()
}

/// `(disc, form, extra columns)` rows of a candidate list.
pub fn candidate_rows(text: &str) -> Vec<(i64, TernaryForm, Vec<String>)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            let c: Vec<i64> = cols[1..7].iter().map(|x| x.parse().unwrap()).collect();
            let f = TernaryForm::new([c[0], c[1], c[2], c[3], c[4], c[5]]).unwrap();
            (
                cols[0].parse().unwrap(),
                f,
                cols[8..].iter().map(|s| s.to_string()).collect(),
            )
        })
        .collect()
}

/// Table 1 as `(disc, form, spinor genus size)`.
pub fn table1() -> Vec<(i64, TernaryForm, usize)> {
    candidate_rows(&data_file("table1.csv"))
        .into_iter()
        .map(|(d, f, extra)| (d, f, extra[0].parse().unwrap()))
        .collect()
}

pub fn genus_of(f: &TernaryForm) -> Vec<TernaryForm> {
    enumerate_reduced_by_disc(f.discriminant())
        .into_iter()
        .filter(|g| same_genus(f, g))
        .collect()
}

pub fn random_forms(count: usize, max_disc: i64, seed: u64) -> Vec<TernaryForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let classes = enumerate_reduced_by_disc(rng.gen_range(2..=max_disc));
        if !classes.is_empty() {
            out.push(classes[rng.gen_range(0..classes.len())]);
        }
    }
    out
}

/// Reduced forms with `p^2 | dL` (`2^4 | dL` at 2).
pub fn descent_sample(p: i64, count: usize, seed: u64) -> Vec<TernaryForm> {
    let step = if p == 2 { 8 } else { p * p };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let disc = step * rng.gen_range(1..=3000 / step);
        let classes = enumerate_reduced_by_disc(disc);
        if classes.is_empty() {
            continue;
        }
        out.push(classes[rng.gen_range(0..classes.len())]);
    }
    out
}

/// All primitive forms in a generous Minkowski box, grouped into classes by
/// direct isometry search.
pub fn brute_force_classes(disc: i64) -> Vec<TernaryForm> {
    let mut reps: Vec<TernaryForm> = Vec::new();
    let mut a = 1;
    while a * a * a <= 2 * disc {
        let mut b = a;
        while a * b * b <= 2 * disc {
            for g in -a..=a {
                for e in -a..=a {
                    for d in -b..=b {
                        let m = 4 * a * b - g * g;
                        let num = disc - d * e * g + a * d * d + b * e * e;
                        if num <= 0 || num % m != 0 {
                            continue;
                        }
                        let c = num / m;
                        if c < b {
                            continue;
                        }
                        let Ok(f) = TernaryForm::new([a, b, c, d, e, g]) else {
                            continue;
                        };
                        if !reps.iter().any(|r| find_isometry(r, &f).is_some()) {
                            reps.push(f);
                        }
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    reps
}

/// Values `1..=bound` of `f` over a box large enough to hold every vector
/// with `f(x) ≤ bound`: `λ_min(F) ≥ det F / (tr F)^2`.
pub fn represented_by_box(f: &TernaryForm, bound: u64) -> Vec<u64> {
    let g = f.gram();
    let m = g.entries();
    let tr = (m[0][0] + m[1][1] + m[2][2]) as f64;
    let r2 = 2.0 * bound as f64 * tr * tr / g.det() as f64;
    let r = r2.sqrt().ceil() as i128;
    let mut out = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            for z in -r..=r {
                let v = f.eval(&[x, y, z]);
                if v >= 1 && v <= bound as i128 {
                    out.insert(v as u64);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Square classes of `Q(v)` over primitive `v ∈ L_p` whose symmetry `τ_v`
/// maps `L_p` to itself, found by lifting `v` one `p`-adic digit at a time
/// until `Q(v)` is pinned down modulo squares.
pub fn symmetry_norms(g: &Mat3, p: i128) -> Vec<u8> {
    let slack = if p == 2 { 3 } else { 1 };
    let ord_det = valuation(matrix::det(g), p);
    let max_level = ord_det + slack + 3;
    let mut found = Vec::new();
    let mut stack: Vec<([i128; 3], u32)> = Vec::new();
    for n in 1..p * p * p {
        stack.push(([n % p, (n / p) % p, n / (p * p)], 1));
    }
    while let Some((v, j)) = stack.pop() {
        let m = pow(p, j);
        let q: i128 = (0..3)
            .map(|i| (0..3).map(|k| v[i] * g[i][k] * v[k]).sum::<i128>())
            .sum::<i128>()
            .rem_euclid(m);
        let w: Vec<i128> = (0..3)
            .map(|i| (2 * (0..3).map(|k| g[i][k] * v[k]).sum::<i128>()).rem_euclid(m))
            .collect();
        let s = w
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| valuation(x, p))
            .min();
        let t = if q == 0 { None } else { Some(valuation(q, p)) };
        match (t, s) {
            (Some(t), _) if t + slack <= j => {
                if s.is_none_or(|s| t <= s) {
                    found.push(square_class(q, p as i64));
                }
            }
            (Some(t), Some(s)) if t > s => {}
            (None, Some(_)) => {}
            _ if j >= max_level => {}
            _ => {
                for d in 0..p * p * p {
                    let d = [d % p, (d / p) % p, d / (p * p)];
                    stack.push(([v[0] + m * d[0], v[1] + m * d[1], v[2] + m * d[2]], j + 1));
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// `θ(O⁺(L_p))` modulo squares, spanned by products of symmetry norms.
pub fn theta_by_symmetries(f: &TernaryForm, p: i64) -> F2Span {
    let norms = symmetry_norms(f.gram().entries(), p as i128);
    F2Span::from_vectors(norms.iter().map(|&n| (n ^ norms[0]) as u64))
}
