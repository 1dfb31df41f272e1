//! Cross-checks against independent brute-force computations that share no
//! code with the library beyond reading a subspace's coordinates.

#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;

use koszulate::engine::{
    fiber_dimension, hilbert_prefix, resonance_points_count, resonance_trivial, wq_dimension,
    wq_dimension_presentation, Subspace2,
};
use koszulate::families::{codim_one, gaussian_rnc, random_subspace, resonant_perturbation, split_bundle_p1, weyman};
use koszulate::field::{reduce_mod, FieldConfig};
use koszulate::formulas::wq_bound;
use num_bigint::BigInt;
use num_rational::BigRational;

const P: u64 = 1_000_003;

fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d as u32]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

fn index(ms: &[Vec<u32>]) -> HashMap<Vec<u32>, usize> {
    ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

fn times(m: &[u32], i: usize) -> Vec<u32> {
    let mut v = m.to_vec();
    v[i] += 1;
    v
}

fn dense_rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pr);
        let iv = inv(rows[rank][c]);
        let pivot: Vec<u64> = rows[rank].iter().map(|&x| (x as u128 * iv as u128 % p as u128) as u64).collect();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c];
                for (x, &y) in rows[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - (f as u128 * y as u128 % p as u128) as u64) % p;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

fn coords(k: &Subspace2, p: u64) -> Vec<Vec<u64>> {
    k.basis().to_dense().iter().map(|row| row.iter().map(|x| reduce_mod(x, p).expect("p-integral")).collect()).collect()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// dim W_q from polynomial multiplication written out directly.
fn brute_wq(k: &Subspace2, q: usize, p: u64) -> usize {
    let n = k.n();
    let (sq, sq1, sq2) = (monomials(n, q), monomials(n, q + 1), monomials(n, q + 2));
    let (i1, i2) = (index(&sq1), index(&sq2));
    // V ⊗ Sym^(q+1) → Sym^(q+2), one row per domain element
    let mult: Vec<Vec<u64>> = (0..n)
        .flat_map(|i| sq1.iter().map(move |g| (i, g)))
        .map(|(i, g)| {
            let mut row = vec![0; sq2.len()];
            row[i2[&times(g, i)]] = 1;
            row
        })
        .collect();
    let mut image = Vec::new();
    for kv in coords(k, p) {
        for f in &sq {
            let mut row = vec![0u64; n * sq1.len()];
            for (c, &(i, j)) in pairs(n).iter().enumerate() {
                let v = kv[c];
                if v == 0 {
                    continue;
                }
                let a = j * sq1.len() + i1[&times(f, i)];
                let b = i * sq1.len() + i1[&times(f, j)];
                row[a] = (row[a] + v) % p;
                row[b] = (row[b] + p - v) % p;
            }
            image.push(row);
        }
    }
    let cycles = n * sq1.len() - dense_rank(mult, p);
    let boundaries = if image.is_empty() { 0 } else { dense_rank(image, p) };
    cycles - boundaries
}

fn prime_field(p: u64) -> FieldConfig {
    FieldConfig::prime(p).unwrap()
}

#[test]
fn wq_matches_brute_force_on_families() {
    let f = prime_field(P);
    for n in 3..=5 {
        for k in [weyman(n, f).unwrap(), gaussian_rnc(n, f).unwrap(), codim_one(n, f).unwrap()] {
            for q in 0..=3 {
                assert_eq!(wq_dimension(&k, q), brute_wq(&k, q, P), "n={n} q={q}");
            }
        }
    }
    let k = split_bundle_p1(1, 2, f).unwrap();
    for q in 0..=3 {
        assert_eq!(wq_dimension(&k, q), brute_wq(&k, q, P));
    }
}

#[test]
fn wq_matches_brute_force_on_random_subspaces() {
    let f = prime_field(P);
    for seed in 0..30u64 {
        let n = 3 + (seed % 3) as usize;
        let m = (seed as usize * 7) % (n * (n - 1) / 2 + 1);
        let k = random_subspace(n, m, f, seed).unwrap();
        for q in 0..=2 {
            let want = brute_wq(&k, q, P);
            assert_eq!(wq_dimension(&k, q), want, "seed={seed} q={q}");
            assert_eq!(wq_dimension_presentation(&k, q), want, "seed={seed} q={q}");
        }
    }
}

#[test]
fn rational_and_modular_agree_on_integral_families() {
    for n in 4..=6 {
        let a = hilbert_prefix(&weyman(n, FieldConfig::Rational).unwrap(), n - 2);
        let b = hilbert_prefix(&weyman(n, prime_field(P)).unwrap(), n - 2);
        assert_eq!(a, b);
    }
}

/// Brute-force F(a): count all b with a ∧ b ∈ K^⊥ and take log_p.
fn brute_fiber(k: &Subspace2, a: &[u64], p: u64) -> usize {
    let n = k.n();
    let kc = coords(k, p);
    let ps = pairs(n);
    let mut count = 0u64;
    let total = p.pow(n as u32);
    for code in 0..total {
        let b: Vec<u64> = (0..n).map(|i| code / p.pow(i as u32) % p).collect();
        let ok = kc.iter().all(|kv| {
            ps.iter().enumerate().fold(0u64, |acc, (c, &(i, j))| {
                let w = (a[i] * b[j] % p + p - a[j] * b[i] % p) % p;
                (acc + kv[c] * w) % p
            }) == 0
        });
        if ok {
            count += 1;
        }
    }
    let mut d = 0;
    while p.pow(d) < count {
        d += 1;
    }
    assert_eq!(p.pow(d), count);
    d as usize
}

fn brute_points(k: &Subspace2, p: u64) -> u64 {
    let n = k.n();
    let mut count = 0;
    for code in 1..p.pow(n as u32) {
        let a: Vec<u64> = (0..n).map(|i| code / p.pow(i as u32) % p).collect();
        // one representative per line: the last nonzero coordinate is 1
        if a.iter().rev().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        if brute_fiber(k, &a, p) >= 2 {
            count += 1;
        }
    }
    count
}

fn to_covector(a: &[u64]) -> Vec<BigRational> {
    a.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

#[test]
fn fibers_match_brute_force() {
    let p = 3;
    let f = prime_field(p);
    for k in [codim_one(4, f).unwrap(), split_bundle_p1(1, 1, f).unwrap(), weyman(4, f).unwrap()] {
        for code in 0..p.pow(4) {
            let a: Vec<u64> = (0..4).map(|i| code / p.pow(i) % p).collect();
            assert_eq!(fiber_dimension(&k, &to_covector(&a)).unwrap(), brute_fiber(&k, &a, p), "a={a:?}");
        }
    }
}

#[test]
fn point_counts_match_brute_force() {
    let cases: Vec<(Subspace2, u64)> = vec![
        (split_bundle_p1(1, 1, prime_field(3)).unwrap(), 16),
        (codim_one(4, prime_field(3)).unwrap(), 4),
        (weyman(4, prime_field(7)).unwrap(), 0),
        (split_bundle_p1(1, 1, prime_field(5)).unwrap(), 36),
    ];
    for (k, want) in cases {
        let p = k.field().modulus().unwrap();
        assert_eq!(brute_points(&k, p), want);
        assert_eq!(resonance_points_count(&k).unwrap(), want);
    }
    for seed in 0..6 {
        let k = resonant_perturbation(4, seed, prime_field(3)).unwrap();
        assert_eq!(resonance_points_count(&k).unwrap(), brute_points(&k, 3), "seed={seed}");
        let k = random_subspace(4, 5, prime_field(5), seed).unwrap();
        assert_eq!(resonance_points_count(&k).unwrap(), brute_points(&k, 5), "seed={seed}");
    }
}

#[test]
fn stated_examples() {
    let q = FieldConfig::Rational;
    // W_0 = ∧²V / K and vanishing from degree n − 3
    let w4 = weyman(4, q).unwrap();
    assert_eq!((wq_dimension(&w4, 0), wq_dimension(&w4, 1)), (1, 0));
    assert_eq!(wq_dimension(&codim_one(5, q).unwrap(), 2), 3);
    assert_eq!(hilbert_prefix(&codim_one(4, q).unwrap(), 3), [1, 2, 3, 4]);
    assert_eq!(hilbert_prefix(&weyman(5, q).unwrap(), 3), [3, 5, 0, 0]);
    assert_eq!(wq_dimension_presentation(&weyman(5, q).unwrap(), 1), 5);
    assert_eq!(hilbert_prefix(&Subspace2::full(5, q), 3), [0, 0, 0, 0]);
    for n in 4..=7 {
        assert!(resonance_trivial(&weyman(n, q).unwrap()), "n={n}");
        assert!(!resonance_trivial(&codim_one(n, q).unwrap()), "n={n}");
    }
    assert!(resonance_trivial(&gaussian_rnc(5, q).unwrap()));
    assert!(resonance_trivial(&split_bundle_p1(0, 0, q).unwrap()));
    assert!(!resonance_trivial(&split_bundle_p1(0, 2, q).unwrap()));
    assert_eq!(split_bundle_p1(1, 1, q).unwrap().dim(), 3);
    // bound attained by Weyman in every degree below n − 3
    for n in 4..=6 {
        let dims = hilbert_prefix(&weyman(n, q).unwrap(), n - 4);
        for (deg, d) in dims.into_iter().enumerate() {
            assert_eq!(BigRational::from_integer(BigInt::from(d)), wq_bound(n, deg).unwrap());
        }
    }
}

#[test]
fn resonant_samples_meet_lemma_bound_in_every_degree() {
    for n in 4..=5 {
        for seed in 0..4 {
            let k = resonant_perturbation(n, seed, FieldConfig::Rational).unwrap();
            for (q, d) in hilbert_prefix(&k, n - 3).into_iter().enumerate() {
                assert!(d > q, "n={n} seed={seed} q={q} dim={d}");
            }
        }
    }
}
