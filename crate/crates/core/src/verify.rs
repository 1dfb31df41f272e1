//! Self-verification: the numbered acceptance criteria, runnable at two sizes.
//!
//! `Level::Full` uses the stated parameter ranges; `Level::Fast` trims the
//! expensive sweeps. The differential builder is a parameter so a corrupted
//! convention can be fed through the suite and observed to fail.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bases::delta_matrix;
use crate::engine::{
    hilbert_prefix, resonance_points_count, resonance_trivial, wq_dimension, wq_dimension_presentation, Subspace2,
};
use crate::error::Result;
use crate::families::{codim_one, gaussian_rnc, random_subspace, resonant_perturbation, split_bundle_p1, weyman};
use crate::field::{FieldConfig, DEFAULT_PRIME};
use crate::formulas::{
    binom, canonical_pencil_class, canonical_pencil_inputs, chow_degree, degree_identity, factorial, h1_sym_dim,
    koszul_divisor_degree, mukai_pairing, resonance_class, resonance_class_from_proof, sym_mukai, voisin_class,
    voisin_class_derived, wq_bound, FormalClass, MukaiVector, C1E, C1F, HHAT, PHI,
};
use crate::rng::SplitMix64;
use crate::sparse::SparseMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

/// Builds `δ_{p,q}` on `n` variables.
pub type DeltaBuilder = fn(usize, usize, usize, FieldConfig) -> Result<SparseMatrix>;

pub const CRITERIA: [(u32, &str); 13] = [
    (1, "vanishing in degrees n-3 and n-2 for Weyman and Gaussian K"),
    (2, "dimension bound attained for m = 2n-3"),
    (3, "Hilbert series of the codimension-one K"),
    (4, "multiplicity lower bound for resonant K"),
    (5, "finite-field point count agrees with W vanishing"),
    (6, "quadric point count for O(1)+O(1)"),
    (7, "Koszul divisor degree equals (n-2) times Catalan"),
    (8, "resonance class equals its binomial expansion"),
    (9, "canonical pencil class from the resonance class"),
    (10, "Voisin class from the resonance class"),
    (11, "h1 of symmetric powers equals the W bound"),
    (12, "Mukai pairing and symmetric-power vectors"),
    (13, "structural invariants of the Koszul complex"),
];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} ({} ms){}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed_ms,
            if self.passed { String::new() } else { format!(" - {}", self.detail) }
        )
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(limit: Option<Duration>, start: Instant) -> std::result::Result<(), String> {
    match limit {
        Some(l) if start.elapsed() > l => Err(format!("exceeded time limit of {} s", l.as_secs())),
        _ => Ok(()),
    }
}

pub struct Suite {
    pub level: Level,
    pub delta: DeltaBuilder,
}

impl Suite {
    pub fn new(level: Level) -> Self {
        Suite { level, delta: delta_matrix }
    }

    pub fn with_delta(level: Level, delta: DeltaBuilder) -> Self {
        Suite { level, delta }
    }

    fn full(&self) -> bool {
        self.level == Level::Full
    }

    pub fn run_all(&self) -> Vec<Outcome> {
        CRITERIA.iter().map(|&(id, _)| self.run(id)).collect()
    }

    pub fn run(&self, id: u32) -> Outcome {
        let title = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown criterion");
        let start = Instant::now();
        let result = match id {
            1 => self.vanishing(),
            2 => self.bound_equality(),
            3 => self.codim_one_series(),
            4 => self.multiplicity(),
            5 => self.point_oracle(),
            6 => self.quadric(),
            7 => self.degrees(),
            8 => self.class_expansion(),
            9 => self.canonical_pencil(),
            10 => self.voisin(),
            11 => self.h1_bridge(),
            12 => self.mukai(),
            13 => self.structural(),
            _ => Err(format!("no criterion {id}")),
        };
        let elapsed = start.elapsed().as_millis().to_string();
        match result {
            Ok(detail) => Outcome { id, title, passed: true, detail, elapsed_ms: elapsed },
            Err(detail) => Outcome { id, title, passed: false, detail, elapsed_ms: elapsed },
        }
    }

    /// Exact over Q for small n, over the 61-bit prime above.
    fn field_for(n: usize) -> FieldConfig {
        if n <= 5 {
            FieldConfig::Rational
        } else {
            FieldConfig::Prime(DEFAULT_PRIME)
        }
    }

    fn vanishing(&self) -> Check {
        let start = Instant::now();
        let top = if self.full() { 7 } else { 6 };
        let mut checked = 0;
        for n in 4..=top {
            let field = Self::field_for(n);
            for (name, k) in [("weyman", lift(weyman(n, field))?), ("gaussian-rnc", lift(gaussian_rnc(n, field))?)] {
                for q in [n - 3, n - 2] {
                    let d = wq_dimension(&k, q);
                    ensure(d == 0, || format!("{name}({n}): dim W_{q} = {d} over {}", field.label()))?;
                    checked += 1;
                }
            }
        }
        within(self.full().then_some(Duration::from_secs(300)), start)?;
        Ok(format!("{checked} vanishing degrees"))
    }

    fn bound_equality(&self) -> Check {
        let field = FieldConfig::Prime(DEFAULT_PRIME);
        let wanted = if self.full() { 10 } else { 3 };
        let mut checked = 0;
        for n in 4..=6 {
            let mut found = 0;
            let mut seed = 0u64;
            while found < wanted {
                ensure(seed < 10 * wanted as u64 + 10, || format!("too few non-resonant samples at n={n}"))?;
                let k = lift(random_subspace(n, 2 * n - 3, field, seed))?;
                seed += 1;
                if !resonance_trivial(&k) {
                    continue;
                }
                found += 1;
                for q in 0..=n - 4 {
                    let d = BigRational::from_integer(BigInt::from(wq_dimension(&k, q)));
                    let b = lift(wq_bound(n, q))?;
                    ensure(d == b, || format!("n={n} seed={} q={q}: dim {d} vs bound {b}", seed - 1))?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} degrees at equality"))
    }

    fn codim_one_series(&self) -> Check {
        for n in 4..=6 {
            let k = lift(codim_one(n, Self::field_for(n)))?;
            let got = hilbert_prefix(&k, n);
            let want: Vec<usize> = (1..=n + 1).collect();
            ensure(got == want, || format!("n={n}: {got:?}"))?;
        }
        Ok("n = 4, 5, 6".into())
    }

    fn multiplicity(&self) -> Check {
        let seeds = if self.full() { 10 } else { 3 };
        for n in 4..=5 {
            for seed in 0..seeds {
                let k = lift(resonant_perturbation(n, seed, FieldConfig::Rational))?;
                let d = wq_dimension(&k, n - 3);
                ensure(d >= n - 2, || format!("n={n} seed={seed}: dim W_{} = {d}", n - 3))?;
            }
        }
        Ok(format!("{} resonant samples", 2 * seeds))
    }

    /// Resonant samples come from `resonant_perturbation`; the rest are random
    /// `K` of dimension `2n − 3`, drawn until enough have vanishing `W_(n−3)`.
    /// Every drawn sample is compared, and all disagreements are reported.
    fn point_oracle(&self) -> Check {
        let start = Instant::now();
        let per_kind = if self.full() { 10 } else { 3 };
        let mut compared = 0;
        let mut mismatches = Vec::new();
        let mut compare = |k: &Subspace2, label: String| -> std::result::Result<bool, String> {
            let (trivial, points) = (resonance_trivial(k), lift(resonance_points_count(k))?);
            compared += 1;
            if trivial != (points == 0) {
                mismatches.push(format!("{label}: W vanishing={trivial}, F_p points={points}"));
            }
            Ok(trivial)
        };
        for n in 4..=5 {
            for p in [3u64, 5, 7] {
                let field = lift(FieldConfig::prime(p))?;
                for seed in 0..per_kind {
                    let k = lift(resonant_perturbation(n, seed, field))?;
                    compare(&k, format!("resonant n={n} p={p} seed={seed}"))?;
                }
                let mut found = 0;
                let mut seed = 0u64;
                while found < per_kind {
                    ensure(seed < 400, || format!("too few non-resonant samples at n={n} p={p}"))?;
                    let k = lift(random_subspace(n, 2 * n - 3, field, seed))?;
                    if compare(&k, format!("random n={n} p={p} seed={seed}"))? {
                        found += 1;
                    }
                    seed += 1;
                }
            }
        }
        ensure(mismatches.is_empty(), || {
            format!("{} of {compared} samples disagree: {}", mismatches.len(), mismatches.join("; "))
        })?;
        within(self.full().then_some(Duration::from_secs(120)), start)?;
        Ok(format!("{compared} samples agree"))
    }

    fn quadric(&self) -> Check {
        for p in [3u64, 5, 7] {
            let k = lift(split_bundle_p1(1, 1, lift(FieldConfig::prime(p))?))?;
            let c = lift(resonance_points_count(&k))?;
            ensure(c == (p + 1) * (p + 1), || format!("p={p}: {c} points"))?;
        }
        Ok("p = 3, 5, 7".into())
    }

    fn degrees(&self) -> Check {
        let start = Instant::now();
        for n in 3..=60usize {
            let lhs = lift(koszul_divisor_degree(n))?;
            let rhs = BigInt::from(n - 2) * lift(chow_degree(n))?;
            ensure(lhs == rhs && lift(degree_identity(n))?, || format!("n={n}: {lhs} vs {rhs}"))?;
            ensure(lhs == binom(2 * n as i64 - 4, n as i64 - 1), || format!("n={n}: degree formula"))?;
        }
        within(Some(Duration::from_secs(1)), start)?;
        Ok("3 <= n <= 60".into())
    }

    fn class_expansion(&self) -> Check {
        let (e_sym, f_sym) = (FormalClass::symbol(C1E), FormalClass::symbol(C1F));
        for e in 4..=40 {
            let a = lift(resonance_class_from_proof(e, &e_sym, &f_sym))?;
            let b = lift(resonance_class(e, &e_sym, &f_sym))?;
            ensure(a == b, || format!("e={e}: {a} vs {b}"))?;
        }
        Ok("4 <= e <= 40".into())
    }

    fn canonical_pencil(&self) -> Check {
        let (c1e, c1f) = canonical_pencil_inputs();
        for g in 3..=30 {
            let a = lift(canonical_pencil_class(g))?;
            let b = lift(resonance_class(g, &c1e, &c1f))?;
            ensure(a == b, || format!("g={g}: {a} vs {b}"))?;
        }
        Ok("3 <= g <= 30".into())
    }

    fn voisin(&self) -> Check {
        for r in 2..=30usize {
            let derived = lift(voisin_class_derived(r))?;
            ensure(derived.coefficient(PHI).is_zero(), || format!("r={r}: phi survives in {derived}"))?;
            let want = BigRational::new(factorial(2 * r as u64 + 1), factorial(r as u64) * factorial(r as u64 + 2));
            ensure(derived.coefficient(HHAT) == want, || format!("r={r}: {derived}"))?;
            ensure(derived == lift(voisin_class(r))?, || format!("r={r}: stray symbols in {derived}"))?;
        }
        Ok("2 <= r <= 30".into())
    }

    fn h1_bridge(&self) -> Check {
        let mut checked = 0;
        for r in 2..=20usize {
            for b in 2..=r + 3 {
                let h = BigRational::from_integer(lift(h1_sym_dim(r, b))?);
                let w = lift(wq_bound(r + 2, b - 2))?;
                ensure(h == w, || format!("r={r} b={b}: h1 {h} vs bound {w}"))?;
                checked += 1;
            }
        }
        Ok(format!("{checked} pairs (r, b)"))
    }

    fn mukai(&self) -> Check {
        let minus_two = BigRational::from_integer(BigInt::from(-2));
        for r in 2..=20i64 {
            let v = MukaiVector::new(r, 1, 2, 2 * r);
            let sq = lift(mukai_pairing(&v, &v))?;
            ensure(sq == minus_two, || format!("r={r}: v^2 = {sq}"))?;
        }
        for r in 1..=6usize {
            for s in 1..=6i64 {
                let g = r as i64 * s;
                let v = lift(sym_mukai(r, s, g, 1, false))?;
                ensure(v == MukaiVector::new(r as i64, 1, s, g), || format!("b=1, r={r} s={s}: {v}"))?;
                for b in 1..=6usize {
                    let general = lift(sym_mukai(r, s, g, b, false))?;
                    let spherical = lift(sym_mukai(r, s, g, b, true))?;
                    ensure(general == spherical, || {
                        format!("r={r} s={s} b={b}: general {general} vs spherical {spherical}")
                    })?;
                }
            }
        }
        Ok("pairing, b = 1 identity, 216 spherical agreements".into())
    }

    fn structural(&self) -> Check {
        let field = FieldConfig::Rational;
        for n in 1..=6 {
            for q in 0..=4 {
                for (hi, lo) in [(1, 2), (2, 3)] {
                    let outer = lift((self.delta)(hi, q + 1, n, field))?;
                    let inner = lift((self.delta)(lo, q, n, field))?;
                    let composite = lift(outer.mul(&inner))?;
                    ensure(composite.is_zero(), || {
                        format!("complex property violated: delta_{hi} after delta_{lo} at n={n} q={q}")
                    })?;
                }
            }
        }

        let (instances, pairs) = if self.full() { (50, 20) } else { (15, 6) };
        let mut rng = SplitMix64::new(0x6b6f737a);
        for i in 0..instances {
            let n = 2 + rng.below(4) as usize;
            let m = rng.below(binomial(n, 2) as u64 + 1) as usize;
            let q = rng.below(4) as usize;
            let field = if n <= 4 { FieldConfig::Rational } else { FieldConfig::Prime(DEFAULT_PRIME) };
            let k = lift(random_subspace(n, m, field, rng.next_u64()))?;
            let (a, b) = (wq_dimension(&k, q), wq_dimension_presentation(&k, q));
            ensure(a == b, || format!("instance {i} (n={n} m={m} q={q}): routes give {a} and {b}"))?;
            let w0 = wq_dimension(&k, 0);
            ensure(w0 == binomial(n, 2) - m, || format!("instance {i}: W_0 = {w0}, m = {m}"))?;
        }

        for i in 0..pairs {
            let n = 3 + rng.below(3) as usize;
            let width = binomial(n, 2);
            let m = rng.below(width as u64) as usize;
            let field = if n <= 4 { FieldConfig::Rational } else { FieldConfig::Prime(DEFAULT_PRIME) };
            let k = lift(random_subspace(n, m, field, rng.next_u64()))?;
            let extra_rows = 1 + rng.below((width - m) as u64) as usize;
            let extra = lift(random_subspace(n, extra_rows, field, rng.next_u64()))?;
            let bigger = lift(k.extended(extra.basis()))?;
            ensure(lift(k.is_contained_in(&bigger))?, || format!("pair {i}: extension lost K"))?;
            for q in 0..=3 {
                let (small, large) = (wq_dimension(&k, q), wq_dimension(&bigger, q));
                ensure(small >= large, || format!("pair {i} (n={n}) q={q}: {small} < {large}"))?;
            }
        }
        Ok(format!("complex property, {instances} dual-route instances, {pairs} monotone pairs"))
    }
}

/// Convenience wrapper used by the command line.
pub fn run(level: Level) -> Vec<Outcome> {
    Suite::new(level).run_all()
}

/// A corrupted differential: every entry of `δ_2` set to `+1`.
pub fn mutated_delta(p: usize, q: usize, n: usize, field: FieldConfig) -> Result<SparseMatrix> {
    let d = delta_matrix(p, q, n, field)?;
    if p != 2 {
        return Ok(d);
    }
    let entries: Vec<_> = d.entries().map(|(r, c, _)| (r, c, field.from_i64(1))).collect();
    SparseMatrix::from_triplets(d.rows(), d.cols(), field, entries)
}
