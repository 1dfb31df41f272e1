//! Closed-form enumerative formulas: divisor degrees, divisor classes as formal
//! combinations of named symbols, Mukai vectors and symmetric-power cohomology.
//!
//! Everything is exact (`BigInt` / `BigRational`); no floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial as int_binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::format_rational;

pub const LAMBDA: &str = "lambda";
pub const PSI_SUM: &str = "psi_sum";
pub const PHI: &str = "phi";
pub const PSI: &str = "psi";
pub const HHAT: &str = "hhat";
pub const C1E: &str = "c1E";
pub const C1F: &str = "c1F";

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(big(x))
}

/// `C(n, k)` for possibly negative arguments; zero outside `0 ≤ k ≤ n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    int_binomial(big(n), big(k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact rational linear combination of named divisor symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalClass {
    terms: BTreeMap<String, BigRational>,
}

impl FormalClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        Self::term(name, BigRational::one())
    }

    pub fn term(name: &str, coefficient: BigRational) -> Self {
        let mut c = Self::zero();
        c.add_term(name, coefficient);
        c
    }

    fn add_term(&mut self, name: &str, coefficient: BigRational) {
        let slot = self.terms.entry(name.to_string()).or_insert_with(BigRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn coefficient(&self, name: &str) -> BigRational {
        self.terms.get(name).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(s, c * k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.terms.iter().map(|(s, c)| (s.as_str(), c))
    }

    /// Replaces `symbol` by `replacement` everywhere.
    pub fn substitute(&self, symbol: &str, replacement: &FormalClass) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            if s == symbol {
                out = out + replacement.scale(c);
            } else {
                out.add_term(s, c.clone());
            }
        }
        out
    }

    /// Symbol → exact coefficient text, for reports.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.terms.iter().map(|(s, c)| (s.clone(), format_rational(c))).collect()
    }
}

impl Add for FormalClass {
    type Output = FormalClass;
    fn add(mut self, rhs: FormalClass) -> FormalClass {
        for (s, c) in rhs.terms {
            self.add_term(&s, c);
        }
        self
    }
}

impl Sub for FormalClass {
    type Output = FormalClass;
    fn sub(self, rhs: FormalClass) -> FormalClass {
        self + (-rhs)
    }
}

impl Neg for FormalClass {
    type Output = FormalClass;
    fn neg(self) -> FormalClass {
        self.scale(&rat(-1))
    }
}

impl Mul<&FormalClass> for &BigRational {
    type Output = FormalClass;
    fn mul(self, rhs: &FormalClass) -> FormalClass {
        rhs.scale(self)
    }
}

impl fmt::Display for FormalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let text = format_rational(&c.abs());
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{text}·{s}")?,
                (0, false) => write!(f, "{text}·{s}")?,
                (_, true) => write!(f, " - {text}·{s}")?,
                (_, false) => write!(f, " + {text}·{s}")?,
            }
        }
        Ok(())
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

/// Degree of the Koszul divisor: `C(2n−4, n−1) = dim Sym^(n−3) V`.
pub fn koszul_divisor_degree(n: usize) -> Result<BigInt> {
    require(n >= 3, || format!("n must be at least 3, got {n}"))?;
    let n = n as i64;
    Ok(binom(2 * n - 4, n - 1))
}

/// Degree of the Chow form of the Grassmannian of lines: the Catalan number
/// `C_(n−2) = C(2n−4, n−2) / (n−1)`.
pub fn chow_degree(n: usize) -> Result<BigInt> {
    require(n >= 3, || format!("n must be at least 3, got {n}"))?;
    let n = n as i64;
    let num = binom(2 * n - 4, n - 2);
    let den = big(n - 1);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `deg D_Kosz == (n − 2) · deg D_Res`.
pub fn degree_identity(n: usize) -> Result<bool> {
    Ok(koszul_divisor_degree(n)? == big(n as i64 - 2) * chow_degree(n)?)
}

/// Upper bound for `dim W_q` under trivial resonance:
/// `C(n+q−1, q)·(n−2)(n−q−3)/(q+2)` for `q ≤ n−4`, and `0` from `q = n−3` on.
pub fn wq_bound(n: usize, q: usize) -> Result<BigRational> {
    require(n >= 3, || format!("n must be at least 3, got {n}"))?;
    let (n, q) = (n as i64, q as i64);
    if q >= n - 3 {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(binom(n + q - 1, q) * big((n - 2) * (n - q - 3)), big(q + 2)))
}

/// `(2e−4)! / ((e−2)!·(e−1)!)`, the leading coefficient of the resonance class.
fn resonance_coefficient(e: i64) -> BigRational {
    BigRational::new(factorial((2 * e - 4) as u64), factorial((e - 2) as u64) * factorial((e - 1) as u64))
}

/// Class of the resonance divisor of `∧²E → F` with `rk E = e`, `rk F = 2e−3`:
/// `(2e−4)!/((e−2)!(e−1)!) · (c1F − (4e−6)/e · c1E)`.
pub fn resonance_class(e: usize, c1e: &FormalClass, c1f: &FormalClass) -> Result<FormalClass> {
    require(e >= 3, || format!("e must be at least 3, got {e}"))?;
    let e = e as i64;
    let lead = resonance_coefficient(e);
    let slope = BigRational::new(big(4 * e - 6), big(e));
    Ok(c1f.scale(&lead) - c1e.scale(&(&lead * &slope)))
}

/// The same class assembled term by term from first Chern classes of
/// `F ⊗ Sym^(e−3)E`, `E ⊗ Sym^(e−2)E` and `Sym^(e−1)E`, then divided by `e − 2`.
pub fn resonance_class_from_proof(e: usize, c1e: &FormalClass, c1f: &FormalClass) -> Result<FormalClass> {
    require(e >= 4, || format!("e must be at least 4, got {e}"))?;
    let e = e as i64;
    let f_coeff = binom(2 * e - 4, e - 3);
    let e_coeff = big(2 * e - 3) * binom(2 * e - 4, e - 4) - binom(2 * e - 3, e - 2) - big(e) * binom(2 * e - 3, e - 3)
        + binom(2 * e - 2, e - 2);
    let total = c1f.scale(&BigRational::from_integer(f_coeff)) + c1e.scale(&BigRational::from_integer(e_coeff));
    Ok(total.scale(&BigRational::new(big(1), big(e - 2))))
}

/// Class of the canonical-pencil ramification divisor in genus `g`, over the
/// symbols `lambda` and `psi_sum` (the symmetric sum of the cotangent classes).
pub fn canonical_pencil_class(g: usize) -> Result<FormalClass> {
    require(g >= 3, || format!("g must be at least 3, got {g}"))?;
    let g = g as i64;
    let lead = resonance_coefficient(g);
    let lambda = &lead * &BigRational::new(big(-2 * (2 * g - 3)), big(g));
    Ok(FormalClass::term(LAMBDA, lambda) + FormalClass::term(PSI_SUM, lead * rat(3)))
}

/// First Chern classes for the canonical-pencil case: `c1(E) = λ`, `c1(F) = 3Σψ`.
pub fn canonical_pencil_inputs() -> (FormalClass, FormalClass) {
    (FormalClass::symbol(LAMBDA), FormalClass::term(PSI_SUM, rat(3)))
}

/// `(2r+1)! / (r!·(r+2)!) · ĥ`. Not integral for every `r`.
pub fn voisin_class(r: usize) -> Result<FormalClass> {
    require(r >= 1, || "r must be at least 1".to_string())?;
    let coeff = BigRational::new(factorial(2 * r as u64 + 1), factorial(r as u64) * factorial(r as u64 + 2));
    Ok(FormalClass::term(HHAT, coeff))
}

/// Chern class inputs on the Fourier–Mukai partner for genus `2r+1`:
/// `c1(E) = (3r+2)/2·φ − ψ/2` and `c1(F) = (2r+1)·φ`.
pub fn voisin_inputs(r: usize) -> (FormalClass, FormalClass) {
    let r = r as i64;
    let c1e = FormalClass::term(PHI, BigRational::new(big(3 * r + 2), big(2)))
        + FormalClass::term(PSI, BigRational::new(big(-1), big(2)));
    let c1f = FormalClass::term(PHI, rat(2 * r + 1));
    (c1e, c1f)
}

/// Rewrites a class in `{φ, ψ}` over `{φ, ĥ}` using `ĥ = ψ − 2r·φ`.
pub fn rewrite_in_hhat(class: &FormalClass, r: usize) -> FormalClass {
    let psi = FormalClass::symbol(HHAT) + FormalClass::term(PHI, rat(2 * r as i64));
    class.substitute(PSI, &psi)
}

/// Resonance class with the Voisin inputs, expressed in `{φ, ĥ}`.
pub fn voisin_class_derived(r: usize) -> Result<FormalClass> {
    let (c1e, c1f) = voisin_inputs(r);
    Ok(rewrite_in_hhat(&resonance_class(r + 2, &c1e, &c1f)?, r))
}

/// Mukai vector `(rank, c·L, s)` on a K3 surface with `L² = 2g − 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MukaiVector {
    #[serde(serialize_with = "ser_rational")]
    pub rank: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub c: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub s: BigRational,
    pub genus: i64,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

impl MukaiVector {
    pub fn new(rank: i64, c: i64, s: i64, genus: i64) -> Self {
        MukaiVector { rank: rat(rank), c: rat(c), s: rat(s), genus }
    }

    pub fn l_squared(&self) -> i64 {
        2 * self.genus - 2
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}L, {})", format_rational(&self.rank), format_rational(&self.c), format_rational(&self.s))
    }
}

/// `v·w = v1·w1 − v2·w0 − v0·w2`, with `v1·w1 = c_v c_w L²`.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector) -> Result<BigRational> {
    if v.genus != w.genus {
        return Err(Error::GenusMismatch(v.genus, w.genus));
    }
    Ok(&v.c * &w.c * rat(v.l_squared()) - &v.s * &w.rank - &v.rank * &w.s)
}

/// Mukai vector of `Sym^b E` for `v(E) = (r, L, s)` on a genus-`g` K3 surface.
/// With `spherical`, uses the simplified formula valid when `g = rs`.
pub fn sym_mukai(r: usize, s: i64, g: i64, b: usize, spherical: bool) -> Result<MukaiVector> {
    require(r >= 1, || "r must be at least 1".to_string())?;
    let (ri, bi) = (r as i64, b as i64);
    if spherical && g != ri * s {
        return Err(Error::InvalidParameter(format!("spherical formula needs g = r·s, got g = {g}, r·s = {}", ri * s)));
    }
    let rank = BigRational::from_integer(binom(ri + bi - 1, bi));
    let c = BigRational::from_integer(binom(ri + bi - 1, ri));
    let third = if spherical {
        BigRational::new(big(bi * bi * s - (bi - 1) * (bi + ri)), big(ri))
    } else {
        let num = bi * bi * (g - ri + s - 1) - bi * (ri * ri + g - s * ri - 1) + ri * (ri + 1);
        BigRational::new(big(num), big(ri * (ri + 1)))
    };
    Ok(MukaiVector { s: &rank * &third, rank, c, genus: g })
}

/// `h^1(Sym^b E)` for the rank-`r` bundle with `v(E) = (r, L, 2)` in genus `2r`:
/// `C(r+b−1, r+1)·r(r−b+1)/b` for `b ≤ r`, zero for `b ≥ r + 1`.
pub fn h1_sym_dim(r: usize, b: usize) -> Result<BigInt> {
    require(r >= 2, || format!("r must be at least 2, got {r}"))?;
    require(b >= 1, || format!("b must be at least 1, got {b}"))?;
    if b > r {
        return Ok(BigInt::zero());
    }
    let (r, b) = (r as i64, b as i64);
    let value = BigRational::new(binom(r + b - 1, r + 1) * big(r * (r - b + 1)), big(b));
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(big(a), big(b))
    }

    fn ce() -> FormalClass {
        FormalClass::symbol(C1E)
    }

    fn cf() -> FormalClass {
        FormalClass::symbol(C1F)
    }

    #[test]
    fn degrees() {
        assert_eq!(koszul_divisor_degree(5).unwrap(), big(15));
        assert_eq!(koszul_divisor_degree(6).unwrap(), big(56));
        assert_eq!(koszul_divisor_degree(3).unwrap(), big(1));
        assert_eq!(chow_degree(5).unwrap(), big(5));
        assert_eq!(chow_degree(6).unwrap(), big(14));
        assert_eq!(chow_degree(3).unwrap(), big(1));
        for n in [3, 5, 6] {
            assert!(degree_identity(n).unwrap());
        }
        assert!(koszul_divisor_degree(2).is_err());
    }

    #[test]
    fn bound_values() {
        assert_eq!(wq_bound(5, 0).unwrap(), rat(3));
        assert_eq!(wq_bound(5, 1).unwrap(), rat(5));
        for n in 3..12 {
            assert!(wq_bound(n, n - 3).unwrap().is_zero());
        }
    }

    #[test]
    fn resonance_class_values() {
        let expect = |a: i64, b: i64| FormalClass::term(C1F, rat(a)) + FormalClass::term(C1E, rat(-b));
        assert_eq!(resonance_class(4, &ce(), &cf()).unwrap(), expect(2, 5));
        assert_eq!(resonance_class(5, &ce(), &cf()).unwrap(), expect(5, 14));
        assert_eq!(resonance_class(3, &ce(), &cf()).unwrap(), expect(1, 2));
        for e in [4, 10, 40] {
            assert_eq!(resonance_class_from_proof(e, &ce(), &cf()).unwrap(), resonance_class(e, &ce(), &cf()).unwrap());
        }
    }

    #[test]
    fn canonical_pencil_values() {
        let c = canonical_pencil_class(4).unwrap();
        assert_eq!(c.coefficient(LAMBDA), rat(-5));
        assert_eq!(c.coefficient(PSI_SUM), rat(6));
        let c = canonical_pencil_class(3).unwrap();
        assert_eq!(c.coefficient(LAMBDA), rat(-2));
        assert_eq!(c.coefficient(PSI_SUM), rat(3));
    }

    #[test]
    fn voisin_values() {
        assert_eq!(voisin_class(5).unwrap().coefficient(HHAT), rat(66));
        assert_eq!(voisin_class(1).unwrap().coefficient(HHAT), rat(1));
        assert_eq!(voisin_class(6).unwrap().coefficient(HHAT), q(429, 2));
        assert_eq!(voisin_class_derived(5).unwrap(), voisin_class(5).unwrap());
    }

    #[test]
    fn mukai_values() {
        for r in 2..6 {
            let v = MukaiVector::new(r, 1, 2, 2 * r);
            assert_eq!(mukai_pairing(&v, &v).unwrap(), rat(-2));
        }
        let v = MukaiVector::new(1, 0, 0, 3);
        let w = MukaiVector::new(0, 0, 1, 3);
        assert_eq!(mukai_pairing(&v, &w).unwrap(), rat(-1));
        assert_eq!(mukai_pairing(&w, &v).unwrap(), rat(-1));
        assert!(matches!(mukai_pairing(&v, &MukaiVector::new(1, 0, 0, 4)), Err(Error::GenusMismatch(3, 4))));
    }

    #[test]
    fn sym_mukai_values() {
        let v = sym_mukai(2, 2, 4, 2, false).unwrap();
        assert_eq!((v.rank.clone(), v.c.clone(), v.s.clone()), (rat(3), rat(3), rat(6)));
        assert_eq!(sym_mukai(2, 2, 4, 2, true).unwrap(), v);
        assert_eq!(sym_mukai(4, 3, 9, 1, false).unwrap(), MukaiVector::new(4, 1, 3, 9));
        assert!(sym_mukai(2, 2, 5, 2, true).is_err());
        // Sym^0 E = O: v(O) = (1, 0, 1)
        assert_eq!(sym_mukai(3, 2, 6, 0, false).unwrap(), MukaiVector::new(1, 0, 1, 6));
    }

    #[test]
    fn h1_values() {
        assert_eq!(h1_sym_dim(3, 2).unwrap(), big(3));
        for r in 2..8 {
            assert!(h1_sym_dim(r, r + 1).unwrap().is_zero());
        }
        assert!(h1_sym_dim(1, 1).is_err());
    }

    #[test]
    fn class_arithmetic_and_display() {
        let c = FormalClass::term(C1F, rat(2)) - FormalClass::term(C1E, rat(5));
        assert_eq!(c.to_string(), "-5·c1E + 2·c1F");
        assert!((c.clone() - c).is_zero());
        let s = FormalClass::symbol(PSI).substitute(PSI, &FormalClass::symbol(HHAT));
        assert_eq!(s, FormalClass::symbol(HHAT));
    }
}
