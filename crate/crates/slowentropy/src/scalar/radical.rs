//! Exact arithmetic on sums of rational multiples of integer radicals.
//!
//! Every ball weight is `n^{-p/q}` for an order `n` and a reduced rational
//! exponent `p/q`. Writing `n^p = k^q * m` with `m` free of q-th powers gives
//! the normal form `(1/k) * m^{-1/q}`. Sums of such terms, with all radicands
//! kept q-th-power free, are a canonical representation: q-th roots of
//! distinct q-th-power-free integers are linearly independent over the
//! rationals, so two sums are equal exactly when their term maps coincide.
//! Comparison of unequal sums is decided by interval refinement, which always
//! terminates because the difference is a nonzero real.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{BigRational, BigUint, One, Signed, Zero};
use num_traits::ToPrimitive;

use super::SRatio;

/// Sorted prime factorization of a radicand; exponents lie in `[1, root)`.
type RadKey = Vec<(u64, u32)>;

/// `sum of coeff * radicand^{-1/root}` with canonical radicands.
#[derive(Debug, Clone)]
pub struct Radical {
    root: u32,
    terms: BTreeMap<RadKey, BigRational>,
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn key_radicand(key: &RadKey) -> BigUint {
    let mut m = BigUint::one();
    for &(p, e) in key {
        m *= BigUint::from(p).pow(e);
    }
    m
}

impl Radical {
    pub fn zero() -> Self {
        Radical {
            root: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_big_rational(BigRational::one())
    }

    pub fn from_big_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(vec![], r);
        }
        Radical { root: 1, terms }
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_big_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `(1/order)^s` in normal form.
    pub fn ball_weight(order: u64, s: SRatio) -> Self {
        assert!(order >= 1, "ball order must be positive");
        let (p, q) = (*s.numer(), *s.denom() as u32);
        if p == 0 || order == 1 {
            return Self::one();
        }
        let mut key: RadKey = vec![];
        let mut whole = BigUint::one();
        for (prime, e) in factor_u64(order) {
            let total = e as u64 * p;
            let rem = (total % q as u64) as u32;
            let div = total / q as u64;
            if rem > 0 {
                key.push((prime, rem));
            }
            if div > 0 {
                whole *= BigUint::from(prime).pow(div as u32);
            }
        }
        let coeff = BigRational::new(BigInt::one(), BigInt::from(whole));
        let mut terms = BTreeMap::new();
        terms.insert(key, coeff);
        Radical { root: q, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the value is plain rational (single radicand `1` term).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&vec![]) {
                return Some(c.clone());
            }
        }
        None
    }

    fn lift(&self, new_root: u32) -> Self {
        if new_root == self.root {
            return self.clone();
        }
        debug_assert_eq!(new_root % self.root, 0);
        let k = new_root / self.root;
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| {
                let lifted: RadKey = key.iter().map(|&(p, e)| (p, e * k)).collect();
                (lifted, c.clone())
            })
            .collect();
        Radical {
            root: new_root,
            terms,
        }
    }

    fn common_root(a: &Self, b: &Self) -> (Self, Self) {
        if a.root == b.root {
            (a.clone(), b.clone())
        } else {
            let l = num::integer::lcm(a.root, b.root);
            (a.lift(l), b.lift(l))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common_root(self, other);
        for (key, c) in b.terms {
            let entry = a.terms.entry(key).or_insert_with(BigRational::zero);
            *entry += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Radical {
            root: self.root,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Radical {
            root: self.root,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * factor))
                .collect(),
        }
    }

    pub fn scale_u64(&self, factor: u64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(factor)))
    }

    /// Outward rational enclosure of `radicand^{-1/root}` at `bits` precision.
    fn term_enclosure(key: &RadKey, root: u32, bits: u32) -> (BigRational, BigRational) {
        if key.is_empty() {
            return (BigRational::one(), BigRational::one());
        }
        let m = key_radicand(key);
        // x <= (m * 2^(root*bits))^(1/root) < x + 1
        let scaled = &m << (root as u64 * bits as u64);
        let x = scaled.nth_root(root);
        let lo = BigRational::new(
            BigInt::one() << bits,
            BigInt::from(&x + BigUint::one()),
        );
        let hi = BigRational::new(BigInt::one() << bits, BigInt::from(x));
        (lo, hi)
    }

    fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (key, c) in &self.terms {
            let (tlo, thi) = Self::term_enclosure(key, self.root, bits);
            if c.is_negative() {
                lo += c * &thi;
                hi += c * &tlo;
            } else {
                lo += c * &tlo;
                hi += c * &thi;
            }
        }
        (lo, hi)
    }

    /// Sign of the exact value. Structural zero is caught first, so interval
    /// refinement only runs on provably nonzero values and terminates.
    pub fn sign(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            let c = self.terms.values().next().unwrap();
            return if c.is_negative() {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        // float fast path with a conservative error margin
        let mut acc = 0f64;
        let mut mag = 0f64;
        for (key, c) in &self.terms {
            let m = key_radicand(key).to_f64().unwrap_or(f64::INFINITY);
            let t = m.powf(-1.0 / self.root as f64);
            let cf = c.to_f64().unwrap_or(f64::NAN);
            if cf.is_finite() && t.is_finite() {
                acc += cf * t;
                mag += (cf * t).abs();
            } else {
                mag = f64::INFINITY;
            }
        }
        if mag.is_finite() && acc.abs() > mag * 1e-11 + 1e-300 {
            return if acc > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let mut bits = 64u32;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
            assert!(
                bits <= 1 << 16,
                "interval refinement failed to separate distinct radical sums"
            );
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.enclosure(96);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Rational lower bound within `2^-bits` of the value (for nonnegative values).
    pub fn rational_lower_bound(&self, bits: u32) -> BigRational {
        let (lo, _) = self.enclosure(bits);
        lo
    }

    /// Deterministic dyadic approximation `num / 2^bits`, rounded down.
    pub fn dyadic_approx(&self, bits: u32) -> BigRational {
        if self.terms.is_empty() {
            return BigRational::zero();
        }
        let (lo, _) = self.enclosure(bits + 8);
        let scaled = lo * BigRational::from_integer(BigInt::one() << bits);
        BigRational::new(scaled.floor().to_integer(), BigInt::one() << bits)
    }
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common_root(self, other);
        a.terms == b.terms
    }
}

impl Eq for Radical {}

impl PartialOrd for Radical {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radical {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl std::ops::Add for Radical {
    type Output = Radical;
    fn add(self, rhs: Radical) -> Radical {
        Radical::add(&self, &rhs)
    }
}

impl num_traits::Zero for Radical {
    fn zero() -> Self {
        Radical::zero()
    }
    fn is_zero(&self) -> bool {
        Radical::is_zero(self)
    }
}

impl std::fmt::Display for Radical {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if key.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{}^(-1/{})", key_radicand(key), self.root)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::Ratio;

    fn s(p: u64, q: u64) -> SRatio {
        Ratio::new(p, q)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normal_forms() {
        // 4^(-1/2) = 1/2 exactly
        let w = Radical::ball_weight(4, s(1, 2));
        assert_eq!(w.as_rational(), Some(rat(1, 2)));
        // 8^(-1/2) = (1/2) * 2^(-1/2)
        let w = Radical::ball_weight(8, s(1, 2));
        assert!(w.as_rational().is_none());
        let two_inv_sqrt = Radical::ball_weight(2, s(1, 2));
        assert_eq!(w, two_inv_sqrt.scale(&rat(1, 2)));
        // 12^(-3/5) = (1/2) * 54^(-1/5)
        let w = Radical::ball_weight(12, s(3, 5));
        let other = Radical::ball_weight(54, s(1, 5)).scale(&rat(1, 2));
        assert_eq!(w, other);
    }

    #[test]
    fn cross_root_equality() {
        // 2^(-1/2) built at root 2 equals 4^(-1/4) built at root 4
        let a = Radical::ball_weight(2, s(1, 2));
        let b = Radical::ball_weight(4, s(1, 4));
        assert_eq!(a, b);
        assert_eq!(a.partial_cmp(&b), Some(Ordering::Equal));
    }

    #[test]
    fn ordering_against_f64() {
        let cases = [
            (3u64, s(1, 2)),
            (5, s(3, 5)),
            (7, s(1, 1)),
            (10, s(11, 10)),
            (49, s(1, 2)),
            (100, s(3, 2)),
        ];
        for &(n, sv) in &cases {
            for &(m, sw) in &cases {
                let a = Radical::ball_weight(n, sv);
                let b = Radical::ball_weight(m, sw);
                let fa = (n as f64).powf(-(*sv.numer() as f64) / *sv.denom() as f64);
                let fb = (m as f64).powf(-(*sw.numer() as f64) / *sw.denom() as f64);
                if (fa - fb).abs() > 1e-9 {
                    assert_eq!(a.partial_cmp(&b), fa.partial_cmp(&fb), "{n}^-{sv} vs {m}^-{sw}");
                }
            }
        }
    }

    #[test]
    fn sums_cancel_structurally() {
        let a = Radical::ball_weight(3, s(1, 2))
            .add(&Radical::ball_weight(5, s(1, 2)))
            .add(&Radical::ball_weight(8, s(1, 2)));
        let b = Radical::ball_weight(8, s(1, 2))
            .add(&Radical::ball_weight(5, s(1, 2)))
            .add(&Radical::ball_weight(3, s(1, 2)));
        assert!(a.sub(&b).is_zero());
        assert_eq!(a.sign(), Ordering::Greater);
    }

    #[test]
    fn near_ties_resolve_exactly() {
        // 2 * 8^(-1/2) = 2^(-1/2) * 2^(1/2) * 2^(-1/2)... compare against 2^(-1/2):
        // 2 * (1/2) * 2^(-1/2) = 2^(-1/2), equal exactly.
        let lhs = Radical::ball_weight(8, s(1, 2)).scale_u64(2);
        let rhs = Radical::ball_weight(2, s(1, 2));
        assert_eq!(lhs, rhs);
        // and a strictly smaller perturbation is detected
        let smaller = lhs.scale(&rat(999_999_999_999, 1_000_000_000_000));
        assert_eq!(smaller.partial_cmp(&rhs), Some(Ordering::Less));
    }

    #[test]
    fn dyadic_bounds() {
        let v = Radical::ball_weight(2, s(1, 2)); // 0.7071...
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let approx = v.dyadic_approx(40).to_f64().unwrap();
        assert!((approx - inv_sqrt2).abs() < 1e-8);
        let lb = v.rational_lower_bound(60);
        assert!(lb.to_f64().unwrap() <= inv_sqrt2);
        assert!(lb.to_f64().unwrap() > inv_sqrt2 - 1e-9);
    }
}
