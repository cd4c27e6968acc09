//! Point counts of `P^m` over `F_{q^r}`, closed-point counts by Möbius inversion, and
//! truncated Euler products `prod_{e <= r} (1 - q^{-se})^{a_e}` for the inverse zeta value.
//!
//! Products are exact rationals while the numbers stay moderate. Past that the exponents
//! `a_e` grow like `q^{me}/e` and an exact numerator would need billions of bits, so the
//! product is carried as a rigorous fixed-point enclosure with directed rounding.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported truncation.
pub const MAX_TRUNCATION: u32 = 32;

/// Exact products are abandoned once their denominators would exceed this many bits.
pub const EXACT_BITS_LIMIT: u64 = 1 << 18;

const GUARD_BITS: u64 = 192;

/// `N_r = #P^m(F_{q^r}) = sum_{i=0}^m q^{ri}` for `r = 1..=big_r`.
pub fn point_counts(m: usize, q: u64, big_r: u32) -> Result<Vec<BigUint>> {
    if big_r == 0 {
        return Err(Error::InvalidParameter(
            "truncation must be at least 1".into(),
        ));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not a field size"
        )));
    }
    let q = BigUint::from(q);
    Ok((1..=big_r)
        .map(|r| {
            let qr = q.pow(r);
            let mut acc = BigUint::zero();
            let mut t = BigUint::one();
            for _ in 0..=m {
                acc += &t;
                t *= &qr;
            }
            acc
        })
        .collect())
}

pub fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `a_e = (1/e) sum_{d | e} mu(d) N_{e/d}`; `counts[r - 1] = N_r`.
pub fn closed_point_counts(counts: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut out = Vec::with_capacity(counts.len());
    for e in 1..=counts.len() as u32 {
        let mut acc = BigInt::zero();
        for d in (1..=e).filter(|d| e % d == 0) {
            let term = BigInt::from(counts[(e / d - 1) as usize].clone());
            match mobius(d) {
                1 => acc += term,
                -1 => acc -= term,
                _ => {}
            }
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(e));
        if !rem.is_zero() {
            return Err(Error::InconsistentCounts(format!(
                "a_{e} is not an integer"
            )));
        }
        let a = quo
            .to_biguint()
            .ok_or_else(|| Error::InconsistentCounts(format!("a_{e} is negative")))?;
        out.push(a);
    }
    Ok(out)
}

/// Point counts and closed-point counts of `P^m` over `F_q` up to a truncation bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTable {
    q: u64,
    m: usize,
    n: Vec<BigUint>,
    a: Vec<BigUint>,
}

impl ZetaTable {
    pub fn new(m: usize, q: u64, big_r: u32) -> Result<ZetaTable> {
        if big_r > MAX_TRUNCATION {
            return Err(Error::TruncationTooLarge {
                requested: big_r,
                supported: MAX_TRUNCATION,
            });
        }
        let n = point_counts(m, q, big_r)?;
        let a = closed_point_counts(&n)?;
        let t = ZetaTable { q, m, n, a };
        t.check_consistency()?;
        Ok(t)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn truncation(&self) -> u32 {
        self.n.len() as u32
    }

    /// `N_r`, 1-based.
    pub fn n(&self, r: u32) -> &BigUint {
        &self.n[r as usize - 1]
    }

    /// `a_e`, 1-based.
    pub fn a(&self, e: u32) -> &BigUint {
        &self.a[e as usize - 1]
    }

    pub fn point_counts(&self) -> &[BigUint] {
        &self.n
    }

    pub fn closed_point_counts(&self) -> &[BigUint] {
        &self.a
    }

    /// Checks `N_r = sum_{e | r} e a_e` for every `r` in the table.
    pub fn check_consistency(&self) -> Result<()> {
        for r in 1..=self.truncation() {
            let sum: BigUint = (1..=r)
                .filter(|e| r % e == 0)
                .map(|e| self.a(e) * BigUint::from(e))
                .sum();
            if &sum != self.n(r) {
                return Err(Error::InconsistentCounts(format!(
                    "N_{r} differs from sum of e*a_e"
                )));
            }
        }
        Ok(())
    }
}

/// A truncated product: exact, or enclosed in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductValue {
    Exact(BigRational),
    Enclosure { lo: BigRational, hi: BigRational },
}

impl ProductValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, ProductValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            ProductValue::Exact(v) => Some(v),
            ProductValue::Enclosure { .. } => None,
        }
    }

    pub fn lower(&self) -> &BigRational {
        match self {
            ProductValue::Exact(v) => v,
            ProductValue::Enclosure { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            ProductValue::Exact(v) => v,
            ProductValue::Enclosure { hi, .. } => hi,
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    /// Largest distance from `x` to any value the enclosure admits.
    pub fn max_distance(&self, x: &BigRational) -> BigRational {
        let d1 = (self.lower() - x).abs();
        let d2 = (self.upper() - x).abs();
        d1.max(d2)
    }

    pub fn to_f64(&self) -> f64 {
        let lo = self.lower().to_f64().unwrap_or(f64::NAN);
        let hi = self.upper().to_f64().unwrap_or(f64::NAN);
        (lo + hi) / 2.0
    }

    /// The exact fraction, or `lo..hi` to 30 significant digits for an enclosure.
    pub fn fraction_string(&self) -> String {
        match self {
            ProductValue::Exact(v) => v.to_string(),
            ProductValue::Enclosure { lo, hi } => {
                format!("{}..{}", decimal(lo, 30), decimal(hi, 30))
            }
        }
    }

    /// 12 significant digits; an enclosure whose ends round alike prints as one number.
    pub fn decimal_string(&self) -> String {
        let lo = decimal(self.lower(), DECIMAL_DIGITS);
        let hi = decimal(self.upper(), DECIMAL_DIGITS);
        if lo == hi {
            lo
        } else {
            format!("{lo}..{hi}")
        }
    }
}

pub const DECIMAL_DIGITS: usize = 12;

fn round_half_even(x: &BigRational) -> BigInt {
    let fl = x.floor();
    let frac = x - &fl;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = fl.to_integer();
    if frac > half || (frac == half && base.is_odd()) {
        base + 1
    } else {
        base
    }
}

/// Fixed-point rendering with `sig` significant digits, rounding half to even.
pub fn decimal(x: &BigRational, sig: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x < &BigRational::zero();
    let ax = x.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut exp: i64 = 0;
    let mut t = ax.clone();
    while t >= ten {
        t /= &ten;
        exp += 1;
    }
    while t < BigRational::one() {
        t *= &ten;
        exp -= 1;
    }
    let shift = sig as i64 - 1 - exp;
    let scale = BigRational::from_integer(BigInt::from(10).pow(shift.unsigned_abs() as u32));
    let scaled = if shift >= 0 {
        &ax * &scale
    } else {
        &ax / &scale
    };
    let mut n = round_half_even(&scaled);
    if n == BigInt::from(10).pow(sig as u32) {
        n /= 10;
        exp += 1;
    }
    let digits = n.to_string();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if exp as usize >= sig - 1 {
        format!("{}{}", digits, "0".repeat(exp as usize + 1 - sig))
    } else {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn check_region(m: usize, s: u32) -> Result<()> {
    if (s as usize) < m + 1 {
        return Err(Error::DivergentRegion {
            s,
            min: m as u32 + 1,
        });
    }
    Ok(())
}

/// Fixed-point numbers `x / 2^prec`.
struct Fixed {
    prec: u64,
}

impl Fixed {
    fn mul_floor(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) >> self.prec
    }

    fn mul_ceil(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let prod = a * b;
        let fl = &prod >> self.prec;
        if (&fl << self.prec) == prod {
            fl
        } else {
            fl + 1u32
        }
    }

    fn pow(&self, base: &BigUint, exp: &BigUint, up: bool) -> BigUint {
        let mut acc = BigUint::one() << self.prec;
        for i in (0..exp.bits()).rev() {
            acc = if up {
                self.mul_ceil(&acc, &acc)
            } else {
                self.mul_floor(&acc, &acc)
            };
            if exp.bit(i) {
                acc = if up {
                    self.mul_ceil(&acc, base)
                } else {
                    self.mul_floor(&acc, base)
                };
            }
        }
        acc
    }

    fn encode(&self, x: &BigRational, up: bool) -> BigUint {
        let scaled = x * BigRational::from_integer(BigInt::one() << self.prec);
        let v = if up { scaled.ceil() } else { scaled.floor() };
        v.to_integer().to_biguint().expect("nonnegative")
    }

    fn to_rational(&self, x: &BigUint) -> BigRational {
        BigRational::new(BigInt::from(x.clone()), BigInt::one() << self.prec)
    }
}

/// All partial products `prod_{e <= r} (1 - q^{-se})^{a_e}` for `r = 0..=r_max`.
pub fn partial_products(table: &ZetaTable, s: u32, r_max: u32) -> Result<Vec<ProductValue>> {
    check_region(table.m, s)?;
    if r_max > table.truncation() {
        return Err(Error::TruncationTooLarge {
            requested: r_max,
            supported: table.truncation(),
        });
    }
    let q = BigUint::from(table.q);
    let qbits = 64 - (table.q - 1).leading_zeros() as u64;
    let mut out = vec![ProductValue::Exact(BigRational::one())];
    let mut exact = Some(BigRational::one());
    let mut exact_bits: u64 = 0;
    let max_factor_bits = s as u64 * r_max as u64 * qbits;
    let fx = Fixed {
        prec: GUARD_BITS + max_factor_bits + 64,
    };
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    for e in 1..=r_max {
        let a = table.a(e);
        let qse = q.pow(s * e);
        if let Some(v) = &exact {
            let cost = a
                .to_u64()
                .and_then(|a| a.checked_mul(s as u64 * e as u64 * qbits));
            match cost {
                Some(c) if exact_bits + c <= EXACT_BITS_LIMIT => {
                    exact_bits += c;
                    let ae = a.to_u32().expect("bounded by the bit limit");
                    let num = BigInt::from(&qse - 1u32).pow(ae);
                    let den = BigInt::from(qse.clone()).pow(ae);
                    let next = v * BigRational::new(num, den);
                    out.push(ProductValue::Exact(next.clone()));
                    exact = Some(next);
                    continue;
                }
                _ => {
                    lo = fx.encode(v, false);
                    hi = fx.encode(v, true);
                    exact = None;
                }
            }
        }
        let factor = BigRational::new(BigInt::from(&qse - 1u32), BigInt::from(qse));
        let f_lo = fx.encode(&factor, false);
        let f_hi = fx.encode(&factor, true);
        lo = fx.mul_floor(&lo, &fx.pow(&f_lo, a, false));
        hi = fx.mul_ceil(&hi, &fx.pow(&f_hi, a, true));
        out.push(ProductValue::Enclosure {
            lo: fx.to_rational(&lo),
            hi: fx.to_rational(&hi),
        });
    }
    Ok(out)
}

/// `prod_{e <= r} (1 - q^{-se})^{a_e}`; requires `s >= m + 1`.
pub fn zeta_inverse_truncated(table: &ZetaTable, s: u32, r: u32) -> Result<ProductValue> {
    Ok(partial_products(table, s, r)?
        .pop()
        .expect("at least the empty product"))
}

/// `prod_{i=0}^m (1 - q^{i-s})`, the full inverse zeta value of `P^m` at `s`.
pub fn zeta_inverse_exact_pm(m: usize, q: u64, s: u32) -> Result<BigRational> {
    check_region(m, s)?;
    let q = BigInt::from(q);
    let mut acc = BigRational::one();
    for i in 0..=m as u32 {
        let d = q.pow(s - i);
        acc *= BigRational::new(&d - 1, d);
    }
    Ok(acc)
}

/// `1 - prod_{e > r} (1 - q^{(m-s)e})`, a numerical bound on the truncation gap.
pub fn tail_bound(m: usize, q: u64, s: u32, r: u32) -> Result<f64> {
    check_region(m, s)?;
    let x = (q as f64).powi(m as i32 - s as i32);
    let mut log = 0.0f64;
    let mut e = r + 1;
    loop {
        let t = x.powi(e as i32);
        if t < 1e-300 {
            break;
        }
        log += (-t).ln_1p();
        e += 1;
    }
    Ok(-log.exp_m1())
}

/// One CSV row per degree: `e`, `N_e`, `a_e`, and the partial product through `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaRow {
    pub e: u32,
    pub n: BigUint,
    pub a: BigUint,
    pub partial: ProductValue,
}

pub fn zeta_rows(table: &ZetaTable, s: u32, r: u32) -> Result<Vec<ZetaRow>> {
    let products = partial_products(table, s, r)?;
    Ok((1..=r)
        .map(|e| ZetaRow {
            e,
            n: table.n(e).clone(),
            a: table.a(e).clone(),
            partial: products[e as usize].clone(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_counts() {
        let n = point_counts(2, 2, 3).unwrap();
        assert_eq!(n, vec![7u32.into(), 21u32.into(), 73u32.into()]);
        assert_eq!(point_counts(1, 3, 1).unwrap(), vec![BigUint::from(4u32)]);
        let a = closed_point_counts(&point_counts(1, 2, 3).unwrap()).unwrap();
        assert_eq!(a, vec![3u32.into(), 1u32.into(), 2u32.into()]);
        let a = closed_point_counts(&point_counts(2, 2, 2).unwrap()).unwrap();
        assert_eq!(a, vec![7u32.into(), 7u32.into()]);
    }

    #[test]
    fn inconsistent_counts_rejected() {
        let bad = vec![BigUint::from(3u32), BigUint::from(4u32)];
        assert!(matches!(
            closed_point_counts(&bad),
            Err(Error::InconsistentCounts(_))
        ));
        let neg = vec![BigUint::from(5u32), BigUint::from(3u32)];
        assert!(matches!(
            closed_point_counts(&neg),
            Err(Error::InconsistentCounts(_))
        ));
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &v) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u32 + 1), v);
        }
    }

    #[test]
    fn first_products() {
        let t = ZetaTable::new(2, 2, 4).unwrap();
        let p1 = zeta_inverse_truncated(&t, 3, 1).unwrap();
        assert_eq!(p1.exact(), Some(&frac(823543, 2097152)));
        assert_eq!(
            zeta_inverse_truncated(&t, 3, 0).unwrap().exact(),
            Some(&BigRational::one())
        );
        assert!(matches!(
            zeta_inverse_truncated(&t, 2, 1),
            Err(Error::DivergentRegion { .. })
        ));
        assert!(matches!(
            ZetaTable::new(2, 2, 33),
            Err(Error::TruncationTooLarge { .. })
        ));
    }

    #[test]
    fn exact_values() {
        assert_eq!(zeta_inverse_exact_pm(2, 2, 3).unwrap(), frac(21, 64));
        assert_eq!(zeta_inverse_exact_pm(1, 5, 2).unwrap(), frac(96, 125));
    }

    #[test]
    fn truncation_sixteen_is_close() {
        let t = ZetaTable::new(2, 2, 16).unwrap();
        let v = zeta_inverse_truncated(&t, 3, 16).unwrap();
        let target = frac(21, 64);
        assert!(!v.is_exact());
        assert!(v.lower() >= &target);
        assert!(v.max_distance(&target) < frac(1, 10_000));
    }

    #[test]
    fn products_decrease() {
        let t = ZetaTable::new(2, 2, 12).unwrap();
        let ps = partial_products(&t, 3, 12).unwrap();
        for w in ps.windows(2) {
            assert!(w[1].upper() <= w[0].upper());
            assert!(w[1].lower() <= w[0].lower());
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&frac(21, 64), 12), "0.328125000000");
        assert_eq!(decimal(&frac(823543, 2097152), 12), "0.392695903778");
        assert_eq!(decimal(&BigRational::one(), 12), "1.00000000000");
        assert_eq!(decimal(&frac(1, 8), 2), "0.12");
        assert_eq!(decimal(&frac(3, 8), 2), "0.38");
        assert_eq!(decimal(&frac(-5, 2), 1), "-2");
        assert_eq!(decimal(&frac(12345, 1), 3), "12300");
        assert_eq!(decimal(&frac(9999, 10000), 3), "1.00");
    }
}
