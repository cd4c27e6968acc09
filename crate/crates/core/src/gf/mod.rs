//! Finite fields `F_{p^n}` realized directly over the prime field.
//!
//! Elements are packed as integers `sum c_i p^i` where `c_i` are the coefficients of the
//! residue class modulo the defining polynomial. Fields up to [`TABLE_LIMIT`] elements
//! carry discrete log tables; larger ones multiply through polynomial reduction.
//!
//! The hot paths (`*_raw`) work on packed `u64` values and trust the caller to keep them
//! in the right field. The [`FieldElem`] API tags every value with its field and
//! rejects mixed operands.

mod poly;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub(crate) use poly::{inv_mod_p, mul_mod_p};

/// Fields with at most this many elements get exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 18;

const MODULUS_SEED: u64 = 0x5eed_f1e1_d000_0001;

/// An element of some [`FieldCtx`], tagged with the identity of that field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    field: u64,
    value: u64,
}

impl FieldElem {
    /// Packed value `sum c_i p^i`.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field_id(&self) -> u64 {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field `F_p[x]/(f)` for a monic irreducible `f` of degree `n`.
pub struct FieldCtx {
    p: u64,
    n: u32,
    order: u64,
    modulus: Vec<u64>,
    id: u64,
    primitive: u64,
    tables: Option<LogTables>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FieldCtx {}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `r` with `q = p^r`, or an error when `q` is not a positive power of `p`.
pub fn log_p(q: u64, p: u64) -> Result<u32> {
    if p < 2 || q < p {
        return Err(Error::NotAPowerOfP { q, p });
    }
    let mut r = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        r += 1;
    }
    if t == 1 {
        Ok(r)
    } else {
        Err(Error::NotAPowerOfP { q, p })
    }
}

fn stable_id(p: u64, modulus: &[u64]) -> u64 {
    let mut h = splitmix(p ^ 0x9e37_79b9_7f4a_7c15);
    for &c in modulus {
        h = splitmix(h ^ c);
    }
    h
}

/// SplitMix64 finalizer, used for stable seed derivation across the crate.
pub fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn cache() -> &'static Mutex<HashMap<(u64, u32), Arc<FieldCtx>>> {
    type Cache = Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the process-wide cache) the field with `p^n` elements.
///
/// The modulus is `x` for `n = 1`; otherwise the first irreducible polynomial produced by a
/// fixed-seed random search, so the same `(p, n)` always yields the same representation.
pub fn make_field(p: u64, n: u32) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    check_order(p, n)?;
    if let Some(f) = cache().lock().unwrap().get(&(p, n)) {
        return Ok(f.clone());
    }
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(MODULUS_SEED ^ splitmix(p) ^ (n as u64));
        loop {
            let mut f: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if f[0] != 0 && poly::is_irreducible(&f, p) {
                break f;
            }
        }
    };
    let ctx = Arc::new(FieldCtx::build(p, n, modulus));
    cache().lock().unwrap().insert((p, n), ctx.clone());
    Ok(ctx)
}

fn check_order(p: u64, n: u32) -> Result<u64> {
    match p.checked_pow(n) {
        Some(o) if o < (1u64 << 62) => Ok(o),
        _ => Err(Error::FieldTooLarge { p, n }),
    }
}

impl FieldCtx {
    /// A field with an explicitly given monic modulus (coefficients low degree first).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::ReducibleModulus);
        }
        let n = (modulus.len() - 1) as u32;
        check_order(p, n)?;
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus);
        }
        if let Ok(cached) = make_field(p, n) {
            if cached.modulus == modulus {
                return Ok(cached);
            }
        }
        Ok(Arc::new(FieldCtx::build(p, n, modulus)))
    }

    fn build(p: u64, n: u32, modulus: Vec<u64>) -> FieldCtx {
        let order = p.pow(n);
        let mut ctx = FieldCtx {
            p,
            n,
            order,
            id: stable_id(p, &modulus),
            modulus,
            primitive: 1,
            tables: None,
        };
        ctx.primitive = ctx.find_primitive();
        if order <= TABLE_LIMIT && order > 2 {
            let len = (order - 1) as usize;
            let mut exp = vec![0u32; len];
            let mut log = vec![0u32; order as usize];
            let mut acc = 1u64;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = acc as u32;
                log[acc as usize] = i as u32;
                acc = ctx.mul_slow(acc, ctx.primitive);
            }
            ctx.tables = Some(LogTables { exp, log });
        }
        ctx
    }

    fn find_primitive(&self) -> u64 {
        let group = self.order - 1;
        let primes = poly::prime_factors(group);
        (1..self.order)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&l| self.pow_slow(g, (group / l) as u128) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// A generator of the multiplicative group (packed).
    pub fn primitive_element(&self) -> u64 {
        self.primitive
    }

    /// Packed value of the class of `x`.
    pub fn generator_raw(&self) -> u64 {
        if self.n == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn elem(&self, value: u64) -> FieldElem {
        assert!(
            value < self.order,
            "packed value {value} out of range for field of order {}",
            self.order
        );
        FieldElem {
            field: self.id,
            value,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    pub fn generator(&self) -> FieldElem {
        self.elem(self.generator_raw())
    }

    /// The image of an integer under `Z -> F_p -> F_{p^n}`.
    pub fn from_int(&self, v: i64) -> FieldElem {
        self.elem(self.int_raw(v))
    }

    pub fn int_raw(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Malformed(format!(
                "coefficient vector {coeffs:?} is not reduced for F_{}^{}",
                self.p, self.n
            )));
        }
        Ok(self.elem(self.pack(coeffs)))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        self.unpack(a.value)
    }

    pub(crate) fn pack(&self, coeffs: &[u64]) -> u64 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub(crate) fn unpack(&self, mut v: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    /// All elements in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |v| self.elem(v))
    }

    fn check(&self, a: FieldElem) -> Result<u64> {
        if a.field == self.id {
            Ok(a.value)
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.add_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.sub_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn neg(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.neg_raw(self.check(a)?)))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.elem(self.mul_raw(self.check(a)?, self.check(b)?)))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let v = self.check(a)?;
        self.inv_raw(v)
            .map(|x| self.elem(x))
            .ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let inv = self.inv(b)?;
        self.mul(a, inv)
    }

    pub fn pow(&self, a: FieldElem, e: u128) -> Result<FieldElem> {
        Ok(self.elem(self.pow_raw(self.check(a)?, e)))
    }

    /// `a^q` for a power `q` of the characteristic.
    pub fn frobenius(&self, a: FieldElem, q: u64) -> Result<FieldElem> {
        let v = self.check(a)?;
        log_p(q, self.p)?;
        Ok(self.elem(self.pow_raw(v, q as u128)))
    }

    // ---- packed arithmetic ----

    #[inline]
    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.n == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.n {
            let s = a % self.p + b % self.p;
            out += if s >= self.p { s - self.p } else { s } * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg_raw(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        if self.n == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut w = 1;
        for _ in 0..self.n {
            let d = a % self.p;
            out += if d == 0 { 0 } else { self.p - d } * w;
            a /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
            let m = self.order - 1;
            return t.exp[(if s >= m { s - m } else { s }) as usize] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.n == 1 {
            return mul_mod_p(a, b, self.p);
        }
        let pa = self.unpack(a);
        let pb = self.unpack(b);
        let r = poly::mul_mod(&pa, &pb, &self.modulus, self.p);
        self.pack(&r)
    }

    fn pow_slow(&self, a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn pow_raw(&self, a: u64, e: u128) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = (self.order - 1) as u128;
        let e = e % group;
        if let Some(t) = &self.tables {
            let l = (t.log[a as usize] as u128 * e) % group;
            return t.exp[l as usize] as u64;
        }
        self.pow_slow(a, e)
    }

    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let m = self.order - 1;
            let l = t.log[a as usize] as u64;
            return Some(t.exp[((m - l) % m) as usize] as u64);
        }
        if self.n == 1 {
            return Some(inv_mod_p(a, self.p));
        }
        Some(self.pow_slow(a, (self.order - 2) as u128))
    }

    /// The unique `p`-th root (inverse of the absolute Frobenius).
    pub fn pth_root_raw(&self, a: u64) -> u64 {
        self.pow_raw(a, (self.order / self.p) as u128)
    }

    /// `a^q` on packed values.
    pub fn frobenius_raw(&self, a: u64, q: u64) -> u64 {
        self.pow_raw(a, q as u128)
    }
}

/// A ring embedding `F_{p^a} -> F_{p^b}` with `a | b`, determined by the image of the
/// source generator (a root of the source modulus in the target).
pub struct Embedding {
    source: Arc<FieldCtx>,
    target: Arc<FieldCtx>,
    generator_image: u64,
    basis_images: Vec<u64>,
    table: Option<Vec<u64>>,
}

impl std::fmt::Debug for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Embedding")
            .field("source_degree", &self.source.n)
            .field("target_degree", &self.target.n)
            .field("generator_image", &self.generator_image)
            .finish()
    }
}

fn eval_modulus_at(target: &FieldCtx, modulus: &[u64], x: u64) -> u64 {
    modulus
        .iter()
        .rev()
        .fold(0, |acc, &c| target.add_raw(target.mul_raw(acc, x), c))
}

impl Embedding {
    /// Finds an embedding by locating the smallest packed root of the source modulus
    /// inside the target field.
    pub fn new(source: Arc<FieldCtx>, target: Arc<FieldCtx>) -> Result<Embedding> {
        if source.p != target.p || !target.n.is_multiple_of(source.n) {
            return Err(Error::NoEmbedding {
                source_degree: source.n,
                target_degree: target.n,
            });
        }
        let image = if source.id == target.id {
            target.generator_raw()
        } else if source.n == 1 {
            0
        } else {
            // the roots lie in the unique subfield of size |source|
            let beta = target.pow_raw(
                target.primitive,
                ((target.order - 1) / (source.order - 1)) as u128,
            );
            let mut x = 1u64;
            let mut best: Option<u64> = None;
            for _ in 0..source.order - 1 {
                if eval_modulus_at(&target, &source.modulus, x) == 0 {
                    best = Some(best.map_or(x, |b| b.min(x)));
                }
                x = target.mul_raw(x, beta);
            }
            best.expect("source modulus splits in the target field")
        };
        Self::with_generator_image(source, target, image)
    }

    fn with_generator_image(
        source: Arc<FieldCtx>,
        target: Arc<FieldCtx>,
        image: u64,
    ) -> Result<Embedding> {
        if eval_modulus_at(&target, &source.modulus, image) != 0 {
            return Err(Error::NoEmbedding {
                source_degree: source.n,
                target_degree: target.n,
            });
        }
        let mut basis_images = Vec::with_capacity(source.n as usize);
        let mut acc = 1u64;
        for _ in 0..source.n {
            basis_images.push(acc);
            acc = target.mul_raw(acc, image);
        }
        let mut emb = Embedding {
            source,
            target,
            generator_image: image,
            basis_images,
            table: None,
        };
        if emb.source.order <= TABLE_LIMIT {
            let table = (0..emb.source.order).map(|v| emb.apply_slow(v)).collect();
            emb.table = Some(table);
        }
        Ok(emb)
    }

    /// `other ∘ self`.
    pub fn compose(&self, other: &Embedding) -> Result<Embedding> {
        if self.target.id != other.source.id {
            return Err(Error::ContextMismatch);
        }
        Self::with_generator_image(
            self.source.clone(),
            other.target.clone(),
            other.apply_raw(self.generator_image),
        )
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.target
    }

    pub fn generator_image(&self) -> FieldElem {
        self.target.elem(self.generator_image)
    }

    fn apply_slow(&self, a: u64) -> u64 {
        let digits = self.source.unpack(a);
        digits
            .iter()
            .zip(&self.basis_images)
            .fold(0, |acc, (&d, &b)| {
                self.target.add_raw(acc, self.target.mul_raw(d, b))
            })
    }

    #[inline]
    pub fn apply_raw(&self, a: u64) -> u64 {
        match &self.table {
            Some(t) => t[a as usize],
            None => self.apply_slow(a),
        }
    }

    pub fn embed(&self, a: FieldElem) -> Result<FieldElem> {
        let v = self.source.check(a)?;
        Ok(self.target.elem(self.apply_raw(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.modulus(), &[0, 1]);
        let a = f5.from_int(3);
        let b = f5.from_int(4);
        assert_eq!(f5.mul(a, b).unwrap(), f5.from_int(2));
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
    }

    #[test]
    fn f4_generator_relation() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let g = f4.generator();
        let g2 = f4.mul(g, g).unwrap();
        assert_eq!(g2, f4.add(g, f4.one()).unwrap());
        assert_eq!(f4.frobenius(g, 2).unwrap(), f4.add(g, f4.one()).unwrap());
    }

    #[test]
    fn f9_exhaustive() {
        let f9 = make_field(3, 2).unwrap();
        for a in f9.elements() {
            if a.is_zero() {
                assert!(matches!(f9.inv(a), Err(Error::DivisionByZero)));
                continue;
            }
            assert_eq!(f9.pow(a, 8).unwrap(), f9.one());
            assert_eq!(f9.mul(f9.inv(a).unwrap(), a).unwrap(), f9.one());
        }
        for a in f9.elements() {
            let twice = f9.frobenius(f9.frobenius(a, 3).unwrap(), 3).unwrap();
            assert_eq!(twice, a);
        }
    }

    #[test]
    fn mixed_context_rejected() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        assert_eq!(f4.add(f4.one(), f8.one()), Err(Error::ContextMismatch));
        assert_eq!(f8.mul(f4.one(), f8.one()), Err(Error::ContextMismatch));
    }

    #[test]
    fn make_field_rejects_bad_input() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(5, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(
            make_field(2, 80),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn frobenius_requires_power_of_p() {
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(
            f9.frobenius(f9.one(), 6),
            Err(Error::NotAPowerOfP { .. })
        ));
    }

    #[test]
    fn embedding_f4_into_f16() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let phi = Embedding::new(f4.clone(), f16.clone()).unwrap();
        let g = phi.embed(f4.generator()).unwrap();
        // brute-force root check
        let val = f16
            .add(f16.add(f16.mul(g, g).unwrap(), g).unwrap(), f16.one())
            .unwrap();
        assert!(val.is_zero());
        assert_eq!(phi.embed(f4.zero()).unwrap(), f16.zero());
        assert_eq!(phi.embed(f4.one()).unwrap(), f16.one());
        for a in f4.elements() {
            for b in f4.elements() {
                let lhs = phi.embed(f4.mul(a, b).unwrap()).unwrap();
                let rhs = f16
                    .mul(phi.embed(a).unwrap(), phi.embed(b).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
                let lhs = phi.embed(f4.add(a, b).unwrap()).unwrap();
                let rhs = f16
                    .add(phi.embed(a).unwrap(), phi.embed(b).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn prime_subfield_embeds_identically() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let phi = Embedding::new(f2.clone(), f4.clone()).unwrap();
        for a in f2.elements() {
            assert_eq!(phi.embed(a).unwrap().value(), a.value());
        }
        assert!(Embedding::new(f4.clone(), make_field(2, 3).unwrap()).is_err());
    }

    #[test]
    fn embeddings_compose() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let f256 = make_field(2, 8).unwrap();
        let a = Embedding::new(f4.clone(), f16.clone()).unwrap();
        let b = Embedding::new(f16.clone(), f256.clone()).unwrap();
        let direct = Embedding::new(f4.clone(), f256.clone()).unwrap();
        let composed = a.compose(&b).unwrap();
        for x in f4.elements() {
            let chained = b.embed(a.embed(x).unwrap()).unwrap();
            assert_eq!(composed.embed(x).unwrap(), chained);
        }
        // the two generator images are Galois conjugate over F_2
        let img = composed.generator_image();
        let conj: Vec<_> = (0..2)
            .map(|i| f256.pow(direct.generator_image(), 2u128.pow(i)).unwrap())
            .collect();
        assert!(conj.contains(&img));
    }

    #[test]
    fn large_field_without_tables() {
        let big = make_field(2, 20).unwrap();
        assert!(big.tables.is_none());
        let g = big.generator();
        let inv = big.inv(g).unwrap();
        assert_eq!(big.mul(g, inv).unwrap(), big.one());
        assert_eq!(big.pow(g, big.order() as u128).unwrap(), g);
    }
}
