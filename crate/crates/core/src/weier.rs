//! Weierstrass data `(a1, a2, a3, a4, a6)` with `a_i` a form of degree `i*k`, the
//! hypersurface
//!
//! ```text
//! Y^2 Z + a1 X Y Z + a3 Y Z^2 = X^3 + a2 X^2 Z + a4 X Z^2 + a6 Z^3
//! ```
//!
//! over `P^m`, and detection of its singular points over closed points of the base.
//!
//! Two independent routes decide singularity over a closed point `P`: per-characteristic
//! solution formulas for the fiber coordinates followed by substitution
//! ([`singular_over_closed_form`]), and an exhaustive search over the residue field
//! ([`singular_over_oracle`]). Both consume the same jets of the `a_i` at `P`.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::base::{closed_points_up_to, jet_at, ClosedPoint, Jet};
use crate::error::{Error, Result};
use crate::gf::{make_field, splitmix, Embedding, FieldCtx, FieldElem};
use crate::sections::{dim_space, monomials, random_section, FieldHeader, Section, TermRecord};

/// Weights of `a1, a2, a3, a4, a6`.
pub const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];

/// Default cap on the number of candidate divisors tried by [`WeierstrassData::is_minimal`].
pub const DEFAULT_MINIMALITY_CAP: u128 = 1 << 20;

/// Which coefficients may be nonzero, determined by the characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharClass {
    /// `p = 2`: `a2 = 0`.
    Two,
    /// `p = 3`: `a1 = a3 = 0`.
    Three,
    /// `p > 3`: `a1 = a2 = a3 = 0`.
    Large,
}

impl CharClass {
    pub fn from_p(p: u64) -> CharClass {
        match p {
            2 => CharClass::Two,
            3 => CharClass::Three,
            _ => CharClass::Large,
        }
    }

    /// Indices into `[a1, a2, a3, a4, a6]` of the coefficients that vary.
    pub fn varying(self) -> &'static [usize] {
        match self {
            CharClass::Two => &[0, 2, 3, 4],
            CharClass::Three => &[1, 3, 4],
            CharClass::Large => &[3, 4],
        }
    }

    pub fn num_varying(self) -> usize {
        self.varying().len()
    }

    /// Degrees of the varying coefficients for twist parameter `k`.
    pub fn degrees(self, k: u32) -> Vec<u32> {
        self.varying().iter().map(|&i| WEIGHTS[i] * k).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            CharClass::Two => "p=2",
            CharClass::Three => "p=3",
            CharClass::Large => "p>3",
        }
    }
}

pub(crate) fn coefficient_seed(seed: u64, index: usize) -> u64 {
    splitmix(seed ^ splitmix(0xa0 + index as u64))
}

/// A point of the parameter space `P_k` over `F_q` on `P^m`.
#[derive(Clone)]
pub struct WeierstrassData {
    k: u32,
    class: CharClass,
    coeffs: [Section; 5],
    disc: OnceLock<Section>,
}

impl std::fmt::Debug for WeierstrassData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeierstrassData")
            .field("k", &self.k)
            .field("class", &self.class)
            .field("a1", &self.coeffs[0])
            .field("a2", &self.coeffs[1])
            .field("a3", &self.coeffs[2])
            .field("a4", &self.coeffs[3])
            .field("a6", &self.coeffs[4])
            .finish()
    }
}

impl PartialEq for WeierstrassData {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.coeffs == other.coeffs
    }
}

impl WeierstrassData {
    /// Validates degrees and the characteristic-dependent vanishing pattern.
    ///
    /// `k = 0` is accepted and describes constant coefficients.
    pub fn new(k: u32, coeffs: [Section; 5]) -> Result<WeierstrassData> {
        let field = coeffs[0].field().clone();
        let m = coeffs[0].m();
        let class = CharClass::from_p(field.characteristic());
        for (i, s) in coeffs.iter().enumerate() {
            if s.field().id() != field.id() {
                return Err(Error::ContextMismatch);
            }
            if s.m() != m {
                return Err(Error::InvalidShape(format!(
                    "a{} lives on P^{}, expected P^{m}",
                    WEIGHTS[i],
                    s.m()
                )));
            }
            if s.degree() != WEIGHTS[i] * k {
                return Err(Error::InvalidShape(format!(
                    "a{} has degree {}, expected {}",
                    WEIGHTS[i],
                    s.degree(),
                    WEIGHTS[i] * k
                )));
            }
            if !class.varying().contains(&i) && !s.is_zero() {
                return Err(Error::InvalidShape(format!(
                    "a{} must vanish when {}",
                    WEIGHTS[i],
                    class.name()
                )));
            }
        }
        Ok(WeierstrassData {
            k,
            class,
            coeffs,
            disc: OnceLock::new(),
        })
    }

    /// Builds data from the varying coefficients only, in the order of [`CharClass::varying`].
    pub fn from_varying(
        field: Arc<FieldCtx>,
        m: usize,
        k: u32,
        varying: Vec<Section>,
    ) -> Result<WeierstrassData> {
        let class = CharClass::from_p(field.characteristic());
        if varying.len() != class.num_varying() {
            return Err(Error::InvalidShape(format!(
                "{} needs {} varying coefficients, got {}",
                class.name(),
                class.num_varying(),
                varying.len()
            )));
        }
        let mut coeffs: [Section; 5] =
            std::array::from_fn(|i| Section::zero(field.clone(), m, WEIGHTS[i] * k));
        for (&i, s) in class.varying().iter().zip(varying) {
            coeffs[i] = s;
        }
        WeierstrassData::new(k, coeffs)
    }

    /// Constant short-form data `y^2 = x^3 + a4 x + a6` (so `k = 0`).
    pub fn constant(field: Arc<FieldCtx>, m: usize, a4: i64, a6: i64) -> Result<WeierstrassData> {
        let c4 = Section::from_dense(field.clone(), m, 0, &[field.int_raw(a4)])?;
        let c6 = Section::from_dense(field.clone(), m, 0, &[field.int_raw(a6)])?;
        let z = |_| Section::zero(field.clone(), m, 0);
        WeierstrassData::new(0, [z(1), z(2), z(3), c4, c6])
    }

    /// Uniform sample from `P_k`: each varying coefficient is drawn with [`random_section`]
    /// under a seed derived from `seed` and its index.
    pub fn random(field: &Arc<FieldCtx>, m: usize, k: u32, seed: u64) -> WeierstrassData {
        let class = CharClass::from_p(field.characteristic());
        let varying = class
            .varying()
            .iter()
            .map(|&i| random_section(m, WEIGHTS[i] * k, field, coefficient_seed(seed, i)))
            .collect();
        WeierstrassData::from_varying(field.clone(), m, k, varying)
            .expect("shape holds by construction")
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn class(&self) -> CharClass {
        self.class
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.coeffs[0].field()
    }

    pub fn m(&self) -> usize {
        self.coeffs[0].m()
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coeffs(&self) -> &[Section; 5] {
        &self.coeffs
    }

    pub fn a1(&self) -> &Section {
        &self.coeffs[0]
    }

    pub fn a2(&self) -> &Section {
        &self.coeffs[1]
    }

    pub fn a3(&self) -> &Section {
        &self.coeffs[2]
    }

    pub fn a4(&self) -> &Section {
        &self.coeffs[3]
    }

    pub fn a6(&self) -> &Section {
        &self.coeffs[4]
    }

    /// The discriminant, a form of degree `12k`; computed on first use.
    pub fn discriminant(&self) -> &Section {
        self.disc.get_or_init(|| discriminant_of(&self.coeffs))
    }

    /// Whether the discriminant is the zero form.
    ///
    /// Evaluates at a few pseudo-random points over an extension with at least `2^16`
    /// elements first; only if all of those vanish is the full form expanded.
    pub fn discriminant_vanishes(&self) -> bool {
        if let Some(d) = self.disc.get() {
            return d.is_zero();
        }
        let f = self.field();
        let bits = 64 - (f.order() - 1).leading_zeros();
        let ext = 16u32.div_ceil(bits.max(1)).max(1);
        if let Ok(big) = make_field(f.characteristic(), f.degree() * ext) {
            if let Ok(emb) = Embedding::new(f.clone(), big.clone()) {
                let mut rng = ChaCha8Rng::seed_from_u64(0xd15c);
                for _ in 0..4 {
                    let pt: Vec<u64> = (0..=self.m())
                        .map(|_| rng.gen_range(1..big.order()))
                        .collect();
                    let vals: [u64; 5] =
                        std::array::from_fn(|i| self.coeffs[i].evaluate_raw(&pt, &emb));
                    if discriminant_value(&big, &vals) != 0 {
                        return false;
                    }
                }
            }
        }
        self.discriminant().is_zero()
    }

    /// Membership in `M_k`: some fiber is an elliptic curve, i.e. the discriminant is nonzero.
    pub fn in_mk(&self) -> bool {
        !self.discriminant_vanishes()
    }

    /// A nonconstant `u` of degree `j <= min(j_max, k)` with `u^i | a_i` for all `i`, if any.
    pub fn minimality_witness(&self, j_max: u32) -> Result<Option<Section>> {
        self.minimality_witness_capped(j_max, DEFAULT_MINIMALITY_CAP)
    }

    pub fn minimality_witness_capped(&self, j_max: u32, cap: u128) -> Result<Option<Section>> {
        if j_max == 0 {
            return Err(Error::InvalidParameter(
                "search bound must be at least 1".into(),
            ));
        }
        let field = self.field().clone();
        let m = self.m();
        let q = field.order() as u128;
        let nonzero: Vec<usize> = (0..5).filter(|&i| !self.coeffs[i].is_zero()).collect();
        if nonzero.is_empty() {
            let x0 = Section::monomial(field.clone(), unit_exponents(m, 0, 1), field.one())?;
            return Ok(Some(x0));
        }
        let top = j_max.min(self.k);
        let total: u128 = (1..=top)
            .map(|j| {
                let d = dim_space(m, j) as u32;
                (0..d)
                    .map(|l| q.saturating_pow(l))
                    .fold(0u128, u128::saturating_add)
            })
            .fold(0u128, u128::saturating_add);
        if total > cap {
            return Err(Error::TooLargeEnumeration { size: total, cap });
        }
        for j in 1..=top {
            let dim = dim_space(m, j) as usize;
            for lead in 0..dim {
                let count = q.pow(lead as u32);
                for idx in 0..count {
                    let mut dense = vec![0u64; dim];
                    dense[lead] = 1;
                    let mut t = idx;
                    for slot in dense[..lead].iter_mut() {
                        *slot = (t % q) as u64;
                        t /= q;
                    }
                    let u = Section::from_dense(field.clone(), m, j, &dense)?;
                    if self.divisible_by_powers(&u, &nonzero)? {
                        return Ok(Some(u));
                    }
                }
            }
        }
        Ok(None)
    }

    fn divisible_by_powers(&self, u: &Section, nonzero: &[usize]) -> Result<bool> {
        for &i in nonzero {
            if self.coeffs[i].exact_divide(u)?.is_none() {
                return Ok(false);
            }
        }
        for &i in nonzero {
            if self.coeffs[i].exact_divide(&u.pow(WEIGHTS[i]))?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bounded minimality test; complete once `j_max >= k`.
    pub fn is_minimal(&self, j_max: u32) -> Result<bool> {
        Ok(self.minimality_witness(j_max)?.is_none())
    }

    pub fn to_record(&self) -> WeierstrassRecord {
        let t = |i: usize| self.coeffs[i].term_records();
        WeierstrassRecord {
            format_version: RECORD_VERSION,
            field: FieldHeader::of(self.field()),
            m: self.m(),
            k: self.k,
            char_class: self.class,
            a1: t(0),
            a2: t(1),
            a3: t(2),
            a4: t(3),
            a6: t(4),
        }
    }

    pub fn from_record(rec: &WeierstrassRecord) -> Result<WeierstrassData> {
        if rec.format_version != RECORD_VERSION {
            return Err(Error::Malformed(format!(
                "unsupported format_version {}",
                rec.format_version
            )));
        }
        let field = rec.field.build()?;
        let lists = [&rec.a1, &rec.a2, &rec.a3, &rec.a4, &rec.a6];
        let mut coeffs = Vec::with_capacity(5);
        for (i, terms) in lists.iter().enumerate() {
            coeffs.push(Section::from_term_records(
                field.clone(),
                rec.m,
                WEIGHTS[i] * rec.k,
                terms,
            )?);
        }
        let coeffs: [Section; 5] = coeffs.try_into().expect("five coefficients");
        let w = WeierstrassData::new(rec.k, coeffs)?;
        if w.class != rec.char_class {
            return Err(Error::Malformed(format!(
                "char_class {:?} does not match characteristic {}",
                rec.char_class,
                field.characteristic()
            )));
        }
        Ok(w)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<WeierstrassData> {
        let rec: WeierstrassRecord =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        WeierstrassData::from_record(&rec)
    }
}

fn unit_exponents(m: usize, i: usize, e: u32) -> Vec<u32> {
    let mut v = vec![0; m + 1];
    v[i] = e;
    v
}

pub const RECORD_VERSION: u32 = 1;

/// JSON form of [`WeierstrassData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassRecord {
    pub format_version: u32,
    pub field: FieldHeader,
    pub m: usize,
    pub k: u32,
    pub char_class: CharClass,
    pub a1: Vec<TermRecord>,
    pub a2: Vec<TermRecord>,
    pub a3: Vec<TermRecord>,
    pub a4: Vec<TermRecord>,
    pub a6: Vec<TermRecord>,
}

/// `b2 = a1^2 + 4a2`, `b4 = 2a4 + a1a3`, `b6 = a3^2 + 4a6`,
/// `b8 = a1^2 a6 + 4a2a6 - a1a3a4 + a2a3^2 - a4^2`,
/// `disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`.
fn discriminant_of(a: &[Section; 5]) -> Section {
    let [a1, a2, a3, a4, a6] = a;
    let mul = |x: &Section, y: &Section| x.mul(y).expect("same field");
    let add = |x: &Section, y: &Section| x.add(y).expect("same degree");
    let b2 = add(&mul(a1, a1), &a2.scale_int(4));
    let b4 = add(&a4.scale_int(2), &mul(a1, a3));
    let b6 = add(&mul(a3, a3), &a6.scale_int(4));
    let b8 = add(
        &add(&mul(&mul(a1, a1), a6), &mul(a2, a6).scale_int(4)),
        &add(
            &mul(&mul(a1, a3), a4).scale_int(-1),
            &add(&mul(a2, &mul(a3, a3)), &mul(a4, a4).scale_int(-1)),
        ),
    );
    let t1 = mul(&mul(&b2, &b2), &b8).scale_int(-1);
    let t2 = mul(&mul(&b4, &b4), &b4).scale_int(-8);
    let t3 = mul(&b6, &b6).scale_int(-27);
    let t4 = mul(&mul(&b2, &b4), &b6).scale_int(9);
    add(&add(&t1, &t2), &add(&t3, &t4))
}

/// The same discriminant polynomial evaluated on field values `[a1, a2, a3, a4, a6]`.
pub fn discriminant_value(f: &FieldCtx, a: &[u64; 5]) -> u64 {
    let [a1, a2, a3, a4, a6] = *a;
    let c = |v: i64| f.int_raw(v);
    let mul = |x, y| f.mul_raw(x, y);
    let add = |x, y| f.add_raw(x, y);
    let b2 = add(mul(a1, a1), mul(c(4), a2));
    let b4 = add(mul(c(2), a4), mul(a1, a3));
    let b6 = add(mul(a3, a3), mul(c(4), a6));
    let b8 = [
        mul(mul(a1, a1), a6),
        mul(c(4), mul(a2, a6)),
        f.neg_raw(mul(mul(a1, a3), a4)),
        mul(a2, mul(a3, a3)),
        f.neg_raw(mul(a4, a4)),
    ]
    .into_iter()
    .fold(0, add);
    [
        f.neg_raw(mul(mul(b2, b2), b8)),
        mul(c(-8), mul(mul(b4, b4), b4)),
        mul(c(-27), mul(b6, b6)),
        mul(c(9), mul(mul(b2, b4), b6)),
    ]
    .into_iter()
    .fold(0, add)
}

/// Jets of `a1, a2, a3, a4, a6` at one closed point, as packed residue-field values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberJets {
    pub values: [u64; 5],
    pub gradients: [Vec<u64>; 5],
}

impl FiberJets {
    pub fn from_jets(jets: &[Jet; 5]) -> FiberJets {
        FiberJets {
            values: std::array::from_fn(|i| jets[i].value.value()),
            gradients: std::array::from_fn(|i| {
                jets[i].gradient.iter().map(FieldElem::value).collect()
            }),
        }
    }

    pub fn zero(m: usize) -> FiberJets {
        FiberJets {
            values: [0; 5],
            gradients: std::array::from_fn(|_| vec![0; m]),
        }
    }

    pub fn m(&self) -> usize {
        self.gradients[0].len()
    }
}

/// Whether the affine equation `F = y^2 + a1xy + a3y - x^3 - a2x^2 - a4x - a6` and all its
/// partials (in `x`, `y` and the base coordinates) vanish at `(x, y)` over the point.
pub fn jacobian_vanishes(f: &FieldCtx, j: &FiberJets, x: u64, y: u64) -> bool {
    let [a1, a2, a3, a4, a6] = j.values;
    let mul = |u, v| f.mul_raw(u, v);
    let xx = mul(x, x);
    let xy = mul(x, y);
    // F
    let pos = f.add_raw(f.add_raw(mul(y, y), mul(a1, xy)), mul(a3, y));
    let neg = [mul(xx, x), mul(a2, xx), mul(a4, x), a6]
        .into_iter()
        .fold(0, |s, t| f.add_raw(s, t));
    if pos != neg {
        return false;
    }
    // dF/dx = a1 y - 3x^2 - 2 a2 x - a4
    let fx_neg = [mul(f.int_raw(3), xx), mul(f.int_raw(2), mul(a2, x)), a4]
        .into_iter()
        .fold(0, |s, t| f.add_raw(s, t));
    if mul(a1, y) != fx_neg {
        return false;
    }
    // dF/dy = 2y + a1 x + a3
    if f.add_raw(f.add_raw(mul(f.int_raw(2), y), mul(a1, x)), a3) != 0 {
        return false;
    }
    // dF/dt_j = a1' xy + a3' y - a2' x^2 - a4' x - a6'
    (0..j.m()).all(|v| {
        let g = |i: usize| j.gradients[i][v];
        let pos = f.add_raw(mul(g(0), xy), mul(g(2), y));
        let neg = f.add_raw(f.add_raw(mul(g(1), xx), mul(g(3), x)), g(4));
        pos == neg
    })
}

/// Value of each partial of the homogeneous equation at the zero-section point `(0:1:0)`,
/// as `[F, dF/dX, dF/dY, dF/dZ]`.
pub fn partials_at_infinity(f: &FieldCtx, j: &FiberJets) -> [u64; 4] {
    let (x, y, z) = (0u64, 1u64, 0u64);
    let [a1, a2, a3, a4, a6] = j.values;
    let mul = |u, v| f.mul_raw(u, v);
    let sum = |v: &[u64]| v.iter().fold(0, |s, &t| f.add_raw(s, t));
    let ff = sum(&[
        mul(mul(y, y), z),
        mul(a1, mul(mul(x, y), z)),
        mul(a3, mul(y, mul(z, z))),
        f.neg_raw(mul(x, mul(x, x))),
        f.neg_raw(mul(a2, mul(mul(x, x), z))),
        f.neg_raw(mul(a4, mul(x, mul(z, z)))),
        f.neg_raw(mul(a6, mul(z, mul(z, z)))),
    ]);
    let fx = sum(&[
        mul(a1, mul(y, z)),
        f.neg_raw(mul(f.int_raw(3), mul(x, x))),
        f.neg_raw(mul(f.int_raw(2), mul(a2, mul(x, z)))),
        f.neg_raw(mul(a4, mul(z, z))),
    ]);
    let fy = sum(&[
        mul(f.int_raw(2), mul(y, z)),
        mul(a1, mul(x, z)),
        mul(a3, mul(z, z)),
    ]);
    let fz = sum(&[
        mul(y, y),
        mul(a1, mul(x, y)),
        mul(f.int_raw(2), mul(a3, mul(y, z))),
        f.neg_raw(mul(a2, mul(x, x))),
        f.neg_raw(mul(f.int_raw(2), mul(a4, mul(x, z)))),
        f.neg_raw(mul(f.int_raw(3), mul(a6, mul(z, z)))),
    ]);
    [ff, fx, fy, fz]
}

/// Candidate fiber coordinates of a singular point from the per-characteristic solution
/// formulas. The candidate still has to pass [`jacobian_vanishes`].
pub fn closed_form_candidate(f: &FieldCtx, class: CharClass, j: &FiberJets) -> Option<(u64, u64)> {
    let [a1, a2, a3, a4, a6] = j.values;
    let div = |u: u64, v: u64| f.inv_raw(v).map(|inv| f.mul_raw(u, inv));
    match class {
        CharClass::Large => {
            // y = 0; 3x^2 = -a4; a6 = -x^3 - a4 x  =>  x = -3 a6 / (2 a4) when a4 != 0
            if a4 != 0 {
                let num = f.neg_raw(f.mul_raw(f.int_raw(3), a6));
                let x = div(num, f.mul_raw(f.int_raw(2), a4))?;
                Some((x, 0))
            } else {
                Some((0, 0))
            }
        }
        CharClass::Three => {
            // y = 0; dF/dx = a2 x - a4
            if a2 != 0 {
                Some((div(a4, a2)?, 0))
            } else {
                Some((f.pth_root_raw(f.neg_raw(a6)), 0))
            }
        }
        CharClass::Two => {
            // dF/dy = a1 x + a3, dF/dx = a1 y + x^2 + a4
            if a1 != 0 {
                let x = div(a3, a1)?;
                let y = div(f.add_raw(f.mul_raw(x, x), a4), a1)?;
                Some((x, y))
            } else {
                Some((f.pth_root_raw(a4), f.pth_root_raw(a6)))
            }
        }
    }
}

/// Closed-form route: the singular point over the jets, if there is one.
pub fn closed_form_singular(f: &FieldCtx, class: CharClass, j: &FiberJets) -> Option<(u64, u64)> {
    closed_form_candidate(f, class, j).filter(|&(x, y)| jacobian_vanishes(f, j, x, y))
}

/// Exhaustive route: scans all `(x, y)` in the residue field on the chart `Z = 1`.
pub fn oracle_singular(f: &FieldCtx, j: &FiberJets) -> Option<(u64, u64)> {
    let n = f.order();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| jacobian_vanishes(f, j, x, y))
}

/// A point `(x, y)` over a closed point at which the hypersurface is singular.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityWitness {
    pub point: ClosedPoint,
    pub x: FieldElem,
    pub y: FieldElem,
}

impl SingularityWitness {
    /// Re-substitutes `(x, y)` into the equation and all partials before accepting it.
    pub fn new(point: ClosedPoint, jets: &FiberJets, x: u64, y: u64) -> Result<SingularityWitness> {
        let f = point.residue().clone();
        if !jacobian_vanishes(&f, jets, x, y) {
            return Err(Error::UnverifiedWitness);
        }
        Ok(SingularityWitness {
            x: f.elem(x),
            y: f.elem(y),
            point,
        })
    }
}

/// Jets of all five coefficients at `pt`.
pub fn fiber_jets(w: &WeierstrassData, pt: &ClosedPoint) -> Result<FiberJets> {
    let mut values = [0u64; 5];
    let mut gradients: [Vec<u64>; 5] = std::array::from_fn(|_| vec![0; w.m()]);
    for (i, s) in w.coeffs().iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let j = jet_at(s, pt)?;
        values[i] = j.value.value();
        gradients[i] = j.gradient.iter().map(FieldElem::value).collect();
    }
    Ok(FiberJets { values, gradients })
}

pub fn singular_over_closed_form(
    w: &WeierstrassData,
    pt: &ClosedPoint,
) -> Result<Option<SingularityWitness>> {
    let jets = fiber_jets(w, pt)?;
    closed_form_singular(pt.residue(), w.class(), &jets)
        .map(|(x, y)| SingularityWitness::new(pt.clone(), &jets, x, y))
        .transpose()
}

pub fn singular_over_oracle(
    w: &WeierstrassData,
    pt: &ClosedPoint,
) -> Result<Option<SingularityWitness>> {
    let jets = fiber_jets(w, pt)?;
    debug_assert_eq!(partials_at_infinity(pt.residue(), &jets)[3], 1);
    oracle_singular(pt.residue(), &jets)
        .map(|(x, y)| SingularityWitness::new(pt.clone(), &jets, x, y))
        .transpose()
}

/// Membership in `P_r`: smooth over every closed point of degree at most `r`.
pub fn smooth_up_to(w: &WeierstrassData, r: u32) -> Result<bool> {
    for pt in closed_points_up_to(w.field(), w.m(), r)? {
        if singular_over_closed_form(w, &pt)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Data whose `a4` is `x0^{4k}` and whose `a6` has a nonzero `x1^{6k}` term; no `u` with
/// `u^4 | a4` and `u^6 | a6` can exist, so the data is minimal.
pub fn coprime_short_form(
    field: &Arc<FieldCtx>,
    m: usize,
    k: u32,
    seed: u64,
) -> Result<WeierstrassData> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "need at least two variables".into(),
        ));
    }
    let a4 = Section::monomial(field.clone(), unit_exponents(m, 0, 4 * k), field.one())?;
    let mut dense = crate::sections::sample_dense(m, 6 * k, field, seed);
    let monos = monomials(m, 6 * k);
    let pos = monos
        .iter()
        .position(|mo| mo.0 == unit_exponents(m, 1, 6 * k))
        .unwrap();
    if dense[pos] == 0 {
        dense[pos] = 1;
    }
    let a6 = Section::from_dense(field.clone(), m, 6 * k, &dense)?;
    let z = |i: usize| Section::zero(field.clone(), m, WEIGHTS[i] * k);
    WeierstrassData::new(k, [z(0), z(1), z(2), a4, a6])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_enforced() {
        let f5 = make_field(5, 1).unwrap();
        let a1 = random_section(1, 1, &f5, 3);
        let z = |d| Section::zero(f5.clone(), 1, d);
        let err = WeierstrassData::new(1, [a1, z(2), z(3), z(4), z(6)]).unwrap_err();
        assert!(matches!(err, Error::InvalidShape(_)));
        let bad_degree = WeierstrassData::new(1, [z(1), z(2), z(3), z(5), z(6)]).unwrap_err();
        assert!(matches!(bad_degree, Error::InvalidShape(_)));
    }

    #[test]
    fn short_form_discriminant_identity() {
        let f7 = make_field(7, 1).unwrap();
        for seed in 0..100 {
            let w = WeierstrassData::random(&f7, 1, 1, seed);
            let a4 = w.a4();
            let a6 = w.a6();
            let expected = a4
                .pow(3)
                .scale_int(4)
                .add(&a6.pow(2).scale_int(27))
                .unwrap()
                .scale_int(-16);
            assert_eq!(w.discriminant(), &expected);
        }
    }

    #[test]
    fn discriminant_value_matches_form() {
        for &(p, m) in &[(2u64, 1usize), (3, 1), (5, 2)] {
            let f = make_field(p, 1).unwrap();
            let pts = closed_points_up_to(&f, m, 1).unwrap();
            for seed in 0..20 {
                let w = WeierstrassData::random(&f, m, 1, seed);
                for pt in &pts {
                    let emb = pt.embedding();
                    let vals: [u64; 5] =
                        std::array::from_fn(|i| w.coeffs()[i].evaluate_raw(pt.coords_raw(), emb));
                    let direct = w.discriminant().evaluate_raw(pt.coords_raw(), emb);
                    assert_eq!(discriminant_value(pt.residue(), &vals), direct);
                }
            }
        }
    }

    #[test]
    fn node_data_discriminant_vanishes() {
        let f7 = make_field(7, 1).unwrap();
        let w = WeierstrassData::constant(f7.clone(), 1, -3, 2).unwrap();
        assert!(w.discriminant().is_zero());
        assert!(w.discriminant_vanishes());
        assert!(!w.in_mk());
    }

    #[test]
    fn mk_membership() {
        let f5 = make_field(5, 1).unwrap();
        let cusp = WeierstrassData::constant(f5.clone(), 2, 0, 0).unwrap();
        assert!(!cusp.in_mk());
        let k = 1;
        let a6 = Section::monomial(f5.clone(), vec![6 * k, 0, 0], f5.one()).unwrap();
        let z = |d| Section::zero(f5.clone(), 2, d);
        let w = WeierstrassData::new(k, [z(1), z(2), z(3), z(4), a6]).unwrap();
        assert!(w.in_mk());
        let zero_count = (0..100)
            .filter(|&s| !WeierstrassData::random(&f5, 2, 1, s).in_mk())
            .count();
        assert_eq!(zero_count, 0);
    }

    #[test]
    fn minimality_examples() {
        let f5 = make_field(5, 1).unwrap();
        let k = 1;
        let z = |d| Section::zero(f5.clone(), 2, d);
        let b = Section::monomial(f5.clone(), vec![6, 0, 0], f5.one()).unwrap();
        let w = WeierstrassData::new(k, [z(1), z(2), z(3), z(4), b]).unwrap();
        assert!(!w.is_minimal(1).unwrap());
        let u = w.minimality_witness(1).unwrap().unwrap();
        assert_eq!(
            u,
            Section::monomial(f5.clone(), vec![1, 0, 0], f5.one()).unwrap()
        );
        let a = Section::monomial(f5.clone(), vec![4, 0, 0], f5.one()).unwrap();
        let b = Section::monomial(f5.clone(), vec![0, 6, 0], f5.one()).unwrap();
        let w = WeierstrassData::new(k, [z(1), z(2), z(3), a, b]).unwrap();
        assert!(w.is_minimal(1).unwrap());
    }

    #[test]
    fn coprime_construction_is_minimal() {
        let f3 = make_field(3, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        for seed in 0..50 {
            let f = if seed % 2 == 0 { &f5 } else { &f3 };
            let w = coprime_short_form(f, 1, 1, seed).unwrap();
            assert!(w.is_minimal(1).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn record_roundtrip() {
        let f4 = make_field(2, 2).unwrap();
        let w = WeierstrassData::random(&f4, 1, 1, 77);
        let back = WeierstrassData::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn node_and_cusp_witnesses() {
        let f7 = make_field(7, 1).unwrap();
        let node = WeierstrassData::constant(f7.clone(), 1, -3, 2).unwrap();
        for pt in closed_points_up_to(&f7, 1, 2).unwrap() {
            let w = singular_over_closed_form(&node, &pt).unwrap().unwrap();
            assert_eq!((w.x.value(), w.y.value()), (1, 0));
            assert!(singular_over_oracle(&node, &pt).unwrap().is_some());
        }
        let cusp = WeierstrassData::constant(f7.clone(), 1, 0, 0).unwrap();
        for pt in closed_points_up_to(&f7, 1, 1).unwrap() {
            let w = singular_over_closed_form(&cusp, &pt).unwrap().unwrap();
            assert_eq!((w.x.value(), w.y.value()), (0, 0));
        }
        assert!(!smooth_up_to(&cusp, 1).unwrap());
    }

    #[test]
    fn smooth_constant_curve() {
        let f5 = make_field(5, 1).unwrap();
        let w = WeierstrassData::constant(f5.clone(), 1, 1, 1).unwrap();
        assert!(!w.discriminant().is_zero());
        for r in 1..=2 {
            assert!(smooth_up_to(&w, r).unwrap());
        }
        for pt in closed_points_up_to(&f5, 1, 2).unwrap() {
            assert!(singular_over_oracle(&w, &pt).unwrap().is_none());
        }
    }

    #[test]
    fn unverified_witness_rejected() {
        let f5 = make_field(5, 1).unwrap();
        let w = WeierstrassData::constant(f5.clone(), 1, 1, 1).unwrap();
        let pt = closed_points_up_to(&f5, 1, 1).unwrap().remove(0);
        let jets = fiber_jets(&w, &pt).unwrap();
        assert_eq!(
            SingularityWitness::new(pt, &jets, 0, 0),
            Err(Error::UnverifiedWitness)
        );
    }
}
