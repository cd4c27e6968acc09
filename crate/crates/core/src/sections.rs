//! Homogeneous forms on `P^m` (global sections of `O(d)`) and their dehomogenizations.
//!
//! Coefficients are packed elements of the base field `F_q` and zero coefficients are never
//! stored. Evaluation at points over an extension goes through an explicit [`Embedding`].

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldCtx, FieldElem};

/// An exponent vector. The derived order is lexicographic with the first variable
/// largest, which on forms of a fixed degree coincides with graded lex `x_0 > x_1 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// `binomial(d + m, m)`, the dimension of `H^0(P^m, O(d))`.
pub fn dim_space(m: usize, d: u32) -> u64 {
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc * (d as u128 + i) / i;
    }
    acc as u64
}

/// All exponent vectors of degree `d` in `m + 1` variables, ascending.
pub fn monomials(m: usize, d: u32) -> Vec<Monomial> {
    fn rec(vars_left: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if vars_left == 1 {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(vars_left - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(dim_space(m, d) as usize);
    rec(m + 1, d, &mut Vec::with_capacity(m + 1), &mut out);
    out
}

/// Uniform coefficients for every monomial of [`monomials`]`(m, d)`, in that order.
pub fn sample_dense(m: usize, d: u32, field: &FieldCtx, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    (0..dim_space(m, d)).map(|_| rng.gen_range(0..q)).collect()
}

/// A section with independent uniform coefficients; deterministic in `seed`.
pub fn random_section(m: usize, d: u32, field: &Arc<FieldCtx>, seed: u64) -> Section {
    let dense = sample_dense(m, d, field, seed);
    Section::from_dense(field.clone(), m, d, &dense).expect("dense vector has the right length")
}

/// A form of degree `degree` in `m + 1` variables over `field`.
#[derive(Clone)]
pub struct Section {
    field: Arc<FieldCtx>,
    m: usize,
    degree: u32,
    terms: BTreeMap<Monomial, u64>,
}

impl std::fmt::Debug for Section {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Section(deg {}, ", self.degree)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (mono, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x^{:?}", mono.0)?;
        }
        write!(f, ")")
    }
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.field.id() == other.field.id()
            && self.m == other.m
            && self.degree == other.degree
            && self.terms == other.terms
    }
}

impl Eq for Section {}

impl Section {
    pub fn zero(field: Arc<FieldCtx>, m: usize, degree: u32) -> Section {
        Section {
            field,
            m,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `c * x^exponents`.
    pub fn monomial(field: Arc<FieldCtx>, exponents: Vec<u32>, c: FieldElem) -> Result<Section> {
        if exponents.is_empty() {
            return Err(Error::InvalidSection("need at least one variable".into()));
        }
        let m = exponents.len() - 1;
        let d = exponents.iter().sum();
        Section::from_terms(field, m, d, [(exponents, c)])
    }

    pub fn from_terms(
        field: Arc<FieldCtx>,
        m: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElem)>,
    ) -> Result<Section> {
        let mut s = Section::zero(field, m, degree);
        for (exps, c) in terms {
            if c.field_id() != s.field.id() {
                return Err(Error::ContextMismatch);
            }
            s.add_term(exps, c.value())?;
        }
        Ok(s)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: u64) -> Result<()> {
        if exps.len() != self.m + 1 {
            return Err(Error::InvalidSection(format!(
                "exponent vector {exps:?} has {} entries, expected {}",
                exps.len(),
                self.m + 1
            )));
        }
        let mono = Monomial(exps);
        if mono.degree() != self.degree {
            return Err(Error::InvalidSection(format!(
                "monomial {:?} has degree {}, expected {}",
                mono.0,
                mono.degree(),
                self.degree
            )));
        }
        self.accumulate(mono, c);
        Ok(())
    }

    fn accumulate(&mut self, mono: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add_raw(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Builds a section from coefficients listed in [`monomials`] order.
    pub fn from_dense(
        field: Arc<FieldCtx>,
        m: usize,
        degree: u32,
        coeffs: &[u64],
    ) -> Result<Section> {
        let monos = monomials(m, degree);
        if monos.len() != coeffs.len() {
            return Err(Error::InvalidSection(format!(
                "expected {} coefficients, got {}",
                monos.len(),
                coeffs.len()
            )));
        }
        let terms = monos
            .into_iter()
            .zip(coeffs.iter().copied())
            .filter(|(_, c)| *c != 0)
            .collect();
        Ok(Section {
            field,
            m,
            degree,
            terms,
        })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (monomial, packed coefficient), ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> FieldElem {
        let v = self
            .terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0);
        self.field.elem(v)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u64)> {
        self.terms.last_key_value().map(|(m, &c)| (m, c))
    }

    fn compatible(&self, other: &Section) -> Result<()> {
        if self.field.id() != other.field.id() {
            return Err(Error::ContextMismatch);
        }
        if self.m != other.m {
            return Err(Error::InvalidSection(format!(
                "sections live on P^{} and P^{}",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Section) -> Result<Section> {
        self.compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::InvalidSection(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.accumulate(mono.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Section {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), self.field.neg_raw(c)))
            .collect();
        Section {
            field: self.field.clone(),
            m: self.m,
            degree: self.degree,
            terms,
        }
    }

    pub fn sub(&self, other: &Section) -> Result<Section> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Section) -> Result<Section> {
        self.compatible(other)?;
        let mut out = Section::zero(self.field.clone(), self.m, self.degree + other.degree);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.accumulate(ma.product(mb), self.field.mul_raw(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> Result<Section> {
        if c.field_id() != self.field.id() {
            return Err(Error::ContextMismatch);
        }
        Ok(self.scale_raw(c.value()))
    }

    fn scale_raw(&self, c: u64) -> Section {
        let mut out = Section::zero(self.field.clone(), self.m, self.degree);
        for (mono, &v) in &self.terms {
            out.accumulate(mono.clone(), self.field.mul_raw(v, c));
        }
        out
    }

    /// Multiplication by the image of an integer in the prime field.
    pub fn scale_int(&self, c: i64) -> Section {
        self.scale_raw(self.field.int_raw(c))
    }

    pub fn pow(&self, e: u32) -> Section {
        let mut acc = Section::from_dense(self.field.clone(), self.m, 0, &[1]).unwrap();
        for _ in 0..e {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// Evaluates at a point with packed coordinates in `emb.target()`.
    pub fn evaluate_raw(&self, pt: &[u64], emb: &Embedding) -> u64 {
        let tgt = emb.target();
        let d = self.degree as usize;
        let powers: Vec<Vec<u64>> = pt
            .iter()
            .map(|&x| {
                let mut row = Vec::with_capacity(d + 1);
                let mut acc = 1;
                for _ in 0..=d {
                    row.push(acc);
                    acc = tgt.mul_raw(acc, x);
                }
                row
            })
            .collect();
        self.terms.iter().fold(0, |acc, (mono, &c)| {
            let mut t = emb.apply_raw(c);
            for (row, &e) in powers.iter().zip(&mono.0) {
                t = tgt.mul_raw(t, row[e as usize]);
            }
            tgt.add_raw(acc, t)
        })
    }

    /// Value of the form at the given coordinate tuple.
    pub fn evaluate(&self, pt: &[FieldElem], emb: &Embedding) -> Result<FieldElem> {
        if emb.source().id() != self.field.id() {
            return Err(Error::ContextMismatch);
        }
        if pt.len() != self.m + 1 {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.m + 1,
                pt.len()
            )));
        }
        let tgt = emb.target();
        if pt.iter().any(|c| c.field_id() != tgt.id()) {
            return Err(Error::ContextMismatch);
        }
        if pt.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        let raw: Vec<u64> = pt.iter().map(|c| c.value()).collect();
        Ok(tgt.elem(self.evaluate_raw(&raw, emb)))
    }

    /// Sets `x_chart = 1`; the remaining variables become `t_1, ..., t_m` in index order.
    pub fn dehomogenize(&self, chart: usize) -> Result<AffinePoly> {
        if chart > self.m {
            return Err(Error::InvalidParameter(format!(
                "chart {chart} out of range 0..={}",
                self.m
            )));
        }
        let mut out = AffinePoly::zero(self.field.clone(), self.m);
        for (mono, &c) in &self.terms {
            let exps: Vec<u32> = mono
                .0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != chart)
                .map(|(_, &e)| e)
                .collect();
            out.accumulate(Monomial(exps), c);
        }
        Ok(out)
    }

    /// `Some(h)` with `self = divisor * h` when the division is exact, `None` otherwise.
    pub fn exact_divide(&self, divisor: &Section) -> Result<Option<Section>> {
        self.compatible(divisor)?;
        let Some((lead_mono, lead_c)) = divisor.leading_term() else {
            return Err(Error::DivisionByZero);
        };
        if divisor.degree > self.degree {
            return Ok(None);
        }
        let f = &self.field;
        let lead_inv = f.inv_raw(lead_c).expect("stored coefficients are nonzero");
        let mut rest = self.clone();
        let mut quotient = Section::zero(f.clone(), self.m, self.degree - divisor.degree);
        while let Some((mono, c)) = rest.leading_term() {
            if !lead_mono.divides(mono) {
                return Ok(None);
            }
            let qm = mono.quotient(lead_mono);
            let qc = f.mul_raw(c, lead_inv);
            for (dm, &dc) in &divisor.terms {
                rest.accumulate(dm.product(&qm), f.neg_raw(f.mul_raw(dc, qc)));
            }
            quotient.accumulate(qm, qc);
        }
        if divisor.mul(&quotient)? != *self {
            return Ok(None);
        }
        Ok(Some(quotient))
    }

    pub fn term_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .rev()
            .map(|(mono, &c)| TermRecord {
                exponents: mono.0.clone(),
                coeff: self.field.unpack(c),
            })
            .collect()
    }

    pub fn from_term_records(
        field: Arc<FieldCtx>,
        m: usize,
        degree: u32,
        records: &[TermRecord],
    ) -> Result<Section> {
        let mut s = Section::zero(field.clone(), m, degree);
        for rec in records {
            let c = field.from_coeffs(&rec.coeff)?;
            s.add_term(rec.exponents.clone(), c.value())?;
        }
        Ok(s)
    }

    pub fn to_record(&self) -> SectionRecord {
        SectionRecord {
            field: FieldHeader::of(&self.field),
            m: self.m,
            degree: self.degree,
            terms: self.term_records(),
        }
    }

    pub fn from_record(rec: &SectionRecord) -> Result<Section> {
        let field = rec.field.build()?;
        Section::from_term_records(field, rec.m, rec.degree, &rec.terms)
    }
}

/// `(p, n, modulus)` identifying a concrete field representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u64,
    pub n: u32,
    pub modulus: Vec<u64>,
}

impl FieldHeader {
    pub fn of(field: &FieldCtx) -> FieldHeader {
        FieldHeader {
            p: field.characteristic(),
            n: field.degree(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn build(&self) -> Result<Arc<FieldCtx>> {
        if self.modulus.len() != self.n as usize + 1 {
            return Err(Error::Malformed(format!(
                "modulus has {} coefficients but n = {}",
                self.modulus.len(),
                self.n
            )));
        }
        FieldCtx::with_modulus(self.p, self.modulus.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    /// Coefficient as its vector over `F_p`, low degree first.
    pub coeff: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionRecord {
    pub field: FieldHeader,
    pub m: usize,
    pub degree: u32,
    pub terms: Vec<TermRecord>,
}

/// A polynomial in the local coordinates `t_1..t_m` of an affine chart.
#[derive(Clone, PartialEq, Eq)]
pub struct AffinePoly {
    field: Arc<FieldCtx>,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl std::fmt::Debug for AffinePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| (&m.0, c)))
            .finish()
    }
}

impl AffinePoly {
    pub fn zero(field: Arc<FieldCtx>, nvars: usize) -> AffinePoly {
        AffinePoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: Arc<FieldCtx>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElem)>,
    ) -> Result<AffinePoly> {
        let mut out = AffinePoly::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::InvalidSection(format!(
                    "expected {nvars} exponents, got {}",
                    exps.len()
                )));
            }
            if c.field_id() != out.field.id() {
                return Err(Error::ContextMismatch);
            }
            out.accumulate(Monomial(exps), c.value());
        }
        Ok(out)
    }

    fn accumulate(&mut self, mono: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(mono).or_insert(0);
        *entry = self.field.add_raw(*entry, c);
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Formal derivative with respect to `t_{var+1}` (0-based `var`).
    pub fn partial(&self, var: usize) -> Result<AffinePoly> {
        if var >= self.nvars {
            return Err(Error::InvalidParameter(format!(
                "variable {var} out of range 0..{}",
                self.nvars
            )));
        }
        let mut out = AffinePoly::zero(self.field.clone(), self.nvars);
        for (mono, &c) in &self.terms {
            let e = mono.0[var];
            if e == 0 {
                continue;
            }
            let factor = self
                .field
                .int_raw((e as u64 % self.field.characteristic()) as i64);
            let mut exps = mono.0.clone();
            exps[var] -= 1;
            out.accumulate(Monomial(exps), self.field.mul_raw(c, factor));
        }
        Ok(out)
    }

    pub fn add(&self, other: &AffinePoly) -> Result<AffinePoly> {
        if self.field.id() != other.field.id() || self.nvars != other.nvars {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.accumulate(mono.clone(), c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &AffinePoly) -> Result<AffinePoly> {
        if self.field.id() != other.field.id() || self.nvars != other.nvars {
            return Err(Error::ContextMismatch);
        }
        let mut out = AffinePoly::zero(self.field.clone(), self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.accumulate(ma.product(mb), self.field.mul_raw(ca, cb));
            }
        }
        Ok(out)
    }

    /// The same polynomial with coefficients pushed into `emb.target()`.
    pub fn embed(&self, emb: &Embedding) -> Result<AffinePoly> {
        if emb.source().id() != self.field.id() {
            return Err(Error::ContextMismatch);
        }
        let mut out = AffinePoly::zero(emb.target().clone(), self.nvars);
        for (mono, &c) in &self.terms {
            out.accumulate(mono.clone(), emb.apply_raw(c));
        }
        Ok(out)
    }

    pub fn evaluate_raw(&self, pt: &[u64]) -> u64 {
        let f = &self.field;
        self.terms.iter().fold(0, |acc, (mono, &c)| {
            let t = mono
                .0
                .iter()
                .zip(pt)
                .fold(c, |t, (&e, &x)| f.mul_raw(t, f.pow_raw(x, e as u128)));
            f.add_raw(acc, t)
        })
    }

    pub fn evaluate(&self, pt: &[FieldElem]) -> Result<FieldElem> {
        if pt.len() != self.nvars {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.nvars,
                pt.len()
            )));
        }
        if pt.iter().any(|x| x.field_id() != self.field.id()) {
            return Err(Error::ContextMismatch);
        }
        let raw: Vec<u64> = pt.iter().map(|x| x.value()).collect();
        Ok(self.field.elem(self.evaluate_raw(&raw)))
    }

    /// Inverse of [`Section::dehomogenize`] up to powers of the chart variable: each monomial is
    /// padded with `x_chart` to reach degree `d`.
    pub fn rehomogenize(&self, chart: usize, d: u32) -> Result<Section> {
        let mut out = Section::zero(self.field.clone(), self.nvars, d);
        for (mono, &c) in &self.terms {
            let deg = mono.degree();
            if deg > d {
                return Err(Error::InvalidSection(format!(
                    "term of degree {deg} exceeds {d}"
                )));
            }
            let mut exps = mono.0.clone();
            exps.insert(chart, d - deg);
            out.accumulate(Monomial(exps), c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn f5() -> Arc<FieldCtx> {
        make_field(5, 1).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_space(2, 4), 15);
        assert_eq!(dim_space(1, 0), 1);
        assert_eq!(dim_space(2, 108), 5995);
        assert_eq!(monomials(2, 4).len(), 15);
        let ms = monomials(2, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn evaluate_simple_monomial() {
        let f = f5();
        let s = Section::monomial(f.clone(), vec![2, 1, 0], f.one()).unwrap();
        let id = Embedding::new(f.clone(), f.clone()).unwrap();
        let pt = [f.from_int(1), f.from_int(2), f.from_int(3)];
        assert_eq!(s.evaluate(&pt, &id).unwrap(), f.from_int(2));
        let zero = Section::zero(f.clone(), 2, 3);
        assert_eq!(zero.evaluate(&pt, &id).unwrap(), f.zero());
        let origin = [f.zero(), f.zero(), f.zero()];
        assert!(matches!(
            s.evaluate(&origin, &id),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn homogeneity_factor() {
        let f = f5();
        let id = Embedding::new(f.clone(), f.clone()).unwrap();
        let s = random_section(2, 3, &f, 11);
        let pt = [f.from_int(1), f.from_int(4), f.from_int(2)];
        let scaled: Vec<_> = pt
            .iter()
            .map(|&c| f.mul(c, f.from_int(2)).unwrap())
            .collect();
        let lhs = s.evaluate(&scaled, &id).unwrap();
        let rhs = f.mul(s.evaluate(&pt, &id).unwrap(), f.from_int(3)).unwrap(); // 2^3 = 8 = 3
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dehomogenize_examples() {
        let f = f5();
        let s = Section::monomial(f.clone(), vec![2, 1, 0], f.one()).unwrap();
        let a = s.dehomogenize(0).unwrap();
        let expected = AffinePoly::from_terms(f.clone(), 2, [(vec![1, 0], f.one())]).unwrap();
        assert_eq!(a, expected);
        let c = Section::from_dense(f.clone(), 2, 0, &[3]).unwrap();
        let ca = c.dehomogenize(1).unwrap();
        assert_eq!(
            ca,
            AffinePoly::from_terms(f.clone(), 2, [(vec![0, 0], f.from_int(3))]).unwrap()
        );
    }

    #[test]
    fn partial_examples() {
        let f2 = make_field(2, 1).unwrap();
        let t1sq = AffinePoly::from_terms(f2.clone(), 2, [(vec![2, 0], f2.one())]).unwrap();
        assert!(t1sq.partial(0).unwrap().is_zero());
        let f = f5();
        let t1t2 = AffinePoly::from_terms(f.clone(), 2, [(vec![1, 1], f.one())]).unwrap();
        let t2 = AffinePoly::from_terms(f.clone(), 2, [(vec![0, 1], f.one())]).unwrap();
        assert_eq!(t1t2.partial(0).unwrap(), t2);
        assert!(t1t2.partial(2).is_err());
    }

    #[test]
    fn linear_difference_quotient_exhaustive() {
        // for linear f over F_9: f(a + h e_j) - f(a) = h * df/dt_j, all a, h
        let f9 = make_field(3, 2).unwrap();
        let lin = AffinePoly::from_terms(
            f9.clone(),
            2,
            [
                (vec![1, 0], f9.elem(4)),
                (vec![0, 1], f9.elem(7)),
                (vec![0, 0], f9.elem(2)),
            ],
        )
        .unwrap();
        for j in 0..2 {
            let d = lin.partial(j).unwrap();
            for a0 in 0..9 {
                for a1 in 0..9 {
                    for h in 0..9 {
                        let mut shifted = [a0, a1];
                        shifted[j] = f9.add_raw(shifted[j], h);
                        let diff =
                            f9.sub_raw(lin.evaluate_raw(&shifted), lin.evaluate_raw(&[a0, a1]));
                        assert_eq!(diff, f9.mul_raw(h, d.evaluate_raw(&[a0, a1])));
                    }
                }
            }
        }
    }

    #[test]
    fn exact_divide_examples() {
        let f = f5();
        let x0 = Section::monomial(f.clone(), vec![1, 0], f.one()).unwrap();
        let x1 = Section::monomial(f.clone(), vec![0, 1], f.one()).unwrap();
        let sum = x0.add(&x1).unwrap();
        let sq = sum.mul(&sum).unwrap();
        assert_eq!(sq.exact_divide(&sum).unwrap(), Some(sum.clone()));
        let x0sq = x0.mul(&x0).unwrap();
        assert_eq!(x0sq.exact_divide(&x1).unwrap(), None);
        let zero = Section::zero(f.clone(), 1, 1);
        assert_eq!(x0sq.exact_divide(&zero), Err(Error::DivisionByZero));
    }

    #[test]
    fn construct_then_divide() {
        let f = f5();
        for trial in 0..200u64 {
            let g = random_section(2, 1 + (trial % 3) as u32, &f, 1000 + trial);
            let h = random_section(2, (trial % 4) as u32, &f, 5000 + trial);
            if g.is_zero() {
                continue;
            }
            let prod = g.mul(&h).unwrap();
            assert_eq!(prod.exact_divide(&g).unwrap(), Some(h));
        }
    }

    #[test]
    fn random_section_is_deterministic() {
        let f = make_field(3, 2).unwrap();
        let a = random_section(2, 5, &f, 42);
        let b = random_section(2, 5, &f, 42);
        assert_eq!(a, b);
        assert!(a.num_terms() as u64 <= dim_space(2, 5));
    }

    #[test]
    fn random_section_uniform_over_f2() {
        // d = 1, m = 1 over F_2: 4 sections, each should appear ~2500 times in 10^4 draws
        let f2 = make_field(2, 1).unwrap();
        let mut counts = [0u32; 4];
        for seed in 0..10_000u64 {
            let s = random_section(1, 1, &f2, seed);
            let idx = s.coeff(&[1, 0]).value() * 2 + s.coeff(&[0, 1]).value();
            counts[idx as usize] += 1;
        }
        let expected = 2500.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 3 degrees of freedom; 99.9% quantile is 16.27
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn record_roundtrip() {
        let f = make_field(3, 2).unwrap();
        let s = random_section(2, 3, &f, 9);
        let json = serde_json::to_string(&s.to_record()).unwrap();
        let back: SectionRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(Section::from_record(&back).unwrap(), s);
    }
}
