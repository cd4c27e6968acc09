//! The base `V = P^m` over `F_q`: rational points over extensions, closed points as
//! Frobenius orbits, and first-order jets of forms at closed points.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{make_field, Embedding, FieldCtx, FieldElem};
use crate::linalg::FpMatrix;
use crate::sections::{dim_space, monomials, Monomial, Section};

/// Default cap on the number of points enumerated when listing closed points.
pub const DEFAULT_POINT_CAP: u128 = 1 << 26;

/// A closed point of degree `e`: one Frobenius orbit of size `e` in `P^m(F_{q^e})`,
/// stored through its smallest normalized representative.
#[derive(Clone)]
pub struct ClosedPoint {
    degree: u32,
    coords: Vec<u64>,
    chart: usize,
    q: u64,
    embedding: Arc<Embedding>,
}

impl std::fmt::Debug for ClosedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClosedPoint(deg {}, {:?})", self.degree, self.coords)
    }
}

impl PartialEq for ClosedPoint {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.coords == other.coords
            && self.residue().id() == other.residue().id()
    }
}

impl ClosedPoint {
    /// Wraps a normalized representative; fails unless its orbit has exactly `degree` points.
    pub fn new(
        coords: Vec<u64>,
        q: u64,
        degree: u32,
        embedding: Arc<Embedding>,
    ) -> Result<ClosedPoint> {
        let residue = embedding.target();
        let chart = coords
            .iter()
            .position(|&c| c != 0)
            .ok_or_else(|| Error::InvalidPoint("all coordinates are zero".into()))?;
        if coords[chart] != 1 {
            return Err(Error::InvalidPoint(
                "representative is not normalized".into(),
            ));
        }
        if coords.iter().any(|&c| c >= residue.order()) {
            return Err(Error::InvalidPoint(
                "coordinate outside the residue field".into(),
            ));
        }
        let pt = ClosedPoint {
            degree,
            coords,
            chart,
            q,
            embedding,
        };
        let size = pt.orbit().len();
        if size != degree as usize {
            return Err(Error::InvalidPoint(format!(
                "orbit has size {size}, expected {degree}"
            )));
        }
        Ok(pt)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn m(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords_raw(&self) -> &[u64] {
        &self.coords
    }

    pub fn coords(&self) -> Vec<FieldElem> {
        self.coords
            .iter()
            .map(|&c| self.residue().elem(c))
            .collect()
    }

    pub fn residue(&self) -> &Arc<FieldCtx> {
        self.embedding.target()
    }

    pub fn embedding(&self) -> &Arc<Embedding> {
        &self.embedding
    }

    /// The orbit of the representative under the `q`-power map.
    pub fn orbit(&self) -> Vec<Vec<u64>> {
        let f = self.residue();
        let mut out = vec![self.coords.clone()];
        loop {
            let next: Vec<u64> = out
                .last()
                .unwrap()
                .iter()
                .map(|&c| f.frobenius_raw(c, self.q))
                .collect();
            if next == self.coords {
                return out;
            }
            out.push(next);
        }
    }

    /// Local coordinates `x_j / x_chart` for `j != chart`; the chart coordinate must be nonzero.
    pub fn affine_coords_raw(&self, chart: usize) -> Result<Vec<u64>> {
        let f = self.residue();
        let pivot = *self
            .coords
            .get(chart)
            .ok_or_else(|| Error::InvalidParameter(format!("chart {chart} out of range")))?;
        let inv = f.inv_raw(pivot).ok_or_else(|| {
            Error::InvalidPoint(format!("coordinate {chart} vanishes at this point"))
        })?;
        Ok(self
            .coords
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != chart)
            .map(|(_, &c)| f.mul_raw(c, inv))
            .collect())
    }
}

/// Value and gradient (in the chart's local coordinates) of a form at a closed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub value: FieldElem,
    pub gradient: Vec<FieldElem>,
}

impl Jet {
    pub fn zero(field: &FieldCtx, m: usize) -> Jet {
        Jet {
            value: field.zero(),
            gradient: vec![field.zero(); m],
        }
    }

    pub fn from_raw(field: &FieldCtx, raw: &[u64]) -> Jet {
        Jet {
            value: field.elem(raw[0]),
            gradient: raw[1..].iter().map(|&v| field.elem(v)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.gradient.iter().all(FieldElem::is_zero)
    }

    pub fn m(&self) -> usize {
        self.gradient.len()
    }
}

/// All points of `P^m(field)` with the first nonzero coordinate equal to 1, ascending.
pub fn enumerate_points_raw(m: usize, field: &FieldCtx) -> Vec<Vec<u64>> {
    let q = field.order();
    let mut out = Vec::new();
    for lead in (0..=m).rev() {
        let free = m - lead;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut pt = vec![0u64; m + 1];
            pt[lead] = 1;
            let mut t = idx;
            for slot in pt[lead + 1..].iter_mut().rev() {
                *slot = t % q;
                t /= q;
            }
            out.push(pt);
        }
    }
    out
}

pub fn enumerate_points(m: usize, field: &FieldCtx) -> Vec<Vec<FieldElem>> {
    enumerate_points_raw(m, field)
        .into_iter()
        .map(|pt| pt.into_iter().map(|c| field.elem(c)).collect())
        .collect()
}

fn projective_count(m: usize, q: u64) -> u128 {
    (0..=m as u32).map(|i| (q as u128).pow(i)).sum()
}

/// The closed points of degree exactly `e`, ordered by representative.
pub fn closed_points_of_degree(base: &Arc<FieldCtx>, m: usize, e: u32) -> Result<Vec<ClosedPoint>> {
    closed_points_of_degree_capped(base, m, e, DEFAULT_POINT_CAP)
}

pub fn closed_points_of_degree_capped(
    base: &Arc<FieldCtx>,
    m: usize,
    e: u32,
    cap: u128,
) -> Result<Vec<ClosedPoint>> {
    if e == 0 {
        return Err(Error::InvalidParameter(
            "closed point degree must be positive".into(),
        ));
    }
    let q = base.order();
    let big_q = (q as u128)
        .checked_pow(e)
        .ok_or(Error::TooLargeEnumeration {
            size: u128::MAX,
            cap,
        })?;
    let size = (0..=m as u32).try_fold(0u128, |acc, i| big_q.checked_pow(i).map(|v| acc + v));
    let size = size.unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::TooLargeEnumeration { size, cap });
    }
    let residue = make_field(base.characteristic(), base.degree() * e)?;
    let embedding = Arc::new(Embedding::new(base.clone(), residue.clone())?);
    let mut out = Vec::new();
    for pt in enumerate_points_raw(m, &residue) {
        // keep only the smallest member of each orbit of exact size e
        let mut cur = pt.clone();
        let mut size = 0;
        let mut minimal = true;
        loop {
            cur = cur.iter().map(|&c| residue.frobenius_raw(c, q)).collect();
            size += 1;
            if cur == pt {
                break;
            }
            if cur < pt {
                minimal = false;
                break;
            }
        }
        if minimal && size == e {
            let chart = pt.iter().position(|&c| c != 0).unwrap();
            out.push(ClosedPoint {
                degree: e,
                coords: pt,
                chart,
                q,
                embedding: embedding.clone(),
            });
        }
    }
    Ok(out)
}

/// One [`ClosedPoint`] per Frobenius orbit of size at most `r`, by degree then representative.
pub fn closed_points_up_to(base: &Arc<FieldCtx>, m: usize, r: u32) -> Result<Vec<ClosedPoint>> {
    closed_points_up_to_capped(base, m, r, DEFAULT_POINT_CAP)
}

pub fn closed_points_up_to_capped(
    base: &Arc<FieldCtx>,
    m: usize,
    r: u32,
    cap: u128,
) -> Result<Vec<ClosedPoint>> {
    if r == 0 {
        return Err(Error::InvalidParameter(
            "degree bound r must be at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for e in 1..=r {
        out.extend(closed_points_of_degree_capped(base, m, e, cap)?);
    }
    Ok(out)
}

/// Number of rational points `#P^m(F_{q^e})`.
pub fn rational_point_count(m: usize, q: u64, e: u32) -> u128 {
    projective_count(m, q.pow(e))
}

/// For every monomial, the jet of `x^alpha` at the affine point `t` (local coordinates of
/// the chart), flattened as `[value, d/dt_1, ..., d/dt_m]`.
fn monomial_jets(field: &FieldCtx, chart: usize, t: &[u64], monos: &[&Monomial]) -> Vec<u64> {
    let m = t.len();
    let max_deg = monos.iter().map(|mo| mo.degree()).max().unwrap_or(0) as usize;
    let powers: Vec<Vec<u64>> = t
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(max_deg + 1);
            let mut acc = 1;
            for _ in 0..=max_deg {
                row.push(acc);
                acc = field.mul_raw(acc, x);
            }
            row
        })
        .collect();
    let p = field.characteristic();
    let mut out = Vec::with_capacity(monos.len() * (m + 1));
    let mut local = vec![0u32; m];
    for mono in monos {
        let mut k = 0;
        for (i, &e) in mono.0.iter().enumerate() {
            if i != chart {
                local[k] = e;
                k += 1;
            }
        }
        let value = local
            .iter()
            .zip(&powers)
            .fold(1, |acc, (&e, row)| field.mul_raw(acc, row[e as usize]));
        out.push(value);
        for j in 0..m {
            let e = local[j];
            let factor = (e as u64) % p;
            if factor == 0 {
                out.push(0);
                continue;
            }
            let mut d = field.int_raw(factor as i64);
            for (i, (&ei, row)) in local.iter().zip(&powers).enumerate() {
                let ex = if i == j { ei - 1 } else { ei };
                d = field.mul_raw(d, row[ex as usize]);
            }
            out.push(d);
        }
    }
    out
}

/// Jet of `s` at `pt` in the point's default chart.
pub fn jet_at(s: &Section, pt: &ClosedPoint) -> Result<Jet> {
    jet_at_chart(s, pt, pt.chart)
}

/// Jet of `s` at `pt` computed in the chart `x_chart != 0`.
pub fn jet_at_chart(s: &Section, pt: &ClosedPoint, chart: usize) -> Result<Jet> {
    let emb = pt.embedding();
    if emb.source().id() != s.field().id() {
        return Err(Error::ContextMismatch);
    }
    if s.m() != pt.m() {
        return Err(Error::InvalidParameter(format!(
            "section on P^{} evaluated at a point of P^{}",
            s.m(),
            pt.m()
        )));
    }
    let f = pt.residue();
    let t = pt.affine_coords_raw(chart)?;
    let m = pt.m();
    let (monos, coeffs): (Vec<&Monomial>, Vec<u64>) = s.terms().unzip();
    let contrib = monomial_jets(f, chart, &t, &monos);
    let mut acc = vec![0u64; m + 1];
    for (c, block) in coeffs.iter().zip(contrib.chunks_exact(m + 1)) {
        let c = emb.apply_raw(*c);
        for (a, &b) in acc.iter_mut().zip(block) {
            *a = f.add_raw(*a, f.mul_raw(c, b));
        }
    }
    Ok(Jet::from_raw(f, &acc))
}

/// The `F_p`-matrix of the map sending coefficient vectors of forms of the given degrees to
/// their concatenated jets at a set of closed points (restriction of scalars on both sides).
#[derive(Clone, Debug)]
pub struct JetSpaceMap {
    pub matrix: FpMatrix,
    /// `sum_i dim_space(m, d_i)`, the dimension over `F_q`.
    pub domain_dim: u64,
    /// `g * (m + 1) * sum_P deg(P) * r` for `q = p^r`.
    pub codomain_dim: u64,
}

pub fn jet_space_map(degrees: &[u32], pt: &ClosedPoint) -> Result<JetSpaceMap> {
    joint_jet_space_map(degrees, std::slice::from_ref(pt))
}

/// As [`jet_space_map`], jointly for several closed points of the same base.
pub fn joint_jet_space_map(degrees: &[u32], points: &[ClosedPoint]) -> Result<JetSpaceMap> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidParameter("no points given".into()))?;
    let base = first.embedding().source().clone();
    let m = first.m();
    let p = base.characteristic();
    let r = base.degree() as usize;
    let point_rows: Vec<usize> = points
        .iter()
        .map(|pt| (m + 1) * pt.residue().degree() as usize)
        .collect();
    let rows_per_section: usize = point_rows.iter().sum();
    let rows = rows_per_section * degrees.len();
    let domain_dim: u64 = degrees.iter().map(|&d| dim_space(m, d)).sum();
    let cols = domain_dim as usize * r;
    let mut matrix = FpMatrix::zeros(p, rows, cols);
    let basis: Vec<u64> = (0..r).map(|l| base.pack(&unit_vector(r, l))).collect();
    let mut col0 = 0;
    for (si, &d) in degrees.iter().enumerate() {
        let monos = monomials(m, d);
        let mono_refs: Vec<&Monomial> = monos.iter().collect();
        let mut row0 = si * rows_per_section;
        for (pt, &prow) in points.iter().zip(&point_rows) {
            if pt.m() != m || pt.embedding().source().id() != base.id() {
                return Err(Error::ContextMismatch);
            }
            let f = pt.residue();
            let t = pt.affine_coords_raw(pt.chart())?;
            let contrib = monomial_jets(f, pt.chart(), &t, &mono_refs);
            for (mi, block) in contrib.chunks_exact(m + 1).enumerate() {
                for (l, &b) in basis.iter().enumerate() {
                    let scale = pt.embedding().apply_raw(b);
                    let col = col0 + mi * r + l;
                    for (entry, &v) in block.iter().enumerate() {
                        let digits = f.unpack(f.mul_raw(scale, v));
                        for (k, &dgt) in digits.iter().enumerate() {
                            matrix.set(row0 + entry * f.degree() as usize + k, col, dgt);
                        }
                    }
                }
            }
            row0 += prow;
        }
        col0 += monos.len() * r;
    }
    Ok(JetSpaceMap {
        matrix,
        domain_dim,
        codomain_dim: rows as u64,
    })
}

fn unit_vector(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// Precomputed jets of every monomial of the given degrees at a fixed list of closed points.
///
/// Evaluating a dense coefficient vector against the plan gives the same jets as [`jet_at`]
/// on the corresponding section, without touching the sparse representation.
pub struct JetPlan {
    m: usize,
    points: Vec<ClosedPoint>,
    layers: Vec<PlanLayer>,
}

struct PlanLayer {
    degree: u32,
    nmon: usize,
    // [monomial][point][entry]
    contrib: Vec<u64>,
}

impl JetPlan {
    pub fn new(m: usize, degrees: &[u32], points: Vec<ClosedPoint>) -> Result<JetPlan> {
        let mut layers = Vec::with_capacity(degrees.len());
        for &d in degrees {
            let monos = monomials(m, d);
            let refs: Vec<&Monomial> = monos.iter().collect();
            let per_point: Vec<Vec<u64>> = points
                .iter()
                .map(|pt| {
                    let t = pt.affine_coords_raw(pt.chart())?;
                    Ok(monomial_jets(pt.residue(), pt.chart(), &t, &refs))
                })
                .collect::<Result<_>>()?;
            let stride = m + 1;
            let mut contrib = Vec::with_capacity(monos.len() * points.len() * stride);
            for mi in 0..monos.len() {
                for pp in &per_point {
                    contrib.extend_from_slice(&pp[mi * stride..(mi + 1) * stride]);
                }
            }
            layers.push(PlanLayer {
                degree: d,
                nmon: monos.len(),
                contrib,
            });
        }
        Ok(JetPlan { m, points, layers })
    }

    pub fn points(&self) -> &[ClosedPoint] {
        &self.points
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.layers.iter().map(|l| l.degree).collect()
    }

    /// Raw jets `[value, grad...]` at every point for the dense coefficients of layer `layer`.
    pub fn eval_raw(&self, layer: usize, coeffs: &[u64]) -> Vec<Vec<u64>> {
        let l = &self.layers[layer];
        assert_eq!(coeffs.len(), l.nmon, "coefficient vector length");
        let stride = self.m + 1;
        let npts = self.points.len();
        let mut acc = vec![vec![0u64; stride]; npts];
        for (mi, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let block = &l.contrib[mi * npts * stride..(mi + 1) * npts * stride];
            for (pi, pt) in self.points.iter().enumerate() {
                let f = pt.residue();
                let ce = pt.embedding().apply_raw(c);
                let src = &block[pi * stride..(pi + 1) * stride];
                let dst = &mut acc[pi];
                if ce == 1 {
                    for (a, &b) in dst.iter_mut().zip(src) {
                        *a = f.add_raw(*a, b);
                    }
                } else {
                    for (a, &b) in dst.iter_mut().zip(src) {
                        *a = f.add_raw(*a, f.mul_raw(ce, b));
                    }
                }
            }
        }
        acc
    }

    pub fn eval(&self, layer: usize, coeffs: &[u64]) -> Vec<Jet> {
        self.eval_raw(layer, coeffs)
            .iter()
            .zip(&self.points)
            .map(|(raw, pt)| Jet::from_raw(pt.residue(), raw))
            .collect()
    }
}
