//! Exhaustive jet census, surjectivity of the jet map, exact truncated densities and seeded
//! Monte-Carlo estimates of the density of data smooth over all points of degree `<= r`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base::{
    closed_points_of_degree_capped, closed_points_up_to_capped, jet_space_map, JetPlan,
};
use crate::error::{Error, Result};
use crate::gf::{log_p, make_field, splitmix};
use crate::sections::{dim_space, sample_dense};
use crate::weier::{
    closed_form_singular, coefficient_seed, discriminant_value, oracle_singular,
    singular_over_closed_form, CharClass, FiberJets, SingularityWitness, WeierstrassData,
};
use crate::zeta::{zeta_inverse_truncated, ProductValue, ZetaTable};

/// Default bound on exhaustive enumerations (jet tuples, points).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 26;

/// At most this many closed points are examined by [`surjectivity_check`].
pub const SURJECTIVITY_POINT_LIMIT: usize = 64;

fn validate_pq(p: u64, q: u64) -> Result<u32> {
    let n = log_p(q, p)?;
    if n == 0 {
        return Err(Error::NotAPowerOfP { q, p });
    }
    Ok(n)
}

/// How bad jet tuples are recognized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMethod {
    /// Per-characteristic solution formulas, then substitution.
    ClosedForm,
    /// Exhaustive search over fiber coordinates.
    Oracle,
    /// Both, counting tuples on which they disagree.
    CrossCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetCensus {
    pub char_class: CharClass,
    pub p: u64,
    pub q: u64,
    pub m: usize,
    pub e: u32,
    pub method: CensusMethod,
    pub total: u64,
    pub bad: u64,
    pub expected: u64,
    pub matches: bool,
    pub disagreements: u64,
}

impl JetCensus {
    pub fn csv_header() -> &'static str {
        "char_class,p,q,m,e,method,total,bad,expected,match,disagreements"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.char_class.name(),
            self.p,
            self.q,
            self.m,
            self.e,
            serde_json::to_value(self.method).unwrap().as_str().unwrap(),
            self.total,
            self.bad,
            self.expected,
            self.matches,
            self.disagreements
        )
    }
}

/// `Q^{(g-1)(m+1)}` with `Q = q^e` and `g` the number of varying coefficients.
pub fn expected_bad(class: CharClass, q: u64, m: usize, e: u32) -> Option<u64> {
    let big_q = q.checked_pow(e)?;
    big_q.checked_pow((class.num_varying() as u32 - 1) * (m as u32 + 1))
}

pub fn jet_census(p: u64, q: u64, m: usize, e: u32) -> Result<JetCensus> {
    jet_census_with(
        p,
        q,
        m,
        e,
        CensusMethod::ClosedForm,
        DEFAULT_ENUMERATION_CAP,
    )
}

/// Classifies every tuple of jets (one value and `m` derivatives per varying coefficient,
/// entries in `F_{q^e}`) as bad when the fiber over a degree-`e` point with those jets is
/// singular.
pub fn jet_census_with(
    p: u64,
    q: u64,
    m: usize,
    e: u32,
    method: CensusMethod,
    cap: u64,
) -> Result<JetCensus> {
    let n = validate_pq(p, q)?;
    if e == 0 {
        return Err(Error::InvalidParameter("e must be at least 1".into()));
    }
    let class = CharClass::from_p(p);
    let slots = class.num_varying() * (m + 1);
    let big_q = (q as u128)
        .checked_pow(e)
        .ok_or(Error::FieldTooLarge { p, n: n * e })?;
    let total = big_q.checked_pow(slots as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::TooLargeEnumeration {
            size: total,
            cap: cap as u128,
        });
    }
    let total = total as u64;
    let field = make_field(p, n * e)?;
    let f = &*field;
    let big_q = big_q as u64;
    let varying = class.varying();
    let (bad, disagreements) = (0..total)
        .into_par_iter()
        .map_init(
            || FiberJets::zero(m),
            |jets, idx| {
                let mut t = idx;
                for &ci in varying {
                    jets.values[ci] = t % big_q;
                    t /= big_q;
                    for g in jets.gradients[ci].iter_mut() {
                        *g = t % big_q;
                        t /= big_q;
                    }
                }
                let (is_bad, differ) = match method {
                    CensusMethod::ClosedForm => {
                        (closed_form_singular(f, class, jets).is_some(), false)
                    }
                    CensusMethod::Oracle => (oracle_singular(f, jets).is_some(), false),
                    CensusMethod::CrossCheck => {
                        let a = closed_form_singular(f, class, jets).is_some();
                        let b = oracle_singular(f, jets).is_some();
                        (a, a != b)
                    }
                };
                (is_bad as u64, differ as u64)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let expected = expected_bad(class, q, m, e).expect("bounded by total");
    Ok(JetCensus {
        char_class: class,
        p,
        q,
        m,
        e,
        method,
        total,
        bad,
        expected,
        matches: bad == expected,
        disagreements,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub p: u64,
    pub q: u64,
    pub m: usize,
    pub k: u32,
    pub e: u32,
    pub points_checked: usize,
    /// Smallest rank over the points checked.
    pub rank: usize,
    pub domain_dim: u64,
    pub codomain_dim: u64,
    pub full_rank: bool,
    /// Whether `(6m + 6) e <= k`, where full rank is guaranteed.
    pub within_threshold: bool,
}

/// Rank over `F_p` of the jet map at closed points of degree `e`, for the coefficient
/// degrees of the characteristic.
pub fn surjectivity_check(p: u64, q: u64, m: usize, k: u32, e: u32) -> Result<SurjectivityReport> {
    let n = validate_pq(p, q)?;
    if k == 0 || e == 0 {
        return Err(Error::InvalidParameter("k and e must be at least 1".into()));
    }
    let base = make_field(p, n)?;
    let class = CharClass::from_p(p);
    let degrees = class.degrees(k);
    let mut points = closed_points_of_degree_capped(&base, m, e, DEFAULT_ENUMERATION_CAP as u128)?;
    points.truncate(SURJECTIVITY_POINT_LIMIT);
    if points.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no closed points of degree {e}"
        )));
    }
    let maps: Vec<_> = points
        .par_iter()
        .map(|pt| jet_space_map(&degrees, pt))
        .collect::<Result<_>>()?;
    let rank = maps
        .par_iter()
        .map(|jm| jm.matrix.rank())
        .min()
        .expect("nonempty");
    let codomain_dim = maps[0].codomain_dim;
    Ok(SurjectivityReport {
        p,
        q,
        m,
        k,
        e,
        points_checked: points.len(),
        rank,
        domain_dim: maps[0].domain_dim,
        codomain_dim,
        full_rank: rank as u64 == codomain_dim,
        within_threshold: (6 * m as u64 + 6) * e as u64 <= k as u64,
    })
}

/// `prod_{e <= r} (1 - q^{-(m+1)e})^{a_e}`.
pub fn exact_density(q: u64, m: usize, r: u32) -> Result<ProductValue> {
    let table = ZetaTable::new(m, q, r.max(1))?;
    zeta_inverse_truncated(&table, m as u32 + 1, r)
}

/// Parameters of a Monte-Carlo run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub p: u64,
    pub q: u64,
    pub m: usize,
    pub k: u32,
    pub r: u32,
    pub samples: u64,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> McConfig {
        McConfig {
            p: 2,
            q: 2,
            m: 2,
            k: 18,
            r: 1,
            samples: 2000,
            seed: DEFAULT_SEED,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20240601;

/// Seed of sample `i`; independent of how samples are scheduled.
pub fn sample_seed(master: u64, i: u64) -> u64 {
    splitmix(master ^ splitmix(i.wrapping_add(0x5eed)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub config: McConfig,
    /// The run estimates the fraction at this fixed `k`, not a limit over `k`.
    pub interpretation: String,
    pub exact_density: String,
    pub exact_density_decimal: String,
    pub smooth: u64,
    pub delta_zero: u64,
    pub estimate: f64,
    pub standard_error: f64,
    /// Smooth fraction among samples with nonzero discriminant.
    pub estimate_nonzero_discriminant: Option<f64>,
    /// `(estimate - exact) / standard_error`, absent when the error is zero.
    pub z_score: Option<f64>,
    pub threshold_warning: bool,
}

impl DensityReport {
    pub fn within_standard_errors(&self, n: f64) -> bool {
        let target = parse_target(&self.exact_density_decimal);
        (self.estimate - target).abs() <= n * self.standard_error
    }

    pub fn csv_header() -> &'static str {
        "p,q,m,k,r,samples,seed,exact,exact_decimal,smooth,delta_zero,estimate,standard_error,threshold_warning"
    }

    pub fn csv_row(&self) -> String {
        let c = &self.config;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            c.p,
            c.q,
            c.m,
            c.k,
            c.r,
            c.samples,
            c.seed,
            self.exact_density,
            self.exact_density_decimal,
            self.smooth,
            self.delta_zero,
            self.estimate,
            self.standard_error,
            self.threshold_warning
        )
    }
}

fn parse_target(s: &str) -> f64 {
    let first = s.split("..").next().unwrap_or(s);
    first.parse().unwrap_or(f64::NAN)
}

#[derive(Clone, Copy, Default)]
struct Tally {
    smooth: u64,
    delta_zero: u64,
}

/// Draws `samples` data uniformly from `P_k` and counts those smooth over every closed point
/// of degree `<= r` with nonzero discriminant.
pub fn mc_density(cfg: &McConfig) -> Result<DensityReport> {
    let n = validate_pq(cfg.p, cfg.q)?;
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if cfg.k == 0 || cfg.r == 0 {
        return Err(Error::InvalidParameter("k and r must be at least 1".into()));
    }
    let field = make_field(cfg.p, n)?;
    let class = CharClass::from_p(cfg.p);
    let degrees = class.degrees(cfg.k);
    let points = closed_points_up_to_capped(&field, cfg.m, cfg.r, DEFAULT_ENUMERATION_CAP as u128)?;
    let plan = JetPlan::new(cfg.m, &degrees, points)?;
    let target = exact_density(cfg.q, cfg.m, cfg.r)?;
    let m = cfg.m;

    let classify = |i: u64| -> Tally {
        let s = sample_seed(cfg.seed, i);
        let npts = plan.points().len();
        let mut fibers: Vec<FiberJets> = vec![FiberJets::zero(m); npts];
        for (layer, (&ci, &d)) in class.varying().iter().zip(&degrees).enumerate() {
            let dense = sample_dense(m, d, &field, coefficient_seed(s, ci));
            debug_assert_eq!(dense.len() as u64, dim_space(m, d));
            for (fj, raw) in fibers.iter_mut().zip(plan.eval_raw(layer, &dense)) {
                fj.values[ci] = raw[0];
                fj.gradients[ci].copy_from_slice(&raw[1..]);
            }
        }
        let singular = plan
            .points()
            .iter()
            .zip(&fibers)
            .any(|(pt, fj)| closed_form_singular(pt.residue(), class, fj).is_some());
        let disc_seen = plan
            .points()
            .iter()
            .zip(&fibers)
            .any(|(pt, fj)| discriminant_value(pt.residue(), &fj.values) != 0);
        let delta_zero =
            !disc_seen && WeierstrassData::random(&field, m, cfg.k, s).discriminant_vanishes();
        Tally {
            smooth: (!singular && !delta_zero) as u64,
            delta_zero: delta_zero as u64,
        }
    };

    let tally = (0..cfg.samples)
        .into_par_iter()
        .map(classify)
        .reduce(Tally::default, |a, b| Tally {
            smooth: a.smooth + b.smooth,
            delta_zero: a.delta_zero + b.delta_zero,
        });

    let samples = cfg.samples as f64;
    let estimate = tally.smooth as f64 / samples;
    let standard_error = (estimate * (1.0 - estimate) / samples).sqrt();
    let nonzero = cfg.samples - tally.delta_zero;
    let exact_f = target.to_f64();
    Ok(DensityReport {
        config: cfg.clone(),
        interpretation: "fixed_k".into(),
        exact_density: target.fraction_string(),
        exact_density_decimal: target.decimal_string(),
        smooth: tally.smooth,
        delta_zero: tally.delta_zero,
        estimate,
        standard_error,
        estimate_nonzero_discriminant: (nonzero > 0).then(|| tally.smooth as f64 / nonzero as f64),
        z_score: (standard_error > 0.0).then(|| (estimate - exact_f) / standard_error),
        threshold_warning: (cfg.k as u64) < (6 * cfg.m as u64 + 6) * cfg.r as u64,
    })
}

/// All closed points of degree `<= r` over which `w` is singular, each with a verified witness.
pub fn singular_scan(w: &WeierstrassData, r: u32) -> Result<Vec<SingularityWitness>> {
    singular_scan_capped(w, r, DEFAULT_ENUMERATION_CAP)
}

pub fn singular_scan_capped(
    w: &WeierstrassData,
    r: u32,
    cap: u64,
) -> Result<Vec<SingularityWitness>> {
    let points = closed_points_up_to_capped(w.field(), w.m(), r, cap as u128)?;
    let found: Vec<Option<SingularityWitness>> = points
        .par_iter()
        .map(|pt| singular_over_closed_form(w, pt))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_small_cases() {
        let c = jet_census(5, 5, 1, 1).unwrap();
        assert_eq!((c.total, c.bad, c.expected), (625, 25, 25));
        let c = jet_census(2, 2, 1, 1).unwrap();
        assert_eq!((c.total, c.bad), (256, 64));
        let c = jet_census(3, 3, 1, 1).unwrap();
        assert_eq!((c.total, c.bad), (729, 81));
        assert!(c.matches);
    }

    #[test]
    fn census_cross_check() {
        for p in [2, 3, 5] {
            let c = jet_census_with(
                p,
                p,
                1,
                1,
                CensusMethod::CrossCheck,
                DEFAULT_ENUMERATION_CAP,
            )
            .unwrap();
            assert_eq!(c.disagreements, 0);
            assert!(c.matches);
        }
    }

    #[test]
    fn census_guard() {
        let err = jet_census_with(
            5,
            5,
            3,
            2,
            CensusMethod::ClosedForm,
            DEFAULT_ENUMERATION_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooLargeEnumeration { .. }));
        assert!(matches!(
            jet_census(5, 7, 1, 1),
            Err(Error::NotAPowerOfP { .. })
        ));
    }

    #[test]
    fn surjectivity_small() {
        let s = surjectivity_check(5, 5, 1, 12, 1).unwrap();
        assert_eq!((s.rank, s.codomain_dim), (4, 4));
        assert!(s.full_rank && s.within_threshold);
        assert!(surjectivity_check(5, 5, 1, 0, 1).is_err());
    }

    #[test]
    fn threshold_flag() {
        let s = surjectivity_check(5, 5, 1, 1, 2).unwrap();
        assert!(!s.within_threshold);
        let t = surjectivity_check(5, 5, 2, 1, 1).unwrap();
        assert!(t.rank as u64 <= t.domain_dim);
    }

    #[test]
    fn density_values() {
        let d = exact_density(2, 2, 1).unwrap();
        assert_eq!(d.fraction_string(), "823543/2097152");
        assert_eq!(exact_density(2, 2, 0).unwrap().fraction_string(), "1");
    }

    #[test]
    fn mc_is_deterministic() {
        let cfg = McConfig {
            p: 3,
            q: 3,
            m: 1,
            k: 12,
            r: 1,
            samples: 60,
            seed: 9,
        };
        let a = mc_density(&cfg).unwrap();
        let b = mc_density(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(!a.threshold_warning);
        let zero = McConfig {
            samples: 0,
            ..cfg.clone()
        };
        assert!(mc_density(&zero).is_err());
        let low = McConfig {
            k: 2,
            samples: 5,
            ..cfg
        };
        assert!(mc_density(&low).unwrap().threshold_warning);
    }

    #[test]
    fn mc_matches_direct_evaluation() {
        let cfg = McConfig {
            p: 5,
            q: 5,
            m: 1,
            k: 1,
            r: 1,
            samples: 40,
            seed: 4,
        };
        let rep = mc_density(&cfg).unwrap();
        let f = make_field(5, 1).unwrap();
        let direct = (0..cfg.samples)
            .filter(|&i| {
                let w = WeierstrassData::random(&f, 1, 1, sample_seed(cfg.seed, i));
                crate::weier::smooth_up_to(&w, 1).unwrap() && w.in_mk()
            })
            .count() as u64;
        assert_eq!(rep.smooth, direct);
    }

    #[test]
    fn scans() {
        let f2 = make_field(2, 1).unwrap();
        let cusp = WeierstrassData::constant(f2.clone(), 1, 0, 0).unwrap();
        assert_eq!(singular_scan(&cusp, 2).unwrap().len(), 4);
        let f5 = make_field(5, 1).unwrap();
        let smooth = WeierstrassData::constant(f5, 1, 1, 1).unwrap();
        assert!(singular_scan(&smooth, 2).unwrap().is_empty());
    }
}
