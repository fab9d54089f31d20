//! Degrees-of-freedom regions of the two-user MIMO Z and full interference
//! channels, represented exactly as 2D polytopes over the rationals.
//!
//! Four regions are provided: Z (`zic_*`) and full (`fic_*`) channel, each
//! with and without transmitter channel knowledge. Every region carries its
//! half-plane description and the counter-clockwise vertex list derived from
//! it, so region equality and containment are decided without tolerances.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest antenna count accepted anywhere in the crate.
pub const MAX_ANTENNAS: u32 = 64;

/// A DoF pair `(d1, d2)`.
pub type DofPair = (Rational, Rational);

/// An `(M1, N1, M2, N2)` system: transmit/receive antenna counts per user.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub m1: u32,
    pub n1: u32,
    pub m2: u32,
    pub n2: u32,
}

impl AntennaConfig {
    pub fn new(m1: u32, n1: u32, m2: u32, n2: u32) -> Result<Self> {
        for (name, v) in [("M1", m1), ("N1", n1), ("M2", m2), ("N2", n2)] {
            if !(1..=MAX_ANTENNAS).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} outside 1..={MAX_ANTENNAS}")));
            }
        }
        Ok(Self { m1, n1, m2, n2 })
    }

    /// Number of transmit antennas user 2 actually drives: `min(M2, N2)`.
    pub fn m2_eff(&self) -> u32 {
        self.m2.min(self.n2)
    }

    /// Checks `M1 < N1 < min(M2, N2)`, the regime where the blind alignment
    /// scheme is needed. The error names the inequality that failed.
    pub fn check_scheme_regime(&self) -> Result<()> {
        if self.m1 >= self.n1 {
            return Err(Error::Domain(format!(
                "M1 < N1 violated (M1 = {}, N1 = {})",
                self.m1, self.n1
            )));
        }
        if self.n1 >= self.m2_eff() {
            return Err(Error::Domain(format!(
                "N1 < min(M2, N2) violated (N1 = {}, min(M2, N2) = {})",
                self.n1,
                self.m2_eff()
            )));
        }
        Ok(())
    }

    pub fn in_scheme_regime(&self) -> bool {
        self.check_scheme_regime().is_ok()
    }

    /// Every configuration with all four counts in `1..=max`, in
    /// lexicographic `(m1, n1, m2, n2)` order.
    pub fn all_up_to(max: u32) -> impl Iterator<Item = AntennaConfig> {
        let r = move || 1..=max;
        r().flat_map(move |m1| {
            r().flat_map(move |n1| r().flat_map(move |m2| r().map(move |n2| AntennaConfig { m1, n1, m2, n2 })))
        })
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.n1, self.m2, self.n2)
    }
}

/// The constraint `a1·d1 + a2·d2 ≤ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfPlane")]
pub struct HalfPlane {
    pub a1: Rational,
    pub a2: Rational,
    pub b: Rational,
}

#[derive(Deserialize)]
struct RawHalfPlane {
    a1: Rational,
    a2: Rational,
    b: Rational,
}

impl TryFrom<RawHalfPlane> for HalfPlane {
    type Error = Error;
    fn try_from(raw: RawHalfPlane) -> Result<Self> {
        HalfPlane::new(raw.a1, raw.a2, raw.b)
    }
}

impl HalfPlane {
    pub fn new(a1: Rational, a2: Rational, b: Rational) -> Result<Self> {
        if a1.is_zero() && a2.is_zero() {
            return Err(Error::Domain("half-plane with zero normal".into()));
        }
        Ok(Self { a1, a2, b })
    }

    fn unchecked(a1: Rational, a2: Rational, b: Rational) -> Self {
        debug_assert!(!(a1.is_zero() && a2.is_zero()));
        Self { a1, a2, b }
    }

    /// `lhs(p) = a1·d1 + a2·d2`.
    pub fn lhs(&self, p: &DofPair) -> Rational {
        self.a1 * p.0 + self.a2 * p.1
    }

    pub fn satisfied_by(&self, p: &DofPair) -> bool {
        self.lhs(p) <= self.b
    }

    pub fn is_tight_at(&self, p: &DofPair) -> bool {
        self.lhs(p) == self.b
    }

    /// Intersection of the two boundary lines, `None` when parallel.
    fn meet(&self, other: &HalfPlane) -> Option<DofPair> {
        let det = self.a1 * other.a2 - self.a2 * other.a1;
        if det.is_zero() {
            return None;
        }
        let x = (self.b * other.a2 - other.b * self.a2) / det;
        let y = (self.a1 * other.b - other.a1 * self.b) / det;
        Some((x, y))
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·d1 + {}·d2 <= {}", self.a1, self.a2, self.b)
    }
}

/// A bounded convex DoF region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion")]
pub struct DofRegion {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<DofPair>,
}

#[derive(Deserialize)]
struct RawRegion {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<DofPair>,
}

impl TryFrom<RawRegion> for DofRegion {
    type Error = Error;
    fn try_from(raw: RawRegion) -> Result<Self> {
        let region = DofRegion::from_halfplanes(raw.halfplanes)?;
        if region.vertices != raw.vertices {
            return Err(Error::Invariant("serialized vertices disagree with the half-planes".into()));
        }
        Ok(region)
    }
}

impl DofRegion {
    /// Builds the region and enumerates its vertices. Non-negativity
    /// constraints are appended if missing.
    pub fn from_halfplanes(mut halfplanes: Vec<HalfPlane>) -> Result<Self> {
        for hp in [nonneg_d1(), nonneg_d2()] {
            if !halfplanes.contains(&hp) {
                halfplanes.push(hp);
            }
        }
        let vertices = vertices(&halfplanes)?;
        Ok(Self { halfplanes, vertices })
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn vertices(&self) -> &[DofPair] {
        &self.vertices
    }

    pub fn contains(&self, p: &DofPair) -> bool {
        contains(self, p)
    }

    /// `self ⊇ other`, decided on the vertices of `other`.
    pub fn contains_region(&self, other: &DofRegion) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// True when `p` is in the region and some constraint is tight there.
    pub fn on_boundary(&self, p: &DofPair) -> bool {
        self.contains(p) && self.halfplanes.iter().any(|h| h.is_tight_at(p))
    }
}

fn r(n: u32) -> Rational {
    Rational::from(n)
}

fn nonneg_d1() -> HalfPlane {
    HalfPlane::unchecked(-Rational::ONE, Rational::ZERO, Rational::ZERO)
}

fn nonneg_d2() -> HalfPlane {
    HalfPlane::unchecked(Rational::ZERO, -Rational::ONE, Rational::ZERO)
}

fn single_user_bounds(cfg: &AntennaConfig) -> [HalfPlane; 2] {
    [
        HalfPlane::unchecked(Rational::ONE, Rational::ZERO, r(cfg.m1.min(cfg.n1))),
        HalfPlane::unchecked(Rational::ZERO, Rational::ONE, r(cfg.m2.min(cfg.n2))),
    ]
}

fn sum_bound(b: u32) -> HalfPlane {
    HalfPlane::unchecked(Rational::ONE, Rational::ONE, r(b))
}

fn build(halfplanes: Vec<HalfPlane>) -> DofRegion {
    DofRegion::from_halfplanes(halfplanes).expect("DoF regions are bounded and contain the origin")
}

/// Full interference channel with CSIT.
pub fn fic_csit_region(cfg: &AntennaConfig) -> DofRegion {
    let &AntennaConfig { m1, n1, m2, n2 } = cfg;
    let sum = n1.max(m2).min(m1.max(n2)).min(n1 + n2).min(m1 + m2);
    let mut hp = single_user_bounds(cfg).to_vec();
    hp.push(sum_bound(sum));
    build(hp)
}

/// Z interference channel (no link from transmitter 1 to receiver 2) with CSIT.
pub fn zic_csit_region(cfg: &AntennaConfig) -> DofRegion {
    let &AntennaConfig { m1, n1, m2, n2 } = cfg;
    let sum = n1.max(m2).min(n1 + n2).min(m1 + m2);
    let mut hp = single_user_bounds(cfg).to_vec();
    hp.push(sum_bound(sum));
    build(hp)
}

/// `d1 + [min(N1,N2,M2)/min(N2,M2)]·d2 ≤ min(M1+M2, N1)`: receiver 1's bound.
fn receiver1_weighted_bound(cfg: &AntennaConfig) -> HalfPlane {
    let &AntennaConfig { m1, n1, m2, n2 } = cfg;
    let w = Rational::new(n1.min(n2).min(m2) as i64, n2.min(m2) as i64);
    HalfPlane::unchecked(Rational::ONE, w, r((m1 + m2).min(n1)))
}

/// `[min(N1,N2,M1)/min(N1,M1)]·d1 + d2 ≤ min(M1+M2, N2)`: receiver 2's bound.
fn receiver2_weighted_bound(cfg: &AntennaConfig) -> HalfPlane {
    let &AntennaConfig { m1, n1, m2, n2 } = cfg;
    let w = Rational::new(n1.min(n2).min(m1) as i64, n1.min(m1) as i64);
    HalfPlane::unchecked(w, Rational::ONE, r((m1 + m2).min(n2)))
}

/// Full interference channel without CSIT (transmitter 1 able to switch
/// antenna modes).
pub fn fic_nocsit_region(cfg: &AntennaConfig) -> DofRegion {
    let mut hp = single_user_bounds(cfg).to_vec();
    hp.push(receiver1_weighted_bound(cfg));
    hp.push(receiver2_weighted_bound(cfg));
    build(hp)
}

/// Z interference channel without CSIT: the full-channel region without
/// receiver 2's weighted bound.
pub fn zic_nocsit_region(cfg: &AntennaConfig) -> DofRegion {
    let mut hp = single_user_bounds(cfg).to_vec();
    hp.push(receiver1_weighted_bound(cfg));
    build(hp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Zic,
    Fic,
}

pub fn region(cfg: &AntennaConfig, channel: Channel, csit: bool) -> DofRegion {
    match (channel, csit) {
        (Channel::Zic, true) => zic_csit_region(cfg),
        (Channel::Zic, false) => zic_nocsit_region(cfg),
        (Channel::Fic, true) => fic_csit_region(cfg),
        (Channel::Fic, false) => fic_nocsit_region(cfg),
    }
}

/// The corner `(M1, min(M2,N2)·(N1−M1)/N1)` that zero forcing over a single
/// slot cannot reach when `M1 < N1 < min(M2, N2)`.
pub fn unknown_corner_point(cfg: &AntennaConfig) -> Result<DofPair> {
    cfg.check_scheme_regime()?;
    let d2 = Rational::new((cfg.m2_eff() * (cfg.n1 - cfg.m1)) as i64, cfg.n1 as i64);
    Ok((r(cfg.m1), d2))
}

/// Vertices of the polytope cut out by `halfplanes`, counter-clockwise and
/// starting from the origin when the origin is a vertex.
///
/// The system must contain the origin and be bounded.
pub fn vertices(halfplanes: &[HalfPlane]) -> Result<Vec<DofPair>> {
    let origin = (Rational::ZERO, Rational::ZERO);
    if let Some(h) = halfplanes.iter().find(|h| !h.satisfied_by(&origin)) {
        return Err(Error::Domain(format!("origin violates {h}")));
    }
    if !is_bounded(halfplanes) {
        return Err(Error::Domain("half-plane system is unbounded".into()));
    }

    let mut points = BTreeSet::new();
    for (i, hi) in halfplanes.iter().enumerate() {
        for hj in &halfplanes[i + 1..] {
            if let Some(p) = hi.meet(hj) {
                if halfplanes.iter().all(|h| h.satisfied_by(&p)) {
                    points.insert(p);
                }
            }
        }
    }
    let points: Vec<DofPair> = points.into_iter().collect();
    let mut hull = if points.len() <= 2 {
        points
    } else if points.iter().all(|p| cross(&points[0], &points[1], p).is_zero()) {
        // Degenerate segment: keep its two extremes.
        vec![points[0], points[points.len() - 1]]
    } else {
        convex_order(points)
    };
    if let Some(pos) = hull.iter().position(|p| *p == origin) {
        hull.rotate_left(pos);
    }
    Ok(hull)
}

/// Unbounded iff some nonzero direction `d` has `a·d ≤ 0` for every
/// constraint; such a cone always contains a boundary direction of some
/// constraint, so those are the only candidates.
fn is_bounded(halfplanes: &[HalfPlane]) -> bool {
    if halfplanes.is_empty() {
        return false;
    }
    !halfplanes.iter().any(|h| {
        [(-h.a2, h.a1), (h.a2, -h.a1)]
            .iter()
            .any(|d| halfplanes.iter().all(|k| !(k.a1 * d.0 + k.a2 * d.1 > Rational::ZERO)))
    })
}

fn cross(o: &DofPair, a: &DofPair, b: &DofPair) -> Rational {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Sorts points counter-clockwise around their centroid and drops any that
/// sit in the interior of an edge.
fn convex_order(points: Vec<DofPair>) -> Vec<DofPair> {
    let n = Rational::integer(points.len() as i64);
    let cx = points.iter().fold(Rational::ZERO, |acc, p| acc + p.0) / n;
    let cy = points.iter().fold(Rational::ZERO, |acc, p| acc + p.1) / n;
    let upper = |p: &DofPair| {
        let (dx, dy) = (p.0 - cx, p.1 - cy);
        dy > Rational::ZERO || (dy.is_zero() && dx > Rational::ZERO)
    };
    let mut sorted = points;
    sorted.sort_by(|a, b| match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => Rational::ZERO.cmp(&cross(&(cx, cy), a, b)),
    });
    let k = sorted.len();
    (0..k)
        .filter(|&i| !cross(&sorted[(i + k - 1) % k], &sorted[i], &sorted[(i + 1) % k]).is_zero())
        .map(|i| sorted[i])
        .collect()
}

/// Exact membership test.
pub fn contains(region: &DofRegion, point: &DofPair) -> bool {
    region.halfplanes.iter().all(|h| h.satisfied_by(point))
}

/// Regions are equal when their vertex sets coincide.
pub fn regions_equal(a: &DofRegion, b: &DofRegion) -> bool {
    let va: BTreeSet<_> = a.vertices.iter().collect();
    let vb: BTreeSet<_> = b.vertices.iter().collect();
    va == vb
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn i(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn cfg(m1: u32, n1: u32, m2: u32, n2: u32) -> AntennaConfig {
        AntennaConfig::new(m1, n1, m2, n2).unwrap()
    }

    fn pts(v: &[(i64, i64, i64, i64)]) -> Vec<DofPair> {
        v.iter().map(|&(a, b, c, d)| (q(a, b), q(c, d))).collect()
    }

    fn hp(a1: i64, a2: i64, b: i64) -> HalfPlane {
        HalfPlane::new(i(a1), i(a2), i(b)).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(AntennaConfig::new(0, 1, 1, 1).is_err());
        assert!(AntennaConfig::new(1, 1, 1, 65).is_err());
        assert!(AntennaConfig::new(64, 64, 64, 64).is_ok());
        assert_eq!(AntennaConfig::all_up_to(4).count(), 256);
    }

    #[test]
    fn scheme_regime_errors_name_inequality() {
        let e = cfg(2, 2, 3, 3).check_scheme_regime().unwrap_err().to_string();
        assert!(e.contains("M1 < N1 violated"), "{e}");
        let e = cfg(1, 3, 3, 4).check_scheme_regime().unwrap_err().to_string();
        assert!(e.contains("N1 < min(M2, N2) violated"), "{e}");
    }

    #[test]
    fn halfplane_zero_normal_rejected() {
        assert!(HalfPlane::new(i(0), i(0), i(1)).is_err());
    }

    #[test]
    fn vertices_unit_square_and_simplex() {
        let sq = vertices(&[hp(1, 0, 1), hp(0, 1, 1), hp(-1, 0, 0), hp(0, -1, 0)]).unwrap();
        assert_eq!(sq, pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1)]));
        let simplex = vertices(&[hp(1, 1, 1), hp(-1, 0, 0), hp(0, -1, 0)]).unwrap();
        assert_eq!(simplex, pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1)]));
    }

    #[test]
    fn vertices_errors() {
        assert!(matches!(vertices(&[hp(1, 0, 1), hp(-1, 0, 0), hp(0, -1, 0)]), Err(Error::Domain(_))));
        assert!(matches!(vertices(&[]), Err(Error::Domain(_))));
        assert!(matches!(vertices(&[hp(1, 0, -1), hp(0, 1, 1), hp(-1, -1, 5)]), Err(Error::Domain(_))));
    }

    #[test]
    fn vertices_degenerate_segment_and_point() {
        let seg = vertices(&[hp(1, 0, 2), hp(0, 1, 0), hp(-1, 0, 0), hp(0, -1, 0)]).unwrap();
        assert_eq!(seg, pts(&[(0, 1, 0, 1), (2, 1, 0, 1)]));
        let point = vertices(&[hp(1, 0, 0), hp(0, 1, 0), hp(-1, 0, 0), hp(0, -1, 0)]).unwrap();
        assert_eq!(point, pts(&[(0, 1, 0, 1)]));
    }

    #[test]
    fn fic_csit_examples() {
        let r = fic_csit_region(&cfg(1, 2, 3, 3));
        assert_eq!(r.vertices(), pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 2, 1), (0, 1, 3, 1)]).as_slice());
        assert_eq!(r.halfplanes()[..3], [hp(1, 0, 1), hp(0, 1, 3), hp(1, 1, 3)]);
        let r = fic_csit_region(&cfg(1, 1, 1, 1));
        assert_eq!(r.vertices(), pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1)]).as_slice());
        let r = fic_csit_region(&cfg(1, 2, 2, 1));
        assert_eq!(r.halfplanes()[2], hp(1, 1, 1));
    }

    #[test]
    fn zic_csit_examples() {
        let c = cfg(1, 2, 3, 3);
        assert!(regions_equal(&zic_csit_region(&c), &fic_csit_region(&c)));
        let c = cfg(1, 2, 2, 1);
        let z = zic_csit_region(&c);
        let f = fic_csit_region(&c);
        assert_eq!(z.halfplanes()[2], hp(1, 1, 2));
        assert!(z.contains_region(&f) && !f.contains_region(&z));
        let r = zic_csit_region(&cfg(2, 2, 2, 2));
        assert_eq!(r.vertices(), pts(&[(0, 1, 0, 1), (2, 1, 0, 1), (0, 1, 2, 1)]).as_slice());
    }

    #[test]
    fn fic_nocsit_examples() {
        let r = fic_nocsit_region(&cfg(1, 2, 3, 3));
        assert_eq!(
            r.halfplanes()[..4],
            [
                hp(1, 0, 1),
                hp(0, 1, 3),
                HalfPlane::new(i(1), q(2, 3), i(2)).unwrap(),
                hp(1, 1, 3)
            ]
        );
        assert_eq!(r.vertices(), pts(&[(0, 1, 0, 1), (1, 1, 0, 1), (1, 1, 3, 2), (0, 1, 3, 1)]).as_slice());
        let r = fic_nocsit_region(&cfg(2, 2, 2, 2));
        assert_eq!(r.vertices(), pts(&[(0, 1, 0, 1), (2, 1, 0, 1), (0, 1, 2, 1)]).as_slice());
        let r = fic_nocsit_region(&cfg(3, 4, 1, 2));
        assert_eq!(r.halfplanes()[2], hp(1, 1, 4));
    }

    #[test]
    fn zic_nocsit_examples() {
        let c = cfg(1, 2, 3, 3);
        assert!(regions_equal(&zic_nocsit_region(&c), &fic_nocsit_region(&c)));
        let c = cfg(3, 3, 3, 1);
        let z = zic_nocsit_region(&c);
        let f = fic_nocsit_region(&c);
        assert!(z.contains_region(&f) && !regions_equal(&z, &f));
        let r = zic_nocsit_region(&cfg(1, 1, 1, 1));
        assert_eq!(r.halfplanes()[..3], [hp(1, 0, 1), hp(0, 1, 1), hp(1, 1, 1)]);
    }

    #[test]
    fn corner_point_examples() {
        assert_eq!(unknown_corner_point(&cfg(1, 2, 3, 3)).unwrap(), (i(1), q(3, 2)));
        assert_eq!(unknown_corner_point(&cfg(1, 2, 4, 3)).unwrap(), (i(1), q(3, 2)));
        assert_eq!(unknown_corner_point(&cfg(2, 3, 4, 4)).unwrap(), (i(2), q(4, 3)));
        assert!(matches!(unknown_corner_point(&cfg(2, 2, 3, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn contains_examples() {
        let r = fic_nocsit_region(&cfg(1, 2, 3, 3));
        assert!(r.contains(&(i(1), q(3, 2))));
        assert!(r.on_boundary(&(i(1), q(3, 2))));
        assert!(!r.contains(&(i(1), i(2))));
        assert!(r.contains(&(i(0), i(0))));
        assert!(regions_equal(&r, &r.clone()));
    }

    #[test]
    fn json_shape() {
        let r = fic_nocsit_region(&cfg(1, 2, 3, 3));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["halfplanes"][2]["a2"], "2/3");
        assert_eq!(v["vertices"][2], serde_json::json!(["1", "3/2"]));
        let back: DofRegion = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(back, r);
        let mut tampered = v;
        tampered["vertices"][2][1] = "2".into();
        assert!(serde_json::from_value::<DofRegion>(tampered).is_err());
    }
}
