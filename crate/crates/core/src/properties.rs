//! Structural properties of the DoF regions, checked per configuration.
//! Used by the `sweep` command and the acceptance suite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dofregion::{
    fic_csit_region, fic_nocsit_region, regions_equal, unknown_corner_point, zic_csit_region, zic_nocsit_region,
    AntennaConfig,
};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simulate::zf_feasibility;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// Z and full channel no-CSIT regions coincide when `N1 <= N2`.
    Lemma3,
    /// CSIT region contains the no-CSIT region, for both channels.
    CsitDominance,
    /// Z channel region contains the full channel region, with and without CSIT.
    ZicDominance,
    /// Every integer point of the Z no-CSIT region is reachable by zero
    /// forcing when `N1 >= N2`.
    ZeroForcing,
    /// The open corner point meets receiver 1's weighted bound with equality.
    CornerTightness,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Lemma3,
        Property::CsitDominance,
        Property::ZicDominance,
        Property::ZeroForcing,
        Property::CornerTightness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Lemma3 => "lemma3",
            Property::CsitDominance => "csit-dominance",
            Property::ZicDominance => "zic-dominance",
            Property::ZeroForcing => "zf",
            Property::CornerTightness => "corner",
        }
    }

    /// `None` when the property does not apply to `cfg`.
    pub fn check(&self, cfg: &AntennaConfig, seed: u64) -> Result<Option<bool>> {
        Ok(match self {
            Property::Lemma3 => {
                (cfg.n1 <= cfg.n2).then(|| regions_equal(&zic_nocsit_region(cfg), &fic_nocsit_region(cfg)))
            }
            Property::CsitDominance => Some(
                zic_csit_region(cfg).contains_region(&zic_nocsit_region(cfg))
                    && fic_csit_region(cfg).contains_region(&fic_nocsit_region(cfg)),
            ),
            Property::ZicDominance => Some(
                zic_csit_region(cfg).contains_region(&fic_csit_region(cfg))
                    && zic_nocsit_region(cfg).contains_region(&fic_nocsit_region(cfg)),
            ),
            Property::ZeroForcing => {
                if cfg.n1 < cfg.n2 {
                    None
                } else {
                    Some(zf_covers_integer_points(cfg, seed)?)
                }
            }
            Property::CornerTightness => {
                if !cfg.in_scheme_regime() {
                    None
                } else {
                    Some(corner_is_tight(cfg)?)
                }
            }
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown property '{s}'")))
    }
}

/// Integer lattice points of the Z no-CSIT region.
pub fn integer_points(cfg: &AntennaConfig) -> Vec<(u32, u32)> {
    let region = zic_nocsit_region(cfg);
    let mut out = Vec::new();
    for d1 in 0..=cfg.m1.min(cfg.n1) {
        for d2 in 0..=cfg.m2_eff() {
            if region.contains(&(Rational::from(d1), Rational::from(d2))) {
                out.push((d1, d2));
            }
        }
    }
    out
}

fn zf_covers_integer_points(cfg: &AntennaConfig, seed: u64) -> Result<bool> {
    for (d1, d2) in integer_points(cfg) {
        if !zf_feasibility(cfg, d1, d2, seed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The corner lies on the boundary of the Z no-CSIT region and meets
/// `d1 + [min(N1,N2,M2)/min(N2,M2)]·d2 = min(M1+M2, N1)` exactly.
pub fn corner_is_tight(cfg: &AntennaConfig) -> Result<bool> {
    let corner = unknown_corner_point(cfg)?;
    let region = zic_nocsit_region(cfg);
    let w = Rational::new(
        cfg.n1.min(cfg.n2).min(cfg.m2) as i64,
        cfg.m2_eff() as i64,
    );
    let lhs = corner.0 + w * corner.1;
    let rhs = Rational::from((cfg.m1 + cfg.m2).min(cfg.n1));
    Ok(lhs == rhs && region.on_boundary(&corner))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertySummary {
    pub property: Property,
    pub checked: usize,
    pub passed: usize,
    pub counterexamples: Vec<AntennaConfig>,
}

impl PropertySummary {
    pub fn all_pass(&self) -> bool {
        self.checked == self.passed
    }
}

/// Checks `property` on every configuration with counts in `1..=max`.
pub fn sweep(property: Property, max_antennas: u32, seed: u64) -> Result<PropertySummary> {
    let mut summary = PropertySummary {
        property,
        checked: 0,
        passed: 0,
        counterexamples: Vec::new(),
    };
    for cfg in AntennaConfig::all_up_to(max_antennas) {
        match property.check(&cfg, seed)? {
            None => {}
            Some(true) => {
                summary.checked += 1;
                summary.passed += 1;
            }
            Some(false) => {
                summary.checked += 1;
                summary.counterexamples.push(cfg);
            }
        }
    }
    Ok(summary)
}
