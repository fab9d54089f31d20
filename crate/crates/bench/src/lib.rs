//! Fixtures shared by the benchmarks.

use dof_lab_core::simulate::{sample_channels, ChannelDraw};
use dof_lab_core::AntennaConfig;

/// Configurations inside the scheme regime, smallest first.
pub const SCHEME_CONFIGS: [(u32, u32, u32, u32); 4] = [(1, 2, 3, 3), (2, 3, 4, 4), (2, 4, 5, 5), (3, 6, 7, 7)];

pub fn configs() -> impl Iterator<Item = AntennaConfig> {
    SCHEME_CONFIGS
        .into_iter()
        .map(|(m1, n1, m2, n2)| AntennaConfig::new(m1, n1, m2, n2).expect("valid bench config"))
}

/// One fixed Gaussian draw per configuration.
pub fn draw(cfg: &AntennaConfig) -> ChannelDraw {
    sample_channels(cfg, 42, 0)
}
