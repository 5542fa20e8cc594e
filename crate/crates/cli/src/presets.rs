//! Bundled scenario files.

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};

pub const PRESETS: &[(&str, &str)] = &[
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig2c", include_str!("../presets/fig2c.toml")),
    ("fig2d", include_str!("../presets/fig2d.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4a", include_str!("../presets/fig4a.toml")),
    // L = 8 and L = 12 variants of the middle photon panel
    ("fig4b", include_str!("../presets/fig4b.toml")),
    ("fig4b-l12", include_str!("../presets/fig4b-l12.toml")),
    ("fig4c", include_str!("../presets/fig4c.toml")),
    ("fig5a", include_str!("../presets/fig5a.toml")),
    ("fig5b", include_str!("../presets/fig5b.toml")),
    ("fig5c", include_str!("../presets/fig5c.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            CliError::config(format!(
                "unknown preset {name:?} (available: {})",
                names().collect::<Vec<_>>().join(", ")
            ))
        })
}

pub fn load(name: &str) -> Result<ScenarioConfig> {
    ScenarioConfig::parse(source(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Mode, Overrides};

    #[test]
    fn every_preset_resolves() {
        for name in names() {
            let cfg = load(name).unwrap();
            let s = cfg.resolve(&Overrides::default()).unwrap();
            assert_eq!(s.time_grid().unwrap().len(), 2000, "{name}");
            assert!(s.params.g == 0.05 && s.params.omega == 1.0);
        }
        assert_eq!(load("fig3").unwrap().mode(), Mode::Sweep);
        assert_eq!(load("fig4b").unwrap().resolve(&Overrides::default()).unwrap().params.spins(), 8);
        assert_eq!(load("fig4b-l12").unwrap().resolve(&Overrides::default()).unwrap().params.spins(), 12);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load("fig9"), Err(CliError::Config(_))));
    }
}
