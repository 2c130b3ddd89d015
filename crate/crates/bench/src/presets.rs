//! Built-in experiment configs. A CLI config argument naming one of these is
//! used instead of a file.

use std::path::Path;

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};

pub const PRESETS: &[(&str, &str)] = &[
    ("harmonic-fgh", include_str!("../presets/harmonic-fgh.ini")),
    ("harmonic-pvn", include_str!("../presets/harmonic-pvn.ini")),
    ("harmonic-bvn", include_str!("../presets/harmonic-bvn.ini")),
    (
        "harmonic-vn-analytic",
        include_str!("../presets/harmonic-vn-analytic.ini"),
    ),
    ("morse-fgh", include_str!("../presets/morse-fgh.ini")),
    ("morse-bvn", include_str!("../presets/morse-bvn.ini")),
    ("coulomb-fgh", include_str!("../presets/coulomb-fgh.ini")),
    ("coulomb-bvn", include_str!("../presets/coulomb-bvn.ini")),
    ("morse-sweep", include_str!("../presets/morse-sweep.ini")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = preset_text(name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        BenchError::config(
            "preset",
            format!("unknown preset `{name}` (known: {})", names.join(", ")),
        )
    })?;
    ExperimentConfig::from_ini_str(text, None)
}

/// An existing file path, otherwise a preset name.
pub fn load_config(arg: &str) -> Result<ExperimentConfig> {
    let path = Path::new(arg);
    if path.exists() {
        ExperimentConfig::load(path)
    } else if preset_text(arg).is_some() {
        preset(arg)
    } else {
        Err(BenchError::config(
            "config",
            format!("`{arg}` is neither a file nor a preset name"),
        ))
    }
}
