//! Named graphons shipped with the crate.
//!
//! `constant-<p>` is accepted for any `p` in `[0, 1]` (`constant-0.3`,
//! `constant-1/2`); the others are fixed files.

use crate::error::{Error, Result};
use crate::graphon::{Graphon, StepGraphon};
use crate::rational;

const FILES: &[(&str, &str)] = &[
    ("fig2-u", include_str!("../../presets/fig2-u.json")),
    ("fig2-w", include_str!("../../presets/fig2-w.json")),
    ("narrow-3block", include_str!("../../presets/narrow-3block.json")),
    ("disconnected-2block", include_str!("../../presets/disconnected-2block.json")),
    ("zero-degree-block", include_str!("../../presets/zero-degree-block.json")),
    ("power-0.5", include_str!("../../presets/power-0.5.json")),
    ("power-1", include_str!("../../presets/power-1.json")),
    ("power-2", include_str!("../../presets/power-2.json")),
];

/// Names usable with [`preset`], with `constant-0.3` standing for the
/// constant family.
pub fn preset_names() -> Vec<&'static str> {
    std::iter::once("constant-0.3")
        .chain(FILES.iter().map(|(n, _)| *n))
        .collect()
}

pub fn preset(name: &str) -> Result<Graphon> {
    if let Some(p) = name.strip_prefix("constant-") {
        let p = rational::parse(p).map_err(|m| Error::config("preset", m))?;
        return Ok(Graphon::Step(StepGraphon::constant(p)?));
    }
    let (_, text) = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::config("preset", format!("unknown preset {name:?}")))?;
    Graphon::from_json_str(text)
}
