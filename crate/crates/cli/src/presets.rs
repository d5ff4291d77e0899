//! Built-in scenarios, one per acceptance check.

use std::fs;
use std::path::Path;

use crate::{RunError, Scenario};

const PRESETS: [(&str, &str); 10] = [
    ("averaging-constant-strip", include_str!("../presets/averaging-constant-strip.json")),
    ("coupling-sloped-strip", include_str!("../presets/coupling-sloped-strip.json")),
    ("reduce-compare-sigmoid", include_str!("../presets/reduce-compare-sigmoid.json")),
    ("fk-probe-sigmoid-kpp", include_str!("../presets/fk-probe-sigmoid-kpp.json")),
    ("kpp-constant-speed", include_str!("../presets/kpp-constant-speed.json")),
    ("step-jump-1-4", include_str!("../presets/step-jump-1-4.json")),
    ("scaling-laws-tanh", include_str!("../presets/scaling-laws-tanh.json")),
    ("jump-certificate-example", include_str!("../presets/jump-certificate-example.json")),
    ("bistable-unit-tube", include_str!("../presets/bistable-unit-tube.json")),
    ("random-media-constant-check", include_str!("../presets/random-media-constant-check.json")),
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.0).collect()
}

pub fn get(name: &str) -> Option<Scenario> {
    PRESETS
        .iter()
        .find(|p| p.0 == name)
        .map(|p| Scenario::from_json(p.1).expect("built-in presets parse"))
}

pub fn all() -> Vec<Scenario> {
    names().into_iter().filter_map(get).collect()
}

/// Writes every preset as `<name>.json` into `dir`.
pub fn dump(dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir)?;
    for (name, text) in PRESETS {
        fs::write(dir.join(format!("{name}.json")), text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for (name, _) in PRESETS {
            let sc = get(name).unwrap();
            assert_eq!(sc.name, name);
            sc.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
