//! Shipped sweep configurations. The files live in `presets/` and are
//! embedded at build time.

/// One config file of a preset.
#[derive(Clone, Copy, Debug)]
pub struct Panel {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! panel {
    ($name:literal) => {
        Panel { name: $name, text: include_str!(concat!("../presets/", $name, ".toml")) }
    };
}

const FIG2: &[Panel] = &[panel!("fig2"), panel!("fig2_mean")];
const FIG3: &[Panel] = &[panel!("fig3_hba"), panel!("fig3_cma")];
const FIG45: &[Panel] = &[panel!("fig45_opt"), panel!("fig45_v1000")];

pub const NAMES: [&str; 3] = ["fig2", "fig3", "fig45"];

pub fn preset(name: &str) -> Option<&'static [Panel]> {
    match name {
        "fig2" => Some(FIG2),
        "fig3" => Some(FIG3),
        "fig45" => Some(FIG45),
        _ => None,
    }
}
