//! Figure recipes. Each preset is a JSON document embedded at build time:
//! a configuration, the subcommand that runs it and the panels it draws.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Rates,
    Steady,
    Sweep,
    Contour,
    TempSweep,
    Fock,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Steady => "steady",
            Command::Sweep => "sweep",
            Command::Contour => "contour",
            Command::TempSweep => "temp-sweep",
            Command::Fock => "fock",
        }
    }
}

/// Which CSV a panel reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    #[default]
    Main,
    Populations,
    Coherences,
}

impl TableKind {
    /// File name for a run named `stem`.
    pub fn file_name(self, stem: &str) -> String {
        match self {
            TableKind::Main => format!("{stem}.csv"),
            TableKind::Populations => format!("{stem}_populations.csv"),
            TableKind::Coherences => format!("{stem}_coherences.csv"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "chart", rename_all = "snake_case", deny_unknown_fields)]
pub enum PanelSpec {
    /// One series per y column, repeated for every distinct value of
    /// `split_by` when given.
    Line {
        name: String,
        title: String,
        x: String,
        y: Vec<String>,
        /// Legend label per y column.
        labels: Vec<String>,
        x_label: String,
        y_label: String,
        #[serde(default)]
        dashed: Vec<String>,
        #[serde(default)]
        split_by: Option<String>,
        #[serde(default)]
        split_label: Option<String>,
    },
    Heatmap {
        name: String,
        title: String,
        x: String,
        y: String,
        value: String,
        x_label: String,
        y_label: String,
        value_label: String,
    },
    /// Bars from the populations table (`n, probability`) or magnitudes of
    /// the upper triangle of the coherence table (`n, m, abs`).
    Bar {
        name: String,
        title: String,
        table: TableKind,
        y_label: String,
        /// Fock levels shown.
        levels: usize,
    },
}

impl PanelSpec {
    pub fn name(&self) -> &str {
        match self {
            PanelSpec::Line { name, .. }
            | PanelSpec::Heatmap { name, .. }
            | PanelSpec::Bar { name, .. } => name,
        }
    }

    pub fn table(&self) -> TableKind {
        match self {
            PanelSpec::Bar { table, .. } => *table,
            _ => TableKind::Main,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub command: Command,
    pub config: Config,
    pub panels: Vec<PanelSpec>,
}

const SOURCES: [(&str, &str); 8] = [
    ("fig2a", include_str!("../presets/fig2a.json")),
    ("fig2b", include_str!("../presets/fig2b.json")),
    ("fig3a", include_str!("../presets/fig3a.json")),
    ("fig3b", include_str!("../presets/fig3b.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("fig8", include_str!("../presets/fig8.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|s| s.0)
}

pub fn load(name: &str) -> Result<Preset, ConfigError> {
    let (_, text) = SOURCES
        .iter()
        .find(|s| s.0 == name)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
    let origin = format!("preset {name}");
    let preset: Preset = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.clone(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
        context: text
            .lines()
            .nth(e.line().saturating_sub(1))
            .unwrap_or("")
            .to_string(),
    })?;
    preset.config.validate()?;
    Ok(preset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_and_is_named_after_itself() {
        for name in names() {
            let p = load(name).unwrap();
            assert_eq!(p.name, name);
            assert!(!p.panels.is_empty());
        }
    }
}
