//! Turns tables into the panels a preset declares.

use crate::error::{ChartError, Result};
use crate::presets::PanelSpec;
use crate::svg::{BarChart, Heatmap, LineChart, Series};
use crate::table::Table;

fn column(t: &Table, name: &str) -> Result<Vec<f64>, ChartError> {
    t.column(name)
        .ok_or_else(|| ChartError::MissingColumn(name.to_string()))
}

/// Distinct values in first-seen order.
fn distinct(v: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &x in v {
        if !out.iter().any(|&y| y.to_bits() == x.to_bits()) {
            out.push(x);
        }
    }
    out
}

fn short(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn render_panel(panel: &PanelSpec, table: &Table) -> Result<String> {
    if table.is_empty() {
        return Err(ChartError::Empty(panel.name().to_string()).into());
    }
    let svg = match panel {
        PanelSpec::Line {
            title,
            x,
            y,
            labels,
            x_label,
            y_label,
            dashed,
            split_by,
            split_label,
            ..
        } => {
            let xs = column(table, x)?;
            let ys = y
                .iter()
                .map(|c| column(table, c))
                .collect::<Result<Vec<_>, _>>()?;
            let groups: Vec<Option<f64>> = match split_by {
                Some(c) => distinct(&column(table, c)?).into_iter().map(Some).collect(),
                None => vec![None],
            };
            let key = match split_by {
                Some(c) => column(table, c)?,
                None => vec![0.0; xs.len()],
            };
            let mut series = Vec::new();
            for (g, group) in groups.iter().enumerate() {
                for (j, col) in y.iter().enumerate() {
                    let points = (0..xs.len())
                        .filter(|&i| group.is_none_or(|v| key[i].to_bits() == v.to_bits()))
                        .map(|i| (xs[i], ys[j][i]))
                        .collect();
                    let name = labels.get(j).cloned().unwrap_or_else(|| col.clone());
                    let label = match (group, split_label) {
                        (Some(v), Some(unit)) => {
                            format!("{name}, {}", unit.replace("{}", &short(*v)))
                        }
                        (Some(v), None) => format!("{name}, {}", short(*v)),
                        _ => name,
                    };
                    let dashed = dashed.contains(col);
                    // colour follows the group when split, the column otherwise
                    let color = if split_by.is_some() { g } else { j };
                    series.push(Series {
                        label,
                        points,
                        color,
                        dashed,
                    });
                }
            }
            LineChart {
                title: title.clone(),
                x_label: x_label.clone(),
                y_label: y_label.clone(),
                series,
            }
            .render()?
        }
        PanelSpec::Heatmap {
            title,
            x,
            y,
            value,
            x_label,
            y_label,
            value_label,
            ..
        } => {
            let (cx, cy, cv) = (column(table, x)?, column(table, y)?, column(table, value)?);
            let (xs, ys) = (distinct(&cx), distinct(&cy));
            let mut values = vec![f64::NAN; xs.len() * ys.len()];
            for k in 0..cv.len() {
                let i = xs
                    .iter()
                    .position(|v| v.to_bits() == cx[k].to_bits())
                    .expect("listed");
                let j = ys
                    .iter()
                    .position(|v| v.to_bits() == cy[k].to_bits())
                    .expect("listed");
                values[i * ys.len() + j] = cv[k];
            }
            Heatmap {
                title: title.clone(),
                x_label: x_label.clone(),
                y_label: y_label.clone(),
                value_label: value_label.clone(),
                xs,
                ys,
                values,
            }
            .render()?
        }
        PanelSpec::Bar {
            title,
            table: kind,
            y_label,
            levels,
            ..
        } => {
            use crate::presets::TableKind;
            let n = column(table, "n")?;
            let bars = match kind {
                TableKind::Coherences => {
                    let (m, abs) = (column(table, "m")?, column(table, "abs")?);
                    (0..n.len())
                        .filter(|&i| n[i] <= m[i] && (m[i] as usize) < *levels)
                        .map(|i| (format!("|ρ{}{}|", n[i] as usize, m[i] as usize), abs[i]))
                        .collect()
                }
                _ => {
                    let p = column(table, "probability")?;
                    (0..n.len())
                        .filter(|&i| (n[i] as usize) < *levels)
                        .map(|i| (format!("n = {}", n[i] as usize), p[i]))
                        .collect()
                }
            };
            BarChart {
                title: title.clone(),
                y_label: y_label.clone(),
                bars,
            }
            .render()?
        }
    };
    Ok(svg)
}
