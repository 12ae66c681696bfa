// SPDX-License-Identifier: Apache-2.0

//! Readers for the transcribed reference tables under `tests/fixtures`.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

/// Data rows of a fixture: comments and the header line dropped.
fn rows(name: &str) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect()
}

pub const TECHS: [&str; 5] = ["Ta", "Tb", "Tc", "Td", "Te"];

/// (tech, split levels, Some(km) or None for N/A)
pub fn table1() -> Vec<(String, Vec<u32>, Option<f64>)> {
    let plans = [vec![8, 8], vec![8, 16], vec![16, 16], vec![32, 16]];
    let mut out = Vec::new();
    for row in rows("table1_reach.csv") {
        for (plan, cell) in plans.iter().zip(&row[1..]) {
            let v = (cell != "N/A").then(|| cell.parse::<f64>().expect("numeric reach"));
            out.push((row[0].clone(), plan.clone(), v));
        }
    }
    out
}

/// One cell of a scenario × codec × tech × nonfunc grid.
#[derive(Debug, Clone)]
pub struct GridCell {
    pub scenario: String,
    pub codec: String,
    pub tech: String,
    pub nonfunc: bool,
    pub raw: String,
}

fn grid(name: &str) -> Vec<GridCell> {
    let mut out = Vec::new();
    for row in rows(name) {
        assert_eq!(row.len(), 12, "row width in {name}");
        for (i, raw) in row[2..].iter().enumerate() {
            out.push(GridCell {
                scenario: row[0].clone(),
                codec: row[1].clone(),
                tech: TECHS[i / 2].to_string(),
                nonfunc: i % 2 == 1,
                raw: raw.clone(),
            });
        }
    }
    out
}

/// Feasibility marks, 80 cells.
pub fn table3() -> Vec<(GridCell, bool)> {
    grid("table3_feasibility.csv")
        .into_iter()
        .map(|c| {
            let f = match c.raw.as_str() {
                "v" => true,
                "x" => false,
                other => panic!("bad mark {other}"),
            };
            (c, f)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnergyRef {
    Joules(f64),
    Infeasible,
    Annotation { bw: f64, feasible: bool },
}

pub fn table6() -> Vec<(GridCell, EnergyRef)> {
    grid("table6_energy.csv")
        .into_iter()
        .map(|c| {
            let r = if c.raw == "x" {
                EnergyRef::Infeasible
            } else if let Some(rest) = c.raw.strip_prefix("bw=") {
                let (bw, mark) = rest.split_once('/').expect("bw=<v>/<mark>");
                EnergyRef::Annotation {
                    bw: bw.parse().unwrap(),
                    feasible: mark == "v",
                }
            } else {
                EnergyRef::Joules(c.raw.parse().expect("numeric energy"))
            };
            (c, r)
        })
        .collect()
}
