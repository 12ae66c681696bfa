// SPDX-License-Identifier: Apache-2.0

//! Markdown, CSV and JSON renderings of the reports.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::report::*;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected md, csv or json)")),
        }
    }
}

pub trait Render: Serialize {
    fn markdown(&self) -> String;
    /// Header and rows of the flat CSV form.
    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>);
}

pub fn render<R: Render>(report: &R, format: Format) -> Result<String, CliError> {
    match format {
        Format::Markdown => Ok(report.markdown()),
        Format::Json => serde_json::to_string_pretty(report)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::Output(e.to_string())),
        Format::Csv => {
            let (header, rows) = report.csv_rows();
            let mut w = csv::Writer::from_writer(Vec::new());
            let out = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(&header).map_err(out)?;
            for r in &rows {
                w.write_record(r).map_err(out)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

const YES: &str = "✓";
const NO: &str = "✗";

fn mark(b: bool) -> &'static str {
    if b {
        YES
    } else {
        NO
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "N/A".into(), |x| x.to_string())
}

fn fixed(v: Option<f64>, decimals: usize) -> String {
    v.map_or_else(|| "N/A".into(), |x| format!("{x:.decimals$}"))
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out
}

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

fn notes(out: &mut String, notes: &[String]) {
    if !notes.is_empty() {
        out.push('\n');
        for n in notes {
            let _ = writeln!(out, "- {n}");
        }
    }
}

/// Header of a scenario × codec grid with one column per (tech, nonfunc).
fn grid_header(techs: &[String]) -> Vec<String> {
    let mut h = strs(&["Scenario", "Codec"]);
    for t in techs {
        h.push(format!("{t} w/o"));
        h.push(format!("{t} w/"));
    }
    h
}

/// Groups grid cells into rows keyed by (scenario, codec), in report order.
fn grid_rows<T>(
    cells: &[T],
    key: impl Fn(&T) -> (String, String),
    cell: impl Fn(&T) -> String,
) -> Vec<Vec<String>> {
    let mut rows: Vec<((String, String), Vec<String>)> = Vec::new();
    for c in cells {
        let k = key(c);
        match rows.last_mut() {
            Some((last, row)) if *last == k => row.push(cell(c)),
            _ => rows.push((k, vec![cell(c)])),
        }
    }
    rows.into_iter()
        .map(|((sc, codec), cells)| [vec![sc, codec], cells].concat())
        .collect()
}

impl Render for CatalogReport {
    fn markdown(&self) -> String {
        let mut out = String::from("## Technologies\n\n");
        let (h, rows) = self.csv_rows();
        out += &table(&h, &rows);
        out += "\n## Encodings (Mbps)\n\n";
        out += &table(
            &strs(&["Codec", "Resolution", "Grade", "Bitrate"]),
            &self
                .encodings
                .iter()
                .map(|e| {
                    vec![
                        e.codec.clone(),
                        e.resolution.clone(),
                        e.grade.clone(),
                        s(e.bitrate),
                    ]
                })
                .collect::<Vec<_>>(),
        );
        out += "\n## Scenarios\n\n";
        out += &table(
            &strs(&[
                "Id",
                "Homes",
                "Channels/home",
                "Internet (Mbps)",
                "Video",
                "Split",
                "Non-functional ratio",
            ]),
            &self
                .scenarios
                .iter()
                .map(|x| {
                    vec![
                        x.id.clone(),
                        s(x.homes),
                        s(x.channels_per_home),
                        s(x.reserved_internet),
                        x.video_class.clone(),
                        s(x.required_split),
                        s(x.nonfunc_ratio),
                    ]
                })
                .collect::<Vec<_>>(),
        );
        let c: Vec<String> = self
            .split_candidates
            .iter()
            .map(|x| x.to_string())
            .collect();
        let _ = writeln!(out, "\nSplit candidates: {}", c.join(", "));
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let header = strs(&[
            "label",
            "name",
            "kind",
            "ds_gbps",
            "us_gbps",
            "optical_budget_db",
            "attenuation_db_km",
            "per_line_limit_mbps",
            "max_split",
        ]);
        let rows = self
            .technologies
            .iter()
            .map(|t| {
                vec![
                    t.label.clone(),
                    t.name.clone(),
                    format!("{:?}", t.kind).to_lowercase(),
                    format!("{:.2}", t.ds_gbps),
                    format!("{:.2}", t.us_gbps),
                    opt(t.optical_budget),
                    opt(t.attenuation),
                    opt(t.per_line_limit),
                    t.max_split.clone(),
                ]
            })
            .collect();
        (header, rows)
    }
}

impl Render for ReachReport {
    fn markdown(&self) -> String {
        let h = strs(&["Tech", "Split", "Total", "Reach (km)", "Max split"]);
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.tech.clone(),
                    r.split.clone(),
                    s(r.total_split),
                    r.reach_km
                        .map_or_else(|| "not reachable".into(), |k| format!("{k:.1}")),
                    r.max_split.clone(),
                ]
            })
            .collect();
        table(&h, &rows)
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&["tech", "split", "total_split", "reach_km", "max_split"]);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.tech.clone(),
                    r.split.clone(),
                    s(r.total_split),
                    fixed(r.reach_km, 1),
                    r.max_split.clone(),
                ]
            })
            .collect();
        (h, rows)
    }
}

impl Render for Table1Report {
    fn markdown(&self) -> String {
        let mut h = strs(&[
            "Tech",
            "Name",
            "DS (Gbps)",
            "US (Gbps)",
            "OB (dB)",
            "α (dB/km)",
        ]);
        h.extend(self.splits.iter().map(|sp| format!("d_max {sp}")));
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.label.clone(),
                    r.name.clone(),
                    format!("{:.2}", r.ds_gbps),
                    format!("{:.2}", r.us_gbps),
                    fixed(r.optical_budget, 1),
                    fixed(r.attenuation, 1),
                ];
                row.extend(r.reach_km.iter().map(|&k| fixed(k, 1)));
                row
            })
            .collect();
        table(&h, &rows)
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut h = strs(&[
            "tech",
            "name",
            "ds_gbps",
            "us_gbps",
            "optical_budget_db",
            "attenuation_db_km",
        ]);
        h.extend(self.splits.iter().map(|sp| format!("reach_km {sp}")));
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.label.clone(),
                    r.name.clone(),
                    format!("{:.2}", r.ds_gbps),
                    format!("{:.2}", r.us_gbps),
                    opt(r.optical_budget),
                    opt(r.attenuation),
                ];
                row.extend(r.reach_km.iter().map(|&k| fixed(k, 1)));
                row
            })
            .collect();
        (h, rows)
    }
}

impl Render for Table3Report {
    fn markdown(&self) -> String {
        let rows = grid_rows(
            &self.cells,
            |c| (c.scenario.clone(), c.codec.to_string()),
            |c| mark(c.feasible).to_string(),
        );
        let mut out = table(&grid_header(&self.technologies), &rows);
        let _ = writeln!(
            out,
            "\nFeasible cells: {}/{}",
            self.feasible_count,
            self.cells.len()
        );
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&[
            "scenario",
            "codec",
            "tech",
            "nonfunc",
            "feasible",
            "per_home_mbps",
            "aggregate_mbps",
            "violations",
        ]);
        let rows = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.scenario.clone(),
                    s(c.codec),
                    c.tech.clone(),
                    s(c.nonfunc),
                    s(c.feasible),
                    format!("{:.2}", c.per_home_demand),
                    format!("{:.1}", c.aggregate_demand),
                    c.violations.join(";"),
                ]
            })
            .collect();
        (h, rows)
    }
}

impl Render for Table4Report {
    fn markdown(&self) -> String {
        let (h, rows) = self.csv_rows();
        let mut out = table(&h, &rows);
        notes(&mut out, &self.notes);
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&[
            "group",
            "technologies",
            "baseline",
            "nonfunc_only",
            "hevc_only",
            "hevc_and_nonfunc",
        ]);
        let rows = self
            .groups
            .iter()
            .map(|g| {
                vec![
                    g.group.clone(),
                    g.technologies.join(" "),
                    format!("{}/{}", g.baseline, g.pairs),
                    s(g.nonfunc_only),
                    s(g.hevc_only),
                    s(g.both),
                ]
            })
            .collect();
        (h, rows)
    }
}

impl Render for Table5Report {
    fn markdown(&self) -> String {
        let (h, rows) = self.csv_rows();
        let mut out = table(&h, &rows);
        let _ = writeln!(
            out,
            "\nE(BW) = A_Δ/BW + B_Δ in J per Gb, BW in Mbps, split {}",
            self.split
        );
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&[
            "tech",
            "a_delta",
            "b_delta",
            "derived_a_delta",
            "derived_b_delta",
        ]);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.tech.clone(),
                    format!("{:.4}", r.a_delta),
                    format!("{:.4}", r.b_delta),
                    fixed(r.derived_a_delta, 4),
                    fixed(r.derived_b_delta, 4),
                ]
            })
            .collect();
        (h, rows)
    }
}

impl Table6Report {
    fn cell_text(&self, c: &EnergyRow) -> String {
        match c.status {
            CellStatus::Ok => fixed(c.value, self.unit.decimals()),
            CellStatus::Infeasible => NO.into(),
            CellStatus::NotModeled => format!("BW_D={} {}", c.per_home_demand, mark(c.feasible)),
        }
    }
}

impl Render for Table6Report {
    fn markdown(&self) -> String {
        let rows = grid_rows(
            &self.cells,
            |c| (c.scenario.clone(), c.codec.to_string()),
            |c| self.cell_text(c),
        );
        let mut out = format!("Energy per Gb ({})\n\n", self.unit.symbol());
        out += &table(&grid_header(&self.technologies), &rows);
        notes(&mut out, &self.notes);
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = vec![
            s("scenario"),
            s("codec"),
            s("tech"),
            s("nonfunc"),
            s("per_home_mbps"),
            s("status"),
            s("feasible"),
            format!("energy_per_gb_{}", self.unit.symbol()),
        ];
        let rows = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.scenario.clone(),
                    s(c.codec),
                    c.tech.clone(),
                    s(c.nonfunc),
                    format!("{:.2}", c.per_home_demand),
                    match c.status {
                        CellStatus::Ok => s("ok"),
                        CellStatus::Infeasible => s("infeasible"),
                        CellStatus::NotModeled => s("not_modeled"),
                    },
                    s(c.feasible),
                    c.value
                        .map_or_else(String::new, |v| format!("{v:.*}", self.unit.decimals())),
                ]
            })
            .collect();
        (h, rows)
    }
}

/// Two-column markdown from the flat CSV form of a single-record report.
fn record_markdown(header: Vec<String>, row: Vec<String>) -> String {
    let rows: Vec<_> = header
        .into_iter()
        .zip(row)
        .map(|(k, v)| vec![k, v])
        .collect();
    table(&strs(&["Field", "Value"]), &rows)
}

impl Render for WhatIfReport {
    fn markdown(&self) -> String {
        let (h, mut rows) = self.csv_rows();
        let mut out = record_markdown(h, rows.remove(0));
        let _ = writeln!(
            out,
            "\n{}",
            if self.feasible {
                "Feasible"
            } else {
                "Infeasible"
            }
        );
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let sym = self.unit.symbol();
        let h = vec![
            s("tech"),
            s("scenario"),
            s("codec"),
            s("nonfunc"),
            s("feasible"),
            s("per_home_mbps"),
            s("aggregate_mbps"),
            s("violations"),
            format!("energy_per_gb_{sym}"),
            format!("energy_per_video_second_{sym}"),
        ];
        let row = vec![
            self.tech.clone(),
            self.scenario.clone(),
            s(self.codec),
            s(self.nonfunc),
            s(self.feasible),
            format!("{:.2}", self.per_home_demand),
            format!("{:.1}", self.aggregate_demand),
            self.violations.join(";"),
            self.energy_per_gb
                .map_or_else(String::new, |v| format!("{v:.*}", self.unit.decimals())),
            self.energy_per_video_second
                .map_or_else(String::new, |v| v.to_string()),
        ];
        (h, vec![row])
    }
}

impl MicroRegReport {
    /// One-paragraph human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {} viewers over {} s, sync interval {} s: {} streams at {} Mbps = {} Mbps, {:.1}% below {} Mbps capacity (max wait {:.3} s, seed {})",
            self.viewers,
            self.process,
            self.window,
            self.interval,
            self.active_streams,
            self.bitrate,
            self.aggregate_bandwidth,
            self.savings * 100.0,
            self.capacity,
            self.max_wait,
            self.seed,
        )
    }
}

impl Render for MicroRegReport {
    fn markdown(&self) -> String {
        let (h, mut rows) = self.csv_rows();
        let mut out = record_markdown(h, rows.remove(0));
        let _ = writeln!(out, "\n{}", self.summary());
        out
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&[
            "viewers",
            "window",
            "interval",
            "bitrate",
            "capacity",
            "seed",
            "process",
            "active_streams",
            "max_wait",
            "aggregate_bandwidth",
            "savings",
        ]);
        let row = vec![
            s(self.viewers),
            s(self.window),
            s(self.interval),
            s(self.bitrate),
            s(self.capacity),
            s(self.seed),
            s(self.process),
            s(self.active_streams),
            s(self.max_wait),
            s(self.aggregate_bandwidth),
            s(self.savings),
        ];
        (h, vec![row])
    }
}

impl Render for PricingReport {
    fn markdown(&self) -> String {
        let (h, mut rows) = self.csv_rows();
        record_markdown(h, rows.remove(0))
    }

    fn csv_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let h = strs(&[
            "delta",
            "bpdf_rate",
            "total_cost",
            "objective",
            "fee",
            "fee_star",
            "diagnosis",
            "interior_critical_point",
        ]);
        let row = vec![
            s(self.delta),
            s(self.bpdf_rate),
            s(self.total_cost),
            s(self.objective),
            s(self.fee),
            self.fee_star.map_or_else(String::new, s),
            self.diagnosis.map_or_else(String::new, s),
            self.interior_critical_point.map_or_else(String::new, s),
        ];
        (h, vec![row])
    }
}
