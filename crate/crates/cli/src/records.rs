//! Record stream (`records.csv`) and summary (`summary.txt`) files.

use tbell_core::experiment::{ChshEstimate, PairRecord, SettingPair};
use tbell_core::lhv::Outcome;

use crate::kv::KvDoc;
use crate::CliError;

pub const RECORDS_HEADER: &str = "k,setting1,setting2,outcome1,outcome2";

fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Plus => "+1",
        Outcome::Minus => "-1",
    }
}

fn parse_outcome(s: &str) -> Option<Outcome> {
    match s {
        "+1" => Some(Outcome::Plus),
        "-1" => Some(Outcome::Minus),
        _ => None,
    }
}

pub fn render_records(records: &[PairRecord]) -> String {
    let mut out = String::with_capacity(records.len() * 16 + 64);
    out.push_str(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k,
            r.settings.setting1,
            r.settings.setting2,
            outcome_str(r.outcome1),
            outcome_str(r.outcome2)
        ));
    }
    out
}

pub fn parse_records(text: &str) -> Result<Vec<PairRecord>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(RECORDS_HEADER) {
        return Err(CliError::Parse(format!(
            "records file must start with `{RECORDS_HEADER}`"
        )));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::Parse(format!("records line {}: `{line}`", i + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad());
            }
            let setting = |s: &str| match s {
                "0" => Some(0u8),
                "1" => Some(1u8),
                _ => None,
            };
            Ok(PairRecord {
                k: f[0].parse().map_err(|_| bad())?,
                settings: SettingPair::new(
                    setting(f[1]).ok_or_else(bad)?,
                    setting(f[2]).ok_or_else(bad)?,
                ),
                outcome1: parse_outcome(f[3]).ok_or_else(bad)?,
                outcome2: parse_outcome(f[4]).ok_or_else(bad)?,
            })
        })
        .collect()
}

fn cell_key(cell: SettingPair) -> String {
    let a = if cell.setting1 == 0 { "t" } else { "tp" };
    let b = if cell.setting2 == 0 { "u" } else { "up" };
    format!("{a}_{b}")
}

/// Summary of a run: the estimate and the exact value it should approach.
pub fn render_summary(n_pairs: usize, est: &ChshEstimate, analytic: f64) -> String {
    let mut doc = KvDoc::new();
    doc.push("n_pairs", n_pairs.to_string());
    doc.push_f64("chsh_estimate", est.value);
    doc.push_f64("chsh_stderr", est.stderr);
    doc.push_f64("chsh_analytic", analytic);
    doc.push_f64(
        "deviation_in_stderr",
        if est.stderr > 0.0 {
            (est.value - analytic) / est.stderr
        } else {
            f64::INFINITY
        },
    );
    for c in &est.per_setting {
        let key = cell_key(c.settings);
        doc.push_f64(&format!("correlation_{key}"), c.correlation);
        doc.push(&format!("count_{key}"), c.count.to_string());
    }
    doc.render()
}
