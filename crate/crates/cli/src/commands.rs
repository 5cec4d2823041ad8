//! Subcommand implementations. Each returns its output as values; the binary
//! prints them and maps errors to exit codes.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use tbell_core::experiment::{estimate_chsh, run_experiment, ChshEstimate};
use tbell_core::lhv::{max_over_full_strategies, max_over_pi_strategies, SettingLabels};
use tbell_core::quantum::{chsh_value, chsh_value_analytic, optimal_settings, TimeSettings};
use tbell_core::relativity::{
    achievable_orderings, classify, critical_velocity, Event, EventLabel,
};

use crate::config::Params;
use crate::kv::fmt_f64;
use crate::manifest::RunManifest;
use crate::records::{parse_records, render_records, render_summary};
use crate::table::{Cell, OutputTable};
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const RECORDS_FILE: &str = "records.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

/// Fewest pairs `simulate` accepts.
pub const MIN_SIMULATE_PAIRS: u64 = 4;

pub const DEFAULT_SHEAR_MIN: f64 = 0.0;
pub const DEFAULT_SHEAR_MAX: f64 = 2.0 * PI;

/// A manifest followed by a table.
#[derive(Debug, Clone)]
pub struct TableOutput {
    pub manifest: RunManifest,
    pub table: OutputTable,
}

impl TableOutput {
    /// Manifest as `# key = value` comment lines, then the CSV table.
    pub fn render(&self) -> String {
        let mut out = self.manifest.to_kv().render_prefixed("# ");
        out.push_str(&self.table.to_csv());
        out
    }
}

fn base_manifest(command: &str, p: &Params) -> RunManifest {
    let mut m = RunManifest::new(command).with_hamiltonian(&p.hamiltonian);
    m.t0 = Some(p.t0);
    m
}

/// The four optimal times and the CHSH value they produce.
pub fn optimal(p: &Params) -> Result<TableOutput, CliError> {
    let s = optimal_settings(&p.hamiltonian, p.t0)?;
    let value = chsh_value_analytic(&p.hamiltonian, &s);
    let manifest = base_manifest("optimal", p).with_settings(&s);
    let mut table = OutputTable::new(&[
        "delta_e",
        "t0",
        "t",
        "t_prime",
        "u",
        "u_prime",
        "chsh_value",
        "chsh_abs",
    ]);
    table.push(vec![
        p.hamiltonian.delta_e().into(),
        p.t0.into(),
        s.t.into(),
        s.t_prime.into(),
        s.u.into(),
        s.u_prime.into(),
        value.into(),
        value.abs().into(),
    ])?;
    Ok(TableOutput { manifest, table })
}

/// Optimal settings with wing-2 phases sheared by `δ`, i.e. `u` and `u′` shifted by `δ/ΔE`.
pub fn sheared_settings(p: &Params, shear: f64) -> Result<TimeSettings, CliError> {
    let s = optimal_settings(&p.hamiltonian, p.t0)?;
    let shift = shear / p.hamiltonian.delta_e();
    Ok(TimeSettings::new(
        s.t,
        s.t_prime,
        s.u + shift,
        s.u_prime + shift,
    )?)
}

/// Sweeps `steps` shears evenly over `[shear_min, shear_max)`.
pub fn scan(p: &Params, shear_min: f64, shear_max: f64) -> Result<TableOutput, CliError> {
    if p.steps == 0 {
        return Err(CliError::Invalid("steps must be at least 1".into()));
    }
    if !(shear_min.is_finite() && shear_max.is_finite()) || shear_min >= shear_max {
        return Err(CliError::Invalid(format!(
            "bad shear range [{shear_min}, {shear_max})"
        )));
    }
    let mut manifest = base_manifest("scan", p);
    manifest.steps = Some(p.steps);
    manifest
        .extra
        .push(("shear_min".into(), fmt_f64(shear_min)));
    manifest
        .extra
        .push(("shear_max".into(), fmt_f64(shear_max)));
    let mut table = OutputTable::new(&["shear", "u", "u_prime", "chsh_value", "chsh_abs"]);
    let width = (shear_max - shear_min) / p.steps as f64;
    for i in 0..p.steps {
        let shear = shear_min + i as f64 * width;
        let s = sheared_settings(p, shear)?;
        let v = chsh_value(&p.hamiltonian, &s)?;
        table.push(vec![
            shear.into(),
            s.u.into(),
            s.u_prime.into(),
            v.into(),
            v.abs().into(),
        ])?;
    }
    Ok(TableOutput { manifest, table })
}

/// What `simulate` produced.
#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub manifest: RunManifest,
    pub estimate: ChshEstimate,
    pub summary: String,
    pub dir: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs a Monte Carlo experiment at the optimal settings and writes
/// `manifest.txt`, `records.csv` and `summary.txt` into the output directory.
pub fn simulate(p: &Params) -> Result<SimulationOutput, CliError> {
    if p.pairs < MIN_SIMULATE_PAIRS {
        return Err(CliError::Invalid(format!(
            "pairs must be at least {MIN_SIMULATE_PAIRS}, got {}",
            p.pairs
        )));
    }
    let dir = p
        .out
        .clone()
        .ok_or_else(|| CliError::Invalid("simulate needs --out <dir>".into()))?;
    let s = optimal_settings(&p.hamiltonian, p.t0)?;
    let mut manifest = base_manifest("simulate", p).with_settings(&s);
    manifest.n_pairs = Some(p.pairs);
    manifest.seed = Some(p.seed);
    manifest.scheduler = Some(p.scheduler.to_string());

    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    write_file(&dir.join(MANIFEST_FILE), &manifest.render())?;

    let records = run_experiment(&p.hamiltonian, &s, p.pairs, p.seed, p.scheduler)?;
    write_file(&dir.join(RECORDS_FILE), &render_records(&records))?;
    let estimate = estimate_chsh(&records)?;
    let summary = render_summary(records.len(), &estimate, chsh_value(&p.hamiltonian, &s)?);
    write_file(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(SimulationOutput {
        manifest,
        estimate,
        summary,
        dir,
    })
}

/// Recomputes the summary of a `simulate` directory from its manifest and
/// records and checks it matches `summary.txt` byte for byte.
pub fn verify(dir: &Path) -> Result<String, CliError> {
    let manifest = RunManifest::parse(&read_file(&dir.join(MANIFEST_FILE))?)?;
    if manifest.command != "simulate" {
        return Err(CliError::Parse(format!(
            "manifest is for `{}`, not `simulate`",
            manifest.command
        )));
    }
    let h = manifest.hamiltonian()?;
    let s = manifest.time_settings()?;
    let records = parse_records(&read_file(&dir.join(RECORDS_FILE))?)?;
    if let Some(n) = manifest.n_pairs {
        if records.len() as u64 != n {
            return Err(CliError::Mismatch(format!(
                "manifest lists {n} pairs, records file has {}",
                records.len()
            )));
        }
    }
    let recomputed = render_summary(
        records.len(),
        &estimate_chsh(&records)?,
        chsh_value(&h, &s)?,
    );
    let stored = read_file(&dir.join(SUMMARY_FILE))?;
    if recomputed != stored {
        let line = recomputed
            .lines()
            .zip(stored.lines())
            .find(|(a, b)| a != b)
            .map(|(a, b)| format!("recomputed `{a}`, stored `{b}`"))
            .unwrap_or_else(|| "summary lengths differ".into());
        return Err(CliError::Mismatch(line));
    }
    Ok(recomputed)
}

/// Exhaustive local-realist maxima with their witnesses.
pub fn lhv() -> Result<TableOutput, CliError> {
    let labels = SettingLabels::standard();
    let pi = max_over_pi_strategies(&labels);
    let full = max_over_full_strategies(&labels);
    let pi_witness: Vec<String> = pi
        .witness
        .entries()
        .map(|((wing, own), v)| format!("{wing}[{own}]={v}"))
        .collect();
    let full_witness: Vec<String> = full
        .witness
        .entries()
        .map(|((wing, own, other), v)| format!("{wing}[{own}|{other}]={v}"))
        .collect();
    let mut table = OutputTable::new(&["kind", "max_abs_bell", "scanned", "entries", "witness"]);
    table.push(vec![
        "parameter_independent".into(),
        i64::from(pi.value).into(),
        (pi.scanned as i64).into(),
        (pi.witness.len() as i64).into(),
        pi_witness.join(";").into(),
    ])?;
    table.push(vec![
        "unrestricted".into(),
        i64::from(full.value).into(),
        (full.scanned as i64).into(),
        (full.witness.len() as i64).into(),
        full_witness.join(";").into(),
    ])?;
    Ok(TableOutput {
        manifest: RunManifest::new("lhv"),
        table,
    })
}

/// Parses `"t,x"`.
pub fn parse_event(spec: &str, label: EventLabel) -> Result<Event, CliError> {
    let bad = || CliError::Invalid(format!("event `{spec}` must be `t,x`"));
    let (t, x) = spec.split_once(',').ok_or_else(bad)?;
    let t: f64 = t.trim().parse().map_err(|_| bad())?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    Ok(Event::new(t, x, label)?)
}

/// Interval classes, critical velocities and realizable orderings of three
/// events given in the order `η±, η′, η″`.
pub fn frames(specs: &[String]) -> Result<TableOutput, CliError> {
    if specs.len() != 3 {
        return Err(CliError::Invalid(format!(
            "frames needs exactly three events, got {}",
            specs.len()
        )));
    }
    let mut events = Vec::with_capacity(3);
    for (spec, label) in specs.iter().zip(EventLabel::ALL) {
        events.push(parse_event(spec, label)?);
    }
    let events: [Event; 3] = events.try_into().expect("three events");
    let orderings = achievable_orderings(&events)?;

    let mut manifest = RunManifest::new("frames");
    for e in &events {
        manifest.extra.push((
            e.label.to_string(),
            format!("{},{}", fmt_f64(e.t), fmt_f64(e.x)),
        ));
    }
    let mut table = OutputTable::new(&["section", "item", "class", "velocity"]);
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (&events[i], &events[j]);
            let v = critical_velocity(a, b)?;
            table.push(vec![
                "pair".into(),
                format!("{}-{}", a.label, b.label).into(),
                classify(a, b).to_string().into(),
                v.map_or(Cell::Empty, Cell::Num),
            ])?;
        }
    }
    for w in &orderings {
        let [a, b, c] = w.ordering.0;
        table.push(vec![
            "ordering".into(),
            format!("{a}<{b}<{c}").into(),
            "strict".into(),
            w.velocity.into(),
        ])?;
    }
    Ok(TableOutput { manifest, table })
}
