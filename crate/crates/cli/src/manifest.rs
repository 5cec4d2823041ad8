use std::time::{SystemTime, UNIX_EPOCH};

use tbell_core::experiment::RNG_ALGORITHM;
use tbell_core::quantum::{Hamiltonian, TimeSettings};

use crate::kv::KvDoc;
use crate::CliError;

pub const ARTIFACT_VERSION: &str = concat!("tbell ", env!("CARGO_PKG_VERSION"));

/// Everything needed to rerun a command, plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// `(E₊, E₋)`.
    pub energies: Option<(f64, f64)>,
    pub t0: Option<f64>,
    /// `(t, t′, u, u′)`.
    pub settings: Option<[f64; 4]>,
    pub n_pairs: Option<u64>,
    pub seed: Option<u64>,
    pub scheduler: Option<String>,
    pub steps: Option<u64>,
    /// Command-specific parameters not covered above, in output order.
    pub extra: Vec<(String, String)>,
    pub version: String,
    pub rng_algorithm: String,
    pub timestamp_unix: u64,
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
pub fn current_timestamp() -> u64 {
    if let Some(ts) = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
    {
        return ts;
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            energies: None,
            t0: None,
            settings: None,
            n_pairs: None,
            seed: None,
            scheduler: None,
            steps: None,
            extra: Vec::new(),
            version: ARTIFACT_VERSION.to_string(),
            rng_algorithm: RNG_ALGORITHM.to_string(),
            timestamp_unix: current_timestamp(),
        }
    }

    pub fn with_hamiltonian(mut self, h: &Hamiltonian) -> Self {
        self.energies = Some((h.e_plus(), h.e_minus()));
        self
    }

    pub fn with_settings(mut self, s: &TimeSettings) -> Self {
        self.settings = Some([s.t, s.t_prime, s.u, s.u_prime]);
        self
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian, CliError> {
        let (ep, em) = self
            .energies
            .ok_or_else(|| CliError::Parse("manifest has no energies".into()))?;
        Ok(Hamiltonian::new(ep, em)?)
    }

    pub fn time_settings(&self) -> Result<TimeSettings, CliError> {
        let [t, tp, u, up] = self
            .settings
            .ok_or_else(|| CliError::Parse("manifest has no settings".into()))?;
        Ok(TimeSettings::new(t, tp, u, up)?)
    }

    pub fn to_kv(&self) -> KvDoc {
        let mut doc = KvDoc::new();
        doc.push("command", self.command.as_str());
        if let Some((ep, em)) = self.energies {
            doc.push_f64("e_plus", ep);
            doc.push_f64("e_minus", em);
            doc.push_f64("delta_e", em - ep);
        }
        if let Some(t0) = self.t0 {
            doc.push_f64("t0", t0);
        }
        if let Some([t, tp, u, up]) = self.settings {
            doc.push_f64("t", t);
            doc.push_f64("t_prime", tp);
            doc.push_f64("u", u);
            doc.push_f64("u_prime", up);
        }
        if let Some(n) = self.n_pairs {
            doc.push("n_pairs", n.to_string());
        }
        if let Some(seed) = self.seed {
            doc.push("seed", seed.to_string());
        }
        if let Some(s) = &self.scheduler {
            doc.push("scheduler", s.as_str());
        }
        if let Some(steps) = self.steps {
            doc.push("steps", steps.to_string());
        }
        for (k, v) in &self.extra {
            doc.push(&format!("param.{k}"), v.as_str());
        }
        doc.push("version", self.version.as_str());
        doc.push("rng_algorithm", self.rng_algorithm.as_str());
        doc.push("timestamp_unix", self.timestamp_unix.to_string());
        doc
    }

    pub fn render(&self) -> String {
        self.to_kv().render()
    }

    pub fn from_kv(doc: &KvDoc) -> Result<Self, CliError> {
        let energies = match (
            doc.parse_opt::<f64>("e_plus")?,
            doc.parse_opt::<f64>("e_minus")?,
        ) {
            (Some(ep), Some(em)) => Some((ep, em)),
            (None, None) => None,
            _ => {
                return Err(CliError::Parse(
                    "e_plus and e_minus must appear together".into(),
                ))
            }
        };
        let settings = match (
            doc.parse_opt::<f64>("t")?,
            doc.parse_opt::<f64>("t_prime")?,
            doc.parse_opt::<f64>("u")?,
            doc.parse_opt::<f64>("u_prime")?,
        ) {
            (Some(t), Some(tp), Some(u), Some(up)) => Some([t, tp, u, up]),
            (None, None, None, None) => None,
            _ => return Err(CliError::Parse("incomplete settings".into())),
        };
        let extra = doc
            .entries()
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("param.").map(|k| (k.to_string(), v.clone())))
            .collect();
        Ok(Self {
            command: doc.require("command")?.to_string(),
            energies,
            t0: doc.parse_opt("t0")?,
            settings,
            n_pairs: doc.parse_opt("n_pairs")?,
            seed: doc.parse_opt("seed")?,
            scheduler: doc.get("scheduler").map(str::to_string),
            steps: doc.parse_opt("steps")?,
            extra,
            version: doc.require("version")?.to_string(),
            rng_algorithm: doc.require("rng_algorithm")?.to_string(),
            timestamp_unix: doc.parse_req("timestamp_unix")?,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_kv(&KvDoc::parse(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_manifest_round_trips() {
        let m = RunManifest::new("lhv");
        assert_eq!(RunManifest::parse(&m.render()).unwrap(), m);
    }

    #[test]
    fn incomplete_energies_rejected() {
        let text = "command = x\ne_plus = 1\nversion = v\nrng_algorithm = r\ntimestamp_unix = 0\n";
        assert!(RunManifest::parse(text).is_err());
    }
}
