//! Experiment configuration, read from JSON and overridable from the CLI.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algo {
    #[serde(rename = "akr")]
    Akr,
    #[serde(rename = "akr+qaa")]
    AkrQaa,
    #[serde(rename = "controlled")]
    Controlled,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Akr => "akr",
            Algo::AkrQaa => "akr+qaa",
            Algo::Controlled => "controlled",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "akr" => Ok(Algo::Akr),
            "akr+qaa" | "qaa" => Ok(Algo::AkrQaa),
            "controlled" => Ok(Algo::Controlled),
            other => Err(format!("unknown algo `{other}` (akr, akr+qaa, controlled)")),
        }
    }
}

/// Step window as multiples of the predicted peak `ceil(pi / (2 alpha))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
    /// Grid points written per (side, algo, delta).
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    25
}

impl Default for Window {
    fn default() -> Self {
        Self {
            lo: 0.5,
            hi: 1.5,
            points: default_points(),
        }
    }
}

impl FromStr for Window {
    type Err = String;

    /// `lo,hi` or `lo,hi,points`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad window value `{p}`: {e}"));
        match parts.as_slice() {
            [lo, hi] => Ok(Window {
                lo: num(lo)?,
                hi: num(hi)?,
                points: default_points(),
            }),
            [lo, hi, n] => Ok(Window {
                lo: num(lo)?,
                hi: num(hi)?,
                points: n.parse().map_err(|e| format!("bad window point count `{n}`: {e}"))?,
            }),
            _ => Err(format!("window must be `lo,hi[,points]`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MarkedPolicy {
    /// `(0, 0)` on every side.
    Origin,
    /// Drawn from the seed, independently per side.
    #[default]
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub algos: Vec<Algo>,
    pub sides: Vec<usize>,
    pub c_delta: Vec<f64>,
    pub window: Window,
    /// Probe every `stride` steps; by default every step up to side 32,
    /// about 512 probes per run above.
    pub stride: Option<usize>,
    pub seed: u64,
    pub marked: MarkedPolicy,
    /// Worker threads; all cores when absent.
    pub workers: Option<usize>,
    /// Largest side for which the dense eigenphase is also computed.
    pub dense_max_side: usize,
    pub out: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            algos: vec![Algo::Akr, Algo::AkrQaa, Algo::Controlled],
            sides: vec![16, 32, 64, 128],
            c_delta: vec![0.5, 1.0, 2.0],
            window: Window::default(),
            stride: None,
            seed: 0,
            marked: MarkedPolicy::default(),
            workers: None,
            dense_max_side: 8,
            out: PathBuf::from("results.csv"),
        }
    }
}

impl ExperimentSpec {
    pub fn from_json_str(s: &str) -> anyhow::Result<Self> {
        let spec: Self = serde_json::from_str(s).context("parsing experiment config")?;
        Ok(spec)
    }

    pub fn from_json_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.algos.is_empty() {
            bail!("no algorithms selected");
        }
        if self.sides.is_empty() {
            bail!("no sides selected");
        }
        for &side in &self.sides {
            if side < 4 || side % 2 != 0 {
                bail!("sides must be even and at least 4, got {side}");
            }
        }
        if self.algos.contains(&Algo::Controlled) && self.c_delta.is_empty() {
            bail!("controlled runs need at least one c_delta");
        }
        if let Some(c) = self.c_delta.iter().find(|c| !(**c > 0.0)) {
            bail!("c_delta values must be positive, got {c}");
        }
        let w = &self.window;
        if !(w.lo > 0.0 && w.hi > w.lo) {
            bail!("window multipliers must satisfy 0 < lo < hi, got {}..{}", w.lo, w.hi);
        }
        if w.points < 2 {
            bail!("window needs at least 2 points");
        }
        if self.stride == Some(0) {
            bail!("stride must be positive");
        }
        if self.workers == Some(0) {
            bail!("workers must be positive");
        }
        Ok(())
    }

    /// Marked site for `side` under this spec's policy and seed.
    pub fn marked_site(&self, side: usize) -> (usize, usize) {
        match self.marked {
            MarkedPolicy::Origin => (0, 0),
            MarkedPolicy::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (side as u64).rotate_left(32));
                (rng.gen_range(0..side), rng.gen_range(0..side))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_defaults() {
        let spec = ExperimentSpec::from_json_str(r#"{"algos": ["controlled"], "sides": [8, 16]}"#).unwrap();
        assert_eq!(spec.algos, vec![Algo::Controlled]);
        assert_eq!(spec.sides, vec![8, 16]);
        assert_eq!(spec.window, Window::default());
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(ExperimentSpec::from_json_str(&text).unwrap(), spec);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ExperimentSpec::from_json_str(r#"{"sidez": [8]}"#).is_err());
    }

    #[test]
    fn validation() {
        let mut spec = ExperimentSpec::default();
        spec.validate().unwrap();
        spec.sides = vec![9];
        assert!(spec.validate().is_err());
        spec.sides = vec![8];
        spec.window.lo = 0.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn parse_cli_values() {
        assert_eq!("akr+qaa".parse::<Algo>().unwrap(), Algo::AkrQaa);
        assert!("grover".parse::<Algo>().is_err());
        let w: Window = "0.8,1.2,9".parse().unwrap();
        assert_eq!((w.lo, w.hi, w.points), (0.8, 1.2, 9));
        assert!("1".parse::<Window>().is_err());
    }

    #[test]
    fn marked_site_is_seeded() {
        let spec = ExperimentSpec {
            seed: 7,
            ..Default::default()
        };
        assert_eq!(spec.marked_site(32), spec.marked_site(32));
        let (x, y) = spec.marked_site(16);
        assert!(x < 16 && y < 16);
        let origin = ExperimentSpec {
            marked: MarkedPolicy::Origin,
            ..Default::default()
        };
        assert_eq!(origin.marked_site(64), (0, 0));
    }
}
