//! Run configuration: defaults, flat key-value config files, and the
//! CLI-over-file-over-default precedence.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable overriding the worker count (lowest precedence
/// below an explicit `workers` key or flag).
pub const WORKERS_ENV: &str = "FLOQUET_SSH_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum THalf {
    /// Run the optimization scan and use its optimum.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSelect {
    Superposition,
    PiEigenstate,
    GroundState,
}

impl fmt::Display for StateSelect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateSelect::Superposition => "superposition",
            StateSelect::PiEigenstate => "pi_eigenstate",
            StateSelect::GroundState => "ground_state",
        })
    }
}

/// Full parameter set for one run; every field has a default and can be
/// overridden by a config file or a CLI flag (CLI wins).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub l: usize,
    /// Subsystem size; `None` means floor(sqrt(L)).
    pub l_a: Option<usize>,
    /// Edge probe window; `None` means floor(sqrt(L)).
    pub w: Option<usize>,
    pub delta0: f64,
    pub delta_k: f64,
    pub t0: f64,
    pub t_k: f64,
    pub t_half: THalf,
    pub n_periods: usize,
    pub state: StateSelect,
    pub delta_tol: f64,
    pub w_thr: f64,
    pub clip_eps: f64,
    pub snr_min: f64,
    /// Parallel workers for scans; `None` defers to the environment
    /// variable, then to the available parallelism.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            l: 500,
            l_a: None,
            w: None,
            delta0: -0.3,
            delta_k: 0.8,
            t0: 1.0,
            t_k: 1.0,
            t_half: THalf::Auto,
            n_periods: 800,
            state: StateSelect::Superposition,
            delta_tol: 0.05,
            w_thr: 0.30,
            clip_eps: 1e-15,
            snr_min: 3.0,
            workers: None,
        }
    }
}

fn sqrt_floor(l: usize) -> usize {
    (l as f64).sqrt().floor() as usize
}

impl RunConfig {
    pub fn l_a(&self) -> usize {
        self.l_a.unwrap_or_else(|| sqrt_floor(self.l))
    }

    pub fn w(&self) -> usize {
        self.w.unwrap_or_else(|| sqrt_floor(self.l))
    }

    /// Worker count with precedence: explicit setting, environment
    /// variable, available parallelism.
    pub fn effective_workers(&self) -> usize {
        if let Some(n) = self.workers {
            return n.max(1);
        }
        if let Ok(s) = std::env::var(WORKERS_ENV) {
            if let Ok(n) = s.trim().parse::<usize>() {
                return n.max(1);
            }
        }
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &'static str, reason: String| Error::InvalidParameter { field, reason };
        if self.l < 2 || self.l % 2 != 0 {
            return Err(bad("l", format!("need even L >= 2, got {}", self.l)));
        }
        if self.l_a() < 1 || self.l_a() > self.l {
            return Err(bad("l_a", format!("need 1 <= L_A <= L, got {}", self.l_a())));
        }
        if self.w() < 2 || self.w() > self.l {
            return Err(bad("w", format!("need 2 <= w <= L, got {}", self.w())));
        }
        for (field, v) in [("delta0", self.delta0), ("delta_k", self.delta_k)] {
            if !(v.abs() < 1.0) {
                return Err(bad(field, format!("need |delta| < 1, got {v}")));
            }
        }
        for (field, v) in [("t0", self.t0), ("t_k", self.t_k)] {
            if !(v > 0.0) {
                return Err(bad(field, format!("need a positive hopping scale, got {v}")));
            }
        }
        if let THalf::Fixed(th) = self.t_half {
            if !(th > 0.0) {
                return Err(bad("t_half", format!("need T_half > 0, got {th}")));
            }
        }
        if self.n_periods < 1 {
            return Err(bad("n_periods", "need at least one period".into()));
        }
        if !(self.delta_tol > 0.0 && self.delta_tol < std::f64::consts::FRAC_PI_2) {
            return Err(bad(
                "delta_tol",
                format!("need 0 < delta_tol < pi/2, got {}", self.delta_tol),
            ));
        }
        if !(self.w_thr > 0.0 && self.w_thr <= 1.0) {
            return Err(bad("w_thr", format!("need 0 < w_thr <= 1, got {}", self.w_thr)));
        }
        if !(self.clip_eps > 0.0 && self.clip_eps < 0.5) {
            return Err(bad(
                "clip_eps",
                format!("need 0 < clip_eps < 0.5, got {}", self.clip_eps),
            ));
        }
        if !(self.snr_min >= 0.0) {
            return Err(bad("snr_min", format!("need snr_min >= 0, got {}", self.snr_min)));
        }
        Ok(())
    }

    /// Apply `key = value` pairs, e.g. from a config file.
    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(field: &'static str, v: &str) -> Result<T> {
            v.trim().parse().map_err(|_| Error::InvalidParameter {
                field,
                reason: format!("cannot parse {v:?}"),
            })
        }
        let v = value.trim();
        match key.trim() {
            "l" => self.l = num("l", v)?,
            "l_a" => self.l_a = Some(num("l_a", v)?),
            "w" => self.w = Some(num("w", v)?),
            "delta0" => self.delta0 = num("delta0", v)?,
            "delta_k" => self.delta_k = num("delta_k", v)?,
            "t0" => self.t0 = num("t0", v)?,
            "t_k" => self.t_k = num("t_k", v)?,
            "t_half" => {
                self.t_half = if v == "auto" {
                    THalf::Auto
                } else {
                    THalf::Fixed(num("t_half", v)?)
                }
            }
            "n_periods" => self.n_periods = num("n_periods", v)?,
            "state" => {
                self.state = match v {
                    "superposition" => StateSelect::Superposition,
                    "pi_eigenstate" => StateSelect::PiEigenstate,
                    "ground_state" => StateSelect::GroundState,
                    other => {
                        return Err(Error::InvalidParameter {
                            field: "state",
                            reason: format!("unknown state kind {other:?}"),
                        })
                    }
                }
            }
            "delta_tol" => self.delta_tol = num("delta_tol", v)?,
            "w_thr" => self.w_thr = num("w_thr", v)?,
            "clip_eps" => self.clip_eps = num("clip_eps", v)?,
            "snr_min" => self.snr_min = num("snr_min", v)?,
            "workers" => self.workers = Some(num("workers", v)?),
            other => {
                return Err(Error::InvalidParameter {
                    field: "config",
                    reason: format!("unknown key {other:?}"),
                })
            }
        }
        Ok(())
    }

    /// Parse a flat key-value file (`key = value`, `#` comments, blank
    /// lines ignored) on top of the current values.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidParameter {
                    field: "config",
                    reason: format!("line {}: expected `key = value`, got {line:?}", lineno + 1),
                });
            };
            self.apply_pair(key, value)?;
        }
        Ok(())
    }

    /// Canonical key-value listing of every resolved setting, suitable for
    /// the emitted file headers and for re-running bit-identically.
    pub fn resolved_pairs(&self) -> Vec<(String, String)> {
        let th = match self.t_half {
            THalf::Auto => "auto".to_string(),
            THalf::Fixed(v) => format!("{v:.17e}"),
        };
        vec![
            ("l".into(), self.l.to_string()),
            ("l_a".into(), self.l_a().to_string()),
            ("w".into(), self.w().to_string()),
            ("delta0".into(), format!("{:.17e}", self.delta0)),
            ("delta_k".into(), format!("{:.17e}", self.delta_k)),
            ("t0".into(), format!("{:.17e}", self.t0)),
            ("t_k".into(), format!("{:.17e}", self.t_k)),
            ("t_half".into(), th),
            ("n_periods".into(), self.n_periods.to_string()),
            ("state".into(), self.state.to_string()),
            ("delta_tol".into(), format!("{:.17e}", self.delta_tol)),
            ("w_thr".into(), format!("{:.17e}", self.w_thr)),
            ("clip_eps".into(), format!("{:.17e}", self.clip_eps)),
            ("snr_min".into(), format!("{:.17e}", self.snr_min)),
        ]
    }
}
