//! Closed-form latency, duty-cycle and energy model of the decomposition loop.
//!
//! Stages per iteration: graph traversal (GTU), clamping and subproblem
//! generation (run side by side), the Ising core, and feedback/communication.
//! Two accountings are provided:
//!
//! * [`LatencyMode::Serial`]: `T_GTU + max(T_clamp, T_SubQ) + T_feedback + T_core`,
//!   the additive form behind the per-100-iteration breakdown tables;
//! * [`LatencyMode::Pipelined`]: `max(T_GTU, T_core + T_feedback) + max(T_clamp, T_SubQ)`,
//!   with the next traversal overlapped with the current core run.
//!
//! All times are microseconds unless a name says otherwise.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatencyMode {
    #[default]
    Serial,
    Pipelined,
}

impl fmt::Display for LatencyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatencyMode::Serial => "serial",
            LatencyMode::Pipelined => "pipelined",
        })
    }
}

impl FromStr for LatencyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serial" => Ok(LatencyMode::Serial),
            "pipelined" => Ok(LatencyMode::Pipelined),
            other => Err(Error::InvalidConfig(format!("unknown latency mode {other:?}"))),
        }
    }
}

pub const AXI_WIDTHS: [u32; 3] = [128, 256, 512];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingConfig {
    pub t_gtu_us: f64,
    pub t_clamp_us: f64,
    pub t_subq_us: f64,
    pub t_core_us: f64,
    pub t_feedback_us: f64,
    pub power_w: f64,
    pub axi_bits: u32,
    pub pe_count: u32,
    #[serde(default)]
    pub mode: LatencyMode,
}

impl TimingConfig {
    pub fn validate(&self) -> Result<()> {
        let stages = [
            ("t_gtu_us", self.t_gtu_us),
            ("t_clamp_us", self.t_clamp_us),
            ("t_subq_us", self.t_subq_us),
            ("t_core_us", self.t_core_us),
            ("t_feedback_us", self.t_feedback_us),
        ];
        for (name, v) in stages {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be a non-negative number, got {v}")));
            }
        }
        if !(self.power_w.is_finite() && self.power_w > 0.0) {
            return Err(Error::InvalidConfig(format!("power_w must be positive, got {}", self.power_w)));
        }
        if !AXI_WIDTHS.contains(&self.axi_bits) {
            return Err(Error::InvalidConfig(format!(
                "axi_bits must be one of {AXI_WIDTHS:?}, got {}",
                self.axi_bits
            )));
        }
        if self.pe_count == 0 {
            return Err(Error::InvalidConfig("pe_count must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses a `key = number` document (TOML) and validates it.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: TimingConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_mode(mut self, mode: LatencyMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Built-in configurations, keyed by name.
pub const PRESETS: [(&str, &str); 6] = [
    ("cpu-pcie-uf20", include_str!("../presets/cpu-pcie-uf20.toml")),
    ("cpu-pcie-uf50", include_str!("../presets/cpu-pcie-uf50.toml")),
    ("fpga-bram-uf20", include_str!("../presets/fpga-bram-uf20.toml")),
    ("fpga-bram-uf50", include_str!("../presets/fpga-bram-uf50.toml")),
    ("fpga-extddr-uf20", include_str!("../presets/fpga-extddr-uf20.toml")),
    ("fpga-extddr-uf50", include_str!("../presets/fpga-extddr-uf50.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset(name: &str) -> Result<TimingConfig> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    TimingConfig::from_toml_str(text)
}

/// The CPU baseline matching a preset's benchmark family (`…-uf20` → `cpu-pcie-uf20`).
pub fn reference_preset_for(name: &str) -> Option<&'static str> {
    let family = name.rsplit('-').next()?;
    preset_names().find(|n| n.starts_with("cpu-") && n.ends_with(family))
}

/// `T_GTU + max(T_clamp, T_SubQ)`.
pub fn decomp_latency(cfg: &TimingConfig) -> f64 {
    cfg.t_gtu_us + cfg.t_clamp_us.max(cfg.t_subq_us)
}

pub fn iter_latency(cfg: &TimingConfig) -> f64 {
    match cfg.mode {
        LatencyMode::Serial => decomp_latency(cfg) + cfg.t_feedback_us + cfg.t_core_us,
        LatencyMode::Pipelined => {
            cfg.t_gtu_us.max(cfg.t_core_us + cfg.t_feedback_us) + cfg.t_clamp_us.max(cfg.t_subq_us)
        }
    }
}

/// Share of a serial iteration the core spends solving, in percent.
pub fn duty_cycle(cfg: &TimingConfig) -> Result<f64> {
    let t_iter = iter_latency(&cfg.with_mode(LatencyMode::Serial));
    if t_iter <= 0.0 {
        return Err(Error::InvalidConfig("iteration latency is zero".into()));
    }
    Ok(100.0 * cfg.t_core_us / t_iter)
}

/// W × ms = mJ.
pub fn energy_mj(cfg: &TimingConfig, duration_ms: f64) -> f64 {
    cfg.power_w * duration_ms
}

/// Projects a configuration onto a new AXI width and PE count. Subproblem
/// generation scales with bus width, clamping with the number of PEs; the
/// other stages are unchanged.
pub fn scale(cfg: &TimingConfig, new_axi_bits: u32, new_pe_count: u32) -> Result<TimingConfig> {
    let out = TimingConfig {
        t_subq_us: cfg.t_subq_us * f64::from(cfg.axi_bits) / f64::from(new_axi_bits.max(1)),
        t_clamp_us: cfg.t_clamp_us * f64::from(cfg.pe_count) / f64::from(new_pe_count.max(1)),
        axi_bits: new_axi_bits,
        pe_count: new_pe_count,
        ..*cfg
    };
    out.validate()?;
    Ok(out)
}

pub fn speedup(reference: f64, candidate: f64) -> Result<f64> {
    if !(reference > 0.0 && candidate > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "speedup needs positive times, got {reference} and {candidate}"
        )));
    }
    Ok(reference / candidate)
}

pub fn geomean(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() || ratios.iter().any(|r| r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidConfig("geomean needs a non-empty list of positive ratios".into()));
    }
    Ok((ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingReport {
    pub t_decomp_us: f64,
    pub t_iter_us: f64,
    pub duty_cycle_pct: f64,
    pub dec_ms_per_100_iters: f64,
    pub comm_ms_per_100_iters: f64,
    pub core_ms_per_100_iters: f64,
    pub time_ms_per_100_iters: f64,
    pub energy_mj_per_100_iters: f64,
    /// Reference time per 100 iterations over this configuration's.
    pub speedup_vs_reference: f64,
}

/// Evaluates `cfg`; without a reference the speedup is 1.
pub fn report(cfg: &TimingConfig, reference: Option<&TimingConfig>) -> Result<TimingReport> {
    cfg.validate()?;
    let t_iter = iter_latency(cfg);
    let time_ms = t_iter * 100.0 / 1000.0;
    let speedup_vs_reference = match reference {
        Some(r) => speedup(iter_latency(&r.with_mode(cfg.mode)), t_iter)?,
        None => 1.0,
    };
    Ok(TimingReport {
        t_decomp_us: decomp_latency(cfg),
        t_iter_us: t_iter,
        duty_cycle_pct: duty_cycle(cfg)?,
        dec_ms_per_100_iters: decomp_latency(cfg) / 10.0,
        comm_ms_per_100_iters: cfg.t_feedback_us / 10.0,
        core_ms_per_100_iters: cfg.t_core_us / 10.0,
        time_ms_per_100_iters: time_ms,
        energy_mj_per_100_iters: energy_mj(cfg, time_ms),
        speedup_vs_reference,
    })
}

/// One row of a resource-scaling projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub label: &'static str,
    pub axi_bits: u32,
    pub pe_count: u32,
    pub t_clamp_us: f64,
    pub t_subq_us: f64,
    pub t_decomp_us: f64,
    /// `reference_decomp_us / t_decomp_us`.
    pub speedup: f64,
}

pub const PROJECTION_STEPS: [(&str, u32, u32); 5] = [
    ("Baseline", 128, 8),
    ("Wider AXI", 256, 8),
    ("Wider AXI + More PEs", 256, 16),
    ("Wider AXI", 512, 8),
    ("Combined Scaling", 512, 32),
];

/// Decomposition latency under each of [`PROJECTION_STEPS`].
///
/// Stage latencies of `baseline` are first rounded to 0.1 µs, the precision
/// the published projections start from, then scaled.
pub fn scalability_sweep(baseline: &TimingConfig, reference_decomp_us: f64) -> Result<Vec<ProjectionRow>> {
    let round1 = |x: f64| (x * 10.0).round() / 10.0;
    let base = TimingConfig {
        t_gtu_us: round1(baseline.t_gtu_us),
        t_clamp_us: round1(baseline.t_clamp_us),
        t_subq_us: round1(baseline.t_subq_us),
        ..*baseline
    };
    PROJECTION_STEPS
        .iter()
        .map(|&(label, axi, pe)| {
            let cfg = scale(&base, axi, pe)?;
            let t_decomp = decomp_latency(&cfg);
            Ok(ProjectionRow {
                label,
                axi_bits: axi,
                pe_count: pe,
                t_clamp_us: cfg.t_clamp_us,
                t_subq_us: cfg.t_subq_us,
                t_decomp_us: t_decomp,
                speedup: speedup(reference_decomp_us, t_decomp)?,
            })
        })
        .collect()
}

/// Measured decomposition latency per iteration in ms:
/// `(benchmark, cpu, fpga_bram, fpga_ext_ddr)`.
pub const DECOMP_LATENCY_MS: [(&str, f64, f64, f64); 6] = [
    ("uf20-01", 0.128, 0.048, 0.068),
    ("uf20-02", 0.099, 0.051, 0.063),
    ("uf20-03", 0.100, 0.052, 0.063),
    ("uf50-01", 0.183, 0.101, 0.125),
    ("uf50-02", 0.203, 0.110, 0.141),
    ("uf50-03", 0.201, 0.102, 0.128),
];

/// Geometric mean of the published BRAM-mode speedup.
pub const PUBLISHED_BRAM_GEOMEAN: f64 = 1.93;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub benchmark: &'static str,
    pub bram: f64,
    pub ext_ddr: f64,
}

/// Per-benchmark speedups of [`DECOMP_LATENCY_MS`] and their geomeans
/// `(rows, bram_geomean, ext_ddr_geomean)`.
pub fn decomposition_speedups() -> Result<(Vec<SpeedupRow>, f64, f64)> {
    let rows = DECOMP_LATENCY_MS
        .iter()
        .map(|&(benchmark, cpu, bram, ext)| {
            Ok(SpeedupRow {
                benchmark,
                bram: speedup(cpu, bram)?,
                ext_ddr: speedup(cpu, ext)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bram: Vec<f64> = rows.iter().map(|r| r.bram).collect();
    let ext: Vec<f64> = rows.iter().map(|r| r.ext_ddr).collect();
    Ok((rows, geomean(&bram)?, geomean(&ext)?))
}
