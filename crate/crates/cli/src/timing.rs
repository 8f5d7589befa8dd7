use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use ising_decomp::timing_model::{
    decomp_latency, decomposition_speedups, preset, preset_names, reference_preset_for, report, scalability_sweep,
    scale,
};
use ising_decomp::{LatencyMode, TimingConfig};

use crate::write_output;

#[derive(Args)]
pub struct TimingArgs {
    /// Preset name or path to a TOML config.
    target: Option<String>,
    #[arg(long)]
    axi: Option<u32>,
    #[arg(long)]
    pe: Option<u32>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Preset the speedup column is measured against.
    #[arg(long)]
    reference: Option<String>,
    /// Emit the resource-scaling projection table instead.
    #[arg(long)]
    sweep: bool,
    /// Emit the per-benchmark decomposition speedup table instead.
    #[arg(long)]
    speedup_table: bool,
    /// List the built-in presets.
    #[arg(long)]
    list: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Serial,
    Pipelined,
}

fn load(target: &str) -> Result<TimingConfig> {
    let path = Path::new(target);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return TimingConfig::from_toml_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    preset(target).with_context(|| format!("available presets: {}", preset_names().collect::<Vec<_>>().join(", ")))
}

fn f2(x: f64) -> String {
    format!("{x:.2}")
}

pub fn run(args: &TimingArgs) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());

    if args.list {
        w.write_record(["preset"])?;
        for name in preset_names() {
            w.write_record([name])?;
        }
        return write_output(args.out.as_deref(), &w.into_inner()?);
    }

    if args.speedup_table {
        let (rows, bram, ext) = decomposition_speedups()?;
        w.write_record(["benchmark", "speedup_bram", "speedup_ext_ddr"])?;
        for r in rows {
            w.write_record([r.benchmark.to_string(), f2(r.bram), f2(r.ext_ddr)])?;
        }
        w.write_record(["geomean".to_string(), f2(bram), f2(ext)])?;
        return write_output(args.out.as_deref(), &w.into_inner()?);
    }

    let Some(target) = args.target.as_deref() else {
        bail!("a preset name or config path is required (see --list)");
    };
    let mut cfg = load(target)?;
    if let Some(mode) = args.mode {
        cfg.mode = match mode {
            ModeArg::Serial => LatencyMode::Serial,
            ModeArg::Pipelined => LatencyMode::Pipelined,
        };
    }
    if args.axi.is_some() || args.pe.is_some() {
        cfg = scale(&cfg, args.axi.unwrap_or(cfg.axi_bits), args.pe.unwrap_or(cfg.pe_count))?;
    }
    let reference = match (&args.reference, reference_preset_for(target)) {
        (Some(r), _) => Some(load(r)?),
        (None, Some(r)) if preset_names().any(|n| n == target) => Some(preset(r)?),
        _ => None,
    };

    if args.sweep {
        let reference_decomp = reference.as_ref().map(decomp_latency).unwrap_or_else(|| decomp_latency(&cfg));
        w.write_record(["configuration", "axi_bits", "pe_count", "t_clamp_us", "t_subq_us", "t_decomp_us", "speedup"])?;
        for row in scalability_sweep(&cfg, reference_decomp)? {
            w.write_record([
                row.label.to_string(),
                row.axi_bits.to_string(),
                row.pe_count.to_string(),
                f2(row.t_clamp_us),
                f2(row.t_subq_us),
                f2(row.t_decomp_us),
                f2(row.speedup),
            ])?;
        }
        return write_output(args.out.as_deref(), &w.into_inner()?);
    }

    let r = report(&cfg, reference.as_ref())?;
    w.write_record([
        "config",
        "mode",
        "axi_bits",
        "pe_count",
        "dec_ms",
        "comm_ms",
        "cobi_ms",
        "tot_ms",
        "pwr_w",
        "en_mj",
        "t_decomp_us",
        "t_iter_us",
        "duty_cycle_pct",
        "speedup",
    ])?;
    w.write_record([
        target.to_string(),
        cfg.mode.to_string(),
        cfg.axi_bits.to_string(),
        cfg.pe_count.to_string(),
        f2(r.dec_ms_per_100_iters),
        f2(r.comm_ms_per_100_iters),
        f2(r.core_ms_per_100_iters),
        f2(r.time_ms_per_100_iters),
        f2(cfg.power_w),
        f2(r.energy_mj_per_100_iters),
        f2(r.t_decomp_us),
        f2(r.t_iter_us),
        format!("{:.1}", r.duty_cycle_pct),
        f2(r.speedup_vs_reference),
    ])?;
    write_output(args.out.as_deref(), &w.into_inner()?)
}
