use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;

use crate::{read_formula, status, write_output, SolveFlags};

#[derive(Args)]
pub struct BenchArgs {
    dir: PathBuf,
    /// Seeds `0..N` are run for every instance.
    #[arg(long, default_value_t = 8)]
    seeds: u64,
    #[command(flatten)]
    flags: SolveFlags,
    /// Add a wall_ms column (makes the output machine dependent).
    #[arg(long)]
    wall_time: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Row {
    instance: String,
    seed: Option<u64>,
    status: String,
    iterations: Option<usize>,
    final_energy: Option<f64>,
    wall_ms: Option<f64>,
    detail: String,
}

fn instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "cnf"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .cnf files in {}", dir.display());
    }
    Ok(files)
}

fn median(sorted: &[usize]) -> Option<f64> {
    match sorted.len() {
        0 => None,
        n if n % 2 == 1 => Some(sorted[n / 2] as f64),
        n => Some((sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0),
    }
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let files = instances(&args.dir)?;
    args.flags.config(0).validate()?;

    let parsed: Vec<_> = files
        .iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            (name, read_formula(p))
        })
        .collect();

    let cells: Vec<(usize, Option<u64>)> = parsed
        .iter()
        .enumerate()
        .flat_map(|(i, (_, f))| match f {
            Ok(_) => (0..args.seeds).map(|s| (i, Some(s))).collect::<Vec<_>>(),
            Err(_) => vec![(i, None)],
        })
        .collect();

    // par_iter + collect keeps input order.
    let rows: Vec<Row> = cells
        .par_iter()
        .map(|&(i, seed)| {
            let (name, formula) = &parsed[i];
            let error_row = |detail: String| Row {
                instance: name.clone(),
                seed,
                status: "error".into(),
                iterations: None,
                final_energy: None,
                wall_ms: None,
                detail,
            };
            let (formula, seed) = match (formula, seed) {
                (Ok(f), Some(s)) => (f, s),
                (Err(e), _) => return error_row(format!("{:#}", e).replace('\n', " ")),
                (Ok(_), None) => unreachable!(),
            };
            let started = Instant::now();
            match ising_decomp::run(formula, &args.flags.config(seed)) {
                Ok(report) => Row {
                    instance: name.clone(),
                    seed: Some(seed),
                    status: status(&report).into(),
                    iterations: Some(report.iterations_used),
                    final_energy: Some(report.final_energy),
                    wall_ms: Some(started.elapsed().as_secs_f64() * 1e3),
                    detail: String::new(),
                },
                Err(e) => error_row(e.to_string()),
            }
        })
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["instance", "seed", "status", "iterations", "final_energy"];
    if args.wall_time {
        header.push("wall_ms");
    }
    header.push("detail");
    w.write_record(&header)?;

    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in &rows {
        let mut rec = vec![
            r.instance.clone(),
            opt(r.seed.map(|s| s.to_string())),
            r.status.clone(),
            opt(r.iterations.map(|i| i.to_string())),
            opt(r.final_energy.map(|e| e.to_string())),
        ];
        if args.wall_time {
            rec.push(opt(r.wall_ms.map(|t| format!("{t:.3}"))));
        }
        rec.push(r.detail.clone());
        w.write_record(&rec)?;
    }

    let runs = rows.iter().filter(|r| r.status != "error").count();
    let mut solved: Vec<usize> = rows
        .iter()
        .filter(|r| r.status == "sat")
        .filter_map(|r| r.iterations)
        .collect();
    solved.sort_unstable();
    let mut summary = vec![
        "ALL".to_string(),
        String::new(),
        format!("{}/{}", solved.len(), runs),
        opt(median(&solved).map(|m| m.to_string())),
        String::new(),
    ];
    if args.wall_time {
        summary.push(String::new());
    }
    summary.push("median iterations over solved runs".into());
    w.write_record(&summary)?;

    write_output(args.out.as_deref(), &w.into_inner()?)
}
