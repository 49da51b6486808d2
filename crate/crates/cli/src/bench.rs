//! Runtime grid for MAM construction. Each cell runs in a child process so
//! that an allocation failure or a timeout only loses that cell.

use std::fs;
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use motif_spectral::{
    build_mam, sample_ba, sample_er, Closure, DirectedGraph, MamSpec, Method, MotifName, Weighting,
};

use crate::files::create;
use crate::UsageError;

/// Dense MAMs beyond this size need tens of gigabytes.
pub const DENSE_GUARD: usize = 30_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Er,
    Ba,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Ba => "ba",
        }
    }

    /// ER uses `p = param / n`; BA attaches `param` edges per vertex.
    fn sample(self, n: usize, param: f64, seed: u64) -> Result<DirectedGraph> {
        Ok(match self {
            Model::Er => sample_er(n, (param / n as f64).min(1.0), seed)?,
            Model::Ba => sample_ba(n, param as usize, seed)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "er")]
    pub model: Model,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<usize>,
    /// Expected out-degree numerator for ER (`p = param / n`), or `m` for BA.
    #[arg(long, default_value_t = 10.0)]
    pub param: f64,
    #[arg(long, value_delimiter = ',', default_value = "M1,M8,M11")]
    pub motifs: Vec<MotifName>,
    #[arg(long, value_delimiter = ',', default_value = "dense,sparse")]
    pub methods: Vec<Method>,
    #[arg(long, default_value = "func")]
    pub closure: Closure,
    #[arg(long, default_value = "mean")]
    pub weighting: Weighting,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long)]
    pub seed: u64,
    /// Run dense cells above the size guard anyway.
    #[arg(long)]
    pub force: bool,
    /// Per-cell wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(short, long, default_value = "-")]
    pub output: std::path::PathBuf,
}

/// One grid cell, run in the child process.
#[derive(Debug, Args)]
pub struct CellArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub param: f64,
    #[arg(long)]
    pub motif: MotifName,
    #[arg(long)]
    pub method: Method,
    #[arg(long)]
    pub closure: Closure,
    #[arg(long)]
    pub weighting: Weighting,
    #[arg(long)]
    pub repeats: usize,
    #[arg(long)]
    pub seed: u64,
}

/// Peak resident set size of this process in bytes.
pub fn peak_rss() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Resets the peak RSS counter so it covers only what follows.
pub fn reset_peak_rss() {
    let _ = fs::write("/proc/self/clear_refs", "5");
}

/// Prints `seconds,...;peak` for the parent to parse.
pub fn run_cell(a: &CellArgs) -> Result<()> {
    let g = a.model.sample(a.n, a.param, a.seed)?;
    let spec = MamSpec::single(a.motif, a.closure, a.weighting).with_method(a.method);
    reset_peak_rss();
    let mut times = Vec::with_capacity(a.repeats);
    for _ in 0..a.repeats {
        let start = Instant::now();
        let m = build_mam(&g, &spec)?;
        times.push(start.elapsed().as_secs_f64());
        drop(m);
    }
    let times: Vec<String> = times.iter().map(f64::to_string).collect();
    println!("{};{}", times.join(","), peak_rss().unwrap_or(0));
    Ok(())
}

struct Row {
    n: usize,
    motif: MotifName,
    method: Method,
    outcome: Result<(Vec<f64>, u64), String>,
}

fn mean_sd(xs: &[f64]) -> (f64, Option<f64>) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (mean, Some(var.sqrt()))
}

fn spawn_cell(b: &BenchArgs, n: usize, motif: MotifName, method: Method) -> Result<(Vec<f64>, u64), String> {
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let mut child = Command::new(exe)
        .arg("bench-cell")
        .args(["--model", b.model.name()])
        .args(["--n", &n.to_string()])
        .args(["--param", &b.param.to_string()])
        .args(["--motif", motif.as_str()])
        .args(["--method", &method.to_string()])
        .args(["--closure", &b.closure.to_string()])
        .args(["--weighting", &b.weighting.to_string()])
        .args(["--repeats", &b.repeats.to_string()])
        .args(["--seed", &b.seed.to_string()])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    loop {
        match child.try_wait().map_err(|e| e.to_string())? {
            Some(_) => break,
            None if b.timeout.is_some_and(|t| start.elapsed().as_secs_f64() > t) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err("timeout".into());
            }
            None => std::thread::sleep(Duration::from_millis(20)),
        }
    }
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(match out.status.code() {
            Some(c) => format!("exit {c}"),
            None => "killed".into(),
        });
    }
    let text = String::from_utf8_lossy(&out.stdout);
    let (times, peak) = text.trim().split_once(';').ok_or("unreadable cell output")?;
    let times =
        times.split(',').map(f64::from_str).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    Ok((times, peak.parse().map_err(|_| "unreadable peak memory")?))
}

pub fn run(b: &BenchArgs) -> Result<()> {
    if b.repeats == 0 {
        bail!(UsageError("--repeats must be at least 1".into()));
    }
    if b.model == Model::Ba && (b.param < 0.0 || b.param.fract() != 0.0) {
        bail!(UsageError("BA needs a whole --param".into()));
    }
    let mut rows = Vec::new();
    for &n in &b.ns {
        for &motif in &b.motifs {
            for &method in &b.methods {
                let outcome = if method == Method::Dense && n > DENSE_GUARD && !b.force {
                    Err("dense size guard".into())
                } else {
                    spawn_cell(b, n, motif, method)
                };
                if let Err(why) = &outcome {
                    eprintln!("n={n} motif={motif} method={method}: DNF ({why})");
                }
                rows.push(Row { n, motif, method, outcome });
            }
        }
    }

    let mut w = csv::Writer::from_writer(create(&b.output)?);
    w.write_record([
        "model",
        "n",
        "param",
        "motif",
        "method",
        "repeats",
        "mean_seconds",
        "stddev_seconds",
        "peak_bytes",
        "status",
    ])?;
    for r in rows {
        let head = [
            b.model.name().to_string(),
            r.n.to_string(),
            b.param.to_string(),
            r.motif.to_string(),
            r.method.to_string(),
        ];
        let tail = match r.outcome {
            Ok((times, peak)) => {
                let (mean, sd) = mean_sd(&times);
                [
                    times.len().to_string(),
                    mean.to_string(),
                    sd.map_or(String::new(), |s| s.to_string()),
                    peak.to_string(),
                    "ok".to_string(),
                ]
            }
            Err(why) => {
                [b.repeats.to_string(), String::new(), String::new(), String::new(), format!("DNF: {why}")]
            }
        };
        w.write_record(head.iter().chain(&tail))?;
    }
    w.flush().context("cannot write report")?;
    Ok(())
}
