//! Batch front end for the shiftpress toolkit. Every command reads its
//! inputs from files named on the command line, writes results to standard
//! output, and maps error kinds to exit codes: 2 for configuration
//! problems, 3 for blown resource budgets, 4 for numeric failures.

mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shiftpress::{
    ball_bound_report, bowen_dimension, build_good_set, build_shift, counting_pressure,
    dimension_spectrum, empirical_mistake_function, entropy_with, generate_point,
    irregular_pressure, make_schedule, parse_itinerary, parse_potential, parse_shift_config,
    spectrum_domain, spectrum_legendre, track_convergence, transfer_pressure, Error,
    IrregularOutcome, MeasureRep, Potential64, ShiftConfig, Subshift64,
};

#[derive(Parser)]
#[command(name = "shiftpress", version, about = "Subshift entropy, pressure and spectrum toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Topological entropy of a shift, exact or bracketed.
    Entropy {
        /// Shift definition file (JSON).
        #[arg(long)]
        shift: PathBuf,
        /// Word length for the counting upper bound.
        #[arg(long, default_value_t = 18)]
        n: usize,
        /// Truncation depth for the inner finite-type lower bound.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Enumeration budget override (words).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Topological pressure of a potential over a shift.
    Pressure {
        #[arg(long)]
        shift: PathBuf,
        /// Potential file (text: alphabet/depth header, then word value lines).
        #[arg(long)]
        potential: PathBuf,
        /// Word length for counting estimates on shifts without a graph presentation.
        #[arg(long, default_value_t = 18)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Birkhoff level-set pressure spectrum, or the irregular-set value.
    Spectrum {
        #[arg(long)]
        shift: PathBuf,
        /// Potential whose pressure is maximized over the level set; omitted means zero.
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Observable defining the Birkhoff level sets.
        #[arg(long)]
        psi: PathBuf,
        /// Single level to evaluate.
        #[arg(long)]
        alpha: Option<f64>,
        /// Evenly spaced levels "lo:hi:count".
        #[arg(long)]
        alpha_grid: Option<String>,
        /// Evaluate the divergence-set pressure instead of level sets.
        #[arg(long)]
        irregular: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Dimension spectrum: the Bowen root restricted to a Birkhoff level.
    Dimension {
        #[arg(long)]
        shift: PathBuf,
        /// Positive metric potential.
        #[arg(long)]
        potential: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        alpha_grid: Option<String>,
        /// Root-finding tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Bowen dimension: the root of the pressure equation for a metric potential.
    Bowen {
        #[arg(long)]
        shift: PathBuf,
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Generate an orbit prefix tracking an itinerary of target measures.
    MoranGenerate {
        /// Shift definition file; its good-set rule controls the gluing projection.
        #[arg(long)]
        shift: PathBuf,
        /// Itinerary file (JSON: depth, eps_chain, measures).
        #[arg(long)]
        itinerary: PathBuf,
        /// Growth-ratio bound for the block schedule, in (0, 1/4).
        #[arg(long, default_value_t = 0.15)]
        theta: f64,
        /// Minimum total prefix length.
        #[arg(long, default_value_t = 20000)]
        length: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tracking depth for the diagnostic log; defaults to the itinerary depth.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Mistake-function table and ball-growth audit for a good set.
    EditAnalyze {
        /// Shift definition file; its good-set rule selects the good words.
        #[arg(long)]
        shift: PathBuf,
        /// Largest word length audited.
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Run the built-in oracle and invariant suite; print a pass/fail table.
    Verify {
        /// Directory of shipped config files to round-trip check in addition.
        #[arg(long)]
        config_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    let wrote = write_stdout(&out);
    match result {
        Ok(()) if wrote => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Emits the accumulated output; a closed pipe is not an error.
fn write_stdout(text: &str) -> bool {
    use std::io::Write;
    let mut lock = std::io::stdout().lock();
    match lock.write_all(text.as_bytes()).and_then(|()| lock.flush()) {
        Ok(()) => true,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => true,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            false
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Domain(_) => 2,
        Error::Resource { .. } => 3,
        Error::Numeric(_) | Error::NotFound(_) | Error::Construction(_) => 4,
    }
}

/// Renders with 12 significant digits, plain decimal when the magnitude
/// allows, trailing zeros trimmed.
fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..=12).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        format!("{x:.11e}")
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_shift(path: &Path, budget: Option<usize>) -> Result<(ShiftConfig, Subshift64), Error> {
    let cfg = parse_shift_config(&read_file(path)?)?;
    let mut shift: Subshift64 = build_shift(&cfg)?;
    if let Some(b) = budget {
        shift = shift.with_budget(b);
    }
    Ok((cfg, shift))
}

fn load_potential(path: &Path) -> Result<Potential64, Error> {
    parse_potential(&read_file(path)?)
}

/// Levels from `--alpha` or `--alpha-grid lo:hi:count`.
fn parse_levels(alpha: Option<f64>, grid: Option<String>) -> Result<Vec<f64>, Error> {
    match (alpha, grid) {
        (Some(_), Some(_)) => {
            Err(Error::Parse("give either --alpha or --alpha-grid, not both".into()))
        }
        (Some(a), None) => Ok(vec![a]),
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!(
                    "--alpha-grid expects lo:hi:count, got {spec}"
                )));
            }
            let lo: f64 = parts[0]
                .parse()
                .map_err(|e| Error::Parse(format!("--alpha-grid lo: {e}")))?;
            let hi: f64 = parts[1]
                .parse()
                .map_err(|e| Error::Parse(format!("--alpha-grid hi: {e}")))?;
            let count: usize = parts[2]
                .parse()
                .map_err(|e| Error::Parse(format!("--alpha-grid count: {e}")))?;
            if count == 0 {
                return Err(Error::Parse("--alpha-grid count must be positive".into()));
            }
            if count == 1 {
                return Ok(vec![lo]);
            }
            Ok((0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect())
        }
        (None, None) => Err(Error::Parse("give --alpha or --alpha-grid".into())),
    }
}

fn run(command: Command, out: &mut String) -> Result<(), Error> {
    match command {
        Command::Entropy { shift, n, depth, format, budget } => {
            let (_, x) = load_shift(&shift, budget)?;
            let outcome = entropy_with(&x, n, depth)?;
            match format {
                Format::Json => {
                    let mut obj = serde_json::Map::new();
                    if outcome.exact {
                        obj.insert("value".into(), outcome.value().into());
                    } else {
                        obj.insert("lower".into(), outcome.lower.into());
                        obj.insert("upper".into(), outcome.upper.into());
                    }
                    obj.insert("method".into(), outcome.method.clone().into());
                    if let Some(n) = outcome.n {
                        obj.insert("n".into(), n.into());
                    }
                    if let Some(s) = outcome.series_check {
                        obj.insert("series_check".into(), s.into());
                    }
                    let _ = writeln!(out, "{}", serde_json::Value::Object(obj));
                }
                Format::Csv => {
                    let zero = Potential64::zero(x.alphabet());
                    let _ = writeln!(out, "n,estimate");
                    for k in 2..=n.max(2) {
                        let est = counting_pressure(&x, &zero, k)?;
                        let _ = writeln!(out, "{k},{}", sig12(est.upper));
                    }
                }
            }
            Ok(())
        }
        Command::Pressure { shift, potential, n, format, budget } => {
            let (_, x) = load_shift(&shift, budget)?;
            let phi = load_potential(&potential)?;
            match format {
                Format::Json => {
                    if x.is_full() || x.sft_spec().is_some() {
                        let analysis = transfer_pressure(&x, &phi)?;
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::json!({
                                "value": analysis.value,
                                "method": "transfer operator spectral radius",
                                "spectral_radius": analysis.spectral_radius,
                                "states": analysis.states,
                                "reducible": analysis.reducible,
                            })
                        );
                    } else {
                        let est = counting_pressure(&x, &phi, n)?;
                        let _ = writeln!(
                            out,
                            "{}",
                            serde_json::json!({
                                "lower": est.lower,
                                "upper": est.upper,
                                "method": est.method,
                                "n": est.n,
                            })
                        );
                    }
                }
                Format::Csv => {
                    let _ = writeln!(out, "n,estimate");
                    for k in phi.depth().max(2)..=n.max(2) {
                        let est = counting_pressure(&x, &phi, k)?;
                        let _ = writeln!(out, "{k},{}", sig12(est.upper));
                    }
                }
            }
            Ok(())
        }
        Command::Spectrum { shift, potential, psi, alpha, alpha_grid, irregular, format, budget } => {
            let (_, x) = load_shift(&shift, budget)?;
            let psi = load_potential(&psi)?;
            let phi = match potential {
                Some(p) => load_potential(&p)?,
                None => Potential64::zero(x.alphabet()),
            };
            if irregular {
                match irregular_pressure(&x, &phi, &psi)? {
                    IrregularOutcome::Empty => match format {
                        Format::Json => {
                            let _ = writeln!(out, "{}", serde_json::json!({"outcome": "empty"}));
                        }
                        Format::Csv => {
                            let _ = writeln!(out, "# irregular set empty");
                        }
                    },
                    IrregularOutcome::Value { value, diagnostic } => match format {
                        Format::Json => {
                            let _ = writeln!(
                                out,
                                "{}",
                                serde_json::json!({
                                    "outcome": "value",
                                    "value": value,
                                    "diagnostic": diagnostic,
                                })
                            );
                        }
                        Format::Csv => {
                            let _ = writeln!(out, "# irregular pressure {}", sig12(value));
                            let _ = writeln!(out, "n,diagnostic");
                            for (i, d) in diagnostic.iter().enumerate() {
                                let _ = writeln!(out, "{},{}", i + 1, sig12(*d));
                            }
                        }
                    },
                }
                return Ok(());
            }
            let domain = spectrum_domain(&x, &psi)?;
            let levels = parse_levels(alpha, alpha_grid)?;
            let mut points = Vec::new();
            for a in levels {
                let point = spectrum_legendre(&x, &phi, &psi, a)?;
                let level = MeasureRep::from(point.witness.clone()).integrate(&psi)?;
                points.push((point, level));
            }
            match format {
                Format::Json => {
                    let rows: Vec<serde_json::Value> = points
                        .iter()
                        .map(|(p, level)| {
                            serde_json::json!({
                                "alpha": p.alpha,
                                "value": p.value,
                                "q": p.q,
                                "boundary": p.boundary,
                                "witness": {
                                    "entropy": p.witness.entropy(),
                                    "level": level,
                                },
                            })
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "domain": {
                                "alpha_min": domain.alpha_min,
                                "alpha_max": domain.alpha_max,
                            },
                            "points": rows,
                        })
                    );
                }
                Format::Csv => {
                    let _ = writeln!(out, "alpha,value,q,witness");
                    for (p, level) in &points {
                        let _ = writeln!(
                            out,
                            "{},{},{},h={};level={}",
                            sig12(p.alpha),
                            sig12(p.value),
                            sig12(p.q),
                            sig12(p.witness.entropy()),
                            sig12(*level)
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Dimension { shift, potential, psi, alpha, alpha_grid, tol, format, budget } => {
            let (_, x) = load_shift(&shift, budget)?;
            let phi = load_potential(&potential)?;
            let psi = load_potential(&psi)?;
            let levels = parse_levels(alpha, alpha_grid)?;
            let mut rows = Vec::new();
            for a in levels {
                rows.push((a, dimension_spectrum(&x, &phi, &psi, a, tol)?));
            }
            match format {
                Format::Json => {
                    let points: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(a, v)| serde_json::json!({"alpha": a, "value": v}))
                        .collect();
                    let _ = writeln!(out, "{}", serde_json::json!({ "points": points }));
                }
                Format::Csv => {
                    let _ = writeln!(out, "alpha,value");
                    for (a, v) in &rows {
                        let _ = writeln!(out, "{},{}", sig12(*a), sig12(*v));
                    }
                }
            }
            Ok(())
        }
        Command::Bowen { shift, potential, tol, format } => {
            let (_, x) = load_shift(&shift, None)?;
            let phi = load_potential(&potential)?;
            let s = bowen_dimension(&x, &phi, tol)?;
            match format {
                Format::Json => {
                    let _ = writeln!(out, "{}", serde_json::json!({"value": s}));
                }
                Format::Csv => {
                    let _ = writeln!(out, "value");
                    let _ = writeln!(out, "{}", sig12(s));
                }
            }
            Ok(())
        }
        Command::MoranGenerate {
            shift,
            itinerary,
            theta,
            length,
            seed,
            depth,
            format,
            budget,
        } => {
            let (cfg, x) = load_shift(&shift, budget)?;
            let itinerary = parse_itinerary::<f64>(&read_file(&itinerary)?)?;
            let good = build_good_set(&cfg)?;
            let mistake = if cfg.good_set.is_none() {
                shiftpress::MistakeFunction::from_raw(vec![0])
            } else {
                empirical_mistake_function(&x, &good, 8)?
            };
            let schedule = make_schedule(&x, &itinerary, mistake, theta, length)?;
            let point = generate_point(&x, &itinerary, &schedule, &good, seed)?;
            let d = depth.unwrap_or(itinerary.depth());
            let report = track_convergence(&point, &itinerary, &schedule, d)?;
            let mut distance_by_segment = vec![None; point.segments.len()];
            for row in &report.rows {
                distance_by_segment[row.segment] = Some(row.distance);
            }
            let rle = run_length_encode(point.prefix.symbols());
            match format {
                Format::Json => {
                    let segments: Vec<serde_json::Value> = point
                        .segments
                        .iter()
                        .enumerate()
                        .map(|(j, s)| {
                            serde_json::json!({
                                "j": j + 1,
                                "stage": s.stage + 1,
                                "n": s.n,
                                "l": s.glued_len,
                                "t": s.end,
                                "distance": distance_by_segment[j],
                            })
                        })
                        .collect();
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "prefix_run_length": rle,
                            "segments": segments,
                            "summary": {
                                "length": point.prefix.len(),
                                "depth": d,
                                "seed": seed,
                                "theta": theta,
                                "stages": schedule.stages.iter().map(|s| serde_json::json!({
                                    "n": s.n, "reps": s.reps, "eps": s.eps,
                                })).collect::<Vec<_>>(),
                                "limit_summary": report.limit_summary,
                            },
                        })
                    );
                }
                Format::Csv => {
                    let _ = writeln!(out, "# prefix");
                    let _ = writeln!(out, "{rle}");
                    let _ = writeln!(out, "# segments");
                    let _ = writeln!(out, "j,n,l,t,D");
                    for (j, s) in point.segments.iter().enumerate() {
                        let dist = distance_by_segment[j].map(sig12).unwrap_or_default();
                        let _ =
                            writeln!(out, "{},{},{},{},{dist}", j + 1, s.n, s.glued_len, s.end);
                    }
                    let _ = writeln!(out, "# summary");
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "length": point.prefix.len(),
                            "depth": d,
                            "seed": seed,
                            "theta": theta,
                            "limit_summary": report.limit_summary,
                        })
                    );
                }
            }
            Ok(())
        }
        Command::EditAnalyze { shift, n, format, budget } => {
            let (cfg, x) = load_shift(&shift, budget)?;
            let good = build_good_set(&cfg)?;
            let mistake = empirical_mistake_function(&x, &good, n)?;
            match format {
                Format::Json => {
                    let table: Vec<serde_json::Value> = (1..=n)
                        .map(|k| {
                            let g = mistake.value(k);
                            serde_json::json!({
                                "n": k,
                                "g": g,
                                "ratio": g as f64 / k as f64,
                            })
                        })
                        .collect();
                    let mut balls = Vec::new();
                    for delta in [0.1, 0.2] {
                        let r = ball_bound_report(&x, n, delta)?;
                        balls.push(serde_json::json!({
                            "n": r.n,
                            "delta": r.delta,
                            "radius": r.radius,
                            "count": r.count,
                            "bound": r.bound,
                            "c_fit": r.c_fit,
                        }));
                    }
                    let _ = writeln!(
                        out,
                        "{}",
                        serde_json::json!({"mistake": table, "ball_bounds": balls})
                    );
                }
                Format::Csv => {
                    let _ = writeln!(out, "n,g,ratio");
                    for k in 1..=n {
                        let g = mistake.value(k);
                        let _ = writeln!(out, "{k},{g},{}", sig12(g as f64 / k as f64));
                    }
                }
            }
            Ok(())
        }
        Command::Verify { config_dir, seed } => {
            let (table, failed) = verify::run(config_dir.as_deref(), seed);
            out.push_str(&table);
            if failed > 0 {
                return Err(Error::Numeric(format!("{failed} verification checks failed")));
            }
            Ok(())
        }
    }
}

/// `0^3 1 0^2` style run-length text for a symbol string.
fn run_length_encode(symbols: &[u8]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < symbols.len() {
        let c = symbols[i];
        let mut j = i + 1;
        while j < symbols.len() && symbols[j] == c {
            j += 1;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        let run = j - i;
        if run == 1 {
            let _ = write!(out, "{c}");
        } else {
            let _ = write!(out, "{c}^{run}");
        }
        i = j;
    }
    out
}
