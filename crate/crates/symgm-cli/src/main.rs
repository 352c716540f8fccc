//! Command-line surface for the symgm library.
//!
//! Every command prints a plain-text report by default and a single JSON
//! document with `--json` (keys in fixed sorted order). Randomized
//! computations take `--seed`/`--restarts` and are bit-reproducible for a
//! fixed configuration. Exit codes: 0 success, 2 parse or input error,
//! 3 numerical non-convergence, 4 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use symgm::io::{ket_to_pairs, load_multiset};
use symgm::{
    additivity_certificate, build_symmetric, compatibility_general_with, compatibility_qubit,
    gm_optimize_with, half_sphere_check, majorana_extract, ml_maximize_with, mub_state_gm,
    build_mubs, permanent_dicke, sic_scan_d3, sic_scan_grid, sic_state_gm, two_design_check,
    DickeCounts, Error, GmOptions, KetMultiset, MlOptions, PureState, RankOnePovm, SicPovm,
};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "symgm",
    version,
    about = "Geometric measure of entanglement of symmetrized POVM-ket states"
)]
struct Cli {
    /// Emit a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for all multistart optimizers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random restarts per optimization.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,

    /// Iteration cap per restart.
    #[arg(long, global = true, default_value_t = 5000)]
    max_iters: usize,

    /// Report entanglement in nats instead of bits.
    #[arg(long, global = true)]
    nats: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permanent of the Gram matrix of a state file or a two-basis count set.
    Perm {
        /// Multiset state file (JSON).
        state: Option<PathBuf>,
        /// Two-basis counts n00,n01,n10,n11 instead of a file.
        #[arg(long, value_delimiter = ',', conflicts_with = "state")]
        dicke: Option<Vec<u32>>,
        /// Angle between the two qubit bases (radians).
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// GM of the symmetric state in a state file.
    Gm {
        state: PathBuf,
    },
    /// Generalized Dicke state: permanent, GM bound, saturation.
    Dicke {
        /// Counts n00,n01,n10,n11.
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<u32>,
        /// Angle between the two qubit bases (radians).
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Build (and verify) mutually unbiased bases in prime dimension.
    Mubs {
        #[arg(long)]
        dim: usize,
        /// Number of bases (1..=d+1).
        #[arg(long)]
        bases: usize,
        /// Per-basis repetition counts; enables the symmetric-state GM.
        #[arg(long, value_delimiter = ',')]
        reps: Option<Vec<u32>>,
    },
    /// SIC-POVM construction, verification, and symmetric-state GM.
    Sic {
        /// Hilbert-space dimension (2 or 3).
        #[arg(long)]
        dim: usize,
        /// Fiducial parameter for d = 3 (radians, [0, pi/3]).
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Random states for the 2-design check.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Scan the d = 3 SIC family: CSV of (t, perm_A, G_bits).
    SicScan {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Grid points over [0, pi/3].
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majorana points and half-sphere test of a qubit state file.
    Majorana {
        state: PathBuf,
    },
    /// Iterative maximum-likelihood estimate for the POVM in a state file.
    Ml {
        state: PathBuf,
        /// Override the observed counts (defaults to the file multiplicities).
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<u32>>,
    },
    /// Frequency compatibility: POVM file or qubit closed form.
    Compat {
        state: Option<PathBuf>,
        /// Qubit closed form: angle between the bases.
        #[arg(long, requires = "freqs", conflicts_with = "state")]
        theta: Option<f64>,
        /// Qubit closed form: frequencies f00,f01,f10,f11.
        #[arg(long, value_delimiter = ',')]
        freqs: Option<Vec<f64>>,
        /// Override the squared-residual acceptance threshold.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Additivity certificate for the state in a file.
    Additivity {
        state: PathBuf,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NoConvergence { .. } => 3,
            Error::Verification(_) => 4,
            _ => 2,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    symgm::exec::configure_threads_from_env();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(value) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            } else {
                print_text(&value);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn print_text(value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::String(s) => println!("{}: {}", k, s),
                    other => println!("{}: {}", k, other),
                }
            }
        }
        other => println!("{}", other),
    }
}

fn gm_options(cli: &Cli) -> GmOptions {
    GmOptions {
        restarts: cli.restarts,
        max_iters: cli.max_iters,
        seed: cli.seed,
    }
}

/// Entanglement value in the requested unit.
fn in_unit(bits: f64, nats: bool) -> f64 {
    if nats {
        bits * LN_2
    } else {
        bits
    }
}

fn unit_name(nats: bool) -> &'static str {
    if nats {
        "nats"
    } else {
        "bits"
    }
}

fn witness_json(w: &PureState) -> Value {
    json!(ket_to_pairs(w.vec()))
}

/// Fixed-significant-digit decimal for the CSV schema.
fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn expect_four<T>(v: &[T], flag: &str) -> Result<(), CliError> {
    if v.len() != 4 {
        return Err(CliError {
            code: 2,
            message: format!("--{} takes exactly four comma-separated values", flag),
        });
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Perm { state, dicke, theta } => cmd_perm(state.as_deref(), dicke, *theta),
        Command::Gm { state } => cmd_gm(cli, state),
        Command::Dicke { counts, theta } => cmd_dicke(cli, counts, *theta),
        Command::Mubs { dim, bases, reps } => cmd_mubs(cli, *dim, *bases, reps.as_deref()),
        Command::Sic { dim, t, trials } => cmd_sic(cli, *dim, *t, *trials),
        Command::SicScan { dim, points, out } => {
            cmd_sic_scan(*dim, *points, out.as_deref(), cli.json)
        }
        Command::Majorana { state } => cmd_majorana(state),
        Command::Ml { state, counts } => cmd_ml(cli, state, counts.as_deref()),
        Command::Compat {
            state,
            theta,
            freqs,
            tol,
        } => cmd_compat(cli, state.as_deref(), *theta, freqs.as_deref(), *tol),
        Command::Additivity { state } => cmd_additivity(state),
    }
}

fn cmd_perm(
    state: Option<&std::path::Path>,
    dicke: &Option<Vec<u32>>,
    theta: f64,
) -> Result<Value, CliError> {
    let (perm_a, n) = match (state, dicke) {
        (Some(path), None) => {
            let ms = load_multiset(path)?;
            let s = build_symmetric(ms)?;
            (s.perm_a(), s.total())
        }
        (None, Some(c)) => {
            expect_four(c, "dicke")?;
            let counts = DickeCounts::new(c[0], c[1], c[2], c[3], theta)?;
            (permanent_dicke(&counts), counts.total())
        }
        _ => {
            return Err(CliError {
                code: 2,
                message: "provide a state file or --dicke counts".into(),
            })
        }
    };
    let c = (symgm::permanent::factorial(n) / perm_a).sqrt();
    Ok(json!({
        "perm_a": perm_a,
        "n": n,
        "c": c,
    }))
}

fn cmd_gm(cli: &Cli, state: &std::path::Path) -> Result<Value, CliError> {
    let s = build_symmetric(load_multiset(state)?)?;
    let res = gm_optimize_with(&s, &gm_options(cli))?;
    Ok(json!({
        "lambda_sq": res.lambda_sq,
        "gm": in_unit(res.gm_bits, cli.nats),
        "bound": in_unit(res.bound_bits, cli.nats),
        "unit": unit_name(cli.nats),
        "saturated": res.saturated,
        "additive": res.additive,
        "witness": witness_json(&res.witness),
    }))
}

fn cmd_dicke(cli: &Cli, counts: &[u32], theta: f64) -> Result<Value, CliError> {
    expect_four(counts, "counts")?;
    let dc = DickeCounts::new(counts[0], counts[1], counts[2], counts[3], theta)?;
    let perm_formula = permanent_dicke(&dc);
    let perm_exact = symgm::permanent::gram(&dc.multiset()?)
        .permanent()?;
    let n = dc.total();
    // per-basis frequencies drive the likelihood bound and its saturation
    let n0 = dc.n00 + dc.n01;
    let n1 = dc.n10 + dc.n11;
    let mut log_term = -(symgm::permanent::factorial(n).ln() / LN_2) + perm_formula.ln() / LN_2;
    for (count, total) in [
        (dc.n00, n0),
        (dc.n01, n0),
        (dc.n10, n1),
        (dc.n11, n1),
    ] {
        if count > 0 {
            log_term -= count as f64 * ((count as f64 / total as f64).ln() / LN_2);
        }
    }
    let (saturated, witness) = if n0 > 0 && n1 > 0 {
        let f = [
            [dc.n00 as f64 / n0 as f64, dc.n01 as f64 / n0 as f64],
            [dc.n10 as f64 / n1 as f64, dc.n11 as f64 / n1 as f64],
        ];
        compatibility_qubit(theta, f)?
    } else {
        // a single basis is always realizable by a real superposition
        let f0 = if n0 > 0 {
            dc.n00 as f64 / n0 as f64
        } else {
            dc.n10 as f64 / n1 as f64
        };
        let witness = PureState::normalize(&symgm::CVec::from_reals(&[
            f0.sqrt(),
            (1.0 - f0).max(0.0).sqrt(),
        ]))?;
        (true, Some(witness))
    };
    Ok(json!({
        "perm_a": perm_formula,
        "perm_a_ryser": perm_exact,
        "n": n,
        "c": (symgm::permanent::factorial(n) / perm_formula).sqrt(),
        "gm_bound": in_unit(log_term, cli.nats),
        "unit": unit_name(cli.nats),
        "saturated": saturated,
        "witness": witness.map(|w| witness_json(&w)).unwrap_or(Value::Null),
    }))
}

fn cmd_mubs(cli: &Cli, dim: usize, bases: usize, reps: Option<&[u32]>) -> Result<Value, CliError> {
    let mubs = build_mubs(dim, bases)?;
    let mut out = json!({
        "dim": dim,
        "bases": bases,
        "verified": true,
    });
    if let Some(reps) = reps {
        let res = mub_state_gm(&mubs, reps)?;
        out["gm"] = json!(in_unit(res.gm_bits, cli.nats));
        out["unit"] = json!(unit_name(cli.nats));
        out["lambda_sq"] = json!(res.lambda_sq);
        out["saturated"] = json!(res.saturated);
        out["additive"] = json!(res.additive);
        out["witness"] = witness_json(&res.witness);
    }
    Ok(out)
}

fn cmd_sic(cli: &Cli, dim: usize, t: f64, trials: usize) -> Result<Value, CliError> {
    let sic = match dim {
        2 => SicPovm::qubit()?,
        3 => SicPovm::qutrit(t)?,
        _ => {
            return Err(CliError {
                code: 2,
                message: format!("no SIC fiducial built in for d = {}", dim),
            })
        }
    };
    let two_design = two_design_check(&sic, trials, cli.seed);
    if !two_design {
        return Err(CliError {
            code: 4,
            message: "2-design identity violated".into(),
        });
    }
    let res = sic_state_gm(&sic)?;
    let s = build_symmetric(KetMultiset::uniform(sic.kets().to_vec())?)?;
    let mut out = json!({
        "dim": dim,
        "verified": true,
        "two_design": two_design,
        "perm_a": s.perm_a(),
        "lambda_sq": res.lambda_sq,
        "gm": in_unit(res.gm_bits, cli.nats),
        "unit": unit_name(cli.nats),
        "saturated": res.saturated,
        "additive": res.additive,
        "witness": witness_json(&res.witness),
    });
    if dim == 3 {
        out["t"] = json!(t);
    }
    Ok(out)
}

fn cmd_sic_scan(
    dim: usize,
    points: usize,
    out: Option<&std::path::Path>,
    json_mode: bool,
) -> Result<Value, CliError> {
    if dim != 3 {
        return Err(CliError {
            code: 2,
            message: "the fiducial-family scan exists for --dim 3 only".into(),
        });
    }
    let grid = sic_scan_grid(points);
    let rows = sic_scan_d3(&grid)?;
    let mut csv = String::from("t,perm_A,G_bits\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt_sig12(row.t),
            fmt_sig12(row.perm_a),
            fmt_sig12(row.gm_bits)
        ));
    }
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| CliError {
            code: 2,
            message: e.to_string(),
        })?;
        return Ok(json!({
            "cross_check": "ok",
            "dim": dim,
            "out": path.display().to_string(),
            "points": rows.len(),
        }));
    }
    if json_mode {
        return Ok(json!({
            "cross_check": "ok",
            "dim": dim,
            "points": rows.len(),
            "rows": rows,
        }));
    }
    print!("{}", csv);
    Ok(Value::Null)
}

fn cmd_majorana(state: &std::path::Path) -> Result<Value, CliError> {
    let s = build_symmetric(load_multiset(state)?)?;
    let pts = majorana_extract(&s)?;
    let sphere = half_sphere_check(pts.points());
    Ok(json!({
        "points": pts.points().iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
        "round_trip_fidelity": pts.round_trip_fidelity(),
        "half_sphere": sphere.within_half_sphere,
        "half_sphere_witness": sphere.witness.map(|w| json!([w.x, w.y, w.z])).unwrap_or(Value::Null),
    }))
}

fn cmd_ml(cli: &Cli, state: &std::path::Path, counts: Option<&[u32]>) -> Result<Value, CliError> {
    let ms = load_multiset(state)?;
    let counts: Vec<u32> = match counts {
        Some(c) => c.to_vec(),
        None => ms.mults().to_vec(),
    };
    let povm = RankOnePovm::new(ms.kets().to_vec(), counts)?;
    let res = ml_maximize_with(
        &povm,
        &MlOptions {
            max_iters: cli.max_iters.max(50_000),
            ..MlOptions::default()
        },
    )?;
    if !res.converged {
        return Err(CliError {
            code: 3,
            message: format!(
                "ML iteration stalled after {} steps (residual {:.3e})",
                res.iterations, res.residual
            ),
        });
    }
    let d = res.rho_ml.dim();
    let rho: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let z = res.rho_ml.mat().get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    Ok(json!({
        "rho": rho,
        "likelihood_max": res.likelihood_max,
        "purity": res.purity,
        "is_pure_max": res.is_pure_max,
        "iterations": res.iterations,
        "residual": res.residual,
    }))
}

fn cmd_compat(
    cli: &Cli,
    state: Option<&std::path::Path>,
    theta: Option<f64>,
    freqs: Option<&[f64]>,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    match (state, theta, freqs) {
        (Some(path), None, None) => {
            let ms = load_multiset(path)?;
            let povm = RankOnePovm::new(ms.kets().to_vec(), ms.mults().to_vec())?;
            let outcome = compatibility_general_with(&povm, cli.restarts, cli.seed)?;
            let compatible = match tol {
                Some(t) => outcome.residual < t,
                None => outcome.compatible,
            };
            Ok(json!({
                "compatible": compatible,
                "residual": outcome.residual,
                "inconclusive": outcome.inconclusive,
                "witness": outcome.witness.map(|w| witness_json(&w)).unwrap_or(Value::Null),
            }))
        }
        (None, Some(theta), Some(f)) => {
            expect_four(f, "freqs")?;
            let (ok, witness) =
                compatibility_qubit(theta, [[f[0], f[1]], [f[2], f[3]]])?;
            Ok(json!({
                "compatible": ok,
                "witness": witness.map(|w| witness_json(&w)).unwrap_or(Value::Null),
            }))
        }
        _ => Err(CliError {
            code: 2,
            message: "provide a POVM state file, or --theta with --freqs".into(),
        }),
    }
}

fn cmd_additivity(state: &std::path::Path) -> Result<Value, CliError> {
    let s = build_symmetric(load_multiset(state)?)?;
    let route = additivity_certificate(&s)?;
    Ok(json!({
        "certified": route.is_some(),
        "route": route.map(|r| r.as_str()).unwrap_or("none"),
    }))
}
