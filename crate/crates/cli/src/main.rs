#![allow(clippy::needless_range_loop)]

use clap::{Args, Parser, Subcommand};
use quatvar::class_graph::AlgNum;
use quatvar::constants::constants_table;
use quatvar::report::Report;
use quatvar::theta_q::{mu_measure, shimura_t9_check, MU_DMAX_LIMIT};
use quatvar::tree_fix::pushforward_table;
use quatvar::Error;
use quatvar_cli::*;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "quatvar", version = BUILD_ID, about = "Exact checks for the quaternion algebra ramified at 23")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Prime at which the algebra ramifies (only 23 is built in).
    #[arg(long, global = true, default_value_t = 23)]
    ramified_prime: u64,
    /// Extra 2-adic precision above N for torsion actions.
    #[arg(long, global = true, default_value_t = 2)]
    torsion_precision_slack: u32,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ideal classes of the maximal order.
    Classset,
    /// Brandt matrix B(n).
    Brandt {
        #[arg(long)]
        n: u64,
    },
    /// Hecke eigenfunctions orthogonal to the constants.
    Eigen {
        #[arg(long, default_value_t = 30)]
        nmax: u64,
    },
    /// Fix and Fix♯ at m + 2^{N−2}β for all residues β.
    Fix {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=8))]
        n: u32,
    },
    /// Run a verification.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// CSV of μ_D per class and μ_D(Ψ_k).
    Theta {
        #[arg(long, default_value_t = 1000)]
        dmax: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: u8,
    },
    /// Arithmetic variance partial sums.
    Arithvar {
        #[arg(long, default_value_t = ARITHVAR_X)]
        xmax: u64,
        /// Also check the diagonal against the targets at x = 10⁶.
        #[arg(long)]
        slow: bool,
    },
    /// Closed-form constants.
    Constants,
}

#[derive(Subcommand)]
enum Check {
    /// Fix♯ at m + 2^{N−2}β against 2^{2N−3}Σχ(β), plus random α off the support
    FixProp {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=6))]
        n: u32,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// χ and η character triples agree on every residue of S⁰/2S⁰
    Triples,
    /// Conjugation-averaged transform proportionality on M₂(Z/2^N)
    Fourier {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=4))]
        n: u32,
    },
    /// Orbital sums against the theta convolution of μ_D, odd n ≤ nmax
    Seesaw {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=3))]
        n: u32,
        #[arg(long, default_value_t = SEESAW_NMAX)]
        nmax: u64,
    },
    /// Per-class Fix♯ sums over norm-one units and their weighted total
    Mean {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=6))]
        n: u32,
    },
    /// T(9) eigen-recurrence on D ↦ μ_D(Ψ_k)
    T9 {
        #[arg(long, default_value_t = T9_DMAX)]
        dmax: u64,
    },
    /// Product of local constants against P(x)
    Rallis,
    /// Truncated 2-adic Cartan sums against their closed forms
    LocalIntegrals,
    /// Row sums, commutation, self-adjointness and multiplicativity
    Brandt,
    /// Class count, mass and unit weights
    Classset,
    /// Every criterion in one report
    All {
        #[arg(long)]
        slow: bool,
    },
}

enum Output {
    Report(Report),
    Json(Value),
    Text(String),
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => writeln!(std::io::stdout(), "{text}"),
    }
}

fn alg_json(x: &AlgNum) -> Value {
    json!({"a": x.a.to_string(), "b": x.b.to_string(), "value": x.to_f64()})
}

fn params(cfg: &RunConfig, mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("build".into(), json!(BUILD_ID));
        m.insert("config".into(), cfg.to_json());
    }
    v
}

fn run(cli: &Cli, cfg: &mut RunConfig) -> quatvar::Result<Output> {
    cfg.validate()?;
    Ok(match &cli.cmd {
        Cmd::Classset => {
            let ctx = Context::build(cfg)?;
            let classes: Vec<Value> = ctx
                .cs
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "w": c.w,
                        "ideal": c.ideal.to_json(),
                        "ideal_norm": c.ideal_norm.to_string(),
                        "left_order": c.left_order.to_json(),
                        "order_gram": c.order_gram,
                        "ternary_gram": c.ternary.gram,
                    })
                })
                .collect();
            let mut r = stamp(quatvar::class_graph::verify_class_set(&ctx.cs), cfg);
            r.set("classes", json!(classes));
            Output::Report(r)
        }
        Cmd::Brandt { n } => {
            let ctx = Context::build(cfg)?;
            let b = quatvar::class_graph::brandt(&ctx.cs, *n)?;
            let entries: Vec<Vec<String>> = b.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let sums: Vec<String> = b.row_sums().iter().map(|x| x.to_string()).collect();
            Output::Json(json!({"params": params(cfg, json!({"n": n})), "n": n, "entries": entries, "row_sums": sums}))
        }
        Cmd::Eigen { nmax } => {
            let cs = quatvar::class_graph::build_class_set()?;
            let table = quatvar::class_graph::theta_table(&cs, *nmax);
            let eig = quatvar::class_graph::eigenfunctions(&cs, &table)?;
            let fns: Vec<Value> = eig
                .fns
                .iter()
                .enumerate()
                .map(|(k, f)| {
                    let a: serde_json::Map<String, Value> =
                        f.a.iter().map(|(n, x)| (n.to_string(), alg_json(x))).collect();
                    json!({
                        "k": k + 1,
                        "psi": f.psi.iter().map(alg_json).collect::<Vec<_>>(),
                        "norm_sq": alg_json(&f.norm_sq),
                        "eigenvalues": a,
                    })
                })
                .collect();
            let quad: Vec<String> = eig.quadratic.iter().map(|x| x.to_string()).collect();
            Output::Json(json!({"params": params(cfg, json!({"nmax": nmax})), "quadratic_c0_c1": quad, "eigenfunctions": fns}))
        }
        Cmd::Fix { n } => {
            let ctx = Context::build(cfg)?;
            let level = n + cfg.torsion_precision_slack;
            if level < *n {
                return Err(Error::InvalidArgument("torsion level below N".into()));
            }
            let rows = pushforward_table(&ctx.cs, *n, level)?;
            Output::Json(json!({"params": params(cfg, json!({"N": n, "level": level})), "rows": rows}))
        }
        Cmd::Verify { check } => {
            let ctx = Context::build(cfg)?;
            let r = match check {
                Check::FixProp { n, samples, seed } => {
                    cfg.samples = *samples;
                    cfg.seed = *seed;
                    cfg.validate()?;
                    fix_prop(&ctx, cfg, &[*n])?
                }
                Check::Triples => run_criterion(4, &ctx, cfg)?,
                Check::Fourier { n } => fourier(&[*n])?,
                Check::Seesaw { n, nmax } => seesaw(&ctx, &[*n], *nmax)?,
                Check::Mean { n } => mean(&ctx, &[*n])?,
                Check::T9 { dmax } => shimura_t9_check(&ctx.cs, &ctx.eig, &[0, 1], *dmax)?,
                Check::Rallis => run_criterion(10, &ctx, cfg)?,
                Check::LocalIntegrals => run_criterion(9, &ctx, cfg)?,
                Check::Brandt => run_criterion(2, &ctx, cfg)?,
                Check::Classset => run_criterion(1, &ctx, cfg)?,
                Check::All { slow } => {
                    cfg.slow = *slow;
                    verify_all(&ctx, cfg)?
                }
            };
            Output::Report(stamp(r, cfg))
        }
        Cmd::Theta { dmax, k } => {
            if *dmax > MU_DMAX_LIMIT {
                return Err(Error::InvalidArgument(format!("dmax above {MU_DMAX_LIMIT}")));
            }
            let ctx = Context::build(cfg)?;
            let mu = mu_measure(&ctx.cs, *dmax)?;
            let comb = mu.combine(&ctx.eig.psi(*k as usize - 1).psi);
            let mut s = String::from("D,mu_E1,mu_E2,mu_E3,muPsi_a,muPsi_b\n");
            for d in 0..=*dmax as usize {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    d, mu.per_class[0][d], mu.per_class[1][d], mu.per_class[2][d], comb[d].a, comb[d].b
                ));
            }
            s.pop();
            Output::Text(s)
        }
        Cmd::Arithvar { xmax, slow } => {
            cfg.slow = *slow;
            let ctx = Context::build(cfg)?;
            let xmax = if *slow { (*xmax).max(ARITHVAR_X_SLOW) } else { *xmax };
            Output::Report(stamp(arithvar(&ctx, xmax, *slow)?, cfg))
        }
        Cmd::Constants => {
            let t = serde_json::to_value(constants_table()).expect("table serializes");
            Output::Json(json!({"params": params(cfg, json!({})), "constants": t}))
        }
    })
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("QUATVAR_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("QUATVAR_THREADS={v:?} is not a number"))?;
        if n == 0 {
            return Err("QUATVAR_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let mut cfg = RunConfig {
        ramified_prime: cli.global.ramified_prime,
        torsion_precision_slack: cli.global.torsion_precision_slack,
        ..RunConfig::default()
    };
    let out = match run(&cli, &mut cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidArgument(_) | Error::Unsupported(_) => 2,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    let (text, ok) = match out {
        Output::Report(r) => {
            if !r.passed() {
                if let Some(f) = &r.first_failure {
                    eprintln!("{} {}: first failure {}", r.check, status_word(r.status), f);
                } else {
                    eprintln!("{} {}", r.check, status_word(r.status));
                }
            }
            (to_json(&r), r.passed())
        }
        Output::Json(v) => (serde_json::to_string_pretty(&v).expect("json"), true),
        Output::Text(t) => (t, true),
    };
    if let Err(e) = emit(&cli.global.output, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
