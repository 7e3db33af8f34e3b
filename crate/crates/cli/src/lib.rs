//! The verification suite behind the `quatvar` binary.

use quatvar::class_graph::{
    build_class_set, eigenfunctions, theta_table, verify_brandt, verify_class_set, ClassSet, EigenFns, ThetaTable,
};
use quatvar::constants::rallis_constant_check;
use quatvar::finite_fourier::{verify_local_integrals, verify_ugly_lemma};
use quatvar::report::{Report, Status};
use quatvar::theta_q::{arith_variance, arith_variance_report, default_checkpoints, seesaw_check, shimura_t9_check};
use quatvar::tree_fix::{mean_statistics, verify_local_pushforward, verify_triples_agree};
use quatvar::{Error, Result};
use serde_json::{json, Value};

pub const BUILD_ID: &str = env!("QUATVAR_BUILD_ID");

/// Effective configuration, embedded in every report.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub ramified_prime: u64,
    pub torsion_precision_slack: u32,
    pub seed: u64,
    pub samples: usize,
    pub slow: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ramified_prime: 23,
            torsion_precision_slack: 2,
            seed: 1,
            samples: 500,
            slow: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ramified_prime % 4 != 3 {
            return Err(Error::Unsupported(format!(
                "ramified prime {} is not 3 mod 4",
                self.ramified_prime
            )));
        }
        if self.ramified_prime != 23 {
            return Err(Error::Unsupported(format!(
                "only the algebra ramified at 23 is built in, got {}",
                self.ramified_prime
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ramified_prime": self.ramified_prime,
            "torsion_precision_slack": self.torsion_precision_slack,
            "seed": self.seed,
            "samples": self.samples,
            "slow": self.slow,
        })
    }
}

/// Adds the build identifier and configuration to a report's params.
pub fn stamp(mut r: Report, cfg: &RunConfig) -> Report {
    if let Value::Object(m) = &mut r.params {
        m.insert("build".into(), json!(BUILD_ID));
        m.insert("config".into(), cfg.to_json());
    }
    r
}

/// Class set, Brandt matrices and eigenfunctions, built once.
pub struct Context {
    pub cs: ClassSet,
    pub table: ThetaTable,
    pub eig: EigenFns,
}

pub const BRANDT_NMAX: u64 = 30;

impl Context {
    pub fn build(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let cs = build_class_set()?;
        let table = theta_table(&cs, BRANDT_NMAX);
        let eig = eigenfunctions(&cs, &table)?;
        Ok(Context { cs, table, eig })
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "class set"),
    (2, "Brandt matrices"),
    (3, "local pushforward"),
    (4, "character triples"),
    (5, "finite Fourier lemma"),
    (6, "mean statistics"),
    (7, "seesaw coefficient identity"),
    (8, "Shimura T(9)"),
    (9, "local integrals"),
    (10, "constant identity"),
    (11, "arithmetic variance"),
    (12, "determinism"),
];

pub const SEESAW_NMAX: u64 = 99;
pub const T9_DMAX: u64 = 450;
pub const LOCAL_INTEGRAL_TOL: f64 = 1e-9;
pub const ARITHVAR_X: u64 = 100_000;
pub const ARITHVAR_X_SLOW: u64 = 1_000_000;
pub const ARITHVAR_OFF_RATIO: f64 = 0.15;
pub const ARITHVAR_REL_TOL: f64 = 0.30;

fn group(name: &str, params: Value, parts: Vec<Report>) -> Report {
    let mut r = Report::new(name, params);
    for p in parts {
        r.absorb(p);
    }
    r
}

pub fn fix_prop(ctx: &Context, cfg: &RunConfig, ns: &[u32]) -> Result<Report> {
    let parts = ns
        .iter()
        .map(|&n| verify_local_pushforward(&ctx.cs, n, cfg.samples, cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(group("fix-prop", json!({"N": ns, "samples": cfg.samples, "seed": cfg.seed}), parts))
}

pub fn fourier(ns: &[u32]) -> Result<Report> {
    let parts = ns.iter().map(|&n| verify_ugly_lemma(n)).collect::<Result<Vec<_>>>()?;
    Ok(group("fourier", json!({"N": ns}), parts))
}

pub fn mean(ctx: &Context, ns: &[u32]) -> Result<Report> {
    let parts = ns
        .iter()
        .map(|&n| mean_statistics(&ctx.cs, n).map(|x| x.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(group("mean", json!({"N": ns}), parts))
}

pub fn seesaw(ctx: &Context, ns: &[u32], nmax: u64) -> Result<Report> {
    let parts = ns
        .iter()
        .map(|&n| seesaw_check(&ctx.cs, &ctx.eig, n, &[0, 1], nmax))
        .collect::<Result<Vec<_>>>()?;
    Ok(group("seesaw", json!({"N": ns, "nmax": nmax}), parts))
}

pub fn arithvar(ctx: &Context, xmax: u64, slow: bool) -> Result<Report> {
    let av = arith_variance(&ctx.cs, &ctx.eig, xmax, &default_checkpoints(xmax))?;
    let x_large = (slow && xmax >= ARITHVAR_X_SLOW).then_some(ARITHVAR_X_SLOW);
    Ok(arith_variance_report(&av, ARITHVAR_X.min(xmax), x_large, ARITHVAR_OFF_RATIO, ARITHVAR_REL_TOL))
}

/// The report for one acceptance criterion (12 excluded; it compares whole runs).
pub fn run_criterion(id: u8, ctx: &Context, cfg: &RunConfig) -> Result<Report> {
    let r = match id {
        1 => verify_class_set(&ctx.cs),
        2 => verify_brandt(&ctx.cs, &ctx.table)?,
        3 => fix_prop(ctx, cfg, &[2, 3, 4])?,
        4 => verify_triples_agree(&ctx.cs)?,
        5 => fourier(&[2, 3])?,
        6 => mean(ctx, &[2, 3, 4])?,
        7 => seesaw(ctx, &[2, 3], SEESAW_NMAX)?,
        8 => shimura_t9_check(&ctx.cs, &ctx.eig, &[0, 1], T9_DMAX)?,
        9 => verify_local_integrals(LOCAL_INTEGRAL_TOL)?,
        10 => rallis_constant_check()?,
        11 => {
            let x = if cfg.slow { ARITHVAR_X_SLOW } else { ARITHVAR_X };
            arithvar(ctx, x, cfg.slow)?
        }
        _ => return Err(Error::InvalidArgument(format!("no criterion {id}"))),
    };
    Ok(stamp(r, cfg))
}

/// Criteria 1–11 as one report.
pub fn verify_all(ctx: &Context, cfg: &RunConfig) -> Result<Report> {
    let mut all = Report::new("all", json!({}));
    let mut data = Vec::new();
    for (id, name) in CRITERIA.iter().take(11) {
        let r = run_criterion(*id, ctx, cfg)?;
        data.push(json!({
            "criterion": id,
            "name": name,
            "check": r.check,
            "status": r.status,
            "cases_total": r.cases_total,
            "cases_failed": r.cases_failed,
        }));
        all.absorb(r);
    }
    all.set("criteria", json!(data));
    Ok(stamp(all, cfg))
}

pub fn to_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

pub fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

/// Runs `f` on a pool with exactly `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}
