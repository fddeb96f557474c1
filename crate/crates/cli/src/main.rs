//! `farkas`: certifying deciders on JSON instance files.
//!
//! Exit codes: 0 first alternative / Accept / Optimal, 1 second alternative /
//! Reject, 2 usage or parse error, 3 precondition violation (including the
//! column limit), 4 internal error.

mod instance;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use farkas_core::{
    self as core, AltCertificate, ArbitrageOutcome, Certificate, FarkasCertificate,
    FredholmCertificate, GameSolution, LpOutcome, LpProblem, Problem, Rat, RatVec,
    StiemkeCertificate, Uniqueness, Verdict,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use instance::{CertificateFile, Instance, Kind};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(core::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use core::Error as E;
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(E::Parse(_) | E::Dimension(_) | E::Contract(_)) => 2,
            Failure::Core(
                E::Precondition(_)
                | E::TooLarge { .. }
                | E::NotDualOptimal { .. }
                | E::Arbitrage { .. },
            ) => 3,
            Failure::Core(E::Internal(_)) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<core::Error> for Failure {
    fn from(e: core::Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Parser)]
#[command(
    name = "farkas",
    version,
    about = "Exact certificates for theorems of the alternative, LPs, markets and games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct DecideArgs {
    instance: PathBuf,
    /// Wrap the certificate with its kind and the instance hash.
    #[arg(long)]
    envelope: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Farkas: xi·A >= 0, xi·b < 0  |  q >= 0, A·q = b
    Far(DecideArgs),
    /// Fredholm: xi·A = 0, xi·b != 0  |  A·x = b
    Fred(DecideArgs),
    /// Stiemke: xi·A semipositive  |  p > 0, A·p = 0
    Stiemke(DecideArgs),
    /// Gordan-type: p·A >= 0, p in simplex  |  A·q < 0, q in simplex
    Alt(DecideArgs),
    /// Linear programs in standard form
    #[command(subcommand)]
    Lp(LpCommand),
    /// Superhedging price of the claim
    Price { market: PathBuf },
    /// Arbitrage-free price interval of the claim
    Bounds { market: PathBuf },
    /// Arbitrage strategy or strictly positive martingale measure
    Arbitrage { market: PathBuf },
    /// Zero-sum matrix games
    #[command(subcommand)]
    Game(GameCommand),
    /// Check a certificate against its instance
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
    },
}

#[derive(Subcommand)]
enum LpCommand {
    /// Optimal pair, infeasibility certificate, or recession ray
    Solve { instance: PathBuf },
    /// Primal optimum from a dual optimum (u from the file, else the instance's "u")
    Recover {
        instance: PathBuf,
        dual: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    Solve { game: PathBuf },
    Unique { game: PathBuf },
    Gap { game: PathBuf },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum LpReport {
    Optimal { x: RatVec, u: RatVec, value: Rat },
    Infeasible { xi: RatVec },
    Unbounded { ray: RatVec },
}

#[derive(Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum ArbitrageReport {
    Arbitrage { xi: RatVec },
    NoArbitrage { p: RatVec },
}

#[derive(Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum UniquenessReport {
    Unique {
        solution: GameSolution,
    },
    Multiple {
        first: GameSolution,
        second: GameSolution,
    },
}

/// JSON to print and the exit code.
struct Output {
    body: Value,
    code: u8,
}

fn output<T: Serialize>(body: &T, code: u8) -> Output {
    Output {
        body: serde_json::to_value(body).expect("serialisable"),
        code,
    }
}

fn alternative_code(first: bool) -> u8 {
    if first {
        0
    } else {
        1
    }
}

fn decide(args: &DecideArgs, kind: Kind) -> Result<Output, Failure> {
    let inst = instance::load(&args.instance)?;
    let a = &inst.file.a;
    let (cert, first) = match kind {
        Kind::Far => {
            let c = core::farkas(a, inst.file.rhs()?)?;
            let first = c.is_first_alternative();
            (serde_json::to_value(c), first)
        }
        Kind::Fred => {
            let c = core::fredholm(a, inst.file.rhs()?)?;
            let first = c.is_first_alternative();
            (serde_json::to_value(c), first)
        }
        Kind::Stiemke => {
            let c = core::stiemke(a)?;
            let first = c.is_first_alternative();
            (serde_json::to_value(c), first)
        }
        Kind::Alt => {
            let c = core::alternatives_lemma(a)?;
            let first = c.is_first_alternative();
            (serde_json::to_value(c), first)
        }
        _ => unreachable!("not a decide kind"),
    };
    let cert = cert.expect("serialisable certificate");
    let body = if args.envelope {
        serde_json::to_value(CertificateFile {
            certificate: cert,
            instance_hash: inst.hash,
            kind,
        })
        .expect("serialisable envelope")
    } else {
        cert
    };
    Ok(Output {
        body,
        code: alternative_code(first),
    })
}

fn lp_problem(inst: &Instance) -> Result<LpProblem, Failure> {
    let f = &inst.file;
    Ok(LpProblem::new(
        f.a.clone(),
        f.rhs()?.clone(),
        f.cost()?.clone(),
    )?)
}

fn lp_report(outcome: LpOutcome) -> LpReport {
    match outcome {
        LpOutcome::Optimal { x, u, value } => LpReport::Optimal { x, u, value },
        LpOutcome::PrimalInfeasible { xi } => LpReport::Infeasible { xi },
        LpOutcome::PrimalUnbounded { ray } => LpReport::Unbounded { ray },
    }
}

fn lp(cmd: &LpCommand) -> Result<Output, Failure> {
    match cmd {
        LpCommand::Solve { instance } => {
            let prob = lp_problem(&instance::load(instance)?)?;
            let report = lp_report(core::solve_lp(&prob)?);
            let code = alternative_code(matches!(report, LpReport::Optimal { .. }));
            Ok(output(&report, code))
        }
        LpCommand::Recover { instance, dual } => {
            let inst = instance::load(instance)?;
            let prob = lp_problem(&inst)?;
            let u = match dual {
                Some(path) => read_dual(path)?,
                None => inst.file.u.clone().ok_or_else(|| {
                    Failure::Usage("no dual vector: pass a file or set \"u\"".into())
                })?,
            };
            let x = core::primal_from_dual(&prob, &u)?;
            Ok(output(&json!({ "x": x }), 0))
        }
    }
}

fn read_dual(path: &Path) -> Result<RatVec, Failure> {
    let value = instance::read_json(path)?;
    let value = match value {
        Value::Object(mut map) => map.remove("u").unwrap_or(Value::Null),
        other => other,
    };
    serde_json::from_value(value).map_err(|e| Failure::Usage(format!("invalid dual vector: {e}")))
}

fn finance(market: &Path, what: &str) -> Result<Output, Failure> {
    let inst = instance::load(market)?;
    let (model, claim) = inst.file.market()?;
    let claim = || {
        claim
            .clone()
            .ok_or_else(|| Failure::Usage("market file is missing \"claim\"".into()))
    };
    match what {
        "price" => {
            let h = core::superhedge_price(&model, &claim()?)?;
            Ok(output(
                &json!({ "price": h.price, "strategy": h.strategy, "measure": h.measure }),
                0,
            ))
        }
        "bounds" => {
            let (lower, upper) = core::price_bounds(&model, &claim()?)?;
            Ok(output(&json!({ "lower": lower, "upper": upper }), 0))
        }
        _ => {
            let report = match core::detect_arbitrage(&model)? {
                ArbitrageOutcome::Arbitrage { xi } => ArbitrageReport::Arbitrage { xi },
                ArbitrageOutcome::NoArbitrage { p } => ArbitrageReport::NoArbitrage { p },
            };
            let code = alternative_code(matches!(report, ArbitrageReport::Arbitrage { .. }));
            Ok(output(&report, code))
        }
    }
}

fn game(cmd: &GameCommand) -> Result<Output, Failure> {
    match cmd {
        GameCommand::Solve { game } => {
            let a = instance::load(game)?.file.a;
            Ok(output(&core::solve_game(&a)?, 0))
        }
        GameCommand::Unique { game } => {
            let a = instance::load(game)?.file.a;
            let report = match core::solution_unique(&a)? {
                Uniqueness::Unique(solution) => UniquenessReport::Unique { solution },
                Uniqueness::Multiple(first, second) => UniquenessReport::Multiple { first, second },
            };
            let code = alternative_code(matches!(report, UniquenessReport::Unique { .. }));
            Ok(output(&report, code))
        }
        GameCommand::Gap { game } => {
            let a = instance::load(game)?.file.a;
            let (lower, upper) = core::minimax_gap(&a)?;
            Ok(output(&json!({ "lower": lower, "upper": upper }), 0))
        }
    }
}

fn kind_of_certificate(cert: &Value) -> Option<Kind> {
    if cert.get("status").is_some() {
        return Some(Kind::Lp);
    }
    if ["value", "p", "q"].iter().all(|k| cert.get(k).is_some()) {
        return Some(Kind::Game);
    }
    match cert.get("variant")?.as_str()? {
        "combination" | "separation" => Some(Kind::Far),
        "orthogonal" | "solution" => Some(Kind::Fred),
        "semipositive_row" | "interior_measure" => Some(Kind::Stiemke),
        "nonneg_row" | "neg_col" => Some(Kind::Alt),
        _ => None,
    }
}

fn parse_cert<T: for<'de> Deserialize<'de>>(cert: Value) -> Result<T, Failure> {
    serde_json::from_value(cert).map_err(|e| Failure::Usage(format!("invalid certificate: {e}")))
}

fn verify(instance_path: &Path, cert_path: &Path) -> Result<Output, Failure> {
    let inst = instance::load(instance_path)?;
    let raw = instance::read_json(cert_path)?;
    let (cert, envelope_kind) =
        if raw.get("certificate").is_some() && raw.get("instance_hash").is_some() {
            let env: CertificateFile = parse_cert(raw)?;
            if env.instance_hash != inst.hash {
                return Ok(verdict(Verdict::Reject("instance hash mismatch".into())));
            }
            (env.certificate, Some(env.kind))
        } else {
            (raw, None)
        };
    let inferred = kind_of_certificate(&cert)
        .ok_or_else(|| Failure::Usage("unrecognised certificate format".into()))?;
    for declared in [envelope_kind, inst.file.kind].into_iter().flatten() {
        if declared != inferred {
            return Ok(verdict(Verdict::Reject(format!(
                "certificate is for {}, instance is {}",
                inferred.name(),
                declared.name()
            ))));
        }
    }
    let a = &inst.file.a;
    let v = match inferred {
        Kind::Far => {
            let c: FarkasCertificate = parse_cert(cert)?;
            core::verify_certificate(
                Problem::Farkas(a, inst.file.rhs()?),
                &Certificate::Farkas(c),
            )
        }
        Kind::Fred => {
            let c: FredholmCertificate = parse_cert(cert)?;
            core::verify_certificate(
                Problem::Fredholm(a, inst.file.rhs()?),
                &Certificate::Fredholm(c),
            )
        }
        Kind::Stiemke => {
            let c: StiemkeCertificate = parse_cert(cert)?;
            core::verify_certificate(Problem::Stiemke(a), &Certificate::Stiemke(c))
        }
        Kind::Alt => {
            let c: AltCertificate = parse_cert(cert)?;
            core::verify_certificate(Problem::Alternatives(a), &Certificate::Alternatives(c))
        }
        Kind::Game => core::verify_saddle(a, &parse_cert::<GameSolution>(cert)?),
        Kind::Lp => verify_lp(&lp_problem(&inst)?, parse_cert(cert)?),
        Kind::Market => unreachable!("no market certificate format"),
    };
    Ok(verdict(v))
}

fn verify_lp(prob: &LpProblem, report: LpReport) -> Verdict {
    match report {
        LpReport::Optimal { x, u, value } => match core::check_optimal_pair(prob, &x, &u) {
            Verdict::Accept if prob.c().dot(&x) != value => Verdict::Reject("c·x ≠ value".into()),
            v => v,
        },
        LpReport::Infeasible { xi } => core::verify_certificate(
            Problem::Farkas(prob.a(), prob.b()),
            &Certificate::Farkas(FarkasCertificate::Separation { xi }),
        ),
        LpReport::Unbounded { ray } => {
            if ray.dim() != prob.a().cols() || !ray.is_nonneg() {
                Verdict::Reject("ray ∉ X_n".into())
            } else if !prob.a().mul_vec(&ray).is_zero() {
                Verdict::Reject("A·ray ≠ 0".into())
            } else if !prob.c().dot(&ray).is_negative() {
                Verdict::Reject("c·ray ≥ 0".into())
            } else {
                Verdict::Accept
            }
        }
    }
}

fn verdict(v: Verdict) -> Output {
    match v {
        Verdict::Accept => Output {
            body: json!("Accept"),
            code: 0,
        },
        Verdict::Reject(why) => Output {
            body: json!(format!("Reject: {why}")),
            code: 1,
        },
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Far(args) => decide(args, Kind::Far),
        Command::Fred(args) => decide(args, Kind::Fred),
        Command::Stiemke(args) => decide(args, Kind::Stiemke),
        Command::Alt(args) => decide(args, Kind::Alt),
        Command::Lp(cmd) => lp(cmd),
        Command::Price { market } => finance(market, "price"),
        Command::Bounds { market } => finance(market, "bounds"),
        Command::Arbitrage { market } => finance(market, "arbitrage"),
        Command::Game(cmd) => game(cmd),
        Command::Verify {
            instance,
            certificate,
        } => verify(instance, certificate),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            println!(
                "{}",
                serde_json::to_string(&out.body).expect("serialisable output")
            );
            ExitCode::from(out.code)
        }
        Err(failure) => {
            eprintln!("farkas: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
