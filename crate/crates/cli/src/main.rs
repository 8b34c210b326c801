use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hamlie::aut::{lift_mu, beta, AlgebraMap};
use hamlie::bn::{form_apply_algmap, parse_poly, RingRef, TruncPoly, GRAMMAR};
use hamlie::lab::{self, Execution, ExperimentConfig, Report};
use hamlie::pinv::{is_nilpotent_xi, xi_with, XiRoute};
use hamlie::wn::Derivation;
use hamlie::Error;

const OUT_DIR_VAR: &str = "HAMLIE_OUT_DIR";

#[derive(Parser)]
#[command(name = "hamlie", version, about = "Hamiltonian Lie algebras over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants ξ_i of D_H(f) or of a derivation.
    Xi {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        #[arg(long, value_enum, default_value_t = Route::CharPoly)]
        route: Route,
    },
    /// Characteristic polynomial of an element acting on B_n.
    Charpoly {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
    },
    /// Nilpotency through the vanishing of ξ.
    Nilpotent {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
        /// Also compare with the operator characteristic polynomial.
        #[arg(long)]
        oracle: bool,
    },
    /// The potential δ(D) of an element of H_n.
    Delta {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        element: Element,
    },
    /// Lift of an automorphism of B_r to B_2r.
    Lift {
        #[command(flatten)]
        common: Common,
        /// Images of x1..xr, separated by ';'.
        #[arg(long)]
        mu: String,
    },
    /// The embedding of W_r into H_n.
    Beta {
        #[command(flatten)]
        common: Common,
        /// Coefficients of ∂_1..∂_r in B_r, separated by ';'.
        #[arg(long)]
        d: String,
    },
    /// Exhaustive scan of the subspace E.
    Escan {
        #[command(flatten)]
        common: Common,
    },
    /// Density of the all-ξ-zero locus.
    Density {
        #[command(flatten)]
        common: Common,
        /// Comma-separated extension degrees; defaults to --m.
        #[arg(long, value_delimiter = ',')]
        m_grid: Vec<u32>,
    },
    /// Rank of the differentials of ξ on V.
    Diffrank {
        #[command(flatten)]
        common: Common,
    },
    /// Restriction of ξ to the torus T_H.
    Torus {
        #[command(flatten)]
        common: Common,
    },
    /// Verification batteries; all of them when none are named.
    Verify {
        #[command(flatten)]
        common: Common,
        batteries: Vec<String>,
        /// Perturb the automorphisms fed to the gh_multiplier battery.
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file for json and csv; defaults to a file in $HAMLIE_OUT_DIR.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_elements: Option<u64>,
    #[arg(long)]
    max_seconds: Option<f64>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct Element {
    /// Potential f in B_2r; the element is D_H(f).
    #[arg(long, conflicts_with = "d")]
    f: Option<String>,
    /// Coefficients of ∂_1..∂_2r in B_2r, separated by ';'.
    #[arg(long)]
    d: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    CharPoly,
    PowerRelation,
    PhiTilde,
}

impl From<Route> for XiRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::CharPoly => XiRoute::CharPoly,
            Route::PowerRelation => XiRoute::PowerRelation,
            Route::PhiTilde => XiRoute::PhiTilde,
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(Report, String), Failure>;

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Failure> {
        let mut cfg = ExperimentConfig::new(self.p, self.r, self.m, self.seed, self.samples);
        if let Some(n) = self.max_elements {
            cfg.budget.max_elements = n;
        }
        cfg.budget.max_seconds = self.max_seconds;
        if self.sequential {
            cfg.execution = Execution::Sequential;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse(text: &str, ring: &RingRef) -> Result<TruncPoly, Failure> {
    let parsed = parse_poly(text, ring)?;
    for w in parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.poly)
}

fn parse_list(text: &str, ring: &RingRef) -> Result<Vec<TruncPoly>, Failure> {
    let polys = text.split(';').map(|t| parse(t, ring)).collect::<Result<Vec<_>, _>>()?;
    if polys.len() != ring.n() {
        return Err(Failure::Usage(format!("expected {} entries separated by ';', got {}", ring.n(), polys.len())));
    }
    Ok(polys)
}

fn derivation(element: &Element, h: &hamlie::ham::HamCtx) -> Result<Derivation, Failure> {
    match (&element.f, &element.d) {
        (Some(f), None) => Ok(h.d_h(&parse(f, h.ring())?)?),
        (None, Some(d)) => Ok(Derivation::new(parse_list(d, h.ring())?)?),
        _ => Err(Failure::Usage("exactly one of --f and --d is required".into())),
    }
}

fn fmt_vec(h: &hamlie::ham::HamCtx, v: &[hamlie::gf::Scalar]) -> Vec<String> {
    v.iter().map(|&z| h.field().format(z)).collect()
}

fn element_report(name: &str, cfg: &ExperimentConfig, started: Instant, result: serde_json::Value) -> Report {
    let mut report = Report::new(name, cfg);
    report.result = Some(result);
    report.finish(started)
}

fn run_command(command: &Command) -> Outcome {
    let started = Instant::now();
    match command {
        Command::Xi { common, element, route } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let d = derivation(element, &h)?;
            let xi = fmt_vec(&h, &xi_with(&h, &d, (*route).into())?);
            let text = format!("ξ = ({})\n", xi.join(", "));
            Ok((element_report("xi", &cfg, started, json!({ "xi": xi, "route": XiRoute::from(*route) })), text))
        }
        Command::Charpoly { common, element } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let d = derivation(element, &h)?;
            let cp = d.char_poly().display(h.field());
            let psi = fmt_vec(&h, &d.psi()?);
            let text = format!("χ(t) = {cp}\nψ = ({})\n", psi.join(", "));
            Ok((element_report("charpoly", &cfg, started, json!({ "char_poly": cp, "psi": psi })), text))
        }
        Command::Nilpotent { common, element, oracle } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let d = derivation(element, &h)?;
            let nil = is_nilpotent_xi(&h, &d)?;
            let mut report = Report::new("nilpotent", &cfg);
            let mut text = format!("nilpotent: {nil}\n");
            if *oracle {
                let op = d.is_nilpotent_operator();
                let mut check = lab::Check::new("operator_oracle");
                check.record((op != nil).then(|| format!("ξ says {nil}, operator says {op}")));
                report.push(check);
                text.push_str(&format!("operator: {op}\n"));
            }
            report.result = Some(json!({ "nilpotent": nil }));
            Ok((report.finish(started), text))
        }
        Command::Delta { common, element } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let d = derivation(element, &h)?;
            let f = h.delta(&d)?.display();
            let text = format!("δ = {f}\n");
            Ok((element_report("delta", &cfg, started, json!({ "delta": f })), text))
        }
        Command::Lift { common, mu } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let mu = AlgebraMap::new(h.base_ring(), parse_list(mu, h.base_ring())?)?;
            let (lift, alpha) = lift_mu(&h, &mu)?;
            let field = h.field();
            let mut report = Report::new("lift", &cfg);
            let mut form = lab::Check::new("form_scaled_by_alpha");
            let scaled = form_apply_algmap(lift.images(), h.omega())? == h.omega().scale(alpha);
            form.record((!scaled).then(|| "μ̃(ω_H) ≠ α ω_H".to_string()));
            report.push(form);
            let mut brackets = lab::Check::new("bracket_minus_alpha");
            for i in 0..h.r() {
                let b = h.poisson(&lift.images()[h.r() + i], &lift.images()[i])?;
                let want = h.ring().constant(field.neg(alpha));
                brackets.record((b != want).then(|| format!("[μ̃(x{}), μ̃(x{})] = {}", h.r() + i + 1, i + 1, b.display())));
            }
            report.push(brackets);
            let images: Vec<String> = lift.images().iter().map(|g| g.display()).collect();
            let mut text = format!("α = {}\n", field.format(alpha));
            for (i, g) in images.iter().enumerate() {
                text.push_str(&format!("μ̃(x{}) = {g}\n", i + 1));
            }
            report.result = Some(json!({ "alpha": field.format(alpha), "images": images }));
            Ok((report.finish(started), text))
        }
        Command::Beta { common, d } => {
            let cfg = common.config()?;
            let h = cfg.ham()?;
            let d = Derivation::new(parse_list(d, h.base_ring())?)?;
            let b = beta(&h, &d)?;
            let potential = h.delta(&b)?.display();
            let text = format!("β(D) = {}\nδ(β(D)) = {potential}\n", b.display());
            Ok((element_report("beta", &cfg, started, json!({ "beta": b.display(), "potential": potential })), text))
        }
        Command::Escan { common } => sweep(lab::escan(&common.config()?)?),
        Command::Density { common, m_grid } => {
            let cfg = common.config()?;
            let grid = if m_grid.is_empty() { vec![cfg.m] } else { m_grid.clone() };
            sweep(lab::density_grid(&cfg, &grid)?)
        }
        Command::Diffrank { common } => sweep(lab::diff_rank(&common.config()?)?),
        Command::Torus { common } => sweep(lab::torus_restrict(&common.config()?)?),
        Command::Verify { common, batteries, corrupt } => {
            let mut cfg = common.config()?;
            cfg.corrupt = *corrupt;
            let names: Vec<&str> = if batteries.is_empty() {
                lab::BATTERIES.to_vec()
            } else {
                batteries.iter().map(String::as_str).collect()
            };
            sweep(lab::verify_suite(&names, &cfg)?)
        }
    }
}

fn sweep(report: Report) -> Outcome {
    let text = report.to_text();
    Ok((report, text))
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Xi { common, .. }
        | Command::Charpoly { common, .. }
        | Command::Nilpotent { common, .. }
        | Command::Delta { common, .. }
        | Command::Lift { common, .. }
        | Command::Beta { common, .. }
        | Command::Escan { common }
        | Command::Density { common, .. }
        | Command::Diffrank { common }
        | Command::Torus { common }
        | Command::Verify { common, .. } => common,
    }
}

fn write_output(common: &Common, report: &Report, text: &str) -> Result<(), Failure> {
    let (body, ext) = match common.format {
        Format::Text => {
            print!("{text}");
            return Ok(());
        }
        Format::Json => (report.to_json() + "\n", "json"),
        Format::Csv => match report.to_csv() {
            Some(csv) => (csv, "csv"),
            None => return Err(Failure::Usage(format!("{} has no tabular output; use json or text", report.command))),
        },
    };
    let path = common.out.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{}_p{}_r{}_m{}_seed{}.{ext}", report.command, report.p, report.r, report.m, report.seed))
    });
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("element grammar: {GRAMMAR}");
    eprintln!("derivations and maps: entries separated by ';', e.g. --d \"x2;-x1\"");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return usage("invalid invocation");
        }
    };
    let common = common(&cli.command);
    let result = run_command(&cli.command).and_then(|(report, text)| {
        write_output(common, &report, &text)?;
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => usage(&msg),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
