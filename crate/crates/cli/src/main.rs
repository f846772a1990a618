use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use surfsing::localmult::MultiplicityReport;
use surfsing::movplanes::{default_degree_bound, moving_planes_of_degree, mu_basis_search, MovingPlane, MuBasis};
use surfsing::oracle::{implicitize, ImplicitSurface};
use surfsing::poly::multi_gcd;
use surfsing::singular::{
    base_points, cross_check, degree_law, implicit_degree_with, sing_order_with, BasePointReport, CrossChecks,
    DegreeLaw, LAMBDA_NOTE,
};
use surfsing::surface::{HOMOG_VARS, PARAM_VARS};
use surfsing::{parse_poly, Error, Polynomial, ProjPoint, Rational, SurfaceParam, Var};

const EXIT_DISAGREE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_GENERICITY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "surfsing",
    version,
    about = "Singular points of rational parametric surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Surface description (JSON)
    file: PathBuf,
    /// Emit a JSON document instead of text
    #[arg(long)]
    json: bool,
    /// Run the oracle and counting cross-checks; exit 1 on disagreement
    #[arg(long)]
    verify: bool,
    /// Seed for generic draws (overrides the file)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Base points, implicit degree, mu-basis and the order of every point
    Report(Common),
    /// Base points and their total multiplicity
    Basepoints(Common),
    /// Order of one point
    Order {
        #[command(flatten)]
        common: Common,
        /// Point as x,y,z,w with rational entries
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Verified mu-basis
    Mubasis(Common),
    /// Basis of the following planes of bounded degree
    Movingplanes {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: u32,
    },
    /// Implicit equation by elimination
    Implicitize(Common),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    surface: Components,
    #[serde(default)]
    points: Vec<[String; 4]>,
    seed: Option<u64>,
    degree_bound: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Components {
    a: String,
    b: String,
    c: String,
    d: String,
}

struct Input {
    surface: SurfaceParam,
    points: Vec<ProjPoint>,
    seed: u64,
    degree_bound: u32,
    warnings: Vec<String>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::GenericityFailure(_) => EXIT_GENERICITY,
            e if e.is_degenerate() => EXIT_DEGENERATE,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn parse_rational(text: &str) -> Result<Rational, Failure> {
    let p = parse_poly(text, &[]).map_err(|e| invalid(format!("coordinate '{text}': {e}")))?;
    if !p.is_constant() {
        return Err(invalid(format!("coordinate '{text}' is not a number")));
    }
    Ok(p.constant_term())
}

fn parse_point(coords: &[String]) -> Result<ProjPoint, Failure> {
    if coords.len() != 4 {
        return Err(invalid(format!("point {coords:?} needs four coordinates")));
    }
    let values = coords
        .iter()
        .map(|c| parse_rational(c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProjPoint::new(values)?)
}

fn load(common: &Common) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| invalid(format!("cannot read {}: {e}", common.file.display())))?;
    let file: SurfaceFile = serde_json::from_str(&text).map_err(|e| invalid(format!("bad surface file: {e}")))?;
    let Components { a, b, c, d } = &file.surface;
    let comps = [a, b, c, d].map(|t| parse_poly(t, &HOMOG_VARS).map_err(|e| invalid(format!("polynomial '{t}': {e}"))));
    let mut parsed = Vec::with_capacity(4);
    for c in comps {
        parsed.push(c?);
    }
    let mut warnings = Vec::new();
    let homogeneous = parsed.iter().any(|p| p.degree_in(Var::U) > 0);
    let g = multi_gcd(&parsed).map_err(|_| invalid("all components are zero"))?;
    if !g.is_constant() {
        warnings.push(format!("divided out the common factor {g}"));
        parsed = parsed.iter().map(|p| p.exact_div(&g).expect("gcd divides")).collect();
    }
    let [a, b, c, d]: [Polynomial; 4] = parsed.try_into().expect("four components");
    let surface = if homogeneous {
        SurfaceParam::from_homogeneous(a, b, c, d)?
    } else {
        if ![&a, &b, &c, &d].iter().all(|p| p.uses_only(&PARAM_VARS)) {
            return Err(invalid("affine components may only use s and t"));
        }
        SurfaceParam::new(a, b, c, d)?
    };
    let points = file
        .points
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<Vec<_>, _>>()?;
    let degree_bound = file.degree_bound.unwrap_or_else(|| default_degree_bound(&surface));
    Ok(Input {
        seed: common.seed.or(file.seed).unwrap_or(0),
        surface,
        points,
        degree_bound,
        warnings,
    })
}

#[derive(Serialize)]
struct PointReport {
    point: ProjPoint,
    r: u64,
    total_count: u64,
    lambda_used: u64,
    pivot_coordinate: usize,
    curves: Vec<Polynomial>,
    multiplicity: MultiplicityReport,
    checks: Option<CrossChecks>,
}

#[derive(Serialize)]
struct PointOutcome {
    #[serde(flatten)]
    report: Option<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point_input: Option<ProjPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct FullReport {
    surface: [Polynomial; 4],
    degree: u32,
    seed: u64,
    lambda: u64,
    lambda_note: &'static str,
    base_points: BasePointReport,
    implicit_degree: u64,
    mu_basis: Option<MuBasis>,
    mu_basis_degree_bound: u32,
    implicit_equation: Option<ImplicitSurface>,
    degree_law: Option<DegreeLaw>,
    points: Vec<PointOutcome>,
    warnings: Vec<String>,
}

/// Order of one point and, when asked, its cross-checks.
fn analyze_point(
    input: &Input,
    x0: &ProjPoint,
    lambda: u64,
    mu: Option<&MuBasis>,
    implicit: Option<&ImplicitSurface>,
    verify: bool,
) -> Result<PointReport, Error> {
    let rep = sing_order_with(&input.surface, x0, lambda, input.seed)?;
    let checks = if verify {
        Some(cross_check(
            &input.surface,
            &rep,
            lambda == 0,
            mu,
            implicit,
            input.seed,
        )?)
    } else {
        None
    };
    Ok(PointReport {
        point: rep.point,
        r: rep.r,
        total_count: rep.total_count,
        lambda_used: rep.lambda_used,
        pivot_coordinate: rep.pivot_coordinate,
        curves: rep.curves,
        multiplicity: rep.multiplicity,
        checks,
    })
}

fn run_report(common: &Common, input: &Input) -> Result<(String, u8), Failure> {
    let base = base_points(&input.surface, input.seed)?;
    let lambda = base.lambda;
    let implicit_degree = implicit_degree_with(&input.surface, lambda)?;
    let mut warnings = input.warnings.clone();
    let mu = match mu_basis_search(&input.surface, input.degree_bound) {
        Ok(mu) => Some(mu),
        Err(f) => {
            warnings.push(format!("no verified mu-basis up to degree {}", f.degree_bound));
            None
        }
    };
    let (implicit, law) = if common.verify {
        let imp = implicitize(&input.surface)?;
        let law = degree_law(implicit_degree, &imp);
        (Some(imp), Some(law))
    } else {
        (None, None)
    };
    let results: Vec<Result<PointReport, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = input
            .points
            .iter()
            .map(|x0| {
                let (mu, implicit) = (mu.as_ref(), implicit.as_ref());
                scope.spawn(move || analyze_point(input, x0, lambda, mu, implicit, common.verify))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut code = 0u8;
    let mut points = Vec::new();
    for (x0, res) in input.points.iter().zip(results) {
        match res {
            Ok(rep) => {
                if rep.checks.as_ref().is_some_and(|c| !c.agree) && code == 0 {
                    code = EXIT_DISAGREE;
                }
                points.push(PointOutcome {
                    report: Some(rep),
                    point_input: None,
                    error: None,
                });
            }
            Err(e) => {
                let f = Failure::from(e);
                if code == 0 || code == EXIT_DISAGREE {
                    code = f.code;
                }
                points.push(PointOutcome {
                    report: None,
                    point_input: Some(x0.clone()),
                    error: Some(f.message),
                });
            }
        }
    }
    if law.as_ref().is_some_and(|l| !l.consistent) {
        warnings.push("implicit degree differs from n^2 - lambda; the map may not be generically injective".into());
    }
    let report = FullReport {
        surface: input.surface.homogeneous().clone(),
        degree: input.surface.degree(),
        seed: input.seed,
        lambda,
        lambda_note: LAMBDA_NOTE,
        base_points: base,
        implicit_degree,
        mu_basis: mu,
        mu_basis_degree_bound: input.degree_bound,
        implicit_equation: implicit,
        degree_law: law,
        points,
        warnings,
    };
    let out = if common.json {
        to_json(&report)
    } else {
        report_text(&report)
    };
    Ok((out, code))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn plane_text(l: &MovingPlane) -> String {
    l.to_string()
}

fn report_text(r: &FullReport) -> String {
    let mut s = String::new();
    let [a, b, c, d] = &r.surface;
    let _ = writeln!(s, "surface: ({a}, {b}, {c}, {d}), degree {}", r.degree);
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(
        s,
        "lambda = {} ({} distinct base points)",
        r.lambda, r.base_points.distinct_points
    );
    let _ = writeln!(s, "implicit degree = {}", r.implicit_degree);
    if let Some(imp) = &r.implicit_equation {
        let _ = writeln!(s, "implicit equation: {} = 0", imp.f);
    }
    match &r.mu_basis {
        Some(mu) => {
            let _ = writeln!(s, "mu-basis (kappa = {}):", mu.kappa);
            for (name, l) in [("p", &mu.p), ("q", &mu.q), ("r", &mu.r)] {
                let _ = writeln!(s, "  {name} = {}", plane_text(l));
            }
        }
        None => {
            let _ = writeln!(s, "mu-basis: none up to degree {}", r.mu_basis_degree_bound);
        }
    }
    for p in &r.points {
        match (&p.report, &p.error) {
            (Some(rep), _) => {
                let _ = writeln!(
                    s,
                    "point {}: r = {} (count {}, lambda {}, pivot {})",
                    rep.point,
                    rep.r,
                    rep.total_count,
                    rep.lambda_used,
                    Var::ALL[3 + rep.pivot_coordinate]
                );
                if let Some(c) = &rep.checks {
                    let _ = writeln!(s, "  checks: {}", checks_text(c));
                }
            }
            (None, Some(e)) => {
                let pt = p.point_input.as_ref().map(ToString::to_string).unwrap_or_default();
                let _ = writeln!(s, "point {pt}: error: {e}");
            }
            (None, None) => {}
        }
    }
    s
}

fn checks_text(c: &CrossChecks) -> String {
    let mut parts = Vec::new();
    if let Some(k) = c.classic_order {
        parts.push(format!("classic order {k}"));
    }
    for (name, check) in [
        ("moving plane", &c.moving_plane),
        ("mu-basis", &c.mu_basis),
        ("moving surface", &c.moving_surface),
    ] {
        if let Some(k) = check {
            parts.push(format!("{name} {}", k.count));
        }
    }
    if let Some(why) = &c.skipped {
        parts.push(format!("({why})"));
    }
    let verdict = if c.agree { "agree" } else { "DISAGREE" };
    format!("{}; {verdict}", parts.join(", "))
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.command {
        Command::Report(common) => {
            let input = load(common)?;
            run_report(common, &input)
        }
        Command::Order { common, point } => {
            let mut input = load(common)?;
            let coords: Vec<String> = point.split(',').map(str::to_string).collect();
            input.points = vec![parse_point(&coords)?];
            run_report(common, &input)
        }
        Command::Basepoints(common) => {
            let input = load(common)?;
            let base = base_points(&input.surface, input.seed)?;
            let out = if common.json {
                to_json(&base)
            } else {
                let mut s = String::new();
                for w in &input.warnings {
                    let _ = writeln!(s, "warning: {w}");
                }
                let _ = writeln!(s, "lambda = {}", base.lambda);
                let _ = writeln!(s, "distinct base points = {}", base.distinct_points);
                for c in &base.per_chart {
                    let _ = writeln!(s, "  chart {}: {}", chart_name(c), c.count);
                }
                let locus: Vec<String> = base.base_locus.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "base locus ideal: <{}>", locus.join(", "));
                let _ = writeln!(s, "note: {LAMBDA_NOTE}");
                s
            };
            Ok((out, 0))
        }
        Command::Mubasis(common) => {
            let input = load(common)?;
            let (value, text) = match mu_basis_search(&input.surface, input.degree_bound) {
                Ok(mu) => {
                    let verified = mu.verify(&input.surface);
                    let text = format!("p = {}\nq = {}\nr = {}\nkappa = {}\n", mu.p, mu.q, mu.r, mu.kappa);
                    (
                        json!({"mu_basis": mu, "verified": verified, "degree_bound": input.degree_bound}),
                        text,
                    )
                }
                Err(f) => {
                    let gens: Vec<String> = f.generators.iter().map(ToString::to_string).collect();
                    let text = format!(
                        "no verified mu-basis up to degree {}\ngenerators found:\n  {}\n",
                        f.degree_bound,
                        gens.join("\n  ")
                    );
                    (json!({"mu_basis": Value::Null, "failure": f}), text)
                }
            };
            Ok((if common.json { to_json(&value) } else { text }, 0))
        }
        Command::Movingplanes { common, degree } => {
            let input = load(common)?;
            let planes = moving_planes_of_degree(&input.surface, *degree);
            let out = if common.json {
                to_json(&json!({"degree": degree, "planes": planes}))
            } else {
                planes.iter().map(|l| format!("{l}\n")).collect()
            };
            Ok((out, 0))
        }
        Command::Implicitize(common) => {
            let input = load(common)?;
            let imp = implicitize(&input.surface)?;
            let out = if common.json {
                to_json(&imp)
            } else {
                let mut s = format!("{}\n", imp.f);
                if imp.reducible {
                    s.push_str("warning: the equation has a repeated factor\n");
                }
                s
            };
            Ok((out, 0))
        }
    }
}

fn chart_name(c: &surfsing::localmult::ChartCount) -> String {
    serde_json::to_value(c.chart)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
