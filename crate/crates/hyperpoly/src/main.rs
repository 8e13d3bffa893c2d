//! Command-line surface for the hyperpoly library: shorts enumeration, Betti
//! tables, ring presentations, claims verification, core-incidence graphs,
//! intersection forms, moment-map numerics and the deterministic self-test.
//!
//! Exit codes: 0 on success, 2 when a structural identity fails
//! (ClaimViolation — the regression signal), 1 for usage and input errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperpoly::claims::{check_ws, expand_v_s, spanning_check, transition_matrix};
use hyperpoly::combinat::{Alpha, Subset};
use hyperpoly::coregeom::{emit_core_graph, euler_cross_check, GraphFormat, GraphScope};
use hyperpoly::error::Error;
use hyperpoly::intersection::intersection_form;
use hyperpoly::momentmap::{
    is_stable, moment_residual, point_from_polygon_pair, polygon_pair_from_point,
    sample_polygon_pair, PointPQ, StabilityWitness,
};
use hyperpoly::presentations::{
    core_equivariant_ideal, core_ordinary_ideal, equivariant_ideal, konno_ideal,
    polygon_subspace_kernel, relabel_to_contain_one, Presentation, Relabeling,
};
use hyperpoly::QPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "hyperpoly", version, about = "Invariants of hyperpolygon spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlphaArgs {
    /// Edge lengths as comma-separated rationals, e.g. 1,1,3,3,3.
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// JSON file containing an array of edge-length strings.
    #[arg(long, global = true, conflicts_with = "alpha")]
    alpha_file: Option<String>,
}

impl AlphaArgs {
    fn load(&self) -> Result<Alpha, Error> {
        let parts: Vec<String> = match (&self.alpha, &self.alpha_file) {
            (Some(inline), None) => inline.split(',').map(str::to_string).collect(),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| Error::ParseError(e.to_string()))?;
                value
                    .as_array()
                    .ok_or_else(|| Error::ParseError("alpha file must hold an array".into()))?
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        _ => Err(Error::ParseError("alpha entries must be strings".into())),
                    })
                    .collect::<Result<_, _>>()?
            }
            _ => {
                return Err(Error::ParseError(
                    "provide exactly one of --alpha or --alpha-file".into(),
                ))
            }
        };
        let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
        Alpha::validate(&refs)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// H*(X): the ordinary presentation Q[c,p]/I.
    X,
    /// Circle-equivariant H*_{S^1}(X): Q[c,p,x]/J.
    XEq,
    /// Core component U_S: Q[b]/I_S (requires --s).
    Core,
    /// Equivariant core component: Q[b,x]/J_S (requires --s).
    CoreEq,
    /// Polygon subspace M_S via the kernel presentation at x = 0 (requires --s).
    PolygonSub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Global,
    Component,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the nonempty short subsets of a generic alpha.
    Shorts {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Hilbert function / Betti numbers of a presentation.
    Betti {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, value_enum)]
        target: Target,
        /// Subset S as comma-separated 1-based indices, e.g. 1,2.
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Print the generators of a ring presentation.
    Presentation {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Verify the basis/spanning claims for the top cohomology of M.
    Claims {
        #[command(subcommand)]
        action: ClaimsAction,
    },
    /// Core-incidence geometry.
    Core {
        #[command(subcommand)]
        action: CoreAction,
    },
    /// Intersection form of a core-component surface (n = 5, |S| = 2).
    IntersectionForm {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Moment-map numerics on points of T*C^{2n}.
    Point {
        #[command(subcommand)]
        action: PointAction,
    },
    /// Deterministic full sweep over the built-in battery; JSON output.
    Selftest {
        #[arg(long, default_value = "0")]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ClaimsAction {
    /// Run the closed-form, telescoping, triangularity and spanning checks.
    Verify {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum CoreAction {
    /// Emit the core-incidence graph (DOT or JSON).
    Graph {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long, value_enum)]
        scope: Scope,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Fixed-point Euler cross-check for U_S (all S, or one via --s).
    EulerCheck {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum PointAction {
    /// Check a point (JSON from --point-file or stdin) against the
    /// moment-map level, straightness and stability conditions.
    Check {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        s: String,
        #[arg(long)]
        point_file: Option<String>,
        #[arg(long, default_value = "1e-9")]
        tol: f64,
    },
    /// Sample seeded polygon-pair data and verify the round trip.
    Roundtrip {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long)]
        s: String,
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, default_value = "100")]
        samples: usize,
        #[arg(long, default_value = "1e-9")]
        tol: f64,
    },
}

fn parse_subset(spec: &str, n: usize) -> Result<Subset, Error> {
    let elements: Vec<usize> = spec
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::ParseError(format!("subset index {part:?}")))
        })
        .collect::<Result<_, _>>()?;
    Subset::from_elements(&elements, n)
}

/// Relabels so that 1 ∈ S, echoing the permutation when it is not trivial.
fn relabeled(a: &Alpha, s: Subset) -> Result<(Relabeling, Option<serde_json::Value>), Error> {
    let relabeling = relabel_to_contain_one(a, s)?;
    let echo = (!relabeling.is_identity()).then(|| {
        serde_json::json!({
            "note": "relabeled so that 1 lies in S; new index i carries old index perm[i-1]",
            "perm": relabeling.perm,
        })
    });
    Ok((relabeling, echo))
}

fn presentation_for(
    a: &Alpha,
    target: Target,
    s: Option<&String>,
) -> Result<(Presentation, Option<serde_json::Value>), Error> {
    let need_subset = |s: Option<&String>| -> Result<Subset, Error> {
        let spec = s.ok_or_else(|| Error::ParseError("this target requires --s".into()))?;
        parse_subset(spec, a.n())
    };
    match target {
        Target::X => Ok((konno_ideal(a), None)),
        Target::XEq => Ok((equivariant_ideal(a), None)),
        Target::Core => {
            let (r, echo) = relabeled(a, need_subset(s)?)?;
            Ok((core_ordinary_ideal(&r.alpha, r.subset)?, echo))
        }
        Target::CoreEq => {
            let (r, echo) = relabeled(a, need_subset(s)?)?;
            Ok((core_equivariant_ideal(&r.alpha, r.subset)?, echo))
        }
        Target::PolygonSub => {
            let (r, echo) = relabeled(a, need_subset(s)?)?;
            Ok((
                polygon_subspace_kernel(&r.alpha, r.subset)?.specialize_x_to_zero()?,
                echo,
            ))
        }
    }
}

fn print_value(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).unwrap());
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Shorts { alpha, format } => {
            let a = alpha.load()?;
            let shorts = a.nonempty_shorts();
            if format == Format::Json {
                print_value(&serde_json::json!({
                    "n": a.n(),
                    "shorts": shorts,
                    "count": shorts.len(),
                }));
            } else {
                println!("{} nonempty short subsets:", shorts.len());
                for s in shorts {
                    println!("  {s}");
                }
            }
        }
        Command::Betti {
            alpha,
            target,
            s,
            max_degree,
            format,
        } => {
            let a = alpha.load()?;
            let (pres, echo) = presentation_for(&a, target, s.as_ref())?;
            let table = pres.betti(max_degree.unwrap_or_else(|| pres.default_max_degree()))?;
            if format == Format::Json {
                let mut value = serde_json::json!({
                    "dims": table.trimmed(),
                    "euler": table.euler(),
                });
                if let Some(echo) = echo {
                    value["relabeling"] = echo;
                }
                print_value(&value);
            } else {
                if let Some(echo) = echo {
                    println!("note: {}", echo["perm"]);
                }
                println!("poincare: {}", table.poincare());
                println!("dims:     {:?}", table.trimmed());
                println!("euler:    {}", table.euler());
            }
        }
        Command::Presentation {
            alpha,
            target,
            s,
            format,
        } => {
            let a = alpha.load()?;
            let (pres, echo) = presentation_for(&a, target, s.as_ref())?;
            if format == Format::Json {
                let mut value = pres.to_json();
                if let Some(echo) = echo {
                    value["relabeling"] = echo;
                }
                print_value(&value);
            } else {
                if let Some(echo) = echo {
                    println!("note: {}", echo["perm"]);
                }
                println!("provenance: {}", pres.provenance().tag());
                for g in pres.ideal().generators() {
                    println!("  {g}");
                }
            }
        }
        Command::Claims {
            action: ClaimsAction::Verify { alpha, format },
        } => {
            let a = alpha.load()?;
            let n = a.n();
            for mask in 1..(1u32 << n) - 1 {
                expand_v_s(Subset::from_mask(mask, n))?;
            }
            for t in a.nonempty_shorts() {
                if t.contains(1) {
                    check_ws(&a, t)?;
                }
            }
            let tri = transition_matrix(&a)?;
            let spanning = spanning_check(&a)?;
            if format == Format::Json {
                print_value(&serde_json::json!({
                    "vs_closed_form": "ok",
                    "ws_telescoping": "ok",
                    "transition_matrix": { "size": tri.size(), "triangular": true },
                    "spanning": spanning,
                }));
            } else {
                println!("v_S closed form:        ok ({} subsets)", (1u32 << n) - 2);
                println!("w_T telescoping:        ok");
                println!(
                    "transition matrix:      {}x{} lower triangular, unit diagonal",
                    tri.size(),
                    tri.size()
                );
                println!("top-degree spanning:    rank {}", tri.size());
            }
        }
        Command::Core { action } => match action {
            CoreAction::Graph {
                alpha,
                scope,
                s,
                format,
            } => {
                let a = alpha.load()?;
                let scope = match scope {
                    Scope::Global => GraphScope::Global,
                    Scope::Component => {
                        let spec =
                            s.ok_or_else(|| Error::ParseError("component scope needs --s".into()))?;
                        GraphScope::Component(parse_subset(&spec, a.n())?)
                    }
                };
                let fmt = match format {
                    Format::Json => GraphFormat::Json,
                    _ => GraphFormat::Dot,
                };
                println!("{}", emit_core_graph(&a, scope, fmt)?);
            }
            CoreAction::EulerCheck { alpha, s, format } => {
                let a = alpha.load()?;
                let subsets = match s {
                    Some(spec) => vec![parse_subset(&spec, a.n())?],
                    None => a.shorts_geq2(),
                };
                let mut rows = Vec::new();
                for s in subsets {
                    let (r, _) = relabeled(&a, s)?;
                    let check = euler_cross_check(&r.alpha, r.subset)?;
                    rows.push((s, check));
                }
                if format == Format::Json {
                    let value: Vec<_> = rows
                        .iter()
                        .map(|(s, c)| {
                            serde_json::json!({
                                "s": s,
                                "euler_us": c.euler_us,
                                "euler_ms": c.euler_ms,
                                "short_supersets": c.short_supersets,
                            })
                        })
                        .collect();
                    print_value(&serde_json::json!(value));
                } else {
                    for (s, c) in rows {
                        println!(
                            "U_{s}: euler {} = {} + {}*{}",
                            c.euler_us,
                            c.euler_ms,
                            s.len() - 1,
                            c.short_supersets
                        );
                    }
                }
            }
        },
        Command::IntersectionForm { alpha, s, format } => {
            let a = alpha.load()?;
            let (r, echo) = relabeled(&a, parse_subset(&s, a.n())?)?;
            let (basis, labels) = default_surface_basis(&r.alpha, r.subset)?;
            let form = intersection_form(&r.alpha, r.subset, &basis)?;
            if format == Format::Json {
                let mut value = form.to_json();
                value["basis"] = serde_json::json!(labels);
                if let Some(echo) = echo {
                    value["relabeling"] = echo;
                }
                print_value(&value);
            } else {
                if let Some(echo) = echo {
                    println!("note: {}", echo["perm"]);
                }
                println!("basis: {}", labels.join(", "));
                for row in &form.gram {
                    let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    println!("  [{}]", cells.join(", "));
                }
                println!(
                    "signature: (+{}, -{}, 0:{})",
                    form.signature.positive, form.signature.negative, form.signature.zero
                );
                match form.blow_up_points {
                    Some(k) => println!("profile: CP^2 blown up at {k} points"),
                    None => println!("profile: not a blow-up form"),
                }
            }
        }
        Command::Point { action } => match action {
            PointAction::Check {
                alpha,
                s,
                point_file,
                tol,
            } => {
                let a = alpha.load()?;
                let s = parse_subset(&s, a.n())?;
                let text = match point_file {
                    Some(path) => {
                        std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?
                    }
                    None => {
                        use std::io::Read;
                        let mut buffer = String::new();
                        std::io::stdin()
                            .read_to_string(&mut buffer)
                            .map_err(|e| Error::Io(e.to_string()))?;
                        buffer
                    }
                };
                let value: serde_json::Value =
                    serde_json::from_str(&text).map_err(|e| Error::ParseError(e.to_string()))?;
                let x = PointPQ::from_json(&value)?;
                let data = polygon_pair_from_point(&a, s, &x, tol)?;
                let report = is_stable(&a, &x, tol);
                print_value(&serde_json::json!({
                    "moment_residual": moment_residual(&a, &x),
                    "polygon_pair": data.to_json(),
                    "stable": report.stable,
                    "witness": report.witness.map(|w| match w {
                        StabilityWitness::ZeroQ(i) => serde_json::json!({"zero_q": i}),
                        StabilityWitness::LongStraight(s) =>
                            serde_json::json!({"long_straight": s}),
                    }),
                }));
            }
            PointAction::Roundtrip {
                alpha,
                s,
                seed,
                samples,
                tol,
            } => {
                let a = alpha.load()?;
                let s = parse_subset(&s, a.n())?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut max_residual = 0.0f64;
                let mut max_moment = 0.0f64;
                for _ in 0..samples {
                    let data = sample_polygon_pair(&a, s, &mut rng)?;
                    let (x, u_rot) = point_from_polygon_pair(&a, s, &data, tol)?;
                    max_moment = max_moment.max(moment_residual(&a, &x));
                    let back = polygon_pair_from_point(&a, s, &x, tol.max(1e-7))?;
                    max_residual = max_residual.max(back.distance(&data.rotate(&u_rot)));
                }
                if max_residual > tol || max_moment > tol {
                    return Err(Error::ClaimViolation(format!(
                        "round-trip residual {max_residual:e} exceeds tolerance {tol:e}"
                    )));
                }
                print_value(&serde_json::json!({
                    "seed": seed,
                    "samples": samples,
                    "max_roundtrip_residual": max_residual,
                    "max_moment_residual": max_moment,
                }));
            }
        },
        Command::Selftest { seed } => {
            print_value(&hyperpoly::selftest::run(seed)?);
        }
    }
    Ok(())
}

/// The documented surface basis: h = b_1 − Σ_{j∈J} b_j followed by the b_j,
/// where J = {j ∈ S^c : S ∪ {j} is short} indexes the exceptional classes.
fn default_surface_basis(a: &Alpha, s: Subset) -> Result<(Vec<QPoly>, Vec<String>), Error> {
    let ring = hyperpoly::poly::PolyRing::b_ring(a.n());
    let js: Vec<usize> = s
        .complement()
        .elements()
        .into_iter()
        .filter(|&j| a.is_short(s.insert(j)).unwrap_or(false))
        .collect();
    let b = |i: usize| QPoly::var_named(&ring, &format!("b{i}"));
    let mut h = b(1);
    let mut label = "b1".to_string();
    for &j in &js {
        h = h.sub(&b(j))?;
        label.push_str(&format!("-b{j}"));
    }
    let mut basis = vec![h];
    let mut labels = vec![label];
    for &j in &js {
        basis.push(b(j));
        labels.push(format!("b{j}"));
    }
    Ok((basis, labels))
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
