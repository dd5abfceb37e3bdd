//! Command-line front end: group-law coefficient tables, operation algebra,
//! W-theory computations, the integer lemmas, and the batch verification
//! suite with a machine-readable report.
//!
//! Exit codes: 0 on success (all selected checks pass for `verify`), 1 when
//! a verification check fails, 2 on configuration or parse errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cobord::numtheory::{cases_solver, fermat_solutions, m_k, CasesOutcome, MkBranch};
use cobord::ops::{delta_op, SuOp};
use cobord::parse::{parse_op, parse_poly, parse_series};
use cobord::verify::{run_all, VerifyConfig};
use cobord::wtheory::{
    build_orientation, compute_fw, notgen_witness, project, snumber_gcd_analysis, w_multiply,
    MultiplicationSpec, OrientationSpec, ProjectionSpec,
};
use cobord::FglContext;

#[derive(Parser)]
#[command(
    name = "cobord",
    version,
    about = "Exact cobordism computations at a configurable truncation"
)]
struct Cli {
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = 10)]
    order: u32,
    /// Weight cap on the coefficient ring (homological degree = 2·weight).
    #[arg(long, global = true, default_value_t = 8)]
    weight_cap: u32,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Formal group law coefficient tables.
    Fgl {
        #[command(subcommand)]
        cmd: FglCmd,
    },
    /// SU-linear operations in the ∂-basis.
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// The theory W: projections, multiplications, orientations, analysis.
    W {
        #[command(subcommand)]
        cmd: WCmd,
    },
    /// Integer lemmas.
    Nt {
        #[command(subcommand)]
        cmd: NtCmd,
    },
    /// Run the verification suite and emit a report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum FglCmd {
    /// Emit the coefficients of F^k (k = 1 is the group law itself).
    Coeffs {
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
}

#[derive(Subcommand)]
enum OpCmd {
    /// Expand Δ_{(k1,k2)} in the ∂-basis.
    Expand {
        #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
        delta: Vec<u32>,
    },
    /// Apply an operation to a ring element.
    Apply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        elem: String,
    },
    /// Compose two operations.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
}

#[derive(Subcommand)]
enum WCmd {
    /// Apply an SU-linear projection to a ring element.
    Project {
        /// Use the Stong projection.
        #[arg(long, conflicts_with = "lambdas")]
        stong: bool,
        /// Projection as an operation literal, e.g. "d0 + (b1^2-b2)*d2".
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        elem: String,
    },
    /// Multiply two kernel elements with a*b = ab + δ∂a∂b.
    Multiply {
        /// Twisting class ω (weight 2, in ker Δ); default 0.
        #[arg(long)]
        omega: Option<String>,
        a: String,
        b: String,
    },
    /// Compute the formal group law of W for an orientation.
    Fgl {
        /// Orientation series f(u); default the standard orientation u.
        #[arg(long)]
        orientation: Option<String>,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Characteristic-number gcd analysis of the F_W coefficients at level k.
    Analyze {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        orientation: Option<String>,
        #[arg(long)]
        omega: Option<String>,
    },
}

#[derive(Subcommand)]
enum NtCmd {
    /// The binomial gcds m_k.
    Mk {
        #[arg(long)]
        upto: u32,
    },
    /// Solutions of p^s = 2^ℓ + 1.
    Fermat {
        #[arg(long)]
        lmax: u32,
    },
    /// Solvability of the coefficient-gcd equation.
    Cases {
        #[arg(long)]
        upto: u32,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only checks whose name matches this pattern (`*` wildcards).
    #[arg(long)]
    only: Option<String>,
    #[arg(long)]
    orientation: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// User projection as an operation literal.
    #[arg(long)]
    projection: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let order = cli.order;
    let cap = cli.weight_cap;
    let format = cli.format;
    match cli.command {
        Command::Fgl { cmd } => {
            let FglCmd::Coeffs { power } = cmd;
            let ctx = FglContext::build(order, cap)?;
            let series = ctx.alpha_power(power)?;
            emit_series2(&series, format, power);
        }
        Command::Op { cmd } => {
            let ctx = FglContext::build(order, cap)?;
            match cmd {
                OpCmd::Expand { delta } => {
                    let op = delta_op(&ctx, delta[0], delta[1])?;
                    emit_op(&op, format);
                }
                OpCmd::Apply { op, elem } => {
                    let op = parse_op(&op, cap)?;
                    let elem = parse_poly(&elem, cap)?;
                    let result = op.apply(&elem, &ctx)?;
                    emit_poly(&result, format);
                }
                OpCmd::Compose { f, g } => {
                    let f = parse_op(&f, cap)?;
                    let g = parse_op(&g, cap)?;
                    emit_op(&f.compose(&g, &ctx)?, format);
                }
            }
        }
        Command::W { cmd } => {
            let ctx = FglContext::build(order, cap)?;
            match cmd {
                WCmd::Project {
                    stong: _,
                    lambdas,
                    elem,
                } => {
                    let spec = projection_from(&ctx, lambdas.as_deref())?;
                    let validity = spec.validate(&ctx)?;
                    let elem = parse_poly(&elem, cap)?;
                    let image = project(&elem, &spec, &ctx)?;
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "image": image.to_string(),
                                "projection_valid": validity.is_ok(),
                            }))?
                        ),
                        _ => {
                            println!("{image}");
                            if let Err(w) = validity {
                                eprintln!("warning: Δ∘π != 0, composite = {w}");
                            }
                        }
                    }
                }
                WCmd::Multiply { omega, a, b } => {
                    let mult = mult_from(&ctx, omega.as_deref())?;
                    let a = parse_poly(&a, cap)?;
                    let b = parse_poly(&b, cap)?;
                    emit_poly(&w_multiply(&a, &b, &mult, &ctx)?, format);
                }
                WCmd::Fgl { orientation, omega } => {
                    let mult = mult_from(&ctx, omega.as_deref())?;
                    let spec = orientation_from(&ctx, orientation.as_deref())?;
                    let fw = compute_fw(&spec, &mult, &ctx)?;
                    emit_series2(&fw.fw, format, 1);
                }
                WCmd::Analyze {
                    k,
                    orientation,
                    omega,
                } => {
                    let mult = mult_from(&ctx, omega.as_deref())?;
                    let spec = orientation_from(&ctx, orientation.as_deref())?;
                    let fw = compute_fw(&spec, &mult, &ctx)?;
                    let analysis = snumber_gcd_analysis(&fw, &ctx, k)?;
                    let report = notgen_witness(&fw, &mult, &ctx, k)?;
                    let cs: Vec<String> = analysis.c_values.iter().map(|c| c.to_string()).collect();
                    let sols: Vec<String> =
                        report.c_solutions.iter().map(|c| c.to_string()).collect();
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "k": k,
                                "coefficient_gcd": analysis.gcd.to_string(),
                                "c_values": cs,
                                "subring_gcd": report.subring_gcd.to_string(),
                                "kernel_gcd": report.w_gcd.to_string(),
                                "kernel_gcd_reachable_c": sols,
                                "nongeneration_witness": report.witness,
                            }))?
                        ),
                        _ => {
                            println!("k = {k}");
                            println!("gcd of |s_{k}| over the coefficients: {}", analysis.gcd);
                            println!("matching c values: {cs:?}");
                            println!("subring lattice gcd: {}", report.subring_gcd);
                            println!("kernel lattice gcd:  {}", report.w_gcd);
                            println!("non-generation witness: {}", report.witness);
                        }
                    }
                }
            }
        }
        Command::Nt { cmd } => {
            if let NtCmd::Fermat { lmax } = &cmd {
                anyhow::ensure!((1..=62).contains(lmax), "--lmax must be in 1..=62");
            }
            emit_nt(cmd, format);
        }
        Command::Verify(args) => {
            let config = VerifyConfig {
                order,
                weight_cap: cap,
                orientation: args.orientation,
                omega: args.omega,
                projection: args.projection,
                only: args.only,
            };
            let report = run_all(&config)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                _ => print!("{}", report.to_text()),
            }
            return Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn projection_from(ctx: &FglContext, lambdas: Option<&str>) -> anyhow::Result<ProjectionSpec> {
    Ok(match lambdas {
        None => ProjectionSpec::stong(ctx),
        Some(text) => {
            let op = parse_op(text, ctx.weight_cap())?;
            ProjectionSpec::from_lambdas(
                op.coeffs()
                    .filter(|(i, _)| **i >= 1)
                    .map(|(i, c)| (*i, c.clone()))
                    .collect(),
            )
        }
    })
}

fn mult_from(ctx: &FglContext, omega: Option<&str>) -> anyhow::Result<MultiplicationSpec> {
    Ok(match omega {
        None => MultiplicationSpec::stong(ctx)?,
        Some(text) => {
            let omega = parse_poly(text, ctx.weight_cap())?;
            MultiplicationSpec::with_omega(ctx, omega)?
        }
    })
}

fn orientation_from(ctx: &FglContext, text: Option<&str>) -> anyhow::Result<OrientationSpec> {
    let spec = match text {
        None => OrientationSpec::standard(ctx),
        Some(text) => OrientationSpec {
            f: parse_series(text, ctx.weight_cap(), ctx.order())?,
            projection: ProjectionSpec::stong(ctx),
        },
    };
    // fail early on a malformed orientation
    build_orientation(&spec, ctx)?;
    Ok(spec)
}

fn emit_poly(p: &cobord::GradedPoly, format: Format) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "value": p.to_string() })).unwrap()
        ),
        _ => println!("{p}"),
    }
}

fn emit_op(op: &SuOp, format: Format) {
    match format {
        Format::Json => {
            let coeffs: Vec<_> = op
                .coeffs()
                .map(|(i, c)| json!({ "index": i, "coefficient": c.to_string() }))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "coefficients": coeffs })).unwrap()
            );
        }
        _ => println!("{op}"),
    }
}

fn emit_series2(
    series: &cobord::series::Series<cobord::series::PolyRing>,
    format: Format,
    power: u32,
) {
    match format {
        Format::Csv => print!("{}", series.to_csv()),
        Format::Json => {
            let mut coeffs = Vec::new();
            for (e, c) in series.terms() {
                coeffs.push(json!({
                    "i": e[0],
                    "j": e[1],
                    "coefficient": c.to_string(),
                }));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "power": power,
                    "coefficients": coeffs,
                }))
                .unwrap()
            );
        }
        Format::Text => println!("{series}"),
    }
}

fn emit_nt(cmd: NtCmd, format: Format) {
    match cmd {
        NtCmd::Mk { upto } => {
            let rows: Vec<_> = (1..=upto).map(m_k).collect();
            match format {
                Format::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|m| {
                            let branch = match m.branch {
                                MkBranch::NonPrimePower => json!("non-prime-power"),
                                MkBranch::PrimePower { p } => json!({ "prime": p }),
                            };
                            json!({ "k": m.k, "value": m.value, "branch": branch })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                }
                Format::Csv => {
                    println!("k,value");
                    for m in rows {
                        println!("{},{}", m.k, m.value);
                    }
                }
                Format::Text => {
                    for m in rows {
                        println!("m_{} = {}", m.k, m.value);
                    }
                }
            }
        }
        NtCmd::Fermat { lmax } => {
            let sols = fermat_solutions(lmax);
            match format {
                Format::Json => {
                    let items: Vec<_> = sols
                        .iter()
                        .map(|(p, s, l)| json!({ "p": p, "s": s, "l": l }))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                }
                Format::Csv => {
                    println!("p,s,l");
                    for (p, s, l) in sols {
                        println!("{p},{s},{l}");
                    }
                }
                Format::Text => {
                    for (p, s, l) in sols {
                        println!("{p}^{s} = 2^{l} + 1");
                    }
                }
            }
        }
        NtCmd::Cases { upto } => {
            let rows: Vec<_> = (2..=upto).map(|k| (k, cases_solver(k))).collect();
            match format {
                Format::Json => {
                    let items: Vec<_> = rows
                        .iter()
                        .map(|(k, outcome)| match outcome {
                            CasesOutcome::Solvable { c } => {
                                json!({ "k": k, "solvable": true, "c": c.to_string() })
                            }
                            CasesOutcome::Unsolvable { p, s, ell } => json!({
                                "k": k,
                                "solvable": false,
                                "excluded_form": { "p": p, "s": s, "l": ell },
                            }),
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&items).unwrap());
                }
                _ => {
                    for (k, outcome) in rows {
                        match outcome {
                            CasesOutcome::Solvable { c } => println!("k={k}: c = {c}"),
                            CasesOutcome::Unsolvable { p, s, ell } => {
                                println!("k={k}: unsolvable (k = 2^{ell} = {p}^{s} - 1)")
                            }
                        }
                    }
                }
            }
        }
    }
}
