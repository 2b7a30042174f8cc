use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ucl_core::actions::{classify_action, orbit_space, verify_action_theorems};
use ucl_core::convergence::{structures_report, CarrierSelector};
use ucl_core::covering::{classify_map, CoverClass};
use ucl_core::generate::{generate, Bounds, InstanceSpec};
use ucl_core::genpaths::{gp_space, uniform_pi1, uniform_pi1_tower, verify_constant_gp, GpOptions, Pi1Mode};
use ucl_core::io::{load_action, load_map, load_space, load_tower, read_json, to_json_string, write_json};
use ucl_core::par::Parallelism;
use ucl_core::rips::{build_rips, h1, Budgets};
use ucl_core::suite::{default_corpus, run_suite, SuiteKind, SuiteOptions};
use ucl_core::FiniteUniformSpace;

#[derive(Parser)]
#[command(name = "ucl", version, about = "Discrete covering theory of finite uniform spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files from a family and its parameters.
    Gen(GenArgs),
    /// Classify a map as uniform covering, generalized covering or neither.
    CheckCover {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// Classify a group action.
    ClassifyAction {
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also classify the projection and run the action propositions.
        #[arg(long)]
        theorems: bool,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
    },
    /// Write the orbit space and the projection onto it.
    Quotient {
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform structures on the function space and on the group.
    Structures {
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Carrier::Auto)]
        carrier: Carrier,
    },
    /// Build the Rips complex of one base entry.
    Rips {
        #[arg(long)]
        space: PathBuf,
        /// Entry name or index; the finest entry by default.
        #[arg(long)]
        scale: Option<String>,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First homology of the Rips complex at every (or one) base entry.
    H1 {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        scale: Option<String>,
    },
    /// Uniform fundamental pro-group of a space or a tower.
    Pi1 {
        #[arg(long, conflicts_with = "tower", required_unless_present = "tower")]
        space: Option<PathBuf>,
        #[arg(long)]
        tower: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        max_cosets: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generalized-path space at the finest scale.
    Gp {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 12)]
        radius: usize,
        #[arg(long, default_value_t = 512)]
        max_classes: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the proposition suite over a seeded corpus or a spec list.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 300)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON list of instance specs instead of the seeded corpus.
        #[arg(long)]
        specs: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dmax: usize,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Instance family, e.g. cycle-cover.
    #[arg(long, required_unless_present = "spec")]
    family: Option<String>,
    /// JSON spec file instead of --family and parameters.
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    step: Option<usize>,
    /// Decreasing radii, comma separated.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<usize>>,
    #[arg(long)]
    base: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<SpaceMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_group: Option<usize>,
    #[arg(long, default_value_t = 64)]
    max_points_bound: usize,
    #[arg(long, default_value_t = 16)]
    max_group_bound: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Carrier {
    Auto,
    Image,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Abelian,
    #[value(alias = "presentation")]
    Pres,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceMode {
    Strict,
    Scale,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    All,
    Covering,
    Actions,
    Convergence,
}

fn emit(value: &impl serde::Serialize, report: Option<&Path>) -> Result<()> {
    match report {
        Some(p) => write_json(p, value)?,
        None => print!("{}", to_json_string(value)),
    }
    Ok(())
}

fn scale_of(space: &FiniteUniformSpace, scale: Option<&str>) -> Result<usize> {
    let Some(s) = scale else { return Ok(space.finest()) };
    if let Some(i) = space.scale_index(s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if i < space.scales() => Ok(i),
        _ => bail!("no base entry named {s:?}; entries are {:?}", space.scale_names()),
    }
}

fn gen_spec(a: &GenArgs) -> Result<InstanceSpec> {
    if let Some(p) = &a.spec {
        return Ok(read_json(p)?);
    }
    let mut m = Map::new();
    m.insert("family".into(), json!(a.family.clone().unwrap_or_default()));
    let mut put = |key: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(key.into(), v);
        }
    };
    put("n", a.n.map(Value::from));
    put("k", a.k.map(Value::from));
    put("w", a.w.map(Value::from));
    put("h", a.h.map(Value::from));
    put("step", a.step.map(Value::from));
    put("radii", a.radii.clone().map(Value::from));
    put("base", a.base.map(Value::from));
    put("levels", a.levels.map(Value::from));
    put("gens", a.gens.map(Value::from));
    put("len", a.len.map(Value::from));
    put("depth", a.depth.map(Value::from));
    put("points", a.points.map(Value::from));
    put(
        "mode",
        a.mode.map(|m| {
            Value::from(match m {
                SpaceMode::Strict => "strict",
                SpaceMode::Scale => "scale",
            })
        }),
    );
    put("seed", a.seed.map(Value::from));
    put("max_group", a.max_group.map(Value::from));
    serde_json::from_value(Value::Object(m)).context("invalid instance parameters")
}

fn run(cli: Cli) -> Result<u8> {
    let mut budgets = Budgets::from_env();
    match cli.command {
        Command::Gen(a) => {
            let spec = gen_spec(&a)?;
            let bounds = Bounds {
                max_points: a.max_points_bound,
                max_group: a.max_group_bound,
            };
            let files = generate(&spec, &bounds)?.write(&a.out)?;
            write_json(&a.out.join("spec.json"), &spec)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(0)
        }
        Command::CheckCover { map, report, dmax } => {
            let f = load_map(&map)?;
            let r = classify_map(&f, dmax);
            emit(&r, report.as_deref())?;
            Ok(match r.class {
                CoverClass::UniformCovering => 0,
                CoverClass::GeneralizedUniformCovering => 3,
                CoverClass::Neither => 4,
            })
        }
        Command::ClassifyAction {
            action,
            report,
            theorems,
            dmax,
        } => {
            let a = load_action(&action)?;
            if theorems {
                emit(&verify_action_theorems(&a, dmax), report.as_deref())?;
            } else {
                emit(&classify_action(&a), report.as_deref())?;
            }
            Ok(0)
        }
        Command::Quotient { action, out } => {
            let a = load_action(&action)?;
            let q = orbit_space(&a);
            let source = action
                .parent()
                .unwrap_or(Path::new(""))
                .join(load_action_space_ref(&action)?);
            let source = std::fs::canonicalize(&source).with_context(|| format!("{}", source.display()))?;
            let space_ref = source.display().to_string();
            write_json(&out.join("quotient.json"), &q.quotient.to_raw())?;
            write_json(
                &out.join("projection.json"),
                &q.projection.to_raw(space_ref, "quotient.json"),
            )?;
            println!("{}", out.join("quotient.json").display());
            println!("{}", out.join("projection.json").display());
            Ok(0)
        }
        Command::Structures {
            action,
            report,
            carrier,
        } => {
            let a = load_action(&action)?;
            let sel = match carrier {
                Carrier::Auto => CarrierSelector::Auto,
                Carrier::Image => CarrierSelector::Image,
                Carrier::Full => CarrierSelector::Full,
            };
            emit(&structures_report(&a, sel)?, report.as_deref())?;
            Ok(0)
        }
        Command::Rips {
            space,
            scale,
            dmax,
            out,
        } => {
            let sp = load_space(&space)?;
            let i = scale_of(&sp, scale.as_deref())?;
            let k = build_rips(&sp, i, dmax)?;
            emit(&k.to_raw(), out.as_deref())?;
            Ok(0)
        }
        Command::H1 { space, scale } => {
            let sp = load_space(&space)?;
            let scales = match scale {
                Some(s) => vec![scale_of(&sp, Some(&s))?],
                None => (0..sp.scales()).collect(),
            };
            let mut rows = Vec::new();
            for i in scales {
                let inv = h1(&build_rips(&sp, i, 2)?)?;
                rows.push(json!({ "scale": sp.scale_name(i), "h1": inv, "group": inv.to_string() }));
            }
            emit(&rows, None)?;
            Ok(0)
        }
        Command::Pi1 {
            space,
            tower,
            mode,
            max_cosets,
            report,
        } => {
            if let Some(c) = max_cosets {
                budgets.cosets = c;
            }
            let pick = |default: Pi1Mode| match mode {
                Some(Mode::Abelian) => Pi1Mode::Abelian,
                Some(Mode::Pres) => Pi1Mode::Presentation,
                None => default,
            };
            let g = match (space, tower) {
                (Some(s), _) => uniform_pi1(&*load_space(&s)?, pick(Pi1Mode::Presentation), budgets)?,
                (None, Some(t)) => uniform_pi1_tower(&load_tower(&t)?, pick(Pi1Mode::Abelian), budgets)?,
                (None, None) => bail!("give --space or --tower"),
            };
            emit(&g, report.as_deref())?;
            Ok(0)
        }
        Command::Gp {
            space,
            radius,
            max_classes,
            report,
        } => {
            let sp = load_space(&space)?;
            let opts = GpOptions {
                budgets,
                radius,
                max_classes,
                ..GpOptions::default()
            };
            let gp = gp_space(&sp, opts)?;
            let constant = verify_constant_gp(&sp);
            emit(&json!({ "gp": gp, "constant": constant }), report.as_deref())?;
            Ok(0)
        }
        Command::Verify {
            suite,
            count,
            seed,
            specs,
            report,
            dmax,
            sequential,
        } => {
            let kind = match suite {
                Suite::All => SuiteKind::All,
                Suite::Covering => SuiteKind::Covering,
                Suite::Actions => SuiteKind::Actions,
                Suite::Convergence => SuiteKind::Convergence,
            };
            let (list, seed) = match specs {
                Some(p) => (read_json::<Vec<InstanceSpec>>(&p)?, None),
                None => (default_corpus(seed, count), Some(seed)),
            };
            let opts = SuiteOptions {
                kind,
                d_max: dmax,
                parallelism: if sequential {
                    Parallelism::Sequential
                } else {
                    Parallelism::Parallel
                },
                ..SuiteOptions::default()
            };
            let r = run_suite(&list, seed, &opts);
            emit(&r, report.as_deref())?;
            eprintln!(
                "{} instances, {} propositions, {} failed checks, {} input errors",
                r.instance_count,
                r.propositions.len(),
                r.failed_checks,
                r.errors
            );
            Ok(if r.errors > 0 {
                2
            } else if r.failed_checks > 0 {
                1
            } else {
                0
            })
        }
    }
}

fn load_action_space_ref(action: &Path) -> Result<String> {
    let raw: ucl_core::actions::RawAction = read_json(action)?;
    Ok(raw.space)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
