//! `lattice-effects`: command-line access to veils and generative effects.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lattice_effects::contagion::Description;
use lattice_effects::dot;
use lattice_effects::dynamical::{colim, commuting_square_check};
use lattice_effects::galois::{SearchMode, Veil};
use lattice_effects::io::{element_ref, system_ref, DescriptionSpec, MapSpec, PosetSpec, TimedSpec, VeilSpec, WitnessRecord};
use lattice_effects::lifts::{factor, injective_criterion, lift_map, lift_preserves_effects, surjective_criterion};
use lattice_effects::order::{Budget, Poset};
use lattice_effects::{random, subset, Error};

const BUDGET_VAR: &str = "LATTICE_EFFECTS_BUDGET";

#[derive(Parser)]
#[command(name = "lattice-effects", version, about = "Veils, closure operators and generative effects on finite posets")]
struct Cli {
    /// Seed for every sampled search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args)]
struct Search {
    /// Check every pair (the default).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Check this many random pairs instead.
    #[arg(long)]
    samples: Option<usize>,
}

impl Search {
    fn mode(&self, seed: u64) -> SearchMode {
        match self.samples {
            Some(samples) => SearchMode::Sampled { samples, seed },
            None => SearchMode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a poset and report its shape.
    CheckPoset { poset: PathBuf },
    /// Run a contagion cascade.
    Simulate {
        description: PathBuf,
        /// Initially infected nodes, comma separated.
        #[arg(long, value_delimiter = ',')]
        initial: Vec<String>,
        /// Include every intermediate state.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate a timed description from the empty trajectory.
    SimulateTimed {
        description: PathBuf,
        /// Last time step; defaults to the stabilization bound.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// The least fixed point of a description.
    Phenome { description: PathBuf },
    /// Union of two descriptions over the same nodes.
    Merge { first: PathBuf, second: PathBuf },
    /// Check that a map (or stock veil) is a veil and print its left adjoint.
    CheckVeil { veil: PathBuf },
    /// List generative-effect witnesses of a veil.
    DetectEffects {
        veil: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Split a veil into a surjective and an injective veil.
    Factorize { veil: PathBuf },
    /// Factor a map through its congruence quotient and image semilattice.
    Factor { map: PathBuf },
    /// Lift a map to filter lattices.
    Lift {
        map: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Compare the untimed phenome with the colimit of the timed evaluation.
    CheckCommute { description: PathBuf },
    /// Graphviz rendering of a poset, or of a cascade with --trace.
    ExportDot {
        input: PathBuf,
        /// Treat the input as a description and draw its cascade.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_delimiter = ',')]
        initial: Vec<String>,
    },
}

enum Failure {
    Core(Error),
    /// A core error with its elements written by label.
    Detailed(Error, Value),
    Usage(String),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Core(Error::from(e))
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Core(e) | Failure::Detailed(e, _) => e.kind(),
            Failure::Usage(_) => "UsageError",
            Failure::Io(..) => "IoError",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) | Failure::Detailed(e, _) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Io(path, e) => format!("{}: {e}", path.display()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) | Failure::Detailed(e, _) if e.is_internal() => 1,
            _ => 2,
        }
    }
}

type Outcome = Result<Output, Failure>;

enum Output {
    Json(Value),
    Dot(String),
}

fn budget() -> Result<Budget, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Budget::with_elements)
            .ok_or_else(|| Failure::Usage(format!("{BUDGET_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(Budget::default()),
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(serde_json::from_str(&text)?)
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    Ok(serde_json::from_value(read_json(path)?)?)
}

fn description(path: &Path) -> Result<Description, Failure> {
    Ok(load::<DescriptionSpec>(path)?.build()?)
}

fn labels(ground: &[String], mask: subset::Mask) -> Value {
    json!(subset::labels_of(ground, mask))
}

fn elem(p: &Poset, x: usize) -> Value {
    json!(element_ref(p, x))
}

fn load_veil(path: &Path, budget: &Budget) -> Result<(Veil, std::collections::BTreeMap<usize, String>), Failure> {
    let spec = VeilSpec::from_value(read_json(path)?)?;
    let (map, names) = spec.build(budget)?;
    let labelled = |e: Error| match e {
        Error::NoMinimumExplanation { phenome, ref minimal } => {
            let minimal: Vec<Value> = minimal.iter().map(|&s| elem(map.domain(), s)).collect();
            let detail = json!({"phenome": elem(map.codomain(), phenome), "minimal": minimal});
            Failure::Detailed(e, detail)
        }
        other => Failure::Core(other),
    };
    let veil = Veil::check_within(map.clone(), budget).map_err(labelled)?;
    Ok((veil, names))
}

fn initial_mask(ground: &[String], initial: &[String]) -> Result<subset::Mask, Failure> {
    let listed: Vec<&String> = initial.iter().filter(|s| !s.is_empty()).collect();
    Ok(subset::parse(ground, &listed)?)
}

fn check_poset(path: &Path, format: Format) -> Outcome {
    let pre = load::<PosetSpec>(path)?.build_preorder()?;
    if let Some((x, y)) = pre.antisymmetry_witness() {
        let detail = json!({"equivalent": [pre.label(x), pre.label(y)]});
        return Err(Failure::Detailed(Error::NotAntisymmetric(x, y), detail));
    }
    let p = pre.into_poset()?;
    if format == Format::Dot {
        return Ok(Output::Dot(dot::poset_dot(&p)));
    }
    let opt = |x: Option<usize>| x.map_or(Value::Null, |x| elem(&p, x));
    Ok(Output::Json(json!({
        "size": p.len(),
        "elements": p.elements().map(|x| elem(&p, x)).collect::<Vec<_>>(),
        "hasse": p.hasse_cover().into_iter().map(|(a, b)| json!([elem(&p, a), elem(&p, b)])).collect::<Vec<_>>(),
        "height": p.height(),
        "bottom": opt(p.bottom()),
        "top": opt(p.top()),
        "finitely_cocomplete": p.is_finitely_cocomplete(),
        "lattice": p.is_lattice(),
    })))
}

fn simulate(path: &Path, initial: &[String], trace: bool, format: Format) -> Outcome {
    let d = description(path)?;
    let start = initial_mask(d.ground(), initial)?;
    let t = d.cascade_trace(start);
    if format == Format::Dot {
        return Ok(Output::Dot(dot::trace_dot(d.ground(), &t)));
    }
    let g = d.ground();
    let mut out = json!({
        "initial": labels(g, start),
        "final": labels(g, t.last()),
        "steps": t.converged_at,
    });
    if trace {
        out["trace"] = json!(t.states.iter().map(|&s| labels(g, s)).collect::<Vec<_>>());
    }
    Ok(Output::Json(out))
}

fn simulate_timed(path: &Path, horizon: Option<usize>) -> Outcome {
    let td = load::<TimedSpec>(path)?.build()?;
    let horizon = horizon.unwrap_or_else(|| td.stabilization_bound());
    let t = td.eval(horizon)?;
    let g = td.ground();
    Ok(Output::Json(json!({
        "horizon": horizon,
        "trajectory": t.states.iter().map(|&s| labels(g, s)).collect::<Vec<_>>(),
        "colim": labels(g, colim(&t)),
    })))
}

fn check_veil(path: &Path, budget: &Budget) -> Outcome {
    let (v, names) = load_veil(path, budget)?;
    v.verify_adjunction()?;
    let left: Vec<Value> = v
        .phenome()
        .elements()
        .map(|p| json!([elem(v.phenome(), p), system_ref(&v, &names, v.left_adjoint(p))]))
        .collect();
    Ok(Output::Json(json!({
        "veil": true,
        "systems": v.system().len(),
        "phenomes": v.phenome().len(),
        "injective": v.is_injective(),
        "surjective": v.is_surjective(),
        "left_adjoint": left,
    })))
}

fn detect_effects(path: &Path, mode: SearchMode, budget: &Budget) -> Outcome {
    let (v, names) = load_veil(path, budget)?;
    let witnesses = v.detect_effects(mode, budget)?;
    let records: Vec<WitnessRecord> = witnesses.iter().map(|w| WitnessRecord::new(&v, &names, w)).collect();
    let mode = match mode {
        SearchMode::Exhaustive => json!("exhaustive"),
        SearchMode::Sampled { samples, seed } => json!({"samples": samples, "seed": seed}),
    };
    Ok(Output::Json(json!({"mode": mode, "count": records.len(), "witnesses": records})))
}

fn factorize(path: &Path, budget: &Budget) -> Outcome {
    let (v, _) = load_veil(path, budget)?;
    let f = v.factorize()?;
    Ok(Output::Json(json!({
        "image": PosetSpec::describe(&f.image),
        "pi": MapSpec::describe(f.pi.map()),
        "iota": MapSpec::describe(f.iota.map()),
    })))
}

fn factor_map(path: &Path) -> Outcome {
    let f = load::<MapSpec>(path)?.build()?;
    let fac = factor(&f)?;
    let p = f.domain();
    let classes: Vec<Vec<Value>> =
        fac.congruence.classes().iter().map(|c| c.iter().map(|&x| elem(p, x)).collect()).collect();
    let criterion = |r: lattice_effects::Result<bool>| match r {
        Ok(b) => Ok(json!(b)),
        Err(Error::NotInjective(..) | Error::NotSurjective(_)) => Ok(Value::Null),
        Err(e) => Err(e),
    };
    Ok(Output::Json(json!({
        "classes": classes,
        "quotient": PosetSpec::describe(&fac.quotient),
        "image": PosetSpec::describe(&fac.image.poset),
        "g": MapSpec::describe(&fac.g),
        "g_is_veil": fac.g_is_veil(),
        "is_veil_injective_criterion": criterion(injective_criterion(&f))?,
        "is_veil_surjective_criterion": criterion(surjective_criterion(&f))?,
    })))
}

/// Pairs for effect spot checks: all of them, or a seeded sample.
fn spot_pairs(n: usize, mode: SearchMode) -> Vec<(usize, usize)> {
    match mode {
        SearchMode::Exhaustive => (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect(),
        SearchMode::Sampled { samples, seed } => {
            let mut rng = random::rng(seed);
            (0..samples)
                .map(|_| {
                    let (x, y) = (random::index(&mut rng, n), random::index(&mut rng, n));
                    (x.min(y), x.max(y))
                })
                .collect()
        }
    }
}

fn lift(path: &Path, mode: SearchMode, budget: &Budget) -> Outcome {
    let f = load::<MapSpec>(path)?.build()?;
    let l = lift_map(&f, budget)?;
    let effects = if f.domain().is_finitely_cocomplete() && f.codomain().is_finitely_cocomplete() {
        let mut checks = Vec::new();
        for (a, b) in spot_pairs(f.domain().len(), mode) {
            let pair = lift_preserves_effects(&f, a, b)?;
            checks.push(json!({
                "p": elem(f.domain(), a),
                "p_prime": elem(f.domain(), b),
                "effect": pair.original,
                "lifted_effect": pair.lifted,
            }));
        }
        Value::Array(checks)
    } else {
        Value::Null
    };
    Ok(Output::Json(json!({
        "veil": true,
        "system_filters": l.system.filters.len(),
        "phenome_filters": l.phenome.filters.len(),
        "lifted": l.veil.map().images().iter().enumerate()
            .map(|(i, &j)| json!([l.system.filters[i].label(), l.phenome.filters[j].label()]))
            .collect::<Vec<_>>(),
        "effect_checks": effects,
    })))
}

fn check_commute(path: &Path) -> Result<(Output, bool), Failure> {
    let td = load::<TimedSpec>(path)?.build()?;
    let r = commuting_square_check(&td)?;
    let g = td.ground();
    let out = json!({"pass": r.pass, "colim_eval": labels(g, r.colim_eval), "eval_agg": labels(g, r.eval_agg)});
    Ok((Output::Json(out), r.pass))
}

fn export_dot(path: &Path, trace: bool, initial: &[String]) -> Outcome {
    if trace {
        return simulate(path, initial, true, Format::Dot);
    }
    check_poset(path, Format::Dot)
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                out.push_str(&format!("{k}: {}\n", compact(x)));
            }
        }
        other => out.push_str(&format!("{}\n", compact(other))),
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit(output: Output, format: Format) -> Result<(), Failure> {
    match (output, format) {
        (Output::Dot(d), _) => print!("{d}"),
        (Output::Json(v), Format::Json) => println!("{}", serde_json::to_string_pretty(&v)?),
        (Output::Json(v), Format::Text) => print!("{}", render_text(&v)),
        (Output::Json(_), Format::Dot) => {
            return Err(Failure::Usage("--format dot applies to check-poset, simulate and export-dot".into()))
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let budget = budget()?;
    let seed = cli.seed;
    let output = match &cli.command {
        Command::CheckPoset { poset } => check_poset(poset, cli.format)?,
        Command::Simulate { description, initial, trace } => simulate(description, initial, *trace, cli.format)?,
        Command::SimulateTimed { description, horizon } => simulate_timed(description, *horizon)?,
        Command::Phenome { description: path } => {
            let d = description(path)?;
            Output::Json(json!({"phenome": labels(d.ground(), d.phenome())}))
        }
        Command::Merge { first, second } => {
            let merged = description(first)?.merge(&description(second)?)?;
            Output::Json(json!(DescriptionSpec::describe(&merged)))
        }
        Command::CheckVeil { veil } => check_veil(veil, &budget)?,
        Command::DetectEffects { veil, search } => detect_effects(veil, search.mode(seed), &budget)?,
        Command::Factorize { veil } => factorize(veil, &budget)?,
        Command::Factor { map } => factor_map(map)?,
        Command::Lift { map, search } => lift(map, search.mode(seed), &budget)?,
        Command::CheckCommute { description } => {
            let (out, pass) = check_commute(description)?;
            emit(out, cli.format)?;
            // the square commutes for every timed description
            return Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::ExportDot { input, trace, initial } => export_dot(input, *trace, initial)?,
    };
    emit(output, cli.format)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let mut body = Map::new();
            body.insert("kind".into(), json!(f.kind()));
            body.insert("message".into(), json!(f.message()));
            if let Failure::Detailed(_, detail) = &f {
                body.insert("detail".into(), detail.clone());
            }
            eprintln!("{}", json!({ "error": body }));
            ExitCode::from(f.exit_code())
        }
    }
}
