//! Command-line front end: JSON in, JSON, text or SVG out.
//!
//! Exit codes: 0 success, 1 unreadable or invalid input, 2 a domain error
//! (for example a configuration outside the reconstruction locus), 3 an
//! internal search limit. Failures print `{"error": code, "message": …}` on
//! stderr.

pub mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lineconf::marked_conic::{psi, LineConfig, MarkedConic, MarkedConicError};
use lineconf::moduli_maps::{alpha, beta, f_map, mobius_equivalent, ModuliError};
use lineconf::reconstruction::{oracle_reconstruct, reconstruct, ReconstructionError};
use lineconf::schema::{
    config_from_json, config_to_json, format_p1, to_pretty, BinaryFormJson, LineEntryJson, MarkedConicJson, SchemaError,
    TreeJson, VerdictJson,
};
use lineconf::stability::{binary_form_verdict, config_verdict, BinaryForm, StabilityError, StabilityVerdict};
use lineconf::stable_trees::{central_edge, central_vertex, check_stable_tree, principal_parts, Part, PointedTree, TreeError};

pub use svg::{render_svg, RenderError, Viewport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Sub {
    /// Configuration of lines of a marked conic.
    Psi,
    /// Stability verdict of a configuration, marked conic or binary form.
    Stability,
    /// Marked conic with the given configuration.
    Reconstruct,
    /// Every marked conic with the given configuration, by exhaustive search.
    Oracle,
    /// Stability, central vertex and central edge of a tree.
    TreeCentral,
    /// Principal parts of a tree.
    TreeParts,
    /// Binary form of the central component of a tree.
    Fmap,
    /// Configuration of a principal part of a tree.
    Beta,
    /// Binary form read off a configuration.
    Alpha,
    /// Compare alpha(beta(t)) with fmap(t).
    Factorize,
    /// Draw a configuration as SVG.
    Render,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "lineconf", version, about = "Marked conics, configurations of lines and pointed rational curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    /// Genus; the number of markings is 2g+2. Inferred from the input when omitted.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(3..))]
    pub g: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Read from this file instead of stdin.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Rendering window `xmin,ymin,xmax,ymax`; defaults to the crossings' bounding box.
    #[arg(long, global = true)]
    pub viewport: Option<String>,
}

/// A failure with its exit status and machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit: i32,
    pub reason: String,
    pub message: String,
}

impl CliError {
    fn input(reason: &str, message: impl ToString) -> Self {
        Self { exit: 1, reason: reason.into(), message: message.to_string() }
    }

    fn domain(reason: &str, message: impl ToString) -> Self {
        Self { exit: 2, reason: reason.into(), message: message.to_string() }
    }

    fn limit(reason: &str, message: impl ToString) -> Self {
        Self { exit: 3, reason: reason.into(), message: message.to_string() }
    }

    pub fn to_json(&self) -> String {
        json!({"error": self.reason, "message": self.message}).to_string()
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        match e {
            SchemaError::Json(_) => CliError::input("parse_error", e),
            SchemaError::Invalid(_) => CliError::input("invalid_input", e),
        }
    }
}

impl From<MarkedConicError> for CliError {
    fn from(e: MarkedConicError) -> Self {
        match e {
            MarkedConicError::GenericityExhausted(_) => CliError::limit("genericity_exhausted", e),
            _ => CliError::input("invalid_input", e),
        }
    }
}

impl From<ReconstructionError> for CliError {
    fn from(e: ReconstructionError) -> Self {
        CliError::domain(e.reason_code(), e)
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        match e {
            StabilityError::EmptyConfig => CliError::domain("empty_config", e),
            StabilityError::DegreeTooSmall(_) => CliError::domain("degree_too_small", e),
            StabilityError::ZeroMultiplicity => CliError::input("invalid_input", e),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Realize(inner) => inner.into(),
            TreeError::MissingCoords => CliError::domain("missing_coords", e),
            TreeError::HasCentralVertex => CliError::domain("has_central_vertex", e),
            TreeError::NoCentralEdge => CliError::domain("no_central_edge", e),
            TreeError::TooFewLegs => CliError::domain("too_few_legs", e),
            _ => CliError::input("invalid_tree", e),
        }
    }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        match e {
            ModuliError::Tree(inner) => inner.into(),
            ModuliError::Reconstruction(inner) => inner.into(),
            ModuliError::Form(inner) => inner.into(),
            ModuliError::DegreeMismatch(..) => CliError::domain("degree_mismatch", e),
            ModuliError::MissingCoords => CliError::domain("missing_coords", e),
            ModuliError::NoPrincipalPart => CliError::domain("no_principal_part", e),
            ModuliError::NoCentralVertex => CliError::domain("no_central_vertex", e),
        }
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::EmptyConfig => CliError::domain("empty_config", e),
            _ => CliError::input("invalid_input", e),
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

fn parse_value(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input("parse_error", e))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::input("invalid_input", e))
}

/// A configuration, or the configuration of a marked conic.
fn read_config(v: Value) -> Result<LineConfig, CliError> {
    if v.is_object() {
        let k = from_value::<MarkedConicJson>(v)?.to_marked_conic()?;
        return Ok(psi(&k));
    }
    Ok(config_from_json(&from_value::<Vec<LineEntryJson>>(v)?)?)
}

fn read_tree(v: Value) -> Result<PointedTree, CliError> {
    Ok(from_value::<TreeJson>(v)?.to_tree()?)
}

fn m_of(g: u32) -> u64 {
    2 * u64::from(g) + 2
}

fn genus_from_weight(m: u64) -> Result<u32, CliError> {
    if m % 2 == 1 || m < 8 {
        return Err(CliError::input("invalid_input", format!("{m} markings is not 2g+2 with g >= 3; pass --g")));
    }
    Ok(((m - 2) / 2) as u32)
}

fn genus_for_config(g: Option<u32>, r: &LineConfig) -> Result<u32, CliError> {
    if let Some(g) = g {
        return Ok(g);
    }
    let t = r.total();
    let m = (1..=t + 1).find(|&m| m * (m - 1) / 2 >= t).unwrap_or(0);
    if m * m.saturating_sub(1) / 2 != t {
        return Err(CliError::domain("inconsistent_total", format!("total multiplicity {t} is not binomial; pass --g")));
    }
    genus_from_weight(m)
}

fn genus_for_tree(g: Option<u32>, t: &PointedTree) -> Result<u32, CliError> {
    g.map_or_else(|| genus_from_weight(t.leg_count()), Ok)
}

fn part_json(p: Part) -> Value {
    match p {
        Part::Vertex(v) => json!({"vertex": v}),
        Part::Pair(a, b) => json!({"pair": [a, b]}),
    }
}

fn verdict_value(v: &StabilityVerdict) -> Value {
    serde_json::to_value(VerdictJson::from(v)).expect("serializable")
}

fn form_value(b: &BinaryForm) -> Value {
    serde_json::to_value(BinaryFormJson::from(b)).expect("serializable")
}

fn config_value(r: &LineConfig) -> Value {
    serde_json::to_value(config_to_json(r)).expect("serializable")
}

fn conic_value(k: &MarkedConic) -> Value {
    serde_json::to_value(MarkedConicJson::from(k)).expect("serializable")
}

/// What a command produced, before formatting.
enum Product {
    Config(LineConfig),
    Verdict(Box<StabilityVerdict>),
    Form(BinaryForm),
    Other(Value),
}

fn config_text(r: &LineConfig) -> String {
    r.entries().map(|(l, k)| format!("{l:?} x{k}\n")).collect()
}

fn form_text(b: &BinaryForm) -> String {
    let roots: Vec<String> =
        b.roots().map(|(p, w)| if w == 1 { format_p1(p) } else { format!("{}^{w}", format_p1(p)) }).collect();
    format!("degree {}: {}\n", b.degree(), roots.join(" "))
}

fn format_product(cli: &Cli, p: Product) -> Result<String, CliError> {
    let default = if cli.command == Sub::Render { Format::Svg } else { Format::Json };
    let format = cli.format.unwrap_or(default);
    match (format, p) {
        (Format::Svg, Product::Config(r)) => {
            let viewport = match &cli.viewport {
                Some(s) => Viewport::parse(s)?,
                None => Viewport::fit(&r),
            };
            Ok(render_svg(&r, &viewport)?)
        }
        (Format::Svg, _) => Err(CliError::input("invalid_input", "only configurations render as SVG")),
        (Format::Text, Product::Config(r)) => Ok(config_text(&r)),
        (Format::Text, Product::Verdict(v)) => {
            let j = VerdictJson::from(&*v);
            Ok(format!("{} mu={} threshold={}\n", v.status.as_str(), j.mu, j.threshold))
        }
        (Format::Text, Product::Form(b)) => Ok(form_text(&b)),
        (_, Product::Config(r)) => Ok(to_pretty(&config_value(&r))),
        (_, Product::Verdict(v)) => Ok(to_pretty(&verdict_value(&v))),
        (_, Product::Form(b)) => Ok(to_pretty(&form_value(&b))),
        (_, Product::Other(v)) => Ok(to_pretty(&v)),
    }
}

/// Execute a parsed command on the given input text.
pub fn run_command(cli: &Cli, input: &str) -> Result<String, CliError> {
    let v = parse_value(input)?;
    let product = match cli.command {
        Sub::Psi => {
            let k = from_value::<MarkedConicJson>(v)?.to_marked_conic()?;
            if let Some(g) = cli.g {
                if k.total_weight() != m_of(g) {
                    return Err(CliError::input(
                        "invalid_input",
                        format!("total weight {} but 2g+2 = {}", k.total_weight(), m_of(g)),
                    ));
                }
            }
            Product::Config(psi(&k))
        }
        Sub::Stability => {
            if v.get("degree").is_some() {
                let b = from_value::<BinaryFormJson>(v)?.to_binary_form()?;
                Product::Verdict(Box::new(binary_form_verdict(&b)?))
            } else {
                Product::Verdict(Box::new(config_verdict(&read_config(v)?)?))
            }
        }
        Sub::Reconstruct => {
            let r = read_config(v)?;
            let g = genus_for_config(cli.g, &r)?;
            Product::Other(conic_value(&reconstruct(&r, m_of(g))?))
        }
        Sub::Oracle => {
            let r = read_config(v)?;
            let g = genus_for_config(cli.g, &r)?;
            let found = oracle_reconstruct(&r, m_of(g))?;
            Product::Other(Value::Array(found.iter().map(conic_value).collect()))
        }
        Sub::TreeCentral => {
            let t = read_tree(v)?;
            let stable = check_stable_tree(&t)?;
            let vertex = central_vertex(&t);
            let edge = central_edge(&t).ok().map(|(a, b)| json!([a, b]));
            Product::Other(json!({"stable": stable, "central_vertex": vertex, "central_edge": edge}))
        }
        Sub::TreeParts => {
            let t = read_tree(v)?;
            let g = genus_for_tree(cli.g, &t)?;
            let parts = principal_parts(&t, g, cli.seed)?;
            let list = parts
                .iter()
                .map(|p| {
                    let twister: BTreeMap<String, u32> = p.twister.multidegree.iter().map(|(v, d)| (v.to_string(), *d)).collect();
                    json!({"part": part_json(p.part), "twister": twister, "verdict": verdict_value(&p.verdict)})
                })
                .collect();
            Product::Other(Value::Array(list))
        }
        Sub::Fmap => {
            let t = read_tree(v)?;
            Product::Form(f_map(&t, genus_for_tree(cli.g, &t)?)?)
        }
        Sub::Beta => {
            let t = read_tree(v)?;
            Product::Config(beta(&t, genus_for_tree(cli.g, &t)?)?)
        }
        Sub::Alpha => {
            let r = read_config(v)?;
            let g = genus_for_config(cli.g, &r)?;
            Product::Form(alpha(&r, g)?)
        }
        Sub::Factorize => {
            let t = read_tree(v)?;
            let g = genus_for_tree(cli.g, &t)?;
            if central_vertex(&t).is_none() {
                return Err(ModuliError::NoCentralVertex.into());
            }
            let lhs = alpha(&beta(&t, g)?, g)?;
            let rhs = f_map(&t, g)?;
            let same = mobius_equivalent(&lhs, &rhs)?;
            Product::Other(json!({"factorizes": same, "alpha_beta": form_value(&lhs), "f_map": form_value(&rhs)}))
        }
        Sub::Render => Product::Config(read_config(v)?),
    };
    format_product(cli, product)
}

fn failure(e: &CliError) -> Outcome {
    Outcome { code: e.exit, stdout: Vec::new(), stderr: format!("{}\n", e.to_json()) }
}

/// Parse arguments, read the input, run, and write the output file if requested.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, stdin: &mut dyn Read) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string().into_bytes(), stderr: String::new() };
            }
            return failure(&CliError::input("usage", e.to_string().trim_end()));
        }
    };
    let mut text = String::new();
    let read = match &cli.input {
        Some(path) => std::fs::read_to_string(path).map(|s| text = s),
        None => stdin.read_to_string(&mut text).map(|_| ()),
    };
    if let Err(e) = read {
        return failure(&CliError::input("io_error", e));
    }
    match run_command(&cli, &text) {
        Ok(out) => match &cli.output {
            Some(path) => match std::fs::write(path, out) {
                Ok(()) => Outcome { code: 0, stdout: Vec::new(), stderr: String::new() },
                Err(e) => failure(&CliError::input("io_error", e)),
            },
            None => Outcome { code: 0, stdout: out.into_bytes(), stderr: String::new() },
        },
        Err(e) => failure(&e),
    }
}
