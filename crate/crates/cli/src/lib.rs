//! Command-line front end: argument model, dispatch and output files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crosslap::io::{self, VertexLabels};
use crosslap::{
    betti_vector, diffusion_hub_analysis, Bicomplex, CrossSpectrum, DiffusionReport, Error, Grade,
    IntensityRule, Multiplex, NodeId, Side, SpectralOptions, Tolerances,
};

/// Environment variable that overrides the kernel threshold.
pub const TOL_ZERO_ENV: &str = "CROSSLAP_TOL_ZERO";

#[derive(Parser, Debug)]
#[command(name = "crosslap", version, about = "Cross-homology and cross-Laplacian analysis of two-layer networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Output formats to write (comma separated).
    #[arg(long, global = true, value_delimiter = ',', default_values_t = vec![Format::Csv, Format::Json, Format::Svg])]
    pub format: Vec<Format>,
    /// Kernel and non-zero coordinate threshold.
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,
    /// Relative eigenvalue grouping tolerance.
    #[arg(long, global = true)]
    pub tol_group: Option<f64>,
    /// How coordinates of repeated eigenvalues combine into edge intensities.
    #[arg(long, global = true, default_value = "max-abs")]
    pub rule: IntensityRule,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        })
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cross-Betti vectors of a bicomplex.
    Betti {
        input: PathBuf,
        /// Grades to report, e.g. `--grade 0,0 --grade -1,1`. Defaults to the
        /// standard five.
        #[arg(long = "grade", allow_hyphen_values = true)]
        grades: Vec<Grade>,
    },
    /// Dump a cross-Laplacian as CSV triplets.
    Laplacian {
        input: PathBuf,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        grade: Grade,
        #[arg(long, default_value = "T")]
        part: Side,
    },
    /// Eigenvalues and stages as JSON.
    Spectrum {
        input: PathBuf,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        grade: Grade,
        #[arg(long, default_value = "T")]
        part: Side,
    },
    /// Spectral cross-hubs of one or all stages.
    Hubs {
        input: PathBuf,
        #[arg(long, default_value = "T")]
        part: Side,
        /// `harmonic`, `max`, `all` or a stage index.
        #[arg(long, default_value = "harmonic")]
        stage: StageSel,
    },
    /// Spectral persistence bars.
    Persist {
        input: PathBuf,
        #[arg(long, default_value = "T")]
        part: Side,
    },
    /// Diffusion-bicomplex hub pipeline over a multiplex edge list.
    Diffuse {
        input: PathBuf,
        /// `all` or one ordered pair `s,t`.
        #[arg(long, default_value = "all")]
        pairs: PairSel,
        /// Keep only the first N ranked hubs.
        #[arg(long)]
        top: Option<usize>,
        /// Label file with `node_id label` lines.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Record edge weights on the cross-edges.
        #[arg(long)]
        use_weights: bool,
        /// Worker threads for independent layer pairs.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageSel {
    Harmonic,
    Max,
    All,
    Index(usize),
}

impl std::str::FromStr for StageSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "harmonic" | "zero" => Ok(StageSel::Harmonic),
            "max" | "principal" => Ok(StageSel::Max),
            "all" => Ok(StageSel::All),
            _ => s
                .parse()
                .map(StageSel::Index)
                .map_err(|_| format!("expected harmonic, max, all or a stage index, got '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSel {
    All,
    One(u32, u32),
}

impl std::str::FromStr for PairSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(PairSel::All);
        }
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'all' or 's,t', got '{s}'"))?;
        let p = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid layer id '{t}'"));
        Ok(PairSel::One(p(a)?, p(b)?))
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub options: SpectralOptions,
}

/// Failure classes with distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Analysis(_) => 1,
            CliError::Input(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io(_) => CliError::Io(msg),
            Error::DegenerateSimplex { .. }
            | Error::EmptySimplex
            | Error::InvalidWeight { .. }
            | Error::UnknownVertex { .. }
            | Error::UnknownSimplex(_)
            | Error::SameLayer(_)
            | Error::UnknownLayer(_)
            | Error::SelfLoop { .. }
            | Error::Parse { .. }
            | Error::Validation(_)
            | Error::Json(_) => CliError::Input(msg),
            _ => CliError::Analysis(msg),
        }
    }
}

impl RunConfig {
    /// Resolves tolerances (flag, then environment, then default) and
    /// checks them.
    pub fn new(common: &Common, env_tol_zero: Option<String>) -> Result<Self, CliError> {
        let mut tol = Tolerances::default();
        if let Some(v) = env_tol_zero {
            tol.zero = v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{TOL_ZERO_ENV}='{v}' is not a number")))?;
        }
        if let Some(z) = common.tol_zero {
            tol.zero = z;
        }
        if let Some(g) = common.tol_group {
            tol.group = g;
        }
        for (name, v) in [("tol-zero", tol.zero), ("tol-group", tol.group)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Input(format!("{name} must be a positive number, got {v}")));
            }
        }
        let mut formats = common.format.clone();
        formats.dedup();
        Ok(RunConfig {
            out: common.out.clone(),
            formats,
            options: SpectralOptions { tol, rule: common.rule, ..SpectralOptions::default() },
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Files produced by a run, written only once every payload exists.
#[derive(Default)]
struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    fn add(&mut self, cfg: &RunConfig, format: Format, name: String, body: impl Into<Vec<u8>>) {
        if cfg.wants(format) {
            self.files.push((cfg.out.join(name), body.into()));
        }
    }
}

fn part_tag(part: Side) -> char {
    part.letter()
}

fn grade_tag(g: Grade) -> String {
    format!("{}_{}", g.k, g.l).replace('-', "m")
}

fn load_bicomplex(path: &Path) -> Result<(Bicomplex, VertexLabels), CliError> {
    io::parse_bicomplex(path).map_err(|e| match e {
        Error::Io(err) => CliError::Input(format!("cannot read {}: {err}", path.display())),
        other => CliError::from(other),
    })
}

/// Labels of the nodes that hubs of `part` refer to.
fn hub_labels(labels: &VertexLabels, part: Side) -> impl Fn(NodeId) -> Option<String> + '_ {
    move |v| labels.get(part.other(), v).map(str::to_string)
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Analysis(e.to_string()))
}

/// Runs one command. Returns the written paths.
pub fn run(cli: &Cli, env_tol_zero: Option<String>) -> Result<Vec<PathBuf>, CliError> {
    let cfg = RunConfig::new(&cli.common, env_tol_zero)?;
    let outputs = match &cli.command {
        Command::Betti { input, grades } => betti(&cfg, input, grades)?,
        Command::Laplacian { input, grade, part } => laplacian(&cfg, input, *grade, *part)?,
        Command::Spectrum { input, grade, part } => spectrum(&cfg, input, *grade, *part)?,
        Command::Hubs { input, part, stage } => hubs(&cfg, input, *part, *stage)?,
        Command::Persist { input, part } => persist(&cfg, input, *part)?,
        Command::Diffuse { input, pairs, top, labels, use_weights, jobs } => {
            diffuse(&cfg, input, *pairs, *top, labels.as_deref(), *use_weights, *jobs)?
        }
    };
    if outputs.files.is_empty() {
        return Err(CliError::Input("no output selected by --format for this command".into()));
    }
    if !cfg.out.is_dir() {
        std::fs::create_dir_all(&cfg.out)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", cfg.out.display())))?;
    }
    io::write_all_atomic(&outputs.files).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(outputs.files.into_iter().map(|(p, _)| p).collect())
}

fn betti(cfg: &RunConfig, input: &Path, grades: &[Grade]) -> Result<Outputs, CliError> {
    let (x, _) = load_bicomplex(input)?;
    let grades = if grades.is_empty() { Grade::betti_table_default() } else { grades.to_vec() };
    let mut rows = Vec::with_capacity(grades.len());
    for g in grades {
        if !g.is_valid() {
            return Err(CliError::Input(format!("grade {g} is out of range")));
        }
        let b = betti_vector(&x, g, &cfg.options.tol)?;
        if !b.cross_checked() {
            eprintln!(
                "warning: at {g} rank-nullity gives {b} but Laplacian nullity gives ({},{})",
                b.laplacian_nullity.0, b.laplacian_nullity.1
            );
        }
        rows.push((g, b));
    }
    let mut out = Outputs::default();
    out.add(cfg, Format::Csv, "betti.csv".into(), io::betti_csv(&rows)?);
    let json: Vec<_> = rows
        .iter()
        .map(|(g, b)| serde_json::json!({"grade": g, "beta": [b.top, b.bottom], "cross_checked": b.cross_checked()}))
        .collect();
    out.add(cfg, Format::Json, "betti.json".into(), to_json(&json)?);
    Ok(out)
}

fn laplacian(cfg: &RunConfig, input: &Path, grade: Grade, part: Side) -> Result<Outputs, CliError> {
    let (x, _) = load_bicomplex(input)?;
    let lap = crosslap::laplacian(&x, grade, part)?;
    let mut out = Outputs::default();
    out.add(
        cfg,
        Format::Csv,
        format!("laplacian_{}_{}.csv", part_tag(part), grade_tag(grade)),
        io::laplacian_csv(&lap)?,
    );
    Ok(out)
}

fn spectrum(cfg: &RunConfig, input: &Path, grade: Grade, part: Side) -> Result<Outputs, CliError> {
    let (x, _) = load_bicomplex(input)?;
    let s = CrossSpectrum::compute(&x, grade, part, &cfg.options)?;
    let mut out = Outputs::default();
    out.add(
        cfg,
        Format::Json,
        format!("spectrum_{}_{}.json", part_tag(part), grade_tag(grade)),
        to_json(&s.report()?)?,
    );
    Ok(out)
}

fn hubs(cfg: &RunConfig, input: &Path, part: Side, stage: StageSel) -> Result<Outputs, CliError> {
    let (x, labels) = load_bicomplex(input)?;
    let s = CrossSpectrum::compute(&x, Grade::CROSS_EDGES, part, &cfg.options)?;
    let label = hub_labels(&labels, part);
    let mut out = Outputs::default();
    let tag = part_tag(part);
    let (name, csv) = match stage {
        StageSel::Harmonic => ("harmonic".to_string(), io::hub_map_csv(&s.harmonic_hubs()?, &label)?),
        StageSel::Max => ("max".to_string(), io::hub_map_csv(&s.principal_hubs()?, &label)?),
        StageSel::Index(i) => (format!("stage{i}"), io::hub_map_csv(&s.stage_hubs(i)?, &label)?),
        StageSel::All => ("all".to_string(), all_stages_csv(&s, &label)?),
    };
    out.add(cfg, Format::Csv, format!("hubs_{tag}_{name}.csv"), csv);
    out.add(cfg, Format::Json, format!("hubs_{tag}.json"), to_json(&s.report()?)?);
    Ok(out)
}

fn all_stages_csv(s: &CrossSpectrum, label: &dyn Fn(NodeId) -> Option<String>) -> Result<String, CliError> {
    let mut text = String::from("stage,lambda,node,label,hubness\n");
    for st in &s.stages {
        let mut rows: Vec<(NodeId, f64)> = st.hubs.iter().map(|(&n, &h)| (n, h)).collect();
        rows.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (n, h) in rows {
            let l = label(n).unwrap_or_default();
            let l = if l.contains([',', '"', '\n']) { format!("\"{}\"", l.replace('"', "\"\"")) } else { l };
            text.push_str(&format!(
                "{},{},{n},{l},{}\n",
                st.index,
                io::format_sig6(st.lambda),
                io::format_sig6(h)
            ));
        }
    }
    Ok(text)
}

fn persist(cfg: &RunConfig, input: &Path, part: Side) -> Result<Outputs, CliError> {
    let (x, labels) = load_bicomplex(input)?;
    let s = CrossSpectrum::compute(&x, Grade::CROSS_EDGES, part, &cfg.options)?;
    let bars = s.persistence()?;
    let label = hub_labels(&labels, part);
    let tag = part_tag(part);
    let mut out = Outputs::default();
    out.add(cfg, Format::Json, format!("persistence_{tag}.json"), to_json(&s.report()?)?);
    out.add(cfg, Format::Csv, format!("ranking_{tag}.csv"), io::ranking_csv(&bars.ranked(None, &label))?);
    if cfg.wants(Format::Svg) {
        out.add(cfg, Format::Svg, format!("persistence_{tag}.svg"), io::render_barcode_svg(&bars, &label)?);
    }
    Ok(out)
}

fn diffuse(
    cfg: &RunConfig,
    input: &Path,
    pairs: PairSel,
    top: Option<usize>,
    labels: Option<&Path>,
    use_weights: bool,
    jobs: usize,
) -> Result<Outputs, CliError> {
    let mut m: Multiplex = io::parse_multiplex(input).map_err(|e| match e {
        Error::Io(err) => CliError::Input(format!("cannot read {}: {err}", input.display())),
        other => CliError::from(other),
    })?;
    if let Some(p) = labels {
        let l: BTreeMap<NodeId, String> = io::parse_labels(p).map_err(|e| match e {
            Error::Io(err) => CliError::Input(format!("cannot read {}: {err}", p.display())),
            other => CliError::from(other),
        })?;
        for (v, name) in l {
            m.set_label(v, name);
        }
    }
    let pairs = match pairs {
        PairSel::All => m.ordered_pairs(),
        PairSel::One(s, t) => vec![(s, t)],
    };
    if pairs.is_empty() {
        return Err(CliError::Input("the multiplex needs at least two layers".into()));
    }
    let analyse = |&(s, t): &(u32, u32)| diffusion_hub_analysis(&m, s, t, top, use_weights, &cfg.options);
    let reports: Vec<DiffusionReport> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Analysis(e.to_string()))?;
        pool.install(|| pairs.par_iter().map(analyse).collect::<Result<_, _>>())?
    } else {
        pairs.iter().map(analyse).collect::<Result<_, _>>()?
    };
    let mut out = Outputs::default();
    let label = |v: NodeId| m.label(v).map(str::to_string);
    for r in &reports {
        let stem = format!("diffusion_{}_{}", r.source, r.target);
        out.add(cfg, Format::Json, format!("{stem}.json"), to_json(r)?);
        out.add(cfg, Format::Csv, format!("{stem}_ranking.csv"), io::ranking_csv(&r.hubs)?);
        if cfg.wants(Format::Svg) && !r.persistence.is_empty() {
            out.add(cfg, Format::Svg, format!("{stem}.svg"), io::render_barcode_svg(&r.persistence, label)?);
        }
    }
    Ok(out)
}
