//! Command implementations behind the `nument` binary.
//!
//! Every command turns a [`SweepConfig`] into a [`Table`]. Configuration is
//! layered: command defaults, then a flat `key = value` file, then flags.
//! Entropies are in nats unless `bits` is set.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{Map, Number, Value as Json};

use crate::analytic;
use crate::entropy::{delta_renyi2, number_entanglement};
use crate::error::{Error, Result};
use crate::freefermion::{self, Placement, SingleParticleKernel};
use crate::hilbert::{Bipartition, DensityOperator, OccupationBasis, Statistics};
use crate::linalg::{self, c};
use crate::locc;
use crate::models::{self, NamedState};
use crate::negativity;
use crate::sampling;

/// Largest chain handled by the dense exact backend.
pub const EXACT_SITE_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    XxzSweep,
    BosonSectors,
    FfSweep,
    FfSizeScan,
    HighTFit,
    CftCompare,
    LoccDemo,
    StateDemo,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::XxzSweep,
        Command::BosonSectors,
        Command::FfSweep,
        Command::FfSizeScan,
        Command::HighTFit,
        Command::CftCompare,
        Command::LoccDemo,
        Command::StateDemo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::XxzSweep => "xxz-sweep",
            Command::BosonSectors => "boson-sectors",
            Command::FfSweep => "ff-sweep",
            Command::FfSizeScan => "ff-size-scan",
            Command::HighTFit => "high-t-fit",
            Command::CftCompare => "cft-compare",
            Command::LoccDemo => "locc-demo",
            Command::StateDemo => "state-demo",
        }
    }
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    other => Err(Error::InvalidParameter(format!(
                        concat!("unknown ", stringify!($name), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

keyword_enum!(Backend { Exact => "exact", Gaussian => "gaussian", Analytic => "analytic" });
keyword_enum!(Format { Csv => "csv", Json => "json" });
keyword_enum!(Spacing { Log => "log", Linear => "linear" });

/// Optional settings from flags or a config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub l: Option<usize>,
    pub la: Option<Vec<usize>>,
    pub j: Option<f64>,
    pub eta: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub v: Option<f64>,
    pub mu: Option<f64>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub backend: Option<Backend>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub bits: Option<bool>,
    pub trials: Option<usize>,
    pub gnuplot: Option<PathBuf>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse `{value}` for `{key}`")))
}

/// Comma-separated list of values.
pub fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(key, s))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::InvalidParameter(format!("`{key}` needs at least one value")));
    }
    Ok(items)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidParameter(format!("cannot parse `{value}` for `{key}`"))),
    }
}

impl Overrides {
    /// Parses `key = value` lines. Keys are the flag names without leading
    /// dashes; `#` starts a comment.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key = value", n + 1))
            })?;
            let key = key.trim();
            match key {
                "L" => o.l = Some(parse_value(key, value)?),
                "LA" => o.la = Some(parse_list(key, value)?),
                "J" => o.j = Some(parse_value(key, value)?),
                "eta" => o.eta = Some(parse_list(key, value)?),
                "t" => o.t = Some(parse_value(key, value)?),
                "V" => o.v = Some(parse_value(key, value)?),
                "mu" => o.mu = Some(parse_value(key, value)?),
                "beta-min" => o.beta_min = Some(parse_value(key, value)?),
                "beta-max" => o.beta_max = Some(parse_value(key, value)?),
                "points" => o.points = Some(parse_value(key, value)?),
                "spacing" => o.spacing = Some(value.parse()?),
                "backend" => o.backend = Some(value.parse()?),
                "format" => o.format = Some(value.parse()?),
                "out" => o.out = Some(PathBuf::from(value.trim())),
                "seed" => o.seed = Some(parse_value(key, value)?),
                "threads" => o.threads = Some(parse_value(key, value)?),
                "bits" => o.bits = Some(parse_bool(key, value)?),
                "trials" => o.trials = Some(parse_value(key, value)?),
                "gnuplot" => o.gnuplot = Some(PathBuf::from(value.trim())),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "config line {}: unknown key `{other}`",
                        n + 1
                    )))
                }
            }
        }
        Ok(o)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        Self::from_config_text(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            l: self.l.or(lower.l),
            la: self.la.or(lower.la),
            j: self.j.or(lower.j),
            eta: self.eta.or(lower.eta),
            t: self.t.or(lower.t),
            v: self.v.or(lower.v),
            mu: self.mu.or(lower.mu),
            beta_min: self.beta_min.or(lower.beta_min),
            beta_max: self.beta_max.or(lower.beta_max),
            points: self.points.or(lower.points),
            spacing: self.spacing.or(lower.spacing),
            backend: self.backend.or(lower.backend),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
            seed: self.seed.or(lower.seed),
            threads: self.threads.or(lower.threads),
            bits: self.bits.or(lower.bits),
            trials: self.trials.or(lower.trials),
            gnuplot: self.gnuplot.or(lower.gnuplot),
        }
    }
}

/// Fully resolved settings of one command run.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub command: Command,
    /// Chain length; `0` in `ff-size-scan` means `L = 10·L_A`.
    pub l: usize,
    pub la: Vec<usize>,
    pub j: f64,
    pub eta: Vec<f64>,
    pub t: f64,
    pub v: f64,
    pub mu: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub backend: Backend,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub bits: bool,
    pub trials: usize,
    pub gnuplot: Option<PathBuf>,
    pub tag: Option<String>,
}

impl SweepConfig {
    pub fn defaults(command: Command) -> Self {
        let mut cfg = SweepConfig {
            command,
            l: 2,
            la: vec![1],
            j: 1.0,
            eta: vec![0.0, 2.0, 4.0],
            t: 1.0,
            v: 0.0,
            mu: 0.0,
            beta_min: 0.1,
            beta_max: 20.0,
            points: 50,
            spacing: Spacing::Log,
            backend: Backend::Exact,
            format: Format::Csv,
            out: None,
            seed: 0,
            threads: None,
            bits: false,
            trials: 100,
            gnuplot: None,
            tag: None,
        };
        match command {
            Command::XxzSweep | Command::LoccDemo | Command::StateDemo => {}
            Command::BosonSectors => {
                cfg.beta_min = 0.0;
                cfg.beta_max = 5.0;
                cfg.points = 51;
                cfg.spacing = Spacing::Linear;
            }
            Command::FfSweep => {
                cfg.l = 1000;
                cfg.la = vec![100];
                cfg.beta_min = 0.1;
                cfg.beta_max = 100.0;
                cfg.points = 30;
                cfg.backend = Backend::Gaussian;
            }
            Command::FfSizeScan => {
                cfg.l = 0;
                cfg.la = vec![10, 20, 50, 100, 200, 400];
                cfg.backend = Backend::Gaussian;
            }
            Command::HighTFit => {
                cfg.l = 200;
                cfg.la = vec![50];
                cfg.beta_min = 0.01;
                cfg.beta_max = 0.1;
                cfg.points = 10;
                cfg.backend = Backend::Gaussian;
            }
            Command::CftCompare => {
                cfg.l = 1000;
                cfg.la = vec![100];
                cfg.beta_min = 0.5;
                cfg.beta_max = 100.0;
                cfg.points = 25;
                cfg.backend = Backend::Gaussian;
            }
        }
        cfg
    }

    /// Command defaults overlaid with `o`, then validated.
    pub fn resolve(command: Command, o: Overrides) -> Result<Self> {
        let mut cfg = Self::defaults(command);
        if command == Command::HighTFit && o.backend == Some(Backend::Exact) {
            cfg.l = 8;
            cfg.la = vec![4];
        }
        macro_rules! take {
            ($($field:ident),+) => { $(if let Some(v) = o.$field { cfg.$field = v; })+ };
        }
        take!(l, la, j, eta, t, v, mu, beta_min, beta_max, points, spacing, backend, format, seed, bits, trials);
        cfg.out = o.out;
        cfg.gnuplot = o.gnuplot;
        cfg.threads = o.threads;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.points < 2 {
            return bad(format!("--points must be at least 2, got {}", self.points));
        }
        for (name, x) in [("J", self.j), ("t", self.t), ("V", self.v), ("mu", self.mu)] {
            if !x.is_finite() {
                return bad(format!("--{name} must be finite"));
            }
        }
        if self.eta.iter().any(|e| !e.is_finite()) {
            return bad("--eta values must be finite".into());
        }
        if !self.beta_min.is_finite() || !self.beta_max.is_finite() || self.beta_min < 0.0 {
            return bad("β bounds must be finite and non-negative".into());
        }
        if self.beta_max <= self.beta_min {
            return bad(format!(
                "--beta-max ({}) must exceed --beta-min ({})",
                self.beta_max, self.beta_min
            ));
        }
        if self.spacing == Spacing::Log && self.beta_min <= 0.0 {
            return bad("log spacing needs --beta-min > 0".into());
        }
        if self.threads == Some(0) {
            return bad("--threads must be at least 1".into());
        }
        if self.la.is_empty() || self.la.contains(&0) {
            return bad("--LA values must be positive".into());
        }
        if self.l > 0 && self.la.iter().any(|&a| a >= self.l) {
            return bad(format!("--LA must be smaller than L = {}", self.l));
        }
        let exact_only = matches!(self.command, Command::XxzSweep | Command::BosonSectors);
        if exact_only && self.backend != Backend::Exact {
            return bad(format!("{} supports only the exact backend", self.command.name()));
        }
        let uses_chain = !matches!(
            self.command,
            Command::BosonSectors | Command::LoccDemo | Command::StateDemo
        );
        if uses_chain && self.command != Command::FfSizeScan && self.l < 2 {
            return bad("chains need L ≥ 2".into());
        }
        if uses_chain && self.backend == Backend::Exact && self.l > EXACT_SITE_CAP {
            return bad(format!(
                "exact backend refused for L = {} > {EXACT_SITE_CAP}",
                self.l
            ));
        }
        if self.backend == Backend::Gaussian && self.v != 0.0 {
            return bad("interactions (--V) need the exact backend".into());
        }
        Ok(())
    }

    fn single_la(&self) -> usize {
        self.la[0]
    }

    /// Inverse temperatures ordered by increasing temperature.
    pub fn beta_grid(&self) -> Vec<f64> {
        let n = self.points;
        let mut grid: Vec<f64> = (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Log => (self.beta_min.ln() + s * (self.beta_max / self.beta_min).ln()).exp(),
                    Spacing::Linear => self.beta_min + s * (self.beta_max - self.beta_min),
                }
            })
            .collect();
        grid.reverse();
        grid
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Plain,
    /// Logarithmic quantity rescaled by `--bits`.
    Entropy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Value {
    fn to_field(&self) -> String {
        match self {
            Value::Int(i) => i.to_string(),
            Value::Float(x) => x.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Null => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Float(x) => Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
            Value::Text(s) => Json::String(s.clone()),
            Value::Bool(b) => Json::Bool(*b),
            Value::Null => Json::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Float(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Null, Value::Float)
    }
}

/// Column-ordered output rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    columns: Vec<(String, ColumnKind)>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[(&str, ColumnKind)]) -> Self {
        Self {
            columns: columns.iter().map(|(n, k)| (n.to_string(), *k)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn columns(&self) -> Vec<&str> {
        self.columns.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    /// Values of a numeric column; non-numeric cells become `None`.
    pub fn column_values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    /// Divides every entropy column by `log 2`.
    pub fn in_bits(mut self) -> Self {
        let ln2 = std::f64::consts::LN_2;
        for (i, (_, kind)) in self.columns.iter().enumerate() {
            if *kind == ColumnKind::Entropy {
                for row in &mut self.rows {
                    if let Value::Float(x) = &mut row[i] {
                        *x /= ln2;
                    }
                }
            }
        }
        self
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(w);
        let to_io = |e: csv::Error| Error::Io(io::Error::other(e));
        wr.write_record(self.columns()).map_err(to_io)?;
        for row in &self.rows {
            wr.write_record(row.iter().map(Value::to_field)).map_err(to_io)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Json> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|((n, _), v)| (n.clone(), v.to_json()))
                        .collect();
                    Json::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_json<W: io::Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json()).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    }

    pub fn write<W: io::Write>(&self, format: Format, w: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}

/// A table plus diagnostics meant for standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub table: Table,
    pub notes: Vec<String>,
}

impl CommandOutput {
    fn new(table: Table) -> Self {
        Self {
            table,
            notes: Vec::new(),
        }
    }
}

/// Runs a command on a worker pool of `cfg.threads` threads.
pub fn run(cfg: &SweepConfig) -> Result<CommandOutput> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut out = pool.install(|| match cfg.command {
        Command::XxzSweep => cmd_xxz_sweep(cfg),
        Command::BosonSectors => cmd_boson_sectors(cfg),
        Command::FfSweep => cmd_ff_sweep(cfg),
        Command::FfSizeScan => cmd_ff_size_scan(cfg),
        Command::HighTFit => cmd_high_t_fit(cfg),
        Command::CftCompare => cmd_cft_compare(cfg),
        Command::LoccDemo => cmd_locc_demo(cfg),
        Command::StateDemo => cmd_state_demo(cfg),
    })?;
    if cfg.bits {
        out.table = out.table.in_bits();
    }
    Ok(out)
}

/// Writes the table to `cfg.out` or `stdout`, and the optional plot script.
pub fn emit(cfg: &SweepConfig, out: &CommandOutput) -> Result<()> {
    match &cfg.out {
        Some(path) => out.table.write(cfg.format, std::fs::File::create(path)?)?,
        None => out.table.write(cfg.format, io::stdout().lock())?,
    }
    if let Some(script) = &cfg.gnuplot {
        let data = cfg.out.as_deref().ok_or_else(|| {
            Error::InvalidParameter("a plot script needs --out for the data file".into())
        })?;
        if cfg.format != Format::Csv {
            return Err(Error::InvalidParameter("plot scripts read CSV output".into()));
        }
        std::fs::write(script, gnuplot_script(cfg, &out.table, data))?;
    }
    Ok(())
}

const E: ColumnKind = ColumnKind::Entropy;
const P: ColumnKind = ColumnKind::Plain;

fn thermal_witness(
    h: &models::Hamiltonian,
    beta: f64,
    partition: &Bipartition,
) -> Result<(f64, f64)> {
    let rho = models::thermal_state(h, beta)?;
    let ds = number_entanglement(&rho, partition)?.delta_s_m;
    Ok((ds, negativity::log_negativity(&rho, partition)?))
}

/// `{T, β, η, ΔS_m, 𝒩}` for the thermal XXZ chain.
pub fn cmd_xxz_sweep(cfg: &SweepConfig) -> Result<CommandOutput> {
    let partition = Bipartition::prefix(cfg.l, cfg.single_la())?;
    let betas = cfg.beta_grid();
    let mut table = Table::new(&[
        ("T", P),
        ("beta", P),
        ("eta", P),
        ("delta_s_m", E),
        ("log_negativity", E),
    ]);
    for &eta in &cfg.eta {
        let h = models::xxz_chain(cfg.l, cfg.j, eta)?;
        let values: Vec<(f64, f64)> = betas
            .par_iter()
            .map(|&b| thermal_witness(&h, b, &partition))
            .collect::<Result<_>>()?;
        for (&b, (ds, neg)) in betas.iter().zip(values) {
            table.push(vec![(1.0 / b).into(), b.into(), eta.into(), ds.into(), neg.into()]);
        }
    }
    Ok(CommandOutput::new(table))
}

/// `{β, N, ΔS_m, 𝒩}` for the two-mode boson sectors `N = 1, 2, 3`.
pub fn cmd_boson_sectors(cfg: &SweepConfig) -> Result<CommandOutput> {
    let partition = Bipartition::prefix(2, 1)?;
    let mut betas = cfg.beta_grid();
    betas.reverse();
    let mut table = Table::new(&[
        ("beta", P),
        ("N", P),
        ("delta_s_m", E),
        ("log_negativity", E),
    ]);
    for n in 1..=3 {
        let h = models::two_mode_boson_sector(cfg.mu, cfg.t, n)?;
        let values: Vec<(f64, f64)> = betas
            .par_iter()
            .map(|&b| thermal_witness(&h, b, &partition))
            .collect::<Result<_>>()?;
        for (&b, (ds, neg)) in betas.iter().zip(values) {
            table.push(vec![b.into(), n.into(), ds.into(), neg.into()]);
        }
    }
    Ok(CommandOutput::new(table))
}

/// `ΔS₂` of the thermal chain by the configured backend; `None` for the
/// analytic backend.
fn chain_delta_s2(cfg: &SweepConfig, betas: &[f64]) -> Result<Vec<Option<f64>>> {
    let la = cfg.single_la();
    match cfg.backend {
        Backend::Gaussian => {
            let sites = Placement::Centered.sites(cfg.l, la)?;
            let kernel = SingleParticleKernel::tight_binding(cfg.l, cfg.t, &sites)?;
            Ok(freefermion::delta_s2_sweep(&kernel, betas)?
                .into_iter()
                .map(Some)
                .collect())
        }
        Backend::Exact => {
            let partition = Bipartition::centered(cfg.l, la)?;
            let h = models::interacting_chain(cfg.l, cfg.t, cfg.v)?;
            betas
                .par_iter()
                .map(|&b| Ok(Some(delta_renyi2(&models::thermal_state(&h, b)?, &partition))))
                .collect()
        }
        Backend::Analytic => Ok(vec![None; betas.len()]),
    }
}

fn cft_value(beta: f64, la: usize) -> Option<f64> {
    analytic::cft_delta_s2(beta, la as f64).ok()
}

/// `{T, β, ΔS₂ exact, ΔS₂ CFT, CFT validity, ΔS₂ high-T}` for the chain.
pub fn cmd_ff_sweep(cfg: &SweepConfig) -> Result<CommandOutput> {
    let betas = cfg.beta_grid();
    let exact = chain_delta_s2(cfg, &betas)?;
    let la = cfg.single_la();
    let area = Bipartition::centered(cfg.l, la)?.boundary_bonds() as f64;
    let mut table = Table::new(&[
        ("T", P),
        ("beta", P),
        ("delta_s2_exact", E),
        ("delta_s2_cft", E),
        ("cft_valid", P),
        ("delta_s2_high_t", E),
    ]);
    for (&b, ex) in betas.iter().zip(exact) {
        let temp = 1.0 / b;
        let cft = cft_value(b, la);
        let valid = cft.is_some() && temp < cfg.t.abs();
        let high = (b * cfg.t.abs() < 1.0).then(|| analytic::high_t_delta_s2(cfg.t, b, area));
        table.push(vec![temp.into(), b.into(), ex.into(), cft.into(), valid.into(), high.into()]);
    }
    Ok(CommandOutput::new(table))
}

/// Ground-state number entropy against the reference fits, per `L_A`.
pub fn cmd_ff_size_scan(cfg: &SweepConfig) -> Result<CommandOutput> {
    let rows: Vec<(usize, usize, f64)> = cfg
        .la
        .par_iter()
        .map(|&la| {
            let l = if cfg.l == 0 { 10 * la } else { cfg.l };
            Ok((la, l, freefermion::number_entropy_ground_state(l, la)?))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        ("L_A", P),
        ("L", P),
        ("number_entropy", E),
        ("number_entropy_fit", E),
        ("entanglement_entropy_fit", E),
        ("cft_t0_asymptote", E),
    ]);
    for (la, l, s) in rows {
        let x = la as f64;
        table.push(vec![
            la.into(),
            l.into(),
            s.into(),
            analytic::number_entropy_reference(x).into(),
            analytic::entanglement_entropy_reference(x).into(),
            analytic::cft_t0_asymptote(x, 1.0).ok().into(),
        ]);
    }
    Ok(CommandOutput::new(table))
}

/// Least-squares `y = c β²` and the log-log slope of `y` against `β`.
pub fn fit_quadratic_tail(betas: &[f64], values: &[f64]) -> (f64, f64) {
    let num: f64 = betas.iter().zip(values).map(|(b, y)| b * b * y).sum();
    let den: f64 = betas.iter().map(|b| b.powi(4)).sum();
    let xs: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|y| y.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxy / sxx, num / den)
}

/// Fits the high-temperature tail of `ΔS₂` (and of `ΔS_m` with the exact
/// backend) and compares with `t²𝒜/2` and `t²𝒜/4`.
pub fn cmd_high_t_fit(cfg: &SweepConfig) -> Result<CommandOutput> {
    let betas = cfg.beta_grid();
    let la = cfg.single_la();
    let partition = Bipartition::centered(cfg.l, la)?;
    let area = partition.boundary_bonds() as f64;
    let t2 = cfg.t * cfg.t;
    let mut series: Vec<(&str, Vec<f64>, f64)> = Vec::new();
    match cfg.backend {
        Backend::Gaussian | Backend::Analytic => {
            let ds2 = if cfg.backend == Backend::Gaussian {
                chain_delta_s2(cfg, &betas)?.into_iter().flatten().collect()
            } else {
                betas.iter().map(|&b| analytic::high_t_delta_s2(cfg.t, b, area)).collect()
            };
            series.push(("delta_s2", ds2, area / 2.0));
        }
        Backend::Exact => {
            let h = models::interacting_chain(cfg.l, cfg.t, cfg.v)?;
            let pairs: Vec<(f64, f64)> = betas
                .par_iter()
                .map(|&b| {
                    let rho = models::thermal_state(&h, b)?;
                    Ok((
                        delta_renyi2(&rho, &partition),
                        number_entanglement(&rho, &partition)?.delta_s_m,
                    ))
                })
                .collect::<Result<_>>()?;
            series.push(("delta_s2", pairs.iter().map(|p| p.0).collect(), area / 2.0));
            series.push(("delta_s_m", pairs.iter().map(|p| p.1).collect(), area / 4.0));
        }
    }
    let mut table = Table::new(&[
        ("quantity", P),
        ("backend", P),
        ("L", P),
        ("L_A", P),
        ("V", P),
        ("points", P),
        ("exponent", P),
        ("coefficient", E),
        ("coefficient_over_t2", P),
        ("predicted_over_t2", P),
    ]);
    for (name, values, predicted) in series {
        let (exponent, coefficient) = fit_quadratic_tail(&betas, &values);
        table.push(vec![
            name.into(),
            cfg.backend.as_str().into(),
            cfg.l.into(),
            la.into(),
            cfg.v.into(),
            betas.len().into(),
            (-exponent).abs().into(),
            coefficient.into(),
            (coefficient / t2).into(),
            predicted.into(),
        ]);
    }
    Ok(CommandOutput::new(table))
}

/// `{T, β, exact, CFT, deviation, in_window}` with the agreement window
/// `T ∈ [5/L_A, 0.2 t]`.
pub fn cmd_cft_compare(cfg: &SweepConfig) -> Result<CommandOutput> {
    let betas = cfg.beta_grid();
    let exact = chain_delta_s2(cfg, &betas)?;
    let la = cfg.single_la();
    let (lo, hi) = (5.0 / la as f64, 0.2 * cfg.t.abs());
    let mut table = Table::new(&[
        ("T", P),
        ("beta", P),
        ("delta_s2_exact", E),
        ("delta_s2_cft", E),
        ("deviation", E),
        ("in_window", P),
    ]);
    let mut worst: Option<f64> = None;
    for (&b, ex) in betas.iter().zip(exact) {
        let temp = 1.0 / b;
        let cft = cft_value(b, la);
        let dev = ex.zip(cft).map(|(e, c)| e - c);
        let inside = temp >= lo && temp <= hi;
        if let (true, Some(d)) = (inside, dev) {
            worst = Some(worst.map_or(d.abs(), |w: f64| w.max(d.abs())));
        }
        table.push(vec![temp.into(), b.into(), ex.into(), cft.into(), dev.into(), inside.into()]);
    }
    let mut out = CommandOutput::new(table);
    if let Some(w) = worst {
        out.notes
            .push(format!("largest |exact − CFT| for T in [{lo}, {hi}]: {w:.4} nats"));
    }
    Ok(out)
}

fn serialize_state(rho: &DensityOperator) -> String {
    let m = rho.matrix();
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_string(&rows).unwrap_or_default()
}

/// A complete unitary channel, `H ⊗ I`, that creates coherence between
/// subsystem-charge sectors.
fn charge_breaking_channel(basis: &OccupationBasis, partition: &Bipartition) -> Result<locc::KrausChannel> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = linalg::CMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
    let u = crate::hilbert::product_operator(basis, partition, &h, &linalg::identity(2))?;
    Ok(locc::KrausChannel::new(vec![u]))
}

/// Monotonicity of `ΔS_m` under the two-site swap-mixing channel, seeded
/// random symmetric channels and a charge-breaking negative control.
pub fn cmd_locc_demo(cfg: &SweepConfig) -> Result<CommandOutput> {
    let mut table = Table::new(&[
        ("trial", P),
        ("kind", P),
        ("sites", P),
        ("before", E),
        ("after", E),
        ("non_increasing", P),
        ("channel_valid", P),
        ("commutation_residual", P),
    ]);
    let mut violations = Vec::new();
    let (basis, partition, channel) = locc::swap_mixing_channel(0)?;
    let rho = locc::swap_mixing_input(0.5, c(0.4))?;
    let report = locc::validate_channel(&channel, &basis, &partition)?;
    let m = locc::monotonicity_check(&rho, &channel, &partition)?;
    let residual = locc::measurement_commutes_with_channel(&rho, &channel, &partition)?;
    if !m.non_increasing {
        violations.push(serialize_state(&rho));
    }
    table.push(vec![
        0usize.into(),
        "fixture".into(),
        2usize.into(),
        m.before.into(),
        m.after.into(),
        m.non_increasing.into(),
        report.is_valid().into(),
        residual.into(),
    ]);

    let trials: Vec<usize> = (1..=cfg.trials).collect();
    let results: Vec<(usize, f64, f64, bool, bool, f64, String)> = trials
        .par_iter()
        .map(|&trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial as u64));
            let l = rng.random_range(2..=3);
            let basis = Arc::new(OccupationBasis::new(l, Statistics::HardcoreBoson, None)?);
            let partition = Bipartition::prefix(l, rng.random_range(1..l))?;
            let products = rng.random_range(1..=3);
            let channel = locc::random_graded_channel(&basis, &partition, products, &mut rng)?;
            let rho = sampling::random_symmetric_state(&basis, &mut rng);
            let valid = locc::validate_channel(&channel, &basis, &partition)?.is_valid();
            let m = locc::monotonicity_check(&rho, &channel, &partition)?;
            let residual = locc::measurement_commutes_with_channel(&rho, &channel, &partition)?;
            Ok((l, m.before, m.after, m.non_increasing, valid, residual, serialize_state(&rho)))
        })
        .collect::<Result<_>>()?;
    for (trial, (l, before, after, ok, valid, residual, state)) in trials.iter().zip(results) {
        if !ok {
            violations.push(state);
        }
        table.push(vec![
            (*trial).into(),
            "random".into(),
            l.into(),
            before.into(),
            after.into(),
            ok.into(),
            valid.into(),
            residual.into(),
        ]);
    }

    let basis = Arc::new(OccupationBasis::new(2, Statistics::HardcoreBoson, None)?);
    let partition = Bipartition::prefix(2, 1)?;
    let mut vacuum = linalg::zeros(4);
    vacuum[(0, 0)] = c(1.0);
    let rho = DensityOperator::new(Arc::clone(&basis), vacuum)?;
    let bad = charge_breaking_channel(&basis, &partition)?;
    let valid = locc::validate_channel(&bad, &basis, &partition)?.is_valid();
    let m = locc::monotonicity_check(&rho, &bad, &partition)?;
    let residual = locc::measurement_commutes_with_channel(&rho, &bad, &partition)?;
    table.push(vec![
        (cfg.trials + 1).into(),
        "negative_control".into(),
        2usize.into(),
        m.before.into(),
        m.after.into(),
        m.non_increasing.into(),
        valid.into(),
        residual.into(),
    ]);

    if let Some(state) = violations.first() {
        return Err(Error::PropertyViolation(format!(
            "{} monotonicity violation(s); first offending state: {state}",
            violations.len()
        )));
    }
    let mut out = CommandOutput::new(table);
    if valid || residual == 0.0 {
        out.notes.push("negative control was not flagged".into());
    }
    Ok(out)
}

/// `ΔS_m`, the negativity suited to the statistics and the per-sector table
/// of a named example state.
pub fn cmd_state_demo(cfg: &SweepConfig) -> Result<CommandOutput> {
    let tag = cfg
        .tag
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("state-demo needs a state tag".into()))?;
    let state: NamedState = tag.parse()?;
    let rho = models::build_named(state)?;
    let l = rho.basis().num_sites();
    let partition = Bipartition::prefix(l, l / 2)?;
    let mut table = Table::new(&[
        ("tag", P),
        ("quantity", P),
        ("N", P),
        ("probability", P),
        ("value", E),
    ]);
    let mut out_notes = Vec::new();
    let report = number_entanglement(&rho, &partition)?;
    if !report.is_symmetric() {
        out_notes.push(format!("{tag}: state not symmetric, witness not meaningful"));
    }
    table.push(vec![tag.into(), "delta_s_m".into(), Value::Null, Value::Null, report.delta_s_m.into()]);
    let neg_name = if rho.basis().statistics().is_fermionic() {
        "fermionic_negativity"
    } else {
        "log_negativity"
    };
    let neg = negativity::negativity(&rho, &partition)?;
    table.push(vec![tag.into(), neg_name.into(), Value::Null, Value::Null, neg.into()]);
    if report.is_symmetric() {
        for row in negativity::sector_negativities(&rho, &partition)?.rows {
            table.push(vec![
                tag.into(),
                "sector_negativity".into(),
                row.total_charge.into(),
                row.probability.into(),
                row.log_negativity.into(),
            ]);
        }
    }
    let mut out = CommandOutput::new(table);
    out.notes = out_notes;
    Ok(out)
}

/// Column layout used by the plot script: x column, optional grouping
/// column and plotted columns.
fn plot_layout(command: Command) -> (&'static str, Option<&'static str>, &'static [&'static str]) {
    match command {
        Command::XxzSweep => ("T", Some("eta"), &["delta_s_m", "log_negativity"]),
        Command::BosonSectors => ("beta", Some("N"), &["delta_s_m", "log_negativity"]),
        Command::FfSweep => ("T", None, &["delta_s2_exact", "delta_s2_cft", "delta_s2_high_t"]),
        Command::FfSizeScan => (
            "L_A",
            None,
            &["number_entropy", "number_entropy_fit", "entanglement_entropy_fit"],
        ),
        Command::HighTFit => ("L", None, &["coefficient_over_t2"]),
        Command::CftCompare => ("T", None, &["delta_s2_exact", "delta_s2_cft"]),
        Command::LoccDemo => ("trial", None, &["before", "after"]),
        Command::StateDemo => ("N", None, &["value"]),
    }
}

/// Gnuplot script that plots the CSV file `data`.
pub fn gnuplot_script(cfg: &SweepConfig, table: &Table, data: &Path) -> String {
    let (x, group, ys) = plot_layout(cfg.command);
    let col = |name: &str| table.column_index(name).map(|i| i + 1);
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel '{x}'");
    if matches!(x, "T" | "L_A") && cfg.spacing == Spacing::Log {
        let _ = writeln!(s, "set logscale x");
    }
    let unit = if cfg.bits { "bits" } else { "nats" };
    let _ = writeln!(s, "set ylabel '{unit}'");
    let file = data.display();
    let Some(xc) = col(x) else {
        return s;
    };
    let mut parts = Vec::new();
    let groups: Vec<String> = match group.and_then(|g| col(g).map(|c| (g, c))) {
        Some((_, gc)) => {
            let mut seen = BTreeMap::new();
            for row in table.rows() {
                let key = row[gc - 1].to_field();
                seen.entry(key.clone()).or_insert(key);
            }
            seen.into_values().collect()
        }
        None => vec![String::new()],
    };
    for y in ys {
        let Some(yc) = col(y) else { continue };
        for g in &groups {
            match group.and_then(col) {
                Some(gc) if !g.is_empty() => parts.push(format!(
                    "'{file}' using {xc}:(${gc}=={g} ? ${yc} : 1/0) with linespoints title '{y} {}={g}'",
                    group.unwrap_or("")
                )),
                _ => parts.push(format!("'{file}' using {xc}:{yc} with linespoints title '{y}'")),
            }
        }
    }
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_and_flag_precedence() {
        let file = Overrides::from_config_text("# demo\nL = 6\nLA = 2\neta = 0, 1.5\nbits = true\n").unwrap();
        let flags = Overrides {
            l: Some(4),
            ..Default::default()
        };
        let cfg = SweepConfig::resolve(Command::XxzSweep, flags.over(file)).unwrap();
        assert_eq!(cfg.l, 4);
        assert_eq!(cfg.la, vec![2]);
        assert_eq!(cfg.eta, vec![0.0, 1.5]);
        assert!(cfg.bits);
    }

    #[test]
    fn bad_config_lines_are_rejected() {
        assert!(Overrides::from_config_text("L 4").is_err());
        assert!(Overrides::from_config_text("colour = red").is_err());
        assert!(Overrides::from_config_text("points = many").is_err());
    }

    #[test]
    fn validation_errors() {
        let base = || Overrides::default();
        let o = Overrides { points: Some(1), ..base() };
        assert!(SweepConfig::resolve(Command::XxzSweep, o).is_err());
        let o = Overrides { backend: Some(Backend::Exact), l: Some(100), ..base() };
        assert!(SweepConfig::resolve(Command::FfSweep, o).is_err());
        let o = Overrides { v: Some(1.0), ..base() };
        assert!(SweepConfig::resolve(Command::FfSweep, o).is_err());
        let o = Overrides { beta_min: Some(2.0), beta_max: Some(1.0), ..base() };
        assert!(SweepConfig::resolve(Command::CftCompare, o).is_err());
    }

    #[test]
    fn grid_is_ordered_by_temperature() {
        let cfg = SweepConfig::defaults(Command::XxzSweep);
        let g = cfg.beta_grid();
        assert_eq!(g.len(), 50);
        assert!((g[0] - 20.0).abs() < 1e-12 && (g[49] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut t = Table::new(&[("name", P), ("value", E)]);
        t.push(vec!["a,b".into(), 1.5.into()]);
        t.push(vec!["plain".into(), Value::Null]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,value\n\"a,b\",1.5\nplain,\n");
    }

    #[test]
    fn bits_rescales_only_entropies() {
        let mut t = Table::new(&[("T", P), ("s", E)]);
        t.push(vec![2.0.into(), std::f64::consts::LN_2.into()]);
        let b = t.in_bits();
        assert_eq!(b.rows()[0][0], Value::Float(2.0));
        assert!((b.rows()[0][1].as_f64().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_demo_rows() {
        let mut cfg = SweepConfig::defaults(Command::StateDemo);
        cfg.tag = Some("qd1".into());
        let out = cmd_state_demo(&cfg).unwrap();
        let sector = out
            .table
            .rows()
            .iter()
            .find(|r| r[1] == Value::from("sector_negativity") && r[2] == Value::Int(1))
            .unwrap();
        assert!((sector[4].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
        cfg.tag = Some("phi2".into());
        let out = cmd_state_demo(&cfg).unwrap();
        assert!(out.notes[0].contains("not symmetric"));
    }

    #[test]
    fn gnuplot_script_references_columns() {
        let mut cfg = SweepConfig::defaults(Command::XxzSweep);
        cfg.points = 2;
        cfg.eta = vec![0.0, 2.0];
        let out = cmd_xxz_sweep(&cfg).unwrap();
        let s = gnuplot_script(&cfg, &out.table, Path::new("xxz.csv"));
        assert!(s.contains("'xxz.csv' using 1:($3==0 ? $4 : 1/0)"));
        assert!(s.contains("set logscale x"));
    }
}
