//! Instance generation, the `compute` driver, run records and the benchmark
//! harness behind the `cpnorm` binary.
//!
//! Random instances use ChaCha8 seeded with `seed_from_u64(seed)`: entries of
//! a `dim × k` matrix are drawn in row-major order with `gen_range(0..p)`,
//! redrawing the whole matrix until it has rank `dim` and no zero column.
//! Dihedral instances draw the binary reflection pattern from the same stream
//! right after the rotation part.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dihedral::{build_dihedral, dihedral_group, normalizer_dihedral};
use crate::encode::{code_to_group, format_group_text, parse_group_text};
use crate::error::{Error, Result};
use crate::gfp::{FpMatrix, FpVector, PrimeField};
use crate::oracle::{brute_canon_rep, brute_maut, brute_normalizer, DEFAULT_BUDGET};
use crate::perm::{PermGroup, Permutation};
use crate::search::{normalizer, Config, Method, PruneRule, Stats};

pub const DEFAULT_TIMEOUT_SECS: u64 = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cp,
    Dihedral,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Cp => "cp",
            Self::Dihedral => "dihedral",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cp" => Ok(Self::Cp),
            "dihedral" => Ok(Self::Dihedral),
            _ => Err(Error::Unsupported(format!("unknown family `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Full,
    #[value(name = "limitdepth")]
    LimitDepth,
    Dihedral,
    Oracle,
}

impl fmt::Display for MethodArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::LimitDepth => "limitdepth",
            Self::Dihedral => "dihedral",
            Self::Oracle => "oracle",
        })
    }
}

impl FromStr for MethodArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, false).map_err(|_| Error::Unsupported(format!("unknown method `{s}`")))
    }
}

/// Where a generated instance came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub family: Family,
    pub p: u32,
    pub k: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Descriptor {
    fn comment(&self) -> String {
        format!("# instance family={} p={} k={} dim={} seed={}", self.family, self.p, self.k, self.dim, self.seed)
    }

    fn from_comments(text: &str) -> Option<Self> {
        let line = text.lines().find_map(|l| l.trim().strip_prefix("# instance "))?;
        let kv = key_values(line);
        let get = |key: &str| kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        Some(Self {
            family: get("family")?.parse().ok()?,
            p: get("p")?.parse().ok()?,
            k: get("k")?.parse().ok()?,
            dim: get("dim")?.parse().ok()?,
            seed: get("seed")?.parse().ok()?,
        })
    }
}

fn key_values(line: &str) -> Vec<(String, String)> {
    line.split_whitespace()
        .filter_map(|t| t.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub descriptor: Descriptor,
    /// Rotation part.
    pub matrix: FpMatrix,
    /// Reflection pattern, dihedral family only.
    pub reflections: Option<FpMatrix>,
    pub group: PermGroup,
}

impl Generated {
    /// Group exchange text with the descriptor and matrices as comments.
    pub fn to_text(&self) -> String {
        let mut out = self.descriptor.comment();
        out.push('\n');
        for (name, m) in [("rotations", Some(&self.matrix)), ("reflections", self.reflections.as_ref())] {
            if let Some(m) = m {
                out.push_str(&format!("# {name}\n"));
                for line in m.to_string().lines() {
                    out.push_str(&format!("#   {line}\n"));
                }
            }
        }
        out.push_str(&format_group_text(self.descriptor.p, &self.group));
        out
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, field: PrimeField, rows: usize, k: usize) -> FpMatrix {
    loop {
        let data: Vec<FpVector> = (0..rows).map(|_| (0..k).map(|_| rng.gen_range(0..field.p())).collect()).collect();
        let m = FpMatrix::from_vectors(field, k, &data);
        if m.rank() == rows && (0..k).all(|j| m.column(j).iter().any(|&x| x != 0)) {
            return m;
        }
    }
}

/// Default code dimension: half the number of orbits, at least one.
pub fn default_dim(k: usize) -> usize {
    (k / 2).max(1)
}

pub fn generate(family: Family, p: u32, k: usize, dim: usize, seed: u64) -> Result<Generated> {
    let field = PrimeField::new(p)?;
    if k == 0 || dim == 0 || dim > k {
        return Err(Error::Dimension(format!("need 1 <= dim <= k, got dim={dim} k={k}")));
    }
    if family == Family::Dihedral && p == 2 {
        return Err(Error::Unsupported("dihedral instances need an odd prime".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = random_matrix(&mut rng, field, dim, k);
    let (reflections, group) = match family {
        Family::Cp => (None, code_to_group(&matrix)?),
        Family::Dihedral => {
            let r = random_matrix(&mut rng, PrimeField::new(2)?, dim, k);
            let g = dihedral_group(&matrix, &r)?;
            (Some(r), g)
        }
    };
    Ok(Generated { descriptor: Descriptor { family, p, k, dim, seed }, matrix, reflections, group })
}

/// Output of one `compute` run. The line format is
///
/// ```text
/// run n=6 p=2 k=3 method=full order=48 timed_out=false wall_ms=1 input_sha256=…
/// instance family=cp p=2 k=3 dim=2 seed=7
/// stats nodes=… pruned.lds=… …
/// gen (1 2)(5 6)
/// end
/// ```
///
/// with the `instance` line present only for generated inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub p: u32,
    pub k: usize,
    pub instance: Option<Descriptor>,
    pub method: MethodArg,
    pub order: String,
    pub generators: Vec<String>,
    pub timed_out: bool,
    pub stats: Stats,
    pub wall_ms: u64,
    pub input_sha256: String,
}

impl RunRecord {
    pub fn to_lines(&self) -> String {
        let mut out = format!(
            "run n={} p={} k={} method={} order={} timed_out={} wall_ms={} input_sha256={}\n",
            self.n, self.p, self.k, self.method, self.order, self.timed_out, self.wall_ms, self.input_sha256
        );
        if let Some(d) = &self.instance {
            out.push_str(&d.comment()[2..]);
            out.push('\n');
        }
        out.push_str("stats");
        for (key, v) in flatten_stats(&self.stats) {
            out.push_str(&format!(" {key}={v}"));
        }
        out.push('\n');
        for g in &self.generators {
            out.push_str(&format!("gen {g}\n"));
        }
        out.push_str("end\n");
        out
    }

    pub fn from_lines(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (ln, head) = lines.next().ok_or_else(|| bad(1, "empty record"))?;
        let head = head.strip_prefix("run ").ok_or_else(|| bad(ln, "expected `run`"))?;
        let kv = key_values(head);
        let get = |key: &str| {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| bad(ln, &format!("missing `{key}`")))
        };
        let num = |key: &str| -> Result<u64> { get(key)?.parse().map_err(|_| bad(ln, &format!("bad `{key}`"))) };
        let mut rec = RunRecord {
            n: num("n")? as usize,
            p: num("p")? as u32,
            k: num("k")? as usize,
            instance: None,
            method: get("method")?.parse()?,
            order: get("order")?,
            generators: Vec::new(),
            timed_out: get("timed_out")? == "true",
            stats: Stats::default(),
            wall_ms: num("wall_ms")?,
            input_sha256: get("input_sha256")?,
        };
        let mut ended = false;
        for (ln, line) in lines {
            if let Some(rest) = line.strip_prefix("instance ") {
                rec.instance = Some(Descriptor::from_comments(&format!("# instance {rest}")).ok_or_else(|| bad(ln, "bad instance line"))?);
            } else if let Some(rest) = line.strip_prefix("stats") {
                rec.stats = unflatten_stats(&key_values(rest)).map_err(|e| bad(ln, &e.to_string()))?;
            } else if let Some(rest) = line.strip_prefix("gen ") {
                rec.generators.push(rest.to_string());
            } else if line == "end" {
                ended = true;
                break;
            } else {
                return Err(bad(ln, "unexpected line"));
            }
        }
        if !ended {
            return Err(bad(text.lines().count(), "missing `end`"));
        }
        Ok(rec)
    }

    /// Re-parses the generators and checks that each normalises `h`.
    pub fn verify(&self, h: &PermGroup) -> Result<bool> {
        let chain = h.stab_chain();
        for g in &self.generators {
            let x = Permutation::parse(g, h.degree())?;
            if !h.generators().iter().all(|y| chain.contains(&y.conj(&x))) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn flatten_stats(stats: &Stats) -> Vec<(String, u64)> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, u64)>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            other => out.push((prefix.to_string(), other.as_u64().unwrap_or(0))),
        }
    }
    let mut out = Vec::new();
    walk("", &serde_json::to_value(stats).expect("stats serialise"), &mut out);
    out
}

fn unflatten_stats(kv: &[(String, String)]) -> Result<Stats> {
    let mut root = serde_json::Map::new();
    for (key, v) in kv {
        let v: u64 = v.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad counter `{key}`") })?;
        match key.split_once('.') {
            Some((outer, inner)) => {
                let entry = root.entry(outer.to_string()).or_insert_with(|| serde_json::Value::Object(Default::default()));
                if let serde_json::Value::Object(m) = entry {
                    m.insert(inner.to_string(), v.into());
                }
            }
            None => {
                root.insert(key.clone(), v.into());
            }
        }
    }
    Ok(serde_json::from_value(serde_json::Value::Object(root))?)
}

/// Options of one `compute` run.
#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub method: MethodArg,
    pub config: Config,
    pub budget: u64,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        Self { method: MethodArg::Full, config: Config::default(), budget: DEFAULT_BUDGET }
    }
}

/// Runs `method` on a group given in the exchange format.
pub fn compute(text: &str, opts: &ComputeOptions) -> Result<RunRecord> {
    let (p, h) = parse_group_text(text)?;
    let instance = Descriptor::from_comments(text);
    let start = Instant::now();
    let (order, generators, stats, timed_out) = match opts.method {
        MethodArg::Full | MethodArg::LimitDepth => {
            let method = if opts.method == MethodArg::Full { Method::Full } else { Method::LimitDepth };
            let r = normalizer(&h, p, &opts.config.clone().with_method(method))?;
            (r.order, r.generators, r.stats, r.timed_out)
        }
        MethodArg::Dihedral => {
            let r = normalizer_dihedral(&build_dihedral(&h, p)?, &opts.config)?;
            (r.order, r.generators, r.stats, r.timed_out)
        }
        MethodArg::Oracle => {
            let c = brute_normalizer(&h, opts.budget)?;
            (c.order(), c.group.generators().to_vec(), Stats::default(), false)
        }
    };
    let wall_ms = start.elapsed().as_millis() as u64;
    let chain = h.stab_chain();
    for g in &generators {
        if !h.generators().iter().all(|y| chain.contains(&y.conj(g))) {
            return Err(Error::NotInL(format!("{g} does not normalise the input")));
        }
    }
    Ok(RunRecord {
        n: h.degree(),
        p,
        k: h.orbits().len(),
        instance,
        method: opts.method,
        order: order.to_string(),
        generators: generators.iter().map(|g| g.to_string()).collect(),
        timed_out,
        stats,
        wall_ms,
        input_sha256: sha256_hex(&format_group_text(p, &h)),
    })
}

fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// `family:P:K1,K2,…[:DIM]`; the dimension defaults to `k/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchSpec {
    pub family: Family,
    pub p: u32,
    pub ks: Vec<usize>,
    pub dim: Option<usize>,
}

impl FromStr for BenchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, msg: format!("bad family spec `{s}`, expected family:P:K1,K2[:DIM]") };
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let ks = parts[2].split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<Vec<usize>>>()?;
        Ok(Self {
            family: parts[0].parse()?,
            p: parts[1].parse().map_err(|_| bad())?,
            ks,
            dim: parts.get(3).map(|d| d.parse().map_err(|_| bad())).transpose()?,
        })
    }
}

/// Quantile of sorted times by linear interpolation; `None` when it falls
/// on or next to a censored run.
pub fn quantile(sorted: &[Option<f64>], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    let (a, b) = (sorted[lo]?, sorted[hi]?);
    Some(a + (b - a) * (pos - lo as f64))
}

/// Sorts completed times ahead of censored ones.
pub fn sort_times(times: &mut [Option<f64>]) {
    times.sort_by(|a, b| match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: Family,
    pub p: u32,
    pub k: usize,
    pub dim: usize,
    pub method: MethodArg,
    pub trials: usize,
    pub completed: usize,
    /// Seconds; `None` means at least the timeout.
    pub median: Option<f64>,
    pub lower_quartile: Option<f64>,
    pub upper_quartile: Option<f64>,
    pub timeout_secs: f64,
    /// Normaliser orders of the completed runs, in seed order.
    pub orders: Vec<Option<String>>,
}

impl BenchRow {
    pub fn header() -> &'static str {
        "family p k dim method trials done median q1 q3"
    }

    pub fn to_line(&self) -> String {
        let fmt = |x: Option<f64>| match x {
            Some(t) => format!("{t:.3}"),
            None => format!(">{}", self.timeout_secs),
        };
        format!(
            "{} {} {} {} {} {} {} {} {} {}",
            self.family,
            self.p,
            self.k,
            self.dim,
            self.method,
            self.trials,
            self.completed,
            fmt(self.median),
            fmt(self.lower_quartile),
            fmt(self.upper_quartile)
        )
    }
}

/// Runs `trials` seeds (`seed0`, `seed0 + 1`, …) per size and method.
pub fn bench(
    spec: &BenchSpec,
    methods: &[MethodArg],
    trials: usize,
    timeout: Duration,
    seed0: u64,
    config: &Config,
    mut on_run: impl FnMut(&RunRecord),
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k in &spec.ks {
        let dim = spec.dim.unwrap_or_else(|| default_dim(k));
        let instances = (0..trials as u64)
            .map(|t| generate(spec.family, spec.p, k, dim, seed0 + t))
            .collect::<Result<Vec<_>>>()?;
        for &method in methods {
            let mut times = Vec::new();
            let mut orders = Vec::new();
            for g in &instances {
                let opts = ComputeOptions { method, config: config.clone().with_timeout(timeout), budget: DEFAULT_BUDGET };
                let rec = compute(&g.to_text(), &opts)?;
                on_run(&rec);
                let secs = rec.wall_ms as f64 / 1000.0;
                let done = !rec.timed_out && secs <= timeout.as_secs_f64();
                times.push(done.then_some(secs));
                orders.push(done.then(|| rec.order.clone()));
            }
            sort_times(&mut times);
            rows.push(BenchRow {
                family: spec.family,
                p: spec.p,
                k,
                dim,
                method,
                trials,
                completed: times.iter().filter(|t| t.is_some()).count(),
                median: quantile(&times, 0.5),
                lower_quartile: quantile(&times, 0.25),
                upper_quartile: quantile(&times, 0.75),
                timeout_secs: timeout.as_secs_f64(),
                orders,
            });
        }
    }
    Ok(rows)
}

#[derive(Parser, Debug)]
#[command(name = "cpnorm", version, about = "Normalisers of subdirect products of cyclic and dihedral groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random instance in the group exchange format.
    Gen(GenArgs),
    /// Compute the normaliser of a group read from a file.
    Compute(ComputeArgs),
    /// Time a family of random instances.
    Bench(BenchArgs),
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: usize,
    /// Code dimension; defaults to k/2.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub dihedral: bool,
    /// Print the rotation matrix instead of the group.
    #[arg(long)]
    pub matrix: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Disable a pruning rule: lds, stabs, deep, alldiff, partitions.
    #[arg(long = "no-prune", value_name = "RULE")]
    pub no_prune: Vec<PruneRule>,
    #[arg(long)]
    pub no_dual_swap: bool,
}

impl SearchArgs {
    fn config(&self) -> Config {
        let mut c = Config::default();
        for &r in &self.no_prune {
            c.prune = c.prune.without(r);
        }
        c.dual_swap = !self.no_dual_swap;
        c
    }
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Read a generator matrix (`p s k` header) instead of a group.
    #[arg(long)]
    pub matrix: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Full)]
    pub method: MethodArg,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Seconds.
    #[arg(long)]
    pub timeout: Option<u64>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// `cp:P:K1,K2[:DIM]` or `dihedral:P:K1,K2[:DIM]`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Seconds per run.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT_SECS)]
    pub timeout: u64,
    #[arg(long = "method", value_enum)]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long)]
    pub json: bool,
    /// Also write every run record, one JSON object per line.
    #[arg(long)]
    pub records: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub what: OracleCommand,
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Normaliser in S_n of a group file by enumeration.
    Normalizer {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Monomial automorphisms of a matrix file.
    Maut {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Least matrix of the orbit of a standard-form matrix file.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => {
            let family = if a.dihedral { Family::Dihedral } else { Family::Cp };
            let g = generate(family, a.p, a.k, a.dim.unwrap_or_else(|| default_dim(a.k)), a.seed)?;
            let text = if a.matrix { g.matrix.to_string() } else { g.to_text() };
            emit(out, a.out.as_ref(), &text)
        }
        Command::Compute(a) => {
            let mut text = fs::read_to_string(&a.input)?;
            if a.matrix {
                let m: FpMatrix = text.parse()?;
                text = format_group_text(m.field().p(), &code_to_group(&m)?);
            }
            let mut config = a.search.config();
            config.timeout = a.timeout.map(Duration::from_secs);
            let rec = compute(&text, &ComputeOptions { method: a.method, config, budget: DEFAULT_BUDGET })?;
            let body = if a.json { serde_json::to_string_pretty(&rec)? + "\n" } else { rec.to_lines() };
            emit(out, a.out.as_ref(), &body)
        }
        Command::Bench(a) => {
            let spec: BenchSpec = a.family.parse()?;
            let methods = if a.methods.is_empty() { vec![MethodArg::Full] } else { a.methods.clone() };
            let mut records = match &a.records {
                Some(p) => Some(fs::File::create(p)?),
                None => None,
            };
            let mut record_err = None;
            let rows = bench(&spec, &methods, a.trials, Duration::from_secs(a.timeout), a.seed, &a.search.config(), |r| {
                if let Some(f) = records.as_mut() {
                    if let Err(e) = serde_json::to_string(r).map_err(Error::from).and_then(|s| Ok(writeln!(f, "{s}")?)) {
                        record_err.get_or_insert(e);
                    }
                }
            })?;
            if let Some(e) = record_err {
                return Err(e);
            }
            if a.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else {
                writeln!(out, "{}", BenchRow::header())?;
                for r in &rows {
                    writeln!(out, "{}", r.to_line())?;
                }
            }
            Ok(())
        }
        Command::Oracle(a) => match a.what {
            OracleCommand::Normalizer { input } => {
                let (_, h) = parse_group_text(&fs::read_to_string(input)?)?;
                let c = brute_normalizer(&h, a.budget)?;
                writeln!(out, "order {}", c.order())?;
                for g in c.group.generators() {
                    writeln!(out, "gen {g}")?;
                }
                Ok(())
            }
            OracleCommand::Maut { input } => {
                let m: FpMatrix = fs::read_to_string(input)?.parse()?;
                let maut = brute_maut(&m, a.budget)?;
                writeln!(out, "maut {}", maut.len())?;
                for w in &maut {
                    writeln!(out, "{w}")?;
                }
                Ok(())
            }
            OracleCommand::Canon { input } => {
                let m: FpMatrix = fs::read_to_string(input)?.parse()?;
                write!(out, "{}", brute_canon_rep(&m, a.budget)?)?;
                Ok(())
            }
        },
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: &str = "2 6\n(1 2)(5 6)\n(3 4)(5 6)\n";

    #[test]
    fn generation_is_deterministic() {
        let a = generate(Family::Cp, 2, 4, 2, 1).unwrap();
        let b = generate(Family::Cp, 2, 4, 2, 1).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.matrix.rank(), 2);
        let c = generate(Family::Cp, 3, 2, 2, 9).unwrap();
        assert_eq!(c.matrix.row_space_basis(), FpMatrix::identity(PrimeField::new(3).unwrap(), 2));
        let d = generate(Family::Dihedral, 3, 4, 2, 5).unwrap();
        assert_eq!(d.group.orbits().len(), 4);
        assert!(build_dihedral(&d.group, 3).is_ok());
        assert!(generate(Family::Cp, 2, 3, 4, 0).is_err());
        assert!(generate(Family::Dihedral, 2, 3, 1, 0).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let g = generate(Family::Dihedral, 5, 6, 3, 42).unwrap();
        assert_eq!(Descriptor::from_comments(&g.to_text()), Some(g.descriptor.clone()));
        let (p, h) = parse_group_text(&g.to_text()).unwrap();
        assert_eq!(p, 5);
        assert_eq!(h, g.group);
    }

    #[test]
    fn compute_e1() {
        let full = compute(E1, &ComputeOptions::default()).unwrap();
        assert_eq!(full.order, "48");
        let lim = compute(E1, &ComputeOptions { method: MethodArg::LimitDepth, ..Default::default() }).unwrap();
        assert_eq!(lim.order, "48");
        let orc = compute(E1, &ComputeOptions { method: MethodArg::Oracle, ..Default::default() }).unwrap();
        assert_eq!(orc.order, "48");
        let (_, h) = parse_group_text(E1).unwrap();
        assert!(full.verify(&h).unwrap());
    }

    #[test]
    fn malformed_generator_names_line() {
        let err = compute("2 6\n(1 2)(5 6)\n(3 4)(5 9)\n", &ComputeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn record_round_trip() {
        let g = generate(Family::Cp, 3, 5, 2, 3).unwrap();
        let mut rec = compute(&g.to_text(), &ComputeOptions::default()).unwrap();
        assert_eq!(rec.instance, Some(g.descriptor.clone()));
        let back = RunRecord::from_lines(&rec.to_lines()).unwrap();
        assert_eq!(back, rec);
        assert!(back.verify(&g.group).unwrap());
        let json: RunRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        assert_eq!(json, rec);
        let mut again = compute(&g.to_text(), &ComputeOptions::default()).unwrap();
        rec.wall_ms = 0;
        rec.stats.elapsed_ms = 0;
        again.wall_ms = 0;
        again.stats.elapsed_ms = 0;
        assert_eq!(again, rec);
        assert!(RunRecord::from_lines("run n=1\nend\n").is_err());
    }

    #[test]
    fn quantiles() {
        assert_eq!(quantile(&[Some(2.0)], 0.5), Some(2.0));
        let mut t = vec![None, Some(3.0), Some(1.0), Some(2.0)];
        sort_times(&mut t);
        assert_eq!(quantile(&t, 0.25), Some(1.75));
        assert_eq!(quantile(&t, 0.5), Some(2.5));
        assert_eq!(quantile(&t, 0.75), None);
    }

    #[test]
    fn bench_spec_parses() {
        let s: BenchSpec = "cp:3:4,6:2".parse().unwrap();
        assert_eq!(s, BenchSpec { family: Family::Cp, p: 3, ks: vec![4, 6], dim: Some(2) });
        assert!("cp:3".parse::<BenchSpec>().is_err());
        assert!("dihedral:5:4".parse::<BenchSpec>().is_ok());
    }

    #[test]
    fn bench_single_trial() {
        let spec: BenchSpec = "cp:2:4".parse().unwrap();
        let mut seen = Vec::new();
        let rows = bench(&spec, &[MethodArg::Full, MethodArg::LimitDepth], 1, Duration::from_secs(60), 0, &Config::default(), |r| {
            seen.push(r.order.clone())
        })
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].median, rows[0].lower_quartile);
        assert_eq!(seen[0], seen[1]);
        assert_eq!(rows[0].orders, rows[1].orders);
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from(["cpnorm", "compute", "--in", "x", "--method", "limitdepth", "--no-prune", "lds", "--no-prune", "deep"]).unwrap();
        let Command::Compute(a) = cli.command else { panic!() };
        assert_eq!(a.method, MethodArg::LimitDepth);
        let c = a.search.config();
        assert!(!c.prune.lds && !c.prune.deep && c.prune.stabs);
        assert!(Cli::try_parse_from(["cpnorm", "bench", "--family", "cp:2:4", "--trials", "1"]).is_ok());
        assert!(Cli::try_parse_from(["cpnorm", "oracle", "maut", "--in", "m"]).is_ok());
    }
}
