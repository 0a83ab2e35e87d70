//! Command-line front end for the periodic Kazhdan–Lusztig engine.

pub mod cache;
pub mod config;

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use periodic_kl::orders::{semiinf_leq_via_translation, sufficiently_dominant};
use periodic_kl::*;
use serde_json::{json, Value};

use config::{FileConfig, Format, JobConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Parse(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "periodic-kl",
    version,
    about = "Periodic and generic Kazhdan-Lusztig polynomials"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Opts {
    /// TOML file with any of the options below; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cartan type: A, B, C or G.
    #[arg(long = "type", global = true)]
    pub family: Option<String>,
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    #[arg(long, global = true)]
    pub l: Option<u64>,
    /// Window: all t(λ)w with |λ_i| ≤ height.
    #[arg(long, global = true)]
    pub height: Option<u64>,
    /// Restrict the window to the Λ/Q-coset of this weight, e.g. `--coset=1,0`.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub coset: Option<Vec<i64>>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "PERIODIC_KL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Proceed despite warnings about l.
    #[arg(long, global = true)]
    pub force: bool,
    /// Depth bound for the periodic basis computation.
    #[arg(long, global = true)]
    pub max_gap: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice points of the closed fundamental alcove with stabilizers.
    Blocks,
    /// Report the admissibility conditions on l.
    Validate,
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Hasse diagram of the semi-infinite order on the window.
    Order,
    /// p, q or q' for all pairs of the window (zero entries omitted).
    Table {
        #[arg(long, default_value = "p")]
        kind: PolyKind,
    },
    #[command(subcommand)]
    Mult(MultCmd),
    /// Certification, inversion, Koszul and order cross-checks on the window.
    Selfcheck,
}

/// Operands are elements (`t(1,0)*w[1 2]`), JSON term lists, or `@file.json`.
#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    Mul {
        a: String,
        b: String,
    },
    Bar {
        a: String,
    },
    /// Self-dual basis element C_x.
    Kl {
        x: String,
    },
}

#[derive(Args, Debug)]
pub struct Pair {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MultCmd {
    /// [M(x•0) : L(y•0)]
    SimpleInVerma {
        #[command(flatten)]
        pair: Pair,
    },
    /// (P : M(x•0)) for the truncation ν.
    VermaInProjective {
        #[command(flatten)]
        pair: Pair,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        nu: Vec<i64>,
    },
    /// (P_y : Z_x) = [Z_x : L_y]
    Baby {
        #[command(flatten)]
        pair: Pair,
    },
}

impl Opts {
    fn as_file_config(&self) -> FileConfig {
        FileConfig {
            family: self.family.clone(),
            rank: self.rank,
            l: self.l,
            height: self.height,
            coset: self.coset.clone(),
            format: self.format,
            output: self.output.clone(),
            threads: self.threads,
            cache_dir: self.cache_dir.clone(),
            max_gap: self.max_gap,
            force: self.force.then_some(true),
        }
    }

    pub fn job(&self) -> Result<JobConfig> {
        let base = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
                FileConfig::parse(&text)?
            }
            None => FileConfig::default(),
        };
        JobConfig::resolve(base.overlay(self.as_file_config()))
    }
}

/// What a command produced: the rendered artifact and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: EXIT_OK,
        }
    }
}

/// Run a parsed command line, writing to `--output` when given.
/// Returns the text for stdout (empty if it went to a file) and the exit code.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let job = cli.opts.job()?;
    if let Some(n) = job.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let mut out = execute(&job, &cli.command)?;
    if let Some(path) = &job.output {
        fs::write(path, &out.body)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
        out.body.clear();
    }
    Ok(out)
}

fn group(job: &JobConfig) -> Arc<AffineWeylGroup> {
    Arc::new(AffineWeylGroup::new(Arc::new(job.root_datum.clone())))
}

fn module(job: &JobConfig, g: &Arc<AffineWeylGroup>) -> Result<PeriodicModule> {
    cache::periodic_module(g.clone(), job.cache_dir.as_deref(), job.max_gap)
}

pub fn execute(job: &JobConfig, command: &Command) -> Result<Outcome> {
    let g = group(job);
    match command {
        Command::Validate => Ok(validate(job)),
        Command::Hecke(op) => hecke(job, &g, op).map(Outcome::ok),
        Command::Blocks => {
            job.check_l()?;
            blocks(job, &g).map(Outcome::ok)
        }
        Command::Order => {
            job.check_l()?;
            Ok(Outcome::ok(order(job, &g)))
        }
        Command::Table { kind } => {
            job.check_l()?;
            let m = module(job, &g)?;
            Ok(Outcome::ok(render_table(
                job,
                &g,
                &Table::polynomials(&m, &job.window, *kind),
            )))
        }
        Command::Mult(op) => {
            job.check_l()?;
            let m = module(job, &g)?;
            mult(job, &g, &m, op).map(Outcome::ok)
        }
        Command::Selfcheck => {
            job.check_l()?;
            let m = module(job, &g)?;
            selfcheck(job, &g, &m)
        }
    }
}

fn datum_json(g: &AffineWeylGroup) -> Value {
    serde_json::to_value(DatumSpec::of(g.root_datum())).unwrap()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

fn csv_rows<const N: usize>(
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(&r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn validate(job: &JobConfig) -> Outcome {
    let report = job.root_datum.validate_l();
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let warnings: Vec<String> = report.warnings.iter().map(|v| v.to_string()).collect();
    let body = match job.format {
        Format::Json => pretty(&json!({
            "l": job.root_datum.l(),
            "ok": report.is_ok(),
            "violations": violations,
            "warnings": warnings,
        })),
        Format::Csv => csv_rows(
            ["severity", "message"],
            violations
                .iter()
                .map(|m| ["violation".to_string(), m.clone()])
                .chain(warnings.iter().map(|m| ["warning".to_string(), m.clone()])),
        ),
        Format::Text => {
            let mut s = format!(
                "l = {}: {}\n",
                job.root_datum.l(),
                if report.is_ok() { "ok" } else { "rejected" }
            );
            for m in &violations {
                s += &format!("violation: {m}\n");
            }
            for m in &warnings {
                s += &format!("warning: {m}\n");
            }
            s
        }
    };
    Outcome {
        body,
        code: if report.is_ok() { EXIT_OK } else { EXIT_USAGE },
    }
}

fn blocks(job: &JobConfig, g: &AffineWeylGroup) -> Result<String> {
    let blocks = enumerate_blocks(g.root_datum())?;
    let stab = |b: &BlockLabel| {
        b.stabilizer
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    };
    Ok(match job.format {
        Format::Json => pretty(&json!({
            "root_datum": datum_json(g),
            "blocks": blocks.iter().map(|b| json!({
                "representative": b.representative.coords(),
                "stabilizer": stab(b),
                "regular": b.regular,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            ["representative", "stabilizer", "regular"],
            blocks.iter().map(|b| {
                [
                    b.representative.to_string(),
                    stab(b).join(" "),
                    b.regular.to_string(),
                ]
            }),
        ),
        Format::Text => blocks
            .iter()
            .map(|b| {
                let kind = if b.regular {
                    "regular".to_string()
                } else {
                    format!("singular {{{}}}", stab(b).join(", "))
                };
                format!("{}\t{kind}\n", b.representative)
            })
            .collect(),
    })
}

fn operand(g: &AffineWeylGroup, text: &str) -> Result<HeckeElement> {
    let text = text.trim();
    let json_text;
    let json_src = if let Some(path) = text.strip_prefix('@') {
        json_text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        Some(json_text.as_str())
    } else if text.starts_with('[') {
        Some(text)
    } else {
        None
    };
    match json_src {
        Some(src) => {
            let v: Value = serde_json::from_str(src)
                .map_err(|e| Error::Parse(format!("bad element JSON: {e}")))?;
            HeckeElement::from_json(g, &v)
        }
        None => Ok(HeckeElement::basis(g.parse_element(text)?)),
    }
}

fn render_hecke(job: &JobConfig, g: &AffineWeylGroup, h: &HeckeElement) -> String {
    match job.format {
        Format::Json => pretty(&h.to_json(g)),
        Format::Csv => csv_rows(
            ["element", "polynomial"],
            h.terms().map(|(x, p)| [g.format_element(x), p.to_string()]),
        ),
        Format::Text => h.display(g) + "\n",
    }
}

fn hecke(job: &JobConfig, g: &Arc<AffineWeylGroup>, op: &HeckeCmd) -> Result<String> {
    let h = HeckeAlgebra::new(g.clone());
    let value = match op {
        HeckeCmd::Mul { a, b } => h.mul(&operand(g, a)?, &operand(g, b)?),
        HeckeCmd::Bar { a } => h.bar(&operand(g, a)?),
        HeckeCmd::Kl { x } => (*h.kl_basis(&g.parse_element(x)?)?).clone(),
    };
    Ok(render_hecke(job, g, &value))
}

fn order(job: &JobConfig, g: &AffineWeylGroup) -> String {
    let poset = SemiInfinitePoset::build(g, &job.window);
    let names: Vec<String> = poset.elements.iter().map(|x| g.format_element(x)).collect();
    let edges = poset.hasse_edges();
    match job.format {
        Format::Json => pretty(&json!({
            "root_datum": datum_json(g),
            "window": job.window,
            "elements": names,
            "edges": edges.iter().map(|&(i, j)| json!({"lower": names[i], "upper": names[j]})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            ["lower", "upper"],
            edges
                .iter()
                .map(|&(i, j)| [names[i].clone(), names[j].clone()]),
        ),
        Format::Text => edges
            .iter()
            .map(|&(i, j)| format!("{} < {}\n", names[i], names[j]))
            .collect(),
    }
}

fn render_table(job: &JobConfig, g: &AffineWeylGroup, t: &Table) -> String {
    match job.format {
        Format::Json => t.to_json(g),
        Format::Csv => t.to_csv(g),
        Format::Text => t.to_text(g),
    }
}

fn mult(job: &JobConfig, g: &AffineWeylGroup, m: &PeriodicModule, op: &MultCmd) -> Result<String> {
    let view = Multiplicities::new(m, job.window.clone());
    let (kind, pair, nu) = match op {
        MultCmd::SimpleInVerma { pair } => (TableKind::SimpleInVerma, pair, None),
        MultCmd::VermaInProjective { pair, nu } => {
            if nu.len() != g.rank() {
                return Err(Error::Input(format!("--nu needs {} coordinates", g.rank())));
            }
            (TableKind::VermaInProjective, pair, Some(Weight::new(nu)))
        }
        MultCmd::Baby { pair } => (TableKind::BabyVermaInProjective, pair, None),
    };
    let (x, y) = match (&pair.x, &pair.y) {
        (Some(x), Some(y)) => (g.parse_element(x)?, g.parse_element(y)?),
        (None, None) => return Ok(render_table(job, g, &view.table(kind, nu.as_ref())?)),
        _ => {
            return Err(Error::Input(
                "give both --x and --y, or neither for a table".into(),
            ))
        }
    };
    let value = match kind {
        TableKind::SimpleInVerma => view.simple_in_verma(&x, &y),
        TableKind::VermaInProjective => view.verma_in_projective(&x, &y, nu.as_ref().unwrap()),
        _ => view.baby_verma_in_projective(&x, &y),
    };
    let (xs, ys) = (g.format_element(&x), g.format_element(&y));
    Ok(match job.format {
        Format::Json => pretty(&json!({"kind": kind, "x": xs, "y": ys, "polynomial": value})),
        Format::Csv => csv_rows(
            ["x", "y", "polynomial"],
            [[
                xs,
                ys,
                value.map_or_else(|| "null".into(), |p| p.to_string()),
            ]],
        ),
        Format::Text => value.map_or_else(|| "null".into(), |p| p.to_string()) + "\n",
    })
}

fn selfcheck(job: &JobConfig, g: &AffineWeylGroup, m: &PeriodicModule) -> Result<Outcome> {
    let mut checks: Vec<(&str, usize, Vec<String>)> = vec![];
    let elems = job.window.elements(g);

    let cert: Vec<String> = elems
        .iter()
        .filter_map(|x| {
            m.certify_element(x)
                .err()
                .map(|e| format!("{}: {e}", g.format_element(x)))
        })
        .collect();
    checks.push(("certification", elems.len(), cert));

    let inv = m.inversion_check(&job.window);
    let msgs = inv
        .deviations
        .iter()
        .map(|d| {
            format!(
                "({}, {}) = {}",
                g.format_element(&d.y),
                g.format_element(&d.z),
                d.value
            )
        })
        .collect();
    checks.push(("inversion", inv.pairs_checked, msgs));

    let kz = m.koszul_check(&job.window);
    let msgs = kz
        .iter()
        .map(|(y, x)| format!("({}, {})", g.format_element(y), g.format_element(x)))
        .collect();
    checks.push(("koszul", elems.len() * elems.len(), msgs));

    let poset = SemiInfinitePoset::build(g, &job.window);
    let mu = sufficiently_dominant(g, &poset.elements);
    let mut msgs = vec![];
    if !poset.is_partial_order() {
        msgs.push("relation is not a partial order".to_string());
    }
    for (i, x) in poset.elements.iter().enumerate() {
        for (j, y) in poset.elements.iter().enumerate() {
            if semiinf_leq_via_translation(g, x, y, &mu)? != poset.leq(i, j) {
                msgs.push(format!(
                    "({}, {})",
                    g.format_element(x),
                    g.format_element(y)
                ));
            }
        }
    }
    checks.push(("order", poset.elements.len().pow(2), msgs));

    let failed = checks.iter().any(|c| !c.2.is_empty());
    let body = match job.format {
        Format::Json => pretty(&json!({
            "root_datum": datum_json(g),
            "window": job.window,
            "ok": !failed,
            "checks": checks.iter().map(|(name, n, bad)| json!({
                "name": name, "checked": n, "failures": bad,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => csv_rows(
            ["check", "checked", "failures"],
            checks
                .iter()
                .map(|(name, n, bad)| [name.to_string(), n.to_string(), bad.len().to_string()]),
        ),
        Format::Text => {
            let mut s = String::new();
            for (name, n, bad) in &checks {
                let status = if bad.is_empty() { "ok" } else { "FAILED" };
                s += &format!("{name}: {status} ({n} checked)\n");
                for b in bad.iter().take(10) {
                    s += &format!("  {b}\n");
                }
            }
            s
        }
    };
    Ok(Outcome {
        body,
        code: if failed { EXIT_INTERNAL } else { EXIT_OK },
    })
}
