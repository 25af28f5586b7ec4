//! Command-line front end: argument parsing, job execution, and the JSON
//! report printed for every command.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use repairaf::af::{Semantics, SolverOptions};
use repairaf::generate::{random_instance, rng, InstanceClass, InstanceParams};
use repairaf::io;
use repairaf::reasoning::{
    brute_force_repairs_with_ceiling, instance_digest, Reasoner, ReasoningOptions,
};
use repairaf::reductions::{
    encode_qbf_allrepair, encode_sat_rep, encode_sat_somerepair, EncodedInstance,
};
use repairaf::relational::Instance;
use repairaf::translation::build_af_raw;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "REPAIRAF_SEED";

/// Dependency file looked up by `--dir`.
pub const DEPS_FILE: &str = "deps.txt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] repairaf::Error),
    #[error("usage error: {0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "usage" => 2,
            "parse" => 3,
            "schema" => 4,
            "dependency" => 5,
            "domain" => 6,
            "precondition" => 7,
            "resource" => 8,
            "io" => 9,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Core(repairaf::Error::Parse { source_name, line, .. }) = self {
            out["source"] = json!(source_name);
            out["line"] = json!(line);
        }
        out
    }
}

/// Conflict-free and admissible sets are not repair semantics, so the
/// command line does not offer them.
fn repair_semantics(s: &str) -> Result<Semantics, String> {
    match s.parse::<Semantics>().map_err(|e| e.to_string())? {
        sem @ (Semantics::Naive | Semantics::Preferred | Semantics::Stable) => Ok(sem),
        other => Err(format!("`{}` is not a repair semantics", other.name())),
    }
}

#[derive(Debug, Parser)]
#[command(name = "repairaf", version, about = "Database repairs through argumentation frameworks")]
pub struct Cli {
    /// CSV file of one relation, named after the file stem or given as NAME=PATH.
    #[arg(long = "db", global = true, value_name = "[NAME=]PATH")]
    pub db: Vec<String>,
    /// Directory holding one CSV per relation and a deps.txt.
    #[arg(long, global = true, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    /// Dependency file.
    #[arg(long, global = true, value_name = "PATH")]
    pub deps: Option<PathBuf>,
    /// Semantics to use instead of the one picked from the dependency kinds:
    /// naive, preferred or stable.
    #[arg(long, global = true, value_parser = repair_semantics)]
    pub semantics: Option<Semantics>,
    /// Report the empty set when the semantics admits it.
    #[arg(long, global = true)]
    pub allow_empty: bool,
    /// Treat cautious queries as true when no repair exists.
    #[arg(long, global = true)]
    pub vacuous_skeptical: bool,
    /// Largest database the brute-force oracle will sweep.
    #[arg(long, global = true, default_value_t = repairaf::reasoning::DEFAULT_ORACLE_CEILING)]
    pub oracle_ceiling: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Enumerate all repairs.
    Repairs,
    /// Does a repair exist?
    Exists,
    /// Is the tuple in some repair?
    Brave { tuple: String },
    /// Is the tuple in every repair?
    Cautious { tuple: String },
    /// Is there a repair with at least K tuples? (functional dependencies only)
    SizeAtleast { k: usize },
    /// Write the framework as APX plus a JSON sidecar.
    Translate {
        #[arg(long)]
        apx: Option<PathBuf>,
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Skip pre-processing (diagnostics only).
        #[arg(long)]
        raw: bool,
    },
    /// Encode a DIMACS CNF so that the formula is satisfiable iff s_phi is in some repair.
    EncodeSat {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Encode a DIMACS CNF so that the formula is satisfiable iff a repair exists.
    EncodeSatRep {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Encode a two-block QDIMACS formula so that it is true iff s_phi is in every repair.
    EncodeQbf {
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Enumerate repairs by exhaustive search.
    Oracle,
    /// Compare the pipeline with the exhaustive search.
    Verify {
        /// Also check this many seeded random instances per class.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Repairs => "repairs",
            Command::Exists => "exists",
            Command::Brave { .. } => "brave",
            Command::Cautious { .. } => "cautious",
            Command::SizeAtleast { .. } => "size-atleast",
            Command::Translate { .. } => "translate",
            Command::EncodeSat { .. } => "encode-sat",
            Command::EncodeSatRep { .. } => "encode-sat-rep",
            Command::EncodeQbf { .. } => "encode-qbf",
            Command::Oracle => "oracle",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Everything one invocation needs, after flags and environment are merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobConfig {
    /// `(relation name, CSV path)` pairs.
    pub database_paths: Vec<(String, PathBuf)>,
    pub dependency_path: Option<PathBuf>,
    pub command: Command,
    pub semantics_override: Option<Semantics>,
    pub allow_empty: bool,
    pub vacuous_skeptical: bool,
    pub oracle_ceiling: usize,
    pub seed: u64,
}

impl JobConfig {
    pub fn from_cli(cli: Cli, env_seed: Option<&str>) -> Result<Self, CliError> {
        let mut database_paths = Vec::new();
        let mut dependency_path = cli.deps;
        if let Some(dir) = &cli.dir {
            let entries = fs::read_dir(dir).map_err(|e| repairaf::Error::Io {
                path: dir.clone(),
                source: e,
            })?;
            let mut csvs: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .collect();
            csvs.sort();
            for p in csvs {
                database_paths.push((io::relation_name(&p)?, p));
            }
            dependency_path.get_or_insert_with(|| dir.join(DEPS_FILE));
        }
        for spec in &cli.db {
            match spec.split_once('=') {
                Some((name, path)) if !name.is_empty() => {
                    database_paths.push((name.to_string(), PathBuf::from(path)))
                }
                _ => {
                    let path = PathBuf::from(spec);
                    database_paths.push((io::relation_name(&path)?, path));
                }
            }
        }
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}=`{s}` is not a number")))?,
            None => cli.seed,
        };
        Ok(JobConfig {
            database_paths,
            dependency_path,
            command: cli.command,
            semantics_override: cli.semantics,
            allow_empty: cli.allow_empty,
            vacuous_skeptical: cli.vacuous_skeptical,
            oracle_ceiling: cli.oracle_ceiling,
            seed,
        })
    }

    fn options(&self) -> ReasoningOptions {
        ReasoningOptions {
            semantics: self.semantics_override,
            solver: SolverOptions {
                allow_empty: self.allow_empty,
                vacuous_skeptical: self.vacuous_skeptical,
            },
        }
    }

    fn load(&self) -> Result<Instance, CliError> {
        if self.database_paths.is_empty() {
            return Err(CliError::Usage("no database given (use --db or --dir)".into()));
        }
        let db = io::load_database(
            self.database_paths
                .iter()
                .map(|(name, path)| (name.clone(), path.as_path())),
        )?;
        let deps = match &self.dependency_path {
            Some(p) => io::parse_dependencies_file(p)?,
            None => Vec::new(),
        };
        Ok(Instance::new(db, deps)?)
    }
}

/// The JSON document printed on success.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub instance_digest: String,
    pub answer: Value,
    pub repairs: Vec<Vec<String>>,
    pub removed_tuples: Vec<String>,
    pub stats: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

fn stats(reasoner: &Reasoner, cfg: &JobConfig) -> Value {
    let mut s = serde_json::to_value(reasoner.stats()).expect("stats serialise");
    s["seed"] = json!(cfg.seed);
    s
}

fn report(command: &'static str, reasoner: &Reasoner, inst: &Instance, cfg: &JobConfig) -> Report {
    Report {
        command,
        instance_digest: instance_digest(inst),
        answer: Value::Null,
        repairs: Vec::new(),
        removed_tuples: reasoner.removed_tuples().to_vec(),
        stats: stats(reasoner, cfg),
        details: None,
    }
}

pub fn run_command(cfg: &JobConfig) -> Result<Report, CliError> {
    let name = cfg.command.name();
    match &cfg.command {
        Command::EncodeSat { input, out_dir } => {
            let phi = io::parse_dimacs(&read(input)?, &input.display().to_string())?;
            return emit_encoding(name, &encode_sat_somerepair(&phi)?, out_dir, cfg);
        }
        Command::EncodeSatRep { input, out_dir } => {
            let phi = io::parse_dimacs(&read(input)?, &input.display().to_string())?;
            return emit_encoding(name, &encode_sat_rep(&phi)?, out_dir, cfg);
        }
        Command::EncodeQbf { input, out_dir } => {
            let phi = io::parse_qdimacs(&read(input)?, &input.display().to_string())?;
            return emit_encoding(name, &encode_qbf_allrepair(&phi)?, out_dir, cfg);
        }
        Command::Verify { random } if cfg.database_paths.is_empty() => {
            return verify_random(*random, cfg);
        }
        _ => {}
    }

    let inst = cfg.load()?;
    let mut reasoner = Reasoner::with_options(&inst, cfg.options())?;
    let mut out = report(name, &reasoner, &inst, cfg);
    match &cfg.command {
        Command::Repairs => {
            let r = reasoner.enumerate_repairs();
            out.answer = json!(!r.is_empty());
            out.repairs = r.repairs;
        }
        Command::Exists => {
            let answer = reasoner.rep_exists();
            out.answer = json!(answer);
            if answer {
                out.repairs.extend(reasoner.witness(None)?);
            }
        }
        Command::Brave { tuple } => {
            let answer = reasoner.some_repair(tuple)?;
            out.answer = json!(answer);
            if answer {
                out.repairs.extend(reasoner.witness(Some(tuple))?);
            }
        }
        Command::Cautious { tuple } => {
            out.answer = json!(reasoner.all_repair(tuple)?);
        }
        Command::SizeAtleast { k } => {
            out.answer = json!(reasoner.repair_at_least(*k)?);
        }
        Command::Translate { apx, sidecar, raw } => {
            let result = if *raw {
                build_af_raw(&inst)?
            } else {
                reasoner.translation().clone()
            };
            let mut details = json!({ "sidecar": io::sidecar(&result)? });
            match apx {
                Some(p) => {
                    io::export_apx(&result, p)?;
                    details["apx_path"] = json!(p);
                }
                None => details["apx"] = json!(io::apx_string(&result.framework)?),
            }
            if let Some(p) = sidecar {
                io::write_sidecar(&result, p)?;
                details["sidecar_path"] = json!(p);
            }
            out.answer = json!(true);
            out.removed_tuples = result.removed_tuples.clone();
            out.stats["arguments"] = json!(result.framework.len());
            out.stats["attacks"] = json!(result.framework.attack_count());
            out.details = Some(details);
        }
        Command::Oracle => {
            let r = brute_force_repairs_with_ceiling(&inst, cfg.oracle_ceiling)?;
            out.answer = json!(!r.is_empty());
            out.repairs = r.repairs;
        }
        Command::Verify { random } => {
            let mut disagreements = check_instance(&inst, cfg)?;
            let pipeline = reasoner.enumerate_repairs();
            let mut details = json!({ "disagreements": disagreements });
            if *random > 0 {
                let sampled = verify_random(*random, cfg)?;
                if sampled.answer != json!(true) {
                    disagreements.push("random samples".into());
                }
                details["random"] = sampled.details.unwrap_or_default();
            }
            out.answer = json!(disagreements.is_empty());
            out.repairs = pipeline.repairs;
            out.details = Some(details);
        }
        Command::EncodeSat { .. } | Command::EncodeSatRep { .. } | Command::EncodeQbf { .. } => {
            unreachable!("handled above")
        }
    }
    // search effort accumulated by the queries above
    let written = out.stats.clone();
    out.stats = stats(&reasoner, cfg);
    if let Command::Translate { .. } = cfg.command {
        out.stats["arguments"] = written["arguments"].clone();
        out.stats["attacks"] = written["attacks"].clone();
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Core(repairaf::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| {
        CliError::Core(repairaf::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn emit_encoding(
    command: &'static str,
    enc: &EncodedInstance,
    out_dir: &Path,
    cfg: &JobConfig,
) -> Result<Report, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| repairaf::Error::Io {
        path: out_dir.to_path_buf(),
        source: e,
    })?;
    let mut files = Vec::new();
    for rel in enc.instance.database().relations() {
        let path = out_dir.join(format!("{}.csv", rel.name()));
        write(&path, &io::csv_string(rel))?;
        files.push(path);
    }
    let deps_path = out_dir.join(DEPS_FILE);
    write(&deps_path, &io::dependencies_string(enc.instance.dependencies()))?;
    files.push(deps_path);
    let db = enc.instance.database();
    Ok(Report {
        command,
        instance_digest: instance_digest(&enc.instance),
        answer: Value::Null,
        repairs: Vec::new(),
        removed_tuples: Vec::new(),
        stats: json!({
            "tuples": db.len(),
            "attributes": db.relations().map(|r| r.schema().len()).sum::<usize>(),
            "dependencies": enc.instance.dependencies().len(),
            "seed": cfg.seed,
        }),
        details: Some(json!({
            "distinguished_tuple": enc.distinguished_tuple,
            "variable_tuple_map": enc.variable_tuple_map,
            "files": files,
        })),
    })
}

/// Pipeline-versus-oracle discrepancies on one instance, as readable lines.
fn check_instance(inst: &Instance, cfg: &JobConfig) -> Result<Vec<String>, CliError> {
    let oracle = brute_force_repairs_with_ceiling(inst, cfg.oracle_ceiling)?;
    let mut reasoner = Reasoner::with_options(inst, cfg.options())?;
    let mut out = Vec::new();
    let pipeline = reasoner.enumerate_repairs();
    if pipeline != oracle {
        out.push(format!(
            "repairs: pipeline {:?}, oracle {:?}",
            pipeline.repairs, oracle.repairs
        ));
    }
    if reasoner.rep_exists() == oracle.is_empty() {
        out.push("exists".into());
    }
    for id in inst.database().tuple_ids() {
        if reasoner.some_repair(&id)? != oracle.in_some(&id) {
            out.push(format!("brave {id}"));
        }
        let cautious = if oracle.is_empty() {
            cfg.vacuous_skeptical
        } else {
            oracle.in_all(&id)
        };
        if reasoner.all_repair(&id)? != cautious {
            out.push(format!("cautious {id}"));
        }
    }
    Ok(out)
}

fn verify_random(samples: usize, cfg: &JobConfig) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(CliError::Usage(
            "verify needs a database or --random <N>".into(),
        ));
    }
    let mut r = rng(cfg.seed);
    let params = InstanceParams::default();
    let mut per_class = serde_json::Map::new();
    let mut total = 0;
    for class in InstanceClass::ALL {
        let mut failures = Vec::new();
        for k in 0..samples {
            let inst = random_instance(&mut r, class, &params);
            let problems = check_instance(&inst, cfg)?;
            if !problems.is_empty() {
                failures.push(json!({ "sample": k, "problems": problems }));
            }
        }
        total += failures.len();
        per_class.insert(
            format!("{class:?}"),
            json!({ "samples": samples, "failures": failures }),
        );
    }
    Ok(Report {
        command: "verify",
        instance_digest: String::new(),
        answer: json!(total == 0),
        repairs: Vec::new(),
        removed_tuples: Vec::new(),
        stats: json!({ "seed": cfg.seed, "samples": samples * InstanceClass::ALL.len() }),
        details: Some(json!({ "classes": per_class })),
    })
}

/// Parses `args`, runs the job, and returns the exit code together with the
/// text for stdout and stderr.
pub fn main_with<I, T>(args: I, env_seed: Option<&str>) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                let err = CliError::Usage(text.trim().to_string());
                (err.exit_code(), String::new(), pretty(&err.to_json()))
            };
        }
    };
    match JobConfig::from_cli(cli, env_seed).and_then(|cfg| run_command(&cfg)) {
        Ok(report) => (0, pretty(&report.to_json()), String::new()),
        Err(e) => (e.exit_code(), String::new(), pretty(&e.to_json())),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serialises");
    s.push('\n');
    s
}
