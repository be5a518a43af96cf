use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::catalog::{self, Built};
use crate::error::{Error, Result};
use crate::knapsack::opt_knapsack;
use crate::lab::{
    approx_ratio, audit_kqus, audit_strategyproofness, enumerate_pure_nash, eval_certificate,
    AuditOptions, AuditStatus, AuditVerdict, CertParams, Family, KqusMechanism, NashOptions,
    PoolConfig, DEFAULT_PROFILE_CAP, DEFAULT_SIZE_GRID, DEFAULT_SUBSET_CAP,
};
use crate::mechanisms::{equal_utility_detailed, pacify_detailed, EqualUtilityBranch, MechanismId};
use crate::model::{Instance, Model};
use crate::program::check_reduction;
use crate::rational::Rational;

use super::format::{parse_document, serialize};
use super::records::{self, Records};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_UNEXPECTED_VERDICT: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "sknap",
    version,
    about = "Exact knapsack mechanisms for strategic item owners"
)]
struct Cli {
    /// Also write one JSON record per result line to this file.
    #[arg(long, global = true, value_name = "PATH")]
    records: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal packing of all items in an instance file.
    Solve { file: PathBuf },
    /// Run a mechanism on the truthful profile.
    Run {
        mechanism: String,
        file: PathBuf,
        #[arg(long)]
        alpha: Option<Rational>,
        /// Draw this many outcomes for illustration.
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Optimal welfare over the mechanism's expected welfare.
    Ratio {
        mechanism: String,
        file: PathBuf,
        #[arg(long)]
        alpha: Option<Rational>,
    },
    /// Search for a profitable unilateral misreport.
    Audit {
        mechanism: String,
        file: PathBuf,
        #[arg(long)]
        alpha: Option<Rational>,
        #[command(flatten)]
        space: SpaceArgs,
        /// Only let these agents deviate (comma separated, 1-based).
        #[arg(long, value_delimiter = ',')]
        agents: Option<Vec<usize>>,
        /// Size grid resolution for size-report instances.
        #[arg(long, default_value_t = DEFAULT_SIZE_GRID)]
        grid: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Enumerate pure Nash equilibria of the report game.
    Nash {
        mechanism: String,
        file: PathBuf,
        #[arg(long)]
        alpha: Option<Rational>,
        #[command(flatten)]
        space: SpaceArgs,
        /// Largest number of profiles to examine.
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Evaluate a lower-bound certificate (thm5 .. thm10).
    Certify {
        family: String,
        #[arg(long)]
        r: Option<Rational>,
        #[arg(long)]
        t: Option<Rational>,
        #[arg(short = 'M', long = "M")]
        m: Option<i64>,
        #[arg(long)]
        eps: Option<Rational>,
        /// Verdict that counts as success.
        #[arg(long, value_enum, default_value_t = Expect::Infeasible)]
        expect: Expect,
    },
    /// Decide "knapsack optimum >= k" through the PROGRAM reduction and directly.
    Reduce {
        #[arg(long)]
        k: Rational,
        /// Instance file with capacity 1/2; the items of all agents form the knapsack.
        file: PathBuf,
    },
    /// Named instances.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List,
    Build {
        name: String,
        /// Parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_key_value)]
        params: Vec<(String, String)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct SpaceArgs {
    /// Override every agent's manipulation model.
    #[arg(long)]
    model: Option<Model>,
    /// Fake values (comma separated); defaults to the instance's values plus one above the max.
    #[arg(long, value_delimiter = ',')]
    pool_values: Option<Vec<Rational>>,
    /// Fake sizes (comma separated); defaults to the instance's sizes plus C - s(X_i) and C.
    #[arg(long, value_delimiter = ',')]
    pool_sizes: Option<Vec<Rational>>,
    /// Most fake items per report.
    #[arg(long, default_value_t = 2)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    subset_cap: usize,
}

impl SpaceArgs {
    fn pool(&self) -> PoolConfig {
        PoolConfig {
            values: self.pool_values.clone(),
            sizes: self.pool_sizes.clone(),
            budget: self.budget,
            subset_cap: self.subset_cap,
        }
    }

    fn apply(&self, inst: Instance) -> Instance {
        match self.model {
            Some(m) => inst.with_models(m),
            None => inst,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Expect {
    Infeasible,
    Feasible,
    Any,
}

fn parse_key_value(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn load(path: &Path) -> Result<Built> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Field {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_document(&text).map_err(|e| match e {
        Error::Syntax { position, message } => Error::Field {
            field: path.display().to_string(),
            message: format!("{position}: {message}"),
        },
        other => other,
    })
}

fn load_items(path: &Path) -> Result<Instance> {
    match load(path)? {
        Built::Items(inst) => Ok(inst),
        Built::Kqus(k) => Ok(k.as_instance()),
    }
}

struct Session<'a> {
    out: &'a mut dyn Write,
    records: Records,
}

macro_rules! say {
    ($s:expr, $($arg:tt)*) => {
        writeln!($s.out, $($arg)*)?
    };
}

/// Runs the command line and returns the process exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let records_path = cli.records.clone();
    let mut session = Session {
        out: stdout,
        records: Records::default(),
    };
    let result = session.dispatch(cli.command).and_then(|code| {
        if let Some(path) = &records_path {
            session.records.save(path)?;
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

impl Session<'_> {
    fn dispatch(&mut self, command: Command) -> Result<i32> {
        match command {
            Command::Solve { file } => self.solve(&file),
            Command::Run {
                mechanism,
                file,
                alpha,
                sample,
                seed,
            } => self.run(&mechanism, &file, alpha, sample, seed),
            Command::Ratio {
                mechanism,
                file,
                alpha,
            } => self.ratio(&mechanism, &file, alpha),
            Command::Audit {
                mechanism,
                file,
                alpha,
                space,
                agents,
                grid,
                jobs,
            } => self.audit(&mechanism, &file, alpha, &space, agents, grid, jobs),
            Command::Nash {
                mechanism,
                file,
                alpha,
                space,
                cap,
                jobs,
            } => self.nash(&mechanism, &file, alpha, &space, cap, jobs),
            Command::Certify {
                family,
                r,
                t,
                m,
                eps,
                expect,
            } => self.certify(&family, r, t, m, eps, expect),
            Command::Reduce { k, file } => self.reduce(&k, &file),
            Command::Catalog(CatalogCommand::List) => self.catalog_list(),
            Command::Catalog(CatalogCommand::Build { name, params, out }) => {
                self.catalog_build(&name, params, out.as_deref())
            }
        }
    }

    fn solve(&mut self, file: &Path) -> Result<i32> {
        let inst = load_items(file)?;
        let opt = opt_knapsack(&inst.union(), inst.capacity())?;
        say!(self, "optimum: {}", opt.chosen);
        say!(self, "value: {}", opt.value);
        say!(self, "size: {}", opt.size);
        self.records.push(json!({
            "record": "solve",
            "chosen": records::set_json(&opt.chosen),
            "value": opt.value.to_string(),
            "size": opt.size.to_string(),
        }));
        Ok(EXIT_OK)
    }

    fn run(
        &mut self,
        mechanism: &str,
        file: &Path,
        alpha: Option<Rational>,
        sample: Option<usize>,
        seed: u64,
    ) -> Result<i32> {
        let mech = MechanismId::parse(mechanism, alpha)?;
        let inst = load_items(file)?;
        let truth = inst.truthful();
        let cap = inst.capacity();
        let dist = mech.run(&truth, cap)?;
        let welfare = inst.welfare(&dist);
        say!(self, "mechanism: {mech}");
        let branch = match &mech {
            MechanismId::EqualUtility(a) => {
                Some(match equal_utility_detailed(&truth, cap, a)?.branch {
                    EqualUtilityBranch::OwnOptimum { agent } => format!("optimum of agent {agent}"),
                    EqualUtilityBranch::Program => "program".to_string(),
                })
            }
            MechanismId::PacifyTheLiar(a) => {
                Some(format!("{:?}", pacify_detailed(&truth, cap, a)?.branch).to_lowercase())
            }
            _ => None,
        };
        if let Some(b) = &branch {
            say!(self, "branch: {b}");
        }
        say!(self, "outcome: {dist}");
        say!(self, "expected welfare: {welfare}");
        let mut rec = json!({
            "record": "run",
            "mechanism": mech.name(),
            "distribution": records::distribution_json(&dist),
            "welfare": welfare.to_string(),
        });
        if let Some(a) = mech.alpha() {
            rec["alpha"] = json!(a.to_string());
        }
        if let Some(b) = branch {
            rec["branch"] = json!(b);
        }
        self.records.push(rec);
        if let Some(n) = sample {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for _ in 0..n {
                let drawn = dist.sample_with(rng.random::<f64>());
                let idx = dist
                    .atoms()
                    .iter()
                    .position(|(s, _)| s == drawn)
                    .expect("sampled atom belongs to the distribution");
                *counts.entry(idx).or_default() += 1;
            }
            say!(
                self,
                "samples (illustration only, not authoritative): {n} draws, seed {seed}"
            );
            let mut drawn = Vec::new();
            for (idx, (set, _)) in dist.atoms().iter().enumerate() {
                let c = counts.get(&idx).copied().unwrap_or(0);
                say!(self, "  {set}: {c}");
                drawn.push(json!({ "set": records::set_json(set), "count": c }));
            }
            self.records.push(json!({
                "record": "sample",
                "authoritative": false,
                "draws": n,
                "seed": seed,
                "counts": drawn,
            }));
        }
        Ok(EXIT_OK)
    }

    fn ratio(&mut self, mechanism: &str, file: &Path, alpha: Option<Rational>) -> Result<i32> {
        let mech = MechanismId::parse(mechanism, alpha)?;
        let inst = load_items(file)?;
        let dist = mech.run(&inst.truthful(), inst.capacity())?;
        let opt = opt_knapsack(&inst.union(), inst.capacity())?.value;
        let welfare = inst.welfare(&dist);
        let ratio = approx_ratio(&mech, &inst)?;
        say!(self, "mechanism: {mech}");
        say!(self, "optimal welfare: {opt}");
        say!(self, "expected welfare: {welfare}");
        say!(self, "ratio: {ratio}");
        self.records.push(json!({
            "record": "ratio",
            "mechanism": mech.name(),
            "opt_welfare": opt.to_string(),
            "welfare": welfare.to_string(),
            "ratio": records::ratio_json(&ratio),
        }));
        Ok(EXIT_OK)
    }

    #[allow(clippy::too_many_arguments)]
    fn audit(
        &mut self,
        mechanism: &str,
        file: &Path,
        alpha: Option<Rational>,
        space: &SpaceArgs,
        agents: Option<Vec<usize>>,
        grid: u32,
        jobs: usize,
    ) -> Result<i32> {
        let mech = MechanismId::parse(mechanism, alpha)?;
        let verdict = match load(file)? {
            Built::Items(inst) => {
                let inst = space.apply(inst);
                let options = AuditOptions {
                    pool: space.pool(),
                    agents,
                    jobs,
                };
                audit_strategyproofness(&mech, &inst, &options)?
            }
            Built::Kqus(k) => audit_kqus(KqusMechanism::from_mechanism(&mech)?, &k, grid, jobs)?,
        };
        self.print_audit(&mech, &verdict)?;
        self.records
            .push(records::audit_json(mech.name(), &verdict));
        Ok(if verdict.is_violation() {
            EXIT_VIOLATION
        } else {
            EXIT_OK
        })
    }

    fn print_audit(&mut self, mech: &MechanismId, verdict: &AuditVerdict) -> Result<()> {
        say!(self, "mechanism: {mech}");
        say!(self, "deviations checked: {}", verdict.deviations_checked);
        say!(
            self,
            "coverage: {}",
            if verdict.complete {
                "exhaustive"
            } else {
                "refutation-only (finite deviation pool)"
            }
        );
        match &verdict.status {
            AuditStatus::NoViolationFound => say!(self, "verdict: no violation found"),
            AuditStatus::Violation(w) => {
                say!(self, "verdict: violation");
                say!(self, "agent: {}", w.agent);
                say!(self, "report: {}", w.deviation);
                say!(self, "truthful utility: {}", w.truthful_utility);
                say!(self, "deviating utility: {}", w.deviating_utility);
                say!(self, "gain: {}", w.gain);
            }
        }
        Ok(())
    }

    fn nash(
        &mut self,
        mechanism: &str,
        file: &Path,
        alpha: Option<Rational>,
        space: &SpaceArgs,
        cap: usize,
        jobs: usize,
    ) -> Result<i32> {
        let mech = MechanismId::parse(mechanism, alpha)?;
        let inst = match load(file)? {
            Built::Items(inst) => space.apply(inst),
            Built::Kqus(_) => {
                return Err(Error::param("nash works on item instances only"));
            }
        };
        let options = NashOptions {
            pool: space.pool(),
            profile_cap: cap,
            jobs,
        };
        let report = enumerate_pure_nash(&mech, &inst, &options)?;
        say!(self, "mechanism: {mech}");
        say!(
            self,
            "profiles: {} ({})",
            report.profiles_checked,
            if report.complete {
                "exhaustive"
            } else {
                "finite deviation pool"
            }
        );
        say!(self, "optimal welfare: {}", report.opt_welfare);
        say!(self, "equilibria: {}", report.equilibria.len());
        for e in &report.equilibria {
            let shown: Vec<String> = e.profile.0.iter().map(ToString::to_string).collect();
            say!(
                self,
                "  {}  welfare {}  ratio {}",
                shown.join(" | "),
                e.welfare,
                e.ratio
            );
        }
        match &report.worst_ratio {
            Some(w) => say!(self, "worst ratio: {w}"),
            None => say!(self, "worst ratio: none (no pure equilibrium)"),
        }
        self.records.push(records::nash_json(mech.name(), &report));
        Ok(EXIT_OK)
    }

    fn certify(
        &mut self,
        family: &str,
        r: Option<Rational>,
        t: Option<Rational>,
        m: Option<i64>,
        eps: Option<Rational>,
        expect: Expect,
    ) -> Result<i32> {
        let family: Family = family.parse()?;
        let ratio = match (r, t) {
            (Some(x), None) | (None, Some(x)) => x,
            (Some(_), Some(_)) => return Err(Error::param("give either --r or --t, not both")),
            (None, None) => return Err(Error::param("missing --r (or --t)")),
        };
        let params = CertParams { ratio, m, eps };
        let cert = eval_certificate(family, &params)?;
        say!(self, "family: {} ({})", family, family.description());
        for (k, v) in &cert.params {
            say!(self, "{k} = {v}");
        }
        for (k, v) in &cert.bounds {
            say!(self, "{k} = {v}");
        }
        say!(self, "{}", cert.verdict);
        self.records.push(records::certificate_json(&cert));
        let ok = match expect {
            Expect::Infeasible => cert.verdict.is_infeasible(),
            Expect::Feasible => !cert.verdict.is_infeasible(),
            Expect::Any => true,
        };
        Ok(if ok { EXIT_OK } else { EXIT_UNEXPECTED_VERDICT })
    }

    fn reduce(&mut self, k: &Rational, file: &Path) -> Result<i32> {
        let inst = load_items(file)?;
        if inst.capacity() != &Rational::half() {
            return Err(Error::param(format!(
                "reduce expects a knapsack of capacity 1/2, got {}",
                inst.capacity()
            )));
        }
        let check = check_reduction(&inst.union(), k)?;
        let yes = |b: bool| if b { "yes" } else { "no" };
        say!(self, "k = {k}");
        say!(self, "knapsack optimum: {}", check.knapsack_optimum);
        say!(
            self,
            "program objective: {} (2k = {})",
            check.program_objective,
            Rational::integer(2) * k
        );
        say!(
            self,
            "knapsack optimum >= k: {}",
            yes(check.knapsack_reaches_k)
        );
        say!(
            self,
            "program objective = 2k: {}",
            yes(check.program_reaches_2k)
        );
        say!(self, "consistent: {}", yes(check.agrees()));
        self.records.push(json!({
            "record": "reduce",
            "k": k.to_string(),
            "knapsack_optimum": check.knapsack_optimum.to_string(),
            "program_objective": check.program_objective.to_string(),
            "knapsack_reaches_k": check.knapsack_reaches_k,
            "program_reaches_2k": check.program_reaches_2k,
        }));
        if !check.agrees() {
            return Err(Error::Internal("reduction answers disagree".into()));
        }
        Ok(EXIT_OK)
    }

    fn catalog_list(&mut self) -> Result<i32> {
        for e in catalog::list() {
            let params: Vec<String> = e
                .params
                .iter()
                .map(|p| format!("{}={} ({})", p.name, p.default, p.domain))
                .collect();
            say!(self, "{}", e.name);
            if !params.is_empty() {
                say!(self, "  params: {}", params.join("; "));
            }
            say!(self, "  {}", e.summary);
            self.records.push(json!({
                "record": "catalog-entry",
                "name": e.name,
                "params": e.params.iter().map(|p| json!({
                    "name": p.name, "default": p.default, "domain": p.domain,
                })).collect::<Vec<_>>(),
            }));
        }
        Ok(EXIT_OK)
    }

    fn catalog_build(
        &mut self,
        name: &str,
        params: Vec<(String, String)>,
        out: Option<&Path>,
    ) -> Result<i32> {
        let map: BTreeMap<String, String> = params.into_iter().collect();
        let built = catalog::build(name, &map)?;
        let text = serialize(&built);
        match out {
            Some(path) => {
                std::fs::write(path, &text)?;
                say!(self, "wrote {} to {}", name, path.display());
            }
            None => write!(self.out, "{text}")?,
        }
        self.records.push(json!({
            "record": "catalog-build",
            "name": name,
            "params": map,
        }));
        Ok(EXIT_OK)
    }
}
