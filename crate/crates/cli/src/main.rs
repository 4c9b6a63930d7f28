//! `qscd`: command-line front end for the coset-state simulator.
//!
//! Every randomised command takes `--seed`; the same arguments and seed give
//! byte-identical output. Exit codes: 0 success, 1 other errors, 2 usage
//! errors, 3 promise violations, 4 tolerance failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;

use qscd::distinguisher::{BasisMeasure, Coin, Distinguisher, Omniscient};
use qscd::graph::{
    automorphisms, fixtures, koebler_reduce, Graph, PromiseInstance, QueryScheme, SearchOracle,
    DEFAULT_NODE_LIMIT, ORACLE_NODE_LIMIT,
};
use qscd::perm::KeyClass;
use qscd::pkc::{self, Ciphertext, KeyPair};
use qscd::reductions::{
    estimate_advantage, ga_attack, hybrid_to_iota, AttackParams, Ensemble, Source, TupleShape,
};
use qscd::seed::rng_from_seed;
use qscd::{selftest, Error, SecurityParam};

const AFTER_HELP: &str = "\
File formats:
  permutation  `n: i1 i2 ... in`, the images of 1..n
  key          mode line (`FF n` or `CYC n m`), then the permutation line
  ciphertext   mode line, then a QSTATE block:
               `QSTATE n m count`, then `control re im permutation` per entry
  graph        `n m`, then m lines `u v` with 1 <= u < v <= n

Exit codes: 0 ok, 1 error, 2 usage, 3 promise violation, 4 tolerance failure.";

#[derive(Parser, Debug)]
#[command(name = "qscd", version, about = "Coset-state distinguishing: protocols, reductions and checks", after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads for trial loops (results do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ff,
    Cyc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DistName {
    Omniscient,
    Coin,
    BasisMeasure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Paired,
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Planted {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Shape {
    Uniform,
    Challenge,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "ff")]
    mode: Mode,
    /// Permutation degree.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Cycle length for CYC mode.
    #[arg(long, default_value_t = 3)]
    m: usize,
}

impl ModeArgs {
    fn params(&self) -> qscd::Result<SecurityParam> {
        match self.mode {
            Mode::Ff => SecurityParam::ff(self.n),
            Mode::Cyc => SecurityParam::cyc(self.n, self.m),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a decryption key.
    Keygen {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        seed: u64,
        /// Write the key here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt a bit (FF) or a symbol (CYC) with fresh key copies.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        message: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decrypt a ciphertext file.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Full key, encryption and decryption transcript.
    Demo {
        #[command(flatten)]
        mode: ModeArgs,
        /// Message; drawn from the seed when absent.
        #[arg(long)]
        message: Option<u32>,
        #[arg(long)]
        seed: u64,
    },
    /// Decide whether a graph has a non-trivial automorphism by search.
    Ga {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Decide GA through UniqueGA_ff oracle queries, printing the query log.
    ReduceGa {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "paired")]
        scheme: Scheme,
    },
    /// Run the distinguisher-based GA attack on a promise instance.
    Attack {
        /// Built-in 14-node instance.
        #[arg(long, value_enum, conflicts_with = "graph")]
        planted: Option<Planted>,
        /// Graph file; the promise is checked by search.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "omniscient")]
        dist: DistName,
        /// Key file for the omniscient distinguisher; defaults to the YES
        /// instance's automorphism.
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        p: u64,
        #[arg(long, default_value_t = 32)]
        tuples: u64,
        #[arg(long, default_value_t = 16)]
        threshold: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        shape: Shape,
        #[arg(long)]
        seed: u64,
    },
    /// Estimate a distinguisher's advantage between two sources.
    Advantage {
        #[command(flatten)]
        mode: ModeArgs,
        /// plus, minus, iota or cyc:S.
        #[arg(long, default_value = "plus")]
        source_a: String,
        #[arg(long, default_value = "minus")]
        source_b: String,
        #[arg(long, value_enum, default_value = "basis-measure")]
        dist: DistName,
        /// Wrap the distinguisher in the hybrid construction against ι.
        #[arg(long)]
        hybrid: bool,
        /// Key file; otherwise a key is sampled from the seed. Required for
        /// the omniscient distinguisher.
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 4000)]
        trials: u64,
        #[arg(long, default_value_t = qscd::reductions::DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Run the end-to-end checks.
    Selftest {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug)]
struct ToleranceFailure;

impl std::fmt::Display for ToleranceFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("one or more checks failed")
    }
}

impl std::error::Error for ToleranceFailure {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_key(path: &Path) -> anyhow::Result<KeyPair> {
    read(path)?
        .parse()
        .with_context(|| format!("parsing key {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    read(path)?
        .parse()
        .with_context(|| format!("parsing graph {}", path.display()))
}

fn emit(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key}={value}").unwrap();
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn check_message(params: SecurityParam, message: u32) -> anyhow::Result<()> {
    let limit = match params.kind() {
        KeyClass::Ff => 2,
        KeyClass::Cyc { m } => m as u32,
    };
    if message >= limit {
        return Err(usage(format!("message {message} out of range for {params}")));
    }
    Ok(())
}

fn encrypt_message<R: Rng>(kp: &KeyPair, message: u32, rng: &mut R) -> qscd::Result<Ciphertext> {
    match kp.params().kind() {
        KeyClass::Ff => {
            let mut copy = pkc::issue_key_copy(kp, None, rng)?;
            pkc::encrypt_ff(message == 1, &mut copy)
        }
        KeyClass::Cyc { .. } => pkc::encrypt_cyc(message, pkc::issue_key_series(kp, rng)?),
    }
}

fn distinguisher(
    name: DistName,
    key: Option<&qscd::Permutation>,
) -> anyhow::Result<Box<dyn Distinguisher>> {
    Ok(match name {
        DistName::Omniscient => {
            let pi = key.ok_or_else(|| usage("the omniscient distinguisher needs a key"))?;
            Box::new(Omniscient::new(pi.clone()))
        }
        DistName::Coin => Box::new(Coin),
        DistName::BasisMeasure => Box::new(BasisMeasure),
    })
}

fn parse_source(name: &str, kp: &KeyPair, k: usize) -> anyhow::Result<Source> {
    let pi = kp.secret().clone();
    let ensemble = match name {
        "plus" => Ensemble::Plus(pi),
        "minus" => Ensemble::Minus(pi),
        "iota" => Ensemble::Iota(pi.degree()),
        other => match other.strip_prefix("cyc:").map(str::parse::<u32>) {
            Some(Ok(s)) => Ensemble::Cyc { pi, s },
            _ => return Err(usage(format!("unknown source {name:?}"))),
        },
    };
    let needs_ff = matches!(ensemble, Ensemble::Plus(_) | Ensemble::Minus(_));
    if needs_ff != (kp.params().kind() == KeyClass::Ff) && !matches!(ensemble, Ensemble::Iota(_)) {
        return Err(usage(format!("source {name:?} does not match key mode {}", kp.params())));
    }
    Ok(Source::new(ensemble, k)?)
}

fn run(cli: Cli) -> anyhow::Result<String> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut out = String::new();
    match cli.command {
        Command::Keygen { mode, seed, out: path } => {
            let params = mode.params().map_err(|e| usage(e.to_string()))?;
            let kp = pkc::keygen(params, &mut rng_from_seed(seed));
            match path {
                Some(p) => {
                    fs::write(&p, kp.to_text()).with_context(|| format!("writing {}", p.display()))?;
                    emit(&mut out, "command", "keygen");
                    emit(&mut out, "seed", seed);
                    emit(&mut out, "mode", params);
                    emit(&mut out, "key_file", p.display());
                }
                None => out.push_str(&kp.to_text()),
            }
        }
        Command::Encrypt {
            key,
            message,
            seed,
            out: path,
        } => {
            let kp = read_key(&key)?;
            check_message(kp.params(), message)?;
            let c = encrypt_message(&kp, message, &mut rng_from_seed(seed))?;
            match path {
                Some(p) => {
                    fs::write(&p, c.to_text()).with_context(|| format!("writing {}", p.display()))?;
                    emit(&mut out, "command", "encrypt");
                    emit(&mut out, "seed", seed);
                    emit(&mut out, "mode", kp.params());
                    emit(&mut out, "ciphertext_file", p.display());
                }
                None => out.push_str(&c.to_text()),
            }
        }
        Command::Decrypt {
            key,
            ciphertext,
            seed,
        } => {
            let kp = read_key(&key)?;
            let c: Ciphertext = read(&ciphertext)?
                .parse()
                .with_context(|| format!("parsing ciphertext {}", ciphertext.display()))?;
            let m = pkc::decrypt(&kp, &c, &mut rng_from_seed(seed))?;
            emit(&mut out, "command", "decrypt");
            emit(&mut out, "seed", seed);
            emit(&mut out, "mode", kp.params());
            emit(&mut out, "message", m);
        }
        Command::Demo {
            mode,
            message,
            seed,
        } => {
            let params = mode.params().map_err(|e| usage(e.to_string()))?;
            let mut rng = rng_from_seed(seed);
            let kp = pkc::keygen(params, &mut rng);
            let message = match message {
                Some(m) => m,
                None => match params.kind() {
                    KeyClass::Ff => u32::from(rng.gen::<bool>()),
                    KeyClass::Cyc { m } => rng.gen_range(0..m as u32),
                },
            };
            check_message(params, message)?;
            emit(&mut out, "command", "demo");
            emit(&mut out, "seed", seed);
            emit(&mut out, "mode", params);
            emit(&mut out, "secret", kp.secret().cycle_notation());
            let c = encrypt_message(&kp, message, &mut rng)?;
            emit(&mut out, "key_copies_sent", match params.kind() {
                KeyClass::Ff => 1,
                KeyClass::Cyc { m } => m,
            });
            emit(&mut out, "message", message);
            emit(&mut out, "ciphertext_support", c.state().support_size());
            for (b, amp) in c.state().entries() {
                writeln!(out, "amplitude {} {:+.6} {:+.6}", b.perm.cycle_notation(), amp.re, amp.im)
                    .unwrap();
            }
            let decrypted = pkc::decrypt(&kp, &c, &mut rng)?;
            emit(&mut out, "decrypted", decrypted);
            if decrypted != message {
                return Err(ToleranceFailure.into());
            }
            out.push_str("decrypted=original\n");
        }
        Command::Ga { graph } => {
            let g = read_graph(&graph)?;
            let aut = automorphisms(&g, DEFAULT_NODE_LIMIT)?;
            emit(&mut out, "command", "ga");
            emit(&mut out, "nodes", g.node_count());
            emit(&mut out, "edges", g.edge_count());
            emit(&mut out, "automorphisms", aut.order());
            if let Some(p) = aut.non_identity().next() {
                emit(&mut out, "witness", p.cycle_notation());
            }
            writeln!(out, "{}", yes_no(aut.order() > 1)).unwrap();
        }
        Command::ReduceGa { graph, scheme } => {
            let g = read_graph(&graph)?;
            let scheme = match scheme {
                Scheme::Paired => QueryScheme::Paired,
                Scheme::Direct => QueryScheme::Direct,
            };
            let outcome = koebler_reduce(&g, &mut SearchOracle::default(), scheme)?;
            emit(&mut out, "command", "reduce-ga");
            emit(&mut out, "nodes", g.node_count());
            emit(&mut out, "scheme", format!("{scheme:?}").to_lowercase());
            emit(&mut out, "complemented", outcome.complemented);
            for q in &outcome.queries {
                let back = q.back.map_or("-".to_string(), |z| z.to_string());
                writeln!(
                    out,
                    "query i={} j={} back={back} nodes={} answer={}",
                    q.i,
                    q.j,
                    q.nodes,
                    yes_no(q.answer)
                )
                .unwrap();
            }
            emit(&mut out, "queries", outcome.queries.len());
            writeln!(out, "{}", yes_no(outcome.answer)).unwrap();
        }
        Command::Attack {
            planted,
            graph,
            dist,
            key,
            k,
            p,
            tuples,
            threshold,
            shape,
            seed,
        } => {
            let inst = match (planted, graph) {
                (Some(Planted::Yes), None) => fixtures::planted_yes(),
                (Some(Planted::No), None) => fixtures::planted_no(),
                (None, Some(path)) => PromiseInstance::verify(read_graph(&path)?, ORACLE_NODE_LIMIT)?,
                _ => return Err(usage("give exactly one of --planted and --graph")),
            };
            let secret = match &key {
                Some(path) => Some(read_key(path)?.secret().clone()),
                None => match (planted, inst.automorphism()) {
                    (_, Some(pi)) => Some(pi.clone()),
                    // the trapdoor of the planted YES instance, used on the NO side too
                    (Some(Planted::No), None) => fixtures::planted_yes().automorphism().cloned(),
                    _ => None,
                },
            };
            let dist = distinguisher(dist, secret.as_ref())?;
            let params = AttackParams::new(k, p, tuples, threshold)
                .map_err(|e| usage(e.to_string()))?
                .with_shape(match shape {
                    Shape::Uniform => TupleShape::Uniform,
                    Shape::Challenge => TupleShape::Challenge,
                });
            let outcome = ga_attack(&inst, dist.as_ref(), &params, &mut rng_from_seed(seed))?;
            emit(&mut out, "command", "attack");
            emit(&mut out, "seed", seed);
            emit(&mut out, "nodes", inst.degree());
            emit(&mut out, "distinguisher", dist.name());
            emit(&mut out, "shape", format!("{shape:?}").to_lowercase());
            out.push_str(&outcome.to_text(inst.degree()));
        }
        Command::Advantage {
            mode,
            source_a,
            source_b,
            dist,
            hybrid,
            key,
            k,
            trials,
            delta,
            seed,
        } => {
            if trials == 0 || k == 0 {
                return Err(usage("--trials and --k must be positive"));
            }
            if !(delta > 0.0 && delta < 1.0) {
                return Err(usage("--delta must lie in (0, 1)"));
            }
            let mut rng = rng_from_seed(seed);
            let kp = match &key {
                Some(path) => read_key(path)?,
                None if dist == DistName::Omniscient => {
                    return Err(usage("the omniscient distinguisher needs --key"))
                }
                None => pkc::keygen(mode.params().map_err(|e| usage(e.to_string()))?, &mut rng),
            };
            let a = parse_source(&source_a, &kp, k)?;
            let b = parse_source(&source_b, &kp, k)?;
            let base = distinguisher(dist, Some(kp.secret()))?;
            let dist: Box<dyn Distinguisher> = if hybrid {
                Box::new(hybrid_to_iota(base))
            } else {
                base
            };
            let report = estimate_advantage(dist.as_ref(), &a, &b, trials, delta, &mut rng)?;
            emit(&mut out, "command", "advantage");
            emit(&mut out, "seed", seed);
            emit(&mut out, "mode", kp.params());
            emit(&mut out, "distinguisher", dist.name());
            emit(&mut out, "source_a", qscd::reductions::TupleSource::name(&a));
            emit(&mut out, "source_b", qscd::reductions::TupleSource::name(&b));
            emit(&mut out, "k", k);
            out.push_str(&report.to_text());
        }
        Command::Selftest { seed } => {
            let report = selftest::run_all(seed)?;
            out.push_str(&report.to_text());
            if !report.all_passed() {
                print!("{out}");
                return Err(ToleranceFailure.into());
            }
        }
    }
    Ok(out)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else if err.downcast_ref::<ToleranceFailure>().is_some() {
        4
    } else {
        match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
            Some(Error::PromiseViolation(_)) => 3,
            Some(Error::Parse { .. }) | Some(Error::InvalidParam(_)) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
