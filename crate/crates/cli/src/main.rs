//! `symdyn`: command-line access to the symdyn library.

mod output;

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symdyn::automata::{
    cerny_bound, error_capability, levenshtein, min_distance, shortest_sync_word,
};
use symdyn::format::{parse_code, parse_dfa, parse_sft};
use symdyn::lattice::{
    validate_parameters_with, DeltaParams, LatticeSymbolicSystem, SystemConfig, ValidationPolicy,
};
use symdyn::prng::{
    bits_to_string, distinguisher_harness, pack_bits, prf_eval, BitGenerator, ChaChaGenerator,
    ConstantGenerator, CounterGenerator, PrfKey, PrgGenerator, PrgState, StatTest,
};
use symdyn::shift::{entropy_finite_slope, entropy_transfer_matrix};
use symdyn::words::{
    count_lyndon, de_bruijn_sequence, duval_factorize, lyndon_words_dividing, Alphabet, Budget,
    DEFAULT_ENUMERATION_LIMIT,
};
use symdyn::Error;

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "symdyn", version, about = "Symbolic dynamics, combinatorics on words and lattice-symbolic generators")]
struct Cli {
    /// Emit a JSON document instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with lattice-symbolic system parameters.
    #[arg(long, global = true, env = "SYMDYN_CONFIG")]
    config: Option<PathBuf>,

    /// Largest k^n any enumeration may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    max_enumeration: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count, list or factorize Lyndon words.
    #[command(subcommand)]
    Lyndon(LyndonCmd),
    /// Print a de Bruijn sequence B(k, n).
    Debruijn {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'k')]
        k: usize,
        /// Alphabet as a string of distinct characters (default 0..k-1).
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Topological entropy of a shift of finite type (bits per symbol).
    Entropy {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::TransferMatrix)]
        method: Method,
        /// Word length for the finite-slope estimate.
        #[arg(long, default_value_t = 24)]
        n_max: usize,
    },
    /// Shortest synchronizing word of a DFA.
    Sync { file: PathBuf },
    /// Edit distance between two strings.
    Distance { u: String, v: String },
    /// Minimum distance and error capability of a block code.
    Code { file: PathBuf },
    /// Bits from the lattice-symbolic generator.
    Prg {
        /// Seed as hexadecimal (at least 16 bits).
        #[arg(long)]
        seed: String,
        #[arg(long)]
        bits: usize,
        /// Write packed bytes (MSB first) to stdout; the header goes to stderr.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Evaluate the lattice-symbolic keyed function.
    Prf {
        /// Key as hexadecimal (at least 16 bits).
        #[arg(long)]
        key: String,
        /// Input as hexadecimal.
        #[arg(long)]
        input: String,
        #[arg(long, short = 'm')]
        bits: usize,
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Check parameters against the 128-bit selection rules.
    Validate {
        #[arg(short = 'N')]
        n: u64,
        #[arg(short = 'q')]
        q: u64,
        #[arg(short = 'a', long = "alpha")]
        alpha: f64,
        #[arg(short = 'b', long = "bits", default_value_t = 128)]
        bits: u64,
        /// Constant C of the δ bound (default from config, else 0.02).
        #[arg(long)]
        c: Option<f64>,
        /// Required entropy floor (default from config, else 0.5).
        #[arg(long)]
        entropy_floor: Option<f64>,
    },
    /// Run the statistical harness on a generator.
    Test {
        #[arg(long, value_enum, default_value_t = Generator::Prg)]
        generator: Generator,
        /// Seed from which every trial's generator seed is derived.
        #[arg(long)]
        trial_seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1 << 15)]
        bits: usize,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 128)]
        block_len: usize,
        #[command(flatten)]
        system: SystemArgs,
    },
}

#[derive(Subcommand, Debug)]
enum LyndonCmd {
    /// Number of Lyndon words of length n over k letters.
    Count {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'k')]
        k: u64,
    },
    /// All Lyndon words of length n, in lexicographic order.
    List {
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Chen-Fox-Lyndon factorization of a word.
    Factorize {
        word: String,
        /// Ordered alphabet (default: the word's distinct characters, sorted).
        #[arg(long)]
        alphabet: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    TransferMatrix,
    FiniteSlope,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Generator {
    Prg,
    Chacha,
    Constant,
    Counter,
    /// The generator over the shift that only allows 0.
    Degenerate,
}

#[derive(Args, Debug, Clone, Default)]
struct SystemArgs {
    /// Ring dimension N.
    #[arg(short = 'N', long = "dimension")]
    n: Option<usize>,
    /// Prime modulus q.
    #[arg(short = 'q', long)]
    q: Option<u64>,
    /// Window radius k.
    #[arg(short = 'k', long)]
    window: Option<usize>,
    /// Shift steps between outputs (default 2k+1).
    #[arg(long)]
    step: Option<usize>,
    /// Forbidden word over -1 0 1, e.g. "1 1"; repeatable.
    #[arg(long = "forbid")]
    forbid: Vec<String>,
    #[arg(long)]
    entropy_floor: Option<f64>,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Rejected,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Report, (Report, Failure)>;

fn load_config(path: Option<&Path>) -> Result<SystemConfig, Failure> {
    let Some(path) = path else {
        return Ok(SystemConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| {
        let (line, column) = e
            .span()
            .map(|s| line_col(&text, s.start))
            .unwrap_or((1, 1));
        Failure::Lib(Error::parse(line, column, e.message().to_string()))
    })
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn decode_hex(label: &str, text: &str) -> Result<Vec<u8>, Failure> {
    let t = text.strip_prefix("0x").unwrap_or(text);
    hex::decode(t).map_err(|e| Failure::Usage(format!("{label} is not valid hexadecimal: {e}")))
}

fn alphabet_for(k: usize, chars: Option<&str>) -> Result<Arc<Alphabet>, Failure> {
    let a = match chars {
        Some(c) => {
            let a = Alphabet::new(c.chars().map(String::from))?;
            if a.len() != k {
                return Err(Failure::Usage(format!("alphabet {c:?} has {} symbols, k = {k}", a.len())));
            }
            a
        }
        None => Alphabet::numeric(k)?,
    };
    Ok(Arc::new(a))
}

fn build_system(cfg: &SystemConfig, args: &SystemArgs, r: &mut Report) -> Result<Arc<LatticeSymbolicSystem>, Failure> {
    let mut cfg = cfg.clone();
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(k) = args.window {
        cfg.window = k;
    }
    if args.step.is_some() {
        cfg.step = args.step;
    }
    if !args.forbid.is_empty() {
        cfg.forbidden = args.forbid.clone();
    }
    if let Some(f) = args.entropy_floor {
        cfg.entropy_floor = f;
    }
    let sys = LatticeSymbolicSystem::new(&cfg)?;
    echo_system(r, &cfg, &sys);
    Ok(Arc::new(sys))
}

fn echo_system(r: &mut Report, cfg: &SystemConfig, sys: &LatticeSymbolicSystem) {
    r.param("N", cfg.n)
        .param("q", cfg.q)
        .param("window", cfg.window)
        .param("step", sys.step())
        .param("embedding_scale", cfg.embedding_scale)
        .param("lambda1", cfg.lambda1)
        .param("entropy_floor", cfg.entropy_floor)
        .param("forbidden", cfg.forbidden.clone())
        .param("public_seed", cfg.public_seed.as_str())
        .param("entropy_bits_per_symbol", sys.entropy().value);
}

fn run(cli: &Cli, stdout: &mut dyn Write) -> Outcome {
    let budget = Budget::new(cli.max_enumeration);
    let mut r = Report::default();
    let result = (|| -> Result<(), Failure> {
        match &cli.command {
            Command::Lyndon(LyndonCmd::Count { n, k }) => {
                r = Report::new("lyndon count");
                r.param("n", *n).param("k", *k);
                r.put("count", count_lyndon(*n, *k)?.to_string());
            }
            Command::Lyndon(LyndonCmd::List { n, k, alphabet }) => {
                r = Report::new("lyndon list");
                r.param("n", *n).param("k", *k);
                let a = alphabet_for(*k, alphabet.as_deref())?;
                r.param("alphabet", a.to_string());
                let words: Vec<String> = lyndon_words_dividing(*n, &a, &budget)?
                    .into_iter()
                    .filter(|w| w.len() == *n as usize)
                    .map(|w| w.to_string())
                    .collect();
                r.put("words", words);
            }
            Command::Lyndon(LyndonCmd::Factorize { word, alphabet }) => {
                r = Report::new("lyndon factorize");
                r.param("word", word.as_str());
                let a = match alphabet {
                    Some(chars) => Alphabet::new(chars.chars().map(String::from))?,
                    None if word.is_empty() => return Err(Failure::Usage("empty word".into())),
                    None => Alphabet::from_chars(word)?,
                };
                let a = Arc::new(a);
                r.param("alphabet", a.to_string());
                let f = duval_factorize(&a.parse_word(word)?)?;
                r.put("factor_count", f.len());
                r.put("factors", f.to_string());
            }
            Command::Debruijn { n, k, alphabet } => {
                r = Report::new("debruijn");
                r.param("n", *n).param("k", *k);
                let a = alphabet_for(*k, alphabet.as_deref())?;
                r.param("alphabet", a.to_string());
                let seq = de_bruijn_sequence(*n, &a, &budget)?;
                let s = seq.symbols();
                let len = s.len();
                let windows: HashSet<Vec<u32>> = (0..len)
                    .map(|i| (0..*n as usize).map(|j| s[(i + j) % len]).collect())
                    .collect();
                let expected = budget.check_power(*k as u64, *n)?;
                r.put("length", len);
                r.put("sequence", seq.to_string());
                r.put("exactly_once", windows.len() == len && len as u64 == expected);
            }
            Command::Entropy { file, method, n_max } => {
                r = Report::new("entropy");
                r.param("file", file.display().to_string());
                let sft = parse_sft(&read_file(file)?)?;
                let est = match method {
                    Method::TransferMatrix => entropy_transfer_matrix(&sft)?,
                    Method::FiniteSlope => {
                        r.param("n_max", *n_max);
                        entropy_finite_slope(&sft, *n_max)?
                    }
                };
                r.param("method", est.method.to_string());
                r.put("log_base", 2u64);
                r.put("entropy", est.value);
                r.put("n_used", est.n_used);
                match est.error_bound {
                    Some(b) => r.put("error_bound", b),
                    None => r.put("error_bound", "none"),
                };
                r.put("empty_language", est.empty_language);
            }
            Command::Sync { file } => {
                r = Report::new("sync");
                r.param("file", file.display().to_string());
                let dfa = parse_dfa(&read_file(file)?)?;
                let n = dfa.state_count();
                r.put("states", n);
                r.put("bound", cerny_bound(n));
                match shortest_sync_word(&dfa)? {
                    Some(w) => {
                        r.put("synchronizing", true);
                        r.put("reset_word", w.to_string());
                        r.put("length", w.len());
                        r.put("within_bound", w.len() <= cerny_bound(n));
                        r.put("tight", w.len() == cerny_bound(n));
                    }
                    None => {
                        r.put("synchronizing", false);
                        r.put("reset_word", "none");
                    }
                }
            }
            Command::Distance { u, v } => {
                r = Report::new("distance");
                r.param("u", u.as_str()).param("v", v.as_str());
                let a: Vec<char> = u.chars().collect();
                let b: Vec<char> = v.chars().collect();
                r.put("edit_distance", levenshtein(&a, &b));
            }
            Command::Code { file } => {
                r = Report::new("code");
                r.param("file", file.display().to_string());
                let code = parse_code(&read_file(file)?)?;
                let d = min_distance(&code)?;
                r.put("codewords", code.len());
                r.put("block_length", code.block_length());
                r.put("min_distance", d);
                if d > 0 {
                    let cap = error_capability(d)?;
                    r.put("detect", cap.detect);
                    r.put("correct", cap.correct);
                }
            }
            Command::Prg { seed, bits, raw, system } => {
                r = Report::new("prg");
                r.param("seed", seed.as_str()).param("bits", *bits);
                let sys = build_system(&load_config(cli.config.as_deref())?, system, &mut r)?;
                let seed = decode_hex("seed", seed)?;
                let out = PrgState::new(sys, &seed)?.next_bits(*bits)?;
                if *raw {
                    stdout
                        .write_all(&pack_bits(&out))
                        .map_err(|e| Failure::Usage(format!("write failed: {e}")))?;
                } else {
                    r.put("output", bits_to_string(&out));
                }
            }
            Command::Prf { key, input, bits, system } => {
                r = Report::new("prf");
                r.param("key", key.as_str()).param("input", input.as_str()).param("m", *bits);
                let sys = build_system(&load_config(cli.config.as_deref())?, system, &mut r)?;
                let key = PrfKey::new(sys, &decode_hex("key", key)?)?;
                let input = decode_hex("input", input)?;
                r.put("steps", key.steps(&input));
                r.put("output", bits_to_string(&prf_eval(&key, &input, *bits)?));
            }
            Command::Validate { n, q, alpha, bits, c, entropy_floor } => {
                r = Report::new("validate");
                let cfg = load_config(cli.config.as_deref())?;
                let policy = ValidationPolicy {
                    delta: DeltaParams::new(c.unwrap_or(cfg.c))?,
                    entropy_floor: entropy_floor.unwrap_or(cfg.entropy_floor),
                };
                r.param("N", *n)
                    .param("q", *q)
                    .param("alpha", *alpha)
                    .param("security_bits", *bits)
                    .param("C", policy.delta.c())
                    .param("entropy_floor", policy.entropy_floor);
                let report = validate_parameters_with(*n, *q, *alpha, *bits, &policy);
                for cond in &report.conditions {
                    let verdict = if cond.passed { "pass" } else { "fail" };
                    r.put(&format!("condition.{}", cond.name), format!("{verdict}: {}", cond.detail));
                }
                r.put("required_dimension", report.required_dimension);
                r.put("delta", report.delta);
                r.put("theorem_estimate_bits", report.theorem_estimate_bits);
                r.put("verdict", if report.accepted { "accept" } else { "reject" });
                if !report.accepted {
                    return Err(Failure::Rejected);
                }
            }
            Command::Test { generator, trial_seed, trials, bits, alpha, block_len, system } => {
                r = Report::new("test");
                r.param("trial_seed", *trial_seed)
                    .param("trials", *trials)
                    .param("bits_per_trial", *bits)
                    .param("alpha", *alpha)
                    .param("block_len", *block_len);
                let cfg = load_config(cli.config.as_deref())?;
                let boxed: Box<dyn BitGenerator> = match generator {
                    Generator::Prg => Box::new(PrgGenerator {
                        sys: build_system(&cfg, system, &mut r)?,
                        master_seed: *trial_seed,
                    }),
                    Generator::Degenerate => {
                        let mut args = system.clone();
                        args.forbid = vec!["-1".into(), "1".into()];
                        args.entropy_floor = Some(0.0);
                        Box::new(PrgGenerator {
                            sys: build_system(&cfg, &args, &mut r)?,
                            master_seed: *trial_seed,
                        })
                    }
                    Generator::Chacha => Box::new(ChaChaGenerator { master_seed: *trial_seed }),
                    Generator::Constant => Box::new(ConstantGenerator { bit: false }),
                    Generator::Counter => Box::new(CounterGenerator),
                };
                let tests = [
                    StatTest::Monobit,
                    StatTest::Runs,
                    StatTest::BlockFrequency { block_len: *block_len },
                ];
                let report = distinguisher_harness(boxed.as_ref(), &tests, *trials, *bits, *alpha)?;
                r.put("generator", report.generator.as_str());
                r.put("band_low", report.band.0);
                r.put("band_high", report.band.1);
                for t in &report.tests {
                    r.put(&format!("{}.passes", t.test), t.passes);
                    r.put(&format!("{}.pass_fraction", t.test), t.pass_fraction);
                    r.put(&format!("{}.in_band", t.test), t.in_band);
                }
                let ok = report.all_in_band();
                r.put("verdict", if ok { "consistent" } else { "distinguished" });
                if !ok {
                    return Err(Failure::Rejected);
                }
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(r),
        Err(f) => Err((r, f)),
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Rejected => 1,
        Failure::Usage(_) => 2,
        Failure::Lib(Error::Domain(_) | Error::Construction(_)) => 2,
        Failure::Lib(Error::Resource(_)) => 3,
        Failure::Lib(Error::Parse { .. }) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut stdout = std::io::stdout().lock();
    let raw = matches!(cli.command, Command::Prg { raw: true, .. });
    let outcome = run(&cli, &mut stdout);
    let elapsed = start.elapsed().as_secs_f64();
    let (report, failure) = match outcome {
        Ok(r) => (r, None),
        Err((r, f)) => (r, Some(f)),
    };
    let rendered = report.render(cli.json);
    let header_to_stderr = raw || matches!(failure, Some(Failure::Usage(_) | Failure::Lib(_)));
    if header_to_stderr {
        eprint!("{rendered}");
    } else {
        print!("{rendered}");
    }
    eprintln!("elapsed_seconds={elapsed:.6}");
    let _ = stdout.flush();
    match failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Rejected => {}
            }
            ExitCode::from(exit_code(&f))
        }
    }
}
