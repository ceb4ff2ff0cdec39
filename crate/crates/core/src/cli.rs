//! The `lzsuf` command-line tool.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error
//! (including empty input), 3 I/O error or malformed stream.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::codec;
use crate::lz77::factorize_lz77_traced;
use crate::lz78::factorize_lz78_traced;
use crate::oracle;
use crate::{Algorithm, Epsilon, Error, Factor, TextBuffer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Above this length `verify` checks LZ77 against the suffix-tree oracle
/// instead of the quadratic scan.
const NAIVE_LZ77_LIMIT: usize = 1 << 12;

#[derive(Parser, Debug)]
#[command(name = "lzsuf", version, about = "LZ77/LZ78 factorization in compact working space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factorize a file and write the factor stream.
    Compress {
        #[command(flatten)]
        text: TextArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild the original file from a factor stream.
    Decompress {
        /// Stream file, or `-` for stdin.
        input: PathBuf,
        /// Leave out the end-of-text sentinel.
        #[arg(long)]
        strip_sentinel: bool,
        /// Write symbols as little-endian 32-bit words.
        #[arg(long)]
        u32: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print factorization counts, bound checks and space usage.
    Stats {
        #[command(flatten)]
        text: TextArgs,
    },
    /// Compare the factorization against a brute-force reference.
    Verify {
        #[command(flatten)]
        text: TextArgs,
        #[arg(long, hide = true)]
        fault_inject: bool,
    },
}

#[derive(Args, Debug)]
struct TextArgs {
    /// Input file, or `-` for stdin.
    input: PathBuf,
    #[arg(long, default_value = "lz77")]
    algo: Algorithm,
    /// Helper-array fraction as NUM/DEN.
    #[arg(long, default_value = "1/1")]
    epsilon: Epsilon,
    /// Read the input as little-endian 32-bit words.
    #[arg(long)]
    u32: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Range { .. } | Error::Domain(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Io(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| io_failure(path, e))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| io_failure(path, e))
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| io_failure(p, e)),
        None => stdout
            .write_all(bytes)
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn load_text(args: &TextArgs) -> Result<TextBuffer, Failure> {
    let bytes = read_input(&args.input)?;
    if bytes.is_empty() {
        return Err(Failure::Usage("input is empty".into()));
    }
    if args.u32 {
        if bytes.len() % 4 != 0 {
            return Err(Failure::Usage(
                "--u32 input length is not a multiple of 4".into(),
            ));
        }
        let words: Vec<u32> = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(TextBuffer::from_symbols(&words)?)
    } else {
        Ok(TextBuffer::from_bytes(&bytes))
    }
}

fn compress(text: &TextArgs, output: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let t = load_text(text)?;
    let factors = text.algo.factorize(&t, text.epsilon)?;
    let stream = codec::encode(text.algo, text.epsilon, t.len(), &factors);
    write_output(output, &stream, stdout)
}

fn decompress(
    input: &Path,
    strip: bool,
    wide: bool,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let bytes = read_input(input)?;
    let (header, factors) = codec::decode(&bytes)?;
    let mut symbols = codec::expand(header.algorithm, &factors)?;
    if strip {
        symbols.pop();
    }
    let mut out = Vec::with_capacity(symbols.len() * if wide { 4 } else { 1 });
    for &s in &symbols {
        // the sentinel is written as a zero symbol
        let v = s.saturating_sub(1);
        if wide {
            out.extend_from_slice(&v.to_le_bytes());
        } else {
            let b = u8::try_from(v).map_err(|_| {
                Failure::Io(format!("symbol {v} does not fit a byte; use --u32"))
            })?;
            out.push(b);
        }
    }
    write_output(output, &out, stdout)
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn stats(text: &TextArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let t = load_text(text)?;
    let n = t.len();
    let mut lines = vec![
        format!("algo={}", text.algo),
        format!("epsilon={}", text.epsilon),
        format!("n={n}"),
        format!("sigma={}", t.sigma()),
    ];
    let clock = Instant::now();
    let space = match text.algo {
        Algorithm::Lz78 => {
            let (f, tr) = factorize_lz78_traced(&t, text.epsilon)?;
            let a = &tr.audit;
            lines.extend([
                format!("z={}", f.z()),
                format!("z_i={}", a.z_i),
                format!("nodes={}", tr.node_count),
                format!("v_xi={}", tr.vxi.len()),
                format!("delta={}", tr.delta),
                format!("e_delta={}", tr.large_edges),
                format!("e_delta_leaf={}", a.large_leaf_edges),
                format!("e_delta_bound={:.3}", a.large_edge_bound),
                format!("check.z_plus_z_i_le_n={}", pass(a.z_plus_zi_ok)),
                format!("check.counter_bounds={}", pass(a.counter_violations == 0)),
                format!("check.trie_height={}", pass(a.height_violations == 0)),
                format!("check.large_edges={}", pass(a.large_edges_ok)),
            ]);
            tr.space
        }
        algo => {
            let (f, tr) = factorize_lz77_traced(&t, text.epsilon, algo == Algorithm::Lz77Classic)?;
            let steps_ok = tr.parent_steps.iter().all(|&s| s <= tr.node_count);
            lines.extend([
                format!("z={}", f.z()),
                format!("z_r={}", tr.z_r),
                format!("nodes={}", tr.node_count),
                format!("v_r={}", tr.referred_nodes),
                format!("d={}", tr.d_len),
                format!("sparse_isa={}", tr.survivors),
                format!("match_passes={}", tr.passes),
                format!(
                    "parent_steps={},{},{}",
                    tr.parent_steps[0], tr.parent_steps[1], tr.parent_steps[2]
                ),
                format!("check.d_le_n={}", pass(tr.d_bound.holds(n) && tr.d_len <= n)),
                format!("check.parent_steps_le_nodes={}", pass(steps_ok)),
            ]);
            tr.space
        }
    };
    lines.push(format!("time_ms={:.3}", clock.elapsed().as_secs_f64() * 1e3));
    let mut out = lines.join("\n");
    out.push('\n');
    out.push_str(&space.to_string());
    out.push('\n');
    write_output(None, out.as_bytes(), stdout)
}

fn describe(f: Option<&Factor>) -> String {
    match f {
        None => "none".into(),
        Some(f) => format!(
            "start={} len={} ref={} symbol={}",
            f.start,
            f.len,
            f.reference.map_or("-".into(), |r| r.to_string()),
            f.literal.map_or("-".into(), |c| c.to_string())
        ),
    }
}

fn verify(text: &TextArgs, fault: bool, stdout: &mut dyn Write) -> Result<(), Failure> {
    let t = load_text(text)?;
    let s = t.symbols();
    let (got, expected) = match text.algo {
        Algorithm::Lz78 => {
            let mut f = crate::factorize_lz78(&t, text.epsilon)?;
            if fault {
                f.inject_fault();
            }
            (f.factors(&t), oracle::naive_lz78(s))
        }
        algo => {
            let classic = algo == Algorithm::Lz77Classic;
            let mut f = crate::factorize_lz77(&t, text.epsilon, classic)?;
            if fault {
                f.inject_fault();
            }
            let expected = if s.len() <= NAIVE_LZ77_LIMIT {
                oracle::naive_lz77(s, classic)
            } else {
                oracle::easy_lz77(s, classic)
            };
            (f.factors(&t), expected)
        }
    };
    let first_diff = (0..got.len().max(expected.len())).find(|&i| got.get(i) != expected.get(i));
    match first_diff {
        None => {
            let line = format!("ok algo={} n={} z={}\n", text.algo, t.len(), got.len());
            write_output(None, line.as_bytes(), stdout)
        }
        Some(i) => Err(Failure::Mismatch(format!(
            "mismatch at factor {}: got {}, expected {}",
            i + 1,
            describe(got.get(i)),
            describe(expected.get(i))
        ))),
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Compress { text, output } => compress(text, output.as_deref(), stdout),
        Command::Decompress {
            input,
            strip_sentinel,
            u32,
            output,
        } => decompress(input, *strip_sentinel, *u32, output.as_deref(), stdout),
        Command::Stats { text } => stats(text, stdout),
        Command::Verify { text, fault_inject } => verify(text, *fault_inject, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Io(m) | Failure::Mismatch(m) => m,
            };
            let _ = writeln!(stderr, "lzsuf: {msg}");
            f.code()
        }
    }
}
