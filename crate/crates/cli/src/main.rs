use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncrank_core::abp::{abp_eval, automaton_tuple, extract_monomial, rs_zero_test};
use ncrank_core::io;
use ncrank_core::oracle::{gen_family, Edges, Family};
use ncrank_core::rank::{ncrank_with, verify_upper_bound, verify_witness, Params, RoundInfo};
use ncrank_core::Error;

#[derive(Parser)]
#[command(name = "ncrank", version, about = "Noncommutative rank of linear matrix pencils")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the noncommutative rank of a pencil file.
    Rank {
        pencil: PathBuf,
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Print one line per round.
        #[arg(long)]
        trace: bool,
        /// Worker threads for the zero tests; output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        /// Size automaton witnesses as max(2rd, rd+2) instead of |word|+1.
        #[arg(long)]
        wide_dprime: bool,
        /// Stop reducing the witness once its dimension is at most r+1.
        #[arg(long)]
        no_shrink: bool,
    },
    /// Check a witness (and optionally an upper-bound certificate).
    Verify {
        pencil: PathBuf,
        witness: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Zero-test a noncommutative ABP.
    Pit {
        abp: PathBuf,
        /// Print a word with nonzero coefficient.
        #[arg(long)]
        monomial: bool,
        /// Print the automaton tuple of that word at this dimension.
        #[arg(long)]
        witness_dim: Option<usize>,
    },
    /// Generate a pencil from a family with known rank information.
    Gen {
        kind: Kind,
        /// Matrix size (for bipartite pencils `--n` is accepted as well).
        #[arg(long)]
        s: Option<usize>,
        /// Number of variables.
        #[arg(long)]
        n: Option<usize>,
        /// Inner rank bound for factorized pencils.
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// cycle, star, random, or a list such as "1-1,1-2,2-1".
        #[arg(long, default_value = "cycle")]
        edges: String,
        #[arg(long, default_value_t = 50)]
        percent: u32,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Bipartite,
    Skew,
    Factorized,
    Random,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 1, msg: format!("{}: {e}", path.display()) })
}

fn trace_line(k: usize, x: &RoundInfo) -> String {
    format!(
        "round {k}: r={} d={} d'={} t0={} ell={} |word|={} -> r={} d={}",
        x.r, x.d, x.dprime, x.t0, x.ell, x.word_len, x.r_new, x.d_new
    )
}

fn parse_edges(text: &str, percent: u32) -> Result<Edges, Failure> {
    match text {
        "cycle" => Ok(Edges::Cycle),
        "star" => Ok(Edges::Star),
        "random" => Ok(Edges::Random { percent }),
        list => list
            .split(',')
            .map(|e| {
                let (i, j) = e.trim().split_once('-').ok_or_else(|| usage(format!("bad edge {e:?}")))?;
                let i: usize = i.parse().map_err(|_| usage(format!("bad edge {e:?}")))?;
                let j: usize = j.parse().map_err(|_| usage(format!("bad edge {e:?}")))?;
                if i == 0 || j == 0 {
                    return Err(usage("edge endpoints are 1-based"));
                }
                Ok((i - 1, j - 1))
            })
            .collect::<Result<_, _>>()
            .map(Edges::List),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Rank { pencil, witness_out, cert_out, trace, jobs, wide_dprime, no_shrink } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build_global()
                    .map_err(|e| Failure { code: 1, msg: e.to_string() })?;
            }
            let t = io::parse_pencil(&read(&pencil)?)?.pencil;
            let params = Params { wide_dprime, shrink: !no_shrink };
            let mut k = 0;
            let out = ncrank_with(&t, &params, &mut |x| {
                k += 1;
                if trace {
                    println!("{}", trace_line(k, x));
                }
            })?;
            println!("ncrank = {}", out.r);
            if let Some(p) = witness_out {
                write(&p, &io::witness_to_json(&t, &out.witness))?;
            }
            if let Some(p) = cert_out {
                write(&p, &io::cert_to_json(&t, &out.certificate))?;
            }
            Ok(())
        }
        Cmd::Verify { pencil, witness, cert } => {
            let t = io::parse_pencil(&read(&pencil)?)?.pencil;
            let w = io::parse_witness(&read(&witness)?, &t)?;
            let c = cert.map(|p| read(&p).and_then(|s| Ok(io::parse_cert(&s, &t)?))).transpose()?;
            if !verify_witness(&t, &w) {
                println!("FAIL");
                return Err(Failure { code: 1, msg: format!("rank of T(p) is below {}", w.r * w.dim()) });
            }
            if let Some(c) = c {
                if c.r != w.r || !verify_upper_bound(&t, &c) {
                    println!("FAIL");
                    return Err(Failure { code: 1, msg: "upper-bound certificate does not verify".into() });
                }
            }
            println!("OK {} {}", w.r, w.dim());
            Ok(())
        }
        Cmd::Pit { abp, monomial, witness_dim } => {
            let f = io::parse_abp(&read(&abp)?)?;
            if rs_zero_test(&f) {
                println!("ZERO");
                return Ok(());
            }
            println!("NONZERO");
            if !monomial && witness_dim.is_none() {
                return Ok(());
            }
            let word = extract_monomial(&f)?;
            if monomial {
                let names: Vec<&str> = word.iter().map(|&k| f.vars()[k].as_str()).collect();
                println!("{}", if names.is_empty() { "1".to_string() } else { names.join(" ") });
            }
            if let Some(dim) = witness_dim {
                if dim < word.len() + 1 {
                    return Err(usage(format!("--witness-dim must be at least {}", word.len() + 1)));
                }
                let z = f.layers()[0].zero_elem().clone();
                let p = automaton_tuple(&word, f.nvars(), dim, &z)?;
                for (v, m) in f.vars().iter().zip(p.mats()) {
                    println!("{v} =");
                    for i in 0..m.rows() {
                        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
                        println!("  {}", row.join(" "));
                    }
                }
                if abp_eval(&f, &p)?.is_zero() {
                    return Err(Failure { code: 1, msg: "automaton tuple evaluates to zero".into() });
                }
                println!("check: evaluation is nonzero");
            }
            Ok(())
        }
        Cmd::Gen { kind, s, n, r, edges, percent, lo, hi, seed, out } => {
            let family = match kind {
                Kind::Bipartite => Family::Bipartite {
                    s: s.or(n).ok_or_else(|| usage("bipartite needs --s"))?,
                    edges: parse_edges(&edges, percent)?,
                },
                Kind::Skew => Family::Skew { s: s.unwrap_or(3) },
                Kind::Factorized => Family::Factorized { s: s.unwrap_or(3), r, n: n.unwrap_or(2) },
                Kind::Random => Family::Random { s: s.unwrap_or(2), n: n.unwrap_or(2), lo, hi },
            };
            let g = gen_family(&family, seed).map_err(|e| usage(e.to_string()))?;
            let text = io::pencil_to_json(&g.pencil, g.known);
            match out {
                Some(p) => write(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ncrank: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
