//! `ppdrec`: ppd element classification and classical group recognition.
//!
//! Exit codes: 0 success (including CONTAINS_OMEGA), 1 LIKELY_NOT_OMEGA,
//! 2 validation or precondition failure, 3 usage error.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::Ratio;

use ppdrec::classify::classify_element;
use ppdrec::enumerate::{enumerate_group, ppd_counts, verify_singer_formula};
use ppdrec::field::Field;
use ppdrec::format::{parse_group, write_group};
use ppdrec::groups::{standard_group, Family, Level};
use ppdrec::matrix::MatrixQ;
use ppdrec::ppd::phi_triple_q;
use ppdrec::recognize::{recognize, Verdict};
use ppdrec::sampler::sampler_init;
use ppdrec::Error;

#[derive(Parser)]
#[command(name = "ppdrec", version, about = "ppd classification and classical group recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a standard generator file for a classical group case.
    Gen {
        /// Case token: linear, sp, su, oplus, ominus, ocirc.
        #[arg(long)]
        case: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        /// omega (SL, Sp, SU, Ω) or delta (GL, GSp, GU, similitudes).
        #[arg(long, default_value = "omega")]
        level: String,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Classify one matrix as a ppd element.
    Classify {
        /// Group file; classifies the generator selected by --index.
        #[arg(long, conflicts_with_all = ["q", "d", "matrix"])]
        file: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
        /// Row-major entries, rows separated by ';', entries by spaces.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Print Φ, Φ_l, Φ_b tables for a field size.
    Tables {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        min_e: u32,
        #[arg(long)]
        max_e: u32,
    },
    /// Sample elements and report observed ppd degree frequencies.
    Estimate {
        #[arg(long)]
        file: std::path::PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Split the sample count over this many deterministic jobs.
        #[arg(long, default_value_t = 1)]
        jobs: u64,
    },
    /// Run the three-stage recognition algorithm.
    Recognize {
        #[arg(long)]
        file: std::path::PathBuf,
        /// Error tolerance as a fraction, e.g. 1/10.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        seed: u64,
    },
    /// Enumerate the group exhaustively and report exact ppd counts.
    Oracle {
        #[arg(long)]
        file: std::path::PathBuf,
        /// Also check the Singer counting identity at e = d with this u.
        #[arg(long)]
        singer_u: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error value
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Gen { case, d, q, level, out } => {
            let family = Family::from_token(&case)
                .ok_or_else(|| Error::InvalidCase(format!("unknown case {case:?}")))?;
            let level = match level.as_str() {
                "omega" => Level::Omega,
                "delta" => Level::Delta,
                other => return Err(Error::InvalidCase(format!("unknown level {other:?}"))),
            };
            let group = standard_group(family, d, q, level)?;
            let text = write_group(&group);
            match out {
                Some(path) => {
                    std::fs::File::create(&path)
                        .and_then(|mut f| f.write_all(text.as_bytes()))
                        .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { file, index, q, d, matrix } => {
            let m = load_matrix(file, index, q, d, matrix)?;
            match classify_element(&m)? {
                Some(w) => println!(
                    "e={} ppd=true large={} basic={} factor={}",
                    w.e,
                    w.is_large,
                    w.is_basic,
                    w.factor.to_text()
                ),
                None => println!("none"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { q, min_e, max_e } => {
            if min_e == 0 || min_e > max_e {
                return Err(Error::Validation("need 1 <= min-e <= max-e".into()));
            }
            for e in min_e..=max_e {
                let t = phi_triple_q(e, q)?;
                let primes = match &t.primes {
                    None => "-".to_string(),
                    Some(list) if list.is_empty() => "-".to_string(),
                    Some(list) => list
                        .iter()
                        .map(|p| {
                            let mut s = format!("{}^{}", p.r, p.multiplicity);
                            s.push(':');
                            if p.large {
                                s.push('L');
                            }
                            if p.basic {
                                s.push('B');
                            }
                            s
                        })
                        .collect::<Vec<_>>()
                        .join(","),
                };
                println!("{e} {q} {} {} {} {primes}", t.phi, t.phi_large, t.phi_basic);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate { file, samples, seed, jobs } => {
            if jobs == 0 || jobs > samples.max(1) {
                return Err(Error::Validation("jobs must be in 1..=samples".into()));
            }
            let group = parse_group(&read_file(&file)?)?;
            let share = samples / jobs;
            let extra = samples % jobs;
            let mut results: Vec<std::collections::BTreeMap<u32, u64>> = Vec::new();
            let mut none_total = 0u64;
            std::thread::scope(|scope| -> Result<(), Error> {
                let mut handles = Vec::new();
                for job in 0..jobs {
                    let n = share + if job < extra { 1 } else { 0 };
                    let job_seed = derive_seed(seed, job);
                    let gens = &group.generators;
                    handles.push(scope.spawn(move || -> Result<_, Error> {
                        let mut sampler = sampler_init(gens, job_seed)?;
                        let mut counts = std::collections::BTreeMap::new();
                        let mut none = 0u64;
                        for _ in 0..n {
                            let g = sampler.next_element()?;
                            match classify_element(&g)? {
                                Some(w) => *counts.entry(w.e).or_insert(0) += 1,
                                None => none += 1,
                            }
                        }
                        Ok((counts, none))
                    }));
                }
                for h in handles {
                    let (counts, none) = h.join().expect("estimate job panicked")?;
                    results.push(counts);
                    none_total += none;
                }
                Ok(())
            })?;
            let mut merged: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
            for r in results {
                for (e, c) in r {
                    *merged.entry(e).or_insert(0) += c;
                }
            }
            println!("samples {samples} seed {seed} jobs {jobs}");
            for (e, c) in &merged {
                println!("e={e} count={c} fraction={:.6}", *c as f64 / samples as f64);
            }
            println!("none count={none_total} fraction={:.6}", none_total as f64 / samples as f64);
            Ok(ExitCode::SUCCESS)
        }
        Command::Recognize { file, epsilon, seed } => {
            let group = parse_group(&read_file(&file)?)?;
            let eps = parse_epsilon(&epsilon)?;
            let report = recognize(&group, eps, seed)?;
            print!("{}", report.transcript_text());
            Ok(match report.verdict {
                Verdict::ContainsOmega => ExitCode::SUCCESS,
                Verdict::LikelyNotOmega => ExitCode::from(1),
                Verdict::PreconditionFailed | Verdict::UnsupportedDimension => ExitCode::from(2),
            })
        }
        Command::Oracle { file, singer_u } => {
            let group = parse_group(&read_file(&file)?)?;
            let enumerated = enumerate_group(&group.generators)?;
            println!("order {}", enumerated.order());
            for (e, (all, large, basic)) in ppd_counts(&enumerated)? {
                println!("ppd e={e} count={all} large={large} basic={basic}");
            }
            if let Some(u) = singer_u {
                let ok = verify_singer_formula(&enumerated, u)?;
                println!("singer u={u} ok={ok}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_file(path: &std::path::Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn derive_seed(seed: u64, job: u64) -> u64 {
    // splitmix64 step keyed by the job index
    let mut z = seed ^ (job.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn parse_epsilon(text: &str) -> Result<Ratio<u64>, Error> {
    let (num, den) = text.split_once('/').ok_or(Error::BadEpsilon)?;
    let num: u64 = num.trim().parse().map_err(|_| Error::BadEpsilon)?;
    let den: u64 = den.trim().parse().map_err(|_| Error::BadEpsilon)?;
    if den == 0 || num == 0 || num >= den {
        return Err(Error::BadEpsilon);
    }
    Ok(Ratio::new(num, den))
}

fn load_matrix(
    file: Option<std::path::PathBuf>,
    index: usize,
    q: Option<u64>,
    d: Option<usize>,
    matrix: Option<String>,
) -> Result<MatrixQ, Error> {
    if let Some(path) = file {
        let group = parse_group(&read_file(&path)?)?;
        return group
            .generators
            .get(index)
            .cloned()
            .ok_or_else(|| Error::Validation(format!("generator index {index} out of range")));
    }
    let (Some(q), Some(d), Some(matrix)) = (q, d, matrix) else {
        return Err(Error::Validation(
            "classify needs either --file or all of --q, --d, --matrix".into(),
        ));
    };
    let field = Field::from_order(q)?;
    let rows: Vec<Vec<u64>> = matrix
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| Error::Validation(format!("bad entry {t:?}"))))
                .collect::<Result<Vec<u64>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    if rows.len() != d {
        return Err(Error::Validation(format!("expected {d} rows, found {}", rows.len())));
    }
    MatrixQ::from_rows(&field, &rows)
}
