//! `qcstern`: key generation, signing, verification, parameter reports,
//! size benchmarks and live identification over TCP.
//!
//! Exit status: 0 accept / success, 1 reject, 2 usage or I/O error.

mod bench;

use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcstern::codec::response_len;
use qcstern::fiatshamir::{self, derive_challenge1, derive_challenge2, pk_digest};
use qcstern::files;
use qcstern::params::select_parameters;
use qcstern::protocol::{self, cmt1_len, cmt2_len, verify_transcript};
use qcstern::session;
use qcstern::{Error, Optimizations, ParameterSet, Seed};

const ACCEPT: u8 = 0;
const REJECT: u8 = 1;
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qcstern",
    version,
    about = "Quasi-cyclic Stern signatures and identification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct OptFlags {
    /// Disable an optimization (seed-vector, seed-pairing, cw, commit-aggregation); repeatable.
    #[arg(long = "no-opt", value_name = "NAME")]
    no_opt: Vec<String>,
}

impl OptFlags {
    fn apply(&self, params: &ParameterSet) -> Result<ParameterSet, Error> {
        let mut o = Optimizations::all();
        for name in &self.no_opt {
            o.disable(name)?;
        }
        params.set_optimizations(o)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair into <out>.sk and <out>.pk.
    Keygen {
        #[arg(long, default_value = "QCS-128-s1")]
        paramset: String,
        #[arg(long)]
        out: PathBuf,
        /// Root seed as hex (λ/8 bytes); OS entropy if omitted.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Sign a message file.
    Sign {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "msg")]
        message: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Signing randomness as hex (λ/8 bytes); OS entropy if omitted.
        #[arg(long)]
        seed: Option<String>,
        #[command(flatten)]
        opts: OptFlags,
    },
    /// Verify a signature, or replay a logged interactive transcript.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "msg", requires = "sig", conflicts_with = "transcript")]
        message: Option<PathBuf>,
        #[arg(long)]
        sig: Option<PathBuf>,
        #[arg(long, required_unless_present = "sig")]
        transcript: Option<PathBuf>,
    },
    /// Security report for a built-in set or custom code parameters.
    Params {
        #[arg(long, conflicts_with_all = ["k", "w", "s"])]
        paramset: Option<String>,
        #[arg(long, default_value_t = 128)]
        lambda: u64,
        #[arg(long, default_value_t = 653)]
        k: u64,
        #[arg(long, default_value_t = 137)]
        w: u64,
        #[arg(long, default_value_t = 1)]
        s: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Measure signature sizes and timings.
    Bench {
        #[arg(long, default_value = "QCS-128-s1")]
        paramset: String,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long)]
        seed: Option<String>,
        #[command(flatten)]
        opts: OptFlags,
    },
    /// Run the five-round protocol over TCP.
    Identify {
        #[arg(long, value_enum)]
        role: Role,
        #[arg(long, conflicts_with = "connect")]
        listen: Option<String>,
        #[arg(long)]
        connect: Option<String>,
        #[arg(long)]
        pk: PathBuf,
        /// Secret key (prover only).
        #[arg(long)]
        sk: Option<PathBuf>,
        /// Prover randomness as hex; OS entropy if omitted.
        #[arg(long)]
        seed: Option<String>,
        /// Sessions to serve before exiting (verifier only).
        #[arg(long, default_value_t = 1)]
        sessions: usize,
        /// Write each verified transcript here (`.N` appended when serving several).
        #[arg(long)]
        transcript_log: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
        #[command(flatten)]
        opts: OptFlags,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Role {
    Prover,
    Verifier,
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn seed_arg(hex_seed: Option<&str>, len: usize) -> Result<Seed, Error> {
    match hex_seed {
        None => Seed::random(len),
        Some(h) => {
            let bytes = hex::decode(h).map_err(|e| Error::Parameter(format!("--seed: {e}")))?;
            if bytes.len() != len {
                return Err(Error::Parameter(format!(
                    "--seed must be {len} bytes ({} hex digits), got {}",
                    2 * len,
                    bytes.len()
                )));
            }
            Ok(Seed::new(bytes))
        }
    }
}

fn with_suffix(path: &Path, i: usize) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(format!(".{i}"));
    PathBuf::from(s)
}

fn verdict(ok: bool) -> u8 {
    if ok {
        println!("accept");
        ACCEPT
    } else {
        println!("reject");
        REJECT
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Keygen { paramset, out, seed } => {
            let params = ParameterSet::by_name(&paramset)?;
            let root = seed_arg(seed.as_deref(), params.seed_len())?;
            let (sk, pk) = protocol::keygen(&params, &root)?;
            let mut sk_path = out.clone().into_os_string();
            sk_path.push(".sk");
            let mut pk_path = out.into_os_string();
            pk_path.push(".pk");
            write(Path::new(&sk_path), &files::encode_secret_key(&params, &sk)?)?;
            write(Path::new(&pk_path), &files::encode_public_key(&params, &pk)?)?;
            println!("parameter set      {params}");
            println!("secret key         {} bytes", sk.to_bytes().len());
            println!(
                "public key         {} bytes (k-bit syndromes)",
                pk.to_bytes().len()
            );
            println!(
                "public key         {:.2} bytes (n-bit syndrome accounting)",
                params.public_key_bytes_n_bit_accounting()
            );
            Ok(ACCEPT)
        }
        Command::Sign {
            sk,
            pk,
            message,
            out,
            seed,
            opts,
        } => {
            let (p_sk, sk) = files::decode_secret_key(&read(&sk)?)?;
            let (p_pk, pk) = files::decode_public_key(&read(&pk)?)?;
            if p_sk.id() != p_pk.id() {
                return Err(Error::Parameter(
                    "secret and public key use different parameter sets".into(),
                ));
            }
            let params = opts.apply(&p_pk)?;
            let msg = read(&message)?;
            let randomness = seed_arg(seed.as_deref(), params.seed_len())?;
            let sig = fiatshamir::sign(&sk, &pk, &params, &msg, &randomness)?;
            let digest = pk_digest(&pk, &params);
            let ch1 = derive_challenge1(&digest, &msg, &sig.cmt1, &params);
            let ch2 = derive_challenge2(&digest, &msg, &sig.cmt1, &ch1, &sig.cmt2, &params);
            let predicted = cmt1_len(&params) + cmt2_len(&params) + response_len(&params, ch2.bits());
            write(&out, &files::encode_signature(&params, &sig)?)?;
            println!(
                "signature          {} bytes (predicted {predicted})",
                sig.byte_len()
            );
            Ok(ACCEPT)
        }
        Command::Verify {
            pk,
            message,
            sig,
            transcript,
        } => {
            let (p_pk, pk) = files::decode_public_key(&read(&pk)?)?;
            if let Some(t) = transcript {
                let (params, t) = files::decode_transcript(&read(&t)?)?;
                if params.id() != p_pk.id() {
                    return Err(Error::Parameter(
                        "transcript and key use different parameter sets".into(),
                    ));
                }
                return Ok(verdict(verify_transcript(&pk, &params, &t)));
            }
            let (Some(message), Some(sig)) = (message, sig) else {
                return Err(Error::Parameter(
                    "verify needs --msg and --sig, or --transcript".into(),
                ));
            };
            let msg = read(&message)?;
            let (params, sig) = match files::decode_signature(&read(&sig)?) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("malformed signature: {e}");
                    return Ok(verdict(false));
                }
            };
            if params.id() != p_pk.id() {
                eprintln!("signature and key use different parameter sets");
                return Ok(verdict(false));
            }
            match fiatshamir::check_signature(&pk, &params, &msg, &sig) {
                Ok(()) => Ok(verdict(true)),
                Err(e) => {
                    eprintln!("{e}");
                    Ok(verdict(false))
                }
            }
        }
        Command::Params {
            paramset,
            lambda,
            k,
            w,
            s,
            format,
        } => {
            let (lambda, k, w, s) = match paramset {
                Some(name) => {
                    let p = ParameterSet::by_name(&name)?;
                    (p.lambda() as u64, p.k() as u64, p.w() as u64, p.s() as u64)
                }
                None => (lambda, k, w, s),
            };
            let report = select_parameters(lambda, 2 * k, k, w, s)?;
            match format {
                Format::Text => print!("{report}"),
                Format::Kv => print!("{}", report.to_key_value()),
            }
            Ok(ACCEPT)
        }
        Command::Bench {
            paramset,
            iterations,
            seed,
            opts,
        } => {
            if iterations == 0 {
                return Err(Error::Parameter("--iterations must be at least 1".into()));
            }
            let params = opts.apply(&ParameterSet::by_name(&paramset)?)?;
            let root = seed_arg(seed.as_deref(), params.seed_len())?;
            print!("{}", bench::run(&params, iterations, &root)?);
            Ok(ACCEPT)
        }
        Command::Identify {
            role,
            listen,
            connect,
            pk,
            sk,
            seed,
            sessions,
            transcript_log,
            timeout_secs,
            opts,
        } => {
            let (p_pk, pk) = files::decode_public_key(&read(&pk)?)?;
            let params = opts.apply(&p_pk)?;
            let timeout = Duration::from_secs(timeout_secs);
            match role {
                Role::Prover => {
                    let addr =
                        connect.ok_or_else(|| Error::Parameter("the prover needs --connect".into()))?;
                    let sk_path = sk.ok_or_else(|| Error::Parameter("the prover needs --sk".into()))?;
                    let (p_sk, sk) = files::decode_secret_key(&read(&sk_path)?)?;
                    if p_sk.id() != p_pk.id() {
                        return Err(Error::Parameter(
                            "secret and public key use different parameter sets".into(),
                        ));
                    }
                    let randomness = seed_arg(seed.as_deref(), params.seed_len())?;
                    match session::prove_to(&addr, &sk, &pk, &params, &randomness, timeout) {
                        Ok(ok) => Ok(verdict(ok)),
                        Err(e @ Error::Io(_)) => Err(e),
                        Err(e) => {
                            eprintln!("{e}");
                            Ok(verdict(false))
                        }
                    }
                }
                Role::Verifier => {
                    let addr =
                        listen.ok_or_else(|| Error::Parameter("the verifier needs --listen".into()))?;
                    let listener = TcpListener::bind(&addr)?;
                    eprintln!("listening on {}", listener.local_addr()?);
                    let results = session::serve(&listener, &pk, &params, sessions, timeout)?;
                    let mut all_ok = true;
                    for (i, r) in results.into_iter().enumerate() {
                        match r {
                            Ok((ok, t)) => {
                                println!("session {i}: {}", if ok { "accept" } else { "reject" });
                                all_ok &= ok;
                                if let Some(log) = &transcript_log {
                                    let path = if sessions == 1 {
                                        log.clone()
                                    } else {
                                        with_suffix(log, i)
                                    };
                                    write(&path, &files::encode_transcript(&params, &t)?)?;
                                }
                            }
                            Err(e) => {
                                println!("session {i}: error: {e}");
                                all_ok = false;
                            }
                        }
                    }
                    Ok(if all_ok { ACCEPT } else { REJECT })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(FAILURE)
        }
    }
}
