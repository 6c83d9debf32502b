use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use rss_core::codec::{
    join_shares, parse_share, serialize_share, split_message, DigestAlgorithm, RecursiveShareFile,
    ShareFile, Xor2ShareFile,
};
use rss_core::field::{PrimeModulus, DEFAULT_PRIME};
use rss_core::recursive::DealingParams;
use rss_core::xor2::{
    xor2_reconstruct, xor2_split, xor2_split_with, BitString, XorSecretSequence, XorSharePair,
};

use crate::failure::Failure;

type CmdResult<T = ()> = Result<T, Failure>;

/// Recursive threshold secret sharing for files.
#[derive(Debug, Parser)]
#[command(name = "rss", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split a file into n shares, any k of which rebuild it
    Split(SplitArgs),
    /// Rebuild a file (and its hidden payload) from k or more shares
    Reconstruct(ReconstructArgs),
    /// Print the header of a share file
    Inspect(InspectArgs),
    /// The 2-of-2 XOR scheme for secrets that double in size
    Xor2 {
        #[command(subcommand)]
        command: Xor2Command,
    },
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Threshold: shares needed to reconstruct
    #[arg(long)]
    k: usize,
    /// Number of shares to produce
    #[arg(long)]
    n: usize,
    /// Prime modulus; must exceed 2^56
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// File to carry in the hidden channel
    #[arg(long)]
    hide: Option<PathBuf>,
    /// Embed a SHA-256 digest of the input in the hidden channel
    #[arg(long)]
    embed_digest: bool,
    /// Deterministic randomness from a hex seed. Insecure; for tests only.
    #[arg(long)]
    seed: Option<String>,
    /// Directory for the share files
    #[arg(long)]
    out: PathBuf,
    input: PathBuf,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Verify the embedded digest against the rebuilt file
    #[arg(long)]
    check_digest: bool,
    /// Where to write the rebuilt file
    #[arg(long)]
    out: PathBuf,
    /// Where to write the hidden payload (default: <out>.hidden)
    #[arg(long)]
    hidden_out: Option<PathBuf>,
    #[arg(required = true)]
    shares: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// Also print the share body
    #[arg(long)]
    full: bool,
    share: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Xor2Command {
    /// Split a list of secrets (one bit-string per line, sizes 1, 2, 4, ...)
    Split {
        /// Deterministic randomness from a hex seed. Insecure; for tests only.
        #[arg(long)]
        seed: Option<String>,
        /// Fix the base bit instead of drawing it. Insecure; for tests only.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        base_bit: Option<u8>,
        #[arg(long)]
        out: PathBuf,
        secrets: PathBuf,
    },
    /// Recover the secret list from both shares
    Join {
        #[arg(long)]
        out: PathBuf,
        share1: PathBuf,
        share2: PathBuf,
    },
}

pub fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Split(args) => cmd_split(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Inspect(args) => cmd_inspect(args),
        Command::Xor2 { command } => match command {
            Xor2Command::Split {
                seed,
                base_bit,
                out,
                secrets,
            } => cmd_xor2_split(seed, base_bit, &out, &secrets),
            Xor2Command::Join {
                out,
                share1,
                share2,
            } => cmd_xor2_join(&out, &share1, &share2),
        },
    }
}

/// Files written by the current invocation; removed unless committed.
struct Outputs {
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn new() -> Self {
        Outputs {
            written: Vec::new(),
            committed: false,
        }
    }

    fn write(&mut self, path: &Path, contents: &[u8]) -> CmdResult {
        fs::write(path, contents).map_err(|e| Failure::io(path, e))?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for path in &self.written {
                let _ = fs::remove_file(path);
            }
        }
    }
}

fn read(path: &Path) -> CmdResult<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn rng_from(seed: Option<&str>) -> CmdResult<Box<dyn RngCore>> {
    match seed {
        None => Ok(Box::new(OsRng)),
        Some(hex_seed) => {
            let bytes = hex::decode(hex_seed)
                .map_err(|e| Failure::usage(format!("--seed must be hex: {e}")))?;
            eprintln!(
                "rss: WARNING: --seed makes every share reproducible. The shares are NOT secret; use only for testing."
            );
            Ok(Box::new(ChaCha20Rng::from_seed(
                Sha256::digest(&bytes).into(),
            )))
        }
    }
}

fn file_stem(path: &Path) -> CmdResult<String> {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .ok_or_else(|| Failure::usage(format!("{}: no file name", path.display())))
}

fn cmd_split(args: SplitArgs) -> CmdResult {
    let modulus = PrimeModulus::new(args.prime)?;
    let params = DealingParams::new(modulus, args.k, args.n)?;
    let stem = file_stem(&args.input)?;
    let message = read(&args.input)?;
    let aux = match &args.hide {
        Some(path) => read(path)?,
        None => Vec::new(),
    };
    let digest = if args.embed_digest {
        DigestAlgorithm::Sha256
    } else {
        DigestAlgorithm::None
    };
    let mut rng = rng_from(args.seed.as_deref())?;
    let files = split_message(&message, &aux, digest, &params, &mut *rng)?;

    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let mut outputs = Outputs::new();
    for file in files {
        let path = args.out.join(format!("{stem}.s{}.rss", file.x));
        outputs.write(
            &path,
            serialize_share(&ShareFile::Recursive(file)).as_bytes(),
        )?;
    }
    outputs.commit();
    Ok(())
}

/// The abscissa encoded in a `<stem>.s<x>.rss` file name, if present.
fn abscissa_from_name(path: &Path) -> Option<u64> {
    let name = path.file_name()?.to_str()?;
    let body = name.strip_suffix(".rss")?;
    let (_, x) = body.rsplit_once(".s")?;
    x.parse().ok()
}

fn cmd_reconstruct(args: ReconstructArgs) -> CmdResult {
    let mut seen = HashMap::new();
    for path in &args.shares {
        if let Some(x) = abscissa_from_name(path) {
            if let Some(prev) = seen.insert(x, path) {
                return Err(Failure::usage(format!(
                    "duplicate share x = {x}: {} and {}",
                    prev.display(),
                    path.display()
                )));
            }
        }
    }

    let mut files: Vec<RecursiveShareFile> = Vec::with_capacity(args.shares.len());
    for path in &args.shares {
        let parsed = parse_share(&read(path)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        match parsed {
            ShareFile::Recursive(f) => files.push(f),
            ShareFile::Xor2(_) => {
                return Err(Failure::usage(format!(
                    "{}: xor2 share; use `rss xor2 join`",
                    path.display()
                )))
            }
        }
    }
    let k = files[0].k;
    if files.len() < k {
        return Err(Failure::usage(format!(
            "insufficient shares: need {k}, got {}",
            files.len()
        )));
    }

    let recovered = join_shares(&files)?;
    if args.check_digest {
        recovered.verify_digest()?;
        eprintln!("rss: digest verified ({})", recovered.digest_algorithm);
    }

    let mut outputs = Outputs::new();
    outputs.write(&args.out, &recovered.message)?;
    let hidden_path = match args.hidden_out {
        Some(path) => Some(path),
        None if !recovered.aux.is_empty() => {
            let mut name = args.out.clone().into_os_string();
            name.push(".hidden");
            Some(PathBuf::from(name))
        }
        None => None,
    };
    if let Some(path) = hidden_path {
        outputs.write(&path, &recovered.aux)?;
    }
    outputs.commit();
    Ok(())
}

fn cmd_inspect(args: InspectArgs) -> CmdResult {
    let parsed = parse_share(&read(&args.share)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.share.display())))?;
    match parsed {
        ShareFile::Recursive(f) => {
            println!("scheme:  recursive");
            println!("p:       {}", f.p);
            println!("k:       {}", f.k);
            println!("n:       {}", f.n);
            println!("x:       {}", f.x);
            println!("chunks:  {}", f.chunks());
            println!("msglen:  {}", f.msglen);
            println!("auxlen:  {}", f.auxlen);
            println!("digest:  {}", f.digest);
            if args.full {
                println!("values:");
                for y in &f.ys {
                    println!("{y}");
                }
            }
        }
        ShareFile::Xor2(f) => {
            println!("scheme:  xor2");
            println!("levels:  {}", f.levels);
            println!("index:   {}", f.index);
            println!("bits:    {}", f.share.len());
            if args.full {
                println!("share:   {}", f.share);
            }
        }
    }
    Ok(())
}

fn parse_secret_list(text: &[u8], path: &Path) -> CmdResult<XorSecretSequence> {
    let text = std::str::from_utf8(text)
        .map_err(|_| Failure::usage(format!("{}: not UTF-8", path.display())))?;
    let secrets = text
        .lines()
        .map(|line| line.trim().parse::<BitString>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    XorSecretSequence::new(secrets).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_xor2_split(
    seed: Option<String>,
    base_bit: Option<u8>,
    out: &Path,
    secrets_path: &Path,
) -> CmdResult {
    let stem = file_stem(secrets_path)?;
    let secrets = parse_secret_list(&read(secrets_path)?, secrets_path)?;
    let pair = match base_bit {
        Some(bit) => {
            eprintln!("rss: WARNING: --base-bit fixes the only random bit. Use only for testing.");
            xor2_split_with(&secrets, bit == 1)
        }
        None => xor2_split(&secrets, &mut *rng_from(seed.as_deref())?),
    };
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    let mut outputs = Outputs::new();
    for (index, share) in [(1u8, pair.share1), (2, pair.share2)] {
        let file = Xor2ShareFile {
            levels: secrets.levels(),
            index,
            share,
        };
        let path = out.join(format!("{stem}.x{index}.rss"));
        outputs.write(&path, serialize_share(&ShareFile::Xor2(file)).as_bytes())?;
    }
    outputs.commit();
    Ok(())
}

fn read_xor2(path: &Path) -> CmdResult<Xor2ShareFile> {
    match parse_share(&read(path)?) {
        Ok(ShareFile::Xor2(f)) => Ok(f),
        Ok(ShareFile::Recursive(_)) => Err(Failure::usage(format!(
            "{}: not an xor2 share",
            path.display()
        ))),
        Err(e) => Err(Failure::usage(format!("{}: {e}", path.display()))),
    }
}

fn cmd_xor2_join(out: &Path, first: &Path, second: &Path) -> CmdResult {
    let a = read_xor2(first)?;
    let b = read_xor2(second)?;
    if a.levels != b.levels {
        return Err(Failure::usage(format!(
            "shares disagree on levels: {} vs {}",
            a.levels, b.levels
        )));
    }
    let (one, two) = match (a.index, b.index) {
        (1, 2) => (a, b),
        (2, 1) => (b, a),
        _ => {
            return Err(Failure::usage(
                "need one share with index 1 and one with index 2",
            ))
        }
    };
    let levels = one.levels;
    let pair = XorSharePair {
        share1: one.share,
        share2: two.share,
    };
    let secrets = xor2_reconstruct(&pair, levels)?;
    let text: String = secrets.secrets().iter().map(|s| format!("{s}\n")).collect();
    let mut outputs = Outputs::new();
    outputs.write(out, text.as_bytes())?;
    outputs.commit();
    Ok(())
}
