use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use mols_core::bounds::{best_bound_factors, construct_triple, BoundEngine};
use mols_core::designs::{extend_rtd, mols_from_td, rtd_from_td, td_from_mols};
use mols_core::format::{mols_to_string, parse, td_to_string, DesignFile};
use mols_core::verify::{verify_latin, verify_mols, verify_resolution, verify_td};
use mols_core::{
    execute_proof, improvement_table, CellBudget, Error, FieldSpec, MolsFamily, ResolvableTD,
    TransversalDesign, VerifyReport,
};

const FORMATS: &str = "\
FILE FORMATS (ASCII, LF line endings, single spaces, decimal integers)

  MOLS file:
    %MOLS 1
    n=<n> k=<k>
    then k squares of n lines with n symbols each, a blank line between squares

  TD file:
    %TD 1
    k=<k> n=<n>
    then n^2 blocks, one per line, k elements each (entry g is the point
    in group g), blocks in lexicographic order
    optional resolution section:
      %RES t=<t>
      profile <s_1> ... <s_t>
      then n^2 lines with one class index each, aligned with the blocks

PROOF TERMS

  P ::= (pp p e)             field of order p^e, value p^e - 1
      | (prod P P)           direct product, value min(v1, v2)
      | (triple P P P)       three-factor product with orders a <= b <= c,
                             value min(va + 1, vb, vc)
  The outermost term is followed by `:order O :value V`.

EXIT CODES
  0 success, 1 verification failure, 2 usage or parse error,
  3 size budget exceeded";

#[derive(Parser)]
#[command(name = "mols", version, about = "Latin square and transversal design toolkit")]
#[command(after_long_help = FORMATS)]
struct Cli {
    /// Largest n^2 * k a construction may allocate
    #[arg(long, global = true, env = "MOLS_BUDGET", default_value_t = 1 << 28)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parameters of GF(q)
    Field {
        q: u64,
        #[arg(long)]
        print_tables: bool,
    },
    /// Build a design from a factor triple or from the best known bound
    #[command(group(ArgGroup::new("source").required(true).args(["factors", "n"])))]
    Construct {
        /// Orders a,b,c of the three ingredients
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<String>>,
        /// Target order, used with --auto
        #[arg(long, requires = "auto")]
        n: Option<u64>,
        #[arg(long, requires = "n")]
        auto: bool,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Complete the resolvable design to one more group
        #[arg(long, conflicts_with = "auto")]
        extend: bool,
    },
    /// Convert between MOLS, TD and resolvable TD files
    Convert {
        #[arg(long, value_enum)]
        from: Kind,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// TD to TD only: complete a design whose resolution has all classes of size 1
        #[arg(long)]
        extend: bool,
    },
    /// Certify a design file
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Level::All)]
        level: Level,
    },
    /// Best lower bound on the number of MOLS
    #[command(group(ArgGroup::new("target").required(true).args(["n", "factors"])))]
    Bound {
        n: Option<u64>,
        /// Factors of n, e.g. 8,9,13 or 2^3,3^2,13
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<String>>,
        #[arg(long)]
        proof: bool,
    },
    /// Orders in a range where the bound beats MacNeish, as TSV
    Table {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Mols,
    Td,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Td,
    Mols,
    Rtd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Latin,
    Mols,
    Td,
    Res,
    All,
}

enum Failure {
    Usage(String),
    Core(Error),
    Rejected(VerifyReport),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = CellBudget(cli.budget);
    let result = match cli.command {
        Command::Field { q, print_tables } => field(q, print_tables),
        Command::Construct {
            factors,
            n,
            k,
            out,
            extend,
            ..
        } => match (factors, n) {
            (Some(f), _) => construct_factors(&f, k, &out, extend, budget),
            (None, Some(n)) => construct_auto(n, k, &out, budget),
            (None, None) => unreachable!("clap requires one source"),
        },
        Command::Convert {
            from,
            to,
            input,
            out,
            k,
            extend,
        } => convert(from, to, &input, &out, k, extend),
        Command::Verify { file, level } => verify(&file, level),
        Command::Bound { n, factors, proof } => bound(n, factors, proof),
        Command::Table { min, max } => table(min, max),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(report)) => {
            for f in &report.failures {
                println!("FAIL {f}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeBudget { .. } => 3,
                Error::InvalidTd(_) | Error::InvalidResolution(_) => 1,
                _ => 2,
            })
        }
    }
}

fn field(q: u64, print_tables: bool) -> Outcome {
    let f = FieldSpec::new(q)?;
    println!("p {}", f.characteristic());
    println!("e {}", f.degree());
    let mut modulus: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
    if modulus.is_empty() {
        modulus.push("0".into());
    }
    modulus.push("1".into());
    println!("modulus {}", modulus.join(" "));
    if print_tables {
        let q = f.order() as usize;
        for (name, table) in [("add", f.add_table()), ("mul", f.mul_table())] {
            println!("{name}");
            for row in table.chunks(q) {
                println!("{}", join(row));
            }
        }
    }
    Ok(())
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Accepts `12` or `2^2`.
fn parse_factor(s: &str) -> Result<u64, Failure> {
    let bad = || Failure::Usage(format!("bad factor `{s}`"));
    let s = s.trim();
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_factors(list: &[String]) -> Result<Vec<u64>, Failure> {
    list.iter().map(|s| parse_factor(s)).collect()
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn construct_factors(
    list: &[String],
    k: Option<usize>,
    out: &Path,
    extend: bool,
    budget: CellBudget,
) -> Outcome {
    let mut orders = parse_factors(list)?;
    if orders.len() != 3 {
        return Err(Failure::Usage("--factors takes exactly three orders".into()));
    }
    orders.sort_unstable();
    let mut engine = BoundEngine::new();
    let mut proofs = Vec::with_capacity(3);
    for &o in &orders {
        proofs.push(engine.best_bound(o)?);
    }
    let (a, b, c) = (&proofs[0], &proofs[1], &proofs[2]);
    let k = k.unwrap_or_else(|| (a.value + 2).min(b.value + 1).min(c.value + 1) as usize);
    let rtd = construct_triple(a, b, c, k, budget)?;
    let text = if extend {
        td_to_string(&extend_rtd(&rtd)?, None)
    } else {
        td_to_string(rtd.td(), Some(rtd.resolution()))
    };
    write_file(out, &text)
}

fn construct_auto(n: u64, k: Option<usize>, out: &Path, budget: CellBudget) -> Outcome {
    let proof = BoundEngine::new().best_bound(n)?;
    let k = k.unwrap_or(proof.value as usize + 2);
    let td = execute_proof(&proof, k, budget)?;
    write_file(out, &td_to_string(&td, None))
}

fn load(path: &Path) -> Result<DesignFile, Failure> {
    Ok(parse(&read_file(path)?)?)
}

fn keep_groups(td: TransversalDesign, k: Option<usize>) -> Result<TransversalDesign, Failure> {
    match k {
        Some(k) => truncate(td, k),
        None => Ok(td),
    }
}

/// Keeps the first `k` groups.
fn truncate(td: TransversalDesign, k: usize) -> Result<TransversalDesign, Failure> {
    let (g, n) = (td.groups(), td.order());
    if k < 2 || k > g {
        return Err(Error::KRange { k, min: 2, max: g }.into());
    }
    let raw: Vec<u32> = td.blocks().flat_map(|b| b[..k].to_vec()).collect();
    Ok(TransversalDesign::new(k, n, raw)?)
}

fn convert(
    from: Kind,
    to: Target,
    input: &Path,
    out: &Path,
    k: Option<usize>,
    extend: bool,
) -> Outcome {
    if extend && !matches!((from, to), (Kind::Td, Target::Td)) {
        return Err(Failure::Usage("--extend needs --from td --to td".into()));
    }
    let file = load(input)?;
    let text = match (from, file) {
        (Kind::Mols, DesignFile::Mols(fam)) => {
            match to {
                Target::Mols => mols_to_string(&keep_squares(fam, k)?),
                Target::Td => td_to_string(&td_from_mols(&fam, k.unwrap_or(fam.len() + 2))?, None),
                Target::Rtd => {
                    let k = k.unwrap_or(fam.len() + 1);
                    let rtd = rtd_from_td(&td_from_mols(&fam, k + 1)?)?;
                    td_to_string(rtd.td(), Some(rtd.resolution()))
                }
            }
        }
        (Kind::Td, DesignFile::Td(td, res)) => match to {
            Target::Td if extend => {
                let res = res.ok_or_else(|| Failure::Usage("file has no %RES section".into()))?;
                let td = extend_rtd(&ResolvableTD::new(td, res)?)?;
                td_to_string(&keep_groups(td, k)?, None)
            }
            Target::Td => match k {
                None => td_to_string(&td, res.as_ref()),
                Some(k) => td_to_string(&truncate(td, k)?, None),
            },
            Target::Mols => mols_to_string(&mols_from_td(&keep_groups(td, k)?)?),
            Target::Rtd => {
                let rtd = rtd_from_td(&keep_groups(td, k.map(|k| k + 1))?)?;
                td_to_string(rtd.td(), Some(rtd.resolution()))
            }
        },
        _ => {
            return Err(Failure::Usage(format!(
                "{} does not hold a {} file",
                input.display(),
                match from {
                    Kind::Mols => "MOLS",
                    Kind::Td => "TD",
                }
            )))
        }
    };
    write_file(out, &text)
}

/// Keeps the first `k` squares, or all of them.
fn keep_squares(fam: MolsFamily, k: Option<usize>) -> Result<MolsFamily, Failure> {
    let Some(k) = k else { return Ok(fam) };
    let len = fam.len();
    if k < 1 || k > len {
        return Err(Error::KRange { k, min: 1, max: len }.into());
    }
    let mut squares = fam.into_squares();
    squares.truncate(k);
    Ok(MolsFamily::new(squares)?)
}

fn verify(path: &Path, level: Level) -> Outcome {
    let report = match load(path)? {
        DesignFile::Mols(fam) => match level {
            Level::Latin => {
                let mut r = VerifyReport::default();
                for sq in fam.squares() {
                    r.merge(verify_latin(sq));
                }
                r
            }
            Level::Mols | Level::All => verify_mols(&fam),
            Level::Td => verify_td(&td_from_mols(&fam, fam.len() + 2)?),
            Level::Res => return Err(Failure::Usage("a MOLS file has no resolution".into())),
        },
        DesignFile::Td(td, res) => match (level, res) {
            (Level::Res, None) => {
                return Err(Failure::Usage("file has no %RES section".into()));
            }
            (Level::Res | Level::All, Some(res)) => {
                let mut r = verify_td(&td);
                r.merge(verify_resolution(&ResolvableTD::new(td, res)?));
                r
            }
            _ => verify_td(&td),
        },
    };
    if report.ok() {
        println!("ok ({} checks)", report.checks);
        Ok(())
    } else {
        Err(Failure::Rejected(report))
    }
}

fn bound(n: Option<u64>, factors: Option<Vec<String>>, proof: bool) -> Outcome {
    let list = match (n, factors) {
        (_, Some(f)) => parse_factors(&f)?,
        (Some(n), None) => vec![n],
        (None, None) => unreachable!("clap requires a target"),
    };
    let p = best_bound_factors(&list)?;
    println!("{}", p.value);
    if proof {
        println!("{p}");
    }
    Ok(())
}

fn table(min: u64, max: u64) -> Outcome {
    if min > max {
        return Err(Failure::Usage("--min exceeds --max".into()));
    }
    for row in improvement_table(min, max)? {
        println!("{}\t{}\t{}\t{}", row.n, row.macneish, row.best, row.proof.term());
    }
    Ok(())
}
