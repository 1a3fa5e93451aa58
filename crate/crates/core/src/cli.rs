//! The `cumulants` command line: table conversion, identity checks and
//! partition listings.
//!
//! Tables are TOML documents:
//!
//! ```toml
//! generators = ["a"]
//! kind = "moment"
//! max_degree = 4
//!
//! [values]
//! a = "0"
//! aa = "1"
//! aaa = "0"
//! aaaa = "2"
//! ```
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 incomplete table,
//! 3 failed identity or route disagreement.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_scalar, Alphabet, WordTable};
use crate::error::Error;
use crate::partitions::{self, SetPartition};
use crate::transforms::{convert, verify_suite, CumulantTable, Kind, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_BREACH: i32 = 3;

/// Largest `--n` accepted by `partitions`.
pub const MAX_LISTING_N: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "cumulants", version, about = "Exact moment and cumulant conversions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a table between moments and free, boolean or monotone cumulants.
    Convert {
        #[arg(short, long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_kind)]
        from: Kind,
        #[arg(long, value_parser = parse_kind)]
        to: Kind,
        /// Truncate the input to this degree first.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Check the algebraic identities on pseudo-random tables.
    Verify {
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        generators: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List set partitions of {1..n}.
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Nc)]
        family: FamilyArg,
        /// Append the tree factorial and the number of monotone labellings.
        #[arg(long)]
        stats: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Nc,
    IrrNc,
    Interval,
    Monotone,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// The on-disk table document.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub generators: Vec<String>,
    pub kind: String,
    pub max_degree: usize,
    pub values: IndexMap<String, String>,
}

impl TableFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("table documents serialize")
    }

    /// Words in canonical order: by degree, then lexicographically.
    pub fn from_table(table: &CumulantTable) -> Self {
        let alphabet = table.alphabet();
        TableFile {
            generators: alphabet.names().to_vec(),
            kind: table.kind().name().to_string(),
            max_degree: table.max_degree(),
            values: table
                .table()
                .iter_canonical()
                .map(|(w, v)| (alphabet.format_word(&w), v.to_string()))
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<CumulantTable, Error> {
        let kind: Kind = self.kind.parse()?;
        let alphabet = Alphabet::new(self.generators.iter().cloned())?;
        let mut table = WordTable::new(alphabet.size(), self.max_degree);
        for (key, value) in &self.values {
            let w = alphabet.parse_word(key)?;
            if w.is_empty() || w.degree() > self.max_degree {
                return Err(Error::Parse(format!("word {key:?} outside degrees 1..={}", self.max_degree)));
            }
            if table.get(&w).is_ok() {
                return Err(Error::Parse(format!("word {key:?} given twice")));
            }
            let v = parse_scalar(value).map_err(|e| Error::Parse(format!("value of {key:?}: {e}")))?;
            table.insert(w, v)?;
        }
        CumulantTable::new(kind, alphabet, table)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Incomplete(_) | Error::MissingValue { .. } => EXIT_INCOMPLETE,
        Error::RouteDisagreement { .. } => EXIT_BREACH,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line on `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Convert { input, output, from, to, max_degree } => {
            cmd_convert(&input, output.as_ref(), from, to, max_degree, out)
        }
        Command::Verify { degree, generators, seed, format } => {
            cmd_verify(degree, generators, seed, format, out)
        }
        Command::Partitions { n, family, stats, format } => cmd_partitions(n, family, stats, format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::InvalidForm(_)) {
                let _ = writeln!(err, "usage: cumulants convert -i FILE --from KIND --to KIND [-o FILE] [--max-degree N]");
            }
            exit_code(&e)
        }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn cmd_convert(
    input: &std::path::Path,
    output: Option<&PathBuf>,
    from: Kind,
    to: Kind,
    max_degree: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    if from == to {
        return Err(Error::InvalidForm(format!("--from and --to are both {from}")));
    }
    let text = fs::read_to_string(input).map_err(|e| io_error(input, e))?;
    let file = TableFile::parse(&text)?;
    let mut table = file.to_table()?;
    if table.kind() != from {
        return Err(Error::Parse(format!("input holds a {} table, --from says {from}", table.kind())));
    }
    if let Some(n) = max_degree {
        table = table.truncate(n)?;
    }
    let result = convert(&table, to)?;
    let rendered = TableFile::from_table(&result).render();
    match output {
        Some(path) => fs::write(path, rendered).map_err(|e| io_error(path, e))?,
        None => out.write_all(rendered.as_bytes()).map_err(|e| Error::Parse(e.to_string()))?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(degree: usize, generators: usize, seed: u64, format: Format, out: &mut dyn Write) -> Result<i32, Error> {
    let report = verify_suite(&VerifyConfig::new(degree, generators, seed))?;
    let text = match format {
        Format::Text => report.render_text(),
        Format::Structured => report.render_structured(),
    };
    out.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_BREACH })
}

fn stats_of(p: &SetPartition) -> Result<(u64, u64), Error> {
    Ok((p.tree_factorial()?, p.monotone_labelling_count()?))
}

fn cmd_partitions(n: usize, family: FamilyArg, stats: bool, format: Format, out: &mut dyn Write) -> Result<i32, Error> {
    if n == 0 || n > MAX_LISTING_N {
        return Err(Error::OutOfRange(format!("--n {n} not in 1..={MAX_LISTING_N}")));
    }
    let mut lines: Vec<(String, &SetPartition)> = Vec::new();
    let plain;
    let labelled;
    match family {
        FamilyArg::Monotone => {
            labelled = (1..=n)
                .map(|q| partitions::enumerate_monotone(n, q))
                .collect::<Result<Vec<_>, _>>()?
                .concat();
            lines.extend(labelled.iter().map(|m| (m.to_string(), &m.partition)));
        }
        _ => {
            plain = match family {
                FamilyArg::Nc => partitions::enumerate_nc(n)?,
                FamilyArg::IrrNc => partitions::enumerate_irreducible_nc(n)?,
                _ => partitions::enumerate_interval(n)?,
            };
            lines.extend(plain.iter().map(|p| (p.to_string(), p)));
        }
    }
    let mut text = String::new();
    for (label, p) in &lines {
        match (format, stats) {
            (Format::Text, false) => text.push_str(&format!("{label}\n")),
            (Format::Text, true) => {
                let (tau, m) = stats_of(p)?;
                text.push_str(&format!("{label}  tau!={tau}  m={m}\n"));
            }
            (Format::Structured, false) => text.push_str(&format!("partition blocks={label}\n")),
            (Format::Structured, true) => {
                let (tau, m) = stats_of(p)?;
                text.push_str(&format!("partition blocks={label} tau={tau} m={m}\n"));
            }
        }
    }
    match format {
        Format::Text => text.push_str(&format!("total: {}\n", lines.len())),
        Format::Structured => text.push_str(&format!("total count={}\n", lines.len())),
    }
    out.write_all(text.as_bytes()).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["cumulants"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn partition_listing() {
        let (code, out, _) = run_capture(&["partitions", "--n", "3", "--family", "nc"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 6);
        assert!(out.ends_with("total: 5\n"));
        let (_, out, _) = run_capture(&["partitions", "--n", "4", "--family", "nc", "--stats"]);
        assert!(out.lines().any(|l| l == "{1,4}{2,3}  tau!=2  m=1"));
        let (code, _, _) = run_capture(&["partitions", "--n", "11"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["convert", "-i", "x.toml", "--from", "free", "--to", "free"]).0, 1);
        assert_eq!(run_capture(&["verify", "--generators", "0"]).0, 1);
        assert_eq!(run_capture(&["frobnicate"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn table_file_round_trip() {
        let text = "generators = [\"a\"]\nkind = \"moment\"\nmax_degree = 2\n\n[values]\na = \"1/2\"\naa = \"3\"\n";
        let file = TableFile::parse(text).unwrap();
        let table = file.to_table().unwrap();
        assert_eq!(TableFile::from_table(&table).render(), text);
    }

    #[test]
    fn table_file_errors() {
        let base = "generators = [\"a\"]\nkind = \"moment\"\nmax_degree = 2\n\n[values]\n";
        let bad_value = format!("{base}a = \"0.5\"\naa = \"1\"\n");
        assert!(matches!(TableFile::parse(&bad_value).unwrap().to_table(), Err(Error::Parse(_))));
        let missing = format!("{base}a = \"1\"\n");
        assert!(matches!(TableFile::parse(&missing).unwrap().to_table(), Err(Error::Incomplete(_))));
        let too_long = format!("{base}a = \"1\"\naa = \"1\"\naaa = \"1\"\n");
        assert!(matches!(TableFile::parse(&too_long).unwrap().to_table(), Err(Error::Parse(_))));
        assert!(TableFile::parse("generators = 3").is_err());
    }
}
