//! Command-line arguments and the resolved job configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hallforge_core::quiver::{parse_int_list, parse_quiver_any};
use hallforge_core::{Budget, DimVector, PrimeField, Quiver};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "hallforge", version, about = "Exact Hall algebras of quivers over prime fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Quiver file (DSL or JSON), inline text (`;` separates DSL lines), or `A<n>`.
    #[arg(long, global = true)]
    pub quiver: Option<String>,
    /// Field order; must be prime.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,
    /// Per-vertex dimension bound, e.g. `2,2`. Defaults to 2 at every vertex.
    #[arg(long, global = true)]
    pub bound: Option<String>,
    /// Cohomological amplitude interval `a,b` for derived enumeration.
    #[arg(long, global = true, default_value = "0,0", allow_hyphen_values = true)]
    pub amp: String,
    /// Cap on primitive enumeration steps per call.
    #[arg(long, global = true, default_value_t = hallforge_core::budget::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Cache directory; caching is off when neither this nor HALLFORGE_CACHE is set.
    #[arg(long, global = true, env = "HALLFORGE_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Classical,
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Hall,
    Derived,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate iso classes up to the bound and report counts per dimension vector.
    Catalog {
        /// Also write the catalog JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of two basis classes.
    Product {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value_t = Mode::Classical)]
        mode: Mode,
    },
    /// Derived product of two objects, e.g. `H0=(1,0);H-1=(0,1)`.
    Dproduct {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Hall number g^R_{M,N}, by subobject counting and cross-checked by exact sequences.
    Hallnum { r: String, m: String, n: String },
    /// All structure constants in one degree, as CSV.
    Table {
        /// Degree as comma-separated integers (a K0 class in derived mode).
        #[arg(allow_hyphen_values = true)]
        degree: String,
        #[arg(long, value_enum, default_value_t = Mode::Classical)]
        mode: Mode,
    },
    /// Run invariant suites; exit code 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

/// Fully resolved settings shared by every command.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub quiver: Arc<Quiver>,
    pub field: PrimeField,
    pub bound: DimVector,
    pub amplitude: (i32, i32),
    pub budget: Budget,
    pub cache: Option<PathBuf>,
    pub format: Option<Format>,
}

impl JobConfig {
    pub fn from_args(args: &GlobalArgs) -> CliResult<Self> {
        let source = args
            .quiver
            .as_deref()
            .ok_or_else(|| CliError::Invalid("--quiver is required".into()))?;
        let quiver = Arc::new(load_quiver(source)?);
        let field = PrimeField::new(args.q).map_err(|e| CliError::Invalid(e.to_string()))?;
        let n = quiver.vertex_count();
        let bound = match &args.bound {
            Some(text) => {
                let v = parse_int_list(text).map_err(CliError::Invalid)?;
                if v.len() != n || v.iter().any(|&x| x < 0) {
                    return Err(CliError::Invalid(format!(
                        "--bound needs {n} nonnegative entries, got `{text}`"
                    )));
                }
                DimVector(v.into_iter().map(|x| x as u32).collect())
            }
            None => DimVector(vec![2; n]),
        };
        if bound.is_zero() {
            return Err(CliError::Invalid("--bound must be positive somewhere".into()));
        }
        let amp = parse_int_list(&args.amp).map_err(CliError::Invalid)?;
        let amplitude = match amp.as_slice() {
            [a, b] if a <= b => (*a as i32, *b as i32),
            _ => return Err(CliError::Invalid(format!("--amp must be `a,b` with a <= b, got `{}`", args.amp))),
        };
        if args.budget == 0 {
            return Err(CliError::Invalid("--budget must be positive".into()));
        }
        Ok(JobConfig {
            quiver,
            field,
            bound,
            amplitude,
            budget: Budget::new(args.budget),
            cache: args.cache.clone(),
            format: args.format,
        })
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }
}

/// A file path, `A<n>` for the equioriented type-A quiver, or inline quiver text.
pub fn load_quiver(source: &str) -> CliResult<Quiver> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Read {
            path: path.to_path_buf(),
            source: e,
        })?;
        return parse_quiver_any(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())));
    }
    if let Some(n) = source.strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
        if n == 0 {
            return Err(CliError::Invalid("A0 has no vertices".into()));
        }
        return Ok(Quiver::linear(n));
    }
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else if source.contains("vertex") {
        source.replace(';', "\n")
    } else {
        return Err(CliError::Invalid(format!("no quiver file `{source}`")));
    };
    parse_quiver_any(&text).map_err(|e| CliError::Invalid(e.to_string()))
}
