use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Run-wide settings shared by every subcommand.
pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub config_path: Option<PathBuf>,
}

impl Context {
    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Reads the config document, or the defaults when none was given.
    pub fn load<C: DeserializeOwned + Default>(&self) -> Result<C, CliError> {
        let Some(path) = &self.config_path else {
            return Ok(C::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Abort { message: String, snapshot: Option<PathBuf> },
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Abort { .. } => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Abort { message, snapshot } => {
                write!(f, "numerical abort: {message}")?;
                if let Some(p) = snapshot {
                    write!(f, " (snapshot: {})", p.display())?;
                }
                Ok(())
            }
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl From<qnslab::Error> for CliError {
    fn from(e: qnslab::Error) -> Self {
        use qnslab::Error as E;
        match e {
            E::InvalidInput(_) | E::Cfl { .. } | E::UnderResolved { .. } | E::GridMismatch => CliError::Config(e.to_string()),
            E::NumericalAbort { ref snapshot, .. } => CliError::Abort {
                snapshot: snapshot.clone(),
                message: e.to_string(),
            },
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything written to `summary.json`.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub subcommand: &'static str,
    /// Acceptance criteria exercised by this invocation.
    pub criteria: Vec<u32>,
    pub seed: u64,
    pub threads: usize,
    pub config: Value,
    pub invariants: Vec<Invariant>,
    pub results: Value,
    pub artifacts: Vec<String>,
}

impl Summary {
    pub fn new(subcommand: &'static str, criteria: Vec<u32>, ctx: &Context, config: &impl Serialize) -> Result<Self, CliError> {
        Ok(Self {
            subcommand,
            criteria,
            seed: ctx.seed,
            threads: ctx.threads,
            config: serde_json::to_value(config)?,
            invariants: Vec::new(),
            results: Value::Object(Default::default()),
            artifacts: Vec::new(),
        })
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.invariants.push(Invariant {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> Result<(), CliError> {
        if let Value::Object(map) = &mut self.results {
            map.insert(key.into(), serde_json::to_value(value)?);
        }
        Ok(())
    }

    pub fn artifact(&mut self, path: &Path) {
        if let Some(name) = path.file_name() {
            self.artifacts.push(name.to_string_lossy().into_owned());
        }
    }

    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Invariant> {
        self.invariants.iter().filter(|i| !i.passed)
    }

    pub fn write(&self, ctx: &Context) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(ctx.path("summary.json"), text)?;
        Ok(())
    }
}

/// Rejects configurations whose values fall outside a declared range.
pub fn require(ok: bool, key: &str, msg: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{key}`: {msg}")))
    }
}
