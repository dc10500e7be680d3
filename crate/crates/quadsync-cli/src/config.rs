//! Flat key=value config files and their merge with command-line overrides.
//! Precedence: command-line flag, then config file, then built-in default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// What went wrong, mapped onto the documented exit codes:
/// config errors exit 2, numerical errors exit 3, I/O errors exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(quadsync::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(e) => write!(f, "numerical error: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Treat parameter-validation failures as config errors; everything else the
/// core reports is a genuine numerical failure.
pub fn setup_err(e: quadsync::Error) -> CliError {
    CliError::Config(e.to_string())
}

pub fn run_err(e: quadsync::Error) -> CliError {
    CliError::Numeric(e)
}

/// Parsed key=value file. Lines starting with '#' and blank lines are ignored.
#[derive(Debug, Default)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { map })
    }

    /// Reject keys the current subcommand does not understand.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown config key {key:?}")));
            }
        }
        Ok(())
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        self.map.get(key).cloned()
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Config(format!("key {key}: {v:?} is not a number")))
            })
            .transpose()
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Config(format!("key {key}: {v:?} is not an integer")))
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("key {key}: {v:?} is not a count")))
            })
            .transpose()
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.map
            .get(key)
            .map(|v| parse_f64_list(v).map_err(|e| CliError::Config(format!("key {key}: {e}"))))
            .transpose()
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let items: Result<Vec<f64>, _> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("{x:?} is not a number")))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

/// flag > file > default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
