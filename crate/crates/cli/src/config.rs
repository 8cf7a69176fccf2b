use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use selfchain::copulas::CorrelationMatrix;
use selfchain::{ArrivalTimeModel, CopulaSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    ChainCompare,
    Verify,
    Pickands,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub const DEFAULT_PERIODS: u32 = 100;
pub const DEFAULT_DT: f64 = 1.0;
pub const DEFAULT_SCENARIOS: u64 = 100_000;
pub const DEFAULT_GRID_SIZE: usize = 101;

/// Fully resolved run configuration. Reports embed it, so every number in a
/// report can be regenerated from the report alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub copula: CopulaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[serde(rename = "N")]
    pub periods: u32,
    #[serde(rename = "T")]
    pub dt: f64,
    pub scenarios: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    pub format: Format,
    #[serde(default)]
    pub arrival_times: bool,
    pub grid_size: usize,
}

/// Config file contents: any subset of [`RunConfig`]. `copula` may be a
/// spec object or a string in the `--copula` syntax.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub copula: Option<Value>,
    pub lambdas: Option<Vec<f64>>,
    #[serde(rename = "N")]
    pub periods: Option<u32>,
    #[serde(rename = "T")]
    pub dt: Option<f64>,
    pub scenarios: Option<u64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub arrival_times: Option<bool>,
    pub grid_size: Option<usize>,
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Copula as JSON, a path to a JSON file, or inline, e.g. `gumbel:2`,
    /// `mo:0.3,0.7`, `gaussian:0.9@3`, `independence`, `comonotone@4`.
    #[arg(long)]
    pub copula: Option<String>,
    /// Exponential default intensities, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambdas: Option<Vec<f64>>,
    /// Number of periods N.
    #[arg(long)]
    pub periods: Option<u32>,
    /// Period length T.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub scenarios: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads. Results do not depend on this value.
    #[arg(long)]
    pub workers: Option<usize>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Command-specific flags.
#[derive(Debug, Clone, Default)]
pub struct ExtraArgs {
    pub arrival_times: bool,
    pub grid_size: Option<usize>,
}

/// Parses `--copula`: JSON text, a JSON file, or the inline syntax
/// `family[:p1,p2,…][@dim]`.
pub fn parse_copula(text: &str) -> Result<CopulaSpec, CliError> {
    let text = text.trim();
    if text.starts_with('{') {
        return CopulaSpec::from_json(text).map_err(|e| CliError::from_core(e, "copula"));
    }
    let path = Path::new(text);
    if path.is_file() {
        let body = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("copula", format!("{}: {e}", path.display())))?;
        return CopulaSpec::from_json(&body).map_err(|e| CliError::from_core(e, "copula"));
    }
    parse_inline(text).map_err(|e| match e {
        InlineError::Syntax(msg) => CliError::config("copula", msg),
        InlineError::Core(e) => CliError::from_core(e, "copula"),
    })
}

enum InlineError {
    Syntax(String),
    Core(selfchain::Error),
}

impl From<selfchain::Error> for InlineError {
    fn from(e: selfchain::Error) -> Self {
        InlineError::Core(e)
    }
}

fn parse_inline(text: &str) -> Result<CopulaSpec, InlineError> {
    let syntax = |msg: String| InlineError::Syntax(msg);
    let (head, dim) = match text.split_once('@') {
        Some((h, d)) => {
            let dim = d
                .parse::<usize>()
                .map_err(|_| syntax(format!("dimension `{d}` is not an integer")))?;
            (h, Some(dim))
        }
        None => (text, None),
    };
    let (name, params) = match head.split_once(':') {
        Some((n, p)) => {
            let params = p
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| syntax(format!("parameter `{x}` is not a number")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (n, params)
        }
        None => (head, Vec::new()),
    };
    let arity = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(syntax(format!(
                "`{name}` takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let d = dim.unwrap_or(2);
    Ok(match name.to_ascii_lowercase().as_str() {
        "gumbel" | "gumbel-hougaard" | "gh" => {
            arity(1)?;
            CopulaSpec::gumbel_hougaard(params[0], d)?
        }
        "mo" | "marshall-olkin" => {
            arity(2)?;
            if d != 2 {
                return Err(syntax("the Marshall-Olkin copula is bivariate".into()));
            }
            CopulaSpec::marshall_olkin(params[0], params[1])?
        }
        "gaussian" | "normal" => {
            arity(1)?;
            CopulaSpec::gaussian(CorrelationMatrix::equicorrelated(d, params[0])?)
        }
        "independence" | "product" => {
            arity(0)?;
            CopulaSpec::independence(d)?
        }
        "comonotone" | "comonotonic" => {
            arity(0)?;
            CopulaSpec::comonotone(d)?
        }
        other => return Err(syntax(format!("unknown copula family `{other}`"))),
    })
}

fn copula_from_value(v: Value) -> Result<CopulaSpec, CliError> {
    match v {
        Value::String(s) => parse_copula(&s),
        other => {
            serde_json::from_value(other).map_err(|e| CliError::config("copula", e.to_string()))
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<PartialConfig, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&body).map_err(|e| CliError::config("config", e.to_string()))
}

impl RunConfig {
    /// Merges flags over file values over defaults, then validates.
    pub fn resolve(
        command: Command,
        file: PartialConfig,
        flags: &CommonArgs,
        extra: &ExtraArgs,
    ) -> Result<Self, CliError> {
        let copula = match (&flags.copula, file.copula) {
            (Some(text), _) => parse_copula(text)?,
            (None, Some(v)) => copula_from_value(v)?,
            (None, None) => return Err(CliError::config("copula", "a copula is required")),
        };
        let config = RunConfig {
            command,
            copula,
            lambdas: flags.lambdas.clone().or(file.lambdas),
            periods: flags.periods.or(file.periods).unwrap_or(DEFAULT_PERIODS),
            dt: flags.dt.or(file.dt).unwrap_or(DEFAULT_DT),
            scenarios: flags
                .scenarios
                .or(file.scenarios)
                .unwrap_or(DEFAULT_SCENARIOS),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            output_path: flags.out.clone().or(file.output_path),
            format: flags.format.or(file.format).unwrap_or_default(),
            arrival_times: extra.arrival_times || file.arrival_times.unwrap_or(false),
            grid_size: extra
                .grid_size
                .or(file.grid_size)
                .unwrap_or(DEFAULT_GRID_SIZE),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.periods == 0 {
            return Err(CliError::config("N", "at least one period is required"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CliError::config(
                "T",
                format!("{} is not a positive period length", self.dt),
            ));
        }
        let min_scenarios = if self.command == Command::Tau { 2 } else { 1 };
        if self.scenarios < min_scenarios {
            return Err(CliError::config(
                "scenarios",
                format!("at least {min_scenarios} scenario(s) required"),
            ));
        }
        if usize::try_from(self.scenarios).is_err() {
            return Err(CliError::config("scenarios", "too many scenarios"));
        }
        if self.grid_size < 3 {
            return Err(CliError::config(
                "grid_size",
                format!("{} < 3", self.grid_size),
            ));
        }
        if self.lambdas.is_some() {
            self.model()?;
        }
        let needs_lambdas = match self.command {
            Command::ChainCompare => true,
            Command::Simulate => self.arrival_times,
            _ => false,
        };
        if needs_lambdas && self.lambdas.is_none() {
            return Err(CliError::config("lambdas", "intensities are required"));
        }
        Ok(())
    }

    /// The arrival-time model; requires `lambdas`.
    pub fn model(&self) -> Result<ArrivalTimeModel, CliError> {
        let lambdas = self
            .lambdas
            .clone()
            .ok_or_else(|| CliError::config("lambdas", "intensities are required"))?;
        ArrivalTimeModel::new(lambdas, self.copula.clone())
            .map_err(|e| CliError::from_core(e, "lambdas"))
    }

    /// Canonical JSON, one key per line.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Re-reads canonical JSON through the config-file path.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: PartialConfig =
            serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))?;
        let command = file
            .command
            .ok_or_else(|| CliError::config("command", "missing command"))?;
        RunConfig::resolve(command, file, &CommonArgs::default(), &ExtraArgs::default())
    }

    /// The config as embedded in reports: the output location is left out so
    /// that identical runs written to different files stay byte-identical.
    pub fn embedded(&self) -> RunConfig {
        RunConfig {
            output_path: None,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use selfchain::Family;

    #[test]
    fn inline_syntax() {
        let g = parse_copula("gumbel:2").unwrap();
        assert_eq!(
            (g.family(), g.theta(), g.dim()),
            (Family::GumbelHougaard, Some(2.0), 2)
        );
        assert_eq!(parse_copula("gumbel:3@4").unwrap().dim(), 4);
        assert_eq!(
            parse_copula("mo:0.3,0.7").unwrap().alphas(),
            Some((0.3, 0.7))
        );
        let ga = parse_copula("gaussian:0.5@3").unwrap();
        assert_eq!(ga.corr().unwrap().get(0, 2), 0.5);
        assert_eq!(
            parse_copula(" independence ").unwrap().family(),
            Family::Independence
        );
        assert_eq!(parse_copula("comonotone@5").unwrap().dim(), 5);
    }

    #[test]
    fn inline_errors_name_the_field() {
        for bad in [
            "gumbel",
            "gumbel:x",
            "frank:2",
            "mo:0.3",
            "gumbel:0.5",
            "mo:0.1,0.2@3",
            "gumbel:2@x",
        ] {
            let e = parse_copula(bad).unwrap_err();
            assert_eq!(e.field.as_deref(), Some("copula"), "{bad}");
            assert_eq!(e.exit_code(), 2);
        }
    }

    #[test]
    fn json_copula() {
        let spec = CopulaSpec::marshall_olkin(0.2, 0.9).unwrap();
        assert_eq!(parse_copula(&spec.to_json()).unwrap(), spec);
    }

    fn flags(copula: &str) -> CommonArgs {
        CommonArgs {
            copula: Some(copula.into()),
            ..CommonArgs::default()
        }
    }

    #[test]
    fn defaults_and_overrides() {
        let file = PartialConfig {
            copula: Some(Value::String("gumbel:2".into())),
            seed: Some(5),
            scenarios: Some(10),
            ..PartialConfig::default()
        };
        let f = CommonArgs {
            seed: Some(9),
            ..CommonArgs::default()
        };
        let c = RunConfig::resolve(Command::Verify, file, &f, &ExtraArgs::default()).unwrap();
        assert_eq!(
            (c.seed, c.scenarios, c.periods, c.dt),
            (9, 10, DEFAULT_PERIODS, DEFAULT_DT)
        );
        assert_eq!(c.copula.theta(), Some(2.0));
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn validation_errors() {
        let resolve = |cmd, f: CommonArgs| {
            RunConfig::resolve(cmd, PartialConfig::default(), &f, &ExtraArgs::default())
        };
        let e = resolve(Command::Verify, CommonArgs::default()).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("copula"));
        let e = resolve(Command::ChainCompare, flags("gumbel:2")).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("lambdas"));
        let mut f = flags("gumbel:2");
        f.lambdas = Some(vec![0.02, 0.02, 0.02]);
        let e = resolve(Command::Simulate, f).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("lambdas"));
        let mut f = flags("gumbel:2");
        f.periods = Some(0);
        assert_eq!(
            resolve(Command::Verify, f).unwrap_err().field.as_deref(),
            Some("N")
        );
        let mut f = flags("gumbel:2");
        f.dt = Some(-1.0);
        assert_eq!(
            resolve(Command::Verify, f).unwrap_err().field.as_deref(),
            Some("T")
        );
        let mut f = flags("gumbel:2");
        f.scenarios = Some(1);
        assert_eq!(
            resolve(Command::Tau, f).unwrap_err().field.as_deref(),
            Some("scenarios")
        );
    }

    #[test]
    fn canonical_round_trip() {
        let mut f = flags("gaussian:0.9");
        f.lambdas = Some(vec![0.02, 0.03]);
        f.seed = Some(42);
        f.out = Some("report.json".into());
        let c = RunConfig::resolve(
            Command::ChainCompare,
            PartialConfig::default(),
            &f,
            &ExtraArgs::default(),
        )
        .unwrap();
        let json = c.to_json();
        let back = RunConfig::from_json(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), json);
        assert!(c.embedded().output_path.is_none());
    }

    #[test]
    fn unknown_file_fields_rejected() {
        let e =
            RunConfig::from_json(r#"{"command":"tau","copula":"gumbel:2","sede":1}"#).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("config"));
    }
}
