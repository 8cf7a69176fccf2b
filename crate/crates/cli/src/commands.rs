use serde::Serialize;

use selfchain::chaining::{
    chain_compare, default_grid, max_homogeneity_grid, max_pde_grid, max_residual_grid,
    ChainReport, PdeReport, ResidualReport, DEFAULT_KS, PDE_STEP,
};
use selfchain::copulas::{check_copula_axioms, AxiomReport};
use selfchain::extremevalue::{
    kendall_tau_analytic, kendall_tau_empirical, PickandsEvaluation, PickandsFn,
};
use selfchain::samplers::{sample_batch, SampleKind};
use selfchain::{Family, RngStream};

use crate::config::{Command, Format, RunConfig};
use crate::error::CliError;

/// Residual threshold for the identity and homogeneity sweeps.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// PDE threshold, scaled by `1 + |C ln C|`.
pub const PDE_TOL: f64 = 1e-6;
/// The Gaussian CDF is only accurate to about `1e-7`, which central
/// differences amplify; its PDE sweep uses this looser threshold.
pub const PDE_TOL_GAUSSIAN: f64 = 1e-4;
pub const AXIOM_RECTANGLES: usize = 1000;
pub const AXIOM_TOL: f64 = 1e-12;
pub const PICKANDS_TOL: f64 = 1e-9;

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn json_report<T: Serialize>(config: &RunConfig, body: T) -> String {
    let embedded = config.embedded();
    let mut s = serde_json::to_string_pretty(&Report {
        config: &embedded,
        body,
    })
    .expect("report serializes");
    s.push('\n');
    s
}

fn csv_preamble(config: &RunConfig) -> String {
    let json = serde_json::to_string(&config.embedded()).expect("config serializes");
    format!("# config: {json}\n")
}

fn core(field: &'static str) -> impl Fn(selfchain::Error) -> CliError {
    move |e| CliError::from_core(e, field)
}

fn require_finite(values: &[f64], what: &str) -> Result<(), CliError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::numerical(format!(
            "{what} produced a non-finite value"
        )))
    }
}

/// Runs the configured command and returns the output document.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    match config.command {
        Command::Simulate => simulate(config),
        Command::ChainCompare => chain(config),
        Command::Verify => verify(config),
        Command::Pickands => pickands(config),
        Command::Tau => tau(config),
    }
}

#[derive(Serialize)]
struct SimulateBody<'a> {
    kind: &'static str,
    columns: Vec<String>,
    rows: Vec<&'a [f64]>,
}

fn simulate(config: &RunConfig) -> Result<String, CliError> {
    let mut batch = sample_batch(
        &config.copula,
        config.scenarios as usize,
        &RngStream::new(config.seed, 0),
    );
    if config.arrival_times {
        let model = config.model()?;
        batch = batch
            .into_arrival_times(model.lambdas())
            .map_err(core("lambdas"))?;
    }
    match config.format {
        Format::Json => {
            let (kind, prefix) = match batch.kind {
                SampleKind::Uniforms => ("uniforms", "u"),
                SampleKind::ArrivalTimes => ("arrival_times", "tau"),
            };
            let body = SimulateBody {
                kind,
                columns: (1..=batch.dim).map(|i| format!("{prefix}{i}")).collect(),
                rows: batch.rows().collect(),
            };
            Ok(json_report(config, body))
        }
        Format::Csv => {
            let mut out = csv_preamble(config).into_bytes();
            batch.write_csv(&mut out).expect("writing to memory");
            Ok(String::from_utf8(out).expect("csv is utf-8"))
        }
    }
}

#[derive(Serialize)]
struct ChainBody {
    report: ChainReport,
}

fn chain(config: &RunConfig) -> Result<String, CliError> {
    let model = config.model()?;
    let report = chain_compare(
        &model,
        config.periods,
        config.dt,
        config.scenarios,
        config.seed,
    )
    .map_err(core("copula"))?;
    require_finite(
        &[
            report.one_shot_analytic,
            report.multi_step_analytic,
            report.gap,
        ],
        "chain-compare",
    )?;
    Ok(match config.format {
        Format::Json => json_report(config, ChainBody { report }),
        Format::Csv => format!(
            "{}{}\n{}\n",
            csv_preamble(config),
            ChainReport::csv_header(),
            report.csv_row()
        ),
    })
}

/// A point where a characterization of self-chaining fails.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub characterization: &'static str,
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    pub residual: f64,
}

#[derive(Serialize)]
struct Sweep {
    threshold: f64,
    passed: bool,
    #[serde(flatten)]
    report: ResidualReport,
}

#[derive(Serialize)]
struct VerifyBody {
    family: &'static str,
    verdict: &'static str,
    witness: Option<Witness>,
    axioms: AxiomReport,
    self_chaining: Sweep,
    homogeneity: Sweep,
    /// Bivariate specs only.
    pde: Option<PdeReport>,
}

fn verify(config: &RunConfig) -> Result<String, CliError> {
    let spec = &config.copula;
    let mut rng = RngStream::new(config.seed, 0);
    let axioms =
        check_copula_axioms(spec, AXIOM_RECTANGLES, &mut rng, AXIOM_TOL).map_err(core("copula"))?;
    let grid = default_grid(spec.dim());
    let identity = max_residual_grid(spec, &grid, &DEFAULT_KS).map_err(core("copula"))?;
    let homogeneity = max_homogeneity_grid(spec, &grid, &DEFAULT_KS).map_err(core("copula"))?;
    let pde = if spec.dim() == 2 {
        let tol = if spec.family() == Family::Gaussian {
            PDE_TOL_GAUSSIAN
        } else {
            PDE_TOL
        };
        Some(max_pde_grid(spec, &grid, PDE_STEP, tol).map_err(core("copula"))?)
    } else {
        None
    };
    require_finite(&[identity.max_residual, homogeneity.max_residual], "verify")?;

    let sweep = |report: ResidualReport| Sweep {
        threshold: RESIDUAL_TOL,
        passed: report.max_residual <= RESIDUAL_TOL,
        report,
    };
    let identity = sweep(identity);
    let homogeneity = sweep(homogeneity);
    let witness = if !identity.passed {
        Some(Witness {
            characterization: "identity",
            point: identity.report.argmax_point.clone(),
            k: Some(identity.report.argmax_k),
            residual: identity.report.max_residual,
        })
    } else if !homogeneity.passed {
        Some(Witness {
            characterization: "homogeneity",
            point: homogeneity
                .report
                .argmax_point
                .iter()
                .map(|u| u.ln())
                .collect(),
            k: Some(homogeneity.report.argmax_k),
            residual: homogeneity.report.max_residual,
        })
    } else {
        pde.as_ref().filter(|p| !p.passed).map(|p| Witness {
            characterization: "pde",
            point: p.argmax_point.clone(),
            k: None,
            residual: p.max_scaled_residual,
        })
    };
    let body = VerifyBody {
        family: spec.family().name(),
        verdict: if witness.is_none() {
            "SELF-CHAINING"
        } else {
            "NOT SELF-CHAINING"
        },
        witness,
        axioms,
        self_chaining: identity,
        homogeneity,
        pde,
    };
    Ok(match config.format {
        Format::Json => json_report(config, body),
        Format::Csv => {
            let point: Vec<String> = body
                .self_chaining
                .report
                .argmax_point
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
            format!(
                "{}family,verdict,axioms_passed,self_chain_max,self_chain_argmax_point,\
                 self_chain_argmax_k,homogeneity_max,pde_max_abs,pde_passed\n\
                 {},{},{},{:?},{},{:?},{:?},{},{}\n",
                csv_preamble(config),
                body.family,
                body.verdict,
                body.axioms.passed,
                body.self_chaining.report.max_residual,
                point.join(";"),
                body.self_chaining.report.argmax_k,
                body.homogeneity.report.max_residual,
                opt(body.pde.as_ref().map(|p| p.max_abs_residual)),
                body.pde
                    .as_ref()
                    .map(|p| p.passed.to_string())
                    .unwrap_or_default(),
            )
        }
    })
}

#[derive(Serialize)]
struct PickandsBody {
    label: String,
    #[serde(flatten)]
    evaluation: PickandsEvaluation,
}

fn pickands(config: &RunConfig) -> Result<String, CliError> {
    let a = PickandsFn::from_copula(&config.copula).map_err(core("copula"))?;
    let evaluation =
        PickandsEvaluation::new(a, config.grid_size, PICKANDS_TOL).map_err(core("grid_size"))?;
    Ok(match config.format {
        Format::Json => json_report(
            config,
            PickandsBody {
                label: a.label(),
                evaluation,
            },
        ),
        Format::Csv => {
            let mut out = csv_preamble(config).into_bytes();
            evaluation.write_csv(&mut out).expect("writing to memory");
            String::from_utf8(out).expect("csv is utf-8")
        }
    })
}

#[derive(Serialize)]
struct TauBody {
    family: &'static str,
    analytic: Option<f64>,
    empirical: f64,
    samples: u64,
    abs_error: Option<f64>,
}

fn tau(config: &RunConfig) -> Result<String, CliError> {
    if config.copula.dim() != 2 {
        return Err(CliError::config(
            "copula",
            format!(
                "Kendall's tau needs a bivariate copula, got dim {}",
                config.copula.dim()
            ),
        ));
    }
    let batch = sample_batch(
        &config.copula,
        config.scenarios as usize,
        &RngStream::new(config.seed, 0),
    );
    let pairs: Vec<(f64, f64)> = batch.rows().map(|r| (r[0], r[1])).collect();
    let empirical = kendall_tau_empirical(&pairs).map_err(core("scenarios"))?;
    let analytic = kendall_tau_analytic(&config.copula);
    let body = TauBody {
        family: config.copula.family().name(),
        analytic,
        empirical,
        samples: config.scenarios,
        abs_error: analytic.map(|a| (empirical - a).abs()),
    };
    Ok(match config.format {
        Format::Json => json_report(config, body),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
            format!(
                "{}family,analytic,empirical,samples\n{},{},{:?},{}\n",
                csv_preamble(config),
                body.family,
                opt(body.analytic),
                body.empirical,
                body.samples
            )
        }
    })
}
