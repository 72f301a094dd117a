use std::fmt;
use std::fs;
use std::path::Path;

use possi_core::{solve_all, CoinsuranceProblem, QuadratureConfig};

use crate::record::{render_csv, render_json, render_table, RunRecord};
use crate::schema::{OperatorSpec, ProblemFile, RiskSpec, WeightingSpec};
use crate::{OutputFormat, SweepParam};

pub const QUAD_NODES_ENV: &str = "POSSI_QUAD_NODES";

/// Input/schema problems exit with 2, computation failures with 1.
#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(msg) => write!(f, "{msg}"),
            CliError::Compute(msg) => write!(f, "{msg}"),
        }
    }
}

pub fn load_file(path: &Path) -> Result<ProblemFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Schema(format!(
            "{}: invalid problem file at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

/// Defaults, overridden by the file's quadrature block, overridden by the
/// outer-node environment variable.
pub fn quadrature_for(file: &ProblemFile) -> Result<QuadratureConfig, CliError> {
    let mut q = QuadratureConfig::default();
    if let Some(spec) = &file.quadrature {
        q = QuadratureConfig::new(spec.outer, spec.inner, q.degenerate_eps)
            .map_err(|e| CliError::Schema(e.to_string()))?;
    }
    if let Ok(raw) = std::env::var(QUAD_NODES_ENV) {
        let outer: usize = raw.parse().map_err(|_| {
            CliError::Schema(format!("{QUAD_NODES_ENV} must be an integer (got {raw:?})"))
        })?;
        q = q
            .with_outer_nodes(outer)
            .map_err(|e| CliError::Schema(e.to_string()))?;
    }
    Ok(q)
}

fn build_problem(
    file: &ProblemFile,
    operator: &OperatorSpec,
    lambda: f64,
    q: QuadratureConfig,
) -> Result<CoinsuranceProblem, CliError> {
    let mut adjusted = file.clone();
    adjusted.operator = operator.clone();
    adjusted.lambda = lambda;
    adjusted
        .build_problem(q)
        .map_err(|e| CliError::Schema(e.to_string()))
}

/// Notes surfaced alongside warnings; currently the exponential-utility
/// positivity guarantee, so a loading sweep shows where it switches on.
fn record_notes(problem: &CoinsuranceProblem) -> Vec<String> {
    match problem.cara_positivity_sufficient() {
        Ok(true) => vec!["positivity guaranteed (lambda > 1/E_f)".to_string()],
        _ => Vec::new(),
    }
}

fn emit(
    records: &[RunRecord],
    format: OutputFormat,
    gap: Option<f64>,
) -> String {
    match format {
        OutputFormat::Csv => render_csv(
            records,
            gap.map(|g| format!("predicted_gap_t1_t2,{}", crate::record::render(Some(g))))
                .as_deref(),
        ),
        OutputFormat::Json => render_json(records, gap),
        OutputFormat::Table => render_table(
            records,
            gap.map(|g| format!("predicted rate gap (t1 vs t2): {}", crate::record::render(Some(g))))
                .as_deref(),
        ),
    }
}

pub fn run_solve(input: &Path, format: OutputFormat, tol: f64) -> Result<String, CliError> {
    let file = load_file(input)?;
    let q = quadrature_for(&file)?;
    let problem = build_problem(&file, &file.operator, file.lambda, q)?;
    let report = problem
        .solve_report(tol)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let record = RunRecord::from_report(
        "solve",
        file.lambda,
        file.operator.label(),
        &report,
        &record_notes(&problem),
    );
    Ok(emit(&[record], format, None))
}

pub fn run_sweep(
    input: &Path,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    format: OutputFormat,
    tol: f64,
) -> Result<String, CliError> {
    if steps < 2 {
        return Err(CliError::Schema(format!(
            "sweep needs at least 2 steps (got {steps})"
        )));
    }
    let file = load_file(input)?;
    let q = quadrature_for(&file)?;
    if matches!(param, SweepParam::C) && !matches!(file.operator, OperatorSpec::Mix { .. }) {
        return Err(CliError::Schema(
            "sweeping the mixture weight requires an operator of kind \"mix\"".to_string(),
        ));
    }

    let grid: Vec<f64> = (0..steps)
        .map(|k| from + (to - from) * k as f64 / (steps - 1) as f64)
        .collect();

    // Build every grid point first; points that fail to build become
    // warning rows. The buildable problems are solved in one batch.
    let mut rows: Vec<Result<(f64, String, CoinsuranceProblem), RunRecord>> = Vec::new();
    for &value in &grid {
        let (lambda, operator) = match param {
            SweepParam::Lambda => (value, file.operator.clone()),
            SweepParam::C => {
                let OperatorSpec::Mix { left, right, .. } = &file.operator else {
                    unreachable!("validated above");
                };
                (
                    file.lambda,
                    OperatorSpec::Mix {
                        c: value,
                        left: left.clone(),
                        right: right.clone(),
                    },
                )
            }
        };
        match build_problem(&file, &operator, lambda, q) {
            Ok(p) => rows.push(Ok((lambda, operator.label(), p))),
            Err(e) => rows.push(Err(RunRecord::failed(
                "sweep",
                lambda,
                operator.label(),
                e.to_string(),
            ))),
        }
    }

    let problems: Vec<CoinsuranceProblem> = rows
        .iter()
        .filter_map(|r| r.as_ref().ok().map(|(_, _, p)| p.clone()))
        .collect();
    let mut solved = solve_all(&problems, tol).into_iter();

    let mut records = Vec::with_capacity(rows.len());
    for row in rows {
        match row {
            Err(failed) => records.push(failed),
            Ok((lambda, label, problem)) => {
                let outcome = solved.next().expect("one result per problem");
                match outcome {
                    Ok(report) => records.push(RunRecord::from_report(
                        "sweep",
                        lambda,
                        label,
                        &report,
                        &record_notes(&problem),
                    )),
                    Err(e) => records.push(RunRecord::failed("sweep", lambda, label, e.to_string())),
                }
            }
        }
    }
    Ok(emit(&records, format, None))
}

pub fn run_compare(
    input: &Path,
    operators: &str,
    format: OutputFormat,
    tol: f64,
) -> Result<String, CliError> {
    let specs = parse_operator_list(operators)?;
    if specs.len() < 2 {
        return Err(CliError::Schema(
            "compare needs at least two operators".to_string(),
        ));
    }
    let file = load_file(input)?;
    let q = quadrature_for(&file)?;

    let mut records = Vec::with_capacity(specs.len());
    for spec in &specs {
        let problem = build_problem(&file, spec, file.lambda, q)?;
        let report = problem
            .solve_report(tol)
            .map_err(|e| CliError::Compute(e.to_string()))?;
        records.push(RunRecord::from_report(
            "compare",
            file.lambda,
            spec.label(),
            &report,
            &record_notes(&problem),
        ));
    }

    // The predicted retention-reciprocal gap applies under the linear
    // weight with a triangular risk and positive loading.
    let gap = if matches!(
        file.weighting,
        WeightingSpec::Power { exponent } if exponent == 1.0
    ) && matches!(file.risk, RiskSpec::Triangular { .. })
        && file.lambda > 0.0
    {
        build_problem(&file, &OperatorSpec::T1, file.lambda, q)
            .ok()
            .and_then(|p| p.rate_gap_t1_t2().ok())
            .map(|g| g.predicted)
    } else {
        None
    };
    Ok(emit(&records, format, gap))
}

fn parse_operator_list(raw: &str) -> Result<Vec<OperatorSpec>, CliError> {
    raw.split(',')
        .map(|token| {
            let token = token.trim();
            match token {
                "t1" => Ok(OperatorSpec::T1),
                "t2" => Ok(OperatorSpec::T2),
                _ => {
                    if let Some(cs) = token.strip_prefix("mix:") {
                        let c: f64 = cs.parse().map_err(|_| {
                            CliError::Schema(format!("invalid mixture weight in {token:?}"))
                        })?;
                        Ok(OperatorSpec::Mix {
                            c,
                            left: Box::new(OperatorSpec::T1),
                            right: Box::new(OperatorSpec::T2),
                        })
                    } else {
                        Err(CliError::Schema(format!(
                            "unknown operator {token:?} (expected t1, t2, or mix:<c>)"
                        )))
                    }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_list_parsing() {
        let specs = parse_operator_list("t1, t2,mix:0.5").unwrap();
        assert_eq!(specs.len(), 3);
        assert_eq!(specs[2].label(), "mix:0.5");
        assert!(parse_operator_list("t3").is_err());
        assert!(parse_operator_list("mix:x").is_err());
    }
}
