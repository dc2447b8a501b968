//! Subprocess adapter for external SAT solvers speaking the DIMACS
//! competition protocol: the query is written to a temporary CNF file, the
//! solver's stdout is scanned for an `s SATISFIABLE` / `s UNSATISFIABLE`
//! line plus optional `v` model lines. Exit status is ignored.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::formula::{Assignment, CnfFormula};

use super::{OracleError, OracleVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolverConfig {
    /// Whitespace-split command template; occurrences of `{}` are replaced
    /// by the CNF file path. Without a placeholder the path is appended as
    /// the final argument.
    pub command: String,
    pub timeout: Duration,
}

impl ExternalSolverConfig {
    pub fn new(command: impl Into<String>, timeout: Duration) -> Self {
        ExternalSolverConfig {
            command: command.into(),
            timeout,
        }
    }

    fn argv(&self, path: &str) -> Result<Vec<String>, OracleError> {
        let mut argv: Vec<String> = self.command.split_whitespace().map(String::from).collect();
        if argv.is_empty() {
            return Err(OracleError::Spawn("empty solver command".into()));
        }
        let mut replaced = false;
        for arg in &mut argv {
            if arg.contains("{}") {
                *arg = arg.replace("{}", path);
                replaced = true;
            }
        }
        if !replaced {
            argv.push(path.to_string());
        }
        Ok(argv)
    }
}

pub(crate) fn solve(
    config: &ExternalSolverConfig,
    cnf: &CnfFormula,
) -> Result<OracleVerdict, OracleError> {
    let mut file = tempfile::Builder::new()
        .prefix("oracle-query-")
        .suffix(".cnf")
        .tempfile()
        .map_err(|e| OracleError::Io(e.to_string()))?;
    file.write_all(cnf.to_dimacs().as_bytes())
        .and_then(|_| file.flush())
        .map_err(|e| OracleError::Io(e.to_string()))?;
    let path = file.path().to_string_lossy().into_owned();

    let argv = config.argv(&path)?;
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| OracleError::Spawn(format!("{}: {e}", argv[0])))?;

    // Drain stdout on a helper thread so a chatty solver cannot block on a
    // full pipe while we poll for exit.
    let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout_pipe.read_to_string(&mut buf);
        buf
    });

    let start = Instant::now();
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) => {
                if start.elapsed() > config.timeout {
                    let _ = child.kill();
                    let _ = child.wait();
                    let _ = reader.join();
                    return Err(OracleError::Timeout {
                        seconds: config.timeout.as_secs(),
                    });
                }
                std::thread::sleep(Duration::from_millis(2));
            }
            Err(e) => return Err(OracleError::Spawn(e.to_string())),
        }
    }
    let stdout = reader.join().unwrap_or_default();
    parse_output(&stdout, cnf.variable_count())
}

fn parse_output(stdout: &str, variable_count: u32) -> Result<OracleVerdict, OracleError> {
    let mut satisfiable = None;
    let mut model_literals: Vec<i64> = Vec::new();
    let mut saw_values = false;
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            satisfiable = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                other => {
                    return Err(OracleError::Unparseable(format!(
                        "verdict line `s {other}`"
                    )))
                }
            };
        } else if let Some(rest) = line.strip_prefix("v ") {
            saw_values = true;
            for token in rest.split_whitespace() {
                let value: i64 = token
                    .parse()
                    .map_err(|_| OracleError::Unparseable(format!("model token `{token}`")))?;
                if value != 0 {
                    model_literals.push(value);
                }
            }
        }
    }
    let Some(satisfiable) = satisfiable else {
        return Err(OracleError::MissingVerdict);
    };
    let model = if satisfiable && saw_values {
        let mut assignment = Assignment::from_pairs((1..=variable_count).map(|v| (v, false)));
        for lit in model_literals {
            let var = lit.unsigned_abs();
            if var == 0 || var > u64::from(variable_count) {
                return Err(OracleError::Unparseable(format!(
                    "model literal {lit} out of range"
                )));
            }
            assignment.bind(var as u32, lit > 0);
        }
        Some(assignment)
    } else {
        None
    };
    Ok(OracleVerdict { satisfiable, model })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argv_replaces_placeholder() {
        let cfg = ExternalSolverConfig::new("solver --input={} --quiet", Duration::from_secs(1));
        assert_eq!(
            cfg.argv("/tmp/q.cnf").unwrap(),
            vec!["solver", "--input=/tmp/q.cnf", "--quiet"]
        );
    }

    #[test]
    fn argv_appends_path_without_placeholder() {
        let cfg = ExternalSolverConfig::new("solver -q", Duration::from_secs(1));
        assert_eq!(
            cfg.argv("/tmp/q.cnf").unwrap(),
            vec!["solver", "-q", "/tmp/q.cnf"]
        );
    }

    #[test]
    fn parse_output_reads_verdict_and_model() {
        let verdict = parse_output("c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert!(verdict.satisfiable);
        let model = verdict.model.unwrap();
        assert_eq!(model.value(1), Some(true));
        assert_eq!(model.value(2), Some(false));
        assert_eq!(model.value(3), Some(true));
    }

    #[test]
    fn parse_output_without_verdict_is_an_error() {
        assert!(matches!(
            parse_output("c nothing here\n", 2),
            Err(OracleError::MissingVerdict)
        ));
    }

    #[test]
    fn parse_output_rejects_unknown_verdict() {
        assert!(matches!(
            parse_output("s MAYBE\n", 2),
            Err(OracleError::Unparseable(_))
        ));
    }
}
