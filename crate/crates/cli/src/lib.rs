//! Command-line front end for the projective-structure calculator.
//!
//! All mathematics lives in `projcoh-core`; this crate only parses flags,
//! builds reports, and renders them as JSON or TSV. Every code path is
//! reachable through [`run`], so the binary in `main.rs` is a thin shim
//! that maps the outcome to an exit code.

pub mod config;
pub mod reports;

use config::Config;
use reports::Report;

/// What a successful invocation produced: the rendered report plus an
/// optional machine-checked identity that failed (exit code 2).
#[derive(Debug)]
pub struct RunOutcome {
    pub output: String,
    pub violation: Option<String>,
}

pub const USAGE: &str = "\
projcoh — exact calculator for projectively equivariant differential
operators and the Lie-algebra cohomology that classifies them.

USAGE:
    projcoh <command> [flags]

COMMANDS:
    betti           Cohomology dimensions (and representatives) of a module
                    of fields or differential operators.
                      module selection:
                        --k <deg> --lambda <w>          fields of one weight
                        --p <deg> --q <deg> --lambda --mu  operators between
                                                        symbol modules at the
                                                        common weight mu-lambda
                        --lambda <w> --mu <w>           operators between
                                                        densities
                      bounds: --order-cap (default 2), --max-degree (default 3)
                      --oracle (m=1 only): cross-check against a
                      brute-force bounded complex, --xdeg (default 4)
                      --expect d0,d1,...: exit 2 unless the dims match
    split           Decide whether the order-k symbol filtration of
                    operators from lambda-densities to mu-densities splits
                    equivariantly; compares the closed criterion with an
                    exact linear solver. --m --k --lambda --mu
                    [--xdeg certification bound, default 3]
    quantize        Build the equivariant quantization map order by order
                    up to --k (default 3) for weights --lambda --mu;
                    reports coefficient lists, uniqueness, and the
                    coefficient-ratio identity. [--xdeg default 3]
    casimir         Casimir operator on operator symbols: scalar verdict,
                    exact eigenvalue, closed formula. --m --p --lambda --mu
                    [--expect <rational>: exit 2 on mismatch]
    cocycles        Verify the divergence cocycle tau_n and its partner
                    gamma_n on symbol modules, and the commutator constant
                    linking them. --m --p (source degree) with --q or --n,
                    --lambda --mu
    homs            Basis of equivariant differential operators between two
                    weighted symbol modules. --m --p --q --lambda --mu
                    [--order-cap default 2, --xdeg default 3]
    critical-table  Critical weights delta = (m+2q+n)/(m+1) for n up to
                    --n (default 3) at target degree --q (default 0); on
                    the line (m=1) also the matching density weight pairs.

GLOBAL FLAGS:
    --m <dim>          base dimension (required everywhere)
    --format json|tsv  output format (default json)
    --help             this message

Rationals are written p or p/q, e.g. --lambda -1/2.
Exit codes: 0 success, 1 usage error, 2 a verified identity failed.
";

/// Parse arguments, run the selected command, and render its report.
///
/// `Err` means a usage problem (exit 1). `Ok` carries the rendered output
/// and, if a machine-checked identity failed, a violation message
/// (exit 2).
pub fn run(args: &[String]) -> Result<RunOutcome, String> {
    let cfg = Config::parse(args)?;
    let format = cfg.format;
    let (output, violation) = match cfg.command.as_str() {
        "betti" => finish(reports::cmd_betti(&cfg)?, format),
        "split" => finish(reports::cmd_split(&cfg)?, format),
        "quantize" => finish(reports::cmd_quantize(&cfg)?, format),
        "casimir" => finish(reports::cmd_casimir(&cfg)?, format),
        "cocycles" => finish(reports::cmd_cocycles(&cfg)?, format),
        "homs" => finish(reports::cmd_homs(&cfg)?, format),
        "critical-table" => finish(reports::cmd_critical_table(&cfg)?, format),
        other => return Err(format!("unknown command `{other}`")),
    };
    Ok(RunOutcome { output, violation })
}

fn finish<R: Report>(report: R, format: config::Format) -> (String, Option<String>) {
    (report.render(format), report.violation())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn unknown_command_is_a_usage_error() {
        let err = run(&args(&["frobnicate", "--m", "1"])).unwrap_err();
        assert!(err.contains("frobnicate"));
    }

    #[test]
    fn casimir_runs_clean() {
        let out = run(&args(&[
            "casimir", "--m", "2", "--p", "0", "--lambda", "0", "--mu", "0",
        ]))
        .unwrap();
        assert!(out.violation.is_none());
        assert!(out.output.contains("\"schema\": \"projcoh.casimir.v1\""));
    }

    #[test]
    fn expectation_failure_surfaces_as_violation() {
        let out = run(&args(&[
            "casimir", "--m", "1", "--p", "1", "--lambda", "0", "--mu", "0", "--expect", "7",
        ]))
        .unwrap();
        let v = out.violation.expect("violation");
        assert!(v.contains("7"));
    }

    #[test]
    fn tsv_format_is_honored() {
        let out = run(&args(&[
            "critical-table",
            "--m",
            "1",
            "--format",
            "tsv",
        ]))
        .unwrap();
        assert!(out.output.starts_with("n\tdelta\tlambda\tmu\n"));
    }
}
