//! Flag parsing for the `projcoh` binary: a fixed grammar of
//! `--key value` pairs with exact rational values.
//!
//! Parsing is deliberately hand-rolled: the exit-code contract
//! distinguishes usage errors (1) from verified-property violations (2),
//! so the parser returns plain `Err(String)` for anything malformed and
//! never exits by itself.

use projcoh_core::rational::{parse_rational, Rational};

/// Output encoding for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

/// Parsed command line: one command plus its optional parameters.
#[derive(Clone, Debug)]
pub struct Config {
    pub command: String,
    pub m: Option<usize>,
    pub lambda: Option<Rational>,
    pub mu: Option<Rational>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub k: Option<u32>,
    pub n: Option<u32>,
    pub order_cap: Option<u32>,
    pub xdeg: Option<u32>,
    pub max_degree: Option<usize>,
    pub format: Format,
    pub oracle: bool,
    pub expect: Option<String>,
}

fn parse_count<T: core::str::FromStr>(flag: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value `{value}` for {flag}: expected a nonnegative integer"))
}

impl Config {
    /// Parse `args` (without the program name). The first argument is the
    /// command; the rest must be `--flag value` pairs or `--oracle`.
    pub fn parse(args: &[String]) -> Result<Config, String> {
        let mut cfg = Config {
            command: String::new(),
            m: None,
            lambda: None,
            mu: None,
            p: None,
            q: None,
            k: None,
            n: None,
            order_cap: None,
            xdeg: None,
            max_degree: None,
            format: Format::Json,
            oracle: false,
            expect: None,
        };
        let command = args.first().ok_or_else(|| String::from("missing command"))?;
        cfg.command = command.clone();
        let mut it = args[1..].iter();
        while let Some(flag) = it.next() {
            if flag == "--oracle" {
                cfg.oracle = true;
                continue;
            }
            let value = it
                .next()
                .ok_or_else(|| format!("flag {flag} expects a value"))?;
            match flag.as_str() {
                "--m" => cfg.m = Some(parse_count(flag, value)?),
                "--lambda" => cfg.lambda = Some(parse_rational(value)?),
                "--mu" => cfg.mu = Some(parse_rational(value)?),
                "--p" => cfg.p = Some(parse_count(flag, value)?),
                "--q" => cfg.q = Some(parse_count(flag, value)?),
                "--k" => cfg.k = Some(parse_count(flag, value)?),
                "--n" => cfg.n = Some(parse_count(flag, value)?),
                "--order-cap" => cfg.order_cap = Some(parse_count(flag, value)?),
                "--xdeg" => cfg.xdeg = Some(parse_count(flag, value)?),
                "--max-degree" => cfg.max_degree = Some(parse_count(flag, value)?),
                "--format" => {
                    cfg.format = match value.as_str() {
                        "json" => Format::Json,
                        "tsv" => Format::Tsv,
                        other => {
                            return Err(format!(
                                "invalid value `{other}` for --format: expected json or tsv"
                            ))
                        }
                    }
                }
                "--expect" => cfg.expect = Some(value.clone()),
                other => return Err(format!("unknown flag `{other}`")),
            }
        }
        Ok(cfg)
    }

    pub fn require_m(&self) -> Result<usize, String> {
        match self.m {
            Some(0) | None => Err(String::from("--m is required and must be positive")),
            Some(m) => Ok(m),
        }
    }

    pub fn require_lambda(&self) -> Result<Rational, String> {
        self.lambda
            .clone()
            .ok_or_else(|| String::from("--lambda is required for this command"))
    }

    pub fn require_mu(&self) -> Result<Rational, String> {
        self.mu
            .clone()
            .ok_or_else(|| String::from("--mu is required for this command"))
    }

    pub fn require_k(&self) -> Result<u32, String> {
        self.k
            .ok_or_else(|| String::from("--k is required for this command"))
    }

    pub fn require_p(&self) -> Result<u32, String> {
        self.p
            .ok_or_else(|| String::from("--p is required for this command"))
    }

    pub fn require_q(&self) -> Result<u32, String> {
        self.q
            .ok_or_else(|| String::from("--q is required for this command"))
    }
}
