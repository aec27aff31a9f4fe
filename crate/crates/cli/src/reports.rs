//! Report construction for every `projcoh` command.
//!
//! Each command produces a serializable report struct. Reports are
//! deterministic: struct fields serialize in declaration order, all
//! rationals are canonical `p/q` strings, and every list is emitted in a
//! canonical order. A report may additionally carry a *violation*: a
//! machine-checked identity that failed, which the binary maps to exit
//! code 2.

use serde::Serialize;

use projcoh_core::cohomology::{
    bounded_betti_oracle, weight_zero_betti, CeGradedModule, FieldModule, OperatorModule,
};
use projcoh_core::field::SpaceCtx;
use projcoh_core::maps::{
    casimir, casimir_scalar, cocycle_check, commutator_constant, commutator_defect,
    equivariant_homs, gamma_map, quantization_map, split_decision, tau_map,
};
use projcoh_core::rational::{format_rational, parse_rational, rat, Rational};
use projcoh_core::lie::SlElement;

use crate::config::Config;

fn rs(r: &Rational) -> String {
    format_rational(r)
}

/// Anything the binary can print: a JSON body, a TSV body, and an
/// optional failed-identity description.
pub trait Report: Serialize {
    fn to_tsv(&self) -> String;
    fn violation(&self) -> Option<String>;

    fn render(&self, format: crate::config::Format) -> String {
        match format {
            crate::config::Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            crate::config::Format::Tsv => self.to_tsv(),
        }
    }
}

fn kv_table(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key\tvalue\n");
    for (k, v) in rows {
        out.push_str(k);
        out.push('\t');
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn fmt_bool(b: bool) -> String {
    if b {
        String::from("true")
    } else {
        String::from("false")
    }
}

fn fmt_opt<T: ToString>(v: &Option<T>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => String::from("-"),
    }
}

fn fmt_dims(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    parts.join(",")
}

// ---------------------------------------------------------------------
// betti
// ---------------------------------------------------------------------

/// What module a Betti table was computed over.
#[derive(Serialize)]
pub struct ModuleDescriptor {
    pub kind: &'static str,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub src_weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub src_fiber: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tgt_weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tgt_fiber: Option<u32>,
}

/// Truncation bounds a Betti table was computed under.
#[derive(Serialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_cap: Option<u32>,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_xdeg: Option<u32>,
}

/// One value slot of a cochain representative.
#[derive(Serialize)]
pub struct TupleValue {
    pub tuple: Vec<usize>,
    pub value: String,
}

#[derive(Serialize)]
pub struct BettiReport {
    pub schema: &'static str,
    pub module: ModuleDescriptor,
    pub bounds: Bounds,
    pub dims: Vec<usize>,
    pub representatives: Vec<Vec<Vec<TupleValue>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_match: Option<bool>,
}

impl Report for BettiReport {
    fn to_tsv(&self) -> String {
        let mut out = String::new();
        if self.oracle_dims.is_some() {
            out.push_str("degree\tdim\toracle_dim\n");
        } else {
            out.push_str("degree\tdim\n");
        }
        for (s, d) in self.dims.iter().enumerate() {
            out.push_str(&s.to_string());
            out.push('\t');
            out.push_str(&d.to_string());
            if let Some(od) = &self.oracle_dims {
                out.push('\t');
                out.push_str(&od[s].to_string());
            }
            out.push('\n');
        }
        out
    }

    fn violation(&self) -> Option<String> {
        if self.oracle_agrees == Some(false) {
            return Some(format!(
                "betti cross-check failed: weight-zero dims [{}] differ from bounded-complex oracle dims [{}]",
                fmt_dims(&self.dims),
                fmt_dims(self.oracle_dims.as_ref().unwrap()),
            ));
        }
        if self.expected_match == Some(false) {
            return Some(format!(
                "betti table mismatch: expected dims [{}] but computed [{}]",
                fmt_dims(self.expected_dims.as_ref().unwrap()),
                fmt_dims(&self.dims),
            ));
        }
        None
    }
}

fn betti_table<M: CeGradedModule>(
    md: &M,
    max_degree: usize,
    text: impl Fn(&M::Value) -> String,
) -> Result<(Vec<usize>, Vec<Vec<Vec<TupleValue>>>), String> {
    let data = weight_zero_betti(md, max_degree)?;
    let reps = data
        .representatives
        .iter()
        .map(|per_degree| {
            per_degree
                .iter()
                .map(|cochain| {
                    cochain
                        .values
                        .iter()
                        .map(|(tuple, v)| TupleValue {
                            tuple: tuple.clone(),
                            value: text(v),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok((data.dims, reps))
}

fn parse_expected_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid --expect value `{s}`: expected comma-separated dims"))
        })
        .collect()
}

pub fn cmd_betti(cfg: &Config) -> Result<BettiReport, String> {
    let m = cfg.require_m()?;
    let max_degree = cfg.max_degree.unwrap_or(3);
    if cfg.oracle && m != 1 {
        return Err(String::from("--oracle is supported for --m 1 only"));
    }

    enum Chosen {
        Field(FieldModule),
        Operator(OperatorModule),
    }

    let (descriptor, chosen, order_cap) = if cfg.p.is_some() || cfg.q.is_some() {
        // Symbol-to-symbol operator module at a common weight.
        let p = cfg.require_p()?;
        let q = cfg.require_q()?;
        let lambda = cfg.require_lambda()?;
        let mu = cfg.require_mu()?;
        let delta = &mu - &lambda;
        let cap = cfg.order_cap.unwrap_or(2);
        let src = SpaceCtx::new(m, delta.clone(), p);
        let tgt = SpaceCtx::new(m, delta.clone(), q);
        (
            ModuleDescriptor {
                kind: "operator",
                m,
                weight: None,
                fiber_degree: None,
                src_weight: Some(rs(&delta)),
                src_fiber: Some(p),
                tgt_weight: Some(rs(&delta)),
                tgt_fiber: Some(q),
            },
            Chosen::Operator(OperatorModule::new(src, tgt, cap)),
            Some(cap),
        )
    } else if cfg.k.is_some() {
        // Weighted symmetric tensor fields.
        let k = cfg.require_k()?;
        let lambda = cfg.require_lambda()?;
        (
            ModuleDescriptor {
                kind: "field",
                m,
                weight: Some(rs(&lambda)),
                fiber_degree: Some(k),
                src_weight: None,
                src_fiber: None,
                tgt_weight: None,
                tgt_fiber: None,
            },
            Chosen::Field(FieldModule {
                ctx: SpaceCtx::new(m, lambda, k),
            }),
            None,
        )
    } else {
        // Density-to-density operator module.
        let lambda = cfg.require_lambda()?;
        let mu = cfg.require_mu()?;
        let cap = cfg.order_cap.unwrap_or(2);
        let src = SpaceCtx::new(m, lambda.clone(), 0);
        let tgt = SpaceCtx::new(m, mu.clone(), 0);
        (
            ModuleDescriptor {
                kind: "operator",
                m,
                weight: None,
                fiber_degree: None,
                src_weight: Some(rs(&lambda)),
                src_fiber: Some(0),
                tgt_weight: Some(rs(&mu)),
                tgt_fiber: Some(0),
            },
            Chosen::Operator(OperatorModule::new(src, tgt, cap)),
            Some(cap),
        )
    };

    let oracle_xdeg = if cfg.oracle {
        Some(cfg.xdeg.unwrap_or(4))
    } else {
        None
    };
    let (dims, representatives, oracle_dims) = match &chosen {
        Chosen::Field(md) => {
            let (dims, reps) = betti_table(md, max_degree, |v| v.poly.canonical_text())?;
            let oracle = match oracle_xdeg {
                Some(x) => Some(bounded_betti_oracle(md, max_degree, x)?),
                None => None,
            };
            (dims, reps, oracle)
        }
        Chosen::Operator(md) => {
            let (dims, reps) = betti_table(md, max_degree, |v| v.canonical_text())?;
            let oracle = match oracle_xdeg {
                Some(x) => Some(bounded_betti_oracle(md, max_degree, x)?),
                None => None,
            };
            (dims, reps, oracle)
        }
    };
    let oracle_agrees = oracle_dims.as_ref().map(|od| *od == dims);
    let expected_dims = match &cfg.expect {
        Some(s) => Some(parse_expected_dims(s)?),
        None => None,
    };
    let expected_match = expected_dims.as_ref().map(|e| *e == dims);

    Ok(BettiReport {
        schema: "projcoh.betti.v1",
        module: descriptor,
        bounds: Bounds {
            order_cap,
            max_degree,
            oracle_xdeg,
        },
        dims,
        representatives,
        oracle_dims,
        oracle_agrees,
        expected_dims,
        expected_match,
    })
}

// ---------------------------------------------------------------------
// split
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct SplitJson {
    pub schema: &'static str,
    pub m: usize,
    pub k: u32,
    pub lambda: String,
    pub mu: String,
    pub delta: String,
    pub certified_xdeg: u32,
    pub predicate_split: bool,
    pub critical_n: Option<u32>,
    pub resonance_split: Option<bool>,
    pub solver_split: bool,
    pub agree: bool,
    pub coefficients: Option<Vec<String>>,
    pub solution_kernel_dim: usize,
}

impl Report for SplitJson {
    fn to_tsv(&self) -> String {
        kv_table(&[
            ("m", self.m.to_string()),
            ("k", self.k.to_string()),
            ("lambda", self.lambda.clone()),
            ("mu", self.mu.clone()),
            ("delta", self.delta.clone()),
            ("certified_xdeg", self.certified_xdeg.to_string()),
            ("predicate_split", fmt_bool(self.predicate_split)),
            ("critical_n", fmt_opt(&self.critical_n)),
            (
                "resonance_split",
                match self.resonance_split {
                    Some(b) => fmt_bool(b),
                    None => String::from("-"),
                },
            ),
            ("solver_split", fmt_bool(self.solver_split)),
            ("agree", fmt_bool(self.agree)),
            (
                "coefficients",
                match &self.coefficients {
                    Some(c) => c.join(","),
                    None => String::from("-"),
                },
            ),
            ("solution_kernel_dim", self.solution_kernel_dim.to_string()),
        ])
    }

    fn violation(&self) -> Option<String> {
        if !self.agree {
            return Some(format!(
                "splitting criterion mismatch: predicate says split={} but the solver says split={} at m={} k={} lambda={} mu={}",
                self.predicate_split, self.solver_split, self.m, self.k, self.lambda, self.mu,
            ));
        }
        None
    }
}

pub fn cmd_split(cfg: &Config) -> Result<SplitJson, String> {
    let m = cfg.require_m()?;
    let k = cfg.require_k()?;
    if k == 0 {
        return Err(String::from("--k must be at least 1 for split"));
    }
    let lambda = cfg.require_lambda()?;
    let mu = cfg.require_mu()?;
    let xdeg = cfg.xdeg.unwrap_or(3);
    let r = split_decision(m, &lambda, &mu, k, xdeg);
    Ok(SplitJson {
        schema: "projcoh.split.v1",
        m: r.m,
        k: r.k,
        lambda: rs(&r.lambda),
        mu: rs(&r.mu),
        delta: rs(&r.delta),
        certified_xdeg: xdeg,
        predicate_split: r.predicate_split,
        critical_n: r.critical_n,
        resonance_split: r.resonance_split,
        solver_split: r.solver_split,
        agree: r.predicate_split == r.solver_split,
        coefficients: r
            .coefficients
            .as_ref()
            .map(|c| c.iter().map(rs).collect()),
        solution_kernel_dim: r.solution_kernel_dim,
    })
}

// ---------------------------------------------------------------------
// quantize
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct QuantOrderJson {
    pub k: u32,
    pub coefficients: Vec<String>,
    pub unique: bool,
    pub ratio_magnitudes_ok: bool,
    pub ratio_signs: Vec<i8>,
}

#[derive(Serialize)]
pub struct QuantizeJson {
    pub schema: &'static str,
    pub m: usize,
    pub max_order: u32,
    pub lambda: String,
    pub mu: String,
    pub delta: String,
    pub certified_xdeg: u32,
    pub exists: bool,
    pub orders: Vec<QuantOrderJson>,
}

impl Report for QuantizeJson {
    fn to_tsv(&self) -> String {
        let mut out = String::from("k\tcoefficients\tunique\tratio_signs\n");
        for o in &self.orders {
            let signs: Vec<String> = o.ratio_signs.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                o.k,
                o.coefficients.join(","),
                fmt_bool(o.unique),
                signs.join(","),
            ));
        }
        out
    }

    fn violation(&self) -> Option<String> {
        for o in &self.orders {
            if o.unique && !o.ratio_magnitudes_ok {
                return Some(format!(
                    "quantization coefficient ratio identity failed at order {} for lambda={} mu={}",
                    o.k, self.lambda, self.mu,
                ));
            }
        }
        None
    }
}

pub fn cmd_quantize(cfg: &Config) -> Result<QuantizeJson, String> {
    let m = cfg.require_m()?;
    let max_order = cfg.k.unwrap_or(3);
    let lambda = cfg.require_lambda()?;
    let mu = cfg.require_mu()?;
    let xdeg = cfg.xdeg.unwrap_or(3);
    let delta = &mu - &lambda;
    let orders = quantization_map(m, &lambda, &mu, max_order, xdeg);
    let exists = orders.is_some();
    Ok(QuantizeJson {
        schema: "projcoh.quantize.v1",
        m,
        max_order,
        lambda: rs(&lambda),
        mu: rs(&mu),
        delta: rs(&delta),
        certified_xdeg: xdeg,
        exists,
        orders: orders
            .unwrap_or_default()
            .into_iter()
            .map(|o| QuantOrderJson {
                k: o.k,
                coefficients: o.coefficients.iter().map(rs).collect(),
                unique: o.unique,
                ratio_magnitudes_ok: o.ratio_magnitudes_ok,
                ratio_signs: o.ratio_signs,
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------
// casimir
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct CasimirJson {
    pub schema: &'static str,
    pub m: usize,
    pub p: u32,
    pub lambda: String,
    pub mu: String,
    pub delta: String,
    pub is_scalar: bool,
    pub scalar: Option<String>,
    pub formula: String,
    pub formula_match: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_match: Option<bool>,
}

impl Report for CasimirJson {
    fn to_tsv(&self) -> String {
        kv_table(&[
            ("m", self.m.to_string()),
            ("p", self.p.to_string()),
            ("lambda", self.lambda.clone()),
            ("mu", self.mu.clone()),
            ("delta", self.delta.clone()),
            ("is_scalar", fmt_bool(self.is_scalar)),
            ("scalar", fmt_opt(&self.scalar)),
            ("formula", self.formula.clone()),
            ("formula_match", fmt_bool(self.formula_match)),
        ])
    }

    fn violation(&self) -> Option<String> {
        if !self.is_scalar {
            return Some(format!(
                "Casimir operator is not a scalar multiple of the identity at m={} p={} delta={}",
                self.m, self.p, self.delta,
            ));
        }
        if !self.formula_match {
            return Some(format!(
                "Casimir scalar {} differs from the closed formula {} at m={} p={} delta={}",
                fmt_opt(&self.scalar),
                self.formula,
                self.m,
                self.p,
                self.delta,
            ));
        }
        if self.expected_match == Some(false) {
            return Some(format!(
                "Casimir scalar {} differs from the expected value {} at m={} p={} delta={}",
                fmt_opt(&self.scalar),
                fmt_opt(&self.expected),
                self.m,
                self.p,
                self.delta,
            ));
        }
        None
    }
}

pub fn cmd_casimir(cfg: &Config) -> Result<CasimirJson, String> {
    let m = cfg.require_m()?;
    let p = cfg.require_p()?;
    let lambda = cfg.require_lambda()?;
    let mu = cfg.require_mu()?;
    let delta = &mu - &lambda;
    let (_, scalar) = casimir(m, &delta, p);
    let formula = casimir_scalar(m, &delta, p);
    let formula_match = scalar.as_ref() == Some(&formula);
    let expected = match &cfg.expect {
        Some(s) => Some(parse_rational(s)?),
        None => None,
    };
    let expected_match = expected.as_ref().map(|e| scalar.as_ref() == Some(e));
    Ok(CasimirJson {
        schema: "projcoh.casimir.v1",
        m,
        p,
        lambda: rs(&lambda),
        mu: rs(&mu),
        delta: rs(&delta),
        is_scalar: scalar.is_some(),
        scalar: scalar.as_ref().map(rs),
        formula: rs(&formula),
        formula_match,
        expected: expected.as_ref().map(rs),
        expected_match,
    })
}

// ---------------------------------------------------------------------
// cocycles
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct CocyclesJson {
    pub schema: &'static str,
    pub m: usize,
    pub p: u32,
    pub q: u32,
    pub n: u32,
    pub lambda: String,
    pub mu: String,
    pub delta: String,
    pub critical_delta: String,
    pub delta_is_critical: bool,
    pub tau_is_cocycle: bool,
    pub tau_expected_cocycle: bool,
    pub tau_match: bool,
    pub gamma_is_cocycle: Option<bool>,
    pub commutator_defect: String,
    pub commutator_predicted: String,
    pub commutator_match: bool,
}

impl Report for CocyclesJson {
    fn to_tsv(&self) -> String {
        kv_table(&[
            ("m", self.m.to_string()),
            ("p", self.p.to_string()),
            ("q", self.q.to_string()),
            ("n", self.n.to_string()),
            ("lambda", self.lambda.clone()),
            ("mu", self.mu.clone()),
            ("delta", self.delta.clone()),
            ("critical_delta", self.critical_delta.clone()),
            ("delta_is_critical", fmt_bool(self.delta_is_critical)),
            ("tau_is_cocycle", fmt_bool(self.tau_is_cocycle)),
            ("tau_expected_cocycle", fmt_bool(self.tau_expected_cocycle)),
            ("tau_match", fmt_bool(self.tau_match)),
            (
                "gamma_is_cocycle",
                match self.gamma_is_cocycle {
                    Some(b) => fmt_bool(b),
                    None => String::from("-"),
                },
            ),
            ("commutator_defect", self.commutator_defect.clone()),
            ("commutator_predicted", self.commutator_predicted.clone()),
            ("commutator_match", fmt_bool(self.commutator_match)),
        ])
    }

    fn violation(&self) -> Option<String> {
        if self.gamma_is_cocycle == Some(false) {
            return Some(format!(
                "gamma_{} failed the cocycle identity at m={} q={} delta={}",
                self.n, self.m, self.q, self.delta,
            ));
        }
        if !self.tau_match {
            return Some(format!(
                "tau_{} cocycle verdict {} contradicts the critical-weight prediction {} at m={} q={} delta={}",
                self.n,
                self.tau_is_cocycle,
                self.tau_expected_cocycle,
                self.m,
                self.q,
                self.delta,
            ));
        }
        if !self.commutator_match {
            return Some(format!(
                "commutator constant {} differs from predicted {} at m={} q={} n={} delta={}",
                self.commutator_defect,
                self.commutator_predicted,
                self.m,
                self.q,
                self.n,
                self.delta,
            ));
        }
        None
    }
}

pub fn cmd_cocycles(cfg: &Config) -> Result<CocyclesJson, String> {
    let m = cfg.require_m()?;
    let p = cfg.require_p()?;
    let (q, n) = match (cfg.q, cfg.n) {
        (Some(q), Some(n)) => {
            if q + n != p {
                return Err(format!("inconsistent degrees: --p {p} must equal --q {q} plus --n {n}"));
            }
            (q, n)
        }
        (Some(q), None) => {
            if q > p {
                return Err(format!("--q {q} cannot exceed --p {p}"));
            }
            (q, p - q)
        }
        (None, Some(n)) => {
            if n > p {
                return Err(format!("--n {n} cannot exceed --p {p}"));
            }
            (p - n, n)
        }
        (None, None) => return Err(String::from("cocycles needs --q or --n")),
    };
    let lambda = cfg.require_lambda()?;
    let mu = cfg.require_mu()?;
    let delta = &mu - &lambda;
    let critical =
        rat(m as i64 + 2 * q as i64 + n as i64) / rat(m as i64 + 1);
    let delta_is_critical = delta == critical;

    let basis = SlElement::basis(m);
    let tau_values: Vec<_> = basis.iter().map(|x| tau_map(x, &delta, q, n)).collect();
    let tau_is_cocycle = cocycle_check(m, &tau_values);
    let tau_expected_cocycle = n == 0 || delta_is_critical;
    let gamma_is_cocycle = if n >= 1 {
        let gamma_values: Vec<_> = basis.iter().map(|x| gamma_map(x, &delta, q, n)).collect();
        Some(cocycle_check(m, &gamma_values))
    } else {
        None
    };
    let predicted = commutator_constant(m, &delta, q, n);
    let (defect, commutator_match) = match commutator_defect(m, &delta, q, n) {
        Ok(d) => {
            let ok = d == predicted;
            (rs(&d), ok)
        }
        Err(e) => (e, false),
    };

    Ok(CocyclesJson {
        schema: "projcoh.cocycles.v1",
        m,
        p,
        q,
        n,
        lambda: rs(&lambda),
        mu: rs(&mu),
        delta: rs(&delta),
        critical_delta: rs(&critical),
        delta_is_critical,
        tau_is_cocycle,
        tau_expected_cocycle,
        tau_match: tau_is_cocycle == tau_expected_cocycle,
        gamma_is_cocycle,
        commutator_defect: defect,
        commutator_predicted: rs(&predicted),
        commutator_match,
    })
}

// ---------------------------------------------------------------------
// homs
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct HomsJson {
    pub schema: &'static str,
    pub m: usize,
    pub src_weight: String,
    pub src_fiber: u32,
    pub tgt_weight: String,
    pub tgt_fiber: u32,
    pub order_cap: u32,
    pub xdeg_cap: u32,
    pub count: usize,
    pub basis: Vec<String>,
}

impl Report for HomsJson {
    fn to_tsv(&self) -> String {
        let mut out = String::from("index\toperator\n");
        for (i, b) in self.basis.iter().enumerate() {
            out.push_str(&format!("{i}\t{b}\n"));
        }
        out
    }

    fn violation(&self) -> Option<String> {
        None
    }
}

pub fn cmd_homs(cfg: &Config) -> Result<HomsJson, String> {
    let m = cfg.require_m()?;
    let p = cfg.require_p()?;
    let q = cfg.require_q()?;
    let lambda = cfg.require_lambda()?;
    let mu = cfg.require_mu()?;
    let order_cap = cfg.order_cap.unwrap_or(2);
    let xdeg_cap = cfg.xdeg.unwrap_or(3);
    let src = SpaceCtx::new(m, lambda.clone(), p);
    let tgt = SpaceCtx::new(m, mu.clone(), q);
    let basis = equivariant_homs(&src, &tgt, order_cap, xdeg_cap);
    Ok(HomsJson {
        schema: "projcoh.homs.v1",
        m,
        src_weight: rs(&lambda),
        src_fiber: p,
        tgt_weight: rs(&mu),
        tgt_fiber: q,
        order_cap,
        xdeg_cap,
        count: basis.len(),
        basis: basis.iter().map(|b| b.canonical_text()).collect(),
    })
}

// ---------------------------------------------------------------------
// critical-table
// ---------------------------------------------------------------------

#[derive(Serialize)]
pub struct CriticalRow {
    pub n: u32,
    pub delta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
}

#[derive(Serialize)]
pub struct CriticalTableJson {
    pub schema: &'static str,
    pub m: usize,
    pub q: u32,
    pub max_n: u32,
    pub rows: Vec<CriticalRow>,
}

impl Report for CriticalTableJson {
    fn to_tsv(&self) -> String {
        let mut out = String::from("n\tdelta\tlambda\tmu\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.n,
                r.delta,
                fmt_opt(&r.lambda),
                fmt_opt(&r.mu),
            ));
        }
        out
    }

    fn violation(&self) -> Option<String> {
        None
    }
}

pub fn cmd_critical_table(cfg: &Config) -> Result<CriticalTableJson, String> {
    let m = cfg.require_m()?;
    let q = cfg.q.unwrap_or(0);
    let max_n = cfg.n.unwrap_or(3);
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let delta = rat(m as i64 + 2 * q as i64 + n as i64) / rat(m as i64 + 1);
        let (lambda, mu) = if m == 1 {
            // On the line, symbols of degree p identify with densities of
            // weight delta - p, turning the critical weight into a
            // density-module weight pair.
            let lam = &delta - rat(q as i64 + n as i64);
            let mu = &delta - rat(q as i64);
            (Some(rs(&lam)), Some(rs(&mu)))
        } else {
            (None, None)
        };
        rows.push(CriticalRow {
            n,
            delta: rs(&delta),
            lambda,
            mu,
        });
    }
    Ok(CriticalTableJson {
        schema: "projcoh.critical-table.v1",
        m,
        q,
        max_n,
        rows,
    })
}
