//! Command dispatch: each batch item yields report lines, errors included.

use anyhow::{bail, Context};
use iwasawa_core::curve::{an_coeffs, least_real_period, CurveModel, ReductionType};
use iwasawa_core::lvalues::{terms_needed, LSeriesData};
use iwasawa_core::mtt::*;
use iwasawa_core::padic::pow_checked;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::acceptance;
use crate::cache::{compute_twists, Cache, CacheStatus};
use crate::report::{Params, ReportLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Lvalue,
    PadicL,
    VerifyMtt,
    VerifyConj11,
    VerifyEq13,
    TwistSearch,
    Selfcheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Lvalue => "lvalue",
            Command::PadicL => "padic-l",
            Command::VerifyMtt => "verify-mtt",
            Command::VerifyConj11 => "verify-conj11",
            Command::VerifyEq13 => "verify-eq13",
            Command::TwistSearch => "twist-search",
            Command::Selfcheck => "selfcheck",
        }
    }

    pub fn takes_pairs(&self) -> bool {
        matches!(self, Command::VerifyConj11 | Command::VerifyEq13)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub params: Params,
    /// Discriminant bound `X` for `twist-search`.
    pub twist_bound: u64,
    pub twist_limit: usize,
    pub cache: Option<Cache>,
}

impl RunConfig {
    pub fn new(p: u64, params: Params) -> Self {
        RunConfig { p, params, twist_bound: 200, twist_limit: 5, cache: None }
    }

    pub fn mtt(&self) -> MttConfig {
        let b = self.params.denom_bound;
        MttConfig {
            level: self.params.level,
            prec: self.params.prec,
            degree: self.params.degree,
            symbols: SymbolOptions { denom_bound: b.min(64), max_denom_bound: b, ..SymbolOptions::default() },
        }
    }

    fn line(&self, cmd: Command, curves: &[&str]) -> ReportLine {
        ReportLine::new(cmd.name(), curves, Some(self.p), &self.params)
    }

    /// `a_n` for `n <= nmax`, through the cache when one is configured.
    pub fn an_table(&self, e: &CurveModel, nmax: usize) -> anyhow::Result<Vec<i64>> {
        if nmax > self.params.nmax {
            bail!("{} needs {nmax} coefficients but --nmax is {}", e.label(), self.params.nmax);
        }
        match &self.cache {
            None => Ok(an_coeffs(e, nmax)),
            Some(c) => {
                let (table, status) = c.an_table(e, nmax)?;
                if let CacheStatus::Rebuilt(why) = status {
                    eprintln!("warning: rebuilt {}: {why}", c.path(e.label(), "an").display());
                }
                Ok(table)
            }
        }
    }

    pub fn context(&self, e: &CurveModel) -> anyhow::Result<CurveContext> {
        let n = e.conductor();
        let m = pow_checked(self.p, self.params.level + 1)?;
        let need = terms_needed(n, m).max(period_terms_needed(n, m));
        let an = self.an_table(e, need)?;
        Ok(CurveContext::from_data(e, LSeriesData::from_table(n, an)?))
    }
}

/// Runs `cmd` over the batch; output order follows input order.
pub fn run_command(cmd: Command, curves: &[CurveModel], pairs: &[(CurveModel, CurveModel)], cfg: &RunConfig) -> Vec<ReportLine> {
    match cmd {
        Command::Selfcheck => selfcheck(cfg),
        Command::VerifyConj11 | Command::VerifyEq13 => pairs.par_iter().flat_map_iter(|(a, b)| pair_lines(cmd, a, b, cfg)).collect(),
        _ => curves.par_iter().flat_map_iter(|e| curve_lines(cmd, e, cfg)).collect(),
    }
}

fn curve_lines(cmd: Command, e: &CurveModel, cfg: &RunConfig) -> Vec<ReportLine> {
    let base = cfg.line(cmd, &[e.label()]);
    let out = match cmd {
        Command::Classify => classify(e, cfg).map(|(v, b)| vec![base.clone().value(v, b)]),
        Command::Lvalue => lvalue(e, cfg).map(|(v, b)| vec![base.clone().value(v, b)]),
        Command::PadicL => padic_l(e, cfg).map(|(v, b)| vec![base.clone().value(v, b)]),
        Command::VerifyMtt => verify_mtt(e, cfg).map(|vs| vs.iter().map(|v| base.clone().verdict(v)).collect()),
        Command::TwistSearch => twists(e, cfg).map(|(v, b)| vec![base.clone().value(v, b)]),
        _ => unreachable!("pair and suite commands are dispatched elsewhere"),
    };
    out.unwrap_or_else(|err| vec![base.failed(format!("{err:#}"))])
}

fn pair_lines(cmd: Command, a: &CurveModel, b: &CurveModel, cfg: &RunConfig) -> Vec<ReportLine> {
    let base = cfg.line(cmd, &[a.label(), b.label()]);
    let run = || -> anyhow::Result<Vec<Verdict>> {
        let (ca, cb) = (cfg.context(a)?, cfg.context(b)?);
        let m = cfg.mtt();
        Ok(match cmd {
            Command::VerifyConj11 => {
                let mut vs = vec![conj11_verdict(&ca, &cb, cfg.p, &m)?];
                match conj21_leading_check(&ca, &cb, cfg.p, &m) {
                    Ok(v) => vs.push(v),
                    Err(iwasawa_core::Error::RankPositive) => {}
                    Err(e) => return Err(e.into()),
                }
                vs
            }
            _ => vec![finite_level_product_check(&ca, &cb, cfg.p, &m, cfg.params.tol)?],
        })
    };
    match run() {
        Ok(vs) => vs.iter().map(|v| base.clone().verdict(v)).collect(),
        Err(err) => vec![base.failed(format!("{err:#}"))],
    }
}

fn classify(e: &CurveModel, cfg: &RunConfig) -> anyhow::Result<(Value, Value)> {
    let bad: Vec<Value> = e
        .bad_primes()
        .into_iter()
        .map(|q| {
            let r = e.reduce_at(q);
            json!({ "p": q, "type": r.kind.name(), "kodaira": format!("{:?}", e.kodaira(q)), "conductor_exponent": r.conductor_exponent, "a_p": r.a_p })
        })
        .collect();
    let r = e.reduce_at(cfg.p);
    let j = e.j_invariant();
    let payload = json!({
        "conductor": e.conductor(),
        "minimal_discriminant": e.minimal_discriminant().to_string(),
        "j": format!("{}/{}", j.numer(), j.denom()),
        "minimal_model": e.minimal_model().map(|c| c.to_string()),
        "bad_primes": bad,
        "type": r.kind.name(),
        "a_p": r.a_p,
        "alpha": r.alpha.as_ref().map(ToString::to_string),
    });
    Ok((payload, json!({ "exact": true, "alpha_digits": r.alpha.map(|a| a.rel_precision()) })))
}

fn lvalue(e: &CurveModel, cfg: &RunConfig) -> anyhow::Result<(Value, Value)> {
    let ctx = cfg.context(e)?;
    let rank = ctx.data.analytic_rank(1e-8)?;
    let lead = ctx.data.l_value(rank)?;
    let (omega, comps) = least_real_period(e);
    let mut payload = json!({
        "root_number": ctx.data.root_number(),
        "analytic_rank": rank,
        "leading_derivative": lead.value.re,
        "real_period": ctx.omega,
        "least_real_period": omega,
        "real_components": comps,
    });
    if rank == 0 {
        let r = ctx.l_over_omega(&cfg.mtt().symbols)?;
        payload["l_over_omega"] = json!(r.to_string());
    }
    let mut twist_error: f64 = 0.0;
    if !e.conductor().is_multiple_of(cfg.p) && cfg.params.level > 0 {
        let level = cfg.params.level + 1;
        let rows = match &cfg.cache {
            Some(c) => c.twisted_values(e, &ctx.data, cfg.p, level)?.0,
            None => compute_twists(&ctx.data, cfg.p, level)?,
        };
        twist_error = rows.iter().map(|r| r.err).fold(0.0, f64::max);
        payload["twists"] = json!({
            "modulus": pow_checked(cfg.p, level)?,
            "values": rows.iter().map(|r| json!({ "k": r.k, "re": r.re, "im": r.im })).collect::<Vec<_>>(),
        });
    }
    Ok((payload, json!({ "leading_error": lead.error_bound, "terms": lead.terms, "twist_error": twist_error, "tol": cfg.params.tol })))
}

fn padic_l(e: &CurveModel, cfg: &RunConfig) -> anyhow::Result<(Value, Value)> {
    let ctx = cfg.context(e)?;
    let d = mtt_measure(&ctx, cfg.p, &cfg.mtt())?;
    let payload = json!({
        "reduction": d.reduction.name(),
        "alpha": d.alpha.to_string(),
        "series": d.series.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "value_at_zero": d.value_at_zero().to_string(),
    });
    let budget = json!({
        "padic_digits": d.prec,
        "working_digits": d.working_prec,
        "ledger": d.ledger,
        "denom_bound": d.denom_bound(),
        "symbol_error": d.symbols.max_error(),
    });
    Ok((payload, budget))
}

fn verify_mtt(e: &CurveModel, cfg: &RunConfig) -> anyhow::Result<Vec<Verdict>> {
    let ctx = cfg.context(e)?;
    let m = cfg.mtt();
    let mut out = vec![conj_mtt_verdict(&ctx, cfg.p, &m)?];
    let data = mtt_measure(&ctx, cfg.p, &m)?;
    out.push(interpolation_check(&ctx, &data, cfg.params.tol.max(1e-5)).context("interpolation")?);
    let rank0 = ctx.data.root_number() == 1 && ctx.data.l_value(0)?.value.norm() > 1e-8;
    if data.reduction == ReductionType::SplitMultiplicative && rank0 {
        out.push(gs_check(&ctx, cfg.p, &m, cfg.params.prec)?);
    }
    Ok(out)
}

fn twists(e: &CurveModel, cfg: &RunConfig) -> anyhow::Result<(Value, Value)> {
    let found = twist_search(e, cfg.p, cfg.twist_bound, &[], cfg.twist_limit)?;
    let rows: Vec<Value> = found
        .iter()
        .map(|t| json!({ "d": t.d, "conductor": t.conductor, "l_value": t.l_value, "same_type": t.same_type, "sha_verified": t.sha_verified }))
        .collect();
    Ok((json!({ "bound": cfg.twist_bound, "candidates": rows }), json!({ "nonvanishing_threshold": 1e-8 })))
}

fn selfcheck(cfg: &RunConfig) -> Vec<ReportLine> {
    let results = acceptance::run_all();
    let mut out = Vec::new();
    for r in &results {
        let mut l = ReportLine::new("selfcheck", &[], None, &cfg.params).value(json!({ "criterion": r.id, "name": r.name, "detail": r.detail, "seconds": r.seconds }), json!({ "tolerance": r.tolerance }));
        l.status = if r.pass { "holds-at-precision" } else { "fails" }.into();
        if r.expected_failure {
            l.payload["documented_failure"] = json!(true);
        }
        out.push(l);
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let mut summary = ReportLine::new("selfcheck", &[], None, &cfg.params).value(json!({ "passed": passed, "failed": results.len() - passed }), json!({}));
    summary.status = if results.iter().all(|r| r.pass || r.expected_failure) { "holds-at-precision" } else { "fails" }.into();
    out.push(summary);
    out
}
