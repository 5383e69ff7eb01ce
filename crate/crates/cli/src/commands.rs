//! The four commands. Each returns its document and the number of failed audits.

use std::collections::BTreeMap;

use keldysh_core::basis::{zernike_norm_sq, GammaParam, RuleSpec, ZernikeIndex};
use keldysh_core::extensions::{
    dn_map_mode, dn_map_mode_ode, krein_resolvent, robin_scan, FourierMultiplier, MaxDomainElement, Symbol,
};
use keldysh_core::operator::eigen_residual;
use keldysh_core::spaces::{Bump, SpectralVector};
use keldysh_core::verify::{
    audit_cutoff_decay, audit_ell_of_eps, audit_trace_1d, audit_trace_log, cm_table, coercivity_gamma0, density_divergence,
    gram_positivity, AuditReport, Cutoff,
};
use keldysh_core::{Complex64, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{Cell, Document, Table};
use crate::CliError;

pub const EIG_DEFAULT_N: u32 = 10;
pub const DN_DEFAULT_N: u32 = 64;
pub const DN_DEFAULT_M: i64 = 16;
pub const KREIN_DEFAULT_N: u32 = 24;
pub const KREIN_DEFAULT_M: i64 = 16;
pub const SCAN_DEFAULT_SAMPLES: usize = 200;

/// Every audit name accepted by `audit`, in the order `all` runs them.
pub const AUDITS: [&str; 8] =
    ["trace_1d", "trace_log", "ell_of_eps", "cutoff_decay", "cm_table", "density_divergence", "coercivity_gamma0", "gram_positivity"];

type Outcome = Result<(Document, usize), CliError>;

fn meta(command: &str, cfg: &RunConfig) -> BTreeMap<String, Value> {
    let mut m = BTreeMap::new();
    m.insert("command".into(), Value::from(command));
    m.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    m.insert("seed".into(), Value::from(cfg.seed));
    m.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    m
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Rows (γ, n, k, m, eigenvalue, ‖G‖², residual) for n ≤ N.
pub fn eig(cfg: &RunConfig) -> Outcome {
    let n_max = cfg.truncation.unwrap_or(EIG_DEFAULT_N);
    let tables: Vec<Result<Table, CliError>> = cfg
        .gamma
        .par_iter()
        .map(|&g| {
            let param = GammaParam::new(g)?;
            let mut t = Table::new(&["gamma", "n", "k", "m", "eigenvalue", "norm_sq", "residual"]);
            for n in 0..=n_max {
                for k in 0..=n {
                    let idx = ZernikeIndex::new(n, k)?;
                    t.push(vec![
                        g.into(),
                        n.into(),
                        k.into(),
                        idx.mode().into(),
                        param.eigenvalue(n).into(),
                        zernike_norm_sq(param.abs(), idx).into(),
                        eigen_residual(g, idx)?.into(),
                    ]);
                }
            }
            Ok(t)
        })
        .collect();
    let mut table = Table::new(&["gamma", "n", "k", "m", "eigenvalue", "norm_sq", "residual"]);
    for t in tables {
        table.extend(t?);
    }
    Ok((Document { meta: meta("eig", cfg), table, extras: BTreeMap::new() }, 0))
}

/// Rows (γ, m, μ_m, |spectral − series|, truncation estimate, converged, |μ_m − μ_{−m}|).
pub fn dn(cfg: &RunConfig) -> Outcome {
    let n = cfg.truncation.unwrap_or(DN_DEFAULT_N);
    let mm = cfg.modes.unwrap_or(DN_DEFAULT_M);
    let lambda = cfg.lambda();
    for &g in &cfg.gamma {
        GammaParam::subcritical(g)?;
    }
    let jobs: Vec<(f64, i64)> = cfg.gamma.iter().flat_map(|&g| (-mm..=mm).map(move |m| (g, m))).collect();
    let values: Vec<Result<_, CliError>> = jobs
        .par_iter()
        .map(|&(g, m)| {
            let v = dn_map_mode(g, lambda, m, n, cfg.c0)?;
            let oracle = dn_map_mode_ode(g, lambda, m, cfg.c0)?;
            Ok((g, m, v, oracle))
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut table =
        Table::new(&["gamma", "m", "mu_re", "mu_im", "oracle_diff", "truncation_estimate", "converged", "symmetry_diff"]);
    for (i, (g, m, v, oracle)) in values.iter().enumerate() {
        // jobs for one γ are laid out m = −M..=M, so the mirror mode sits symmetrically
        let base = i - (m + mm) as usize;
        let mirror = values[base + (mm - m) as usize].2.mu;
        table.push(vec![
            (*g).into(),
            (*m).into(),
            v.mu.re.into(),
            v.mu.im.into(),
            (v.mu - oracle).norm().into(),
            v.truncation_estimate.into(),
            v.converged.into(),
            (v.mu - mirror).norm().into(),
        ]);
    }
    Ok((Document { meta: meta("dn", cfg), table, extras: BTreeMap::new() }, 0))
}

fn number(t: &str, what: &str) -> Result<f64, CliError> {
    t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{t}' in {what}")))
}

/// Parses a boundary symbol: `1.5`, `const:re[,im]`, `table:m=v;m=v` or `rational:p0,p1/q0,q1`.
pub fn parse_symbol(s: &str) -> Result<FourierMultiplier, CliError> {
    let real = |v: f64| Complex64::new(v, 0.0);
    let (kind, body) = s.split_once(':').unwrap_or(("", s));
    match kind {
        "" => Ok(FourierMultiplier::real(number(body, "B")?)),
        "const" => {
            let p: Vec<&str> = body.split(',').collect();
            match p.as_slice() {
                [re] => Ok(FourierMultiplier::real(number(re, "B")?)),
                [re, im] => Ok(FourierMultiplier::constant(Complex64::new(number(re, "B")?, number(im, "B")?))),
                _ => Err(CliError::Usage(format!("const symbol must be re or re,im, got '{body}'"))),
            }
        }
        "table" => {
            let mut entries = Vec::new();
            for item in body.split(';').filter(|t| !t.trim().is_empty()) {
                let (m, v) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("table entry '{item}' needs m=v")))?;
                let m = m.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad mode '{m}' in B")))?;
                entries.push((m, real(number(v, "B")?)));
            }
            Ok(FourierMultiplier::table(entries))
        }
        "rational" => {
            let (p, q) = body.split_once('/').ok_or_else(|| CliError::Usage("rational symbol needs p/q".into()))?;
            let coeffs = |t: &str| t.split(',').map(|c| number(c, "B").map(real)).collect::<Result<Vec<_>, _>>();
            Ok(FourierMultiplier::new(Symbol::Rational { num: coeffs(p)?, den: coeffs(q)? })?)
        }
        _ => Err(CliError::Usage(format!("unknown symbol kind '{kind}'"))),
    }
}

fn parse_scan(s: &str) -> Result<(f64, f64, usize), CliError> {
    let p: Vec<&str> = s.split(':').collect();
    match p.as_slice() {
        [lo, hi] => Ok((number(lo, "scan")?, number(hi, "scan")?, SCAN_DEFAULT_SAMPLES)),
        [lo, hi, n] => Ok((
            number(lo, "scan")?,
            number(hi, "scan")?,
            n.trim().parse().map_err(|_| CliError::Usage(format!("bad sample count '{n}' in scan")))?,
        )),
        _ => Err(CliError::Usage(format!("scan must be lo:hi[:samples], got '{s}'"))),
    }
}

/// Krein solve for a random right side; rows per corrected mode, certificates per γ.
pub fn krein(cfg: &RunConfig, symbol: &str, scan: Option<&str>) -> Outcome {
    let b = parse_symbol(symbol)?;
    let scan = scan.map(parse_scan).transpose()?;
    let n = cfg.truncation.unwrap_or(KREIN_DEFAULT_N);
    let cutoff = cfg.modes.unwrap_or(KREIN_DEFAULT_M);
    let spec = RuleSpec::default();
    for &g in &cfg.gamma {
        GammaParam::subcritical(g)?;
    }
    let results: Vec<Result<_, CliError>> = cfg
        .gamma
        .par_iter()
        .enumerate()
        .map(|(i, &g)| {
            let mut rng = rng_for(cfg.seed, i as u64);
            let rhs = SpectralVector::random(&mut rng, g, n, 1.0)?;
            let sol = krein_resolvent(g, cfg.lambda(), &b, &rhs, cutoff, cfg.c0, &spec)?;
            let u = sol.to_element();
            let dirichlet = MaxDomainElement::from_spectral(sol.dirichlet_part.clone());
            let norm = u.pair(&u, &spec)?.re.max(0.0).sqrt();
            let dnorm = dirichlet.pair(&dirichlet, &spec)?.re.max(0.0).sqrt();
            Ok((g, sol, norm, dnorm))
        })
        .collect();
    let columns = ["gamma", "m", "coefficient_re", "coefficient_im", "coefficient_abs", "denominator_abs", "boundary_residual", "operator_residual"];
    let mut table = Table::new(&columns);
    let mut certs = Vec::new();
    for r in results {
        let (g, sol, norm, dnorm) = r?;
        for rec in &sol.modes {
            table.push(vec![
                g.into(),
                rec.m.into(),
                rec.coefficient.re.into(),
                rec.coefficient.im.into(),
                rec.coefficient.norm().into(),
                rec.denominator.norm().into(),
                rec.boundary_residual.into(),
                rec.operator_residual.into(),
            ]);
        }
        let c = sol.certificate;
        certs.push(json!({
            "gamma": g,
            "operator_residual": c.operator_residual,
            "boundary_residual": c.boundary_residual,
            "adjoint_discrepancy": c.adjoint_discrepancy,
            "min_denominator": if c.min_denominator.is_finite() { Value::from(c.min_denominator) } else { Value::Null },
            "rhs_norm": c.rhs_norm,
            "solution_norm": norm,
            "dirichlet_norm": dnorm,
        }));
    }
    let mut extras = BTreeMap::new();
    extras.insert("certificates".into(), Value::Array(certs));
    if let Some((lo, hi, samples)) = scan {
        let beta = match b.symbol() {
            Symbol::Constant(c) if c.im == 0.0 => c.re,
            _ => return Err(CliError::Usage("scan needs a real constant symbol".into())),
        };
        let jobs: Vec<(f64, i64)> = cfg.gamma.iter().flat_map(|&g| (0..=cutoff).map(move |m| (g, m))).collect();
        let found: Vec<Result<Vec<Value>, CliError>> = jobs
            .par_iter()
            .map(|&(g, m)| {
                let roots = robin_scan(g, beta, m, lo, hi, samples, cfg.c0)?;
                Ok(roots.into_iter().map(|l| json!({"gamma": g, "m": m, "lambda": l})).collect())
            })
            .collect();
        let mut rows = Vec::new();
        for f in found {
            rows.extend(f?);
        }
        extras.insert("scan".into(), Value::Array(rows));
    }
    Ok((Document { meta: meta("krein", cfg), table, extras }, 0))
}

type AuditJob = Box<dyn Fn(&mut ChaCha8Rng) -> keldysh_core::Result<AuditReport> + Send + Sync>;

/// γ values for an audit family: the configured ones that `valid` accepts, or the
/// family's own grid when none were given. A single audit rejects invalid γ outright.
fn family_gammas(cfg: &RunConfig, defaults: &[f64], valid: impl Fn(f64) -> bool, strict: bool, what: &str) -> Result<Vec<f64>, CliError> {
    if !cfg.gamma_given {
        return Ok(defaults.to_vec());
    }
    if strict {
        if let Some(bad) = cfg.gamma.iter().find(|&&g| !valid(g)) {
            return Err(CliError::Core(Error::Regime(format!("{what} does not apply at gamma = {bad}"))));
        }
    }
    Ok(cfg.gamma.iter().copied().filter(|&g| valid(g)).collect())
}

fn jobs_for(name: &str, cfg: &RunConfig, strict: bool) -> Result<Vec<AuditJob>, CliError> {
    let c0 = cfg.c0;
    let mut jobs: Vec<AuditJob> = Vec::new();
    match name {
        "trace_1d" => {
            for g in family_gammas(cfg, &[-0.75, -0.5, -0.25], |g| g > -1.0 && g < 0.0, strict, name)? {
                jobs.push(Box::new(move |rng| audit_trace_1d(rng, g, 1.0, 1000, &[1e-3, 1e-2, 0.1, 0.5, 0.99])));
            }
        }
        "trace_log" => jobs.push(Box::new(|rng| audit_trace_log(rng, 0.5, 1000, &[1e-6, 1e-3, 0.1, 0.5]))),
        "ell_of_eps" => jobs.push(Box::new(|_| audit_ell_of_eps(1000, &[1e-6, 1e-9, 1e-12]))),
        "cutoff_decay" => {
            let grid: Vec<f64> = (4..=12).map(|e| 10f64.powi(-e)).collect();
            let bump = Cutoff::Bump(Bump::default());
            if cfg.gamma_given {
                for g in family_gammas(cfg, &[], |g| 2.0 + g > -1.0, strict, name)? {
                    for k in [0, 1] {
                        let grid = grid.clone();
                        jobs.push(Box::new(move |_| audit_cutoff_decay(g, 1.0, k, bump, &grid)));
                    }
                }
            } else {
                for (g, a, k) in [(0.0, 1.0, 0), (0.0, 1.0, 1), (-0.5, 0.5, 2), (0.5, 0.25, 0)] {
                    let grid = grid.clone();
                    jobs.push(Box::new(move |_| audit_cutoff_decay(g, a, k, bump, &grid)));
                }
                let grid = grid.clone();
                jobs.push(Box::new(move |_| audit_cutoff_decay(0.0, 1.0, 0, Cutoff::Window { lo: -2.0, hi: -1.0 }, &grid)));
            }
        }
        "cm_table" => {
            let m_max = cfg.modes.map(|m| m as usize).unwrap_or(2000);
            for g in family_gammas(cfg, &[0.0, 0.25, 0.5, 0.75], |g| (0.0..1.0).contains(&g), strict, name)? {
                jobs.push(Box::new(move |_| cm_table(2.0, g, m_max)));
            }
        }
        "density_divergence" => {
            let k = cfg.truncation.map(|n| n as usize).unwrap_or(1 << 20);
            for g in family_gammas(cfg, &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25], |g| g >= 0.0, strict, name)? {
                for p in [2, 4] {
                    jobs.push(Box::new(move |_| density_divergence(g, 0, p, k)));
                }
            }
        }
        "coercivity_gamma0" => {
            let trunc = cfg.truncation.map(|n| n as usize).unwrap_or(32);
            jobs.push(Box::new(move |rng| coercivity_gamma0(rng, c0, 500, trunc, &RuleSpec::default())));
        }
        "gram_positivity" => {
            for g in family_gammas(cfg, &[-0.5, 0.0, 0.5], |g| g.abs() < 1.0, strict, name)? {
                jobs.push(Box::new(move |_| gram_positivity(g, c0, &[0, 1, 2, 5], 3, &RuleSpec::default())));
            }
        }
        _ => return Err(CliError::Usage(format!("unknown audit '{name}'; expected one of {} or all", AUDITS.join(", ")))),
    }
    Ok(jobs)
}

fn float_json(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(crate::output::float_text(v)))
}

pub fn report_json(r: &AuditReport) -> Value {
    json!({
        "name": r.name,
        "parameters": r.parameters.iter().map(|(k, v)| (k.clone(), float_json(*v))).collect::<serde_json::Map<_, _>>(),
        "labels": r.labels,
        "samples": r.samples,
        "worst_margin": float_json(r.worst_margin),
        "slack": float_json(r.slack),
        "passed": r.passed,
        "columns": r.columns,
        "data": r.rows.iter().map(|row| Value::Array(row.iter().map(|v| float_json(*v)).collect())).collect::<Vec<_>>(),
    })
}

/// Runs one audit family or all of them; the failure count drives the exit code.
pub fn audit(cfg: &RunConfig, which: &str) -> Outcome {
    let names: Vec<&str> = if which == "all" { AUDITS.to_vec() } else { vec![which] };
    let strict = which != "all";
    let mut jobs = Vec::new();
    for (family, name) in names.iter().enumerate() {
        let family_id = AUDITS.iter().position(|a| a == name).unwrap_or(family) as u64;
        for (i, job) in jobs_for(name, cfg, strict)?.into_iter().enumerate() {
            jobs.push((*name, family_id * 1000 + i as u64, job));
        }
    }
    let reports: Vec<Result<AuditReport, CliError>> = jobs
        .par_iter()
        .map(|(_, stream, job)| {
            let mut rng = rng_for(cfg.seed, *stream);
            job(&mut rng).map_err(CliError::from)
        })
        .collect();
    let mut table = Table::new(&["audit", "index", "passed", "samples", "slack", "worst_margin"]);
    let mut full = Vec::new();
    let mut failed = 0;
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for ((name, _, _), r) in jobs.iter().zip(reports) {
        let r = r?;
        let i = index.entry(name).or_default();
        if !r.passed {
            failed += 1;
        }
        table.push(vec![Cell::from(*name), (*i).into(), r.passed.into(), r.samples.into(), r.slack.into(), r.worst_margin.into()]);
        *i += 1;
        full.push(report_json(&r));
    }
    let mut extras = BTreeMap::new();
    extras.insert("reports".into(), Value::Array(full));
    let mut m = meta("audit", cfg);
    m.insert("which".into(), Value::from(which));
    Ok((Document { meta: m, table, extras }, failed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        assert_eq!(parse_symbol("2").unwrap(), FourierMultiplier::real(2.0));
        assert_eq!(parse_symbol("const:1,-1").unwrap().at(3).unwrap(), Complex64::new(1.0, -1.0));
        let t = parse_symbol("table:0=1;-2=3").unwrap();
        assert_eq!(t.at(-2).unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(t.at(1).unwrap(), Complex64::default());
        let r = parse_symbol("rational:1,1/2").unwrap();
        assert_eq!(r.at(3).unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_symbol("rational:1/0").is_err());
        assert!(parse_symbol("poly:1").is_err());
        assert!(parse_symbol("x").is_err());
    }

    #[test]
    fn scans() {
        assert_eq!(parse_scan("1:5").unwrap(), (1.0, 5.0, SCAN_DEFAULT_SAMPLES));
        assert_eq!(parse_scan("-1:5:20").unwrap(), (-1.0, 5.0, 20));
        assert!(parse_scan("1").is_err());
    }
}
