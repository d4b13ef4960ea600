use std::collections::BTreeMap;

use kahlerq::checks::{self, Context, Outcome};
use kahlerq::EXACT;
use rayon::prelude::*;

use crate::config::{convention_hash, CheckRecord, Config, ConfigError, Report};
use crate::expr;

fn opt_cap(c: i32) -> Option<i32> {
    (c < EXACT).then_some(c)
}

pub fn record(o: &Outcome, config: &Config, stability: bool) -> CheckRecord {
    let mut caps = config.caps;
    if stability {
        caps.weight_cap += 2;
        caps.jet_order += 2;
        caps.hbar_order += 1;
    }
    let evaluated = o.pass || o.residual_terms > 0;
    CheckRecord {
        id: if stability { format!("cap_stability({})", o.id) } else { o.id.clone() },
        anchor: o.anchor.clone(),
        caps,
        residual_weight_cap: opt_cap(o.weight_cap),
        residual_jet_cap: opt_cap(o.jet_cap),
        residual_max_abs: evaluated.then(|| kahlerq::algebra::scalar::rational_to_string(&o.residual_max_abs)),
        residual_terms: o.residual_terms,
        pass: o.pass,
        wall_seconds: o.seconds,
        notes: o.notes.clone(),
        values: o.values.iter().map(|(k, v)| (k.clone(), expr::print(v))).collect(),
    }
}

/// Runs every requested check on up to `jobs` threads. Engine failures become
/// failed records; only configuration problems are errors.
pub fn run_suite(config: &Config, jobs: usize) -> Result<Report, ConfigError> {
    config.validate()?;
    let setup = config.setup()?;
    let n = config.geometry.n();
    let mut expressions = BTreeMap::new();
    for (name, p) in &config.expressions {
        expressions.insert(name.clone(), expr::print(&p.to_weyl(n, name)?));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ConfigError::Invalid(format!("thread pool: {e}")))?;
    let (plain, stable) = pool.install(|| {
        let ctx = Context::new(&setup);
        let plain: Vec<Outcome> = config
            .checks
            .par_iter()
            .map(|id| match &ctx {
                Ok(ctx) => checks::run_check(id, ctx),
                Err(e) => Outcome::failure(id, e.to_string()),
            })
            .collect();
        let stable: Vec<Outcome> = config.cap_stability.par_iter().map(|id| checks::cap_stability(id, &setup, 2)).collect();
        (plain, stable)
    });
    let mut records: Vec<CheckRecord> = plain.iter().map(|o| record(o, config, false)).collect();
    records.extend(stable.iter().map(|o| record(o, config, true)));
    let pass = !records.is_empty() && records.iter().all(|r| r.pass);
    Ok(Report {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        convention_ledger_hash: convention_hash(),
        seed: config.seed,
        config: config.clone(),
        expressions,
        checks: records,
        pass,
    })
}
