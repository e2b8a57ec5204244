//! The `qrlab` subcommands. Each returns a [`Report`]; the binary prints it
//! and maps [`Report::passed`] to the exit status.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use hurwitz_core::arith::format_rational;
use hurwitz_core::chiodo::elsv_rhs_g0_n3;
use hurwitz_core::cutjoin::cut_and_join_solve;
use hurwitz_core::spectral::{
    check_linear_loop, check_projection, check_quadratic_loop_to, extended_qle_probe, extended_qle_to, h02_from_curve,
    hurwitz_from_recursion, CorrelatorStore, SpectralCurve,
};
use hurwitz_core::wedge::{
    brute_force_hurwitz, completed_cycle, evaluate_combination, shifted_power_sum, HurwitzKey, HurwitzTable, Partition,
};
use hurwitz_core::{MultiSeries, Rational};
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::{JobConfig, Pipeline};
use crate::report::{Check, Report, Row};

fn core_err(e: hurwitz_core::Error) -> anyhow::Error {
    anyhow!("{e}")
}

fn key_map(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// A correlator store for `(q, r)`, primed from the cache. Rejected cache
/// files are reported on stderr and recomputed.
fn open_store(cfg: &JobConfig) -> Result<(CorrelatorStore, Cache)> {
    let cache = Cache::new(&cfg.cache_dir);
    let mut store = CorrelatorStore::new(SpectralCurve::new(cfg.q, cfg.r));
    for (path, why) in cache.load_into(&mut store)? {
        eprintln!("qrlab: ignoring cache file {}: {why}", path.display());
    }
    Ok((store, cache))
}

/// Keys `(g, μ)` with `g <= g_max`, `1 <= ℓ(μ) <= n_max`, `|μ| <= degree`
/// and an integral number of completed cycles.
pub fn hurwitz_keys(cfg: &JobConfig) -> Vec<HurwitzKey> {
    let mut out = Vec::new();
    for g in 0..=cfg.g_max {
        for n in 1..=cfg.n_max {
            for d in 1..=cfg.degree {
                for mu in Partition::all_of_size(d) {
                    let key = HurwitzKey { g, mu, q: cfg.q, r: cfg.r };
                    if key.mu.len() == n && key.is_valid() {
                        out.push(key);
                    }
                }
            }
        }
    }
    out
}

/// `h°_{g;μ}` on the key box from every selected pipeline. Cut-and-join
/// only covers stable `(g, n)`, where it is an independent recursion;
/// topological recursion covers the stable range and `(0, 2)`.
pub fn hurwitz(cfg: &JobConfig) -> Result<Report> {
    let mut table = HurwitzTable::new(cfg.q, cfg.r);
    let mut cutjoin: BTreeMap<(u32, usize), MultiSeries> = BTreeMap::new();
    let mut toprec: BTreeMap<(u32, usize), MultiSeries> = BTreeMap::new();
    let mut spectral = None;
    if cfg.pipelines.contains(&Pipeline::Toprec) {
        spectral = Some(open_store(cfg)?);
    }
    let mut rows = Vec::new();
    for key in hurwitz_keys(cfg) {
        let (g, n) = (key.g, key.mu.len());
        let stable = 2 * g as usize + n > 2;
        let mut values: BTreeMap<String, Rational> = BTreeMap::new();
        for &p in &cfg.pipelines {
            let v = match p {
                Pipeline::Wedge => Some(table.connected(&key).map_err(core_err)?),
                Pipeline::Cutjoin if stable => {
                    if let std::collections::btree_map::Entry::Vacant(e) = cutjoin.entry((g, n)) {
                        let s = cut_and_join_solve(g, n, cfg.q, cfg.r, cfg.degree).map_err(core_err)?;
                        e.insert(s);
                    }
                    Some(cutjoin[&(g, n)].get(key.mu.parts()))
                }
                Pipeline::Toprec if stable || (g, n) == (0, 2) => {
                    let (store, _) = spectral.as_mut().expect("opened above");
                    if let std::collections::btree_map::Entry::Vacant(e) = toprec.entry((g, n)) {
                        let s = if stable {
                            hurwitz_from_recursion(store, g, n, cfg.degree)
                        } else {
                            h02_from_curve(&store.curve(), cfg.degree)
                        };
                        e.insert(s.map_err(core_err)?);
                    }
                    Some(toprec[&(g, n)].get(key.mu.parts()))
                }
                _ => None,
            };
            if let Some(v) = v {
                values.insert(p.name().to_string(), v);
            }
        }
        let mut row = Row::new(key_map(&[
            ("g", json!(g)),
            ("mu", json!(key.mu.parts())),
            ("q", json!(cfg.q)),
            ("r", json!(cfg.r)),
        ]));
        if values.len() >= 2 {
            let first = values.values().next().expect("two values");
            let agree = values.values().all(|v| v == first);
            let mut check = Check::new("pipelines agree", agree);
            if !agree {
                let diff: Vec<String> = values.iter().map(|(p, v)| format!("{p}={}", format_rational(v))).collect();
                check = check.with_detail(diff.join(" "));
            }
            row.checks.push(check);
        }
        if key.mu.size() as usize <= cfg.oracle_bound {
            let oracle = brute_force_hurwitz(&key, true, cfg.oracle_bound).map_err(core_err)?;
            let ok = values.values().all(|v| *v == oracle);
            let mut check = Check::new("oracle", ok);
            if !ok {
                check = check.with_detail(format!("oracle={}", format_rational(&oracle)));
            }
            row.checks.push(check);
        }
        row.values = values.iter().map(|(p, v)| (p.clone(), format_rational(v))).collect();
        rows.push(row);
    }
    if let Some((store, cache)) = &spectral {
        cache.save_from(store)?;
    }
    Ok(Report::new("hurwitz", rows, cfg.timestamp))
}

/// Loop equations on every stable `W_{g,n}` of the box: linear loop and
/// projection on `W_{g,n}` itself; quadratic loop and the extended
/// expression for `N = 1, 2` with `n - 1` spectators, whose top correlator is
/// `W_{g,n}`.
pub fn loopcheck(cfg: &JobConfig) -> Result<Report> {
    let (mut store, cache) = open_store(cfg)?;
    let big_n = store.curve().n();
    let mut rows = Vec::new();
    for g in 0..=cfg.g_max {
        for n in 1..=cfg.n_max {
            if 2 * g as usize + n <= 2 {
                continue;
            }
            let mut row =
                Row::new(key_map(&[("g", json!(g)), ("n", json!(n)), ("q", json!(cfg.q)), ("r", json!(cfg.r))]));
            let s = &mut store;
            row.checks.push(Check::new("linear", check_linear_loop(s, g, n).map_err(core_err)?.passed()));
            row.checks.push(Check::new("projection", check_projection(s, g, n).map_err(core_err)?));
            let m = n - 1;
            let quadratic = check_quadratic_loop_to(s, g, m, 2).map_err(core_err)?;
            row.checks.push(Check::new("quadratic N=1", quadratic.passed()));
            let one = extended_qle_to(s, g, 1, m, 2).map_err(core_err)?;
            row.checks.push(Check::new("extended N=1", one.passed()));
            row.checks.push(Check::new(
                "extended N=1 equals quadratic",
                one.expression.agrees_with(&quadratic.delta.expression, big_n),
            ));
            row.checks.push(Check::new("extended N=2", extended_qle_probe(s, g, 2, m).map_err(core_err)?.passed()));
            rows.push(row);
        }
    }
    cache.save_from(&store)?;
    Ok(Report::new("loopcheck", rows, cfg.timestamp))
}

/// `C̄_1, …, C̄_n`, one row per cycle with a column per `λ`, each checked
/// against the shifted power sum on all partitions of size `k + 2`.
pub fn completed_cycles(n: u32, timestamp: bool) -> Result<Report> {
    let mut rows = Vec::new();
    for k in 1..=n {
        let c = completed_cycle(k).map_err(core_err)?;
        let mut row = Row::new(key_map(&[("n", json!(k))]));
        for (lambda, v) in &c {
            let name: Vec<String> = lambda.parts().iter().map(|x| x.to_string()).collect();
            row.values.insert(name.join(","), format_rational(v));
        }
        let ok = Partition::all_of_size(k + 2).iter().all(|mu| evaluate_combination(&c, mu) == shifted_power_sum(k, mu));
        row.checks.push(Check::new("central character", ok));
        rows.push(row);
    }
    Ok(Report::new("completed-cycles", rows, timestamp))
}

/// The genus-zero three-point ELSV formula against the wedge numbers, for
/// every admissible `μ` with parts up to `degree`.
pub fn elsv03(cfg: &JobConfig) -> Result<Report> {
    let mut table = HurwitzTable::new(cfg.q, cfg.r);
    let mut rows = Vec::new();
    for a in 1..=cfg.degree {
        for b in 1..=a {
            for c in 1..=b {
                let mu = [a, b, c];
                let Ok(rhs) = elsv_rhs_g0_n3(cfg.q, cfg.r, mu) else { continue };
                let lhs = table.connected(&HurwitzKey::new(0, &mu, cfg.q, cfg.r)).map_err(core_err)?;
                let mut row = Row::new(key_map(&[
                    ("g", json!(0)),
                    ("mu", json!(mu)),
                    ("q", json!(cfg.q)),
                    ("r", json!(cfg.r)),
                ]));
                row.values.insert("wedge".into(), format_rational(&lhs));
                row.values.insert("elsv".into(), format_rational(&rhs));
                row.checks.push(Check::new("agree", lhs == rhs));
                rows.push(row);
            }
        }
    }
    Ok(Report::new("elsv03", rows, cfg.timestamp))
}

/// One row per cache file; a failing file carries the reason.
pub fn cache_verify(cache: &Cache, timestamp: bool) -> Result<Report> {
    let rows = cache
        .verify()?
        .into_iter()
        .map(|s| {
            let name = s.path.file_name().map(|x| x.to_string_lossy().into_owned()).unwrap_or_default();
            let mut row = Row::new(key_map(&[("file", json!(name))]));
            row.checks.push(match s.result {
                Ok(_) => Check::new("valid", true),
                Err(e) => Check::new("valid", false).with_detail(format!("{e:#}")),
            });
            row
        })
        .collect();
    Ok(Report::new("cache verify", rows, timestamp))
}

pub fn cache_clear(cache: &Cache, timestamp: bool) -> Result<Report> {
    let removed = cache.clear()?;
    let mut row = Row::new(key_map(&[("dir", json!(cache.dir().display().to_string()))]));
    row.values.insert("removed".into(), removed.to_string());
    Ok(Report::new("cache clear", vec![row], timestamp))
}
