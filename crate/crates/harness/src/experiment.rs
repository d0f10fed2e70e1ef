//! Seeded experiment runner. Trial `i` draws all of its randomness from
//! `derive(master_seed, [i, stage])`, so trials run in parallel and the
//! records do not depend on scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use tlr_core::algebra::{random_linear_code, LinearCode, Symbol};
use tlr_core::allr::{allr_tensor, best_advice, TensorAllr};
use tlr_core::compose::{
    best_success_frequencies, compose_llr, default_reps, filter_by_radius, globalize, ComposeParams, ComposedLlr,
};
use tlr_core::concat::{gv_feasibility, gv_unique_decode, h2_inv};
use tlr_core::listrec::{brute_force_list_recover, corrupt_to_lists, worst_case_list_size};
use tlr_core::oracle::QueryOracle;
use tlr_core::seed::{self, stage};

use crate::config::{CodeKind, ExperimentConfig, Pipeline};
use crate::report::{ExperimentReport, TrialRecord};
use crate::HarnessError;

type Setup = BTreeMap<String, Value>;

pub fn trial_seed(master: u64, trial: usize, tag: u64) -> u64 {
    seed::derive(master, &[trial as u64, tag])
}

fn random_message(seed: u64, q: usize, k: usize) -> Vec<Symbol> {
    let mut rng = seed::rng(seed, &[]);
    (0..k).map(|_| rng.gen_range(0..q) as Symbol).collect()
}

fn timed<F>(trial: usize, master: u64, f: F) -> Result<TrialRecord, HarnessError>
where
    F: FnOnce(&mut TrialRecord) -> Result<(), HarnessError>,
{
    let start = Instant::now();
    let mut rec = TrialRecord::new(trial, seed::derive(master, &[trial as u64]));
    f(&mut rec)?;
    rec.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rec)
}

fn run_trials<F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<TrialRecord>, HarnessError>
where
    F: Fn(usize, &mut TrialRecord) -> Result<(), HarnessError> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| timed(i, cfg.seed, |rec| f(i, rec)))
        .collect()
}

fn list_bound(cfg: &ExperimentConfig, base: &LinearCode) -> Result<usize, HarnessError> {
    match cfg.list_bound {
        Some(l) => Ok(l),
        None => Ok(worst_case_list_size(base, cfg.alpha, cfg.ell)?),
    }
}

fn base_code(cfg: &ExperimentConfig) -> Result<LinearCode, HarnessError> {
    if cfg.code.kind == CodeKind::Thommesen {
        return Err(HarnessError::Invalid(format!(
            "`code.kind`: {:?} needs a plain linear base code",
            cfg.pipeline
        )));
    }
    Ok(cfg.code.linear(cfg.code.seed)?)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let (setup, records) = match cfg.pipeline {
        Pipeline::TensorAllr => tensor_allr(cfg)?,
        Pipeline::Compose => compose(cfg, false)?,
        Pipeline::Globalize => compose(cfg, true)?,
        Pipeline::ConcatGv => concat_gv(cfg)?,
        Pipeline::GvFeasibility => feasibility(cfg)?,
        Pipeline::DistanceStats => distance_stats(cfg)?,
    };
    Ok(ExperimentReport::new(cfg.clone(), setup, records))
}

fn schedule_setup(allr: &TensorAllr, l: usize) -> Result<Setup, HarnessError> {
    let s = allr.schedule();
    let mut setup = Setup::new();
    setup.insert("list_bound".into(), json!(l));
    setup.insert("delta".into(), json!(s.delta));
    setup.insert("alpha_tilde".into(), json!(allr.alpha_tilde()?.to_string()));
    setup.insert("eps_tilde".into(), json!(s.eps_tilde));
    setup.insert("levels".into(), serde_json::to_value(&s.levels).expect("plain data"));
    Ok(setup)
}

fn tensor_allr(cfg: &ExperimentConfig) -> Result<(Setup, Vec<TrialRecord>), HarnessError> {
    let base = base_code(cfg)?;
    let field = base.field().clone();
    let l = list_bound(cfg, &base)?;
    let allr = allr_tensor(&base, cfg.t, cfg.alpha, l, cfg.eps_tilde.unwrap_or(0.5), cfg.overrides)?;
    let channel = match cfg.channel_alpha {
        Some(a) => a,
        None => allr.alpha_tilde()?,
    };
    let mut setup = schedule_setup(&allr, l)?;
    setup.insert("channel_alpha".into(), json!(channel.to_string()));
    let eps = allr.eps_tilde();
    let tc = allr.code();
    let records = run_trials(cfg, |i, rec| {
        let msg = random_message(trial_seed(cfg.seed, i, stage::MESSAGE), field.order(), tc.k_total());
        let cw = tc.encode(&msg)?;
        let s = corrupt_to_lists(&cw, &field, channel, cfg.ell, trial_seed(cfg.seed, i, stage::CHANNEL), cfg.mode)?;
        let dec = allr.preprocess(trial_seed(cfg.seed, i, stage::PREPROCESS))?;
        let best = best_advice(dec.as_ref(), &cw, &s)?;
        let agreement = *best.agreement.numer() as f64 / *best.agreement.denom() as f64;
        rec.success = agreement >= 1.0 - eps;
        rec.agreement = Some(agreement);
        rec.list_size = Some(u128::from(dec.list_size()));
        rec.query_bound = Some(dec.query_bound() as u128);

        // replay the best decoder on every coordinate through one counting oracle
        let oracle = QueryOracle::new(&s);
        let (mut rows, mut cols, mut max_q) = (0, 0, 0);
        for pos in 0..cw.len() {
            let before = oracle.queries();
            let d = dec.decode(best.j, pos, &oracle);
            rows += d.row_queries;
            cols += d.column_queries;
            max_q = max_q.max(oracle.queries() - before);
        }
        rec.max_queries = Some(max_q);
        rec.stage_queries = Some(rows + cols);
        rec.oracle_queries = Some(oracle.queries());
        rec.extra.insert("row_queries".into(), rows as f64);
        rec.extra.insert("column_queries".into(), cols as f64);
        rec.extra.insert("decoders_scanned".into(), best.decoders_scanned as f64);
        Ok(())
    })?;
    Ok((setup, records))
}

fn composed(cfg: &ExperimentConfig) -> Result<(ComposedLlr, usize), HarnessError> {
    let base = base_code(cfg)?;
    let base = if base.is_systematic() { base } else { base.systematize()? };
    let l = list_bound(cfg, &base)?;
    let ldc = cfg.ldc.build(base.field())?;
    let params = ComposeParams {
        eps_tilde: cfg.eps_tilde,
        overrides: cfg.overrides,
    };
    Ok((compose_llr(&base, cfg.t, cfg.alpha, l, ldc, params)?, l))
}

fn compose(cfg: &ExperimentConfig, global: bool) -> Result<(Setup, Vec<TrialRecord>), HarnessError> {
    let (llr, l) = composed(cfg)?;
    let field = llr.code().field().clone();
    let alpha = llr.alpha_tilde()?;
    let channel = cfg.channel_alpha.unwrap_or(alpha);
    let (reps_list, reps_coord) = cfg.reps.unwrap_or_else(|| default_reps(llr.list_size(), llr.code().n()));
    let mut setup = schedule_setup(llr.tensor(), l)?;
    setup.insert("channel_alpha".into(), json!(channel.to_string()));
    setup.insert("query_bound".into(), json!(llr.query_bound()));
    setup.insert("list_size".into(), json!(llr.list_size()));
    if global {
        setup.insert("reps".into(), json!([reps_list, reps_coord]));
    }
    let k = llr.ldc().message_len();
    let records = run_trials(cfg, |i, rec| {
        let msg = random_message(trial_seed(cfg.seed, i, stage::MESSAGE), field.order(), k);
        let cw = llr.encode(&msg)?;
        let s = corrupt_to_lists(&cw, &field, channel, cfg.ell, trial_seed(cfg.seed, i, stage::CHANNEL), cfg.mode)?;
        rec.list_size = Some(u128::from(llr.list_size()));
        rec.query_bound = Some(llr.query_bound() as u128);
        if global {
            let found = globalize(&llr, &s, reps_list, reps_coord, trial_seed(cfg.seed, i, stage::DECODE))?;
            let kept = filter_by_radius(&found, llr.code(), &s, alpha)?;
            let truth = brute_force_list_recover(llr.code(), &s, alpha)?;
            rec.success = kept == truth;
            rec.output_size = Some(kept.len());
            rec.extra.insert("raw_output".into(), found.len() as f64);
            rec.extra.insert("truth_size".into(), truth.len() as f64);
            return Ok(());
        }
        let inst = llr.preprocess(trial_seed(cfg.seed, i, stage::PREPROCESS))?;
        let (j, freq) = best_success_frequencies(&inst, &s, &msg, cfg.coord_trials, trial_seed(cfg.seed, i, stage::DECODE))?;
        let worst = freq
            .iter()
            .map(|f| *f.numer() as f64 / *f.denom() as f64)
            .fold(1.0, f64::min);
        rec.agreement = Some(worst);
        rec.success = worst >= 2.0 / 3.0;

        let oracle = QueryOracle::new(&s);
        let mut rng = seed::rng(trial_seed(cfg.seed, i, stage::DECODE), &[j]);
        let (mut stage_total, mut max_q) = (0, 0);
        for coord in 0..k {
            let before = oracle.queries();
            let d = inst.decode(j, coord, &oracle, &mut rng)?;
            stage_total += d.queries;
            max_q = max_q.max(oracle.queries() - before);
        }
        rec.max_queries = Some(max_q);
        rec.stage_queries = Some(stage_total);
        rec.oracle_queries = Some(oracle.queries());
        Ok(())
    })?;
    Ok((setup, records))
}

fn hamming(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn concat_gv(cfg: &ExperimentConfig) -> Result<(Setup, Vec<TrialRecord>), HarnessError> {
    let mut setup = Setup::new();
    setup.insert("rho_in".into(), json!(cfg.code.rho_in.to_string()));
    setup.insert("decode".into(), serde_json::to_value(cfg.gv_decode).expect("plain data"));
    let records = run_trials(cfg, |i, rec| {
        let cc = cfg.code.concat(trial_seed(cfg.seed, i, stage::CODE))?;
        let lc = cc.to_linear_code()?;
        let d = lc.min_distance()?;
        let msg = random_message(trial_seed(cfg.seed, i, stage::MESSAGE), cc.outer().field().order(), cc.outer().k());
        let mut w = cc.encode(&msg)?;
        let weight = match cfg.channel_alpha {
            Some(a) => a.max_violations(w.len()),
            None => d.saturating_sub(1) / 2,
        };
        let mut rng = seed::rng(trial_seed(cfg.seed, i, stage::ERRORS), &[]);
        for p in rand::seq::index::sample(&mut rng, w.len(), weight) {
            w[p] ^= 1;
        }
        let got = gv_unique_decode(&cc, &w, d, &cfg.gv_decode)?;
        let mut nearest = usize::MAX;
        lc.for_each_codeword(|_, c| nearest = nearest.min(hamming(c, &w)))?;
        rec.distance = Some(d);
        rec.extra.insert("errors".into(), weight as f64);
        rec.extra.insert("nearest".into(), nearest as f64);
        if let Some(g) = got {
            rec.success = g.message == msg;
            rec.output_size = Some(g.candidates);
            rec.extra.insert("decoded_distance".into(), g.distance as f64);
            rec.extra.insert("no_farther_than_nearest".into(), f64::from(u8::from(g.distance <= nearest)));
        }
        Ok(())
    })?;
    Ok((setup, records))
}

fn distance_stats(cfg: &ExperimentConfig) -> Result<(Setup, Vec<TrialRecord>), HarnessError> {
    let thommesen = cfg.code.kind == CodeKind::Thommesen;
    let (n, k) = if thommesen {
        let cc = cfg.code.concat(0)?;
        (cc.n(), cc.k())
    } else {
        (cfg.code.n, cfg.code.k)
    };
    let rho = k as f64 / n as f64;
    let target = h2_inv(1.0 - rho)? - cfg.gv_eps;
    let mut setup = Setup::new();
    setup.insert("n".into(), json!(n));
    setup.insert("k".into(), json!(k));
    setup.insert("target_relative_distance".into(), json!(target));
    let field = cfg.code.field()?;
    let records = run_trials(cfg, |i, rec| {
        let code_seed = trial_seed(cfg.seed, i, stage::CODE);
        let d = if thommesen {
            cfg.code.concat(code_seed)?.to_linear_code()?.min_distance()?
        } else if cfg.code.kind == CodeKind::Random {
            random_linear_code(&field, n, k, code_seed)?.min_distance()?
        } else {
            cfg.code.linear(code_seed)?.min_distance()?
        };
        rec.distance = Some(d);
        rec.success = d as f64 / n as f64 >= target;
        Ok(())
    })?;
    Ok((setup, records))
}

fn feasibility(cfg: &ExperimentConfig) -> Result<(Setup, Vec<TrialRecord>), HarnessError> {
    let spec = &cfg.feasibility;
    let mut setup = Setup::new();
    setup.insert("c".into(), json!(spec.c));
    let mut records = Vec::new();
    for &rho in &spec.rho {
        for &eps in &spec.eps {
            let idx = records.len();
            records.push(timed(idx, cfg.seed, |rec| {
                let f = gv_feasibility(rho, eps, spec.c)?;
                rec.success = f.feasible;
                for (key, v) in [
                    ("rho", Some(f.rho)),
                    ("eps", Some(f.eps)),
                    ("rho_in", Some(f.rho_in)),
                    ("rho_out", Some(f.rho_out)),
                    ("lhs", f.lhs),
                    ("rhs", Some(f.rhs)),
                    ("s_min", Some(f.s_min)),
                ] {
                    if let Some(v) = v {
                        rec.extra.insert(key.into(), v);
                    }
                }
                Ok(())
            })?);
        }
    }
    Ok((setup, records))
}
