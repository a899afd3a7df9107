//! Experiment suite: certified instances, neighborhood ratios, cells, cuttings
//! and regularity partitions over a parameter grid, written as CSV and JSON.
//!
//! Cases are independent and fan out over a rayon pool capped by the
//! `TWL_WORKERS` environment variable; results are collected in case order so
//! the artifacts are deterministic.

use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cells::{cell_partition, decode_cell, oracle_partition};
use crate::constants::{PatternConstants, Variant};
use crate::distal::{cutting, regularity_with, verify_cutting, verify_regularity, SamplingConfig};
use crate::error::{Error, Result};
use crate::generate::{gen_certified, CertifiedInstance};
use crate::neighborhoods::{neighborhoods_in, representative_set};
use crate::trigraph::verify_sequence;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Family {
    pub t: usize,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SuiteConfig {
    pub families: Vec<Family>,
    pub seeds: Vec<u64>,
    /// `|A|` for cells and cuttings, clipped to `n`.
    #[serde(default = "default_set_size")]
    pub set_size: usize,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// Random sets per instance for the neighborhood-ratio table.
    #[serde(default = "default_random_sets")]
    pub random_sets: usize,
    /// Extra sweep threshold besides `2t`.
    #[serde(default = "default_theta")]
    pub theta: usize,
}

fn default_set_size() -> usize {
    64
}

fn default_epsilons() -> Vec<f64> {
    vec![0.2, 0.1, 0.05]
}

fn default_random_sets() -> usize {
    100
}

fn default_theta() -> usize {
    8
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            families: (0..=2)
                .map(|t| Family {
                    t,
                    sizes: vec![40, 120, 300],
                })
                .collect(),
            seeds: vec![1, 2],
            set_size: default_set_size(),
            epsilons: default_epsilons(),
            random_sets: default_random_sets(),
            theta: default_theta(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| Error::input(format!("suite config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.iter().all(|f| f.sizes.is_empty()) || self.seeds.is_empty() {
            return Err(Error::input("suite config lists no instances"));
        }
        if self.families.iter().flat_map(|f| &f.sizes).any(|&n| n == 0) {
            return Err(Error::input("instance sizes must be >= 1"));
        }
        if self.set_size == 0 || self.theta == 0 {
            return Err(Error::input("setSize and theta must be >= 1"));
        }
        if self.epsilons.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return Err(Error::input("epsilons must be positive"));
        }
        Ok(())
    }

    /// `(t, n, seed)` for every instance, in a fixed order.
    pub fn instances(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for f in &self.families {
            for &n in &f.sizes {
                for &s in &self.seeds {
                    out.push((f.t, n, s));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceRow {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub edges: usize,
    pub width: usize,
    pub set_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioRow {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub sets: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// `|N_G(A)| = |B| + [empty trace]` held on every sampled set.
    pub representatives_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CellRow {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub theta: usize,
    pub cells: usize,
    pub oracle_classes: usize,
    pub blocks: usize,
    pub max_anchors: usize,
    pub descriptor_kinds: usize,
    pub pure: bool,
    pub round_trip: bool,
    pub anchors_ok: bool,
    /// Measured: cells <= oracle classes + 2 * blocks.
    pub within_class_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuttingRow {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub set_size: usize,
    pub r: f64,
    pub parts: usize,
    pub max_crossing: usize,
    pub retries: usize,
    pub sample_size: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegularityRow {
    pub t: usize,
    pub n: usize,
    pub seed: u64,
    pub epsilon: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub defect_ratio: f64,
    pub retries: usize,
    pub sample_size: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteData {
    pub instances: Vec<InstanceRow>,
    pub ratios: Vec<RatioRow>,
    pub cells: Vec<CellRow>,
    pub cuttings: Vec<CuttingRow>,
    pub regularity: Vec<RegularityRow>,
    /// Checked bounds that failed.
    pub failures: Vec<String>,
    /// Measured properties that did not hold; reported, not failed.
    pub findings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub instances: usize,
    pub files: Vec<String>,
    pub failures: Vec<String>,
    pub findings: Vec<String>,
    pub max_ratio_by_t: Vec<(usize, f64)>,
}

/// The `r` values used per set size: powers of two, `ceil(sqrt|A|)` and `|A|`.
pub fn r_grid(a: usize) -> Vec<f64> {
    let mut rs: Vec<usize> = std::iter::successors(Some(1usize), |r| Some(r * 2))
        .take_while(|&r| r <= a)
        .collect();
    rs.push((a as f64).sqrt().ceil() as usize);
    rs.push(a);
    rs.sort_unstable();
    rs.dedup();
    rs.into_iter().map(|r| r as f64).collect()
}

fn instance_rng(t: usize, n: usize, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 20 ^ (t as u64) << 40)
}

/// A deterministic random set of size `k` for an instance.
pub fn instance_set(t: usize, n: usize, seed: u64, k: usize) -> Vec<usize> {
    let mut rng = instance_rng(t, n, seed);
    let mut a = sample(&mut rng, n, k.min(n)).into_vec();
    a.sort_unstable();
    a
}

#[derive(Default)]
struct CaseOut {
    data: SuiteData,
}

impl CaseOut {
    fn fail(&mut self, what: String) {
        self.data.failures.push(what);
    }
}

fn run_instance(cfg: &SuiteConfig, (t, n, seed): (usize, usize, u64)) -> Result<SuiteData> {
    let tag = format!("t={t} n={n} seed={seed}");
    let inst: CertifiedInstance = gen_certified(t, n, seed)?;
    let g = &inst.graph;
    let ord = &inst.order;
    let mut out = CaseOut::default();
    let check = verify_sequence(g, &inst.sequence, t)?;
    if !check.ok {
        out.fail(format!(
            "{tag}: certified sequence has width {}",
            check.width
        ));
    }
    let a = instance_set(t, n, seed, cfg.set_size);
    out.data.instances.push(InstanceRow {
        t,
        n,
        seed,
        edges: g.edge_count(),
        width: check.width,
        set_size: a.len(),
    });

    // neighborhood ratios over random non-empty sets
    let mut rng = instance_rng(t, n, seed.wrapping_add(1));
    let (mut max_ratio, mut sum, mut reps_ok) = (0f64, 0f64, true);
    for _ in 0..cfg.random_sets {
        let k = rng.gen_range(1..=n);
        let set = sample(&mut rng, n, k).into_vec();
        let fam = neighborhoods_in(g, &set)?;
        reps_ok &= fam.size() == representative_set(g, &set)?.len() + usize::from(fam.has_empty);
        max_ratio = max_ratio.max(fam.ratio());
        sum += fam.ratio();
    }
    if !reps_ok {
        out.fail(format!(
            "{tag}: representative count disagrees with trace count"
        ));
    }
    out.data.ratios.push(RatioRow {
        t,
        n,
        seed,
        sets: cfg.random_sets,
        max_ratio,
        mean_ratio: if cfg.random_sets > 0 {
            sum / cfg.random_sets as f64
        } else {
            0.0
        },
        representatives_ok: reps_ok,
    });

    // cells at theta = 2t and the configured theta
    let oracle = oracle_partition(g, &a)?;
    let mut class_of = vec![0; n];
    for (i, c) in oracle.iter().enumerate() {
        c.iter().for_each(|&v| class_of[v] = i);
    }
    let mut thetas = vec![(2 * t).max(1), cfg.theta];
    thetas.dedup();
    for theta in thetas {
        let p = cell_partition(g, ord, &a, theta)?;
        let mut seen = vec![false; n];
        let mut pure = true;
        let mut round_trip = true;
        for c in &p.cells {
            pure &= c
                .members
                .iter()
                .all(|&v| class_of[v] == class_of[c.members[0]]);
            for &v in &c.members {
                pure &= !std::mem::replace(&mut seen[v], true);
            }
            round_trip &= decode_cell(g, ord, &a, &c.descriptor)? == c.members;
        }
        pure &= seen.iter().all(|&s| s);
        let budget = if theta == 2 * t && t >= 1 {
            12 * t
        } else if t >= 1 {
            let k_t = PatternConstants::new(t as u64, Variant::Ck)?.k_t;
            usize::try_from(k_t).unwrap_or(usize::MAX).max(12 * t)
        } else {
            usize::MAX
        };
        let anchors_ok = p.max_anchors() <= budget;
        let within = p.cells.len() <= oracle.len() + 2 * p.blocks.len();
        for (ok, what) in [
            (pure, "cells are not pure or do not tile V"),
            (round_trip, "a descriptor does not decode to its cell"),
            (anchors_ok, "anchor budget exceeded"),
        ] {
            if !ok {
                out.fail(format!("{tag} theta={theta}: {what}"));
            }
        }
        if !within {
            out.data.findings.push(format!(
                "{tag} theta={theta}: {} cells exceed {} classes + 2 * {} blocks",
                p.cells.len(),
                oracle.len(),
                p.blocks.len()
            ));
        }
        out.data.cells.push(CellRow {
            t,
            n,
            seed,
            theta,
            cells: p.cells.len(),
            oracle_classes: oracle.len(),
            blocks: p.blocks.len(),
            max_anchors: p.max_anchors(),
            descriptor_kinds: p.descriptor_kinds(),
            pure,
            round_trip,
            anchors_ok,
            within_class_bound: within,
        });
    }

    // cuttings along the r grid
    let mut last_parts = 0;
    for r in r_grid(a.len()) {
        let c = cutting(g, ord, &a, r, seed)?;
        let ok =
            verify_cutting(g, &a, &c.parts, r)?.ok && (r < a.len() as f64 || c.max_crossing() == 0);
        if !ok {
            out.fail(format!("{tag} r={r}: cutting failed verification"));
        }
        if c.parts.len() < last_parts && r.log2().fract() == 0.0 {
            out.data.findings.push(format!(
                "{tag}: cutting part count dropped to {} at r={r}",
                c.parts.len()
            ));
        }
        if r.log2().fract() == 0.0 {
            last_parts = c.parts.len();
        }
        out.data.cuttings.push(CuttingRow {
            t,
            n,
            seed,
            set_size: a.len(),
            r,
            parts: c.parts.len(),
            max_crossing: c.max_crossing(),
            retries: c.retries,
            sample_size: c.sample_size,
            ok,
        });
    }

    for &eps in &cfg.epsilons {
        let reg = regularity_with(g, ord, eps, seed, &SamplingConfig::default())?;
        let ok = verify_regularity(g, &reg.parts, eps)?.ok;
        if !ok {
            out.fail(format!("{tag} eps={eps}: regularity failed verification"));
        }
        out.data.regularity.push(RegularityRow {
            t,
            n,
            seed,
            epsilon: eps,
            k: reg.parts.len(),
            defect_ratio: reg.defect_ratio(),
            retries: reg.retries,
            sample_size: reg.sample_size,
            ok,
        });
    }
    Ok(out.data)
}

fn workers() -> Option<usize> {
    std::env::var("TWL_WORKERS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&w| w >= 1)
}

/// Runs every case in memory.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteData> {
    cfg.validate()?;
    let cases = cfg.instances();
    let go =
        || -> Result<Vec<SuiteData>> { cases.par_iter().map(|&c| run_instance(cfg, c)).collect() };
    let parts = match workers() {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::ResourceLimit(format!("worker pool: {e}")))?
            .install(go)?,
        None => go()?,
    };
    let mut all = SuiteData::default();
    for d in parts {
        all.instances.extend(d.instances);
        all.ratios.extend(d.ratios);
        all.cells.extend(d.cells);
        all.cuttings.extend(d.cuttings);
        all.regularity.extend(d.regularity);
        all.failures.extend(d.failures);
        all.findings.extend(d.findings);
    }
    Ok(all)
}

fn write_csv<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<String> {
    let path = dir.join(name);
    let io =
        |e: &dyn std::fmt::Display| Error::input(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(&path).map_err(|e| io(&e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(&e))?;
    }
    w.flush().map_err(|e| io(&e))?;
    Ok(name.to_string())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value).expect("suite data serializes");
    std::fs::write(&path, text + "\n")
        .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(name.to_string())
}

/// Runs the suite and writes its artifacts into `out`.
pub fn emit_suite(cfg: &SuiteConfig, out: &Path) -> Result<SuiteReport> {
    let data = run_suite(cfg)?;
    std::fs::create_dir_all(out)
        .map_err(|e| Error::input(format!("cannot create {}: {e}", out.display())))?;
    let files = vec![
        write_json(out, "config.json", cfg)?,
        write_csv(out, "instances.csv", &data.instances)?,
        write_csv(out, "ratios.csv", &data.ratios)?,
        write_csv(out, "cells.csv", &data.cells)?,
        write_csv(out, "cutting.csv", &data.cuttings)?,
        write_csv(out, "regularity.csv", &data.regularity)?,
        write_json(out, "suite.json", &data)?,
    ];
    let mut ts: Vec<usize> = data.ratios.iter().map(|r| r.t).collect();
    ts.sort_unstable();
    ts.dedup();
    let max_ratio_by_t = ts
        .into_iter()
        .map(|t| {
            let m = data
                .ratios
                .iter()
                .filter(|r| r.t == t)
                .map(|r| r.max_ratio)
                .fold(0.0, f64::max);
            (t, m)
        })
        .collect();
    Ok(SuiteReport {
        instances: data.instances.len(),
        files,
        failures: data.failures,
        findings: data.findings,
        max_ratio_by_t,
    })
}
