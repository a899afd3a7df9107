//! Cuttings and 0-1 regularity partitions, built by sampling and checked by
//! exact verifiers.
//!
//! Both builders take a random sample `S`, use the cells of equal `N_S` as the
//! parts, and verify. On failure the sample doubles; once `S` covers the whole
//! ground set the parts are classes of equal neighborhood, which are never
//! crossed and are pairwise homogeneous, so the loop always ends with a
//! verified partition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cells::cell_partition;
use crate::error::{Error, Result};
use crate::graph::{normalize_set, Graph, VertexOrder};

/// Sampling knobs shared by both builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    /// Multiplier in the initial sample size.
    pub c0: f64,
    /// Sweep threshold handed to the cell partition.
    pub theta: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { c0: 8.0, theta: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuttingPartition {
    pub parts: Vec<Vec<usize>>,
    pub r: f64,
    pub crossing_counts: Vec<usize>,
    pub sample_size: usize,
    pub retries: usize,
}

impl CuttingPartition {
    pub fn max_crossing(&self) -> usize {
        self.crossing_counts.iter().copied().max().unwrap_or(0)
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "parts": self.parts.len(),
            "maxCrossing": self.max_crossing(),
            "retries": self.retries,
            "sampleSize": self.sample_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegularityPartition {
    pub parts: Vec<Vec<usize>>,
    pub epsilon: f64,
    pub good_pairs: Vec<(usize, usize)>,
    pub defect: u64,
    pub sample_size: usize,
    pub retries: usize,
}

impl RegularityPartition {
    pub fn defect_ratio(&self) -> f64 {
        let n: usize = self.parts.iter().map(Vec::len).sum();
        self.defect as f64 / (n * n) as f64
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "epsilon": self.epsilon,
            "K": self.parts.len(),
            "defect": self.defect,
            "defectRatio": self.defect_ratio(),
            "retries": self.retries,
            "sampleSize": self.sample_size,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuttingCheck {
    pub ok: bool,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RegularityCheck {
    pub ok: bool,
    pub defect: u64,
    pub good_pairs: Vec<(usize, usize)>,
}

fn check_partition(g: &Graph, parts: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::input(format!("part {i} is empty")));
        }
        for &v in p {
            if v >= g.n() {
                return Err(Error::input(format!("vertex {v} out of range")));
            }
            if owner[v] != usize::MAX {
                return Err(Error::input(format!("vertex {v} lies in two parts")));
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::input(format!("vertex {v} is in no part")));
    }
    Ok(owner)
}

/// Per part, the number of `a in A` with a neighbor and a non-neighbor in it
/// (`a` is its own non-neighbor). Passes iff every count is at most `|A| / r`.
pub fn verify_cutting(
    g: &Graph,
    a: &[usize],
    parts: &[Vec<usize>],
    r: f64,
) -> Result<CuttingCheck> {
    check_partition(g, parts)?;
    let a = normalize_set(g, a)?;
    let counts: Vec<usize> = parts
        .par_iter()
        .map(|p| {
            a.iter()
                .filter(|&&x| {
                    let adj = p.iter().filter(|&&v| g.has_edge(x, v)).count();
                    adj > 0 && adj < p.len()
                })
                .count()
        })
        .collect();
    let limit = a.len() as f64 / r;
    Ok(CuttingCheck {
        ok: counts.iter().all(|&c| c as f64 <= limit),
        counts,
    })
}

fn homogeneous(g: &Graph, p: &[usize], q: &[usize], same: bool) -> bool {
    if same {
        return p.iter().all(|&u| p.iter().all(|&v| !g.has_edge(u, v)));
    }
    let first = g.has_edge(p[0], q[0]);
    p.iter()
        .all(|&u| q.iter().all(|&v| g.has_edge(u, v) == first))
}

/// Homogeneous ordered pairs (a part with itself must be edge-free) and the
/// mass of the rest. Passes iff `defect / |V|^2 <= epsilon`.
pub fn verify_regularity(g: &Graph, parts: &[Vec<usize>], epsilon: f64) -> Result<RegularityCheck> {
    check_partition(g, parts)?;
    let k = parts.len();
    let (good_pairs, defect) = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut good = Vec::new();
            let mut defect = 0u64;
            for j in 0..k {
                if homogeneous(g, &parts[i], &parts[j], i == j) {
                    good.push((i, j));
                } else {
                    defect += (parts[i].len() * parts[j].len()) as u64;
                }
            }
            (good, defect)
        })
        .reduce(
            || (Vec::new(), 0),
            |(mut a, x), (b, y)| {
                a.extend(b);
                (a, x + y)
            },
        );
    let mut good_pairs = good_pairs;
    good_pairs.sort_unstable();
    let n2 = (g.n() * g.n()) as f64;
    Ok(RegularityCheck {
        ok: defect as f64 / n2 <= epsilon,
        defect,
        good_pairs,
    })
}

fn initial_size(c0: f64, x: f64) -> usize {
    (c0 * x * (x + 2.0).ln()).ceil().max(1.0) as usize
}

/// Cells of equal `N_S` for a random `S` drawn from `pool`, in order.
fn sampled_parts(
    g: &Graph,
    ord: &VertexOrder,
    pool: &[usize],
    size: usize,
    theta: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>> {
    let s: Vec<usize> = if size >= pool.len() {
        pool.to_vec()
    } else {
        rand::seq::index::sample(rng, pool.len(), size)
            .into_iter()
            .map(|i| pool[i])
            .collect()
    };
    Ok(cell_partition(g, ord, &s, theta)?
        .cells
        .into_iter()
        .map(|c| c.members)
        .collect())
}

/// Partition of `V` each of whose parts is crossed by at most `|A| / r` vertices of `A`.
pub fn cutting(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    r: f64,
    seed: u64,
) -> Result<CuttingPartition> {
    cutting_with(g, ord, a, r, seed, &SamplingConfig::default())
}

pub fn cutting_with(
    g: &Graph,
    ord: &VertexOrder,
    a: &[usize],
    r: f64,
    seed: u64,
    cfg: &SamplingConfig,
) -> Result<CuttingPartition> {
    ord.check_graph(g)?;
    let a = normalize_set(g, a)?;
    if a.is_empty() {
        return Err(Error::input("vertex set A must be non-empty"));
    }
    if !(r >= 1.0 && r <= a.len() as f64) {
        return Err(Error::input(format!(
            "r must lie in [1, {}], got {r}",
            a.len()
        )));
    }
    let whole = || vec![ord.perm().to_vec()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut size, mut retries) = (0, 0);
    loop {
        let parts = if r <= 1.0 {
            whole()
        } else {
            size = if retries == 0 {
                initial_size(cfg.c0, r).min(a.len())
            } else {
                (size * 2).min(a.len())
            };
            sampled_parts(g, ord, &a, size, cfg.theta, &mut rng)?
        };
        let check = verify_cutting(g, &a, &parts, r)?;
        if check.ok {
            return Ok(CuttingPartition {
                parts,
                r,
                crossing_counts: check.counts,
                sample_size: size,
                retries,
            });
        }
        if r <= 1.0 || size == a.len() {
            return Err(Error::Invariant(
                "cutting fallback failed verification".into(),
            ));
        }
        retries += 1;
    }
}

/// Partition of `V` with non-homogeneous mass at most `epsilon |V|^2`.
pub fn regularity(g: &Graph, epsilon: f64, seed: u64) -> Result<RegularityPartition> {
    regularity_with(
        g,
        &VertexOrder::identity(g.n()),
        epsilon,
        seed,
        &SamplingConfig::default(),
    )
}

pub fn regularity_with(
    g: &Graph,
    ord: &VertexOrder,
    epsilon: f64,
    seed: u64,
    cfg: &SamplingConfig,
) -> Result<RegularityPartition> {
    ord.check_graph(g)?;
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::input(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut size, mut retries) = (0, 0);
    loop {
        let parts = if epsilon >= 1.0 {
            vec![ord.perm().to_vec()]
        } else {
            size = if retries == 0 {
                initial_size(cfg.c0, 1.0 / epsilon).min(n)
            } else {
                (size * 2).min(n)
            };
            sampled_parts(g, ord, &all, size, cfg.theta, &mut rng)?
        };
        let check = verify_regularity(g, &parts, epsilon)?;
        if check.ok {
            return Ok(RegularityPartition {
                parts,
                epsilon,
                good_pairs: check.good_pairs,
                defect: check.defect,
                sample_size: size,
                retries,
            });
        }
        if epsilon >= 1.0 || size == n {
            return Err(Error::Invariant(
                "regularity fallback failed verification".into(),
            ));
        }
        retries += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutting_verifier_examples() {
        let e = Graph::new(5);
        let check = verify_cutting(&e, &[0, 1], &[(0..5).collect()], 2.0).unwrap();
        assert_eq!(check.counts, vec![0]);
        assert!(check.ok);

        let k = Graph::complete(4);
        let all: Vec<usize> = (0..4).collect();
        let check = verify_cutting(&k, &all, std::slice::from_ref(&all), 1.0).unwrap();
        assert_eq!(check.counts, vec![4]);
        assert!(check.ok);
        assert!(
            !verify_cutting(&k, &all, std::slice::from_ref(&all), 1.5)
                .unwrap()
                .ok
        );
    }

    #[test]
    fn partition_errors() {
        let g = Graph::new(3);
        assert!(verify_cutting(&g, &[0], &[vec![0, 1]], 1.0).is_err());
        assert!(verify_cutting(&g, &[0], &[vec![0, 1], vec![1, 2]], 1.0).is_err());
        assert!(verify_regularity(&g, &[vec![0, 1, 2], vec![]], 0.5).is_err());
    }

    #[test]
    fn regularity_verifier_examples() {
        let e = Graph::new(4);
        let check = verify_regularity(&e, &[vec![0, 1], vec![2], vec![3]], 0.01).unwrap();
        assert_eq!(check.defect, 0);
        assert_eq!(check.good_pairs.len(), 9);

        let k = Graph::complete(5);
        let check = verify_regularity(&k, &[(0..5).collect()], 0.5).unwrap();
        assert_eq!(check.defect, 25);
        assert!(check.good_pairs.is_empty());
        assert!(!check.ok);
    }

    #[test]
    fn trivial_parameters() {
        let g = Graph::cycle(7);
        let ord = VertexOrder::identity(7);
        let c = cutting(&g, &ord, &[0, 2, 4], 1.0, 1).unwrap();
        assert_eq!(c.parts.len(), 1);
        let c = cutting(&g, &ord, &[0, 2, 4], 3.0, 1).unwrap();
        assert_eq!(c.max_crossing(), 0);
        assert!(cutting(&g, &ord, &[0, 2, 4], 3.5, 1).is_err());
        assert!(cutting(&g, &ord, &[], 1.0, 1).is_err());

        let r = regularity(&g, 1.0, 3).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert!(regularity(&g, 0.0, 3).is_err());
    }

    #[test]
    fn regularity_on_cycle() {
        let g = Graph::cycle(30);
        for eps in [0.2, 0.1, 0.05] {
            let r = regularity(&g, eps, 9).unwrap();
            assert!(verify_regularity(&g, &r.parts, eps).unwrap().ok);
            assert_eq!(r, regularity(&g, eps, 9).unwrap());
        }
    }
}
