//! Network path selection over a directed multigraph.
//!
//! Edges are the arms. An action routes a packet along one simple path from
//! the source to the destination, and every edge on the chosen path reports
//! a two-coordinate reward derived from its sampled delay and energy costs:
//! `reward = 1 − cost/cost_max`, where `cost_max` is the per-edge bound
//! declared in the edge list. Costs are drawn from per-edge finite discrete
//! distributions, independently per edge and per step.
//!
//! Edges that lie on no source-destination path cannot produce feedback, so
//! they are dropped from the arm set at construction time (the edge list may
//! still mention them; they are reported via [`RoutingEnv::dropped_edges`]).

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::Environment;
use crate::action::{Action, ActionSet};
use crate::error::{Error, Result};
use crate::reward::RewardVector;
use crate::{ActionSet64, Reward64};

const MAX_ACTIONS: usize = 200_000;

/// Finite discrete distribution given as `value:probability` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDist {
    pairs: Vec<(f64, f64)>,
}

impl DiscreteDist {
    /// Probabilities must be nonnegative and sum to 1 (within 1e-9);
    /// values must be finite and nonnegative.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Config("discrete distribution needs at least one outcome".into()));
        }
        for &(v, p) in &pairs {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "discrete distribution values must be finite and ≥ 0 (got {v})"
                )));
            }
            if !p.is_finite() || p < 0.0 {
                return Err(Error::Config(format!(
                    "discrete distribution probabilities must be finite and ≥ 0 (got {p})"
                )));
            }
        }
        let total: f64 = pairs.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "discrete distribution probabilities must sum to 1 (got {total})"
            )));
        }
        Ok(Self { pairs })
    }

    /// Parse the `v1:p1,v2:p2,...` form used in edge lists.
    pub fn parse(text: &str) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = text
            .split(',')
            .map(|part| {
                let (v, p) = part
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("expected value:prob, got {part:?}")))?;
                let v = v.trim().parse::<f64>().map_err(|_| {
                    Error::Config(format!("bad distribution value {:?}", v.trim()))
                })?;
                let p = p.trim().parse::<f64>().map_err(|_| {
                    Error::Config(format!("bad distribution probability {:?}", p.trim()))
                })?;
                Ok((v, p))
            })
            .collect::<Result<_>>()?;
        Self::new(pairs)
    }

    pub fn mean(&self) -> f64 {
        self.pairs.iter().map(|&(v, p)| v * p).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.pairs.iter().map(|&(v, _)| v).fold(0.0, f64::max)
    }

    pub fn sample(&self, dist: &WeightedIndex<f64>, rng: &mut ChaCha8Rng) -> f64 {
        self.pairs[dist.sample(rng)].0
    }
}

/// One line of the edge list.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSpec {
    pub src: usize,
    pub dst: usize,
    pub delay_max: f64,
    pub energy_max: f64,
    pub delay: DiscreteDist,
    pub energy: DiscreteDist,
}

/// Parse an edge list: one edge per line,
/// `src dst delay_max energy_max delay_dist energy_dist`,
/// with `#` comments and blank lines ignored.
pub fn parse_edge_list(text: &str) -> Result<Vec<EdgeSpec>> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Config(format!(
                "edge list line {}: expected 6 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse_node = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Config(format!("edge list line {}: bad node id {s:?}", lineno + 1)))
        };
        let parse_bound = |s: &str, what: &str| {
            let v = s.parse::<f64>().map_err(|_| {
                Error::Config(format!("edge list line {}: bad {what} {s:?}", lineno + 1))
            })?;
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!(
                    "edge list line {}: {what} must be > 0 (got {v})",
                    lineno + 1
                )));
            }
            Ok(v)
        };
        let spec = EdgeSpec {
            src: parse_node(fields[0])?,
            dst: parse_node(fields[1])?,
            delay_max: parse_bound(fields[2], "delay_max")?,
            energy_max: parse_bound(fields[3], "energy_max")?,
            delay: DiscreteDist::parse(fields[4])?,
            energy: DiscreteDist::parse(fields[5])?,
        };
        if spec.delay.max_value() > spec.delay_max {
            return Err(Error::Config(format!(
                "edge list line {}: delay outcome exceeds delay_max",
                lineno + 1
            )));
        }
        if spec.energy.max_value() > spec.energy_max {
            return Err(Error::Config(format!(
                "edge list line {}: energy outcome exceeds energy_max",
                lineno + 1
            )));
        }
        edges.push(spec);
    }
    if edges.is_empty() {
        return Err(Error::Config("edge list has no edges".into()));
    }
    Ok(edges)
}

/// Parameters of the routing environment.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutingConfig {
    pub edges: Vec<EdgeSpec>,
    pub source: usize,
    pub destination: usize,
    /// Maximum path length in edges; `None` means the node count.
    pub max_path_len: Option<usize>,
}

pub struct RoutingEnv {
    cfg: RoutingConfig,
    actions: Arc<ActionSet64>,
    /// Kept edges, as indices into `cfg.edges`, in original order.
    kept: Vec<usize>,
    dropped: Vec<usize>,
    arm_means: Vec<Reward64>,
    samplers: Vec<(WeightedIndex<f64>, WeightedIndex<f64>)>,
}

impl RoutingEnv {
    pub fn build(cfg: RoutingConfig) -> Result<Self> {
        if cfg.source == cfg.destination {
            return Err(Error::Config("source and destination must differ".into()));
        }
        let node_count = cfg
            .edges
            .iter()
            .flat_map(|e| [e.src, e.dst])
            .chain([cfg.source, cfg.destination])
            .max()
            .unwrap_or(0)
            + 1;
        let cap = cfg.max_path_len.unwrap_or(node_count).max(1);
        let paths = enumerate_paths(&cfg.edges, cfg.source, cfg.destination, cap)?;
        if paths.is_empty() {
            return Err(Error::Config(format!(
                "no path from {} to {} within {} hops",
                cfg.source, cfg.destination, cap
            )));
        }

        // Arms are exactly the edges used by some path.
        let used: BTreeSet<usize> = paths.iter().flatten().copied().collect();
        let kept: Vec<usize> = used.into_iter().collect();
        let dropped: Vec<usize> = (0..cfg.edges.len()).filter(|e| !kept.contains(e)).collect();
        let arm_of_edge: Vec<Option<usize>> = {
            let mut map = vec![None; cfg.edges.len()];
            for (arm, &edge) in kept.iter().enumerate() {
                map[edge] = Some(arm);
            }
            map
        };

        let actions: Vec<Action<f64>> = paths
            .iter()
            .map(|path| {
                let arms: Vec<usize> = path
                    .iter()
                    .map(|&e| arm_of_edge[e].expect("path edges are kept"))
                    .collect();
                Action::unit(&arms)
            })
            .collect::<Result<_>>()?;
        let actions = Arc::new(ActionSet::new(actions, kept.len(), 2)?);

        let arm_means: Vec<Reward64> = kept
            .iter()
            .map(|&e| {
                let edge = &cfg.edges[e];
                RewardVector::new(vec![
                    1.0 - edge.delay.mean() / edge.delay_max,
                    1.0 - edge.energy.mean() / edge.energy_max,
                ])
            })
            .collect::<Result<_>>()?;

        let samplers = kept
            .iter()
            .map(|&e| {
                let edge = &cfg.edges[e];
                let mk = |d: &DiscreteDist| {
                    WeightedIndex::new(d.pairs.iter().map(|&(_, p)| p))
                        .map_err(|err| Error::Config(format!("bad distribution weights: {err}")))
                };
                Ok((mk(&edge.delay)?, mk(&edge.energy)?))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self { cfg, actions, kept, dropped, arm_means, samplers })
    }

    pub fn config(&self) -> &RoutingConfig {
        &self.cfg
    }

    /// Edge-list indices of the arms, in arm order.
    pub fn kept_edges(&self) -> &[usize] {
        &self.kept
    }

    /// Edge-list indices that lie on no admissible path.
    pub fn dropped_edges(&self) -> &[usize] {
        &self.dropped
    }
}

/// Simple paths from `source` to `destination` as edge-index sequences,
/// depth-first in edge-list order, at most `cap` edges long.
fn enumerate_paths(
    edges: &[EdgeSpec],
    source: usize,
    destination: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let node_count = edges
        .iter()
        .flat_map(|e| [e.src, e.dst])
        .chain([source, destination])
        .max()
        .unwrap_or(0)
        + 1;
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (idx, e) in edges.iter().enumerate() {
        out_edges[e.src].push(idx);
    }

    let mut paths = Vec::new();
    let mut stack = Vec::new();
    let mut visited = vec![false; node_count];
    visited[source] = true;
    dfs(
        edges, &out_edges, source, destination, cap, &mut visited, &mut stack, &mut paths,
    )?;
    Ok(paths)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    edges: &[EdgeSpec],
    out_edges: &[Vec<usize>],
    node: usize,
    destination: usize,
    cap: usize,
    visited: &mut Vec<bool>,
    stack: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if node == destination {
        paths.push(stack.clone());
        if paths.len() > MAX_ACTIONS {
            return Err(Error::Config(format!(
                "routing action set exceeds {MAX_ACTIONS} paths"
            )));
        }
        return Ok(());
    }
    if stack.len() == cap {
        return Ok(());
    }
    for &edge in &out_edges[node] {
        let next = edges[edge].dst;
        if visited[next] {
            continue;
        }
        visited[next] = true;
        stack.push(edge);
        dfs(edges, out_edges, next, destination, cap, visited, stack, paths)?;
        stack.pop();
        visited[next] = false;
    }
    Ok(())
}

impl Environment for RoutingEnv {
    fn action_set(&self) -> &Arc<ActionSet64> {
        &self.actions
    }

    fn true_arm_means(&self) -> &[Reward64] {
        &self.arm_means
    }

    fn sample_support(&self, arms: &[usize], rng: &mut ChaCha8Rng) -> Vec<Reward64> {
        arms.iter()
            .map(|&arm| {
                let edge = &self.cfg.edges[self.kept[arm]];
                let (delay_idx, energy_idx) = &self.samplers[arm];
                let delay = edge.delay.sample(delay_idx, rng);
                let energy = edge.energy.sample(energy_idx, rng);
                RewardVector::new(vec![
                    1.0 - delay / edge.delay_max,
                    1.0 - energy / edge.energy_max,
                ])
                .expect("finite sample")
            })
            .collect()
    }
}
