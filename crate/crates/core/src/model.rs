//! The six subset-expansion weight families, their lambda values, log-domain
//! evaluation, and exact partition sums by enumeration.
//!
//! All weights live in the log domain; q^kappa style terms overflow doubles
//! long before the graphs stop being interesting.

use crate::bits::{Subset, SubsetKind};
use crate::caps;
use crate::gf2::{
    adjacency_rank_edges, adjacency_rank_induced, adjacency_rank_induced_masked,
    adjacency_rank_masked, incidence_rank, incidence_rank_masked,
};
use crate::graph::{component_size_profile, components_count, components_masked, profile_masked,
    Graph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("model has {model} kind but subset has {subset} kind")]
    KindMismatch {
        model: SubsetKind,
        subset: SubsetKind,
    },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("{what} must have length {expected}, got {got}")]
    VectorLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("flip index {index} out of range for ground set of {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("state space 2^{bits} exceeds cap 2^{cap}")]
    StateSpaceExceeded { bits: usize, cap: usize },
}

/// A subset-expansion weight family with its parameters. The first five are
/// edge weightings; the interlace weighting runs over vertex subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightModel {
    /// w(V,S) = q^{kappa(S)} mu^{|S|}
    Rc { q: f64, mu: f64 },
    /// w(V,S) = (x-1)^{r(E)-r(S)} (y-1)^{|S|-r(S)} with r the GF(2)
    /// incidence rank
    Tutte { x: f64, y: f64 },
    /// w(V,S) = q^{rank2(S)} mu^{|S|} with rank2 the GF(2) adjacency rank
    R2 { q: f64, mu: f64 },
    /// w(V,S) = q^{kappa(S)} prod_{e in S} v_e
    MultiTutte { q: f64, v: Vec<f64> },
    /// w(V,S) = (y-1)^{|S|-r(S)} prod_i x_i^{kappa(i,S)}
    #[serde(rename = "upoly")]
    UPoly { y: f64, x: Vec<f64> },
    /// w(G[S]) = (x-1)^{rank2(G[S])} (y-1)^{n - rank2(G[S])}, n the host
    /// vertex count
    Interlace { x: f64, y: f64 },
}

fn require(cond: bool, msg: &str) -> Result<(), ModelError> {
    if cond {
        Ok(())
    } else {
        Err(ModelError::Param(msg.to_string()))
    }
}

impl WeightModel {
    pub fn kind(&self) -> SubsetKind {
        match self {
            WeightModel::Interlace { .. } => SubsetKind::Vertex,
            _ => SubsetKind::Edge,
        }
    }

    /// Size of the ground set the model's subsets range over.
    pub fn ground_size(&self, g: &Graph) -> usize {
        match self.kind() {
            SubsetKind::Edge => g.m(),
            SubsetKind::Vertex => g.n(),
        }
    }

    /// The multiplicativity constant of the family.
    pub fn lambda(&self) -> f64 {
        match self {
            WeightModel::Rc { q, .. } => *q,
            WeightModel::Tutte { x, y } => (x - 1.0) * (y - 1.0),
            WeightModel::R2 { q, .. } => q * q,
            WeightModel::MultiTutte { q, .. } => *q,
            WeightModel::UPoly { y, x } => {
                let y_prime = (y - 1.0).max(1.0 / (y - 1.0));
                let x_prime = x
                    .iter()
                    .map(|&xi| xi.max(1.0 / xi))
                    .fold(1.0f64, f64::max);
                y_prime * x_prime.powi(3)
            }
            WeightModel::Interlace { x, y } => {
                let r = (x - 1.0) / (y - 1.0);
                r * r
            }
        }
    }

    /// max(lambda, 1/lambda); always at least 1.
    pub fn lambda_hat(&self) -> f64 {
        let l = self.lambda();
        l.max(1.0 / l)
    }

    /// Check parameter domains (all weights must stay strictly positive) and
    /// per-graph vector lengths.
    pub fn validate_for(&self, g: &Graph) -> Result<(), ModelError> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match self {
            WeightModel::Rc { q, mu } | WeightModel::R2 { q, mu } => {
                require(finite(&[*q, *mu]) && *q > 0.0 && *mu > 0.0, "q and mu must be > 0")
            }
            WeightModel::Tutte { x, y } | WeightModel::Interlace { x, y } => {
                require(finite(&[*x, *y]) && *x > 1.0 && *y > 1.0, "x and y must be > 1")
            }
            WeightModel::MultiTutte { q, v } => {
                require(finite(&[*q]) && *q > 0.0, "q must be > 0")?;
                if v.len() != g.m() {
                    return Err(ModelError::VectorLength {
                        what: "edge weight vector v",
                        expected: g.m(),
                        got: v.len(),
                    });
                }
                require(finite(v) && v.iter().all(|&ve| ve > 0.0), "all v_e must be > 0")
            }
            WeightModel::UPoly { y, x } => {
                require(finite(&[*y]) && *y > 1.0, "y must be > 1")?;
                if x.len() != g.n() {
                    return Err(ModelError::VectorLength {
                        what: "size weight vector x",
                        expected: g.n(),
                        got: x.len(),
                    });
                }
                require(finite(x) && x.iter().all(|&xi| xi > 0.0), "all x_i must be > 0")
            }
        }
    }

    fn check_kind(&self, s: &Subset) -> Result<(), ModelError> {
        if s.kind() != self.kind() {
            return Err(ModelError::KindMismatch {
                model: self.kind(),
                subset: s.kind(),
            });
        }
        Ok(())
    }

    /// Natural log of the subset's weight.
    pub fn log_weight(&self, g: &Graph, s: &Subset) -> Result<f64, ModelError> {
        self.check_kind(s)?;
        self.validate_for(g)?;
        let ctx = EvalCtx::new(self, g);
        Ok(ctx.eval_subset(g, s))
    }

    /// log w(s with `flip` toggled) - log w(s); exactly the difference of the
    /// two independent evaluations.
    pub fn log_weight_ratio(&self, g: &Graph, s: &Subset, flip: usize) -> Result<f64, ModelError> {
        self.check_kind(s)?;
        self.validate_for(g)?;
        if flip >= s.len() {
            return Err(ModelError::IndexOutOfRange {
                index: flip,
                len: s.len(),
            });
        }
        let ctx = EvalCtx::new(self, g);
        Ok(ctx.eval_subset(g, &s.toggled(flip)) - ctx.eval_subset(g, s))
    }

    /// Log of the full subset-expansion sum, by streaming log-sum-exp over
    /// every subset in ascending mask order.
    pub fn exact_partition_log(&self, g: &Graph) -> Result<f64, ModelError> {
        self.validate_for(g)?;
        let bits = self.ground_size(g);
        if bits > caps::PARTITION_LOG2 {
            return Err(ModelError::StateSpaceExceeded {
                bits,
                cap: caps::PARTITION_LOG2,
            });
        }
        let ctx = EvalCtx::new(self, g);
        let mut lse = LogSumExp::new();
        for mask in 0..1u64 << bits {
            lse.add(ctx.eval_masked(g, mask));
        }
        Ok(lse.value())
    }
}

/// Streaming log-sum-exp accumulator.
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub(crate) fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    pub(crate) fn add(&mut self, x: f64) {
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub(crate) fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// Per-(model, graph) evaluation context: parameter logs and the host
/// quantities that stay fixed across subsets.
pub(crate) enum EvalCtx {
    Rc {
        ln_q: f64,
        ln_mu: f64,
    },
    Tutte {
        ln_x1: f64,
        ln_y1: f64,
        r_full: usize,
    },
    R2 {
        ln_q: f64,
        ln_mu: f64,
    },
    MultiTutte {
        ln_q: f64,
        ln_v: Vec<f64>,
    },
    UPoly {
        ln_y1: f64,
        ln_x: Vec<f64>,
    },
    Interlace {
        ln_x1: f64,
        ln_y1: f64,
    },
}

impl EvalCtx {
    /// Callers must have validated the model for `g` first.
    pub(crate) fn new(model: &WeightModel, g: &Graph) -> Self {
        match model {
            WeightModel::Rc { q, mu } => EvalCtx::Rc {
                ln_q: q.ln(),
                ln_mu: mu.ln(),
            },
            WeightModel::Tutte { x, y } => {
                let full = Subset::from_indices(
                    SubsetKind::Edge,
                    g.m(),
                    &(0..g.m()).collect::<Vec<_>>(),
                );
                EvalCtx::Tutte {
                    ln_x1: (x - 1.0).ln(),
                    ln_y1: (y - 1.0).ln(),
                    r_full: incidence_rank(g, &full),
                }
            }
            WeightModel::R2 { q, mu } => EvalCtx::R2 {
                ln_q: q.ln(),
                ln_mu: mu.ln(),
            },
            WeightModel::MultiTutte { q, v } => EvalCtx::MultiTutte {
                ln_q: q.ln(),
                ln_v: v.iter().map(|ve| ve.ln()).collect(),
            },
            WeightModel::UPoly { y, x } => EvalCtx::UPoly {
                ln_y1: (y - 1.0).ln(),
                ln_x: x.iter().map(|xi| xi.ln()).collect(),
            },
            WeightModel::Interlace { x, y } => EvalCtx::Interlace {
                ln_x1: (x - 1.0).ln(),
                ln_y1: (y - 1.0).ln(),
            },
        }
    }

    pub(crate) fn eval_subset(&self, g: &Graph, s: &Subset) -> f64 {
        match self {
            EvalCtx::Rc { ln_q, ln_mu } => {
                components_count(g, s) as f64 * ln_q + s.count() as f64 * ln_mu
            }
            EvalCtx::Tutte {
                ln_x1,
                ln_y1,
                r_full,
            } => {
                let r_s = incidence_rank(g, s);
                (*r_full as f64 - r_s as f64) * ln_x1 + (s.count() as f64 - r_s as f64) * ln_y1
            }
            EvalCtx::R2 { ln_q, ln_mu } => {
                adjacency_rank_edges(g, s) as f64 * ln_q + s.count() as f64 * ln_mu
            }
            EvalCtx::MultiTutte { ln_q, ln_v } => {
                components_count(g, s) as f64 * ln_q
                    + s.ones().map(|e| ln_v[e]).sum::<f64>()
            }
            EvalCtx::UPoly { ln_y1, ln_x } => {
                let r_s = incidence_rank(g, s);
                let profile = component_size_profile(g, s);
                (s.count() as f64 - r_s as f64) * ln_y1
                    + profile
                        .iter()
                        .zip(ln_x)
                        .map(|(&c, lx)| c as f64 * lx)
                        .sum::<f64>()
            }
            EvalCtx::Interlace { ln_x1, ln_y1 } => {
                let r2 = adjacency_rank_induced(g, s) as f64;
                r2 * ln_x1 + (g.n() as f64 - r2) * ln_y1
            }
        }
    }

    /// Mask-indexed evaluation for enumeration sweeps; ground set must fit
    /// in a word.
    pub(crate) fn eval_masked(&self, g: &Graph, mask: u64) -> f64 {
        let all_v = if g.n() == 64 {
            u64::MAX
        } else {
            (1u64 << g.n()) - 1
        };
        match self {
            EvalCtx::Rc { ln_q, ln_mu } => {
                components_masked(g, all_v, mask) as f64 * ln_q
                    + mask.count_ones() as f64 * ln_mu
            }
            EvalCtx::Tutte {
                ln_x1,
                ln_y1,
                r_full,
            } => {
                let r_s = incidence_rank_masked(g, all_v, mask) as f64;
                (*r_full as f64 - r_s) * ln_x1 + (mask.count_ones() as f64 - r_s) * ln_y1
            }
            EvalCtx::R2 { ln_q, ln_mu } => {
                adjacency_rank_masked(g, all_v, mask) as f64 * ln_q
                    + mask.count_ones() as f64 * ln_mu
            }
            EvalCtx::MultiTutte { ln_q, ln_v } => {
                let mut sum = components_masked(g, all_v, mask) as f64 * ln_q;
                for e in 0..g.m() {
                    if mask >> e & 1 == 1 {
                        sum += ln_v[e];
                    }
                }
                sum
            }
            EvalCtx::UPoly { ln_y1, ln_x } => {
                let r_s = incidence_rank_masked(g, all_v, mask) as f64;
                let profile = profile_masked(g, all_v, mask);
                (mask.count_ones() as f64 - r_s) * ln_y1
                    + profile
                        .iter()
                        .zip(ln_x)
                        .map(|(&c, lx)| c as f64 * lx)
                        .sum::<f64>()
            }
            EvalCtx::Interlace { ln_x1, ln_y1 } => {
                let r2 = adjacency_rank_induced_masked(g, mask) as f64;
                r2 * ln_x1 + (g.n() as f64 - r2) * ln_y1
            }
        }
    }
}

/// Log weight of a standalone graph piece `(vmask, emask)` of the host, as
/// the multiplicativity condition consumes it. For the Tutte family this is
/// the random-cluster form at q = (x-1)(y-1), mu = y-1, which agrees with
/// the expansion term up to a factor constant across the host's subsets; the
/// expansion-term exponent r(E) is pinned to the host and is not a function
/// of the piece.
pub(crate) fn edge_piece_log_weight(model: &WeightModel, g: &Graph, vmask: u64, emask: u64) -> f64 {
    let edge_count = emask.count_ones() as f64;
    match model {
        WeightModel::Rc { q, mu } => {
            components_masked(g, vmask, emask) as f64 * q.ln() + edge_count * mu.ln()
        }
        WeightModel::Tutte { x, y } => {
            components_masked(g, vmask, emask) as f64 * ((x - 1.0) * (y - 1.0)).ln()
                + edge_count * (y - 1.0).ln()
        }
        WeightModel::R2 { q, mu } => {
            adjacency_rank_masked(g, vmask, emask) as f64 * q.ln() + edge_count * mu.ln()
        }
        WeightModel::MultiTutte { q, v } => {
            let mut sum = components_masked(g, vmask, emask) as f64 * q.ln();
            for e in 0..g.m() {
                if emask >> e & 1 == 1 {
                    sum += v[e].ln();
                }
            }
            sum
        }
        WeightModel::UPoly { y, x } => {
            let r = incidence_rank_masked(g, vmask, emask) as f64;
            let profile = profile_masked(g, vmask, emask);
            (edge_count - r) * (y - 1.0).ln()
                + profile
                    .iter()
                    .zip(x)
                    .map(|(&c, xi)| c as f64 * xi.ln())
                    .sum::<f64>()
        }
        WeightModel::Interlace { .. } => unreachable!("interlace is a vertex weighting"),
    }
}

/// Log weight of the induced piece `G[vmask]` for the vertex weighting, with
/// the vertex-count exponent taken from the piece being evaluated.
pub(crate) fn vertex_piece_log_weight(model: &WeightModel, g: &Graph, vmask: u64) -> f64 {
    match model {
        WeightModel::Interlace { x, y } => {
            let r2 = adjacency_rank_induced_masked(g, vmask) as f64;
            r2 * (x - 1.0).ln() + (vmask.count_ones() as f64 - r2) * (y - 1.0).ln()
        }
        _ => unreachable!("edge weightings have no induced-piece form"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn edge_subset(g: &Graph, mask: u64) -> Subset {
        Subset::from_mask(SubsetKind::Edge, g.m(), mask)
    }

    fn vertex_subset(g: &Graph, mask: u64) -> Subset {
        Subset::from_mask(SubsetKind::Vertex, g.n(), mask)
    }

    // Direct non-log evaluation with its own component count, used as the
    // enumeration oracle for the partition anchors.
    mod oracle {
        use crate::graph::Graph;

        pub fn components_bfs(g: &Graph, emask: u64) -> usize {
            let mut seen = vec![false; g.n()];
            let mut count = 0;
            for start in 0..g.n() {
                if seen[start] {
                    continue;
                }
                count += 1;
                let mut stack = vec![start];
                seen[start] = true;
                while let Some(v) = stack.pop() {
                    for &(w, e) in g.adjacency(v) {
                        if emask >> e & 1 == 1 && !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            count
        }

        pub fn rc_partition(g: &Graph, q: f64, mu: f64) -> f64 {
            (0..1u64 << g.m())
                .map(|mask| {
                    q.powi(components_bfs(g, mask) as i32) * mu.powi(mask.count_ones() as i32)
                })
                .sum()
        }
    }

    #[test]
    fn lambda_values() {
        assert_eq!(WeightModel::Rc { q: 2.0, mu: 7.0 }.lambda(), 2.0);
        assert_eq!(WeightModel::Rc { q: 2.0, mu: 7.0 }.lambda_hat(), 2.0);
        assert_eq!(WeightModel::Tutte { x: 3.0, y: 2.0 }.lambda(), 2.0);
        assert_eq!(WeightModel::Rc { q: 1.0, mu: 5.0 }.lambda_hat(), 1.0);
        assert_eq!(WeightModel::R2 { q: 2.0, mu: 1.0 }.lambda(), 4.0);
        assert_eq!(
            WeightModel::MultiTutte {
                q: 1.5,
                v: vec![2.0]
            }
            .lambda(),
            1.5
        );
        // y' = max(1, 1) = 1, x' = max over {1.5, 1/0.75, 1.25} = 1.5
        let upoly = WeightModel::UPoly {
            y: 2.0,
            x: vec![1.5, 0.75, 1.25],
        };
        assert!((upoly.lambda() - 3.375).abs() < 1e-12);
        let inter = WeightModel::Interlace { x: 2.0, y: 3.0 };
        assert!((inter.lambda() - 0.25).abs() < 1e-12);
        assert!((inter.lambda_hat() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn log_weight_anchors() {
        let g3 = Graph::new(3, vec![(0, 1)]).unwrap();
        let rc = WeightModel::Rc { q: 2.0, mu: 1.0 };
        let lw = rc.log_weight(&g3, &edge_subset(&g3, 0)).unwrap();
        assert!((lw - 8.0f64.ln()).abs() < 1e-12);

        let c3 = Graph::cycle(3);
        let tutte = WeightModel::Tutte { x: 3.0, y: 2.0 };
        let lw = tutte.log_weight(&c3, &edge_subset(&c3, 0)).unwrap();
        assert!((lw - 4.0f64.ln()).abs() < 1e-12);

        let k2 = Graph::path(2);
        let inter = WeightModel::Interlace { x: 2.0, y: 3.0 };
        let lw = inter.log_weight(&k2, &vertex_subset(&k2, 0b11)).unwrap();
        assert!(lw.abs() < 1e-12);
    }

    #[test]
    fn ratio_anchors() {
        let k2 = Graph::path(2);
        let rc = WeightModel::Rc { q: 2.0, mu: 1.0 };
        let r = rc.log_weight_ratio(&k2, &edge_subset(&k2, 0), 0).unwrap();
        assert!((r + 2.0f64.ln()).abs() < 1e-12);

        let mt = WeightModel::MultiTutte {
            q: 1.0,
            v: vec![3.0],
        };
        let r = mt.log_weight_ratio(&k2, &edge_subset(&k2, 0), 0).unwrap();
        assert!((r - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ratio_is_antisymmetric_under_flip() {
        let g = Graph::complete(4);
        let models = [
            WeightModel::Rc { q: 2.0, mu: 0.5 },
            WeightModel::Tutte { x: 1.5, y: 4.0 },
            WeightModel::R2 { q: 1.4, mu: 0.7 },
        ];
        for model in &models {
            for mask in 0..1u64 << g.m() {
                let s = edge_subset(&g, mask);
                for e in 0..g.m() {
                    let fwd = model.log_weight_ratio(&g, &s, e).unwrap();
                    let back = model.log_weight_ratio(&g, &s.toggled(e), e).unwrap();
                    assert!((fwd + back).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn partition_anchor_rc_c3() {
        let c3 = Graph::cycle(3);
        let oracle_value = oracle::rc_partition(&c3, 2.0, 1.0);
        assert_eq!(oracle_value, 28.0);
        let rc = WeightModel::Rc { q: 2.0, mu: 1.0 };
        let logz = rc.exact_partition_log(&c3).unwrap();
        assert!((logz - 28.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn partition_anchor_r2_k2() {
        let k2 = Graph::path(2);
        let r2 = WeightModel::R2 { q: 2.0, mu: 1.0 };
        let logz = r2.exact_partition_log(&k2).unwrap();
        assert!((logz - 5.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn partition_anchor_interlace_k2() {
        // subsets of V(K2): {}, {0}, {1} weigh (y-1)^2 = 4 each; {0,1} has
        // rank2 = 2 so weighs (x-1)^2 = 1; total 13
        let k2 = Graph::path(2);
        let inter = WeightModel::Interlace { x: 2.0, y: 3.0 };
        let logz = inter.exact_partition_log(&k2).unwrap();
        assert!((logz - 13.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn partition_anchor_tutte_c3() {
        let c3 = Graph::cycle(3);
        let tutte = WeightModel::Tutte { x: 3.0, y: 2.0 };
        let logt = tutte.exact_partition_log(&c3).unwrap();
        assert!((logt - 14.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rc_tutte_transformation_on_small_graphs() {
        for g in [Graph::cycle(3), Graph::path(4), Graph::complete(4)] {
            for (q, mu) in [(2.0, 1.0), (0.5, 3.0), (3.0, 0.7)] {
                let rc = WeightModel::Rc { q, mu };
                let tutte = WeightModel::Tutte {
                    x: 1.0 + q / mu,
                    y: 1.0 + mu,
                };
                let full = edge_subset(&g, (1u64 << g.m()) - 1);
                let kappa = components_count(&g, &full) as f64;
                let rank = incidence_rank(&g, &full) as f64;
                let lhs = rc.exact_partition_log(&g).unwrap();
                let rhs =
                    kappa * q.ln() + rank * mu.ln() + tutte.exact_partition_log(&g).unwrap();
                assert!((lhs - rhs).abs() < 1e-9, "lhs {lhs} rhs {rhs}");
            }
        }
    }

    #[test]
    fn multi_tutte_with_constant_v_matches_rc() {
        let g = Graph::path(4);
        let mu = 1.7;
        let rc = WeightModel::Rc { q: 2.5, mu };
        let mt = WeightModel::MultiTutte {
            q: 2.5,
            v: vec![mu; g.m()],
        };
        for mask in 0..1u64 << g.m() {
            let s = edge_subset(&g, mask);
            let a = rc.log_weight(&g, &s).unwrap();
            let b = mt.log_weight(&g, &s).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn upoly_with_unit_x_reduces_to_rank_term() {
        let g = Graph::cycle(4);
        let y = 2.5;
        let up = WeightModel::UPoly {
            y,
            x: vec![1.0; g.n()],
        };
        for mask in 0..1u64 << g.m() {
            let s = edge_subset(&g, mask);
            let expected =
                (s.count() as f64 - incidence_rank(&g, &s) as f64) * (y - 1.0).ln();
            assert_eq!(up.log_weight(&g, &s).unwrap(), expected);
        }
    }

    #[test]
    fn empty_subset_weight_is_finite_for_every_family() {
        let g = Graph::path(3);
        let models = [
            WeightModel::Rc { q: 0.3, mu: 9.0 },
            WeightModel::Tutte { x: 1.01, y: 5.0 },
            WeightModel::R2 { q: 4.0, mu: 0.1 },
            WeightModel::MultiTutte {
                q: 1.0,
                v: vec![0.2, 5.0],
            },
            WeightModel::UPoly {
                y: 1.5,
                x: vec![2.0, 0.5, 1.0],
            },
        ];
        for model in &models {
            let lw = model.log_weight(&g, &edge_subset(&g, 0)).unwrap();
            assert!(lw.is_finite());
        }
        let inter = WeightModel::Interlace { x: 1.2, y: 1.1 };
        assert!(inter
            .log_weight(&g, &vertex_subset(&g, 0))
            .unwrap()
            .is_finite());
    }

    #[test]
    fn domain_violations_are_rejected() {
        let g = Graph::path(2);
        let bad = [
            WeightModel::Rc { q: 0.0, mu: 1.0 },
            WeightModel::Rc { q: 2.0, mu: -1.0 },
            WeightModel::Tutte { x: 1.0, y: 2.0 },
            WeightModel::Interlace { x: 2.0, y: 1.0 },
            WeightModel::MultiTutte {
                q: 1.0,
                v: vec![0.0],
            },
            WeightModel::UPoly {
                y: 2.0,
                x: vec![1.0, -2.0],
            },
        ];
        for model in &bad {
            assert!(matches!(
                model.validate_for(&g),
                Err(ModelError::Param(_))
            ));
        }
    }

    #[test]
    fn vector_length_mismatches_are_errors() {
        let g = Graph::path(3);
        let mt = WeightModel::MultiTutte {
            q: 1.0,
            v: vec![1.0],
        };
        assert!(matches!(
            mt.validate_for(&g),
            Err(ModelError::VectorLength { expected: 2, .. })
        ));
        let up = WeightModel::UPoly {
            y: 2.0,
            x: vec![1.0, 1.0],
        };
        assert!(matches!(
            up.validate_for(&g),
            Err(ModelError::VectorLength { expected: 3, .. })
        ));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let g = Graph::path(2);
        let rc = WeightModel::Rc { q: 2.0, mu: 1.0 };
        assert!(matches!(
            rc.log_weight(&g, &vertex_subset(&g, 0)),
            Err(ModelError::KindMismatch { .. })
        ));
    }

    #[test]
    fn partition_cap_is_enforced() {
        let g = Graph::path(26);
        let rc = WeightModel::Rc { q: 2.0, mu: 1.0 };
        assert!(matches!(
            rc.exact_partition_log(&g),
            Err(ModelError::StateSpaceExceeded { bits: 25, .. })
        ));
    }

    #[test]
    fn serde_family_tags() {
        let rc: WeightModel = serde_json::from_str(r#"{"family":"rc","q":2.0,"mu":1.0}"#).unwrap();
        assert_eq!(rc, WeightModel::Rc { q: 2.0, mu: 1.0 });
        let mt: WeightModel =
            serde_json::from_str(r#"{"family":"multi_tutte","q":1.5,"v":[1.0,2.0]}"#).unwrap();
        assert_eq!(
            mt,
            WeightModel::MultiTutte {
                q: 1.5,
                v: vec![1.0, 2.0]
            }
        );
        let up: WeightModel =
            serde_json::from_str(r#"{"family":"upoly","y":2.0,"x":[1.0]}"#).unwrap();
        assert_eq!(
            up,
            WeightModel::UPoly {
                y: 2.0,
                x: vec![1.0]
            }
        );
        let round = serde_json::to_string(&WeightModel::Interlace { x: 2.0, y: 3.0 }).unwrap();
        assert!(round.contains(r#""family":"interlace""#));
    }
}
