//! Exhaustive verification on small state spaces: cut multiplicativity of
//! the weight families, canonical paths and their congestion, the
//! path weight-ratio bound, exact transition matrices, and exact mixing
//! times against the Sinclair congestion bound.

use crate::bits::{Subset, SubsetKind};
use crate::caps;
use crate::graph::Graph;
use crate::model::{
    edge_piece_log_weight, vertex_piece_log_weight, EvalCtx, LogSumExp, ModelError, WeightModel,
};
use crate::width::Ordering;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Log-domain slack absorbing floating-point noise in bound checks.
pub const LOG_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("state space 2^{bits} exceeds cap 2^{cap}")]
    StateSpaceExceeded { bits: usize, cap: usize },
    #[error("vertex count {n} exceeds separation sweep cap {cap}")]
    VertexCapExceeded { n: usize, cap: usize },
    #[error("expected {expected} kind, got {got}")]
    KindMismatch { expected: SubsetKind, got: SubsetKind },
    #[error("ground set sizes disagree: {a} vs {b}")]
    GroundMismatch { a: usize, b: usize },
    #[error("distribution sums to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("distributions have different support sizes: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The path that flips the symmetric difference of two states in ordering
/// position. `flips[j]` is the element toggled between `states[j]` and
/// `states[j + 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPath {
    pub states: Vec<Subset>,
    pub flips: Vec<usize>,
}

pub fn canonical_path(
    ordering: &Ordering,
    init: &Subset,
    fin: &Subset,
) -> Result<CanonicalPath, VerifyError> {
    if init.kind() != ordering.kind() {
        return Err(VerifyError::KindMismatch {
            expected: ordering.kind(),
            got: init.kind(),
        });
    }
    if fin.kind() != ordering.kind() {
        return Err(VerifyError::KindMismatch {
            expected: ordering.kind(),
            got: fin.kind(),
        });
    }
    if init.len() != ordering.perm().len() || fin.len() != ordering.perm().len() {
        return Err(VerifyError::GroundMismatch {
            a: init.len(),
            b: ordering.perm().len(),
        });
    }
    let diff = init.symmetric_difference(fin);
    let flips: Vec<usize> = ordering
        .perm()
        .iter()
        .copied()
        .filter(|&e| diff.contains(e))
        .collect();
    let mut states = Vec::with_capacity(flips.len() + 1);
    states.push(init.clone());
    for &e in &flips {
        states.push(states.last().unwrap().toggled(e));
    }
    Ok(CanonicalPath { states, flips })
}

/// Log weights for every state of a mask-indexed state space.
fn state_log_weights(
    model: &WeightModel,
    g: &Graph,
    cap: usize,
) -> Result<Vec<f64>, VerifyError> {
    model.validate_for(g)?;
    let bits = model.ground_size(g);
    if bits > cap {
        return Err(VerifyError::StateSpaceExceeded { bits, cap });
    }
    let ctx = EvalCtx::new(model, g);
    Ok((0..1u64 << bits).map(|mask| ctx.eval_masked(g, mask)).collect())
}

fn normalized_from_logs(lw: &[f64]) -> Vec<f64> {
    let mut lse = LogSumExp::new();
    for &x in lw {
        lse.add(x);
    }
    let log_z = lse.value();
    lw.iter().map(|&x| (x - log_z).exp()).collect()
}

/// Exact stationary distribution over all states in mask order.
pub fn stationary_distribution(model: &WeightModel, g: &Graph) -> Result<Vec<f64>, VerifyError> {
    let lw = state_log_weights(model, g, caps::DISTRIBUTION_LOG2)?;
    Ok(normalized_from_logs(&lw))
}

/// Half the L1 distance between two normalized distributions.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64, VerifyError> {
    if a.len() != b.len() {
        return Err(VerifyError::LengthMismatch { a: a.len(), b: b.len() });
    }
    for dist in [a, b] {
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(VerifyError::NotNormalized { sum });
        }
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// Dense transition matrix of the single-flip chain, row-major over the
/// mask-ordered state space.
pub struct TransitionMatrix {
    pub states: usize,
    pub ground: usize,
    pub data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn row(&self, h: usize) -> &[f64] {
        &self.data[h * self.states..(h + 1) * self.states]
    }
}

pub fn transition_matrix(model: &WeightModel, g: &Graph) -> Result<TransitionMatrix, VerifyError> {
    let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
    let ground = model.ground_size(g);
    let states = lw.len();
    let mut data = vec![0.0; states * states];
    for h in 0..states {
        let mut stay = 1.0;
        for e in 0..ground {
            let j = h ^ (1 << e);
            let p = 0.5 * (lw[j] - lw[h]).min(0.0).exp() / ground as f64;
            data[h * states + j] = p;
            stay -= p;
        }
        data[h * states + h] = stay;
    }
    Ok(TransitionMatrix { states, ground, data })
}

/// Stochasticity, reversibility and laziness of the exact transition matrix.
#[derive(Clone, Debug, Serialize)]
pub struct BalanceReport {
    pub max_row_sum_error: f64,
    pub max_detailed_balance_error: f64,
    pub min_hold_probability: f64,
    pub pass: bool,
}

pub fn check_balance(model: &WeightModel, g: &Graph) -> Result<BalanceReport, VerifyError> {
    let p = transition_matrix(model, g)?;
    let pi = {
        let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
        normalized_from_logs(&lw)
    };
    let mut max_row = 0.0f64;
    let mut max_db = 0.0f64;
    let mut min_hold = 1.0f64;
    for h in 0..p.states {
        let row = p.row(h);
        max_row = max_row.max((row.iter().sum::<f64>() - 1.0).abs());
        min_hold = min_hold.min(row[h]);
        for e in 0..p.ground {
            let j = h ^ (1 << e);
            let flow = pi[h] * row[j] - pi[j] * p.row(j)[h];
            max_db = max_db.max(flow.abs());
        }
    }
    let pass = max_row <= 1e-12 && max_db <= 1e-12 && min_hold >= 0.5 - 1e-12;
    Ok(BalanceReport {
        max_row_sum_error: max_row,
        max_detailed_balance_error: max_db,
        min_hold_probability: min_hold,
        pass,
    })
}

/// Result of the exact congestion evaluation of the canonical-path family
/// induced by an ordering.
#[derive(Clone, Debug, Serialize)]
pub struct CongestionReport {
    pub rho: f64,
    pub argmax_transition: Option<(String, String)>,
    pub bound: f64,
    pub ordering_width: usize,
    pub pass: bool,
}

/// Exact congestion: for every directed single-flip transition, the
/// normalised traffic of all canonical paths through it; returns the max,
/// its witness, and the `2 k^2 lambda_hat^{4 width}` bound for the ordering.
pub fn congestion(
    model: &WeightModel,
    g: &Graph,
    ordering: &Ordering,
) -> Result<CongestionReport, VerifyError> {
    if ordering.kind() != model.kind() {
        return Err(VerifyError::KindMismatch {
            expected: model.kind(),
            got: ordering.kind(),
        });
    }
    let ground = model.ground_size(g);
    if ordering.perm().len() != ground {
        return Err(VerifyError::GroundMismatch {
            a: ordering.perm().len(),
            b: ground,
        });
    }
    let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
    let pi = normalized_from_logs(&lw);
    let states = lw.len();

    // traffic[h * ground + e]: weighted path load on the transition that
    // leaves h by flipping e
    let mut traffic = vec![0.0f64; states * ground.max(1)];
    for init in 0..states {
        for diff in 1..states {
            let fin = init ^ diff;
            let load = pi[init] * pi[fin] * diff.count_ones() as f64;
            let mut h = init;
            for &e in ordering.perm() {
                if diff >> e & 1 == 1 {
                    traffic[h * ground + e] += load;
                    h ^= 1 << e;
                }
            }
        }
    }

    let mut rho = 0.0f64;
    let mut argmax = None;
    for h in 0..states {
        for e in 0..ground {
            let j = h ^ (1 << e);
            let p = 0.5 * (lw[j] - lw[h]).min(0.0).exp() / ground as f64;
            let load = traffic[h * ground + e] / (pi[h] * p);
            if load > rho {
                rho = load;
                argmax = Some((h, j));
            }
        }
    }

    let width = ordering.width();
    let bound =
        2.0 * (ground as f64) * (ground as f64) * model.lambda_hat().powi(4 * width as i32);
    let kind = model.kind();
    let as_hex = |mask: usize| Subset::from_mask(kind, ground, mask as u64).to_hex();
    Ok(CongestionReport {
        rho,
        argmax_transition: argmax.map(|(h, j)| (as_hex(h), as_hex(j))),
        bound,
        ordering_width: width,
        pass: rho <= bound * (1.0 + 1e-9),
    })
}

/// Max over state pairs (I, F) and states H on their canonical path of
/// w(I) w(F) / (w(H) w(C)) with C the third symmetric difference; the bound
/// this is checked against is lambda_hat^{4 width}.
pub fn path_weight_ratio_max(
    model: &WeightModel,
    g: &Graph,
    ordering: &Ordering,
) -> Result<f64, VerifyError> {
    if ordering.kind() != model.kind() {
        return Err(VerifyError::KindMismatch {
            expected: model.kind(),
            got: ordering.kind(),
        });
    }
    let ground = model.ground_size(g);
    if ordering.perm().len() != ground {
        return Err(VerifyError::GroundMismatch {
            a: ordering.perm().len(),
            b: ground,
        });
    }
    let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
    let states = lw.len();
    let mut max_log = 0.0f64; // the pair I = F always realises ratio 1
    for init in 0..states {
        for diff in 0..states {
            let fin = init ^ diff;
            let pair = lw[init] + lw[fin];
            let mut h = init;
            // C = H xor diff at every point of the path
            max_log = max_log.max(pair - lw[h] - lw[h ^ diff]);
            for &e in ordering.perm() {
                if diff >> e & 1 == 1 {
                    h ^= 1 << e;
                    max_log = max_log.max(pair - lw[h] - lw[h ^ diff]);
                }
            }
        }
    }
    Ok(max_log.exp())
}

/// Worst witness of a multiplicativity sweep.
#[derive(Clone, Debug, Serialize)]
pub struct MultWitness {
    /// The subset split: an edge subset (edge kind) or the induced vertex
    /// set (vertex kind).
    pub subset: String,
    pub v1: String,
    pub k: String,
    pub v2: String,
    pub e1: Option<String>,
    pub e2: Option<String>,
    pub cut_size: usize,
    pub log_ratio: f64,
}

/// Outcome of a multiplicativity sweep over separations.
#[derive(Clone, Debug, Serialize)]
pub struct MultReport {
    pub lambda: f64,
    pub lambda_hat: f64,
    pub checks: u64,
    /// max |log ratio| - |K| ln(lambda_hat); pass means it is within slack
    pub max_excess_log: Option<f64>,
    /// max |log ratio| seen per cut size
    pub max_abs_log_ratio_by_cut: Vec<f64>,
    pub witness: Option<MultWitness>,
    pub pass: bool,
}

/// Sweep every spanning subgraph of `g`, every separation of its vertices,
/// and every appropriate split of its edges, checking that the weight of the
/// two pieces stays within lambda_hat^{|K|} of the whole.
pub fn check_edge_multiplicativity(
    model: &WeightModel,
    g: &Graph,
    lambda: f64,
) -> Result<MultReport, VerifyError> {
    if model.kind() != SubsetKind::Edge {
        return Err(VerifyError::KindMismatch {
            expected: SubsetKind::Edge,
            got: model.kind(),
        });
    }
    model.validate_for(g)?;
    if g.n() > caps::MULT_N {
        return Err(VerifyError::VertexCapExceeded {
            n: g.n(),
            cap: caps::MULT_N,
        });
    }
    if g.m() > caps::MULT_SUBSETS_LOG2 {
        return Err(VerifyError::StateSpaceExceeded {
            bits: g.m(),
            cap: caps::MULT_SUBSETS_LOG2,
        });
    }
    let (n, m) = (g.n(), g.m());
    let all_v: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let full_e: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };

    let whole: Vec<f64> = (0..=full_e)
        .map(|smask| edge_piece_log_weight(model, g, all_v, smask))
        .collect();

    let lambda_hat = lambda.max(1.0 / lambda);
    let ln_hat = lambda_hat.ln();
    let mut tally = MultTally::new(n, ln_hat);

    // ternary vertex assignments: digit 0 -> v1, 1 -> k, 2 -> v2
    let mut assignment = vec![0u8; n];
    loop {
        let (mut v1, mut k, mut v2) = (0u64, 0u64, 0u64);
        for (v, &part) in assignment.iter().enumerate() {
            match part {
                0 => v1 |= 1 << v,
                1 => k |= 1 << v,
                _ => v2 |= 1 << v,
            }
        }
        // classify host edges against this assignment; edges touching v2 go
        // to the second part implicitly (e2 is the complement of e1)
        let (mut crossing, mut touch_v1, mut inside_k) = (0u64, 0u64, 0u64);
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let (a1, a2) = (v1 >> a & 1 == 1, v2 >> a & 1 == 1);
            let (b1, b2) = (v1 >> b & 1 == 1, v2 >> b & 1 == 1);
            if (a1 && b2) || (a2 && b1) {
                crossing |= 1 << e;
            } else if a1 || b1 {
                touch_v1 |= 1 << e;
            } else if !a2 && !b2 {
                inside_k |= 1 << e;
            }
        }
        let cut_size = k.count_ones() as usize;
        let valid_edges = full_e & !crossing;

        // descending submask walk over the subsets with no crossing edge
        let mut smask = valid_edges;
        loop {
            let forced1 = smask & touch_v1;
            let free = smask & inside_k;
            let mut fsub = free;
            loop {
                let e1 = forced1 | fsub;
                let e2 = smask ^ e1;
                let lw1 = edge_piece_log_weight(model, g, v1 | k, e1);
                let lw2 = edge_piece_log_weight(model, g, v2 | k, e2);
                let log_ratio = lw1 + lw2 - whole[smask as usize];
                tally.record(cut_size, log_ratio, || MultWitness {
                    subset: hex_of(smask, m),
                    v1: hex_of(v1, n),
                    k: hex_of(k, n),
                    v2: hex_of(v2, n),
                    e1: Some(hex_of(e1, m)),
                    e2: Some(hex_of(e2, m)),
                    cut_size,
                    log_ratio,
                });
                if fsub == 0 {
                    break;
                }
                fsub = (fsub - 1) & free;
            }
            if smask == 0 {
                break;
            }
            smask = (smask - 1) & valid_edges;
        }

        if !next_ternary(&mut assignment) {
            break;
        }
    }
    Ok(tally.into_report(lambda, lambda_hat))
}

/// Vertex analogue: sweep the base graph and all its induced subgraphs; the
/// split compares the piece on v1 against the piece on v2 together with the
/// cut.
pub fn check_vertex_multiplicativity(
    model: &WeightModel,
    g: &Graph,
    lambda: f64,
) -> Result<MultReport, VerifyError> {
    if model.kind() != SubsetKind::Vertex {
        return Err(VerifyError::KindMismatch {
            expected: SubsetKind::Vertex,
            got: model.kind(),
        });
    }
    model.validate_for(g)?;
    if g.n() > caps::MULT_N {
        return Err(VerifyError::VertexCapExceeded {
            n: g.n(),
            cap: caps::MULT_N,
        });
    }
    let n = g.n();
    let all_v: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let piece: Vec<f64> = (0..=all_v)
        .map(|vmask| vertex_piece_log_weight(model, g, vmask))
        .collect();

    let lambda_hat = lambda.max(1.0 / lambda);
    let mut tally = MultTally::new(n, lambda_hat.ln());

    for tmask in 0..=all_v {
        let members: Vec<usize> = (0..n).filter(|&v| tmask >> v & 1 == 1).collect();
        let mut assignment = vec![0u8; members.len()];
        loop {
            let (mut v1, mut k, mut v2) = (0u64, 0u64, 0u64);
            for (i, &part) in assignment.iter().enumerate() {
                match part {
                    0 => v1 |= 1 << members[i],
                    1 => k |= 1 << members[i],
                    _ => v2 |= 1 << members[i],
                }
            }
            let crossing = g.edges().iter().any(|&(a, b)| {
                (v1 >> a & 1 == 1 && v2 >> b & 1 == 1) || (v1 >> b & 1 == 1 && v2 >> a & 1 == 1)
            });
            if !crossing {
                let cut_size = k.count_ones() as usize;
                let log_ratio =
                    piece[v1 as usize] + piece[(v2 | k) as usize] - piece[tmask as usize];
                tally.record(cut_size, log_ratio, || MultWitness {
                    subset: hex_of(tmask, n),
                    v1: hex_of(v1, n),
                    k: hex_of(k, n),
                    v2: hex_of(v2, n),
                    e1: None,
                    e2: None,
                    cut_size,
                    log_ratio,
                });
            }
            if !next_ternary(&mut assignment) {
                break;
            }
        }
    }
    Ok(tally.into_report(lambda, lambda_hat))
}

fn hex_of(mask: u64, len: usize) -> String {
    crate::bits::Bits::from_mask(len, mask).to_hex()
}

fn next_ternary(digits: &mut [u8]) -> bool {
    for d in digits.iter_mut() {
        if *d < 2 {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

struct MultTally {
    checks: u64,
    ln_hat: f64,
    max_excess: f64,
    by_cut: Vec<f64>,
    witness: Option<MultWitness>,
}

impl MultTally {
    fn new(n: usize, ln_hat: f64) -> Self {
        MultTally {
            checks: 0,
            ln_hat,
            max_excess: f64::NEG_INFINITY,
            by_cut: vec![0.0; n + 1],
            witness: None,
        }
    }

    fn record(&mut self, cut_size: usize, log_ratio: f64, witness: impl FnOnce() -> MultWitness) {
        self.checks += 1;
        let abs = log_ratio.abs();
        if abs > self.by_cut[cut_size] {
            self.by_cut[cut_size] = abs;
        }
        let excess = abs - cut_size as f64 * self.ln_hat;
        if excess > self.max_excess {
            self.max_excess = excess;
            self.witness = Some(witness());
        }
    }

    fn into_report(self, lambda: f64, lambda_hat: f64) -> MultReport {
        let max_excess_log = (self.checks > 0).then_some(self.max_excess);
        let pass = self.checks == 0 || self.max_excess <= LOG_SLACK;
        MultReport {
            lambda,
            lambda_hat,
            checks: self.checks,
            max_excess_log,
            max_abs_log_ratio_by_cut: self.by_cut,
            witness: self.witness,
            pass,
        }
    }
}

/// Exact mixing time and the Sinclair bound derived from a congestion
/// report.
#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub tau: u64,
    pub epsilon: f64,
    pub sinclair_bound: f64,
    pub pi_min: f64,
    pub pass: bool,
}

/// Smallest t at which the worst-start total variation distance to the
/// stationary distribution drops to `epsilon`. Found by powering the
/// transition matrix with doubling, then walking the bracketing interval;
/// valid because worst-start TV never increases with t.
pub fn exact_mixing_time(
    model: &WeightModel,
    g: &Graph,
    epsilon: f64,
    congestion_report: &CongestionReport,
) -> Result<MixingReport, VerifyError> {
    let p = transition_matrix(model, g)?;
    let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
    let pi = normalized_from_logs(&lw);
    let pi_min = pi.iter().copied().fold(f64::INFINITY, f64::min);
    let states = p.states;

    let max_tv = |m: &[f64]| -> f64 {
        (0..states)
            .map(|h| {
                0.5 * m[h * states..(h + 1) * states]
                    .iter()
                    .zip(&pi)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    };

    let sinclair_bound =
        congestion_report.rho * ((1.0 / pi_min).ln() + (1.0 / epsilon).ln());

    // t = 0: point mass at the worst start
    let tau = if 1.0 - pi_min <= epsilon {
        0
    } else {
        // find the first power of two where the chain is mixed
        let mut powers = vec![p.data.clone()];
        while max_tv(powers.last().unwrap()) > epsilon {
            let last = powers.last().unwrap();
            assert!(powers.len() < 64, "doubling runaway");
            powers.push(matmul(states, last, last));
        }
        if powers.len() == 1 {
            1
        } else {
            // d(2^(J-1)) > eps >= d(2^J): walk the remaining bits downward
            let top = powers.len() - 1;
            let mut current = powers[top - 1].clone();
            let mut last_bad = 1u64 << (top - 1);
            for j in (0..top - 1).rev() {
                let cand = matmul(states, &current, &powers[j]);
                if max_tv(&cand) > epsilon {
                    last_bad += 1 << j;
                    current = cand;
                }
            }
            last_bad + 1
        }
    };

    Ok(MixingReport {
        tau,
        epsilon,
        sinclair_bound,
        pi_min,
        pass: (tau as f64) <= sinclair_bound + LOG_SLACK,
    })
}

/// Worst-start total variation distance to stationarity at each step
/// t = 0..=t_max, by explicit stepwise powering.
pub fn tv_decay_curve(
    model: &WeightModel,
    g: &Graph,
    t_max: u64,
) -> Result<Vec<f64>, VerifyError> {
    let p = transition_matrix(model, g)?;
    let lw = state_log_weights(model, g, caps::MATRIX_LOG2)?;
    let pi = normalized_from_logs(&lw);
    let states = p.states;
    let max_tv = |m: &[f64]| -> f64 {
        (0..states)
            .map(|h| {
                0.5 * m[h * states..(h + 1) * states]
                    .iter()
                    .zip(&pi)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    };
    let mut current: Vec<f64> = (0..states * states)
        .map(|i| if i / states == i % states { 1.0 } else { 0.0 })
        .collect();
    let mut curve = Vec::with_capacity(t_max as usize + 1);
    curve.push(max_tv(&current));
    for _ in 0..t_max {
        current = matmul(states, &current, &p.data);
        curve.push(max_tv(&current));
    }
    Ok(curve)
}

/// Row-parallel dense multiply; skips zero entries, which keeps early powers
/// of the sparse transition matrix cheap.
fn matmul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0f64; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            for (o, &bv) in row.iter_mut().zip(brow) {
                *o += aik * bv;
            }
        }
    });
    out
}
