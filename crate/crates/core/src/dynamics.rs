//! The single bond flip and single site flip chains: seeded simulation,
//! empirical sampling, and exact transition probabilities.
//!
//! # Random number stream
//!
//! The generator is splitmix64 (Steele, Lea, Flood 2014): state advances by
//! the 64-bit golden-ratio constant and the output is finalised with two
//! xor-shift multiplies. Each chain step makes two logical draws, in this
//! order: first the proposal index, then the acceptance uniform. The
//! acceptance uniform is drawn even when the proposal is accepted with
//! certainty, so the stream position after t steps depends only on t and on
//! the index draws, never on the weights. The index draw rejection-samples
//! raw 64-bit values to kill modulo bias; a retry consumes one extra raw
//! value and happens with probability below ground_size / 2^64.

use crate::bits::Subset;
use crate::caps;
use crate::graph::Graph;
use crate::model::{EvalCtx, ModelError, WeightModel};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("chain has an empty ground set")]
    EmptyGroundSet,
    #[error("initial state has {got} indices but the ground set has {expected}")]
    InitialStateLength { expected: usize, got: usize },
    #[error("thinning must be at least 1")]
    ZeroThinning,
    #[error("state space 2^{bits} exceeds cap 2^{cap}")]
    StateSpaceExceeded { bits: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// splitmix64; see the module docs for the stream discipline.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform f64 in [0, 1) from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, bound) by rejection from the raw range.
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "empty range");
        let bound = bound as u64;
        // largest multiple of bound representable in 2^64 draws
        let reject_from = u64::MAX - ((u64::MAX % bound) + 1) % bound;
        loop {
            let r = self.next_u64();
            if r <= reject_from {
                return (r % bound) as usize;
            }
        }
    }
}

/// Everything a reproducible chain run needs. Identical configs produce
/// identical traces.
#[derive(Clone, Debug)]
pub struct ChainConfig<'a> {
    pub model: &'a WeightModel,
    pub graph: &'a Graph,
    pub seed: u64,
    pub initial: Subset,
    pub steps: u64,
    pub burn_in: u64,
    pub thinning: u64,
}

impl<'a> ChainConfig<'a> {
    /// Start at the empty subset with burn_in = steps / 10 and no thinning.
    pub fn with_defaults(
        model: &'a WeightModel,
        graph: &'a Graph,
        seed: u64,
        steps: u64,
    ) -> Self {
        let ground = model.ground_size(graph);
        ChainConfig {
            model,
            graph,
            seed,
            initial: Subset::empty(model.kind(), ground),
            steps,
            burn_in: steps / 10,
            thinning: 1,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        self.model.validate_for(self.graph)?;
        if self.thinning == 0 {
            return Err(DynamicsError::ZeroThinning);
        }
        let ground = self.model.ground_size(self.graph);
        if self.initial.kind() != self.model.kind() {
            return Err(DynamicsError::Model(ModelError::KindMismatch {
                model: self.model.kind(),
                subset: self.initial.kind(),
            }));
        }
        if self.initial.len() != ground {
            return Err(DynamicsError::InitialStateLength {
                expected: ground,
                got: self.initial.len(),
            });
        }
        if self.steps > 0 && ground == 0 {
            return Err(DynamicsError::EmptyGroundSet);
        }
        Ok(())
    }
}

/// Retained samples and summary statistics of a chain run.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub samples: Vec<Subset>,
    pub acceptance_rate: f64,
    pub final_state: Subset,
}

/// One lazy Metropolis flip: propose a uniform index, accept the toggled
/// state with probability min(1, weight ratio) / 2. Returns whether the
/// proposal was accepted. Consumes two logical draws regardless of outcome.
pub fn step(
    model: &WeightModel,
    g: &Graph,
    state: &mut Subset,
    rng: &mut SplitMix64,
) -> Result<bool, DynamicsError> {
    model.validate_for(g)?;
    let ctx = EvalCtx::new(model, g);
    step_with_ctx(&ctx, model, g, state, rng)
}

fn step_with_ctx(
    ctx: &EvalCtx,
    model: &WeightModel,
    g: &Graph,
    state: &mut Subset,
    rng: &mut SplitMix64,
) -> Result<bool, DynamicsError> {
    let ground = model.ground_size(g);
    if ground == 0 {
        return Err(DynamicsError::EmptyGroundSet);
    }
    if state.kind() != model.kind() {
        return Err(DynamicsError::Model(ModelError::KindMismatch {
            model: model.kind(),
            subset: state.kind(),
        }));
    }
    let index = rng.next_index(ground);
    let uniform = rng.next_f64();
    let before = ctx.eval_subset(g, state);
    state.flip(index);
    let after = ctx.eval_subset(g, state);
    // clamp the log ratio at 0 before exponentiating
    let accept = 0.5 * (after - before).min(0.0).exp();
    if uniform < accept {
        Ok(true)
    } else {
        state.flip(index);
        Ok(false)
    }
}

/// Run the chain; a pure function of the config including the seed.
pub fn run(config: &ChainConfig) -> Result<Trace, DynamicsError> {
    config.validate()?;
    let ctx = EvalCtx::new(config.model, config.graph);
    let mut rng = SplitMix64::new(config.seed);
    let mut state = config.initial.clone();
    let retained = config
        .steps
        .saturating_sub(config.burn_in)
        .checked_div(config.thinning)
        .unwrap_or(0);
    let mut samples = Vec::with_capacity(retained as usize);
    let mut accepted = 0u64;
    for t in 1..=config.steps {
        if step_with_ctx(&ctx, config.model, config.graph, &mut state, &mut rng)? {
            accepted += 1;
        }
        if t > config.burn_in && (t - config.burn_in) % config.thinning == 0 {
            samples.push(state.clone());
        }
    }
    let acceptance_rate = if config.steps == 0 {
        0.0
    } else {
        accepted as f64 / config.steps as f64
    };
    Ok(Trace {
        samples,
        acceptance_rate,
        final_state: state,
    })
}

/// Exact single-flip transition probability P(h, h2): positive only when the
/// states differ in exactly one index or are equal.
pub fn transition_probability(
    model: &WeightModel,
    g: &Graph,
    h: &Subset,
    h2: &Subset,
) -> Result<f64, DynamicsError> {
    model.validate_for(g)?;
    if h.kind() != model.kind() || h2.kind() != model.kind() {
        return Err(DynamicsError::Model(ModelError::KindMismatch {
            model: model.kind(),
            subset: if h.kind() != model.kind() {
                h.kind()
            } else {
                h2.kind()
            },
        }));
    }
    let ground = model.ground_size(g);
    let ctx = EvalCtx::new(model, g);
    let diff = h.symmetric_difference(h2);
    match diff.count() {
        0 => {
            let mut stay = 1.0;
            let from = ctx.eval_subset(g, h);
            for i in 0..ground {
                let to = ctx.eval_subset(g, &h.toggled(i));
                stay -= 0.5 * (to - from).min(0.0).exp() / ground as f64;
            }
            Ok(stay)
        }
        1 => {
            let from = ctx.eval_subset(g, h);
            let to = ctx.eval_subset(g, h2);
            Ok(0.5 * (to - from).min(0.0).exp() / ground as f64)
        }
        _ => Ok(0.0),
    }
}

/// Normalised visit frequencies over the retained samples of a run. The
/// state space must stay within the exact-comparison cap.
pub fn empirical_distribution(config: &ChainConfig) -> Result<HashMap<Subset, f64>, DynamicsError> {
    let bits = config.model.ground_size(config.graph);
    if bits > caps::DISTRIBUTION_LOG2 {
        return Err(DynamicsError::StateSpaceExceeded {
            bits,
            cap: caps::DISTRIBUTION_LOG2,
        });
    }
    let trace = run(config)?;
    let total = trace.samples.len() as f64;
    let mut freq = HashMap::new();
    for s in trace.samples {
        *freq.entry(s).or_insert(0.0) += 1.0;
    }
    for f in freq.values_mut() {
        *f /= total;
    }
    Ok(freq)
}
