//! Verification of the pigeonhole conditions and Ramsey degrees by brute
//! force over colourings.
//!
//! Every check reduces to the same question: given a list of *selectors*,
//! each a family of groups of positions in `hom(a, c)`, does every colouring
//! admit a selector meeting a colour requirement on its groups? See
//! [`solve`] for the strategies used to answer it.

pub mod checks;
pub mod degree;
pub mod solve;

use serde::{Deserialize, Serialize};

pub use checks::{check_fp_witness, check_p_witness, fiber, find_selector, search_p_witness, FpInstance};
pub use degree::{check_degree_at, check_degree_bound, ramsey_degree, DegreeBoundReport, DegreeResult};

/// Seed used when none is given. The sampled colour of a morphism with key
/// `k` in sample `s` is `combine(combine(seed, s), k) mod r`, see
/// [`crate::encoding::combine`].
pub const DEFAULT_SEED: u64 = 0x5241_4d53_4559_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
    /// Exhaustive when the caps allow it, sampled otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest hom-set materialised for an exhaustive check.
    pub max_hom_size: u64,
    /// Largest number of colourings enumerated, or of search nodes visited.
    pub max_colorings: u64,
    pub sample_count: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Largest number of selectors tried against one sampled colouring.
    pub max_selector_scan: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_hom_size: 1 << 16,
            max_colorings: 1 << 24,
            sample_count: 10_000,
            seed: DEFAULT_SEED,
            mode: Mode::Exhaustive,
            max_selector_scan: 1 << 20,
        }
    }
}

impl SearchBudget {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn sampled(sample_count: u64, seed: u64) -> Self {
        Self {
            sample_count,
            seed,
            mode: Mode::Sampled,
            ..Self::default()
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// No colouring needs a selector (`r = 0` on an empty hom-set).
    Vacuous,
    /// Some selector meets the requirement under every colouring.
    Trivial,
    /// Every colouring visited in mixed-radix order.
    Enumeration,
    /// Depth-first search over the positions some selector looks at, cutting
    /// branches as soon as a selector is known to succeed.
    PrunedSearch,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Counterexample {
    /// Colours indexed by the canonical order of `hom(a, c)`.
    Colors(Vec<u32>),
    /// The sampled colouring with this index.
    Sample { seed: u64, sample: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub strategy: Strategy,
    /// Colourings enumerated, search nodes visited, or samples drawn.
    pub examined: u64,
    /// Set for sampled passes, which are not proofs.
    pub probabilistic: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub(crate) fn pass(strategy: Strategy, examined: u64) -> Self {
        Self {
            outcome: Outcome::Pass,
            strategy,
            examined,
            probabilistic: strategy == Strategy::Sampled,
            counterexample: None,
        }
    }

    pub(crate) fn fail(strategy: Strategy, examined: u64, cx: Counterexample) -> Self {
        Self {
            outcome: Outcome::Fail,
            strategy,
            examined,
            probabilistic: false,
            counterexample: Some(cx),
        }
    }
}
