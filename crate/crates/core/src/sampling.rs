use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::presentation::{Presentation, RelatorSpace};
use crate::relator::Relator;
use crate::rng::{Purpose, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub n: u32,
    pub p: f64,
    pub seed: u64,
    /// One slot per rotation class instead of one per linear word.
    #[serde(default)]
    pub cyclic_slots: bool,
}

impl SampleConfig {
    pub fn new(n: u32, p: f64, seed: u64) -> Self {
        SampleConfig {
            n,
            p,
            seed,
            cyclic_slots: false,
        }
    }

    pub fn validate(&self) -> Result<(), &'static str> {
        if self.n < 1 {
            return Err("n must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err("p must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Samples `Γ(n, p)` from stream `(Relators, 0)` of `cfg.seed`.
pub fn sample_presentation(cfg: &SampleConfig) -> Presentation {
    let mut stream = Stream::new(cfg.seed, Purpose::Relators, 0);
    CoupledSample::draw(cfg.n, cfg.p, cfg.cyclic_slots, &mut stream).at(cfg.p)
}

/// Per-slot uniforms of one trial, kept for every slot with `u < p_max`.
///
/// `at(p)` for `p ≤ p_max` returns exactly the relator set an independent
/// draw at `p` from the same stream would give, so sets are nested in `p`.
#[derive(Clone, Debug)]
pub struct CoupledSample {
    n: u32,
    p_max: f64,
    draws: Vec<(Relator, f64)>,
}

impl CoupledSample {
    pub fn draw(n: u32, p_max: f64, cyclic_slots: bool, stream: &mut Stream) -> Self {
        let space = RelatorSpace::new(n);
        let mut draws = Vec::new();
        if cyclic_slots {
            for r in space.iter().filter(|r| r.canonical_rotation() == *r) {
                let u = stream.uniform();
                if u < p_max {
                    draws.push((r, u));
                }
            }
        } else {
            for r in space.iter() {
                let u = stream.uniform();
                if u < p_max {
                    draws.push((r, u));
                }
            }
        }
        CoupledSample { n, p_max, draws }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn at(&self, p: f64) -> Presentation {
        debug_assert!(p <= self.p_max);
        let rels: Vec<Relator> = self
            .draws
            .iter()
            .filter(|(_, u)| *u < p)
            .map(|(r, _)| *r)
            .collect();
        Presentation::from_sorted_unchecked(self.n, rels)
    }

    /// Included relators sorted by their uniform, with the uniform.
    pub fn by_arrival(&self) -> Vec<(Relator, f64)> {
        let mut v = self.draws.clone();
        v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        v
    }
}
