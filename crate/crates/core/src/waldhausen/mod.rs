//! The reduction engine over configurations carrying two meridian systems.
//!
//! A configuration holds the base pair (v, w) of genus n as a diagram, a
//! second pair (x, y) of m <= n curves tracked through its intersection
//! matrix and witness, the cyclic record of y-crossings along the last
//! v-curve, and the three-dimensional general-position records that the
//! engine treats as axioms: arcs and circles of the v-x disk intersections
//! and the w-y intersection count.
//!
//! Every move verifies its stated postconditions at runtime and records
//! them in the trace; a failed check aborts the run. The ambient-isotopy
//! content (innermost disks, bigons in the complementary ball) enters only
//! through move preconditions and axiom check entries, never as geometry.

mod moves;

pub use moves::{
    case1_swap, case2_enlarge, normalize, reduce_y_meets_vn, remove_circles, resolve_arc,
    run_waldhausen, verify_run, wald_pipeline, DestabilizationInstruction, StabilizationWitness,
    Verdict,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{HeegaardDiagram, IntersectionMatrix, SystemClass};

#[derive(Debug, Error)]
pub enum WaldError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("runtime check failed: {0}")]
    CheckFailed(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("diagram error: {0}")]
    Diagram(#[from] crate::diagram::DiagError),
}

/// Where the y-against-last-v data for lower levels comes from: an explicit
/// per-level stack (front = next level) or deterministic draws from a seed.
/// Either way the data stands for fresh general position after each cut.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LevelSource {
    #[serde(rename = "explicit")]
    Explicit(Vec<Vec<usize>>),
    #[serde(rename = "seeded")]
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub(crate) base: HeegaardDiagram,
    pub(crate) n: usize,
    pub(crate) m: usize,
    pub(crate) xy: IntersectionMatrix,
    pub(crate) xy_witness: Vec<usize>,
    pub(crate) vw_witness: Vec<usize>,
    /// cyclic sequence of y-indices along the last v-curve
    pub(crate) y_vn: Vec<usize>,
    /// v-x intersection arcs as (v disk, x disk)
    pub(crate) vx_arcs: Vec<(usize, usize)>,
    /// v-x intersection circles as (v disk, x disk)
    pub(crate) circles: Vec<(usize, usize)>,
    pub(crate) wy_count: usize,
    pub(crate) levels: LevelSource,
}

impl Configuration {
    pub fn genus(&self) -> usize {
        self.n
    }

    pub fn second_system_size(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &HeegaardDiagram {
        &self.base
    }

    pub fn xy_matrix(&self) -> &IntersectionMatrix {
        &self.xy
    }

    pub fn y_vn_sequence(&self) -> &[usize] {
        &self.y_vn
    }

    pub fn arc_count(&self) -> usize {
        self.vx_arcs.len()
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn wy_count(&self) -> usize {
        self.wy_count
    }

    pub fn y_meets_vn(&self) -> usize {
        self.y_vn.len()
    }

    /// All general-position debts paid: no v-x arcs or circles and no w-y
    /// intersections.
    pub fn is_normalized(&self) -> bool {
        self.vx_arcs.is_empty() && self.circles.is_empty() && self.wy_count == 0
    }

    /// Structural invariants checked on entry to every move.
    pub fn check_invariants(&self) -> Result<(), WaldError> {
        if self.m > self.n {
            return Err(WaldError::Invalid(format!(
                "second system larger than the base: m = {} > n = {}",
                self.m, self.n
            )));
        }
        if self.base.genus() != self.n {
            return Err(WaldError::Invalid("base genus disagrees with n".to_string()));
        }
        if !self.base.validate().report.valid() {
            return Err(WaldError::Invalid("base diagram fails validation".to_string()));
        }
        if self.base.classify_system()? != SystemClass::Great {
            return Err(WaldError::Invalid("base pair is not great".to_string()));
        }
        if self.xy.rows() != self.m || !self.xy.is_square() {
            return Err(WaldError::Invalid("x-y matrix has wrong shape".to_string()));
        }
        if !self.xy.is_unit_upper_triangular_under(&self.xy_witness) {
            return Err(WaldError::Invalid(
                "x is not good with respect to y under the stored witness".to_string(),
            ));
        }
        if self.vw_witness.len() != self.n {
            return Err(WaldError::Invalid("v-w witness has wrong length".to_string()));
        }
        for &j in &self.y_vn {
            if j >= self.m {
                return Err(WaldError::Invalid(format!("y index {j} out of range")));
            }
        }
        for &(i, j) in self.vx_arcs.iter().chain(&self.circles) {
            if i >= self.n || j >= self.m {
                return Err(WaldError::Invalid(format!(
                    "intersection record ({i},{j}) out of range"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    pub fn from_json(text: &str) -> Result<Configuration, WaldError> {
        let c: Configuration =
            serde_json::from_str(text).map_err(|e| WaldError::Invalid(e.to_string()))?;
        c.check_invariants()?;
        Ok(c)
    }
}

/// Builds configurations by replaying the standard constructions, so the
/// stated assumptions hold by construction rather than by trusting input.
#[derive(Clone, Debug)]
pub struct ConfigBuilder {
    n: usize,
    m: usize,
    seed: u64,
    arcs: Vec<(usize, usize)>,
    circles: Vec<(usize, usize)>,
    random_arcs: usize,
    random_circles: usize,
    y_sequence: Option<Vec<usize>>,
    levels: Option<LevelSource>,
}

impl ConfigBuilder {
    pub fn new(n: usize, m: usize) -> ConfigBuilder {
        ConfigBuilder {
            n,
            m,
            seed: 1,
            arcs: Vec::new(),
            circles: Vec::new(),
            random_arcs: 0,
            random_circles: 0,
            y_sequence: None,
            levels: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn arcs(mut self, arcs: Vec<(usize, usize)>) -> Self {
        self.arcs = arcs;
        self
    }

    pub fn circles(mut self, circles: Vec<(usize, usize)>) -> Self {
        self.circles = circles;
        self
    }

    pub fn random_arcs(mut self, k: usize) -> Self {
        self.random_arcs = k;
        self
    }

    pub fn random_circles(mut self, k: usize) -> Self {
        self.random_circles = k;
        self
    }

    /// Explicit cyclic y-index sequence along the last v-curve.
    pub fn y_sequence(mut self, seq: Vec<usize>) -> Self {
        self.y_sequence = Some(seq);
        self
    }

    /// Explicit sequences for the levels entered after each cut, front
    /// first, each over the then-current y indices.
    pub fn level_sequences(mut self, levels: Vec<Vec<usize>>) -> Self {
        self.levels = Some(LevelSource::Explicit(levels));
        self
    }

    pub fn build(self) -> Result<Configuration, WaldError> {
        use rand::{Rng, SeedableRng};
        if self.m > self.n {
            return Err(WaldError::Invalid(format!(
                "m = {} exceeds n = {}",
                self.m, self.n
            )));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        let mut arcs = self.arcs;
        let mut circles = self.circles;
        if (self.random_arcs > 0 || self.random_circles > 0) && self.m == 0 {
            return Err(WaldError::Invalid(
                "intersection records need a nonempty second system".to_string(),
            ));
        }
        for _ in 0..self.random_arcs {
            arcs.push((rng.random_range(0..self.n), rng.random_range(0..self.m)));
        }
        for _ in 0..self.random_circles {
            circles.push((rng.random_range(0..self.n), rng.random_range(0..self.m)));
        }
        arcs.sort_unstable();
        circles.sort_unstable();
        let y_vn = match self.y_sequence {
            Some(seq) => seq,
            None => draw_block_sequence(&mut rng, self.m),
        };
        let config = Configuration {
            base: HeegaardDiagram::standard_s3(self.n),
            n: self.n,
            m: self.m,
            xy: identity_matrix(self.m),
            xy_witness: (0..self.m).collect(),
            vw_witness: (0..self.n).collect(),
            y_vn,
            vx_arcs: arcs,
            circles,
            wy_count: 0,
            levels: self.levels.unwrap_or(LevelSource::Seeded(self.seed)),
        };
        config.check_invariants()?;
        Ok(config)
    }
}

pub(crate) fn identity_matrix(m: usize) -> IntersectionMatrix {
    IntersectionMatrix {
        entries: (0..m)
            .map(|i| (0..m).map(|j| u64::from(i == j)).collect())
            .collect(),
    }
}

/// Block-structured cyclic sequence: each y index contributes a contiguous
/// run of 0..=2 crossings, so a doubly-met disk always has an adjacent pair.
pub(crate) fn draw_block_sequence(rng: &mut impl rand::Rng, m: usize) -> Vec<usize> {
    let mut seq = Vec::new();
    for j in 0..m {
        let c = rng.random_range(0..=2usize);
        seq.extend(std::iter::repeat(j).take(c));
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_produces_valid_configurations() {
        let c = ConfigBuilder::new(3, 2)
            .seed(5)
            .random_arcs(2)
            .random_circles(1)
            .build()
            .unwrap();
        assert_eq!(c.genus(), 3);
        assert_eq!(c.second_system_size(), 2);
        assert_eq!(c.arc_count(), 2);
        assert_eq!(c.circle_count(), 1);
        assert!(!c.is_normalized());
        c.check_invariants().unwrap();
    }

    #[test]
    fn builder_rejects_m_above_n() {
        assert!(ConfigBuilder::new(1, 2).build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = ConfigBuilder::new(2, 1)
            .seed(9)
            .y_sequence(vec![0, 0])
            .build()
            .unwrap();
        let text = c.to_json();
        let back = Configuration::from_json(&text).unwrap();
        assert_eq!(back, c);
    }
}
