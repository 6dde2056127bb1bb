//! Curve-pair diagrams on a genus-g surface, as combinatorial maps.
//!
//! A diagram carries g cut curves (v) and a system of w curves meeting them
//! transversely. Curves of the same family never meet, every curve passes
//! through at least one crossing, and the surface is reconstructed from the
//! rotation system, so intersection counts, faces, and genus are exact
//! combinatorial quantities.

mod canonical;
mod json;
pub(crate) mod map;
mod moves;
mod slide;

pub use canonical::{diagram_signature, diagrams_isomorphic};
pub use json::{diagram_from_json, diagram_to_json};
pub use moves::{
    destabilize, dual_cell_counts, find_destabilizable_pairs, good_to_great, stabilize, CellCounts,
};
pub use slide::{enumerate_anchors, handle_slide, Side, SlideAnchor, SlideSpec};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::ValidityReport;

#[derive(Debug, Error)]
pub enum DiagError {
    #[error("structural failure: {0}")]
    Structure(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A transverse intersection of one v-curve and one w-curve. The sign fixes
/// which rotation variant the crossing carries: +1 for counterclockwise port
/// order (v-out, w-out, v-in, w-in), -1 for (v-out, w-in, v-in, w-out).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub id: u64,
    pub sign: i8,
    pub v: usize,
    pub w: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "json::DiagramDoc", into = "json::DiagramDoc")]
pub struct HeegaardDiagram {
    genus: usize,
    crossings: Vec<Crossing>,
    v_cycles: Vec<Vec<u64>>,
    w_cycles: Vec<Vec<u64>>,
}

/// Nonnegative counts A[i][j] = |v_i meet w_j|.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl IntersectionMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }

    pub fn is_square(&self) -> bool {
        self.entries.iter().all(|r| r.len() == self.rows())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.entries.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, &x)| x == if i == j { 1 } else { 0 })
            })
    }

    /// The defining conditions tested verbatim under the ordering `witness`:
    /// ones on the diagonal and empty intersections below it.
    pub fn is_unit_upper_triangular_under(&self, witness: &[usize]) -> bool {
        let n = self.rows();
        if !self.is_square() || witness.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in witness {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
        for i in 0..n {
            if self.entries[witness[i]][witness[i]] != 1 {
                return false;
            }
            for j in 0..i {
                if self.entries[witness[i]][witness[j]] != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// great: the matrix is the identity as given. good: some simultaneous
/// reordering of the pairs makes it unit upper-triangular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum SystemClass {
    #[serde(rename = "great")]
    Great,
    #[serde(rename = "good")]
    Good { witness: Vec<usize> },
    #[serde(rename = "neither")]
    Neither,
}

/// Validity report plus the reconstruction summary.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub report: ValidityReport,
    pub reconstructed_genus: Option<usize>,
    pub face_count: Option<usize>,
    pub filling: Option<bool>,
    pub cut_planar: Option<bool>,
}

impl HeegaardDiagram {
    /// Checked constructor; crossings are sorted by id.
    pub fn new(
        genus: usize,
        mut crossings: Vec<Crossing>,
        v_cycles: Vec<Vec<u64>>,
        w_cycles: Vec<Vec<u64>>,
    ) -> Result<HeegaardDiagram, DiagError> {
        crossings.sort_by_key(|c| c.id);
        let d = HeegaardDiagram {
            genus,
            crossings,
            v_cycles,
            w_cycles,
        };
        map::build_map(&d)?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(
        genus: usize,
        mut crossings: Vec<Crossing>,
        v_cycles: Vec<Vec<u64>>,
        w_cycles: Vec<Vec<u64>>,
    ) -> HeegaardDiagram {
        crossings.sort_by_key(|c| c.id);
        HeegaardDiagram {
            genus,
            crossings,
            v_cycles,
            w_cycles,
        }
    }

    /// The standard genus-g diagram: one crossing between each paired
    /// v- and w-curve and no others. The connect sum of g one-crossing tori.
    pub fn standard_s3(genus: usize) -> HeegaardDiagram {
        let crossings = (0..genus as u64)
            .map(|i| Crossing {
                id: i,
                sign: 1,
                v: i as usize,
                w: i as usize,
            })
            .collect();
        let cycles: Vec<Vec<u64>> = (0..genus as u64).map(|i| vec![i]).collect();
        HeegaardDiagram {
            genus,
            crossings,
            v_cycles: cycles.clone(),
            w_cycles: cycles,
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn v_cycles(&self) -> &[Vec<u64>] {
        &self.v_cycles
    }

    pub fn w_cycles(&self) -> &[Vec<u64>] {
        &self.w_cycles
    }

    pub fn w_count(&self) -> usize {
        self.w_cycles.len()
    }

    pub fn crossing(&self, id: u64) -> Option<&Crossing> {
        self.crossings
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|i| &self.crossings[i])
    }

    pub fn next_free_id(&self) -> u64 {
        self.crossings.last().map_or(0, |c| c.id + 1)
    }

    /// Full validity report with the reconstruction summary: genus, face
    /// count, filling status, cut-system planarity.
    pub fn validate(&self) -> DiagramReport {
        let mut rep = ValidityReport::new();
        let map = match map::build_map(self) {
            Ok(m) => m,
            Err(e) => {
                rep.fail("structure", e.to_string());
                return DiagramReport {
                    report: rep,
                    reconstructed_genus: None,
                    face_count: None,
                    filling: None,
                    cut_planar: None,
                };
            }
        };
        rep.pass("structure");
        rep.record(
            "curve_count",
            self.v_cycles.len() == self.genus,
            format!("{} v-curves for genus {}", self.v_cycles.len(), self.genus),
        );
        let total = map.total_genus();
        rep.record(
            "genus",
            total == self.genus,
            format!("components fill total genus {total}, declared {}", self.genus),
        );
        let filling = map.comp_count <= 1 && total == self.genus && self.crossing_count() > 0;
        let cut_planar = map::cut_along_v_connected(self, &map);
        rep.record("cut_system", cut_planar, "cut along v-curves is disconnected");
        DiagramReport {
            report: rep,
            reconstructed_genus: Some(total),
            face_count: Some(map.face_count()),
            filling: Some(filling),
            cut_planar: Some(cut_planar),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().report.valid()
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let mut entries = vec![vec![0u64; self.w_cycles.len()]; self.v_cycles.len()];
        for c in &self.crossings {
            entries[c.v][c.w] += 1;
        }
        IntersectionMatrix { entries }
    }

    /// Classification of the pair (v, w): great, good with a witness
    /// ordering, or neither. The matrix must be square.
    pub fn classify_system(&self) -> Result<SystemClass, DiagError> {
        let a = self.intersection_matrix();
        classify_matrix(&a)
    }
}

/// Greedy classification: repeatedly peel an index whose row is supported
/// only on its own pair among the remaining indices. If candidates exist at
/// every step any peel order works, so the greedy scan is complete.
pub fn classify_matrix(a: &IntersectionMatrix) -> Result<SystemClass, DiagError> {
    if !a.is_square() {
        return Err(DiagError::Precondition(format!(
            "classification needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.is_identity() {
        return Ok(SystemClass::Great);
    }
    let n = a.rows();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut order_rev = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let pick = remaining.iter().copied().find(|&r| {
            a.entries[r][r] == 1 && remaining.iter().all(|&c| c == r || a.entries[r][c] == 0)
        });
        match pick {
            Some(r) => {
                order_rev.push(r);
                remaining.retain(|&x| x != r);
            }
            None => return Ok(SystemClass::Neither),
        }
    }
    order_rev.reverse();
    debug_assert!(a.is_unit_upper_triangular_under(&order_rev));
    Ok(SystemClass::Good { witness: order_rev })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_diagrams_validate() {
        for g in 0..5 {
            let d = HeegaardDiagram::standard_s3(g);
            let rep = d.validate();
            assert!(rep.report.valid(), "genus {g}: {}", rep.report.render_text());
            assert_eq!(rep.reconstructed_genus, Some(g));
            assert!(d.intersection_matrix().is_identity());
            assert_eq!(d.classify_system().unwrap(), SystemClass::Great);
        }
    }

    #[test]
    fn standard_genus_one_reconstruction() {
        let d = HeegaardDiagram::standard_s3(1);
        let rep = d.validate();
        assert_eq!(rep.face_count, Some(1));
        assert_eq!(rep.reconstructed_genus, Some(1));
        assert_eq!(rep.filling, Some(true));
        assert_eq!(rep.cut_planar, Some(true));
    }

    #[test]
    fn standard_genus_three_is_not_filling() {
        let d = HeegaardDiagram::standard_s3(3);
        let rep = d.validate();
        assert!(rep.report.valid());
        assert_eq!(rep.filling, Some(false));
        assert_eq!(rep.face_count, Some(3));
    }

    #[test]
    fn empty_diagram() {
        let d = HeegaardDiagram::standard_s3(0);
        assert!(d.validate().report.valid());
        assert_eq!(d.intersection_matrix().rows(), 0);
        assert_eq!(d.classify_system().unwrap(), SystemClass::Great);
    }

    #[test]
    fn crossing_in_two_v_cycles_is_invalid() {
        let d = HeegaardDiagram::from_parts_unchecked(
            2,
            vec![
                Crossing {
                    id: 0,
                    sign: 1,
                    v: 0,
                    w: 0,
                },
                Crossing {
                    id: 1,
                    sign: 1,
                    v: 1,
                    w: 1,
                },
            ],
            vec![vec![0], vec![1, 0]],
            vec![vec![0], vec![1]],
        );
        let rep = d.validate();
        assert!(!rep.report.valid());
        assert!(!rep.report.passed("structure"));
    }

    #[test]
    fn classify_examples() {
        let a = IntersectionMatrix {
            entries: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        };
        assert_eq!(classify_matrix(&a).unwrap(), SystemClass::Great);
        let a = IntersectionMatrix {
            entries: vec![vec![1, 1], vec![0, 1]],
        };
        assert_eq!(
            classify_matrix(&a).unwrap(),
            SystemClass::Good {
                witness: vec![0, 1]
            }
        );
        let a = IntersectionMatrix {
            entries: vec![vec![1, 1], vec![1, 1]],
        };
        assert_eq!(classify_matrix(&a).unwrap(), SystemClass::Neither);
        let a = IntersectionMatrix {
            entries: vec![vec![1, 0, 0], vec![0, 1, 0]],
        };
        assert!(classify_matrix(&a).is_err());
    }

    /// Brute force over all orderings: the oracle for the greedy scan.
    fn classify_oracle(a: &IntersectionMatrix) -> SystemClass {
        if a.is_identity() {
            return SystemClass::Great;
        }
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<usize>> = None;
        permute(&mut perm, 0, &mut |p| {
            if best.is_none() && a.is_unit_upper_triangular_under(p) {
                best = Some(p.to_vec());
            }
        });
        match best {
            Some(witness) => SystemClass::Good { witness },
            None => SystemClass::Neither,
        }
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn greedy_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.random_range(1..=4usize);
            let entries: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(0..3u8) as u64).collect())
                .collect();
            let a = IntersectionMatrix { entries };
            let greedy = classify_matrix(&a).unwrap();
            let oracle = classify_oracle(&a);
            let tag = |c: &SystemClass| match c {
                SystemClass::Great => 0,
                SystemClass::Good { .. } => 1,
                SystemClass::Neither => 2,
            };
            assert_eq!(tag(&greedy), tag(&oracle), "matrix {:?}", a.entries);
            if let SystemClass::Good { witness } = &greedy {
                assert!(a.is_unit_upper_triangular_under(witness));
            }
        }
    }

    /// Exhaustive half-edge walk with independently rebuilt successor maps.
    fn face_count_oracle(d: &HeegaardDiagram) -> usize {
        use std::collections::{HashMap, HashSet};
        let mut succ_v: HashMap<u64, u64> = HashMap::new();
        let mut pred_v: HashMap<u64, u64> = HashMap::new();
        let mut succ_w: HashMap<u64, u64> = HashMap::new();
        let mut pred_w: HashMap<u64, u64> = HashMap::new();
        for cyc in d.v_cycles() {
            for k in 0..cyc.len() {
                succ_v.insert(cyc[k], cyc[(k + 1) % cyc.len()]);
                pred_v.insert(cyc[(k + 1) % cyc.len()], cyc[k]);
            }
        }
        for cyc in d.w_cycles() {
            for k in 0..cyc.len() {
                succ_w.insert(cyc[k], cyc[(k + 1) % cyc.len()]);
                pred_w.insert(cyc[(k + 1) % cyc.len()], cyc[k]);
            }
        }
        let sign_of = |id: u64| d.crossing(id).unwrap().sign;
        // half-edge (id, port): other end of its arc
        let other_end = |(id, port): (u64, u8)| -> (u64, u8) {
            match port {
                0 => (succ_v[&id], 2),
                1 => (succ_w[&id], 3),
                2 => (pred_v[&id], 0),
                _ => (pred_w[&id], 1),
            }
        };
        let rot = |(id, port): (u64, u8)| -> (u64, u8) {
            let next = if sign_of(id) == 1 {
                (port + 1) % 4
            } else {
                (port + 3) % 4
            };
            (id, next)
        };
        let mut seen: HashSet<(u64, u8)> = HashSet::new();
        let mut count = 0;
        for c in d.crossings() {
            for port in 0..4u8 {
                let start = (c.id, port);
                if seen.contains(&start) {
                    continue;
                }
                count += 1;
                let mut h = start;
                while seen.insert(h) {
                    h = rot(other_end(h));
                }
            }
        }
        count
    }

    #[test]
    fn face_counts_match_half_edge_oracle() {
        for g in 1..4 {
            let d = HeegaardDiagram::standard_s3(g);
            assert_eq!(d.validate().face_count.unwrap(), face_count_oracle(&d));
        }
    }
}
