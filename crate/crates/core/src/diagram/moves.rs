//! Diagram moves above the slide layer: stabilization, destabilization,
//! the good-to-great normalization loop, and dual cell counts.

use serde_json::json;

use super::map::build_map;
use super::slide::{handle_slide, SlideAnchor, SlideSpec};
use super::{Crossing, DiagError, HeegaardDiagram};
use crate::trace::{check, Trace};

/// Adds a fresh one-crossing handle pair: genus rises by one, the matrix
/// extends block-diagonally by [1]. The new component is connect-summed
/// into the surface at the lowest-index face by the tube convention.
pub fn stabilize(d: &HeegaardDiagram) -> HeegaardDiagram {
    let id = d.next_free_id();
    let mut crossings = d.crossings().to_vec();
    crossings.push(Crossing {
        id,
        sign: 1,
        v: d.genus(),
        w: d.w_count(),
    });
    let mut v_cycles = d.v_cycles().to_vec();
    let mut w_cycles = d.w_cycles().to_vec();
    v_cycles.push(vec![id]);
    w_cycles.push(vec![id]);
    HeegaardDiagram::from_parts_unchecked(d.genus() + 1, crossings, v_cycles, w_cycles)
}

/// Indices i where v_i meets w_i exactly once and v_i meets nothing else.
/// Extra crossings on w_i ride away with the removed curve, so only the
/// v-side must be isolated.
pub fn find_destabilizable_pairs(d: &HeegaardDiagram) -> Vec<usize> {
    let n = d.genus().min(d.w_count());
    (0..n)
        .filter(|&i| {
            let cyc = &d.v_cycles()[i];
            cyc.len() == 1 && d.crossing(cyc[0]).map_or(false, |c| c.w == i)
        })
        .collect()
}

/// Removes the pair (v_i, w_i) with every crossing on either curve, and
/// reindexes the remaining curves. Requires i destabilizable.
pub fn destabilize(d: &HeegaardDiagram, i: usize) -> Result<HeegaardDiagram, DiagError> {
    if !find_destabilizable_pairs(d).contains(&i) {
        return Err(DiagError::Precondition(format!(
            "pair {i} is not destabilizable; normalize by slides first"
        )));
    }
    let doomed: Vec<u64> = d
        .crossings()
        .iter()
        .filter(|c| c.v == i || c.w == i)
        .map(|c| c.id)
        .collect();
    let crossings: Vec<Crossing> = d
        .crossings()
        .iter()
        .filter(|c| !doomed.contains(&c.id))
        .map(|c| Crossing {
            id: c.id,
            sign: c.sign,
            v: c.v - usize::from(c.v > i),
            w: c.w - usize::from(c.w > i),
        })
        .collect();
    let strip = |cycles: &[Vec<u64>]| -> Result<Vec<Vec<u64>>, DiagError> {
        let mut out = Vec::new();
        for (ci, cyc) in cycles.iter().enumerate() {
            if ci == i {
                continue;
            }
            let cyc: Vec<u64> = cyc.iter().copied().filter(|id| !doomed.contains(id)).collect();
            if cyc.is_empty() {
                return Err(DiagError::Precondition(format!(
                    "destabilizing pair {i} would empty curve {ci}; normalize by slides first"
                )));
            }
            out.push(cyc);
        }
        Ok(out)
    };
    let v_cycles = strip(d.v_cycles())?;
    let w_cycles = strip(d.w_cycles())?;
    let out = HeegaardDiagram::from_parts_unchecked(d.genus() - 1, crossings, v_cycles, w_cycles);
    let map = build_map(&out)?;
    if map.total_genus() != out.genus() {
        return Err(DiagError::Invalid(format!(
            "destabilization produced genus {} surface for declared {}",
            map.total_genus(),
            out.genus()
        )));
    }
    Ok(out)
}

/// The normalization loop for a good pair: repeatedly find the first index
/// in witness order whose v-curve carries more than one crossing, take the
/// arc from its paired crossing to the next crossing along that v-curve,
/// and slide the neighbor's w-curve over the paired one. Each slide cancels
/// a bigon, so the total crossing count strictly decreases until the matrix
/// is the identity.
pub fn good_to_great(
    d: &HeegaardDiagram,
    witness: &[usize],
) -> Result<(HeegaardDiagram, Trace), DiagError> {
    let a = d.intersection_matrix();
    if !a.is_unit_upper_triangular_under(witness) {
        return Err(DiagError::Precondition(
            "diagram is not good with the given witness".to_string(),
        ));
    }
    let mut cur = d.clone();
    let mut trace = Trace::new();
    loop {
        let a = cur.intersection_matrix();
        if a.is_identity() {
            trace.verdict = Some("great".to_string());
            return Ok((cur, trace));
        }
        // first witness position whose v-curve meets w more than once
        let t = witness
            .iter()
            .position(|&vi| cur.v_cycles()[vi].len() > 1)
            .ok_or_else(|| {
                DiagError::Invalid("no multi-crossing curve but matrix not identity".to_string())
            })?;
        let vk = witness[t];
        let cyc = &cur.v_cycles()[vk];
        // the paired crossing is the single point of v meet w_k
        let pos = cyc
            .iter()
            .position(|&id| cur.crossing(id).unwrap().w == vk)
            .ok_or_else(|| DiagError::Invalid("paired crossing missing".to_string()))?;
        let neighbor = cyc[(pos + 1) % cyc.len()];
        let wl = cur.crossing(neighbor).unwrap().w;
        if wl == vk {
            return Err(DiagError::Invalid(
                "adjacent crossing lies on the paired curve".to_string(),
            ));
        }
        let before = cur.crossing_count() as i64;
        let next = handle_slide(
            &cur,
            &SlideSpec {
                moving: wl,
                over: vk,
                anchor: SlideAnchor::AlongV { v: vk, pos },
            },
        )?;
        let after = next.crossing_count() as i64;
        let still_good = next
            .intersection_matrix()
            .is_unit_upper_triangular_under(witness);
        let decreased = after < before;
        trace.push(
            json!({"op": "slide", "moving": wl, "over": vk,
                   "anchor": {"type": "along_v", "v": vk, "pos": pos}}),
            vec![before],
            vec![after],
            vec![
                check("crossings_decreased", decreased),
                check("still_good", still_good),
            ],
        );
        if !decreased {
            return Err(DiagError::Invalid(
                "slide failed to decrease the crossing count".to_string(),
            ));
        }
        if !still_good {
            return Err(DiagError::Invalid(
                "slide destroyed goodness".to_string(),
            ));
        }
        cur = next;
    }
}

/// Cell counts of the dual pseudo-triangulation of a filling diagram:
/// a tetrahedron per crossing, a face per arc, an edge per complementary
/// region plus one per curve, and exactly two vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub tetrahedra: usize,
}

impl CellCounts {
    pub fn alternating_sum(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 - self.tetrahedra as i64
    }
}

pub fn dual_cell_counts(d: &HeegaardDiagram) -> Result<CellCounts, DiagError> {
    let rep = d.validate();
    if !rep.report.valid() {
        return Err(DiagError::Invalid("diagram fails validation".to_string()));
    }
    if rep.filling != Some(true) {
        return Err(DiagError::Precondition(
            "dual cell counts need a filling diagram (every region a disk)".to_string(),
        ));
    }
    let n = d.crossing_count();
    let g = d.genus();
    let faces_of_curves = rep.face_count.unwrap();
    // Euler bookkeeping on the surface: regions + 2g = crossings + 2
    if faces_of_curves + 2 * g != n + 2 {
        return Err(DiagError::Invalid(format!(
            "region count {faces_of_curves} inconsistent with {n} crossings at genus {g}"
        )));
    }
    Ok(CellCounts {
        vertices: 2,
        edges: n + 2,
        faces: 2 * n,
        tetrahedra: n,
    })
}
