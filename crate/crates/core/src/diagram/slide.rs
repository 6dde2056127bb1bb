//! Handle slides: replace a w-curve by its band sum with a parallel copy of
//! another w-curve.
//!
//! The copy contributes one new crossing next to each crossing of the curve
//! slid over, pushed off on a consistent side; the band splices the copy
//! into the moving curve's cycle. Two anchor forms fix where the band runs:
//!
//! - `AlongV`: the band follows a v-curve arc between two adjacent
//!   crossings, one on each curve. The copy is pushed toward the arc and the
//!   splice lands immediately next to the moving curve's endpoint, so a
//!   canceling bigon forms there by construction.
//! - `ThroughFace`: the band runs inside a complementary region from a side
//!   of a moving-curve arc to a side of an over-curve arc; the two sides
//!   must lie in the same region (faces joined by connect-sum tubes count as
//!   one region).
//!
//! Every slide ends with bigon cleanup: faces of degree two bounded by one
//! v-arc and one w-arc between the same two crossings are removed, lowest
//! pair first, until none remain. Cleanup keeps the crossing count equal to
//! the geometric intersection number.

use serde::{Deserialize, Serialize};

use super::map::{build_map, W_IN, W_OUT};
use super::{Crossing, DiagError, HeegaardDiagram};

/// Which side of an arc: the face at its outgoing dart or at its incoming
/// dart (with respect to the curve's traversal direction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "out")]
    Out,
    #[serde(rename = "in")]
    In,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SlideAnchor {
    /// The arc of v-curve `v` from cycle position `pos` to `pos + 1`; the
    /// two endpoint crossings must lie on the over- and moving curves.
    #[serde(rename = "along_v")]
    AlongV { v: usize, pos: usize },
    /// A band inside one complementary region, from the given side of the
    /// moving curve's arc `moving_arc` to the given side of the over curve's
    /// arc `over_arc` (arc k runs from cycle position k to k + 1).
    #[serde(rename = "through_face")]
    ThroughFace {
        moving_arc: usize,
        moving_side: Side,
        over_arc: usize,
        over_side: Side,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlideSpec {
    pub moving: usize,
    pub over: usize,
    pub anchor: SlideAnchor,
}

fn insert_after(side: Side, sign: i8) -> bool {
    (side == Side::Out) == (sign == 1)
}

/// Slides w_moving over w_over along the anchor. The result passes
/// validation and fills the same surface; bigon cleanup has been applied.
pub fn handle_slide(d: &HeegaardDiagram, spec: &SlideSpec) -> Result<HeegaardDiagram, DiagError> {
    let (l, k) = (spec.moving, spec.over);
    if l == k {
        return Err(DiagError::Precondition(
            "cannot slide a curve over itself".to_string(),
        ));
    }
    if l >= d.w_count() || k >= d.w_count() {
        return Err(DiagError::Precondition(format!(
            "curve index out of range: moving {l}, over {k} of {}",
            d.w_count()
        )));
    }
    let kcyc: Vec<u64> = d.w_cycles()[k].clone();
    let r = kcyc.len();
    let base_id = d.next_free_id();
    let copy_id = |pos_in_k: usize| base_id + pos_in_k as u64;

    // block: copy ids in splice order; splice point in the moving cycle;
    // whether the copy runs with or against the over curve; push-off side
    let (block, splice_before_id, splice_after, forward, side): (Vec<u64>, u64, bool, bool, Side);
    match &spec.anchor {
        SlideAnchor::AlongV { v, pos } => {
            if *v >= d.genus() {
                return Err(DiagError::Precondition(format!("guide curve {v} out of range")));
            }
            let guide = &d.v_cycles()[*v];
            if guide.len() < 2 {
                return Err(DiagError::Precondition(
                    "guide curve has no adjacent crossing pair".to_string(),
                ));
            }
            if *pos >= guide.len() {
                return Err(DiagError::Precondition("anchor position out of range".to_string()));
            }
            let x_id = guide[*pos];
            let y_id = guide[(pos + 1) % guide.len()];
            let (wx, wy) = (
                d.crossing(x_id).unwrap().w,
                d.crossing(y_id).unwrap().w,
            );
            let (a_id, b_id, a_is_first) = if wx == k && wy == l {
                (x_id, y_id, true)
            } else if wx == l && wy == k {
                (y_id, x_id, false)
            } else {
                return Err(DiagError::Precondition(format!(
                    "anchor endpoints lie on w-curves {wx} and {wy}, need {k} and {l}"
                )));
            };
            let sign_a = d.crossing(a_id).unwrap().sign;
            // the copy is pushed toward the guide arc
            side = match (a_is_first, sign_a == 1) {
                (true, true) | (false, false) => Side::Out,
                (true, false) | (false, true) => Side::In,
            };
            // reversed copy ending at the neighbor of b: [c_{r-1}*, ..., c_1*, a*]
            let pa = kcyc.iter().position(|&c| c == a_id).unwrap();
            let mut ids = Vec::with_capacity(r);
            for i in (0..r).rev() {
                ids.push(copy_id((pa + i) % r));
            }
            block = ids;
            splice_before_id = b_id;
            splice_after = false;
            forward = false;
        }
        SlideAnchor::ThroughFace {
            moving_arc,
            moving_side,
            over_arc,
            over_side,
        } => {
            let lcyc = &d.w_cycles()[l];
            if *moving_arc >= lcyc.len() || *over_arc >= r {
                return Err(DiagError::Precondition("anchor arc out of range".to_string()));
            }
            let map = build_map(d)?;
            let arc_face = |curve: usize, arc: usize, s: Side| -> usize {
                let cyc = &d.w_cycles()[curve];
                let from = map.idx_of_id[&cyc[arc]];
                let to = map.idx_of_id[&cyc[(arc + 1) % cyc.len()]];
                let dart = match s {
                    Side::Out => map.dart(from, W_OUT),
                    Side::In => map.dart(to, W_IN),
                };
                map.face_of_dart[dart]
            };
            let fl = arc_face(l, *moving_arc, *moving_side);
            let fk = arc_face(k, *over_arc, *over_side);
            if map.face_cluster[fl] != map.face_cluster[fk] {
                return Err(DiagError::Precondition(
                    "anchor sides lie in different complementary regions".to_string(),
                ));
            }
            forward = moving_side == over_side;
            side = *over_side;
            let mut ids = Vec::with_capacity(r);
            if forward {
                // cut between over_arc and over_arc + 1, enter at the later end
                for i in 1..=r {
                    ids.push(copy_id((over_arc + i) % r));
                }
            } else {
                for i in 0..r {
                    ids.push(copy_id((over_arc + r - i) % r));
                }
            }
            block = ids;
            splice_before_id = lcyc[*moving_arc];
            splice_after = true;
        }
    }

    // new crossing records for the copy
    let mut crossings = d.crossings().to_vec();
    for (i, &xid) in kcyc.iter().enumerate() {
        let x = d.crossing(xid).unwrap();
        crossings.push(Crossing {
            id: copy_id(i),
            sign: if forward { x.sign } else { -x.sign },
            v: x.v,
            w: l,
        });
    }

    // insert each copy crossing next to its original along the v-curves
    let mut v_cycles: Vec<Vec<u64>> = Vec::with_capacity(d.genus());
    for cyc in d.v_cycles() {
        let mut out = Vec::with_capacity(cyc.len() + r);
        for &id in cyc {
            let in_k = kcyc.iter().position(|&c| c == id);
            match in_k {
                Some(i) => {
                    let sign = d.crossing(id).unwrap().sign;
                    if insert_after(side, sign) {
                        out.push(id);
                        out.push(copy_id(i));
                    } else {
                        out.push(copy_id(i));
                        out.push(id);
                    }
                }
                None => out.push(id),
            }
        }
        v_cycles.push(out);
    }

    // splice the block into the moving cycle
    let mut w_cycles: Vec<Vec<u64>> = d.w_cycles().to_vec();
    {
        let cyc = &mut w_cycles[l];
        let at = cyc.iter().position(|&c| c == splice_before_id).unwrap();
        let at = if splice_after { at + 1 } else { at };
        for (off, &id) in block.iter().enumerate() {
            cyc.insert(at + off, id);
        }
    }

    let slid = cleanup_bigons(d.genus(), crossings, v_cycles, w_cycles)?;
    let map = build_map(&slid)?;
    if map.total_genus() != d.genus() {
        return Err(DiagError::Invalid(format!(
            "slide produced a surface of genus {}, expected {}",
            map.total_genus(),
            d.genus()
        )));
    }
    Ok(slid)
}

/// Removes canceling bigons until none remain, lowest crossing pair first.
pub(crate) fn cleanup_bigons(
    genus: usize,
    mut crossings: Vec<Crossing>,
    mut v_cycles: Vec<Vec<u64>>,
    mut w_cycles: Vec<Vec<u64>>,
) -> Result<HeegaardDiagram, DiagError> {
    loop {
        let d = HeegaardDiagram::from_parts_unchecked(
            genus,
            crossings.clone(),
            v_cycles.clone(),
            w_cycles.clone(),
        );
        let map = build_map(&d)?;
        let mut best: Option<(u64, u64)> = None;
        for orbit in &map.faces {
            if orbit.len() != 2 {
                continue;
            }
            let (d1, d2) = (orbit[0], orbit[1]);
            let is_v = |dart: usize| dart % 4 == 0 || dart % 4 == 2;
            if is_v(d1) == is_v(d2) {
                continue;
            }
            let ends = |dart: usize| (dart / 4, map.alpha[dart] / 4);
            let (a1, b1) = ends(d1);
            let (a2, b2) = ends(d2);
            if a1 == b1 {
                continue;
            }
            let same = (a1 == a2 && b1 == b2) || (a1 == b2 && b1 == a2);
            if !same {
                continue;
            }
            let (x, y) = (d.crossings()[a1].id, d.crossings()[b1].id);
            let pair = (x.min(y), x.max(y));
            if best.is_none() || pair < best.unwrap() {
                best = Some(pair);
            }
        }
        let Some((x, y)) = best else {
            return Ok(d);
        };
        let cx = *d.crossing(x).unwrap();
        let cy = *d.crossing(y).unwrap();
        if cx.v != cy.v || cx.w != cy.w {
            return Err(DiagError::Invalid(
                "bigon endpoints disagree on their curves".to_string(),
            ));
        }
        let vc = &mut v_cycles[cx.v];
        vc.retain(|&id| id != x && id != y);
        if vc.is_empty() {
            return Err(DiagError::Invalid(format!(
                "bigon cleanup would empty v-curve {}",
                cx.v
            )));
        }
        let wc = &mut w_cycles[cx.w];
        wc.retain(|&id| id != x && id != y);
        if wc.is_empty() {
            return Err(DiagError::Invalid(format!(
                "bigon cleanup would empty w-curve {}",
                cx.w
            )));
        }
        crossings.retain(|c| c.id != x && c.id != y);
    }
}

/// All slide anchors for moving `moving` over `over`, in canonical order:
/// v-guided anchors first, then in-region anchors by arc and side.
pub fn enumerate_anchors(d: &HeegaardDiagram, moving: usize, over: usize) -> Vec<SlideAnchor> {
    let mut out = Vec::new();
    if moving == over || moving >= d.w_count() || over >= d.w_count() {
        return out;
    }
    for (v, cyc) in d.v_cycles().iter().enumerate() {
        if cyc.len() < 2 {
            continue;
        }
        for pos in 0..cyc.len() {
            let wx = d.crossing(cyc[pos]).unwrap().w;
            let wy = d.crossing(cyc[(pos + 1) % cyc.len()]).unwrap().w;
            if (wx == over && wy == moving) || (wx == moving && wy == over) {
                out.push(SlideAnchor::AlongV { v, pos });
            }
        }
    }
    let Ok(map) = build_map(d) else {
        return out;
    };
    let arc_face = |curve: usize, arc: usize, s: Side| -> usize {
        let cyc = &d.w_cycles()[curve];
        let from = map.idx_of_id[&cyc[arc]];
        let to = map.idx_of_id[&cyc[(arc + 1) % cyc.len()]];
        let dart = match s {
            Side::Out => map.dart(from, W_OUT),
            Side::In => map.dart(to, W_IN),
        };
        map.face_of_dart[dart]
    };
    let sides = [Side::Out, Side::In];
    for moving_arc in 0..d.w_cycles()[moving].len() {
        for &moving_side in &sides {
            let fl = map.face_cluster[arc_face(moving, moving_arc, moving_side)];
            for over_arc in 0..d.w_cycles()[over].len() {
                for &over_side in &sides {
                    let fk = map.face_cluster[arc_face(over, over_arc, over_side)];
                    if fl == fk {
                        out.push(SlideAnchor::ThroughFace {
                            moving_arc,
                            moving_side,
                            over_arc,
                            over_side,
                        });
                    }
                }
            }
        }
    }
    out
}

/// The standard genus-2 diagram slid once: w_1 over w_0 through the
/// connect-sum region. Test fixture shared across the crate.
#[cfg(test)]
pub(crate) fn slid_standard_two() -> HeegaardDiagram {
    let d = HeegaardDiagram::standard_s3(2);
    handle_slide(
        &d,
        &SlideSpec {
            moving: 1,
            over: 0,
            anchor: SlideAnchor::ThroughFace {
                moving_arc: 0,
                moving_side: Side::Out,
                over_arc: 0,
                over_side: Side::Out,
            },
        },
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::SystemClass;

    fn slide(d: &HeegaardDiagram, moving: usize, over: usize, anchor: SlideAnchor) -> HeegaardDiagram {
        handle_slide(
            d,
            &SlideSpec {
                moving,
                over,
                anchor,
            },
        )
        .unwrap()
    }

    #[test]
    fn through_face_slide_on_standard_two() {
        let s = slid_standard_two();
        let rep = s.validate();
        assert!(rep.report.valid(), "{}", rep.report.render_text());
        assert_eq!(s.crossing_count(), 3);
        assert_eq!(
            s.intersection_matrix().entries,
            vec![vec![1, 1], vec![0, 1]]
        );
        assert_eq!(
            s.classify_system().unwrap(),
            SystemClass::Good {
                witness: vec![0, 1]
            }
        );
        // now filling: the slide joins the two components
        assert_eq!(s.validate().filling, Some(true));
    }

    #[test]
    fn along_v_slide_cancels_back_to_identity() {
        let s = slid_standard_two();
        // the new crossing of w_1 on v_0 sits adjacent to crossing 0
        let anchors = enumerate_anchors(&s, 1, 0);
        let along: Vec<_> = anchors
            .iter()
            .filter(|a| matches!(a, SlideAnchor::AlongV { .. }))
            .collect();
        assert!(!along.is_empty(), "expected a v-guided anchor after the slide");
        let back = slide(&s, 1, 0, along[0].clone());
        assert!(back.validate().report.valid());
        assert!(back.intersection_matrix().is_identity());
        assert_eq!(back.crossing_count(), 2);
    }

    #[test]
    fn slide_over_self_rejected() {
        let d = HeegaardDiagram::standard_s3(2);
        let err = handle_slide(
            &d,
            &SlideSpec {
                moving: 1,
                over: 1,
                anchor: SlideAnchor::ThroughFace {
                    moving_arc: 0,
                    moving_side: Side::Out,
                    over_arc: 0,
                    over_side: Side::Out,
                },
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn slides_preserve_genus_and_validity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for g in 2..4usize {
            let mut d = HeegaardDiagram::standard_s3(g);
            for _ in 0..6 {
                let l = rng.random_range(0..g);
                let k = (l + 1 + rng.random_range(0..g - 1)) % g;
                let anchors = enumerate_anchors(&d, l, k);
                if anchors.is_empty() {
                    continue;
                }
                let a = anchors[rng.random_range(0..anchors.len())].clone();
                match handle_slide(
                    &d,
                    &SlideSpec {
                        moving: l,
                        over: k,
                        anchor: a,
                    },
                ) {
                    Ok(next) => {
                        let rep = next.validate();
                        assert!(rep.report.valid(), "{}", rep.report.render_text());
                        assert_eq!(next.genus(), g);
                        assert_eq!(
                            next.intersection_matrix().total(),
                            next.crossing_count() as u64
                        );
                        d = next;
                    }
                    Err(DiagError::Invalid(_)) => panic!("slide broke the surface"),
                    Err(_) => {}
                }
            }
        }
    }
}
