//! Greedy-plus-backtracking reduction of a diagram to genus zero.
//!
//! Destabilize whenever a pair is free; otherwise try handle slides ordered
//! by the crossing count they leave behind. Visited canonical forms prune
//! the depth-first stack. A successful trace is replayed before returning.

use std::collections::HashSet;

use serde_json::json;

use super::{Budget, SearchStats};
use crate::diagram::{
    destabilize, diagram_signature, enumerate_anchors, find_destabilizable_pairs, handle_slide,
    DiagError, HeegaardDiagram, SlideSpec,
};
use crate::trace::{check, Trace};

#[derive(Clone, Debug)]
pub enum UnstabilizeOutcome {
    Found(Trace),
    NotFound(SearchStats),
}

/// Bound on slide candidates evaluated per node.
const BRANCH_CAP: usize = 96;

enum Move {
    Destabilize(usize),
    Slide(SlideSpec),
}

fn apply(d: &HeegaardDiagram, mv: &Move) -> Result<HeegaardDiagram, DiagError> {
    match mv {
        Move::Destabilize(i) => destabilize(d, *i),
        Move::Slide(spec) => handle_slide(d, spec),
    }
}

fn move_json(mv: &Move) -> serde_json::Value {
    match mv {
        Move::Destabilize(i) => json!({"op": "destabilize", "index": i}),
        Move::Slide(spec) => json!({"op": "slide", "moving": spec.moving, "over": spec.over,
                                     "anchor": spec.anchor}),
    }
}

fn candidates(d: &HeegaardDiagram) -> Vec<(Move, HeegaardDiagram)> {
    let mut out = Vec::new();
    for i in find_destabilizable_pairs(d) {
        if let Ok(next) = destabilize(d, i) {
            out.push((Move::Destabilize(i), next));
        }
    }
    if !out.is_empty() {
        // genus drops: always prefer these, best crossing count first
        out.sort_by_key(|(_, next)| next.crossing_count());
        return out;
    }
    let g = d.w_count();
    let mut slides = Vec::new();
    'outer: for moving in 0..g {
        for over in 0..g {
            if moving == over {
                continue;
            }
            for anchor in enumerate_anchors(d, moving, over) {
                let spec = SlideSpec {
                    moving,
                    over,
                    anchor,
                };
                if let Ok(next) = handle_slide(d, &spec) {
                    slides.push((Move::Slide(spec), next));
                    if slides.len() >= BRANCH_CAP {
                        break 'outer;
                    }
                }
            }
        }
    }
    slides.sort_by_key(|(_, next)| next.crossing_count());
    slides
}

/// Reduces `d` to the empty genus-zero diagram if the budget allows,
/// returning the verified move trace with measures (genus, crossings).
pub fn unstabilize_search(
    d: &HeegaardDiagram,
    budget: Budget,
) -> Result<UnstabilizeOutcome, DiagError> {
    if !d.is_valid() {
        return Err(DiagError::Invalid("input fails validation".to_string()));
    }
    let mut visited: HashSet<Vec<u64>> = HashSet::new();
    visited.insert(diagram_signature(d));
    // depth-first with explicit stack of (state, move list so far)
    let mut stack: Vec<(HeegaardDiagram, Vec<Move>)> = vec![(d.clone(), Vec::new())];
    let mut nodes = 0usize;
    let mut deepest = 0usize;

    while let Some((cur, path)) = stack.pop() {
        if cur.genus() == 0 {
            return Ok(UnstabilizeOutcome::Found(build_trace(d, &path)?));
        }
        if path.len() >= budget.max_depth {
            continue;
        }
        nodes += 1;
        if nodes > budget.max_nodes {
            return Ok(UnstabilizeOutcome::NotFound(SearchStats {
                visited: nodes,
                frontier: stack.len(),
                depth_reached: deepest,
            }));
        }
        deepest = deepest.max(path.len());
        let mut next_moves = candidates(&cur);
        // push worst-first so the best candidate pops next
        next_moves.reverse();
        for (mv, next) in next_moves {
            if !visited.insert(diagram_signature(&next)) {
                continue;
            }
            let mut p: Vec<Move> = path.iter().map(clone_move).collect();
            p.push(mv);
            stack.push((next, p));
        }
    }
    Ok(UnstabilizeOutcome::NotFound(SearchStats {
        visited: nodes,
        frontier: 0,
        depth_reached: deepest,
    }))
}

fn clone_move(mv: &Move) -> Move {
    match mv {
        Move::Destabilize(i) => Move::Destabilize(*i),
        Move::Slide(s) => Move::Slide(s.clone()),
    }
}

fn build_trace(start: &HeegaardDiagram, path: &[Move]) -> Result<Trace, DiagError> {
    let mut trace = Trace::new();
    let mut cur = start.clone();
    for mv in path {
        let next = apply(&cur, mv)?;
        let valid = next.is_valid();
        trace.push(
            move_json(mv),
            vec![cur.genus() as i64, cur.crossing_count() as i64],
            vec![next.genus() as i64, next.crossing_count() as i64],
            vec![check("valid", valid)],
        );
        if !valid {
            return Err(DiagError::Invalid("replay produced an invalid diagram".into()));
        }
        cur = next;
    }
    if cur.genus() != 0 {
        return Err(DiagError::Invalid("trace does not end at genus zero".into()));
    }
    trace.verdict = Some("genus-zero reached".to_string());
    Ok(trace)
}

/// Replays a recorded trace from `start` through the core moves and checks
/// it ends at the empty diagram.
pub fn verify_unstabilize_trace(start: &HeegaardDiagram, trace: &Trace) -> Result<(), String> {
    let mut cur = start.clone();
    for step in &trace.steps {
        let op = step.mv["op"].as_str().unwrap_or_default();
        cur = match op {
            "destabilize" => {
                let i = step.mv["index"].as_u64().ok_or("missing index")? as usize;
                destabilize(&cur, i).map_err(|e| e.to_string())?
            }
            "slide" => {
                let spec = SlideSpec {
                    moving: step.mv["moving"].as_u64().ok_or("missing moving")? as usize,
                    over: step.mv["over"].as_u64().ok_or("missing over")? as usize,
                    anchor: serde_json::from_value(step.mv["anchor"].clone())
                        .map_err(|e| e.to_string())?,
                };
                handle_slide(&cur, &spec).map_err(|e| e.to_string())?
            }
            other => return Err(format!("unknown move '{other}'")),
        };
        let after = vec![cur.genus() as i64, cur.crossing_count() as i64];
        if after != step.measure_after {
            return Err(format!("step {}: measures diverge on replay", step.step));
        }
    }
    if cur.genus() != 0 {
        return Err("replay does not reach genus zero".to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{stabilize, Side, SlideAnchor};
    use rand::{Rng, SeedableRng};

    #[test]
    fn empty_diagram_needs_no_moves() {
        let d = HeegaardDiagram::standard_s3(0);
        match unstabilize_search(&d, Budget::default()).unwrap() {
            UnstabilizeOutcome::Found(t) => assert!(t.is_empty()),
            _ => panic!("expected success"),
        }
    }

    #[test]
    fn standard_diagrams_reduce() {
        let d = HeegaardDiagram::standard_s3(3);
        match unstabilize_search(&d, Budget::default()).unwrap() {
            UnstabilizeOutcome::Found(t) => {
                assert_eq!(t.len(), 3);
                verify_unstabilize_trace(&d, &t).unwrap();
            }
            _ => panic!("expected success"),
        }
    }

    #[test]
    fn scrambled_diagram_reduces() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut d = HeegaardDiagram::standard_s3(0);
        for _ in 0..3 {
            d = stabilize(&d);
        }
        // a few random slides
        for _ in 0..3 {
            let l = rng.random_range(0..3usize);
            let k = (l + 1 + rng.random_range(0..2usize)) % 3;
            let anchors = enumerate_anchors(&d, l, k);
            if anchors.is_empty() {
                continue;
            }
            let a = anchors[rng.random_range(0..anchors.len())].clone();
            if let Ok(next) = handle_slide(
                &d,
                &SlideSpec {
                    moving: l,
                    over: k,
                    anchor: a,
                },
            ) {
                d = next;
            }
        }
        match unstabilize_search(&d, Budget::default()).unwrap() {
            UnstabilizeOutcome::Found(t) => verify_unstabilize_trace(&d, &t).unwrap(),
            UnstabilizeOutcome::NotFound(stats) => panic!("not found: {stats:?}"),
        }
    }

    #[test]
    fn zero_budget_is_not_found() {
        let d = stabilize(&stabilize(&HeegaardDiagram::standard_s3(0)));
        // force slides to be the only option by sliding first
        let d = handle_slide(
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
        .unwrap();
        let budget = Budget {
            max_nodes: 0,
            max_depth: 2,
        };
        match unstabilize_search(&d, budget).unwrap() {
            UnstabilizeOutcome::NotFound(stats) => {
                assert_eq!(stats.visited, 1);
            }
            UnstabilizeOutcome::Found(_) => panic!("expected not-found under zero budget"),
        }
    }
}
