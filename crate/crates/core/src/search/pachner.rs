//! Bidirectional breadth-first search over the flip graph.
//!
//! Nodes are canonical signatures; each carries a concrete representative
//! triangulation so recorded sites replay literally. The backward half of a
//! found path is stitched on through explicit isomorphisms, flipping each
//! recorded move at its created cell.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Budget, SearchStats};
use crate::tricomplex::{
    flip, flip_sites, flip_with_inverse, isomorphism, signature, transport_site, FlipKind,
    FlipSite, TriError, Triangulation,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathMove {
    pub site: FlipSite,
    pub kind: FlipKind,
}

/// A verified flip sequence between two triangulations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlipPath {
    pub start_sig: Vec<u32>,
    pub end_sig: Vec<u32>,
    pub moves: Vec<PathMove>,
}

impl FlipPath {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum PachnerOutcome {
    Found(FlipPath),
    NotFound(SearchStats),
}

/// Replays a path from `start`, validating every flip; the final
/// triangulation is returned for signature comparison by the caller.
pub fn replay_flip_path(start: &Triangulation, path: &FlipPath) -> Result<Triangulation, TriError> {
    let mut cur = start.clone();
    for mv in &path.moves {
        if mv.kind != mv.site.kind() {
            return Err(TriError::Invalid("move kind disagrees with its site".into()));
        }
        cur = flip(&cur, mv.site)?;
        if !cur.is_valid() {
            return Err(TriError::Invalid("replay left a broken triangulation".into()));
        }
    }
    Ok(cur)
}

/// The reverse path, replayable literally from `end`: the forward replay
/// records each created cell, and the recorded inverse sites are transported
/// onto the backward replay states through explicit isomorphisms.
pub fn invert_flip_path(
    start: &Triangulation,
    path: &FlipPath,
    end: &Triangulation,
) -> Result<FlipPath, TriError> {
    let mut states = vec![start.clone()];
    let mut invs = Vec::with_capacity(path.moves.len());
    for mv in &path.moves {
        let (next, inv) = flip_with_inverse(states.last().unwrap(), mv.site)?;
        states.push(next);
        invs.push(inv);
    }
    let mut cur = end.clone();
    let mut moves = Vec::with_capacity(invs.len());
    for i in (0..invs.len()).rev() {
        // invs[i] lives on the forward state after move i
        let iso = isomorphism(&states[i + 1], &cur)
            .ok_or_else(|| TriError::Invalid("reverse replay state mismatch".into()))?;
        let site = transport_site(&iso, invs[i]);
        cur = flip(&cur, site)?;
        moves.push(PathMove {
            site,
            kind: site.kind(),
        });
    }
    Ok(FlipPath {
        start_sig: path.end_sig.clone(),
        end_sig: path.start_sig.clone(),
        moves,
    })
}

struct Node {
    rep: Triangulation,
    parent: Option<(Vec<u32>, FlipSite, FlipSite)>, // (parent sig, site on parent, inverse on rep)
    depth: usize,
}

type Layer = HashMap<Vec<u32>, Node>;

const KINDS: [FlipKind; 4] = [
    FlipKind::OneFour,
    FlipKind::TwoThree,
    FlipKind::ThreeTwo,
    FlipKind::FourOne,
];

fn neighbors(t: &Triangulation) -> Vec<(FlipSite, Triangulation, FlipSite)> {
    let mut out = Vec::new();
    for kind in KINDS {
        for site in flip_sites(t, kind) {
            if let Ok((next, inv)) = flip_with_inverse(t, site) {
                out.push((site, next, inv));
            }
        }
    }
    out
}

fn expand(
    visited: &mut Layer,
    frontier: Vec<Vec<u32>>,
    nodes_seen: &mut usize,
    budget: &Budget,
    jobs: usize,
) -> Vec<Vec<u32>> {
    // expansion of one BFS level; signature computation dominates, so the
    // per-node work may fan out across threads with a deterministic merge
    let reps: Vec<(Vec<u32>, Triangulation, usize)> = frontier
        .iter()
        .map(|sig| {
            let n = &visited[sig];
            (sig.clone(), n.rep.clone(), n.depth)
        })
        .collect();
    let expanded: Vec<(Vec<u32>, usize, Vec<(FlipSite, Triangulation, FlipSite, Vec<u32>)>)> =
        if jobs > 1 {
            use rayon::prelude::*;
            reps.par_iter()
                .map(|(sig, rep, depth)| {
                    let out = neighbors(rep)
                        .into_iter()
                        .map(|(site, next, inv)| {
                            let nsig = signature(&next);
                            (site, next, inv, nsig)
                        })
                        .collect();
                    (sig.clone(), *depth, out)
                })
                .collect()
        } else {
            reps.iter()
                .map(|(sig, rep, depth)| {
                    let out = neighbors(rep)
                        .into_iter()
                        .map(|(site, next, inv)| {
                            let nsig = signature(&next);
                            (site, next, inv, nsig)
                        })
                        .collect();
                    (sig.clone(), *depth, out)
                })
                .collect()
        };
    let mut next_frontier = Vec::new();
    for (sig, depth, nbrs) in expanded {
        for (site, next, inv, nsig) in nbrs {
            if *nodes_seen >= budget.max_nodes {
                return next_frontier;
            }
            if visited.contains_key(&nsig) {
                continue;
            }
            *nodes_seen += 1;
            visited.insert(
                nsig.clone(),
                Node {
                    rep: next,
                    parent: Some((sig.clone(), site, inv)),
                    depth: depth + 1,
                },
            );
            next_frontier.push(nsig);
        }
    }
    next_frontier
}

/// Finds a flip sequence from `t1` to `t2` within the budget, verified by
/// replay before returning. `jobs > 1` parallelizes frontier expansion.
pub fn pachner_path(
    t1: &Triangulation,
    t2: &Triangulation,
    budget: Budget,
    jobs: usize,
) -> Result<PachnerOutcome, TriError> {
    for (name, t) in [("first", t1), ("second", t2)] {
        let rep = t.validate();
        if !rep.valid() {
            return Err(TriError::Invalid(format!(
                "{name} input fails validation:\n{}",
                rep.render_text()
            )));
        }
    }
    let sig1 = signature(t1);
    let sig2 = signature(t2);
    fn assemble(
        t1: &Triangulation,
        sig2: &[u32],
        path: FlipPath,
    ) -> Result<PachnerOutcome, TriError> {
        let end = replay_flip_path(t1, &path)?;
        if signature(&end) != sig2 {
            return Err(TriError::Invalid("replay does not reach the target".into()));
        }
        Ok(PachnerOutcome::Found(path))
    }
    if sig1 == sig2 {
        let path = FlipPath {
            start_sig: sig1.clone(),
            end_sig: sig2.clone(),
            moves: Vec::new(),
        };
        return assemble(t1, &sig2, path);
    }

    let mut fwd: Layer = HashMap::new();
    let mut bwd: Layer = HashMap::new();
    fwd.insert(
        sig1.clone(),
        Node {
            rep: t1.clone(),
            parent: None,
            depth: 0,
        },
    );
    bwd.insert(
        sig2.clone(),
        Node {
            rep: t2.clone(),
            parent: None,
            depth: 0,
        },
    );
    let mut frontier_f = vec![sig1.clone()];
    let mut frontier_b = vec![sig2.clone()];
    let mut nodes_seen = 2usize;
    let mut depth_f = 0usize;
    let mut depth_b = 0usize;

    loop {
        if frontier_f.is_empty() && frontier_b.is_empty() {
            return Ok(PachnerOutcome::NotFound(SearchStats {
                visited: nodes_seen,
                frontier: 0,
                depth_reached: depth_f + depth_b,
            }));
        }
        if nodes_seen >= budget.max_nodes || depth_f + depth_b >= budget.max_depth {
            return Ok(PachnerOutcome::NotFound(SearchStats {
                visited: nodes_seen,
                frontier: frontier_f.len() + frontier_b.len(),
                depth_reached: depth_f + depth_b,
            }));
        }
        // expand the smaller live frontier
        let forward = if frontier_f.is_empty() {
            false
        } else if frontier_b.is_empty() {
            true
        } else {
            frontier_f.len() <= frontier_b.len()
        };
        if forward {
            frontier_f = expand(&mut fwd, frontier_f, &mut nodes_seen, &budget, jobs);
            depth_f += 1;
        } else {
            frontier_b = expand(&mut bwd, frontier_b, &mut nodes_seen, &budget, jobs);
            depth_b += 1;
        }
        let (scan, other) = if forward {
            (&frontier_f, &bwd)
        } else {
            (&frontier_b, &fwd)
        };
        if let Some(meet) = scan.iter().find(|sig| other.contains_key(*sig)) {
            let path = stitch(t1, &fwd, &bwd, meet)?;
            if path.len() > budget.max_depth {
                return Ok(PachnerOutcome::NotFound(SearchStats {
                    visited: nodes_seen,
                    frontier: frontier_f.len() + frontier_b.len(),
                    depth_reached: depth_f + depth_b,
                }));
            }
            return assemble(t1, &sig2, path);
        }
    }
}

/// Builds the full move list through the meeting signature.
fn stitch(
    t1: &Triangulation,
    fwd: &Layer,
    bwd: &Layer,
    meet: &[u32],
) -> Result<FlipPath, TriError> {
    // forward half: walk parents up to t1, then reverse
    let mut fwd_moves: Vec<FlipSite> = Vec::new();
    let mut cur = meet.to_vec();
    while let Some((parent, site, _inv)) = &fwd[&cur].parent {
        fwd_moves.push(*site);
        cur = parent.clone();
    }
    fwd_moves.reverse();

    // backward half: from the meeting point towards t2, inverse sites are
    // recorded in each backward rep's coordinates; transport them onto the
    // concrete forward replay state step by step
    let mut moves: Vec<PathMove> = fwd_moves
        .iter()
        .map(|&site| PathMove {
            site,
            kind: site.kind(),
        })
        .collect();
    let mut state = t1.clone();
    for mv in &moves {
        state = flip(&state, mv.site)?;
    }
    let mut bcur = meet.to_vec();
    while let Some((parent, _site, inv)) = &bwd[&bcur].parent {
        // the inverse site lives on bwd[bcur].rep, isomorphic to `state`
        let iso = isomorphism(&bwd[&bcur].rep, &state)
            .ok_or_else(|| TriError::Invalid("stitch states are not isomorphic".into()))?;
        let site = transport_site(&iso, *inv);
        state = flip(&state, site)?;
        moves.push(PathMove {
            site,
            kind: site.kind(),
        });
        bcur = parent.clone();
    }
    Ok(FlipPath {
        start_sig: signature(t1),
        end_sig: bcur.to_vec(),
        moves,
    })
}
