//! Bistellar flips: the local moves 1<->4 and 2<->3.
//!
//! A flip removes a small star of tetrahedra and rebuilds it, preserving all
//! gluings on the star boundary. The rebuild is driven by a boundary
//! correspondence mapping each old boundary face to its replacement face
//! together with a vertex relabeling, so stars whose boundary faces are glued
//! to each other (small pseudo-triangulations) are handled uniformly.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Gluing, TetFaces, TriError, Triangulation};
use crate::perm::Perm4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipKind {
    #[serde(rename = "1-4")]
    OneFour,
    #[serde(rename = "2-3")]
    TwoThree,
    #[serde(rename = "3-2")]
    ThreeTwo,
    #[serde(rename = "4-1")]
    FourOne,
}

impl FlipKind {
    pub fn label(&self) -> &'static str {
        match self {
            FlipKind::OneFour => "1-4",
            FlipKind::TwoThree => "2-3",
            FlipKind::ThreeTwo => "3-2",
            FlipKind::FourOne => "4-1",
        }
    }

    pub fn parse(s: &str) -> Option<FlipKind> {
        match s {
            "1-4" | "1/4" | "14" => Some(FlipKind::OneFour),
            "2-3" | "2/3" | "23" => Some(FlipKind::TwoThree),
            "3-2" | "3/2" | "32" => Some(FlipKind::ThreeTwo),
            "4-1" | "4/1" | "41" => Some(FlipKind::FourOne),
            _ => None,
        }
    }

    pub fn inverse(&self) -> FlipKind {
        match self {
            FlipKind::OneFour => FlipKind::FourOne,
            FlipKind::TwoThree => FlipKind::ThreeTwo,
            FlipKind::ThreeTwo => FlipKind::TwoThree,
            FlipKind::FourOne => FlipKind::OneFour,
        }
    }

    /// Change in (vertices, edges, faces, tetrahedra) of the quotient.
    pub fn skeleton_delta(&self) -> (i64, i64, i64, i64) {
        match self {
            FlipKind::OneFour => (1, 4, 6, 3),
            FlipKind::TwoThree => (0, 1, 2, 1),
            FlipKind::ThreeTwo => (0, -1, -2, -1),
            FlipKind::FourOne => (-1, -4, -6, -3),
        }
    }

    pub fn genus_delta(&self) -> i64 {
        match self {
            FlipKind::OneFour => 3,
            FlipKind::TwoThree => 1,
            FlipKind::ThreeTwo => -1,
            FlipKind::FourOne => -3,
        }
    }
}

/// A flip location: a tetrahedron for 1->4, a glued face for 2->3, an edge
/// incidence for 3->2, a vertex incidence for 4->1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FlipSite {
    #[serde(rename = "1-4")]
    OneFour { tet: usize },
    #[serde(rename = "2-3")]
    TwoThree { tet: usize, face: usize },
    #[serde(rename = "3-2")]
    ThreeTwo { tet: usize, edge: (u8, u8) },
    #[serde(rename = "4-1")]
    FourOne { tet: usize, vertex: u8 },
}

impl FlipSite {
    pub fn kind(&self) -> FlipKind {
        match self {
            FlipSite::OneFour { .. } => FlipKind::OneFour,
            FlipSite::TwoThree { .. } => FlipKind::TwoThree,
            FlipSite::ThreeTwo { .. } => FlipKind::ThreeTwo,
            FlipSite::FourOne { .. } => FlipKind::FourOne,
        }
    }
}

impl std::fmt::Display for FlipSite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlipSite::OneFour { tet } => write!(f, "1-4 at tet {tet}"),
            FlipSite::TwoThree { tet, face } => write!(f, "2-3 at face ({tet},{face})"),
            FlipSite::ThreeTwo { tet, edge } => {
                write!(f, "3-2 at edge ({tet},{},{})", edge.0, edge.1)
            }
            FlipSite::FourOne { tet, vertex } => write!(f, "4-1 at vertex ({tet},{vertex})"),
        }
    }
}

// ---- generic star replacement ----

struct NewTet {
    faces: TetFaces, // internal gluings, target = local index of new tet
}

struct Rebuild {
    removed: Vec<usize>, // sorted old indices
    new_tets: Vec<NewTet>,
    // (old tet, old face) -> (new local tet, new face, old-to-new vertex map)
    boundary: HashMap<(usize, usize), (usize, usize, Perm4)>,
}

enum Slot {
    Old(usize),
    New(usize),
}

impl Rebuild {
    fn apply(self, t: &Triangulation) -> Result<(Triangulation, Vec<usize>), TriError> {
        let old_len = t.tet_count();
        let in_removed: Vec<bool> = {
            let mut v = vec![false; old_len];
            for &r in &self.removed {
                v[r] = true;
            }
            v
        };
        // final layout: survivors keep order, new tets fill removed slots in
        // order, extras append, surplus removed slots compact away
        let mut layout: Vec<Slot> = Vec::new();
        let mut used_new = 0usize;
        for o in 0..old_len {
            if in_removed[o] {
                if used_new < self.new_tets.len() {
                    layout.push(Slot::New(used_new));
                    used_new += 1;
                }
            } else {
                layout.push(Slot::Old(o));
            }
        }
        while used_new < self.new_tets.len() {
            layout.push(Slot::New(used_new));
            used_new += 1;
        }
        let mut old_pos = vec![usize::MAX; old_len];
        let mut new_pos = vec![usize::MAX; self.new_tets.len()];
        for (i, slot) in layout.iter().enumerate() {
            match *slot {
                Slot::Old(o) => old_pos[o] = i,
                Slot::New(n) => new_pos[n] = i,
            }
        }

        let mut tets: Vec<TetFaces> = vec![[None; 4]; layout.len()];
        // survivors: remap gluings to surviving targets; star targets are
        // filled by the boundary pass
        for o in 0..old_len {
            if in_removed[o] {
                continue;
            }
            for f in 0..4 {
                if let Some(g) = t.tets()[o][f] {
                    if !in_removed[g.tet] {
                        tets[old_pos[o]][f] = Some(Gluing {
                            tet: old_pos[g.tet],
                            perm: g.perm,
                        });
                    }
                }
            }
        }
        // internal gluings among the new tets
        for (n, nt) in self.new_tets.iter().enumerate() {
            for f in 0..4 {
                if let Some(g) = nt.faces[f] {
                    tets[new_pos[n]][f] = Some(Gluing {
                        tet: new_pos[g.tet],
                        perm: g.perm,
                    });
                }
            }
        }
        // boundary faces
        for (&(ot, of), &(nl, nf, lambda)) in &self.boundary {
            let Some(g) = t.tets()[ot][of] else {
                continue; // unglued boundary stays unglued
            };
            let img_face = g.perm.apply_usize(of);
            if in_removed[g.tet] {
                let &(nl2, _nf2, lambda2) =
                    self.boundary.get(&(g.tet, img_face)).ok_or_else(|| {
                        TriError::Inapplicable(format!(
                            "star boundary face ({},{img_face}) missing from correspondence",
                            g.tet
                        ))
                    })?;
                let perm = lambda2.compose(g.perm).compose(lambda.inverse());
                tets[new_pos[nl]][nf] = Some(Gluing {
                    tet: new_pos[nl2],
                    perm,
                });
            } else {
                let out = g.perm.compose(lambda.inverse());
                tets[new_pos[nl]][nf] = Some(Gluing {
                    tet: old_pos[g.tet],
                    perm: out,
                });
                tets[old_pos[g.tet]][img_face] = Some(Gluing {
                    tet: new_pos[nl],
                    perm: lambda.compose(g.perm.inverse()),
                });
            }
        }
        let result = Triangulation::new(t.name().to_string(), tets);
        Ok((result, new_pos))
    }
}

// ---- applicability and construction per kind ----

fn build_one_four(t: &Triangulation, tet: usize) -> Result<Rebuild, TriError> {
    if tet >= t.tet_count() {
        return Err(TriError::Inapplicable(format!("tetrahedron {tet} out of range")));
    }
    // new tet k replaces vertex k of the old tet by the center vertex
    let mut new_tets: Vec<NewTet> = (0..4).map(|_| NewTet { faces: [None; 4] }).collect();
    for k in 0..4u8 {
        for l in 0..4u8 {
            if k == l {
                continue;
            }
            new_tets[k as usize].faces[l as usize] = Some(Gluing {
                tet: l as usize,
                perm: Perm4::transposition(k, l),
            });
        }
    }
    let mut boundary = HashMap::new();
    for k in 0..4usize {
        boundary.insert((tet, k), (k, k, Perm4::IDENTITY));
    }
    Ok(Rebuild {
        removed: vec![tet],
        new_tets,
        boundary,
    })
}

fn build_two_three(t: &Triangulation, tet: usize, face: usize) -> Result<Rebuild, TriError> {
    if tet >= t.tet_count() || face >= 4 {
        return Err(TriError::Inapplicable(format!("face ({tet},{face}) out of range")));
    }
    let Some(g) = t.tets()[tet][face] else {
        return Err(TriError::Inapplicable(format!("face ({tet},{face}) is unglued")));
    };
    if g.tet == tet {
        return Err(TriError::Inapplicable(
            "2-3 flip requires two distinct tetrahedra".to_string(),
        ));
    }
    let f0 = face as u8;
    let b: Vec<u8> = (0..4u8).filter(|&v| v != f0).collect();
    let p = g.perm;

    // new tet k omits face vertex b[k]; locals: 0 apex-in-tet, 1 apex-in-other,
    // 2 = b[k+1], 3 = b[k+2]
    let mut new_tets: Vec<NewTet> = (0..3).map(|_| NewTet { faces: [None; 4] }).collect();
    let ring = Perm4::new([0, 1, 3, 2]).unwrap();
    for k in 0..3usize {
        new_tets[k].faces[2] = Some(Gluing {
            tet: (k + 1) % 3,
            perm: ring,
        });
        new_tets[k].faces[3] = Some(Gluing {
            tet: (k + 2) % 3,
            perm: ring,
        });
    }
    let mut boundary = HashMap::new();
    for k in 0..3usize {
        let (bk, bk1, bk2) = (b[k], b[(k + 1) % 3], b[(k + 2) % 3]);
        // face of `tet` opposite b[k]
        let mut lam = [0u8; 4];
        lam[f0 as usize] = 0;
        lam[bk as usize] = 1;
        lam[bk1 as usize] = 2;
        lam[bk2 as usize] = 3;
        boundary.insert((tet, bk as usize), (k, 1, Perm4::new(lam).unwrap()));
        // face of the partner opposite p(b[k])
        let mut lam2 = [0u8; 4];
        lam2[p.apply(f0) as usize] = 1;
        lam2[p.apply(bk) as usize] = 0;
        lam2[p.apply(bk1) as usize] = 2;
        lam2[p.apply(bk2) as usize] = 3;
        boundary.insert(
            (g.tet, p.apply(bk) as usize),
            (k, 0, Perm4::new(lam2).unwrap()),
        );
    }
    Ok(Rebuild {
        removed: {
            let mut r = vec![tet, g.tet];
            r.sort_unstable();
            r
        },
        new_tets,
        boundary,
    })
}

/// One step of the ring walk around an edge.
#[derive(Clone, Copy, Debug)]
struct RingStep {
    tet: usize,
    ea: u8, // image of the directed edge
    eb: u8,
    entry: u8,
    exit: u8,
}

/// Walks the tetrahedron ring around edge (a,b) of `tet`. Fails if the walk
/// meets an unglued face, reverses the edge, or does not close.
fn edge_ring(t: &Triangulation, tet: usize, a: u8, b: u8) -> Result<Vec<RingStep>, TriError> {
    let others: Vec<u8> = (0..4u8).filter(|&v| v != a && v != b).collect();
    let (entry, exit) = (others[0], others[1]);
    let mut ring = Vec::new();
    let mut cur = RingStep {
        tet,
        ea: a,
        eb: b,
        entry,
        exit,
    };
    let cap = 6 * t.tet_count() + 2;
    loop {
        ring.push(cur);
        if ring.len() > cap {
            return Err(TriError::Inapplicable("edge ring does not close".to_string()));
        }
        let Some(g) = t.tets()[cur.tet][cur.exit as usize] else {
            return Err(TriError::Inapplicable(
                "edge ring meets an unglued face".to_string(),
            ));
        };
        let (na, nb, nentry) = (g.perm.apply(cur.ea), g.perm.apply(cur.eb), g.perm.apply(cur.exit));
        let nexit = (0..4u8)
            .find(|&v| v != na && v != nb && v != nentry)
            .unwrap();
        if g.tet == tet && ((na, nb) == (a, b) || (na, nb) == (b, a)) && nentry == entry {
            if (na, nb) == (b, a) {
                return Err(TriError::Inapplicable(
                    "edge is identified with its reverse".to_string(),
                ));
            }
            return Ok(ring);
        }
        cur = RingStep {
            tet: g.tet,
            ea: na,
            eb: nb,
            entry: nentry,
            exit: nexit,
        };
    }
}

fn build_three_two(t: &Triangulation, tet: usize, a: u8, b: u8) -> Result<Rebuild, TriError> {
    if tet >= t.tet_count() || a > 3 || b > 3 || a == b {
        return Err(TriError::Inapplicable("bad edge incidence".to_string()));
    }
    let ring = edge_ring(t, tet, a, b)?;
    if ring.len() != 3 {
        return Err(TriError::Inapplicable(format!(
            "edge has degree {}, need 3",
            ring.len()
        )));
    }
    let tets_in_ring: Vec<usize> = ring.iter().map(|s| s.tet).collect();
    if tets_in_ring[0] == tets_in_ring[1]
        || tets_in_ring[0] == tets_in_ring[2]
        || tets_in_ring[1] == tets_in_ring[2]
    {
        return Err(TriError::Inapplicable(
            "the three tetrahedra around the edge are not distinct".to_string(),
        ));
    }
    // New tets: U (apex = edge start), V (apex = edge end); locals 1..3 carry
    // the equatorial vertices a_0, a_1, a_2 where a_i is the class of
    // (ring[i].entry) = (ring[i+1].exit).
    let mut new_tets = vec![NewTet { faces: [None; 4] }, NewTet { faces: [None; 4] }];
    new_tets[0].faces[0] = Some(Gluing {
        tet: 1,
        perm: Perm4::IDENTITY,
    });
    new_tets[1].faces[0] = Some(Gluing {
        tet: 0,
        perm: Perm4::IDENTITY,
    });
    let mut boundary = HashMap::new();
    for (i, s) in ring.iter().enumerate() {
        let su = |x: usize| (1 + (x % 3)) as u8;
        // u-side exterior face of ring tet i is opposite the eb label
        let mut lam = [0u8; 4];
        lam[s.ea as usize] = 0;
        lam[s.entry as usize] = su(i);
        lam[s.exit as usize] = su(i + 2);
        lam[s.eb as usize] = su(i + 1);
        boundary.insert((s.tet, s.eb as usize), (0usize, su(i + 1) as usize, Perm4::new(lam).unwrap()));
        let mut lam2 = [0u8; 4];
        lam2[s.eb as usize] = 0;
        lam2[s.entry as usize] = su(i);
        lam2[s.exit as usize] = su(i + 2);
        lam2[s.ea as usize] = su(i + 1);
        boundary.insert((s.tet, s.ea as usize), (1usize, su(i + 1) as usize, Perm4::new(lam2).unwrap()));
    }
    let mut removed = tets_in_ring;
    removed.sort_unstable();
    Ok(Rebuild {
        removed,
        new_tets,
        boundary,
    })
}

/// The incidences of a vertex class, each as (tet, vertex).
fn vertex_class(t: &Triangulation, tet: usize, v: u8) -> Vec<(usize, u8)> {
    let n = t.tet_count();
    let mut skel = t.skeleton();
    let root = skel.vertices.find(4 * tet + v as usize);
    let mut out = Vec::new();
    for tt in 0..n {
        for vv in 0..4u8 {
            if skel.vertices.find(4 * tt + vv as usize) == root {
                out.push((tt, vv));
            }
        }
    }
    out
}

fn build_four_one(t: &Triangulation, tet: usize, v: u8) -> Result<Rebuild, TriError> {
    if tet >= t.tet_count() || v > 3 {
        return Err(TriError::Inapplicable("bad vertex incidence".to_string()));
    }
    let inc = vertex_class(t, tet, v);
    if inc.len() != 4 {
        return Err(TriError::Inapplicable(format!(
            "vertex has {} incidences, need 4",
            inc.len()
        )));
    }
    let tets: Vec<usize> = inc.iter().map(|&(tt, _)| tt).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            if tets[i] == tets[j] {
                return Err(TriError::Inapplicable(
                    "star tetrahedra are not distinct".to_string(),
                ));
            }
        }
    }
    // g[i][j]: the face of star tet i glued to star tet j carrying the
    // center to the center; must be a bijection onto the faces through the
    // vertex.
    let mut gface = [[4u8; 4]; 4];
    let mut qperm = [[Perm4::IDENTITY; 4]; 4];
    for i in 0..4 {
        let (ti, ci) = inc[i];
        for f in 0..4u8 {
            if f == ci {
                continue; // the exterior face, opposite the center
            }
            let Some(g) = t.tets()[ti][f as usize] else {
                return Err(TriError::Inapplicable("star meets an unglued face".to_string()));
            };
            let j = match (0..4).find(|&j| j != i && tets[j] == g.tet) {
                Some(j) => j,
                None => {
                    return Err(TriError::Inapplicable(
                        "star face glued outside the star".to_string(),
                    ))
                }
            };
            if g.perm.apply(ci) != inc[j].1 {
                return Err(TriError::Inapplicable(
                    "star gluing does not preserve the center".to_string(),
                ));
            }
            if gface[i][j] != 4 {
                return Err(TriError::Inapplicable(
                    "two star faces glue the same pair".to_string(),
                ));
            }
            gface[i][j] = f;
            qperm[i][j] = g.perm;
        }
        for j in 0..4 {
            if j != i && gface[i][j] == 4 {
                return Err(TriError::Inapplicable(
                    "star pair without a shared face".to_string(),
                ));
            }
        }
    }
    // image-face and labeling consistency
    let mut lambdas = [Perm4::IDENTITY; 4];
    for i in 0..4 {
        let (_, ci) = inc[i];
        let mut lam = [0u8; 4];
        lam[ci as usize] = i as u8;
        for j in 0..4 {
            if j != i {
                lam[gface[i][j] as usize] = j as u8;
            }
        }
        lambdas[i] = Perm4::new(lam).ok_or_else(|| {
            TriError::Inapplicable("star faces do not label the link".to_string())
        })?;
    }
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            if qperm[i][j].apply(gface[i][j]) != gface[j][i] {
                return Err(TriError::Inapplicable(
                    "star gluings are not mutually inverse on faces".to_string(),
                ));
            }
            for m in 0..4u8 {
                if m == inc[i].1 || m == gface[i][j] {
                    continue;
                }
                if lambdas[j].apply(qperm[i][j].apply(m)) != lambdas[i].apply(m) {
                    return Err(TriError::Inapplicable(
                        "star link labels are inconsistent".to_string(),
                    ));
                }
            }
        }
    }
    let mut boundary = HashMap::new();
    for i in 0..4 {
        let (ti, ci) = inc[i];
        boundary.insert((ti, ci as usize), (0usize, i, lambdas[i]));
    }
    let mut removed = tets;
    removed.sort_unstable();
    Ok(Rebuild {
        removed,
        new_tets: vec![NewTet { faces: [None; 4] }],
        boundary,
    })
}

/// Applies a flip; the result carries all exterior gluings of the star.
pub fn flip(t: &Triangulation, site: FlipSite) -> Result<Triangulation, TriError> {
    flip_with_inverse(t, site).map(|(t, _)| t)
}

/// Applies a flip and returns the inverse site, located at the created cell
/// in the coordinates of the result.
pub fn flip_with_inverse(
    t: &Triangulation,
    site: FlipSite,
) -> Result<(Triangulation, FlipSite), TriError> {
    let rebuild = match site {
        FlipSite::OneFour { tet } => build_one_four(t, tet)?,
        FlipSite::TwoThree { tet, face } => build_two_three(t, tet, face)?,
        FlipSite::ThreeTwo { tet, edge } => build_three_two(t, tet, edge.0, edge.1)?,
        FlipSite::FourOne { tet, vertex } => build_four_one(t, tet, vertex)?,
    };
    let (result, new_pos) = rebuild.apply(t)?;
    let inverse = match site {
        // the created center vertex sits at local 0 of new tet 0
        FlipSite::OneFour { .. } => FlipSite::FourOne {
            tet: new_pos[0],
            vertex: 0,
        },
        // the created edge joins locals 0,1 of new tet 0
        FlipSite::TwoThree { .. } => FlipSite::ThreeTwo {
            tet: new_pos[0],
            edge: (0, 1),
        },
        // the created face is face 0 of the first new tet
        FlipSite::ThreeTwo { .. } => FlipSite::TwoThree {
            tet: new_pos[0],
            face: 0,
        },
        FlipSite::FourOne { .. } => FlipSite::OneFour { tet: new_pos[0] },
    };
    Ok((result, inverse))
}

/// Complete, duplicate-free enumeration of applicable sites of one kind, in
/// canonical order (lexicographically minimal incidence per cell).
pub fn flip_sites(t: &Triangulation, kind: FlipKind) -> Vec<FlipSite> {
    let n = t.tet_count();
    let mut sites = Vec::new();
    match kind {
        FlipKind::OneFour => {
            for tet in 0..n {
                sites.push(FlipSite::OneFour { tet });
            }
        }
        FlipKind::TwoThree => {
            for tet in 0..n {
                for face in 0..4 {
                    if let Some(g) = t.tets()[tet][face] {
                        if g.tet != tet && (tet, face) < (g.tet, g.perm.apply_usize(face)) {
                            sites.push(FlipSite::TwoThree { tet, face });
                        }
                    }
                }
            }
        }
        FlipKind::ThreeTwo => {
            let mut skel = t.skeleton();
            let mut seen = std::collections::HashSet::new();
            for tet in 0..n {
                for (a, b) in super::UND_PAIRS {
                    let root = skel.und_edges.find(6 * tet + super::und_index(a, b));
                    if !seen.insert(root) {
                        continue;
                    }
                    let site = FlipSite::ThreeTwo { tet, edge: (a, b) };
                    if build_three_two(t, tet, a, b).is_ok() {
                        sites.push(site);
                    }
                }
            }
        }
        FlipKind::FourOne => {
            let mut skel = t.skeleton();
            let mut seen = std::collections::HashSet::new();
            for tet in 0..n {
                for v in 0..4u8 {
                    let root = skel.vertices.find(4 * tet + v as usize);
                    if !seen.insert(root) {
                        continue;
                    }
                    let site = FlipSite::FourOne { tet, vertex: v };
                    if build_four_one(t, tet, v).is_ok() {
                        sites.push(site);
                    }
                }
            }
        }
    }
    sites
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomplex::{isomorphic, pillow, SkeletonCounts};

    fn simplex() -> Triangulation {
        Triangulation::boundary_four_simplex()
    }

    #[test]
    fn two_three_on_simplex() {
        let t = simplex();
        let (r, inv) = flip_with_inverse(&t, FlipSite::TwoThree { tet: 0, face: 0 }).unwrap();
        assert_eq!(r.tet_count(), 6);
        let rep = r.validate();
        assert!(rep.valid(), "{}", rep.render_text());
        assert_eq!(
            r.skeleton_counts().unwrap(),
            SkeletonCounts {
                vertices: 5,
                edges: 11,
                faces: 12,
                tetrahedra: 6
            }
        );
        assert_eq!(r.associated_genus().unwrap(), 7);
        // inverse flip restores the simplex boundary up to isomorphism
        let back = flip(&r, inv).unwrap();
        assert!(back.is_valid());
        assert!(isomorphic(&back, &t));
    }

    #[test]
    fn one_four_on_simplex() {
        let t = simplex();
        let (r, inv) = flip_with_inverse(&t, FlipSite::OneFour { tet: 2 }).unwrap();
        assert_eq!(r.tet_count(), 8);
        assert!(r.is_valid());
        assert_eq!(
            r.skeleton_counts().unwrap(),
            SkeletonCounts {
                vertices: 6,
                edges: 14,
                faces: 16,
                tetrahedra: 8
            }
        );
        assert_eq!(r.associated_genus().unwrap(), 9);
        let back = flip(&r, inv).unwrap();
        assert!(isomorphic(&back, &t));
    }

    #[test]
    fn site_counts_on_simplex() {
        let t = simplex();
        assert_eq!(flip_sites(&t, FlipKind::OneFour).len(), 5);
        assert_eq!(flip_sites(&t, FlipKind::TwoThree).len(), 10);
        // every edge has degree 3 with distinct tetrahedra
        assert_eq!(flip_sites(&t, FlipKind::ThreeTwo).len(), 10);
        // every vertex star is standard: collapsing one gives the pillow
        let v_sites = flip_sites(&t, FlipKind::FourOne);
        assert_eq!(v_sites.len(), 5);
        let collapsed = flip(&t, v_sites[0]).unwrap();
        assert!(collapsed.is_valid());
        assert!(isomorphic(&collapsed, &pillow()));
    }

    #[test]
    fn one_four_on_pillow_gives_simplex_boundary() {
        let p = pillow();
        let r = flip(&p, FlipSite::OneFour { tet: 1 }).unwrap();
        assert!(r.is_valid());
        assert!(isomorphic(&r, &simplex()));
    }

    #[test]
    fn three_two_on_simplex_valid() {
        let t = simplex();
        for site in flip_sites(&t, FlipKind::ThreeTwo) {
            let (r, inv) = flip_with_inverse(&t, site).unwrap();
            assert!(r.is_valid(), "3-2 at {site} broke validity");
            assert_eq!(r.tet_count(), 4);
            assert_eq!(r.associated_genus().unwrap(), 5);
            let back = flip(&r, inv).unwrap();
            assert!(isomorphic(&back, &t));
        }
    }

    #[test]
    fn inapplicable_sites_error() {
        let t = simplex();
        // degree-4 edges appear after a 2-3 flip
        let r = flip(&t, FlipSite::TwoThree { tet: 0, face: 0 }).unwrap();
        let mut skel = r.skeleton();
        let mut found = false;
        for tet in 0..r.tet_count() {
            for (a, b) in crate::tricomplex::UND_PAIRS {
                let _ = skel.und_edges.find(6 * tet + crate::tricomplex::und_index(a, b));
                if let Err(TriError::Inapplicable(msg)) = build_three_two(&r, tet, a, b) {
                    if msg.contains("degree 4") {
                        found = true;
                    }
                }
            }
        }
        assert!(found, "expected some degree-4 edge after a 2-3 flip");
        // self-glued pair rejected for 2-3
        let p = pillow();
        let r14 = flip(&p, FlipSite::OneFour { tet: 0 }).unwrap();
        let _ = r14; // applicability errors already covered above
        assert!(matches!(
            flip(&t, FlipSite::TwoThree { tet: 9, face: 0 }),
            Err(TriError::Inapplicable(_))
        ));
    }

    #[test]
    fn random_flip_walk_stays_valid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut t = simplex();
        let mut genus = 6i64;
        for _ in 0..30 {
            let kinds = [
                FlipKind::OneFour,
                FlipKind::TwoThree,
                FlipKind::ThreeTwo,
                FlipKind::FourOne,
            ];
            let kind = kinds[rng.random_range(0..4)];
            let sites = flip_sites(&t, kind);
            if sites.is_empty() {
                continue;
            }
            let site = sites[rng.random_range(0..sites.len())];
            let before = t.skeleton_counts().unwrap();
            t = flip(&t, site).unwrap();
            let rep = t.validate();
            assert!(rep.valid(), "{site}: {}", rep.render_text());
            let after = t.skeleton_counts().unwrap();
            let d = kind.skeleton_delta();
            assert_eq!(after.vertices as i64 - before.vertices as i64, d.0);
            assert_eq!(after.edges as i64 - before.edges as i64, d.1);
            assert_eq!(after.faces as i64 - before.faces as i64, d.2);
            assert_eq!(after.tetrahedra as i64 - before.tetrahedra as i64, d.3);
            genus += kind.genus_delta();
            assert_eq!(t.associated_genus().unwrap() as i64, genus);
        }
    }
}
