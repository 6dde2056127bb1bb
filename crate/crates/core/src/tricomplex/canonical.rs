//! Canonical forms for triangulations.
//!
//! The signature is the lexicographically minimal gluing encoding over all
//! choices of start tetrahedron and frame. Discovery order relabels
//! tetrahedra; a newly discovered neighbor is framed so the discovering
//! gluing becomes the identity. Equal signatures characterize isomorphism,
//! and the minimizing relabeling doubles as an explicit isomorphism witness.

use super::{FlipSite, Gluing, Triangulation};
use crate::perm::Perm4;

/// A relabeling: old tetrahedron `t` maps to `tet_map[t]` with vertex
/// relabeling `vertex_maps[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriIso {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<Perm4>,
}

impl TriIso {
    pub fn identity(n: usize) -> TriIso {
        TriIso {
            tet_map: (0..n).collect(),
            vertex_maps: vec![Perm4::IDENTITY; n],
        }
    }

    pub fn inverse(&self) -> TriIso {
        let n = self.tet_map.len();
        let mut tet_map = vec![0usize; n];
        let mut vertex_maps = vec![Perm4::IDENTITY; n];
        for t in 0..n {
            tet_map[self.tet_map[t]] = t;
            vertex_maps[self.tet_map[t]] = self.vertex_maps[t].inverse();
        }
        TriIso {
            tet_map,
            vertex_maps,
        }
    }

    /// `self` after `first` (apply `first`, then `self`).
    pub fn compose(&self, first: &TriIso) -> TriIso {
        let n = first.tet_map.len();
        let mut tet_map = vec![0usize; n];
        let mut vertex_maps = vec![Perm4::IDENTITY; n];
        for t in 0..n {
            let mid = first.tet_map[t];
            tet_map[t] = self.tet_map[mid];
            vertex_maps[t] = self.vertex_maps[mid].compose(first.vertex_maps[t]);
        }
        TriIso {
            tet_map,
            vertex_maps,
        }
    }
}

const UNGLUED: u32 = 0;

fn encode_from(
    t: &Triangulation,
    start: usize,
    frame: Perm4,
    best: Option<&[u32]>,
) -> Option<(Vec<u32>, TriIso)> {
    let n = t.tet_count();
    let mut order: Vec<usize> = Vec::with_capacity(n); // new index -> old tet
    let mut new_of: Vec<Option<usize>> = vec![None; n];
    let mut frames: Vec<Perm4> = vec![Perm4::IDENTITY; n]; // old labels -> new labels
    order.push(start);
    new_of[start] = Some(0);
    frames[start] = frame;

    let mut enc: Vec<u32> = Vec::with_capacity(4 * n);
    // compare against the incumbent until this run is strictly better
    let mut comparing = best.is_some();
    let mut cursor = 0usize;
    while cursor < order.len() {
        let ot = order[cursor];
        let pi = frames[ot];
        let pi_inv = pi.inverse();
        for nf in 0..4u8 {
            let of = pi_inv.apply(nf);
            let code = match t.tets()[ot][of as usize] {
                None => UNGLUED,
                Some(Gluing { tet: j, perm: p }) => {
                    let nj = match new_of[j] {
                        Some(nj) => nj,
                        None => {
                            let nj = order.len();
                            new_of[j] = Some(nj);
                            frames[j] = pi.compose(p.inverse());
                            order.push(j);
                            nj
                        }
                    };
                    let q = frames[j].compose(p).compose(pi_inv);
                    1 + (nj as u32) * 24 + q.rank() as u32
                }
            };
            enc.push(code);
            if comparing {
                let best = best.unwrap();
                let i = enc.len() - 1;
                if enc[i] > best[i] {
                    return None;
                }
                if enc[i] < best[i] {
                    comparing = false;
                }
            }
        }
        cursor += 1;
    }
    if order.len() != n {
        return None; // disconnected: caller handles per component
    }
    let iso = TriIso {
        tet_map: (0..n).map(|t| new_of[t].unwrap()).collect(),
        vertex_maps: frames,
    };
    Some((enc, iso))
}

/// Canonical signature and the relabeling realizing it. Connected
/// triangulations only; disconnected input falls back to a stable but
/// start-dependent encoding per component, which still suffices for hashing.
pub fn canonical_iso(t: &Triangulation) -> (Vec<u32>, TriIso) {
    let n = t.tet_count();
    if n == 0 {
        return (Vec::new(), TriIso::identity(0));
    }
    let mut best: Option<(Vec<u32>, TriIso)> = None;
    for start in 0..n {
        for frame in Perm4::all() {
            let cand = encode_from(t, start, frame, best.as_ref().map(|(e, _)| e.as_slice()));
            if let Some((enc, iso)) = cand {
                let better = match &best {
                    None => true,
                    Some((b, _)) => enc < *b,
                };
                if better {
                    best = Some((enc, iso));
                }
            }
        }
    }
    match best {
        Some(found) => found,
        // disconnected: stable per-start encoding, enough for hashing
        None => {
            let mut enc = vec![u32::MAX];
            for start in 0..n {
                enc.push(start as u32);
            }
            for faces in t.tets() {
                for g in faces {
                    enc.push(match g {
                        None => UNGLUED,
                        Some(g) => 1 + (g.tet as u32) * 24 + g.perm.rank() as u32,
                    });
                }
            }
            (enc, TriIso::identity(n))
        }
    }
}

/// Canonical signature: equal signatures exactly characterize combinatorial
/// isomorphism for connected triangulations.
pub fn signature(t: &Triangulation) -> Vec<u32> {
    canonical_iso(t).0
}

pub fn isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    a.tet_count() == b.tet_count() && signature(a) == signature(b)
}

/// An explicit isomorphism from `a` to `b`, when one exists.
pub fn isomorphism(a: &Triangulation, b: &Triangulation) -> Option<TriIso> {
    if a.tet_count() != b.tet_count() {
        return None;
    }
    let (sig_a, iso_a) = canonical_iso(a);
    let (sig_b, iso_b) = canonical_iso(b);
    if sig_a != sig_b {
        return None;
    }
    Some(iso_b.inverse().compose(&iso_a))
}

/// Pushes a flip site through a relabeling.
pub fn transport_site(iso: &TriIso, site: FlipSite) -> FlipSite {
    match site {
        FlipSite::OneFour { tet } => FlipSite::OneFour {
            tet: iso.tet_map[tet],
        },
        FlipSite::TwoThree { tet, face } => FlipSite::TwoThree {
            tet: iso.tet_map[tet],
            face: iso.vertex_maps[tet].apply_usize(face),
        },
        FlipSite::ThreeTwo { tet, edge } => {
            let p = iso.vertex_maps[tet];
            let (a, b) = (p.apply(edge.0), p.apply(edge.1));
            FlipSite::ThreeTwo {
                tet: iso.tet_map[tet],
                edge: if a < b { (a, b) } else { (b, a) },
            }
        }
        FlipSite::FourOne { tet, vertex } => FlipSite::FourOne {
            tet: iso.tet_map[tet],
            vertex: iso.vertex_maps[tet].apply(vertex),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomplex::{flip, FlipKind, FlipSite};

    #[test]
    fn signature_is_relabeling_invariant() {
        let t = Triangulation::boundary_four_simplex();
        // flips at symmetric sites give isomorphic results
        let a = flip(&t, FlipSite::TwoThree { tet: 0, face: 0 }).unwrap();
        let b = flip(&t, FlipSite::TwoThree { tet: 1, face: 3 }).unwrap();
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &t));
    }

    #[test]
    fn isomorphism_maps_gluings() {
        let t = Triangulation::boundary_four_simplex();
        let a = flip(&t, FlipSite::TwoThree { tet: 0, face: 0 }).unwrap();
        let b = flip(&t, FlipSite::TwoThree { tet: 2, face: 1 }).unwrap();
        let iso = isomorphism(&a, &b).expect("isomorphic");
        // check structure preservation on every gluing
        for t0 in 0..a.tet_count() {
            for f in 0..4usize {
                let g = a.gluing(t0, f).unwrap();
                let (nt, np) = (iso.tet_map[t0], iso.vertex_maps[t0]);
                let nf = np.apply_usize(f);
                let img = b.gluing(nt, nf).unwrap();
                assert_eq!(img.tet, iso.tet_map[g.tet]);
                assert_eq!(
                    img.perm,
                    iso.vertex_maps[g.tet].compose(g.perm).compose(np.inverse())
                );
            }
        }
    }

    #[test]
    fn transported_sites_stay_applicable() {
        let t = Triangulation::boundary_four_simplex();
        let a = flip(&t, FlipSite::TwoThree { tet: 0, face: 0 }).unwrap();
        let b = flip(&t, FlipSite::TwoThree { tet: 3, face: 2 }).unwrap();
        let iso = isomorphism(&a, &b).unwrap();
        for site in crate::tricomplex::flip_sites(&a, FlipKind::ThreeTwo) {
            let moved = transport_site(&iso, site);
            let ra = flip(&a, site).unwrap();
            let rb = flip(&b, moved).unwrap();
            assert!(isomorphic(&ra, &rb));
        }
    }
}
