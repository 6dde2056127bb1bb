//! Pseudo-triangulations of closed orientable 3-manifolds.
//!
//! A triangulation is a list of tetrahedra with face gluings. Face `f` of a
//! tetrahedron is the face opposite vertex `f`; a gluing names the target
//! tetrahedron and a vertex permutation carrying face `f` to the image face
//! (the permutation sends `f` to the vertex opposite the image face). The
//! quotient space is a closed 3-manifold exactly when the validity checks
//! here pass. Tetrahedra may share cells and cells may be identified, so
//! simplicial complexes are a special case recognized by an on-demand check.

mod canonical;
mod flips;
mod format;
mod subdivide;

pub use canonical::{canonical_iso, isomorphic, isomorphism, signature, transport_site, TriIso};
pub use flips::{flip, flip_sites, flip_with_inverse, FlipKind, FlipSite};
pub use format::{parse_tri, write_tri};
pub use subdivide::{barycentric_subdivision, barycentric_subdivision_once};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;
use crate::report::ValidityReport;
use crate::unionfind::UnionFind;

#[derive(Debug, Error)]
pub enum TriError {
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("flip site not applicable: {0}")]
    Inapplicable(String),
    #[error("quotient 1-skeleton is disconnected")]
    Disconnected,
    #[error("invalid triangulation: {0}")]
    Invalid(String),
}

/// One face gluing: target tetrahedron and vertex permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

pub type TetFaces = [Option<Gluing>; 4];

#[derive(Clone, Debug)]
pub struct Triangulation {
    name: String,
    tets: Vec<TetFaces>,
}

/// Cell counts of the quotient complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonCounts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub tetrahedra: usize,
}

impl SkeletonCounts {
    pub fn euler(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 - self.tetrahedra as i64
    }
}

// Ordered pairs (a,b), a != b, in lexicographic order.
const DIR_PAIRS: [(u8, u8); 12] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 3),
    (3, 0),
    (3, 1),
    (3, 2),
];

// Unordered pairs a < b.
const UND_PAIRS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn dir_index(a: u8, b: u8) -> usize {
    DIR_PAIRS.iter().position(|&p| p == (a, b)).unwrap()
}

fn und_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    UND_PAIRS.iter().position(|&p| p == (a, b)).unwrap()
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.tets == other.tets
    }
}
impl Eq for Triangulation {}

impl Triangulation {
    pub fn new(name: impl Into<String>, tets: Vec<TetFaces>) -> Triangulation {
        Triangulation {
            name: name.into(),
            tets,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    pub fn tets(&self) -> &[TetFaces] {
        &self.tets
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<Gluing> {
        self.tets[tet][face]
    }

    /// The boundary of the 4-simplex: five tetrahedra, every pair glued
    /// along their shared face. Tetrahedron `i` stands for the vertex set
    /// {0..4} minus point `i`, with local labels in ascending point order.
    pub fn boundary_four_simplex() -> Triangulation {
        // global point held by local label k of tet i
        let point = |i: usize, k: usize| if k < i { k } else { k + 1 };
        let local = |i: usize, q: usize| if q < i { q } else { q - 1 };
        let mut tets: Vec<TetFaces> = vec![[None; 4]; 5];
        for i in 0..5 {
            for k in 0..4 {
                let j = point(i, k); // face k of tet i is shared with tet j
                let mut im = [0u8; 4];
                for l in 0..4 {
                    im[l] = if l == k {
                        local(j, i) as u8
                    } else {
                        local(j, point(i, l)) as u8
                    };
                }
                tets[i][k] = Some(Gluing {
                    tet: j,
                    perm: Perm4::new(im).unwrap(),
                });
            }
        }
        Triangulation::new("boundary-4-simplex", tets)
    }

    /// Index bounds only; bad indices are structural failures.
    pub fn structure_error(&self) -> Option<String> {
        if self.tets.is_empty() {
            return Some("no tetrahedra".to_string());
        }
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if let Some(g) = g {
                    if g.tet >= self.tets.len() {
                        return Some(format!(
                            "gluing of face ({t},{f}) targets tetrahedron {} out of range",
                            g.tet
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> ValidityReport {
        self.validate_opts(false)
    }

    /// Full validity report; `embedding` additionally runs the simplicial
    /// (open cells embed into a simplicial complex) check.
    pub fn validate_opts(&self, embedding: bool) -> ValidityReport {
        let mut rep = ValidityReport::new();
        if let Some(err) = self.structure_error() {
            rep.fail("structure", err);
            return rep;
        }
        rep.pass("structure");

        let closed = self.check_closed(&mut rep);
        let involutive = self.check_involutive(&mut rep);
        self.check_connected(&mut rep);
        self.check_orientable(&mut rep);

        if closed && involutive {
            let skel = self.skeleton();
            self.check_edge_links(&skel, &mut rep);
            self.check_vertex_links(&skel, &mut rep);
            let chi = skel.counts.euler();
            rep.record("euler", chi == 0, format!("chi = {chi}, expected 0"));
            if embedding {
                self.check_simplicial(&skel, &mut rep);
            }
        } else {
            rep.fail("edge_links", "skipped: requires closed involutive gluings");
            rep.fail("vertex_links", "skipped: requires closed involutive gluings");
            rep.fail("euler", "skipped: requires closed involutive gluings");
            if embedding {
                rep.fail("simplicial", "skipped: requires closed involutive gluings");
            }
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid()
    }

    fn check_closed(&self, rep: &mut ValidityReport) -> bool {
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if g.is_none() {
                    rep.fail("closed", format!("face ({t},{f}) is unglued"));
                    return false;
                }
            }
        }
        rep.pass("closed");
        true
    }

    fn check_involutive(&self, rep: &mut ValidityReport) -> bool {
        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Some(g) = g else { continue };
                let img_face = g.perm.apply_usize(f);
                if g.tet == t && img_face == f {
                    rep.fail("involutive", format!("face ({t},{f}) glued to itself"));
                    return false;
                }
                let back = self.tets[g.tet][img_face];
                let expected = Gluing {
                    tet: t,
                    perm: g.perm.inverse(),
                };
                if back != Some(expected) {
                    rep.fail(
                        "involutive",
                        format!("gluing of ({t},{f}) is not mirrored by ({},{img_face})", g.tet),
                    );
                    return false;
                }
            }
        }
        rep.pass("involutive");
        true
    }

    fn check_connected(&self, rep: &mut ValidityReport) {
        let mut uf = UnionFind::new(self.tets.len());
        for (t, faces) in self.tets.iter().enumerate() {
            for g in faces.iter().flatten() {
                uf.union(t, g.tet);
            }
        }
        rep.record(
            "connected",
            uf.class_count() == 1,
            format!("{} gluing components", uf.class_count()),
        );
    }

    /// Orientations exist iff tetrahedra can be signed so that every gluing
    /// permutation reverses orientation: o(target) = -sign(perm) * o(source).
    fn check_orientable(&self, rep: &mut ValidityReport) {
        let mut color: Vec<i8> = vec![0; self.tets.len()];
        for start in 0..self.tets.len() {
            if color[start] != 0 {
                continue;
            }
            color[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for g in self.tets[t].iter().flatten() {
                    let want = -g.perm.sign() * color[t];
                    if color[g.tet] == 0 {
                        color[g.tet] = want;
                        stack.push(g.tet);
                    } else if color[g.tet] != want {
                        rep.fail(
                            "orientable",
                            format!("orientation conflict at tetrahedron {}", g.tet),
                        );
                        return;
                    }
                }
            }
        }
        rep.pass("orientable");
    }

    /// An edge link is a circle iff no directed edge is identified with its
    /// own reverse; the incidence ring around each quotient edge then closes.
    fn check_edge_links(&self, skel: &Skeleton, rep: &mut ValidityReport) {
        let mut dir = skel.dir_edges.clone();
        for t in 0..self.tets.len() {
            for (a, b) in DIR_PAIRS {
                let fwd = 12 * t + dir_index(a, b);
                let rev = 12 * t + dir_index(b, a);
                if dir.same(fwd, rev) {
                    rep.fail(
                        "edge_links",
                        format!("edge ({t},{a},{b}) is identified with its reverse"),
                    );
                    return;
                }
            }
        }
        rep.pass("edge_links");
    }

    /// Vertex links are spheres iff each link surface has Euler
    /// characteristic 2. Per vertex class: one link triangle per incidence,
    /// 3/2 link edges per triangle, and one link vertex per directed edge
    /// class based at the vertex.
    fn check_vertex_links(&self, skel: &Skeleton, rep: &mut ValidityReport) {
        let n = self.tets.len();
        let mut vuf = skel.vertices.clone();
        let mut duf = skel.dir_edges.clone();

        let mut tri_count = vec![0usize; 4 * n];
        for t in 0..n {
            for v in 0..4 {
                let root = vuf.find(4 * t + v);
                tri_count[root] += 1;
            }
        }
        // distinct directed-edge classes whose source vertex lies in each class
        let mut corner_count = vec![0usize; 4 * n];
        let mut seen_dir = vec![false; 12 * n];
        for t in 0..n {
            for (a, b) in DIR_PAIRS {
                let d = duf.find(12 * t + dir_index(a, b));
                if seen_dir[d] {
                    continue;
                }
                seen_dir[d] = true;
                let src = vuf.find(4 * t + a as usize);
                corner_count[src] += 1;
            }
        }
        for t in 0..n {
            for v in 0..4 {
                let root = vuf.find(4 * t + v);
                if root != 4 * t + v {
                    continue;
                }
                let f = tri_count[root] as i64;
                if (3 * f) % 2 != 0 {
                    rep.fail("vertex_links", format!("vertex ({t},{v}): odd link edge count"));
                    return;
                }
                let chi = corner_count[root] as i64 - (3 * f) / 2 + f;
                if chi != 2 {
                    rep.fail(
                        "vertex_links",
                        format!("vertex ({t},{v}): link has chi = {chi}, expected 2"),
                    );
                    return;
                }
            }
        }
        rep.pass("vertex_links");
    }

    /// Simplicial check: every tetrahedron has four distinct quotient
    /// vertices and every quotient cell is determined by its vertex set.
    fn check_simplicial(&self, skel: &Skeleton, rep: &mut ValidityReport) {
        use std::collections::HashMap;
        let n = self.tets.len();
        let mut vuf = skel.vertices.clone();
        let mut euf = skel.und_edges.clone();

        let mut tet_sets: HashMap<[usize; 4], usize> = HashMap::new();
        for t in 0..n {
            let mut vs = [0usize; 4];
            for v in 0..4 {
                vs[v] = vuf.find(4 * t + v);
            }
            let mut sorted = vs;
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                rep.fail("simplicial", format!("tetrahedron {t} has repeated vertices"));
                return;
            }
            if let Some(&other) = tet_sets.get(&sorted) {
                rep.fail(
                    "simplicial",
                    format!("tetrahedra {other} and {t} span the same vertices"),
                );
                return;
            }
            tet_sets.insert(sorted, t);
        }
        // distinct edges must have distinct endpoint pairs
        let mut edge_sets: HashMap<(usize, usize), usize> = HashMap::new();
        for t in 0..n {
            for (a, b) in UND_PAIRS {
                let class = euf.find(6 * t + und_index(a, b));
                let mut ends = (
                    vuf.find(4 * t + a as usize),
                    vuf.find(4 * t + b as usize),
                );
                if ends.0 > ends.1 {
                    ends = (ends.1, ends.0);
                }
                if let Some(&c) = edge_sets.get(&ends) {
                    if c != class {
                        rep.fail(
                            "simplicial",
                            format!("two edges share endpoints at tetrahedron {t}"),
                        );
                        return;
                    }
                } else {
                    edge_sets.insert(ends, class);
                }
            }
        }
        // distinct faces must have distinct vertex triples
        let mut face_sets: HashMap<[usize; 3], (usize, usize)> = HashMap::new();
        for t in 0..n {
            for f in 0..4 {
                let mut tri = [0usize; 3];
                let mut k = 0;
                for v in 0..4 {
                    if v != f {
                        tri[k] = vuf.find(4 * t + v);
                        k += 1;
                    }
                }
                tri.sort_unstable();
                // canonical representative of the quotient face (glued pair)
                let class = match self.tets[t][f] {
                    Some(g) => (t, f).min((g.tet, g.perm.apply_usize(f))),
                    None => (t, f),
                };
                if let Some(&other) = face_sets.get(&tri) {
                    if other != class {
                        rep.fail(
                            "simplicial",
                            format!("two faces span the same vertices near tetrahedron {t}"),
                        );
                        return;
                    }
                } else {
                    face_sets.insert(tri, class);
                }
            }
        }
        rep.pass("simplicial");
    }

    pub(crate) fn skeleton(&self) -> Skeleton {
        let n = self.tets.len();
        let mut vertices = UnionFind::new(4 * n);
        let mut und_edges = UnionFind::new(6 * n);
        let mut dir_edges = UnionFind::new(12 * n);
        let mut face_count = 0usize;

        for (t, faces) in self.tets.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Some(g) = g else {
                    face_count += 1;
                    continue;
                };
                let img = g.perm.apply_usize(f);
                if (g.tet, img) >= (t, f) {
                    face_count += 1;
                }
                for v in 0..4u8 {
                    if v as usize == f {
                        continue;
                    }
                    vertices.union(4 * t + v as usize, 4 * g.tet + g.perm.apply(v) as usize);
                }
                for (a, b) in DIR_PAIRS {
                    if a as usize == f || b as usize == f {
                        continue;
                    }
                    dir_edges.union(
                        12 * t + dir_index(a, b),
                        12 * g.tet + dir_index(g.perm.apply(a), g.perm.apply(b)),
                    );
                    if a < b {
                        und_edges.union(
                            6 * t + und_index(a, b),
                            6 * g.tet + und_index(g.perm.apply(a), g.perm.apply(b)),
                        );
                    }
                }
            }
        }

        let counts = SkeletonCounts {
            vertices: vertices.class_count(),
            edges: und_edges.class_count(),
            faces: face_count,
            tetrahedra: n,
        };
        Skeleton {
            vertices,
            und_edges,
            dir_edges,
            counts,
        }
    }

    /// Quotient cell counts; requires sound structure.
    pub fn skeleton_counts(&self) -> Result<SkeletonCounts, TriError> {
        if let Some(err) = self.structure_error() {
            return Err(TriError::Structural(err));
        }
        Ok(self.skeleton().counts)
    }

    /// Genus of the splitting surface bounding a regular neighborhood of the
    /// quotient 1-skeleton: its first Betti number, edges - vertices + 1.
    pub fn associated_genus(&self) -> Result<usize, TriError> {
        if let Some(err) = self.structure_error() {
            return Err(TriError::Structural(err));
        }
        let skel = self.skeleton();
        // connectivity of the 1-skeleton via edge endpoints
        let n = self.tets.len();
        let mut vuf = skel.vertices.clone();
        for t in 0..n {
            for (a, b) in UND_PAIRS {
                vuf.union(4 * t + a as usize, 4 * t + b as usize);
            }
        }
        if vuf.class_count() != 1 {
            return Err(TriError::Disconnected);
        }
        Ok(skel.counts.edges + 1 - skel.counts.vertices)
    }
}

pub(crate) struct Skeleton {
    pub vertices: UnionFind,
    pub und_edges: UnionFind,
    pub dir_edges: UnionFind,
    pub counts: SkeletonCounts,
}

/// Two tetrahedra glued along all four faces by the identity; the smallest
/// valid closed complex, used as a fixture across the crate's tests.
#[cfg(test)]
pub(crate) fn pillow() -> Triangulation {
    let mut tets: Vec<TetFaces> = vec![[None; 4]; 2];
    for f in 0..4 {
        tets[0][f] = Some(Gluing {
            tet: 1,
            perm: Perm4::IDENTITY,
        });
        tets[1][f] = Some(Gluing {
            tet: 0,
            perm: Perm4::IDENTITY,
        });
    }
    Triangulation::new("pillow", tets)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent construction of the 4-simplex boundary: enumerate the
    /// 4-subsets of {0..4} and their shared 3-subsets.
    fn simplex_oracle() -> Vec<[Option<Gluing>; 4]> {
        let subsets: Vec<Vec<usize>> = (0..5)
            .map(|i| (0..5).filter(|&q| q != i).collect())
            .collect();
        let mut tets: Vec<TetFaces> = vec![[None; 4]; 5];
        for i in 0..5 {
            for k in 0..4 {
                let dropped = subsets[i][k];
                let shared: Vec<usize> = subsets[i]
                    .iter()
                    .copied()
                    .filter(|&q| q != dropped)
                    .collect();
                // the unique other tetrahedron containing the shared triple
                let j = (0..5)
                    .find(|&j| j != i && shared.iter().all(|q| subsets[j].contains(q)))
                    .unwrap();
                let mut im = [0u8; 4];
                for l in 0..4 {
                    let q = if l == k { i } else { subsets[i][l] };
                    im[l] = subsets[j].iter().position(|&x| x == q).unwrap() as u8;
                }
                tets[i][k] = Some(Gluing {
                    tet: j,
                    perm: Perm4::new(im).unwrap(),
                });
            }
        }
        tets
    }

    #[test]
    fn boundary_four_simplex_matches_subset_enumeration() {
        let t = Triangulation::boundary_four_simplex();
        assert_eq!(t.tets(), simplex_oracle().as_slice());
    }

    #[test]
    fn boundary_four_simplex_counts_and_genus() {
        let t = Triangulation::boundary_four_simplex();
        let rep = t.validate();
        assert!(rep.valid(), "{}", rep.render_text());
        assert_eq!(
            t.skeleton_counts().unwrap(),
            SkeletonCounts {
                vertices: 5,
                edges: 10,
                faces: 10,
                tetrahedra: 5
            }
        );
        assert_eq!(t.associated_genus().unwrap(), 6);
    }

    #[test]
    fn unglued_tetrahedron_fails_closedness() {
        let t = Triangulation::new("open", vec![[None; 4]]);
        let rep = t.validate();
        assert!(!rep.valid());
        assert!(!rep.passed("closed"));
    }

    #[test]
    fn non_involutive_gluing_fails() {
        // glue (0,0) -> (1,0) but answer (1,0) -> (1,...) inconsistently
        let g01 = Gluing {
            tet: 1,
            perm: Perm4::IDENTITY,
        };
        let bad = Gluing {
            tet: 1,
            perm: Perm4::transposition(2, 3),
        };
        let t = Triangulation::new(
            "bad",
            vec![[Some(g01), None, None, None], [Some(bad), None, None, None]],
        );
        let rep = t.validate();
        assert!(!rep.passed("involutive"));
    }

    use super::pillow;

    #[test]
    fn pillow_is_valid_but_not_simplicial() {
        let t = pillow();
        let rep = t.validate_opts(true);
        assert!(!rep.valid());
        assert!(rep.passed("closed"));
        assert!(rep.passed("edge_links"));
        assert!(rep.passed("vertex_links"));
        assert!(rep.passed("euler"));
        assert!(!rep.passed("simplicial"));
        // all checks except simplicial pass
        assert!(rep
            .checks
            .iter()
            .all(|c| c.pass || c.name == "simplicial"));
        assert_eq!(
            t.skeleton_counts().unwrap(),
            SkeletonCounts {
                vertices: 4,
                edges: 6,
                faces: 4,
                tetrahedra: 2
            }
        );
        assert_eq!(t.associated_genus().unwrap(), 3);
    }

    #[test]
    fn simplex_boundary_is_simplicial() {
        let t = Triangulation::boundary_four_simplex();
        assert!(t.validate_opts(true).valid());
    }
}
