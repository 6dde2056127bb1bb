//! Barycentric subdivision.
//!
//! Each tetrahedron splits into 24 sub-tetrahedra, one per flag
//! (vertex < edge < face < tetrahedron), encoded by the permutation
//! sigma = (a,b,c,d): vertex a, edge {a,b}, face {a,b,c}. Sub-tetrahedron
//! locals are 0 = vertex, 1 = edge midpoint, 2 = face center, 3 = center.
//! All gluings in the subdivision are identities on these locals.

use super::{Gluing, TetFaces, TriError, Triangulation};
use crate::perm::Perm4;

/// One barycentric subdivision: 24 tetrahedra per input tetrahedron.
pub fn barycentric_subdivision_once(t: &Triangulation) -> Result<Triangulation, TriError> {
    if let Some(err) = t.structure_error() {
        return Err(TriError::Structural(err));
    }
    let n = t.tet_count();
    let sub = |tet: usize, sigma: Perm4| -> usize { tet * 24 + sigma.rank() as usize };
    let mut tets: Vec<TetFaces> = vec![[None; 4]; 24 * n];

    for tet in 0..n {
        for sigma in Perm4::all() {
            let idx = sub(tet, sigma);
            // swap positions k,k+1 of the flag: the neighbor across face k
            for k in 0..3u8 {
                let tau = Perm4::transposition(k, k + 1);
                let partner = sigma.compose(tau);
                tets[idx][k as usize] = Some(Gluing {
                    tet: sub(tet, partner),
                    perm: Perm4::IDENTITY,
                });
            }
            // face 3 lies on the old face opposite sigma(3)
            let old_face = sigma.apply(3);
            if let Some(g) = t.tets()[tet][old_face as usize] {
                let image_flag = g.perm.compose(sigma);
                tets[idx][3] = Some(Gluing {
                    tet: sub(g.tet, image_flag),
                    perm: Perm4::IDENTITY,
                });
            }
        }
    }
    Ok(Triangulation::new(t.name().to_string(), tets))
}

/// Iterated barycentric subdivision; `times >= 1`.
pub fn barycentric_subdivision(t: &Triangulation, times: usize) -> Result<Triangulation, TriError> {
    if times == 0 {
        return Err(TriError::Invalid("subdivision count must be at least 1".into()));
    }
    let mut cur = barycentric_subdivision_once(t)?;
    for _ in 1..times {
        cur = barycentric_subdivision_once(&cur)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tricomplex::pillow;

    #[test]
    fn simplex_boundary_subdivides() {
        let t = Triangulation::boundary_four_simplex();
        let s = barycentric_subdivision(&t, 1).unwrap();
        assert_eq!(s.tet_count(), 120);
        let rep = s.validate();
        assert!(rep.valid(), "{}", rep.render_text());
        assert_eq!(s.skeleton_counts().unwrap().euler(), 0);
    }

    #[test]
    fn pillow_subdivision_valid_and_second_is_simplicial() {
        let p = pillow();
        let s1 = barycentric_subdivision(&p, 1).unwrap();
        assert_eq!(s1.tet_count(), 48);
        assert!(s1.validate().valid());
        let s2 = barycentric_subdivision_once(&s1).unwrap();
        let rep = s2.validate_opts(true);
        assert!(rep.valid(), "{}", rep.render_text());
    }

    #[test]
    fn zero_times_rejected() {
        let t = Triangulation::boundary_four_simplex();
        assert!(barycentric_subdivision(&t, 0).is_err());
    }
}
