//! The rotation-system view of a diagram.
//!
//! Each crossing is a 4-valent vertex with ports 0 = v-out, 1 = w-out,
//! 2 = v-in, 3 = w-in: curve cycles enter at the in-port and leave at the
//! out-port of their kind. The counterclockwise port order is 0,1,2,3 at a
//! +1 crossing and 0,3,2,1 at a -1 crossing. Arcs join consecutive crossings
//! along a cycle; faces are the orbits of next = rotate-after-crossing.
//!
//! A diagram may be disconnected. Each component fills a closed surface of
//! its own genus; the ambient surface is the connect sum of the components
//! in ascending order of smallest crossing id, tubed through each
//! component's lowest-index face. Total genus must match the declared genus.

use std::collections::HashMap;

use super::{DiagError, HeegaardDiagram};
use crate::unionfind::UnionFind;

pub(crate) const V_OUT: usize = 0;
pub(crate) const W_OUT: usize = 1;
pub(crate) const V_IN: usize = 2;
pub(crate) const W_IN: usize = 3;

#[derive(Clone, Debug)]
pub(crate) struct DiagramMap {
    pub idx_of_id: HashMap<u64, usize>,
    /// other end of the arc at this dart
    pub alpha: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    pub face_of_dart: Vec<usize>,
    pub comp_count: usize,
    pub comp_genus: Vec<usize>,
    /// tube between consecutive components: (face, face)
    pub tubes: Vec<(usize, usize)>,
    /// faces joined into one region by the connect-sum tubes
    pub face_cluster: Vec<usize>,
}

impl DiagramMap {
    pub fn total_genus(&self) -> usize {
        self.comp_genus.iter().sum()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn dart(&self, crossing_idx: usize, port: usize) -> usize {
        4 * crossing_idx + port
    }
}

pub(crate) fn build_map(d: &HeegaardDiagram) -> Result<DiagramMap, DiagError> {
    let n = d.crossings().len();
    let mut idx_of_id = HashMap::with_capacity(n);
    for (i, c) in d.crossings().iter().enumerate() {
        if idx_of_id.insert(c.id, i).is_some() {
            return Err(DiagError::Structure(format!("duplicate crossing id {}", c.id)));
        }
    }
    let mut alpha = vec![usize::MAX; 4 * n];
    let mut comp = UnionFind::new(n.max(1));
    let mut seen_v = vec![false; n];
    let mut seen_w = vec![false; n];

    for (ci, cyc) in d.v_cycles().iter().enumerate() {
        if cyc.is_empty() {
            return Err(DiagError::Structure(format!("v-curve {ci} has no crossings")));
        }
        for (k, &id) in cyc.iter().enumerate() {
            let a = *idx_of_id
                .get(&id)
                .ok_or_else(|| DiagError::Structure(format!("unknown crossing id {id}")))?;
            let b = *idx_of_id.get(&cyc[(k + 1) % cyc.len()]).unwrap_or(&usize::MAX);
            if b == usize::MAX {
                return Err(DiagError::Structure("unknown crossing id in cycle".into()));
            }
            if d.crossings()[a].v != ci {
                return Err(DiagError::Structure(format!(
                    "crossing {id} sits in v-cycle {ci} but records v = {}",
                    d.crossings()[a].v
                )));
            }
            if seen_v[a] {
                return Err(DiagError::Structure(format!(
                    "crossing {id} appears twice along v-curves"
                )));
            }
            seen_v[a] = true;
            alpha[4 * a + V_OUT] = 4 * b + V_IN;
            alpha[4 * b + V_IN] = 4 * a + V_OUT;
            comp.union(a, b);
        }
    }
    for (ci, cyc) in d.w_cycles().iter().enumerate() {
        if cyc.is_empty() {
            return Err(DiagError::Structure(format!("w-curve {ci} has no crossings")));
        }
        for (k, &id) in cyc.iter().enumerate() {
            let a = *idx_of_id
                .get(&id)
                .ok_or_else(|| DiagError::Structure(format!("unknown crossing id {id}")))?;
            let b = *idx_of_id.get(&cyc[(k + 1) % cyc.len()]).unwrap();
            if d.crossings()[a].w != ci {
                return Err(DiagError::Structure(format!(
                    "crossing {id} sits in w-cycle {ci} but records w = {}",
                    d.crossings()[a].w
                )));
            }
            if seen_w[a] {
                return Err(DiagError::Structure(format!(
                    "crossing {id} appears twice along w-curves"
                )));
            }
            seen_w[a] = true;
            alpha[4 * a + W_OUT] = 4 * b + W_IN;
            alpha[4 * b + W_IN] = 4 * a + W_OUT;
            comp.union(a, b);
        }
    }
    for i in 0..n {
        if !seen_v[i] || !seen_w[i] {
            return Err(DiagError::Structure(format!(
                "crossing {} missing from a v- or w-cycle",
                d.crossings()[i].id
            )));
        }
        let c = &d.crossings()[i];
        if c.v >= d.v_cycles().len() || c.w >= d.w_cycles().len() {
            return Err(DiagError::Structure(format!("crossing {} references missing curve", c.id)));
        }
        if c.sign != 1 && c.sign != -1 {
            return Err(DiagError::Structure(format!("crossing {} has sign {}", c.id, c.sign)));
        }
    }

    let mut rotate = vec![usize::MAX; 4 * n];
    for (i, c) in d.crossings().iter().enumerate() {
        for p in 0..4 {
            let next = if c.sign == 1 { (p + 1) % 4 } else { (p + 3) % 4 };
            rotate[4 * i + p] = 4 * i + next;
        }
    }

    // faces: orbits of rotate . alpha
    let mut face_of_dart = vec![usize::MAX; 4 * n];
    let mut faces = Vec::new();
    for start in 0..4 * n {
        if face_of_dart[start] != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut orbit = Vec::new();
        let mut d0 = start;
        loop {
            face_of_dart[d0] = f;
            orbit.push(d0);
            d0 = rotate[alpha[d0]];
            if d0 == start {
                break;
            }
        }
        faces.push(orbit);
    }

    // components in ascending order of smallest crossing id
    let mut comp_root_to_idx: HashMap<usize, usize> = HashMap::new();
    let mut comp_of = vec![0usize; n];
    // crossings are stored sorted by id, so first occurrence = min id
    for i in 0..n {
        let root = comp.find(i);
        let next = comp_root_to_idx.len();
        let idx = *comp_root_to_idx.entry(root).or_insert(next);
        comp_of[i] = idx;
    }
    let comp_count = comp_root_to_idx.len();

    let mut comp_v = vec![0usize; comp_count];
    let mut comp_f = vec![0usize; comp_count];
    for i in 0..n {
        comp_v[comp_of[i]] += 1;
    }
    for orbit in &faces {
        let c = comp_of[orbit[0] / 4];
        comp_f[c] += 1;
    }
    let mut comp_genus = vec![0usize; comp_count];
    for c in 0..comp_count {
        let chi = comp_v[c] as i64 - 2 * comp_v[c] as i64 + comp_f[c] as i64;
        let two_g = 2 - chi;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(DiagError::Structure(format!(
                "component {c} has inconsistent Euler characteristic {chi}"
            )));
        }
        comp_genus[c] = (two_g / 2) as usize;
    }

    // lowest face index of each component
    let mut comp_low_face = vec![usize::MAX; comp_count];
    for (fi, orbit) in faces.iter().enumerate() {
        let c = comp_of[orbit[0] / 4];
        if comp_low_face[c] == usize::MAX {
            comp_low_face[c] = fi;
        }
    }
    let mut tubes = Vec::new();
    for c in 1..comp_count {
        tubes.push((comp_low_face[c - 1], comp_low_face[c]));
    }
    let mut cluster = UnionFind::new(faces.len().max(1));
    for &(a, b) in &tubes {
        cluster.union(a, b);
    }
    let face_cluster = (0..faces.len()).map(|f| cluster.find(f)).collect();

    Ok(DiagramMap {
        idx_of_id,
        alpha,
        faces,
        face_of_dart,
        comp_count,
        comp_genus,
        tubes,
        face_cluster,
    })
}

/// Connectivity of the surface cut along all v-curves: faces joined across
/// w-arcs and connect-sum tubes must form a single region.
pub(crate) fn cut_along_v_connected(d: &HeegaardDiagram, map: &DiagramMap) -> bool {
    if map.faces.is_empty() {
        return true;
    }
    let mut uf = UnionFind::new(map.faces.len());
    for (i, _) in d.crossings().iter().enumerate() {
        let out = map.dart(i, W_OUT);
        let (fa, fb) = (map.face_of_dart[out], map.face_of_dart[map.alpha[out]]);
        uf.union(fa, fb);
    }
    for &(a, b) in &map.tubes {
        uf.union(a, b);
    }
    uf.class_count() == 1
}

