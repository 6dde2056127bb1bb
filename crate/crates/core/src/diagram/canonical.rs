//! Canonical forms for diagrams.
//!
//! Isomorphism allows relabeling crossings, permuting v-curves and w-curves
//! independently, and rotating cycles; signs and cyclic orders must match.
//! Each connected component is encoded from every possible start crossing
//! and the minimal encoding kept; component encodings are sorted, so the
//! signature is invariant under every relabeling.

use std::collections::HashMap;

use super::HeegaardDiagram;
use crate::unionfind::UnionFind;

type Enc = Vec<u64>;

const V_TAG: u64 = 1;
const W_TAG: u64 = 2;

fn component_encoding(d: &HeegaardDiagram, start: u64) -> Enc {
    let mut label: HashMap<u64, u64> = HashMap::new();
    let mut next = 0u64;
    let assign = |id: u64, label: &mut HashMap<u64, u64>, next: &mut u64| -> u64 {
        *label.entry(id).or_insert_with(|| {
            let l = *next;
            *next += 1;
            l
        })
    };
    assign(start, &mut label, &mut next);

    let mut enc: Enc = Vec::new();
    let mut done_v = vec![false; d.v_cycles().len()];
    let mut done_w = vec![false; d.w_cycles().len()];
    loop {
        // candidate curves: unprocessed, containing a labeled crossing;
        // pick the one whose smallest label is least, v beating w on ties
        let mut best: Option<(u64, u8, usize, usize)> = None; // (min label, tag, curve, rot)
        let mut consider = |cycles: &[Vec<u64>], done: &[bool], tag: u8| {
            for (ci, cyc) in cycles.iter().enumerate() {
                if done[ci] || !cyc.iter().any(|id| label.contains_key(id)) {
                    continue;
                }
                let (rot, min) = cyc
                    .iter()
                    .enumerate()
                    .filter_map(|(k, id)| label.get(id).map(|&l| (k, l)))
                    .min_by_key(|&(_, l)| l)
                    .map(|(k, l)| (k, l))
                    .unwrap();
                let cand = (min, tag, ci, rot);
                if best.map_or(true, |b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
        };
        consider(d.v_cycles(), &done_v, 1);
        consider(d.w_cycles(), &done_w, 2);
        let Some((_, tag, ci, rot)) = best else {
            break;
        };
        let (cyc, tag_code) = if tag == 1 {
            done_v[ci] = true;
            (&d.v_cycles()[ci], V_TAG)
        } else {
            done_w[ci] = true;
            (&d.w_cycles()[ci], W_TAG)
        };
        enc.push(tag_code);
        enc.push(cyc.len() as u64);
        for k in 0..cyc.len() {
            let id = cyc[(rot + k) % cyc.len()];
            let l = assign(id, &mut label, &mut next);
            enc.push(l);
        }
    }
    // signs by canonical label
    let mut signs = vec![0u64; label.len()];
    for (&id, &l) in &label {
        signs[l as usize] = if d.crossing(id).unwrap().sign == 1 { 1 } else { 2 };
    }
    enc.extend(signs);
    enc
}

/// Signature: genus, curve counts, then sorted minimal component encodings.
pub fn diagram_signature(d: &HeegaardDiagram) -> Enc {
    let n = d.crossing_count();
    let mut comp = UnionFind::new(n.max(1));
    let idx: HashMap<u64, usize> = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.id, i))
        .collect();
    for cyc in d.v_cycles().iter().chain(d.w_cycles()) {
        for k in 0..cyc.len() {
            comp.union(idx[&cyc[k]], idx[&cyc[(k + 1) % cyc.len()]]);
        }
    }
    let mut groups: HashMap<usize, Vec<u64>> = HashMap::new();
    for (i, c) in d.crossings().iter().enumerate() {
        groups.entry(comp.find(i)).or_default().push(c.id);
    }
    let mut comp_encs: Vec<Enc> = groups
        .values()
        .map(|members| {
            members
                .iter()
                .map(|&s| component_encoding(d, s))
                .min()
                .unwrap()
        })
        .collect();
    comp_encs.sort();
    let mut sig: Enc = vec![
        d.genus() as u64,
        d.v_cycles().len() as u64,
        d.w_cycles().len() as u64,
        n as u64,
    ];
    for e in comp_encs {
        sig.push(u64::MAX); // separator
        sig.extend(e);
    }
    sig
}

pub fn diagrams_isomorphic(a: &HeegaardDiagram, b: &HeegaardDiagram) -> bool {
    diagram_signature(a) == diagram_signature(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Crossing;

    #[test]
    fn relabeled_standard_is_isomorphic() {
        let d = HeegaardDiagram::standard_s3(3);
        // permute curve indices and crossing ids
        let e = HeegaardDiagram::new(
            3,
            vec![
                Crossing { id: 7, sign: 1, v: 2, w: 2 },
                Crossing { id: 9, sign: 1, v: 0, w: 0 },
                Crossing { id: 11, sign: 1, v: 1, w: 1 },
            ],
            vec![vec![9], vec![11], vec![7]],
            vec![vec![9], vec![11], vec![7]],
        )
        .unwrap();
        assert!(diagrams_isomorphic(&d, &e));
        assert!(!diagrams_isomorphic(&d, &HeegaardDiagram::standard_s3(2)));
    }

    #[test]
    fn sign_changes_break_isomorphism() {
        let d = HeegaardDiagram::standard_s3(1);
        let e = HeegaardDiagram::new(
            1,
            vec![Crossing { id: 0, sign: -1, v: 0, w: 0 }],
            vec![vec![0]],
            vec![vec![0]],
        )
        .unwrap();
        assert!(!diagrams_isomorphic(&d, &e));
    }

    #[test]
    fn cycle_rotation_is_invisible() {
        let a = HeegaardDiagram::new(
            1,
            vec![
                Crossing { id: 0, sign: 1, v: 0, w: 0 },
                Crossing { id: 1, sign: 1, v: 0, w: 0 },
            ],
            vec![vec![0, 1]],
            vec![vec![1, 0]],
        )
        .unwrap();
        let b = HeegaardDiagram::new(
            1,
            vec![
                Crossing { id: 0, sign: 1, v: 0, w: 0 },
                Crossing { id: 1, sign: 1, v: 0, w: 0 },
            ],
            vec![vec![1, 0]],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert!(diagrams_isomorphic(&a, &b));
    }
}
