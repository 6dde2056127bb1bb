//! Bounded exploration of the stabilization graph.
//!
//! Nodes are canonical diagram forms, edges are stabilizations (downward
//! endpoint recorded first). Exploration closes the seed under stabilize
//! and destabilize up to a genus cap. The explored subgraph must stay
//! acyclic: canonical forms may split one true class into several nodes,
//! so acyclicity is a one-sided test, but a cycle would be a bug.

use serde::{Deserialize, Serialize};

use super::Budget;
use crate::diagram::{
    destabilize, diagram_signature, find_destabilizable_pairs, stabilize, HeegaardDiagram,
};
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaNode {
    /// canonical form, rendered as a stable string key
    pub key: String,
    pub genus: usize,
    pub root: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaGraph {
    pub nodes: Vec<SigmaNode>,
    /// (lower node, higher node): each edge is one stabilization
    pub edges: Vec<(usize, usize)>,
    pub is_tree: bool,
    /// false when the node budget cut exploration short
    pub complete: bool,
}

impl SigmaGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph sigma {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if n.root { "doublecircle" } else { "circle" };
            out.push_str(&format!(
                "  n{i} [label=\"g={}\", shape={shape}];\n",
                n.genus
            ));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  n{a} -- n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn key_of(d: &HeegaardDiagram) -> String {
    let sig = diagram_signature(d);
    let parts: Vec<String> = sig.iter().map(|x| x.to_string()).collect();
    parts.join(".")
}

/// Breadth-first closure of `seed` under stabilize and destabilize, keyed by
/// canonical form, up to `max_genus` and the node budget.
pub fn sigma_explore(seed: &HeegaardDiagram, max_genus: usize, budget: Budget) -> SigmaGraph {
    use std::collections::HashMap;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut nodes: Vec<SigmaNode> = Vec::new();
    let mut reps: Vec<HeegaardDiagram> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_set: std::collections::HashSet<(usize, usize)> = Default::default();
    let mut complete = true;

    let intern =
        |d: &HeegaardDiagram, nodes: &mut Vec<SigmaNode>, reps: &mut Vec<HeegaardDiagram>, index: &mut HashMap<String, usize>| -> usize {
            let key = key_of(d);
            if let Some(&i) = index.get(&key) {
                return i;
            }
            let i = nodes.len();
            index.insert(key.clone(), i);
            nodes.push(SigmaNode {
                key,
                genus: d.genus(),
                root: false,
            });
            reps.push(d.clone());
            i
        };

    let root = intern(seed, &mut nodes, &mut reps, &mut index);
    nodes[root].root = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut seen = std::collections::HashSet::from([root]);

    while let Some(i) = queue.pop_front() {
        if nodes.len() > budget.max_nodes {
            complete = false;
            break;
        }
        let d = reps[i].clone();
        let mut nbrs: Vec<(usize, usize)> = Vec::new(); // (lower, higher)
        if d.genus() < max_genus {
            let up = stabilize(&d);
            let j = intern(&up, &mut nodes, &mut reps, &mut index);
            nbrs.push((i, j));
        }
        for p in find_destabilizable_pairs(&d) {
            if let Ok(down) = destabilize(&d, p) {
                let j = intern(&down, &mut nodes, &mut reps, &mut index);
                nbrs.push((j, i));
            }
        }
        for (lo, hi) in nbrs {
            if edge_set.insert((lo, hi)) {
                edges.push((lo, hi));
            }
            for j in [lo, hi] {
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
    }

    // acyclicity over the explored subgraph
    let mut uf = UnionFind::new(nodes.len());
    let mut is_tree = true;
    for &(a, b) in &edges {
        if !uf.union(a, b) {
            is_tree = false;
        }
    }
    SigmaGraph {
        nodes,
        edges,
        is_tree,
        complete,
    }
}
