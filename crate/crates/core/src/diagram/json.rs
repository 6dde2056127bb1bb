//! Canonical JSON for diagrams.
//!
//! ```json
//! {"crossings": [{"id": 0, "sign": 1, "v": 0, "w": 0}],
//!  "genus": 1, "v_cycles": [[0]], "w_cycles": [[0]]}
//! ```
//!
//! Keys are emitted in sorted order and crossings sorted by id, so writing
//! is canonical and `write . read` is the identity on canonical text.

use serde::{Deserialize, Serialize};

use super::{Crossing, DiagError, HeegaardDiagram};

#[derive(Serialize, Deserialize)]
pub(crate) struct DiagramDoc {
    crossings: Vec<Crossing>,
    genus: usize,
    v_cycles: Vec<Vec<u64>>,
    w_cycles: Vec<Vec<u64>>,
}

impl TryFrom<DiagramDoc> for HeegaardDiagram {
    type Error = DiagError;

    fn try_from(doc: DiagramDoc) -> Result<HeegaardDiagram, DiagError> {
        HeegaardDiagram::new(doc.genus, doc.crossings, doc.v_cycles, doc.w_cycles)
    }
}

impl From<HeegaardDiagram> for DiagramDoc {
    fn from(d: HeegaardDiagram) -> DiagramDoc {
        DiagramDoc {
            crossings: d.crossings().to_vec(),
            genus: d.genus(),
            v_cycles: d.v_cycles().to_vec(),
            w_cycles: d.w_cycles().to_vec(),
        }
    }
}

pub fn diagram_to_json(d: &HeegaardDiagram) -> String {
    let doc = DiagramDoc {
        crossings: d.crossings().to_vec(),
        genus: d.genus(),
        v_cycles: d.v_cycles().to_vec(),
        w_cycles: d.w_cycles().to_vec(),
    };
    serde_json::to_string(&doc).expect("diagram serializes")
}

pub fn diagram_from_json(text: &str) -> Result<HeegaardDiagram, DiagError> {
    let doc: DiagramDoc =
        serde_json::from_str(text).map_err(|e| DiagError::Parse(e.to_string()))?;
    HeegaardDiagram::new(doc.genus, doc.crossings, doc.v_cycles, doc.w_cycles)
}
