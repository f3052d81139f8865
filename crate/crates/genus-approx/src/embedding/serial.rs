use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EmbeddingError, RotationEmbedding, Sign};
use crate::graphcore::{Edge, Vertex};

/// Serialized form of an embedding with its derived fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
    pub signs: Vec<(Vertex, Vertex, Sign)>,
    pub faces: Vec<Vec<Vertex>>,
    pub euler_genus: usize,
    pub orientable: bool,
}

impl From<&RotationEmbedding> for EmbeddingRecord {
    fn from(e: &RotationEmbedding) -> Self {
        EmbeddingRecord {
            rotation: e.rotation().clone(),
            signs: e
                .signs()
                .iter()
                .map(|(edge, &s)| {
                    let (a, b) = edge.ends();
                    (a, b, s)
                })
                .collect(),
            faces: e
                .trace_faces()
                .iter()
                .map(|f| f.vertices().collect())
                .collect(),
            euler_genus: e.euler_genus(),
            orientable: e.is_orientable(),
        }
    }
}

impl EmbeddingRecord {
    /// Rebuilds the embedding and checks every derived field against a fresh trace.
    pub fn to_embedding(&self) -> Result<RotationEmbedding, EmbeddingError> {
        let mut signs = BTreeMap::new();
        for &(a, b, s) in &self.signs {
            if signs.insert(Edge::new(a, b), s).is_some() {
                return Err(EmbeddingError::Malformed(format!(
                    "edge {} signed twice",
                    Edge::new(a, b)
                )));
            }
        }
        let e = RotationEmbedding::new_strict(self.rotation.clone(), signs)?;
        let fresh = EmbeddingRecord::from(&e);
        if fresh.faces != self.faces {
            return Err(EmbeddingError::DerivedMismatch("faces".into()));
        }
        if fresh.euler_genus != self.euler_genus {
            return Err(EmbeddingError::DerivedMismatch(format!(
                "euler_genus recorded {} but traced {}",
                self.euler_genus, fresh.euler_genus
            )));
        }
        if fresh.orientable != self.orientable {
            return Err(EmbeddingError::DerivedMismatch("orientable".into()));
        }
        Ok(e)
    }
}

impl RotationEmbedding {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EmbeddingRecord::from(self)).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<RotationEmbedding, EmbeddingError> {
        let rec: EmbeddingRecord =
            serde_json::from_str(text).map_err(|e| EmbeddingError::Malformed(e.to_string()))?;
        rec.to_embedding()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::planar_embedding;
    use crate::graphcore::generators::{complete, wheel};

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut e = planar_embedding(&wheel(6)).unwrap();
        e.switch_at(Vertex(3));
        let text = e.to_json();
        let back = RotationEmbedding::from_json(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn tampering_is_detected() {
        let e = planar_embedding(&complete(4)).unwrap();
        let mut rec = EmbeddingRecord::from(&e);
        rec.rotation.get_mut(&Vertex(0)).unwrap().pop();
        assert!(rec.to_embedding().is_err());

        let mut rec = EmbeddingRecord::from(&e);
        rec.euler_genus = 2;
        assert!(matches!(
            rec.to_embedding(),
            Err(EmbeddingError::DerivedMismatch(_))
        ));
    }
}
