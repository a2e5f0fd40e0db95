//! Sequence file I/O. The on-disk form is a single JSON document:
//!
//! ```json
//! {
//!   "n": 3, "k": 1, "m": 1,
//!   "lambda": "1/1",
//!   "bound": "4",
//!   "elements": [["1"], ["2"], ["4"]]
//! }
//! ```
//!
//! All numeric payloads are strings so arbitrary-precision values survive
//! interchange: integers as plain decimals, non-integer rationals as `p/q`
//! (decimal-point literals are accepted on input). Writing then reading a
//! sequence is the identity, and re-serializing reproduces the same bytes.

use crate::error::{Error, Result};
use crate::params::{format_ratio, parse_ratio, ProblemParams};
use crate::scalar::Scalar;
use crate::sequence::{Element, IntSequence, RatSequence, Sequence};
use crate::{Int, Rat};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct SeqFile {
    n: u32,
    k: u32,
    m: u32,
    lambda: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<String>,
    elements: Vec<Vec<String>>,
}

pub fn sequence_to_json<T: Scalar>(seq: &Sequence<T>) -> String {
    let p = seq.params();
    let doc = SeqFile {
        n: p.n(),
        k: p.k(),
        m: p.m(),
        lambda: format_ratio(p.lambda()),
        bound: seq.bound().map(|b| b.format_scalar()),
        elements: seq
            .elements()
            .iter()
            .map(|e| e.0.iter().map(|c| c.format_scalar()).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("sequence document serializes");
    text.push('\n');
    text
}

pub fn sequence_from_json<T: Scalar>(text: &str) -> Result<Sequence<T>> {
    let doc: SeqFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("sequence file: {e}")))?;
    let params = ProblemParams::new(doc.n, doc.k, doc.m, parse_ratio(&doc.lambda)?)?;
    let bound = match &doc.bound {
        None => None,
        Some(b) => {
            Some(T::parse_scalar(b).ok_or_else(|| Error::Parse(format!("bad bound {b:?}")))?)
        }
    };
    let mut elems = Vec::with_capacity(doc.elements.len());
    for row in &doc.elements {
        let mut coords = Vec::with_capacity(row.len());
        for cell in row {
            coords.push(
                T::parse_scalar(cell)
                    .ok_or_else(|| Error::Parse(format!("bad element entry {cell:?}")))?,
            );
        }
        elems.push(Element(coords));
    }
    Sequence::new(params, elems, bound)
}

/// A loaded sequence with the scalar ring chosen by inspection: documents
/// whose payloads all parse as integers load in the exact-integer ring,
/// anything else falls back to exact rationals.
pub enum AnySequence {
    Int(IntSequence),
    Rat(RatSequence),
}

pub fn any_from_json(text: &str) -> Result<AnySequence> {
    match sequence_from_json::<Int>(text) {
        Ok(s) => Ok(AnySequence::Int(s)),
        Err(_) => Ok(AnySequence::Rat(sequence_from_json::<Rat>(text)?)),
    }
}

pub fn save_sequence<T: Scalar>(seq: &Sequence<T>, path: &Path) -> Result<()> {
    fs::write(path, sequence_to_json(seq))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_any(path: &Path) -> Result<AnySequence> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    any_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn integer_round_trip() {
        let p = ProblemParams::new(3, 1, 1, Rat::one()).unwrap();
        let s = Sequence::from_scalars(
            p,
            vec![Int::from(1), Int::from(2), Int::from(4)],
            Some(Int::from(4)),
        )
        .unwrap();
        let text = sequence_to_json(&s);
        let back: IntSequence = sequence_from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(sequence_to_json(&back), text);
    }

    #[test]
    fn rational_round_trip() {
        let p = ProblemParams::new(2, 1, 2, Rat::one()).unwrap();
        let s = Sequence::from_scalars(
            p,
            vec![
                Rat::new(Int::from(9764601), Int::from(1024)),
                Rat::new(Int::from(7), Int::from(3)),
            ],
            None,
        )
        .unwrap();
        let text = sequence_to_json(&s);
        assert!(text.contains("9764601/1024"));
        let back: RatSequence = sequence_from_json(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn fixture_document_parses() {
        let text = r#"{
            "n": 2, "k": 2, "m": 1, "lambda": "1/2",
            "elements": [["1", "2"], ["3", "4"]]
        }"#;
        let s: IntSequence = sequence_from_json(text).unwrap();
        assert_eq!(s.params().k(), 2);
        assert_eq!(s.element(2).unwrap().0[1], Int::from(4));
        assert!(s.bound().is_none());
    }

    #[test]
    fn ring_detection() {
        let int_doc = r#"{"n":1,"k":1,"m":1,"lambda":"1/1","elements":[["7"]]}"#;
        assert!(matches!(
            any_from_json(int_doc).unwrap(),
            AnySequence::Int(_)
        ));
        let rat_doc = r#"{"n":1,"k":1,"m":1,"lambda":"1/1","elements":[["7/2"]]}"#;
        assert!(matches!(
            any_from_json(rat_doc).unwrap(),
            AnySequence::Rat(_)
        ));
        let dec_doc = r#"{"n":1,"k":1,"m":1,"lambda":"1/1","elements":[["3.5"]]}"#;
        assert!(matches!(
            any_from_json(dec_doc).unwrap(),
            AnySequence::Rat(_)
        ));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(sequence_from_json::<Int>("not json").is_err());
        // length disagreement caught by the shape invariants
        let short = r#"{"n":3,"k":1,"m":1,"lambda":"1/1","elements":[["1"]]}"#;
        assert!(sequence_from_json::<Int>(short).is_err());
        let bad_entry = r#"{"n":1,"k":1,"m":1,"lambda":"1/1","elements":[["x"]]}"#;
        assert!(sequence_from_json::<Int>(bad_entry).is_err());
    }
}
