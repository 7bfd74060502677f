//! Wire formats. Scalars follow the exact text form (`"p/q"` strings for
//! rationals, `{"re", "im"}` objects for Gaussian rationals); frames,
//! designs, POVMs and certificates are plain JSON trees with
//! deterministic key order, so identical inputs serialize byte-for-byte
//! identically.

use serde_json::{json, Map, Value};

use crate::certify::{
    CollisionPair, EquivalenceFingerprint, PartitionWitness, RemovalCertificate, RemovalKind,
    Scope, VitalOutcome,
};
use crate::designs::BlockDesign;
use crate::exactlin::{ExactScalar, GaussRational, Rational, Vector};
use crate::frames::{AnyFrame, FieldTag, Frame, FrameError, FrameMeta};
use crate::povm::{AnyPovm, FloatPovm};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
    #[error(transparent)]
    Exact(#[from] crate::exactlin::ExactError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Design(#[from] crate::designs::DesignError),
}

fn malformed(what: &'static str, detail: impl Into<String>) -> JsonError {
    JsonError::Malformed { what, detail: detail.into() }
}

fn vector_to_json<T: ExactScalar>(v: &Vector<T>) -> Value {
    Value::Array(v.iter().map(|e| e.to_json()).collect())
}

fn frame_body<T: ExactScalar>(f: &Frame<T>) -> Value {
    json!({
        "field": f.field().as_str(),
        "n": f.n(),
        "vectors": f.vectors().iter().map(vector_to_json).collect::<Vec<_>>(),
        "labels": f.labels(),
        "meta": {
            "construction": f.meta().construction,
            "seed": f.meta().seed,
        },
    })
}

pub fn frame_to_json(frame: &AnyFrame) -> Value {
    match frame {
        AnyFrame::Real(f) => frame_body(f),
        AnyFrame::Complex(f) => frame_body(f),
    }
}

fn parse_meta(v: Option<&Value>) -> Result<FrameMeta, JsonError> {
    let Some(v) = v else {
        return Ok(FrameMeta::new("imported", 0));
    };
    let obj = v
        .as_object()
        .ok_or_else(|| malformed("frame meta", "expected object"))?;
    let construction = obj
        .get("construction")
        .and_then(Value::as_str)
        .unwrap_or("imported")
        .to_string();
    let seed = obj.get("seed").and_then(Value::as_u64).unwrap_or(0);
    Ok(FrameMeta { construction, seed })
}

fn parse_vectors<T: ExactScalar>(
    n: usize,
    vectors: &[Value],
) -> Result<Vec<Vector<T>>, JsonError> {
    vectors
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let entries = row
                .as_array()
                .ok_or_else(|| malformed("frame vector", format!("vector {i} is not an array")))?;
            if entries.len() != n {
                return Err(malformed(
                    "frame vector",
                    format!("vector {i} has {} entries, expected {n}", entries.len()),
                ));
            }
            let parsed = entries
                .iter()
                .map(|e| scalar_from_json::<T>(e))
                .collect::<Result<Vec<T>, JsonError>>()?;
            Ok(Vector::new(parsed))
        })
        .collect()
}

/// Scalar parser that also accepts plain rational strings inside complex
/// frames (read as a zero imaginary part).
fn scalar_from_json<T: ExactScalar>(v: &Value) -> Result<T, JsonError> {
    if T::IS_COMPLEX {
        if let Value::String(_) = v {
            let r = Rational::from_json(v)?;
            return Ok(T::from_rational(r));
        }
    }
    Ok(T::from_json(v)?)
}

pub fn frame_from_json(v: &Value) -> Result<AnyFrame, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| malformed("frame", "expected a JSON object"))?;
    let field = obj
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("frame", "missing \"field\" (\"R\" or \"C\")"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("frame", "missing positive integer \"n\""))? as usize;
    if n == 0 {
        return Err(malformed("frame", "n must be positive"));
    }
    let vectors = obj
        .get("vectors")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("frame", "missing \"vectors\" array"))?;
    let labels: Vec<String> = match obj.get("labels") {
        Some(Value::Array(arr)) => arr
            .iter()
            .map(|l| {
                l.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| malformed("frame labels", "labels must be strings"))
            })
            .collect::<Result<_, _>>()?,
        None => (0..vectors.len()).map(|i| format!("v{i}")).collect(),
        Some(_) => return Err(malformed("frame labels", "expected an array")),
    };
    let meta = parse_meta(obj.get("meta"))?;
    match field {
        "R" => {
            let vectors = parse_vectors::<Rational>(n, vectors)?;
            Ok(AnyFrame::Real(Frame::new(n, vectors, labels, meta)?))
        }
        "C" => {
            let vectors = parse_vectors::<GaussRational>(n, vectors)?;
            Ok(AnyFrame::Complex(Frame::new(n, vectors, labels, meta)?))
        }
        other => Err(malformed("frame", format!("unknown field tag {other:?}"))),
    }
}

pub fn design_to_json(d: &BlockDesign) -> Value {
    json!({
        "n": d.n(),
        "blocks": d.blocks(),
    })
}

pub fn design_from_json(v: &Value) -> Result<BlockDesign, JsonError> {
    let obj = v
        .as_object()
        .ok_or_else(|| malformed("design", "expected a JSON object"))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("design", "missing positive integer \"n\""))? as usize;
    let blocks = obj
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("design", "missing \"blocks\" array"))?;
    let parsed: Vec<Vec<usize>> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            b.as_array()
                .ok_or_else(|| malformed("design block", format!("block {i} is not an array")))?
                .iter()
                .map(|p| {
                    p.as_u64()
                        .map(|p| p as usize)
                        .ok_or_else(|| malformed("design block", format!("bad point in block {i}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(BlockDesign::new(n, parsed)?)
}

fn float_to_json(field: FieldTag, re: f64, im: f64) -> Value {
    match field {
        FieldTag::Real => json!(re),
        FieldTag::Complex => json!({"re": re, "im": im}),
    }
}

fn povm_body<F: crate::exactlin::FloatScalar>(p: &FloatPovm<F>) -> Value {
    let field = p.field();
    let elements: Vec<Value> = p
        .elements()
        .iter()
        .map(|e| {
            Value::Array(
                (0..e.nrows())
                    .map(|i| {
                        Value::Array(
                            (0..e.ncols())
                                .map(|j| {
                                    let (re, im) = F::parts(e[(i, j)]);
                                    float_to_json(field, re, im)
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    json!({
        "field": field.as_str(),
        "n": p.n(),
        "elements": elements,
        "labels": p.labels(),
        "meta": {
            "construction": p.meta().construction,
            "seed": p.meta().seed,
        },
        "parsevalResidual": p.parseval_residual(),
    })
}

pub fn povm_to_json(p: &AnyPovm) -> Value {
    match p {
        AnyPovm::Real(p) => povm_body(p),
        AnyPovm::Complex(p) => povm_body(p),
    }
}

pub fn rational_vector_to_json(v: &Vector<Rational>) -> Value {
    vector_to_json(v)
}

pub fn partition_witness_to_json(w: &PartitionWitness) -> Value {
    let mut obj = Map::new();
    obj.insert("part1".into(), json!(w.part1));
    obj.insert("part2".into(), json!(w.part2));
    obj.insert("rank1".into(), json!(w.rank1));
    obj.insert("rank2".into(), json!(w.rank2));
    obj.insert(
        "normal".into(),
        w.normal.as_ref().map(vector_to_json).unwrap_or(Value::Null),
    );
    Value::Object(obj)
}

pub fn collision_to_json(pair: &CollisionPair) -> Value {
    json!({
        "psi": vector_to_json(&pair.psi),
        "phi": vector_to_json(&pair.phi),
        "alpha": pair.alpha.to_json(),
        "scope": match pair.scope {
            Scope::Full => json!("full"),
            Scope::MinusIndex(j) => json!({"minusIndex": j}),
        },
    })
}

fn float_pairs_to_json(field: FieldTag, entries: &[(f64, f64)]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|&(re, im)| float_to_json(field, re, im))
            .collect(),
    )
}

pub fn removal_certificate_to_json(field: FieldTag, cert: &RemovalCertificate) -> Value {
    let (kind, data) = match &cert.kind {
        RemovalKind::SingularSj { kernel, residual } => (
            "singular",
            json!({
                "kernel": float_pairs_to_json(field, kernel),
                "residual": residual,
            }),
        ),
        RemovalKind::ExactPair(pair) => ("pair", collision_to_json(pair)),
        RemovalKind::IndefiniteKernel {
            coords,
            eigen_positive,
            eigen_negative,
            psi,
            phi,
            alpha,
        } => (
            "pair",
            json!({
                "kernelCoords": vector_to_json(coords),
                "eigenPositive": eigen_positive,
                "eigenNegative": eigen_negative,
                "psi": float_pairs_to_json(field, psi),
                "phi": float_pairs_to_json(field, phi),
                "alpha": alpha,
            }),
        ),
    };
    json!({
        "j": cert.j,
        "kind": kind,
        "data": data,
    })
}

pub fn fingerprint_to_json(fp: &EquivalenceFingerprint) -> Value {
    json!({
        "maxNonSpanningCount": fp.max_nonspanning_count,
        "pairwiseIntersectionSizes": fp.pairwise_intersection_sizes,
        "subsets": fp.subsets,
    })
}

pub fn vital_outcome_to_json(field: FieldTag, outcome: &VitalOutcome) -> Value {
    match outcome {
        VitalOutcome::Vital { certificates } => json!({
            "vital": true,
            "certificates": certificates
                .iter()
                .map(|c| removal_certificate_to_json(field, c))
                .collect::<Vec<_>>(),
        }),
        VitalOutcome::NotPsiComplete { collision } => json!({
            "vital": false,
            "reason": "notPsiComplete",
            "collision": collision.as_ref().map(|p| collision_to_json(p)).unwrap_or(Value::Null),
        }),
        VitalOutcome::RemovalStaysComplete { j } => json!({
            "vital": false,
            "reason": "removalStaysComplete",
            "j": j,
        }),
    }
}

/// Serializes with a trailing newline; the canonical on-disk form used by
/// the CLI.
pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON trees serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{design_agl17, design_pairs};
    use crate::exactlin::{gauss_int, rat, rat_int};
    use crate::frames::{construct_complex_max, construct_gonzalez_2n, construct_real_max};
    use crate::povm::whiten;

    #[test]
    fn frame_round_trip_real() {
        let f = construct_gonzalez_2n(4, 3).unwrap();
        let j = frame_to_json(&AnyFrame::Real(f.clone()));
        match frame_from_json(&j).unwrap() {
            AnyFrame::Real(g) => assert_eq!(f, g),
            _ => panic!("field tag flipped"),
        }
    }

    #[test]
    fn frame_round_trip_complex() {
        let f = construct_complex_max(3).unwrap();
        let j = frame_to_json(&AnyFrame::Complex(f.clone()));
        match frame_from_json(&j).unwrap() {
            AnyFrame::Complex(g) => assert_eq!(f, g),
            _ => panic!("field tag flipped"),
        }
    }

    #[test]
    fn emission_is_byte_stable() {
        let f = construct_real_max(3).unwrap();
        let a = to_pretty_string(&frame_to_json(&AnyFrame::Real(f.clone())));
        let b = to_pretty_string(&frame_to_json(&AnyFrame::Real(f)));
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn scalars_serialize_in_reduced_text_form() {
        let f = Frame::new(
            2,
            vec![Vector::new(vec![rat(2, 4), rat_int(-3)])],
            vec!["x".into()],
            FrameMeta::new("test", 0),
        )
        .unwrap();
        let j = frame_body(&f);
        assert_eq!(j["vectors"][0][0], json!("1/2"));
        assert_eq!(j["vectors"][0][1], json!("-3"));
    }

    #[test]
    fn complex_frame_accepts_plain_rational_strings() {
        let j = json!({
            "field": "C",
            "n": 2,
            "vectors": [["1", {"re": "0", "im": "1"}]],
        });
        match frame_from_json(&j).unwrap() {
            AnyFrame::Complex(f) => {
                assert_eq!(f.vector(0).get(0), &gauss_int(1, 0));
                assert_eq!(f.vector(0).get(1), &gauss_int(0, 1));
                assert_eq!(f.labels(), &["v0".to_string()]);
            }
            _ => panic!("expected complex frame"),
        }
    }

    #[test]
    fn malformed_frames_are_rejected() {
        for bad in [
            json!({"n": 2, "vectors": []}),
            json!({"field": "R", "vectors": []}),
            json!({"field": "Q", "n": 2, "vectors": []}),
            json!({"field": "R", "n": 2, "vectors": [["1"]]}),
            json!({"field": "R", "n": 2, "vectors": [["1", "1/0"]]}),
            json!([1, 2, 3]),
        ] {
            assert!(frame_from_json(&bad).is_err(), "accepted {bad}");
        }
    }

    #[test]
    fn design_round_trip() {
        for d in [design_pairs(5).unwrap(), design_agl17()] {
            let j = design_to_json(&d);
            assert_eq!(design_from_json(&j).unwrap(), d);
        }
    }

    #[test]
    fn povm_json_mirrors_frame_shape() {
        let p = whiten(&construct_real_max(2).unwrap()).unwrap();
        let j = povm_to_json(&AnyPovm::Real(p));
        assert_eq!(j["field"], json!("R"));
        assert_eq!(j["n"], json!(2));
        assert_eq!(j["elements"].as_array().unwrap().len(), 3);
        assert_eq!(j["elements"][0].as_array().unwrap().len(), 2);
        let c = whiten(&construct_complex_max(2).unwrap()).unwrap();
        let j = povm_to_json(&AnyPovm::Complex(c));
        assert!(j["elements"][0][0][0].get("re").is_some());
    }

    #[test]
    fn certificate_kinds_serialize() {
        use crate::certify::{is_vital_real, Tolerances, VitalOutcome};
        let f = construct_real_max(2).unwrap();
        let outcome = is_vital_real(&f, &Tolerances::default()).unwrap();
        let j = vital_outcome_to_json(FieldTag::Real, &outcome);
        assert_eq!(j["vital"], json!(true));
        let certs = j["certificates"].as_array().unwrap();
        assert_eq!(certs.len(), 3);
        assert_eq!(certs[0]["kind"], json!("pair"));
        match &outcome {
            VitalOutcome::Vital { .. } => {}
            _ => unreachable!(),
        }
    }
}
