//! Interchange formats: stencil and matrix JSON files, JSON documents on
//! stdout, and CSV tables.
//!
//! Output is deterministic: the same inputs produce byte-identical bytes.
//! Floats print in Rust's shortest round-trip form, struct fields keep their
//! declaration order, and non-finite values are rejected before anything is
//! emitted.

use std::fs;
use std::path::Path;

use fermilab_core::dispersion::Mult;
use fermilab_core::lattice::PeriodicStencil;
use fermilab_core::num::cmat::CMat;
use fermilab_core::num::fit::DecayFit;
use fermilab_core::{C64, Error, Result};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

/// One Laurent coefficient of a stencil on disk. `matrix` is row-major,
/// one `[re, im]` pair per entry, `fiber * fiber` entries.
#[derive(Serialize, Deserialize)]
pub struct CoeffEntry {
    pub offset: Vec<i64>,
    pub matrix: Vec<[f64; 2]>,
}

/// On-disk form of a periodic stencil.
#[derive(Serialize, Deserialize)]
pub struct StencilFile {
    pub dim: usize,
    pub fiber: usize,
    pub coeffs: Vec<CoeffEntry>,
}

impl StencilFile {
    pub fn from_stencil(a: &PeriodicStencil) -> Self {
        let fiber = a.fiber();
        let coeffs = a
            .coeffs()
            .map(|(g, m)| CoeffEntry {
                offset: g.clone(),
                matrix: (0..fiber * fiber)
                    .map(|i| {
                        let v = m[(i / fiber, i % fiber)];
                        [v.re, v.im]
                    })
                    .collect(),
            })
            .collect();
        StencilFile { dim: a.dim(), fiber, coeffs }
    }

    /// Validates shapes and mirror self-adjointness.
    pub fn into_stencil(self) -> Result<PeriodicStencil> {
        let fiber = self.fiber;
        let mut entries = Vec::with_capacity(self.coeffs.len());
        for e in self.coeffs {
            if e.matrix.len() != fiber * fiber {
                return Err(Error::Domain(format!(
                    "coefficient at offset {:?} has {} entries, expected {}",
                    e.offset,
                    e.matrix.len(),
                    fiber * fiber
                )));
            }
            let flat: Vec<C64> = e.matrix.iter().map(|p| C64::new(p[0], p[1])).collect();
            entries.push((e.offset, CMat::from_rows(fiber, fiber, &flat)));
        }
        PeriodicStencil::new(self.dim, fiber, entries)
    }
}

/// On-disk form of a square complex matrix (an involution for the layered
/// construction, typically).
#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    pub size: usize,
    /// row-major `[re, im]` pairs, `size * size` of them
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMat) -> Self {
        let n = m.rows();
        MatrixFile {
            size: n,
            entries: (0..n * n)
                .map(|i| {
                    let v = m[(i / n, i % n)];
                    [v.re, v.im]
                })
                .collect(),
        }
    }

    pub fn into_matrix(self) -> Result<CMat> {
        if self.entries.len() != self.size * self.size {
            return Err(Error::Domain(format!(
                "matrix file has {} entries, expected {}",
                self.entries.len(),
                self.size * self.size
            )));
        }
        let flat: Vec<C64> = self.entries.iter().map(|p| C64::new(p[0], p[1])).collect();
        Ok(CMat::from_rows(self.size, self.size, &flat))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("cannot parse {}: {e}", path.display())))
}

pub fn read_stencil(path: &Path) -> Result<PeriodicStencil> {
    read_json::<StencilFile>(path)?.into_stencil()
}

pub fn read_matrix(path: &Path) -> Result<CMat> {
    read_json::<MatrixFile>(path)?.into_matrix()
}

/// Floquet multiplicity as it appears in output documents: an exact count,
/// or the string `"edge"` where the root test is inconclusive.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MultOut(pub Mult);

impl Serialize for MultOut {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self.0 {
            Mult::Count(n) => s.serialize_u32(n),
            Mult::Edge => s.serialize_str("edge"),
        }
    }
}

impl core::fmt::Display for MultOut {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.0 {
            Mult::Count(n) => write!(f, "{n}"),
            Mult::Edge => write!(f, "edge"),
        }
    }
}

/// Exponential fit summary exactly as reported: overall and tail rates, the
/// fit quality, and the shell count that survived the amplitude floor.
#[derive(Serialize, Clone)]
pub struct DecayOut {
    pub alpha: f64,
    pub alpha_tail: f64,
    pub r2: f64,
    pub shells: usize,
}

impl From<&DecayFit> for DecayOut {
    fn from(f: &DecayFit) -> Self {
        DecayOut { alpha: f.alpha, alpha_tail: f.alpha_tail, r2: f.r2, shells: f.shells.len() }
    }
}

/// Half-open spectral interval in output documents, always `[lo, hi]`.
#[derive(Serialize, Clone, Copy)]
pub struct Interval(pub f64, pub f64);

/// Band with its constant Floquet multiplicity.
#[derive(Clone, Copy)]
pub struct BandOut {
    pub lo: f64,
    pub hi: f64,
    pub multiplicity: u32,
}

impl Serialize for BandOut {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.serialize_element(&self.multiplicity)?;
        seq.end()
    }
}

/// Serializes to pretty JSON with a trailing newline, refusing any document
/// that contains a non-finite number (serialized as `null` by serde_json).
///
/// Optional fields must use `skip_serializing_if` so that an honest `None`
/// never reaches this check.
pub fn to_json_doc<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    if has_null(&v) {
        return Err(Error::domain("refusing to serialize a non-finite number"));
    }
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn has_null(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null),
        serde_json::Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

/// A CSV cell. Floats use the shortest round-trip form and must be finite.
pub fn csv_f64(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::domain("refusing to serialize a non-finite number"));
    }
    Ok(format!("{x}"))
}

/// Assembles a CSV document: header row, then data rows, `\n` line ends.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let width = header.len();
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        if row.len() != width {
            return Err(Error::domain("csv row width does not match header"));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fermilab_core::models;

    #[test]
    fn stencil_round_trip() {
        let a = models::fourth_order_chain();
        let file = StencilFile::from_stencil(&a);
        let text = serde_json::to_string(&file).unwrap();
        let back: StencilFile = serde_json::from_str(&text).unwrap();
        let b = back.into_stencil().unwrap();
        assert_eq!(a.num_offsets(), b.num_offsets());
        for k in [0.0, 0.7, 2.1] {
            let d = a.symbol_at_k(&[k]).sub(&b.symbol_at_k(&[k])).max_abs();
            assert!(d == 0.0);
        }
    }

    #[test]
    fn stencil_file_rejects_mirror_violation() {
        let text = r#"{"dim":1,"fiber":1,"coeffs":[
            {"offset":[1],"matrix":[[1.0,0.0]]},
            {"offset":[-1],"matrix":[[2.0,0.0]]}
        ]}"#;
        let f: StencilFile = serde_json::from_str(text).unwrap();
        assert!(f.into_stencil().is_err());
    }

    #[test]
    fn json_doc_rejects_nan() {
        #[derive(Serialize)]
        struct P {
            x: f64,
        }
        assert!(to_json_doc(&P { x: f64::NAN }).is_err());
        assert!(to_json_doc(&P { x: 1.5 }).unwrap().contains("1.5"));
    }

    #[test]
    fn mult_serializes_as_number_or_edge() {
        let v = serde_json::to_value(MultOut(Mult::Count(4))).unwrap();
        assert_eq!(v, serde_json::json!(4));
        let v = serde_json::to_value(MultOut(Mult::Edge)).unwrap();
        assert_eq!(v, serde_json::json!("edge"));
    }

    #[test]
    fn csv_shape_is_checked() {
        let rows = vec![vec!["1".to_string()]];
        assert!(csv_table(&["a", "b"], &rows).is_err());
        let ok = csv_table(&["a"], &rows).unwrap();
        assert_eq!(ok, "a\n1\n");
    }
}
