//! File formats. JSON is canonical; complex numbers are `[re, im]` pairs.
//! CSV is offered for symbol matrices only.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernels::ComplexPoint;
use crate::multiindex::IndexTable;
use crate::symbols::SymbolMatrix;

pub fn complex_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn pair_complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// A point as written in files: either complex coordinates or the split
/// `(x, y)` form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRepr {
    Complex(Vec<[f64; 2]>),
    Split { x: Vec<f64>, y: Vec<f64> },
}

impl PointRepr {
    pub fn to_point(&self) -> Result<ComplexPoint> {
        match self {
            PointRepr::Complex(z) => Ok(ComplexPoint::from_complex(
                &z.iter().map(|p| pair_complex(*p)).collect::<Vec<_>>(),
            )),
            PointRepr::Split { x, y } => ComplexPoint::from_split(x.clone(), y.clone()),
        }
    }

    pub fn from_point(p: &ComplexPoint) -> Self {
        PointRepr::Split {
            x: p.x.clone(),
            y: p.y.clone(),
        }
    }
}

/// One entry of a points file: the kernel is evaluated as `K_z(w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointPair {
    pub z: PointRepr,
    pub w: PointRepr,
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a JSON array of `{z, w}` pairs.
pub fn read_point_pairs(path: &Path) -> Result<Vec<(ComplexPoint, ComplexPoint)>> {
    parse_point_pairs(&read_text(path)?)
}

pub fn parse_point_pairs(text: &str) -> Result<Vec<(ComplexPoint, ComplexPoint)>> {
    let pairs: Vec<PointPair> = serde_json::from_str(text)?;
    pairs
        .iter()
        .map(|p| Ok((p.z.to_point()?, p.w.to_point()?)))
        .collect()
}

/// `[[re, im], …]`.
pub fn complex_array_json(values: &[Complex64]) -> Value {
    Value::Array(values.iter().map(|c| json!(complex_pair(*c))).collect())
}

/// Rows `{j, k}` with the one-based position `j`.
pub fn indices_json(table: &IndexTable) -> Value {
    Value::Array(
        table
            .iter()
            .enumerate()
            .map(|(i, k)| json!({"j": i + 1, "k": k.entries()}))
            .collect(),
    )
}

/// `{n, m, d, xi, matrices}` with one `d × d` matrix per frequency point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub xi: Vec<Vec<f64>>,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl SymbolFile {
    pub fn new(table: &IndexTable, symbols: &[SymbolMatrix]) -> Result<Self> {
        let d = table.d();
        if let Some(s) = symbols.iter().find(|s| s.d() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: s.d() });
        }
        Ok(SymbolFile {
            n: table.n(),
            m: table.m(),
            d,
            xi: symbols.iter().map(|s| s.xi.clone()).collect(),
            matrices: symbols.iter().map(|s| s.to_rows()).collect(),
        })
    }

    pub fn to_symbols(&self) -> Vec<SymbolMatrix> {
        self.xi
            .iter()
            .zip(&self.matrices)
            .map(|(xi, rows)| SymbolMatrix {
                xi: xi.clone(),
                entries: nalgebra::DMatrix::from_fn(self.d, self.d, |r, s| pair_complex(rows[r][s])),
            })
            .collect()
    }

    /// One line per entry: `xi_1,…,xi_n,row,col,re,im` with one-based
    /// row and column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 1..=self.n {
            let _ = write!(out, "xi_{r},");
        }
        out.push_str("row,col,re,im\n");
        for (xi, rows) in self.xi.iter().zip(&self.matrices) {
            let prefix: String = xi.iter().map(|v| format!("{v:?},")).collect();
            for (r, row) in rows.iter().enumerate() {
                for (s, c) in row.iter().enumerate() {
                    let _ = writeln!(out, "{prefix}{},{},{:?},{:?}", r + 1, s + 1, c[0], c[1]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_forms() {
        let pairs = parse_point_pairs(r#"[{"z": [[1.0, 2.0]], "w": {"x": [0.5], "y": [-1.0]}}]"#).unwrap();
        assert_eq!(pairs[0].0, ComplexPoint::from_split(vec![1.0], vec![2.0]).unwrap());
        assert_eq!(pairs[0].1.coord(0), Complex64::new(0.5, -1.0));
        assert!(parse_point_pairs("[{\"z\": 3}]").is_err());
    }

    #[test]
    fn symbol_file_round_trip() {
        let table = IndexTable::new(2, 2).unwrap();
        let s = vec![SymbolMatrix::identity(&[0.5, -1.0], 3)];
        let f = SymbolFile::new(&table, &s).unwrap();
        let back: SymbolFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_symbols(), s);
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 1 + 9);
        assert!(csv.starts_with("xi_1,xi_2,row,col,re,im\n0.5,-1.0,1,1,1.0,0.0\n"));
    }
}
