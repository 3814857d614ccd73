//! CSV and JSON writers with a provenance header.
//!
//! Numbers are written with Rust's shortest round-trip formatting, which
//! does not depend on the locale. CSV files start with one comment line
//!
//! ```text
//! # twave 0.1.0 model=<sha256> config=<sha256>
//! ```
//!
//! and JSON files carry the same data under a top-level `"twave"` key.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::nonlinearity::Nonlinearity;
use crate::strip::Field2D;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub model_sha256: String,
    pub config_sha256: String,
}

impl Provenance {
    pub fn new(model: &Nonlinearity, config_text: &str) -> Self {
        Provenance {
            version: VERSION.to_string(),
            model_sha256: sha256_hex(model.fingerprint().as_bytes()),
            config_sha256: sha256_hex(config_text.as_bytes()),
        }
    }

    pub fn header_line(&self) -> String {
        format!("# twave {} model={} config={}", self.version, self.model_sha256, self.config_sha256)
    }
}

/// Full-precision, locale-independent text for a float.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, mut w: W, prov: &Provenance) -> Result<()> {
        writeln!(w, "{}", prov.header_line())?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, prov: &Provenance) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, prov).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn save_csv(&self, path: &Path, prov: &Provenance) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f), prov)
    }
}

fn csv_err(e: csv::Error) -> crate::error::TwaveError {
    crate::error::TwaveError::Io(e.to_string())
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    twave: JsonHeader<'a>,
    data: &'a T,
}

#[derive(Serialize)]
struct JsonHeader<'a> {
    header: String,
    #[serde(flatten)]
    provenance: &'a Provenance,
}

pub fn to_json_string<T: Serialize>(value: &T, prov: &Provenance) -> String {
    let doc = JsonDoc {
        twave: JsonHeader {
            header: prov.header_line(),
            provenance: prov,
        },
        data: value,
    };
    serde_json::to_string_pretty(&doc).expect("results serialize")
}

pub fn save_json<T: Serialize>(path: &Path, value: &T, prov: &Provenance) -> Result<()> {
    std::fs::write(path, to_json_string(value, prov) + "\n")?;
    Ok(())
}

/// Field snapshot as `x, y, rho, theta` rows (`rho = |ψ|`).
pub fn field_table(field: &Field2D) -> Table {
    let g = field.grid;
    let mut t = Table::new(&["x", "y", "rho", "theta"]);
    for i in 0..g.nx {
        for j in 0..g.ny {
            let k = field.idx(i, j);
            t.push(vec![g.x(i).into(), g.y(j).into(), field.rho[k].into(), field.theta[k].into()]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, -2.5, 2.0 / 3.0, 1e-300, 3.0e-7, 6.02e23, std::f64::consts::PI, -1e-5] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x, "{x}");
        }
        assert_eq!(fmt_num(f64::NAN), "NaN");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1e-7), "1e-7");
    }

    #[test]
    fn header_and_csv() {
        let model = Nonlinearity::gp();
        let prov = Provenance::new(&model, "cfg");
        assert_eq!(prov.config_sha256, sha256_hex(b"cfg"));
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        let line = prov.header_line();
        assert!(line.starts_with(&format!("# twave {VERSION} model=")));
        assert!(line.ends_with(&format!("config={}", prov.config_sha256)));
        let mut t = Table::new(&["a", "b", "note"]);
        t.push(vec![0.25.into(), true.into(), "x, y".into()]);
        let text = t.to_csv_string(&prov);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, vec![line.as_str(), "a,b,note", "0.25,true,\"x, y\""]);
        let json: serde_json::Value = serde_json::from_str(&to_json_string(&vec![1.5], &prov)).unwrap();
        assert_eq!(json["twave"]["header"], line);
        assert_eq!(json["data"][0], 1.5);
    }
}
