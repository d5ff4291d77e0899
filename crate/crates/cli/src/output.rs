//! In-memory artifacts and their byte encodings.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::RunError;

/// One output file, held in memory until the run has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Everything an experiment produces.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl Outcome {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push(Artifact {
            name: name.to_string(),
            bytes,
        });
    }

    pub fn note<T: Serialize>(&mut self, key: &str, value: T) {
        self.summary
            .insert(key.to_string(), serde_json::to_value(value).expect("summary value serializes"));
    }
}

/// CSV table: comma separated, header row, LF line endings.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Table { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("writing to memory");
    }

    pub fn finish(self) -> Vec<u8> {
        self.writer.into_inner().expect("flushing to memory")
    }
}

/// Shortest round-trip decimal; empty for missing values.
pub fn num(v: f64) -> String {
    v.to_string()
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), num)
}

/// Pretty UTF-8 JSON with a trailing newline.
pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, RunError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| RunError::Io(format!("json encoding failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_dialect() {
        let mut t = Table::new(&["a", "b"]);
        t.row([num(0.1), opt(None)]);
        t.row([num(-2.5e-7), "x,y".to_string()]);
        assert_eq!(String::from_utf8(t.finish()).unwrap(), "a,b\n0.1,\n-0.00000025,\"x,y\"\n");
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
