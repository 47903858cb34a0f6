//! JSON and CSV rendering. Complex numbers are `[re, im]` arrays in JSON and
//! paired `_re`/`_im` columns in CSV; CSV output starts with a `# config:`
//! line carrying the resolved run configuration.

use crate::args::Format;
use serde_json::{json, Value};
use whittaker_core::Complex64 as C;

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Document {
    pub config: Value,
    /// Everything but the configuration, for JSON output.
    pub body: serde_json::Map<String, Value>,
    pub table: Table,
    /// Extra `#` lines after the CSV table.
    pub trailer: Vec<String>,
}

pub fn complex(z: C) -> Value {
    json!([z.re, z.im])
}

pub fn opt_complex(z: Option<C>) -> Value {
    z.map_or(Value::Null, complex)
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

pub fn render(doc: &Document, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut all = serde_json::Map::new();
            all.insert("config".into(), doc.config.clone());
            all.extend(doc.body.clone());
            let mut out = serde_json::to_vec_pretty(&Value::Object(all)).expect("JSON values serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut out = format!("# config: {}\n", doc.config).into_bytes();
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&doc.table.header).expect("in-memory write");
            for row in &doc.table.rows {
                writer.write_record(row).expect("in-memory write");
            }
            out.extend(writer.into_inner().expect("in-memory flush"));
            for line in &doc.trailer {
                out.extend(format!("# {line}\n").into_bytes());
            }
            out
        }
    }
}
