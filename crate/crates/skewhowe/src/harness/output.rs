use std::io::{self, Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::params::{EnsembleParams, ParamsSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (csv or json)")),
        }
    }
}

/// Run metadata written next to JSON tables.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub params: ParamsSummary,
    pub seed: Option<u64>,
    pub build: String,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Metadata {
    pub fn new(params: &EnsembleParams, seed: Option<u64>) -> Self {
        let build = format!("{}-{}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
        Self { params: params.summary(), seed, build, extra: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

/// CSV with a header row in field order, or JSON `{ "metadata": …, "columns": { name: [values] } }`.
pub fn write_records<W: Write, T: Serialize>(mut out: W, format: Format, rows: &[T], meta: &Metadata) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()
        }
        Format::Json => {
            let mut columns: Map<String, Value> = Map::new();
            for r in rows {
                let Value::Object(fields) = serde_json::to_value(r)? else {
                    return Err(io::Error::new(io::ErrorKind::InvalidInput, "rows must serialize to objects"));
                };
                for (k, v) in fields {
                    match columns.entry(k).or_insert_with(|| Value::Array(Vec::new())) {
                        Value::Array(col) => col.push(v),
                        _ => unreachable!(),
                    }
                }
            }
            let doc = serde_json::json!({ "metadata": meta, "columns": columns });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)
        }
    }
}

/// Inverse of [`write_records`]; JSON metadata is returned as-is.
pub fn read_records<R: Read, T: DeserializeOwned>(input: R, format: Format) -> io::Result<(Vec<T>, Option<Value>)> {
    match format {
        Format::Csv => {
            let rows = csv::Reader::from_reader(input).deserialize().collect::<Result<Vec<T>, _>>()?;
            Ok((rows, None))
        }
        Format::Json => {
            let mut doc: Value = serde_json::from_reader(input)?;
            let bad = || io::Error::new(io::ErrorKind::InvalidData, "expected a columns object of arrays");
            let Some(Value::Object(columns)) = doc.get_mut("columns").map(Value::take) else {
                return Err(bad());
            };
            let len = columns.values().next().and_then(Value::as_array).map_or(0, Vec::len);
            let mut rows = Vec::with_capacity(len);
            for i in 0..len {
                let mut obj = Map::new();
                for (k, v) in &columns {
                    obj.insert(k.clone(), v.as_array().and_then(|a| a.get(i)).cloned().ok_or_else(bad)?);
                }
                rows.push(serde_json::from_value(Value::Object(obj))?);
            }
            Ok((rows, doc.get("metadata").cloned()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::compare::{compare_curves, ComparisonRow};

    #[test]
    fn round_trip() {
        let params = EnsembleParams::new(6, 9).unwrap();
        let rows = compare_curves(&params, 7, 1..=15, None).unwrap().rows;
        let mut rows2 = rows.clone();
        rows2[0].median = Some(0.123456789012345);
        let meta = Metadata::new(&params, Some(4)).with("anchor", 7);
        for format in [Format::Csv, Format::Json] {
            let mut buf = Vec::new();
            write_records(&mut buf, format, &rows2, &meta).unwrap();
            let (back, meta_back): (Vec<ComparisonRow>, _) = read_records(buf.as_slice(), format).unwrap();
            assert_eq!(back, rows2);
            if format == Format::Json {
                assert_eq!(meta_back.unwrap()["anchor"], 7);
            }
        }
    }

    #[test]
    fn csv_header_order() {
        let params = EnsembleParams::new(2, 3).unwrap();
        let rows = compare_curves(&params, 2, 1..=3, None).unwrap().rows;
        let mut buf = Vec::new();
        write_records(&mut buf, Format::Csv, &rows, &Metadata::new(&params, None)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "j,delta,q1,median,q3,whisker_lo,whisker_hi,cd_ratio,sine_ratio"
        );
    }
}
