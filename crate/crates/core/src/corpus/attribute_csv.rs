use std::io::{Read, Write};
use std::sync::Arc;

use crate::dsns::{DsnsString, Sample};

use super::CorpusError;

pub const NULL_TOKEN: &str = "NULL";
pub const ID_COLUMN: &str = "object_id";

fn csv_err(e: csv::Error) -> CorpusError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CorpusError::Io(io),
        other => CorpusError::Csv(format!("{other:?}")),
    }
}

/// Reads an attribute table: a header of `object_id` and attribute names,
/// then one row per object with decimal numbers or `NULL`. With `expected`
/// the attribute names must match it exactly.
pub fn read_attribute_csv<R: Read>(
    reader: R,
    domain: &str,
    expected: Option<&[&str]>,
) -> Result<Sample, CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let mut names = header.iter();
    if names.next() != Some(ID_COLUMN) {
        return Err(CorpusError::BadHeader);
    }
    let names: Vec<String> = names.map(str::to_string).collect();
    if names.is_empty() {
        return Err(CorpusError::BadHeader);
    }
    if let Some(expected) = expected {
        if names.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(CorpusError::SchemaMismatch {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: names,
            });
        }
    }
    let schema: Arc<[String]> = names.clone().into();
    let mut strings = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = i + 1;
        let mut fields = record.iter();
        let id = fields.next().unwrap_or_default().to_string();
        let values = fields
            .zip(&names)
            .map(|(cell, column)| {
                if cell == NULL_TOKEN {
                    return Ok(None);
                }
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(Some)
                    .ok_or_else(|| CorpusError::NonNumeric {
                        row,
                        column: column.clone(),
                        value: cell.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        strings.push(DsnsString::new(id, schema.clone(), values)?);
    }
    if strings.is_empty() {
        return Err(CorpusError::EmptyBody);
    }
    Ok(Sample::new(domain, strings)?)
}

pub fn write_attribute_csv<W: Write>(writer: W, sample: &Sample) -> Result<(), CorpusError> {
    write_strings_csv(writer, sample.schema(), sample.strings())
}

/// Writes strings sharing `schema`. Numbers use the shortest text that
/// parses back to the same value.
pub fn write_strings_csv<W: Write>(writer: W, schema: &[String], strings: &[DsnsString]) -> Result<(), CorpusError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(std::iter::once(ID_COLUMN).chain(schema.iter().map(String::as_str)))
        .map_err(csv_err)?;
    for s in strings {
        if **s.schema() != *schema {
            return Err(crate::dsns::DsnsError::SchemaMismatch.into());
        }
        let cells = s
            .values()
            .iter()
            .map(|v| v.map_or_else(|| NULL_TOKEN.to_string(), |x| x.to_string()));
        w.write_record(std::iter::once(s.object_id.clone()).chain(cells))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
