use std::sync::Arc;

use super::DsnsError;

/// One object's attribute values. `None` is the NULL marker for an
/// attribute that could not be measured.
#[derive(Debug, Clone, PartialEq)]
pub struct DsnsString {
    pub object_id: String,
    schema: Arc<[String]>,
    values: Vec<Option<f64>>,
}

impl DsnsString {
    pub fn new(
        object_id: impl Into<String>,
        schema: Arc<[String]>,
        values: Vec<Option<f64>>,
    ) -> Result<Self, DsnsError> {
        if values.len() != schema.len() {
            return Err(DsnsError::RowWidth {
                expected: schema.len(),
                found: values.len(),
            });
        }
        check_unique(&schema)?;
        Ok(DsnsString {
            object_id: object_id.into(),
            schema,
            values,
        })
    }

    /// Builds a string with its own schema from `(name, value)` pairs.
    pub fn from_pairs<'a>(
        object_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, Option<f64>)>,
    ) -> Result<Self, DsnsError> {
        let (names, values): (Vec<String>, Vec<Option<f64>>) =
            pairs.into_iter().map(|(n, v)| (n.to_string(), v)).unzip();
        DsnsString::new(object_id, names.into(), values)
    }

    pub fn schema(&self) -> &Arc<[String]> {
        &self.schema
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        self.schema
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn check_unique(schema: &[String]) -> Result<(), DsnsError> {
    for (i, name) in schema.iter().enumerate() {
        if schema[..i].contains(name) {
            return Err(DsnsError::DuplicateAttribute(name.clone()));
        }
    }
    Ok(())
}

/// A collection of strings from one domain sharing one schema, with the
/// observed value pool and range of every attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub domain: String,
    schema: Arc<[String]>,
    strings: Vec<DsnsString>,
    pools: Vec<Vec<f64>>,
    ranges: Vec<Option<(f64, f64)>>,
}

impl Sample {
    pub fn new(domain: impl Into<String>, strings: Vec<DsnsString>) -> Result<Self, DsnsError> {
        let first = strings.first().ok_or(DsnsError::EmptySample)?;
        let schema = first.schema.clone();
        for s in &strings {
            if *s.schema != *schema {
                return Err(DsnsError::SchemaMismatch);
            }
        }
        let mut pools: Vec<Vec<f64>> = vec![Vec::new(); schema.len()];
        for s in &strings {
            for (pool, v) in pools.iter_mut().zip(&s.values) {
                if let Some(v) = v {
                    if !pool.iter().any(|p| p.to_bits() == v.to_bits()) {
                        pool.push(*v);
                    }
                }
            }
        }
        let ranges = pools
            .iter()
            .map(|p| {
                p.iter().fold(None, |acc: Option<(f64, f64)>, &v| match acc {
                    None => Some((v, v)),
                    Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
                })
            })
            .collect();
        Ok(Sample {
            domain: domain.into(),
            schema,
            strings,
            pools,
            ranges,
        })
    }

    /// Convenience constructor from bare rows.
    pub fn from_rows(
        domain: impl Into<String>,
        schema: &[&str],
        rows: Vec<(String, Vec<Option<f64>>)>,
    ) -> Result<Self, DsnsError> {
        let schema: Arc<[String]> = schema.iter().map(|s| s.to_string()).collect();
        let strings = rows
            .into_iter()
            .map(|(id, values)| DsnsString::new(id, schema.clone(), values))
            .collect::<Result<Vec<_>, _>>()?;
        Sample::new(domain, strings)
    }

    pub fn schema(&self) -> &Arc<[String]> {
        &self.schema
    }

    pub fn strings(&self) -> &[DsnsString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Distinct observed non-NULL values of attribute `i`, in first-seen order.
    pub fn pool(&self, i: usize) -> &[f64] {
        &self.pools[i]
    }

    pub fn pool_by_name(&self, name: &str) -> Option<&[f64]> {
        self.schema
            .iter()
            .position(|n| n == name)
            .map(|i| self.pools[i].as_slice())
    }

    pub fn range(&self, i: usize) -> Option<(f64, f64)> {
        self.ranges[i]
    }
}
