use super::{DsnsError, DsnsString};

/// Stand-in for a zero operand when only one side of a summative division
/// is zero.
pub const ZERO_SUBSTITUTE: f64 = 1e-6;

/// Decimal places each summative-division term is rounded to before
/// summing. The worked example in the source tables sums three-place terms
/// (2.024 + 2.114 + 2.137 = 6.275), and deviations are reproduced only if
/// the terms are rounded the same way.
pub const TERM_PLACES: u32 = 3;

/// Default number of decimal places used when comparing deviations.
pub const DEFAULT_PRECISION: u8 = 2;

/// `a/b + b/a`. Two zeros give 2; a single zero is replaced by
/// [`ZERO_SUBSTITUTE`] so the result stays finite.
pub fn summative_division(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 2.0;
    }
    let a = if a == 0.0 { ZERO_SUBSTITUTE } else { a };
    let b = if b == 0.0 { ZERO_SUBSTITUTE } else { b };
    a / b + b / a
}

pub fn round_to(x: f64, places: u32) -> f64 {
    let scale = 10f64.powi(places as i32);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub value: f64,
    /// Decimal places used when matching against another deviation.
    pub precision: u8,
    /// Attributes that survived NULL reduction.
    pub attributes: usize,
}

impl Deviation {
    pub fn new(value: f64, precision: u8) -> Self {
        Deviation {
            value,
            precision,
            attributes: 0,
        }
    }

    /// The value scaled to an integer at this deviation's precision.
    pub fn units(&self) -> i64 {
        units(self.value, self.precision)
    }

    /// Equal once both are rounded to `self.precision` places.
    pub fn matches(&self, other: f64) -> bool {
        self.units() == units(other, self.precision)
    }

    /// Fixed-point text at this deviation's precision, e.g. `"7.27"`.
    pub fn render(&self) -> String {
        format!("{:.*}", self.precision as usize, self.value)
    }
}

impl std::fmt::Display for Deviation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

fn units(x: f64, precision: u8) -> i64 {
    (x * 10f64.powi(precision as i32)).round() as i64
}

/// Attribute pairs that survive NULL reduction: positions where both
/// strings have a value.
fn surviving(s1: &DsnsString, s2: &DsnsString) -> Result<Vec<(f64, f64)>, DsnsError> {
    if s1.schema() != s2.schema() {
        return Err(DsnsError::SchemaMismatch);
    }
    let pairs: Vec<(f64, f64)> = s1
        .values()
        .iter()
        .zip(s2.values())
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect();
    if pairs.is_empty() {
        return Err(DsnsError::NoSurvivingAttributes);
    }
    Ok(pairs)
}

/// Sum of absolute differences plus summative divisions (terms rounded to
/// [`TERM_PLACES`]) minus the indifference baseline `2n`.
pub fn deviation(s1: &DsnsString, s2: &DsnsString) -> Result<Deviation, DsnsError> {
    deviation_at(s1, s2, DEFAULT_PRECISION)
}

pub fn deviation_at(s1: &DsnsString, s2: &DsnsString, precision: u8) -> Result<Deviation, DsnsError> {
    let pairs = surviving(s1, s2)?;
    Ok(Deviation {
        value: deviation_of_pairs(&pairs),
        precision,
        attributes: pairs.len(),
    })
}

pub(crate) fn deviation_of_pairs(pairs: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for &(a, b) in pairs {
        total += (a - b).abs() + round_to(summative_division(a, b), TERM_PLACES);
    }
    total - 2.0 * pairs.len() as f64
}

/// Same formula with unrounded summative divisions.
pub fn deviation_unrounded(s1: &DsnsString, s2: &DsnsString) -> Result<f64, DsnsError> {
    let pairs = surviving(s1, s2)?;
    Ok(pairs
        .iter()
        .map(|&(a, b)| (a - b).abs() + summative_division(a, b) - 2.0)
        .sum())
}

/// Digit-wise merge of two deviations, `target` on top.
///
/// Both are rendered at the target's precision and aligned at the decimal
/// point. Where both have a digit, the bottom digit is taken if the top
/// digit is divisible by it, otherwise the top digit stays; a zero bottom
/// digit leaves the top digit. Top digits with nothing below are kept,
/// bottom digits with nothing above are dropped, so the result has the
/// target's shape.
pub fn merge_deviations(target: Deviation, other: Deviation) -> Deviation {
    let top = format!("{:.*}", target.precision as usize, target.value.abs());
    let bottom = format!("{:.*}", target.precision as usize, other.value.abs());
    let mut merged = merge_digits(&top, &bottom);
    if target.value < 0.0 && target.units() != 0 {
        merged.insert(0, '-');
    }
    Deviation {
        value: merged.parse().expect("merged digits form a number"),
        precision: target.precision,
        attributes: target.attributes,
    }
}

/// The merge rule on plain decimal strings of non-negative numbers.
pub fn merge_digits(top: &str, bottom: &str) -> String {
    let (top_int, top_frac) = top.split_once('.').unwrap_or((top, ""));
    let (bot_int, bot_frac) = bottom.split_once('.').unwrap_or((bottom, ""));
    let pick = |t: u8, b: Option<u8>| -> char {
        let t = t - b'0';
        let d = match b {
            Some(b) if b != b'0' && t.is_multiple_of(b - b'0') => b - b'0',
            _ => t,
        };
        char::from(b'0' + d)
    };
    let offset = bot_int.len() as isize - top_int.len() as isize;
    let mut out = String::with_capacity(top.len());
    for (i, t) in top_int.bytes().enumerate() {
        let j = i as isize + offset;
        let b = (j >= 0).then(|| bot_int.as_bytes()[j as usize]);
        out.push(pick(t, b));
    }
    if top.contains('.') {
        out.push('.');
        for (i, t) in top_frac.bytes().enumerate() {
            out.push(pick(t, bot_frac.as_bytes().get(i).copied()));
        }
    }
    out
}
