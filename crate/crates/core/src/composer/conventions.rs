use std::fmt;
use std::str::FromStr;

use crate::chess::{flight_squares, Color, Position};
use crate::solver::SolveReport;

use super::ComposerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    NoCooks,
    NoDuals,
    NoCheckKey,
    NoCaptureKey,
    NoFlightRestrictingKey,
}

impl Convention {
    pub const ALL: [Convention; 5] = [
        Convention::NoCooks,
        Convention::NoDuals,
        Convention::NoCheckKey,
        Convention::NoCaptureKey,
        Convention::NoFlightRestrictingKey,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Convention::NoCooks => "no-cooks",
            Convention::NoDuals => "no-duals",
            Convention::NoCheckKey => "no-check-key",
            Convention::NoCaptureKey => "no-capture-key",
            Convention::NoFlightRestrictingKey => "no-flight-restricting-key",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = ComposerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Convention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ComposerError::UnknownConvention(s.to_string()))
    }
}

/// Parses a comma-separated list such as `no-cooks,no-check-key`. An empty
/// string or `none` is the empty set.
pub fn parse_conventions(list: &str) -> Result<Vec<Convention>, ComposerError> {
    let list = list.trim();
    if list.is_empty() || list == "none" {
        return Ok(Vec::new());
    }
    let mut out: Vec<Convention> = list
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionReport {
    pub results: Vec<(Convention, bool)>,
}

impl ConventionReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.1)
    }

    pub fn failed(&self) -> impl Iterator<Item = Convention> + '_ {
        self.results.iter().filter(|r| !r.1).map(|r| r.0)
    }

    pub fn holds(&self, c: Convention) -> Option<bool> {
        self.results.iter().find(|r| r.0 == c).map(|r| r.1)
    }
}

/// Would the key take away any square the black king could flee to before
/// it was played?
pub fn restricts_flights(pos: &Position, report: &SolveReport) -> bool {
    let Some(key) = report.keys.first() else {
        return false;
    };
    let before = flight_squares(pos, Color::Black);
    let after = flight_squares(&pos.make_move(key), Color::Black);
    !before.is_subset(&after)
}

/// Checks each convention against a solved position. Duals count at White's
/// second move; with `strict_duals` duals at the mating move count too.
/// A position without a key fails every convention.
pub fn check_conventions(
    pos: &Position,
    report: &SolveReport,
    conventions: &[Convention],
    strict_duals: bool,
) -> ConventionReport {
    let key = report.keys.first();
    let results = conventions
        .iter()
        .map(|&c| {
            let holds = key.is_some_and(|key| match c {
                Convention::NoCooks => !report.is_cooked(),
                Convention::NoDuals => {
                    let (second, third) = report.duals();
                    second == 0 && (!strict_duals || third == 0)
                }
                Convention::NoCheckKey => !key.check,
                Convention::NoCaptureKey => !key.capture,
                Convention::NoFlightRestrictingKey => !restricts_flights(pos, report),
            });
            (c, holds)
        })
        .collect();
    ConventionReport { results }
}
