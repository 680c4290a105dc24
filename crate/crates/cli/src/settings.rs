//! Config-file defaults. Every long flag of a subcommand can be given as
//! `flag-name = value`; the entries are spliced in front of the real
//! arguments so anything on the command line wins.

use std::ffi::OsString;

use clap::{ArgAction, Command};
use dsns_core::corpus::parse_config;

use crate::error::{io, usage, CliError};

fn config_path(argv: &[OsString]) -> Option<(usize, OsString)> {
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return argv.get(i + 1).map(|v| (i + 1, v.clone()));
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some((i, OsString::from(v)));
        }
    }
    None
}

fn truthy(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(usage(format!("config key `{key}` expects true or false, got `{value}`"))),
    }
}

pub fn expand(cmd: &Command, argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some((config_at, path)) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| io(format!("config {}", path.to_string_lossy()), e))?;
    let config = parse_config(&text).map_err(usage)?;
    let Some((at, sub)) = argv.iter().enumerate().skip(1).find_map(|(i, a)| {
        if i == config_at {
            return None;
        }
        cmd.find_subcommand(a.to_str()?).map(|s| (i, s))
    }) else {
        return Ok(argv);
    };
    let mut spliced = Vec::new();
    for key in config.keys() {
        let value = config.get(key).unwrap_or_default();
        if key == "config" {
            return Err(usage("a config file cannot name another config file"));
        }
        match sub.get_arguments().find(|a| a.get_long() == Some(key)) {
            Some(arg) if matches!(arg.get_action(), ArgAction::SetTrue) => {
                if truthy(key, value)? {
                    spliced.push(OsString::from(format!("--{key}")));
                }
            }
            Some(_) => spliced.push(OsString::from(format!("--{key}={value}"))),
            None => {
                let known = cmd
                    .get_subcommands()
                    .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)));
                if !known {
                    return Err(usage(format!("unknown config key `{key}`")));
                }
            }
        }
    }
    let mut out = argv;
    out.splice(at + 1..at + 1, spliced);
    Ok(out)
}
