//! `key = value` defaults. Keys are long flag names (`_` and `-` are
//! interchangeable); flags given on the command line win. Keys belonging to
//! other subcommands are ignored so one file can serve several runs.

use std::collections::{HashMap, HashSet};
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::{ArgAction, CommandFactory};

use crate::{Cli, Failure};

/// Options that take a value and may precede the subcommand name.
const GLOBAL_VALUED: [&str; 5] = ["--config", "--output", "-o", "--dx", "--c"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::Validation(format!("config line {}: expected 'key = value'", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Failure::Validation(format!("config line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn subcommand_name(args: &[OsString], names: &HashSet<String>) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if GLOBAL_VALUED.contains(&s.as_ref()) {
            it.next();
        } else if names.contains(s.as_ref()) {
            return Some(s.into_owned());
        }
    }
    None
}

fn given_on_command_line(args: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    let prefix = format!("--{long}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefix)
    })
}

fn takes_value(action: &ArgAction) -> bool {
    action.takes_values()
}

/// Appends config-file defaults to `args` as ordinary flags.
pub fn with_config_defaults(mut args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| Failure::Validation(format!("config {}: {e}", path.display())))?;
    let entries = parse(&text)?;

    let cmd = Cli::command();
    let globals: HashMap<String, bool> = cmd
        .get_arguments()
        .filter_map(|a| a.get_long().map(|l| (l.to_string(), takes_value(a.get_action()))))
        .collect();
    let names: HashSet<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let mut known: HashSet<String> = globals.keys().cloned().collect();
    for sub in cmd.get_subcommands() {
        known.extend(sub.get_arguments().filter_map(|a| a.get_long().map(str::to_string)));
    }
    let local: HashMap<String, bool> = subcommand_name(&args, &names)
        .and_then(|n| cmd.find_subcommand(&n))
        .map(|sub| {
            sub.get_arguments()
                .filter_map(|a| a.get_long().map(|l| (l.to_string(), takes_value(a.get_action()))))
                .collect()
        })
        .unwrap_or_default();

    for (key, value) in entries {
        if key == "config" {
            return Err(Failure::Validation(
                "config files cannot include other config files".into(),
            ));
        }
        if !known.contains(&key) {
            return Err(Failure::Validation(format!("unknown config key '{key}'")));
        }
        let Some(&valued) = local.get(&key).or_else(|| globals.get(&key)) else {
            continue;
        };
        if given_on_command_line(&args, &key) {
            continue;
        }
        if valued {
            args.push(format!("--{key}").into());
            args.push(value.into());
        } else {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => args.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(Failure::Validation(format!("config key '{key}' expects true or false"))),
            }
        }
    }
    Ok(args)
}
