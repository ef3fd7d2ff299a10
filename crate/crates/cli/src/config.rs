//! Flat `key = value` config files whose keys are flag names.
//!
//! Lines are `key = value` or a bare `key` for switches; `#` starts a
//! comment. A key given on the command line wins over the file, and a key
//! may repeat when the flag itself repeats (`slot-box`).

use std::fs;

pub fn read(path: &str) -> Result<Vec<(String, Option<String>)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    parse(&text).map_err(|e| format!("{path}: {e}"))
}

pub fn parse(text: &str) -> Result<Vec<(String, Option<String>)>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim().to_string())),
            None => (line, None),
        };
        let key = key.trim_start_matches('-');
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(format!("line {}: malformed key in '{raw}'", n + 1));
        }
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", n + 1));
        }
        out.push((key.to_string(), value));
    }
    Ok(out)
}

fn given_on_command_line(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| a == &flag || a.starts_with(&format!("{flag}=")))
}

/// Command-line arguments for the entries of `entries` not already present
/// in `args`. Switches set to `false` are dropped.
pub fn to_args(entries: &[(String, Option<String>)], args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for (key, value) in entries {
        if given_on_command_line(args, key) {
            continue;
        }
        match value.as_deref() {
            None | Some("true") => out.push(format!("--{key}")),
            Some("false") => {}
            Some(v) => out.push(format!("--{key}={v}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let entries = parse("# sweep\ntheorem = t2\np = 1,2\nrelaxed-domain\nseed = 7 # comment\n").unwrap();
        assert_eq!(entries.len(), 4);
        let args: Vec<String> = vec!["--seed".into(), "9".into()];
        let merged = to_args(&entries, &args);
        assert_eq!(merged, ["--theorem=t2", "--p=1,2", "--relaxed-domain"]);
        let off = parse("relaxed-domain = false").unwrap();
        assert!(to_args(&off, &[]).is_empty());
    }

    #[test]
    fn rejects_nested_config() {
        assert!(parse("config = other.cfg").is_err());
        assert!(parse("bad key = 1").is_err());
    }
}
