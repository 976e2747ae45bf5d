//! Plain-text `key=value` configuration files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::experiment::{ExperimentConfig, OutputFormat};
use crate::decoder::IterativeConfig;
use crate::error::{Error, Result};
use crate::protocols::ProtocolKind;

/// Parses `key=value` lines; `#` starts a comment. Later keys win.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
}

pub fn parse_format(v: &str) -> Result<OutputFormat> {
    match v.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(Error::Config(format!("unknown format `{v}`"))),
    }
}

pub fn parse_protocol(v: &str) -> Result<ProtocolKind> {
    ProtocolKind::parse(v).ok_or_else(|| Error::Config(format!("unknown protocol `{v}`")))
}

/// Overrides fields of `base` with the entries of `map`.
pub fn apply_key_values(
    mut base: ExperimentConfig,
    map: &BTreeMap<String, String>,
) -> Result<ExperimentConfig> {
    for (k, v) in map {
        match k.as_str() {
            "protocol" => base.protocol = parse_protocol(v)?,
            "d" => base.d = parse(k, v)?,
            "p_circuit" => base.p_circuit = parse(k, v)?,
            "p_in" => {
                base.p_in = v
                    .split(',')
                    .map(|s| parse(k, s.trim()))
                    .collect::<Result<Vec<f64>>>()?
            }
            "shots" => base.shots = parse(k, v)?,
            "seed" => base.seed = parse(k, v)?,
            "max_iters" => base.decoder = IterativeConfig::new(parse(k, v)?)?,
            "out" => base.out = Some(PathBuf::from(v)),
            "format" => base.format = parse_format(v)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
    }
    base.validate()?;
    Ok(base)
}

pub fn load_config(text: &str) -> Result<ExperimentConfig> {
    apply_key_values(ExperimentConfig::default(), &parse_key_values(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let c = load_config("# sweep\nprotocol = 15to1\nd=5\np_in = 0.01, 0.1\nshots=100\nmax-iters=4\nformat=json\n").unwrap();
        assert_eq!(c.protocol, ProtocolKind::FifteenToOne);
        assert_eq!(c.d, 5);
        assert_eq!(c.p_in, vec![0.01, 0.1]);
        assert_eq!(c.decoder.max_global_iters, 4);
        assert_eq!(c.format, OutputFormat::Json);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(load_config("d=4").is_err());
        assert!(load_config("bogus=1").is_err());
        assert!(load_config("shots").is_err());
        assert!(load_config("shots=0").is_err());
        assert!(load_config("max_iters=0").is_err());
        assert!(load_config("p_in=1.5").is_err());
    }
}
