//! Flat key-value configuration: a TOML file overlaid by command-line flags.
//!
//! Every subcommand has a flag struct (all fields optional) and a resolved
//! parameter struct (all fields defaulted). Resolution serializes the flags
//! that were given, lays them over the file's table and deserializes the
//! result, so unknown keys and ill-typed values are rejected by name.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use toml::Table;

use crate::CliError;

/// Reads `path` as a flat table; nested tables are rejected.
pub fn load_table(path: &Path) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config `{}`: {e}", path.display())))?;
    let table: Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("config `{}`: {e}", path.display())))?;
    if let Some((key, _)) = table.iter().find(|(_, v)| v.is_table()) {
        return Err(CliError::Config(format!(
            "config `{}`: key `{key}` is a table; the config format is flat key = value",
            path.display()
        )));
    }
    Ok(table)
}

/// Overlays `flags` (and `tol`, when given) on `file` and resolves the parameters.
pub fn resolve<F, P>(file: Table, flags: &F, tol: Option<f64>) -> Result<P, CliError>
where
    F: Serialize,
    P: DeserializeOwned,
{
    let mut merged = file;
    let given = Table::try_from(flags).map_err(|e| CliError::Config(e.to_string()))?;
    merged.extend(given);
    if let Some(tol) = tol {
        merged.insert("tol".into(), tol.into());
    }
    merged.clone().try_into().map_err(|e: toml::de::Error| {
        // Deserializing a table loses the key of a mistyped value; find it by
        // resolving each key on its own over the defaults.
        let culprit = merged.iter().find(|(k, v)| {
            let mut single = Table::new();
            single.insert((*k).clone(), (*v).clone());
            single.try_into::<P>().is_err()
        });
        match culprit {
            Some((k, v)) => CliError::Config(format!("key `{k}` = {v}: {}", e.message())),
            None => CliError::Config(e.message().to_owned()),
        }
    })
}

/// `key = value` lines of the resolved parameters, sorted by key.
pub fn echo<P: Serialize>(params: &P) -> Vec<String> {
    match Table::try_from(params) {
        Ok(t) => t.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
        Err(e) => vec![format!("<unserializable config: {e}>")],
    }
}
