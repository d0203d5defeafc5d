//! Reading JSON inputs from files or stdin, with locations in every error.

use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use symnet_core::formats::{EquivRelDto, LevelSeedDto, MatrixDto, NetDto};
use symnet_core::{EquivRel, FormNet, IndexSet, LevelSeed, ModRing, SympMatrix};

use crate::CliError;

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &Path) -> Result<String, CliError> {
    let shown = path.display().to_string();
    if shown == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| CliError::Io { path: shown, source })?;
        return Ok(buf);
    }
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown, source })
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let located = format!(" at line {} column {}", e.line(), e.column());
        CliError::Json {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: full.strip_suffix(&located).unwrap_or(&full).to_string(),
        }
    })
}

fn invalid(origin: &str) -> impl FnOnce(symnet_core::Error) -> CliError + '_ {
    move |source| CliError::Invalid { path: origin.to_string(), source }
}

pub fn parse_matrix(text: &str, origin: &str) -> Result<SympMatrix, CliError> {
    let dto: MatrixDto = parse_json(text, origin)?;
    SympMatrix::try_from(dto).map_err(invalid(origin))
}

pub fn parse_net(text: &str, origin: &str) -> Result<FormNet, CliError> {
    let dto: NetDto = parse_json(text, origin)?;
    FormNet::try_from(dto).map_err(invalid(origin))
}

pub fn parse_relation(text: &str, origin: &str) -> Result<EquivRel, CliError> {
    let dto: EquivRelDto = parse_json(text, origin)?;
    EquivRel::try_from(dto).map_err(invalid(origin))
}

pub fn parse_seed_levels(text: &str, origin: &str, index_set: IndexSet) -> Result<(ModRing, LevelSeed), CliError> {
    let dto: LevelSeedDto = parse_json(text, origin)?;
    dto.to_seed(index_set).map_err(invalid(origin))
}

pub fn load_matrix(path: &Path) -> Result<SympMatrix, CliError> {
    parse_matrix(&read_source(path)?, &path.display().to_string())
}

pub fn load_net(path: &Path) -> Result<FormNet, CliError> {
    parse_net(&read_source(path)?, &path.display().to_string())
}

pub fn load_relation(path: &Path) -> Result<EquivRel, CliError> {
    parse_relation(&read_source(path)?, &path.display().to_string())
}

pub fn load_seed_levels(path: &Path, index_set: IndexSet) -> Result<(ModRing, LevelSeed), CliError> {
    parse_seed_levels(&read_source(path)?, &path.display().to_string(), index_set)
}
