//! CSV result files with `#` metadata lines.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ConfigEcho;
use crate::CliError;

/// Round-trip format for reals: 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn opt_int<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Metadata written above the CSV header.
#[derive(Debug, Default)]
pub struct Metadata {
    lines: Vec<(String, String)>,
}

impl Metadata {
    pub fn new<A: Serialize>(config: &ConfigEcho<'_, A>, map_source: Option<&str>) -> Result<Self, CliError> {
        let mut m = Metadata::default();
        m.push("generator", format!("recur {}", env!("CARGO_PKG_VERSION")));
        m.push("config", serde_json::to_string(config)?);
        if let Some(src) = map_source {
            m.push("map_source", serde_json::to_string(src.trim())?);
        }
        Ok(m)
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.lines.push((key.to_string(), value.into()));
    }

    pub fn push_json<T: Serialize>(&mut self, key: &str, value: &T) -> Result<(), CliError> {
        self.push(key, serde_json::to_string(value)?);
        Ok(())
    }
}

/// A CSV file being written; rows are flushed on [`ResultFile::finish`].
pub struct ResultFile {
    path: PathBuf,
    writer: csv::Writer<BufWriter<File>>,
}

impl ResultFile {
    pub fn create(dir: &Path, name: &str, meta: &Metadata, header: &[&str]) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut out = BufWriter::new(file);
        for (k, v) in &meta.lines {
            // Keep every metadata entry on one line.
            let v = v.replace(['\n', '\r'], " ");
            writeln!(out, "# {k}: {v}").map_err(|e| CliError::io(&path, e))?;
        }
        let mut writer = csv::WriterBuilder::new().from_writer(out);
        writer.write_record(header)?;
        Ok(Self { path, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// Writes `contents` to `dir/name`, creating `dir`.
pub fn write_text(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.078087, 1e-300, -7.5e12] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(opt_num(None), "");
    }
}
