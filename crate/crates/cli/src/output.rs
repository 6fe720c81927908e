use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Output directory: the flag (or `NONHOLO_OUT`, which clap folds into it),
/// then the config's own setting, then `out/<name>`.
pub fn resolve(flag: Option<&Path>, config_dir: Option<&str>, name: &str) -> Result<PathBuf, CliError> {
    let dir = match (flag, config_dir) {
        (Some(d), _) => d.to_path_buf(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => Path::new("out").join(name),
    };
    fs::create_dir_all(&dir).map_err(|e| CliError::output(dir.display(), e))?;
    Ok(dir)
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::output(path.display(), e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::output(path.display(), e))
}
