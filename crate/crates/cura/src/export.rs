//! Atomic file emission for experiment artifacts: CSV tables with fixed
//! header rows, JSON documents, and the codebook manifest + coefficient
//! matrix pair. Every file records the configuration hash so plots are
//! traceable to their inputs; floats are printed as shortest round-trip
//! decimals (the default formatting).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::codebook::{Codebook, CodebookOptions, CodewordMeta, LayoutSummary};
use crate::error::{Error, Result};

/// Writes bytes to `path` atomically: a temp file in the same directory is
/// renamed into place, so readers never observe a partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", file_name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Renders a CSV document: a `# config_hash=<hash>` comment line, the fixed
/// header row, then one comma-joined row per record.
pub fn csv_document<I, R>(config_hash: &str, header: &str, rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = String::new();
    out.push_str(&format!("# config_hash={config_hash}\n"));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for field in row {
            if !first {
                out.push(',');
            }
            out.push_str(&field);
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Writes a CSV document atomically.
pub fn write_csv<I, R>(path: &Path, config_hash: &str, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    atomic_write(path, csv_document(config_hash, header, rows).as_bytes())
}

/// JSON document wrapper stamping the configuration hash next to the payload.
#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    config_hash: &'a str,
    #[serde(flatten)]
    payload: &'a T,
}

/// Writes a pretty-printed JSON document atomically, with the configuration
/// hash injected as a top-level `config_hash` field.
pub fn write_json<T: Serialize>(path: &Path, config_hash: &str, payload: &T) -> Result<()> {
    let doc = Stamped {
        config_hash,
        payload,
    };
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// Codebook manifest: generation inputs, switches, layout breakdown, and
/// per-codeword metadata. The coefficient matrix lives in a sibling CSV.
#[derive(Serialize)]
pub struct CodebookManifest<'a> {
    pub fingerprint: &'a str,
    pub size: usize,
    pub vector_length: usize,
    pub switches: &'a CodebookOptions,
    pub layout: Option<&'a LayoutSummary>,
    pub codewords: Vec<&'a CodewordMeta>,
}

/// Writes `<stem>.manifest.json` and (optionally) `<stem>.coefficients.csv`.
///
/// The coefficient matrix is column-major over codewords: one CSV row per
/// codeword, entries interleaved `re_0,im_0,re_1,im_1,…` in double precision.
pub fn write_codebook(
    dir: &Path,
    stem: &str,
    codebook: &Codebook,
    options: &CodebookOptions,
    layout: Option<&LayoutSummary>,
    config_hash: &str,
    write_coefficients: bool,
) -> Result<Vec<PathBuf>> {
    let vector_length = codebook.codewords().first().map_or(0, |(w, _)| w.len());
    let manifest = CodebookManifest {
        fingerprint: codebook.fingerprint(),
        size: codebook.len(),
        vector_length,
        switches: options,
        layout,
        codewords: codebook.codewords().iter().map(|(_, meta)| meta).collect(),
    };
    let manifest_path = dir.join(format!("{stem}.manifest.json"));
    write_json(&manifest_path, config_hash, &manifest)?;
    let mut written = vec![manifest_path];
    if write_coefficients {
        let path = dir.join(format!("{stem}.coefficients.csv"));
        let rows = codebook.codewords().iter().map(|(w, _)| {
            w.coefficients()
                .iter()
                .flat_map(|c| [c.re.to_string(), c.im.to_string()])
                .collect::<Vec<_>>()
        });
        write_csv(&path, config_hash, "interleaved_re_im", rows)?;
        written.push(path);
    }
    Ok(written)
}
