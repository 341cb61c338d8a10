//! File formats: bicomplex JSON, multiplex edge lists, CSV tables and SVG
//! barcodes.

mod edgelist;
mod json;
mod svg;
mod tables;

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

pub use edgelist::{parse_labels, parse_multiplex, read_labels_str, read_multiplex_str};
pub use json::{bicomplex_to_json, parse_bicomplex, read_bicomplex_str, VertexLabels};
pub use svg::render_barcode_svg;
pub use tables::{betti_csv, format_sig6, hub_map_csv, laplacian_csv, ranking_csv};

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Writes several files atomically one by one. Callers produce every
/// payload before calling, so a failure in computation leaves no files.
pub fn write_all_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    for (p, b) in files {
        write_atomic(p, b)?;
    }
    Ok(())
}
