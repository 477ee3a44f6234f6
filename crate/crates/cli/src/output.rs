//! File outputs: trajectory/spectrum CSV, JSON records, and content digests.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use omaslab::graphon::SimpleGraph;
use omaslab::{Spectrum64, Trajectory64};

/// Writes a trajectory as CSV with the columns
/// `k,t,event,n_before,n_after,V_before,V_after,mu2`.
pub fn write_trajectory_csv(path: &Path, trajectory: &Trajectory64) -> Result<()> {
    let mut out = BufWriter::new(create(path)?);
    writeln!(out, "k,t,event,n_before,n_after,V_before,V_after,mu2")?;
    for r in &trajectory.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.k, r.t, r.event, r.n_before, r.n_after, r.v_before, r.v_after, r.mu2
        )?;
    }
    Ok(out.flush()?)
}

/// Spectrum as CSV text with the columns `index,lambda,mu`
/// (1-based index, eigenvalues ascending).
pub fn spectrum_csv(spectrum: &Spectrum64) -> String {
    let mut text = String::from("index,lambda,mu\n");
    for (i, (l, m)) in spectrum.lambdas().iter().zip(spectrum.mus()).enumerate() {
        text.push_str(&format!("{},{},{}\n", i + 1, l, m));
    }
    text
}

/// Edge list as CSV text with the columns `i,j`
/// (0-based vertices, each undirected edge once with i < j).
pub fn edges_csv(graph: &SimpleGraph) -> String {
    let mut text = String::from("i,j\n");
    for (i, j) in graph.edges() {
        text.push_str(&format!("{i},{j}\n"));
    }
    text
}

/// Writes pretty-printed JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut out = BufWriter::new(create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(out.flush()?)
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("cannot write {}", path.display()))
}

/// Hex SHA-256 of a file's contents.
pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot digest {}", path.display()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
