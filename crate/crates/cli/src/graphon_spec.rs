//! Graphon selection for configuration documents and command lines.
//!
//! The tools work with the stochastic block model family (a constant kernel
//! is a one-block SBM). On the command line a graphon is written as
//! `constant:P`, `sbm:PATH`, or `two-block:P,Q` (equal blocks); in JSON
//! documents it is either inlined or referenced by file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use omaslab::graphon::SbmDocument;
use omaslab::Sbm64;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GraphonSpec {
    /// `w = p` everywhere.
    Constant { p: f64 },
    /// Inline SBM document: block boundaries and the probability matrix.
    Sbm {
        boundaries: Vec<f64>,
        p: Vec<Vec<f64>>,
    },
    /// SBM document loaded from a JSON file.
    SbmFile { path: PathBuf },
}

impl GraphonSpec {
    /// Parses the command-line syntax.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .with_context(|| format!("graphon `{text}` is not of the form kind:args"))?;
        match kind {
            "constant" => {
                let p: f64 = rest
                    .parse()
                    .context("constant graphon needs a probability")?;
                Ok(GraphonSpec::Constant { p })
            }
            "two-block" => {
                let (p, q) = rest
                    .split_once(',')
                    .context("two-block graphon needs two probabilities P,Q")?;
                let p: f64 = p.trim().parse().context("bad in-block probability")?;
                let q: f64 = q.trim().parse().context("bad cross-block probability")?;
                Ok(GraphonSpec::Sbm {
                    boundaries: vec![0.0, 0.5, 1.0],
                    p: vec![vec![p, q], vec![q, p]],
                })
            }
            "sbm" => Ok(GraphonSpec::SbmFile {
                path: PathBuf::from(rest),
            }),
            other => bail!("unknown graphon kind `{other}` (use constant:, two-block:, sbm:)"),
        }
    }

    /// Builds the concrete graphon, reading the document file if needed.
    pub fn build(&self) -> Result<Sbm64> {
        match self {
            GraphonSpec::Constant { p } => Sbm64::constant(*p).context("invalid constant graphon"),
            GraphonSpec::Sbm { boundaries, p } => {
                let doc = SbmDocument {
                    boundaries: boundaries.clone(),
                    p: p.clone(),
                };
                doc.build().context("invalid inline SBM document")
            }
            GraphonSpec::SbmFile { path } => load_sbm_document(path),
        }
    }

    /// Short label used in summaries and comparison tables.
    pub fn label(&self) -> String {
        match self {
            GraphonSpec::Constant { p } => format!("constant({p})"),
            GraphonSpec::Sbm { p, .. } => format!("sbm({} blocks)", p.len()),
            GraphonSpec::SbmFile { path } => format!("sbm({})", path.display()),
        }
    }
}

/// Reads an SBM graphon from its JSON document (`boundaries` + `p`).
pub fn load_sbm_document(path: &Path) -> Result<Sbm64> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read SBM document {}", path.display()))?;
    let doc: SbmDocument = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse SBM document {}", path.display()))?;
    doc.build()
        .with_context(|| format!("invalid SBM document {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use omaslab::graphon::Graphon;

    #[test]
    fn parses_the_cli_forms() {
        let c = GraphonSpec::parse("constant:0.5").unwrap();
        assert!((c.build().unwrap().eval(0.3, 0.9) - 0.5).abs() < 1e-15);

        let t = GraphonSpec::parse("two-block:0.8,0.2").unwrap();
        let g = t.build().unwrap();
        assert!((g.eval(0.1, 0.2) - 0.8).abs() < 1e-15);
        assert!((g.eval(0.1, 0.9) - 0.2).abs() < 1e-15);

        assert!(GraphonSpec::parse("constant").is_err());
        assert!(GraphonSpec::parse("blob:1").is_err());
    }

    #[test]
    fn loads_documents_from_disk() {
        let dir = std::env::temp_dir().join(format!("omaslab-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sbm.json");
        std::fs::write(
            &path,
            r#"{"boundaries": [0.0, 0.5, 1.0], "p": [[0.8, 0.2], [0.2, 0.8]]}"#,
        )
        .unwrap();
        let spec = GraphonSpec::parse(&format!("sbm:{}", path.display())).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g.blocks(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }
}
