//! Locating and loading benchmark instances.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use gcp_neutral::graph::{read_dimacs, Graph};
use gcp_neutral::manifest::{find, normalize_name, parse_manifest, InstanceMeta};

use crate::HarnessError;

/// Bundled metadata for the standard benchmark set.
pub const BUNDLED_MANIFEST: &str = include_str!("../../../instances/manifest.csv");

/// Environment variable naming an extra directory of `.col` files.
pub const INSTANCE_DIR_VAR: &str = "GCP_INSTANCE_DIR";

/// A graph ready for experiments, with the number of colors to use.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub path: PathBuf,
    pub graph: Graph,
    pub meta: Option<InstanceMeta>,
    pub k: usize,
}

impl Instance {
    /// Size of the 1-move neighborhood, `n * (k - 1)`.
    pub fn nbh_size(&self) -> usize {
        self.graph.n() * (self.k - 1)
    }
}

/// Directories searched for bare instance names, in order.
pub fn instance_dirs() -> Vec<PathBuf> {
    let mut dirs = Vec::new();
    if let Some(dir) = std::env::var_os(INSTANCE_DIR_VAR) {
        dirs.push(PathBuf::from(dir));
    }
    dirs.push(PathBuf::from("instances"));
    dirs.push(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances"));
    dirs
}

/// Finds the file for `target`: an existing path is used as is; otherwise the
/// directories are scanned for a file whose normalized name matches, so
/// `le_450_25c`, `LE450_25C.col` and `le450_25c.col` all resolve alike.
pub fn locate(target: &str, dirs: &[PathBuf]) -> Option<PathBuf> {
    let direct = Path::new(target);
    if direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let wanted = normalize_name(target);
    dirs.iter().find_map(|dir| {
        let mut hits: Vec<PathBuf> = std::fs::read_dir(dir)
            .ok()?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.is_file() && !matches!(p.extension(), Some(e) if !e.eq_ignore_ascii_case("col"))
            })
            .filter(|p| {
                p.file_name()
                    .and_then(|f| f.to_str())
                    .map(normalize_name)
                    .as_deref()
                    == Some(wanted.as_str())
            })
            .collect();
        hits.sort();
        hits.into_iter().next()
    })
}

pub fn load_manifest_entries(path: Option<&Path>) -> Result<Vec<InstanceMeta>, HarnessError> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", p.display())))?,
        None => BUNDLED_MANIFEST.to_string(),
    };
    parse_manifest(&text).map_err(|e| HarnessError::Config(format!("manifest: {e}")))
}

/// Parses the instance file and settles `k`: the override if given, else the
/// manifest's chromatic number.
pub fn load_instance(
    target: &str,
    dirs: &[PathBuf],
    manifest: &[InstanceMeta],
    k_override: Option<usize>,
) -> Result<Instance, HarnessError> {
    let path = locate(target, dirs).ok_or_else(|| HarnessError::MissingInstance {
        name: target.to_string(),
        searched: dirs.to_vec(),
    })?;
    let file =
        File::open(&path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    let graph = read_dimacs(BufReader::new(file)).map_err(|source| HarnessError::Parse {
        path: path.clone(),
        source,
    })?;
    let name = path
        .file_name()
        .and_then(|f| f.to_str())
        .map(normalize_name)
        .unwrap_or_else(|| normalize_name(target));
    let meta = find(manifest, &name).cloned();
    if let Some(m) = &meta {
        if m.n != graph.n() {
            return Err(HarnessError::Config(format!(
                "{}: {} vertices, manifest says {}",
                path.display(),
                graph.n(),
                m.n
            )));
        }
    }
    let k = match (k_override, &meta) {
        (Some(k), _) => k,
        (None, Some(m)) => m.chi,
        (None, None) => {
            return Err(HarnessError::Config(format!(
                "{name}: not in the manifest, pass --k"
            )))
        }
    };
    if k < 2 {
        return Err(HarnessError::Config(format!(
            "{name}: k must be at least 2"
        )));
    }
    Ok(Instance {
        name,
        path,
        graph,
        meta,
        k,
    })
}
