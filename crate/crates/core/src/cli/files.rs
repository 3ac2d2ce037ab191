//! Profile, report and table files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Version of the profile and table layouts.
pub const FORMAT_VERSION: u32 = 1;
pub const GENERATOR: &str = concat!("frac-hardy ", env!("CARGO_PKG_VERSION"));

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp: PathBuf = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Columns `r u v_gamma` with `#`-prefixed `key=value` header lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFile {
    pub header: BTreeMap<String, String>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v_gamma: Vec<f64>,
}

impl ProfileFile {
    pub fn new(header: BTreeMap<String, String>, r: &[f64], u: &[f64], gamma: f64) -> Self {
        let v_gamma = r.iter().zip(u).map(|(r, u)| r.powf(gamma) * u).collect();
        Self { header, r: r.to_vec(), u: u.to_vec(), v_gamma }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# format=frac-hardy-profile\n# format_version={FORMAT_VERSION}\n# generator={GENERATOR}\n"));
        for (k, v) in &self.header {
            if !matches!(k.as_str(), "format" | "format_version" | "generator" | "columns") {
                out.push_str(&format!("# {k}={v}\n"));
            }
        }
        out.push_str("# columns=r u v_gamma\n");
        for i in 0..self.r.len() {
            out.push_str(&format!("{:e} {:e} {:e}\n", self.r[i], self.u[i], self.v_gamma[i]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut header = BTreeMap::new();
        let (mut r, mut u, mut v) = (Vec::new(), Vec::new(), Vec::new());
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let (k, val) = h.split_once('=').ok_or_else(|| format!("line {}: malformed header '{line}'", n + 1))?;
                header.insert(k.trim().to_string(), val.trim().to_string());
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(format!("line {}: expected 3 columns, found {}", n + 1, cols.len()));
            }
            let mut vals = [0.0; 3];
            for (slot, c) in vals.iter_mut().zip(&cols) {
                *slot = c.parse().map_err(|_| format!("line {}: bad number '{c}'", n + 1))?;
            }
            r.push(vals[0]);
            u.push(vals[1]);
            v.push(vals[2]);
        }
        if header.get("format").map(String::as_str) != Some("frac-hardy-profile") {
            return Err("missing '# format=frac-hardy-profile' header".into());
        }
        match header.get("format_version").map(|v| v.parse::<u32>()) {
            Some(Ok(FORMAT_VERSION)) => {}
            other => return Err(format!("unsupported profile format version {other:?}")),
        }
        if r.is_empty() {
            return Err("profile has no data rows".into());
        }
        Ok(Self { header, r, u, v_gamma: v })
    }
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    /// `OK`, `FAILED` or `SKIPPED`.
    pub status: &'static str,
    pub reason: String,
    pub lambda: Option<f64>,
    pub f_min: Option<f64>,
    pub gamma_theta: Option<f64>,
    pub pohozaev_ratio: Option<f64>,
    pub tail_slope: Option<f64>,
    pub weak_residual: Option<f64>,
    pub certified: bool,
}

pub const SWEEP_COLUMNS: &[&str] = &[
    "theta",
    "p",
    "q",
    "status",
    "lambda",
    "f_min",
    "gamma_theta",
    "pohozaev_ratio",
    "tail_slope",
    "weak_residual",
    "certified",
    "reason",
];

fn opt(v: Option<f64>) -> String {
    v.map_or("NA".into(), |x| format!("{x:e}"))
}

/// Tab-separated table with the configuration as `#` header lines.
pub fn sweep_table(config: &BTreeMap<String, String>, rows: &[SweepRow]) -> String {
    let mut out = format!("# format=frac-hardy-sweep\n# format_version={FORMAT_VERSION}\n# generator={GENERATOR}\n");
    for (k, v) in config {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&SWEEP_COLUMNS.join("\t"));
    out.push('\n');
    for r in rows {
        let reason = if r.reason.is_empty() { "-".to_string() } else { r.reason.replace(['\t', '\n'], " ") };
        let cells = [
            format!("{:e}", r.theta),
            format!("{:e}", r.p),
            format!("{:e}", r.q),
            r.status.to_string(),
            opt(r.lambda),
            opt(r.f_min),
            opt(r.gamma_theta),
            opt(r.pohozaev_ratio),
            opt(r.tail_slope),
            opt(r.weak_residual),
            r.certified.to_string(),
            reason,
        ];
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}
