//! CSV, SVG and manifest writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so the text
//! depends only on the values and never on locale.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use polyrange::hrnr_matrix::Status;
use polyrange::hrnr_poly::RegionGrid;
use polyrange::C64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::CantCreate {
        path: path.to_path_buf(),
        source,
    })
}

/// `x,y,status`, one row per cell centre, `x` fastest.
pub fn grid_csv(grid: &RegionGrid) -> String {
    let mut s = String::with_capacity(32 * grid.nx * grid.ny + 16);
    s.push_str("x,y,status\n");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let c = grid.center(i, j);
            let _ = writeln!(s, "{},{},{}", c.re, c.im, grid.status(i, j).as_str());
        }
    }
    s
}

/// `x,y` per vertex. An empty point list gives an empty file.
pub fn points_csv(points: &[C64]) -> String {
    if points.is_empty() {
        return String::new();
    }
    let mut s = String::from("x,y\n");
    for p in points {
        let _ = writeln!(s, "{},{}", p.re, p.im);
    }
    s
}

pub const SVG_WIDTH: f64 = 1000.0;

/// Filled cells in user units: the window maps onto `1000 × 1000·aspect` with
/// `y` pointing up. Runs of equal status along a row share one rectangle.
pub fn grid_svg(grid: &RegionGrid) -> String {
    let w = &grid.window;
    let height = SVG_WIDTH * w.height() / w.width();
    let cw = SVG_WIDTH / grid.nx as f64;
    let ch = height / grid.ny as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{height}" viewBox="0 0 {SVG_WIDTH} {height}">"#
    );
    let _ = writeln!(
        s,
        "<desc>window [{}, {}] x [{}, {}] at {}x{} cells; user x = (re - {}) * {}, user y = ({} - im) * {}; IN opaque, BORDER half-opaque</desc>",
        w.x_min,
        w.x_max,
        w.y_min,
        w.y_max,
        grid.nx,
        grid.ny,
        w.x_min,
        SVG_WIDTH / w.width(),
        w.y_max,
        height / w.height()
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(s, r#"<g fill="black" stroke="none">"#);
    for j in 0..grid.ny {
        // Row j sits at the bottom for j = 0.
        let y = (grid.ny - 1 - j) as f64 * ch;
        let mut i = 0;
        while i < grid.nx {
            let status = grid.status(i, j);
            let start = i;
            while i < grid.nx && grid.status(i, j) == status {
                i += 1;
            }
            let opacity = match status {
                Status::In => "",
                Status::Border => r#" fill-opacity="0.5""#,
                Status::Out => continue,
            };
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}"{opacity}/>"#,
                start as f64 * cw,
                y,
                (i - start) as f64 * cw,
                ch
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Record written next to every output artifact.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub options: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub wall_time_s: f64,
}

impl RunManifest {
    pub fn new(command: &str, options: Value, seed: Option<u64>, wall_time_s: f64) -> Self {
        RunManifest {
            command: command.to_string(),
            options,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s,
        }
    }

    /// Written to `<primary>.manifest.json`.
    pub fn write_beside(&self, primary: &Path) -> CliResult<PathBuf> {
        let mut name = primary.as_os_str().to_os_string();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Software(e.to_string()))?;
        text.push('\n');
        write_file(&path, text.as_bytes())?;
        Ok(path)
    }
}
