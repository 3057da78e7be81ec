//! SVG dot plots of matrices.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

const CELL: usize = 10;
const GAP: usize = 30;
const TITLE: usize = 20;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn panel(out: &mut String, a: &DataMatrix, x0: usize, y0: usize) {
    let (w, h) = (a.cols() * CELL, a.rows() * CELL);
    let _ = writeln!(
        out,
        r#"<path d="M{x0} {y0}h{w}v{h}h-{w}z" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let max = a.max_abs();
    if max == 0.0 {
        return;
    }
    for i in 0..a.rows() {
        for (j, &v) in a.row(i).iter().enumerate() {
            if v != 0.0 {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="black" fill-opacity="{:.4}"/>"#,
                    x0 + j * CELL,
                    y0 + i * CELL,
                    v.abs() / max
                );
            }
        }
    }
}

/// One filled square per nonzero cell, opacity `|a| / max|a|`.
pub fn render_dotplot(a: &DataMatrix) -> String {
    let (w, h) = (a.cols() * CELL, a.rows() * CELL);
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    out.push('\n');
    panel(&mut out, a, 0, 0);
    out.push_str("</svg>\n");
    out
}

/// Side-by-side titled panels, e.g. original / scrambled / recovered.
pub fn render_panels(panels: &[(&str, &DataMatrix)]) -> String {
    let width: usize = panels.iter().map(|(_, a)| a.cols() * CELL).sum::<usize>()
        + GAP * panels.len().saturating_sub(1);
    let height = panels
        .iter()
        .map(|(_, a)| a.rows() * CELL)
        .max()
        .unwrap_or(0)
        + TITLE;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push('\n');
    let mut x = 0;
    for (title, a) in panels {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            TITLE - 6,
            escape(title)
        );
        panel(&mut out, a, x, TITLE);
        x += a.cols() * CELL + GAP;
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(svg: &str, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, svg).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}
