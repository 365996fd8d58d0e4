use crate::CliError;
use kiae::numerics::Matrix;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 50.0;

const COLORS: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Scatter plot: fill color encodes the predicted cluster, marker shape the
/// true label. Centroids are drawn as star glyphs and connected pairwise by
/// segments annotated with the latent-space (pre-projection) distances.
pub fn emit_scatter(
    projected: &Matrix,
    predicted: &[usize],
    labels: &[usize],
    centroids2d: &Matrix,
    latent_distances: &Matrix,
    path: &Path,
) -> Result<(), CliError> {
    let n = projected.rows();
    if n == 0 {
        return Err(CliError::Usage("cannot plot an empty point set".into()));
    }
    if projected.cols() != 2 || centroids2d.cols() != 2 {
        return Err(CliError::Usage(format!(
            "scatter input must have 2 columns, got {} and {}",
            projected.cols(),
            centroids2d.cols()
        )));
    }
    if predicted.len() != n || labels.len() != n {
        return Err(CliError::Usage(format!(
            "{n} points but {} predictions and {} labels",
            predicted.len(),
            labels.len()
        )));
    }
    let k = centroids2d.rows();
    if latent_distances.shape() != (k, k) {
        return Err(CliError::Usage(format!(
            "latent distance table is {:?}, expected {k}x{k}",
            latent_distances.shape()
        )));
    }

    // Shared bounding box over points and centroids.
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut visit = |x: f64, y: f64| {
        lo[0] = lo[0].min(x);
        hi[0] = hi[0].max(x);
        lo[1] = lo[1].min(y);
        hi[1] = hi[1].max(y);
    };
    for i in 0..n {
        visit(projected.get(i, 0), projected.get(i, 1));
    }
    for c in 0..k {
        visit(centroids2d.get(c, 0), centroids2d.get(c, 1));
    }
    for axis in 0..2 {
        if hi[axis] - lo[axis] <= 0.0 {
            lo[axis] -= 0.5;
            hi[axis] += 0.5;
        }
    }
    let sx = (WIDTH - 2.0 * MARGIN) / (hi[0] - lo[0]);
    let sy = (HEIGHT - 2.0 * MARGIN) / (hi[1] - lo[1]);
    let px = |x: f64| MARGIN + (x - lo[0]) * sx;
    // SVG y grows downward.
    let py = |y: f64| HEIGHT - MARGIN - (y - lo[1]) * sy;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Centroid links first so points draw on top.
    for a in 0..k {
        for b in (a + 1)..k {
            let (x1, y1) = (px(centroids2d.get(a, 0)), py(centroids2d.get(a, 1)));
            let (x2, y2) = (px(centroids2d.get(b, 0)), py(centroids2d.get(b, 1)));
            let _ = writeln!(
                svg,
                r##"<line class="centroid-link" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#555555" stroke-dasharray="6,4" stroke-width="1.5"/>"##
            );
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0 - 6.0);
            let _ = writeln!(
                svg,
                r##"<text class="centroid-distance" x="{mx:.2}" y="{my:.2}" font-size="13" text-anchor="middle" fill="#333333">{:.3}</text>"##,
                latent_distances.get(a, b)
            );
        }
    }

    for i in 0..n {
        let x = px(projected.get(i, 0));
        let y = py(projected.get(i, 1));
        let color = COLORS[predicted[i] % COLORS.len()];
        svg.push_str(&marker(labels[i], x, y, color));
        svg.push('\n');
    }

    for c in 0..k {
        let x = px(centroids2d.get(c, 0));
        let y = py(centroids2d.get(c, 1));
        let color = COLORS[c % COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<path class="centroid" d="{}" fill="{color}" stroke="black" stroke-width="1.2"/>"#,
            star_path(x, y, 9.0)
        );
    }

    svg.push_str("</svg>\n");
    fs::write(path, svg).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Marker shape cycles with the true label: circle, square, triangle,
/// diamond, cross.
fn marker(label: usize, x: f64, y: f64, color: &str) -> String {
    let r = 4.0;
    match label % 5 {
        0 => format!(
            r#"<circle class="point" cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{color}" fill-opacity="0.75"/>"#
        ),
        1 => format!(
            r#"<rect class="point" x="{:.2}" y="{:.2}" width="{}" height="{}" fill="{color}" fill-opacity="0.75"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        2 => format!(
            r#"<path class="point" d="M {x:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z" fill="{color}" fill-opacity="0.75"/>"#,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        3 => format!(
            r#"<path class="point" d="M {x:.2} {:.2} L {:.2} {y:.2} L {x:.2} {:.2} L {:.2} {y:.2} Z" fill="{color}" fill-opacity="0.75"/>"#,
            y - r,
            x + r,
            y + r,
            x - r
        ),
        _ => format!(
            r#"<path class="point" d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="{color}" stroke-width="2"/>"#,
            x - r,
            y - r,
            x + r,
            y + r,
            x - r,
            y + r,
            x + r,
            y - r
        ),
    }
}

fn star_path(cx: f64, cy: f64, r: f64) -> String {
    let mut d = String::new();
    for i in 0..10 {
        let radius = if i % 2 == 0 { r } else { r * 0.45 };
        let angle = std::f64::consts::PI * (i as f64 / 5.0 - 0.5);
        let x = cx + radius * angle.cos();
        let y = cy + radius * angle.sin();
        let _ = write!(d, "{} {x:.2} {y:.2} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}
