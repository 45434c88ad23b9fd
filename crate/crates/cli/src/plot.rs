//! Cross-section of a three-dimensional geometry by the hyperplane where the
//! objective equals 1, drawn in barycentric coordinates with respect to three
//! extremal rays of the pseudo-effective cone. Floating point appears only in
//! the drawing coordinates.

use std::fmt::Write;

use cyclecones::decomposition::Decomposition;
use cyclecones::linalg::{coordinates, rank};
use cyclecones::rational::{dot, format_vector, Rational};
use cyclecones::zariski::ConeGeometry;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Failure, Status};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn unsupported(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::InputError,
        code: "plot_unsupported".into(),
        message: message.into(),
    }
}

struct Section {
    functional: Vec<Rational>,
    frame: Vec<Vec<Rational>>,
}

impl Section {
    /// Planar position of the ray through `v`, or `None` for zero.
    fn place(&self, v: &[Rational]) -> Option<(f64, f64)> {
        let f = dot(&self.functional, v);
        if !f.is_positive() {
            return None;
        }
        let lambda = coordinates(&self.frame, v)?;
        let total: Rational = lambda.iter().sum();
        let l: Vec<f64> = lambda.iter().map(|x| (x / &total).to_f64().unwrap_or(0.0)).collect();
        let corners = [(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)];
        let x = l.iter().zip(&corners).map(|(w, c)| w * c.0).sum();
        let y = l.iter().zip(&corners).map(|(w, c)| w * c.1).sum();
        Some((x, y))
    }
}

/// Orders points of a convex polygon by angle around their centroid.
fn polygon(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    pts
}

pub fn section_svg(g: &ConeGeometry, d: &Decomposition) -> Result<String, Failure> {
    if g.dim() != 3 {
        return Err(unsupported(format!(
            "cross-sections need a three-dimensional geometry, this one has dimension {}",
            g.dim()
        )));
    }
    let functional = d
        .metadata
        .objective
        .as_ref()
        .or(g.degree_functional())
        .ok_or_else(|| unsupported("no objective to slice by"))?
        .coords
        .clone();
    let rays: Vec<Vec<Rational>> = g.eff_rays().iter().map(|r| r.coords.clone()).collect();
    let mut frame: Vec<Vec<Rational>> = Vec::new();
    for r in &rays {
        let mut trial = frame.clone();
        trial.push(r.clone());
        if rank(&trial, 3) == trial.len() {
            frame = trial;
        }
    }
    if frame.len() != 3 {
        return Err(unsupported("the pseudo-effective cone is not full-dimensional"));
    }
    // scale frame rays onto the slice so barycentric weights sum to one
    let frame = frame
        .iter()
        .map(|r| {
            let f = dot(&functional, r);
            r.iter().map(|x| x / &f).collect()
        })
        .collect();
    let section = Section { functional, frame };

    let eff: Vec<(f64, f64)> = rays.iter().filter_map(|r| section.place(r)).collect();
    let mov: Vec<(f64, f64)> = g.mov().frame().rays.iter().filter_map(|r| section.place(r)).collect();
    let mut marks = Vec::new();
    for (label, v) in [("alpha", &d.input), ("P", &d.positive), ("N", &d.negative)] {
        if v.coords.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(p) = section.place(&v.coords) {
            marks.push((label, format_vector(&v.coords), p));
        }
    }

    let all: Vec<(f64, f64)> = eff.iter().chain(&mov).copied().chain(marks.iter().map(|m| m.2)).collect();
    let (minx, maxx) = all.iter().fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.0), a.1.max(p.0)));
    let (miny, maxy) = all.iter().fold((f64::MAX, f64::MIN), |a, p| (a.0.min(p.1), a.1.max(p.1)));
    let scale = (SIZE - 2.0 * MARGIN) / (maxx - minx).max(maxy - miny).max(1e-9);
    let tx = |p: (f64, f64)| (MARGIN + (p.0 - minx) * scale, SIZE - MARGIN - (p.1 - miny) * scale);
    let points = |pts: &[(f64, f64)]| {
        polygon(pts.to_vec())
            .into_iter()
            .map(|p| {
                let (x, y) = tx(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<polygon points="{}" fill="#dde8f5" stroke="#2b5c8a" stroke-width="1.5"><title>pseudo-effective</title></polygon>"##,
        points(&eff)
    );
    if mov.len() >= 3 {
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="#f5e3c8" stroke="#a0621b" stroke-width="1.5"><title>movable</title></polygon>"##,
            points(&mov)
        );
    }
    let p = marks.iter().find(|m| m.0 == "P").map(|m| m.2);
    let n = marks.iter().find(|m| m.0 == "N").map(|m| m.2);
    if let (Some(p), Some(n)) = (p, n) {
        let ((x1, y1), (x2, y2)) = (tx(p), tx(n));
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#555" stroke-dasharray="4 3"/>"##
        );
    }
    for (label, coords, pt) in &marks {
        let (x, y) = tx(*pt);
        let _ = writeln!(
            svg,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#222"><title>{label} = {coords}</title></circle>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="13">{label}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
