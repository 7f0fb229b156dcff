//! Rendering of an [`AnalysisReport`] as text, JSON or SVG.
//!
//! Text and JSON carry only exact values. SVG needs floats for coordinates,
//! so every drawn wall also keeps its exact geometry in `data-*` attributes.

use std::fmt::Write as _;

use k3walls_core::{Rat, RatInterval, WallGeometry};

use crate::config::{ConfigError, Format};
use crate::report::{AnalysisReport, Hole, Payload, WallEntry};

pub fn emit(report: &AnalysisReport, format: Format) -> Result<String, ConfigError> {
    match format {
        Format::Json => Ok(to_json(report)),
        Format::Text => Ok(to_text(report)),
        Format::Svg => to_svg(report),
    }
}

pub fn to_json(report: &AnalysisReport) -> String {
    // Every field is a string, integer, bool or nested struct, so this cannot fail.
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<AnalysisReport> {
    serde_json::from_str(text)
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut l = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            l.push_str(cell);
            let pad = widths[i] - cell.chars().count();
            l.extend(std::iter::repeat(' ').take(pad));
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(&mut rule.iter().map(String::as_str));
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn key_values(pairs: &[(&str, String)]) -> String {
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|(k, v)| vec![k.to_string(), v.clone()])
        .collect();
    table(&["quantity", "value"], &rows)
}

fn flag_names(w: &WallEntry) -> String {
    let f = &w.flags;
    let names: Vec<&str> = [
        (f.has_spherical_destabilizer, "spherical"),
        (f.has_isotropic_destabilizer, "isotropic"),
        (f.pairing_one_with_spherical, "pairing=1"),
        (f.pairing_at_least_two, "pairing>=2"),
        (f.hilbert_chow, "hilbert-chow"),
        (f.totally_semistable_hint, "totally-semistable?"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    if names.is_empty() {
        "-".into()
    } else {
        names.join(",")
    }
}

fn wall_row(w: &WallEntry) -> Vec<String> {
    let (kind, position, radius) = match &w.geometry {
        WallGeometry::Semicircle { center_b, radius_sq } => {
            ("semicircle", center_b.to_string(), radius_sq.to_string())
        }
        WallGeometry::VerticalLine { b } => ("vertical", b.to_string(), "-".into()),
    };
    vec![
        kind.into(),
        position,
        radius,
        w.label.clone(),
        w.destabilizers.len().to_string(),
        flag_names(w),
    ]
}

const WALL_HEADERS: [&str; 6] = ["type", "center|b", "radius_sq", "label", "#dz", "flags"];

fn wall_table(walls: &[WallEntry]) -> String {
    if walls.is_empty() {
        return "no walls\n".into();
    }
    let rows: Vec<_> = walls.iter().map(wall_row).collect();
    table(&WALL_HEADERS, &rows)
}

pub fn to_text(report: &AnalysisReport) -> String {
    let mut out = format!("{} {} — {}\n", report.tool, report.version, report.config.command);
    if let Some(d) = report.config.d {
        let _ = write!(out, "d = {d}");
        if let Some(v) = &report.config.vector {
            let _ = write!(out, ", v = {v}");
        }
        if let Some(bound) = report.rank_bound {
            let _ = write!(out, ", rank bound {bound}");
        }
        out.push('\n');
    }
    out.push('\n');

    let body = match &report.result {
        Payload::Walls { region, walls, holes } => {
            format!(
                "region b in {}, T in {}\n{}{}",
                region.b,
                region.t_sq,
                wall_table(walls),
                hole_note(holes)
            )
        }
        Payload::Path { b, t_range, crossings, holes } => {
            let mut s = format!("path b = {b}, T in {t_range}\n");
            if crossings.is_empty() {
                s.push_str("no walls\n");
            } else {
                let rows: Vec<Vec<String>> = crossings
                    .iter()
                    .map(|c| {
                        let mut row = vec![c.t_sq.to_string()];
                        row.extend(wall_row(&c.wall));
                        row
                    })
                    .collect();
                let mut headers = vec!["T"];
                headers.extend(WALL_HEADERS);
                s.push_str(&table(&headers, &rows));
            }
            s.push_str(&hole_note(holes));
            s
        }
        Payload::GiesekerBound { b, bound } => {
            let dv: Vec<String> = bound.dv.iter().map(ToString::to_string).collect();
            key_values(&[
                ("b", b.to_string()),
                ("mu_hat", bound.mu_hat.to_string()),
                ("delta", bound.delta.to_string()),
                ("mu_max_hat", bound.mu_max_hat.to_string()),
                ("ratio", bound.ratio.to_string()),
                ("T_bound", bound.t_bound.to_string()),
                ("|D_v|", dv.len().to_string()),
                ("D_v", if dv.is_empty() { "-".into() } else { dv.join(" ") }),
            ])
        }
        Payload::NefDivisor {
            b,
            t_sq,
            w_sigma,
            w_sigma_square,
            limit_zero,
            limit_infinity,
        } => {
            let rows: Vec<Vec<String>> = [("w_sigma", w_sigma), ("T -> 0", limit_zero), ("T -> oo", limit_infinity)]
                .into_iter()
                .map(|(name, e)| {
                    vec![
                        name.to_string(),
                        e.mukai.to_string(),
                        e.hilb.as_ref().map_or("-".into(), |h| h.display.clone()),
                        e.hilb.as_ref().map_or("-".into(), |h| h.bb_square.to_string()),
                    ]
                })
                .collect();
            format!(
                "at (b, T) = ({b}, {t_sq}); w_sigma^2 = {w_sigma_square}\n{}",
                table(&["class", "mukai", "hilb", "bb_square"], &rows)
            )
        }
        Payload::HilbNef { n, generators, extremal_curve } => {
            let rows: Vec<Vec<String>> = generators
                .iter()
                .zip(&extremal_curve.pairings)
                .map(|(g, pairing)| {
                    let h = g.hilb.as_ref().expect("hilb generators carry (H~, B) coordinates");
                    vec![h.display.clone(), g.mukai.to_string(), h.bb_square.to_string(), pairing.to_string()]
                })
                .collect();
            format!(
                "nef cone of Hilb^{n}\n{}extremal curve {} with self-pairing {}\n",
                table(&["generator", "mukai", "bb_square", "pairing with curve"], &rows),
                extremal_curve.display,
                extremal_curve.self_pairing
            )
        }
        Payload::Lagrangian {
            n,
            found,
            k,
            h,
            square_zero_ray,
            limit_divisor,
            nef_generators,
            movable_generators,
        } => {
            if !found {
                format!("no coprime (k, h) with d h^2 = k^2 ({n} - 1)\n")
            } else {
                let show = |e: &Option<crate::report::DivisorEntry>| {
                    e.as_ref()
                        .and_then(|e| e.hilb.as_ref())
                        .map_or("-".into(), |h| h.display.clone())
                };
                let cone = |g: &Option<Vec<String>>| g.as_ref().map_or("-".into(), |g| g.join(", "));
                key_values(&[
                    ("k", k.map_or("-".into(), |k| k.to_string())),
                    ("h", h.map_or("-".into(), |h| h.to_string())),
                    ("square-zero ray", show(square_zero_ray)),
                    ("limit divisor", show(limit_divisor)),
                    ("nef generators", cone(nef_generators)),
                    ("movable generators", cone(movable_generators)),
                ])
            }
        }
        Payload::IsGeometric { b, t_sq, geometric, witness } => key_values(&[
            ("b", b.to_string()),
            ("T", t_sq.to_string()),
            ("geometric", geometric.to_string()),
            ("witness", witness.as_ref().map_or("-".into(), ToString::to_string)),
        ]),
        Payload::SphericalSolve { constraints, solutions } => {
            let mut s = String::new();
            for c in constraints {
                let _ = writeln!(s, "({}, xi) = {}", c.functional, c.value);
            }
            if solutions.is_empty() {
                s.push_str("no spherical solutions\n");
            } else {
                for xi in solutions {
                    let _ = writeln!(s, "xi = {xi}");
                }
            }
            s
        }
        Payload::Classify {
            class,
            square,
            kind,
            positive_vector,
            region,
            walls,
        } => {
            let mut s = key_values(&[
                ("class", class.to_string()),
                ("square", square.to_string()),
                ("kind", format!("{kind:?}")),
                ("positive vector", positive_vector.to_string()),
            ]);
            if let Some(region) = region {
                let _ = writeln!(s, "\nwalls on b in {}, T in {}", region.b, region.t_sq);
                s.push_str(&wall_table(walls));
            }
            s
        }
    };
    out.push_str(&body);
    out
}

fn hole_note(holes: &[Hole]) -> String {
    if holes.is_empty() {
        return String::new();
    }
    let list: Vec<String> = holes.iter().map(|h| format!("{} (T <= {})", h.b, h.t_sq_max)).collect();
    format!("non-geometric spikes: {}\n", list.join(", "))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;

struct Frame {
    b_lo: f64,
    b_hi: f64,
    t_lo: f64,
    t_hi: f64,
}

impl Frame {
    fn sx(&self) -> f64 {
        (WIDTH - 2.0 * MARGIN) / (self.b_hi - self.b_lo)
    }

    fn sy(&self) -> f64 {
        (HEIGHT - 2.0 * MARGIN) / self.t_hi
    }

    fn x(&self, b: f64) -> f64 {
        MARGIN + (b - self.b_lo) * self.sx()
    }

    /// `t = 0` sits on the bottom margin; the plot always starts at `t = 0`
    /// so that the hole spikes are visible.
    fn y(&self, t: f64) -> f64 {
        HEIGHT - MARGIN - t * self.sy()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// The `(b, t)` plane, `t` vertical, clipped to the region of the report.
/// Only commands that produce walls have a picture.
pub fn to_svg(report: &AnalysisReport) -> Result<String, ConfigError> {
    let (b_range, t_range, holes): (RatInterval, &RatInterval, &[Hole]) = match &report.result {
        Payload::Walls { region, holes, .. } => (region.b.clone(), &region.t_sq, holes),
        Payload::Classify { region: Some(region), .. } => (region.b.clone(), &region.t_sq, &[]),
        Payload::Path { b, t_range, holes, .. } => (
            RatInterval::closed(b - Rat::one(), b + Rat::one()),
            t_range,
            holes,
        ),
        _ => {
            return Err(ConfigError::UnsupportedFormat(format!(
                "svg (the `{}` command has no wall diagram)",
                report.config.command
            )))
        }
    };
    let frame = Frame {
        b_lo: b_range.lo.to_f64(),
        b_hi: b_range.hi.to_f64(),
        t_lo: t_range.lo.to_f64().max(0.0).sqrt(),
        t_hi: t_range.hi.to_f64().sqrt(),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" data-b-range="{}" data-T-range="{}">"#,
        b_range, t_range
    );
    let (cx0, cx1) = (frame.x(frame.b_lo), frame.x(frame.b_hi));
    let (cy0, cy1) = (frame.y(frame.t_hi), frame.y(frame.t_lo));
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="region"><rect x="{cx0:.3}" y="{cy0:.3}" width="{:.3}" height="{:.3}"/></clipPath></defs>"#,
        cx1 - cx0,
        cy1 - cy0
    );
    let _ = writeln!(
        s,
        r##"<rect x="{cx0:.3}" y="{cy0:.3}" width="{:.3}" height="{:.3}" fill="#fafafa" stroke="#999"/>"##,
        cx1 - cx0,
        cy1 - cy0
    );
    // axes and range labels
    let base = frame.y(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{cx0:.3}" y1="{base:.3}" x2="{cx1:.3}" y2="{base:.3}" stroke="#000"/>"##
    );
    let _ = writeln!(
        s,
        r#"<text x="{cx0:.3}" y="{:.3}" font-size="12">b = {}</text>"#,
        base + 18.0,
        esc(&b_range.lo.to_string())
    );
    let _ = writeln!(
        s,
        r#"<text x="{cx1:.3}" y="{:.3}" font-size="12" text-anchor="end">b = {}</text>"#,
        base + 18.0,
        esc(&b_range.hi.to_string())
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{cy0:.3}" font-size="12" text-anchor="end">T = {}</text>"#,
        cx0 - 4.0,
        esc(&t_range.hi.to_string())
    );

    for hole in holes {
        let x = frame.x(hole.b.to_f64());
        let top = frame.y(hole.t_sq_max.to_f64().sqrt());
        let _ = writeln!(
            s,
            r##"<g class="hole" data-b="{}" data-T-max="{}"><line x1="{x:.3}" y1="{base:.3}" x2="{x:.3}" y2="{top:.3}" stroke="#c00" stroke-dasharray="3,3"/><circle cx="{x:.3}" cy="{base:.3}" r="2.5" fill="#c00"/></g>"##,
            hole.b, hole.t_sq_max
        );
    }

    let _ = writeln!(s, r##"<g clip-path="url(#region)" fill="none" stroke="#1f4e9c" stroke-width="1.5">"##);
    let mut labels = String::new();
    for wall in report.result.walls() {
        let label = esc(&wall.label);
        match &wall.geometry {
            WallGeometry::Semicircle { center_b, radius_sq } => {
                let c = center_b.to_f64();
                let r = radius_sq.to_f64().sqrt();
                let (rx, ry) = (r * frame.sx(), r * frame.sy());
                let _ = writeln!(
                    s,
                    r#"<path class="wall" data-type="semicircle" data-center="{}" data-radius_sq="{}" data-label="{label}" d="M {:.3} {base:.3} A {rx:.3} {ry:.3} 0 0 1 {:.3} {base:.3}"/>"#,
                    center_b.to_fraction_string(),
                    radius_sq.to_fraction_string(),
                    frame.x(c - r),
                    frame.x(c + r),
                );
                // label at the highest visible point of the arc
                let b_at = c.clamp(frame.b_lo, frame.b_hi);
                let t_sq = r * r - (b_at - c) * (b_at - c);
                if t_sq > 0.0 {
                    let t = t_sq.sqrt().clamp(frame.t_lo, frame.t_hi);
                    let _ = writeln!(
                        labels,
                        r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="middle">{label}</text>"#,
                        frame.x(b_at),
                        frame.y(t) - 4.0
                    );
                }
            }
            WallGeometry::VerticalLine { b } => {
                let x = frame.x(b.to_f64());
                let _ = writeln!(
                    s,
                    r#"<line class="wall" data-type="vertical_line" data-b="{}" data-label="{label}" x1="{x:.3}" y1="{base:.3}" x2="{x:.3}" y2="{:.3}"/>"#,
                    b.to_fraction_string(),
                    frame.y(frame.t_hi)
                );
                if b_range.contains(b) {
                    let _ = writeln!(
                        labels,
                        r#"<text x="{:.3}" y="{:.3}" font-size="11">{label}</text>"#,
                        x + 3.0,
                        frame.y(frame.t_hi) + 14.0
                    );
                }
            }
        }
    }
    s.push_str("</g>\n");
    if let Payload::Path { b, .. } = &report.result {
        let x = frame.x(b.to_f64());
        let _ = writeln!(
            s,
            r##"<line class="path" data-b="{}" x1="{x:.3}" y1="{cy1:.3}" x2="{x:.3}" y2="{cy0:.3}" stroke="#2a2" stroke-dasharray="6,3"/>"##,
            b.to_fraction_string()
        );
    }
    let _ = write!(s, r##"<g class="labels" fill="#1f4e9c">{}"##, if labels.is_empty() { "" } else { "\n" });
    s.push_str(&labels);
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_columns() {
        let t = table(&["a", "long header"], &[vec!["wide cell".into(), "x".into()]]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "a          long header");
        assert_eq!(lines[1], "---------  -----------");
        assert_eq!(lines[2], "wide cell  x");
    }

    #[test]
    fn escaping() {
        assert_eq!(esc("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
