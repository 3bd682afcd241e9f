use std::f64::consts::PI;

use crate::aggregation::aggregate_axes;
use crate::error::{Error, Result};
use crate::geometry::{layout, PolarLayout};
use crate::model::{AxisRole, GradeId, RiskModel, RiskPosition, SliceSelector};
use crate::render::svg::{escape, num, Doc};
use crate::render::{RenderSpec, POLAR_REFERENCE_SIZE};

fn scale_of(spec: &RenderSpec) -> f64 {
    (spec.width.min(spec.height) as f64) / POLAR_REFERENCE_SIZE
}

fn frame(spec: &RenderSpec) -> Frame {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let label_room = if spec.show_labels { 92.0 } else { 8.0 } * scale_of(spec);
    Frame {
        cx: w / 2.0,
        cy: h / 2.0,
        radius: (w.min(h) / 2.0 - label_room).max(1.0),
    }
}

/// The `(axis, level)` segment under pixel `(x, y)` of a polar view drawn
/// with `spec`, or `None` off the disk.
pub fn polar_hit(model: &RiskModel, spec: &RenderSpec, x: f64, y: f64) -> Option<(usize, usize)> {
    let f = frame(spec);
    let p = PolarLayout::to_polar((x - f.cx) / f.radius, (y - f.cy) / f.radius);
    layout(model.space(), spec.theta0.unwrap_or(model.theta0())).hit_test(p)
}

struct Frame {
    cx: f64,
    cy: f64,
    radius: f64,
}

impl Frame {
    fn point(&self, r: f64, angle: f64) -> (f64, f64) {
        (
            self.cx + self.radius * r * angle.cos(),
            self.cy + self.radius * r * angle.sin(),
        )
    }

    fn pt(&self, r: f64, angle: f64) -> String {
        let (x, y) = self.point(r, angle);
        format!("{} {}", num(x), num(y))
    }
}

fn segment_path(f: &Frame, inner: f64, outer: f64, start: f64, end: f64) -> String {
    let large = u8::from(end - start > PI);
    let ro = num(f.radius * outer);
    if inner <= 0.0 {
        format!(
            "M {} {} L {} A {ro} {ro} 0 {large} 1 {} Z",
            num(f.cx),
            num(f.cy),
            f.pt(outer, start),
            f.pt(outer, end)
        )
    } else {
        let ri = num(f.radius * inner);
        format!(
            "M {} A {ro} {ro} 0 {large} 1 {} L {} A {ri} {ri} 0 {large} 0 {} Z",
            f.pt(outer, start),
            f.pt(outer, end),
            f.pt(inner, end),
            f.pt(inner, start)
        )
    }
}

/// Splits a long axis title at the space nearest its middle.
fn wrap_title(title: &str) -> Vec<&str> {
    if title.chars().count() <= 14 {
        return vec![title];
    }
    let mid = title.len() / 2;
    match title
        .match_indices(' ')
        .map(|(i, _)| i)
        .min_by_key(|&i| i.abs_diff(mid))
    {
        Some(i) => vec![&title[..i], &title[i + 1..]],
        None => vec![title],
    }
}

/// The polar view: one annular segment per (axis, level), primary axes colored
/// by their aggregates, context axes by their level profiles, threshold arcs,
/// crosses at the risk position and dots at the selected context levels.
pub fn render_polar(model: &RiskModel, sigma: &SliceSelector, risk: RiskPosition, spec: &RenderSpec) -> Result<String> {
    spec.validate(model.scale())?;
    let space = model.space();
    let scale = model.scale();
    for axis in space.context_axes() {
        if axis.profile().is_none() {
            return Err(Error::MissingProfile(axis.id().to_string()));
        }
    }
    let (likelihood, impact) = aggregate_axes(model, sigma, risk)?;
    let geo: PolarLayout = layout(space, spec.theta0.unwrap_or(model.theta0()));

    let s = scale_of(spec);
    let f = frame(spec);

    let mut doc = Doc::new(spec.width, spec.height, "ndpolar-polar");

    doc.line("<g class=\"segments\">");
    for (i, axis) in space.axes().iter().enumerate() {
        let colors: &[GradeId] = match axis.role() {
            AxisRole::Likelihood => &likelihood.per_level,
            AxisRole::Impact => &impact.per_level,
            AxisRole::Context => axis.profile().expect("checked above"),
        };
        let sector = geo.sectors[i];
        for (l, ring) in geo.rings[i].iter().enumerate() {
            let g = colors[l];
            doc.line(format!(
                "<path class=\"segment\" data-axis=\"{}\" data-level=\"{l}\" data-grade=\"{}\" d=\"{}\" fill=\"{}\" stroke=\"#000000\" stroke-opacity=\"0.18\" stroke-width=\"{}\"/>",
                escape(axis.id()),
                escape(scale.name(g)),
                segment_path(&f, ring.inner, ring.outer, sector.start, sector.end),
                spec.color(scale, g),
                num(0.6 * s)
            ));
        }
    }
    doc.line("</g>");

    doc.line("<g class=\"spokes\">");
    for sector in &geo.sectors {
        let (x, y) = f.point(1.0, sector.start);
        doc.line(format!(
            "<line class=\"spoke\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-opacity=\"0.35\" stroke-width=\"{}\"/>",
            num(f.cx),
            num(f.cy),
            num(x),
            num(y),
            num(0.8 * s)
        ));
    }
    doc.line(format!(
        "<circle class=\"rim\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-opacity=\"0.3\" stroke-width=\"{}\"/>",
        num(f.cx),
        num(f.cy),
        num(f.radius),
        num(0.8 * s)
    ));
    doc.line("</g>");

    if spec.show_thresholds {
        doc.line("<g class=\"thresholds\">");
        for arc in &geo.threshold_arcs {
            let large = u8::from(arc.end - arc.start > PI);
            let r = num(f.radius * arc.radius);
            doc.line(format!(
                "<path class=\"threshold-arc\" data-axis=\"{}\" d=\"M {} A {r} {r} 0 {large} 1 {}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
                escape(space.axis(arc.axis).id()),
                f.pt(arc.radius, arc.start),
                f.pt(arc.radius, arc.end),
                num(2.4 * s)
            ));
        }
        doc.line("</g>");
    }

    doc.line("<g class=\"markers\">");
    let arm = 7.0 * s;
    for (i, level) in [(0usize, risk.likelihood), (1usize, risk.impact)] {
        let p = geo.locate(i, level)?;
        let (x, y) = f.point(p.radius, p.angle);
        doc.line(format!(
            "<path class=\"cross\" data-axis=\"{}\" data-level=\"{level}\" d=\"M {} {} L {} {} M {} {} L {} {}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
            escape(space.axis(i).id()),
            num(x - arm),
            num(y - arm),
            num(x + arm),
            num(y + arm),
            num(x - arm),
            num(y + arm),
            num(x + arm),
            num(y - arm),
            num(2.2 * s)
        ));
    }
    for (k, &level) in sigma.levels().iter().enumerate() {
        let i = k + 2;
        let p = geo.locate(i, level)?;
        let (x, y) = f.point(p.radius, p.angle);
        doc.line(format!(
            "<circle class=\"dot\" data-axis=\"{}\" data-level=\"{level}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            escape(space.axis(i).id()),
            num(x),
            num(y),
            num(4.5 * s)
        ));
    }
    doc.line(format!(
        "<circle class=\"origin\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
        num(f.cx),
        num(f.cy),
        num(2.0 * s)
    ));
    doc.line("</g>");

    if spec.show_labels {
        doc.line("<g class=\"labels\">");
        let font = 13.0 * s;
        for (i, axis) in space.axes().iter().enumerate() {
            let angle = geo.sectors[i].center;
            let (x, y) = f.point(1.0 + 10.0 * s / f.radius, angle);
            let (c, sn) = (angle.cos(), angle.sin());
            let anchor = if c > 0.3 {
                "start"
            } else if c < -0.3 {
                "end"
            } else {
                "middle"
            };
            let lines = wrap_title(axis.title());
            let lh = 1.15 * font;
            let spread = (lines.len() - 1) as f64 * lh;
            let y0 = if sn < -0.3 {
                y - spread
            } else if sn > 0.3 {
                y + 0.8 * font
            } else {
                y + font / 3.0 - spread / 2.0
            };
            let mut spans = String::new();
            for (k, line) in lines.iter().enumerate() {
                spans.push_str(&format!(
                    "<tspan x=\"{}\" y=\"{}\">{}</tspan>",
                    num(x),
                    num(y0 + k as f64 * lh),
                    escape(line)
                ));
            }
            doc.line(format!(
                "<text class=\"axis-label\" data-axis=\"{}\" font-size=\"{}\" text-anchor=\"{anchor}\">{spans}</text>",
                escape(axis.id()),
                num(font)
            ));
            let level = match i {
                0 => risk.likelihood,
                1 => risk.impact,
                _ => sigma.level(i - 2),
            };
            let p = geo.locate(i, level)?;
            let (mx, my) = f.point(p.radius, p.angle);
            doc.text(
                "marker-label",
                mx + 10.0 * s * angle.cos(),
                my + 10.0 * s * angle.sin() - 8.0 * s,
                10.0 * s,
                "middle",
                "",
                axis.label(level),
            );
        }
        doc.line("</g>");
    }

    Ok(doc.finish())
}
