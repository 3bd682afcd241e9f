use crate::error::Result;
use crate::model::{RiskModel, RiskPosition, SliceSelector};
use crate::render::svg::{num, Doc};
use crate::render::{RenderSpec, MATRIX_REFERENCE_WIDTH};

const FRAME_STROKE: f64 = 1.2;

struct GridFrame {
    left: f64,
    top: f64,
    cw: f64,
    ch: f64,
    header_h: f64,
}

fn grid_frame(model: &RiskModel, spec: &RenderSpec) -> GridFrame {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let s = w / MATRIX_REFERENCE_WIDTH;
    let margin = 12.0 * s;
    let space = model.space();
    let header_h = 28.0 * s + 18.0 * s * space.context_axes().len() as f64;
    let (left, bottom) = if spec.show_labels { (130.0 * s, 46.0 * s) } else { (margin, margin) };
    let grid_left = margin + left;
    let grid_top = margin + header_h + 14.0 * s;
    let grid_w = (w - grid_left - margin).max(1.0);
    let grid_h = (h - grid_top - bottom - margin).max(1.0);
    GridFrame {
        left: grid_left,
        top: grid_top,
        cw: grid_w / space.likelihood().levels() as f64,
        ch: grid_h / space.impact().levels() as f64,
        header_h,
    }
}

/// The cell `(likelihood, impact)` under pixel `(x, y)` of a matrix drawn with `spec`.
pub fn matrix_hit(model: &RiskModel, spec: &RenderSpec, x: f64, y: f64) -> Option<RiskPosition> {
    let f = grid_frame(model, spec);
    let (n1, n2) = (model.space().likelihood().levels(), model.space().impact().levels());
    let c = ((x - f.left) / f.cw).floor();
    let r = ((y - f.top) / f.ch).floor();
    if c < 0.0 || r < 0.0 || c >= n1 as f64 || r >= n2 as f64 {
        return None;
    }
    Some(RiskPosition {
        likelihood: c as usize,
        impact: n2 - 1 - r as usize,
    })
}

/// The likelihood x impact grid of one slice, highest impact on top, with a
/// header naming the selected context levels and a frame on the risk cell.
pub fn render_matrix(model: &RiskModel, sigma: &SliceSelector, risk: RiskPosition, spec: &RenderSpec) -> Result<String> {
    spec.validate(model.scale())?;
    let risk = RiskPosition::new(model.space(), risk.likelihood, risk.impact)?;
    let grid = model.slice(sigma)?;
    let space = model.space();
    let scale = model.scale();

    let s = spec.width as f64 / MATRIX_REFERENCE_WIDTH;
    let margin = 12.0 * s;
    let font = 12.0 * s;
    let ctx = space.context_axes();
    let (n1, n2) = (grid.likelihood_levels(), grid.impact_levels());
    let GridFrame { left: grid_left, top: grid_top, cw, ch, header_h } = grid_frame(model, spec);
    let w = spec.width as f64;
    let (grid_w, grid_h) = (cw * n1 as f64, ch * n2 as f64);
    let cell_y = |l2: usize| grid_top + (n2 - 1 - l2) as f64 * ch;
    let cell_x = |l1: usize| grid_left + l1 as f64 * cw;

    let mut doc = Doc::new(spec.width, spec.height, "ndpolar-matrix");

    doc.line("<g class=\"context-header\">");
    doc.line(format!(
        "<rect class=\"header-box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" rx=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
        num(margin),
        num(margin),
        num(w - 2.0 * margin),
        num(header_h),
        num(2.0 * s),
        num(0.8 * s)
    ));
    doc.text(
        "header-title",
        margin + 8.0 * s,
        margin + 18.0 * s,
        font,
        "start",
        " font-weight=\"bold\"",
        "Context layer (slice)",
    );
    for (k, (axis, &level)) in ctx.iter().zip(sigma.levels()).enumerate() {
        let y = margin + 18.0 * s + 18.0 * s * (k + 1) as f64;
        doc.text(
            "context-item",
            margin + 8.0 * s,
            y,
            font,
            "start",
            &format!(" data-axis=\"{}\" data-level=\"{level}\"", crate::render::svg::escape(axis.id())),
            &format!("{}: {}: {}", axis.title(), level, axis.label(level)),
        );
    }
    doc.line("</g>");

    doc.line("<g class=\"cells\">");
    for l2 in (0..n2).rev() {
        for l1 in 0..n1 {
            let g = grid.get(l1, l2);
            doc.line(format!(
                "<rect class=\"cell\" data-likelihood=\"{l1}\" data-impact=\"{l2}\" data-grade=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#000000\" stroke-width=\"{}\"/>",
                crate::render::svg::escape(scale.name(g)),
                num(cell_x(l1)),
                num(cell_y(l2)),
                num(cw),
                num(ch),
                spec.color(scale, g),
                num(0.5 * s)
            ));
        }
    }
    doc.line("</g>");

    doc.line(format!(
        "<rect class=\"risk-frame\" data-likelihood=\"{}\" data-impact=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"{}\"/>",
        risk.likelihood,
        risk.impact,
        num(cell_x(risk.likelihood)),
        num(cell_y(risk.impact)),
        num(cw),
        num(ch),
        num(FRAME_STROKE * s)
    ));

    if spec.show_labels {
        doc.line("<g class=\"labels\">");
        let small = 10.0 * s;
        for l2 in 0..n2 {
            doc.text(
                "row-label",
                grid_left - 6.0 * s,
                cell_y(l2) + ch / 2.0 + small / 3.0,
                small,
                "end",
                "",
                space.impact().label(l2),
            );
        }
        for l1 in 0..n1 {
            doc.text(
                "column-label",
                cell_x(l1) + cw / 2.0,
                grid_top + grid_h + 14.0 * s,
                small,
                "middle",
                "",
                space.likelihood().label(l1),
            );
        }
        doc.text(
            "axis-title",
            grid_left + grid_w / 2.0,
            grid_top + grid_h + 34.0 * s,
            font,
            "middle",
            "",
            space.likelihood().title(),
        );
        let (tx, ty) = (margin + 14.0 * s, grid_top + grid_h / 2.0);
        doc.text(
            "axis-title",
            tx,
            ty,
            font,
            "middle",
            &format!(" transform=\"rotate(-90 {} {})\"", num(tx), num(ty)),
            space.impact().title(),
        );
        doc.line("</g>");
    }

    Ok(doc.finish())
}
