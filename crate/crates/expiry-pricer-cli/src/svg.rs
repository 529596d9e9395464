//! Static SVG scatter of a frontier sweep: expected wait on x, expected
//! revenue on y, one dot per evaluated point (colored by family, hollow when
//! unverified), and a dashed tangent line of slope β through each best point.

use expiry_pricer::frontier::FrontierPoint;
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;
const TICKS: usize = 5;

fn family_color(name: &str) -> &'static str {
    match name {
        "constant" => "#1f77b4",
        "linear" => "#d62728",
        "polynomial" => "#2ca02c",
        "quasi_auction" => "#9467bd",
        _ => "#7f7f7f",
    }
}

struct Axes {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Axes {
    fn from_points(points: &[(f64, f64)]) -> Axes {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for &(x, y) in points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        let pad = |lo: &mut f64, hi: &mut f64| {
            let span = *hi - *lo;
            if span > 0.0 {
                *lo -= 0.05 * span;
                *hi += 0.05 * span;
            } else {
                *lo -= 0.5;
                *hi += 0.5;
            }
        };
        pad(&mut x_min, &mut x_max);
        pad(&mut y_min, &mut y_max);
        Axes { x_min, x_max, y_min, y_max }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min)
            * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN_TOP + (self.y_max - y) / (self.y_max - self.y_min)
            * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

/// Render the sweep. `tangents` holds `(β, best_wait, best_revenue)` triples;
/// each draws the line `revenue = best_revenue + β·(wait − best_wait)`,
/// clipped to the plot box.
pub fn frontier_svg(points: &[FrontierPoint], tangents: &[(f64, f64, f64)]) -> String {
    let coords: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| Some((p.wait?, p.revenue?)))
        .chain(tangents.iter().map(|&(_, w, r)| (w, r)))
        .collect();
    let mut svg = String::with_capacity(1 << 16);
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );
    if coords.is_empty() {
        svg.push_str(
            "<text x=\"400\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"14\">no points with payoffs</text>\n</svg>\n",
        );
        return svg;
    }
    let axes = Axes::from_points(&coords);
    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);

    // Grid lines and tick labels.
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = axes.x_min + f * (axes.x_max - axes.x_min);
        let yv = axes.y_min + f * (axes.y_max - axes.y_min);
        let xp = axes.px(xv);
        let yp = axes.py(yv);
        let _ = write!(
            svg,
            "<line x1=\"{xp:.2}\" y1=\"{y0:.2}\" x2=\"{xp:.2}\" y2=\"{y1:.2}\" \
             stroke=\"#e0e0e0\"/>\n\
             <line x1=\"{x0:.2}\" y1=\"{yp:.2}\" x2=\"{x1:.2}\" y2=\"{yp:.2}\" \
             stroke=\"#e0e0e0\"/>\n\
             <text x=\"{xp:.2}\" y=\"{ty:.2}\" text-anchor=\"middle\" \
             font-family=\"sans-serif\" font-size=\"11\">{xv:.4}</text>\n\
             <text x=\"{tx:.2}\" y=\"{typ:.2}\" text-anchor=\"end\" \
             font-family=\"sans-serif\" font-size=\"11\">{yv:.4}</text>\n",
            ty = y0 + 16.0,
            tx = x0 - 6.0,
            typ = yp + 4.0,
        );
    }
    // Axis frame and titles.
    let _ = write!(
        svg,
        "<rect x=\"{x0:.2}\" y=\"{y1:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" \
         fill=\"none\" stroke=\"black\"/>\n\
         <text x=\"{cx:.2}\" y=\"{by:.2}\" text-anchor=\"middle\" \
         font-family=\"sans-serif\" font-size=\"13\">expected wait</text>\n\
         <text x=\"16\" y=\"{cy:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" transform=\"rotate(-90 16 {cy:.2})\">expected revenue</text>\n",
        w = x1 - x0,
        h = y0 - y1,
        cx = 0.5 * (x0 + x1),
        by = HEIGHT - 14.0,
        cy = 0.5 * (y0 + y1),
    );

    // Tangent lines, clipped to the data box.
    for &(beta, w_best, r_best) in tangents {
        let ya = r_best + beta * (axes.x_min - w_best);
        let yb = r_best + beta * (axes.x_max - w_best);
        // Clip the parametrized segment (x_min, ya) → (x_max, yb) to the
        // y-range; β ≥ 0 makes y monotone along it.
        let dy = yb - ya;
        let (mut u_lo, mut u_hi) = (0.0_f64, 1.0_f64);
        if dy.abs() > 0.0 {
            u_lo = u_lo.max(((axes.y_min - ya) / dy).min((axes.y_max - ya) / dy));
            u_hi = u_hi.min(((axes.y_min - ya) / dy).max((axes.y_max - ya) / dy));
        } else if ya < axes.y_min || ya > axes.y_max {
            continue;
        }
        if u_lo >= u_hi {
            continue;
        }
        let xa = axes.x_min + u_lo * (axes.x_max - axes.x_min);
        let xb = axes.x_min + u_hi * (axes.x_max - axes.x_min);
        let _ = write!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" \
             stroke-dasharray=\"6 4\"/>\n",
            axes.px(xa),
            axes.py(ya + u_lo * dy),
            axes.px(xb),
            axes.py(ya + u_hi * dy),
        );
    }

    // Points: filled when verified, hollow when not.
    for p in points {
        let (Some(w), Some(r)) = (p.wait, p.revenue) else { continue };
        let color = family_color(p.schedule.family_name());
        let style = if p.verification_passed {
            format!("fill=\"{color}\"")
        } else {
            format!("fill=\"none\" stroke=\"{color}\"")
        };
        let _ = write!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" {style}/>\n",
            axes.px(w),
            axes.py(r),
        );
    }

    // Best-point markers on top.
    for &(_, w_best, r_best) in tangents {
        let _ = write!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"none\" stroke=\"black\" \
             stroke-width=\"1.5\"/>\n",
            axes.px(w_best),
            axes.py(r_best),
        );
    }

    // Legend: only the families present, in canonical order.
    let mut seen: Vec<&str> = Vec::new();
    for name in ["constant", "linear", "polynomial", "quasi_auction"] {
        if points.iter().any(|p| p.schedule.family_name() == name) {
            seen.push(name);
        }
    }
    for (i, name) in seen.iter().enumerate() {
        let ly = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let _ = write!(
            svg,
            "<circle cx=\"{lx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"{color}\"/>\n\
             <text x=\"{tx:.2}\" y=\"{ty:.2}\" font-family=\"sans-serif\" \
             font-size=\"12\">{name}</text>\n",
            lx = WIDTH - MARGIN_RIGHT - 130.0,
            cy = ly - 4.0,
            color = family_color(name),
            tx = WIDTH - MARGIN_RIGHT - 120.0,
            ty = ly,
        );
    }
    svg.push_str("</svg>\n");
    svg
}
