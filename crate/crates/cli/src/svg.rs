//! Minimal SVG line plot for the k-window entropy curve: measured points
//! with error bars against the ideal and maximal-entropy reference lines.

#![allow(clippy::write_with_newline)]

use std::fmt::Write;

use holo_ee_core::nmr::EntropyCurvePoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 56.0;

fn x_of(k: f64) -> f64 {
    MARGIN_L + (k - 1.0) / 4.0 * (WIDTH - MARGIN_L - MARGIN_R)
}

fn y_of(s: f64, s_max: f64) -> f64 {
    HEIGHT - MARGIN_B - s / s_max * (HEIGHT - MARGIN_T - MARGIN_B)
}

/// Renders the curve plot; deterministic output for identical input.
pub fn entropy_curve_svg(points: &[EntropyCurvePoint], title: &str) -> String {
    let s_max = 5.2f64;
    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" \
         text-anchor=\"middle\">{title}</text>\n",
        WIDTH / 2.0
    );

    // axes and gridlines
    let _ = write!(
        svg,
        "<line x1=\"{MARGIN_L}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B,
        HEIGHT - MARGIN_B
    );
    for s in 0..=5 {
        let y = y_of(s as f64, s_max);
        let _ = write!(
            svg,
            "<line x1=\"{MARGIN_L}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"#dddddd\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{s}</text>\n",
            WIDTH - MARGIN_R,
            MARGIN_L - 8.0,
            y + 4.0
        );
    }
    for k in 1..=5 {
        let x = x_of(k as f64);
        let _ = write!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{k}</text>\n",
            HEIGHT - MARGIN_B + 18.0
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">subsystem size k</text>\n\
         <text x=\"18\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">entropy (bits)</text>\n",
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        HEIGHT - MARGIN_B + 40.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0,
        (MARGIN_T + HEIGHT - MARGIN_B) / 2.0
    );

    // reference lines: ideal min(k, 6-k) dashed, maximal entropy k dotted
    let path_of = |f: &dyn Fn(f64) -> f64| -> String {
        (1..=5)
            .map(|k| {
                let cmd = if k == 1 { 'M' } else { 'L' };
                format!("{cmd}{:.1},{:.1}", x_of(k as f64), y_of(f(k as f64), s_max))
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = write!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#e08020\" stroke-width=\"2\" \
         stroke-dasharray=\"8 4\"/>\n",
        path_of(&|k| k.min(6.0 - k))
    );
    let _ = write!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#2a9d3a\" stroke-width=\"2\" \
         stroke-dasharray=\"2 4\"/>\n",
        path_of(&|k| k)
    );

    // measured series with error bars
    let series = points
        .iter()
        .map(|p| {
            let cmd = if p.k == 1 { 'M' } else { 'L' };
            format!(
                "{cmd}{:.1},{:.1}",
                x_of(p.k as f64),
                y_of(p.mean_bits, s_max)
            )
        })
        .collect::<Vec<_>>()
        .join(" ");
    let _ = write!(
        svg,
        "<path d=\"{series}\" fill=\"none\" stroke=\"#1d5dd0\" stroke-width=\"2\"/>\n"
    );
    for p in points {
        let x = x_of(p.k as f64);
        let y = y_of(p.mean_bits, s_max);
        let y_lo = y_of(p.mean_bits - p.spread_bits, s_max);
        let y_hi = y_of(p.mean_bits + p.spread_bits, s_max);
        let _ = write!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{y_hi:.1}\" x2=\"{x:.1}\" y2=\"{y_lo:.1}\" \
             stroke=\"#1d5dd0\"/>\n\
             <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"#1d5dd0\"/>\n"
        );
    }

    // legend
    let legend_y = MARGIN_T + 6.0;
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{legend_y:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         fill=\"#1d5dd0\">measured</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         fill=\"#e08020\">min(k, 6-k)</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         fill=\"#2a9d3a\">max entropy</text>\n</svg>\n",
        WIDTH - MARGIN_R - 110.0,
        WIDTH - MARGIN_R - 110.0,
        legend_y + 16.0,
        WIDTH - MARGIN_R - 110.0,
        legend_y + 32.0
    );
    svg
}
