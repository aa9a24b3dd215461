//! Static SVG diagram of a wall scan: a logarithmic `t²` axis from 1 to
//! `t_max²` and one labeled vertical line per wall.

use num_traits::One;

use super::report::ScanPlot;
use crate::rational::{format_rational, to_f64, Rational};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 320.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 40.0;
const AXIS_Y: f64 = 250.0;
const TOP: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn x_of(t2: &Rational, t_max_sq: &Rational) -> f64 {
    let span = to_f64(t_max_sq).ln();
    let frac = if span > 0.0 {
        (to_f64(t2).ln() / span).clamp(0.0, 1.0)
    } else {
        0.0
    };
    LEFT + frac * (WIDTH - LEFT - RIGHT)
}

/// Tick positions: 1, every power of ten strictly inside the range, `t_max²`.
fn ticks(t_max_sq: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    let ten = Rational::from_integer(10.into());
    let mut p = ten.clone();
    while &p < t_max_sq {
        out.push(p.clone());
        p *= &ten;
    }
    if t_max_sq > &Rational::one() {
        out.push(t_max_sq.clone());
    }
    out
}

pub fn render(plot: &ScanPlot) -> String {
    let mut s = String::new();
    let w = |s: &mut String, line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    w(&mut s, r#"<?xml version="1.0" encoding="UTF-8"?>"#.into());
    w(
        &mut s,
        format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
        ),
    );
    w(
        &mut s,
        format!(r#"<rect x="0" y="0" width="{WIDTH:.0}" height="{HEIGHT:.0}" fill="white"/>"#),
    );
    w(
        &mut s,
        format!(
            r#"<line class="axis" x1="{LEFT:.2}" y1="{AXIS_Y:.2}" x2="{:.2}" y2="{AXIS_Y:.2}" stroke="black" stroke-width="1"/>"#,
            WIDTH - RIGHT
        ),
    );
    for tick in ticks(&plot.t_max_sq) {
        let x = x_of(&tick, &plot.t_max_sq);
        w(
            &mut s,
            format!(
                r#"<line class="tick" x1="{x:.2}" y1="{AXIS_Y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
                AXIS_Y + 6.0
            ),
        );
        w(
            &mut s,
            format!(
                r#"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
                AXIS_Y + 20.0,
                escape(&format_rational(&tick))
            ),
        );
    }
    w(
        &mut s,
        format!(
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">t² (log scale)</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            AXIS_Y + 45.0
        ),
    );
    for (t2, label) in &plot.hits {
        let x = x_of(t2, &plot.t_max_sq);
        w(
            &mut s,
            format!(
                r#"<line class="wall" x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{AXIS_Y:.2}" stroke="firebrick" stroke-width="1.5"/>"#
            ),
        );
        w(
            &mut s,
            format!(
                r#"<text class="wall-label" x="{x:.2}" y="{:.2}" font-family="monospace" font-size="10" transform="rotate(-90 {x:.2} {:.2})">{} t²={}</text>"#,
                TOP - 4.0,
                TOP - 4.0,
                escape(label),
                escape(&format_rational(t2))
            ),
        );
    }
    w(&mut s, "</svg>".into());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn empty_scan_has_axes_only() {
        let svg = render(&ScanPlot {
            t_max_sq: int(100),
            hits: vec![],
        });
        assert!(svg.contains(r#"class="axis""#));
        assert!(!svg.contains(r#"class="wall""#));
        assert!(!svg.contains("<script"));
    }

    #[test]
    fn lines_ordered_and_deterministic() {
        let plot = ScanPlot {
            t_max_sq: int(100),
            hits: vec![
                (int(2), "(1,0,1)".into()),
                (frac(497, 5), "(1,0,2)".into()),
                (int(50), "(1,0,3)".into()),
            ],
        };
        let svg = render(&plot);
        assert_eq!(svg.matches(r#"class="wall""#).count(), 3);
        assert_eq!(svg, render(&plot));
        assert!(svg.contains("t²=497/5"));
    }

    #[test]
    fn tick_labels_are_exact() {
        assert_eq!(ticks(&int(250)), vec![int(1), int(10), int(100), int(250)]);
        assert_eq!(ticks(&int(1)), vec![int(1)]);
    }
}
