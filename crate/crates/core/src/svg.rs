//! SVG drawing of the fundamental domain of `Γ_k`.

use std::fmt::Write;

use crate::gamma::GammaK;

const UNIT: f64 = 120.0;
const TOP: f64 = 2.0;
const MARGIN: f64 = 0.5;

/// Renders the domain of `Γ_k`: the strip `|Re z| ≤ k-1` minus the
/// half-disks over `[j-1, j]` and `[-j, -(j-1)]`.
///
/// Side classes: `vertical` for the two sides paired by `T^{2(k-1)}`,
/// `arc` for the `2(k-1)` geodesic arcs. The real locus of the quotient
/// (imaginary axis, right vertical side and right arcs) is drawn with class
/// `real-locus`.
pub fn fundamental_domain_svg(group: &GammaK) -> String {
    let half = f64::from(group.k() - 1);
    let width = (2.0 * half + 2.0 * MARGIN) * UNIT;
    let height = (TOP + MARGIN) * UNIT;
    let px = |x: f64| (x + half + MARGIN) * UNIT;
    let py = |y: f64| (TOP - y + MARGIN * 0.5) * UNIT;
    let r = 0.5 * UNIT;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, "<title>Fundamental domain of Gamma_{}</title>", group.k());
    let _ = writeln!(
        out,
        r#"<style>.side{{fill:none;stroke:#222;stroke-width:1.5}}.real-locus{{fill:none;stroke:#c0392b;stroke-width:3}}.axis{{stroke:#999;stroke-width:1}}text{{font-family:serif;font-size:16px}}</style>"#
    );

    // Domain interior.
    let mut d = format!("M {:.2} {:.2} L {:.2} {:.2}", px(-half), py(TOP), px(-half), py(0.0));
    let n = group.k() as i64 - 1;
    for j in -n..n {
        let _ = write!(d, " A {r:.2} {r:.2} 0 0 1 {:.2} {:.2}", px(j as f64 + 1.0), py(0.0));
    }
    let _ = write!(d, " L {:.2} {:.2} Z", px(half), py(TOP));
    let _ = writeln!(out, r##"<path class="domain" d="{d}" fill="#eef3fb" stroke="none"/>"##);

    let _ = writeln!(
        out,
        r#"<line class="axis" x1="0" y1="{y:.2}" x2="{width:.1}" y2="{y:.2}"/>"#,
        y = py(0.0)
    );

    // Vertical sides: β̃ on the left, β on the right (real).
    for (x, label, real) in [(-half, format!("β̃{n}"), false), (half, format!("β{n}"), true)] {
        let class = if real { "side vertical real-locus" } else { "side vertical" };
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}"/>"#,
            x = px(x),
            y0 = py(0.0),
            y1 = py(TOP)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{label}</text>"#,
            px(x) + if real { 6.0 } else { -28.0 },
            py(TOP * 0.6)
        );
    }

    // Arcs: γ_j over [j-1, j] (real), γ̃_j over [-j, -(j-1)].
    for j in 1..=n {
        for (left, label, real) in [
            ((j - 1) as f64, format!("γ{j}"), true),
            (-(j as f64), format!("γ̃{j}"), false),
        ] {
            let class = if real { "side arc real-locus" } else { "side arc" };
            let _ = writeln!(
                out,
                r#"<path class="{class}" d="M {:.2} {:.2} A {r:.2} {r:.2} 0 0 1 {:.2} {:.2}"/>"#,
                px(left),
                py(0.0),
                px(left + 1.0),
                py(0.0)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{label}</text>"#,
                px(left + 0.5) - 8.0,
                py(0.5) - 6.0
            );
        }
    }

    // The imaginary axis is part of the real locus.
    let _ = writeln!(
        out,
        r#"<line class="real-locus" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
        py(0.0),
        py(TOP),
        x = px(0.0)
    );
    for x in -n..=n {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x}</text>"#,
            px(x as f64),
            py(0.0) + 18.0
        );
    }
    out.push_str("</svg>\n");
    out
}
