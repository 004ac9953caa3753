//! Static SVG 1.1 emission for the covering figure, the spiral trace of a
//! bending, and the radius schedule. All coordinates are printed with fixed
//! precision so output is byte-deterministic.

use std::fmt::Write;

use spiralbend::annulus::RadiusSchedule;
use spiralbend::bending::BendingParams;
use spiralbend::norms2d::UncondNorm2;
use spiralbend::polygon::CoverPolygon;

const W: f64 = 640.0;
const H: f64 = 640.0;

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
}

fn polyline(out: &mut String, pts: &[[f64; 2]], stroke: &str, dash: Option<&str>, close: bool) {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{:.4},{:.4} ", if i == 0 { "M" } else { "L" }, p[0], p[1]);
    }
    if close {
        d.push('Z');
    }
    let dash_attr = dash.map(|v| format!(r#" stroke-dasharray="{v}""#)).unwrap_or_default();
    let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="1.2"{dash_attr}/>"#, d.trim());
}

/// Covering figure: body boundary, its (1+ω) dilation dashed, and the corner
/// polygon with all four reflections.
pub fn polygon_figure(cover: &CoverPolygon, body: &UncondNorm2) -> String {
    let scale = W / 2.0 / (1.3 * (1.0 + cover.omega));
    let tx = |p: [f64; 2]| [W / 2.0 + scale * p[0], H / 2.0 - scale * p[1]];

    let mut out = String::new();
    header(&mut out);
    // axes
    polyline(&mut out, &[tx([-1.6, 0.0]), tx([1.6, 0.0])], "#bbbbbb", None, false);
    polyline(&mut out, &[tx([0.0, -1.6]), tx([0.0, 1.6])], "#bbbbbb", None, false);

    let boundary: Vec<[f64; 2]> = (0..=512)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / 512.0;
            let g = body.eval(th.cos(), th.sin());
            tx([th.cos() / g, th.sin() / g])
        })
        .collect();
    polyline(&mut out, &boundary, "black", None, true);
    let dilated: Vec<[f64; 2]> = (0..=512)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / 512.0;
            let g = body.eval(th.cos(), th.sin());
            tx([(1.0 + cover.omega) * th.cos() / g, (1.0 + cover.omega) * th.sin() / g])
        })
        .collect();
    polyline(&mut out, &dilated, "#555555", Some("6,4"), true);

    let chain = cover.chain();
    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let pts: Vec<[f64; 2]> = chain.iter().map(|p| tx([sx * p[0], sy * p[1]])).collect();
        polyline(&mut out, &pts, "#7030a0", None, false);
    }
    for p in &cover.p {
        let q = tx(*p);
        let _ = writeln!(out, r##"<circle cx="{:.4}" cy="{:.4}" r="2.5" fill="#1f4e9c"/>"##, q[0], q[1]);
    }
    for p in &cover.r {
        let q = tx(*p);
        let _ = writeln!(out, r##"<circle cx="{:.4}" cy="{:.4}" r="2.5" fill="#c00000"/>"##, q[0], q[1]);
    }
    out.push_str("</svg>\n");
    out
}

/// Spiral trace of a bending along a radial ray, drawn in log-radial
/// coordinates: the angular position is the direction of `(c·t, s·t)` in the
/// two block norms, the radial position is ln-interpolated between r and R.
pub fn spiral_figure(params: &BendingParams) -> String {
    let mut out = String::new();
    header(&mut out);
    let center = [W / 2.0, H / 2.0];
    let rad = W / 2.0 - 40.0;
    // rings marking r and R
    for (nu, label) in [(0.0f64, "r"), (1.0, "R")] {
        let rr = rad * (0.25 + 0.7 * nu);
        let _ = writeln!(
            out,
            r##"<circle cx="{:.4}" cy="{:.4}" r="{:.4}" fill="none" stroke="#cccccc" stroke-dasharray="3,3"/>"##,
            center[0], center[1], rr
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.4}" y="{:.4}" font-size="14" fill="#666666">{label}</text>"##,
            center[0] + rr + 4.0,
            center[1] - 4.0
        );
    }
    let span = params.ln_big_r - params.ln_r;
    let n = 720usize;
    let pts: Vec<[f64; 2]> = (0..=n)
        .map(|i| {
            let nu = -0.15 + 1.3 * i as f64 / n as f64;
            let ln_t = params.ln_r + nu * span;
            let (c, s) = params.coefficients_at_ln(ln_t);
            let ang = s.atan2(c);
            let rr = rad * (0.25 + 0.7 * nu.clamp(-0.2, 1.2));
            [center[0] + rr * ang.cos(), center[1] - rr * ang.sin()]
        })
        .collect();
    polyline(&mut out, &pts, "#1f4e9c", None, false);
    // the two block axes
    polyline(&mut out, &[center, [center[0] + rad, center[1]]], "#bbbbbb", None, false);
    polyline(&mut out, &[center, [center[0], center[1] - rad]], "#bbbbbb", None, false);
    let _ = writeln!(
        out,
        r##"<text x="{:.4}" y="{:.4}" font-size="14" fill="#333333">first block</text>"##,
        center[0] + rad - 80.0,
        center[1] + 18.0
    );
    let _ = writeln!(
        out,
        r##"<text x="{:.4}" y="{:.4}" font-size="14" fill="#333333">second block</text>"##,
        center[0] + 8.0,
        center[1] - rad + 14.0
    );
    out.push_str("</svg>\n");
    out
}

/// Radius schedule: ln-scaled axis with the chart annuli as alternating
/// bands.
pub fn schedule_figure(schedule: &RadiusSchedule) -> String {
    let mut out = String::new();
    header(&mut out);
    let margin = 50.0;
    let axis_y = H / 2.0;
    let ln_max = *schedule.ln_radii.last().unwrap();
    let x_of = |ln: f64| margin + (W - 2.0 * margin) * (ln / ln_max).clamp(0.0, 1.0);

    // chart bands [R_{2c-2}, R_{2c+1}]
    let mut c = 1usize;
    while 2 * c < schedule.len() {
        let lo = if c == 1 { 0.0 } else { x_of(schedule.ln_radius(2 * c - 2)) };
        let hi = x_of(schedule.ln_radius(2 * c + 1));
        let fill = if c % 2 == 1 { "#dbe7f7" } else { "#fbe7c0" };
        let y = axis_y - 60.0 - 14.0 * (c % 2) as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.4}" y="{:.4}" width="{:.4}" height="12" fill="{fill}" stroke="none"/>"#,
            lo,
            y,
            hi - lo
        );
        c += 1;
    }

    polyline(&mut out, &[[margin, axis_y], [W - margin, axis_y]], "#333333", None, false);
    for (i, ln) in schedule.ln_radii.iter().enumerate() {
        let x = x_of(*ln);
        polyline(&mut out, &[[x, axis_y - 6.0], [x, axis_y + 6.0]], "#333333", None, false);
        let _ = writeln!(
            out,
            r##"<text x="{:.4}" y="{:.4}" font-size="11" fill="#333333" text-anchor="middle">R{}</text>"##,
            x,
            axis_y + 22.0,
            i + 1
        );
    }
    let _ = writeln!(
        out,
        r##"<text x="{:.4}" y="{:.4}" font-size="12" fill="#666666">ln-radius axis; bands are chart annuli</text>"##,
        margin,
        axis_y + 48.0
    );
    out.push_str("</svg>\n");
    out
}
