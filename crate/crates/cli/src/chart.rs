//! Self-contained SVG rendering: a bar panel for one distribution and an
//! overlay for two. No scripts, no external assets, fixed-precision
//! coordinates, so identical inputs give identical bytes.

use sqznum::{Distribution, EntryFlag, Scalar};

const W: f64 = 960.0;
const H: f64 = 540.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const PLOT_W: f64 = 870.0;
const PLOT_H: f64 = 435.0;

const BASE: &str = "#4477aa";
const TANGENCY: &str = "#cc3311";
const CLAMPED: &str = "#999999";
const SERIES_B: &str = "#cc3311";

pub fn distribution_svg(d: &Distribution<Scalar>) -> String {
    let mut out = String::new();
    open_svg(&mut out);
    let ymax = y_scale(&d.values);
    title(
        &mut out,
        &format!("P(m), n = {}, r = {}, method = {}", d.n, d.r, d.method),
    );
    axes(&mut out, d.len(), ymax);
    bars(&mut out, &d.values, &d.flags, ymax, 1.0);
    legend_flags(&mut out, &d.flags);
    out.push_str("</svg>\n");
    out
}

pub fn overlay_svg(a: &Distribution<Scalar>, b: &Distribution<Scalar>) -> String {
    let mut out = String::new();
    open_svg(&mut out);
    let shared = a.len().min(b.len());
    let ymax = {
        let mut all = a.values[..shared].to_vec();
        all.extend_from_slice(&b.values[..shared]);
        y_scale(&all)
    };
    title(
        &mut out,
        &format!(
            "P(m), n = {}, r = {}: {} vs {}",
            a.n, a.r, a.method, b.method
        ),
    );
    axes(&mut out, shared, ymax);
    bars(
        &mut out,
        &a.values[..shared],
        &a.flags[..shared],
        ymax,
        0.55,
    );
    series_line(&mut out, &b.values[..shared], ymax);
    legend_overlay(&mut out, &a.method.to_string(), &b.method.to_string());
    out.push_str("</svg>\n");
    out
}

fn y_scale(values: &[Scalar]) -> f64 {
    let mut ymax = 0.0f64;
    for &v in values {
        if v > ymax {
            ymax = v;
        }
    }
    if ymax <= 0.0 {
        1.0
    } else {
        ymax * 1.05
    }
}

fn open_svg(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
}

fn title(out: &mut String, text: &str) {
    out.push_str(&format!(
        "<text x=\"{LEFT}\" y=\"28\" font-size=\"16\" font-weight=\"bold\">{text}</text>\n"
    ));
}

fn line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64) {
    out.push_str(&format!(
        "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
}

fn axes(out: &mut String, len: usize, ymax: f64) {
    line(out, LEFT, TOP, LEFT, TOP + PLOT_H);
    line(out, LEFT, TOP + PLOT_H, LEFT + PLOT_W, TOP + PLOT_H);
    for frac in [0.0, 0.5, 1.0] {
        let y = TOP + PLOT_H * (1.0 - frac);
        line(out, LEFT - 5.0, y, LEFT, y);
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{:.2e}</text>\n",
            LEFT - 9.0,
            y + 4.0,
            ymax * frac
        ));
    }
    let step = ((len as f64 / 5.0).ceil() as usize).max(1);
    let bw = PLOT_W / len as f64;
    let mut m = 0;
    while m < len {
        let x = LEFT + (m as f64 + 0.5) * bw;
        line(out, x, TOP + PLOT_H, x, TOP + PLOT_H + 5.0);
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{m}</text>\n",
            TOP + PLOT_H + 20.0
        ));
        m += step;
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">m</text>\n",
        LEFT + PLOT_W / 2.0,
        H - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" transform=\"rotate(-90 18 {:.2})\" text-anchor=\"middle\">P(m)</text>\n",
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0
    ));
}

fn bars(out: &mut String, values: &[Scalar], flags: &[Option<EntryFlag>], ymax: f64, opacity: f64) {
    let len = values.len();
    let bw = PLOT_W / len as f64;
    let draw_w = (bw * 0.85).max(0.4);
    for m in 0..len {
        let v = values[m];
        if v == 0.0 && flags[m].is_none() {
            continue;
        }
        let fill = match flags[m] {
            Some(EntryFlag::Tangency) => TANGENCY,
            Some(EntryFlag::Clamped) => CLAMPED,
            None => BASE,
        };
        let x = LEFT + m as f64 * bw + (bw - draw_w) / 2.0;
        let h = (v.max(0.0) / ymax * PLOT_H).clamp(1.0, PLOT_H);
        out.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{draw_w:.2}\" height=\"{h:.2}\" fill=\"{fill}\" fill-opacity=\"{opacity}\"><title>m = {m}, P = {v:.6e}</title></rect>\n",
            TOP + PLOT_H - h
        ));
    }
}

fn series_line(out: &mut String, values: &[Scalar], ymax: f64) {
    let len = values.len();
    let bw = PLOT_W / len as f64;
    let mut pts = String::new();
    let mut dots = String::new();
    for (m, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let x = LEFT + (m as f64 + 0.5) * bw;
        let y = TOP + PLOT_H - (v.max(0.0) / ymax * PLOT_H).min(PLOT_H);
        if !pts.is_empty() {
            pts.push(' ');
        }
        pts.push_str(&format!("{x:.2},{y:.2}"));
        dots.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.4\" fill=\"{SERIES_B}\"><title>m = {m}, P = {v:.6e}</title></circle>\n"
        ));
    }
    if pts.contains(' ') {
        out.push_str(&format!(
            "<polyline points=\"{pts}\" fill=\"none\" stroke=\"{SERIES_B}\" stroke-width=\"1\" stroke-opacity=\"0.6\"/>\n"
        ));
    }
    out.push_str(&dots);
}

fn swatch(out: &mut String, x: f64, y: f64, color: &str, label: &str) {
    out.push_str(&format!(
        "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
        y - 10.0
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{y:.2}\">{label}</text>\n",
        x + 18.0
    ));
}

fn legend_flags(out: &mut String, flags: &[Option<EntryFlag>]) {
    let tangency = flags
        .iter()
        .filter(|f| **f == Some(EntryFlag::Tangency))
        .count();
    let clamped = flags
        .iter()
        .filter(|f| **f == Some(EntryFlag::Clamped))
        .count();
    let x = LEFT + PLOT_W - 220.0;
    let mut y = TOP + 14.0;
    if tangency > 0 {
        swatch(out, x, y, TANGENCY, &format!("tangency flag ({tangency})"));
        y += 18.0;
    }
    if clamped > 0 {
        swatch(out, x, y, CLAMPED, &format!("clamped to zero ({clamped})"));
    }
}

fn legend_overlay(out: &mut String, a_name: &str, b_name: &str) {
    let x = LEFT + PLOT_W - 260.0;
    swatch(out, x, TOP + 14.0, BASE, &format!("{a_name} (bars)"));
    swatch(out, x, TOP + 32.0, SERIES_B, &format!("{b_name} (points)"));
}
