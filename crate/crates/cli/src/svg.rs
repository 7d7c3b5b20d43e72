//! Static SVG charts: a bar chart of chain entries and a line chart of a
//! sublevel sweep.

use std::fmt::Write;

use confinv::green::SublevelSweep;
use confinv::ChainReport;

const W: f64 = 640.0;
const H: f64 = 360.0;
const PAD: f64 = 48.0;

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn chain_chart(report: &ChainReport, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let max = report.entries.iter().map(|e| e.value).fold(0.0, f64::max).max(1e-300);
    let n = report.entries.len() as f64;
    let slot = (W - 2.0 * PAD) / n;
    let base = H - PAD;
    let _ = writeln!(out, r#"<line x1="{PAD}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#, W - PAD);
    for (i, e) in report.entries.iter().enumerate() {
        let h = (H - 2.0 * PAD - 16.0) * e.value / max;
        let x = PAD + slot * i as f64 + slot * 0.15;
        let bw = slot * 0.7;
        let _ = writeln!(
            out,
            r##"<rect x="{x:.2}" y="{:.2}" width="{bw:.2}" height="{h:.2}" fill="#4a78b5"/>"##,
            base - h
        );
        let cx = x + bw / 2.0;
        let _ = writeln!(out, r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{:.6}</text>"#, base - h - 4.0, e.value);
        let _ = writeln!(out, r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, base + 16.0, e.key.name());
    }
    out.push_str("</svg>\n");
    out
}

pub fn sweep_chart(sweep: &SublevelSweep, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let mut pts: Vec<(f64, f64)> = sweep.records.iter().map(|r| (r.t, r.f)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (t0, t1) = (pts.first().map_or(-1.0, |p| p.0), pts.last().map_or(0.0, |p| p.0));
    let fs = pts.iter().map(|p| p.1).chain([sweep.pi_over_v, sweep.cbeta_sq]);
    let (lo, hi) = fs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), f| (a.min(f), b.max(f)));
    let (lo, hi) = if hi - lo < 1e-12 * hi.abs().max(1.0) { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
    let sx = |t: f64| PAD + (W - 2.0 * PAD) * (t - t0) / (t1 - t0).max(1e-300);
    let sy = |f: f64| H - PAD - (H - 2.0 * PAD) * (f - lo) / (hi - lo);
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="black" points="{PAD},{PAD} {PAD},{} {},{}"/>"#,
        H - PAD,
        W - PAD,
        H - PAD
    );
    for (f, label, colour) in [(sweep.pi_over_v, "π/v", "#b54a4a"), (sweep.cbeta_sq, "c_β²", "#4ab56a")] {
        let y = sy(f);
        let _ = writeln!(
            out,
            r#"<line x1="{PAD}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="{colour}" stroke-dasharray="4 3"/>"#,
            W - PAD
        );
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}">{label}</text>"#, W - PAD + 4.0, y + 4.0);
    }
    let line: Vec<String> = pts.iter().map(|&(t, f)| format!("{:.2},{:.2}", sx(t), sy(f))).collect();
    let _ = writeln!(out, r##"<polyline fill="none" stroke="#4a78b5" stroke-width="2" points="{}"/>"##, line.join(" "));
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(out, r#"<text x="{PAD}" y="{}" text-anchor="middle">{t0:.2}</text>"#, H - PAD + 16.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{t1:.2}</text>"#, W - PAD, H - PAD + 16.0);
    let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{hi:.4}</text>"#, PAD - 4.0, sy(hi) + 4.0);
    let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{lo:.4}</text>"#, PAD - 4.0, sy(lo) + 4.0);
    out.push_str("</svg>\n");
    out
}
