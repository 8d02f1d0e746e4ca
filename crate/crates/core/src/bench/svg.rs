use std::fmt::Write;

use crate::solvers::Algorithm;

/// One line of a chart: `(x, y)` points in data coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub algorithm: Algorithm,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 800.0;
const H: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn color(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Nn => "#7f7f7f",
        Algorithm::Sa => "#1f77b4",
        Algorithm::Qa => "#2ca02c",
        Algorithm::Qbo => "#d62728",
    }
}

/// Line chart of best cost against iteration, one polyline per algorithm.
/// With `log_x` the x axis shows `log10(iter + 1)`.
pub fn cost_chart(title: &str, series: &[Series], log_x: bool) -> String {
    let tx = |x: f64| if log_x { (x + 1.0).log10() } else { x };
    let pts = || series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(tx(p.0)), b.max(tx(p.0))));
    let (mut y0, mut y1) = pts().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let pad = ((y1 - y0) * 0.05).max(1e-9);
    y0 -= pad;
    y1 += pad;

    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (tx(x) - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let xv = x0 + f * (x1 - x0);
        let px = LEFT + f * pw;
        let label = if log_x { format!("1e{xv:.1}") } else { format!("{xv:.0}") };
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 20.0
        );
        let yv = y0 + f * (y1 - y0);
        let py = TOP + (1.0 - f) * ph;
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{LEFT}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.1}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">iteration</text>"#,
        LEFT + pw / 2.0,
        H - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">mean best cost</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let mut poly = String::new();
        for &(x, y) in &s.points {
            let _ = write!(poly, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            color(s.algorithm),
            poly.trim_end()
        );
        let ly = TOP + 15.0 + 20.0 * i as f64;
        let lx = W - RIGHT + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{}" stroke-width="3"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            lx + 25.0,
            color(s.algorithm),
            lx + 32.0,
            ly + 4.0,
            s.algorithm
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Step-function mean of several runs' `(iter, best_cost)` records on a
/// common set of sample iterations.
pub fn mean_curve(runs: &[Vec<(u64, f64)>], samples: &[u64]) -> Vec<(f64, f64)> {
    samples
        .iter()
        .map(|&x| {
            let sum: f64 = runs
                .iter()
                .map(|recs| {
                    let k = recs.partition_point(|r| r.0 <= x);
                    recs[k.saturating_sub(1)].1
                })
                .sum();
            (x as f64, sum / runs.len() as f64)
        })
        .collect()
}

/// About `count` sample iterations in `[0, iters]`, evenly spaced or
/// log-spaced.
pub fn sample_iters(iters: u64, count: usize, log_x: bool) -> Vec<u64> {
    let mut xs: Vec<u64> = (0..=count)
        .map(|k| {
            let f = k as f64 / count as f64;
            if log_x {
                ((iters as f64 + 1.0).powf(f) - 1.0).round() as u64
            } else {
                (f * iters as f64).round() as u64
            }
        })
        .collect();
    xs.dedup();
    xs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_of_step_functions() {
        let a = vec![(0, 10.0), (5, 6.0)];
        let b = vec![(0, 8.0), (2, 4.0)];
        let m = mean_curve(&[a, b], &[0, 2, 4, 5, 9]);
        assert_eq!(m, vec![(0.0, 9.0), (2.0, 7.0), (4.0, 7.0), (5.0, 5.0), (9.0, 5.0)]);
    }

    #[test]
    fn chart_has_one_polyline_per_series() {
        let s = vec![
            Series {
                algorithm: Algorithm::Qbo,
                points: vec![(0.0, 3.0), (10.0, 1.0)],
            },
            Series {
                algorithm: Algorithm::Sa,
                points: vec![(0.0, 3.0), (10.0, 2.0)],
            },
        ];
        for log_x in [false, true] {
            let svg = cost_chart("n = 5", &s, log_x);
            assert!(svg.starts_with("<svg"));
            assert!(svg.trim_end().ends_with("</svg>"));
            assert_eq!(svg.matches("<polyline").count(), 2);
        }
    }

    #[test]
    fn sample_grid_ends() {
        let xs = sample_iters(1000, 10, false);
        assert_eq!((xs[0], *xs.last().unwrap(), xs.len()), (0, 1000, 11));
        let ls = sample_iters(1000, 50, true);
        assert_eq!((ls[0], *ls.last().unwrap()), (0, 1000));
        assert!(ls.windows(2).all(|w| w[0] < w[1]));
    }
}
