//! Minimal SVG emitter for log-log scatter plots with a fitted line. No
//! plotting dependency: a polyline, circle markers, axis labels, and the
//! fitted slope in the corner.

use hnls::fit::LineFit;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 60.0;

pub fn log_log_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    fit: Option<&LineFit>,
) -> String {
    assert!(!points.is_empty());
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN),
            HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN),
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n",
        WIDTH / 2.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{x_label} (log)</text>\n",
        WIDTH / 2.0,
        HEIGHT - 16.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" \
         transform=\"rotate(-90 16 {})\">{y_label} (log)</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    ));

    // Tick labels at the data abscissae/extremes.
    for (&x, point) in xs.iter().zip(points) {
        let (px, _) = to_px(x, y_lo);
        svg.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{}</text>\n",
            HEIGHT - MARGIN + 16.0,
            point.0
        ));
    }
    for value in [y_lo, y_hi] {
        let (_, py) = to_px(x_lo, value);
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{py:.1}\" text-anchor=\"end\" font-size=\"10\">{:.3}</text>\n",
            MARGIN - 6.0,
            value.exp()
        ));
    }

    // Fitted line under the data.
    if let Some(fit) = fit {
        let (px0, py0) = to_px(x_lo, fit.slope * x_lo + fit.intercept);
        let (px1, py1) = to_px(x_hi, fit.slope * x_hi + fit.intercept);
        svg.push_str(&format!(
            "<line x1=\"{px0:.1}\" y1=\"{py0:.1}\" x2=\"{px1:.1}\" y2=\"{py1:.1}\" \
             stroke=\"#c03030\" stroke-dasharray=\"6 3\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"44\" text-anchor=\"end\" font-size=\"12\" fill=\"#c03030\">\
             slope {:.4}</text>\n",
            WIDTH - MARGIN,
            fit.slope
        ));
    }

    // Data polyline and markers.
    let path: Vec<String> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let (px, py) = to_px(x, y);
            format!("{px:.1},{py:.1}")
        })
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#3050c0\"/>\n",
        path.join(" ")
    ));
    for (&x, &y) in xs.iter().zip(&ys) {
        let (px, py) = to_px(x, y);
        svg.push_str(&format!(
            "<circle cx=\"{px:.1}\" cy=\"{py:.1}\" r=\"3\" fill=\"#3050c0\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.05).max(1e-9);
    (lo - pad, hi + pad)
}
