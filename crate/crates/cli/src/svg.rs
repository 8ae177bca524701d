//! SVG rendering of a configuration in the affine chart `z = 1`.

use std::fmt::Write as _;

use lineconf::exact_projective::{format_rational, parse_rational, Rational};
use lineconf::marked_conic::LineConfig;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("configuration is empty")]
    EmptyConfig,
    #[error("viewport must have positive width and height")]
    DegenerateViewport,
    #[error("viewport must be xmin,ymin,xmax,ymax: {0}")]
    BadViewport(String),
}

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]` with exact corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub ymin: Rational,
    pub xmax: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn new(xmin: Rational, ymin: Rational, xmax: Rational, ymax: Rational) -> Result<Self, RenderError> {
        if xmin >= xmax || ymin >= ymax {
            return Err(RenderError::DegenerateViewport);
        }
        Ok(Self { xmin, ymin, xmax, ymax })
    }

    /// Parses `xmin,ymin,xmax,ymax` with rational entries.
    pub fn parse(s: &str) -> Result<Self, RenderError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(RenderError::BadViewport(s.to_string()));
        }
        let v: Vec<Rational> = parts
            .iter()
            .map(|p| parse_rational(p))
            .collect::<Result<_, _>>()
            .map_err(|e| RenderError::BadViewport(e.to_string()))?;
        Self::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }

    /// Bounding box of the finite crossings, widened by a fifth on each side.
    pub fn fit(r: &LineConfig) -> Self {
        let pts: Vec<(Rational, Rational)> = r.crossings().iter().filter_map(|c| c.point.affine()).collect();
        let one = Rational::one();
        let (mut xmin, mut ymin, mut xmax, mut ymax) = match pts.first() {
            Some((x, y)) => (x.clone(), y.clone(), x.clone(), y.clone()),
            None => (-one.clone(), -one.clone(), one.clone(), one.clone()),
        };
        for (x, y) in &pts {
            xmin = xmin.min(x.clone());
            xmax = xmax.max(x.clone());
            ymin = ymin.min(y.clone());
            ymax = ymax.max(y.clone());
        }
        let pad = |lo: &Rational, hi: &Rational| {
            let w = hi - lo;
            if w.is_zero() {
                one.clone()
            } else {
                w / Rational::from_integer(5.into())
            }
        };
        let (px, py) = (pad(&xmin, &xmax), pad(&ymin, &ymax));
        Self { xmin: xmin - &px, ymin: ymin - &py, xmax: xmax + px, ymax: ymax + py }
    }
}

const WIDTH: i64 = 800;

/// Shortest decimal with 12 significant digits.
fn decimal(x: &Rational) -> String {
    let f = x.to_f64().unwrap_or(0.0);
    if f == 0.0 {
        return "0".into();
    }
    let exp: i32 = format!("{f:.11e}").split_once('e').and_then(|(_, e)| e.parse().ok()).expect("exponent");
    let digits = format!("{:.*}", (11 - exp).max(0) as usize, f);
    let trimmed = if digits.contains('.') { digits.trim_end_matches('0').trim_end_matches('.').to_string() } else { digits };
    if trimmed == "-0" {
        "0".into()
    } else {
        trimmed
    }
}

/// Endpoints of `ax + by + c = 0` inside the viewport, if it meets it.
fn clip(coeffs: [Rational; 3], v: &Viewport) -> Option<((Rational, Rational), (Rational, Rational))> {
    let [a, b, c] = coeffs;
    let mut hits: Vec<(Rational, Rational)> = Vec::new();
    if !b.is_zero() {
        for x in [&v.xmin, &v.xmax] {
            let y = -(&a * x + &c) / &b;
            if y >= v.ymin && y <= v.ymax {
                hits.push((x.clone(), y));
            }
        }
    }
    if !a.is_zero() {
        for y in [&v.ymin, &v.ymax] {
            let x = -(&b * y + &c) / &a;
            if x >= v.xmin && x <= v.xmax {
                hits.push((x, y.clone()));
            }
        }
    }
    hits.sort();
    hits.dedup();
    match hits.len() {
        0 => None,
        _ => Some((hits[0].clone(), hits[hits.len() - 1].clone())),
    }
}

/// One `<path>` per distinct line meeting the viewport, stroke width
/// proportional to multiplicity; lines at infinity or outside the viewport
/// are listed in the legend.
pub fn render_svg(r: &LineConfig, viewport: &Viewport) -> Result<String, RenderError> {
    if r.is_empty() {
        return Err(RenderError::EmptyConfig);
    }
    let v = viewport;
    let w = Rational::from_integer(WIDTH.into());
    let scale = &w / (&v.xmax - &v.xmin);
    let h = (&v.ymax - &v.ymin) * &scale;
    let to_px = |(x, y): &(Rational, Rational)| ((x - &v.xmin) * &scale, (&v.ymax - y) * &scale);

    let mut body = String::new();
    let mut at_infinity = Vec::new();
    let mut outside = Vec::new();
    for (line, mult) in r.entries() {
        let [a, b, c] = line.coeffs().clone().map(Rational::from_integer);
        if a.is_zero() && b.is_zero() {
            at_infinity.push(mult);
            continue;
        }
        let Some((p, q)) = clip([a, b, c], v) else {
            outside.push(mult);
            continue;
        };
        let ((x1, y1), (x2, y2)) = (to_px(&p), to_px(&q));
        let [l0, l1, l2] = line.coeffs();
        let _ = writeln!(
            body,
            r#"    <path d="M {} {} L {} {}" stroke-width="{}" data-line="{l0} {l1} {l2}" data-mult="{mult}"/>"#,
            decimal(&x1),
            decimal(&y1),
            decimal(&x2),
            decimal(&y2),
            decimal(&Rational::new((3 * mult).into(), 4.into())),
        );
    }
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{}" viewBox="0 0 {WIDTH} {}">"#,
        decimal(&h),
        decimal(&h)
    );
    let _ = writeln!(
        svg,
        "  <desc>viewport x [{}, {}] y [{}, {}]; {} distinct lines, total multiplicity {}</desc>",
        format_rational(&v.xmin),
        format_rational(&v.xmax),
        format_rational(&v.ymin),
        format_rational(&v.ymax),
        r.len(),
        r.total()
    );
    let _ = writeln!(svg, r#"  <rect x="0" y="0" width="{WIDTH}" height="{}" fill="white"/>"#, decimal(&h));
    let _ = writeln!(svg, r#"  <g fill="none" stroke="black" stroke-linecap="round">"#);
    svg.push_str(&body);
    let _ = writeln!(svg, "  </g>");
    let mut legend = Vec::new();
    if !at_infinity.is_empty() {
        legend.push(format!("line at infinity, multiplicity {}", at_infinity.iter().sum::<u64>()));
    }
    if !outside.is_empty() {
        legend.push(format!("{} lines outside the viewport", outside.len()));
    }
    for (i, text) in legend.iter().enumerate() {
        let _ = writeln!(svg, r#"  <text x="8" y="{}" font-family="sans-serif" font-size="12">{text}</text>"#, 16 + 16 * i);
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
