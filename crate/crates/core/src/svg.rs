//! Deterministic SVG drawings of galleries, views, decompositions and
//! witnesses. Walls are solid, windows and view chords dashed, sink regions
//! shaded, witness sites drawn as stars.

use std::fmt::Write as _;

use crate::decomposition::{GuardSiteSet, VisibilityDecomposition};
use crate::geom::Point;
use crate::normality::WitnessSet;
use crate::polygon::SimplePolygon;
use crate::visibility::View;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 24.0;

pub struct Svg {
    min: (f64, f64),
    scale: f64,
    height: f64,
    body: String,
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    pub fn new(poly: &SimplePolygon) -> Svg {
        let (lo, hi) = poly.bbox();
        let (x0, y0) = lo.to_f64();
        let (x1, y1) = hi.to_f64();
        let span = (x1 - x0).max(y1 - y0).max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        let height = (y1 - y0) * scale + 2.0 * MARGIN;
        let mut svg = Svg { min: (x0, y1), scale, height, body: String::new() };
        let d = svg.path(poly.vertices());
        writeln!(svg.body, r##"<path d="{d}" fill="#fafafa" stroke="#222" stroke-width="2"/>"##).unwrap();
        svg
    }

    fn xy(&self, p: &Point) -> (String, String) {
        let (x, y) = p.to_f64();
        (fmt(MARGIN + (x - self.min.0) * self.scale), fmt(MARGIN + (self.min.1 - y) * self.scale))
    }

    fn path(&self, pts: &[Point]) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.xy(p);
            write!(d, "{}{x} {y} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        d.push('Z');
        d
    }

    fn line(&mut self, a: &Point, b: &Point, style: &str) {
        let (x1, y1) = self.xy(a);
        let (x2, y2) = self.xy(b);
        writeln!(self.body, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#).unwrap();
    }

    fn label(&mut self, p: &Point, text: &str, dx: f64, dy: f64, size: u32) {
        let (x, y) = p.to_f64();
        let px = fmt(MARGIN + (x - self.min.0) * self.scale + dx);
        let py = fmt(MARGIN + (self.min.1 - y) * self.scale + dy);
        writeln!(
            self.body,
            r#"<text x="{px}" y="{py}" font-family="sans-serif" font-size="{size}">{}</text>"#,
            escape(text)
        )
        .unwrap();
    }

    pub fn sites(&mut self, sites: &GuardSiteSet) -> &mut Self {
        for s in sites.sites() {
            let (x, y) = self.xy(&s.point);
            writeln!(self.body, r##"<circle cx="{x}" cy="{y}" r="3.5" fill="#1f5fbf"/>"##).unwrap();
            self.label(&s.point, &s.name, 5.0, -5.0, 12);
        }
        self
    }

    pub fn view(&mut self, gallery: &SimplePolygon, view: &View) -> &mut Self {
        let d = self.path(view.polygon.vertices());
        writeln!(self.body, r##"<path d="{d}" fill="#f2c94c" fill-opacity="0.35" stroke="none"/>"##).unwrap();
        for c in view.chords(gallery) {
            self.line(&c.a, &c.b, r##"stroke="#b07d00" stroke-width="1.5" stroke-dasharray="6 4""##);
        }
        let (x, y) = self.xy(&view.site);
        writeln!(self.body, r##"<circle cx="{x}" cy="{y}" r="4" fill="#b07d00"/>"##).unwrap();
        self
    }

    pub fn decomposition(&mut self, d: &VisibilityDecomposition, sites: &GuardSiteSet, shade_sinks: bool) -> &mut Self {
        if shade_sinks {
            for &s in &d.sinks {
                for &c in &d.regions[s].cells {
                    let pts = d.arrangement.cells[c].corners();
                    let path = self.path(&pts);
                    writeln!(self.body, r##"<path d="{path}" fill="#9b51e0" fill-opacity="0.3" stroke="none"/>"##)
                        .unwrap();
                }
            }
        }
        for w in &d.windows {
            self.line(&w.base, &w.tip, r##"stroke="#555" stroke-width="1" stroke-dasharray="5 3""##);
        }
        for r in &d.regions {
            let mut hidden = sites.names_of(&r.visible.complement());
            hidden.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            let text = format!("H{{{}}}", hidden.join(","));
            self.label(&r.representative, &text, -8.0, 4.0, 9);
        }
        self
    }

    pub fn witness(&mut self, w: &WitnessSet, sites: &GuardSiteSet) -> &mut Self {
        for i in w.sites.iter() {
            let p = &sites.get(i).point;
            let (x, y) = p.to_f64();
            let cx = MARGIN + (x - self.min.0) * self.scale;
            let cy = MARGIN + (self.min.1 - y) * self.scale;
            let mut pts = String::new();
            for k in 0..10 {
                let r = if k % 2 == 0 { 9.0 } else { 4.0 };
                let a = std::f64::consts::PI * (k as f64) / 5.0 - std::f64::consts::FRAC_PI_2;
                write!(pts, "{},{} ", fmt(cx + r * a.cos()), fmt(cy + r * a.sin())).unwrap();
            }
            writeln!(self.body, r##"<polygon points="{}" fill="#eb5757"/>"##, pts.trim_end()).unwrap();
        }
        let (x, y) = self.xy(&w.uncovered_point);
        writeln!(
            self.body,
            r##"<circle cx="{x}" cy="{y}" r="5" fill="none" stroke="#eb5757" stroke-width="2"/>"##
        )
        .unwrap();
        self.label(&w.uncovered_point, "hidden", 7.0, 12.0, 10);
        self
    }

    pub fn finish(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            fmt(WIDTH),
            fmt(self.height),
            fmt(WIDTH),
            fmt(self.height),
            self.body
        )
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::build_decomposition;
    use crate::fixtures;
    use crate::visibility::visibility_polygon;

    #[test]
    fn square_outline_only() {
        let f = fixtures::square();
        let s = Svg::new(&f.polygon).finish();
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<path").count(), 1);
        assert!(!s.contains("stroke-dasharray"));
    }

    #[test]
    fn lshape_view_has_the_chord() {
        let f = fixtures::lshape();
        let v = visibility_polygon(&f.polygon, &Point::int(4, 1)).unwrap();
        let s = Svg::new(&f.polygon).view(&f.polygon, &v).finish();
        assert_eq!(s.matches("stroke-dasharray").count(), 1);
    }

    #[test]
    fn output_is_deterministic() {
        let f = fixtures::gamma8();
        let a = f.corner_sites();
        let d = build_decomposition(&f.polygon, &a).unwrap();
        let draw = || Svg::new(&f.polygon).decomposition(&d, &a, true).sites(&a).finish();
        assert_eq!(draw(), draw());
        assert!(draw().contains("H{4,5,8}"));
    }
}
