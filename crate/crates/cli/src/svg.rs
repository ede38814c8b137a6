//! Minimal SVG 1.1 writer; y points up in the drawing.

use std::fmt::Write;

use widths_core::{Domain, Point};

pub struct Svg {
    body: String,
    half: f64,
}

impl Svg {
    /// Canvas showing `[-half, half]²`.
    pub fn new(half: f64) -> Self {
        Self { body: String::new(), half }
    }

    pub fn for_domain(dom: &Domain) -> Self {
        let (a, b) = dom.semi_axes();
        Self::new(1.1 * a.max(b))
    }

    pub fn boundary(&mut self, dom: &Domain) {
        let (a, b) = dom.semi_axes();
        if dom.is_round() {
            let _ = writeln!(self.body, r#"<circle cx="0" cy="0" r="{a:.6}" fill="none" stroke="black" stroke-width="{:.6}"/>"#, self.stroke());
        } else {
            let _ = writeln!(
                self.body,
                r#"<ellipse cx="0" cy="0" rx="{a:.6}" ry="{b:.6}" fill="none" stroke="black" stroke-width="{:.6}"/>"#,
                self.stroke()
            );
        }
    }

    pub fn polyline(&mut self, pts: &[Point], color: &str) {
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{:.6}"/>"#,
            coords(pts),
            self.stroke()
        );
    }

    pub fn polygon(&mut self, pts: &[Point], color: &str) {
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="{:.6}"/>"#,
            coords(pts),
            self.stroke()
        );
    }

    pub fn segment(&mut self, a: Point, b: Point, width: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{color}" stroke-width="{:.6}"/>"#,
            a.x,
            a.y,
            b.x,
            b.y,
            width * self.stroke()
        );
    }

    pub fn dot(&mut self, p: Point, color: &str) {
        let _ = writeln!(self.body, r#"<rect x="{:.6}" y="{:.6}" width="{w:.6}" height="{w:.6}" fill="{color}"/>"#, p.x - self.stroke(), p.y - self.stroke(), w = 2.0 * self.stroke());
    }

    fn stroke(&self) -> f64 {
        self.half / 200.0
    }

    pub fn finish(self) -> String {
        let h = self.half;
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n",
                "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"480\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
                "<g transform=\"scale(1,-1)\">\n{}</g>\n</svg>\n"
            ),
            -h,
            -h,
            2.0 * h,
            2.0 * h,
            self.body
        )
    }
}

fn coords(pts: &[Point]) -> String {
    pts.iter().map(|p| format!("{:.6},{:.6}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_shape() {
        let mut s = Svg::for_domain(&Domain::unit_disk());
        s.boundary(&Domain::unit_disk());
        s.polyline(&[Point::new(0.0, 0.0), Point::new(1.0, 0.5)], "red");
        let doc = s.finish();
        assert!(doc.starts_with("<?xml"));
        assert!(doc.contains(r#"version="1.1""#));
        assert_eq!(doc.matches("<circle").count(), 1);
        assert!(doc.contains(r#"points="0.000000,0.000000 1.000000,0.500000""#));
        assert!(doc.trim_end().ends_with("</svg>"));
    }
}
