//! SVG picture of the gasket: the unit circle and its images under words in
//! the three parabolic generators. Floating point only; presentation, not proof.

use std::fmt::Write as _;

use num_complex::Complex64 as C;

/// A Möbius map `z ↦ (az+b)/(cz+d)`.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mobius {
    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    fn rotation(angle: f64) -> Mobius {
        Mobius { a: C::from_polar(1.0, angle), b: C::new(0.0, 0.0), c: C::new(0.0, 0.0), d: C::new(1.0, 0.0) }
    }
}

/// `A₁ = A_•`, `A₂ = ω A_• ω⁻¹`, `A₃ = ω⁻¹ A_• ω` with `ω = e^{2πi/3}`.
/// Each maps the unit disk into itself, tangent to the circle at `1`, `ω`, `ω²`.
pub fn generators() -> [Mobius; 3] {
    let r3 = 3f64.sqrt();
    let base = Mobius { a: C::new(r3 - 1.0, 0.0), b: C::new(1.0, 0.0), c: C::new(-1.0, 0.0), d: C::new(r3 + 1.0, 0.0) };
    let w = 2.0 * std::f64::consts::PI / 3.0;
    let conj = |t: f64| Mobius::rotation(t).compose(&base).compose(&Mobius::rotation(-t));
    [base, conj(w), conj(-w)]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

/// Circle through three points, `None` if they are (nearly) collinear.
pub fn circumcircle(p: C, q: C, r: C) -> Option<Circle> {
    let d = 2.0 * (p.re * (q.im - r.im) + q.re * (r.im - p.im) + r.re * (p.im - q.im));
    if d.abs() < 1e-300 {
        return None;
    }
    let (p2, q2, r2) = (p.norm_sqr(), q.norm_sqr(), r.norm_sqr());
    let cx = (p2 * (q.im - r.im) + q2 * (r.im - p.im) + r2 * (p.im - q.im)) / d;
    let cy = (p2 * (r.re - q.re) + q2 * (p.re - r.re) + r2 * (q.re - p.re)) / d;
    let r = ((p.re - cx).powi(2) + (p.im - cy).powi(2)).sqrt();
    Some(Circle { cx, cy, r })
}

/// Image of the unit circle under `m`.
pub fn image_of_unit_circle(m: &Mobius) -> Option<Circle> {
    let pts = [C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(0.0, -1.0)].map(|z| m.apply(z));
    circumcircle(pts[0], pts[1], pts[2])
}

/// Images of the unit circle under all words of length `1..=depth`, in
/// breadth-first order. Circles below `min_radius` are dropped with their
/// descendants.
pub fn circles(depth: usize, min_radius: f64) -> Vec<(usize, Circle)> {
    let gens = generators();
    let mut out = Vec::new();
    let mut level = vec![Mobius::rotation(0.0)];
    for d in 1..=depth {
        let mut next = Vec::with_capacity(level.len() * 3);
        for w in &level {
            for g in &gens {
                let m = w.compose(g);
                if let Some(c) = image_of_unit_circle(&m) {
                    if c.r >= min_radius {
                        out.push((d, c));
                        next.push(m);
                    }
                }
            }
        }
        level = next;
    }
    out
}

/// SVG document of side `size` pixels.
pub fn svg(depth: usize, size: u32) -> String {
    let half = size as f64 / 2.0;
    let scale = half * 0.96;
    let min_radius = 0.5 / scale;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(s, r#"<title>Apollonian gasket, depth {depth}</title>"#);
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<g fill="none" stroke="#1f3b73">"##);
    let _ = writeln!(s, r#"<circle cx="{half:.3}" cy="{half:.3}" r="{scale:.3}" stroke-width="1.5"/>"#);
    for (d, c) in circles(depth, min_radius) {
        let w = (1.2 / d as f64).max(0.25);
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" stroke-width="{w:.2}"/>"#,
            half + scale * c.cx,
            half - scale * c.cy,
            scale * c.r
        );
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
