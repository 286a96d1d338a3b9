//! Minimal deterministic SVG writer: fixed-precision coordinates, content
//! order fixed by the caller, a declared viewBox, and metadata comments.

use std::fmt::Write as _;

pub struct Svg {
    body: String,
    min: [f64; 2],
    max: [f64; 2],
}

fn fmt(v: f64) -> String {
    // Fixed precision keeps output byte-stable across runs.
    format!("{v:.5}")
}

impl Svg {
    pub fn new() -> Svg {
        Svg {
            body: String::new(),
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        }
    }

    fn grow(&mut self, p: [f64; 2]) {
        self.min[0] = self.min[0].min(p[0]);
        self.min[1] = self.min[1].min(p[1]);
        self.max[0] = self.max[0].max(p[0]);
        self.max[1] = self.max[1].max(p[1]);
    }

    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.body, "<!-- {} -->", text.replace("--", "—"));
    }

    pub fn polygon(&mut self, points: &[[f64; 2]], fill: &str, stroke: &str, width: f64) {
        let mut attr = String::new();
        for p in points {
            self.grow(*p);
            let _ = write!(attr, "{},{} ", fmt(p[0]), fmt(-p[1]));
        }
        let _ = writeln!(
            self.body,
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            attr.trim_end(),
            fill,
            stroke,
            fmt(width)
        );
    }

    pub fn line(&mut self, a: [f64; 2], b: [f64; 2], stroke: &str, width: f64) {
        self.grow(a);
        self.grow(b);
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            fmt(a[0]),
            fmt(-a[1]),
            fmt(b[0]),
            fmt(-b[1]),
            stroke,
            fmt(width)
        );
    }

    pub fn circle(&mut self, center: [f64; 2], r: f64, stroke: &str, width: f64) {
        self.grow([center[0] - r, center[1] - r]);
        self.grow([center[0] + r, center[1] + r]);
        let _ = writeln!(
            self.body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
            fmt(center[0]),
            fmt(-center[1]),
            fmt(r),
            stroke,
            fmt(width)
        );
    }

    /// Bounds of the content so far (y-flipped coordinates).
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        (self.min, self.max)
    }

    pub fn finish(self) -> String {
        let (min, max) = if self.min[0].is_finite() {
            (self.min, self.max)
        } else {
            ([0.0, 0.0], [1.0, 1.0])
        };
        let pad = 0.05 * ((max[0] - min[0]) + (max[1] - min[1])).max(0.1);
        let x = min[0] - pad;
        let y = -(max[1] + pad);
        let w = max[0] - min[0] + 2.0 * pad;
        let h = max[1] - min[1] + 2.0 * pad;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
            fmt(x),
            fmt(y),
            fmt(w),
            fmt(h),
            self.body
        )
    }
}

impl Default for Svg {
    fn default() -> Svg {
        Svg::new()
    }
}

/// Syntactic well-formedness scan: tags balance, attributes quoted.
/// Enough to guard the emitter in tests without an XML dependency.
pub fn well_formed(svg: &str) -> bool {
    if !svg.starts_with("<?xml") {
        return false;
    }
    let mut stack: Vec<String> = Vec::new();
    let mut rest = svg;
    while let Some(open) = rest.find('<') {
        rest = &rest[open + 1..];
        let Some(close) = rest.find('>') else {
            return false;
        };
        let tag = &rest[..close];
        rest = &rest[close + 1..];
        if tag.starts_with('?') || tag.starts_with("!--") {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            if stack.pop().as_deref() != Some(name.trim()) {
                return false;
            }
        } else if !tag.ends_with('/') {
            let name = tag.split_whitespace().next().unwrap_or("");
            stack.push(name.to_string());
        }
        // Quoted attributes: an even number of quotes per tag.
        if !tag.matches('"').count().is_multiple_of(2) {
            return false;
        }
    }
    stack.is_empty()
}

/// Fill palette indexed by tree depth.
pub fn depth_fill(depth: usize) -> &'static str {
    const PALETTE: [&str; 7] = [
        "#d7e8f7", "#a8cfed", "#7cb4df", "#5597cd", "#3878b6", "#22588f", "#123a63",
    ];
    PALETTE[depth.min(PALETTE.len() - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emits_well_formed_markup() {
        let mut svg = Svg::new();
        svg.comment("projection: chart plane");
        svg.polygon(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], "#aabbcc", "#000000", 0.01);
        svg.line([0.0, 0.0], [1.0, 1.0], "#888888", 0.005);
        svg.circle([0.0, 0.0], 1.0, "#000000", 0.01);
        let text = svg.finish();
        assert!(well_formed(&text), "{text}");
        assert!(text.contains("viewBox"));
    }

    #[test]
    fn rejects_malformed() {
        assert!(!well_formed("<svg>"));
        assert!(!well_formed("<?xml?><svg><g></svg>"));
    }
}
