//! SVG charts of graded group tables.
//!
//! Classes sit at integer lattice points of a plane cut out of the tri-grading,
//! one glyph per cyclic summand. Structure lines join a generator to the
//! generator its product with a registered element hits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{named_element, RODegree, TriDegree};
use crate::group::{GroupPresentation, GroupTable, Order};
use crate::point::{parse_label, point_basis, point_group, point_multiply, ta_label, PointBasisElement, PointRing};

const CELL: i64 = 36;
const MARGIN: i64 = 48;
const TITLE_BAND: i64 = 24;
const STACK: i64 = 6;
const RADIUS: i64 = 5;
const MULTIPLE_COLOR: &str = "#d62728";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("empty range {axis}: {lo} > {hi}")]
    EmptyRange { axis: &'static str, lo: i64, hi: i64 },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element `{element}` has no class in {ring}")]
    ElementNotInRing { element: String, ring: PointRing },
}

/// The two plotted coordinates; the remaining one is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Plane {
    /// `x = p`, `y = q` at weight `w`.
    Pq { w: i64 },
    /// `x = q`, `y = w` at stem `p`.
    Qw { p: i64 },
}

impl Plane {
    fn project(self, d: TriDegree) -> Option<(i64, i64)> {
        match self {
            Plane::Pq { w } => (d.w == w).then_some((d.p, d.q)),
            Plane::Qw { p } => (d.p == p).then_some((d.q, d.w)),
        }
    }

    fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            Plane::Pq { .. } => ("p", "q"),
            Plane::Qw { .. } => ("q", "w"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Glyph {
    Square,
    Circle,
    /// Two concentric circles.
    Ring,
}

/// Glyph per summand order; orders without a rule fall back to `fallback`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlyphRules {
    pub rules: BTreeMap<Order, Glyph>,
    pub fallback: Glyph,
}

impl Default for GlyphRules {
    fn default() -> Self {
        GlyphRules {
            rules: BTreeMap::from([(Order::Z2Adic, Glyph::Square), (Order::Cyclic(2), Glyph::Circle)]),
            fallback: Glyph::Ring,
        }
    }
}

impl GlyphRules {
    pub fn glyph(&self, order: Order) -> Glyph {
        self.rules.get(&order).copied().unwrap_or(self.fallback)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeStyle {
    pub color: String,
    pub dashed: bool,
}

impl Default for EdgeStyle {
    fn default() -> Self {
        EdgeStyle { color: "#000000".into(), dashed: false }
    }
}

/// Multiplication by a registered element, drawn with `style`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub element: String,
    pub style: EdgeStyle,
}

impl EdgeSpec {
    pub fn new(element: impl Into<String>) -> Self {
        EdgeSpec { element: element.into(), style: EdgeStyle::default() }
    }
}

/// One known product: `element * source = coeff * target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEdge {
    pub element: String,
    pub source: (TriDegree, String),
    pub target: (TriDegree, String),
    pub coeff: i64,
}

/// Where structure lines come from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Products {
    #[default]
    None,
    /// Labels are point-ring generators, possibly tagged with a power of `ta`.
    Point(PointRing),
    Supplied(Vec<ProductEdge>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub plane: Plane,
    pub x_range: (i64, i64),
    pub y_range: (i64, i64),
    pub edges: Vec<EdgeSpec>,
    pub glyphs: GlyphRules,
    pub products: Products,
    pub title: Option<String>,
}

impl ChartSpec {
    pub fn new(plane: Plane, x_range: (i64, i64), y_range: (i64, i64)) -> Self {
        ChartSpec { plane, x_range, y_range, edges: Vec::new(), glyphs: GlyphRules::default(), products: Products::None, title: None }
    }

    fn validate(&self) -> Result<(), ChartError> {
        for (axis, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if lo > hi {
                return Err(ChartError::EmptyRange { axis, lo, hi });
            }
        }
        for e in &self.edges {
            named_element(&e.element).map_err(|_| ChartError::UnknownElement(e.element.clone()))?;
        }
        Ok(())
    }

    fn contains(&self, (x, y): (i64, i64)) -> bool {
        (self.x_range.0..=self.x_range.1).contains(&x) && (self.y_range.0..=self.y_range.1).contains(&y)
    }
}

/// `ring` over a window of the `(p, q)`-plane, stored at weight zero.
pub fn point_table(ring: PointRing, p_range: (i64, i64), q_range: (i64, i64)) -> GroupTable {
    let mut t = GroupTable::new();
    for p in p_range.0..=p_range.1 {
        for q in q_range.0..=q_range.1 {
            let g = point_group(ring, RODegree::new(p, q));
            if !g.is_zero() {
                t.insert(TriDegree::new(p, q, 0), g);
            }
        }
    }
    t
}

/// Table and spec of the standard chart of `ring`: `a_sigma` and `u` edges over a `(p, q)` window.
pub fn point_chart(ring: PointRing, p_range: (i64, i64), q_range: (i64, i64)) -> (GroupTable, ChartSpec) {
    let u = match ring {
        PointRing::UF2 => "u_sigma",
        PointRing::UZ2 => "u_2sigma",
    };
    let mut spec = ChartSpec::new(Plane::Pq { w: 0 }, p_range, q_range);
    spec.edges = vec![EdgeSpec::new("a_sigma"), EdgeSpec::new(u)];
    spec.products = Products::Point(ring);
    spec.title = Some(ring.to_string());
    (point_table(ring, p_range, q_range), spec)
}

fn element_degree(name: &str) -> Result<TriDegree, ChartError> {
    let e = named_element(name).map_err(|_| ChartError::UnknownElement(name.to_string()))?;
    Ok(e.degree.to_tri())
}

/// `(ta exponent, generator)` of a registered element inside a point ring.
fn point_element(ring: PointRing, name: &str) -> Result<(i64, PointBasisElement), ChartError> {
    let d = element_degree(name)?;
    let missing = || ChartError::ElementNotInRing { element: name.to_string(), ring };
    if d.w > 0 {
        return Err(missing());
    }
    let b = point_basis(ring, RODegree::new(d.p, d.q)).ok_or_else(missing)?;
    Ok((-d.w, b))
}

/// Products of the styled elements with every generator of `table` whose label parses in `ring`.
pub fn point_products(table: &GroupTable, ring: PointRing, elements: &[String]) -> Result<Vec<ProductEdge>, ChartError> {
    let mut out = Vec::new();
    for name in elements {
        let shift = element_degree(name)?;
        let (ee, eb) = point_element(ring, name)?;
        for (d, g) in table {
            for s in g.summands() {
                let Some((e, b)) = parse_label(ring, &s.label) else { continue };
                let prod = point_multiply(ring, &eb, &b).expect("same ring");
                let Some((t, coeff)) = prod.single() else { continue };
                let td = *d + shift;
                let label = ta_label(e + ee, &t.label());
                if table.get(&td).is_some_and(|tg| tg.summands().iter().any(|x| x.label == label)) {
                    out.push(ProductEdge { element: name.clone(), source: (*d, s.label.clone()), target: (td, label), coeff });
                }
            }
        }
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

struct Layout {
    x0: i64,
    y1: i64,
    top: i64,
}

impl Layout {
    fn px(&self, x: i64) -> i64 {
        MARGIN + (x - self.x0) * CELL
    }

    fn py(&self, y: i64) -> i64 {
        self.top + MARGIN + (self.y1 - y) * CELL
    }
}

/// Horizontal offset of summand `i` among `n` in one cell.
fn stack_offset(i: usize, n: usize) -> i64 {
    (2 * i as i64 - (n as i64 - 1)) * STACK
}

/// Renders `table` as an SVG document; entries outside the plotted window are ignored.
pub fn render(table: &GroupTable, spec: &ChartSpec) -> Result<String, ChartError> {
    spec.validate()?;
    let cells: BTreeMap<(i64, i64), &GroupPresentation> = table
        .iter()
        .filter(|(_, g)| !g.is_zero())
        .filter_map(|(d, g)| spec.plane.project(*d).filter(|c| spec.contains(*c)).map(|c| (c, g)))
        .collect();

    let names: Vec<String> = spec.edges.iter().map(|e| e.element.clone()).collect();
    let products = match &spec.products {
        Products::None => Vec::new(),
        Products::Point(ring) => point_products(table, *ring, &names)?,
        Products::Supplied(v) => v.iter().filter(|p| names.contains(&p.element)).cloned().collect(),
    };

    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    let top = if spec.title.is_some() { TITLE_BAND } else { 0 };
    let lay = Layout { x0, y1, top };
    let width = 2 * MARGIN + (x1 - x0) * CELL;
    let height = top + 2 * MARGIN + (y1 - y0) * CELL;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"##
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##);
    if let Some(t) = &spec.title {
        let _ = writeln!(svg, r##"<text x="{}" y="16" text-anchor="middle" font-size="12">{}</text>"##, width / 2, escape(t));
    }

    let _ = writeln!(svg, r##"<g class="grid" stroke="#dddddd" stroke-width="1">"##);
    for x in x0..=x1 {
        let _ = writeln!(svg, r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"##, lay.px(x), lay.py(y1), lay.py(y0));
    }
    for y in y0..=y1 {
        let _ = writeln!(svg, r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"##, lay.py(y), lay.px(x0), lay.px(x1));
    }
    let _ = writeln!(svg, "</g>");

    let (xn, yn) = spec.plane.axis_names();
    let _ = writeln!(svg, r##"<g class="axes" fill="#555555">"##);
    for x in x0..=x1 {
        let _ = writeln!(svg, r##"<text x="{}" y="{}" text-anchor="middle">{x}</text>"##, lay.px(x), lay.py(y0) + 20);
    }
    for y in y0..=y1 {
        let _ = writeln!(svg, r##"<text x="{}" y="{}" text-anchor="end">{y}</text>"##, lay.px(x0) - 14, lay.py(y) + 4);
    }
    let _ = writeln!(svg, r##"<text x="{}" y="{}" text-anchor="start">{xn}</text>"##, lay.px(x1) + 12, lay.py(y0) + 20);
    let _ = writeln!(svg, r##"<text x="{}" y="{}" text-anchor="end">{yn}</text>"##, lay.px(x0) - 14, lay.py(y1) - 14);
    let _ = writeln!(svg, "</g>");

    let position = |d: TriDegree, label: &str| -> Option<(i64, i64)> {
        let c = spec.plane.project(d).filter(|c| spec.contains(*c))?;
        let g = cells.get(&c)?;
        let i = g.summands().iter().position(|s| s.label == label)?;
        Some((lay.px(c.0) + stack_offset(i, g.len()), lay.py(c.1)))
    };

    let _ = writeln!(svg, r##"<g class="edges" stroke-width="1.5">"##);
    for e in &spec.edges {
        for p in products.iter().filter(|p| p.element == e.element) {
            let (Some(a), Some(b)) = (position(p.source.0, &p.source.1), position(p.target.0, &p.target.1)) else {
                continue;
            };
            let color = if p.coeff.abs() == 1 { e.style.color.as_str() } else { MULTIPLE_COLOR };
            let dash = if e.style.dashed { r##" stroke-dasharray="4 3""## } else { "" };
            let _ = writeln!(
                svg,
                r##"<line class="edge" data-element="{}" data-coeff="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"{dash}/>"##,
                escape(&e.element),
                p.coeff,
                a.0,
                a.1,
                b.0,
                b.1,
                escape(color)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r##"<g class="classes" stroke="#000000" stroke-width="1.2">"##);
    for (&(x, y), g) in &cells {
        for (i, s) in g.summands().iter().enumerate() {
            let (cx, cy) = (lay.px(x) + stack_offset(i, g.len()), lay.py(y));
            let _ = write!(svg, r##"<g class="glyph" data-cell="{x},{y}" data-order="{}"><title>{}</title>"##, s.order, escape(&s.label));
            match spec.glyphs.glyph(s.order) {
                Glyph::Square => {
                    let _ = write!(
                        svg,
                        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
                        cx - RADIUS,
                        cy - RADIUS,
                        2 * RADIUS,
                        2 * RADIUS
                    );
                }
                Glyph::Circle => {
                    let _ = write!(svg, r##"<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="#000000"/>"##);
                }
                Glyph::Ring => {
                    let _ = write!(
                        svg,
                        r##"<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="#ffffff"/><circle cx="{cx}" cy="{cy}" r="{}" fill="#000000"/>"##,
                        RADIUS - 3
                    );
                }
            }
            let _ = writeln!(svg, "</g>");
        }
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Number of glyphs per plotted cell in a rendered chart.
pub fn glyph_counts(svg: &str) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for chunk in svg.split(r##"<g class="glyph" data-cell=""##).skip(1) {
        let Some((cell, _)) = chunk.split_once('"') else { continue };
        let Some((x, y)) = cell.split_once(',') else { continue };
        if let (Ok(x), Ok(y)) = (x.parse(), y.parse()) {
            *out.entry((x, y)).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Summand;

    fn uf2_spec() -> ChartSpec {
        let mut s = ChartSpec::new(Plane::Pq { w: 0 }, (-5, 3), (-3, 6));
        s.edges = vec![EdgeSpec::new("a_sigma"), EdgeSpec::new("u_sigma")];
        s.products = Products::Point(PointRing::UF2);
        s
    }

    #[test]
    fn empty_table_is_grid_only() {
        let svg = render(&GroupTable::new(), &uf2_spec()).unwrap();
        assert!(glyph_counts(&svg).is_empty());
        assert!(!svg.contains(r##"class="edge""##));
        assert!(svg.contains(r##"class="grid""##));
    }

    #[test]
    fn errors() {
        let mut s = uf2_spec();
        s.x_range = (2, 1);
        assert_eq!(render(&GroupTable::new(), &s), Err(ChartError::EmptyRange { axis: "x", lo: 2, hi: 1 }));
        let mut s = uf2_spec();
        s.edges.push(EdgeSpec::new("nope"));
        assert_eq!(render(&GroupTable::new(), &s), Err(ChartError::UnknownElement("nope".into())));
        let mut s = uf2_spec();
        s.edges = vec![EdgeSpec::new("eta")];
        assert!(matches!(render(&GroupTable::new(), &s), Err(ChartError::ElementNotInRing { .. })));
    }

    #[test]
    fn uf2_edges_follow_products() {
        let t = point_table(PointRing::UF2, (-5, 3), (-3, 6));
        let edges = point_products(&t, PointRing::UF2, &["a_sigma".into(), "u_sigma".into()]).unwrap();
        let has = |e: &str, s: (i64, i64), d: (i64, i64)| {
            edges.iter().any(|x| x.element == e && (x.source.0.p, x.source.0.q) == s && (x.target.0.p, x.target.0.q) == d)
        };
        assert!(has("a_sigma", (0, 0), (0, -1)));
        assert!(has("u_sigma", (0, 0), (1, -1)));
        assert!(has("a_sigma", (-2, 3), (-2, 2)));
        assert!(has("u_sigma", (-3, 3), (-2, 2)));
        assert!(!edges.iter().any(|x| x.source.0.p == -2 && x.source.0.q == 2));
    }

    #[test]
    fn two_tower_edge_is_multiple() {
        let t = point_table(PointRing::UZ2, (-4, 2), (-2, 4));
        let edges = point_products(&t, PointRing::UZ2, &["u_2sigma".into()]).unwrap();
        let e = edges.iter().find(|e| e.source.1 == "2/u").unwrap();
        assert_eq!((e.target.1.as_str(), e.coeff), ("1", 2));
        let mut s = ChartSpec::new(Plane::Pq { w: 0 }, (-4, 2), (-2, 4));
        s.edges = vec![EdgeSpec::new("u_2sigma")];
        s.products = Products::Point(PointRing::UZ2);
        assert!(render(&t, &s).unwrap().contains(MULTIPLE_COLOR));
    }

    #[test]
    fn stacked_cells_and_determinism() {
        let mut t = GroupTable::new();
        t.insert(
            TriDegree::new(1, 0, 2),
            GroupPresentation::new(vec![Summand::new(Order::Z2Adic, "x"), Summand::new(Order::Cyclic(4), "y<z")]),
        );
        t.insert(TriDegree::new(1, 5, 2), GroupPresentation::single(Order::Cyclic(2), "far"));
        let s = ChartSpec::new(Plane::Qw { p: 1 }, (-1, 1), (0, 3));
        let a = render(&t, &s).unwrap();
        assert_eq!(a, render(&t, &s).unwrap());
        assert_eq!(glyph_counts(&a), BTreeMap::from([((0, 2), 2)]));
        assert!(a.contains("y&lt;z") && a.contains("<rect x=") && a.contains(r##"r="2""##));
    }
}
