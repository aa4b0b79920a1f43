//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use atmot_core::bockstein::{self, BocksteinInput, DifferentialSpec, GeneratorSpec, Torsion};
use atmot_core::charts::{glyph_counts, point_chart, point_products, point_table, render, ChartSpec, Plane};
use atmot_core::cobar::{compute_ext_checked, les_balance, ExtCoeffs, ExtTable};
use atmot_core::cta::{ca_cta_group, cta_a_inverted_group, cta_group, DegreeBox, ExtTables};
use atmot_core::grading::{named_element, tau_degree, xi_degree};
use atmot_core::point::{mf2_group, mz2_group, uf2_group, uz2_group, PointRing};
use atmot_core::regions::{nonzero_possible, RegionObject};
use atmot_core::steenrod::steenrod_rank;
use atmot_core::{GroupPresentation, GroupTable, Order, Summand, TriDegree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tri(name: &str) -> TriDegree {
    named_element(name).unwrap().degree.to_tri()
}

// ---------------------------------------------------------------------------
// 1. Point rings against the figures.

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Square,
    Circle,
}

/// One drawn class: position, glyph, a line to the previously drawn class, explicit lines with coefficient.
type Drawn = (i64, i64, Shape, bool, &'static [(i64, i64, i64)]);

use Shape::{Circle as C, Square as S};

const UF2_FIGURE: &[Drawn] = &[
    (0, 0, C, false, &[]),
    (0, -1, C, true, &[]),
    (0, -2, C, true, &[]),
    (0, -3, C, true, &[]),
    (0, -4, C, true, &[]),
    (1, -1, C, false, &[(0, 0, 1)]),
    (1, -2, C, true, &[(0, -1, 1)]),
    (1, -3, C, true, &[(0, -2, 1)]),
    (1, -4, C, true, &[(0, -3, 1)]),
    (2, -2, C, false, &[(1, -1, 1)]),
    (2, -3, C, true, &[(1, -2, 1)]),
    (2, -4, C, true, &[(1, -3, 1)]),
    (3, -3, C, false, &[(2, -2, 1)]),
    (3, -4, C, true, &[(2, -3, 1)]),
    (4, -4, C, false, &[(3, -3, 1)]),
    (-2, 2, C, false, &[]),
    (-2, 3, C, true, &[]),
    (-2, 4, C, true, &[]),
    (-2, 5, C, true, &[]),
    (-2, 6, C, true, &[]),
    (-3, 3, C, false, &[(-2, 2, 1)]),
    (-3, 4, C, true, &[(-2, 3, 1)]),
    (-3, 5, C, true, &[(-2, 4, 1)]),
    (-3, 6, C, true, &[(-2, 5, 1)]),
    (-4, 4, C, false, &[(-3, 3, 1)]),
    (-4, 5, C, true, &[(-3, 4, 1)]),
    (-4, 6, C, true, &[(-3, 5, 1)]),
    (-5, 5, C, false, &[(-4, 4, 1)]),
    (-5, 6, C, true, &[(-4, 5, 1)]),
    (-6, 6, C, false, &[(-5, 5, 1)]),
];

const UZ2_FIGURE: &[Drawn] = &[
    (0, 0, S, false, &[]),
    (0, -1, C, true, &[]),
    (0, -2, C, true, &[]),
    (0, -3, C, true, &[]),
    (0, -4, C, true, &[]),
    (0, -5, C, true, &[]),
    (2, -2, S, false, &[(0, 0, 1)]),
    (2, -3, C, true, &[]),
    (2, -4, C, true, &[]),
    (2, -5, C, true, &[]),
    (4, -4, S, false, &[(2, -2, 1)]),
    (4, -5, C, true, &[]),
    (6, -6, S, false, &[(4, -4, 1)]),
    (-2, 2, S, false, &[(0, 0, 2)]),
    (-4, 4, S, false, &[(-2, 2, 1)]),
    (-6, 6, S, false, &[(-4, 4, 1)]),
    (-8, 8, S, false, &[(-6, 6, 1)]),
    (-3, 3, C, false, &[]),
    (-3, 4, C, true, &[]),
    (-3, 5, C, true, &[]),
    (-3, 6, C, true, &[]),
    (-3, 7, C, true, &[]),
    (-3, 8, C, true, &[]),
    (-5, 5, C, false, &[(-3, 3, 1)]),
    (-5, 6, C, true, &[]),
    (-5, 7, C, true, &[]),
    (-5, 8, C, true, &[]),
    (-7, 7, C, false, &[(-5, 5, 1)]),
    (-7, 8, C, true, &[]),
    (-9, 9, C, false, &[(-7, 7, 1)]),
];

type Line = ((i64, i64), (i64, i64), i64);

fn drawn_lines(fig: &[Drawn]) -> Vec<Line> {
    let mut out = Vec::new();
    for (k, &(x, y, _, prev, extra)) in fig.iter().enumerate() {
        if prev {
            let (px, py, ..) = fig[k - 1];
            out.push(((x, y), (px, py), 1));
        }
        for &(tx, ty, c) in extra {
            out.push(((x, y), (tx, ty), c));
        }
    }
    out
}

fn check_figure(ring: PointRing, fig: &[Drawn], window: ((i64, i64), (i64, i64)), u_name: &str) -> (bool, String) {
    let group = |p, q| match ring {
        PointRing::UF2 => uf2_group(p, q),
        PointRing::UZ2 => uz2_group(p, q),
    };
    let mut problems = Vec::new();
    for &(x, y, shape, ..) in fig {
        let g = group(x, y);
        let want = match shape {
            Shape::Square => Order::Z2Adic,
            Shape::Circle => Order::Cyclic(2),
        };
        if g.shape() != vec![want] {
            problems.push(format!("class ({x},{y}) is {g}"));
        }
    }
    // Products among all drawn classes, including any drawn past the window.
    let table = point_table(ring, (-12, 8), (-8, 12));
    let edges = point_products(&table, ring, &["a_sigma".into(), u_name.into()]).unwrap();
    let computed: BTreeSet<Line> = edges
        .iter()
        .map(|e| ((e.source.0.p, e.source.0.q), (e.target.0.p, e.target.0.q), e.coeff))
        .collect();
    let lines = drawn_lines(fig);
    for &(a, b, c) in &lines {
        if !computed.contains(&(a, b, c)) && !computed.contains(&(b, a, c)) {
            problems.push(format!("line {a:?}-{b:?} x{c} not a product"));
        }
    }
    let drawn: BTreeSet<(i64, i64)> = fig.iter().map(|&(x, y, ..)| (x, y)).collect();
    let ((p0, p1), (q0, q1)) = window;
    let mut undrawn = Vec::new();
    for p in p0..=p1 {
        for q in q0..=q1 {
            if !group(p, q).is_zero() && !drawn.contains(&(p, q)) {
                undrawn.push((p, q));
            }
        }
    }
    let detail = format!(
        "{ring}: {} drawn classes, {} drawn lines; {} computed classes in the window not drawn {:?}",
        fig.len(),
        lines.len(),
        undrawn.len(),
        undrawn
    );
    if problems.is_empty() {
        (true, detail)
    } else {
        (false, format!("{detail}; mismatches: {}", problems.join(", ")))
    }
}

fn criterion_1() -> Outcome {
    let (a, da) = check_figure(PointRing::UF2, UF2_FIGURE, ((-6, 4), (-4, 6)), "u_sigma");
    let (b, db) = check_figure(PointRing::UZ2, UZ2_FIGURE, ((-9, 6), (-5, 9)), "u_2sigma");
    outcome(a && b, format!("{da} | {db}"))
}

// ---------------------------------------------------------------------------
// 2. Tri-graded point.

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for p in -12..=12 {
        for q in -12..=12 {
            for w in -6..=6 {
                let d = TriDegree::new(p, q, w);
                for (name, g, base) in [("MF2", mf2_group(d), uf2_group(p, q)), ("MZ2", mz2_group(d), uz2_group(p, q))] {
                    let ok = if w > 0 { g.is_zero() } else { g.same_shape(&base) };
                    if !ok {
                        bad.push(format!("{name}{d}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("25x25x13 degrees, failures {bad:?}"))
}

// ---------------------------------------------------------------------------
// 3. Registry relations.

fn criterion_3() -> Outcome {
    let rho = tri("rho") == tri("ta") + tri("a");
    let tau = tri("tau") == tri("ta") + tri("u");
    let g = mf2_group(TriDegree::new(1, -1, -1));
    let gen = g == GroupPresentation::single(Order::Cyclic(2), "ta u");
    outcome(rho && tau && gen, format!("rho {rho}, tau {tau}, MF2(1,-1,-1) = {g}"))
}

// ---------------------------------------------------------------------------
// 4. Steenrod homogeneity and rank oracle.

/// Ranks by generating-function convolution: exterior `tau_i`, polynomial `xi_i`, then `MF2` coefficients.
fn rank_oracle(bound: i64) -> impl Fn(TriDegree) -> usize {
    let mut counts: BTreeMap<(i64, i64, i64), usize> = BTreeMap::from([((0, 0, 0), 1)]);
    let mut i = 0u32;
    while (1i64 << i) - 1 <= bound {
        let t = tau_degree(i);
        if t.p <= bound {
            let mut next = counts.clone();
            for (&(p, q, w), &c) in &counts {
                if p + t.p <= bound {
                    *next.entry((p + t.p, q + t.q, w + t.w)).or_default() += c;
                }
            }
            counts = next;
        }
        if i >= 1 {
            let x = xi_degree(i);
            let mut next = counts.clone();
            for (&(p, q, w), &c) in &counts {
                let mut k = 1;
                while p + k * x.p <= bound {
                    *next.entry((p + k * x.p, q + k * x.q, w + k * x.w)).or_default() += c;
                    k += 1;
                }
            }
            counts = next;
        }
        i += 1;
    }
    move |d: TriDegree| {
        counts
            .iter()
            .filter(|(&(p, q, w), _)| {
                let (cp, cq) = (d.p - p, d.q - q);
                let coeff = (cp >= 0 && cp + cq <= 0) || (cp <= -2 && cp + cq >= 0);
                coeff && w >= d.w
            })
            .map(|(_, &c)| c)
            .sum()
    }
}

fn criterion_4() -> Outcome {
    let mut homogeneous = true;
    for i in 0..=4u32 {
        let lhs = 2 * tau_degree(i);
        let (ta, a, u) = (tri("ta"), tri("a"), tri("u"));
        let terms = [
            ta + a + tau_degree(i + 1),
            ta + u + xi_degree(i + 1),
            ta + a + tau_degree(0) + xi_degree(i + 1),
        ];
        homogeneous &= terms.iter().all(|&t| t == lhs);
    }
    // Generators with p <= 20 cover every degree with max(p, p + q) <= 20.
    let oracle = rank_oracle(20);
    let mut bad = Vec::new();
    let mut total = 0usize;
    for p in -10..=10 {
        for q in -10..=10 {
            for w in -10..=10 {
                let d = TriDegree::new(p, q, w);
                let (got, want) = (steenrod_rank(d), oracle(d));
                total += got;
                if got != want {
                    bad.push(format!("{d}: {got} vs {want}"));
                }
            }
        }
    }
    outcome(
        homogeneous && bad.is_empty(),
        format!("relation homogeneous for i=0..4: {homogeneous}; 9261 degrees, total rank {total}, mismatches {bad:?}"),
    )
}

// ---------------------------------------------------------------------------
// 5. Ext engine.

fn nonzero_outside(t: &ExtTable) -> Vec<(usize, i64)> {
    t.entries.iter().filter(|e| !e.group.is_zero() && e.s as i64 > e.t).map(|e| (e.s, e.t)).collect()
}

fn criterion_5() -> Outcome {
    let z = compute_ext_checked(3, 6, 24, ExtCoeffs::Z, true);
    let f = compute_ext_checked(3, 6, 24, ExtCoeffs::F2, true);
    let z2 = compute_ext_checked(2, 6, 24, ExtCoeffs::Z, true);
    let (z, f, z2) = match (z, f, z2) {
        (Ok(z), Ok(f), Ok(z2)) => (z, f, z2),
        (z, f, z2) => {
            let errs: Vec<String> = [z.err(), f.err(), z2.err()].into_iter().flatten().map(|e| e.to_string()).collect();
            return outcome(false, format!("d^2 or build failure: {}", errs.join("; ")));
        }
    };
    let e00 = z.get(0, 0).unwrap();
    let a = e00.shape() == vec![Order::Z2Adic];
    let outside: Vec<_> = nonzero_outside(&z).into_iter().chain(nonzero_outside(&f)).collect();
    let b = outside.is_empty();
    let e12 = z.get(1, 2).unwrap();
    let c = e12.shape() == vec![Order::Cyclic(2)] && z2.get(1, 2).unwrap().same_shape(&e12);
    let les = les_balance(&z, &f);
    let d = les.is_empty();
    outcome(
        a && b && c && d,
        format!(
            "d^2 = 0 checked; Ext^(0,0) = {e00}; nonzero with s > t: {outside:?}; Ext^(1,2) = {e12} at N=3, {} at N=2; LES imbalances {les:?}",
            z2.get(1, 2).unwrap()
        ),
    )
}

// ---------------------------------------------------------------------------
// 6 and 7. Cta assembly.

fn big_box() -> DegreeBox {
    DegreeBox::new((-6, 10), (-8, 8), (-4, 8))
}

fn criterion_6(tables: &ExtTables) -> Outcome {
    let bx = big_box();
    let mut neg_w = Vec::new();
    let mut outside = Vec::new();
    let mut nonzero = 0;
    for d in bx.degrees() {
        let g = match cta_group(d, tables) {
            Ok(g) => g,
            Err(e) => return outcome(false, e.to_string()),
        };
        if g.is_zero() {
            continue;
        }
        nonzero += 1;
        if d.w < 0 {
            neg_w.push(d);
        }
        if !nonzero_possible(RegionObject::Cta, d) {
            outside.push(d);
        }
    }
    let unit = cta_group(TriDegree::ZERO, tables).unwrap();
    let ok = neg_w.is_empty() && outside.is_empty() && unit.shape() == vec![Order::Z2Adic];
    outcome(ok, format!("{nonzero} nonzero degrees; w < 0 nonzero {neg_w:?}; outside region (2) {outside:?}; Cta(0,0,0) = {unit}"))
}

fn criterion_7(tables: &ExtTables) -> Outcome {
    let bx = big_box();
    let mut bad = Vec::new();
    let period = TriDegree::new(1, -1, 0);
    for d in bx.degrees() {
        let g = ca_cta_group(d, tables).unwrap();
        if !g.is_zero() && !nonzero_possible(RegionObject::CtaModA, d) {
            bad.push(format!("CaCta{d} outside (5)"));
        }
        if bx.contains(d + period) && !g.same_shape(&ca_cta_group(d + period, tables).unwrap()) {
            bad.push(format!("CaCta{d} not periodic"));
        }
        let h = cta_a_inverted_group(d, tables).unwrap();
        if !h.is_zero() && !nonzero_possible(RegionObject::AInvertedCta, d) {
            bad.push(format!("Cta[a^-1]{d} outside (8)"));
        }
        let base = cta_a_inverted_group(TriDegree::new(d.p, 0, d.w), tables).unwrap();
        if !h.same_shape(&base) {
            bad.push(format!("Cta[a^-1]{d} depends on q"));
        }
    }
    outcome(bad.is_empty(), format!("failures {bad:?}"))
}

// ---------------------------------------------------------------------------
// 8. Bockstein engine.

/// Random generators plus one to three differentials, each into a freshly added or an existing target.
fn random_complex(rng: &mut ChaCha8Rng) -> BocksteinInput {
    let torsion = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.4) { Torsion::F2 } else { Torsion::Z2 };
    let mut basis: Vec<GeneratorSpec> = (0..rng.gen_range(1..=4))
        .map(|i| GeneratorSpec { label: format!("g{i}"), degree: [rng.gen_range(1..3), 0, rng.gen_range(0..3)], torsion: torsion(rng) })
        .collect();
    let mut differentials = Vec::new();
    let mut used = BTreeSet::new();
    for _ in 0..rng.gen_range(1..=3) {
        let s = rng.gen_range(0..basis.len());
        let [p, _, w] = basis[s].degree;
        if p < 1 || w > 2 {
            continue;
        }
        let r = rng.gen_range(1..=3 - w);
        if !used.insert((s, r)) {
            continue;
        }
        let target = [p - 1, 0, w + r];
        let existing = (0..basis.len()).find(|&t| {
            basis[t].degree == target && !(basis[s].torsion == Torsion::F2 && basis[t].torsion == Torsion::Z2)
        });
        let t = match existing {
            Some(t) if rng.gen_bool(0.5) => t,
            _ => {
                let tor = if basis[s].torsion == Torsion::F2 { Torsion::F2 } else { torsion(rng) };
                basis.push(GeneratorSpec { label: format!("g{}", basis.len()), degree: target, torsion: tor });
                basis.len() - 1
            }
        };
        let c: i64 = [-2, -1, 1, 2][rng.gen_range(0..4)];
        differentials.push(DifferentialSpec { page: r as u32, source: basis[s].label.clone(), target: format!("{c} {}", basis[t].label) });
    }
    BocksteinInput { basis: Some(basis), differentials, ..Default::default() }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0c5);
    let bounds = DegreeBox::new((0, 2), (0, 0), (0, 3));
    let (mut accepted, mut rejected, mut with_diff) = (0, 0, 0);
    let mut failures = Vec::new();
    while accepted < 20 {
        let input = random_complex(&mut rng);
        let cx = input.close(bounds).unwrap();
        let out = match bockstein::run(&cx, 3) {
            Ok(o) => o,
            Err(bockstein::BocksteinError::LeibnizContradiction(_)) => {
                rejected += 1;
                continue;
            }
            Err(e) => return outcome(false, e.to_string()),
        };
        accepted += 1;
        with_diff += usize::from(!cx.entries.is_empty());
        let c = &out.checks;
        if !(c.d_squared_zero && c.ranks_monotone && c.degree_contract && bockstein::abutment_check(&cx)) {
            failures.push(accepted);
        }
    }
    let kq = bockstein::kq_dataset();
    let kq_box = DegreeBox::new((0, 6), (-4, 4), (0, 3));
    let kq_ok = match kq.close(kq_box) {
        Ok(cx) => match bockstein::run(&cx, bockstein::stable_page(&cx)) {
            Ok(out) => {
                let mut table = GroupTable::new();
                for c in &out.e_infinity.cells {
                    table.insert(c.degree, c.group.clone());
                }
                let spec = ChartSpec::new(Plane::Pq { w: 0 }, kq_box.p, kq_box.q);
                let svg = render(&table, &spec).unwrap();
                let glyphs: usize = glyph_counts(&svg).values().sum();
                let expected: usize = table.iter().filter(|(d, _)| d.w == 0).map(|(_, g)| g.len()).sum();
                cx.degree_contract_holds() && out.checks.d_squared_zero && out.checks.ranks_monotone && glyphs == expected
            }
            Err(_) => false,
        },
        Err(_) => false,
    };
    outcome(
        failures.is_empty() && kq_ok,
        format!("20 random complexes ({with_diff} with differentials, {rejected} rejected for D^2 != 0), failures {failures:?}; kq dataset {kq_ok}"),
    )
}

// ---------------------------------------------------------------------------
// 9. Charts.

fn golden(name: &str) -> Option<String> {
    std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).ok()
}

fn criterion_9() -> Outcome {
    let (t, s) = point_chart(PointRing::UF2, (-6, 4), (-4, 6));
    let uf2 = golden("uf2.svg").as_deref() == Some(render(&t, &s).unwrap().as_str());
    let (t, s) = point_chart(PointRing::UZ2, (-9, 6), (-5, 9));
    let uz2 = golden("uz2.svg").as_deref() == Some(render(&t, &s).unwrap().as_str());
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a7);
    let mut fuzz_bad = 0;
    for _ in 0..100 {
        let mut table = GroupTable::new();
        for _ in 0..rng.gen_range(0..25) {
            let d = TriDegree::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3), 0);
            let n = rng.gen_range(1..=4);
            let summands = (0..n)
                .map(|i| {
                    let o = [Order::Z2Adic, Order::Cyclic(2), Order::Cyclic(4), Order::Cyclic(8)][rng.gen_range(0..4)];
                    Summand::new(o, format!("x{i}"))
                })
                .collect();
            table.insert(d, GroupPresentation::new(summands));
        }
        let svg = render(&table, &ChartSpec::new(Plane::Pq { w: 0 }, (-3, 3), (-3, 3))).unwrap();
        let expected: BTreeMap<(i64, i64), usize> = table.iter().map(|(d, g)| ((d.p, d.q), g.len())).collect();
        fuzz_bad += usize::from(glyph_counts(&svg) != expected);
    }
    outcome(uf2 && uz2 && fuzz_bad == 0, format!("uF2 snapshot {uf2}, uZ2 snapshot {uz2}, glyph-count failures {fuzz_bad}/100"))
}

// ---------------------------------------------------------------------------

fn run(id: u32, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = o.pass && in_time;
    println!(
        "criterion {id}: {} ({:.2}s, limit {}s) {}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        o.detail
    );
    pass
}

fn main() {
    let mut all = true;
    all &= run(1, Duration::from_secs(1), criterion_1);
    all &= run(2, Duration::from_secs(1), criterion_2);
    all &= run(3, Duration::from_secs(1), criterion_3);
    all &= run(4, Duration::from_secs(10), criterion_4);
    all &= run(5, Duration::from_secs(300), criterion_5);
    let start = Instant::now();
    let tables = ExtTables::compute(16);
    println!("Ext tables through internal degree 16 built in {:.2}s", start.elapsed().as_secs_f64());
    match tables {
        Ok(tables) => {
            all &= run(6, Duration::from_secs(60), || criterion_6(&tables));
            all &= run(7, Duration::from_secs(60), || criterion_7(&tables));
        }
        Err(e) => {
            println!("criterion 6: FAIL {e}");
            println!("criterion 7: FAIL {e}");
            all = false;
        }
    }
    all &= run(8, Duration::from_secs(30), criterion_8);
    all &= run(9, Duration::from_secs(10), criterion_9);
    if !all {
        std::process::exit(1);
    }
}
