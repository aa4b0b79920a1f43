use std::collections::BTreeMap;
use std::path::PathBuf;

use atmot_core::charts::{glyph_counts, point_chart, render, ChartSpec, Plane};
use atmot_core::point::PointRing;
use atmot_core::{GroupPresentation, GroupTable, Order, Summand, TriDegree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const UF2_WINDOW: ((i64, i64), (i64, i64)) = ((-6, 4), (-4, 6));
pub const UZ2_WINDOW: ((i64, i64), (i64, i64)) = ((-9, 6), (-5, 9));

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from the frozen snapshot");
}

#[test]
fn uf2_chart_matches_snapshot() {
    let (t, s) = point_chart(PointRing::UF2, UF2_WINDOW.0, UF2_WINDOW.1);
    golden("uf2.svg", &render(&t, &s).unwrap());
}

#[test]
fn uz2_chart_matches_snapshot() {
    let (t, s) = point_chart(PointRing::UZ2, UZ2_WINDOW.0, UZ2_WINDOW.1);
    golden("uz2.svg", &render(&t, &s).unwrap());
}

fn random_table(rng: &mut ChaCha8Rng) -> GroupTable {
    let mut t = GroupTable::new();
    for _ in 0..rng.gen_range(0..30) {
        let d = TriDegree::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-2..=2));
        let n = rng.gen_range(1..=4);
        let summands = (0..n)
            .map(|i| {
                let order = match rng.gen_range(0..3) {
                    0 => Order::Z2Adic,
                    1 => Order::Cyclic(2),
                    _ => Order::two_power(rng.gen_range(2..5)),
                };
                Summand::new(order, format!("g{i}"))
            })
            .collect();
        t.insert(d, GroupPresentation::new(summands));
    }
    t
}

#[test]
fn glyph_count_matches_summands() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37);
    for _ in 0..100 {
        let t = random_table(&mut rng);
        let plane = if rng.gen_bool(0.5) { Plane::Pq { w: rng.gen_range(-2..=2) } } else { Plane::Qw { p: rng.gen_range(-4..=4) } };
        let spec = ChartSpec::new(plane, (-3, 3), (-3, 3));
        let svg = render(&t, &spec).unwrap();
        let expected: BTreeMap<(i64, i64), usize> = t
            .iter()
            .filter_map(|(d, g)| {
                let c = match plane {
                    Plane::Pq { w } => (d.w == w).then_some((d.p, d.q)),
                    Plane::Qw { p } => (d.p == p).then_some((d.q, d.w)),
                }?;
                ((-3..=3).contains(&c.0) && (-3..=3).contains(&c.1)).then_some((c, g.len()))
            })
            .collect();
        assert_eq!(glyph_counts(&svg), expected);
        assert_eq!(svg, render(&t, &spec).unwrap());
    }
}
