use proptest::prelude::*;
use trigroup_core::davkd::analysis::{boundary_bound_check, constraint_analysis, Q};
use trigroup_core::davkd::diagram::{bell, enumerate_davkd, raw_count, Diagram, Mode};
use trigroup_core::davkd::fulfil::is_fulfillable;
use trigroup_core::davkd::map::unrooted_maps;
use trigroup_core::{sample_presentation, SampleConfig};

const MAPS: [usize; 8] = [1, 2, 4, 13, 34, 119, 422, 1553];

#[test]
fn map_counts_are_frozen() {
    for (m, &want) in (1..=8).zip(&MAPS) {
        assert_eq!(unrooted_maps(m).len(), want, "m = {m}");
    }
}

#[test]
fn maps_are_discs() {
    for m in 1..=8 {
        for (map, _) in unrooted_maps(m) {
            let (l1, l2) = (map.internal_edge_count(), map.boundary_length());
            assert_eq!(3 * m, 2 * l1 + l2);
            assert_eq!(map.vertex_count() as i64 - (l1 + l2) as i64 + m as i64, 1);
            assert!(map.is_connected());
            assert_eq!(map.boundary_cycle_count(), 1);
        }
    }
}

#[test]
fn orbit_sizes_sum_to_raw_count() {
    for m in 1..=3 {
        let raw = enumerate_davkd(m, Mode::Raw).unwrap();
        let canon = enumerate_davkd(m, Mode::Canonical).unwrap();
        assert_eq!(raw.len() as u64, raw_count(m));
        assert_eq!(canon.iter().map(|(_, o)| o).sum::<u64>(), raw_count(m));
        assert!(canon.len() < raw.len() || m == 1 && canon.len() == 2);
    }
    assert_eq!(raw_count(1), 6);
    assert_eq!(raw_count(2), 2 * 2 * 36);
}

#[test]
fn raw_counts_respect_the_union_bound_shape() {
    let a: f64 = 30.0;
    for m in 1..=8 {
        let shape = (a * 6.0 * m as f64).powi(m as i32);
        assert!((raw_count(m) as f64) <= shape, "m = {m}");
        assert_eq!(raw_count(m), MAPS[m - 1] as u64 * bell(m) * 6u64.pow(m as u32));
    }
}

fn small_diagram() -> impl Strategy<Value = Diagram> {
    let pool: Vec<Diagram> = (1..=3)
        .flat_map(|m| enumerate_davkd(m, Mode::Canonical).unwrap())
        .map(|(d, _)| d)
        .collect();
    prop::sample::select(pool)
}

proptest! {
    #[test]
    fn constraint_graphs_grow_by_prefix(d in small_diagram(), num in 1i64..20) {
        let f = Q::new(num, 20);
        let a = constraint_analysis(&d, f);
        prop_assert_eq!(a.components.len(), d.k());
        prop_assert!(a.components[0] <= 3);
        for w in a.components.windows(2) {
            prop_assert!(w[1] <= w[0] + 3);
        }
        let b = boundary_bound_check(&d, f);
        prop_assert_eq!(b.lhs, Q::from(d.l2() as i64));
        prop_assert_eq!(b.holds, b.lhs >= b.rhs);
    }

    #[test]
    fn fulfillability_is_monotone(d in small_diagram(), seed in any::<u64>(), p in 0.0f64..0.3, q in 0.0f64..0.3) {
        let small = sample_presentation(&SampleConfig::new(2, p, seed));
        let extra = sample_presentation(&SampleConfig::new(2, q, seed ^ 0x9e37));
        let big = small.union(&extra);
        let a = is_fulfillable(&d, &small, 1 << 20).unwrap();
        let b = is_fulfillable(&d, &big, 1 << 20).unwrap();
        prop_assert!(a.is_none() || b.is_some());
    }
}
