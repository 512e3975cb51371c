//! End-to-end geometry checks of the space-time layer: the forced-flip
//! sanity cubes must fill the 4D slab exactly, every element boundary must
//! be divergence-free, and hole measures must match their closed forms.

use aledg::geometry::V3;
use aledg::mesh::builders::{self, SanityKind};
use aledg::mesh::dual::build_dual;
use aledg::mesh::{DomainBox, GeneratorSet, Tetrahedralization};
use aledg::motion::flips::FlipEvent;
use aledg::motion::optimize::{optimize_step, ForcedFlip, OptimizerConfig};
use aledg::quadrature::{reference_quadrature, RuleKind};
use aledg::spacetime::tracks::build_spacetime;
use aledg::spacetime::volumes::{st_volume, ElementRef, SpaceTimeMesh};

fn forced_flip(kind: SanityKind) -> ForcedFlip {
    match kind {
        SanityKind::Flip32 => ForcedFlip::Remove32 { edge: (0, 1) },
        SanityKind::Flip23 => ForcedFlip::Insert23 { face: [2, 3, 4] },
        SanityKind::Flip44 => ForcedFlip::Repair44 { edge: (2, 3), diagonal: (0, 1) },
    }
}

fn build_sanity_layer(
    kind: SanityKind,
    dt: f64,
) -> (GeneratorSet, DomainBox, SpaceTimeMesh, Vec<FlipEvent>) {
    let (gens, mesh0, domain) = builders::sanity_cube(kind);
    let tess0 = build_dual(&mesh0, &gens, &domain).unwrap();
    let mut mesh1 = mesh0.clone();
    let out = optimize_step(
        &mut mesh1,
        &gens.positions,
        Vec::new(),
        Some(&forced_flip(kind)),
        &OptimizerConfig::default(),
    )
    .unwrap();
    let tess1 = build_dual(&mesh1, &gens, &domain).unwrap();
    let st = build_spacetime(
        &mesh0, &gens, &tess0, &mesh1, &gens, &tess1, &out.events, &domain, dt,
    )
    .unwrap();
    (gens, domain, st, out.events)
}

#[test]
fn sanity_closure_and_hole_measures() {
    // Exact hole measures of the 14-generator cube (static generators):
    // 3-2 and 2-3: dt/3840; 4-4: dt/480. Rounded to five digits these are
    // the familiar 2.6042e-4 and 2.0833e-3 per unit CFL fraction.
    for kind in [SanityKind::Flip32, SanityKind::Flip23, SanityKind::Flip44] {
        for n in 0..4usize {
            let dt = 0.1 / (2.0 * n as f64 + 1.0);
            let (_, domain, st, events) = build_sanity_layer(kind, dt);
            assert_eq!(events.len(), 1);
            assert_eq!(st.holes.len(), 1);
            let cell_measure = st.total_cell_measure(n);
            let hole_measure = st.total_hole_measure(n);
            let total = cell_measure + hole_measure;
            let expect_total = domain.volume() * dt;
            assert!(
                (total - expect_total).abs() <= 1e-12 * expect_total,
                "{kind:?} N={n}: closure {total} vs {expect_total}"
            );
            let expect_hole = match kind {
                SanityKind::Flip44 => dt / 48.0,
                _ => dt / 384.0,
            };
            assert!(
                (hole_measure - expect_hole).abs() <= 1e-10 * expect_hole,
                "{kind:?} N={n}: hole {hole_measure} vs {expect_hole}"
            );
            // The printed 5-digit values scaled by 2N+1.
            let printed = format!("{:.4e}", hole_measure * (2.0 * n as f64 + 1.0));
            let expect_printed = match kind {
                SanityKind::Flip44 => "2.0833e-3",
                _ => "2.6042e-4",
            };
            assert_eq!(printed, expect_printed, "{kind:?} N={n}");
        }
    }
}

#[test]
fn sanity_neighbor_counts_and_kinds() {
    let (_, _, st, _) = build_sanity_layer(SanityKind::Flip32, 0.1);
    assert_eq!(st.holes[0].neighbors.len(), 5);
    assert_eq!(st.holes[0].corner_tracks.len(), 6);
    let (_, _, st, _) = build_sanity_layer(SanityKind::Flip23, 0.1);
    assert_eq!(st.holes[0].neighbors.len(), 5);
    let (_, _, st, _) = build_sanity_layer(SanityKind::Flip44, 0.1);
    assert_eq!(st.holes[0].neighbors.len(), 6);
    assert_eq!(st.holes[0].corner_tracks.len(), 8);
    // Hole slices degenerate at the step ends.
    for kind in [SanityKind::Flip32, SanityKind::Flip23, SanityKind::Flip44] {
        let (_, _, st, _) = build_sanity_layer(kind, 0.1);
        let h = &st.holes[0];
        let v0 = aledg::spacetime::volumes::slice_volume(&h.subtets, 0.0);
        let v1 = aledg::spacetime::volumes::slice_volume(&h.subtets, 1.0);
        let vm = aledg::spacetime::volumes::slice_volume(&h.subtets, 0.5);
        assert!(v0.abs() < 1e-14, "{kind:?}: slice(0) = {v0}");
        assert!(v1.abs() < 1e-14, "{kind:?}: slice(1) = {v1}");
        assert!(vm > 0.0, "{kind:?}: interior slice empty");
    }
}

#[test]
fn divergence_free_boundaries() {
    let rule = reference_quadrature(RuleKind::Prism, 2).unwrap();
    for kind in [SanityKind::Flip32, SanityKind::Flip23, SanityKind::Flip44] {
        let (_, _, st, _) = build_sanity_layer(kind, 0.05);
        for i in 0..st.cells.len() {
            let d = st.closure_defect(ElementRef::Cell(i), &rule);
            let scale = st.boundary_scale(ElementRef::Cell(i), &rule);
            for c in d {
                assert!(c.abs() <= 1e-12 * scale, "{kind:?} cell {i}: defect {d:?}");
            }
        }
        for h in 0..st.holes.len() {
            let d = st.closure_defect(ElementRef::Hole(h), &rule);
            let scale = st.boundary_scale(ElementRef::Hole(h), &rule);
            for c in d {
                assert!(c.abs() <= 1e-12 * scale, "{kind:?} hole: defect {d:?}");
            }
        }
    }
}

#[test]
fn static_and_translating_cells_have_product_measure() {
    // No flips, no motion: every control volume measures |P| dt.
    let (gens, mesh, domain) = builders::sanity_cube(SanityKind::Flip44);
    let tess0 = build_dual(&mesh, &gens, &domain).unwrap();
    let dt = 0.07;
    let st = build_spacetime(
        &mesh, &gens, &tess0, &mesh, &gens, &tess0, &[], &domain, dt,
    )
    .unwrap();
    for (cell, cv) in st.cells.iter().enumerate() {
        let measure = st_volume(&cv.subtets, dt, 2);
        let expect = tess0.cells[cell].volume * dt;
        assert!(
            (measure - expect).abs() <= 1e-12 * expect,
            "cell {cell}: {measure} vs {expect}"
        );
    }
}

#[test]
fn moving_lattice_fills_slab_and_closes() {
    // Interior lattice generators displaced by a smooth field; no flips.
    let domain = DomainBox {
        lo: V3::new(0.0, 0.0, 0.0),
        hi: V3::new(1.0, 1.0, 1.0),
    };
    let (gens0, mesh) = builders::lattice_box(&domain, [4, 4, 4]);
    let mut gens1 = gens0.clone();
    for (i, p) in gens1.positions.iter_mut().enumerate() {
        if gens0.walls[i] == 0 {
            let s = 0.04;
            *p += V3::new(
                s * (3.1 * p[1]).sin(),
                s * (2.7 * p[2]).cos() * p[0],
                s * (4.1 * p[0] * p[1]).sin(),
            );
        }
    }
    let tess0 = build_dual(&mesh, &gens0, &domain).unwrap();
    let tess1 = build_dual(&mesh, &gens1, &domain).unwrap();
    let dt = 0.02;
    let st = build_spacetime(
        &mesh, &gens0, &tess0, &mesh, &gens1, &tess1, &[], &domain, dt,
    )
    .unwrap();
    let total = st.total_cell_measure(3);
    let expect = domain.volume() * dt;
    assert!(
        (total - expect).abs() <= 1e-12 * expect,
        "slab measure {total} vs {expect}"
    );
    let rule = reference_quadrature(RuleKind::Prism, 3).unwrap();
    for i in 0..st.cells.len() {
        let d = st.closure_defect(ElementRef::Cell(i), &rule);
        let scale = st.boundary_scale(ElementRef::Cell(i), &rule);
        for c in d {
            assert!(c.abs() <= 1e-12 * scale, "cell {i}: defect {d:?}");
        }
    }
}

#[test]
fn lattice_with_optimizer_flips_closes() {
    // Shear the interior of a lattice until the optimizer fires real flips,
    // then verify the slab is still exactly tiled.
    let domain = DomainBox {
        lo: V3::new(-1.0, -1.0, -1.0),
        hi: V3::new(1.0, 1.0, 1.0),
    };
    let (gens0, mesh0) = builders::lattice_box(&domain, [5, 5, 5]);
    let mut gens1 = gens0.clone();
    let angle = 0.5f64;
    for (i, p) in gens1.positions.iter_mut().enumerate() {
        if gens0.walls[i] == 0 && p.norm() < 0.75 {
            let (x, y) = (p[0], p[1]);
            p[0] = x * angle.cos() - y * angle.sin();
            p[1] = x * angle.sin() + y * angle.cos();
        }
    }
    let tess0 = build_dual(&mesh0, &gens0, &domain).unwrap();
    let mut mesh1 = mesh0.clone();
    let out = optimize_step(
        &mut mesh1,
        &gens1.positions,
        Vec::new(),
        None,
        &OptimizerConfig::default(),
    )
    .unwrap();
    assert!(
        !out.events.is_empty(),
        "expected the shear to trigger at least one flip"
    );
    let tess1 = build_dual(&mesh1, &gens1, &domain).unwrap();
    let dt = 0.01;
    let st = build_spacetime(
        &mesh0, &gens0, &tess0, &mesh1, &gens1, &tess1, &out.events, &domain, dt,
    )
    .unwrap();
    let total = st.total_cell_measure(3) + st.total_hole_measure(3);
    let expect = domain.volume() * dt;
    assert!(
        (total - expect).abs() <= 1e-12 * expect,
        "slab measure {total} vs {expect} with {} events",
        out.events.len()
    );
    let rule = reference_quadrature(RuleKind::Prism, 3).unwrap();
    for i in 0..st.cells.len() {
        let d = st.closure_defect(ElementRef::Cell(i), &rule);
        let scale = st.boundary_scale(ElementRef::Cell(i), &rule);
        for c in d {
            assert!(c.abs() <= 2e-12 * scale, "cell {i}: defect {d:?}");
        }
    }
    for h in 0..st.holes.len() {
        let d = st.closure_defect(ElementRef::Hole(h), &rule);
        let scale = st.boundary_scale(ElementRef::Hole(h), &rule);
        for c in d {
            assert!(c.abs() <= 2e-12 * scale, "hole {h}: defect {d:?}");
        }
    }
}

#[test]
fn st_volume_matches_dense_time_sampling() {
    // Random affinely deforming tet track against a dense trapezoid
    // time-sampling oracle. The oracle's own error is O(1/m^2), so the
    // slice count must be high enough to resolve the 1e-10 comparison.
    use aledg::spacetime::SubTetTrack;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let mut start = [V3::zeros(); 4];
        let mut end = [V3::zeros(); 4];
        for k in 0..4 {
            start[k] = V3::new(rng.gen(), rng.gen(), rng.gen());
            end[k] = start[k] + V3::new(rng.gen(), rng.gen(), rng.gen()) * 0.3;
        }
        let track = SubTetTrack { start, end };
        let dt = 0.13;
        let fast = st_volume(&[track], dt, 1);
        let m = 100_000usize;
        let mut slow = 0.0;
        for k in 0..=m {
            let tau = k as f64 / m as f64;
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            slow += w * track.volume_at(tau) / m as f64;
        }
        slow *= dt;
        assert!(
            (fast - slow).abs() <= 1e-10 * slow.abs().max(1e-10),
            "{fast} vs {slow}"
        );
    }
}

#[test]
fn hole_debug_dump_lists_surfaces() {
    let (_, _, st, _) = build_sanity_layer(SanityKind::Flip32, 0.1);
    let dump = aledg::spacetime::volumes::debug_dump_holes(&st, 1);
    assert!(dump.contains("hole 0 kind 3-2"));
    assert_eq!(dump.matches("surface ->").count(), 5);
    assert_eq!(dump.matches("track").count(), 6);
}
