//! Plain-text mesh format:
//!
//! ```text
//! NP NT
//! x y z wall_flag      (NP lines; wall_flag = bitmask over the 6 box walls)
//! a b c d              (NT lines; 0-based generator indices)
//! ```
//!
//! The domain box is recovered from the coordinate extremes of the flagged
//! generators (all shipped meshes place generators on every wall).
//! Deterministic ordering of lines keeps index maps reproducible.

use super::{DomainBox, GeneratorSet, Tetrahedralization};
use crate::geometry::V3;
use crate::{Error, Result};

pub fn write_mesh(gens: &GeneratorSet, mesh: &Tetrahedralization) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", gens.len(), mesh.n_alive()));
    for (p, w) in gens.positions.iter().zip(&gens.walls) {
        out.push_str(&format!("{:.17e} {:.17e} {:.17e} {}\n", p[0], p[1], p[2], w));
    }
    for t in mesh.alive_tets() {
        let v = mesh.vertices(t);
        out.push_str(&format!("{} {} {} {}\n", v[0], v[1], v[2], v[3]));
    }
    out
}

pub fn read_mesh(text: &str) -> Result<(GeneratorSet, Tetrahedralization, DomainBox)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MeshIo("empty mesh file".into()))?;
    let mut it = header.split_whitespace();
    let np: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MeshIo("bad header".into()))?;
    let nt: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::MeshIo("bad header".into()))?;
    let mut positions = Vec::with_capacity(np);
    let mut walls = Vec::with_capacity(np);
    for k in 0..np {
        let line = lines
            .next()
            .ok_or_else(|| Error::MeshIo(format!("missing generator line {k}")))?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(Error::MeshIo(format!("generator line {k}: expected 4 fields")));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::MeshIo(format!("bad number '{s}' on line {k}")))
        };
        positions.push(V3::new(parse(f[0])?, parse(f[1])?, parse(f[2])?));
        walls.push(
            f[3].parse::<u8>()
                .map_err(|_| Error::MeshIo(format!("bad wall flag on line {k}")))?,
        );
    }
    let mut tets = Vec::with_capacity(nt);
    for k in 0..nt {
        let line = lines
            .next()
            .ok_or_else(|| Error::MeshIo(format!("missing tet line {k}")))?;
        let v: Vec<usize> = line
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::MeshIo(format!("bad index on tet line {k}")))
            })
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::MeshIo(format!("tet line {k}: expected 4 indices")));
        }
        tets.push([v[0], v[1], v[2], v[3]]);
    }
    // Domain from extremes; generators flagged on a wall pin its coordinate.
    let mut lo = V3::from_element(f64::INFINITY);
    let mut hi = V3::from_element(f64::NEG_INFINITY);
    for p in &positions {
        for d in 0..3 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let domain = DomainBox { lo, hi };
    let gens = GeneratorSet { positions, walls };
    let mesh = Tetrahedralization::new(tets, &gens.positions)?;
    Ok((gens, mesh, domain))
}

#[cfg(test)]
mod tests {
    use super::super::builders;
    use super::*;

    #[test]
    fn round_trip_sanity_mesh() {
        let (gens, mesh, domain) = builders::sanity_cube(builders::SanityKind::Flip32);
        let text = write_mesh(&gens, &mesh);
        let (g2, m2, d2) = read_mesh(&text).unwrap();
        assert_eq!(g2.len(), gens.len());
        assert_eq!(m2.n_alive(), mesh.n_alive());
        assert_eq!(g2.walls, gens.walls);
        assert!((d2.volume() - domain.volume()).abs() < 1e-12);
        assert!((m2.total_volume(&g2.positions) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_mesh("").is_err());
        assert!(read_mesh("2 1\n0 0 0 0\n").is_err());
        assert!(read_mesh("1 0\n0 0 zzz 0\n").is_err());
    }
}
