//! Addressing on the periodic honeycomb.
//!
//! The honeycomb is not a Bravais lattice, so every vertex is written as a
//! cell `(n1, n2)` of the underlying triangular lattice plus a sublattice bit
//! `s` (0 = lattice site, 1 = basis site). A walker additionally carries a
//! coin direction `j ∈ {0, 1, 2}`. Flat indices put `j` outermost, then `s`,
//! then `n1`, then `n2`:
//!
//! ```text
//! index = j·2m² + s·m² + n1·m + n2
//! ```
//!
//! With this layout the coin acts on three strided blocks and the shift is a
//! gather within each `j` block.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of coin directions (the honeycomb has degree 3).
pub const COIN_DIM: usize = 3;

/// Cell displacement `(α_j, β_j)` for each coin direction.
pub const DIRECTIONS: [(usize, usize); COIN_DIM] = [(0, 0), (1, 0), (0, 1)];

/// Size of a periodic honeycomb: `m × m` cells, `N = 2m²` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeConfig {
    m: usize,
}

impl LatticeConfig {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::LatticeTooSmall(m));
        }
        Ok(Self { m })
    }

    /// Cells per direction.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of unit cells, `m²`.
    pub fn cells(&self) -> usize {
        self.m * self.m
    }

    /// Number of vertices, `N = 2m²`.
    pub fn sites(&self) -> usize {
        2 * self.cells()
    }

    /// Dimension of the walk space, `3N = 6m²`.
    pub fn dim(&self) -> usize {
        COIN_DIM * self.sites()
    }

    pub fn ln_sites(&self) -> f64 {
        (self.sites() as f64).ln()
    }

    /// All addresses in flat-index order.
    pub fn addresses(&self) -> impl Iterator<Item = VertexAddress> + '_ {
        (0..self.dim()).map(move |i| self.unflatten_unchecked(i))
    }

    /// All reciprocal-lattice points, `k1` outermost.
    pub fn kpoints(&self) -> impl Iterator<Item = KPoint> + '_ {
        let m = self.m;
        (0..m).flat_map(move |k1| (0..m).map(move |k2| KPoint { k1, k2, m }))
    }

    fn unflatten_unchecked(&self, idx: usize) -> VertexAddress {
        let m = self.m;
        let cells = m * m;
        VertexAddress {
            coin: idx / (2 * cells),
            sublattice: (idx / cells) % 2,
            n1: (idx / m) % m,
            n2: idx % m,
        }
    }
}

/// A walker basis state `|j; s; n1, n2⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexAddress {
    pub coin: usize,
    pub sublattice: usize,
    pub n1: usize,
    pub n2: usize,
}

impl VertexAddress {
    pub fn new(coin: usize, sublattice: usize, n1: usize, n2: usize) -> Self {
        Self {
            coin,
            sublattice,
            n1,
            n2,
        }
    }

    fn validate(&self, cfg: LatticeConfig) -> Result<()> {
        let m = cfg.m();
        for (field, value, bound) in [
            ("j", self.coin, COIN_DIM),
            ("s", self.sublattice, 2),
            ("n1", self.n1, m),
            ("n2", self.n2, m),
        ] {
            if value >= bound {
                return Err(Error::AddressOutOfRange {
                    field,
                    value,
                    bound,
                });
            }
        }
        Ok(())
    }
}

pub fn flat_index(addr: VertexAddress, cfg: LatticeConfig) -> Result<usize> {
    addr.validate(cfg)?;
    let m = cfg.m();
    Ok(addr.coin * 2 * m * m + addr.sublattice * m * m + addr.n1 * m + addr.n2)
}

pub fn unflatten(idx: usize, cfg: LatticeConfig) -> Result<VertexAddress> {
    if idx >= cfg.dim() {
        return Err(Error::IndexOutOfRange {
            index: idx,
            len: cfg.dim(),
        });
    }
    Ok(cfg.unflatten_unchecked(idx))
}

/// Where one step of the shift sends a basis state.
///
/// The sublattice bit flips and the cell moves by `−(−1)^s·v_j`, so a lattice
/// site steps back along `v_j` and a basis site steps forward. Applying the
/// map twice returns the original address.
pub fn shift_target(addr: VertexAddress, cfg: LatticeConfig) -> Result<VertexAddress> {
    addr.validate(cfg)?;
    Ok(shift_target_unchecked(addr, cfg.m()))
}

pub(crate) fn shift_target_unchecked(addr: VertexAddress, m: usize) -> VertexAddress {
    let (alpha, beta) = DIRECTIONS[addr.coin];
    let (n1, n2) = if addr.sublattice == 0 {
        ((addr.n1 + m - alpha) % m, (addr.n2 + m - beta) % m)
    } else {
        ((addr.n1 + alpha) % m, (addr.n2 + beta) % m)
    };
    VertexAddress {
        coin: addr.coin,
        sublattice: addr.sublattice ^ 1,
        n1,
        n2,
    }
}

/// Euclidean position of a vertex for plotting, with unit nearest-neighbour
/// distance: `r = n1·a1 + n2·a2 (+ b for basis sites)`, `|a1| = |a2| = √3`,
/// 60° apart, `b = (a1 + a2)/3`. Not used by the dynamics.
pub fn real_space_position(sublattice: usize, n1: usize, n2: usize) -> [f64; 2] {
    let s3 = 3f64.sqrt();
    let a1 = [s3, 0.0];
    let a2 = [s3 / 2.0, 1.5];
    let (n1, n2) = (n1 as f64, n2 as f64);
    let mut r = [n1 * a1[0] + n2 * a2[0], n1 * a1[1] + n2 * a2[1]];
    if sublattice == 1 {
        r[0] += (a1[0] + a2[0]) / 3.0;
        r[1] += (a1[1] + a2[1]) / 3.0;
    }
    r
}

/// A reciprocal-lattice point `k = k1·g1 + k2·g2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KPoint {
    k1: usize,
    k2: usize,
    m: usize,
}

impl KPoint {
    pub fn new(k1: usize, k2: usize, cfg: LatticeConfig) -> Result<Self> {
        let m = cfg.m();
        if k1 >= m {
            return Err(Error::AddressOutOfRange {
                field: "k1",
                value: k1,
                bound: m,
            });
        }
        if k2 >= m {
            return Err(Error::AddressOutOfRange {
                field: "k2",
                value: k2,
                bound: m,
            });
        }
        Ok(Self { k1, k2, m })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_origin(&self) -> bool {
        self.k1 == 0 && self.k2 == 0
    }

    /// `k̃1 = 2π k1 / m ∈ [0, 2π)`.
    pub fn ktilde1(&self) -> f64 {
        2.0 * PI * self.k1 as f64 / self.m as f64
    }

    pub fn ktilde2(&self) -> f64 {
        2.0 * PI * self.k2 as f64 / self.m as f64
    }

    /// `ω^p` with `ω = exp(2πi/m)`, evaluated from the reduced angle so that
    /// `ω^m = 1` holds exactly.
    pub fn omega_pow(&self, p: i64) -> Complex64 {
        let m = self.m as i64;
        let r = p.rem_euclid(m);
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize) -> LatticeConfig {
        LatticeConfig::new(m).unwrap()
    }

    #[test]
    fn rejects_degenerate_torus() {
        assert_eq!(LatticeConfig::new(1), Err(Error::LatticeTooSmall(1)));
        assert_eq!(LatticeConfig::new(0), Err(Error::LatticeTooSmall(0)));
        let c = cfg(3);
        assert_eq!(c.sites(), 18);
        assert_eq!(c.dim(), 54);
    }

    #[test]
    fn flat_index_corners() {
        let c = cfg(2);
        assert_eq!(flat_index(VertexAddress::new(0, 0, 0, 0), c).unwrap(), 0);
        let last = flat_index(VertexAddress::new(2, 1, 1, 1), c).unwrap();
        assert_eq!(last, 23);
        assert_eq!(last, 3 * c.sites() - 1);
    }

    #[test]
    fn flat_index_rejects_out_of_range() {
        let c = cfg(3);
        for addr in [
            VertexAddress::new(3, 0, 0, 0),
            VertexAddress::new(0, 2, 0, 0),
            VertexAddress::new(0, 0, 3, 0),
            VertexAddress::new(0, 0, 0, 7),
        ] {
            assert!(matches!(
                flat_index(addr, c),
                Err(Error::AddressOutOfRange { .. })
            ));
        }
        assert!(shift_target(VertexAddress::new(0, 0, 5, 0), c).is_err());
    }

    #[test]
    fn flat_index_is_a_permutation() {
        // enumerate addresses independently of unflatten
        let c = cfg(3);
        let mut seen = vec![false; c.dim()];
        for j in 0..3 {
            for s in 0..2 {
                for n1 in 0..3 {
                    for n2 in 0..3 {
                        let i = flat_index(VertexAddress::new(j, s, n1, n2), c).unwrap();
                        assert!(!seen[i], "index {i} hit twice");
                        seen[i] = true;
                    }
                }
            }
        }
        assert!(seen.iter().all(|&x| x));
        assert_eq!(seen.len(), 54);
    }

    #[test]
    fn unflatten_examples() {
        let c = cfg(2);
        assert_eq!(unflatten(0, c).unwrap(), VertexAddress::new(0, 0, 0, 0));
        assert_eq!(unflatten(23, c).unwrap(), VertexAddress::new(2, 1, 1, 1));
        assert_eq!(
            unflatten(24, c),
            Err(Error::IndexOutOfRange { index: 24, len: 24 })
        );
    }

    #[test]
    fn unflatten_round_trip_m4() {
        let c = cfg(4);
        for i in 0..c.dim() {
            assert_eq!(flat_index(unflatten(i, c).unwrap(), c).unwrap(), i);
        }
    }

    #[test]
    fn shift_examples() {
        let c = cfg(3);
        let a = shift_target(VertexAddress::new(0, 0, 1, 2), c).unwrap();
        assert_eq!(a, VertexAddress::new(0, 1, 1, 2));
        let b = shift_target(VertexAddress::new(1, 0, 0, 0), c).unwrap();
        assert_eq!(b, VertexAddress::new(1, 1, 2, 0));
        let d = shift_target(VertexAddress::new(2, 1, 2, 2), c).unwrap();
        assert_eq!(d, VertexAddress::new(2, 0, 2, 0));
    }

    #[test]
    fn shift_is_an_involution_flipping_sublattice() {
        for m in [2, 3, 5] {
            let c = cfg(m);
            for a in c.addresses() {
                let b = shift_target(a, c).unwrap();
                assert_ne!(a.sublattice, b.sublattice);
                assert_eq!(a.coin, b.coin);
                assert_eq!(shift_target(b, c).unwrap(), a);
            }
        }
    }

    #[test]
    fn kpoint_angles_and_omega() {
        let c = cfg(6);
        let k = KPoint::new(3, 5, c).unwrap();
        assert!((k.ktilde1() - PI).abs() < 1e-15);
        assert!(k.ktilde2() < 2.0 * PI);
        assert!((k.omega_pow(6) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((k.omega_pow(-1) - k.omega_pow(5)).norm() < 1e-15);
        assert!(KPoint::new(6, 0, c).is_err());
        assert_eq!(c.kpoints().count(), 36);
    }

    #[test]
    fn real_space_neighbours_are_unit_distance() {
        let c = cfg(5);
        for a in c
            .addresses()
            .filter(|a| a.sublattice == 0 && a.n1 > 0 && a.n2 > 0)
        {
            let b = shift_target(a, c).unwrap();
            let p = real_space_position(a.sublattice, a.n1, a.n2);
            let q = real_space_position(b.sublattice, b.n1, b.n2);
            let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
            assert!((d - 1.0).abs() < 1e-12, "{a:?} -> {b:?}: {d}");
        }
    }
}
