//! Walk state and the search operators.
//!
//! The unperturbed step is `U = S·(G₃ ⊗ I)`: a Grover coin on the three
//! direction amplitudes of every vertex followed by the flip-flop shift. The
//! search step is `U' = U·R_t` where `R_t = I − 2|t⟩⟨t|` reflects about the
//! uniform internal state of the marked cell,
//! `|t⟩ = (1/√6) Σ_{j,s} |j; s; n1, n2⟩`.
//!
//! The ancilla-extended step doubles the state: amplitudes with the ancilla
//! in `|0⟩` come first, then those with the ancilla in `|1⟩`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, LatticeConfig, VertexAddress, COIN_DIM};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes over `|j; s; n1, n2⟩`, optionally tensored with an ancilla
/// qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    amplitudes: Vec<Complex64>,
    cfg: LatticeConfig,
    tulsi: bool,
}

impl WalkState {
    pub fn from_amplitudes(
        cfg: LatticeConfig,
        amplitudes: Vec<Complex64>,
        tulsi: bool,
    ) -> Result<Self> {
        let expected = if tulsi { 2 * cfg.dim() } else { cfg.dim() };
        if amplitudes.len() != expected {
            return Err(Error::IndexOutOfRange {
                index: amplitudes.len(),
                len: expected,
            });
        }
        Ok(Self {
            amplitudes,
            cfg,
            tulsi,
        })
    }

    /// `|idx⟩` in the plain walk space.
    pub fn basis(cfg: LatticeConfig, idx: usize) -> Result<Self> {
        Self::basis_in(cfg, idx, false)
    }

    /// Basis vector in either space; for ancilla-extended states `idx` runs
    /// over `[0, 12m²)` with the ancilla bit outermost.
    pub fn basis_in(cfg: LatticeConfig, idx: usize, tulsi: bool) -> Result<Self> {
        let len = if tulsi { 2 * cfg.dim() } else { cfg.dim() };
        if idx >= len {
            return Err(Error::IndexOutOfRange { index: idx, len });
        }
        let mut amplitudes = vec![ZERO; len];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            cfg,
            tulsi,
        })
    }

    pub fn cfg(&self) -> LatticeConfig {
        self.cfg
    }

    pub fn is_tulsi(&self) -> bool {
        self.tulsi
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Walk-register slices, one per ancilla branch (a single slice in
    /// plain mode).
    pub fn registers(&self) -> impl Iterator<Item = &[Complex64]> {
        self.amplitudes.chunks(self.cfg.dim())
    }

    fn require_plain(&self) -> Result<()> {
        if self.tulsi {
            Err(Error::ModeMismatch { expected: "plain" })
        } else {
            Ok(())
        }
    }

    fn require_tulsi(&self) -> Result<()> {
        if self.tulsi {
            Ok(())
        } else {
            Err(Error::ModeMismatch {
                expected: "ancilla-extended",
            })
        }
    }
}

/// The marked cell and the six walk amplitudes `|t⟩` is supported on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchTarget {
    m: usize,
    n1: usize,
    n2: usize,
    support: [usize; 6],
}

// 1/√6
const TARGET_WEIGHT: f64 = 0.408_248_290_463_863;

impl SearchTarget {
    pub fn new(cfg: LatticeConfig, n1: usize, n2: usize) -> Result<Self> {
        let mut support = [0; 6];
        for j in 0..COIN_DIM {
            for s in 0..2 {
                support[2 * j + s] = lattice::flat_index(VertexAddress::new(j, s, n1, n2), cfg)?;
            }
        }
        Ok(Self {
            m: cfg.m(),
            n1,
            n2,
            support,
        })
    }

    pub fn cell(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn support(&self) -> &[usize; 6] {
        &self.support
    }

    /// Weight of every support entry in `|t⟩`.
    pub fn weight() -> f64 {
        TARGET_WEIGHT
    }

    /// `⟨t|ψ⟩` for one walk register, summed in support order.
    pub fn inner(&self, register: &[Complex64]) -> Complex64 {
        self.support.iter().fold(ZERO, |acc, &i| acc + register[i]) * TARGET_WEIGHT
    }

    /// `|t⟩` as a dense plain-mode vector.
    pub fn vector(&self, cfg: LatticeConfig) -> Vec<Complex64> {
        let mut v = vec![ZERO; cfg.dim()];
        for &i in &self.support {
            v[i] = Complex64::new(TARGET_WEIGHT, 0.0);
        }
        v
    }
}

/// Which ancilla value switches the oracle on in the extended step.
///
/// The walk is always controlled on `|1⟩`. With `One` both gates share the
/// same control; with `Zero` the oracle fires on the opposite branch, which
/// is the arrangement that concentrates the success probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OracleControl {
    Zero,
    One,
}

impl OracleControl {
    fn branch(self) -> usize {
        match self {
            OracleControl::Zero => 0,
            OracleControl::One => 1,
        }
    }
}

/// Base of the logarithm in the default `δ = 1/√(log N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LogBase {
    Natural,
    Base2,
    Base10,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Base2 => x.log2(),
            LogBase::Base10 => x.log10(),
        }
    }
}

/// Parameters of the ancilla-extended step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TulsiParams {
    delta: f64,
    oracle_control: OracleControl,
}

impl TulsiParams {
    pub fn new(delta: f64, oracle_control: OracleControl) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&delta) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        Ok(Self {
            delta,
            oracle_control,
        })
    }

    /// `δ = 1/√(log N)` with the oracle controlled on `|0⟩`.
    pub fn for_lattice(cfg: LatticeConfig, base: LogBase) -> Self {
        let delta = 1.0 / base.log(cfg.sites() as f64).sqrt();
        Self {
            delta,
            oracle_control: OracleControl::Zero,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn oracle_control(&self) -> OracleControl {
        self.oracle_control
    }
}

/// The walk operators for one lattice size.
///
/// Holds the shift as a partner table: the shift is an involution without
/// fixed points, so it is applied by swapping each index with its partner.
#[derive(Clone, Debug)]
pub struct Walk {
    cfg: LatticeConfig,
    partner: Vec<usize>,
}

impl Walk {
    pub fn new(cfg: LatticeConfig) -> Self {
        let m = cfg.m();
        let partner = cfg
            .addresses()
            .map(|a| {
                let b = lattice::shift_target_unchecked(a, m);
                b.coin * 2 * m * m + b.sublattice * m * m + b.n1 * m + b.n2
            })
            .collect();
        Self { cfg, partner }
    }

    pub fn cfg(&self) -> LatticeConfig {
        self.cfg
    }

    /// `|Φ₀⟩`: every amplitude equal to `1/√(3N)`.
    pub fn uniform_state(&self) -> WalkState {
        let dim = self.cfg.dim();
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        WalkState {
            amplitudes: vec![a; dim],
            cfg: self.cfg,
            tulsi: false,
        }
    }

    /// `|1⟩ ⊗ |Φ₀⟩`.
    pub fn tulsi_initial_state(&self) -> WalkState {
        let dim = self.cfg.dim();
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let mut amplitudes = vec![ZERO; 2 * dim];
        amplitudes[dim..].fill(a);
        WalkState {
            amplitudes,
            cfg: self.cfg,
            tulsi: true,
        }
    }

    fn check(&self, state: &WalkState) -> Result<()> {
        if state.cfg != self.cfg {
            return Err(Error::LatticeMismatch {
                expected: self.cfg.m(),
                found: state.cfg.m(),
            });
        }
        Ok(())
    }

    fn check_target(&self, target: &SearchTarget) -> Result<()> {
        if target.m != self.cfg.m() {
            return Err(Error::LatticeMismatch {
                expected: self.cfg.m(),
                found: target.m,
            });
        }
        Ok(())
    }

    /// `G₃ ⊗ I`.
    pub fn apply_coin(&self, state: &mut WalkState) -> Result<()> {
        self.check(state)?;
        state.require_plain()?;
        coin(&mut state.amplitudes, self.cfg.sites());
        Ok(())
    }

    /// `S`.
    pub fn apply_shift(&self, state: &mut WalkState) -> Result<()> {
        self.check(state)?;
        state.require_plain()?;
        self.shift(&mut state.amplitudes);
        Ok(())
    }

    /// `U = S·(G₃ ⊗ I)`.
    pub fn step_unperturbed(&self, state: &mut WalkState) -> Result<()> {
        self.check(state)?;
        state.require_plain()?;
        self.walk_register(&mut state.amplitudes);
        Ok(())
    }

    /// `R_t = I − 2|t⟩⟨t|`.
    pub fn apply_oracle(&self, state: &mut WalkState, target: &SearchTarget) -> Result<()> {
        self.check(state)?;
        self.check_target(target)?;
        state.require_plain()?;
        reflect(&mut state.amplitudes, target);
        Ok(())
    }

    /// `U' = U·R_t`.
    pub fn step_search(&self, state: &mut WalkState, target: &SearchTarget) -> Result<()> {
        self.check(state)?;
        self.check_target(target)?;
        state.require_plain()?;
        reflect(&mut state.amplitudes, target);
        self.walk_register(&mut state.amplitudes);
        Ok(())
    }

    /// One step of the ancilla-extended search, in circuit order: `X_δ` on
    /// the ancilla, controlled `R_t`, `X_δ†`, `U` controlled on `|1⟩`, then
    /// `−Z` on the ancilla.
    pub fn step_tulsi(
        &self,
        state: &mut WalkState,
        target: &SearchTarget,
        params: &TulsiParams,
    ) -> Result<()> {
        self.check(state)?;
        self.check_target(target)?;
        state.require_tulsi()?;
        let (c, s) = (params.delta.cos(), params.delta.sin());
        let dim = self.cfg.dim();
        let (b0, b1) = state.amplitudes.split_at_mut(dim);

        rotate_ancilla(b0, b1, c, s);
        match params.oracle_control.branch() {
            0 => reflect(b0, target),
            _ => reflect(b1, target),
        }
        rotate_ancilla(b0, b1, c, -s);
        self.walk_register(b1);
        for a in b0.iter_mut() {
            *a = -*a;
        }
        Ok(())
    }

    fn walk_register(&self, register: &mut [Complex64]) {
        coin(register, self.cfg.sites());
        self.shift(register);
    }

    fn shift(&self, register: &mut [Complex64]) {
        for (i, &p) in self.partner.iter().enumerate() {
            if i < p {
                register.swap(i, p);
            }
        }
    }
}

// G₃ = 2|u_c⟩⟨u_c| − I on each direction triple; `block` = 2m² positions.
fn coin(register: &mut [Complex64], block: usize) {
    let (r0, rest) = register.split_at_mut(block);
    let (r1, r2) = rest.split_at_mut(block);
    for ((a, b), c) in r0.iter_mut().zip(r1.iter_mut()).zip(r2.iter_mut()) {
        let mean = (*a + *b + *c) * (2.0 / 3.0);
        *a = mean - *a;
        *b = mean - *b;
        *c = mean - *c;
    }
}

fn reflect(register: &mut [Complex64], target: &SearchTarget) {
    let shift = target.inner(register) * (2.0 * TARGET_WEIGHT);
    for &i in &target.support {
        register[i] -= shift;
    }
}

// Ancilla rotation [[c, s], [−s, c]]; pass −s for the adjoint.
fn rotate_ancilla(b0: &mut [Complex64], b1: &mut [Complex64], c: f64, s: f64) {
    for (x0, x1) in b0.iter_mut().zip(b1.iter_mut()) {
        let (a0, a1) = (*x0, *x1);
        *x0 = a0 * c + a1 * s;
        *x1 = a1 * c - a0 * s;
    }
}

/// Probability of finding the walker anywhere in the marked cell: the sum of
/// `|ψ_i|²` over the six support indices, over both ancilla branches.
pub fn marked_probability(state: &WalkState, target: &SearchTarget) -> f64 {
    state
        .registers()
        .map(|r| target.support.iter().map(|&i| r[i].norm_sqr()).sum::<f64>())
        .sum()
}

/// Probability of finding the walker on the lattice site (`s = 0`) of the
/// marked cell alone: three of the six support amplitudes.
pub fn vertex_probability(state: &WalkState, target: &SearchTarget) -> f64 {
    state
        .registers()
        .map(|r| {
            target
                .support
                .iter()
                .step_by(2)
                .map(|&i| r[i].norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// `|⟨t|ψ⟩|²`, summed over ancilla branches.
pub fn overlap_sq(state: &WalkState, target: &SearchTarget) -> f64 {
    state.registers().map(|r| target.inner(r).norm_sqr()).sum()
}

/// Outcome of a simulated computational-basis measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub ancilla: Option<usize>,
    pub address: VertexAddress,
}

/// Draw one measurement outcome from `|ψ|²`. Demonstration only; the
/// simulator itself is deterministic.
pub fn sample_measurement<R: Rng + ?Sized>(state: &WalkState, rng: &mut R) -> Measurement {
    let weights: Vec<f64> = state.amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let dist = WeightedIndex::new(&weights).expect("state has non-zero norm");
    let idx = dist.sample(rng);
    let dim = state.cfg.dim();
    let address = lattice::unflatten(idx % dim, state.cfg).expect("index within range");
    Measurement {
        ancilla: state.tulsi.then_some(idx / dim),
        address,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(m: usize) -> (Walk, SearchTarget) {
        let cfg = LatticeConfig::new(m).unwrap();
        (Walk::new(cfg), SearchTarget::new(cfg, 0, 0).unwrap())
    }

    fn random_state(walk: &Walk, seed: u64, real: bool) -> WalkState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = walk.cfg().dim();
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re = rng.gen::<f64>() - 0.5;
                let im = if real { 0.0 } else { rng.gen::<f64>() - 0.5 };
                Complex64::new(re, im)
            })
            .collect();
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= n);
        WalkState::from_amplitudes(walk.cfg(), v, false).unwrap()
    }

    fn max_diff(a: &WalkState, b: &WalkState) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn uniform_state_amplitudes() {
        let (walk, _) = setup(2);
        let psi = walk.uniform_state();
        assert_eq!(psi.amplitudes().len(), 24);
        for a in psi.amplitudes() {
            assert!((a.re - 1.0 / 24f64.sqrt()).abs() < 1e-15);
            assert_eq!(a.im, 0.0);
        }
        for m in [2, 5, 16] {
            let (walk, _) = setup(m);
            assert!((walk.uniform_state().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vertex_probability_is_half_the_cell_when_uniform() {
        let (walk, target) = setup(4);
        let psi = walk.uniform_state();
        let cell = marked_probability(&psi, &target);
        assert!((vertex_probability(&psi, &target) - cell / 2.0).abs() < 1e-16);
    }

    #[test]
    fn coin_column_and_fixed_vector() {
        let (walk, _) = setup(3);
        let cfg = walk.cfg();
        let site = |j| lattice::flat_index(VertexAddress::new(j, 1, 2, 0), cfg).unwrap();
        let mut psi = WalkState::basis(cfg, site(0)).unwrap();
        walk.apply_coin(&mut psi).unwrap();
        let expect = [-1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (j, e) in expect.into_iter().enumerate() {
            assert!((psi.amplitudes()[site(j)].re - e).abs() < 1e-15);
        }
        assert!((psi.norm() - 1.0).abs() < 1e-14);

        let mut amps = vec![ZERO; cfg.dim()];
        for j in 0..3 {
            amps[site(j)] = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        }
        let before = WalkState::from_amplitudes(cfg, amps, false).unwrap();
        let mut after = before.clone();
        walk.apply_coin(&mut after).unwrap();
        assert!(max_diff(&before, &after) < 1e-15);
    }

    #[test]
    fn coin_fixes_uniform_state() {
        let (walk, _) = setup(4);
        let mut psi = walk.uniform_state();
        walk.apply_coin(&mut psi).unwrap();
        assert!(max_diff(&psi, &walk.uniform_state()) < 1e-15);
    }

    #[test]
    fn involutions_on_random_state() {
        let (walk, target) = setup(5);
        let psi = random_state(&walk, 11, false);
        let mut x = psi.clone();
        walk.apply_coin(&mut x).unwrap();
        walk.apply_coin(&mut x).unwrap();
        assert!(max_diff(&x, &psi) < 1e-14);
        walk.apply_shift(&mut x).unwrap();
        walk.apply_shift(&mut x).unwrap();
        assert!(max_diff(&x, &psi) < 1e-14);
        walk.apply_oracle(&mut x, &target).unwrap();
        walk.apply_oracle(&mut x, &target).unwrap();
        assert!(max_diff(&x, &psi) < 1e-14);
    }

    #[test]
    fn shift_moves_single_basis_vector() {
        let (walk, _) = setup(3);
        let cfg = walk.cfg();
        let from = lattice::flat_index(VertexAddress::new(1, 0, 0, 0), cfg).unwrap();
        let to = lattice::flat_index(VertexAddress::new(1, 1, 2, 0), cfg).unwrap();
        let mut psi = WalkState::basis(cfg, from).unwrap();
        walk.apply_shift(&mut psi).unwrap();
        assert_eq!(psi, WalkState::basis(cfg, to).unwrap());

        let mut u = walk.uniform_state();
        walk.apply_shift(&mut u).unwrap();
        assert_eq!(u, walk.uniform_state());
    }

    #[test]
    fn unperturbed_step_fixed_point_and_reality() {
        let (walk, _) = setup(6);
        let mut u = walk.uniform_state();
        walk.step_unperturbed(&mut u).unwrap();
        assert!(max_diff(&u, &walk.uniform_state()) < 1e-12);

        let mut r = random_state(&walk, 3, true);
        for _ in 0..5 {
            walk.step_unperturbed(&mut r).unwrap();
        }
        assert!(r.amplitudes().iter().all(|a| a.im.abs() < 1e-14));
    }

    #[test]
    fn oracle_negates_target_and_ignores_orthogonal() {
        let (walk, target) = setup(4);
        let cfg = walk.cfg();
        let t = WalkState::from_amplitudes(cfg, target.vector(cfg), false).unwrap();
        let mut x = t.clone();
        walk.apply_oracle(&mut x, &target).unwrap();
        for (a, b) in x.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a + b).norm() < 1e-15);
        }
        let outside = lattice::flat_index(VertexAddress::new(2, 1, 3, 1), cfg).unwrap();
        let mut y = WalkState::basis(cfg, outside).unwrap();
        walk.apply_oracle(&mut y, &target).unwrap();
        assert_eq!(y, WalkState::basis(cfg, outside).unwrap());
    }

    #[test]
    fn search_step_matches_composition() {
        let (walk, target) = setup(4);
        let psi = random_state(&walk, 5, false);
        let mut a = psi.clone();
        walk.step_search(&mut a, &target).unwrap();
        let mut b = psi;
        walk.apply_oracle(&mut b, &target).unwrap();
        walk.step_unperturbed(&mut b).unwrap();
        assert!(max_diff(&a, &b) < 1e-15);
    }

    #[test]
    fn search_step_without_target_component_is_unperturbed() {
        let (walk, target) = setup(4);
        let cfg = walk.cfg();
        // antisymmetric over the support: ⟨t|ψ⟩ = 0
        let mut amps = vec![ZERO; cfg.dim()];
        amps[target.support()[0]] = Complex64::new(0.6, 0.0);
        amps[target.support()[3]] = Complex64::new(-0.6, 0.0);
        amps[17] = Complex64::new(0.0, 0.8);
        let psi = WalkState::from_amplitudes(cfg, amps, false).unwrap();
        let mut a = psi.clone();
        walk.step_search(&mut a, &target).unwrap();
        let mut b = psi;
        walk.step_unperturbed(&mut b).unwrap();
        assert!(max_diff(&a, &b) < 1e-15);
    }

    #[test]
    fn marked_probability_examples() {
        for m in [2, 7] {
            let (walk, target) = setup(m);
            let n = walk.cfg().sites() as f64;
            let u = walk.uniform_state();
            assert!((marked_probability(&u, &target) - 2.0 / n).abs() < 1e-15);
            assert!((overlap_sq(&u, &target) - 2.0 / n).abs() < 1e-15);
            let t =
                WalkState::from_amplitudes(walk.cfg(), target.vector(walk.cfg()), false).unwrap();
            assert!((marked_probability(&t, &target) - 1.0).abs() < 1e-15);
            assert!((overlap_sq(&t, &target) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tulsi_rejects_bad_inputs() {
        let (walk, target) = setup(3);
        let p = TulsiParams::new(0.3, OracleControl::Zero).unwrap();
        let mut plain = walk.uniform_state();
        assert!(matches!(
            walk.step_tulsi(&mut plain, &target, &p),
            Err(Error::ModeMismatch { .. })
        ));
        let mut ext = walk.tulsi_initial_state();
        assert!(walk.apply_coin(&mut ext).is_err());
        assert!(TulsiParams::new(FRAC_PI_2, OracleControl::One).is_err());
        assert!(TulsiParams::new(-0.1, OracleControl::One).is_err());
        assert!(TulsiParams::new(0.0, OracleControl::One).is_ok());
    }

    #[test]
    fn tulsi_at_zero_delta_reduces_to_search_step() {
        let (walk, target) = setup(4);
        let p = TulsiParams::new(0.0, OracleControl::One).unwrap();
        let mut ext = walk.tulsi_initial_state();
        let mut plain = walk.uniform_state();
        let dim = walk.cfg().dim();
        for _ in 0..40 {
            walk.step_tulsi(&mut ext, &target, &p).unwrap();
            walk.step_search(&mut plain, &target).unwrap();
            let reg = &ext.amplitudes()[dim..];
            let a = target.inner(reg).norm_sqr();
            let b = overlap_sq(&plain, &target);
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn tulsi_preserves_norm() {
        let (walk, target) = setup(5);
        let p = TulsiParams::for_lattice(walk.cfg(), LogBase::Natural);
        let mut ext = walk.tulsi_initial_state();
        for _ in 0..100 {
            walk.step_tulsi(&mut ext, &target, &p).unwrap();
        }
        assert!((ext.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn default_delta_uses_requested_log() {
        let cfg = LatticeConfig::new(8).unwrap();
        let n = 128f64;
        let d = TulsiParams::for_lattice(cfg, LogBase::Natural).delta();
        assert!((d - 1.0 / n.ln().sqrt()).abs() < 1e-15);
        let d2 = TulsiParams::for_lattice(cfg, LogBase::Base2).delta();
        assert!((d2 - 1.0 / 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lattice_mismatch_is_reported() {
        let (walk, _) = setup(3);
        let other = Walk::new(LatticeConfig::new(4).unwrap());
        let mut psi = other.uniform_state();
        assert!(matches!(
            walk.step_unperturbed(&mut psi),
            Err(Error::LatticeMismatch { .. })
        ));
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let (walk, target) = setup(3);
        let t = WalkState::from_amplitudes(walk.cfg(), target.vector(walk.cfg()), false).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = sample_measurement(&t, &mut r1);
            assert_eq!(a, sample_measurement(&t, &mut r2));
            assert_eq!((a.address.n1, a.address.n2), (0, 0));
            assert_eq!(a.ancilla, None);
        }
        let ext = walk.tulsi_initial_state();
        let mm = sample_measurement(&ext, &mut r1);
        assert_eq!(mm.ancilla, Some(1));
    }
}
