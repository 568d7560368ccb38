//! Dense matrices of the walk operators for small lattices.
//!
//! Two independent routes are provided: [`operator_matrix`] applies the fast
//! in-place kernels to every basis vector, while the `direct_*` builders
//! assemble the same operators from their defining formulas (explicit shift
//! permutation, `G₃ ⊗ I_P`, `I − 2|t⟩⟨t|`, ancilla Kronecker products).
//! Agreement between the two, plus unitarity and the spectra, is what the
//! test suites check.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::{self, LatticeConfig, VertexAddress};
use crate::walk::{OracleControl, SearchTarget, TulsiParams, Walk, WalkState};

pub type CMatrix = DMatrix<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Matrix of a linear map given as an in-place action on walk states,
/// built column by column from basis vectors.
pub fn operator_matrix<F>(cfg: LatticeConfig, tulsi: bool, mut apply: F) -> Result<CMatrix>
where
    F: FnMut(&mut WalkState) -> Result<()>,
{
    let n = if tulsi { 2 * cfg.dim() } else { cfg.dim() };
    let mut mat = CMatrix::zeros(n, n);
    for col in 0..n {
        let mut psi = WalkState::basis_in(cfg, col, tulsi)?;
        apply(&mut psi)?;
        mat.set_column(col, &DVector::from_column_slice(psi.amplitudes()));
    }
    Ok(mat)
}

pub fn unperturbed_matrix(walk: &Walk) -> Result<CMatrix> {
    operator_matrix(walk.cfg(), false, |s| walk.step_unperturbed(s))
}

pub fn search_matrix(walk: &Walk, target: &SearchTarget) -> Result<CMatrix> {
    operator_matrix(walk.cfg(), false, |s| walk.step_search(s, target))
}

pub fn tulsi_matrix(walk: &Walk, target: &SearchTarget, params: &TulsiParams) -> Result<CMatrix> {
    operator_matrix(walk.cfg(), true, |s| walk.step_tulsi(s, target, params))
}

/// `S = Σ |j, s⊕1, n − (−1)^s v_j⟩⟨j, s, n|`.
pub fn direct_shift(cfg: LatticeConfig) -> CMatrix {
    let m = cfg.m();
    let dirs = [(0i64, 0i64), (1, 0), (0, 1)];
    let mut s_mat = CMatrix::zeros(cfg.dim(), cfg.dim());
    for (j, (d1, d2)) in dirs.into_iter().enumerate() {
        for s in 0..2 {
            let sign = if s == 0 { 1 } else { -1 };
            for n1 in 0..m {
                for n2 in 0..m {
                    let t1 = (n1 as i64 - sign * d1).rem_euclid(m as i64) as usize;
                    let t2 = (n2 as i64 - sign * d2).rem_euclid(m as i64) as usize;
                    let col = j * 2 * m * m + s * m * m + n1 * m + n2;
                    let row = j * 2 * m * m + (1 - s) * m * m + t1 * m + t2;
                    s_mat[(row, col)] = ONE;
                }
            }
        }
    }
    s_mat
}

/// The Grover coin `G₃`.
pub fn grover3() -> CMatrix {
    CMatrix::from_fn(3, 3, |r, c| {
        Complex64::new(if r == c { -1.0 / 3.0 } else { 2.0 / 3.0 }, 0.0)
    })
}

/// `G₃ ⊗ I_P`.
pub fn direct_coin(cfg: LatticeConfig) -> CMatrix {
    grover3().kronecker(&CMatrix::identity(cfg.sites(), cfg.sites()))
}

/// `I − 2|t⟩⟨t|`.
pub fn direct_oracle(cfg: LatticeConfig, target: &SearchTarget) -> CMatrix {
    let t = DVector::from_vec(target.vector(cfg));
    CMatrix::identity(cfg.dim(), cfg.dim()) - (&t * t.adjoint()) * Complex64::new(2.0, 0.0)
}

pub fn direct_unperturbed(cfg: LatticeConfig) -> CMatrix {
    direct_shift(cfg) * direct_coin(cfg)
}

pub fn direct_search(cfg: LatticeConfig, target: &SearchTarget) -> CMatrix {
    direct_unperturbed(cfg) * direct_oracle(cfg, target)
}

/// The extended step as a product of Kronecker factors, ancilla first.
pub fn direct_tulsi(cfg: LatticeConfig, target: &SearchTarget, params: &TulsiParams) -> CMatrix {
    let (c, s) = (params.delta().cos(), params.delta().sin());
    let x = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(c, 0.0),
        ],
    );
    let ident = CMatrix::identity(cfg.dim(), cfg.dim());
    let proj = |b: usize| {
        let mut p = CMatrix::zeros(2, 2);
        p[(b, b)] = ONE;
        p
    };
    let controlled = |b: usize, op: &CMatrix| proj(b).kronecker(op) + proj(1 - b).kronecker(&ident);
    let oracle_branch = match params.oracle_control() {
        OracleControl::Zero => 0,
        OracleControl::One => 1,
    };
    let mut neg_z = CMatrix::zeros(2, 2);
    neg_z[(0, 0)] = -ONE;
    neg_z[(1, 1)] = ONE;

    let x_full = x.kronecker(&ident);
    let x_adj_full = x.adjoint().kronecker(&ident);
    let c_r = controlled(oracle_branch, &direct_oracle(cfg, target));
    let c_u = controlled(1, &direct_unperturbed(cfg));
    neg_z.kronecker(&ident) * c_u * x_adj_full * c_r * x_full
}

/// Largest entry of `|M†M − I|`.
pub fn unitarity_defect(mat: &CMatrix) -> f64 {
    let n = mat.ncols();
    let prod = mat.adjoint() * mat;
    let ident = CMatrix::identity(n, n);
    (prod - ident).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

const SCHUR_MAX_ITER: usize = 10_000;
const DEFLATION_TOLERANCES: [f64; 3] = [f64::EPSILON, 1e-14, 1e-12];
const FALLBACK_PHASES: [f64; 4] = [0.3719, 1.1093, 2.2461, 2.9087];

/// Eigenvalues via the complex Schur form.
///
/// QR iteration can stall on the highly degenerate spectra of these
/// operators, so on non-convergence the deflation tolerance is relaxed and,
/// failing that, the matrix is multiplied by a generic phase and the
/// eigenvalues rotated back.
pub fn eigenvalues(mat: &CMatrix) -> Vec<Complex64> {
    for eps in DEFLATION_TOLERANCES {
        if let Some(schur) = Schur::try_new(mat.clone(), eps, SCHUR_MAX_ITER) {
            return collect_eigenvalues(&schur, ONE);
        }
    }
    for phi in FALLBACK_PHASES {
        let phase = Complex64::from_polar(1.0, phi);
        if let Some(schur) = Schur::try_new(mat * phase, 1e-14, SCHUR_MAX_ITER) {
            return collect_eigenvalues(&schur, phase.conj());
        }
    }
    panic!("Schur iteration failed to converge")
}

fn collect_eigenvalues(
    schur: &Schur<Complex64, nalgebra::Dyn>,
    rotate: Complex64,
) -> Vec<Complex64> {
    schur
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .map(|z| z * rotate)
        .collect()
}

/// Largest singular value.
pub fn operator_norm(mat: &CMatrix) -> f64 {
    mat.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Largest distance between paired elements of two complex multisets, or
/// `None` if the sizes differ. Each expected value is paired with the
/// closest still-unused computed value.
pub fn multiset_distance(expected: &[Complex64], computed: &[Complex64]) -> Option<f64> {
    if expected.len() != computed.len() {
        return None;
    }
    let mut used = vec![false; computed.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let (best, d) = computed
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, c)| (i, (e - c).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[best] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// `S·C'` with `C' = G₃ ⊗ (I − |r₀⟩⟨r₀|) − I₃ ⊗ |r₀⟩⟨r₀|`, where `r₀` is the
/// single lattice vertex `(s = 0, n1, n2)` of the marked cell.
pub fn single_vertex_search(cfg: LatticeConfig, target: &SearchTarget) -> CMatrix {
    let (n1, n2) = target.cell();
    let r0 = lattice::flat_index(VertexAddress::new(0, 0, n1, n2), cfg)
        .expect("target cell is in range");
    let mut proj = CMatrix::zeros(cfg.sites(), cfg.sites());
    proj[(r0, r0)] = ONE;
    let ip = CMatrix::identity(cfg.sites(), cfg.sites());
    let i3 = CMatrix::identity(3, 3);
    let coin = grover3().kronecker(&(ip - &proj)) - i3.kronecker(&proj);
    direct_shift(cfg) * coin
}

/// Operator-norm distance between the single-vertex coin form and
/// `U·R_t` with the six-dimensional cell target.
pub fn single_vertex_probe(cfg: LatticeConfig, target: &SearchTarget) -> f64 {
    let a = single_vertex_search(cfg, target);
    let b = direct_search(cfg, target);
    operator_norm(&(a - b))
}
