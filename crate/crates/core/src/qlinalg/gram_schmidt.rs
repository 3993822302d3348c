//! Gram–Schmidt over `ℍ` for the right-module pairing
//! `⟨u, v⟩ = Σ conj(u_i) v_i`, so that orthonormal columns mean `Q* Q = I`.

use rand::Rng;

use crate::qlinalg::{QMatrix, SpNElement};
use crate::quat::Quaternion;

/// Columns whose residual norm falls below this fraction of the largest
/// input column norm are treated as dependent.
pub const GS_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GramSchmidt {
    /// `n × rank`, orthonormal columns spanning the input's right span.
    pub q: QMatrix,
    pub rank: usize,
    /// Input column indices that survived.
    pub kept: Vec<usize>,
}

fn inner(u: &[Quaternion], v: &[Quaternion]) -> Quaternion {
    u.iter()
        .zip(v)
        .fold(Quaternion::ZERO, |acc, (&a, &b)| acc + a.conj() * b)
}

fn norm(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
pub fn qr_gram_schmidt(a: &QMatrix) -> GramSchmidt {
    let scale = (0..a.cols())
        .map(|j| norm(&a.column(j)))
        .fold(0.0, f64::max);
    let mut basis: Vec<Vec<Quaternion>> = Vec::new();
    let mut kept = Vec::new();
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _ in 0..2 {
            for u in &basis {
                let c = inner(u, &v);
                for (vi, &ui) in v.iter_mut().zip(u) {
                    *vi -= ui * c;
                }
            }
        }
        let nv = norm(&v);
        if scale == 0.0 || nv <= GS_RANK_TOL * scale {
            continue;
        }
        basis.push(v.into_iter().map(|q| q / nv).collect());
        kept.push(j);
    }
    let rank = basis.len();
    let mut q = QMatrix::zeros(a.rows(), rank);
    for (j, col) in basis.iter().enumerate() {
        q.set_column(j, col);
    }
    GramSchmidt { q, rank, kept }
}

/// Haar-distributed element of `Sp(n)`: Gram–Schmidt of a gaussian matrix.
pub fn random_sp_n<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SpNElement {
    loop {
        let g = QMatrix::random_gaussian(n, n, rng);
        let gs = qr_gram_schmidt(&g);
        if gs.rank == n {
            if let Ok(u) = SpNElement::new(gs.q) {
                return u;
            }
        }
    }
}

/// Random element of `sp(n)`: antisymmetrized gaussian, `W + W* = 0`.
pub fn random_sp_lie<R: Rng + ?Sized>(n: usize, rng: &mut R) -> QMatrix {
    let g = QMatrix::random_gaussian(n, n, rng);
    g.sub(&g.adjoint()).expect("same shape").scale(0.5)
}
