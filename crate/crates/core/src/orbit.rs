//! Adjoint orbits of `Sp(n)` on quaternionic hermitian matrices and the
//! orbit 4-form `ψ_y(A₁, …, A₄) = Re Tr(y [A₁, A₂, A₃, A₄])`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{
    binomial, bits, ce_differential, kernel_matrix, sigma_min, subsets, AltForm, BracketTable,
    MAX_DIM,
};
use crate::qlinalg::{random_sp_n, HermitianQ, QMatrix};
use crate::quat::Quaternion;

/// Relative rank cutoff when orthonormalizing tangent vectors.
pub const TANGENT_RANK_TOL: f64 = 1e-9;

/// A point of `ℋ_n`, optionally labelled with the real diagonal it is conjugate to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianPoint {
    pub y: HermitianQ,
    pub spectrum_label: Option<Vec<f64>>,
}

impl HermitianPoint {
    pub fn new(y: HermitianQ) -> Self {
        Self {
            y,
            spectrum_label: None,
        }
    }

    pub fn diag(spectrum: &[f64]) -> Self {
        Self {
            y: HermitianQ::diag(spectrum),
            spectrum_label: Some(spectrum.to_vec()),
        }
    }

    pub fn size(&self) -> usize {
        self.y.size()
    }

    pub fn matrix(&self) -> &QMatrix {
        self.y.matrix()
    }
}

fn same_size(ms: &[&QMatrix]) -> Result<usize> {
    let n = ms[0].rows();
    for m in ms {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(n)
}

/// `⟨A, B⟩ = Re Tr(AB)`.
pub fn re_trace_pairing(a: &HermitianQ, b: &HermitianQ) -> Result<f64> {
    same_size(&[a.matrix(), b.matrix()])?;
    a.matrix().re_trace_product(b.matrix())
}

fn perm_sign(p: &[usize]) -> f64 {
    let inversions = p.iter().tuple_combinations().filter(|(a, b)| a > b).count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `[A₁, A₂, A₃, A₄] = Σ_{τ ∈ S₄} sign(τ) A_{τ(1)} A_{τ(2)} A_{τ(3)} A_{τ(4)}`.
///
/// Grouped as `Σ_{(a,b)} sign · A_a A_b [A_c, A_d]` over ordered leading
/// pairs, which needs 18 products instead of 72.
pub fn four_commutator(a: [&QMatrix; 4]) -> Result<QMatrix> {
    let n = same_size(&a)?;
    let mut out = QMatrix::zeros(n, n);
    let comm: Vec<((usize, usize), QMatrix)> = (0..4)
        .tuple_combinations()
        .map(|(c, d)| Ok(((c, d), a[c].commutator(a[d])?)))
        .collect::<Result<_>>()?;
    for x in 0..4 {
        for y in 0..4 {
            if x == y {
                continue;
            }
            let (_, cd) = comm
                .iter()
                .find(|((c, d), _)| ![*c, *d].contains(&x) && ![*c, *d].contains(&y))
                .expect("complement pair");
            let (c, d) = (0..4)
                .filter(|i| *i != x && *i != y)
                .collect_tuple()
                .unwrap();
            let s = perm_sign(&[x, y, c, d]);
            let term = a[x].matmul(a[y])?.matmul(cd)?;
            out = out.add(&term.scale(s))?;
        }
    }
    Ok(out)
}

/// Max entry of `Σ_{i<j} (−1)^{i+j} [[A_i, A_j], A₁, …, Â_i, …, Â_j, …, A₅]`,
/// which vanishes identically on `ℋ_n`.
pub fn jacobi5_residual(a: [&HermitianQ; 5]) -> Result<f64> {
    let m: Vec<&QMatrix> = a.iter().map(|h| h.matrix()).collect();
    let n = same_size(&m)?;
    let mut lhs = QMatrix::zeros(n, n);
    for (i, j) in (0..5).tuple_combinations() {
        let c = m[i].commutator(m[j])?;
        let rest: Vec<&QMatrix> = (0..5).filter(|&l| l != i && l != j).map(|l| m[l]).collect();
        let t = four_commutator([&c, rest[0], rest[1], rest[2]])?;
        // 0-based i + j has the same parity as the 1-based sum
        let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        lhs = lhs.add(&t.scale(s))?;
    }
    Ok(lhs.max_abs())
}

/// `ψ_y(A₁, …, A₄) = Re Tr(y [A₁, A₂, A₃, A₄])`.
pub fn psi_y(y: &HermitianPoint, a: [&QMatrix; 4]) -> Result<f64> {
    same_size(&[y.matrix(), a[0], a[1], a[2], a[3]])?;
    y.matrix().re_trace_product(&four_commutator(a)?)
}

/// `sp(n) = {W : W + W* = 0}` with its standard basis and structure constants.
#[derive(Debug)]
pub struct SpAlgebra {
    pub n: usize,
    pub basis: Vec<QMatrix>,
    pub bracket: BracketTable,
}

impl SpAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `w` in the standard basis (which is orthogonal under
    /// `Re Tr(A B*)`).
    pub fn coordinates(&self, w: &QMatrix) -> Result<Vec<f64>> {
        self.basis
            .iter()
            .map(|b| {
                let adj = b.adjoint();
                Ok(w.re_trace_product(&adj)? / b.re_trace_product(&adj)?)
            })
            .collect()
    }
}

/// Standard basis of `sp(n)`: `i, j, k` in each diagonal slot, then for each
/// `a < b` the real antisymmetric `E_ab − E_ba` and `u(E_ab + E_ba)` for
/// `u ∈ {i, j, k}`. `n(2n+1)` elements.
pub fn sp_basis(n: usize) -> Vec<QMatrix> {
    let units = [Quaternion::I, Quaternion::J, Quaternion::K];
    let mut basis = Vec::with_capacity(n * (2 * n + 1));
    for a in 0..n {
        for u in units {
            let mut m = QMatrix::zeros(n, n);
            m[(a, a)] = u;
            basis.push(m);
        }
    }
    for (a, b) in (0..n).tuple_combinations() {
        let mut m = QMatrix::zeros(n, n);
        m[(a, b)] = Quaternion::ONE;
        m[(b, a)] = -Quaternion::ONE;
        basis.push(m);
        for u in units {
            let mut m = QMatrix::zeros(n, n);
            m[(a, b)] = u;
            m[(b, a)] = u;
            basis.push(m);
        }
    }
    basis
}

fn build_sp_algebra(n: usize) -> Result<SpAlgebra> {
    let basis = sp_basis(n);
    let d = basis.len();
    let proto = SpAlgebra {
        n,
        basis,
        bracket: BracketTable::new(d, &vec![0.0; d * d * d])?,
    };
    let mut table = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let c = proto.basis[i].commutator(&proto.basis[j])?;
            let coords = proto.coordinates(&c)?;
            table[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&coords);
        }
    }
    Ok(SpAlgebra {
        bracket: BracketTable::new(d, &table)?,
        ..proto
    })
}

/// Cached `sp(n)` with structure constants.
pub fn sp_algebra(n: usize) -> Result<Arc<SpAlgebra>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SpAlgebra>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().expect("cache lock").get(&n) {
        return Ok(a.clone());
    }
    let alg = Arc::new(build_sp_algebra(n)?);
    cache.lock().expect("cache lock").insert(n, alg.clone());
    Ok(alg)
}

/// Orthonormal basis of the orbit tangent space `{[W, y] : W ∈ sp(n)}`.
#[derive(Debug, Clone)]
pub struct OrbitTangentBasis {
    pub base: HermitianPoint,
    /// the `sp(n)` elements whose brackets survived orthonormalization
    pub lie_basis: Vec<QMatrix>,
    pub tangent_vectors: Vec<HermitianQ>,
    pub dim: usize,
}

/// Modified Gram–Schmidt (two passes) of `[W, y]` over the standard `sp(n)`
/// basis under `Re Tr(AB)`; the dimension is whatever rank survives.
pub fn orbit_tangent_basis(y: &HermitianPoint) -> Result<OrbitTangentBasis> {
    let alg = sp_algebra(y.size())?;
    let raw: Vec<QMatrix> = alg
        .basis
        .iter()
        .map(|w| w.commutator(y.matrix()))
        .collect::<Result<_>>()?;
    let scale = raw
        .iter()
        .map(|t| t.re_trace_product(t).unwrap_or(0.0).sqrt())
        .fold(0.0, f64::max);
    let mut lie_basis = Vec::new();
    let mut tangent: Vec<QMatrix> = Vec::new();
    for (w, t) in alg.basis.iter().zip(raw) {
        let mut v = t;
        for _ in 0..2 {
            for u in &tangent {
                let c = u.re_trace_product(&v)?;
                v = v.sub(&u.scale(c))?;
            }
        }
        let norm = v.re_trace_product(&v)?.max(0.0).sqrt();
        if scale > 0.0 && norm > TANGENT_RANK_TOL * scale {
            tangent.push(v.scale(1.0 / norm));
            lie_basis.push(w.clone());
        }
    }
    let tangent_vectors = tangent
        .iter()
        .map(HermitianQ::from_symmetrized)
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitTangentBasis {
        base: y.clone(),
        lie_basis,
        dim: tangent_vectors.len(),
        tangent_vectors,
    })
}

fn zeros_form(dim: usize, degree: usize) -> Result<AltForm> {
    if dim <= MAX_DIM {
        AltForm::zeros(dim, degree)
    } else {
        AltForm::zeros_wide(dim, degree)
    }
}

fn four_form_on(y: &HermitianPoint, vectors: &[QMatrix]) -> Result<AltForm> {
    let mut form = zeros_form(vectors.len(), 4)?;
    for (slot, s) in subsets(vectors.len(), 4).into_iter().enumerate() {
        let i: Vec<usize> = bits(s).collect();
        form.coeffs_mut()[slot] = psi_y(
            y,
            [
                &vectors[i[0]],
                &vectors[i[1]],
                &vectors[i[2]],
                &vectors[i[3]],
            ],
        )?;
    }
    Ok(form)
}

/// `ψ_y` on the orthonormal tangent basis, as a 4-form on `ℝ^dim`.
pub fn orbit_form_as_altform(basis: &OrbitTangentBasis) -> Result<AltForm> {
    if basis.dim < 4 {
        return Err(Error::OrbitTooSmall(basis.dim));
    }
    let vectors: Vec<QMatrix> = basis
        .tangent_vectors
        .iter()
        .map(|t| t.matrix().clone())
        .collect();
    four_form_on(&basis.base, &vectors)
}

/// The 4-cochain `Φ(W₁, …, W₄) = ψ_y([W₁, y], …, [W₄, y])` on the standard
/// `sp(n)` basis.
pub fn orbit_cochain(y: &HermitianPoint) -> Result<AltForm> {
    let alg = sp_algebra(y.size())?;
    let tangents: Vec<QMatrix> = alg
        .basis
        .iter()
        .map(|w| w.commutator(y.matrix()))
        .collect::<Result<_>>()?;
    four_form_on(y, &tangents)
}

/// Max coefficient of `dΦ` under the `sp(n)` Chevalley–Eilenberg differential.
pub fn check_closed_ce(y: &HermitianPoint) -> Result<f64> {
    let alg = sp_algebra(y.size())?;
    let phi = orbit_cochain(y)?;
    Ok(ce_differential(&phi, &alg.bracket)?.max_abs())
}

/// Max over `trials` of `|ψ_{uyu*}(uA₁u*, …) − ψ_y(A₁, …)| / (‖y‖ Π‖A_i‖)`
/// (Frobenius norms) for Haar `u ∈ Sp(n)` and gaussian hermitian `A_i`.
pub fn check_invariance<R: Rng + ?Sized>(
    y: &HermitianPoint,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let n = y.size();
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let u = random_sp_n(n, rng);
        let a: Vec<HermitianQ> = (0..4).map(|_| HermitianQ::random(n, rng)).collect();
        worst = worst.max(invariance_discrepancy(y, u.matrix(), &a)?);
    }
    Ok(worst)
}

/// Relative discrepancy of one conjugation trial.
pub fn invariance_discrepancy(y: &HermitianPoint, u: &QMatrix, a: &[HermitianQ]) -> Result<f64> {
    let m: Vec<&QMatrix> = a.iter().map(|h| h.matrix()).collect();
    let before = psi_y(y, [m[0], m[1], m[2], m[3]])?;
    let uy = HermitianPoint::new(y.y.conjugate_by(u)?);
    let ua: Vec<QMatrix> = a
        .iter()
        .map(|h| Ok(h.conjugate_by(u)?.into_matrix()))
        .collect::<Result<_>>()?;
    let after = psi_y(&uy, [&ua[0], &ua[1], &ua[2], &ua[3]])?;
    let scale = y.matrix().frobenius_norm() * m.iter().map(|x| x.frobenius_norm()).product::<f64>();
    Ok(if scale > 0.0 {
        (after - before).abs() / scale
    } else {
        (after - before).abs()
    })
}

/// Real parts of the diagonal of `y`.
pub fn diag_moment(y: &HermitianQ) -> Vec<f64> {
    (0..y.size()).map(|i| y.matrix()[(i, i)].w).collect()
}

/// The rank-one projector `[[|s₂|², s₂ s̄₄], [s₄ s̄₂, |s₄|²]]` of the line
/// `[s₂ : s₄] ∈ ℍP¹`, for `|s₂|² + |s₄|² = 1`.
pub fn hp1_orbit_point(s2: Quaternion, s4: Quaternion) -> Result<HermitianQ> {
    let norm = s2.norm_sqr() + s4.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "|s2|^2 + |s4|^2 = {norm}, expected 1"
        )));
    }
    let m = QMatrix::from_rows(&[
        vec![Quaternion::real(s2.norm_sqr()), s2 * s4.conj()],
        vec![s4 * s2.conj(), Quaternion::real(s4.norm_sqr())],
    ])?;
    HermitianQ::new(m)
}

/// Per-orbit verification record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub spectrum: Vec<f64>,
    pub dim: usize,
    pub nondegeneracy_sigma_min: f64,
    pub ce_residual: f64,
    pub invariance_discrepancy: f64,
    pub five_term_residual: f64,
}

/// Runs every orbit check for `diag(spectrum)`; `trials` drives both the
/// invariance check and the number of random quintuples for the five-term
/// identity.
pub fn orbit_report<R: Rng + ?Sized>(
    spectrum: &[f64],
    trials: usize,
    rng: &mut R,
) -> Result<OrbitReport> {
    let y = HermitianPoint::diag(spectrum);
    let basis = orbit_tangent_basis(&y)?;
    let form = orbit_form_as_altform(&basis)?;
    let nondegeneracy_sigma_min = sigma_min(&kernel_matrix(&form)?);
    let ce_residual = check_closed_ce(&y)?;
    let invariance_discrepancy = check_invariance(&y, trials, rng)?;
    let n = y.size();
    let mut five_term_residual = 0.0f64;
    for _ in 0..trials {
        let a: Vec<HermitianQ> = (0..5).map(|_| HermitianQ::random(n, rng)).collect();
        five_term_residual =
            five_term_residual.max(jacobi5_residual([&a[0], &a[1], &a[2], &a[3], &a[4]])?);
    }
    Ok(OrbitReport {
        spectrum: spectrum.to_vec(),
        dim: basis.dim,
        nondegeneracy_sigma_min,
        ce_residual,
        invariance_discrepancy,
        five_term_residual,
    })
}

/// Expected orbit dimension `Σ_{a<b} 4 m_a m_b` for eigenvalue multiplicities `m`.
pub fn flag_dimension(spectrum: &[f64]) -> usize {
    let mut mult: Vec<(f64, usize)> = Vec::new();
    for &s in spectrum {
        match mult.iter_mut().find(|(v, _)| (*v - s).abs() < 1e-12) {
            Some((_, m)) => *m += 1,
            None => mult.push((s, 1)),
        }
    }
    let total: usize = spectrum.len();
    let same: usize = mult.iter().map(|(_, m)| m * m).sum();
    2 * (total * total - same)
}

/// Number of `sp(n)` basis elements.
pub fn sp_dim(n: usize) -> usize {
    n * (2 * n + 1)
}

/// Number of 4-subsets of the `sp(n)` basis, i.e. the size of the cochain.
pub fn cochain_len(n: usize) -> usize {
    binomial(sp_dim(n), 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::numerical_rank;
    use crate::rng::stream;

    fn brute_four_commutator(a: [&QMatrix; 4]) -> QMatrix {
        let n = a[0].rows();
        let mut out = QMatrix::zeros(n, n);
        for p in (0..4).permutations(4) {
            let prod = a[p[0]]
                .matmul(a[p[1]])
                .unwrap()
                .matmul(a[p[2]])
                .unwrap()
                .matmul(a[p[3]])
                .unwrap();
            out = out.add(&prod.scale(perm_sign(&p))).unwrap();
        }
        out
    }

    fn random_quad(n: usize, seed: u64) -> Vec<QMatrix> {
        let mut rng = stream(seed, 0);
        (0..4)
            .map(|_| HermitianQ::random(n, &mut rng).into_matrix())
            .collect()
    }

    #[test]
    fn pairing_examples() {
        let i2 = HermitianQ::diag(&[1.0, 1.0]);
        assert_eq!(re_trace_pairing(&i2, &i2).unwrap(), 2.0);
        let a = HermitianQ::diag(&[1.0, 0.0]);
        let b = HermitianQ::diag(&[0.0, 1.0]);
        assert_eq!(re_trace_pairing(&a, &b).unwrap(), 0.0);
        assert!(re_trace_pairing(&a, &HermitianQ::diag(&[1.0; 3])).is_err());
        let mut rng = stream(61, 0);
        let (a, b) = (
            HermitianQ::random(2, &mut rng),
            HermitianQ::random(2, &mut rng),
        );
        let u = random_sp_n(2, &mut rng);
        let lhs = re_trace_pairing(
            &a.conjugate_by(u.matrix()).unwrap(),
            &b.conjugate_by(u.matrix()).unwrap(),
        )
        .unwrap();
        assert!((lhs - re_trace_pairing(&a, &b).unwrap()).abs() <= 1e-11);
    }

    #[test]
    fn four_commutator_matches_permutation_sum() {
        for n in [2, 3] {
            let a = random_quad(n, 62 + n as u64);
            let fast = four_commutator([&a[0], &a[1], &a[2], &a[3]]).unwrap();
            let slow = brute_four_commutator([&a[0], &a[1], &a[2], &a[3]]);
            assert!(fast.max_abs_diff(&slow).unwrap() <= 1e-12);
            assert!(fast.is_hermitian(1e-12));
        }
    }

    #[test]
    fn four_commutator_degenerate_inputs() {
        let a = random_quad(2, 64);
        let same = four_commutator([&a[0], &a[0], &a[0], &a[0]]).unwrap();
        assert_eq!(same.max_abs(), 0.0);
        let d: Vec<QMatrix> = (0..4)
            .map(|i| QMatrix::diag_real(&[i as f64, 2.0 - i as f64]))
            .collect();
        assert_eq!(
            four_commutator([&d[0], &d[1], &d[2], &d[3]])
                .unwrap()
                .max_abs(),
            0.0
        );
        assert!(four_commutator([&a[0], &a[1], &a[2], &QMatrix::identity(3)]).is_err());
    }

    #[test]
    fn five_term_identity() {
        let mut rng = stream(65, 0);
        for (n, tol) in [(2, 1e-11), (3, 1e-10)] {
            for _ in 0..20 {
                let a: Vec<HermitianQ> = (0..5).map(|_| HermitianQ::random(n, &mut rng)).collect();
                assert!(jacobi5_residual([&a[0], &a[1], &a[2], &a[3], &a[4]]).unwrap() <= tol);
            }
        }
        let a = HermitianQ::random(2, &mut rng);
        assert_eq!(jacobi5_residual([&a, &a, &a, &a, &a]).unwrap(), 0.0);
    }

    #[test]
    fn psi_is_alternating() {
        let y = HermitianPoint::new(HermitianQ::random(2, &mut stream(66, 0)));
        let a = random_quad(2, 67);
        let base = psi_y(&y, [&a[0], &a[1], &a[2], &a[3]]).unwrap();
        assert!(base.abs() > 1e-3);
        assert!(psi_y(&y, [&a[0], &a[1], &a[0], &a[3]]).unwrap().abs() <= 1e-12);
        for p in (0..4).permutations(4) {
            let v = psi_y(&y, [&a[p[0]], &a[p[1]], &a[p[2]], &a[p[3]]]).unwrap();
            assert!((v - perm_sign(&p) * base).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_on_tangent_basis_matches_brute_force() {
        let y = HermitianPoint::diag(&[0.0, 1.0]);
        let b = orbit_tangent_basis(&y).unwrap();
        let t: Vec<&QMatrix> = b.tangent_vectors.iter().map(|h| h.matrix()).collect();
        let fast = psi_y(&y, [t[0], t[1], t[2], t[3]]).unwrap();
        let slow = y
            .matrix()
            .matmul(&brute_four_commutator([t[0], t[1], t[2], t[3]]))
            .unwrap()
            .trace()
            .unwrap()
            .w;
        assert!((fast - slow).abs() <= 1e-12);
        assert!(fast.abs() > 1e-3);
    }

    #[test]
    fn sp_basis_and_structure_constants() {
        for n in 1..=3 {
            let alg = sp_algebra(n).unwrap();
            assert_eq!(alg.dim(), sp_dim(n));
            for w in &alg.basis {
                assert_eq!(w.add(&w.adjoint()).unwrap().max_abs(), 0.0);
            }
            // reconstruction of every bracket from the table
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    let c = alg.basis[i].commutator(&alg.basis[j]).unwrap();
                    let mut r = QMatrix::zeros(n, n);
                    for &(l, v) in alg.bracket.bracket(i, j) {
                        r = r.add(&alg.basis[l].scale(v)).unwrap();
                    }
                    assert!(c.max_abs_diff(&r).unwrap() <= 1e-14);
                }
            }
        }
        // sp(1) ≅ imaginary quaternions with [i, j] = 2k
        let alg = sp_algebra(1).unwrap();
        assert_eq!(alg.bracket.bracket(0, 1), &[(2, 2.0)]);
    }

    #[test]
    fn orbit_dimensions() {
        for (spec, dim) in [
            (vec![0.0, 1.0], 4),
            (vec![1.0, -1.0], 4),
            (vec![1.0, 1.0], 0),
            (vec![0.0, 0.0, 1.0], 8),
            (vec![0.0, 1.0, 2.0], 12),
        ] {
            let b = orbit_tangent_basis(&HermitianPoint::diag(&spec)).unwrap();
            assert_eq!(b.dim, dim, "{spec:?}");
            assert_eq!(flag_dimension(&spec), dim);
            for (i, u) in b.tangent_vectors.iter().enumerate() {
                assert!(u.matrix().is_hermitian(1e-11));
                for (j, v) in b.tangent_vectors.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((re_trace_pairing(u, v).unwrap() - e).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn orbit_form_is_nondegenerate() {
        for (spec, dim) in [
            (vec![0.0, 1.0], 4),
            (vec![1.0, -1.0], 4),
            (vec![0.0, 0.0, 1.0], 8),
            (vec![0.0, 1.0, 2.0], 12),
        ] {
            let b = orbit_tangent_basis(&HermitianPoint::diag(&spec)).unwrap();
            let f = orbit_form_as_altform(&b).unwrap();
            let k = kernel_matrix(&f).unwrap();
            assert_eq!(numerical_rank(&k, 1e-10), dim);
            assert!(sigma_min(&k) > 1e-6, "{spec:?}");
        }
        let small = orbit_tangent_basis(&HermitianPoint::diag(&[1.0, 1.0])).unwrap();
        assert!(matches!(
            orbit_form_as_altform(&small),
            Err(Error::OrbitTooSmall(0))
        ));
    }

    #[test]
    fn reordering_the_basis_permutes_coefficients() {
        let mut b = orbit_tangent_basis(&HermitianPoint::diag(&[0.0, 1.0])).unwrap();
        let f = orbit_form_as_altform(&b).unwrap();
        b.tangent_vectors.swap(0, 1);
        let g = orbit_form_as_altform(&b).unwrap();
        assert_eq!(g.get(&[0, 1, 2, 3]), -f.get(&[0, 1, 2, 3]));
    }

    #[test]
    fn closedness_on_small_orbits() {
        for spec in [vec![0.0, 1.0], vec![1.0, -1.0], vec![0.0, 0.0, 1.0]] {
            let r = check_closed_ce(&HermitianPoint::diag(&spec)).unwrap();
            assert!(r <= 1e-10, "{spec:?}: {r}");
        }
    }

    #[test]
    fn cochain_vanishes_on_the_stabilizer() {
        // [W, y] = 0 for diagonal W when y is real diagonal
        let y = HermitianPoint::diag(&[0.0, 1.0, 2.0]);
        let phi = orbit_cochain(&y).unwrap();
        assert_eq!(phi.get(&[0, 4, 9, 10]), 0.0);
        assert!(phi.max_abs() > 1.0);
        assert_eq!(phi.coeffs().len(), cochain_len(3));
    }

    fn expm(w: &QMatrix) -> QMatrix {
        let n = w.rows();
        let mut out = QMatrix::identity(n);
        let mut term = QMatrix::identity(n);
        for k in 1..40 {
            term = term.matmul(w).unwrap().scale(1.0 / k as f64);
            out = out.add(&term).unwrap();
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        out
    }

    /// Pull `ψ` back along `t ↦ exp(Σ t_a W_a) y exp(−Σ t_a W_a)` and
    /// evaluate it on the coordinate directions, with central differences.
    fn pulled_back_form(y: &HermitianPoint, ws: &[QMatrix], t: &[f64]) -> AltForm {
        let h = 1e-4;
        let at = |t: &[f64]| {
            let w = ws
                .iter()
                .zip(t)
                .fold(QMatrix::zeros(y.size(), y.size()), |acc, (w, s)| {
                    acc.add(&w.scale(*s)).unwrap()
                });
            let g = expm(&w);
            g.matmul(y.matrix()).unwrap().matmul(&g.adjoint()).unwrap()
        };
        let z = HermitianPoint::new(HermitianQ::from_symmetrized(&at(t)).unwrap());
        let partials: Vec<QMatrix> = (0..ws.len())
            .map(|a| {
                let mut tp = t.to_vec();
                let mut tm = t.to_vec();
                tp[a] += h;
                tm[a] -= h;
                at(&tp).sub(&at(&tm)).unwrap().scale(0.5 / h)
            })
            .collect();
        four_form_on(&z, &partials).unwrap()
    }

    /// Exterior derivative of the pulled-back orbit form at `t = 0` by finite
    /// differences, compared with the algebraic differential of the cochain.
    fn chart_differential(spec: &[f64]) -> (AltForm, AltForm) {
        let y = HermitianPoint::diag(spec);
        let b = orbit_tangent_basis(&y).unwrap();
        let alg = sp_algebra(y.size()).unwrap();
        let dim = b.lie_basis.len();
        let idx: Vec<usize> = b
            .lie_basis
            .iter()
            .map(|w| alg.basis.iter().position(|v| v == w).unwrap())
            .collect();
        let h = 1e-3;
        let mut shifted = Vec::new();
        for a in 0..dim {
            let mut tp = vec![0.0; dim];
            let mut tm = vec![0.0; dim];
            tp[a] = h;
            tm[a] = -h;
            shifted.push((
                pulled_back_form(&y, &b.lie_basis, &tp),
                pulled_back_form(&y, &b.lie_basis, &tm),
            ));
        }
        let mut fd = AltForm::zeros(dim, 5).unwrap();
        let dphi = ce_differential(&orbit_cochain(&y).unwrap(), &alg.bracket).unwrap();
        let mut ce = AltForm::zeros(dim, 5).unwrap();
        for (slot, s) in subsets(dim, 5).into_iter().enumerate() {
            let mut acc = 0.0;
            for (pos, a) in bits(s).enumerate() {
                let rest = s & !(1 << a);
                let deriv = (shifted[a].0.get_mask(rest) - shifted[a].1.get_mask(rest)) / (2.0 * h);
                acc += if pos % 2 == 0 { deriv } else { -deriv };
            }
            fd.coeffs_mut()[slot] = acc;
            let full: Vec<usize> = bits(s).map(|a| idx[a]).collect();
            ce.coeffs_mut()[slot] = dphi.get(&full);
        }
        (fd, ce)
    }

    #[test]
    fn chart_derivative_agrees_with_algebraic_differential() {
        // for an invariant form, d on the group is −(k+1) times the normalized
        // algebraic differential
        for spec in [vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 2.0]] {
            let (fd, ce) = chart_differential(&spec);
            let scale = fd.max_abs().max(1.0);
            assert!(
                fd.max_abs_diff(&ce.scale(-5.0)).unwrap() <= 1e-5 * scale,
                "{spec:?}"
            );
        }
        let (fd, _) = chart_differential(&[0.0, 0.0, 1.0]);
        assert!(fd.max_abs() <= 1e-5);
    }

    #[test]
    fn invariance_under_conjugation() {
        let mut rng = stream(68, 0);
        let y = HermitianPoint::diag(&[0.0, 1.0]);
        let a: Vec<HermitianQ> = (0..4).map(|_| HermitianQ::random(2, &mut rng)).collect();
        assert!(invariance_discrepancy(&y, &QMatrix::identity(2), &a).unwrap() <= 1e-15);
        assert!(check_invariance(&y, 100, &mut rng).unwrap() <= 1e-10);
        let y3 = HermitianPoint::diag(&[0.0, 1.0, 2.0]);
        assert!(check_invariance(&y3, 50, &mut rng).unwrap() <= 1e-9);
        assert!(check_invariance(&y3, 0, &mut rng).is_err());
    }

    #[test]
    fn diagonal_moment_examples() {
        assert_eq!(diag_moment(&HermitianQ::diag(&[0.0, 1.0])), vec![0.0, 1.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = hp1_orbit_point(Quaternion::real(s), Quaternion::real(s)).unwrap();
        let m = diag_moment(&p);
        assert!((m[0] - 0.5).abs() < 1e-15 && (m[1] - 0.5).abs() < 1e-15);
        let mut rng = stream(69, 0);
        let u = random_sp_n(2, &mut rng);
        let m = diag_moment(
            &HermitianQ::diag(&[0.0, 1.0])
                .conjugate_by(u.matrix())
                .unwrap(),
        );
        assert!(m.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        assert!((m.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn projective_line_points() {
        let p = hp1_orbit_point(Quaternion::ZERO, Quaternion::ONE).unwrap();
        assert_eq!(p, HermitianQ::diag(&[0.0, 1.0]));
        let p = hp1_orbit_point(Quaternion::ONE, Quaternion::ZERO).unwrap();
        assert_eq!(p, HermitianQ::diag(&[1.0, 0.0]));
        assert!(hp1_orbit_point(Quaternion::ONE, Quaternion::ONE).is_err());
        let mut rng = stream(70, 0);
        for _ in 0..20 {
            let a = Quaternion::random_gaussian(&mut rng);
            let b = Quaternion::random_gaussian(&mut rng);
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let p = hp1_orbit_point(a / r, b / r).unwrap();
            let m = p.matrix();
            assert!(m.matmul(m).unwrap().max_abs_diff(m).unwrap() <= 1e-12);
            assert!((m.trace().unwrap().w - 1.0).abs() <= 1e-12);
            // P fixes its defining unit column, so its spectrum is {0, 1}
            let v = QMatrix::from_rows(&[vec![a / r], vec![b / r]]).unwrap();
            assert!(m.matmul(&v).unwrap().max_abs_diff(&v).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn report_record_fields() {
        let r = orbit_report(&[0.0, 1.0], 5, &mut stream(71, 0)).unwrap();
        assert_eq!(r.dim, 4);
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "spectrum",
            "dim",
            "nondegeneracy_sigma_min",
            "ce_residual",
            "invariance_discrepancy",
            "five_term_residual",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
