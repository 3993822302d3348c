//! Alternating forms and multivectors on `ℝ^d`.
//!
//! Coefficients are stored densely, one per sorted index set, in
//! lexicographic subset order. Index sets are `u64` bitmasks internally; the
//! public API speaks sorted 0-based index slices.
//!
//! Sign conventions:
//! - `wedge` uses shuffle signs, so `e¹ ∧ e² = e¹²` and `a ∧ b = (−1)^{kl} b ∧ a`.
//! - `interior(v, a)` contracts the multivector's leftmost factor first:
//!   `i_{u∧v} = i_v ∘ i_u`. Hence `i_{e_A} e^A = 1` for any sorted `A`, and
//!   for vectors `i_{v₁∧…∧v_k} a = a(v₁, …, v_k)`.

use std::fmt;
use std::marker::PhantomData;

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense cap for general forms.
pub const MAX_DIM: usize = 16;
/// Cap for the degree-limited wide path (Lie algebra cochains).
pub const MAX_WIDE_DIM: usize = 32;
/// Largest coefficient vector the wide path will allocate.
pub const MAX_WIDE_COEFFS: usize = 1 << 17;

pub type Mask = u64;

const fn binomial_table() -> [[u64; MAX_WIDE_DIM + 1]; MAX_WIDE_DIM + 1] {
    let mut t = [[0u64; MAX_WIDE_DIM + 1]; MAX_WIDE_DIM + 1];
    let mut n = 0;
    while n <= MAX_WIDE_DIM {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOM: [[u64; MAX_WIDE_DIM + 1]; MAX_WIDE_DIM + 1] = binomial_table();

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        BINOM[n][k] as usize
    }
}

/// All sorted `k`-subsets of `{0..d}` as masks, in lexicographic order.
pub fn subsets(d: usize, k: usize) -> Vec<Mask> {
    if k > d {
        return Vec::new();
    }
    (0..d)
        .combinations(k)
        .map(|c| c.iter().fold(0, |m, &i| m | (1 << i)))
        .collect()
}

/// Lexicographic rank of a `k`-subset of `{0..d}`.
pub fn rank_of(mask: Mask, d: usize, k: usize) -> usize {
    let mut r = 0;
    let mut next = 0;
    for (i, c) in bits(mask).enumerate() {
        for j in next..c {
            r += binomial(d - 1 - j, k - 1 - i);
        }
        next = c + 1;
    }
    r
}

pub fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

#[inline]
fn below(i: usize) -> Mask {
    (1 << i) - 1
}

/// `(−1)^{#{(a, b) ∈ A × B : a > b}}`: the sign of `e^A ∧ e^B` against `e^{A∪B}`.
#[inline]
pub fn shuffle_sign(a: Mask, b: Mask) -> f64 {
    let inversions: u32 = bits(b).map(|j| (a & !below(j + 1)).count_ones()).sum();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of contracting the blade `A` (leftmost first) out of `A ∪ C`.
#[inline]
fn contraction_sign(a: Mask, c: Mask) -> f64 {
    let n: u32 = bits(a).map(|i| (c & below(i)).count_ones()).sum();
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

mod sealed {
    pub trait Sealed {}
}

/// Marker for covariant (form) or contravariant (multivector) storage.
pub trait Variance: sealed::Sealed + Clone + fmt::Debug + PartialEq {
    const NAME: &'static str;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Covariant {}
#[derive(Debug, Clone, PartialEq)]
pub enum Contravariant {}

impl sealed::Sealed for Covariant {}
impl sealed::Sealed for Contravariant {}
impl Variance for Covariant {
    const NAME: &'static str = "form";
}
impl Variance for Contravariant {
    const NAME: &'static str = "multivector";
}

/// Degree-`k` alternating tensor on `ℝ^d`.
#[derive(Clone, PartialEq)]
pub struct Alternating<V: Variance> {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
    _v: PhantomData<V>,
}

/// Alternating `k`-form.
pub type AltForm = Alternating<Covariant>;
/// `k`-vector.
pub type MultiVector = Alternating<Contravariant>;

impl<V: Variance> fmt::Debug for Alternating<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(dim={}, degree={}) {{",
            V::NAME,
            self.dim,
            self.degree
        )?;
        for (s, c) in self.iter_nonzero() {
            write!(f, " {s:?}: {c},")?;
        }
        write!(f, " }}")
    }
}

#[derive(Serialize)]
struct Dump {
    kind: &'static str,
    dim: usize,
    degree: usize,
    /// 1-based sorted index sets with their coefficients
    coeffs: Vec<(Vec<usize>, f64)>,
}

impl<V: Variance> Alternating<V> {
    pub fn zeros(dim: usize, degree: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(Self::raw(dim, degree))
    }

    /// Degree-limited path for `dim ≤ MAX_WIDE_DIM`, as long as the
    /// coefficient count stays below [`MAX_WIDE_COEFFS`].
    pub fn zeros_wide(dim: usize, degree: usize) -> Result<Self> {
        if dim > MAX_WIDE_DIM || binomial(dim, degree) > MAX_WIDE_COEFFS {
            return Err(Error::DimensionTooLarge {
                dim,
                max: MAX_WIDE_DIM,
            });
        }
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        Ok(Self::raw(dim, degree))
    }

    fn raw(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            coeffs: vec![0.0; binomial(dim, degree)],
            _v: PhantomData,
        }
    }

    fn zeros_like_dim(dim: usize, degree: usize) -> Result<Self> {
        if dim > MAX_DIM {
            Self::zeros_wide(dim, degree)
        } else {
            Self::zeros(dim, degree)
        }
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self> {
        let mut s = Self::zeros(dim, 0)?;
        s.coeffs[0] = value;
        Ok(s)
    }

    /// Degree-1 element with the given components.
    pub fn from_components(components: &[f64]) -> Result<Self> {
        let mut s = Self::zeros(components.len(), 1)?;
        s.coeffs.copy_from_slice(components);
        Ok(s)
    }

    /// The basis blade on `indices` in the order given; the sign of the sorting
    /// permutation is applied, repeated indices give zero.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(dim, indices.len())?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::DimensionMismatch(format!(
                "index {bad} >= dim {dim}"
            )));
        }
        if indices.iter().duplicates().next().is_some() {
            return Ok(s);
        }
        let inversions = indices
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| a > b)
            .count();
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        let m = mask_of(indices);
        let r = rank_of(m, dim, indices.len());
        s.coeffs[r] = sign;
        Ok(s)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn masks(&self) -> Vec<Mask> {
        subsets(self.dim, self.degree)
    }

    #[inline]
    pub fn index_of(&self, mask: Mask) -> usize {
        rank_of(mask, self.dim, self.degree)
    }

    /// Coefficient of the sorted index set.
    pub fn get(&self, sorted: &[usize]) -> f64 {
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        self.coeffs[self.index_of(mask_of(sorted))]
    }

    pub fn get_mask(&self, mask: Mask) -> f64 {
        self.coeffs[self.index_of(mask)]
    }

    pub fn set(&mut self, sorted: &[usize], value: f64) {
        let r = self.index_of(mask_of(sorted));
        self.coeffs[r] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mask, f64)> + '_ {
        self.masks().into_iter().zip(self.coeffs.iter().copied())
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(m, c)| (bits(m).collect(), c))
    }

    fn require_same(&self, o: &Self) -> Result<()> {
        if self.dim != o.dim || self.degree != o.degree {
            return Err(Error::DimensionMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.dim, self.degree, o.dim, o.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.require_same(o)?;
        let mut out = self.clone();
        out.coeffs
            .iter_mut()
            .zip(&o.coeffs)
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.require_same(o)?;
        let mut out = self.clone();
        out.coeffs
            .iter_mut()
            .zip(&o.coeffs)
            .for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|a| *a *= s);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        Ok(self.sub(o)?.max_abs())
    }

    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.dim != o.dim {
            return Err(Error::DimensionMismatch(format!(
                "wedge on dims {} and {}",
                self.dim, o.dim
            )));
        }
        let degree = self.degree + o.degree;
        if degree > self.dim {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zeros_like_dim(self.dim, degree)?;
        let rhs: Vec<(Mask, f64)> = o.iter().filter(|&(_, c)| c != 0.0).collect();
        for (ma, ca) in self.iter().filter(|&(_, c)| c != 0.0) {
            for &(mb, cb) in &rhs {
                if ma & mb != 0 {
                    continue;
                }
                let r = out.index_of(ma | mb);
                out.coeffs[r] += shuffle_sign(ma, mb) * ca * cb;
            }
        }
        Ok(out)
    }

    /// `m`-fold wedge power; `m = 0` gives the constant 1.
    pub fn power(&self, m: usize) -> Result<Self> {
        let degree = self.degree * m;
        if degree > self.dim {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.dim,
            });
        }
        let mut acc = Self::scalar(self.dim, 1.0)?;
        for _ in 0..m {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Debug JSON dump with 1-based index sets; zero coefficients are omitted.
    pub fn to_json(&self) -> serde_json::Value {
        let dump = Dump {
            kind: V::NAME,
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .iter_nonzero()
                .map(|(s, c)| (s.into_iter().map(|i| i + 1).collect(), c))
                .collect(),
        };
        serde_json::to_value(dump).expect("plain data")
    }
}

/// Contracts `inner` into `outer`, leftmost factor of `inner` first.
fn contract<A: Variance, B: Variance>(
    inner: &Alternating<A>,
    outer: &Alternating<B>,
) -> Result<Alternating<B>> {
    if inner.dim != outer.dim {
        return Err(Error::DimensionMismatch(format!(
            "contraction on dims {} and {}",
            inner.dim, outer.dim
        )));
    }
    if inner.degree > outer.degree {
        return Err(Error::DegreeOverflow {
            degree: inner.degree,
            dim: outer.degree,
        });
    }
    let degree = outer.degree - inner.degree;
    let mut out = Alternating::<B>::zeros_like_dim(outer.dim, degree)?;
    let lhs: Vec<(Mask, f64)> = inner.iter().filter(|&(_, c)| c != 0.0).collect();
    for (slot, mc) in subsets(outer.dim, degree).into_iter().enumerate() {
        let mut acc = 0.0;
        for &(ma, ca) in &lhs {
            if ma & mc != 0 {
                continue;
            }
            acc += contraction_sign(ma, mc) * ca * outer.get_mask(ma | mc);
        }
        out.coeffs[slot] = acc;
    }
    Ok(out)
}

/// Interior product `i_v a` of a `j`-vector into a `k`-form, `j ≤ k`.
pub fn interior(v: &MultiVector, a: &AltForm) -> Result<AltForm> {
    contract(v, a)
}

/// Contraction of a `j`-form into a `k`-vector, same convention as [`interior`].
pub fn interior_form(a: &AltForm, v: &MultiVector) -> Result<MultiVector> {
    contract(a, v)
}

/// Full pairing of equal-degree `v` and `a`.
pub fn pairing(v: &MultiVector, a: &AltForm) -> Result<f64> {
    if v.degree != a.degree {
        return Err(Error::DimensionMismatch(format!(
            "pairing degrees {} and {}",
            v.degree, a.degree
        )));
    }
    Ok(interior(v, a)?.coeffs[0])
}

impl AltForm {
    /// `a(v₁, …, v_k)`.
    pub fn evaluate(&self, vectors: &[&[f64]]) -> Result<f64> {
        if vectors.len() != self.degree {
            return Err(Error::DimensionMismatch(format!(
                "{} arguments for a {}-form",
                vectors.len(),
                self.degree
            )));
        }
        let mut blade = MultiVector::scalar(self.dim, 1.0)?;
        for v in vectors {
            blade = blade.wedge(&MultiVector::from_components(v)?)?;
        }
        pairing(&blade, self)
    }
}

/// `d × C(d, k−1)` matrix whose row `v` holds the coefficients of `i_{e_v} a`.
/// `a` is non-degenerate exactly when this has full row rank.
pub fn kernel_matrix(a: &AltForm) -> Result<DMatrix<f64>> {
    if a.degree == 0 {
        return Err(Error::Precondition("kernel matrix of a 0-form".into()));
    }
    let d = a.dim;
    let cols = binomial(d, a.degree - 1);
    let mut m = DMatrix::zeros(d, cols);
    for v in 0..d {
        let c = interior(&MultiVector::basis(d, &[v])?, a)?;
        for (j, &x) in c.coeffs.iter().enumerate() {
            m[(v, j)] = x;
        }
    }
    Ok(m)
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Smallest of the `min(rows, cols)` singular values.
pub fn sigma_min(m: &DMatrix<f64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Numerical rank with relative cutoff `tol · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Structure constants `[X_i, X_j] = Σ_l c_{ijl} X_l` on a chosen basis.
#[derive(Debug, Clone)]
pub struct BracketTable {
    dim: usize,
    /// nonzero `(l, c_{ijl})` per ordered pair `(i, j)`
    entries: Vec<Vec<(usize, f64)>>,
}

impl BracketTable {
    /// `table[(i * d + j) * d + l] = c_{ijl}`. Rejects tables that are not
    /// antisymmetric in `(i, j)` to `1e−12` relative.
    pub fn new(dim: usize, table: &[f64]) -> Result<Self> {
        if table.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "bracket table of length {} for dim {dim}",
                table.len()
            )));
        }
        let scale = table.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        let at = |i: usize, j: usize, l: usize| table[(i * dim + j) * dim + l];
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut row = Vec::new();
                for l in 0..dim {
                    if (at(i, j, l) + at(j, i, l)).abs() > 1e-12 * scale {
                        return Err(Error::NonAntisymmetricBracket(i, j));
                    }
                    if at(i, j, l) != 0.0 {
                        row.push((l, at(i, j, l)));
                    }
                }
                entries.push(row);
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero structure constants of `[X_i, X_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.entries[i * self.dim + j]
    }
}

/// Chevalley–Eilenberg differential with trivial coefficients,
///
/// `dφ(X₁, …, X_{k+1}) = 1/(k+1) Σ_{i<j} (−1)^{i+j+1} φ([X_i, X_j], X₁, …, X̂_i, …, X̂_j, …)`,
///
/// evaluated on every sorted `(k+1)`-subset of basis vectors. Works on the
/// wide path, so `sp(3)` (`d = 21`) is fine for `k ≤ 4`.
pub fn ce_differential(phi: &AltForm, bracket: &BracketTable) -> Result<AltForm> {
    let d = phi.dim;
    if bracket.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "cochain on dim {d} with a bracket on dim {}",
            bracket.dim()
        )));
    }
    let k = phi.degree;
    if k + 1 > d {
        return Ok(AltForm::raw(d, k + 1));
    }
    let mut out = AltForm::zeros_like_dim(d, k + 1)?;
    let norm = 1.0 / (k + 1) as f64;
    for (slot, s) in subsets(d, k + 1).into_iter().enumerate() {
        let idx: Vec<usize> = bits(s).collect();
        let mut acc = 0.0;
        for (i, j) in (0..=k).tuple_combinations() {
            // 1-based positions i+1, j+1 give the same parity
            let sign = if (i + j) % 2 == 0 { -1.0 } else { 1.0 };
            let rest = s & !(1 << idx[i]) & !(1 << idx[j]);
            for &(l, c) in bracket.bracket(idx[i], idx[j]) {
                if rest & (1 << l) != 0 {
                    continue;
                }
                let move_sign = if (rest & below(l)).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += sign * c * move_sign * phi.get_mask(rest | (1 << l));
            }
        }
        out.coeffs[slot] = norm * acc;
    }
    Ok(out)
}

/// Standard 4-form `Σ_i dx_{4i} ∧ dx_{4i+1} ∧ dx_{4i+2} ∧ dx_{4i+3}` on `ℝ^{4m}`.
pub fn psi_standard(m: usize) -> Result<AltForm> {
    let d = 4 * m;
    let mut psi = AltForm::zeros(d, 4)?;
    for b in 0..m {
        psi.set(&[4 * b, 4 * b + 1, 4 * b + 2, 4 * b + 3], 1.0);
    }
    Ok(psi)
}

/// `e¹ ∧ … ∧ e^d`.
pub fn volume_form(d: usize) -> Result<AltForm> {
    AltForm::basis(d, &(0..d).collect::<Vec<_>>())
}
