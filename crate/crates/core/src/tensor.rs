//! Small dense tensor algebra for 3×3 kinematics and stresses.
//!
//! Three carriers are used throughout the crate:
//!
//! * [`Tensor2`]: a general 3×3 tensor (deformation gradient, velocity
//!   gradient, rotations), row-major.
//! * [`SymTensor2`]: a symmetric 3×3 tensor stored as its six independent
//!   components in the order (11, 22, 33, 12, 13, 23).
//! * [`Tensor4Sym`]: a fourth-order tensor with both minor symmetries, stored
//!   as a 6×6 matrix in Mandel (orthonormal) form. Off-diagonal rows and
//!   columns carry a factor √2, so `C : D` is an ordinary matrix-vector
//!   product on Mandel vectors and Frobenius norms are preserved.
//!
//! Spectral functions go through a cyclic Jacobi eigen-solver.

use std::f64::consts::SQRT_2;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Index pairs of the six symmetric components, in storage order.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

/// Mandel weights for the storage order.
const MANDEL_W: [f64; 6] = [1.0, 1.0, 1.0, SQRT_2, SQRT_2, SQRT_2];

/// Position of component (i, j) in the six-component ordering.
#[inline]
pub fn sym_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => panic!("tensor index out of range: ({i}, {j})"),
    }
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// Tensor2
// ---------------------------------------------------------------------------

/// General second-order tensor, row-major 3×3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor2(pub [[f64; 3]; 3]);

impl Default for Tensor2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Tensor2 {
    pub const fn zero() -> Self {
        Tensor2([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Tensor2([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Tensor2(rows)
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut a = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                a.0[i][j] = f(i, j);
            }
        }
        a
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Tensor2([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    /// Uniform dilation `λ I`.
    pub fn dilation(stretch: f64) -> Self {
        Self::diag(stretch, stretch, stretch)
    }

    /// `I + γ e_i ⊗ e_j`.
    pub fn simple_shear(gamma: f64, i: usize, j: usize) -> Self {
        let mut f = Self::identity();
        f.0[i][j] += gamma;
        f
    }

    /// Proper rotation about `axis` (need not be normalized) by `angle` radians.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let k = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let kx = Tensor2([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]]);
        Self::identity() + kx * s + (kx * kx) * (1.0 - c)
    }

    pub fn outer(a: [f64; 3], b: [f64; 3]) -> Self {
        Self::from_fn(|i, j| a[i] * b[j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Cofactor matrix, `Cof A = det(A) A⁻ᵀ` for invertible `A`.
    pub fn cofactor(&self) -> Self {
        let a = &self.0;
        Tensor2([
            [
                a[1][1] * a[2][2] - a[1][2] * a[2][1],
                a[1][2] * a[2][0] - a[1][0] * a[2][2],
                a[1][0] * a[2][1] - a[1][1] * a[2][0],
            ],
            [
                a[0][2] * a[2][1] - a[0][1] * a[2][2],
                a[0][0] * a[2][2] - a[0][2] * a[2][0],
                a[0][1] * a[2][0] - a[0][0] * a[2][1],
            ],
            [
                a[0][1] * a[1][2] - a[0][2] * a[1][1],
                a[0][2] * a[1][0] - a[0][0] * a[1][2],
                a[0][0] * a[1][1] - a[0][1] * a[1][0],
            ],
        ])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let scale = self.max_abs();
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale * scale || scale == 0.0 {
            return Err(Error::SingularMatrix(det.abs()));
        }
        Ok(self.cofactor().transpose() * (1.0 / det))
    }

    /// Double contraction `A : B = A_ij B_ij`.
    pub fn contract(&self, other: &Tensor2) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * other.0[i][j];
            }
        }
        s
    }

    pub fn norm(&self) -> f64 {
        self.contract(self).sqrt()
    }

    /// Symmetric part.
    pub fn sym(&self) -> SymTensor2 {
        SymTensor2::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    /// Skew-symmetric part.
    pub fn skew(&self) -> Tensor2 {
        Self::from_fn(|i, j| 0.5 * (self.0[i][j] - self.0[j][i]))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let a = &self.0;
        [
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ]
    }

    /// Left Cauchy-Green (Finger) tensor `F Fᵀ`.
    pub fn finger(&self) -> SymTensor2 {
        SymTensor2::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * self.0[j][k]).sum())
    }
}

impl Index<(usize, usize)> for Tensor2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Tensor2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Neg for Tensor2 {
    type Output = Tensor2;
    fn neg(self) -> Tensor2 {
        self * -1.0
    }
}

impl Mul<f64> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, s: f64) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.0[i][j] * s)
    }
}

impl Mul for Tensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: Tensor2) -> Tensor2 {
        Tensor2::from_fn(|i, j| (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl Mul<SymTensor2> for Tensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: SymTensor2) -> Tensor2 {
        self * rhs.to_full()
    }
}

impl Mul<Tensor2> for SymTensor2 {
    type Output = Tensor2;
    fn mul(self, rhs: Tensor2) -> Tensor2 {
        self.to_full() * rhs
    }
}

// ---------------------------------------------------------------------------
// SymTensor2
// ---------------------------------------------------------------------------

/// Symmetric second-order tensor, components (11, 22, 33, 12, 13, 23).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SymTensor2(pub [f64; 6]);

impl SymTensor2 {
    pub const fn zero() -> Self {
        SymTensor2([0.0; 6])
    }

    pub const fn identity() -> Self {
        SymTensor2([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        SymTensor2([a, b, c, 0.0, 0.0, 0.0])
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> f64) -> Self {
        let mut s = Self::zero();
        for (n, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            s.0[n] = f(i, j);
        }
        s
    }

    /// Checked conversion from a full tensor; fails unless `‖A − Aᵀ‖ ≤ 1e-12 ‖A‖`.
    pub fn from_full(a: &Tensor2) -> Result<Self> {
        let asym = (*a - a.transpose()).norm();
        if asym > 1e-12 * a.norm() {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(a.sym())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[sym_index(i, j)]
    }

    pub fn to_full(&self) -> Tensor2 {
        Tensor2::from_fn(|i, j| self.get(i, j))
    }

    /// Mandel vector: shear components scaled by √2.
    pub fn to_mandel(&self) -> [f64; 6] {
        let mut m = self.0;
        for (v, w) in m.iter_mut().zip(MANDEL_W) {
            *v *= w;
        }
        m
    }

    pub fn from_mandel(m: [f64; 6]) -> Self {
        let mut s = SymTensor2(m);
        for (v, w) in s.0.iter_mut().zip(MANDEL_W) {
            *v /= w;
        }
        s
    }

    /// Components in the external (11, 22, 33, 12, 13, 23) ordering.
    pub fn to_voigt(&self) -> [f64; 6] {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn det(&self) -> f64 {
        self.to_full().det()
    }

    pub fn cofactor(&self) -> SymTensor2 {
        // cofactor of a symmetric matrix is symmetric
        self.to_full().cofactor().sym()
    }

    /// `A : B`.
    pub fn contract(&self, other: &SymTensor2) -> f64 {
        let a = &self.0;
        let b = &other.0;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5])
    }

    pub fn norm(&self) -> f64 {
        self.contract(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `A · A`.
    pub fn square(&self) -> SymTensor2 {
        SymTensor2::from_fn(|i, j| (0..3).map(|k| self.get(i, k) * self.get(k, j)).sum())
    }

    /// `Q A Qᵀ`.
    pub fn rotate(&self, q: &Tensor2) -> SymTensor2 {
        (*q * self.to_full() * q.transpose()).sym()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn spectral(&self) -> Spectral {
        jacobi_eigen(self)
    }
}

impl Index<usize> for SymTensor2 {
    type Output = f64;
    fn index(&self, n: usize) -> &f64 {
        &self.0[n]
    }
}

impl Add for SymTensor2 {
    type Output = SymTensor2;
    fn add(mut self, rhs: SymTensor2) -> SymTensor2 {
        self += rhs;
        self
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, rhs: SymTensor2) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(mut self, rhs: SymTensor2) -> SymTensor2 {
        self -= rhs;
        self
    }
}

impl SubAssign for SymTensor2 {
    fn sub_assign(&mut self, rhs: SymTensor2) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for SymTensor2 {
    type Output = SymTensor2;
    fn neg(self) -> SymTensor2 {
        self * -1.0
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = SymTensor2;
    fn mul(mut self, s: f64) -> SymTensor2 {
        for v in self.0.iter_mut() {
            *v *= s;
        }
        self
    }
}

// ---------------------------------------------------------------------------
// Tensor4Sym
// ---------------------------------------------------------------------------

/// Fourth-order tensor with minor symmetries, as a 6×6 Mandel matrix.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Tensor4Sym(pub [[f64; 6]; 6]);

impl Tensor4Sym {
    pub const fn zero() -> Self {
        Tensor4Sym([[0.0; 6]; 6])
    }

    /// Symmetric fourth-order identity `𝕀_sym`, maps every symmetric tensor to itself.
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for n in 0..6 {
            m.0[n][n] = 1.0;
        }
        m
    }

    /// `a ⊗ b`, i.e. `(a ⊗ b)_ijkl = a_ij b_kl`.
    pub fn dyad(a: &SymTensor2, b: &SymTensor2) -> Self {
        let am = a.to_mandel();
        let bm = b.to_mandel();
        let mut m = Self::zero();
        for r in 0..6 {
            for c in 0..6 {
                m.0[r][c] = am[r] * bm[c];
            }
        }
        m
    }

    /// Builds the Mandel matrix from an index function `C_ijkl`, which must
    /// possess the minor symmetries.
    pub fn from_components(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut m = Self::zero();
        for (r, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            for (c, &(k, l)) in SYM_PAIRS.iter().enumerate() {
                m.0[r][c] = MANDEL_W[r] * MANDEL_W[c] * f(i, j, k, l);
            }
        }
        m
    }

    /// Tensor component `C_ijkl`.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let r = sym_index(i, j);
        let c = sym_index(k, l);
        self.0[r][c] / (MANDEL_W[r] * MANDEL_W[c])
    }

    /// Mandel matrix column built from the image of a unit Mandel basis direction.
    pub fn set_column(&mut self, c: usize, image: &SymTensor2) {
        let m = image.to_mandel();
        for r in 0..6 {
            self.0[r][c] = m[r];
        }
    }

    /// Double contraction `C : D`.
    pub fn contract(&self, d: &SymTensor2) -> SymTensor2 {
        let dm = d.to_mandel();
        let mut out = [0.0; 6];
        for (r, row) in self.0.iter().enumerate() {
            out[r] = row.iter().zip(dm).map(|(c, v)| c * v).sum();
        }
        SymTensor2::from_mandel(out)
    }

    /// Major transpose `C_klij`.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for r in 0..6 {
            for c in 0..6 {
                t.0[r][c] = self.0[c][r];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm, equal to that of the full 3⁴ tensor.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest violation of major symmetry, in tensor components.
    pub fn major_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (r, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            for &(k, l) in SYM_PAIRS.iter().skip(r + 1) {
                worst = worst.max((self.component(i, j, k, l) - self.component(k, l, i, j)).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Add for Tensor4Sym {
    type Output = Tensor4Sym;
    fn add(mut self, rhs: Tensor4Sym) -> Tensor4Sym {
        for r in 0..6 {
            for c in 0..6 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
        self
    }
}

impl Sub for Tensor4Sym {
    type Output = Tensor4Sym;
    fn sub(self, rhs: Tensor4Sym) -> Tensor4Sym {
        self + rhs * -1.0
    }
}

impl Mul<f64> for Tensor4Sym {
    type Output = Tensor4Sym;
    fn mul(mut self, s: f64) -> Tensor4Sym {
        for v in self.0.iter_mut().flatten() {
            *v *= s;
        }
        self
    }
}

/// `C : D`.
pub fn double_contract(c: &Tensor4Sym, d: &SymTensor2) -> SymTensor2 {
    c.contract(d)
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

/// Eigen-decomposition of a symmetric tensor. Eigenvalues are sorted
/// descending; `vectors` holds the matching unit eigenvectors as columns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectral {
    pub values: [f64; 3],
    pub vectors: Tensor2,
}

impl Spectral {
    pub fn vector(&self, n: usize) -> [f64; 3] {
        [
            self.vectors.0[0][n],
            self.vectors.0[1][n],
            self.vectors.0[2][n],
        ]
    }

    /// Eigen-projector `v_n ⊗ v_n`.
    pub fn projector(&self, n: usize) -> SymTensor2 {
        let v = self.vector(n);
        SymTensor2::from_fn(|i, j| v[i] * v[j])
    }

    /// `Σ f(λ_n) v_n ⊗ v_n`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymTensor2 {
        let mut out = SymTensor2::zero();
        for n in 0..3 {
            out += self.projector(n) * f(self.values[n]);
        }
        out
    }

    pub fn reconstruct(&self) -> SymTensor2 {
        self.map(|x| x)
    }
}

/// Cyclic Jacobi eigen-solver for symmetric 3×3 tensors.
///
/// Sweeps until the off-diagonal norm drops below `1e-14 ‖A‖`. Eigenvalues are
/// returned in descending order and each eigenvector is signed so its
/// largest-magnitude component is positive.
pub fn jacobi_eigen(a: &SymTensor2) -> Spectral {
    let mut m = a.to_full().0;
    let mut v = Tensor2::identity().0;
    let scale = a.norm();

    let off =
        |m: &[[f64; 3]; 3]| (2.0 * (m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2))).sqrt();

    if scale > 0.0 {
        for _sweep in 0..64 {
            if off(&m) < 1e-14 * scale {
                break;
            }
            for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // m <- Jᵀ m J with J the (p, q) plane rotation
                for k in 0..3 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..3 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| m[y][y].total_cmp(&m[x][x]));

    let mut values = [0.0; 3];
    let mut vectors = Tensor2::zero();
    for (n, &src) in order.iter().enumerate() {
        values[n] = m[src][src];
        let mut col = [v[0][src], v[1][src], v[2][src]];
        let big = (0..3)
            .max_by(|&x, &y| col[x].abs().total_cmp(&col[y].abs()))
            .unwrap_or(0);
        if col[big] < 0.0 {
            col.iter_mut().for_each(|c| *c = -*c);
        }
        for i in 0..3 {
            vectors.0[i][n] = col[i];
        }
    }
    Spectral { values, vectors }
}

// ---------------------------------------------------------------------------
// Named operations
// ---------------------------------------------------------------------------

/// Principal invariants `(tr B, tr Cof B, det B)`.
pub fn invariants(b: &SymTensor2) -> (f64, f64, f64) {
    (b.trace(), b.cofactor().trace(), b.det())
}

/// Isochoric invariants `(Ī1, Ī2, J)` of `B = F Fᵀ`.
pub fn scaled_invariants(f: &Tensor2) -> Result<(f64, f64, f64)> {
    let j = f.det();
    if !(j > 0.0) {
        return Err(Error::NonPositiveJacobian(j));
    }
    let (i1, i2, _) = invariants(&f.finger());
    let j23 = j.powf(-2.0 / 3.0);
    Ok((j23 * i1, j23 * j23 * i2, j))
}

/// Deviatoric part `A − (tr A / 3) I`.
pub fn dev(a: &SymTensor2) -> SymTensor2 {
    *a - SymTensor2::identity() * (a.trace() / 3.0)
}

fn spd_spectral(a: &SymTensor2) -> Result<Spectral> {
    let s = a.spectral();
    if !(s.values[2] > 0.0) {
        return Err(Error::NotPositiveDefinite(s.values[2]));
    }
    Ok(s)
}

/// Principal logarithm of an SPD tensor.
pub fn log_spd(a: &SymTensor2) -> Result<SymTensor2> {
    Ok(spd_spectral(a)?.map(f64::ln))
}

/// Principal square root of an SPD tensor.
pub fn sqrt_spd(a: &SymTensor2) -> Result<SymTensor2> {
    Ok(spd_spectral(a)?.map(f64::sqrt))
}

/// Exponential of a symmetric tensor.
pub fn exp_sym(a: &SymTensor2) -> SymTensor2 {
    a.spectral().map(f64::exp)
}

/// Left polar decomposition `F = V R`.
pub fn polar_decompose(f: &Tensor2) -> Result<(SymTensor2, Tensor2)> {
    let j = f.det();
    if !(j > 0.0) {
        return Err(Error::NonPositiveJacobian(j));
    }
    let s = spd_spectral(&f.finger())?;
    let v = s.map(f64::sqrt);
    let v_inv = s.map(|x| 1.0 / x.sqrt());
    Ok((v, v_inv * *f))
}

/// Logarithmic strain `ε = log V` of a deformation gradient.
pub fn log_strain(f: &Tensor2) -> Result<SymTensor2> {
    let j = f.det();
    if !(j > 0.0) {
        return Err(Error::NonPositiveJacobian(j));
    }
    Ok(spd_spectral(&f.finger())?.map(|x| 0.5 * x.ln()))
}

/// Component-form helper used by modulus builders: Kronecker delta.
pub(crate) fn kronecker(i: usize, j: usize) -> f64 {
    delta(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn invariants_of_identity_and_diagonal() {
        assert_eq!(invariants(&SymTensor2::identity()), (3.0, 3.0, 1.0));
        assert_eq!(
            invariants(&SymTensor2::diag(4.0, 1.0, 1.0)),
            (6.0, 9.0, 4.0)
        );
    }

    #[test]
    fn scaled_invariants_examples() {
        let (i1, i2, j) = scaled_invariants(&Tensor2::identity()).unwrap();
        assert!(close(i1, 3.0, 1e-15) && close(i2, 3.0, 1e-15) && close(j, 1.0, 1e-15));

        let (i1, i2, j) = scaled_invariants(&Tensor2::dilation(1.1)).unwrap();
        assert!(close(i1, 3.0, 1e-14) && close(i2, 3.0, 1e-14));
        assert!(close(j, 1.331, 1e-14));

        let (i1, _, j) = scaled_invariants(&Tensor2::simple_shear(0.5, 0, 1)).unwrap();
        assert!(close(j, 1.0, 1e-15));
        assert!(close(i1, 3.25, 1e-14));

        let reflect = Tensor2::diag(-1.0, 1.0, 1.0);
        assert!(matches!(
            scaled_invariants(&reflect),
            Err(Error::NonPositiveJacobian(_))
        ));
    }

    #[test]
    fn polar_of_rotation_and_stretch() {
        let q = Tensor2::rotation([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        let (v, r) = polar_decompose(&q).unwrap();
        assert!((v - SymTensor2::identity()).max_abs() < 1e-14);
        assert!((r - q).max_abs() < 1e-14);

        let f = Tensor2::diag(2.0, 0.5, 1.0);
        let (v, r) = polar_decompose(&f).unwrap();
        assert!((v.to_full() - f).max_abs() < 1e-14);
        assert!((r - Tensor2::identity()).max_abs() < 1e-14);
    }

    #[test]
    fn log_of_diagonal() {
        let e2 = std::f64::consts::E.powi(2);
        let l = log_spd(&SymTensor2::diag(e2, 1.0, 1.0)).unwrap();
        assert!((l - SymTensor2::diag(2.0, 0.0, 0.0)).max_abs() < 1e-14);
        assert!(matches!(
            log_spd(&SymTensor2::diag(1.0, 0.0, 1.0)),
            Err(Error::NotPositiveDefinite(_))
        ));
        assert!(sqrt_spd(&SymTensor2::diag(1.0, -1.0, 1.0)).is_err());
    }

    #[test]
    fn dev_examples() {
        assert_eq!(dev(&SymTensor2::identity()).max_abs(), 0.0);
        // B̄ of simple shear γ = 0.5
        let b = Tensor2::simple_shear(0.5, 0, 1).finger();
        let d = dev(&b);
        let expect = SymTensor2([
            1.25 - 3.25 / 3.0,
            1.0 - 3.25 / 3.0,
            1.0 - 3.25 / 3.0,
            0.5,
            0.0,
            0.0,
        ]);
        assert!((d - expect).max_abs() < 1e-15);
        assert!(close(d.0[0], 0.166_666_666_666_666_7, 1e-15));
        assert!(close(d.0[1], -0.083_333_333_333_333_3, 1e-15));
        assert!((dev(&d) - d).max_abs() < 1e-15);
    }

    #[test]
    fn contraction_examples() {
        let d = SymTensor2([0.3, -0.2, 0.7, 0.11, -0.05, 0.02]);
        assert!((Tensor4Sym::identity().contract(&d) - d).max_abs() < 1e-15);

        let kappa = 2.5;
        let vol = Tensor4Sym::dyad(&SymTensor2::identity(), &SymTensor2::identity()) * kappa;
        let out = vol.contract(&d);
        assert!((out - SymTensor2::identity() * (kappa * d.trace())).max_abs() < 1e-14);

        let cof = Tensor2::diag(2.0, 3.0, 5.0).cofactor();
        assert_eq!(cof, Tensor2::diag(15.0, 10.0, 6.0));
    }

    #[test]
    fn contraction_matches_index_sum() {
        let c = Tensor4Sym::from_components(|i, j, k, l| {
            (1 + i + 2 * j.max(i) + 3 * k.min(l) + 5 * l.max(k) + i * j) as f64
                * if (i + j) % 2 == 0 { 1.0 } else { 0.5 }
        });
        let c = c + c.transpose();
        let d = SymTensor2([0.3, -0.2, 0.7, 0.11, -0.05, 0.02]);
        let got = c.contract(&d);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += c.component(i, j, k, l) * d.get(k, l);
                    }
                }
                assert!(close(got.get(i, j), s, 1e-12));
            }
        }
    }

    #[test]
    fn inverse_and_singularity() {
        let a = Tensor2::from_rows([[2.0, 1.0, 0.0], [0.0, 1.0, 3.0], [1.0, 0.0, 1.0]]);
        let ai = a.inverse().unwrap();
        assert!((a * ai - Tensor2::identity()).max_abs() < 1e-14);
        let s = Tensor2::from_rows([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]);
        assert!(matches!(s.inverse(), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn from_full_rejects_asymmetric() {
        let a = Tensor2::simple_shear(0.5, 0, 1);
        assert!(matches!(
            SymTensor2::from_full(&a),
            Err(Error::NotSymmetric(_))
        ));
        let b = a.finger().to_full();
        assert_eq!(SymTensor2::from_full(&b).unwrap(), a.finger());
    }

    #[test]
    fn jacobi_handles_zero_and_repeated() {
        let z = jacobi_eigen(&SymTensor2::zero());
        assert_eq!(z.values, [0.0; 3]);
        let s = jacobi_eigen(&SymTensor2::diag(1.0, 3.0, 2.0));
        assert_eq!(s.values, [3.0, 2.0, 1.0]);
        assert_eq!(s.vector(0), [0.0, 1.0, 0.0]);
    }
}
