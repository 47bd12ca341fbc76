//! Dense complex linear algebra for small qubit registers: state vectors,
//! density matrices, partial traces, entropies, and fidelity.
//!
//! Indexing convention used across the whole crate: **qubit 0 is the most
//! significant bit** of a computational-basis index. For an `n`-qubit register
//! the bit of qubit `q` in basis index `b` is `(b >> (n - 1 - q)) & 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used for operators and density matrices.
pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
pub(crate) fn hermitian_eigenvalues(mat: &CMatrix) -> Result<Vec<f64>> {
    let n = mat.nrows();
    let fm = faer::Mat::from_fn(n, n, |i, j| mat[(i, j)]);
    fm.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Internal(format!("eigenvalue computation failed: {e:?}")))
}

/// Full Hermitian eigendecomposition: eigenvalues in nondecreasing order and
/// the matching eigenvector columns.
pub(crate) fn hermitian_eigendecomposition(mat: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = mat.nrows();
    let fm = faer::Mat::from_fn(n, n, |i, j| mat[(i, j)]);
    let eig = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Internal(format!("eigendecomposition failed: {e:?}")))?;
    let values: Vec<f64> = (0..n).map(|i| eig.S()[i].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.U()[(i, j)]);
    Ok((values, vectors))
}

/// Hard cap on dense state vectors (2^14 amplitudes).
pub const MAX_STATE_QUBITS: usize = 14;
/// Hard cap on dense density matrices (2^12 x 2^12 entries).
pub const MAX_DENSITY_QUBITS: usize = 12;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below this are clipped to zero in entropy sums.
pub const EIGENVALUE_CLIP: f64 = 1e-12;
/// Eigenvalues below this negative slack fail validation.
pub const PSD_SLACK: f64 = -1e-8;

/// Bit of `qubit` in basis index `b` for an `n`-qubit register.
#[inline]
pub fn bit_of(b: usize, qubit: usize, n: usize) -> usize {
    (b >> (n - 1 - qubit)) & 1
}

/// A normalized pure state on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros computational basis state.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        check_state_size(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps amplitudes, enforcing length 2^n and unit norm within 1e-12.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_state_size(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "expected 2^{} = {} amplitudes, got {}",
                n_qubits,
                1usize << n_qubits,
                amps.len()
            )));
        }
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "state vector norm {norm} deviates from 1 by more than {NORM_TOL}"
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Normalizes a raw (unnormalized) amplitude vector, returning the state
    /// and the discarded norm. Raw vectors only arise inside contraction
    /// routines.
    pub(crate) fn from_raw(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<(Self, f64)> {
        check_state_size(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        let norm = l2_norm(&amps);
        if norm < 1e-12 {
            return Err(Error::Validation("zero-norm raw state".into()));
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for a in &mut amps {
            *a *= inv;
        }
        Ok((Self { n_qubits, amps }, norm))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::InvalidArgument("qubit count mismatch".into()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Overlap `|<self|other>|` between two pure states.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// The projector |psi><psi| as a density matrix.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        if self.n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::UnsupportedScale(format!(
                "density matrix on {} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit cap",
                self.n_qubits
            )));
        }
        let dim = 1 << self.n_qubits;
        let mat = CMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        Ok(DensityMatrix {
            n_qubits: self.n_qubits,
            mat,
        })
    }
}

/// A Hermitian, unit-trace, PSD-within-tolerance operator on `n_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10) and PSD slack (-1e-8).
    pub fn try_new(n_qubits: usize, mat: CMatrix) -> Result<Self> {
        check_density_size(n_qubits)?;
        let dim = 1 << n_qubits;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_dev = hermiticity_deviation(&mat);
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::Validation(format!(
                "matrix deviates from Hermitian by {herm_dev:.3e}"
            )));
        }
        let tr = trace_re(&mat);
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Validation(format!("trace {tr} is not 1")));
        }
        let min_eig = hermitian_eigenvalues(&mat)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_SLACK {
            return Err(Error::Validation(format!(
                "minimum eigenvalue {min_eig:.3e} below PSD slack"
            )));
        }
        Ok(Self { n_qubits, mat })
    }

    /// Constructs without validation; caller guarantees the invariants hold
    /// (used after operations that preserve them exactly).
    pub(crate) fn new_unchecked(n_qubits: usize, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), 1 << n_qubits);
        Self { n_qubits, mat }
    }

    /// The maximally mixed state I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_density_size(n_qubits)?;
        let dim = 1 << n_qubits;
        let mat = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Ok(Self { n_qubits, mat })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }
}

/// Projects a Hermitian matrix to the nearest valid density matrix by
/// clipping negative eigenvalues to zero and renormalizing the trace.
pub fn project_to_density(n_qubits: usize, mat: &CMatrix) -> Result<DensityMatrix> {
    check_density_size(n_qubits)?;
    let herm_dev = hermiticity_deviation(mat);
    if herm_dev > 1e-6 {
        return Err(Error::Validation(format!(
            "cannot project: matrix deviates from Hermitian by {herm_dev:.3e}"
        )));
    }
    // symmetrize so the eigendecomposition sees an exactly Hermitian input
    let sym = (mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
    let (values, vectors) = hermitian_eigendecomposition(&sym)?;
    let clipped: Vec<f64> = values.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total < 1e-12 {
        return Err(Error::Compensation(
            "all eigenvalues clipped to zero; matrix is not normalizable".into(),
        ));
    }
    let dim = mat.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &l) in clipped.iter().enumerate() {
        if l > 0.0 {
            let v = vectors.column(k);
            let w = Complex64::new(l / total, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    out[(i, j)] += w * v[i] * v[j].conj();
                }
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(n_qubits, out))
}

/// Reduced density matrix of `rho` on the ordered qubit set `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    check_keep(keep, rho.n_qubits)?;
    let n = rho.n_qubits;
    let k = keep.len();
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << k;
    let de = 1usize << rest.len();
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..de {
                let bi = compose_index(i, keep, e, &rest, n);
                let bj = compose_index(j, keep, e, &rest, n);
                acc += rho.mat[(bi, bj)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::new_unchecked(k, out))
}

/// Reduced density matrix of a pure state, without forming the full
/// 2^n x 2^n projector.
pub fn partial_trace_state(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    check_keep(keep, state.n_qubits)?;
    if keep.len() > MAX_DENSITY_QUBITS {
        return Err(Error::UnsupportedScale(format!(
            "reduced matrix on {} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit cap",
            keep.len()
        )));
    }
    let n = state.n_qubits;
    let k = keep.len();
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << k;
    let de = 1usize << rest.len();
    // gather amplitudes into a dk x de table, then take its Gram matrix
    let mut table = vec![Complex64::new(0.0, 0.0); dk * de];
    for i in 0..dk {
        for e in 0..de {
            table[i * de + e] = state.amps[compose_index(i, keep, e, &rest, n)];
        }
    }
    let mut out = CMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..de {
                acc += table[i * de + e] * table[j * de + e].conj();
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    Ok(DensityMatrix::new_unchecked(k, out))
}

/// Von Neumann entropy in bits: -sum lambda log2 lambda over eigenvalues.
///
/// Eigenvalues in [-1e-8, 1e-12] contribute zero; anything below -1e-8 is a
/// validation error.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let herm_dev = hermiticity_deviation(&rho.mat);
    if herm_dev > HERMITIAN_TOL {
        return Err(Error::Validation(format!(
            "matrix deviates from Hermitian by {herm_dev:.3e}"
        )));
    }
    let eigenvalues = hermitian_eigenvalues(&rho.mat)?;
    let mut s = 0.0;
    for l in eigenvalues {
        if l < PSD_SLACK {
            return Err(Error::Validation(format!(
                "eigenvalue {l:.3e} below PSD slack"
            )));
        }
        if l >= EIGENVALUE_CLIP {
            s -= l * l.log2();
        }
    }
    Ok(s)
}

/// Renyi entropy of order `n != 1` in bits:
/// (1 / (1 - n)) log2 [ tr rho^n / (tr rho)^n ].
///
/// Integer orders >= 2 go through repeated matrix products; other orders use
/// the eigenvalues.
pub fn renyi_entropy(rho: &DensityMatrix, order: f64) -> Result<f64> {
    if order == 1.0 {
        return Err(Error::InvalidArgument(
            "Renyi order 1 is the Von Neumann limit; use von_neumann_entropy".into(),
        ));
    }
    if order.is_nan() || order <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Renyi order must be positive, got {order}"
        )));
    }
    let tr = trace_re(&rho.mat);
    let tr_pow = if order.fract() == 0.0 && order >= 2.0 {
        let times = order as usize;
        let mut acc = rho.mat.clone();
        for _ in 1..times {
            acc = &acc * &rho.mat;
        }
        trace_re(&acc)
    } else {
        let eigenvalues = hermitian_eigenvalues(&rho.mat)?;
        let mut acc = 0.0;
        for l in eigenvalues {
            if l < PSD_SLACK {
                return Err(Error::Validation(format!(
                    "eigenvalue {l:.3e} below PSD slack"
                )));
            }
            if l >= EIGENVALUE_CLIP {
                acc += l.powf(order);
            }
        }
        acc
    };
    Ok((tr_pow / tr.powf(order)).log2() / (1.0 - order))
}

/// Uhlmann fidelity tr sqrt(sqrt(a) b sqrt(a)), symmetric in its arguments.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {} qubits",
            a.n_qubits, b.n_qubits
        )));
    }
    let sqrt_a = hermitian_sqrt(&a.mat)?;
    let m = &sqrt_a * &b.mat * &sqrt_a;
    // m is Hermitian PSD up to numerical noise
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eigenvalues = hermitian_eigenvalues(&sym)?;
    let f: f64 = eigenvalues.into_iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok(f.min(1.0))
}

/// Purity tr rho^2. Equals the squared Frobenius norm for Hermitian input.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.mat.iter().map(|z| z.norm_sqr()).sum()
}

/// One of the four single-qubit Pauli letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i & 3]
    }

    /// Action on basis bit `b`: returns (output bit, phase factor).
    #[inline]
    pub fn apply_to_bit(self, b: usize) -> (usize, Complex64) {
        match self {
            Pauli::I => (b, Complex64::new(1.0, 0.0)),
            Pauli::X => (1 - b, Complex64::new(1.0, 0.0)),
            Pauli::Y => (
                1 - b,
                if b == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                },
            ),
            Pauli::Z => (
                b,
                if b == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                },
            ),
        }
    }
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A weighted Pauli string observable on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliObservable {
    pub n_qubits: usize,
    pub letters: Vec<Pauli>,
    pub coefficient: f64,
}

impl PauliObservable {
    pub fn new(letters: Vec<Pauli>, coefficient: f64) -> Self {
        Self {
            n_qubits: letters.len(),
            letters,
            coefficient,
        }
    }

    /// Pauli string action on a basis index: P|b> = phase |b'>.
    pub fn apply_to_basis(&self, b: usize) -> (usize, Complex64) {
        let n = self.n_qubits;
        let mut out = 0usize;
        let mut phase = Complex64::new(self.coefficient, 0.0);
        for (q, &p) in self.letters.iter().enumerate() {
            let (nb, ph) = p.apply_to_bit(bit_of(b, q, n));
            out |= nb << (n - 1 - q);
            phase *= ph;
        }
        (out, phase)
    }

    /// Expectation value tr(rho P), real for Hermitian rho.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.n_qubits != self.n_qubits {
            return Err(Error::InvalidArgument("qubit count mismatch".into()));
        }
        let dim = rho.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..dim {
            let (bp, phase) = self.apply_to_basis(b);
            // tr(rho P) = sum_b <b| rho P |b> with P|b> = phase |bp>
            acc += phase * rho.mat[(b, bp)];
        }
        Ok(acc.re)
    }
}

/// Hermitian square root via eigendecomposition, clipping small negative
/// eigenvalues to zero.
fn hermitian_sqrt(mat: &CMatrix) -> Result<CMatrix> {
    let sym = (mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
    let (values, vectors) = hermitian_eigendecomposition(&sym)?;
    let dim = mat.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &l) in values.iter().enumerate() {
        if l < PSD_SLACK {
            return Err(Error::Validation(format!(
                "eigenvalue {l:.3e} below PSD slack"
            )));
        }
        if l > 0.0 {
            let v = vectors.column(k);
            let w = Complex64::new(l.sqrt(), 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    out[(i, j)] += w * v[i] * v[j].conj();
                }
            }
        }
    }
    Ok(out)
}

fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn trace_re(mat: &CMatrix) -> f64 {
    (0..mat.nrows()).map(|i| mat[(i, i)].re).sum()
}

fn hermiticity_deviation(mat: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..mat.nrows() {
        for j in 0..=i {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_state_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_STATE_QUBITS {
        return Err(Error::UnsupportedScale(format!(
            "{n_qubits} qubits exceeds the {MAX_STATE_QUBITS}-qubit dense state cap"
        )));
    }
    Ok(())
}

fn check_density_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSITY_QUBITS {
        return Err(Error::UnsupportedScale(format!(
            "{n_qubits} qubits exceeds the {MAX_DENSITY_QUBITS}-qubit density matrix cap"
        )));
    }
    Ok(())
}

fn check_keep(keep: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in keep.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::InvalidArgument(format!(
                "keep index {q} out of range for {n_qubits} qubits"
            )));
        }
        if keep[..i].contains(&q) {
            return Err(Error::InvalidArgument(format!("duplicate keep index {q}")));
        }
    }
    Ok(())
}

/// Index with `keep` bits `i` and `rest` bits `e` recombined into the full
/// register ordering.
fn compose_index(i: usize, keep: &[usize], e: usize, rest: &[usize], n: usize) -> usize {
    let mut b = 0usize;
    for (pos, &q) in keep.iter().enumerate() {
        b |= ((i >> (keep.len() - 1 - pos)) & 1) << (n - 1 - q);
    }
    for (pos, &q) in rest.iter().enumerate() {
        b |= ((e >> (rest.len() - 1 - pos)) & 1) << (n - 1 - q);
    }
    b
}

/// Kronecker product of two amplitude vectors; the first factor's qubits end
/// up more significant.
pub(crate) fn kron_amps(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}
