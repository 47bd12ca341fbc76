//! Binary symplectic stabilizer tableau: exact Clifford-state backend.
//!
//! Each generator row encodes a Hermitian Pauli as
//! `(-1)^sign * prod_q i^(x_q z_q) X^(x_q) Z^(z_q)`, with the X and Z bit
//! masks packed into machine words. Entanglement entropy of a region is
//! computed from GF(2) ranks, so it is exact and fast for tens of qubits.

use crate::circuits::{Gate, Graph};
use crate::error::{Error, Result};
use crate::qmath::{Pauli, StateVector, MAX_STATE_QUBITS};
use num_complex::Complex64;

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// One stabilizer generator: X/Z bit masks plus a sign bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliRow {
    x: Vec<u64>,
    z: Vec<u64>,
    /// true encodes an overall -1.
    neg: bool,
}

impl PauliRow {
    fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            x: vec![0; w],
            z: vec![0; w],
            neg: false,
        }
    }

    pub fn from_letters(n: usize, letters: &[(usize, Pauli)]) -> Self {
        let mut row = Self::identity(n);
        for &(q, p) in letters {
            assert!(q < n, "qubit {q} out of range");
            match p {
                Pauli::I => {}
                Pauli::X => row.set_x(q, true),
                Pauli::Y => {
                    row.set_x(q, true);
                    row.set_z(q, true);
                }
                Pauli::Z => row.set_z(q, true),
            }
        }
        row
    }

    #[inline]
    fn x_bit(&self, q: usize) -> bool {
        self.x[q / WORD_BITS] >> (q % WORD_BITS) & 1 == 1
    }

    #[inline]
    fn z_bit(&self, q: usize) -> bool {
        self.z[q / WORD_BITS] >> (q % WORD_BITS) & 1 == 1
    }

    fn set_x(&mut self, q: usize, v: bool) {
        let (w, b) = (q / WORD_BITS, q % WORD_BITS);
        if v {
            self.x[w] |= 1 << b;
        } else {
            self.x[w] &= !(1 << b);
        }
    }

    fn set_z(&mut self, q: usize, v: bool) {
        let (w, b) = (q / WORD_BITS, q % WORD_BITS);
        if v {
            self.z[w] |= 1 << b;
        } else {
            self.z[w] &= !(1 << b);
        }
    }

    pub fn letter(&self, q: usize) -> Pauli {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn sign_negative(&self) -> bool {
        self.neg
    }

    fn is_identity_pauli(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Symplectic commutation: true when the two Paulis commute.
    fn commutes(&self, other: &Self) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            parity ^= (self.x[w] & other.z[w]).count_ones() & 1;
            parity ^= (self.z[w] & other.x[w]).count_ones() & 1;
        }
        parity == 0
    }

    /// Operator product self * other; panics in debug if they anticommute.
    fn mul(&self, other: &Self, n: usize) -> Self {
        let mut m: i64 = 0;
        for q in 0..n {
            let (x1, z1) = (self.x_bit(q) as i64, self.z_bit(q) as i64);
            let (x2, z2) = (other.x_bit(q) as i64, other.z_bit(q) as i64);
            let (x3, z3) = (x1 ^ x2, z1 ^ z2);
            m += x1 * z1 + x2 * z2 - x3 * z3 + 2 * z1 * x2;
        }
        m += 2 * (self.neg as i64 + other.neg as i64);
        let m = m.rem_euclid(4);
        debug_assert!(m % 2 == 0, "rowsum of anticommuting Paulis");
        let w = self.x.len();
        let mut x = vec![0u64; w];
        let mut z = vec![0u64; w];
        for i in 0..w {
            x[i] = self.x[i] ^ other.x[i];
            z[i] = self.z[i] ^ other.z[i];
        }
        Self {
            x,
            z,
            neg: m == 2,
        }
    }
}

/// Stabilizer state on `n_qubits` qubits, held as `n_qubits` generator rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n_qubits: usize,
    rows: Vec<PauliRow>,
}

impl StabilizerTableau {
    /// Graph-state tableau: generator i is X on vertex i and Z on each
    /// neighbor, sign +.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n_vertices();
        let mut rows = Vec::with_capacity(n);
        for v in 0..n {
            let mut row = PauliRow::identity(n);
            row.set_x(v, true);
            for u in g.neighbors(v) {
                row.set_z(u, true);
            }
            rows.push(row);
        }
        let t = Self { n_qubits: n, rows };
        t.debug_validate();
        t
    }

    /// The all-zeros computational state: generator i is Z_i.
    pub fn zero_state(n: usize) -> Self {
        let rows = (0..n)
            .map(|q| PauliRow::from_letters(n, &[(q, Pauli::Z)]))
            .collect();
        Self { n_qubits: n, rows }
    }

    /// A Bell pair (|00> + |11>) / sqrt(2): generators XX and ZZ.
    pub fn bell_pair() -> Self {
        Self {
            n_qubits: 2,
            rows: vec![
                PauliRow::from_letters(2, &[(0, Pauli::X), (1, Pauli::X)]),
                PauliRow::from_letters(2, &[(0, Pauli::Z), (1, Pauli::Z)]),
            ],
        }
    }

    /// Tensor product; `other`'s qubits are appended after `self`'s.
    pub fn tensor(&self, other: &Self) -> Self {
        let n = self.n_qubits + other.n_qubits;
        let mut rows = Vec::with_capacity(n);
        for row in &self.rows {
            let mut r = PauliRow::identity(n);
            r.neg = row.neg;
            for q in 0..self.n_qubits {
                r.set_x(q, row.x_bit(q));
                r.set_z(q, row.z_bit(q));
            }
            rows.push(r);
        }
        for row in &other.rows {
            let mut r = PauliRow::identity(n);
            r.neg = row.neg;
            for q in 0..other.n_qubits {
                r.set_x(self.n_qubits + q, row.x_bit(q));
                r.set_z(self.n_qubits + q, row.z_bit(q));
            }
            rows.push(r);
        }
        Self { n_qubits: n, rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn rows(&self) -> &[PauliRow] {
        &self.rows
    }

    /// Conjugates every generator by a Clifford gate, returning the new
    /// tableau.
    pub fn apply_clifford(&self, gate: &CliffordGate) -> Result<Self> {
        let mut t = self.clone();
        t.apply_clifford_mut(gate)?;
        t.debug_validate();
        Ok(t)
    }

    fn apply_clifford_mut(&mut self, gate: &CliffordGate) -> Result<()> {
        let n = self.n_qubits;
        let check = |q: usize| -> Result<()> {
            if q >= n {
                return Err(Error::InvalidArgument(format!(
                    "target {q} out of range for {n} qubits"
                )));
            }
            Ok(())
        };
        match *gate {
            CliffordGate::H(q) => {
                check(q)?;
                for row in &mut self.rows {
                    let (x, z) = (row.x_bit(q), row.z_bit(q));
                    row.neg ^= x && z;
                    row.set_x(q, z);
                    row.set_z(q, x);
                }
            }
            CliffordGate::S(q) => {
                check(q)?;
                for row in &mut self.rows {
                    let (x, z) = (row.x_bit(q), row.z_bit(q));
                    row.neg ^= x && z;
                    row.set_z(q, x ^ z);
                }
            }
            CliffordGate::X(q) => {
                check(q)?;
                for row in &mut self.rows {
                    row.neg ^= row.z_bit(q);
                }
            }
            CliffordGate::Z(q) => {
                check(q)?;
                for row in &mut self.rows {
                    row.neg ^= row.x_bit(q);
                }
            }
            CliffordGate::Cz(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::InvalidArgument(
                        "CZ requires two distinct targets".into(),
                    ));
                }
                for row in &mut self.rows {
                    let (xa, za) = (row.x_bit(a), row.z_bit(a));
                    let (xb, zb) = (row.x_bit(b), row.z_bit(b));
                    row.neg ^= xa && xb && (za ^ zb);
                    row.set_z(a, za ^ xb);
                    row.set_z(b, zb ^ xa);
                }
            }
        }
        Ok(())
    }

    /// Entanglement entropy of `region` in bits, as an exact integer:
    /// |A| minus the GF(2) dimension of the stabilizer subgroup supported
    /// entirely inside A.
    pub fn entanglement_entropy(&self, region: &[usize]) -> usize {
        let n = self.n_qubits;
        for (i, &q) in region.iter().enumerate() {
            assert!(q < n, "region qubit {q} out of range");
            assert!(!region[..i].contains(&q), "duplicate region qubit {q}");
        }
        let complement: Vec<usize> = (0..n).filter(|q| !region.contains(q)).collect();
        // dim of the subgroup supported on A = n - rank(rows restricted to
        // the complement), so S(A) = |A| - n + rank.
        let rank = self.restricted_rank(&complement);
        region.len() + rank - n
    }

    /// GF(2) rank of the generator matrix restricted to `cols` (X and Z
    /// blocks side by side), via bit-packed elimination.
    fn restricted_rank(&self, cols: &[usize]) -> usize {
        let width = 2 * cols.len();
        let w = words_for(width.max(1));
        let mut packed: Vec<Vec<u64>> = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut bits = vec![0u64; w];
            for (i, &q) in cols.iter().enumerate() {
                if row.x_bit(q) {
                    bits[i / WORD_BITS] |= 1 << (i % WORD_BITS);
                }
                let j = cols.len() + i;
                if row.z_bit(q) {
                    bits[j / WORD_BITS] |= 1 << (j % WORD_BITS);
                }
            }
            packed.push(bits);
        }
        gf2_rank(&mut packed)
    }

    /// Projects qubits `a` and `b` onto the Bell state (|00> + |11>) / sqrt(2)
    /// by post-selecting X_a X_b and Z_a Z_b to +1, then removes both qubits.
    pub fn postselect_bell(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.n_qubits;
        if a == b {
            return Err(Error::InvalidArgument(
                "Bell post-selection requires two distinct qubits".into(),
            ));
        }
        if a >= n || b >= n {
            return Err(Error::InvalidArgument(format!(
                "qubits ({a}, {b}) out of range for {n} qubits"
            )));
        }
        let xx = PauliRow::from_letters(n, &[(a, Pauli::X), (b, Pauli::X)]);
        let zz = PauliRow::from_letters(n, &[(a, Pauli::Z), (b, Pauli::Z)]);

        let mut t = self.clone();
        t.force_measurement(&xx)
            .map_err(|_| Error::PostselectImpossible { a, b })?;
        t.force_measurement(&zz)
            .map_err(|_| Error::PostselectImpossible { a, b })?;

        // Both +XX and +ZZ are now in the group; make them explicit
        // generators and strip every other row's support on {a, b}.
        t.canonicalize();
        let used_xx = t.peel_membership(&xx)?;
        let used_zz = t.peel_membership(&zz)?;
        let (r_xx, r_zz) = pick_replacement_rows(&used_xx, &used_zz)?;
        t.rows[r_xx] = xx;
        t.rows[r_zz] = zz;
        for i in 0..t.rows.len() {
            if i == r_xx || i == r_zz {
                continue;
            }
            if t.rows[i].x_bit(a) {
                t.rows[i] = t.rows[i].mul(&t.rows[r_xx], n);
            }
            if t.rows[i].z_bit(a) {
                t.rows[i] = t.rows[i].mul(&t.rows[r_zz], n);
            }
            debug_assert!(
                !t.rows[i].x_bit(a)
                    && !t.rows[i].z_bit(a)
                    && !t.rows[i].x_bit(b)
                    && !t.rows[i].z_bit(b),
                "row {i} still supported on the post-selected pair"
            );
        }
        let out = t.drop_qubits(a, b, r_xx, r_zz);
        out.debug_validate();
        Ok(out)
    }

    /// Forces a measurement of `op` to outcome +1. Fails when -op is in the
    /// stabilizer group (the outcome would deterministically be -1).
    fn force_measurement(&mut self, op: &PauliRow) -> Result<()> {
        let anti: Vec<usize> = (0..self.rows.len())
            .filter(|&i| !self.rows[i].commutes(op))
            .collect();
        if let Some((&pivot, rest)) = anti.split_first() {
            for &i in rest {
                self.rows[i] = self.rows[i].mul(&self.rows[pivot], self.n_qubits);
            }
            self.rows[pivot] = op.clone();
            return Ok(());
        }
        // op commutes with every generator, so +op or -op is in the group
        let mut copy = self.clone();
        copy.canonicalize();
        let used = copy.peel_membership(op)?;
        let mut acc = PauliRow::identity(self.n_qubits);
        for &i in &used {
            acc = acc.mul(&copy.rows[i], self.n_qubits);
        }
        if acc.neg != op.neg {
            return Err(Error::Internal("deterministic -1 outcome".into()));
        }
        Ok(())
    }

    /// Expresses `op` (Pauli part) over the echelonized rows, returning the
    /// generator indices whose product is +-op. Requires `canonicalize` to
    /// have run.
    fn peel_membership(&self, op: &PauliRow) -> Result<Vec<usize>> {
        let n = self.n_qubits;
        let mut v = op.clone();
        v.neg = false;
        let mut used = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let Some(pivot) = row_pivot_col(row, n) else {
                continue;
            };
            if col_bit(&v, pivot, n) {
                v = v.mul(row, n);
                v.neg = false;
                used.push(i);
            }
        }
        if !v.is_identity_pauli() {
            return Err(Error::Internal(
                "operator is not in the stabilizer group".into(),
            ));
        }
        Ok(used)
    }

    /// Reduced row echelon form over the column order x_0..x_{n-1},
    /// z_0..z_{n-1}, with phase-tracked row operations. Deterministic; used
    /// for membership peeling and for stable serialization.
    pub fn canonicalize(&mut self) {
        let n = self.n_qubits;
        let mut r = 0usize;
        for col in 0..2 * n {
            let Some(pivot) = (r..self.rows.len()).find(|&i| col_bit(&self.rows[i], col, n))
            else {
                continue;
            };
            self.rows.swap(r, pivot);
            for i in 0..self.rows.len() {
                if i != r && col_bit(&self.rows[i], col, n) {
                    self.rows[i] = self.rows[i].mul(&self.rows[r], n);
                }
            }
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
    }

    /// Drops the two post-selected qubits and the two generators that were
    /// pinned to them.
    fn drop_qubits(&self, a: usize, b: usize, r1: usize, r2: usize) -> Self {
        let n = self.n_qubits;
        let keep_q: Vec<usize> = (0..n).filter(|&q| q != a && q != b).collect();
        let mut rows = Vec::with_capacity(self.rows.len().saturating_sub(2));
        for (i, row) in self.rows.iter().enumerate() {
            if i == r1 || i == r2 {
                continue;
            }
            let mut r = PauliRow::identity(keep_q.len().max(1));
            if keep_q.is_empty() {
                r = PauliRow {
                    x: vec![],
                    z: vec![],
                    neg: row.neg,
                };
            } else {
                r.neg = row.neg;
                for (new_q, &old_q) in keep_q.iter().enumerate() {
                    r.set_x(new_q, row.x_bit(old_q));
                    r.set_z(new_q, row.z_bit(old_q));
                }
            }
            rows.push(r);
        }
        Self {
            n_qubits: keep_q.len(),
            rows,
        }
    }

    /// Relabels qubits: new index of old qubit q is `perm[q]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_qubits;
        if perm.len() != n {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = PauliRow::identity(n);
            r.neg = row.neg;
            for (q, &target) in perm.iter().enumerate() {
                r.set_x(target, row.x_bit(q));
                r.set_z(target, row.z_bit(q));
            }
            rows.push(r);
        }
        Ok(Self {
            n_qubits: n,
            rows,
        })
    }

    /// Dense expansion of the stabilizer state, fixed to a positive real
    /// leading amplitude. Only for registers within the dense cap.
    pub fn to_statevector(&self) -> Result<StateVector> {
        let n = self.n_qubits;
        if n > MAX_STATE_QUBITS {
            return Err(Error::UnsupportedScale(format!(
                "{n} qubits exceeds the {MAX_STATE_QUBITS}-qubit dense cap"
            )));
        }
        let dim = 1usize << n;
        for seed in 0..dim {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[seed] = Complex64::new(1.0, 0.0);
            // project with (I + g)/2 for every generator
            for row in &self.rows {
                let applied = apply_row_dense(row, &amps, n);
                for (v, a) in amps.iter_mut().zip(applied) {
                    *v = (*v + a) * Complex64::new(0.5, 0.0);
                }
            }
            let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
            if norm_sq > 1e-9 {
                // fix global phase: first nonzero amplitude positive real
                let first = amps
                    .iter()
                    .find(|z| z.norm() > 1e-9)
                    .copied()
                    .unwrap_or(Complex64::new(1.0, 0.0));
                let phase = first / first.norm();
                for v in amps.iter_mut() {
                    *v /= phase;
                }
                let (state, _norm) = StateVector::from_raw(n, amps)?;
                return Ok(state);
            }
        }
        Err(Error::Internal(
            "stabilizer state has no support on any basis vector".into(),
        ))
    }

    /// One generator per line in Pauli-string notation, e.g. "+XZIIII".
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push(if row.neg { '-' } else { '+' });
            for q in 0..self.n_qubits {
                out.push_str(&row.letter(q).to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Structural invariants: mutual commutation, full GF(2) rank, no
    /// identity rows.
    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.n_qubits {
            return Err(Error::Validation(format!(
                "{} generators for {} qubits",
                self.rows.len(),
                self.n_qubits
            )));
        }
        for i in 0..self.rows.len() {
            if self.rows[i].is_identity_pauli() {
                return Err(Error::Validation(format!("generator {i} is the identity")));
            }
            for j in 0..i {
                if !self.rows[i].commutes(&self.rows[j]) {
                    return Err(Error::Validation(format!(
                        "generators {j} and {i} anticommute"
                    )));
                }
            }
        }
        let all: Vec<usize> = (0..self.n_qubits).collect();
        if self.restricted_rank(&all) != self.n_qubits {
            return Err(Error::Validation("generators are GF(2)-dependent".into()));
        }
        Ok(())
    }

    fn debug_validate(&self) {
        debug_assert!(self.validate().is_ok(), "tableau invariants violated");
    }
}

/// A gate from the Clifford subset the tableau backend accepts.
#[derive(Clone, Debug, PartialEq)]
pub enum CliffordGate {
    H(usize),
    Cz(usize, usize),
    S(usize),
    X(usize),
    Z(usize),
}

impl TryFrom<&Gate> for CliffordGate {
    type Error = Error;

    fn try_from(gate: &Gate) -> Result<Self> {
        match *gate {
            Gate::H(q) => Ok(CliffordGate::H(q)),
            Gate::Cz(a, b) => Ok(CliffordGate::Cz(a, b)),
            Gate::Rx(..) | Gate::Ry(..) | Gate::Rz(..) => Err(Error::InvalidArgument(format!(
                "{} is not in the tableau Clifford gate set",
                gate.kind_name()
            ))),
        }
    }
}

/// Column accessor in the canonical x-block-then-z-block ordering.
fn col_bit(row: &PauliRow, col: usize, n: usize) -> bool {
    if col < n {
        row.x_bit(col)
    } else {
        row.z_bit(col - n)
    }
}

fn row_pivot_col(row: &PauliRow, n: usize) -> Option<usize> {
    (0..2 * n).find(|&c| col_bit(row, c, n))
}

/// In-place GF(2) rank of packed bit rows.
fn gf2_rank(rows: &mut [Vec<u64>]) -> usize {
    let mut rank = 0usize;
    let width = rows.first().map_or(0, |r| r.len() * WORD_BITS);
    for col in 0..width {
        let (w, b) = (col / WORD_BITS, col % WORD_BITS);
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] >> b & 1 == 1 {
                for (r, p) in row.iter_mut().zip(&pivot_row) {
                    *r ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Chooses distinct generator slots for the two Bell stabilizers so that the
/// replaced rows stay recoverable from the new generating set.
fn pick_replacement_rows(used_xx: &[usize], used_zz: &[usize]) -> Result<(usize, usize)> {
    let only_xx: Vec<usize> = used_xx
        .iter()
        .copied()
        .filter(|i| !used_zz.contains(i))
        .collect();
    let only_zz: Vec<usize> = used_zz
        .iter()
        .copied()
        .filter(|i| !used_xx.contains(i))
        .collect();
    if let Some(&r1) = only_xx.first() {
        let r2 = used_zz
            .iter()
            .copied()
            .find(|&i| i != r1)
            .ok_or_else(|| Error::Internal("empty ZZ combination".into()))?;
        Ok((r1, r2))
    } else if let Some(&r2) = only_zz.first() {
        let r1 = used_xx
            .iter()
            .copied()
            .find(|&i| i != r2)
            .ok_or_else(|| Error::Internal("empty XX combination".into()))?;
        Ok((r1, r2))
    } else {
        Err(Error::Internal(
            "XX and ZZ peel to the same generator combination".into(),
        ))
    }
}

/// Dense action of a Pauli row on an amplitude vector.
fn apply_row_dense(row: &PauliRow, amps: &[Complex64], n: usize) -> Vec<Complex64> {
    let dim = amps.len();
    // bit position of qubit q in a basis index is (n - 1 - q)
    let mut flip_mask = 0usize;
    let mut z_mask = 0usize;
    let mut y_count = 0u32;
    for q in 0..n {
        if row.x_bit(q) {
            flip_mask |= 1 << (n - 1 - q);
        }
        if row.z_bit(q) {
            z_mask |= 1 << (n - 1 - q);
        }
        if row.x_bit(q) && row.z_bit(q) {
            y_count += 1;
        }
    }
    let i_pow = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let base_phase = i_pow[(y_count % 4) as usize]
        * if row.neg {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (b, &amp) in amps.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let sign = if (b & z_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        out[b ^ flip_mask] += base_phase * Complex64::new(sign, 0.0) * amp;
    }
    out
}
