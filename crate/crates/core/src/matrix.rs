//! Dense complex matrices, unitaries and state vectors.
//!
//! Qubit 1 is the most significant bit of a basis index. A gate applied at
//! offset `k` acts on qubits `k+1 ..= k+n`, i.e. as `I(k) ⊗ U ⊗ I(rest)`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Unitarity tolerance used when constructing gates and registers.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Tolerance for end-to-end equalities between independently computed results.
pub const EQUALITY_TOL: f64 = 1e-8;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not unitary (|M*M - I|_F = {0:e})")]
    NotUnitary(f64),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("gate on {qubits} qubit(s) at offset {offset} does not fit a {size}-qubit register")]
    OutOfRange { qubits: usize, offset: usize, size: usize },
    #[error("state vector is not normalised (norm {0})")]
    NotNormalised(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, MatrixError> {
        if rows * cols != entries.len() {
            return Err(MatrixError::Dimension(format!("{rows}x{cols} matrix given {} entries", entries.len())));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, MatrixError> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<C64>> {
        self.entries.chunks(self.cols.max(1)).map(<[C64]>::to_vec).collect()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` is the high-order factor.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.entries[(i * other.rows + k) * cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Frobenius norm of `M*M - I`.
    pub fn unitarity_defect(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                sum += acc.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Largest entry-wise modulus difference.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::Dimension(format!(
                "comparing {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// True iff every entry differs by at most `tol` in modulus.
pub fn approx_equal(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool, MatrixError> {
    Ok(a.max_abs_diff(b)? <= tol)
}

fn log2_exact(dim: usize) -> Option<usize> {
    (dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// A `2^n x 2^n` matrix that passed the unitarity check.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, MatrixError> {
        if matrix.rows != matrix.cols {
            return Err(MatrixError::Dimension(format!(
                "gate matrix must be square, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let qubits = log2_exact(matrix.rows).ok_or(MatrixError::NotPowerOfTwo(matrix.rows))?;
        let defect = matrix.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(MatrixError::NotUnitary(defect));
        }
        Ok(UnitaryMatrix { qubits, matrix })
    }

    pub fn identity(qubits: usize) -> Self {
        UnitaryMatrix { qubits, matrix: ComplexMatrix::identity(1 << qubits) }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `self · other`: apply `other` first, then `self`.
    pub fn matmul(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix, MatrixError> {
        UnitaryMatrix::new(self.matrix.matmul(&other.matrix)?)
    }

    /// `self ⊗ other`; `self` acts on the lower-numbered qubits.
    pub fn tensor(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix { qubits: self.qubits + other.qubits, matrix: self.matrix.kron(&other.matrix) }
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix { qubits: self.qubits, matrix: self.matrix.adjoint() }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.matrix.max_abs_diff(&ComplexMatrix::identity(self.dim())).is_ok_and(|d| d <= tol)
    }

    /// Applies `I(offset) ⊗ self ⊗ I(rest)` to the columns of `m` in place.
    pub fn apply_to_columns(&self, m: &mut ComplexMatrix, offset: usize) -> Result<(), MatrixError> {
        let size = log2_exact(m.rows).ok_or(MatrixError::NotPowerOfTwo(m.rows))?;
        check_fit(self.qubits, offset, size)?;
        let mut column = vec![C64::new(0.0, 0.0); m.rows];
        for c in 0..m.cols {
            for (r, z) in column.iter_mut().enumerate() {
                *z = m.get(r, c);
            }
            apply_in_place(self, &mut column, size, offset);
            for (r, z) in column.iter().enumerate() {
                m.set(r, c, *z);
            }
        }
        Ok(())
    }
}

fn check_fit(qubits: usize, offset: usize, size: usize) -> Result<(), MatrixError> {
    if offset + qubits > size {
        Err(MatrixError::OutOfRange { qubits, offset, size })
    } else {
        Ok(())
    }
}

fn apply_in_place(u: &UnitaryMatrix, amps: &mut [C64], size: usize, offset: usize) {
    let k = u.qubits;
    let low_bits = size - offset - k;
    let block = 1usize << k;
    let low = 1usize << low_bits;
    let high = 1usize << offset;
    let mut scratch = vec![C64::new(0.0, 0.0); block];
    for h in 0..high {
        for l in 0..low {
            let base = (h << (k + low_bits)) | l;
            for (m, s) in scratch.iter_mut().enumerate() {
                *s = amps[base | (m << low_bits)];
            }
            for r in 0..block {
                let mut acc = C64::new(0.0, 0.0);
                for (c, s) in scratch.iter().enumerate() {
                    acc += u.matrix.get(r, c) * s;
                }
                amps[base | (r << low_bits)] = acc;
            }
        }
    }
}

/// Register of `2^n` amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self, MatrixError> {
        let qubits = log2_exact(amplitudes.len()).ok_or(MatrixError::NotPowerOfTwo(amplitudes.len()))?;
        Ok(StateVector { qubits, amplitudes })
    }

    /// Like [`StateVector::new`] but also insists on unit norm.
    pub fn normalised(amplitudes: Vec<C64>) -> Result<Self, MatrixError> {
        let v = Self::new(amplitudes)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > UNITARITY_TOL {
            return Err(MatrixError::NotNormalised(norm));
        }
        Ok(v)
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { qubits, amplitudes }
    }

    /// Parses a basis label such as `|010>` or `|010⟩`; qubit 1 is leftmost.
    pub fn from_label(label: &str) -> Option<Self> {
        let inner = label.trim().strip_prefix('|')?;
        let bits = inner.strip_suffix('>').or_else(|| inner.strip_suffix('⟩'))?;
        if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
            return None;
        }
        let index = usize::from_str_radix(bits, 2).ok()?;
        Some(Self::basis(bits.len(), index))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.qubits != other.qubits {
            return f64::INFINITY;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<StateVector, MatrixError> {
        if m.cols != self.amplitudes.len() || m.rows != m.cols {
            return Err(MatrixError::Dimension(format!(
                "{}x{} matrix on {}-amplitude register",
                m.rows,
                m.cols,
                self.amplitudes.len()
            )));
        }
        let amplitudes = (0..m.rows).map(|r| (0..m.cols).map(|c| m.get(r, c) * self.amplitudes[c]).sum()).collect();
        Ok(StateVector { qubits: self.qubits, amplitudes })
    }
}

/// Applies `u` to qubits `offset+1 ..= offset+u.qubits()` of `register`
/// without building the full operator.
pub fn apply_at(u: &UnitaryMatrix, register: &StateVector, offset: usize) -> Result<StateVector, MatrixError> {
    check_fit(u.qubits, offset, register.qubits)?;
    let mut out = register.clone();
    apply_in_place(u, &mut out.amplitudes, register.qubits, offset);
    Ok(out)
}

/// The fixed gate library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateName {
    Identity(usize),
    H,
    X,
    Y,
    Z,
    S,
    T,
    Cnot,
    Swap,
}

impl GateName {
    pub fn parse(s: &str) -> Option<GateName> {
        Some(match s {
            "H" => GateName::H,
            "X" => GateName::X,
            "Y" => GateName::Y,
            "Z" => GateName::Z,
            "S" => GateName::S,
            "T" => GateName::T,
            "CNOT" => GateName::Cnot,
            "SWAP" => GateName::Swap,
            _ => {
                let n: usize = s.strip_prefix('I')?.parse().ok()?;
                if n == 0 || n > 16 {
                    return None;
                }
                GateName::Identity(n)
            }
        })
    }

    pub fn qubits(self) -> usize {
        match self {
            GateName::Identity(n) => n,
            GateName::Cnot | GateName::Swap => 2,
            _ => 1,
        }
    }

    pub fn unitary(self) -> UnitaryMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| C64::new(re, im);
        let entries: Vec<C64> = match self {
            GateName::Identity(n) => return UnitaryMatrix::identity(n),
            GateName::H => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
            GateName::X => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            GateName::Y => vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
            GateName::Z => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
            GateName::S => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
            GateName::T => {
                vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]
            }
            GateName::Cnot => {
                let mut m = vec![c(0.0, 0.0); 16];
                m[0] = c(1.0, 0.0);
                m[5] = c(1.0, 0.0);
                m[11] = c(1.0, 0.0);
                m[14] = c(1.0, 0.0);
                m
            }
            GateName::Swap => {
                let mut m = vec![c(0.0, 0.0); 16];
                m[0] = c(1.0, 0.0);
                m[6] = c(1.0, 0.0);
                m[9] = c(1.0, 0.0);
                m[15] = c(1.0, 0.0);
                m
            }
        };
        let dim = 1 << self.qubits();
        let matrix = ComplexMatrix::new(dim, dim, entries).expect("library gate shape");
        UnitaryMatrix::new(matrix).expect("library gate is unitary")
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::Identity(n) => write!(f, "I{n}"),
            GateName::H => write!(f, "H"),
            GateName::X => write!(f, "X"),
            GateName::Y => write!(f, "Y"),
            GateName::Z => write!(f, "Z"),
            GateName::S => write!(f, "S"),
            GateName::T => write!(f, "T"),
            GateName::Cnot => write!(f, "CNOT"),
            GateName::Swap => write!(f, "SWAP"),
        }
    }
}

/// A unitary annotation, remembering its library name when it has one.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    name: Option<GateName>,
    unitary: UnitaryMatrix,
}

impl Gate {
    pub fn named(name: GateName) -> Gate {
        Gate { name: Some(name), unitary: name.unitary() }
    }

    pub fn raw(unitary: UnitaryMatrix) -> Gate {
        Gate { name: None, unitary }
    }

    pub fn identity(qubits: usize) -> Gate {
        Gate::named(GateName::Identity(qubits))
    }

    pub fn name(&self) -> Option<GateName> {
        self.name
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    pub fn qubits(&self) -> usize {
        self.unitary.qubits
    }
}

impl From<GateName> for Gate {
    fn from(name: GateName) -> Gate {
        Gate::named(name)
    }
}

/// Formats a float with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        // normalise -0.0
        return format!("{:.16e}", 0.0f64);
    }
    format!("{x:.16e}")
}

/// JSON rows of `[re, im]` pairs, 17 significant digits, row-major.
pub fn matrix_json(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = m
        .row_vecs()
        .iter()
        .map(|row| {
            let cells: Vec<String> =
                row.iter().map(|z| format!("[{},{}]", format_f64(z.re), format_f64(z.im))).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(",\n "))
}

pub fn amplitudes_json(v: &StateVector) -> String {
    let cells: Vec<String> =
        v.amplitudes.iter().map(|z| format!("[{},{}]", format_f64(z.re), format_f64(z.im))).collect();
    format!("[{}]", cells.join(","))
}

/// Reads a matrix from JSON rows of `[re, im]` pairs.
pub fn matrix_from_json(value: &serde_json::Value) -> Result<ComplexMatrix, MatrixError> {
    let bad = || MatrixError::Dimension("expected rows of [re, im] pairs".into());
    let rows = value.as_array().ok_or_else(bad)?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row.as_array().ok_or_else(bad)?;
        out.push(cells.iter().map(|c| complex_from_json(c).ok_or_else(bad)).collect::<Result<Vec<_>, _>>()?);
    }
    ComplexMatrix::from_rows(out)
}

pub fn complex_from_json(value: &serde_json::Value) -> Option<C64> {
    match value.as_array()?.as_slice() {
        [re, im] => Some(C64::new(re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, rows, entries).unwrap()
    }

    fn h() -> UnitaryMatrix {
        GateName::H.unitary()
    }

    #[test]
    fn matmul_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert!(approx_equal(&i2.matmul(h().matrix()).unwrap(), h().matrix(), 0.0).unwrap());
        let hh = h().matrix().matmul(h().matrix()).unwrap();
        assert!(approx_equal(&hh, &i2, 1e-12).unwrap());
        assert!(!approx_equal(h().matrix(), &i2, 1e-12).unwrap());
        // Z·X = [[0,1],[-1,0]]
        let zx = GateName::Z.unitary().matrix().matmul(GateName::X.unitary().matrix()).unwrap();
        assert_eq!(zx, real(2, &[0.0, 1.0, -1.0, 0.0]));
    }

    #[test]
    fn matmul_rejects_mismatched_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert!(approx_equal(&a, &ComplexMatrix::zeros(3, 2), 0.1).is_err());
    }

    #[test]
    fn tensor_examples() {
        let i1 = UnitaryMatrix::identity(1);
        assert_eq!(i1.tensor(&i1), UnitaryMatrix::identity(2));
        let hi = h().tensor(&i1);
        let out = apply_at(&hi, &StateVector::basis(2, 0), 0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected =
            StateVector::new(vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(h().adjoint(), h());
        let s_dag = GateName::S.unitary().adjoint();
        let expected = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        )
        .unwrap();
        assert_eq!(s_dag.matrix(), &expected);
        let t = GateName::T.unitary();
        assert!(t.matmul(&t.adjoint()).unwrap().is_identity(UNITARITY_TOL));
    }

    #[test]
    fn apply_at_hadamard_on_second_qubit() {
        let out = apply_at(&h(), &StateVector::basis(3, 0), 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |000> and |010>
        assert!((out.amplitudes()[0b000].re - s).abs() < 1e-15);
        assert!((out.amplitudes()[0b010].re - s).abs() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
        assert!(apply_at(&h(), &StateVector::basis(3, 0), 3).is_err());
        assert!(apply_at(&GateName::Cnot.unitary(), &StateVector::basis(3, 0), 2).is_err());
    }

    #[test]
    fn identity_application_is_noop() {
        let v = apply_at(&h(), &StateVector::basis(3, 5), 0).unwrap();
        for k in 0..3 {
            assert_eq!(apply_at(&UnitaryMatrix::identity(1), &v, k).unwrap(), v);
        }
    }

    #[test]
    fn unitary_constructor_rejects_bad_input() {
        assert!(matches!(UnitaryMatrix::new(real(2, &[1.0, 1.0, 0.0, 1.0])), Err(MatrixError::NotUnitary(_))));
        assert!(matches!(UnitaryMatrix::new(ComplexMatrix::identity(3)), Err(MatrixError::NotPowerOfTwo(3))));
        assert!(UnitaryMatrix::new(ComplexMatrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn library_names_round_trip() {
        for name in ["I1", "I3", "H", "X", "Y", "Z", "S", "T", "CNOT", "SWAP"] {
            assert_eq!(GateName::parse(name).unwrap().to_string(), name);
        }
        assert_eq!(GateName::parse("I0"), None);
        assert_eq!(GateName::parse("Q"), None);
    }

    #[test]
    fn basis_labels() {
        let v = StateVector::from_label("|010>").unwrap();
        assert_eq!(v.qubits(), 3);
        assert_eq!(v.amplitudes()[2], C64::new(1.0, 0.0));
        assert!(StateVector::from_label("|012>").is_none());
        assert!(StateVector::from_label("|1⟩").is_some());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let m = GateName::T.unitary().matrix().matmul(h().matrix()).unwrap();
        let text = matrix_json(&m);
        let back = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
