//! Exact (ℤ[ω]/√2^L) and floating-point state-vector simulators.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate1Q, Op, Pauli};
use crate::error::Error;
use crate::ring::{sqrt2_pow, CyclotomicInt, RingUnitary, Root2Int};

/// State `amps / √2^L` on `n` qubits, qubit 0 the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingState {
    pub n_qubits: usize,
    pub amps: Vec<CyclotomicInt>,
    pub denom_exp: u32,
}

fn bit_of(q: usize, n: usize) -> usize {
    1 << (n - 1 - q)
}

impl RingState {
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![CyclotomicInt::zero(); 1 << n_qubits];
        amps[index] = CyclotomicInt::one();
        RingState { n_qubits, amps, denom_exp: 0 }
    }

    pub fn new(n_qubits: usize, amps: Vec<CyclotomicInt>, denom_exp: u32) -> Result<Self, Error> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::Shape(format!("{} amplitudes for {n_qubits} qubits", amps.len())));
        }
        let mut s = RingState { n_qubits, amps, denom_exp };
        s.reduce();
        Ok(s)
    }

    /// Σ|amp|² (numerator over 2^L).
    pub fn norm_squared(&self) -> Root2Int {
        self.amps.iter().fold(Root2Int::zero(), |acc, a| &acc + &a.abs_squared())
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_squared() == Root2Int::from_int(num_bigint::BigInt::from(1) << self.denom_exp)
    }

    fn reduce(&mut self) {
        while self.denom_exp > 0 && self.amps.iter().all(|a| a.divisible_by_sqrt2()) {
            for a in self.amps.iter_mut() {
                *a = a.div_sqrt2().expect("checked");
            }
            self.denom_exp -= 1;
        }
    }

    pub fn apply_gate(&mut self, q: usize, g: Gate1Q) {
        let m = g.matrix();
        let e = m.entries();
        let bit = bit_of(q, self.n_qubits);
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (&self.amps[i], &self.amps[i | bit]);
            let n0 = &(&e[0] * a0) + &(&e[1] * a1);
            let n1 = &(&e[2] * a0) + &(&e[3] * a1);
            self.amps[i] = n0;
            self.amps[i | bit] = n1;
        }
        self.denom_exp += m.denom_exp();
        self.reduce();
    }

    pub fn apply_controlled(&mut self, c: usize, t: usize, p: Pauli) {
        let cb = bit_of(c, self.n_qubits);
        let tb = bit_of(t, self.n_qubits);
        let i_unit = CyclotomicInt::i();
        for i in 0..self.amps.len() {
            if i & cb == 0 || i & tb != 0 {
                continue;
            }
            let j = i | tb;
            match p {
                Pauli::I => {}
                Pauli::X => self.amps.swap(i, j),
                Pauli::Z => self.amps[j] = -&self.amps[j],
                Pauli::Y => {
                    // Y = [[0, −i], [i, 0]]
                    let a0 = self.amps[i].clone();
                    let a1 = self.amps[j].clone();
                    self.amps[i] = -(&i_unit * &a1);
                    self.amps[j] = &i_unit * &a0;
                }
            }
        }
    }

    pub fn apply(&mut self, op: &Op) -> Result<(), Error> {
        match *op {
            Op::Single { q, g } if q < self.n_qubits => self.apply_gate(q, g),
            Op::Controlled { c, t, p } if c < self.n_qubits && t < self.n_qubits && c != t => self.apply_controlled(c, t, p),
            _ => return Err(Error::Shape(format!("operation {op:?} on {} qubits", self.n_qubits))),
        }
        Ok(())
    }

    /// Unnormalised projection onto `qubit = value` (denominator unchanged).
    pub fn project(&self, qubit: usize, value: bool) -> RingState {
        let bit = bit_of(qubit, self.n_qubits);
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| if (i & bit != 0) == value { a.clone() } else { CyclotomicInt::zero() })
            .collect();
        RingState { n_qubits: self.n_qubits, amps, denom_exp: self.denom_exp }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        let s = 2f64.powf(-(self.denom_exp as f64) / 2.0);
        self.amps.iter().map(|a| a.complex_value() * s).collect()
    }
}

pub fn simulate_exact(c: &Circuit, input: &RingState) -> Result<RingState, Error> {
    if c.n_qubits != input.n_qubits {
        return Err(Error::Shape(format!("{}-qubit circuit on {}-qubit state", c.n_qubits, input.n_qubits)));
    }
    let mut s = input.clone();
    for op in &c.ops {
        s.apply(op)?;
    }
    Ok(s)
}

/// Exact unitary of an n-qubit circuit, column by column.
pub fn circuit_unitary(c: &Circuit) -> Result<RingUnitary, Error> {
    let dim = 1usize << c.n_qubits;
    let cols: Vec<RingState> = (0..dim).map(|j| simulate_exact(c, &RingState::basis(c.n_qubits, j))).collect::<Result<_, _>>()?;
    let l = cols.iter().map(|s| s.denom_exp).max().unwrap_or(0);
    let mut entries = vec![CyclotomicInt::zero(); dim * dim];
    for (j, s) in cols.iter().enumerate() {
        let f = sqrt2_pow(l - s.denom_exp);
        for (i, a) in s.amps.iter().enumerate() {
            entries[i * dim + j] = a * &f;
        }
    }
    RingUnitary::new(dim, entries, l)
}

pub fn gate_complex(g: Gate1Q) -> [Complex64; 4] {
    let v = g.matrix().to_complex();
    [v[0], v[1], v[2], v[3]]
}

pub fn simulate_float(c: &Circuit, input: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let n = c.n_qubits;
    if input.len() != 1 << n {
        return Err(Error::Shape(format!("{} amplitudes for {n} qubits", input.len())));
    }
    let mut s = input.to_vec();
    for op in &c.ops {
        match *op {
            Op::Single { q, g } => {
                let m = gate_complex(g);
                let bit = bit_of(q, n);
                for i in 0..s.len() {
                    if i & bit == 0 {
                        let (a0, a1) = (s[i], s[i | bit]);
                        s[i] = m[0] * a0 + m[1] * a1;
                        s[i | bit] = m[2] * a0 + m[3] * a1;
                    }
                }
            }
            Op::Controlled { c, t, p } => {
                let m = match p {
                    Pauli::I => continue,
                    p => gate_complex(p.gate().expect("non-identity")),
                };
                let (cb, tb) = (bit_of(c, n), bit_of(t, n));
                for i in 0..s.len() {
                    if i & cb != 0 && i & tb == 0 {
                        let (a0, a1) = (s[i], s[i | tb]);
                        s[i] = m[0] * a0 + m[1] * a1;
                        s[i | tb] = m[2] * a0 + m[3] * a1;
                    }
                }
            }
        }
    }
    Ok(s)
}

/// Row-major 2×2 complex matrix.
pub type C2 = [Complex64; 4];

pub fn is_unitary_c2(u: &C2, tol: f64) -> bool {
    let (a, b, c, d) = (u[0], u[1], u[2], u[3]);
    let r00 = a.norm_sqr() + b.norm_sqr() - 1.0;
    let r11 = c.norm_sqr() + d.norm_sqr() - 1.0;
    let r01 = a * c.conj() + b * d.conj();
    r00.abs() < tol && r11.abs() < tol && r01.norm() < tol
}

/// `d(U,V) = sqrt(1 − |tr(U†V)|/2)`, evaluated without cancellation:
/// for W = U†V, `1 − |tr W/2|² = |W00 − W11|²/4 + (|W01|² + |W10|²)/2`.
pub fn distance(u: &C2, v: &C2) -> Result<f64, Error> {
    if !is_unitary_c2(u, 1e-12) || !is_unitary_c2(v, 1e-12) {
        return Err(Error::NotUnitary);
    }
    let w00 = u[0].conj() * v[0] + u[2].conj() * v[2];
    let w01 = u[0].conj() * v[1] + u[2].conj() * v[3];
    let w10 = u[1].conj() * v[0] + u[3].conj() * v[2];
    let w11 = u[1].conj() * v[1] + u[3].conj() * v[3];
    let t = ((w00 + w11) / 2.0).norm().min(1.0);
    let one_minus_t2 = (w00 - w11).norm_sqr() / 4.0 + (w01.norm_sqr() + w10.norm_sqr()) / 2.0;
    Ok((one_minus_t2 / (1.0 + t)).max(0.0).sqrt().min(1.0))
}

/// `R_z(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> C2 {
    let z = Complex64::new(0.0, 0.0);
    [Complex64::from_polar(1.0, -theta / 2.0), z, z, Complex64::from_polar(1.0, theta / 2.0)]
}
