//! Jack-of-Daggers at low T-depth: a Bell pair absorbs V†⊗V (or V⊗V) so the
//! data qubit sees V or V† with only two controlled swaps around one layer.

use crate::circuit::{Circuit, Gate1Q, Pauli};
use crate::error::Error;
use crate::ring::RingUnitary;
use crate::synth1q::exact_synthesize;

/// CCZ from its phase polynomial: 7 T gates in three layers.
fn ccz(c: &mut Circuit, a: usize, b: usize, t: usize) {
    use Gate1Q::{Tdg, T};
    for q in [a, b, t] {
        c.single(q, T);
    }
    // wires: a = x⊕y⊕z, b = x⊕y, t = y⊕z
    c.cnot(b, t);
    c.cnot(a, b);
    c.cnot(t, a);
    c.single(a, T);
    c.single(b, Tdg);
    c.single(t, Tdg);
    // b = x⊕z
    c.cnot(t, b);
    c.single(b, Tdg);
    c.cnot(t, b);
    c.cnot(t, a);
    c.cnot(a, b);
    c.cnot(b, t);
}

/// Toffoli with controls `a`, `b` and target `t`: 7 T gates, T-depth 3.
pub fn toffoli_circuit(n_qubits: usize, a: usize, b: usize, t: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    c.single(t, Gate1Q::H);
    ccz(&mut c, a, b, t);
    c.single(t, Gate1Q::H);
    c
}

/// Swap `a` and `b` when `ctl` is set.
pub fn cswap_circuit(n_qubits: usize, ctl: usize, a: usize, b: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits);
    c.cnot(b, a);
    c.extend(&toffoli_circuit(n_qubits, ctl, a, b));
    c.cnot(b, a);
    c
}

/// |b⟩|ψ⟩|00⟩ ↦ |b⟩ V^{(−1)^b}|ψ⟩ |00⟩ on four qubits (control, data, two ancillas).
///
/// Needs V = [[z, y], [−y*, z]] with z real, so that V†⊗V fixes |Ψ+⟩ while
/// V⊗V fixes |Ψ−⟩ for any V of determinant one.
pub fn build_low_depth_jod(v: &RingUnitary) -> Result<Circuit, Error> {
    if v.dim() != 2 {
        return Err(Error::Shape(format!("{0}x{0} is not single-qubit", v.dim())));
    }
    let (z, y) = (v.get(0, 0), v.get(0, 1));
    if *v.get(1, 0) != -y.conj() || *v.get(1, 1) != z.conj() || z.conj() != *z {
        return Err(Error::NotInSxy);
    }
    let body = exact_synthesize(v)?;
    let (b, d, a1, a2) = (0, 1, 2, 3);
    let mut prep = Circuit::new(4);
    prep.single(a1, Gate1Q::H);
    prep.single(a2, Gate1Q::X);
    prep.cnot(a1, a2);
    prep.controlled(b, a1, Pauli::Z);

    let mut c = prep.clone();
    let sw = cswap_circuit(4, b, d, a1);
    c.extend(&sw);
    c.gates_on(d, &body);
    c.gates_on(a1, &body.inverse());
    c.gates_on(a2, &body);
    c.extend(&sw);
    c.extend(&prep.inverse());
    Ok(c)
}
