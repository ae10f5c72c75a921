//! Controlled-Clifford gadgets. Every Λ(g) is assembled as
//! `g = ω^s · Q₁ · A h A† · Q₂` with Paulis Q, a Clifford A and a core
//! h ∈ {Id, ω⁻¹S, H, ω⁻¹SH, ω⁻¹HS}; the cores cost 0, 2, 2, 4, 4 T gates.

use std::sync::OnceLock;

use crate::circuit::{Circuit, Circuit1, Gate1Q, Pauli};
use crate::ring::{CyclotomicInt, RingUnitary};
use crate::synth1q::Clifford;

pub const CONTROL: usize = 0;
pub const ANCILLA: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Core {
    Id,
    WS,
    H,
    WSH,
    WHS,
}

impl Core {
    pub const ALL: [Core; 5] = [Core::Id, Core::WS, Core::H, Core::WSH, Core::WHS];

    pub fn t_cost(self) -> usize {
        match self {
            Core::Id => 0,
            Core::WS | Core::H => 2,
            Core::WSH | Core::WHS => 4,
        }
    }

    pub fn clifford(self) -> Clifford {
        let ws = Clifford::omega_pow(-1).mul(Clifford::s_pow(1));
        match self {
            Core::Id => Clifford::ID,
            Core::WS => ws,
            Core::H => Clifford::h(),
            Core::WSH => ws.mul(Clifford::h()),
            Core::WHS => Clifford::h().mul(ws),
        }
    }

    /// Gadget for Λ(h) with control 0, target 1 (application order).
    pub fn circuit(self) -> Circuit {
        let mut c = Circuit::new(2);
        match self {
            Core::Id => {}
            Core::WS => c.extend(&lambda_ws()),
            Core::H => c.extend(&lambda_h()),
            // matrix order ω⁻¹S · H: Λ(H) acts first
            Core::WSH => {
                c.extend(&lambda_h());
                c.extend(&lambda_ws());
            }
            Core::WHS => {
                c.extend(&lambda_ws());
                c.extend(&lambda_h());
            }
        }
        c
    }
}

/// Λ(ω⁻¹S): on the control-1 block, X T† X T = diag(ω⁻¹, ω).
fn lambda_ws() -> Circuit {
    let mut c = Circuit::new(2);
    c.single(ANCILLA, Gate1Q::T);
    c.cnot(CONTROL, ANCILLA);
    c.single(ANCILLA, Gate1Q::Tdg);
    c.cnot(CONTROL, ANCILLA);
    c
}

/// A single-T circuit A with A·X·A† = H, found by search.
fn h_conjugator() -> &'static Circuit1 {
    static A: OnceLock<Circuit1> = OnceLock::new();
    A.get_or_init(|| {
        let x = Pauli::X.matrix();
        let h = Gate1Q::H.matrix();
        let t = Gate1Q::T.matrix();
        let mut best: Option<Circuit1> = None;
        for c1 in Clifford::all() {
            for c2 in Clifford::all() {
                let a = c1.matrix().dot(&t).dot(c2.matrix());
                if a.dot(&x).dot(&a.adjoint()) == h {
                    let mut gates = c2.circuit().0;
                    gates.push(Gate1Q::T);
                    gates.extend(c1.circuit().0);
                    let cand = Circuit1::new(gates.into_iter().filter(|g| !matches!(g, Gate1Q::W(_))).collect());
                    if best.as_ref().map_or(true, |b| cand.0.len() < b.0.len()) && cand.matrix().dot(&x).dot(&cand.matrix().adjoint()) == h {
                        best = Some(cand);
                    }
                }
            }
        }
        best.expect("H is conjugate to X by a T-count-1 unitary")
    })
}

/// Λ(H) = (Id⊗A) · CNOT · (Id⊗A†).
fn lambda_h() -> Circuit {
    let a = h_conjugator();
    let mut c = Circuit::new(2);
    c.gates_on(ANCILLA, &a.inverse());
    c.cnot(CONTROL, ANCILLA);
    c.gates_on(ANCILLA, a);
    c
}

/// Decomposition `g = ω^s · Q₁ · A h A† · Q₂`.
#[derive(Clone, Copy, Debug)]
pub struct ControlledPlan {
    pub s: i64,
    pub q1: Pauli,
    pub a: Clifford,
    pub core: Core,
    pub q2: Pauli,
}

impl ControlledPlan {
    pub fn t_cost(&self) -> usize {
        self.core.t_cost() + (self.s.rem_euclid(2) as usize)
    }

    /// Λ(g) with g on the ancilla, controlled by qubit 0 (application order).
    pub fn circuit(&self) -> Circuit {
        let mut c = Circuit::new(2);
        c.controlled(CONTROL, ANCILLA, self.q2);
        if self.core != Core::Id {
            c.gates_on(ANCILLA, &self.a.inv().circuit());
            c.extend(&self.core.circuit());
            c.gates_on(ANCILLA, &self.a.circuit());
        }
        c.controlled(CONTROL, ANCILLA, self.q1);
        // Λ(ω^s) = diag(1, ω^s) on the control
        c.gates_on(CONTROL, &Circuit1::new(Gate1Q::t_power(self.s)));
        c
    }
}

fn plans() -> &'static Vec<ControlledPlan> {
    static P: OnceLock<Vec<ControlledPlan>> = OnceLock::new();
    P.get_or_init(|| {
        let mut best: Vec<Option<ControlledPlan>> = vec![None; 192];
        let mut reps: Vec<Clifford> = Clifford::all().map(|c| c.phase_free().0).collect();
        reps.sort();
        reps.dedup();
        for core in Core::ALL {
            let conj: Vec<(Clifford, Clifford)> = reps.iter().map(|&a| (a, a.mul(core.clifford()).mul(a.inv()))).collect();
            for &(a, aha) in &conj {
                for q1 in Pauli::ALL {
                    for q2 in Pauli::ALL {
                        let base = Clifford::pauli(q1).mul(aha).mul(Clifford::pauli(q2));
                        for s in 0..8 {
                            let g = Clifford::omega_pow(s).mul(base);
                            let plan = ControlledPlan { s, q1, a, core, q2 };
                            let slot = &mut best[g.index()];
                            let better = slot.map_or(true, |b| (plan.t_cost(), plan_size(&plan)) < (b.t_cost(), plan_size(&b)));
                            if better {
                                *slot = Some(plan);
                            }
                        }
                    }
                }
            }
        }
        best.into_iter().map(|p| p.expect("every Clifford has a controlled plan")).collect()
    })
}

fn plan_size(p: &ControlledPlan) -> usize {
    (p.q1 != Pauli::I) as usize + (p.q2 != Pauli::I) as usize + if p.core == Core::Id { 0 } else { 2 * p.a.circuit().0.len() }
}

/// Cheapest plan for Λ(g).
pub fn controlled_plan(g: Clifford) -> ControlledPlan {
    plans()[g.index()]
}

/// T-count of the cheapest Λ(g).
pub fn controlled_cost(g: Clifford) -> usize {
    controlled_plan(g).t_cost()
}

/// Λ(ω^s g) for the phase s that makes it cheapest, as (s, circuit); cost ≤ 4.
pub fn wrap_controlled_clifford(g: Clifford) -> (i64, Circuit) {
    let s = (0..8).min_by_key(|&s| controlled_cost(Clifford::omega_pow(s).mul(g))).expect("nonempty");
    (s, controlled_plan(Clifford::omega_pow(s).mul(g)).circuit())
}

/// The exact 4×4 matrix diag(Id, g) (control = qubit 0).
pub fn controlled_matrix(g: &RingUnitary) -> RingUnitary {
    let l = g.denom_exp();
    let one = crate::ring::sqrt2_pow(l);
    let z = CyclotomicInt::zero;
    let e = g.entries();
    RingUnitary::new(
        4,
        vec![
            one.clone(), z(), z(), z(),
            z(), one, z(), z(),
            z(), z(), e[0].clone(), e[1].clone(),
            z(), z(), e[2].clone(), e[3].clone(),
        ],
        l,
    )
    .expect("4x4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::circuit_unitary;

    #[test]
    fn core_gadgets_are_exact() {
        for core in Core::ALL {
            let c = core.circuit();
            assert_eq!(c.t_count(), core.t_cost(), "{core:?}");
            assert_eq!(circuit_unitary(&c).unwrap(), controlled_matrix(core.clifford().matrix()), "{core:?}");
        }
    }

    #[test]
    fn every_controlled_clifford_is_exact() {
        for g in Clifford::all() {
            let plan = controlled_plan(g);
            let c = plan.circuit();
            assert_eq!(c.t_count(), plan.t_cost());
            assert_eq!(circuit_unitary(&c).unwrap(), controlled_matrix(g.matrix()), "g = {g}");
        }
    }

    #[test]
    fn phase_choice_keeps_cost_at_most_four() {
        for g in Clifford::all() {
            let (s, c) = wrap_controlled_clifford(g);
            assert!(c.t_count() <= 4, "g = {g}");
            assert_eq!(circuit_unitary(&c).unwrap(), controlled_matrix(Clifford::omega_pow(s).mul(g).matrix()));
        }
        assert_eq!(controlled_cost(Clifford::pauli(Pauli::Z)), 0);
        assert_eq!(controlled_cost(Core::WS.clifford()), 2);
        assert_eq!(controlled_cost(Core::WSH.clifford()), 4);
    }
}
