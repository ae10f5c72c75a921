//! The 192-element single-qubit Clifford group (with ω phases), tabulated.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::circuit::{Circuit1, Gate1Q, Pauli};
use crate::ring::RingUnitary;

pub const GROUP_ORDER: usize = 192;

/// Index into the Clifford table. `Clifford::ID` is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clifford(u8);

struct Table {
    elems: Vec<RingUnitary>,
    words: Vec<Vec<Gate1Q>>,
    index: HashMap<RingUnitary, u8>,
    mul: Vec<[u8; GROUP_ORDER]>,
    inv: Vec<u8>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(build)
}

fn build() -> Table {
    let gens = [Gate1Q::H, Gate1Q::S, Gate1Q::Sdg, Gate1Q::X, Gate1Q::Z, Gate1Q::Y];
    let mut elems = vec![RingUnitary::identity(2)];
    let mut bfs_words: Vec<Vec<Gate1Q>> = vec![vec![]];
    let mut index: HashMap<RingUnitary, u8> = HashMap::new();
    index.insert(elems[0].clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            // append g in application order: new matrix is g·M
            let m = g.matrix().dot(&elems[i]);
            if !index.contains_key(&m) {
                let id = elems.len();
                index.insert(m.clone(), id as u8);
                let mut w = bfs_words[i].clone();
                w.push(g);
                elems.push(m);
                bfs_words.push(w);
                queue.push_back(id);
            }
        }
    }
    assert_eq!(elems.len(), GROUP_ORDER, "Clifford group closure");
    // canonical words: a short phase-free word followed by at most one ω^k
    let words = elems
        .iter()
        .map(|e| {
            (0..8i64)
                .map(|k| {
                    let f = e.mul_omega_pow(-k);
                    let mut w = bfs_words[index[&f] as usize].clone();
                    if k != 0 {
                        w.push(Gate1Q::W(k as u8));
                    }
                    w
                })
                .min_by_key(|w| w.len())
                .expect("nonempty")
        })
        .collect();
    let n = GROUP_ORDER;
    let mut mul = vec![[0u8; GROUP_ORDER]; n];
    for a in 0..n {
        for b in 0..n {
            mul[a][b] = index[&elems[a].dot(&elems[b])];
        }
    }
    let inv = (0..n).map(|a| (0..n).find(|&b| mul[a][b] == 0).expect("group inverse") as u8).collect();
    Table { elems, words, index, mul, inv }
}

impl Clifford {
    pub const ID: Clifford = Clifford(0);

    pub fn all() -> impl Iterator<Item = Clifford> {
        (0..GROUP_ORDER as u8).map(Clifford)
    }

    pub fn from_matrix(m: &RingUnitary) -> Option<Clifford> {
        table().index.get(m).map(|&i| Clifford(i))
    }

    pub fn from_gate(g: Gate1Q) -> Option<Clifford> {
        Clifford::from_matrix(&g.matrix())
    }

    /// Product of gates given in matrix order; `None` if it is not Clifford.
    pub fn from_matrix_word(gates: &[Gate1Q]) -> Option<Clifford> {
        let m = gates.iter().fold(RingUnitary::identity(2), |acc, g| acc.dot(&g.matrix()));
        Clifford::from_matrix(&m)
    }

    pub fn h() -> Clifford {
        Clifford::from_gate(Gate1Q::H).expect("H")
    }

    pub fn s_pow(k: i64) -> Clifford {
        Clifford::from_matrix(&crate::circuit::Circuit1::new(Gate1Q::t_power(2 * k)).matrix()).expect("S power")
    }

    pub fn omega_pow(k: i64) -> Clifford {
        Clifford::from_matrix(&RingUnitary::identity(2).mul_omega_pow(k)).expect("phase")
    }

    pub fn pauli(p: Pauli) -> Clifford {
        Clifford::from_matrix(&p.matrix()).expect("Pauli")
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn matrix(self) -> &'static RingUnitary {
        &table().elems[self.0 as usize]
    }

    /// Short circuit (application order) implementing the element exactly.
    pub fn circuit(self) -> Circuit1 {
        Circuit1::new(table().words[self.0 as usize].clone())
    }

    /// Matrix product `self · o`.
    pub fn mul(self, o: Clifford) -> Clifford {
        Clifford(table().mul[self.0 as usize][o.0 as usize])
    }

    pub fn inv(self) -> Clifford {
        Clifford(table().inv[self.0 as usize])
    }

    /// Membership in B: diagonal or antidiagonal elements (those normalising ⟨T⟩).
    pub fn in_b(self) -> bool {
        let m = self.matrix();
        m.is_diagonal() || m.is_antidiagonal()
    }

    pub fn is_diagonal(self) -> bool {
        self.matrix().is_diagonal()
    }

    /// `ω^k · P` decomposition when the element is a Pauli up to phase.
    pub fn as_pauli(self) -> Option<(Pauli, i64)> {
        Pauli::ALL.into_iter().find_map(|p| self.matrix().phase_relative_to(&p.matrix()).map(|k| (p, k)))
    }

    /// `k` if the element is the scalar ω^k.
    pub fn as_phase(self) -> Option<i64> {
        self.matrix().phase_relative_to(&RingUnitary::identity(2))
    }

    /// The element with its global phase removed, choosing a fixed
    /// representative of the coset `{ω^k · self}`.
    pub fn phase_free(self) -> (Clifford, i64) {
        (0..8i64)
            .map(|k| (Clifford::from_matrix(&self.matrix().mul_omega_pow(-k)).expect("closed"), k))
            .min_by_key(|(c, _)| c.0)
            .expect("nonempty")
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.circuit();
        if c.gates().is_empty() {
            f.write_str("Id")
        } else {
            write!(f, "{c}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_structure() {
        let all: Vec<Clifford> = Clifford::all().collect();
        assert_eq!(all.len(), 192);
        for &a in &all {
            assert_eq!(a.mul(a.inv()), Clifford::ID);
            assert_eq!(a.circuit().matrix(), *a.matrix());
            assert!(a.circuit().gates().len() <= 6, "{a}");
        }
        // 24 classes modulo phase, 8 of them in B
        let mut classes: Vec<Clifford> = all.iter().map(|c| c.phase_free().0).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(classes.len(), 24);
        assert_eq!(classes.iter().filter(|c| c.in_b()).count(), 8);
    }

    #[test]
    fn associativity_sample() {
        let all: Vec<Clifford> = Clifford::all().collect();
        for a in all.iter().step_by(7) {
            for b in all.iter().step_by(11) {
                for c in all.iter().step_by(13) {
                    assert_eq!(a.mul(*b).mul(*c), a.mul(b.mul(*c)));
                }
            }
        }
    }

    #[test]
    fn paulis_and_phases() {
        let (p, k) = Clifford::from_matrix(&Gate1Q::Y.matrix().mul_omega_pow(3)).unwrap().as_pauli().unwrap();
        assert_eq!((p, k), (Pauli::Y, 3));
        assert_eq!(Clifford::omega_pow(5).as_phase(), Some(5));
        assert!(Clifford::h().as_pauli().is_none());
        assert_eq!(Clifford::s_pow(2), Clifford::pauli(Pauli::Z));
    }
}
