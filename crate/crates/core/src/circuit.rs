//! Gates and circuits. Circuits are stored in application order: the first
//! gate in the list acts first, so the circuit matrix is `g_n ⋯ g_2 g_1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ring::{CyclotomicInt, RingUnitary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> RingUnitary {
        let z = CyclotomicInt::zero;
        let o = CyclotomicInt::one;
        let i = CyclotomicInt::i;
        match self {
            Pauli::I => RingUnitary::identity(2),
            Pauli::X => RingUnitary::from_2x2(z(), o(), o(), z(), 0),
            Pauli::Y => RingUnitary::from_2x2(z(), -i(), i(), z(), 0),
            Pauli::Z => RingUnitary::from_2x2(o(), z(), z(), -o(), 0),
        }
    }

    /// Product `self · o = i^m · P`, returned as (m, P).
    pub fn mul(self, o: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, o) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// `P·H = s · H·P'`; returns (P', sign is negative).
    pub fn through_hadamard(self) -> (Pauli, bool) {
        match self {
            Pauli::I => (Pauli::I, false),
            Pauli::X => (Pauli::Z, false),
            Pauli::Z => (Pauli::X, false),
            Pauli::Y => (Pauli::Y, true),
        }
    }

    pub fn gate(self) -> Option<Gate1Q> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Gate1Q::X),
            Pauli::Y => Some(Gate1Q::Y),
            Pauli::Z => Some(Gate1Q::Z),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "Id",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Single-qubit Clifford+T gate. `W(k)` is the global phase ω^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate1Q {
    H,
    T,
    Tdg,
    S,
    Sdg,
    X,
    Y,
    Z,
    W(u8),
}

impl Gate1Q {
    pub fn matrix(self) -> RingUnitary {
        let z = CyclotomicInt::zero;
        let o = CyclotomicInt::one;
        let w = CyclotomicInt::omega_pow;
        match self {
            Gate1Q::H => RingUnitary::from_2x2(o(), o(), o(), -o(), 1),
            Gate1Q::T => RingUnitary::from_2x2(o(), z(), z(), w(1), 0),
            Gate1Q::Tdg => RingUnitary::from_2x2(o(), z(), z(), w(-1), 0),
            Gate1Q::S => RingUnitary::from_2x2(o(), z(), z(), w(2), 0),
            Gate1Q::Sdg => RingUnitary::from_2x2(o(), z(), z(), w(-2), 0),
            Gate1Q::X => Pauli::X.matrix(),
            Gate1Q::Y => Pauli::Y.matrix(),
            Gate1Q::Z => Pauli::Z.matrix(),
            Gate1Q::W(k) => RingUnitary::from_2x2(w(k as i64), z(), z(), w(k as i64), 0),
        }
    }

    pub fn is_t(self) -> bool {
        matches!(self, Gate1Q::T | Gate1Q::Tdg)
    }

    pub fn inverse(self) -> Gate1Q {
        match self {
            Gate1Q::T => Gate1Q::Tdg,
            Gate1Q::Tdg => Gate1Q::T,
            Gate1Q::S => Gate1Q::Sdg,
            Gate1Q::Sdg => Gate1Q::S,
            Gate1Q::W(k) => Gate1Q::W((8 - k % 8) % 8),
            g => g,
        }
    }

    /// T^k as a short gate list (k taken mod 8).
    pub fn t_power(k: i64) -> Vec<Gate1Q> {
        match k.rem_euclid(8) {
            0 => vec![],
            1 => vec![Gate1Q::T],
            2 => vec![Gate1Q::S],
            3 => vec![Gate1Q::S, Gate1Q::T],
            4 => vec![Gate1Q::Z],
            5 => vec![Gate1Q::Z, Gate1Q::T],
            6 => vec![Gate1Q::Sdg],
            _ => vec![Gate1Q::Tdg],
        }
    }

    fn token(self) -> String {
        match self {
            Gate1Q::H => "H".into(),
            Gate1Q::T => "T".into(),
            Gate1Q::Tdg => "Tdg".into(),
            Gate1Q::S => "S".into(),
            Gate1Q::Sdg => "Sdg".into(),
            Gate1Q::X => "X".into(),
            Gate1Q::Y => "Y".into(),
            Gate1Q::Z => "Z".into(),
            Gate1Q::W(k) => format!("w^{k}"),
        }
    }
}

impl fmt::Display for Gate1Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Gate1Q {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "H" => Gate1Q::H,
            "T" => Gate1Q::T,
            "Tdg" => Gate1Q::Tdg,
            "S" => Gate1Q::S,
            "Sdg" => Gate1Q::Sdg,
            "X" => Gate1Q::X,
            "Y" => Gate1Q::Y,
            "Z" => Gate1Q::Z,
            _ => {
                let k = s
                    .strip_prefix("w^")
                    .and_then(|k| k.parse::<i64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown gate {s:?}")))?;
                Gate1Q::W(k.rem_euclid(8) as u8)
            }
        })
    }
}

/// Single-qubit circuit in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit1(pub Vec<Gate1Q>);

impl Circuit1 {
    pub fn new(gates: Vec<Gate1Q>) -> Self {
        Circuit1(gates)
    }

    pub fn gates(&self) -> &[Gate1Q] {
        &self.0
    }

    pub fn t_count(&self) -> usize {
        self.0.iter().filter(|g| g.is_t()).count()
    }

    /// Exact matrix `g_n ⋯ g_1`.
    pub fn matrix(&self) -> RingUnitary {
        self.0.iter().fold(RingUnitary::identity(2), |acc, g| g.matrix().dot(&acc))
    }

    pub fn inverse(&self) -> Circuit1 {
        Circuit1(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Build from gates listed in matrix (product) order.
    pub fn from_matrix_order(gates: &[Gate1Q]) -> Circuit1 {
        Circuit1(gates.iter().rev().copied().collect())
    }
}

impl fmt::Display for Circuit1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.0.iter().map(|g| g.token()).collect();
        f.write_str(&toks.join(" "))
    }
}

impl FromStr for Circuit1 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>, _>>().map(Circuit1)
    }
}

/// One operation of an n-qubit circuit. Qubit 0 is the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Single { q: usize, g: Gate1Q },
    /// Pauli on `t` controlled by `c` (CNOT is `Controlled { p: X }`).
    Controlled { c: usize, t: usize, p: Pauli },
}

impl Op {
    pub fn is_t(&self) -> bool {
        matches!(self, Op::Single { g, .. } if g.is_t())
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Op::Single { q, .. } => vec![q],
            Op::Controlled { c, t, .. } => vec![c, t],
        }
    }

    pub fn inverse(&self) -> Op {
        match *self {
            Op::Single { q, g } => Op::Single { q, g: g.inverse() },
            o => o,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<Op>,
}

#[derive(Serialize, Deserialize)]
struct OpRecord {
    gate: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    params: serde_json::Map<String, serde_json::Value>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit { n_qubits, ops: Vec::new() }
    }

    pub fn push(&mut self, op: Op) {
        self.ops.push(op);
    }

    pub fn single(&mut self, q: usize, g: Gate1Q) {
        self.ops.push(Op::Single { q, g });
    }

    pub fn gates_on(&mut self, q: usize, c: &Circuit1) {
        for g in c.gates() {
            self.single(q, *g);
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        self.ops.push(Op::Controlled { c, t, p: Pauli::X });
    }

    pub fn controlled(&mut self, c: usize, t: usize, p: Pauli) {
        if p != Pauli::I {
            self.ops.push(Op::Controlled { c, t, p });
        }
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.ops.extend_from_slice(&other.ops);
    }

    pub fn inverse(&self) -> Circuit {
        Circuit { n_qubits: self.n_qubits, ops: self.ops.iter().rev().map(Op::inverse).collect() }
    }

    pub fn t_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_t()).count()
    }

    pub fn controlled_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Controlled { .. })).count()
    }

    /// Number of layers containing a T gate under as-soon-as-possible scheduling.
    pub fn t_depth(&self) -> usize {
        // per qubit: (layer index reached, T-depth reached)
        let mut tdepth = vec![0usize; self.n_qubits];
        for op in &self.ops {
            let qs = op.qubits();
            let base = qs.iter().map(|&q| tdepth[q]).max().unwrap_or(0);
            let d = if op.is_t() { base + 1 } else { base };
            for q in qs {
                tdepth[q] = d;
            }
        }
        tdepth.into_iter().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let recs: Vec<OpRecord> = self
            .ops
            .iter()
            .map(|op| match *op {
                Op::Single { q, g } => {
                    let mut params = serde_json::Map::new();
                    let name = match g {
                        Gate1Q::W(k) => {
                            params.insert("k".into(), k.into());
                            "w".to_string()
                        }
                        g => g.token(),
                    };
                    OpRecord { gate: name, qubits: vec![q], params }
                }
                Op::Controlled { c, t, p } => OpRecord { gate: format!("C{p}"), qubits: vec![c, t], params: Default::default() },
            })
            .collect();
        serde_json::json!({ "qubits": self.n_qubits, "gates": recs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Circuit, Error> {
        let bad = |m: &str| Error::Parse(format!("circuit json: {m}"));
        let n = v["qubits"].as_u64().ok_or_else(|| bad("missing qubits"))? as usize;
        let recs: Vec<OpRecord> = serde_json::from_value(v["gates"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut c = Circuit::new(n);
        for r in recs {
            let op = match (r.gate.as_str(), r.qubits.as_slice()) {
                ("CX", &[a, b]) => Op::Controlled { c: a, t: b, p: Pauli::X },
                ("CY", &[a, b]) => Op::Controlled { c: a, t: b, p: Pauli::Y },
                ("CZ", &[a, b]) => Op::Controlled { c: a, t: b, p: Pauli::Z },
                ("w", &[q]) => {
                    let k = r.params.get("k").and_then(|k| k.as_i64()).ok_or_else(|| bad("w without k"))?;
                    Op::Single { q, g: Gate1Q::W(k.rem_euclid(8) as u8) }
                }
                (name, &[q]) => Op::Single { q, g: name.parse()? },
                (name, _) => return Err(bad(&format!("bad arity for {name}"))),
            };
            if op.qubits().iter().any(|&q| q >= n) {
                return Err(bad("qubit index out of range"));
            }
            c.push(op);
        }
        Ok(c)
    }

    /// Listing in the style `Λ(X) (T† H T† H)_2 …`: controlled Paulis as Λ(P),
    /// runs of single-qubit gates grouped with the (1-based) qubit as subscript.
    pub fn listing(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut run: Vec<String> = Vec::new();
        let mut run_q: Option<usize> = None;
        let flush = |parts: &mut Vec<String>, run: &mut Vec<String>, q: Option<usize>| {
            if let Some(q) = q {
                if !run.is_empty() {
                    parts.push(format!("({})_{}", run.join(" "), q + 1));
                }
            }
            run.clear();
        };
        for op in &self.ops {
            match *op {
                Op::Single { q, g } => {
                    if run_q != Some(q) {
                        flush(&mut parts, &mut run, run_q);
                        run_q = Some(q);
                    }
                    let tok = match g {
                        Gate1Q::Tdg => "T†".to_string(),
                        Gate1Q::Sdg => "S†".to_string(),
                        Gate1Q::W(k) => format!("ω^{k}"),
                        g => g.token(),
                    };
                    run.push(tok);
                }
                Op::Controlled { c, t, p } => {
                    flush(&mut parts, &mut run, run_q);
                    run_q = None;
                    if self.n_qubits == 2 && c == 0 && t == 1 {
                        parts.push(format!("Λ({p})"));
                    } else {
                        parts.push(format!("Λ({p})_{{{},{}}}", c + 1, t + 1));
                    }
                }
            }
        }
        flush(&mut parts, &mut run, run_q);
        parts.join(" ")
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .ops
            .iter()
            .map(|op| match *op {
                Op::Single { q, g } => format!("{}({q})", g.token()),
                Op::Controlled { c, t, p } => format!("C{p}({c},{t})"),
            })
            .collect();
        f.write_str(&toks.join(" "))
    }
}
