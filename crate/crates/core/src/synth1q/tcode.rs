//! T codes `Π T^{d_i} H` (matrix order, d_i = ±1), their Pauli decorations,
//! and the rewrites that bring any Clifford+T unitary to `g1 · code · g2`.

use std::fmt;

use serde::Serialize;

use crate::circuit::{Circuit1, Gate1Q, Pauli};
use crate::error::Error;
use crate::ring::RingUnitary;

use super::clifford::Clifford;
use super::exact::normal_form;

/// Sequence of syllables `T^{d} H`, leftmost syllable first in the product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TCode(pub Vec<i8>);

/// T-gate exponents of a code, decorated or not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature(pub Vec<i64>);

fn t_pm(d: i8) -> Gate1Q {
    if d > 0 {
        Gate1Q::T
    } else {
        Gate1Q::Tdg
    }
}

impl TCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signature(&self) -> Signature {
        Signature(self.0.iter().map(|&d| d as i64).collect())
    }

    /// Gates in matrix order.
    pub fn matrix_gates(&self) -> Vec<Gate1Q> {
        self.0.iter().flat_map(|&d| [t_pm(d), Gate1Q::H]).collect()
    }

    pub fn circuit(&self) -> Circuit1 {
        Circuit1::from_matrix_order(&self.matrix_gates())
    }

    pub fn matrix(&self) -> RingUnitary {
        self.circuit().matrix()
    }
}

impl fmt::Display for TCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Id");
        }
        let s: Vec<&str> = self.0.iter().map(|&d| if d > 0 { "T H" } else { "T† H" }).collect();
        f.write_str(&s.join(" "))
    }
}

/// `U = g1 · code · g2` as an exact matrix identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCodeForm {
    pub g1: Clifford,
    pub code: TCode,
    pub g2: Clifford,
}

impl TCodeForm {
    pub fn matrix(&self) -> RingUnitary {
        self.g1.matrix().dot(&self.code.matrix()).dot(self.g2.matrix())
    }
}

/// `b · T = T^s · b'` for b in B; returns (s, b').
fn carry_past_t(b: Clifford) -> (i8, Clifford) {
    let s: i8 = if b.is_diagonal() { 1 } else { -1 };
    let t = Gate1Q::T.matrix();
    let ts = if s > 0 { Gate1Q::Tdg.matrix() } else { t.clone() };
    let bp = Clifford::from_matrix(&ts.dot(b.matrix()).dot(&t)).expect("B normalises <T>");
    (s, bp)
}

/// Bring a sequence `C_0 T C_1 T ⋯ T C_t` (matrix order) into T-code form.
///
/// A carry in B is pushed rightwards. Each `T^s · D` is split as
/// `T^{s+2a} · H · b` with `D = S^a H b`; odd powers 3 and 5 leave a Z that
/// crosses the H as an X (`Z·T·H = T·H·X`).
fn normalise(cliffords: &[Clifford]) -> Result<TCodeForm, Error> {
    let t = cliffords.len() - 1;
    if t == 0 {
        return Ok(TCodeForm { g1: cliffords[0], code: TCode(vec![]), g2: Clifford::ID });
    }
    let h = Clifford::h();
    let x = Clifford::pauli(Pauli::X);
    let mut carry = Clifford::ID;
    let mut code = Vec::with_capacity(t);
    for (i, &c) in cliffords.iter().enumerate().skip(1) {
        let (s, b) = carry_past_t(carry);
        let d = b.mul(c);
        let split = (0..4i64).map(|a| (a, h.mul(Clifford::s_pow(-a)).mul(d))).find(|(_, r)| r.in_b());
        let (a, rest) = match split {
            Some(x) => x,
            // the final Clifford is unconstrained: T^s · H · (H·D)
            None if i == t => {
                code.push(s);
                return Ok(TCodeForm { g1: cliffords[0], code: TCode(code), g2: h.mul(d) });
            }
            None => return Err(Error::NotInRing("T gates not separated by H".into())),
        };
        let (dd, flip) = match (s as i64 + 2 * a).rem_euclid(8) {
            1 => (1, false),
            7 => (-1, false),
            3 => (-1, true),
            5 => (1, true),
            _ => unreachable!("odd power"),
        };
        code.push(dd);
        carry = if flip { x.mul(rest) } else { rest };
    }
    Ok(TCodeForm { g1: cliffords[0], code: TCode(code), g2: carry })
}

/// T-code form of an exactly representable unitary.
pub fn to_tcode_form_matrix(u: &RingUnitary) -> Result<TCodeForm, Error> {
    let nf = normal_form(u)?;
    let mut cl: Vec<Clifford> = nf.prefixes.iter().map(|p| p.clifford()).collect();
    cl.push(nf.tail);
    normalise(&cl)
}

/// T-code form of a circuit (application-order gate list).
pub fn to_tcode_form(c: &Circuit1) -> Result<TCodeForm, Error> {
    to_tcode_form_matrix(&c.matrix())
}

/// An exact matrix identity between two gate words written in matrix order.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub name: &'static str,
    pub lhs: Vec<Gate1Q>,
    pub rhs: Vec<Gate1Q>,
}

impl RewriteRule {
    pub fn holds(&self) -> bool {
        let ev = |w: &[Gate1Q]| Circuit1::from_matrix_order(w).matrix();
        ev(&self.lhs) == ev(&self.rhs)
    }
}

/// Pauli moves through T-code syllables and the H·S^{±1}·H rewrites.
pub fn rewrite_identities() -> Vec<RewriteRule> {
    use Gate1Q::*;
    let r = |name, lhs: &[Gate1Q], rhs: &[Gate1Q]| RewriteRule { name, lhs: lhs.to_vec(), rhs: rhs.to_vec() };
    vec![
        r("X T H = T† H Z ω", &[X, T, H], &[Tdg, H, Z, W(1)]),
        r("Y T H = T† H Y ω^5", &[Y, T, H], &[Tdg, H, Y, W(5)]),
        r("Z T H = T H X", &[Z, T, H], &[T, H, X]),
        r("X S H T H = S† H T H X ω^2", &[X, S, H, T, H], &[Sdg, H, T, H, X, W(2)]),
        r("Y S H T H = S† H T† H Y ω^3", &[Y, S, H, T, H], &[Sdg, H, Tdg, H, Y, W(3)]),
        r("Z S H T H = S H T† H Z ω", &[Z, S, H, T, H], &[S, H, Tdg, H, Z, W(1)]),
        r("H S H = S† H S† ω", &[H, S, H], &[Sdg, H, Sdg, W(1)]),
        r("H S H = T^-2 H T^-2 ω", &[H, S, H], &[Tdg, Tdg, H, Tdg, Tdg, W(1)]),
        r("H S† H = S H S ω^-1", &[H, Sdg, H], &[S, H, S, W(7)]),
        r("H S† H = T^2 H T^2 ω^-1", &[H, Sdg, H], &[T, T, H, T, T, W(7)]),
    ]
}

/// Syllable `P · T^d · Q · H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecSyllable {
    pub p: Pauli,
    pub d: i8,
    pub q: Pauli,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedTCode {
    pub syllables: Vec<DecSyllable>,
}

impl DecoratedTCode {
    pub fn plain(code: &TCode) -> Self {
        DecoratedTCode { syllables: code.0.iter().map(|&d| DecSyllable { p: Pauli::I, d, q: Pauli::I }).collect() }
    }

    pub fn strip(&self) -> TCode {
        TCode(self.syllables.iter().map(|s| s.d).collect())
    }

    pub fn signature(&self) -> Signature {
        self.strip().signature()
    }

    pub fn pauli_count(&self) -> usize {
        self.syllables.iter().map(|s| (s.p != Pauli::I) as usize + (s.q != Pauli::I) as usize).sum()
    }

    /// Gates in matrix order.
    pub fn matrix_gates(&self) -> Vec<Gate1Q> {
        let mut out = Vec::new();
        for s in &self.syllables {
            out.extend(s.p.gate());
            out.push(t_pm(s.d));
            out.extend(s.q.gate());
            out.push(Gate1Q::H);
        }
        out
    }

    pub fn matrix(&self) -> RingUnitary {
        Circuit1::from_matrix_order(&self.matrix_gates()).matrix()
    }
}

impl fmt::Display for DecoratedTCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .matrix_gates()
            .iter()
            .map(|g| match g {
                Gate1Q::Tdg => "T†".to_string(),
                g => g.to_string(),
            })
            .collect();
        f.write_str(&toks.join(" "))
    }
}

/// `target = g3 · dec · g4` with `strip(dec) = code`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    pub g3: Clifford,
    pub dec: DecoratedTCode,
    pub g4: Clifford,
}

impl Decoration {
    pub fn matrix(&self) -> RingUnitary {
        self.g3.matrix().dot(&self.dec.matrix()).dot(self.g4.matrix())
    }
}

/// Decorate `code` with Paulis so that it, wrapped in Cliffords, equals `target`.
///
/// Mismatched syllables use `T^{-d} = ω^{-d} · X T^d X`.
pub fn decorate(code: &TCode, target: &RingUnitary) -> Result<Decoration, Error> {
    let form = to_tcode_form_matrix(target)?;
    if form.code.len() != code.len() {
        return Err(Error::TCountMismatch { expected: code.len(), found: form.code.len() });
    }
    let mut phase = 0i64;
    let syllables = code
        .0
        .iter()
        .zip(&form.code.0)
        .map(|(&d, &want)| {
            if d == want {
                DecSyllable { p: Pauli::I, d, q: Pauli::I }
            } else {
                phase -= d as i64;
                DecSyllable { p: Pauli::X, d, q: Pauli::X }
            }
        })
        .collect();
    let g4 = Clifford::omega_pow(phase).mul(form.g2);
    Ok(Decoration { g3: form.g1, dec: DecoratedTCode { syllables }, g4 })
}

/// Push every Pauli except the first leftwards through the preceding H, so
/// that at most `t + 1` remain. Returns `(reduced, m)` with `dec = i^m · reduced`.
pub fn reduce_paulis(dec: &DecoratedTCode) -> (DecoratedTCode, u8) {
    let mut out = dec.syllables.clone();
    let mut m = 0u8;
    for i in 1..out.len() {
        // Q_{i-1} · H · P_i = Q_{i-1} · (±P'_i) · H
        let (pp, neg) = out[i].p.through_hadamard();
        let (k, q) = out[i - 1].q.mul(pp);
        m = (m + k + if neg { 2 } else { 0 }) % 4;
        out[i - 1].q = q;
        out[i].p = Pauli::I;
    }
    (DecoratedTCode { syllables: out }, m)
}
