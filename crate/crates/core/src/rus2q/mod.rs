//! Two-qubit repeat-until-success circuits for J(V) = diag(V, W) with W = V†
//! or a variant S^{d₁}·V†·S^{d₂}. Qubit 0 is the target (used only as a
//! control), qubit 1 the ancilla, measured after the circuit.

mod embed;
mod gadgets;
mod lowdepth;

pub use embed::{build_embedding_2anc, Embedding4Block, FieldUnitary};
pub use gadgets::{controlled_cost, controlled_matrix, controlled_plan, wrap_controlled_clifford, ControlledPlan, Core, ANCILLA, CONTROL};
pub use lowdepth::{build_low_depth_jod, cswap_circuit, toffoli_circuit};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circuit::{Circuit, Circuit1, Gate1Q, Pauli};
use crate::error::Error;
use crate::pipeline::{single_qubit_design, Design, SearchParams};
use crate::relation::Angle;
use crate::ring::{CyclotomicInt, RingUnitary, Root2Int};
use crate::synth1q::{decorate, reduce_paulis, tcount_of, to_tcode_form_matrix, Clifford, DecoratedTCode, TCode};
use crate::verify::expected_cost;

/// `W = S^{d1} · V† · S^{d2}`; (0, 0) is the plain V†.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variant {
    pub d1: i8,
    pub d2: i8,
}

impl Variant {
    pub const PLAIN: Variant = Variant { d1: 0, d2: 0 };

    pub fn all() -> impl Iterator<Item = Variant> {
        (-1..=1).flat_map(|d1| (-1..=1).map(move |d2| Variant { d1, d2 }))
    }

    /// Operator applied to the target when the ancilla reads 1: Z·S^{d₁} = S^{−d₁} or Z.
    pub fn failure_clifford(self) -> Clifford {
        Clifford::pauli(Pauli::Z).mul(Clifford::s_pow(self.d1 as i64))
    }
}

/// Which variants `rus_synthesis` may choose from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantChoice {
    /// W = V†, failure Z
    Z,
    /// best W = S^{d₁}V†S^{d₂} with d₁ ≠ 0 or d₂ ≠ 0
    S,
    /// best of all nine
    Auto,
}

impl std::str::FromStr for VariantChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "z" => Ok(VariantChoice::Z),
            "s" => Ok(VariantChoice::S),
            "auto" => Ok(VariantChoice::Auto),
            _ => Err(Error::Parse(format!("variant must be z, s or auto, not {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RusProtocol {
    #[serde(serialize_with = "ser_circuit")]
    pub design: Circuit,
    pub success_outcome: u8,
    /// Expected operator on the target for outcome 0, unnormalised (M/√2^L).
    pub success_operator: RingUnitary,
    /// Clifford left on the target by outcome 1.
    #[serde(serialize_with = "ser_clifford")]
    pub failure_correction: Clifford,
    pub variant: Variant,
    /// p = numerator / 2^L
    pub p_numerator: Root2Int,
    pub p_denom_exp: u32,
    pub p: f64,
    /// minimal T-count of V
    pub base_tcount: usize,
    pub design_tcount: usize,
    pub expected_tcount: f64,
}

fn ser_circuit<S: serde::Serializer>(c: &Circuit, s: S) -> Result<S::Ok, S::Error> {
    c.to_json().serialize(s)
}

fn ser_clifford<S: serde::Serializer>(c: &Clifford, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.circuit().to_string())
}

impl RusProtocol {
    fn finish(design: Circuit, success_operator: RingUnitary, variant: Variant, base_tcount: usize) -> RusProtocol {
        let p_numerator = success_operator.get(0, 0).abs_squared();
        let p_denom_exp = success_operator.denom_exp();
        let p = crate::pipeline::probability_f64(&p_numerator, p_denom_exp);
        let design_tcount = design.t_count();
        RusProtocol {
            design,
            success_outcome: 0,
            success_operator,
            failure_correction: variant.failure_clifford(),
            variant,
            p_numerator,
            p_denom_exp,
            p,
            base_tcount,
            design_tcount,
            expected_tcount: expected_cost(design_tcount as f64, 0.0, p),
        }
    }

    /// Deterministic protocol for the exact rotation diag(1, ω^k).
    pub fn exact_phase(k: i64) -> RusProtocol {
        let mut design = Circuit::new(2);
        design.gates_on(CONTROL, &Circuit1::new(Gate1Q::t_power(k)));
        let op = RingUnitary::diag(&[CyclotomicInt::one(), CyclotomicInt::omega_pow(k)], 0);
        let t = (k.rem_euclid(2)) as usize;
        RusProtocol::finish(design, op, Variant::PLAIN, t)
    }

    pub fn controlled_pauli_count(&self) -> usize {
        self.design.controlled_count()
    }

    /// Read back the JSON written by `Serialize`. Claims are taken as given;
    /// `verify::validate_protocol` checks them.
    pub fn from_json(v: &Value) -> Result<RusProtocol, Error> {
        fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, Error> {
            v.get(k).ok_or_else(|| Error::Parse(format!("protocol JSON lacks {k:?}")))
        }
        fn typed<T: serde::de::DeserializeOwned>(v: &Value, k: &str) -> Result<T, Error> {
            serde_json::from_value(field(v, k)?.clone()).map_err(|e| Error::Parse(format!("{k}: {e}")))
        }
        let design = Circuit::from_json(field(v, "design")?)?;
        let corr: String = typed(v, "failureCorrection")?;
        let corr: Circuit1 = corr.parse()?;
        let failure_correction =
            Clifford::from_matrix(&corr.matrix()).ok_or_else(|| Error::Parse(format!("failure correction {corr} is not Clifford")))?;
        Ok(RusProtocol {
            design,
            success_outcome: typed(v, "successOutcome")?,
            success_operator: typed(v, "successOperator")?,
            failure_correction,
            variant: typed(v, "variant")?,
            p_numerator: typed(v, "pNumerator")?,
            p_denom_exp: typed(v, "pDenomExp")?,
            p: typed(v, "p")?,
            base_tcount: typed(v, "baseTcount")?,
            design_tcount: typed(v, "designTcount")?,
            expected_tcount: typed(v, "expectedTcount")?,
        })
    }
}

/// `Lift`: Paulis become Λ(P) controlled by qubit 0, everything else acts on the ancilla.
/// Returns the circuit for Λ-lifted `left · dec · right` (matrix order) with
/// `T^k` on the control, so the control-1 block picks up ω^k.
pub fn lift_decorated(dec: &DecoratedTCode, left: Clifford, right: Clifford, control_phase: i64) -> Circuit {
    let mut c = Circuit::new(2);
    c.gates_on(ANCILLA, &right.circuit());
    for s in dec.syllables.iter().rev() {
        c.single(ANCILLA, Gate1Q::H);
        c.controlled(CONTROL, ANCILLA, s.q);
        c.single(ANCILLA, if s.d > 0 { Gate1Q::T } else { Gate1Q::Tdg });
        c.controlled(CONTROL, ANCILLA, s.p);
    }
    c.gates_on(ANCILLA, &left.circuit());
    c.gates_on(CONTROL, &Circuit1::new(Gate1Q::t_power(control_phase)));
    c
}

/// J(V) for V = H·c₁ by the Jack-of-Daggers construction: V† = H·c₂·ω^k with
/// c₂ a decoration of c₁, so J(V) = Lift(H·c₂)·(T^k ⊗ Id). T-count t or t+1.
pub fn jack_of_daggers(c1: &TCode) -> Result<Circuit, Error> {
    let v = Gate1Q::H.matrix().dot(&c1.matrix());
    let c2 = TCode(c1.0.iter().rev().map(|d| -d).collect());
    let d = decorate(c1, &c2.matrix())?;
    let k = match (d.g3 == Clifford::ID, d.g4.as_phase()) {
        (true, Some(k)) => k,
        _ => return Err(Error::ProtocolMismatch(format!("V† needs Cliffords {} and {} beyond phases", d.g3, d.g4))),
    };
    let (dec, m) = reduce_paulis(&d.dec);
    let circ = lift_decorated(&dec, Clifford::h(), Clifford::ID, k + 2 * m as i64);
    debug_assert_eq!(crate::verify::circuit_unitary(&circ).ok(), Some(block_diag(&v, &v.adjoint())));
    Ok(circ)
}

/// diag(A, B) for 2×2 ring matrices.
pub fn block_diag(a: &RingUnitary, b: &RingUnitary) -> RingUnitary {
    let l = a.denom_exp().max(b.denom_exp());
    let (ea, eb) = (a.entries_at(l), b.entries_at(l));
    let z = CyclotomicInt::zero;
    RingUnitary::new(
        4,
        vec![
            ea[0].clone(), ea[1].clone(), z(), z(),
            ea[2].clone(), ea[3].clone(), z(), z(),
            z(), z(), eb[0].clone(), eb[1].clone(),
            z(), z(), eb[2].clone(), eb[3].clone(),
        ],
        l,
    )
    .expect("4x4")
}

/// One synthesis for a fixed variant: Λ(g₅)·(Id⊗g₁)·Lift(c')·(Id⊗g₂)·Λ(g₆).
pub fn rus_synthesis_variant(v: &RingUnitary, variant: Variant) -> Result<RusProtocol, Error> {
    check_design_input(v)?;
    let s1 = Clifford::s_pow(variant.d1 as i64);
    let s2 = Clifford::s_pow(variant.d2 as i64);
    let w = s1.matrix().dot(&v.adjoint()).dot(s2.matrix());
    let form = to_tcode_form_matrix(v)?;
    let d = decorate(&form.code, &w)?;
    let (dec, m) = reduce_paulis(&d.dec);
    let g4 = Clifford::omega_pow(2 * m as i64).mul(d.g4);
    let g5 = d.g3.mul(form.g1.inv());
    let g6 = form.g2.inv().mul(g4);
    // Λ(ω^s g₅)·Λ(ω^{-s} g₆) = Λ(g₅)·Λ(g₆) around a block-diagonal core
    let s = (0..8)
        .min_by_key(|&s| controlled_cost(Clifford::omega_pow(s).mul(g5)) + controlled_cost(Clifford::omega_pow(-s).mul(g6)))
        .expect("nonempty");
    let mut design = Circuit::new(2);
    design.extend(&controlled_plan(Clifford::omega_pow(-s).mul(g6)).circuit());
    design.extend(&lift_decorated(&dec, form.g1, form.g2, 0));
    design.extend(&controlled_plan(Clifford::omega_pow(s).mul(g5)).circuit());
    let success = RingUnitary::diag(&[v.get(0, 0).clone(), v.get(1, 1).clone()], v.denom_exp());
    Ok(RusProtocol::finish(design, success, variant, form.code.len()))
}

fn check_design_input(v: &RingUnitary) -> Result<(), Error> {
    if v.dim() != 2 {
        return Err(Error::Shape("single-qubit design expected".into()));
    }
    if !v.is_unitary() {
        return Err(Error::NotUnitary);
    }
    // eq-form: [[z, y], [−y*, z*]]
    if *v.get(1, 1) != v.get(0, 0).conj() || *v.get(1, 0) != -v.get(0, 1).conj() {
        return Err(Error::Shape("matrix is not of the form [[z, y], [-y*, z*]]".into()));
    }
    let n = v.get(0, 0).abs_squared();
    let p = crate::pipeline::probability_f64(&n, v.denom_exp());
    // p > 1/2 exactly: 2|z|² > 2^L
    let twice = &n + &n;
    if twice.cmp_pow2(v.denom_exp()) != std::cmp::Ordering::Greater {
        return Err(Error::LowSuccessProbability(p));
    }
    Ok(())
}

/// Best protocol among the allowed variants, by expected T-count then variant order.
pub fn rus_synthesis(v: &RingUnitary, choice: VariantChoice) -> Result<RusProtocol, Error> {
    let variants: Vec<Variant> = match choice {
        VariantChoice::Z => vec![Variant::PLAIN],
        VariantChoice::S => Variant::all().filter(|&x| x != Variant::PLAIN).collect(),
        VariantChoice::Auto => std::iter::once(Variant::PLAIN).chain(Variant::all().filter(|&x| x != Variant::PLAIN)).collect(),
    };
    let mut best: Option<RusProtocol> = None;
    for var in variants {
        let p = rus_synthesis_variant(v, var)?;
        if best.as_ref().map_or(true, |b| p.design_tcount < b.design_tcount) {
            best = Some(p);
        }
    }
    Ok(best.expect("at least one variant"))
}

/// Re-run the nine-way variant search; never returns a costlier protocol.
pub fn s_dagger_optimize(protocol: &RusProtocol, v: &RingUnitary) -> Result<RusProtocol, Error> {
    let best = rus_synthesis(v, VariantChoice::Auto)?;
    Ok(if best.expected_tcount < protocol.expected_tcount { best } else { protocol.clone() })
}

/// Full compilation of R_z(θ): Stages 1–3 give V, Stage 4 the two-qubit circuit.
/// Multiples of π/4 skip the search and get `exact_phase`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RzSynthesis {
    pub theta: String,
    pub epsilon: f64,
    pub protocol: RusProtocol,
    #[serde(skip)]
    pub design: Option<Design>,
    pub achieved_distance: f64,
}

impl RzSynthesis {
    pub fn from_json(v: &Value) -> Result<RzSynthesis, Error> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("synthesis JSON lacks {k:?}")));
        let theta = get("theta")?.as_str().ok_or_else(|| Error::Parse("theta must be a string".into()))?.to_string();
        let epsilon = get("epsilon")?.as_f64().ok_or_else(|| Error::Parse("epsilon must be a number".into()))?;
        let achieved_distance = get("achievedDistance")?.as_f64().unwrap_or(f64::NAN);
        Ok(RzSynthesis { theta, epsilon, protocol: RusProtocol::from_json(get("protocol")?)?, design: None, achieved_distance })
    }
}

pub fn synthesize_rz(theta: &Angle, epsilon: f64, params: &SearchParams, choice: VariantChoice, keep_samples: bool) -> Result<RzSynthesis, Error> {
    let (protocol, design) = match theta.quarter_pi_multiple() {
        Some(k) => (RusProtocol::exact_phase(k), None),
        None => {
            let d = single_qubit_design(theta, epsilon, params, keep_samples)?;
            (rus_synthesis(&d.v, choice)?, Some(d))
        }
    };
    let achieved_distance = crate::verify::success_distance(&protocol, theta)?;
    Ok(RzSynthesis { theta: theta.to_string(), epsilon, protocol, design, achieved_distance })
}

/// Bound from the construction: T-count of V plus at most 9.
pub fn design_bound(v: &RingUnitary) -> usize {
    tcount_of(v) as usize + 9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::circuit_unitary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_code(rng: &mut impl Rng, n: usize) -> TCode {
        TCode((0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())
    }

    pub(crate) fn example_v() -> RingUnitary {
        let z = CyclotomicInt::new(-603, 1694, -1510, -7501);
        let y = CyclotomicInt::new(1973, -860, 358, 755);
        RingUnitary::from_zy(&z, &y, 26)
    }

    #[test]
    fn jack_of_daggers_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let t = rng.gen_range(0..=12);
            let c1 = random_code(&mut rng, t);
            let circ = jack_of_daggers(&c1).unwrap();
            let v = Gate1Q::H.matrix().dot(&c1.matrix());
            assert_eq!(circuit_unitary(&circ).unwrap(), block_diag(&v, &v.adjoint()));
            assert!(circ.t_count() == t || circ.t_count() == t + 1);
            assert!(circ.controlled_count() <= t + 1);
        }
    }

    #[test]
    fn identity_design_is_trivial() {
        let p = rus_synthesis(&RingUnitary::identity(2), VariantChoice::Z).unwrap();
        assert_eq!(p.design_tcount, 0);
        assert_eq!(p.p, 1.0);
    }

    #[test]
    fn low_probability_is_rejected() {
        // |z|²/2^L = 1/2 exactly
        let v = RingUnitary::from_zy(&CyclotomicInt::one(), &CyclotomicInt::one(), 1);
        assert!(matches!(rus_synthesis_variant(&v, Variant::PLAIN), Err(Error::LowSuccessProbability(_))));
    }

    #[test]
    fn example_matrix_all_variants() {
        let v = example_v();
        assert!(v.is_unitary());
        let t = tcount_of(&v) as usize;
        for var in Variant::all() {
            let p = rus_synthesis_variant(&v, var).unwrap();
            assert!(p.design_tcount <= t + 9, "{var:?}: {}", p.design_tcount);
            let s1 = Clifford::s_pow(var.d1 as i64).matrix().clone();
            let s2 = Clifford::s_pow(var.d2 as i64).matrix().clone();
            let w = s1.dot(&v.adjoint()).dot(&s2);
            assert_eq!(circuit_unitary(&p.design).unwrap(), block_diag(&v, &w));
        }
        let best = rus_synthesis(&v, VariantChoice::Auto).unwrap();
        assert!((best.p - 0.9885).abs() < 5e-5);
        assert!(best.expected_tcount < 58.7, "{}", best.expected_tcount);
    }
}
