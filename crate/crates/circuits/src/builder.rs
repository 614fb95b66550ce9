//! Constraint-system builder. Linear combinations stay symbolic and free;
//! only genuine products allocate wires and emit counted rows, with
//! constants folding through, so the gadget costs in the accounting
//! report are the non-linear counts the proving effort tracks. Linear
//! relations are kept as separate uncounted rows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;

use crate::CircuitError;

/// Wire index into the witness vector. Wire values are assigned publics
/// first (in declaration order), then private inputs, then hint outputs.
pub type Wire = usize;

/// Sparse linear combination: constant + sum(coeff * wire).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Lc {
    pub constant: FieldElement,
    pub terms: Vec<(Wire, FieldElement)>,
}

impl Lc {
    pub fn constant(v: FieldElement) -> Self {
        Lc {
            constant: v,
            terms: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(FieldElement::ZERO)
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    pub fn wire(w: Wire) -> Self {
        Lc {
            constant: FieldElement::ZERO,
            terms: vec![(w, FieldElement::ONE)],
        }
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.terms.is_empty() {
            Some(self.constant)
        } else {
            None
        }
    }

    fn normalize(mut self) -> Self {
        self.terms.sort_by_key(|(w, _)| *w);
        let mut out: Vec<(Wire, FieldElement)> = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms {
            match out.last_mut() {
                Some((lw, lc)) if *lw == w => *lc += c,
                _ => out.push((w, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
        self
    }

    pub fn add(&self, other: &Lc) -> Lc {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Lc {
            constant: self.constant + other.constant,
            terms,
        }
        .normalize()
    }

    pub fn sub(&self, other: &Lc) -> Lc {
        self.add(&other.scale(-FieldElement::ONE))
    }

    pub fn scale(&self, k: FieldElement) -> Lc {
        if k.is_zero() {
            return Lc::zero();
        }
        Lc {
            constant: self.constant * k,
            terms: self.terms.iter().map(|&(w, c)| (w, c * k)).collect(),
        }
    }

    pub fn add_constant(&self, k: FieldElement) -> Lc {
        let mut out = self.clone();
        out.constant += k;
        out
    }
}

/// Witness-generation step; executed in emission order at evaluation time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Hint {
    /// out = a * b
    Mul { out: Wire, a: Lc, b: Lc },
    /// out = num / den (den must evaluate nonzero)
    Div { out: Wire, num: Lc, den: Lc },
    /// out = 1/x, or 0 when x = 0
    InvOrZero { out: Wire, x: Lc },
    /// Little-endian bit decomposition of value into the given wires.
    Bits { outs: Vec<Wire>, value: Lc },
    /// Euclidean division by a fixed divisor.
    DivMod {
        quotient: Wire,
        remainder: Wire,
        value: Lc,
        divisor: u64,
    },
    /// Fixed auxiliary value (constrained elsewhere).
    Const { out: Wire, value: FieldElement },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constraint {
    pub a: Lc,
    pub b: Lc,
    pub c: Lc,
    pub tag: u16,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GadgetStat {
    pub occurrences: u64,
    pub constraints: u64,
}

/// Where a wire's value comes from at evaluation time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WireKind {
    One,
    Public,
    Private,
    Internal,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub wire_kinds: Vec<WireKind>,
    pub constraints: Vec<Constraint>,
    /// Uncounted rows: lc == 0.
    pub linear_constraints: Vec<(Lc, u16)>,
    pub public_wires: Vec<Wire>,
    pub private_wires: Vec<Wire>,
    pub hints: Vec<Hint>,
    pub tags: Vec<String>,
    pub tag_stats: BTreeMap<String, GadgetStat>,
    #[serde(skip)]
    tag_stack: Vec<u16>,
}

pub const RESIDUAL_TAG: &str = "residual";

impl Default for ConstraintSystem {
    fn default() -> Self {
        Self::new()
    }
}

impl ConstraintSystem {
    pub fn new() -> Self {
        ConstraintSystem {
            wire_kinds: vec![WireKind::One],
            constraints: Vec::new(),
            linear_constraints: Vec::new(),
            public_wires: Vec::new(),
            private_wires: Vec::new(),
            hints: Vec::new(),
            tags: vec![RESIDUAL_TAG.to_string()],
            tag_stats: BTreeMap::new(),
            tag_stack: Vec::new(),
        }
    }

    pub fn num_wires(&self) -> usize {
        self.wire_kinds.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    fn alloc(&mut self, kind: WireKind) -> Wire {
        let w = self.wire_kinds.len();
        self.wire_kinds.push(kind);
        w
    }

    /// Declare the next public wire (instance order is declaration order).
    pub fn alloc_public(&mut self) -> Lc {
        let w = self.alloc(WireKind::Public);
        self.public_wires.push(w);
        Lc::wire(w)
    }

    /// Declare an externally assigned private input wire.
    pub fn alloc_private(&mut self) -> Lc {
        let w = self.alloc(WireKind::Private);
        self.private_wires.push(w);
        Lc::wire(w)
    }

    /// Auxiliary wire pinned to a fixed value by a linear row; useful when
    /// a gadget needs a non-constant operand of known value.
    pub fn alloc_pinned(&mut self, value: FieldElement) -> Lc {
        let w = self.alloc(WireKind::Internal);
        self.hints.push(Hint::Const { out: w, value });
        let lc = Lc::wire(w);
        self.assert_linear_zero(lc.add_constant(-value));
        lc
    }

    // ---- gadget tagging ----

    fn tag_id(&mut self, name: &str) -> u16 {
        if let Some(i) = self.tags.iter().position(|t| t == name) {
            return i as u16;
        }
        self.tags.push(name.to_string());
        (self.tags.len() - 1) as u16
    }

    /// Enter a named gadget. Only the outermost gadget on the stack owns
    /// the rows emitted inside it, mirroring the component-level
    /// accounting of the cost table.
    pub fn begin_gadget(&mut self, name: &str) {
        let id = self.tag_id(name);
        if self.tag_stack.is_empty() {
            self.tag_stats.entry(name.to_string()).or_default().occurrences += 1;
        }
        self.tag_stack.push(id);
    }

    pub fn end_gadget(&mut self) {
        self.tag_stack.pop();
    }

    fn current_tag(&self) -> u16 {
        self.tag_stack.first().copied().unwrap_or(0)
    }

    fn note_constraint(&mut self) {
        let tag = self.current_tag() as usize;
        let name = self.tags[tag].clone();
        self.tag_stats.entry(name).or_default().constraints += 1;
    }

    // ---- emission ----

    /// Raw counted row: a * b = c.
    pub fn enforce(&mut self, a: Lc, b: Lc, c: Lc) {
        let tag = self.current_tag();
        self.constraints.push(Constraint { a, b, c, tag });
        self.note_constraint();
    }

    /// Uncounted linear row: lc = 0.
    pub fn assert_linear_zero(&mut self, lc: Lc) {
        let tag = self.current_tag();
        self.linear_constraints.push((lc, tag));
    }

    pub fn assert_equal(&mut self, a: &Lc, b: &Lc) {
        self.assert_linear_zero(a.sub(b));
    }

    /// Product with constant folding: a constant operand makes the result
    /// a plain scaled combination and emits nothing.
    pub fn mul(&mut self, a: &Lc, b: &Lc) -> Lc {
        if let Some(ca) = a.as_constant() {
            return b.scale(ca);
        }
        if let Some(cb) = b.as_constant() {
            return a.scale(cb);
        }
        let out = self.alloc(WireKind::Internal);
        self.hints.push(Hint::Mul {
            out,
            a: a.clone(),
            b: b.clone(),
        });
        self.enforce(a.clone(), b.clone(), Lc::wire(out));
        Lc::wire(out)
    }

    /// Quotient with the defining constraint den * out = num.
    pub fn div(&mut self, num: &Lc, den: &Lc) -> Result<Lc, CircuitError> {
        if let Some(cd) = den.as_constant() {
            let inv = cd.inverse().ok_or(CircuitError::DivisionByZero)?;
            return Ok(num.scale(inv));
        }
        let out = self.alloc(WireKind::Internal);
        self.hints.push(Hint::Div {
            out,
            num: num.clone(),
            den: den.clone(),
        });
        self.enforce(den.clone(), Lc::wire(out), num.clone());
        Ok(Lc::wire(out))
    }

    /// b * (b - 1) = 0.
    pub fn assert_boolean(&mut self, b: &Lc) {
        if let Some(c) = b.as_constant() {
            debug_assert!(c.is_zero() || c == FieldElement::ONE);
            return;
        }
        self.enforce(b.clone(), b.add_constant(-FieldElement::ONE), Lc::zero());
    }

    /// Little-endian decomposition with boolean rows per bit and an
    /// uncounted recomposition row.
    pub fn num2bits(&mut self, value: &Lc, n: usize) -> Vec<Lc> {
        let outs: Vec<Wire> = (0..n).map(|_| self.alloc(WireKind::Internal)).collect();
        self.hints.push(Hint::Bits {
            outs: outs.clone(),
            value: value.clone(),
        });
        let mut bits = Vec::with_capacity(n);
        let mut sum = Lc::zero();
        let mut p = FieldElement::ONE;
        let two = FieldElement::from_u64(2);
        for &w in &outs {
            let b = Lc::wire(w);
            self.assert_boolean(&b);
            sum = sum.add(&b.scale(p));
            p *= two;
            bits.push(b);
        }
        self.assert_linear_zero(sum.sub(value));
        bits
    }

    /// Internal wires for euclidean division; range rows are the caller's
    /// responsibility.
    pub fn divmod_wires(&mut self, value: &Lc, divisor: u64) -> (Lc, Lc) {
        let q = self.alloc(WireKind::Internal);
        let r = self.alloc(WireKind::Internal);
        self.hints.push(Hint::DivMod {
            quotient: q,
            remainder: r,
            value: value.clone(),
            divisor,
        });
        (Lc::wire(q), Lc::wire(r))
    }

    /// IsZero: (out, ) with out = 1 iff lc = 0. Two counted rows.
    pub fn is_zero(&mut self, x: &Lc) -> Lc {
        if let Some(c) = x.as_constant() {
            return if c.is_zero() { Lc::one() } else { Lc::zero() };
        }
        let inv = self.alloc(WireKind::Internal);
        self.hints.push(Hint::InvOrZero {
            out: inv,
            x: x.clone(),
        });
        // out = 1 - x*inv
        let prod = self.mul(x, &Lc::wire(inv));
        let out = Lc::one().sub(&prod);
        // x * out = 0
        self.enforce(x.clone(), out.clone(), Lc::zero());
        out
    }

    // ---- evaluation ----

    fn eval_lc(values: &[Option<FieldElement>], lc: &Lc) -> Result<FieldElement, CircuitError> {
        let mut acc = lc.constant;
        for &(w, c) in &lc.terms {
            let v = values[w].ok_or(CircuitError::MissingAssignment(w))?;
            acc += v * c;
        }
        Ok(acc)
    }

    /// Run hints over the supplied inputs, then check every row. Returns
    /// the full assignment or the first violated row with its gadget tag.
    pub fn evaluate(
        &self,
        publics: &[FieldElement],
        privates: &[FieldElement],
    ) -> Result<WitnessAssignment, CircuitError> {
        if publics.len() != self.public_wires.len() {
            return Err(CircuitError::InputCount {
                what: "public",
                expected: self.public_wires.len(),
                got: publics.len(),
            });
        }
        if privates.len() != self.private_wires.len() {
            return Err(CircuitError::InputCount {
                what: "private",
                expected: self.private_wires.len(),
                got: privates.len(),
            });
        }
        let mut values: Vec<Option<FieldElement>> = vec![None; self.wire_kinds.len()];
        values[0] = Some(FieldElement::ONE);
        for (&w, &v) in self.public_wires.iter().zip(publics) {
            values[w] = Some(v);
        }
        for (&w, &v) in self.private_wires.iter().zip(privates) {
            values[w] = Some(v);
        }
        for hint in &self.hints {
            match hint {
                Hint::Mul { out, a, b } => {
                    values[*out] = Some(Self::eval_lc(&values, a)? * Self::eval_lc(&values, b)?);
                }
                Hint::Div { out, num, den } => {
                    let d = Self::eval_lc(&values, den)?;
                    let inv = d.inverse().ok_or(CircuitError::DivisionByZero)?;
                    values[*out] = Some(Self::eval_lc(&values, num)? * inv);
                }
                Hint::InvOrZero { out, x } => {
                    let v = Self::eval_lc(&values, x)?;
                    values[*out] = Some(v.inverse().unwrap_or(FieldElement::ZERO));
                }
                Hint::Bits { outs, value } => {
                    let v = Self::eval_lc(&values, value)?.to_biguint();
                    for (i, &w) in outs.iter().enumerate() {
                        values[w] = Some(if v.bit(i as u64) {
                            FieldElement::ONE
                        } else {
                            FieldElement::ZERO
                        });
                    }
                }
                Hint::DivMod {
                    quotient,
                    remainder,
                    value,
                    divisor,
                } => {
                    let v = Self::eval_lc(&values, value)?.to_biguint();
                    let d = num_bigint::BigUint::from(*divisor);
                    values[*quotient] = Some(FieldElement::from_biguint(&(&v / &d)));
                    values[*remainder] = Some(FieldElement::from_biguint(&(&v % &d)));
                }
                Hint::Const { out, value } => {
                    values[*out] = Some(*value);
                }
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let a = Self::eval_lc(&values, &c.a)?;
            let b = Self::eval_lc(&values, &c.b)?;
            let cc = Self::eval_lc(&values, &c.c)?;
            if a * b != cc {
                return Err(CircuitError::Unsatisfied {
                    constraint: i,
                    gadget: self.tags[c.tag as usize].clone(),
                });
            }
        }
        for (i, (lc, tag)) in self.linear_constraints.iter().enumerate() {
            if !Self::eval_lc(&values, lc)?.is_zero() {
                return Err(CircuitError::UnsatisfiedLinear {
                    row: i,
                    gadget: self.tags[*tag as usize].clone(),
                });
            }
        }
        Ok(WitnessAssignment {
            values: values
                .into_iter()
                .map(|v| v.expect("all wires assigned"))
                .collect(),
        })
    }

    /// Stable serialized form; the digest of a circuit hashes these bytes.
    pub fn to_canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("serializable")
    }

    /// Circuit digest: sequential Poseidon compression of the serialized
    /// constraint system.
    pub fn digest(&self) -> FieldElement {
        zkcred_core::encode_long_string(&self.to_canonical_bytes())
    }
}

#[derive(Clone, Debug)]
pub struct WitnessAssignment {
    pub values: Vec<FieldElement>,
}

impl WitnessAssignment {
    pub fn value_of(&self, lc: &Lc) -> FieldElement {
        let mut acc = lc.constant;
        for &(w, c) in &lc.terms {
            acc += self.values[w] * c;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_folds_constants() {
        let mut cs = ConstraintSystem::new();
        let a = Lc::constant(FieldElement::from_u64(3));
        let b = Lc::constant(FieldElement::from_u64(5));
        let c = cs.mul(&a, &b);
        assert_eq!(c.as_constant(), Some(FieldElement::from_u64(15)));
        assert_eq!(cs.num_constraints(), 0);
    }

    #[test]
    fn mul_counts_once() {
        let mut cs = ConstraintSystem::new();
        let a = cs.alloc_private();
        let b = cs.alloc_private();
        cs.mul(&a, &b);
        assert_eq!(cs.num_constraints(), 1);
        let w = cs
            .evaluate(&[], &[FieldElement::from_u64(6), FieldElement::from_u64(7)])
            .unwrap();
        assert_eq!(*w.values.last().unwrap(), FieldElement::from_u64(42));
    }

    #[test]
    fn unsatisfied_reports_gadget() {
        let mut cs = ConstraintSystem::new();
        cs.begin_gadget("demo");
        let a = cs.alloc_private();
        // a must be boolean
        cs.assert_boolean(&a);
        cs.end_gadget();
        let err = cs.evaluate(&[], &[FieldElement::from_u64(2)]).unwrap_err();
        match err {
            CircuitError::Unsatisfied { gadget, .. } => assert_eq!(gadget, "demo"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn num2bits_round_trip() {
        let mut cs = ConstraintSystem::new();
        let v = cs.alloc_private();
        let bits = cs.num2bits(&v, 8);
        assert_eq!(cs.num_constraints(), 8);
        let w = cs.evaluate(&[], &[FieldElement::from_u64(0b1011_0010)]).unwrap();
        let got: Vec<bool> = bits
            .iter()
            .map(|b| w.value_of(b) == FieldElement::ONE)
            .collect();
        assert_eq!(
            got,
            vec![false, true, false, false, true, true, false, true]
        );
    }

    #[test]
    fn digest_is_stable_across_rebuilds() {
        let build = || {
            let mut cs = ConstraintSystem::new();
            let a = cs.alloc_private();
            let b = cs.alloc_private();
            let p = cs.mul(&a, &b);
            cs.assert_linear_zero(p.add_constant(-FieldElement::from_u64(6)));
            cs.digest()
        };
        assert_eq!(build(), build());
    }
}
