// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Gates, circuits and the rule-based commutation relation used by the
//! dependency analysis.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Commutation behaviour shared by every gate of a kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CommutationClass {
    /// Diagonal in the computational basis (Z rotations, ZZ parity rotations, CZ).
    ZDiagonal,
    /// Rotations about the X axis.
    XAxis,
    /// Commutes with nothing that shares a qubit.
    Generic,
    /// Reserved for the exchange operations inserted by the router.
    Swap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateKind {
    pub name: String,
    pub arity: usize,
    pub commutation_class: CommutationClass,
    #[serde(default = "one")]
    pub default_latency: u32,
}

fn one() -> u32 {
    1
}

impl GateKind {
    pub fn new(name: &str, arity: usize, class: CommutationClass, default_latency: u32) -> Self {
        GateKind {
            name: name.to_string(),
            arity,
            commutation_class: class,
            default_latency,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidGateKind {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.commutation_class == CommutationClass::Swap || self.name.eq_ignore_ascii_case("swap") {
            return Err(Error::ReservedSwap(self.name.clone()));
        }
        if !(1..=2).contains(&self.arity) {
            return Err(bad("arity must be 1 or 2"));
        }
        if self.default_latency == 0 {
            return Err(bad("default latency must be at least 1"));
        }
        if self.name.is_empty() {
            return Err(bad("empty name"));
        }
        Ok(())
    }
}

/// Kinds available without declaring them in the circuit document.
pub fn builtin_kinds() -> Vec<GateKind> {
    use CommutationClass::*;
    vec![
        GateKind::new("rx", 1, XAxis, 1),
        GateKind::new("x", 1, XAxis, 1),
        GateKind::new("rz", 1, ZDiagonal, 1),
        GateKind::new("z", 1, ZDiagonal, 1),
        GateKind::new("h", 1, Generic, 1),
        GateKind::new("zz", 2, ZDiagonal, 1),
        GateKind::new("cz", 2, ZDiagonal, 1),
        GateKind::new("cx", 2, Generic, 1),
    ]
}

/// Index of a [`GateKind`] inside its circuit's kind table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KindId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub id: usize,
    pub kind: KindId,
    pub class: CommutationClass,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    pub latency: u32,
}

impl Gate {
    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn acts_on(&self, qubit: usize) -> bool {
        self.qubits.contains(&qubit)
    }

    pub fn shares_qubit(&self, other: &Gate) -> bool {
        self.qubits.iter().any(|q| other.acts_on(*q))
    }
}

/// Class-based commutation: disjoint supports always commute, otherwise
/// only two Z-diagonal or two X-axis gates do.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    if !a.shares_qubit(b) {
        return true;
    }
    classes_commute(a.class, b.class)
}

fn classes_commute(a: CommutationClass, b: CommutationClass) -> bool {
    use CommutationClass::*;
    matches!((a, b), (ZDiagonal, ZDiagonal) | (XAxis, XAxis))
}

/// A logical circuit in program order. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    kinds: Vec<GateKind>,
    gates: Vec<Gate>,
    overrides: HashMap<(KindId, KindId), bool>,
}

impl Circuit {
    pub fn builder(num_qubits: usize) -> CircuitBuilder {
        CircuitBuilder::new(num_qubits)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: usize) -> &Gate {
        &self.gates[id]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn kinds(&self) -> &[GateKind] {
        &self.kinds
    }

    pub fn kind(&self, gate: &Gate) -> &GateKind {
        &self.kinds[gate.kind.0]
    }

    /// Commutation with the document's pairwise overrides applied before the
    /// class rules. Overrides only matter when the gates share a qubit.
    pub fn commutes(&self, a: &Gate, b: &Gate) -> bool {
        !a.shares_qubit(b) || self.kinds_commute(a.kind, b.kind)
    }

    /// Whether gates of these kinds commute when they share a qubit.
    pub fn kinds_commute(&self, a: KindId, b: KindId) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        match self.overrides.get(&key) {
            Some(&c) => c,
            None => classes_commute(
                self.kinds[a.0].commutation_class,
                self.kinds[b.0].commutation_class,
            ),
        }
    }

    pub fn total_latency(&self) -> u64 {
        self.gates.iter().map(|g| g.latency as u64).sum()
    }

    pub fn parse(document: &str) -> Result<Circuit> {
        parse_circuit(document)
    }

    pub fn to_document(&self) -> CircuitDocument {
        let mut used = vec![false; self.kinds.len()];
        for g in &self.gates {
            used[g.kind.0] = true;
        }
        let gate_kinds = self
            .kinds
            .iter()
            .zip(&used)
            .filter(|(_, u)| **u)
            .map(|(k, _)| k.clone())
            .collect();
        let gates = self
            .gates
            .iter()
            .map(|g| GateDocument {
                kind: self.kinds[g.kind.0].name.clone(),
                qubits: g.qubits.clone(),
                params: g.params.clone(),
                latency: Some(g.latency),
            })
            .collect();
        let mut commutation_overrides: Vec<OverrideDocument> = self
            .overrides
            .iter()
            .map(|((a, b), c)| OverrideDocument {
                a: self.kinds[a.0].name.clone(),
                b: self.kinds[b.0].name.clone(),
                commutes: *c,
            })
            .collect();
        commutation_overrides.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
        CircuitDocument {
            num_qubits: self.num_qubits,
            gate_kinds,
            gates,
            commutation_overrides,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("circuit serializes")
    }
}

pub struct CircuitBuilder {
    num_qubits: usize,
    kinds: Vec<GateKind>,
    by_name: HashMap<String, KindId>,
    gates: Vec<Gate>,
    overrides: HashMap<(KindId, KindId), bool>,
}

impl CircuitBuilder {
    pub fn new(num_qubits: usize) -> Self {
        let mut b = CircuitBuilder {
            num_qubits,
            kinds: Vec::new(),
            by_name: HashMap::new(),
            gates: Vec::new(),
            overrides: HashMap::new(),
        };
        for k in builtin_kinds() {
            b.kind(k).expect("builtin kinds are valid");
        }
        b
    }

    /// Registers a kind, replacing any earlier kind with the same name.
    pub fn kind(&mut self, kind: GateKind) -> Result<KindId> {
        kind.validate()?;
        if let Some(&id) = self.by_name.get(&kind.name) {
            if self.gates.iter().any(|g| g.kind == id) {
                return Err(Error::InvalidGateKind {
                    name: kind.name,
                    reason: "redefined after use".into(),
                });
            }
            self.kinds[id.0] = kind;
            return Ok(id);
        }
        let id = KindId(self.kinds.len());
        self.by_name.insert(kind.name.clone(), id);
        self.kinds.push(kind);
        Ok(id)
    }

    pub fn kind_id(&self, name: &str) -> Result<KindId> {
        if name.eq_ignore_ascii_case("swap") {
            return Err(Error::ReservedSwap(name.to_string()));
        }
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGateKind(name.to_string()))
    }

    pub fn commutation_override(&mut self, a: &str, b: &str, commutes: bool) -> Result<()> {
        let (a, b) = (self.kind_id(a)?, self.kind_id(b)?);
        let key = if a <= b { (a, b) } else { (b, a) };
        self.overrides.insert(key, commutes);
        Ok(())
    }

    /// Appends a gate; `latency = None` uses the kind's default.
    pub fn gate(
        &mut self,
        kind: &str,
        qubits: &[usize],
        params: &[f64],
        latency: Option<u32>,
    ) -> Result<usize> {
        let kid = self.kind_id(kind)?;
        let k = &self.kinds[kid.0];
        let id = self.gates.len();
        if qubits.len() != k.arity {
            return Err(Error::ArityMismatch {
                gate: id,
                expected: k.arity,
                got: qubits.len(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    gate: id,
                    qubit: q,
                    width: self.num_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit { gate: id, qubit: q });
            }
        }
        let latency = latency.unwrap_or(k.default_latency);
        if latency == 0 {
            return Err(Error::ZeroLatency { gate: id });
        }
        self.gates.push(Gate {
            id,
            kind: kid,
            class: k.commutation_class,
            qubits: qubits.to_vec(),
            params: params.to_vec(),
            latency,
        });
        Ok(id)
    }

    pub fn build(self) -> Result<Circuit> {
        if self.num_qubits == 0 {
            return Err(Error::Malformed("num_qubits must be at least 1".into()));
        }
        Ok(Circuit {
            num_qubits: self.num_qubits,
            kinds: self.kinds,
            gates: self.gates,
            overrides: self.overrides,
        })
    }
}

/// On-disk circuit format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    pub num_qubits: usize,
    #[serde(default)]
    pub gate_kinds: Vec<GateKind>,
    pub gates: Vec<GateDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commutation_overrides: Vec<OverrideDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDocument {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideDocument {
    pub a: String,
    pub b: String,
    pub commutes: bool,
}

impl CircuitDocument {
    pub fn into_circuit(self) -> Result<Circuit> {
        let mut b = CircuitBuilder::new(self.num_qubits);
        for k in self.gate_kinds {
            b.kind(k)?;
        }
        for o in &self.commutation_overrides {
            b.commutation_override(&o.a, &o.b, o.commutes)?;
        }
        for g in &self.gates {
            b.gate(&g.kind, &g.qubits, &g.params, g.latency)?;
        }
        b.build()
    }
}

pub fn parse_circuit(document: &str) -> Result<Circuit> {
    let doc: CircuitDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_circuit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_gates(k1: &str, q1: &[usize], k2: &str, q2: &[usize]) -> Circuit {
        let mut b = Circuit::builder(4);
        b.gate(k1, q1, &[], None).unwrap();
        b.gate(k2, q2, &[], None).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn zz_rotations_commute_on_shared_qubit() {
        let c = two_gates("zz", &[0, 1], "zz", &[1, 2]);
        assert!(commutes(c.gate(0), c.gate(1)));
    }

    #[test]
    fn x_rotation_blocks_zz_on_shared_qubit() {
        let c = two_gates("rx", &[0], "zz", &[0, 1]);
        assert!(!commutes(c.gate(0), c.gate(1)));
        assert!(!commutes(c.gate(1), c.gate(0)));
    }

    #[test]
    fn disjoint_supports_commute() {
        let c = two_gates("cx", &[0, 1], "h", &[2]);
        assert!(commutes(c.gate(0), c.gate(1)));
        let c = two_gates("cx", &[0, 1], "cx", &[2, 3]);
        assert!(commutes(c.gate(0), c.gate(1)));
    }

    #[test]
    fn generic_gates_never_commute_when_sharing() {
        let c = two_gates("h", &[0], "h", &[0]);
        assert!(!commutes(c.gate(0), c.gate(1)));
    }

    #[test]
    fn override_table_takes_precedence() {
        let doc = r#"{"num_qubits": 2,
            "gate_kinds": [{"name": "ry", "arity": 1, "commutation_class": "GENERIC"}],
            "commutation_overrides": [{"a": "ry", "b": "ry", "commutes": true}],
            "gates": [{"kind": "ry", "qubits": [0]}, {"kind": "ry", "qubits": [0]}]}"#;
        let c = parse_circuit(doc).unwrap();
        assert!(c.commutes(c.gate(0), c.gate(1)));
        assert!(!commutes(c.gate(0), c.gate(1)));
    }

    #[test]
    fn empty_gate_list_is_valid() {
        let c = parse_circuit(r#"{"num_qubits": 3, "gates": []}"#).unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert!(c.is_empty());
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        let err = parse_circuit(r#"{"num_qubits": 4, "gates": [{"kind": "rx", "qubits": [5]}]}"#);
        assert!(matches!(err, Err(Error::QubitOutOfRange { qubit: 5, .. })));
    }

    #[test]
    fn duplicate_operand_is_rejected() {
        let err = parse_circuit(r#"{"num_qubits": 4, "gates": [{"kind": "cx", "qubits": [1, 1]}]}"#);
        assert!(matches!(err, Err(Error::DuplicateQubit { qubit: 1, .. })));
    }

    #[test]
    fn unknown_kind_and_swap_are_rejected() {
        let err = parse_circuit(r#"{"num_qubits": 2, "gates": [{"kind": "toffoli", "qubits": [0]}]}"#);
        assert!(matches!(err, Err(Error::UnknownGateKind(_))));
        let err = parse_circuit(r#"{"num_qubits": 2, "gates": [{"kind": "swap", "qubits": [0, 1]}]}"#);
        assert!(matches!(err, Err(Error::ReservedSwap(_))));
        let err = parse_circuit(
            r#"{"num_qubits": 2, "gate_kinds": [{"name": "sw", "arity": 2, "commutation_class": "SWAP"}], "gates": []}"#,
        );
        assert!(matches!(err, Err(Error::ReservedSwap(_))));
    }

    #[test]
    fn malformed_document_is_rejected() {
        assert!(matches!(parse_circuit("{\"num_qubits\": 2"), Err(Error::Malformed(_))));
        assert!(matches!(
            parse_circuit(r#"{"num_qubits": 2, "gates": [], "extra": 1}"#),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn default_latency_applied_when_omitted() {
        let doc = r#"{"num_qubits": 2,
            "gate_kinds": [{"name": "zz", "arity": 2, "commutation_class": "Z_DIAGONAL", "default_latency": 2}],
            "gates": [{"kind": "zz", "qubits": [0, 1]}, {"kind": "zz", "qubits": [0, 1], "latency": 5}]}"#;
        let c = parse_circuit(doc).unwrap();
        assert_eq!(c.gate(0).latency, 2);
        assert_eq!(c.gate(1).latency, 5);
    }

    #[test]
    fn document_round_trip() {
        let c = two_gates("zz", &[0, 1], "rx", &[3]);
        let back = parse_circuit(&c.to_json()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.gate(1).qubits, vec![3]);
        assert_eq!(back.gate(0).class, CommutationClass::ZDiagonal);
    }
}
