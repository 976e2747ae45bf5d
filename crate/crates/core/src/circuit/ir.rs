//! Flat circuit representation and its line-oriented text form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{Basis, GateKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatchRole {
    /// Data patch `j` of a protocol; patch 0 holds the output.
    Data(usize),
    /// Resource patch `r`, consumed by data patch `r + 1`.
    Resource(usize),
    Memory,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchInfo {
    pub role: PatchRole,
    pub distance: usize,
    pub first_qubit: usize,
    pub num_qubits: usize,
}

impl PatchInfo {
    pub fn contains(&self, qubit: usize) -> bool {
        (self.first_qubit..self.first_qubit + self.num_qubits).contains(&qubit)
    }

    pub fn data_qubit(&self, local: usize) -> usize {
        self.first_qubit + local
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Reset {
        basis: Basis,
        targets: Vec<usize>,
    },
    /// Single-qubit Clifford applied to every target.
    Gate {
        kind: GateKind,
        targets: Vec<usize>,
    },
    Cx {
        pairs: Vec<(usize, usize)>,
    },
    Depolarize1 {
        p: f64,
        targets: Vec<usize>,
    },
    Depolarize2 {
        p: f64,
        pairs: Vec<(usize, usize)>,
    },
    /// Each recorded outcome is flipped independently with probability `flip`.
    Measure {
        basis: Basis,
        flip: f64,
        targets: Vec<usize>,
    },
    /// With probability `p`, Z on every target at once.
    LogicalZError {
        p: f64,
        targets: Vec<usize>,
    },
    Tick,
    Detector {
        patch: usize,
        basis: Basis,
        meas: Vec<usize>,
    },
    Observable {
        id: usize,
        meas: Vec<usize>,
    },
    Check {
        id: usize,
        meas: Vec<usize>,
    },
    /// Non-deterministic frame parity; recorded, never decoded.
    Frame {
        meas: Vec<usize>,
    },
}

impl Instruction {
    pub fn is_noise(&self) -> bool {
        match self {
            Instruction::Depolarize1 { .. }
            | Instruction::Depolarize2 { .. }
            | Instruction::LogicalZError { .. } => true,
            Instruction::Measure { flip, .. } => *flip > 0.0,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorInfo {
    pub patch: usize,
    pub basis: Basis,
    pub meas: Vec<usize>,
}

/// A transversal CNOT block between two patches, in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransversalCnot {
    pub instruction: usize,
    pub control_patch: usize,
    pub target_patch: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    instructions: Vec<Instruction>,
    patches: Vec<PatchInfo>,
    num_qubits: usize,
    measured_qubits: Vec<usize>,
    detectors: Vec<DetectorInfo>,
    observables: Vec<Vec<usize>>,
    checks: Vec<Vec<usize>>,
    frame: Option<Vec<usize>>,
    transversal: Vec<TransversalCnot>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates `num_qubits` consecutive qubits for a new patch.
    pub fn add_patch(&mut self, role: PatchRole, distance: usize, num_qubits: usize) -> usize {
        self.patches.push(PatchInfo {
            role,
            distance,
            first_qubit: self.num_qubits,
            num_qubits,
        });
        self.num_qubits += num_qubits;
        self.patches.len() - 1
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn patches(&self) -> &[PatchInfo] {
        &self.patches
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_measurements(&self) -> usize {
        self.measured_qubits.len()
    }

    /// Qubit recorded by each measurement index.
    pub fn measured_qubits(&self) -> &[usize] {
        &self.measured_qubits
    }

    pub fn detectors(&self) -> &[DetectorInfo] {
        &self.detectors
    }

    pub fn observables(&self) -> &[Vec<usize>] {
        &self.observables
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn frame(&self) -> Option<&[usize]> {
        self.frame.as_deref()
    }

    pub fn transversal_cnots(&self) -> &[TransversalCnot] {
        &self.transversal
    }

    pub fn patch_of_qubit(&self, qubit: usize) -> Option<usize> {
        let i = self.patches.partition_point(|p| p.first_qubit <= qubit);
        (i > 0 && self.patches[i - 1].contains(qubit)).then(|| i - 1)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_meas(&self, meas: &[usize]) -> Result<()> {
        match meas.iter().find(|&&m| m >= self.num_measurements()) {
            Some(m) => Err(Error::Config(format!(
                "annotation references measurement {m} before it exists"
            ))),
            None => Ok(()),
        }
    }

    fn check_prob(p: f64) -> Result<()> {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidProbability(p))
        }
    }

    /// Appends an instruction after validating addresses and probabilities.
    pub fn push(&mut self, inst: Instruction) -> Result<()> {
        match &inst {
            Instruction::Reset { targets, .. }
            | Instruction::Gate { targets, .. }
            | Instruction::Depolarize1 { targets, .. }
            | Instruction::LogicalZError { targets, .. } => {
                for &q in targets {
                    self.check_qubit(q)?;
                }
            }
            Instruction::Measure { targets, .. } => {
                for &q in targets {
                    self.check_qubit(q)?;
                }
            }
            Instruction::Cx { pairs } | Instruction::Depolarize2 { pairs, .. } => {
                for &(a, b) in pairs {
                    self.check_qubit(a)?;
                    self.check_qubit(b)?;
                    if a == b {
                        return Err(Error::InvalidGate(format!("pair on a single qubit {a}")));
                    }
                }
            }
            Instruction::Detector { meas, patch, .. } => {
                self.check_meas(meas)?;
                if *patch >= self.patches.len() {
                    return Err(Error::Config(format!(
                        "detector home patch {patch} is undefined"
                    )));
                }
            }
            Instruction::Observable { meas, .. }
            | Instruction::Check { meas, .. }
            | Instruction::Frame { meas } => self.check_meas(meas)?,
            Instruction::Tick => {}
        }
        match &inst {
            Instruction::Gate { kind, .. } if kind.arity() != 1 => {
                return Err(Error::InvalidGate(format!(
                    "{} is not a single-qubit gate",
                    kind.name()
                )));
            }
            Instruction::Depolarize1 { p, .. }
            | Instruction::Depolarize2 { p, .. }
            | Instruction::LogicalZError { p, .. } => Self::check_prob(*p)?,
            Instruction::Measure { flip, .. } => Self::check_prob(*flip)?,
            _ => {}
        }
        match &inst {
            Instruction::Measure { targets, .. } => self.measured_qubits.extend(targets),
            Instruction::Detector { patch, basis, meas } => self.detectors.push(DetectorInfo {
                patch: *patch,
                basis: *basis,
                meas: meas.clone(),
            }),
            Instruction::Observable { id, meas } => {
                if *id != self.observables.len() {
                    return Err(Error::Config(format!("observable id {id} is not dense")));
                }
                self.observables.push(meas.clone());
            }
            Instruction::Check { id, meas } => {
                if *id != self.checks.len() {
                    return Err(Error::Config(format!("check id {id} is not dense")));
                }
                self.checks.push(meas.clone());
            }
            Instruction::Frame { meas } => self.frame = Some(meas.clone()),
            _ => {}
        }
        self.instructions.push(inst);
        Ok(())
    }

    /// Appends a CX block pairing data qubit `i` of `control` with data
    /// qubit `i` of `target`.
    pub fn push_transversal_cnot(
        &mut self,
        control: usize,
        target: usize,
        num_data: usize,
    ) -> Result<()> {
        let (c, t) = (&self.patches[control], &self.patches[target]);
        if c.distance != t.distance {
            return Err(Error::Config(format!(
                "transversal CNOT between distances {} and {}",
                c.distance, t.distance
            )));
        }
        let pairs = (0..num_data)
            .map(|i| (c.data_qubit(i), t.data_qubit(i)))
            .collect();
        self.transversal.push(TransversalCnot {
            instruction: self.instructions.len(),
            control_patch: control,
            target_patch: target,
        });
        self.push(Instruction::Cx { pairs })
    }

    pub fn count_noise_instructions(&self) -> usize {
        self.instructions.iter().filter(|i| i.is_noise()).count()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn basis_suffix(b: Basis) -> &'static str {
    match b {
        Basis::X => "X",
        Basis::Z => "",
    }
}

fn write_list(f: &mut impl fmt::Write, items: &[usize]) -> fmt::Result {
    for q in items {
        write!(f, " {q}")?;
    }
    Ok(())
}

fn write_pairs(f: &mut impl fmt::Write, pairs: &[(usize, usize)]) -> fmt::Result {
    for (a, b) in pairs {
        write!(f, " {a} {b}")?;
    }
    Ok(())
}

fn role_text(role: PatchRole) -> String {
    match role {
        PatchRole::Data(j) => format!("data{j}"),
        PatchRole::Resource(r) => format!("resource{r}"),
        PatchRole::Memory => "memory".into(),
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Reset { basis, targets } => {
                write!(f, "R{}", basis_suffix(*basis))?;
                write_list(f, targets)
            }
            Instruction::Gate { kind, targets } => {
                write!(f, "{}", kind.name())?;
                write_list(f, targets)
            }
            Instruction::Cx { pairs } => {
                write!(f, "CX")?;
                write_pairs(f, pairs)
            }
            Instruction::Depolarize1 { p, targets } => {
                write!(f, "DEPOLARIZE1 {p}")?;
                write_list(f, targets)
            }
            Instruction::Depolarize2 { p, pairs } => {
                write!(f, "DEPOLARIZE2 {p}")?;
                write_pairs(f, pairs)
            }
            Instruction::Measure {
                basis,
                flip,
                targets,
            } => {
                write!(f, "M{} {flip}", basis_suffix(*basis))?;
                write_list(f, targets)
            }
            Instruction::LogicalZError { p, targets } => {
                write!(f, "ZERROR_L {p}")?;
                write_list(f, targets)
            }
            Instruction::Tick => write!(f, "TICK"),
            Instruction::Detector { patch, basis, meas } => {
                write!(f, "DETECTOR patch={patch} basis={basis:?} :")?;
                write_list(f, meas)
            }
            Instruction::Observable { id, meas } => {
                write!(f, "OBSERVABLE {id} :")?;
                write_list(f, meas)
            }
            Instruction::Check { id, meas } => {
                write!(f, "CHECK {id} :")?;
                write_list(f, meas)
            }
            Instruction::Frame { meas } => {
                write!(f, "FRAME :")?;
                write_list(f, meas)
            }
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.num_qubits)?;
        for p in &self.patches {
            writeln!(
                f,
                "PATCH {} d={} first={} count={}",
                role_text(p.role),
                p.distance,
                p.first_qubit,
                p.num_qubits
            )?;
        }
        let mut next_cnot = self.transversal.iter().peekable();
        for (i, inst) in self.instructions.iter().enumerate() {
            if let Some(t) = next_cnot.next_if(|t| t.instruction == i) {
                writeln!(f, "TRANSVERSAL {} {}", t.control_patch, t.target_patch)?;
            }
            writeln!(f, "{inst}")?;
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad number `{tok}`")))
}

fn parse_pairs(line: usize, toks: &[&str]) -> Result<Vec<(usize, usize)>> {
    if !toks.len().is_multiple_of(2) {
        return Err(parse_err(line, "odd number of pair targets"));
    }
    toks.chunks(2)
        .map(|c| Ok((parse_num(line, c[0])?, parse_num(line, c[1])?)))
        .collect()
}

fn parse_role(line: usize, s: &str) -> Result<PatchRole> {
    if s == "memory" {
        Ok(PatchRole::Memory)
    } else if let Some(j) = s.strip_prefix("data") {
        Ok(PatchRole::Data(parse_num(line, j)?))
    } else if let Some(r) = s.strip_prefix("resource") {
        Ok(PatchRole::Resource(parse_num(line, r)?))
    } else {
        Err(parse_err(line, format!("unknown patch role `{s}`")))
    }
}

fn key_value<'a>(line: usize, tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected `{key}=`")))
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut c = Circuit::new();
        let mut declared_qubits = None;
        let mut pending_transversal = None;
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (head, annotation) = match raw.split_once(':') {
                Some((h, a)) => (h, Some(a)),
                None => (raw, None),
            };
            let toks: Vec<&str> = head.split_whitespace().collect();
            let meas = || -> Result<Vec<usize>> {
                annotation
                    .unwrap_or("")
                    .split_whitespace()
                    .map(|t| parse_num(ln, t))
                    .collect()
            };
            let nums = |from: usize| -> Result<Vec<usize>> {
                toks[from..].iter().map(|t| parse_num(ln, t)).collect()
            };
            let need = |n: usize| {
                if toks.len() < n {
                    Err(parse_err(ln, "missing operand"))
                } else {
                    Ok(())
                }
            };
            let inst = match toks[0] {
                "QUBITS" => {
                    need(2)?;
                    declared_qubits = Some(parse_num::<usize>(ln, toks[1])?);
                    continue;
                }
                "PATCH" => {
                    need(5)?;
                    let role = parse_role(ln, toks[1])?;
                    let d = parse_num(ln, key_value(ln, toks[2], "d")?)?;
                    let first: usize = parse_num(ln, key_value(ln, toks[3], "first")?)?;
                    let count = parse_num(ln, key_value(ln, toks[4], "count")?)?;
                    if first != c.num_qubits {
                        return Err(parse_err(ln, "patches must be contiguous"));
                    }
                    c.add_patch(role, d, count);
                    continue;
                }
                "TRANSVERSAL" => {
                    need(3)?;
                    pending_transversal = Some((parse_num(ln, toks[1])?, parse_num(ln, toks[2])?));
                    continue;
                }
                "R" | "RX" => Instruction::Reset {
                    basis: if toks[0] == "RX" { Basis::X } else { Basis::Z },
                    targets: nums(1)?,
                },
                "H" | "S" | "X" | "Z" => Instruction::Gate {
                    kind: match toks[0] {
                        "H" => GateKind::H,
                        "S" => GateKind::S,
                        "X" => GateKind::X,
                        _ => GateKind::Z,
                    },
                    targets: nums(1)?,
                },
                "CX" => Instruction::Cx {
                    pairs: parse_pairs(ln, &toks[1..])?,
                },
                "DEPOLARIZE1" => {
                    need(2)?;
                    Instruction::Depolarize1 {
                        p: parse_num(ln, toks[1])?,
                        targets: nums(2)?,
                    }
                }
                "DEPOLARIZE2" => {
                    need(2)?;
                    Instruction::Depolarize2 {
                        p: parse_num(ln, toks[1])?,
                        pairs: parse_pairs(ln, &toks[2..])?,
                    }
                }
                "M" | "MX" => {
                    need(2)?;
                    Instruction::Measure {
                        basis: if toks[0] == "MX" { Basis::X } else { Basis::Z },
                        flip: parse_num(ln, toks[1])?,
                        targets: nums(2)?,
                    }
                }
                "ZERROR_L" => {
                    need(2)?;
                    Instruction::LogicalZError {
                        p: parse_num(ln, toks[1])?,
                        targets: nums(2)?,
                    }
                }
                "TICK" => Instruction::Tick,
                "DETECTOR" => {
                    need(3)?;
                    let patch = parse_num(ln, key_value(ln, toks[1], "patch")?)?;
                    let basis = match key_value(ln, toks[2], "basis")? {
                        "X" => Basis::X,
                        "Z" => Basis::Z,
                        other => return Err(parse_err(ln, format!("bad basis `{other}`"))),
                    };
                    Instruction::Detector {
                        patch,
                        basis,
                        meas: meas()?,
                    }
                }
                "OBSERVABLE" | "CHECK" => {
                    need(2)?;
                    let id = parse_num(ln, toks[1])?;
                    if toks[0] == "CHECK" {
                        Instruction::Check { id, meas: meas()? }
                    } else {
                        Instruction::Observable { id, meas: meas()? }
                    }
                }
                "FRAME" => Instruction::Frame { meas: meas()? },
                other => return Err(parse_err(ln, format!("unknown opcode `{other}`"))),
            };
            let pushed = match (pending_transversal.take(), &inst) {
                (Some((ctl, tgt)), Instruction::Cx { .. }) => {
                    c.transversal.push(TransversalCnot {
                        instruction: c.instructions.len(),
                        control_patch: ctl,
                        target_patch: tgt,
                    });
                    c.push(inst)
                }
                (Some(_), _) => return Err(parse_err(ln, "TRANSVERSAL must precede a CX line")),
                (None, _) => c.push(inst),
            };
            pushed.map_err(|e| parse_err(ln, e.to_string()))?;
        }
        if let Some(n) = declared_qubits {
            if n != c.num_qubits {
                return Err(parse_err(
                    0,
                    format!("QUBITS {n} but patches cover {}", c.num_qubits),
                ));
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Circuit {
        let mut c = Circuit::new();
        c.add_patch(PatchRole::Memory, 3, 2);
        c.push(Instruction::Reset {
            basis: Basis::X,
            targets: vec![0, 1],
        })
        .unwrap();
        c.push(Instruction::Depolarize1 {
            p: 0.001,
            targets: vec![0, 1],
        })
        .unwrap();
        c.push(Instruction::Cx {
            pairs: vec![(0, 1)],
        })
        .unwrap();
        c.push(Instruction::Depolarize2 {
            p: 1e-3,
            pairs: vec![(0, 1)],
        })
        .unwrap();
        c.push(Instruction::Tick).unwrap();
        c.push(Instruction::Measure {
            basis: Basis::Z,
            flip: 0.25,
            targets: vec![1, 0],
        })
        .unwrap();
        c.push(Instruction::Detector {
            patch: 0,
            basis: Basis::Z,
            meas: vec![0],
        })
        .unwrap();
        c.push(Instruction::Observable {
            id: 0,
            meas: vec![0, 1],
        })
        .unwrap();
        c
    }

    #[test]
    fn text_round_trip() {
        let c = tiny();
        let text = c.to_text();
        assert!(text.contains("\nDEPOLARIZE2 0.001 0 1\n"));
        assert!(text.contains("\nM 0.25 1 0\n"));
        let back: Circuit = text.parse().unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn annotations_must_reference_prior_measurements() {
        let mut c = Circuit::new();
        c.add_patch(PatchRole::Memory, 3, 1);
        let err = c.push(Instruction::Observable {
            id: 0,
            meas: vec![0],
        });
        assert!(err.is_err());
    }

    #[test]
    fn rejects_bad_probability_and_qubit() {
        let mut c = tiny();
        assert!(matches!(
            c.push(Instruction::Depolarize1 {
                p: 1.5,
                targets: vec![0]
            }),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            c.push(Instruction::Reset {
                basis: Basis::Z,
                targets: vec![9]
            }),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = "QUBITS 1\nPATCH memory d=3 first=0 count=1\nFOO 1".parse::<Circuit>();
        assert!(matches!(err, Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn patch_lookup() {
        let mut c = Circuit::new();
        c.add_patch(PatchRole::Data(0), 3, 17);
        c.add_patch(PatchRole::Data(1), 3, 17);
        assert_eq!(c.patch_of_qubit(0), Some(0));
        assert_eq!(c.patch_of_qubit(16), Some(0));
        assert_eq!(c.patch_of_qubit(17), Some(1));
        assert_eq!(c.patch_of_qubit(34), None);
    }
}
