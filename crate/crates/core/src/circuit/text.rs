//! Line-oriented text format.
//!
//! ```text
//! qubits 3
//! cbits 1
//! outputs 2 1 0
//! h 0
//! cx 0 1
//! rz 0.25 2
//! paulirot XZ 0.5 0 2
//! measure 1 0
//! cpauli X c0 2
//! post c0 XII
//! ```

use crate::error::{QdcError, Result};
use crate::frame::ParityExpr;
use crate::pauli::{PauliRotation, PauliString};

use super::{Axis, Basis, Circuit, Gate1, Gate2, Instruction};

pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    if let Some(name) = c.name() {
        out.push_str(&format!("#@name {name}\n"));
    }
    for t in c.tags() {
        out.push_str(&format!("#@tag {t}\n"));
    }
    out.push_str(&format!("qubits {}\n", c.num_qubits()));
    out.push_str(&format!("cbits {}\n", c.num_cbits()));
    if let Some(outs) = c.outputs() {
        let list: Vec<String> = outs.iter().map(usize::to_string).collect();
        out.push_str(&format!("outputs {}\n", list.join(" ")));
    }
    for ins in c.instructions() {
        out.push_str(&instruction_line(ins));
        out.push('\n');
    }
    for (e, p) in c.postprocessing().terms() {
        out.push_str(&format!("post {e} {}\n", p.unsigned()));
    }
    out
}

fn axis_char(a: Axis) -> char {
    match a {
        Axis::X => 'X',
        Axis::Z => 'Z',
    }
}

fn instruction_line(ins: &Instruction) -> String {
    use Instruction::*;
    match ins {
        Gate1 { kind, qubit } => match kind {
            self::Gate1::H => format!("h {qubit}"),
            self::Gate1::S => format!("s {qubit}"),
            self::Gate1::Sdg => format!("sdg {qubit}"),
            self::Gate1::X => format!("x {qubit}"),
            self::Gate1::Y => format!("y {qubit}"),
            self::Gate1::Z => format!("z {qubit}"),
            self::Gate1::P(t) => format!("p {t} {qubit}"),
        },
        Rot { axis: Axis::X, angle, qubit } => format!("rx {angle} {qubit}"),
        Rot { axis: Axis::Z, angle, qubit } => format!("rz {angle} {qubit}"),
        Gate2 { kind, a, b } => match kind {
            self::Gate2::CX => format!("cx {a} {b}"),
            self::Gate2::CZ => format!("cz {} {}", a.min(b), a.max(b)),
            self::Gate2::Swap => format!("swap {} {}", a.min(b), a.max(b)),
        },
        PauliRot { rotation, qubits } => {
            let qs: Vec<String> = qubits.iter().map(usize::to_string).collect();
            format!("paulirot {} {} {}", rotation.pauli(), rotation.angle(), qs.join(" "))
        }
        Measure { qubit, cbit, basis: Basis::Z } => format!("measure {qubit} {cbit}"),
        Measure { qubit, cbit, basis: Basis::X } => format!("measure {qubit} {cbit} x"),
        Reset { qubit } => format!("reset {qubit}"),
        CondPauli { expr, pauli, qubit } => format!("cpauli {} {expr} {qubit}", axis_char(*pauli)),
        CondSignRot { axis, angle, sign, qubit } => {
            let rot = match axis {
                Axis::X => "rx",
                Axis::Z => "rz",
            };
            format!("csignrot {rot} {angle} {sign} {qubit}")
        }
        Barrier { qubits } => {
            let qs: Vec<String> = qubits.iter().map(usize::to_string).collect();
            format!("barrier {}", qs.join(" "))
        }
    }
}

pub fn parse(src: &str) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut n_cbits = 0usize;
    let mut circuit: Option<Circuit> = None;
    let mut name = None;
    let mut tags = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let err = |msg: String| QdcError::Syntax { line: line_no, msg };
        let line = raw.trim();
        if let Some(meta) = line.strip_prefix("#@") {
            let meta = meta.trim();
            if let Some(v) = meta.strip_prefix("name ") {
                name = Some(v.trim().to_string());
            } else if let Some(v) = meta.strip_prefix("tag ") {
                tags.push(v.trim().to_string());
            }
            continue;
        }
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let op = toks[0].to_ascii_lowercase();
        let args = &toks[1..];

        match op.as_str() {
            "qubits" => {
                if circuit.is_some() || n_qubits.is_some() {
                    return Err(err("duplicate or late qubits header".into()));
                }
                n_qubits = Some(parse_usize(one(args, line_no)?, line_no)?);
                continue;
            }
            "cbits" => {
                if circuit.is_some() {
                    return Err(err("cbits header after instructions".into()));
                }
                n_cbits = parse_usize(one(args, line_no)?, line_no)?;
                continue;
            }
            _ => {}
        }

        let c = match circuit.as_mut() {
            Some(c) => c,
            None => {
                let n = n_qubits.ok_or_else(|| err("missing qubits header".into()))?;
                circuit = Some(Circuit::new(n, n_cbits));
                circuit.as_mut().unwrap()
            }
        };
        let wrap = |e: QdcError| match e {
            QdcError::Syntax { .. } => e,
            other => QdcError::Syntax { line: line_no, msg: other.to_string() },
        };

        if op == "outputs" {
            let qs = args
                .iter()
                .map(|a| parse_usize(a, line_no))
                .collect::<Result<Vec<_>>>()?;
            c.set_outputs(qs).map_err(wrap)?;
            continue;
        }
        if op == "post" {
            if args.len() != 2 {
                return Err(err("post takes an expression and a Pauli string".into()));
            }
            let expr: ParityExpr = args[0].parse().map_err(wrap)?;
            let p: PauliString = args[1].parse().map_err(wrap)?;
            c.push_post(expr, p).map_err(wrap)?;
            continue;
        }

        let ins = parse_instruction(&op, args, line_no)?;
        c.push(ins).map_err(wrap)?;
    }

    let mut c = match circuit {
        Some(c) => c,
        None => {
            let n = n_qubits.ok_or(QdcError::Syntax { line: 0, msg: "missing qubits header".into() })?;
            Circuit::new(n, n_cbits)
        }
    };
    if let Some(n) = name {
        c.set_name(n);
    }
    for t in tags {
        c.add_tag(t);
    }
    Ok(c)
}

fn one<'a>(args: &[&'a str], line: usize) -> Result<&'a str> {
    match args {
        [a] => Ok(a),
        _ => Err(QdcError::Syntax { line, msg: format!("expected 1 argument, got {}", args.len()) }),
    }
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| QdcError::Syntax { line, msg: format!("bad integer {s:?}") })
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| QdcError::Syntax { line, msg: format!("bad number {s:?}") })?;
    if !v.is_finite() {
        return Err(QdcError::Syntax { line, msg: format!("non-finite angle {s:?}") });
    }
    Ok(v)
}

fn parse_cbit(s: &str, line: usize) -> Result<usize> {
    s.strip_prefix('c')
        .unwrap_or(s)
        .parse()
        .ok()
        .ok_or_else(|| QdcError::Syntax { line, msg: format!("bad classical bit {s:?}") })
}

fn parse_axis(s: &str, line: usize) -> Result<Axis> {
    match s {
        "X" | "x" => Ok(Axis::X),
        "Z" | "z" => Ok(Axis::Z),
        _ => Err(QdcError::Syntax { line, msg: format!("bad axis {s:?}") }),
    }
}

fn parse_instruction(op: &str, args: &[&str], line: usize) -> Result<Instruction> {
    let arity = |n: usize| -> Result<()> {
        if args.len() != n {
            return Err(QdcError::Syntax {
                line,
                msg: format!("{op} expects {n} arguments, got {}", args.len()),
            });
        }
        Ok(())
    };
    let q = |i: usize| parse_usize(args[i], line);
    let g1 = |kind| -> Result<Instruction> {
        arity(1)?;
        Ok(Instruction::Gate1 { kind, qubit: q(0)? })
    };
    let g2 = |kind| -> Result<Instruction> {
        arity(2)?;
        Ok(Instruction::Gate2 { kind, a: q(0)?, b: q(1)? })
    };
    match op {
        "h" => g1(Gate1::H),
        "s" => g1(Gate1::S),
        "sdg" => g1(Gate1::Sdg),
        "x" => g1(Gate1::X),
        "y" => g1(Gate1::Y),
        "z" => g1(Gate1::Z),
        "p" => {
            arity(2)?;
            Ok(Instruction::Gate1 { kind: Gate1::P(parse_f64(args[0], line)?), qubit: q(1)? })
        }
        "rx" | "rz" => {
            arity(2)?;
            let axis = if op == "rx" { Axis::X } else { Axis::Z };
            Ok(Instruction::Rot { axis, angle: parse_f64(args[0], line)?, qubit: q(1)? })
        }
        "cx" => g2(Gate2::CX),
        "cz" => g2(Gate2::CZ),
        "swap" => g2(Gate2::Swap),
        "paulirot" => {
            if args.len() < 3 {
                return Err(QdcError::Syntax { line, msg: "paulirot needs pauli, angle, qubits".into() });
            }
            let pauli: PauliString = args[0]
                .parse()
                .map_err(|e: QdcError| QdcError::Syntax { line, msg: e.to_string() })?;
            let angle = parse_f64(args[1], line)?;
            let qubits = args[2..]
                .iter()
                .map(|a| parse_usize(a, line))
                .collect::<Result<Vec<_>>>()?;
            let rotation = PauliRotation::new(pauli, angle)
                .map_err(|e| QdcError::Syntax { line, msg: e.to_string() })?;
            Ok(Instruction::PauliRot { rotation, qubits })
        }
        "measure" => {
            let basis = match args {
                [_, _] => Basis::Z,
                [_, _, b] if b.eq_ignore_ascii_case("x") => Basis::X,
                [_, _, b] if b.eq_ignore_ascii_case("z") => Basis::Z,
                _ => return Err(QdcError::Syntax { line, msg: "measure takes: q c [x]".into() }),
            };
            Ok(Instruction::Measure { qubit: q(0)?, cbit: parse_cbit(args[1], line)?, basis })
        }
        "reset" => {
            arity(1)?;
            Ok(Instruction::Reset { qubit: q(0)? })
        }
        "cpauli" => {
            arity(3)?;
            let expr: ParityExpr = args[1]
                .parse()
                .map_err(|e: QdcError| QdcError::Syntax { line, msg: e.to_string() })?;
            Ok(Instruction::CondPauli {
                expr,
                pauli: parse_axis(args[0], line)?,
                qubit: q(2)?,
            })
        }
        "csignrot" => {
            arity(4)?;
            let axis = match args[0] {
                "rx" => Axis::X,
                "rz" => Axis::Z,
                a => return Err(QdcError::Syntax { line, msg: format!("bad rotation {a:?}") }),
            };
            let sign: ParityExpr = args[2]
                .parse()
                .map_err(|e: QdcError| QdcError::Syntax { line, msg: e.to_string() })?;
            Ok(Instruction::CondSignRot {
                axis,
                angle: parse_f64(args[1], line)?,
                sign,
                qubit: q(3)?,
            })
        }
        "barrier" => {
            let qubits = args
                .iter()
                .map(|a| parse_usize(a, line))
                .collect::<Result<Vec<_>>>()?;
            Ok(Instruction::Barrier { qubits })
        }
        other => Err(QdcError::Syntax { line, msg: format!("unknown instruction {other:?}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
#@name demo
qubits 3
cbits 2
outputs 2 1 0
h 0
cx 0 1
cz 2 1
rz 0.25 2
p -1.5 0
paulirot -XZ 0.5 0 2
measure 1 0
measure 0 c1 x
cpauli X c0^c1 2
csignrot rz 0.75 c0^1 2
reset 1
barrier 0 1 2
post c1 ZIX
";

    #[test]
    fn round_trip() {
        let c = parse(SAMPLE).unwrap();
        assert_eq!(c.name(), Some("demo"));
        assert_eq!(c.outputs(), Some(&[2, 1, 0][..]));
        let text = serialize(&c);
        assert!(text.contains("cz 1 2"));
        assert!(text.contains("paulirot XZ -0.5 0 2"));
        let again = parse(&text).unwrap();
        assert_eq!(again, c);
        assert_eq!(serialize(&again), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "qubits 2\nh 0\ncx 0 0\n";
        match parse(bad) {
            Err(QdcError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = "qubits 2\ncbits 1\ncpauli X c0 1\n";
        assert!(matches!(parse(bad), Err(QdcError::Syntax { line: 3, .. })));
        assert!(matches!(parse("qubits 2\nh 5\n"), Err(QdcError::Syntax { line: 2, .. })));
        assert!(matches!(parse("qubits 2\nfoo 1\n"), Err(QdcError::Syntax { line: 2, .. })));
        assert!(parse("h 0\n").is_err());
    }

    #[test]
    fn comments_ignored() {
        let c = parse("# header\nqubits 1\nh 0 # trailing\n\n").unwrap();
        assert_eq!(c.len(), 1);
    }
}
