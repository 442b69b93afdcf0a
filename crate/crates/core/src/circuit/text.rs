//! Line-oriented circuit text format.
//!
//! ```text
//! # majority of three
//! INPUTS 3
//! w4 = AND w1 w2
//! w5 = XOR w1 w2
//! w6 = AND w5 w3
//! w7 = XOR w4 w6
//! OUTPUT w7
//! ```
//!
//! Wires `w1..wn` are the inputs. Gate names must strictly increase and
//! operands must name earlier wires. `NOT` and `OR` are accepted as sugar
//! and expanded into the XOR-AND basis, so the printed form of a parsed
//! circuit only ever contains `AND`, `XOR` and `ONE`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{Circuit, CircuitBuilder, Gate, Wire};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn wire_number(line: usize, token: &str) -> Result<usize> {
    token
        .strip_prefix('w')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .ok_or_else(|| err(line, format!("bad wire name {token:?}")))
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (lno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty circuit text".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["INPUTS", count] => count
                .parse::<usize>()
                .map_err(|_| err(lno, format!("bad input count {count:?}")))?,
            _ => return Err(err(lno, "expected `INPUTS <n>`")),
        };

        let mut b = CircuitBuilder::new(n);
        // text wire number -> builder wire
        let mut names: HashMap<usize, Wire> = (1..=n).map(|k| (k, Wire(k - 1))).collect();
        let mut last = n;
        let mut output = None;

        for (lno, line) in lines {
            if output.is_some() {
                return Err(err(lno, "content after OUTPUT"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if let ["OUTPUT", w] = tokens.as_slice() {
                let k = wire_number(lno, w)?;
                let wire = *names
                    .get(&k)
                    .ok_or_else(|| err(lno, format!("output {w} is not defined")))?;
                output = Some(wire);
                continue;
            }
            let (target, op, args) = match tokens.as_slice() {
                [target, "=", op, args @ ..] => (*target, *op, args),
                _ => return Err(err(lno, format!("cannot parse {line:?}"))),
            };
            let k = wire_number(lno, target)?;
            if k <= last {
                return Err(err(
                    lno,
                    format!("wire {target} does not follow w{last}; gate names must increase"),
                ));
            }
            let operand = |tok: &str| -> Result<Wire> {
                let j = wire_number(lno, tok)?;
                if j >= k {
                    return Err(err(lno, format!("forward reference to {tok} in {target}")));
                }
                names
                    .get(&j)
                    .copied()
                    .ok_or_else(|| err(lno, format!("wire {tok} is not defined")))
            };
            let wire = match (op, args) {
                ("AND", [x, y]) => {
                    let (x, y) = (operand(x)?, operand(y)?);
                    b.and(x, y)
                }
                ("XOR", [x, y]) => {
                    let (x, y) = (operand(x)?, operand(y)?);
                    b.xor(x, y)
                }
                ("OR", [x, y]) => {
                    let (x, y) = (operand(x)?, operand(y)?);
                    b.or(x, y)
                }
                ("NOT", [x]) => {
                    let x = operand(x)?;
                    b.not(x)
                }
                ("ONE", []) => b.fresh_one(),
                ("AND" | "XOR" | "OR" | "NOT" | "ONE", _) => {
                    return Err(err(lno, format!("wrong operand count for {op}")))
                }
                _ => return Err(err(lno, format!("unknown opcode {op:?}"))),
            };
            names.insert(k, wire);
            last = k;
        }
        let output = output.ok_or_else(|| Error::Parse("missing OUTPUT line".into()))?;
        Ok(b.finish(output))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "INPUTS {}", self.n)?;
        for (g, gate) in self.gates.iter().enumerate() {
            let w = Wire(self.n + g);
            match gate {
                Gate::And(a, b) => writeln!(f, "{w} = AND {a} {b}")?,
                Gate::Xor(a, b) => writeln!(f, "{w} = XOR {a} {b}")?,
                Gate::One => writeln!(f, "{w} = ONE")?,
            }
        }
        writeln!(f, "OUTPUT {}", self.output)
    }
}
