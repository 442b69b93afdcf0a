//! XOR-AND circuits over the basis `(∧, ⊕, 1)` with fanin 2.
//!
//! A circuit on `n` inputs owns wires `0..n` (the inputs) followed by one
//! wire per gate. Gates only reference earlier wires, so the gate list is
//! already a topological order.

mod normal_form;
mod text;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::truth_table::{check_vars, tail_mask, var_word, word_count, Assignment, TruthTable, MAX_VARS};

pub use normal_form::{from_normal_form, to_normal_form, NormalForm};

/// A wire index. Inputs are `0..n`; gate `g` drives wire `n + g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wire(pub usize);

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And(Wire, Wire),
    Xor(Wire, Wire),
    One,
}

impl Gate {
    fn operands(&self) -> Option<(Wire, Wire)> {
        match *self {
            Gate::And(a, b) | Gate::Xor(a, b) => Some((a, b)),
            Gate::One => None,
        }
    }
}

/// A single-output XOR-AND circuit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    output: Wire,
}

impl Circuit {
    /// Validates the gate list: every operand must precede its gate.
    pub fn new(n: usize, gates: Vec<Gate>, output: Wire) -> Result<Self> {
        for (g, gate) in gates.iter().enumerate() {
            if let Some((a, b)) = gate.operands() {
                for w in [a, b] {
                    if w.0 >= n + g {
                        return Err(Error::Invalid(format!(
                            "gate {} references {w}, which does not precede it",
                            Wire(n + g)
                        )));
                    }
                }
            }
        }
        if output.0 >= n + gates.len() {
            return Err(Error::Invalid(format!("output {output} is not a wire")));
        }
        Ok(Circuit { n, gates, output })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> Wire {
        self.output
    }

    /// Gate count `m`.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn wire_count(&self) -> usize {
        self.n + self.gates.len()
    }

    /// Number of AND gates, reachable or not.
    pub fn count_and(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::And(..))).count()
    }

    pub fn count_xor(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Xor(..))).count()
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut values = Vec::with_capacity(self.wire_count());
        values.extend_from_slice(x.values());
        for gate in &self.gates {
            let v = match *gate {
                Gate::And(a, b) => values[a.0] & values[b.0],
                Gate::Xor(a, b) => values[a.0] ^ values[b.0],
                Gate::One => true,
            };
            values.push(v);
        }
        Ok(values[self.output.0])
    }

    /// Truth table of the computed function, 64 points per gate pass.
    pub fn truth_table(&self) -> Result<TruthTable> {
        check_vars("circuit", self.n, MAX_VARS)?;
        let words = word_count(self.n);
        let mut values = vec![0u64; self.wire_count()];
        let mut out = Vec::with_capacity(words);
        for w in 0..words {
            for (j, v) in values.iter_mut().take(self.n).enumerate() {
                *v = var_word(j, w);
            }
            for (g, gate) in self.gates.iter().enumerate() {
                values[self.n + g] = match *gate {
                    Gate::And(a, b) => values[a.0] & values[b.0],
                    Gate::Xor(a, b) => values[a.0] ^ values[b.0],
                    Gate::One => u64::MAX,
                };
            }
            out.push(values[self.output.0]);
        }
        if self.n < 6 {
            out[0] &= tail_mask(self.n);
        }
        Ok(TruthTable::from_words(self.n, out))
    }

    /// Fixes the given inputs (0-based index, value) and propagates the
    /// constants. Every AND with a constant operand disappears, so the AND
    /// count never grows. Remaining inputs keep their relative order.
    pub fn restrict(&self, fixed: &[(usize, bool)]) -> Result<Circuit> {
        let mut assigned = vec![None; self.n];
        for &(var, value) in fixed {
            if var >= self.n {
                return Err(Error::VariableOutOfRange {
                    index: var,
                    n: self.n,
                });
            }
            if assigned[var].replace(value).is_some() {
                return Err(Error::DuplicateAssignment(var));
            }
        }
        let k = assigned.iter().filter(|a| a.is_none()).count();
        let mut b = CircuitBuilder::new(k);
        let mut vals = Vec::with_capacity(self.wire_count());
        let mut next_input = 0;
        for a in &assigned {
            vals.push(match a {
                Some(v) => Val::Const(*v),
                None => {
                    next_input += 1;
                    Val::Wire(Wire(next_input - 1), false)
                }
            });
        }
        for gate in &self.gates {
            let v = match *gate {
                Gate::One => Val::Const(true),
                Gate::Xor(x, y) => match (vals[x.0], vals[y.0]) {
                    (Val::Const(p), Val::Const(q)) => Val::Const(p ^ q),
                    (Val::Const(p), Val::Wire(w, neg)) | (Val::Wire(w, neg), Val::Const(p)) => {
                        Val::Wire(w, neg ^ p)
                    }
                    (Val::Wire(u, nu), Val::Wire(w, nw)) => {
                        if u == w {
                            Val::Const(nu ^ nw)
                        } else {
                            Val::Wire(b.xor(u, w), nu ^ nw)
                        }
                    }
                },
                Gate::And(x, y) => match (vals[x.0], vals[y.0]) {
                    (Val::Const(p), Val::Const(q)) => Val::Const(p & q),
                    (Val::Const(false), _) | (_, Val::Const(false)) => Val::Const(false),
                    (Val::Const(true), other) | (other, Val::Const(true)) => other,
                    (Val::Wire(u, nu), Val::Wire(w, nw)) => {
                        if u == w {
                            if nu == nw {
                                Val::Wire(u, nu)
                            } else {
                                Val::Const(false)
                            }
                        } else {
                            let l = b.materialize(u, nu);
                            let r = b.materialize(w, nw);
                            Val::Wire(b.and(l, r), false)
                        }
                    }
                },
            };
            vals.push(v);
        }
        let out = match vals[self.output.0] {
            Val::Const(true) => b.one(),
            Val::Const(false) => b.zero(),
            Val::Wire(w, neg) => b.materialize(w, neg),
        };
        Ok(b.finish(out))
    }

    /// Drops gates that do not reach the output.
    pub fn eliminate_dead_gates(&self) -> Circuit {
        let mut live = vec![false; self.wire_count()];
        live[self.output.0] = true;
        for g in (0..self.gates.len()).rev() {
            if live[self.n + g] {
                if let Some((a, b)) = self.gates[g].operands() {
                    live[a.0] = true;
                    live[b.0] = true;
                }
            }
        }
        let mut remap: Vec<usize> = (0..self.n).collect();
        remap.resize(self.wire_count(), usize::MAX);
        let mut gates = Vec::new();
        for (g, gate) in self.gates.iter().enumerate() {
            if !live[self.n + g] {
                continue;
            }
            let r = |w: Wire| Wire(remap[w.0]);
            let remapped = match *gate {
                Gate::And(a, b) => Gate::And(r(a), r(b)),
                Gate::Xor(a, b) => Gate::Xor(r(a), r(b)),
                Gate::One => Gate::One,
            };
            remap[self.n + g] = self.n + gates.len();
            gates.push(remapped);
        }
        Circuit {
            n: self.n,
            output: Wire(remap[self.output.0]),
            gates,
        }
    }

    /// A random circuit with `m` gates drawn from a ChaCha8 stream. Roughly
    /// 40% AND, 50% XOR and 10% ONE gates; the output is the last wire.
    pub fn random(n: usize, m: usize, seed: u64) -> Result<Circuit> {
        if n == 0 && m == 0 {
            return Err(Error::Invalid("a random circuit needs a wire".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gates = Vec::with_capacity(m);
        for g in 0..m {
            let wires = n + g;
            let roll: u32 = rng.gen_range(0..10);
            let gate = if wires == 0 || roll == 0 {
                Gate::One
            } else {
                let a = Wire(rng.gen_range(0..wires));
                let b = Wire(rng.gen_range(0..wires));
                if roll <= 4 {
                    Gate::And(a, b)
                } else {
                    Gate::Xor(a, b)
                }
            };
            gates.push(gate);
        }
        Circuit::new(n, gates, Wire(n + m - 1))
    }
}

#[derive(Debug, Clone, Copy)]
enum Val {
    Const(bool),
    /// A wire of the new circuit, possibly negated.
    Wire(Wire, bool),
}

/// Incremental construction of a [`Circuit`].
///
/// Also provides the NOT and OR sugar used for propositional formulas:
/// `¬u = u ⊕ 1` and `u ∨ v = (u ⊕ v) ⊕ (u ∧ v)`.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n: usize,
    gates: Vec<Gate>,
    one: Option<Wire>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        CircuitBuilder {
            n,
            gates: Vec::new(),
            one: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn input(&self, var: usize) -> Wire {
        assert!(var < self.n, "input {var} out of range");
        Wire(var)
    }

    fn push(&mut self, gate: Gate) -> Wire {
        self.gates.push(gate);
        Wire(self.n + self.gates.len() - 1)
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::And(a, b))
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        self.push(Gate::Xor(a, b))
    }

    /// The shared constant-1 wire, created on first use.
    pub fn one(&mut self) -> Wire {
        match self.one {
            Some(w) => w,
            None => {
                let w = self.push(Gate::One);
                self.one = Some(w);
                w
            }
        }
    }

    /// A new ONE gate, kept distinct from any earlier one. It becomes the
    /// shared wire if none exists yet.
    pub(crate) fn fresh_one(&mut self) -> Wire {
        let w = self.push(Gate::One);
        self.one.get_or_insert(w);
        w
    }

    pub fn zero(&mut self) -> Wire {
        let one = self.one();
        self.xor(one, one)
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        let one = self.one();
        self.xor(a, one)
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        let x = self.xor(a, b);
        let y = self.and(a, b);
        self.xor(x, y)
    }

    fn materialize(&mut self, w: Wire, negated: bool) -> Wire {
        if negated {
            self.not(w)
        } else {
            w
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn finish(self, output: Wire) -> Circuit {
        Circuit::new(self.n, self.gates, output).expect("builder only references existing wires")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> Circuit {
        let mut b = CircuitBuilder::new(2);
        let o = b.and(Wire(0), Wire(1));
        b.finish(o)
    }

    fn a(s: &str) -> Assignment {
        Assignment::parse(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let c = and2();
        assert!(c.evaluate(&a("11")).unwrap());
        assert!(!c.evaluate(&a("01")).unwrap());
        let mut b = CircuitBuilder::new(1);
        let o = b.not(Wire(0));
        let not = b.finish(o);
        assert!(not.evaluate(&a("0")).unwrap());
        assert!(c.evaluate(&a("1")).is_err());
    }

    #[test]
    fn truth_table_examples() {
        assert_eq!(and2().truth_table().unwrap().to_string(), "0001");
        let mut b = CircuitBuilder::new(2);
        let x = b.xor(Wire(0), Wire(1));
        let o = b.not(x);
        assert_eq!(b.finish(o).truth_table().unwrap().to_string(), "1001");
        let mut b = CircuitBuilder::new(7);
        let o = b.one();
        assert_eq!(b.finish(o).truth_table().unwrap().weight(), 128);
    }

    #[test]
    fn word_parallel_matches_scalar() {
        for seed in 0..20 {
            let c = Circuit::random(8, 30, seed).unwrap();
            let t = c.truth_table().unwrap();
            for i in 0..256 {
                assert_eq!(t.get(i), c.evaluate(&Assignment::from_index(8, i)).unwrap());
            }
        }
    }

    #[test]
    fn count_and_is_syntactic() {
        assert_eq!(and2().count_and(), 1);
        let mut b = CircuitBuilder::new(3);
        let x = b.xor(Wire(0), Wire(1));
        let o = b.xor(x, Wire(2));
        assert_eq!(b.finish(o).count_and(), 0);
        let mut b = CircuitBuilder::new(2);
        let o = b.and(Wire(0), Wire(1));
        b.and(Wire(0), o);
        let c = b.finish(o);
        assert_eq!(c.count_and(), 2);
        assert_eq!(c.eliminate_dead_gates().count_and(), 1);
    }

    #[test]
    fn restrict_examples() {
        let r = and2().restrict(&[(1, true)]).unwrap();
        assert_eq!(r.n(), 1);
        assert_eq!(r.count_and(), 0);
        assert_eq!(r.truth_table().unwrap().to_string(), "01");
        let r = and2().restrict(&[(1, false)]).unwrap();
        assert_eq!(r.count_and(), 0);
        assert_eq!(r.truth_table().unwrap().to_string(), "00");
        assert!(and2().restrict(&[(5, true)]).is_err());
        assert!(and2().restrict(&[(0, true), (0, true)]).is_err());
    }

    #[test]
    fn restrict_commutes_with_tables() {
        for seed in 0..50 {
            let c = Circuit::random(8, 40, seed).unwrap();
            let fixed = [(1, seed % 2 == 0), (4, true), (6, false), (7, seed % 3 == 0)];
            let r = c.restrict(&fixed).unwrap();
            assert!(r.count_and() <= c.count_and());
            assert_eq!(
                r.truth_table().unwrap(),
                c.truth_table().unwrap().restrict(&fixed).unwrap()
            );
        }
    }

    #[test]
    fn rejects_forward_references() {
        assert!(Circuit::new(2, vec![Gate::And(Wire(0), Wire(2))], Wire(2)).is_err());
        assert!(Circuit::new(2, vec![], Wire(2)).is_err());
        assert!(Circuit::new(2, vec![], Wire(1)).is_ok());
    }
}
