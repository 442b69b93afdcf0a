//! Straight-line normal form of XOR-AND circuits.
//!
//! Every XOR-AND circuit with `M` AND gates can be rewritten so that each
//! AND operand, and the output, is an affine combination of the constant 1,
//! the inputs `x_1..x_n` and the outputs `o_1..o_M` of earlier AND gates.
//! Masks are bit vectors of width `1 + n + M`: bit 0 is the constant, bit
//! `1 + j` is `x_{j+1}` and bit `1 + n + i` is `o_{i+1}`.

use std::fmt;

use bitvec::prelude::*;

use super::{Circuit, CircuitBuilder, Gate, Wire};
use crate::error::{Error, Result};
use crate::truth_table::{check_vars, TruthTable, MAX_VARS};

pub type Mask = BitVec<u64, Lsb0>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    n: usize,
    ands: Vec<(Mask, Mask)>,
    output: Mask,
}

impl NormalForm {
    pub fn new(n: usize, ands: Vec<(Mask, Mask)>, output: Mask) -> Result<Self> {
        let width = 1 + n + ands.len();
        let check_width = |m: &Mask| {
            if m.len() == width {
                Ok(())
            } else {
                Err(Error::Invalid(format!(
                    "mask width {} does not match 1 + n + M = {width}",
                    m.len()
                )))
            }
        };
        check_width(&output)?;
        for (i, (l, r)) in ands.iter().enumerate() {
            for m in [l, r] {
                check_width(m)?;
                if m[1 + n + i..].any() {
                    return Err(Error::Invalid(format!(
                        "AND gate o{} references itself or a later AND output",
                        i + 1
                    )));
                }
            }
        }
        Ok(NormalForm { n, ands, output })
    }

    /// Builds a normal form from masks packed into `u64`s (width ≤ 64).
    pub fn from_u64_masks(n: usize, ands: &[(u64, u64)], output: u64) -> Result<Self> {
        let width = 1 + n + ands.len();
        if width > 64 {
            return Err(Error::Invalid(format!("mask width {width} exceeds 64")));
        }
        let to_mask = |v: u64| -> Result<Mask> {
            if width < 64 && v >> width != 0 {
                return Err(Error::Invalid(format!("mask {v:#x} wider than {width} bits")));
            }
            let mut m = Mask::repeat(false, width);
            for i in 0..width {
                m.set(i, (v >> i) & 1 == 1);
            }
            Ok(m)
        };
        let ands = ands
            .iter()
            .map(|&(l, r)| Ok((to_mask(l)?, to_mask(r)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, ands, to_mask(output)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of AND gates `M`.
    pub fn and_count(&self) -> usize {
        self.ands.len()
    }

    pub fn width(&self) -> usize {
        1 + self.n + self.ands.len()
    }

    pub fn ands(&self) -> &[(Mask, Mask)] {
        &self.ands
    }

    pub fn output(&self) -> &Mask {
        &self.output
    }

    /// `(2M + 1)(n + M + 1)`: XOR gates sufficient to realize every mask.
    pub fn xor_bound(&self) -> usize {
        let m = self.ands.len();
        (2 * m + 1) * (self.n + m + 1)
    }

    /// `2(M + n)^2 + M`, valid for `n ≥ 3`.
    pub fn size_bound(&self) -> usize {
        let m = self.ands.len();
        2 * (m + self.n) * (m + self.n) + m
    }

    /// Evaluates the normal form directly on whole tables.
    pub fn truth_table(&self) -> Result<TruthTable> {
        check_vars("circuit (normal form)", self.n, MAX_VARS)?;
        let mut basis = Vec::with_capacity(self.width());
        basis.push(TruthTable::constant(self.n, true)?);
        for j in 0..self.n {
            basis.push(TruthTable::variable(self.n, j)?);
        }
        let zero = TruthTable::constant(self.n, false)?;
        let combine = |basis: &[TruthTable], mask: &Mask| -> TruthTable {
            mask.iter_ones()
                .filter(|&i| i < basis.len())
                .fold(zero.clone(), |acc, i| acc.xor(&basis[i]).expect("same n"))
        };
        for (l, r) in &self.ands {
            let lt = combine(&basis, l);
            let rt = combine(&basis, r);
            let words = lt.words().iter().zip(rt.words()).map(|(a, b)| a & b).collect();
            basis.push(TruthTable::from_words(self.n, words));
        }
        Ok(combine(&basis, &self.output))
    }
}

fn term_name(n: usize, i: usize) -> String {
    if i == 0 {
        "1".into()
    } else if i <= n {
        format!("x{i}")
    } else {
        format!("o{}", i - n)
    }
}

fn write_mask(f: &mut fmt::Formatter<'_>, n: usize, m: &Mask) -> fmt::Result {
    let terms: Vec<String> = m.iter_ones().map(|i| term_name(n, i)).collect();
    if terms.is_empty() {
        f.write_str("0")
    } else {
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NORMALFORM n={} ands={}", self.n, self.ands.len())?;
        for (i, (l, r)) in self.ands.iter().enumerate() {
            write!(f, "o{} = (", i + 1)?;
            write_mask(f, self.n, l)?;
            f.write_str(") & (")?;
            write_mask(f, self.n, r)?;
            f.write_str(")\n")?;
        }
        f.write_str("out = ")?;
        write_mask(f, self.n, &self.output)?;
        f.write_str("\n")
    }
}

/// Rewrites `c` into normal form by propagating affine masks forward.
/// The AND count is preserved exactly (dead AND gates included).
pub fn to_normal_form(c: &Circuit) -> NormalForm {
    let n = c.n();
    let width = 1 + n + c.count_and();
    let mut masks: Vec<Mask> = Vec::with_capacity(c.wire_count());
    for j in 0..n {
        let mut m = Mask::repeat(false, width);
        m.set(1 + j, true);
        masks.push(m);
    }
    let mut ands = Vec::new();
    for gate in c.gates() {
        let m = match *gate {
            Gate::One => {
                let mut m = Mask::repeat(false, width);
                m.set(0, true);
                m
            }
            Gate::Xor(a, b) => {
                let mut m = masks[a.0].clone();
                m ^= masks[b.0].as_bitslice();
                m
            }
            Gate::And(a, b) => {
                let mut m = Mask::repeat(false, width);
                m.set(1 + n + ands.len(), true);
                ands.push((masks[a.0].clone(), masks[b.0].clone()));
                m
            }
        };
        masks.push(m);
    }
    NormalForm {
        n,
        output: masks[c.output().0].clone(),
        ands,
    }
}

/// Realizes a normal form as a circuit with exactly `M` AND gates; every
/// mask becomes a left-deep XOR chain.
pub fn from_normal_form(nf: &NormalForm) -> Circuit {
    let n = nf.n;
    let mut b = CircuitBuilder::new(n);
    let mut and_wires: Vec<Wire> = Vec::with_capacity(nf.ands.len());

    fn realize(b: &mut CircuitBuilder, n: usize, and_wires: &[Wire], m: &Mask) -> Wire {
        let mut terms = m.iter_ones().map(|i| {
            if i == 0 {
                None
            } else if i <= n {
                Some(Wire(i - 1))
            } else {
                Some(and_wires[i - 1 - n])
            }
        });
        let first = match terms.next() {
            None => return b.zero(),
            Some(t) => t.unwrap_or_else(|| b.one()),
        };
        terms.fold(first, |acc, t| {
            let w = t.unwrap_or_else(|| b.one());
            b.xor(acc, w)
        })
    }

    for (l, r) in &nf.ands {
        let lw = realize(&mut b, n, &and_wires, l);
        let rw = realize(&mut b, n, &and_wires, r);
        and_wires.push(b.and(lw, rw));
    }
    let out = realize(&mut b, n, &and_wires, &nf.output);
    b.finish(out)
}
