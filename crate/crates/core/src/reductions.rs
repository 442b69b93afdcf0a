//! Executable reductions between circuit problems.
//!
//! - Non-affineness certificates: a pair `(x, y)` with
//!   `f(x ⊕ y) ⊕ f(x) ⊕ f(y) ⊕ f(0) = 1` proves that `f` is not affine, and
//!   checking one costs four circuit evaluations.
//! - TAUTOLOGY → AFFINE: a formula that is 1 on `0` and on every unit
//!   vector is affine iff it is constant 1.
//! - #SAT → nonlinearity: `C'(x, z) = C(x) ∧ z_1 ∧ … ∧ z_t` has the zero
//!   function as a best affine approximation once `t ≥ 2`, so
//!   `NL(C') = #SAT(C)`. With `t = 1` the affine function `z_1` competes
//!   and the nonlinearity is `min(#SAT, 2^n - #SAT)`.

use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, Gate, Wire};
use crate::error::{Error, Result};
use crate::truth_table::{check_vars, Assignment, TruthTable, MAX_VARS};
use crate::walsh::nonlinearity;

/// Largest input count for the exhaustive affineness decision.
pub const AFFINE_MAX_VARS: usize = 16;
/// Padding width used by default for the #SAT gadget.
pub const DEFAULT_PADDING: usize = 10;

/// A pair of points on which a function violates the affine identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonAffineWitness {
    pub x: Assignment,
    pub y: Assignment,
}

/// True iff `(x, y)` witnesses that `c` does not compute an affine function.
pub fn check_affine_certificate(c: &Circuit, x: &Assignment, y: &Assignment) -> Result<bool> {
    let sum = x.xor(y)?;
    let zero = Assignment::zero(c.n());
    Ok(c.evaluate(&sum)? ^ c.evaluate(x)? ^ c.evaluate(y)? ^ c.evaluate(&zero)?)
}

/// Finds a witness pair on a table, or `None` if the table is affine.
///
/// The affine candidate is fitted on `0` and the unit vectors. At the
/// first index `z` where the table departs from it, `z` has at least two
/// bits set; splitting off its lowest bit gives `x` and `y = z ⊕ x`, both
/// smaller than `z` and hence on the fit.
pub fn non_affine_witness(tt: &TruthTable) -> Option<NonAffineWitness> {
    let n = tt.n();
    let c = tt.get(0);
    let slope = (0..n)
        .filter(|&j| tt.get(1 << j) != c)
        .fold(0usize, |acc, j| acc | 1 << j);
    let z = (0..tt.len()).find(|&z| tt.get(z) != (c ^ ((z & slope).count_ones() % 2 == 1)))?;
    let x = z & z.wrapping_neg();
    Some(NonAffineWitness {
        x: Assignment::from_index(n, x),
        y: Assignment::from_index(n, z ^ x),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCheck {
    pub affine: bool,
    pub witness: Option<NonAffineWitness>,
}

/// Decides whether `c` computes an affine function by expanding its truth
/// table (`n ≤ 16`); a non-affine verdict carries a checked witness.
pub fn is_affine(c: &Circuit) -> Result<AffineCheck> {
    check_vars("reductions", c.n(), AFFINE_MAX_VARS)?;
    let tt = c.truth_table()?;
    let affine = nonlinearity(&tt) == 0;
    let witness = non_affine_witness(&tt);
    debug_assert_eq!(affine, witness.is_none());
    if let Some(w) = &witness {
        debug_assert!(check_affine_certificate(c, &w.x, &w.y)?);
    }
    Ok(AffineCheck { affine, witness })
}

/// A circuit read as a propositional formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaCircuit(Circuit);

impl FormulaCircuit {
    pub fn new(c: Circuit) -> Self {
        FormulaCircuit(c)
    }

    pub fn circuit(&self) -> &Circuit {
        &self.0
    }

    pub fn into_circuit(self) -> Circuit {
        self.0
    }

    /// Tautology check by truth-table exhaustion.
    pub fn is_tautology(&self) -> Result<bool> {
        let tt = self.0.truth_table()?;
        Ok(tt.weight() == tt.len() as u64)
    }
}

impl From<Circuit> for FormulaCircuit {
    fn from(c: Circuit) -> Self {
        FormulaCircuit(c)
    }
}

/// `x_1 ∧ x_2` on `max(n, 2)` inputs, the extra inputs unused.
pub fn canonical_non_affine(n: usize) -> Circuit {
    let mut b = CircuitBuilder::new(n.max(2));
    let o = b.and(Wire(0), Wire(1));
    b.finish(o)
}

/// Maps a formula to a circuit that is affine iff the formula is a
/// tautology. The formula is probed at `0` and every unit vector; any zero
/// there rules out a tautology and yields [`canonical_non_affine`],
/// otherwise the formula itself is returned.
pub fn tautology_to_affine(f: &FormulaCircuit) -> Result<Circuit> {
    let c = f.circuit();
    let n = c.n();
    let mut probes = vec![Assignment::zero(n)];
    probes.extend((0..n).map(|j| Assignment::from_index(n, 1 << j)));
    for p in &probes {
        if !c.evaluate(p)? {
            return Ok(canonical_non_affine(n));
        }
    }
    Ok(c.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub original: Circuit,
    pub padded: Circuit,
    pub t: usize,
}

/// Builds `C'(x_1..x_n, x_{n+1}..x_{n+t}) = C(x) ∧ x_{n+1} ∧ … ∧ x_{n+t}`.
pub fn sat_count_gadget(c: &Circuit, t: usize) -> Result<GadgetInstance> {
    if t == 0 {
        return Err(Error::Invalid("padding width t must be at least 1".into()));
    }
    let n = c.n();
    if n + t > MAX_VARS {
        return Err(Error::cap("reductions", "n + t", n + t, MAX_VARS));
    }
    let shift = |w: Wire| if w.0 < n { w } else { Wire(w.0 + t) };
    let mut gates: Vec<Gate> = c
        .gates()
        .iter()
        .map(|g| match *g {
            Gate::And(a, b) => Gate::And(shift(a), shift(b)),
            Gate::Xor(a, b) => Gate::Xor(shift(a), shift(b)),
            Gate::One => Gate::One,
        })
        .collect();
    let mut acc = shift(c.output());
    for j in 0..t {
        gates.push(Gate::And(acc, Wire(n + j)));
        acc = Wire(n + t + gates.len() - 1);
    }
    let padded = Circuit::new(n + t, gates, acc)?;
    Ok(GadgetInstance {
        original: c.clone(),
        padded,
        t,
    })
}

/// Number of satisfying assignments by truth-table expansion.
pub fn brute_force_sat_count(c: &Circuit) -> Result<u64> {
    Ok(c.truth_table()?.weight())
}

/// Nonlinearity of the gadget: `#SAT(c)` for `t ≥ 2`, and
/// `min(#SAT, 2^n - #SAT)` for `t = 1`.
pub fn count_sat_via_nl(c: &Circuit, t: usize) -> Result<u64> {
    let g = sat_count_gadget(c, t)?;
    Ok(nonlinearity(&g.padded.truth_table()?))
}

/// Summary printed after emitting a gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GadgetSummary {
    pub nl: u64,
    pub satcount: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl GadgetInstance {
    pub fn summary(&self) -> Result<GadgetSummary> {
        let nl = nonlinearity(&self.padded.truth_table()?);
        let satcount = brute_force_sat_count(&self.original)?;
        Ok(GadgetSummary {
            nl,
            satcount,
            matches: nl == satcount,
        })
    }
}

impl std::fmt::Display for GadgetSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "nl={} satcount={} match={}", self.nl, self.satcount, self.matches)
    }
}
