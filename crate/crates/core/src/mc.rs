//! Exact multiplicative complexity for small functions.
//!
//! A function has multiplicative complexity at most `k` iff it lies in the
//! affine span `V_k = ⟨1, x_1..x_n, o_1..o_k⟩` of some normal form with `k`
//! AND gates. The search works on these spans directly:
//!
//! - Modulo `V_{j}`, the product `L ∧ R` of two elements of `V_j` only
//!   depends on the 2-dimensional subspace spanned by the linear parts of `L`
//!   and `R`, since `(L ⊕ 1) R = LR ⊕ R` and `(L ⊕ R) R = LR ⊕ R`. Each
//!   gate is therefore one 2-dimensional subspace, enumerated once through
//!   its canonical basis `a < b < a ⊕ b`.
//! - Products already in the span add nothing and are skipped.
//! - Two consecutive gates where the later one does not read the earlier
//!   one's output commute; only the order with increasing bases is kept.
//! - The last gate is not enumerated. `f ∈ V + L·V` iff `f` agrees with an
//!   element of `V` on `{L = 0}` and with another on `{L = 1}`, so one pass
//!   over the choices of `L` decides it.
//!
//! Truth tables are handled as `u32` words, which caps the search at five
//! variables.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::circuit::NormalForm;
use crate::error::{Error, Result};
use crate::truth_table::{check_vars, TruthTable};

/// Largest `n` accepted by [`mc_decision`] and [`mc_exact`].
pub const MC_MAX_VARS: usize = 5;
/// Largest `s` accepted by [`classify`].
pub const CENSUS_MAX_VARS: usize = 4;

/// `2^(k² + 2k + 2ks + s + 1)`: an upper bound on the number of functions in
/// `B_s` computable with at most `k` AND gates.
pub fn counting_bound(s: u64, k: u64) -> BigUint {
    BigUint::from(1u8) << (k * k + 2 * k + 2 * k * s + s + 1)
}

/// Row-echelon basis of a subspace of `F_2^32`, remembering for each row
/// which generators it is the sum of.
#[derive(Clone)]
struct Echelon {
    rows: [u32; 32],
    combos: [u64; 32],
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            rows: [0; 32],
            combos: [0; 32],
        }
    }

    fn from_generators(gens: &[u32], subset: u32) -> Self {
        let mut e = Echelon::new();
        for (i, &g) in gens.iter().enumerate() {
            e.insert(g & subset, 1 << i);
        }
        e
    }

    /// Reduces `t`; a zero residual means `t` is the sum of the returned
    /// generator combination.
    #[inline]
    fn reduce(&self, mut t: u32, mut combo: u64) -> (u32, u64) {
        while t != 0 {
            let p = 31 - t.leading_zeros() as usize;
            if self.rows[p] == 0 {
                return (t, combo);
            }
            t ^= self.rows[p];
            combo ^= self.combos[p];
        }
        (0, combo)
    }

    fn insert(&mut self, t: u32, combo: u64) -> bool {
        let (r, c) = self.reduce(t, combo);
        if r == 0 {
            return false;
        }
        let p = 31 - r.leading_zeros() as usize;
        self.rows[p] = r;
        self.combos[p] = c;
        true
    }

    /// Combination of generators summing to `t`, if `t` is in the span.
    #[inline]
    fn solve(&self, t: u32) -> Option<u64> {
        match self.reduce(t, 0) {
            (0, c) => Some(c),
            _ => None,
        }
    }

    /// Fully reduced basis, ordered by pivot; equal spans give equal output.
    fn canonical(&self) -> Vec<u32> {
        let mut rows = self.rows;
        for p in 0..32 {
            if rows[p] == 0 {
                continue;
            }
            for q in p + 1..32 {
                if rows[q] >> p & 1 == 1 {
                    rows[q] ^= rows[p];
                }
            }
        }
        rows.into_iter().filter(|&r| r != 0).collect()
    }
}

/// Tables of every linear combination of `basis[1..1+d]`, indexed by mask.
fn linear_tables(basis: &[u32], d: usize) -> Vec<u32> {
    let mut t = vec![0u32; 1 << d];
    for m in 1..(1usize << d) {
        t[m] = t[m & (m - 1)] ^ basis[1 + m.trailing_zeros() as usize];
    }
    t
}

/// Canonical bases `(a, b)` with `a < b < a ⊕ b` of the 2-dimensional
/// subspaces of `F_2^d`.
fn subspaces(d: usize) -> impl Iterator<Item = (usize, usize)> {
    let top = 1usize << d;
    (1..top).flat_map(move |a| ((a + 1)..top).filter(move |&b| b < (a ^ b)).map(move |b| (a, b)))
}

fn input_tables(n: usize) -> Vec<u32> {
    let mut basis = Vec::with_capacity(1 + n);
    basis.push(TruthTable::constant(n, true).unwrap().as_u64().unwrap() as u32);
    for j in 0..n {
        basis.push(TruthTable::variable(n, j).unwrap().as_u64().unwrap() as u32);
    }
    basis
}

struct Search {
    n: usize,
    valid: u32,
    target: u32,
    k: usize,
    basis: Vec<u32>,
    /// Gate masks in normal-form layout (bit 0 is the constant).
    gates: Vec<(u64, u64)>,
    nodes: u64,
}

impl Search {
    fn run(&mut self, prev: Option<(usize, usize)>) -> Option<NormalForm> {
        self.nodes += 1;
        let j = self.gates.len();
        let span = Echelon::from_generators(&self.basis, self.valid);
        if let Some(out) = span.solve(self.target) {
            return Some(NormalForm::from_u64_masks(self.n, &self.gates, out).expect("valid masks"));
        }
        if j == self.k {
            return None;
        }
        let d = self.n + j;
        let tables = linear_tables(&self.basis, d);
        if j + 1 == self.k {
            return self.last_gate(&tables);
        }
        let newest = if j > 0 { 1usize << (d - 1) } else { 0 };
        for (a, b) in subspaces(d) {
            if let Some(p) = prev {
                if (a | b) & newest == 0 && (a, b) <= p {
                    continue;
                }
            }
            let o = tables[a] & tables[b];
            if span.solve(o).is_some() {
                continue;
            }
            self.basis.push(o);
            self.gates.push(((a as u64) << 1, (b as u64) << 1));
            let found = self.run(Some((a, b)));
            self.basis.pop();
            self.gates.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn last_gate(&mut self, tables: &[u32]) -> Option<NormalForm> {
        let j = self.gates.len();
        for (l, &lt) in tables.iter().enumerate().skip(1) {
            self.nodes += 1;
            let ones = lt & self.valid;
            let zeros = !lt & self.valid;
            if ones == 0 || zeros == 0 {
                continue;
            }
            let Some(v) = Echelon::from_generators(&self.basis, zeros).solve(self.target & zeros) else {
                continue;
            };
            let Some(r) = Echelon::from_generators(&self.basis, ones).solve(self.target & ones) else {
                continue;
            };
            // f = v ⊕ L ∧ (v ⊕ r)
            let mut gates = self.gates.clone();
            gates.push(((l as u64) << 1, v ^ r));
            let out = v | 1 << (1 + self.n + j);
            return Some(NormalForm::from_u64_masks(self.n, &gates, out).expect("valid masks"));
        }
        None
    }
}

fn small_table(tt: &TruthTable) -> Result<u32> {
    check_vars("mc_solver", tt.n(), MC_MAX_VARS)?;
    Ok(tt.as_u64().expect("n ≤ 5") as u32)
}

fn search_exactly(tt: &TruthTable, k: usize) -> Result<(Option<NormalForm>, u64)> {
    let target = small_table(tt)?;
    let n = tt.n();
    let mut search = Search {
        n,
        valid: (((1u64 << (1 << n)) - 1) as u32),
        target,
        k,
        basis: input_tables(n),
        gates: Vec::new(),
        nodes: 0,
    };
    let found = search.run(None);
    Ok((found, search.nodes))
}

/// Decides whether some XOR-AND circuit with at most `k` AND gates computes
/// `tt`, returning a normal-form witness with the fewest gates if so.
pub fn mc_decision(tt: &TruthTable, k: usize) -> Result<Option<NormalForm>> {
    check_vars("mc_solver", tt.n(), MC_MAX_VARS)?;
    for budget in 0..=k.min(1 << tt.n()) {
        if let (Some(w), _) = search_exactly(tt, budget)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McResult {
    pub value: usize,
    pub witness: NormalForm,
    pub nodes_explored: u64,
}

/// Multiplicative complexity of `tt` (`n ≤ 5`) with a witness.
pub fn mc_exact(tt: &TruthTable) -> Result<McResult> {
    check_vars("mc_solver", tt.n(), MC_MAX_VARS)?;
    let mut nodes = 0;
    for k in 0..=(1usize << tt.n()) {
        let (found, explored) = search_exactly(tt, k)?;
        nodes += explored;
        if let Some(witness) = found {
            debug_assert_eq!(witness.and_count(), k);
            return Ok(McResult {
                value: k,
                witness,
                nodes_explored: nodes,
            });
        }
    }
    unreachable!("every function in B_n has multiplicative complexity below 2^n")
}

/// Exact distribution of multiplicative complexity over `B_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McCensus {
    pub s: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl McCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_value(&self) -> usize {
        self.counts.keys().copied().max().unwrap_or(0)
    }

    /// Number of functions with multiplicative complexity at most `k`.
    pub fn cumulative(&self, k: usize) -> u64 {
        self.counts.range(..=k).map(|(_, c)| c).sum()
    }

    /// Fraction of `B_s` with multiplicative complexity above `k`.
    pub fn tail_mass(&self, k: usize) -> f64 {
        (self.total() - self.cumulative(k)) as f64 / self.total() as f64
    }
}

struct Marks {
    bits: Vec<u64>,
    marked: u64,
}

impl Marks {
    fn mark(&mut self, f: u32) -> bool {
        let (w, b) = ((f >> 6) as usize, f & 63);
        if self.bits[w] >> b & 1 == 0 {
            self.bits[w] |= 1 << b;
            self.marked += 1;
            true
        } else {
            false
        }
    }
}

fn span_elements(basis: &[u32]) -> Vec<u32> {
    let mut el = vec![0u32; 1 << basis.len()];
    for m in 1..el.len() {
        el[m] = el[m & (m - 1)] ^ basis[m.trailing_zeros() as usize];
    }
    el
}

/// Visits every non-redundant one-gate extension of `basis`, calling
/// `visit(new_and_output, extended_span)`.
fn extensions(valid: u32, basis: &[u32], mut visit: impl FnMut(u32, &Echelon)) {
    let d = basis.len() - 1;
    let span = Echelon::from_generators(basis, valid);
    let tables = linear_tables(basis, d);
    for (a, b) in subspaces(d) {
        let o = tables[a] & tables[b];
        if span.solve(o).is_some() {
            continue;
        }
        let mut next = span.clone();
        next.insert(o, 0);
        visit(o, &next);
    }
}

/// Census of `B_s` by forward closure: level `k` holds the distinct spans
/// reachable with `k` AND gates, and every function first covered at level
/// `k` has multiplicative complexity exactly `k`.
pub fn classify(s: usize) -> Result<McCensus> {
    check_vars("mc_solver (census)", s, CENSUS_MAX_VARS)?;
    let valid = ((1u64 << (1 << s)) - 1) as u32;
    let total = 1u64 << (1 << s);
    let mut marks = Marks {
        bits: vec![0; total.div_ceil(64) as usize],
        marked: 0,
    };
    let mut counts = BTreeMap::new();

    let base = input_tables(s);
    for &f in &span_elements(&base) {
        marks.mark(f);
    }
    counts.insert(0, marks.marked);

    let mut level: Vec<Vec<u32>> = vec![base];
    let mut k = 0;
    while marks.marked < total {
        k += 1;
        if k > 1 << s {
            return Err(Error::Invalid(format!(
                "census of B_{s} did not close within 2^{s} AND gates"
            )));
        }
        let before = marks.marked;
        for basis in &level {
            let elements = span_elements(basis);
            extensions(valid, basis, |o, _| {
                for &v in &elements {
                    marks.mark(v ^ o);
                }
            });
        }
        counts.insert(k, marks.marked - before);
        if marks.marked == total {
            break;
        }
        // Second pass: collect the distinct spans of this level.
        let mut seen = HashSet::new();
        let mut next_level = Vec::new();
        for basis in &level {
            extensions(valid, basis, |o, next| {
                if seen.insert(next.canonical()) {
                    let mut b = basis.clone();
                    b.push(o);
                    next_level.push(b);
                }
            });
        }
        level = next_level;
    }
    Ok(McCensus { s, counts })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub count: u64,
    pub cumulative: u64,
    #[serde(serialize_with = "serialize_big")]
    pub bound: BigUint,
    pub ok: bool,
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl fmt::Display for BoundRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} count={} cumulative={} bound={} ok={}",
            self.k, self.count, self.cumulative, self.bound, self.ok
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub census: McCensus,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// Compares the cumulative census of `B_s` with [`counting_bound`] for
/// every `k ≤ k_max`.
pub fn verify_counting_bound(s: usize, k_max: usize) -> Result<BoundReport> {
    let census = classify(s)?;
    let rows = (0..=k_max)
        .map(|k| {
            let cumulative = census.cumulative(k);
            let bound = counting_bound(s as u64, k as u64);
            BoundRow {
                k,
                count: census.counts.get(&k).copied().unwrap_or(0),
                cumulative,
                ok: BigUint::from(cumulative) <= bound,
                bound,
            }
        })
        .collect();
    Ok(BoundReport { census, rows })
}
