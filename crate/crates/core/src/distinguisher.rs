//! Restriction distinguishers for keyed function families.
//!
//! The distinguisher queries its oracle `H ∈ B_n` on the `2^s` points
//! `x 0^(n-s)`, giving the table of `h(x) = H(x 0^(n-s))`, and computes the
//! multiplicative complexity of `h`. Fixing inputs never adds AND gates, so
//! if `H` is a member of a family whose circuits have at most `B` AND gates
//! then `c_∧(h) ≤ B` and the distinguisher outputs 0. A random `H` makes `h`
//! uniform over `B_s`, where most functions exceed any small budget.
//!
//! [`ToyFamily`] is a stand-in keyed family with a documented AND count. It
//! is **not** pseudorandom in any sense; it only has the bounded AND count
//! under key restriction that the argument above relies on.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, Wire};
use crate::error::{Error, Result};
use crate::mc::{classify, mc_exact, CENSUS_MAX_VARS, MC_MAX_VARS};
use crate::truth_table::{Assignment, TruthTable};

/// Largest data width of the toy family.
pub const FAMILY_MAX_VARS: usize = 16;
pub const DEFAULT_ROUNDS: usize = 2;
pub const DEFAULT_RESTRICTION: usize = 4;
pub const DEFAULT_BUDGET: usize = 4;

/// A public circuit `F(x, k)` on `2n` inputs: data `x_1..x_n` on wires
/// `0..n`, key `k_1..k_n` on wires `n..2n`.
///
/// Each round XORs a rotated copy of the key into the state, then runs a
/// nonlinear layer of `⌈n/2⌉` AND gates, each feeding the product of two
/// neighbouring state bits into the next one, and finally rotates the
/// state by one. The output is the XOR of the state bits. The AND count is
/// exactly `rounds · ⌈n/2⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyFamily {
    n: usize,
    rounds: usize,
    circuit: Circuit,
}

impl ToyFamily {
    pub fn new(n: usize, rounds: usize) -> Result<Self> {
        if n == 0 || n > FAMILY_MAX_VARS {
            return Err(Error::cap("distinguisher (toy family)", "n", n, FAMILY_MAX_VARS));
        }
        let mut b = CircuitBuilder::new(2 * n);
        let mut state: Vec<Wire> = (0..n).map(Wire).collect();
        for r in 0..rounds {
            for (i, s) in state.iter_mut().enumerate() {
                *s = b.xor(*s, Wire(n + (i + r) % n));
            }
            for j in 0..n.div_ceil(2) {
                let (p, q, t) = ((2 * j) % n, (2 * j + 1) % n, (2 * j + 2) % n);
                let prod = b.and(state[p], state[q]);
                state[t] = b.xor(state[t], prod);
            }
            state.rotate_left(1);
        }
        let out = state[1..]
            .iter()
            .fold(state[0], |acc, &w| b.xor(acc, w));
        Ok(ToyFamily {
            n,
            rounds,
            circuit: b.finish(out),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// `rounds · ⌈n/2⌉`, the bound `B` on `c_∧` of every member.
    pub fn and_count(&self) -> usize {
        self.rounds * self.n.div_ceil(2)
    }

    /// The member `x ↦ F(x, key)` as a circuit on the data inputs.
    pub fn member(&self, key: &Assignment) -> Result<Circuit> {
        if key.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: key.len(),
            });
        }
        let fixed: Vec<(usize, bool)> = key
            .values()
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.n + j, v))
            .collect();
        self.circuit.restrict(&fixed)
    }
}

/// The toy family with the default two rounds.
pub fn toy_family(n: usize) -> Result<ToyFamily> {
    ToyFamily::new(n, DEFAULT_ROUNDS)
}

/// Query access to some `H ∈ B_n`.
pub trait Oracle {
    fn n(&self) -> usize;
    fn query(&mut self, x: &Assignment) -> Result<bool>;
}

fn check_query(n: usize, x: &Assignment) -> Result<()> {
    if x.len() != n {
        Err(Error::Dimension {
            expected: n,
            got: x.len(),
        })
    } else {
        Ok(())
    }
}

/// `H = F(·, key)` for a member of the toy family.
#[derive(Debug, Clone)]
pub struct KeyedOracle {
    member: Circuit,
}

impl KeyedOracle {
    pub fn new(family: &ToyFamily, key: &Assignment) -> Result<Self> {
        Ok(KeyedOracle {
            member: family.member(key)?,
        })
    }
}

impl Oracle for KeyedOracle {
    fn n(&self) -> usize {
        self.member.n()
    }

    fn query(&mut self, x: &Assignment) -> Result<bool> {
        self.member.evaluate(x)
    }
}

/// A uniformly random function, sampled lazily from a seeded stream and
/// memoized so repeated queries agree.
#[derive(Debug, Clone)]
pub struct RandomOracle {
    n: usize,
    rng: ChaCha8Rng,
    answers: HashMap<usize, bool>,
}

impl RandomOracle {
    pub fn new(n: usize, seed: u64) -> Self {
        Self::from_rng(n, ChaCha8Rng::seed_from_u64(seed))
    }

    fn from_rng(n: usize, rng: ChaCha8Rng) -> Self {
        RandomOracle {
            n,
            rng,
            answers: HashMap::new(),
        }
    }

    pub fn queries_answered(&self) -> usize {
        self.answers.len()
    }
}

impl Oracle for RandomOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn query(&mut self, x: &Assignment) -> Result<bool> {
        check_query(self.n, x)?;
        let rng = &mut self.rng;
        Ok(*self.answers.entry(x.index()).or_insert_with(|| rng.gen()))
    }
}

/// An oracle answering from a fixed table.
#[derive(Debug, Clone)]
pub struct TableOracle(pub TruthTable);

impl Oracle for TableOracle {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn query(&mut self, x: &Assignment) -> Result<bool> {
        self.0.evaluate(x)
    }
}

/// Which oracle a trial runs against.
#[derive(Debug, Clone)]
pub enum OracleSpec {
    Keyed { family: ToyFamily, key: Assignment },
    Random { n: usize, seed: u64 },
    Table(TruthTable),
}

impl OracleSpec {
    pub fn instantiate(&self) -> Result<Box<dyn Oracle>> {
        Ok(match self {
            OracleSpec::Keyed { family, key } => Box::new(KeyedOracle::new(family, key)?),
            OracleSpec::Random { n, seed } => Box::new(RandomOracle::new(*n, *seed)),
            OracleSpec::Table(t) => Box::new(TableOracle(t.clone())),
        })
    }
}

/// Parameters of a distinguisher run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistinguisherConfig {
    /// Number of free variables kept in the restriction.
    pub s: usize,
    /// AND-count bound `B` of the keyed family.
    pub and_budget: usize,
    /// Approximation factor `ρ ≥ 1`.
    pub rho: f64,
    pub epsilon: Option<f64>,
    /// `T = (B + 1) · ρ`.
    pub threshold: f64,
}

impl DistinguisherConfig {
    /// Exact variant: `ρ = 1`, `T = B + 1`.
    pub fn exact(s: usize, and_budget: usize) -> Result<Self> {
        Self::with_rho(s, and_budget, 1.0)
    }

    pub fn with_rho(s: usize, and_budget: usize, rho: f64) -> Result<Self> {
        if !(1..=MC_MAX_VARS).contains(&s) {
            return Err(Error::cap("distinguisher", "s", s, MC_MAX_VARS));
        }
        if !(rho.is_finite() && rho >= 1.0) {
            return Err(Error::Invalid(format!("approximation factor {rho} must be ≥ 1")));
        }
        Ok(DistinguisherConfig {
            s,
            and_budget,
            rho,
            epsilon: None,
            threshold: (and_budget as f64 + 1.0) * rho,
        })
    }

    /// Approximate variant with `ρ = (2 - ε)^(n/2)`.
    pub fn approximate(s: usize, and_budget: usize, n: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Invalid(format!("epsilon {epsilon} must lie in (0, 1]")));
        }
        let rho = (2.0 - epsilon).powf(n as f64 / 2.0);
        let mut cfg = Self::with_rho(s, and_budget, rho)?;
        cfg.epsilon = Some(epsilon);
        Ok(cfg)
    }
}

impl Default for DistinguisherConfig {
    fn default() -> Self {
        Self::exact(DEFAULT_RESTRICTION, DEFAULT_BUDGET).expect("defaults are in range")
    }
}

/// Queries `H(x 0^(n-s))` for all `x ∈ F_2^s`, in index order.
pub fn restricted_table(oracle: &mut dyn Oracle, s: usize) -> Result<TruthTable> {
    let n = oracle.n();
    if s > n {
        return Err(Error::Invalid(format!(
            "restriction size s = {s} exceeds the oracle's {n} inputs"
        )));
    }
    let mut bits = Vec::with_capacity(1 << s);
    for i in 0..(1usize << s) {
        bits.push(oracle.query(&Assignment::from_index(n, i))?);
    }
    TruthTable::from_fn(s, |i| bits[i])
}

/// Output bit of one distinguisher run, with the complexity it computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub output: bool,
    pub mc: usize,
}

/// Outputs 1 iff `c_∧(h) > B`.
pub fn distinguish_exact(oracle: &mut dyn Oracle, cfg: &DistinguisherConfig) -> Result<Verdict> {
    let h = restricted_table(oracle, cfg.s)?;
    let mc = mc_exact(&h)?.value;
    Ok(Verdict {
        output: mc > cfg.and_budget,
        mc,
    })
}

/// A procedure returning a value in `[c_∧(f), ρ · c_∧(f)]`.
pub trait McApproximator {
    fn rho(&self) -> f64;
    fn approximate(&self, tt: &TruthTable) -> Result<f64>;
}

/// The exact solver, `ρ = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMc;

impl McApproximator for ExactMc {
    fn rho(&self) -> f64 {
        1.0
    }

    fn approximate(&self, tt: &TruthTable) -> Result<f64> {
        Ok(mc_exact(tt)?.value as f64)
    }
}

/// Worst-case approximator: always reports `ρ · c_∧(f)`.
#[derive(Debug, Clone, Copy)]
pub struct InflatingMc {
    pub rho: f64,
}

impl McApproximator for InflatingMc {
    fn rho(&self) -> f64 {
        self.rho
    }

    fn approximate(&self, tt: &TruthTable) -> Result<f64> {
        Ok(mc_exact(tt)?.value as f64 * self.rho)
    }
}

/// Checks the approximation contract on every function of `B_2` and `B_3`.
pub fn validate_approximator(approx: &dyn McApproximator) -> Result<()> {
    let rho = approx.rho();
    for n in [2usize, 3] {
        for bits in 0..(1u64 << (1 << n)) {
            let t = TruthTable::from_bits(n, bits)?;
            let exact = mc_exact(&t)?.value as f64;
            let v = approx.approximate(&t)?;
            if !(v >= exact && v <= rho * exact) {
                return Err(Error::Invalid(format!(
                    "approximator returned {v} on {t}, outside [{exact}, {}]",
                    rho * exact
                )));
            }
        }
    }
    Ok(())
}

/// Outputs 1 iff the approximation of `c_∧(h)` reaches `T`.
pub fn distinguish_approx(
    oracle: &mut dyn Oracle,
    cfg: &DistinguisherConfig,
    approx: &dyn McApproximator,
) -> Result<bool> {
    let h = restricted_table(oracle, cfg.s)?;
    Ok(approx.approximate(&h)? >= cfg.threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub s: usize,
    pub budget: usize,
    pub trials: usize,
    pub freq_keyed: f64,
    pub freq_random: f64,
    pub advantage: f64,
    /// `Pr[c_∧(g) > B]` for uniform `g ∈ B_s`, when the census is
    /// available (`s ≤ 4`).
    pub census_expectation: Option<f64>,
    pub keyed_mc: Vec<usize>,
    pub random_mc: Vec<usize>,
}

/// The per-trial generator: stream `2·trial` drives the key, stream
/// `2·trial + 1` the random oracle.
fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs [`distinguish_exact`] on `trials` random keys of the toy family
/// and on `trials` random oracles.
pub fn run_experiment(
    n: usize,
    cfg: &DistinguisherConfig,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    if cfg.s > n {
        return Err(Error::Invalid(format!(
            "restriction size s = {} exceeds n = {n}",
            cfg.s
        )));
    }
    let family = toy_family(n)?;
    let mut keyed_mc = Vec::with_capacity(trials);
    let mut random_mc = Vec::with_capacity(trials);
    let (mut keyed_ones, mut random_ones) = (0usize, 0usize);
    for trial in 0..trials as u64 {
        let mut key_rng = trial_rng(seed, 2 * trial);
        let key = Assignment::new((0..n).map(|_| key_rng.next_u32() & 1 == 1).collect());
        let v = distinguish_exact(&mut KeyedOracle::new(&family, &key)?, cfg)?;
        keyed_ones += usize::from(v.output);
        keyed_mc.push(v.mc);

        let mut random = RandomOracle::from_rng(n, trial_rng(seed, 2 * trial + 1));
        let v = distinguish_exact(&mut random, cfg)?;
        random_ones += usize::from(v.output);
        random_mc.push(v.mc);
    }
    let freq_keyed = keyed_ones as f64 / trials as f64;
    let freq_random = random_ones as f64 / trials as f64;
    let census_expectation = if cfg.s <= CENSUS_MAX_VARS {
        Some(classify(cfg.s)?.tail_mass(cfg.and_budget))
    } else {
        None
    };
    Ok(ExperimentReport {
        n,
        s: cfg.s,
        budget: cfg.and_budget,
        trials,
        freq_keyed,
        freq_random,
        advantage: (freq_keyed - freq_random).abs(),
        census_expectation,
        keyed_mc,
        random_mc,
    })
}

/// Whether an observed frequency is within `sigmas` binomial standard
/// deviations of `p` over `trials` samples. A degenerate `p` requires
/// exact agreement.
pub fn within_binomial(observed: f64, p: f64, trials: usize, sigmas: f64) -> bool {
    let sd = (p * (1.0 - p) / trials as f64).sqrt();
    if sd == 0.0 {
        observed == p
    } else {
        (observed - p).abs() <= sigmas * sd
    }
}
