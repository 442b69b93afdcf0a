use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nlmc::circuit::{from_normal_form, to_normal_form};
use nlmc::distinguisher::{run_experiment, toy_family, DistinguisherConfig};
use nlmc::mc::{mc_exact, verify_counting_bound, CENSUS_MAX_VARS};
use nlmc::reductions::{
    check_affine_certificate, is_affine, non_affine_witness, sat_count_gadget, tautology_to_affine,
    FormulaCircuit, DEFAULT_PADDING,
};
use nlmc::walsh::{best_affine_approximation, fwt, nonlinearity, nonlinearity_bruteforce};
use nlmc::{Assignment, Circuit, TruthTable};

/// Nonlinearity and multiplicative complexity of Boolean functions.
///
/// Truth tables are limited to n ≤ 24 inputs, exact multiplicative
/// complexity to n ≤ 5, the census to s ≤ 4 and brute-force checks
/// (--paranoid) to n ≤ 16.
#[derive(Parser, Debug)]
#[command(name = "nlmc", version)]
struct Cli {
    /// Emit JSON instead of text (one object per input table).
    #[arg(long, global = true)]
    json: bool,
    /// Add independent brute-force cross-checks to the output.
    #[arg(long, global = true)]
    paranoid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// File with a circuit or "n:<int> tt:<string>" lines; '-' reads stdin.
    #[arg(short, long, conflicts_with = "tt")]
    input: Option<PathBuf>,
    /// Inline truth table, binary (x1 is the least significant index bit) or hex.
    #[arg(long)]
    tt: Option<String>,
    /// Number of variables for --tt; inferred from a binary string if omitted.
    #[arg(short, requires = "tt")]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct CircuitInput {
    /// Circuit file; '-' reads stdin.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReduceKind {
    Tautology,
    Satcount,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nonlinearity and a best affine approximation (n ≤ 24).
    Nl(Input),
    /// Exact multiplicative complexity with a witness normal form (n ≤ 5).
    Mc(Input),
    /// Walsh spectrum, one "a=<binary> W=<int>" line per coefficient (n ≤ 24).
    Spectrum(Input),
    /// Affineness decision with a non-affineness witness (circuits: n ≤ 16).
    Affine(Input),
    /// Emit a reduced instance with its verification summary.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        #[command(flatten)]
        input: CircuitInput,
        /// Padding width of the #SAT gadget (n + t ≤ 24).
        #[arg(short, default_value_t = DEFAULT_PADDING)]
        t: usize,
    },
    /// Multiplicative complexity distribution of B_s with counting-bound checks (s ≤ 4).
    Census {
        #[arg(short)]
        s: usize,
        /// Largest k to check; defaults to the observed maximum.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Restriction distinguisher: toy keyed family against random oracles
    /// (n ≤ 16, 1 ≤ s ≤ 5, s ≤ n).
    Distinguish {
        #[arg(short, default_value_t = 4)]
        n: usize,
        #[arg(short, default_value_t = 4)]
        s: usize,
        /// AND budget B; defaults to the family's AND count.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Normal form of a circuit and the size of its rebuilt circuit.
    Normalform {
        #[command(flatten)]
        input: CircuitInput,
        /// Also print the circuit rebuilt from the normal form.
        #[arg(long)]
        rebuild: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<nlmc::Error> for Failure {
    fn from(e: nlmc::Error) -> Self {
        if e.is_parse() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

enum Source {
    Tables(Vec<TruthTable>),
    Circuit(Circuit),
}

impl Source {
    fn tables(self) -> Result<Vec<TruthTable>, Failure> {
        match self {
            Source::Tables(t) => Ok(t),
            Source::Circuit(c) => Ok(vec![c.truth_table()?]),
        }
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn looks_like_circuit(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("INPUTS"))
}

fn parse_circuit(text: &str) -> Result<Circuit, Failure> {
    Ok(text.parse::<Circuit>()?)
}

fn load(input: &Input) -> Result<Source, Failure> {
    if let Some(s) = &input.tt {
        let n = match input.n {
            Some(n) => n,
            None if s.len().is_power_of_two() => s.len().trailing_zeros() as usize,
            None => {
                return Err(Failure::Usage(format!(
                    "length {} of --tt is not a power of two; pass -n",
                    s.len()
                )))
            }
        };
        return Ok(Source::Tables(vec![TruthTable::from_text(s, n)?]));
    }
    let Some(path) = &input.input else {
        return Err(Failure::Usage("one of --input or --tt is required".into()));
    };
    let text = read_text(path)?;
    if looks_like_circuit(&text) {
        return Ok(Source::Circuit(parse_circuit(&text)?));
    }
    let tables = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(TruthTable::parse_line)
        .collect::<nlmc::Result<Vec<_>>>()?;
    if tables.is_empty() {
        return Err(Failure::Usage(format!("{} holds no input", path.display())));
    }
    Ok(Source::Tables(tables))
}

fn emit(out: &mut String, json: bool, value: Value, text: impl FnOnce(&mut String)) {
    if json {
        out.push_str(&value.to_string());
        out.push('\n');
    } else {
        text(out);
    }
}

fn cmd_nl(input: &Input, json: bool, paranoid: bool) -> Outcome {
    let mut out = String::new();
    for tt in load(input)?.tables()? {
        let nl = nonlinearity(&tt);
        let best = best_affine_approximation(&tt);
        let check = if paranoid {
            Some(nonlinearity_bruteforce(&tt)?)
        } else {
            None
        };
        let mut v = json!({
            "n": tt.n(),
            "nl": nl,
            "a": best.coefficient_string(),
            "c": u8::from(best.c),
            "agreements": best.agreements,
        });
        if let Some(b) = check {
            v["bruteforce"] = json!(b);
            v["match"] = json!(b == nl);
        }
        emit(&mut out, json, v, |o| {
            let _ = writeln!(o, "nl={nl}");
            let _ = writeln!(
                o,
                "a={} c={} agreements={}",
                best.coefficient_string(),
                u8::from(best.c),
                best.agreements
            );
            if let Some(b) = check {
                let _ = writeln!(o, "bruteforce={b} match={}", b == nl);
            }
        });
    }
    Ok(out)
}

fn cmd_mc(input: &Input, json: bool, paranoid: bool) -> Outcome {
    let mut out = String::new();
    for tt in load(input)?.tables()? {
        let r = mc_exact(&tt)?;
        let rebuilt = from_normal_form(&r.witness);
        if rebuilt.truth_table()? != tt || r.witness.truth_table()? != tt {
            return Err(Failure::Domain("witness failed re-verification".into()));
        }
        let nl = paranoid.then(|| nonlinearity(&tt));
        let mut v = json!({
            "n": tt.n(),
            "mc": r.value,
            "nodes": r.nodes_explored,
            "witness": r.witness.to_string(),
        });
        if let Some(nl) = nl {
            v["nl"] = json!(nl);
            v["affine_consistent"] = json!((nl == 0) == (r.value == 0));
        }
        emit(&mut out, json, v, |o| {
            let _ = writeln!(o, "mc={}", r.value);
            let _ = write!(o, "{}", r.witness);
            if !o.ends_with('\n') {
                o.push('\n');
            }
            if let Some(nl) = nl {
                let _ = writeln!(o, "nl={nl} affine_consistent={}", (nl == 0) == (r.value == 0));
            }
        });
    }
    Ok(out)
}

fn cmd_spectrum(input: &Input, json: bool, paranoid: bool) -> Outcome {
    let mut out = String::new();
    for tt in load(input)?.tables()? {
        let w = fwt(&tt);
        if paranoid {
            let back = w.inverse();
            let size = 1i64 << tt.n();
            let ok = (0..tt.len()).all(|x| back[x] == if tt.get(x) { -size } else { size });
            if !ok || w.parseval_sum() != 1u128 << (2 * tt.n()) {
                return Err(Failure::Domain("spectrum failed the inverse/Parseval check".into()));
            }
        }
        let label = |a: usize| Assignment::from_index(tt.n(), a).to_string();
        let v = json!({
            "n": tt.n(),
            "spectrum": (0..tt.len())
                .map(|a| json!({"a": label(a), "W": w.get(a)}))
                .collect::<Vec<_>>(),
        });
        emit(&mut out, json, v, |o| {
            for a in 0..tt.len() {
                let _ = writeln!(o, "a={} W={}", label(a), w.get(a));
            }
        });
    }
    Ok(out)
}

fn cmd_affine(input: &Input, json: bool) -> Outcome {
    let mut out = String::new();
    let (results, circuit) = match load(input)? {
        Source::Circuit(c) => {
            let r = is_affine(&c)?;
            (vec![(c.n(), r.affine, r.witness)], Some(c))
        }
        Source::Tables(ts) => (
            ts.iter()
                .map(|t| {
                    let w = non_affine_witness(t);
                    (t.n(), w.is_none(), w)
                })
                .collect(),
            None,
        ),
    };
    for (n, affine, witness) in results {
        if let (Some(c), Some(w)) = (&circuit, &witness) {
            if !check_affine_certificate(c, &w.x, &w.y)? {
                return Err(Failure::Domain("witness failed re-verification".into()));
            }
        }
        let v = json!({
            "n": n,
            "affine": affine,
            "witness": witness.as_ref().map(|w| json!({"x": w.x.to_string(), "y": w.y.to_string()})),
        });
        emit(&mut out, json, v, |o| {
            let _ = writeln!(o, "affine={affine}");
            if let Some(w) = &witness {
                let _ = writeln!(o, "x={} y={}", w.x, w.y);
            }
        });
    }
    Ok(out)
}

fn cmd_reduce(kind: ReduceKind, input: &CircuitInput, t: usize, json: bool) -> Outcome {
    let c = parse_circuit(&read_text(&input.input)?)?;
    let mut out = String::new();
    match kind {
        ReduceKind::Tautology => {
            let f = FormulaCircuit::new(c);
            let reduced = tautology_to_affine(&f)?;
            let tautology = f.is_tautology()?;
            let affine = is_affine(&reduced)?.affine;
            let v = json!({
                "circuit": reduced.to_string(),
                "tautology": tautology,
                "affine": affine,
                "match": tautology == affine,
            });
            emit(&mut out, json, v, |o| {
                let _ = write!(o, "{reduced}");
                let _ = writeln!(o, "tautology={tautology} affine={affine} match={}", tautology == affine);
            });
        }
        ReduceKind::Satcount => {
            let g = sat_count_gadget(&c, t)?;
            let s = g.summary()?;
            let v = json!({
                "circuit": g.padded.to_string(),
                "t": t,
                "nl": s.nl,
                "satcount": s.satcount,
                "match": s.matches,
            });
            emit(&mut out, json, v, |o| {
                let _ = write!(o, "{}", g.padded);
                let _ = writeln!(o, "{s}");
            });
        }
    }
    Ok(out)
}

fn cmd_census(s: usize, k_max: Option<usize>, json: bool) -> Outcome {
    if s > CENSUS_MAX_VARS {
        return Err(Failure::Domain(format!(
            "mc_solver (census): s = {s} exceeds the cap of {CENSUS_MAX_VARS}"
        )));
    }
    let k_max = match k_max {
        Some(k) => k,
        None => nlmc::mc::classify(s)?.max_value(),
    };
    let report = verify_counting_bound(s, k_max)?;
    let mut out = String::new();
    let v = serde_json::to_value(&report).expect("report serializes");
    emit(&mut out, json, v, |o| {
        let dist: Vec<String> = report
            .census
            .counts
            .iter()
            .map(|(k, c)| format!("{k}:{c}"))
            .collect();
        let _ = writeln!(o, "s={s} total={} distribution={{{}}}", report.census.total(), dist.join(", "));
        for row in &report.rows {
            let _ = writeln!(o, "{row}");
        }
    });
    Ok(out)
}

fn cmd_distinguish(n: usize, s: usize, budget: Option<usize>, trials: usize, seed: u64, json: bool) -> Outcome {
    let budget = match budget {
        Some(b) => b,
        None => toy_family(n)?.and_count(),
    };
    let cfg = DistinguisherConfig::exact(s, budget)?;
    let report = run_experiment(n, &cfg, trials, seed)?;
    let mut out = String::new();
    let v = serde_json::to_value(&report).expect("report serializes");
    emit(&mut out, json, v, |o| {
        let _ = writeln!(o, "n={} s={} budget={} trials={}", report.n, report.s, report.budget, report.trials);
        let _ = writeln!(
            o,
            "freq_keyed={} freq_random={} advantage={}",
            report.freq_keyed, report.freq_random, report.advantage
        );
        match report.census_expectation {
            Some(p) => {
                let _ = writeln!(o, "census_expectation={p}");
            }
            None => o.push_str("census_expectation=none\n"),
        }
    });
    Ok(out)
}

fn cmd_normalform(input: &CircuitInput, rebuild: bool, json: bool, paranoid: bool) -> Outcome {
    let c = parse_circuit(&read_text(&input.input)?)?;
    let nf = to_normal_form(&c);
    let rebuilt = from_normal_form(&nf);
    let check = if paranoid {
        let t = c.truth_table()?;
        Some(nf.truth_table()? == t && rebuilt.truth_table()? == t)
    } else {
        None
    };
    let mut v = json!({
        "normal_form": nf.to_string(),
        "ands": nf.and_count(),
        "rebuilt_xor": rebuilt.count_xor(),
        "rebuilt_size": rebuilt.size(),
        "xor_bound": nf.xor_bound(),
        "size_bound": nf.size_bound(),
    });
    if rebuild {
        v["circuit"] = json!(rebuilt.to_string());
    }
    if let Some(ok) = check {
        v["match"] = json!(ok);
    }
    let mut out = String::new();
    emit(&mut out, json, v, |o| {
        let _ = write!(o, "{nf}");
        if !o.ends_with('\n') {
            o.push('\n');
        }
        let _ = writeln!(
            o,
            "ands={} rebuilt_xor={} xor_bound={} rebuilt_size={} size_bound={}",
            nf.and_count(),
            rebuilt.count_xor(),
            nf.xor_bound(),
            rebuilt.size(),
            nf.size_bound()
        );
        if rebuild {
            let _ = write!(o, "{rebuilt}");
        }
        if let Some(ok) = check {
            let _ = writeln!(o, "match={ok}");
        }
    });
    Ok(out)
}

fn run(cli: &Cli) -> Outcome {
    let (json, paranoid) = (cli.json, cli.paranoid);
    match &cli.command {
        Command::Nl(i) => cmd_nl(i, json, paranoid),
        Command::Mc(i) => cmd_mc(i, json, paranoid),
        Command::Spectrum(i) => cmd_spectrum(i, json, paranoid),
        Command::Affine(i) => cmd_affine(i, json),
        Command::Reduce { kind, input, t } => cmd_reduce(*kind, input, *t, json),
        Command::Census { s, k_max } => cmd_census(*s, *k_max, json),
        Command::Distinguish {
            n,
            s,
            budget,
            trials,
            seed,
        } => cmd_distinguish(*n, *s, *budget, *trials, *seed, json),
        Command::Normalform { input, rebuild } => cmd_normalform(input, *rebuild, json, paranoid),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
