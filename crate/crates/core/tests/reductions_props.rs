use nlmc::reductions::{
    brute_force_sat_count, check_affine_certificate, count_sat_via_nl, is_affine, non_affine_witness,
    sat_count_gadget, tautology_to_affine, FormulaCircuit,
};
use nlmc::walsh::{best_affine_approximation, nonlinearity};
use nlmc::{Assignment, Circuit, CircuitBuilder, TruthTable, Wire};
use proptest::prelude::*;

fn circuit(max_n: usize, max_m: usize) -> impl Strategy<Value = Circuit> {
    (0..=max_n, 0..=max_m, any::<u64>()).prop_map(|(n, m, seed)| Circuit::random(n, m.max(usize::from(n == 0)), seed).unwrap())
}

fn some_certificate(c: &Circuit) -> bool {
    let size = 1usize << c.n();
    (0..size).any(|x| {
        (0..size).any(|y| {
            let (x, y) = (Assignment::from_index(c.n(), x), Assignment::from_index(c.n(), y));
            check_affine_certificate(c, &x, &y).unwrap()
        })
    })
}

/// A circuit computing the given table as an XOR of minterms.
fn circuit_of(t: &TruthTable) -> Circuit {
    let n = t.n();
    let mut b = CircuitBuilder::new(n);
    let mut acc = b.zero();
    for i in (0..t.len()).filter(|&i| t.get(i)) {
        let mut term = b.one();
        for j in 0..n {
            let lit = if i >> j & 1 == 1 { b.input(j) } else { b.not(Wire(j)) };
            term = b.and(term, lit);
        }
        acc = b.xor(acc, term);
    }
    b.finish(acc)
}

proptest! {
    #[test]
    fn certificates_sound_and_complete(c in circuit(5, 16)) {
        let r = is_affine(&c).unwrap();
        prop_assert_eq!(!r.affine, some_certificate(&c));
        if let Some(w) = r.witness {
            prop_assert!(check_affine_certificate(&c, &w.x, &w.y).unwrap());
        }
    }

    #[test]
    fn table_witness_matches_nl(n in 0usize..10, seed in any::<u64>()) {
        let t = TruthTable::random(n, seed).unwrap();
        prop_assert_eq!(non_affine_witness(&t).is_none(), nonlinearity(&t) == 0);
    }

    #[test]
    fn gadget_counts_solutions(c in circuit(6, 24), t in prop::sample::select(vec![2usize, 3, 10])) {
        let g = sat_count_gadget(&c, t).unwrap();
        prop_assert_eq!(g.padded.count_and(), c.count_and() + t);
        let padded = g.padded.truth_table().unwrap();
        prop_assert_eq!(nonlinearity(&padded), brute_force_sat_count(&c).unwrap());
        prop_assert_eq!(count_sat_via_nl(&c, t).unwrap(), brute_force_sat_count(&c).unwrap());
        let best = best_affine_approximation(&padded);
        prop_assert_eq!((best.mask, best.c), (0, false));
    }

    #[test]
    fn single_padding_bit_folds_the_count(c in circuit(6, 24)) {
        // with t = 1 the affine function z itself is within 2^n - #SAT
        let sat = brute_force_sat_count(&c).unwrap();
        let half = 1u64 << c.n();
        prop_assert_eq!(count_sat_via_nl(&c, 1).unwrap(), sat.min(half - sat));
    }
}

#[test]
fn tautology_reduction_on_all_small_functions() {
    let mut formulas = 0;
    for n in 0..=3usize {
        for bits in 0..(1u64 << (1 << n)) {
            let t = TruthTable::from_bits(n, bits).unwrap();
            let f = FormulaCircuit::new(circuit_of(&t));
            let reduced = tautology_to_affine(&f).unwrap();
            assert_eq!(is_affine(&reduced).unwrap().affine, f.is_tautology().unwrap(), "{t}");
            formulas += 1;
        }
    }
    assert_eq!(formulas, 2 + 4 + 16 + 256);
}
