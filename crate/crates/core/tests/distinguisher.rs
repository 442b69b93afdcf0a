use nlmc::distinguisher::{
    distinguish_approx, distinguish_exact, run_experiment, toy_family, DistinguisherConfig, InflatingMc,
    KeyedOracle, ToyFamily,
};
use nlmc::mc::{classify, mc_exact};
use nlmc::Assignment;

#[test]
fn keyed_arm_never_fires() {
    for n in 1..=4 {
        let family = toy_family(n).unwrap();
        let b = family.and_count();
        let cfg = DistinguisherConfig::exact(n, b).unwrap();
        let approx_cfg = DistinguisherConfig::with_rho(n, b, 2.0).unwrap();
        for k in 0..(1 << n) {
            let key = Assignment::from_index(n, k);
            let member = family.member(&key).unwrap();
            assert!(member.count_and() <= b);
            let v = distinguish_exact(&mut KeyedOracle::new(&family, &key).unwrap(), &cfg).unwrap();
            assert!(!v.output);
            assert!(v.mc <= b);
            let mut o = KeyedOracle::new(&family, &key).unwrap();
            assert!(!distinguish_approx(&mut o, &approx_cfg, &InflatingMc { rho: 2.0 }).unwrap());
        }
    }
}

#[test]
fn restriction_cost_chain() {
    let family = ToyFamily::new(5, 1).unwrap();
    for k in 0..32 {
        let member = family.member(&Assignment::from_index(5, k)).unwrap();
        let t = member.truth_table().unwrap();
        assert!(mc_exact(&t).unwrap().value <= family.and_count());
    }
}

#[test]
fn experiments_are_deterministic() {
    let cfg = DistinguisherConfig::exact(3, 1).unwrap();
    let a = run_experiment(5, &cfg, 30, 11).unwrap();
    assert_eq!(a, run_experiment(5, &cfg, 30, 11).unwrap());
    assert_ne!(a.random_mc, run_experiment(5, &cfg, 30, 12).unwrap().random_mc);
    assert_eq!(a.keyed_mc.len(), 30);
    assert!((0.0..=1.0).contains(&a.advantage));
}

#[test]
fn budget_above_maximum_gives_no_advantage() {
    let max = classify(3).unwrap().max_value();
    let cfg = DistinguisherConfig::exact(3, max).unwrap();
    let r = run_experiment(4, &cfg, 50, 1).unwrap();
    assert_eq!((r.freq_keyed, r.freq_random, r.advantage), (0.0, 0.0, 0.0));
    assert_eq!(r.census_expectation, Some(0.0));
}

#[test]
fn census_expectation_for_b2() {
    let cfg = DistinguisherConfig::exact(2, 0).unwrap();
    let r = run_experiment(4, &cfg, 200, 5).unwrap();
    assert_eq!(r.census_expectation, Some(0.5));
    assert!(nlmc::distinguisher::within_binomial(r.freq_random, 0.5, 200, 4.0));
    let r = run_experiment(4, &DistinguisherConfig::exact(2, 4).unwrap(), 20, 5).unwrap();
    assert_eq!(r.freq_keyed, 0.0);
}
