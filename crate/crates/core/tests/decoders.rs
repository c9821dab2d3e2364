use lpdec::harness::{block_llr, code_seed, derive_seed, rpc_rng};
use lpdec::rpc::{collection_has_fractional_cycle, shared_fractional_neighbors};
use lpdec::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS_INT: f64 = 1e-6;

fn code(n: usize, dv: usize, dc: usize, seed: u64) -> ParityCheckCode {
    random_regular_ldpc(n, dv, dc, code_seed(seed, n, dv, dc)).unwrap()
}

fn assert_monotone(trace: &[f64]) {
    for w in trace.windows(2) {
        assert!(w[1] >= w[0] - 1e-9, "objective went down: {trace:?}");
    }
}

#[test]
fn every_round_adds_cuts_and_raises_the_objective() {
    let c = code(60, 3, 6, 2);
    for b in 0..60 {
        let g = block_llr(60, 0.0, derive_seed(7, b), false);
        let out = decode_adaptive(&c, &g, &DecodeOptions::default()).unwrap();
        assert_ne!(out.status, DecodeStatus::LimitExceeded);
        assert_eq!(out.cuts_per_iteration.len(), out.lp_solves);
        assert_eq!(out.objective_trace.len(), out.lp_solves);
        let (last, rest) = out.cuts_per_iteration.split_last().unwrap();
        assert_eq!(*last, 0);
        assert!(rest.iter().all(|&k| k > 0));
        assert_eq!(rest.iter().sum::<usize>(), out.final_parity_constraints);
        assert_monotone(&out.objective_trace);
        assert!(out.iterations <= 60);
    }
}

#[test]
fn integral_outputs_are_ml_codewords() {
    let c = code(20, 3, 4, 3);
    for b in 0..150 {
        let g = block_llr(20, 2.0, derive_seed(11, b), false);
        let ml = ml_decode_bruteforce(&c, &g).unwrap();
        for out in [
            decode_adaptive(&c, &g, &DecodeOptions::default()).unwrap(),
            decode_with_rpc(&c, &g, &DecodeOptions::default(), &RpcBudget::default(), &mut rpc_rng(b)).unwrap(),
        ] {
            if out.status == DecodeStatus::MlCodeword {
                assert!(c.is_codeword(&out.hard_bits()));
                assert!((out.objective_value - ml.cost).abs() < 1e-9);
            }
            assert!(out.objective_value <= ml.cost + 1e-9);
        }
    }
}

#[test]
fn warm_and_cold_agree() {
    for inst in 0..100u64 {
        let c = code(30, 3, 6, inst);
        let g = block_llr(30, -1.0, derive_seed(inst, 0), false);
        let warm = decode_adaptive(&c, &g, &DecodeOptions::default()).unwrap();
        let opts = DecodeOptions { warm_start: false, ..DecodeOptions::default() };
        let cold = decode_adaptive(&c, &g, &opts).unwrap();
        assert!((warm.objective_value - cold.objective_value).abs() < 1e-9);
        assert_eq!(warm.integral, cold.integral);
    }
}

#[test]
fn pseudocodewords_have_many_integral_coordinates_and_cyclic_clusters() {
    let c = code(120, 3, 4, 5);
    let mut seen = 0;
    let mut b = 0;
    while seen < 200 {
        let g = block_llr(120, 0.0, derive_seed(3, b), false);
        b += 1;
        let out = decode_adaptive(&c, &g, &DecodeOptions::default()).unwrap();
        if out.status != DecodeStatus::Pseudocodeword {
            continue;
        }
        seen += 1;
        assert!(verify_pseudocodeword_integrality(&out, out.final_parity_constraints, EPS_INT));
        let f = fractional_subgraph(&c, &out.x, EPS_INT);
        assert!(!f.is_empty());
        assert!(f.every_cluster_has_cycle());
        assert!(b < 20_000, "too few pseudocodewords");
    }
}

#[test]
fn rpc_rows_hold_on_every_codeword() {
    let c = code(20, 3, 4, 8);
    let words = enumerate_codewords(&c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let all: Vec<usize> = (0..c.m()).collect();
    let mut found = 0;
    for _ in 0..3000 {
        let x: Vec<f64> = (0..20).map(|_| if rng.random_bool(0.5) { rng.random() } else { 0.0 }).collect();
        let k = rng.random_range(2..=4);
        let picks: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
        let Some(cut) = try_rpc_cut(&c, &x, &picks) else { continue };
        found += 1;
        let con = cut.to_constraint();
        for w in &words {
            let wf: Vec<f64> = w.iter().map(|&b| b as f64).collect();
            assert!(con.violation(&wf) <= 1e-12);
        }
    }
    assert!(found > 0);
}

#[test]
fn rpc_leaves_integral_results_alone() {
    let c = code(32, 3, 4, 3);
    let opts = DecodeOptions::default();
    let mut checked = 0;
    for b in 0..100 {
        let g = block_llr(32, 4.0, derive_seed(1, b), false);
        let a = decode_adaptive(&c, &g, &opts).unwrap();
        if a.status != DecodeStatus::MlCodeword {
            continue;
        }
        checked += 1;
        let r = decode_with_rpc(&c, &g, &opts, &RpcBudget::default(), &mut rpc_rng(b)).unwrap();
        assert_eq!(r.x, a.x);
        assert_eq!(r.status, a.status);
        assert_eq!(r.iterations, a.iterations);
        assert_eq!(r.rpc_cycle_trials, 0);
        assert_eq!(r.rpc_cuts_added, 0);
    }
    assert!(checked > 50);
}

#[test]
fn rpc_keeps_the_objective_monotone_and_adaptive_bounds() {
    let c = code(32, 3, 4, 3);
    let opts = DecodeOptions::default();
    let mut improved = 0;
    for b in 0..400 {
        let g = block_llr(32, 2.0, derive_seed(2, b), false);
        let a = decode_adaptive(&c, &g, &opts).unwrap();
        if a.status != DecodeStatus::Pseudocodeword {
            continue;
        }
        let r = decode_with_rpc(&c, &g, &opts, &RpcBudget::default(), &mut rpc_rng(b)).unwrap();
        assert_monotone(&r.objective_trace);
        assert_eq!(r.iterations, a.iterations);
        assert_eq!(r.adaptive_parity_constraints, a.final_parity_constraints);
        assert!(r.objective_value >= a.objective_value - 1e-9);
        assert!(r.lp_solves <= a.lp_solves + RpcBudget::default().lp_resolve_cap);
        if r.status == DecodeStatus::MlCodeword {
            improved += 1;
        }
    }
    assert!(improved > 0);
}

#[test]
fn cutting_collections_contain_fractional_cycles() {
    let c = code(32, 3, 4, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut cutting, mut pairs) = (0, 0);
    for b in 0..400 {
        let g = block_llr(32, 2.0, derive_seed(4, b), false);
        let out = decode_adaptive(&c, &g, &DecodeOptions::default()).unwrap();
        if out.status != DecodeStatus::Pseudocodeword {
            continue;
        }
        let f = fractional_subgraph(&c, &out.x, EPS_INT);
        for _ in 0..200 {
            let k = rng.random_range(2..=4).min(f.checks.len());
            let picks: Vec<usize> = f.checks.choose_multiple(&mut rng, k).copied().collect();
            if try_rpc_cut(&c, &out.x, &picks).is_none() {
                continue;
            }
            cutting += 1;
            assert!(collection_has_fractional_cycle(&c, &out.x, &picks, EPS_INT));
            if k == 2 {
                pairs += 1;
                assert!(shared_fractional_neighbors(&c, &out.x, picks[0], picks[1], EPS_INT) >= 2);
            }
        }
    }
    assert!(cutting > 0 && pairs > 0, "{cutting} {pairs}");
}

#[test]
fn larger_budget_never_loses_a_block() {
    let c = code(32, 3, 4, 3);
    let opts = DecodeOptions::default();
    for b in 0..300 {
        let g = block_llr(32, 2.5, derive_seed(6, b), false);
        let mut last_ok = false;
        for c_max in [3, 10, 100] {
            let budget = RpcBudget { c_max, ..RpcBudget::default() };
            let r = decode_with_rpc(&c, &g, &opts, &budget, &mut rpc_rng(b)).unwrap();
            let ok = r.status == DecodeStatus::MlCodeword;
            assert!(ok || !last_ok, "block {b} lost at c_max {c_max}");
            last_ok = ok;
        }
    }
}

#[test]
fn bp_decodes_clean_blocks() {
    let c = code(60, 3, 6, 1);
    let mut wrong = 0;
    for b in 0..50 {
        let g = block_llr(60, 4.0, derive_seed(1, b), false);
        let r = sum_product_decode(&c, &g, &BpConfig::default());
        if !r.converged || r.bits.iter().any(|&v| v != 0) {
            wrong += 1;
        }
    }
    assert!(wrong <= 2, "{wrong}");
}
