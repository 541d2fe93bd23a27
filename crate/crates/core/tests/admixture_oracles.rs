mod common;

use common::{born, mixed_instance, overlap, shannon, tuples};
use entropic_core::admixture::{
    admixture_bound, build_a, build_b, cyclic_pre_bound, multi_index, ChainTensor, DEFAULT_WORK_LIMIT,
};
use entropic_core::channel::{average_i, AverageMode};
use entropic_core::majorization::{omega_dot_decreasing, tensor_product};
use entropic_core::omega::{compute_omega, DEFAULT_BUDGET};
use entropic_core::quantum::von_neumann_entropy;
use entropic_core::scenarios::{qutrit_family, random_instance, random_state, QutritFamilyParams};
use entropic_core::{LogBase, MeasurementBasis, ProbVector};

/// Literal reading of the construction: for each `(i, k)` sum over one shared
/// middle tuple `j ∈ [d]^N`, where chain `m` runs
/// `M_m(k_m) → M_{m+1}(j_{m+1}) → … → M_{m−2}(j_{m−2}) → M_{m−1}(i_{m−1})`.
/// For N ≤ 3 every measurement is the middle of at most one chain, so this is
/// the same as summing each chain's middles independently.
fn naive_a_shared(bases: &[MeasurementBasis], i: &[usize], k: &[usize]) -> f64 {
    let n = bases.len();
    let d = bases[0].dim();
    let mut total = 0.0;
    for j in tuples(d, n) {
        let mut prod = 1.0;
        for m in 0..n {
            let mut path = vec![(m, k[m])];
            for t in 1..n - 1 {
                let meas = (m + t) % n;
                path.push((meas, j[meas]));
            }
            let end = (m + n - 1) % n;
            path.push((end, i[end]));
            prod *= path
                .windows(2)
                .map(|w| overlap(&bases[w[0].0], w[0].1, &bases[w[1].0], w[1].1))
                .product::<f64>();
        }
        total += prod;
    }
    // Middle coordinates not used by any chain were summed over freely.
    let unused = if n <= 2 { n } else { 0 };
    total / (d as f64).powi(unused as i32)
}

/// Each chain sums over its own middle tuple.
fn naive_a_per_chain(bases: &[MeasurementBasis], i: &[usize], k: &[usize]) -> f64 {
    let n = bases.len();
    let d = bases[0].dim();
    (0..n)
        .map(|m| {
            let end = (m + n - 1) % n;
            tuples(d, n - 2)
                .into_iter()
                .map(|mid| {
                    let mut path = vec![(m, k[m])];
                    path.extend(mid.iter().enumerate().map(|(t, &x)| ((m + 1 + t) % n, x)));
                    path.push((end, i[end]));
                    path.windows(2)
                        .map(|w| overlap(&bases[w[0].0], w[0].1, &bases[w[1].0], w[1].1))
                        .product::<f64>()
                })
                .sum::<f64>()
        })
        .product()
}

#[test]
fn factorized_rows_match_naive_enumeration() {
    for seed in 0..6u64 {
        for (d, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let inst = random_instance(d, n, 1, 0xa11 + seed * 13 + (d * 10 + n) as u64).unwrap();
            let chains = ChainTensor::new(&inst.bases).unwrap();
            let rows = build_a(&inst.bases, DEFAULT_WORK_LIMIT).unwrap();
            for i_flat in 0..chains.len() {
                let i = multi_index(i_flat, n, d);
                let mut naive: Vec<f64> = (0..chains.len())
                    .map(|k_flat| {
                        let k = multi_index(k_flat, n, d);
                        let shared = naive_a_shared(&inst.bases, &i, &k);
                        let per_chain = naive_a_per_chain(&inst.bases, &i, &k);
                        assert!((shared - per_chain).abs() < 1e-12);
                        assert!((chains.entry(&i, &k) - shared).abs() < 1e-12, "d {d} n {n} i {i:?} k {k:?}");
                        shared
                    })
                    .collect();
                naive.sort_by(|a, b| b.total_cmp(a));
                for (x, y) in rows.rows[i_flat].iter().zip(&naive) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn four_measurement_rows_use_per_chain_middles() {
    let inst = random_instance(2, 4, 1, 0x4444).unwrap();
    let chains = ChainTensor::new(&inst.bases).unwrap();
    for i in tuples(2, 4) {
        for k in tuples(2, 4) {
            let naive = naive_a_per_chain(&inst.bases, &i, &k);
            assert!((chains.entry(&i, &k) - naive).abs() < 1e-12);
        }
    }
}

#[test]
fn family_rows_match_naive_at_half() {
    let bases = qutrit_family(QutritFamilyParams::new(0.5, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
    let chains = ChainTensor::new(&bases).unwrap();
    for i in tuples(3, 3) {
        for k in tuples(3, 3) {
            let naive = naive_a_shared(&bases, &i, &k);
            let entry = chains.entry(&i, &k);
            assert!((0.0..=1.0 + 1e-12).contains(&entry));
            assert!((entry - naive).abs() < 1e-12);
        }
    }
}

#[test]
fn pre_bound_is_the_cyclic_average() {
    for seed in 0..100u64 {
        let inst = mixed_instance(seed);
        for base in [LogBase::Two, LogBase::E] {
            let pre = cyclic_pre_bound(&inst.state, &inst.bases, base).unwrap();
            let avg = average_i(&inst.state, &inst.bases, AverageMode::Cyclic, base).unwrap();
            assert!((pre - avg).abs() < 1e-9, "seed {seed}: {pre} vs {avg}");
        }
    }
}

#[test]
fn intermediate_chain_of_inequalities() {
    for seed in 0..100u64 {
        let inst = mixed_instance(seed);
        let n = inst.bases.len();
        let omega = compute_omega(&inst.bases, DEFAULT_BUDGET).unwrap().omega;
        let rows = build_a(&inst.bases, DEFAULT_WORK_LIMIT).unwrap();
        let chains = ChainTensor::new(&inst.bases).unwrap();
        let probs: Vec<ProbVector> = inst.bases.iter().map(|b| ProbVector::new(born(&inst.state, b)).unwrap()).collect();
        let joint = tensor_product(&probs);
        let x = joint.probs();

        // −(1/N) Σ_i x_i ln(x·𝔄_i)  ≥  −(1/N) Σ_i x_i ln(ω·𝔄_i↓)  ≥  −(1/N) ω·𝔅↓
        let pre = cyclic_pre_bound(&inst.state, &inst.bases, LogBase::E).unwrap();
        let mut middle = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if xi > 0.0 {
                let raw = chains.raw_row(i);
                let dot: f64 = raw.iter().zip(x).map(|(a, p)| a * p).sum();
                let w = omega_dot_decreasing(&omega, &rows.rows[i]).unwrap();
                assert!(dot <= w + 1e-12, "seed {seed} row {i}: {dot} > {w}");
                middle -= xi * w.ln();
            }
        }
        middle /= n as f64;
        let b = build_b(&rows, &omega, LogBase::E).unwrap();
        let bound = -omega_dot_decreasing(&omega, &b).unwrap() / n as f64;
        assert!(pre >= middle - 1e-9 && middle >= bound - 1e-9, "seed {seed}: {pre} {middle} {bound}");
        assert!((bound - admixture_bound(&inst.bases, &omega, LogBase::E).unwrap()).abs() < 1e-12);

        let lhs: f64 = inst.bases.iter().map(|b| shannon(&born(&inst.state, b), true)).sum::<f64>()
            - (n as f64 - 1.0) * von_neumann_entropy(&inst.state, LogBase::E);
        assert!(lhs >= bound - 1e-9);
    }
}

#[test]
fn bound_is_invariant_under_cyclic_relabeling() {
    for seed in 0..30u64 {
        let inst = mixed_instance(seed);
        let n = inst.bases.len();
        let omega = compute_omega(&inst.bases, DEFAULT_BUDGET).unwrap().omega;
        let base_value = admixture_bound(&inst.bases, &omega, LogBase::E).unwrap();
        for shift in 1..n {
            let rotated: Vec<MeasurementBasis> = (0..n).map(|m| inst.bases[(m + shift) % n].clone()).collect();
            let om = compute_omega(&rotated, DEFAULT_BUDGET).unwrap().omega;
            let v = admixture_bound(&rotated, &om, LogBase::E).unwrap();
            assert!((v - base_value).abs() < 1e-9, "seed {seed} shift {shift}: {v} vs {base_value}");
        }
    }
}

#[test]
fn bound_holds_on_family_states() {
    let bases = qutrit_family(QutritFamilyParams::new(0.4, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
    let omega = compute_omega(&bases, DEFAULT_BUDGET).unwrap().omega;
    let bound = admixture_bound(&bases, &omega, LogBase::E).unwrap();
    for seed in 0..100u64 {
        let rho = random_state(3, 1 + (seed % 3) as usize, seed).unwrap();
        assert!(cyclic_pre_bound(&rho, &bases, LogBase::E).unwrap() >= bound - 1e-9);
    }
}

#[test]
fn oversized_instances_are_refused() {
    let inst = random_instance(3, 7, 1, 1).unwrap();
    assert!(build_a(&inst.bases, 1_000).is_err());
}
