mod common;

use common::{born, mixed_instance, shannon};
use entropic_core::majorization::{majorizes, shannon_entropy, tensor_product, MAJORIZATION_SLACK};
use entropic_core::omega::{
    block_gram, compute_omega, compute_omega_hat, compute_omega_hat_with, compute_s_hat_k, compute_s_k,
    omega_simple, RelaxationPairs, SubsetChoice, DEFAULT_BUDGET,
};
use entropic_core::scenarios::{mub_qubit, random_basis, random_state};
use entropic_core::{Complex64, LogBase, MeasurementBasis, ProbVector};

fn subsets(d: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << d)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..d).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// σ₁ of a small complex matrix by power iteration on X†X, written out by hand.
fn sigma_max(x: &[Vec<Complex64>]) -> f64 {
    let cols = x[0].len();
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let xv: Vec<Complex64> = x.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        (0..cols)
            .map(|j| x.iter().zip(&xv).map(|(row, y)| row[j].conj() * y).sum())
            .collect()
    };
    let mut v: Vec<Complex64> = (0..cols).map(|j| Complex64::new(1.0, 0.1 * j as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = apply(&v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        lambda = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / vn;
        v = w.into_iter().map(|z| z / norm).collect();
    }
    lambda.sqrt()
}

/// For two bases the block-Gram matrix is `[[I, X], [X†, I]]`, whose top
/// eigenvalue is `1 + σ₁(X)`.
fn two_measurement_s_k(a: &MeasurementBasis, b: &MeasurementBasis, k: usize) -> f64 {
    let d = a.dim();
    let mut best = f64::NEG_INFINITY;
    for s1 in 1..=d {
        let Some(s2) = (k + 1).checked_sub(s1).filter(|s| (1..=d).contains(s)) else {
            continue;
        };
        for rows in subsets(d, s1) {
            for cols in subsets(d, s2) {
                let x: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|&r| {
                        cols.iter()
                            .map(|&c| a.vector(r).iter().zip(b.vector(c)).map(|(p, q)| p.conj() * q).sum())
                            .collect()
                    })
                    .collect();
                best = best.max(1.0 + sigma_max(&x));
            }
        }
    }
    best
}

#[test]
fn two_measurement_s_k_matches_independent_maximizer() {
    for seed in 0..40u64 {
        let d = 2 + (seed % 3) as usize;
        let a = random_basis(d, seed).unwrap();
        let b = random_basis(d, seed + 500).unwrap();
        for k in 1..=(2 * (d - 1) + 1) {
            let ours = compute_s_k(&[a.clone(), b.clone()], k, DEFAULT_BUDGET).unwrap();
            let oracle = two_measurement_s_k(&a, &b, k);
            assert!((ours - oracle).abs() < 1e-9, "seed {seed} k {k}: {ours} vs {oracle}");
        }
    }
}

#[test]
fn joint_distribution_is_majorized_by_omega() {
    for seed in 0..200u64 {
        let inst = mixed_instance(seed);
        let omega = compute_omega(&inst.bases, DEFAULT_BUDGET).unwrap().omega;
        let probs: Vec<ProbVector> = inst
            .bases
            .iter()
            .map(|b| ProbVector::new(born(&inst.state, b)).unwrap())
            .collect();
        let joint = tensor_product(&probs);
        assert!(
            majorizes(omega.entries(), joint.probs(), MAJORIZATION_SLACK).unwrap(),
            "seed {seed}: ω = {:?}",
            omega.entries()
        );
    }
}

#[test]
fn omega_chain_and_entropy_chain() {
    for seed in 0..200u64 {
        let inst = mixed_instance(seed);
        let omega = compute_omega(&inst.bases, DEFAULT_BUDGET).unwrap();
        let hat = compute_omega_hat(&inst.bases, DEFAULT_BUDGET).unwrap();
        let simple = omega_simple(&inst.bases, DEFAULT_BUDGET).unwrap();
        assert!(majorizes(hat.omega.entries(), omega.omega.entries(), MAJORIZATION_SLACK).unwrap(), "seed {seed}: ω ⊀ ω̂");
        assert!(majorizes(simple.entries(), omega.omega.entries(), MAJORIZATION_SLACK).unwrap(), "seed {seed}: ω ⊀ ω₀");
        for (s, s_hat) in omega.s.iter().zip(&hat.s) {
            assert!(*s <= 1.0 + s_hat + 1e-9, "seed {seed}: s {s} > 1 + ŝ {s_hat}");
        }

        let sum_h: f64 = inst.bases.iter().map(|b| shannon(&born(&inst.state, b), false)).sum();
        let h = shannon_entropy(omega.omega.entries(), LogBase::Two);
        let h_hat = shannon_entropy(hat.omega.entries(), LogBase::Two);
        let h_simple = shannon_entropy(simple.entries(), LogBase::Two);
        assert!(sum_h >= h - 1e-9, "seed {seed}");
        assert!(h >= h_hat - 1e-9 && h >= h_simple - 1e-9, "seed {seed}");
    }
}

#[test]
fn consecutive_pairs_relaxation_undershoots_for_three_measurements() {
    // M₁ = M₃ = Z and M₂ = X: the block U₁₃ carries weight that no consecutive
    // pair sees, so the consecutive relaxation falls below s₁.
    let q = mub_qubit();
    let bases = [q[0].clone(), q[1].clone(), q[0].clone()];
    let s1 = compute_s_k(&bases, 1, DEFAULT_BUDGET).unwrap();
    let consecutive = compute_s_hat_k(&bases, 1, DEFAULT_BUDGET, RelaxationPairs::Consecutive).unwrap();
    let all = compute_s_hat_k(&bases, 1, DEFAULT_BUDGET, RelaxationPairs::All).unwrap();
    assert!((s1 - (1.5 + 1.25f64.sqrt())).abs() < 1e-12, "s₁ = {s1}");
    assert!(1.0 + consecutive < s1);
    assert!(1.0 + all >= s1);
    let cons = compute_omega_hat_with(&bases, DEFAULT_BUDGET, RelaxationPairs::Consecutive).unwrap();
    let exact = compute_omega(&bases, DEFAULT_BUDGET).unwrap();
    assert!(!majorizes(cons.omega.entries(), exact.omega.entries(), MAJORIZATION_SLACK).unwrap());
}

#[test]
fn block_gram_is_the_gram_of_chosen_vectors() {
    let inst = mixed_instance(7);
    let d = inst.bases[0].dim();
    let choice = SubsetChoice::new(inst.bases.iter().enumerate().map(|(m, _)| vec![m % d]).collect());
    let u = block_gram(&inst.bases, &choice).unwrap();
    let vecs: Vec<&[Complex64]> = inst.bases.iter().enumerate().map(|(m, b)| b.vector(m % d)).collect();
    for (r, a) in vecs.iter().enumerate() {
        for (c, b) in vecs.iter().enumerate() {
            let ip: Complex64 = a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum();
            assert!((u[(r, c)] - ip).norm() < 1e-14);
        }
    }
}

#[test]
fn qubit_mub_pair_fixture() {
    let q = mub_qubit();
    let res = compute_omega(&q[..2], DEFAULT_BUDGET).unwrap();
    let om1 = ((1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0).powi(2);
    assert_eq!(res.a, 1);
    assert!((res.omega.entries()[0] - om1).abs() < 1e-12);
    assert!((res.omega.entries()[1] - (1.0 - om1)).abs() < 1e-12);
    let h = shannon_entropy(res.omega.entries(), LogBase::Two);
    assert!((h - 0.8435).abs() < 1e-3);
}

#[test]
fn family_state_sweep_is_majorized() {
    use entropic_core::scenarios::{qutrit_family, QutritFamilyParams};
    let bases = qutrit_family(QutritFamilyParams::new(1.0, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
    let omega = compute_omega(&bases, DEFAULT_BUDGET).unwrap().omega;
    for seed in 0..100u64 {
        let rho = random_state(3, 1 + (seed % 3) as usize, seed).unwrap();
        let probs: Vec<ProbVector> = bases.iter().map(|b| ProbVector::new(born(&rho, b)).unwrap()).collect();
        assert!(majorizes(omega.entries(), tensor_product(&probs).probs(), MAJORIZATION_SLACK).unwrap());
    }
}
