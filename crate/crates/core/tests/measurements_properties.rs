//! Property suites for the measurement constructions: purity bounds on
//! random pure states, completeness, parameter consistency, determinism.

use sepcrit::{build_gsic, build_mums, sample_pure, ComplexMatrix, ParamSpec};

fn midpoint_kappa(d: usize) -> f64 {
    let max = build_mums(d, ParamSpec::Max).unwrap().kappa();
    (1.0 / d as f64 + max) / 2.0
}

fn midpoint_alpha(d: usize) -> f64 {
    let max = build_gsic(d, ParamSpec::Max).unwrap().alpha();
    (1.0 / (d * d * d) as f64 + max) / 2.0
}

#[test]
fn purity_bound_holds_on_random_pure_states() {
    // sum_i Tr(X_i rho)^2 <= (m - 1)/d + kappa for every pure rho.
    for d in [2usize, 3, 4] {
        for spec in [ParamSpec::Max, ParamSpec::Value(midpoint_kappa(d))] {
            let set = build_mums(d, spec).unwrap();
            let fam = set.flatten();
            let bound = (set.count() as f64 - 1.0) / d as f64 + set.kappa();
            for seed in 0..500u64 {
                let rho = sample_pure(d, seed * 7 + d as u64);
                let s: f64 = fam
                    .ops()
                    .iter()
                    .map(|x| x.trace_product(rho.matrix()).re.powi(2))
                    .sum();
                assert!(
                    s <= bound + 1e-10,
                    "d={d} seed={seed}: sum {s} exceeds bound {bound}"
                );
            }
        }
    }
}

#[test]
fn gsic_bound_factor_is_nonnegative_on_pure_states() {
    // (alpha d^2 + 1)/(d (d + 1)) - sum_i Tr(M_i rho)^2 >= -1e-10.
    for d in [2usize, 3, 4] {
        for spec in [ParamSpec::Max, ParamSpec::Value(midpoint_alpha(d))] {
            let povm = build_gsic(d, spec).unwrap();
            let df = d as f64;
            let bound = (povm.alpha() * df * df + 1.0) / (df * (df + 1.0));
            for seed in 0..500u64 {
                let rho = sample_pure(d, seed * 11 + d as u64);
                let s: f64 = povm
                    .ops()
                    .iter()
                    .map(|m| m.trace_product(rho.matrix()).re.powi(2))
                    .sum();
                assert!(
                    bound - s >= -1e-10,
                    "d={d} seed={seed}: factor {} negative",
                    bound - s
                );
            }
        }
    }
}

#[test]
fn every_block_sums_to_identity() {
    for d in [2usize, 3, 4, 5] {
        let set = build_mums(d, ParamSpec::Max).unwrap();
        for blk in set.blocks() {
            let mut sum = ComplexMatrix::zeros(d, d);
            for p in blk {
                sum = &sum + p;
            }
            assert!(
                (&sum - &ComplexMatrix::identity(d)).max_abs() < 1e-10,
                "d={d}"
            );
        }
    }
}

#[test]
fn reported_kappa_matches_recomputed_purity_everywhere() {
    for d in [2usize, 3, 4, 5] {
        for spec in [ParamSpec::Max, ParamSpec::Value(midpoint_kappa(d))] {
            let set = build_mums(d, spec).unwrap();
            for blk in set.blocks() {
                for p in blk {
                    let purity = p.trace_product(p).re;
                    assert!(
                        (purity - set.kappa()).abs() < 1e-10,
                        "d={d}: {purity} vs {}",
                        set.kappa()
                    );
                }
            }
        }
    }
}

#[test]
fn requested_kappa_is_honored() {
    for d in [2usize, 3, 5] {
        let target = midpoint_kappa(d);
        let set = build_mums(d, ParamSpec::Value(target)).unwrap();
        assert!(
            (set.kappa() - target).abs() < 1e-11,
            "d={d}: got {} wanted {target}",
            set.kappa()
        );
    }
}

#[test]
fn requested_alpha_is_honored() {
    for d in [2usize, 3, 4] {
        let target = midpoint_alpha(d);
        let povm = build_gsic(d, ParamSpec::Value(target)).unwrap();
        assert!(
            (povm.alpha() - target).abs() < 1e-11,
            "d={d}: got {} wanted {target}",
            povm.alpha()
        );
    }
}

#[test]
fn construction_is_bit_deterministic() {
    for d in [2usize, 3, 4] {
        let a = build_mums(d, ParamSpec::Max).unwrap();
        let b = build_mums(d, ParamSpec::Max).unwrap();
        assert_eq!(a.kappa().to_bits(), b.kappa().to_bits());
        for (ba, bb) in a.blocks().iter().zip(b.blocks()) {
            for (pa, pb) in ba.iter().zip(bb) {
                for (za, zb) in pa.entries().iter().zip(pb.entries()) {
                    assert_eq!(za.re.to_bits(), zb.re.to_bits());
                    assert_eq!(za.im.to_bits(), zb.im.to_bits());
                }
            }
        }
        let g1 = build_gsic(d, ParamSpec::Max).unwrap();
        let g2 = build_gsic(d, ParamSpec::Max).unwrap();
        assert_eq!(g1.alpha().to_bits(), g2.alpha().to_bits());
        for (ma, mb) in g1.ops().iter().zip(g2.ops()) {
            for (za, zb) in ma.entries().iter().zip(mb.entries()) {
                assert_eq!(za.re.to_bits(), zb.re.to_bits());
                assert_eq!(za.im.to_bits(), zb.im.to_bits());
            }
        }
    }
}
