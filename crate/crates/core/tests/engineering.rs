mod common;

use common::*;
use hyperent_core::engineering::{
    assemble_ghz, collapse_degrees, design_oam_controls, design_qudit_controls, design_tensor_controls,
    encode_polarization_pairs,
};
use hyperent_core::source::build_pair_state;
use hyperent_core::{
    Arm, Complex64, DegreeEncoding, Error, Mode, ModeBasis, PairState, PairTable, Pol, QuditState, SetupConfig,
    StateVector, TargetSpec,
};
use proptest::prelude::*;
use rand::Rng;

fn pair(state: StateVector) -> PairState {
    PairState { state, success_probability: 1.0, coincidence_fraction: 1.0 / 3.0 }
}

fn overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Random state over one arm's OAM 0..2 × polarization components.
fn random_arm_state(r: &mut rand_chacha::ChaCha8Rng, arm: Arm) -> StateVector {
    let mut terms = Vec::new();
    for ls in 0..3 {
        for ps in Pol::ALL {
            for li in 0..3 {
                for pi in Pol::ALL {
                    let a = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
                    terms.push((Mode::new(arm, ps, ls), Mode::new(arm, pi, li), a));
                }
            }
        }
    }
    StateVector::pair_superposition(ModeBasis::default(), &terms).unwrap().normalized().unwrap()
}

#[test]
fn tagged_setup_reads_as_uniform_qutrit() {
    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    let v = design_qudit_controls(&TargetSpec::new(vec![3], vec![c(1.0); 3]).unwrap(), 3).unwrap();
    cfg.signal_controls = v.config.signal_controls.clone();
    cfg.idler_controls = v.config.idler_controls.clone();
    let q = encode_polarization_pairs(&build_pair_state(&cfg).unwrap(), &PairTable::qutrit()).unwrap();
    for n in 0..3 {
        assert!((q.amplitude(&[n]).unwrap() - c(1.0 / 3f64.sqrt())).norm() < 1e-12);
    }
}

#[test]
fn all_h_state_reads_as_zero_digit() {
    let q = encode_polarization_pairs(&build_pair_state(&SetupConfig::balanced(ModeBasis::default())).unwrap(), &PairTable::qutrit())
        .unwrap();
    assert!((q.amplitude(&[0]).unwrap().norm() - 1.0).abs() < 1e-12);
}

#[test]
fn two_hundred_random_qutrits_round_trip() {
    let mut r = rng(100);
    for _ in 0..200 {
        let t = TargetSpec::new(vec![3], random_coeffs(&mut r, 3)).unwrap();
        assert!(design_qudit_controls(&t, 3).unwrap().round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn two_hundred_random_ququarts_round_trip() {
    let mut r = rng(101);
    for i in 0..200 {
        let mut coeffs = random_coeffs(&mut r, 4);
        if i % 4 == 0 {
            coeffs[i % 3] = c(0.0);
        }
        let t = TargetSpec::new(vec![4], coeffs).unwrap();
        assert!(design_qudit_controls(&t, 4).unwrap().round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn two_hundred_random_oam_matrices_round_trip() {
    let mut r = rng(102);
    let mut groups = [0; 4];
    for i in 0..200 {
        let mut coeffs = random_coeffs(&mut r, 9);
        // cycle through one, two and three occupied rows
        let keep = [vec![i % 3], vec![i % 3, (i + 1) % 3], vec![0, 1, 2]][i % 3].clone();
        for m in 0..3 {
            if !keep.contains(&m) {
                coeffs[3 * m..3 * m + 3].fill(c(0.0));
            }
        }
        let d = design_oam_controls(&TargetSpec::new(vec![3, 3], coeffs).unwrap()).unwrap();
        groups[d.group.unwrap()] += 1;
        assert!(d.round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }
    assert!(groups[1] > 0 && groups[2] > 0 && groups[3] > 0);
}

#[test]
fn oam_group_is_stable_under_row_relabeling() {
    let mut r = rng(103);
    let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2], [2, 1, 0]];
    for rows in 1..=3usize {
        let mut base = random_coeffs(&mut r, 9);
        for m in rows..3 {
            base[3 * m..3 * m + 3].fill(c(0.0));
        }
        let t = TargetSpec::new(vec![3, 3], base.clone()).unwrap();
        let g0 = design_oam_controls(&t).unwrap().group;
        for p in perms {
            let mut permuted = vec![c(0.0); 9];
            for m in 0..3 {
                permuted[3 * p[m]..3 * p[m] + 3].copy_from_slice(&base[3 * m..3 * m + 3]);
            }
            let d = design_oam_controls(&TargetSpec::new(vec![3, 3], permuted).unwrap()).unwrap();
            assert_eq!(d.group, g0);
            assert!(d.round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn identity_oam_target_gives_maximally_entangled_pairs() {
    let w = c(1.0 / 3f64.sqrt());
    let amps = (0..9).map(|i| if i % 4 == 0 { w } else { c(0.0) }).collect();
    let d = design_oam_controls(&TargetSpec::new(vec![3, 3], amps).unwrap()).unwrap();
    assert_eq!(d.group, Some(3));
    let me = QuditState::maximally_entangled(3).unwrap();
    assert!((overlap(me.amplitudes(), d.read().unwrap().amplitudes()).norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn tensor_targets_within_three_products_round_trip() {
    let mut r = rng(104);
    for i in 0..50 {
        let mut amps = vec![c(0.0); 27];
        for t in 0..3 {
            let n = (i + t * (i % 2)) % 3;
            let u = random_coeffs(&mut r, 3);
            let v = random_coeffs(&mut r, 3);
            for l in 0..3 {
                for k in 0..3 {
                    amps[9 * n + 3 * l + k] += u[l] * v[k];
                }
            }
        }
        let d = design_tensor_controls(&TargetSpec::new(vec![3, 3, 3], amps).unwrap()).unwrap();
        assert!(d.round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn generic_tensor_targets_exceed_three_branches() {
    let mut r = rng(105);
    for _ in 0..20 {
        let t = TargetSpec::new(vec![3, 3, 3], random_coeffs(&mut r, 27)).unwrap();
        assert!(matches!(design_tensor_controls(&t), Err(Error::Infeasible(_))));
    }
}

#[test]
fn ghz_assemblies_are_diagonal_over_full_grid() {
    for k in 3..=5 {
        let d = assemble_ghz(&DegreeEncoding::ghz(k).unwrap()).unwrap();
        let q = d.read().unwrap();
        assert_eq!(q.dims(), vec![3; k].as_slice());
        let mut checked = 0;
        for i in 0..3usize.pow(k as u32) {
            let digits = q.digits_of(i);
            let a = q.amplitude(&digits).unwrap().norm();
            if digits.iter().all(|&x| x == digits[0]) {
                assert!((a - 1.0 / 3f64.sqrt()).abs() < 1e-12);
            } else {
                assert!(a < 1e-12);
            }
            checked += 1;
        }
        assert_eq!(checked, 3usize.pow(k as u32));
    }
}

#[test]
fn collapse_is_a_bijection_on_six_digits() {
    let mut seen = [false; 6];
    for l in 0..3 {
        for p in Pol::ALL {
            let m = Mode::new(Arm::Medium, p, l);
            let s = pair(StateVector::pair_superposition(ModeBasis::default(), &[(m, m, c(1.0))]).unwrap());
            let q = collapse_degrees(&s, 3, 2).unwrap();
            let (digits, _) = q.support(1e-12).next().unwrap();
            assert_eq!(digits[0], digits[1]);
            assert_eq!(digits[0], (l as usize) * 2 + p.index());
            assert!(!seen[digits[0]]);
            seen[digits[0]] = true;
        }
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn collapse_preserves_inner_products() {
    let mut r = rng(106);
    for i in 0..50 {
        let arm = Arm::ALL[i % 3];
        let a = random_arm_state(&mut r, arm);
        let b = random_arm_state(&mut r, arm);
        let qa = collapse_degrees(&pair(a.clone()), 3, 2).unwrap();
        let qb = collapse_degrees(&pair(b.clone()), 3, 2).unwrap();
        let physical = overlap(a.amplitudes(), b.amplitudes());
        let logical = overlap(qa.amplitudes(), qb.amplitudes());
        assert!((physical - logical).norm() < 1e-12);
    }
}

#[test]
fn three_degree_coefficients_land_in_six_dimensional_form() {
    let mut r = rng(107);
    let table = PairTable::qutrit();
    let alpha = random_coeffs(&mut r, 27);
    let mut terms = Vec::new();
    for m in 0..3 {
        let (ps, pi) = table.pair(m).unwrap();
        for n in 0..3 {
            for p in 0..3 {
                terms.push((Mode::new(Arm::Long, ps, n as i32), Mode::new(Arm::Long, pi, p as i32), alpha[9 * m + 3 * n + p]));
            }
        }
    }
    let state = StateVector::pair_superposition(ModeBasis::default(), &terms).unwrap();
    let norm = state.norm();
    let q = collapse_degrees(&pair(state.normalized().unwrap()), 3, 2).unwrap();
    let mut expected = vec![c(0.0); 36];
    for m in 0..3 {
        let (ps, pi) = table.pair(m).unwrap();
        for n in 0..3 {
            for p in 0..3 {
                expected[(2 * n + ps.index()) * 6 + 2 * p + pi.index()] = alpha[9 * m + 3 * n + p] / norm;
            }
        }
    }
    for (got, want) in q.amplitudes().iter().zip(&expected) {
        assert!((got - want).norm() < 1e-12);
    }
}

#[test]
fn target_renormalization_leaves_a_notice() {
    let t = TargetSpec::new(vec![3], vec![c(3.0), c(4.0), c(0.0)]).unwrap();
    assert!(t.notice().unwrap().contains("renormalized"));
    let d = design_qudit_controls(&t, 3).unwrap();
    assert_eq!(d.notices.len(), 1);
    assert!(TargetSpec::new(vec![3], vec![c(0.6), c(0.8), c(0.0)]).unwrap().notice().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_qutrit_round_trips(re in prop::array::uniform3(-1.0f64..1.0), im in prop::array::uniform3(-1.0f64..1.0)) {
        let coeffs: Vec<Complex64> = (0..3).map(|i| Complex64::new(re[i], im[i])).collect();
        prop_assume!(coeffs.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-6);
        let d = design_qudit_controls(&TargetSpec::new(vec![3], coeffs).unwrap(), 3).unwrap();
        prop_assert!(d.round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn sparse_oam_matrices_round_trip(mask in 1u16..512, seed in 0u64..1000) {
        let mut r = rng(seed);
        let coeffs: Vec<Complex64> = random_coeffs(&mut r, 9)
            .into_iter()
            .enumerate()
            .map(|(i, x)| if mask & (1 << i) != 0 { x } else { c(0.0) })
            .collect();
        let d = design_oam_controls(&TargetSpec::new(vec![3, 3], coeffs).unwrap()).unwrap();
        prop_assert!(d.round_trip_fidelity().unwrap() >= 1.0 - 1e-9);
    }
}
