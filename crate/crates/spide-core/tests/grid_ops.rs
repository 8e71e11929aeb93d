use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::sync::Arc;

use spide_core::grid::{
    bessel_potential, fractional_derivative, read_snapshot, shift_field, write_snapshot, Domain,
    Field, LpFilterBank, SpectralGrid,
};

fn grid1(n: usize, l: f64) -> Arc<SpectralGrid> {
    SpectralGrid::new(1, n, l).unwrap()
}

/// Band-limited random real field with modes below `kmax`.
fn random_field(grid: &Arc<SpectralGrid>, kmax: usize, seed: u64) -> Field {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let l = grid.half_width();
    let modes: Vec<(f64, f64, f64)> = (1..=kmax)
        .map(|k| {
            let xi = std::f64::consts::PI * k as f64 / l;
            (xi, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .collect();
    let base: f64 = rng.gen_range(-0.5..0.5);
    Field::from_fn(grid, move |x| {
        base + modes
            .iter()
            .map(|(xi, a, b)| a * (xi * x[0]).cos() + b * (xi * x[0]).sin())
            .sum::<f64>()
    })
}

#[test]
fn grid_construction_and_frequencies() {
    let g = grid1(8, std::f64::consts::PI);
    // Frequencies are the integers -4..3 for L = pi, N = 8.
    let mut freqs: Vec<f64> = (0..8).map(|k| g.xi(k)[0]).collect();
    freqs.sort_by(f64::total_cmp);
    let expect = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
    for (a, b) in freqs.iter().zip(expect.iter()) {
        assert!((a - b).abs() < 1e-14, "freq {a} vs {b}");
    }
    assert!((g.spacing() * 8.0 - 2.0 * std::f64::consts::PI).abs() < 1e-15);

    assert!(SpectralGrid::new(1, 0, std::f64::consts::PI).is_err());
    assert!(SpectralGrid::new(1, 12, 1.0).is_err());
    assert!(SpectralGrid::new(3, 16, 1.0).is_err());
    assert!(SpectralGrid::new(2, 16, -1.0).is_err());

    let g2 = SpectralGrid::new(2, 256, 20.0).unwrap();
    assert_eq!(g2.len(), 256 * 256);
    let expected_max = std::f64::consts::PI * 128.0 / 20.0;
    let measured = (0..g2.len()).map(|i| g2.xi(i)[0].abs()).fold(0.0, f64::max);
    assert!((measured - expected_max).abs() < 1e-12);
}

#[test]
fn transform_pair_constant_and_tone() {
    let g = grid1(64, 5.0);
    let c = 2.75;
    let f = Field::from_fn(&g, |_| c);
    let spec = f.to_spectral();
    for k in 0..g.len() {
        let v = spec.values()[k];
        if g.xi_norm(k) == 0.0 {
            assert!((v.re - c * 2.0 * 5.0).abs() < 1e-10, "zero-mode mass {v}");
        } else {
            assert!(v.norm() < 1e-10);
        }
    }

    // On-lattice tone occupies a single bin.
    let xi0 = std::f64::consts::PI * 3.0 / 5.0;
    let tone = Field::from_values(
        &g,
        Domain::Physical,
        (0..g.len()).map(|i| Complex64::from_polar(1.0, xi0 * g.x(i)[0])).collect(),
    )
    .unwrap();
    let spec = tone.to_spectral();
    let mut hits = 0;
    for k in 0..g.len() {
        if spec.values()[k].norm() > 1e-9 {
            hits += 1;
            assert!((g.xi(k)[0] - xi0).abs() < 1e-12);
            assert!((spec.values()[k].re - 10.0).abs() < 1e-9);
        }
    }
    assert_eq!(hits, 1);
}

#[test]
fn round_trip_identity() {
    let g = grid1(256, 16.0);
    let u = random_field(&g, 30, 7);
    let back = u.to_spectral().to_physical();
    assert!(u.linf_distance(&back) < 1e-12);

    let g2 = SpectralGrid::new(2, 32, 8.0).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let vals: Vec<Complex64> =
        (0..g2.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let u2 = Field::from_values(&g2, Domain::Physical, vals).unwrap();
    let back2 = u2.to_spectral().to_physical();
    assert!(u2.linf_distance(&back2) < 1e-12);
}

#[test]
fn parseval_identity() {
    let g = grid1(128, 10.0);
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let vals: Vec<Complex64> =
        (0..g.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let u = Field::from_values(&g, Domain::Physical, vals).unwrap();
    let phys = u.lp_norm(2.0);
    let spec = u.to_spectral();
    let weighted: f64 =
        spec.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / (2.0 * g.half_width());
    assert!((phys * phys - weighted).abs() < 1e-10 * phys * phys);
}

#[test]
fn bessel_potential_cases() {
    let g = grid1(64, std::f64::consts::PI);
    let u = random_field(&g, 10, 1);
    // beta = 0 is the identity.
    assert!(u.linf_distance(&bessel_potential(&u, 0.0).unwrap()) < 1e-13);

    // Tone at |xi| = 1 scaled by (1+1)^{-1} = 0.5 for beta = -2.
    let tone = Field::from_fn(&g, |x| (x[0]).cos());
    let scaled = bessel_potential(&tone, -2.0).unwrap();
    assert!(scaled.linf_distance(&tone.scale(Complex64::new(0.5, 0.0))) < 1e-12);

    // Inverse pair.
    let round = bessel_potential(&bessel_potential(&u, 1.3).unwrap(), -1.3).unwrap();
    assert!(u.linf_distance(&round) < 1e-10);

    assert!(bessel_potential(&u, f64::NAN).is_err());
}

#[test]
fn fractional_derivative_cases() {
    let g = grid1(128, std::f64::consts::PI);
    // Constants are annihilated.
    let c = Field::from_fn(&g, |_| 4.2);
    assert!(fractional_derivative(&c, 1.3).unwrap().lp_norm(2.0) < 1e-12);

    // Tone e^{i2x} at alpha = 1.5 scales by -2^{1.5}.
    let tone = Field::from_values(
        &g,
        Domain::Physical,
        (0..g.len()).map(|i| Complex64::from_polar(1.0, 2.0 * g.x(i)[0])).collect(),
    )
    .unwrap();
    let d = fractional_derivative(&tone, 1.5).unwrap();
    let expect = tone.scale(Complex64::new(-(2.0f64.powf(1.5)), 0.0));
    assert!(d.linf_distance(&expect) < 1e-11);

    assert!(fractional_derivative(&tone, 0.0).is_err());
    assert!(fractional_derivative(&tone, 2.5).is_err());
}

#[test]
fn fractional_derivative_alpha2_matches_centered_differences() {
    // Independent oracle: centered second difference, O(h^2) accurate.
    let errs: Vec<f64> = [128usize, 256]
        .iter()
        .map(|&n| {
            let g = grid1(n, 16.0);
            let u = Field::from_fn(&g, |x| (-0.5 * x[0] * x[0]).exp() * (1.3 * x[0]).cos());
            let spectral = fractional_derivative(&u, 2.0).unwrap();
            let h = g.spacing();
            let vals = u.real_physical();
            let fd: Vec<f64> = (0..n)
                .map(|i| {
                    let ip = (i + 1) % n;
                    let im = (i + n - 1) % n;
                    (vals[ip] - 2.0 * vals[i] + vals[im]) / (h * h)
                })
                .collect();
            spectral
                .real_physical()
                .iter()
                .zip(fd.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    // Second-order convergence: error drops by ~4 when h halves.
    let rate = errs[0] / errs[1];
    assert!(errs[1] < 0.06, "absolute error {}", errs[1]);
    assert!(rate > 2.5 && rate < 6.0, "observed refinement factor {rate}");
}

#[test]
fn multiplier_composition_commutes() {
    let g = grid1(128, 12.0);
    let u = random_field(&g, 20, 5);
    let a = fractional_derivative(&bessel_potential(&u, 0.7).unwrap(), 1.2).unwrap();
    let b = bessel_potential(&fractional_derivative(&u, 1.2).unwrap(), 0.7).unwrap();
    assert!(a.linf_distance(&b) < 1e-12);
}

#[test]
fn shift_semantics() {
    let g = grid1(128, 8.0);
    let u = random_field(&g, 20, 9);
    // Zero shift.
    assert!(u.linf_distance(&shift_field(&u, [0.0, 0.0])) < 1e-13);
    // Full period.
    assert!(u.linf_distance(&shift_field(&u, [16.0, 0.0])) < 1e-12);
    // A tone picks up the phase factor.
    let xi0 = std::f64::consts::PI * 5.0 / 8.0;
    let tone = Field::from_values(
        &g,
        Domain::Physical,
        (0..g.len()).map(|i| Complex64::from_polar(1.0, xi0 * g.x(i)[0])).collect(),
    )
    .unwrap();
    let y = 0.37;
    let shifted = shift_field(&tone, [y, 0.0]);
    let expect = tone.scale(Complex64::from_polar(1.0, xi0 * y));
    assert!(shifted.linf_distance(&expect) < 1e-12);
}

#[test]
fn lp_bank_partition_and_supports() {
    for (d, n, l) in [(1usize, 1024usize, 16.0f64), (2, 128, 16.0)] {
        let g = SpectralGrid::new(d, n, l).unwrap();
        let bank = LpFilterBank::new(&g);
        assert!(
            bank.partition_defect() <= 1e-10,
            "partition defect {} at d={d}",
            bank.partition_defect()
        );
        // Block values lie in [0,1]; block 1 vanishes outside 1 <= |xi| <= 4.
        for j in 0..=bank.j_max() {
            for i in 0..g.len() {
                let v = bank.multiplier(j)[i];
                assert!((-1e-15..=1.0 + 1e-12).contains(&v));
            }
        }
        for i in 0..g.len() {
            let r = g.xi_norm(i);
            if !(1.0..=4.0).contains(&r) {
                assert_eq!(bank.multiplier(1)[i], 0.0, "block 1 leak at |xi|={r}");
            }
        }
        // Complement block is 1 at the origin.
        let zero_idx = (0..g.len()).find(|&i| g.xi_norm(i) == 0.0).unwrap();
        assert_eq!(bank.multiplier(0)[zero_idx], 1.0);
    }
}

#[test]
fn lp_reconstruction_of_band_limited_fields() {
    let g = grid1(256, 16.0);
    let bank = LpFilterBank::new(&g);
    let u = random_field(&g, 30, 21);
    let mut sum = Field::zeros(&g, Domain::Spectral);
    for j in 0..=bank.j_max() {
        sum = sum.add_scaled(&bank.apply(&u, j), Complex64::new(1.0, 0.0)).unwrap();
    }
    assert!(u.linf_distance(&sum) < 1e-9);
}

#[test]
fn conjugate_symmetry_of_real_fields() {
    let g = grid1(64, 4.0);
    let u = random_field(&g, 12, 33);
    assert!(u.to_spectral().conjugate_asymmetry() < 1e-12);
}

#[test]
fn snapshot_round_trip() {
    let dir = std::env::temp_dir().join(format!("spide-snap-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g = grid1(64, 8.0);
    let fields = vec![random_field(&g, 10, 1), random_field(&g, 10, 2)];
    let path = dir.join("u.sfld");
    write_snapshot(&path, &fields).unwrap();
    let bytes = std::fs::metadata(&path).unwrap().len();
    assert_eq!(bytes, 32 + 2 * 64 * 8, "real snapshot payload size");
    let back = read_snapshot(&path).unwrap();
    assert_eq!(back.len(), 2);
    for (a, b) in fields.iter().zip(back.iter()) {
        assert!(a.linf_distance(b) < 1e-14);
    }
    std::fs::remove_dir_all(&dir).ok();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_shift_round_trip(seed in 0u64..1000, y in -20.0f64..20.0) {
        let g = grid1(64, 9.0);
        let u = random_field(&g, 12, seed);
        let back = shift_field(&shift_field(&u, [y, 0.0]), [-y, 0.0]);
        prop_assert!(u.linf_distance(&back) < 1e-12);
    }

    #[test]
    fn prop_transform_round_trip(seed in 0u64..1000) {
        let g = grid1(128, 16.0);
        let u = random_field(&g, 40, seed);
        prop_assert!(u.linf_distance(&u.to_spectral().to_physical()) < 1e-12);
    }
}
