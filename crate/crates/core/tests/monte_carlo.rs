use blackbody_decomp::distributions::{moments, ModeParams, VariableFamily};
use blackbody_decomp::sampling::{
    default_m_max, default_s_max, fit_values, goodness_of_fit, sample, sample_chaotic_amplitude,
    sample_coupled, AmplitudeBase, ExactLaw, RandomStream, SampledLaw,
};

fn mode(beta: f64) -> ModeParams {
    ModeParams::from_beta(beta).unwrap()
}

#[test]
fn reference_stream_prefix() {
    let mut rs = RandomStream::new(42, 0);
    let got: Vec<u64> = (0..4).map(|_| rs.next_u64()).collect();
    assert_eq!(
        got,
        [15021278609987233951, 5881210131331364753, 18149643915985481100, 12933668939759105464]
    );
    let mut rs = RandomStream::new(42, 2);
    let got: Vec<u64> = (0..4).map(|_| rs.next_u64()).collect();
    assert_eq!(
        got,
        [13626344447376589899, 6866272446064134760, 5967244582632191458, 3471631850228312087]
    );
}

#[test]
fn same_seed_same_batch() {
    let p = mode(1.0);
    let law = SampledLaw::Family(VariableFamily::Dark);
    let a = sample(law, &p, 1000, &mut RandomStream::new(9, 3)).unwrap();
    let b = sample(law, &p, 1000, &mut RandomStream::new(9, 3)).unwrap();
    let c = sample(law, &p, 1000, &mut RandomStream::new(9, 4)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.values, c.values);
}

#[test]
fn fits_hold_for_most_seeds() {
    let p = mode(1.0);
    for family in [VariableFamily::Gauss, VariableFamily::Planck, VariableFamily::Dark] {
        let law = SampledLaw::Family(family);
        let passed = (0..10u64)
            .filter(|&seed| {
                let batch = sample(law, &p, 100_000, &mut RandomStream::new(seed, 0)).unwrap();
                goodness_of_fit(&batch, &ExactLaw::of_family(family, &p)).unwrap().pass
            })
            .count();
        assert!(passed >= 9, "{family}: {passed} of 10");
    }
}

#[test]
fn component_sums_rebuild_planck_mean() {
    for beta in [0.1, 1.0, 5.0] {
        let p = mode(beta);
        let target = moments(VariableFamily::Planck, &p);
        for law in [
            SampledLaw::BinarySum { s_max: default_s_max(&p) },
            SampledLaw::MultipletSum { m_max: default_m_max(&p) },
        ] {
            let batch = sample(law, &p, 200_000, &mut RandomStream::new(42, 7)).unwrap();
            let se = (target.variance / batch.len() as f64).sqrt();
            assert!((batch.mean() - target.mean).abs() < 5.0 * se, "{law} beta={beta}");
        }
    }
}

#[test]
fn multiplet_values_are_multiples_of_order() {
    let p = mode(0.5);
    let batch = sample(
        SampledLaw::Family(VariableFamily::multiplet(3).unwrap()),
        &p,
        10_000,
        &mut RandomStream::new(1, 0),
    )
    .unwrap();
    assert!(batch.values.iter().all(|v| v % 3.0 == 0.0));
    assert!(batch.values.iter().any(|&v| v > 0.0));
}

#[test]
fn coupled_parts_follow_their_laws() {
    let p = mode(1.0);
    let batch = sample_coupled(&p, 200_000, &mut RandomStream::new(42, 11)).unwrap();
    let parts = batch.coupled.as_ref().unwrap();
    let ints: Vec<f64> = parts.integer_parts.iter().map(|&n| n as f64).collect();
    assert!(fit_values(&ints, &ExactLaw::Planck(p)).unwrap().pass);
    assert!(fit_values(&parts.fractions, &ExactLaw::Dark(p)).unwrap().pass);
    assert!(goodness_of_fit(&batch, &ExactLaw::Gauss(p)).unwrap().pass);
    for (i, &v) in batch.values.iter().enumerate().take(1000) {
        assert_eq!(v, parts.integer_parts[i] as f64 + parts.fractions[i]);
    }
}

#[test]
fn chaotic_amplitudes_are_gaussian() {
    let count = 100_000;
    let draws = sample_chaotic_amplitude(4096, AmplitudeBase::Uniform, 42, count).unwrap();
    let cosines: Vec<f64> = draws.iter().map(|a| a.cosine).collect();
    let fit = fit_values(&cosines, &ExactLaw::StandardNormal).unwrap();
    assert!(fit.pass, "{fit:?}");
    let mean = cosines.iter().sum::<f64>() / count as f64;
    assert!(mean.abs() < 5.0 / (count as f64).sqrt());

    let p = mode(2.0);
    let energies: Vec<f64> = draws.iter().map(|a| a.energy(&p)).collect();
    assert!(fit_values(&energies, &ExactLaw::Gauss(p)).unwrap().pass);
}

#[test]
fn rademacher_amplitudes_have_unit_variance() {
    let count = 20_000;
    let draws = sample_chaotic_amplitude(1000, AmplitudeBase::Rademacher, 5, count).unwrap();
    let n = count as f64;
    let mean = draws.iter().map(|a| a.sine).sum::<f64>() / n;
    let var = draws.iter().map(|a| a.sine * a.sine).sum::<f64>() / n - mean * mean;
    assert!(mean.abs() < 5.0 / n.sqrt());
    assert!((var - 1.0).abs() < 5.0 * (2.0 / n).sqrt());
}
