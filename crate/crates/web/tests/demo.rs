use contact_valuations_web::{gauss_crofton_curve, kahler_cosine_histogram, sphere_radius_curve};

#[test]
fn radius_curve_follows_the_scaled_law() {
    let radii = [0.5, 1.0, 2.0, 5.0];
    for scale in [1.0, 2.0, 3.0] {
        let out = sphere_radius_curve(&radii, scale).unwrap();
        assert_eq!(out.len(), 8);
        for (i, r) in radii.iter().enumerate() {
            let expected = 8.0 * r * r * scale * scale / (r * r * scale * scale + 1.0);
            assert!((out[i] - expected).abs() < 1e-6, "scale {scale}, radius {r}: {}", out[i]);
            assert!((out[4 + i] - expected).abs() < 1e-12);
        }
    }
    assert!(sphere_radius_curve(&radii, 0.0).is_err());
}

#[test]
fn histogram_matches_top_uniform_order_statistic() {
    let bins = 10;
    let out = kahler_cosine_histogram(2, 1, 20_000, 7, bins).unwrap();
    let (observed, reference) = out.split_at(bins);
    // largest of one uniform on [0, 1]
    assert!(reference.iter().all(|&d| (d - 1.0).abs() < 1e-12));
    let mass: f64 = observed.iter().sum::<f64>() / bins as f64;
    assert!((mass - 1.0).abs() < 1e-12);
    assert!(observed.iter().all(|&d| (d - 1.0).abs() < 0.1), "{observed:?}");
    assert_eq!(out, kahler_cosine_histogram(2, 1, 20_000, 7, bins).unwrap());
}

#[test]
fn histogram_reference_for_two_angles() {
    let bins = 4;
    let out = kahler_cosine_histogram(4, 2, 1_000, 3, bins).unwrap();
    // largest of two uniforms has density 2x
    for (i, d) in out[bins..].iter().enumerate() {
        assert!((d - (2 * i + 1) as f64 / bins as f64).abs() < 1e-12);
    }
}

#[test]
fn histogram_rejects_lagrangian_only_shapes() {
    assert!(kahler_cosine_histogram(2, 2, 100, 1, 10).is_err());
    assert!(kahler_cosine_histogram(2, 3, 100, 1, 10).is_err());
    assert!(kahler_cosine_histogram(2, 1, 100, 1, 0).is_err());
}

#[test]
fn gauss_curve_agrees_and_marks_divergence() {
    let out = gauss_crofton_curve(2, &[-1.5, 0.0, 1.0]).unwrap();
    assert!(out[3].is_nan() && !out[4].is_nan());
    assert!((out[1] - std::f64::consts::PI).abs() < 1e-12);
    // lines in R^3 make |cos| uniform on [0, 1], so the mean is 1/2
    assert!((out[2] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((out[5] - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
}
