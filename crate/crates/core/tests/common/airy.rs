//! Airy function from its Maclaurin series, independent of any contour code.

const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub fn gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + 7.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

fn coefficients(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n];
    a[0] = 1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0));
    a[1] = -1.0 / (3f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0));
    // y'' = x y
    for k in 3..n {
        a[k] = a[k - 3] / (k as f64 * (k - 1) as f64);
    }
    a
}

pub fn ai(x: f64) -> f64 {
    coefficients(120)
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c)
}

pub fn ai_prime(x: f64) -> f64 {
    let a = coefficients(120);
    (1..a.len())
        .rev()
        .fold(0.0, |acc, k| acc * x + k as f64 * a[k])
}

#[test]
fn anchors() {
    assert!((ai(0.0) - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((ai_prime(0.0) + 0.258_819_403_792_806_8).abs() < 1e-15);
    assert!((ai(1.0) - 0.135_292_416_312_881_4).abs() < 1e-14);
}
