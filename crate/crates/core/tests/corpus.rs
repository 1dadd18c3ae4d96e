use henstock_orlicz::funcspace::KnownQuantity;
use henstock_orlicz::gauge::alexiewicz_norm;
use henstock_orlicz::orlicz::luxemburg_norm;
use henstock_orlicz::{corpus, henstock_integrate, Interval, YoungFunction};

#[test]
fn every_known_value_is_reproduced() {
    for entry in corpus() {
        let f = &entry.function;
        for known in &entry.known_values {
            let (got, tol) = match known.quantity {
                KnownQuantity::Integral { a, b } => (henstock_integrate(f, Interval::new(a, b), 1e-7).value, 1e-6),
                KnownQuantity::Alexiewicz { a, b } => (alexiewicz_norm(f, Interval::new(a, b), 1e-8).unwrap(), 1e-4),
                KnownQuantity::Luxemburg { young } => {
                    let y = YoungFunction::from_name(young).unwrap();
                    (luxemburg_norm(f, &y, f.support(), 1e-10).norm, 1e-7)
                }
                KnownQuantity::Antiderivative { x } => (f.antiderivative(x).unwrap(), 1e-15),
            };
            assert!((got - known.value).abs() <= tol, "{} {:?}: {got} vs {} ({})", entry.name, known.quantity, known.value, known.note);
        }
    }
}

#[test]
fn antiderivatives_agree_with_integrals() {
    for entry in corpus() {
        let f = &entry.function;
        let iv = f.support();
        if !f.has_antiderivative() || !iv.is_bounded() || entry.name == "c4" {
            continue;
        }
        for i in 1..=4 {
            let b = iv.lo + iv.len() * i as f64 / 4.0;
            let r = henstock_integrate(f, Interval::new(iv.lo, b), 1e-10);
            let want = f.antiderivative(b).unwrap() - f.antiderivative(iv.lo).unwrap();
            assert!((r.value - want).abs() < 1e-9, "{} at {b}: {} vs {want}", entry.name, r.value);
        }
    }
}

#[test]
fn tags_match_behaviour() {
    for entry in corpus() {
        let f = &entry.function;
        if let Some(bound) = f.bound() {
            let iv = f.support();
            for i in 0..=1000 {
                let x = iv.lo + iv.len() * i as f64 / 1000.0;
                assert!(f.value(x).abs() <= bound, "{} exceeds its bound at {x}", entry.name);
            }
        }
    }
}
