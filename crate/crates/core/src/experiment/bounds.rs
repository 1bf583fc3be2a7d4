use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// `exp(sqrt((1/2 - eps) ln q) * sqrt(g ln ln g / ln g))`, the growth rate
/// the resonance argument guarantees for the family maximum.
pub fn theorem_bound(field: FieldSpec, g: usize, eps: f64) -> Result<f64> {
    if g < 3 {
        return Err(Error::InvalidParams(format!(
            "genus {g} too small: ln ln g must be positive (g >= 3)"
        )));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParams(format!("eps = {eps} not in (0, 1/2)")));
    }
    let lq = (field.q() as f64).ln();
    let g = g as f64;
    Ok((((0.5 - eps) * lq).sqrt() * (g * g.ln().ln() / g.ln()).sqrt()).exp())
}

/// `exp(sqrt(ln q) * sqrt(n ln n))`, the conjectured size of the maximum.
pub fn fgh_value(field: FieldSpec, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("degree {n} too small (n >= 2)")));
    }
    let n = n as f64;
    Ok(((field.q() as f64).ln().sqrt() * (n * n.ln()).sqrt()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn reference_values() {
        let b = theorem_bound(f3(), 100, 0.1).unwrap();
        let expect = ((0.4 * 3f64.ln()).sqrt() * (100.0 * 100f64.ln().ln() / 100f64.ln()).sqrt()).exp();
        assert!((b - expect).abs() < 1e-12);
        assert!((b - 45.5).abs() < 0.1, "{b}");
        let near_half = theorem_bound(f3(), 100, 0.5 - 1e-12).unwrap();
        assert!((near_half - 1.0).abs() < 1e-4);
        assert!(theorem_bound(f3(), 2, 0.1).is_err());
        assert!(theorem_bound(f3(), 10, 0.6).is_err());
    }

    #[test]
    fn monotone_in_genus() {
        let vals: Vec<f64> = (10..=1000).map(|g| theorem_bound(f3(), g, 0.1).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fgh_reference() {
        let v = fgh_value(f3(), 9).unwrap();
        assert!((v - (3f64.ln().sqrt() * (9.0 * 9f64.ln()).sqrt()).exp()).abs() < 1e-9);
        assert!(fgh_value(f3(), 2).unwrap() > 1.0);
        assert!(fgh_value(f3(), 1).is_err());
        for g in 3..=60 {
            assert!(fgh_value(f3(), 2 * g + 1).unwrap() > theorem_bound(f3(), g, 0.1).unwrap());
        }
    }
}
