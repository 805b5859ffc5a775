//! Number formatting shared by the text reports.

/// Largest denominator tried by [`rational`].
pub const MAX_DENOMINATOR: u64 = 144;

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor();
    if !(-4.0..12.0).contains(&magnitude) {
        let s = format!("{x:.11e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11.0 - magnitude).max(0.0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `(p, q)` with the smallest `q ≤ 144` such that `|x − p/q| ≤ 1e-12`.
pub fn rational(x: f64) -> Option<(i64, u64)> {
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= 1e-12).then_some((p as i64, q))
    })
}

/// A probability with an exact-fraction annotation when one fits, e.g.
/// `0.0833333333333 (1/12)`. Integers get no annotation.
pub fn prob(x: f64) -> String {
    match rational(x) {
        Some((p, q)) if q > 1 => format!("{} ({p}/{q})", sig12(x)),
        _ => sig12(x),
    }
}

/// Eigenvalues print as `+1`, `-1`, `0` when they are those values.
pub fn eigen(v: f64) -> String {
    if (v - 1.0).abs() < 1e-9 {
        "+1".into()
    } else if (v + 1.0).abs() < 1e-9 {
        "-1".into()
    } else if v.abs() < 1e-9 {
        "0".into()
    } else if v > 0.0 {
        format!("+{}", sig12(v))
    } else {
        sig12(v)
    }
}

pub fn complex(re: f64, im: f64) -> String {
    match (re == 0.0, im == 0.0) {
        (_, true) => sig12(re),
        (true, false) => format!("{}i", sig12(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", sig12(re), sig12(im.abs()))
        }
    }
}

/// `name1=+1, name2=0` for an outcome label.
pub fn outcome_label(names: &[String], values: &[f64]) -> String {
    names.iter().zip(values).map(|(n, v)| format!("{n}={}", eigen(*v))).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0 / 12.0), "0.0833333333333");
        assert_eq!(sig12(11.0 / 12.0), "0.916666666667");
        assert_eq!(sig12(0.75), "0.75");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-0.0), "0");
        assert_eq!(sig12(123.5), "123.5");
        assert_eq!(sig12(2.5e-17), "2.5e-17");
    }

    #[test]
    fn rational_annotation() {
        assert_eq!(prob(1.0 / 12.0), "0.0833333333333 (1/12)");
        assert_eq!(prob(0.75), "0.75 (3/4)");
        assert_eq!(prob(1.0), "1");
        assert_eq!(prob(0.0), "0");
        assert_eq!(rational(1.0 / 143.0), Some((1, 143)));
        assert_eq!(rational(1.0 / 145.0), None);
        assert_eq!(prob(0.1234567), "0.1234567");
    }

    #[test]
    fn eigen_labels() {
        assert_eq!(eigen(1.0), "+1");
        assert_eq!(eigen(-1.0 + 1e-12), "-1");
        assert_eq!(eigen(1e-13), "0");
        assert_eq!(eigen(2.0), "+2");
        assert_eq!(outcome_label(&["a".into(), "b".into()], &[1.0, 0.0]), "a=+1, b=0");
    }
}
