//! Exact arithmetic for view-count statistics.

use num_rational::Ratio;

/// Exact rational over `i128`. View counts fit in `u64`, and sums over a
/// channel's videos stay far below the `i128` range.
pub type Rational = Ratio<i128>;

pub fn from_u64(v: u64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Median of exact rationals; the even-count median is the midpoint of the
/// two central values. Sorts `values` in place.
pub fn median(values: &mut [Rational]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        Some(values[mid])
    } else {
        Some((values[mid - 1] + values[mid]) / Rational::from_integer(2))
    }
}

pub fn mean(values: &[Rational]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let sum = values.iter().fold(Rational::from_integer(0), |acc, v| acc + v);
    Some(sum / Rational::from_integer(values.len() as i128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn median_even_and_odd() {
        let mut odd = vec![from_u64(3), from_u64(1), from_u64(2)];
        assert_eq!(median(&mut odd), Some(from_u64(2)));
        let mut even = vec![from_u64(1), from_u64(2)];
        assert_eq!(median(&mut even), Some(Rational::new(3, 2)));
        assert_eq!(median(&mut []), None);
    }

    #[test]
    fn mean_is_exact() {
        let vals = [Rational::new(1, 3), Rational::new(1, 6)];
        assert_eq!(mean(&vals), Some(Rational::new(1, 4)));
        assert_eq!(to_f64(&Rational::new(1, 4)), 0.25);
    }
}
