use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

pub(crate) fn three_pow(k: usize) -> BigInt {
    num_traits::pow(BigInt::from(3), k)
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Fixed-point decimal rendering, truncated toward minus infinity.
pub fn rational_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let floored = (r * BigRational::from(scale)).floor().to_integer();
    let (sign, mag) = if floored.is_negative() {
        ("-", -floored)
    } else {
        ("", floored)
    };
    let mut s = mag.to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let point = s.len() - digits;
    format!("{}{}.{}", sign, &s[..point], &s[point..])
}

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
