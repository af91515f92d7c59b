//! Exact characteristic-polynomial oracle for small tridiagonal matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Characteristic polynomial det(T - x I) coefficients (lowest degree first),
/// expanded exactly with the three-term determinant recurrence.
pub fn char_poly(d: &[f64], e: &[f64]) -> Vec<BigRational> {
    let mul_linear = |p: &[BigRational], c: &BigRational| {
        // (c - x) * p
        let mut out = vec![BigRational::zero(); p.len() + 1];
        for (i, a) in p.iter().enumerate() {
            out[i] += c * a;
            out[i + 1] -= a.clone();
        }
        out
    };
    let mut prev2 = vec![BigRational::one()];
    let mut prev = mul_linear(&prev2, &to_rational(d[0]));
    for i in 1..d.len() {
        let mut next = mul_linear(&prev, &to_rational(d[i]));
        let e2 = to_rational(e[i - 1]) * to_rational(e[i - 1]);
        for (j, a) in prev2.iter().enumerate() {
            next[j] -= &e2 * a;
        }
        prev2 = prev;
        prev = next;
    }
    prev
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Roots by sign scanning on a fine rational grid followed by exact-sign
/// bisection.
pub fn poly_roots(p: &[BigRational], lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (hi - lo) / samples as f64;
    let mut a = to_rational(lo);
    let mut fa = eval(p, &a);
    for i in 1..=samples {
        let b = to_rational(lo + step * i as f64);
        let fb = eval(p, &b);
        if fa.is_zero() {
            roots.push(a.to_string().parse::<f64>().unwrap_or(f64::NAN));
        } else if fa.signum() != fb.signum() && !fb.is_zero() {
            let (mut l, mut r, mut fl) = (a.clone(), b.clone(), fa.clone());
            for _ in 0..60 {
                let m = (&l + &r) / BigRational::from_integer(BigInt::from(2));
                let fm = eval(p, &m);
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            let mid = (&l + &r) / BigRational::from_integer(BigInt::from(2));
            let (num, den) = (mid.numer().clone(), mid.denom().clone());
            roots.push(ratio_to_f64(&num, &den));
        }
        a = b;
        fa = fb;
    }
    roots
}

fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let scale = BigInt::from(10u64).pow(30);
    let q = (num * &scale) / den;
    q.to_string().parse::<f64>().unwrap() / 1e30
}
