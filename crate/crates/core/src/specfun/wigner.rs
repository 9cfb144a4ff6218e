use super::AngularMomentum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::f64::consts::PI;

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
///
/// Evaluated with the Racah sum in exact rational arithmetic; only the final
/// square root is taken in floating point. Returns 0 when the projections do
/// not sum to zero or the triangle condition fails.
pub fn wigner_3j(a: AngularMomentum, b: AngularMomentum, c: AngularMomentum) -> f64 {
    wigner_3j_doubled(
        a.two_j() as i64,
        b.two_j() as i64,
        c.two_j() as i64,
        a.two_m() as i64,
        b.two_m() as i64,
        c.two_m() as i64,
    )
}

/// [`wigner_3j`] on raw doubled quantum numbers. Inconsistent input (|m| > j,
/// mismatched parity, negative j) yields 0.
pub fn wigner_3j_doubled(tj1: i64, tj2: i64, tj3: i64, tm1: i64, tm2: i64, tm3: i64) -> f64 {
    if tj1 < 0 || tj2 < 0 || tj3 < 0 {
        return 0.0;
    }
    if tm1 + tm2 + tm3 != 0 {
        return 0.0;
    }
    for (tj, tm) in [(tj1, tm1), (tj2, tm2), (tj3, tm3)] {
        if tm.abs() > tj || (tj - tm) % 2 != 0 {
            return 0.0;
        }
    }
    if (tj1 + tj2 + tj3) % 2 != 0 {
        return 0.0;
    }
    if tj3 > tj1 + tj2 || tj3 < (tj1 - tj2).abs() {
        return 0.0;
    }

    // All combinations below are integers once the checks above pass.
    let h = |x: i64| x / 2;
    let j1pj2mj3 = h(tj1 + tj2 - tj3);
    let j1mj2pj3 = h(tj1 - tj2 + tj3);
    let mj1pj2pj3 = h(-tj1 + tj2 + tj3);
    let jsum1 = h(tj1 + tj2 + tj3) + 1;

    let triangle = BigRational::new(
        fact(j1pj2mj3) * fact(j1mj2pj3) * fact(mj1pj2pj3),
        fact(jsum1),
    );
    let projections = fact(h(tj1 + tm1))
        * fact(h(tj1 - tm1))
        * fact(h(tj2 + tm2))
        * fact(h(tj2 - tm2))
        * fact(h(tj3 + tm3))
        * fact(h(tj3 - tm3));

    let t1 = h(tj3 - tj2 + tm1);
    let t2 = h(tj3 - tj1 - tm2);
    let t3 = j1pj2mj3;
    let t4 = h(tj1 - tm1);
    let t5 = h(tj2 + tm2);
    let kmin = 0.max(-t1).max(-t2);
    let kmax = t3.min(t4).min(t5);

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = fact(k) * fact(t1 + k) * fact(t2 + k) * fact(t3 - k) * fact(t4 - k) * fact(t5 - k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }

    let squared = triangle * BigRational::from_integer(projections) * &sum * &sum;
    let magnitude = squared.to_f64().unwrap_or(0.0).sqrt();
    let phase_exp = h(tj1 - tj2 - tm3);
    let mut value = if sum.is_negative() { -magnitude } else { magnitude };
    if phase_exp.rem_euclid(2) == 1 {
        value = -value;
    }
    value
}

fn fact(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `∫ Y_{l1}^{m1} Y_{l2}^{m2} Y_{l3}^{m3} dΩ` for Condon–Shortley harmonics.
pub fn gaunt(l1: i32, m1: i32, l2: i32, m2: i32, l3: i32, m3: i32) -> f64 {
    if l1 < 0 || l2 < 0 || l3 < 0 {
        return 0.0;
    }
    let d = |x: i32| 2 * x as i64;
    let pre = (((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)) as f64 / (4.0 * PI)).sqrt();
    pre * wigner_3j_doubled(d(l1), d(l2), d(l3), 0, 0, 0)
        * wigner_3j_doubled(d(l1), d(l2), d(l3), d(m1), d(m2), d(m3))
}
