//! Double-double arithmetic (an unevaluated sum `hi + lo` of two `f64`s,
//! about 32 significant digits).
//!
//! Only what the Fourier quadrature needs: add, multiply, divide, and
//! `sin`/`cos` of `2π r / q` for integers `r`, `q`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DDouble {
    pub hi: f64,
    pub lo: f64,
}

/// π to double-double precision.
pub const PI: DDouble = DDouble {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn scale(self, s: f64) -> Self {
        self * DDouble::new(s)
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = DDouble::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Div for DDouble {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DDouble::new(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DDouble::new(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DDouble { hi, lo } + DDouble::new(q3)
    }
}

impl Add for DDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        DDouble { hi, lo }
    }
}

impl Neg for DDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        DDouble { hi, lo }
    }
}

/// Taylor series of `sin` and `cos` for `|x| ≤ π/4`.
fn sin_cos_small(x: DDouble) -> (DDouble, DDouble) {
    let x2 = x * x;
    let mut sin = x;
    let mut cos = DDouble::ONE;
    let mut term_s = x;
    let mut term_c = DDouble::ONE;
    let mut k = 1.0;
    loop {
        // term_s: x^(2k+1)/(2k+1)!, term_c: x^(2k)/(2k)!
        term_c = term_c * x2 / DDouble::new((2.0 * k - 1.0) * (2.0 * k));
        term_s = term_s * x2 / DDouble::new((2.0 * k) * (2.0 * k + 1.0));
        if k as u32 % 2 == 1 {
            sin = sin - term_s;
            cos = cos - term_c;
        } else {
            sin = sin + term_s;
            cos = cos + term_c;
        }
        if term_c.hi.abs() < 1e-36 && term_s.hi.abs() < 1e-36 {
            break;
        }
        k += 1.0;
    }
    (sin, cos)
}

/// `(sin(2π r/q), cos(2π r/q))` in double-double precision.
///
/// The angle is reduced exactly on the integers: octant symmetries map `r`
/// into `[0, q/8]`, so the series only ever sees `|x| ≤ π/4`.
pub fn sin_cos_turn(r: i64, q: i64) -> (DDouble, DDouble) {
    assert!(q > 0);
    let r = r.rem_euclid(q);
    // work in units of 1/(8q) of a turn: angle = 2π (8r) / (8q)
    let a = 8 * r;
    let octant = a / q; // 0..8
    let rem = a - octant * q; // angle within the octant, in units of 2π/(8q)
    // angle of the current octant offset: x = (π/4)·rem/q
    let frac = |num: i64| PI.scale(0.25).scale(num as f64) / DDouble::new(q as f64);
    // for odd octants reflect so the series argument is the distance to the next octant boundary
    let (s, c) = if octant % 2 == 0 {
        sin_cos_small(frac(rem))
    } else {
        let (s, c) = sin_cos_small(frac(q - rem));
        (c, s)
    };
    match octant {
        0 | 1 => (s, c),
        2 | 3 => (c, -s),
        4 | 5 => (-s, -c),
        _ => (-c, s),
    }
}
