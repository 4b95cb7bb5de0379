use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// A nonnegative rational kept with its natural denominator (e.g. `|G|^n`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: BigUint,
    pub den: BigUint,
}

impl Ratio {
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Ratio {
            num: num.into(),
            den,
        }
    }

    pub fn reduced(&self) -> Ratio {
        let g = self.num.gcd(&self.den);
        if g.is_zero() {
            return Ratio::new(0u32, 1u32);
        }
        Ratio {
            num: &self.num / &g,
            den: &self.den / &g,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.reduced();
        match (r.num.to_f64(), r.den.to_f64()) {
            (Some(n), Some(d)) if d.is_finite() => n / d,
            _ => f64::NAN,
        }
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        Ratio {
            num: &self.num * &other.den + &other.num * &self.den,
            den: &self.den * &other.den,
        }
        .reduced()
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by value; equal values with different denominators compare equal here
/// but not under `==`, which is structural.
impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// Reduced form.
impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        write!(f, "{}/{}", r.num, r.den)
    }
}
