use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// The space/time trade-off parameter, an exact rational in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u16,
    den: u16,
}

impl Epsilon {
    pub const ONE: Epsilon = Epsilon { num: 1, den: 1 };

    pub fn new(num: u16, den: u16) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidInput(format!(
                "epsilon {num}/{den} must lie in (0, 1]"
            )));
        }
        Ok(Epsilon { num, den })
    }

    pub fn num(self) -> u16 {
        self.num
    }

    pub fn den(self) -> u16 {
        self.den
    }

    /// `⌊ε·n⌋`.
    pub fn floor_times(self, n: usize) -> usize {
        (n as u128 * self.num as u128 / self.den as u128) as usize
    }

    /// `⌈1/ε⌉`.
    pub fn inverse_ceil(self) -> usize {
        (self.den as usize).div_ceil(self.num as usize)
    }

    /// LZ78 counter threshold `max(1, ⌊n^(ε/4)⌋)`, computed exactly.
    pub fn delta(self, n: usize) -> usize {
        let g = gcd(self.num as u64, self.den as u64);
        let (p, q) = ((self.num as u64 / g) as u32, (self.den as u64 / g) as u32);
        // largest d with d^(4q) <= n^p
        let rhs = BigUint::from(n as u64).pow(p);
        let fits = |d: u64| BigUint::from(d).pow(4 * q) <= rhs;
        let guess = (n as f64).powf(p as f64 / (4.0 * q as f64)).floor() as u64;
        let mut d = guess.max(1);
        while d > 1 && !fits(d) {
            d -= 1;
        }
        while fits(d + 1) {
            d += 1;
        }
        d.max(1) as usize
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::ONE
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("epsilon must be NUM/DEN, got {s:?}"));
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let num = a.trim().parse().map_err(|_| bad())?;
        let den = b.trim().parse().map_err(|_| bad())?;
        Epsilon::new(num, den)
    }
}
