use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i128>;

/// Dense polynomial in `n` with rational coefficients, lowest degree first.
/// Trailing zero coefficients are never stored, so the zero polynomial is the
/// empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i128]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: i128) -> Poly {
        Poly::from_ints(&[c])
    }

    /// The polynomial `n`.
    pub fn identity() -> Poly {
        Poly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().copied().unwrap_or_else(Rational::zero)
    }

    /// Sign of the leading coefficient: the eventual sign of the polynomial.
    pub fn eventual_sign(&self) -> i8 {
        let l = self.leading();
        if l.is_zero() {
            0
        } else if l.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn eval(&self, n: i128) -> Rational {
        let x = Rational::from_integer(n);
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Value at `n` when it is an integer.
    pub fn eval_int(&self, n: i128) -> Option<i128> {
        let v = self.eval(n);
        v.is_integer().then(|| v.to_integer())
    }

    /// Integer bound `B` such that for every `n > B` the sign of the value
    /// equals the sign of the leading coefficient (Cauchy's root bound).
    pub fn sign_stable_beyond(&self) -> u64 {
        let Some(d) = self.degree() else { return 0 };
        if d == 0 {
            return 0;
        }
        let lead = self.leading().abs();
        let max_ratio = self.coeffs[..d]
            .iter()
            .map(|c| (c.abs() / lead).ceil().to_integer())
            .max()
            .unwrap_or(0);
        (max_ratio + 1) as u64
    }

    pub fn scale(&self, k: Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> i128 {
        self.coeffs.iter().fold(1i128, |acc, c| acc.lcm(c.denom()))
    }

    /// Polynomial division by a monic-or-not divisor: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = *rem.last().unwrap() / lead;
            quot[k] = c;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= c * dc;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) && rem.len() > dd {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = if mag.is_integer() { mag.to_integer().to_string() } else { format!("({}/{})", mag.numer(), mag.denom()) };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}")?;
                    }
                    write!(f, "n")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
