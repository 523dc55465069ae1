use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{render_rational, AlgebraError, Rational};

/// Integer polynomial, coefficients from the constant term upwards.
pub type IntPoly = Vec<BigInt>;

/// The `m`-th cyclotomic polynomial, by exact division of `x^m - 1` by
/// `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: usize) -> Result<IntPoly, AlgebraError> {
    if m == 0 {
        return Err(AlgebraError::ZeroConductor);
    }
    let mut cache: Vec<Option<IntPoly>> = vec![None; m + 1];
    for n in 1..=m {
        if !m.is_multiple_of(n) {
            continue;
        }
        let mut p: IntPoly = vec![BigInt::zero(); n + 1];
        p[0] = BigInt::from(-1);
        p[n] = BigInt::one();
        for (d, phi_d) in cache.iter().enumerate().take(n).skip(1) {
            if n.is_multiple_of(d) {
                p = div_exact_monic(&p, phi_d.as_ref().expect("divisors computed first"));
            }
        }
        cache[n] = Some(p);
    }
    Ok(cache[m].take().expect("m divides m"))
}

/// Exact quotient of `a` by the monic polynomial `b`; panics if the division
/// leaves a remainder (only used where divisibility is known).
fn div_exact_monic(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = b.len() - 1;
    let mut rem = a.clone();
    if rem.len() < b.len() {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// An element of `Q(ζ_m)`, stored as the residue of a rational polynomial in
/// `ζ_m` modulo `Φ_m`. Coefficients have degree below `φ(m)` and no trailing
/// zeros, so equality is exact field equality.
#[derive(Clone)]
pub struct CyclotomicNumber {
    conductor: usize,
    modulus: Arc<IntPoly>,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(conductor: usize) -> Result<Self, AlgebraError> {
        let modulus = Arc::new(cyclotomic_polynomial(conductor)?);
        Ok(CyclotomicNumber {
            conductor,
            modulus,
            coeffs: Vec::new(),
        })
    }

    pub fn from_rational(conductor: usize, q: Rational) -> Result<Self, AlgebraError> {
        let mut z = Self::zero(conductor)?;
        z.coeffs = vec![q];
        z.normalize();
        Ok(z)
    }

    /// `ζ_m^k`.
    pub fn zeta_power(conductor: usize, k: i64) -> Result<Self, AlgebraError> {
        let mut z = Self::zero(conductor)?;
        let k = k.rem_euclid(conductor as i64) as usize;
        z.coeffs = vec![Rational::zero(); k + 1];
        z.coeffs[k] = Rational::one();
        z.normalize();
        Ok(z)
    }

    /// Reduces an arbitrary polynomial in `ζ_m`.
    pub fn from_coefficients(conductor: usize, coeffs: Vec<Rational>) -> Result<Self, AlgebraError> {
        let mut z = Self::zero(conductor)?;
        z.coeffs = coeffs;
        z.normalize();
        Ok(z)
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some(q)` when the value is the rational `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        let deg = self.modulus.len() - 1;
        let lead = &self.modulus[deg];
        debug_assert!(lead.is_one());
        while self.coeffs.len() > deg {
            let top = self.coeffs.len() - 1;
            let c = self.coeffs.pop().expect("nonempty");
            if !c.is_zero() {
                let shift = top - deg;
                for (j, mj) in self.modulus.iter().enumerate().take(deg) {
                    self.coeffs[shift + j] -= &c * Rational::from_integer(mj.clone());
                }
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.conductor == other.conductor {
            Ok(())
        } else {
            Err(AlgebraError::ConductorMismatch(self.conductor, other.conductor))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut z = CyclotomicNumber {
            conductor: self.conductor,
            modulus: self.modulus.clone(),
            coeffs,
        };
        z.normalize();
        Ok(z)
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut z = CyclotomicNumber {
            conductor: self.conductor,
            modulus: self.modulus.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        };
        z.normalize();
        z
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(CyclotomicNumber {
                conductor: self.conductor,
                modulus: self.modulus.clone(),
                coeffs: Vec::new(),
            });
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut z = CyclotomicNumber {
            conductor: self.conductor,
            modulus: self.modulus.clone(),
            coeffs,
        };
        z.normalize();
        Ok(z)
    }

    /// Complex value as `(re, im)`, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * (theta * k as f64).cos();
            im += v * (theta * k as f64).sin();
        }
        (re, im)
    }

    /// Polynomial in `z`, highest degree first, e.g. `z^2 - 1/2*z + 3`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let monomial = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                out.push_str(&render_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{}*{}", render_rational(&abs), monomial));
            }
        }
        out
    }

    /// Decimal hint with 12 digits after the point, e.g. `0.000000000000+1.000000000000i`.
    pub fn decimal_hint(&self) -> String {
        let (re, im) = self.to_complex();
        let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
        let (re, im) = (clean(re), clean(im));
        if im == 0.0 {
            format!("{re:.12}")
        } else {
            format!("{re:.12}{}{:.12}i", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(z{})[{}]", self.conductor, self.render())
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
