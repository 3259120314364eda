use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::scalar::Scalar;

/// Polynomial in the central variable hbar. `c[k]` is the coefficient of
/// hbar^k; trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct HbarPoly<S: Scalar> {
    c: Vec<S>,
}

impl<S: Scalar> HbarPoly<S> {
    pub fn zero() -> Self {
        HbarPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(v: S) -> Self {
        Self::monomial(v, 0)
    }

    pub fn hbar() -> Self {
        Self::monomial(S::one(), 1)
    }

    pub fn monomial(v: S, power: usize) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        let mut c = vec![S::zero(); power + 1];
        c[power] = v;
        HbarPoly { c }
    }

    pub fn from_coeffs(c: Vec<S>) -> Self {
        let mut p = HbarPoly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(v) if v.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.c
    }

    pub fn coeff(&self, power: usize) -> S {
        self.c.get(power).cloned().unwrap_or_else(S::zero)
    }

    /// Degree in hbar; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.c.iter().position(|v| !v.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn has_hbar(&self) -> bool {
        self.c.len() > 1
    }

    pub fn constant_term(&self) -> S {
        self.coeff(0)
    }

    pub fn scale(&self, v: &S) -> Self {
        if v.is_zero() {
            return Self::zero();
        }
        HbarPoly { c: self.c.iter().map(|a| a.clone() * v.clone()).collect() }
    }

    pub fn shift(&self, power: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![S::zero(); power];
        c.extend(self.c.iter().cloned());
        HbarPoly { c }
    }

    /// Divides by hbar^power; `None` unless every dropped coefficient is zero.
    pub fn unshift(&self, power: usize) -> Option<Self> {
        if self.c.iter().take(power).any(|v| !v.is_zero()) {
            return None;
        }
        Some(HbarPoly { c: self.c.iter().skip(power).cloned().collect() })
    }

    pub fn eval(&self, at: &S) -> S {
        let mut acc = S::zero();
        for v in self.c.iter().rev() {
            acc = acc * at.clone() + v.clone();
        }
        acc
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        if self.c.len() < other.c.len() {
            self.c.resize(other.c.len(), S::zero());
        }
        for (a, b) in self.c.iter_mut().zip(other.c.iter()) {
            *a = a.clone() + b.clone();
        }
        self.trim();
    }
}

impl<S: Scalar> Add for &HbarPoly<S> {
    type Output = HbarPoly<S>;
    fn add(self, other: &HbarPoly<S>) -> HbarPoly<S> {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }
}

impl<S: Scalar> Sub for &HbarPoly<S> {
    type Output = HbarPoly<S>;
    fn sub(self, other: &HbarPoly<S>) -> HbarPoly<S> {
        let mut out = self.clone();
        out.add_assign_ref(&-other);
        out
    }
}

impl<S: Scalar> Neg for &HbarPoly<S> {
    type Output = HbarPoly<S>;
    fn neg(self) -> HbarPoly<S> {
        HbarPoly { c: self.c.iter().map(|v| -v.clone()).collect() }
    }
}

impl<S: Scalar> Mul for &HbarPoly<S> {
    type Output = HbarPoly<S>;
    fn mul(self, other: &HbarPoly<S>) -> HbarPoly<S> {
        if self.is_zero() || other.is_zero() {
            return HbarPoly::zero();
        }
        let mut c = vec![S::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        HbarPoly::from_coeffs(c)
    }
}

pub(crate) fn fmt_rational<S: Scalar>(v: &S, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.is_integer_value() {
        write!(f, "{v}")
    } else {
        write!(f, "({v})")
    }
}

impl<S: Scalar> HbarPoly<S> {
    /// Writes the polynomial as a sum with an explicit leading sign handled by
    /// the caller: returns `(negated, body)` where body is a product prefix
    /// such as `(1/2)*hbar` or `3` (empty when the polynomial is 1).
    pub(crate) fn term_prefix(&self) -> (bool, String) {
        let nz: Vec<usize> = (0..self.c.len()).filter(|&k| !self.c[k].is_zero()).collect();
        if nz.len() == 1 {
            let k = nz[0];
            let v = &self.c[k];
            let neg = v.is_negative();
            let a = v.abs();
            let mut parts = Vec::new();
            if !a.is_one() {
                parts.push(rational_text(&a));
            }
            match k {
                0 => {}
                1 => parts.push("hbar".to_string()),
                _ => parts.push(format!("hbar^{k}")),
            }
            return (neg, parts.join("*"));
        }
        (false, format!("({self})"))
    }
}

pub(crate) fn rational_text<S: Scalar>(v: &S) -> String {
    if v.is_integer_value() {
        format!("{v}")
    } else {
        format!("({v})")
    }
}

impl<S: Scalar> fmt::Display for HbarPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let neg = v.is_negative();
            let a = v.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => fmt_rational(&a, f)?,
                _ => {
                    if !a.is_one() {
                        fmt_rational(&a, f)?;
                        write!(f, "*")?;
                    }
                    if k == 1 {
                        write!(f, "hbar")?;
                    } else {
                        write!(f, "hbar^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
