//! Sparse multivariate polynomials with rational coefficients.
//!
//! Just enough algebra to expand `det(C + A)` with the diagonal of `C` left
//! as formal variables and inspect its monomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{format_rational, Rational};

/// Exponent vector of a monomial in `c_1, ..., c_n`.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, value: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], value);
        p
    }

    /// The single variable `c_{index + 1}`.
    pub fn variable(vars: usize, index: usize) -> Self {
        let mut exps = vec![0; vars];
        exps[index] = 1;
        let mut p = Self::zero(vars);
        p.add_term(exps, Rational::one());
        p
    }

    fn add_term(&mut self, monomial: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial).or_insert_with(Rational::zero);
        *entry += coeff;
        // Drop cancelled terms so equality and degree stay meaningful.
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, monomial: &[u32]) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Every monomial is a product of distinct variables.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e <= 1))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars);
        let mut out = Self::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * factor);
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars);
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .fold(Rational::zero(), |acc, t| acc + t)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("c{}", i + 1) } else { format!("c{}^{}", i + 1, e) })
                    .collect();
                if vars.is_empty() {
                    format_rational(c)
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{}*{}", format_rational(c), vars.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
