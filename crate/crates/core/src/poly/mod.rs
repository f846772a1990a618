//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every polynomial lives in the same ambient ring `Q[s,t,u,x,y,z,w,...]`;
//! the variables a polynomial actually uses are read off its support. A few
//! auxiliary variables exist for internal eliminations (saturation,
//! intersection, module membership) and never appear in parsed input.

mod gcd;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use gcd::{gcd, multi_gcd};
pub use parse::parse_poly;

pub type Rational = BigRational;

/// Number of variable slots in a monomial.
pub const NVARS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S,
    T,
    U,
    X,
    Y,
    Z,
    W,
    Aux0,
    Aux1,
    Aux2,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::S,
        Var::T,
        Var::U,
        Var::X,
        Var::Y,
        Var::Z,
        Var::W,
        Var::Aux0,
        Var::Aux1,
        Var::Aux2,
    ];
    pub const AUX: [Var; 3] = [Var::Aux0, Var::Aux1, Var::Aux2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::U => "u",
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::W => "w",
            Var::Aux0 => "_a0",
            Var::Aux1 => "_a1",
            Var::Aux2 => "_a2",
        }
    }

    /// Looks up a user-facing symbol; auxiliary variables are not nameable.
    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "s" => Some(Var::S),
            "t" => Some(Var::T),
            "u" => Some(Var::U),
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            "w" => Some(Var::W),
            _ => None,
        }
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector indexed by [`Var::index`]. Ordered by graded reverse
/// lexicographic order with `s > t > u > x > y > z > w`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: u16) -> Self {
        let mut m = Monomial::one();
        m.0[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        vars.iter().map(|v| self.0[v.index()] as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o += e;
        }
        out
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out = *other;
        for (o, e) in out.0.iter_mut().zip(self.0.iter()) {
            *o -= e;
        }
        out
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (o, e) in out.0.iter_mut().zip(other.0.iter()) {
            *o = (*o).max(*e);
        }
        out
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        Var::ALL.into_iter().filter(move |v| self.0[v.index()] > 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..NVARS).rev() {
                match self.0[i].cmp(&other.0[i]) {
                    Ordering::Equal => continue,
                    ord => return ord.reverse(),
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over the rationals. The zero polynomial has no terms and no
/// stored coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Polynomial::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending storage order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn total_degree(&self) -> u32 {
        self.degree().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v) as u32).max().unwrap_or(0)
    }

    pub fn degree_in_block(&self, vars: &[Var]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect()
    }

    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.vars().iter().all(|v| allowed.contains(v))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_homogeneous_in(&self, vars: &[Var]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree_in(vars));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `order`-th formal partial derivative in `v`.
    pub fn derivative(&self, v: Var, order: u32) -> Polynomial {
        let i = v.index();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.0[i] as u32;
            if e < order {
                continue;
            }
            let mut falling = BigInt::one();
            for k in 0..order {
                falling *= BigInt::from(e - k);
            }
            let mut nm = *m;
            nm.0[i] -= order as u16;
            out.add_term(nm, c * Rational::from_integer(falling));
        }
        out
    }

    /// Pads every term with powers of `v` up to `target` (default: the total
    /// degree). Fails when a term already exceeds the target.
    pub fn homogenize(&self, v: Var, target: Option<u32>) -> Result<Polynomial, crate::Error> {
        let deg = self.total_degree();
        let target = target.unwrap_or(deg);
        if target < deg {
            return Err(crate::Error::DegreeTooLow { target, degree: deg });
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut nm = *m;
            nm.0[v.index()] += (target - m.degree()) as u16;
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Homogenizes with respect to a block of variables only: each term is
    /// padded with `v` until its degree in `block` reaches `target`.
    pub fn homogenize_in_block(&self, block: &[Var], v: Var, target: u32) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut nm = *m;
            let d = m.degree_in(block);
            debug_assert!(d <= target);
            nm.0[v.index()] += (target - d) as u16;
            out.add_term(nm, c.clone());
        }
        out
    }

    pub fn dehomogenize(&self, v: Var) -> Polynomial {
        self.substitute_value(v, &Rational::one())
    }

    pub fn substitute_value(&self, v: Var, value: &Rational) -> Polynomial {
        let i = v.index();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.0[i] as i32;
            let mut nm = *m;
            nm.0[i] = 0;
            out.add_term(nm, c * num_traits::pow::Pow::pow(value, e));
        }
        out
    }

    /// Replaces `v` by the polynomial `value`.
    pub fn substitute(&self, v: Var, value: &Polynomial) -> Polynomial {
        let i = v.index();
        let max_e = self.degree_in(v) as usize;
        let mut powers = vec![Polynomial::one()];
        for k in 1..=max_e {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            let mut nm = *m;
            nm.0[i] = 0;
            let part = powers[e].mul_monomial(&nm).scale(c);
            out = &out + &part;
        }
        out
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_all(&self, subs: &[(Var, Polynomial)]) -> Polynomial {
        let mut cache: Vec<Vec<Polynomial>> = subs.iter().map(|_| vec![Polynomial::one()]).collect();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut acc = Polynomial::constant(c.clone());
            for (k, (v, val)) in subs.iter().enumerate() {
                let e = rest.0[v.index()] as usize;
                rest.0[v.index()] = 0;
                while cache[k].len() <= e {
                    let next = &cache[k][cache[k].len() - 1] * val;
                    cache[k].push(next);
                }
                acc = &acc * &cache[k][e];
            }
            out = &out + &acc.mul_monomial(&rest);
        }
        out
    }

    /// Translates `v -> v + shift` for each listed variable.
    pub fn translate(&self, shifts: &[(Var, Rational)]) -> Polynomial {
        let subs: Vec<(Var, Polynomial)> = shifts
            .iter()
            .map(|(v, a)| (*v, &Polynomial::var(*v) + &Polynomial::constant(a.clone())))
            .collect();
        self.substitute_all(&subs)
    }

    /// Exact evaluation. Every variable of the support must be assigned.
    pub fn evaluate(&self, assignment: &[(Var, Rational)]) -> Result<Rational, crate::Error> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for v in m.vars() {
                let (_, x) = assignment
                    .iter()
                    .find(|(w, _)| *w == v)
                    .ok_or(crate::Error::MissingAssignment(v))?;
                val *= num_traits::pow::Pow::pow(x, m.exp(v) as i32);
            }
            total += val;
        }
        Ok(total)
    }

    /// Divides by the leading coefficient (storage order).
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => Polynomial::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Integer-coefficient primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den / c.denom());
            g = g.gcd(&n);
        }
        let mut factor = Rational::new(den, g);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (*m, c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (*m, c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c / &lc;
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`,
    /// indexed by power of `v`.
    pub fn as_univariate(&self, v: Var) -> Vec<Polynomial> {
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![Polynomial::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut nm = *m;
            nm.0[v.index()] = 0;
            coeffs[e].add_term(nm, c.clone());
        }
        coeffs
    }

    pub fn from_univariate(coeffs: &[Polynomial], v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (e, c) in coeffs.iter().enumerate() {
            out = &out + &c.mul_monomial(&Monomial::var(v, e as u16));
        }
        out
    }

    /// Homogeneous component of total degree `d` in `vars`.
    pub fn component(&self, vars: &[Var], d: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(vars) == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.vars()
        .map(|v| match m.exp(v) {
            1 => v.name().to_string(),
            e => format!("{}^{}", v.name(), e),
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Polynomial {
        parse_poly(text, &[Var::S, Var::T, Var::U, Var::X, Var::Y, Var::Z, Var::W]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(p("s+t") * p("s-t"), p("s^2 - t^2"));
    }

    #[test]
    fn additive_inverse() {
        let f = p("3*s^2*t - 1/2*u + 7");
        assert!((&f + &f.scale(&rat(-1))).is_zero());
    }

    #[test]
    fn distribution() {
        assert_eq!(p("s^2+t^2+u^2") * p("s*t"), p("s^3*t + s*t^3 + s*t*u^2"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("s^2*t").derivative(Var::S, 1), p("2*s*t"));
        assert_eq!(p("x^2*w - y^2*z").derivative(Var::X, 2), p("2*w"));
        assert!(p("s^2").derivative(Var::U, 1).is_zero());
        assert!(p("s^2").derivative(Var::S, 3).is_zero());
    }

    #[test]
    fn homogenize_examples() {
        assert_eq!(p("s^2+t-1").homogenize(Var::U, None).unwrap(), p("s^2+t*u-u^2"));
        assert_eq!(p("s^2+t*u-u^2").dehomogenize(Var::U), p("s^2+t-1"));
        assert_eq!(p("s*t").homogenize(Var::U, Some(3)).unwrap(), p("s*t*u"));
        assert!(p("s^3").homogenize(Var::U, Some(2)).is_err());
    }

    #[test]
    fn evaluation() {
        let at = |pairs: &[(Var, i64)]| pairs.iter().map(|(v, n)| (*v, rat(*n))).collect::<Vec<_>>();
        assert_eq!(p("s^2+t^2").evaluate(&at(&[(Var::S, 1), (Var::T, 2)])).unwrap(), rat(5));
        assert_eq!(Polynomial::zero().evaluate(&[]).unwrap(), rat(0));
        let whitney = p("x^2*w - y^2*z");
        let pt = at(&[(Var::X, 0), (Var::Y, 0), (Var::Z, 1), (Var::W, 1)]);
        assert_eq!(whitney.evaluate(&pt).unwrap(), rat(0));
        assert!(matches!(
            p("s*t").evaluate(&at(&[(Var::S, 1)])),
            Err(crate::Error::MissingAssignment(Var::T))
        ));
    }

    #[test]
    fn grevlex_storage_order() {
        // s > t > u; degree first, then reverse lexicographic
        let m = |e: [u16; 3]| Monomial([e[0], e[1], e[2], 0, 0, 0, 0, 0, 0, 0]);
        assert!(m([1, 0, 0]) > m([0, 1, 0]));
        assert!(m([0, 1, 0]) > m([0, 0, 1]));
        assert!(m([0, 0, 2]) > m([1, 0, 0]));
        assert!(m([2, 0, 0]) > m([1, 1, 0]));
        assert!(m([1, 1, 0]) > m([1, 0, 1]));
        assert!(m([0, 2, 0]) > m([1, 0, 1]));
    }

    #[test]
    fn exact_division() {
        let f = p("s^3*t - s*t^3");
        assert_eq!(f.exact_div(&p("s+t")).unwrap(), p("s^2*t - s*t^2"));
        assert!(f.exact_div(&p("s+1")).is_none());
    }

    #[test]
    fn display_format() {
        assert_eq!(p("s^2*t - 3*u^3").to_string(), "s^2*t - 3*u^3");
        assert_eq!(p("1/2*s*t + 1/2*s*t").to_string(), "s*t");
        assert_eq!(p("-s + 1").to_string(), "-s + 1");
        assert_eq!(p("0").to_string(), "0");
    }
}
