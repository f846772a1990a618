//! Multivariate gcd over the rationals: content/primitive-part recursion on
//! the last variable present, with subresultant remainder sequences.

use super::Polynomial;
use crate::Error;

type Upoly = Vec<Polynomial>;

fn trim(p: &mut Upoly) {
    while p.last().is_some_and(Polynomial::is_zero) {
        p.pop();
    }
}

fn deg(p: &Upoly) -> usize {
    p.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Upoly, b: &Upoly) -> Upoly {
    let mut r = a.clone();
    let db = deg(b);
    let lb = &b[db];
    let mut steps = (deg(a) + 1).saturating_sub(db);
    while !r.is_empty() && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let k = dr - db + i;
            r[k] = &r[k] - &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        steps -= 1;
    }
    for _ in 0..steps {
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
    }
    r
}

fn content(p: &Upoly) -> Polynomial {
    p.iter().fold(Polynomial::zero(), |acc, c| gcd(&acc, c))
}

fn div_all(p: &Upoly, d: &Polynomial) -> Upoly {
    p.iter()
        .map(|c| c.exact_div(d).expect("content divides every coefficient"))
        .collect()
}

fn subresultant_gcd(mut a: Upoly, mut b: Upoly) -> Upoly {
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Polynomial::one();
    let mut h = Polynomial::one();
    loop {
        let delta = deg(&a) - deg(&b);
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return vec![Polynomial::one()];
        }
        a = b;
        let divisor = &g * &h.pow(delta as u32);
        b = div_all(&r, &divisor);
        g = a[deg(&a)].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .expect("subresultant division is exact")
        };
    }
}

/// Monic gcd of two polynomials; `gcd(0, 0) = 0`.
pub fn gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one();
    }
    let main = f
        .vars()
        .union(&g.vars())
        .copied()
        .max()
        .expect("nonconstant input has a variable");
    let fu = f.as_univariate(main);
    let gu = g.as_univariate(main);
    let cf = content(&fu);
    let cg = content(&gu);
    let c = gcd(&cf, &cg);
    let pf = div_all(&fu, &cf);
    let pg = div_all(&gu, &cg);
    let pp = if pf.len() == 1 || pg.len() == 1 {
        Polynomial::one()
    } else {
        let s = subresultant_gcd(pf, pg);
        let cs = content(&s);
        Polynomial::from_univariate(&div_all(&s, &cs), main)
    };
    (&c * &pp).monic()
}

/// Monic gcd of a list of polynomials. Fails when every input is zero.
pub fn multi_gcd(fs: &[Polynomial]) -> Result<Polynomial, Error> {
    if fs.iter().all(Polynomial::is_zero) {
        return Err(Error::AllZero);
    }
    let mut acc = Polynomial::zero();
    for f in fs {
        acc = gcd(&acc, f);
        if acc.is_constant() && !acc.is_zero() {
            return Ok(Polynomial::one());
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Var};

    fn p(text: &str) -> Polynomial {
        parse_poly(text, &[Var::S, Var::T, Var::U]).unwrap()
    }

    #[test]
    fn monomial_factor() {
        assert_eq!(multi_gcd(&[p("s*t"), p("s*u"), p("s^2")]).unwrap(), p("s"));
    }

    #[test]
    fn roman_surface_is_valid() {
        let roman = [p("s*u"), p("t*u"), p("s*t"), p("s^2+t^2+u^2")];
        assert_eq!(multi_gcd(&roman).unwrap(), Polynomial::one());
    }

    #[test]
    fn with_zero() {
        assert_eq!(multi_gcd(&[p("2*s+4*t"), p("0")]).unwrap(), p("s+2*t"));
        assert!(matches!(multi_gcd(&[p("0"), p("0")]), Err(Error::AllZero)));
    }

    #[test]
    fn nontrivial_multivariate() {
        let common = p("s^2 - t*u + 1");
        let f = &common * &p("s*t + u^2 - 3");
        let g = &common * &p("t^3 - s + u");
        assert_eq!(gcd(&f, &g), common.monic());
        let h = &common.pow(2) * &p("s - t");
        assert_eq!(gcd(&h, &f), common.monic());
    }
}
