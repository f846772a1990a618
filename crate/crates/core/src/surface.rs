use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::poly::{multi_gcd, Polynomial, Rational, Var};
use crate::Error;

pub const PARAM_VARS: [Var; 2] = [Var::S, Var::T];
pub const HOMOG_VARS: [Var; 3] = [Var::S, Var::T, Var::U];
pub const SPACE_VARS: [Var; 4] = [Var::X, Var::Y, Var::Z, Var::W];

/// A rational parametric surface `(a, b, c, d)` in the parameters `s, t`,
/// kept alongside its homogeneous form in `s, t, u` of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceParam {
    affine: [Polynomial; 4],
    homogeneous: [Polynomial; 4],
    degree: u32,
}

impl SurfaceParam {
    /// Builds a surface from affine polynomials in `s, t`. The four
    /// components must not all vanish and must be coprime.
    pub fn new(a: Polynomial, b: Polynomial, c: Polynomial, d: Polynomial) -> Result<Self, Error> {
        let affine = [a, b, c, d];
        for p in &affine {
            if !p.uses_only(&PARAM_VARS) {
                return Err(Error::InvalidSurface(format!(
                    "component {p} uses variables other than s, t"
                )));
            }
        }
        let g = multi_gcd(&affine).map_err(|_| Error::InvalidSurface("all components are zero".into()))?;
        if !g.is_constant() {
            return Err(Error::InvalidSurface(format!("components share the factor {g}")));
        }
        Ok(Self::from_affine_unchecked(affine))
    }

    /// Like [`SurfaceParam::new`] but divides out a common factor instead of
    /// failing; the removed factor is returned when nontrivial.
    pub fn new_normalized(
        a: Polynomial,
        b: Polynomial,
        c: Polynomial,
        d: Polynomial,
    ) -> Result<(Self, Option<Polynomial>), Error> {
        let affine = [a, b, c, d];
        let g = multi_gcd(&affine).map_err(|_| Error::InvalidSurface("all components are zero".into()))?;
        if g.is_constant() {
            let [a, b, c, d] = affine;
            return Ok((Self::new(a, b, c, d)?, None));
        }
        let divided = affine
            .iter()
            .map(|p| p.exact_div(&g).expect("gcd divides each component"))
            .collect::<Vec<_>>();
        let [a, b, c, d]: [Polynomial; 4] = divided.try_into().unwrap();
        Ok((Self::new(a, b, c, d)?, Some(g)))
    }

    /// Builds a surface from homogeneous polynomials in `s, t, u` of one
    /// common degree.
    pub fn from_homogeneous(a: Polynomial, b: Polynomial, c: Polynomial, d: Polynomial) -> Result<Self, Error> {
        let homog = [a, b, c, d];
        let n = homog.iter().filter_map(Polynomial::degree).max();
        let Some(n) = n else {
            return Err(Error::InvalidSurface("all components are zero".into()));
        };
        for p in &homog {
            if !p.uses_only(&HOMOG_VARS) {
                return Err(Error::InvalidSurface(format!(
                    "component {p} uses variables other than s, t, u"
                )));
            }
            if !p.is_zero() && (!p.is_homogeneous() || p.total_degree() != n) {
                return Err(Error::InvalidSurface(format!(
                    "component {p} is not homogeneous of degree {n}"
                )));
            }
        }
        let g = multi_gcd(&homog).expect("some component is nonzero");
        if !g.is_constant() {
            return Err(Error::InvalidSurface(format!("components share the factor {g}")));
        }
        let [a, b, c, d] = homog.map(|p| p.dehomogenize(Var::U));
        Self::new(a, b, c, d)
    }

    fn from_affine_unchecked(affine: [Polynomial; 4]) -> Self {
        let degree = affine.iter().map(Polynomial::total_degree).max().unwrap_or(0);
        let homogeneous = affine
            .clone()
            .map(|p| p.homogenize(Var::U, Some(degree)).expect("degree is the maximum"));
        SurfaceParam {
            affine,
            homogeneous,
            degree,
        }
    }

    pub fn affine(&self) -> &[Polynomial; 4] {
        &self.affine
    }

    pub fn homogeneous(&self) -> &[Polynomial; 4] {
        &self.homogeneous
    }

    /// Common degree `n` of the homogeneous components.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Image of a parameter point `(s, t, u)` under the homogeneous map.
    pub fn image(&self, param: &ProjPoint) -> Result<ProjPoint, Error> {
        if param.dim() != 3 {
            return Err(Error::InvalidPoint("parameter points have three coordinates".into()));
        }
        let assignment: Vec<(Var, Rational)> = HOMOG_VARS
            .iter()
            .zip(param.coords())
            .map(|(v, c)| (*v, c.clone()))
            .collect();
        let coords = self
            .homogeneous
            .iter()
            .map(|p| p.evaluate(&assignment))
            .collect::<Result<Vec<_>, _>>()?;
        ProjPoint::new(coords).map_err(|_| Error::InvalidPoint(format!("{param} is a base point")))
    }
}

impl fmt::Display for SurfaceParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.homogeneous;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Projective point with exact rational coordinates. Equality is
/// proportionality.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, Error> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self, Error> {
        Self::new(coords.iter().map(|&c| crate::poly::rat(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn first_nonzero(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("not all zero")
    }

    /// Representative with the first nonzero coordinate equal to one.
    pub fn normalized(&self) -> Vec<Rational> {
        let pivot = self.coords[self.first_nonzero()].clone();
        self.coords.iter().map(|c| c / &pivot).collect()
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self, Error> {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Dot product with a quadruple of polynomials: `L · X`.
    pub fn dot(&self, comps: &[Polynomial]) -> Polynomial {
        comps
            .iter()
            .zip(&self.coords)
            .fold(Polynomial::zero(), |acc, (p, c)| &acc + &p.scale(c))
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.normalized() == other.normalized()
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    c.to_string()
                }
            })
            .collect();
        parts.serialize(s)
    }
}

/// The surfaces used throughout the examples and tests.
pub mod catalog {
    use super::*;
    use crate::poly::parse_poly;

    fn h(text: &str) -> Polynomial {
        parse_poly(text, &HOMOG_VARS).expect("catalog polynomial parses")
    }

    /// Steiner's Roman surface, base point free, triple point at the origin.
    pub fn roman() -> SurfaceParam {
        SurfaceParam::from_homogeneous(h("s*u"), h("t*u"), h("s*t"), h("s^2+t^2+u^2")).unwrap()
    }

    /// Whitney umbrella `x^2 w = y^2 z`, one base point at `(1,0,0)`.
    pub fn whitney() -> SurfaceParam {
        SurfaceParam::from_homogeneous(h("s*t"), h("s*u"), h("t^2"), h("u^2")).unwrap()
    }

    /// Unit sphere by stereographic projection; base points `(1, ±i, 0)`.
    pub fn sphere() -> SurfaceParam {
        SurfaceParam::from_homogeneous(h("2*s*u"), h("2*t*u"), h("s^2+t^2-u^2"), h("s^2+t^2+u^2")).unwrap()
    }

    /// The plane `z = w` parametrized as `(s, t, 1, 1)`.
    pub fn plane() -> SurfaceParam {
        SurfaceParam::new(h("s"), h("t"), h("1"), h("1")).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, ratio};

    #[test]
    fn roman_homogeneous_form() {
        let r = catalog::roman();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.affine()[3], parse_poly("s^2+t^2+1", &PARAM_VARS).unwrap());
    }

    #[test]
    fn rejects_common_factor() {
        let p = |t: &str| parse_poly(t, &PARAM_VARS).unwrap();
        assert!(SurfaceParam::new(p("s^2"), p("s*t"), p("s"), p("s")).is_err());
        let (surf, g) = SurfaceParam::new_normalized(p("s^2"), p("s*t"), p("s"), p("s")).unwrap();
        assert_eq!(g.unwrap(), p("s"));
        assert_eq!(surf.affine()[2], p("1"));
        assert!(SurfaceParam::new(p("0"), p("0"), p("0"), p("0")).is_err());
    }

    #[test]
    fn projective_equality() {
        let a = ProjPoint::from_ints(&[0, 2, 0, 4]).unwrap();
        let b = ProjPoint::new(vec![rat0(), ratio(-1, 3), rat0(), ratio(-2, 3)]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, ProjPoint::from_ints(&[0, 1, 0, 1]).unwrap());
        assert!(ProjPoint::from_ints(&[0, 0, 0]).is_err());
    }

    fn rat0() -> Rational {
        Rational::zero()
    }

    #[test]
    fn image_of_parameter() {
        let r = catalog::roman();
        let img = r.image(&ProjPoint::from_ints(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(img, ProjPoint::from_ints(&[1, 1, 1, 3]).unwrap());
        let w = catalog::whitney();
        assert!(w.image(&ProjPoint::from_ints(&[1, 0, 0]).unwrap()).is_err());
    }
}
