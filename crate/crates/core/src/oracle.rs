//! Classical route: the implicit equation by elimination and the order of
//! a point as the lowest non-vanishing derivative order.

use serde::Serialize;

use crate::groebner::eliminate;
use crate::poly::{multi_gcd, Polynomial, Var};
use crate::surface::{ProjPoint, SurfaceParam, PARAM_VARS, SPACE_VARS};
use crate::Error;

/// Implicit equation of the image surface, homogeneous in `x, y, z, w`,
/// with integer content 1 and a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicitSurface {
    pub f: Polynomial,
    pub degree: u32,
    /// Set when `f` has a repeated factor.
    pub reducible: bool,
}

impl ImplicitSurface {
    /// Wraps a given homogeneous equation.
    pub fn from_polynomial(f: Polynomial) -> Result<Self, Error> {
        if f.is_zero() || !f.uses_only(&SPACE_VARS) || !f.is_homogeneous() {
            return Err(Error::InvalidSurface(format!(
                "{f} is not a nonzero form in x, y, z, w"
            )));
        }
        let f = f.primitive();
        let degree = f.total_degree();
        let partials: Vec<Polynomial> = SPACE_VARS.iter().map(|v| f.derivative(*v, 1)).collect();
        let mut with_f = vec![f.clone()];
        with_f.extend(partials);
        let reducible = !multi_gcd(&with_f)?.is_constant();
        Ok(ImplicitSurface { f, degree, reducible })
    }

    /// Value of the equation at a point.
    pub fn value_at(&self, x0: &ProjPoint) -> Result<crate::poly::Rational, Error> {
        self.f.evaluate(&assignment(x0)?)
    }
}

fn assignment(x0: &ProjPoint) -> Result<Vec<(Var, crate::poly::Rational)>, Error> {
    if x0.dim() != 4 {
        return Err(Error::InvalidPoint("space points have four coordinates".into()));
    }
    Ok(SPACE_VARS.iter().copied().zip(x0.coords().iter().cloned()).collect())
}

/// Eliminates the parameters from `<P_j X_i - P_i : i != j> : P_j^∞`, where
/// `j` is the last nonzero component, and homogenizes in `X_j`.
pub fn implicitize(surface: &SurfaceParam) -> Result<ImplicitSurface, Error> {
    let comps = surface.affine();
    let j = (0..4).rev().find(|&i| !comps[i].is_zero()).expect("surface is nonzero");
    let tau = Var::AUX[0];
    let mut gens: Vec<Polynomial> = (0..4)
        .filter(|&i| i != j)
        .map(|i| &(&comps[j] * &Polynomial::var(SPACE_VARS[i])) - &comps[i])
        .collect();
    gens.push(&Polynomial::one() - &(&Polynomial::var(tau) * &comps[j]));
    let mut drop = vec![tau];
    drop.extend(PARAM_VARS);
    let elim = eliminate(&gens, &drop);
    if elim.generators().len() != 1 {
        return Err(Error::EliminationNotPrincipal(elim.generators().len()));
    }
    let f = elim.generators()[0].homogenize(SPACE_VARS[j], None)?;
    let implicit = ImplicitSurface::from_polynomial(f)?;
    let subs: Vec<(Var, Polynomial)> = SPACE_VARS
        .iter()
        .copied()
        .zip(surface.homogeneous().iter().cloned())
        .collect();
    assert!(
        implicit.f.substitute_all(&subs).is_zero(),
        "implicit equation vanishes on the parametrization"
    );
    Ok(implicit)
}

/// Smallest `r` such that some order `r` partial derivative of `f` is
/// nonzero at `x0`: the lowest degree in the Taylor expansion at `x0`.
pub fn classic_order(surface: &ImplicitSurface, x0: &ProjPoint) -> Result<u32, Error> {
    let shifted = surface.f.translate(&assignment(x0)?);
    Ok(shifted
        .terms()
        .map(|(m, _)| m.degree())
        .min()
        .expect("a nonzero form stays nonzero under translation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, ratio};
    use crate::surface::catalog;

    fn f(text: &str) -> Polynomial {
        parse_poly(text, &SPACE_VARS).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn catalog_equations() {
        assert_eq!(implicitize(&catalog::plane()).unwrap().f, f("z - w"));
        let w = implicitize(&catalog::whitney()).unwrap();
        assert_eq!(w.f.monic(), f("x^2*w - y^2*z").monic());
        assert_eq!(w.degree, 3);
        assert_eq!(implicitize(&catalog::sphere()).unwrap().f, f("x^2 + y^2 + z^2 - w^2"));
        let r = implicitize(&catalog::roman()).unwrap();
        assert_eq!(r.f.monic(), f("x^2*y^2 + y^2*z^2 + z^2*x^2 - x*y*z*w").monic());
        assert!(!r.reducible);
    }

    #[test]
    fn degenerate_image_is_rejected() {
        let p = |t: &str| parse_poly(t, &PARAM_VARS).unwrap();
        let curve = SurfaceParam::new(p("s"), p("s^2"), p("s^3"), p("1")).unwrap();
        assert!(matches!(implicitize(&curve), Err(Error::EliminationNotPrincipal(_))));
    }

    #[test]
    fn euler_relation() {
        for s in [
            catalog::plane(),
            catalog::whitney(),
            catalog::sphere(),
            catalog::roman(),
        ] {
            let imp = implicitize(&s).unwrap();
            let lhs = SPACE_VARS.iter().fold(Polynomial::zero(), |acc, v| {
                &acc + &(&Polynomial::var(*v) * &imp.f.derivative(*v, 1))
            });
            assert_eq!(lhs, imp.f.scale(&crate::poly::rat(imp.degree as i64)));
        }
    }

    #[test]
    fn classic_order_examples() {
        let sphere = ImplicitSurface::from_polynomial(f("x^2+y^2+z^2-w^2")).unwrap();
        assert_eq!(classic_order(&sphere, &pt(&[1, 0, 0, 1])).unwrap(), 1);
        assert_eq!(classic_order(&sphere, &pt(&[0, 0, 0, 1])).unwrap(), 0);
        let whitney = ImplicitSurface::from_polynomial(f("x^2*w - y^2*z")).unwrap();
        assert_eq!(classic_order(&whitney, &pt(&[0, 0, 0, 1])).unwrap(), 2);
        let roman = implicitize(&catalog::roman()).unwrap();
        assert_eq!(classic_order(&roman, &pt(&[0, 0, 0, 1])).unwrap(), 3);
        let axis = ProjPoint::new(vec![ratio(1, 3), ratio(0, 1), ratio(0, 1), ratio(1, 1)]).unwrap();
        assert_eq!(classic_order(&roman, &axis).unwrap(), 2);
    }

    #[test]
    fn repeated_factor_is_flagged() {
        let sq = ImplicitSurface::from_polynomial(f("(x - w)^2")).unwrap();
        assert!(sq.reducible);
        assert!(ImplicitSurface::from_polynomial(f("x + y^2")).is_err());
    }
}
