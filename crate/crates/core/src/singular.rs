//! Base points, the parametric order of a space point, the implicit degree
//! relation and the counting theorems built on moving planes and surfaces.

use serde::Serialize;

use crate::groebner::{groebner_basis, MonomialOrder};
use crate::localmult::{
    chart_has_zeros, chart_multiplicity, distinct_common_zeros, projective_total_multiplicity, Chart, ChartCount,
    MultiplicityReport,
};
use crate::movplanes::{default_degree_bound, follows, mu_basis, special_planes, MovingPlane, MuBasis};
use crate::oracle::{classic_order, ImplicitSurface};
use crate::poly::{Polynomial, Var};
use crate::surface::{ProjPoint, SurfaceParam, HOMOG_VARS, SPACE_VARS};
use crate::Error;

/// How λ is measured; embedded in every report.
pub const LAMBDA_NOTE: &str =
    "lambda is the total intersection multiplicity of <a,b,c,d> over all base points in P^2(C), not a point count";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasePointReport {
    pub lambda: u64,
    /// Number of distinct base points, complex ones included.
    pub distinct_points: u64,
    /// Reduced Groebner basis of the homogeneous ideal `<a,b,c,d>`.
    pub base_locus: Vec<Polynomial>,
    pub per_chart: Vec<ChartCount>,
    pub is_base_point_free: bool,
    pub seed: u64,
    pub note: &'static str,
}

pub fn base_points(surface: &SurfaceParam, seed: u64) -> Result<BasePointReport, Error> {
    let curves = surface.homogeneous().to_vec();
    let report = projective_total_multiplicity(&curves, seed)?;
    let distinct_points = distinct_common_zeros(&curves)?;
    let base_locus = groebner_basis(&curves, &MonomialOrder::grevlex(&HOMOG_VARS))
        .generators()
        .to_vec();
    Ok(BasePointReport {
        lambda: report.total,
        distinct_points,
        base_locus,
        per_chart: report.per_chart,
        is_base_point_free: report.total == 0,
        seed,
        note: LAMBDA_NOTE,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub point: ProjPoint,
    pub r: u64,
    pub lambda_used: u64,
    pub total_count: u64,
    /// Index of the nonzero coordinate of the point used to form the curves.
    pub pivot_coordinate: usize,
    /// The difference curves, identically zero ones removed.
    pub curves: Vec<Polynomial>,
    pub multiplicity: MultiplicityReport,
}

/// Curves `X0_j P_i - X0_i P_j`, `i != j`, with zero curves removed.
pub fn difference_curves(surface: &SurfaceParam, x0: &ProjPoint, pivot: usize) -> Vec<Polynomial> {
    let p = surface.homogeneous();
    let c = x0.coords();
    (0..4)
        .filter(|&i| i != pivot)
        .map(|i| &p[i].scale(&c[pivot]) - &p[pivot].scale(&c[i]))
        .filter(|g| !g.is_zero())
        .collect()
}

fn check_space_point(x0: &ProjPoint) -> Result<(), Error> {
    if x0.dim() != 4 {
        return Err(Error::InvalidPoint("space points have four coordinates".into()));
    }
    Ok(())
}

/// Total multiplicity of a curve system that defines a fiber; a shared
/// component means the point has infinitely many preimages.
fn fiber_count(curves: &[Polynomial], seed: u64) -> Result<MultiplicityReport, Error> {
    projective_total_multiplicity(curves, seed).map_err(|e| match e {
        Error::CommonComponent(g) => Error::NonIsolatedFiber(g),
        other => other,
    })
}

/// Order of `x0` on the surface, pivoting on its first nonzero coordinate.
pub fn sing_order(surface: &SurfaceParam, x0: &ProjPoint, seed: u64) -> Result<SingularityReport, Error> {
    let base = base_points(surface, seed)?;
    sing_order_with(surface, x0, base.lambda, seed)
}

/// [`sing_order`] with a precomputed λ.
pub fn sing_order_with(
    surface: &SurfaceParam,
    x0: &ProjPoint,
    lambda: u64,
    seed: u64,
) -> Result<SingularityReport, Error> {
    check_space_point(x0)?;
    sing_order_with_pivot(surface, x0, x0.first_nonzero(), lambda, seed)
}

/// [`sing_order`] pivoting on a chosen nonzero coordinate.
pub fn sing_order_with_pivot(
    surface: &SurfaceParam,
    x0: &ProjPoint,
    pivot: usize,
    lambda: u64,
    seed: u64,
) -> Result<SingularityReport, Error> {
    check_space_point(x0)?;
    if pivot >= 4 || x0.coords()[pivot] == num_traits::Zero::zero() {
        return Err(Error::InvalidPoint(format!("coordinate {pivot} of {x0} is zero")));
    }
    let curves = difference_curves(surface, x0, pivot);
    if curves.is_empty() {
        return Err(Error::NonIsolatedFiber(
            "the surface maps everything to the point".into(),
        ));
    }
    let multiplicity = fiber_count(&curves, seed)?;
    let total = multiplicity.total;
    let r = total.checked_sub(lambda).ok_or_else(|| {
        Error::HypothesisViolated(format!("count {total} is below the base point multiplicity {lambda}"))
    })?;
    Ok(SingularityReport {
        point: x0.clone(),
        r,
        lambda_used: lambda,
        total_count: total,
        pivot_coordinate: pivot,
        curves,
        multiplicity,
    })
}

/// The degree `n^2 - λ` of the image when the map is generically injective.
pub fn implicit_degree(surface: &SurfaceParam, seed: u64) -> Result<u64, Error> {
    let base = base_points(surface, seed)?;
    implicit_degree_with(surface, base.lambda)
}

pub fn implicit_degree_with(surface: &SurfaceParam, lambda: u64) -> Result<u64, Error> {
    let n = surface.degree() as u64;
    (n * n)
        .checked_sub(lambda)
        .ok_or_else(|| Error::HypothesisViolated(format!("lambda {lambda} exceeds n^2 = {}", n * n)))
}

/// Comparison of `n^2 - λ` with the degree of the implicit equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLaw {
    pub expected: u64,
    pub oracle_degree: u32,
    /// `expected / oracle_degree` when it divides evenly.
    pub map_degree: Option<u64>,
    pub consistent: bool,
}

pub fn degree_law(expected: u64, implicit: &ImplicitSurface) -> DegreeLaw {
    let d = implicit.degree as u64;
    let map_degree = (d > 0 && expected.is_multiple_of(d)).then(|| expected / d);
    DegreeLaw {
        expected,
        oracle_degree: implicit.degree,
        map_degree,
        consistent: expected == d,
    }
}

/// A count predicted to equal the order `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub count: u64,
    pub r: u64,
    pub agrees: bool,
    /// The extra curve vanished identically and imposed nothing.
    pub vacuous: bool,
}

fn require_base_point_free(surface: &SurfaceParam, seed: u64) -> Result<(), Error> {
    let base = base_points(surface, seed)?;
    if base.is_base_point_free {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "the surface has base points (lambda = {})",
            base.lambda
        )))
    }
}

/// Count of the difference curves together with `extra`, compared to `r`.
fn count_with_extra(surface: &SurfaceParam, x0: &ProjPoint, extra: Polynomial, seed: u64) -> Result<CountCheck, Error> {
    let order = sing_order_with(surface, x0, 0, seed)?;
    let vacuous = extra.is_zero();
    let count = if vacuous {
        order.total_count
    } else {
        let mut curves = order.curves.clone();
        curves.push(extra);
        fiber_count(&curves, seed)?.total
    };
    Ok(CountCheck {
        count,
        r: order.r,
        agrees: count == order.r,
        vacuous,
    })
}

/// Difference curves plus the incidence curve `L · X0` of a following plane.
pub fn verify_moving_plane_count(
    surface: &SurfaceParam,
    x0: &ProjPoint,
    plane: &MovingPlane,
    seed: u64,
) -> Result<CountCheck, Error> {
    check_space_point(x0)?;
    require_base_point_free(surface, seed)?;
    if !follows(plane, surface) {
        return Err(Error::NotFollowing(plane.to_string()));
    }
    count_with_extra(surface, x0, plane.incidence(x0), seed)
}

/// Count of the incidence curves `p·X0, q·X0, r·X0`, chart by chart. A
/// μ-basis generates the syzygies of one affine chart only, so points with
/// `u != 0` use `mu` and points at infinity use μ-bases of the
/// parametrizations `P(1,t,u)` and `P(s,1,u)`.
pub fn mu_basis_order(surface: &SurfaceParam, x0: &ProjPoint, mu: &MuBasis, seed: u64) -> Result<CountCheck, Error> {
    check_space_point(x0)?;
    require_base_point_free(surface, seed)?;
    if !mu.verify(surface) {
        return Err(Error::HypothesisViolated("the mu-basis does not verify".into()));
    }
    let order = sing_order_with(surface, x0, 0, seed)?;
    let mut count = 0;
    for chart in Chart::ALL {
        let basis = match chart {
            Chart::U => mu.clone(),
            _ if !chart_has_zeros(&order.curves, chart) => continue,
            _ => {
                let local = chart_surface(surface, chart)?;
                mu_basis(&local, default_degree_bound(&local))?
            }
        };
        let curves: Vec<Polynomial> = basis
            .planes()
            .iter()
            .map(|l| from_chart(&x0.dot(l.components()), chart))
            .collect::<Result<_, _>>()?;
        count += chart_multiplicity(&curves, chart, seed)
            .map_err(|e| match e {
                Error::CommonComponent(g) => Error::NonIsolatedFiber(g),
                other => other,
            })?
            .count;
    }
    Ok(CountCheck {
        count,
        r: order.r,
        agrees: count == order.r,
        vacuous: false,
    })
}

/// The surface seen in a chart, written in the parameters `s, t`.
fn chart_surface(surface: &SurfaceParam, chart: Chart) -> Result<SurfaceParam, Error> {
    let one = Polynomial::one;
    let subs = match chart {
        Chart::U => return Ok(surface.clone()),
        Chart::S => [
            (Var::S, one()),
            (Var::T, Polynomial::var(Var::S)),
            (Var::U, Polynomial::var(Var::T)),
        ],
        Chart::T => [
            (Var::T, one()),
            (Var::S, Polynomial::var(Var::S)),
            (Var::U, Polynomial::var(Var::T)),
        ],
    };
    let [a, b, c, d] = surface.homogeneous().clone().map(|p| p.substitute_all(&subs));
    SurfaceParam::new(a, b, c, d)
}

/// Homogeneous form of a curve given in a chart's parameters `s, t`.
fn from_chart(curve: &Polynomial, chart: Chart) -> Result<Polynomial, Error> {
    let (subs, fixed) = match chart {
        Chart::U => (vec![], Var::U),
        Chart::S => (
            vec![(Var::S, Polynomial::var(Var::T)), (Var::T, Polynomial::var(Var::U))],
            Var::S,
        ),
        Chart::T => (
            vec![(Var::S, Polynomial::var(Var::S)), (Var::T, Polynomial::var(Var::U))],
            Var::T,
        ),
    };
    curve.substitute_all(&subs).homogenize(fixed, None)
}

/// Moving surface `f(x,y,z,w; s,t,u)` made homogeneous in the space block.
fn space_homogeneous(f: &Polynomial) -> Polynomial {
    if f.is_homogeneous_in(&SPACE_VARS) {
        f.clone()
    } else {
        f.homogenize_in_block(&SPACE_VARS, Var::W, f.degree_in_block(&SPACE_VARS))
    }
}

/// Whether `f` vanishes on the parametrization.
pub fn surface_follows(f: &Polynomial, surface: &SurfaceParam) -> bool {
    let subs: Vec<(Var, Polynomial)> = SPACE_VARS
        .iter()
        .copied()
        .zip(surface.affine().iter().cloned())
        .collect();
    space_homogeneous(f)
        .dehomogenize(Var::U)
        .substitute_all(&subs)
        .is_zero()
}

/// Difference curves plus `f(X0; s,t,u)` for a moving surface `f`.
pub fn verify_moving_surface_count(
    surface: &SurfaceParam,
    x0: &ProjPoint,
    f: &Polynomial,
    seed: u64,
) -> Result<CountCheck, Error> {
    check_space_point(x0)?;
    let allowed = [Var::X, Var::Y, Var::Z, Var::W, Var::S, Var::T, Var::U];
    if !f.uses_only(&allowed) {
        return Err(Error::InvalidSurface(format!(
            "{f} uses variables outside x, y, z, w, s, t, u"
        )));
    }
    require_base_point_free(surface, seed)?;
    if !surface_follows(f, surface) {
        return Err(Error::NotFollowing(f.to_string()));
    }
    let values: Vec<(Var, Polynomial)> = SPACE_VARS
        .iter()
        .copied()
        .zip(x0.coords().iter().map(|c| Polynomial::constant(c.clone())))
        .collect();
    let curve = space_homogeneous(f).substitute_all(&values);
    let curve = if curve.is_homogeneous() {
        curve
    } else {
        curve.homogenize(Var::U, None)?
    };
    count_with_extra(surface, x0, curve, seed)
}

/// All available cross-checks of a computed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossChecks {
    pub classic_order: Option<u32>,
    pub moving_plane: Option<CountCheck>,
    pub mu_basis: Option<CountCheck>,
    pub moving_surface: Option<CountCheck>,
    /// Why the counting checks were skipped, when they were.
    pub skipped: Option<String>,
    pub agree: bool,
}

/// Runs the oracle comparison and, on base point free surfaces, the three
/// counting checks: the special plane `(0,0,-d,c)` (or the first special
/// plane with a nonzero incidence curve), the μ-basis incidence curves, and
/// the moving surface `(p·X)(q·X)`.
pub fn cross_check(
    surface: &SurfaceParam,
    report: &SingularityReport,
    base_point_free: bool,
    mu: Option<&MuBasis>,
    implicit: Option<&ImplicitSurface>,
    seed: u64,
) -> Result<CrossChecks, Error> {
    let x0 = &report.point;
    let classic = implicit.map(|s| classic_order(s, x0)).transpose()?;
    let mut checks = CrossChecks {
        classic_order: classic,
        moving_plane: None,
        mu_basis: None,
        moving_surface: None,
        skipped: None,
        agree: true,
    };
    if base_point_free {
        let planes = special_planes(surface);
        let plane = planes
            .iter()
            .rev()
            .find(|l| !l.incidence(x0).is_zero())
            .unwrap_or(&planes[2]);
        checks.moving_plane = Some(verify_moving_plane_count(surface, x0, plane, seed)?);
        if let Some(mu) = mu {
            checks.mu_basis = Some(mu_basis_order(surface, x0, mu, seed)?);
            let f = &linear_form(&mu.p) * &linear_form(&mu.q);
            checks.moving_surface = Some(verify_moving_surface_count(surface, x0, &f, seed)?);
        } else {
            checks.skipped = Some("no mu-basis available".into());
        }
    } else {
        checks.skipped = Some("the counting theorems require a base point free surface".into());
    }
    checks.agree = classic.is_none_or(|c| c as u64 == report.r)
        && [&checks.moving_plane, &checks.mu_basis, &checks.moving_surface]
            .iter()
            .all(|c| c.as_ref().is_none_or(|c| c.agrees));
    Ok(checks)
}

/// `A x + B y + C z + D w` with `A..D` homogeneous in `s, t, u`.
pub fn linear_form(plane: &MovingPlane) -> Polynomial {
    plane
        .homogeneous()
        .iter()
        .zip(SPACE_VARS)
        .fold(Polynomial::zero(), |acc, (l, v)| &acc + &(l * &Polynomial::var(v)))
}
