//! Intersection multiplicities of plane curves.
//!
//! Local quantities are computed at rational points of an affine chart by
//! translating the point to the origin and truncating with powers of the
//! maximal ideal. Multiplicities of non complete intersections go through
//! reductions: two generic combinations of the generators generate an
//! ideal with the same multiplicity, whose local colength is the answer.
//! Totals over all of P^2(C) never locate points; each chart is handled by
//! splitting the zero-dimensional ideal of two generic combinations into
//! the part supported on the curves' common zeros and the rest.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groebner::{colon_saturate, eliminate, groebner_basis, Colength, MonomialOrder};
use crate::poly::{multi_gcd, Monomial, Polynomial, Rational, Var};
use crate::surface::ProjPoint;
use crate::Error;

/// Range of the integer coefficients used for generic combinations.
pub const COEFF_RANGE: i64 = 10_000;
/// Extra draws allowed after the first two disagree.
pub const MAX_RETRIES: usize = 5;

/// Affine chart of P^2 given by setting one homogeneous coordinate to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Chart {
    #[serde(rename = "u=1")]
    U,
    #[serde(rename = "s=1")]
    S,
    #[serde(rename = "t=1")]
    T,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::U, Chart::S, Chart::T];

    pub fn fixed(self) -> Var {
        match self {
            Chart::U => Var::U,
            Chart::S => Var::S,
            Chart::T => Var::T,
        }
    }

    pub fn coords(self) -> [Var; 2] {
        match self {
            Chart::U => [Var::S, Var::T],
            Chart::S => [Var::T, Var::U],
            Chart::T => [Var::S, Var::U],
        }
    }

    /// Equations cutting the points this chart is responsible for, so that
    /// the three charts partition P^2: all of `u != 0`, then `(1 : t : 0)`,
    /// then the single point `(0 : 1 : 0)`.
    fn restriction(self) -> Vec<Polynomial> {
        match self {
            Chart::U => vec![],
            Chart::S => vec![Polynomial::var(Var::U)],
            Chart::T => vec![Polynomial::var(Var::S), Polynomial::var(Var::U)],
        }
    }

    fn stream(self) -> u64 {
        match self {
            Chart::U => 0,
            Chart::S => 1,
            Chart::T => 2,
        }
    }
}

/// A rational point of an affine chart, as variable/value pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePoint {
    coords: Vec<(Var, Rational)>,
}

impl AffinePoint {
    pub fn new(coords: Vec<(Var, Rational)>) -> Self {
        AffinePoint { coords }
    }

    pub fn origin(vars: &[Var]) -> Self {
        AffinePoint {
            coords: vars.iter().map(|v| (*v, Rational::zero())).collect(),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        self.coords.iter().map(|(v, _)| *v).collect()
    }

    pub fn coords(&self) -> &[(Var, Rational)] {
        &self.coords
    }

    /// Moves the point to the origin: `f(v) -> f(v + p)`.
    fn center(&self, f: &Polynomial) -> Polynomial {
        f.translate(&self.coords)
    }
}

/// A point of the parameter plane together with the chart it is read in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPoint {
    point: ProjPoint,
    chart: Chart,
}

impl LocalPoint {
    pub fn new(point: ProjPoint, chart: Chart) -> Result<Self, Error> {
        if point.dim() != 3 {
            return Err(Error::InvalidPoint("parameter points have three coordinates".into()));
        }
        let idx = chart.fixed().index();
        if point.coords()[idx].is_zero() {
            return Err(Error::InvalidPoint(format!("{point} is not in chart {chart:?}")));
        }
        Ok(LocalPoint { point, chart })
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn affine(&self) -> AffinePoint {
        let c = self.point.coords();
        let pivot = &c[self.chart.fixed().index()];
        AffinePoint::new(
            self.chart
                .coords()
                .iter()
                .map(|v| (*v, &c[v.index()] / pivot))
                .collect(),
        )
    }

    pub fn localize(&self, f: &Polynomial) -> Polynomial {
        f.dehomogenize(self.chart.fixed())
    }
}

fn degree_cap(gens: &[Polynomial]) -> u32 {
    let mut degs: Vec<u32> = gens.iter().filter_map(Polynomial::degree).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let d1 = degs.first().copied().unwrap_or(1).max(1);
    let d2 = degs.get(1).copied().unwrap_or(d1).max(1);
    4 * d1 * d2 + 4
}

fn monomials_of_degree(vars: &[Var], d: u32) -> Vec<Polynomial> {
    match vars {
        [] => vec![],
        [v] => vec![Polynomial::term(
            Rational::from_integer(1.into()),
            Monomial::var(*v, d as u16),
        )],
        [v, rest @ ..] => (0..=d)
            .flat_map(|e| {
                let head = Monomial::var(*v, e as u16);
                monomials_of_degree(rest, d - e)
                    .into_iter()
                    .map(move |m| m.mul_monomial(&head))
            })
            .collect(),
    }
}

/// Whether the common zeros of `gens` near the point form an isolated
/// point. In the plane the positive-dimensional part of the zero set is the
/// zero set of the gcd.
fn is_isolated(gens: &[Polynomial], at: &AffinePoint) -> Result<bool, Error> {
    let nonzero: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(false);
    }
    let g = multi_gcd(&nonzero)?;
    Ok(g.is_constant() || !g.evaluate(at.coords())?.is_zero())
}

/// Outcome of a local computation that may hit its truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalColength {
    pub value: Colength,
    pub truncation_level: u32,
    pub capped: bool,
}

/// `dim O_p / I O_p` via `colength(I + m^N)` for increasing `N` until two
/// consecutive values agree.
pub fn local_colength_detailed(gens: &[Polynomial], at: &AffinePoint) -> Result<LocalColength, Error> {
    let vars = at.vars();
    if vars.len() != 2 {
        return Err(Error::InvalidPoint(
            "local computations need a point of a plane chart".into(),
        ));
    }
    if !is_isolated(gens, at)? {
        return Ok(LocalColength {
            value: Colength::Infinite,
            truncation_level: 0,
            capped: false,
        });
    }
    let centered: Vec<Polynomial> = gens.iter().map(|g| at.center(g)).collect();
    let order = MonomialOrder::grevlex(&vars);
    let base = groebner_basis(&centered, &order);
    let cap = degree_cap(gens);
    let mut prev: Option<u64> = None;
    for n in 1..=cap {
        let mut with_power = base.generators().to_vec();
        with_power.extend(monomials_of_degree(&vars, n));
        let c = groebner_basis(&with_power, &order)
            .colength()?
            .finite()
            .expect("an m-power makes the quotient finite");
        if prev == Some(c) {
            return Ok(LocalColength {
                value: Colength::Finite(c),
                truncation_level: n,
                capped: false,
            });
        }
        prev = Some(c);
    }
    Ok(LocalColength {
        value: Colength::Infinite,
        truncation_level: cap,
        capped: true,
    })
}

pub fn local_colength(gens: &[Polynomial], at: &AffinePoint) -> Result<Colength, Error> {
    Ok(local_colength_detailed(gens, at)?.value)
}

/// One generic draw: the coefficients used and the value it produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Draw {
    pub stream: u64,
    pub value: Option<u64>,
}

fn random_combination(gens: &[Polynomial], rng: &mut ChaCha8Rng) -> Polynomial {
    gens.iter().fold(Polynomial::zero(), |acc, g| {
        let c: i64 = rng.gen_range(-COEFF_RANGE..=COEFF_RANGE);
        &acc + &g.scale(&crate::poly::rat(c))
    })
}

/// Two generic combinations of `gens` drawn from the given stream.
fn generic_pair(gens: &[Polynomial], seed: u64, stream: u64) -> [Polynomial; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    [random_combination(gens, &mut rng), random_combination(gens, &mut rng)]
}

/// Repeats `eval` on fresh draws until some value has been seen twice.
/// Non-generic draws can only overshoot, so the agreed value is also the
/// smallest seen in practice.
fn agree<F>(first_stream: u64, mut eval: F) -> Result<(u64, Vec<Draw>), Error>
where
    F: FnMut(u64) -> Result<Option<u64>, Error>,
{
    let mut draws: Vec<Draw> = Vec::new();
    for attempt in 0..(2 + MAX_RETRIES) as u64 {
        let stream = first_stream + attempt;
        let value = eval(stream)?;
        if let Some(v) = value {
            if draws.iter().any(|d| d.value == Some(v)) {
                draws.push(Draw { stream, value });
                return Ok((v, draws));
            }
        }
        draws.push(Draw { stream, value });
    }
    Err(Error::GenericityFailure(draws.len()))
}

/// `e(I_p, O_p)` through a reduction generated by two generic combinations
/// of the generators.
pub fn reduction_multiplicity(gens: &[Polynomial], at: &AffinePoint, seed: u64) -> Result<u64, Error> {
    Ok(reduction_multiplicity_with_draws(gens, at, seed)?.0)
}

pub fn reduction_multiplicity_with_draws(
    gens: &[Polynomial],
    at: &AffinePoint,
    seed: u64,
) -> Result<(u64, Vec<Draw>), Error> {
    match local_colength(gens, at)? {
        Colength::Infinite => return Err(Error::NonIsolated),
        Colength::Finite(0) => return Ok((0, vec![])),
        Colength::Finite(_) => {}
    }
    agree(0, |stream| {
        let pair = generic_pair(gens, seed, stream);
        Ok(local_colength(&pair, at)?.finite())
    })
}

fn ideal_power(gens: &[Polynomial], k: u32, order: &MonomialOrder) -> Vec<Polynomial> {
    let base = groebner_basis(gens, order);
    let mut acc = vec![Polynomial::one()];
    for _ in 0..k {
        let products: Vec<Polynomial> = acc
            .iter()
            .flat_map(|a| base.generators().iter().map(move |g| a * g))
            .collect();
        acc = groebner_basis(&products, order).generators().to_vec();
    }
    acc
}

/// `e(I_p, O_p)` read off the Hilbert-Samuel function
/// `l -> dim O_p / I^(l+1)`: twice its leading coefficient, i.e. the
/// eventually constant second difference.
pub fn hilbert_multiplicity(gens: &[Polynomial], at: &AffinePoint) -> Result<u64, Error> {
    match local_colength(gens, at)? {
        Colength::Infinite => return Err(Error::NonIsolated),
        Colength::Finite(0) => return Ok(0),
        Colength::Finite(_) => {}
    }
    let centered: Vec<Polynomial> = gens.iter().map(|g| at.center(g)).collect();
    let origin = AffinePoint::origin(&at.vars());
    let order = MonomialOrder::grevlex(&at.vars());
    let mut values: Vec<i64> = Vec::new();
    let mut second: Vec<i64> = Vec::new();
    for l in 0.. {
        let power = ideal_power(&centered, l + 1, &order);
        let h = local_colength(&power, &origin)?.finite().ok_or(Error::NonIsolated)?;
        values.push(h as i64);
        if values.len() >= 3 {
            let n = values.len();
            second.push(values[n - 1] - 2 * values[n - 2] + values[n - 3]);
            let m = second.len();
            if m >= 2 && second[m - 1] == second[m - 2] {
                return Ok(second[m - 1] as u64);
            }
        }
    }
    unreachable!()
}

/// Per-chart share of a projective total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartCount {
    pub chart: Chart,
    pub count: u64,
    pub draws: Vec<Draw>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub total: u64,
    pub per_chart: Vec<ChartCount>,
    pub seed: u64,
    pub agreement: bool,
}

fn chart_count(curves: &[Polynomial], chart: Chart, seed: u64) -> Result<ChartCount, Error> {
    let vars = chart.coords();
    let order = MonomialOrder::grevlex(&vars);
    let local: Vec<Polynomial> = curves.iter().map(|c| c.dehomogenize(chart.fixed())).collect();
    let mut support = local.clone();
    support.extend(chart.restriction());
    let support = groebner_basis(&support, &order);
    if support.is_unit() {
        return Ok(ChartCount {
            chart,
            count: 0,
            draws: vec![],
        });
    }
    let (count, draws) = agree(chart.stream() * 1000, |stream| {
        let pair = generic_pair(&local, seed, stream);
        let g = groebner_basis(&pair, &order);
        let Colength::Finite(all) = g.colength()? else {
            return Ok(None);
        };
        let off = colon_saturate(&g, support.generators());
        let off = off
            .colength()?
            .finite()
            .expect("saturation of a finite quotient is finite");
        Ok(Some(all - off))
    })?;
    Ok(ChartCount { chart, count, draws })
}

/// Share of the total multiplicity of homogeneous curves lying in the part
/// of P^2 a chart is responsible for. The curves must not share a
/// component inside the chart.
pub fn chart_multiplicity(curves: &[Polynomial], chart: Chart, seed: u64) -> Result<ChartCount, Error> {
    let local: Vec<Polynomial> = curves
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.dehomogenize(chart.fixed()))
        .collect();
    if local.is_empty() {
        return Err(Error::CommonComponent("every curve vanishes identically".into()));
    }
    let g = multi_gcd(&local)?;
    if !g.is_constant() {
        return Err(Error::CommonComponent(g.to_string()));
    }
    chart_count(curves, chart, seed)
}

/// Whether the curves have a common zero in the part of P^2 assigned to
/// the chart.
pub fn chart_has_zeros(curves: &[Polynomial], chart: Chart) -> bool {
    let mut support: Vec<Polynomial> = curves.iter().map(|c| c.dehomogenize(chart.fixed())).collect();
    support.extend(chart.restriction());
    !groebner_basis(&support, &MonomialOrder::grevlex(&chart.coords())).is_unit()
}

/// Sum of intersection multiplicities of homogeneous curves in `s, t, u`
/// over all their common zeros in P^2(C), including complex points and
/// points at infinity. Identically zero curves impose no condition.
pub fn projective_total_multiplicity(curves: &[Polynomial], seed: u64) -> Result<MultiplicityReport, Error> {
    let nonzero: Vec<Polynomial> = curves.iter().filter(|c| !c.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::CommonComponent("every curve vanishes identically".into()));
    }
    let g = multi_gcd(&nonzero)?;
    if !g.is_constant() {
        return Err(Error::CommonComponent(g.to_string()));
    }
    let per_chart = Chart::ALL
        .iter()
        .map(|&chart| chart_count(&nonzero, chart, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiplicityReport {
        total: per_chart.iter().map(|c| c.count).sum(),
        per_chart,
        seed,
        agreement: true,
    })
}

/// Radical of a zero-dimensional ideal: adjoin the squarefree part of the
/// univariate eliminant in each variable.
fn zero_dim_radical(gens: &[Polynomial], vars: &[Var]) -> Vec<Polynomial> {
    let mut out = gens.to_vec();
    for v in vars {
        let others: Vec<Var> = vars.iter().copied().filter(|w| w != v).collect();
        let elim = eliminate(gens, &others);
        if let Some(p) = elim.generators().first() {
            let g = crate::poly::gcd(p, &p.derivative(*v, 1));
            out.push(p.exact_div(&g).expect("gcd divides"));
        }
    }
    out
}

/// Number of distinct common zeros in P^2(C) of homogeneous curves with no
/// common component.
pub fn distinct_common_zeros(curves: &[Polynomial]) -> Result<u64, Error> {
    let nonzero: Vec<Polynomial> = curves.iter().filter(|c| !c.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Err(Error::CommonComponent("every curve vanishes identically".into()));
    }
    let g = multi_gcd(&nonzero)?;
    if !g.is_constant() {
        return Err(Error::CommonComponent(g.to_string()));
    }
    let mut total = 0;
    for chart in Chart::ALL {
        let vars = chart.coords();
        let mut gens: Vec<Polynomial> = nonzero.iter().map(|c| c.dehomogenize(chart.fixed())).collect();
        gens.extend(chart.restriction());
        let order = MonomialOrder::grevlex(&vars);
        let basis = groebner_basis(&gens, &order);
        if basis.is_unit() {
            continue;
        }
        let radical = groebner_basis(&zero_dim_radical(basis.generators(), &vars), &order);
        total += radical.colength()?.finite().expect("zero-dimensional");
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, rat};

    fn ps(texts: &[&str]) -> Vec<Polynomial> {
        texts
            .iter()
            .map(|t| parse_poly(t, &[Var::S, Var::T, Var::U]).unwrap())
            .collect()
    }

    fn origin() -> AffinePoint {
        AffinePoint::origin(&[Var::S, Var::T])
    }

    #[test]
    fn local_colength_examples() {
        assert_eq!(
            local_colength(&ps(&["s", "t^2"]), &origin()).unwrap(),
            Colength::Finite(2)
        );
        assert_eq!(
            local_colength(&ps(&["t", "t^2 - s^2*(s+1)"]), &origin()).unwrap(),
            Colength::Finite(2)
        );
        assert_eq!(
            local_colength(&ps(&["s + t", "s*t"]), &origin()).unwrap(),
            Colength::Finite(2)
        );
    }

    #[test]
    fn local_colength_away_from_origin() {
        // (s-1)^2 + t^2 and t meet at (1, 0) with multiplicity 2 and nowhere else
        let at = AffinePoint::new(vec![(Var::S, rat(1)), (Var::T, rat(0))]);
        assert_eq!(
            local_colength(&ps(&["(s-1)^2 + t^2", "t"]), &at).unwrap(),
            Colength::Finite(2)
        );
        assert_eq!(local_colength(&ps(&["s", "t"]), &at).unwrap(), Colength::Finite(0));
    }

    #[test]
    fn non_isolated_is_infinite() {
        assert_eq!(
            local_colength(&ps(&["s*t", "s^2"]), &origin()).unwrap(),
            Colength::Infinite
        );
        let r = reduction_multiplicity(&ps(&["s*t", "s^2"]), &origin(), 0);
        assert_eq!(r, Err(Error::NonIsolated));
        assert_eq!(
            hilbert_multiplicity(&ps(&["s*(t-1)", "s^2"]), &origin()),
            Err(Error::NonIsolated)
        );
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(
            reduction_multiplicity(&ps(&["s", "t", "s + t"]), &origin(), 0).unwrap(),
            1
        );
        assert_eq!(
            reduction_multiplicity(&ps(&["s^2", "s*t", "t^2"]), &origin(), 0).unwrap(),
            4
        );
        // Whitney umbrella base point, chart s = 1 with z0 = 1
        let tu = AffinePoint::origin(&[Var::T, Var::U]);
        assert_eq!(
            reduction_multiplicity(&ps(&["t", "u", "t^2 - u^2"]), &tu, 0).unwrap(),
            1
        );
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_multiplicity(&ps(&["s", "t"]), &origin()).unwrap(), 1);
        assert_eq!(hilbert_multiplicity(&ps(&["s^2", "s*t", "t^2"]), &origin()).unwrap(), 4);
        assert_eq!(hilbert_multiplicity(&ps(&["s", "t^3"]), &origin()).unwrap(), 3);
        assert_eq!(reduction_multiplicity(&ps(&["s", "t^3"]), &origin(), 1).unwrap(), 3);
    }

    #[test]
    fn samuel_function_of_maximal_ideal_power() {
        // dim R/(m^2)^(l+1) = (2l+2)(2l+3)/2
        let m2 = ps(&["s^2", "s*t", "t^2"]);
        let order = MonomialOrder::grevlex(&[Var::S, Var::T]);
        for l in 0..3u32 {
            let power = ideal_power(&m2, l + 1, &order);
            let expected = (2 * l as u64 + 2) * (2 * l as u64 + 3) / 2;
            assert_eq!(local_colength(&power, &origin()).unwrap(), Colength::Finite(expected));
        }
    }

    #[test]
    fn projective_totals() {
        let r = projective_total_multiplicity(&ps(&["s*u", "t*u", "s*t"]), 0).unwrap();
        assert_eq!(r.total, 3);
        let counts: Vec<u64> = r.per_chart.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![1, 1, 1]);

        let w = projective_total_multiplicity(&ps(&["s*t", "s*u", "t^2 - u^2"]), 0).unwrap();
        assert_eq!(w.total, 3);

        let none = projective_total_multiplicity(&ps(&["s", "t", "u"]), 0).unwrap();
        assert_eq!(none.total, 0);
    }

    #[test]
    fn complex_points_are_counted() {
        let r = projective_total_multiplicity(&ps(&["s^2 + t^2", "u"]), 0).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(distinct_common_zeros(&ps(&["s^2 + t^2", "u"])).unwrap(), 2);
        assert_eq!(distinct_common_zeros(&ps(&["s^2", "t^2"])).unwrap(), 1);
    }

    #[test]
    fn common_component_is_rejected() {
        let r = projective_total_multiplicity(&ps(&["s*t", "s*u"]), 0);
        assert!(matches!(r, Err(Error::CommonComponent(_))));
        let r = projective_total_multiplicity(&ps(&["s*t"]), 0);
        assert!(matches!(r, Err(Error::CommonComponent(_))));
        let r = projective_total_multiplicity(&ps(&["0", "0"]), 0);
        assert!(matches!(r, Err(Error::CommonComponent(_))));
    }

    #[test]
    fn seeds_do_not_change_totals() {
        let curves = ps(&["s^2*u - t^3", "s*t*u + t^3 - u^3", "s^3 - t*u^2"]);
        let a = projective_total_multiplicity(&curves, 1).unwrap();
        let b = projective_total_multiplicity(&curves, 99).unwrap();
        assert_eq!(a.total, b.total);
    }
}
