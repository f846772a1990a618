//! Moving planes following a parametric surface and μ-bases of the syzygy
//! module, computed over the affine ring in `s, t`.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groebner::{groebner_basis, MonomialOrder};
use crate::linalg::{nullspace, rref};
use crate::poly::{multi_gcd, Monomial, Polynomial, Rational, Var};
use crate::surface::{ProjPoint, SurfaceParam, PARAM_VARS};
use crate::Error;

/// Most candidates considered when pairing triples from nullspace bases.
const TRIPLE_CANDIDATES: usize = 12;
/// Seed of the internal generic draws used by the fallback search.
const SEARCH_SEED: u64 = 0x5eed;

/// A moving plane `A x + B y + C z + D w` with coefficients in `s, t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MovingPlane {
    comps: [Polynomial; 4],
}

impl MovingPlane {
    pub fn new(a: Polynomial, b: Polynomial, c: Polynomial, d: Polynomial) -> Self {
        MovingPlane { comps: [a, b, c, d] }
    }

    pub fn from_array(comps: [Polynomial; 4]) -> Self {
        MovingPlane { comps }
    }

    pub fn components(&self) -> &[Polynomial; 4] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree among the components.
    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Polynomial::total_degree).max().unwrap_or(0)
    }

    /// Components homogenized in `u` to the plane's degree.
    pub fn homogeneous(&self) -> [Polynomial; 4] {
        let k = self.degree();
        self.comps
            .clone()
            .map(|p| p.homogenize(Var::U, Some(k)).expect("degree is the maximum"))
    }

    /// Incidence curve `L(s,t,u) · X0` in the parameter plane.
    pub fn incidence(&self, x0: &ProjPoint) -> Polynomial {
        x0.dot(&self.homogeneous())
    }

    /// `A a + B b + C c + D d` on the affine parametrization.
    pub fn residual(&self, surface: &SurfaceParam) -> Polynomial {
        self.comps
            .iter()
            .zip(surface.affine())
            .fold(Polynomial::zero(), |acc, (l, p)| &acc + &(l * p))
    }

    /// Divides out the polynomial gcd and the integer content; the first
    /// nonzero component gets a positive leading coefficient.
    pub fn normalized(&self) -> MovingPlane {
        let Ok(g) = multi_gcd(&self.comps) else {
            return self.clone();
        };
        let comps = self.comps.clone().map(|p| p.exact_div(&g).expect("gcd divides"));
        let scale = content_scale(&comps);
        MovingPlane {
            comps: comps.map(|p| p.scale(&scale)),
        }
    }

    pub fn scale(&self, c: &Rational) -> MovingPlane {
        MovingPlane {
            comps: self.comps.clone().map(|p| p.scale(c)),
        }
    }

    pub fn add(&self, other: &MovingPlane) -> MovingPlane {
        let mut comps = self.comps.clone();
        for (a, b) in comps.iter_mut().zip(&other.comps) {
            *a = &*a + b;
        }
        MovingPlane { comps }
    }

    pub fn mul_poly(&self, f: &Polynomial) -> MovingPlane {
        MovingPlane {
            comps: self.comps.clone().map(|p| &p * f),
        }
    }

    /// The linear form `A x + B y + C z + D w`, or with `w = 1` when `affine`.
    fn linear_form(&self, affine: bool) -> Polynomial {
        let last = if affine {
            Polynomial::one()
        } else {
            Polynomial::var(Var::W)
        };
        let space = [
            Polynomial::var(Var::X),
            Polynomial::var(Var::Y),
            Polynomial::var(Var::Z),
            last,
        ];
        self.comps
            .iter()
            .zip(&space)
            .fold(Polynomial::zero(), |acc, (l, v)| &acc + &(l * v))
    }
}

/// Rational factor making the integer content 1 and the first nonzero
/// component's leading coefficient positive.
fn content_scale(comps: &[Polynomial]) -> Rational {
    let mut joined = Polynomial::zero();
    // Pack the components into one polynomial in disjoint auxiliary slots so
    // `primitive` sees every coefficient.
    for (i, p) in comps.iter().enumerate() {
        let tag = Monomial::var(Var::AUX[i % 3], 1 + (i / 3) as u16 + i as u16);
        joined = &joined + &p.mul_monomial(&tag);
    }
    let prim = joined.primitive();
    let Some((m, c)) = joined.leading_term() else {
        return Rational::one();
    };
    let mut scale = prim.coeff(m) / c;
    let first = comps.iter().find(|p| !p.is_zero()).expect("some component is nonzero");
    if (first.leading_coeff() * &scale) < Rational::zero() {
        scale = -scale;
    }
    scale
}

impl fmt::Display for MovingPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.comps;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

impl Serialize for MovingPlane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.comps.iter().map(ToString::to_string).collect();
        parts.serialize(s)
    }
}

/// Three moving planes whose outer product is `kappa` times the surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuBasis {
    pub p: MovingPlane,
    pub q: MovingPlane,
    pub r: MovingPlane,
    #[serde(serialize_with = "ser_rational")]
    pub kappa: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl MuBasis {
    pub fn planes(&self) -> [&MovingPlane; 3] {
        [&self.p, &self.q, &self.r]
    }

    /// Recomputes both defining properties exactly.
    pub fn verify(&self, surface: &SurfaceParam) -> bool {
        self.planes().iter().all(|l| follows(l, surface))
            && outer_product_ratio(&self.p, &self.q, &self.r, surface).as_ref() == Some(&self.kappa)
    }
}

/// Whether `L` follows the surface: `A a + B b + C c + D d = 0`.
pub fn follows(plane: &MovingPlane, surface: &SurfaceParam) -> bool {
    plane.residual(surface).is_zero()
}

/// The planes `(-d,0,0,a)`, `(0,-d,0,b)`, `(0,0,-d,c)`.
pub fn special_planes(surface: &SurfaceParam) -> [MovingPlane; 3] {
    let [a, b, c, d] = surface.affine().clone();
    let z = Polynomial::zero;
    [
        MovingPlane::new(-&d, z(), z(), a),
        MovingPlane::new(z(), -&d, z(), b),
        MovingPlane::new(z(), z(), -d, c),
    ]
}

/// Monomials in `s, t` of degree at most `k`, by increasing degree and
/// decreasing power of `s` within a degree.
fn monomials_up_to(k: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=k {
        for i in (0..=d).rev() {
            out.push(Monomial::var(Var::S, i as u16).mul(&Monomial::var(Var::T, (d - i) as u16)));
        }
    }
    out
}

/// Unknown layout shared by the linear systems: component-major, then the
/// monomials of [`monomials_up_to`].
fn plane_from_vector(v: &[Rational], mons: &[Monomial]) -> MovingPlane {
    let n = mons.len();
    let comps = [0, 1, 2, 3].map(|j| {
        Polynomial::from_terms(
            mons.iter()
                .zip(&v[j * n..(j + 1) * n])
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (*m, c.clone())),
        )
    });
    MovingPlane { comps }
}

fn plane_to_vector(plane: &MovingPlane, mons: &[Monomial]) -> Vec<Rational> {
    plane
        .comps
        .iter()
        .flat_map(|p| mons.iter().map(move |m| p.coeff(m)))
        .collect()
}

/// Builds the matrix whose columns are the coefficient vectors of
/// `cols[i]`, with one row per monomial occurring in any of them.
fn coefficient_matrix(cols: &[Polynomial]) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Monomial> = cols.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    rows.sort();
    rows.dedup();
    rows.iter().map(|m| cols.iter().map(|p| p.coeff(m)).collect()).collect()
}

/// Nullspace basis of the planes with all component degrees at most `k`
/// that follow the surface.
pub fn moving_planes_of_degree(surface: &SurfaceParam, k: u32) -> Vec<MovingPlane> {
    let mons = monomials_up_to(k);
    let cols: Vec<Polynomial> = surface
        .affine()
        .iter()
        .flat_map(|p| mons.iter().map(move |m| p.mul_monomial(m)))
        .collect();
    let matrix = coefficient_matrix(&cols);
    nullspace(&matrix, cols.len())
        .iter()
        .map(|v| plane_from_vector(v, &mons).normalized_scalar())
        .collect()
}

impl MovingPlane {
    fn normalized_scalar(&self) -> MovingPlane {
        self.scale(&content_scale(&self.comps))
    }
}

/// Signed 3x3 minors of the matrix with rows `p, q, r`: the `i`-th entry
/// deletes column `i` and carries the sign `(-1)^i` (from zero).
pub fn outer_product(p: &MovingPlane, q: &MovingPlane, r: &MovingPlane) -> [Polynomial; 4] {
    let rows = [&p.comps, &q.comps, &r.comps];
    [0usize, 1, 2, 3].map(|skip| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
        let e = |i: usize, j: usize| &rows[i][cols[j]];
        let det = &(&(e(0, 0) * &(&(e(1, 1) * e(2, 2)) - &(e(1, 2) * e(2, 1))))
            - &(e(0, 1) * &(&(e(1, 0) * e(2, 2)) - &(e(1, 2) * e(2, 0)))))
            + &(e(0, 2) * &(&(e(1, 0) * e(2, 1)) - &(e(1, 1) * e(2, 0))));
        if skip % 2 == 0 {
            det
        } else {
            -det
        }
    })
}

/// The constant `kappa != 0` with `[p,q,r] = kappa (a,b,c,d)`, if any.
fn outer_product_ratio(p: &MovingPlane, q: &MovingPlane, r: &MovingPlane, surface: &SurfaceParam) -> Option<Rational> {
    let o = outer_product(p, q, r);
    proportional(&o, surface.affine())
}

fn proportional(o: &[Polynomial; 4], target: &[Polynomial; 4]) -> Option<Rational> {
    let (i, t) = target.iter().enumerate().find(|(_, t)| !t.is_zero())?;
    let (m, c) = t.leading_term()?;
    let kappa = o[i].coeff(m) / c;
    if kappa.is_zero() {
        return None;
    }
    o.iter()
        .zip(target)
        .all(|(x, y)| *x == y.scale(&kappa))
        .then_some(kappa)
}

/// Diagnostics of an unsuccessful search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuBasisFailure {
    pub degree_bound: u32,
    /// Module generators found by degree, lowest first.
    pub generators: Vec<MovingPlane>,
}

/// Default search bound `2n`.
pub fn default_degree_bound(surface: &SurfaceParam) -> u32 {
    2 * surface.degree()
}

/// Finds and verifies a μ-basis with plane degrees at most `degree_bound`.
pub fn mu_basis(surface: &SurfaceParam, degree_bound: u32) -> Result<MuBasis, Error> {
    mu_basis_search(surface, degree_bound).map_err(|f| Error::DegreeBoundExhausted(f.degree_bound))
}

/// Like [`mu_basis`] but reports the generators found on failure.
pub fn mu_basis_search(surface: &SurfaceParam, degree_bound: u32) -> Result<MuBasis, MuBasisFailure> {
    let mut generators: Vec<MovingPlane> = Vec::new();
    let mut spaces: Vec<Vec<MovingPlane>> = Vec::new();
    for k in 0..=degree_bound {
        let space = moving_planes_of_degree(surface, k);
        generators.extend(new_generators(&generators, &space, k));
        spaces.push(space);
        if let Some(mu) = greedy_triple(&generators, surface) {
            return Ok(mu);
        }
    }
    if let Some(mu) = pair_search(&generators, surface, degree_bound) {
        return Ok(mu);
    }
    if let Some(mu) = unit_construction(surface, degree_bound) {
        if mu.planes().iter().all(|l| l.degree() <= degree_bound) {
            return Ok(mu);
        }
    }
    if let Some(mu) = generic_search(&spaces, surface, degree_bound) {
        return Ok(mu);
    }
    Err(MuBasisFailure {
        degree_bound,
        generators,
    })
}

/// Elements of `space` (degree `k`) outside the span of monomial multiples
/// of the earlier generators, reduced against that span and brought to a
/// canonical echelon form. Columns are reversed for pivoting so reductions
/// clear the trailing components first.
fn new_generators(previous: &[MovingPlane], space: &[MovingPlane], k: u32) -> Vec<MovingPlane> {
    let mons = monomials_up_to(k);
    let ncols = 4 * mons.len();
    let rev = |mut v: Vec<Rational>| {
        v.reverse();
        v
    };
    let mut old: Vec<Vec<Rational>> = Vec::new();
    for g in previous {
        let room = k - g.degree();
        for m in monomials_up_to(room) {
            old.push(rev(plane_to_vector(
                &g.mul_poly(&Polynomial::term(Rational::one(), m)),
                &mons,
            )));
        }
    }
    let old_pivots = rref(&mut old, ncols);
    let mut fresh: Vec<Vec<Rational>> = space
        .iter()
        .map(|l| {
            let mut v = rev(plane_to_vector(l, &mons));
            for (row, &pc) in old.iter().zip(&old_pivots) {
                if !v[pc].is_zero() {
                    let f = v[pc].clone();
                    for (x, y) in v.iter_mut().zip(row) {
                        *x -= &f * y;
                    }
                }
            }
            v
        })
        .collect();
    rref(&mut fresh, ncols);
    let mut out: Vec<(usize, MovingPlane)> = fresh
        .into_iter()
        .map(|v| {
            let plane = plane_from_vector(&rev(v), &mons).normalized();
            let first = plane_to_vector(&plane, &mons)
                .iter()
                .position(|c| !c.is_zero())
                .unwrap_or(ncols);
            (first, plane)
        })
        .collect();
    out.sort_by_key(|(first, _)| *first);
    out.into_iter().map(|(_, p)| p).collect()
}

/// Tries triples of generators ordered by total degree.
fn greedy_triple(generators: &[MovingPlane], surface: &SurfaceParam) -> Option<MuBasis> {
    let g = &generators[..generators.len().min(TRIPLE_CANDIDATES)];
    let mut triples = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            for l in j + 1..g.len() {
                triples.push((g[i].degree() + g[j].degree() + g[l].degree(), i, j, l));
            }
        }
    }
    triples.sort();
    triples.into_iter().find_map(|(_, i, j, l)| {
        let kappa = outer_product_ratio(&g[i], &g[j], &g[l], surface)?;
        Some(MuBasis {
            p: g[i].clone(),
            q: g[j].clone(),
            r: g[l].clone(),
            kappa,
        })
    })
}

/// Pairs of generators ordered by total degree, with the third plane
/// solved linearly from `[p,q,r] = kappa P` in degrees up to one above the
/// generators.
fn pair_search(generators: &[MovingPlane], surface: &SurfaceParam, bound: u32) -> Option<MuBasis> {
    let top = generators.iter().map(MovingPlane::degree).max()?;
    let bound = bound.min(top + 1);
    let g = &generators[..generators.len().min(TRIPLE_CANDIDATES)];
    let mut pairs = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            pairs.push((g[i].degree() + g[j].degree(), i, j));
        }
    }
    pairs.sort();
    for k in 0..=bound {
        for &(_, i, j) in &pairs {
            if let Some(mu) = solve_third(&g[i], &g[j], k, surface) {
                return Some(mu);
            }
        }
    }
    None
}

fn generic_element(space: &[MovingPlane], rng: &mut ChaCha8Rng) -> MovingPlane {
    space.iter().fold(
        MovingPlane::new(
            Polynomial::zero(),
            Polynomial::zero(),
            Polynomial::zero(),
            Polynomial::zero(),
        ),
        |acc, l| acc.add(&l.scale(&Rational::from_integer(rng.gen_range(-9i64..=9).into()))),
    )
}

/// Generic `p` of lowest degree and generic `q`; the third plane is solved
/// linearly from `[p,q,r] = kappa P`.
fn generic_search(spaces: &[Vec<MovingPlane>], surface: &SurfaceParam, bound: u32) -> Option<MuBasis> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let k1 = spaces.iter().position(|s| !s.is_empty())? as u32;
    let p = generic_element(&spaces[k1 as usize], &mut rng).normalized();
    for k2 in k1..=bound {
        let q = generic_element(&spaces[k2 as usize], &mut rng).normalized();
        if q.is_zero() {
            continue;
        }
        for k3 in k2..=bound {
            if let Some(mu) = solve_third(&p, &q, k3, surface) {
                return Some(mu);
            }
        }
    }
    None
}

/// Stacks four polynomials into one, each in its own auxiliary slot, so a
/// vector identity becomes a single coefficient comparison.
fn stack(o: &[Polynomial; 4]) -> Polynomial {
    let tag = |i: usize| Monomial::var(Var::AUX[i % 3], 1 + (i / 3) as u16);
    o.iter()
        .enumerate()
        .fold(Polynomial::zero(), |acc, (i, x)| &acc + &x.mul_monomial(&tag(i)))
}

fn solve_third(p: &MovingPlane, q: &MovingPlane, k: u32, surface: &SurfaceParam) -> Option<MuBasis> {
    let mons = monomials_up_to(k);
    let zero = Polynomial::zero;
    let units = [0, 1, 2, 3].map(|j| {
        let mut comps = [zero(), zero(), zero(), zero()];
        comps[j] = Polynomial::one();
        outer_product(p, q, &MovingPlane::from_array(comps))
    });
    // One column per unknown (component j, monomial m) plus one for kappa.
    let mut cols: Vec<Polynomial> = Vec::new();
    for unit in &units {
        let base = stack(unit);
        for m in &mons {
            cols.push(base.mul_monomial(m));
        }
    }
    cols.push(-stack(surface.affine()));
    let matrix = coefficient_matrix(&cols);
    let kappa_col = cols.len() - 1;
    let sol = nullspace(&matrix, cols.len())
        .into_iter()
        .find(|v| !v[kappa_col].is_zero())?;
    let r = plane_from_vector(&sol[..kappa_col], &mons).normalized();
    let kappa = outer_product_ratio(p, q, &r, surface)?;
    Some(MuBasis {
        p: p.clone(),
        q: q.clone(),
        r,
        kappa,
    })
}

/// Lowest degree `h` with `h . P = 1` whose entry `skip` is a nonzero
/// constant, searched up to degree `cap`.
fn unit_lift(comps: &[Polynomial; 4], skip: usize, cap: u32) -> Option<(u32, MovingPlane)> {
    let others: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
    for k in 0..=cap {
        let mons = monomials_up_to(k);
        let mut cols: Vec<Polynomial> = others
            .iter()
            .flat_map(|&j| mons.iter().map(move |m| comps[j].mul_monomial(m)))
            .collect();
        cols.push(comps[skip].clone());
        cols.push(-Polynomial::one());
        let (c, last) = (cols.len() - 2, cols.len() - 1);
        let null = nullspace(&coefficient_matrix(&cols), cols.len());
        let Some(base) = null.iter().find(|v| !v[last].is_zero()) else {
            continue;
        };
        let scale = |v: &[Rational], f: &Rational| v.iter().map(|x| x * f).collect::<Vec<_>>();
        let mut sol = scale(base, &(Rational::one() / &base[last]));
        if sol[c].is_zero() {
            // Shift by a solution of the homogeneous system with `c != 0`.
            let Some(w) = null.iter().find(|v| !v[c].is_zero()) else {
                continue;
            };
            let w = scale(w, &(Rational::one() / &w[c]));
            sol = sol.iter().zip(&w).map(|(x, y)| x + y - x * &w[last]).collect();
        }
        if sol[c].is_zero() {
            continue;
        }
        let n = mons.len();
        let mut h = [0, 1, 2, 3].map(|_| Polynomial::zero());
        h[skip] = Polynomial::constant(sol[c].clone());
        for (i, &j) in others.iter().enumerate() {
            h[j] = Polynomial::from_terms(
                mons.iter()
                    .zip(&sol[i * n..(i + 1) * n])
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(m, x)| (*m, x.clone())),
            );
        }
        return Some((k, MovingPlane::from_array(h)));
    }
    None
}

/// Explicit basis of the syzygy module: for `h` with `h . P = 1` and a
/// nonzero constant entry `h_i`, the projections `e_j - P_j h` for
/// `j != i` form a basis, since `sum h_j (e_j - P_j h) = 0` makes the
/// `i`-th one redundant. The basis is then lowered in degree.
fn unit_construction(surface: &SurfaceParam, bound: u32) -> Option<MuBasis> {
    let comps = surface.affine();
    let cap = bound.max(2 * surface.degree());
    let (_, skip, h) = (0..4)
        .filter_map(|i| unit_lift(comps, i, cap).map(|(k, h)| (k, i, h)))
        .min_by_key(|(k, i, _)| (*k, *i))?;
    let planes: Vec<MovingPlane> = (0..4)
        .filter(|&j| j != skip)
        .map(|j| {
            let mut e = [0, 1, 2, 3].map(|_| Polynomial::zero());
            e[j] = Polynomial::one();
            MovingPlane::from_array(e).add(&h.mul_poly(&-&comps[j]))
        })
        .collect();
    let [p, q, r] = lower_degrees([planes[0].clone(), planes[1].clone(), planes[2].clone()], surface);
    let kappa = outer_product_ratio(&p, &q, &r, surface)?;
    Some(MuBasis { p, q, r, kappa })
}

/// Extra degree allowed in the multipliers of an elementary move, so that
/// cancellation among several multiples can be found.
const LOWERING_SLACK: u32 = 1;

/// Replaces plane `j` by `m_j + sum f_k m_k` of lower degree, if any.
fn lower_once(planes: &[MovingPlane; 3], j: usize) -> Option<MovingPlane> {
    let target = planes[j].degree().checked_sub(1)?;
    let top = planes[j].degree();
    let mut multiples: Vec<(usize, Monomial)> = Vec::new();
    for k in (0..3).filter(|&k| k != j) {
        let room = (top + LOWERING_SLACK).checked_sub(planes[k].degree());
        for m in room.map(monomials_up_to).unwrap_or_default() {
            multiples.push((k, m));
        }
    }
    if multiples.is_empty() {
        return None;
    }
    let mut cols: Vec<Polynomial> = multiples
        .iter()
        .map(|(k, m)| stack(&planes[*k].mul_poly(&Polynomial::term(Rational::one(), *m)).comps))
        .collect();
    cols.push(stack(&planes[j].comps));
    let mut rows: Vec<Monomial> = cols.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    rows.sort();
    rows.dedup();
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .filter(|m| m.degree_in(&PARAM_VARS) > target)
        .map(|m| cols.iter().map(|p| p.coeff(m)).collect())
        .collect();
    let last = cols.len() - 1;
    let sol = nullspace(&matrix, cols.len())
        .into_iter()
        .find(|v| !v[last].is_zero())?;
    let mut out = planes[j].clone();
    for ((k, m), c) in multiples.iter().zip(&sol) {
        if !c.is_zero() {
            out = out.add(&planes[*k].mul_poly(&Polynomial::term(c / &sol[last], *m)));
        }
    }
    (out.degree() <= target && !out.is_zero()).then_some(out)
}

/// Lowers the basis degrees by elementary moves and by exchange: a plane
/// `g` may replace slot `j` exactly when its coordinate there is a nonzero
/// constant. By Cramer's rule that coordinate is `[.., g, ..] / [p, q, r]`,
/// which is linear in `g`, so the lowest degree replacement is found by
/// linear algebra.
fn lower_degrees(mut planes: [MovingPlane; 3], surface: &SurfaceParam) -> [MovingPlane; 3] {
    let mut spaces: Vec<Vec<MovingPlane>> = Vec::new();
    let mut changed = true;
    while changed {
        changed = false;
        let mut order = [0, 1, 2];
        order.sort_by_key(|&j| std::cmp::Reverse(planes[j].degree()));
        for j in order {
            if let Some(lower) = lower_once(&planes, j) {
                planes[j] = lower.normalized();
                changed = true;
                continue;
            }
            for k in 0..planes[j].degree() {
                while spaces.len() <= k as usize {
                    spaces.push(moving_planes_of_degree(surface, spaces.len() as u32));
                }
                if let Some(g) = replacement(&planes, j, &spaces[k as usize], surface) {
                    planes[j] = g.normalized();
                    changed = true;
                    break;
                }
            }
        }
    }
    planes.map(|l| l.normalized())
}

fn replacement(
    planes: &[MovingPlane; 3],
    j: usize,
    space: &[MovingPlane],
    surface: &SurfaceParam,
) -> Option<MovingPlane> {
    if space.is_empty() {
        return None;
    }
    let target = surface.affine();
    let i = target.iter().position(|t| !t.is_zero())?;
    let whole = outer_product(&planes[0], &planes[1], &planes[2]);
    let coords: Vec<Polynomial> = space
        .iter()
        .map(|g| {
            let mut swapped = planes.clone();
            swapped[j] = g.clone();
            let o = outer_product(&swapped[0], &swapped[1], &swapped[2]);
            o[i].exact_div(&whole[i])
                .expect("coordinates of a syzygy are polynomial")
        })
        .collect();
    let mut rows: Vec<Monomial> = coords.iter().flat_map(|p| p.terms().map(|(m, _)| *m)).collect();
    rows.sort();
    rows.dedup();
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .filter(|m| !m.is_one())
        .map(|m| coords.iter().map(|p| p.coeff(m)).collect())
        .collect();
    let alpha = nullspace(&matrix, coords.len()).into_iter().find(|v| {
        v.iter()
            .zip(&coords)
            .fold(Rational::zero(), |acc, (a, c)| acc + a * c.constant_term())
            != Rational::zero()
    })?;
    Some(space.iter().zip(&alpha).filter(|(_, a)| !a.is_zero()).fold(
        MovingPlane::from_array([0, 1, 2, 3].map(|_| Polynomial::zero())),
        |acc, (g, a)| acc.add(&g.scale(a)),
    ))
}

/// Whether `plane` lies in the module generated by the μ-basis, tested as
/// membership of its linear form in the ideal of the basis' linear forms.
pub fn in_module(plane: &MovingPlane, mu: &MuBasis) -> bool {
    let order = MonomialOrder::grevlex(&[Var::S, Var::T, Var::X, Var::Y, Var::Z, Var::W]);
    let gens: Vec<Polynomial> = mu.planes().iter().map(|l| l.linear_form(false)).collect();
    let basis = groebner_basis(&gens, &order);
    basis.contains(&plane.linear_form(false)).expect("basis is Groebner")
}

/// Membership of `f(x,y,z,s,t)` in `<p·(x,y,z,1), q·(x,y,z,1), r·(x,y,z,1)>`.
pub fn in_moving_surface_ideal(f: &Polynomial, mu: &MuBasis) -> Result<bool, Error> {
    let vars = [Var::S, Var::T, Var::X, Var::Y, Var::Z];
    if !f.uses_only(&vars) {
        return Err(Error::InvalidSurface(format!(
            "{f} uses variables other than s, t, x, y, z"
        )));
    }
    let order = MonomialOrder::grevlex(&vars);
    let gens: Vec<Polynomial> = mu.planes().iter().map(|l| l.linear_form(true)).collect();
    groebner_basis(&gens, &order).contains(f)
}

/// Variables a moving plane's coefficients may use.
pub const PLANE_VARS: [Var; 2] = PARAM_VARS;
