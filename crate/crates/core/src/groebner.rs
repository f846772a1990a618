//! Buchberger's algorithm over the rationals with integer-content
//! reduction, plus the ideal operations built on it: normal forms,
//! colength of zero-dimensional quotients, saturation, intersection and
//! elimination.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::poly::{Monomial, Polynomial, Rational, Var, NVARS};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrderKind {
    GrevLex,
    Lex,
    /// The first `elim` variables form a block that is eliminated first;
    /// grevlex inside each block.
    Block {
        elim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialOrder {
    kind: OrderKind,
    vars: Vec<Var>,
}

type Key = [i32; NVARS + 2];

impl MonomialOrder {
    pub fn grevlex(vars: &[Var]) -> Self {
        MonomialOrder {
            kind: OrderKind::GrevLex,
            vars: vars.to_vec(),
        }
    }

    pub fn lex(vars: &[Var]) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            vars: vars.to_vec(),
        }
    }

    pub fn block(elim: &[Var], rest: &[Var]) -> Self {
        let mut vars = elim.to_vec();
        vars.extend_from_slice(rest);
        MonomialOrder {
            kind: OrderKind::Block { elim: elim.len() },
            vars,
        }
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// Sort key: lexicographic comparison of keys is the monomial order.
    /// Keys are additive in the exponents.
    fn key(&self, m: &Monomial) -> Key {
        let mut k = [0i32; NVARS + 2];
        let e = |v: &Var| m.0[v.index()] as i32;
        match self.kind {
            OrderKind::GrevLex => {
                grevlex_key(&self.vars, e, &mut k, 0);
            }
            OrderKind::Lex => {
                for (slot, v) in k.iter_mut().zip(&self.vars) {
                    *slot = e(v);
                }
            }
            OrderKind::Block { elim } => {
                let next = grevlex_key(&self.vars[..elim], e, &mut k, 0);
                grevlex_key(&self.vars[elim..], e, &mut k, next);
            }
        }
        k
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    fn covers(&self, p: &Polynomial) -> bool {
        p.uses_only(&self.vars)
    }
}

fn grevlex_key(vars: &[Var], e: impl Fn(&Var) -> i32, k: &mut Key, start: usize) -> usize {
    k[start] = vars.iter().map(&e).sum();
    for (i, v) in vars.iter().rev().enumerate() {
        k[start + 1 + i] = -e(v);
    }
    start + 1 + vars.len()
}

fn add_keys(a: &Key, b: &Key) -> Key {
    let mut out = *a;
    for (o, x) in out.iter_mut().zip(b.iter()) {
        *o += x;
    }
    out
}

#[derive(Clone, Debug)]
struct Term {
    key: Key,
    mono: Monomial,
    coeff: BigInt,
}

/// Integer polynomial, terms ascending (leading term last).
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<Term>,
    sugar: u32,
}

impl GPoly {
    fn from_poly(p: &Polynomial, ord: &MonomialOrder) -> GPoly {
        let prim = p.primitive();
        let mut terms: Vec<Term> = prim
            .terms()
            .map(|(m, c)| Term {
                key: ord.key(m),
                mono: *m,
                coeff: c.numer().clone(),
            })
            .collect();
        terms.sort_by_key(|a| a.key);
        GPoly {
            sugar: p.total_degree(),
            terms,
        }
    }

    fn to_poly(&self) -> Polynomial {
        let lc = Rational::from_integer(self.lead().coeff.clone());
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|t| (t.mono, Rational::from_integer(t.coeff.clone()) / &lc)),
        )
    }

    fn lead(&self) -> &Term {
        self.terms.last().expect("nonzero polynomial")
    }
}

/// `a * p - b * m * q` for ascending term lists.
fn lin_comb(a: &BigInt, p: &[Term], b: &BigInt, m: &Monomial, mkey: &Key, q: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + q.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |t: &Term| Term {
        key: add_keys(&t.key, mkey),
        mono: t.mono.mul(m),
        coeff: -(b * &t.coeff),
    };
    while i < p.len() || j < q.len() {
        if j == q.len() {
            out.push(Term {
                key: p[i].key,
                mono: p[i].mono,
                coeff: a * &p[i].coeff,
            });
            i += 1;
            continue;
        }
        let qt = shifted(&q[j]);
        if i == p.len() {
            out.push(qt);
            j += 1;
            continue;
        }
        match p[i].key.cmp(&qt.key) {
            Ordering::Less => {
                out.push(Term {
                    key: p[i].key,
                    mono: p[i].mono,
                    coeff: a * &p[i].coeff,
                });
                i += 1;
            }
            Ordering::Greater => {
                out.push(qt);
                j += 1;
            }
            Ordering::Equal => {
                let c = a * &p[i].coeff + qt.coeff;
                if !c.is_zero() {
                    out.push(Term {
                        key: p[i].key,
                        mono: p[i].mono,
                        coeff: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn content(terms: &[Term]) -> BigInt {
    let mut g = BigInt::zero();
    for t in terms {
        g = g.gcd(&t.coeff);
        if g.is_one() {
            break;
        }
    }
    g
}

fn make_primitive(terms: &mut [Term]) {
    if terms.is_empty() {
        return;
    }
    let mut g = content(terms);
    if terms.last().unwrap().coeff.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for t in terms.iter_mut() {
            t.coeff /= &g;
        }
    }
}

/// Reduces `f` modulo `basis`. With `full == false` only the head is
/// reduced. The result is primitive with a positive leading coefficient.
fn reduce(f: Vec<Term>, basis: &[&GPoly], full: bool) -> Vec<Term> {
    let mut p = f;
    let mut rem_desc: Vec<Term> = Vec::new();
    let mut steps = 0usize;
    while let Some(head) = p.last() {
        let divisor = basis.iter().find(|g| g.lead().mono.divides(&head.mono));
        match divisor {
            Some(g) => {
                let gl = g.lead();
                let common = gl.coeff.gcd(&head.coeff);
                let fa = &gl.coeff / &common;
                let fb = &head.coeff / &common;
                let m = gl.mono.quotient_of(&head.mono);
                let mkey = diff_key(&head.key, &gl.key);
                let n = p.len();
                let q = &g.terms[..g.terms.len() - 1];
                p = lin_comb(&fa, &p[..n - 1], &fb, &m, &mkey, q);
                if !fa.is_one() {
                    for t in rem_desc.iter_mut() {
                        t.coeff *= &fa;
                    }
                }
                steps += 1;
                if steps.is_multiple_of(16) {
                    let g = content(&p).gcd(&content(&rem_desc));
                    if !g.is_zero() && !g.is_one() {
                        for t in p.iter_mut().chain(rem_desc.iter_mut()) {
                            t.coeff /= &g;
                        }
                    }
                }
            }
            None => {
                if !full {
                    break;
                }
                rem_desc.push(p.pop().unwrap());
            }
        }
    }
    rem_desc.reverse();
    let mut out = p;
    out.extend(rem_desc);
    make_primitive(&mut out);
    out
}

/// A generating set of an ideal together with the order it refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    is_groebner: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }
}

impl IdealBasis {
    pub fn new(generators: Vec<Polynomial>, order: MonomialOrder) -> Self {
        IdealBasis {
            generators,
            order,
            is_groebner: false,
        }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_groebner(&self) -> bool {
        self.is_groebner
    }

    /// Leading monomials of a Groebner basis (the staircase corners).
    pub fn staircase(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.terms().map(|(m, _)| *m).max_by(|a, b| self.order.cmp(a, b)))
            .collect()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.iter().all(Polynomial::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, Error> {
        normal_form(f, self)
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, Error> {
        Ok(normal_form(f, self)?.is_zero())
    }

    pub fn colength(&self) -> Result<Colength, Error> {
        colength(self)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    sugar: u32,
    lcm_key: Key,
    i: usize,
    j: usize,
}

fn buchberger(gens: &[Polynomial], ord: &MonomialOrder) -> Vec<GPoly> {
    let mut basis: Vec<GPoly> = Vec::new();
    let mut queue: BTreeSet<Pair> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |h: GPoly, basis: &mut Vec<GPoly>, queue: &mut BTreeSet<Pair>, pending: &mut HashSet<(usize, usize)>| {
        let n = basis.len();
        let hl = h.lead().clone();
        for (i, g) in basis.iter().enumerate() {
            let gl = g.lead();
            if gl.mono.is_coprime(&hl.mono) {
                continue;
            }
            let lcm = gl.mono.lcm(&hl.mono);
            let sugar = (g.sugar + lcm.degree() - gl.mono.degree()).max(h.sugar + lcm.degree() - hl.mono.degree());
            queue.insert(Pair {
                sugar,
                lcm_key: ord.key(&lcm),
                i,
                j: n,
            });
            pending.insert((i, n));
        }
        basis.push(h);
    };

    for g in gens.iter().filter(|g| !g.is_zero()) {
        let h = GPoly::from_poly(g, ord);
        add(h, &mut basis, &mut queue, &mut pending);
    }

    while let Some(pair) = queue.pop_first() {
        pending.remove(&(pair.i, pair.j));
        let lcm = basis[pair.i].lead().mono.lcm(&basis[pair.j].lead().mono);
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k].lead().mono.divides(&lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }
        let s = spoly(&basis[pair.i], &basis[pair.j], ord);
        if s.is_empty() {
            continue;
        }
        let refs: Vec<&GPoly> = basis.iter().collect();
        let r = reduce(s, &refs, true);
        if r.is_empty() {
            continue;
        }
        let h = GPoly {
            terms: r,
            sugar: pair.sugar,
        };
        add(h, &mut basis, &mut queue, &mut pending);
    }

    // minimalize
    let mut keep: Vec<GPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let gm = g.lead().mono;
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, h)| j != i && h.lead().mono.divides(&gm) && (h.lead().mono != gm || j < i));
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<&GPoly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g)
            .collect();
        let r = reduce(keep[i].terms.clone(), &others, true);
        reduced.push(GPoly {
            terms: r,
            sugar: keep[i].sugar,
        });
    }
    reduced.sort_by_key(|a| a.lead().key);
    reduced
}

fn spoly(f: &GPoly, g: &GPoly, ord: &MonomialOrder) -> Vec<Term> {
    let (fl, gl) = (f.lead(), g.lead());
    let lcm = fl.mono.lcm(&gl.mono);
    let lcm_key = ord.key(&lcm);
    let common = fl.coeff.gcd(&gl.coeff);
    let a = &gl.coeff / &common;
    let b = &fl.coeff / &common;
    let mf = fl.mono.quotient_of(&lcm);
    let mg = gl.mono.quotient_of(&lcm);
    let f_tail: Vec<Term> = f.terms[..f.terms.len() - 1]
        .iter()
        .map(|t| Term {
            key: add_keys(&t.key, &diff_key(&lcm_key, &fl.key)),
            mono: t.mono.mul(&mf),
            coeff: t.coeff.clone(),
        })
        .collect();
    let mut out = lin_comb(
        &a,
        &f_tail,
        &b,
        &mg,
        &diff_key(&lcm_key, &gl.key),
        &g.terms[..g.terms.len() - 1],
    );
    make_primitive(&mut out);
    out
}

fn diff_key(a: &Key, b: &Key) -> Key {
    let mut out = *a;
    for (o, x) in out.iter_mut().zip(b.iter()) {
        *o -= x;
    }
    out
}

/// Reduced Groebner basis of `gens` with respect to `order`. Every
/// variable occurring in `gens` must belong to the order.
pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder) -> IdealBasis {
    for g in gens {
        assert!(
            order.covers(g),
            "polynomial {g} uses variables outside the order {:?}",
            order.vars
        );
    }
    let gb = buchberger(gens, order);
    IdealBasis {
        generators: gb.iter().map(GPoly::to_poly).collect(),
        order: order.clone(),
        is_groebner: true,
    }
}

/// Unique remainder of `f` modulo a Groebner basis.
pub fn normal_form(f: &Polynomial, basis: &IdealBasis) -> Result<Polynomial, Error> {
    if !basis.is_groebner {
        return Err(Error::NotGroebner);
    }
    let ord = &basis.order;
    let divisors: Vec<(Monomial, Polynomial)> = basis
        .generators
        .iter()
        .map(|g| {
            let lm = g
                .terms()
                .map(|(m, _)| *m)
                .max_by(|a, b| ord.cmp(a, b))
                .expect("nonzero generator");
            let lc = g.coeff(&lm);
            (lm, g.scale(&lc.recip()))
        })
        .collect();
    let mut work: std::collections::BTreeMap<Key, (Monomial, Rational)> =
        f.terms().map(|(m, c)| (ord.key(m), (*m, c.clone()))).collect();
    let mut rem = Polynomial::zero();
    while let Some((_, (m, c))) = work.pop_last() {
        match divisors.iter().find(|(lm, _)| lm.divides(&m)) {
            Some((lm, g)) => {
                let q = lm.quotient_of(&m);
                for (gm, gc) in g.terms() {
                    if gm == lm {
                        continue;
                    }
                    let nm = gm.mul(&q);
                    let entry = work.entry(ord.key(&nm)).or_insert_with(|| (nm, Rational::zero()));
                    entry.1 -= &c * gc;
                    if entry.1.is_zero() {
                        work.remove(&ord.key(&nm));
                    }
                }
            }
            None => rem.add_term(m, c),
        }
    }
    Ok(rem)
}

/// S-polynomial of two polynomials with respect to `order` (rational, with
/// monic leading terms).
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let lead = |p: &Polynomial| {
        let m = p
            .terms()
            .map(|(m, _)| *m)
            .max_by(|a, b| order.cmp(a, b))
            .expect("nonzero polynomial");
        (m, p.coeff(&m))
    };
    let (fm, fc) = lead(f);
    let (gm, gc) = lead(g);
    let lcm = fm.lcm(&gm);
    let a = f.mul_monomial(&fm.quotient_of(&lcm)).scale(&fc.recip());
    let b = g.mul_monomial(&gm.quotient_of(&lcm)).scale(&gc.recip());
    &a - &b
}

/// Checks Buchberger's criterion directly: every S-polynomial of the
/// generators reduces to zero.
pub fn satisfies_buchberger_criterion(basis: &IdealBasis) -> bool {
    let check = IdealBasis {
        generators: basis.generators.clone(),
        order: basis.order.clone(),
        is_groebner: true,
    };
    let gens = &basis.generators;
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = s_polynomial(&gens[i], &gens[j], &basis.order);
            if !normal_form(&s, &check).unwrap().is_zero() {
                return false;
            }
        }
    }
    true
}

/// Dimension of `R / I` over the rationals, where `R` is the polynomial
/// ring in the order's variables.
pub fn colength(basis: &IdealBasis) -> Result<Colength, Error> {
    if !basis.is_groebner {
        return Err(Error::NotGroebner);
    }
    if basis.is_unit() {
        return Ok(Colength::Finite(0));
    }
    let vars = basis.order.vars.clone();
    let stairs = basis.staircase();
    let mut bounds = Vec::with_capacity(vars.len());
    for v in &vars {
        let pure = stairs
            .iter()
            .filter(|m| m.vars().all(|w| w == *v))
            .map(|m| m.exp(*v))
            .filter(|&e| e > 0)
            .min();
        match pure {
            Some(e) => bounds.push(e),
            None => return Ok(Colength::Infinite),
        }
    }
    let mut count = 0u64;
    let mut exps = vec![0u16; vars.len()];
    loop {
        let mut m = Monomial::one();
        for (v, e) in vars.iter().zip(&exps) {
            m.0[v.index()] = *e;
        }
        if !stairs.iter().any(|s| s.divides(&m)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == vars.len() {
                return Ok(Colength::Finite(count));
            }
            exps[i] += 1;
            if exps[i] < bounds[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

fn free_aux(polys: &[&Polynomial]) -> Var {
    Var::AUX
        .into_iter()
        .find(|a| polys.iter().all(|p| p.degree_in(*a) == 0))
        .expect("an auxiliary variable is free")
}

fn saturate_by_element(ideal: &IdealBasis, h: &Polynomial) -> IdealBasis {
    let mut all: Vec<&Polynomial> = ideal.generators.iter().collect();
    all.push(h);
    let tau = free_aux(&all);
    let mut gens = ideal.generators.clone();
    gens.push(&Polynomial::one() - &(&Polynomial::var(tau) * h));
    let block = MonomialOrder::block(&[tau], &ideal.order.vars);
    let gb = groebner_basis(&gens, &block);
    let kept: Vec<Polynomial> = gb.generators.into_iter().filter(|g| g.degree_in(tau) == 0).collect();
    groebner_basis(&kept, &ideal.order)
}

/// `I ∩ J` by eliminating an auxiliary variable from `y I + (1 - y) J`.
pub fn intersect(a: &IdealBasis, b: &IdealBasis) -> IdealBasis {
    if a.is_zero_ideal() || b.is_unit() {
        return groebner_basis(&a.generators, &a.order);
    }
    if b.is_zero_ideal() || a.is_unit() {
        return groebner_basis(&b.generators, &a.order);
    }
    let all: Vec<&Polynomial> = a.generators.iter().chain(&b.generators).collect();
    let y = free_aux(&all);
    let yv = Polynomial::var(y);
    let one_minus = &Polynomial::one() - &yv;
    let mut gens: Vec<Polynomial> = a.generators.iter().map(|f| &yv * f).collect();
    gens.extend(b.generators.iter().map(|g| &one_minus * g));
    let block = MonomialOrder::block(&[y], &a.order.vars);
    let gb = groebner_basis(&gens, &block);
    let kept: Vec<Polynomial> = gb.generators.into_iter().filter(|g| g.degree_in(y) == 0).collect();
    groebner_basis(&kept, &a.order)
}

/// Saturation `I : <J>^∞`, computed element-wise through `1 - τ h` and
/// intersected over the generators of `J`.
pub fn colon_saturate(ideal: &IdealBasis, by: &[Polynomial]) -> IdealBasis {
    let by: Vec<&Polynomial> = by.iter().filter(|h| !h.is_zero()).collect();
    if by.is_empty() {
        return groebner_basis(&[Polynomial::one()], &ideal.order);
    }
    if by.iter().any(|h| h.is_constant()) {
        return groebner_basis(&ideal.generators, &ideal.order);
    }
    let mut acc: Option<IdealBasis> = None;
    for h in by {
        let part = saturate_by_element(ideal, h);
        acc = Some(match acc {
            None => part,
            Some(prev) => {
                if prev.is_unit() {
                    part
                } else if part.is_unit() {
                    prev
                } else {
                    intersect(&prev, &part)
                }
            }
        });
    }
    acc.unwrap()
}

/// Elimination ideal `<gens> ∩ Q[remaining variables]` as a reduced
/// Groebner basis in grevlex over the remaining variables.
pub fn eliminate(gens: &[Polynomial], drop_vars: &[Var]) -> IdealBasis {
    let mut used: BTreeSet<Var> = BTreeSet::new();
    for g in gens {
        used.extend(g.vars());
    }
    let rest: Vec<Var> = used.into_iter().filter(|v| !drop_vars.contains(v)).collect();
    let order = MonomialOrder::block(drop_vars, &rest);
    let gb = groebner_basis(gens, &order);
    let kept: Vec<Polynomial> = gb
        .generators
        .into_iter()
        .filter(|g| drop_vars.iter().all(|v| g.degree_in(*v) == 0))
        .collect();
    IdealBasis {
        generators: kept,
        order: MonomialOrder::grevlex(&rest),
        is_groebner: true,
    }
}

/// Re-expresses a basis in another order over the same variables.
pub fn change_order(basis: &IdealBasis, order: &MonomialOrder) -> IdealBasis {
    groebner_basis(&basis.generators, order)
}
