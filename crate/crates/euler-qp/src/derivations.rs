//! Double derivations, the gauge element, noncommutative polyvectors and
//! the linear map sending a polyvector to an n-bracket.
//!
//! A double derivation is stored by its values on generators; the bimodule
//! decorations `a . d . b` (with `(a d b)(x) = d(x)' b (x) a d(x)''`) are
//! absorbed eagerly into the value table, so a bivector term is just a pair
//! of decorated derivations and the degree-2 bracket is a direct two-term
//! evaluation.

use crate::algebra::{rat, El, GenId, QuiverAlgebra, Rat, VertexId};
use crate::brackets::DoubleBracket;
use crate::error::Error;
use crate::gamma::Gamma;
use crate::tensor::{T2, T3};
use num::One;
use std::collections::BTreeMap;

/// A double derivation, tabulated on generators. Extends to words by the
/// Leibniz rule, though the polyvector brackets below only ever evaluate on
/// generators.
#[derive(Clone, Debug, Default)]
pub struct DoubleDerivation {
    pub values: BTreeMap<GenId, T2>,
}

impl DoubleDerivation {
    /// The coordinate derivation `d/dg`: sends `g` to
    /// `e_{h(g)} (x) e_{t(g)}` and every other generator to zero.
    pub fn partial(alg: &QuiverAlgebra, g: GenId) -> Self {
        let mut values = BTreeMap::new();
        values.insert(
            g,
            T2::of(
                &El::idem(alg.gen_head(g)),
                &El::idem(alg.gen_tail(g)),
            ),
        );
        DoubleDerivation { values }
    }

    /// The component `E_s = e_s E e_s` of the gauge element
    /// `E: x -> x (x) 1 - 1 (x) x`: sends a generator `g` to
    /// `[t(g)=s] g (x) e_s - [h(g)=s] e_s (x) g`.
    pub fn gauge_at(alg: &QuiverAlgebra, s: VertexId, gens: &[GenId]) -> Self {
        let es = El::idem(s);
        let mut values = BTreeMap::new();
        for &g in gens {
            let mut v = T2::zero();
            if alg.gen_tail(g) == s {
                v = v.add(&T2::of(&El::generator(g), &es));
            }
            if alg.gen_head(g) == s {
                v = v.sub(&T2::of(&es, &El::generator(g)));
            }
            if !v.is_zero() {
                values.insert(g, v);
            }
        }
        DoubleDerivation { values }
    }

    pub fn value(&self, g: GenId) -> T2 {
        self.values.get(&g).cloned().unwrap_or_default()
    }

    /// Absorb the bimodule action `left . self . right` into the table:
    /// values become `d(x)' right (x) left d(x)''`.
    pub fn decorate(&self, alg: &QuiverAlgebra, left: &El, right: &El) -> Self {
        DoubleDerivation {
            values: self
                .values
                .iter()
                .map(|(&g, t)| (g, t.inner(alg, left, right)))
                .filter(|(_, t)| !t.is_zero())
                .collect(),
        }
    }
}

/// A homogeneous noncommutative polyvector: a sum of products of decorated
/// double derivations, all of the same degree.
#[derive(Clone, Debug, Default)]
pub struct PolyVector {
    pub terms: Vec<(Vec<DoubleDerivation>, Rat)>,
}

impl PolyVector {
    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|(ds, _)| ds.len())
    }

    pub fn push(&mut self, ds: Vec<DoubleDerivation>, c: Rat) {
        if let Some(d) = self.degree() {
            assert_eq!(d, ds.len(), "mixed-degree polyvector");
        }
        self.terms.push((ds, c));
    }
}

/// The value of a bracket produced by [`mu`].
pub enum NBracketValue {
    Two(T2),
    Three(T3),
}

/// The alternating-sum bracket of a polyvector, evaluated on generators.
/// Degree 2 is the bivector bracket
/// `<<x,y>>_{d1 d2} = d2(y)' d1(x)'' (x) d1(x)' d2(y)'' - d1(y)' d2(x)'' (x) d2(x)' d1(y)''`;
/// degree 3 is the cyclic three-term sum. Other degrees are unsupported.
pub fn mu(
    alg: &QuiverAlgebra,
    q: &PolyVector,
    args: &[GenId],
) -> Result<NBracketValue, Error> {
    match args.len() {
        2 => {
            let mut out = T2::zero();
            for (ds, c) in &q.terms {
                if ds.len() != 2 {
                    return Err(Error::UnsupportedDegree(ds.len()));
                }
                out = out.add(&mu2_term(alg, &ds[0], &ds[1], args[0], args[1]).scale(c));
            }
            Ok(NBracketValue::Two(out))
        }
        3 => {
            let mut out = T3::zero();
            for (ds, c) in &q.terms {
                if ds.len() != 3 {
                    return Err(Error::UnsupportedDegree(ds.len()));
                }
                let f1 = mu3_chain(alg, ds, args[0], args[1], args[2]);
                let f2 = mu3_chain(alg, ds, args[1], args[2], args[0]).tau123();
                let f3 = mu3_chain(alg, ds, args[2], args[0], args[1]).tau132();
                out = out.add(&f1.add(&f2).add(&f3).scale(c));
            }
            Ok(NBracketValue::Three(out))
        }
        d => Err(Error::UnsupportedDegree(d)),
    }
}

/// `d2(y)' d1(x)'' (x) d1(x)' d2(y)'' - (x <-> y, slots swapped)`.
fn mu2_term(
    alg: &QuiverAlgebra,
    d1: &DoubleDerivation,
    d2: &DoubleDerivation,
    x: GenId,
    y: GenId,
) -> T2 {
    let first = chain2(alg, &d1.value(x), &d2.value(y));
    let second = chain2(alg, &d1.value(y), &d2.value(x)).swap();
    first.sub(&second)
}

/// For `p = sum u1 (x) v1` and `q = sum u2 (x) v2`, form
/// `sum u2 v1 (x) u1 v2`.
fn chain2(alg: &QuiverAlgebra, p: &T2, q: &T2) -> T2 {
    let mut out = T2::zero();
    for ((u1, v1), c1) in &p.terms {
        for ((u2, v2), c2) in &q.terms {
            let Some(s1) = alg.mul_words(u2, v1) else {
                continue;
            };
            let Some(s2) = alg.mul_words(u1, v2) else {
                continue;
            };
            out.add_term((s1, s2), c1 * c2);
        }
    }
    out
}

/// `d3(z)' d1(x)'' (x) d1(x)' d2(y)'' (x) d2(y)' d3(z)''`.
fn mu3_chain(
    alg: &QuiverAlgebra,
    ds: &[DoubleDerivation],
    x: GenId,
    y: GenId,
    z: GenId,
) -> T3 {
    let (p, q, r) = (ds[0].value(x), ds[1].value(y), ds[2].value(z));
    let mut out = T3::zero();
    for ((u1, v1), c1) in &p.terms {
        for ((u2, v2), c2) in &q.terms {
            let Some(s2) = alg.mul_words(u1, v2) else {
                continue;
            };
            for ((u3, v3), c3) in &r.terms {
                let Some(s1) = alg.mul_words(u3, v1) else {
                    continue;
                };
                let Some(s3) = alg.mul_words(u2, v3) else {
                    continue;
                };
                out.add_term((s1, s2.clone(), s3), c1 * c2 * c3);
            }
        }
    }
    out
}

/// `sum_s E_s^3` as a degree-3 polyvector; `mu` of it divided by 12 is the
/// closed-form quasi-Poisson comparison bracket.
pub fn gauge_cube(alg: &QuiverAlgebra, gens: &[GenId]) -> PolyVector {
    let mut q = PolyVector::default();
    for s in 0..alg.n_vertices() {
        let e = DoubleDerivation::gauge_at(alg, s as VertexId, gens);
        q.push(vec![e.clone(), e.clone(), e], Rat::one());
    }
    q
}

/// The noncommutative bivector inducing the arrow-table double bracket:
/// sign-split quadratic terms in the `a`'s and `b`'s, mixed terms weighted
/// by `sgn(j - i)`, a subdiagonal correction, and the diagonal terms with
/// their constant part.
pub fn build_pn(g: &Gamma) -> PolyVector {
    let alg = g.alg();
    let n = g.n;
    let one = El::one(alg);
    let half = rat(1, 2);
    let da = |i: usize| DoubleDerivation::partial(alg, g.a_id(i));
    let db = |i: usize| DoubleDerivation::partial(alg, g.b_id(i));
    let mut p = PolyVector::default();
    // (1/2) sum_{i>j} [ da_i a_i da_j a_j + da_i a_j da_j a_i ]  and the b-copy
    for i in 1..=n {
        for j in 1..i {
            p.push(
                vec![
                    da(i).decorate(alg, &one, &g.a(i)),
                    da(j).decorate(alg, &one, &g.a(j)),
                ],
                half.clone(),
            );
            p.push(
                vec![
                    da(i).decorate(alg, &one, &g.a(j)),
                    da(j).decorate(alg, &one, &g.a(i)),
                ],
                half.clone(),
            );
            p.push(
                vec![
                    db(i).decorate(alg, &one, &g.b(i)),
                    db(j).decorate(alg, &one, &g.b(j)),
                ],
                half.clone(),
            );
            p.push(
                vec![
                    db(i).decorate(alg, &one, &g.b(j)),
                    db(j).decorate(alg, &one, &g.b(i)),
                ],
                half.clone(),
            );
        }
    }
    // (1/2) sum_{i != j} sgn(j-i) [ da_i a_i . b_j db_j + a_i da_i . db_j b_j ]
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let w = if j > i { half.clone() } else { -half.clone() };
            p.push(
                vec![
                    da(i).decorate(alg, &one, &g.a(i)),
                    db(j).decorate(alg, &g.b(j), &one),
                ],
                w.clone(),
            );
            p.push(
                vec![
                    da(i).decorate(alg, &g.a(i), &one),
                    db(j).decorate(alg, &one, &g.b(j)),
                ],
                w,
            );
        }
    }
    // - sum_{i=2}^n da_i db_{i-1}
    for i in 2..=n {
        p.push(vec![da(i), db(i - 1)], rat(-1, 1));
    }
    // diagonal: (1/2) sum_i [ da_i a_i . b_i db_i + a_i da_i . db_i b_i ]
    //           + sum_i da_i db_i
    for i in 1..=n {
        p.push(
            vec![
                da(i).decorate(alg, &one, &g.a(i)),
                db(i).decorate(alg, &g.b(i), &one),
            ],
            half.clone(),
        );
        p.push(
            vec![
                da(i).decorate(alg, &g.a(i), &one),
                db(i).decorate(alg, &one, &g.b(i)),
            ],
            half.clone(),
        );
        p.push(vec![da(i), db(i)], Rat::one());
    }
    p
}

/// Van den Bergh's one-pair bivector
/// `(1/2)(1 + ba) da db - (1/2)(1 + ab) db da`; induces the same double
/// bracket as `build_pn` at `n = 1` even though the polyvectors differ.
pub fn build_p_vdb(g: &Gamma) -> PolyVector {
    assert_eq!(g.n, 1);
    let alg = g.alg();
    let one = El::one(alg);
    let da = DoubleDerivation::partial(alg, g.a_id(1));
    let db = DoubleDerivation::partial(alg, g.b_id(1));
    let ba1 = one.add(&g.b(1).mul(&g.a(1), alg));
    let ab1 = one.add(&g.a(1).mul(&g.b(1), alg));
    let mut p = PolyVector::default();
    p.push(vec![da.decorate(alg, &ba1, &one), db.clone()], rat(1, 2));
    p.push(vec![db.decorate(alg, &ab1, &one), da], rat(-1, 2));
    p
}

/// The double bracket induced by a degree-2 polyvector, tabulated on all
/// generator pairs.
pub fn bracket_from_bivector(
    alg: &QuiverAlgebra,
    p: &PolyVector,
    gens: &[GenId],
) -> Result<DoubleBracket, Error> {
    let mut out = DoubleBracket::new();
    for &x in gens {
        for &y in gens {
            match mu(alg, p, &[x, y])? {
                NBracketValue::Two(t) => out.set(x, y, t),
                NBracketValue::Three(_) => unreachable!(),
            }
        }
    }
    Ok(out)
}
