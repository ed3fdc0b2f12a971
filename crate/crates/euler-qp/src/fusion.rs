//! Fusion of Hamiltonian double quasi-Poisson structures: identifying two
//! orthogonal idempotents adds a universal correction to the double bracket
//! and multiplies the affected moment-map components.
//!
//! Generators are classified per fusion step `e_j -> e_i` by where their
//! endpoints sit: neither at `j` (first type), head at `j` (second), tail
//! at `j` (third), loop at `j` (fourth). Matrix units are never
//! materialised: the correction table is applied directly to the
//! relabelled generators, which produces the same fused algebra as the
//! amalgamated-product construction.

use crate::algebra::{rat, El, GenId, QuiverAlgebra, QuiverMap, Rat, VertexId, Word};
use crate::brackets::DoubleBracket;
use crate::error::Error;
use crate::tensor::T2;
use num::One;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GenType {
    First,
    Second,
    Third,
    Fourth,
}

pub fn classify(alg: &QuiverAlgebra, g: GenId, j: VertexId) -> GenType {
    match (alg.gen_head(g) == j, alg.gen_tail(g) == j) {
        (false, false) => GenType::First,
        (true, false) => GenType::Second,
        (false, true) => GenType::Third,
        (true, true) => GenType::Fourth,
    }
}

/// An algebra mid-fusion: presentation, bracket table and the moment-map
/// components by vertex.
#[derive(Clone, Debug)]
pub struct FusionContext {
    pub alg: QuiverAlgebra,
    pub db: DoubleBracket,
    pub phi: BTreeMap<VertexId, El>,
    pub n: usize,
}

/// `n` disjoint tagged copies of the one-pair structure: generators
/// `c_l: 1_l -> 2_l` and `d_l: 2_l -> 1_l`, idempotents `e_{1,l}, e_{2,l}`
/// (copy 1 provides the surviving `e_1, e_2`), with `(c_l, d_l)` and
/// `(d_l, c_l)` inverted. Generator ids are `c_l -> l-1`, `d_l -> n+l-1`.
pub fn separated(n: usize) -> Result<FusionContext, Error> {
    assert!(n >= 1);
    // vertices: 0 = e_1, 1 = e_2, then (2l-2, 2l-1) for copy l >= 2
    let mut names = vec!["1".to_string(), "2".to_string()];
    for l in 2..=n {
        names.push(format!("1_{l}"));
        names.push(format!("2_{l}"));
    }
    let mut alg = QuiverAlgebra::new(names);
    let vx = |l: usize, side: usize| -> VertexId {
        if l == 1 {
            (side - 1) as VertexId
        } else {
            (2 * l - 4 + 2 + side - 1) as VertexId
        }
    };
    for l in 1..=n {
        alg.add_generator(format!("c{l}"), vx(l, 2), vx(l, 1));
    }
    for l in 1..=n {
        alg.add_generator(format!("d{l}"), vx(l, 1), vx(l, 2));
    }
    let c = |l: usize| El::generator((l - 1) as GenId);
    let d = |l: usize| El::generator((n + l - 1) as GenId);
    // invert (c_l, d_l) and (d_l, c_l)
    for l in 1..=n {
        let cd = El::idem(vx(l, 2)).add(&c(l).mul(&d(l), &alg));
        alg.add_inverse(format!("c{l}d{l}"), cd)?;
        let dc = El::idem(vx(l, 1)).add(&d(l).mul(&c(l), &alg));
        alg.add_inverse(format!("d{l}c{l}"), dc)?;
    }
    // separated double bracket: copies do not interact
    let mut db = DoubleBracket::new();
    for l in 1..=n {
        let e1l = El::idem(vx(l, 1));
        let e2l = El::idem(vx(l, 2));
        let cd = c(l).mul(&d(l), &alg);
        let dc = d(l).mul(&c(l), &alg);
        let cid = (l - 1) as GenId;
        let did = (n + l - 1) as GenId;
        let v = T2::of(&e1l, &e2l).add(
            &T2::of(&e1l, &cd)
                .add(&T2::of(&dc, &e2l))
                .scale(&rat(1, 2)),
        );
        db.set(cid, did, v.clone());
        db.set(did, cid, v.swap().neg());
    }
    // moment map components: e_{2,l} + c_l d_l at 2_l, its reversed-pair
    // inverse at 1_l
    let mut phi = BTreeMap::new();
    for l in 1..=n {
        let cd = El::idem(vx(l, 2)).add(&c(l).mul(&d(l), &alg));
        phi.insert(vx(l, 2), cd);
        phi.insert(vx(l, 1), El::inverse((2 * (l - 1) + 1) as u16));
    }
    Ok(FusionContext { alg, db, phi, n })
}

/// The correction added to `<<x, y>>` by fusing `e_j` onto `e_i`, for the
/// listed type order (first <= second <= third <= fourth); other orders go
/// through cyclic antisymmetry. `x`, `y` and the products are post-fusion.
fn fusion_row(
    alg: &QuiverAlgebra,
    ei: &El,
    x: &El,
    y: &El,
    tx: GenType,
    ty: GenType,
) -> T2 {
    use GenType::*;
    let half = rat(1, 2);
    match (tx, ty) {
        (First, First) | (Fourth, Fourth) => T2::zero(),
        (First, Second) => T2::of(ei, &x.mul(y, alg))
            .sub(&T2::of(&ei.mul(x, alg), y))
            .scale(&half),
        (First, Third) => T2::of(&y.mul(x, alg), ei)
            .sub(&T2::of(y, &x.mul(ei, alg)))
            .scale(&half),
        (First, Fourth) => T2::of(&y.mul(x, alg), ei)
            .add(&T2::of(ei, &x.mul(y, alg)))
            .sub(&T2::of(y, &x.mul(ei, alg)))
            .sub(&T2::of(&ei.mul(x, alg), y))
            .scale(&half),
        (Second, Second) => T2::of(ei, &x.mul(y, alg))
            .sub(&T2::of(&y.mul(x, alg), ei))
            .scale(&half),
        (Second, Third) => T2::of(x, &ei.mul(y, alg))
            .sub(&T2::of(y, &x.mul(ei, alg)))
            .scale(&half),
        (Second, Fourth) => T2::of(ei, &x.mul(y, alg))
            .sub(&T2::of(y, &x.mul(ei, alg)))
            .scale(&half),
        (Third, Third) => T2::of(&y.mul(x, alg), ei)
            .sub(&T2::of(ei, &x.mul(y, alg)))
            .scale(&half),
        (Third, Fourth) => T2::of(&y.mul(x, alg), ei)
            .sub(&T2::of(&ei.mul(x, alg), y))
            .scale(&half),
        _ => fusion_row(alg, ei, y, x, ty, tx).swap().neg(),
    }
}

/// Relabel vertex `j` to `i` across the presentation: generator endpoints,
/// inverse loops and their stored base elements.
fn relabel(alg: &QuiverAlgebra, j: VertexId, i: VertexId) -> (QuiverAlgebra, QuiverMap) {
    let map = QuiverMap {
        vertex_map: (0..alg.n_vertices() as VertexId)
            .map(|v| if v == j { i } else { v })
            .collect(),
        gen_map: (0..alg.gens.len() as GenId).collect(),
        inv_map: (0..alg.invs.len()).map(|k| Some(k as u16)).collect(),
    };
    let mut out = alg.clone();
    for g in &mut out.gens {
        if g.head == j {
            g.head = i;
        }
        if g.tail == j {
            g.tail = i;
        }
    }
    for v in &mut out.invs {
        if v.vertex == j {
            v.vertex = i;
        }
    }
    // base elements reference idempotents of the old presentation
    for k in 0..out.invs.len() {
        let base = alg.invs[k].base.map_syms(&map).expect("total map");
        out.invs[k].base = base;
    }
    (out, map)
}

fn relabel_t2(t: &T2, map: &QuiverMap) -> T2 {
    let mut out = T2::zero();
    for ((u, v), c) in &t.terms {
        let mu = El::from_word(u.clone(), Rat::one()).map_syms(map).unwrap();
        let mv = El::from_word(v.clone(), Rat::one()).map_syms(map).unwrap();
        out = out.add(&T2::of(&mu, &mv).scale(c));
    }
    out
}

/// One fusion step `e_j -> e_i`: relabel, then add the universal correction
/// for every ordered generator pair (classified pre-fusion). The moment-map
/// component at `i` becomes the ordered product with the image of the
/// component at `j`.
pub fn fuse_step(ctx: &FusionContext, j: VertexId, i: VertexId) -> Result<FusionContext, Error> {
    if i == j {
        return Err(Error::BadFusion);
    }
    let gens: Vec<GenId> = (0..ctx.alg.gens.len() as GenId).collect();
    let types: Vec<GenType> = gens.iter().map(|&g| classify(&ctx.alg, g, j)).collect();
    let (new_alg, map) = relabel(&ctx.alg, j, i);
    let ei = El::idem(i);
    let mut db = DoubleBracket::new();
    for &x in &gens {
        for &y in &gens {
            let old = relabel_t2(&ctx.db.get(x, y), &map);
            let add = fusion_row(
                &new_alg,
                &ei,
                &El::generator(x),
                &El::generator(y),
                types[x as usize],
                types[y as usize],
            );
            db.set(x, y, old.add(&add));
        }
    }
    // moment map: phi_i <- phi_i . phi_j, everything else just relabels
    let mut phi = BTreeMap::new();
    for (&s, comp) in &ctx.phi {
        if s == i || s == j {
            continue;
        }
        phi.insert(s, comp.map_syms(&map)?);
    }
    match (ctx.phi.get(&i), ctx.phi.get(&j)) {
        (Some(pi), Some(pj)) => {
            let prod = pi.map_syms(&map)?.mul(&pj.map_syms(&map)?, &new_alg);
            phi.insert(i, prod);
        }
        (Some(pi), None) => {
            phi.insert(i, pi.map_syms(&map)?);
        }
        (None, Some(pj)) => {
            phi.insert(i, pj.map_syms(&map)?);
        }
        (None, None) => {}
    }
    Ok(FusionContext {
        alg: new_alg,
        db,
        phi,
        n: ctx.n,
    })
}

/// Fuse `n` copies of the one-pair structure: for each `l = 2..n`, first
/// `e_{1,l} -> e_1`, then `e_{2,l} -> e_2`.
pub fn build_afus(n: usize) -> Result<FusionContext, Error> {
    let mut ctx = separated(n)?;
    for l in 2..=n {
        let v1l = (2 * l - 2) as VertexId;
        let v2l = (2 * l - 1) as VertexId;
        ctx = fuse_step(&ctx, v1l, 0)?;
        ctx = fuse_step(&ctx, v2l, 1)?;
    }
    Ok(ctx)
}

impl FusionContext {
    pub fn c_id(&self, l: usize) -> GenId {
        (l - 1) as GenId
    }

    pub fn d_id(&self, l: usize) -> GenId {
        (self.n + l - 1) as GenId
    }

    pub fn c(&self, l: usize) -> El {
        El::generator(self.c_id(l))
    }

    pub fn d(&self, l: usize) -> El {
        El::generator(self.d_id(l))
    }

    pub fn gens(&self) -> Vec<GenId> {
        (0..2 * self.n as u16).collect()
    }

    /// Drop orphaned copy vertices once everything lives on `{e_1, e_2}`;
    /// words are unchanged, only the vertex list shrinks.
    pub fn compact(&self) -> Result<FusionContext, Error> {
        for g in &self.alg.gens {
            if g.head > 1 || g.tail > 1 {
                return Err(Error::BadFusion);
            }
        }
        let mut alg = self.alg.clone();
        alg.vertex_names.truncate(2);
        Ok(FusionContext {
            alg,
            db: self.db.clone(),
            phi: self.phi.clone(),
            n: self.n,
        })
    }

    /// The closed-form fused table: the sign-split quadratic rows in the
    /// `c`'s and `d`'s, and mixed rows with a single constant on the
    /// diagonal and no subdiagonal correction.
    pub fn closed_form_table(&self) -> DoubleBracket {
        let alg = &self.alg;
        let n = self.n;
        let half = rat(1, 2);
        let e1 = El::idem(0);
        let e2 = El::idem(1);
        let mut db = DoubleBracket::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    let sign = if i < j { -half.clone() } else { half.clone() };
                    let sym = |x: &El, y: &El| T2::of(x, y).add(&T2::of(y, x)).scale(&sign);
                    db.set(self.c_id(i), self.c_id(j), sym(&self.c(i), &self.c(j)));
                    db.set(self.d_id(i), self.d_id(j), sym(&self.d(i), &self.d(j)));
                }
                let cd = self.c(i).mul(&self.d(j), alg);
                let dc = self.d(j).mul(&self.c(i), alg);
                let core = T2::of(&e1, &cd).add(&T2::of(&dc, &e2)).scale(&half);
                let val = match i.cmp(&j) {
                    std::cmp::Ordering::Less => core,
                    std::cmp::Ordering::Equal => core.add(&T2::of(&e1, &e2)),
                    std::cmp::Ordering::Greater => core.neg(),
                };
                db.set(self.c_id(i), self.d_id(j), val.clone());
                db.set(self.d_id(j), self.c_id(i), val.swap().neg());
            }
        }
        db
    }

    /// `(e_2 + c_1 d_1) ... (e_2 + c_n d_n)`, inverse-free.
    pub fn phi2_closed(&self) -> El {
        let mut out = El::idem(1);
        for l in 1..=self.n {
            let f = El::idem(1).add(&self.c(l).mul(&self.d(l), &self.alg));
            out = out.mul(&f, &self.alg);
        }
        out
    }

    /// `(e_1 + d_1 c_1)^{-1} ... (e_1 + d_n c_n)^{-1}` as a product of
    /// inverse symbols.
    pub fn phi1_closed(&self) -> El {
        let mut out = El::idem(0);
        for l in 1..=self.n {
            out = out.mul(&El::inverse((2 * (l - 1) + 1) as u16), &self.alg);
        }
        out
    }

    /// The reversed product `(e_1 + d_n c_n) ... (e_1 + d_1 c_1)`: the
    /// inverse-free element whose formal inverse is `phi1_closed`.
    pub fn phi1_cleared(&self) -> El {
        let mut out = El::idem(0);
        for l in (1..=self.n).rev() {
            let f = El::idem(0).add(&self.d(l).mul(&self.c(l), &self.alg));
            out = out.mul(&f, &self.alg);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{
        check_quasi_poisson, inverse_moment_map_residual, moment_map_residual,
    };

    #[test]
    fn one_copy_is_untouched() {
        let ctx = build_afus(1).unwrap();
        let sep = separated(1).unwrap();
        for &x in &ctx.gens() {
            for &y in &ctx.gens() {
                assert_eq!(ctx.db.get(x, y), sep.db.get(x, y));
            }
        }
    }

    #[test]
    fn fused_table_matches_the_closed_form() {
        for n in 2..=3 {
            let ctx = build_afus(n).unwrap();
            let expected = ctx.closed_form_table();
            for &x in &ctx.gens() {
                for &y in &ctx.gens() {
                    assert_eq!(
                        ctx.db.get(x, y),
                        expected.get(x, y),
                        "n = {n}, pair ({}, {})",
                        ctx.alg.gens[x as usize].name,
                        ctx.alg.gens[y as usize].name
                    );
                }
            }
        }
    }

    #[test]
    fn fused_moment_map_components() {
        let ctx = build_afus(2).unwrap();
        assert_eq!(ctx.phi.get(&1).unwrap(), &ctx.phi2_closed());
        assert_eq!(ctx.phi.get(&0).unwrap(), &ctx.phi1_closed());
    }

    #[test]
    fn fusing_with_unit_component_changes_nothing() {
        // a separated context where the j-side component is just e_j
        let mut ctx = separated(2).unwrap();
        let before = ctx.phi.get(&1).unwrap().clone();
        ctx.phi.insert(3, El::idem(3));
        let fused = fuse_step(&ctx, 3, 1).unwrap();
        assert_eq!(fused.phi.get(&1).unwrap(), &before);
    }

    #[test]
    fn fused_structure_is_quasi_poisson() {
        let ctx = build_afus(2).unwrap();
        let failures = check_quasi_poisson(&ctx.db, &ctx.alg, &ctx.gens());
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn fused_moment_map_is_multiplicative() {
        let ctx = build_afus(2).unwrap();
        let phi2 = ctx.phi2_closed();
        for &x in &ctx.gens() {
            let r = moment_map_residual(&ctx.db, &ctx.alg, &phi2, 1, &El::generator(x));
            assert!(r.is_zero(), "gen {x}");
        }
        // cleared inverse-free twin of the vertex-one component
        let cleared = ctx.phi1_cleared();
        for &x in &ctx.gens() {
            let r = inverse_moment_map_residual(&ctx.db, &ctx.alg, &cleared, 0, &El::generator(x));
            assert!(r.is_zero(), "gen {x}");
        }
    }

    #[test]
    fn opposite_fusion_order_gives_a_different_bracket() {
        // fusing e_1 onto e_{1,2} / e_2 onto e_{2,2} instead must change
        // the table on some generator pair (it is not an isomorphism of
        // the Hamiltonian structures)
        let sep = separated(2).unwrap();
        let a = fuse_step(&fuse_step(&sep, 2, 0).unwrap(), 3, 1).unwrap();
        let b = fuse_step(&fuse_step(&sep, 0, 2).unwrap(), 1, 3).unwrap();
        let differs = a
            .gens()
            .iter()
            .any(|&x| a.gens().iter().any(|&y| a.db.get(x, y) != b.db.get(x, y)));
        assert!(differs);
    }

    #[test]
    fn first_and_fourth_type_row() {
        // a crafted quiver with a loop at the surviving vertex and a loop
        // at the dying one: <<t, w>>_fus picks up all four corrections
        let mut alg = QuiverAlgebra::new(vec!["i".into(), "j".into()]);
        let t = alg.add_generator("t".into(), 0, 0);
        let w = alg.add_generator("w".into(), 1, 1);
        let ctx = FusionContext {
            alg,
            db: DoubleBracket::new(),
            phi: BTreeMap::new(),
            n: 1,
        };
        let fused = fuse_step(&ctx, 1, 0).unwrap();
        let te = El::generator(t);
        let we = El::generator(w);
        let ei = El::idem(0);
        let expected = T2::of(&we.mul(&te, &fused.alg), &ei)
            .add(&T2::of(&ei, &te.mul(&we, &fused.alg)))
            .sub(&T2::of(&we, &te))
            .sub(&T2::of(&te, &we))
            .scale(&rat(1, 2));
        assert_eq!(fused.db.get(t, w), expected);
        assert_eq!(fused.db.get(w, t), expected.swap().neg());
        // loops at the dying vertex stay mute among themselves
        assert!(fused.db.get(w, w).is_zero());
    }

    #[test]
    fn second_and_third_type_row() {
        // u: i -> j (second type), v: j -> i (third type); after fusing
        // j -> i both become loops at i and the correction absorbs the
        // idempotent typing to (1/2)(u (x) v - v (x) u)
        let mut alg = QuiverAlgebra::new(vec!["i".into(), "j".into()]);
        let u = alg.add_generator("u".into(), 1, 0);
        let v = alg.add_generator("v".into(), 0, 1);
        let ctx = FusionContext {
            alg,
            db: DoubleBracket::new(),
            phi: BTreeMap::new(),
            n: 1,
        };
        let fused = fuse_step(&ctx, 1, 0).unwrap();
        let ue = El::generator(u);
        let ve = El::generator(v);
        let expected = T2::of(&ue, &ve).sub(&T2::of(&ve, &ue)).scale(&rat(1, 2));
        assert_eq!(fused.db.get(u, v), expected);
        // and when the typing kills both products the correction is mute,
        // matching the summary rows for the pair of the step's own copy
        let sep = separated(2).unwrap();
        let step = fuse_step(&fuse_step(&sep, 2, 0).unwrap(), 3, 1).unwrap();
        assert_eq!(
            step.db.get(step.c_id(2), step.d_id(2)),
            sep.db.get(sep.c_id(2), sep.d_id(2)).terms.clone().into_iter().fold(
                T2::zero(),
                |mut acc, (w, c)| {
                    // relabelled copy idempotents
                    let map_word = |w: &Word| match w {
                        Word::Idem(2) => Word::Idem(0),
                        Word::Idem(3) => Word::Idem(1),
                        other => other.clone(),
                    };
                    acc.add_term((map_word(&w.0), map_word(&w.1)), c);
                    acc
                }
            ),
            "no fusion term lands on the step's own (c, d) pair"
        );
    }
}
