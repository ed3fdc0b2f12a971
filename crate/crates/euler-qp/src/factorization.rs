//! Factorisation after localisation: the change of variables
//! `a_l' = a_l + (a_1,...,b_{l-1})^{-1} (a_1,...,a_{l-1})`, the resulting
//! factorisation of the top continuants into second continuants in the
//! primed variables, and the identification with the fused algebra under
//! `a_l' -> c_l`, `b_l -> d_l`.
//!
//! Identities involving formal inverses have no symbolic normal form here;
//! they are checked through the representation oracle at exact rational
//! points. Where an identity clears to an inverse-free one (the recursion
//! steps behind the factorisation), the cleared twin is checked exactly.

use crate::algebra::{rat, El, GenId, Rat, Sym, Word};
use crate::brackets::DoubleBracket;
use crate::error::Error;
use crate::fusion::FusionContext;
use crate::gamma::Gamma;
use crate::rep::{is_zero_probabilistic, OracleConfig, OracleInput, Verdict};
use crate::tensor::T2;
use num::One;

/// Both printed forms of the primed generator `a_l'`:
/// the left form `a_l + (a_1,...,b_{l-1})^{-1} (a_1,...,a_{l-1})` and the
/// right form `a_l + (a_{l-1},...,a_1)(b_{l-1},...,a_1)^{-1}` (equal by the
/// commutation identity for adjacent continuants).
pub fn primed_a(g: &Gamma, l: usize) -> Result<(El, El), Error> {
    if l == 1 {
        return Ok((g.a(1), g.a(1)));
    }
    let alg = g.alg();
    let inv_ab = El::inverse(g.inv_a_id(l - 1).ok_or(Error::UnknownInverse)?);
    let left = g
        .a(l)
        .add(&inv_ab.mul(&g.cont(&g.seq_a(l - 1))?, alg));
    let inv_ba = El::inverse(g.inv_b_id(l - 1).ok_or(Error::UnknownInverse)?);
    let right = g
        .a(l)
        .add(&g.cont(&g.seq_a_desc(l - 1))?.mul(&inv_ba, alg));
    Ok((left, right))
}

/// All primed generators in left form.
pub fn primed_generators(g: &Gamma) -> Result<Vec<El>, Error> {
    (1..=g.n).map(|l| primed_a(g, l).map(|p| p.0)).collect()
}

/// A pending identity: zero iff it holds. `exact` residuals are inverse-free
/// and decidable in the free algebra; the rest go to the oracle.
pub enum Residual {
    El(String, El),
    T2(String, T2),
}

impl Residual {
    pub fn label(&self) -> &str {
        match self {
            Residual::El(l, _) => l,
            Residual::T2(l, _) => l,
        }
    }

    pub fn check(
        &self,
        g: &Gamma,
        cfg: &OracleConfig,
    ) -> Result<Verdict, Error> {
        match self {
            Residual::El(_, x) => {
                if !x.has_inverse_syms() {
                    return Ok(if x.is_zero() {
                        Verdict::Zero
                    } else {
                        Verdict::NonZero {
                            dims: vec![],
                            trial: 0,
                        }
                    });
                }
                is_zero_probabilistic(g.alg(), &OracleInput::El(x), cfg)
            }
            Residual::T2(_, t) => {
                if !t.has_inverse_syms() {
                    return Ok(if t.is_zero() {
                        Verdict::Zero
                    } else {
                        Verdict::NonZero {
                            dims: vec![],
                            trial: 0,
                        }
                    });
                }
                is_zero_probabilistic(g.alg(), &OracleInput::T2(t), cfg)
            }
        }
    }
}

/// Residuals of the two primed forms against each other, each `l`.
pub fn primed_form_residuals(g: &Gamma) -> Result<Vec<Residual>, Error> {
    let mut out = Vec::new();
    for l in 2..=g.n {
        let (left, right) = primed_a(g, l)?;
        out.push(Residual::El(
            format!("primed form agreement a{l}'"),
            left.sub(&right),
        ));
    }
    Ok(out)
}

/// Residuals of the continuant factorisation for each level `l`:
/// `(a_1,...,b_l) = (e_2 + a_1' b_1) ... (e_2 + a_l' b_l)` and the reversed
/// product for `(b_l,...,a_1)`, plus the cleared inverse-free recursion
/// steps behind them.
pub fn factorisation_residuals(g: &Gamma) -> Result<Vec<Residual>, Error> {
    let alg = g.alg();
    let primed = primed_generators(g)?;
    let mut out = Vec::new();
    for l in 1..=g.n {
        let mut fwd = g.e2();
        for (k, ap) in primed.iter().enumerate().take(l) {
            let factor = g.e2().add(&ap.mul(&g.b(k + 1), alg));
            fwd = fwd.mul(&factor, alg);
        }
        out.push(Residual::El(
            format!("factorisation (a1..b{l})"),
            g.cont(&g.seq_ab(l))?.sub(&fwd),
        ));
        let mut rev = g.e1();
        for (k, ap) in primed.iter().enumerate().take(l).rev() {
            let factor = g.e1().add(&g.b(k + 1).mul(ap, alg));
            rev = rev.mul(&factor, alg);
        }
        out.push(Residual::El(
            format!("factorisation (b{l}..a1)"),
            g.cont(&g.seq_ba_desc(l))?.sub(&rev),
        ));
    }
    // cleared recursion steps, exact in the free algebra:
    // (a1..b_l) = (a1..b_{l-1})(e2 + a_l b_l) + (a1..a_{l-1}) b_l
    // (b_l..a1) = (e1 + b_l a_l)(b_{l-1}..a1) + b_l (a_{l-1}..a1)
    for l in 2..=g.n {
        let ab_step = g
            .cont(&g.seq_ab(l - 1))?
            .mul(&g.e2().add(&g.a(l).mul(&g.b(l), alg)), alg)
            .add(&g.cont(&g.seq_a(l - 1))?.mul(&g.b(l), alg));
        out.push(Residual::El(
            format!("cleared step (a1..b{l})"),
            g.cont(&g.seq_ab(l))?.sub(&ab_step),
        ));
        let ba_step = g
            .e1()
            .add(&g.b(l).mul(&g.a(l), alg))
            .mul(&g.cont(&g.seq_ba_desc(l - 1))?, alg)
            .add(&g.b(l).mul(&g.cont(&g.seq_a_desc(l - 1))?, alg));
        out.push(Residual::El(
            format!("cleared step (b{l}..a1)"),
            g.cont(&g.seq_ba_desc(l))?.sub(&ba_step),
        ));
    }
    Ok(out)
}

/// The closed-form double bracket value for a pair of "alternative"
/// generators, with `x` the `a`-like family and `y` the `b`-like family:
/// sign-split quadratic rows, and mixed rows with one diagonal constant and
/// no subdiagonal correction.
pub fn alt_closed_value(
    alg: &crate::algebra::QuiverAlgebra,
    x: &[El],
    y: &[El],
    row: AltRow,
    i: usize,
    j: usize,
) -> T2 {
    let half = rat(1, 2);
    let e1 = El::idem(0);
    let e2 = El::idem(1);
    match row {
        AltRow::XX | AltRow::YY => {
            if i == j {
                return T2::zero();
            }
            let (p, q) = if row == AltRow::XX {
                (&x[i - 1], &x[j - 1])
            } else {
                (&y[i - 1], &y[j - 1])
            };
            let sign = if i < j { -half } else { half };
            T2::of(p, q).add(&T2::of(q, p)).scale(&sign)
        }
        AltRow::XY => {
            let xy = x[i - 1].mul(&y[j - 1], alg);
            let yx = y[j - 1].mul(&x[i - 1], alg);
            let core = T2::of(&e1, &xy).add(&T2::of(&yx, &e2)).scale(&half);
            match i.cmp(&j) {
                std::cmp::Ordering::Less => core,
                std::cmp::Ordering::Equal => core.add(&T2::of(&e1, &e2)),
                std::cmp::Ordering::Greater => core.neg(),
            }
        }
        AltRow::YX => alt_closed_value(alg, x, y, AltRow::XY, j, i).swap().neg(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum AltRow {
    XX,
    YY,
    XY,
    YX,
}

/// Residuals of the localised bracket on primed pairs against the printed
/// closed form, one per ordered generator pair.
pub fn alt_structure_residuals(g: &Gamma, db: &DoubleBracket) -> Result<Vec<Residual>, Error> {
    let alg = g.alg();
    let primed = primed_generators(g)?;
    let b: Vec<El> = (1..=g.n).map(|i| g.b(i)).collect();
    let mut out = Vec::new();
    for i in 1..=g.n {
        for j in 1..=g.n {
            let pairs = [
                (
                    format!("alt <<a{i}', a{j}'>>"),
                    db.eval(alg, &primed[i - 1], &primed[j - 1]),
                    alt_closed_value(alg, &primed, &b, AltRow::XX, i, j),
                ),
                (
                    format!("alt <<b{i}, b{j}>>"),
                    db.eval(alg, &b[i - 1], &b[j - 1]),
                    alt_closed_value(alg, &primed, &b, AltRow::YY, i, j),
                ),
                (
                    format!("alt <<a{i}', b{j}>>"),
                    db.eval(alg, &primed[i - 1], &b[j - 1]),
                    alt_closed_value(alg, &primed, &b, AltRow::XY, i, j),
                ),
                (
                    format!("alt <<b{i}, a{j}'>>"),
                    db.eval(alg, &b[i - 1], &primed[j - 1]),
                    alt_closed_value(alg, &primed, &b, AltRow::YX, i, j),
                ),
            ];
            for (label, got, expected) in pairs {
                out.push(Residual::T2(label, got.sub(&expected)));
            }
        }
    }
    Ok(out)
}

/// Translate an element of the fused algebra into the localised one along
/// the inverse of the identification (`c_l -> a_l'`, `d_l -> b_l`). Only
/// inverse-free fused elements are translated.
pub fn translate_fused(
    fus: &FusionContext,
    g: &Gamma,
    primed: &[El],
    x: &El,
) -> Result<El, Error> {
    let alg = g.alg();
    let image = |gen: GenId| -> El {
        let l = (gen as usize % fus.n) + 1;
        if (gen as usize) < fus.n {
            primed[l - 1].clone()
        } else {
            g.b(l)
        }
    };
    let mut out = El::zero();
    for (w, c) in &x.terms {
        let mut acc = match w {
            Word::Idem(v) => El::idem(*v),
            Word::Path(p) => {
                let mut acc = El::one(alg);
                for s in p {
                    match s {
                        Sym::Gen(gen) => acc = acc.mul(&image(*gen), alg),
                        Sym::Inv(_) => return Err(Error::UnknownInverse),
                    }
                }
                acc
            }
        };
        acc = acc.scale(c);
        out = out.add(&acc);
    }
    Ok(out)
}

/// Residuals asserting that the identification preserves all generator-pair
/// brackets: the computed fused table, translated back, must agree with the
/// localised bracket on the corresponding primed pairs. Moment-map
/// preservation is the factorisation of the top continuants, covered by
/// [`factorisation_residuals`].
pub fn iso_residuals(g: &Gamma, db: &DoubleBracket, fus: &FusionContext) -> Result<Vec<Residual>, Error> {
    assert_eq!(g.n, fus.n);
    let alg = g.alg();
    let primed = primed_generators(g)?;
    let loc_gen = |gen: GenId| -> El {
        let l = (gen as usize % fus.n) + 1;
        if (gen as usize) < fus.n {
            primed[l - 1].clone()
        } else {
            g.b(l)
        }
    };
    let mut out = Vec::new();
    for &x in &fus.gens() {
        for &y in &fus.gens() {
            let fused_value = fus.db.get(x, y);
            let mut translated = T2::zero();
            for ((u, v), c) in &fused_value.terms {
                let tu = translate_fused(fus, g, &primed, &El::from_word(u.clone(), Rat::one()))?;
                let tv = translate_fused(fus, g, &primed, &El::from_word(v.clone(), Rat::one()))?;
                translated = translated.add(&T2::of(&tu, &tv).scale(c));
            }
            let direct = db.eval(alg, &loc_gen(x), &loc_gen(y));
            out.push(Residual::T2(
                format!(
                    "iso pair ({}, {})",
                    fus.alg.gens[x as usize].name, fus.alg.gens[y as usize].name
                ),
                direct.sub(&translated),
            ));
        }
    }
    Ok(out)
}

/// Preparation identities: brackets of odd continuants `(a_1,...,a_i)` with
/// arrows (exact, inverse-free) and brackets of primed generators with
/// arrows and continuants (through the oracle).
pub fn preparation_residuals(g: &Gamma, db: &DoubleBracket) -> Result<Vec<Residual>, Error> {
    let alg = g.alg();
    let n = g.n;
    let half = rat(1, 2);
    let e1 = g.e1();
    let e2 = g.e2();
    let mut out = Vec::new();
    // <<(a1..b_i), b_j>> and <<(a1..b_i), a_j>>, every range (exact)
    for i in 1..=n {
        let p = g.cont(&g.seq_ab(i))?;
        for j in 1..=n {
            let got = db.eval(alg, &p, &g.b(j));
            let expected = if i < j {
                T2::of(&g.b(j).mul(&p, alg), &e2)
                    .sub(&T2::of(&g.b(j), &p))
                    .scale(&half)
            } else {
                T2::of(&g.b(j).mul(&p, alg), &e2)
                    .add(&T2::of(&g.b(j), &p))
                    .scale(&half)
            };
            out.push(Residual::T2(
                format!("prep <<(a1..b{i}), b{j}>>"),
                got.sub(&expected),
            ));
            let got = db.eval(alg, &p, &g.a(j));
            let core = T2::of(&e2, &p.mul(&g.a(j), alg))
                .sub(&T2::of(&p, &g.a(j)))
                .scale(&half);
            let expected = if i + 1 < j {
                core
            } else if i + 1 == j {
                core.add(&T2::of(&e2, &g.cont(&g.seq_a(i))?))
            } else {
                T2::of(&e2, &p.mul(&g.a(j), alg))
                    .add(&T2::of(&p, &g.a(j)))
                    .scale(&-half.clone())
            };
            out.push(Residual::T2(
                format!("prep <<(a1..b{i}), a{j}>>"),
                got.sub(&expected),
            ));
        }
    }
    // <<(a1..a_i), b_j>> and <<(a1..a_i), a_j>> (exact)
    for i in 1..=n {
        let p = g.cont(&g.seq_a(i))?;
        for j in 1..=n {
            let got = db.eval(alg, &p, &g.b(j));
            let core_pos = T2::of(&g.b(j).mul(&p, alg), &e2)
                .add(&T2::of(&e1, &p.mul(&g.b(j), alg)))
                .scale(&half);
            let expected = match i.cmp(&j) {
                std::cmp::Ordering::Less => core_pos,
                std::cmp::Ordering::Equal => {
                    core_pos.add(&T2::of(&e1, &g.cont(&g.seq_ab(i - 1))?))
                }
                std::cmp::Ordering::Greater => T2::of(&g.b(j).mul(&p, alg), &e2)
                    .sub(&T2::of(&e1, &p.mul(&g.b(j), alg)))
                    .scale(&half),
            };
            out.push(Residual::T2(
                format!("prep <<(a1..a{i}), b{j}>>"),
                got.sub(&expected),
            ));
            if i >= j {
                let got = db.eval(alg, &p, &g.a(j));
                let expected = T2::of(&g.a(j), &p)
                    .sub(&T2::of(&p, &g.a(j)))
                    .scale(&half);
                out.push(Residual::T2(
                    format!("prep <<(a1..a{i}), a{j}>>"),
                    got.sub(&expected),
                ));
            } else if i + 1 == j {
                let got = db.eval(alg, &p, &g.a(j));
                let expected = T2::of(&g.a(j), &p)
                    .add(&T2::of(&p, &g.a(j)))
                    .scale(&-half.clone());
                out.push(Residual::T2(
                    format!("prep <<(a1..a{i}), a{j}>>"),
                    got.sub(&expected),
                ));
            }
        }
    }
    // primed rows (oracle): <<a_i', a_j>>, <<a_i', b_j>>, and the brackets
    // with second and higher continuants, for i > j
    let primed = primed_generators(g)?;
    for i in 1..=n {
        let ap = &primed[i - 1];
        for j in 1..i {
            let got = db.eval(alg, ap, &g.a(j));
            let expected = T2::of(ap, &g.a(j))
                .add(&T2::of(&g.a(j), ap))
                .scale(&half);
            out.push(Residual::T2(
                format!("prep <<a{i}', a{j}>>"),
                got.sub(&expected),
            ));
            let got = db.eval(alg, ap, &g.b(j));
            let expected = T2::of(&e1, &ap.mul(&g.b(j), alg))
                .add(&T2::of(&g.b(j).mul(ap, alg), &e2))
                .scale(&-half.clone());
            out.push(Residual::T2(
                format!("prep <<a{i}', b{j}>>"),
                got.sub(&expected),
            ));
            let pair = g.e2().add(&g.a(j).mul(&g.b(j), alg));
            let got = db.eval(alg, ap, &pair);
            let expected = T2::of(ap, &pair)
                .sub(&T2::of(&pair.mul(ap, alg), &e2))
                .scale(&half);
            out.push(Residual::T2(
                format!("prep <<a{i}', (a{j},b{j})>>"),
                got.sub(&expected),
            ));
            let even = g.cont(&g.seq_ab(j))?;
            let got = db.eval(alg, ap, &even);
            let expected = T2::of(ap, &even)
                .sub(&T2::of(&even.mul(ap, alg), &e2))
                .scale(&half);
            out.push(Residual::T2(
                format!("prep <<a{i}', (a1..b{j})>>"),
                got.sub(&expected),
            ));
            let odd = g.cont(&g.seq_a(j))?;
            let got = db.eval(alg, ap, &odd);
            let expected = T2::of(ap, &odd)
                .add(&T2::of(&odd, ap))
                .scale(&half);
            out.push(Residual::T2(
                format!("prep <<a{i}', (a1..a{j})>>"),
                got.sub(&expected),
            ));
        }
        // the diagonal primed row <<a_j', a_j>>
        let got = db.eval(alg, ap, &g.a(i));
        let expected = T2::of(ap, &g.a(i))
            .add(&T2::of(&g.a(i), ap))
            .scale(&half)
            .sub(&T2::of(ap, ap));
        out.push(Residual::T2(
            format!("prep <<a{i}', a{i}>>"),
            got.sub(&expected),
        ));
    }
    Ok(out)
}
