//! Tensor squares and cubes of the path algebra.
//!
//! `T2` and `T3` are rational-linear combinations of word pairs/triples.
//! Slots are independent; composability only constrains multiplication
//! within a slot. `T2` carries the outer bimodule action
//! `a.(x (x) y).b = ax (x) yb` and the inner action
//! `a*(x (x) y)*b = xb (x) ay`, plus the slot permutations used by triple
//! brackets.

use crate::algebra::{El, QuiverAlgebra, Rat, Word};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct T2 {
    pub terms: BTreeMap<(Word, Word), Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct T3 {
    pub terms: BTreeMap<(Word, Word, Word), Rat>,
}

impl T2 {
    pub fn zero() -> Self {
        T2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: (Word, Word), c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `x (x) y` for elements.
    pub fn of(x: &El, y: &El) -> T2 {
        let mut out = T2::zero();
        for (wx, cx) in &x.terms {
            for (wy, cy) in &y.terms {
                out.add_term((wx.clone(), wy.clone()), cx * cy);
            }
        }
        out
    }

    pub fn add(&self, other: &T2) -> T2 {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &T2) -> T2 {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> T2 {
        T2 {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> T2 {
        if k.is_zero() {
            return T2::zero();
        }
        T2 {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// Outer action `left . t . right = (left x) (x) (y right)`.
    pub fn outer(&self, alg: &QuiverAlgebra, left: &El, right: &El) -> T2 {
        let mut out = T2::zero();
        for ((u, v), c) in &self.terms {
            for (wl, cl) in &left.terms {
                let Some(nu) = alg.mul_words(wl, u) else {
                    continue;
                };
                for (wr, cr) in &right.terms {
                    if let Some(nv) = alg.mul_words(v, wr) {
                        out.add_term((nu.clone(), nv), c * cl * cr);
                    }
                }
            }
        }
        out
    }

    /// Inner action `left * t * right = (x right) (x) (left y)`.
    pub fn inner(&self, alg: &QuiverAlgebra, left: &El, right: &El) -> T2 {
        let mut out = T2::zero();
        for ((u, v), c) in &self.terms {
            for (wr, cr) in &right.terms {
                let Some(nu) = alg.mul_words(u, wr) else {
                    continue;
                };
                for (wl, cl) in &left.terms {
                    if let Some(nv) = alg.mul_words(wl, v) {
                        out.add_term((nu.clone(), nv), c * cl * cr);
                    }
                }
            }
        }
        out
    }

    /// Slot swap `tau_(12)`.
    pub fn swap(&self) -> T2 {
        T2 {
            terms: self
                .terms
                .iter()
                .map(|((u, v), c)| ((v.clone(), u.clone()), c.clone()))
                .collect(),
        }
    }

    /// Multiply the two slots together: `m(x (x) y) = xy`.
    pub fn multiply_slots(&self, alg: &QuiverAlgebra) -> El {
        let mut out = El::zero();
        for ((u, v), c) in &self.terms {
            if let Some(w) = alg.mul_words(u, v) {
                out.add_term(w, c.clone());
            }
        }
        out
    }

    /// `t (x) y` in the last slot: lifts a tensor square to a cube.
    pub fn tensor_el(&self, y: &El) -> T3 {
        let mut out = T3::zero();
        for ((u, v), c) in &self.terms {
            for (wy, cy) in &y.terms {
                out.add_term((u.clone(), v.clone(), wy.clone()), c * cy);
            }
        }
        out
    }

    pub fn has_inverse_syms(&self) -> bool {
        self.terms.keys().any(|(u, v)| {
            u.syms().iter().chain(v.syms()).any(|s| matches!(s, crate::algebra::Sym::Inv(_)))
        })
    }

    pub fn display(&self, alg: &QuiverAlgebra, rich: bool) -> String {
        display_tensor(self.terms.iter().map(|((u, v), c)| (vec![u, v], c)), alg, rich)
    }
}

impl T3 {
    pub fn zero() -> Self {
        T3::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: (Word, Word, Word), c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn of(x: &El, y: &El, z: &El) -> T3 {
        let mut out = T3::zero();
        for (wx, cx) in &x.terms {
            for (wy, cy) in &y.terms {
                for (wz, cz) in &z.terms {
                    out.add_term((wx.clone(), wy.clone(), wz.clone()), cx * cy * cz);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &T3) -> T3 {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &T3) -> T3 {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> T3 {
        if k.is_zero() {
            return T3::zero();
        }
        T3 {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// `tau_(123)(x (x) y (x) z) = z (x) x (x) y`.
    pub fn tau123(&self) -> T3 {
        T3 {
            terms: self
                .terms
                .iter()
                .map(|((x, y, z), c)| ((z.clone(), x.clone(), y.clone()), c.clone()))
                .collect(),
        }
    }

    /// `tau_(132)(x (x) y (x) z) = y (x) z (x) x`.
    pub fn tau132(&self) -> T3 {
        T3 {
            terms: self
                .terms
                .iter()
                .map(|((x, y, z), c)| ((y.clone(), z.clone(), x.clone()), c.clone()))
                .collect(),
        }
    }

    /// Multiply all three slots together.
    pub fn multiply_slots(&self, alg: &QuiverAlgebra) -> El {
        let mut out = El::zero();
        for ((u, v, w), c) in &self.terms {
            if let Some(uv) = alg.mul_words(u, v) {
                if let Some(uvw) = alg.mul_words(&uv, w) {
                    out.add_term(uvw, c.clone());
                }
            }
        }
        out
    }

    pub fn display(&self, alg: &QuiverAlgebra, rich: bool) -> String {
        display_tensor(
            self.terms.iter().map(|((u, v, w), c)| (vec![u, v, w], c)),
            alg,
            rich,
        )
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct JsonTerm2 {
    coeff: String,
    left: Vec<String>,
    right: Vec<String>,
}

impl T2 {
    /// JSON term list `[{"coeff":"p/q","left":[...],"right":[...]}]`;
    /// exact round trip.
    pub fn to_json(&self, alg: &QuiverAlgebra) -> serde_json::Value {
        let word_names = |w: &Word| -> Vec<String> {
            match w {
                Word::Idem(v) => vec![format!("e{}", alg.vertex_names[*v as usize])],
                Word::Path(p) => p.iter().map(|&s| alg.sym_name(s)).collect(),
            }
        };
        let terms: Vec<JsonTerm2> = self
            .terms
            .iter()
            .map(|((u, v), c)| JsonTerm2 {
                coeff: c.to_string(),
                left: word_names(u),
                right: word_names(v),
            })
            .collect();
        serde_json::to_value(terms).expect("term list serializes")
    }

    pub fn from_json(
        value: &serde_json::Value,
        alg: &QuiverAlgebra,
    ) -> Result<T2, crate::error::Error> {
        let terms: Vec<JsonTerm2> = serde_json::from_value(value.clone())
            .map_err(|e| crate::error::Error::Serialization(e.to_string()))?;
        let mut out = T2::zero();
        for t in terms {
            let coeff: Rat = t.coeff.parse().map_err(|_| {
                crate::error::Error::Serialization(format!("bad coefficient {:?}", t.coeff))
            })?;
            let left = crate::algebra::parse_word(&t.left, alg)?;
            let right = crate::algebra::parse_word(&t.right, alg)?;
            out.add_term((left, right), coeff);
        }
        Ok(out)
    }
}

fn display_tensor<'a, I>(terms: I, alg: &QuiverAlgebra, rich: bool) -> String
where
    I: Iterator<Item = (Vec<&'a Word>, &'a Rat)>,
{
    use num::{One, Signed};
    let sep = if rich { " \u{2297} " } else { " (x) " };
    let mut out = String::new();
    let mut first = true;
    for (slots, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push('*');
        }
        let rendered: Vec<String> = slots
            .iter()
            .map(|w| crate::algebra::display_word(w, alg))
            .collect();
        out.push_str(&rendered.join(sep));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{El, QuiverAlgebra};

    #[test]
    fn inner_action_on_idempotent_pair() {
        // a1 * (e2 (x) e1) * 1 = e2 (x) a1
        let alg = QuiverAlgebra::gamma_bar(1);
        let a1 = El::generator(0);
        let t = T2::of(&El::idem(1), &El::idem(0));
        let acted = t.inner(&alg, &a1, &El::one(&alg));
        assert_eq!(acted, T2::of(&El::idem(1), &a1));
    }

    #[test]
    fn inner_action_expansion() {
        // a1 * (e2 (x) b1 a1 + a1 b1 (x) e1) * 1 = e2 (x) a1 b1 a1 + a1 b1 (x) a1
        let alg = QuiverAlgebra::gamma_bar(1);
        let a1 = El::generator(0);
        let b1 = El::generator(1);
        let ab = a1.mul(&b1, &alg);
        let ba = b1.mul(&a1, &alg);
        let t = T2::of(&El::idem(1), &ba).add(&T2::of(&ab, &El::idem(0)));
        let acted = t.inner(&alg, &a1, &El::one(&alg));
        let expected = T2::of(&El::idem(1), &a1.mul(&b1, &alg).mul(&a1, &alg))
            .add(&T2::of(&ab, &a1));
        assert_eq!(acted, expected);
    }

    #[test]
    fn outer_action_left_multiplies_first_slot() {
        let alg = QuiverAlgebra::gamma_bar(1);
        let a1 = El::generator(0);
        let b1 = El::generator(1);
        let t = T2::of(&a1, &El::idem(1));
        let acted = t.outer(&alg, &b1, &El::one(&alg));
        assert_eq!(acted, T2::of(&b1.mul(&a1, &alg), &El::idem(1)));
    }

    #[test]
    fn cyclic_permutations_invert_each_other() {
        let alg = QuiverAlgebra::gamma_bar(2);
        let a1 = El::generator(0);
        let a2 = El::generator(1);
        let b1 = El::generator(2);
        let t = T3::of(&a1, &a2, &b1).add(&T3::of(&b1, &a1, &a2).scale(&crate::algebra::rat(3, 7)));
        assert_eq!(t.tau123().tau132(), t);
        assert_eq!(t.tau132().tau123(), t);
        // tau_(123)(x (x) y (x) z) = z (x) x (x) y
        let s = T3::of(&a1, &a2, &b1).tau123();
        assert_eq!(s, T3::of(&b1, &a1, &a2));
        // tau_(132)(x (x) y (x) z) = y (x) z (x) x
        let s = T3::of(&a1, &a2, &b1).tau132();
        assert_eq!(s, T3::of(&a2, &b1, &a1));
        let _ = alg;
    }

    #[test]
    fn tensor_json_round_trip() {
        let g = crate::gamma::Gamma::boalch(2).unwrap();
        let alg = g.alg();
        let t = T2::of(&g.a(1).mul(&g.b(2), alg), &g.e2())
            .scale(&crate::algebra::rat(-5, 6))
            .add(&T2::of(&g.phi1().unwrap(), &g.a(2)));
        let json = t.to_json(alg);
        assert_eq!(T2::from_json(&json, alg).unwrap(), t);
    }

    #[test]
    fn inner_and_outer_actions_commute() {
        let alg = QuiverAlgebra::gamma_bar(2);
        let a1 = El::generator(0);
        let b2 = El::generator(3);
        let e1 = El::idem(0);
        let e2 = El::idem(1);
        let t = T2::of(&a1, &b2).add(&T2::of(&e2, &e1).scale(&crate::algebra::rat(2, 5)));
        // a.(b * t * c).d == b * (a.t.d) * c
        let lhs = t.inner(&alg, &b2, &a1).outer(&alg, &e2, &e1);
        let rhs = t.outer(&alg, &e2, &e1).inner(&alg, &b2, &a1);
        assert_eq!(lhs, rhs);
    }
}
