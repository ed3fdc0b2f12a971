//! Shared helpers for unit tests: seeded random words and elements.

use crate::algebra::{rat, El, GenId, Sym, VertexId, Word};
use crate::gamma::Gamma;
use rand::Rng;

/// A random composable path of the given degree.
pub fn random_word(g: &Gamma, rng: &mut impl Rng, deg: usize) -> Word {
    if deg == 0 {
        return Word::Idem(rng.gen_range(0..2));
    }
    let alg = g.alg();
    let mut syms = Vec::new();
    let mut tail_needed: Option<VertexId> = None;
    for _ in 0..deg {
        let candidates: Vec<GenId> = g
            .gens()
            .into_iter()
            .filter(|&c| tail_needed.is_none_or(|t| alg.gen_head(c) == t))
            .collect();
        let pick = candidates[rng.gen_range(0..candidates.len())];
        syms.push(Sym::Gen(pick));
        tail_needed = Some(alg.gen_tail(pick));
    }
    Word::Path(syms)
}

/// A random inverse-free element: a few random composable words of bounded
/// degree with small rational coefficients.
pub fn random_element(g: &Gamma, rng: &mut impl Rng, max_deg: usize) -> El {
    let mut out = El::zero();
    let n_terms = rng.gen_range(1..=3);
    for _ in 0..n_terms {
        let deg = rng.gen_range(0..=max_deg);
        out.add_term(
            random_word(g, rng, deg),
            rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)),
        );
    }
    out
}
