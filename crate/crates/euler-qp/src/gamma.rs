//! The double quiver on two vertices with `n` arrow pairs, together with the
//! localisations used throughout: the algebra with the two top continuants
//! inverted, and the further localisation at all `2n` continuants
//! `(a_1,...,a_k,b_k)` and `(b_k,...,b_1,a_1)`, `k = 1..n`.

use crate::algebra::{El, GenId, InvId, QuiverAlgebra, QuiverMap, VertexId};
use crate::continuants::{continuant, ContinuantDescriptor};
use crate::error::Error;
use std::collections::BTreeMap;

/// `Gamma` owns the quiver presentation plus the registry of inverted
/// continuants, keyed by `k`: `inv_a[k]` is `(a_1,b_1,...,a_k,b_k)^{-1}`
/// (a loop at vertex 2) and `inv_b[k]` is `(b_k,a_k,...,b_1,a_1)^{-1}`
/// (a loop at vertex 1).
#[derive(Clone, Debug)]
pub struct Gamma {
    pub n: usize,
    alg: QuiverAlgebra,
    inv_a: BTreeMap<usize, InvId>,
    inv_b: BTreeMap<usize, InvId>,
}

impl Gamma {
    /// Free path algebra, nothing inverted.
    pub fn free(n: usize) -> Self {
        Gamma {
            n,
            alg: QuiverAlgebra::gamma_bar(n),
            inv_a: BTreeMap::new(),
            inv_b: BTreeMap::new(),
        }
    }

    /// Invert the two `2n`-th continuants `(a_1,...,b_n)` and `(b_n,...,a_1)`.
    pub fn boalch(n: usize) -> Result<Self, Error> {
        let mut g = Gamma::free(n);
        g.invert_pair(n)?;
        Ok(g)
    }

    /// Invert all `2n` continuants `(a_1,...,b_k)`, `(b_k,...,a_1)` for
    /// `k = 1..n`.
    pub fn localized(n: usize) -> Result<Self, Error> {
        let mut g = Gamma::free(n);
        for k in 1..=n {
            g.invert_pair(k)?;
        }
        Ok(g)
    }

    fn invert_pair(&mut self, k: usize) -> Result<(), Error> {
        let ab = self.cont(&self.seq_ab(k))?;
        let name_ab = self.seq_name(&self.seq_ab(k));
        let id = self.alg.add_inverse(name_ab, ab)?;
        self.inv_a.insert(k, id);
        let ba = self.cont(&self.seq_ba_desc(k))?;
        let name_ba = self.seq_name(&self.seq_ba_desc(k));
        let id = self.alg.add_inverse(name_ba, ba)?;
        self.inv_b.insert(k, id);
        Ok(())
    }

    fn seq_name(&self, seq: &[GenId]) -> String {
        seq.iter()
            .map(|&g| self.alg.gens[g as usize].name.clone())
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn alg(&self) -> &QuiverAlgebra {
        &self.alg
    }

    pub fn a_id(&self, i: usize) -> GenId {
        assert!((1..=self.n).contains(&i));
        (i - 1) as GenId
    }

    pub fn b_id(&self, i: usize) -> GenId {
        assert!((1..=self.n).contains(&i));
        (self.n + i - 1) as GenId
    }

    pub fn a(&self, i: usize) -> El {
        El::generator(self.a_id(i))
    }

    pub fn b(&self, i: usize) -> El {
        El::generator(self.b_id(i))
    }

    pub fn gens(&self) -> Vec<GenId> {
        (0..2 * self.n as u16).collect()
    }

    pub fn inv_a_id(&self, k: usize) -> Option<InvId> {
        self.inv_a.get(&k).copied()
    }

    pub fn inv_b_id(&self, k: usize) -> Option<InvId> {
        self.inv_b.get(&k).copied()
    }

    /// `(a_1,b_1,...,a_k,b_k)`, a loop at vertex 2.
    pub fn seq_ab(&self, k: usize) -> Vec<GenId> {
        let mut seq = Vec::with_capacity(2 * k);
        for i in 1..=k {
            seq.push(self.a_id(i));
            seq.push(self.b_id(i));
        }
        seq
    }

    /// `(a_1,b_1,...,b_{k-1},a_k)`, odd length `2k-1`.
    pub fn seq_a(&self, k: usize) -> Vec<GenId> {
        let mut seq = Vec::with_capacity(2 * k - 1);
        for i in 1..k {
            seq.push(self.a_id(i));
            seq.push(self.b_id(i));
        }
        seq.push(self.a_id(k));
        seq
    }

    /// `(b_k,a_k,...,b_1,a_1)`, a loop at vertex 1.
    pub fn seq_ba_desc(&self, k: usize) -> Vec<GenId> {
        let mut seq = Vec::with_capacity(2 * k);
        for i in (1..=k).rev() {
            seq.push(self.b_id(i));
            seq.push(self.a_id(i));
        }
        seq
    }

    /// `(a_k,b_{k-1},...,b_1,a_1)`, odd length `2k-1`.
    pub fn seq_a_desc(&self, k: usize) -> Vec<GenId> {
        let mut seq = Vec::with_capacity(2 * k - 1);
        seq.push(self.a_id(k));
        for i in (1..k).rev() {
            seq.push(self.b_id(i));
            seq.push(self.a_id(i));
        }
        seq
    }

    /// Generic alternating sequence `a_1, b_1, a_2, b_2, ...` of length `k`
    /// on distinct symbols (requires `n >= ceil(k/2)`).
    pub fn alternating_seq(&self, k: usize) -> Vec<GenId> {
        (0..k)
            .map(|pos| {
                let i = pos / 2 + 1;
                if pos % 2 == 0 {
                    self.a_id(i)
                } else {
                    self.b_id(i)
                }
            })
            .collect()
    }

    /// Expand a continuant over this quiver. The default anchor (vertex 2)
    /// only matters for the empty sequence.
    pub fn cont(&self, seq: &[GenId]) -> Result<El, Error> {
        continuant(&self.alg, &ContinuantDescriptor::new(seq.to_vec(), 1))
    }

    /// Moment-map component at vertex 2: `(a_1,...,b_n)`, fully expanded.
    pub fn phi2(&self) -> El {
        self.cont(&self.seq_ab(self.n)).expect("legal sequence")
    }

    /// The continuant `(b_n,...,a_1)` (not its inverse).
    pub fn ba_top(&self) -> El {
        self.cont(&self.seq_ba_desc(self.n)).expect("legal sequence")
    }

    /// Moment-map component at vertex 1: `(b_n,...,a_1)^{-1}` as an element.
    pub fn phi1(&self) -> Result<El, Error> {
        self.inv_b_id(self.n)
            .map(El::inverse)
            .ok_or(Error::UnknownInverse)
    }

    /// The order-two automorphism `e_1 <-> e_2`, `a_l <-> b_{n+1-l}`,
    /// extended multiplicatively. Inverse symbols are mapped when both
    /// members of a pair `(a_1,...,b_k) <-> (b_n,...,a_{n+1-k})` are
    /// registered, which for the standard localisations covers only the top
    /// pair `k = n`.
    pub fn s_map(&self) -> QuiverMap {
        let n = self.n;
        let mut gen_map = vec![0 as GenId; 2 * n];
        for i in 1..=n {
            gen_map[self.a_id(i) as usize] = self.b_id(n + 1 - i);
            gen_map[self.b_id(i) as usize] = self.a_id(n + 1 - i);
        }
        let mut inv_map = vec![None; self.alg.invs.len()];
        if let (Some(ia), Some(ib)) = (self.inv_a_id(n), self.inv_b_id(n)) {
            inv_map[ia as usize] = Some(ib);
            inv_map[ib as usize] = Some(ia);
        }
        QuiverMap {
            vertex_map: vec![1, 0],
            gen_map,
            inv_map,
        }
    }

    pub fn apply_s(&self, x: &El) -> Result<El, Error> {
        x.map_syms(&self.s_map())
    }

    pub fn e1(&self) -> El {
        El::idem(0)
    }

    pub fn e2(&self) -> El {
        El::idem(1)
    }
}

pub const V1: VertexId = 0;
pub const V2: VertexId = 1;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::random_element;
    use rand::SeedableRng;

    #[test]
    fn s_swaps_arrows_and_idempotents() {
        let g = Gamma::free(2);
        assert_eq!(g.apply_s(&g.a(1)).unwrap(), g.b(2));
        assert_eq!(g.apply_s(&g.b(2)).unwrap(), g.a(1));
        assert_eq!(g.apply_s(&g.e1()).unwrap(), g.e2());
    }

    #[test]
    fn s_is_an_involution_and_multiplicative() {
        let g = Gamma::free(3);
        let alg = g.alg();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let x = random_element(&g, &mut rng, 4);
            let y = random_element(&g, &mut rng, 4);
            assert_eq!(g.apply_s(&g.apply_s(&x).unwrap()).unwrap(), x);
            let lhs = g.apply_s(&x.mul(&y, alg)).unwrap();
            let rhs = g.apply_s(&x).unwrap().mul(&g.apply_s(&y).unwrap(), alg);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn s_sends_top_continuant_to_its_reverse() {
        for n in 1..=4 {
            let g = Gamma::free(n);
            let lhs = g.apply_s(&g.phi2()).unwrap();
            assert_eq!(lhs, g.ba_top(), "n = {n}");
        }
    }

    #[test]
    fn associativity_and_distributivity_random() {
        let g = Gamma::free(2);
        let alg = g.alg();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let x = random_element(&g, &mut rng, 6);
            let y = random_element(&g, &mut rng, 6);
            let z = random_element(&g, &mut rng, 6);
            assert_eq!(
                x.mul(&y, alg).mul(&z, alg),
                x.mul(&y.mul(&z, alg), alg),
                "associativity"
            );
            assert_eq!(
                x.mul(&y.add(&z), alg),
                x.mul(&y, alg).add(&x.mul(&z, alg)),
                "distributivity"
            );
        }
    }

}
