//! The representation oracle: exact rational matrix points of the quiver
//! algebra, and the probabilistic zero-test for expressions that carry
//! formal inverses.
//!
//! A point assigns to each arrow `g` a `d_{h(g)} x d_{t(g)}` integer matrix
//! and to each declared inverse the exact matrix inverse of its evaluated
//! base. An element evaluates blockwise into the square block matrix of
//! size `sum(dims)`. Tensors evaluate slot-wise at independent points and
//! the zero test sums Kronecker products, since an element of the tensor
//! square vanishes on all pairs of generic points of sufficient size iff it
//! is zero.
//!
//! Soundness of the sizes: the d x d matrix algebra satisfies no polynomial
//! identity of degree below 2d, so a nonzero inverse-free element of degree
//! `deg` stays nonzero at generic points once some tested dimension has
//! `2d > deg`. The config can auto-augment the dimension list accordingly.

use crate::algebra::{El, QuiverAlgebra, Rat, Sym, VertexId, Word};
use crate::brackets::DoubleBracket;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::tensor::{T2, T3};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// One sampled representation point.
#[derive(Clone, Debug)]
pub struct RepPoint {
    /// Dimension per vertex.
    pub dims: Vec<usize>,
    /// Per generator id, a `d_head x d_tail` matrix.
    pub gen_mats: Vec<Matrix>,
    /// Per inverse id, the exact inverse of the evaluated base element.
    pub inv_mats: Vec<Matrix>,
}

impl RepPoint {
    /// Build a point from chosen generator matrices; fails when a declared
    /// continuant is not invertible there.
    pub fn from_gen_mats(
        alg: &QuiverAlgebra,
        dims: Vec<usize>,
        gen_mats: Vec<Matrix>,
    ) -> Result<RepPoint, Error> {
        assert_eq!(dims.len(), alg.n_vertices());
        assert_eq!(gen_mats.len(), alg.gens.len());
        for (g, m) in gen_mats.iter().enumerate() {
            let info = &alg.gens[g];
            assert_eq!(
                (m.rows, m.cols),
                (dims[info.head as usize], dims[info.tail as usize]),
                "shape of {}",
                info.name
            );
        }
        let mut point = RepPoint {
            dims,
            gen_mats,
            inv_mats: Vec::new(),
        };
        // inverses may reference earlier ones through their base elements,
        // so evaluate in registration order
        for inv in &alg.invs {
            let v = inv.vertex as usize;
            let big = point.eval(alg, &inv.base);
            let block = point.block_of(alg, &big, inv.vertex, inv.vertex);
            let _ = v;
            let m = block.inverse().map_err(|_| Error::SingularMatrix)?;
            point.inv_mats.push(m);
        }
        Ok(point)
    }

    pub fn offset(&self, v: VertexId) -> usize {
        self.dims[..v as usize].iter().sum()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn sym_mat(&self, s: Sym) -> &Matrix {
        match s {
            Sym::Gen(g) => &self.gen_mats[g as usize],
            Sym::Inv(i) => &self.inv_mats[i as usize],
        }
    }

    /// Evaluate a word to its `d_head x d_tail` block.
    pub fn eval_word(&self, alg: &QuiverAlgebra, w: &Word) -> Matrix {
        match w {
            Word::Idem(v) => Matrix::identity(self.dims[*v as usize]),
            Word::Path(p) => {
                let mut m = self.sym_mat(p[0]).clone();
                for s in &p[1..] {
                    m = m.mul(self.sym_mat(*s));
                }
                let _ = alg;
                m
            }
        }
    }

    /// Evaluate an element into the full square block matrix.
    pub fn eval(&self, alg: &QuiverAlgebra, x: &El) -> Matrix {
        let d = self.total_dim();
        let mut out = Matrix::zero(d, d);
        for (w, c) in &x.terms {
            let (h, t) = alg.endpoints(w);
            let block = self.eval_word(alg, w);
            let (ro, co) = (self.offset(h), self.offset(t));
            for i in 0..block.rows {
                for j in 0..block.cols {
                    let val = &out[(ro + i, co + j)] + &(c * &block[(i, j)]);
                    out[(ro + i, co + j)] = val;
                }
            }
        }
        out
    }

    fn block_of(&self, _alg: &QuiverAlgebra, big: &Matrix, h: VertexId, t: VertexId) -> Matrix {
        let (ro, co) = (self.offset(h), self.offset(t));
        let (dr, dc) = (self.dims[h as usize], self.dims[t as usize]);
        let mut m = Matrix::zero(dr, dc);
        for i in 0..dr {
            for j in 0..dc {
                m[(i, j)] = big[(ro + i, co + j)].clone();
            }
        }
        m
    }

    /// The `(h, t)` block of the evaluated element.
    pub fn eval_block(&self, alg: &QuiverAlgebra, x: &El, h: VertexId, t: VertexId) -> Matrix {
        let big = self.eval(alg, x);
        self.block_of(alg, &big, h, t)
    }

    pub fn describe(&self, alg: &QuiverAlgebra) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = alg
            .gens
            .iter()
            .zip(&self.gen_mats)
            .map(|(info, m)| {
                json!({
                    "gen": info.name,
                    "entries": (0..m.rows)
                        .map(|i| (0..m.cols).map(|j| m[(i, j)].to_string()).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "dims": self.dims, "matrices": gens })
    }
}

/// Sample a representation point with integer entries uniform in
/// `[-range, range]`, resampling until every declared continuant is
/// invertible. Deterministic for a fixed seed.
pub fn sample_rep(
    alg: &QuiverAlgebra,
    dims: &[usize],
    seed: u64,
    range: i64,
) -> Result<RepPoint, Error> {
    const MAX_RETRIES: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let gen_mats: Vec<Matrix> = alg
            .gens
            .iter()
            .map(|info| {
                let (r, c) = (dims[info.head as usize], dims[info.tail as usize]);
                Matrix::from_rows(
                    (0..r)
                        .map(|_| {
                            (0..c)
                                .map(|_| crate::algebra::int(rng.gen_range(-range..=range)))
                                .collect()
                        })
                        .collect(),
                )
            })
            .collect();
        if let Ok(p) = RepPoint::from_gen_mats(alg, dims.to_vec(), gen_mats) {
            return Ok(p);
        }
    }
    Err(Error::SamplingFailed(MAX_RETRIES))
}

/// What the oracle is asked about.
pub enum OracleInput<'a> {
    El(&'a El),
    T2(&'a T2),
    T3(&'a T3),
}

impl OracleInput<'_> {
    /// Maximum single-slot word degree, with inverse symbols weighted by
    /// the degree of what they invert.
    fn degree(&self, alg: &QuiverAlgebra) -> usize {
        let word_deg =
            |w: &Word| -> usize { w.syms().iter().map(|&s| alg.sym_degree(s)).sum() };
        match self {
            OracleInput::El(x) => x.terms.keys().map(word_deg).max().unwrap_or(0),
            OracleInput::T2(t) => t
                .terms
                .keys()
                .map(|(u, v)| word_deg(u).max(word_deg(v)))
                .max()
                .unwrap_or(0),
            OracleInput::T3(t) => t
                .terms
                .keys()
                .map(|(u, v, w)| word_deg(u).max(word_deg(v)).max(word_deg(w)))
                .max()
                .unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Dimension vectors to test (one entry per vertex each).
    pub dims_list: Vec<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
    pub range: i64,
    /// Append a dimension vector large enough for the polynomial-identity
    /// rule `2d > deg` when the listed ones are all too small.
    pub auto_pi_augment: bool,
}

impl OracleConfig {
    pub fn new(n_vertices: usize, seed: u64) -> Self {
        OracleConfig {
            dims_list: vec![vec![1; n_vertices], vec![2; n_vertices]],
            trials: 3,
            seed,
            range: 999,
            auto_pi_augment: true,
        }
    }

    pub fn with_dims(mut self, dims_list: Vec<Vec<usize>>) -> Self {
        self.dims_list = dims_list;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    NonZero { dims: Vec<usize>, trial: usize },
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero)
    }
}

/// Probabilistic zero test. "Zero" means every evaluation at every sampled
/// point of every dimension vector vanished exactly; tensors use one
/// independent point per slot.
pub fn is_zero_probabilistic(
    alg: &QuiverAlgebra,
    input: &OracleInput,
    cfg: &OracleConfig,
) -> Result<Verdict, Error> {
    use rayon::prelude::*;
    let mut dims_list = cfg.dims_list.clone();
    if cfg.auto_pi_augment {
        let need = input.degree(alg) / 2 + 1;
        if !dims_list.iter().any(|d| d.iter().copied().min().unwrap_or(0) >= need) {
            dims_list.push(vec![need; alg.n_vertices()]);
        }
    }
    let slots = match input {
        OracleInput::El(_) => 1u64,
        OracleInput::T2(_) => 2,
        OracleInput::T3(_) => 3,
    };
    let jobs: Vec<(usize, usize)> = (0..dims_list.len())
        .flat_map(|d| (0..cfg.trials).map(move |t| (d, t)))
        .collect();
    let results: Vec<Option<Verdict>> = jobs
        .par_iter()
        .map(|&(di, trial)| {
            let dims = &dims_list[di];
            // one independent point per tensor slot, all seeded reproducibly
            let base = cfg
                .seed
                .wrapping_add(1_000_003u64.wrapping_mul(trial as u64 + 1))
                .wrapping_add(7_919u64.wrapping_mul(di as u64 + 1));
            let points: Result<Vec<RepPoint>, Error> = (0..slots)
                .map(|s| sample_rep(alg, dims, base.wrapping_add(s * 104_729), cfg.range))
                .collect();
            let points = match points {
                Ok(p) => p,
                Err(_) => return Some(Verdict::NonZero { dims: dims.clone(), trial }),
            };
            let vanished = match input {
                OracleInput::El(x) => points[0].eval(alg, x).is_zero(),
                OracleInput::T2(t) => eval_t2(alg, t, &points[0], &points[1]).is_zero(),
                OracleInput::T3(t) => {
                    eval_t3(alg, t, &points[0], &points[1], &points[2]).is_zero()
                }
            };
            if vanished {
                None
            } else {
                Some(Verdict::NonZero {
                    dims: dims.clone(),
                    trial,
                })
            }
        })
        .collect();
    Ok(results
        .into_iter()
        .flatten()
        .next()
        .unwrap_or(Verdict::Zero))
}

/// Slot-wise evaluation of a tensor square, summed as Kronecker products.
pub fn eval_t2(alg: &QuiverAlgebra, t: &T2, p1: &RepPoint, p2: &RepPoint) -> Matrix {
    let (d1, d2) = (p1.total_dim(), p2.total_dim());
    let mut out = Matrix::zero(d1 * d1, d2 * d2);
    for ((u, v), c) in &t.terms {
        let mu = p1.eval(alg, &El::from_word(u.clone(), Rat::one()));
        let mv = p2.eval(alg, &El::from_word(v.clone(), Rat::one()));
        out = out.add(&mu.kron(&mv).scale(c));
    }
    out
}

pub fn eval_t3(
    alg: &QuiverAlgebra,
    t: &T3,
    p1: &RepPoint,
    p2: &RepPoint,
    p3: &RepPoint,
) -> Matrix {
    let d = p1.total_dim() * p2.total_dim();
    let mut out = Matrix::zero(d * p3.total_dim(), d * p3.total_dim());
    for ((u, v, w), c) in &t.terms {
        let mu = p1.eval(alg, &El::from_word(u.clone(), Rat::one()));
        let mv = p2.eval(alg, &El::from_word(v.clone(), Rat::one()));
        let mw = p3.eval(alg, &El::from_word(w.clone(), Rat::one()));
        out = out.add(&mu.kron(&mv).kron(&mw).scale(c));
    }
    out
}

/// The bracket between matrix entries induced by a double bracket at a
/// point: `{x_ij, y_uv} = sum <<x,y>>'_{uj} <<x,y>>''_{iv}`, returned as a
/// 4-index array `values[i][j][u][v]`.
pub struct EntrywiseBracket {
    pub values: Vec<Vec<Vec<Vec<Rat>>>>,
}

pub fn entrywise_bracket(
    alg: &QuiverAlgebra,
    db: &DoubleBracket,
    p: &RepPoint,
    x: &El,
    y: &El,
) -> EntrywiseBracket {
    let t = db.eval(alg, x, y);
    let d = p.total_dim();
    let mut values = vec![vec![vec![vec![Rat::zero(); d]; d]; d]; d];
    for ((u, v), c) in &t.terms {
        let mu = p.eval(alg, &El::from_word(u.clone(), Rat::one()));
        let mv = p.eval(alg, &El::from_word(v.clone(), Rat::one()));
        for i in 0..d {
            for j in 0..d {
                for r in 0..d {
                    for s in 0..d {
                        let add = c * &mu[(r, j)] * &mv[(i, s)];
                        if !add.is_zero() {
                            let cell = &mut values[i][j][r][s];
                            *cell = &*cell + &add;
                        }
                    }
                }
            }
        }
    }
    EntrywiseBracket { values }
}

/// The standard degree-4 polynomial
/// `St4(x1..x4) = sum_{sigma} sgn(sigma) x_{s1} x_{s2} x_{s3} x_{s4}`;
/// an identity of 2x2 matrices, not of 3x3.
pub fn standard_identity_st4(alg: &QuiverAlgebra, xs: &[El; 4]) -> El {
    let mut out = El::zero();
    let perms = permutations4();
    for (perm, sign) in perms {
        let mut prod = xs[perm[0]].clone();
        for &i in &perm[1..] {
            prod = prod.mul(&xs[i], alg);
        }
        out = if sign > 0 {
            out.add(&prod)
        } else {
            out.sub(&prod)
        };
    }
    out
}

fn permutations4() -> Vec<([usize; 4], i8)> {
    let mut out = Vec::with_capacity(24);
    for p0 in 0..4usize {
        for p1 in 0..4usize {
            for p2 in 0..4usize {
                for p3 in 0..4usize {
                    let perm = [p0, p1, p2, p3];
                    let mut seen = [false; 4];
                    for &x in &perm {
                        seen[x] = true;
                    }
                    if seen != [true; 4] {
                        continue;
                    }
                    let mut inversions = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if perm[i] > perm[j] {
                                inversions += 1;
                            }
                        }
                    }
                    out.push((perm, if inversions % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
    }
    out
}
