//! Euler continuants: in the path algebra with idempotents, and the
//! classical commutative facts about 2x2 matrices, Gauss decompositions and
//! continued fractions.
//!
//! With idempotents the base cases read `(a_i, b_j) = e2 + a_i b_j` and
//! `(b_i, a_j) = e1 + b_i a_j`; higher continuants follow the tail rule
//! `(y_1,...,y_k) = (y_1,...,y_{k-1}) y_k + (y_1,...,y_{k-2})`, and the head
//! rule `(x_1,...,x_k) = x_1 (x_2,...,x_k) + (x_3,...,x_k)` must produce the
//! identical element.

use crate::algebra::{El, GenId, QuiverAlgebra, Rat, VertexId};
use crate::error::Error;
use crate::matrix::Matrix;
use num::{One, Zero};

/// An alternating generator sequence plus the idempotent anchoring the
/// empty continuant (the degree-0 base case is ambiguous under idempotent
/// decomposition, so the descriptor carries it explicitly).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuantDescriptor {
    pub sequence: Vec<GenId>,
    pub anchor: VertexId,
}

impl ContinuantDescriptor {
    pub fn new(sequence: Vec<GenId>, anchor: VertexId) -> Self {
        ContinuantDescriptor { sequence, anchor }
    }

    /// A legal sequence composes as a path (`tail(y_i) == head(y_{i+1})`)
    /// and hops back and forth (`head(y_i) == tail(y_{i+1})`), which is
    /// exactly the alternating condition on the two-vertex quiver.
    pub fn validate(&self, alg: &QuiverAlgebra) -> Result<(), Error> {
        for (pos, pair) in self.sequence.windows(2).enumerate() {
            let (x, y) = (pair[0], pair[1]);
            if alg.gen_tail(x) != alg.gen_head(y) || alg.gen_head(x) != alg.gen_tail(y) {
                return Err(Error::NotAlternating(pos + 1));
            }
        }
        Ok(())
    }
}

/// Expand a continuant by the tail recursion.
pub fn continuant(alg: &QuiverAlgebra, d: &ContinuantDescriptor) -> Result<El, Error> {
    d.validate(alg)?;
    let seq = &d.sequence;
    if seq.is_empty() {
        return Ok(El::idem(d.anchor));
    }
    // prefix continuants: p[k] = (y_1,...,y_k)
    let mut pm2 = El::idem(alg.gen_head(seq[0]));
    let mut pm1 = El::generator(seq[0]);
    for &y in &seq[1..] {
        let next = pm1.mul(&El::generator(y), alg).add(&pm2);
        pm2 = pm1;
        pm1 = next;
    }
    Ok(pm1)
}

/// Expand a continuant by the head recursion; must agree with
/// [`continuant`].
pub fn continuant_head(alg: &QuiverAlgebra, d: &ContinuantDescriptor) -> Result<El, Error> {
    d.validate(alg)?;
    let seq = &d.sequence;
    if seq.is_empty() {
        return Ok(El::idem(d.anchor));
    }
    // suffix continuants: q[i] = (y_i,...,y_m)
    let m = seq.len();
    let mut qp2 = El::idem(alg.gen_tail(seq[m - 1]));
    let mut qp1 = El::generator(seq[m - 1]);
    for &y in seq[..m - 1].iter().rev() {
        let next = El::generator(y).mul(&qp1, alg).add(&qp2);
        qp2 = qp1;
        qp1 = next;
    }
    Ok(qp1)
}

/// Number of monomials of the k-th continuant on distinct indeterminates:
/// the (k+1)-th Fibonacci number.
pub fn term_count(k: usize) -> u128 {
    assert!(k >= 1, "term_count needs k >= 1");
    fibonacci(k as u32 + 1)
}

pub fn fibonacci(m: u32) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..m {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

// ---------------------------------------------------------------------------
// Commutative continuants and the classical 2x2 matrix facts.
// ---------------------------------------------------------------------------

/// `(x_1,...,x_k)` for commuting scalars; `k = 0` gives 1.
pub fn scalar_continuant(xs: &[Rat]) -> Rat {
    let mut pm2 = Rat::one();
    let mut pm1 = match xs.first() {
        None => return Rat::one(),
        Some(x) => x.clone(),
    };
    for x in &xs[1..] {
        let next = &pm1 * x + &pm2;
        pm2 = pm1;
        pm1 = next;
    }
    pm1
}

/// Both sides of the matrix identity
/// `[[0,1],[1,x_k]] ... [[0,1],[1,x_1]] =
///  [[(x_{k-1},...,x_2), (x_{k-1},...,x_1)], [(x_k,...,x_2), (x_k,...,x_1)]]`,
/// where `(x_i,...,x_j)` runs over decreasing indices. Returns
/// (product form, continuant form); the two are asserted equal by tests.
pub fn matrix_continuant(xs: &[Rat]) -> (Matrix, Matrix) {
    let k = xs.len();
    assert!(k >= 2, "matrix identity needs k >= 2");
    let mut product = Matrix::identity(2);
    for x in xs {
        // left-multiply by [[0,1],[1,x]]
        let step = Matrix::from_rows(vec![
            vec![Rat::zero(), Rat::one()],
            vec![Rat::one(), x.clone()],
        ]);
        product = step.mul(&product);
    }
    // decreasing-index windows x_i, x_{i-1}, ..., x_j
    let window = |hi: usize, lo: usize| -> Rat {
        if hi < lo {
            return Rat::one();
        }
        let xs_desc: Vec<Rat> = (lo..=hi).rev().map(|i| xs[i - 1].clone()).collect();
        scalar_continuant(&xs_desc)
    };
    let cont = Matrix::from_rows(vec![
        vec![window(k - 1, 2), window(k - 1, 1)],
        vec![window(k, 2), window(k, 1)],
    ]);
    (product, cont)
}

/// Gauss decomposition `M = U D L` with unipotent `U`, `L` and
/// `D = diag(M11 - M12 M22^{-1} M21, M22)`; needs `M22 != 0`.
pub fn gauss_decompose(m: &Matrix) -> Result<(Matrix, Matrix, Matrix), Error> {
    assert_eq!((m.rows, m.cols), (2, 2));
    let m22 = m[(1, 1)].clone();
    if m22.is_zero() {
        return Err(Error::NotDecomposable);
    }
    let m12_over = &m[(0, 1)] / &m22;
    let upper = Matrix::from_rows(vec![
        vec![Rat::one(), m12_over.clone()],
        vec![Rat::zero(), Rat::one()],
    ]);
    let diag = Matrix::from_rows(vec![
        vec![&m[(0, 0)] - &(&m12_over * &m[(1, 0)]), Rat::zero()],
        vec![Rat::zero(), m22.clone()],
    ]);
    let lower = Matrix::from_rows(vec![
        vec![Rat::one(), Rat::zero()],
        vec![&m[(1, 0)] / &m22, Rat::one()],
    ]);
    Ok((upper, diag, lower))
}

/// Exact convergent of the continued fraction
/// `x_1 + 1/(x_2 + 1/(...))` as the pair
/// `((x_1,...,x_k), (x_2,...,x_k))` of numerator and denominator.
pub fn continued_fraction_convergent(xs: &[Rat]) -> Result<(Rat, Rat), Error> {
    assert!(!xs.is_empty());
    let num = scalar_continuant(xs);
    let den = scalar_continuant(&xs[1..]);
    // the nested evaluation must not divide by zero along the way
    let mut value: Option<Rat> = None;
    for x in xs.iter().rev() {
        value = Some(match value {
            None => x.clone(),
            Some(v) => {
                if v.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                x + v.recip()
            }
        });
    }
    let nested = value.expect("nonempty");
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    debug_assert_eq!(nested, &num / &den);
    Ok((num, den))
}

/// Result of multiplying out the unipotent factors
/// `S_{b,n} S_{a,n} ... S_{b,1} S_{a,1}` with
/// `S_{b,i} = [[1,0],[B_i,1]]`, `S_{a,i} = [[1,A_i],[0,1]]`.
pub struct BoalchProduct {
    pub product: Matrix,
    /// `[[(A_n,...,B_1), (A_n,...,A_1)], [(B_n,...,B_1), (B_n,...,A_1)]]`
    pub continuant_form: Matrix,
    /// Schur complement `(A_n,...,B_1) - (A_n,...,A_1)(B_n,...,A_1)^{-1}(B_n,...,B_1)`,
    /// when `(B_n,...,A_1)` is invertible.
    pub schur: Option<Rat>,
    /// `(A_1,B_1,...,A_n,B_n)`.
    pub interleaved: Rat,
}

/// Multiply the 2n unipotent factors and express the four entries as Euler
/// continuants in the interleaved variables; the diagonal part of the Gauss
/// decomposition is `diag(schur, (B_n,...,A_1))` and `schur * (A_1,...,B_n) = 1`
/// at scalar points.
pub fn boalch_product(a: &[Rat], b: &[Rat]) -> BoalchProduct {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut product = Matrix::identity(2);
    for i in 0..n {
        let sa = Matrix::from_rows(vec![
            vec![Rat::one(), a[i].clone()],
            vec![Rat::zero(), Rat::one()],
        ]);
        let sb = Matrix::from_rows(vec![
            vec![Rat::one(), Rat::zero()],
            vec![b[i].clone(), Rat::one()],
        ]);
        // accumulate S_{b,i} S_{a,i} on the left
        product = sb.mul(&sa).mul(&product);
    }
    // interleaved list x_1..x_{2n} = A_1, B_1, ..., A_n, B_n
    let mut xs = Vec::with_capacity(2 * n);
    for i in 0..n {
        xs.push(a[i].clone());
        xs.push(b[i].clone());
    }
    let window_desc = |hi: usize, lo: usize| -> Rat {
        if hi < lo {
            return Rat::one();
        }
        let desc: Vec<Rat> = (lo..=hi).rev().map(|i| xs[i - 1].clone()).collect();
        scalar_continuant(&desc)
    };
    let k = 2 * n;
    let continuant_form = Matrix::from_rows(vec![
        vec![window_desc(k - 1, 2), window_desc(k - 1, 1)],
        vec![window_desc(k, 2), window_desc(k, 1)],
    ]);
    let bn_a1 = continuant_form[(1, 1)].clone();
    let schur = if bn_a1.is_zero() {
        None
    } else {
        Some(
            &continuant_form[(0, 0)]
                - &(&continuant_form[(0, 1)] * &continuant_form[(1, 0)] / &bn_a1),
        )
    };
    let interleaved = scalar_continuant(&xs);
    BoalchProduct {
        product,
        continuant_form,
        schur,
        interleaved,
    }
}
