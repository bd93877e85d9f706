//! The elliptic inverse pair of lower-triangular matrices
//!
//! ```text
//! f_nk = Π_{j=k}^{n-1} θ(a_j c_k, a_j/c_k) / Π_{j=k+1}^{n} θ(c_j c_k, c_j/c_k)
//! g_kl = c_l θ(a_l c_l, a_l/c_l) / (c_k θ(a_k c_k, a_k/c_k))
//!        · Π_{j=l+1}^{k} θ(a_j c_k, a_j/c_k) / Π_{j=l}^{k-1} θ(c_j c_k, c_j/c_k)
//! ```
//!
//! restricted to a finite index window, together with the two elliptic
//! partial-fraction identities behind it.

use crate::error::{Error, Result};
use crate::residual::{Residual, TermSum};
use crate::theta::Nome;
use crate::Complex;

/// Finite windows `a_j`, `c_j` for `j ∈ [lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequencePair {
    lo: i64,
    a: Vec<Complex>,
    c: Vec<Complex>,
    nome: Nome,
}

impl SequencePair {
    pub fn new(lo: i64, a: Vec<Complex>, c: Vec<Complex>, nome: Nome) -> Result<Self> {
        if a.len() != c.len() {
            return Err(Error::BadArity(format!(
                "a has {} entries, c has {}",
                a.len(),
                c.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::BadArity("empty sequence window".into()));
        }
        if a.iter().chain(&c).any(|z| z.norm() == 0.0) {
            return Err(Error::ZeroArgument);
        }
        Ok(SequencePair { lo, a, c, nome })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.a.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn nome(&self) -> &Nome {
        &self.nome
    }

    pub fn contains(&self, j: i64) -> bool {
        (self.lo..=self.hi()).contains(&j)
    }

    fn slot(&self, j: i64) -> Result<usize> {
        if self.contains(j) {
            Ok((j - self.lo) as usize)
        } else {
            Err(Error::IndexOutOfSequenceWindow {
                index: j,
                lo: self.lo,
                hi: self.hi(),
            })
        }
    }

    pub fn a(&self, j: i64) -> Result<Complex> {
        Ok(self.a[self.slot(j)?])
    }

    pub fn c(&self, j: i64) -> Result<Complex> {
        Ok(self.c[self.slot(j)?])
    }

    /// θ(x c_k) θ(x/c_k)
    fn pair_theta(&self, x: Complex, ck: Complex) -> Result<Complex> {
        Ok(self.nome.theta(x * ck)? * self.nome.theta(x / ck)?)
    }

    fn pair_theta_den(&self, x: Complex, ck: Complex) -> Result<Complex> {
        Ok(self.nome.theta_den(x * ck)? * self.nome.theta_den(x / ck)?)
    }
}

/// `f_nk`; 1 on the diagonal, error above it.
pub fn f_entry(seq: &SequencePair, n: i64, k: i64) -> Result<Complex> {
    if n < k {
        return Err(Error::InvalidParameter(format!(
            "f_nk needs n ≥ k, got n={n}, k={k}"
        )));
    }
    let ck = seq.c(k)?;
    seq.a(n)?;
    let mut num = Complex::new(1.0, 0.0);
    let mut den = Complex::new(1.0, 0.0);
    for j in k..n {
        num *= seq.pair_theta(seq.a(j)?, ck)?;
        den *= seq.pair_theta_den(seq.c(j + 1)?, ck)?;
    }
    Ok(num / den)
}

/// `g_kl`; 1 on the diagonal.
pub fn g_entry(seq: &SequencePair, k: i64, l: i64) -> Result<Complex> {
    if k < l {
        return Err(Error::InvalidParameter(format!(
            "g_kl needs k ≥ l, got k={k}, l={l}"
        )));
    }
    if k == l {
        seq.c(k)?;
        return Ok(Complex::new(1.0, 0.0));
    }
    let ck = seq.c(k)?;
    let cl = seq.c(l)?;
    let al = seq.a(l)?;
    let mut num = cl * seq.pair_theta(al, cl)?;
    let mut den = ck * seq.pair_theta_den(seq.a(k)?, ck)?;
    for j in l + 1..=k {
        num *= seq.pair_theta(seq.a(j)?, ck)?;
    }
    for j in l..k {
        den *= seq.pair_theta_den(seq.c(j)?, ck)?;
    }
    Ok(num / den)
}

/// Dense lower-triangular block `entries[row][col]` for `lo ≤ col ≤ row ≤ hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWindow {
    lo: i64,
    rows: Vec<Vec<Complex>>,
}

impl MatrixWindow {
    pub fn from_fn<F>(lo: i64, hi: i64, mut entry: F) -> Result<Self>
    where
        F: FnMut(i64, i64) -> Result<Complex>,
    {
        let rows = (lo..=hi)
            .map(|n| (lo..=n).map(|k| entry(n, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixWindow { lo, rows })
    }

    pub fn f_window(seq: &SequencePair, lo: i64, hi: i64) -> Result<Self> {
        Self::from_fn(lo, hi, |n, k| f_entry(seq, n, k))
    }

    pub fn g_window(seq: &SequencePair, lo: i64, hi: i64) -> Result<Self> {
        Self::from_fn(lo, hi, |k, l| g_entry(seq, k, l))
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.rows.len() as i64 - 1
    }

    /// Entry at `(row, col)`; zero above the diagonal.
    pub fn get(&self, row: i64, col: i64) -> Complex {
        if col > row {
            return Complex::new(0.0, 0.0);
        }
        self.rows[(row - self.lo) as usize][(col - self.lo) as usize]
    }

    /// Inverse by forward substitution, column by column.
    pub fn inverse(&self) -> Result<Self> {
        let size = self.rows.len();
        let mut inv: Vec<Vec<Complex>> = (0..size)
            .map(|i| vec![Complex::new(0.0, 0.0); i + 1])
            .collect();
        for col in 0..size {
            for row in col..size {
                let diag = self.rows[row][row];
                if diag.norm() == 0.0 {
                    return Err(Error::InvalidParameter("singular diagonal".into()));
                }
                let mut acc = if row == col {
                    Complex::new(1.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                };
                for m in col..row {
                    acc -= self.rows[row][m] * inv[m][col];
                }
                inv[row][col] = acc / diag;
            }
        }
        Ok(MatrixWindow {
            lo: self.lo,
            rows: inv,
        })
    }

    /// Largest entrywise relative deviation `|x - y| / max(|x|, |y|)`.
    pub fn max_relative_deviation(&self, other: &MatrixWindow) -> f64 {
        let mut worst: f64 = 0.0;
        for (ra, rb) in self.rows.iter().zip(&other.rows) {
            for (x, y) in ra.iter().zip(rb) {
                let scale = x.norm().max(y.norm());
                if scale > 0.0 {
                    worst = worst.max((x - y).norm() / scale);
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orthogonality {
    /// `Σ_k f_nk g_kl = δ_nl`
    Wmi,
    /// `Σ_k g_nk f_kl = δ_nl`
    Pmi,
}

/// Worst residual of the chosen orthogonality relation over all
/// `l0 ≤ l ≤ n ≤ n0`.
pub fn orthogonality_residual(
    seq: &SequencePair,
    l0: i64,
    n0: i64,
    which: Orthogonality,
) -> Result<Residual> {
    if n0 < l0 {
        return Err(Error::InvalidParameter(format!(
            "empty window [{l0}, {n0}]"
        )));
    }
    let f = MatrixWindow::f_window(seq, l0, n0)?;
    let g = MatrixWindow::g_window(seq, l0, n0)?;
    let (left, right) = match which {
        Orthogonality::Wmi => (&f, &g),
        Orthogonality::Pmi => (&g, &f),
    };
    let mut worst = Residual::ZERO;
    for n in l0..=n0 {
        for l in l0..=n {
            let mut acc = TermSum::new();
            for k in l..=n {
                acc.push(left.get(n, k) * right.get(k, l));
            }
            if n == l {
                acc.push(Complex::new(-1.0, 0.0));
            }
            worst = worst.worst(acc.residual());
        }
    }
    Ok(worst)
}

/// Terms of `Σ_k a_k Π_j θ(a_k b_j, a_k/b_j) / Π_{j≠k} θ(a_k a_j, a_k/a_j)`
/// (which sums to zero when `b` has two fewer entries than `a`).
pub fn gustafson_terms(a: &[Complex], b: &[Complex], nome: &Nome) -> Result<Vec<Complex>> {
    if a.len() < 2 || b.len() + 2 != a.len() {
        return Err(Error::BadArity(format!(
            "need n ≥ 2 a-parameters and n-2 b-parameters, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    a.iter()
        .enumerate()
        .map(|(k, &ak)| {
            let mut term = ak;
            for &bj in b {
                term *= nome.theta(ak * bj)? * nome.theta(ak / bj)?;
            }
            for (j, &aj) in a.iter().enumerate() {
                if j != k {
                    term /= nome.theta_den(ak * aj)? * nome.theta_den(ak / aj)?;
                }
            }
            Ok(term)
        })
        .collect()
}

pub fn gustafson_residual(a: &[Complex], b: &[Complex], nome: &Nome) -> Result<Residual> {
    Ok(Residual::from_terms(gustafson_terms(a, b, nome)?))
}

/// Terms (k = l..=n) of
/// `Σ_k (1/c_k) Π_{j=l+1}^{n-1} θ(a_j c_k, a_j/c_k) / Π_{j≠k} θ(c_j c_k, c_j/c_k)`.
pub fn mipf_terms(seq: &SequencePair, l: i64, n: i64) -> Result<Vec<Complex>> {
    if n <= l {
        return Err(Error::InvalidParameter(format!(
            "need n > l, got n={n}, l={l}"
        )));
    }
    seq.c(l)?;
    seq.c(n)?;
    (l..=n)
        .map(|k| {
            let ck = seq.c(k)?;
            let mut term = ck.inv();
            for j in l + 1..n {
                term *= seq.pair_theta(seq.a(j)?, ck)?;
            }
            for j in (l..=n).filter(|&j| j != k) {
                term /= seq.pair_theta_den(seq.c(j)?, ck)?;
            }
            Ok(term)
        })
        .collect()
}

pub fn mipf_residual(seq: &SequencePair, l: i64, n: i64) -> Result<Residual> {
    Ok(Residual::from_terms(mipf_terms(seq, l, n)?))
}

/// Gustafson's parameters for the same window: `c_l..c_n` become the
/// a-list and `a_{l+1}..a_{n-1}` the b-list. With these, each mipf term is
/// `-(Π a_j / Π c_j)` times the matching Gustafson term.
pub fn mipf_as_gustafson(
    seq: &SequencePair,
    l: i64,
    n: i64,
) -> Result<(Vec<Complex>, Vec<Complex>, Complex)> {
    let cs = (l..=n).map(|j| seq.c(j)).collect::<Result<Vec<_>>>()?;
    let as_ = (l + 1..n).map(|j| seq.a(j)).collect::<Result<Vec<_>>>()?;
    let ratio = -as_.iter().product::<Complex>() / cs.iter().product::<Complex>();
    Ok((cs, as_, ratio))
}

/// Tolerance on `Π a = Π b` accepted by the Tannery–Molk identity.
pub const PRODUCT_CONSTRAINT_TOL: f64 = 1e-12;

/// Terms of `Σ_k Π_j θ(a_k/b_j) / Π_{j≠k} θ(a_k/a_j)` under `Π a = Π b`.
pub fn tannery_molk_terms(a: &[Complex], b: &[Complex], nome: &Nome) -> Result<Vec<Complex>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::BadArity(format!(
            "need equally many a and b parameters, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let pa: Complex = a.iter().product();
    let pb: Complex = b.iter().product();
    let gap = (pa - pb).norm() / pa.norm().max(pb.norm());
    if !(gap <= PRODUCT_CONSTRAINT_TOL) {
        return Err(Error::ConstraintViolated(format!(
            "Π a and Π b differ by relative {gap:e}"
        )));
    }
    a.iter()
        .enumerate()
        .map(|(k, &ak)| {
            let mut term = Complex::new(1.0, 0.0);
            for &bj in b {
                term *= nome.theta(ak / bj)?;
            }
            for (j, &aj) in a.iter().enumerate() {
                if j != k {
                    term /= nome.theta_den(ak / aj)?;
                }
            }
            Ok(term)
        })
        .collect()
}

pub fn tannery_molk_residual(a: &[Complex], b: &[Complex], nome: &Nome) -> Result<Residual> {
    Ok(Residual::from_terms(tannery_molk_terms(a, b, nome)?))
}

/// The last b-parameter that makes `Π a = Π b`, given the others.
pub fn solve_tannery_molk_last(a: &[Complex], b_head: &[Complex]) -> Result<Complex> {
    if b_head.len() + 1 != a.len() {
        return Err(Error::BadArity(format!(
            "need {} leading b-parameters, got {}",
            a.len().saturating_sub(1),
            b_head.len()
        )));
    }
    let pa: Complex = a.iter().product();
    let pb: Complex = b_head.iter().product();
    Ok(pa / pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn point(rng: &mut ChaCha8Rng) -> Complex {
        Complex::from_polar(rng.random_range(0.3..2.0), rng.random_range(0.0..2.0 * PI))
    }

    fn random_seq(rng: &mut ChaCha8Rng, lo: i64, len: usize, p: f64) -> SequencePair {
        loop {
            let a = (0..len).map(|_| point(rng)).collect();
            let c = (0..len).map(|_| point(rng)).collect();
            let seq = SequencePair::new(lo, a, c, Nome::real(p).unwrap()).unwrap();
            let hi = seq.hi();
            if MatrixWindow::g_window(&seq, lo, hi).is_ok()
                && MatrixWindow::f_window(&seq, lo, hi).is_ok()
            {
                return seq;
            }
        }
    }

    /// The p = 0 entry, written with 1 - x directly.
    fn f_polynomial(seq: &SequencePair, n: i64, k: i64) -> Complex {
        let one = c64(1.0, 0.0);
        let ck = seq.c(k).unwrap();
        let mut v = one;
        for j in k..n {
            let aj = seq.a(j).unwrap();
            v *= (one - aj * ck) * (one - aj / ck);
        }
        for j in k + 1..=n {
            let cj = seq.c(j).unwrap();
            v /= (one - cj * ck) * (one - cj / ck);
        }
        v
    }

    #[test]
    fn diagonal_and_first_subdiagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seq = random_seq(&mut rng, -2, 6, 0.4);
        let nome = *seq.nome();
        for k in -2..=3 {
            assert_eq!(f_entry(&seq, k, k).unwrap(), c64(1.0, 0.0));
            assert_eq!(g_entry(&seq, k, k).unwrap(), c64(1.0, 0.0));
        }
        let k = 0;
        let (ak, ck, ck1) = (seq.a(k).unwrap(), seq.c(k).unwrap(), seq.c(k + 1).unwrap());
        let want = nome.theta_multi(&[ak * ck, ak / ck]).unwrap()
            / nome.theta_multi(&[ck1 * ck, ck1 / ck]).unwrap();
        assert!((f_entry(&seq, k + 1, k).unwrap() - want).norm() < 1e-14 * want.norm());
        // 2x2 inverse of [[1, 0], [f, 1]] is [[1, 0], [-f, 1]].
        let g = g_entry(&seq, k + 1, k).unwrap();
        assert!((g + want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn trigonometric_f_matches_polynomial_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let seq = random_seq(&mut rng, 0, 5, 0.0);
        for k in 0..3 {
            let got = f_entry(&seq, k + 2, k).unwrap();
            let want = f_polynomial(&seq, k + 2, k);
            assert!((got - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn g_is_triangular_inverse_of_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let seq = random_seq(&mut rng, 3, 8, 0.4);
            let f = MatrixWindow::f_window(&seq, 3, 10).unwrap();
            let g = MatrixWindow::g_window(&seq, 3, 10).unwrap();
            let inv = f.inverse().unwrap();
            // scale each entry by Σ_m |f_rm| |g_mc|, the natural error bound
            // of forward substitution
            let mut dev: f64 = 0.0;
            for r in 3..=10 {
                for c in 3..=r {
                    let scale: f64 = (c..=r)
                        .map(|m| f.get(r, m).norm() * g.get(m, c).norm())
                        .sum();
                    dev = dev.max((inv.get(r, c) - g.get(r, c)).norm() / scale);
                }
            }
            assert!(dev < 1e-10, "deviation {dev}");
        }
    }

    #[test]
    fn orthogonality_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let seq = random_seq(&mut rng, 0, 8, 0.5);
        for which in [Orthogonality::Wmi, Orthogonality::Pmi] {
            let single = orthogonality_residual(&seq, 2, 2, which).unwrap();
            assert!(single.relative < 1e-13);
            let two = orthogonality_residual(&seq, 2, 3, which).unwrap();
            assert!(two.relative < 1e-12);
            let full = orthogonality_residual(&seq, 0, 7, which).unwrap();
            assert!(full.relative < 1e-9, "{which:?}: {full:?}");
        }
    }

    #[test]
    fn gustafson_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nome = Nome::real(0.5).unwrap();
        let a = [point(&mut rng), point(&mut rng)];
        assert!(gustafson_residual(&a, &[], &nome).unwrap().relative < 1e-13);

        let a: Vec<_> = (0..5).map(|_| point(&mut rng)).collect();
        let b: Vec<_> = (0..3).map(|_| point(&mut rng)).collect();
        assert!(gustafson_residual(&a, &b, &nome).unwrap().relative < 1e-10);

        let trig = Nome::real(0.0).unwrap();
        let a: Vec<_> = (0..4).map(|_| point(&mut rng)).collect();
        let b: Vec<_> = (0..2).map(|_| point(&mut rng)).collect();
        assert!(gustafson_residual(&a, &b, &trig).unwrap().relative < 1e-12);

        assert!(matches!(
            gustafson_residual(&a, &b[..1], &trig),
            Err(Error::BadArity(_))
        ));
    }

    #[test]
    fn gustafson_is_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let nome = Nome::real(0.3).unwrap();
        let a: Vec<_> = (0..5).map(|_| point(&mut rng)).collect();
        let b: Vec<_> = (0..3).map(|_| point(&mut rng)).collect();
        let base = gustafson_residual(&a, &b, &nome).unwrap();
        let mut a2 = a.clone();
        a2.rotate_left(2);
        let mut b2 = b.clone();
        b2.reverse();
        let perm = gustafson_residual(&a2, &b2, &nome).unwrap();
        assert!((base.scale - perm.scale).abs() <= 1e-13 * base.scale);
        assert!((base.value - perm.value).norm() <= 1e-13 * base.scale);
    }

    #[test]
    fn mipf_examples_and_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let seq = random_seq(&mut rng, 0, 7, 0.4);
        assert!(mipf_residual(&seq, 1, 2).unwrap().relative < 1e-13);
        assert!(mipf_residual(&seq, 1, 5).unwrap().relative < 1e-10);

        let terms = mipf_terms(&seq, 1, 5).unwrap();
        let (a, b, ratio) = mipf_as_gustafson(&seq, 1, 5).unwrap();
        let dpf = gustafson_terms(&a, &b, seq.nome()).unwrap();
        for (m, d) in terms.iter().zip(&dpf) {
            let want = ratio * d;
            assert!((m - want).norm() < 1e-11 * want.norm());
        }
    }

    #[test]
    fn tannery_molk_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let nome = Nome::real(0.5).unwrap();
        let x = point(&mut rng);
        assert_eq!(
            tannery_molk_residual(&[x], &[x], &nome).unwrap().relative,
            0.0
        );

        let a = [point(&mut rng), point(&mut rng)];
        let b1 = point(&mut rng);
        let b = [b1, solve_tannery_molk_last(&a, &[b1]).unwrap()];
        assert!(tannery_molk_residual(&a, &b, &nome).unwrap().relative < 1e-12);

        let a: Vec<_> = (0..5).map(|_| point(&mut rng)).collect();
        let mut b: Vec<_> = (0..4).map(|_| point(&mut rng)).collect();
        b.push(solve_tannery_molk_last(&a, &b).unwrap());
        assert!(tannery_molk_residual(&a, &b, &nome).unwrap().relative < 1e-10);

        b[0] *= 1.0 + 1e-6;
        assert!(matches!(
            tannery_molk_residual(&a, &b, &nome),
            Err(Error::ConstraintViolated(_))
        ));
    }
}
