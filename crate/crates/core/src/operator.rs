//! Operator-method reconstruction of `g_kl` from the columns of `f`.
//!
//! Columns are formal Laurent series `f_k(z) = Σ_{n≥k} f_nk z^n` and
//! `h_k(z) = Σ_{l≤k} h_kl z^{-l}`, held on finite coefficient windows. With the
//! diagonal operators `𝒜 z^k = a_k z^k`, `𝒞 z^k = c_k z^k` and two auxiliary
//! multipliers `u`, `v`, every column satisfies `U f_k = w_k V f_k` for
//!
//! ```text
//! U   = θ(𝒞v, 𝒞/v) - z θ(𝒜v, 𝒜/v)
//! V   = z θ(𝒜u, 𝒜/u) - θ(𝒞u, 𝒞/u)
//! w_k = u θ(v c_k, c_k/v) / (c_k θ(u c_k, u/c_k))
//! ```
//!
//! and the rows of the inverse are `g_k = V* h_k / ⟨f_k, V* h_k⟩`, where `h_k`
//! solves the adjoint system. Pairing is `⟨a, b⟩ = [z^0](a·b)`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::inversion::{f_entry, SequencePair};
use crate::residual::{Residual, TermSum};
use crate::theta::Nome;
use crate::Complex;

/// Minimum separation between distinct multipliers `w_k`.
pub const SPECTRUM_GAP: f64 = 1e-8;

/// A formal Laurent series known on a finite stretch of exponents.
///
/// Coefficients below `lo` are exactly zero. Above the stored range they are
/// zero for a terminating window and unknown otherwise; in the latter case the
/// top `margin` stored coefficients are also untrusted. Only trusted
/// coefficients are ever consulted by pairings and residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentWindow {
    lo: i64,
    coeffs: Vec<Complex>,
    margin: usize,
    terminating: bool,
}

impl LaurentWindow {
    /// A Laurent polynomial `Σ coeffs[i] z^{lo+i}`, exact in every coefficient.
    pub fn polynomial(lo: i64, coeffs: Vec<Complex>) -> Self {
        LaurentWindow {
            lo,
            coeffs,
            margin: 0,
            terminating: true,
        }
    }

    pub fn monomial(exponent: i64) -> Self {
        Self::polynomial(exponent, vec![Complex::new(1.0, 0.0)])
    }

    /// The leading stretch of an infinite series; everything above the last
    /// stored coefficient is unknown.
    pub fn truncated(lo: i64, coeffs: Vec<Complex>) -> Self {
        LaurentWindow {
            lo,
            coeffs,
            margin: 0,
            terminating: false,
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored exponent (`lo - 1` when nothing is stored).
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    pub fn is_terminating(&self) -> bool {
        self.terminating
    }

    /// Highest exponent whose coefficient is trusted; `None` if all are.
    pub fn trusted_hi(&self) -> Option<i64> {
        if self.terminating {
            None
        } else {
            Some(self.hi() - self.margin as i64)
        }
    }

    fn trusts(&self, e: i64) -> bool {
        self.trusted_hi().is_none_or(|t| e <= t)
    }

    fn stored(&self, e: i64) -> Complex {
        if e < self.lo || e > self.hi() {
            Complex::new(0.0, 0.0)
        } else {
            self.coeffs[(e - self.lo) as usize]
        }
    }

    /// Trusted coefficient of `z^e`, or `None` when it is not determined.
    pub fn coeff(&self, e: i64) -> Option<Complex> {
        if e < self.lo {
            Some(Complex::new(0.0, 0.0))
        } else if self.trusts(e) {
            Some(self.stored(e))
        } else {
            None
        }
    }

    /// Multiplication by `z`.
    pub fn shift(&self) -> Self {
        LaurentWindow {
            lo: self.lo + 1,
            ..self.clone()
        }
    }

    /// Forget every coefficient above `e`.
    pub fn truncate_above(&self, e: i64) -> Self {
        if e >= self.hi() {
            return self.clone();
        }
        let keep = (e - self.lo + 1).max(0) as usize;
        let margin = self.margin.saturating_sub(self.coeffs.len() - keep);
        LaurentWindow {
            lo: self.lo,
            coeffs: self.coeffs[..keep].to_vec(),
            margin,
            terminating: false,
        }
    }

    pub fn scaled(&self, factor: Complex) -> Self {
        LaurentWindow {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// `Σ weight_i · window_i`. The result is trusted only where every
    /// input is.
    pub fn combine(parts: &[(Complex, &LaurentWindow)]) -> Self {
        let Some(lo) = parts.iter().map(|(_, w)| w.lo).min() else {
            return Self::polynomial(0, Vec::new());
        };
        let hi = parts.iter().map(|(_, w)| w.hi()).max().unwrap_or(lo - 1);
        let trusted_hi = parts.iter().filter_map(|(_, w)| w.trusted_hi()).min();
        let coeffs = (lo..=hi)
            .map(|e| parts.iter().map(|(s, w)| s * w.stored(e)).sum())
            .collect::<Vec<Complex>>();
        match trusted_hi {
            None => Self::polynomial(lo, coeffs),
            Some(t) => {
                let margin = (hi - t).clamp(0, coeffs.len() as i64) as usize;
                LaurentWindow {
                    lo,
                    coeffs,
                    margin,
                    terminating: false,
                }
            }
        }
    }

    pub fn sub(&self, other: &LaurentWindow) -> Self {
        let one = Complex::new(1.0, 0.0);
        Self::combine(&[(one, self), (-one, other)])
    }

    /// Exponents at which a combination of `parts` is trusted.
    fn trusted_span(parts: &[(Complex, &LaurentWindow)]) -> RangeInclusive<i64> {
        let lo = parts.iter().map(|(_, w)| w.lo).min().unwrap_or(0);
        let hi = parts
            .iter()
            .filter_map(|(_, w)| w.trusted_hi())
            .min()
            .unwrap_or_else(|| parts.iter().map(|(_, w)| w.hi()).max().unwrap_or(lo - 1));
        lo..=hi
    }

    /// Coefficientwise cancellation residual of `Σ weight_i · window_i`
    /// over every trusted exponent.
    pub fn coefficient_residuals(parts: &[(Complex, &LaurentWindow)]) -> Vec<(i64, Residual)> {
        Self::trusted_span(parts)
            .map(|e| {
                let mut acc = TermSum::new();
                for (s, w) in parts {
                    acc.push(s * w.stored(e));
                }
                (e, acc.residual())
            })
            .collect()
    }
}

/// `⟨a, b⟩ = Σ_m a_m b_{-m}`.
pub fn pair(a: &LaurentWindow, b: &LaurentWindow) -> Result<Complex> {
    let (first, last) = (a.lo, -b.lo);
    if first > last {
        return Ok(Complex::new(0.0, 0.0));
    }
    if !a.trusts(last) || !b.trusts(-first) {
        return Err(Error::InsufficientWindow(format!(
            "pairing needs exponents [{first}, {last}] of the left factor and \
             [{}, {}] of the right factor",
            -last, -first
        )));
    }
    Ok((first..=last).map(|m| a.stored(m) * b.stored(-m)).sum())
}

/// `z·w`
pub fn apply_shift(w: &LaurentWindow) -> LaurentWindow {
    w.shift()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    A,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Identity,
    /// `x ↦ θ(x w) θ(x/w)`
    ThetaPair(Complex),
}

impl Weight {
    fn eval(&self, x: Complex, nome: &Nome) -> Result<Complex> {
        match *self {
            Weight::Identity => Ok(Complex::new(1.0, 0.0)),
            Weight::ThetaPair(w) => Ok(nome.theta(x * w)? * nome.theta(x / w)?),
        }
    }
}

/// Diagonal operator `z^k ↦ weight(s_k) z^k` with `s` one of the two
/// sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalSpec {
    pub symbol: Symbol,
    pub weight: Weight,
}

impl DiagonalSpec {
    pub fn theta_pair(symbol: Symbol, w: Complex) -> Self {
        DiagonalSpec {
            symbol,
            weight: Weight::ThetaPair(w),
        }
    }
}

/// Apply a diagonal operator, or its adjoint (`z^{-k} ↦ weight(s_k) z^{-k}`).
pub fn apply_diagonal(
    spec: DiagonalSpec,
    seq: &SequencePair,
    w: &LaurentWindow,
    adjoint: bool,
) -> Result<LaurentWindow> {
    let coeffs = w
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let e = w.lo + i as i64;
            let index = if adjoint { -e } else { e };
            let s = match spec.symbol {
                Symbol::A => seq.a(index)?,
                Symbol::C => seq.c(index)?,
            };
            Ok(c * spec.weight.eval(s, seq.nome())?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentWindow {
        coeffs,
        ..w.clone()
    })
}

/// Sequences plus the auxiliary multipliers `u`, `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorContext {
    seq: SequencePair,
    u: Complex,
    v: Complex,
}

impl OperatorContext {
    /// Checks that every theta value the method divides by stays away from
    /// zero and that the multipliers `w_k` are pairwise distinct.
    pub fn new(seq: SequencePair, u: Complex, v: Complex) -> Result<Self> {
        if u.norm() == 0.0 || v.norm() == 0.0 {
            return Err(Error::ZeroArgument);
        }
        let nome = *seq.nome();
        nome.theta_multi_den(&[u * v, u / v])?;
        for k in seq.lo()..=seq.hi() {
            let ck = seq.c(k)?;
            nome.theta_multi_den(&[u * ck, u / ck, ck * v, ck / v])?;
        }
        let ctx = OperatorContext { seq, u, v };
        let ws = (ctx.seq.lo()..=ctx.seq.hi())
            .map(|k| Ok((k, ctx.w(k)?)))
            .collect::<Result<Vec<_>>>()?;
        for (i, &(j, wj)) in ws.iter().enumerate() {
            for &(k, wk) in &ws[i + 1..] {
                let gap = (wj - wk).norm();
                if !(gap > SPECTRUM_GAP) {
                    return Err(Error::DegenerateSpectrum { j, k, gap });
                }
            }
        }
        Ok(ctx)
    }

    pub fn seq(&self) -> &SequencePair {
        &self.seq
    }

    pub fn u(&self) -> Complex {
        self.u
    }

    pub fn v(&self) -> Complex {
        self.v
    }

    fn nome(&self) -> &Nome {
        self.seq.nome()
    }

    fn theta2(&self, x: Complex, y: Complex) -> Result<Complex> {
        Ok(self.nome().theta(x * y)? * self.nome().theta(x / y)?)
    }

    /// `w_k = u θ(v c_k, c_k/v) / (c_k θ(u c_k, u/c_k))`
    pub fn w(&self, k: i64) -> Result<Complex> {
        let ck = self.seq.c(k)?;
        let den = self.nome().theta_den(self.u * ck)? * self.nome().theta_den(self.u / ck)?;
        Ok(self.u * self.theta2(ck, self.v)? / (ck * den))
    }

    fn diag(
        &self,
        symbol: Symbol,
        w: Complex,
        x: &LaurentWindow,
        adjoint: bool,
    ) -> Result<LaurentWindow> {
        apply_diagonal(DiagonalSpec::theta_pair(symbol, w), &self.seq, x, adjoint)
    }

    /// `U x`
    pub fn apply_u(&self, x: &LaurentWindow) -> Result<LaurentWindow> {
        let c = self.diag(Symbol::C, self.v, x, false)?;
        let a = self.diag(Symbol::A, self.v, x, false)?.shift();
        Ok(c.sub(&a))
    }

    /// `V x`
    pub fn apply_v(&self, x: &LaurentWindow) -> Result<LaurentWindow> {
        let a = self.diag(Symbol::A, self.u, x, false)?.shift();
        let c = self.diag(Symbol::C, self.u, x, false)?;
        Ok(a.sub(&c))
    }

    /// `z x`, cut off where the adjoint weights would leave the sequence
    /// window.
    fn shift_for_adjoint(&self, x: &LaurentWindow) -> LaurentWindow {
        x.shift().truncate_above(-self.seq.lo())
    }

    /// `U* x = θ(𝒞*v, 𝒞*/v) x - θ(𝒜*v, 𝒜*/v) z x`
    pub fn apply_u_adjoint(&self, x: &LaurentWindow) -> Result<LaurentWindow> {
        let c = self.diag(Symbol::C, self.v, x, true)?;
        let a = self.diag(Symbol::A, self.v, &self.shift_for_adjoint(x), true)?;
        Ok(c.sub(&a))
    }

    /// `V* x = θ(𝒜*u, 𝒜*/u) z x - θ(𝒞*u, 𝒞*/u) x`
    pub fn apply_v_adjoint(&self, x: &LaurentWindow) -> Result<LaurentWindow> {
        let (a, c) = self.v_adjoint_parts(x)?;
        Ok(a.sub(&c))
    }

    /// The two pieces of `V* x`, before subtraction.
    pub fn v_adjoint_parts(&self, x: &LaurentWindow) -> Result<(LaurentWindow, LaurentWindow)> {
        let a = self.diag(Symbol::A, self.u, &self.shift_for_adjoint(x), true)?;
        let c = self.diag(Symbol::C, self.u, x, true)?;
        Ok((a, c))
    }

    /// `f_k(z)` on exponents `[k, hi]`.
    pub fn f_column(&self, k: i64) -> Result<LaurentWindow> {
        let coeffs = (k..=self.seq.hi())
            .map(|n| f_entry(&self.seq, n, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentWindow::truncated(k, coeffs))
    }

    /// `h_k(z)` on exponents `[-k, -lo]`, i.e. `h_kl` for `l = k` down to `lo`.
    pub fn h_column(&self, k: i64) -> Result<LaurentWindow> {
        let coeffs = (self.seq.lo()..=k)
            .rev()
            .map(|l| h_closed_form(self, k, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentWindow::truncated(-k, coeffs))
    }
}

/// Coefficientwise residuals of `U f_k - w_k V f_k`.
pub fn functional_eq_coefficients(ctx: &OperatorContext, k: i64) -> Result<Vec<(i64, Residual)>> {
    let f = ctx.f_column(k)?;
    let wk = ctx.w(k)?;
    let one = Complex::new(1.0, 0.0);
    let cv = ctx.diag(Symbol::C, ctx.v, &f, false)?;
    let av = ctx.diag(Symbol::A, ctx.v, &f, false)?.shift();
    let au = ctx.diag(Symbol::A, ctx.u, &f, false)?.shift();
    let cu = ctx.diag(Symbol::C, ctx.u, &f, false)?;
    let parts = [(one, &cv), (-one, &av), (-wk, &au), (wk, &cu)];
    let out = LaurentWindow::coefficient_residuals(&parts);
    if out.is_empty() {
        return Err(Error::InsufficientWindow(format!(
            "no trusted coefficients for column {k}"
        )));
    }
    Ok(out)
}

pub fn functional_eq_residual(ctx: &OperatorContext, k: i64) -> Result<Residual> {
    Ok(worst_of(functional_eq_coefficients(ctx, k)?))
}

fn worst_of(list: Vec<(i64, Residual)>) -> Residual {
    list.into_iter()
        .fold(Residual::ZERO, |acc, (_, r)| acc.worst(r))
}

/// Second route to the functional equation: each side of the recurrence
/// `θ(c_n c_k, c_n/c_k) f_nk = θ(a_{n-1} c_k, a_{n-1}/c_k) f_{n-1,k}`,
/// multiplied by `θ(uv, u/v)`, is compared against the corresponding
/// operator-side grouping multiplied by `θ(u c_k, u/c_k)`. The two agree by
/// the addition formula. Returns the worst disagreement.
pub fn functional_eq_via_addition(ctx: &OperatorContext, k: i64) -> Result<Residual> {
    let f = ctx.f_column(k)?;
    let wk = ctx.w(k)?;
    let ck = ctx.seq.c(k)?;
    let outer = ctx.theta2(ctx.u, ck)?;
    let multiplier = ctx.theta2(ctx.u, ctx.v)?;

    let c_side = [
        (outer, ctx.diag(Symbol::C, ctx.v, &f, false)?),
        (outer * wk, ctx.diag(Symbol::C, ctx.u, &f, false)?),
    ];
    let a_side = [
        (outer, ctx.diag(Symbol::A, ctx.v, &f, false)?.shift()),
        (outer * wk, ctx.diag(Symbol::A, ctx.u, &f, false)?.shift()),
    ];

    let mut worst = Residual::ZERO;
    for n in k..=ctx.seq.hi() {
        let fnk = f.coeff(n).expect("f column is trusted on its window");
        let direct = multiplier * ctx.theta2(ctx.seq.c(n)?, ck)? * fnk;
        worst = worst.worst(grouped_residual(&c_side, n, direct));
        if n > k {
            let prev = f.coeff(n - 1).expect("trusted");
            let direct = multiplier * ctx.theta2(ctx.seq.a(n - 1)?, ck)? * prev;
            worst = worst.worst(grouped_residual(&a_side, n, direct));
        }
    }
    Ok(worst)
}

/// `Σ weight_i [z^e] window_i - direct`, flattened.
fn grouped_residual(group: &[(Complex, LaurentWindow)], e: i64, direct: Complex) -> Residual {
    let mut acc = TermSum::new();
    for (w, x) in group {
        acc.push(w * x.coeff(e).expect("coefficient inside the trusted window"));
    }
    acc.push(-direct);
    acc.residual()
}

/// Residual of `θ(c_n c_k, c_n/c_k) f_nk = θ(a_{n-1} c_k, a_{n-1}/c_k) f_{n-1,k}`
/// over `n` in `ns`.
pub fn column_recurrence_residual(
    ctx: &OperatorContext,
    k: i64,
    ns: RangeInclusive<i64>,
) -> Result<Residual> {
    let ck = ctx.seq.c(k)?;
    let mut worst = Residual::ZERO;
    for n in ns {
        let lhs = ctx.theta2(ctx.seq.c(n)?, ck)? * f_entry(&ctx.seq, n, k)?;
        let rhs = ctx.theta2(ctx.seq.a(n - 1)?, ck)? * f_entry(&ctx.seq, n - 1, k)?;
        worst = worst.worst(Residual::of_difference(&[lhs], &[rhs]));
    }
    Ok(worst)
}

/// `h_kl = Π_{j=l}^{k-1} θ(a_j c_k, a_j/c_k) / θ(c_j c_k, c_j/c_k)`, `h_kk = 1`.
pub fn h_closed_form(ctx: &OperatorContext, k: i64, l: i64) -> Result<Complex> {
    if l > k {
        return Err(Error::InvalidParameter(format!(
            "h_kl needs l ≤ k, got k={k}, l={l}"
        )));
    }
    let seq = &ctx.seq;
    let ck = seq.c(k)?;
    seq.c(l)?;
    let nome = ctx.nome();
    let mut acc = Complex::new(1.0, 0.0);
    for j in l..k {
        let (aj, cj) = (seq.a(j)?, seq.c(j)?);
        acc *= nome.theta(aj * ck)? * nome.theta(aj / ck)?;
        acc /= nome.theta_den(cj * ck)? * nome.theta_den(cj / ck)?;
    }
    Ok(acc)
}

/// Residual of `θ(c_l c_k, c_l/c_k) h_kl = θ(a_l c_k, a_l/c_k) h_{k,l+1}`.
pub fn h_recurrence_residual(ctx: &OperatorContext, k: i64, l: i64) -> Result<Residual> {
    let ck = ctx.seq.c(k)?;
    let lhs = ctx.theta2(ctx.seq.c(l)?, ck)? * h_closed_form(ctx, k, l)?;
    let rhs = ctx.theta2(ctx.seq.a(l)?, ck)? * h_closed_form(ctx, k, l + 1)?;
    Ok(Residual::of_difference(&[lhs], &[rhs]))
}

/// Coefficientwise residuals of `U* h_k - w_k V* h_k`, keyed by exponent.
pub fn dual_eq_coefficients(ctx: &OperatorContext, k: i64) -> Result<Vec<(i64, Residual)>> {
    let h = ctx.h_column(k)?;
    let zh = ctx.shift_for_adjoint(&h);
    let wk = ctx.w(k)?;
    let one = Complex::new(1.0, 0.0);
    let cv = ctx.diag(Symbol::C, ctx.v, &h, true)?;
    let av = ctx.diag(Symbol::A, ctx.v, &zh, true)?;
    let au = ctx.diag(Symbol::A, ctx.u, &zh, true)?;
    let cu = ctx.diag(Symbol::C, ctx.u, &h, true)?;
    let parts = [(one, &cv), (-one, &av), (-wk, &au), (wk, &cu)];
    let out = LaurentWindow::coefficient_residuals(&parts);
    if out.is_empty() {
        return Err(Error::InsufficientWindow(format!(
            "no trusted coefficients for column {k}"
        )));
    }
    Ok(out)
}

pub fn dual_eq_residual(ctx: &OperatorContext, k: i64) -> Result<Residual> {
    Ok(worst_of(dual_eq_coefficients(ctx, k)?))
}

/// Second route to the dual system: both groupings of the `z^{-l}`
/// coefficient, multiplied by `θ(u c_k, u/c_k)` and divided by
/// `θ(uv, u/v)`, against the two sides of the `h` recurrence.
pub fn dual_eq_via_addition(ctx: &OperatorContext, k: i64) -> Result<Residual> {
    let h = ctx.h_column(k)?;
    let zh = ctx.shift_for_adjoint(&h);
    let wk = ctx.w(k)?;
    let ck = ctx.seq.c(k)?;
    let factor = ctx.theta2(ctx.u, ck)?
        / (ctx.nome().theta_den(ctx.u * ctx.v)? * ctx.nome().theta_den(ctx.u / ctx.v)?);

    let c_side = [
        (factor, ctx.diag(Symbol::C, ctx.v, &h, true)?),
        (factor * wk, ctx.diag(Symbol::C, ctx.u, &h, true)?),
    ];
    let a_side = [
        (factor, ctx.diag(Symbol::A, ctx.v, &zh, true)?),
        (factor * wk, ctx.diag(Symbol::A, ctx.u, &zh, true)?),
    ];

    let mut worst = Residual::ZERO;
    for l in (ctx.seq.lo()..=k).rev() {
        let e = -l;
        let recurrence_c = ctx.theta2(ctx.seq.c(l)?, ck)? * h_closed_form(ctx, k, l)?;
        worst = worst.worst(grouped_residual(&c_side, e, recurrence_c));
        if l < k {
            let recurrence_a = ctx.theta2(ctx.seq.a(l)?, ck)? * h_closed_form(ctx, k, l + 1)?;
            worst = worst.worst(grouped_residual(&a_side, e, recurrence_a));
        }
    }
    Ok(worst)
}

/// `V* h_k(z)`
pub fn v_star_h(ctx: &OperatorContext, k: i64) -> Result<LaurentWindow> {
    ctx.apply_v_adjoint(&ctx.h_column(k)?)
}

/// The two closed forms of the `z^{-l}` coefficient of `V* h_k`:
///
/// ```text
/// [θ(c_l c_k, c_l/c_k)/θ(a_l c_k, a_l/c_k) · θ(a_l u, a_l/u) - θ(c_l u, c_l/u)] h_kl
/// θ(c_k u, c_k/u) · a_l θ(a_l c_l, c_l/a_l) / (c_k θ(a_l c_k, a_l/c_k)) · h_kl
/// ```
pub fn v_star_h_closed_forms(ctx: &OperatorContext, k: i64, l: i64) -> Result<(Complex, Complex)> {
    let seq = &ctx.seq;
    let (al, cl, ck) = (seq.a(l)?, seq.c(l)?, seq.c(k)?);
    let hkl = h_closed_form(ctx, k, l)?;
    let nome = ctx.nome();
    let den = nome.theta_den(al * ck)? * nome.theta_den(al / ck)?;
    let bracket = ctx.theta2(cl, ck)? / den * ctx.theta2(al, ctx.u)? - ctx.theta2(cl, ctx.u)?;
    let collapsed =
        ctx.theta2(ck, ctx.u)? * al * nome.theta(al * cl)? * nome.theta(cl / al)? / (ck * den);
    Ok((bracket * hkl, collapsed * hkl))
}

/// `(θ(𝒜*u, 𝒜*/u) z h_k, θ(𝒞*u, 𝒞*/u) h_k)`, whose difference is
/// [`v_star_h`].
pub fn v_star_h_parts(ctx: &OperatorContext, k: i64) -> Result<(LaurentWindow, LaurentWindow)> {
    ctx.v_adjoint_parts(&ctx.h_column(k)?)
}

/// Residual of `reconstruct_g` at `(k, l)` against `want`: the two operator
/// terms of the `z^{-l}` coefficient of `V* h_k`, divided by the normalizer,
/// minus `want`. Cancellation in the coefficient shows up in the scale.
pub fn reconstruction_residual(
    ctx: &OperatorContext,
    k: i64,
    l: i64,
    want: Complex,
) -> Result<Residual> {
    let (a, c) = v_star_h_parts(ctx, k)?;
    let norm = normalizer(ctx, k)?;
    let e = -l;
    let part = |w: &LaurentWindow| {
        w.coeff(e).map(|x| x / norm).ok_or_else(|| {
            Error::InsufficientWindow(format!("coefficient of z^{e} in V*h_{k} is not determined"))
        })
    };
    Ok(Residual::from_terms([part(&a)?, -part(&c)?, -want]))
}

/// `⟨f_k, V* h_k⟩`, which collapses to `-θ(c_k u, c_k/u)` because `f_kk = 1`.
pub fn normalizer(ctx: &OperatorContext, k: i64) -> Result<Complex> {
    pair(&ctx.f_column(k)?, &v_star_h(ctx, k)?)
}

pub fn normalizer_closed_form(ctx: &OperatorContext, k: i64) -> Result<Complex> {
    Ok(-ctx.theta2(ctx.seq.c(k)?, ctx.u)?)
}

/// `g_kl` for `l` in `ls`, read off `V* h_k / ⟨f_k, V* h_k⟩`.
pub fn reconstruct_g(
    ctx: &OperatorContext,
    k: i64,
    ls: RangeInclusive<i64>,
) -> Result<Vec<(i64, Complex)>> {
    let vh = v_star_h(ctx, k)?;
    let norm = pair(&ctx.f_column(k)?, &vh)?;
    if norm.norm() == 0.0 {
        return Err(Error::DivisionByZeroTheta {
            arg: ctx.seq.c(k)? * ctx.u,
            delta: ctx.nome().delta(),
        });
    }
    ls.map(|l| {
        let e = -l;
        if l > k {
            return Ok((l, Complex::new(0.0, 0.0)));
        }
        match vh.coeff(e) {
            Some(c) => Ok((l, c / norm)),
            None => Err(Error::InsufficientWindow(format!(
                "coefficient of z^{e} in V*h_{k} is not determined"
            ))),
        }
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::inversion::g_entry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex {
        Complex::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..2.0 * PI))
    }

    fn random_window(rng: &mut ChaCha8Rng, lo: i64, len: usize) -> LaurentWindow {
        LaurentWindow::polynomial(lo, (0..len).map(|_| point(rng, 0.5, 1.5)).collect())
    }

    fn context(seed: u64, lo: i64, len: usize, p: f64) -> OperatorContext {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let a = (0..len).map(|_| point(&mut rng, 0.3, 2.0)).collect();
            let c = (0..len).map(|_| point(&mut rng, 0.3, 2.0)).collect();
            let seq = SequencePair::new(lo, a, c, Nome::real(p).unwrap()).unwrap();
            let (u, v) = (point(&mut rng, 0.5, 1.5), point(&mut rng, 0.5, 1.5));
            if let Ok(ctx) = OperatorContext::new(seq, u, v) {
                let ok = (lo..lo + len as i64)
                    .all(|k| g_entry(ctx.seq(), k, lo).is_ok() && ctx.f_column(k).is_ok());
                if ok {
                    return ctx;
                }
            }
        }
    }

    /// Direct convolution of the full products, independent of `pair`.
    fn convolution_at_zero(a: &LaurentWindow, b: &LaurentWindow) -> Complex {
        let mut total = c64(0.0, 0.0);
        for i in a.lo()..=a.hi() {
            for j in b.lo()..=b.hi() {
                if i + j == 0 {
                    total += a.coeff(i).unwrap() * b.coeff(j).unwrap();
                }
            }
        }
        total
    }

    #[test]
    fn pairing_of_monomials() {
        let a = LaurentWindow::monomial(3);
        assert_eq!(
            pair(&a, &LaurentWindow::monomial(-3)).unwrap(),
            c64(1.0, 0.0)
        );
        assert_eq!(
            pair(&a, &LaurentWindow::monomial(-2)).unwrap(),
            c64(0.0, 0.0)
        );
    }

    #[test]
    fn pairing_matches_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_window(&mut rng, -4, 9);
        let b = random_window(&mut rng, -6, 9);
        let got = pair(&a, &b).unwrap();
        let want = convolution_at_zero(&a, &b);
        assert!((got - want).norm() < 1e-14 * want.norm().max(1.0));
    }

    #[test]
    fn pairing_refuses_untrusted_tail() {
        let a = LaurentWindow::truncated(-2, vec![c64(1.0, 0.0); 3]);
        let b = LaurentWindow::truncated(-2, vec![c64(1.0, 0.0); 3]);
        // needs a_m for m up to 2, but only exponents up to 0 are known
        assert!(matches!(pair(&a, &b), Err(Error::InsufficientWindow(_))));
    }

    #[test]
    fn shift_behaviour() {
        let z3 = LaurentWindow::monomial(3);
        assert_eq!(apply_shift(&z3), LaurentWindow::monomial(4));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_window(&mut rng, -3, 7);
        let b = random_window(&mut rng, -5, 9);
        let left = pair(&a.shift(), &b).unwrap();
        let right = pair(&a, &b.shift()).unwrap();
        assert!((left - right).norm() < 1e-14 * left.norm().max(1.0));
        assert_eq!(
            a.shift().shift(),
            LaurentWindow::polynomial(-1, a.coeffs.clone())
        );
    }

    #[test]
    fn combining_untrusts_the_ragged_top() {
        let f = LaurentWindow::truncated(0, vec![c64(1.0, 0.0); 5]);
        let d = f.sub(&f.shift());
        assert_eq!(d.hi(), 5);
        assert_eq!(d.trusted_hi(), Some(4));
        assert_eq!(d.margin(), 1);
        assert!(d.coeff(5).is_none());
    }

    #[test]
    fn diagonal_operators() {
        let ctx = context(13, -3, 8, 0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let w = random_window(&mut rng, -3, 8);
        let id = DiagonalSpec {
            symbol: Symbol::A,
            weight: Weight::Identity,
        };
        assert_eq!(apply_diagonal(id, ctx.seq(), &w, false).unwrap(), w);

        let v = ctx.v();
        let spec = DiagonalSpec::theta_pair(Symbol::A, v);
        let zk = LaurentWindow::monomial(2);
        let got = apply_diagonal(spec, ctx.seq(), &zk, false).unwrap();
        let a2 = ctx.seq().a(2).unwrap();
        let nome = ctx.seq().nome();
        let want = nome.theta(a2 * v).unwrap() * nome.theta(a2 / v).unwrap();
        assert_eq!(got.coeff(2).unwrap(), want);

        // adjointness ⟨D a, b⟩ = ⟨a, D* b⟩
        let b = random_window(&mut rng, -4, 8);
        for symbol in [Symbol::A, Symbol::C] {
            let spec = DiagonalSpec::theta_pair(symbol, ctx.u());
            let left = pair(&apply_diagonal(spec, ctx.seq(), &w, false).unwrap(), &b).unwrap();
            let right = pair(&w, &apply_diagonal(spec, ctx.seq(), &b, true).unwrap()).unwrap();
            assert!((left - right).norm() < 1e-13 * left.norm().max(1.0));
        }

        let outside = LaurentWindow::monomial(9);
        assert!(matches!(
            apply_diagonal(spec, ctx.seq(), &outside, false),
            Err(Error::IndexOutOfSequenceWindow { index: 9, .. })
        ));
    }

    #[test]
    fn column_recurrence() {
        let ctx = context(15, 0, 8, 0.4);
        for k in 0..4 {
            let r = column_recurrence_residual(&ctx, k, k + 1..=ctx.seq().hi()).unwrap();
            assert!(r.relative < 1e-11, "{r:?}");
        }
        let trig = context(16, 0, 6, 0.0);
        let r = column_recurrence_residual(&trig, 1, 2..=5).unwrap();
        assert!(r.relative < 1e-13);
    }

    #[test]
    fn functional_equation() {
        let ctx = context(17, 0, 8, 0.4);
        for k in 0..6 {
            let coeffs = functional_eq_coefficients(&ctx, k).unwrap();
            assert_eq!(coeffs[0].0, k);
            assert!(coeffs[0].1.relative < 1e-12);
            assert!(functional_eq_residual(&ctx, k).unwrap().relative < 1e-10);
            assert!(functional_eq_via_addition(&ctx, k).unwrap().relative < 1e-12);
        }
    }

    #[test]
    fn dual_equation_and_h() {
        let ctx = context(18, -2, 8, 0.4);
        for k in -1..=5 {
            assert_eq!(h_closed_form(&ctx, k, k).unwrap(), c64(1.0, 0.0));
            let coeffs = dual_eq_coefficients(&ctx, k).unwrap();
            assert_eq!(coeffs[0].0, -k);
            assert!(coeffs[0].1.relative < 1e-12);
            assert!(dual_eq_residual(&ctx, k).unwrap().relative < 1e-10);
            assert!(dual_eq_via_addition(&ctx, k).unwrap().relative < 1e-11);
            for l in -2..k {
                assert!(h_recurrence_residual(&ctx, k, l).unwrap().relative < 1e-12);
            }
        }
        let k = 3;
        let l = 2;
        let seq = ctx.seq();
        let nome = seq.nome();
        let (al, cl, ck) = (seq.a(l).unwrap(), seq.c(l).unwrap(), seq.c(k).unwrap());
        let single = nome.theta_multi(&[al * ck, al / ck]).unwrap()
            / nome.theta_multi(&[cl * ck, cl / ck]).unwrap();
        assert!((h_closed_form(&ctx, k, l).unwrap() - single).norm() < 1e-14 * single.norm());
    }

    #[test]
    fn v_star_h_forms_agree() {
        let ctx = context(19, 0, 8, 0.5);
        for k in 1..8 {
            let vh = v_star_h(&ctx, k).unwrap();
            for l in 0..=k {
                let (bracket, collapsed) = v_star_h_closed_forms(&ctx, k, l).unwrap();
                assert!(Residual::of_difference(&[bracket], &[collapsed]).relative < 1e-11);
                let op = vh.coeff(-l).unwrap();
                assert!(Residual::of_difference(&[op], &[bracket]).relative < 1e-11);
            }
            let n = normalizer(&ctx, k).unwrap();
            let closed = normalizer_closed_form(&ctx, k).unwrap();
            assert!(Residual::of_difference(&[n], &[closed]).relative < 1e-13);
        }
    }

    #[test]
    fn reconstruction_matches_g() {
        let ctx = context(20, 0, 8, 0.4);
        for k in 0..8 {
            let got = reconstruct_g(&ctx, k, 0..=k).unwrap();
            for (l, g) in got {
                let want = g_entry(ctx.seq(), k, l).unwrap();
                assert!((g - want).norm() <= 1e-10 * want.norm(), "k={k} l={l}");
                if l == k {
                    assert!((g - 1.0).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn reconstruction_residual_is_small_against_closed_form() {
        let ctx = context(24, -1, 7, 0.45);
        for k in -1..6 {
            for l in -1..=k {
                let want = g_entry(ctx.seq(), k, l).unwrap();
                let r = reconstruction_residual(&ctx, k, l, want).unwrap();
                assert!(r.relative < 1e-13, "k={k} l={l} {r:?}");
            }
            let off = reconstruction_residual(&ctx, k, k, c64(1.001, 0.0)).unwrap();
            assert!(off.relative > 1e-4);
        }
    }

    #[test]
    fn reconstruction_is_independent_of_multipliers() {
        let first = context(21, 0, 7, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let second = loop {
            let (u, v) = (point(&mut rng, 0.5, 1.5), point(&mut rng, 0.5, 1.5));
            if let Ok(ctx) = OperatorContext::new(first.seq().clone(), u, v) {
                break ctx;
            }
        };
        for k in 0..7 {
            let x = reconstruct_g(&first, k, 0..=k).unwrap();
            let y = reconstruct_g(&second, k, 0..=k).unwrap();
            for ((_, gx), (_, gy)) in x.iter().zip(&y) {
                assert!((gx - gy).norm() <= 1e-10 * gx.norm());
            }
        }
    }

    #[test]
    fn coincident_multipliers_are_rejected() {
        let ctx = context(23, 0, 3, 0.3);
        let seq = ctx.seq();
        // c_1 = c_0 forces w_0 = w_1
        let a: Vec<_> = (0..3).map(|j| seq.a(j).unwrap()).collect();
        let c = vec![seq.c(0).unwrap(), seq.c(0).unwrap(), seq.c(2).unwrap()];
        let dup = SequencePair::new(0, a, c, *seq.nome()).unwrap();
        assert!(matches!(
            OperatorContext::new(dup, ctx.u(), ctx.v()),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }
}
