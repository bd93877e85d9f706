use crate::Complex;

/// Cancellation-aware residual of a sum that should vanish.
///
/// `value` is the signed total, `scale` the sum of the magnitudes of every
/// term that went into it. `relative = |value| / scale`, or 0 when there was
/// nothing to cancel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: Complex,
    pub scale: f64,
    pub relative: f64,
}

impl Residual {
    pub const ZERO: Residual = Residual {
        value: Complex { re: 0.0, im: 0.0 },
        scale: 0.0,
        relative: 0.0,
    };

    pub fn new(value: Complex, scale: f64) -> Self {
        let relative = if scale > 0.0 {
            value.norm() / scale
        } else {
            0.0
        };
        Residual {
            value,
            scale,
            relative,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = Complex>>(terms: I) -> Self {
        let mut acc = TermSum::new();
        acc.extend(terms);
        acc.residual()
    }

    /// Residual of `lhs - rhs` where both sides are given as term lists.
    pub fn of_difference(lhs: &[Complex], rhs: &[Complex]) -> Self {
        let mut acc = TermSum::new();
        acc.extend(lhs.iter().copied());
        acc.extend(rhs.iter().map(|t| -t));
        acc.residual()
    }

    /// The worse (larger relative) of two residuals.
    pub fn worst(self, other: Residual) -> Residual {
        // NaN compares false, so make sure it propagates as the worse value.
        if other.relative > self.relative || other.relative.is_nan() {
            other
        } else {
            self
        }
    }

    pub fn is_below(&self, tolerance: f64) -> bool {
        self.relative < tolerance
    }
}

impl Default for Residual {
    fn default() -> Self {
        Residual::ZERO
    }
}

/// Running signed sum together with the sum of term magnitudes.
#[derive(Debug, Clone, Copy, Default)]
pub struct TermSum {
    value: Complex,
    scale: f64,
}

impl TermSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, term: Complex) {
        self.value += term;
        self.scale += term.norm();
    }

    pub fn value(&self) -> Complex {
        self.value
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn residual(&self) -> Residual {
        Residual::new(self.value, self.scale)
    }
}

impl Extend<Complex> for TermSum {
    fn extend<I: IntoIterator<Item = Complex>>(&mut self, iter: I) {
        for t in iter {
            self.push(t);
        }
    }
}
