//! Float intrinsics (std or libm) and small numeric helpers.

pub(crate) use num_complex::Complex64;

macro_rules! unary {
    ($($name:ident),*) => {
        $(
            #[cfg(feature = "std")]
            #[inline]
            pub(crate) fn $name(x: f64) -> f64 { f64::$name(x) }
            #[cfg(not(feature = "std"))]
            #[inline]
            pub(crate) fn $name(x: f64) -> f64 { libm::$name(x) }
        )*
    };
}

unary!(sinh, cosh, tanh, sqrt, cos);

#[cfg(feature = "std")]
#[inline]
pub(crate) fn atanh(x: f64) -> f64 {
    f64::atanh(x)
}
#[cfg(not(feature = "std"))]
#[inline]
pub(crate) fn atanh(x: f64) -> f64 {
    libm::atanh(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn asinh(x: f64) -> f64 {
    f64::asinh(x)
}
#[cfg(not(feature = "std"))]
#[inline]
pub(crate) fn asinh(x: f64) -> f64 {
    libm::asinh(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn acosh(x: f64) -> f64 {
    f64::acosh(x)
}
#[cfg(not(feature = "std"))]
#[inline]
pub(crate) fn acosh(x: f64) -> f64 {
    libm::acosh(x)
}

#[cfg(feature = "std")]
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    f64::abs(x)
}
#[cfg(not(feature = "std"))]
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[cfg(test)]
#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    f64::hypot(x, y)
}

#[inline]
pub(crate) fn sech(x: f64) -> f64 {
    1.0 / cosh(x)
}

#[inline]
pub(crate) fn sech2(x: f64) -> f64 {
    let s = sech(x);
    s * s
}

#[inline]
pub(crate) fn sech4(x: f64) -> f64 {
    let s = sech2(x);
    s * s
}

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}

#[inline]
pub(crate) fn pow4(x: f64) -> f64 {
    sq(sq(x))
}

#[inline]
pub(crate) fn cpow4(z: Complex64) -> Complex64 {
    let z2 = z * z;
    z2 * z2
}

/// Compensated (Neumaier) accumulator for long float sums.
#[derive(Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Pairwise (tree) sum of complex terms; the slice is consumed as scratch.
pub(crate) fn pairwise_sum(terms: &mut [Complex64]) -> Complex64 {
    fn rec(t: &[Complex64]) -> Complex64 {
        if t.len() <= 8 {
            let mut s = Complex64::new(0.0, 0.0);
            for x in t {
                s += x;
            }
            s
        } else {
            let mid = t.len() / 2;
            rec(&t[..mid]) + rec(&t[mid..])
        }
    }
    rec(terms)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub(crate) fn gauss_legendre(n: usize) -> alloc::vec::Vec<(f64, f64)> {
    use core::f64::consts::PI;
    let mut out = alloc::vec::Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess for the i-th root.
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' at x via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if abs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}
