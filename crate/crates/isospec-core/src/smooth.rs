//! Scalar functions carrying analytic derivatives.
//!
//! Coefficient functions of operators must supply exact first derivatives
//! (composition formulas consume them), and eigenfunctions must supply up to
//! third derivatives so that a second-order operator applied to a first-order
//! image can still be evaluated pointwise.  [`SmoothFn`] bundles a value
//! closure with up to three optional derivative closures and propagates
//! availability through arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;

use crate::error::{Error, Result};

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable with optional analytic derivatives up to
/// third order.  Cloning is cheap (shared closures).
#[derive(Clone)]
pub struct SmoothFn {
    f: Func,
    d: [Option<Func>; 3],
    label: Option<&'static str>,
}

impl core::fmt::Debug for SmoothFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SmoothFn")
            .field("label", &self.label)
            .field("orders", &self.orders())
            .finish()
    }
}

impl SmoothFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SmoothFn { f: Arc::new(f), d: [None, None, None], label: None }
    }

    pub fn with_d1(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SmoothFn { f: Arc::new(f), d: [Some(Arc::new(d1)), None, None], label: None }
    }

    pub fn with_d2(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SmoothFn {
            f: Arc::new(f),
            d: [Some(Arc::new(d1)), Some(Arc::new(d2)), None],
            label: None,
        }
    }

    pub fn with_d3(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d3: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SmoothFn {
            f: Arc::new(f),
            d: [Some(Arc::new(d1)), Some(Arc::new(d2)), Some(Arc::new(d3))],
            label: None,
        }
    }

    /// Builds from a jet evaluator returning `[f, f', f'', f''']` at once.
    pub fn from_jet(jet: impl Fn(f64) -> [f64; 4] + Send + Sync + 'static) -> Self {
        let jet = Arc::new(jet);
        let (j0, j1, j2, j3) =
            (Arc::clone(&jet), Arc::clone(&jet), Arc::clone(&jet), Arc::clone(&jet));
        SmoothFn {
            f: Arc::new(move |x| j0(x)[0]),
            d: [
                Some(Arc::new(move |x| j1(x)[1])),
                Some(Arc::new(move |x| j2(x)[2])),
                Some(Arc::new(move |x| j3(x)[3])),
            ],
            label: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        SmoothFn::with_d3(move |_| c, |_| 0.0, |_| 0.0, |_| 0.0).labeled("const")
    }

    pub fn zero() -> Self {
        SmoothFn::constant(0.0).labeled("zero")
    }

    /// The coordinate function `x`.
    pub fn coordinate() -> Self {
        SmoothFn::with_d3(|x| x, |_| 1.0, |_| 0.0, |_| 0.0).labeled("x")
    }

    /// Monomial `x^p` (negative powers allowed away from zero).
    pub fn power(p: i32) -> Self {
        let c1 = p as f64;
        let c2 = (p * (p - 1)) as f64;
        let c3 = (p * (p - 1) * (p - 2)) as f64;
        SmoothFn::with_d3(
            move |x| crate::math::powi(x, p),
            move |x| c1 * crate::math::powi(x, p - 1),
            move |x| c2 * crate::math::powi(x, p - 2),
            move |x| c3 * crate::math::powi(x, p - 3),
        )
        .labeled("x^p")
    }

    /// Composition `exp(self)` with chain-rule derivatives.
    pub fn exp(&self) -> SmoothFn {
        let orders = self.orders();
        let inner = self.clone();
        let jet = Arc::new(move |x: f64| -> [f64; 4] {
            let e = crate::math::exp(inner.eval(x));
            let g1 = if orders >= 1 { inner.d1(x).unwrap_or(f64::NAN) } else { f64::NAN };
            let g2 = if orders >= 2 { inner.d2(x).unwrap_or(f64::NAN) } else { f64::NAN };
            let g3 = if orders >= 3 { inner.d3(x).unwrap_or(f64::NAN) } else { f64::NAN };
            [
                e,
                g1 * e,
                (g2 + g1 * g1) * e,
                (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * e,
            ]
        });
        let mk = |k: usize| -> Option<Func> {
            if orders < k {
                return None;
            }
            let jet = Arc::clone(&jet);
            Some(Arc::new(move |x| jet(x)[k]) as Func)
        };
        let jet0 = Arc::clone(&jet);
        SmoothFn { f: Arc::new(move |x| jet0(x)[0]), d: [mk(1), mk(2), mk(3)], label: None }
    }

    pub fn labeled(mut self, label: &'static str) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> &'static str {
        self.label.unwrap_or("fn")
    }

    /// Number of consecutively available derivative orders (0..=3).
    pub fn orders(&self) -> usize {
        let mut n = 0;
        for slot in &self.d {
            if slot.is_some() {
                n += 1;
            } else {
                break;
            }
        }
        n
    }

    pub fn has_deriv(&self, order: usize) -> bool {
        order == 0 || (order <= 3 && self.d[order - 1].is_some())
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// k-th derivative, k in 0..=3.
    pub fn deriv(&self, k: usize, x: f64) -> Result<f64> {
        match k {
            0 => Ok((self.f)(x)),
            1..=3 => match &self.d[k - 1] {
                Some(g) => Ok(g(x)),
                None => Err(self.missing(k)),
            },
            _ => Err(Error::InvalidArgument(format!("derivative order {k} > 3"))),
        }
    }

    pub fn d1(&self, x: f64) -> Result<f64> {
        self.deriv(1, x)
    }
    pub fn d2(&self, x: f64) -> Result<f64> {
        self.deriv(2, x)
    }
    pub fn d3(&self, x: f64) -> Result<f64> {
        self.deriv(3, x)
    }

    fn missing(&self, order: usize) -> Error {
        Error::MissingDerivative { order, context: String::from(self.label()) }
    }

    /// Requires derivatives up to `order`, else a configuration error.
    pub fn require(&self, order: usize) -> Result<()> {
        for k in 1..=order {
            if !self.has_deriv(k) {
                return Err(self.missing(k));
            }
        }
        Ok(())
    }

    fn take(&self, k: usize) -> Option<Func> {
        if k == 0 {
            Some(Arc::clone(&self.f))
        } else {
            self.d[k - 1].as_ref().map(Arc::clone)
        }
    }

    /// Shifts derivatives down one order: the derivative of `self` as a
    /// `SmoothFn`.  Fails if no first derivative is attached.
    pub fn derivative(&self) -> Result<SmoothFn> {
        let f = self.take(1).ok_or_else(|| self.missing(1))?;
        Ok(SmoothFn { f, d: [self.take(2), self.take(3), None], label: self.label })
    }

    pub fn neg(&self) -> SmoothFn {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> SmoothFn {
        let wrap = |g: &Func| {
            let g = Arc::clone(g);
            Arc::new(move |x| c * g(x)) as Func
        };
        SmoothFn {
            f: wrap(&self.f),
            d: [
                self.d[0].as_ref().map(wrap),
                self.d[1].as_ref().map(wrap),
                self.d[2].as_ref().map(wrap),
            ],
            label: self.label,
        }
    }

    pub fn add_const(&self, c: f64) -> SmoothFn {
        let f = Arc::clone(&self.f);
        SmoothFn {
            f: Arc::new(move |x| f(x) + c),
            d: self.d.clone(),
            label: self.label,
        }
    }

    pub fn add(&self, other: &SmoothFn) -> SmoothFn {
        let zip = |a: Option<Func>, b: Option<Func>| -> Option<Func> {
            let (a, b) = (a?, b?);
            Some(Arc::new(move |x| a(x) + b(x)) as Func)
        };
        let (f, g) = (Arc::clone(&self.f), Arc::clone(&other.f));
        SmoothFn {
            f: Arc::new(move |x| f(x) + g(x)),
            d: [
                zip(self.take(1), other.take(1)),
                zip(self.take(2), other.take(2)),
                zip(self.take(3), other.take(3)),
            ],
            label: None,
        }
    }

    pub fn sub(&self, other: &SmoothFn) -> SmoothFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SmoothFn) -> SmoothFn {
        let orders = self.orders().min(other.orders());
        let jets: [Option<Func>; 3] = {
            let mk = |k: usize| -> Option<Func> {
                if orders < k {
                    return None;
                }
                // Leibniz rule at order k.
                let fs: alloc::vec::Vec<Func> = (0..=k).map(|i| self.take(i).unwrap()).collect();
                let gs: alloc::vec::Vec<Func> = (0..=k).map(|i| other.take(i).unwrap()).collect();
                const BINOM: [[f64; 4]; 4] = [
                    [1.0, 0.0, 0.0, 0.0],
                    [1.0, 1.0, 0.0, 0.0],
                    [1.0, 2.0, 1.0, 0.0],
                    [1.0, 3.0, 3.0, 1.0],
                ];
                Some(Arc::new(move |x| {
                    let mut acc = 0.0;
                    for i in 0..=k {
                        acc += BINOM[k][i] * fs[i](x) * gs[k - i](x);
                    }
                    acc
                }) as Func)
            };
            [mk(1), mk(2), mk(3)]
        };
        let (f, g) = (Arc::clone(&self.f), Arc::clone(&other.f));
        SmoothFn { f: Arc::new(move |x| f(x) * g(x)), d: jets, label: None }
    }

    /// Quotient `self / other`; derivatives via Leibniz on `f = q·g`.
    pub fn div(&self, other: &SmoothFn) -> SmoothFn {
        let orders = self.orders().min(other.orders());
        let jet = {
            let num = self.clone();
            let den = other.clone();
            move |x: f64| -> [f64; 4] {
                let g = [
                    den.eval(x),
                    if orders >= 1 { den.d1(x).unwrap_or(f64::NAN) } else { f64::NAN },
                    if orders >= 2 { den.d2(x).unwrap_or(f64::NAN) } else { f64::NAN },
                    if orders >= 3 { den.d3(x).unwrap_or(f64::NAN) } else { f64::NAN },
                ];
                let fj = [
                    num.eval(x),
                    if orders >= 1 { num.d1(x).unwrap_or(f64::NAN) } else { f64::NAN },
                    if orders >= 2 { num.d2(x).unwrap_or(f64::NAN) } else { f64::NAN },
                    if orders >= 3 { num.d3(x).unwrap_or(f64::NAN) } else { f64::NAN },
                ];
                let q0 = fj[0] / g[0];
                let q1 = (fj[1] - q0 * g[1]) / g[0];
                let q2 = (fj[2] - 2.0 * q1 * g[1] - q0 * g[2]) / g[0];
                let q3 = (fj[3] - 3.0 * q2 * g[1] - 3.0 * q1 * g[2] - q0 * g[3]) / g[0];
                [q0, q1, q2, q3]
            }
        };
        let jet = Arc::new(jet);
        let mk = |k: usize| -> Option<Func> {
            if orders < k {
                return None;
            }
            let jet = Arc::clone(&jet);
            Some(Arc::new(move |x| jet(x)[k]) as Func)
        };
        let jet0 = Arc::clone(&jet);
        SmoothFn {
            f: Arc::new(move |x| jet0(x)[0]),
            d: [mk(1), mk(2), mk(3)],
            label: None,
        }
    }
}
