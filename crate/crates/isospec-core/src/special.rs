//! Reference eigenfunctions: normalized Hermite (oscillator) functions,
//! spherical Bessel functions, associated Laguerre polynomials and radial
//! oscillator functions.
//!
//! Every family can produce jets `[f, f', f'', f''']`: first derivatives come
//! from the standard recurrences, higher ones from the defining differential
//! equation, so all derivatives are analytic (no finite differences).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::smooth::SmoothFn;

const MAX_INDEX: usize = 60;
const MAX_L: usize = 50;

/// L²-normalized eigenfunction of `-1/2 d²/dx² + 1/2 x²` at level `n`.
///
/// Upward recurrence on the normalized functions:
/// `phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}`.
pub fn hermite_fn(n: usize, x: f64) -> Result<f64> {
    if n > MAX_INDEX {
        return Err(Error::InvalidArgument(format!("hermite index {n} > {MAX_INDEX}")));
    }
    let mut prev = 0.0;
    let mut cur = math::powf(core::f64::consts::PI, -0.25) * math::exp(-0.5 * x * x);
    for m in 0..n {
        let next = math::sqrt(2.0 / (m as f64 + 1.0)) * x * cur
            - math::sqrt(m as f64 / (m as f64 + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Jet `[phi_n, phi_n', phi_n'', phi_n''']`.
///
/// `phi_n' = sqrt(2n) phi_{n-1} - x phi_n`; higher orders from the eigenvalue
/// equation `phi'' = (x² - (2n+1)) phi`.
pub fn hermite_jet(n: usize, x: f64) -> Result<[f64; 4]> {
    let f = hermite_fn(n, x)?;
    let d1 = if n == 0 {
        -x * f
    } else {
        math::sqrt(2.0 * n as f64) * hermite_fn(n - 1, x)? - x * f
    };
    let c = x * x - (2.0 * n as f64 + 1.0);
    let d2 = c * f;
    let d3 = 2.0 * x * f + c * d1;
    Ok([f, d1, d2, d3])
}

/// Which spherical Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    /// Regular at the origin, `j_0 = sin(x)/x`.
    J,
    /// Singular at the origin, `n_0 = -cos(x)/x`.
    N,
}

/// Values `f_0..=f_lmax` of the spherical Bessel function of the given kind.
///
/// `j_l` by downward (Miller) recurrence started at `lmax + 15 + ceil(rho)`
/// and normalized against whichever of `j_0`, `j_1` is larger in magnitude;
/// `n_l` by the stable upward recurrence.
fn bessel_table(kind: BesselKind, lmax: usize, rho: f64) -> Result<Vec<f64>> {
    if lmax > MAX_L + 2 {
        return Err(Error::InvalidArgument(format!("bessel order {lmax} > {MAX_L}")));
    }
    match kind {
        BesselKind::N => {
            if rho <= 0.0 {
                return Err(Error::Singularity {
                    location: rho,
                    context: "spherical Bessel n_l requires rho > 0".into(),
                });
            }
            let mut out = Vec::with_capacity(lmax + 1);
            let n0 = -math::cos(rho) / rho;
            out.push(n0);
            if lmax == 0 {
                return Ok(out);
            }
            let n1 = -math::cos(rho) / (rho * rho) - math::sin(rho) / rho;
            out.push(n1);
            for l in 1..lmax {
                let next = (2.0 * l as f64 + 1.0) / rho * out[l] - out[l - 1];
                out.push(next);
            }
            Ok(out)
        }
        BesselKind::J => {
            if rho == 0.0 {
                let mut out = alloc::vec![0.0; lmax + 1];
                out[0] = 1.0;
                return Ok(out);
            }
            if rho < 0.0 {
                return Err(Error::InvalidArgument("bessel argument must be >= 0".into()));
            }
            let start = lmax + 15 + math::ceil(rho) as usize;
            let mut table = alloc::vec![0.0_f64; start + 2];
            table[start + 1] = 0.0;
            table[start] = 1e-30;
            for m in (1..=start).rev() {
                let v = (2.0 * m as f64 + 1.0) / rho * table[m] - table[m + 1];
                table[m - 1] = v;
                if math::abs(v) > 1e250 {
                    for t in table[m - 1..].iter_mut().take(start + 3 - m) {
                        *t *= 1e-250;
                    }
                }
            }
            let j0 = math::sin(rho) / rho;
            let j1 = math::sin(rho) / (rho * rho) - math::cos(rho) / rho;
            let scale = if math::abs(j0) >= math::abs(j1) {
                j0 / table[0]
            } else {
                j1 / table[1]
            };
            Ok(table[..=lmax].iter().map(|v| v * scale).collect())
        }
    }
}

/// Spherical Bessel function of order `l` at `rho`.
pub fn spherical_bessel(kind: BesselKind, l: usize, rho: f64) -> Result<f64> {
    if l > MAX_L {
        return Err(Error::InvalidArgument(format!("bessel order {l} > {MAX_L}")));
    }
    Ok(bessel_table(kind, l, rho)?[l])
}

/// Jet `[f_l, f_l', f_l'', f_l''']` of a spherical Bessel function.
///
/// `f_l' = (l/rho) f_l - f_{l+1}`; higher orders from the radial equation
/// `f'' = -(2/rho) f' - (1 - l(l+1)/rho²) f`.
pub fn spherical_bessel_jet(kind: BesselKind, l: usize, rho: f64) -> Result<[f64; 4]> {
    if l > MAX_L {
        return Err(Error::InvalidArgument(format!("bessel order {l} > {MAX_L}")));
    }
    if rho <= 0.0 {
        return Err(Error::Singularity {
            location: rho,
            context: "spherical Bessel jets require rho > 0".into(),
        });
    }
    let t = bessel_table(kind, l + 1, rho)?;
    let ll = l as f64;
    let f = t[l];
    let d1 = ll / rho * f - t[l + 1];
    let w = 1.0 - ll * (ll + 1.0) / (rho * rho);
    let d2 = -2.0 / rho * d1 - w * f;
    let d3 = -2.0 / rho * d2 + 2.0 / (rho * rho) * d1 - w * d1 - 2.0 * ll * (ll + 1.0) / (rho * rho * rho) * f;
    Ok([f, d1, d2, d3])
}

/// Associated Laguerre polynomial `L_n^k(rho)` by the three-term upward
/// recurrence `(n+1) L_{n+1}^k = (2n+k+1-rho) L_n^k - (n+k) L_{n-1}^k`.
pub fn assoc_laguerre(n: usize, k: f64, rho: f64) -> Result<f64> {
    if n > MAX_INDEX {
        return Err(Error::InvalidArgument(format!("laguerre index {n} > {MAX_INDEX}")));
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        let mf = m as f64;
        let next = ((2.0 * mf + k + 1.0 - rho) * cur - (mf + k) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `d/drho L_n^k(rho) = -L_{n-1}^{k+1}(rho)` (zero for `n = 0`).
pub fn assoc_laguerre_d(n: usize, k: f64, rho: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(-assoc_laguerre(n - 1, k + 1.0, rho)?)
}

/// Radial eigenvalue of the isotropic oscillator: `4n + 2l + 3`.
pub fn radial_eigenvalue(n: usize, l: usize) -> f64 {
    4.0 * n as f64 + 2.0 * l as f64 + 3.0
}

/// Unnormalized radial oscillator function
/// `u_{nl}(r) = r^{l+1} e^{-r²/2} L_n^{l+1/2}(r²)`.
pub fn radial_u(n: usize, l: usize, r: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::InvalidArgument("radial coordinate must be >= 0".into()));
    }
    let rho = r * r;
    Ok(math::powi(r, l as i32 + 1)
        * math::exp(-0.5 * rho)
        * assoc_laguerre(n, l as f64 + 0.5, rho)?)
}

/// Jet `[u, u', u'', u''']` of the radial oscillator function.
///
/// `u' = ((l+1)/r - r) u + 2 r^{l+2} e^{-r²/2} dL/drho`; higher orders from
/// `u'' = (r² + l(l+1)/r² - (4n+2l+3)) u`.
pub fn radial_u_jet(n: usize, l: usize, r: f64) -> Result<[f64; 4]> {
    if r <= 0.0 {
        return Err(Error::Singularity {
            location: r,
            context: "radial jets require r > 0".into(),
        });
    }
    let rho = r * r;
    let k = l as f64 + 0.5;
    let weight = math::powi(r, l as i32 + 1) * math::exp(-0.5 * rho);
    let lag = assoc_laguerre(n, k, rho)?;
    let dlag = assoc_laguerre_d(n, k, rho)?;
    let u = weight * lag;
    let ll = l as f64;
    let d1 = ((ll + 1.0) / r - r) * u + 2.0 * r * weight * dlag;
    let c = rho + ll * (ll + 1.0) / rho - radial_eigenvalue(n, l);
    let d2 = c * u;
    let d3 = (2.0 * r - 2.0 * ll * (ll + 1.0) / (rho * r)) * u + c * d1;
    Ok([u, d1, d2, d3])
}

/// An indexed family of eigenfunctions able to produce jets of order 3.
#[derive(Clone)]
pub struct EigenfunctionFamily {
    pub id: String,
    pub min_index: i64,
    pub max_index: i64,
    /// Normalization convention of the stored functions.
    pub normalization: &'static str,
    jet: Arc<dyn Fn(i64, f64) -> Result<[f64; 4]> + Send + Sync>,
}

impl core::fmt::Debug for EigenfunctionFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EigenfunctionFamily")
            .field("id", &self.id)
            .field("range", &(self.min_index, self.max_index))
            .finish()
    }
}

impl EigenfunctionFamily {
    pub fn new(
        id: impl Into<String>,
        range: (i64, i64),
        normalization: &'static str,
        jet: impl Fn(i64, f64) -> Result<[f64; 4]> + Send + Sync + 'static,
    ) -> Self {
        EigenfunctionFamily {
            id: id.into(),
            min_index: range.0,
            max_index: range.1,
            normalization,
            jet: Arc::new(jet),
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.min_index && n <= self.max_index
    }

    pub fn jet(&self, n: i64, x: f64) -> Result<[f64; 4]> {
        if !self.contains(n) {
            return Err(Error::InvalidArgument(format!(
                "index {n} outside family '{}' range [{}, {}]",
                self.id, self.min_index, self.max_index
            )));
        }
        (self.jet)(n, x)
    }

    pub fn eval(&self, n: i64, x: f64) -> Result<f64> {
        Ok(self.jet(n, x)?[0])
    }

    /// Member `n` as a [`SmoothFn`] with all three derivatives attached.
    pub fn state(&self, n: i64) -> Result<SmoothFn> {
        if !self.contains(n) {
            return Err(Error::InvalidArgument(format!(
                "index {n} outside family '{}' range [{}, {}]",
                self.id, self.min_index, self.max_index
            )));
        }
        let jet = Arc::clone(&self.jet);
        Ok(SmoothFn::from_jet(move |x| jet(n, x).unwrap_or([f64::NAN; 4])))
    }

    /// Oscillator eigenfunctions `phi_n`.
    pub fn hermite() -> Self {
        EigenfunctionFamily::new("hermite", (0, MAX_INDEX as i64), "L2-normalized", |n, x| {
            hermite_jet(n as usize, x)
        })
    }

    /// Spherical Bessel functions indexed by `l`.
    pub fn spherical(kind: BesselKind) -> Self {
        let id = match kind {
            BesselKind::J => "spherical-j",
            BesselKind::N => "spherical-n",
        };
        EigenfunctionFamily::new(id, (0, MAX_L as i64), "j_0 = sin(rho)/rho", move |l, rho| {
            spherical_bessel_jet(kind, l as usize, rho)
        })
    }

    /// Radial oscillator functions at fixed `l`, indexed by `n`.
    pub fn radial_in_n(l: usize) -> Self {
        EigenfunctionFamily::new(
            format!("radial-u[l={l}]"),
            (0, MAX_INDEX as i64),
            "unnormalized r^{l+1} e^{-r^2/2} L_n^{l+1/2}(r^2)",
            move |n, r| radial_u_jet(n as usize, l, r),
        )
    }

    /// Radial oscillator functions at fixed `n`, indexed by `l`.
    pub fn radial_in_l(n: usize) -> Self {
        EigenfunctionFamily::new(
            format!("radial-u[n={n}]"),
            (0, MAX_L as i64),
            "unnormalized r^{l+1} e^{-r^2/2} L_n^{l+1/2}(r^2)",
            move |l, r| radial_u_jet(n, l as usize, r),
        )
    }
}
