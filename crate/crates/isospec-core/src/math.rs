//! Float math routed through `std` intrinsics when available, `libm` otherwise.

#![allow(dead_code)]

macro_rules! forward {
    ($(fn $name:ident($($arg:ident: $ty:ty),+) -> $ret:ty => $libm:ident;)+) => {
        $(
            #[cfg(feature = "std")]
            #[inline(always)]
            pub fn $name($($arg: $ty),+) -> $ret { forward!(@std $name, $($arg),+) }

            #[cfg(not(feature = "std"))]
            #[inline(always)]
            pub fn $name($($arg: $ty),+) -> $ret { libm::$libm($($arg),+) }
        )+
    };
    (@std $name:ident, $a:ident) => { $a.$name() };
    (@std $name:ident, $a:ident, $b:ident) => { $a.$name($b) };
}

forward! {
    fn exp(x: f64) -> f64 => exp;
    fn ln(x: f64) -> f64 => log;
    fn sin(x: f64) -> f64 => sin;
    fn cos(x: f64) -> f64 => cos;
    fn sqrt(x: f64) -> f64 => sqrt;
    fn abs(x: f64) -> f64 => fabs;
    fn floor(x: f64) -> f64 => floor;
    fn ceil(x: f64) -> f64 => ceil;
    fn powf(x: f64, y: f64) -> f64 => pow;
}

#[inline(always)]
pub fn powi(x: f64, n: i32) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powi(n)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, n as f64)
    }
}

/// Error function (always `libm`; not provided by `std`).
#[inline(always)]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
#[inline(always)]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
