use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Order of a wrapper function; `Infinite` is the hard clamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WrapperOrder {
    Finite(u32),
    Infinite,
}

impl Default for WrapperOrder {
    fn default() -> Self {
        WrapperOrder::Finite(2)
    }
}

/// Smooth odd saturation with unit slope at the origin, bounded by `g_sat`.
///
/// Order `n` has derivative `(1 + (c x)^2)^(-n/2)` with `c` chosen so that the
/// bound is reached at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrapperSpec {
    pub order: WrapperOrder,
    pub g_sat: f64,
}

impl WrapperSpec {
    pub fn new(order: WrapperOrder, g_sat: f64) -> Self {
        assert!(g_sat > 0.0, "wrapper bound must be positive");
        if let WrapperOrder::Finite(n) = order {
            assert!(n >= 2, "wrapper order must be at least 2");
        }
        WrapperSpec { order, g_sat }
    }

    /// The default arctangent wrapper.
    pub fn arctan(g_sat: f64) -> Self {
        WrapperSpec::new(WrapperOrder::Finite(2), g_sat)
    }

    /// Scale constant `c` of a finite order.
    pub fn scale(&self) -> Option<f64> {
        match self.order {
            WrapperOrder::Infinite => None,
            WrapperOrder::Finite(n) => {
                // ratio (n-3)(n-5).. / (n-2)(n-4).. down to 1/2 (even) or 2/3 (odd)
                let mut ratio = 1.0;
                let mut k = n;
                while k >= 4 {
                    ratio *= (k - 3) as f64 / (k - 2) as f64;
                    k -= 2;
                }
                Some(if n % 2 == 0 {
                    ratio * PI / (2.0 * self.g_sat)
                } else {
                    ratio / self.g_sat
                })
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        wrapper(self, x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        wrapper_deriv(self, x)
    }
}

/// Antiderivative of `(1 + (c u)^2)^(-n/2)` from 0 to `x`, by the reduction
/// formula on the order at fixed `c`.
fn integral(n: u32, c: f64, x: f64) -> f64 {
    let q = 1.0 + (c * x) * (c * x);
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    let mut acc = if k == 2 { (c * x).atan() / c } else { x / q.sqrt() };
    while k < n {
        k += 2;
        let kf = k as f64;
        acc = (kf - 3.0) / (kf - 2.0) * acc + x / ((kf - 2.0) * q.powf(kf / 2.0 - 1.0));
    }
    acc
}

pub fn wrapper(spec: &WrapperSpec, x: f64) -> f64 {
    match spec.order {
        WrapperOrder::Infinite => x.clamp(-spec.g_sat, spec.g_sat),
        // the reduction sum can round a hair past the bound
        WrapperOrder::Finite(n) => integral(n, spec.scale().expect("finite order"), x).clamp(-spec.g_sat, spec.g_sat),
    }
}

pub fn wrapper_deriv(spec: &WrapperSpec, x: f64) -> f64 {
    match spec.order {
        WrapperOrder::Infinite => {
            if x.abs() < spec.g_sat {
                1.0
            } else {
                0.0
            }
        }
        WrapperOrder::Finite(n) => {
            let c = spec.scale().expect("finite order");
            (1.0 + (c * x).powi(2)).powf(-(n as f64) / 2.0)
        }
    }
}

pub fn wrapper_second_deriv(spec: &WrapperSpec, x: f64) -> f64 {
    match spec.order {
        WrapperOrder::Infinite => 0.0,
        WrapperOrder::Finite(n) => {
            let c = spec.scale().expect("finite order");
            let nf = n as f64;
            -nf * c * c * x * (1.0 + (c * x).powi(2)).powf(-nf / 2.0 - 1.0)
        }
    }
}
