use serde::{Deserialize, Serialize};

use crate::grid::GeneratorSpec;

/// Degree-2 polynomial `p0 + p1 s + p2 s^2`, products truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Poly2([f64; 3]);

impl Poly2 {
    fn constant(c: f64) -> Self {
        Poly2([c, 0.0, 0.0])
    }

    /// Truncated expansion of the lag `1 / (1 + sT)`.
    fn lag(t: f64) -> Self {
        Poly2([1.0, -t, t * t])
    }

    fn add(self, o: Poly2) -> Self {
        Poly2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    fn mul(self, o: Poly2) -> Self {
        let (a, b) = (self.0, o.0);
        Poly2([
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
        ])
    }
}

/// Second-order expansion `c1 - c2 s + c3 s^2` of the turbine transfer
/// function around `s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbineCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Expands the four-stage turbine `L4 (K1 + L5 (K3 + L6 (K5 + K7 L7)))`
/// with each lag truncated to second order.
pub fn turbine_poly(gen: &GeneratorSpec) -> TurbineCoeffs {
    let inner = Poly2::constant(gen.k5).add(Poly2::lag(gen.t7).mul(Poly2::constant(gen.k7)));
    let inner = Poly2::constant(gen.k3).add(Poly2::lag(gen.t6).mul(inner));
    let inner = Poly2::constant(gen.k1).add(Poly2::lag(gen.t5).mul(inner));
    let p = Poly2::lag(gen.t4).mul(inner);
    TurbineCoeffs {
        c1: p.0[0],
        c2: -p.0[1],
        c3: p.0[2],
    }
}

/// Exact turbine transfer function evaluated at a real frequency `s`.
pub fn turbine_transfer(gen: &GeneratorSpec, s: f64) -> f64 {
    let l = |t: f64| 1.0 / (1.0 + s * t);
    l(gen.t4) * (gen.k1 + l(gen.t5) * (gen.k3 + l(gen.t6) * (gen.k5 + gen.k7 * l(gen.t7))))
}
