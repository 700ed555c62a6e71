//! Weighted projective planes and the A/S/β calculus for divisors and
//! toric monomial valuations.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WPPlane {
    pub weights: [u64; 3],
    pub labels: [String; 3],
}

impl WPPlane {
    /// Rejects planes that are not well-formed (some pair of weights shares a factor).
    pub fn new(weights: [u64; 3], labels: [&str; 3]) -> Result<WPPlane> {
        if weights.contains(&0) {
            return Err(Error::NotWellFormed(weights));
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if weights[i].gcd(&weights[j]) != 1 {
                return Err(Error::NotWellFormed(weights));
            }
        }
        Ok(WPPlane { weights, labels: labels.map(String::from) })
    }

    /// ℙ(1,2,n+2) with coordinates x,y,z (odd n only).
    pub fn w_odd(n: u64) -> Result<WPPlane> {
        WPPlane::new([1, 2, n + 2], ["x", "y", "z"])
    }

    /// ℙ(1,1,l+1) with coordinates u,y,z.
    pub fn w_even(l: u64) -> Result<WPPlane> {
        WPPlane::new([1, 1, l + 1], ["u", "y", "z"])
    }

    /// ℙ(1, n+2, (n+3)²/2), the last-wall degeneration of ℙ(1,2,n+2).
    pub fn w0(n: u64) -> Result<WPPlane> {
        if n.is_multiple_of(2) {
            return Err(Error::NotWellFormed([1, n + 2, (n + 3) * (n + 3)]));
        }
        WPPlane::new([1, n + 2, (n + 3) * (n + 3) / 2], ["x0", "x1", "x2"])
    }

    pub fn anticanonical_degree(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn weight_product(&self) -> u64 {
        self.weights.iter().product()
    }
}

pub fn intersection_number(plane: &WPPlane, k1: &Rat, k2: &Rat) -> Rat {
    k1 * k2 / Rat::int(plane.weight_product() as i64)
}

/// Number of monomials of weighted degree k.
pub fn h0_count(plane: &WPPlane, k: u64) -> u64 {
    let [m0, m1, m2] = plane.weights;
    let mut count = 0;
    let mut c = 0;
    while c * m2 <= k {
        let rest = k - c * m2;
        // x0^a x1^b with a = rest - b*m1 >= 0; m0 divides whatever remains when m0 = 1,
        // otherwise test it
        let mut b = 0;
        while b * m1 <= rest {
            if (rest - b * m1).is_multiple_of(m0) {
                count += 1;
            }
            b += 1;
        }
        c += 1;
    }
    count
}

/// A ℚ-divisor class O(degree) on a plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    pub plane: WPPlane,
    pub degree: Rat,
}

impl DivisorClass {
    pub fn anticanonical(plane: &WPPlane) -> DivisorClass {
        DivisorClass { plane: plane.clone(), degree: Rat::int(plane.anticanonical_degree() as i64) }
    }

    pub fn self_intersection(&self) -> Rat {
        intersection_number(&self.plane, &self.degree, &self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub degree: Rat,
    pub coeff: Rat,
}

/// Σ coeff·C with C ∈ |O(degree)|.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LogBoundary {
    pub components: Vec<BoundaryComponent>,
}

impl LogBoundary {
    pub fn trivial() -> LogBoundary {
        LogBoundary::default()
    }

    /// Checks coefficients in [0,1) and the log Fano degree condition.
    pub fn new(plane: &WPPlane, comps: &[(Rat, Rat)]) -> Result<LogBoundary> {
        let b = LogBoundary::unchecked(comps);
        for c in &b.components {
            if c.coeff.is_negative() || c.coeff >= Rat::one() {
                return Err(Error::OutOfDomain(format!("boundary coefficient {}", c.coeff)));
            }
        }
        if b.r(plane) <= Rat::zero() {
            return Err(Error::OutOfDomain("boundary is not log Fano".into()));
        }
        Ok(b)
    }

    /// Used for affine-in-w sampling where w may leave [0,1).
    pub fn unchecked(comps: &[(Rat, Rat)]) -> LogBoundary {
        LogBoundary {
            components: comps
                .iter()
                .map(|(d, c)| BoundaryComponent { degree: d.clone(), coeff: c.clone() })
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Rat {
        self.components.iter().fold(Rat::zero(), |acc, c| acc + &c.coeff * &c.degree)
    }

    /// Degree r of −(K + Δ) = O(r).
    pub fn r(&self, plane: &WPPlane) -> Rat {
        Rat::int(plane.anticanonical_degree() as i64) - self.total_degree()
    }
}

/// S(E) = r/(3k) for a prime divisor E ∈ |O(k)|.
pub fn s_invariant_divisor(plane: &WPPlane, boundary: &LogBoundary, k: &Rat) -> Result<Rat> {
    if !k.is_positive() {
        return Err(Error::OutOfDomain(format!("divisor degree {}", k)));
    }
    Ok(boundary.r(plane) / (Rat::int(3) * k))
}

/// Quasi-monomial valuation v_(a,b) in the chart where coordinate `chart` is nonzero.
/// `weights` apply to the two remaining coordinates in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialValuation {
    pub plane: WPPlane,
    pub chart: usize,
    pub weights: (Rat, Rat),
}

impl MonomialValuation {
    pub fn new(plane: &WPPlane, chart: usize, a: Rat, b: Rat) -> Result<MonomialValuation> {
        if chart > 2 {
            return Err(Error::Malformed(format!("chart index {}", chart)));
        }
        if a.is_negative() || b.is_negative() || (a.is_zero() && b.is_zero()) {
            return Err(Error::Malformed(format!("valuation weights ({}, {})", a, b)));
        }
        Ok(MonomialValuation { plane: plane.clone(), chart, weights: (a, b) })
    }

    /// Indices of the two coordinates carrying the weights.
    pub fn free_coords(&self) -> (usize, usize) {
        match self.chart {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    }

    pub fn log_discrepancy(&self) -> Rat {
        &self.weights.0 + &self.weights.1
    }

    /// v of a monomial given by its exponent vector.
    pub fn value_of_monomial(&self, exps: [u32; 3]) -> Rat {
        let (j, k) = self.free_coords();
        &self.weights.0 * Rat::int(exps[j] as i64) + &self.weights.1 * Rat::int(exps[k] as i64)
    }

    /// v(f) = min over the monomials of f (given as exponent vectors with nonzero coefficient).
    pub fn value_of_poly(&self, monomials: &[[u32; 3]]) -> Result<Rat> {
        monomials
            .iter()
            .map(|m| self.value_of_monomial(*m))
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    /// S_{O(1)}(v) = (1/3)(a/m_j + b/m_k).
    pub fn s_of_hyperplane(&self) -> Rat {
        let (j, k) = self.free_coords();
        let mj = Rat::int(self.plane.weights[j] as i64);
        let mk = Rat::int(self.plane.weights[k] as i64);
        (&self.weights.0 / mj + &self.weights.1 / mk) / Rat::int(3)
    }
}

pub fn s_invariant_monomial(v: &MonomialValuation, boundary: &LogBoundary) -> Rat {
    boundary.r(&v.plane) * v.s_of_hyperplane()
}

/// β(v) = A(v) − S(v); `boundary_values[i]` is v of the i-th boundary component.
pub fn beta_monomial(v: &MonomialValuation, boundary: &LogBoundary, boundary_values: &[Rat]) -> Result<Rat> {
    if boundary_values.len() != boundary.components.len() {
        return Err(Error::Malformed(format!(
            "{} boundary values for {} components",
            boundary_values.len(),
            boundary.components.len()
        )));
    }
    let mut a = v.log_discrepancy();
    for (c, val) in boundary.components.iter().zip(boundary_values) {
        a -= &(&c.coeff * val);
    }
    Ok(a - s_invariant_monomial(v, boundary))
}
