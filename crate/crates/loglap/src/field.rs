//! Evaluable function families on R^n and their transforms.
//!
//! A [`Field`] is a scalar function together with the metadata the operator
//! evaluators need: dimension, an optional center of radial symmetry, a decay
//! model for closing tail integrals analytically, and the set of points where
//! evaluation is undefined. The concrete families are the paper's cast —
//! bubbles, fractional bubbles, Gaussians — plus the transforms applied to
//! them (scaling, translation, scalar multiplication, Kelvin inversion) and
//! two derived fields (x·∇u and u·ln u) used by the identity suites.

use crate::error::Error;
use crate::quad::legendre_rule;
use crate::specfun;
use std::f64::consts::PI;
use std::sync::Arc;

/// Decay model of a field at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Faster than any power (Gaussian-type); tail integrals are negligible
    /// beyond moderate radii.
    Rapid,
    /// |u(x)| ~ coeff·|x|^{−p} as |x| → ∞; the pair closes tail integrals in
    /// closed form.
    Power { p: f64, coeff: f64 },
    /// No usable model (e.g. power decay with a logarithmic correction);
    /// operators that need a tail model reject such fields.
    Unknown,
}

#[derive(Debug, Clone)]
enum Kind {
    /// β_n (t/(t² + |x−c|²))^{n/2}.
    Bubble { t: f64, center: Vec<f64>, beta: f64 },
    /// b_{n,s} (t/(t² + |x−c|²))^{(n−2s)/2}.
    FracBubble { s: f64, t: f64, center: Vec<f64>, b: f64 },
    /// A·exp(−|x−c|²/(2σ²)).
    Gaussian { sigma: f64, center: Vec<f64>, amplitude: f64 },
    /// l^{−n/2} u(x/l).
    Scaled { inner: Arc<Field>, l: f64 },
    /// u(x + x₀).
    Translated { inner: Arc<Field>, x0: Vec<f64> },
    /// a·u(x).
    Multiplied { inner: Arc<Field>, a: f64 },
    /// Σ uᵢ(x).
    Sum { terms: Vec<Arc<Field>> },
    /// (r/|x−c|)^n u(c + r²(x−c)/|x−c|²).
    Kelvin { inner: Arc<Field>, center: Vec<f64>, r: f64 },
    /// x·∇u(x).
    XDotGrad { inner: Arc<Field> },
    /// u(x)·ln u(x), extended by 0 where u ≤ 0.
    ULogU { inner: Arc<Field> },
}

/// An evaluable scalar function on R^n with symmetry/decay metadata.
#[derive(Debug, Clone)]
pub struct Field {
    n: usize,
    kind: Kind,
    radial_center: Option<Vec<f64>>,
    decay: Decay,
    singular_points: Vec<Vec<f64>>,
}

fn dist(x: &[f64], c: &[f64]) -> f64 {
    x.iter()
        .zip(c)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

impl Field {
    /// Bubble u_{x̃,t}(x) = β_n (t/(t²+|x−x̃|²))^{n/2}, the explicit solution
    /// family of the logarithmic-Laplacian equation L_Δu = (4/n)·u·ln u.
    pub fn bubble(n: usize, t: f64, center: Vec<f64>) -> Result<Field, Error> {
        if t <= 0.0 {
            return Err(Error::domain(format!("bubble requires t > 0, got {t}")));
        }
        if center.len() != n {
            return Err(Error::domain("bubble center dimension mismatch"));
        }
        let beta = specfun::constants_table(n as u32)?.beta_n;
        Ok(Field {
            n,
            radial_center: Some(center.clone()),
            decay: Decay::Power { p: n as f64, coeff: beta * t.powf(n as f64 / 2.0) },
            singular_points: Vec::new(),
            kind: Kind::Bubble { t, center, beta },
        })
    }

    /// Fractional bubble u_{s,t}(x) = b_{n,s}(t/(t²+|x−x̃|²))^{(n−2s)/2},
    /// the solution family of (−Δ)^s u = u^{2*_s−1}.
    pub fn frac_bubble(n: usize, s: f64, t: f64, center: Vec<f64>) -> Result<Field, Error> {
        if t <= 0.0 {
            return Err(Error::domain(format!("frac_bubble requires t > 0, got {t}")));
        }
        if center.len() != n {
            return Err(Error::domain("frac_bubble center dimension mismatch"));
        }
        let b = specfun::frac_constants(n as u32, s)?.b_ns;
        let p = n as f64 - 2.0 * s;
        Ok(Field {
            n,
            radial_center: Some(center.clone()),
            decay: Decay::Power { p, coeff: b * t.powf(p / 2.0) },
            singular_points: Vec::new(),
            kind: Kind::FracBubble { s, t, center, b },
        })
    }

    /// Gaussian amplitude·exp(−|x−center|²/(2σ²)).
    pub fn gaussian(
        n: usize,
        sigma: f64,
        center: Vec<f64>,
        amplitude: f64,
    ) -> Result<Field, Error> {
        if sigma <= 0.0 {
            return Err(Error::domain(format!("gaussian requires sigma > 0, got {sigma}")));
        }
        if center.len() != n {
            return Err(Error::domain("gaussian center dimension mismatch"));
        }
        Ok(Field {
            n,
            radial_center: Some(center.clone()),
            decay: Decay::Rapid,
            singular_points: Vec::new(),
            kind: Kind::Gaussian { sigma, center, amplitude },
        })
    }

    /// The L²-invariant rescaling u_l(x) = l^{−n/2} u(x/l).
    pub fn scale(&self, l: f64) -> Result<Field, Error> {
        if l <= 0.0 {
            return Err(Error::domain(format!("scale requires l > 0, got {l}")));
        }
        let nf = self.n as f64;
        Ok(Field {
            n: self.n,
            radial_center: self
                .radial_center
                .as_ref()
                .map(|c| c.iter().map(|v| v * l).collect()),
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                Decay::Power { p, coeff } => {
                    Decay::Power { p, coeff: coeff * l.powf(p - nf / 2.0) }
                }
                Decay::Unknown => Decay::Unknown,
            },
            singular_points: self
                .singular_points
                .iter()
                .map(|pt| pt.iter().map(|v| v * l).collect())
                .collect(),
            kind: Kind::Scaled { inner: Arc::new(self.clone()), l },
        })
    }

    /// Translation v(x) = u(x + x₀); a bubble centered at 0 translated by −x̃
    /// is the bubble centered at x̃.
    pub fn translate(&self, x0: Vec<f64>) -> Field {
        let shift = |pt: &Vec<f64>| -> Vec<f64> {
            pt.iter().zip(&x0).map(|(p, s)| p - s).collect()
        };
        Field {
            n: self.n,
            radial_center: self.radial_center.as_ref().map(&shift),
            decay: self.decay,
            singular_points: self.singular_points.iter().map(&shift).collect(),
            kind: Kind::Translated { inner: Arc::new(self.clone()), x0 },
        }
    }

    /// Scalar multiple a·u.
    pub fn multiply(&self, a: f64) -> Field {
        Field {
            n: self.n,
            radial_center: self.radial_center.clone(),
            decay: match self.decay {
                Decay::Power { p, coeff } => Decay::Power { p, coeff: coeff * a },
                other => other,
            },
            singular_points: self.singular_points.clone(),
            kind: Kind::Multiplied { inner: Arc::new(self.clone()), a },
        }
    }

    /// Pointwise sum of fields of equal dimension.
    pub fn sum(terms: Vec<Field>) -> Result<Field, Error> {
        let n = terms
            .first()
            .ok_or_else(|| Error::domain("sum of zero fields"))?
            .n;
        if terms.iter().any(|t| t.n != n) {
            return Err(Error::domain("sum of fields of mixed dimension"));
        }
        let radial_center = terms[0].radial_center.clone().filter(|c0| {
            terms.iter().all(|t| t.radial_center.as_deref() == Some(c0.as_slice()))
        });
        // Slowest power dominates; coefficients add at the dominant order.
        let decay = terms.iter().map(|t| t.decay).reduce(|a, b| match (a, b) {
            (Decay::Rapid, other) | (other, Decay::Rapid) => other,
            (Decay::Unknown, _) | (_, Decay::Unknown) => Decay::Unknown,
            (Decay::Power { p: pa, coeff: ca }, Decay::Power { p: pb, coeff: cb }) => {
                if (pa - pb).abs() < 1e-12 {
                    Decay::Power { p: pa, coeff: ca + cb }
                } else if pa < pb {
                    Decay::Power { p: pa, coeff: ca }
                } else {
                    Decay::Power { p: pb, coeff: cb }
                }
            }
        });
        Ok(Field {
            n,
            radial_center,
            decay: decay.unwrap(),
            singular_points: terms
                .iter()
                .flat_map(|t| t.singular_points.iter().cloned())
                .collect(),
            kind: Kind::Sum { terms: terms.into_iter().map(Arc::new).collect() },
        })
    }

    /// Kelvin transform u^{#}(x) = (r/|x−c|)^n u(c + r²(x−c)/|x−c|²).
    ///
    /// The center becomes a singular point. When the inner field decays
    /// rapidly, the transform extends continuously by 0 there and the result
    /// decays like |x|^{−n} with coefficient r^n·u(c).
    pub fn kelvin(&self, center: Vec<f64>, r: f64) -> Result<Field, Error> {
        if r <= 0.0 {
            return Err(Error::domain(format!("kelvin requires r > 0, got {r}")));
        }
        if center.len() != self.n {
            return Err(Error::domain("kelvin center dimension mismatch"));
        }
        let radial_center = self
            .radial_center
            .clone()
            .filter(|c| dist(c, &center) < 1e-14);
        let coeff = r.powi(self.n as i32) * self.eval(&center);
        Ok(Field {
            n: self.n,
            radial_center,
            decay: if coeff.is_finite() {
                Decay::Power { p: self.n as f64, coeff }
            } else {
                Decay::Unknown
            },
            singular_points: vec![center.clone()],
            kind: Kind::Kelvin { inner: Arc::new(self.clone()), center, r },
        })
    }

    /// The radial derivative field x·∇u, as required by the Pohozaev and
    /// commutator identities.
    pub fn x_dot_grad(&self) -> Field {
        let origin_centered = self
            .radial_center
            .as_ref()
            .is_some_and(|c| c.iter().all(|&v| v == 0.0));
        Field {
            n: self.n,
            radial_center: if origin_centered {
                self.radial_center.clone()
            } else {
                None
            },
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                Decay::Power { p, coeff } => Decay::Power { p, coeff: -p * coeff },
                Decay::Unknown => Decay::Unknown,
            },
            singular_points: self.singular_points.clone(),
            kind: Kind::XDotGrad { inner: Arc::new(self.clone()) },
        }
    }

    /// The entropy integrand u·ln u, extended by 0 where u ≤ 0 (the paper's
    /// convention s·ln s = 0 at s = 0).
    pub fn u_log_u(&self) -> Field {
        Field {
            n: self.n,
            radial_center: self.radial_center.clone(),
            // Power decay picks up a logarithmic correction, so no clean model.
            decay: match self.decay {
                Decay::Rapid => Decay::Rapid,
                _ => Decay::Unknown,
            },
            singular_points: self.singular_points.clone(),
            kind: Kind::ULogU { inner: Arc::new(self.clone()) },
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn radial_center(&self) -> Option<&[f64]> {
        self.radial_center.as_deref()
    }

    pub fn singular_points(&self) -> &[Vec<f64>] {
        &self.singular_points
    }

    /// Whether `x` coincides (to 1e−12) with a singular point.
    pub fn is_singular_at(&self, x: &[f64]) -> bool {
        self.singular_points.iter().any(|p| dist(p, x) < 1e-12)
    }

    /// Pointwise evaluation.
    ///
    /// At a Kelvin center with rapidly decaying inner field the continuous
    /// extension 0 is returned; at other singular points the result is NaN
    /// (callers check [`Field::is_singular_at`] first).
    pub fn eval(&self, x: &[f64]) -> f64 {
        match &self.kind {
            Kind::Bubble { t, center, beta } => {
                let rho2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                beta * (t / (t * t + rho2)).powf(self.n as f64 / 2.0)
            }
            Kind::FracBubble { s, t, center, b } => {
                let rho2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                b * (t / (t * t + rho2)).powf((self.n as f64 - 2.0 * s) / 2.0)
            }
            Kind::Gaussian { sigma, center, amplitude } => {
                let rho2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                amplitude * (-rho2 / (2.0 * sigma * sigma)).exp()
            }
            Kind::Scaled { inner, l } => {
                let y: Vec<f64> = x.iter().map(|v| v / l).collect();
                l.powf(-(self.n as f64) / 2.0) * inner.eval(&y)
            }
            Kind::Translated { inner, x0 } => {
                let y: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a + b).collect();
                inner.eval(&y)
            }
            Kind::Multiplied { inner, a } => a * inner.eval(x),
            Kind::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
            Kind::Kelvin { inner, center, r } => {
                let d = dist(x, center);
                if d == 0.0 {
                    return if inner.decay == Decay::Rapid { 0.0 } else { f64::NAN };
                }
                let y: Vec<f64> = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| c + r * r * (a - c) / (d * d))
                    .collect();
                (r / d).powi(self.n as i32) * inner.eval(&y)
            }
            Kind::XDotGrad { inner } => {
                let g = inner.grad(x);
                x.iter().zip(&g).map(|(a, b)| a * b).sum()
            }
            Kind::ULogU { inner } => {
                let v = inner.eval(x);
                if v > 0.0 {
                    v * v.ln()
                } else {
                    0.0
                }
            }
        }
    }

    /// Gradient; analytic for every family in the paper, 4th-order central
    /// differences (step h = 1e−4·(1+|x|)) for the derived fields.
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            Kind::Bubble { t, center, .. } => {
                let u = self.eval(x);
                let rho2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                let factor = -(self.n as f64) * u / (t * t + rho2);
                x.iter().zip(center).map(|(a, b)| factor * (a - b)).collect()
            }
            Kind::FracBubble { s, t, center, .. } => {
                let u = self.eval(x);
                let rho2 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>();
                let factor = -(self.n as f64 - 2.0 * s) * u / (t * t + rho2);
                x.iter().zip(center).map(|(a, b)| factor * (a - b)).collect()
            }
            Kind::Gaussian { sigma, center, .. } => {
                let u = self.eval(x);
                let factor = -u / (sigma * sigma);
                x.iter().zip(center).map(|(a, b)| factor * (a - b)).collect()
            }
            Kind::Scaled { inner, l } => {
                let y: Vec<f64> = x.iter().map(|v| v / l).collect();
                let factor = l.powf(-(self.n as f64) / 2.0 - 1.0);
                inner.grad(&y).into_iter().map(|g| factor * g).collect()
            }
            Kind::Translated { inner, x0 } => {
                let y: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a + b).collect();
                inner.grad(&y)
            }
            Kind::Multiplied { inner, a } => {
                inner.grad(x).into_iter().map(|g| a * g).collect()
            }
            Kind::Sum { terms } => {
                let mut g = vec![0.0; self.n];
                for t in terms {
                    for (gi, ti) in g.iter_mut().zip(t.grad(x)) {
                        *gi += ti;
                    }
                }
                g
            }
            Kind::ULogU { inner } => {
                let v = inner.eval(x);
                let factor = if v > 0.0 { v.ln() + 1.0 } else { 0.0 };
                inner.grad(x).into_iter().map(|g| factor * g).collect()
            }
            Kind::Kelvin { .. } | Kind::XDotGrad { .. } => self.numeric_grad(x),
        }
    }

    fn numeric_grad(&self, x: &[f64]) -> Vec<f64> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let h = 1e-4 * (1.0 + norm);
        (0..self.n)
            .map(|axis| {
                let probe = |offset: f64| -> f64 {
                    let mut y = x.to_vec();
                    y[axis] += offset;
                    self.eval(&y)
                };
                (-probe(2.0 * h) + 8.0 * probe(h) - 8.0 * probe(-h) + probe(-2.0 * h))
                    / (12.0 * h)
            })
            .collect()
    }

    /// Average of the field over the sphere {|y − x| = r}.
    ///
    /// Dimension 1 is the two-point average. Radially symmetric fields reduce
    /// to a polar-angle integral with weight sin^{n−2}θ, evaluated by
    /// Gauss–Legendre quadrature starting at 64 nodes and doubling until two
    /// successive orders agree to 1e−12 (relative to max(1, |mean|)). The
    /// transforms distribute over the mean where that is exact. Non-radial
    /// fields in n = 2 fall back to direct quadrature over the circle.
    pub fn spherical_mean(&self, x: &[f64], r: f64) -> Result<f64, Error> {
        // Distribute over structure that commutes with spherical averaging.
        match &self.kind {
            Kind::Sum { terms } => {
                let mut acc = 0.0;
                for t in terms {
                    acc += t.spherical_mean(x, r)?;
                }
                return Ok(acc);
            }
            Kind::Multiplied { inner, a } => {
                return Ok(a * inner.spherical_mean(x, r)?);
            }
            Kind::Translated { inner, x0 } => {
                let y: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a + b).collect();
                return inner.spherical_mean(&y, r);
            }
            Kind::Scaled { inner, l } => {
                let y: Vec<f64> = x.iter().map(|v| v / l).collect();
                return Ok(l.powf(-(self.n as f64) / 2.0)
                    * inner.spherical_mean(&y, r / l)?);
            }
            _ => {}
        }
        if self.n == 1 {
            let lo = [x[0] - r];
            let hi = [x[0] + r];
            return Ok(0.5 * (self.eval(&lo) + self.eval(&hi)));
        }
        if let Some(center) = self.radial_center.clone() {
            let d = dist(x, &center);
            let g = |rho: f64| -> f64 {
                let mut y = center.clone();
                y[0] += rho;
                self.eval(&y)
            };
            if d < 1e-300 {
                return Ok(g(r));
            }
            // M = ∫₀^π g(√(d²+r²−2dr·cosθ)) sin^{n−2}θ dθ / ∫₀^π sin^{n−2}θ dθ.
            let weight_exp = self.n as i32 - 2;
            let integrand = |theta: f64| -> f64 {
                let rho = (d * d + r * r - 2.0 * d * r * theta.cos()).max(0.0).sqrt();
                g(rho) * theta.sin().powi(weight_exp)
            };
            let normalizer = PI.sqrt()
                * specfun::gamma((self.n as f64 - 1.0) / 2.0)?
                / specfun::gamma(self.n as f64 / 2.0)?;
            return Ok(doubling_quadrature(&integrand, 0.0, PI)? / normalizer);
        }
        if self.n == 2 {
            // Direct circle average; the integrand is periodic and smooth.
            let integrand = |phi: f64| -> f64 {
                let y = [x[0] + r * phi.cos(), x[1] + r * phi.sin()];
                self.eval(&y)
            };
            return Ok(doubling_quadrature(&integrand, 0.0, 2.0 * PI)? / (2.0 * PI));
        }
        Err(Error::domain(
            "spherical mean for non-radial fields is only supported in n <= 2",
        ))
    }
}

/// Gauss–Legendre quadrature with order doubling (64 → 2048) until two
/// successive orders agree to 1e−12 relative to max(1, |value|).
fn doubling_quadrature<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64, Error> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let apply = |order: usize| -> f64 {
        legendre_rule(order)
            .iter()
            .map(|&(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    };
    let mut prev = apply(64);
    for order in [128, 256, 512, 1024, 2048] {
        let next = apply(order);
        if (next - prev).abs() <= 1e-12 * prev.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy { achieved: f64::NAN, requested: 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn bubble_reference_values() {
        let beta2 = specfun::constants_table(2).unwrap().beta_n;
        let u = Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap();
        assert_relative_eq!(u.eval(&[0.0, 0.0]), beta2, max_relative = 1e-13);
        assert_close(u.eval(&[0.0, 0.0]), 1.122_919, 1e-6);

        let u1 = Field::bubble(1, 1.0, vec![0.0]).unwrap();
        assert_close(u1.eval(&[1.0]), 0.374_654, 1e-6);
        // Lemma 5.2 product: center value times decay coefficient = β_n².
        if let Decay::Power { coeff, .. } = u1.decay() {
            let beta1 = specfun::constants_table(1).unwrap().beta_n;
            assert_relative_eq!(u1.eval(&[0.0]) * coeff, beta1 * beta1, max_relative = 1e-13);
        } else {
            panic!("bubble must carry power decay");
        }
    }

    #[test]
    fn frac_bubble_reference_values() {
        let u = Field::frac_bubble(1, 0.25, 1.0, vec![0.0]).unwrap();
        assert_close(u.eval(&[0.0]), 0.691_370, 1e-5);
        assert_close(u.eval(&[1.0]), 0.581_368, 1e-5);
        // s → 0 recovers the bubble value pointwise.
        let bubble = Field::bubble(1, 1.0, vec![0.0]).unwrap();
        let almost = Field::frac_bubble(1, 1e-6, 1.0, vec![0.0]).unwrap();
        assert_close(almost.eval(&[0.7]), bubble.eval(&[0.7]), 1e-5);
    }

    #[test]
    fn gaussian_basics() {
        let u = Field::gaussian(1, 1.0, vec![0.0], 1.0).unwrap();
        assert_relative_eq!(u.eval(&[0.0]), 1.0);
        assert_relative_eq!(u.eval(&[1.0]), (-0.5f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn radial_symmetry_holds_at_rotations() {
        let u = Field::bubble(2, 0.7, vec![0.3, -0.4]).unwrap();
        let c = [0.3, -0.4];
        let rho = 1.9;
        let reference = u.eval(&[c[0] + rho, c[1]]);
        for k in 0..8 {
            let phi = 2.0 * PI * k as f64 / 8.0 + 0.123;
            let x = [c[0] + rho * phi.cos(), c[1] + rho * phi.sin()];
            assert_close(u.eval(&x), reference, 1e-12);
        }
    }

    #[test]
    fn decay_coefficient_matches_at_large_radius() {
        for (n, field) in [
            (1usize, Field::bubble(1, 2.0, vec![0.0]).unwrap()),
            (2usize, Field::bubble(2, 0.5, vec![0.0, 0.0]).unwrap()),
        ] {
            if let Decay::Power { p, coeff } = field.decay() {
                let x: Vec<f64> = (0..n).map(|i| if i == 0 { 1e6 } else { 3.0 }).collect();
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                let observed = norm.powf(p) * field.eval(&x);
                assert!((observed / coeff - 1.0).abs() < 0.01);
            } else {
                panic!("bubble must carry power decay");
            }
        }
    }

    #[test]
    fn transform_algebra_composes() {
        let u = Field::gaussian(1, 1.3, vec![0.2], 0.9).unwrap();
        let composed = u.translate(vec![0.5]).scale(2.0).unwrap().multiply(3.0);
        for k in 0..20 {
            let x = -4.0 + 0.42 * k as f64;
            let expected = 3.0 * 2.0f64.powf(-0.5) * u.eval(&[x / 2.0 + 0.5]);
            assert_close(composed.eval(&[x]), expected, 1e-12);
        }
        // Identity transforms.
        let id = u.scale(1.0).unwrap().translate(vec![0.0]).multiply(1.0);
        assert_close(id.eval(&[0.77]), u.eval(&[0.77]), 1e-15);
    }

    #[test]
    fn scaled_bubble_stays_in_family() {
        // Bubble t = 1 rescaled by l is the bubble t = l.
        let u = Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap();
        let scaled = u.scale(3.0).unwrap();
        let target = Field::bubble(2, 3.0, vec![0.0, 0.0]).unwrap();
        for k in 0..10 {
            let x = [0.3 * k as f64, -0.1 * k as f64];
            assert_close(scaled.eval(&x), target.eval(&x), 1e-12);
        }
    }

    #[test]
    fn kelvin_is_an_involution() {
        let u = Field::gaussian(1, 1.0, vec![0.4], 1.0).unwrap();
        let twice = u
            .kelvin(vec![0.0], 1.5)
            .unwrap()
            .kelvin(vec![0.0], 1.5)
            .unwrap();
        for k in 1..=50 {
            let x = [0.05 * k as f64 + 0.01];
            assert_close(twice.eval(&x), u.eval(&x), 1e-12);
        }
    }

    #[test]
    fn kelvin_maps_bubble_family_to_itself() {
        for t in [0.5, 1.0, 2.0] {
            let u = Field::bubble(1, t, vec![0.0]).unwrap();
            let transformed = u.kelvin(vec![0.0], 1.0).unwrap();
            let target = Field::bubble(1, 1.0 / t, vec![0.0]).unwrap();
            for k in 1..=20 {
                let x = [0.11 * k as f64];
                assert_close(transformed.eval(&x), target.eval(&x), 1e-12);
            }
        }
    }

    #[test]
    fn kelvin_of_gaussian_vanishes_at_center() {
        let u = Field::gaussian(1, 1.0, vec![0.0], 1.0).unwrap();
        let k = u.kelvin(vec![0.0], 1.0).unwrap();
        assert!(k.eval(&[1e-8]).abs() < 1e-100);
        assert!(k.is_singular_at(&[0.0]));
    }

    #[test]
    fn inversion_identity_for_bubbles() {
        // Lemma 5.1 with x₀ = center and s = t: u(sx+x₀) = |x|^{−n} u(sx/|x|²+x₀).
        let t = 1.7;
        let u = Field::bubble(1, t, vec![0.3]).unwrap();
        let mut state: u64 = 42;
        for _ in 0..50 {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            let x = ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 8.0;
            if x.abs() < 1e-3 {
                continue;
            }
            let lhs = u.eval(&[t * x + 0.3]);
            let rhs = x.abs().powi(-1) * u.eval(&[t * x / (x * x) + 0.3]);
            assert_close(lhs, rhs, 1e-12);
        }
    }

    #[test]
    fn spherical_mean_reference_values() {
        // Constant field (σ huge ⇒ locally constant): mean ≈ value.
        let c = Field::gaussian(2, 1e8, vec![0.0, 0.0], 3.25).unwrap();
        assert_close(c.spherical_mean(&[1.0, 2.0], 0.5).unwrap(), 3.25, 1e-10);

        // n = 1 Gaussian two-point average at x = 0, r = 1.
        let g = Field::gaussian(1, 1.0, vec![0.0], 1.0).unwrap();
        assert_close(g.spherical_mean(&[0.0], 1.0).unwrap(), (-0.5f64).exp(), 1e-14);

        // Mean-value identity for |y|² in n = 2: M(x, r) = |x|² + r².
        // |y|² = 2σ²·A·(1 − exp(−|y|²/2σ²))/… has no closed family here, so
        // check against the radial path with a bubble instead: the mean of a
        // radial field about its own center at distance 0 is g(r).
        let u = Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap();
        assert_close(
            u.spherical_mean(&[0.0, 0.0], 2.0).unwrap(),
            u.eval(&[2.0, 0.0]),
            1e-13,
        );
    }

    #[test]
    fn spherical_mean_radial_path_matches_direct_circle_quadrature() {
        // The same off-center mean through both code paths in n = 2.
        let u = Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap();
        let radial = u.spherical_mean(&[1.3, -0.7], 0.9).unwrap();
        // Force the generic circle path by shifting the center metadata away:
        // a sum of one field about a fake second center loses radial metadata.
        let masked = Field::sum(vec![
            Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap().multiply(0.5),
            Field::bubble(2, 1.0, vec![1e-9, 0.0]).unwrap().multiply(0.5),
        ])
        .unwrap();
        let direct = masked.spherical_mean(&[1.3, -0.7], 0.9).unwrap();
        assert_close(radial, direct, 1e-8);
    }

    #[test]
    fn x_dot_grad_reference_values() {
        // Gaussian: x·∇u = −|x|²u/σ²; at |x| = 1, σ = 1, n = 1: −e^{−1/2}.
        let g = Field::gaussian(1, 1.0, vec![0.0], 1.0).unwrap();
        let xg = g.x_dot_grad();
        assert_close(xg.eval(&[1.0]), -(-0.5f64).exp(), 1e-12);
        assert_close(xg.eval(&[0.0]), 0.0, 1e-15);

        // Bubble: x·∇u_t = −n|x|²/(t²+|x|²)·u_t.
        let u = Field::bubble(2, 1.0, vec![0.0, 0.0]).unwrap();
        let xu = u.x_dot_grad();
        assert_close(xu.eval(&[1.0, 0.0]), -u.eval(&[1.0, 0.0]), 1e-12);
    }

    #[test]
    fn u_log_u_handles_zero() {
        let g = Field::gaussian(1, 1.0, vec![0.0], 1.0).unwrap();
        let w = g.u_log_u();
        assert_close(w.eval(&[0.0]), 0.0, 1e-15); // 1·ln 1 = 0
        assert_close(w.eval(&[1e6]), 0.0, 1e-300); // underflow → 0·ln 0 = 0
        let v = g.eval(&[1.5]);
        assert_close(w.eval(&[1.5]), v * v.ln(), 1e-14);
    }
}
