//! Polynomials over Z_p in coefficient form, and exact Lagrange interpolation.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeModulus};

/// A point `(x, y)` on a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Point {
    pub fn new(x: FieldElement, y: FieldElement) -> Result<Self> {
        if x.modulus() != y.modulus() {
            return Err(Error::Parameter(format!(
                "point coordinates under different moduli: {} vs {}",
                x.modulus(),
                y.modulus()
            )));
        }
        Ok(Point { x, y })
    }

    /// Builds a point from raw integers, which must be canonical under `modulus`.
    pub fn from_raw(modulus: PrimeModulus, x: u64, y: u64) -> Result<Self> {
        Ok(Point {
            x: modulus.element(x)?,
            y: modulus.element(y)?,
        })
    }
}

/// Coefficient-form polynomial; index `j` holds the coefficient of `x^j`.
///
/// Never empty, and the leading coefficient is nonzero unless the polynomial
/// is the constant zero `[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<u64>,
    modulus: PrimeModulus,
}

impl Polynomial {
    pub fn new(coefficients: Vec<FieldElement>, modulus: PrimeModulus) -> Result<Self> {
        let mut raw = Vec::with_capacity(coefficients.len());
        for c in coefficients {
            if c.modulus() != modulus {
                return Err(Error::Parameter(format!(
                    "coefficient under modulus {} in a polynomial over {}",
                    c.modulus(),
                    modulus
                )));
            }
            raw.push(c.value());
        }
        Ok(Self::from_raw_normalized(raw, modulus))
    }

    /// Builds a polynomial from raw coefficients, which must be canonical.
    pub fn from_values(coefficients: &[u64], modulus: PrimeModulus) -> Result<Self> {
        if let Some(&bad) = coefficients.iter().find(|&&c| c >= modulus.value()) {
            return Err(Error::Range(format!(
                "coefficient {bad} is not below the modulus {modulus}"
            )));
        }
        Ok(Self::from_raw_normalized(coefficients.to_vec(), modulus))
    }

    fn from_raw_normalized(mut raw: Vec<u64>, modulus: PrimeModulus) -> Self {
        while raw.len() > 1 && raw.last() == Some(&0) {
            raw.pop();
        }
        if raw.is_empty() {
            raw.push(0);
        }
        Polynomial {
            coefficients: raw,
            modulus,
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient_values(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coefficients
            .iter()
            .map(|&c| self.modulus.reduce(c))
            .collect()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        if x.modulus() != self.modulus {
            return Err(Error::Parameter(format!(
                "evaluating a polynomial over {} at a point under {}",
                self.modulus,
                x.modulus()
            )));
        }
        Ok(self.modulus.reduce(self.eval_raw(x.value())))
    }

    pub(crate) fn eval_raw(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add_raw(m.mul_raw(acc, x), c))
    }
}

fn check_distinct(xs: impl IntoIterator<Item = u64>) -> Result<()> {
    let mut seen = HashSet::new();
    for x in xs {
        if !seen.insert(x) {
            return Err(Error::DuplicateAbscissa(x));
        }
    }
    Ok(())
}

/// The unique polynomial of degree below `points.len()` through every point.
///
/// Expands the Lagrange basis: the master product `prod (x - x_j)` is formed
/// once and each basis numerator is recovered from it by synthetic division.
pub fn interpolate(points: &[Point]) -> Result<Polynomial> {
    let first = points
        .first()
        .ok_or_else(|| Error::Parameter("interpolation needs at least one point".into()))?;
    let m = first.x.modulus();
    for pt in points {
        if pt.x.modulus() != m || pt.y.modulus() != m {
            return Err(Error::Parameter(
                "interpolation points under different moduli".into(),
            ));
        }
    }
    check_distinct(points.iter().map(|pt| pt.x.value()))?;

    let count = points.len();
    // master[j] is the coefficient of x^j in prod (x - x_i); degree = count.
    let mut master = vec![0u64; count + 1];
    master[0] = 1;
    for (deg, pt) in points.iter().enumerate() {
        let neg_x = m.sub_raw(0, pt.x.value());
        for j in (0..=deg + 1).rev() {
            let shifted = if j > 0 { master[j - 1] } else { 0 };
            master[j] = m.add_raw(shifted, m.mul_raw(master[j], neg_x));
        }
    }

    let mut result = vec![0u64; count];
    let mut basis = vec![0u64; count];
    for (i, pt) in points.iter().enumerate() {
        let xi = pt.x.value();
        // master / (x - xi), highest coefficient first.
        let mut carry = 0;
        for j in (0..count).rev() {
            carry = m.add_raw(master[j + 1], m.mul_raw(carry, xi));
            basis[j] = carry;
        }
        let mut denom = 1;
        for (j, other) in points.iter().enumerate() {
            if j != i {
                denom = m.mul_raw(denom, m.sub_raw(xi, other.x.value()));
            }
        }
        let scale = m.mul_raw(pt.y.value(), m.inv_raw(denom)?);
        for (acc, &b) in result.iter_mut().zip(&basis) {
            *acc = m.add_raw(*acc, m.mul_raw(b, scale));
        }
    }
    Ok(Polynomial::from_raw_normalized(result, m))
}

/// Precomputed Lagrange weights taking values at fixed source abscissae to
/// values of the interpolating polynomial at fixed target abscissae.
///
/// Equivalent to `interpolate` followed by `eval` at each target, but costs
/// one inner product per target once built. Used for per-chunk work where
/// the abscissae never change.
#[derive(Clone, Debug)]
pub struct EvaluationMap {
    modulus: PrimeModulus,
    sources: usize,
    // weights[t * sources + j] = L_j(target_t)
    weights: Vec<u64>,
}

impl EvaluationMap {
    pub fn new(modulus: PrimeModulus, sources: &[u64], targets: &[u64]) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::Parameter(
                "evaluation map needs at least one source abscissa".into(),
            ));
        }
        let p = modulus.value();
        if let Some(&bad) = sources.iter().chain(targets).find(|&&x| x >= p) {
            return Err(Error::Range(format!(
                "abscissa {bad} is not below the modulus {modulus}"
            )));
        }
        check_distinct(sources.iter().copied())?;
        let m = modulus;
        let denominators = sources
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let d = sources
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .fold(1, |acc, (_, &xi)| m.mul_raw(acc, m.sub_raw(xj, xi)));
                m.inv_raw(d)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut weights = Vec::with_capacity(sources.len() * targets.len());
        for &t in targets {
            for (j, &inv_d) in denominators.iter().enumerate() {
                let num = sources
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .fold(1, |acc, (_, &xi)| m.mul_raw(acc, m.sub_raw(t, xi)));
                weights.push(m.mul_raw(num, inv_d));
            }
        }
        Ok(EvaluationMap {
            modulus,
            sources: sources.len(),
            weights,
        })
    }

    pub fn source_count(&self) -> usize {
        self.sources
    }

    pub fn target_count(&self) -> usize {
        self.weights.len() / self.sources
    }

    /// Writes one value per target into `out`. `values` holds one canonical
    /// residue per source abscissa.
    pub fn apply(&self, values: &[u64], out: &mut [u64]) {
        debug_assert_eq!(values.len(), self.sources);
        debug_assert_eq!(out.len(), self.target_count());
        let m = self.modulus;
        for (row, slot) in self.weights.chunks_exact(self.sources).zip(out.iter_mut()) {
            // Accumulate unreduced in u128: each product is < 2^122, so at
            // least 64 terms fit before a reduction is needed.
            let mut acc: u128 = 0;
            for (i, (&w, &v)) in row.iter().zip(values).enumerate() {
                acc += w as u128 * v as u128;
                if i % 32 == 31 {
                    acc %= m.value() as u128;
                }
            }
            *slot = (acc % m.value() as u128) as u64;
        }
    }
}
