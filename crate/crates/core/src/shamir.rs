//! Shamir (k, n) sharing of one field element, with the random points placed
//! at x = 1..k−1, the secret at x = 0, and the shares sampled at x = k..k+n−1.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{sample_uniform, FieldElement, PrimeModulus};
use crate::poly::{interpolate, Point, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShamirParams {
    modulus: PrimeModulus,
    k: usize,
    n: usize,
}

impl ShamirParams {
    /// Requires `2 <= k <= n` and `p > k + n − 1` so that every abscissa
    /// in `0..k+n` is distinct mod p.
    pub fn new(modulus: PrimeModulus, k: usize, n: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!(
                "threshold k = {k} must be at least 2"
            )));
        }
        if n < k {
            return Err(Error::Parameter(format!(
                "share count n = {n} is below the threshold k = {k}"
            )));
        }
        let top = (k as u128) + (n as u128) - 1;
        if top >= modulus.value() as u128 {
            return Err(Error::Parameter(format!(
                "modulus {modulus} must exceed k + n - 1 = {top}"
            )));
        }
        Ok(ShamirParams { modulus, k, n })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Share abscissae `k..k+n`.
    pub fn share_abscissae(&self) -> std::ops::Range<u64> {
        self.k as u64..(self.k + self.n) as u64
    }
}

/// One participant's point `(x, D_x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Share {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl Share {
    pub fn from_raw(modulus: PrimeModulus, x: u64, y: u64) -> Result<Self> {
        Ok(Share {
            x: modulus.element(x)?,
            y: modulus.element(y)?,
        })
    }

    fn point(&self) -> Point {
        Point {
            x: self.x,
            y: self.y,
        }
    }
}

fn check_secret(secret: FieldElement, modulus: PrimeModulus) -> Result<()> {
    if secret.modulus() != modulus {
        return Err(Error::Range(format!(
            "secret lives under modulus {}, params use {}",
            secret.modulus(),
            modulus
        )));
    }
    Ok(())
}

/// Splits `secret` with `k − 1` fresh uniform draws from `rng`.
pub fn shamir_split<R: RngCore + ?Sized>(
    secret: FieldElement,
    params: &ShamirParams,
    rng: &mut R,
) -> Result<Vec<Share>> {
    let randomness: Vec<FieldElement> = (1..params.k)
        .map(|_| sample_uniform(params.modulus, rng))
        .collect();
    shamir_split_with(secret, params, &randomness)
}

/// Splits `secret` using caller-supplied y-values for x = 1..k−1.
pub fn shamir_split_with(
    secret: FieldElement,
    params: &ShamirParams,
    randomness: &[FieldElement],
) -> Result<Vec<Share>> {
    let poly = sharing_polynomial(secret, params, randomness)?;
    Ok(params
        .share_abscissae()
        .map(|x| {
            let x = params.modulus.reduce(x);
            Share {
                x,
                y: params.modulus.reduce(poly.eval_raw(x.value())),
            }
        })
        .collect())
}

/// The degree-(k−1) polynomial through `(0, secret)` and `(i, randomness[i−1])`.
pub fn sharing_polynomial(
    secret: FieldElement,
    params: &ShamirParams,
    randomness: &[FieldElement],
) -> Result<Polynomial> {
    check_secret(secret, params.modulus)?;
    if randomness.len() != params.k - 1 {
        return Err(Error::Parameter(format!(
            "expected {} random values, got {}",
            params.k - 1,
            randomness.len()
        )));
    }
    let mut points = Vec::with_capacity(params.k);
    points.push(Point::new(params.modulus.zero(), secret)?);
    for (i, &y) in randomness.iter().enumerate() {
        points.push(Point::new(params.modulus.reduce(i as u64 + 1), y)?);
    }
    interpolate(&points)
}

/// Validates a share set and returns the polynomial through the first `k`
/// shares by abscissa, after checking every surplus share against it.
pub(crate) fn recover_polynomial(
    shares: &[Share],
    modulus: PrimeModulus,
    k: usize,
    abscissae: std::ops::Range<u64>,
) -> Result<Polynomial> {
    if shares.len() < k {
        return Err(Error::InsufficientShares {
            needed: k,
            got: shares.len(),
        });
    }
    let mut sorted = shares.to_vec();
    sorted.sort_by_key(|s| s.x.value());
    for pair in sorted.windows(2) {
        if pair[0].x == pair[1].x {
            return Err(Error::DuplicateAbscissa(pair[0].x.value()));
        }
    }
    for s in &sorted {
        if s.x.modulus() != modulus || s.y.modulus() != modulus {
            return Err(Error::Parameter(format!(
                "share at x = {} is not under modulus {modulus}",
                s.x
            )));
        }
        if !abscissae.contains(&s.x.value()) {
            return Err(Error::Parameter(format!(
                "share abscissa {} outside {}..={}",
                s.x,
                abscissae.start,
                abscissae.end - 1
            )));
        }
    }
    let points: Vec<Point> = sorted[..k].iter().map(Share::point).collect();
    let poly = interpolate(&points)?;
    for s in &sorted[k..] {
        if poly.eval_raw(s.x.value()) != s.y.value() {
            return Err(Error::Inconsistent { x: s.x.value() });
        }
    }
    Ok(poly)
}

/// Recovers the secret from at least `k` shares.
pub fn shamir_reconstruct(shares: &[Share], params: &ShamirParams) -> Result<FieldElement> {
    let poly = recover_polynomial(shares, params.modulus, params.k, params.share_abscissae())?;
    Ok(params.modulus.reduce(poly.eval_raw(0)))
}
