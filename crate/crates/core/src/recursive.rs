//! Recursive hiding of k−2 auxiliary secrets inside the shares of a primary
//! secret.
//!
//! Dealing runs a chain of polynomials `p_1, ..., p_{k−1}` of increasing
//! degree. `p_i` passes through `(0, s_i)` and the `i` points produced by the
//! previous level; it is then sampled at `x = i+1..2i+1` and those samples are
//! re-mapped to `x = 1..i+1` for the next level. The last polynomial carries
//! the primary secret at `x = 0` and is sampled at `x = k..k+n−1` to give the
//! shares. Only one uniform draw, `y11`, enters the whole chain.
//!
//! Reconstruction walks the chain backwards: the values of `p_i` at
//! `x = 1..i` are exactly the samples of `p_{i−1}` at `x = i..2i−1`.
//!
//! Two routes are provided. The free functions ([`deal`], [`reconstruct`],
//! [`chain_forward`]) work in coefficient form and expose every intermediate
//! polynomial. [`Dealer`] and [`Reconstructor`] precompute Lagrange weights
//! for the fixed abscissae and are meant for bulk per-chunk work.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{sample_raw, FieldElement, PrimeModulus};
use crate::poly::{interpolate, EvaluationMap, Point, Polynomial};
use crate::shamir::{recover_polynomial, Share};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DealingParams {
    modulus: PrimeModulus,
    k: usize,
    n: usize,
}

impl DealingParams {
    /// Requires `2 <= k <= n`, `p > k + n − 1` and `p > 2k − 3`, so every
    /// abscissa used by the chain or by the shares is distinct mod p.
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
        let p = modulus.value() as u128;
        let share_top = k as u128 + n as u128 - 1;
        if share_top >= p {
            return Err(Error::Parameter(format!(
                "modulus {modulus} must exceed k + n - 1 = {share_top}"
            )));
        }
        let chain_top = (2 * k as u128).saturating_sub(3);
        if chain_top >= p {
            return Err(Error::Parameter(format!(
                "modulus {modulus} must exceed 2k - 3 = {chain_top}"
            )));
        }
        Ok(DealingParams { modulus, k, n })
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

    /// Number of auxiliary secrets each dealt element carries.
    pub fn hidden_count(&self) -> usize {
        self.k - 2
    }

    pub fn share_abscissae(&self) -> std::ops::Range<u64> {
        self.k as u64..(self.k + self.n) as u64
    }
}

/// The auxiliary secrets `s_1..s_{k−2}` in dealing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HiddenPayload(Vec<FieldElement>);

impl HiddenPayload {
    pub fn new(secrets: Vec<FieldElement>) -> Self {
        HiddenPayload(secrets)
    }

    pub fn from_values(values: &[u64], modulus: PrimeModulus) -> Result<Self> {
        values
            .iter()
            .map(|&v| modulus.element(v))
            .collect::<Result<Vec<_>>>()
            .map(HiddenPayload)
    }

    pub fn secrets(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn values(&self) -> Vec<u64> {
        self.0.iter().map(|s| s.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn validate(&self, params: &DealingParams) -> Result<()> {
        if self.0.len() != params.hidden_count() {
            return Err(Error::Parameter(format!(
                "k = {} carries exactly {} hidden secrets, got {}",
                params.k,
                params.hidden_count(),
                self.0.len()
            )));
        }
        for s in &self.0 {
            check_element(*s, params.modulus)?;
        }
        Ok(())
    }
}

/// The points handed from one chain level to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainState {
    /// Level `i`; there are exactly `i` points at abscissae `1..=i`.
    pub level: usize,
    pub points: Vec<Point>,
}

fn check_element(value: FieldElement, modulus: PrimeModulus) -> Result<()> {
    if value.modulus() != modulus {
        return Err(Error::Range(format!(
            "value lives under modulus {}, params use {}",
            value.modulus(),
            modulus
        )));
    }
    Ok(())
}

/// Every polynomial of the chain, `p_1..p_{k−2}`, followed by the state
/// that feeds the final polynomial.
fn run_chain(
    hidden: &HiddenPayload,
    y11: FieldElement,
    params: &DealingParams,
) -> Result<(Vec<Polynomial>, ChainState)> {
    hidden.validate(params)?;
    check_element(y11, params.modulus)?;
    let m = params.modulus;
    let mut state = ChainState {
        level: 1,
        points: vec![Point::new(m.one(), y11)?],
    };
    let mut polys = Vec::with_capacity(params.hidden_count());
    for (idx, &secret) in hidden.secrets().iter().enumerate() {
        let i = idx + 1;
        let mut points = Vec::with_capacity(i + 1);
        points.push(Point::new(m.zero(), secret)?);
        points.extend_from_slice(&state.points);
        let poly = interpolate(&points)?;
        debug_assert_eq!(poly.eval_raw(0), secret.value());
        let next = (1..=i + 1)
            .map(|j| {
                let y = poly.eval_raw((j + i) as u64);
                Point::new(m.reduce(j as u64), m.reduce(y))
            })
            .collect::<Result<Vec<_>>>()?;
        polys.push(poly);
        state = ChainState {
            level: i + 1,
            points: next,
        };
    }
    Ok((polys, state))
}

/// Runs the hiding chain from the point `(1, y11)` and returns the `k − 1`
/// points that, together with `(0, S)`, define the final polynomial.
pub fn chain_forward(
    hidden: &HiddenPayload,
    y11: FieldElement,
    params: &DealingParams,
) -> Result<ChainState> {
    run_chain(hidden, y11, params).map(|(_, state)| state)
}

/// All chain polynomials `p_1..p_{k−1}` for the given draw of `y11`; the
/// last entry is the polynomial the shares are sampled from.
pub fn dealing_polynomials(
    secret: FieldElement,
    hidden: &HiddenPayload,
    y11: FieldElement,
    params: &DealingParams,
) -> Result<Vec<Polynomial>> {
    check_element(secret, params.modulus)?;
    let (mut polys, state) = run_chain(hidden, y11, params)?;
    let mut points = Vec::with_capacity(params.k);
    points.push(Point::new(params.modulus.zero(), secret)?);
    points.extend(state.points);
    polys.push(interpolate(&points)?);
    Ok(polys)
}

/// Deals `secret` and `hidden` into `n` shares with a fresh uniform `y11`.
pub fn deal<R: RngCore + ?Sized>(
    secret: FieldElement,
    hidden: &HiddenPayload,
    params: &DealingParams,
    rng: &mut R,
) -> Result<Vec<Share>> {
    let y11 = params.modulus.reduce(sample_raw(params.modulus, rng));
    deal_with(secret, hidden, params, y11)
}

/// Deals with an injected `y11`. Deterministic; for tests and replay only.
pub fn deal_with(
    secret: FieldElement,
    hidden: &HiddenPayload,
    params: &DealingParams,
    y11: FieldElement,
) -> Result<Vec<Share>> {
    let polys = dealing_polynomials(secret, hidden, y11, params)?;
    let last = polys
        .last()
        .expect("chain always ends in the share polynomial");
    let m = params.modulus;
    params
        .share_abscissae()
        .map(|x| Share::from_raw(m, x, last.eval_raw(x)))
        .collect()
}

/// Recovers the primary secret and every hidden secret from at least `k`
/// shares. Surplus shares are checked against the recovered polynomial.
pub fn reconstruct(
    shares: &[Share],
    params: &DealingParams,
) -> Result<(FieldElement, HiddenPayload)> {
    reconstruct_polynomials(shares, params).map(|(secret, hidden, _)| (secret, hidden))
}

/// Like [`reconstruct`], also returning the recovered chain `p_1..p_{k−1}`.
pub fn reconstruct_polynomials(
    shares: &[Share],
    params: &DealingParams,
) -> Result<(FieldElement, HiddenPayload, Vec<Polynomial>)> {
    let m = params.modulus;
    let top = recover_polynomial(shares, m, params.k, params.share_abscissae())?;
    let secret = m.reduce(top.eval_raw(0));
    let mut recovered = vec![top];
    let mut hidden_rev = Vec::with_capacity(params.hidden_count());
    for i in (1..=params.hidden_count()).rev() {
        let current = recovered.last().expect("nonempty");
        let points = (1..=i + 1)
            .map(|j| {
                Point::new(
                    m.reduce((i + j) as u64),
                    m.reduce(current.eval_raw(j as u64)),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let lower = interpolate(&points)?;
        hidden_rev.push(m.reduce(lower.eval_raw(0)));
        recovered.push(lower);
    }
    hidden_rev.reverse();
    recovered.reverse();
    Ok((secret, HiddenPayload(hidden_rev), recovered))
}

/// Bulk dealer with precomputed Lagrange weights for one parameter set.
#[derive(Clone, Debug)]
pub struct Dealer {
    params: DealingParams,
    // level i (1-based) maps values at 0..=i to values at i+1..=2i+1
    levels: Vec<EvaluationMap>,
    shares: EvaluationMap,
}

impl Dealer {
    pub fn new(params: DealingParams) -> Result<Self> {
        let m = params.modulus;
        let levels = (1..=params.hidden_count() as u64)
            .map(|i| {
                let sources: Vec<u64> = (0..=i).collect();
                let targets: Vec<u64> = (i + 1..=2 * i + 1).collect();
                EvaluationMap::new(m, &sources, &targets)
            })
            .collect::<Result<Vec<_>>>()?;
        let sources: Vec<u64> = (0..params.k as u64).collect();
        let targets: Vec<u64> = params.share_abscissae().collect();
        let shares = EvaluationMap::new(m, &sources, &targets)?;
        Ok(Dealer {
            params,
            levels,
            shares,
        })
    }

    pub fn params(&self) -> &DealingParams {
        &self.params
    }

    /// Deals one element; writes the `n` share values (abscissae `k..k+n−1`)
    /// into `out`. All inputs must be canonical residues.
    pub fn deal_values(
        &self,
        secret: u64,
        hidden: &[u64],
        y11: u64,
        out: &mut [u64],
    ) -> Result<()> {
        let p = self.params.modulus.value();
        if hidden.len() != self.params.hidden_count() {
            return Err(Error::Parameter(format!(
                "expected {} hidden values, got {}",
                self.params.hidden_count(),
                hidden.len()
            )));
        }
        if out.len() != self.params.n {
            return Err(Error::Parameter(format!(
                "output holds {} values, n = {}",
                out.len(),
                self.params.n
            )));
        }
        if let Some(&bad) = std::iter::once(&secret)
            .chain(hidden)
            .chain([&y11])
            .find(|&&v| v >= p)
        {
            return Err(Error::Range(format!(
                "value {bad} is not below the modulus {p}"
            )));
        }
        let k = self.params.k;
        // buf[0] is the secret slot, buf[1..=level] the carried points
        let mut buf = vec![0u64; k];
        let mut next = vec![0u64; k];
        buf[1] = y11;
        for (idx, map) in self.levels.iter().enumerate() {
            let i = idx + 1;
            buf[0] = hidden[idx];
            map.apply(&buf[..=i], &mut next[..=i]);
            buf[1..=i + 1].copy_from_slice(&next[..=i]);
        }
        buf[0] = secret;
        self.shares.apply(&buf, out);
        Ok(())
    }

    /// Deals one element with a fresh `y11` drawn from `rng`.
    pub fn deal_values_random<R: RngCore + ?Sized>(
        &self,
        secret: u64,
        hidden: &[u64],
        rng: &mut R,
        out: &mut [u64],
    ) -> Result<()> {
        let y11 = sample_raw(self.params.modulus, rng);
        self.deal_values(secret, hidden, y11, out)
    }
}

/// Bulk reconstructor for a fixed set of share abscissae.
#[derive(Clone, Debug)]
pub struct Reconstructor {
    params: DealingParams,
    // indices into the caller's share order: first k used, rest verified
    order: Vec<usize>,
    abscissae: Vec<u64>,
    // from the k chosen abscissae to 0..k−1, then every surplus abscissa
    top: EvaluationMap,
    // level i (1-based) maps values at i+1..=2i+1 to values at 0..=i
    levels: Vec<EvaluationMap>,
}

impl Reconstructor {
    /// `abscissae` lists the x of each share the caller will supply, in the
    /// order values will be passed to [`Reconstructor::reconstruct_values`].
    pub fn new(params: DealingParams, abscissae: &[u64]) -> Result<Self> {
        let k = params.k;
        if abscissae.len() < k {
            return Err(Error::InsufficientShares {
                needed: k,
                got: abscissae.len(),
            });
        }
        let mut order: Vec<usize> = (0..abscissae.len()).collect();
        order.sort_by_key(|&i| abscissae[i]);
        for pair in order.windows(2) {
            if abscissae[pair[0]] == abscissae[pair[1]] {
                return Err(Error::DuplicateAbscissa(abscissae[pair[0]]));
            }
        }
        let range = params.share_abscissae();
        if let Some(&bad) = abscissae.iter().find(|x| !range.contains(x)) {
            return Err(Error::Parameter(format!(
                "share abscissa {bad} outside {}..={}",
                range.start,
                range.end - 1
            )));
        }
        let m = params.modulus;
        let sources: Vec<u64> = order[..k].iter().map(|&i| abscissae[i]).collect();
        let mut targets: Vec<u64> = (0..k as u64).collect();
        targets.extend(order[k..].iter().map(|&i| abscissae[i]));
        let top = EvaluationMap::new(m, &sources, &targets)?;
        let levels = (1..=params.hidden_count() as u64)
            .map(|i| {
                let sources: Vec<u64> = (i + 1..=2 * i + 1).collect();
                let targets: Vec<u64> = (0..=i).collect();
                EvaluationMap::new(m, &sources, &targets)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Reconstructor {
            params,
            order,
            abscissae: abscissae.to_vec(),
            top,
            levels,
        })
    }

    pub fn params(&self) -> &DealingParams {
        &self.params
    }

    /// Recovers one element. `values[i]` is the y of the share at
    /// `abscissae[i]`; hidden secrets are written to `hidden_out` in dealing
    /// order and the primary secret is returned.
    pub fn reconstruct_values(&self, values: &[u64], hidden_out: &mut [u64]) -> Result<u64> {
        let k = self.params.k;
        let p = self.params.modulus.value();
        if values.len() != self.abscissae.len() {
            return Err(Error::Parameter(format!(
                "expected {} share values, got {}",
                self.abscissae.len(),
                values.len()
            )));
        }
        if hidden_out.len() != self.params.hidden_count() {
            return Err(Error::Parameter(format!(
                "hidden output holds {} values, expected {}",
                hidden_out.len(),
                self.params.hidden_count()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= p) {
            return Err(Error::Range(format!(
                "value {bad} is not below the modulus {p}"
            )));
        }
        let chosen: Vec<u64> = self.order[..k].iter().map(|&i| values[i]).collect();
        let mut evaluated = vec![0u64; self.top.target_count()];
        self.top.apply(&chosen, &mut evaluated);
        for (slot, &i) in self.order[k..].iter().enumerate() {
            if evaluated[k + slot] != values[i] {
                return Err(Error::Inconsistent {
                    x: self.abscissae[i],
                });
            }
        }
        let secret = evaluated[0];
        // carried[1..=i+1] holds p_i at i+1..=2i+1
        let mut carried = evaluated[..k].to_vec();
        let mut lower = vec![0u64; k];
        for i in (1..=self.params.hidden_count()).rev() {
            self.levels[i - 1].apply(&carried[1..=i + 1], &mut lower[..=i]);
            hidden_out[i - 1] = lower[0];
            carried[..=i].copy_from_slice(&lower[..=i]);
        }
        Ok(secret)
    }
}
