//! Request distributions: probability vectors, demand matrices, marginals,
//! Zipf generators and entropy.
//!
//! Probabilities live on the `2^-127` grid so that a half probability lands
//! exactly on the `2^-128` grid of [`UnitPoint`](crate::UnitPoint). Sums are
//! always exact.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::decimal::{big_dyadic_to_f64, parse_decimal_floor};
use crate::error::{Error, Result, Side};
use crate::real::Real;

/// Fraction bits of a [`Prob`].
pub const MASS_BITS: u32 = 127;
/// The probability 1 in [`Prob`] units.
pub const MASS_ONE: u128 = 1 << MASS_BITS;
/// Fraction bits of a [`DemandMatrix`] entry.
pub const DEMAND_BITS: u32 = 2 * MASS_BITS;

/// Relative slack accepted when decimal input does not sum to exactly one.
const DECIMAL_SUM_SLACK: f64 = 1e-6;

/// Probability in `(0, 1]`, stored as `mass * 2^-127`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prob(u128);

impl Prob {
    pub const ONE: Prob = Prob(MASS_ONE);

    pub fn from_mass(mass: u128) -> Result<Self> {
        if mass == 0 || mass > MASS_ONE {
            return Err(Error::InvalidDistribution(format!("probability mass {mass} outside (0, 1]")));
        }
        Ok(Prob(mass))
    }

    pub fn mass(self) -> u128 {
        self.0
    }

    pub fn to_real<F: Real>(self) -> F {
        F::from_scaled_u128(self.0, MASS_BITS as i32)
    }

    pub fn to_f64(self) -> f64 {
        self.to_real()
    }
}

impl std::fmt::Display for Prob {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::decimal::dyadic_to_decimal(self.0, MASS_BITS))
    }
}

/// Probability vector with every entry positive and an exact sum of one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    probs: Vec<Prob>,
}

impl Distribution {
    /// Exact constructor: masses must be positive and sum to [`MASS_ONE`].
    pub fn from_masses(masses: Vec<u128>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        let mut total: u128 = 0;
        let mut probs = Vec::with_capacity(masses.len());
        for m in masses {
            probs.push(Prob::from_mass(m)?);
            total = total
                .checked_add(m)
                .ok_or_else(|| Error::InvalidDistribution("sum exceeds one".into()))?;
        }
        if total != MASS_ONE {
            return Err(Error::InvalidDistribution("probabilities do not sum to one".into()));
        }
        Ok(Distribution { probs })
    }

    /// Normalizes positive weights, quantizes each entry down to the grid and
    /// gives the residual to the largest entry.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidDistribution("weights must be positive and finite".into()));
        }
        let total: f64 = weights.iter().sum();
        let scale = 2f64.powi(MASS_BITS as i32);
        let mut masses: Vec<u128> = weights.iter().map(|w| ((w / total) * scale) as u128).collect();
        if let Some(i) = masses.iter().position(|&m| m == 0) {
            return Err(Error::PrecisionExceeded(format!(
                "probability of entry {i} underflows 2^-{MASS_BITS}"
            )));
        }
        // float normalization may overshoot by a few ulps
        let sum: u128 = masses.iter().fold(0u128, |a, &m| a.saturating_add(m));
        if sum > MASS_ONE {
            let excess = sum - MASS_ONE;
            let i = argmax(&masses);
            masses[i] = masses[i]
                .checked_sub(excess)
                .filter(|&m| m > 0)
                .ok_or_else(|| Error::PrecisionExceeded("normalization overshoot".into()))?;
        } else {
            let i = argmax(&masses);
            masses[i] += MASS_ONE - sum;
        }
        Self::from_masses(masses)
    }

    /// Parses decimal strings. The sum must be within a relative `1e-6` of
    /// one; the residual after quantization goes to the largest entry.
    pub fn from_decimals<S: AsRef<str>>(values: &[S]) -> Result<Self> {
        let masses = values
            .iter()
            .map(|s| {
                let m = parse_decimal_floor(s.as_ref(), MASS_BITS)?;
                m.to_u128()
                    .filter(|&m| m <= MASS_ONE)
                    .ok_or_else(|| Error::InvalidDistribution(format!("{} exceeds one", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        if masses.iter().any(|&m| m == 0) {
            return Err(Error::InvalidDistribution("zero probability entry".into()));
        }
        let masses = absorb_residual(masses)?;
        Self::from_masses(masses)
    }

    /// `1/n` each; for `n` not a power of two the first entry absorbs the
    /// rounding residual.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        let base = MASS_ONE / n as u128;
        let mut masses = vec![base; n];
        masses[0] += MASS_ONE - base * n as u128;
        Self::from_masses(masses)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[Prob] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> Prob {
        self.probs[i]
    }

    pub fn p_min(&self) -> Prob {
        *self.probs.iter().min().expect("non-empty")
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64()).collect()
    }

    /// `q[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch { left: perm.len(), right: self.len() });
        }
        let mut seen = vec![false; perm.len()];
        for &k in perm {
            if k >= perm.len() || std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidDistribution("not a permutation".into()));
            }
        }
        Ok(Distribution { probs: perm.iter().map(|&k| self.probs[k]).collect() })
    }

    /// Same multiset of probabilities, independent of order.
    pub fn same_multiset(&self, other: &Distribution) -> bool {
        sorted_masses(self) == sorted_masses(other)
    }
}

fn argmax(masses: &[u128]) -> usize {
    let mut best = 0;
    for (i, &m) in masses.iter().enumerate() {
        if m > masses[best] {
            best = i;
        }
    }
    best
}

/// Moves `MASS_ONE - sum` onto the largest entry, after checking the input
/// was already close to normalized.
fn absorb_residual(mut masses: Vec<u128>) -> Result<Vec<u128>> {
    if masses.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    let sum = masses
        .iter()
        .try_fold(0u128, |a, &m| a.checked_add(m))
        .ok_or_else(|| Error::InvalidDistribution("sum exceeds one".into()))?;
    let diff = sum.abs_diff(MASS_ONE);
    if diff as f64 > DECIMAL_SUM_SLACK * MASS_ONE as f64 {
        return Err(Error::InvalidDistribution(format!(
            "sum {} is not one",
            sum as f64 / MASS_ONE as f64
        )));
    }
    let i = argmax(&masses);
    if sum <= MASS_ONE {
        masses[i] += diff;
    } else {
        masses[i] = masses[i]
            .checked_sub(diff)
            .filter(|&m| m > 0)
            .ok_or_else(|| Error::InvalidDistribution("cannot absorb residual".into()))?;
    }
    Ok(masses)
}

fn sorted_masses(p: &Distribution) -> Vec<u128> {
    let mut v: Vec<u128> = p.probs.iter().map(|q| q.0).collect();
    v.sort_unstable();
    v
}

/// Shannon entropy in bits.
///
/// Terms are summed in ascending probability order, so the result does not
/// depend on the order of the entries.
pub fn entropy<F: Real>(p: &Distribution) -> F {
    sorted_masses(p)
        .into_iter()
        .map(|m| {
            let q = F::from_scaled_u128(m, MASS_BITS as i32);
            -q * q.log2()
        })
        .sum()
}

/// Zipf law `p_i ∝ i^-s`, quantized.
pub fn zipf(n: usize, s: f64) -> Result<Distribution> {
    if n < 2 {
        return Err(Error::InvalidDistribution(format!("zipf needs n >= 2, got {n}")));
    }
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidDistribution(format!("zipf exponent {s} must be >= 0")));
    }
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-s)).collect();
    Distribution::from_weights(&weights)
}

/// Uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Element-wise `p_s + p_d` in `2^-127` units; sums to two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityVector {
    activity: Vec<u128>,
}

impl ActivityVector {
    pub fn from_marginals(source: &Distribution, dest: &Distribution) -> Result<Self> {
        if source.len() != dest.len() {
            return Err(Error::LengthMismatch { left: source.len(), right: dest.len() });
        }
        // both entries are below one when n >= 2, so no overflow
        let activity = source
            .probs()
            .iter()
            .zip(dest.probs())
            .map(|(a, b)| a.mass().checked_add(b.mass()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::PrecisionExceeded("activity overflows".into()))?;
        Ok(ActivityVector { activity })
    }

    pub fn masses(&self) -> &[u128] {
        &self.activity
    }

    pub fn to_real<F: Real>(&self) -> Vec<F> {
        self.activity.iter().map(|&a| F::from_scaled_u128(a, MASS_BITS as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// Row-major entries in `2^-254` units.
    Dense(Vec<BigUint>),
    Product { source: Distribution, dest: Distribution },
}

/// The `n × n` request distribution.
///
/// Entries are exact multiples of `2^-254`, total mass is exactly one and
/// every row and column sum lies on the [`Prob`] grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandMatrix {
    n: usize,
    repr: Repr,
}

impl DemandMatrix {
    /// Exact constructor from entries in `2^-127` units.
    pub fn from_masses(rows: Vec<Vec<u128>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidDemand(format!("need n >= 2, got {n}")));
        }
        let mut entries = Vec::with_capacity(n * n);
        let mut total = BigUint::zero();
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidDemand("matrix is not square".into()));
            }
            for m in row {
                total += m;
                entries.push(BigUint::from(m) << MASS_BITS);
            }
        }
        if total != BigUint::from(MASS_ONE) {
            return Err(Error::InvalidDemand("total mass is not one".into()));
        }
        Ok(DemandMatrix { n, repr: Repr::Dense(entries) })
    }

    /// Parses decimal entries, quantizing each down to `2^-127` and giving
    /// the residual to the largest entry.
    pub fn from_decimal_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidDemand("matrix is not square".into()));
            }
            for s in row {
                let m = parse_decimal_floor(s.as_ref(), MASS_BITS)?
                    .to_u128()
                    .filter(|&m| m <= MASS_ONE)
                    .ok_or_else(|| Error::InvalidDemand(format!("entry {} exceeds one", s.as_ref())))?;
                flat.push(m);
            }
        }
        if flat.iter().all(|&m| m == 0) {
            return Err(Error::InvalidDemand("all entries zero".into()));
        }
        let flat = absorb_residual(flat).map_err(|e| Error::InvalidDemand(e.to_string()))?;
        Self::from_masses(flat.chunks(n.max(1)).map(<[u128]>::to_vec).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `R_ij` in `2^-254` units.
    pub fn entry(&self, i: usize, j: usize) -> BigUint {
        match &self.repr {
            Repr::Dense(e) => e[i * self.n + j].clone(),
            Repr::Product { source, dest } => {
                BigUint::from(source.prob(i).mass()) * BigUint::from(dest.prob(j).mass())
            }
        }
    }

    pub fn entry_real<F: Real>(&self, i: usize, j: usize) -> F {
        match &self.repr {
            Repr::Dense(e) => F::from_f64(big_dyadic_to_f64(&e[i * self.n + j], DEMAND_BITS)).unwrap(),
            Repr::Product { source, dest } => source.prob(i).to_real::<F>() * dest.prob(j).to_real::<F>(),
        }
    }

    pub fn is_positive(&self, i: usize, j: usize) -> bool {
        match &self.repr {
            Repr::Dense(e) => !e[i * self.n + j].is_zero(),
            Repr::Product { .. } => true,
        }
    }

    /// Entries as f64, row-major.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.entry_real(i, j)).collect()).collect()
    }

    /// The same matrix with every entry materialized.
    pub fn to_dense(&self) -> DemandMatrix {
        let entries = (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).map(|(i, j)| self.entry(i, j)).collect();
        DemandMatrix { n: self.n, repr: Repr::Dense(entries) }
    }

    /// Product marginals, if this matrix was built as one.
    pub fn product_factors(&self) -> Option<(&Distribution, &Distribution)> {
        match &self.repr {
            Repr::Product { source, dest } => Some((source, dest)),
            Repr::Dense(_) => None,
        }
    }

    /// Row sums and column sums.
    pub fn marginals(&self) -> Result<(Distribution, Distribution)> {
        marginals(self)
    }
}

/// `R = p_s p_dᵀ`.
pub fn product_demand(source: &Distribution, dest: &Distribution) -> Result<DemandMatrix> {
    if source.len() != dest.len() {
        return Err(Error::LengthMismatch { left: source.len(), right: dest.len() });
    }
    if source.len() < 2 {
        return Err(Error::InvalidDemand(format!("need n >= 2, got {}", source.len())));
    }
    Ok(DemandMatrix {
        n: source.len(),
        repr: Repr::Product { source: source.clone(), dest: dest.clone() },
    })
}

/// `(p_s, p_d) = (R·1, 1ᵀ·R)`.
pub fn marginals(r: &DemandMatrix) -> Result<(Distribution, Distribution)> {
    let entries = match &r.repr {
        Repr::Product { source, dest } => return Ok((source.clone(), dest.clone())),
        Repr::Dense(e) => e,
    };
    let n = r.n;
    let mut rows = vec![BigUint::zero(); n];
    let mut cols = vec![BigUint::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let e = &entries[i * n + j];
            rows[i] += e;
            cols[j] += e;
        }
    }
    let to_dist = |sums: Vec<BigUint>, side: Side| -> Result<Distribution> {
        let mut masses = Vec::with_capacity(n);
        for (node, s) in sums.into_iter().enumerate() {
            if s.is_zero() {
                return Err(Error::ZeroActivityNode { node, side });
            }
            // constructors keep every marginal on the 2^-127 grid
            let m = (s >> MASS_BITS).to_u128().expect("marginal at most one");
            masses.push(m);
        }
        Distribution::from_masses(masses)
    };
    Ok((to_dist(rows, Side::Source)?, to_dist(cols, Side::Destination)?))
}

/// The marginal with the smaller entropy; ties go to the source.
pub fn select_build_distribution(source: &Distribution, dest: &Distribution) -> (Distribution, Side) {
    if source.same_multiset(dest) {
        return (source.clone(), Side::Source);
    }
    let hs: f64 = entropy(source);
    let hd: f64 = entropy(dest);
    if hd < hs {
        (dest.clone(), Side::Destination)
    } else {
        (source.clone(), Side::Source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example6() -> Distribution {
        Distribution::from_decimals(&["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"]).unwrap()
    }

    #[test]
    fn uniform_two_by_two_marginals() {
        let q = MASS_ONE / 4;
        let r = DemandMatrix::from_masses(vec![vec![q, q], vec![q, q]]).unwrap();
        let (ps, pd) = marginals(&r).unwrap();
        assert_eq!(ps, Distribution::uniform(2).unwrap());
        assert_eq!(pd, Distribution::uniform(2).unwrap());
    }

    #[test]
    fn zero_column_is_rejected() {
        let h = MASS_ONE / 2;
        let r = DemandMatrix::from_masses(vec![vec![h, 0], vec![h, 0]]).unwrap();
        match marginals(&r) {
            Err(Error::ZeroActivityNode { node: 1, side: Side::Destination }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zipf_product_marginals_by_hand() {
        // H_{6,1} = 49/20, p_i = 20 / (49 i)
        let z = zipf(6, 1.0).unwrap();
        for (i, p) in z.to_f64_vec().iter().enumerate() {
            assert_abs_diff_eq!(*p, 20.0 / (49.0 * (i + 1) as f64), epsilon = 1e-15);
        }
        let r = product_demand(&z, &z).unwrap().to_dense();
        let (ps, pd) = marginals(&r).unwrap();
        assert_eq!(ps, z);
        assert_eq!(pd, z);
    }

    #[test]
    fn product_with_permuted_zipf_round_trips() {
        let z = zipf(6, 1.0).unwrap();
        let zp = z.permuted(&[3, 0, 5, 1, 4, 2]).unwrap();
        let (ps, pd) = product_demand(&z, &zp).unwrap().to_dense().marginals().unwrap();
        assert_eq!(ps, z);
        assert_eq!(pd, zp);
    }

    #[test]
    fn product_length_mismatch() {
        let a = Distribution::uniform(3).unwrap();
        let b = Distribution::uniform(4).unwrap();
        assert!(matches!(product_demand(&a, &b), Err(Error::LengthMismatch { left: 3, right: 4 })));
    }

    #[test]
    fn product_entries_exact() {
        let h = Distribution::uniform(2).unwrap();
        let r = product_demand(&h, &h).unwrap();
        assert_eq!(r.entry(0, 1), BigUint::from(1u32) << (DEMAND_BITS - 2));
        assert_eq!(r.entry_real::<f64>(1, 1), 0.25);
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy::<f64>(&Distribution::uniform(8).unwrap()), 3.0, epsilon = 1e-12);
        assert_eq!(entropy::<f64>(&Distribution::from_masses(vec![MASS_ONE]).unwrap()), 0.0);
        // direct summation of -p log2 p over the six decimal values
        let oracle: f64 = [0.1f64, 0.15, 0.2, 0.25, 0.1, 0.2].iter().map(|p| -p * p.log2()).sum();
        assert_abs_diff_eq!(entropy::<f64>(&example6()), oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(oracle, 2.50370, epsilon = 1e-5);
        assert_abs_diff_eq!(entropy::<f32>(&example6()), oracle as f32, epsilon = 1e-5);
    }

    #[test]
    fn zipf_examples() {
        assert_eq!(zipf(4, 0.0).unwrap(), Distribution::uniform(4).unwrap());
        let z = zipf(2, 1.0).unwrap().to_f64_vec();
        assert_abs_diff_eq!(z[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z[1], 1.0 / 3.0, epsilon = 1e-15);
        assert!(zipf(1, 1.0).is_err());
        assert!(zipf(4, -1.0).is_err());
        assert!(matches!(zipf(10, 200.0), Err(Error::PrecisionExceeded(_))));
    }

    #[test]
    fn decimal_input() {
        let p = example6();
        assert_eq!(p.len(), 6);
        assert!(Distribution::from_decimals(&["0.5", "0.4"]).is_err());
        assert!(Distribution::from_decimals(&["1", "0"]).is_err());
        let third = Distribution::from_decimals(&["0.3333333", "0.3333333", "0.3333334"]).unwrap();
        assert_eq!(third.len(), 3);
    }

    #[test]
    fn select_examples() {
        let flat = zipf(300, 0.5).unwrap();
        let steep = zipf(300, 1.0).unwrap();
        assert_eq!(select_build_distribution(&flat, &steep), (steep.clone(), Side::Destination));
        assert_eq!(select_build_distribution(&steep, &flat), (steep.clone(), Side::Source));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let perm = random_permutation(300, &mut rng);
        let permuted = steep.permuted(&perm).unwrap();
        assert_eq!(select_build_distribution(&steep, &permuted).1, Side::Source);
        assert_eq!(select_build_distribution(&permuted, &steep).1, Side::Source);
    }

    #[test]
    fn activity_sums_to_two() {
        let z = zipf(10, 1.0).unwrap();
        let a = ActivityVector::from_marginals(&z, &Distribution::uniform(10).unwrap()).unwrap();
        let total: BigUint = a.masses().iter().map(|&m| BigUint::from(m)).sum();
        assert_eq!(total, BigUint::from(2u32) << MASS_BITS);
    }

    #[test]
    fn uniform_entropy_is_log_n() {
        for n in 2..=1024usize {
            let h: f64 = entropy(&zipf(n, 0.0).unwrap());
            assert!((h - (n as f64).log2()).abs() < 1e-9, "n={n}");
        }
    }

    fn arb_weights() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.001f64..1.0, 2..40)
    }

    proptest! {
        #[test]
        fn product_marginals_exact(ws in arb_weights(), seed in any::<u64>()) {
            let ps = Distribution::from_weights(&ws).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pd = ps.permuted(&random_permutation(ps.len(), &mut rng)).unwrap();
            let (a, b) = product_demand(&ps, &pd).unwrap().to_dense().marginals().unwrap();
            prop_assert_eq!(a, ps);
            prop_assert_eq!(b, pd);
        }

        #[test]
        fn entropy_permutation_invariant(ws in arb_weights(), seed in any::<u64>()) {
            let p = Distribution::from_weights(&ws).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let perm = random_permutation(p.len(), &mut rng);
            let q = p.permuted(&perm).unwrap();
            prop_assert_eq!(entropy::<f64>(&p), entropy::<f64>(&q));
            let h: f64 = entropy(&p);
            prop_assert!(h >= 0.0 && h <= (p.len() as f64).log2() + 1e-12);
        }

        #[test]
        fn selection_tag_invariant_under_joint_permutation(
            ws in arb_weights(), vs in arb_weights(), seed in any::<u64>()
        ) {
            let n = ws.len().min(vs.len());
            let a = Distribution::from_weights(&ws[..n]).unwrap();
            let b = Distribution::from_weights(&vs[..n]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let perm = random_permutation(n, &mut rng);
            let tag = select_build_distribution(&a, &b).1;
            let tag2 = select_build_distribution(&a.permuted(&perm).unwrap(), &b.permuted(&perm).unwrap()).1;
            prop_assert_eq!(tag, tag2);
        }

        #[test]
        fn weights_sum_exactly_one(ws in arb_weights()) {
            let p = Distribution::from_weights(&ws).unwrap();
            let total: u128 = p.probs().iter().map(|q| q.mass()).sum();
            prop_assert_eq!(total, MASS_ONE);
        }
    }
}
