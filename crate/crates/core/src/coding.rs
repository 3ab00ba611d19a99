//! Shannon-Fano-Elias codes over a [`Distribution`].
//!
//! Everything is computed on the fixed-point grid. Code lengths come from
//! bit positions, never from a floating point logarithm.

use crate::continuum::Segment;
use crate::demand::{Distribution, Prob};
use crate::point::{BitString, UnitPoint, FRACTION_BITS};
use crate::real::Real;

/// Cumulative sums `F_i = Σ_{j≤i} p_j`. The last entry is exactly one.
pub fn cdf(p: &Distribution) -> Vec<Prob> {
    let mut acc = 0u128;
    p.probs()
        .iter()
        .map(|q| {
            acc += q.mass();
            Prob::from_mass(acc).expect("partial sums of a distribution lie in (0, 1]")
        })
        .collect()
}

/// `F_{i-1}` as a point of the cycle (`F_0 = 0`).
fn lower_cdf_point(cum_before: u128) -> UnitPoint {
    // 2^-127 mass units -> 2^-128 point units; F_{i-1} < 1 so this fits
    UnitPoint::from_bits(cum_before << 1)
}

/// `F̄_i = F_{i-1} + p_i / 2` (node `i`, zero based).
pub fn midpoint(p: &Distribution, i: usize) -> UnitPoint {
    let before: u128 = p.probs()[..i].iter().map(|q| q.mass()).sum();
    midpoint_from(before, p.prob(i))
}

fn midpoint_from(cum_before: u128, p: Prob) -> UnitPoint {
    // p/2 in point units equals the mass in 2^-127 units
    lower_cdf_point(cum_before).wrapping_add(UnitPoint::from_bits(p.mass()))
}

/// `⌈log2(1/p)⌉ + 1`.
pub fn code_length(p: Prob) -> u32 {
    // p = m 2^-127 and ⌈log2(1/p)⌉ = 127 - ⌊log2 m⌋ = leading zeros of m
    p.mass().leading_zeros() + 1
}

/// First `len` bits of `(midpoint + shift) mod 1`.
pub fn codeword(midpoint: UnitPoint, shift: UnitPoint, len: u32) -> BitString {
    assert!(len <= FRACTION_BITS);
    midpoint.wrapping_add(shift).top_bits(len)
}

/// `L = Σ p_i ℓ_i` in bits.
pub fn expected_code_length<F: Real>(p: &Distribution) -> F {
    p.probs().iter().map(|&q| q.to_real::<F>() * F::from_u32(code_length(q)).unwrap()).sum()
}

/// `[cw, cw + 2^-ℓ)`: exactly the points that have `cw` as a prefix.
pub fn code_segment(cw: &BitString) -> Segment {
    if cw.is_empty() {
        return Segment::full();
    }
    Segment::new(cw.to_point(), 1u128 << (FRACTION_BITS - cw.len()))
}

/// One row of a [`CodeTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeEntry {
    pub prob: Prob,
    /// `F_i`
    pub cdf: Prob,
    /// `F̄_i` before the shift is applied.
    pub midpoint: UnitPoint,
    pub length: u32,
    pub codeword: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTable {
    shift: UnitPoint,
    entries: Vec<CodeEntry>,
}

impl CodeTable {
    pub fn build(p: &Distribution, shift: UnitPoint) -> Self {
        let mut before = 0u128;
        let entries = p
            .probs()
            .iter()
            .map(|&q| {
                let midpoint = midpoint_from(before, q);
                before += q.mass();
                let length = code_length(q);
                CodeEntry {
                    prob: q,
                    cdf: Prob::from_mass(before).expect("partial sum in (0, 1]"),
                    midpoint,
                    length,
                    codeword: codeword(midpoint, shift, length),
                }
            })
            .collect();
        CodeTable { shift, entries }
    }

    pub fn shift(&self) -> UnitPoint {
        self.shift
    }

    pub fn entries(&self) -> &[CodeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codeword(&self, i: usize) -> &BitString {
        &self.entries[i].codeword
    }

    pub fn length(&self, i: usize) -> u32 {
        self.entries[i].length
    }

    pub fn max_length(&self) -> u32 {
        self.entries.iter().map(|e| e.length).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::{entropy, MASS_ONE};
    use proptest::prelude::*;

    fn example6() -> Distribution {
        Distribution::from_decimals(&["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"]).unwrap()
    }

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn cdf_examples() {
        let f: Vec<f64> = cdf(&example6()).iter().map(|q| q.to_f64()).collect();
        for (got, want) in f.iter().zip([0.1, 0.25, 0.45, 0.7, 0.8, 1.0]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        assert_eq!(cdf(&example6()).last().unwrap().mass(), MASS_ONE);
        let u: Vec<f64> = cdf(&Distribution::uniform(4).unwrap()).iter().map(|q| q.to_f64()).collect();
        assert_eq!(u, vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(cdf(&Distribution::from_masses(vec![MASS_ONE]).unwrap()), vec![Prob::ONE]);
    }

    #[test]
    fn midpoint_examples() {
        assert!((midpoint(&example6(), 3).to_f64() - 0.575).abs() < 1e-15);
        assert!((midpoint(&example6(), 0).to_f64() - 0.05).abs() < 1e-15);
        assert_eq!(midpoint(&Distribution::uniform(2).unwrap(), 1), UnitPoint::from_f64(0.75));
    }

    #[test]
    fn code_length_examples() {
        let q = |m: u128| Prob::from_mass(m).unwrap();
        assert_eq!(code_length(q(MASS_ONE / 4)), 3);
        assert_eq!(code_length(example6().prob(0)), 5);
        assert_eq!(code_length(example6().prob(4)), 5);
        assert_eq!(code_length(q(MASS_ONE / 2)), 2);
        assert_eq!(code_length(Prob::ONE), 1);
        // just above and below a power of two
        assert_eq!(code_length(q(MASS_ONE / 4 + 1)), 3);
        assert_eq!(code_length(q(MASS_ONE / 4 - 1)), 4);
        assert_eq!(code_length(q(1)), 128);
    }

    #[test]
    fn codeword_examples() {
        let p = example6();
        let t = CodeTable::build(&p, UnitPoint::ZERO);
        assert_eq!(*t.codeword(2), bs("0101"));
        assert_eq!(*t.codeword(5), bs("1110"));
        assert_eq!(codeword(UnitPoint::HALF, UnitPoint::HALF, 3), bs("000"));
    }

    #[test]
    fn expected_length_examples() {
        let l: f64 = expected_code_length(&example6());
        let oracle = 0.1 * 5.0 + 0.15 * 4.0 + 0.2 * 4.0 + 0.25 * 3.0 + 0.1 * 5.0 + 0.2 * 4.0;
        assert!((l - oracle).abs() < 1e-12);
        assert!((oracle - 3.95f64).abs() < 1e-12);
        for r in 1..=10u32 {
            let u = Distribution::uniform(1 << r).unwrap();
            assert_eq!(expected_code_length::<f64>(&u), (r + 1) as f64);
        }
        let z = crate::demand::zipf(300, 1.0).unwrap();
        let (h, l): (f64, f64) = (entropy(&z), expected_code_length(&z));
        assert!(h + 1.0 <= l && l < h + 2.0);
    }

    #[test]
    fn code_segment_examples() {
        let s = code_segment(&bs("100"));
        assert_eq!(s.start().to_f64(), 0.5);
        assert_eq!(s.end().to_f64(), 0.625);
        let s = code_segment(&bs("00001"));
        assert_eq!(s.start().to_f64(), 0.03125);
        assert_eq!(s.end().to_f64(), 0.0625);
        let s = code_segment(&bs("1"));
        assert_eq!(s.start(), UnitPoint::HALF);
        assert_eq!(s.end(), UnitPoint::ZERO);
        assert_eq!(s.length(), Some(1 << 127));
    }

    fn arb_dist() -> impl Strategy<Value = Distribution> {
        prop::collection::vec(0.0005f64..1.0, 1..256).prop_map(|w| Distribution::from_weights(&w).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn codewords_prefix_free(p in arb_dist(), shift in any::<u128>()) {
            let t = CodeTable::build(&p, UnitPoint::from_bits(shift));
            let cws: Vec<_> = t.entries().iter().map(|e| e.codeword).collect();
            for (i, a) in cws.iter().enumerate() {
                for (j, b) in cws.iter().enumerate() {
                    if i != j {
                        prop_assert!(!a.is_prefix_of(b), "{} prefixes {}", a, b);
                    }
                }
            }
        }

        #[test]
        fn sfe_length_bounds(p in arb_dist()) {
            let h: f64 = entropy(&p);
            let l: f64 = expected_code_length(&p);
            prop_assert!(h + 1.0 <= l + 1e-9);
            prop_assert!(l < h + 2.0 + 1e-9);
        }

        #[test]
        fn code_segment_is_prefix_set(bits in any::<u128>(), len in 1u32..=64, tail in any::<u128>()) {
            let cw = UnitPoint::from_bits(bits).top_bits(len);
            let cs = code_segment(&cw);
            // appending arbitrary bits keeps the point inside
            let z = UnitPoint::from_bits(cw.left_aligned() | (tail >> len));
            prop_assert!(cs.contains(z));
            prop_assert!(z.has_prefix(&cw));
            let outside = UnitPoint::from_bits(bits ^ (1u128 << (128 - len)));
            prop_assert!(!cs.contains(outside));
        }
    }
}
