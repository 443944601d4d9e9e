//! Koszul complexes of handy sequences and the two effective regularity
//! criteria: vanishing of H^{−1}(K(X)) and the slice-wise zero-divisor /
//! annihilator test. Both are certified only up to a weight bound.

use crate::dgalg::{Element, FreeDGAlgebra, GenKind, Generator};
use crate::error::{Error, Result};
use crate::quotient::{GradedQuotient, QuotientAlgebra};
use num_traits::Zero;

/// Ordered list of homogeneous elements of the ambient algebra.
#[derive(Debug, Clone)]
pub struct HandySequence {
    pub elements: Vec<Element>,
}

impl HandySequence {
    pub fn new(elements: Vec<Element>) -> Self {
        HandySequence { elements }
    }

    /// (total degree, weight) of each element; `InhomogeneousElement` if one
    /// mixes degrees.
    pub fn degrees(&self, ring: &FreeDGAlgebra) -> Result<Vec<(i64, i64)>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.homogeneous_total(ring.gens())
                    .ok_or(Error::InhomogeneousElement { index: i })
            })
            .collect()
    }

    /// For s-stable sequences: verify diff(x_i) lies in the ideal (X), per
    /// weight slice up to the bound.
    pub fn verify_s_stable(&self, ring: &FreeDGAlgebra, weight_bound: i64) -> Result<bool> {
        let degs = self.degrees(ring)?;
        let quot = GradedQuotient::new(ring.clone(), self.elements.clone());
        for (i, x) in self.elements.iter().enumerate() {
            let dx = ring.d(x);
            if dx.is_zero() {
                continue;
            }
            let (d, w) = degs[i];
            if w > weight_bound {
                continue;
            }
            let coords = quot.reduce(&dx, d + 1, w);
            if coords.iter().any(|c| !c.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The free DG-algebra R⟨E⟩ with one exterior generator e(x) per element,
/// vertical differential e(x) ↦ x extended as an odd derivation (zero on R).
#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub algebra: FreeDGAlgebra,
    /// index of the first exterior generator inside `algebra`
    pub first_ext: usize,
}

pub fn koszul_complex(ring: &FreeDGAlgebra, seq: &HandySequence) -> Result<KoszulComplex> {
    let degs = seq.degrees(ring)?;
    let new_gens: Vec<Generator> = degs
        .iter()
        .enumerate()
        .map(|(i, &(d, w))| Generator {
            name: format!("e({i})"),
            hdeg: d,
            ext: -1,
            weight: w,
            kind: GenKind::Algebra,
        })
        .collect();
    // the vertical differential is R-linear: ring generators map to zero
    let plain = FreeDGAlgebra::new(ring.gens().to_vec());
    let (alg, first) = plain.extend(new_gens);
    let values = seq
        .elements
        .iter()
        .enumerate()
        .map(|(i, x)| (first + i, x.clone()))
        .collect();
    let algebra = alg.with_differential(values)?;
    debug_assert!(algebra.check_square_zero().is_ok());
    Ok(KoszulComplex {
        algebra,
        first_ext: first,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    RegularUpTo(i64),
    NotRegular { witness_weight: i64 },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::RegularUpTo(_))
    }
}

/// Criterion H^{−1}(K(X)) = 0, slice by slice for weights ≤ bound;
/// witness = least failing weight.
pub fn is_regular_up_to(
    ring: &FreeDGAlgebra,
    seq: &HandySequence,
    weight_bound: i64,
) -> Result<Regularity> {
    assert!(weight_bound >= 1);
    let k = koszul_complex(ring, seq)?;
    for w in 1..=weight_bound {
        let slice = k.algebra.slice(w, -2, 0)?;
        let h = slice.cohomology(-1)?;
        if h > 0 {
            return Ok(Regularity::NotRegular { witness_weight: w });
        }
    }
    Ok(Regularity::RegularUpTo(weight_bound))
}

/// dim H^{−i}(K(X)) at one weight (used by the resolution property tests).
pub fn koszul_cohomology(
    ring: &FreeDGAlgebra,
    seq: &HandySequence,
    i: i64,
    weight: i64,
) -> Result<usize> {
    let k = koszul_complex(ring, seq)?;
    let slice = k.algebra.slice(weight, -i - 1, -i + 1)?;
    slice.cohomology(-i)
}

/// Criterion (ii): against each prefix ideal J = (x₁..x_{i−1}), an even x_i
/// must act injectively on every slice of R/J, and an odd x_i must have
/// kernel equal to its own image, slice-wise. Only failures detectable
/// within weight ≤ bound are sought, matching the H^{−1} window.
pub fn zero_divisor_check(
    ring: &FreeDGAlgebra,
    seq: &HandySequence,
    weight_bound: i64,
) -> Result<Regularity> {
    assert!(weight_bound >= 1);
    let degs = seq.degrees(ring)?;
    let max_drop: i64 = ring
        .gens()
        .iter()
        .map(|g| g.total().abs())
        .max()
        .unwrap_or(0);
    let mut witness: Option<i64> = None;
    for (i, x) in seq.elements.iter().enumerate() {
        let (xd, xw) = degs[i];
        let prefix: Vec<Element> = seq.elements[..i].to_vec();
        let quot = GradedQuotient::new(ring.clone(), prefix);
        let odd = (xd).rem_euclid(2) == 1;
        for w in 0..=(weight_bound - xw) {
            let d_min = -max_drop * w - xd.abs() - 1;
            for d in d_min..=0 {
                let src = quot.slice(d, w);
                if src.dim() == 0 {
                    continue;
                }
                let m = quot.mult_matrix(x, d, w);
                let failed = if !odd {
                    // no zero divisor: multiplication injective
                    m.rank() < src.dim()
                } else {
                    // annulator of x equals (x): ker = im slice-wise
                    let ker = src.dim() - m.rank();
                    let prev_w = w - xw;
                    let im = if prev_w >= 0 {
                        quot.mult_matrix(x, d - xd, prev_w).rank()
                    } else {
                        0
                    };
                    debug_assert!(ker >= im, "x² ≠ 0 for odd x?");
                    ker > im
                };
                if failed {
                    let found = w + xw;
                    witness = Some(witness.map_or(found, |best: i64| best.min(found)));
                }
            }
        }
    }
    Ok(match witness {
        Some(w) => Regularity::NotRegular { witness_weight: w },
        None => Regularity::RegularUpTo(weight_bound),
    })
}

/// Monomial basis of the weight piece of a quotient algebra (cokernel of the
/// multiplication-into-relations map at that weight).
pub fn quotient_slice(a: &QuotientAlgebra, weight: i64) -> Vec<crate::dgalg::Monomial> {
    a.basis(weight)
}

/// dim H^hdeg of an already-built Koszul complex at one weight.
pub fn koszul_h_at(k: &KoszulComplex, hdeg: i64, weight: i64) -> Result<usize> {
    let slice = k.algebra.slice(weight, hdeg - 1, hdeg + 1)?;
    slice.cohomology(hdeg)
}
