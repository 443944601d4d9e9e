//! Bar complexes and the direct Hochschild cochain route.
//!
//! Chain side: cyclic and acyclic bar complexes of a weight-graded quotient
//! algebra, sliced by total weight, with the contracting homotopy
//! h(a₀⊗…) = 1⊗a₀⊗… of the acyclic complex.
//!
//! Cochain side: the Hochschild cochain complex Hom(ā^{⊗n}, M) with the β
//! differential, split by the weight shift w of a cochain and truncated at a
//! source-weight bound. The truncation is exact for graded complete
//! intersections when the bound is at least (n_max + 1)·max(g, ⌈ρ/2⌉); see
//! `default_source_bound`.

use crate::dgalg::{Element, Monomial};
use crate::error::Result;
use crate::exactlin::{cohomology_dim, ExactMatrix, Rat};
use crate::quotient::{ModulePresentation, QuotientAlgebra};
use crate::table::CohomologyTable;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// A pure tensor of algebra-basis classes: (weight, index into basis(weight))
/// per slot.
pub type Tensor = Vec<(i64, usize)>;

/// Enumerate tensors of `n` algebra classes with slot weights ≥ `min_w`
/// summing to `total`, in lexicographic (weight, index) order.
fn tensors(a: &QuotientAlgebra, n: i64, total: i64, min_w: i64) -> Vec<Tensor> {
    fn rec(
        a: &QuotientAlgebra,
        slots_left: i64,
        weight_left: i64,
        min_w: i64,
        cur: &mut Tensor,
        out: &mut Vec<Tensor>,
    ) {
        if slots_left == 0 {
            if weight_left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let reserve = min_w * (slots_left - 1);
        for v in min_w..=(weight_left - reserve) {
            let dim = a.dim(v);
            for k in 0..dim {
                cur.push((v, k));
                rec(a, slots_left - 1, weight_left - v, min_w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if total >= 0 {
        let mut cur: Tensor = Vec::new();
        rec(a, n, total, min_w, &mut cur, &mut out);
    }
    out
}

fn monomial_of(a: &QuotientAlgebra, slot: (i64, usize)) -> Monomial {
    a.basis(slot.0)[slot.1].clone()
}

/// Bar slice at (n, total weight): the cyclic basis m ⊗ a₁ ⊗ … ⊗ aₙ and the
/// acyclic basis m ⊗ a₁ ⊗ … ⊗ aₙ ⊗ a, together with the b and b′ matrices
/// into degree n−1. Unnormalized (unit slots allowed): the contracting
/// homotopy inserts units.
pub struct BarSlice {
    pub n: i64,
    pub weight: i64,
    pub cyclic_basis: Vec<Tensor>,
    pub bar_basis: Vec<Tensor>,
    pub b: ExactMatrix,
    pub b_prime: ExactMatrix,
}

/// Expand the product of two slots in the algebra's coset bases.
fn slot_product(a: &QuotientAlgebra, s1: (i64, usize), s2: (i64, usize)) -> Vec<(usize, Rat)> {
    let m1 = monomial_of(a, s1);
    let m2 = monomial_of(a, s2);
    let (_, coords) = a.mult_monomials(&m1, &m2);
    coords
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Matrix of the alternating face sum Σ (−1)^i d_i on the given tensors
/// (faces merge adjacent slots; `cyclic` adds the last face multiplying the
/// final slot into slot 0).
fn face_matrix(
    a: &QuotientAlgebra,
    source: &[Tensor],
    target: &[Tensor],
    cyclic: bool,
) -> ExactMatrix {
    let index: BTreeMap<&Tensor, usize> = target.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut mat = ExactMatrix::zero(target.len(), source.len());
    for (col, t) in source.iter().enumerate() {
        let len = t.len();
        for i in 0..len - 1 {
            let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            let merged_w = t[i].0 + t[i + 1].0;
            for (k, c) in slot_product(a, t[i], t[i + 1]) {
                let mut image: Tensor = Vec::with_capacity(len - 1);
                image.extend_from_slice(&t[..i]);
                image.push((merged_w, k));
                image.extend_from_slice(&t[i + 2..]);
                let row = index[&image];
                mat.add_entry(row, col, &sign * c);
            }
        }
        if cyclic && len >= 2 {
            // d_n: m ⊗ a₁ ⊗ … ⊗ aₙ ↦ (m·aₙ) ⊗ a₁ ⊗ … ⊗ a_{n−1}
            let n_faces = len - 1;
            let sign = if n_faces % 2 == 0 { Rat::one() } else { -Rat::one() };
            let merged_w = t[0].0 + t[len - 1].0;
            for (k, c) in slot_product(a, t[0], t[len - 1]) {
                let mut image: Tensor = Vec::with_capacity(len - 1);
                image.push((merged_w, k));
                image.extend_from_slice(&t[1..len - 1]);
                let row = index[&image];
                mat.add_entry(row, col, &sign * c);
            }
        }
    }
    mat
}

/// b and b′ matrices on one (n, weight) slice. b acts on the cyclic basis
/// (n+1 slots), b′ on the acyclic basis (n+2 slots).
pub fn bar_differentials(a: &QuotientAlgebra, n: i64, weight: i64) -> BarSlice {
    assert!(n >= 0);
    let cyclic_basis = tensors(a, n + 1, weight, 0);
    let bar_basis = tensors(a, n + 2, weight, 0);
    let b = if n == 0 {
        ExactMatrix::zero(0, cyclic_basis.len())
    } else {
        let target = tensors(a, n, weight, 0);
        face_matrix(a, &cyclic_basis, &target, true)
    };
    let b_prime = if n == 0 {
        ExactMatrix::zero(0, bar_basis.len())
    } else {
        let target = tensors(a, n + 1, weight, 0);
        face_matrix(a, &bar_basis, &target, false)
    };
    BarSlice {
        n,
        weight,
        cyclic_basis,
        bar_basis,
        b,
        b_prime,
    }
}

/// Matrix of the unit-inserting homotopy on `slots`-fold tensors,
/// a^{⊗slots} → a^{⊗slots+1}.
fn prepend_unit_matrix(
    a: &QuotientAlgebra,
    slots: i64,
    weight: i64,
    corrupt_sign: bool,
) -> ExactMatrix {
    let source = tensors(a, slots, weight, 0);
    let target = tensors(a, slots + 1, weight, 0);
    let index: BTreeMap<&Tensor, usize> = target.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut mat = ExactMatrix::zero(target.len(), source.len());
    let coef = if corrupt_sign { -Rat::one() } else { Rat::one() };
    for (col, t) in source.iter().enumerate() {
        let mut image = Vec::with_capacity(t.len() + 1);
        image.push((0i64, 0usize));
        image.extend_from_slice(t);
        mat.add_entry(index[&image], col, coef.clone());
    }
    mat
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyCounterexample {
    pub n: i64,
    pub weight: i64,
    pub basis_index: usize,
}

/// Verify b′h + hb′ = id on every bar slice with n ≤ n_max, weight ≤
/// weight_max. Returns the first failing slice and basis tensor otherwise.
pub fn contracting_homotopy_check(
    a: &QuotientAlgebra,
    n_max: i64,
    weight_max: i64,
) -> std::result::Result<(), HomotopyCounterexample> {
    homotopy_check_inner(a, n_max, weight_max, false)
}

/// Same check with a deliberately corrupted sign in h (mutation hook: the
/// identity must then fail).
pub fn contracting_homotopy_check_corrupted(
    a: &QuotientAlgebra,
    n_max: i64,
    weight_max: i64,
) -> std::result::Result<(), HomotopyCounterexample> {
    homotopy_check_inner(a, n_max, weight_max, true)
}

fn homotopy_check_inner(
    a: &QuotientAlgebra,
    n_max: i64,
    weight_max: i64,
    corrupt: bool,
) -> std::result::Result<(), HomotopyCounterexample> {
    for n in 0..=n_max {
        for w in 0..=weight_max {
            let source = tensors(a, n + 2, w, 0);
            if source.is_empty() {
                continue;
            }
            let h_n = prepend_unit_matrix(a, n + 2, w, corrupt);
            let target_down = tensors(a, n + 1, w, 0);
            // at bar degree 0 the downward map is the augmentation-level
            // multiplication a⊗a → a; the homotopy extends there too
            let bp_n = face_matrix(a, &source, &target_down, false);
            let up = tensors(a, n + 3, w, 0);
            let bp_up = face_matrix(a, &up, &source, false);
            let h_down = prepend_unit_matrix(a, n + 1, w, corrupt);
            let lhs = bp_up.mul(&h_n);
            let rhs = h_down.mul(&bp_n);
            for col in 0..source.len() {
                for row in 0..source.len() {
                    let got = lhs.get(row, col) + rhs.get(row, col);
                    let want = if row == col { Rat::one() } else { Rat::zero() };
                    if got != want {
                        return Err(HomotopyCounterexample {
                            n,
                            weight: w,
                            basis_index: col,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Source-weight truncation bound for the cochain complex: (n_max + 1)·s
/// with s = max(max generator weight, ⌈max relation weight / 2⌉), the Tate
/// slope of a graded complete intersection. Exact for the CI inputs this
/// engine targets; override per run otherwise.
pub fn default_source_bound(a: &QuotientAlgebra, n_max: i64) -> i64 {
    let g = a.max_generator_weight();
    let rho = a.max_relation_weight();
    let s = g.max((rho + 1) / 2);
    (n_max + 1) * s
}

/// The (n, shift w) slice of the normalized Hochschild cochain complex:
/// pairs (tensor of ā classes with source weight u ≤ source_bound, module
/// class at weight u + w), with the β matrix into degree n+1.
pub struct CochainSlice {
    pub n: i64,
    pub shift: i64,
    pub basis_len: usize,
    pub beta: ExactMatrix,
}

struct DirectCtx<'a, 'm> {
    algebra: &'a QuotientAlgebra,
    module: &'m ModulePresentation<'a>,
    source_bound: i64,
    mult_cache: Mutex<BTreeMap<(i64, usize, i64), Arc<ExactMatrix>>>,
}

impl<'a, 'm> DirectCtx<'a, 'm> {
    fn new(
        algebra: &'a QuotientAlgebra,
        module: &'m ModulePresentation<'a>,
        source_bound: i64,
    ) -> Self {
        DirectCtx {
            algebra,
            module,
            source_bound,
            mult_cache: Mutex::new(BTreeMap::new()),
        }
    }

    /// Matrix of module multiplication by a basis class, M_src → M_{src+v}.
    fn module_mult(&self, slot: (i64, usize), src_weight: i64) -> Arc<ExactMatrix> {
        let key = (slot.0, slot.1, src_weight);
        if let Some(m) = self.mult_cache.lock().unwrap().get(&key) {
            return m.clone();
        }
        let mono = monomial_of(self.algebra, slot);
        let mat = Arc::new(
            self.module
                .mult_matrix(&Element::from_term(mono, Rat::one()), src_weight),
        );
        self.mult_cache.lock().unwrap().insert(key, mat.clone());
        mat
    }

    /// Cochain basis at (n, shift): (tensor, module class index) pairs.
    fn basis(&self, n: i64, shift: i64) -> Vec<(Tensor, usize)> {
        let mut out = Vec::new();
        for u in n.max(0)..=self.source_bound {
            let ts = tensors(self.algebra, n, u, 1);
            if ts.is_empty() {
                continue;
            }
            let mdim = if u + shift >= 0 {
                self.module.dim(u + shift)
            } else {
                0
            };
            if mdim == 0 {
                continue;
            }
            for t in ts {
                for mu in 0..mdim {
                    out.push((t.clone(), mu));
                }
            }
        }
        out
    }

    /// β: C^n(w) → C^{n+1}(w) in the bases from `basis`.
    fn beta(&self, n: i64, shift: i64) -> ExactMatrix {
        let cols = self.basis(n, shift);
        let rows = self.basis(n + 1, shift);
        let col_index: BTreeMap<(&Tensor, usize), usize> = cols
            .iter()
            .enumerate()
            .map(|(i, (t, mu))| ((t, *mu), i))
            .collect();
        let row_index: BTreeMap<(&Tensor, usize), usize> = rows
            .iter()
            .enumerate()
            .map(|(i, (t, mu))| ((t, *mu), i))
            .collect();
        let mut mat = ExactMatrix::zero(rows.len(), cols.len());

        let mut seen: Option<&Tensor> = None;
        for (t, _) in rows.iter() {
            if seen == Some(t) {
                continue;
            }
            seen = Some(t);
            let s: &Tensor = t;
            let u_total: i64 = s.iter().map(|&(v, _)| v).sum();

            // first face: s₁ acts on φ(s₂..s_{n+1})
            {
                let tail: Tensor = s[1..].to_vec();
                let u_tail = u_total - s[0].0;
                if u_tail + shift >= 0 {
                    let mm = self.module_mult(s[0], u_tail + shift);
                    for (r, c, v) in mm.iter() {
                        if let Some(&col) = col_index.get(&(&tail, c)) {
                            let row = row_index[&(s, r)];
                            mat.add_entry(row, col, v.clone());
                        }
                    }
                }
            }

            // middle faces: merge slots i, i+1 with sign (−1)^{i+1} (1-based)
            for i in 0..s.len() - 1 {
                let sign = if (i + 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
                let merged_w = s[i].0 + s[i + 1].0;
                let mdim = if u_total + shift >= 0 {
                    self.module.dim(u_total + shift)
                } else {
                    0
                };
                for (k, c) in slot_product(self.algebra, s[i], s[i + 1]) {
                    let mut tt: Tensor = Vec::with_capacity(s.len() - 1);
                    tt.extend_from_slice(&s[..i]);
                    tt.push((merged_w, k));
                    tt.extend_from_slice(&s[i + 2..]);
                    for mu in 0..mdim {
                        if let Some(&col) = col_index.get(&(&tt, mu)) {
                            let row = row_index[&(s, mu)];
                            mat.add_entry(row, col, &sign * &c);
                        }
                    }
                }
            }

            // last face: φ(s₁..s_n)·s_{n+1}, sign (−1)^{n+1}
            {
                let sign = if s.len() % 2 == 0 { Rat::one() } else { -Rat::one() };
                let head: Tensor = s[..s.len() - 1].to_vec();
                let u_head = u_total - s[s.len() - 1].0;
                if u_head + shift >= 0 {
                    let mm = self.module_mult(s[s.len() - 1], u_head + shift);
                    for (r, c, v) in mm.iter() {
                        if let Some(&col) = col_index.get(&(&head, c)) {
                            let row = row_index[&(s, r)];
                            mat.add_entry(row, col, &sign * v);
                        }
                    }
                }
            }
        }
        mat
    }
}

/// One cochain slice with its β matrix (for diagnostics and tests).
pub fn cochain_slice(
    a: &QuotientAlgebra,
    m: &ModulePresentation,
    n: i64,
    shift: i64,
    source_bound: i64,
) -> CochainSlice {
    let ctx = DirectCtx::new(a, m, source_bound);
    let basis_len = ctx.basis(n, shift).len();
    CochainSlice {
        n,
        shift,
        basis_len,
        beta: ctx.beta(n, shift),
    }
}

/// dim HH^n(a, M) per weight shift, for n ≤ n_max and shifts ≤ weight_max.
/// Zero dimensions are omitted.
pub fn hochschild_direct_table(
    a: &QuotientAlgebra,
    m: &ModulePresentation,
    n_max: i64,
    weight_max: i64,
    source_bound: Option<i64>,
) -> Result<CohomologyTable> {
    let bound = source_bound.unwrap_or_else(|| default_source_bound(a, n_max));
    let shifts: Vec<i64> = (-bound..=weight_max).collect();
    let per_shift: Vec<Result<Vec<(i64, i64, u64)>>> = shifts
        .par_iter()
        .map(|&w| {
            let ctx = DirectCtx::new(a, m, bound);
            let mut entries = Vec::new();
            let mut prev = ExactMatrix::zero(ctx.basis(0, w).len(), 0);
            for n in 0..=n_max {
                let beta_n = ctx.beta(n, w);
                let h = cohomology_dim(&prev, &beta_n)?;
                if h > 0 {
                    entries.push((n, w, h as u64));
                }
                prev = beta_n;
            }
            Ok(entries)
        })
        .collect();
    let mut table = CohomologyTable::new();
    for r in per_shift {
        for (n, w, d) in r? {
            table.add(n, w, d);
        }
    }
    Ok(table)
}

/// One row of the direct table: dims of HH^n per weight.
pub fn hochschild_direct(
    a: &QuotientAlgebra,
    m: &ModulePresentation,
    n: i64,
    weight_max: i64,
    source_bound: Option<i64>,
) -> Result<Vec<(i64, u64)>> {
    let table = hochschild_direct_table(a, m, n, weight_max, source_bound)?;
    Ok(table
        .iter()
        .filter(|&(nn, _, _)| nn == n)
        .map(|(_, w, d)| (w, d))
        .collect())
}

/// Hochschild homology dims per (n, total weight) from the normalized cyclic
/// chain complex — an independent chain-side route used for duality checks.
pub fn hochschild_homology_table(
    a: &QuotientAlgebra,
    n_max: i64,
    weight_max: i64,
) -> Result<CohomologyTable> {
    let mut table = CohomologyTable::new();
    for w in 0..=weight_max {
        // slices of M ⊗ ā^{⊗n} with M = a (slot 0 weight ≥ 0, others ≥ 1)
        let slice_basis = |n: i64| -> Vec<Tensor> {
            let mut out = Vec::new();
            for w0 in 0..=w {
                for k0 in 0..a.dim(w0) {
                    for t in tensors(a, n, w - w0, 1) {
                        let mut full = vec![(w0, k0)];
                        full.extend(t);
                        out.push(full);
                    }
                }
            }
            out
        };
        let mut bases: Vec<Vec<Tensor>> = Vec::new();
        for n in 0..=n_max + 1 {
            bases.push(slice_basis(n));
        }
        for n in 0..=n_max {
            let d_in = face_matrix(a, &bases[(n + 1) as usize], &bases[n as usize], true);
            let d_out = if n == 0 {
                ExactMatrix::zero(0, bases[0].len())
            } else {
                face_matrix(a, &bases[n as usize], &bases[(n - 1) as usize], true)
            };
            let h = cohomology_dim(&d_in, &d_out)?;
            if h > 0 {
                table.add(n, w, h as u64);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::FreeDGAlgebra;

    fn poly1() -> QuotientAlgebra {
        QuotientAlgebra::polynomial(&[("x", 1)], vec![])
    }

    fn dual_numbers() -> QuotientAlgebra {
        let poly = FreeDGAlgebra::polynomial(&[("x", 1)]);
        let x2 = poly.multiply(&Element::gen(0), &Element::gen(0));
        QuotientAlgebra::new(poly, vec![x2])
    }

    fn xy_algebra() -> QuotientAlgebra {
        let poly = FreeDGAlgebra::polynomial(&[("x", 1), ("y", 1)]);
        let xy = poly.multiply(&Element::gen(0), &Element::gen(1));
        QuotientAlgebra::new(poly, vec![xy])
    }

    #[test]
    fn b_and_b_prime_square_to_zero() {
        for a in [dual_numbers(), xy_algebra()] {
            for n in 2..=3 {
                for w in 0..=4 {
                    let s = bar_differentials(&a, n, w);
                    let down = bar_differentials(&a, n - 1, w);
                    assert!(down.b.mul(&s.b).is_zero(), "b² ≠ 0 at n={n}, w={w}");
                    assert!(
                        down.b_prime.mul(&s.b_prime).is_zero(),
                        "b′² ≠ 0 at n={n}, w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_zero_b_is_zero_map() {
        let a = dual_numbers();
        let s = bar_differentials(&a, 0, 1);
        assert_eq!(s.b.rows(), 0);
        assert!(!s.cyclic_basis.is_empty());
    }

    #[test]
    fn contracting_homotopy_polynomial_ring() {
        assert_eq!(contracting_homotopy_check(&poly1(), 3, 3), Ok(()));
    }

    #[test]
    fn contracting_homotopy_dual_numbers() {
        assert_eq!(contracting_homotopy_check(&dual_numbers(), 3, 3), Ok(()));
    }

    #[test]
    fn corrupted_homotopy_is_caught() {
        let r = contracting_homotopy_check_corrupted(&dual_numbers(), 2, 2);
        assert!(r.is_err());
    }

    #[test]
    fn acyclic_bar_complex_has_no_homology() {
        // consequence of the contracting homotopy, checked directly
        let a = dual_numbers();
        for n in 1..=3 {
            for w in 0..=4 {
                let src = tensors(&a, n + 2, w, 0);
                let mid = tensors(&a, n + 1, w, 0);
                let dst = tensors(&a, n, w, 0);
                let d_in = face_matrix(&a, &src, &mid, false);
                let d_out = face_matrix(&a, &mid, &dst, false);
                assert_eq!(
                    cohomology_dim(&d_in, &d_out).unwrap(),
                    0,
                    "bar homology at n={n}, w={w}"
                );
            }
        }
    }

    #[test]
    fn hh0_of_polynomial_ring_is_the_ring() {
        let a = poly1();
        let m = ModulePresentation::regular(&a);
        let row = hochschild_direct(&a, &m, 0, 4, None).unwrap();
        assert_eq!(row, vec![(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]);
    }

    #[test]
    fn hh1_of_polynomial_ring_is_derivations() {
        // x^{w+1}∂ₓ: dimension 1 in each shift w ≥ −1
        let a = poly1();
        let m = ModulePresentation::regular(&a);
        let row = hochschild_direct(&a, &m, 1, 3, None).unwrap();
        assert_eq!(row, vec![(-1, 1), (0, 1), (1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn hh2_of_polynomial_ring_vanishes() {
        let a = poly1();
        let m = ModulePresentation::regular(&a);
        let row = hochschild_direct(&a, &m, 2, 3, None).unwrap();
        assert!(row.is_empty());
    }

    #[test]
    fn hh_of_dual_numbers_low_degrees() {
        // classical: HH⁰ = a (weights 0 and 1), HH¹ and HH² of total
        // dimension 1 each
        let a = dual_numbers();
        let m = ModulePresentation::regular(&a);
        let table = hochschild_direct_table(&a, &m, 2, 4, None).unwrap();
        assert_eq!(table.get(0, 0), 1);
        assert_eq!(table.get(0, 1), 1);
        let h1: u64 = table
            .iter()
            .filter(|&(n, _, _)| n == 1)
            .map(|(_, _, d)| d)
            .sum();
        let h2: u64 = table
            .iter()
            .filter(|&(n, _, _)| n == 2)
            .map(|(_, _, d)| d)
            .sum();
        assert_eq!(h1, 1);
        assert_eq!(h2, 1);
    }

    #[test]
    fn duality_with_homology_for_dual_numbers() {
        // a = Q[x]/(x²) is Frobenius with socle in weight 1: a* ≅ a⟨−1⟩,
        // so HH^n(a,a)_w = HH_n(a,a)_{1−w}. Exercises both routes' signs.
        let a = dual_numbers();
        let m = ModulePresentation::regular(&a);
        let cohomology = hochschild_direct_table(&a, &m, 3, 6, None).unwrap();
        let homology = hochschild_homology_table(&a, 3, 6).unwrap();
        for n in 0..=3i64 {
            for w in -4..=4i64 {
                let lhs = cohomology.get(n, w);
                let r = 1 - w;
                let rhs = if (0..=6).contains(&r) { homology.get(n, r) } else { 0 };
                assert_eq!(lhs, rhs, "duality mismatch at n={n}, w={w}");
            }
        }
    }

    #[test]
    fn beta_squares_to_zero_on_xy_algebra() {
        let a = xy_algebra();
        let m = ModulePresentation::regular(&a);
        let bound = default_source_bound(&a, 3);
        for w in -2..=2 {
            let ctx = DirectCtx::new(&a, &m, bound);
            for n in 0..=2 {
                let b1 = ctx.beta(n, w);
                let b2 = ctx.beta(n + 1, w);
                assert!(b2.mul(&b1).is_zero(), "β² ≠ 0 at n={n}, w={w}");
            }
        }
    }
}
