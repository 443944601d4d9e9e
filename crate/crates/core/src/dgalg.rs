//! Free graded-commutative DG algebras over Q.
//!
//! Generators carry a bidegree (hdeg, ext) — ext is the exterior-power tag
//! used by Koszul complexes and exterior algebras, zero for ordinary
//! generators — plus a positive weight. Signs always use the total degree
//! hdeg + ext, so one multiplication routine serves the single- and
//! double-graded cases. Every generator has weight ≥ 1, which makes each
//! (degree, weight) slice a finite-dimensional Q-vector space.

use crate::error::{Error, Result};
use crate::exactlin::{cohomology_dim, ExactMatrix, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenKind {
    Algebra,
    Module,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// homological degree, ≤ 0
    pub hdeg: i64,
    /// exterior degree, ≤ 0 (0 unless adjoined by a Koszul/exterior construction)
    pub ext: i64,
    /// internal weight, ≥ 1
    pub weight: i64,
    pub kind: GenKind,
}

impl Generator {
    pub fn algebra(name: impl Into<String>, hdeg: i64, weight: i64) -> Self {
        Generator {
            name: name.into(),
            hdeg,
            ext: 0,
            weight,
            kind: GenKind::Algebra,
        }
    }

    pub fn total(&self) -> i64 {
        self.hdeg + self.ext
    }

    pub fn is_odd(&self) -> bool {
        self.total().rem_euclid(2) == 1
    }
}

/// Monomial in a fixed generator order: sorted (generator index, exponent)
/// pairs, exponents ≥ 1. Odd-total-degree generators appear with exponent 1
/// only (they square to zero over Q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(idx: usize) -> Self {
        Monomial(vec![(idx, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.0
            .iter()
            .find(|(g, _)| *g == idx)
            .map_or(0, |(_, e)| *e)
    }

    pub fn degree_of(&self, gens: &[Generator]) -> (i64, i64, i64) {
        let mut h = 0;
        let mut x = 0;
        let mut w = 0;
        for &(g, e) in &self.0 {
            h += gens[g].hdeg * e as i64;
            x += gens[g].ext * e as i64;
            w += gens[g].weight * e as i64;
        }
        (h, x, w)
    }
}

/// Q-linear combination of monomials; absent monomials have coefficient zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element(pub BTreeMap<Monomial, Rat>);

impl Element {
    pub fn zero() -> Self {
        Element(BTreeMap::new())
    }

    pub fn one() -> Self {
        Element::from_term(Monomial::one(), Rat::one())
    }

    pub fn from_term(m: Monomial, c: Rat) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn gen(idx: usize) -> Self {
        Element::from_term(Monomial::gen(idx), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn neg(&self) -> Element {
        Element(self.0.iter().map(|(m, v)| (m.clone(), -v.clone())).collect())
    }

    /// The unique (hdeg, ext, weight) of a homogeneous element, if any.
    pub fn homogeneous_degree(&self, gens: &[Generator]) -> Option<(i64, i64, i64)> {
        let mut deg = None;
        for m in self.0.keys() {
            let d = m.degree_of(gens);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Same but only requiring (total degree, weight) to match.
    pub fn homogeneous_total(&self, gens: &[Generator]) -> Option<(i64, i64)> {
        let mut deg = None;
        for m in self.0.keys() {
            let (h, x, w) = m.degree_of(gens);
            let d = (h + x, w);
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }
}

/// Koszul sign for multiplying canonical monomials m1·m2: each odd factor of
/// m2 passes every odd factor of m1 with a larger generator index.
fn koszul_sign(gens: &[Generator], m1: &Monomial, m2: &Monomial) -> i32 {
    let odd1: Vec<usize> = m1
        .0
        .iter()
        .filter(|&&(g, _)| gens[g].is_odd())
        .map(|&(g, _)| g)
        .collect();
    if odd1.is_empty() {
        return 1;
    }
    let mut transpositions = 0usize;
    for &(g2, _) in &m2.0 {
        if !gens[g2].is_odd() {
            continue;
        }
        transpositions += odd1.iter().filter(|&&g1| g2 < g1).count();
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Merge exponent vectors; None if an odd generator would be squared.
fn merge_monomials(gens: &[Generator], m1: &Monomial, m2: &Monomial) -> Option<Monomial> {
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(m1.0.len() + m2.0.len());
    let (mut i, mut j) = (0, 0);
    while i < m1.0.len() || j < m2.0.len() {
        let take_first = match (m1.0.get(i), m2.0.get(j)) {
            (Some(a), Some(b)) => {
                if a.0 == b.0 {
                    let g = a.0;
                    if gens[g].is_odd() {
                        return None;
                    }
                    out.push((g, a.1 + b.1));
                    i += 1;
                    j += 1;
                    continue;
                }
                a.0 < b.0
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_first {
            out.push(m1.0[i]);
            i += 1;
        } else {
            out.push(m2.0[j]);
            j += 1;
        }
    }
    Some(Monomial(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Free graded-commutative algebra with a generator-defined differential.
/// Immutable after construction; slices are pure derived data.
#[derive(Debug, Clone)]
pub struct FreeDGAlgebra {
    gens: Vec<Generator>,
    diff: Vec<Element>,
}

impl FreeDGAlgebra {
    pub fn new(gens: Vec<Generator>) -> Self {
        for g in &gens {
            assert!(g.weight >= 1, "generator `{}` must have weight ≥ 1", g.name);
            assert!(g.hdeg <= 0 && g.ext <= 0, "generator degrees must be ≤ 0");
        }
        let n = gens.len();
        FreeDGAlgebra {
            gens,
            diff: vec![Element::zero(); n],
        }
    }

    /// Polynomial ring in hdeg 0 with the given (name, weight) generators.
    pub fn polynomial(vars: &[(&str, i64)]) -> Self {
        Self::new(
            vars.iter()
                .map(|&(n, w)| Generator::algebra(n, 0, w))
                .collect(),
        )
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn diff_value(&self, idx: usize) -> &Element {
        &self.diff[idx]
    }

    /// Install differential values (total degree +1, weight-preserving on
    /// each generator). Checks degrees, not d² — see `check_square_zero`.
    pub fn with_differential(mut self, values: Vec<(usize, Element)>) -> Result<Self> {
        for (idx, v) in values {
            if !v.is_zero() {
                let g = &self.gens[idx];
                let expect = (g.total() + 1, g.weight);
                match v.homogeneous_total(&self.gens) {
                    Some(d) if d == expect => {}
                    _ => {
                        return Err(Error::DegreeMismatch {
                            generator: g.name.clone(),
                            expected_hdeg: expect.0,
                            expected_weight: expect.1,
                        })
                    }
                }
            }
            self.diff[idx] = v;
        }
        Ok(self)
    }

    /// Adjoin generators (returning the extended algebra and the index of the
    /// first new generator). Existing differential values carry over; new
    /// generators start with zero differential.
    pub fn extend(&self, new_gens: Vec<Generator>) -> (Self, usize) {
        let first = self.gens.len();
        let mut gens = self.gens.clone();
        gens.extend(new_gens);
        let mut alg = FreeDGAlgebra::new(gens);
        alg.diff[..first].clone_from_slice(&self.diff);
        (alg, first)
    }

    /// Set the differential of a single generator (used by resolvent
    /// adjunction while the algebra is being built).
    pub fn set_diff(&mut self, idx: usize, v: Element) -> Result<()> {
        let g = &self.gens[idx];
        if !v.is_zero() {
            let expect = (g.total() + 1, g.weight);
            match v.homogeneous_total(&self.gens) {
                Some(d) if d == expect => {}
                _ => {
                    return Err(Error::DegreeMismatch {
                        generator: g.name.clone(),
                        expected_hdeg: expect.0,
                        expected_weight: expect.1,
                    })
                }
            }
        }
        self.diff[idx] = v;
        Ok(())
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in &a.0 {
            for (m2, c2) in &b.0 {
                if let Some(m) = merge_monomials(&self.gens, m1, m2) {
                    let sign = koszul_sign(&self.gens, m1, m2);
                    let mut c = c1 * c2;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        out
    }

    pub fn multiply_all(&self, factors: &[Element]) -> Element {
        let mut acc = Element::one();
        for f in factors {
            acc = self.multiply(&acc, f);
        }
        acc
    }

    /// Apply the algebra's differential (odd derivation, Leibniz
    /// d(uv) = d(u)v + (−1)^{|u|} u d(v)) to an element.
    pub fn d(&self, e: &Element) -> Element {
        self.apply_derivation(e, Parity::Odd, |i| self.diff[i].clone())
    }

    /// Apply a derivation with the given parity and generator values.
    pub fn apply_derivation<F>(&self, e: &Element, parity: Parity, values: F) -> Element
    where
        F: Fn(usize) -> Element,
    {
        let mut out = Element::zero();
        for (m, c) in &e.0 {
            let dm = self.derive_monomial(m, parity, &values);
            out = out.add(&dm.scale(c));
        }
        out
    }

    fn derive_monomial<F>(&self, m: &Monomial, parity: Parity, values: &F) -> Element
    where
        F: Fn(usize) -> Element,
    {
        // d(g1^e1 ... gk^ek) = Σ_p sign_p · g1^e1 ... (e_p g_p^{e_p-1}) ... gk^ek · d(g_p)
        // with sign_p = (−1)^{|prefix before p|} for odd derivations, and the
        // value re-merged via the signed multiply.
        let mut out = Element::zero();
        let mut prefix_total: i64 = 0;
        for (p, &(g, e)) in m.0.iter().enumerate() {
            let value = values(g);
            if !value.is_zero() {
                // monomial with exponent at p lowered
                let mut rest = m.0.clone();
                if e == 1 {
                    rest.remove(p);
                } else {
                    rest[p].1 = e - 1;
                }
                // split: factors up to and including position p (lowered), then tail.
                // d hits the p-th factor; moving d past the prefix gives the sign.
                let sign_flip = parity == Parity::Odd && prefix_total.rem_euclid(2) == 1;
                // assemble prefix^lowered · value · suffix via signed multiplies:
                // left = g1^e1..g_p^{e_p-1} (all factors ≤ p), right = tail
                let split = rest
                    .iter()
                    .position(|&(gg, _)| gg > g)
                    .unwrap_or(rest.len());
                let left = Element::from_term(Monomial(rest[..split].to_vec()), Rat::one());
                let right = Element::from_term(Monomial(rest[split..].to_vec()), Rat::one());
                let mut term = self.multiply(&self.multiply(&left, &value), &right);
                let mut coef = Rat::from_integer(e.into());
                if sign_flip {
                    coef = -coef;
                }
                term = term.scale(&coef);
                out = out.add(&term);
            }
            prefix_total += self.gens[g].total() * e as i64;
        }
        out
    }

    /// Left partial derivative ∂e/∂g: for each occurrence of g in a monomial,
    /// remove it and collect the Koszul sign of moving the removed slot to
    /// the right end (coefficient-left convention for module elements).
    pub fn partial(&self, e: &Element, g: usize) -> Element {
        let mut out = Element::zero();
        for (m, c) in &e.0 {
            let Some(p) = m.0.iter().position(|&(gg, _)| gg == g) else {
                continue;
            };
            let (_, exp) = m.0[p];
            let mut rest = m.0.clone();
            if exp == 1 {
                rest.remove(p);
            } else {
                rest[p].1 = exp - 1;
            }
            // sign: ∂ removes one g; the removed factor passes the suffix
            let suffix_total: i64 = m.0[p + 1..]
                .iter()
                .map(|&(gg, ee)| self.gens[gg].total() * ee as i64)
                .sum();
            // (for even g within its own power block no internal sign arises)
            let mut coef = c * Rat::from_integer(exp.into());
            if self.gens[g].is_odd() && suffix_total.rem_euclid(2) == 1 {
                coef = -coef;
            }
            out.add_term(Monomial(rest), coef);
        }
        out
    }

    /// d(d(g)) = 0 for every generator (sufficient by Leibniz). Returns the
    /// first failing generator's name otherwise.
    pub fn check_square_zero(&self) -> std::result::Result<(), String> {
        for (i, g) in self.gens.iter().enumerate() {
            let dd = self.d(&self.diff[i]);
            if !dd.is_zero() {
                return Err(g.name.clone());
            }
        }
        Ok(())
    }

    /// All monomials of the given (total degree, weight), ordered
    /// lexicographically by exponent vector in generator order.
    pub fn weight_basis(&self, total_deg: i64, weight: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if weight < 0 {
            return out;
        }
        let mut cur: Vec<(usize, u32)> = Vec::new();
        self.enumerate(0, total_deg, weight, &mut cur, &mut |m| out.push(m), &|g| {
            g.total()
        });
        out.sort();
        out
    }

    /// All monomials of the given (hdeg, ext, weight).
    pub fn bigraded_basis(&self, hdeg: i64, ext: i64, weight: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if weight < 0 {
            return out;
        }
        let mut cur: Vec<(usize, u32)> = Vec::new();
        self.enumerate(0, hdeg, weight, &mut cur, &mut |m: Monomial| {
            let (_, x, _) = m.degree_of(&self.gens);
            if x == ext {
                out.push(m)
            }
        }, &|g| g.hdeg);
        out.sort();
        out
    }

    fn enumerate<F, D>(
        &self,
        from: usize,
        deg_left: i64,
        weight_left: i64,
        cur: &mut Vec<(usize, u32)>,
        emit: &mut F,
        deg_fn: &D,
    ) where
        F: FnMut(Monomial),
        D: Fn(&Generator) -> i64,
    {
        if weight_left == 0 {
            if deg_left == 0 {
                emit(Monomial(cur.clone()));
            }
            return;
        }
        if from == self.gens.len() {
            return;
        }
        // degrees are ≤ 0, weights ≥ 1; prune when the target degree can no
        // longer be reached
        if deg_left > 0 {
            return;
        }
        let g = &self.gens[from];
        let max_exp = if g.is_odd() {
            1
        } else {
            (weight_left / g.weight) as u32
        };
        for e in 0..=max_exp {
            let w = weight_left - g.weight * e as i64;
            if w < 0 {
                break;
            }
            let d = deg_left - deg_fn(g) * e as i64;
            if e > 0 {
                cur.push((from, e));
            }
            self.enumerate(from + 1, d, w, cur, emit, deg_fn);
            if e > 0 {
                cur.pop();
            }
        }
    }

    /// Extract the finite chain of vector spaces and differential matrices at
    /// one weight, for total degrees in [hdeg_min, hdeg_max].
    pub fn slice(&self, weight: i64, hdeg_min: i64, hdeg_max: i64) -> Result<ComplexSlice> {
        assert!(hdeg_min <= hdeg_max);
        let mut bases = BTreeMap::new();
        for h in hdeg_min..=hdeg_max {
            bases.insert(h, self.weight_basis(h, weight));
        }
        let mut matrices = BTreeMap::new();
        for h in hdeg_min..hdeg_max {
            let source = &bases[&h];
            let target = &bases[&(h + 1)];
            let index: BTreeMap<&Monomial, usize> =
                target.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut mat = ExactMatrix::zero(target.len(), source.len());
            for (col, m) in source.iter().enumerate() {
                let dm = self.d(&Element::from_term(m.clone(), Rat::one()));
                for (mono, c) in &dm.0 {
                    let row = *index
                        .get(mono)
                        .expect("differential left the weight slice");
                    mat.add_entry(row, col, c.clone());
                }
            }
            matrices.insert(h, mat);
        }
        let slice = ComplexSlice {
            weight,
            bases,
            matrices,
        };
        slice.verify_composites()?;
        Ok(slice)
    }

    /// Substitute generators by elements of another algebra, extending
    /// multiplicatively (the target multiply carries the Koszul signs).
    pub fn substitute<F>(&self, e: &Element, target: &FreeDGAlgebra, map: F) -> Element
    where
        F: Fn(usize) -> Element,
    {
        let mut out = Element::zero();
        for (m, c) in &e.0 {
            let mut acc = Element::from_term(Monomial::one(), c.clone());
            for &(g, exp) in &m.0 {
                let img = map(g);
                for _ in 0..exp {
                    acc = target.multiply(&acc, &img);
                    if acc.is_zero() {
                        break;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn render(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in &e.0 {
            let mono = if m.is_one() {
                "1".to_string()
            } else {
                m.0.iter()
                    .map(|&(g, e)| {
                        if e == 1 {
                            self.gens[g].name.clone()
                        } else {
                            format!("{}^{}", self.gens[g].name, e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            };
            parts.push(format!("{c}*{mono}"));
        }
        parts.join(" + ")
    }
}

/// For a fixed weight, the finite-dimensional chain of Q-vector spaces and
/// differential matrices extracted from a DG object.
#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub weight: i64,
    pub bases: BTreeMap<i64, Vec<Monomial>>,
    pub matrices: BTreeMap<i64, ExactMatrix>,
}

impl ComplexSlice {
    pub fn dim(&self, hdeg: i64) -> usize {
        self.bases.get(&hdeg).map_or(0, |b| b.len())
    }

    fn verify_composites(&self) -> Result<()> {
        for (h, m) in &self.matrices {
            if let Some(next) = self.matrices.get(&(h + 1)) {
                let comp = next.mul(m);
                let first = comp.iter().next().map(|(r, c, _)| (r, c));
                if let Some((row, col)) = first {
                    return Err(Error::CompositeNotZero { row, col });
                }
            }
        }
        Ok(())
    }

    /// dim H^h of the slice; hdeg strictly inside the extracted window uses
    /// both neighbour matrices, edges treat the missing side as zero.
    pub fn cohomology(&self, hdeg: i64) -> Result<usize> {
        let dim = self.dim(hdeg);
        let d_in = self
            .matrices
            .get(&(hdeg - 1))
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(dim, 0));
        let d_out = self
            .matrices
            .get(&hdeg)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zero(0, dim));
        cohomology_dim(&d_in, &d_out)
    }
}

/// Description of one free-module generator fed to `exterior_algebra`.
#[derive(Debug, Clone)]
pub struct ModuleGen {
    pub name: String,
    pub hdeg: i64,
    pub weight: i64,
    /// d(f_i) = Σ_j coeff · f_j, coefficients in the base algebra
    pub diff: Vec<(Element, usize)>,
}

/// The exterior algebra on a g-finite free DG module: one algebra generator
/// of bidegree (hdeg(f_i), −1) per module generator, horizontal differential
/// transferred coefficient-wise, extended over the base differential.
/// The exterior-degree-j slice (ext = −j) recovers ∧^j.
pub fn exterior_algebra(base: &FreeDGAlgebra, module_gens: &[ModuleGen]) -> Result<FreeDGAlgebra> {
    let base_n = base.gens().len();
    let new_gens: Vec<Generator> = module_gens
        .iter()
        .map(|mg| Generator {
            name: mg.name.clone(),
            hdeg: mg.hdeg,
            ext: -1,
            weight: mg.weight,
            kind: GenKind::Module,
        })
        .collect();
    let (alg, first) = base.extend(new_gens);
    let mut values = Vec::new();
    for (i, mg) in module_gens.iter().enumerate() {
        let mut v = Element::zero();
        for (coeff, j) in &mg.diff {
            if *j >= module_gens.len() {
                return Err(Error::NotFree {
                    generator: mg.name.clone(),
                });
            }
            // coefficients must live in the base algebra
            for m in coeff.0.keys() {
                if m.0.iter().any(|&(g, _)| g >= base_n) {
                    return Err(Error::NotFree {
                        generator: mg.name.clone(),
                    });
                }
            }
            let e_j = Element::gen(first + j);
            v = v.add(&alg.multiply(coeff, &e_j));
        }
        values.push((first + i, v));
    }
    let alg = alg.with_differential(values)?;
    if let Err(g) = alg.check_square_zero() {
        return Err(Error::NotFree { generator: g });
    }
    Ok(alg)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (hdeg {}, ext {}, weight {})",
            self.name, self.hdeg, self.ext, self.weight
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat_int;
    use proptest::prelude::*;

    fn koszul_qx() -> FreeDGAlgebra {
        // Q[x]⟨e⟩ with d(e) = x
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("x", 0, 1),
            Generator::algebra("e", -1, 1),
        ]);
        alg.with_differential(vec![(1, Element::gen(0))]).unwrap()
    }

    #[test]
    fn koszul_sign_on_odd_generators() {
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("e1", -1, 1),
            Generator::algebra("e2", -1, 1),
        ]);
        let e1 = Element::gen(0);
        let e2 = Element::gen(1);
        let e12 = alg.multiply(&e1, &e2);
        let e21 = alg.multiply(&e2, &e1);
        assert_eq!(e21, e12.neg());
        assert!(!e12.is_zero());
    }

    #[test]
    fn even_generators_commute() {
        let alg = FreeDGAlgebra::polynomial(&[("x", 1), ("y", 1)]);
        let x = Element::gen(0);
        let y = Element::gen(1);
        assert_eq!(alg.multiply(&x, &y), alg.multiply(&y, &x));
    }

    #[test]
    fn odd_generator_squares_to_zero() {
        let alg = FreeDGAlgebra::new(vec![Generator::algebra("e", -1, 1)]);
        let e = Element::gen(0);
        assert!(alg.multiply(&e, &e).is_zero());
    }

    #[test]
    fn zero_values_give_zero_derivation() {
        let alg = FreeDGAlgebra::polynomial(&[("x", 1), ("y", 1)]);
        let x = Element::gen(0);
        let d = alg.apply_derivation(&x, Parity::Odd, |_| Element::zero());
        assert!(d.is_zero());
    }

    #[test]
    fn leibniz_on_product() {
        // Q[x]⟨e⟩, d(e) = x: d(xe) = x·x = x²
        let alg = koszul_qx();
        let x = Element::gen(0);
        let e = Element::gen(1);
        let xe = alg.multiply(&x, &e);
        let x2 = alg.multiply(&x, &x);
        assert_eq!(alg.d(&xe), x2);
    }

    #[test]
    fn leibniz_with_signs_two_odd_generators() {
        // d(e1 e2) = x1 e2 − x2 e1 (hand-expanded oracle)
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("x1", 0, 1),
            Generator::algebra("x2", 0, 1),
            Generator::algebra("e1", -1, 1),
            Generator::algebra("e2", -1, 1),
        ]);
        let alg = alg
            .with_differential(vec![(2, Element::gen(0)), (3, Element::gen(1))])
            .unwrap();
        let e1e2 = alg.multiply(&Element::gen(2), &Element::gen(3));
        let expected = alg
            .multiply(&Element::gen(0), &Element::gen(3))
            .sub(&alg.multiply(&Element::gen(1), &Element::gen(2)));
        assert_eq!(alg.d(&e1e2), expected);
    }

    #[test]
    fn square_zero_passes_for_koszul() {
        assert!(koszul_qx().check_square_zero().is_ok());
    }

    #[test]
    fn degree_mismatch_rejected() {
        // d(x) = 1 violates weight preservation
        let alg = FreeDGAlgebra::polynomial(&[("x", 1)]);
        let r = alg.with_differential(vec![(0, Element::one())]);
        assert!(matches!(r, Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn square_zero_failure_reported() {
        // f (hdeg −2, wt 1) ↦ e (hdeg −1, wt 1) ↦ x: d²(f) = x ≠ 0
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("x", 0, 1),
            Generator::algebra("e", -1, 1),
            Generator::algebra("f", -2, 1),
        ]);
        let alg = alg
            .with_differential(vec![(1, Element::gen(0)), (2, Element::gen(1))])
            .unwrap();
        assert_eq!(alg.check_square_zero(), Err("f".to_string()));
    }

    #[test]
    fn weight_basis_polynomials() {
        let alg = FreeDGAlgebra::polynomial(&[("x", 1), ("y", 1)]);
        let b = alg.weight_basis(0, 2);
        assert_eq!(b.len(), 3); // x², xy, y²
    }

    #[test]
    fn weight_basis_weight_zero_is_unit() {
        let alg = FreeDGAlgebra::polynomial(&[("x", 1)]);
        assert_eq!(alg.weight_basis(0, 0), vec![Monomial::one()]);
    }

    #[test]
    fn weight_basis_with_odd_generator() {
        // Q[x]⟨e⟩: hdeg −1, weight 3 → {x²e}
        let alg = koszul_qx();
        let b = alg.weight_basis(-1, 3);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], Monomial(vec![(0, 2), (1, 1)]));
    }

    /// Independent counting oracle for basis sizes: bivariate series product
    /// over generators, geometric for even, (1 + t) for odd.
    fn series_count(alg: &FreeDGAlgebra, total: i64, weight: i64) -> usize {
        let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        counts.insert((0, 0), 1);
        for g in alg.gens() {
            let mut next = BTreeMap::new();
            for (&(d, w), &c) in &counts {
                let mut e = 0i64;
                loop {
                    let nd = d + g.total() * e;
                    let nw = w + g.weight * e;
                    if nw > weight {
                        break;
                    }
                    *next.entry((nd, nw)).or_insert(0) += c;
                    if g.is_odd() && e == 1 {
                        break;
                    }
                    e += 1;
                }
            }
            counts = next;
        }
        counts.get(&(total, weight)).copied().unwrap_or(0)
    }

    #[test]
    fn weight_basis_matches_generating_function() {
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("x", 0, 1),
            Generator::algebra("y", 0, 2),
            Generator::algebra("e", -1, 1),
            Generator::algebra("f", -2, 3),
        ]);
        for d in -6..=0 {
            for w in 0..=8 {
                assert_eq!(
                    alg.weight_basis(d, w).len(),
                    series_count(&alg, d, w),
                    "mismatch at ({d}, {w})"
                );
            }
        }
    }

    #[test]
    fn slice_koszul_weight_one() {
        let alg = koszul_qx();
        let s = alg.slice(1, -1, 0).unwrap();
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(0), 1);
        assert_eq!(s.matrices[&-1].get(0, 0), rat_int(1));
    }

    #[test]
    fn slice_koszul_weight_two() {
        // xe ↦ x²: matrix [1] in bases {xe}, {x²}
        let alg = koszul_qx();
        let s = alg.slice(2, -1, 0).unwrap();
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(0), 1);
        assert_eq!(s.matrices[&-1].get(0, 0), rat_int(1));
    }

    #[test]
    fn zero_differential_gives_zero_matrices() {
        let alg = FreeDGAlgebra::new(vec![
            Generator::algebra("x", 0, 1),
            Generator::algebra("e", -1, 1),
        ]);
        let s = alg.slice(2, -2, 0).unwrap();
        for m in s.matrices.values() {
            assert!(m.is_zero());
        }
    }

    #[test]
    fn exterior_algebra_of_free_rank_two() {
        // M free of rank 2 in hdeg 0 → ∧² rank 1, ∧³ = 0; ∧⁰ = base, ∧¹ ≅ M
        let base = FreeDGAlgebra::polynomial(&[("x", 1)]);
        let w = exterior_algebra(
            &base,
            &[
                ModuleGen {
                    name: "f1".into(),
                    hdeg: 0,
                    weight: 1,
                    diff: vec![],
                },
                ModuleGen {
                    name: "f2".into(),
                    hdeg: 0,
                    weight: 1,
                    diff: vec![],
                },
            ],
        )
        .unwrap();
        // ∧⁰ at weight 2: x² only
        assert_eq!(w.bigraded_basis(0, 0, 2).len(), 1);
        // ∧¹ at weight 1: f1, f2
        assert_eq!(w.bigraded_basis(0, -1, 1).len(), 2);
        // ∧² at weight 2: f1f2
        assert_eq!(w.bigraded_basis(0, -2, 2).len(), 1);
        // ∧³ vanishes in every weight ≤ 6
        for wt in 0..=6 {
            assert!(w.bigraded_basis(0, -3, wt).is_empty());
        }
    }

    #[test]
    fn exterior_algebra_transfers_differential() {
        // base Q[x]⟨e⟩, d(e) = x²? no — module over it: f with d(f) = x·g
        let base = FreeDGAlgebra::polynomial(&[("x", 1)]);
        let w = exterior_algebra(
            &base,
            &[
                ModuleGen {
                    name: "f".into(),
                    hdeg: -1,
                    weight: 2,
                    diff: vec![(Element::gen(0), 1)],
                },
                ModuleGen {
                    name: "g".into(),
                    hdeg: 0,
                    weight: 1,
                    diff: vec![],
                },
            ],
        )
        .unwrap();
        let f_idx = w.gen_index("f").unwrap();
        let g_idx = w.gen_index("g").unwrap();
        let expected = w.multiply(&Element::gen(0), &Element::gen(g_idx));
        assert_eq!(*w.diff_value(f_idx), expected);
    }

    #[test]
    fn partial_derivative_product_rule() {
        let alg = FreeDGAlgebra::polynomial(&[("x", 1), ("y", 1)]);
        // ∂(x²y)/∂x = 2xy
        let x2y = Element::from_term(Monomial(vec![(0, 2), (1, 1)]), rat_int(1));
        let got = alg.partial(&x2y, 0);
        let expected = Element::from_term(Monomial(vec![(0, 1), (1, 1)]), rat_int(2));
        assert_eq!(got, expected);
    }

    fn arb_element(n_gens: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..3, n_gens), -3i64..=3),
            0..4,
        )
    }

    fn build_element(alg: &FreeDGAlgebra, spec: &[(Vec<u32>, i64)]) -> Element {
        let mut e = Element::zero();
        for (exps, c) in spec {
            let mut v: Vec<(usize, u32)> = Vec::new();
            for (g, &ex) in exps.iter().enumerate() {
                let ex = if alg.gens()[g].is_odd() { ex.min(1) } else { ex };
                if ex > 0 {
                    v.push((g, ex));
                }
            }
            e.add_term(Monomial(v), rat_int(*c));
        }
        e
    }

    proptest! {
        #[test]
        fn graded_commutativity(a in arb_element(4), b in arb_element(4)) {
            let alg = FreeDGAlgebra::new(vec![
                Generator::algebra("x", 0, 1),
                Generator::algebra("e1", -1, 1),
                Generator::algebra("e2", -1, 2),
                Generator::algebra("g", -2, 1),
            ]);
            // restrict to homogeneous inputs: test monomial by monomial
            let ea = build_element(&alg, &a);
            let eb = build_element(&alg, &b);
            for (ma, ca) in &ea.0 {
                for (mb, cb) in &eb.0 {
                    let (ha, xa, _) = ma.degree_of(alg.gens());
                    let (hb, xb, _) = mb.degree_of(alg.gens());
                    let left = alg.multiply(
                        &Element::from_term(ma.clone(), ca.clone()),
                        &Element::from_term(mb.clone(), cb.clone()));
                    let mut right = alg.multiply(
                        &Element::from_term(mb.clone(), cb.clone()),
                        &Element::from_term(ma.clone(), ca.clone()));
                    if ((ha + xa) * (hb + xb)).rem_euclid(2) == 1 {
                        right = right.neg();
                    }
                    prop_assert_eq!(left, right);
                }
            }
        }

        #[test]
        fn derivation_satisfies_leibniz(a in arb_element(3), b in arb_element(3)) {
            // Koszul-style differential on Q[x]⟨e, f⟩
            let alg = FreeDGAlgebra::new(vec![
                Generator::algebra("x", 0, 1),
                Generator::algebra("e", -1, 1),
                Generator::algebra("f", -1, 2),
            ]);
            let x = Element::gen(0);
            let x2 = alg.multiply(&x, &x);
            let alg = alg.with_differential(vec![(1, x), (2, x2)]).unwrap();
            let ea = build_element(&alg, &a);
            let eb = build_element(&alg, &b);
            let product = alg.multiply(&ea, &eb);
            let lhs = alg.d(&product);
            // homogeneous-by-monomial right side
            let mut rhs = Element::zero();
            for (ma, ca) in &ea.0 {
                let (h, x, _) = ma.degree_of(alg.gens());
                let am = Element::from_term(ma.clone(), ca.clone());
                let da = alg.d(&am);
                rhs = rhs.add(&alg.multiply(&da, &eb));
                let signed = if (h + x).rem_euclid(2) == 1 { alg.d(&eb).neg() } else { alg.d(&eb) };
                rhs = rhs.add(&alg.multiply(&am, &signed));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
