//! Effective quotients of free graded algebras by weight-homogeneous ideals.
//!
//! No Gröbner bases: a weight-w slice of the ideal is the span of
//! (monomial)·(relation) products landing in that slice, and the quotient
//! basis is the echelon complement. Normal forms, dimensions and
//! multiplication matrices all come from that per-slice elimination.

use crate::dgalg::{Element, FreeDGAlgebra, Monomial};
use crate::exactlin::{ExactMatrix, Rat, Subspace};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Mutex;

/// Slice data for one (total degree, weight) pair of a graded quotient.
#[derive(Debug, Clone)]
pub struct QuotientSlice {
    /// ambient monomial basis of the slice
    pub ambient: Vec<Monomial>,
    /// positions (into `ambient`) of the coset representatives
    pub coset: Vec<usize>,
    reduced_rows: Vec<(usize, Vec<Rat>)>,
}

impl QuotientSlice {
    pub fn dim(&self) -> usize {
        self.coset.len()
    }

    pub fn coset_monomials(&self) -> Vec<Monomial> {
        self.coset.iter().map(|&i| self.ambient[i].clone()).collect()
    }

    /// Coordinates of an ambient vector's class in the coset basis.
    pub fn project(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        for (p, row) in &self.reduced_rows {
            if !v[*p].is_zero() {
                let f = std::mem::replace(&mut v[*p], Rat::from_integer(0.into()));
                for (i, r) in row.iter().enumerate() {
                    if !r.is_zero() && i != *p {
                        let d = r * &f;
                        v[i] -= d;
                    }
                }
            }
        }
        self.coset.iter().map(|&i| v[i].clone()).collect()
    }
}

/// Quotient of a free graded algebra by a homogeneous ideal, sliced on
/// demand. Slices are cached behind a mutex so the quotient can be shared
/// across worker threads.
#[derive(Debug)]
pub struct GradedQuotient {
    ambient: FreeDGAlgebra,
    ideal_gens: Vec<Element>,
    cache: Mutex<BTreeMap<(i64, i64), std::sync::Arc<QuotientSlice>>>,
}

impl GradedQuotient {
    pub fn new(ambient: FreeDGAlgebra, ideal_gens: Vec<Element>) -> Self {
        GradedQuotient {
            ambient,
            ideal_gens,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn ambient(&self) -> &FreeDGAlgebra {
        &self.ambient
    }

    pub fn ideal_gens(&self) -> &[Element] {
        &self.ideal_gens
    }

    pub fn slice(&self, total_deg: i64, weight: i64) -> std::sync::Arc<QuotientSlice> {
        if let Some(s) = self.cache.lock().unwrap().get(&(total_deg, weight)) {
            return s.clone();
        }
        let slice = std::sync::Arc::new(self.build_slice(total_deg, weight));
        self.cache
            .lock()
            .unwrap()
            .insert((total_deg, weight), slice.clone());
        slice
    }

    fn build_slice(&self, total_deg: i64, weight: i64) -> QuotientSlice {
        let ambient_basis = self.ambient.weight_basis(total_deg, weight);
        let index: BTreeMap<&Monomial, usize> = ambient_basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut sub = Subspace::new(ambient_basis.len());
        for f in &self.ideal_gens {
            let Some((fd, fw)) = f.homogeneous_total(self.ambient.gens()) else {
                continue;
            };
            let md = total_deg - fd;
            let mw = weight - fw;
            if mw < 0 {
                continue;
            }
            for m in self.ambient.weight_basis(md, mw) {
                let prod = self
                    .ambient
                    .multiply(&Element::from_term(m, Rat::one()), f);
                let mut v = vec![Rat::from_integer(0.into()); ambient_basis.len()];
                for (mono, c) in &prod.0 {
                    v[index[mono]] += c.clone();
                }
                sub.insert(v);
            }
        }
        let coset = sub.cokernel_coords();
        // materialize the reduction rows once; later projections are cheap
        let mut reduced_rows = Vec::new();
        for i in 0..ambient_basis.len() {
            if coset.contains(&i) {
                continue;
            }
            let mut unit = vec![Rat::from_integer(0.into()); ambient_basis.len()];
            unit[i] = Rat::one();
            let red = sub.reduce(unit);
            // reduce(e_i) = e_i − (pivot row for i); store the pivot row
            let mut row = vec![Rat::from_integer(0.into()); ambient_basis.len()];
            for (j, x) in red.iter().enumerate() {
                if j == i {
                    continue;
                }
                if !x.is_zero() {
                    row[j] = -x.clone();
                }
            }
            reduced_rows.push((i, row));
        }
        QuotientSlice {
            ambient: ambient_basis,
            coset,
            reduced_rows,
        }
    }

    /// Coordinates of a homogeneous element's class in the coset basis of
    /// its (total degree, weight) slice.
    pub fn reduce(&self, e: &Element, total_deg: i64, weight: i64) -> Vec<Rat> {
        let slice = self.slice(total_deg, weight);
        let index: BTreeMap<&Monomial, usize> = slice
            .ambient
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut v = vec![Rat::from_integer(0.into()); slice.ambient.len()];
        for (m, c) in &e.0 {
            v[*index.get(m).expect("element outside the slice")] += c.clone();
        }
        slice.project(v)
    }

    pub fn dim(&self, total_deg: i64, weight: i64) -> usize {
        self.slice(total_deg, weight).dim()
    }

    /// Matrix of multiplication by a homogeneous element on coset bases,
    /// (d, w) → (d + deg f, w + wt f).
    pub fn mult_matrix(&self, f: &Element, total_deg: i64, weight: i64) -> ExactMatrix {
        let (fd, fw) = f
            .homogeneous_total(self.ambient.gens())
            .expect("multiplier must be homogeneous");
        let src = self.slice(total_deg, weight);
        let n = src.dim();
        let dst_d = total_deg + fd;
        let dst_w = weight + fw;
        let dst = self.slice(dst_d, dst_w);
        let mut mat = ExactMatrix::zero(dst.dim(), n);
        for (col, &mi) in src.coset.iter().enumerate() {
            let m = &src.ambient[mi];
            let prod = self
                .ambient
                .multiply(&Element::from_term(m.clone(), Rat::one()), f);
            let coords = self.reduce(&prod, dst_d, dst_w);
            for (row, c) in coords.into_iter().enumerate() {
                mat.add_entry(row, col, c);
            }
        }
        mat
    }
}

/// A weight-homogeneous quotient a = Q[x₁..xₘ]/(f₁..fᵣ): the engine's input
/// algebras. Generators sit in hdeg 0; relations are weight-homogeneous.
#[derive(Debug)]
pub struct QuotientAlgebra {
    inner: GradedQuotient,
}

impl QuotientAlgebra {
    pub fn new(poly: FreeDGAlgebra, relations: Vec<Element>) -> Self {
        debug_assert!(poly.gens().iter().all(|g| g.hdeg == 0 && g.ext == 0));
        QuotientAlgebra {
            inner: GradedQuotient::new(poly, relations),
        }
    }

    pub fn polynomial(vars: &[(&str, i64)], relations: Vec<Element>) -> Self {
        Self::new(FreeDGAlgebra::polynomial(vars), relations)
    }

    pub fn poly_ring(&self) -> &FreeDGAlgebra {
        self.inner.ambient()
    }

    pub fn relations(&self) -> &[Element] {
        self.inner.ideal_gens()
    }

    pub fn max_relation_weight(&self) -> i64 {
        self.relations()
            .iter()
            .filter_map(|f| f.homogeneous_total(self.poly_ring().gens()))
            .map(|(_, w)| w)
            .max()
            .unwrap_or(0)
    }

    pub fn max_generator_weight(&self) -> i64 {
        self.poly_ring()
            .gens()
            .iter()
            .map(|g| g.weight)
            .max()
            .unwrap_or(1)
    }

    /// Monomial basis of the weight-w piece of a.
    pub fn basis(&self, weight: i64) -> Vec<Monomial> {
        self.inner.slice(0, weight).coset_monomials()
    }

    pub fn dim(&self, weight: i64) -> usize {
        self.inner.dim(0, weight)
    }

    /// Class coordinates of a polynomial (hdeg 0, homogeneous of `weight`).
    pub fn reduce(&self, e: &Element, weight: i64) -> Vec<Rat> {
        if e.is_zero() {
            return vec![Rat::from_integer(0.into()); self.dim(weight)];
        }
        self.inner.reduce(e, 0, weight)
    }

    /// Product of two classes given by monomials, as coordinates in the
    /// weight-(w1+w2) coset basis.
    pub fn mult_monomials(&self, m1: &Monomial, m2: &Monomial) -> (i64, Vec<Rat>) {
        let (_, _, w1) = m1.degree_of(self.poly_ring().gens());
        let (_, _, w2) = m2.degree_of(self.poly_ring().gens());
        let prod = self.poly_ring().multiply(
            &Element::from_term(m1.clone(), Rat::one()),
            &Element::from_term(m2.clone(), Rat::one()),
        );
        (w1 + w2, self.reduce(&prod, w1 + w2))
    }

    pub fn mult_matrix(&self, f: &Element, weight: i64) -> ExactMatrix {
        self.inner.mult_matrix(f, 0, weight)
    }

    pub fn inner(&self) -> &GradedQuotient {
        &self.inner
    }
}

/// Finitely presented weight-graded module over a quotient algebra:
/// generators with weights, relation rows Σ_k coeff_k·m_k = 0 with
/// weight-homogeneous polynomial coefficients.
pub struct ModulePresentation<'a> {
    pub algebra: &'a QuotientAlgebra,
    pub gens: Vec<(String, i64)>,
    pub relations: Vec<Vec<Element>>,
    cache: Mutex<BTreeMap<i64, std::sync::Arc<ModuleSlice>>>,
}

/// Basis data of one weight slice of a module: labels (gen index, monomial
/// class index) plus the projection data.
pub struct ModuleSlice {
    /// per module generator: the algebra's coset dimension feeding this slice
    pub gen_dims: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total_ambient: usize,
    pub coset: Vec<usize>,
    sub: Subspace,
}

impl ModuleSlice {
    pub fn dim(&self) -> usize {
        self.coset.len()
    }

    pub fn project(&self, v: Vec<Rat>) -> Vec<Rat> {
        self.sub.project_to_cokernel(v, &self.coset)
    }
}

impl<'a> ModulePresentation<'a> {
    /// The algebra as a module over itself.
    pub fn regular(algebra: &'a QuotientAlgebra) -> Self {
        ModulePresentation {
            algebra,
            gens: vec![("1".to_string(), 0)],
            relations: Vec::new(),
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn new(
        algebra: &'a QuotientAlgebra,
        gens: Vec<(String, i64)>,
        relations: Vec<Vec<Element>>,
    ) -> Self {
        ModulePresentation {
            algebra,
            gens,
            relations,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn slice(&self, weight: i64) -> std::sync::Arc<ModuleSlice> {
        if let Some(s) = self.cache.lock().unwrap().get(&weight) {
            return s.clone();
        }
        let s = std::sync::Arc::new(self.build_slice(weight));
        self.cache.lock().unwrap().insert(weight, s.clone());
        s
    }

    fn build_slice(&self, weight: i64) -> ModuleSlice {
        let a = self.algebra;
        let mut gen_dims = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0usize;
        for (_, gw) in &self.gens {
            offsets.push(total);
            let d = if weight - gw >= 0 { a.dim(weight - gw) } else { 0 };
            gen_dims.push(d);
            total += d;
        }
        let mut sub = Subspace::new(total);
        for rel in &self.relations {
            // relation weight: weight of coeff_k + weight of gen_k, from the
            // first nonzero coefficient
            let mut rel_w = None;
            for (k, coeff) in rel.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                if let Some((_, cw)) = coeff.homogeneous_total(a.poly_ring().gens()) {
                    rel_w = Some(cw + self.gens[k].1);
                    break;
                }
            }
            let Some(rel_w) = rel_w else { continue };
            let mw = weight - rel_w;
            if mw < 0 {
                continue;
            }
            for m in a.poly_ring().weight_basis(0, mw) {
                let mut v = vec![Rat::from_integer(0.into()); total];
                for (k, coeff) in rel.iter().enumerate() {
                    if coeff.is_zero() || gen_dims[k] == 0 {
                        continue;
                    }
                    let prod = a
                        .poly_ring()
                        .multiply(&Element::from_term(m.clone(), Rat::one()), coeff);
                    let coords = a.reduce(&prod, weight - self.gens[k].1);
                    for (i, c) in coords.into_iter().enumerate() {
                        v[offsets[k] + i] += c;
                    }
                }
                sub.insert(v);
            }
        }
        let coset = sub.cokernel_coords();
        ModuleSlice {
            gen_dims,
            offsets,
            total_ambient: total,
            coset,
            sub,
        }
    }

    pub fn dim(&self, weight: i64) -> usize {
        self.slice(weight).dim()
    }

    /// Multiplication by an algebra-class element (given as a polynomial):
    /// matrix M_w → M_{w+d} in coset coordinates.
    pub fn mult_matrix(&self, f: &Element, weight: i64) -> ExactMatrix {
        let a = self.algebra;
        let (_, fw) = f
            .homogeneous_total(a.poly_ring().gens())
            .expect("multiplier must be homogeneous");
        let src = self.slice(weight);
        let dst = self.slice(weight + fw);
        let mut mat = ExactMatrix::zero(dst.dim(), src.dim());
        for (col, &ci) in src.coset.iter().enumerate() {
            // which generator block and which coset monomial index
            let k = (0..self.gens.len())
                .find(|&k| ci >= src.offsets[k] && ci < src.offsets[k] + src.gen_dims[k])
                .expect("coset index outside every generator block");
            let local = ci - src.offsets[k];
            let gw = self.gens[k].1;
            let mono = a.basis(weight - gw)[local].clone();
            let prod = a
                .poly_ring()
                .multiply(&Element::from_term(mono, Rat::one()), f);
            let coords = a.reduce(&prod, weight - gw + fw);
            let mut v = vec![Rat::from_integer(0.into()); dst.total_ambient];
            for (i, c) in coords.into_iter().enumerate() {
                v[dst.offsets[k] + i] += c;
            }
            let proj = dst.project(v);
            for (row, c) in proj.into_iter().enumerate() {
                mat.add_entry(row, col, c);
            }
        }
        mat
    }
}
