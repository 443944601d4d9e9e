//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Everything downstream (Koszul slices, bar complexes, Hom complexes, Čech
//! complexes) reduces to ranks and kernels of sparse matrices over Q. No
//! floating point anywhere; cohomology dimensions are integers and are
//! computed exactly.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Sparse matrix of rationals. Absent entries are zero; stored entries are
/// nonzero. Immutable after construction — elimination works on copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in entries {
            m.add_entry(r, c, v);
        }
        m
    }

    /// Dense row-major constructor, mostly for tests.
    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    /// Accumulate into an entry during construction; drops entries that
    /// cancel to zero.
    pub fn add_entry(&mut self, row: usize, col: usize, v: Rat) {
        assert!(row < self.rows && col < self.cols, "entry out of bounds");
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(&(row, col)) {
            Some(e) => {
                *e += v;
                if e.is_zero() {
                    self.entries.remove(&(row, col));
                }
            }
            None => {
                self.entries.insert((row, col), v);
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Rat {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    /// Matrix product `self * other` (so `self.cols == other.rows`).
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        // index other by row for sparse traversal
        let mut other_rows: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter() {
            other_rows[r].push((c, v));
        }
        let mut out = ExactMatrix::zero(self.rows, other.cols);
        for (r, k, v) in self.iter() {
            for &(c, w) in &other_rows[k] {
                out.add_entry(r, c, v * w);
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rat::zero(); self.rows];
        for (r, c, x) in self.iter() {
            if !v[c].is_zero() {
                out[r] += x * &v[c];
            }
        }
        out
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        self.split_components()
            .into_iter()
            .map(|b| b.eliminate().rank)
            .sum()
    }

    /// Basis of the right null space; every returned `v` satisfies
    /// `self·v = 0` exactly and the basis has `cols − rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut vectors = Vec::new();
        for block in self.split_components() {
            let elim = block.eliminate();
            vectors.extend(elim.kernel_vectors(self.cols, &block.col_ids));
        }
        // columns untouched by any block are entirely free
        let mut seen = vec![false; self.cols];
        for (_, c, _) in self.iter() {
            seen[c] = true;
        }
        for (c, covered) in seen.iter().enumerate() {
            if !covered {
                let mut v = vec![Rat::zero(); self.cols];
                v[c] = Rat::one();
                vectors.push(v);
            }
        }
        // deterministic order: by leading column index
        vectors.sort_by_key(|v| v.iter().position(|x| !x.is_zero()).unwrap_or(usize::MAX));
        vectors
    }

    /// Split into connected components of the bipartite row/column support
    /// graph. Weight-graded differentials decompose into many small blocks
    /// (multigraded inputs do so completely), which keeps exact elimination
    /// cheap even when the ambient slice is large.
    fn split_components(&self) -> Vec<Block> {
        if self.entries.is_empty() {
            return Vec::new();
        }
        // union-find over rows (0..rows) and cols (rows..rows+cols)
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (&(r, c), _) in &self.entries {
            let a = find(&mut parent, r);
            let b = find(&mut parent, self.rows + c);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut blocks: BTreeMap<usize, Block> = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            let root = find(&mut parent, r);
            let block = blocks.entry(root).or_default();
            block.push(r, c, v.clone());
        }
        blocks.into_values().collect()
    }
}

/// One connected block, with local row/col numbering.
#[derive(Default)]
struct Block {
    row_ids: Vec<usize>,
    col_ids: Vec<usize>,
    row_index: BTreeMap<usize, usize>,
    col_index: BTreeMap<usize, usize>,
    // local rows, each a sparse map local col -> value
    rows: Vec<BTreeMap<usize, Rat>>,
}

struct Eliminated {
    rank: usize,
    ncols: usize,
    /// reduced rows in echelon form, keyed by pivot local column
    pivots: BTreeMap<usize, BTreeMap<usize, Rat>>,
}

impl Block {
    fn push(&mut self, r: usize, c: usize, v: Rat) {
        let lr = *self.row_index.entry(r).or_insert_with(|| {
            self.row_ids.push(r);
            self.rows.push(BTreeMap::new());
            self.row_ids.len() - 1
        });
        let lc = *self.col_index.entry(c).or_insert_with(|| {
            self.col_ids.push(c);
            self.col_ids.len() - 1
        });
        self.rows[lr].insert(lc, v);
    }

    /// Gaussian elimination with a Markowitz-style pivot heuristic
    /// (minimize fill, deterministic tie-break). Produces reduced echelon
    /// rows keyed by pivot column.
    fn eliminate(&self) -> Eliminated {
        let mut active: Vec<BTreeMap<usize, Rat>> =
            self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let ncols = self.col_ids.len();
        let mut pivots: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();

        while !active.is_empty() {
            // column occupancy among active rows
            let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
            for row in &active {
                for &c in row.keys() {
                    *col_count.entry(c).or_insert(0) += 1;
                }
            }
            // pick the row/col pair minimizing (row_nnz-1)*(col_nnz-1)
            let mut best: Option<(usize, usize, usize)> = None; // (score, row idx, col)
            for (i, row) in active.iter().enumerate() {
                let rn = row.len() - 1;
                for &c in row.keys() {
                    let score = rn * (col_count[&c] - 1);
                    let cand = (score, i, c);
                    best = match best {
                        None => Some(cand),
                        Some(b) if (cand.0, cand.2, cand.1) < (b.0, b.2, b.1) => Some(cand),
                        b => b,
                    };
                }
            }
            let (_, pi, pc) = best.unwrap();
            let mut pivot_row = active.swap_remove(pi);
            // normalize pivot to 1
            let inv = pivot_row[&pc].recip();
            if !inv.is_one() {
                for v in pivot_row.values_mut() {
                    *v *= &inv;
                }
            }
            // eliminate from remaining active rows
            let mut next = Vec::with_capacity(active.len());
            for mut row in active {
                if let Some(f) = row.remove(&pc) {
                    for (c, v) in &pivot_row {
                        if *c == pc {
                            continue;
                        }
                        let delta = v * &f;
                        match row.get_mut(c) {
                            Some(e) => {
                                *e -= delta;
                                if e.is_zero() {
                                    row.remove(c);
                                }
                            }
                            None => {
                                row.insert(*c, -delta);
                            }
                        }
                    }
                }
                if !row.is_empty() {
                    next.push(row);
                }
            }
            active = next;
            // back-substitute into earlier pivot rows for reduced form
            for prow in pivots.values_mut() {
                if let Some(f) = prow.remove(&pc) {
                    for (c, v) in &pivot_row {
                        if *c == pc {
                            continue;
                        }
                        let delta = v * &f;
                        match prow.get_mut(c) {
                            Some(e) => {
                                *e -= delta;
                                if e.is_zero() {
                                    prow.remove(c);
                                }
                            }
                            None => {
                                prow.insert(*c, -delta);
                            }
                        }
                    }
                }
            }
            pivots.insert(pc, pivot_row);
        }

        Eliminated {
            rank: pivots.len(),
            ncols,
            pivots,
        }
    }
}

impl Eliminated {
    /// Kernel vectors in global coordinates: one per non-pivot local column,
    /// free variable set to 1.
    fn kernel_vectors(&self, global_cols: usize, col_ids: &[usize]) -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for lc in 0..self.ncols {
            if self.pivots.contains_key(&lc) {
                continue;
            }
            let mut v = vec![Rat::zero(); global_cols];
            v[col_ids[lc]] = Rat::one();
            for (pc, prow) in &self.pivots {
                if let Some(coef) = prow.get(&lc) {
                    v[col_ids[*pc]] = -coef.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// dim ker(d_out) − rank(d_in) for a composable pair V --d_in--> W --d_out--> X,
/// after checking d_out·d_in = 0 exactly.
pub fn cohomology_dim(d_in: &ExactMatrix, d_out: &ExactMatrix) -> Result<usize> {
    assert_eq!(
        d_in.rows(),
        d_out.cols(),
        "cohomology_dim: middle dimensions disagree"
    );
    let composite = d_out.mul(d_in);
    if let Some((&(r, c), _)) = composite.entries.iter().next() {
        return Err(Error::CompositeNotZero { row: r, col: c });
    }
    let ker = d_out.cols() - d_out.rank();
    let rk = d_in.rank();
    debug_assert!(ker >= rk, "image not contained in kernel");
    Ok(ker - rk)
}

/// Echelon "solver" view of a list of spanning vectors, used to compute
/// membership, quotient (cokernel) bases and reductions against a subspace.
/// Vectors live in Q^dim, coordinates indexed 0..dim.
pub struct Subspace {
    dim: usize,
    /// reduced echelon rows keyed by pivot coordinate
    rows: BTreeMap<usize, Vec<Rat>>,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_vectors<I>(dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rat>>,
    {
        let mut s = Self::new(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span; returns the residue.
    pub fn reduce(&self, mut v: Vec<Rat>) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (i, r) in row.iter().enumerate() {
                    if !r.is_zero() {
                        let d = r * &f;
                        v[i] -= d;
                    }
                }
            }
        }
        v
    }

    /// Insert a vector; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<Rat>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // keep reduced form: clear coordinate p from existing rows
        for row in self.rows.values_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let d = x * &f;
                        row[i] -= d;
                    }
                }
            }
        }
        self.rows.insert(p, v);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Indices of non-pivot coordinates: a basis of the quotient Q^dim / span.
    pub fn cokernel_coords(&self) -> Vec<usize> {
        (0..self.dim).filter(|i| !self.rows.contains_key(i)).collect()
    }

    /// Express `v`'s class in the cokernel basis returned by
    /// `cokernel_coords` (reduce, then read off the free coordinates).
    pub fn project_to_cokernel(&self, v: Vec<Rat>, coords: &[usize]) -> Vec<Rat> {
        let r = self.reduce(v);
        coords.iter().map(|&i| r[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rank_proportional_rows() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn rank_empty_matrix() {
        assert_eq!(ExactMatrix::zero(0, 0).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(m(&[&[1, 0], &[0, 1]]).rank(), 2);
    }

    #[test]
    fn kernel_of_row_vector() {
        let k = m(&[&[1, 1]]).kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v[0], -v[1].clone());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(ExactMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[2, 4], &[1, 2]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        assert_eq!(&k[0][0] * rat_int(-1), &k[0][1] * rat_int(2));
        assert!(a.apply(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn cohomology_zero_differentials() {
        let d_in = ExactMatrix::zero(5, 0);
        let d_out = ExactMatrix::zero(0, 5);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 5);
    }

    #[test]
    fn cohomology_exact_at_identity() {
        let d_in = ExactMatrix::identity(3);
        let d_out = ExactMatrix::zero(0, 3);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn cohomology_kernel_minus_rank() {
        // d_in = 0 (0 -> Q^2), d_out = [1 1]: ker dim 1 minus rank 0
        let d_in = ExactMatrix::zero(2, 0);
        let d_out = m(&[&[1, 1]]);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 1);
    }

    #[test]
    fn composite_not_zero_is_reported() {
        let d_in = ExactMatrix::identity(2);
        let d_out = ExactMatrix::identity(2);
        assert!(matches!(
            cohomology_dim(&d_in, &d_out),
            Err(Error::CompositeNotZero { .. })
        ));
    }

    #[test]
    fn subspace_quotient() {
        let mut s = Subspace::new(3);
        s.insert(vec![rat_int(1), rat_int(1), rat_int(0)]);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.cokernel_coords(), vec![1, 2]);
        assert!(s.contains(&[rat_int(2), rat_int(2), rat_int(0)]));
        assert!(!s.contains(&[rat_int(1), rat_int(0), rat_int(0)]));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(
            (0usize..6, 0usize..7, -4i64..=4), 0..24)) {
            let m = ExactMatrix::from_entries(
                6, 7, entries.into_iter().map(|(r, c, v)| (r, c, rat_int(v))));
            let rank = m.rank();
            let kernel = m.kernel_basis();
            prop_assert_eq!(rank + kernel.len(), 7);
            for v in &kernel {
                prop_assert!(m.apply(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn rank_invariant_under_row_scaling_and_permutation(
            entries in proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..15),
            scale in 1i64..=5, perm_seed in 0usize..120) {
            let m = ExactMatrix::from_entries(
                5, 5, entries.into_iter().map(|(r, c, v)| (r, c, rat_int(v))));
            // permutation of rows from the seed (Lehmer-ish)
            let mut rows: Vec<usize> = (0..5).collect();
            let mut s = perm_seed;
            for i in (1..5).rev() {
                rows.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let scaled = ExactMatrix::from_entries(
                5, 5,
                m.iter().map(|(r, c, v)| {
                    let f = if r == 0 { rat(scale, 1) } else { rat_int(1) };
                    (rows[r], c, v * f)
                }),
            );
            prop_assert_eq!(m.rank(), scaled.rank());
        }
    }
}
