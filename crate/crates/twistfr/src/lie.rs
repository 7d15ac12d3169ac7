//! Type-A Lie algebra data: basis, Cartan matrix, the standard classical
//! r-matrix with its antisymmetric/invariant split, diagram automorphisms
//! realized on the algebra and on the group, and the CYBE / invariance
//! checks the downstream constructions presuppose.

use crate::ring::{rat, ratio, DenseTensor, Rational};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("sl_n requires n >= 2, got {0}")]
    RankTooSmall(usize),
    #[error("the A_1 diagram has no nontrivial automorphism")]
    FlipOnA1,
    #[error("invalid Dynkin diagram {0}{1}")]
    InvalidDiagram(char, usize),
    #[error("matrix is singular")]
    Singular,
}

/// Dense exact rational matrix, used for basis elements and group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, rat(1));
        }
        m
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(n);
        m.set(i, j, rat(1));
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Mat, LieError> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(LieError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.get(pivot, j).clone(), a.get(col, j).clone());
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let (x, y) = (inv.get(pivot, j).clone(), inv.get(col, j).clone());
                    inv.set(pivot, j, y);
                    inv.set(col, j, x);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j) - &factor * a.get(col, j);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &factor * inv.get(col, j);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }
}

/// The Lie algebra `sl_n` in its defining representation.
///
/// Basis order: the matrix units `E_ij` (`i != j`, row-major), followed by
/// the Cartan elements `h_i = E_ii - E_{i+1,i+1}`.
#[derive(Clone, Debug)]
pub struct LieAlgebraA {
    pub n: usize,
    pub basis: Vec<Mat>,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Basis indices of the simple root vectors `e_i = E_{i,i+1}`.
    pub simple_e: Vec<usize>,
    /// Basis indices of `f_i = E_{i+1,i}`.
    pub simple_f: Vec<usize>,
    /// Basis indices of `h_i`.
    pub simple_h: Vec<usize>,
}

pub fn build_sl(n: usize) -> Result<LieAlgebraA, LieError> {
    if n < 2 {
        return Err(LieError::RankTooSmall(n));
    }
    let mut basis = Vec::new();
    let mut unit_index = std::collections::HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                unit_index.insert((i, j), basis.len());
                basis.push(Mat::unit(n, i, j));
            }
        }
    }
    let h_offset = basis.len();
    for i in 0..n - 1 {
        let h = Mat::unit(n, i, i).sub(&Mat::unit(n, i + 1, i + 1));
        basis.push(h);
    }
    let rank = n - 1;
    let mut cartan = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        cartan[i][i] = 2;
        if i + 1 < rank {
            cartan[i][i + 1] = -1;
            cartan[i + 1][i] = -1;
        }
    }
    let simple_e = (0..rank).map(|i| unit_index[&(i, i + 1)]).collect();
    let simple_f = (0..rank).map(|i| unit_index[&(i + 1, i)]).collect();
    let simple_h = (0..rank).map(|i| h_offset + i).collect();
    Ok(LieAlgebraA {
        n,
        basis,
        cartan_matrix: cartan,
        simple_e,
        simple_f,
        simple_h,
    })
}

impl LieAlgebraA {
    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    /// Expresses a traceless matrix in basis coordinates (exact).
    pub fn coords(&self, m: &Mat) -> Vec<Rational> {
        assert!(m.trace().is_zero(), "matrix must be traceless");
        let n = self.n;
        let mut c = vec![Rational::zero(); self.dim()];
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    c[k] = m.get(i, j).clone();
                    k += 1;
                }
            }
        }
        // diagonal part: d_k = c_k - c_{k-1} with c_0 = 0, so c_k = sum d_1..d_k
        let mut prefix = Rational::zero();
        for i in 0..n - 1 {
            prefix += m.get(i, i);
            c[k + i] = prefix.clone();
        }
        c
    }

    /// Reconstructs the matrix from basis coordinates.
    pub fn from_coords(&self, c: &[Rational]) -> Mat {
        let mut m = Mat::zeros(self.n);
        for (x, coeff) in self.basis.iter().zip(c.iter()) {
            if !coeff.is_zero() {
                m = m.add(&x.scale(coeff));
            }
        }
        m
    }

    /// Structure constants: `[x_a, x_b] = sum_m f[m] x_m`.
    pub fn bracket_coords(&self, a: usize, b: usize) -> Vec<Rational> {
        self.coords(&self.basis[a].commutator(&self.basis[b]))
    }
}

/// Classical r-matrix `r = omega + t` in basis (x) basis coordinates.
#[derive(Clone, Debug)]
pub struct ClassicalRMatrix {
    pub r: DenseTensor<Rational>,
    pub omega: DenseTensor<Rational>,
    pub t: DenseTensor<Rational>,
}

impl ClassicalRMatrix {
    /// Splits an arbitrary coefficient tensor into `omega + t`.
    pub fn from_tensor(r: DenseTensor<Rational>) -> Self {
        let rt = r.transpose2();
        let half = ratio(1, 2);
        let t = r.add(&rt).scale(&half);
        let omega = r.sub(&rt).scale(&half);
        ClassicalRMatrix { r, omega, t }
    }
}

/// The standard Drinfeld-Jimbo classical r-matrix of `sl_n`.
///
/// On the defining representation it acts as
/// `sum_{i<j} E_ij (x) E_ji + 1/2 sum_i E_ii (x) E_ii - 1/(2n) Id (x) Id`;
/// the last two summands combine into the traceless Cartan part
/// `1/2 sum_i eps_i (x) eps_i` with `eps_i = E_ii - Id/n`.
pub fn standard_r_matrix(g: &LieAlgebraA) -> ClassicalRMatrix {
    let n = g.n;
    let dim = g.dim();
    let mut r = DenseTensor::zeros(&[dim, dim]);
    for i in 0..n {
        for j in (i + 1)..n {
            let a = g.coords(&Mat::unit(n, i, j));
            let b = g.coords(&Mat::unit(n, j, i));
            // both are single basis units
            let ai = a.iter().position(|c| !c.is_zero()).unwrap();
            let bi = b.iter().position(|c| !c.is_zero()).unwrap();
            r.add_at(&[ai, bi], &rat(1));
        }
    }
    let inv_n = ratio(1, n as i64);
    for i in 0..n {
        let mut eps = Mat::unit(n, i, i);
        for k in 0..n {
            let v = eps.get(k, k) - &inv_n;
            eps.set(k, k, v);
        }
        let c = g.coords(&eps);
        let half = ratio(1, 2);
        for (a, ca) in c.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in c.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                r.add_at(&[a, b], &(&half * ca * cb));
            }
        }
    }
    ClassicalRMatrix::from_tensor(r)
}

/// Residual of the classical Yang-Baxter equation
/// `[r12, r13] + [r12, r23] + [r13, r23]` as a rank-3 tensor in basis
/// coordinates; exactly zero iff CYBE holds.
pub fn check_cybe(g: &LieAlgebraA, r: &ClassicalRMatrix) -> DenseTensor<Rational> {
    let dim = g.dim();
    let mut out = DenseTensor::zeros(&[dim, dim, dim]);
    let entries = r.r.nonzero();
    // cache structure constants for the pairs we touch
    let mut f_cache: std::collections::HashMap<(usize, usize), Vec<Rational>> =
        std::collections::HashMap::new();
    let f = |a: usize, b: usize, cache: &mut std::collections::HashMap<_, Vec<Rational>>| {
        cache
            .entry((a, b))
            .or_insert_with(|| g.bracket_coords(a, b))
            .clone()
    };
    for (idx1, c1) in entries.iter() {
        let (i, j) = (idx1[0], idx1[1]);
        for (idx2, c2) in entries.iter() {
            let (k, l) = (idx2[0], idx2[1]);
            let c = *c1 * *c2;
            // [r12, r13]: first-slot commutator
            for (m, fm) in f(i, k, &mut f_cache).iter().enumerate() {
                if !fm.is_zero() {
                    out.add_at(&[m, j, l], &(&c * fm));
                }
            }
            // [r12, r23]: second-slot commutator
            for (m, fm) in f(j, k, &mut f_cache).iter().enumerate() {
                if !fm.is_zero() {
                    out.add_at(&[i, m, l], &(&c * fm));
                }
            }
            // [r13, r23]: third-slot commutator
            for (m, fm) in f(j, l, &mut f_cache).iter().enumerate() {
                if !fm.is_zero() {
                    out.add_at(&[i, k, m], &(&c * fm));
                }
            }
        }
    }
    out
}

/// Residual of `[x (x) 1 + 1 (x) x, t] = 0` over all basis `x`; rank-3
/// tensor indexed by `(x, leg1, leg2)`.
pub fn check_t_invariance(g: &LieAlgebraA, r: &ClassicalRMatrix) -> DenseTensor<Rational> {
    let dim = g.dim();
    let mut out = DenseTensor::zeros(&[dim, dim, dim]);
    for a in 0..dim {
        for (idx, c) in r.t.nonzero() {
            let (k, l) = (idx[0], idx[1]);
            let fk = g.bracket_coords(a, k);
            for (m, fm) in fk.iter().enumerate() {
                if !fm.is_zero() {
                    out.add_at(&[a, m, l], &(c * fm));
                }
            }
            let fl = g.bracket_coords(a, l);
            for (m, fm) in fl.iter().enumerate() {
                if !fm.is_zero() {
                    out.add_at(&[a, k, m], &(c * fm));
                }
            }
        }
    }
    out
}

/// How a diagram automorphism acts on the group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupMap {
    Identity,
    /// `g -> S (g^T)^{-1} S^{-1}`.
    TransposeInverseConj { s: Mat, s_inv: Mat },
}

/// A Dynkin diagram automorphism of `A_{n-1}` realized on nodes, on the Lie
/// algebra (as a basis-coefficient matrix) and on the group.
#[derive(Clone, Debug)]
pub struct DynkinAut {
    /// Permutation of the nodes `0..rank`.
    pub node_perm: Vec<usize>,
    /// `dim x dim` matrix `A` with `x_i -> sum_m A[m][i] x_m`.
    pub algebra_map: Vec<Vec<Rational>>,
    pub group_map: GroupMap,
    pub is_identity: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutKind {
    Id,
    Flip,
}

pub fn diagram_automorphism(g: &LieAlgebraA, kind: AutKind) -> Result<DynkinAut, LieError> {
    let rank = g.n - 1;
    match kind {
        AutKind::Id => {
            let dim = g.dim();
            let mut a = vec![vec![Rational::zero(); dim]; dim];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = rat(1);
            }
            Ok(DynkinAut {
                node_perm: (0..rank).collect(),
                algebra_map: a,
                group_map: GroupMap::Identity,
                is_identity: true,
            })
        }
        AutKind::Flip => {
            if g.n < 3 {
                return Err(LieError::FlipOnA1);
            }
            let n = g.n;
            let mut s = Mat::zeros(n);
            for k in 0..n {
                let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
                s.set(k, n - 1 - k, sign);
            }
            let s_inv = s.inverse()?;
            let dim = g.dim();
            let mut a = vec![vec![Rational::zero(); dim]; dim];
            for (i, x) in g.basis.iter().enumerate() {
                let image = s.mul(&x.transpose()).mul(&s_inv).scale(&rat(-1));
                let coords = g.coords(&image);
                for (m, c) in coords.into_iter().enumerate() {
                    a[m][i] = c;
                }
            }
            Ok(DynkinAut {
                node_perm: (0..rank).map(|i| rank - 1 - i).collect(),
                algebra_map: a,
                group_map: GroupMap::TransposeInverseConj { s, s_inv },
                is_identity: false,
            })
        }
    }
}

impl DynkinAut {
    /// Applies the algebra map to a coefficient vector.
    pub fn act_coords(&self, c: &[Rational]) -> Vec<Rational> {
        if self.is_identity {
            return c.to_vec();
        }
        let dim = c.len();
        let mut out = vec![Rational::zero(); dim];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (m, row) in self.algebra_map.iter().enumerate() {
                if !row[i].is_zero() {
                    out[m] += &row[i] * ci;
                }
            }
        }
        out
    }

    /// Applies the automorphism to a defining-representation matrix
    /// (the differential of the group map).
    pub fn act_matrix(&self, x: &Mat) -> Mat {
        match &self.group_map {
            GroupMap::Identity => x.clone(),
            GroupMap::TransposeInverseConj { s, s_inv } => {
                s.mul(&x.transpose()).mul(s_inv).scale(&rat(-1))
            }
        }
    }

    /// Applies the group-level map to an invertible matrix.
    pub fn act_group(&self, v: &Mat) -> Result<Mat, LieError> {
        match &self.group_map {
            GroupMap::Identity => Ok(v.clone()),
            GroupMap::TransposeInverseConj { s, s_inv } => {
                Ok(s.mul(&v.transpose().inverse()?).mul(s_inv))
            }
        }
    }

    /// `(kappa (x) kappa)` applied to a rank-2 coefficient tensor.
    pub fn act_tensor2(&self, t: &DenseTensor<Rational>) -> DenseTensor<Rational> {
        if self.is_identity {
            return t.clone();
        }
        let dim = t.shape()[0];
        let mut out = DenseTensor::zeros(&[dim, dim]);
        for (idx, c) in t.nonzero() {
            let (i, j) = (idx[0], idx[1]);
            for (m, row_m) in self.algebra_map.iter().enumerate() {
                if row_m[i].is_zero() {
                    continue;
                }
                for (k, row_k) in self.algebra_map.iter().enumerate() {
                    if row_k[j].is_zero() {
                        continue;
                    }
                    out.add_at(&[m, k], &(&row_m[i] * &row_k[j] * c));
                }
            }
        }
        out
    }
}

/// `(kappa (x) kappa)(r) - r`.
pub fn check_r_invariance(r: &ClassicalRMatrix, aut: &DynkinAut) -> DenseTensor<Rational> {
    aut.act_tensor2(&r.r).sub(&r.r)
}

/// Order of the graph automorphism group of a simply-laced Dynkin diagram,
/// found by exhaustive search over adjacency-preserving vertex permutations.
pub fn dynkin_graph_aut_order(kind: char, rank: usize) -> Result<usize, LieError> {
    let edges: Vec<(usize, usize)> = match kind {
        'A' if rank >= 1 => (0..rank.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        'D' if rank >= 3 => {
            let mut e: Vec<(usize, usize)> = (0..rank.saturating_sub(3))
                .map(|i| (i, i + 1))
                .collect();
            e.push((rank - 3, rank - 2));
            e.push((rank - 3, rank - 1));
            e
        }
        'E' if (6..=8).contains(&rank) => {
            // chain of rank-1 nodes with one branch node attached at the third
            let mut e: Vec<(usize, usize)> = (0..rank - 2).map(|i| (i, i + 1)).collect();
            e.push((2, rank - 1));
            e
        }
        _ => return Err(LieError::InvalidDiagram(kind, rank)),
    };
    let adj = |a: usize, b: usize| edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
    let mut perm: Vec<usize> = (0..rank).collect();
    let mut count = 0usize;
    permute(&mut perm, 0, &mut |p| {
        let ok = (0..rank).all(|a| (a + 1..rank).all(|b| adj(a, b) == adj(p[a], p[b])));
        if ok {
            count += 1;
        }
    });
    Ok(count)
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_cartan() {
        assert_eq!(build_sl(2).unwrap().dim(), 3);
        let g3 = build_sl(3).unwrap();
        assert_eq!(g3.dim(), 8);
        assert_eq!(g3.cartan_matrix, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(build_sl(4).unwrap().dim(), 15);
        assert_eq!(build_sl(1).unwrap_err(), LieError::RankTooSmall(1));
    }

    #[test]
    fn basis_is_traceless_and_closed() {
        let g = build_sl(3).unwrap();
        for x in &g.basis {
            assert!(x.trace().is_zero());
        }
        // closure: every commutator has exact basis coordinates that
        // reconstruct the commutator
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let c = g.basis[a].commutator(&g.basis[b]);
                let coords = g.coords(&c);
                assert_eq!(g.from_coords(&coords), c);
            }
        }
    }

    #[test]
    fn cybe_holds_for_standard_r() {
        for n in [2, 3] {
            let g = build_sl(n).unwrap();
            let r = standard_r_matrix(&g);
            assert!(check_cybe(&g, &r).is_zero(), "CYBE failed for sl_{n}");
            assert!(check_t_invariance(&g, &r).is_zero());
        }
    }

    #[test]
    fn t_is_half_split_casimir_on_sl3() {
        // t in the defining rep equals half the trace-form split Casimir:
        // contract t with two matrix slots and compare with
        // 1/2 (sum_{ij} E_ij (x) E_ji - 1/n Id (x) Id).
        let g = build_sl(3).unwrap();
        let r = standard_r_matrix(&g);
        let n = g.n;
        let mut lhs = DenseTensor::zeros(&[n, n, n, n]);
        for (idx, c) in r.t.nonzero() {
            let (a, b) = (idx[0], idx[1]);
            for i in 0..n {
                for j in 0..n {
                    let xa = g.basis[a].get(i, j);
                    if xa.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        for l in 0..n {
                            let xb = g.basis[b].get(k, l);
                            if !xb.is_zero() {
                                lhs.add_at(&[i, j, k, l], &(c * xa * xb));
                            }
                        }
                    }
                }
            }
        }
        let mut rhs = DenseTensor::zeros(&[n, n, n, n]);
        let half = ratio(1, 2);
        for i in 0..n {
            for j in 0..n {
                rhs.add_at(&[i, j, j, i], &half);
            }
        }
        let c = ratio(-1, 2 * n as i64);
        for i in 0..n {
            for k in 0..n {
                rhs.add_at(&[i, i, k, k], &c);
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn perturbed_r_fails_cybe() {
        let g = build_sl(2).unwrap();
        let mut r = standard_r_matrix(&g);
        let v = r.r.get(&[0, 1]) + rat(1);
        r.r.set(&[0, 1], v);
        let r = ClassicalRMatrix::from_tensor(r.r);
        assert!(!check_cybe(&g, &r).is_zero());
    }

    #[test]
    fn symmetric_part_alone_fails_cybe() {
        let g = build_sl(2).unwrap();
        let r = standard_r_matrix(&g);
        let t_only = ClassicalRMatrix::from_tensor(r.t.clone());
        assert!(!check_cybe(&g, &t_only).is_zero());
    }

    #[test]
    fn flip_transports_chevalley_generators() {
        let g = build_sl(3).unwrap();
        let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
        // e_1 = E12 -> e_2 = E23
        let e1 = Mat::unit(3, 0, 1);
        assert_eq!(flip.act_matrix(&e1), Mat::unit(3, 1, 2));
        for i in 0..2 {
            let img_e = flip.act_matrix(&g.basis[g.simple_e[i]]);
            assert_eq!(img_e, g.basis[g.simple_e[flip.node_perm[i]]]);
            let img_f = flip.act_matrix(&g.basis[g.simple_f[i]]);
            assert_eq!(img_f, g.basis[g.simple_f[flip.node_perm[i]]]);
            let img_h = flip.act_matrix(&g.basis[g.simple_h[i] - 0]);
            assert_eq!(img_h, g.basis[g.simple_h[flip.node_perm[i]]]);
        }
    }

    #[test]
    fn flip_is_an_involution_and_lie_automorphism() {
        for n in [3, 4] {
            let g = build_sl(n).unwrap();
            let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
            for x in &g.basis {
                assert_eq!(flip.act_matrix(&flip.act_matrix(x)), *x);
            }
            for a in &g.basis {
                for b in &g.basis {
                    let lhs = flip.act_matrix(&a.commutator(b));
                    let rhs = flip.act_matrix(a).commutator(&flip.act_matrix(b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn flip_on_sl2_is_rejected() {
        let g = build_sl(2).unwrap();
        assert_eq!(
            diagram_automorphism(&g, AutKind::Flip).unwrap_err(),
            LieError::FlipOnA1
        );
    }

    #[test]
    fn node_perm_preserves_cartan_matrix() {
        let g = build_sl(4).unwrap();
        let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
        let a = &g.cartan_matrix;
        let p = &flip.node_perm;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[i][j], a[p[i]][p[j]]);
            }
        }
    }

    #[test]
    fn r_is_flip_invariant() {
        for n in [3, 4] {
            let g = build_sl(n).unwrap();
            let r = standard_r_matrix(&g);
            let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
            assert!(check_r_invariance(&r, &flip).is_zero(), "sl_{n}");
            let id = diagram_automorphism(&g, AutKind::Id).unwrap();
            assert!(check_r_invariance(&r, &id).is_zero());
        }
    }

    #[test]
    fn perturbed_r_is_not_flip_invariant() {
        let g = build_sl(3).unwrap();
        let mut r = standard_r_matrix(&g);
        // perturb the e_1 (x) f_1 coefficient
        let (i, j) = (g.simple_e[0], g.simple_f[0]);
        let v = r.r.get(&[i, j]) + rat(1);
        r.r.set(&[i, j], v);
        let r = ClassicalRMatrix::from_tensor(r.r);
        let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
        assert!(!check_r_invariance(&r, &flip).is_zero());
    }

    #[test]
    fn group_map_is_a_homomorphism_and_differential() {
        let g = build_sl(3).unwrap();
        let flip = diagram_automorphism(&g, AutKind::Flip).unwrap();
        // sampled invertible rational matrices
        let mut a = Mat::identity(3);
        a.set(0, 1, rat(2));
        a.set(1, 2, ratio(-1, 3));
        let mut b = Mat::identity(3);
        b.set(2, 0, rat(5));
        b.set(0, 2, ratio(1, 7));
        let ab = a.mul(&b);
        assert_eq!(
            flip.act_group(&ab).unwrap(),
            flip.act_group(&a).unwrap().mul(&flip.act_group(&b).unwrap())
        );
        // differential: for nilpotent E_ij, Theta(I + tE) = I + t dTheta(E) exactly
        for (i, j) in [(0, 1), (1, 2), (0, 2), (2, 0)] {
            let e = Mat::unit(3, i, j);
            let one_plus = Mat::identity(3).add(&e.scale(&ratio(3, 5)));
            let lhs = flip.act_group(&one_plus).unwrap();
            let rhs = Mat::identity(3).add(&flip.act_matrix(&e).scale(&ratio(3, 5)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn graph_aut_orders() {
        assert_eq!(dynkin_graph_aut_order('A', 1).unwrap(), 1);
        for rank in 2..=6 {
            assert_eq!(dynkin_graph_aut_order('A', rank).unwrap(), 2);
        }
        assert_eq!(dynkin_graph_aut_order('D', 4).unwrap(), 6);
        assert_eq!(dynkin_graph_aut_order('D', 5).unwrap(), 2);
        assert_eq!(dynkin_graph_aut_order('D', 6).unwrap(), 2);
        assert_eq!(dynkin_graph_aut_order('E', 6).unwrap(), 2);
        assert_eq!(dynkin_graph_aut_order('E', 7).unwrap(), 1);
        assert_eq!(dynkin_graph_aut_order('E', 8).unwrap(), 1);
        assert!(dynkin_graph_aut_order('B', 2).is_err());
        assert!(dynkin_graph_aut_order('E', 9).is_err());
    }
}
