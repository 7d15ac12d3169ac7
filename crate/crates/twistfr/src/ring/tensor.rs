use super::{Coeff, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("contraction pairs axes {0} and {1} of unequal dimension")]
    DimensionMismatch(usize, usize),
    #[error("axis {0} out of range for rank-{1} tensor")]
    AxisOutOfRange(usize, usize),
    #[error("axis {0} used in more than one contraction pair")]
    RepeatedAxis(usize),
}

/// Dense tensor over an exact coefficient ring, row-major storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor<C: Coeff = Rational> {
    shape: Vec<usize>,
    data: Vec<C>,
}

impl<C: Coeff> DenseTensor<C> {
    pub fn zeros(shape: &[usize]) -> Self {
        let len = shape.iter().product();
        DenseTensor {
            shape: shape.to_vec(),
            data: vec![C::zero(); len],
        }
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> C) -> Self {
        let mut t = Self::zeros(shape);
        let mut idx = vec![0usize; shape.len()];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut flat = 0;
        for (i, &d) in idx.iter().zip(self.shape.iter()) {
            debug_assert!(*i < d);
            flat = flat * d + i;
        }
        flat
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for k in (0..self.shape.len()).rev() {
            idx[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
    }

    pub fn get(&self, idx: &[usize]) -> &C {
        &self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: C) {
        let flat = self.flatten(idx);
        self.data[flat] = value;
    }

    pub fn add_at(&mut self, idx: &[usize], value: &C) {
        let flat = self.flatten(idx);
        self.data[flat] = self.data[flat].add(value);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        DenseTensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape);
        DenseTensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        DenseTensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Outer (tensor) product.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for a in self.data.iter() {
            for b in other.data.iter() {
                data.push(a.mul(b));
            }
        }
        DenseTensor { shape, data }
    }

    /// Iterates `(multi_index, coefficient)` over nonzero entries.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, &C)> {
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.shape.len()];
        for flat in 0..self.data.len() {
            if !self.data[flat].is_zero() {
                self.unflatten(flat, &mut idx);
                out.push((idx.clone(), &self.data[flat]));
            }
        }
        out
    }

    /// Swaps the two axes of a rank-2 tensor.
    pub fn transpose2(&self) -> Self {
        assert_eq!(self.rank(), 2);
        let (n, m) = (self.shape[0], self.shape[1]);
        DenseTensor::from_fn(&[m, n], |idx| self.get(&[idx[1], idx[0]]).clone())
    }
}

/// Trace-contraction of `t` over the given axis pairs, exact arithmetic.
pub fn tensor_contract<C: Coeff>(
    t: &DenseTensor<C>,
    pairs: &[(usize, usize)],
) -> Result<DenseTensor<C>, TensorError> {
    let rank = t.rank();
    let mut used = vec![false; rank];
    for &(a, b) in pairs {
        for ax in [a, b] {
            if ax >= rank {
                return Err(TensorError::AxisOutOfRange(ax, rank));
            }
            if used[ax] {
                return Err(TensorError::RepeatedAxis(ax));
            }
            used[ax] = true;
        }
        if t.shape[a] != t.shape[b] {
            return Err(TensorError::DimensionMismatch(a, b));
        }
    }

    let kept: Vec<usize> = (0..rank).filter(|&ax| !used[ax]).collect();
    let out_shape: Vec<usize> = kept.iter().map(|&ax| t.shape[ax]).collect();
    let mut out = DenseTensor::zeros(&out_shape);

    let mut full = vec![0usize; rank];
    let mut out_idx = vec![0usize; kept.len()];
    let out_len: usize = out_shape.iter().product::<usize>().max(1);
    for flat in 0..out_len {
        out.unflatten(flat, &mut out_idx);
        for (k, &ax) in kept.iter().enumerate() {
            full[ax] = out_idx[k];
        }
        let mut acc = C::zero();
        sum_over_pairs(t, pairs, 0, &mut full, &mut acc);
        out.data[flat] = acc;
    }
    Ok(out)
}

fn sum_over_pairs<C: Coeff>(
    t: &DenseTensor<C>,
    pairs: &[(usize, usize)],
    level: usize,
    full: &mut Vec<usize>,
    acc: &mut C,
) {
    if level == pairs.len() {
        *acc = acc.add(t.get(full));
        return;
    }
    let (a, b) = pairs[level];
    for i in 0..t.shape[a] {
        full[a] = i;
        full[b] = i;
        sum_over_pairs(t, pairs, level + 1, full, acc);
    }
}
