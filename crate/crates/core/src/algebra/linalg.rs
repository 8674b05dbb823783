//! Gauss–Jordan elimination over F_p.

use crate::prime::Prime;

/// A subspace of `F_p^n` held as a reduced row echelon basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    p: Prime,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient: usize) -> Self {
        Subspace { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<I, V>(p: Prime, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut s = Subspace::zero(p, ambient);
        for v in vectors {
            s.insert(v.as_ref());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in
    /// the span, and is zero at every pivot column otherwise.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let p = self.p;
        let mut w: Vec<u32> = v.iter().map(|&x| x % p.get()).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv];
            if c != 0 {
                axpy(p, &mut w, p.neg(c), row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let scale = p.inv(w[piv]).expect("nonzero pivot");
        w.iter_mut().for_each(|x| *x = p.mul(*x, scale));
        for row in &mut self.rows {
            let c = row[piv];
            if c != 0 {
                axpy(p, row, p.neg(c), &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, w);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for row in &other.rows {
            s.insert(row);
        }
        s
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

/// Kernel of the linear map whose matrix has the given rows (each of
/// length `ncols`).
pub fn kernel(p: Prime, ncols: usize, rows: impl IntoIterator<Item = Vec<u32>>) -> Subspace {
    let image = Subspace::spanned_by(p, ncols, rows);
    let pivots = image.pivots();
    let mut ker = Subspace::zero(p, ncols);
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; ncols];
        v[free] = 1;
        for (row, &piv) in image.basis().iter().zip(pivots) {
            v[piv] = p.neg(row[free]);
        }
        ker.insert(&v);
    }
    ker
}

#[inline]
fn axpy(p: Prime, y: &mut [u32], a: u32, x: &[u32]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = p.add(*yi, p.mul(a, xi));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn rank_and_membership() {
        let s = Subspace::spanned_by(p(3), 3, [vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // 2*(1,2,0) = (2,1,0) mod 3
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 2, 1]));
        assert!(!s.contains(&[1, 0, 0]));
        for (row, &piv) in s.basis().iter().zip(s.pivots()) {
            assert_eq!(row[piv], 1);
        }
    }

    #[test]
    fn kernel_of_small_matrix() {
        // x + y + z = 0 over F_5
        let k = kernel(p(5), 3, [vec![1, 1, 1]]);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&[1, 4, 0]));
        assert!(k.contains(&[2, 2, 1]));
        assert!(!k.contains(&[1, 0, 0]));
    }

    #[test]
    fn intersection_dimension() {
        let a = Subspace::spanned_by(p(7), 4, [vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let b = Subspace::spanned_by(p(7), 4, [vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(a.intersection_dim(&b), 1);
        assert!(a.sum(&b).same_as(&Subspace::spanned_by(p(7), 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])));
    }
}
