//! Row-reduction linear algebra over F_l, plus a Hermite-form integer
//! lattice for the few membership tests that need Z coefficients.

/// A subspace of `(F_l)^dim` held as a reduced row echelon basis.
/// The RREF basis is canonical, so subspace equality is row-list equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSpace {
    pub l: u64,
    pub dim: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn inv_mod(a: u64, l: u64) -> u64 {
    // l is prime and a != 0 mod l
    pow_mod(a % l, l - 2, l)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl FpSpace {
    pub fn empty(l: u64, dim: usize) -> FpSpace {
        FpSpace {
            l,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(l: u64, dim: usize) -> FpSpace {
        let mut s = FpSpace::empty(l, dim);
        for i in 0..dim {
            let mut row = vec![0; dim];
            row[i] = 1;
            s.insert(row);
        }
        s
    }

    pub fn from_rows(l: u64, dim: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> FpSpace {
        let mut s = FpSpace::empty(l, dim);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let l = self.l;
        for x in v.iter_mut() {
            *x %= l;
        }
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            let c = v[p] % l;
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row.iter()) {
                    *x = (*x + (l - c) * r) % l;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, other: &FpSpace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Inserts a vector, returning true if it enlarged the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let l = self.l;
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[p], l);
        for x in v.iter_mut() {
            *x = *x * inv % l;
        }
        // Back-substitute into existing rows to keep the basis fully reduced.
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (r, &x) in row.iter_mut().zip(v.iter()) {
                    *r = (*r + (l - c) * x) % l;
                }
            }
        }
        let at = self
            .pivots
            .iter()
            .position(|&q| q > p)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn sum(&self, other: &FpSpace) -> FpSpace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Kernel of the linear map given by `matrix` (rows = images of basis
    /// vectors of the domain), as a subspace of the domain.
    pub fn kernel(l: u64, domain_dim: usize, matrix: &[Vec<u64>]) -> FpSpace {
        assert_eq!(matrix.len(), domain_dim);
        let codim = matrix.first().map_or(0, |r| r.len());
        // Augmented elimination: [matrix | I], kernel rows are those whose
        // matrix part vanishes.
        let mut rows: Vec<(Vec<u64>, Vec<u64>)> = matrix
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut id = vec![0; domain_dim];
                id[i] = 1;
                (r.iter().map(|&x| x % l).collect(), id)
            })
            .collect();
        let mut pivot_row = 0;
        for col in 0..codim {
            let Some(sel) = (pivot_row..rows.len()).find(|&i| rows[i].0[col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, sel);
            let inv = inv_mod(rows[pivot_row].0[col], l);
            for x in rows[pivot_row].0.iter_mut() {
                *x = *x * inv % l;
            }
            for x in rows[pivot_row].1.iter_mut() {
                *x = *x * inv % l;
            }
            let pivot = rows[pivot_row].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != pivot_row && row.0[col] != 0 {
                    let c = row.0[col];
                    for (x, &pv) in row.0.iter_mut().zip(pivot.0.iter()) {
                        *x = (*x + (l - c) * pv) % l;
                    }
                    for (x, &pv) in row.1.iter_mut().zip(pivot.1.iter()) {
                        *x = (*x + (l - c) * pv) % l;
                    }
                }
            }
            pivot_row += 1;
        }
        let mut ker = FpSpace::empty(l, domain_dim);
        for (m, id) in rows {
            if m.iter().all(|&x| x == 0) {
                ker.insert(id);
            }
        }
        ker
    }

    /// Preimage of `target` under the linear map `matrix` (rows = images of
    /// domain basis vectors), as a subspace of the domain.
    pub fn preimage(l: u64, matrix: &[Vec<u64>], target: &FpSpace) -> FpSpace {
        // x is in the preimage iff matrix^T x reduces to zero against target.
        let quotient_rows: Vec<Vec<u64>> =
            matrix.iter().map(|r| target.reduce(r.clone())).collect();
        FpSpace::kernel(l, matrix.len(), &quotient_rows)
    }
}

/// A sublattice of Z^dim held in echelon form (row style), entries in i128
/// since Hermite-style elimination grows coefficients. Intended for small
/// dimensions; membership in lattices containing `l Z^dim` should reduce
/// mod l instead (the two agree exactly there).
#[derive(Clone, Debug)]
pub struct ZLattice {
    pub dim: usize,
    rows: Vec<Vec<i128>>,
}

impl ZLattice {
    pub fn new(dim: usize, gens: impl IntoIterator<Item = Vec<i64>>) -> ZLattice {
        let mut lat = ZLattice {
            dim,
            rows: Vec::new(),
        };
        for g in gens {
            lat.insert(g.into_iter().map(i128::from).collect());
        }
        lat
    }

    fn pivot(row: &[i128]) -> usize {
        row.iter().position(|&x| x != 0).unwrap()
    }

    fn insert(&mut self, mut v: Vec<i128>) {
        assert_eq!(v.len(), self.dim);
        loop {
            let Some(p) = v.iter().position(|&x| x != 0) else {
                return;
            };
            match self.rows.iter().position(|r| ZLattice::pivot(r) == p) {
                None => {
                    if v[p] < 0 {
                        for x in v.iter_mut() {
                            *x = -*x;
                        }
                    }
                    let at = self
                        .rows
                        .iter()
                        .position(|r| ZLattice::pivot(r) > p)
                        .unwrap_or(self.rows.len());
                    self.rows.insert(at, v);
                    return;
                }
                Some(i) => {
                    // Euclid at column p: leaves the gcd as the row pivot and
                    // pushes v on to later columns.
                    while v[p] != 0 {
                        let q = self.rows[i][p].div_euclid(v[p]);
                        for (x, &y) in self.rows[i].iter_mut().zip(v.iter()) {
                            *x -= q * y;
                        }
                        std::mem::swap(&mut self.rows[i], &mut v);
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for row in &self.rows {
            let p = ZLattice::pivot(row);
            if v[p] % row[p] == 0 {
                let q = v[p] / row[p];
                for (x, &y) in v.iter_mut().zip(row.iter()) {
                    *x -= q * y;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_membership() {
        let mut s = FpSpace::empty(2, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 0, 1]));
        assert!(s.contains(&[1, 0, 1]));
        assert!(!s.contains(&[1, 0, 0]));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn canonical_equality() {
        let a = FpSpace::from_rows(3, 3, vec![vec![1, 2, 0], vec![0, 0, 2]]);
        let b = FpSpace::from_rows(3, 3, vec![vec![2, 4, 1], vec![0, 0, 1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_of_map() {
        // F_2^3 -> F_2^2, e1 -> (1,0), e2 -> (1,0), e3 -> (0,1): kernel = <e1+e2>
        let m = vec![vec![1, 0], vec![1, 0], vec![0, 1]];
        let k = FpSpace::kernel(2, 3, &m);
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&[1, 1, 0]));
    }

    #[test]
    fn preimage_of_space() {
        // Same map; preimage of <(0,1)> is <e1+e2, e3>.
        let m = vec![vec![1, 0], vec![1, 0], vec![0, 1]];
        let t = FpSpace::from_rows(2, 2, vec![vec![0, 1]]);
        let p = FpSpace::preimage(2, &m, &t);
        assert_eq!(p.rank(), 2);
        assert!(p.contains(&[1, 1, 0]));
        assert!(p.contains(&[0, 0, 1]));
        assert!(!p.contains(&[1, 0, 0]));
    }

    #[test]
    fn integer_lattice_membership() {
        // Lattice <(2,0), (1,1)>: contains (3,1) and (0,2), not (0,1).
        let lat = ZLattice::new(2, vec![vec![2, 0], vec![1, 1]]);
        assert!(lat.contains(&[3, 1]));
        assert!(lat.contains(&[0, 2]));
        assert!(!lat.contains(&[0, 1]));
        // (l) + I decomposition example over Z: 1 + x = 2 - (1 - x).
        let l_ideal = ZLattice::new(2, vec![vec![2, 0], vec![0, 2], vec![1, -1]]);
        assert!(l_ideal.contains(&[1, 1]));
        assert!(!l_ideal.contains(&[1, 0]));
    }
}
