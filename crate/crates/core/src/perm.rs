//! Permutations of `{0, .., n-1}` stored as image vectors.

use std::fmt;

/// A permutation of `{0, .., n-1}`. `images[i]` is the image of point `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its image vector, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm { images })
    }

    /// The n-cycle `(0 1 .. n-1)` shifted by `shift`, i.e. `i -> i + shift mod n`.
    pub fn rotation(n: usize, shift: usize) -> Perm {
        Perm {
            images: (0..n).map(|i| ((i + shift) % n) as u32).collect(),
        }
    }

    /// Transposition of `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(a, b);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for c in self.cycles() {
            ord = lcm(ord, c.len() as u64);
        }
        ord
    }

    /// Cycle decomposition, including fixed points as singleton cycles.
    /// Cycles are listed by their least point, each starting at that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut i = self.apply(start);
            while i != start {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) == i).collect()
    }

    /// Permutes coordinate vectors: the result `w` satisfies `w[perm(i)] = v[i]`.
    pub fn act_on_vec<T: Clone>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(self.degree(), v.len());
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.apply(i)] = x.clone();
        }
        out
    }

    /// Image of a subset given as a sorted list of points.
    pub fn act_on_set(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&i| self.apply(i)).collect();
        out.sort_unstable();
        out
    }

    /// Restricts to an invariant subset `points` (sorted), reindexed to `0..points.len()`.
    pub fn restrict_to(&self, points: &[usize]) -> Option<Perm> {
        let mut images = Vec::with_capacity(points.len());
        for &p in points {
            let q = self.apply(p);
            let idx = points.binary_search(&q).ok()?;
            images.push(idx as u32);
        }
        Perm::from_images(images)
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// All `n!` permutations of degree `n`, in lexicographic image order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    loop {
        out.push(Perm {
            images: images.clone(),
        });
        if !next_permutation(&mut images) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn write_cycles(p: &Perm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_identity() {
        return write!(f, "()");
    }
    for c in p.cycles() {
        if c.len() > 1 {
            write!(f, "(")?;
            for (k, q) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", q + 1)?;
            }
            write!(f, ")")?;
        }
    }
    Ok(())
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycles(self, f)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_cycles(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let s = Perm::transposition(3, 0, 1);
        let r = Perm::rotation(3, 1);
        let sr = s.compose(&r);
        assert_eq!(sr.apply(0), 0); // r: 0->1, s: 1->0
        assert!(s.compose(&s).is_identity());
        assert!(r.compose(&r.inverse()).is_identity());
        assert_eq!(r.order(), 3);
    }

    #[test]
    fn act_on_vec_convention() {
        // w[perm(i)] = v[i]: rotation by 1 sends v=(a,b,c) to (c,a,b).
        let r = Perm::rotation(3, 1);
        let v = vec![10, 20, 30];
        assert_eq!(r.act_on_vec(&v), vec![30, 10, 20]);
    }

    #[test]
    fn cycle_listing() {
        let p = Perm::from_images(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(p.cycles(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(format!("{p}"), "(1 2)(3 4)");
    }

    #[test]
    fn all_perms_count() {
        assert_eq!(all_perms(4).len(), 24);
    }
}
