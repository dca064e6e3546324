//! Exact arithmetic in rings of cyclotomic integers `Z[zeta_N]`.
//!
//! Values are sparse integer combinations of powers of a fixed primitive
//! N-th root of unity. The canonical form reduces exponents modulo the N-th
//! cyclotomic polynomial, so equality and integrality tests are exact. For
//! N = l^K the canonical basis is `1, zeta, .., zeta^(l^K - l^(K-1) - 1)`,
//! i.e. the single relation `sum_i zeta^(i*l^(K-1)) = 0` is applied.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::perm::lcm;

/// An element of `Z[zeta_order]`, stored as sorted `(exponent, coefficient)`
/// terms with exponents in `[0, order)`. Not necessarily reduced; use
/// [`Cyc::reduced`] or the comparison helpers for canonical queries.
#[derive(Clone)]
pub struct Cyc {
    order: u32,
    terms: Vec<(u32, i64)>,
}

impl Cyc {
    pub fn zero(order: u32) -> Cyc {
        Cyc {
            order,
            terms: Vec::new(),
        }
    }

    pub fn one(order: u32) -> Cyc {
        Cyc::integer(order, 1)
    }

    pub fn integer(order: u32, n: i64) -> Cyc {
        if n == 0 {
            Cyc::zero(order)
        } else {
            Cyc {
                order,
                terms: vec![(0, n)],
            }
        }
    }

    /// `zeta_order ^ exp`.
    pub fn root(order: u32, exp: i64) -> Cyc {
        let e = exp.rem_euclid(order as i64) as u32;
        Cyc {
            order,
            terms: vec![(e, 1)],
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn from_map(order: u32, map: HashMap<u32, i64>) -> Cyc {
        let mut terms: Vec<(u32, i64)> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable();
        Cyc { order, terms }
    }

    /// Re-expresses the value in `Z[zeta_new]`; `order` must divide `new_order`.
    pub fn lift_order(&self, new_order: u32) -> Cyc {
        assert_eq!(
            new_order % self.order,
            0,
            "cyclotomic order lift must be divisible"
        );
        let q = new_order / self.order;
        Cyc {
            order: new_order,
            terms: self.terms.iter().map(|&(e, c)| (e * q, c)).collect(),
        }
    }

    fn common_order(a: &Cyc, b: &Cyc) -> u32 {
        lcm(a.order as u64, b.order as u64) as u32
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let n = Cyc::common_order(self, other);
        let a = self.lift_order(n);
        let b = other.lift_order(n);
        let mut map = HashMap::new();
        for &(e, c) in a.terms.iter().chain(b.terms.iter()) {
            *map.entry(e).or_insert(0) += c;
        }
        Cyc::from_map(n, map)
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            order: self.order,
            terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let n = Cyc::common_order(self, other);
        let a = self.lift_order(n);
        let b = other.lift_order(n);
        let mut map = HashMap::new();
        for &(e1, c1) in &a.terms {
            for &(e2, c2) in &b.terms {
                *map.entry((e1 + e2) % n).or_insert(0) += c1 * c2;
            }
        }
        let out = Cyc::from_map(n, map);
        // Keep intermediate expressions short; products of characters feed
        // into long sums, so compact eagerly.
        if out.terms.len() > n as usize / 2 {
            out.reduced()
        } else {
            out
        }
    }

    pub fn scale(&self, k: i64) -> Cyc {
        if k == 0 {
            return Cyc::zero(self.order);
        }
        Cyc {
            order: self.order,
            terms: self.terms.iter().map(|&(e, c)| (e, c * k)).collect(),
        }
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyc {
        let n = self.order;
        let mut terms: Vec<(u32, i64)> = self
            .terms
            .iter()
            .map(|&(e, c)| (if e == 0 { 0 } else { n - e }, c))
            .collect();
        terms.sort_unstable();
        Cyc { order: n, terms }
    }

    /// Galois twist `zeta -> zeta^k`; `k` must be coprime to the order.
    pub fn galois(&self, k: u32) -> Cyc {
        let n = self.order;
        let mut map = HashMap::new();
        for &(e, c) in &self.terms {
            *map.entry(((e as u64 * k as u64) % n as u64) as u32)
                .or_insert(0) += c;
        }
        Cyc::from_map(n, map)
    }

    /// Canonical form: coefficients on the power basis `1, .., zeta^(phi(N)-1)`.
    pub fn reduced(&self) -> Cyc {
        let n = self.order as usize;
        let mut dense = vec![0i64; n.max(1)];
        for &(e, c) in &self.terms {
            dense[e as usize] += c;
        }
        let phi = cyclotomic_polynomial(self.order);
        poly_rem_in_place(&mut dense, &phi);
        let mut terms = Vec::new();
        for (e, &c) in dense.iter().enumerate() {
            if c != 0 {
                terms.push((e as u32, c));
            }
        }
        Cyc {
            order: self.order,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        self.reduced().terms.is_empty()
    }

    /// Returns `Some(n)` when the value is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        match r.terms.len() {
            0 => Some(0),
            1 if r.terms[0].0 == 0 => Some(r.terms[0].1),
            _ => None,
        }
    }

    pub fn equals(&self, other: &Cyc) -> bool {
        self.sub(other).is_zero()
    }

    /// A canonical sort/lookup key (reduced term list at this order).
    pub fn canonical_key(&self) -> Vec<(u32, i64)> {
        self.reduced().terms
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(e, c) in &r.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "z{}^{e}", r.order)?;
            } else {
                write!(f, "{c}*z{}^{e}", r.order)?;
            }
        }
        Ok(())
    }
}

/// Accumulates many cyclotomic values sharing one order into a dense buffer;
/// used for inner-product sums where per-term `Cyc` allocation would dominate.
pub struct CycAccumulator {
    order: u32,
    dense: Vec<i64>,
}

impl CycAccumulator {
    pub fn new(order: u32) -> CycAccumulator {
        CycAccumulator {
            order,
            dense: vec![0; order.max(1) as usize],
        }
    }

    /// Adds `k * x * conj(y)`. All three values must already live at the
    /// accumulator's order.
    pub fn add_times_conj(&mut self, x: &Cyc, y: &Cyc, k: i64) {
        debug_assert_eq!(x.order, self.order);
        debug_assert_eq!(y.order, self.order);
        let n = self.order;
        for &(e1, c1) in &x.terms {
            for &(e2, c2) in &y.terms {
                let e = (e1 + n - e2) % n;
                self.dense[e as usize] += k * c1 * c2;
            }
        }
    }

    pub fn add(&mut self, x: &Cyc, k: i64) {
        debug_assert_eq!(x.order, self.order);
        for &(e, c) in &x.terms {
            self.dense[e as usize] += k * c;
        }
    }

    pub fn finish(self) -> Cyc {
        let mut terms = Vec::new();
        for (e, &c) in self.dense.iter().enumerate() {
            if c != 0 {
                terms.push((e as u32, c));
            }
        }
        Cyc {
            order: self.order,
            terms,
        }
    }
}

/// Reusable dense buffer for long runs of inner-product style sums at one
/// order; avoids per-pair allocation in the table verification loops.
pub struct DenseScratch {
    order: u32,
    buf: Vec<i64>,
    tmp: Vec<i64>,
    phi: Vec<i64>,
}

impl DenseScratch {
    pub fn new(order: u32) -> DenseScratch {
        DenseScratch {
            order,
            buf: vec![0; order.max(1) as usize],
            tmp: Vec::new(),
            phi: cyclotomic_polynomial(order),
        }
    }

    pub fn clear(&mut self) {
        self.buf.fill(0);
    }

    /// Adds `k * x * conj(y)`; both values must live at the scratch order.
    pub fn add_times_conj(&mut self, x: &Cyc, y: &Cyc, k: i64) {
        debug_assert_eq!(x.order, self.order);
        debug_assert_eq!(y.order, self.order);
        let n = self.order;
        for &(e1, c1) in &x.terms {
            for &(e2, c2) in &y.terms {
                let e = (e1 + n - e2) % n;
                self.buf[e as usize] += k * c1 * c2;
            }
        }
    }

    /// Whether the accumulated value equals the rational integer `n`.
    pub fn equals_integer(&mut self, n: i64) -> bool {
        self.tmp.clear();
        self.tmp.extend_from_slice(&self.buf);
        self.tmp[0] -= n;
        poly_rem_in_place(&mut self.tmp, &self.phi);
        self.tmp.iter().all(|&c| c == 0)
    }
}

/// Coefficients of the N-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let result = compute_cyclotomic(n);
    cache.lock().unwrap().insert(n, result.clone());
    result
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    if n == 1 {
        return vec![-1, 1]; // x - 1
    }
    // (x^n - 1) divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (panics on nonzero remainder).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    assert!(rem.len() > dd);
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        assert_eq!(c % lead, 0, "non-exact polynomial division");
        let q = c / lead;
        quot[i - dd] = q;
        for (j, &dc) in den.iter().enumerate() {
            rem[i - dd + j] -= q * dc;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
    quot
}

/// In-place remainder of `poly` modulo the monic `modulus` (low degree first).
fn poly_rem_in_place(poly: &mut Vec<i64>, modulus: &[i64]) {
    let dd = modulus.len() - 1;
    debug_assert_eq!(modulus[dd], 1);
    for i in (dd..poly.len()).rev() {
        let c = poly[i];
        if c == 0 {
            continue;
        }
        poly[i] = 0;
        for (j, &mc) in modulus.iter().enumerate().take(dd) {
            poly[i - dd + j] -= c * mc;
        }
    }
    poly.truncate(dd);
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        // Phi_{l^K} has the single l-power relation shape.
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn canonical_form_l_power() {
        // At order l^K the canonical form kills exponents >= l^K - l^(K-1).
        let x = Cyc::root(8, 7).reduced();
        for &(e, _) in x.terms() {
            assert!(e < 4);
        }
        // zeta_8^4 = -1.
        assert!(Cyc::root(8, 4).equals(&Cyc::integer(8, -1)));
        // Sum over all 8th roots vanishes.
        let mut s = Cyc::zero(8);
        for e in 0..8 {
            s = s.add(&Cyc::root(8, e));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn ring_laws_spot() {
        let a = Cyc::root(12, 5).add(&Cyc::integer(12, 2));
        let b = Cyc::root(12, 7).sub(&Cyc::root(12, 1));
        let c = Cyc::root(12, 11).add(&Cyc::one(12));
        let left = a.mul(&b.add(&c));
        let right = a.mul(&b).add(&a.mul(&c));
        assert!(left.equals(&right));
        assert!(a.mul(&b).equals(&b.mul(&a)));
        assert!(a.mul(&b).mul(&c).equals(&a.mul(&b.mul(&c))));
    }

    #[test]
    fn mixed_order_lift() {
        // zeta_3 + zeta_3^2 = -1, computed against order 6 values.
        let z3 = Cyc::root(3, 1);
        let z6 = Cyc::root(6, 2);
        assert!(z3.equals(&z6));
        assert!(z3.add(&z3.mul(&z3)).equals(&Cyc::integer(3, -1)));
    }

    #[test]
    fn conjugation_and_norm() {
        let z = Cyc::root(5, 2);
        assert!(z.mul(&z.conj()).equals(&Cyc::one(5)));
        let a = Cyc::root(8, 1).add(&Cyc::root(8, 3));
        let n = a.mul(&a.conj());
        assert_eq!(n.as_integer(), Some(2)); // (z+z^3)(z^-1+z^-3) = 2 + z^2 + z^-2 = 2
    }

    #[test]
    fn accumulator_matches_direct() {
        let xs = [
            Cyc::root(8, 1),
            Cyc::root(8, 3).add(&Cyc::one(8)),
            Cyc::integer(8, -2),
        ];
        let ys = [
            Cyc::root(8, 6),
            Cyc::root(8, 2),
            Cyc::one(8).add(&Cyc::root(8, 5)),
        ];
        let mut acc = CycAccumulator::new(8);
        let mut direct = Cyc::zero(8);
        for (x, y) in xs.iter().zip(ys.iter()) {
            acc.add_times_conj(x, y, 3);
            direct = direct.add(&x.mul(&y.conj()).scale(3));
        }
        assert!(acc.finish().equals(&direct));
    }
}
