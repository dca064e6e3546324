//! Group constructors and the plain-text constructor grammar.
//!
//! Grammar (documented in the README):
//!   expr  := name | name '(' arg {',' arg} ')'
//!   arg   := expr | integer | key '=' integer
//!   name  := letters and underscores; `cN` abbreviates `cyclic(N)`
//!
//! Constructors: cyclic(m), product(a, b, ..), wreath(c<l>, K),
//! sylow_symmetric(l, n), semidirect(Q, torus(l, k, n)), heisenberg(l, k),
//! symmetric(n), perm((..)(..), ..).

use super::{FiniteGroup, GroupKind, PermGroupData, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Expr(Expr),
    Int(u64),
    KeyVal(String, u64),
    Cycles(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub head: String,
    pub args: Vec<Arg>,
}

impl Expr {
    pub fn int_arg(&self, i: usize) -> Result<u64> {
        match self.args.get(i) {
            Some(Arg::Int(n)) => Ok(*n),
            _ => Err(Error::InvalidParam(format!(
                "`{}` needs an integer in position {}",
                self.head,
                i + 1
            ))),
        }
    }

    pub fn expr_arg(&self, i: usize) -> Result<&Expr> {
        match self.args.get(i) {
            Some(Arg::Expr(e)) => Ok(e),
            _ => Err(Error::InvalidParam(format!(
                "`{}` needs a sub-expression in position {}",
                self.head,
                i + 1
            ))),
        }
    }

    pub fn keyval(&self, key: &str) -> Option<u64> {
        self.args.iter().find_map(|a| match a {
            Arg::KeyVal(k, v) if k == key => Some(*v),
            _ => None,
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    /// `(a b c)(d e)` or single-digit shorthand `(12)(34)`, 1-based points.
    fn cycles(&mut self) -> Result<Vec<Vec<usize>>> {
        let mut cycles = Vec::new();
        while self.peek() == Some(b'(') {
            self.eat(b'(')?;
            let mut cycle = Vec::new();
            let mut saw_sep = false;
            let mut digits: Vec<u64> = Vec::new();
            loop {
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) if c.is_ascii_digit() => {
                        digits.push(self.integer()?);
                    }
                    Some(b' ') | Some(b',') => {
                        saw_sep = true;
                        self.pos += 1;
                    }
                    _ => return Err(self.error("expected a point or `)`")),
                }
            }
            if digits.len() == 1 && !saw_sep && digits[0] >= 10 {
                // single-digit shorthand: (12) means (1 2)
                for ch in digits[0].to_string().bytes() {
                    cycle.push((ch - b'0') as usize);
                }
            } else {
                cycle.extend(digits.iter().map(|&d| d as usize));
            }
            if cycle.contains(&0) {
                return Err(self.error("points are 1-based"));
            }
            cycles.push(cycle.iter().map(|&p| p - 1).collect());
        }
        if cycles.is_empty() {
            return Err(self.error("expected at least one cycle"));
        }
        Ok(cycles)
    }

    fn expr(&mut self) -> Result<Expr> {
        let head = self.ident()?.to_ascii_lowercase();
        let mut args = Vec::new();
        if head == "perm" {
            self.eat(b'(')?;
            loop {
                args.push(Arg::Cycles(self.cycles()?));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
            return Ok(Expr { head, args });
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                args.push(self.arg()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        Ok(Expr { head, args })
    }

    fn arg(&mut self) -> Result<Arg> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Arg::Int(self.integer()?)),
            Some(_) => {
                let save = self.pos;
                let name = self.ident()?;
                if self.peek() == Some(b'=') {
                    self.pos += 1;
                    Ok(Arg::KeyVal(name.to_ascii_lowercase(), self.integer()?))
                } else {
                    self.pos = save;
                    Ok(Arg::Expr(self.expr()?))
                }
            }
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses one constructor expression, requiring the whole input be consumed.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_cap(order: u64, cap: u64) -> Result<()> {
    if order > cap {
        return Err(Error::CapExceeded {
            what: "group order",
            got: order,
            cap,
        });
    }
    Ok(())
}

/// Expands `cN` shorthand.
fn desugar(e: &Expr) -> Expr {
    if e.args.is_empty() && e.head.len() > 1 && e.head.starts_with('c') {
        if let Ok(n) = e.head[1..].parse::<u64>() {
            return Expr {
                head: "cyclic".into(),
                args: vec![Arg::Int(n)],
            };
        }
    }
    e.clone()
}

/// Builds a group from a constructor expression string.
pub fn build_group(spec: &str) -> Result<FiniteGroup> {
    build_group_capped(spec, DEFAULT_ORDER_CAP)
}

pub fn build_group_capped(spec: &str, cap: u64) -> Result<FiniteGroup> {
    let expr = parse_expr(spec)?;
    build_from_expr(&expr, cap)
}

pub fn build_from_expr(e: &Expr, cap: u64) -> Result<FiniteGroup> {
    let e = desugar(e);
    let name = render(&e);
    let g = match e.head.as_str() {
        "cyclic" => {
            let m = e.int_arg(0)?;
            if m == 0 {
                return Err(Error::InvalidParam("cyclic(0) is not a group".into()));
            }
            check_cap(m, cap)?;
            FiniteGroup::from_kind(GroupKind::Cyclic(m), name)
        }
        "trivial" => FiniteGroup::from_kind(GroupKind::Cyclic(1), "cyclic(1)".into()),
        "product" => {
            if e.args.len() < 2 {
                return Err(Error::InvalidParam(
                    "product needs at least two factors".into(),
                ));
            }
            let mut g = build_from_expr(e.expr_arg(0)?, cap)?;
            for i in 1..e.args.len() {
                let h = build_from_expr(e.expr_arg(i)?, cap)?;
                check_cap(g.order().saturating_mul(h.order()), cap)?;
                let name = format!("product({},{})", g.name(), h.name());
                g = FiniteGroup::from_kind(GroupKind::Product(g, h), name);
            }
            g
        }
        "wreath" => {
            let lgroup = build_from_expr(e.expr_arg(0)?, cap)?;
            let l = lgroup.order();
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
            let base = build_from_expr(e.expr_arg(1)?, cap)?;
            let order = l.saturating_mul(base.order().saturating_pow(l as u32));
            check_cap(order, cap)?;
            FiniteGroup::from_kind(GroupKind::Wreath { l, base }, name)
        }
        "sylow_symmetric" => {
            let l = e.int_arg(0)?;
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
            let n = e.int_arg(1)?;
            if n == 0 {
                return Err(Error::InvalidParam("sylow_symmetric needs n >= 1".into()));
            }
            let mut g = FiniteGroup::from_kind(GroupKind::Cyclic(l), format!("cyclic({l})"));
            for i in 2..=n {
                let order = l.saturating_mul(g.order().saturating_pow(l as u32));
                check_cap(order, cap)?;
                let name = format!("sylow_symmetric({l},{i})");
                g = FiniteGroup::from_kind(GroupKind::Wreath { l, base: g }, name);
            }
            g
        }
        "semidirect" => {
            let q = build_from_expr(e.expr_arg(0)?, cap)?;
            let torus = e.expr_arg(1)?;
            if torus.head != "torus" {
                return Err(Error::InvalidParam(
                    "semidirect needs torus(l, k, n) as its second argument".into(),
                ));
            }
            let l = torus.int_arg(0)?;
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
            let k = torus.int_arg(1)? as u32;
            let n = torus.int_arg(2)? as usize;
            let modulus = l
                .checked_pow(k)
                .ok_or(Error::InvalidParam("torus level overflow".into()))?;
            let (points, perms) = q.perm_action().ok_or_else(|| {
                Error::Unsupported(format!("{} has no canonical permutation action", q.name()))
            })?;
            if points != n {
                return Err(Error::InvalidParam(format!(
                    "{} acts on {} points but the torus has rank {}",
                    q.name(),
                    points,
                    n
                )));
            }
            let data = PermGroupData::generate(n, &perms);
            if data.perms.len() as u64 != q.order() {
                return Err(Error::InvalidParam(format!(
                    "the permutation action of {} is not faithful",
                    q.name()
                )));
            }
            let order = (data.perms.len() as u64).saturating_mul(modulus.saturating_pow(n as u32));
            check_cap(order, cap)?;
            FiniteGroup::from_kind(
                GroupKind::Semidirect {
                    perms: data,
                    modulus,
                    rank: n,
                },
                name,
            )
        }
        "symmetric" => {
            let n = e.int_arg(0)? as usize;
            let mut fact = 1u64;
            for i in 2..=n as u64 {
                fact = fact.saturating_mul(i);
            }
            check_cap(fact, cap)?;
            let gens: Vec<Perm> = (1..n).map(|i| Perm::transposition(n, i - 1, i)).collect();
            let data = PermGroupData::generate(n, &gens);
            perm_set_group(data, name, cap)?
        }
        "perm" => {
            let mut gens = Vec::new();
            let mut degree = 0;
            for a in &e.args {
                if let Arg::Cycles(cs) = a {
                    for c in cs {
                        degree = degree.max(c.iter().max().map_or(0, |&m| m + 1));
                    }
                }
            }
            for a in &e.args {
                if let Arg::Cycles(cs) = a {
                    let mut images: Vec<u32> = (0..degree as u32).collect();
                    for c in cs {
                        for w in 0..c.len() {
                            images[c[w]] = c[(w + 1) % c.len()] as u32;
                        }
                    }
                    gens.push(
                        Perm::from_images(images)
                            .ok_or_else(|| Error::InvalidParam("cycles overlap".into()))?,
                    );
                }
            }
            let data = PermGroupData::generate(degree, &gens);
            perm_set_group(data, name, cap)?
        }
        "heisenberg" => {
            let l = e.int_arg(0)?;
            if !is_prime(l) {
                return Err(Error::NotPrime(l));
            }
            let k = e.int_arg(1)? as u32;
            let modulus = l
                .checked_pow(k)
                .ok_or(Error::InvalidParam("heisenberg level overflow".into()))?;
            check_cap(modulus.saturating_pow(3), cap)?;
            FiniteGroup::from_kind(GroupKind::Heisenberg { modulus }, name)
        }
        "torus" => {
            let l = e.int_arg(0)?;
            let k = e.int_arg(1)? as u32;
            let n = e.int_arg(2)? as usize;
            torus_group_capped(l, k, n, cap)?
        }
        other => {
            return Err(Error::InvalidParam(format!(
                "unknown constructor `{other}`"
            )));
        }
    };
    Ok(g)
}

/// A permutation set as a group: `Q ⋉ (Z/1)^n` degenerates to `Q` itself,
/// reusing the semidirect code path with a rank-0 torus.
fn perm_set_group(data: PermGroupData, name: String, cap: u64) -> Result<FiniteGroup> {
    check_cap(data.perms.len() as u64, cap)?;
    let n = data.n;
    Ok(FiniteGroup::from_kind(
        GroupKind::Semidirect {
            perms: data,
            modulus: 1,
            rank: n,
        },
        name,
    ))
}

/// `(Z/l^k)^n` as a semidirect group with trivial permutation part, so its
/// elements carry monomial form.
pub fn torus_group(l: u64, k: u32, n: usize) -> Result<FiniteGroup> {
    torus_group_capped(l, k, n, DEFAULT_ORDER_CAP)
}

fn torus_group_capped(l: u64, k: u32, n: usize, cap: u64) -> Result<FiniteGroup> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let modulus = l
        .checked_pow(k)
        .ok_or(Error::InvalidParam("torus level overflow".into()))?;
    check_cap(modulus.saturating_pow(n as u32), cap)?;
    let data = PermGroupData::generate(n, &[]);
    Ok(FiniteGroup::from_kind(
        GroupKind::Semidirect {
            perms: data,
            modulus,
            rank: n,
        },
        format!("torus({l},{k},{n})"),
    ))
}

fn render(e: &Expr) -> String {
    let mut s = e.head.clone();
    if !e.args.is_empty() {
        s.push('(');
        for (i, a) in e.args.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            match a {
                Arg::Int(n) => s.push_str(&n.to_string()),
                Arg::KeyVal(k, v) => s.push_str(&format!("{k}={v}")),
                Arg::Expr(inner) => s.push_str(&render(&desugar(inner))),
                Arg::Cycles(cs) => {
                    for c in cs {
                        s.push('(');
                        let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                        s.push_str(&pts.join(" "));
                        s.push(')');
                    }
                }
            }
        }
        s.push(')');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build() {
        assert_eq!(build_group("cyclic(4)").unwrap().order(), 4);
        assert_eq!(build_group("c4").unwrap().order(), 4);
        assert_eq!(build_group("product(c2,c3)").unwrap().order(), 6);
        assert_eq!(build_group("wreath(c2,c2)").unwrap().order(), 8);
        assert_eq!(build_group("sylow_symmetric(2,2)").unwrap().order(), 8);
        assert_eq!(build_group("sylow_symmetric(2,3)").unwrap().order(), 128);
        assert_eq!(
            build_group("semidirect(sylow_symmetric(2,2),torus(2,3,4))")
                .unwrap()
                .order(),
            8 * 8u64.pow(4)
        );
        assert_eq!(build_group("heisenberg(2,1)").unwrap().order(), 8);
        assert_eq!(build_group("symmetric(3)").unwrap().order(), 6);
    }

    #[test]
    fn parse_perm_groups() {
        let g = build_group("perm((1 2)(3 4))").unwrap();
        assert_eq!(g.order(), 2);
        let g = build_group("perm((12)(34))").unwrap();
        assert_eq!(g.order(), 2);
        let g = build_group("perm((1 2),(3 4))").unwrap();
        assert_eq!(g.order(), 4);
        let g = build_group("perm((1 2 3))").unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = build_group("wreath(c2").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = build_group("cyclic(4))").unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 9, .. }), "{err}");
        let err = build_group("cyclic(x)").unwrap_err();
        assert!(matches!(err, Error::InvalidParam(_)), "{err}");
    }

    #[test]
    fn cap_and_primality_errors() {
        assert!(matches!(
            build_group_capped("cyclic(100000)", 1024).unwrap_err(),
            Error::CapExceeded { .. }
        ));
        assert!(matches!(
            build_group("wreath(c4,c2)").unwrap_err(),
            Error::NotPrime(4)
        ));
        assert!(matches!(
            build_group("heisenberg(6,1)").unwrap_err(),
            Error::NotPrime(6)
        ));
    }

    #[test]
    fn semidirect_rank_mismatch() {
        assert!(build_group("semidirect(c2,torus(2,1,3))").is_err());
    }

    #[test]
    fn nested_name_rendering() {
        let g = build_group("wreath(c2, cyclic(4))").unwrap();
        assert_eq!(g.name(), "wreath(cyclic(2),cyclic(4))");
    }
}
