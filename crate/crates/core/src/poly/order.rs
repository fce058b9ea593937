use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::monomial::Monomial;

/// The comparison rule, applied to variables in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    Grevlex,
    /// The first `elim` variables (in priority order) form a grevlex block that
    /// dominates; ties are broken on the remaining variables by `inner`.
    Block { elim: usize, inner: InnerOrder },
    /// Total degree first, then a larger exponent of variable `var` wins, then
    /// grevlex. Homogenizing with `var` turns this into the lowest-degree-first
    /// order on the dehomogenized ring.
    DegreeThenVar { var: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerOrder {
    Lex,
    Grevlex,
}

/// A monomial order: a kind plus an optional priority permutation of the
/// variables (`perm[0]` is the largest variable).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    perm: Option<Arc<[usize]>>,
}

impl MonomialOrder {
    pub fn lex() -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            perm: None,
        }
    }

    pub fn grevlex() -> Self {
        MonomialOrder {
            kind: OrderKind::Grevlex,
            perm: None,
        }
    }

    /// Elimination order for the first `elim` variables, grevlex on the rest.
    pub fn block(elim: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Block {
                elim,
                inner: InnerOrder::Grevlex,
            },
            perm: None,
        }
    }

    pub fn with_kind(kind: OrderKind) -> Self {
        MonomialOrder { kind, perm: None }
    }

    /// Uses `perm` as variable priority; `perm` must be a permutation of `0..n`.
    pub fn with_permutation(mut self, perm: Vec<usize>) -> Self {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            assert!(p < perm.len() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
        self.perm = if identity { None } else { Some(perm.into()) };
        self
    }

    /// Variable priority, if not the identity.
    pub fn permutation(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Total degree decides first.
    pub fn is_degree_compatible(&self) -> bool {
        match self.kind {
            OrderKind::Grevlex => true,
            OrderKind::Lex => false,
            OrderKind::Block { elim, inner } => elim == 0 && inner == InnerOrder::Grevlex,
            OrderKind::DegreeThenVar { .. } => true,
        }
    }

    #[inline]
    fn var(&self, i: usize) -> usize {
        match &self.perm {
            None => i,
            Some(p) => p[i],
        }
    }

    fn lex_range(&self, a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        for i in lo..hi {
            let v = self.var(i);
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn grevlex_range(&self, a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
        let da: u32 = (lo..hi).map(|i| a.exponent(self.var(i)) as u32).sum();
        let db: u32 = (lo..hi).map(|i| b.exponent(self.var(i)) as u32).sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (lo..hi).rev() {
            let v = self.var(i);
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let n = a.nvars();
        match self.kind {
            OrderKind::Lex => self.lex_range(a, b, 0, n),
            OrderKind::Grevlex => {
                if a.degree() != b.degree() {
                    return a.degree().cmp(&b.degree());
                }
                if self.perm.is_none() {
                    let (ea, eb) = (a.exponents(), b.exponents());
                    for i in (0..n).rev() {
                        if ea[i] != eb[i] {
                            return eb[i].cmp(&ea[i]);
                        }
                    }
                    return Ordering::Equal;
                }
                self.grevlex_range(a, b, 0, n)
            }
            OrderKind::Block { elim, inner } => {
                let elim = elim.min(n);
                match self.grevlex_range(a, b, 0, elim) {
                    Ordering::Equal => match inner {
                        InnerOrder::Lex => self.lex_range(a, b, elim, n),
                        InnerOrder::Grevlex => self.grevlex_range(a, b, elim, n),
                    },
                    o => o,
                }
            }
            OrderKind::DegreeThenVar { var } => {
                if a.degree() != b.degree() {
                    return a.degree().cmp(&b.degree());
                }
                match a.exponent(var).cmp(&b.exponent(var)) {
                    Ordering::Equal => self.grevlex_range(a, b, 0, n),
                    o => o,
                }
            }
        }
    }
}

impl Default for MonomialOrder {
    fn default() -> Self {
        Self::grevlex()
    }
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.perm {
            None => write!(f, "{:?}", self.kind),
            Some(p) => write!(f, "{:?}{:?}", self.kind, p),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grevlex" => Ok(Self::grevlex()),
            "lex" => Ok(Self::lex()),
            other => Err(format!("unknown monomial order `{other}` (expected grevlex or lex)")),
        }
    }
}
