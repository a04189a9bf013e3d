//! Fibers: finite meet-semilattices with a top element.
//!
//! A powerset fiber over a set with `n` elements stores subsets as bitsets.
//! An explicit poset fiber stores the index of the element in word 0.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use smallvec::{smallvec, SmallVec};

use super::DoctrineError;

/// An element of a fiber.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(SmallVec<[u64; 2]>);

fn words(width: usize) -> usize {
    width.div_ceil(64).max(1)
}

impl Elem {
    pub fn zeros(width: usize) -> Elem {
        Elem(smallvec![0; words(width)])
    }

    pub fn ones(width: usize) -> Elem {
        let mut e = Elem::zeros(width);
        for i in 0..width {
            e.set(i);
        }
        e
    }

    pub fn from_bits(width: usize, bits: impl IntoIterator<Item = usize>) -> Elem {
        let mut e = Elem::zeros(width);
        for i in bits {
            assert!(i < width, "bit {i} out of range {width}");
            e.set(i);
        }
        e
    }

    /// A subset of `0..width` whose member `i` is `member(i)`, built a word at
    /// a time.
    pub fn from_predicate(width: usize, mut member: impl FnMut(usize) -> bool) -> Elem {
        let mut e = Elem::zeros(width);
        for (k, w) in e.0.iter_mut().enumerate() {
            let lo = k * 64;
            for i in lo..width.min(lo + 64) {
                *w |= (member(i) as u64) << (i - lo);
            }
        }
        e
    }

    /// The `k`-th element of an explicit poset.
    pub fn index(k: usize) -> Elem {
        Elem(smallvec![k as u64])
    }

    pub fn as_index(&self) -> usize {
        self.0[0] as usize
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn and(&self, other: &Elem) -> Elem {
        Elem(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn or(&self, other: &Elem) -> Elem {
        Elem(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn is_subset(&self, other: &Elem) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + b
                })
            })
        })
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x?}", self.0.as_slice())
    }
}

/// A finite meet-semilattice with top, given by its order relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    names: Vec<String>,
    /// `leq[a][b]` iff `a ≤ b`.
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    top: usize,
}

impl FinPoset {
    /// Builds the poset generated by `covers` (pairs `lower < upper`) and
    /// checks that it has a top and all binary meets.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<FinPoset, DoctrineError> {
        let n = names.len();
        let bad = |msg: String| DoctrineError::Parse(msg);
        if n == 0 {
            return Err(bad("a fiber needs at least one element".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(bad(format!("cover ({a},{b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(bad(format!("covers form a cycle through {} and {}", names[i], names[j])));
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|a| leq[a][t]))
            .ok_or_else(|| bad("fiber has no top element".into()))?;
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let glb = lower.iter().copied().find(|&m| lower.iter().all(|&c| leq[c][m]));
                meet[a][b] =
                    glb.ok_or_else(|| bad(format!("{} and {} have no meet", names[a], names[b])))?;
            }
        }
        Ok(FinPoset { names, leq, meet, top })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Cover pairs (Hasse diagram).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = vec![];
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] && !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// The fiber `P(X)` of a doctrine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fiber {
    /// Subsets of a set with `width` elements, ordered by inclusion.
    Powerset { width: usize },
    Poset(Arc<FinPoset>),
}

impl Fiber {
    /// Number of elements, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        match self {
            Fiber::Powerset { width } => (*width < 64).then(|| 1u64 << width),
            Fiber::Poset(p) => Some(p.len() as u64),
        }
    }

    /// The `k`-th element in enumeration order (`k < size`).
    pub fn element(&self, k: u64) -> Elem {
        match self {
            Fiber::Powerset { width } => {
                let mut e = Elem::zeros(*width);
                e.0[0] = k;
                e
            }
            Fiber::Poset(_) => Elem::index(k as usize),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size().expect("fiber too large to enumerate")).map(|k| self.element(k))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match self {
            Fiber::Powerset { width } => {
                let mut e = Elem::zeros(*width);
                for w in e.0.iter_mut() {
                    *w = rng.gen();
                }
                if width % 64 != 0 {
                    let last = e.0.len() - 1;
                    e.0[last] &= (1u64 << (width % 64)) - 1;
                }
                if *width == 0 {
                    e.0[0] = 0;
                }
                e
            }
            Fiber::Poset(p) => Elem::index(rng.gen_range(0..p.len())),
        }
    }

    pub fn contains(&self, a: &Elem) -> bool {
        match self {
            Fiber::Powerset { width } => {
                a.0.len() == words(*width) && (*width..a.0.len() * 64).all(|i| !a.get(i))
            }
            Fiber::Poset(p) => a.0.len() == 1 && a.as_index() < p.len(),
        }
    }

    pub fn top(&self) -> Elem {
        match self {
            Fiber::Powerset { width } => Elem::ones(*width),
            Fiber::Poset(p) => Elem::index(p.top),
        }
    }

    pub fn meet(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            Fiber::Powerset { .. } => a.and(b),
            Fiber::Poset(p) => Elem::index(p.meet[a.as_index()][b.as_index()]),
        }
    }

    pub fn leq(&self, a: &Elem, b: &Elem) -> bool {
        match self {
            Fiber::Powerset { .. } => a.is_subset(b),
            Fiber::Poset(p) => p.leq(a.as_index(), b.as_index()),
        }
    }

    /// Renders an element; powerset elements are shown through `show`.
    pub fn show(&self, a: &Elem, show: impl Fn(usize) -> String) -> String {
        match self {
            Fiber::Powerset { .. } => {
                let parts: Vec<String> = a.ones_iter().map(show).collect();
                format!("{{{}}}", parts.join(","))
            }
            Fiber::Poset(p) => p.names[a.as_index()].clone(),
        }
    }
}
