//! Relations `A^n -> A^m` over a finite carrier, stored as bit matrices.
//!
//! A tuple `(a_1..a_n)` has index `Σ a_i |A|^(n-i)`, so `a_1` is the most
//! significant digit; `A^0` has the single empty tuple `•`.

use std::collections::BTreeSet;
use std::fmt;

use super::FinRelError;

/// Largest bit matrix we agree to allocate.
pub const MAX_BITS: u128 = 1 << 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinRelation {
    size: usize,
    dom: usize,
    cod: usize,
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

/// `size^width`, failing when the relation would be too large to store.
pub fn tuple_count(size: usize, width: usize) -> Result<usize, FinRelError> {
    let mut n: u128 = 1;
    for _ in 0..width {
        n *= size as u128;
        if n > MAX_BITS {
            return Err(FinRelError::TooLarge { size, width });
        }
    }
    Ok(n as usize)
}

/// Digits of a tuple index, most significant first.
pub fn decode(size: usize, width: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; width];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

pub fn encode(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * size + a)
}

impl FinRelation {
    /// The empty relation `A^dom -> A^cod`.
    pub fn empty(size: usize, dom: usize, cod: usize) -> Result<FinRelation, FinRelError> {
        assert!(size > 0, "carriers are non-empty");
        let rows = tuple_count(size, dom)?;
        let cols = tuple_count(size, cod)?;
        if (rows as u128) * (cols as u128) > MAX_BITS {
            return Err(FinRelError::TooLarge { size, width: dom + cod });
        }
        let stride = cols.div_ceil(64);
        Ok(FinRelation { size, dom, cod, rows, cols, stride, bits: vec![0; rows * stride] })
    }

    pub fn full(size: usize, dom: usize, cod: usize) -> Result<FinRelation, FinRelError> {
        let mut r = FinRelation::empty(size, dom, cod)?;
        for i in 0..r.rows {
            for j in 0..r.cols {
                r.set(i, j);
            }
        }
        Ok(r)
    }

    pub fn identity(size: usize, n: usize) -> Result<FinRelation, FinRelError> {
        let mut r = FinRelation::empty(size, n, n)?;
        for i in 0..r.rows {
            r.set(i, i);
        }
        Ok(r)
    }

    /// Graph of a function given by its table of output indices.
    pub fn graph(size: usize, dom: usize, cod: usize, table: &[usize]) -> Result<FinRelation, FinRelError> {
        let mut r = FinRelation::empty(size, dom, cod)?;
        assert_eq!(table.len(), r.rows, "function table has the wrong length");
        for (i, &j) in table.iter().enumerate() {
            r.set(i, j);
        }
        Ok(r)
    }

    /// Builds a relation from explicit tuple pairs.
    pub fn from_pairs<'a>(
        size: usize,
        dom: usize,
        cod: usize,
        pairs: impl IntoIterator<Item = (&'a [usize], &'a [usize])>,
    ) -> Result<FinRelation, FinRelError> {
        let mut r = FinRelation::empty(size, dom, cod)?;
        for (a, b) in pairs {
            if a.len() != dom || b.len() != cod || a.iter().chain(b).any(|&x| x >= size) {
                return Err(FinRelError::BadTuple);
            }
            r.set(encode(size, a), encode(size, b));
        }
        Ok(r)
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.stride + j / 64] |= 1 << (j % 64);
    }

    pub fn contains(&self, a: &[usize], b: &[usize]) -> bool {
        self.get(encode(self.size, a), encode(self.size, b))
    }

    pub(crate) fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.stride..(i + 1) * self.stride]
    }

    /// Column indices set in row `i`.
    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// All `(row, col)` index pairs in the relation.
    pub fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| self.row_iter(i).map(move |j| (i, j)))
    }

    /// All pairs as tuples.
    pub fn pairs(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.index_pairs()
            .map(|(i, j)| (decode(self.size, self.dom, i), decode(self.size, self.cod, j)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Row indices with at least one entry (the domain of definition).
    pub fn support(&self) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.row(i).iter().any(|&w| w != 0)).collect()
    }

    fn check_same(&self, other: &FinRelation) -> Result<(), FinRelError> {
        if self.size != other.size {
            return Err(FinRelError::CarrierMismatch(self.size, other.size));
        }
        if (self.dom, self.cod) != (other.dom, other.cod) {
            return Err(FinRelError::WidthMismatch { left: (self.dom, self.cod), right: (other.dom, other.cod) });
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &FinRelation) -> Result<bool, FinRelError> {
        self.check_same(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    pub fn intersect(&self, other: &FinRelation) -> Result<FinRelation, FinRelError> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
        Ok(out)
    }

    /// Sequential composition by bit-row unions.
    pub fn compose(&self, other: &FinRelation) -> Result<FinRelation, FinRelError> {
        if self.size != other.size {
            return Err(FinRelError::CarrierMismatch(self.size, other.size));
        }
        if self.cod != other.dom {
            return Err(FinRelError::WidthMismatch { left: (self.dom, self.cod), right: (other.dom, other.cod) });
        }
        let mut out = FinRelation::empty(self.size, self.dom, other.cod)?;
        for i in 0..self.rows {
            let mids: Vec<usize> = self.row_iter(i).collect();
            let dst = out.row_mut(i);
            for k in mids {
                for (d, s) in dst.iter_mut().zip(other.row(k)) {
                    *d |= s;
                }
            }
        }
        Ok(out)
    }

    /// Parallel composition; the left factor supplies the leading digits.
    pub fn tensor(&self, other: &FinRelation) -> Result<FinRelation, FinRelError> {
        if self.size != other.size {
            return Err(FinRelError::CarrierMismatch(self.size, other.size));
        }
        let mut out = FinRelation::empty(self.size, self.dom + other.dom, self.cod + other.cod)?;
        let other_cols: Vec<Vec<usize>> = (0..other.rows).map(|k| other.row_iter(k).collect()).collect();
        for (i1, j1) in self.index_pairs() {
            for (i2, cols) in other_cols.iter().enumerate() {
                let i = i1 * other.rows + i2;
                for &j2 in cols {
                    out.set(i, j1 * other.cols + j2);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FinRelation {
        let mut out = FinRelation::empty(self.size, self.cod, self.dom).expect("same size as self");
        for (i, j) in self.index_pairs() {
            out.set(j, i);
        }
        out
    }

    /// `R ; f` for a function `f` given by its table.
    pub(crate) fn then_function(&self, cod: usize, table: &[usize]) -> Result<FinRelation, FinRelError> {
        let mut out = FinRelation::empty(self.size, self.dom, cod)?;
        for (i, j) in self.index_pairs() {
            out.set(i, table[j]);
        }
        Ok(out)
    }

    /// `f ; R` for a function `f : A^dom -> A^self.dom`.
    pub(crate) fn after_function(&self, dom: usize, table: &[usize]) -> Result<FinRelation, FinRelError> {
        let mut out = FinRelation::empty(self.size, dom, self.cod)?;
        for (i, &k) in table.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(k));
        }
        Ok(out)
    }
}

fn fmt_tuple(f: &mut fmt::Formatter<'_>, t: &[usize]) -> fmt::Result {
    match t {
        [] => write!(f, "•"),
        [a] => write!(f, "{a}"),
        _ => {
            write!(f, "(")?;
            for (k, a) in t.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for FinRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.pairs().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            fmt_tuple(f, a)?;
            write!(f, ", ")?;
            fmt_tuple(f, b)?;
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinRelation[{}; {} -> {}] {self}", self.size, self.dom, self.cod)
    }
}

/// `R ; S = {(x,z) | ∃y. (x,y) ∈ R and (y,z) ∈ S}`, by enumerating tuples.
pub fn rel_compose(r: &FinRelation, s: &FinRelation) -> Result<FinRelation, FinRelError> {
    if r.size != s.size {
        return Err(FinRelError::CarrierMismatch(r.size, s.size));
    }
    if r.cod != s.dom {
        return Err(FinRelError::WidthMismatch { left: (r.dom, r.cod), right: (s.dom, s.cod) });
    }
    let rp = r.pairs();
    let sp = s.pairs();
    let mut out = BTreeSet::new();
    for (x, y) in &rp {
        for (y2, z) in &sp {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    FinRelation::from_pairs(r.size, r.dom, s.cod, out.iter().map(|(a, b)| (a.as_slice(), b.as_slice())))
}

/// `R ⊗ S = {((x,x'),(y,y')) | (x,y) ∈ R and (x',y') ∈ S}`, by enumerating tuples.
pub fn rel_tensor(r: &FinRelation, s: &FinRelation) -> Result<FinRelation, FinRelError> {
    if r.size != s.size {
        return Err(FinRelError::CarrierMismatch(r.size, s.size));
    }
    let mut out = Vec::new();
    for (x, y) in r.pairs() {
        for (x2, y2) in s.pairs() {
            out.push(([x.clone(), x2].concat(), [y.clone(), y2].concat()));
        }
    }
    FinRelation::from_pairs(r.size, r.dom + s.dom, r.cod + s.cod, out.iter().map(|(a, b)| (a.as_slice(), b.as_slice())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(pairs: &[(&[usize], &[usize])], dom: usize, cod: usize) -> FinRelation {
        FinRelation::from_pairs(2, dom, cod, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn composition_by_comprehension() {
        let r = rel(&[(&[0], &[0]), (&[0], &[1])], 1, 1);
        let s = rel(&[(&[1], &[1])], 1, 1);
        let expected = rel(&[(&[0], &[1])], 1, 1);
        assert_eq!(rel_compose(&r, &s).unwrap(), expected);
        assert_eq!(r.compose(&s).unwrap(), expected);
        let id = FinRelation::identity(2, 1).unwrap();
        assert_eq!(rel_compose(&r, &id).unwrap(), r);
    }

    #[test]
    fn tensor_by_comprehension() {
        let r = rel(&[(&[0], &[1])], 1, 1);
        let s = rel(&[(&[1], &[0])], 1, 1);
        let t = rel_tensor(&r, &s).unwrap();
        assert_eq!(t.pairs(), vec![(vec![0, 1], vec![1, 0])]);
        assert_eq!(r.tensor(&s).unwrap(), t);
    }

    #[test]
    fn zero_width_relations() {
        let top = FinRelation::full(3, 0, 0).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top.to_string(), "{(•, •)}");
        let e = FinRelation::empty(3, 2, 0).unwrap();
        assert_eq!((e.rows(), e.cols()), (9, 1));
    }

    #[test]
    fn digits_round_trip() {
        for i in 0..27 {
            assert_eq!(encode(3, &decode(3, 3, i)), i);
        }
        assert_eq!(decode(2, 2, 2), vec![1, 0]);
    }

    #[test]
    fn oversized_relations_are_refused() {
        assert!(matches!(FinRelation::empty(3, 20, 20), Err(FinRelError::TooLarge { .. })));
    }
}
