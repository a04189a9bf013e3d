//! Base categories: finite sets and functions, or the morphisms of a clone.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::Rng;

use super::object::{Atom, Obj, ObjKind};
use super::DoctrineError;
use crate::logic::Term;

pub const DEFAULT_MAX_CARD: usize = 1 << 16;
pub const MAX_OBJECTS: usize = 4096;
const MAX_CLONE_OPS: usize = 1 << 16;

/// A function `dom → cod` stored as its table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mor {
    dom: Obj,
    cod: Obj,
    table: Arc<[u32]>,
}

impl Mor {
    pub fn new(dom: &Obj, cod: &Obj, table: Vec<u32>) -> Result<Mor, DoctrineError> {
        if table.len() != dom.card() || table.iter().any(|&y| y as usize >= cod.card()) {
            return Err(DoctrineError::NotAMorphism(format!("table {table:?} is not a function {dom} → {cod}")));
        }
        Ok(Mor { dom: dom.clone(), cod: cod.clone(), table: table.into() })
    }

    pub fn from_fn(dom: &Obj, cod: &Obj, mut f: impl FnMut(usize) -> usize) -> Mor {
        let table: Vec<u32> = (0..dom.card()).map(|x| f(x) as u32).collect();
        debug_assert!(table.iter().all(|&y| (y as usize) < cod.card()));
        Mor { dom: dom.clone(), cod: cod.clone(), table: table.into() }
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x] as usize
    }

    /// Diagrammatic composite `self ; g`.
    pub fn then(&self, g: &Mor) -> Mor {
        assert_eq!(self.cod, g.dom, "composing {} with {}", self, g);
        Mor::from_fn(&self.dom, &g.cod, |x| g.apply(self.apply(x)))
    }

    /// `self × g`.
    pub fn times(&self, g: &Mor) -> Mor {
        let (dom, cod) = (Obj::prod(&self.dom, &g.dom), Obj::prod(&self.cod, &g.cod));
        let (n, m) = (g.dom.card(), g.cod.card());
        Mor::from_fn(&dom, &cod, |i| self.apply(i / n) * m + g.apply(i % n))
    }

    /// `⟨self, g⟩`.
    pub fn pair(&self, g: &Mor) -> Mor {
        assert_eq!(self.dom, g.dom);
        let cod = Obj::prod(&self.cod, &g.cod);
        Mor::from_fn(&self.dom, &cod, |x| self.apply(x) * g.cod.card() + g.apply(x))
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.card()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            (0..self.dom.card()).map(|x| format!("{}↦{}", self.dom.show(x), self.cod.show(self.apply(x)))).collect();
        write!(f, "{} → {} [{}]", self.dom, self.cod, parts.join(", "))
    }
}

impl fmt::Debug for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A named operation on a finite set; argument tuples are indexed with the
/// first argument most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub table: Vec<u32>,
}

/// The `n`-ary operations of a clone, each with a witness term over the
/// generators in the variables `x1..xn`.
#[derive(Debug)]
pub struct CloneOps {
    ops: Vec<(Arc<[u32]>, Term)>,
    index: HashMap<Arc<[u32]>, usize>,
}

impl CloneOps {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn table(&self, k: usize) -> &[u32] {
        &self.ops[k].0
    }

    pub fn witness(&self, k: usize) -> &Term {
        &self.ops[k].1
    }

    pub fn find(&self, table: &[u32]) -> Option<usize> {
        self.index.get(table).copied()
    }
}

/// The clone generated by some operations on a single atom.
#[derive(Debug)]
pub struct CloneBase {
    size: usize,
    generators: Vec<Operation>,
    cache: Mutex<HashMap<usize, Arc<CloneOps>>>,
}

fn arg_count(size: usize, n: usize) -> Result<usize, DoctrineError> {
    (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(size))
        .filter(|&c| c <= MAX_CLONE_OPS)
        .ok_or_else(|| DoctrineError::SizeBudgetExceeded(format!("{size}^{n} argument tuples")))
}

impl CloneBase {
    pub fn new(size: usize, generators: Vec<Operation>) -> Result<CloneBase, DoctrineError> {
        for g in &generators {
            let expected = arg_count(size, g.arity)?;
            if g.table.len() != expected || g.table.iter().any(|&v| v as usize >= size) {
                return Err(DoctrineError::Parse(format!("operation {} is not a total {}-ary operation", g.name, g.arity)));
            }
        }
        Ok(CloneBase { size, generators, cache: Mutex::new(HashMap::new()) })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generators(&self) -> &[Operation] {
        &self.generators
    }

    /// All `n`-ary operations of the clone.
    pub fn ops(&self, n: usize) -> Result<Arc<CloneOps>, DoctrineError> {
        if let Some(ops) = self.cache.lock().expect("clone cache poisoned").get(&n) {
            return Ok(ops.clone());
        }
        let ops = Arc::new(self.close(n)?);
        self.cache.lock().expect("clone cache poisoned").insert(n, ops.clone());
        Ok(ops)
    }

    fn close(&self, n: usize) -> Result<CloneOps, DoctrineError> {
        let s = self.size;
        let rows = arg_count(s, n)?;
        let digit = |v: usize, i: usize| (v / s.pow((n - 1 - i) as u32)) % s;
        let mut out = CloneOps { ops: vec![], index: HashMap::new() };
        let push = |out: &mut CloneOps, table: Vec<u32>, term: Term| -> Result<bool, DoctrineError> {
            let table: Arc<[u32]> = table.into();
            if out.index.contains_key(&table) {
                return Ok(false);
            }
            if out.ops.len() >= MAX_CLONE_OPS {
                return Err(DoctrineError::SizeBudgetExceeded(format!("clone has more than {MAX_CLONE_OPS} {n}-ary operations")));
            }
            out.index.insert(table.clone(), out.ops.len());
            out.ops.push((table, term));
            Ok(true)
        };
        for i in 0..n {
            push(&mut out, (0..rows).map(|v| digit(v, i) as u32).collect(), Term::var(i + 1))?;
        }
        loop {
            let mut grew = false;
            let current = out.ops.len();
            for g in &self.generators {
                let total = (0..g.arity).try_fold(1usize, |acc, _| acc.checked_mul(current));
                let total = total.filter(|&t| t <= MAX_CLONE_OPS * MAX_CLONE_OPS).ok_or_else(|| {
                    DoctrineError::SizeBudgetExceeded(format!("too many argument choices for {}", g.name))
                })?;
                for t in 0..total {
                    let mut choice = vec![0usize; g.arity];
                    let mut rest = t;
                    for c in choice.iter_mut().rev() {
                        *c = rest % current;
                        rest /= current;
                    }
                    let table: Vec<u32> = (0..rows)
                        .map(|v| {
                            let arg = choice.iter().fold(0usize, |acc, &k| acc * s + out.ops[k].0[v] as usize);
                            g.table[arg]
                        })
                        .collect();
                    let term = Term::app(&g.name, choice.iter().map(|&k| out.ops[k].1.clone()).collect());
                    grew |= push(&mut out, table, term)?;
                }
            }
            if !grew {
                return Ok(out);
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum MorphismClass {
    AllFunctions,
    Clone(Arc<CloneBase>),
}

/// A cartesian category of finite sets.
///
/// Objects are `I` and product trees over the atoms. A closed base makes every
/// product within `max_card` available; otherwise only the listed objects
/// exist.
#[derive(Debug, Clone)]
pub struct BaseCategory {
    atoms: Vec<Atom>,
    objects: Vec<Obj>,
    closed: bool,
    max_card: usize,
    class: MorphismClass,
}

fn atom_name(i: usize, count: usize) -> String {
    if count <= 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("A{i}")
    }
}

fn trees(atoms: &[Obj], depth: usize, max_card: usize) -> Result<Vec<Obj>, DoctrineError> {
    let mut all: Vec<Obj> = atoms.to_vec();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = atoms.to_vec();
        for x in &prev {
            for y in &prev {
                if next.len() >= MAX_OBJECTS {
                    return Err(DoctrineError::SizeBudgetExceeded(format!("more than {MAX_OBJECTS} objects")));
                }
                let p = Obj::prod(x, y);
                if p.card() > max_card {
                    return Err(DoctrineError::SizeBudgetExceeded(format!(
                        "object {p} has {} elements (cap {max_card})",
                        p.card()
                    )));
                }
                next.push(p);
            }
        }
        all = next;
    }
    Ok(all)
}

impl BaseCategory {
    /// Sets and all functions: `I` plus every product tree of height at most
    /// `depth` over atoms of the given sizes (named `A`, `B`, ...).
    pub fn build(atom_sizes: &[usize], depth: usize) -> Result<BaseCategory, DoctrineError> {
        Self::build_with_cap(atom_sizes, depth, DEFAULT_MAX_CARD)
    }

    pub fn build_with_cap(atom_sizes: &[usize], depth: usize, max_card: usize) -> Result<BaseCategory, DoctrineError> {
        if atom_sizes.is_empty() {
            return Err(DoctrineError::Parse("a base needs at least one atom".into()));
        }
        if depth == 0 {
            return Err(DoctrineError::InvalidDepth);
        }
        let atoms: Vec<Atom> = atom_sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| Atom { name: atom_name(i, atom_sizes.len()), size })
            .collect();
        Self::from_atoms(atoms, depth, max_card, MorphismClass::AllFunctions)
    }

    /// The clone generated by `generators` on a single atom of size `size`.
    pub fn clone_base(
        size: usize,
        generators: Vec<Operation>,
        depth: usize,
        atom: &str,
    ) -> Result<BaseCategory, DoctrineError> {
        if depth == 0 {
            return Err(DoctrineError::InvalidDepth);
        }
        let class = MorphismClass::Clone(Arc::new(CloneBase::new(size, generators)?));
        Self::from_atoms(vec![Atom { name: atom.into(), size }], depth, DEFAULT_MAX_CARD, class)
    }

    fn from_atoms(atoms: Vec<Atom>, depth: usize, max_card: usize, class: MorphismClass) -> Result<BaseCategory, DoctrineError> {
        let leaves: Vec<Obj> = atoms.iter().enumerate().map(|(i, a)| Obj::atom(i, a)).collect();
        if let Some(a) = leaves.iter().find(|a| a.card() > max_card) {
            return Err(DoctrineError::SizeBudgetExceeded(format!("atom {a} exceeds the cap {max_card}")));
        }
        let mut objects = vec![Obj::unit()];
        objects.extend(trees(&leaves, depth, max_card)?);
        Ok(BaseCategory { atoms, objects, closed: true, max_card, class })
    }

    /// A base with exactly the listed objects and all functions between them.
    pub fn with_objects(atoms: Vec<Atom>, objects: Vec<Obj>) -> BaseCategory {
        let max_card = objects.iter().map(Obj::card).max().unwrap_or(1);
        BaseCategory { atoms, objects, closed: false, max_card, class: MorphismClass::AllFunctions }
    }

    pub fn with_max_card(mut self, max_card: usize) -> BaseCategory {
        self.max_card = max_card;
        self
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn objects(&self) -> &[Obj] {
        &self.objects
    }

    /// Whether products beyond the listed objects are available.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn max_card(&self) -> usize {
        self.max_card
    }

    pub fn class(&self) -> &MorphismClass {
        &self.class
    }

    pub fn unit(&self) -> Obj {
        Obj::unit()
    }

    pub fn atom(&self, i: usize) -> Obj {
        Obj::atom(i, &self.atoms[i])
    }

    /// Whether `x` is an object of this base.
    pub fn contains(&self, x: &Obj) -> bool {
        if self.closed {
            x.card() <= self.max_card && self.well_formed(x)
        } else {
            self.objects.contains(x)
        }
    }

    fn well_formed(&self, x: &Obj) -> bool {
        match x.kind() {
            ObjKind::Unit => true,
            ObjKind::Atom(i) => self.atoms.get(*i).is_some_and(|a| a.size == x.card() && a.name == x.name()),
            ObjKind::Prod(a, b) => self.well_formed(a) && self.well_formed(b),
        }
    }

    pub fn product(&self, x: &Obj, y: &Obj) -> Result<Obj, DoctrineError> {
        let p = Obj::prod(x, y);
        if self.closed {
            if p.card() > self.max_card {
                return Err(DoctrineError::SizeBudgetExceeded(format!(
                    "object {p} has {} elements (cap {})",
                    p.card(),
                    self.max_card
                )));
            }
            Ok(p)
        } else {
            self.objects.iter().find(|o| **o == p).cloned().ok_or(DoctrineError::ObjectOutOfDepth(p.to_string()))
        }
    }

    /// Parses `I`, an atom name, or products such as `A×(A×I)`; `x` and `*`
    /// are accepted for `×`.
    pub fn parse_object(&self, text: &str) -> Result<Obj, DoctrineError> {
        let x = self.parse_shape(text)?;
        if !self.contains(&x) {
            return Err(DoctrineError::ObjectOutOfDepth(x.to_string()));
        }
        Ok(x)
    }

    /// Parses an object over the atoms without checking that it is listed.
    pub(crate) fn parse_shape(&self, text: &str) -> Result<Obj, DoctrineError> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut at = 0;
        let x = self.parse_product(&chars, &mut at)?;
        if at != chars.len() {
            return Err(DoctrineError::Parse(format!("trailing input in object `{text}`")));
        }
        Ok(x)
    }

    fn parse_product(&self, s: &[char], at: &mut usize) -> Result<Obj, DoctrineError> {
        let left = self.parse_factor(s, at)?;
        if *at < s.len() && matches!(s[*at], '×' | 'x' | '*') {
            *at += 1;
            let right = self.parse_factor(s, at)?;
            return Ok(Obj::prod(&left, &right));
        }
        Ok(left)
    }

    fn parse_factor(&self, s: &[char], at: &mut usize) -> Result<Obj, DoctrineError> {
        let err = |m: &str| DoctrineError::Parse(format!("{m} in object `{}`", s.iter().collect::<String>()));
        match s.get(*at) {
            Some('(') => {
                *at += 1;
                let x = self.parse_product(s, at)?;
                if s.get(*at) != Some(&')') {
                    return Err(err("expected `)`"));
                }
                *at += 1;
                Ok(x)
            }
            Some(c) if c.is_alphanumeric() && *c != 'x' => {
                let start = *at;
                while *at < s.len() && s[*at].is_alphanumeric() && s[*at] != 'x' {
                    *at += 1;
                }
                let name: String = s[start..*at].iter().collect();
                if name == "I" {
                    return Ok(Obj::unit());
                }
                let i = self.atoms.iter().position(|a| a.name == name).ok_or_else(|| err("unknown atom"))?;
                Ok(self.atom(i))
            }
            _ => Err(err("expected an object")),
        }
    }

    // Structural morphisms.

    pub fn id(&self, x: &Obj) -> Mor {
        Mor::from_fn(x, x, |i| i)
    }

    pub fn proj1(&self, x: &Obj, y: &Obj) -> Mor {
        let n = y.card();
        Mor::from_fn(&Obj::prod(x, y), x, |i| i / n)
    }

    pub fn proj2(&self, x: &Obj, y: &Obj) -> Mor {
        let n = y.card();
        Mor::from_fn(&Obj::prod(x, y), y, |i| i % n)
    }

    pub fn diagonal(&self, a: &Obj) -> Mor {
        Mor::from_fn(a, &Obj::prod(a, a), |i| i * a.card() + i)
    }

    pub fn bang(&self, x: &Obj) -> Mor {
        Mor::from_fn(x, &Obj::unit(), |_| 0)
    }

    /// `σ : X×Y → Y×X`.
    pub fn swap(&self, x: &Obj, y: &Obj) -> Mor {
        let (n, m) = (x.card(), y.card());
        Mor::from_fn(&Obj::prod(x, y), &Obj::prod(y, x), |i| (i % m) * n + i / m)
    }

    /// `ρ : X×I → X`.
    pub fn rho(&self, x: &Obj) -> Mor {
        Mor::from_fn(&Obj::prod(x, &Obj::unit()), x, |i| i)
    }

    pub fn rho_inv(&self, x: &Obj) -> Mor {
        Mor::from_fn(x, &Obj::prod(x, &Obj::unit()), |i| i)
    }

    /// `λ : I×X → X`.
    pub fn lambda(&self, x: &Obj) -> Mor {
        Mor::from_fn(&Obj::prod(&Obj::unit(), x), x, |i| i)
    }

    pub fn lambda_inv(&self, x: &Obj) -> Mor {
        Mor::from_fn(x, &Obj::prod(&Obj::unit(), x), |i| i)
    }

    /// `α : (X×Y)×Z → X×(Y×Z)`.
    pub fn assoc(&self, x: &Obj, y: &Obj, z: &Obj) -> Mor {
        let dom = Obj::prod(&Obj::prod(x, y), z);
        let cod = Obj::prod(x, &Obj::prod(y, z));
        Mor::from_fn(&dom, &cod, |i| i)
    }

    pub fn assoc_inv(&self, x: &Obj, y: &Obj, z: &Obj) -> Mor {
        let dom = Obj::prod(x, &Obj::prod(y, z));
        let cod = Obj::prod(&Obj::prod(x, y), z);
        Mor::from_fn(&dom, &cod, |i| i)
    }

    // Hom-sets.

    /// Number of morphisms `x → y`, if it fits in a `u64`.
    pub fn hom_count(&self, x: &Obj, y: &Obj) -> Result<Option<u64>, DoctrineError> {
        match &self.class {
            MorphismClass::AllFunctions => Ok(checked_pow(y.card() as u64, x.card())),
            MorphismClass::Clone(c) => {
                let ops = c.ops(x.atom_leaves().len())?;
                Ok(checked_pow(ops.len() as u64, y.atom_leaves().len()))
            }
        }
    }

    /// The `k`-th morphism `x → y` in enumeration order.
    pub fn hom_nth(&self, x: &Obj, y: &Obj, k: u64) -> Result<Mor, DoctrineError> {
        match &self.class {
            MorphismClass::AllFunctions => {
                let m = y.card() as u64;
                let mut digits = vec![0u32; x.card()];
                let mut k = k;
                for d in digits.iter_mut().rev() {
                    *d = (k % m) as u32;
                    k /= m;
                }
                Ok(Mor { dom: x.clone(), cod: y.clone(), table: digits.into() })
            }
            MorphismClass::Clone(c) => {
                let ops = c.ops(x.atom_leaves().len())?;
                let leaves = y.atom_leaves().len();
                let mut choice = vec![0usize; leaves];
                let mut k = k;
                for d in choice.iter_mut().rev() {
                    *d = (k % ops.len() as u64) as usize;
                    k /= ops.len() as u64;
                }
                Ok(self.clone_morphism(c, &ops, x, y, &choice))
            }
        }
    }

    /// A uniformly random morphism `x → y`, or `None` if the hom-set is empty.
    pub fn hom_random<R: Rng + ?Sized>(&self, x: &Obj, y: &Obj, rng: &mut R) -> Result<Option<Mor>, DoctrineError> {
        match &self.class {
            MorphismClass::AllFunctions => {
                if y.card() == 0 && x.card() > 0 {
                    return Ok(None);
                }
                Ok(Some(Mor::from_fn(x, y, |_| rng.gen_range(0..y.card()))))
            }
            MorphismClass::Clone(c) => {
                let ops = c.ops(x.atom_leaves().len())?;
                let leaves = y.atom_leaves().len();
                if ops.is_empty() && leaves > 0 {
                    return Ok(None);
                }
                let choice: Vec<usize> = (0..leaves).map(|_| rng.gen_range(0..ops.len())).collect();
                Ok(Some(self.clone_morphism(c, &ops, x, y, &choice)))
            }
        }
    }

    fn clone_morphism(&self, c: &CloneBase, ops: &CloneOps, x: &Obj, y: &Obj, choice: &[usize]) -> Mor {
        let s = c.size;
        Mor::from_fn(x, y, |e| {
            let arg = x.leaf_values(e).iter().fold(0usize, |acc, &v| acc * s + v);
            let out: Vec<usize> = choice.iter().map(|&k| ops.table(k)[arg] as usize).collect();
            y.from_leaf_values(&out)
        })
    }

    /// Witness terms for the components of a clone morphism, one per atom
    /// leaf of the codomain; `None` if `f` is not in the clone.
    pub fn clone_witness(&self, f: &Mor) -> Result<Option<Vec<Term>>, DoctrineError> {
        let MorphismClass::Clone(c) = &self.class else {
            return Ok(None);
        };
        let (x, y) = (f.dom(), f.cod());
        let n = x.atom_leaves().len();
        let ops = c.ops(n)?;
        let rows = arg_count(c.size, n)?;
        let leaves = y.atom_leaves().len();
        let mut comps = vec![vec![0u32; rows]; leaves];
        for arg in 0..rows {
            let values: Vec<usize> = (0..n).map(|i| (arg / c.size.pow((n - 1 - i) as u32)) % c.size).collect();
            let out = y.leaf_values(f.apply(x.from_leaf_values(&values)));
            for (j, v) in out.into_iter().enumerate() {
                comps[j][arg] = v as u32;
            }
        }
        Ok(comps.iter().map(|t| ops.find(t).map(|k| ops.witness(k).clone())).collect())
    }

    /// Whether `f` is a morphism of this base.
    pub fn contains_morphism(&self, f: &Mor) -> Result<bool, DoctrineError> {
        if !self.contains(f.dom()) || !self.contains(f.cod()) {
            return Ok(false);
        }
        match &self.class {
            MorphismClass::AllFunctions => Ok(true),
            MorphismClass::Clone(_) => Ok(self.clone_witness(f)?.is_some()),
        }
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_two_over_one_atom() {
        let b = BaseCategory::build(&[2], 2).unwrap();
        let names: Vec<String> = b.objects().iter().map(|o| o.to_string()).collect();
        assert_eq!(names, ["I", "A", "A×A", "A×(A×A)", "(A×A)×A", "(A×A)×(A×A)"]);
        assert!(matches!(BaseCategory::build(&[2], 0), Err(DoctrineError::InvalidDepth)));
        assert!(matches!(BaseCategory::build(&[5], 3), Err(DoctrineError::SizeBudgetExceeded(_))));
        let empty = BaseCategory::build(&[0], 1).unwrap();
        assert_eq!(empty.objects()[1].card(), 0);
    }

    #[test]
    fn hom_enumeration() {
        let b = BaseCategory::build(&[2], 1).unwrap();
        let a = b.atom(0);
        let aa = b.product(&a, &a).unwrap();
        assert_eq!(b.hom_count(&aa, &a).unwrap(), Some(16));
        let all: Vec<Mor> = (0..16).map(|k| b.hom_nth(&aa, &a, k).unwrap()).collect();
        assert!(all.contains(&b.proj1(&a, &a)));
        assert!(all.contains(&b.proj2(&a, &a)));
        assert_eq!(b.diagonal(&a).then(&b.proj1(&a, &a)), b.id(&a));
        assert_eq!(b.swap(&a, &a).then(&b.swap(&a, &a)), b.id(&aa));
        assert_eq!(b.parse_object("A x (A*I)").unwrap().to_string(), "A×(A×I)");
    }

    #[test]
    fn negation_clone() {
        let neg = Operation { name: "neg".into(), arity: 1, table: vec![1, 0] };
        let b = BaseCategory::clone_base(2, vec![neg], 1, "A").unwrap();
        let a = b.atom(0);
        let aa = b.product(&a, &a).unwrap();
        assert_eq!(b.hom_count(&a, &a).unwrap(), Some(2));
        assert_eq!(b.hom_count(&aa, &a).unwrap(), Some(4));
        assert_eq!(b.hom_count(&b.unit(), &a).unwrap(), Some(0));
        let constant = Mor::new(&a, &a, vec![0, 0]).unwrap();
        assert!(!b.contains_morphism(&constant).unwrap());
        let w = b.clone_witness(&b.swap(&a, &a)).unwrap().unwrap();
        assert_eq!(w, vec![Term::var(2), Term::var(1)]);
        let and = Operation { name: "and".into(), arity: 2, table: vec![0, 0, 0, 1] };
        let c = CloneBase::new(2, vec![and]).unwrap();
        // Projections plus x1∧x2.
        assert_eq!(c.ops(2).unwrap().len(), 3);
    }
}
