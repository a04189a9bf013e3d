//! Strict cartesian functors between finite bases and doctrines composed
//! with them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use super::{BaseCategory, Doctrine, DoctrineError, Elem, Fiber, Mor, MorphismClass, Obj, ObjKind, Operation, Side};
use crate::logic::Term;

#[derive(Debug)]
enum Action {
    /// A bijection from each source atom onto its image atom.
    Elementwise(Vec<Vec<u32>>),
    /// Images of the generators of a source clone, as operations on the
    /// target atom.
    Generators(BTreeMap<String, Operation>),
}

/// A functor between bases preserving `I`, products and projections on the
/// nose. It is determined by an atom map and either elementwise bijections or
/// the images of clone generators.
#[derive(Debug)]
pub struct CartesianFunctor {
    name: String,
    source: Arc<BaseCategory>,
    target: Arc<BaseCategory>,
    atom_images: Vec<usize>,
    action: Action,
    cache: RwLock<HashMap<Mor, Mor>>,
}

fn not_strict(msg: String) -> DoctrineError {
    DoctrineError::NotStrictCartesian(msg)
}

impl CartesianFunctor {
    pub fn identity(base: Arc<BaseCategory>) -> CartesianFunctor {
        let maps = base.atoms().iter().map(|a| (0..a.size as u32).collect()).collect();
        let atom_images = (0..base.atoms().len()).collect();
        CartesianFunctor {
            name: "id".into(),
            source: base.clone(),
            target: base,
            atom_images,
            action: Action::Elementwise(maps),
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Sends source atom `i` to target atom `atom_images[i]` along the
    /// bijection `maps[i]`. Several atoms may share an image.
    pub fn bijections(
        name: &str,
        source: Arc<BaseCategory>,
        target: Arc<BaseCategory>,
        atom_images: Vec<usize>,
        maps: Vec<Vec<u32>>,
    ) -> Result<CartesianFunctor, DoctrineError> {
        if !matches!(source.class(), MorphismClass::AllFunctions) || !matches!(target.class(), MorphismClass::AllFunctions) {
            return Err(not_strict("elementwise functors need bases of all functions".into()));
        }
        if atom_images.len() != source.atoms().len() || maps.len() != source.atoms().len() {
            return Err(not_strict("one image and one bijection per source atom".into()));
        }
        for (i, (&t, map)) in atom_images.iter().zip(&maps).enumerate() {
            let (a, b) = (&source.atoms()[i], target.atoms().get(t).ok_or_else(|| not_strict(format!("no target atom {t}")))?);
            let mut seen = vec![false; b.size];
            let bijective = a.size == b.size
                && map.len() == a.size
                && map.iter().all(|&v| (v as usize) < b.size && !std::mem::replace(&mut seen[v as usize], true));
            if !bijective {
                return Err(not_strict(format!("map for atom {} is not a bijection onto {}", a.name, b.name)));
            }
        }
        Ok(CartesianFunctor {
            name: name.into(),
            source,
            target,
            atom_images,
            action: Action::Elementwise(maps),
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Sends the clone generated on the source atom to the target atom,
    /// mapping each generator to an operation of the target.
    pub fn on_generators(
        name: &str,
        source: Arc<BaseCategory>,
        target: Arc<BaseCategory>,
        target_atom: usize,
        images: BTreeMap<String, Operation>,
    ) -> Result<CartesianFunctor, DoctrineError> {
        let MorphismClass::Clone(clone) = source.class() else {
            return Err(not_strict("generator images need a clone base as source".into()));
        };
        let size = target.atoms().get(target_atom).ok_or_else(|| not_strict(format!("no target atom {target_atom}")))?.size;
        for g in clone.generators() {
            let img = images.get(&g.name).ok_or_else(|| not_strict(format!("generator {} has no image", g.name)))?;
            let rows = size.pow(g.arity as u32);
            if img.arity != g.arity || img.table.len() != rows || img.table.iter().any(|&v| v as usize >= size) {
                return Err(not_strict(format!("image of {} is not a {}-ary operation", g.name, g.arity)));
            }
            if let MorphismClass::Clone(tc) = target.class() {
                if tc.ops(g.arity)?.find(&img.table).is_none() {
                    return Err(not_strict(format!("image of {} is not in the target clone", g.name)));
                }
            }
        }
        let f = CartesianFunctor {
            name: name.into(),
            source: source.clone(),
            target,
            atom_images: vec![target_atom],
            action: Action::Generators(images),
            cache: RwLock::new(HashMap::new()),
        };
        f.check_homomorphism(1)?;
        f.check_homomorphism(2)?;
        Ok(f)
    }

    /// The assignment on `n`-ary operations must not depend on the witness
    /// term chosen: `F(g(o1..ok)) = F(g)(F(o1)..F(ok))`.
    fn check_homomorphism(&self, n: usize) -> Result<(), DoctrineError> {
        let MorphismClass::Clone(clone) = self.source.class() else { return Ok(()) };
        let Action::Generators(images) = &self.action else { return Ok(()) };
        let ops = clone.ops(n)?;
        let size = self.target.atoms()[self.atom_images[0]].size;
        let rows = size.pow(n as u32);
        let image: Vec<Vec<u32>> = (0..ops.len())
            .map(|k| (0..rows).map(|v| self.eval(ops.witness(k), &digits(v, n, size)) as u32).collect())
            .collect();
        for g in clone.generators() {
            let total = ops.len().pow(g.arity as u32);
            for t in 0..total {
                let choice = digits(t, g.arity, ops.len());
                let src_rows = clone.size().pow(n as u32);
                let composite: Vec<u32> = (0..src_rows)
                    .map(|v| g.table[choice.iter().fold(0usize, |acc, &k| acc * clone.size() + ops.table(k)[v] as usize)])
                    .collect();
                let k = ops.find(&composite).expect("clone is closed");
                let expected: Vec<u32> = (0..rows)
                    .map(|v| images[&g.name].table[choice.iter().fold(0usize, |acc, &c| acc * size + image[c][v] as usize)])
                    .collect();
                if image[k] != expected {
                    return Err(not_strict(format!(
                        "generator images do not respect the equation {} = {}",
                        ops.witness(k),
                        Term::app(&g.name, choice.iter().map(|&c| ops.witness(c).clone()).collect())
                    )));
                }
            }
        }
        Ok(())
    }

    fn eval(&self, t: &Term, values: &[usize]) -> usize {
        let Action::Generators(images) = &self.action else { unreachable!() };
        let size = self.target.atoms()[self.atom_images[0]].size;
        match t {
            Term::Var(i) => values[i - 1],
            Term::App(g, args) => {
                let arg = args.iter().fold(0usize, |acc, a| acc * size + self.eval(a, values));
                images[&**g].table[arg] as usize
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<BaseCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BaseCategory> {
        &self.target
    }

    pub fn apply_obj(&self, x: &Obj) -> Result<Obj, DoctrineError> {
        let out = self.map_obj(x);
        if self.target.contains(&out) {
            Ok(out)
        } else {
            Err(DoctrineError::ObjectOutOfDepth(out.to_string()))
        }
    }

    fn map_obj(&self, x: &Obj) -> Obj {
        match x.kind() {
            ObjKind::Unit => Obj::unit(),
            ObjKind::Atom(i) => self.target.atom(self.atom_images[*i]),
            ObjKind::Prod(a, b) => Obj::prod(&self.map_obj(a), &self.map_obj(b)),
        }
    }

    pub fn apply(&self, f: &Mor) -> Result<Mor, DoctrineError> {
        if let Some(m) = self.cache.read().expect("functor cache poisoned").get(f) {
            return Ok(m.clone());
        }
        let m = self.compute(f)?;
        self.cache.write().expect("functor cache poisoned").insert(f.clone(), m.clone());
        Ok(m)
    }

    fn compute(&self, f: &Mor) -> Result<Mor, DoctrineError> {
        let (x, y) = (f.dom(), f.cod());
        let (fx, fy) = (self.apply_obj(x)?, self.apply_obj(y)?);
        match &self.action {
            Action::Elementwise(maps) => {
                let phi = |obj: &Obj, image: &Obj, e: usize| {
                    let vals: Vec<usize> =
                        obj.atom_leaves().iter().zip(obj.leaf_values(e)).map(|(&a, v)| maps[a][v] as usize).collect();
                    image.from_leaf_values(&vals)
                };
                let mut table = vec![0u32; fx.card()];
                for e in 0..x.card() {
                    table[phi(x, &fx, e)] = phi(y, &fy, f.apply(e)) as u32;
                }
                Mor::new(&fx, &fy, table)
            }
            Action::Generators(_) => {
                let terms = self
                    .source
                    .clone_witness(f)?
                    .ok_or_else(|| DoctrineError::NotAMorphism(f.to_string()))?;
                Ok(Mor::from_fn(&fx, &fy, |w| {
                    let vals = fx.leaf_values(w);
                    let out: Vec<usize> = terms.iter().map(|t| self.eval(t, &vals)).collect();
                    fy.from_leaf_values(&out)
                }))
            }
        }
    }
}

fn digits(v: usize, n: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    let mut rest = v;
    for d in out.iter_mut().rev() {
        *d = rest % base;
        rest /= base;
    }
    out
}

/// `P ∘ F^op`: the doctrine `P` over the target of `F`, read over its source.
pub struct ComposedDoctrine {
    inner: Arc<dyn Doctrine>,
    functor: Arc<CartesianFunctor>,
}

impl ComposedDoctrine {
    pub fn new(inner: Arc<dyn Doctrine>, functor: Arc<CartesianFunctor>) -> Result<ComposedDoctrine, DoctrineError> {
        if !same_base(functor.target(), inner.base()) {
            return Err(not_strict("functor target differs from the doctrine's base".into()));
        }
        Ok(ComposedDoctrine { inner, functor })
    }

    pub fn functor(&self) -> &CartesianFunctor {
        &self.functor
    }

    pub fn base_arc(&self) -> Arc<BaseCategory> {
        self.functor.source().clone()
    }
}

fn same_base(a: &BaseCategory, b: &BaseCategory) -> bool {
    a.atoms() == b.atoms() && a.objects() == b.objects() && a.is_closed() == b.is_closed()
}

impl Doctrine for ComposedDoctrine {
    fn name(&self) -> String {
        format!("{}∘{}", self.inner.name(), self.functor.name())
    }

    fn base(&self) -> &BaseCategory {
        self.functor.source()
    }

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError> {
        if !self.base().contains(x) {
            return Err(DoctrineError::ObjectOutOfDepth(x.to_string()));
        }
        self.inner.fiber(&self.functor.apply_obj(x)?)
    }

    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError> {
        self.inner.reindex(&self.functor.apply(f)?, a)
    }

    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError> {
        self.inner.delta(&self.functor.apply_obj(a)?)
    }

    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
        self.inner.exists(&self.functor.apply_obj(prod)?, side, a)
    }

    fn show(&self, x: &Obj, a: &Elem) -> String {
        match self.functor.apply_obj(x) {
            Ok(fx) => self.inner.show(&fx, a),
            Err(_) => format!("{a:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::PowersetDoctrine;

    fn neg() -> Operation {
        Operation { name: "neg".into(), arity: 1, table: vec![1, 0] }
    }

    #[test]
    fn identity_functor_is_transparent() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let pow: Arc<dyn Doctrine> = Arc::new(PowersetDoctrine::new(base.clone()));
        let id = Arc::new(CartesianFunctor::identity(base.clone()));
        let composed = ComposedDoctrine::new(pow.clone(), id).unwrap();
        let a = base.atom(0);
        assert_eq!(composed.delta(&a).unwrap(), pow.delta(&a).unwrap());
        let f = Mor::new(&a, &a, vec![1, 1]).unwrap();
        let s = Elem::from_bits(2, [1]);
        assert_eq!(composed.reindex(&f, &s).unwrap(), pow.reindex(&f, &s).unwrap());
    }

    #[test]
    fn bijection_transports_fibers() {
        let src = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let tgt = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let f = CartesianFunctor::bijections("flip", src.clone(), tgt.clone(), vec![0], vec![vec![1, 0]]).unwrap();
        let a = src.atom(0);
        let g = Mor::new(&a, &a, vec![0, 0]).unwrap();
        assert_eq!(f.apply(&g).unwrap().table(), &[1, 1]);
        assert!(CartesianFunctor::bijections("bad", src, tgt, vec![0], vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn generator_images_must_respect_equations() {
        let src = Arc::new(BaseCategory::clone_base(2, vec![neg()], 1, "A").unwrap());
        let tgt = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let ok = BTreeMap::from([("neg".to_string(), neg())]);
        let f = CartesianFunctor::on_generators("incl", src.clone(), tgt.clone(), 0, ok).unwrap();
        let a = src.atom(0);
        let n = Mor::new(&a, &a, vec![1, 0]).unwrap();
        assert_eq!(f.apply(&n).unwrap().table(), &[1, 0]);
        // neg∘neg = id in the source, but a constant image breaks it.
        let constant = Operation { name: "neg".into(), arity: 1, table: vec![0, 0] };
        let bad = BTreeMap::from([("neg".to_string(), constant)]);
        assert!(matches!(
            CartesianFunctor::on_generators("bad", src, tgt, 0, bad),
            Err(DoctrineError::NotStrictCartesian(_))
        ));
    }
}
