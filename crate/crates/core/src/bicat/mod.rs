//! Finite cartesian bicategories.
//!
//! `Bicat_P` has the objects of the base of `P` and `Hom(X,Y) = P(X×Y)`. The
//! relation truncation has the same objects and all relations `X → Y`. Both
//! encode an element of `Hom(X,Y)` on the element indices of `X×Y`: the pair
//! `(x,y)` is bit (or element) `x·|Y| + y`.
//!
//! Nesting conventions: `f ; g` is computed on `Y×(X×Z)` and projected along
//! `π2`; `f ⊗ g` for `f : A → B`, `g : C → D` lives on `(A×C)×(B×D)`.

mod of_cbc;
pub(crate) mod maps;
pub(crate) mod verify;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::doctrine::{BaseCategory, Doctrine, DoctrineError, Elem, Fiber, Mor, Obj, Side};

pub use maps::{check_comprehensive_diagonals, check_map_detection, check_ruc, is_map};
pub use of_cbc::{doctrine_of_cbc, CbcDoctrine};
pub use verify::{check_graph_functor, check_oracle_agreement, verify_cbc_axioms};

/// A morphism of a finite cartesian bicategory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub dom: Obj,
    pub cod: Obj,
    pub elem: Elem,
}

impl Arrow {
    pub fn new(dom: &Obj, cod: &Obj, elem: Elem) -> Arrow {
        Arrow { dom: dom.clone(), cod: cod.clone(), elem }
    }
}

#[derive(Clone)]
pub enum Backend {
    OfDoctrine(Arc<dyn Doctrine>),
    RelTruncation(Arc<BaseCategory>),
}

/// Which index map of a composite or tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Leg {
    ComposeLeft,
    ComposeRight,
    TensorLeft,
    TensorRight,
}

#[derive(Clone)]
pub struct FinBicat {
    backend: Backend,
    legs: Arc<RwLock<HashMap<(Leg, Vec<Obj>), Mor>>>,
}

impl fmt::Debug for FinBicat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn mismatch(what: &str, f: &Arrow, g: &Arrow) -> DoctrineError {
    DoctrineError::FiberMismatch(format!("{what}: {} → {} against {} → {}", f.dom, f.cod, g.dom, g.cod))
}

impl FinBicat {
    pub fn of_doctrine(p: Arc<dyn Doctrine>) -> FinBicat {
        FinBicat::new(Backend::OfDoctrine(p))
    }

    pub fn rel_truncation(base: Arc<BaseCategory>) -> FinBicat {
        FinBicat::new(Backend::RelTruncation(base))
    }

    fn new(backend: Backend) -> FinBicat {
        FinBicat { backend, legs: Arc::new(RwLock::new(HashMap::new())) }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    fn leg(&self, leg: Leg, objs: &[&Obj], make: impl FnOnce() -> Mor) -> Mor {
        let key = (leg, objs.iter().map(|&o| o.clone()).collect::<Vec<_>>());
        if let Some(m) = self.legs.read().expect("cache lock").get(&key) {
            return m.clone();
        }
        let m = make();
        self.legs.write().expect("cache lock").insert(key, m.clone());
        m
    }

    pub fn name(&self) -> String {
        match &self.backend {
            Backend::OfDoctrine(p) => format!("Bicat({})", p.name()),
            Backend::RelTruncation(_) => "Rel".into(),
        }
    }

    pub fn base(&self) -> &BaseCategory {
        match &self.backend {
            Backend::OfDoctrine(p) => p.base(),
            Backend::RelTruncation(b) => b,
        }
    }

    fn product(&self, x: &Obj, y: &Obj) -> Result<Obj, DoctrineError> {
        self.base().product(x, y)
    }

    /// The poset `Hom(X,Y)`.
    pub fn hom(&self, x: &Obj, y: &Obj) -> Result<Fiber, DoctrineError> {
        let xy = self.product(x, y)?;
        match &self.backend {
            Backend::OfDoctrine(p) => p.fiber(&xy),
            Backend::RelTruncation(_) => Ok(Fiber::Powerset { width: xy.card() }),
        }
    }

    pub fn arrow(&self, x: &Obj, y: &Obj, elem: Elem) -> Result<Arrow, DoctrineError> {
        if !self.hom(x, y)?.contains(&elem) {
            return Err(DoctrineError::FiberMismatch(format!("{elem:?} in Hom({x}, {y})")));
        }
        Ok(Arrow::new(x, y, elem))
    }

    pub fn leq(&self, r: &Arrow, s: &Arrow) -> Result<bool, DoctrineError> {
        if r.dom != s.dom || r.cod != s.cod {
            return Err(mismatch("order", r, s));
        }
        Ok(self.hom(&r.dom, &r.cod)?.leq(&r.elem, &s.elem))
    }

    pub fn top(&self, x: &Obj, y: &Obj) -> Result<Arrow, DoctrineError> {
        Ok(Arrow::new(x, y, self.hom(x, y)?.top()))
    }

    pub fn meet(&self, r: &Arrow, s: &Arrow) -> Result<Arrow, DoctrineError> {
        if r.dom != s.dom || r.cod != s.cod {
            return Err(mismatch("meet", r, s));
        }
        Ok(Arrow::new(&r.dom, &r.cod, self.hom(&r.dom, &r.cod)?.meet(&r.elem, &s.elem)))
    }

    pub fn identity(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        let elem = match &self.backend {
            Backend::OfDoctrine(p) => p.delta(x)?,
            Backend::RelTruncation(_) => {
                let n = x.card();
                Elem::from_bits(self.product(x, x)?.card(), (0..n).map(|i| i * n + i))
            }
        };
        Ok(Arrow::new(x, x, elem))
    }

    /// `f ; g`. For a doctrine: `∃_{π2}(P_a(f) ∧ P_b(g))` on `Y×(X×Z)`, where
    /// `a(y,(x,z)) = (x,y)` and `b(y,(x,z)) = (y,z)`.
    pub fn compose(&self, f: &Arrow, g: &Arrow) -> Result<Arrow, DoctrineError> {
        if f.cod != g.dom {
            return Err(mismatch("composition", f, g));
        }
        let (x, y, z) = (&f.dom, &f.cod, &g.cod);
        let (nx, ny, nz) = (x.card(), y.card(), z.card());
        let elem = match &self.backend {
            Backend::OfDoctrine(p) => {
                let xz = self.product(x, z)?;
                let yxz = self.product(y, &xz)?;
                let xy = self.product(x, y)?;
                let yz = self.product(y, z)?;
                let a = self.leg(Leg::ComposeLeft, &[x, y, z], || {
                    Mor::from_fn(&yxz, &xy, |i| {
                        let (v, rest) = (i / (nx * nz), i % (nx * nz));
                        (rest / nz) * ny + v
                    })
                });
                let b = self.leg(Leg::ComposeRight, &[x, y, z], || {
                    Mor::from_fn(&yxz, &yz, |i| (i / (nx * nz)) * nz + i % nz)
                });
                let both = p.fiber(&yxz)?.meet(&p.reindex(&a, &f.elem)?, &p.reindex(&b, &g.elem)?);
                p.exists(&yxz, Side::Second, &both)?
            }
            Backend::RelTruncation(_) => {
                let mut out = Elem::zeros(nx * nz);
                for i in f.elem.ones_iter() {
                    let (u, v) = (i / ny, i % ny);
                    for w in 0..nz {
                        if g.elem.get(v * nz + w) {
                            out.set(u * nz + w);
                        }
                    }
                }
                out
            }
        };
        Ok(Arrow::new(x, z, elem))
    }

    /// `f ⊗ g : A×C → B×D` for `f : A → B` and `g : C → D`. For a doctrine:
    /// `P_{⟨π1,π3⟩}(f) ∧ P_{⟨π2,π4⟩}(g)` on `(A×C)×(B×D)`.
    pub fn tensor(&self, f: &Arrow, g: &Arrow) -> Result<Arrow, DoctrineError> {
        let (a, b, c, d) = (&f.dom, &f.cod, &g.dom, &g.cod);
        let (nb, nc, nd) = (b.card(), c.card(), d.card());
        let ac = self.product(a, c)?;
        let bd = self.product(b, d)?;
        let elem = match &self.backend {
            Backend::OfDoctrine(p) => {
                let prod = self.product(&ac, &bd)?;
                let m = nb * nd;
                let (ab, cd) = (self.product(a, b)?, self.product(c, d)?);
                let to_ab = self.leg(Leg::TensorLeft, &[a, b, c, d], || {
                    Mor::from_fn(&prod, &ab, |i| {
                        let (l, r) = (i / m, i % m);
                        (l / nc) * nb + r / nd
                    })
                });
                let to_cd = self.leg(Leg::TensorRight, &[a, b, c, d], || {
                    Mor::from_fn(&prod, &cd, |i| {
                        let (l, r) = (i / m, i % m);
                        (l % nc) * nd + r % nd
                    })
                });
                p.fiber(&prod)?.meet(&p.reindex(&to_ab, &f.elem)?, &p.reindex(&to_cd, &g.elem)?)
            }
            Backend::RelTruncation(_) => {
                self.product(&ac, &bd)?;
                let mut out = Elem::zeros(ac.card() * bd.card());
                for i in f.elem.ones_iter() {
                    let (u, v) = (i / nb, i % nb);
                    for j in g.elem.ones_iter() {
                        let (s, t) = (j / nd, j % nd);
                        out.set((u * nc + s) * bd.card() + v * nd + t);
                    }
                }
                out
            }
        };
        Ok(Arrow::new(&ac, &bd, elem))
    }

    /// `R^op = P_σ(R) : Y → X`.
    pub fn opposite(&self, r: &Arrow) -> Result<Arrow, DoctrineError> {
        let (x, y) = (&r.dom, &r.cod);
        let elem = match &self.backend {
            Backend::OfDoctrine(p) => {
                self.product(y, x)?;
                p.reindex(&self.base().swap(y, x), &r.elem)?
            }
            Backend::RelTruncation(_) => {
                let (nx, ny) = (x.card(), y.card());
                Elem::from_bits(nx * ny, r.elem.ones_iter().map(|i| (i % ny) * nx + i / ny))
            }
        };
        Ok(Arrow::new(y, x, elem))
    }

    /// `Γ(f) = P_{f×id_Y}(δ_Y)`: the graph of a base morphism.
    pub fn graph(&self, f: &Mor) -> Result<Arrow, DoctrineError> {
        let (x, y) = (f.dom(), f.cod());
        let elem = match &self.backend {
            Backend::OfDoctrine(p) => {
                self.product(x, y)?;
                p.reindex(&f.times(&self.base().id(y)), &p.delta(y)?)?
            }
            Backend::RelTruncation(_) => {
                let ny = y.card();
                Elem::from_bits(x.card() * ny, (0..x.card()).map(|i| i * ny + f.apply(i)))
            }
        };
        Ok(Arrow::new(x, y, elem))
    }

    pub fn copy(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.graph(&self.base().diagonal(x))
    }

    pub fn discard(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.graph(&self.base().bang(x))
    }

    pub fn cocopy(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.opposite(&self.copy(x)?)
    }

    pub fn codiscard(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.opposite(&self.discard(x)?)
    }

    /// `I → X×X`: codiscard then copy.
    pub fn cup(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.compose(&self.codiscard(x)?, &self.copy(x)?)
    }

    /// `X×X → I`: cocopy then discard.
    pub fn cap(&self, x: &Obj) -> Result<Arrow, DoctrineError> {
        self.compose(&self.cocopy(x)?, &self.discard(x)?)
    }

    /// Whether `r` is a comonoid homomorphism: `r ; copy = copy ; (r⊗r)` and
    /// `r ; discard = discard`.
    pub fn is_comonoid_hom(&self, r: &Arrow) -> Result<bool, DoctrineError> {
        let (x, y) = (&r.dom, &r.cod);
        let copies = self.compose(r, &self.copy(y)?)? == self.compose(&self.copy(x)?, &self.tensor(r, r)?)?;
        Ok(copies && self.compose(r, &self.discard(y)?)? == self.discard(x)?)
    }

    pub fn show(&self, r: &Arrow) -> String {
        match self.product(&r.dom, &r.cod) {
            Ok(xy) => match &self.backend {
                Backend::OfDoctrine(p) => p.show(&xy, &r.elem),
                Backend::RelTruncation(_) => Fiber::Powerset { width: xy.card() }.show(&r.elem, |i| xy.show(i)),
            },
            Err(_) => format!("{:?}", r.elem),
        }
    }
}
