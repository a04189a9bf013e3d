//! Doctrines given by explicit tables, and their JSON file format.
//!
//! ```json
//! {
//!   "name": "pow2",
//!   "atoms": [{"name": "A", "size": 2}],
//!   "objects": ["I", "A", "A×A"],
//!   "fibers": {"A": {"elements": ["{}", "{0}", "{1}", "{0,1}"], "covers": [[0,1], [0,2], [1,3], [2,3]]}},
//!   "reindex": [{"dom": "A", "cod": "A", "map": [1, 0], "table": [0, 2, 1, 3]}],
//!   "delta": {"A": "{(0,0),(1,1)}"},
//!   "exists": [{"product": "A×A", "side": "first", "table": [0, 1, 1, 1]}]
//! }
//! ```
//!
//! Fiber elements are referred to by position. A reindexing entry for
//! `f : dom → cod` (given by `map`, the table of `f`) sends element `k` of
//! `P(cod)` to element `table[k]` of `P(dom)`. An `exists` entry sends element
//! `k` of `P(X×Y)` to `table[k]` of `P(X)` (side `first`) or `P(Y)` (`second`).
//! Every function between listed objects needs a reindexing entry, every
//! listed `A` with `A×A` listed needs `delta`, and every listed product needs
//! both `exists` entries.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{factors, Atom, BaseCategory, Doctrine, DoctrineError, Elem, Fiber, FinPoset, Mor, Obj, Side};

const MAX_TABLE_MORPHISMS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DoctrineFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    atoms: Vec<Atom>,
    objects: Vec<String>,
    fibers: BTreeMap<String, FiberSpec>,
    reindex: Vec<ReindexSpec>,
    delta: BTreeMap<String, String>,
    exists: Vec<ExistsSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberSpec {
    elements: Vec<String>,
    covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReindexSpec {
    dom: String,
    cod: String,
    map: Vec<u32>,
    table: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExistsSpec {
    product: String,
    side: Side,
    table: Vec<u32>,
}

/// A doctrine whose fibers are explicit posets and whose structure maps are
/// lookup tables.
#[derive(Debug)]
pub struct TableDoctrine {
    name: String,
    base: BaseCategory,
    fibers: HashMap<Obj, Arc<FinPoset>>,
    reindex: HashMap<Mor, Vec<u32>>,
    delta: HashMap<Obj, usize>,
    exists: HashMap<(Obj, Side), Vec<u32>>,
}

fn parse_err(msg: String) -> DoctrineError {
    DoctrineError::Parse(msg)
}

/// Loads a doctrine file and checks that every required table is present and
/// every reindexing is monotone. The doctrine laws are not checked here.
pub fn doctrine_from_file(text: &str) -> Result<TableDoctrine, DoctrineError> {
    let file: DoctrineFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    if file.atoms.is_empty() || !file.atoms.iter().all(|a| seen.insert(a.name.clone()) && a.name != "I") {
        return Err(parse_err("atoms must be nonempty with distinct names other than I".into()));
    }
    let shapes = BaseCategory::with_objects(file.atoms.clone(), vec![]);
    let objects = file.objects.iter().map(|o| shapes.parse_shape(o)).collect::<Result<Vec<Obj>, _>>()?;
    let base = BaseCategory::with_objects(file.atoms.clone(), objects.clone());
    let obj = |name: &str| -> Result<Obj, DoctrineError> { base.parse_object(name) };

    let mut fibers = HashMap::new();
    for (name, spec) in &file.fibers {
        let x = obj(name)?;
        fibers.insert(x, Arc::new(FinPoset::from_covers(spec.elements.clone(), &spec.covers)?));
    }
    for x in &objects {
        if !fibers.contains_key(x) {
            return Err(DoctrineError::MissingTable(format!("fiber of {x}")));
        }
    }

    let mut delta = HashMap::new();
    for (name, elem) in &file.delta {
        let a = obj(name)?;
        let aa = base.product(&a, &a)?;
        let k = fibers[&aa].position(elem).ok_or_else(|| parse_err(format!("δ_{a}: `{elem}` is not in P({aa})")))?;
        delta.insert(a, k);
    }
    for a in &objects {
        if base.product(a, a).is_ok() && !delta.contains_key(a) {
            return Err(DoctrineError::MissingTable(format!("δ for {a}")));
        }
    }

    let mut exists = HashMap::new();
    for e in &file.exists {
        let p = obj(&e.product)?;
        let (x, y) = factors(&p)?;
        let target = match e.side {
            Side::First => x,
            Side::Second => y,
        };
        let tf = fibers.get(&target).ok_or_else(|| DoctrineError::MissingTable(format!("fiber of {target}")))?;
        check_table(&e.table, fibers[&p].len(), tf.len(), &format!("∃ {} on {p}", e.side))?;
        exists.insert((p, e.side), e.table.clone());
    }
    for p in objects.iter().filter(|p| p.factors().is_some()) {
        for side in [Side::First, Side::Second] {
            if !exists.contains_key(&(p.clone(), side)) {
                return Err(DoctrineError::MissingTable(format!("∃ {side} on {p}")));
            }
        }
    }

    let mut reindex = HashMap::new();
    for r in &file.reindex {
        let (x, y) = (obj(&r.dom)?, obj(&r.cod)?);
        let f = Mor::new(&x, &y, r.map.clone())?;
        let (fx, fy) = (&fibers[&x], &fibers[&y]);
        check_table(&r.table, fy.len(), fx.len(), &format!("reindexing along {f}"))?;
        for a in 0..fy.len() {
            for b in 0..fy.len() {
                if fy.leq(a, b) && !fx.leq(r.table[a] as usize, r.table[b] as usize) {
                    return Err(DoctrineError::NonMonotoneReindexing(format!(
                        "along {f}: {} ≤ {} but {} ≰ {}",
                        fy.names()[a],
                        fy.names()[b],
                        fx.names()[r.table[a] as usize],
                        fx.names()[r.table[b] as usize]
                    )));
                }
            }
        }
        reindex.insert(f, r.table.clone());
    }
    for x in &objects {
        for y in &objects {
            let count = base.hom_count(x, y)?.filter(|&c| c <= MAX_TABLE_MORPHISMS).ok_or_else(|| {
                DoctrineError::SizeBudgetExceeded(format!("too many functions {x} → {y}"))
            })?;
            for k in 0..count {
                let f = base.hom_nth(x, y, k)?;
                if !reindex.contains_key(&f) {
                    return Err(DoctrineError::MissingTable(format!("reindexing along {f}")));
                }
            }
        }
    }

    Ok(TableDoctrine { name: file.name.unwrap_or_else(|| "table".into()), base, fibers, reindex, delta, exists })
}

fn check_table(table: &[u32], len: usize, range: usize, what: &str) -> Result<(), DoctrineError> {
    if table.len() != len || table.iter().any(|&v| v as usize >= range) {
        return Err(parse_err(format!("{what}: table must have {len} entries below {range}")));
    }
    Ok(())
}

impl Doctrine for TableDoctrine {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn base(&self) -> &BaseCategory {
        &self.base
    }

    fn fiber(&self, x: &Obj) -> Result<Fiber, DoctrineError> {
        self.fibers
            .get(x)
            .map(|p| Fiber::Poset(p.clone()))
            .ok_or_else(|| DoctrineError::ObjectOutOfDepth(x.to_string()))
    }

    fn reindex(&self, f: &Mor, a: &Elem) -> Result<Elem, DoctrineError> {
        let t = self.reindex.get(f).ok_or_else(|| DoctrineError::MissingTable(format!("reindexing along {f}")))?;
        Ok(Elem::index(t[a.as_index()] as usize))
    }

    fn delta(&self, a: &Obj) -> Result<Elem, DoctrineError> {
        self.delta.get(a).map(|&k| Elem::index(k)).ok_or_else(|| DoctrineError::MissingTable(format!("δ for {a}")))
    }

    fn exists(&self, prod: &Obj, side: Side, a: &Elem) -> Result<Elem, DoctrineError> {
        let t = self
            .exists
            .get(&(prod.clone(), side))
            .ok_or_else(|| DoctrineError::MissingTable(format!("∃ {side} on {prod}")))?;
        Ok(Elem::index(t[a.as_index()] as usize))
    }
}

/// Writes `p` restricted to `objects` in the doctrine file format. Every fiber
/// must be small enough to enumerate.
pub fn export_doctrine(p: &dyn Doctrine, name: &str, objects: &[Obj]) -> Result<String, DoctrineError> {
    let base = p.base();
    let mut fibers = BTreeMap::new();
    let mut elems: HashMap<Obj, Vec<Elem>> = HashMap::new();
    for x in objects {
        let f = p.fiber(x)?;
        let size = f.size().filter(|&s| s <= 1 << 16).ok_or_else(|| {
            DoctrineError::SizeBudgetExceeded(format!("fiber of {x} is too large to export"))
        })?;
        let all: Vec<Elem> = (0..size).map(|k| f.element(k)).collect();
        let names: Vec<String> = all.iter().map(|e| p.show(x, e)).collect();
        let n = all.len();
        let mut covers = vec![];
        for a in 0..n {
            for b in 0..n {
                let lt = |i: usize, j: usize| i != j && f.leq(&all[i], &all[j]);
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    covers.push((a, b));
                }
            }
        }
        fibers.insert(x.to_string(), FiberSpec { elements: names, covers });
        elems.insert(x.clone(), all);
    }
    let pos = |x: &Obj, e: &Elem| -> Result<u32, DoctrineError> {
        elems[x]
            .iter()
            .position(|c| c == e)
            .map(|k| k as u32)
            .ok_or_else(|| DoctrineError::FiberMismatch(format!("{e:?} in P({x})")))
    };
    let listed = |x: &Obj| objects.contains(x);

    let mut reindex = vec![];
    for x in objects {
        for y in objects {
            let count = base.hom_count(x, y)?.filter(|&c| c <= MAX_TABLE_MORPHISMS).ok_or_else(|| {
                DoctrineError::SizeBudgetExceeded(format!("too many functions {x} → {y}"))
            })?;
            for k in 0..count {
                let f = base.hom_nth(x, y, k)?;
                let table = elems[y].iter().map(|e| pos(x, &p.reindex(&f, e)?)).collect::<Result<_, _>>()?;
                reindex.push(ReindexSpec { dom: x.to_string(), cod: y.to_string(), map: f.table().to_vec(), table });
            }
        }
    }
    let mut delta = BTreeMap::new();
    for a in objects {
        let aa = Obj::prod(a, a);
        if listed(&aa) {
            delta.insert(a.to_string(), p.show(&aa, &p.delta(a)?));
        }
    }
    let mut exists = vec![];
    for prod in objects {
        if let Some((x, y)) = prod.factors() {
            for (side, target) in [(Side::First, x), (Side::Second, y)] {
                let table = elems[prod]
                    .iter()
                    .map(|e| pos(target, &p.exists(prod, side, e)?))
                    .collect::<Result<_, _>>()?;
                exists.push(ExistsSpec { product: prod.to_string(), side, table });
            }
        }
    }
    let file = DoctrineFile {
        name: Some(name.into()),
        atoms: base.atoms().to_vec(),
        objects: objects.iter().map(|o| o.to_string()).collect(),
        fibers,
        reindex,
        delta,
        exists,
    };
    Ok(serde_json::to_string_pretty(&file).expect("doctrine files serialize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::PowersetDoctrine;

    fn small_objects(base: &BaseCategory) -> Vec<Obj> {
        let (i, a) = (base.unit(), base.atom(0));
        vec![i.clone(), a.clone(), Obj::prod(&a, &a), Obj::prod(&a, &i), Obj::prod(&i, &a), Obj::prod(&i, &i)]
    }

    #[test]
    fn export_then_load_round_trips() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let pow = PowersetDoctrine::new(base.clone());
        let objects = small_objects(&base);
        let text = export_doctrine(&pow, "pow2", &objects).unwrap();
        let t = doctrine_from_file(&text).unwrap();
        assert_eq!(t.reindex.len(), 420);
        let again = export_doctrine(&t, "pow2", &objects).unwrap();
        assert_eq!(text, again);
        let a = base.atom(0);
        let aa = Obj::prod(&a, &a);
        assert_eq!(t.show(&aa, &t.delta(&a).unwrap()), "{(0,0),(1,1)}");
    }

    #[test]
    fn load_errors() {
        let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
        let pow = PowersetDoctrine::new(base.clone());
        let text = export_doctrine(&pow, "pow2", &small_objects(&base)).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["delta"].as_object_mut().unwrap().remove("A");
        assert!(matches!(doctrine_from_file(&v.to_string()), Err(DoctrineError::MissingTable(_))));
        assert!(matches!(doctrine_from_file("{"), Err(DoctrineError::Parse(_))));
    }
}
