//! Random and exhaustive generation of well-typed diagrams.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{tensor, Diagram, Generator};
use crate::signature::Signature;

/// All generators over a signature (structural ones first, then symbols in name order).
pub fn all_generators(sig: &Signature) -> Vec<Generator> {
    let mut gens = vec![
        Generator::Id,
        Generator::Swap,
        Generator::Copy,
        Generator::Discard,
        Generator::Cocopy,
        Generator::Codiscard,
    ];
    gens.extend(sig.functions().map(|(n, a)| Generator::func(n, a)));
    gens.extend(sig.predicates().map(|(n, a)| Generator::pred(n, a)));
    gens
}

/// One random layer of generators consuming exactly `width` wires.
///
/// At most `max_sources` zero-input generators are inserted.
fn random_layer<R: Rng>(gens: &[Generator], width: usize, max_sources: usize, rng: &mut R) -> Diagram {
    let mut parts = Vec::new();
    let mut remaining = width;
    let mut sources = 0;
    loop {
        let fits: Vec<&Generator> = gens
            .iter()
            .filter(|g| g.dom() <= remaining && (g.dom() > 0 || sources < max_sources))
            .collect();
        if remaining == 0 && (fits.is_empty() || rng.gen_bool(0.7)) {
            break;
        }
        let g = match fits.choose(rng) {
            Some(g) => (*g).clone(),
            None => Generator::Id,
        };
        if g.dom() == 0 {
            sources += 1;
        }
        remaining -= g.dom();
        parts.push(Diagram::generator(g));
    }
    parts.shuffle(rng);
    // Shuffling parts keeps widths consistent since each layer only needs its total dom.
    Diagram::tensor_all(parts.iter())
}

/// A random diagram of `layers` sequential layers starting from `dom` wires.
pub fn random_diagram<R: Rng>(sig: &Signature, dom: usize, layers: usize, rng: &mut R) -> Diagram {
    let gens = all_generators(sig);
    let mut d = Diagram::identity(dom);
    for _ in 0..layers {
        let layer = random_layer(&gens, d.cod(), 1, rng);
        d = d.seq(&layer);
    }
    d
}

/// A random diagram `dom -> cod`: random layers followed by a width adapter.
pub fn random_diagram_typed<R: Rng>(
    sig: &Signature,
    dom: usize,
    cod: usize,
    layers: usize,
    rng: &mut R,
) -> Diagram {
    let d = random_diagram(sig, dom, layers, rng);
    d.seq(&width_adapter(d.cod(), cod, rng))
}

/// A structural diagram `from -> to` that discards or duplicates wires as needed.
fn width_adapter<R: Rng>(from: usize, to: usize, rng: &mut R) -> Diagram {
    if from == to {
        return Diagram::identity(from);
    }
    if from > to {
        let keep = Diagram::identity(to);
        return tensor(&keep, &Diagram::discard_n(from - to));
    }
    if from == 0 {
        return Diagram::codiscard_n(to);
    }
    // Duplicate a random wire until wide enough.
    let mut d = Diagram::identity(from);
    while d.cod() < to {
        let w = d.cod();
        let i = rng.gen_range(0..w);
        let layer = Diagram::tensor_all([&Diagram::identity(i), &Diagram::copy(), &Diagram::identity(w - i - 1)]);
        d = d.seq(&layer);
    }
    d
}

/// Every generator, every tensor of two generators, and every well-typed
/// sequential composite of two generators.
pub fn enumerate_small(sig: &Signature) -> Vec<Diagram> {
    let gens: Vec<Diagram> = all_generators(sig).into_iter().map(Diagram::generator).collect();
    let mut out = gens.clone();
    for a in &gens {
        for b in &gens {
            out.push(tensor(a, b));
            if a.cod() == b.dom() {
                out.push(a.seq(b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_diagrams_are_typed() {
        let sig = Signature::new([("f", 1)], [("P", 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let dom = rng.gen_range(0..3);
            let cod = rng.gen_range(0..3);
            let d = random_diagram_typed(&sig, dom, cod, 2, &mut rng);
            assert_eq!((d.dom(), d.cod()), (dom, cod));
        }
    }

    #[test]
    fn enumeration_contains_generators_and_pairs() {
        let sig = Signature::new([("f", 1)], []).unwrap();
        let all = enumerate_small(&sig);
        assert!(all.iter().any(|d| *d == Diagram::copy()));
        assert!(all.iter().any(|d| *d == Diagram::copy().seq(&Diagram::cocopy())));
    }
}
