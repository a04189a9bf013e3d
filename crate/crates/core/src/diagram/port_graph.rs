//! Port graphs: diagrams modulo the symmetric monoidal laws.
//!
//! Boxes have ordered input and output ports; every port lies on exactly one
//! wire and the boundary ports are fixed. Identity and swap leaves only
//! reroute wires. Because ports are ordered, a traversal started from the
//! boundary numbers every reachable box deterministically; components that
//! do not touch the boundary are numbered from every possible starting box
//! and the least encoding wins.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use super::{Diagram, Generator, Node};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxNode {
    pub generator: Generator,
    pub inputs: usize,
    pub outputs: usize,
}

/// Where a wire starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Input(usize),
    BoxOut(usize, usize),
}

/// Where a wire ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Output(usize),
    BoxIn(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortGraph {
    pub inputs: usize,
    pub outputs: usize,
    pub boxes: Vec<BoxNode>,
    pub wires: BTreeSet<(Source, Target)>,
}

/// A graph under construction: for each input and box output, the target it feeds.
struct Open {
    boxes: Vec<BoxNode>,
    input_targets: Vec<Target>,
    box_targets: Vec<Vec<Target>>,
    outputs: usize,
}

impl Open {
    fn build(d: &Diagram) -> Open {
        match d.node() {
            Node::Empty => Open { boxes: vec![], input_targets: vec![], box_targets: vec![], outputs: 0 },
            Node::Gen(Generator::Id) => Open {
                boxes: vec![],
                input_targets: vec![Target::Output(0)],
                box_targets: vec![],
                outputs: 1,
            },
            Node::Gen(Generator::Swap) => Open {
                boxes: vec![],
                input_targets: vec![Target::Output(1), Target::Output(0)],
                box_targets: vec![],
                outputs: 2,
            },
            Node::Gen(g) => {
                let node = BoxNode { generator: g.clone(), inputs: g.dom(), outputs: g.cod() };
                Open {
                    boxes: vec![node],
                    input_targets: (0..g.dom()).map(|i| Target::BoxIn(0, i)).collect(),
                    box_targets: vec![(0..g.cod()).map(Target::Output).collect()],
                    outputs: g.cod(),
                }
            }
            Node::Seq(a, b) => Open::seq(Open::build(a), Open::build(b)),
            Node::Tensor(a, b) => Open::tensor(Open::build(a), Open::build(b)),
        }
    }

    fn seq(a: Open, b: Open) -> Open {
        let offset = a.boxes.len();
        let shift = |t: &Target| match *t {
            Target::BoxIn(bx, p) => Target::BoxIn(bx + offset, p),
            Target::Output(j) => Target::Output(j),
        };
        let b_inputs: Vec<Target> = b.input_targets.iter().map(shift).collect();
        let resolve = |t: &Target| match *t {
            Target::BoxIn(bx, p) => Target::BoxIn(bx, p),
            Target::Output(k) => b_inputs[k],
        };
        let mut box_targets: Vec<Vec<Target>> =
            a.box_targets.iter().map(|ts| ts.iter().map(resolve).collect()).collect();
        box_targets.extend(b.box_targets.iter().map(|ts| ts.iter().map(shift).collect::<Vec<_>>()));
        let mut boxes = a.boxes;
        boxes.extend(b.boxes);
        Open {
            input_targets: a.input_targets.iter().map(resolve).collect(),
            boxes,
            box_targets,
            outputs: b.outputs,
        }
    }

    fn tensor(a: Open, b: Open) -> Open {
        let box_offset = a.boxes.len();
        let out_offset = a.outputs;
        let shift = |t: &Target| match *t {
            Target::BoxIn(bx, p) => Target::BoxIn(bx + box_offset, p),
            Target::Output(j) => Target::Output(j + out_offset),
        };
        let mut input_targets = a.input_targets;
        input_targets.extend(b.input_targets.iter().map(shift));
        let mut box_targets = a.box_targets;
        box_targets.extend(b.box_targets.iter().map(|ts| ts.iter().map(shift).collect::<Vec<_>>()));
        let mut boxes = a.boxes;
        boxes.extend(b.boxes);
        Open { boxes, input_targets, box_targets, outputs: a.outputs + b.outputs }
    }
}

impl PortGraph {
    pub fn from_diagram(d: &Diagram) -> PortGraph {
        let open = Open::build(d);
        let mut wires = BTreeSet::new();
        for (i, t) in open.input_targets.iter().enumerate() {
            wires.insert((Source::Input(i), *t));
        }
        for (b, ts) in open.box_targets.iter().enumerate() {
            for (p, t) in ts.iter().enumerate() {
                wires.insert((Source::BoxOut(b, p), *t));
            }
        }
        PortGraph { inputs: d.dom(), outputs: d.cod(), boxes: open.boxes, wires }
    }

    fn adjacency(&self) -> (HashMap<Source, Target>, HashMap<Target, Source>) {
        let fwd: HashMap<Source, Target> = self.wires.iter().copied().collect();
        let back: HashMap<Target, Source> = self.wires.iter().map(|&(s, t)| (t, s)).collect();
        (fwd, back)
    }

    /// Breadth-first numbering of boxes from `seeds`, following ports in order.
    fn number_from(
        &self,
        seeds: &[usize],
        fwd: &HashMap<Source, Target>,
        back: &HashMap<Target, Source>,
    ) -> Vec<usize> {
        let mut order = Vec::new();
        let mut seen = vec![false; self.boxes.len()];
        let mut queue = VecDeque::new();
        let mut visit = |b: usize, order: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            if !seen[b] {
                seen[b] = true;
                order.push(b);
                queue.push_back(b);
            }
        };
        for &s in seeds {
            visit(s, &mut order, &mut queue);
        }
        while let Some(b) = queue.pop_front() {
            for p in 0..self.boxes[b].inputs {
                if let Some(Source::BoxOut(b2, _)) = back.get(&Target::BoxIn(b, p)) {
                    visit(*b2, &mut order, &mut queue);
                }
            }
            for p in 0..self.boxes[b].outputs {
                if let Some(Target::BoxIn(b2, _)) = fwd.get(&Source::BoxOut(b, p)) {
                    visit(*b2, &mut order, &mut queue);
                }
            }
        }
        order
    }

    fn encode(
        &self,
        order: &[usize],
        fwd: &HashMap<Source, Target>,
        with_inputs: bool,
    ) -> String {
        let mut rank = HashMap::new();
        for (i, &b) in order.iter().enumerate() {
            rank.insert(b, i);
        }
        let enc = |t: &Target| match *t {
            Target::Output(j) => format!("o{j}"),
            Target::BoxIn(b, p) => format!("b{}.{}", rank[&b], p),
        };
        let mut s = String::new();
        if with_inputs {
            for i in 0..self.inputs {
                let _ = write!(s, "{},", enc(&fwd[&Source::Input(i)]));
            }
            s.push('|');
        }
        for &b in order {
            let bx = &self.boxes[b];
            let _ = write!(s, "[{}/{}/{}:", bx.generator.label(), bx.inputs, bx.outputs);
            for p in 0..bx.outputs {
                let _ = write!(s, "{},", enc(&fwd[&Source::BoxOut(b, p)]));
            }
            s.push(']');
        }
        s
    }

    /// Canonical encoding: equal strings exactly for boundary-fixing isomorphic graphs.
    pub fn canonical_form(&self) -> String {
        let (fwd, back) = self.adjacency();
        let mut seeds = Vec::new();
        for i in 0..self.inputs {
            if let Target::BoxIn(b, _) = fwd[&Source::Input(i)] {
                seeds.push(b);
            }
        }
        for j in 0..self.outputs {
            if let Source::BoxOut(b, _) = back[&Target::Output(j)] {
                seeds.push(b);
            }
        }
        let main = self.number_from(&seeds, &fwd, &back);
        let mut covered = vec![false; self.boxes.len()];
        for &b in &main {
            covered[b] = true;
        }
        let mut out = format!("{}>{}#", self.inputs, self.outputs);
        out.push_str(&self.encode(&main, &fwd, true));

        let mut closed = Vec::new();
        for start in 0..self.boxes.len() {
            if covered[start] {
                continue;
            }
            let component = self.number_from(&[start], &fwd, &back);
            for &b in &component {
                covered[b] = true;
            }
            let best = component
                .iter()
                .map(|&seed| self.encode(&self.number_from(&[seed], &fwd, &back), &fwd, false))
                .min()
                .expect("component is nonempty");
            closed.push(best);
        }
        closed.sort();
        for c in closed {
            out.push('#');
            out.push_str(&c);
        }
        out
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph diagram {\n  rankdir=LR;\n  node [fontname=\"monospace\"];\n");
        for i in 0..self.inputs {
            let _ = writeln!(s, "  in{i} [shape=point, xlabel=\"in{i}\"];");
        }
        for j in 0..self.outputs {
            let _ = writeln!(s, "  out{j} [shape=point, xlabel=\"out{j}\"];");
        }
        for (b, bx) in self.boxes.iter().enumerate() {
            let shape = match bx.generator {
                Generator::Func { .. } | Generator::Pred { .. } => "box",
                Generator::Copy | Generator::Discard => "circle, style=filled, fillcolor=black, fontcolor=white",
                _ => "circle",
            };
            let _ = writeln!(s, "  b{b} [label=\"{}\", shape={shape}];", bx.generator.label());
        }
        for (src, tgt) in &self.wires {
            let from = match src {
                Source::Input(i) => format!("in{i}"),
                Source::BoxOut(b, _) => format!("b{b}"),
            };
            let to = match tgt {
                Target::Output(j) => format!("out{j}"),
                Target::BoxIn(b, _) => format!("b{b}"),
            };
            let tail = match src {
                Source::BoxOut(_, p) => format!("taillabel=\"{p}\""),
                Source::Input(_) => String::new(),
            };
            let head = match tgt {
                Target::BoxIn(_, p) => format!("headlabel=\"{p}\""),
                Target::Output(_) => String::new(),
            };
            let attrs: Vec<String> = [tail, head].into_iter().filter(|a| !a.is_empty()).collect();
            let _ = writeln!(s, "  {from} -> {to} [{}];", attrs.join(", "));
        }
        s.push_str("}\n");
        s
    }
}
