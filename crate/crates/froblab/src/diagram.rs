//! Tensor schemes, layered string diagrams, and the topology analysis that
//! drives invariance prediction.
//!
//! A diagram is stored in layered normal form: an ordered list of slices, each
//! slice a planar row of identity wires and generator nodes read top to
//! bottom. Composition concatenates slices, tensoring stacks them.

use petgraph::algo::connected_components;
use petgraph::graph::UnGraph;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("generator symbol `{0}` is declared more than once")]
    AmbiguousSymbol(String),
    #[error("interface mismatch: expected word {expected:?}, found {found:?}")]
    InterfaceMismatch { expected: Vec<String>, found: Vec<String> },
}

/// A generator of a tensor scheme: a symbol with source and target words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: Vec<String>,
    pub target: Vec<String>,
}

impl Generator {
    pub fn new(name: impl Into<String>, source: &[&str], target: &[&str]) -> Self {
        Generator {
            name: name.into(),
            source: source.iter().map(|s| s.to_string()).collect(),
            target: target.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A tensor scheme: object labels plus generators whose source and target are
/// words of labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorScheme {
    pub vertices: Vec<String>,
    pub edges: Vec<Generator>,
}

impl TensorScheme {
    pub fn new(vertices: &[&str], edges: Vec<Generator>) -> Self {
        TensorScheme {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges,
        }
    }

    pub fn has_vertex(&self, label: &str) -> bool {
        self.vertices.iter().any(|v| v == label)
    }

    /// Look up a generator; errors on unknown or duplicated symbols.
    pub fn generator(&self, name: &str) -> Result<&Generator, DiagramError> {
        let mut found = None;
        for e in &self.edges {
            if e.name == name {
                if found.is_some() {
                    return Err(DiagramError::AmbiguousSymbol(name.to_string()));
                }
                found = Some(e);
            }
        }
        found.ok_or_else(|| DiagramError::UnknownSymbol(name.to_string()))
    }
}

/// Report produced by [`validate_scheme`]; empty means valid.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SchemeReport {
    /// Pairs (generator, label) where the label is not a declared vertex.
    pub undeclared_labels: Vec<(String, String)>,
    /// Generator symbols declared more than once.
    pub duplicate_symbols: Vec<String>,
}

impl SchemeReport {
    pub fn is_valid(&self) -> bool {
        self.undeclared_labels.is_empty() && self.duplicate_symbols.is_empty()
    }
}

pub fn validate_scheme(scheme: &TensorScheme) -> SchemeReport {
    let mut report = SchemeReport::default();
    for edge in &scheme.edges {
        for label in edge.source.iter().chain(edge.target.iter()) {
            if !scheme.has_vertex(label) {
                let entry = (edge.name.clone(), label.clone());
                if !report.undeclared_labels.contains(&entry) {
                    report.undeclared_labels.push(entry);
                }
            }
        }
    }
    let mut seen: Vec<&str> = Vec::new();
    for edge in &scheme.edges {
        if seen.contains(&edge.name.as_str()) {
            if !report.duplicate_symbols.contains(&edge.name) {
                report.duplicate_symbols.push(edge.name.clone());
            }
        } else {
            seen.push(&edge.name);
        }
    }
    report
}

/// One vertical cell of a slice: an identity wire or a generator occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Id(String),
    Gen {
        node_id: u64,
        symbol: String,
        source: Vec<String>,
        target: Vec<String>,
    },
}

impl Atom {
    pub fn source_word(&self) -> &[String] {
        match self {
            Atom::Id(label) => std::slice::from_ref(label),
            Atom::Gen { source, .. } => source,
        }
    }

    pub fn target_word(&self) -> &[String] {
        match self {
            Atom::Id(label) => std::slice::from_ref(label),
            Atom::Gen { target, .. } => target,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Atom::Id(_))
    }
}

/// A planar row of atoms, read top to bottom.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Slice {
    pub atoms: Vec<Atom>,
}

impl Slice {
    pub fn source_word(&self) -> Vec<String> {
        self.atoms.iter().flat_map(|a| a.source_word().iter().cloned()).collect()
    }

    pub fn target_word(&self) -> Vec<String> {
        self.atoms.iter().flat_map(|a| a.target_word().iter().cloned()).collect()
    }

    pub fn is_all_identity(&self) -> bool {
        self.atoms.iter().all(Atom::is_identity)
    }
}

/// A progressive plane string diagram in layered normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDiagram {
    input: Vec<String>,
    output: Vec<String>,
    slices: Vec<Slice>,
}

impl LayeredDiagram {
    /// Build a diagram from slices, checking interface matching and assigning
    /// node identifiers in reading order.
    pub fn new(input: Vec<String>, slices: Vec<Slice>) -> Result<Self, DiagramError> {
        let mut current = input.clone();
        for slice in &slices {
            let found = slice.source_word();
            if found != current {
                return Err(DiagramError::InterfaceMismatch { expected: current, found });
            }
            current = slice.target_word();
        }
        let mut diagram = LayeredDiagram { input, output: current, slices };
        diagram.renumber();
        Ok(diagram)
    }

    /// The identity diagram on a word: a single slice of identity wires.
    pub fn identity(word: &[String]) -> Self {
        let slice = Slice { atoms: word.iter().map(|l| Atom::Id(l.clone())).collect() };
        LayeredDiagram { input: word.to_vec(), output: word.to_vec(), slices: vec![slice] }
    }

    pub fn input_word(&self) -> &[String] {
        &self.input
    }

    pub fn output_word(&self) -> &[String] {
        &self.output
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn node_count(&self) -> usize {
        self.slices
            .iter()
            .flat_map(|s| s.atoms.iter())
            .filter(|a| !a.is_identity())
            .count()
    }

    /// Stable identifiers of all generator occurrences, in reading order.
    pub fn node_ids(&self) -> Vec<u64> {
        self.slices
            .iter()
            .flat_map(|s| s.atoms.iter())
            .filter_map(|a| match a {
                Atom::Gen { node_id, .. } => Some(*node_id),
                Atom::Id(_) => None,
            })
            .collect()
    }

    fn renumber(&mut self) {
        let mut next = 0u64;
        for slice in &mut self.slices {
            for atom in &mut slice.atoms {
                if let Atom::Gen { node_id, .. } = atom {
                    *node_id = next;
                    next += 1;
                }
            }
        }
    }

    /// Remove all-identity slices; the only normalization applied to stored
    /// diagrams.
    pub fn strip_identity_slices(&self) -> Self {
        let slices: Vec<Slice> = self
            .slices
            .iter()
            .filter(|s| !s.is_all_identity())
            .cloned()
            .collect();
        let mut out = LayeredDiagram {
            input: self.input.clone(),
            output: self.output.clone(),
            slices,
        };
        out.renumber();
        out
    }

    /// The scheme implied by the labels and generator occurrences of this
    /// diagram. Distinct occurrences of the same symbol must agree in arity,
    /// which holds for any diagram built against a scheme.
    pub fn implied_scheme(&self) -> TensorScheme {
        let mut vertices: Vec<String> = Vec::new();
        let mut edges: Vec<Generator> = Vec::new();
        let mut push_vertex = |vs: &mut Vec<String>, l: &String| {
            if !vs.contains(l) {
                vs.push(l.clone());
            }
        };
        for l in self.input.iter().chain(self.output.iter()) {
            push_vertex(&mut vertices, l);
        }
        for slice in &self.slices {
            for atom in &slice.atoms {
                for l in atom.source_word().iter().chain(atom.target_word().iter()) {
                    push_vertex(&mut vertices, l);
                }
                if let Atom::Gen { symbol, source, target, .. } = atom {
                    if !edges.iter().any(|e| &e.name == symbol) {
                        edges.push(Generator {
                            name: symbol.clone(),
                            source: source.clone(),
                            target: target.clone(),
                        });
                    }
                }
            }
        }
        TensorScheme { vertices, edges }
    }

    /// Try to move the `atom_idx`-th atom of slice `slice_idx + 1` (which must
    /// be a generator) one slice earlier. Succeeds only when the wires it
    /// consumes are plain identities there, i.e. when the two atoms share no
    /// wire — the elementary deformation realizable in layered form.
    pub fn exchange_adjacent(&self, slice_idx: usize, atom_idx: usize) -> Option<LayeredDiagram> {
        if slice_idx + 1 >= self.slices.len() {
            return None;
        }
        let late = &self.slices[slice_idx + 1];
        let atom = late.atoms.get(atom_idx)?;
        let Atom::Gen { symbol, source, target, .. } = atom else {
            return None;
        };
        let pos: usize = late.atoms[..atom_idx].iter().map(|a| a.source_word().len()).sum();
        let len = source.len();
        // Locate the atoms of the earlier slice that produce positions
        // [pos, pos+len); they must be contiguous identity atoms.
        let early = &self.slices[slice_idx];
        let mut covered: Vec<usize> = Vec::new();
        let mut offset = 0usize;
        for (i, a) in early.atoms.iter().enumerate() {
            let w = a.target_word().len();
            if offset < pos + len && offset + w > pos {
                covered.push(i);
            }
            offset += w;
        }
        if covered.len() != len || covered.iter().any(|&i| !early.atoms[i].is_identity()) {
            return None;
        }
        if let (Some(&first), Some(&last)) = (covered.first(), covered.last()) {
            if last - first + 1 != covered.len() {
                return None;
            }
        } else if len != 0 {
            return None;
        }
        // A nullary generator squeezed between wires has no anchor position in
        // the earlier slice; keep those where they are.
        if len == 0 {
            return None;
        }
        let first = covered[0];
        let mut new_early = early.atoms.clone();
        new_early.splice(
            first..first + len,
            std::iter::once(Atom::Gen {
                node_id: 0,
                symbol: symbol.clone(),
                source: source.clone(),
                target: target.clone(),
            }),
        );
        let mut new_late = late.atoms.clone();
        new_late.splice(
            atom_idx..atom_idx + 1,
            target.iter().map(|l| Atom::Id(l.clone())),
        );
        let mut slices = self.slices.clone();
        slices[slice_idx] = Slice { atoms: new_early };
        slices[slice_idx + 1] = Slice { atoms: new_late };
        LayeredDiagram::new(self.input.clone(), slices).ok()
    }
}

/// A single-slice diagram containing exactly one occurrence of a generator.
pub fn generator_diagram(scheme: &TensorScheme, symbol: &str) -> Result<LayeredDiagram, DiagramError> {
    let gen = scheme.generator(symbol)?;
    let atom = Atom::Gen {
        node_id: 0,
        symbol: gen.name.clone(),
        source: gen.source.clone(),
        target: gen.target.clone(),
    };
    LayeredDiagram::new(gen.source.clone(), vec![Slice { atoms: vec![atom] }])
}

/// Horizontal composition: `first` then `second`. Slices concatenate and node
/// identity is preserved.
pub fn compose(first: &LayeredDiagram, second: &LayeredDiagram) -> Result<LayeredDiagram, DiagramError> {
    if first.output != second.input {
        return Err(DiagramError::InterfaceMismatch {
            expected: first.output.clone(),
            found: second.input.clone(),
        });
    }
    let mut slices = first.slices.clone();
    slices.extend(second.slices.iter().cloned());
    LayeredDiagram::new(first.input.clone(), slices)
}

/// Vertical stacking: `top` above `bottom`. The shorter diagram is padded with
/// identity slices on the right.
pub fn tensor(top: &LayeredDiagram, bottom: &LayeredDiagram) -> LayeredDiagram {
    let len = top.slices.len().max(bottom.slices.len());
    let pad = |d: &LayeredDiagram, k: usize| -> Vec<Atom> {
        match d.slices.get(k) {
            Some(s) => s.atoms.clone(),
            None => d.output.iter().map(|l| Atom::Id(l.clone())).collect(),
        }
    };
    let mut slices = Vec::with_capacity(len);
    for k in 0..len {
        let mut atoms = pad(top, k);
        atoms.extend(pad(bottom, k));
        slices.push(Slice { atoms });
    }
    let mut input = top.input.clone();
    input.extend(bottom.input.iter().cloned());
    LayeredDiagram::new(input, slices).expect("stacked slices always match interfaces")
}

/// Predicted invariance class of a diagram shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PredictedClass {
    /// Connected and acyclic: preserved by every Frobenius monoidal functor.
    FrobeniusInvariant,
    /// Connected with cycles: preserved by separable Frobenius functors.
    SeparableOnly,
    /// Not connected: no preservation guarantee.
    NotGuaranteed,
}

/// Connectivity data of the underlying undirected graph of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub components: usize,
    pub betti1: usize,
    pub predicted_class: PredictedClass,
}

/// Compute connectivity of the underlying graph: vertices are generator nodes
/// plus one boundary port per input/output wire end, edges are wires.
pub fn topology(diagram: &LayeredDiagram) -> TopologyReport {
    let mut graph: UnGraph<(), ()> = UnGraph::new_undirected();
    // Open wire ends at the current interface, each tagged with the vertex it
    // originates from.
    let mut open: Vec<petgraph::graph::NodeIndex> = diagram
        .input_word()
        .iter()
        .map(|_| graph.add_node(()))
        .collect();
    for slice in diagram.slices() {
        let mut next = Vec::with_capacity(slice.target_word().len());
        let mut cursor = 0usize;
        for atom in &slice.atoms {
            match atom {
                Atom::Id(_) => {
                    next.push(open[cursor]);
                    cursor += 1;
                }
                Atom::Gen { source, target, .. } => {
                    let node = graph.add_node(());
                    for _ in 0..source.len() {
                        graph.add_edge(open[cursor], node, ());
                        cursor += 1;
                    }
                    for _ in 0..target.len() {
                        next.push(node);
                    }
                }
            }
        }
        open = next;
    }
    for origin in open {
        let port = graph.add_node(());
        graph.add_edge(origin, port, ());
    }
    let components = connected_components(&graph);
    let betti1 = graph.edge_count() + components - graph.node_count();
    let predicted_class = if components != 1 {
        PredictedClass::NotGuaranteed
    } else if betti1 == 0 {
        PredictedClass::FrobeniusInvariant
    } else {
        PredictedClass::SeparableOnly
    };
    TopologyReport { components, betti1, predicted_class }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frobenius_scheme() -> TensorScheme {
        TensorScheme::new(
            &["A"],
            vec![
                Generator::new("mu", &["A", "A"], &["A"]),
                Generator::new("eta", &[], &["A"]),
                Generator::new("delta", &["A"], &["A", "A"]),
                Generator::new("epsilon", &["A"], &[]),
                Generator::new("f", &["A"], &["A"]),
            ],
        )
    }

    pub(crate) fn barbell(scheme: &TensorScheme) -> LayeredDiagram {
        let eta = generator_diagram(scheme, "eta").unwrap();
        let eps = generator_diagram(scheme, "epsilon").unwrap();
        compose(&eta, &eps).unwrap()
    }

    pub(crate) fn bubble(scheme: &TensorScheme) -> LayeredDiagram {
        let delta = generator_diagram(scheme, "delta").unwrap();
        let mu = generator_diagram(scheme, "mu").unwrap();
        compose(&delta, &mu).unwrap()
    }

    #[test]
    fn scheme_validation() {
        let scheme = TensorScheme::new(&["A"], vec![Generator::new("f", &["A", "A"], &["A"])]);
        assert!(validate_scheme(&scheme).is_valid());

        let bad = TensorScheme::new(&["A"], vec![Generator::new("f", &["A", "B"], &["A"])]);
        let report = validate_scheme(&bad);
        assert_eq!(report.undeclared_labels, vec![("f".to_string(), "B".to_string())]);

        let dup = TensorScheme::new(
            &["A"],
            vec![
                Generator::new("f", &["A"], &["A"]),
                Generator::new("f", &["A", "A"], &["A"]),
            ],
        );
        let report = validate_scheme(&dup);
        assert_eq!(report.duplicate_symbols, vec!["f".to_string()]);
    }

    #[test]
    fn generator_diagram_shapes() {
        let scheme = frobenius_scheme();
        let mu = generator_diagram(&scheme, "mu").unwrap();
        assert_eq!(mu.input_word().len(), 2);
        assert_eq!(mu.output_word().len(), 1);
        assert_eq!(mu.node_count(), 1);

        let eta = generator_diagram(&scheme, "eta").unwrap();
        assert_eq!(eta.input_word().len(), 0);
        assert_eq!(eta.output_word().len(), 1);

        let eps = generator_diagram(&scheme, "epsilon").unwrap();
        assert_eq!(eps.input_word().len(), 1);
        assert_eq!(eps.output_word().len(), 0);

        assert!(matches!(
            generator_diagram(&scheme, "nope"),
            Err(DiagramError::UnknownSymbol(_))
        ));
    }

    #[test]
    fn barbell_composition_and_topology() {
        let scheme = frobenius_scheme();
        let d = barbell(&scheme);
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.slices().len(), 2);
        let t = topology(&d);
        assert_eq!(t.components, 1);
        assert_eq!(t.betti1, 0);
        assert_eq!(t.predicted_class, PredictedClass::FrobeniusInvariant);
    }

    #[test]
    fn composing_identity_appends_a_slice() {
        let scheme = frobenius_scheme();
        let f = generator_diagram(&scheme, "f").unwrap();
        let id = LayeredDiagram::identity(f.output_word());
        let fi = compose(&f, &id).unwrap();
        assert_eq!(fi.slices().len(), 2);
        assert!(fi.slices()[1].is_all_identity());
        assert_eq!(topology(&fi), topology(&f));
        assert_eq!(fi.strip_identity_slices(), f);
    }

    #[test]
    fn interface_mismatch_is_rejected() {
        let scheme = frobenius_scheme();
        let mu = generator_diagram(&scheme, "mu").unwrap();
        let eta = generator_diagram(&scheme, "eta").unwrap();
        assert!(matches!(
            compose(&mu, &eta),
            Err(DiagramError::InterfaceMismatch { .. })
        ));
    }

    #[test]
    fn bubble_topology() {
        let scheme = frobenius_scheme();
        let d = bubble(&scheme);
        // Two nodes plus one input and one output port; four wires.
        let t = topology(&d);
        assert_eq!(t.components, 1);
        assert_eq!(t.betti1, 1);
        assert_eq!(t.predicted_class, PredictedClass::SeparableOnly);
    }

    #[test]
    fn parallel_wires_are_disconnected() {
        let two = LayeredDiagram::identity(&["A".to_string(), "A".to_string()]);
        let t = topology(&two);
        assert_eq!(t.components, 2);
        assert_eq!(t.betti1, 0);
        assert_eq!(t.predicted_class, PredictedClass::NotGuaranteed);
    }

    #[test]
    fn tensored_barbells_topology() {
        let scheme = frobenius_scheme();
        let d = tensor(&barbell(&scheme), &barbell(&scheme));
        assert_eq!(d.node_count(), 4);
        let t = topology(&d);
        assert_eq!(t.components, 2);
        assert_eq!(t.predicted_class, PredictedClass::NotGuaranteed);
    }

    #[test]
    fn wire_next_to_barbell() {
        let scheme = frobenius_scheme();
        let f = generator_diagram(&scheme, "f").unwrap();
        let d = tensor(&f, &barbell(&scheme));
        let t = topology(&d);
        assert_eq!(t.components, 2);
        assert_eq!(t.betti1, 0);
    }

    #[test]
    fn component_count_is_additive_under_tensor() {
        let scheme = frobenius_scheme();
        let shapes = [
            barbell(&scheme),
            bubble(&scheme),
            generator_diagram(&scheme, "mu").unwrap(),
            LayeredDiagram::identity(&["A".to_string()]),
        ];
        for a in &shapes {
            for b in &shapes {
                let t = topology(&tensor(a, b));
                assert_eq!(t.components, topology(a).components + topology(b).components);
                assert_eq!(t.betti1, topology(a).betti1 + topology(b).betti1);
            }
        }
    }

    #[test]
    fn node_ids_stable_under_composition() {
        let scheme = frobenius_scheme();
        let delta = generator_diagram(&scheme, "delta").unwrap();
        let mu = generator_diagram(&scheme, "mu").unwrap();
        let d = compose(&delta, &mu).unwrap();
        assert_eq!(d.node_ids(), vec![0, 1]);
        let d2 = compose(&d, &generator_diagram(&scheme, "f").unwrap()).unwrap();
        assert_eq!(d2.node_ids(), vec![0, 1, 2]);
    }

    #[test]
    fn nullary_generator_adds_a_component() {
        let scheme = TensorScheme::new(&["A"], vec![Generator::new("blob", &[], &[])]);
        let blob = generator_diagram(&scheme, "blob").unwrap();
        let t = topology(&blob);
        assert_eq!(t.components, 1);
        let beside = tensor(&blob, &LayeredDiagram::identity(&["A".to_string()]));
        assert_eq!(topology(&beside).components, 2);
    }

    #[test]
    fn exchange_of_independent_atoms_preserves_topology() {
        let scheme = frobenius_scheme();
        // f on the top wire in slice 1, mu on the two lower wires in slice 2.
        let f = generator_diagram(&scheme, "f").unwrap();
        let top = tensor(
            &f,
            &LayeredDiagram::identity(&["A".to_string(), "A".to_string()]),
        );
        let mu_low = tensor(
            &LayeredDiagram::identity(&["A".to_string()]),
            &generator_diagram(&scheme, "mu").unwrap(),
        );
        let d = compose(&top, &mu_low).unwrap();
        let swapped = d.exchange_adjacent(0, 1).expect("atoms share no wire");
        assert_ne!(swapped, d);
        assert_eq!(topology(&swapped), topology(&d));
        // Exchanging atoms that do share a wire is refused.
        let bubble = bubble(&scheme);
        assert!(bubble.exchange_adjacent(0, 0).is_none());
    }

    #[test]
    fn compose_is_associative() {
        let scheme = frobenius_scheme();
        let f = generator_diagram(&scheme, "f").unwrap();
        let a = compose(&compose(&f, &f).unwrap(), &f).unwrap();
        let b = compose(&f, &compose(&f, &f).unwrap()).unwrap();
        assert_eq!(a, b);
        let t1 = tensor(&tensor(&f, &barbell(&scheme)), &f);
        let t2 = tensor(&f, &tensor(&barbell(&scheme), &f));
        assert_eq!(
            t1.strip_identity_slices(),
            t2.strip_identity_slices()
        );
    }
}
