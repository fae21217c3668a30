//! Causal DAGs with a designated treatment and outcome.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::set::{VertexId, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Treatment,
    Outcome,
    Covariate,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Treatment => "treatment",
            Role::Outcome => "outcome",
            Role::Covariate => "covariate",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Returns true for names matching `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, Default)]
pub struct DagBuilder {
    nodes: Vec<(String, Role, bool)>,
    edges: Vec<(String, String)>,
}

impl DagBuilder {
    pub fn node(mut self, name: impl Into<String>, role: Role, latent: bool) -> Self {
        self.nodes.push((name.into(), role, latent));
        self
    }

    pub fn treatment(self, name: impl Into<String>) -> Self {
        self.node(name, Role::Treatment, false)
    }

    pub fn outcome(self, name: impl Into<String>) -> Self {
        self.node(name, Role::Outcome, false)
    }

    pub fn covariate(self, name: impl Into<String>) -> Self {
        self.node(name, Role::Covariate, false)
    }

    pub fn latent(self, name: impl Into<String>) -> Self {
        self.node(name, Role::Covariate, true)
    }

    pub fn edge(mut self, src: impl Into<String>, dst: impl Into<String>) -> Self {
        self.edges.push((src.into(), dst.into()));
        self
    }

    pub fn edges<I, S, T>(mut self, edges: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        self.edges
            .extend(edges.into_iter().map(|(s, t)| (s.into(), t.into())));
        self
    }

    pub fn build(self) -> Result<Dag> {
        let mut sorted: Vec<&(String, Role, bool)> = self.nodes.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));

        let mut names = Vec::with_capacity(sorted.len());
        let mut index = HashMap::with_capacity(sorted.len());
        let mut treatment = None;
        let mut outcome = None;
        let mut latent = VertexSet::new();
        for (i, (name, role, is_latent)) in sorted.into_iter().enumerate() {
            if !is_valid_identifier(name) {
                return Err(Error::InvalidGraph(format!("invalid vertex name `{name}`")));
            }
            let id = VertexId(i);
            if index.insert(name.clone(), id).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{name}`")));
            }
            names.push(name.clone());
            let slot = match role {
                Role::Treatment => &mut treatment,
                Role::Outcome => &mut outcome,
                Role::Covariate => {
                    if *is_latent {
                        latent.insert(id);
                    }
                    continue;
                }
            };
            if *is_latent {
                return Err(Error::InvalidGraph(format!(
                    "{role} `{name}` cannot be latent"
                )));
            }
            if slot.replace(id).is_some() {
                return Err(Error::InvalidGraph(format!("more than one {role} vertex")));
            }
        }
        let treatment =
            treatment.ok_or_else(|| Error::InvalidGraph("no treatment vertex".into()))?;
        let outcome = outcome.ok_or_else(|| Error::InvalidGraph("no outcome vertex".into()))?;

        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        for (src, dst) in &self.edges {
            let (s, d) = (lookup(src)?, lookup(dst)?);
            if s == d {
                return Err(Error::InvalidGraph(format!("self-loop on `{src}`")));
            }
            if children[s.0].contains(&d) {
                return Err(Error::InvalidGraph(format!("duplicate edge {src} -> {dst}")));
            }
            children[s.0].push(d);
            parents[d.0].push(s);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort_unstable();
        }

        let topo = topological_order(&parents, &children).ok_or_else(|| {
            Error::InvalidGraph("edge relation contains a directed cycle".into())
        })?;

        let dag = Dag {
            names,
            index,
            parents,
            children,
            treatment,
            outcome,
            latent,
            topo,
        };
        if dag.ancestors(&VertexSet::singleton(treatment)).contains(outcome) {
            return Err(Error::InvalidGraph(format!(
                "outcome `{}` is an ancestor of treatment `{}`",
                dag.name(outcome),
                dag.name(treatment)
            )));
        }
        Ok(dag)
    }
}

/// Kahn's algorithm, smallest index first among ready vertices.
fn topological_order(parents: &[Vec<VertexId>], children: &[Vec<VertexId>]) -> Option<Vec<VertexId>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| indegree[v] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(v)) = ready.pop() {
        order.push(VertexId(v));
        for c in &children[v] {
            indegree[c.0] -= 1;
            if indegree[c.0] == 0 {
                ready.push(std::cmp::Reverse(c.0));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Immutable causal DAG. Vertex indices follow byte-wise name order.
#[derive(Debug, Clone)]
pub struct Dag {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    parents: Vec<Vec<VertexId>>,
    children: Vec<Vec<VertexId>>,
    treatment: VertexId,
    outcome: VertexId,
    latent: VertexSet,
    topo: Vec<VertexId>,
}

impl PartialEq for Dag {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.children == other.children
            && self.treatment == other.treatment
            && self.outcome == other.outcome
            && self.latent == other.latent
    }
}

impl Eq for Dag {}

impl Dag {
    pub fn builder() -> DagBuilder {
        DagBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn id(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn set<I, S>(&self, names: I) -> Result<VertexSet>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().map(|n| self.id(n.as_ref())).collect()
    }

    /// Member names in canonical order.
    pub fn names_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|v| self.names[v.0].clone()).collect()
    }

    pub fn treatment(&self) -> VertexId {
        self.treatment
    }

    pub fn outcome(&self) -> VertexId {
        self.outcome
    }

    pub fn role(&self, v: VertexId) -> Role {
        if v == self.treatment {
            Role::Treatment
        } else if v == self.outcome {
            Role::Outcome
        } else {
            Role::Covariate
        }
    }

    pub fn is_latent(&self, v: VertexId) -> bool {
        self.latent.contains(v)
    }

    pub fn latent(&self) -> &VertexSet {
        &self.latent
    }

    pub fn observed(&self) -> VertexSet {
        self.all().difference(&self.latent)
    }

    /// Every vertex other than the treatment and outcome.
    pub fn covariates(&self) -> VertexSet {
        let mut s = self.all();
        s.remove(self.treatment);
        s.remove(self.outcome);
        s
    }

    pub fn observed_covariates(&self) -> VertexSet {
        self.covariates().difference(&self.latent)
    }

    /// Covariates that are not descendants of the treatment.
    pub fn pretreatment_covariates(&self) -> VertexSet {
        self.covariates()
            .difference(&self.descendants(&VertexSet::singleton(self.treatment)))
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.parents[v.0]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v.0]
    }

    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.children[src.0].binary_search(&dst).is_ok()
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Edges in canonical (source, destination) order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(s, cs)| cs.iter().map(move |&d| (VertexId(s), d)))
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn topological_order(&self) -> &[VertexId] {
        &self.topo
    }

    /// Reflexive ancestors of `seed`.
    pub fn ancestors(&self, seed: &VertexSet) -> VertexSet {
        self.closure_along(seed, |v| &self.parents[v.0])
    }

    /// Reflexive descendants of `seed`.
    pub fn descendants(&self, seed: &VertexSet) -> VertexSet {
        self.closure_along(seed, |v| &self.children[v.0])
    }

    pub fn nondescendants(&self, seed: &VertexSet) -> VertexSet {
        self.all().difference(&self.descendants(seed))
    }

    fn closure_along<'a>(
        &'a self,
        seed: &VertexSet,
        next: impl Fn(VertexId) -> &'a [VertexId],
    ) -> VertexSet {
        let mut seen = seed.clone();
        let mut stack = seed.to_vec();
        while let Some(v) = stack.pop() {
            for &u in next(v) {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Copy of the graph with every edge out of the treatment deleted.
    pub fn mutilate_backdoor(&self) -> Dag {
        let mut g = self.clone();
        for c in std::mem::take(&mut g.children[self.treatment.0]) {
            g.parents[c.0].retain(|&p| p != self.treatment);
        }
        g
    }

    /// Splits the treatment into a random part and a fixed part.
    pub fn make_swig(&self) -> Swig {
        Swig::new(self)
    }

    /// Common ancestors `u` of `v1` and `v2` (excluding both) that reach `v1`
    /// or `v2` along a directed path avoiding every other common ancestor.
    /// The terminal vertex of the path counts as lying on it.
    pub fn nontrivial_common_ancestors(&self, v1: VertexId, v2: VertexId) -> Result<VertexSet> {
        if v1 == v2 {
            return Err(Error::InvalidArgument(format!(
                "non-trivial common ancestors need two distinct vertices, got `{}` twice",
                self.name(v1)
            )));
        }
        Ok(self.nontrivial_common_ancestors_unchecked(v1, v2))
    }

    fn nontrivial_common_ancestors_unchecked(&self, v1: VertexId, v2: VertexId) -> VertexSet {
        let common = self
            .ancestors(&VertexSet::singleton(v1))
            .intersection(&self.ancestors(&VertexSet::singleton(v2)));
        let mut out = VertexSet::new();
        for u in &common {
            if u == v1 || u == v2 {
                continue;
            }
            // Directed search from u that never steps onto another common ancestor.
            let mut seen = VertexSet::singleton(u);
            let mut stack = vec![u];
            let mut reached = false;
            'search: while let Some(w) = stack.pop() {
                for &c in self.children(w) {
                    if common.contains(c) || !seen.insert(c) {
                        continue;
                    }
                    if c == v1 || c == v2 {
                        reached = true;
                        break 'search;
                    }
                    stack.push(c);
                }
            }
            if reached {
                out.insert(u);
            }
        }
        out
    }

    pub fn is_causally_closed(&self, h: &VertexSet) -> bool {
        let members = h.to_vec();
        members.iter().enumerate().all(|(i, &a)| {
            members[i + 1..]
                .iter()
                .all(|&b| self.nontrivial_common_ancestors_unchecked(a, b).is_subset(h))
        })
    }

    /// Smallest causally closed superset of `h`, by fixpoint augmentation.
    pub fn causal_closure(&self, h: &VertexSet) -> VertexSet {
        let mut current = h.clone();
        loop {
            let members = current.to_vec();
            let mut next = current.clone();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    next.union_with(&self.nontrivial_common_ancestors_unchecked(a, b));
                }
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }

    /// The causal closure of `s ∪ {treatment, outcome}` minus the treatment and outcome.
    pub fn relevant_pretreatment(&self, s: &VertexSet) -> Result<VertexSet> {
        self.require_pretreatment(s)?;
        let mut h = s.clone();
        h.insert(self.treatment);
        h.insert(self.outcome);
        let mut z = self.causal_closure(&h);
        z.remove(self.treatment);
        z.remove(self.outcome);
        debug_assert!(
            z.is_disjoint(&self.proper_descendants_of_treatment()),
            "closure picked up a descendant of the treatment"
        );
        Ok(z)
    }

    pub(crate) fn proper_descendants_of_treatment(&self) -> VertexSet {
        let mut de = self.descendants(&VertexSet::singleton(self.treatment));
        de.remove(self.treatment);
        de
    }

    /// Rejects sets containing the treatment, the outcome, or a descendant of the treatment.
    pub(crate) fn require_pretreatment(&self, c: &VertexSet) -> Result<()> {
        if c.contains(self.treatment) || c.contains(self.outcome) {
            return Err(Error::InvalidArgument(
                "covariate set may not contain the treatment or the outcome".into(),
            ));
        }
        let post = c.intersection(&self.proper_descendants_of_treatment());
        if !post.is_empty() {
            return Err(Error::PostTreatment(self.names_of(&post)));
        }
        Ok(())
    }
}

/// Single-world intervention graph: the treatment split into a random part
/// keeping its incoming edges and a fixed part carrying its outgoing edges.
#[derive(Debug, Clone)]
pub struct Swig {
    base: Dag,
    graph: Dag,
    fixed: String,
    relabeled: BTreeMap<String, String>,
}

impl Swig {
    fn new(base: &Dag) -> Swig {
        let treatment = base.name(base.treatment).to_string();
        let mut fixed = treatment.to_lowercase();
        while fixed == treatment || base.index.contains_key(&fixed) {
            fixed.push_str("_fixed");
        }

        let mut builder = Dag::builder().covariate(fixed.clone());
        for v in base.vertices() {
            builder = builder.node(base.name(v), base.role(v), base.is_latent(v));
        }
        for (s, d) in base.edges() {
            let src = if s == base.treatment {
                fixed.as_str()
            } else {
                base.name(s)
            };
            builder = builder.edge(src, base.name(d));
        }
        let graph = builder
            .build()
            .expect("splitting a valid DAG at its treatment yields a valid DAG");

        let mut de = base.descendants(&VertexSet::singleton(base.treatment));
        de.remove(base.treatment);
        let relabeled = de
            .iter()
            .map(|v| (base.name(v).to_string(), format!("{}({fixed})", base.name(v))))
            .collect();

        Swig {
            base: base.clone(),
            graph,
            fixed,
            relabeled,
        }
    }

    pub fn base(&self) -> &Dag {
        &self.base
    }

    /// The split graph as a DAG; the fixed part is an extra parentless covariate.
    pub fn graph(&self) -> &Dag {
        &self.graph
    }

    pub fn random_part(&self) -> &str {
        self.base.name(self.base.treatment)
    }

    pub fn fixed_part(&self) -> &str {
        &self.fixed
    }

    /// Counterfactual labels of the proper descendants of the treatment.
    pub fn relabeled(&self) -> &BTreeMap<String, String> {
        &self.relabeled
    }

    /// Display label of a base vertex in the split graph.
    pub fn label<'a>(&'a self, name: &'a str) -> &'a str {
        self.relabeled.get(name).map_or(name, String::as_str)
    }
}

/// Breadth-first shortest directed path, used for diagnostics.
pub fn directed_path(g: &Dag, from: VertexId, to: VertexId) -> Option<Vec<VertexId>> {
    let mut prev = vec![None; g.len()];
    let mut queue = VecDeque::from([from]);
    let mut seen = VertexSet::singleton(from);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while let Some(p) = prev[cur.0] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &c in g.children(v) {
            if seen.insert(c) {
                prev[c.0] = Some(v);
                queue.push_back(c);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &Dag, s: &VertexSet) -> Vec<String> {
        g.names_of(s)
    }

    fn chain_zxy() -> Dag {
        Dag::builder()
            .covariate("Z")
            .treatment("X")
            .outcome("Y")
            .edge("Z", "X")
            .edge("X", "Y")
            .build()
            .unwrap()
    }

    #[test]
    fn ancestors_examples() {
        let gc = fixtures::gc();
        let an = gc.ancestors(&gc.set(["S1"]).unwrap());
        assert_eq!(names(&gc, &an), ["S1", "Z1", "Z3", "Z4"]);

        let ga = fixtures::ga();
        let an = ga.ancestors(&ga.set(["Y"]).unwrap());
        assert_eq!(names(&ga, &an), ["A", "U1", "U2", "Y"]);
        assert!(ga.ancestors(&VertexSet::new()).is_empty());
    }

    #[test]
    fn descendants_examples() {
        let ga = fixtures::ga();
        let u1 = ga.set(["U1"]).unwrap();
        assert_eq!(names(&ga, &ga.descendants(&u1)), ["A", "L", "U1", "Y"]);
        assert_eq!(names(&ga, &ga.nondescendants(&u1)), ["U2"]);
        let gb = fixtures::gb();
        assert_eq!(names(&gb, &gb.descendants(&gb.set(["Y"]).unwrap())), ["Y"]);
    }

    #[test]
    fn unknown_vertex_is_reported() {
        let ga = fixtures::ga();
        assert!(matches!(ga.set(["Q"]), Err(Error::UnknownVertex(n)) if n == "Q"));
    }

    #[test]
    fn builder_rejects_malformed_graphs() {
        let base = || Dag::builder().treatment("A").outcome("Y");
        assert!(base().edge("A", "A").build().is_err());
        assert!(base().edge("A", "Y").edge("A", "Y").build().is_err());
        assert!(base().covariate("L").edge("A", "L").edge("L", "Y").edge("Y", "A").build().is_err());
        assert!(base().edge("Y", "A").build().is_err(), "outcome ancestor of treatment");
        assert!(base().treatment("B").build().is_err());
        assert!(Dag::builder().treatment("A").build().is_err());
        assert!(base().covariate("9x").build().is_err());
        assert!(base().covariate("A").build().is_err());
        assert!(Dag::builder().node("A", Role::Treatment, true).outcome("Y").build().is_err());
        assert!(matches!(base().edge("A", "Q").build(), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn mutilation_removes_only_treatment_out_edges() {
        let ga = fixtures::ga();
        let m = ga.mutilate_backdoor();
        assert_eq!(m.edge_count(), ga.edge_count() - 1);
        assert!(!m.has_edge(ga.treatment(), ga.outcome()));
        assert_eq!(m.treatment(), ga.treatment());
        assert_eq!(m.latent(), ga.latent());
        // fixpoint
        assert_eq!(m.mutilate_backdoor(), m);
    }

    #[test]
    fn swig_of_ga() {
        let ga = fixtures::ga();
        let swig = ga.make_swig();
        assert_eq!(swig.random_part(), "A");
        assert_eq!(swig.fixed_part(), "a");
        let g = swig.graph();
        let (a, fixed, u1, y) = (g.id("A").unwrap(), g.id("a").unwrap(), g.id("U1").unwrap(), g.id("Y").unwrap());
        assert_eq!(g.parents(a), [u1]);
        assert!(g.children(a).is_empty());
        assert!(g.parents(fixed).is_empty());
        assert_eq!(g.children(fixed), [y]);
        assert_eq!(swig.relabeled().len(), 1);
        assert_eq!(swig.label("Y"), "Y(a)");
        assert_eq!(swig.label("L"), "L");
        assert_eq!(g.edge_count(), ga.edge_count());
    }

    #[test]
    fn swig_of_minimal_graph() {
        let g = Dag::builder().treatment("A").outcome("Y").edge("A", "Y").build().unwrap();
        let swig = g.make_swig();
        let sg = swig.graph();
        let a = sg.id("A").unwrap();
        assert!(sg.parents(a).is_empty() && sg.children(a).is_empty());
        assert!(sg.has_edge(sg.id("a").unwrap(), sg.id("Y").unwrap()));
        let gb = fixtures::gb();
        assert_eq!(
            gb.make_swig().relabeled().iter().collect::<Vec<_>>(),
            [(&"Y".to_string(), &"Y(a)".to_string())]
        );
    }

    #[test]
    fn swig_fixed_name_avoids_collisions() {
        let g = Dag::builder()
            .treatment("A")
            .outcome("Y")
            .covariate("a")
            .edge("a", "A")
            .edge("A", "Y")
            .build()
            .unwrap();
        assert_eq!(g.make_swig().fixed_part(), "a_fixed");
    }

    #[test]
    fn nontrivial_common_ancestors_examples() {
        let gc = fixtures::gc();
        let (s1, s2) = (gc.id("S1").unwrap(), gc.id("S2").unwrap());
        assert_eq!(names(&gc, &gc.nontrivial_common_ancestors(s1, s2).unwrap()), ["Z1", "Z3"]);

        let chain = chain_zxy();
        let (x, y) = (chain.id("X").unwrap(), chain.id("Y").unwrap());
        assert!(chain.nontrivial_common_ancestors(x, y).unwrap().is_empty());

        let ay = gc.nontrivial_common_ancestors(gc.treatment(), gc.outcome()).unwrap();
        assert!(!ay.contains(gc.id("Z2").unwrap()));
        assert_eq!(names(&gc, &ay), ["S1", "S2"]);

        assert!(gc.nontrivial_common_ancestors(s1, s1).is_err());
    }

    #[test]
    fn causal_closure_examples() {
        let gc = fixtures::gc();
        let h = gc.set(["S1", "S2", "A", "Y"]).unwrap();
        assert!(!gc.is_causally_closed(&h));
        let closed = gc.causal_closure(&h);
        assert_eq!(names(&gc, &closed), ["A", "S1", "S2", "Y", "Z1", "Z3"]);
        assert!(gc.is_causally_closed(&closed));
        assert!(gc.is_causally_closed(&gc.all()));
        assert_eq!(gc.causal_closure(&gc.all()), gc.all());

        let chain = chain_zxy();
        let xy = chain.set(["X", "Y"]).unwrap();
        assert_eq!(chain.causal_closure(&xy), xy);
    }

    #[test]
    fn relevant_pretreatment_examples() {
        let gc = fixtures::gc();
        let z = gc.relevant_pretreatment(&gc.set(["S1", "S2"]).unwrap()).unwrap();
        assert_eq!(names(&gc, &z), ["S1", "S2", "Z1", "Z3"]);

        let gb = fixtures::gb();
        let s = gb.set(["X1", "X2"]).unwrap();
        assert_eq!(gb.relevant_pretreatment(&s).unwrap(), s);

        let lone = Dag::builder().treatment("A").outcome("Y").covariate("W").edge("A", "Y").build().unwrap();
        assert!(lone.relevant_pretreatment(&VertexSet::new()).unwrap().is_empty());
        assert!(lone.relevant_pretreatment(&lone.set(["A"]).unwrap()).is_err());
    }

    #[test]
    fn directed_path_finds_shortest() {
        let gc = fixtures::gc();
        let p = directed_path(&gc, gc.id("Z3").unwrap(), gc.id("A").unwrap()).unwrap();
        assert_eq!(p.len(), 4);
        assert!(directed_path(&gc, gc.id("A").unwrap(), gc.id("Z3").unwrap()).is_none());
    }
}
