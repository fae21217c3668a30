//! d-separation, path predicates, inducing paths and the back-door
//! ignorability check.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::set::{VertexId, VertexSet};

/// A simple path: distinct vertices, consecutive ones adjacent in the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
}

impl Path {
    pub fn new(g: &Dag, vertices: Vec<VertexId>) -> Result<Path> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least two vertices".into()));
        }
        let distinct: VertexSet = vertices.iter().copied().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidArgument("a path may not repeat vertices".into()));
        }
        for w in vertices.windows(2) {
            if !g.adjacent(w[0], w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "`{}` and `{}` are not adjacent",
                    g.name(w[0]),
                    g.name(w[1])
                )));
            }
        }
        Ok(Path { vertices })
    }

    pub fn from_names<S: AsRef<str>>(g: &Dag, names: &[S]) -> Result<Path> {
        let ids = names
            .iter()
            .map(|n| g.id(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Path::new(g, ids)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn last(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    // Assumes a valid interior index.
    pub(crate) fn collider_at(&self, g: &Dag, index: usize) -> bool {
        let v = self.vertices[index];
        g.has_edge(self.vertices[index - 1], v) && g.has_edge(self.vertices[index + 1], v)
    }
}

/// Whether the interior vertex at `index` has both path neighbours pointing into it.
pub fn is_collider(g: &Dag, path: &Path, index: usize) -> Result<bool> {
    if index == 0 || index + 1 >= path.len() {
        return Err(Error::InvalidArgument(format!(
            "index {index} is not an interior position of a path of length {}",
            path.len()
        )));
    }
    Ok(path.collider_at(g, index))
}

/// Whether `path` is d-connecting given `given`: no conditioned non-collider,
/// and every collider in `given` or an ancestor of a member of `given`.
pub fn path_d_connects(g: &Dag, path: &Path, given: &VertexSet) -> Result<bool> {
    if given.contains(path.first()) || given.contains(path.last()) {
        return Err(Error::InvalidArgument(
            "path endpoints may not be in the conditioning set".into(),
        ));
    }
    let an_given = g.ancestors(given);
    Ok(path_open(g, path, given, &an_given))
}

pub(crate) fn path_open(g: &Dag, path: &Path, given: &VertexSet, an_given: &VertexSet) -> bool {
    (1..path.len() - 1).all(|i| {
        let v = path.vertices[i];
        if path.collider_at(g, i) {
            an_given.contains(v)
        } else {
            !given.contains(v)
        }
    })
}

fn require_disjoint(g: &Dag, sets: &[&VertexSet]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            let common = a.intersection(b);
            if !common.is_empty() {
                return Err(Error::OverlappingSets(g.names_of(&common)));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    /// Arrived from a child, or a start vertex.
    Up,
    /// Arrived from a parent.
    Down,
}

/// All vertices d-connected to some member of `xs` given `given`, including
/// `xs` itself. `xs` and `given` must be disjoint.
pub fn d_connected_set(g: &Dag, xs: &VertexSet, given: &VertexSet) -> VertexSet {
    let an_given = g.ancestors(given);
    let mut seen_up = VertexSet::new();
    let mut seen_down = VertexSet::new();
    let mut reachable = VertexSet::new();
    let mut queue: VecDeque<(VertexId, Dir)> = xs.iter().map(|x| (x, Dir::Up)).collect();

    while let Some((v, dir)) = queue.pop_front() {
        let fresh = match dir {
            Dir::Up => seen_up.insert(v),
            Dir::Down => seen_down.insert(v),
        };
        if !fresh {
            continue;
        }
        let conditioned = given.contains(v);
        if !conditioned {
            reachable.insert(v);
        }
        match dir {
            Dir::Up if !conditioned => {
                queue.extend(g.parents(v).iter().map(|&p| (p, Dir::Up)));
                queue.extend(g.children(v).iter().map(|&c| (c, Dir::Down)));
            }
            Dir::Up => {}
            Dir::Down => {
                if !conditioned {
                    queue.extend(g.children(v).iter().map(|&c| (c, Dir::Down)));
                }
                if an_given.contains(v) {
                    queue.extend(g.parents(v).iter().map(|&p| (p, Dir::Up)));
                }
            }
        }
    }
    reachable
}

/// True iff no path between a member of `xs` and a member of `ys` is
/// d-connecting given `given`. The three sets must be pairwise disjoint.
pub fn d_separated(g: &Dag, xs: &VertexSet, ys: &VertexSet, given: &VertexSet) -> Result<bool> {
    require_disjoint(g, &[xs, ys, given])?;
    if xs.is_empty() || ys.is_empty() {
        return Ok(true);
    }
    Ok(d_connected_set(g, xs, given).is_disjoint(ys))
}

/// Whether adjusting for `c` renders the treatment ignorable: the treatment
/// and outcome are d-separated by `c` once edges out of the treatment are
/// removed. `c` must be pre-treatment.
pub fn ignorability_oracle(g: &Dag, c: &VertexSet) -> Result<bool> {
    g.require_pretreatment(c)?;
    Ok(backdoor_blocked(&g.mutilate_backdoor(), g, c))
}

pub(crate) fn backdoor_blocked(mutilated: &Dag, g: &Dag, c: &VertexSet) -> bool {
    !d_connected_set(mutilated, &VertexSet::singleton(g.treatment()), c).contains(g.outcome())
}

/// Whether some path between `u` and `v` has every interior vertex outside
/// `l` be a collider that is an ancestor of `u` or `v`.
///
/// Computed through the equivalent separation statement: such a path exists
/// iff `u` and `v` stay d-connected given `An({u, v}) \ (l ∪ {u, v})`.
pub fn inducing_path_exists(g: &Dag, u: VertexId, v: VertexId, l: &VertexSet) -> Result<bool> {
    if u == v {
        return Err(Error::InvalidArgument(format!(
            "inducing paths need two distinct endpoints, got `{}` twice",
            g.name(u)
        )));
    }
    if l.contains(u) || l.contains(v) {
        return Err(Error::InvalidArgument(
            "inducing-path endpoints may not belong to the latent set".into(),
        ));
    }
    let mut ends = VertexSet::singleton(u);
    ends.insert(v);
    let separator = g.ancestors(&ends).difference(l).difference(&ends);
    Ok(d_connected_set(g, &VertexSet::singleton(u), &separator).contains(v))
}
