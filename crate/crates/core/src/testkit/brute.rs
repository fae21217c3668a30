//! Brute-force reference implementations. Each works straight from the
//! path-level definitions and shares no code with the production routines
//! it is compared against.

use crate::blanket::{BoundaryKind, CiOracle};
use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::set::{subsets, VertexId, VertexSet};

/// Largest graph or candidate set the brute-force routines accept by default.
pub const DEFAULT_CAP: usize = 12;

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::CapExceeded { what, size, cap });
    }
    Ok(())
}

fn neighbours(g: &Dag, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
    g.parents(v).iter().chain(g.children(v)).copied()
}

/// Bitmask of strict descendants of every vertex, by plain DFS.
fn descendant_masks(g: &Dag) -> Vec<u64> {
    g.vertices()
        .map(|v| {
            let mut seen = 0u64;
            let mut stack = vec![v];
            while let Some(w) = stack.pop() {
                for &c in g.children(w) {
                    if seen & 1 << c.0 == 0 {
                        seen |= 1 << c.0;
                        stack.push(c);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Calls `visit` on every simple path from `from` to `to`.
pub fn for_each_simple_path(g: &Dag, from: VertexId, to: VertexId, mut visit: impl FnMut(&[VertexId])) {
    fn go(g: &Dag, path: &mut Vec<VertexId>, on_path: &mut u64, to: VertexId, visit: &mut dyn FnMut(&[VertexId])) {
        let last = *path.last().expect("non-empty");
        if last == to {
            visit(path);
            return;
        }
        for n in neighbours(g, last) {
            if *on_path & 1 << n.0 == 0 {
                *on_path |= 1 << n.0;
                path.push(n);
                go(g, path, on_path, to, visit);
                path.pop();
                *on_path &= !(1 << n.0);
            }
        }
    }
    if from == to {
        return;
    }
    let mut path = vec![from];
    let mut on_path = 1u64 << from.0;
    go(g, &mut path, &mut on_path, to, &mut visit);
}

/// For one path: conditioning sets that open it are exactly those disjoint
/// from `blocking` and meeting every mask in `needs`.
struct PathCondition {
    blocking: u64,
    needs: Vec<u64>,
}

impl PathCondition {
    fn of(g: &Dag, path: &[VertexId], desc: &[u64]) -> Self {
        let mut blocking = 0;
        let mut needs = Vec::new();
        for i in 1..path.len() - 1 {
            let v = path[i];
            let collider = g.has_edge(path[i - 1], v) && g.has_edge(path[i + 1], v);
            if collider {
                needs.push(desc[v.0] | 1 << v.0);
            } else {
                blocking |= 1 << v.0;
            }
        }
        PathCondition { blocking, needs }
    }

    fn open(&self, given: u64) -> bool {
        given & self.blocking == 0 && self.needs.iter().all(|m| given & m != 0)
    }
}

fn to_mask(s: &VertexSet) -> u64 {
    s.to_mask()
}

/// d-separation by enumerating every simple path between the two sets and
/// testing each against the d-connection definition.
pub fn dsep_bruteforce(g: &Dag, xs: &VertexSet, ys: &VertexSet, given: &VertexSet) -> Result<bool> {
    dsep_bruteforce_capped(g, xs, ys, given, DEFAULT_CAP)
}

pub fn dsep_bruteforce_capped(g: &Dag, xs: &VertexSet, ys: &VertexSet, given: &VertexSet, cap: usize) -> Result<bool> {
    check_cap("graph", g.len(), cap)?;
    if !xs.is_disjoint(ys) || !xs.is_disjoint(given) || !ys.is_disjoint(given) {
        return Err(Error::InvalidArgument("query sets must be pairwise disjoint".into()));
    }
    let desc = descendant_masks(g);
    let z = to_mask(given);
    for x in xs {
        for y in ys {
            let mut connected = false;
            for_each_simple_path(g, x, y, |p| {
                connected = connected || PathCondition::of(g, p, &desc).open(z);
            });
            if connected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Path-enumeration d-separation for every vertex pair and every
/// conditioning set at once, for sweeping all queries on a small graph.
pub struct DsepTable {
    n: usize,
    /// `connected[pair(x, y)]` is a bitmap over conditioning masks.
    connected: Vec<Vec<u64>>,
}

impl DsepTable {
    pub fn new(g: &Dag, cap: usize) -> Result<Self> {
        check_cap("graph", g.len(), cap.min(16))?;
        let n = g.len();
        let desc = descendant_masks(g);
        let words = (1usize << n).div_ceil(64);
        let mut connected = vec![vec![0u64; words]; n * n];
        for x in 0..n {
            for y in x + 1..n {
                let mut conditions = Vec::new();
                for_each_simple_path(g, VertexId(x), VertexId(y), |p| {
                    conditions.push(PathCondition::of(g, p, &desc));
                });
                let ends = 1u64 << x | 1 << y;
                let bits = &mut connected[x * n + y];
                for z in 0..1u64 << n {
                    if z & ends == 0 && conditions.iter().any(|c| c.open(z)) {
                        bits[(z / 64) as usize] |= 1 << (z % 64);
                    }
                }
                connected[y * n + x] = bits.clone();
            }
        }
        Ok(DsepTable { n, connected })
    }

    pub fn pair_connected(&self, x: usize, y: usize, given: u64) -> bool {
        self.connected[x * self.n + y][(given / 64) as usize] >> (given % 64) & 1 == 1
    }

    /// Set-level separation from the pairwise table; masks must be disjoint.
    pub fn separated(&self, xs: u64, ys: u64, given: u64) -> bool {
        bits(xs).all(|x| bits(ys).all(|y| !self.pair_connected(x, y, given)))
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// Whether some path between `u` and `v` is inducing relative to `l`: every
/// interior vertex outside `l` is a collider, and every collider (in `l` or
/// not) is an ancestor of `u` or `v`.
pub fn inducing_path_bruteforce(g: &Dag, u: VertexId, v: VertexId, l: &VertexSet) -> Result<bool> {
    check_cap("graph", g.len(), DEFAULT_CAP)?;
    let desc = descendant_masks(g);
    let ancestral = |w: VertexId| desc[w.0] & (1 << u.0 | 1 << v.0) != 0;
    let mut found = false;
    for_each_simple_path(g, u, v, |p| {
        found = found
            || (1..p.len() - 1).all(|i| {
                let w = p[i];
                if g.has_edge(p[i - 1], w) && g.has_edge(p[i + 1], w) {
                    ancestral(w)
                } else {
                    l.contains(w)
                }
            });
    });
    Ok(found)
}

/// Whether no subset of `V \ (l ∪ {u, v})` d-separates `u` and `v`.
pub fn inseparable_bruteforce(table: &DsepTable, g: &Dag, u: VertexId, v: VertexId, l: &VertexSet) -> bool {
    let mut pool = g.all().difference(l);
    pool.remove(u);
    pool.remove(v);
    let inseparable = subsets(&pool).all(|z| table.pair_connected(u.0, v.0, z.to_mask()));
    inseparable
}

/// `u ∈ An*(a, b)` straight from the definition, by enumerating directed paths.
fn nontrivial_common_ancestors(g: &Dag, desc: &[u64], a: VertexId, b: VertexId) -> u64 {
    let anc = |t: VertexId| -> u64 {
        (0..g.len()).filter(|&w| w == t.0 || desc[w] >> t.0 & 1 == 1).fold(0, |m, w| m | 1 << w)
    };
    let common = anc(a) & anc(b);
    let mut out = 0;
    for u in bits(common) {
        if u == a.0 || u == b.0 {
            continue;
        }
        let forbidden = common & !(1 << u);
        // Directed paths from u whose later vertices avoid `forbidden`; the
        // path may only end at a or b.
        let mut stack = vec![u];
        let mut seen = 1u64 << u;
        let mut hit = false;
        while let Some(w) = stack.pop() {
            for &c in g.children(VertexId(w)) {
                if forbidden >> c.0 & 1 == 1 || seen >> c.0 & 1 == 1 {
                    continue;
                }
                if c == a || c == b {
                    hit = true;
                }
                seen |= 1 << c.0;
                stack.push(c.0);
            }
        }
        if hit {
            out |= 1 << u;
        }
    }
    out
}

/// Reference version of [`Dag::nontrivial_common_ancestors`].
pub fn nontrivial_common_ancestors_bruteforce(g: &Dag, a: VertexId, b: VertexId) -> Result<VertexSet> {
    check_cap("graph", g.len(), DEFAULT_CAP)?;
    Ok(VertexSet::from_mask(nontrivial_common_ancestors(g, &descendant_masks(g), a, b)))
}

fn closed(g: &Dag, desc: &[u64], h: u64) -> bool {
    let members: Vec<usize> = bits(h).collect();
    members.iter().enumerate().all(|(i, &a)| {
        members[i + 1..]
            .iter()
            .all(|&b| nontrivial_common_ancestors(g, desc, VertexId(a), VertexId(b)) & !h == 0)
    })
}

/// Intersection of every causally closed superset of `h`.
pub fn closure_bruteforce(g: &Dag, h: &VertexSet) -> Result<VertexSet> {
    check_cap("graph", g.len(), DEFAULT_CAP)?;
    let desc = descendant_masks(g);
    let base = h.to_mask();
    let free = g.all().difference(h);
    let mut acc = g.all().to_mask();
    for extra in subsets(&free) {
        let candidate = base | extra.to_mask();
        if closed(g, &desc, candidate) {
            acc &= candidate;
        }
    }
    Ok(VertexSet::from_mask(acc))
}

/// Whether `h` is causally closed, by the reference definition.
pub fn is_closed_bruteforce(g: &Dag, h: &VertexSet) -> bool {
    closed(g, &descendant_masks(g), h.to_mask())
}

/// Every blanket of one kind within a candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlanketFamily {
    pub kind: BoundaryKind,
    pub base: VertexSet,
    /// Sorted by canonical vertex order.
    pub members: Vec<VertexSet>,
}

impl BlanketFamily {
    pub fn contains(&self, s: &VertexSet) -> bool {
        self.members.contains(s)
    }

    /// Intersection of all members.
    pub fn minimum(&self) -> VertexSet {
        self.members.iter().fold(self.base.clone(), |acc, m| acc.intersection(m))
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..]
                .iter()
                .all(|b| self.contains(&a.intersection(b)))
        })
    }
}

/// Every subset `V'` of `v` with `A ⊥ V \ V' | V'` (treatment) or
/// `Y ⊥ V \ V' | A, V'` (outcome), querying the oracle directly.
pub fn enumerate_blanket_family<O: CiOracle + ?Sized>(
    oracle: &O,
    treatment: VertexId,
    outcome: VertexId,
    kind: BoundaryKind,
    v: &VertexSet,
) -> Result<BlanketFamily> {
    check_cap("candidate set", v.len(), DEFAULT_CAP)?;
    let mut members = Vec::new();
    for sub in subsets(v) {
        let rest = v.difference(&sub);
        let member = rest.is_empty()
            || match kind {
                BoundaryKind::Treatment => oracle.independent(&VertexSet::singleton(treatment), &rest, &sub)?,
                BoundaryKind::Outcome => {
                    let mut given = sub.clone();
                    given.insert(treatment);
                    oracle.independent(&VertexSet::singleton(outcome), &rest, &given)?
                }
            };
        if member {
            members.push(sub);
        }
    }
    members.sort_by_key(VertexSet::to_vec);
    Ok(BlanketFamily {
        kind,
        base: v.clone(),
        members,
    })
}

/// Whether adjusting for `c` blocks every back-door path, by path enumeration
/// in the graph with the treatment's outgoing edges removed.
pub fn sufficient_bruteforce(g: &Dag, c: &VertexSet) -> Result<bool> {
    dsep_bruteforce(
        &g.mutilate_backdoor(),
        &VertexSet::singleton(g.treatment()),
        &VertexSet::singleton(g.outcome()),
        c,
    )
}

/// Every inclusion-minimal sufficient subset of `s`, by testing all subsets.
pub fn minimal_sufficient_bruteforce(g: &Dag, s: &VertexSet) -> Result<Vec<VertexSet>> {
    check_cap("candidate set", s.len(), DEFAULT_CAP)?;
    let m = g.mutilate_backdoor();
    let table = DsepTable::new(&m, DEFAULT_CAP)?;
    let (a, y) = (g.treatment().0, g.outcome().0);
    let sufficient: Vec<VertexSet> = subsets(s)
        .filter(|c| !table.pair_connected(a, y, c.to_mask()))
        .collect();
    let mut minimal: Vec<VertexSet> = sufficient
        .iter()
        .filter(|c| !sufficient.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect();
    minimal.sort_by_key(VertexSet::to_vec);
    Ok(minimal)
}
