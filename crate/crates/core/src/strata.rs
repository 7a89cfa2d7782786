//! Stable trees of compact type, their housing data, and the reduced data of
//! decorated boundary generators.
//!
//! Trees are enumerated as labeled trees through Prüfer sequences. Two
//! generators with the same reduced data have the same pairing row, so
//! deduplication happens on [`ReducedBoundaryData`], never on graphs.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::scalar::ExactScalar;
use crate::socle::Evaluator;

/// One surviving vertex: socle dimension `d′(v) > 0`, κ-decoration, ψ-decoration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub socle: u32,
    pub kappa: Partition,
    pub psi: Partition,
}

impl Ord for Triple {
    /// Larger socle dimensions first, so γ reads as a decreasing list.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .socle
            .cmp(&self.socle)
            .then_with(|| self.kappa.cmp(&other.kappa))
            .then_with(|| self.psi.cmp(&other.psi))
    }
}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The data (γ, {τ_i}, {ρ_i}) that determines the pairing row of a
/// decorated boundary generator. Triples are kept sorted, so equality is
/// multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ReducedJson", try_from = "ReducedJson")]
pub struct ReducedBoundaryData {
    triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
struct ReducedJson {
    gamma: Vec<u32>,
    kappa: Vec<Partition>,
    psi: Vec<Partition>,
}

impl From<ReducedBoundaryData> for ReducedJson {
    fn from(data: ReducedBoundaryData) -> Self {
        ReducedJson {
            gamma: data.triples.iter().map(|t| t.socle).collect(),
            kappa: data.triples.iter().map(|t| t.kappa.clone()).collect(),
            psi: data.triples.into_iter().map(|t| t.psi).collect(),
        }
    }
}

impl TryFrom<ReducedJson> for ReducedBoundaryData {
    type Error = Error;

    fn try_from(j: ReducedJson) -> Result<Self> {
        if j.gamma.len() != j.kappa.len() || j.gamma.len() != j.psi.len() {
            return Err(Error::Parse("gamma, kappa and psi must have equal lengths".into()));
        }
        let triples = j
            .gamma
            .into_iter()
            .zip(j.kappa)
            .zip(j.psi)
            .map(|((socle, kappa), psi)| Triple { socle, kappa, psi })
            .collect();
        ReducedBoundaryData::new(triples)
    }
}

impl ReducedBoundaryData {
    pub fn new(mut triples: Vec<Triple>) -> Result<Self> {
        if triples.iter().any(|t| t.socle == 0) {
            return Err(Error::Parse("socle dimension of a surviving vertex must be positive".into()));
        }
        triples.sort();
        Ok(ReducedBoundaryData { triples })
    }

    /// Undecorated data with γ = λ.
    pub fn pure(lambda: &Partition) -> Self {
        let triples = lambda
            .parts()
            .iter()
            .map(|&socle| Triple { socle, kappa: Partition::empty(), psi: Partition::empty() })
            .collect();
        ReducedBoundaryData { triples }
    }

    /// One vertex with γ = (d); for `d = 0` the data is empty.
    pub fn single(d: u32, kappa: Partition, psi: Partition) -> Self {
        if d == 0 {
            return ReducedBoundaryData { triples: Vec::new() };
        }
        ReducedBoundaryData { triples: vec![Triple { socle: d, kappa, psi }] }
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn gamma(&self) -> Partition {
        Partition::from_nonneg(self.triples.iter().map(|t| t.socle))
    }

    /// Total κ and ψ degrees over the surviving vertices.
    pub fn decoration_degrees(&self) -> (u32, u32) {
        self.triples.iter().fold((0, 0), |(r, s), t| (r + t.kappa.size(), s + t.psi.size()))
    }
}

impl fmt::Display for ReducedBoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |get: &dyn Fn(&Triple) -> &Partition| {
            self.triples.iter().map(|t| get(t).to_string()).collect::<Vec<_>>().join(",")
        };
        write!(f, "gamma={} kappa=[{}] psi=[{}]", self.gamma(), list(&|t| &t.kappa), list(&|t| &t.psi))
    }
}

/// A stable tree with genus and κ/ψ decorations per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    pub genus: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    pub kappa: Vec<Partition>,
    pub psi: Vec<Partition>,
}

impl DecoratedTree {
    pub fn undecorated(genus: Vec<u32>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = genus.len();
        let tree = DecoratedTree { genus, edges, kappa: vec![Partition::empty(); n], psi: vec![Partition::empty(); n] };
        tree.validate()?;
        Ok(tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.genus.len()
    }

    pub fn total_genus(&self) -> u32 {
        self.genus.iter().sum()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count() as u32
    }

    /// Tree shape, stability `2g(v) − 2 + n(v) > 0`, and `ℓ(ρ_v) ≤ n(v)`.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        if n == 0 || self.edges.len() + 1 != n || self.kappa.len() != n || self.psi.len() != n {
            return Err(Error::Unstable("not a tree with one decoration per vertex".into()));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(Error::Unstable(format!("edge ({a},{b}) out of range")));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(Error::Unstable("graph has a cycle".into()));
            }
            parent[ra] = rb;
        }
        for v in 0..n {
            let deg = self.degree(v);
            if 2 * self.genus[v] + deg <= 2 {
                return Err(Error::Unstable(format!("vertex {v} has genus {} and degree {deg}", self.genus[v])));
            }
            if self.psi[v].len() > deg as usize {
                return Err(Error::Unstable(format!("vertex {v} carries more ψ classes than half-edges")));
            }
        }
        Ok(())
    }

    /// `2g(v) − 3 + n(v)`, the socle dimension at `v`.
    pub fn socle_dimension(&self, v: usize) -> u32 {
        2 * self.genus[v] + self.degree(v) - 3
    }

    /// Partition of the per-vertex socle dimensions, zeros discarded.
    pub fn housing_data(&self) -> Result<Partition> {
        self.validate()?;
        if self.kappa.iter().chain(&self.psi).any(|p| !p.is_empty()) {
            return Err(Error::Dimension("housing data is defined for undecorated trees".into()));
        }
        Ok(Partition::from_nonneg((0..self.vertex_count()).map(|v| self.socle_dimension(v))))
    }

    /// Reduced data, or `None` when some vertex is over-decorated or a dropped
    /// vertex has a vanishing constant.
    pub fn reduce<T: ExactScalar>(&self, ev: &Evaluator<T>) -> Result<Option<ReducedBoundaryData>> {
        self.validate()?;
        let mut triples = Vec::new();
        for v in 0..self.vertex_count() {
            let used = self.kappa[v].size() + self.psi[v].size();
            match self.socle_dimension(v).checked_sub(used) {
                None => return Ok(None),
                Some(0) => {
                    if ev.theta(&self.kappa[v], &self.psi[v]).is_zero() {
                        return Ok(None);
                    }
                }
                Some(socle) => triples.push(Triple { socle, kappa: self.kappa[v].clone(), psi: self.psi[v].clone() }),
            }
        }
        ReducedBoundaryData::new(triples).map(Some)
    }
}

/// Housing criterion: fewer than `2g − 2 − d` parts, or exactly that many with
/// at least two even parts. When `d = 2g − 3` the only tree is a single
/// vertex, whose housing data `(2g − 3)` is accepted.
pub fn is_housing_partition(sigma: &Partition, g: u32, d: u32) -> Result<bool> {
    if sigma.size() != d {
        return Err(Error::Dimension(format!("{sigma} is not a partition of {d}")));
    }
    if g < 2 || d > 2 * g - 3 {
        return Err(Error::Moduli(format!("need g >= 2 and d <= 2g-3, got g={g}, d={d}")));
    }
    let vertices = (2 * g - 2 - d) as usize;
    if vertices == 1 {
        return Ok(sigma.len() == 1);
    }
    Ok(sigma.len() < vertices || (sigma.len() == vertices && sigma.even_part_count() >= 2))
}

/// A stable tree with housing data `sigma`: a path with leaves hung off its
/// second through (k+1)-st vertices, even entries placed on odd-degree
/// vertices, genera solved from the socle dimensions.
pub fn build_housing_tree(sigma: &Partition, g: u32, d: u32) -> Result<DecoratedTree> {
    if !is_housing_partition(sigma, g, d)? {
        return Err(Error::NotHousing { sigma: sigma.to_string(), g, d });
    }
    let n = (2 * g - 2 - d) as usize;
    if n == 1 {
        return DecoratedTree::undecorated(vec![g], Vec::new());
    }
    let mut entries = sigma.parts().to_vec();
    entries.resize(n, 0);
    let evens = entries.iter().filter(|t| *t % 2 == 0).count();
    assert!(evens >= 2 && evens % 2 == 0, "parity of housing entries");
    let k = evens / 2 - 1;
    let path = n - k;
    let mut edges: Vec<(usize, usize)> = (1..path).map(|i| (i - 1, i)).collect();
    for leaf in 0..k {
        edges.push((leaf + 1, path + leaf));
    }
    let degree = |v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count() as u32;
    let (mut even, mut odd): (Vec<u32>, Vec<u32>) = entries.iter().partition(|t| *t % 2 == 0);
    let mut genus = vec![0; n];
    for (v, slot) in genus.iter_mut().enumerate() {
        let deg = degree(v);
        let entry = if deg % 2 == 1 { even.pop() } else { odd.pop() };
        let entry = entry.expect("parity assignment");
        *slot = (entry + 3 - deg) / 2;
    }
    assert!(even.is_empty() && odd.is_empty(), "parity assignment");
    DecoratedTree::undecorated(genus, edges)
}

/// Visits every labeled tree on `0..n` (n ≥ 2) as an edge list decoded from
/// its Prüfer sequence.
pub fn visit_labeled_trees(n: usize, f: &mut dyn FnMut(&[(usize, usize)])) {
    if n < 2 {
        if n == 1 {
            f(&[]);
        }
        return;
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        f(&prufer_decode(&seq, n));
        // odometer increment
        let mut i = 0;
        loop {
            if i == seq.len() {
                return;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Sorted degree sequences realized by trees on `n` vertices.
pub fn tree_degree_profiles(n: usize) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    if n == 1 {
        out.insert(vec![0]);
        return out;
    }
    visit_labeled_trees(n, &mut |edges| {
        let mut deg = vec![0u32; n];
        for &(a, b) in edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        out.insert(deg);
    });
    out
}

/// Sorted `(genus, degree)` multisets of stable trees of total genus `g` on
/// `n` vertices.
pub fn stable_vertex_profiles(g: u32, n: usize) -> BTreeSet<Vec<(u32, u32)>> {
    fn compositions(g: u32, slots: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() + 1 == slots {
            cur.push(g);
            f(cur);
            cur.pop();
            return;
        }
        for x in 0..=g {
            cur.push(x);
            compositions(g - x, slots, cur, f);
            cur.pop();
        }
    }
    let mut out = BTreeSet::new();
    if n == 0 {
        return out;
    }
    for degrees in tree_degree_profiles(n) {
        compositions(g, n, &mut Vec::new(), &mut |genera| {
            if genera.iter().zip(&degrees).all(|(&gv, &nv)| 2 * gv + nv > 2) {
                let mut profile: Vec<(u32, u32)> = genera.iter().copied().zip(degrees.iter().copied()).collect();
                profile.sort_unstable();
                out.insert(profile);
            }
        });
    }
    out
}

/// Housing data of every stable undecorated tree with `2g − 3 − d` edges.
pub fn enumerate_pure_housing_partitions(g: u32, d: u32) -> Result<BTreeSet<Partition>> {
    if g < 2 || d > 2 * g - 3 {
        return Err(Error::Moduli(format!("need g >= 2 and d <= 2g-3, got g={g}, d={d}")));
    }
    let n = (2 * g - 2 - d) as usize;
    Ok(stable_vertex_profiles(g, n)
        .into_iter()
        .map(|profile| Partition::from_nonneg(profile.iter().map(|&(gv, nv)| 2 * gv + nv - 3)))
        .collect())
}

/// Reduced data of every decorated stable tree with at least one edge whose
/// class has degree `2g − 3 − d`.
pub fn enumerate_boundary_generators<T: ExactScalar>(
    ev: &Evaluator<T>,
    g: u32,
    d: u32,
) -> Result<BTreeSet<ReducedBoundaryData>> {
    if g < 2 || d > 2 * g - 3 {
        return Err(Error::Moduli(format!("need g >= 2 and d <= 2g-3, got g={g}, d={d}")));
    }
    let mut out = BTreeSet::new();
    let max_vertices = (2 * g - 2 - d) as usize;
    for n in 2..=max_vertices {
        let budget = max_vertices as u32 - n as u32;
        for profile in stable_vertex_profiles(g, n) {
            let options: Vec<Vec<Vec<VertexChoice>>> = profile
                .iter()
                .map(|&(gv, nv)| vertex_choices(2 * gv + nv - 3, nv, budget))
                .collect();
            let mut chosen = Vec::with_capacity(n);
            distribute(&options, budget, &mut chosen, &mut |picks| {
                let mut triples = Vec::new();
                for c in picks {
                    if c.socle > 0 {
                        triples.push(Triple { socle: c.socle, kappa: c.kappa.clone(), psi: c.psi.clone() });
                    } else if ev.theta(&c.kappa, &c.psi).is_zero() {
                        return;
                    }
                }
                out.insert(ReducedBoundaryData::new(triples).expect("positive socles"));
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct VertexChoice {
    socle: u32,
    kappa: Partition,
    psi: Partition,
}

/// For each total decoration degree `t ≤ min(capacity, budget)`, every
/// (κ, ψ) decoration with `ℓ(ψ) ≤ half_edges`.
fn vertex_choices(capacity: u32, half_edges: u32, budget: u32) -> Vec<Vec<VertexChoice>> {
    (0..=capacity.min(budget))
        .map(|t| {
            let mut list = Vec::new();
            for r in 0..=t {
                for kappa in enumerate_partitions(r, None) {
                    for psi in enumerate_partitions(t - r, Some(half_edges as usize)) {
                        list.push(VertexChoice { socle: capacity - t, kappa: kappa.clone(), psi });
                    }
                }
            }
            list
        })
        .collect()
}

fn distribute<'a>(
    options: &'a [Vec<Vec<VertexChoice>>],
    budget: u32,
    chosen: &mut Vec<&'a VertexChoice>,
    f: &mut dyn FnMut(&[&'a VertexChoice]),
) {
    let v = chosen.len();
    if v == options.len() {
        if budget == 0 {
            f(chosen);
        }
        return;
    }
    for (t, list) in options[v].iter().enumerate() {
        if t as u32 > budget {
            break;
        }
        for c in list {
            chosen.push(c);
            distribute(options, budget - t as u32, chosen, f);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{part, Rational};

    #[test]
    fn housing_data_examples() {
        let t = DecoratedTree::undecorated(vec![2, 2], vec![(0, 1)]).unwrap();
        assert_eq!(t.housing_data().unwrap(), part![2, 2]);
        let single = DecoratedTree::undecorated(vec![4], vec![]).unwrap();
        assert_eq!(single.housing_data().unwrap(), part![5]);
        // genus-1 leaf contributes 0
        let g = 5;
        let leaf = DecoratedTree::undecorated(vec![1, g - 1], vec![(0, 1)]).unwrap();
        assert_eq!(leaf.housing_data().unwrap(), Partition::from_nonneg([2 * g - 4]));
    }

    #[test]
    fn unstable_trees_rejected() {
        assert!(DecoratedTree::undecorated(vec![0, 2], vec![(0, 1)]).is_err());
        assert!(DecoratedTree::undecorated(vec![1, 1, 1], vec![(0, 1)]).is_err());
        assert!(DecoratedTree::undecorated(vec![1], vec![]).is_err());
        let mut t = DecoratedTree::undecorated(vec![1, 1], vec![(0, 1)]).unwrap();
        t.psi[0] = part![1, 1];
        assert!(t.validate().is_err());
    }

    #[test]
    fn housing_predicate_examples() {
        assert!(is_housing_partition(&part![2, 1], 4, 3).unwrap());
        assert!(!is_housing_partition(&part![1, 1, 1], 4, 3).unwrap());
        assert!(is_housing_partition(&part![2, 2], 4, 4).unwrap());
        assert!(is_housing_partition(&part![2], 4, 3).is_err());
    }

    #[test]
    fn build_tree_examples() {
        let t = build_housing_tree(&part![2, 2], 4, 4).unwrap();
        assert_eq!((t.vertex_count(), t.edges.len()), (2, 1));
        assert_eq!(t.genus, vec![2, 2]);
        let single = build_housing_tree(&part![5], 4, 5).unwrap();
        assert_eq!((single.vertex_count(), single.genus.clone()), (1, vec![4]));
        // four vertices need 2g-2-d = 4
        assert!(build_housing_tree(&part![2, 2, 1, 1], 5, 6).is_err());
        let t = build_housing_tree(&part![2, 2, 1, 1], 6, 6).unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.housing_data().unwrap(), part![2, 2, 1, 1]);
        for v in 0..4 {
            let endpoint = t.degree(v) == 1;
            assert_eq!(endpoint, t.socle_dimension(v).is_multiple_of(2));
        }
        assert!(matches!(build_housing_tree(&part![1, 1, 1], 4, 3), Err(Error::NotHousing { .. })));
    }

    #[test]
    fn prufer_counts() {
        for n in 2..=7usize {
            let mut count = 0usize;
            visit_labeled_trees(n, &mut |edges| {
                assert_eq!(edges.len(), n - 1);
                count += 1;
            });
            assert_eq!(count, n.pow(n as u32 - 2));
        }
    }

    #[test]
    fn pure_housing_examples() {
        assert_eq!(enumerate_pure_housing_partitions(3, 1).unwrap(), [part![1]].into());
        assert_eq!(enumerate_pure_housing_partitions(4, 3).unwrap(), [part![3], part![2, 1]].into());
        assert_eq!(enumerate_pure_housing_partitions(2, 1).unwrap(), [part![1]].into());
    }

    #[test]
    fn boundary_generator_examples() {
        let ev = Evaluator::<Rational>::new();
        let g2 = enumerate_boundary_generators(&ev, 2, 0).unwrap();
        assert_eq!(g2.len(), 1);
        assert!(g2.iter().next().unwrap().triples().is_empty());
        assert!(enumerate_boundary_generators(&ev, 3, 3).unwrap().is_empty());
        let g3 = enumerate_boundary_generators(&ev, 3, 2).unwrap();
        assert!(g3.contains(&ReducedBoundaryData::pure(&part![2])));
        // (1,1) needs two vertices of socle dimension 1, impossible in genus 3
        assert!(!g3.contains(&ReducedBoundaryData::pure(&part![1, 1])));
        // one edge uses the whole codimension: nothing left to decorate
        assert!(g3.iter().all(|r| r.decoration_degrees() == (0, 0)));
        let g3 = enumerate_boundary_generators(&ev, 3, 1).unwrap();
        assert!(g3.iter().any(|r| r.decoration_degrees() != (0, 0)));
        assert!(g3.iter().all(|r| r.gamma().size() == 1));
    }

    #[test]
    fn reduce_drops_empty_vertices() {
        let ev = Evaluator::<Rational>::new();
        let mut t = DecoratedTree::undecorated(vec![1, 2], vec![(0, 1)]).unwrap();
        assert_eq!(t.reduce(&ev).unwrap(), Some(ReducedBoundaryData::pure(&part![2])));
        t.kappa[1] = part![1];
        let reduced = t.reduce(&ev).unwrap().unwrap();
        assert_eq!(reduced.gamma(), part![1]);
        t.kappa[0] = part![1];
        assert_eq!(t.reduce(&ev).unwrap(), None);
    }

    #[test]
    fn json_shape() {
        let data = ReducedBoundaryData::new(vec![
            Triple { socle: 1, kappa: part![], psi: part![1] },
            Triple { socle: 2, kappa: part![1], psi: part![] },
        ])
        .unwrap();
        let s = serde_json::to_string(&data).unwrap();
        assert_eq!(s, r#"{"gamma":[2,1],"kappa":[[1],[]],"psi":[[],[1]]}"#);
        let back: ReducedBoundaryData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, data);
    }
}
