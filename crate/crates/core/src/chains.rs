//! Delta-chain graphs over finite point samples.
//!
//! A [`ChainGraph`] materializes the relation `x -> y iff d(f(x), y) <= delta`
//! on a finite vertex list, stored as adjacency bitsets with the edge
//! predicate always recomputable from scratch for audit. Chain components
//! are the strongly connected components restricted to cycle-bearing
//! vertices: on arbitrary finite samples reflexivity is not free, so the
//! restriction keeps the mutual-reachability relation an honest
//! equivalence. Edge sets are monotone in delta, which makes the component
//! refinement across decreasing delta literally true at graph level.

use std::collections::BTreeSet;

use crate::rat::Rat;
use crate::report::VerificationReport;
use crate::system::DynamicalSystem;
use crate::Error;

#[derive(Clone, Debug)]
pub struct ChainGraph<S: DynamicalSystem> {
    sys: S,
    vertices: Vec<S::Point>,
    delta: Rat,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl<S: DynamicalSystem> ChainGraph<S> {
    /// Builds the exact edge set by evaluating the predicate on every
    /// ordered pair. Quadratic in the vertex count by design.
    pub fn build(sys: &S, vertices: Vec<S::Point>, delta: Rat) -> Result<Self, Error> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateVertex(v.to_string()));
            }
        }
        let n = vertices.len();
        let words_per_row = n.div_ceil(64);
        let mut bits = vec![0u64; n * words_per_row];
        let images: Vec<S::Point> = vertices.iter().map(|v| sys.eval(v)).collect();
        for (i, image) in images.iter().enumerate() {
            for (j, w) in vertices.iter().enumerate() {
                if sys.dist(image, w) <= delta {
                    bits[i * words_per_row + j / 64] |= 1u64 << (j % 64);
                }
            }
        }
        Ok(ChainGraph {
            sys: sys.clone(),
            vertices,
            delta,
            words_per_row,
            bits,
        })
    }

    pub fn system(&self) -> &S {
        &self.sys
    }

    pub fn vertices(&self) -> &[S::Point] {
        &self.vertices
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn vertex_index(&self, p: &S::Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    /// Recomputes the edge predicate from scratch, bypassing the stored
    /// adjacency. Audit path for the bitsets.
    pub fn recompute_edge(&self, i: usize, j: usize) -> bool {
        self.sys
            .dist(&self.sys.eval(&self.vertices[i]), &self.vertices[j])
            <= self.delta
    }

    /// First out-neighbor of `v` with index >= `from`.
    fn next_neighbor(&self, v: usize, from: usize) -> Option<usize> {
        let n = self.vertices.len();
        if from >= n {
            return None;
        }
        let row = v * self.words_per_row;
        let mut word_idx = from / 64;
        let mut word = self.bits[row + word_idx] & (u64::MAX << (from % 64));
        loop {
            if word != 0 {
                let j = word_idx * 64 + word.trailing_zeros() as usize;
                return (j < n).then_some(j);
            }
            word_idx += 1;
            if word_idx >= self.words_per_row {
                return None;
            }
            word = self.bits[row + word_idx];
        }
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut from = 0;
        while let Some(j) = self.next_neighbor(v, from) {
            out.push(j);
            from = j + 1;
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Plain adjacency-list text: the vertex serializations, then one edge
    /// pair per line.
    pub fn export(&self) -> String {
        let mut out = format!("delta: {}\n", self.delta);
        let verts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("vertices: {}\n", verts.join(" ")));
        for i in 0..self.vertices.len() {
            for j in self.neighbors(i) {
                out.push_str(&format!("{} {}\n", self.vertices[i], self.vertices[j]));
            }
        }
        out
    }
}

/// The SCC partition of a chain graph, in topological order of the
/// condensation, with cycle-bearing components flagged. Chain components
/// and chain-recurrent vertices are the cyclic part.
#[derive(Clone, Debug)]
pub struct ChainComponents<S: DynamicalSystem> {
    delta: Rat,
    vertices: Vec<S::Point>,
    components: Vec<Vec<usize>>,
    cyclic: Vec<bool>,
}

impl<S: DynamicalSystem> ChainComponents<S> {
    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn vertices(&self) -> &[S::Point] {
        &self.vertices
    }

    /// All SCCs, condensation-topologically ordered (edges point forward).
    pub fn all_components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn is_cyclic(&self, component: usize) -> bool {
        self.cyclic[component]
    }

    /// The chain components: SCCs whose vertices lie on a delta-cycle.
    pub fn chain_components(&self) -> Vec<Vec<S::Point>> {
        self.components
            .iter()
            .zip(&self.cyclic)
            .filter(|(_, cyc)| **cyc)
            .map(|(comp, _)| comp.iter().map(|&i| self.vertices[i].clone()).collect())
            .collect()
    }

    /// Vertices lying on some delta-cycle, in canonical order.
    pub fn chain_recurrent(&self) -> Vec<S::Point> {
        let mut out: Vec<S::Point> = self
            .components
            .iter()
            .zip(&self.cyclic)
            .filter(|(_, cyc)| **cyc)
            .flat_map(|(comp, _)| comp.iter().map(|&i| self.vertices[i].clone()))
            .collect();
        out.sort();
        out
    }

    /// Index of the cyclic component containing `p`, if any.
    fn cyclic_component_of(&self, p: &S::Point) -> Option<usize> {
        self.components
            .iter()
            .zip(&self.cyclic)
            .enumerate()
            .find(|(_, (comp, cyc))| **cyc && comp.iter().any(|&i| &self.vertices[i] == p))
            .map(|(id, _)| id)
    }
}

/// Iterative Tarjan over a lazily-scanned neighbor relation.
/// `next_neighbor(v, from)` yields the first neighbor of `v` with index
/// >= `from`. Components come out in reverse topological order.
fn tarjan(n: usize, next_neighbor: impl Fn(usize, usize) -> Option<usize>) -> Vec<Vec<usize>> {
    let mut counter = 0usize;
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(&mut (v, ref mut cursor)) = frames.last_mut() {
            if let Some(w) = next_neighbor(v, *cursor) {
                *cursor = w + 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    components
}

/// Strongly connected components of the delta-edge relation, with
/// cycle-bearing components flagged and the condensation order attached.
pub fn scc<S: DynamicalSystem>(g: &ChainGraph<S>) -> ChainComponents<S> {
    let n = g.vertices().len();
    let mut components = tarjan(n, |v, from| g.next_neighbor(v, from));
    components.reverse(); // topological order of the condensation
    let cyclic = components
        .iter()
        .map(|comp| comp.len() > 1 || g.has_edge(comp[0], comp[0]))
        .collect();
    ChainComponents {
        delta: g.delta().clone(),
        vertices: g.vertices().to_vec(),
        components,
        cyclic,
    }
}

/// Vertices lying on some delta-cycle within the graph.
pub fn chain_recurrent_vertices<S: DynamicalSystem>(g: &ChainGraph<S>) -> Vec<S::Point> {
    scc(g).chain_recurrent()
}

/// Checks that every chain component at the finer `delta_1` is wholly
/// contained in a single chain component at the coarser `delta_2`.
pub fn refinement_check<S: DynamicalSystem>(
    fine: &ChainComponents<S>,
    coarse: &ChainComponents<S>,
) -> Result<VerificationReport, Error> {
    if fine.vertices() != coarse.vertices() {
        return Err(Error::VertexMismatch);
    }
    let mut report = VerificationReport::new(
        "chains.refinement",
        "every delta_2-chain component is a disjoint union of delta_1-chain components",
    )
    .param("delta_1", fine.delta())
    .param("delta_2", coarse.delta())
    .param("vertices", fine.vertices().len());
    if fine.delta() > coarse.delta() {
        return Ok(report.witness("error", "delta_1 must be <= delta_2").failed());
    }

    let fine_components = fine.chain_components();
    report = report
        .param("fine-components", fine_components.len())
        .param("coarse-components", coarse.chain_components().len());
    for comp in &fine_components {
        let targets: BTreeSet<Option<usize>> =
            comp.iter().map(|p| coarse.cyclic_component_of(p)).collect();
        if targets.contains(&None) || targets.len() != 1 {
            let members: Vec<String> = comp.iter().map(|p| p.to_string()).collect();
            return Ok(report
                .witness("straddling-component", members.join(" "))
                .failed());
        }
    }
    Ok(report.passed())
}

/// Shortest delta-chain from `x` to `y` (length >= 1) by breadth-first
/// search, or a certified absence once the search exhausts. For `x = y`
/// this finds the shortest delta-cycle through `x`.
pub fn find_chain<S: DynamicalSystem>(
    g: &ChainGraph<S>,
    x: &S::Point,
    y: &S::Point,
) -> Result<Option<Vec<S::Point>>, Error> {
    let start = g.vertex_index(x).ok_or_else(|| Error::NotAVertex(x.to_string()))?;
    let target = g.vertex_index(y).ok_or_else(|| Error::NotAVertex(y.to_string()))?;

    let n = g.vertices().len();
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(start);
    // The start is deliberately not marked visited: a chain must use at
    // least one edge, so arriving back at `start` counts only via an edge.
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if w == target {
                let mut path = vec![w, v];
                let mut cur = v;
                while cur != start {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                let points: Vec<S::Point> =
                    path.iter().map(|&i| g.vertices()[i].clone()).collect();
                debug_assert!(points
                    .windows(2)
                    .all(|p| g.system().dist(&g.system().eval(&p[0]), &p[1]) <= *g.delta()));
                return Ok(Some(points));
            }
            if !visited[w] {
                visited[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

/// Vertices reachable from `x` by delta-chains of length >= `min_len`
/// (walks may revisit vertices). The fixed-delta, fixed-length slice of
/// the chain-continuity reachability set.
pub fn c_set<S: DynamicalSystem>(
    g: &ChainGraph<S>,
    x: &S::Point,
    min_len: usize,
) -> Result<Vec<S::Point>, Error> {
    assert!(min_len >= 1, "chain length must be at least 1");
    let start = g.vertex_index(x).ok_or_else(|| Error::NotAVertex(x.to_string()))?;
    let n = g.vertices().len();

    // Product search over (vertex, walk length capped at min_len).
    let mut seen = vec![false; n * (min_len + 1)];
    let mut queue = std::collections::VecDeque::new();
    seen[start * (min_len + 1)] = true;
    queue.push_back((start, 0usize));
    let mut hit = vec![false; n];
    while let Some((v, len)) = queue.pop_front() {
        if len == min_len {
            hit[v] = true;
        }
        for w in g.neighbors(v) {
            let next_len = (len + 1).min(min_len);
            if !seen[w * (min_len + 1) + next_len] {
                seen[w * (min_len + 1) + next_len] = true;
                queue.push_back((w, next_len));
            }
        }
    }
    Ok((0..n)
        .filter(|&i| hit[i])
        .map(|i| g.vertices()[i].clone())
        .collect())
}
