//! Successive-shortest-path min-cost flow with real-valued edge costs.
//!
//! Negative costs are allowed on the initial graph: the first potential
//! vector comes from a Bellman-Ford pass, after which every augmentation
//! runs Dijkstra on reduced costs. Tie-breaking is fixed (smallest node id
//! pops first, first-inserted edge wins equal relaxations) so the flow, and
//! therefore the routing, is deterministic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

pub(crate) struct MinCostFlow {
    adjacency: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<f64>,
}

struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest
        // (dist, node) first.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        MinCostFlow {
            adjacency: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    /// Adds a directed edge and its zero-capacity reverse. Returns the
    /// forward edge id; ids come in pairs, `id ^ 1` is the reverse.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64, cost: f64) -> usize {
        let id = self.to.len();
        self.adjacency[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adjacency[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    /// Units currently routed through forward edge `id`.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    /// Pushes up to `target` units from `source` to `sink` along successive
    /// shortest paths. Returns the units actually routed; the caller checks
    /// that against the target for feasibility.
    pub fn run(&mut self, source: usize, sink: usize, target: i64) -> i64 {
        let n = self.adjacency.len();
        let mut potential = self.bellman_ford(source);
        let mut routed = 0i64;
        let mut dist = vec![f64::INFINITY; n];
        let mut pred_edge = vec![usize::MAX; n];
        while routed < target {
            dist.fill(f64::INFINITY);
            pred_edge.fill(usize::MAX);
            dist[source] = 0.0;
            let mut heap = BinaryHeap::new();
            heap.push(HeapEntry {
                dist: 0.0,
                node: source,
            });
            while let Some(HeapEntry { dist: d, node }) = heap.pop() {
                if d > dist[node] {
                    continue;
                }
                for &edge in &self.adjacency[node] {
                    if self.cap[edge] <= 0 {
                        continue;
                    }
                    let next = self.to[edge];
                    if potential[next].is_infinite() {
                        // Never reachable (see bellman_ford note); skip so
                        // potentials stay finite on the active subgraph.
                        continue;
                    }
                    // Clamp: exact arithmetic gives reduced costs >= 0, but
                    // float rounding can leave a -1e-16 residue.
                    let reduced = (self.cost[edge] + potential[node] - potential[next]).max(0.0);
                    let candidate = d + reduced;
                    if candidate < dist[next] {
                        dist[next] = candidate;
                        pred_edge[next] = edge;
                        heap.push(HeapEntry {
                            dist: candidate,
                            node: next,
                        });
                    }
                }
            }
            if dist[sink].is_infinite() {
                break;
            }
            for (node, d) in dist.iter().enumerate() {
                if d.is_finite() {
                    potential[node] += d;
                }
            }
            let mut bottleneck = target - routed;
            let mut node = sink;
            while node != source {
                let edge = pred_edge[node];
                bottleneck = bottleneck.min(self.cap[edge]);
                node = self.to[edge ^ 1];
            }
            let mut node = sink;
            while node != source {
                let edge = pred_edge[node];
                self.cap[edge] -= bottleneck;
                self.cap[edge ^ 1] += bottleneck;
                node = self.to[edge ^ 1];
            }
            routed += bottleneck;
        }
        routed
    }

    /// Queue-based Bellman-Ford from `source` over positive-capacity edges.
    /// Nodes unreachable now stay unreachable: augmenting only adds reverse
    /// edges between already-reached nodes.
    fn bellman_ford(&self, source: usize) -> Vec<f64> {
        let n = self.adjacency.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut queued = vec![false; n];
        dist[source] = 0.0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        queued[source] = true;
        while let Some(node) = queue.pop_front() {
            queued[node] = false;
            for &edge in &self.adjacency[node] {
                if self.cap[edge] <= 0 {
                    continue;
                }
                let next = self.to[edge];
                let candidate = dist[node] + self.cost[edge];
                if candidate < dist[next] {
                    dist[next] = candidate;
                    if !queued[next] {
                        queue.push_back(next);
                        queued[next] = true;
                    }
                }
            }
        }
        dist
    }
}
