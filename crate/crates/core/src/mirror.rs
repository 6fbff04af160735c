//! Mirror partial schedules and the `n/2` guarantee for `Y`.
//!
//! Two partial schedules `pi1` and `pi2` are grown over the same node set
//! `A` so that every node of `A` decides `Y` in one of them and `N` in the
//! other. A node outside `A` whose decided `A`-neighbors are unbalanced is
//! appended to both at the same position; otherwise an edge with both ends
//! outside `A` is appended in opposite orders. When neither step applies,
//! the nodes outside `A` are independent and balanced, so appending them to
//! the `Y`-richer mirror makes all of them decide `Y`.

use crate::dynamics::{decide_balance, Decision, PartialSchedule, Schedule};
use crate::error::Result;
use crate::graph::{require_valid, Graph, NodeId};
use crate::nodeset::NodeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPair {
    pub a: NodeSet,
    pub pi_prime: PartialSchedule,
    pub pi_double_prime: PartialSchedule,
}

impl MirrorPair {
    /// Every node of `A` decides oppositely in the two mirrors.
    pub fn mirror_property_holds(&self) -> bool {
        let n = self.a.capacity();
        let mut first = vec![None; n];
        for &(v, d) in self.pi_prime.entries() {
            first[v] = Some(d);
        }
        self.pi_double_prime.len() == self.pi_prime.len()
            && self
                .pi_double_prime
                .entries()
                .iter()
                .all(|&(v, d)| first[v] == Some(d.opposite()))
            && self.pi_prime.scheduled() == &self.a
    }

    /// The mirror with more `target` decisions; ties go to `pi_prime`.
    pub fn richer(&self, target: Decision) -> &PartialSchedule {
        if self.pi_double_prime.count(target) > self.pi_prime.count(target) {
            &self.pi_double_prime
        } else {
            &self.pi_prime
        }
    }
}

/// Incremental state shared by the plain and the layered constructions.
///
/// `balance[v]` is (#Y - #N) over `v`'s neighbors in `A` under `pi_prime`;
/// `outside[v]` counts `v`'s active neighbors not yet in `A`.
pub(crate) struct MirrorBuilder<'g> {
    graph: &'g Graph,
    in_a: NodeSet,
    active: NodeSet,
    balance: Vec<i64>,
    outside: Vec<usize>,
    pi1: PartialSchedule,
    pi2: PartialSchedule,
}

impl<'g> MirrorBuilder<'g> {
    pub(crate) fn new(graph: &'g Graph) -> Self {
        let n = graph.n();
        MirrorBuilder {
            graph,
            in_a: NodeSet::new(n),
            active: NodeSet::new(n),
            balance: vec![0; n],
            outside: vec![0; n],
            pi1: PartialSchedule::new(n),
            pi2: PartialSchedule::new(n),
        }
    }

    /// Adds nodes to the region where edges may be scheduled.
    pub(crate) fn activate<I: IntoIterator<Item = NodeId>>(&mut self, nodes: I) {
        for v in nodes {
            if !self.active.insert(v) {
                continue;
            }
            for &u in self.graph.neighbors(v) {
                if self.active.contains(u) {
                    if !self.in_a.contains(v) {
                        self.outside[u] += 1;
                    }
                    if !self.in_a.contains(u) {
                        self.outside[v] += 1;
                    }
                }
            }
        }
    }

    pub(crate) fn is_unbalanced(&self, v: NodeId) -> bool {
        !self.in_a.contains(v) && self.balance[v] != 0
    }

    fn add(&mut self, v: NodeId, d1: Decision) {
        self.in_a.insert(v);
        self.pi1.push(v, d1);
        let step = match d1 {
            Decision::Y => 1,
            Decision::N => -1,
        };
        let was_active = self.active.contains(v);
        for &u in self.graph.neighbors(v) {
            self.balance[u] += step;
            if was_active && self.active.contains(u) {
                self.outside[u] -= 1;
            }
        }
    }

    /// Appends `w` to both mirrors at the same position.
    pub(crate) fn schedule_node(&mut self, w: NodeId) {
        debug_assert!(self.is_unbalanced(w));
        let d1 = decide_balance(self.balance[w]);
        self.add(w, d1);
        self.pi2.push(w, d1.opposite());
    }

    /// Appends `u, v` to the first mirror and `v, u` to the second.
    pub(crate) fn schedule_edge(&mut self, u: NodeId, v: NodeId) {
        debug_assert!(self.balance[u] == 0 && self.balance[v] == 0);
        self.add(u, Decision::Y);
        self.add(v, Decision::N);
        self.pi2.push(v, Decision::Y);
        self.pi2.push(u, Decision::N);
    }

    /// Lexicographically smallest active edge with both ends outside `A`.
    pub(crate) fn find_free_edge(&self) -> Option<(NodeId, NodeId)> {
        let u = self
            .active
            .iter()
            .find(|&u| !self.in_a.contains(u) && self.outside[u] > 0)?;
        let v = self
            .graph
            .neighbors(u)
            .iter()
            .copied()
            .find(|&v| self.active.contains(v) && !self.in_a.contains(v))
            .expect("outside counter promised a free neighbor");
        debug_assert!(u < v);
        Some((u, v))
    }

    pub(crate) fn finish(self) -> MirrorPair {
        MirrorPair {
            a: self.in_a,
            pi_prime: self.pi1,
            pi_double_prime: self.pi2,
        }
    }
}

/// Builds the mirror pair over the whole graph.
pub fn run_algorithm1(graph: &Graph) -> MirrorPair {
    let mut b = MirrorBuilder::new(graph);
    b.activate(graph.nodes());
    loop {
        while let Some(w) = graph.nodes().find(|&w| b.is_unbalanced(w)) {
            b.schedule_node(w);
        }
        match b.find_free_edge() {
            Some((u, v)) => b.schedule_edge(u, v),
            None => break,
        }
    }
    let pair = b.finish();
    debug_assert!(pair.mirror_property_holds());
    pair
}

/// Takes the `Y`-richer mirror (ties to `pi_prime`) and appends the nodes
/// outside `A` in ascending order.
pub fn choose_and_extend(graph: &Graph, pair: &MirrorPair) -> Schedule {
    let chosen = pair.richer(Decision::Y);
    let mut order: Vec<NodeId> = chosen.nodes().collect();
    order.extend(graph.nodes().filter(|&v| !pair.a.contains(v)));
    Schedule::new(order).expect("mirror plus complement is a permutation")
}

/// Schedule with at least `n/2` decisions of `Y`.
pub fn schedule_y(graph: &Graph) -> Result<Schedule> {
    require_valid(graph)?;
    Ok(choose_and_extend(graph, &run_algorithm1(graph)))
}

/// The `Y` deciders of `schedule`, in schedule order: the promotion order
/// when a single product is offered.
pub fn one_product_order(graph: &Graph, schedule: &Schedule) -> Result<Vec<NodeId>> {
    let outcome = crate::dynamics::simulate(graph, schedule)?;
    Ok(schedule
        .order()
        .iter()
        .copied()
        .filter(|&v| outcome.decision(v) == Decision::Y)
        .collect())
}

/// Replays a one-product promotion: each consumer in `order` buys only if at
/// most half of her neighbors already own the product. Returns whether all buy.
pub fn replay_one_product(graph: &Graph, order: &[NodeId]) -> bool {
    let mut owns = NodeSet::new(graph.n());
    for &v in order {
        let owners = graph.degree_into(v, &owns);
        if 2 * owners > graph.degree(v) {
            return false;
        }
        owns.insert(v);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::simulate;
    use crate::generate::{complete, path, star};
    use proptest::prelude::*;
    use Decision::{N, Y};

    #[test]
    fn edge_graph_pair() {
        let g = path(2).unwrap();
        let pair = run_algorithm1(&g);
        assert_eq!(pair.pi_prime.entries(), &[(0, Y), (1, N)]);
        assert_eq!(pair.pi_double_prime.entries(), &[(1, Y), (0, N)]);
        assert_eq!(pair.a.len(), 2);
        assert!(pair.pi_prime.replays_consistently(&g));
        assert!(pair.pi_double_prime.replays_consistently(&g));
    }

    #[test]
    fn star_pair() {
        let g = star(4).unwrap();
        let pair = run_algorithm1(&g);
        assert_eq!(pair.pi_prime.entries(), &[(0, Y), (1, N), (2, N), (3, N)]);
        assert_eq!(
            pair.pi_double_prime.entries(),
            &[(1, Y), (0, N), (2, Y), (3, Y)]
        );
        assert!(pair.mirror_property_holds());
        let s = choose_and_extend(&g, &pair);
        assert_eq!(s.order(), &[1, 0, 2, 3]);
        assert_eq!(simulate(&g, &s).unwrap().count_y(), 3);
    }

    #[test]
    fn triangle_pair_leaves_balanced_node() {
        let g = complete(3).unwrap();
        let pair = run_algorithm1(&g);
        assert_eq!(pair.a.to_vec(), vec![0, 1]);
        let s = choose_and_extend(&g, &pair);
        assert_eq!(s.order(), &[0, 1, 2]);
        let out = simulate(&g, &s).unwrap();
        assert_eq!(out.decision(2), Y);
        assert_eq!(out.count_y(), 2);
    }

    #[test]
    fn star_family_gets_all_leaves_but_one() {
        for n in [2, 3, 4, 10, 50] {
            let g = star(n).unwrap();
            let s = schedule_y(&g).unwrap();
            assert_eq!(simulate(&g, &s).unwrap().count_y(), n - 1, "star({n})");
        }
    }

    #[test]
    fn one_product_examples() {
        let g = star(4).unwrap();
        let s = schedule_y(&g).unwrap();
        let buyers = one_product_order(&g, &s).unwrap();
        assert_eq!(buyers, vec![1, 2, 3]);
        assert!(replay_one_product(&g, &buyers));

        let k3 = complete(3).unwrap();
        let buyers = one_product_order(&k3, &schedule_y(&k3).unwrap()).unwrap();
        assert_eq!(buyers, vec![0, 2]);
        assert!(replay_one_product(&k3, &buyers));

        let e = path(2).unwrap();
        assert_eq!(
            one_product_order(&e, &schedule_y(&e).unwrap())
                .unwrap()
                .len(),
            1
        );
        assert!(!replay_one_product(&k3, &[0, 1, 2]));
    }

    #[test]
    fn rejects_disconnected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(schedule_y(&g).is_err());
    }

    proptest! {
        #[test]
        fn guarantee_and_structure(n in 2usize..40, p in 0.05f64..0.7, seed in any::<u64>()) {
            let g = crate::generate::connected_for_test(n, p, seed);
            let pair = run_algorithm1(&g);
            prop_assert!(pair.mirror_property_holds());
            prop_assert!(pair.pi_prime.replays_consistently(&g));
            prop_assert!(pair.pi_double_prime.replays_consistently(&g));
            let rest = pair.a.complement();
            prop_assert!(g.is_independent(&rest));
            for v in rest.iter() {
                for pi in [&pair.pi_prime, &pair.pi_double_prime] {
                    let y = pi.entries().iter().filter(|e| e.1 == Y && g.has_edge(v, e.0)).count();
                    let nn = pi.entries().iter().filter(|e| e.1 == N && g.has_edge(v, e.0)).count();
                    prop_assert_eq!(y, nn);
                }
            }
            let s = choose_and_extend(&g, &pair);
            let out = simulate(&g, &s).unwrap();
            prop_assert!(rest.iter().all(|v| out.decision(v) == Y));
            prop_assert!(2 * out.count_y() >= n);
            prop_assert!(replay_one_product(&g, &one_product_order(&g, &s).unwrap()));
        }
    }
}
