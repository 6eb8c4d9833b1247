use rand::seq::SliceRandom;
use rand::Rng;

use super::{Link, Node, Role, Topology, Variant};

impl Topology {
    /// Random topology with 3 to `max_nodes` nodes and at most `max_links`
    /// links on which every variant's requirement holds with no element down.
    ///
    /// Half of the graphs get one or two controllers; forwarding nodes are
    /// spread over one to three sites, with a few transit nodes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_links: usize) -> Topology {
        assert!(max_nodes >= 3 && max_links >= max_nodes - 1, "too small for a connected graph");
        loop {
            let t = Self::random_candidate(rng, max_nodes, max_links);
            if [Variant::Tn, Variant::Fsdn, Variant::Csdn].into_iter().all(|v| t.works(v, &[])) {
                return t;
            }
        }
    }

    fn random_candidate<R: Rng + ?Sized>(rng: &mut R, max_nodes: usize, max_links: usize) -> Topology {
        let n = rng.gen_range(3..=max_nodes);
        let ctrl = if n >= 4 { rng.gen_range(1..=2) } else { 1 };
        let sites = rng.gen_range(1..=3);
        let nodes: Vec<Node> = (0..n)
            .map(|i| {
                let role = if i < n - ctrl { Role::Fwd } else { Role::Ctrl };
                let site = (role == Role::Fwd && (i < sites || rng.gen_bool(0.8)))
                    .then(|| format!("S{}", if i < sites { i } else { rng.gen_range(0..sites) }));
                Node { id: format!("N{i}"), role, site }
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = (1..n).map(|k| (order[rng.gen_range(0..k)], order[k])).collect();
        let target = rng.gen_range(n - 1..=max_links);
        let mut attempts = 0;
        while pairs.len() < target && attempts < 100 {
            attempts += 1;
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && !pairs.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                pairs.push((a, b));
            }
        }
        let links = pairs
            .into_iter()
            .enumerate()
            .map(|(k, (a, b))| Link { id: format!("E{k}"), a: format!("N{a}"), b: format!("N{b}") })
            .collect();
        Topology { nodes, links, perfect: Default::default() }
    }
}
