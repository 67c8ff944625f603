use crate::instance::ProjectInstance;
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpmResult {
    pub makespan: u32,
    /// Earliest start per network node.
    pub earliest_starts: Vec<u32>,
}

/// Resource-unconstrained forward pass. Projects cannot start before their
/// arrival date.
pub fn cpm(network: &Network) -> CpmResult {
    let mut es = vec![0u32; network.len()];
    for &i in network.topological_order() {
        let node = &network.nodes[i];
        let ready = node
            .predecessors
            .iter()
            .map(|&p| es[p] + network.nodes[p].duration)
            .max()
            .unwrap_or(0);
        es[i] = ready.max(network.arrival(i));
    }
    CpmResult {
        makespan: network.planned_finish(&es),
        earliest_starts: es,
    }
}

/// Makespan and earliest starts of a single instance, indexed by activity id.
pub fn cpm_makespan(instance: &ProjectInstance) -> (u32, Vec<u32>) {
    let r = cpm(&Network::from_instance(instance));
    (r.makespan, r.earliest_starts)
}

/// Backward pass: latest starts that still meet `horizon`.
pub fn late_starts(network: &Network, horizon: u32) -> Vec<u32> {
    let mut ls = vec![0u32; network.len()];
    for &i in network.topological_order().iter().rev() {
        let node = &network.nodes[i];
        let latest_finish = node
            .successors
            .iter()
            .map(|&s| ls[s])
            .min()
            .unwrap_or(horizon);
        ls[i] = latest_finish.saturating_sub(node.duration);
    }
    ls
}
