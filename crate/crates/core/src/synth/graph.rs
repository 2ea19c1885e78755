use rand::seq::index;
use rand_distr::{Distribution, Poisson};

use crate::diffusion::{FollowerGraph, GraphBuilder};
use crate::{seed, Error, Result};

pub fn node_name(i: usize) -> String {
    format!("u{i}")
}

/// Random follower graph on `n_nodes` accounts named `u0, u1, ...`. Each
/// account's follower count is Poisson with mean `mean_out_degree`, capped
/// at `n_nodes - 1`, and its followers are drawn uniformly without
/// replacement from the other accounts.
pub fn gen_graph(n_nodes: usize, mean_out_degree: f64, seed: u64) -> Result<FollowerGraph> {
    if !(mean_out_degree >= 0.0) || !mean_out_degree.is_finite() {
        return Err(Error::param("mean_out_degree", "must be finite and non-negative"));
    }
    if n_nodes > 0 && mean_out_degree >= n_nodes as f64 {
        return Err(Error::param(
            "mean_out_degree",
            format!("{mean_out_degree} is not below the node count {n_nodes}"),
        ));
    }
    let mut b = GraphBuilder::new();
    let names: Vec<String> = (0..n_nodes).map(node_name).collect();
    for name in &names {
        b.intern(name);
    }
    let mut rng = seed::rng(seed::derive(seed, "graph", &[]));
    let poisson = (mean_out_degree > 0.0).then(|| Poisson::new(mean_out_degree).expect("positive mean"));
    for u in 0..n_nodes {
        let d = match &poisson {
            Some(p) => (p.sample(&mut rng) as usize).min(n_nodes - 1),
            None => 0,
        };
        for j in index::sample(&mut rng, n_nodes - 1, d) {
            let v = if j >= u { j + 1 } else { j };
            b.follow(&names[v], &names[u]);
        }
    }
    Ok(b.finish().0)
}
