//! Same-label crossing checks spread over a thread pool. The verdict is the
//! one the sequential certifier returns, whatever the number of threads.

use lineorder_core::bundle::{certify_embedding, edges_cross, CayleyBallGraph, HeightWitness, Verdict};
use lineorder_core::realization::OrderEmbedding;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// `threads <= 1` runs the sequential certifier.
pub fn certify(graph: &CayleyBallGraph, heights: &OrderEmbedding, threads: usize) -> Result<HeightWitness> {
    if threads <= 1 || heights.repeated_height().is_some() {
        return Ok(certify_embedding(graph, heights)?);
    }
    for v in 0..graph.vertices().len() {
        if heights.height(v).is_none() {
            return Err(lineorder_core::Error::MissingHeight(v).into());
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    let verdict = pool.install(|| {
        for s in 0..graph.ctx().generator_count() {
            let edges = graph.edges_labelled(s);
            let least = (0..edges.len()).into_par_iter().find_map_first(|i| {
                edges[i + 1..]
                    .iter()
                    .find(|e2| edges_cross(heights, &edges[i], e2).unwrap_or(false))
                    .map(|e2| (edges[i], *e2))
            });
            if let Some((a, b)) = least {
                return Verdict::Crossing(a, b);
            }
        }
        Verdict::Certified
    });
    Ok(HeightWitness {
        graph: graph.clone(),
        heights: heights.clone(),
        verdict,
    })
}
