pub mod oracle;

use std::collections::BTreeSet;

use densub::Clustering;

/// A clustering's clusters as (dims, members) pairs.
#[allow(dead_code)]
pub fn pairs(c: &Clustering) -> BTreeSet<oracle::Pair> {
    c.clusters
        .iter()
        .map(|cl| (cl.subspace.dims().to_vec(), cl.members.clone()))
        .collect()
}
