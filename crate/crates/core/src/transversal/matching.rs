use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const UNREACHED: usize = usize::MAX;

/// Result of [`maximum_matching`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub size: usize,
    /// Partner of each left vertex.
    pub left: Vec<Option<usize>>,
    /// Partner of each right vertex.
    pub right: Vec<Option<usize>>,
    /// Left vertices reachable by alternating paths from unmatched left
    /// vertices in the last layering. Empty iff the matching saturates the
    /// left side; otherwise their neighbourhood is smaller than the set.
    pub hall_violator: Vec<usize>,
}

/// Hopcroft–Karp on a bipartite graph given by left adjacency lists, in
/// `O(E·√V)`.
pub fn maximum_matching(adjacency: &[Vec<usize>], right_len: usize) -> Matching {
    let left_len = adjacency.len();
    let mut left: Vec<Option<usize>> = vec![None; left_len];
    let mut right: Vec<Option<usize>> = vec![None; right_len];
    let mut dist = vec![UNREACHED; left_len];
    let mut size = 0;

    while let Some(limit) = layer(adjacency, &left, &right, &mut dist) {
        let mut next = vec![0usize; left_len];
        for u in 0..left_len {
            if left[u].is_none() && augment(u, limit, adjacency, &mut left, &mut right, &mut dist, &mut next)
            {
                size += 1;
            }
        }
    }

    let hall_violator = if size == left_len {
        Vec::new()
    } else {
        (0..left_len).filter(|&u| dist[u] != UNREACHED).collect()
    };
    Matching {
        size,
        left,
        right,
        hall_violator,
    }
}

/// Breadth-first layering from every unmatched left vertex. Returns the
/// layer of the shortest augmenting paths. When there is none the whole
/// alternating forest has been explored, so `dist` marks exactly the
/// alternating-reachable left vertices.
fn layer(
    adjacency: &[Vec<usize>],
    left: &[Option<usize>],
    right: &[Option<usize>],
    dist: &mut [usize],
) -> Option<usize> {
    let mut queue = VecDeque::new();
    for (u, partner) in left.iter().enumerate() {
        if partner.is_none() {
            dist[u] = 0;
            queue.push_back(u);
        } else {
            dist[u] = UNREACHED;
        }
    }
    let mut limit = None;
    while let Some(u) = queue.pop_front() {
        if limit.is_some_and(|l| dist[u] > l) {
            break;
        }
        for &v in &adjacency[u] {
            match right[v] {
                None => limit = Some(dist[u]),
                Some(w) if dist[w] == UNREACHED => {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    limit
}

fn augment(
    u: usize,
    limit: usize,
    adjacency: &[Vec<usize>],
    left: &mut [Option<usize>],
    right: &mut [Option<usize>],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[u] < adjacency[u].len() {
        let v = adjacency[u][next[u]];
        next[u] += 1;
        let free_or_deeper = match right[v] {
            None => dist[u] == limit,
            Some(w) => dist[w] == dist[u] + 1 && augment(w, limit, adjacency, left, right, dist, next),
        };
        if free_or_deeper {
            left[u] = Some(v);
            right[v] = Some(u);
            return true;
        }
    }
    // Dead end for this phase.
    dist[u] = UNREACHED;
    false
}
