//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
//!
//! Left vertices are processed in index order and each tries its neighbours
//! in the order given, so the result is deterministic for a fixed input.

/// Returns `matched[l] = Some(r)` for a maximum matching.
pub fn max_matching(adjacency: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    let mut seen = vec![false; n_right];
    for l in 0..adjacency.len() {
        seen.iter_mut().for_each(|s| *s = false);
        augment(l, adjacency, &mut owner, &mut seen);
    }
    let mut matched = vec![None; adjacency.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = *o {
            matched[l] = Some(r);
        }
    }
    matched
}

fn augment(l: usize, adjacency: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &adjacency[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let free = match owner[r] {
            None => true,
            Some(other) => augment(other, adjacency, owner, seen),
        };
        if free {
            owner[r] = Some(l);
            return true;
        }
    }
    false
}

/// A matching saturating every left vertex, if one exists.
pub fn perfect_left_matching(adjacency: &[Vec<usize>], n_right: usize) -> Option<Vec<usize>> {
    max_matching(adjacency, n_right).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmenting_path_reassigns() {
        // 0 -> {0,1}, 1 -> {0}: the second vertex forces the first onto 1.
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(perfect_left_matching(&adj, 2), Some(vec![1, 0]));
    }

    #[test]
    fn hall_violation() {
        let adj = vec![vec![0], vec![0]];
        assert_eq!(perfect_left_matching(&adj, 1), None);
        assert_eq!(max_matching(&adj, 1).iter().flatten().count(), 1);
    }

    #[test]
    fn empty_left_side() {
        assert_eq!(perfect_left_matching(&[], 3), Some(vec![]));
    }
}
