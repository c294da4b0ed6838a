use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum bipartite matching by Hopcroft-Karp.
///
/// `adj[u]` lists the right vertices adjacent to left vertex `u`. Returns
/// `match_left[u]` (right partner of `u` or `None`) and `match_right`.
pub(crate) fn hopcroft_karp(
    adj: &[Vec<usize>],
    right_len: usize,
) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let left_len = adj.len();
    let mut ml = vec![FREE; left_len];
    let mut mr = vec![FREE; right_len];
    let mut dist = vec![0usize; left_len];

    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left_len {
            if ml[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mr[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }

        // DFS along layers with an explicit stack of (vertex, next edge).
        let mut progress = false;
        for root in 0..left_len {
            if ml[root] != FREE {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (u, ref mut e)) = stack.last_mut() {
                if *e == adj[u].len() {
                    dist[u] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let v = adj[u][*e];
                *e += 1;
                let w = mr[v];
                if w == FREE {
                    // augment along the stack
                    let mut right = v;
                    while let Some((x, _)) = stack.pop() {
                        let prev = ml[x];
                        ml[x] = right;
                        mr[right] = x;
                        right = prev;
                    }
                    progress = true;
                    break;
                } else if dist[w] == dist[u] + 1 {
                    stack.push((w, 0));
                }
            }
        }
        if !progress {
            break;
        }
    }

    let wrap = |v: usize| (v != FREE).then_some(v);
    (
        ml.into_iter().map(wrap).collect(),
        mr.into_iter().map(wrap).collect(),
    )
}

/// Left vertices reachable from free left vertices by alternating paths
/// (non-matching edge left to right, matching edge right to left), and the
/// right vertices visited on the way.
pub(crate) fn alternating_reach(
    adj: &[Vec<usize>],
    match_left: &[Option<usize>],
    match_right: &[Option<usize>],
) -> (Vec<bool>, Vec<bool>) {
    let mut left_seen = vec![false; adj.len()];
    let mut right_seen = vec![false; match_right.len()];
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&u| match_left[u].is_none()).collect();
    for &u in &queue {
        left_seen[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if match_left[u] == Some(v) || right_seen[v] {
                continue;
            }
            right_seen[v] = true;
            if let Some(w) = match_right[v] {
                if !left_seen[w] {
                    left_seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    (left_seen, right_seen)
}
