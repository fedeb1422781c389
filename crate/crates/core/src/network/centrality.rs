use std::collections::{BTreeMap, VecDeque};

/// Betweenness centrality of every node of a directed, unweighted graph (Brandes).
///
/// Scores are unnormalized pair-dependency sums. Nodes are keyed by id.
pub fn betweenness<N: Ord + Clone>(edges: &[(N, N)]) -> BTreeMap<N, f64> {
    let mut ids: BTreeMap<N, usize> = BTreeMap::new();
    for (a, b) in edges {
        for n in [a, b] {
            let next = ids.len();
            ids.entry(n.clone()).or_insert(next);
        }
    }
    let n = ids.len();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        let (ia, ib) = (ids[a], ids[b]);
        if ia != ib && !adj[ia].contains(&ib) {
            adj[ia].push(ib);
        }
    }

    let mut score = vec![0.0; n];
    for s in 0..n {
        let mut stack = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        let mut delta = vec![0.0; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    ids.into_iter().map(|(id, i)| (id, score[i])).collect()
}

/// Nodes by descending betweenness; equal scores keep ascending id order.
pub fn criticality_rank<N: Ord + Clone>(edges: &[(N, N)]) -> Vec<(N, f64)> {
    let mut ranked: Vec<(N, f64)> = betweenness(edges).into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Enumerates every shortest path explicitly and counts the fraction through each node.
    fn brute_force(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
        fn paths(adj: &[Vec<usize>], t: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let v = *cur.last().unwrap();
            if v == t {
                out.push(cur.clone());
                return;
            }
            if cur.len() > len {
                return;
            }
            for &w in &adj[v] {
                if !cur.contains(&w) {
                    cur.push(w);
                    paths(adj, t, len, cur, out);
                    cur.pop();
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
            }
        }
        let mut score = vec![0.0; n];
        for s in 0..n {
            for t in 0..n {
                if s == t {
                    continue;
                }
                let mut all = Vec::new();
                paths(&adj, t, n, &mut vec![s], &mut all);
                let Some(min) = all.iter().map(Vec::len).min() else {
                    continue;
                };
                let shortest: Vec<_> = all.into_iter().filter(|p| p.len() == min).collect();
                for (v, sc) in score.iter_mut().enumerate() {
                    if v != s && v != t {
                        let through = shortest.iter().filter(|p| p.contains(&v)).count();
                        *sc += through as f64 / shortest.len() as f64;
                    }
                }
            }
        }
        score
    }

    #[test]
    fn five_user_topology() {
        let edges = [(1, 3), (3, 5), (4, 3), (3, 2)];
        let rank = criticality_rank(&edges);
        // 3 relays 1->5, 1->2, 4->5 and 4->2
        assert_eq!(rank[0], (3, 4.0));
        assert!(rank[1..].iter().all(|(_, s)| *s == 0.0));
        assert_eq!(rank.iter().map(|r| r.0).collect::<Vec<_>>(), vec![3, 1, 2, 4, 5]);
    }

    #[test]
    fn single_link() {
        let rank = criticality_rank(&[("a", "b")]);
        assert_eq!(rank, vec![("a", 0.0), ("b", 0.0)]);
    }

    #[test]
    fn chain_center_first() {
        let rank = criticality_rank(&[(1, 2), (2, 3), (3, 4), (4, 5)]);
        assert_eq!(rank[0], (3, 4.0));
        assert_eq!(rank[1], (2, 3.0));
        assert_eq!(rank[2], (4, 3.0));
    }

    fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (2usize..7).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 1..14)))
    }

    proptest! {
        #[test]
        fn matches_path_enumeration((n, edges) in graph()) {
            let fast = betweenness(&edges);
            let slow = brute_force(n, &edges);
            for (id, s) in fast {
                prop_assert!((s - slow[id]).abs() < 1e-9, "node {id}: {s} vs {}", slow[id]);
            }
        }

        #[test]
        fn relabeling_invariant((n, edges) in graph(), shift in 1usize..50) {
            // relabel by a permutation that reverses order and shifts
            let map = |v: usize| shift + (n - 1 - v);
            let relabeled: Vec<_> = edges.iter().map(|&(a, b)| (map(a), map(b))).collect();
            let before = betweenness(&edges);
            let after = betweenness(&relabeled);
            for (id, s) in before {
                prop_assert!((after[&map(id)] - s).abs() < 1e-9);
            }
        }
    }
}
