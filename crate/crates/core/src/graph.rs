//! Directed-graph helpers over adjacency lists.

/// Strongly connected components, in reverse topological order (Tarjan).
pub(crate) fn strongly_connected_components(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0usize;
    // explicit call stack of (node, next child position)
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }
    components
}

/// Whether a component carries a cycle (more than one vertex, or a self-loop).
pub(crate) fn has_cycle(succ: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Period of an irreducible component: gcd of `level(u) + 1 - level(v)` over its edges.
pub(crate) fn component_period(succ: &[Vec<usize>], comp: &[usize], member: &[bool]) -> usize {
    let n = succ.len();
    let mut level = vec![usize::MAX; n];
    let start = comp[0];
    level[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for &v in &succ[u] {
            if !member[v] {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let diff = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, diff);
            }
        }
    }
    g
}

/// States admitting an infinite forward path.
pub(crate) fn essential_states(succ: &[Vec<usize>]) -> Vec<bool> {
    let n = succ.len();
    let mut alive = vec![true; n];
    let mut out_degree: Vec<usize> = succ.iter().map(Vec::len).collect();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, list) in succ.iter().enumerate() {
        for &v in list {
            pred[v].push(u);
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&u| out_degree[u] == 0).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &u in &pred[v] {
            if alive[u] {
                out_degree[u] -= 1;
                if out_degree[u] == 0 {
                    queue.push(u);
                }
            }
        }
    }
    alive
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_of_two_cycles_joined() {
        // 0 <-> 1 -> 2 <-> 3
        let succ = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let mut comps = strongly_connected_components(&succ);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn period_of_bipartite_cycle() {
        let succ = vec![vec![1], vec![0]];
        let member = vec![true, true];
        assert_eq!(component_period(&succ, &[0, 1], &member), 2);
        let succ = vec![vec![0, 1], vec![0]];
        assert_eq!(component_period(&succ, &[0, 1], &member), 1);
    }

    #[test]
    fn dead_ends_are_pruned() {
        // 0 -> 1 -> 2 (dead), 0 -> 0
        let succ = vec![vec![0, 1], vec![2], vec![]];
        assert_eq!(essential_states(&succ), vec![true, false, false]);
    }
}
