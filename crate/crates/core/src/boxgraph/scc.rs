use super::graph::Csr;

/// Strongly connected components by an iterative Tarjan pass.
///
/// Returns the component index of every vertex and the component count.
/// Components are numbered in the order Tarjan completes them (reverse
/// topological order of the condensation).
pub fn strongly_connected(g: &Csr) -> (Vec<u32>, usize) {
    const UNSEEN: u32 = u32::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    // (vertex, position in its successor list)
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut next_index = 0u32;
    let mut ncomp = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        frames.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let v = v as usize;
            let succ = g.successors(v);
            if (*pos as usize) < succ.len() {
                let w = succ[*pos as usize] as usize;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    frames.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                let p = parent as usize;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    on_stack[w] = false;
                    comp[w] = ncomp as u32;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    (comp, ncomp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
        let (c, k) = strongly_connected(&Csr::from_edges(n, edges));
        let mut out = vec![Vec::new(); k];
        for (v, &ci) in c.iter().enumerate() {
            out[ci as usize].push(v);
        }
        out.sort();
        out
    }

    #[test]
    fn path_has_singleton_components() {
        assert_eq!(
            groups(3, &[(0, 1), (1, 2)]),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn two_cycles_with_bridge() {
        let g = groups(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]);
        assert_eq!(g, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn long_cycle_does_not_recurse() {
        let n = 200_000u32;
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let (_, k) = strongly_connected(&Csr::from_edges(n as usize, &edges));
        assert_eq!(k, 1);
    }
}
