use super::Generator;

/// Strongly connected components with no outgoing edges, each sorted, in
/// order of their smallest member.
pub fn bottom_classes(gen: &Generator) -> Vec<Vec<usize>> {
    let n = gen.n();
    let comp = tarjan(gen);
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut leaves = vec![true; ncomp];
    for i in 0..n {
        if gen.row(i).any(|(j, _)| comp[j] != comp[i]) {
            leaves[comp[i]] = false;
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for i in 0..n {
        if leaves[comp[i]] {
            classes[comp[i]].push(i);
        }
    }
    let mut out: Vec<Vec<usize>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
    out.sort_by_key(|c| c[0]);
    out
}

fn tarjan(gen: &Generator) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = gen.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let adj: Vec<Vec<usize>> = (0..n).map(|i| gen.row(i).map(|(j, _)| j).collect()).collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}
