/// 2-SAT over boolean variables, solved through the strongly connected
/// components of the implication graph.
#[derive(Debug, Clone)]
pub struct TwoSat {
    n: usize,
    graph: Vec<Vec<usize>>,
}

impl TwoSat {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            graph: vec![Vec::new(); 2 * n],
        }
    }

    fn node(var: usize, value: bool) -> usize {
        2 * var + usize::from(!value)
    }

    /// Adds `(x = a) ∨ (y = b)`.
    pub fn either(&mut self, x: usize, a: bool, y: usize, b: bool) {
        self.graph[Self::node(x, !a)].push(Self::node(y, b));
        self.graph[Self::node(y, !b)].push(Self::node(x, a));
    }

    /// Forces `x = a`.
    pub fn set(&mut self, x: usize, a: bool) {
        self.either(x, a, x, a);
    }

    /// Adds `¬((x = a) ∧ (y = b))`.
    pub fn not_both(&mut self, x: usize, a: bool, y: usize, b: bool) {
        self.either(x, !a, y, !b);
    }

    /// A satisfying assignment, if any.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = tarjan(&self.graph);
        // Tarjan numbers components in reverse topological order
        (0..self.n)
            .map(|v| {
                let (t, f) = (comp[Self::node(v, true)], comp[Self::node(v, false)]);
                (t != f).then_some(t < f)
            })
            .collect()
    }
}

fn tarjan(graph: &[Vec<usize>]) -> Vec<usize> {
    let n = graph.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = graph[v].get(*edge) {
                *edge += 1;
                if index[w] == UNSEEN {
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
                    let w = stack.pop().expect("tarjan stack underflow");
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

#[cfg(test)]
mod tests {
    use super::*;

    fn satisfied(clauses: &[(usize, bool, usize, bool)], x: &[bool]) -> bool {
        clauses
            .iter()
            .all(|&(a, va, b, vb)| x[a] == va || x[b] == vb)
    }

    #[test]
    fn simple_instances() {
        let mut s = TwoSat::new(2);
        s.either(0, true, 1, true);
        s.set(0, false);
        assert_eq!(s.solve(), Some(vec![false, true]));
        s.set(1, false);
        assert_eq!(s.solve(), None);
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let n = rng.random_range(1..=6);
            let m = rng.random_range(0..=12);
            let clauses: Vec<_> = (0..m)
                .map(|_| {
                    (
                        rng.random_range(0..n),
                        rng.random_bool(0.5),
                        rng.random_range(0..n),
                        rng.random_bool(0.5),
                    )
                })
                .collect();
            let mut s = TwoSat::new(n);
            for &(a, va, b, vb) in &clauses {
                s.either(a, va, b, vb);
            }
            let brute = (0..1u32 << n).any(|mask| {
                let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                satisfied(&clauses, &x)
            });
            match s.solve() {
                Some(x) => assert!(satisfied(&clauses, &x)),
                None => assert!(!brute),
            }
        }
    }
}
