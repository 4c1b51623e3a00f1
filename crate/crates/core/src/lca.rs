//! Constant-time lowest common ancestors via an Euler tour and a sparse
//! table of range minima over depths.

pub struct Lca {
    first: Vec<u32>,
    depth: Vec<u32>,
    table: Vec<Vec<u32>>,
}

impl Lca {
    /// `parent[v]` is `None` only for the root. Children are visited in
    /// index order.
    pub fn new(parent: &[Option<usize>]) -> Lca {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut root = 0;
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(v as u32),
                None => root = v,
            }
        }
        let mut depth = vec![0u32; n];
        let mut first = vec![0u32; n];
        let mut euler = Vec::with_capacity(2 * n);
        if n > 0 {
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            first[root] = 0;
            euler.push(root as u32);
            while let Some(top) = stack.last_mut() {
                let v = top.0;
                if top.1 < children[v].len() {
                    let c = children[v][top.1] as usize;
                    top.1 += 1;
                    depth[c] = depth[v] + 1;
                    first[c] = euler.len() as u32;
                    euler.push(c as u32);
                    stack.push((c, 0));
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        euler.push(p as u32);
                    }
                }
            }
        }
        let mut table = vec![euler];
        let mut span = 1;
        let len = table[0].len();
        while 2 * span <= len {
            let prev = table.last().unwrap();
            let row: Vec<u32> = (0..=len - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[a as usize] <= depth[b as usize] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            span *= 2;
        }
        Lca { first, depth, table }
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (mut a, mut b) = (self.first[u] as usize, self.first[v] as usize);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let len = b - a + 1;
        let k = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let (x, y) = (self.table[k][a], self.table[k][b + 1 - (1 << k)]);
        if self.depth[x as usize] <= self.depth[y as usize] {
            x as usize
        } else {
            y as usize
        }
    }
}
