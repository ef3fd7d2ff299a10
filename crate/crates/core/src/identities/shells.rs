/// Multi-index `(j_1..j_p)` with partial sums `u_0 = 0, u_q = u_{q-1} + j_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    j: Vec<usize>,
    u: Vec<usize>,
}

impl MultiIndex {
    pub fn new(j: Vec<usize>) -> Self {
        let mut u = Vec::with_capacity(j.len() + 1);
        u.push(0);
        for (k, &jk) in j.iter().enumerate() {
            u.push(u[k] + jk);
        }
        Self { j, u }
    }

    /// `j_1..j_p`, stored zero-based.
    pub fn j(&self) -> &[usize] {
        &self.j
    }

    /// `u_0..u_p`.
    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn order(&self) -> usize {
        self.u[self.u.len() - 1]
    }
}

/// All multi-indices of total order `order` in `p` slots, in lexicographic
/// order of `j`. The shell has `C(order + p - 1, p - 1)` members.
pub fn enumerate_shells(p: usize, order: usize) -> Shell {
    Shell::new(p, order, None)
}

/// Iterator over one shell, optionally restricted to `j_q <= bound_q`.
pub struct Shell {
    current: Option<Vec<usize>>,
    bounds: Option<Vec<Option<usize>>>,
}

impl Shell {
    pub(crate) fn new(p: usize, order: usize, bounds: Option<Vec<Option<usize>>>) -> Self {
        assert!(p >= 1, "a shell needs at least one slot");
        let mut first = vec![0; p];
        first[p - 1] = order;
        Self { current: Some(first), bounds }
    }

    fn within_bounds(&self, j: &[usize]) -> bool {
        match &self.bounds {
            None => true,
            Some(b) => j.iter().zip(b).all(|(&jq, bq)| bq.is_none_or(|m| jq <= m)),
        }
    }

    // Lexicographic successor among weak compositions with the same sum.
    fn advance(j: &mut [usize]) -> bool {
        let p = j.len();
        let mut suffix = j[p - 1];
        for i in (0..p - 1).rev() {
            if suffix > 0 {
                j[i] += 1;
                for v in &mut j[i + 1..p - 1] {
                    *v = 0;
                }
                j[p - 1] = suffix - 1;
                return true;
            }
            suffix += j[i];
        }
        false
    }
}

impl Iterator for Shell {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        loop {
            let j = self.current.as_mut()?;
            let out = j.clone();
            if !Self::advance(j) {
                self.current = None;
            }
            if self.within_bounds(&out) {
                return Some(MultiIndex::new(out));
            }
        }
    }
}
