//! Sparse linear algebra over the two-element field.

/// Symmetric difference of two sorted index lists.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorts an index list and cancels repeated entries in pairs.
pub fn normalize(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    let mut out: Vec<u32> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// A row-sparse matrix over F2.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<Vec<u32>>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { cols, rows: Vec::new() }
    }

    /// Adds a row given by the columns of its nonzero entries; repeated
    /// columns cancel.
    pub fn push_row(&mut self, entries: Vec<u32>) {
        let row = normalize(entries);
        debug_assert!(row.iter().all(|&c| (c as usize) < self.cols));
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Rank by row echelon insertion. Columns are relabelled so the sparsest
    /// ones lead, and rows are inserted lightest first, which keeps fill-in
    /// low on the very sparse boundary matrices of cube complexes.
    pub fn rank(&self) -> usize {
        let mut weight = vec![0u32; self.cols];
        for r in &self.rows {
            for &c in r {
                weight[c as usize] += 1;
            }
        }
        let mut order: Vec<u32> = (0..self.cols as u32).collect();
        order.sort_by_key(|&c| (weight[c as usize], c));
        let mut relabel = vec![0u32; self.cols];
        for (new, &old) in order.iter().enumerate() {
            relabel[old as usize] = new as u32;
        }
        let mut rows: Vec<Vec<u32>> = self
            .rows
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                let mut v: Vec<u32> = r.iter().map(|&c| relabel[c as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        rows.sort_by_key(Vec::len);

        let mut pivot: Vec<Option<Vec<u32>>> = vec![None; self.cols];
        let mut rank = 0;
        for mut row in rows {
            while let Some(&lead) = row.first() {
                match &pivot[lead as usize] {
                    Some(p) => row = xor_sorted(&row, p),
                    None => {
                        pivot[lead as usize] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_rank(rows: &[u64]) -> usize {
        let mut basis: Vec<u64> = Vec::new();
        for &r in rows {
            let mut r = r;
            for &b in &basis {
                r = r.min(r ^ b);
            }
            if r != 0 {
                basis.push(r);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    }

    #[test]
    fn small_cases() {
        let mut m = SparseMatrix::new(3);
        m.push_row(vec![0, 1]);
        m.push_row(vec![1, 2]);
        m.push_row(vec![0, 2]);
        assert_eq!(m.rank(), 2);
        m.push_row(vec![2, 2]);
        assert_eq!(m.rank(), 2);
        assert_eq!(SparseMatrix::new(5).rank(), 0);
    }

    proptest! {
        #[test]
        fn agrees_with_dense(rows in proptest::collection::vec(any::<u32>(), 0..40), cols in 1usize..33) {
            let mask = if cols == 32 { u32::MAX } else { (1u32 << cols) - 1 };
            let mut m = SparseMatrix::new(cols);
            let mut dense = Vec::new();
            for r in rows {
                let r = r & mask;
                m.push_row((0..cols as u32).filter(|&c| r >> c & 1 == 1).collect());
                dense.push(r as u64);
            }
            prop_assert_eq!(m.rank(), dense_rank(&dense));
        }

        #[test]
        fn xor_is_symmetric_difference(a in proptest::collection::btree_set(0u32..50, 0..20),
                                       b in proptest::collection::btree_set(0u32..50, 0..20)) {
            let av: Vec<u32> = a.iter().copied().collect();
            let bv: Vec<u32> = b.iter().copied().collect();
            let expect: Vec<u32> = a.symmetric_difference(&b).copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            prop_assert_eq!(xor_sorted(&av, &bv), expect);
        }
    }
}
