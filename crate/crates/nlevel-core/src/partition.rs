//! The lattice of set partitions of {0,…,n−1}: enumeration, refinement
//! order, Möbius function, block embeddings, and the inclusion–exclusion
//! sieve converting distinct-index sums to unrestricted sums.

use std::collections::HashMap;

use crate::error::Error;

/// A set partition in canonical form: each block ascending, blocks ordered
/// by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Build from arbitrary block data; canonicalizes and validates that the
    /// blocks partition {0,…,n−1}.
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut seen: Vec<usize> = blocks.iter().flatten().copied().collect();
        seen.sort_unstable();
        let n = seen.len();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(
                "blocks must partition 0..n without repeats".into(),
            ));
        }
        Ok(SetPartition { blocks })
    }

    /// Discrete partition {{0},{1},…}: the bottom of the refinement order.
    pub fn discrete(n: usize) -> Self {
        SetPartition {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// One-block partition: the top element.
    pub fn full(n: usize) -> Self {
        SetPartition {
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Ground-set size n.
    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Number of blocks ν.
    pub fn nu(&self) -> usize {
        self.blocks.len()
    }

    /// block_of[i] = index of the block containing i (in canonical order).
    pub fn block_index(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (bi, b) in self.blocks.iter().enumerate() {
            for &i in b {
                out[i] = bi;
            }
        }
        out
    }

    /// Refinement partial order: true iff every block of `self` lies inside
    /// a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        let idx = coarser.block_index();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&i| idx[i] == idx[b[0]]))
    }

    /// Embedding ι_G: lift a ν-tuple of block values to an n-tuple constant
    /// on blocks.
    pub fn embed<T: Copy>(&self, block_values: &[T]) -> Vec<T> {
        assert_eq!(block_values.len(), self.nu());
        let idx = self.block_index();
        idx.into_iter().map(|bi| block_values[bi]).collect()
    }

    /// The partition of the *blocks* of `finer` induced by `self`
    /// (requires `finer ⪯ self`): element j of the result corresponds to a
    /// block of `self`, holding indices of `finer`'s blocks inside it.
    pub fn quotient(&self, finer: &SetPartition) -> SetPartition {
        debug_assert!(finer.refines(self));
        let idx = self.block_index();
        let mut groups: Vec<Vec<usize>> = vec![vec![]; self.nu()];
        for (fb, b) in finer.blocks.iter().enumerate() {
            groups[idx[b[0]]].push(fb);
        }
        groups.retain(|g| !g.is_empty());
        SetPartition::new(groups).expect("quotient blocks partition block indices")
    }
}

/// All partitions of an n-set, in restricted-growth-string order.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>, Error> {
    if n < 1 || n > 12 {
        return Err(Error::OutOfRange(format!(
            "partition enumeration supports 1 ≤ n ≤ 12, got {n}"
        )));
    }
    let mut out = vec![];
    let mut rgs = vec![0usize; n];
    fn rec(rgs: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<SetPartition>) {
        if pos == rgs.len() {
            let nb = max_used + 1;
            let mut blocks: Vec<Vec<usize>> = vec![vec![]; nb];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i);
            }
            out.push(SetPartition::new(blocks).unwrap());
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[pos] = b;
            rec(rgs, pos + 1, max_used.max(b), out);
        }
    }
    // position 0 is forced to block 0
    rec(&mut rgs, 1, 0, &mut out);
    Ok(out)
}

/// μ over a single interval from the bottom: μ(0̂, G) = ∏_B (−1)^{|B|−1}(|B|−1)!.
pub fn moebius_from_bottom(g: &SetPartition) -> i64 {
    g.blocks()
        .iter()
        .map(|b| {
            let m = b.len() as i64;
            let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
            sign * factorial(m - 1)
        })
        .product()
}

fn factorial(k: i64) -> i64 {
    (1..=k).product::<i64>().max(1)
}

/// General Möbius function μ(H, G) for H ⪯ G, by the memoized defining
/// recursion μ(H,H)=1, Σ_{H⪯K⪯G} μ(H,K) = 0.
pub struct MoebiusTable {
    cache: HashMap<(SetPartition, SetPartition), i64>,
}

impl MoebiusTable {
    pub fn new() -> Self {
        MoebiusTable {
            cache: HashMap::new(),
        }
    }

    pub fn moebius(&mut self, h: &SetPartition, g: &SetPartition) -> Result<i64, Error> {
        if !h.refines(g) {
            return Err(Error::InvalidPartition(
                "μ(H,G) requires H ⪯ G".into(),
            ));
        }
        self.compute(h, g)
    }

    fn compute(&mut self, h: &SetPartition, g: &SetPartition) -> Result<i64, Error> {
        if h == g {
            return Ok(1);
        }
        if let Some(&v) = self.cache.get(&(h.clone(), g.clone())) {
            return Ok(v);
        }
        // Enumerate K with H ⪯ K ≺ G via partitions of H's blocks that are
        // refined by G's grouping of them.
        let n = h.n();
        let all = enumerate_partitions(n)?;
        let mut acc = 0i64;
        for k in &all {
            if h.refines(k) && k.refines(g) && k != g {
                acc += self.compute(h, k)?;
            }
        }
        let v = -acc;
        self.cache.insert((h.clone(), g.clone()), v);
        Ok(v)
    }
}

impl Default for MoebiusTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Distinct-index sieve: Σ over ν(G)-tuples with *all indices distinct* of
/// `g`, expressed through unrestricted sums. Evaluates
/// Σ_{G ⪰ 0̂} μ(0̂,G) Σ_{unrestricted tuples} g(ι_G(tuple)).
pub fn sieve_distinct_sum<F: Fn(&[usize]) -> f64>(
    n: usize,
    range: usize,
    g: F,
) -> Result<f64, Error> {
    let mut total = 0.0;
    for part in enumerate_partitions(n)? {
        let mu = moebius_from_bottom(&part) as f64;
        let nu = part.nu();
        // iterate over range^nu tuples
        let mut tuple = vec![0usize; nu];
        loop {
            total += mu * g(&part.embed(&tuple));
            // increment
            let mut k = 0;
            loop {
                if k == nu {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < range {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == nu {
                break;
            }
        }
    }
    Ok(total)
}

/// Brute-force distinct-tuple sum for cross-checks.
pub fn brute_distinct_sum<F: Fn(&[usize]) -> f64>(n: usize, range: usize, g: F) -> f64 {
    let mut total = 0.0;
    let mut tuple = vec![0usize; n];
    loop {
        let mut distinct = true;
        for i in 0..n {
            for j in 0..i {
                if tuple[i] == tuple[j] {
                    distinct = false;
                }
            }
        }
        if distinct {
            total += g(&tuple);
        }
        let mut k = 0;
        loop {
            if k == n {
                break;
            }
            tuple[k] += 1;
            if tuple[k] < range {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    total
}
