//! Set partitions of `{1..n}`, the refinement order, non-crossing partitions
//! and the classical Kreweras complement.
//!
//! Partitions are kept in a canonical form — blocks sorted by their minimum,
//! elements ascending inside each block — so set-level identities can be
//! tested by structural equality. The text form joins elements with `,` and
//! blocks with `|`, e.g. `"1,3,5|2,4|6,8|7"`.

use std::fmt;

use crate::{Error, Result, MAX_GROUND};

/// A set partition of `{1, ..., n}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from blocks, validating the cover and normalizing.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ground set must be non-empty".into()));
        }
        let mut seen = vec![false; n + 1];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            b.sort_unstable();
            for &x in &b {
                if x == 0 || x > n {
                    return Err(Error::InvalidArgument(format!(
                        "element {x} outside 1..{n}"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidArgument(format!(
                        "element {x} appears in two blocks"
                    )));
                }
                seen[x] = true;
            }
            canon.push(b);
        }
        if seen[1..=n].iter().any(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "blocks do not cover 1..{n}"
            )));
        }
        canon.sort_by_key(|b| b[0]);
        Ok(Partition { n, blocks: canon })
    }

    /// The discrete partition `0_n` of all singletons.
    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|k| vec![k]).collect(),
        }
    }

    /// The full partition `1_n` with a single block.
    pub fn full(n: usize) -> Self {
        Partition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks, written |π|.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index (into `blocks()`) of the block containing `x`.
    pub fn block_index_of(&self, x: usize) -> Result<usize> {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .ok_or_else(|| Error::InvalidArgument(format!("element {x} outside ground set")))
    }

    /// Per-element block indices, 1..=n positions mapped to block index.
    pub fn block_assignment(&self) -> Vec<usize> {
        let mut a = vec![0; self.n + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                a[x] = i;
            }
        }
        a
    }

    /// Restriction to a subset of nodes, relabelled to `1..m` keeping order.
    pub fn restrict(&self, nodes: &[usize]) -> Result<Partition> {
        let mut sorted = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || sorted != nodes {
            return Err(Error::InvalidArgument(
                "restriction nodes must be strictly ascending and non-empty".into(),
            ));
        }
        let mut relabel = std::collections::HashMap::new();
        for (i, &x) in sorted.iter().enumerate() {
            if x == 0 || x > self.n {
                return Err(Error::InvalidArgument(format!(
                    "restriction node {x} outside ground set"
                )));
            }
            relabel.insert(x, i + 1);
        }
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let nb: Vec<usize> = b.iter().filter_map(|x| relabel.get(x).copied()).collect();
            if !nb.is_empty() {
                blocks.push(nb);
            }
        }
        Partition::new(sorted.len(), blocks)
    }

    /// Applies a permutation: `s·π = {s(V_1), ..., s(V_k)}`.
    pub fn apply_images(&self, images: &[usize]) -> Result<Partition> {
        if images.len() != self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "permutation on {} points applied to partition of {}",
                images.len().saturating_sub(1),
                self.n
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| images[x]).collect())
            .collect();
        Partition::new(self.n, blocks)
    }

    /// Parses the canonical text form, inferring the ground-set size from the
    /// element count.
    pub fn parse_infer(s: &str) -> Result<Self> {
        let n = s.split(['|', ',']).count();
        Self::parse(n, s)
    }

    /// Parses the canonical text form, rejecting non-canonical input.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let mut block = Vec::new();
            for e in part.split(',') {
                let e = e.trim();
                let x: usize = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element {e:?} in partition {s:?}")))?;
                block.push(x);
            }
            blocks.push(block);
        }
        let p = Partition::new(n, blocks.clone())?;
        let canon_blocks: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                let mut c = b.clone();
                c.sort_unstable();
                c
            })
            .collect();
        if p.blocks != canon_blocks {
            return Err(Error::Parse(format!(
                "partition {s:?} is not in canonical form; write it as {p}"
            )));
        }
        Ok(p)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for b in &self.blocks {
            if !first {
                write!(f, "|")?;
            }
            first = false;
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

fn guard(n: usize, what: &'static str) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::SizeLimit {
            what,
            got: n,
            max: MAX_GROUND,
        });
    }
    Ok(())
}

/// Visits every set partition of `{1..n}` in restricted-growth-string order.
pub fn for_each_set_partition<F: FnMut(&Partition)>(n: usize, mut f: F) -> Result<()> {
    guard(n, "set partition enumeration")?;
    // rgs[k] = block index of element k+1; rgs[k] <= 1 + max(rgs[..k]).
    let mut rgs = vec![0usize; n];
    loop {
        let nblocks = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); nblocks];
        for (k, &b) in rgs.iter().enumerate() {
            blocks[b].push(k + 1);
        }
        f(&Partition { n, blocks });

        // Increment the RGS from the right.
        let mut k = n;
        loop {
            if k == 1 {
                return Ok(());
            }
            k -= 1;
            let max_prefix = rgs[..k].iter().copied().max().unwrap();
            if rgs[k] <= max_prefix {
                rgs[k] += 1;
                for r in rgs[k + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// All partitions of `{1..n}`; the count is the n-th Bell number.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for_each_set_partition(n, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Non-crossing test straight from the gap condition: for distinct blocks
/// `V = {v_1 < ... < v_r}` and `W = {w_1 < ... < w_s}`, each consecutive gap
/// of `V` contains the first element of `W` iff it contains the last.
pub fn is_non_crossing(p: &Partition) -> bool {
    let blocks = p.blocks();
    for v in blocks {
        for w in blocks {
            if std::ptr::eq(v, w) {
                continue;
            }
            let w_first = w[0];
            let w_last = *w.last().unwrap();
            for l in 0..v.len().saturating_sub(1) {
                let lo = v[l];
                let hi = v[l + 1];
                let first_in = lo < w_first && w_first < hi;
                let last_in = lo < w_last && w_last < hi;
                if first_in != last_in {
                    return false;
                }
            }
        }
    }
    true
}

/// Visits every non-crossing partition of `{1..n}`.
///
/// Elements are placed top-down keeping a stack of open blocks: an element
/// either starts a new open block or joins an open one, closing everything
/// nested above it.
pub fn for_each_nc<F: FnMut(&Partition)>(n: usize, mut f: F) -> Result<()> {
    guard(n, "non-crossing enumeration")?;
    struct State<'a, F> {
        n: usize,
        closed: Vec<Vec<usize>>,
        stack: Vec<Vec<usize>>,
        f: &'a mut F,
    }
    fn rec<F: FnMut(&Partition)>(k: usize, st: &mut State<'_, F>) {
        if k > st.n {
            let mut blocks = st.closed.clone();
            blocks.extend(st.stack.iter().cloned());
            blocks.sort_by_key(|b| b[0]);
            (st.f)(&Partition { n: st.n, blocks });
            return;
        }
        // Start a new open block.
        st.stack.push(vec![k]);
        rec(k + 1, st);
        st.stack.pop();
        // Join an open block; blocks nested above it close for good.
        for i in 0..st.stack.len() {
            let popped: Vec<Vec<usize>> = st.stack.drain(i + 1..).collect();
            let plen = popped.len();
            st.closed.extend(popped);
            st.stack[i].push(k);
            rec(k + 1, st);
            st.stack[i].pop();
            let tail: Vec<Vec<usize>> = st
                .closed
                .drain(st.closed.len() - plen..)
                .collect();
            st.stack.extend(tail);
        }
    }
    let mut st = State {
        n,
        closed: Vec::new(),
        stack: Vec::new(),
        f: &mut f,
    };
    rec(1, &mut st);
    Ok(())
}

/// All non-crossing partitions of `{1..n}`; the count is Catalan(n).
pub fn enumerate_nc(n: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for_each_nc(n, |p| out.push(p.clone()))?;
    out.sort();
    Ok(out)
}

/// Refinement order: `p <= q` iff every block of `p` lies inside a block of `q`.
pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "refines over ground sets {} and {}",
            p.n(),
            q.n()
        )));
    }
    let qa = q.block_assignment();
    for b in p.blocks() {
        let target = qa[b[0]];
        if b.iter().any(|&x| qa[x] != target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical Kreweras complement on `NC(n)`.
///
/// Interleave `1, 1̄, 2, 2̄, ..., n, n̄`; the complement is the largest
/// partition of the barred points whose union with `p` stays non-crossing.
/// Bars `i < j` end up together exactly when no block of `p` is split by the
/// window `{i+1, .., j}`, which is the relation computed here.
pub fn kreweras_nc(p: &Partition) -> Result<Partition> {
    if !is_non_crossing(p) {
        return Err(Error::InvalidArgument(format!(
            "Kreweras complement of a crossing partition {p}"
        )));
    }
    let n = p.n();
    let splits = |i: usize, j: usize| -> bool {
        // Does some block of p meet {i+1..j} without being contained in it?
        for b in p.blocks() {
            let inside = b.iter().filter(|&&x| x > i && x <= j).count();
            if inside != 0 && inside != b.len() {
                return true;
            }
        }
        false
    };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut owner = vec![usize::MAX; n + 1];
    for i in 1..=n {
        let mut placed = false;
        for j in 1..i {
            if owner[j] != usize::MAX && !splits(j, i) {
                // Joining the earliest compatible bar keeps classes intact:
                // the relation is transitive, so compatibility with any
                // member means compatibility with the class representative.
                let idx = owner[j];
                blocks[idx].push(i);
                owner[i] = idx;
                placed = true;
                break;
            }
        }
        if !placed {
            owner[i] = blocks.len();
            blocks.push(vec![i]);
        }
    }
    Partition::new(n, blocks)
}
