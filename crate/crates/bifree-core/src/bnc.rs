//! The bi-non-crossing world: side patterns, the transport permutation,
//! `BNC(chi)` and its order, shaded two-column diagrams, block geometry
//! (piled / separated / tangled), lateral refinement and the Kreweras
//! complement on `BNC`.
//!
//! Nodes are numbered 1..n from the top of the two-column diagram; left nodes
//! sit on the left column, right nodes on the right. Membership in `BNC(chi)`
//! means the transported partition `s_chi^{-1} · p` is non-crossing.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::partition::{enumerate_nc, is_non_crossing, kreweras_nc, refines, Partition};
use crate::{Error, Result, MAX_GROUND};

/// Left/right marker for one position of a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn as_char(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// A side pattern `chi`: one `L`/`R` per position, text form like `"LRLLR"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SidePattern(Vec<Side>);

impl SidePattern {
    pub fn new(sides: Vec<Side>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidArgument("empty side pattern".into()));
        }
        Ok(SidePattern(sides))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let sides = s
            .chars()
            .map(|c| match c {
                'L' => Ok(Side::Left),
                'R' => Ok(Side::Right),
                other => Err(Error::Parse(format!(
                    "side pattern {s:?}: expected L or R, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        SidePattern::new(sides)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Side of position `k` (1-based).
    pub fn side(&self, k: usize) -> Side {
        self.0[k - 1]
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }

    /// Restriction to a strictly ascending subset of positions.
    pub fn restrict(&self, nodes: &[usize]) -> Result<SidePattern> {
        let sides = nodes.iter().map(|&k| self.side(k)).collect();
        SidePattern::new(sides)
    }

    /// All `2^n` patterns of length `n`, in lexicographic (L-before-R) order.
    pub fn all_of_len(n: usize) -> Result<Vec<SidePattern>> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::SizeLimit {
                what: "side pattern enumeration",
                got: n,
                max: MAX_GROUND,
            });
        }
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let sides = (0..n)
                .map(|k| {
                    if mask >> k & 1 == 0 {
                        Side::Left
                    } else {
                        Side::Right
                    }
                })
                .collect();
            out.push(SidePattern(sides));
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for SidePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for SidePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One of the two families a position can be tagged with.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Shade {
    A,
    B,
}

impl Shade {
    pub fn as_char(self) -> char {
        match self {
            Shade::A => 'A',
            Shade::B => 'B',
        }
    }
}

/// A shading `eps`: one `A`/`B` per position, text form like `"AABAB"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shading(Vec<Shade>);

impl Shading {
    pub fn new(marks: Vec<Shade>) -> Result<Self> {
        if marks.is_empty() {
            return Err(Error::InvalidArgument("empty shading".into()));
        }
        Ok(Shading(marks))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let marks = s
            .chars()
            .map(|c| match c {
                'A' => Ok(Shade::A),
                'B' => Ok(Shade::B),
                other => Err(Error::Parse(format!(
                    "shading {s:?}: expected A or B, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Shading::new(marks)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Shade of position `k` (1-based).
    pub fn shade(&self, k: usize) -> Shade {
        self.0[k - 1]
    }

    pub fn constant(n: usize, shade: Shade) -> Self {
        Shading(vec![shade; n])
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&m| m == self.0[0])
    }

    /// All `2^n` shadings of length `n` in lexicographic (A-before-B) order.
    pub fn all_of_len(n: usize) -> Result<Vec<Shading>> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::SizeLimit {
                what: "shading enumeration",
                got: n,
                max: MAX_GROUND,
            });
        }
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let marks = (0..n)
                .map(|k| if mask >> k & 1 == 0 { Shade::A } else { Shade::B })
                .collect();
            out.push(Shading(marks));
        }
        out.sort();
        Ok(out)
    }

    /// The induced partition: positions grouped by shade. A partition lies
    /// below a shading when every block is shade-constant.
    pub fn bounds(&self, p: &Partition) -> Result<bool> {
        if p.n() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "shading of length {} against partition of {}",
                self.len(),
                p.n()
            )));
        }
        Ok(p.blocks()
            .iter()
            .all(|b| b.iter().all(|&k| self.shade(k) == self.shade(b[0]))))
    }
}

impl fmt::Display for Shading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{}", m.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Shading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A permutation of `{1..n}` in one-line notation (1-based images).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn from_images(images: Vec<usize>) -> Self {
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Perm { images: inv }
    }

    pub fn one_line(&self) -> &[usize] {
        &self.images
    }

    /// Image table indexed 1..=n (index 0 unused) for `Partition::apply_images`.
    fn table(&self) -> Vec<usize> {
        let mut t = Vec::with_capacity(self.images.len() + 1);
        t.push(0);
        t.extend_from_slice(&self.images);
        t
    }
}

/// The transport permutation: left positions in order first, then right
/// positions bottom-up. With `{i_1 < ... < i_p}` the left positions and
/// `{j_1 < ... < j_{n-p}}` the right ones, `s(k) = i_k` for `k <= p` and
/// `s(k) = j_{n+1-k}` for `k > p`.
pub fn s_perm(chi: &SidePattern) -> Perm {
    let n = chi.len();
    let lefts: Vec<usize> = (1..=n).filter(|&k| chi.side(k) == Side::Left).collect();
    let rights: Vec<usize> = (1..=n).filter(|&k| chi.side(k) == Side::Right).collect();
    let p = lefts.len();
    let images = (1..=n)
        .map(|k| if k <= p { lefts[k - 1] } else { rights[n - k] })
        .collect();
    Perm::from_images(images)
}

/// Direction of the transport between `BNC(chi)` and `NC(n)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TransportDirection {
    /// Apply `s_chi^{-1}`, landing in `NC(n)` for bi-non-crossing input.
    ToNc,
    /// Apply `s_chi`, landing in `BNC(chi)` for non-crossing input.
    FromNc,
}

/// Order-preserving transport of partitions along `s_chi`.
pub fn transport(p: &Partition, chi: &SidePattern, dir: TransportDirection) -> Result<Partition> {
    if p.n() != chi.len() {
        return Err(Error::DimensionMismatch(format!(
            "partition of {} against pattern of length {}",
            p.n(),
            chi.len()
        )));
    }
    let s = s_perm(chi);
    let table = match dir {
        TransportDirection::ToNc => s.inverse().table(),
        TransportDirection::FromNc => s.table(),
    };
    p.apply_images(&table)
}

/// A partition paired with its side pattern, validated bi-non-crossing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BncPartition {
    partition: Partition,
    chi: SidePattern,
}

impl BncPartition {
    pub fn new(partition: Partition, chi: SidePattern) -> Result<Self> {
        let transported = transport(&partition, &chi, TransportDirection::ToNc)?;
        if !is_non_crossing(&transported) {
            return Err(Error::InvalidArgument(format!(
                "{partition} is not bi-non-crossing for pattern {chi}"
            )));
        }
        Ok(BncPartition { partition, chi })
    }

    pub fn zero(chi: &SidePattern) -> Self {
        BncPartition {
            partition: Partition::singletons(chi.len()),
            chi: chi.clone(),
        }
    }

    pub fn one(chi: &SidePattern) -> Self {
        BncPartition {
            partition: Partition::full(chi.len()),
            chi: chi.clone(),
        }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn chi(&self) -> &SidePattern {
        &self.chi
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn block_count(&self) -> usize {
        self.partition.block_count()
    }

    /// The transported non-crossing partition `s_chi^{-1} · p`.
    pub fn to_nc(&self) -> Partition {
        transport(&self.partition, &self.chi, TransportDirection::ToNc)
            .expect("validated on construction")
    }
}

impl fmt::Display for BncPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.partition, self.chi)
    }
}

/// Refinement inside one `BNC(chi)`.
pub fn bnc_refines(p: &BncPartition, q: &BncPartition) -> Result<bool> {
    if p.chi() != q.chi() {
        return Err(Error::DimensionMismatch(format!(
            "patterns {} and {} differ",
            p.chi(),
            q.chi()
        )));
    }
    refines(p.partition(), q.partition())
}

/// All of `BNC(chi)` as transports of `NC(n)`; the count is Catalan(n).
pub fn enumerate_bnc(chi: &SidePattern) -> Result<Vec<BncPartition>> {
    let n = chi.len();
    if n > 10 {
        return Err(Error::SizeLimit {
            what: "BNC enumeration",
            got: n,
            max: 10,
        });
    }
    let mut out = Vec::new();
    for q in enumerate_nc(n)? {
        let p = transport(&q, chi, TransportDirection::FromNc)?;
        out.push(BncPartition {
            partition: p,
            chi: chi.clone(),
        });
    }
    out.sort();
    Ok(out)
}

/// Geometry of a pair of blocks inside a bi-non-crossing diagram.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockRelation {
    /// Spines overlap at some horizontal level.
    pub piled: bool,
    /// Piled with no separating block.
    pub tangled: bool,
    /// Every block piled with both whose spine lies between the two.
    pub separators: Vec<Vec<usize>>,
}

fn block_span(b: &[usize]) -> (usize, usize) {
    (b[0], *b.last().unwrap())
}

fn piled(v: &[usize], w: &[usize]) -> bool {
    let (vmin, vmax) = block_span(v);
    let (wmin, wmax) = block_span(w);
    vmin.max(wmin) <= vmax.min(wmax)
}

/// Piled/tangled status of two blocks of `p`, with the full separator list.
///
/// The separator criterion is evaluated on transported indices: `U` separates
/// `V` from `W` when `U` is piled with both and two of its transported points
/// bound an interval containing all of `V`'s and none of `W`'s (or vice
/// versa).
pub fn classify_blocks(p: &BncPartition, v: &[usize], w: &[usize]) -> Result<BlockRelation> {
    let find = |needle: &[usize]| -> Result<usize> {
        p.partition()
            .blocks()
            .iter()
            .position(|b| b.as_slice() == needle)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("block {needle:?} not in partition {p}"))
            })
    };
    let vi = find(v)?;
    let wi = find(w)?;
    if vi == wi {
        return Err(Error::InvalidArgument("blocks must be distinct".into()));
    }
    let s_inv = s_perm(p.chi()).inverse();
    let transported = |b: &[usize]| -> Vec<usize> {
        let mut t: Vec<usize> = b.iter().map(|&x| s_inv.apply(x)).collect();
        t.sort_unstable();
        t
    };
    let tv = transported(v);
    let tw = transported(w);
    let covers = |tu: &[usize], inside: &[usize], outside: &[usize]| -> bool {
        for (ai, &a) in tu.iter().enumerate() {
            for &b in &tu[ai..] {
                let lo = a.min(b);
                let hi = a.max(b);
                let all_in = inside.iter().all(|&x| lo <= x && x <= hi);
                let none_in = outside.iter().all(|&x| x < lo || x > hi);
                if all_in && none_in {
                    return true;
                }
            }
        }
        false
    };
    let mut separators = Vec::new();
    for (ui, u) in p.partition().blocks().iter().enumerate() {
        if ui == vi || ui == wi {
            continue;
        }
        if !piled(u, v) || !piled(u, w) {
            continue;
        }
        let tu = transported(u);
        if covers(&tu, &tv, &tw) || covers(&tu, &tw, &tv) {
            separators.push(u.clone());
        }
    }
    let is_piled = piled(v, w);
    Ok(BlockRelation {
        piled: is_piled,
        tangled: is_piled && separators.is_empty(),
        separators,
    })
}

/// Lateral refinement: `p <= q` with no two piled blocks of `p` merged in `q`.
pub fn is_lateral_refinement(p: &BncPartition, q: &BncPartition) -> Result<bool> {
    if !bnc_refines(p, q)? {
        return Err(Error::InvalidArgument(format!(
            "{} does not refine {}",
            p.partition(),
            q.partition()
        )));
    }
    let qa = q.partition().block_assignment();
    let blocks = p.partition().blocks();
    for (i, v) in blocks.iter().enumerate() {
        for w in &blocks[i + 1..] {
            if qa[v[0]] == qa[w[0]] && piled(v, w) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One block of a two-column shaded diagram.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LrBlock {
    /// Node indices of the block, ascending (top to bottom).
    pub nodes: Vec<usize>,
    pub shade: Shade,
    /// Whether the block's spine exits through the top gap.
    pub open: bool,
}

/// A shaded two-column diagram built by the bottom-up recursion.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LrDiagram {
    chi: SidePattern,
    shading: Shading,
    blocks: Vec<LrBlock>,
    /// Left-to-right order of the open blocks' indices into `blocks`.
    open_order: Vec<usize>,
}

impl LrDiagram {
    pub fn chi(&self) -> &SidePattern {
        &self.chi
    }

    pub fn shading(&self) -> &Shading {
        &self.shading
    }

    pub fn blocks(&self) -> &[LrBlock] {
        &self.blocks
    }

    /// Number of chords reaching the top gap; membership in `LR_k`.
    pub fn open_chords(&self) -> usize {
        self.open_order.len()
    }

    /// Shades of the open chords, left to right.
    pub fn open_shades(&self) -> Vec<Shade> {
        self.open_order.iter().map(|&i| self.blocks[i].shade).collect()
    }

    /// The partition induced by connectivity.
    pub fn induced_partition(&self) -> Partition {
        let blocks = self.blocks.iter().map(|b| b.nodes.clone()).collect();
        Partition::new(self.chi.len(), blocks).expect("diagram covers all nodes")
    }

    /// Plain-text dump for debugging: one row per node, top to bottom, plus
    /// the open chords.
    pub fn text_dump(&self) -> String {
        let n = self.chi.len();
        let assignment = {
            let mut a = vec![0usize; n + 1];
            for (i, b) in self.blocks.iter().enumerate() {
                for &x in &b.nodes {
                    a[x] = i;
                }
            }
            a
        };
        let mut out = String::new();
        for (k, &block_idx) in assignment.iter().enumerate().skip(1) {
            let b = &self.blocks[block_idx];
            let side = match self.chi.side(k) {
                Side::Left => format!("{k:>2} .."),
                Side::Right => format!(".. {k:<2}"),
            };
            out.push_str(&format!(
                "{side}  shade {}  block {:?}{}\n",
                b.shade.as_char(),
                b.nodes,
                if b.open { "  (open)" } else { "" }
            ));
        }
        let shades: String = self
            .open_shades()
            .iter()
            .map(|s| s.as_char())
            .collect();
        out.push_str(&format!("open chords: [{shades}]\n"));
        out
    }

    /// Erases the top node, recovering the parent diagram of the recursion.
    pub fn erase_top(&self) -> Result<LrDiagram> {
        let n = self.chi.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "cannot erase the top node of a one-node diagram".into(),
            ));
        }
        let chi0 = SidePattern::new(self.chi.sides()[1..].to_vec())?;
        let eps0 = Shading::new(
            (2..=n).map(|k| self.shading.shade(k)).collect::<Vec<_>>(),
        )?;
        let mut blocks = Vec::new();
        let mut open_order = Vec::new();
        let mut removed_block: Option<&LrBlock> = None;
        let mut index_map = vec![usize::MAX; self.blocks.len()];
        for (i, b) in self.blocks.iter().enumerate() {
            if b.nodes[0] == 1 {
                if b.nodes.len() == 1 {
                    removed_block = Some(b);
                    continue;
                }
                removed_block = Some(b);
                index_map[i] = blocks.len();
                blocks.push(LrBlock {
                    nodes: b.nodes[1..].iter().map(|&x| x - 1).collect(),
                    shade: b.shade,
                    open: true, // reopened below if it was closed by node 1
                });
            } else {
                index_map[i] = blocks.len();
                blocks.push(LrBlock {
                    nodes: b.nodes.iter().map(|&x| x - 1).collect(),
                    shade: b.shade,
                    open: b.open,
                });
            }
        }
        let removed = removed_block
            .ok_or_else(|| Error::InvalidArgument("node 1 missing from diagram".into()))?;
        for &i in &self.open_order {
            if index_map[i] != usize::MAX && self.blocks[i].nodes[0] != 1 {
                open_order.push(index_map[i]);
            }
        }
        if removed.nodes.len() > 1 {
            // Node 1 either extended or terminated this spine; before it was
            // added the spine was open at the end nearest node 1's side.
            let idx = index_map[self
                .blocks
                .iter()
                .position(|b| std::ptr::eq(b, removed))
                .unwrap()];
            if removed.open {
                // It stays open in the same position.
                let pos = self
                    .open_order
                    .iter()
                    .position(|&i| self.blocks[i].nodes[0] == 1)
                    .expect("open block containing node 1");
                open_order.insert(pos, idx);
            } else {
                match self.chi.side(1) {
                    Side::Left => open_order.insert(0, idx),
                    Side::Right => open_order.push(idx),
                }
            }
        }
        let mut parent = LrDiagram {
            chi: chi0,
            shading: eps0,
            blocks,
            open_order,
        };
        parent.normalize();
        Ok(parent)
    }

    /// Sorts blocks by their top node and remaps `open_order` accordingly.
    fn normalize(&mut self) {
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.sort_by_key(|&i| self.blocks[i].nodes[0]);
        let mut rank = vec![0; self.blocks.len()];
        for (new_i, &old_i) in order.iter().enumerate() {
            rank[old_i] = new_i;
        }
        self.blocks.sort_by_key(|b| b.nodes[0]);
        for o in &mut self.open_order {
            *o = rank[*o];
        }
    }
}

/// Builds `LR(chi, eps)` by the bottom-up recursion. Exactly `2^n` diagrams:
/// each added node either must attach to the nearest open spine of its shade
/// (keep open / terminate) or, failing that, stays isolated or starts a new
/// spine at its own side's end of the top gap.
pub fn enumerate_lr(chi: &SidePattern, eps: &Shading) -> Result<Vec<LrDiagram>> {
    let n = chi.len();
    if eps.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "pattern {chi} against shading {eps}"
        )));
    }
    if n > 10 {
        return Err(Error::SizeLimit {
            what: "LR diagram enumeration",
            got: n,
            max: 10,
        });
    }
    let mut states = vec![LrDiagram {
        chi: chi.clone(),
        shading: eps.clone(),
        blocks: Vec::new(),
        open_order: Vec::new(),
    }];
    for k in (1..=n).rev() {
        let side = chi.side(k);
        let shade = eps.shade(k);
        let mut next = Vec::with_capacity(states.len() * 2);
        for st in states {
            let nearest = match side {
                Side::Left => st.open_order.first().copied(),
                Side::Right => st.open_order.last().copied(),
            };
            if let Some(bi) = nearest.filter(|&bi| st.blocks[bi].shade == shade) {
                // Forced attachment: keep the spine open, or terminate it.
                let mut keep = st.clone();
                keep.blocks[bi].nodes.insert(0, k);
                next.push(keep);
                let mut term = st;
                term.blocks[bi].nodes.insert(0, k);
                term.blocks[bi].open = false;
                term.open_order.retain(|&i| i != bi);
                next.push(term);
            } else {
                // Isolated closed singleton, or a new spine at this side's end.
                let mut iso = st.clone();
                iso.blocks.push(LrBlock {
                    nodes: vec![k],
                    shade,
                    open: false,
                });
                next.push(iso);
                let mut open = st;
                open.blocks.push(LrBlock {
                    nodes: vec![k],
                    shade,
                    open: true,
                });
                let bi = open.blocks.len() - 1;
                match side {
                    Side::Left => open.open_order.insert(0, bi),
                    Side::Right => open.open_order.push(bi),
                }
                next.push(open);
            }
        }
        states = next;
    }
    // Node sets were built bottom-up, so each block's nodes are ascending
    // already; normalize block order for deterministic output.
    for st in &mut states {
        st.normalize();
    }
    states.sort();
    Ok(states)
}

/// The shaded class `BNC(chi, eps)`: partitions induced by the diagrams of
/// `LR_0(chi, eps)`. Distinct diagrams induce distinct partitions; the
/// deduplication below is a guarded safety net.
pub fn shaded_bnc(chi: &SidePattern, eps: &Shading) -> Result<Vec<BncPartition>> {
    let diagrams = enumerate_lr(chi, eps)?;
    let mut seen = BTreeSet::new();
    let mut closed = 0usize;
    for d in diagrams {
        if d.open_chords() == 0 {
            closed += 1;
            seen.insert(d.induced_partition());
        }
    }
    assert_eq!(
        seen.len(),
        closed,
        "distinct closed diagrams must induce distinct partitions"
    );
    seen.into_iter()
        .map(|p| BncPartition::new(p, chi.clone()))
        .collect()
}

/// Kreweras complement on `BNC(chi)`: transport, complement in `NC(n)`,
/// transport back. Order-reversing with `|p| + |K(p)| = n + 1`.
pub fn kreweras_bnc(p: &BncPartition) -> BncPartition {
    let nc = p.to_nc();
    let complement = kreweras_nc(&nc).expect("transported partition is non-crossing");
    let back = transport(&complement, p.chi(), TransportDirection::FromNc)
        .expect("same ground size");
    BncPartition::new(back, p.chi().clone()).expect("transport of a non-crossing partition")
}
