//! Exact moment/cumulant calculus for two-faced families: partitioned
//! moments and cumulants, Möbius inversion between moment and cumulant
//! tables, the lateral/Möbius coefficient formulas, joint distributions of
//! independent pairs, universal polynomials, and the multiplicative
//! convolution of cumulant tables.
//!
//! A [`Distribution`] is an exact-rational moment functional on words over
//! named left/right indices; the empty word implicitly has moment 1. The side
//! pattern of a word is always derived from index membership, never stored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bnc::{
    bnc_refines, enumerate_bnc, is_lateral_refinement, shaded_bnc, BncPartition,
    Shade, Shading, Side, SidePattern,
};
use crate::exec::par_map;
use crate::incidence::{mobius_bnc, EvalContext};
use crate::ratio::{format_q, parse_q, q0, q1, sign_pow, Q};
use crate::{Error, Result};

/// An index name. Names must be non-empty and free of whitespace, since words
/// serialize as space-separated names.
pub type Name = String;

/// A word: a sequence of index names.
pub type Word = Vec<Name>;

/// Renders a word in its text form.
pub fn word_to_string(word: &[Name]) -> String {
    word.join(" ")
}

/// Parses the space-separated text form of a word.
pub fn word_from_string(s: &str) -> Word {
    s.split_whitespace().map(|t| t.to_string()).collect()
}

/// The suffix used to tag doubled index names in a joint distribution.
pub fn tagged_name(name: &str, shade: Shade) -> Name {
    format!("{name}#{}", shade.as_char())
}

/// Splits a tagged name back into its base name and shade, if tagged.
pub fn split_tagged_name(name: &str) -> Option<(Name, Shade)> {
    let (base, tag) = name.rsplit_once('#')?;
    let shade = match tag {
        "A" => Shade::A,
        "B" => Shade::B,
        _ => return None,
    };
    Some((base.to_string(), shade))
}

fn subword(word: &[Name], block: &[usize]) -> Word {
    block.iter().map(|&k| word[k - 1].clone()).collect()
}

/// All words over `alphabet` of lengths `1..=max_len`, shortest first, then
/// lexicographic in alphabet order.
pub fn all_words(alphabet: &[Name], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 1..=max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for name in alphabet {
                let mut v = w.clone();
                v.push(name.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Shared shape of moment and cumulant tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableShape {
    pub left: Vec<Name>,
    pub right: Vec<Name>,
    pub degree: usize,
}

impl TableShape {
    pub fn new(left: Vec<Name>, right: Vec<Name>, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for name in left.iter().chain(right.iter()) {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!(
                    "index name {name:?} must be non-empty and whitespace-free"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidArgument(format!(
                    "index name {name:?} appears twice (faces must be disjoint)"
                )));
            }
        }
        if seen.is_empty() {
            return Err(Error::InvalidArgument("no index names given".into()));
        }
        Ok(TableShape {
            left,
            right,
            degree,
        })
    }

    pub fn alphabet(&self) -> Vec<Name> {
        self.left.iter().chain(self.right.iter()).cloned().collect()
    }

    pub fn side_of(&self, name: &str) -> Result<Side> {
        if self.left.iter().any(|n| n == name) {
            Ok(Side::Left)
        } else if self.right.iter().any(|n| n == name) {
            Ok(Side::Right)
        } else {
            Err(Error::InvalidArgument(format!("unknown index {name:?}")))
        }
    }

    /// The side pattern of a word, derived from index membership.
    pub fn word_pattern(&self, word: &[Name]) -> Result<SidePattern> {
        let sides = word
            .iter()
            .map(|n| self.side_of(n))
            .collect::<Result<Vec<_>>>()?;
        SidePattern::new(sides)
    }

    /// Every word of length `1..=degree`.
    pub fn words(&self) -> Vec<Word> {
        all_words(&self.alphabet(), self.degree)
    }
}

/// An exact-rational moment functional on words of bounded length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution {
    shape: TableShape,
    moments: BTreeMap<Word, Q>,
}

/// A table of cumulants with the same shape as a distribution's moments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CumulantTable {
    shape: TableShape,
    cumulants: BTreeMap<Word, Q>,
}

#[derive(Serialize, Deserialize)]
struct DistributionJson {
    left: Vec<Name>,
    right: Vec<Name>,
    degree: usize,
    moments: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct CumulantTableJson {
    left: Vec<Name>,
    right: Vec<Name>,
    degree: usize,
    cumulants: BTreeMap<String, String>,
}

fn validate_entries(shape: &TableShape, entries: &BTreeMap<Word, Q>, what: &str) -> Result<()> {
    for w in entries.keys() {
        if w.is_empty() {
            return Err(Error::InvalidArgument(
                "the empty word is implicit and must not be stored".into(),
            ));
        }
        for name in w {
            shape.side_of(name)?;
        }
        if w.len() > shape.degree {
            return Err(Error::InvalidArgument(format!(
                "word \"{}\" exceeds degree {}",
                word_to_string(w),
                shape.degree
            )));
        }
    }
    for w in shape.words() {
        if !entries.contains_key(&w) {
            return Err(Error::MissingEntry(format!(
                "{what} for word \"{}\"",
                word_to_string(&w)
            )));
        }
    }
    Ok(())
}

impl Distribution {
    pub fn new(shape: TableShape, moments: BTreeMap<Word, Q>) -> Result<Self> {
        validate_entries(&shape, &moments, "moment")?;
        Ok(Distribution { shape, moments })
    }

    pub fn shape(&self) -> &TableShape {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.degree
    }

    /// The moment of a word; the empty word has moment 1.
    pub fn moment(&self, word: &[Name]) -> Result<Q> {
        if word.is_empty() {
            return Ok(q1());
        }
        self.moments.get(word).cloned().ok_or_else(|| {
            Error::MissingEntry(format!("moment for word \"{}\"", word_to_string(word)))
        })
    }

    pub fn moments(&self) -> &BTreeMap<Word, Q> {
        &self.moments
    }

    /// Truncation to a smaller positive degree.
    pub fn truncate(&self, degree: usize) -> Result<Distribution> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if degree > self.shape.degree {
            return Err(Error::SizeLimit {
                what: "truncation degree",
                got: degree,
                max: self.shape.degree,
            });
        }
        let shape = TableShape {
            left: self.shape.left.clone(),
            right: self.shape.right.clone(),
            degree,
        };
        let moments = self
            .moments
            .iter()
            .filter(|(w, _)| w.len() <= degree)
            .map(|(w, v)| (w.clone(), v.clone()))
            .collect();
        Distribution::new(shape, moments)
    }

    /// A distribution with every moment zero.
    pub fn zero(shape: TableShape) -> Self {
        let moments = shape.words().into_iter().map(|w| (w, q0())).collect();
        Distribution { shape, moments }
    }

    /// Uniformly random small-rational moments, for property suites.
    pub fn random<R: rand::Rng>(rng: &mut R, shape: TableShape) -> Self {
        let moments = shape
            .words()
            .into_iter()
            .map(|w| {
                let numer = rng.gen_range(-3i64..=3);
                let denom = rng.gen_range(1i64..=3);
                (w, crate::ratio::qr(numer, denom))
            })
            .collect();
        Distribution { shape, moments }
    }

    pub fn to_json(&self) -> String {
        let j = DistributionJson {
            left: self.shape.left.clone(),
            right: self.shape.right.clone(),
            degree: self.shape.degree,
            moments: self
                .moments
                .iter()
                .map(|(w, v)| (word_to_string(w), format_q(v)))
                .collect(),
        };
        serde_json::to_string(&j).expect("distribution serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: DistributionJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("distribution JSON: {e}")))?;
        let shape = TableShape::new(j.left, j.right, j.degree)?;
        let mut moments = BTreeMap::new();
        for (k, v) in j.moments {
            moments.insert(word_from_string(&k), parse_q(&v)?);
        }
        Distribution::new(shape, moments)
    }
}

impl CumulantTable {
    pub fn new(shape: TableShape, cumulants: BTreeMap<Word, Q>) -> Result<Self> {
        validate_entries(&shape, &cumulants, "cumulant")?;
        Ok(CumulantTable { shape, cumulants })
    }

    pub fn shape(&self) -> &TableShape {
        &self.shape
    }

    pub fn cumulant(&self, word: &[Name]) -> Result<Q> {
        self.cumulants.get(word).cloned().ok_or_else(|| {
            Error::MissingEntry(format!("cumulant for word \"{}\"", word_to_string(word)))
        })
    }

    pub fn cumulants(&self) -> &BTreeMap<Word, Q> {
        &self.cumulants
    }

    pub fn to_json(&self) -> String {
        let j = CumulantTableJson {
            left: self.shape.left.clone(),
            right: self.shape.right.clone(),
            degree: self.shape.degree,
            cumulants: self
                .cumulants
                .iter()
                .map(|(w, v)| (word_to_string(w), format_q(v)))
                .collect(),
        };
        serde_json::to_string(&j).expect("cumulant table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CumulantTableJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("cumulant table JSON: {e}")))?;
        let shape = TableShape::new(j.left, j.right, j.degree)?;
        let mut cumulants = BTreeMap::new();
        for (k, v) in j.cumulants {
            cumulants.insert(word_from_string(&k), parse_q(&v)?);
        }
        CumulantTable::new(shape, cumulants)
    }
}

fn check_word_partition(
    shape: &TableShape,
    word: &[Name],
    p: &BncPartition,
) -> Result<SidePattern> {
    let pattern = shape.word_pattern(word)?;
    if p.chi() != &pattern {
        return Err(Error::InvalidArgument(format!(
            "partition pattern {} does not match word sides {}",
            p.chi(),
            pattern
        )));
    }
    Ok(pattern)
}

/// Partitioned moment: the product over blocks of the moments of the
/// restricted subwords.
pub fn phi_pi(dist: &Distribution, word: &[Name], p: &BncPartition) -> Result<Q> {
    if word.len() > dist.degree() {
        return Err(Error::SizeLimit {
            what: "word length vs distribution degree",
            got: word.len(),
            max: dist.degree(),
        });
    }
    check_word_partition(dist.shape(), word, p)?;
    let mut acc = q1();
    for block in p.partition().blocks() {
        acc *= dist.moment(&subword(word, block))?;
    }
    Ok(acc)
}

/// Partitioned cumulant: the Möbius sum over partitions below `p`.
pub fn kappa_pi(dist: &Distribution, word: &[Name], p: &BncPartition) -> Result<Q> {
    check_word_partition(dist.shape(), word, p)?;
    let mut ctx = EvalContext::new();
    let mut acc = q0();
    for sigma in enumerate_bnc(p.chi())? {
        if bnc_refines(&sigma, p)? {
            acc += phi_pi(dist, word, &sigma)? * mobius_bnc(&mut ctx, &sigma, p)?;
        }
    }
    Ok(acc)
}

/// One non-crossing partition prepared for fast transported evaluation.
struct NcEntry {
    blocks: Vec<Vec<usize>>,
    /// Block index per element (1-based positions).
    assignment: Vec<u8>,
    /// `mu(sigma, 1_n)` from the inversion recursion.
    mobius_to_one: Q,
    /// Blocks of the classical Kreweras complement.
    kreweras_blocks: Vec<Vec<usize>>,
}

/// Interned-word evaluation engine shared by the table transforms: `NC(n)`
/// lists with bulk Möbius weights and complements are built once per call and
/// read concurrently; transported blocks are produced on the fly.
struct XformEngine {
    ids: HashMap<Name, u8>,
    sides: Vec<Side>,
    nc: Vec<Vec<NcEntry>>,
}

impl XformEngine {
    fn new(shape: &TableShape) -> Result<Self> {
        let mut ids = HashMap::new();
        let mut sides = Vec::new();
        for name in &shape.left {
            ids.insert(name.clone(), sides.len() as u8);
            sides.push(Side::Left);
        }
        for name in &shape.right {
            ids.insert(name.clone(), sides.len() as u8);
            sides.push(Side::Right);
        }
        let max_n = shape.degree;
        let mut nc = Vec::with_capacity(max_n + 1);
        nc.push(Vec::new());
        for n in 1..=max_n {
            let list = crate::partition::enumerate_nc(n)?;
            let mut entries: Vec<NcEntry> = list
                .iter()
                .map(|p| NcEntry {
                    blocks: p.blocks().to_vec(),
                    assignment: {
                        let a = p.block_assignment();
                        a.iter().map(|&x| x as u8).collect()
                    },
                    mobius_to_one: q0(),
                    kreweras_blocks: crate::partition::kreweras_nc(p)
                        .expect("enumerated partitions are non-crossing")
                        .blocks()
                        .to_vec(),
                })
                .collect();
            // Bulk inversion for the top element: mu(1,1) = 1 and, for
            // sigma < 1, the interval sum telescopes to
            // mu(sigma,1) = -sum over sigma < rho of mu(rho,1). Processing
            // coarser partitions first makes it a single pass.
            let coarse_first = {
                let mut idx: Vec<usize> = (0..entries.len()).collect();
                idx.sort_by_key(|&i| entries[i].blocks.len());
                idx
            };
            let strictly_refines = |fine: &NcEntry, coarse: &NcEntry| -> bool {
                if fine.blocks.len() <= coarse.blocks.len() {
                    return false;
                }
                fine.blocks.iter().all(|b| {
                    let target = coarse.assignment[b[0]];
                    b.iter().all(|&x| coarse.assignment[x] == target)
                })
            };
            for pos in 0..coarse_first.len() {
                let i = coarse_first[pos];
                if entries[i].blocks.len() == 1 {
                    entries[i].mobius_to_one = q1();
                    continue;
                }
                let mut acc = q0();
                for &j in &coarse_first[..pos] {
                    if strictly_refines(&entries[i], &entries[j]) {
                        acc += entries[j].mobius_to_one.clone();
                    }
                }
                entries[i].mobius_to_one = -acc;
            }
            nc.push(entries);
        }
        Ok(XformEngine { ids, sides, nc })
    }

    fn intern(&self, word: &[Name]) -> Result<Vec<u8>> {
        word.iter()
            .map(|n| {
                self.ids
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown index {n:?}")))
            })
            .collect()
    }

    fn intern_table(&self, table: &BTreeMap<Word, Q>) -> Result<HashMap<Vec<u8>, Q>> {
        table
            .iter()
            .map(|(w, v)| Ok((self.intern(w)?, v.clone())))
            .collect()
    }

    /// One-line transport images for the word's side pattern: left positions
    /// top-down, then right positions bottom-up.
    fn s_images(&self, iword: &[u8]) -> Vec<usize> {
        let n = iword.len();
        let mut images = Vec::with_capacity(n);
        for (k, &id) in iword.iter().enumerate() {
            if self.sides[id as usize] == Side::Left {
                images.push(k + 1);
            }
        }
        for (k, &id) in iword.iter().enumerate().rev() {
            if self.sides[id as usize] == Side::Right {
                images.push(k + 1);
            }
        }
        debug_assert_eq!(images.len(), n);
        images
    }

    /// Applies `f` to each transported block of `entry` (as ascending word
    /// positions) until it returns `None`; multiplies the `Some` values.
    fn block_product<F>(&self, entry: &NcEntry, s: &[usize], mut f: F) -> Option<Q>
    where
        F: FnMut(&[usize]) -> Option<Q>,
    {
        let mut acc = q1();
        let mut scratch = [0usize; crate::MAX_GROUND];
        for block in &entry.blocks {
            let m = block.len();
            for (t, &v) in block.iter().enumerate() {
                scratch[t] = s[v - 1];
            }
            scratch[..m].sort_unstable();
            acc *= f(&scratch[..m])?;
        }
        Some(acc)
    }
}

fn subword_ids(iword: &[u8], positions: &[usize], out: &mut Vec<u8>) {
    out.clear();
    out.extend(positions.iter().map(|&k| iword[k - 1]));
}

/// Möbius-inverts a moment table into the cumulant table of the same shape.
pub fn moments_to_cumulants(dist: &Distribution) -> Result<CumulantTable> {
    if dist.degree() > 8 {
        return Err(Error::SizeLimit {
            what: "moment-to-cumulant degree",
            got: dist.degree(),
            max: 8,
        });
    }
    let engine = XformEngine::new(dist.shape())?;
    let table = engine.intern_table(dist.moments())?;
    let words = dist.shape().words();
    let entries = par_map(words, |word| {
        let iword = engine.intern(&word)?;
        let s = engine.s_images(&iword);
        let mut acc = q0();
        let mut sub = Vec::with_capacity(iword.len());
        for entry in &engine.nc[iword.len()] {
            let phi = engine.block_product(entry, &s, |positions| {
                subword_ids(&iword, positions, &mut sub);
                table.get(sub.as_slice()).cloned()
            });
            match phi {
                Some(v) => acc += v * entry.mobius_to_one.clone(),
                None => {
                    return Err(Error::MissingEntry(format!(
                        "moment for a subword of \"{}\"",
                        word_to_string(&word)
                    )))
                }
            }
        }
        Ok((word, acc))
    });
    let mut cumulants = BTreeMap::new();
    for e in entries {
        let (w, v): (Word, Q) = e?;
        cumulants.insert(w, v);
    }
    CumulantTable::new(dist.shape().clone(), cumulants)
}

/// Partitioned cumulant from a table: the product over blocks of full
/// cumulants of the restricted subwords.
pub fn kappa_pi_from_table(table: &CumulantTable, word: &[Name], p: &BncPartition) -> Result<Q> {
    let mut acc = q1();
    for block in p.partition().blocks() {
        acc *= table.cumulant(&subword(word, block))?;
    }
    Ok(acc)
}

/// Rebuilds the moment table from a cumulant table: the moment of a word is
/// the sum of partitioned cumulants over the whole lattice.
pub fn cumulants_to_moments(table: &CumulantTable) -> Result<Distribution> {
    if table.shape().degree > 8 {
        return Err(Error::SizeLimit {
            what: "cumulant-to-moment degree",
            got: table.shape().degree,
            max: 8,
        });
    }
    let engine = XformEngine::new(table.shape())?;
    let kappa = engine.intern_table(table.cumulants())?;
    let words = table.shape().words();
    let entries = par_map(words, |word| {
        let iword = engine.intern(&word)?;
        let s = engine.s_images(&iword);
        let mut acc = q0();
        let mut sub = Vec::with_capacity(iword.len());
        for entry in &engine.nc[iword.len()] {
            let term = engine.block_product(entry, &s, |positions| {
                subword_ids(&iword, positions, &mut sub);
                kappa.get(sub.as_slice()).cloned()
            });
            match term {
                Some(v) => acc += v,
                None => {
                    return Err(Error::MissingEntry(format!(
                        "cumulant for a subword of \"{}\"",
                        word_to_string(&word)
                    )))
                }
            }
        }
        Ok((word, acc))
    });
    let mut moments = BTreeMap::new();
    for e in entries {
        let (w, v): (Word, Q) = e?;
        moments.insert(w, v);
    }
    Distribution::new(table.shape().clone(), moments)
}

fn require_bounded(p: &BncPartition, eps: &Shading) -> Result<()> {
    if !eps.bounds(p.partition())? {
        return Err(Error::InvalidArgument(format!(
            "partition {} is not bounded by shading {eps}",
            p.partition()
        )));
    }
    Ok(())
}

/// Signed count of shaded partitions laterally refined by `p`: the sum of
/// `(-1)^(|p| - |sigma|)` over `sigma` in the shaded class with
/// `p <=_lat sigma`.
pub fn lat_coefficient(p: &BncPartition, eps: &Shading) -> Result<Q> {
    require_bounded(p, eps)?;
    let mut acc = q0();
    for sigma in shaded_bnc(p.chi(), eps)? {
        if bnc_refines(p, &sigma)? && is_lateral_refinement(p, &sigma)? {
            acc += sign_pow(p.block_count() - sigma.block_count());
        }
    }
    Ok(acc)
}

/// Möbius-weighted count over the interval between `p` and the shading: the
/// sum of `mu(p, sigma)` over `sigma` with `p <= sigma <= eps`.
pub fn mobius_coefficient(p: &BncPartition, eps: &Shading) -> Result<Q> {
    require_bounded(p, eps)?;
    let mut ctx = EvalContext::new();
    let mut acc = q0();
    for sigma in enumerate_bnc(p.chi())? {
        if bnc_refines(p, &sigma)? && eps.bounds(sigma.partition())? {
            acc += mobius_bnc(&mut ctx, p, &sigma)?;
        }
    }
    Ok(acc)
}

fn shared_shape(d1: &Distribution, d2: &Distribution) -> Result<TableShape> {
    if d1.shape().left != d2.shape().left || d1.shape().right != d2.shape().right {
        return Err(Error::DimensionMismatch(
            "distributions must share left and right index sets".into(),
        ));
    }
    if d1.degree() != d2.degree() {
        return Err(Error::DimensionMismatch(
            "distributions must share the degree bound".into(),
        ));
    }
    Ok(d1.shape().clone())
}

/// Cumulant tables of a pair, bundled for joint-moment evaluation. Words of
/// any length up to twice the pair's degree can be queried: blocks are
/// shade-constant, so each block subword stays within one family's table.
pub struct JointContext {
    shape: TableShape,
    engine: XformEngine,
    kappa_a: HashMap<Vec<u8>, Q>,
    kappa_b: HashMap<Vec<u8>, Q>,
}

impl JointContext {
    pub fn new(d1: &Distribution, d2: &Distribution) -> Result<Self> {
        let shape = shared_shape(d1, d2)?;
        let doubled = TableShape {
            left: shape.left.clone(),
            right: shape.right.clone(),
            degree: (2 * shape.degree).min(crate::MAX_GROUND),
        };
        let engine = XformEngine::new(&doubled)?;
        let kappa_a = engine.intern_table(moments_to_cumulants(d1)?.cumulants())?;
        let kappa_b = engine.intern_table(moments_to_cumulants(d2)?.cumulants())?;
        Ok(JointContext {
            shape,
            engine,
            kappa_a,
            kappa_b,
        })
    }

    pub fn shape(&self) -> &TableShape {
        &self.shape
    }

    /// Joint moment of a tagged word: the sum over shade-bounded partitions
    /// of block-cumulant products, each block read from its shade's family.
    /// Mixed cumulants of the joint vanish by construction.
    pub fn moment(&self, word: &[Name], eps: &Shading) -> Result<Q> {
        if word.len() != eps.len() {
            return Err(Error::DimensionMismatch(format!(
                "word length {} against shading {eps}",
                word.len()
            )));
        }
        if word.len() >= self.engine.nc.len() {
            return Err(Error::SizeLimit {
                what: "joint moment word length",
                got: word.len(),
                max: self.engine.nc.len() - 1,
            });
        }
        let iword = self.engine.intern(word)?;
        let s = self.engine.s_images(&iword);
        let mut acc = q0();
        let mut sub = Vec::with_capacity(iword.len());
        let mut missing = false;
        for entry in &self.engine.nc[iword.len()] {
            let term = self.engine.block_product(entry, &s, |positions| {
                let shade = eps.shade(positions[0]);
                if positions.iter().any(|&k| eps.shade(k) != shade) {
                    return None; // mixed-shade block: partition unbounded
                }
                subword_ids(&iword, positions, &mut sub);
                let table = match shade {
                    Shade::A => &self.kappa_a,
                    Shade::B => &self.kappa_b,
                };
                let v = table.get(sub.as_slice()).cloned();
                if v.is_none() {
                    missing = true;
                }
                v
            });
            if let Some(v) = term {
                acc += v;
            }
        }
        if missing {
            return Err(Error::SizeLimit {
                what: "shade-constant block beyond the pair's degree",
                got: word.len(),
                max: self.shape.degree,
            });
        }
        Ok(acc)
    }
}

/// Joint distribution of an independent pair over the doubled alphabet: each
/// index name is tagged `#A` (first family) or `#B` (second family).
pub fn bifree_join(d1: &Distribution, d2: &Distribution) -> Result<Distribution> {
    let base = shared_shape(d1, d2)?;
    if base.degree > 6 {
        return Err(Error::SizeLimit {
            what: "joint distribution degree",
            got: base.degree,
            max: 6,
        });
    }
    let ctx = JointContext::new(d1, d2)?;
    let tag_all = |names: &[Name]| -> Vec<Name> {
        let mut out = Vec::new();
        for name in names {
            out.push(tagged_name(name, Shade::A));
            out.push(tagged_name(name, Shade::B));
        }
        out
    };
    let joint_shape = TableShape::new(tag_all(&base.left), tag_all(&base.right), base.degree)?;
    let words = joint_shape.words();
    let entries = par_map(words, |word| {
        let mut bare = Vec::with_capacity(word.len());
        let mut marks = Vec::with_capacity(word.len());
        for name in &word {
            let (b, s) = split_tagged_name(name).expect("joint alphabet names are tagged");
            bare.push(b);
            marks.push(s);
        }
        let eps = Shading::new(marks)?;
        Ok((word, ctx.moment(&bare, &eps)?))
    });
    let mut moments = BTreeMap::new();
    for e in entries {
        let (w, v): (Word, Q) = e?;
        moments.insert(w, v);
    }
    Distribution::new(joint_shape, moments)
}

/// Mixed moment through the lateral-refinement coefficient formula: the sum
/// over shade-bounded partitions of `lat_coefficient` times the product of
/// block moments, each block read from the family its shade selects.
///
/// Partitions not bounded by the shading drop out: a mixed-shade block can
/// never lie inside a block of a shaded partition, so no shaded partition is
/// laterally refined by it and its coefficient vanishes (checked in debug
/// builds).
pub fn mixed_moment_lat(
    d1: &Distribution,
    d2: &Distribution,
    word: &[Name],
    eps: &Shading,
) -> Result<Q> {
    let shape = shared_shape(d1, d2)?;
    if word.len() > shape.degree {
        return Err(Error::SizeLimit {
            what: "word length vs distribution degree",
            got: word.len(),
            max: shape.degree,
        });
    }
    if word.len() != eps.len() {
        return Err(Error::DimensionMismatch(format!(
            "word length {} against shading {eps}",
            word.len()
        )));
    }
    let chi = shape.word_pattern(word)?;
    let mut acc = q0();
    for pi in enumerate_bnc(&chi)? {
        if !eps.bounds(pi.partition())? {
            #[cfg(debug_assertions)]
            for sigma in shaded_bnc(&chi, eps)? {
                debug_assert!(
                    !bnc_refines(&pi, &sigma)?,
                    "unbounded {pi} refines shaded {sigma}"
                );
            }
            continue;
        }
        let coeff = lat_coefficient(&pi, eps)?;
        if coeff.is_zero() {
            continue;
        }
        let mut term = coeff;
        for block in pi.partition().blocks() {
            let family = match eps.shade(block[0]) {
                Shade::A => d1,
                Shade::B => d2,
            };
            term *= family.moment(&subword(word, block))?;
        }
        acc += term;
    }
    Ok(acc)
}

/// Outcome of a combinatorial-independence check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BifreenessReport {
    /// First non-vanishing mixed cumulant, if any: (word, value).
    pub witness: Option<(Word, Q)>,
}

impl BifreenessReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that every mixed cumulant of a joint distribution vanishes: for
/// each word of length `2..=max_degree` whose induced tag sequence is
/// non-constant, the full cumulant must be zero. Length-one words are
/// vacuously fine; the witness is the first failure in table order.
pub fn check_combinatorial_bifreeness(
    joint: &Distribution,
    tagging: &BTreeMap<Name, Shade>,
    max_degree: usize,
) -> Result<BifreenessReport> {
    if max_degree > joint.degree() {
        return Err(Error::SizeLimit {
            what: "check degree vs joint degree",
            got: max_degree,
            max: joint.degree(),
        });
    }
    for name in joint.shape().alphabet() {
        if !tagging.contains_key(&name) {
            return Err(Error::InvalidArgument(format!(
                "tagging is missing index {name:?}"
            )));
        }
    }
    let table = moments_to_cumulants(&joint.truncate(max_degree.max(1))?)?;
    // Scan words shortest-first so the witness is a minimal counterexample.
    for word in table.shape().words() {
        if word.len() < 2 || word.len() > max_degree {
            continue;
        }
        let first = tagging[&word[0]];
        if word.iter().all(|n| tagging[n] == first) {
            continue;
        }
        let value = table.cumulant(&word)?;
        if !value.is_zero() {
            return Ok(BifreenessReport {
                witness: Some((word, value)),
            });
        }
    }
    Ok(BifreenessReport { witness: None })
}

/// Which universal polynomial to build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PolyKind {
    /// Shaded mixed-moment polynomial for one shading.
    P,
    /// Sum over all shadings: moments of the summed family.
    Q,
    /// Unshaded Möbius-weighted polynomial: the cumulant.
    R,
}

/// One indeterminate `X_K` (optionally shaded) of a universal polynomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PolyFactor {
    /// Strictly ascending subset of `{1..n}`.
    pub subset: Vec<usize>,
    pub shade: Option<Shade>,
}

/// A monomial: a multiset of factors, kept sorted.
pub type Monomial = Vec<PolyFactor>;

/// A universal polynomial on subset-indexed indeterminates with integer
/// coefficients; every monomial is homogeneous of degree `n` when `X_K` has
/// degree `|K|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniversalPolynomial {
    pub n: usize,
    pub kind: PolyKind,
    pub terms: BTreeMap<Monomial, BigInt>,
}

impl UniversalPolynomial {
    fn add_term(&mut self, monomial: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    /// Total degree of each monomial under `deg X_K = |K|`; all must equal `n`.
    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().map(|f| f.subset.len()).sum::<usize>() == self.n)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct FactorJson {
            #[serde(rename = "K")]
            k: Vec<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            shade: Option<char>,
        }
        #[derive(Serialize)]
        struct TermJson {
            coeff: String,
            factors: Vec<FactorJson>,
        }
        #[derive(Serialize)]
        struct PolyJson {
            n: usize,
            kind: String,
            terms: Vec<TermJson>,
        }
        let j = PolyJson {
            n: self.n,
            kind: format!("{:?}", self.kind),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    coeff: c.to_string(),
                    factors: m
                        .iter()
                        .map(|f| FactorJson {
                            k: f.subset.clone(),
                            shade: f.shade.map(|s| s.as_char()),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&j).expect("polynomial serializes")
    }

    /// LaTeX rendering mirroring the JSON data, terms in map order.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.magnitude().to_string();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mag != "1" || m.is_empty() {
                out.push_str(&mag);
            }
            for f in m {
                let elems: Vec<String> = f.subset.iter().map(|k| k.to_string()).collect();
                match f.shade {
                    Some(s) => out.push_str(&format!(
                        "X^{{{}}}_{{\\{{{}\\}}}}",
                        s.as_char(),
                        elems.join(",")
                    )),
                    None => out.push_str(&format!("X_{{\\{{{}\\}}}}", elems.join(","))),
                }
            }
        }
        out
    }
}

/// Builds a universal polynomial for a pattern (and a shading, for `P`).
pub fn universal_poly(
    kind: PolyKind,
    chi: &SidePattern,
    eps: Option<&Shading>,
) -> Result<UniversalPolynomial> {
    let n = chi.len();
    if n > 6 {
        return Err(Error::SizeLimit {
            what: "universal polynomial arity",
            got: n,
            max: 6,
        });
    }
    let mut poly = UniversalPolynomial {
        n,
        kind,
        terms: BTreeMap::new(),
    };
    match kind {
        PolyKind::P => {
            let eps =
                eps.ok_or_else(|| Error::InvalidArgument("P requires a shading".into()))?;
            if eps.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "shading {eps} against pattern {chi}"
                )));
            }
            for pi in shaded_bnc(chi, eps)? {
                let coeff = mobius_coefficient(&pi, eps)?;
                debug_assert!(crate::ratio::is_integer(&coeff));
                let monomial: Monomial = pi
                    .partition()
                    .blocks()
                    .iter()
                    .map(|b| PolyFactor {
                        subset: b.clone(),
                        shade: Some(eps.shade(b[0])),
                    })
                    .collect();
                poly.add_term(monomial, coeff.to_integer());
            }
        }
        PolyKind::Q => {
            for eps in Shading::all_of_len(n)? {
                let p = universal_poly(PolyKind::P, chi, Some(&eps))?;
                for (m, c) in p.terms {
                    poly.add_term(m, c);
                }
            }
        }
        PolyKind::R => {
            let one = BncPartition::one(chi);
            let mut ctx = EvalContext::new();
            for pi in enumerate_bnc(chi)? {
                let coeff = mobius_bnc(&mut ctx, &pi, &one)?;
                debug_assert!(crate::ratio::is_integer(&coeff));
                let monomial: Monomial = pi
                    .partition()
                    .blocks()
                    .iter()
                    .map(|b| PolyFactor {
                        subset: b.clone(),
                        shade: None,
                    })
                    .collect();
                poly.add_term(monomial, coeff.to_integer());
            }
        }
    }
    Ok(poly)
}

/// Evaluates a universal polynomial: `X_K^A` and `X_K^B` substitute the
/// subword moments of the first and second family, unshaded `X_K` reads the
/// first. The word supplies the index at each position.
pub fn eval_poly(
    poly: &UniversalPolynomial,
    d1: &Distribution,
    d2: Option<&Distribution>,
    word: &[Name],
) -> Result<Q> {
    if word.len() != poly.n {
        return Err(Error::DimensionMismatch(format!(
            "word of length {} against polynomial arity {}",
            word.len(),
            poly.n
        )));
    }
    let mut acc = q0();
    for (monomial, coeff) in &poly.terms {
        let mut term = Q::from_integer(coeff.clone());
        for factor in monomial {
            let sub = subword(word, &factor.subset);
            let family = match factor.shade {
                None | Some(Shade::A) => d1,
                Some(Shade::B) => d2.ok_or_else(|| {
                    Error::InvalidArgument("shaded polynomial needs a second distribution".into())
                })?,
            };
            term *= family.moment(&sub)?;
        }
        acc += term;
    }
    Ok(acc)
}

fn require_single_faces(d: &Distribution) -> Result<(Name, Name)> {
    if d.shape().left.len() != 1 || d.shape().right.len() != 1 {
        return Err(Error::UnsupportedShape(format!(
            "single-element faces required, got |I|={} |J|={}",
            d.shape().left.len(),
            d.shape().right.len()
        )));
    }
    Ok((d.shape().left[0].clone(), d.shape().right[0].clone()))
}

/// Cumulant table of the product family built from a pair with single faces,
/// first family's factor leftmost in left products and rightmost in right
/// products: the cumulant of a word is the convolution sum over the lattice,
/// pairing each partition's cumulants from the first family with its Kreweras
/// complement's from the second.
pub fn multconv_cumulants(
    d1: &Distribution,
    d2: &Distribution,
    max_degree: usize,
) -> Result<CumulantTable> {
    let (l, r) = require_single_faces(d1)?;
    let (l2, r2) = require_single_faces(d2)?;
    if (l.clone(), r.clone()) != (l2, r2) {
        return Err(Error::DimensionMismatch(
            "product families must share index names".into(),
        ));
    }
    if max_degree > 5 {
        return Err(Error::SizeLimit {
            what: "multiplicative convolution degree",
            got: max_degree,
            max: 5,
        });
    }
    if d1.degree() < max_degree || d2.degree() < max_degree {
        return Err(Error::SizeLimit {
            what: "input degree vs requested degree",
            got: max_degree,
            max: d1.degree().min(d2.degree()),
        });
    }
    let shape = TableShape::new(vec![l], vec![r], max_degree)?;
    let engine = XformEngine::new(&shape)?;
    let k1 = engine.intern_table(moments_to_cumulants(&d1.truncate(max_degree)?)?.cumulants())?;
    let k2 = engine.intern_table(moments_to_cumulants(&d2.truncate(max_degree)?)?.cumulants())?;
    let words = shape.words();
    let entries = par_map(words, |word| {
        let iword = engine.intern(&word)?;
        let s = engine.s_images(&iword);
        let mut acc = q0();
        let mut sub = Vec::with_capacity(iword.len());
        let mut scratch = [0usize; crate::MAX_GROUND];
        for entry in &engine.nc[iword.len()] {
            // First family's cumulants over the partition's blocks.
            let Some(mut term) = engine.block_product(entry, &s, |positions| {
                subword_ids(&iword, positions, &mut sub);
                k1.get(sub.as_slice()).cloned()
            }) else {
                return Err(Error::MissingEntry(format!(
                    "cumulant for a subword of \"{}\"",
                    word_to_string(&word)
                )));
            };
            // Second family's cumulants over the Kreweras complement, whose
            // transported blocks are read off the cached complement.
            for block in &entry.kreweras_blocks {
                let m = block.len();
                for (t, &v) in block.iter().enumerate() {
                    scratch[t] = s[v - 1];
                }
                scratch[..m].sort_unstable();
                sub.clear();
                sub.extend(scratch[..m].iter().map(|&k| iword[k - 1]));
                term *= k2.get(sub.as_slice()).cloned().ok_or_else(|| {
                    Error::MissingEntry(format!(
                        "cumulant for a subword of \"{}\"",
                        word_to_string(&word)
                    ))
                })?;
            }
            acc += term;
        }
        Ok((word, acc))
    });
    let mut cumulants = BTreeMap::new();
    for e in entries {
        let (w, v): (Word, Q) = e?;
        cumulants.insert(w, v);
    }
    CumulantTable::new(shape, cumulants)
}

/// Moments of the product family computed straight from the joint
/// distribution: each product letter substitutes its two-letter word (left
/// letters as first-then-second family, right letters as second-then-first),
/// and each joint moment comes from the vanishing-mixed-cumulant expansion.
/// This is the direct route the convolution formula is checked against.
/// `swap_families` reverses both factor orders, giving the product of the
/// pair taken in the opposite order.
pub fn product_distribution_direct(
    d1: &Distribution,
    d2: &Distribution,
    degree: usize,
    swap_families: bool,
) -> Result<Distribution> {
    let (l, _r) = require_single_faces(d1)?;
    require_single_faces(d2)?;
    // Blocks of the doubled words are shade-constant, so cumulants up to the
    // product degree suffice.
    let ctx = JointContext::new(&d1.truncate(degree)?, &d2.truncate(degree)?)?;
    let shape = TableShape::new(
        vec![d1.shape().left[0].clone()],
        vec![d1.shape().right[0].clone()],
        degree,
    )?;
    let words = shape.words();
    let entries = par_map(words, |word| {
        let mut bare = Vec::with_capacity(2 * word.len());
        let mut marks = Vec::with_capacity(2 * word.len());
        for name in &word {
            let is_left = name == &l;
            // Left product letter: first family's factor first; right product
            // letter: second family's factor first. Swapping families flips
            // both.
            let first_a = is_left != swap_families;
            let (s1, s2) = if first_a {
                (Shade::A, Shade::B)
            } else {
                (Shade::B, Shade::A)
            };
            bare.push(name.clone());
            marks.push(s1);
            bare.push(name.clone());
            marks.push(s2);
        }
        let eps = Shading::new(marks)?;
        Ok((word, ctx.moment(&bare, &eps)?))
    });
    let mut moments = BTreeMap::new();
    for e in entries {
        let (w, v): (Word, Q) = e?;
        moments.insert(w, v);
    }
    Distribution::new(shape, moments)
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl fmt::Display for CumulantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}
