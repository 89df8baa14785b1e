//! Degree-truncated Fock-space operator model: sparse vectors over basis
//! words, left/right creation, left annihilation, the order-preserving
//! interleaver, the skeleton-gluing operators, the cumulant-weighted modeled
//! variables, and vacuum expectations.
//!
//! Tensor convention: the leftmost letter of a basis word is the bottom-most
//! open node of the corresponding skeleton and the next to be annihilated.
//! Gluing a word `alpha` onto the vacuum therefore yields the reversed word
//! `(alpha_n, ..., alpha_1)`; this follows the general gluing formula, whose
//! bottom letter is always `alpha_n`.

use std::collections::{BTreeMap, HashMap};

use num::Zero;

use crate::bnc::Side;
use crate::cumulant::{moments_to_cumulants, CumulantTable, Distribution, Name};
use crate::ratio::{q0, q1, Q};
use crate::{Error, Result};

/// Letter identifier within a [`FockAlphabet`].
pub type Letter = u8;

/// What to do when an operation would create a word longer than the cap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Overflow {
    /// Fail loudly; the raw operator semantics.
    Reject,
    /// Drop the offending terms; sound inside vacuum-expectation evaluation,
    /// where a word longer than the remaining annihilation budget can never
    /// return to the vacuum.
    Prune,
}

/// The index alphabet of a model: names with their sides, interned to ids.
#[derive(Clone, Debug)]
pub struct FockAlphabet {
    names: Vec<Name>,
    sides: Vec<Side>,
    ids: HashMap<Name, Letter>,
}

impl FockAlphabet {
    pub fn new(left: &[Name], right: &[Name]) -> Result<Self> {
        let mut names = Vec::new();
        let mut sides = Vec::new();
        let mut ids = HashMap::new();
        for (list, side) in [(left, Side::Left), (right, Side::Right)] {
            for name in list {
                if ids.contains_key(name) {
                    return Err(Error::InvalidArgument(format!(
                        "index name {name:?} appears twice"
                    )));
                }
                ids.insert(name.clone(), names.len() as Letter);
                names.push(name.clone());
                sides.push(side);
            }
        }
        if names.is_empty() {
            return Err(Error::InvalidArgument("empty alphabet".into()));
        }
        Ok(FockAlphabet { names, sides, ids })
    }

    pub fn from_distribution(dist: &Distribution) -> Result<Self> {
        Self::new(&dist.shape().left, &dist.shape().right)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn side(&self, letter: Letter) -> Side {
        self.sides[letter as usize]
    }

    pub fn name(&self, letter: Letter) -> &Name {
        &self.names[letter as usize]
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.ids
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown index {name:?}")))
    }

    pub fn intern(&self, word: &[Name]) -> Result<Vec<Letter>> {
        word.iter().map(|n| self.letter(n)).collect()
    }

    /// All letter words of length `1..=max_len` ending with `last`.
    pub fn words_ending_with(&self, last: Letter, max_len: usize) -> Vec<Vec<Letter>> {
        let mut out: Vec<Vec<Letter>> = vec![vec![last]];
        let mut layer: Vec<Vec<Letter>> = vec![vec![last]];
        for _ in 2..=max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for a in 0..self.len() as Letter {
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(a);
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// A degree-capped sparse rational vector over basis words. Zero amplitudes
/// are never stored; the empty word is the vacuum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockVector {
    cap: usize,
    amplitudes: BTreeMap<Vec<Letter>, Q>,
}

impl FockVector {
    pub fn zero(cap: usize) -> Self {
        FockVector {
            cap,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn vacuum(cap: usize) -> Self {
        let mut v = Self::zero(cap);
        v.amplitudes.insert(Vec::new(), q1());
        v
    }

    pub fn basis(cap: usize, word: Vec<Letter>) -> Result<Self> {
        if word.len() > cap {
            return Err(Error::Overflow {
                len: word.len(),
                cap,
            });
        }
        let mut v = Self::zero(cap);
        v.amplitudes.insert(word, q1());
        Ok(v)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<Letter>, Q> {
        &self.amplitudes
    }

    pub fn add_term(&mut self, word: Vec<Letter>, amp: Q) {
        if amp.is_zero() {
            return;
        }
        match self.amplitudes.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(amp);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += amp;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &FockVector) {
        for (w, a) in &other.amplitudes {
            self.add_term(w.clone(), a.clone());
        }
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.amplitudes.clear();
            return;
        }
        for a in self.amplitudes.values_mut() {
            *a *= c.clone();
        }
    }

    /// Amplitude of the vacuum component.
    pub fn vacuum_amplitude(&self) -> Q {
        self.amplitudes.get(&Vec::new()).cloned().unwrap_or_else(q0)
    }

    /// Debug dump: one "amplitude  word" line per basis word, sorted
    /// lexicographically by word.
    pub fn dump(&self, alphabet: &FockAlphabet) -> String {
        let mut lines: Vec<(String, String)> = self
            .amplitudes
            .iter()
            .map(|(w, a)| {
                let word = if w.is_empty() {
                    "(vacuum)".to_string()
                } else {
                    w.iter()
                        .map(|&l| alphabet.name(l).clone())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                (word, crate::ratio::format_q(a))
            })
            .collect();
        lines.sort();
        lines
            .into_iter()
            .map(|(w, a)| format!("{a}  {w}\n"))
            .collect()
    }
}

/// Left creation prepends the letter (new bottom node); right creation
/// appends it (new top node).
pub fn apply_creation(
    side: Side,
    letter: Letter,
    v: &FockVector,
    policy: Overflow,
) -> Result<FockVector> {
    let mut out = FockVector::zero(v.cap);
    for (w, a) in &v.amplitudes {
        if w.len() + 1 > v.cap {
            match policy {
                Overflow::Reject => {
                    return Err(Error::Overflow {
                        len: w.len() + 1,
                        cap: v.cap,
                    })
                }
                Overflow::Prune => continue,
            }
        }
        let mut nw = Vec::with_capacity(w.len() + 1);
        match side {
            Side::Left => {
                nw.push(letter);
                nw.extend_from_slice(w);
            }
            Side::Right => {
                nw.extend_from_slice(w);
                nw.push(letter);
            }
        }
        out.add_term(nw, a.clone());
    }
    Ok(out)
}

/// Left annihilation deletes a leading matching letter; other words and the
/// vacuum map to zero.
pub fn apply_annihilation_left(letter: Letter, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cap);
    for (w, a) in &v.amplitudes {
        if let Some((&first, rest)) = w.split_first() {
            if first == letter {
                out.add_term(rest.to_vec(), a.clone());
            }
        }
    }
    out
}

/// Projection onto the subspace spanned by all-right basis words (vacuum
/// included).
pub fn project_right(alphabet: &FockAlphabet, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero(v.cap);
    for (w, a) in &v.amplitudes {
        if w.iter().all(|&l| alphabet.side(l) == Side::Right) {
            out.add_term(w.clone(), a.clone());
        }
    }
    out
}

/// Accumulates `prefix (shuffles of u and w) tail` into `out`.
fn shuffle_into(
    out: &mut FockVector,
    prefix: &[Letter],
    u: &[Letter],
    w: &[Letter],
    tail: &[Letter],
    amp: &Q,
) {
    fn rec(
        out: &mut FockVector,
        acc: &mut Vec<Letter>,
        u: &[Letter],
        w: &[Letter],
        tail: &[Letter],
        amp: &Q,
    ) {
        if u.is_empty() && w.is_empty() {
            let mut word = acc.clone();
            word.extend_from_slice(tail);
            out.add_term(word, amp.clone());
            return;
        }
        if let Some((&x, rest)) = u.split_first() {
            acc.push(x);
            rec(out, acc, rest, w, tail, amp);
            acc.pop();
        }
        if let Some((&y, rest)) = w.split_first() {
            acc.push(y);
            rec(out, acc, u, rest, tail, amp);
            acc.pop();
        }
    }
    let mut acc = prefix.to_vec();
    rec(out, &mut acc, u, w, tail, amp);
}

/// The interleaver: the sum over all shuffles of two basis words that keep
/// each word's internal order. Coinciding shuffles accumulate amplitude.
pub fn sigma_interleave(
    u: &[Letter],
    w: &[Letter],
    cap: usize,
    policy: Overflow,
) -> Result<FockVector> {
    if u.len() + w.len() > cap {
        match policy {
            Overflow::Reject => {
                return Err(Error::Overflow {
                    len: u.len() + w.len(),
                    cap,
                })
            }
            Overflow::Prune => return Ok(FockVector::zero(cap)),
        }
    }
    let mut out = FockVector::zero(cap);
    shuffle_into(&mut out, &[], u, w, &[], &q1());
    Ok(out)
}

/// The skeleton-gluing operator for an index word, applied to one basis word.
///
/// With the last letter of `alpha` on the left: a basis word without left
/// letters interleaves with the new left letters below `alpha`'s lowest right
/// letter, everything from that letter up is glued on top; a basis word with
/// a left letter admits only all-left `alpha`, which interleaves with the
/// all-right segment below the lowest left letter. The right-sided case
/// mirrors the roles.
fn t_alpha_on_basis(
    alphabet: &FockAlphabet,
    alpha: &[Letter],
    eta: &[Letter],
    amp: &Q,
    out: &mut FockVector,
) {
    let n = alpha.len();
    let primary = alphabet.side(alpha[n - 1]);
    let opposite = match primary {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    let first_primary = eta.iter().position(|&l| alphabet.side(l) == primary);
    match first_primary {
        None => {
            // No letter on the new block's bottom side: the run of alpha
            // strictly below its lowest opposite-side letter interleaves
            // freely with eta.
            let k = (1..=n)
                .rev()
                .find(|&t| alphabet.side(alpha[t - 1]) == opposite)
                .unwrap_or(0);
            let run: Vec<Letter> = (k + 1..n).rev().map(|t| alpha[t - 1]).collect();
            let tail: Vec<Letter> = (1..=k).rev().map(|t| alpha[t - 1]).collect();
            shuffle_into(out, &[alpha[n - 1]], &run, eta, &tail, amp);
        }
        Some(c) => {
            // Gluing below an existing same-side letter forces alpha to stay
            // entirely on that side.
            if alpha.iter().any(|&l| alphabet.side(l) == opposite) {
                return;
            }
            let below = &eta[..c];
            let rest = &eta[c..];
            let run: Vec<Letter> = alpha[..n - 1].iter().rev().copied().collect();
            shuffle_into(out, &[alpha[n - 1]], &run, below, rest, amp);
        }
    }
}

/// Linear extension of the gluing operator over a vector.
pub fn t_alpha(
    alphabet: &FockAlphabet,
    alpha: &[Letter],
    v: &FockVector,
    policy: Overflow,
) -> Result<FockVector> {
    if alpha.is_empty() {
        return Err(Error::InvalidArgument("empty gluing word".into()));
    }
    let mut out = FockVector::zero(v.cap);
    for (eta, amp) in &v.amplitudes {
        if eta.len() + alpha.len() > v.cap {
            match policy {
                Overflow::Reject => {
                    return Err(Error::Overflow {
                        len: eta.len() + alpha.len(),
                        cap: v.cap,
                    })
                }
                Overflow::Prune => continue,
            }
        }
        t_alpha_on_basis(alphabet, alpha, eta, amp, &mut out);
    }
    Ok(out)
}

/// Cumulant weights for the generating operator, keyed by letter words.
#[derive(Clone, Debug)]
pub struct CumulantNet {
    bound: usize,
    kappa: HashMap<Vec<Letter>, Q>,
}

impl CumulantNet {
    pub fn from_table(alphabet: &FockAlphabet, table: &CumulantTable) -> Result<Self> {
        let mut kappa = HashMap::new();
        for (word, v) in table.cumulants() {
            kappa.insert(alphabet.intern(word)?, v.clone());
        }
        Ok(CumulantNet {
            bound: table.shape().degree,
            kappa,
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn value(&self, alpha: &[Letter]) -> Result<&Q> {
        self.kappa
            .get(alpha)
            .ok_or_else(|| Error::MissingEntry(format!("cumulant for letter word {alpha:?}")))
    }
}

/// One modeled variable applied to a vector: annihilate after adding every
/// cumulant-weighted gluing. Only gluing words ending with the variable's
/// letter survive the annihilation, so the sum is restricted to them.
pub fn z_apply(
    alphabet: &FockAlphabet,
    letter: Letter,
    net: &CumulantNet,
    v: &FockVector,
    policy: Overflow,
) -> Result<FockVector> {
    if net.bound < v.cap {
        return Err(Error::SizeLimit {
            what: "cumulant net bound vs cap",
            got: v.cap,
            max: net.bound,
        });
    }
    let mut pre = v.clone();
    for alpha in alphabet.words_ending_with(letter, v.cap) {
        let weight = net.value(&alpha)?;
        if weight.is_zero() {
            continue;
        }
        let mut glued = t_alpha(alphabet, &alpha, v, policy)?;
        glued.scale(weight);
        pre.add(&glued);
    }
    Ok(apply_annihilation_left(letter, &pre))
}

fn all_letter_words(alphabet_len: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * alphabet_len);
        for w in &layer {
            for a in 0..alphabet_len as Letter {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        layer = next;
    }
    layer
}

/// Vacuum expectation of the modeled word with an explicit cap (any cap at
/// least the word length gives the same answer).
pub fn fock_moment_with_cap(dist: &Distribution, word: &[Name], cap: usize) -> Result<Q> {
    let n = word.len();
    if n > dist.degree() || dist.degree() > 6 {
        return Err(Error::SizeLimit {
            what: "fock moment word length vs degree",
            got: n.max(dist.degree()),
            max: dist.degree().min(6),
        });
    }
    if n == 0 {
        return Ok(q1());
    }
    if cap < n {
        return Err(Error::SizeLimit {
            what: "fock cap vs word length",
            got: n,
            max: cap,
        });
    }
    let alphabet = FockAlphabet::from_distribution(dist)?;
    let table = moments_to_cumulants(&dist.truncate(cap.min(dist.degree()))?)?;
    let mut net = CumulantNet::from_table(&alphabet, &table)?;
    // For caps beyond the distribution degree, extend the net by zeros: a
    // gluing word longer than the remaining annihilation budget can never
    // contribute to the vacuum expectation of this product.
    if net.bound < cap {
        net.bound = cap;
        for len in table.shape().degree + 1..=cap {
            for alpha in all_letter_words(alphabet.len(), len) {
                net.kappa.entry(alpha).or_insert_with(q0);
            }
        }
    }
    let letters = alphabet.intern(word)?;
    let mut v = FockVector::vacuum(cap);
    for &letter in letters.iter().rev() {
        v = z_apply(&alphabet, letter, &net, &v, Overflow::Prune)?;
    }
    Ok(v.vacuum_amplitude())
}

/// Vacuum expectation of the modeled word at the natural truncation (the
/// word's length); equals the distribution's own moment.
pub fn fock_moment(dist: &Distribution, word: &[Name]) -> Result<Q> {
    fock_moment_with_cap(dist, word, word.len().max(1))
}

/// The left-creation word `L_{alpha(n)} ... L_{alpha(1)}` applied to a
/// vector; shared with tests and the verification suites.
pub fn left_creation_word(
    alpha: &[Letter],
    v: &FockVector,
    policy: Overflow,
) -> Result<FockVector> {
    let mut out = v.clone();
    for &l in alpha {
        out = apply_creation(Side::Left, l, &out, policy)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulant::{all_words, word_from_string, TableShape};
    use crate::ratio::{qi, qr};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn two_letter_alphabet() -> FockAlphabet {
        FockAlphabet::new(&["i".into()], &["j".into()]).unwrap()
    }

    fn single_pair_shape(degree: usize) -> TableShape {
        TableShape::new(vec!["l".into()], vec!["r".into()], degree).unwrap()
    }

    /// Words of length 0..=max over an alphabet of the given size.
    fn all_letter_words_upto(alphabet_len: usize, max: usize) -> Vec<Vec<Letter>> {
        let mut out = vec![Vec::new()];
        for len in 1..=max {
            out.extend(all_letter_words(alphabet_len, len));
        }
        out
    }

    #[test]
    fn creation_and_annihilation_basics() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let vac = FockVector::vacuum(4);
        // Left creation prepends.
        let vi = apply_creation(Side::Left, i, &vac, Overflow::Reject).unwrap();
        assert_eq!(vi, FockVector::basis(4, vec![i]).unwrap());
        let vii = apply_creation(Side::Left, i, &vi, Overflow::Reject).unwrap();
        assert_eq!(vii, FockVector::basis(4, vec![i, i]).unwrap());
        // Right creation appends.
        let vij = apply_creation(Side::Right, j, &vi, Overflow::Reject).unwrap();
        assert_eq!(vij, FockVector::basis(4, vec![i, j]).unwrap());
        // Annihilation strips a matching leading letter.
        assert_eq!(
            apply_annihilation_left(i, &vij),
            FockVector::basis(4, vec![j]).unwrap()
        );
        assert_eq!(apply_annihilation_left(j, &vij), FockVector::zero(4));
        assert_eq!(apply_annihilation_left(i, &vac), FockVector::zero(4));
        // Overflow at the cap is an error for raw operators.
        let full = FockVector::basis(2, vec![i, j]).unwrap();
        assert!(matches!(
            apply_creation(Side::Left, i, &full, Overflow::Reject),
            Err(Error::Overflow { .. })
        ));
        assert_eq!(
            apply_creation(Side::Left, i, &full, Overflow::Prune).unwrap(),
            FockVector::zero(2)
        );
    }

    #[test]
    fn projection_keeps_right_words() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let mut v = FockVector::zero(4);
        v.add_term(vec![], qi(5));
        v.add_term(vec![j, j], qi(3));
        v.add_term(vec![j, i], qi(2));
        let p = project_right(&a, &v);
        let mut expected = FockVector::zero(4);
        expected.add_term(vec![], qi(5));
        expected.add_term(vec![j, j], qi(3));
        assert_eq!(p, expected);
    }

    #[test]
    fn interleaver_examples() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        // Against the vacuum it is the identity.
        let u = vec![i, j];
        assert_eq!(
            sigma_interleave(&u, &[], 4, Overflow::Reject).unwrap(),
            FockVector::basis(4, u.clone()).unwrap()
        );
        assert_eq!(
            sigma_interleave(&[], &u, 4, Overflow::Reject).unwrap(),
            FockVector::basis(4, u).unwrap()
        );
        // Two against two: six shuffles.
        let s = sigma_interleave(&[i, i], &[j, j], 4, Overflow::Reject).unwrap();
        let total: Q = s.amplitudes().values().cloned().sum();
        assert_eq!(total, qi(6));
        assert_eq!(s.amplitudes().len(), 6);
        // Coinciding shuffles accumulate.
        let s = sigma_interleave(&[i], &[i], 2, Overflow::Reject).unwrap();
        assert_eq!(s.amplitudes()[&vec![i, i]], qi(2));
        // Overflow handling.
        assert!(sigma_interleave(&[i, i], &[j], 2, Overflow::Reject).is_err());
        assert_eq!(
            sigma_interleave(&[i, i], &[j], 2, Overflow::Prune).unwrap(),
            FockVector::zero(2)
        );
    }

    /// The four-letter gluing example: alpha with sides (L, R, L, L) applied
    /// to a single right letter gives exactly the two listed terms.
    #[test]
    fn gluing_mixed_block_onto_right_letter() {
        let a = FockAlphabet::new(
            &["i1".into(), "i2".into(), "i3".into()],
            &["j1".into(), "j".into()],
        )
        .unwrap();
        let al = |n: &str| a.letter(n).unwrap();
        let alpha = vec![al("i1"), al("j1"), al("i2"), al("i3")];
        let eta = FockVector::basis(5, vec![al("j")]).unwrap();
        let out = t_alpha(&a, &alpha, &eta, Overflow::Reject).unwrap();
        let mut expected = FockVector::zero(5);
        expected.add_term(vec![al("i3"), al("i2"), al("j"), al("j1"), al("i1")], qi(1));
        expected.add_term(vec![al("i3"), al("j"), al("i2"), al("j1"), al("i1")], qi(1));
        assert_eq!(out, expected);
    }

    /// A left-bottom block with a right letter cannot glue below an existing
    /// left letter.
    #[test]
    fn gluing_blocked_by_crossing() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let eta = FockVector::basis(4, vec![i]).unwrap();
        let out = t_alpha(&a, &[j, i], &eta, Overflow::Reject).unwrap();
        assert_eq!(out, FockVector::zero(4));
    }

    /// All-left block onto a word with both sides: interleave only below the
    /// lowest left letter.
    #[test]
    fn gluing_all_left_block_interleaves_below() {
        let a = FockAlphabet::new(
            &["a1".into(), "a2".into(), "i".into()],
            &["j".into(), "jp".into()],
        )
        .unwrap();
        let al = |n: &str| a.letter(n).unwrap();
        // eta bottom-to-top: j, i, j'.
        let eta = FockVector::basis(5, vec![al("j"), al("i"), al("jp")]).unwrap();
        let alpha = vec![al("a1"), al("a2")];
        let out = t_alpha(&a, &alpha, &eta, Overflow::Reject).unwrap();
        let mut expected = FockVector::zero(5);
        expected.add_term(vec![al("a2"), al("a1"), al("j"), al("i"), al("jp")], qi(1));
        expected.add_term(vec![al("a2"), al("j"), al("a1"), al("i"), al("jp")], qi(1));
        assert_eq!(out, expected);
    }

    #[test]
    fn gluing_on_vacuum_reverses_the_word() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        for alpha in [vec![i, j], vec![j, i, i], vec![i, i], vec![j, j, i, j]] {
            let out = t_alpha(&a, &alpha, &FockVector::vacuum(6), Overflow::Reject).unwrap();
            let mut rev = alpha.clone();
            rev.reverse();
            assert_eq!(out, FockVector::basis(6, rev).unwrap());
        }
    }

    /// All-left gluing words act on all-left vectors as a product of left
    /// creations.
    #[test]
    fn all_left_gluing_is_a_creation_product() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        for eta in [vec![], vec![i], vec![i, i]] {
            let v = FockVector::basis(6, eta).unwrap();
            for alpha in [vec![i], vec![i, i], vec![i, i, i]] {
                let glued = t_alpha(&a, &alpha, &v, Overflow::Reject).unwrap();
                let direct = left_creation_word(&alpha, &v, Overflow::Reject).unwrap();
                assert_eq!(glued, direct);
            }
        }
    }

    #[test]
    fn t_alpha_is_linear() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let mut v = FockVector::zero(5);
        v.add_term(vec![j], qr(2, 3));
        v.add_term(vec![j, j], qi(-1));
        let mut w = FockVector::zero(5);
        w.add_term(vec![j], qi(1));
        w.add_term(vec![i], qi(4));
        let alpha = vec![i, i];
        let mut sum = v.clone();
        sum.add(&w);
        let lhs = t_alpha(&a, &alpha, &sum, Overflow::Reject).unwrap();
        let mut rhs = t_alpha(&a, &alpha, &v, Overflow::Reject).unwrap();
        rhs.add(&t_alpha(&a, &alpha, &w, Overflow::Reject).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn z_apply_degenerate_cases() {
        let shape = single_pair_shape(3);
        let mut rng = StdRng::seed_from_u64(21);
        let dist = Distribution::random(&mut rng, shape);
        let alphabet = FockAlphabet::from_distribution(&dist).unwrap();
        let l = alphabet.letter("l").unwrap();
        let table = moments_to_cumulants(&dist).unwrap();
        let net = CumulantNet::from_table(&alphabet, &table).unwrap();
        // Vacuum amplitude of one application is the first-order cumulant,
        // which is the first moment.
        let v = z_apply(&alphabet, l, &net, &FockVector::vacuum(3), Overflow::Prune).unwrap();
        assert_eq!(
            v.vacuum_amplitude(),
            dist.moment(&word_from_string("l")).unwrap()
        );
        // A zero net reduces the modeled variable to plain annihilation.
        let zero_table = CumulantTable::new(
            single_pair_shape(3),
            single_pair_shape(3)
                .words()
                .into_iter()
                .map(|w| (w, q0()))
                .collect(),
        )
        .unwrap();
        let zero_net = CumulantNet::from_table(&alphabet, &zero_table).unwrap();
        let mut x = FockVector::zero(3);
        x.add_term(vec![l, l], qi(7));
        x.add_term(vec![l], qi(2));
        let out = z_apply(&alphabet, l, &zero_net, &x, Overflow::Reject).unwrap();
        assert_eq!(out, apply_annihilation_left(l, &x));
    }

    /// Gluing words whose last letter differs from the annihilated one never
    /// contribute: their bottom letter blocks the annihilation.
    #[test]
    fn only_matching_gluings_survive_annihilation() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let mut v = FockVector::zero(4);
        v.add_term(vec![j], qi(1));
        v.add_term(vec![i, j], qi(2));
        for alpha in [vec![i], vec![j, i], vec![i, i], vec![j, j, i]] {
            // All end with i; annihilating j must give zero.
            let glued = t_alpha(&a, &alpha, &v, Overflow::Prune).unwrap();
            assert_eq!(apply_annihilation_left(j, &glued), FockVector::zero(4));
        }
    }

    #[test]
    fn fock_moment_matches_distribution_single_pair() {
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..3 {
            let dist = Distribution::random(&mut rng, single_pair_shape(4));
            for word in all_words(&dist.shape().alphabet(), 4) {
                assert_eq!(
                    fock_moment(&dist, &word).unwrap(),
                    dist.moment(&word).unwrap(),
                    "word {word:?}"
                );
            }
        }
    }

    #[test]
    fn fock_moment_matches_distribution_two_by_two() {
        let shape = TableShape::new(
            vec!["a".into(), "b".into()],
            vec!["u".into(), "v".into()],
            3,
        )
        .unwrap();
        let mut rng = StdRng::seed_from_u64(23);
        let dist = Distribution::random(&mut rng, shape);
        for word in all_words(&dist.shape().alphabet(), 3) {
            assert_eq!(
                fock_moment(&dist, &word).unwrap(),
                dist.moment(&word).unwrap(),
                "word {word:?}"
            );
        }
    }

    #[test]
    fn fock_moment_is_cap_independent() {
        let mut rng = StdRng::seed_from_u64(24);
        let dist = Distribution::random(&mut rng, single_pair_shape(4));
        for word in all_words(&dist.shape().alphabet(), 3) {
            let at_n = fock_moment_with_cap(&dist, &word, word.len()).unwrap();
            let at_n1 = fock_moment_with_cap(&dist, &word, word.len() + 1).unwrap();
            let at_n2 = fock_moment_with_cap(&dist, &word, word.len() + 2).unwrap();
            assert_eq!(at_n, at_n1);
            assert_eq!(at_n, at_n2);
        }
    }

    /// Expanding the modeled product symbolically, each factor choosing bare
    /// annihilation or one weight-one gluing, yields exactly Catalan(n)
    /// non-zero vacuum contributions, each from a single completed skeleton.
    #[test]
    fn skeleton_census_is_catalan() {
        let shape = single_pair_shape(4);
        let alphabet = FockAlphabet::new(&shape.left, &shape.right).unwrap();
        for word in [
            word_from_string("l r"),
            word_from_string("l r l"),
            word_from_string("r l r l"),
            word_from_string("l l r r"),
        ] {
            let n = word.len();
            let letters = alphabet.intern(&word).unwrap();
            let mut per_position: Vec<Vec<Option<Vec<Letter>>>> = Vec::new();
            for &l in &letters {
                let mut opts: Vec<Option<Vec<Letter>>> = vec![None];
                opts.extend(alphabet.words_ending_with(l, n).into_iter().map(Some));
                per_position.push(opts);
            }
            let mut nonzero = 0usize;
            let mut total = q0();
            let mut stack = vec![0usize; n];
            'assignment: loop {
                let mut v = FockVector::vacuum(n);
                for t in (0..n).rev() {
                    if let Some(alpha) = &per_position[t][stack[t]] {
                        v = t_alpha(&alphabet, alpha, &v, Overflow::Prune).unwrap();
                    }
                    v = apply_annihilation_left(letters[t], &v);
                }
                let amp = v.vacuum_amplitude();
                if !amp.is_zero() {
                    nonzero += 1;
                    assert_eq!(amp, qi(1), "each completed skeleton counts once");
                    total += amp;
                }
                // Advance the mixed-radix counter.
                for t in 0..n {
                    stack[t] += 1;
                    if stack[t] < per_position[t].len() {
                        continue 'assignment;
                    }
                    stack[t] = 0;
                }
                break;
            }
            let expected = crate::ratio::catalan(n);
            assert_eq!(num::BigInt::from(nonzero), expected, "word {word:?}");
            assert_eq!(total, Q::from_integer(expected));
        }
    }

    /// The two-left-letter gluing operator expands into creation words
    /// sandwiching the first letter under any all-right prefix.
    #[test]
    fn closing_identity_left_pair() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let cap = 5usize;
        for eta in all_letter_words_upto(2, 3) {
            let v = FockVector::basis(cap, eta.clone()).unwrap();
            let lhs = t_alpha(&a, &[i, i], &v, Overflow::Prune).unwrap();
            let mut rhs = FockVector::zero(cap);
            for m in 0..=cap - 2 {
                for alpha in all_letter_words(2, m) {
                    if alpha.iter().any(|&l| a.side(l) != Side::Right) {
                        continue;
                    }
                    // L_{i'} L_{alpha(1)} ... L_{alpha(m)} L_i
                    // L*_{alpha(m)} ... L*_{alpha(1)}, applied right to left.
                    let mut x = v.clone();
                    for &l in &alpha {
                        x = apply_annihilation_left(l, &x);
                    }
                    x = apply_creation(Side::Left, i, &x, Overflow::Prune).unwrap();
                    for &l in alpha.iter().rev() {
                        x = apply_creation(Side::Left, l, &x, Overflow::Prune).unwrap();
                    }
                    x = apply_creation(Side::Left, i, &x, Overflow::Prune).unwrap();
                    rhs.add(&x);
                }
            }
            assert_eq!(lhs, rhs, "eta {eta:?}");
        }
    }

    /// The right-then-left gluing operator is left creation after right
    /// creation on the all-right subspace.
    #[test]
    fn closing_identity_mixed_pair() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let cap = 5usize;
        for eta in all_letter_words_upto(2, 3) {
            let v = FockVector::basis(cap, eta.clone()).unwrap();
            // alpha(1) = j, alpha(2) = i.
            let lhs = t_alpha(&a, &[j, i], &v, Overflow::Prune).unwrap();
            let projected = project_right(&a, &v);
            let after_r = apply_creation(Side::Right, j, &projected, Overflow::Prune).unwrap();
            let rhs = apply_creation(Side::Left, i, &after_r, Overflow::Prune).unwrap();
            assert_eq!(lhs, rhs, "eta {eta:?}");
        }
    }

    /// Ten-factor walkthrough over one left and one right letter: choosing
    /// the four gluings (r l), (l r l l), (r r), (l l) at the last four
    /// factors and bare annihilations elsewhere completes exactly one
    /// skeleton, so the vacuum amplitude is the product of the four weights.
    #[test]
    fn ten_letter_walkthrough_single_surviving_skeleton() {
        let a = FockAlphabet::new(&["l".into()], &["r".into()]).unwrap();
        let l = a.letter("l").unwrap();
        let r = a.letter("r").unwrap();
        // Word positions 1..10, applied right to left.
        let word = [l, r, l, l, r, r, l, r, l, l];
        let gluings: [(usize, Vec<Letter>, i64); 4] = [
            (10, vec![r, l], 2),
            (9, vec![l, r, l, l], 3),
            (8, vec![r, r], 5),
            (7, vec![l, l], 7),
        ];
        let mut v = FockVector::vacuum(10);
        let mut term_counts = Vec::new();
        for k in (1..=10).rev() {
            if let Some((_, alpha, weight)) = gluings.iter().find(|(pos, _, _)| *pos == k) {
                v = t_alpha(&a, alpha, &v, Overflow::Prune).unwrap();
                v.scale(&qi(*weight));
            }
            v = apply_annihilation_left(word[k - 1], &v);
            term_counts.push(v.amplitudes().len());
        }
        // The walkthrough's intermediate census: two terms after the second
        // gluing, three after the third, then six, and pruning down to one.
        assert_eq!(term_counts[1], 2);
        assert_eq!(term_counts[2], 3);
        assert_eq!(term_counts[3], 6);
        assert_eq!(term_counts[4], 3);
        assert_eq!(term_counts[5], 1);
        assert_eq!(v.vacuum_amplitude(), qi(2 * 3 * 5 * 7));
    }

    #[test]
    fn dump_is_sorted_and_stable() {
        let a = two_letter_alphabet();
        let i = a.letter("i").unwrap();
        let j = a.letter("j").unwrap();
        let mut v = FockVector::zero(3);
        v.add_term(vec![j, i], qr(-1, 2));
        v.add_term(vec![i], qi(2));
        v.add_term(vec![], qi(1));
        let dump = v.dump(&a);
        assert_eq!(dump, "1  (vacuum)\n2  i\n-1/2  j i\n");
    }
}
