//! The incidence algebra on bi-non-crossing lattices: convolution, the
//! delta/zeta/Möbius functions, interval factorisation into full lattices,
//! and multiplicative functions determined by nets.
//!
//! An incidence function assigns an exact rational to every comparable pair
//! `p <= q` sharing a side pattern (and 0 to incomparable pairs). Convolution
//! is `(f * g)(p, q) = sum over p <= r <= q of f(p, r) g(r, q)`.
//!
//! Interval factorisation: restricting `p` to a block `W` of `q` gives a full
//! upper interval inside `BNC(chi|W)`, and that interval is a product of full
//! lattices indexed by the blocks of the Kreweras complement of `p|W` taken
//! within `BNC(chi|W)`. A multiplicative function is evaluated as the product
//! of its net values over those factor patterns. Length-one factors matter:
//! they carry the net's degree-one values (e.g. first moments), which is what
//! makes `m * mu = kappa` come out right; the public `interval_decompose`
//! drops them since they index one-element lattices.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bnc::{bnc_refines, enumerate_bnc, kreweras_bnc, BncPartition, SidePattern};
use crate::partition::{enumerate_nc, refines, Partition};
use crate::ratio::{format_q, parse_q, q0, q1, Q};
use crate::{Error, Result};

/// Per-evaluation-context memoization: Möbius values keyed on transported
/// non-crossing intervals, plus cached `NC(n)` enumerations. Contexts are
/// created per computation and never shared mutably across threads.
#[derive(Default)]
pub struct EvalContext {
    mobius: HashMap<(Partition, Partition), Q>,
    nc: HashMap<usize, Vec<Partition>>,
}

impl EvalContext {
    pub fn new() -> Self {
        Self::default()
    }

    fn nc_list(&mut self, n: usize) -> Result<&[Partition]> {
        if let std::collections::hash_map::Entry::Vacant(e) = self.nc.entry(n) {
            e.insert(enumerate_nc(n)?);
        }
        Ok(&self.nc[&n])
    }

    /// Möbius function of `NC(n)` by the inversion recursion
    /// `mu(p, q) = delta(p, q) - sum over p <= r < q of mu(p, r)`.
    pub fn mobius_nc(&mut self, p: &Partition, q: &Partition) -> Result<Q> {
        if p.n() != q.n() {
            return Err(Error::DimensionMismatch(format!(
                "Möbius over ground sets {} and {}",
                p.n(),
                q.n()
            )));
        }
        if !refines(p, q)? {
            return Ok(q0());
        }
        if p == q {
            return Ok(q1());
        }
        let key = (p.clone(), q.clone());
        if let Some(v) = self.mobius.get(&key) {
            return Ok(v.clone());
        }
        let interval: Vec<Partition> = self
            .nc_list(p.n())?
            .iter()
            .filter(|r| refines(p, r).unwrap() && refines(r, q).unwrap())
            .cloned()
            .collect();
        let mut acc = q0();
        for r in &interval {
            if r != q {
                acc += self.mobius_nc(p, r)?;
            }
        }
        let v = -acc;
        self.mobius.insert(key, v.clone());
        Ok(v)
    }
}

/// Möbius function on `BNC(chi)` via the transport identity: the value equals
/// the `NC` Möbius value of the transported pair.
pub fn mobius_bnc(ctx: &mut EvalContext, p: &BncPartition, q: &BncPartition) -> Result<Q> {
    if p.chi() != q.chi() {
        return Err(Error::DimensionMismatch(format!(
            "Möbius over patterns {} and {}",
            p.chi(),
            q.chi()
        )));
    }
    ctx.mobius_nc(&p.to_nc(), &q.to_nc())
}

/// Full factor list of the interval `[p, q]`, including length-one patterns.
///
/// Blocks of `q` are processed in min-order; each contributes the block
/// patterns of the Kreweras complement of `p` restricted to it, again in
/// min-order.
pub fn interval_factors_full(p: &BncPartition, q: &BncPartition) -> Result<Vec<SidePattern>> {
    if !bnc_refines(p, q)? {
        return Err(Error::InvalidArgument(format!(
            "{} does not refine {}",
            p.partition(),
            q.partition()
        )));
    }
    let mut factors = Vec::new();
    for w in q.partition().blocks() {
        let gamma = p.chi().restrict(w)?;
        let tau = p.partition().restrict(w)?;
        let tau = BncPartition::new(tau, gamma.clone())?;
        let complement = kreweras_bnc(&tau);
        for u in complement.partition().blocks() {
            factors.push(gamma.restrict(u)?);
        }
    }
    Ok(factors)
}

/// Full-lattice factors of `[p, q]` with the one-element (length-one) factors
/// dropped: the interval is order-isomorphic to the product of `BNC(beta)`
/// over the returned patterns.
pub fn interval_decompose(p: &BncPartition, q: &BncPartition) -> Result<Vec<SidePattern>> {
    Ok(interval_factors_full(p, q)?
        .into_iter()
        .filter(|beta| beta.len() > 1)
        .collect())
}

/// A multiplicative net: one rational per side pattern up to a length bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicativeNet {
    bound: usize,
    values: BTreeMap<String, Q>,
}

#[derive(Serialize, Deserialize)]
struct NetJson {
    bound: usize,
    values: BTreeMap<String, String>,
}

impl MultiplicativeNet {
    /// Builds a net from explicit values, checking completeness up to the bound.
    pub fn new(bound: usize, values: BTreeMap<String, Q>) -> Result<Self> {
        let net = MultiplicativeNet { bound, values };
        for n in 1..=bound {
            for chi in SidePattern::all_of_len(n)? {
                if !net.values.contains_key(&chi.to_string()) {
                    return Err(Error::IncompleteNet(chi.to_string()));
                }
            }
        }
        Ok(net)
    }

    /// Builds a net by evaluating a closure on every pattern up to the bound.
    pub fn from_fn(bound: usize, mut f: impl FnMut(&SidePattern) -> Q) -> Result<Self> {
        let mut values = BTreeMap::new();
        for n in 1..=bound {
            for chi in SidePattern::all_of_len(n)? {
                values.insert(chi.to_string(), f(&chi));
            }
        }
        Ok(MultiplicativeNet { bound, values })
    }

    /// The zeta net: 1 on every pattern.
    pub fn zeta(bound: usize) -> Result<Self> {
        Self::from_fn(bound, |_| q1())
    }

    /// The delta net: 1 on length-one patterns, 0 otherwise.
    pub fn delta(bound: usize) -> Result<Self> {
        Self::from_fn(bound, |chi| if chi.len() == 1 { q1() } else { q0() })
    }

    /// The Möbius net: the full-interval Möbius value for each pattern, which
    /// only depends on the length.
    pub fn moebius(bound: usize) -> Result<Self> {
        let mut ctx = EvalContext::new();
        let mut by_len = Vec::with_capacity(bound + 1);
        by_len.push(q0()); // unused slot 0
        for n in 1..=bound {
            let v = ctx.mobius_nc(&Partition::singletons(n), &Partition::full(n))?;
            by_len.push(v);
        }
        Self::from_fn(bound, |chi| by_len[chi.len()].clone())
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn value(&self, chi: &SidePattern) -> Result<&Q> {
        self.values
            .get(&chi.to_string())
            .ok_or_else(|| Error::IncompleteNet(chi.to_string()))
    }

    pub fn to_json(&self) -> String {
        let j = NetJson {
            bound: self.bound,
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), format_q(v)))
                .collect(),
        };
        serde_json::to_string(&j).expect("net serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: NetJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("net JSON: {e}")))?;
        let mut values = BTreeMap::new();
        for (k, v) in j.values {
            SidePattern::parse(&k)?;
            values.insert(k, parse_q(&v)?);
        }
        MultiplicativeNet::new(j.bound, values)
    }
}

/// Evaluates the multiplicative function of a net on an interval: the product
/// of net values over the full factor list (length-one factors included).
pub fn eval_multiplicative(
    net: &MultiplicativeNet,
    p: &BncPartition,
    q: &BncPartition,
) -> Result<Q> {
    let mut acc = q1();
    for beta in interval_factors_full(p, q)? {
        acc *= net.value(&beta)?.clone();
    }
    Ok(acc)
}

/// An element of the incidence algebra, evaluated lazily: the domain (all
/// interval pairs over all patterns) is unbounded, so functions are
/// evaluators rather than stored tables.
#[derive(Clone, Debug)]
pub enum IncidenceFunction {
    Delta,
    Zeta,
    Moebius,
    Multiplicative(MultiplicativeNet),
    Convolution(Box<IncidenceFunction>, Box<IncidenceFunction>),
}

impl IncidenceFunction {
    /// Evaluates on a pair, returning 0 when `p` does not refine `q`.
    pub fn eval(&self, ctx: &mut EvalContext, p: &BncPartition, q: &BncPartition) -> Result<Q> {
        if p.chi() != q.chi() {
            return Err(Error::DimensionMismatch(format!(
                "incidence function over patterns {} and {}",
                p.chi(),
                q.chi()
            )));
        }
        if !bnc_refines(p, q)? {
            return Ok(q0());
        }
        match self {
            IncidenceFunction::Delta => Ok(if p == q { q1() } else { q0() }),
            IncidenceFunction::Zeta => Ok(q1()),
            IncidenceFunction::Moebius => mobius_bnc(ctx, p, q),
            IncidenceFunction::Multiplicative(net) => eval_multiplicative(net, p, q),
            IncidenceFunction::Convolution(f, g) => convolve(f, g, p, q),
        }
    }
}

/// Convolution `(f * g)(p, q)` summed over the interval `[p, q]`.
pub fn convolve(
    f: &IncidenceFunction,
    g: &IncidenceFunction,
    p: &BncPartition,
    q: &BncPartition,
) -> Result<Q> {
    if p.chi() != q.chi() {
        return Err(Error::DimensionMismatch(format!(
            "convolution over patterns {} and {}",
            p.chi(),
            q.chi()
        )));
    }
    let n = p.n();
    if n > 8 {
        return Err(Error::SizeLimit {
            what: "convolution interval",
            got: n,
            max: 8,
        });
    }
    if !bnc_refines(p, q)? {
        return Ok(q0());
    }
    let mut ctx = EvalContext::new();
    let mut acc = q0();
    for r in enumerate_bnc(p.chi())? {
        if bnc_refines(p, &r)? && bnc_refines(&r, q)? {
            acc += f.eval(&mut ctx, p, &r)? * g.eval(&mut ctx, &r, q)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnc::Shading;
    use crate::ratio::{catalan, qi, qr, sign_pow};
    use num::bigint::BigInt;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn chi(s: &str) -> SidePattern {
        SidePattern::parse(s).unwrap()
    }

    fn bp(n: usize, p: &str, c: &str) -> BncPartition {
        BncPartition::new(Partition::parse(n, p).unwrap(), chi(c)).unwrap()
    }

    fn random_net(rng: &mut StdRng, bound: usize) -> MultiplicativeNet {
        MultiplicativeNet::from_fn(bound, |_| {
            qr(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3))
        })
        .unwrap()
    }

    #[test]
    fn mobius_small_values() {
        let mut ctx = EvalContext::new();
        for c in ["LL", "LR", "RL", "RR"] {
            let zero = BncPartition::zero(&chi(c));
            let one = BncPartition::one(&chi(c));
            assert_eq!(mobius_bnc(&mut ctx, &zero, &one).unwrap(), qi(-1));
            assert_eq!(mobius_bnc(&mut ctx, &zero, &zero).unwrap(), qi(1));
            assert_eq!(mobius_bnc(&mut ctx, &one, &zero).unwrap(), qi(0));
        }
        for c in ["LLLL", "LRLR", "RRLL", "RLRL"] {
            let zero = BncPartition::zero(&chi(c));
            let one = BncPartition::one(&chi(c));
            assert_eq!(mobius_bnc(&mut ctx, &zero, &one).unwrap(), qi(-5));
        }
        // mu(0, 1) on the full lattice is (-1)^(n-1) Catalan(n-1).
        for n in 1..=7usize {
            let mut ctx = EvalContext::new();
            let v = ctx
                .mobius_nc(&Partition::singletons(n), &Partition::full(n))
                .unwrap();
            let expected = sign_pow(n - 1) * Q::from_integer(catalan(n - 1));
            assert_eq!(v, expected);
        }
    }

    #[test]
    fn mobius_inverts_zeta_on_every_interval() {
        for n in 1..=5 {
            for c in SidePattern::all_of_len(n).unwrap() {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        let mz =
                            convolve(&IncidenceFunction::Moebius, &IncidenceFunction::Zeta, p, q)
                                .unwrap();
                        let zm =
                            convolve(&IncidenceFunction::Zeta, &IncidenceFunction::Moebius, p, q)
                                .unwrap();
                        let expected = if p == q { qi(1) } else { qi(0) };
                        assert_eq!(mz, expected, "mu*zeta at [{p}, {q}]");
                        assert_eq!(zm, expected, "zeta*mu at [{p}, {q}]");
                    }
                }
            }
        }
    }

    #[test]
    fn zeta_squared_counts_the_interval() {
        for n in 1..=6 {
            let c = SidePattern::all_of_len(n).unwrap()[n % (1 << n)].clone();
            let zero = BncPartition::zero(&c);
            let one = BncPartition::one(&c);
            let count =
                convolve(&IncidenceFunction::Zeta, &IncidenceFunction::Zeta, &zero, &one).unwrap();
            assert_eq!(count, Q::from_integer(catalan(n)));
        }
    }

    #[test]
    fn delta_is_the_identity() {
        let mut rng = StdRng::seed_from_u64(7);
        for c in ["LRL", "RLLR", "LLLL"] {
            let c = chi(c);
            let f = IncidenceFunction::Multiplicative(random_net(&mut rng, c.len()));
            let bnc = enumerate_bnc(&c).unwrap();
            let mut ctx = EvalContext::new();
            for p in &bnc {
                for q in &bnc {
                    if !bnc_refines(p, q).unwrap() {
                        continue;
                    }
                    let expected = f.eval(&mut ctx, p, q).unwrap();
                    let left = convolve(&IncidenceFunction::Delta, &f, p, q).unwrap();
                    let right = convolve(&f, &IncidenceFunction::Delta, p, q).unwrap();
                    assert_eq!(left, expected);
                    assert_eq!(right, expected);
                }
            }
        }
    }

    #[test]
    fn decompose_rejects_non_refinements() {
        let c = chi("LRL");
        let p = bp(3, "1,2|3", "LRL");
        let q = bp(3, "1,3|2", "LRL");
        assert!(matches!(
            interval_decompose(&p, &q),
            Err(Error::InvalidArgument(_))
        ));
        // A net whose bound is below a factor length reports incompleteness.
        let short = MultiplicativeNet::zeta(2).unwrap();
        let zero = BncPartition::zero(&c);
        let one = BncPartition::one(&c);
        assert!(matches!(
            eval_multiplicative(&short, &zero, &one),
            Err(Error::IncompleteNet(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        // Full interval is its own single factor.
        let c = chi("LRL");
        let zero = BncPartition::zero(&c);
        let one = BncPartition::one(&c);
        assert_eq!(interval_decompose(&zero, &one).unwrap(), vec![c.clone()]);
        // Diagonal intervals only have trivial factors.
        for p in enumerate_bnc(&c).unwrap() {
            assert_eq!(interval_decompose(&p, &p).unwrap(), Vec::<SidePattern>::new());
        }
        // The two-element interval [{1,3|2}, 1] over LLL has the unique
        // two-element full lattice as factor.
        let p = bp(3, "1,3|2", "LLL");
        let q = BncPartition::one(&chi("LLL"));
        assert_eq!(interval_decompose(&p, &q).unwrap(), vec![chi("LL")]);
    }

    /// Factor lists are order-correct: the interval size equals the product
    /// of Catalan numbers of the factor lengths (brute-force oracle).
    #[test]
    fn decompose_matches_interval_cardinality() {
        for n in 1..=5 {
            for c in SidePattern::all_of_len(n).unwrap() {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        let size = bnc
                            .iter()
                            .filter(|r| bnc_refines(p, r).unwrap() && bnc_refines(r, q).unwrap())
                            .count();
                        let mut product = BigInt::from(1);
                        for beta in interval_decompose(p, q).unwrap() {
                            product *= catalan(beta.len());
                        }
                        assert_eq!(BigInt::from(size), product, "[{p}, {q}]");
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_is_multiplicative_over_the_decomposition() {
        let mut ctx = EvalContext::new();
        for n in 1..=5 {
            let moebius_net = MultiplicativeNet::moebius(n).unwrap();
            for c in SidePattern::all_of_len(n).unwrap() {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        let direct = mobius_bnc(&mut ctx, p, q).unwrap();
                        let via_net = eval_multiplicative(&moebius_net, p, q).unwrap();
                        assert_eq!(direct, via_net, "[{p}, {q}]");
                    }
                }
            }
        }
        // The Möbius net on the full interval at n=3 gives 2.
        let net = MultiplicativeNet::moebius(3).unwrap();
        let c = chi("LRL");
        assert_eq!(
            eval_multiplicative(&net, &BncPartition::zero(&c), &BncPartition::one(&c)).unwrap(),
            qi(2)
        );
    }

    #[test]
    fn delta_and_zeta_nets_evaluate_correctly() {
        for n in 1..=4 {
            let zeta = MultiplicativeNet::zeta(n).unwrap();
            let delta = MultiplicativeNet::delta(n).unwrap();
            for c in SidePattern::all_of_len(n).unwrap() {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        assert_eq!(eval_multiplicative(&zeta, p, q).unwrap(), qi(1));
                        assert_eq!(
                            eval_multiplicative(&delta, p, q).unwrap(),
                            if p == q { qi(1) } else { qi(0) }
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn convolution_is_associative_on_random_nets() {
        let mut rng = StdRng::seed_from_u64(42);
        for trial in 0..6usize {
            let n = 2 + trial % 4;
            let patterns = SidePattern::all_of_len(n).unwrap();
            let c = patterns[rng.gen_range(0..patterns.len())].clone();
            let f = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
            let g = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
            let h = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
            let fg = IncidenceFunction::Convolution(Box::new(f.clone()), Box::new(g.clone()));
            let gh = IncidenceFunction::Convolution(Box::new(g), Box::new(h.clone()));
            let bnc = enumerate_bnc(&c).unwrap();
            for p in &bnc {
                for q in &bnc {
                    if !bnc_refines(p, q).unwrap() {
                        continue;
                    }
                    let left = convolve(&fg, &h, p, q).unwrap();
                    let right = convolve(&f, &gh, p, q).unwrap();
                    assert_eq!(left, right, "associativity at [{p}, {q}]");
                }
            }
        }
    }

    /// Convolving two multiplicative functions yields the multiplicative
    /// function of the induced net, on every interval.
    #[test]
    fn convolution_of_multiplicative_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 2..=5usize {
            let fnet = random_net(&mut rng, n);
            let gnet = random_net(&mut rng, n);
            let f = IncidenceFunction::Multiplicative(fnet.clone());
            let g = IncidenceFunction::Multiplicative(gnet.clone());
            let induced = MultiplicativeNet::from_fn(n, |c| {
                convolve(&f, &g, &BncPartition::zero(c), &BncPartition::one(c)).unwrap()
            })
            .unwrap();
            let patterns = SidePattern::all_of_len(n).unwrap();
            for c in [&patterns[0], &patterns[patterns.len() / 2], &patterns[patterns.len() - 1]] {
                let bnc = enumerate_bnc(c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        let direct = convolve(&f, &g, p, q).unwrap();
                        let via_net = eval_multiplicative(&induced, p, q).unwrap();
                        assert_eq!(direct, via_net, "multiplicativity at [{p}, {q}] over {c}");
                    }
                }
            }
        }
    }

    /// The Kreweras rewriting on full intervals:
    /// `(f*g)(0,1) = sum over pi of f(0,pi) g(0,K(pi))`, termwise exact.
    #[test]
    fn convolution_kreweras_rewriting() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 1..=5usize {
            let f = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
            let g = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
            for c in SidePattern::all_of_len(n).unwrap() {
                let zero = BncPartition::zero(&c);
                let one = BncPartition::one(&c);
                let fg = convolve(&f, &g, &zero, &one).unwrap();
                let mut ctx = EvalContext::new();
                let mut kreweras_sum = q0();
                for pi in enumerate_bnc(&c).unwrap() {
                    let k = kreweras_bnc(&pi);
                    kreweras_sum += f.eval(&mut ctx, &zero, &pi).unwrap()
                        * g.eval(&mut ctx, &zero, &k).unwrap();
                }
                assert_eq!(fg, kreweras_sum, "Kreweras rewriting over {c}");
            }
        }
    }

    /// Convolution commutes when net values depend only on pattern length
    /// (the classical situation, recovered through transport). It does NOT
    /// commute for side-sensitive nets: the square of the complement permutes
    /// block patterns, not just block sizes. The minimal counterexample over
    /// LRL is pinned below.
    #[test]
    fn convolution_commutativity_boundary() {
        // Length-only nets commute.
        let mut rng = StdRng::seed_from_u64(77);
        for n in 1..=5usize {
            let mut by_len: Vec<Q> = (0..=n)
                .map(|_| qr(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)))
                .collect();
            by_len[0] = q0();
            let f = IncidenceFunction::Multiplicative(
                MultiplicativeNet::from_fn(n, |c| by_len[c.len()].clone()).unwrap(),
            );
            let mut by_len2: Vec<Q> = (0..=n)
                .map(|_| qr(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)))
                .collect();
            by_len2[0] = q0();
            let g = IncidenceFunction::Multiplicative(
                MultiplicativeNet::from_fn(n, |c| by_len2[c.len()].clone()).unwrap(),
            );
            for c in SidePattern::all_of_len(n).unwrap() {
                let zero = BncPartition::zero(&c);
                let one = BncPartition::one(&c);
                let fg = convolve(&f, &g, &zero, &one).unwrap();
                let gf = convolve(&g, &f, &zero, &one).unwrap();
                assert_eq!(fg, gf, "length-only commutativity over {c}");
            }
        }
        // Side-sensitive counterexample: f charges LL, g charges RL.
        let f = IncidenceFunction::Multiplicative(
            MultiplicativeNet::from_fn(3, |c| {
                if c.len() == 1 || c.to_string() == "LL" {
                    q1()
                } else {
                    q0()
                }
            })
            .unwrap(),
        );
        let g = IncidenceFunction::Multiplicative(
            MultiplicativeNet::from_fn(3, |c| {
                if c.len() == 1 || c.to_string() == "RL" {
                    q1()
                } else {
                    q0()
                }
            })
            .unwrap(),
        );
        let c = chi("LRL");
        let zero = BncPartition::zero(&c);
        let one = BncPartition::one(&c);
        assert_eq!(convolve(&f, &g, &zero, &one).unwrap(), qi(1));
        assert_eq!(convolve(&g, &f, &zero, &one).unwrap(), qi(0));
    }

    /// The factor list of an upper interval [pi, 1] matches the block
    /// patterns of the Kreweras complement, which is what the rewriting
    /// above needs termwise.
    #[test]
    fn upper_interval_factors_are_kreweras_blocks() {
        for n in 1..=6 {
            for c in SidePattern::all_of_len(n).unwrap() {
                let one = BncPartition::one(&c);
                for pi in enumerate_bnc(&c).unwrap() {
                    let mut factors = interval_factors_full(&pi, &one).unwrap();
                    factors.sort();
                    let mut expected: Vec<SidePattern> = kreweras_bnc(&pi)
                        .partition()
                        .blocks()
                        .iter()
                        .map(|w| c.restrict(w).unwrap())
                        .collect();
                    expected.sort();
                    assert_eq!(factors, expected, "pi = {pi}");
                }
            }
        }
    }

    /// Reversing the processing order of the blocks only permutes the factor
    /// list, so multiplicative evaluation is path-independent.
    #[test]
    fn evaluation_is_decomposition_order_invariant() {
        let mut rng = StdRng::seed_from_u64(23);
        for n in 2..=5usize {
            let net = random_net(&mut rng, n);
            for c in SidePattern::all_of_len(n).unwrap() {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        if !bnc_refines(p, q).unwrap() {
                            continue;
                        }
                        let forward = eval_multiplicative(&net, p, q).unwrap();
                        let mut acc = q1();
                        for w in q.partition().blocks().iter().rev() {
                            let gamma = p.chi().restrict(w).unwrap();
                            let tau = BncPartition::new(
                                p.partition().restrict(w).unwrap(),
                                gamma.clone(),
                            )
                            .unwrap();
                            let complement = kreweras_bnc(&tau);
                            for u in complement.partition().blocks().iter().rev() {
                                acc *= net.value(&gamma.restrict(u).unwrap()).unwrap().clone();
                            }
                        }
                        assert_eq!(forward, acc);
                    }
                }
            }
        }
    }

    #[test]
    fn transport_identity_for_mobius() {
        let mut ctx = EvalContext::new();
        for n in 1..=6 {
            let patterns = SidePattern::all_of_len(n).unwrap();
            for c in [
                patterns[0].clone(),
                patterns[(1 << n) - 1].clone(),
                patterns[(1 << n) / 3].clone(),
            ] {
                let bnc = enumerate_bnc(&c).unwrap();
                for p in &bnc {
                    for q in &bnc {
                        let direct = mobius_bnc(&mut ctx, p, q).unwrap();
                        let transported = ctx.mobius_nc(&p.to_nc(), &q.to_nc()).unwrap();
                        assert_eq!(direct, transported);
                    }
                }
            }
        }
    }

    #[test]
    fn net_json_round_trip_and_incompleteness() {
        let net = MultiplicativeNet::moebius(3).unwrap();
        let json = net.to_json();
        let back = MultiplicativeNet::from_json(&json).unwrap();
        assert_eq!(net, back);
        // A net missing a pattern is rejected.
        let mut values = BTreeMap::new();
        values.insert("L".to_string(), qi(1));
        assert!(matches!(
            MultiplicativeNet::new(1, values.clone()),
            Err(Error::IncompleteNet(_))
        ));
        values.insert("R".to_string(), qi(1));
        assert!(MultiplicativeNet::new(1, values).is_ok());
    }

    #[test]
    fn shade_bound_filter_sanity() {
        let c = chi("RLR");
        let e = Shading::parse("AAB").unwrap();
        let below: Vec<BncPartition> = enumerate_bnc(&c)
            .unwrap()
            .into_iter()
            .filter(|p| e.bounds(p.partition()).unwrap())
            .collect();
        assert_eq!(below.len(), 2);
    }
}
