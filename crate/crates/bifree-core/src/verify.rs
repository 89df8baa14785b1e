//! Named property suites over the whole crate, shared by the CLI `verify`
//! subcommand and the acceptance tests. Each suite runs a list of cases and
//! reports one pass/fail line per case; independent cases fan out across
//! worker threads and are reported in deterministic order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bnc::{
    bnc_refines, classify_blocks, enumerate_bnc, enumerate_lr, is_lateral_refinement,
    kreweras_bnc, s_perm, shaded_bnc, BncPartition, Shade, Shading, Side, SidePattern,
};
use crate::cumulant::{
    all_words, bifree_join, check_combinatorial_bifreeness, eval_poly, lat_coefficient,
    mixed_moment_lat, mobius_coefficient, moments_to_cumulants, multconv_cumulants,
    product_distribution_direct, split_tagged_name, tagged_name, universal_poly,
    cumulants_to_moments, Distribution, Name, PolyKind, TableShape, Word,
};
use crate::exec::par_map;
use crate::fock::{
    apply_annihilation_left, apply_creation, fock_moment, fock_moment_with_cap, project_right,
    t_alpha, FockAlphabet, FockVector, Overflow,
};
use crate::incidence::{
    convolve, eval_multiplicative, mobius_bnc, EvalContext, IncidenceFunction, MultiplicativeNet,
};
use crate::partition::{
    enumerate_nc, enumerate_set_partitions, is_non_crossing, kreweras_nc, refines, Partition,
};
use crate::ratio::{bell, catalan, q0, q1, qr, Q};
use crate::{Error, Result};

/// Outcome of one verification case.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CaseResult {
    fn pass(name: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            pass: true,
            detail: String::new(),
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    fn check(name: impl Into<String>, outcome: Result<std::result::Result<(), String>>) -> Self {
        match outcome {
            Ok(Ok(())) => Self::pass(name),
            Ok(Err(detail)) => Self::fail(name, detail),
            Err(e) => Self::fail(name, format!("error: {e}")),
        }
    }
}

/// A suite: a name plus its case results.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CaseResult> {
        self.cases.iter().find(|c| !c.pass)
    }
}

/// Per-suite budget: the ground-set ceiling and the number of random trials.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Budget {
    pub fn new(max_n: usize) -> Self {
        Budget {
            max_n,
            trials: 10,
            seed: 0xb1f2,
        }
    }
}

/// Names of all suites, in `run_suite` order.
pub const SUITES: &[&str] = &[
    "partition-core",
    "bnc-census",
    "lr-census",
    "mobius",
    "incidence",
    "coefficient-equality",
    "goldens",
    "transform-roundtrip",
    "bifreeness",
    "cumulant-property",
    "multconv",
    "fock-model",
    "free-reduction",
];

/// Runs one suite (or all of them) under the given budget.
pub fn run_suite(name: &str, budget: Budget) -> Result<Vec<SuiteReport>> {
    let run_one = |suite: &str| -> Result<SuiteReport> {
        match suite {
            "partition-core" => suite_partition_core(budget),
            "bnc-census" => suite_bnc_census(budget),
            "lr-census" => suite_lr_census(budget),
            "mobius" => suite_mobius(budget),
            "incidence" => suite_incidence(budget),
            "coefficient-equality" => suite_coefficient_equality(budget),
            "goldens" => suite_goldens(),
            "transform-roundtrip" => suite_transform_roundtrip(budget),
            "bifreeness" => suite_bifreeness(budget),
            "cumulant-property" => suite_cumulant_property(budget),
            "multconv" => suite_multconv(budget),
            "fock-model" => suite_fock_model(budget),
            "free-reduction" => suite_free_reduction(budget),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    };
    if name == "all" {
        SUITES.iter().map(|s| run_one(s)).collect()
    } else {
        Ok(vec![run_one(name)?])
    }
}

fn ok() -> Result<std::result::Result<(), String>> {
    Ok(Ok(()))
}

fn bad(msg: String) -> Result<std::result::Result<(), String>> {
    Ok(Err(msg))
}

/// Counting and order properties of plain and non-crossing partitions.
pub fn suite_partition_core(budget: Budget) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let top = budget.max_n.min(8);
    for n in 1..=top {
        cases.push(CaseResult::check(
            format!("set-partition count n={n} is Bell"),
            (|| {
                let all = enumerate_set_partitions(n)?;
                if BigInt::from(all.len()) == bell(n) {
                    ok()
                } else {
                    bad(format!("got {}", all.len()))
                }
            })(),
        ));
        cases.push(CaseResult::check(
            format!("non-crossing count n={n} is Catalan and matches the filter"),
            (|| {
                let ncs = enumerate_nc(n)?;
                if BigInt::from(ncs.len()) != catalan(n) {
                    return bad(format!("count {}", ncs.len()));
                }
                let mut filtered: Vec<Partition> = enumerate_set_partitions(n)?
                    .into_iter()
                    .filter(is_non_crossing)
                    .collect();
                filtered.sort();
                if ncs == filtered {
                    ok()
                } else {
                    bad("filter disagrees".into())
                }
            })(),
        ));
    }
    for n in 1..=top.min(6) {
        cases.push(CaseResult::check(
            format!("refinement is a partial order n={n}"),
            (|| {
                let all = enumerate_set_partitions(n)?;
                for p in &all {
                    if !refines(p, p)? {
                        return bad(format!("not reflexive at {p}"));
                    }
                }
                for p in &all {
                    for q in &all {
                        if refines(p, q)? && refines(q, p)? && p != q {
                            return bad(format!("antisymmetry fails at {p}, {q}"));
                        }
                        if n <= 5 && refines(p, q)? {
                            for r in &all {
                                if refines(q, r)? && !refines(p, r)? {
                                    return bad(format!("transitivity fails at {p},{q},{r}"));
                                }
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    for n in 1..=top {
        cases.push(CaseResult::check(
            format!("Kreweras complement is an order-reversing bijection with rank identity n={n}"),
            (|| {
                let ncs = enumerate_nc(n)?;
                let mut images = BTreeSet::new();
                for p in &ncs {
                    let k = kreweras_nc(p)?;
                    if p.block_count() + k.block_count() != n + 1 {
                        return bad(format!("rank identity fails at {p}"));
                    }
                    images.insert(k);
                }
                if images.len() != ncs.len() {
                    return bad("not a bijection".into());
                }
                if n <= 6 {
                    for p in &ncs {
                        for q in &ncs {
                            if refines(p, q)? && !refines(&kreweras_nc(q)?, &kreweras_nc(p)?)? {
                                return bad(format!("not order-reversing at {p} <= {q}"));
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    Ok(SuiteReport {
        suite: "partition-core".into(),
        cases,
    })
}

/// Catalan census of the transported lattices and the order isomorphism.
pub fn suite_bnc_census(budget: Budget) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let exhaustive_top = budget.max_n.min(5);
    for n in 1..=exhaustive_top {
        cases.push(CaseResult::check(
            format!("bi-non-crossing census n={n} (exhaustive over patterns)"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    if BigInt::from(bnc.len()) != catalan(n) {
                        return bad(format!("count {} over {c}", bnc.len()));
                    }
                }
                ok()
            })(),
        ));
    }
    if budget.max_n >= 6 {
        let mut rng = StdRng::seed_from_u64(budget.seed);
        for n in 6..=budget.max_n.min(8) {
            let patterns = SidePattern::all_of_len(n)?;
            let sample: Vec<SidePattern> = (0..50)
                .map(|_| patterns[rng.gen_range(0..patterns.len())].clone())
                .collect();
            cases.push(CaseResult::check(
                format!("bi-non-crossing census n={n} (50 random patterns)"),
                (|| {
                    for c in &sample {
                        let bnc = enumerate_bnc(c)?;
                        if BigInt::from(bnc.len()) != catalan(n) {
                            return bad(format!("count {} over {c}", bnc.len()));
                        }
                    }
                    ok()
                })(),
            ));
        }
    }
    for n in 1..=budget.max_n.min(5) {
        cases.push(CaseResult::check(
            format!("transport is an order isomorphism n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    for p in &bnc {
                        for q in &bnc {
                            if bnc_refines(p, q)? != refines(&p.to_nc(), &q.to_nc())? {
                                return bad(format!("order mismatch at {p}, {q}"));
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    Ok(SuiteReport {
        suite: "bnc-census".into(),
        cases,
    })
}

/// Shaded-diagram recursion: counts, union identity, parent map, separators.
pub fn suite_lr_census(budget: Budget) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let top = budget.max_n.min(6);
    cases.push(CaseResult::check(
        "two-node diagram census (4, 1, 2, 1)",
        (|| {
            let c = SidePattern::parse("LR")?;
            let e = Shading::parse("AB")?;
            let d = enumerate_lr(&c, &e)?;
            let by_k = |k: usize| d.iter().filter(|x| x.open_chords() == k).count();
            if (d.len(), by_k(0), by_k(1), by_k(2)) == (4, 1, 2, 1) {
                ok()
            } else {
                bad(format!("census ({}, {}, {}, {})", d.len(), by_k(0), by_k(1), by_k(2)))
            }
        })(),
    ));
    cases.push(CaseResult::check(
        "three-node diagram census (8 diagrams; closed classes 0 and {1,2|3})",
        (|| {
            let c = SidePattern::parse("RLR")?;
            let e = Shading::parse("AAB")?;
            let d = enumerate_lr(&c, &e)?;
            if d.len() != 8 {
                return bad(format!("|LR| = {}", d.len()));
            }
            let parts: Vec<String> = shaded_bnc(&c, &e)?
                .iter()
                .map(|p| p.partition().to_string())
                .collect();
            if parts == ["1|2|3", "1,2|3"] {
                ok()
            } else {
                bad(format!("closed classes {parts:?}"))
            }
        })(),
    ));
    for n in 1..=top {
        cases.push(CaseResult::check(
            format!("diagram count is 2^n and open chords alternate, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    for e in Shading::all_of_len(n)? {
                        let diagrams = enumerate_lr(&c, &e)?;
                        if diagrams.len() != 1 << n {
                            return bad(format!("count {} over {c}/{e}", diagrams.len()));
                        }
                        for d in &diagrams {
                            let shades = d.open_shades();
                            if shades.windows(2).any(|w| w[0] == w[1]) {
                                return bad(format!("adjacent open shades equal over {c}/{e}"));
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    for n in 1..=top {
        cases.push(CaseResult::check(
            format!("union of shaded classes is the full lattice, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    let mut union = BTreeSet::new();
                    for e in Shading::all_of_len(n)? {
                        union.extend(shaded_bnc(&c, &e)?);
                    }
                    let bnc: BTreeSet<BncPartition> = enumerate_bnc(&c)?.into_iter().collect();
                    if union != bnc {
                        return bad(format!("union misses partitions over {c}"));
                    }
                }
                ok()
            })(),
        ));
    }
    for n in 2..=top.min(5) {
        cases.push(CaseResult::check(
            format!("erasing the top node is a 2-to-1 parent map, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    for e in Shading::all_of_len(n)? {
                        let children = enumerate_lr(&c, &e)?;
                        let chi0 = SidePattern::new(c.sides()[1..].to_vec())?;
                        let eps0 =
                            Shading::new((2..=n).map(|k| e.shade(k)).collect::<Vec<_>>())?;
                        let parents = enumerate_lr(&chi0, &eps0)?;
                        let mut counts = BTreeMap::new();
                        for d in &children {
                            let parent = d.erase_top()?;
                            if !parents.contains(&parent) {
                                return bad(format!("erased diagram invalid over {c}/{e}"));
                            }
                            *counts.entry(parent).or_insert(0usize) += 1;
                        }
                        if counts.len() != parents.len() || counts.values().any(|&x| x != 2) {
                            return bad(format!("parent map not 2-to-1 over {c}/{e}"));
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    for n in 1..=top.min(5) {
        cases.push(CaseResult::check(
            format!("same-shade piled blocks in shaded classes are separated, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    for e in Shading::all_of_len(n)? {
                        for p in shaded_bnc(&c, &e)? {
                            let blocks = p.partition().blocks();
                            for i in 0..blocks.len() {
                                for j in i + 1..blocks.len() {
                                    if e.shade(blocks[i][0]) != e.shade(blocks[j][0]) {
                                        continue;
                                    }
                                    let rel = classify_blocks(&p, &blocks[i], &blocks[j])?;
                                    if rel.piled && rel.separators.is_empty() {
                                        return bad(format!("unseparated pair in {p}"));
                                    }
                                }
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
        cases.push(CaseResult::check(
            format!("refinements within one shaded class are lateral, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    for e in Shading::all_of_len(n)? {
                        let shaded = shaded_bnc(&c, &e)?;
                        for q in &shaded {
                            for p in &shaded {
                                if bnc_refines(p, q)? && !is_lateral_refinement(p, q)? {
                                    return bad(format!("{p} <= {q} not lateral"));
                                }
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    for n in 1..=top.min(5) {
        cases.push(CaseResult::check(
            format!("Kreweras complement on the transported lattice, n={n}"),
            (|| {
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    let mut images = BTreeSet::new();
                    for p in &bnc {
                        let k = kreweras_bnc(p);
                        if p.block_count() + k.block_count() != n + 1 {
                            return bad(format!("rank identity fails at {p}"));
                        }
                        images.insert(k);
                    }
                    if images.len() != bnc.len() {
                        return bad(format!("not a bijection over {c}"));
                    }
                    for p in &bnc {
                        for q in &bnc {
                            if bnc_refines(p, q)?
                                && !bnc_refines(&kreweras_bnc(q), &kreweras_bnc(p))?
                            {
                                return bad(format!("not order-reversing at {p} <= {q}"));
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    Ok(SuiteReport {
        suite: "lr-census".into(),
        cases,
    })
}

/// Checks `mu * zeta = zeta * mu = delta` on every interval of every pattern
/// of length `n`, sharing one memoized context per pattern.
pub fn mobius_inverts_zeta_everywhere(n: usize) -> Result<std::result::Result<(), String>> {
    for c in SidePattern::all_of_len(n)? {
        let bnc = enumerate_bnc(&c)?;
        let mut ctx = EvalContext::new();
        for p in &bnc {
            for q in &bnc {
                if !bnc_refines(p, q)? {
                    continue;
                }
                let mut mz = q0();
                let mut zm = q0();
                for r in &bnc {
                    if bnc_refines(p, r)? && bnc_refines(r, q)? {
                        mz += mobius_bnc(&mut ctx, p, r)?;
                        zm += mobius_bnc(&mut ctx, r, q)?;
                    }
                }
                let expected = if p == q { q1() } else { q0() };
                if mz != expected || zm != expected {
                    return Ok(Err(format!(
                        "inversion fails on [{p}, {q}]: mu*zeta={mz}, zeta*mu={zm}"
                    )));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Möbius inversion identities and the transport identity.
pub fn suite_mobius(budget: Budget) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let top = budget.max_n.min(5);
    let per_n = par_map((1..=top).collect::<Vec<_>>(), |n| {
        CaseResult::check(
            format!("mu * zeta = zeta * mu = delta on every interval, n={n}"),
            mobius_inverts_zeta_everywhere(n),
        )
    });
    cases.extend(per_n);
    cases.push(CaseResult::check(
        "public convolution operator agrees on full intervals (n <= 4)",
        (|| {
            for n in 1..=top.min(4) {
                for c in SidePattern::all_of_len(n)? {
                    let zero = BncPartition::zero(&c);
                    let one = BncPartition::one(&c);
                    let mz =
                        convolve(&IncidenceFunction::Moebius, &IncidenceFunction::Zeta, &zero, &one)?;
                    let expected = if n == 1 { q1() } else { q0() };
                    if mz != expected {
                        return bad(format!("mu*zeta(0,1) = {mz} over {c}"));
                    }
                    let zz =
                        convolve(&IncidenceFunction::Zeta, &IncidenceFunction::Zeta, &zero, &one)?;
                    if zz != Q::from_integer(catalan(n)) {
                        return bad(format!("zeta*zeta(0,1) = {zz} over {c}"));
                    }
                }
            }
            ok()
        })(),
    ));
    for n in 1..=top {
        cases.push(CaseResult::check(
            format!("transport identity for the Möbius function, n={n}"),
            (|| {
                let mut ctx = EvalContext::new();
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    for p in &bnc {
                        for q in &bnc {
                            let direct = mobius_bnc(&mut ctx, p, q)?;
                            let transported = ctx.mobius_nc(&p.to_nc(), &q.to_nc())?;
                            if direct != transported {
                                return bad(format!("transport mismatch at [{p}, {q}]"));
                            }
                        }
                    }
                }
                ok()
            })(),
        ));
    }
    Ok(SuiteReport {
        suite: "mobius".into(),
        cases,
    })
}

fn random_net(rng: &mut StdRng, bound: usize) -> MultiplicativeNet {
    MultiplicativeNet::from_fn(bound, |_| qr(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)))
        .expect("bounded net")
}

/// Incidence-algebra structure: associativity, multiplicativity, the
/// Kreweras rewriting, and decomposition invariance.
pub fn suite_incidence(budget: Budget) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let top = budget.max_n.min(5);
    let mut rng = StdRng::seed_from_u64(budget.seed);
    cases.push(CaseResult::check(
        format!("convolution is associative on random nets (n <= {top})"),
        (|| {
            for n in 1..=top {
                let f = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
                let g = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
                let h = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
                let fg = IncidenceFunction::Convolution(Box::new(f.clone()), Box::new(g.clone()));
                let gh = IncidenceFunction::Convolution(Box::new(g), Box::new(h.clone()));
                let patterns = SidePattern::all_of_len(n)?;
                let c = &patterns[patterns.len() / 2];
                let bnc = enumerate_bnc(c)?;
                for p in &bnc {
                    for q in &bnc {
                        if bnc_refines(p, q)? && convolve(&fg, &h, p, q)? != convolve(&f, &gh, p, q)? {
                            return bad(format!("associativity fails at [{p}, {q}]"));
                        }
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        format!("convolution of multiplicative functions is multiplicative (n <= {top})"),
        (|| {
            for n in 2..=top {
                let fnet = random_net(&mut rng, n);
                let gnet = random_net(&mut rng, n);
                let f = IncidenceFunction::Multiplicative(fnet);
                let g = IncidenceFunction::Multiplicative(gnet);
                let induced = MultiplicativeNet::from_fn(n, |c| {
                    convolve(&f, &g, &BncPartition::zero(c), &BncPartition::one(c))
                        .expect("within caps")
                })?;
                let patterns = SidePattern::all_of_len(n)?;
                for c in [&patterns[0], &patterns[patterns.len() - 1]] {
                    let bnc = enumerate_bnc(c)?;
                    for p in &bnc {
                        for q in &bnc {
                            if bnc_refines(p, q)?
                                && convolve(&f, &g, p, q)? != eval_multiplicative(&induced, p, q)?
                            {
                                return bad(format!("not multiplicative at [{p}, {q}] over {c}"));
                            }
                        }
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        format!("Kreweras rewriting of full-interval convolutions (n <= {top})"),
        (|| {
            for n in 1..=top {
                let f = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
                let g = IncidenceFunction::Multiplicative(random_net(&mut rng, n));
                for c in SidePattern::all_of_len(n)? {
                    let zero = BncPartition::zero(&c);
                    let one = BncPartition::one(&c);
                    let fg = convolve(&f, &g, &zero, &one)?;
                    let mut ctx = EvalContext::new();
                    let mut sum = q0();
                    for pi in enumerate_bnc(&c)? {
                        let k = kreweras_bnc(&pi);
                        sum += f.eval(&mut ctx, &zero, &pi)? * g.eval(&mut ctx, &zero, &k)?;
                    }
                    if fg != sum {
                        return bad(format!("rewriting fails over {c}: {fg} vs {sum}"));
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        format!("Möbius net is multiplicative over the decomposition (n <= {top})"),
        (|| {
            let mut ctx = EvalContext::new();
            for n in 1..=top {
                let net = MultiplicativeNet::moebius(n)?;
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    for p in &bnc {
                        for q in &bnc {
                            if bnc_refines(p, q)?
                                && mobius_bnc(&mut ctx, p, q)? != eval_multiplicative(&net, p, q)?
                            {
                                return bad(format!("Möbius net mismatch at [{p}, {q}]"));
                            }
                        }
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        format!("moment and cumulant nets are Möbius transforms of each other (n <= {top})"),
        (|| {
            let mut local = StdRng::seed_from_u64(budget.seed.wrapping_add(7));
            let shape = TableShape::new(vec!["l".into()], vec!["r".into()], top)?;
            let d = Distribution::random(&mut local, shape);
            let table = moments_to_cumulants(&d)?;
            let word_of = |c: &SidePattern| -> Word {
                c.sides()
                    .iter()
                    .map(|s| match s {
                        Side::Left => "l".to_string(),
                        Side::Right => "r".to_string(),
                    })
                    .collect()
            };
            let moment_net =
                MultiplicativeNet::from_fn(top, |c| d.moment(&word_of(c)).unwrap())?;
            let cumulant_net =
                MultiplicativeNet::from_fn(top, |c| table.cumulant(&word_of(c)).unwrap())?;
            let m = IncidenceFunction::Multiplicative(moment_net.clone());
            let k = IncidenceFunction::Multiplicative(cumulant_net.clone());
            for n in 1..=top {
                for c in SidePattern::all_of_len(n)? {
                    let zero = BncPartition::zero(&c);
                    let one = BncPartition::one(&c);
                    if convolve(&m, &IncidenceFunction::Moebius, &zero, &one)?
                        != *cumulant_net.value(&c)?
                    {
                        return bad(format!("moment net * Möbius fails at {c}"));
                    }
                    if convolve(&k, &IncidenceFunction::Zeta, &zero, &one)?
                        != *moment_net.value(&c)?
                    {
                        return bad(format!("cumulant net * zeta fails at {c}"));
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        format!("evaluation is independent of block processing order (n <= {top})"),
        (|| {
            for n in 2..=top {
                let net = random_net(&mut rng, n);
                for c in SidePattern::all_of_len(n)? {
                    let bnc = enumerate_bnc(&c)?;
                    for p in &bnc {
                        for q in &bnc {
                            if !bnc_refines(p, q)? {
                                continue;
                            }
                            let forward = eval_multiplicative(&net, p, q)?;
                            let mut acc = q1();
                            for w in q.partition().blocks().iter().rev() {
                                let gamma = p.chi().restrict(w)?;
                                let tau = BncPartition::new(
                                    p.partition().restrict(w)?,
                                    gamma.clone(),
                                )?;
                                for u in kreweras_bnc(&tau).partition().blocks().iter().rev() {
                                    acc *= net.value(&gamma.restrict(u)?)?.clone();
                                }
                            }
                            if forward != acc {
                                return bad(format!("order dependence at [{p}, {q}]"));
                            }
                        }
                    }
                }
            }
            ok()
        })(),
    ));
    Ok(SuiteReport {
        suite: "incidence".into(),
        cases,
    })
}

/// Checks that the signed lateral count equals the Möbius interval sum for
/// every bounded partition over one pattern length.
pub fn coefficients_agree(n: usize) -> Result<std::result::Result<(), String>> {
    for c in SidePattern::all_of_len(n)? {
        let bnc = enumerate_bnc(&c)?;
        for e in Shading::all_of_len(n)? {
            for p in &bnc {
                if !e.bounds(p.partition())? {
                    continue;
                }
                let lat = lat_coefficient(p, &e)?;
                let moeb = mobius_coefficient(p, &e)?;
                if lat != moeb {
                    return Ok(Err(format!(
                        "coefficients differ at {p} under {e}: {lat} vs {moeb}"
                    )));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Both coefficient sums survive moving a bottom-left node to the right.
pub fn coefficients_bottom_move_invariant(n: usize) -> Result<std::result::Result<(), String>> {
    for c in SidePattern::all_of_len(n)? {
        if c.side(n) != Side::Left {
            continue;
        }
        let mut hat_sides = c.sides().to_vec();
        hat_sides[n - 1] = Side::Right;
        let hat = SidePattern::new(hat_sides)?;
        for e in Shading::all_of_len(n)? {
            for p in enumerate_bnc(&c)? {
                if !e.bounds(p.partition())? {
                    continue;
                }
                let moved = BncPartition::new(p.partition().clone(), hat.clone())?;
                if lat_coefficient(&p, &e)? != lat_coefficient(&moved, &e)? {
                    return Ok(Err(format!("lateral sum changes at {p}")));
                }
                if mobius_coefficient(&p, &e)? != mobius_coefficient(&moved, &e)? {
                    return Ok(Err(format!("Möbius sum changes at {p}")));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Both coefficient sums survive interchanging adjacent left/right nodes.
pub fn coefficients_adjacent_swap_invariant(n: usize) -> Result<std::result::Result<(), String>> {
    for c in SidePattern::all_of_len(n)? {
        for k in 1..n {
            if c.side(k) != Side::Left || c.side(k + 1) != Side::Right {
                continue;
            }
            let mut hat_sides = c.sides().to_vec();
            hat_sides.swap(k - 1, k);
            let hat = SidePattern::new(hat_sides)?;
            let swap_partition = |p: &Partition| -> Result<Partition> {
                let blocks = p
                    .blocks()
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|&x| {
                                if x == k {
                                    k + 1
                                } else if x == k + 1 {
                                    k
                                } else {
                                    x
                                }
                            })
                            .collect()
                    })
                    .collect();
                Partition::new(p.n(), blocks)
            };
            for e in Shading::all_of_len(n)? {
                let mut hat_marks: Vec<Shade> = (1..=n).map(|t| e.shade(t)).collect();
                hat_marks.swap(k - 1, k);
                let hat_e = Shading::new(hat_marks)?;
                for p in enumerate_bnc(&c)? {
                    if !e.bounds(p.partition())? {
                        continue;
                    }
                    let moved = BncPartition::new(swap_partition(p.partition())?, hat.clone())?;
                    if lat_coefficient(&p, &e)? != lat_coefficient(&moved, &hat_e)? {
                        return Ok(Err(format!("lateral sum changes at {p}, k={k}")));
                    }
                    if mobius_coefficient(&p, &e)? != mobius_coefficient(&moved, &hat_e)? {
                        return Ok(Err(format!("Möbius sum changes at {p}, k={k}")));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

/// The coefficient-formula identities.
pub fn suite_coefficient_equality(budget: Budget) -> Result<SuiteReport> {
    let top = budget.max_n.min(5);
    let mut jobs: Vec<(String, u8, usize)> = Vec::new();
    for n in 1..=top {
        jobs.push((format!("lateral equals Möbius coefficient, n={n}"), 0, n));
    }
    for n in 1..=top {
        jobs.push((format!("bottom-left-to-right move invariance, n={n}"), 1, n));
        jobs.push((format!("adjacent left/right swap invariance, n={n}"), 2, n));
    }
    let cases = par_map(jobs, |(name, kind, n)| {
        let outcome = match kind {
            0 => coefficients_agree(n),
            1 => coefficients_bottom_move_invariant(n),
            _ => coefficients_adjacent_swap_invariant(n),
        };
        CaseResult::check(name, outcome)
    });
    Ok(SuiteReport {
        suite: "coefficient-equality".into(),
        cases,
    })
}

/// Fixed answers: diagram censuses, the complement figure, the transport
/// permutation.
pub fn suite_goldens() -> Result<SuiteReport> {
    let mut cases = Vec::new();
    cases.push(CaseResult::check(
        "two-node census (|LR|, |LR0|, |LR1|, |LR2|) = (4, 1, 2, 1)",
        (|| {
            let d = enumerate_lr(&SidePattern::parse("LR")?, &Shading::parse("AB")?)?;
            let by_k = |k: usize| d.iter().filter(|x| x.open_chords() == k).count();
            if (d.len(), by_k(0), by_k(1), by_k(2)) == (4, 1, 2, 1) {
                ok()
            } else {
                bad("census mismatch".into())
            }
        })(),
    ));
    cases.push(CaseResult::check(
        "three-node census |LR| = 8 with closed classes {1|2|3} and {1,2|3}",
        (|| {
            let c = SidePattern::parse("RLR")?;
            let e = Shading::parse("AAB")?;
            if enumerate_lr(&c, &e)?.len() != 8 {
                return bad("diagram count".into());
            }
            let parts: Vec<String> = shaded_bnc(&c, &e)?
                .iter()
                .map(|p| p.partition().to_string())
                .collect();
            if parts == ["1|2|3", "1,2|3"] {
                ok()
            } else {
                bad(format!("classes {parts:?}"))
            }
        })(),
    ));
    cases.push(CaseResult::check(
        "complement of 1,3,5|2,4|6,8|7 over LLRLLLRR is 1,4|2|3|5,7,8|6",
        (|| {
            let p = BncPartition::new(
                Partition::parse(8, "1,3,5|2,4|6,8|7")?,
                SidePattern::parse("LLRLLLRR")?,
            )?;
            let k = kreweras_bnc(&p).partition().to_string();
            if k == "1,4|2|3|5,7,8|6" {
                ok()
            } else {
                bad(format!("got {k}"))
            }
        })(),
    ));
    cases.push(CaseResult::check(
        "transport permutation of LLRLR is [1, 2, 4, 5, 3]",
        (|| {
            let s = s_perm(&SidePattern::parse("LLRLR")?);
            if s.one_line() == [1, 2, 4, 5, 3] {
                ok()
            } else {
                bad(format!("got {:?}", s.one_line()))
            }
        })(),
    ));
    Ok(SuiteReport {
        suite: "goldens".into(),
        cases,
    })
}

fn varied_shape(idx: usize, degree: usize) -> TableShape {
    let shapes: [(&[&str], &[&str]); 4] = [
        (&["l"], &["r"]),
        (&["l", "m"], &["r"]),
        (&["l"], &["r", "s"]),
        (&["l", "m"], &["r", "s"]),
    ];
    let (left, right) = shapes[idx % 4];
    TableShape::new(
        left.iter().map(|s| s.to_string()).collect(),
        right.iter().map(|s| s.to_string()).collect(),
        degree,
    )
    .expect("valid shape")
}

/// Transform round trips on random distributions.
pub fn suite_transform_roundtrip(budget: Budget) -> Result<SuiteReport> {
    let trials: Vec<usize> = (0..budget.trials).collect();
    let seed = budget.seed;
    let cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(t as u64));
        let degree = 1 + t % budget.max_n.clamp(1, 5);
        let shape = varied_shape(t, degree);
        let d = Distribution::random(&mut rng, shape);
        CaseResult::check(
            format!("round trip trial {t} (degree {degree})"),
            (|| {
                let table = moments_to_cumulants(&d)?;
                let back = cumulants_to_moments(&table)?;
                if back == d {
                    ok()
                } else {
                    bad("cumulant/moment round trip differs".into())
                }
            })(),
        )
    });
    Ok(SuiteReport {
        suite: "transform-roundtrip".into(),
        cases,
    })
}

/// Joint-distribution equivalences: the coefficient formula against the
/// joint construction, and vanishing mixed cumulants.
pub fn suite_bifreeness(budget: Budget) -> Result<SuiteReport> {
    let degree = budget.max_n.clamp(1, 4);
    let trials: Vec<usize> = (0..budget.trials).collect();
    let seed = budget.seed;
    let cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(1000 + t as u64));
        let shape = TableShape::new(vec!["l".into()], vec!["r".into()], degree).unwrap();
        let d1 = Distribution::random(&mut rng, shape.clone());
        let d2 = Distribution::random(&mut rng, shape.clone());
        CaseResult::check(
            format!("joint equivalences trial {t}"),
            (|| {
                let joint = bifree_join(&d1, &d2)?;
                for word in all_words(&shape.alphabet(), degree) {
                    for eps in Shading::all_of_len(word.len())? {
                        let via_lat = mixed_moment_lat(&d1, &d2, &word, &eps)?;
                        let tagged: Word = word
                            .iter()
                            .enumerate()
                            .map(|(i, n)| tagged_name(n, eps.shade(i + 1)))
                            .collect();
                        if via_lat != joint.moment(&tagged)? {
                            return bad(format!(
                                "coefficient formula disagrees on {word:?} under {eps}"
                            ));
                        }
                    }
                }
                let tagging: BTreeMap<Name, Shade> = joint
                    .shape()
                    .alphabet()
                    .into_iter()
                    .map(|n| {
                        let (_, s) = split_tagged_name(&n).expect("tagged");
                        (n, s)
                    })
                    .collect();
                let report = check_combinatorial_bifreeness(&joint, &tagging, degree)?;
                match report.witness {
                    None => ok(),
                    Some((w, v)) => bad(format!("mixed cumulant {v} at {w:?}")),
                }
            })(),
        )
    });
    Ok(SuiteReport {
        suite: "bifreeness".into(),
        cases,
    })
}

/// Cumulant additivity and the universal polynomials.
pub fn suite_cumulant_property(budget: Budget) -> Result<SuiteReport> {
    let degree = budget.max_n.clamp(1, 4);
    let trials: Vec<usize> = (0..budget.trials).collect();
    let seed = budget.seed;
    let mut cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(2000 + t as u64));
        let shape = TableShape::new(vec!["l".into()], vec!["r".into()], degree).unwrap();
        let d1 = Distribution::random(&mut rng, shape.clone());
        let d2 = Distribution::random(&mut rng, shape.clone());
        CaseResult::check(
            format!("cumulant property trial {t}"),
            (|| {
                let joint = bifree_join(&d1, &d2)?;
                // Sum family moments: expand products over all shadings.
                let mut sum_moments = BTreeMap::new();
                for word in all_words(&shape.alphabet(), degree) {
                    let mut acc = q0();
                    for eps in Shading::all_of_len(word.len())? {
                        let tagged: Word = word
                            .iter()
                            .enumerate()
                            .map(|(i, n)| tagged_name(n, eps.shade(i + 1)))
                            .collect();
                        acc += joint.moment(&tagged)?;
                    }
                    sum_moments.insert(word, acc);
                }
                let sum_dist = Distribution::new(shape.clone(), sum_moments)?;
                let k_sum = moments_to_cumulants(&sum_dist)?;
                let k1 = moments_to_cumulants(&d1)?;
                let k2 = moments_to_cumulants(&d2)?;
                for (word, v) in k_sum.cumulants() {
                    let expected = k1.cumulant(word)? + k2.cumulant(word)?;
                    if v != &expected {
                        return bad(format!("additivity fails at {word:?}"));
                    }
                }
                // Cumulants through the unshaded polynomial.
                for word in all_words(&shape.alphabet(), degree) {
                    let c = shape.word_pattern(&word)?;
                    let r = universal_poly(PolyKind::R, &c, None)?;
                    if !r.is_homogeneous() {
                        return bad(format!("inhomogeneous polynomial over {c}"));
                    }
                    if eval_poly(&r, &d1, None, &word)? != k1.cumulant(&word)? {
                        return bad(format!("cumulant polynomial fails at {word:?}"));
                    }
                }
                // Sum moments through the all-shadings polynomial.
                for word in all_words(&shape.alphabet(), degree.min(3)) {
                    let c = shape.word_pattern(&word)?;
                    let qp = universal_poly(PolyKind::Q, &c, None)?;
                    if eval_poly(&qp, &d1, Some(&d2), &word)? != sum_dist.moment(&word)? {
                        return bad(format!("sum polynomial fails at {word:?}"));
                    }
                }
                ok()
            })(),
        )
    });
    cases.push(CaseResult::check(
        "constant shading collapses the shaded polynomial",
        (|| {
            for c in ["LR", "RLL", "LRLR"] {
                let c = SidePattern::parse(c)?;
                let n = c.len();
                for shade in [Shade::A, Shade::B] {
                    let p = universal_poly(PolyKind::P, &c, Some(&Shading::constant(n, shade)))?;
                    if p.terms.len() != 1 {
                        return bad(format!("{} terms over {c}", p.terms.len()));
                    }
                    let (m, coeff) = p.terms.iter().next().unwrap();
                    let full = (1..=n).collect::<Vec<_>>();
                    if coeff != &BigInt::from(1) || m.len() != 1 || m[0].subset != full {
                        return bad(format!("unexpected monomial over {c}"));
                    }
                }
            }
            ok()
        })(),
    ));
    Ok(SuiteReport {
        suite: "cumulant-property".into(),
        cases,
    })
}

/// The multiplicative-convolution formula against the direct route. The
/// order-swap clause reflects verified behavior: the two factor orders agree
/// through degree 2 and genuinely differ at degree 3.
pub fn suite_multconv(budget: Budget) -> Result<SuiteReport> {
    let degree = budget.max_n.clamp(1, 4);
    let trials: Vec<usize> = (0..budget.trials).collect();
    let seed = budget.seed;
    let mut cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(3000 + t as u64));
        let shape = TableShape::new(vec!["l".into()], vec!["r".into()], degree).unwrap();
        let d1 = Distribution::random(&mut rng, shape.clone());
        let d2 = Distribution::random(&mut rng, shape.clone());
        CaseResult::check(
            format!("convolution formula vs direct route, trial {t}"),
            (|| {
                let via_convolution = multconv_cumulants(&d1, &d2, degree)?;
                let product = product_distribution_direct(&d1, &d2, degree, false)?;
                let via_direct = moments_to_cumulants(&product)?;
                if via_convolution.cumulants() != via_direct.cumulants() {
                    return bad("formula disagrees with the direct route".into());
                }
                let swapped = multconv_cumulants(&d2, &d1, degree)?;
                let product_sw = product_distribution_direct(&d1, &d2, degree, true)?;
                let direct_sw = moments_to_cumulants(&product_sw)?;
                if swapped.cumulants() != direct_sw.cumulants() {
                    return bad("formula disagrees with the swapped direct route".into());
                }
                for (word, v) in via_convolution.cumulants() {
                    if word.len() <= 2 && v != &swapped.cumulants()[word] {
                        return bad(format!("orders disagree at degree <= 2: {word:?}"));
                    }
                }
                ok()
            })(),
        )
    });
    if degree >= 3 {
        cases.push(CaseResult::check(
            "factor orders genuinely differ at degree 3 on generic inputs",
            (|| {
                let mut rng = StdRng::seed_from_u64(seed.wrapping_add(99));
                let shape = TableShape::new(vec!["l".into()], vec!["r".into()], 3).unwrap();
                for _ in 0..5 {
                    let d1 = Distribution::random(&mut rng, shape.clone());
                    let d2 = Distribution::random(&mut rng, shape.clone());
                    let fwd = multconv_cumulants(&d1, &d2, 3)?;
                    let swp = multconv_cumulants(&d2, &d1, 3)?;
                    if fwd.cumulants() != swp.cumulants() {
                        return ok();
                    }
                }
                bad("no difference found; order swap unexpectedly symmetric".into())
            })(),
        ));
    }
    Ok(SuiteReport {
        suite: "multconv".into(),
        cases,
    })
}

/// Operator-model correctness and the closing operator identities.
pub fn suite_fock_model(budget: Budget) -> Result<SuiteReport> {
    let trials: Vec<usize> = (0..budget.trials).collect();
    let seed = budget.seed;
    let single_deg = budget.max_n.clamp(1, 5);
    let double_deg = budget.max_n.clamp(1, 4);
    let mut cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(4000 + t as u64));
        CaseResult::check(
            format!("model reproduces the distribution, trial {t}"),
            (|| {
                let shape =
                    TableShape::new(vec!["l".into()], vec!["r".into()], single_deg).unwrap();
                let dist = Distribution::random(&mut rng, shape);
                for word in all_words(&dist.shape().alphabet(), single_deg) {
                    if fock_moment(&dist, &word)? != dist.moment(&word)? {
                        return bad(format!("single-pair model fails at {word:?}"));
                    }
                }
                let shape2 = TableShape::new(
                    vec!["a".into(), "b".into()],
                    vec!["u".into(), "v".into()],
                    double_deg,
                )
                .unwrap();
                let dist2 = Distribution::random(&mut rng, shape2);
                for word in all_words(&dist2.shape().alphabet(), double_deg) {
                    if fock_moment(&dist2, &word)? != dist2.moment(&word)? {
                        return bad(format!("two-by-two model fails at {word:?}"));
                    }
                }
                ok()
            })(),
        )
    });
    cases.push(CaseResult::check(
        "vacuum expectations are cap-independent",
        (|| {
            let mut rng = StdRng::seed_from_u64(seed.wrapping_add(98));
            let shape = TableShape::new(vec!["l".into()], vec!["r".into()], 4).unwrap();
            let dist = Distribution::random(&mut rng, shape);
            for word in all_words(&dist.shape().alphabet(), 3) {
                let base = fock_moment_with_cap(&dist, &word, word.len())?;
                for extra in 1..=2 {
                    if fock_moment_with_cap(&dist, &word, word.len() + extra)? != base {
                        return bad(format!("cap dependence at {word:?}"));
                    }
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        "left-pair gluing equals the creation-word expansion (cap 5, words <= 3)",
        (|| {
            let a = FockAlphabet::new(&["i".into()], &["j".into()])?;
            let i = a.letter("i")?;
            let j = a.letter("j")?;
            let cap = 5usize;
            let mut etas: Vec<Vec<u8>> = vec![vec![]];
            for len in 1..=3 {
                let mut layer = Vec::new();
                for w in &etas {
                    if w.len() + 1 == len {
                        for l in [i, j] {
                            let mut v = w.clone();
                            v.push(l);
                            layer.push(v);
                        }
                    }
                }
                etas.extend(layer);
            }
            for eta in &etas {
                let v = FockVector::basis(cap, eta.clone())?;
                let lhs = t_alpha(&a, &[i, i], &v, Overflow::Prune)?;
                let mut rhs = FockVector::zero(cap);
                for m in 0..=cap - 2 {
                    // All-right prefixes of length m over the single right letter.
                    let alpha = vec![j; m];
                    let mut x = v.clone();
                    for &l in &alpha {
                        x = apply_annihilation_left(l, &x);
                    }
                    x = apply_creation(Side::Left, i, &x, Overflow::Prune)?;
                    for &l in alpha.iter().rev() {
                        x = apply_creation(Side::Left, l, &x, Overflow::Prune)?;
                    }
                    x = apply_creation(Side::Left, i, &x, Overflow::Prune)?;
                    rhs.add(&x);
                }
                if lhs != rhs {
                    return bad(format!("identity fails on {eta:?}"));
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        "mixed-pair gluing equals left-creation after right-creation on the projection",
        (|| {
            let a = FockAlphabet::new(&["i".into()], &["j".into()])?;
            let i = a.letter("i")?;
            let j = a.letter("j")?;
            let cap = 5usize;
            let mut etas: Vec<Vec<u8>> = vec![vec![]];
            for _ in 0..3 {
                let mut layer = Vec::new();
                for w in etas.clone() {
                    for l in [i, j] {
                        let mut v = w.clone();
                        v.push(l);
                        layer.push(v);
                    }
                }
                etas.extend(layer);
                etas.sort();
                etas.dedup();
            }
            for eta in etas.iter().filter(|e| e.len() <= 3) {
                let v = FockVector::basis(cap, eta.clone())?;
                let lhs = t_alpha(&a, &[j, i], &v, Overflow::Prune)?;
                let projected = project_right(&a, &v);
                let after_r = apply_creation(Side::Right, j, &projected, Overflow::Prune)?;
                let rhs = apply_creation(Side::Left, i, &after_r, Overflow::Prune)?;
                if lhs != rhs {
                    return bad(format!("identity fails on {eta:?}"));
                }
            }
            ok()
        })(),
    ));
    cases.push(CaseResult::check(
        "symbolic expansion counts Catalan-many completed skeletons (n <= 4)",
        (|| {
            let shape = TableShape::new(vec!["l".into()], vec!["r".into()], 4).unwrap();
            let alphabet = FockAlphabet::new(&shape.left, &shape.right)?;
            for word_s in ["l r", "r l r", "l l r r"] {
                let word = crate::cumulant::word_from_string(word_s);
                let n = word.len();
                let letters = alphabet.intern(&word)?;
                let mut per_position: Vec<Vec<Option<Vec<u8>>>> = Vec::new();
                for &l in &letters {
                    let mut opts: Vec<Option<Vec<u8>>> = vec![None];
                    opts.extend(alphabet.words_ending_with(l, n).into_iter().map(Some));
                    per_position.push(opts);
                }
                let mut nonzero = 0usize;
                let mut stack = vec![0usize; n];
                'assignment: loop {
                    let mut v = FockVector::vacuum(n);
                    for t in (0..n).rev() {
                        if let Some(alpha) = &per_position[t][stack[t]] {
                            v = t_alpha(&alphabet, alpha, &v, Overflow::Prune)?;
                        }
                        v = apply_annihilation_left(letters[t], &v);
                    }
                    let amp = v.vacuum_amplitude();
                    if !amp.is_zero() {
                        if amp != q1() {
                            return bad(format!("amplitude {amp} for one assignment"));
                        }
                        nonzero += 1;
                    }
                    for t in 0..n {
                        stack[t] += 1;
                        if stack[t] < per_position[t].len() {
                            continue 'assignment;
                        }
                        stack[t] = 0;
                    }
                    break;
                }
                if BigInt::from(nonzero) != catalan(n) {
                    return bad(format!("census {nonzero} for {word_s:?}"));
                }
            }
            ok()
        })(),
    ));
    Ok(SuiteReport {
        suite: "fock-model".into(),
        cases,
    })
}

/// All-left words against an independent classical free-cumulant oracle
/// built over plain non-crossing partitions only.
pub fn suite_free_reduction(budget: Budget) -> Result<SuiteReport> {
    let degree = budget.max_n.clamp(1, 6);
    let trials: Vec<usize> = (0..budget.trials.min(10)).collect();
    let seed = budget.seed;
    let cases = par_map(trials, move |t| {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_add(5000 + t as u64));
        CaseResult::check(
            format!("all-left free-cumulant reduction, trial {t}"),
            (|| {
                let shape =
                    TableShape::new(vec!["x".into(), "y".into()], vec![], degree).unwrap();
                let d = Distribution::random(&mut rng, shape.clone());
                let table = moments_to_cumulants(&d)?;
                let mut ctx = EvalContext::new();
                for word in all_words(&shape.alphabet(), degree) {
                    // Classical oracle over NC(n) alone.
                    let n = word.len();
                    let one = Partition::full(n);
                    let mut oracle = q0();
                    for sigma in enumerate_nc(n)? {
                        let mut phi = q1();
                        for block in sigma.blocks() {
                            let sub: Word =
                                block.iter().map(|&k| word[k - 1].clone()).collect();
                            phi *= d.moment(&sub)?;
                        }
                        oracle += phi * ctx.mobius_nc(&sigma, &one)?;
                    }
                    if oracle != table.cumulant(&word)? {
                        return bad(format!("oracle disagrees at {word:?}"));
                    }
                }
                ok()
            })(),
        )
    });
    Ok(SuiteReport {
        suite: "free-reduction".into(),
        cases,
    })
}
