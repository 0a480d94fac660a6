//! Three-stage Monte Carlo recognition: decide whether an irreducible matrix
//! group contains the classical subgroup Ω of its case.
//!
//! Stage 1 looks for ppd elements of two distinct degrees including a large
//! and a basic one, stage 2 eliminates extension-field embeddings prime by
//! prime, and stage 3 asks for a third distinct degree.  Budgets are chosen
//! by [`plan`] so that a true Ω-containing group fails each stage with
//! probability below `ε/3`.  Every sampler draw is recorded in a transcript
//! whose byte content is a function of the input, `ε` and the seed alone.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::One;

use crate::classify::{allowed_e, classify_element};
use crate::field::split_prime_power;
use crate::groups::{Family, GroupInput};
use crate::meataxe::{centralizer_dim, is_irreducible, IrreducibilityStatus};
use crate::ppd::{factorize_u64, mu_distinct_primes, order_is_exactly, phi_cascade, phi_large_from_phi};
use crate::sampler::{sampler_init, SAMPLER_NAME};
use crate::{Error, Result};

/// Which subgroup of the similitude tower the proportion bounds refer to.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SubgroupLevel {
    Omega,
    So,
    Full,
    Similitude,
}

impl SubgroupLevel {
    pub fn token(self) -> &'static str {
        match self {
            SubgroupLevel::Omega => "omega",
            SubgroupLevel::So => "so",
            SubgroupLevel::Full => "full",
            SubgroupLevel::Similitude => "similitude",
        }
    }

    pub fn from_token(s: &str) -> Option<SubgroupLevel> {
        Some(match s {
            "omega" => SubgroupLevel::Omega,
            "so" => SubgroupLevel::So,
            "full" => SubgroupLevel::Full,
            "similitude" => SubgroupLevel::Similitude,
            _ => return None,
        })
    }
}

/// Interval `[lower, upper)` containing the exact ppd proportion for `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProportionBounds {
    pub e: u32,
    pub lower: Ratio<u64>,
    pub upper: Ratio<u64>,
    /// O⁻ at the full degree `e = d` below the full orthogonal group carries
    /// twice the generic proportion.
    pub doubled: bool,
}

/// The interval `[1/(e+1), 1/e)`, doubled to `[2/(e+1), 2/e)` for the Ω⁻ and
/// SO⁻ cases at `e = d`.
pub fn proportion_bounds(
    family: Family,
    d: u32,
    q: u64,
    e: u32,
    level: SubgroupLevel,
) -> Result<ProportionBounds> {
    let allowed = allowed_e(family, d, q)?;
    if !allowed.contains(&e) {
        return Err(Error::ENotAllowed { e, allowed });
    }
    let doubled = family == Family::OrthogonalMinus
        && e == d
        && matches!(level, SubgroupLevel::Omega | SubgroupLevel::So);
    let num = if doubled { 2 } else { 1 };
    Ok(ProportionBounds {
        e,
        lower: Ratio::new(num, (e + 1) as u64),
        upper: Ratio::new(num, e as u64),
        doubled,
    })
}

/// Sampling budget for one prime divisor of `d` in stage 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBudget {
    pub b: u64,
    pub draws: u64,
    /// Witness degree that cannot eliminate `b` (the `b = d`, `e = d-1` case
    /// when `d` itself is a ppd of `q^(d-1) - 1`).
    pub exceptional_e: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct RecognitionPlan {
    pub family: Family,
    pub d: u32,
    pub q: u64,
    pub epsilon: Ratio<u64>,
    pub allowed: Vec<u32>,
    /// Allowed degrees whose large part `Φ_l` is nontrivial.
    pub large_e: Vec<u32>,
    /// Allowed degrees whose basic part `Φ_b` is nontrivial.
    pub basic_e: Vec<u32>,
    pub n1: u64,
    pub stage2: Vec<PrimeBudget>,
    pub n3: u64,
}

impl RecognitionPlan {
    pub fn total_draws(&self) -> u64 {
        self.n1 + self.stage2.iter().map(|p| p.draws).sum::<u64>() + self.n3
    }
}

fn epsilon_f64(epsilon: &Ratio<u64>) -> Result<f64> {
    if *epsilon.numer() == 0 || epsilon >= &Ratio::one() {
        return Err(Error::BadEpsilon);
    }
    Ok(*epsilon.numer() as f64 / *epsilon.denom() as f64)
}

/// Compute per-stage sampling budgets for the case `(family, d, q)` at error
/// tolerance `ε`.
///
/// The per-degree hitting rate is lower-bounded by `p_e = 1/(e+1)`.  Stage 1
/// draws until the probability that a true Ω-group shows fewer than two
/// distinct degrees, or no large degree, or no basic degree, is below `ε/3`.
/// Stage 2 gets `⌈ln(ε/(3·μ(d))) / ln(1 - c_b)⌉` draws per prime `b | d`,
/// where `c_b` sums the rates of degrees not divisible by `b` (minus the
/// exceptional degree), and `μ(d)` counts the distinct primes of `d`.
/// Stage 3 uses the same bound with the two largest rates removed.
pub fn plan(family: Family, d: u32, q: u64, epsilon: &Ratio<u64>) -> Result<RecognitionPlan> {
    let eps = epsilon_f64(epsilon)?;
    let allowed = allowed_e(family, d, q)?;
    if allowed.len() < 3 {
        return Err(Error::UnsupportedDimension(format!(
            "need at least 3 allowed degrees, case has {} ({:?})",
            allowed.len(),
            allowed
        )));
    }
    let (p, a) = split_prime_power(q)
        .ok_or_else(|| Error::Inconsistent(format!("{q} is not a prime power")))?;
    let mut large_e = Vec::new();
    let mut basic_e = Vec::new();
    for &e in &allowed {
        let phi = phi_cascade(q, e);
        if !phi_large_from_phi(&phi, e).is_one() {
            large_e.push(e);
        }
        let phi_basic = if a == 1 { phi } else { phi_cascade(p, a * e) };
        if !phi_basic.is_one() {
            basic_e.push(e);
        }
    }
    if large_e.is_empty() {
        return Err(Error::UnsupportedDimension(
            "no allowed degree has a nontrivial large part".into(),
        ));
    }
    if basic_e.is_empty() {
        return Err(Error::UnsupportedDimension(
            "no allowed degree has a nontrivial basic part".into(),
        ));
    }

    let rate = |e: u32| 1.0 / (e as f64 + 1.0);
    let s: f64 = allowed.iter().map(|&e| rate(e)).sum();
    let s_l: f64 = large_e.iter().map(|&e| rate(e)).sum();
    let s_b: f64 = basic_e.iter().map(|&e| rate(e)).sum();

    let target1 = eps / 3.0;
    let mut n1 = 0u64;
    loop {
        n1 += 1;
        if n1 > 1_000_000 {
            return Err(Error::Inconsistent("stage 1 budget did not converge".into()));
        }
        let n = n1 as i32;
        let p_no_large = (1.0 - s_l).powi(n);
        let p_no_basic = (1.0 - s_b).powi(n);
        let p_less2: f64 = allowed
            .iter()
            .map(|&e| (1.0 - s + rate(e)).powi(n))
            .sum::<f64>()
            - (allowed.len() as f64 - 1.0) * (1.0 - s).powi(n);
        if p_no_large + p_no_basic + p_less2 < target1 {
            break;
        }
    }

    let mu = mu_distinct_primes(d as u64) as f64;
    let mut stage2 = Vec::new();
    for &b in factorize_u64(d as u64).keys() {
        let exceptional_e = if b == d as u64
            && allowed.contains(&(d - 1))
            && order_is_exactly(q as u128, d as u128, d - 1)
        {
            Some(d - 1)
        } else {
            None
        };
        let c_b: f64 = allowed
            .iter()
            .filter(|&&e| e % (b as u32) != 0 && Some(e) != exceptional_e)
            .map(|&e| rate(e))
            .sum();
        let draws = if c_b > 0.0 {
            ((eps / (3.0 * mu)).ln() / (1.0 - c_b).ln()).ceil() as u64
        } else {
            0
        };
        stage2.push(PrimeBudget { b, draws, exceptional_e });
    }

    let mut rates: Vec<f64> = allowed.iter().map(|&e| rate(e)).collect();
    rates.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let c3: f64 = rates[2..].iter().sum();
    let n3 = ((eps / 3.0).ln() / (1.0 - c3).ln()).ceil() as u64;

    Ok(RecognitionPlan {
        family,
        d,
        q,
        epsilon: *epsilon,
        allowed,
        large_e,
        basic_e,
        n1,
        stage2,
        n3,
    })
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    ContainsOmega,
    LikelyNotOmega,
    PreconditionFailed,
    UnsupportedDimension,
}

impl Verdict {
    pub fn token(self) -> &'static str {
        match self {
            Verdict::ContainsOmega => "CONTAINS_OMEGA",
            Verdict::LikelyNotOmega => "LIKELY_NOT_OMEGA",
            Verdict::PreconditionFailed => "PRECONDITION_FAILED",
            Verdict::UnsupportedDimension => "UNSUPPORTED_DIMENSION",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecognitionReport {
    pub verdict: Verdict,
    pub detail: String,
    /// One line per event; replaying the same input, ε and seed reproduces
    /// these bytes exactly.
    pub transcript: Vec<String>,
    pub plan: Option<RecognitionPlan>,
    /// Sorted distinct witnessed degrees across all stages.
    pub distinct_e: Vec<u32>,
    pub draws: u64,
}

impl RecognitionReport {
    pub fn transcript_text(&self) -> String {
        let mut s = self.transcript.join("\n");
        s.push('\n');
        s
    }
}

struct Pool {
    distinct: BTreeSet<u32>,
    large_draws: u64,
    basic_draws: u64,
}

/// Run the full pipeline: validation, irreducibility, planning, stages 1-3.
pub fn recognize(group: &GroupInput, epsilon: Ratio<u64>, seed: u64) -> Result<RecognitionReport> {
    epsilon_f64(&epsilon)?;
    let mut transcript: Vec<String> = Vec::new();
    let verdict_line = |t: &mut Vec<String>, v: Verdict| {
        t.push(format!(
            "verdict {} epsilon={}/{} seed={}",
            v.token(),
            epsilon.numer(),
            epsilon.denom(),
            seed
        ));
    };
    let finish = |mut transcript: Vec<String>,
                  v: Verdict,
                  detail: String,
                  plan: Option<RecognitionPlan>,
                  pool: &Pool,
                  draws: u64| {
        verdict_line(&mut transcript, v);
        Ok(RecognitionReport {
            verdict: v,
            detail,
            transcript,
            plan,
            distinct_e: pool.distinct.iter().copied().collect(),
            draws,
        })
    };
    let mut pool = Pool { distinct: BTreeSet::new(), large_draws: 0, basic_draws: 0 };

    if let Err(err) = group.validate() {
        transcript.push(format!("precondition invalid {err}"));
        return finish(transcript, Verdict::PreconditionFailed, err.to_string(), None, &pool, 0);
    }
    let family = group.case.family;
    let d = group.case.d as u32;
    let q = group.case.field.q();

    let irr = is_irreducible(&group.generators, 20, seed)?;
    match irr.status {
        IrreducibilityStatus::Reducible => {
            let dim = irr.witness.as_ref().map_or(0, |w| w.len());
            transcript.push(format!("precondition reducible dim={dim}"));
            return finish(
                transcript,
                Verdict::PreconditionFailed,
                format!("natural module has an invariant subspace of dimension {dim}"),
                None,
                &pool,
                0,
            );
        }
        IrreducibilityStatus::Inconclusive => {
            transcript.push(format!("precondition inconclusive attempts={}", irr.attempts));
            return finish(
                transcript,
                Verdict::PreconditionFailed,
                "irreducibility test inconclusive".into(),
                None,
                &pool,
                0,
            );
        }
        IrreducibilityStatus::Irreducible => {
            transcript.push(format!("precondition irreducible attempts={}", irr.attempts));
        }
    }

    let plan = match plan(family, d, q, &epsilon) {
        Ok(p) => p,
        Err(Error::UnsupportedDimension(msg)) => {
            transcript.push(format!("unsupported {msg}"));
            return finish(transcript, Verdict::UnsupportedDimension, msg, None, &pool, 0);
        }
        Err(e) => return Err(e),
    };
    let budgets: Vec<String> = plan
        .stage2
        .iter()
        .map(|pb| format!("{}:{}", pb.b, pb.draws))
        .collect();
    let allowed_str: Vec<String> = plan.allowed.iter().map(|e| e.to_string()).collect();
    transcript.push(format!(
        "plan d={} q={} case={} epsilon={}/{} allowed={} n1={} n2={} n3={}",
        d,
        q,
        family.token(),
        epsilon.numer(),
        epsilon.denom(),
        allowed_str.join(","),
        plan.n1,
        budgets.join(","),
        plan.n3
    ));

    let mut sampler = sampler_init(&group.generators, seed)?;
    transcript.push(format!(
        "sampler {SAMPLER_NAME} seed={} m={} burn_in={}",
        seed, sampler.m, sampler.burn_in
    ));

    let mut draws = 0u64;
    let draw_one = |transcript: &mut Vec<String>,
                        pool: &mut Pool,
                        sampler: &mut crate::sampler::SamplerState,
                        draws: &mut u64|
     -> Result<Option<(u32, bool, bool)>> {
        let g = sampler.next_element()?;
        *draws += 1;
        let w = classify_element(&g)?;
        match &w {
            Some(w) => {
                transcript.push(format!(
                    "draw {} e={} large={} basic={}",
                    draws, w.e, w.is_large, w.is_basic
                ));
                pool.distinct.insert(w.e);
                if w.is_large {
                    pool.large_draws += 1;
                }
                if w.is_basic {
                    pool.basic_draws += 1;
                }
                Ok(Some((w.e, w.is_large, w.is_basic)))
            }
            None => {
                transcript.push(format!("draw {} e=none large=false basic=false", draws));
                Ok(None)
            }
        }
    };

    // Stage 1: two distinct degrees, at least one large, at least one basic.
    let mut used1 = 0u64;
    let stage1_done =
        |pool: &Pool| pool.distinct.len() >= 2 && pool.large_draws > 0 && pool.basic_draws > 0;
    while used1 < plan.n1 && !stage1_done(&pool) {
        draw_one(&mut transcript, &mut pool, &mut sampler, &mut draws)?;
        used1 += 1;
    }
    if stage1_done(&pool) {
        transcript.push(format!(
            "stage1 pass distinct={} large={} basic={} draws={}",
            pool.distinct.len(),
            pool.large_draws,
            pool.basic_draws,
            used1
        ));
    } else {
        transcript.push(format!(
            "stage1 fail distinct={} large={} basic={} draws={}",
            pool.distinct.len(),
            pool.large_draws,
            pool.basic_draws,
            used1
        ));
        return finish(
            transcript,
            Verdict::LikelyNotOmega,
            "stage 1 found no two-degree large/basic evidence".into(),
            Some(plan),
            &pool,
            draws,
        );
    }

    // Stage 2: eliminate each prime divisor of d.
    for pb in &plan.stage2 {
        let eliminates =
            |e: u32| e % (pb.b as u32) != 0 && Some(e) != pb.exceptional_e;
        let mut found = pool.distinct.iter().copied().find(|&e| eliminates(e));
        if found.is_none() {
            for _ in 0..pb.draws {
                if let Some((e, _, _)) = draw_one(&mut transcript, &mut pool, &mut sampler, &mut draws)? {
                    if eliminates(e) {
                        found = Some(e);
                        break;
                    }
                }
            }
        }
        if let Some(e) = found {
            transcript.push(format!("stage2 prime {} eliminated e={}", pb.b, e));
            continue;
        }
        if pb.b == 2 && family != Family::Linear && family != Family::Unitary {
            // Symplectic/orthogonal cases can settle b = 2 on the derived
            // group: only scalars may centralize a set of its elements.
            let mut commutators = Vec::with_capacity(8);
            for _ in 0..8 {
                let x = sampler.next_element()?;
                let y = sampler.next_element()?;
                let c = x.inverse()?.mul(&y.inverse()?)?.mul(&x)?.mul(&y)?;
                commutators.push(c);
            }
            let dim = centralizer_dim(&commutators)?;
            if dim == 1 {
                transcript.push("stage2 prime 2 centralizer dim=1 eliminated".into());
                continue;
            }
            transcript.push(format!("stage2 prime 2 centralizer dim={dim} retained"));
        } else {
            transcript.push(format!("stage2 prime {} retained", pb.b));
        }
        transcript.push(format!("stage2 fail prime={}", pb.b));
        return finish(
            transcript,
            Verdict::LikelyNotOmega,
            format!("stage 2 could not eliminate the prime {}", pb.b),
            Some(plan),
            &pool,
            draws,
        );
    }
    transcript.push("stage2 pass".into());

    // Stage 3: a third distinct degree.
    let mut used3 = 0u64;
    while pool.distinct.len() < 3 && used3 < plan.n3 {
        draw_one(&mut transcript, &mut pool, &mut sampler, &mut draws)?;
        used3 += 1;
    }
    if pool.distinct.len() >= 3 {
        transcript.push(format!(
            "stage3 pass distinct={} draws={}",
            pool.distinct.len(),
            used3
        ));
    } else {
        transcript.push(format!(
            "stage3 fail distinct={} draws={}",
            pool.distinct.len(),
            used3
        ));
        return finish(
            transcript,
            Verdict::LikelyNotOmega,
            "stage 3 found no third degree".into(),
            Some(plan),
            &pool,
            draws,
        );
    }

    finish(
        transcript,
        Verdict::ContainsOmega,
        "all three stages passed".into(),
        Some(plan),
        &pool,
        draws,
    )
}
