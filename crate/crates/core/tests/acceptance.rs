//! Acceptance gate: ten end-to-end criteria.  Each test prints exactly one
//! `criterion N <name>: PASS|FAIL` line and panics on failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use ppdrec::classify::{allowed_e, classify_element};
use ppdrec::enumerate::{enumerate_group, exact_ppd_proportion, verify_singer_formula, EnumeratedGroup};
use ppdrec::field::{split_prime_power, Field};
use ppdrec::groups::{
    standard_generators, standard_group, Family, FormData, GroupCase, GroupInput, Level,
};
use ppdrec::matrix::{frobenius_block, MatrixQ};
use ppdrec::ppd::{
    factorize, factorize_u64, has_ppd, phi_cascade, phi_large_from_phi, phi_triple_q, ppd_list,
};
use ppdrec::recognize::{plan, proportion_bounds, recognize, SubgroupLevel, Verdict};
use ppdrec::sampler::sampler_init;

fn report(n: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {name}: {status} ({detail})");
    assert!(pass, "criterion {n} {name}: {status} ({detail})");
}

fn modpow(b: u64, k: u32, m: u128) -> u128 {
    let b = BigUint::from(b) % BigUint::from(m);
    let r = b.modpow(&BigUint::from(k), &BigUint::from(m));
    r.iter_u64_digits()
        .enumerate()
        .map(|(i, d)| (d as u128) << (64 * i))
        .sum()
}

/// Entrywise Frobenius of `GF(q0^a)^k` over the prime field, in the power
/// basis used by `blow_up`.
fn frobenius_on_blown(big: &Field, base: &Field, k: usize) -> MatrixQ {
    let fb = frobenius_block(big, base).unwrap();
    MatrixQ::block_diagonal(&vec![fb; k]).unwrap()
}

fn enumerate_fixture(family: Family, d: usize, q: u64, level: Level) -> EnumeratedGroup {
    let group = standard_group(family, d, q, level).unwrap();
    enumerate_group(&group.generators).unwrap()
}

#[test]
fn criterion_01_zsigmondy_conformance() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for b in 2u64..=16 {
        for e in 1u32..=24 {
            let closed = !((b == 2 && e == 6)
                || (e == 2 && (b + 1).is_power_of_two())
                || (e == 1 && b == 2));
            let brute = !ppd_list(b, e).unwrap().is_empty();
            let fast = has_ppd(b, e);
            if fast != brute || fast != closed {
                mismatches.push((b, e, fast, brute, closed));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(60);
    report(
        1,
        "zsigmondy conformance",
        pass,
        format!("15x24 grid, mismatches={:?}, {:.2?}", mismatches, elapsed),
    );
}

#[test]
fn criterion_02_phi_tables() {
    let mut bad = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 16, 25] {
        let (p, a) = split_prime_power(q).unwrap();
        for e in 1u32..=20 {
            let t = phi_triple_q(e, q).unwrap();

            let n: u128 = (BigUint::from(q).pow(e) - 1u32)
                .iter_u64_digits()
                .enumerate()
                .map(|(i, d)| (d as u128) << (64 * i))
                .sum();
            let mut phi = BigUint::one();
            let mut phi_l = BigUint::one();
            let mut phi_b = BigUint::one();
            for (&r, &v) in factorize(n).unwrap().iter() {
                let primitive = (1..e).all(|i| modpow(q, i, r) != 1);
                if !primitive {
                    continue;
                }
                let rv = BigUint::from(r).pow(v);
                phi *= &rv;
                if r >= 2 * e as u128 + 1 {
                    phi_l *= &rv;
                } else if r == e as u128 + 1 && v >= 2 {
                    phi_l *= BigUint::from(r).pow(v - 1);
                }
                if (1..a * e).all(|i| modpow(p, i, r) != 1) {
                    phi_b *= &rv;
                }
            }
            if t.phi != phi || t.phi_large != phi_l || t.phi_basic != phi_b {
                bad.push(format!("triple({e},{q})"));
            }
            if phi_cascade(q, e) != phi
                || phi_cascade(p, a * e) != phi_b
                || phi_large_from_phi(&phi, e) != phi_l
            {
                bad.push(format!("cascade({e},{q})"));
            }
        }
    }

    let pins = [
        (6, 2, phi_triple_q(6, 2).unwrap().phi == BigUint::one()),
        (3, 4, phi_triple_q(3, 4).unwrap().phi_basic == BigUint::one()),
        (2, 8, phi_triple_q(2, 8).unwrap().phi_basic == BigUint::one()),
        (4, 7, phi_triple_q(4, 7).unwrap().phi == BigUint::from(25u32)),
        (4, 7, phi_triple_q(4, 7).unwrap().phi_large == BigUint::from(5u32)),
        (4, 2, phi_triple_q(4, 2).unwrap().phi_large == BigUint::one()),
    ];
    for (e, q, ok) in pins {
        if !ok {
            bad.push(format!("pin({e},{q})"));
        }
    }
    report(2, "phi tables", bad.is_empty(), format!("10x20 grid, bad={bad:?}"));
}

#[test]
fn criterion_03_exact_proportions() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let cases: [(usize, u64, u32, Ratio<u64>); 4] = [
        (3, 2, 3, Ratio::new(2, 7)),
        (3, 2, 2, Ratio::new(1, 3)),
        (2, 4, 2, Ratio::new(2, 5)),
        (2, 5, 2, Ratio::new(1, 3)),
    ];
    let mut groups: BTreeMap<(usize, u64), EnumeratedGroup> = BTreeMap::new();
    for (d, q, e, want) in cases {
        let g = groups
            .entry((d, q))
            .or_insert_with(|| enumerate_fixture(Family::Linear, d, q, Level::Delta));
        let got = exact_ppd_proportion(g, e).unwrap();
        if got != want {
            bad.push(format!("GL({d},{q}) e={e}: {got} != {want}"));
        }
        let b = proportion_bounds(Family::Linear, d as u32, q, e, SubgroupLevel::Full).unwrap();
        if !(b.lower <= got && got < b.upper) {
            bad.push(format!("GL({d},{q}) e={e} outside [{}, {})", b.lower, b.upper));
        }
    }
    for (d, q) in [(3usize, 2u64), (2, 4), (2, 5)] {
        let g = &groups[&(d, q)];
        if !verify_singer_formula(g, d as u64).unwrap() {
            bad.push(format!("singer GL({d},{q})"));
        }
    }
    let elapsed = start.elapsed();
    let pass = bad.is_empty() && elapsed < Duration::from_secs(120);
    report(3, "exact proportions", pass, format!("bad={bad:?}, {:.2?}", elapsed));
}

fn bounds_fixtures() -> Vec<(Family, usize, u64, Level, SubgroupLevel)> {
    vec![
        (Family::Linear, 3, 2, Level::Delta, SubgroupLevel::Full),
        (Family::Linear, 4, 2, Level::Delta, SubgroupLevel::Full),
        (Family::Linear, 2, 4, Level::Delta, SubgroupLevel::Full),
        (Family::Linear, 2, 5, Level::Delta, SubgroupLevel::Full),
        (Family::Symplectic, 4, 3, Level::Omega, SubgroupLevel::Omega),
        (Family::Unitary, 3, 9, Level::Omega, SubgroupLevel::Omega),
        (Family::OrthogonalMinus, 4, 3, Level::Omega, SubgroupLevel::Omega),
    ]
}

#[test]
fn criterion_04_bounds_property() {
    let mut bad = Vec::new();
    let mut doubled_checked = false;
    for (family, d, q, level, sub) in bounds_fixtures() {
        let g = enumerate_fixture(family, d, q, level);
        for e in allowed_e(family, d as u32, q).unwrap() {
            let p = exact_ppd_proportion(&g, e).unwrap();
            let b = proportion_bounds(family, d as u32, q, e, sub).unwrap();
            doubled_checked |= b.doubled;
            if !(b.lower <= p && p < b.upper) {
                bad.push(format!(
                    "{} d={d} q={q} e={e}: {p} outside [{}, {})",
                    family.token(),
                    b.lower,
                    b.upper
                ));
            }
        }
    }
    if !doubled_checked {
        bad.push("no doubled O- interval exercised".into());
    }

    let mut window = Vec::new();
    for d in [4u32, 5, 6] {
        let mut sum = Ratio::new(0u64, 1);
        for e in allowed_e(Family::Linear, d, 2).unwrap() {
            let phi = phi_triple_q(e, 2).unwrap().phi;
            let phi: u64 = phi.iter_u64_digits().next().unwrap_or(1);
            sum += Ratio::new(phi - 1, e as u64 * phi);
        }
        let inside = Ratio::new(55u64, 100) <= sum && sum <= Ratio::new(78, 100);
        window.push(format!(
            "GL({d},2) sum={sum} ({:.4}) {}",
            *sum.numer() as f64 / *sum.denom() as f64,
            if inside { "in" } else { "OUTSIDE" }
        ));
        if !inside {
            bad.push(format!("log2 window GL({d},2): {sum}"));
        }
    }
    report(
        4,
        "bounds property",
        bad.is_empty(),
        format!("7 fixtures; {}; bad={bad:?}", window.join("; ")),
    );
}

#[test]
fn criterion_05_sampler_calibration() {
    let mut bad = Vec::new();
    for (family, d, q, level, _) in bounds_fixtures() {
        let group = standard_group(family, d, q, level).unwrap();
        let table = enumerate_group(&group.generators).unwrap();
        let degrees = allowed_e(family, d as u32, q).unwrap();
        let oracle: BTreeMap<u32, f64> = degrees
            .iter()
            .map(|&e| {
                let p = exact_ppd_proportion(&table, e).unwrap();
                (e, *p.numer() as f64 / *p.denom() as f64)
            })
            .collect();
        let n = 5000u32;
        let mut seeds_ok = 0;
        for seed in 0..20u64 {
            let mut sampler = sampler_init(&group.generators, seed).unwrap();
            let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
            for _ in 0..n {
                let g = sampler.next_element().unwrap();
                if let Some(w) = classify_element(&g).unwrap() {
                    *counts.entry(w.e).or_insert(0) += 1;
                }
            }
            let ok = oracle.iter().all(|(&e, &p)| {
                let freq = f64::from(counts.get(&e).copied().unwrap_or(0)) / f64::from(n);
                let sigma = (p * (1.0 - p) / f64::from(n)).sqrt();
                (freq - p).abs() <= 3.0 * sigma
            });
            if ok {
                seeds_ok += 1;
            }
        }
        if seeds_ok < 19 {
            bad.push(format!("{} d={d} q={q}: {seeds_ok}/20 seeds", family.token()));
        }
    }
    report(
        5,
        "sampler calibration",
        bad.is_empty(),
        format!("7 fixtures x 20 seeds x 5000 samples, bad={bad:?}"),
    );
}

#[test]
fn criterion_06_recognition_completeness() {
    let eps = Ratio::new(1u64, 10);
    let mut lines = Vec::new();
    let mut pass = true;
    for (family, d, q, label) in [
        (Family::Linear, 8usize, 2u64, "SL(8,2)"),
        (Family::Linear, 10, 3, "SL(10,3)"),
        (Family::Symplectic, 6, 3, "Sp(6,3)"),
        (Family::Unitary, 4, 4, "SU(4,4)"),
    ] {
        let group = standard_group(family, d, q, Level::Omega).unwrap();
        let mut hits = 0u32;
        let mut worst = Duration::ZERO;
        for seed in 0..100u64 {
            let t0 = Instant::now();
            let rep = recognize(&group, eps, seed).unwrap();
            worst = worst.max(t0.elapsed());
            if rep.verdict == Verdict::ContainsOmega {
                hits += 1;
            }
        }
        let ok = hits >= 90 && worst < Duration::from_secs(10);
        pass &= ok;
        lines.push(format!("{label} {hits}/100 worst={:.2?}", worst));
    }
    report(6, "recognition completeness", pass, lines.join("; "));
}

#[test]
fn criterion_07_recognition_soundness() {
    let f2 = Field::new(2, 1).unwrap();
    let f3 = Field::new(3, 1).unwrap();
    let f4 = Field::new(2, 2).unwrap();
    let f9 = Field::new(3, 2).unwrap();

    // GL(2,9).2 blown up into GL(4,3).
    let case29 = GroupCase::new(Family::Linear, 2, f9.clone()).unwrap();
    let mut c3_gens: Vec<MatrixQ> = standard_generators(&case29, Level::Delta)
        .unwrap()
        .iter()
        .map(|g| g.blow_up(&f3).unwrap())
        .collect();
    c3_gens.push(frobenius_on_blown(&f9, &f3, 2));
    let c3 = GroupInput::new(
        GroupCase::new(Family::Linear, 4, f3).unwrap(),
        FormData::None,
        c3_gens,
    )
    .unwrap();

    // The monomial group GL(1,2) wr S_5 = S_5 as permutation matrices.
    let perm = |img: [usize; 5]| {
        let mut m = MatrixQ::zero(&f2, 5);
        for (i, j) in img.into_iter().enumerate() {
            m.set(i, j, ppdrec::field::FieldElement::ONE);
        }
        m
    };
    let c2 = GroupInput::new(
        GroupCase::new(Family::Linear, 5, f2.clone()).unwrap(),
        FormData::None,
        vec![perm([1, 2, 3, 4, 0]), perm([1, 0, 2, 3, 4])],
    )
    .unwrap();

    // GL(4,2) with GF(4) scalars adjoined, inside GL(4,4).
    let case42 = GroupCase::new(Family::Linear, 4, f2.clone()).unwrap();
    let mut c5_gens: Vec<MatrixQ> = standard_generators(&case42, Level::Delta)
        .unwrap()
        .iter()
        .map(|g| {
            let mut lift = MatrixQ::zero(&f4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    lift.set(i, j, g.get(i, j));
                }
            }
            lift
        })
        .collect();
    c5_gens.push(MatrixQ::scalar(&f4, 4, f4.generator()));
    let c5 = GroupInput::new(
        GroupCase::new(Family::Linear, 4, f4).unwrap(),
        FormData::None,
        c5_gens,
    )
    .unwrap();

    // A visibly reducible block group: SL(2,2) acting on the first two
    // coordinates of GF(2)^4.
    let case22 = GroupCase::new(Family::Linear, 2, f2.clone()).unwrap();
    let red_gens: Vec<MatrixQ> = standard_generators(&case22, Level::Omega)
        .unwrap()
        .iter()
        .map(|g| MatrixQ::block_diagonal(&[g.clone(), MatrixQ::identity(&f2, 2)]).unwrap())
        .collect();
    let red = GroupInput::new(
        GroupCase::new(Family::Linear, 4, f2).unwrap(),
        FormData::None,
        red_gens,
    )
    .unwrap();

    let eps = Ratio::new(1u64, 10);
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, group) in [
        ("GL(2,9).2<GL(4,3)", &c3),
        ("S5<GL(5,2)", &c2),
        ("GL(4,2).scalars<GL(4,4)", &c5),
        ("SL(2,2)+I2<GL(4,2)", &red),
    ] {
        let mut hits = 0u32;
        for seed in 0..100u64 {
            let rep = recognize(group, eps, seed).unwrap();
            if rep.verdict == Verdict::ContainsOmega {
                hits += 1;
            }
        }
        pass &= hits == 0;
        lines.push(format!("{label} contains={hits}/100"));
    }
    report(7, "recognition soundness", pass, lines.join("; "));
}

#[test]
fn criterion_08_planner_sanity() {
    let mut bad = Vec::new();
    for d in [40u32, 100, 1000] {
        let p = plan(Family::Linear, d, 2, &Ratio::new(1, 10)).unwrap();
        if !(5..=10).contains(&p.n1) {
            bad.push(format!("n1(d={d})={}", p.n1));
        }
    }

    let eps_grid = [Ratio::new(1u64, 2), Ratio::new(1, 10), Ratio::new(1, 100)];
    let d_grid = [10u32, 100, 1000, 10000];
    let mut totals = [[0f64; 4]; 3];
    for (i, eps) in eps_grid.iter().enumerate() {
        for (j, &d) in d_grid.iter().enumerate() {
            totals[i][j] = plan(Family::Linear, d, 2, eps).unwrap().total_draws() as f64;
        }
    }
    for j in 0..4 {
        if !(totals[0][j] <= totals[1][j] && totals[1][j] <= totals[2][j]) {
            bad.push(format!("not monotone in epsilon at d={}", d_grid[j]));
        }
    }
    for i in 0..3 {
        let row = totals[i];
        let up = row.windows(2).all(|w| w[0] <= w[1]);
        let down = row.windows(2).all(|w| w[0] >= w[1]);
        if !up && !down {
            bad.push(format!("not monotone in d at epsilon={}", eps_grid[i]));
        }
    }

    // Least-squares fit T ~ alpha + beta*ln(1/eps) + gamma*ln(ln d).
    let mut ata = [[0f64; 3]; 3];
    let mut atb = [0f64; 3];
    for (i, eps) in eps_grid.iter().enumerate() {
        let x = (*eps.denom() as f64 / *eps.numer() as f64).ln();
        for (j, &d) in d_grid.iter().enumerate() {
            let y = f64::from(d).ln().ln();
            let row = [1.0, x, y];
            for r in 0..3 {
                for c in 0..3 {
                    ata[r][c] += row[r] * row[c];
                }
                atb[r] += row[r] * totals[i][j];
            }
        }
    }
    let coef = solve3(ata, atb);
    let mut worst_rel = 0f64;
    for (i, eps) in eps_grid.iter().enumerate() {
        let x = (*eps.denom() as f64 / *eps.numer() as f64).ln();
        for (j, &d) in d_grid.iter().enumerate() {
            let fitted = coef[0] + coef[1] * x + coef[2] * f64::from(d).ln().ln();
            let rel = (totals[i][j] - fitted).abs() / fitted;
            worst_rel = worst_rel.max(rel);
        }
    }
    if worst_rel > 0.20 {
        bad.push(format!("fit residual {:.1}% > 20%", worst_rel * 100.0));
    }
    report(
        8,
        "planner sanity",
        bad.is_empty(),
        format!(
            "totals={totals:?}, fit=({:.1}, {:.1}, {:.1}), worst residual {:.1}%, bad={bad:?}",
            coef[0],
            coef[1],
            coef[2],
            worst_rel * 100.0
        ),
    );
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0f64; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

#[test]
fn criterion_09_scale_smoke() {
    let group = standard_group(Family::Linear, 500, 2, Level::Omega).unwrap();
    let eps = Ratio::new(1u64, 50);
    let mut hits = 0u32;
    let mut worst = Duration::ZERO;
    for seed in 0..10u64 {
        let t0 = Instant::now();
        let rep = recognize(&group, eps, seed).unwrap();
        worst = worst.max(t0.elapsed());
        if rep.verdict == Verdict::ContainsOmega {
            hits += 1;
        }
    }
    let runs_ok = hits >= 9 && worst < Duration::from_secs(300);

    let small = standard_group(Family::Linear, 200, 2, Level::Omega).unwrap();
    let mut sampler = sampler_init(&small.generators, 1).unwrap();
    let mut worst_classify = Duration::ZERO;
    let mut witnesses = 0u32;
    for _ in 0..5 {
        let g = sampler.next_element().unwrap();
        let t0 = Instant::now();
        if classify_element(&g).unwrap().is_some() {
            witnesses += 1;
        }
        worst_classify = worst_classify.max(t0.elapsed());
    }
    let classify_ok = worst_classify < Duration::from_secs(2) && witnesses >= 1;
    report(
        9,
        "scale smoke",
        runs_ok && classify_ok,
        format!(
            "SL(500,2) eps=1/50: {hits}/10, worst run {:.2?}; classify d=200 worst {:.2?}, witnesses {witnesses}/5",
            worst, worst_classify
        ),
    );
}

fn element_order(g: &MatrixQ, exponent: u64, factors: &BTreeMap<u64, u32>) -> u64 {
    let id = MatrixQ::identity(g.field(), g.dim());
    assert_eq!(g.pow(exponent).unwrap(), id, "exponent must annihilate");
    let mut o = exponent;
    for (&r, _) in factors {
        while o % r == 0 && g.pow(o / r).unwrap() == id {
            o /= r;
        }
    }
    o
}

/// Order-based flags straight from the definitions: scan the primitive
/// prime divisors of `q^e - 1` and test divisibility of the element order.
fn oracle_flags(o: u64, q: u64, p: u64, a: u32, e: u32) -> (bool, bool, bool) {
    let set = ppd_list(q, e).unwrap();
    let mut is_ppd = false;
    let mut large = false;
    for (&r, &v) in &set.primes {
        let r64 = r as u64;
        if o % r64 != 0 {
            continue;
        }
        is_ppd = true;
        if r >= 2 * e as u128 + 1 {
            large = true;
        } else if r == e as u128 + 1 && v >= 2 && o % (r64 * r64) == 0 {
            large = true;
        }
    }
    let basic = ppd_list(p, a * e)
        .unwrap()
        .primes
        .keys()
        .any(|&s| o % s as u64 == 0);
    (is_ppd, large, is_ppd && basic)
}

fn check_against_oracle(
    g: &MatrixQ,
    d: u32,
    q: u64,
    exponent: u64,
    factors: &BTreeMap<u64, u32>,
    bad: &mut Vec<String>,
) {
    let (p, a) = split_prime_power(q).unwrap();
    let o = element_order(g, exponent, factors);
    let mut expect: Option<(u32, bool, bool)> = None;
    for e in allowed_e(Family::Linear, d, q).unwrap() {
        let (is_ppd, large, basic) = oracle_flags(o, q, p, a, e);
        if is_ppd {
            assert!(expect.is_none(), "two ppd degrees for one element");
            expect = Some((e, large, basic));
        }
    }
    let got = classify_element(g).unwrap().map(|w| (w.e, w.is_large, w.is_basic));
    if got != expect {
        bad.push(format!("d={d} q={q} order={o}: classify {got:?} != oracle {expect:?}"));
    }
}

#[test]
fn criterion_10_classification_oracle_equivalence() {
    let mut bad = Vec::new();
    let mut counts = Vec::new();

    for (d, q) in [(3usize, 2u64), (2, 4)] {
        let table = enumerate_fixture(Family::Linear, d, q, Level::Delta);
        let exponent = table.order();
        let factors = factorize_u64(exponent);
        let mut n = 0u32;
        for g in table.iter() {
            check_against_oracle(&g, d as u32, q, exponent, &factors, &mut bad);
            n += 1;
        }
        counts.push(format!("GL({d},{q}) all {n}"));
    }

    let gl43 = standard_group(Family::Linear, 4, 3, Level::Delta).unwrap();
    let exponent = 24_261_120u64;
    let factors = factorize_u64(exponent);
    let mut sampler = sampler_init(&gl43.generators, 11).unwrap();
    for _ in 0..2000 {
        let g = sampler.next_element().unwrap();
        check_against_oracle(&g, 4, 3, exponent, &factors, &mut bad);
    }
    counts.push("GL(4,3) sampled 2000".into());

    report(
        10,
        "classification oracle equivalence",
        bad.is_empty(),
        format!("{}; bad={bad:?}", counts.join("; ")),
    );
}
