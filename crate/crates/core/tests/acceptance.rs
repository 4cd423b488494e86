//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Every comparison is exact; the tolerance is zero throughout.

use std::time::{Duration, Instant};

use etaid::eta::{eisenstein_g2, eta_series, pentagonal_sum_series};
use etaid::macdonald::{macdonald_prefactor, verify_identity, Identity, VerificationReport};
use etaid::series::{int, qexp};
use etaid::virasoro::{
    character_chi_form, character_double_sum, character_lows, character_product_2k1,
    character_vector, models_up_to, mu_count, strange_closed_form_2k1,
    strange_closed_form_general, strange_sum_2k1, strange_sum_distinct, strange_sum_general,
};
use etaid::wronskian::{
    abel_log_derivative_check, determinant, entry_precision_for, scale_by_matrix, wronskian,
    wronskian_vandermonde_expand, SeriesVector,
};
use etaid::{QExponent, QSeries};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn q(e: i64) -> QExponent {
    QExponent::from_integer(e)
}

fn expect_match(r: &VerificationReport) -> Result<(), String> {
    if r.matched && r.constant.as_ref().is_some_and(|c| *c != int(0)) {
        Ok(())
    } else {
        Err(format!("mismatch: {r}"))
    }
}

fn verify(id: Identity, order: i64) -> Result<VerificationReport, String> {
    verify_identity(id, q(order)).map_err(|e| format!("{id}: {e}"))
}

fn euler() -> Outcome {
    let bound = q(200) + qexp(1, 24);
    let eta = eta_series(bound).map_err(|e| e.to_string())?;
    let pent = pentagonal_sum_series(bound).map_err(|e| e.to_string())?;
    if eta != pent {
        return Err(format!("first difference at {:?}", eta.first_difference(&pent, bound)));
    }
    let r = verify(Identity::Euler, 200)?;
    expect_match(&r)?;
    Ok(format!("{} terms equal below q^(4801/24)", r.terms_compared))
}

fn jacobi() -> Outcome {
    let r = verify(Identity::Jacobi, 100)?;
    expect_match(&r)?;
    if r.constant != Some(int(1)) {
        return Err(format!("constant {:?}", r.constant));
    }
    Ok(format!("{} terms equal below q^(2401/24)", r.terms_compared))
}

fn macdonald() -> Outcome {
    let mut found = Vec::new();
    for k in 2..=4 {
        let start = Instant::now();
        let a = verify(Identity::Macdonald { k }, 15)?;
        let b = verify(Identity::Macdonald { k }, 20)?;
        expect_match(&a)?;
        expect_match(&b)?;
        if a.constant != b.constant {
            return Err(format!("k={k}: constant moved from {:?} to {:?}", a.constant, b.constant));
        }
        if k == 4 && start.elapsed() > Duration::from_secs(60) {
            return Err(format!("k=4 took {:?}", start.elapsed()));
        }
        found.push(format!("k={k}: {}", a.constant.unwrap()));
    }
    Ok(format!("ratios {}", found.join(", ")))
}

fn denominators() -> Outcome {
    let models = models_up_to(40);
    for m in &models {
        let r = verify(Identity::Denominator { s: m.s(), t: m.t() }, 10)?;
        expect_match(&r)?;
    }
    Ok(format!("{} models with st <= 40", models.len()))
}

fn wronskians() -> Outcome {
    let models = models_up_to(40);
    for m in &models {
        let (s, t) = (m.s(), m.t());
        expect_match(&verify(Identity::WronskianRaw { s, t }, 10)?)?;
        expect_match(&verify(Identity::WronskianNormalized { s, t }, 10)?)?;
    }
    Ok(format!("{} models, raw and normalised", models.len()))
}

fn weber() -> Outcome {
    let r = verify(Identity::Weber, 20)?;
    expect_match(&r)?;
    let want = BigRational::new(7.into(), 256.into());
    if r.constant.as_ref() != Some(&want) {
        return Err(format!("constant {:?}", r.constant));
    }
    Ok(format!("constant {}", want))
}

fn abel() -> Outcome {
    let mut checked = 0;
    for model in models_up_to(40).into_iter().filter(|m| m.k() <= 4) {
        let k = model.k() as i64;
        let factors = [
            (false, BigRational::from_integer((k * (k - 1)).into())),
            (true, BigRational::new((2 * k * (k - 1) + k).into(), 2.into())),
        ];
        for (normalized, factor) in factors {
            let lows = character_lows(&model, normalized).map_err(|e| e.to_string())?;
            let lead: QExponent = lows.iter().copied().sum();
            let bound = lead + q(15);
            let v = character_vector(&model, normalized, entry_precision_for(bound, &lows))
                .map_err(|e| e.to_string())?;
            let f1 = eisenstein_g2(q(16)).map_err(|e| e.to_string())?.scale(&factor);
            if !abel_log_derivative_check(&v, &f1, bound).map_err(|e| e.to_string())? {
                return Err(format!("{model} normalized={normalized}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} fundamental systems"))
}

fn cross_forms() -> Outcome {
    let order = q(40);
    let mut labels = 0;
    for model in models_up_to(60) {
        for l in model.all_labels() {
            let err = |e: etaid::Error| format!("{model} ({}, {}): {e}", l.m(), l.n());
            let d = character_double_sum(&model, &l, order).map_err(err)?;
            let c = character_chi_form(&model, &l, order).map_err(err)?;
            if d != c {
                return Err(format!("{model} ({}, {}): double sum vs chi form", l.m(), l.n()));
            }
            if model.s() == 2 {
                // (1, n) and (1, t - n) label the same module
                let i = l.n().min(model.t() - l.n()) as usize;
                let p = character_product_2k1(model.k(), i, order).map_err(err)?;
                if d != p {
                    return Err(format!("{model} (1, {}): double sum vs product", l.n()));
                }
            }
            labels += 1;
        }
    }
    Ok(format!("{labels} labels below q^40"))
}

fn strange() -> Outcome {
    for k in 1..=12 {
        let got = strange_sum_2k1(k).map_err(|e| e.to_string())?;
        if got != strange_closed_form_2k1(k) {
            return Err(format!("k={k}: {got}"));
        }
    }
    let models = models_up_to(100);
    for m in &models {
        let closed = strange_closed_form_general(m.s(), m.t());
        let half_sum = strange_sum_general(m.s(), m.t()).map_err(|e| e.to_string())?;
        let distinct = strange_sum_distinct(m).map_err(|e| e.to_string())?;
        if half_sum != closed || distinct != closed || closed != strange_closed_form_2k1(m.k()) {
            return Err(format!("{m}: {half_sum} / {distinct} vs {closed}"));
        }
    }
    Ok(format!("k <= 12 and {} models with st <= 100", models.len()))
}

fn random_series(rng: &mut StdRng) -> QSeries {
    let base = qexp(rng.gen_range(-6..6), [1, 2, 3, 4, 24][rng.gen_range(0..5)]);
    let step = rng.gen_range(1..4);
    let precision = base + q(rng.gen_range(4..12));
    let n = rng.gen_range(1..=6);
    QSeries::from_terms_truncated(
        (0..n).map(|_| (base + qexp(rng.gen_range(0..24), step), int(rng.gen_range(-4..5)))),
        precision,
    )
}

fn mu_and_lemma() -> Outcome {
    let (count, sols) = mu_count(9);
    if count != 3 || sols != vec![(2, 19), (3, 10), (4, 7)] {
        return Err(format!("mu(9) = {count}, {sols:?}"));
    }
    let mut rng = StdRng::seed_from_u64(20_241_018);
    let instances = 128;
    for i in 0..instances {
        let v = SeriesVector::new((0..3).map(|_| random_series(&mut rng)).collect()).unwrap();
        let w = wronskian(&v);
        let o = wronskian_vandermonde_expand(&v);
        let p = w.precision().min(o.precision());
        if !w.equal_up_to(&o, p).unwrap() {
            return Err(format!("expansion oracle disagrees on instance {i}"));
        }
        let t: Vec<Vec<BigRational>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| BigRational::new(rng.gen_range(-3..4).into(), rng.gen_range(1..4).into()))
                    .collect()
            })
            .collect();
        let lhs = wronskian(&scale_by_matrix(&t, &v).unwrap());
        let rhs = w.scale(&determinant(&t));
        let p = lhs.precision().min(rhs.precision());
        if !lhs.equal_up_to(&rhs, p).unwrap() {
            return Err(format!("det scaling fails on instance {i}"));
        }
    }
    // the s = 2 prefactor relation ties the two lattice sums together
    for k in 2..=4i64 {
        let mac = verify(Identity::Macdonald { k }, 10)?;
        let gen = verify(Identity::Denominator { s: 2, t: 2 * k + 1 }, 10)?;
        if mac.constant.unwrap() != gen.constant.unwrap() * macdonald_prefactor(k).unwrap() {
            return Err(format!("specialisation constant mismatch at k={k}"));
        }
    }
    Ok(format!("mu(9) = 3 {sols:?}; {instances} random Wronskian instances"))
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 10] = [
        ("euler identity below q^(200+1/24)", Some(1), euler),
        ("jacobi identity below q^100", Some(2), jacobi),
        ("macdonald k = 2, 3, 4 at orders 15 and 20", Some(60), macdonald),
        ("denominator formula for st <= 40, order 10", Some(600), denominators),
        ("wronskians vs eta powers for st <= 40, order 10", None, wronskians),
        ("weber wronskian = 7/256 eta^12, order 20", Some(5), weber),
        ("abel first-coefficient checks for k <= 4, order 15", None, abel),
        ("three character forms agree for st <= 60 below q^40", None, cross_forms),
        ("strange formulas for k <= 12 and st <= 100", None, strange),
        ("mu(9) and randomized wronskian properties", None, mu_and_lemma),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(*secs) => {
                Err(format!("took {elapsed:.2?}, limit {secs}s"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
