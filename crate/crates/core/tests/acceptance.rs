//! Acceptance suite: one line per criterion, failing the process if any
//! criterion fails or exceeds its time limit.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use charmorph::analysis::{artin_symbol, hnp_check, local_norm_certificate, ramified_places, Projection};
use charmorph::arith::{next_prime, prime_divisors};
use charmorph::config::{construct, JobConfig};
use charmorph::field::{build_s, class_group, BaseField};
use charmorph::fixture::{replay, Fixture};
use charmorph::group::{wedge_square, AbelianGroupSpec};
use charmorph::linalg::{invert_mod, solve_mod, subgroup_index, Matrix};
use charmorph::morphism::CharMorphismData;
use charmorph::poly::{norm_form_eval, parse_rational, synthesize};
use charmorph::residue::{FiniteField, QuotientGenerator, Residue};
use charmorph::PrimePlace;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn example_one() -> Result<CharMorphismData, String> {
    let cfg = JobConfig::from_json(r#"{"field": "Q", "group": [2, 2], "alphas": ["37/16"]}"#)
        .map_err(err)?;
    construct(&cfg).map_err(err)
}

fn load_fixture(name: &str) -> Result<Fixture, String> {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    Fixture::from_json(&std::fs::read_to_string(path).map_err(err)?).map_err(err)
}

/// Squarefree part of a nonzero integer.
fn squarefree_part(n: &BigInt) -> i64 {
    let mut m = n.abs().to_u64().unwrap();
    let mut out = 1i64;
    for p in prime_divisors(m) {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p as i64;
        }
    }
    if n.is_negative() {
        -out
    } else {
        out
    }
}

fn criterion_1() -> Outcome {
    let q = BaseField::rational();
    let s = build_s(&q, &[q.elem(37, 0, 16).map_err(err)?]).map_err(err)?;
    let names: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    ensure(names == ["inf", "(2)", "(37)"], || format!("S = {names:?}"))?;
    let d = example_one()?;
    ensure(d.v(0).place.p == 41 && d.w(0).place.p == 137, || {
        format!("v = {}, w = {}", d.v(0).place, d.w(0).place)
    })?;
    ensure(hnp_check(&d).map_err(err)?.verdict, || "HNP check false".into())?;
    let norms = local_norm_certificate(&d, &d.alphas).map_err(err)?;
    ensure(norms.iter().all(|c| c.verdict), || "local norm certificate false".into())?;
    let mut fields = Vec::new();
    for j in 0..2 {
        let proj = Projection::factor(d.group(), j).map_err(err)?;
        let r = synthesize(&d, &proj, 1_000_000, 50).map_err(err)?;
        ensure(r.degree == 2 && r.frobenius.passed && r.frobenius.checks.len() == 50, || {
            format!("projection {}: {}", j + 1, r.polynomial)
        })?;
        let disc: BigInt = r.discriminant.parse().map_err(err)?;
        fields.push(squarefree_part(&disc));
    }
    ensure(fields == [41, 137], || format!("splitting fields Q(sqrt(d)) for d in {fields:?}"))?;
    Ok("S = {inf,2,37}, v = 41, w = 137, polynomials define Q(sqrt 41), Q(sqrt 137)".into())
}

fn criterion_2() -> Outcome {
    let x = ["4449545", "-1389743/2", "760267/2", "-118739/2"]
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let n = norm_form_eval(&[41, 137], &x).map_err(err)?;
    ensure(n == parse_rational("37/16").unwrap(), || format!("norm = {n}"))?;
    Ok("N = 37/16".into())
}

fn criterion_3() -> Outcome {
    let fx = load_fixture("example2.json")?;
    let (d, report) = replay(&fx).map_err(err)?;
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    ensure(failed.is_empty(), || format!("mismatches: {failed:?}"))?;
    ensure(d.l_prime[(0, 0)] == 5 && d.l_prime[(0, 1)] == 0, || {
        format!("l'_11 = {}, l'_12 = {}", d.l_prime[(0, 0)], d.l_prime[(0, 1)])
    })?;
    ensure(d.c[2] == [0, 3], || format!("step-3 solution {:?}", d.c[2]))?;
    let expected_checks = ["A", "R", "1.conductor_labels", "4.conductor_labels", "1.split", "4.split"];
    for name in expected_checks {
        ensure(report.checks.iter().any(|c| c.name == name), || format!("{name} not checked"))?;
    }
    Ok(format!("{} recorded values reproduced", report.checks.len() + 3))
}

fn criterion_4() -> Outcome {
    let cfg = JobConfig::from_json(
        r#"{"field": "Q(sqrt(-47))", "group": [6, 3, 3, 3], "alphas": ["2+3*sqrt(-47)"], "search_bound": 100000}"#,
    )
    .map_err(err)?;
    let d = construct(&cfg).map_err(err)?;
    let e = d.e() as i64;
    ensure(e == 6, || format!("e = {e}"))?;
    ensure(invert_mod(&d.a, &e).is_ok(), || "A singular".into())?;
    for j in 1..=d.kprime() {
        let block = Matrix::from_rows((0..j).map(|r| d.l_prime.row(r)[..j].to_vec()).collect());
        ensure(invert_mod(&block, &e).is_ok(), || format!("l' block {j} singular"))?;
    }
    let cols: Vec<Vec<i64>> = (0..d.slots.len()).map(|t| d.r_column(t)).collect();
    ensure(d.group().generated_by(&cols), || "R not surjective".into())?;
    for g in &d.basis.gamma {
        let img = d.apply_r(&d.unit_coordinates(g).map_err(err)?);
        ensure(img.iter().all(|&x| x == 0), || format!("R({g}) = {img:?}"))?;
    }
    d.check_invariants().map_err(err)?;
    ensure(hnp_check(&d).map_err(err)?.verdict, || "HNP check false".into())?;
    let norms = local_norm_certificate(&d, &d.alphas).map_err(err)?;
    ensure(norms.iter().all(|c| c.verdict), || "local norms false".into())?;
    let places: Vec<String> = d.slots.iter().map(|s| s.place.p.to_string()).collect();
    Ok(format!("places above {}", places.join(",")))
}

/// All vectors of (Z/e)^n.
fn all_vectors(n: usize, e: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..e).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn apply(m: &[Vec<i64>], x: &[i64], e: i64) -> Vec<i64> {
    m.iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(e))
        .collect()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let moduli = [2i64, 3, 4, 6, 12];
    let (mut solvable, mut invertible) = (0, 0);
    for trial in 0..200 {
        let e = moduli[trial % moduli.len()];
        let n = rng.gen_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..e)).collect())
            .collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(0..e)).collect();
        let m = Matrix::from_rows(rows.clone());
        let space = all_vectors(n, e);
        let images: Vec<Vec<i64>> = space.iter().map(|x| apply(&rows, x, e)).collect();
        let has_solution = images.contains(&b);
        match solve_mod(&m, &b, &e) {
            Ok(x) => {
                ensure(apply(&rows, &x, e) == b, || format!("bad solution for {rows:?} mod {e}"))?;
                solvable += 1;
            }
            Err(_) => ensure(!has_solution, || format!("missed solution for {rows:?} mod {e}"))?,
        }
        let mut distinct = images.clone();
        distinct.sort();
        distinct.dedup();
        let bijective = distinct.len() == space.len();
        match invert_mod(&m, &e) {
            Ok(inv) => {
                ensure(bijective, || format!("inverted singular {rows:?} mod {e}"))?;
                let prod = m.mul(&inv).reduce(&e);
                ensure(prod == Matrix::identity(n), || format!("wrong inverse of {rows:?}"))?;
                invertible += 1;
            }
            Err(_) => ensure(!bijective, || format!("failed to invert {rows:?} mod {e}"))?,
        }
    }
    Ok(format!("200 systems, {solvable} solvable, {invertible} invertible"))
}

/// Field of order q with q - 1 divisible by some e > 1.
fn random_field(rng: &mut ChaCha8Rng) -> FiniteField {
    loop {
        if rng.gen_bool(0.3) {
            let p = next_prime(rng.gen_range(1..97));
            if p * p > 10_000 {
                continue;
            }
            if p == 2 {
                return FiniteField::quadratic(2, 1, 1);
            }
            let nonresidue = (2..p).find(|&a| charmorph::arith::legendre(a as i64, p) == -1).unwrap();
            return FiniteField::quadratic(p, nonresidue, 0);
        }
        let p = next_prime(rng.gen_range(2..10_000));
        if p > 3 && p <= 10_000 {
            return FiniteField::prime(p);
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0usize;
    for _ in 0..30 {
        let ff = random_field(&mut rng);
        let q = ff.q();
        let elems: Vec<Residue> = if q == ff.p {
            (1..q).map(|x| Residue::new(x, 0)).collect()
        } else {
            (0..ff.p)
                .flat_map(|x| (0..ff.p).map(move |y| Residue::new(x, y)))
                .filter(|r| !r.is_zero())
                .collect()
        };
        // discrete log table from a generator found by brute force
        let order = |x: Residue| {
            let mut c = x;
            let mut k = 1u64;
            while c != Residue::ONE {
                c = ff.mul(c, x);
                k += 1;
            }
            k
        };
        let g = *elems.iter().find(|&&x| order(x) == q - 1).unwrap();
        let mut log = std::collections::HashMap::new();
        let mut c = Residue::ONE;
        for i in 0..q - 1 {
            log.insert(c, i);
            c = ff.mul(c, g);
        }
        let divisors: Vec<u64> = (2..q).filter(|d| (q - 1).is_multiple_of(*d)).collect();
        let e = divisors[rng.gen_range(0..divisors.len())];
        let b = *elems.iter().find(|&&x| log[&x].gcd(&e) == 1).unwrap();
        let gen = QuotientGenerator { b, e };
        let lb_inv = (1..e).find(|&t| (t * log[&b]) % e == 1).unwrap();
        for &x in &elems {
            let lx = log[&x];
            let power = ff.is_eth_power(x, e).map_err(err)?;
            ensure(power == (lx % e == 0), || format!("is_eth_power({x}) in F_{q}, e = {e}"))?;
            let gens = ff.generates_quotient(x, e).map_err(err)?;
            ensure(gens == (lx.gcd(&e) == 1), || format!("generates_quotient({x}) in F_{q}"))?;
            let l = ff.dlog_mod_e(x, &gen).map_err(err)?;
            ensure(l == (lx % e) * lb_inv % e, || format!("dlog({x}) in F_{q}, e = {e}"))?;
            total += 1;
        }
    }
    Ok(format!("30 fields, {total} elements"))
}

fn brute_wedge_order(n: &[u64]) -> BigInt {
    let k = n.len();
    let mut rels: Vec<Vec<i64>> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for m in [n[i], n[j]] {
                let mut r = vec![0i64; k * k];
                r[i * k + j] = m as i64;
                rels.push(r);
            }
        }
    }
    let mut x = vec![0i64; k];
    loop {
        rels.push((0..k * k).map(|t| x[t / k] * x[t % k]).collect());
        let mut i = 0;
        while i < k && x[i] + 1 == n[i] as i64 {
            x[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        x[i] += 1;
    }
    subgroup_index(&rels, &vec![0; k * k]).unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut groups = 0;
    while groups < 20 {
        let k = rng.gen_range(1..=4);
        let f: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=12)).collect();
        if f.iter().product::<u64>() > 200 {
            continue;
        }
        let g = AbelianGroupSpec::new(f.clone()).map_err(err)?;
        let (w, _) = wedge_square(&g);
        let brute = brute_wedge_order(&f);
        ensure(w.order() == brute, || format!("{g}: {} vs {brute}", w.order()))?;
        groups += 1;
    }
    let mut flat = example_one()?;
    flat.r = Matrix::from_rows(vec![vec![1, 1], vec![0, 0]]);
    ensure(!hnp_check(&flat).map_err(err)?.verdict, || "synthetic data passed".into())?;
    let mut outputs = vec![example_one()?];
    outputs.push(replay(&load_fixture("example2.json")?).map_err(err)?.0);
    let cyclic = JobConfig::from_json(r#"{"field": "Q(sqrt(-5))", "group": [4], "alphas": ["3"]}"#)
        .map_err(err)?;
    outputs.push(construct(&cyclic).map_err(err)?);
    for d in &outputs {
        ensure(hnp_check(d).map_err(err)?.verdict, || format!("HNP false for {}", d.group()))?;
    }
    Ok("20 groups, synthetic false, 3 pipeline outputs true".into())
}

fn criterion_8() -> Outcome {
    let mut got = Vec::new();
    for (d, h) in [(-47, 5u64), (-5, 2), (-23, 3)] {
        let k = BaseField::quadratic(d).map_err(err)?;
        let cg = class_group(&k).map_err(err)?;
        let n: u64 = cg.invariants.iter().product();
        ensure(n == h, || format!("h({d}) = {n}"))?;
        got.push(format!("h({d}) = {n}"));
    }
    Ok(got.join(", "))
}

fn criterion_9() -> Outcome {
    let d = example_one()?;
    let ramified: Vec<u64> = ramified_places(&d, &Projection::identity(d.group()))
        .places
        .iter()
        .map(|(_, v)| v.p)
        .collect();
    let q = d.field();
    let (mut n, mut split) = (0u64, 0u64);
    let mut p = 1;
    while n < 1000 {
        p = next_prime(p);
        if ramified.contains(&p) {
            continue;
        }
        let a = artin_symbol(&d, &PrimePlace::above(&q, p)[0]).map_err(err)?;
        n += 1;
        split += u64::from(a.iter().all(|&x| x == 0));
    }
    let frac = split as f64 / n as f64;
    let sigma = (0.25f64 * 0.75 / n as f64).sqrt();
    let z = (frac - 0.25) / sigma;
    ensure(z.abs() <= 5.0, || format!("fraction {frac:.4}, z = {z:.2}"))?;
    Ok(format!("{split}/{n} split, z = {z:.2}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Example-1 end-to-end", Duration::from_secs(1), criterion_1),
        ("norm-solution verification", Duration::from_millis(100), criterion_2),
        ("Example-2 fixture replay", Duration::from_secs(30), criterion_3),
        ("Example-2 unpinned", Duration::from_secs(120), criterion_4),
        ("linear-algebra oracles", Duration::from_secs(10), criterion_5),
        ("residue oracles", Duration::from_secs(10), criterion_6),
        ("wedge and HNP suite", Duration::from_secs(5), criterion_7),
        ("class numbers", Duration::from_secs(5), criterion_8),
        ("splitting statistics", Duration::from_secs(60), criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {} ({name}): {status} in {:.3}s (limit {}s) - {detail}",
            i + 1,
            took.as_secs_f64(),
            limit.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
