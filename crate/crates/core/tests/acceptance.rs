//! Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use legendrian::augment::enumerate_augmentations;
use legendrian::correspond::verify_correspondence;
use legendrian::harness::verify::admissible;
use legendrian::harness::{atlas, lookup, sweep_verify, SweepBounds, VerifyOptions};
use legendrian::prelude::*;

type Outcome = std::result::Result<String, String>;

fn setup(name: &str) -> (PlatDiagram, MaslovData, Dga) {
    let d = lookup(name).expect("atlas entry").diagram();
    let m = maslov(&d, Orientation::Forward);
    let g = build_dga(&d, &m).expect("small diagram");
    (d, m, g)
}

fn within(limit: Duration, start: Instant) -> std::result::Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("took {t:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn trefoil_rulings() -> Outcome {
    let start = Instant::now();
    let (d, m, g) = setup("trefoil");
    let rulings = enumerate_rulings(&d, &m, 0).map_err(|e| e.to_string())?;
    let theta = theta_multiset(&rulings).values();
    let chi = chi_star(&g, 0).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start)?;
    ensure(rulings.len() == 3, || format!("{} rulings", rulings.len()))?;
    ensure(theta == vec![-1, 1, 1], || format!("theta {theta:?}"))?;
    ensure(chi == 1, || format!("chi* = {chi}"))?;
    Ok(format!("3 rulings, theta {theta:?}, chi* = 1, {:?}", start.elapsed()))
}

fn trefoil_fibers() -> Outcome {
    let start = Instant::now();
    let (d, m, g) = setup("trefoil");
    let (rep, table) = verify_correspondence(&d, &m, &g, 0, 30).map_err(|e| e.to_string())?;
    within(Duration::from_secs(1), start)?;
    ensure(rep.augmentations == 5, || format!("{} augmentations", rep.augmentations))?;
    let mut sizes: Vec<usize> = table.fibers.iter().map(|f| f.augmentations.len()).collect();
    sizes.sort();
    ensure(sizes == vec![1, 2, 2], || format!("fiber sizes {sizes:?}"))?;
    for f in &table.fibers {
        let want = 1usize << ((f.ruling.theta + rep.chi_star) / 2);
        ensure(f.augmentations.len() == want, || {
            format!("{} has {} augmentations", f.ruling.letters(), f.augmentations.len())
        })?;
    }
    rep.ensure().map_err(|e| e.to_string())?;
    Ok(format!("5 augmentations in fibers {sizes:?}, {:?}", start.elapsed()))
}

fn trefoil_sum() -> Outcome {
    let (d, m, g) = setup("trefoil");
    let aug = aug_number(&g, 0).map_err(|e| e.to_string())?;
    let rulings = enumerate_rulings(&d, &m, 0).map_err(|e| e.to_string())?;
    let terms: Vec<HalfPow> = rulings.iter().map(|r| HalfPow::sqrt2_pow(r.theta)).collect();
    let sum = HalfPow::checked_sum(&terms)
        .ok_or("mixed parities in theta")?;
    let target = HalfPow::new(5, -1);
    ensure(aug == target, || format!("Aug_0 = {aug}"))?;
    ensure(sum == target, || format!("sum = {sum}"))?;
    Ok(format!("Aug_0 = {aug} = sum of 2^(theta/2)"))
}

fn unknot() -> Outcome {
    let (d, m, g) = setup("unknot");
    let theta = theta_multiset(&enumerate_rulings(&d, &m, 0).map_err(|e| e.to_string())?).values();
    ensure(theta == vec![1], || format!("theta {theta:?}"))?;
    let a0 = enumerate_augmentations(&g, 0).map_err(|e| e.to_string())?.len();
    let a1 = enumerate_augmentations(&g, 1).map_err(|e| e.to_string())?.len();
    ensure(a0 == 1 && a1 == 2, || format!("{a0} and {a1} augmentations"))?;
    for rho in [0, 1] {
        let (rep, _) = verify_correspondence(&d, &m, &g, rho, 30).map_err(|e| e.to_string())?;
        rep.ensure().map_err(|e| e.to_string())?;
    }
    let r = &enumerate_rulings(&d, &m, 1).map_err(|e| e.to_string())?[0];
    let fiber = 1usize << (r.r + d.cusps());
    ensure(fiber == a1, || format!("2^(r+c) = {fiber}"))?;
    Ok("theta {1}, 1 augmentation (rho 0), 2 augmentations (rho 1) = 2^(r+c)".into())
}

fn kinked_unknot() -> Outcome {
    let (d, m, g) = setup("stabilized-unknot");
    let rulings = enumerate_rulings(&d, &m, 1).map_err(|e| e.to_string())?.len();
    let augs = enumerate_augmentations(&g, 1).map_err(|e| e.to_string())?.len();
    ensure(rulings == 0 && augs == 0, || format!("{rulings} rulings, {augs} augmentations"))?;
    Ok("0 rulings and 0 augmentations at rho 1".into())
}

fn two_unknots() -> Outcome {
    let mut seen = Vec::new();
    for name in ["unknot", "unknot-2"] {
        let (d, m, g) = setup(name);
        let theta = theta_multiset(&enumerate_rulings(&d, &m, 0).map_err(|e| e.to_string())?).values();
        let aug = aug_number(&g, 0).map_err(|e| e.to_string())?;
        seen.push((theta, aug));
    }
    ensure(seen[0] == seen[1], || format!("{seen:?}"))?;
    ensure(seen[0].0 == vec![1], || format!("theta {:?}", seen[0].0))?;
    Ok(format!("both give theta {:?}, Aug_0 = {}", seen[0].0, seen[0].1))
}

fn sweep() -> Outcome {
    let start = Instant::now();
    let rep = sweep_verify(200, VerifyOptions::default(), &[0, 1], 1, SweepBounds::default())
        .map_err(|e| e.to_string())?;
    within(Duration::from_secs(300), start)?;
    ensure(rep.passed, || format!("{:?}", rep.failures.first()))?;
    let tally: Vec<String> = rep
        .per_rho
        .iter()
        .map(|(rho, t)| format!("rho {rho}: {} diagrams, {} augmentations", t.diagrams, t.augmentations))
        .collect();
    Ok(format!("{} checks, {}, {:?}", rep.checks_run, tally.join("; "), start.elapsed()))
}

fn chekanov_pair() -> Outcome {
    let mut augs = Vec::new();
    for name in ["chekanov-5_2-a", "chekanov-5_2-b"] {
        let (_, m, g) = setup(name);
        ensure(m.tb == 1 && m.rotation == 0, || format!("{name}: tb {} r {}", m.tb, m.rotation))?;
        augs.push(aug_number(&g, 0).map_err(|e| e.to_string())?);
    }
    ensure(augs[0] != augs[1], || format!("both Aug_0 = {}", augs[0]))?;
    Ok(format!("Aug_0 = {} vs {}", augs[0], augs[1]))
}

fn stabilization() -> Outcome {
    let mut cases = 0;
    for e in atlas() {
        let d = e.diagram();
        let m = maslov(&d, Orientation::Forward);
        let g = build_dga(&d, &m).map_err(|e| e.to_string())?;
        for rho in [0u64, 1, 2, 3] {
            if !admissible(rho, &m) && !(rho == 2 && m.modulus % 2 == 0) {
                continue;
            }
            let base = enumerate_augmentations(&g, rho).map_err(|e| e.to_string())?.len();
            for i in 0..=2i64 {
                let stab = g.stabilize(i);
                let got = enumerate_augmentations(&stab, rho).map_err(|e| e.to_string())?.len();
                let divides = if rho == 0 { i == 0 } else { i % rho as i64 == 0 };
                let want = if divides { 2 * base } else { base };
                ensure(got == want, || {
                    format!("{} rho {rho} degree {i}: {base} -> {got}", e.name)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (diagram, rho, degree) cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("trefoil rulings, theta and chi* at rho 0", trefoil_rulings),
        ("trefoil augmentations and fiber sizes at rho 0", trefoil_fibers),
        ("trefoil Aug_0 equals the theta sum", trefoil_sum),
        ("unknot counts and fiber checks", unknot),
        ("stabilized unknot has neither rulings nor augmentations", kinked_unknot),
        ("two unknot fronts agree", two_unknots),
        ("seeded random sweep of 200 plats", sweep),
        ("Aug_0 separates the 5_2 pair", chekanov_pair),
        ("stabilization doubles counts exactly when rho divides the degree", stabilization),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
