//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relfree_core::cp::{build_witness, divisibility_certificate, CaseId, CpReport, Nonfreeness};
use relfree_core::factorization::{
    is_primitive_with, triangular_solve, PrimitivityVerdict, WhiteheadConfig, WhiteheadMove,
};
use relfree_core::stallings::{fold, fold_with_order, petal_edge_count};
use relfree_core::varieties::{abelianize, dyadic_eval, in_integer_span, nil2_normal_form};
use relfree_core::{Dyadic, GeneratorMap, Letter, Sign, Word, WitnessRecipe};
use serde_json::Value;

const SEED: u64 = 0x5eed_2026;

type Verdict = Result<String, String>;

fn random_letter(rng: &mut ChaCha8Rng, indices: std::ops::Range<u32>) -> Letter {
    let index = rng.gen_range(indices);
    Letter::new(index, if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg })
}

/// A reduced word of exactly `len` letters over `indices`.
fn reduced_word(rng: &mut ChaCha8Rng, indices: std::ops::Range<u32>, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = random_letter(rng, indices.clone());
        if letters.last().is_none_or(|last| !last.cancels(l)) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

fn word_up_to(rng: &mut ChaCha8Rng, indices: std::ops::Range<u32>, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    reduced_word(rng, indices, len)
}

fn w(text: &str) -> Word {
    Word::parse(text).unwrap()
}

fn criterion_1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut instances = 0usize;
    let mut failures = Vec::new();
    for k in 1..=3u32 {
        for h in 1..=3u32 {
            for sign in [Sign::Pos, Sign::Neg] {
                for _ in 0..20 {
                    let coding = word_up_to(&mut rng, 1..h + 1, 6);
                    let recipe = WitnessRecipe::new(k, h, coding, sign).unwrap();
                    for n in 0..=8u32 {
                        instances += 1;
                        let cert = triangular_solve(&recipe, n);
                        let rank = k * n + h + 1;
                        let forward_back = GeneratorMap::compose(&cert.forward, &cert.backward);
                        let back_forward = GeneratorMap::compose(&cert.backward, &cert.forward);
                        let graph = fold(&cert.z_basis);
                        let ok = cert.ambient_rank == rank
                            && forward_back.is_identity_below(rank)
                            && back_forward.is_identity_below(rank)
                            && graph.rank() == rank as usize
                            && (0..rank).all(|j| graph.contains(&Word::generator(j)))
                            && (0..=n).all(|i| cert.z_basis[(k * i) as usize] == recipe.instantiate(i));
                        if !ok && failures.len() < 3 {
                            failures.push(format!("{recipe} n={n}"));
                        }
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{instances} instances"))
    } else {
        Err(format!("failures include {}", failures.join("; ")))
    }
}

fn criterion_2() -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_relfree"))
        .args(["triangular-solve", "--case", "1", "--n", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    let golden = include_str!("golden/triangular_solve_case1_n1.txt");
    if out.stdout != golden.as_bytes() {
        return Err("output differs from the golden file".into());
    }
    let recipe = build_witness(CaseId::One).unwrap().recipe;
    let cert = triangular_solve(&recipe, 1);
    // Backward images are words over the solved basis: symbol i is y_i for
    // i <= n, x_i otherwise.
    let y1_block = w("x1 x2^2");
    let expected_x0 = w("x0").product(&y1_block.pow(2));
    if cert.backward.image(1) != y1_block || cert.backward.image(0) != expected_x0 {
        return Err(format!("backward map is {}", cert.backward));
    }
    Ok("byte-exact".into())
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut discrepancies = 0usize;
    for _ in 0..200 {
        let count = rng.gen_range(1..=8);
        let gens: Vec<Word> = (0..count).map(|_| word_up_to(&mut rng, 0..4, 20)).collect();
        let probes: Vec<Word> = (0..20)
            .map(|p| {
                if p % 2 == 0 {
                    word_up_to(&mut rng, 0..4, 12)
                } else {
                    let mut probe = Word::identity();
                    for _ in 0..rng.gen_range(1..=4) {
                        let g = &gens[rng.gen_range(0..gens.len())];
                        probe = probe.product(&g.pow(if rng.gen_bool(0.5) { 1 } else { -1 }));
                    }
                    probe
                }
            })
            .collect();
        let reference = fold(&gens);
        let reference_members: Vec<bool> = probes.iter().map(|p| reference.contains(p)).collect();
        let mut order: Vec<usize> = (0..petal_edge_count(&gens)).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let graph = fold_with_order(&gens, &order);
            let members: Vec<bool> = probes.iter().map(|p| graph.contains(p)).collect();
            if graph.rank() != reference.rank() || members != reference_members || graph != reference {
                discrepancies += 1;
            }
        }
    }
    if discrepancies == 0 {
        Ok("2000 folds".into())
    } else {
        Err(format!("{discrepancies} discrepancies"))
    }
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut violations = 0usize;
    let (mut obstructed, mut positives) = (0usize, 0usize);
    for pair in 0..500 {
        let count = rng.gen_range(1..=4);
        let gens: Vec<Word> = (0..count).map(|_| word_up_to(&mut rng, 0..3, 8)).collect();
        let query = if pair % 2 == 0 {
            word_up_to(&mut rng, 0..3, 10)
        } else {
            let mut q = Word::identity();
            for _ in 0..rng.gen_range(1..=4) {
                let g = &gens[rng.gen_range(0..gens.len())];
                q = q.product(&g.pow(if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
            q
        };
        let graph = fold(&gens);
        let vectors: Vec<_> = gens.iter().map(abelianize).collect();
        let found = graph.member_express(&query);
        if !in_integer_span(&abelianize(&query), &vectors) {
            obstructed += 1;
            if found.member {
                violations += 1;
            }
        }
        if found.member {
            positives += 1;
            if found.substitute(&graph.basis()) != query {
                violations += 1;
            }
        }
    }
    if violations == 0 {
        Ok(format!("{obstructed} obstructed, {positives} positive"))
    } else {
        Err(format!("{violations} violations"))
    }
}

type Matrix = [[i64; 3]; 3];

fn heisenberg(letter: Letter) -> Matrix {
    let s = letter.sign.as_i64();
    let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    if letter.index == 0 {
        m[0][1] = s;
    } else {
        m[1][2] = s;
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut mismatches = 0usize;
    for _ in 0..1000 {
        let u = word_up_to(&mut rng, 0..2, 20);
        let v = word_up_to(&mut rng, 0..2, 20);
        let form = nil2_normal_form(&u.product(&v), 2).map_err(|e| e.to_string())?;
        let matrix = u
            .letters()
            .iter()
            .chain(v.letters())
            .fold([[1, 0, 0], [0, 1, 0], [0, 0, 1]], |m, &l| mat_mul(&m, &heisenberg(l)));
        let (p, q, r) = (matrix[0][1], matrix[1][2], matrix[0][2]);
        let coordinates = (form.exponents().get(0), form.exponents().get(1), form.commutator(0, 1));
        if coordinates != (p, q, r - p * q) {
            mismatches += 1;
        }
    }
    if mismatches == 0 {
        Ok("1000 pairs".into())
    } else {
        Err(format!("{mismatches} mismatches"))
    }
}

fn criterion_6() -> Verdict {
    for i in 0..=64u32 {
        let lhs = dyadic_eval(&Word::generator(i));
        let rhs = dyadic_eval(&Word::generator(i + 1)).mul_pow2(1);
        if lhs != rhs {
            return Err(format!("relation fails at i = {i}"));
        }
    }
    let recipe = build_witness(CaseId::One).unwrap().recipe;
    let ys: Vec<Word> = (0..32).map(|i| recipe.instantiate(i)).collect();
    if let Some(i) = ys.iter().position(|y| !dyadic_eval(y).is_zero()) {
        return Err(format!("y{i} does not vanish"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    for _ in 0..100 {
        let mut product = Word::identity();
        for _ in 0..rng.gen_range(1..=6) {
            let y = &ys[rng.gen_range(0..ys.len())];
            let y = if rng.gen_bool(0.5) { y.clone() } else { y.inverse() };
            let c = word_up_to(&mut rng, 0..40, 10);
            product = product.product(&y.conjugate_by(&c));
        }
        if !dyadic_eval(&product).is_zero() {
            return Err(format!("{product} does not vanish"));
        }
    }
    let certificate = divisibility_certificate(64);
    certificate.verify().map_err(|e| e.to_string())?;
    let one = Dyadic::one();
    for entry in &certificate.entries {
        let odd = entry.value.numerator() % 2 != 0.into();
        if !odd || !entry.value.is_canonical() || entry.value.mul_pow2(entry.j as i64) != one {
            return Err(format!("entry {} is {}", entry.j, entry.value));
        }
    }
    Ok("relation to 64, 32 witnesses, 100 products, depth 64".into())
}

fn criterion_7() -> Verdict {
    let dir = std::env::temp_dir().join(format!("relfree-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut times = Vec::new();
    for case in ["1", "2", "3"] {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_relfree"))
            .args(["cp-verify", "--case", case, "--n", "10", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if !out.status.success() {
            return Err(format!("case {case} exited {:?}", out.status.code()));
        }
        if elapsed >= Duration::from_secs(5) {
            return Err(format!("case {case} took {elapsed:?}"));
        }
        times.push(format!("case {case} {:.2}s", elapsed.as_secs_f64()));
        let value: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let fields: serde_json::Map<String, Value> = value
            .as_object()
            .unwrap()
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "schema" | "command" | "input"))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let report: CpReport =
            serde_json::from_value(Value::Object(fields)).map_err(|e| e.to_string())?;
        if report.checks.len() != 10
            || !report.checks.iter().all(|c| c.independence && c.certificate_verified)
            || !report.pass
        {
            return Err(format!("case {case}: a check failed"));
        }
        let evidence_ok = match (&report.nonfreeness, case) {
            (Nonfreeness::Dyadic { .. }, "1") => true,
            (Nonfreeness::Delegated { .. }, "2" | "3") => true,
            _ => false,
        };
        if !evidence_ok {
            return Err(format!("case {case}: wrong non-freeness evidence"));
        }
        let again = report.reverify();
        if !again.matches_stored || again.pass != report.pass {
            return Err(format!("case {case}: reverification disagrees: {:?}", again.problems));
        }
        let path = dir.join(format!("case{case}.json"));
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        let check = Command::new(env!("CARGO_BIN_EXE_relfree"))
            .args(["cp-verify", "--verify-file", path.to_str().unwrap(), "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        let outcome: Value = serde_json::from_slice(&check.stdout).map_err(|e| e.to_string())?;
        if !check.status.success() || outcome["verified"] != true {
            return Err(format!("case {case}: --verify-file gave {outcome}"));
        }
    }
    Ok(times.join(", "))
}

fn random_automorphism(rng: &mut ChaCha8Rng, moves: &[WhiteheadMove], rank: u32) -> GeneratorMap {
    let mut map = GeneratorMap::identity();
    for _ in 0..rng.gen_range(1..=5) {
        let step = if rng.gen_bool(0.5) {
            moves[rng.gen_range(0..moves.len())].to_map()
        } else {
            // Permutation and inversion of generators.
            let mut images: Vec<u32> = (0..rank).collect();
            images.shuffle(rng);
            GeneratorMap::from_assignments(images.into_iter().enumerate().map(|(i, j)| {
                let g = Word::generator(j);
                (i as u32, if rng.gen_bool(0.5) { g } else { g.inverse() })
            }))
        };
        map = GeneratorMap::compose(&step, &map);
    }
    map
}

fn criterion_8() -> Verdict {
    let config = WhiteheadConfig { max_rank: 4 };
    let verdict = |word: &Word| is_primitive_with(word, 2, &config).map_err(|e| e.to_string());
    let target = w("x0 x1^-2");
    match verdict(&target)? {
        PrimitivityVerdict::Primitive { basis, .. } => {
            let graph = fold(&basis);
            if basis.len() != 2
                || !basis.contains(&target)
                || graph.rank() != 2
                || !graph.contains(&w("x0"))
                || !graph.contains(&w("x1"))
            {
                return Err(format!("emitted basis {basis:?} does not fold to F2"));
            }
        }
        other => return Err(format!("x0 x1^-2 reported {other:?}")),
    }
    for word in ["x0^2", "[x0,x1]"] {
        if verdict(&w(word))?.is_primitive() {
            return Err(format!("{word} reported primitive"));
        }
    }
    let moves = WhiteheadMove::all(2);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for (word, expected) in [("x0 x1^-2", true), ("x0^2", false), ("[x0,x1]", false)] {
        for _ in 0..50 {
            let phi = random_automorphism(&mut rng, &moves, 2);
            let image = phi.apply(&w(word));
            if verdict(&image)?.is_primitive() != expected {
                return Err(format!("verdict changed on {image}"));
            }
        }
    }
    Ok("3 words, 150 automorphic images".into())
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, Option<Duration>); 8] = [
        ("triangular-solve suite", criterion_1, Some(Duration::from_secs(30))),
        ("golden triangular solve", criterion_2, None),
        ("folding confluence", criterion_3, Some(Duration::from_secs(60))),
        ("membership cross-oracle", criterion_4, None),
        ("nil2 oracle equivalence", criterion_5, Some(Duration::from_secs(10))),
        ("dyadic quotient", criterion_6, None),
        ("end-to-end cp verification", criterion_7, None),
        ("primitivity", criterion_8, None),
    ];
    let mut failed = 0;
    for (number, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut verdict = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&verdict, limit) {
            if elapsed >= limit {
                verdict = Err(format!("took {elapsed:?}, limit {limit:?}"));
            }
        }
        match verdict {
            Ok(detail) => println!(
                "criterion {}: PASS {name} ({detail}; {:.2}s)",
                number + 1,
                elapsed.as_secs_f64()
            ),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({detail})", number + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
