//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`; the per-test ok/FAILED lines mirror
//! them). Every check is exact — no tolerances except the two explicit
//! complexity-ratio bounds, which are pinned here.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{hook_module, independent_rank, mat};
use pmbasis::basis1d::{compute_basis_1d, Basis1dError};
use pmbasis::basis2d::{
    check_commutativity, check_injectivity_2d, check_intersection_condition, compute_basis_2d,
    Basis2dError, Direction,
};
use pmbasis::oracle::{
    betti_1d, betti_2d, birth_set_minimals_2d, gen_free_1d, gen_free_2d, represent_1d,
    represent_2d, verify_basis_1d, verify_basis_2d,
};
use pmbasis::pmod::{DegreeElement, Module1d, Module2d, Window1d, Window2d};
use pmbasis::posetcheck::{classify, Conclusion, SupportComponent, SupportDescriptor, SupportKind};
use pmbasis::ratmat::{Matrix, Rational};

fn conclude(number: usize, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {number} ({name}): PASS");
    } else {
        println!("criterion {number} ({name}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!(
            "criterion {number} ({name}) failed with {} issue(s)",
            failures.len()
        );
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

#[test]
fn criterion_1_oracle_equivalence_1d() {
    let mut failures = Vec::new();
    for seed in 1..=200u64 {
        let mut meta = ChaCha8Rng::seed_from_u64(seed);
        let alpha = meta.gen_range(-5..=5);
        let beta = alpha + meta.gen_range(0..=5);
        let window = Window1d::new(alpha, beta).unwrap();
        let gen_count = meta.gen_range(1..=5);
        let gens: Vec<i64> = (0..gen_count)
            .map(|_| meta.gen_range(alpha..=beta))
            .collect();
        let m = gen_free_1d(seed, window, &gens);

        let result = match compute_basis_1d(&m) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("seed {seed}: extraction failed with {e}"));
                continue;
            }
        };
        if !verify_basis_1d(&m, &result.basis) {
            failures.push(format!("seed {seed}: basis fails verification"));
            continue;
        }
        for d in window.degrees() {
            let count = result
                .basis
                .elements
                .iter()
                .filter(|e| e.degree == d)
                .count();
            let betti = betti_1d(&m, d).unwrap();
            if count != betti {
                failures.push(format!(
                    "seed {seed}: {count} generators at degree {d}, betti {betti}"
                ));
            }
            let cumulative = result
                .basis
                .elements
                .iter()
                .filter(|e| e.degree <= d)
                .count();
            if cumulative != m.dim(d) {
                failures.push(format!(
                    "seed {seed}: dimension identity broken at degree {d}"
                ));
            }
        }
    }
    conclude(1, "1D oracle equivalence", failures);
}

#[test]
fn criterion_2_oracle_equivalence_2d() {
    let mut failures = Vec::new();
    for seed in 1..=100u64 {
        let mut meta = ChaCha8Rng::seed_from_u64(seed);
        let alpha = meta.gen_range(-3..=3);
        let gamma = meta.gen_range(-3..=3);
        let beta = alpha + meta.gen_range(0..=3);
        let delta = gamma + meta.gen_range(0..=3);
        let window = Window2d::new(alpha, beta, gamma, delta).unwrap();
        let gen_count = meta.gen_range(1..=4);
        let gens: Vec<(i64, i64)> = (0..gen_count)
            .map(|_| (meta.gen_range(alpha..=beta), meta.gen_range(gamma..=delta)))
            .collect();
        let m = gen_free_2d(seed, window, &gens);

        if !check_commutativity(&m).pass
            || !check_injectivity_2d(&m).pass
            || !check_intersection_condition(&m).pass
        {
            failures.push(format!("seed {seed}: a criteria check failed"));
            continue;
        }
        let result = match compute_basis_2d(&m) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("seed {seed}: extraction failed with {e}"));
                continue;
            }
        };
        if !verify_basis_2d(&m, &result.basis) {
            failures.push(format!("seed {seed}: basis fails verification"));
            continue;
        }
        for d in window.degrees() {
            let count = result
                .basis
                .elements
                .iter()
                .filter(|e| e.degree == d)
                .count();
            let betti = betti_2d(&m, d).unwrap();
            if count != betti {
                failures.push(format!(
                    "seed {seed}: {count} generators at {d:?}, betti {betti}"
                ));
            }
            let cumulative = result
                .basis
                .elements
                .iter()
                .filter(|e| e.degree.0 <= d.0 && e.degree.1 <= d.1)
                .count();
            if cumulative != m.dim(d) {
                failures.push(format!("seed {seed}: dimension identity broken at {d:?}"));
            }
        }
    }
    conclude(2, "2D oracle equivalence", failures);
}

#[test]
fn criterion_3_failure_detection() {
    let mut failures = Vec::new();

    match compute_basis_2d(&hook_module()) {
        Err(Basis2dError::IntersectionFailAt((1, 1))) => {}
        other => failures.push(format!(
            "hook: expected intersection failure, got {other:?}"
        )),
    }

    let zero_1d =
        Module1d::new(Window1d::new(0, 1).unwrap(), vec![1, 1], vec![mat(&[&[0]])]).unwrap();
    match compute_basis_1d(&zero_1d) {
        Err(Basis1dError::NotInjectiveAt(0)) => {}
        other => failures.push(format!("1D zero map: got {other:?}")),
    }

    // Both horizontal maps zero, verticals identity: still commutative, so
    // the failure surfaces in the injectivity pass.
    let zero_2d = Module2d::new(
        Window2d::new(0, 1, 0, 1).unwrap(),
        vec![vec![1, 1], vec![1, 1]],
        vec![vec![mat(&[&[0]]), mat(&[&[0]])]],
        vec![vec![mat(&[&[1]])], vec![mat(&[&[1]])]],
    )
    .unwrap();
    match compute_basis_2d(&zero_2d) {
        Err(Basis2dError::NotInjectiveAt((0, 0), Direction::Horizontal)) => {}
        other => failures.push(format!("2D zero map: got {other:?}")),
    }

    // Identical to an all-identity square except one perturbed edge.
    let twisted = Module2d::new(
        Window2d::new(0, 1, 0, 1).unwrap(),
        vec![vec![1, 1], vec![1, 1]],
        vec![vec![mat(&[&[1]]), mat(&[&[2]])]],
        vec![vec![mat(&[&[1]])], vec![mat(&[&[1]])]],
    )
    .unwrap();
    match compute_basis_2d(&twisted) {
        Err(Basis2dError::NotCommutativeAt((1, 1))) => {}
        other => failures.push(format!("perturbed square: got {other:?}")),
    }

    conclude(3, "failure detection", failures);
}

#[test]
fn criterion_4_rref_contract() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..500 {
        let rows = rng.gen_range(0..=6);
        let cols = rng.gen_range(0..=6);
        let mut a = Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                a.set(r, c, random_rational(&mut rng));
            }
        }
        let result = a.rref();
        if result.transform.matmul(&a).unwrap() != result.reduced {
            failures.push(format!(
                "case {case}: transform does not reproduce the output"
            ));
        }
        let again = result.reduced.rref();
        if again.reduced != result.reduced || again.ops != 0 {
            failures.push(format!("case {case}: output is not a fixed point"));
        }
        if result.rank != independent_rank(&a) {
            failures.push(format!(
                "case {case}: rank {} disagrees with the independent oracle",
                result.rank
            ));
        }
    }
    conclude(4, "elimination contract", failures);
}

#[test]
fn criterion_5_complexity_scaling() {
    let mut failures = Vec::new();

    let ops_1d = |d: usize, maps: i64| -> f64 {
        let window = Window1d::new(0, maps).unwrap();
        let gens = vec![0i64; d];
        compute_basis_1d(&gen_free_1d(9000 + d as u64, window, &gens))
            .unwrap()
            .ops as f64
    };
    // Doubling the dimension at fixed window: at most 12x per step.
    let (d2, d4, d8) = (ops_1d(2, 2), ops_1d(4, 2), ops_1d(8, 2));
    for (lo, hi, step) in [(d2, d4, "2->4"), (d4, d8, "4->8")] {
        let ratio = hi / lo;
        if ratio > 12.0 {
            failures.push(format!("1D dimension step {step}: ratio {ratio:.2} > 12"));
        }
    }
    // Window growth at fixed dimension: linear within +-50%.
    let (n5, n9) = (ops_1d(4, 4), ops_1d(4, 8));
    let normalized = (n9 / n5) / (9.0 / 5.0);
    if !(0.5..=1.5).contains(&normalized) {
        failures.push(format!(
            "1D window growth: normalized slope {normalized:.2} outside [0.5, 1.5]"
        ));
    }

    let ops_2d = |d: usize, width: i64, height: i64| -> f64 {
        let window = Window2d::new(0, width - 1, 0, height - 1).unwrap();
        let gens = vec![(0i64, 0i64); d];
        compute_basis_2d(&gen_free_2d(7000 + d as u64, window, &gens))
            .unwrap()
            .ops as f64
    };
    let (e2, e4, e8) = (ops_2d(2, 2, 2), ops_2d(4, 2, 2), ops_2d(8, 2, 2));
    for (lo, hi, step) in [(e2, e4, "2->4"), (e4, e8, "4->8")] {
        let ratio = hi / lo;
        if ratio > 12.0 {
            failures.push(format!("2D dimension step {step}: ratio {ratio:.2} > 12"));
        }
    }
    let (c4, c8) = (ops_2d(3, 2, 2), ops_2d(3, 2, 4));
    let normalized = (c8 / c4) / (8.0 / 4.0);
    if !(0.5..=1.5).contains(&normalized) {
        failures.push(format!(
            "2D cell growth: normalized slope {normalized:.2} outside [0.5, 1.5]"
        ));
    }

    conclude(5, "complexity scaling", failures);
}

#[test]
fn criterion_6_representation_uniqueness() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(616);

    // (module, basis, windows as degree lists, composite closure) for both
    // index shapes, handled through a shared routine on image matrices.
    type RepresentFn = Box<dyn Fn(usize, &[Rational]) -> Vec<Rational>>;
    struct Fixture {
        label: String,
        degrees: Vec<String>,
        /// Image matrix and dimension per target degree.
        systems: Vec<(Matrix, usize)>,
        represent: RepresentFn,
    }

    let mut fixtures: Vec<Fixture> = Vec::new();

    for seed in 1..=10u64 {
        let window = Window1d::new(0, 3).unwrap();
        let mut meta = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<i64> = (0..meta.gen_range(1..=4))
            .map(|_| meta.gen_range(0..=3))
            .collect();
        let m = gen_free_1d(seed, window, &gens);
        let basis = compute_basis_1d(&m).unwrap().basis;
        let mut degrees = Vec::new();
        let mut systems = Vec::new();
        for target in window.degrees() {
            let mut images = Matrix::zero(m.dim(target), 0);
            for e in basis.elements.iter().filter(|e| e.degree <= target) {
                let image = m
                    .composite_map(e.degree, target)
                    .unwrap()
                    .mul_vec(&e.vector);
                images = images.hconcat(&Matrix::from_column(image)).unwrap();
            }
            degrees.push(format!("{target}"));
            systems.push((images, m.dim(target)));
        }
        let targets: Vec<i64> = window.degrees().collect();
        fixtures.push(Fixture {
            label: format!("1D seed {seed}"),
            degrees,
            systems,
            represent: Box::new(move |idx, vector| {
                represent_1d(
                    &m,
                    &basis,
                    &DegreeElement {
                        degree: targets[idx],
                        vector: vector.to_vec(),
                    },
                )
                .unwrap()
            }),
        });
    }

    for seed in 1..=5u64 {
        let window = Window2d::new(0, 1, 0, 2).unwrap();
        let mut meta = ChaCha8Rng::seed_from_u64(100 + seed);
        let gens: Vec<(i64, i64)> = (0..meta.gen_range(1..=3))
            .map(|_| (meta.gen_range(0..=1), meta.gen_range(0..=2)))
            .collect();
        let m = gen_free_2d(seed, window, &gens);
        let basis = compute_basis_2d(&m).unwrap().basis;
        let mut degrees = Vec::new();
        let mut systems = Vec::new();
        for target in window.degrees() {
            let mut images = Matrix::zero(m.dim(target), 0);
            for e in basis
                .elements
                .iter()
                .filter(|e| e.degree.0 <= target.0 && e.degree.1 <= target.1)
            {
                let image = m
                    .composite_map(e.degree, target)
                    .unwrap()
                    .mul_vec(&e.vector);
                images = images.hconcat(&Matrix::from_column(image)).unwrap();
            }
            degrees.push(format!("{target:?}"));
            systems.push((images, m.dim(target)));
        }
        let targets: Vec<(i64, i64)> = window.degrees().collect();
        fixtures.push(Fixture {
            label: format!("2D seed {seed}"),
            degrees,
            systems,
            represent: Box::new(move |idx, vector| {
                represent_2d(
                    &m,
                    &basis,
                    &DegreeElement {
                        degree: targets[idx],
                        vector: vector.to_vec(),
                    },
                )
                .unwrap()
            }),
        });
    }

    for fixture in &fixtures {
        for sample in 0..50 {
            let idx = sample % fixture.systems.len();
            let (images, dim) = &fixture.systems[idx];
            let coefficients: Vec<Rational> = (0..images.cols())
                .map(|_| random_rational(&mut rng))
                .collect();
            let vector = if images.cols() == 0 {
                vec![Rational::zero(); *dim]
            } else {
                images.mul_vec(&coefficients)
            };
            let recovered = (fixture.represent)(idx, &vector);
            if recovered != coefficients {
                failures.push(format!(
                    "{} degree {}: coefficients did not round-trip",
                    fixture.label, fixture.degrees[idx]
                ));
                continue;
            }
            // Any single-coefficient change must move the element.
            for k in 0..coefficients.len() {
                let mut bumped = coefficients.clone();
                bumped[k] += &Rational::one();
                let other = images.mul_vec(&bumped);
                if other == vector {
                    failures.push(format!(
                        "{} degree {}: coefficient {k} does not affect the element",
                        fixture.label, fixture.degrees[idx]
                    ));
                }
            }
        }
    }

    conclude(6, "representation uniqueness", failures);
}

#[test]
fn criterion_7_support_classifier() {
    let mut failures = Vec::new();

    let principal = |x: i64, y: i64| SupportComponent {
        kind: SupportKind::Principal,
        corner: (x, y),
    };
    let stair = |kind: SupportKind, l: i64| SupportComponent {
        kind,
        corner: (l, l),
    };

    let punctured = classify(&SupportDescriptor {
        components: vec![stair(SupportKind::StaircasePunctured, 0)],
    });
    if !(punctured.flat
        && punctured.not_projective
        && punctured.witness == Some((1, 1))
        && punctured.conclusion == Conclusion::NotProjectiveFlat)
    {
        failures.push(format!("punctured staircase: {punctured:?}"));
    }

    let free = classify(&SupportDescriptor {
        components: vec![principal(2, -1)],
    });
    if !(free.flat && free.free_by_construction && free.conclusion == Conclusion::Free) {
        failures.push(format!("single principal: {free:?}"));
    }

    let pair = classify(&SupportDescriptor {
        components: vec![principal(0, 1), principal(1, 0)],
    });
    if !(pair.flat
        && !pair.free_by_construction
        && !pair.not_projective
        && pair.conclusion == Conclusion::NoConclusion)
    {
        failures.push(format!("incomparable principals: {pair:?}"));
    }

    let with_staircase: Vec<SupportDescriptor> = vec![
        SupportDescriptor {
            components: vec![stair(SupportKind::StaircaseClosed, 3)],
        },
        SupportDescriptor {
            components: vec![principal(0, 0), stair(SupportKind::StaircasePunctured, -2)],
        },
        SupportDescriptor {
            components: vec![
                principal(-4, 6),
                stair(SupportKind::StaircaseClosed, 0),
                stair(SupportKind::StaircasePunctured, 1),
            ],
        },
    ];
    for desc in &with_staircase {
        let c = classify(desc);
        if !c.not_projective || c.conclusion != Conclusion::NotProjectiveFlat {
            failures.push(format!("staircase descriptor not flagged: {c:?}"));
        }
        if let Some(a) = c.witness {
            if !desc.member(a) {
                failures.push(format!("witness {a:?} is not in the support"));
            }
            for m in desc.minimal_elements() {
                if m.0 <= a.0 && m.1 <= a.1 {
                    failures.push(format!("minimal {m:?} sits below witness {a:?}"));
                }
            }
        } else {
            failures.push("staircase verdict without witness".to_string());
        }
    }

    conclude(7, "support classifier", failures);
}

#[test]
fn criterion_8_birth_set_consistency() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(88);

    for seed in 1..=6u64 {
        let window = Window2d::new(0, 2, 0, 2).unwrap();
        let mut meta = ChaCha8Rng::seed_from_u64(400 + seed);
        let gens: Vec<(i64, i64)> = (0..meta.gen_range(1..=4))
            .map(|_| (meta.gen_range(0..=2), meta.gen_range(0..=2)))
            .collect();
        let m = gen_free_2d(seed, window, &gens);
        assert!(check_intersection_condition(&m).pass);

        // Random elements at every degree, plus every shifted basis element.
        let basis = compute_basis_2d(&m).unwrap().basis;
        let mut tested: Vec<DegreeElement<(i64, i64)>> = Vec::new();
        for target in window.degrees() {
            for _ in 0..3 {
                tested.push(DegreeElement {
                    degree: target,
                    vector: (0..m.dim(target))
                        .map(|_| random_rational(&mut rng))
                        .collect(),
                });
            }
            for e in basis
                .elements
                .iter()
                .filter(|e| e.degree.0 <= target.0 && e.degree.1 <= target.1)
            {
                tested.push(DegreeElement {
                    degree: target,
                    vector: m
                        .composite_map(e.degree, target)
                        .unwrap()
                        .mul_vec(&e.vector),
                });
            }
        }
        for x in &tested {
            let minimals = birth_set_minimals_2d(&m, x).unwrap();
            if minimals.len() != 1 {
                failures.push(format!(
                    "seed {seed}: element at {:?} has birth minimals {minimals:?}",
                    x.degree
                ));
            }
        }
    }

    let hook = hook_module();
    let corner_generator = DegreeElement {
        degree: (1, 1),
        vector: vec![Rational::one()],
    };
    let minimals = birth_set_minimals_2d(&hook, &corner_generator).unwrap();
    if minimals != vec![(0, 1), (1, 0)] {
        failures.push(format!("hook corner generator: minimals {minimals:?}"));
    }

    conclude(8, "birth set consistency", failures);
}
