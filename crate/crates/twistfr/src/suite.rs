//! Named check suites over built-in fixtures, shared by the CLI and the
//! acceptance tests. Every expected value here is produced by construction
//! or by an independent counting/expansion path, never hard-coded from
//! narrative text.

use crate::lie::{
    build_sl, check_cybe, check_r_invariance, check_t_invariance, diagram_automorphism,
    dynkin_graph_aut_order, standard_r_matrix, AutKind, ClassicalRMatrix, LieAlgebraA,
};
use crate::par::{map_collect, Parallelism};
use crate::pattern::{
    classify_pair, surface_invariants, DecoratedPattern, GluingPattern, OutLabel, PairClass,
};
use crate::poisson::{check_equivariance, check_forms_agree, check_jacobi, fock_rosly_bivector};
use crate::rea::{
    build_deformation_table, check_associativity_order1, check_equivariance_order1,
    verify_quantisation,
};
use crate::report::CheckReport;
use crate::repvar::{
    groupoid_cardinality, orbit_count, FiniteGroup, GroupAutomorphism, TwistData,
};
use crate::ring::{rat, Rational, SparsePoly, VarId};
use std::time::Instant;

pub struct Suite {
    pub mode: Parallelism,
    pub seed: u64,
}

impl Default for Suite {
    fn default() -> Self {
        Suite {
            mode: Parallelism::auto(),
            seed: 0,
        }
    }
}

fn decorated(p: GluingPattern, labels: Vec<OutLabel>) -> DecoratedPattern {
    DecoratedPattern {
        pattern: p,
        labels,
        dynkin_tag: None,
    }
}

fn pattern(values: &[usize]) -> GluingPattern {
    let n = values.len() / 2;
    let start = (0..n).map(|i| values[2 * i]).collect();
    let end = (0..n).map(|i| values[2 * i + 1]).collect();
    GluingPattern::new(start, end).expect("fixture pattern is valid")
}

pub fn describe(d: &DecoratedPattern) -> String {
    let p = &d.pattern;
    let mut vals = Vec::new();
    for i in 0..p.n {
        vals.push(p.start[i].to_string());
        vals.push(p.end[i].to_string());
    }
    let labels = d
        .labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("P=({}) labels=({labels})", vals.join(","))
}

fn label_assignments(n: usize, allow_flip: bool) -> Vec<Vec<OutLabel>> {
    if !allow_flip {
        return vec![vec![OutLabel::Id; n]];
    }
    let mut out = Vec::new();
    for mask in 0..(1u32 << n) {
        let labels = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    OutLabel::Flip
                } else {
                    OutLabel::Id
                }
            })
            .collect();
        out.push(labels);
    }
    out
}

/// Deterministic triple sampling; the default seed gives a fixed stride.
fn sample_triples(num_vars: usize, count: usize, seed: u64) -> Vec<(VarId, VarId, VarId)> {
    let total = num_vars * num_vars * num_vars;
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    let mut out = Vec::with_capacity(count.min(total));
    if count >= total {
        for flat in 0..total {
            let a = flat / (num_vars * num_vars);
            let b = (flat / num_vars) % num_vars;
            let c = flat % num_vars;
            out.push((a as VarId, b as VarId, c as VarId));
        }
        return out;
    }
    let stride = (total / count).max(1);
    for k in 0..count {
        let jitter = if seed == 0 { 0 } else { next() % stride };
        let flat = (k * stride + jitter) % total;
        let a = flat / (num_vars * num_vars);
        let b = (flat / num_vars) % num_vars;
        let c = flat % num_vars;
        out.push((a as VarId, b as VarId, c as VarId));
    }
    out
}

impl Suite {
    /// CYBE residuals and flip-invariance for the standard r-matrices.
    pub fn check_cybe_suite(&self) -> Vec<CheckReport> {
        let mut out = Vec::new();
        for n in [2usize, 3, 4] {
            let t0 = Instant::now();
            let g = build_sl(n).expect("n >= 2");
            let r = standard_r_matrix(&g);
            let cybe_zero = check_cybe(&g, &r).is_zero();
            let t_inv = check_t_invariance(&g, &r).is_zero();
            let ms = t0.elapsed().as_millis() as u64;
            let target = format!("sl{n}");
            if cybe_zero && t_inv {
                out.push(CheckReport::pass("cybe", &target, ms));
            } else {
                out.push(CheckReport::fail(
                    "cybe",
                    &target,
                    serde_json::json!({"cybe_zero": cybe_zero, "t_invariant": t_inv}),
                    ms,
                ));
            }
        }
        for n in [3usize, 4] {
            let t0 = Instant::now();
            let g = build_sl(n).expect("n >= 2");
            let r = standard_r_matrix(&g);
            let flip = diagram_automorphism(&g, AutKind::Flip).expect("n >= 3");
            let ok = check_r_invariance(&r, &flip).is_zero();
            let ms = t0.elapsed().as_millis() as u64;
            let target = format!("sl{n} flip-invariance");
            if ok {
                out.push(CheckReport::pass("cybe", &target, ms));
            } else {
                out.push(CheckReport::fail(
                    "cybe",
                    &target,
                    serde_json::json!({"invariant": false}),
                    ms,
                ));
            }
        }
        out
    }

    /// Graph-automorphism orders of the simply-laced diagrams.
    pub fn check_out_table(&self) -> Vec<CheckReport> {
        let t0 = Instant::now();
        let cases: Vec<(char, usize, usize)> = vec![
            ('A', 1, 1),
            ('A', 2, 2),
            ('A', 3, 2),
            ('A', 5, 2),
            ('D', 4, 6),
            ('D', 5, 2),
            ('D', 6, 2),
            ('E', 6, 2),
            ('E', 7, 1),
            ('E', 8, 1),
        ];
        let mut out = Vec::new();
        for (kind, rank, expected) in cases {
            let got = dynkin_graph_aut_order(kind, rank);
            let target = format!("{kind}{rank}");
            let ms = t0.elapsed().as_millis() as u64;
            match got {
                Ok(v) if v == expected => out.push(CheckReport::pass("out_table", &target, ms)),
                Ok(v) => out.push(CheckReport::fail(
                    "out_table",
                    &target,
                    serde_json::json!({"expected": expected, "got": v}),
                    ms,
                )),
                Err(e) => out.push(CheckReport::error("out_table", &target, e.to_string())),
            }
        }
        out
    }

    /// Euler relation over all patterns with `n <= 5` plus the worked
    /// examples.
    pub fn check_patterns(&self) -> Vec<CheckReport> {
        let mut out = Vec::new();
        let t0 = Instant::now();
        let mut violations = Vec::new();
        for n in 1..=5usize {
            for p in GluingPattern::enumerate(n) {
                let (g, r) = surface_invariants(&p);
                if n != 2 * g + r - 1 {
                    violations.push(serde_json::json!({
                        "pattern": p.start.iter().zip(p.end.iter()).map(|(a,b)| vec![*a,*b]).collect::<Vec<_>>(),
                        "genus": g, "boundary": r
                    }));
                }
            }
        }
        let ms = t0.elapsed().as_millis() as u64;
        if violations.is_empty() {
            out.push(CheckReport::pass("patterns", "euler relation n<=5", ms));
        } else {
            out.push(CheckReport::fail(
                "patterns",
                "euler relation n<=5",
                serde_json::json!({ "violations": violations }),
                ms,
            ));
        }

        let t0 = Instant::now();
        let sphere = pattern(&[1, 2, 3, 4]);
        let torus = pattern(&[1, 3, 2, 4]);
        let ok = surface_invariants(&sphere) == (0, 3)
            && classify_pair(&sphere, 0, 1).expect("valid") == PairClass::PosUnlinked
            && surface_invariants(&torus) == (1, 1)
            && classify_pair(&torus, 0, 1).expect("valid") == PairClass::PosLinked;
        let ms = t0.elapsed().as_millis() as u64;
        if ok {
            out.push(CheckReport::pass("patterns", "worked examples", ms));
        } else {
            out.push(CheckReport::fail(
                "patterns",
                "worked examples",
                serde_json::json!({
                    "sphere": surface_invariants(&sphere),
                    "torus": surface_invariants(&torus)
                }),
                ms,
            ));
        }
        out
    }

    /// Form agreement between the half-edge and case-table presentations on
    /// every pattern with `n <= max_n` and every label assignment, on sl3.
    pub fn check_agree(&self, max_n: usize) -> Vec<CheckReport> {
        let g = build_sl(3).expect("sl3");
        let r = standard_r_matrix(&g);
        let mut configs = Vec::new();
        for n in 1..=max_n {
            for p in GluingPattern::enumerate(n) {
                for labels in label_assignments(n, true) {
                    configs.push(decorated(p.clone(), labels));
                }
            }
        }
        map_collect(self.mode, configs, |d| {
            let t0 = Instant::now();
            let target = describe(&d);
            match check_forms_agree(&d, &g, &r) {
                Ok(None) => {
                    CheckReport::pass("agree", &target, t0.elapsed().as_millis() as u64)
                }
                Ok(Some(cex)) => CheckReport::fail(
                    "agree",
                    &target,
                    serde_json::json!({"pair": cex.description, "difference": cex.difference}),
                    t0.elapsed().as_millis() as u64,
                ),
                Err(e) => CheckReport::error("agree", &target, e.to_string()),
            }
        })
    }

    /// Jacobi residuals: exhaustive on sl2 for `n <= 2`, sampled (>= 50
    /// triples) on sl3 two-edge patterns.
    pub fn check_jacobi_suite(&self) -> Vec<CheckReport> {
        let mut configs: Vec<(DecoratedPattern, usize, usize)> = Vec::new();
        for n in 1..=2usize {
            for p in GluingPattern::enumerate(n) {
                // sl2 admits only the trivial label
                configs.push((decorated(p, vec![OutLabel::Id; n]), 2, usize::MAX));
            }
        }
        for p in GluingPattern::enumerate(2) {
            configs.push((
                decorated(p, vec![OutLabel::Flip, OutLabel::Id]),
                3,
                60,
            ));
        }
        let seed = self.seed;
        map_collect(self.mode, configs, |(d, alg, count)| {
            let t0 = Instant::now();
            let g = build_sl(alg).expect("rank");
            let r = standard_r_matrix(&g);
            let target = format!("sl{alg} {}", describe(&d));
            let pi = match fock_rosly_bivector(&d, &g, &r) {
                Ok(pi) => pi,
                Err(e) => return CheckReport::error("jacobi", &target, e.to_string()),
            };
            let nv = pi.space.num_vars();
            let triples = if count == usize::MAX {
                sample_triples(nv, nv * nv * nv, seed)
            } else {
                sample_triples(nv, count, seed)
            };
            let bad = check_jacobi(&pi, &triples)
                .into_iter()
                .find(|(_, res)| !res.is_zero());
            let ms = t0.elapsed().as_millis() as u64;
            match bad {
                None => CheckReport::pass("jacobi", &target, ms),
                Some(((a, b, c), res)) => CheckReport::fail(
                    "jacobi",
                    &target,
                    serde_json::json!({
                        "triple": [pi.space.name(a), pi.space.name(b), pi.space.name(c)],
                        "residual": res.render_canonical(|v| pi.space.name(v)),
                    }),
                    ms,
                ),
            }
        })
    }

    /// Twisted-action compatibility of the Poisson bracket.
    pub fn check_equivariance_suite(&self) -> Vec<CheckReport> {
        let configs: Vec<(usize, DecoratedPattern)> = vec![
            (2, decorated(pattern(&[1, 2]), vec![OutLabel::Id])),
            (
                3,
                decorated(pattern(&[1, 3, 2, 4]), vec![OutLabel::Flip, OutLabel::Id]),
            ),
            (
                3,
                decorated(pattern(&[1, 2, 3, 4]), vec![OutLabel::Flip, OutLabel::Flip]),
            ),
        ];
        map_collect(self.mode, configs, |(alg, d)| {
            let t0 = Instant::now();
            let g = build_sl(alg).expect("rank");
            let r = standard_r_matrix(&g);
            let target = format!("sl{alg} {}", describe(&d));
            let pi = match fock_rosly_bivector(&d, &g, &r) {
                Ok(pi) => pi,
                Err(e) => return CheckReport::error("equivariance", &target, e.to_string()),
            };
            let ms_base = t0.elapsed().as_millis() as u64;
            match check_equivariance(&pi, &d) {
                None => CheckReport::pass(
                    "equivariance",
                    &target,
                    ms_base + t0.elapsed().as_millis() as u64,
                ),
                Some(cex) => CheckReport::fail(
                    "equivariance",
                    &target,
                    serde_json::json!({"pair": cex.description, "difference": cex.difference}),
                    t0.elapsed().as_millis() as u64,
                ),
            }
        })
    }

    /// The six two-edge class fixtures used by the quantisation and
    /// associativity suites.
    pub fn class_fixtures() -> Vec<(PairClass, GluingPattern)> {
        vec![
            (PairClass::PosUnlinked, pattern(&[1, 2, 3, 4])),
            (PairClass::PosLinked, pattern(&[1, 3, 2, 4])),
            (PairClass::PosNested, pattern(&[1, 4, 2, 3])),
            (PairClass::NegUnlinked, pattern(&[3, 4, 1, 2])),
            (PairClass::NegLinked, pattern(&[2, 4, 1, 3])),
            (PairClass::NegNested, pattern(&[2, 3, 1, 4])),
        ]
    }

    /// The flagship identity on sl3: commutator over h equals the Poisson
    /// bracket for all ordered generator pairs, on every class fixture and
    /// every label assignment.
    pub fn check_quantisation(&self) -> Vec<CheckReport> {
        let g = build_sl(3).expect("sl3");
        let r = standard_r_matrix(&g);
        let mut configs = Vec::new();
        for (class, p) in Self::class_fixtures() {
            for labels in label_assignments(2, true) {
                configs.push((class, decorated(p.clone(), labels)));
            }
        }
        let mode = self.mode;
        map_collect(self.mode, configs, |(class, d)| {
            let t0 = Instant::now();
            let target = format!("{class:?} {}", describe(&d));
            let table = match build_deformation_table(&d, &g, &r, Parallelism::Sequential) {
                Ok(t) => t,
                Err(e) => return CheckReport::error("quantisation", &target, e.to_string()),
            };
            let pi = match fock_rosly_bivector(&d, &g, &r) {
                Ok(pi) => pi,
                Err(e) => return CheckReport::error("quantisation", &target, e.to_string()),
            };
            let outcomes = verify_quantisation(&table, &pi, Parallelism::Sequential);
            let ms = t0.elapsed().as_millis() as u64;
            let _ = mode;
            match outcomes.iter().find(|o| !o.matches) {
                None => CheckReport::pass("quantisation", &target, ms),
                Some(o) => CheckReport::fail(
                    "quantisation",
                    &target,
                    serde_json::json!({
                        "pair": [table.space.name(o.f), table.space.name(o.g)],
                        "difference": o.difference,
                    }),
                    ms,
                ),
            }
        })
    }

    /// First-order associativity and equivariance of the pattern algebra.
    pub fn check_associativity(&self) -> Vec<CheckReport> {
        let mut configs: Vec<(usize, DecoratedPattern, usize)> = vec![
            (2, decorated(pattern(&[1, 2]), vec![OutLabel::Id]), usize::MAX),
            (3, decorated(pattern(&[1, 2]), vec![OutLabel::Flip]), usize::MAX),
        ];
        for (_, p) in Self::class_fixtures() {
            configs.push((
                3,
                decorated(p, vec![OutLabel::Flip, OutLabel::Flip]),
                200,
            ));
        }
        let seed = self.seed;
        map_collect(self.mode, configs, |(alg, d, count)| {
            let t0 = Instant::now();
            let g = build_sl(alg).expect("rank");
            let r = standard_r_matrix(&g);
            let target = format!("sl{alg} {}", describe(&d));
            let table = match build_deformation_table(&d, &g, &r, Parallelism::Sequential) {
                Ok(t) => t,
                Err(e) => return CheckReport::error("associativity", &target, e.to_string()),
            };
            let nv = table.space.num_vars();
            let triples = if count == usize::MAX {
                sample_triples(nv, nv * nv * nv, seed)
            } else {
                sample_triples(nv, count, seed)
            };
            let assoc = check_associativity_order1(&table, &triples);
            let equiv = check_equivariance_order1(&table);
            let ms = t0.elapsed().as_millis() as u64;
            match (assoc, equiv) {
                (None, None) => CheckReport::pass("associativity", &target, ms),
                (Some(cex), _) | (_, Some(cex)) => CheckReport::fail(
                    "associativity",
                    &target,
                    serde_json::json!({"where": cex.description, "difference": cex.difference}),
                    ms,
                ),
            }
        })
    }

    /// Finite-group module: worked examples, Burnside agreement for all
    /// `|G| <= 12`, `n <= 3`, and the groupoid-cardinality law.
    pub fn check_repvar(&self) -> Vec<CheckReport> {
        let mut out = Vec::new();
        let t0 = Instant::now();
        // worked examples on Z/5
        let z5 = FiniteGroup::cyclic(5);
        let twisted = TwistData {
            twists: vec![GroupAutomorphism::cyclic_unit(&z5, 2).expect("2 is a unit mod 5")],
        };
        let untwisted = TwistData {
            twists: vec![GroupAutomorphism::identity(&z5)],
        };
        let ok = orbit_count(&z5, &twisted) == Ok(1) && orbit_count(&z5, &untwisted) == Ok(5);
        let ms = t0.elapsed().as_millis() as u64;
        if ok {
            out.push(CheckReport::pass("repvar", "z5 orbit examples", ms));
        } else {
            out.push(CheckReport::fail(
                "repvar",
                "z5 orbit examples",
                serde_json::json!({
                    "twisted": format!("{:?}", orbit_count(&z5, &twisted)),
                    "untwisted": format!("{:?}", orbit_count(&z5, &untwisted)),
                }),
                ms,
            ));
        }

        // Burnside agreement and groupoid cardinality across built-ins
        let mut groups: Vec<(String, FiniteGroup)> = (2..=12usize)
            .map(|m| (format!("z{m}"), FiniteGroup::cyclic(m)))
            .collect();
        groups.push(("s3".into(), FiniteGroup::symmetric(3)));
        let jobs: Vec<(String, FiniteGroup, Vec<usize>)> = groups
            .into_iter()
            .flat_map(|(name, g)| {
                (1..=3usize).map(move |n| (name.clone(), g.clone(), vec![n]))
            })
            .map(|(name, g, ns)| (name, g, ns))
            .collect();
        let reports = map_collect(self.mode, jobs, |(name, g, ns)| {
            let n = ns[0];
            let t0 = Instant::now();
            // a few built-in twists: identity everywhere, plus one
            // nontrivial automorphism when available
            let mut twist_sets: Vec<TwistData> = vec![TwistData {
                twists: vec![GroupAutomorphism::identity(&g); n],
            }];
            if name.starts_with('z') {
                let m = g.order as u64;
                if let Some(u) = (2..m).find(|u| num_integer::gcd(*u, m) == 1) {
                    let a = GroupAutomorphism::cyclic_unit(&g, u).expect("unit");
                    let mut twists = vec![GroupAutomorphism::identity(&g); n];
                    twists[0] = a;
                    twist_sets.push(TwistData { twists });
                }
            } else {
                let a = GroupAutomorphism::inner(&g, 1).expect("element 1 exists");
                let mut twists = vec![GroupAutomorphism::identity(&g); n];
                twists[0] = a;
                twist_sets.push(TwistData { twists });
            }
            let target = format!("{name} n={n}");
            for rho in &twist_sets {
                // orbit_count asserts union-find == Burnside internally
                match orbit_count(&g, rho) {
                    Ok(_) => {}
                    Err(e) => return CheckReport::error("repvar", &target, e.to_string()),
                }
                let card = match groupoid_cardinality(&g, rho) {
                    Ok(c) => c,
                    Err(e) => return CheckReport::error("repvar", &target, e.to_string()),
                };
                let mut expected = rat(1);
                for _ in 1..n {
                    expected *= rat(g.order as i64);
                }
                if card != expected {
                    return CheckReport::fail(
                        "repvar",
                        &target,
                        serde_json::json!({
                            "groupoid_cardinality": card.to_string(),
                            "expected": expected.to_string(),
                        }),
                        t0.elapsed().as_millis() as u64,
                    );
                }
            }
            CheckReport::pass("repvar", &target, t0.elapsed().as_millis() as u64)
        });
        out.extend(reports);
        out
    }

    /// Pattern-independence fixture: brackets of `tr(g1)`, `tr(g2)`,
    /// `tr(g1 g2)` agree across `P = (1,3,2,4)` and `P' = (2,4,1,3)` under
    /// the generator correspondence `(g1, g2) -> (g2, g1)`.
    pub fn check_independence(&self) -> Vec<CheckReport> {
        let t0 = Instant::now();
        let g = build_sl(2).expect("sl2");
        let r = standard_r_matrix(&g);
        let d1 = decorated(pattern(&[1, 3, 2, 4]), vec![OutLabel::Id, OutLabel::Id]);
        let d2 = decorated(pattern(&[2, 4, 1, 3]), vec![OutLabel::Id, OutLabel::Id]);
        let target = "tr fixtures (1,3,2,4) vs (2,4,1,3)";
        let pi1 = match fock_rosly_bivector(&d1, &g, &r) {
            Ok(pi) => pi,
            Err(e) => return vec![CheckReport::error("independence", target, e.to_string())],
        };
        let pi2 = match fock_rosly_bivector(&d2, &g, &r) {
            Ok(pi) => pi,
            Err(e) => return vec![CheckReport::error("independence", target, e.to_string())],
        };
        let s = pi1.space;
        let words: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![0, 1]];
        let swap_word = |w: &Vec<usize>| w.iter().map(|&e| 1 - e).collect::<Vec<_>>();
        let relabel = |p: &SparsePoly| {
            let mut out = SparsePoly::zero();
            for (m, c) in p.terms() {
                let mapped = crate::ring::Monomial::from_pairs(m.iter().map(|&(v, e)| {
                    let (edge, i, j) = s.decode(v);
                    (s.var(1 - edge, i, j), e)
                }));
                out.add_term(mapped, c.clone());
            }
            out
        };
        for w1 in &words {
            for w2 in &words {
                let lhs = relabel(&pi1.bracket(&s.trace_word(w1), &s.trace_word(w2)));
                let rhs = pi2.bracket(&s.trace_word(&swap_word(w1)), &s.trace_word(&swap_word(w2)));
                if lhs != rhs {
                    return vec![CheckReport::fail(
                        "independence",
                        target,
                        serde_json::json!({
                            "words": [format!("{w1:?}"), format!("{w2:?}")],
                            "difference": lhs.sub(&rhs).render_canonical(|v| s.name(v)),
                        }),
                        t0.elapsed().as_millis() as u64,
                    )];
                }
            }
        }
        vec![CheckReport::pass(
            "independence",
            target,
            t0.elapsed().as_millis() as u64,
        )]
    }

    /// The full default suite.
    pub fn run_all(&self) -> Vec<CheckReport> {
        let mut reports = Vec::new();
        reports.extend(self.check_cybe_suite());
        reports.extend(self.check_out_table());
        reports.extend(self.check_patterns());
        reports.extend(self.check_agree(3));
        reports.extend(self.check_jacobi_suite());
        reports.extend(self.check_equivariance_suite());
        reports.extend(self.check_quantisation());
        reports.extend(self.check_associativity());
        reports.extend(self.check_repvar());
        reports.extend(self.check_independence());
        crate::report::sort_reports(&mut reports);
        reports
    }
}

/// Runs the named Poisson checks on one decorated pattern (the `poisson`
/// subcommand).
pub fn poisson_checks_for(
    d: &DecoratedPattern,
    g: &LieAlgebraA,
    r: &ClassicalRMatrix,
    checks: &[String],
    mode: Parallelism,
    seed: u64,
) -> Vec<CheckReport> {
    let target = describe(d);
    let mut reports = Vec::new();
    for check in checks {
        let t0 = Instant::now();
        match check.as_str() {
            "jacobi" => {
                let pi = match fock_rosly_bivector(d, g, r) {
                    Ok(pi) => pi,
                    Err(e) => {
                        reports.push(CheckReport::error("jacobi", &target, e.to_string()));
                        continue;
                    }
                };
                let nv = pi.space.num_vars();
                let budget = if nv <= 8 { nv * nv * nv } else { 60 };
                let triples = sample_triples(nv, budget, seed);
                let results = map_collect(mode, triples, |t| {
                    let (a, b, c) = t;
                    check_jacobi(&pi, &[(a, b, c)]).pop().expect("one result")
                });
                match results.into_iter().find(|(_, res)| !res.is_zero()) {
                    None => reports.push(CheckReport::pass(
                        "jacobi",
                        &target,
                        t0.elapsed().as_millis() as u64,
                    )),
                    Some(((a, b, c), res)) => reports.push(CheckReport::fail(
                        "jacobi",
                        &target,
                        serde_json::json!({
                            "triple": [pi.space.name(a), pi.space.name(b), pi.space.name(c)],
                            "residual": res.render_canonical(|v| pi.space.name(v)),
                        }),
                        t0.elapsed().as_millis() as u64,
                    )),
                }
            }
            "agree" => match check_forms_agree(d, g, r) {
                Ok(None) => reports.push(CheckReport::pass(
                    "agree",
                    &target,
                    t0.elapsed().as_millis() as u64,
                )),
                Ok(Some(cex)) => reports.push(CheckReport::fail(
                    "agree",
                    &target,
                    serde_json::json!({"pair": cex.description, "difference": cex.difference}),
                    t0.elapsed().as_millis() as u64,
                )),
                Err(e) => reports.push(CheckReport::error("agree", &target, e.to_string())),
            },
            "equivariance" => {
                let pi = match fock_rosly_bivector(d, g, r) {
                    Ok(pi) => pi,
                    Err(e) => {
                        reports.push(CheckReport::error("equivariance", &target, e.to_string()));
                        continue;
                    }
                };
                match check_equivariance(&pi, d) {
                    None => reports.push(CheckReport::pass(
                        "equivariance",
                        &target,
                        t0.elapsed().as_millis() as u64,
                    )),
                    Some(cex) => reports.push(CheckReport::fail(
                        "equivariance",
                        &target,
                        serde_json::json!({"pair": cex.description, "difference": cex.difference}),
                        t0.elapsed().as_millis() as u64,
                    )),
                }
            }
            other => {
                reports.push(CheckReport::error(
                    other,
                    &target,
                    format!("unknown check `{other}` (expected jacobi, agree, equivariance)"),
                ));
            }
        }
    }
    reports
}

/// Runs the quantisation verification on one decorated pattern (the
/// `verify quantisation` subcommand): a per-pair summary plus the
/// supporting STS/table comparison.
pub fn quantisation_check_for(
    d: &DecoratedPattern,
    g: &LieAlgebraA,
    r: &ClassicalRMatrix,
    mode: Parallelism,
) -> (Vec<CheckReport>, Vec<crate::rea::PairOutcome>, crate::poisson::CoordSpace) {
    let target = describe(d);
    let t0 = Instant::now();
    let space = crate::poisson::CoordSpace::new(d.pattern.n, g.n);
    let table = match build_deformation_table(d, g, r, mode) {
        Ok(t) => t,
        Err(e) => {
            return (
                vec![CheckReport::error("quantisation", &target, e.to_string())],
                Vec::new(),
                space,
            )
        }
    };
    let pi = match fock_rosly_bivector(d, g, r) {
        Ok(pi) => pi,
        Err(e) => {
            return (
                vec![CheckReport::error("quantisation", &target, e.to_string())],
                Vec::new(),
                space,
            )
        }
    };
    let outcomes = verify_quantisation(&table, &pi, mode);
    let ms = t0.elapsed().as_millis() as u64;
    let report = match outcomes.iter().find(|o| !o.matches) {
        None => CheckReport::pass("quantisation", &target, ms),
        Some(o) => CheckReport::fail(
            "quantisation",
            &target,
            serde_json::json!({
                "pair": [table.space.name(o.f), table.space.name(o.g)],
                "difference": o.difference,
            }),
            ms,
        ),
    };
    (vec![report], outcomes, table.space)
}

/// Resolves the algebra for a pattern file: explicit choice, else the
/// file's Dynkin tag, else sl3.
pub fn algebra_for(d: &DecoratedPattern, explicit: Option<&str>) -> Result<LieAlgebraA, String> {
    let name = match explicit {
        Some(s) => s.to_string(),
        None => match d.dynkin_tag.as_deref() {
            Some(tag) => {
                let rank: usize = tag
                    .trim_start_matches(['A', 'a'])
                    .parse()
                    .map_err(|_| format!("unsupported Dynkin tag `{tag}` (A-series only)"))?;
                format!("sl{}", rank + 1)
            }
            None => "sl3".to_string(),
        },
    };
    let n: usize = name
        .trim_start_matches("sl")
        .parse()
        .map_err(|_| format!("unknown algebra `{name}` (use sl2, sl3, sl4)"))?;
    if !(2..=4).contains(&n) {
        return Err(format!("algebra sl{n} out of supported range (sl2..sl4)"));
    }
    build_sl(n).map_err(|e| e.to_string())
}

/// Sanity used by tests: groupoid cardinality target.
pub fn order_power(g: &FiniteGroup, n: usize) -> Rational {
    let mut out = rat(1);
    for _ in 1..n {
        out *= rat(g.order as i64);
    }
    out
}
