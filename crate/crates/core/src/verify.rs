//! Per-genus invariant suite. Every check goes through a second route where
//! one exists: brute-force box search, Riemann–Roch, the Chern-character
//! form of `Ψ`, or the threshold form of the Fano test.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::cones::{chamber_table, class_from_wall_degrees, fano_threshold, generator_vectors, restrict_generators, PicClass};
use crate::duality::{build_duality_table, is_self_dual, non_isomorphism_certificate, vartheta_wall_image};
use crate::error::Result;
use crate::exact::{int, rat, Rational};
use crate::flips::{divisorial_wall_data, sequence_summary, CrossingKind, FlipRecord};
use crate::lattice::{dual_twist_vector, mukai_pairing, mukai_square, theta_isometry, GenusContext, Parity};
use crate::rr::{dual_twist_oracle, k_minus_oracle, k_plus_oracle};
use crate::sod::{block_inventory, theorem_verdicts, visitor_inequality};
use crate::walls::{build_wall_system, enumerate_pairs, WallSystem};
use crate::cones::ModelKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub genus: i64,
    pub invariant: &'static str,
    pub witness: Option<(i64, i64)>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusCheck {
    pub genus: i64,
    pub pairs_checked: usize,
    pub failures: Vec<Failure>,
}

impl GenusCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Admissible pairs found by testing every `(c, d)` in
/// `0 ≤ c ≤ g, −1 ≤ d ≤ g` straight from the definition.
pub fn brute_force_pairs(ctx: &GenusContext) -> Vec<(i64, i64)> {
    let g = ctx.genus();
    let mut out = Vec::new();
    for c in 0..=g {
        let q = 2 * c + 1;
        for d in -1..=g {
            let divisible = ((g - 1) as i128 * (c * c) as i128 - d as i128) % q as i128 == 0;
            let numer = match ctx.parity() {
                Parity::Even => (g - 1 - 4 * d) as i128 - (q * q) as i128,
                Parity::Odd => (g - 1 - 4 * d) as i128,
            };
            if divisible && numer > 0 {
                out.push((c, d));
            }
        }
    }
    out
}

struct Checker {
    genus: i64,
    failures: Vec<Failure>,
}

impl Checker {
    fn expect(&mut self, ok: bool, invariant: &'static str, witness: Option<(i64, i64)>, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(Failure {
                genus: self.genus,
                invariant,
                witness,
                detail: detail(),
            });
        }
    }

    fn ok<T>(&mut self, r: Result<T>, invariant: &'static str, witness: Option<(i64, i64)>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.expect(false, invariant, witness, || e.to_string());
                None
            }
        }
    }
}

pub fn check_genus(g: i64) -> GenusCheck {
    let mut ck = Checker {
        genus: g,
        failures: Vec::new(),
    };
    let Some(ctx) = ck.ok(GenusContext::new(g), "lattice.context", None) else {
        return GenusCheck {
            genus: g,
            pairs_checked: 0,
            failures: ck.failures,
        };
    };
    let walls = build_wall_system(&ctx);
    check_enumeration(&mut ck, &ctx, &walls);
    check_flips(&mut ck, &ctx, &walls);
    check_cones(&mut ck, &ctx, &walls);
    check_sod(&mut ck, &ctx, &walls);
    if ctx.is_dual_case() {
        check_duality(&mut ck, &ctx, &walls);
    }
    if ctx.residue_mod_4() == 0 {
        check_divisorial(&mut ck, &ctx);
    }
    GenusCheck {
        genus: g,
        pairs_checked: walls.pair_count(),
        failures: ck.failures,
    }
}

fn check_enumeration(ck: &mut Checker, ctx: &GenusContext, walls: &WallSystem) {
    let listed: Vec<(i64, i64)> = enumerate_pairs(ctx).iter().map(|p| p.key()).collect();
    let fast: BTreeSet<_> = listed.iter().copied().collect();
    let brute: BTreeSet<_> = brute_force_pairs(ctx).into_iter().collect();
    let stray = fast.symmetric_difference(&brute).next().copied();
    ck.expect(fast == brute && fast.len() == listed.len(), "enumeration.box", stray, || {
        format!("{} listed vs {} by brute force", listed.len(), brute.len())
    });

    let ordered = walls
        .indexed_pairs()
        .zip(walls.indexed_pairs().skip(1))
        .all(|((i, a), (j, b))| (i < j && a.slope > b.slope) || (i == j && a.slope == b.slope && a.c < b.c));
    ck.expect(ordered, "enumeration.order", None, || "pairs out of order".into());

    let keys = |i| walls.group(i).map(|g| g.iter().map(|p| p.key()).collect::<Vec<_>>());
    ck.expect(keys(-1) == Some(vec![(0, -1)]), "walls.group_minus_one", None, || format!("{:?}", keys(-1)));
    ck.expect(keys(0) == Some(vec![(0, 0)]), "walls.group_zero", None, || format!("{:?}", keys(0)));

    let expected_nu = if ctx.is_dual_case() { walls.eta - 1 } else { walls.eta + 1 };
    ck.expect(walls.nu == expected_nu, "walls.nu", None, || format!("nu = {}", walls.nu));

    for (_, p) in walls.indexed_pairs() {
        let q = 2 * p.c + 1;
        let t = match ctx.parity() {
            Parity::Even => &p.slope * rat(2 * q, 1),
            Parity::Odd => &p.slope * rat(q, 1),
        };
        ck.expect(t.is_integer() && t == rat(p.t, 1) && p.t > 0, "walls.t_positive_integer", Some(p.key()), || {
            format!("t = {t}")
        });
        ck.expect(mukai_square(&p.vector, ctx) == int(2 * p.d), "lattice.vector_square", Some(p.key()), || {
            format!("v^2 = {}", mukai_square(&p.vector, ctx))
        });
        let v = ctx.v();
        let complement = &v - &p.vector;
        ck.expect(dual_twist_vector(&p.vector, ctx) == complement, "lattice.psi_complement", Some(p.key()), || {
            format!("psi = {}", dual_twist_vector(&p.vector, ctx))
        });
        if let Some(w) = ck.ok(dual_twist_oracle(&p.vector, ctx), "rr.psi_route", Some(p.key())) {
            ck.expect(w == complement, "rr.psi_route", Some(p.key()), || format!("ch route gives {w}"));
        }
    }
}

fn check_flips(ck: &mut Checker, ctx: &GenusContext, walls: &WallSystem) {
    let g = ctx.genus();
    let Some(summary) = ck.ok(sequence_summary(ctx, walls), "flips.sequence", None) else {
        return;
    };
    for (i, r) in summary.records() {
        let key = Some(r.pair.key());
        let (c, d) = r.pair.key();
        let q = rat(2 * c + 1, 1);
        ck.expect(r.k_plus + r.k_minus == g - 1 - 2 * d && r.ext1_dim == g - 1 - 2 * d, "flips.rank_sum", key, || {
            format!("k+ + k- = {}, ext1 = {}", r.k_plus + r.k_minus, r.ext1_dim)
        });
        let shift = match ctx.parity() {
            Parity::Even => rat(1, 1),
            Parity::Odd => rat(2, 1),
        };
        let diff = &q * (rat(2, 1) * &r.pair.slope - shift);
        ck.expect(diff == rat(r.gain(), 1), "flips.rank_difference", key, || format!("expected {diff}, got {}", r.gain()));
        ck.expect(r.moduli_dim == 2 * d + 2, "flips.moduli_dim", key, || format!("dim = {}", r.moduli_dim));
        ck.expect(
            r.minus_bundle_dim == r.k_minus - 1 + r.moduli_dim && r.plus_bundle_dim == r.k_plus - 1 + r.moduli_dim,
            "flips.bundle_dims",
            key,
            || format!("P(V-) = {}, P(V+) = {}", r.minus_bundle_dim, r.plus_bundle_dim),
        );
        if c == 0 {
            ck.expect(r.moduli_label == format!("Hilb^{}(X)", d + 1), "flips.hilbert_label", key, || r.moduli_label.clone());
        }
        if let Some(kp) = ck.ok(k_plus_oracle(c, d, ctx), "rr.k_plus", key) {
            ck.expect(kp == r.k_plus, "rr.k_plus", key, || format!("oracle {kp}, formula {}", r.k_plus));
        }
        if let Some(km) = ck.ok(k_minus_oracle(c, d, ctx), "rr.k_minus", key) {
            ck.expect(km == r.k_minus, "rr.k_minus", key, || format!("oracle {km}, formula {}", r.k_minus));
        }
        let _ = i;
    }

    if let Some(x) = summary.crossing(0) {
        let r = &x.records[0];
        ck.expect((r.k_plus, r.k_minus) == (g - 2, 1), "flips.blowup_ranks", Some((0, 0)), || {
            format!("({}, {})", r.k_plus, r.k_minus)
        });
    }
    for x in &summary.crossings {
        if (1..summary.nu).contains(&x.index) {
            let small = x.kind == CrossingKind::SmallFlip && x.records.iter().all(|r| r.min_rank() >= 2);
            let w = x.records.iter().find(|r| r.min_rank() < 2).map(|r| r.pair.key());
            ck.expect(small, "flips.small_flips", w, || format!("crossing {} is {:?}", x.index, x.kind));
        }
    }
    if ctx.is_dual_case() {
        let eta = summary.eta;
        let single = |i: i64| summary.crossing(i).filter(|x| x.records.len() == 1).map(|x| (x.kind, &x.records[0]));
        let ok = matches!(single(eta - 1), Some((CrossingKind::DivisorialContraction, r))
            if r.pair.key() == ((g - 3) / 4, 0) && r.k_plus == 1);
        ck.expect(ok, "flips.contraction_wall", Some(((g - 3) / 4, 0)), || "k+ = 1 expected at wall η−1".into());
        let ok = matches!(single(eta), Some((CrossingKind::TerminalDivisorial, r))
            if r.pair.key() == ((g + 1) / 4, -1) && r.k_plus == 0);
        ck.expect(ok, "flips.terminal_wall", Some(((g + 1) / 4, -1)), || "k+ = 0 expected at wall η".into());
    } else {
        let all_small = summary.crossings.iter().filter(|x| x.index >= 1).all(|x| x.kind == CrossingKind::SmallFlip);
        ck.expect(all_small, "flips.no_divisorial", None, || "non-small crossing".into());
    }
}

fn check_cones(ck: &mut Checker, ctx: &GenusContext, walls: &WallSystem) {
    let (wf, wl) = generator_vectors(ctx);
    let (f, l) = restrict_generators(ctx);
    let routes = class_from_wall_degrees(&wf, ctx).ok() == Some(f) && class_from_wall_degrees(&wl, ctx).ok() == Some(l);
    ck.expect(routes, "cones.degree_route", None, || "degree equations disagree".into());

    let Some(table) = ck.ok(chamber_table(ctx, walls), "cones.table", None) else {
        return;
    };
    let theta = table.theta_g.clone();
    let tiled = table.chambers.first().map(|c| c.lower.clone()) == Some(PicClass::int(2, 0))
        && table.chambers.last().map(|c| c.upper.clone()) == Some(PicClass::new(rat(2, 1), theta.clone()))
        && table.chambers.windows(2).all(|w| w[0].upper == w[1].lower && w[0].lower.n < w[0].upper.n);
    ck.expect(tiled, "cones.tiling", None, || "chambers do not tile [O(2,0), O(2,θ)]".into());

    let thr = fano_threshold(ctx);
    let slopes = walls.slopes();
    let straddle: Vec<i64> = (1..=walls.nu)
        .filter(|&i| {
            let hi = walls.slope(i - 1).expect("wall");
            let lo = if i == walls.nu { Rational::zero() } else { walls.slope(i).expect("wall").clone() };
            hi > &thr && thr > lo
        })
        .collect();
    if ctx.is_dual_case() {
        let on_one = walls.index_of_slope(&rat(1, 1));
        ck.expect(
            table.fano_index.is_none() && table.anticanonical_walls.len() == 1 && on_one == table.anticanonical_walls.first().copied(),
            "cones.weak_fano_wall",
            None,
            || format!("walls through −K: {:?}", table.anticanonical_walls),
        );
        ck.expect(straddle.is_empty(), "cones.threshold_route", None, || format!("{straddle:?}"));
    } else {
        ck.expect(
            table.fano_index.is_some() && straddle == table.fano_index.into_iter().collect::<Vec<_>>(),
            "cones.fano_unique",
            None,
            || format!("fano {:?}, straddle {straddle:?}", table.fano_index),
        );
    }
    if ctx.parity() == Parity::Even {
        ck.expect(!slopes.contains(&rat(1, 2)), "cones.no_half_slope", None, || "slope ½ present".into());
    }
    if ctx.residue_mod_4() == 1 {
        ck.expect(!slopes.contains(&rat(1, 1)), "cones.no_unit_slope", None, || "slope 1 present".into());
    }
}

fn check_sod(ck: &mut Checker, ctx: &GenusContext, walls: &WallSystem) {
    let g = ctx.genus();
    let Some(verdict) = ck.ok(theorem_verdicts(ctx, walls), "sod.verdict", None) else {
        return;
    };
    let weak = verdict.verdict == ModelKind::WeakFano;
    ck.expect(weak == ctx.is_dual_case(), "sod.verdict_parity", None, || format!("{:?}", verdict.verdict));
    for v in &verdict.visitors {
        if let Some((c, d)) = v.pair {
            let p = walls.find_pair(c, d).expect("visitor pair enumerated");
            ck.expect(v.strict == visitor_inequality(p, ctx), "sod.visitor_inequality", v.pair, || {
                format!("strict flag {} disagrees", v.strict)
            });
        }
    }

    let Some(inv) = ck.ok(block_inventory(ctx, walls), "sod.inventory", None) else {
        return;
    };
    ck.expect(inv.blocks.iter().all(|b| b.multiplicity >= 1), "sod.multiplicities", None, || {
        format!("{:?}", inv.multiplicities())
    });
    // Recount from slopes alone: every pair past the blow-up wall whose slope
    // clears the Fano threshold contributes k⁺ − k⁻.
    let thr = fano_threshold(ctx);
    let mut expected = (g + 1) + (g - 3);
    for (i, p) in walls.indexed_pairs() {
        if i >= 1 && p.slope >= thr {
            if let Some(r) = ck.ok(FlipRecord::new(p, ctx), "sod.recount", Some(p.key())) {
                expected += r.gain();
            }
        }
    }
    ck.expect(inv.total() == expected, "sod.recount", None, || format!("ledger {} vs recount {expected}", inv.total()));
}

fn check_duality(ck: &mut Checker, ctx: &GenusContext, walls: &WallSystem) {
    let g = ctx.genus();
    if let Some(table) = ck.ok(build_duality_table(ctx, walls), "duality.table", None) {
        let expected: Vec<_> = walls.indexed_pairs().filter(|(_, p)| is_self_dual(p, ctx)).map(|(_, p)| p.key()).collect();
        ck.expect(
            table.self_dual == expected && table.self_dual.contains(&(0, (g - 3) / 4)),
            "duality.self_dual",
            None,
            || format!("{:?}", table.self_dual),
        );
        for (a, b) in &table.pair_map {
            ck.expect(a.1 == b.1, "duality.same_d", Some(*a), || format!("{a:?} -> {b:?}"));
            let p = walls.find_pair(a.0, a.1).expect("enumerated");
            let q = walls.find_pair(b.0, b.1).expect("enumerated");
            if let Some(img) = ck.ok(vartheta_wall_image(p, ctx), "duality.theta_image", Some(*a)) {
                let want = &ctx.v() - &q.vector;
                ck.expect(img == want, "duality.theta_image", Some(*a), || format!("{img} vs {want}"));
            }
        }
    }
    if let Some(theta) = ck.ok(theta_isometry(ctx), "lattice.theta", None) {
        ck.expect(theta.preserves_pairing(ctx) && theta.is_integral(), "lattice.theta", None, || "not an integral isometry".into());
        let v = ctx.v();
        ck.expect(theta.apply(&v).ok() == Some(v.clone()), "lattice.theta_fixes_v", None, || "ϑ(v) ≠ v".into());
    }
    if let Some(a) = ck.ok(non_isomorphism_certificate(ctx), "duality.certificate", None) {
        ck.expect(
            a.modulus == 2 * g - 2 && a.multiplier == g.rem_euclid(2 * g - 2) && a.squares_to_one() && !a.is_trivial,
            "duality.certificate",
            None,
            || format!("{a:?}"),
        );
    }
}

fn check_divisorial(ck: &mut Checker, ctx: &GenusContext) {
    let g = ctx.genus();
    let Some(data) = ck.ok(divisorial_wall_data(ctx), "divisorial.data", None) else {
        return;
    };
    let a = &data.spherical_vector;
    ck.expect(
        mukai_square(a, ctx) == int(-2) && mukai_pairing(a, &ctx.v(), ctx).is_zero(),
        "divisorial.spherical",
        None,
        || format!("{a}"),
    );
    let strata_ok = data.strata.iter().enumerate().all(|(n, s)| {
        s.k == n as i64 + 1 && s.b_k_square == 2 * g - 2 - 2 * s.k * s.k && s.b_k_square >= -2
    }) && (data.strata.len() as i64 + 1).pow(2) > g;
    ck.expect(strata_ok, "divisorial.strata", None, || format!("{} strata", data.strata.len()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_matches_tables() {
        let c = GenusContext::new(27).unwrap();
        assert_eq!(brute_force_pairs(&c).len(), 18);
        let c = GenusContext::new(28).unwrap();
        assert_eq!(brute_force_pairs(&c).len(), 10);
    }

    #[test]
    fn table_genera_pass() {
        for g in [4, 5, 6, 7, 8, 27, 28] {
            let r = check_genus(g);
            assert!(r.passed(), "{:?}", r.failures);
        }
        assert_eq!(check_genus(27).pairs_checked, 18);
    }

    #[test]
    fn invalid_genus_is_reported() {
        let r = check_genus(3);
        assert_eq!(r.failures[0].invariant, "lattice.context");
    }
}
