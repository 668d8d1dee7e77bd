//! The `g ≡ 3 mod 4` symmetry: `(c,d) ↦ (c',d)` with
//! `c' = ((g−3)/4 − d − c)/(2c+1)`, reversing the wall order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flips::FlipRecord;
use crate::lattice::{discriminant_action, theta_isometry, DiscriminantAction, GenusContext, MukaiVector};
use crate::walls::{WallPair, WallSystem};

pub fn dual_pair(c: i64, d: i64, ctx: &GenusContext) -> Result<WallPair> {
    ctx.require_residue(3)?;
    WallPair::new(c, d, ctx)?;
    let q = 2 * c + 1;
    let numer = (ctx.genus() - 3) / 4 - d - c;
    if numer < 0 || numer % q != 0 {
        return Err(Error::Invariant(format!(
            "dual of ({c},{d}) is not integral: {numer}/{q}"
        )));
    }
    WallPair::new(numer / q, d, ctx)
}

pub fn is_self_dual(pair: &WallPair, ctx: &GenusContext) -> bool {
    let q = 2 * pair.c + 1;
    ctx.genus() - 1 - 4 * pair.d == 2 * q * q
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityTable {
    pub pair_map: Vec<((i64, i64), (i64, i64))>,
    pub group_map: Vec<(i64, i64)>,
    pub self_dual: Vec<(i64, i64)>,
}

impl DualityTable {
    pub fn image(&self, key: (i64, i64)) -> Option<(i64, i64)> {
        self.pair_map.iter().find(|(a, _)| *a == key).map(|(_, b)| *b)
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(what()))
    }
}

pub fn build_duality_table(ctx: &GenusContext, walls: &WallSystem) -> Result<DualityTable> {
    ctx.require_residue(3)?;
    let nu = walls.nu;
    let mut pair_map = Vec::new();
    let mut self_dual = Vec::new();
    for (i, p) in walls.indexed_pairs() {
        let q = dual_pair(p.c, p.d, ctx)?;
        let back = dual_pair(q.c, q.d, ctx)?;
        check(back.key() == p.key(), || format!("dual map not involutive at {}", p.label()))?;
        check(&p.slope * &q.slope == crate::exact::rat(1, 1), || {
            format!("μ·μ' ≠ 1 at {}", p.label())
        })?;
        let (a, b) = (FlipRecord::new(p, ctx)?, FlipRecord::new(&q, ctx)?);
        check(a.k_plus == b.k_minus && a.k_minus == b.k_plus, || {
            format!("k± not swapped at {}", p.label())
        })?;
        check(walls.index_of_pair(q.c, q.d) == Some(nu - i), || {
            format!("{} at wall {i} does not land on wall {}", p.label(), nu - i)
        })?;
        if q.key() == p.key() {
            check(is_self_dual(p, ctx), || format!("{} fixed but not self-dual", p.label()))?;
            self_dual.push(p.key());
        }
        pair_map.push((p.key(), q.key()));
    }
    let group_map = walls.indices().map(|i| (i, nu - i)).collect();
    Ok(DualityTable {
        pair_map,
        group_map,
        self_dual,
    })
}

/// `ϑ(v_{c,d})`, which should equal `v − v_{c',d'}`.
pub fn vartheta_wall_image(pair: &WallPair, ctx: &GenusContext) -> Result<MukaiVector> {
    theta_isometry(ctx)?.apply(&pair.vector)
}

pub fn non_isomorphism_certificate(ctx: &GenusContext) -> Result<DiscriminantAction> {
    discriminant_action(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walls::build_wall_system;

    fn ctx(g: i64) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn dual_pairs_g27() {
        let c = ctx(27);
        assert_eq!(dual_pair(1, -1, &c).unwrap().key(), (2, -1));
        assert_eq!(dual_pair(0, 0, &c).unwrap().key(), (6, 0));
        assert_eq!(dual_pair(0, 6, &c).unwrap().key(), (0, 6));
        assert!(matches!(dual_pair(0, 0, &ctx(28)), Err(Error::WrongResidue { .. })));
    }

    #[test]
    fn table_g27() {
        let c = ctx(27);
        let t = build_duality_table(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(t.self_dual, vec![(0, 6), (1, 2)]);
        assert!(t.group_map.contains(&(-1, 15)));
        assert_eq!(t.image((0, -1)), Some((7, -1)));
        assert_eq!(t.pair_map.len(), 18);
    }

    #[test]
    fn table_g7() {
        let c = ctx(7);
        let t = build_duality_table(&c, &build_wall_system(&c)).unwrap();
        assert!(t.self_dual.contains(&(0, 1)));
    }

    #[test]
    fn theta_images() {
        let c = ctx(27);
        let img = |cc, dd| vartheta_wall_image(&WallPair::new(cc, dd, &c).unwrap(), &c).unwrap();
        assert_eq!(img(0, 0), MukaiVector::from_i64(-13, 7, -98));
        assert_eq!(img(0, -1), MukaiVector::from_i64(-15, 8, -111));
        let c = ctx(7);
        let p = WallPair::new(0, 1, &c).unwrap();
        assert_eq!(vartheta_wall_image(&p, &c).unwrap(), &c.v() - &p.vector);
    }

    #[test]
    fn certificates() {
        for (g, m) in [(7, 7), (27, 27), (11, 11)] {
            let a = non_isomorphism_certificate(&ctx(g)).unwrap();
            assert_eq!(a.multiplier, m);
            assert!(!a.is_trivial);
        }
    }
}
