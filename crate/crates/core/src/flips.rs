//! Flip numerics per wall: the ranks `k±`, the flipped loci, the kind of
//! each crossing, and the Brill–Noether wall data when `4 | g`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, rat, rational_to_i64, to_i64};
use crate::lattice::{mukai_pairing, mukai_square, GenusContext, MukaiVector};
use crate::walls::{WallPair, WallSystem};

fn rank_formulas(pair: &WallPair, ctx: &GenusContext) -> Result<(i64, i64)> {
    let (c, d, g) = (pair.c, pair.d, ctx.genus());
    let q = 2 * c + 1;
    let base = rat(g - 1 - 4 * d, 1) - rat(q, 1) * rat(q, 1);
    let plus = rat(c + 1, q) * &base + rat(q * c + d, 1);
    let minus = rat(c, q) * &base + rat(q * (1 + c) + d, 1);
    let kp = rational_to_i64(&plus, &format!("k+({c},{d})"))?;
    let km = rational_to_i64(&minus, &format!("k-({c},{d})"))?;
    if kp < 0 || km < 0 {
        return Err(Error::Invariant(format!("negative rank at ({c},{d}): {kp}, {km}")));
    }
    Ok((kp, km))
}

pub fn k_plus(c: i64, d: i64, ctx: &GenusContext) -> Result<i64> {
    Ok(rank_formulas(&WallPair::new(c, d, ctx)?, ctx)?.0)
}

pub fn k_minus(c: i64, d: i64, ctx: &GenusContext) -> Result<i64> {
    Ok(rank_formulas(&WallPair::new(c, d, ctx)?, ctx)?.1)
}

pub fn moduli_label(pair: &WallPair) -> String {
    if pair.c == 0 {
        format!("Hilb^{}(X)", pair.d + 1)
    } else {
        format!("M{}", pair.vector)
    }
}

/// Advisory only: a common factor of rank, degree and `s` leaves room for a
/// Brauer twist on the universal family.
pub fn twisted_possible(pair: &WallPair, ctx: &GenusContext) -> bool {
    let v = &pair.vector;
    let deg = &v.m * int(ctx.h_square());
    let g = v.r.gcd(&deg).gcd(&v.s);
    g > int(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipRecord {
    pub pair: WallPair,
    pub k_plus: i64,
    pub k_minus: i64,
    pub ext1_dim: i64,
    pub moduli_dim: i64,
    /// `dim P(V⁻) = g − k⁺`.
    pub minus_bundle_dim: i64,
    /// `dim P(V'⁺) = g − k⁻`.
    pub plus_bundle_dim: i64,
    pub moduli_label: String,
    pub twisted_possible: bool,
}

impl FlipRecord {
    pub fn new(pair: &WallPair, ctx: &GenusContext) -> Result<FlipRecord> {
        let (k_plus, k_minus) = rank_formulas(pair, ctx)?;
        let v = ctx.v();
        let ext1 = mukai_pairing(&pair.vector, &(&v - &pair.vector), ctx);
        let ext1_dim = to_i64(&ext1, "ext1")?;
        let moduli_dim = to_i64(&(mukai_square(&pair.vector, ctx) + int(2)), "dim M")?;
        let g = ctx.genus();
        Ok(FlipRecord {
            pair: pair.clone(),
            k_plus,
            k_minus,
            ext1_dim,
            moduli_dim,
            minus_bundle_dim: g - k_plus,
            plus_bundle_dim: g - k_minus,
            moduli_label: moduli_label(pair),
            twisted_possible: twisted_possible(pair, ctx),
        })
    }

    pub fn gain(&self) -> i64 {
        self.k_plus - self.k_minus
    }

    pub fn min_rank(&self) -> i64 {
        self.k_plus.min(self.k_minus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    /// `i = −1`: the flop of the ambient moduli space whose fixed locus
    /// turns `M₋₁` into the dual projective space `M₀`.
    InitialFlop,
    /// `i = 0`: `M₁ → M₀` is the blow-up along `X`.
    Blowup,
    SmallFlip,
    /// `g ≡ 3 mod 4`, `i = η − 1`: `k⁺ = 1`, so `P(V⁻)` is a divisor.
    DivisorialContraction,
    /// `g ≡ 3 mod 4`, `i = η`: `k⁺ = 0`, the whole model is contracted.
    TerminalDivisorial,
}

impl CrossingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossingKind::InitialFlop => "initial_flop",
            CrossingKind::Blowup => "blowup",
            CrossingKind::SmallFlip => "small_flip",
            CrossingKind::DivisorialContraction => "divisorial_contraction",
            CrossingKind::TerminalDivisorial => "terminal_divisorial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossing {
    pub index: i64,
    pub records: Vec<FlipRecord>,
    pub kind: CrossingKind,
}

fn classify(index: i64, records: &[FlipRecord]) -> Result<CrossingKind> {
    if index == -1 {
        return Ok(CrossingKind::InitialFlop);
    }
    if index == 0 {
        return Ok(CrossingKind::Blowup);
    }
    if records.iter().all(|r| r.min_rank() >= 2) {
        return Ok(CrossingKind::SmallFlip);
    }
    if records.iter().any(|r| r.k_plus == 0) {
        return Ok(CrossingKind::TerminalDivisorial);
    }
    if records.iter().any(|r| r.k_plus == 1) {
        return Ok(CrossingKind::DivisorialContraction);
    }
    Err(Error::Invariant(format!(
        "crossing {index} has a rank below 2 on the minus side only"
    )))
}

pub fn build_crossing(i: i64, ctx: &GenusContext, walls: &WallSystem) -> Result<WallCrossing> {
    walls.check_index(i)?;
    let records = walls
        .group(i)
        .expect("index checked")
        .iter()
        .map(|p| FlipRecord::new(p, ctx))
        .collect::<Result<Vec<_>>>()?;
    let kind = classify(i, &records)?;
    Ok(WallCrossing {
        index: i,
        records,
        kind,
    })
}

#[derive(Debug, Clone)]
pub struct SequenceSummary {
    pub crossings: Vec<WallCrossing>,
    pub eta: i64,
    pub nu: i64,
    pub divisorial: Option<DivisorialWallData>,
}

impl SequenceSummary {
    pub fn crossing(&self, i: i64) -> Option<&WallCrossing> {
        self.crossings.iter().find(|c| c.index == i)
    }

    pub fn records(&self) -> impl Iterator<Item = (i64, &FlipRecord)> {
        self.crossings
            .iter()
            .flat_map(|c| c.records.iter().map(move |r| (c.index, r)))
    }
}

pub fn sequence_summary(ctx: &GenusContext, walls: &WallSystem) -> Result<SequenceSummary> {
    let crossings = walls
        .indices()
        .map(|i| build_crossing(i, ctx, walls))
        .collect::<Result<Vec<_>>>()?;
    let divisorial = if ctx.residue_mod_4() == 0 {
        Some(divisorial_wall_data(ctx)?)
    } else {
        None
    };
    Ok(SequenceSummary {
        crossings,
        eta: walls.eta,
        nu: walls.nu,
        divisorial,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub k: i64,
    pub b_k: MukaiVector,
    pub b_k_square: i64,
    pub fiber: String,
    pub fixed_fiber_on_m: String,
    pub fixed_fiber_on_omega: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorialWallData {
    pub spherical_vector: MukaiVector,
    pub strata: Vec<Stratum>,
}

/// The rank-2 spherical class `(2, −h, g/2)`: the only `(2, −h, s)` with
/// square −2, and it is orthogonal to `v`.
pub fn spherical_vector(ctx: &GenusContext) -> Result<MukaiVector> {
    ctx.require_residue(0)?;
    Ok(MukaiVector::from_i64(2, -1, ctx.genus() / 2))
}

pub fn divisorial_wall_data(ctx: &GenusContext) -> Result<DivisorialWallData> {
    let a = spherical_vector(ctx)?;
    let v = ctx.v();
    let mut strata = Vec::new();
    for k in 1.. {
        let b_k = &v - &(k * &a);
        let sq = to_i64(&mukai_square(&b_k, ctx), "b_k^2")?;
        if sq < -2 {
            break;
        }
        strata.push(Stratum {
            k,
            b_k,
            b_k_square: sq,
            fiber: format!("Gr({k},{})", 2 * k),
            fixed_fiber_on_m: format!("LGr({k},{})", 2 * k),
            fixed_fiber_on_omega: format!("OGr({k},{})", 2 * k),
        });
    }
    Ok(DivisorialWallData {
        spherical_vector: a,
        strata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walls::build_wall_system;

    fn ctx(g: i64) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn ranks_from_tables() {
        assert_eq!(k_plus(1, -1, &ctx(27)).unwrap(), 16);
        assert_eq!(k_minus(1, -1, &ctx(27)).unwrap(), 12);
        assert_eq!(k_plus(1, 0, &ctx(28)).unwrap(), 15);
        assert_eq!(k_minus(1, 0, &ctx(28)).unwrap(), 12);
        for g in [4, 9, 27, 28, 101] {
            assert_eq!(k_plus(0, 0, &ctx(g)).unwrap(), g - 2);
            assert_eq!(k_minus(0, 0, &ctx(g)).unwrap(), 1);
        }
        assert!(k_plus(1, 0, &ctx(27)).is_err());
    }

    #[test]
    fn record_dimensions() {
        let c = ctx(28);
        let r = FlipRecord::new(&WallPair::new(0, 3, &c).unwrap(), &c).unwrap();
        assert_eq!((r.k_plus, r.k_minus), (17, 4));
        assert_eq!(r.ext1_dim, 28 - 1 - 6);
        assert_eq!(r.moduli_dim, 8);
        assert_eq!(r.minus_bundle_dim, 11);
        assert_eq!(r.plus_bundle_dim, 24);
        assert_eq!(r.moduli_label, "Hilb^4(X)");
        let r = FlipRecord::new(&WallPair::new(1, 0, &c).unwrap(), &c).unwrap();
        assert_eq!(r.moduli_label, "M(3,-h,9)");
    }

    #[test]
    fn twisted_flag() {
        // (3,-h,9) at g=28: gcd(3, 54, 9) = 3
        let c = ctx(28);
        assert!(twisted_possible(&WallPair::new(1, 0, &c).unwrap(), &c));
        assert!(!twisted_possible(&WallPair::new(0, 2, &c).unwrap(), &c));
    }

    #[test]
    fn crossings_g27() {
        let c = ctx(27);
        let w = build_wall_system(&c);
        let x = build_crossing(0, &c, &w).unwrap();
        assert_eq!(x.kind, CrossingKind::Blowup);
        assert_eq!(x.records.len(), 1);
        assert_eq!((x.records[0].k_plus, x.records[0].k_minus), (25, 1));
        let x = build_crossing(15, &c, &w).unwrap();
        assert_eq!(x.kind, CrossingKind::TerminalDivisorial);
        assert_eq!(x.records[0].pair.key(), (7, -1));
        assert_eq!(x.records[0].k_plus, 0);
        let x = build_crossing(14, &c, &w).unwrap();
        assert_eq!(x.kind, CrossingKind::DivisorialContraction);
        assert_eq!(x.records[0].pair.key(), (6, 0));
        assert!(matches!(
            build_crossing(16, &c, &w),
            Err(Error::IndexOutOfRange { index: 16, .. })
        ));
    }

    #[test]
    fn crossing_g28_small() {
        let c = ctx(28);
        let w = build_wall_system(&c);
        let x = build_crossing(3, &c, &w).unwrap();
        assert_eq!(x.kind, CrossingKind::SmallFlip);
        assert_eq!((x.records[0].k_plus, x.records[0].k_minus), (17, 4));
    }

    #[test]
    fn summaries() {
        let c = ctx(27);
        let s = sequence_summary(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(s.nu, 14);
        assert_eq!(s.crossings.len(), 17);
        assert_eq!(s.crossing(7).unwrap().records.len(), 2);
        assert!(s.divisorial.is_none());

        let c = ctx(28);
        let s = sequence_summary(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(s.nu, 8);
        assert!(s.divisorial.is_some());

        let c = ctx(5);
        let s = sequence_summary(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(s.crossings[0].kind, CrossingKind::InitialFlop);
        assert_eq!(s.crossings[0].records[0].pair.key(), (0, -1));
        assert_eq!(s.crossings[1].kind, CrossingKind::Blowup);
    }

    #[test]
    fn divisorial_wall_g28() {
        let c = ctx(28);
        let data = divisorial_wall_data(&c).unwrap();
        assert_eq!(data.spherical_vector, MukaiVector::from_i64(2, -1, 14));
        assert_eq!(mukai_square(&data.spherical_vector, &c), int(-2));
        assert_eq!(mukai_pairing(&data.spherical_vector, &c.v(), &c), int(0));
        let s1 = &data.strata[0];
        assert_eq!(s1.b_k, MukaiVector::from_i64(-2, 2, -41));
        assert_eq!(s1.b_k_square, 52);
        assert_eq!(s1.fiber, "Gr(1,2)");
        assert_eq!(s1.fixed_fiber_on_m, "LGr(1,2)");
        // b_k^2 = 2g - 2 - 2k^2 >= -2  <=>  k^2 <= g
        assert_eq!(data.strata.len(), 5);
        assert_eq!(data.strata.last().unwrap().b_k_square, 4);
    }

    #[test]
    fn quarter_genus_vector_is_not_spherical() {
        // (2, -h, g/4) squares to g - 2, so it cannot be the rigid class
        for g in [8, 28, 100] {
            let c = ctx(g);
            let literal = MukaiVector::from_i64(2, -1, g / 4);
            assert_eq!(mukai_square(&literal, &c), int(g - 2));
        }
        assert_eq!(spherical_vector(&ctx(8)).unwrap(), MukaiVector::from_i64(2, -1, 4));
    }

    #[test]
    fn divisorial_needs_residue_zero() {
        assert!(matches!(
            divisorial_wall_data(&ctx(27)),
            Err(Error::WrongResidue { expected: 0, .. })
        ));
    }
}
