//! Divisor classes on `M₁ = Bl_X P^g` in the basis `O(m,n) = (m+n)H − nE`,
//! ample chambers of the models `M_i`, and the Fano tests.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, rat_int, Rational};
use crate::lattice::{mukai_pairing, GenusContext, MukaiVector, Parity};
use crate::walls::{WallPair, WallSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PicClass {
    pub m: Rational,
    pub n: Rational,
}

impl PicClass {
    pub fn new(m: Rational, n: Rational) -> PicClass {
        PicClass { m, n }
    }

    pub fn int(m: i64, n: i64) -> PicClass {
        PicClass::new(rat(m, 1), rat(n, 1))
    }

    /// Coordinates `(a, b)` of `aH + bE`.
    pub fn to_he(&self) -> (Rational, Rational) {
        (&self.m + &self.n, -&self.n)
    }

    pub fn from_he(h: Rational, e: Rational) -> PicClass {
        PicClass {
            m: &h + &e,
            n: -e,
        }
    }

    pub fn scale(&self, k: &Rational) -> PicClass {
        PicClass::new(&self.m * k, &self.n * k)
    }

    /// Representative of the same ray with `m = 2`; `None` when `m ≤ 0`.
    pub fn on_pencil(&self) -> Option<PicClass> {
        if !self.m.is_positive() {
            return None;
        }
        Some(self.scale(&(rat(2, 1) / &self.m)))
    }

    pub fn same_ray(&self, other: &PicClass) -> bool {
        &self.m * &other.n == &self.n * &other.m
            && self.m.signum() == other.m.signum()
            && self.n.signum() == other.n.signum()
    }

    pub fn he_string(&self) -> String {
        let (h, e) = self.to_he();
        let e_str = if e.is_negative() {
            format!("- {}E", fmt_rational(&-e))
        } else {
            format!("+ {}E", fmt_rational(&e))
        };
        format!("{}H {}", fmt_rational(&h), e_str)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({},{})", fmt_rational(&self.m), fmt_rational(&self.n))
    }
}

pub fn theta_g(ctx: &GenusContext) -> Rational {
    match ctx.parity() {
        Parity::Even => rat(ctx.genus(), 2) - rat(1, 1),
        Parity::Odd => rat(ctx.genus() - 1, 2),
    }
}

/// Mukai vectors in `v^⊥` whose determinant classes restrict to `f` and `λ`.
pub fn generator_vectors(ctx: &GenusContext) -> (MukaiVector, MukaiVector) {
    let theta = theta_g(ctx).to_integer();
    (
        MukaiVector::from_i64(0, 0, -1),
        MukaiVector::new(int(2), int(-1), theta),
    )
}

/// `(f|_{M₁}, λ|_{M₁}) = (O(0,−1), O(2,θ_g))`.
pub fn restrict_generators(ctx: &GenusContext) -> (PicClass, PicClass) {
    (
        PicClass::new(rat(0, 1), rat(-1, 1)),
        PicClass::new(rat(2, 1), theta_g(ctx)),
    )
}

fn require_orthogonal(w: &MukaiVector, ctx: &GenusContext) -> Result<()> {
    if mukai_pairing(w, &ctx.v(), ctx).is_zero() {
        Ok(())
    } else {
        Err(Error::NotOrthogonal(w.to_string()))
    }
}

/// Degree of the class attached to `w ∈ v^⊥` on a curve contracted at the
/// wall of `pair`: `−⟨w, v_{c,d}⟩`.
pub fn wall_curve_degree(w: &MukaiVector, pair: &WallPair, ctx: &GenusContext) -> Result<Rational> {
    require_orthogonal(w, ctx)?;
    Ok(rat_int(&-mukai_pairing(w, &pair.vector, ctx)))
}

/// Solves for `O(m,n)` from the degrees on a line of `P^g` (wall `(0,−1)`,
/// degree `m+n`) and a line in a fiber of `E` (wall `(0,0)`, degree `n`).
pub fn class_from_wall_degrees(w: &MukaiVector, ctx: &GenusContext) -> Result<PicClass> {
    let line = WallPair::new(0, -1, ctx)?;
    let fiber = WallPair::new(0, 0, ctx)?;
    let a = wall_curve_degree(w, &line, ctx)?;
    let b = wall_curve_degree(w, &fiber, ctx)?;
    Ok(PicClass::new(&a - &b, b))
}

pub fn anticanonical(ctx: &GenusContext) -> PicClass {
    PicClass::int(4, ctx.genus() - 3)
}

/// The slope at which `−K` meets the pencil: `½` for even genus, `1` for odd.
pub fn fano_threshold(ctx: &GenusContext) -> Rational {
    match ctx.parity() {
        Parity::Even => rat(1, 2),
        Parity::Odd => rat(1, 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub index: i64,
    pub lower: PicClass,
    pub upper: PicClass,
    /// Only containment is known for the last model.
    pub upper_is_outer_bound: bool,
}

impl Chamber {
    fn n_bounds(&self) -> (&Rational, &Rational) {
        (&self.lower.n, &self.upper.n)
    }

    pub fn strictly_contains(&self, class: &PicClass) -> bool {
        let Some(p) = class.on_pencil() else { return false };
        let (lo, hi) = self.n_bounds();
        lo < &p.n && &p.n < hi
    }

    pub fn closure_contains(&self, class: &PicClass) -> bool {
        let Some(p) = class.on_pencil() else { return false };
        let (lo, hi) = self.n_bounds();
        lo <= &p.n && &p.n <= hi
    }
}

pub fn ample_chamber(i: i64, ctx: &GenusContext, walls: &WallSystem) -> Result<Chamber> {
    if i < 1 || i > walls.nu {
        return Err(Error::IndexOutOfRange {
            index: i,
            lo: 1,
            hi: walls.nu,
        });
    }
    let theta = theta_g(ctx);
    let mu_lo = walls.slope(i - 1).expect("i − 1 within walls");
    let outer = i == walls.nu;
    let mu_hi = if outer {
        Rational::zero()
    } else {
        walls.slope(i).expect("i within walls").clone()
    };
    Ok(Chamber {
        index: i,
        lower: PicClass::new(rat(2, 1), &theta - mu_lo),
        upper: PicClass::new(rat(2, 1), &theta - mu_hi),
        upper_is_outer_bound: outer,
    })
}

fn chambers(ctx: &GenusContext, walls: &WallSystem) -> Result<Vec<Chamber>> {
    (1..=walls.nu).map(|i| ample_chamber(i, ctx, walls)).collect()
}

pub fn is_fano(i: i64, ctx: &GenusContext, walls: &WallSystem) -> Result<bool> {
    Ok(ample_chamber(i, ctx, walls)?.strictly_contains(&anticanonical(ctx)))
}

pub fn is_weak_fano(i: i64, ctx: &GenusContext, walls: &WallSystem) -> Result<bool> {
    Ok(ample_chamber(i, ctx, walls)?.closure_contains(&anticanonical(ctx)))
}

pub fn fano_index(ctx: &GenusContext, walls: &WallSystem) -> Result<Option<i64>> {
    let hits: Vec<i64> = chambers(ctx, walls)?
        .iter()
        .filter(|c| c.strictly_contains(&anticanonical(ctx)))
        .map(|c| c.index)
        .collect();
    match hits.as_slice() {
        [] => Ok(None),
        [i] => Ok(Some(*i)),
        _ => Err(Error::Invariant(format!("−K strictly inside chambers {hits:?}"))),
    }
}

#[derive(Debug, Clone)]
pub struct ChamberTable {
    pub theta_g: Rational,
    pub chambers: Vec<Chamber>,
    pub anticanonical: PicClass,
    pub fano_index: Option<i64>,
    pub weak_fano_indices: Vec<i64>,
    /// Interior walls `μ_i` (`1 ≤ i ≤ ν−1`) passing through `−K`.
    pub anticanonical_walls: Vec<i64>,
    /// The Fano model, or for `g ≡ 3 mod 4` the model just past the
    /// `μ = 1` wall.
    pub designated_model: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    Fano,
    WeakFano,
}

impl ChamberTable {
    pub fn chamber(&self, i: i64) -> Option<&Chamber> {
        self.chambers.iter().find(|c| c.index == i)
    }

    pub fn designated_kind(&self) -> Option<ModelKind> {
        match (self.fano_index, self.designated_model) {
            (Some(_), _) => Some(ModelKind::Fano),
            (None, Some(_)) => Some(ModelKind::WeakFano),
            _ => None,
        }
    }
}

pub fn chamber_table(ctx: &GenusContext, walls: &WallSystem) -> Result<ChamberTable> {
    let chambers = chambers(ctx, walls)?;
    let k = anticanonical(ctx);
    let fano = fano_index(ctx, walls)?;
    let weak: Vec<i64> = chambers
        .iter()
        .filter(|c| c.closure_contains(&k))
        .map(|c| c.index)
        .collect();
    let k_n = k.on_pencil().expect("−K has m > 0").n;
    let theta = theta_g(ctx);
    let on_walls: Vec<i64> = (1..walls.nu)
        .filter(|&i| &theta - walls.slope(i).expect("interior wall") == k_n)
        .collect();
    let designated = match (fano, on_walls.as_slice()) {
        (Some(i), _) => Some(i),
        (None, [i1]) => Some(i1 + 1),
        _ => None,
    };
    Ok(ChamberTable {
        theta_g: theta,
        chambers,
        anticanonical: k,
        fano_index: fano,
        weak_fano_indices: weak,
        anticanonical_walls: on_walls,
        designated_model: designated,
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
    fn pic_coordinates() {
        let c = PicClass::int(2, 13);
        assert_eq!(c.to_he(), (rat(15, 1), rat(-13, 1)));
        assert_eq!(c.he_string(), "15H - 13E");
        assert_eq!(PicClass::from_he(rat(15, 1), rat(-13, 1)), c);
        assert_eq!(PicClass::int(0, -1).to_he(), (rat(-1, 1), rat(1, 1)));
        assert!(PicClass::int(4, 25).same_ray(&PicClass::new(rat(2, 1), rat(25, 2))));
        assert_eq!(PicClass::new(rat(2, 1), rat(62, 5)).to_string(), "O(2,62/5)");
    }

    #[test]
    fn generators() {
        for g in [27, 28] {
            let (f, l) = restrict_generators(&ctx(g));
            assert_eq!(f, PicClass::int(0, -1));
            assert_eq!(l, PicClass::int(2, 13));
        }
    }

    #[test]
    fn degrees_on_wall_curves() {
        let c = ctx(28);
        let p00 = WallPair::new(0, 0, &c).unwrap();
        let w_f = MukaiVector::from_i64(0, 0, -1);
        let w_l = MukaiVector::from_i64(2, -1, 13);
        assert_eq!(wall_curve_degree(&w_f, &p00, &c).unwrap(), rat(-1, 1));
        assert_eq!(wall_curve_degree(&w_l, &p00, &c).unwrap(), rat(13, 1));
        let c = ctx(27);
        let p = WallPair::new(0, -1, &c).unwrap();
        assert_eq!(wall_curve_degree(&w_l, &p, &c).unwrap(), rat(15, 1));
        let bad = MukaiVector::from_i64(1, 0, 0);
        assert!(matches!(wall_curve_degree(&bad, &p, &c), Err(Error::NotOrthogonal(_))));
    }

    #[test]
    fn degree_route_recovers_generators() {
        for g in 4..60 {
            let c = ctx(g);
            let (wf, wl) = generator_vectors(&c);
            let (f, l) = restrict_generators(&c);
            assert_eq!(class_from_wall_degrees(&wf, &c).unwrap(), f);
            assert_eq!(class_from_wall_degrees(&wl, &c).unwrap(), l);
        }
    }

    #[test]
    fn chambers_g28() {
        let c = ctx(28);
        let w = build_wall_system(&c);
        let ch = ample_chamber(1, &c, &w).unwrap();
        assert_eq!((ch.lower, ch.upper), (PicClass::int(2, 0), PicClass::int(2, 2)));
        let last = ample_chamber(8, &c, &w).unwrap();
        assert_eq!(last.upper, PicClass::int(2, 13));
        assert!(last.upper_is_outer_bound);
        assert!(ample_chamber(0, &c, &w).is_err());
        assert!(ample_chamber(9, &c, &w).is_err());
    }

    #[test]
    fn chamber_g27() {
        let c = ctx(27);
        let w = build_wall_system(&c);
        let ch = ample_chamber(8, &c, &w).unwrap();
        assert_eq!(ch.lower, PicClass::int(2, 12));
        assert_eq!(ch.upper, PicClass::new(rat(2, 1), rat(62, 5)));
    }

    #[test]
    fn fano_models() {
        let c = ctx(28);
        let w = build_wall_system(&c);
        assert_eq!(fano_index(&c, &w).unwrap(), Some(7));
        assert!(is_fano(7, &c, &w).unwrap());
        assert!(!is_fano(6, &c, &w).unwrap());
        let t = chamber_table(&c, &w).unwrap();
        assert_eq!(t.weak_fano_indices, vec![7]);
        assert_eq!(t.designated_model, Some(7));
        assert_eq!(t.designated_kind(), Some(ModelKind::Fano));

        let c = ctx(27);
        let w = build_wall_system(&c);
        assert_eq!(fano_index(&c, &w).unwrap(), None);
        let t = chamber_table(&c, &w).unwrap();
        assert_eq!(t.weak_fano_indices, vec![7, 8]);
        assert_eq!(t.anticanonical_walls, vec![7]);
        assert_eq!(t.designated_model, Some(8));
        assert!(is_weak_fano(8, &c, &w).unwrap());
        assert_eq!(t.designated_kind(), Some(ModelKind::WeakFano));

        let c = ctx(7);
        let t = chamber_table(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(t.designated_model, Some(2));
    }

    #[test]
    fn anticanonical_on_pencil() {
        for g in 4..40 {
            let c = ctx(g);
            assert_eq!(anticanonical(&c), PicClass::int(4, g - 3));
            let p = anticanonical(&c).on_pencil().unwrap();
            assert_eq!(p.n, theta_g(&c) - fano_threshold(&c));
        }
    }
}
