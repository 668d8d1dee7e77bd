//! Chern classes and Riemann–Roch on a K3 surface with `Pic = Z·h`.
//!
//! This is an independent route to `k⁺`: it never touches the closed rank
//! formulas, only `S²`, twists by `Λ = O(h)` and `χ = 2r + c₁²/2 − c₂`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat_int, rational_to_i64, to_integer, Rational};
use crate::lattice::{GenusContext, MukaiVector};
use crate::walls::WallPair;

/// `(rank, c₁ = c1_mult·h, c₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafClass {
    pub rank: BigInt,
    pub c1_mult: Rational,
    pub c2: Rational,
}

impl SheafClass {
    pub fn new(rank: i64, c1_mult: Rational, c2: Rational) -> SheafClass {
        SheafClass {
            rank: int(rank),
            c1_mult,
            c2,
        }
    }

    pub fn structure_sheaf() -> SheafClass {
        SheafClass::new(1, Rational::zero(), Rational::zero())
    }

    pub fn polarization() -> SheafClass {
        SheafClass::new(1, Rational::one(), Rational::zero())
    }

    fn c1_square(&self, ctx: &GenusContext) -> Rational {
        &self.c1_mult * &self.c1_mult * Rational::from_integer(int(ctx.h_square()))
    }
}

pub fn chern_of_mukai(a: &MukaiVector, ctx: &GenusContext) -> SheafClass {
    let c1 = rat_int(&a.m);
    let half_c1sq = &c1 * &c1 * Rational::from_integer(int(ctx.genus() - 1));
    SheafClass {
        rank: a.r.clone(),
        c2: half_c1sq + rat_int(&a.r) - rat_int(&a.s),
        c1_mult: c1,
    }
}

pub fn mukai_of_chern(s: &SheafClass, ctx: &GenusContext) -> Result<MukaiVector> {
    let m = to_integer(&s.c1_mult, "c1")?;
    let half = Rational::new(int(1), int(2));
    let sq = s.c1_square(ctx) * half - &s.c2 + rat_int(&s.rank);
    Ok(MukaiVector::new(s.rank.clone(), m, to_integer(&sq, "s")?))
}

pub fn sym2(s: &SheafClass, ctx: &GenusContext) -> Result<SheafClass> {
    if s.rank < BigInt::one() {
        return Err(Error::ZeroRank);
    }
    let r = rat_int(&s.rank);
    let one = Rational::one();
    let two = Rational::from_integer(int(2));
    let c1sq = s.c1_square(ctx);
    let coeff = &r * &r / &two + &r / &two - &one;
    Ok(SheafClass {
        rank: &s.rank * (&s.rank + 1) / 2,
        c1_mult: &s.c1_mult * (&r + &one),
        c2: c1sq * coeff + &s.c2 * (&r + &two),
    })
}

/// `S ⊗ Λ^t`.
pub fn tensor_line(s: &SheafClass, t: i64, ctx: &GenusContext) -> SheafClass {
    let r = rat_int(&s.rank);
    let t = Rational::from_integer(int(t));
    let h2 = Rational::from_integer(int(ctx.h_square()));
    let c1_dot_h = &s.c1_mult * &h2;
    let pairs = &r * (&r - Rational::one()) / Rational::from_integer(int(2));
    SheafClass {
        rank: s.rank.clone(),
        c1_mult: &s.c1_mult + &r * &t,
        c2: &s.c2 + (&r - Rational::one()) * &t * c1_dot_h + pairs * &t * &t * h2,
    }
}

pub fn euler_char(s: &SheafClass, ctx: &GenusContext) -> Result<i64> {
    let chi = rat_int(&s.rank) * Rational::from_integer(int(2))
        + s.c1_square(ctx) / Rational::from_integer(int(2))
        - &s.c2;
    rational_to_i64(&chi, "chi")
}

/// Chern character `(r, m·h, ch₂)`; multiplicative, unlike `(r, c₁, c₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Ch {
    r: Rational,
    m: Rational,
    ch2: Rational,
}

impl Ch {
    fn of(s: &SheafClass, ctx: &GenusContext) -> Ch {
        Ch {
            r: rat_int(&s.rank),
            m: s.c1_mult.clone(),
            ch2: s.c1_square(ctx) / Rational::from_integer(int(2)) - &s.c2,
        }
    }

    fn mul(&self, o: &Ch, ctx: &GenusContext) -> Ch {
        let h2 = Rational::from_integer(int(ctx.h_square()));
        Ch {
            r: &self.r * &o.r,
            m: &self.r * &o.m + &o.r * &self.m,
            ch2: &self.r * &o.ch2 + &o.r * &self.ch2 + &self.m * &o.m * h2,
        }
    }

    fn dual(&self) -> Ch {
        Ch {
            r: self.r.clone(),
            m: -&self.m,
            ch2: self.ch2.clone(),
        }
    }

    fn neg(&self) -> Ch {
        Ch {
            r: -&self.r,
            m: -&self.m,
            ch2: -&self.ch2,
        }
    }

    fn line(t: i64, ctx: &GenusContext) -> Ch {
        let t = Rational::from_integer(int(t));
        Ch {
            r: Rational::one(),
            ch2: &t * &t * Rational::from_integer(int(ctx.genus() - 1)),
            m: t,
        }
    }

    fn chi(&self) -> Result<i64> {
        rational_to_i64(&(&self.ch2 + &self.r * Rational::from_integer(int(2))), "chi")
    }

    fn mukai(&self) -> Result<MukaiVector> {
        Ok(MukaiVector::new(
            to_integer(&self.r, "r")?,
            to_integer(&self.m, "m")?,
            to_integer(&(&self.ch2 + &self.r), "s")?,
        ))
    }
}

fn wall_object(pair: &WallPair, ctx: &GenusContext) -> SheafClass {
    chern_of_mukai(&pair.vector, ctx)
}

/// `k⁺ = χ(S²T ⊗ Λ)` for `T` of Mukai vector `v_{c,d}`.
pub fn k_plus_oracle(c: i64, d: i64, ctx: &GenusContext) -> Result<i64> {
    let pair = WallPair::new(c, d, ctx)?;
    let t = wall_object(&pair, ctx);
    euler_char(&tensor_line(&sym2(&t, ctx)?, 1, ctx), ctx)
}

/// `χ(T ⊗ T ⊗ Λ)`, computed through Chern-character products.
pub fn tensor_square_twist_euler(c: i64, d: i64, ctx: &GenusContext) -> Result<i64> {
    let pair = WallPair::new(c, d, ctx)?;
    let ch = Ch::of(&wall_object(&pair, ctx), ctx);
    ch.mul(&ch, ctx).mul(&Ch::line(1, ctx), ctx).chi()
}

/// `k⁻ = χ(Λ²T ⊗ Λ) = χ(T⊗T⊗Λ) − χ(S²T⊗Λ)`.
pub fn k_minus_oracle(c: i64, d: i64, ctx: &GenusContext) -> Result<i64> {
    Ok(tensor_square_twist_euler(c, d, ctx)? - k_plus_oracle(c, d, ctx)?)
}

/// Mukai vector of `E^∨ ⊗ Λ^{-1}[1]`, via Chern characters.
pub fn dual_twist_oracle(a: &MukaiVector, ctx: &GenusContext) -> Result<MukaiVector> {
    let ch = Ch::of(&chern_of_mukai(a, ctx), ctx);
    ch.dual().mul(&Ch::line(-1, ctx), ctx).neg().mukai()
}
