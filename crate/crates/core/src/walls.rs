//! Admissible pairs `(c, d)`, their slopes, and the ordered wall system.
//!
//! A pair is admissible when `c ≥ 0`, `d ≥ −1`, `(2c+1) | ((g−1)c² − d)` and
//! its slope is positive, with
//!
//! ```text
//!   μ(c,d) = (g − 1 − 4d − (2c+1)²) / (2(2c+1)²)   g even
//!   μ(c,d) = (g − 1 − 4d)           / (2(2c+1)²)   g odd
//! ```
//!
//! Walls are indexed from `−1` by decreasing slope; the last index is `η`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, rational_to_i64, Rational};
use crate::lattice::{GenusContext, MukaiVector, Parity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallPair {
    pub c: i64,
    pub d: i64,
    pub slope: Rational,
    /// Normalized slope: `2(2c+1)μ` for even genus, `(2c+1)μ` for odd.
    pub t: i64,
    /// `v_{c,d} = (2c+1, −c, ((g−1)c² − d)/(2c+1))`.
    pub vector: MukaiVector,
}

impl WallPair {
    pub fn new(c: i64, d: i64, ctx: &GenusContext) -> Result<WallPair> {
        if !is_admissible(c, d, ctx) {
            return Err(Error::NotAdmissible {
                c,
                d,
                g: ctx.genus(),
            });
        }
        let slope = slope(c, d, ctx);
        let q = 2 * c + 1;
        let t_q = match ctx.parity() {
            Parity::Even => &slope * rat(2 * q, 1),
            Parity::Odd => &slope * rat(q, 1),
        };
        let t = rational_to_i64(&t_q, &format!("t({c},{d})"))?;
        if t <= 0 {
            return Err(Error::Invariant(format!("t({c},{d}) = {t} is not positive")));
        }
        let numer = int(ctx.genus() - 1) * int(c) * int(c) - int(d);
        let (s, rem) = numer.div_rem(&int(q));
        debug_assert!(rem.is_zero());
        Ok(WallPair {
            c,
            d,
            slope,
            t,
            vector: MukaiVector::new(q, -c, s),
        })
    }

    pub fn key(&self) -> (i64, i64) {
        (self.c, self.d)
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.c, self.d)
    }

    pub fn slope_string(&self) -> String {
        fmt_rational(&self.slope)
    }
}

pub fn slope(c: i64, d: i64, ctx: &GenusContext) -> Rational {
    let q = int(2 * c + 1);
    let base = int(ctx.genus() - 1) - int(4) * int(d);
    let numer = match ctx.parity() {
        Parity::Even => base - &q * &q,
        Parity::Odd => base,
    };
    Rational::new(numer, int(2) * &q * &q)
}

pub fn is_admissible(c: i64, d: i64, ctx: &GenusContext) -> bool {
    if c < 0 || d < -1 {
        return false;
    }
    let numer: BigInt = int(ctx.genus() - 1) * int(c) * int(c) - int(d);
    numer.is_multiple_of(&int(2 * c + 1)) && slope(c, d, ctx) > Rational::zero()
}

fn by_slope_then_c(a: &WallPair, b: &WallPair) -> Ordering {
    b.slope.cmp(&a.slope).then(a.c.cmp(&b.c))
}

/// Condition a) is equivalent to `(2c+1) | (g − 1 − 4d)`, and positivity
/// forces `g − 1 − 4d > 0`; so for each `d ≤ ⌊(g−2)/4⌋` it suffices to run
/// over the odd divisors `2c+1` of `g − 1 − 4d`.
pub fn enumerate_pairs(ctx: &GenusContext) -> Vec<WallPair> {
    let g = ctx.genus();
    let mut pairs = Vec::new();
    for d in -1..=(g - 2).div_euclid(4) {
        let n = g - 1 - 4 * d;
        for q in odd_divisors(n) {
            let keep = match ctx.parity() {
                Parity::Even => i128::from(q) * i128::from(q) < i128::from(n),
                Parity::Odd => (n / q) % 2 == 0,
            };
            if keep {
                let c = (q - 1) / 2;
                // the divisor argument already guarantees admissibility
                pairs.push(WallPair::new(c, d, ctx).expect("divisor-derived pair is admissible"));
            }
        }
    }
    pairs.sort_by(by_slope_then_c);
    pairs
}

fn odd_divisors(n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut q = 1;
    while q * q <= n {
        if n % q == 0 {
            if q % 2 == 1 {
                out.push(q);
            }
            let other = n / q;
            if other != q && other % 2 == 1 {
                out.push(other);
            }
        }
        q += 1;
    }
    out
}

/// The slopes `μ_{−1} > μ_0 > … > μ_η` with their groups `J^i`.
#[derive(Debug, Clone)]
pub struct WallSystem {
    pub ctx: GenusContext,
    slopes: Vec<Rational>,
    groups: Vec<Vec<WallPair>>,
    pub eta: i64,
    pub nu: i64,
}

impl WallSystem {
    pub fn first_index(&self) -> i64 {
        -1
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -1..=self.eta
    }

    fn offset(&self, i: i64) -> Option<usize> {
        if (-1..=self.eta).contains(&i) {
            Some((i + 1) as usize)
        } else {
            None
        }
    }

    pub fn check_index(&self, i: i64) -> Result<()> {
        self.offset(i).map(|_| ()).ok_or(Error::IndexOutOfRange {
            index: i,
            lo: -1,
            hi: self.eta,
        })
    }

    pub fn slope(&self, i: i64) -> Option<&Rational> {
        self.offset(i).map(|k| &self.slopes[k])
    }

    pub fn group(&self, i: i64) -> Option<&[WallPair]> {
        self.offset(i).map(|k| self.groups[k].as_slice())
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    /// All pairs with their wall index, ordered by index then ascending `c`.
    pub fn indexed_pairs(&self) -> impl Iterator<Item = (i64, &WallPair)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(k, grp)| grp.iter().map(move |p| (k as i64 - 1, p)))
    }

    pub fn pair_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn index_of_slope(&self, mu: &Rational) -> Option<i64> {
        self.slopes
            .iter()
            .position(|s| s == mu)
            .map(|k| k as i64 - 1)
    }

    pub fn index_of_pair(&self, c: i64, d: i64) -> Option<i64> {
        self.indexed_pairs()
            .find(|(_, p)| p.c == c && p.d == d)
            .map(|(i, _)| i)
    }

    pub fn find_pair(&self, c: i64, d: i64) -> Option<&WallPair> {
        self.indexed_pairs()
            .find(|(_, p)| p.c == c && p.d == d)
            .map(|(_, p)| p)
    }
}

pub fn build_wall_system(ctx: &GenusContext) -> WallSystem {
    let pairs = enumerate_pairs(ctx);
    let mut slopes: Vec<Rational> = Vec::new();
    let mut groups: Vec<Vec<WallPair>> = Vec::new();
    for p in pairs {
        if slopes.last() == Some(&p.slope) {
            groups.last_mut().expect("group exists").push(p);
        } else {
            slopes.push(p.slope.clone());
            groups.push(vec![p]);
        }
    }
    let eta = slopes.len() as i64 - 2;
    let nu = if ctx.is_dual_case() { eta - 1 } else { eta + 1 };
    WallSystem {
        ctx: *ctx,
        slopes,
        groups,
        eta,
        nu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: i64) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn slopes_from_tables() {
        assert_eq!(slope(1, -1, &ctx(27)), rat(5, 3));
        assert_eq!(slope(0, -1, &ctx(28)), rat(15, 1));
        assert_eq!(slope(1, 3, &ctx(28)), rat(1, 3));
    }

    #[test]
    fn admissibility() {
        let c = ctx(27);
        assert!(is_admissible(1, 2, &c));
        assert!(!is_admissible(1, 0, &c));
        assert!(!is_admissible(0, -2, &c));
        assert!(!is_admissible(-1, 0, &c));
        assert!(matches!(
            WallPair::new(1, 0, &c),
            Err(Error::NotAdmissible { c: 1, d: 0, g: 27 })
        ));
    }

    #[test]
    fn pair_vector_and_t() {
        let p = WallPair::new(7, -1, &ctx(27)).unwrap();
        assert_eq!(p.vector, MukaiVector::from_i64(15, -7, 85));
        assert_eq!(p.t, 1);
        let p = WallPair::new(1, 0, &ctx(28)).unwrap();
        assert_eq!(p.vector, MukaiVector::from_i64(3, -1, 9));
        assert_eq!(p.t, 6);
    }

    #[test]
    fn enumerates_g27_table() {
        let got: Vec<_> = enumerate_pairs(&ctx(27)).iter().map(WallPair::key).collect();
        let want = vec![
            (0, -1), (0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, -1), (0, 6),
            (1, 2), (2, -1), (1, 5), (2, 4), (3, 3), (4, 2), (5, 1), (6, 0), (7, -1),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn enumerates_g28_table() {
        let got: Vec<_> = enumerate_pairs(&ctx(28)).iter().map(WallPair::key).collect();
        let want = vec![
            (0, -1), (0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 0), (1, 3),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn wall_system_g27() {
        let w = build_wall_system(&ctx(27));
        assert_eq!(w.slopes().len(), 17);
        assert_eq!(w.eta, 15);
        assert_eq!(w.nu, 14);
        let j7: Vec<_> = w.group(7).unwrap().iter().map(WallPair::key).collect();
        assert_eq!(j7, vec![(0, 6), (1, 2)]);
        assert_eq!(w.slope(7), Some(&rat(1, 1)));
        assert_eq!(w.index_of_pair(7, -1), Some(15));
    }

    #[test]
    fn wall_system_g28() {
        let w = build_wall_system(&ctx(28));
        assert_eq!(w.slopes().len(), 9);
        assert_eq!(w.eta, 7);
        assert_eq!(w.nu, 8);
        let j6: Vec<_> = w.group(6).unwrap().iter().map(WallPair::key).collect();
        assert_eq!(j6, vec![(0, 6), (1, 0)]);
        assert!(w.group(8).is_none());
        assert!(w.check_index(-2).is_err());
    }

    #[test]
    fn fixed_first_groups() {
        let w = build_wall_system(&ctx(5));
        assert_eq!(w.group(-1).unwrap()[0].key(), (0, -1));
        assert_eq!(w.group(-1).unwrap().len(), 1);
        assert_eq!(w.group(0).unwrap()[0].key(), (0, 0));
        assert_eq!(w.group(0).unwrap().len(), 1);
    }

    #[test]
    fn odd_divisor_listing() {
        let mut d = odd_divisors(45);
        d.sort();
        assert_eq!(d, vec![1, 3, 5, 9, 15, 45]);
        assert_eq!(odd_divisors(16), vec![1]);
    }
}
