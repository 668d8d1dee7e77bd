//! The rank-3 algebraic Mukai lattice of a Picard-rank-one K3 surface.
//!
//! A vector `(r, m, s)` stands for `(r, m·h, s)` with `h² = 2g − 2`, so the
//! Mukai pairing reads `⟨(r,m,s),(r',m',s')⟩ = (2g−2)·m·m' − r·s' − r'·s`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, rat_int, Rational};

/// Largest genus accepted; keeps pair indices and loop bounds in `i64`.
pub const MAX_GENUS: i64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Genus of the polarized K3 surface, validated to `g ≥ 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenusContext {
    g: i64,
}

impl GenusContext {
    pub fn new(g: i64) -> Result<Self> {
        if g < 4 {
            return Err(Error::GenusTooSmall(g));
        }
        if g > MAX_GENUS {
            return Err(Error::GenusTooLarge(g));
        }
        Ok(GenusContext { g })
    }

    pub fn genus(&self) -> i64 {
        self.g
    }

    /// `h² = 2g − 2`.
    pub fn h_square(&self) -> i64 {
        2 * self.g - 2
    }

    pub fn parity(&self) -> Parity {
        if self.g % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn residue_mod_4(&self) -> i64 {
        self.g % 4
    }

    /// `g ≡ 3 mod 4`: the case with a Mukai-dual K3 and a weak Fano endpoint.
    pub fn is_dual_case(&self) -> bool {
        self.g % 4 == 3
    }

    pub fn require_residue(&self, expected: i64) -> Result<()> {
        if self.residue_mod_4() == expected {
            Ok(())
        } else {
            Err(Error::WrongResidue {
                g: self.g,
                expected,
                residue: self.residue_mod_4(),
            })
        }
    }

    /// The fibre class `v = (0, h, 1 − g)`.
    pub fn v(&self) -> MukaiVector {
        MukaiVector::from_i64(0, 1, 1 - self.g)
    }
}

/// Integer triple `(r, m, s)` representing `(r, m·h, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigInt,
    pub m: BigInt,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, m: impl Into<BigInt>, s: impl Into<BigInt>) -> Self {
        MukaiVector {
            r: r.into(),
            m: m.into(),
            s: s.into(),
        }
    }

    pub fn from_i64(r: i64, m: i64, s: i64) -> Self {
        MukaiVector::new(r, m, s)
    }

    pub fn components(&self) -> [BigInt; 3] {
        [self.r.clone(), self.m.clone(), self.s.clone()]
    }

    pub fn to_rational(&self) -> [Rational; 3] {
        [rat_int(&self.r), rat_int(&self.m), rat_int(&self.s)]
    }

    /// Components as `i64` when they fit (used by serializers).
    pub fn to_i64_triple(&self) -> Option<[i64; 3]> {
        Some([self.r.to_i64()?, self.m.to_i64()?, self.s.to_i64()?])
    }
}

/// `m·h` written the way the tables do: `0`, `h`, `-h`, `2h`, `-7h`.
pub fn fmt_h_multiple(m: &BigInt) -> String {
    if m.is_zero() {
        "0".to_string()
    } else if m.is_one() {
        "h".to_string()
    } else if *m == -BigInt::one() {
        "-h".to_string()
    } else {
        format!("{m}h")
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, fmt_h_multiple(&self.m), self.s)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r + &o.r, &self.m + &o.m, &self.s + &o.s)
    }
}

impl Sub for &MukaiVector {
    type Output = MukaiVector;
    fn sub(self, o: &MukaiVector) -> MukaiVector {
        MukaiVector::new(&self.r - &o.r, &self.m - &o.m, &self.s - &o.s)
    }
}

impl Neg for &MukaiVector {
    type Output = MukaiVector;
    fn neg(self) -> MukaiVector {
        MukaiVector::new(-&self.r, -&self.m, -&self.s)
    }
}

impl Mul<&MukaiVector> for i64 {
    type Output = MukaiVector;
    fn mul(self, v: &MukaiVector) -> MukaiVector {
        let k = int(self);
        MukaiVector::new(&k * &v.r, &k * &v.m, &k * &v.s)
    }
}

pub fn mukai_pairing(a: &MukaiVector, b: &MukaiVector, ctx: &GenusContext) -> BigInt {
    int(ctx.h_square()) * &a.m * &b.m - &a.r * &b.s - &b.r * &a.s
}

pub fn mukai_square(a: &MukaiVector, ctx: &GenusContext) -> BigInt {
    mukai_pairing(a, a, ctx)
}

/// Pairing extended to rational coordinates.
pub fn rational_pairing(a: &[Rational; 3], b: &[Rational; 3], ctx: &GenusContext) -> Rational {
    rat(ctx.h_square(), 1) * &a[1] * &b[1] - &a[0] * &b[2] - &b[0] * &a[2]
}

/// Mukai vector of `Ψ(E) = RHom(E, Λ*)[1]` given `v(E) = (r, m, s)`:
/// `(−r, m + r, −(r + 2m)(g − 1) − s)`.
pub fn dual_twist_vector(a: &MukaiVector, ctx: &GenusContext) -> MukaiVector {
    let gm1 = int(ctx.genus() - 1);
    let s = -((&a.r + int(2) * &a.m) * &gm1) - &a.s;
    MukaiVector::new(-&a.r, &a.m + &a.r, s)
}

/// A 3×3 rational matrix acting on `(r, m, s)` column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIsometry {
    pub matrix: [[Rational; 3]; 3],
}

impl LatticeIsometry {
    pub fn apply_rational(&self, x: &[Rational; 3]) -> [Rational; 3] {
        std::array::from_fn(|i| {
            self.matrix[i]
                .iter()
                .zip(x.iter())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
    }

    /// Image of an integral vector; fails if it leaves the lattice.
    pub fn apply(&self, v: &MukaiVector) -> Result<MukaiVector> {
        let [r, m, s] = self.apply_rational(&v.to_rational());
        if r.is_integer() && m.is_integer() && s.is_integer() {
            Ok(MukaiVector::new(r.to_integer(), m.to_integer(), s.to_integer()))
        } else {
            Err(Error::NonIntegral(format!(
                "image of {v} is ({}, {}, {})",
                fmt_rational(&r),
                fmt_rational(&m),
                fmt_rational(&s)
            )))
        }
    }

    /// Integral on the lattice iff every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.matrix.iter().flatten().all(|q| q.is_integer())
    }

    /// Checks `⟨Φeᵢ, Φeⱼ⟩ = ⟨eᵢ, eⱼ⟩` on all nine basis products.
    pub fn preserves_pairing(&self, ctx: &GenusContext) -> bool {
        let basis = standard_basis();
        let images: Vec<_> = basis.iter().map(|e| self.apply_rational(e)).collect();
        (0..3).all(|i| {
            (0..3).all(|j| {
                rational_pairing(&images[i], &images[j], ctx)
                    == rational_pairing(&basis[i], &basis[j], ctx)
            })
        })
    }

    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        LatticeIsometry {
            matrix: mat_mul(&self.matrix, &other.matrix),
        }
    }

    pub fn entry_strings(&self) -> [[String; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| fmt_rational(&self.matrix[i][j])))
    }
}

fn standard_basis() -> [[Rational; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { rat(1, 1) } else { rat(0, 1) }))
}

type Mat3 = [[Rational; 3]; 3];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

fn det3(a: &Mat3) -> Rational {
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

fn inverse3(a: &Mat3) -> Option<Mat3> {
    let det = det3(a);
    if det.is_zero() {
        return None;
    }
    // adjugate transpose: inv[j][i] = cofactor(i, j) / det
    let cof = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = &a[rows[0]][cols[0]] * &a[rows[1]][cols[1]]
            - &a[rows[0]][cols[1]] * &a[rows[1]][cols[0]];
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    Some(std::array::from_fn(|j| {
        std::array::from_fn(|i| cof(i, j) / &det)
    }))
}

/// The matrix of `Ψ` on Mukai vectors.
pub fn dual_twist_isometry(ctx: &GenusContext) -> LatticeIsometry {
    let g1 = ctx.genus() - 1;
    let m = [[-1, 0, 0], [1, 1, 0], [-g1, -2 * g1, -1]];
    LatticeIsometry {
        matrix: std::array::from_fn(|i| std::array::from_fn(|j| rat(m[i][j], 1))),
    }
}

/// The cohomological action `ϑ` of the Mukai-dual equivalence, for
/// `g ≡ 3 mod 4`. Determined by swapping `(0,0,−1)` and `(2,−1,(g−1)/2)`
/// while fixing `v`; the dual lattice is identified coordinate-wise.
pub fn theta_isometry(ctx: &GenusContext) -> Result<LatticeIsometry> {
    ctx.require_residue(3)?;
    let g = ctx.genus();
    let point = [rat(0, 1), rat(0, 1), rat(-1, 1)];
    let rank_two = [rat(2, 1), rat(-1, 1), rat(g - 1, 2)];
    let v = [rat(0, 1), rat(1, 1), rat(1 - g, 1)];

    let sources = [point.clone(), rank_two.clone(), v.clone()];
    let targets = [rank_two, point, v];
    // columns are the source (resp. target) vectors
    let src: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| sources[j][i].clone()));
    let dst: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| targets[j][i].clone()));
    let src_inv = inverse3(&src).ok_or_else(|| {
        Error::Invariant(format!("ϑ source vectors are dependent for genus {g}"))
    })?;
    let theta = LatticeIsometry {
        matrix: mat_mul(&dst, &src_inv),
    };
    if !theta.preserves_pairing(ctx) || !theta.is_integral() {
        return Err(Error::Invariant(format!(
            "ϑ fails to be an integral isometry for genus {g}"
        )));
    }
    Ok(theta)
}

/// Action of an isometry on the cyclic discriminant group `A*/A ≅ ℤ/(2g−2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscriminantAction {
    pub modulus: i64,
    pub multiplier: i64,
    pub is_trivial: bool,
}

impl DiscriminantAction {
    pub fn new(modulus: i64, multiplier: i64) -> Self {
        let multiplier = multiplier.rem_euclid(modulus);
        let is_trivial = multiplier == 1 % modulus || multiplier == modulus - 1;
        DiscriminantAction {
            modulus,
            multiplier,
            is_trivial,
        }
    }

    pub fn squares_to_one(&self) -> bool {
        let m = i128::from(self.multiplier);
        (m * m).rem_euclid(i128::from(self.modulus)) == 1
    }
}

/// Reads off the action of `ϑ` on the generator `(0, h, 0)/h²` of `A*/A`.
pub fn discriminant_action(ctx: &GenusContext) -> Result<DiscriminantAction> {
    let theta = theta_isometry(ctx)?;
    let image = theta.apply(&MukaiVector::from_i64(0, 1, 0))?;
    let modulus = int(ctx.h_square());
    // the U-part of ϑ(generator) must be integral
    if !image.r.is_multiple_of(&modulus) || !image.s.is_multiple_of(&modulus) {
        return Err(Error::Invariant(format!(
            "ϑ(0,h,0) = {image} leaves U + ℤ·h/h² for genus {}",
            ctx.genus()
        )));
    }
    let multiplier = image.m.mod_floor(&modulus);
    let multiplier = multiplier
        .to_i64()
        .ok_or_else(|| Error::Invariant("discriminant multiplier overflow".into()))?;
    Ok(DiscriminantAction::new(ctx.h_square(), multiplier))
}
