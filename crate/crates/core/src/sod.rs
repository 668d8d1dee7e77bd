//! Fano-visitor verdicts and the block ledger of the (weak) Fano model.
//!
//! The ledger starts from Orlov's blow-up formula on `M₁ = Bl_X P^g`
//! (`g+1` points, `g−3` copies of `D(X)`) and adds `k⁺ − k⁻` copies of
//! `D(M(v_{c,d}))` for every pair crossed on the way to the Fano model.
//! This is a derived composition, not a single quoted decomposition.

use serde::Serialize;

use crate::cones::{chamber_table, ModelKind};
use crate::error::{Error, Result};
use crate::exact::rat;
use crate::flips::{build_crossing, FlipRecord};
use crate::lattice::GenusContext;
use crate::walls::{WallPair, WallSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCondition {
    StrictGain,
    Equality,
    Loss,
}

pub fn embedding_condition(record: &FlipRecord) -> EmbeddingCondition {
    match record.k_plus.cmp(&record.k_minus) {
        std::cmp::Ordering::Greater => EmbeddingCondition::StrictGain,
        std::cmp::Ordering::Equal => EmbeddingCondition::Equality,
        std::cmp::Ordering::Less => EmbeddingCondition::Loss,
    }
}

/// `(g − 1 − 4d) / (2(2c+1)²) > 1`, the visitor inequality for a pair.
pub fn visitor_inequality(pair: &WallPair, ctx: &GenusContext) -> bool {
    let q = 2 * pair.c + 1;
    rat(ctx.genus() - 1 - 4 * pair.d, 2 * q * q) > rat(1, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Visitor {
    pub label: String,
    /// `None` for the surface `X` itself.
    pub pair: Option<(i64, i64)>,
    pub wall_index: Option<i64>,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VisitorVerdict {
    pub genus: i64,
    pub verdict: ModelKind,
    pub fano_model_index: i64,
    pub visitors: Vec<Visitor>,
    /// The headline range for Hilbert-scheme visitors; the bound actually
    /// enforced is the strict inequality above (`d < (g−3)/4` when `c = 0`).
    pub hilbert_headline_range: String,
}

fn model_index(ctx: &GenusContext, walls: &WallSystem) -> Result<(i64, ModelKind)> {
    let table = chamber_table(ctx, walls)?;
    match (table.designated_model, table.designated_kind()) {
        (Some(j), Some(kind)) => Ok((j, kind)),
        _ => Err(Error::Invariant(format!(
            "no Fano or weak Fano model for genus {}",
            ctx.genus()
        ))),
    }
}

pub fn theorem_verdicts(ctx: &GenusContext, walls: &WallSystem) -> Result<VisitorVerdict> {
    let (j, kind) = model_index(ctx, walls)?;
    let mut visitors = vec![Visitor {
        label: "X".to_string(),
        pair: None,
        wall_index: None,
        strict: true,
    }];
    for i in -1..j {
        for rec in build_crossing(i, ctx, walls)?.records {
            visitors.push(Visitor {
                label: rec.moduli_label.clone(),
                pair: Some(rec.pair.key()),
                wall_index: Some(i),
                strict: embedding_condition(&rec) == EmbeddingCondition::StrictGain,
            });
        }
    }
    Ok(VisitorVerdict {
        genus: ctx.genus(),
        verdict: kind,
        fano_model_index: j,
        visitors,
        hilbert_headline_range: format!("0 <= d <= {}", (ctx.genus() + 1) / 4),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SodBlock {
    pub label: String,
    pub dimension: i64,
    pub multiplicity: i64,
    pub twisted_possible: bool,
    pub pair: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockInventory {
    pub model_index: i64,
    pub blocks: Vec<SodBlock>,
    pub derived_composition: bool,
}

impl BlockInventory {
    pub fn total(&self) -> i64 {
        self.blocks.iter().map(|b| b.multiplicity).sum()
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.multiplicity).collect()
    }
}

pub fn block_inventory(ctx: &GenusContext, walls: &WallSystem) -> Result<BlockInventory> {
    let (j, _) = model_index(ctx, walls)?;
    let g = ctx.genus();
    let mut blocks = vec![
        SodBlock {
            label: "D(pt)".to_string(),
            dimension: 0,
            multiplicity: g + 1,
            twisted_possible: false,
            pair: None,
        },
        SodBlock {
            label: "D(X)".to_string(),
            dimension: 2,
            multiplicity: g - 3,
            twisted_possible: false,
            pair: None,
        },
    ];
    for i in 1..j {
        for rec in build_crossing(i, ctx, walls)?.records {
            match embedding_condition(&rec) {
                EmbeddingCondition::StrictGain => blocks.push(SodBlock {
                    label: format!("D({})", rec.moduli_label),
                    dimension: rec.moduli_dim,
                    multiplicity: rec.gain(),
                    twisted_possible: rec.twisted_possible,
                    pair: Some(rec.pair.key()),
                }),
                EmbeddingCondition::Equality => {}
                EmbeddingCondition::Loss => {
                    return Err(Error::Invariant(format!(
                        "pair {} before model {j} has k+ < k-",
                        rec.pair.label()
                    )))
                }
            }
        }
    }
    Ok(BlockInventory {
        model_index: j,
        blocks,
        derived_composition: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walls::build_wall_system;

    fn ctx(g: i64) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    fn record(c: i64, d: i64, g: i64) -> FlipRecord {
        let cx = ctx(g);
        FlipRecord::new(&WallPair::new(c, d, &cx).unwrap(), &cx).unwrap()
    }

    #[test]
    fn conditions() {
        assert_eq!(embedding_condition(&record(0, 5, 27)), EmbeddingCondition::StrictGain);
        assert_eq!(embedding_condition(&record(1, 2, 27)), EmbeddingCondition::Equality);
        assert_eq!(embedding_condition(&record(1, 3, 28)), EmbeddingCondition::Loss);
    }

    #[test]
    fn verdict_g28() {
        let c = ctx(28);
        let v = theorem_verdicts(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(v.verdict, ModelKind::Fano);
        assert_eq!(v.fano_model_index, 7);
        let labels: Vec<_> = v.visitors.iter().map(|x| x.label.as_str()).collect();
        for d in -1..=5 {
            assert!(labels.contains(&format!("Hilb^{}(X)", d + 1).as_str()));
        }
        assert!(labels.contains(&"M(3,-h,9)"));
        assert!(v.visitors.iter().all(|x| x.strict));
    }

    #[test]
    fn verdict_g27() {
        let c = ctx(27);
        let v = theorem_verdicts(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(v.verdict, ModelKind::WeakFano);
        let find = |l: &str| v.visitors.iter().find(|x| x.label == l).unwrap().strict;
        assert!(find("Hilb^6(X)"));
        assert!(find("M(3,-h,9)"));
        assert!(!find("Hilb^7(X)"));
        assert!(!find("M(3,-h,8)"));
    }

    #[test]
    fn verdict_g5() {
        let c = ctx(5);
        assert_eq!(
            theorem_verdicts(&c, &build_wall_system(&c)).unwrap().verdict,
            ModelKind::Fano
        );
    }

    #[test]
    fn inventory_g28() {
        let c = ctx(28);
        let inv = block_inventory(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(inv.multiplicities(), vec![29, 25, 21, 17, 13, 9, 5, 1, 3]);
        assert_eq!(inv.blocks[2].label, "D(Hilb^2(X))");
        assert_eq!(inv.blocks[8].label, "D(M(3,-h,9))");
        assert_eq!(inv.blocks[8].dimension, 2);
        assert_eq!(inv.total(), 123);
    }

    #[test]
    fn inventory_g27_skips_equalities() {
        let c = ctx(27);
        let inv = block_inventory(&c, &build_wall_system(&c)).unwrap();
        assert_eq!(inv.model_index, 8);
        assert_eq!(inv.multiplicities(), vec![28, 24, 20, 16, 12, 8, 4, 4]);
    }
}
