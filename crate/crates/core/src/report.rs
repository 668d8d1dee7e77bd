//! Assembled per-genus reports and their renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cones::{chamber_table, ChamberTable, ModelKind, PicClass};
use crate::duality::{build_duality_table, non_isomorphism_certificate, vartheta_wall_image, DualityTable};
use crate::error::{Error, Result};
use crate::exact::{big_json, fmt_rational, rational_json};
use crate::flips::{sequence_summary, DivisorialWallData, FlipRecord, SequenceSummary};
use crate::lattice::{dual_twist_isometry, theta_isometry, discriminant_action, GenusContext, LatticeIsometry, MukaiVector};
use crate::sod::{block_inventory, theorem_verdicts, BlockInventory, VisitorVerdict};
use crate::verify::GenusCheck;
use crate::walls::{build_wall_system, WallSystem};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Md,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "md" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected md, csv or json)")),
        }
    }
}

/// A header row plus string cells, rendered as pipe-delimited Markdown with
/// single-space padding, or as RFC 4180 CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new(headers: &[&str]) -> TextTable {
        TextTable {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_markdown(&self) -> String {
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        let mut out = line(&self.headers);
        out.push_str(&format!("|{}\n", "---|".repeat(self.headers.len())));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invariant(format!("csv: {e}"));
        w.write_record(&self.headers).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn vec_json(v: &MukaiVector) -> Value {
    json!([big_json(&v.r), big_json(&v.m), big_json(&v.s)])
}

fn pic_json(p: &PicClass) -> Value {
    json!({ "m": rational_json(&p.m), "n": rational_json(&p.n) })
}

fn kind_str(k: ModelKind) -> &'static str {
    match k {
        ModelKind::Fano => "fano",
        ModelKind::WeakFano => "weak_fano",
    }
}

#[derive(Debug, Clone)]
pub struct GenusReport {
    pub ctx: GenusContext,
    pub walls: WallSystem,
    pub summary: SequenceSummary,
    pub chambers: ChamberTable,
    pub verdict: VisitorVerdict,
    pub inventory: BlockInventory,
    pub duality: Option<DualityTable>,
}

impl GenusReport {
    pub fn build(g: i64) -> Result<GenusReport> {
        let ctx = GenusContext::new(g)?;
        let walls = build_wall_system(&ctx);
        let summary = sequence_summary(&ctx, &walls)?;
        let chambers = chamber_table(&ctx, &walls)?;
        let verdict = theorem_verdicts(&ctx, &walls)?;
        let inventory = block_inventory(&ctx, &walls)?;
        let duality = if ctx.is_dual_case() {
            Some(build_duality_table(&ctx, &walls)?)
        } else {
            None
        };
        Ok(GenusReport {
            ctx,
            walls,
            summary,
            chambers,
            verdict,
            inventory,
            duality,
        })
    }

    pub fn divisorial(&self) -> Option<&DivisorialWallData> {
        self.summary.divisorial.as_ref()
    }

    fn records(&self) -> impl Iterator<Item = (i64, &FlipRecord)> {
        self.summary.records()
    }

    pub fn wall_table(&self) -> TextTable {
        let mut t = TextTable::new(&["i", "(c,d)", "μ", "k⁺", "k⁻", "k⁺−k⁻", "v_{c,d}", "dim M(v_{c,d})"]);
        for (i, r) in self.records() {
            t.push(vec![
                i.to_string(),
                r.pair.label(),
                r.pair.slope_string(),
                r.k_plus.to_string(),
                r.k_minus.to_string(),
                r.gain().to_string(),
                r.pair.vector.to_string(),
                r.moduli_dim.to_string(),
            ]);
        }
        t
    }

    pub fn chamber_text_table(&self) -> TextTable {
        let mut t = TextTable::new(&["i", "lower", "upper", "lower (H,E)", "upper (H,E)", "−K", "note"]);
        let k = &self.chambers.anticanonical;
        for c in &self.chambers.chambers {
            let pos = if c.strictly_contains(k) {
                "interior"
            } else if c.closure_contains(k) {
                "boundary"
            } else {
                ""
            };
            t.push(vec![
                c.index.to_string(),
                c.lower.to_string(),
                c.upper.to_string(),
                c.lower.he_string(),
                c.upper.he_string(),
                pos.to_string(),
                if c.upper_is_outer_bound { "upper bound is outer".into() } else { String::new() },
            ]);
        }
        t
    }

    pub fn sod_text_table(&self) -> TextTable {
        let mut t = TextTable::new(&["block", "(c,d)", "dimension", "multiplicity", "twisted_possible"]);
        for b in &self.inventory.blocks {
            t.push(vec![
                b.label.clone(),
                b.pair.map(|(c, d)| format!("({c},{d})")).unwrap_or_default(),
                b.dimension.to_string(),
                b.multiplicity.to_string(),
                b.twisted_possible.to_string(),
            ]);
        }
        t
    }

    pub fn duality_text_table(&self) -> Result<Option<TextTable>> {
        let Some(d) = &self.duality else { return Ok(None) };
        let mut t = TextTable::new(&["i", "(c,d)", "i'", "(c',d')", "μ", "μ'", "self-dual", "ϑ(v_{c,d})"]);
        for (i, p) in self.walls.indexed_pairs() {
            let (c2, d2) = d.image(p.key()).expect("pair mapped");
            let q = self.walls.find_pair(c2, d2).expect("dual enumerated");
            t.push(vec![
                i.to_string(),
                p.label(),
                (self.walls.nu - i).to_string(),
                q.label(),
                p.slope_string(),
                q.slope_string(),
                (p.key() == q.key()).to_string(),
                vartheta_wall_image(p, &self.ctx)?.to_string(),
            ]);
        }
        Ok(Some(t))
    }

    pub fn to_json(&self) -> Value {
        let walls: Vec<Value> = self
            .summary
            .crossings
            .iter()
            .map(|x| {
                let pairs: Vec<Value> = x
                    .records
                    .iter()
                    .map(|r| {
                        json!({
                            "c": r.pair.c,
                            "d": r.pair.d,
                            "mu": rational_json(&r.pair.slope),
                            "k_plus": r.k_plus,
                            "k_minus": r.k_minus,
                            "vector": vec_json(&r.pair.vector),
                            "moduli_dim": r.moduli_dim,
                            "label": r.moduli_label,
                            "twisted_possible": r.twisted_possible,
                        })
                    })
                    .collect();
                json!({ "i": x.index, "kind": x.kind.as_str(), "pairs": pairs })
            })
            .collect();
        let chambers: Vec<Value> = self
            .chambers
            .chambers
            .iter()
            .map(|c| {
                json!({
                    "i": c.index,
                    "lower": pic_json(&c.lower),
                    "upper": pic_json(&c.upper),
                    "upper_is_outer_bound": c.upper_is_outer_bound,
                })
            })
            .collect();
        let visitors: Vec<Value> = self
            .verdict
            .visitors
            .iter()
            .map(|v| {
                json!({
                    "label": v.label,
                    "pair": v.pair.map(|(c, d)| json!([c, d])),
                    "wall_index": v.wall_index,
                    "strict": v.strict,
                })
            })
            .collect();
        let duality = self.duality.as_ref().map(|d| {
            let cert = non_isomorphism_certificate(&self.ctx).ok();
            json!({
                "pair_map": d.pair_map.iter().map(|(a, b)| json!({ "from": [a.0, a.1], "to": [b.0, b.1] })).collect::<Vec<_>>(),
                "group_map": d.group_map.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
                "self_dual": d.self_dual.iter().map(|(c, dd)| json!([c, dd])).collect::<Vec<_>>(),
                "discriminant": cert.map(|a| json!({
                    "modulus": a.modulus,
                    "multiplier": a.multiplier,
                    "is_trivial": a.is_trivial,
                })),
            })
        });
        let divisorial = self.divisorial().map(|d| {
            json!({
                "spherical_vector": vec_json(&d.spherical_vector),
                "strata": d.strata.iter().map(|s| json!({
                    "k": s.k,
                    "b_k": vec_json(&s.b_k),
                    "b_k_square": s.b_k_square,
                    "fiber": s.fiber,
                    "fixed_fiber_on_m": s.fixed_fiber_on_m,
                    "fixed_fiber_on_omega": s.fixed_fiber_on_omega,
                })).collect::<Vec<_>>(),
            })
        });
        json!({
            "schema": SCHEMA_VERSION,
            "genus": self.ctx.genus(),
            "eta": self.walls.eta,
            "nu": self.walls.nu,
            "parity": self.ctx.parity(),
            "walls": walls,
            "chambers": chambers,
            "anticanonical": pic_json(&self.chambers.anticanonical),
            "verdict": {
                "kind": kind_str(self.verdict.verdict),
                "model_index": self.verdict.fano_model_index,
                "fano_index": self.chambers.fano_index,
                "weak_fano_indices": self.chambers.weak_fano_indices,
                "visitors": visitors,
                "hilbert_headline_range": self.verdict.hilbert_headline_range,
            },
            "sod": {
                "model_index": self.inventory.model_index,
                "derived_composition": self.inventory.derived_composition,
                "total": self.inventory.total(),
                "blocks": self.inventory.blocks,
            },
            "duality": duality,
            "divisorial": divisorial,
        })
    }
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn render_table(r: &GenusReport, format: Format) -> Result<String> {
    match format {
        Format::Md => Ok(r.wall_table().to_markdown()),
        Format::Csv => r.wall_table().to_csv(),
        Format::Json => Ok(json_string(&r.to_json())),
    }
}

pub fn render_cones(r: &GenusReport, format: Format) -> Result<String> {
    let t = &r.chambers;
    match format {
        Format::Csv => r.chamber_text_table().to_csv(),
        Format::Json => Ok(json_string(&json!({
            "genus": r.ctx.genus(),
            "theta_g": rational_json(&t.theta_g),
            "anticanonical": pic_json(&t.anticanonical),
            "chambers": r.to_json()["chambers"].clone(),
            "fano_index": t.fano_index,
            "weak_fano_indices": t.weak_fano_indices,
            "anticanonical_walls": t.anticanonical_walls,
            "designated_model": t.designated_model,
        }))),
        Format::Md => {
            let mut s = format!("# Ample chambers, genus {}\n\n", r.ctx.genus());
            s.push_str(&r.chamber_text_table().to_markdown());
            let _ = writeln!(s, "\nθ_g = {}", fmt_rational(&t.theta_g));
            let _ = writeln!(s, "−K = {} = {}", t.anticanonical, t.anticanonical.he_string());
            match (t.fano_index, t.designated_model) {
                (Some(i), _) => {
                    let _ = writeln!(s, "Fano model: M_{i} (−K strictly inside chamber {i})");
                }
                (None, Some(j)) => {
                    let _ = writeln!(
                        s,
                        "no Fano model; −K on the wall(s) {:?}; weak Fano models {:?}; designated M_{j}",
                        t.anticanonical_walls, t.weak_fano_indices
                    );
                }
                (None, None) => {
                    let _ = writeln!(s, "no Fano or weak Fano model");
                }
            }
            Ok(s)
        }
    }
}

pub fn render_sod(r: &GenusReport, format: Format) -> Result<String> {
    let v = &r.verdict;
    match format {
        Format::Csv => r.sod_text_table().to_csv(),
        Format::Json => Ok(json_string(&json!({
            "genus": r.ctx.genus(),
            "verdict": r.to_json()["verdict"].clone(),
            "sod": r.to_json()["sod"].clone(),
        }))),
        Format::Md => {
            let mut s = format!(
                "# Block ledger, genus {} ({} model M_{})\n\n",
                r.ctx.genus(),
                kind_str(v.verdict).replace('_', " "),
                v.fano_model_index
            );
            s.push_str(&r.sod_text_table().to_markdown());
            let _ = writeln!(s, "\ntotal blocks: {}", r.inventory.total());
            s.push_str("composition: Orlov blow-up blocks plus k⁺−k⁻ per crossed pair (derived)\n");
            s.push_str("\n## Visitors\n\n");
            let mut t = TextTable::new(&["variety", "(c,d)", "wall", "strict"]);
            for x in &v.visitors {
                t.push(vec![
                    x.label.clone(),
                    x.pair.map(|(c, d)| format!("({c},{d})")).unwrap_or_default(),
                    x.wall_index.map(|i| i.to_string()).unwrap_or_default(),
                    x.strict.to_string(),
                ]);
            }
            s.push_str(&t.to_markdown());
            let _ = writeln!(s, "\nHilbert-scheme headline range: {}", v.hilbert_headline_range);
            Ok(s)
        }
    }
}

pub fn render_duality(r: &GenusReport, format: Format) -> Result<String> {
    r.ctx.require_residue(3)?;
    let table = r.duality_text_table()?.expect("dual case has a table");
    let cert = non_isomorphism_certificate(&r.ctx)?;
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => Ok(json_string(&json!({
            "genus": r.ctx.genus(),
            "nu": r.walls.nu,
            "duality": r.to_json()["duality"].clone(),
        }))),
        Format::Md => {
            let d = r.duality.as_ref().expect("dual case");
            let mut s = format!("# Wall duality, genus {} (ν = {})\n\n", r.ctx.genus(), r.walls.nu);
            s.push_str(&table.to_markdown());
            let self_dual: Vec<String> = d.self_dual.iter().map(|(c, dd)| format!("({c},{dd})")).collect();
            let _ = writeln!(s, "\nself-dual pairs: {{{}}}", self_dual.join(","));
            let _ = writeln!(
                s,
                "discriminant action: multiplication by {} on Z/{} ({})",
                cert.multiplier,
                cert.modulus,
                if cert.is_trivial { "trivial" } else { "nontrivial, so the dual surface is not isomorphic to X" }
            );
            Ok(s)
        }
    }
}

fn matrix_rows(m: &LatticeIsometry) -> Vec<String> {
    m.entry_strings().iter().map(|row| format!("[{}]", row.join(", "))).collect()
}

pub fn render_lattice(ctx: &GenusContext, format: Format) -> Result<String> {
    let psi = dual_twist_isometry(ctx);
    let theta = if ctx.is_dual_case() { Some(theta_isometry(ctx)?) } else { None };
    let disc = if ctx.is_dual_case() { Some(discriminant_action(ctx)?) } else { None };
    let mut t = TextTable::new(&["quantity", "value"]);
    t.push(vec!["genus".into(), ctx.genus().to_string()]);
    t.push(vec!["h^2".into(), ctx.h_square().to_string()]);
    t.push(vec!["v".into(), ctx.v().to_string()]);
    t.push(vec!["Ψ".into(), matrix_rows(&psi).join(" ")]);
    if let Some(th) = &theta {
        t.push(vec!["ϑ".into(), matrix_rows(th).join(" ")]);
    }
    if let Some(a) = &disc {
        t.push(vec!["discriminant multiplier".into(), format!("{} mod {}", a.multiplier, a.modulus)]);
        t.push(vec!["discriminant action trivial".into(), a.is_trivial.to_string()]);
    }
    match format {
        Format::Md => Ok(format!("# Mukai lattice, genus {}\n\n{}", ctx.genus(), t.to_markdown())),
        Format::Csv => t.to_csv(),
        Format::Json => Ok(json_string(&json!({
            "genus": ctx.genus(),
            "h_square": ctx.h_square(),
            "v": vec_json(&ctx.v()),
            "psi": psi.entry_strings(),
            "theta": theta.map(|m| m.entry_strings()),
            "discriminant": disc.map(|a| json!({
                "modulus": a.modulus,
                "multiplier": a.multiplier,
                "is_trivial": a.is_trivial,
            })),
        }))),
    }
}

pub fn render_verify(checks: &[GenusCheck], format: Format) -> Result<String> {
    let passed = checks.iter().all(GenusCheck::passed);
    let pairs: usize = checks.iter().map(|c| c.pairs_checked).sum();
    match format {
        Format::Json => Ok(json_string(&json!({
            "passed": passed,
            "genera": checks.len(),
            "pairs_checked": pairs,
            "results": checks,
        }))),
        Format::Md | Format::Csv => {
            let mut t = TextTable::new(&["genus", "invariant", "witness", "detail"]);
            for c in checks {
                for f in &c.failures {
                    t.push(vec![
                        f.genus.to_string(),
                        f.invariant.to_string(),
                        f.witness.map(|(a, b)| format!("({a},{b})")).unwrap_or_default(),
                        f.detail.clone(),
                    ]);
                }
            }
            if format == Format::Csv {
                return t.to_csv();
            }
            let (lo, hi) = match (checks.first(), checks.last()) {
                (Some(a), Some(b)) => (a.genus, b.genus),
                _ => (0, 0),
            };
            let noun = if checks.len() == 1 { "genus" } else { "genera" };
            let mut s = format!(
                "{}: genera {lo}..{hi} ({} {noun}, {pairs} pairs checked)\n",
                if passed { "PASS" } else { "FAIL" },
                checks.len()
            );
            if !passed {
                s.push('\n');
                s.push_str(&t.to_markdown());
            }
            Ok(s)
        }
    }
}
