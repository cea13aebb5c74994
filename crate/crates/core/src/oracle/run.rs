//! Full oracle census for one `q`: every orbit with its level, type, reflexibility,
//! self-duality and Frobenius bundle.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::galois::{galois_fuse, Fusion};
use super::level::{generated_level_closure, generated_level_fast};
use super::orbits::partition_quads;
use super::quads::{enumerate_block, PairQuad};
use super::reflex::{reflexible_shapes, shape_candidates, ReflexShape};
use super::selfdual::{pair_type, self_duality, SelfDualRow, SelfDuality};
use super::OracleError;
use crate::canonical::{classes, stabilizer_elements, CanonClass, Form};
use crate::twisted_group::{TwElem, TwistedGroup};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelMethod {
    /// Word traces in `SL(2, F)`.
    #[default]
    Fast,
    /// Explicit subgroup closure.
    Closure,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub level: LevelMethod,
    pub reflexibility: bool,
    pub self_duality: bool,
    pub galois: bool,
}

impl OracleOptions {
    pub fn all() -> OracleOptions {
        OracleOptions {
            level: LevelMethod::Fast,
            reflexibility: true,
            self_duality: true,
            galois: true,
        }
    }
}

/// One orbit of non-singular pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRec {
    pub key: PairQuad,
    pub size: usize,
    pub level: u32,
    /// Order of `x`.
    pub k: u64,
    /// Order of `y`.
    pub l: u64,
    pub reflexible: Option<bool>,
    pub shapes: Vec<ReflexShape>,
    /// Present only when `k = l`.
    pub self_duality: Option<SelfDuality>,
}

impl OrbitRec {
    pub fn form(&self) -> Form {
        self.key.class.form
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCensus {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub options: OracleOptions,
    /// Sorted by key.
    pub records: Vec<OrbitRec>,
    pub fusion: Option<Fusion>,
}

struct ClassCtx {
    class: CanonClass,
    stab: Vec<TwElem>,
    shapes: Vec<(ReflexShape, TwElem)>,
}

fn analyse(
    g: &TwistedGroup,
    ctx: &ClassCtx,
    opts: &OracleOptions,
    key: PairQuad,
    size: usize,
) -> Result<OrbitRec, OracleError> {
    let level = match opts.level {
        LevelMethod::Fast => generated_level_fast(g, &key)?,
        LevelMethod::Closure => generated_level_closure(g, &key)?,
    };
    let (k, l) = pair_type(g, &key);
    let shapes = if opts.reflexibility {
        reflexible_shapes(g, &key, &ctx.shapes)
    } else {
        Vec::new()
    };
    let self_dual = if opts.self_duality && k == l {
        Some(self_duality(g, &key, &ctx.stab)?)
    } else {
        None
    };
    Ok(OrbitRec {
        key,
        size,
        level,
        k,
        l,
        reflexible: opts.reflexibility.then_some(!shapes.is_empty()),
        shapes,
        self_duality: self_dual,
    })
}

impl OracleCensus {
    /// Enumerates every orbit. Classes and orbits are processed in parallel; the
    /// result is independent of scheduling.
    pub fn run(g: &TwistedGroup, opts: OracleOptions) -> Result<OracleCensus, OracleError> {
        let ctxs: Vec<ClassCtx> = classes(g.q())
            .into_iter()
            .map(|class| ClassCtx {
                class,
                stab: stabilizer_elements(g, class),
                shapes: shape_candidates(g, class),
            })
            .collect();
        let per_class = ctxs
            .par_iter()
            .map(|ctx| {
                let orbits = partition_quads(g, ctx.class, &ctx.stab, enumerate_block(g, ctx.class))?;
                orbits
                    .par_iter()
                    .map(|o| analyse(g, ctx, &opts, o.key, o.size))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, OracleError>>()?;
        let records: Vec<OrbitRec> = per_class.into_iter().flatten().collect();

        let fusion = if opts.galois {
            let stabs: HashMap<CanonClass, Vec<TwElem>> = ctxs.into_iter().map(|c| (c.class, c.stab)).collect();
            let keys: Vec<PairQuad> = records.iter().map(|r| r.key).collect();
            let levels: Vec<u32> = records.iter().map(|r| r.level).collect();
            let fusion = galois_fuse(g, &keys, &levels, &stabs)?;
            for bundle in &fusion.bundles {
                let first = &records[bundle[0]];
                let consistent = bundle.iter().all(|&i| {
                    let r = &records[i];
                    r.form() == first.form()
                        && r.level == first.level
                        && r.reflexible == first.reflexible
                        && r.self_duality == first.self_duality
                });
                if !consistent {
                    return Err(OracleError::BundleFlags { key: first.key });
                }
            }
            Some(fusion)
        } else {
            None
        };

        Ok(OracleCensus {
            p: g.p(),
            f: g.f(),
            q: g.q(),
            options: opts,
            records,
            fusion,
        })
    }

    pub fn total_orbits(&self) -> usize {
        self.records.len()
    }

    pub fn orbits_by_form(&self, form: Form) -> usize {
        self.records.iter().filter(|r| r.form() == form).count()
    }

    pub fn orbits_by_class(&self) -> BTreeMap<CanonClass, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.key.class).or_insert(0) += 1;
        }
        out
    }

    pub fn orbits_at_level(&self, e: u32) -> usize {
        self.records.iter().filter(|r| r.level == e).count()
    }

    pub fn generating_orbits(&self) -> usize {
        self.orbits_at_level(self.f)
    }

    fn reflexible_iter(&self) -> Result<impl Iterator<Item = &OrbitRec>, OracleError> {
        if !self.options.reflexibility {
            return Err(OracleError::NotComputed("reflexibility"));
        }
        Ok(self.records.iter().filter(|r| r.reflexible == Some(true)))
    }

    pub fn reflexible_orbits(&self) -> Result<usize, OracleError> {
        Ok(self.reflexible_iter()?.count())
    }

    pub fn reflexible_by_form(&self, form: Form) -> Result<usize, OracleError> {
        Ok(self.reflexible_iter()?.filter(|r| r.form() == form).count())
    }

    /// Orbits with an inverting involution of the given shape.
    pub fn reflexible_by_shape(&self, shape: ReflexShape) -> Result<usize, OracleError> {
        Ok(self.reflexible_iter()?.filter(|r| r.shapes.contains(&shape)).count())
    }

    pub fn reflexible_generating_orbits(&self) -> Result<usize, OracleError> {
        Ok(self.reflexible_iter()?.filter(|r| r.level == self.f).count())
    }

    /// One record per Frobenius bundle of generating orbits.
    fn map_representatives(&self) -> Result<Vec<&OrbitRec>, OracleError> {
        let generating = |r: &&OrbitRec| r.level == self.f;
        if self.f == 1 {
            return Ok(self.records.iter().filter(generating).collect());
        }
        let fusion = self
            .fusion
            .as_ref()
            .ok_or(OracleError::NotComputed("Frobenius fusion"))?;
        Ok(fusion
            .bundles
            .iter()
            .map(|b| &self.records[b[0]])
            .filter(generating)
            .collect())
    }

    /// Regular maps with automorphism group `M(q^2)`, up to isomorphism.
    pub fn maps(&self) -> Result<usize, OracleError> {
        Ok(self.map_representatives()?.len())
    }

    pub fn reflexible_maps(&self) -> Result<usize, OracleError> {
        if !self.options.reflexibility {
            return Err(OracleError::NotComputed("reflexibility"));
        }
        Ok(self
            .map_representatives()?
            .into_iter()
            .filter(|r| r.reflexible == Some(true))
            .count())
    }

    pub fn bundles(&self) -> Option<usize> {
        self.fusion.as_ref().map(Fusion::len)
    }

    /// Self-duality counts over maps with `k = l`, split by the form of `y`.
    pub fn self_dual_rows(&self) -> Result<[SelfDualRow; 2], OracleError> {
        if !self.options.self_duality {
            return Err(OracleError::NotComputed("self-duality"));
        }
        let reps = self.map_representatives()?;
        let row = |form: Form| {
            let mut r = SelfDualRow {
                q: self.q,
                form,
                k_eq_l: 0,
                pos_sd: 0,
                neg_sd: 0,
                both: 0,
            };
            for rec in reps.iter().filter(|rec| rec.form() == form) {
                let Some(sd) = rec.self_duality else { continue };
                r.k_eq_l += 1;
                r.pos_sd += sd.positive as u64;
                r.neg_sd += sd.negative as u64;
                r.both += (sd.positive && sd.negative) as u64;
            }
            r
        };
        Ok([row(Form::Dia), row(Form::Off)])
    }
}
