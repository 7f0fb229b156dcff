//! Dispatch from a parsed config to the core operations, and the report type
//! that every output format is rendered from.

use k3walls_core::walls::default_rank_bound;
use k3walls_core::{
    bb_square, classify, classify_wall, curve_divisor_pairing, gieseker_bound, hilb_nef_cone,
    is_geometric, lagrangian_check, potential_destabilizers, spherical_solver, theta_hilb,
    w_limit_infinity, w_limit_zero, w_sigma, walls_on_vertical_path, ClassKind, ConeKind,
    Constraint, Destabilizer, GiesekerBoundReport, HilbDivisor, MukaiClass, OrthogonalClass, Rat,
    RatInterval, Region, StabilityPoint, SurfaceData, Wall, WallFlags, WallGeometry,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{AnalysisConfig, Command, ConfigError};

pub const TOOL: &str = "k3walls";
pub const RANK_BOUND_ENV: &str = "K3WALLS_RANK_BOUND";

/// Holes are listed up to this denominator; beyond it the spikes are shorter
/// than `1/(d·32²)` and invisible at any sensible plot scale.
const MAX_HOLE_DENOMINATOR: i64 = 32;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: k3walls_core::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core { .. } => 3,
        }
    }
}

trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, RunError>;
}

impl<T> Context<T> for k3walls_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, RunError> {
        self.map_err(|source| RunError::Core {
            context: what(),
            source,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub config: AnalysisConfig,
    /// Rank bound actually used, for the commands that enumerate classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_bound: Option<u32>,
    pub result: Payload,
}

/// A divisor class given both as a Mukai vector and, when it lives on a
/// Hilbert scheme of points, in the `(H̃, B)` basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub mukai: MukaiClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilb: Option<HilbCoords>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbCoords {
    pub display: String,
    pub fraction: String,
    #[serde(rename = "H~")]
    pub x: Rat,
    #[serde(rename = "B")]
    pub y: Rat,
    pub bb_square: Rat,
}

impl HilbCoords {
    fn of(div: &HilbDivisor, x: &SurfaceData) -> Self {
        HilbCoords {
            display: div.to_string(),
            fraction: div.to_fraction_string(),
            x: div.x.clone(),
            y: div.y.clone(),
            bb_square: bb_square(div, x),
        }
    }
}

/// Inverse of `θ` for `v = (1, 0, 1 - n)`: `x·H̃ + y·B ↦ (-y, -x, -y(n - 1))`.
fn mukai_of_hilb(div: &HilbDivisor) -> MukaiClass {
    MukaiClass::new(-&div.y, -&div.x, -&div.y * (div.n - 1))
}

fn hilb_entry(div: &HilbDivisor, x: &SurfaceData) -> DivisorEntry {
    DivisorEntry {
        mukai: mukai_of_hilb(div),
        hilb: Some(HilbCoords::of(div, x)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallEntry {
    #[serde(flatten)]
    pub geometry: WallGeometry,
    /// Primitive class of the lowest positive-rank destabilizer.
    pub label: String,
    pub destabilizers: Vec<Destabilizer>,
    pub flags: WallFlags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingEntry {
    #[serde(rename = "T")]
    pub t_sq: Rat,
    pub wall: WallEntry,
}

/// A spike `{b} × (0, 1/(d q²)]` of non-geometric points below `b = p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hole {
    pub b: Rat,
    #[serde(rename = "T_max")]
    pub t_sq_max: Rat,
    pub witness: MukaiClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub display: String,
    pub p: Rat,
    pub q: Rat,
    pub self_pairing: Rat,
    /// Pairing with each cone generator, in order.
    pub pairings: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Payload {
    Walls {
        region: Region,
        walls: Vec<WallEntry>,
        holes: Vec<Hole>,
    },
    Path {
        b: Rat,
        #[serde(rename = "T_range")]
        t_range: RatInterval,
        crossings: Vec<CrossingEntry>,
        holes: Vec<Hole>,
    },
    GiesekerBound {
        b: Rat,
        #[serde(flatten)]
        bound: GiesekerBoundReport,
    },
    NefDivisor {
        b: Rat,
        #[serde(rename = "T")]
        t_sq: Rat,
        w_sigma: DivisorEntry,
        w_sigma_square: Rat,
        limit_zero: DivisorEntry,
        limit_infinity: DivisorEntry,
    },
    HilbNef {
        n: i64,
        generators: Vec<DivisorEntry>,
        extremal_curve: CurveEntry,
    },
    Lagrangian {
        n: i64,
        found: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        square_zero_ray: Option<DivisorEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit_divisor: Option<DivisorEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        nef_generators: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        movable_generators: Option<Vec<String>>,
    },
    IsGeometric {
        b: Rat,
        #[serde(rename = "T")]
        t_sq: Rat,
        geometric: bool,
        witness: Option<MukaiClass>,
    },
    SphericalSolve {
        constraints: Vec<Constraint>,
        solutions: Vec<MukaiClass>,
    },
    Classify {
        class: MukaiClass,
        square: Rat,
        kind: ClassKind,
        positive_vector: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<Region>,
        walls: Vec<WallEntry>,
    },
}

impl Payload {
    pub fn walls(&self) -> Vec<&WallEntry> {
        match self {
            Payload::Walls { walls, .. } | Payload::Classify { walls, .. } => walls.iter().collect(),
            Payload::Path { crossings, .. } => crossings.iter().map(|c| &c.wall).collect(),
            _ => Vec::new(),
        }
    }
}

/// Runs the analysis, taking the rank-bound fallback from the environment.
pub fn run(config: &AnalysisConfig) -> Result<AnalysisReport, RunError> {
    let env = std::env::var(RANK_BOUND_ENV).ok();
    run_with_env(config, env.as_deref())
}

/// Rank bound precedence: explicit config value, then `env`, then
/// `2|r(v)| + 4`.
pub fn resolve_rank_bound(
    config: &AnalysisConfig,
    env: Option<&str>,
    v: &MukaiClass,
) -> Result<u32, RunError> {
    if let Some(bound) = config.rank_bound {
        return Ok(bound);
    }
    if let Some(raw) = env.filter(|s| !s.trim().is_empty()) {
        let mut probe = AnalysisConfig::new(config.command);
        probe
            .set("rank_bound", raw)
            .map_err(|e| ConfigError::Malformed {
                key: RANK_BOUND_ENV.to_string(),
                msg: e.to_string(),
            })?;
        return Ok(probe.rank_bound.unwrap());
    }
    Ok(default_rank_bound(v))
}

pub fn run_with_env(config: &AnalysisConfig, env: Option<&str>) -> Result<AnalysisReport, RunError> {
    let surface = || -> Result<SurfaceData, RunError> {
        let d = *config.require("d", &config.d)?;
        SurfaceData::new(d).context(|| format!("{}: surface", config.command))
    };
    let cmd = config.command;
    let mut rank_bound = None;

    let result = match cmd {
        Command::Walls => {
            let x = surface()?;
            let v = config.require("vector", &config.vector)?;
            let region = region_of(config)?;
            let bound = resolve_rank_bound(config, env, v)?;
            rank_bound = Some(bound);
            let walls = potential_destabilizers(v, &region, bound, &x)
                .context(|| format!("walls: enumerating destabilizers of {v} on {} x {}", region.b, region.t_sq))?;
            Payload::Walls {
                walls: wall_entries(v, walls, &x, config.n)?,
                holes: holes_in(&region.b, &region.t_sq, &x),
                region,
            }
        }
        Command::Path => {
            let x = surface()?;
            let v = config.require("vector", &config.vector)?;
            let b = config.require("b", &config.b)?;
            let t_range = config.require("T_range", &config.t_range)?;
            let bound = resolve_rank_bound(config, env, v)?;
            rank_bound = Some(bound);
            let crossings = walls_on_vertical_path(v, b, t_range, bound, &x)
                .context(|| format!("path: walls of {v} along b = {b}, T in {t_range}"))?;
            let mut entries = Vec::with_capacity(crossings.len());
            for c in crossings {
                entries.push(CrossingEntry {
                    t_sq: c.t_sq,
                    wall: wall_entry(v, c.wall, &x, config.n)?,
                });
            }
            Payload::Path {
                b: b.clone(),
                t_range: t_range.clone(),
                crossings: entries,
                holes: holes_in(&RatInterval::point(b.clone()), t_range, &x),
            }
        }
        Command::GiesekerBound => {
            let x = surface()?;
            let v = config.require("vector", &config.vector)?;
            let b = config.require("b", &config.b)?;
            let bound = gieseker_bound(v, b, &x).context(|| format!("gieseker-bound: {v} at b = {b}"))?;
            Payload::GiesekerBound { b: b.clone(), bound }
        }
        Command::NefDivisor => {
            let x = surface()?;
            let v = config.require("vector", &config.vector)?;
            let b = config.require("b", &config.b)?;
            let t_sq = config.require("T", &config.t_sq)?;
            let p = StabilityPoint::new(b.clone(), t_sq.clone()).context(|| "nef-divisor: stability point".into())?;
            let w = w_sigma(v, &p, &x).context(|| format!("nef-divisor: w_sigma of {v} at (b, T) = ({b}, {t_sq})"))?;
            let zero = w_limit_zero(v, b, &x).context(|| format!("nef-divisor: T -> 0 limit of {v} at b = {b}"))?;
            let inf = w_limit_infinity(v, &x).context(|| format!("nef-divisor: T -> oo limit of {v}"))?;
            let entry = |w: &OrthogonalClass| -> Result<DivisorEntry, RunError> {
                let hilb = match config.n {
                    Some(n) if is_ideal_sheaf(v, n) => {
                        let div = theta_hilb(w, n).context(|| format!("nef-divisor: theta of {}", w.class))?;
                        Some(HilbCoords::of(&div, &x))
                    }
                    _ => None,
                };
                Ok(DivisorEntry {
                    mukai: w.class.clone(),
                    hilb,
                })
            };
            Payload::NefDivisor {
                b: b.clone(),
                t_sq: t_sq.clone(),
                w_sigma_square: w.class.square(&x),
                w_sigma: entry(&w)?,
                limit_zero: entry(&zero)?,
                limit_infinity: entry(&inf)?,
            }
        }
        Command::HilbNef => {
            let x = surface()?;
            let n = *config.require("n", &config.n)?;
            let cone = hilb_nef_cone(&x, n).context(|| format!("hilb-nef: d = {}, n = {n}", x.d()))?;
            let curve = &cone.extremal_curve;
            Payload::HilbNef {
                n,
                extremal_curve: CurveEntry {
                    display: curve.to_string(),
                    p: curve.p.clone(),
                    q: curve.q.clone(),
                    self_pairing: cone.curve_square.clone(),
                    pairings: cone
                        .generators
                        .iter()
                        .map(|g| curve_divisor_pairing(curve, g, &x))
                        .collect(),
                },
                generators: cone.generators.iter().map(|g| hilb_entry(g, &x)).collect(),
            }
        }
        Command::Lagrangian => {
            let x = surface()?;
            let n = *config.require("n", &config.n)?;
            let data = lagrangian_check(&x, n).context(|| format!("lagrangian: d = {}, n = {n}", x.d()))?;
            let fractions = |gens: &[HilbDivisor]| gens.iter().map(HilbDivisor::to_fraction_string).collect();
            match data {
                None => Payload::Lagrangian {
                    n,
                    found: false,
                    k: None,
                    h: None,
                    square_zero_ray: None,
                    limit_divisor: None,
                    nef_generators: None,
                    movable_generators: None,
                },
                Some(data) => {
                    let cone = data.cone_result.as_ref();
                    let of_kind = |kind| cone.filter(|c| c.kind == kind).map(|c| fractions(&c.generators));
                    Payload::Lagrangian {
                        n,
                        found: true,
                        k: Some(data.k),
                        h: Some(data.h),
                        square_zero_ray: Some(hilb_entry(&data.square_zero_ray, &x)),
                        limit_divisor: Some(hilb_entry(&data.limit_divisor, &x)),
                        nef_generators: of_kind(ConeKind::Nef),
                        movable_generators: of_kind(ConeKind::Movable),
                    }
                }
            }
        }
        Command::IsGeometric => {
            let x = surface()?;
            let b = config.require("b", &config.b)?;
            let t_sq = config.require("T", &config.t_sq)?;
            let p = StabilityPoint::new(b.clone(), t_sq.clone()).context(|| "is-geometric: stability point".into())?;
            let test = is_geometric(&p, &x);
            Payload::IsGeometric {
                b: b.clone(),
                t_sq: t_sq.clone(),
                geometric: test.geometric,
                witness: test.witness,
            }
        }
        Command::SphericalSolve => {
            let x = surface()?;
            if config.constraints.is_empty() {
                return Err(ConfigError::MissingField {
                    command: cmd,
                    field: "constraints",
                }
                .into());
            }
            let solutions = spherical_solver(&config.constraints, &x)
                .context(|| format!("spherical-solve: {} constraints", config.constraints.len()))?;
            Payload::SphericalSolve {
                constraints: config.constraints.clone(),
                solutions,
            }
        }
        Command::Classify => {
            let x = surface()?;
            let v = config.require("vector", &config.vector)?;
            let c = classify(v, &x).context(|| format!("classify: {v}"))?;
            let (region, walls) = if config.b_range.is_some() || config.t_range.is_some() {
                let region = region_of(config)?;
                let bound = resolve_rank_bound(config, env, v)?;
                rank_bound = Some(bound);
                let walls = potential_destabilizers(v, &region, bound, &x)
                    .context(|| format!("classify: walls of {v} on {} x {}", region.b, region.t_sq))?;
                (Some(region), wall_entries(v, walls, &x, config.n)?)
            } else {
                (None, Vec::new())
            };
            Payload::Classify {
                class: v.clone(),
                square: v.square(&x),
                kind: c.kind,
                positive_vector: c.positive_vector,
                region,
                walls,
            }
        }
    };

    Ok(AnalysisReport {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        rank_bound,
        result,
    })
}

fn region_of(config: &AnalysisConfig) -> Result<Region, RunError> {
    let b = config.require("b_range", &config.b_range)?;
    let t = config.require("T_range", &config.t_range)?;
    Region::new(b.clone(), t.clone()).context(|| format!("{}: region", config.command))
}

fn is_ideal_sheaf(v: &MukaiClass, n: i64) -> bool {
    let ideal = MukaiClass::ideal_sheaf(n);
    v == &ideal || v == &-&ideal
}

fn wall_entry(v: &MukaiClass, wall: Wall, x: &SurfaceData, n: Option<i64>) -> Result<WallEntry, RunError> {
    let context = n.filter(|&n| is_ideal_sheaf(v, n)).map(|n| (x.d(), n));
    let flags = classify_wall(v, &wall, x, context).context(|| format!("annotating wall {:?}", wall.geometry))?;
    // the positive-rank destabilizer of smallest rank reads best as a label
    let first = wall
        .destabilizers
        .iter()
        .map(|dz| &dz.class)
        .filter(|c| c.r.is_positive())
        .min_by(|a, b| a.r.cmp(&b.r))
        .unwrap_or(&wall.destabilizers[0].class);
    let label = first
        .primitive()
        .context(|| format!("labelling wall {:?}", wall.geometry))?
        .to_string();
    Ok(WallEntry {
        geometry: wall.geometry,
        label,
        destabilizers: wall.destabilizers,
        flags,
    })
}

fn wall_entries(
    v: &MukaiClass,
    walls: Vec<Wall>,
    x: &SurfaceData,
    n: Option<i64>,
) -> Result<Vec<WallEntry>, RunError> {
    walls.into_iter().map(|w| wall_entry(v, w, x, n)).collect()
}

/// Spikes of non-geometric points over `b_range` that reach into `t_range`.
fn holes_in(b_range: &RatInterval, t_range: &RatInterval, x: &SurfaceData) -> Vec<Hole> {
    let mut holes = Vec::new();
    let d = x.d();
    for q in 1..=MAX_HOLE_DENOMINATOR {
        let qq = Rat::from_int(q);
        let (Some(lo), Some(hi)) = (
            Rat::from_bigint((&b_range.lo * &qq).ceil()).to_i64(),
            Rat::from_bigint((&b_range.hi * &qq).floor()).to_i64(),
        ) else {
            continue;
        };
        // very wide ranges: only the coarse spikes matter
        if hi - lo > 4096 {
            continue;
        }
        for p in lo..=hi {
            let b = Rat::new(p, q);
            if b.denom() != qq.numer() || !b_range.contains(&b) {
                continue;
            }
            let t_sq_max = Rat::new(1, d * q * q);
            if t_sq_max < t_range.lo || (t_sq_max == t_range.lo && t_range.lo_open) {
                continue;
            }
            let Ok(point) = StabilityPoint::new(b.clone(), t_sq_max.clone()) else {
                continue;
            };
            if let Some(witness) = is_geometric(&point, x).witness {
                holes.push(Hole { b, t_sq_max, witness });
            }
        }
    }
    holes.sort_by(|a, b| a.b.cmp(&b.b));
    holes
}
