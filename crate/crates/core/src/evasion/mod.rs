//! The hierarchical robber: recursive cell traversals chained into a
//! clockwise loop around a 2x2 array of top-level cells.

pub mod dash;
pub mod frame;
pub mod traverse;

use num_traits::ToPrimitive;
use serde_json::json;
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec, Walk};
use crate::hierarchy::{zone_offsets, CellCoord, Geometry, HierarchyError, HierarchyParams, SafetyContext, Side};
use crate::runner::{MatchRng, RobberStrategy, StrategyError};

pub use dash::{base_dash, path_family, DashReport};
pub use frame::{Dir, Frame};
pub use traverse::{TraversalPlan, TraversalStats, TurnContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvasionError {
    /// A precondition of a traversal does not hold on entry.
    #[error("level {level} hypothesis failed: {clause}")]
    Hypothesis { level: u32, clause: String },
    /// A condition the evasion argument guarantees failed at runtime.
    #[error("level {level} assertion failed: {clause}")]
    Assertion { level: u32, clause: String },
    #[error("placement failed: {0}")]
    Placement(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

/// Cells of the 2x2 array in loop order with the exit taken from each.
pub const LOOP: [((i64, i64), Dir); 4] =
    [((0, 0), Dir::Up), ((0, 1), Dir::Right), ((1, 1), Dir::Down), ((1, 0), Dir::Left)];

/// The 0-cells of a k-cell whose squares are k-landing squares, ordered
/// by row and then column.
pub fn landing_cells(geom: &Geometry, c: CellCoord) -> Vec<CellCoord> {
    let mut cells = vec![c];
    for _ in 0..c.k {
        cells = cells
            .into_iter()
            .flat_map(|parent| {
                Side::ALL.into_iter().flat_map(move |s| zone_offsets(parent.k, s).map(|rel| geom.child(parent, rel)))
            })
            .collect();
    }
    cells.sort_by_key(|c| (c.j, c.i));
    cells.dedup();
    cells
}

/// Picks the robber's starting square: a completely k-safe k-landing square
/// in the array cell holding the fewest cops (ties in loop order). Returns
/// the square and the loop index of its cell.
pub fn place_robber(geom: &Geometry, cops: &[Coord], k: u32, grid_n: i64) -> Result<(Coord, usize), EvasionError> {
    if cops.len() >= 1usize << k {
        return Err(EvasionError::Placement(format!("{} cops is not below 2^{k}", cops.len())));
    }
    if grid_n < 2 * geom.side(k) {
        return Err(EvasionError::Placement(format!("grid side {grid_n} is below 2NL_k = {}", 2 * geom.side(k))));
    }
    let ctx = SafetyContext::new(cops, geom);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by_key(|&idx| {
        let (i, j) = LOOP[idx].0;
        ctx.cops_near(CellCoord::new(k, i, j), 0)
    });
    for idx in order {
        let (i, j) = LOOP[idx].0;
        for cell in landing_cells(geom, CellCoord::new(k, i, j)) {
            let p = geom.origin(cell);
            if ctx.is_completely_k_safe(p, k) {
                return Ok((p, idx));
            }
        }
    }
    Err(EvasionError::Placement("no completely k-safe landing square".into()))
}

/// The robber that loops forever around a 2x2 array of k-cells.
#[derive(Debug, Clone)]
pub struct HierarchicalRobber {
    params: HierarchyParams,
    geom: Geometry,
    k: u32,
    speed: i64,
    leg: usize,
    plan: Option<TraversalPlan>,
    log: Vec<TraversalStats>,
    last_detour: bool,
}

impl HierarchicalRobber {
    /// Validates the parameters and builds the geometry for `k = k_max`.
    pub fn new(params: &HierarchyParams) -> Result<Self, EvasionError> {
        let violations = params.validate();
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(EvasionError::Params(list.join("; ")));
        }
        if params.k_max == 0 {
            return Err(EvasionError::Params("k must be at least 1".into()));
        }
        let geom = Geometry::from_params(params)?;
        let speed = params
            .r
            .to_i64()
            .ok_or_else(|| HierarchyError::NotRunnable(format!("R = {} overflows", params.r)))?;
        Ok(HierarchicalRobber {
            params: params.clone(),
            geom,
            k: params.k_max,
            speed,
            leg: 0,
            plan: None,
            log: Vec::new(),
            last_detour: false,
        })
    }

    pub fn params(&self) -> &HierarchyParams {
        &self.params
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    /// Every finished traversal at every level, in completion order.
    pub fn stats(&self) -> &[TraversalStats] {
        &self.log
    }

    /// Grid side needed to host the 2x2 array.
    pub fn required_side(&self) -> i64 {
        2 * self.geom.side(self.k)
    }

    fn check(&self, spec: &GridSpec, cops: usize) -> Result<(), String> {
        if cops >= 1usize << self.k {
            return Err(format!("{cops} cops is not below 2^{}", self.k));
        }
        if spec.n < self.required_side() {
            return Err(format!("grid side {} is below {}", spec.n, self.required_side()));
        }
        if spec.speed < self.speed {
            return Err(format!("grid speed {} is below R = {}", spec.speed, self.speed));
        }
        Ok(())
    }
}

fn fault(e: impl std::fmt::Display) -> StrategyError {
    StrategyError::Fault(e.to_string())
}

impl RobberStrategy for HierarchicalRobber {
    fn name(&self) -> &str {
        "hierarchical"
    }

    fn applicable(&self, spec: &GridSpec, cops: usize) -> Result<(), String> {
        self.check(spec, cops)
    }

    fn place(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Coord, StrategyError> {
        self.check(state.spec(), state.cops().len()).map_err(StrategyError::Fault)?;
        let (at, leg) = place_robber(&self.geom, state.cops(), self.k, state.spec().n).map_err(fault)?;
        self.leg = leg;
        self.plan = None;
        Ok(at)
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Walk, StrategyError> {
        let robber = state.robber().ok_or_else(|| fault("robber is not placed"))?;
        let ctx = TurnContext { geom: &self.geom, cops: state.cops(), robber, speed: state.spec().speed };
        let plan = self.plan.get_or_insert_with(|| {
            let ((i, j), exit) = LOOP[self.leg];
            TraversalPlan::new(self.k, CellCoord::new(self.k, i, j), exit)
        });
        let out = plan.step(&ctx, &mut self.log).map_err(fault)?;
        self.last_detour = plan.in_detour_anywhere();
        if out.completes {
            self.plan = None;
            self.leg = (self.leg + 1) % 4;
        }
        Ok(out.walk)
    }

    fn diagnostics(&self) -> Option<serde_json::Value> {
        let levels = self.plan.as_ref().map(|p| p.view()).unwrap_or_default();
        Some(json!({
            "leg": LOOP[self.leg].1,
            "levels": levels,
            "detour": self.last_detour,
        }))
    }
}
