//! Retrograde analysis of the game on tiny grids.
//!
//! States are (cop multiset, robber square, side to move). Multisets are
//! ranked with the combinatorial number system; robber squares are bits of
//! a `u128`, so grids are limited to `n * n <= 128`.
//!
//! The fixed point is computed in passes. Pass `d` derives the cop-to-move
//! wins from the robber-to-move wins of pass `d - 1`, then the robber-to-move
//! wins from those. The pass in which a state first becomes a cop win is its
//! depth: the number of cop moves the cops need to force capture.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec, ReachTree, Walk};
use crate::runner::{run_match, CopStrategy, MatchConfig, MatchRng, Outcome, RobberStrategy, StrategyError};
use crate::trace::{Actor, Event};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Depth marker for states the cops do not win.
pub const NOT_WON: u16 = u16::MAX;

const MAGIC: &[u8; 4] = b"FRWT";

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("{states} state encodings exceed the budget of {budget}")]
    Budget { states: String, budget: u128 },
    #[error("invalid instance: {0}")]
    Instance(String),
    #[error("instance mismatch: {0}")]
    Mismatch(String),
    #[error("bad table file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolverInstance {
    pub n: i64,
    pub speed: i64,
    pub cops: usize,
}

impl SolverInstance {
    pub fn new(n: i64, speed: i64, cops: usize) -> Result<Self, SolverError> {
        if n < 2 || n * n > 128 {
            return Err(SolverError::Instance(format!("grid side {n} is outside 2..=11")));
        }
        if speed < 1 {
            return Err(SolverError::Instance(format!("speed {speed} is below 1")));
        }
        if cops == 0 || cops > 16 {
            return Err(SolverError::Instance(format!("cop count {cops} is outside 1..=16")));
        }
        Ok(SolverInstance { n, speed, cops })
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec::new(self.n, self.speed).expect("validated")
    }

    /// `(n^2)^c * n^2 * 2`, or `None` on overflow.
    pub fn state_count(&self) -> Option<u128> {
        let s = (self.n * self.n) as u128;
        s.checked_pow(self.cops as u32)?.checked_mul(s)?.checked_mul(2)
    }

    pub fn check_budget(&self, budget: u128) -> Result<(), SolverError> {
        match self.state_count() {
            Some(states) if states <= budget => Ok(()),
            Some(states) => Err(SolverError::Budget { states: states.to_string(), budget }),
            None => Err(SolverError::Budget { states: "more than 2^128".into(), budget }),
        }
    }
}

fn binomials(max: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; max + 1]; max + 1];
    for a in 0..=max {
        b[a][0] = 1;
        for k in 1..=a {
            b[a][k] = b[a - 1][k - 1].saturating_add(b[a - 1][k]);
        }
    }
    b
}

/// Bit-parallel grid helpers.
#[derive(Clone, Debug)]
struct Board {
    n: u32,
    squares: usize,
    full: u128,
    first_col: u128,
    last_col: u128,
}

impl Board {
    fn new(n: i64) -> Self {
        let squares = (n * n) as usize;
        let full = if squares == 128 { u128::MAX } else { (1u128 << squares) - 1 };
        let (mut first_col, mut last_col) = (0u128, 0u128);
        for y in 0..n {
            first_col |= 1 << (y * n);
            last_col |= 1 << (y * n + n - 1);
        }
        Board { n: n as u32, squares, full, first_col, last_col }
    }

    fn dilate(&self, m: u128) -> u128 {
        let up = m.checked_shl(self.n).unwrap_or(0);
        m | (up & self.full) | (m >> self.n) | ((m & !self.last_col) << 1) | ((m & !self.first_col) >> 1)
    }

    /// Squares reachable from `start` in at most `speed` steps avoiding `blocked`.
    fn reach(&self, blocked: u128, start: usize, speed: i64) -> u128 {
        let mut m = 1u128 << start;
        for _ in 0..speed {
            let next = self.dilate(m) & !blocked;
            if next == m {
                break;
            }
            m = next;
        }
        m
    }

    fn moves(&self, s: usize) -> Vec<usize> {
        let n = self.n as usize;
        let (x, y) = (s % n, s / n);
        let mut out = vec![s];
        if y > 0 {
            out.push(s - n);
        }
        if y + 1 < n {
            out.push(s + n);
        }
        if x > 0 {
            out.push(s - 1);
        }
        if x + 1 < n {
            out.push(s + 1);
        }
        out
    }
}

/// The solved game for one instance.
#[derive(Clone, Debug)]
pub struct WinTable {
    inst: SolverInstance,
    board: Board,
    binom: Vec<Vec<u64>>,
    multisets: usize,
    /// Per multiset: robber squares where the cops to move win.
    cop_mask: Vec<u128>,
    /// Per multiset: robber squares where the robber to move loses.
    robber_mask: Vec<u128>,
    cop_depth: Vec<u16>,
    robber_depth: Vec<u16>,
    passes: u32,
}

impl WinTable {
    pub fn instance(&self) -> SolverInstance {
        self.inst
    }

    pub fn multiset_count(&self) -> usize {
        self.multisets
    }

    /// Number of passes until nothing changed.
    pub fn passes(&self) -> u32 {
        self.passes
    }

    pub fn square_index(&self, c: Coord) -> usize {
        ((c.y - 1) * self.inst.n + (c.x - 1)) as usize
    }

    pub fn square(&self, s: usize) -> Coord {
        let n = self.inst.n as usize;
        Coord::new((s % n) as i64 + 1, (s / n) as i64 + 1)
    }

    fn rank_sorted(&self, sorted: &[usize]) -> usize {
        sorted.iter().enumerate().map(|(i, &a)| self.binom[a + i][i + 1] as usize).sum()
    }

    /// Rank of a cop multiset given in any order.
    pub fn rank(&self, cops: &[Coord]) -> usize {
        let mut v: Vec<usize> = cops.iter().map(|&c| self.square_index(c)).collect();
        v.sort_unstable();
        self.rank_sorted(&v)
    }

    fn unrank_sorted(&self, mut rank: usize) -> Vec<usize> {
        let c = self.inst.cops;
        let mut out = vec![0usize; c];
        for i in (0..c).rev() {
            // largest b with C(b, i+1) <= rank
            let mut b = i;
            while (self.binom[b + 1][i + 1] as usize) <= rank {
                b += 1;
            }
            rank -= self.binom[b][i + 1] as usize;
            out[i] = b - i;
        }
        out
    }

    /// The sorted multiset with the given rank.
    pub fn unrank(&self, rank: usize) -> Vec<Coord> {
        self.unrank_sorted(rank).into_iter().map(|s| self.square(s)).collect()
    }

    fn check_cops(&self, cops: &[Coord]) -> Result<usize, SolverError> {
        if cops.len() != self.inst.cops {
            return Err(SolverError::Mismatch(format!("{} cops, table has {}", cops.len(), self.inst.cops)));
        }
        let spec = self.inst.spec();
        if let Some(c) = cops.iter().find(|&&c| !spec.contains(c)) {
            return Err(SolverError::Mismatch(format!("cop at ({}, {}) is off the grid", c.x, c.y)));
        }
        Ok(self.rank(cops))
    }

    /// Depth of a cops-to-move position, `None` if the robber wins it.
    pub fn cops_to_move(&self, cops: &[Coord], robber: Coord) -> Result<Option<u16>, SolverError> {
        let m = self.check_cops(cops)?;
        let d = self.cop_depth[m * self.board.squares + self.square_index(robber)];
        Ok((d != NOT_WON).then_some(d))
    }

    /// Depth of a robber-to-move position, `None` if the robber wins it.
    /// Positions with the robber on a cop have depth 0.
    pub fn robber_to_move(&self, cops: &[Coord], robber: Coord) -> Result<Option<u16>, SolverError> {
        let m = self.check_cops(cops)?;
        let d = self.robber_depth[m * self.board.squares + self.square_index(robber)];
        Ok((d != NOT_WON).then_some(d))
    }

    fn cop_depth_at(&self, m: usize, s: usize) -> u16 {
        self.cop_depth[m * self.board.squares + s]
    }

    fn robber_depth_at(&self, m: usize, s: usize) -> u16 {
        self.robber_depth[m * self.board.squares + s]
    }

    fn occupied(&self, m: usize) -> u128 {
        self.unrank_sorted(m).into_iter().fold(0, |acc, s| acc | 1 << s)
    }

    /// Whether the cops win from this placement against every robber placement.
    pub fn is_winning_placement(&self, rank: usize) -> bool {
        self.cop_mask[rank] | self.occupied(rank) == self.board.full
    }

    pub fn winning_placements(&self) -> Vec<usize> {
        (0..self.multisets).filter(|&m| self.is_winning_placement(m)).collect()
    }

    pub fn cops_win(&self) -> bool {
        (0..self.multisets).any(|m| self.is_winning_placement(m))
    }

    /// Runs one more pass from the final table and reports whether it
    /// changes anything.
    pub fn is_fixed_point(&self) -> bool {
        let mut solver = Passes::new(self.inst, &self.board, &self.binom, self.multisets);
        let (cop, robber) = solver.pass(&self.robber_mask);
        cop == self.cop_mask && robber == self.robber_mask
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let cop_win: Vec<bool> = (0..self.multisets).map(|m| self.is_winning_placement(m)).collect();
        json!({
            "n": self.inst.n,
            "R": self.inst.speed,
            "c": self.inst.cops,
            "placements": self.multisets,
            "passes": self.passes,
            "anyCopWin": cop_win.iter().any(|&b| b),
            "copWin": cop_win,
        })
    }

    /// Binary layout: magic, `n`, `R`, `c` and the multiset count as
    /// little-endian `u64`, then per multiset and square the cop-to-move and
    /// robber-to-move depths as `u16`.
    pub fn write_binary(&self, mut w: impl Write) -> Result<(), SolverError> {
        w.write_all(MAGIC)?;
        for v in [self.inst.n as u64, self.inst.speed as u64, self.inst.cops as u64, self.multisets as u64] {
            w.write_all(&v.to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(self.cop_depth.len() * 4);
        for (c, r) in self.cop_depth.iter().zip(&self.robber_depth) {
            buf.extend_from_slice(&c.to_le_bytes());
            buf.extend_from_slice(&r.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<Self, SolverError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(SolverError::Format("wrong magic".into()));
        }
        let mut head = [0u64; 4];
        for v in head.iter_mut() {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            *v = u64::from_le_bytes(b);
        }
        let inst = SolverInstance::new(head[0] as i64, head[1] as i64, head[2] as usize)?;
        let board = Board::new(inst.n);
        let binom = binomials(board.squares + inst.cops);
        let multisets = binom[board.squares + inst.cops - 1][inst.cops] as usize;
        if multisets as u64 != head[3] {
            return Err(SolverError::Format("multiset count does not match the instance".into()));
        }
        let cells = multisets * board.squares;
        let mut bytes = vec![0u8; cells * 4];
        r.read_exact(&mut bytes)?;
        let mut cop_depth = Vec::with_capacity(cells);
        let mut robber_depth = Vec::with_capacity(cells);
        for ch in bytes.chunks_exact(4) {
            cop_depth.push(u16::from_le_bytes([ch[0], ch[1]]));
            robber_depth.push(u16::from_le_bytes([ch[2], ch[3]]));
        }
        let mask = |depths: &[u16], m: usize| {
            (0..board.squares).filter(|&s| depths[m * board.squares + s] != NOT_WON).fold(0u128, |a, s| a | 1 << s)
        };
        let cop_mask = (0..multisets).map(|m| mask(&cop_depth, m)).collect();
        let robber_mask = (0..multisets).map(|m| mask(&robber_depth, m)).collect();
        let passes = cop_depth.iter().chain(&robber_depth).filter(|&&d| d != NOT_WON).max().copied().unwrap_or(0);
        Ok(WinTable {
            inst,
            board,
            binom,
            multisets,
            cop_mask,
            robber_mask,
            cop_depth,
            robber_depth,
            passes: passes as u32 + 1,
        })
    }
}

/// Scratch state for the fixed-point passes. Cop moves are applied one cop
/// at a time over ordered tuples; the robber step works on multisets.
struct Passes<'a> {
    inst: SolverInstance,
    board: &'a Board,
    multisets: usize,
    /// Ordered tuple index to multiset rank.
    canon: Vec<u32>,
    /// Multiset rank to the tuple index of its sorted form.
    tuple_of: Vec<u32>,
    occupied: Vec<u128>,
    moves: Vec<Vec<usize>>,
    buf_a: Vec<u128>,
    buf_b: Vec<u128>,
}

impl<'a> Passes<'a> {
    fn new(inst: SolverInstance, board: &'a Board, binom: &[Vec<u64>], multisets: usize) -> Self {
        let s = board.squares;
        let c = inst.cops;
        let tuples = s.pow(c as u32);
        let rank = |sorted: &[usize]| -> usize {
            sorted.iter().enumerate().map(|(i, &a)| binom[a + i][i + 1] as usize).sum()
        };
        let canon: Vec<u32> = (0..tuples)
            .into_par_iter()
            .map(|t| {
                let mut digits = [0usize; 16];
                let mut rest = t;
                for d in digits.iter_mut().take(c) {
                    *d = rest % s;
                    rest /= s;
                }
                let v = &mut digits[..c];
                v.sort_unstable();
                rank(v) as u32
            })
            .collect();
        let mut tuple_of = vec![0u32; multisets];
        let mut occupied = vec![0u128; multisets];
        for (t, &m) in canon.iter().enumerate() {
            let m = m as usize;
            // the sorted representative is the one with nonincreasing
            // significance, i.e. digits nondecreasing from the low end
            let mut rest = t;
            let mut prev = 0;
            let mut sorted = true;
            let mut occ = 0u128;
            for _ in 0..c {
                let d = rest % s;
                rest /= s;
                sorted &= d >= prev;
                prev = d;
                occ |= 1 << d;
            }
            if sorted {
                tuple_of[m] = t as u32;
                occupied[m] = occ;
            }
        }
        let moves = (0..s).map(|q| board.moves(q)).collect();
        Passes { inst, board, multisets, canon, tuple_of, occupied, moves, buf_a: vec![0; tuples], buf_b: vec![0; tuples] }
    }

    /// One pass: returns the cop-to-move and robber-to-move win masks.
    fn pass(&mut self, robber_prev: &[u128]) -> (Vec<u128>, Vec<u128>) {
        let s = self.board.squares;
        let canon = &self.canon;
        self.buf_a.par_iter_mut().enumerate().for_each(|(t, v)| *v = robber_prev[canon[t] as usize]);
        let mut stride = 1usize;
        for _ in 0..self.inst.cops {
            let (src, moves) = (&self.buf_a, &self.moves);
            self.buf_b.par_iter_mut().enumerate().for_each(|(t, out)| {
                let d = (t / stride) % s;
                let base = t - d * stride;
                *out = moves[d].iter().fold(0u128, |acc, &nb| acc | src[base + nb * stride]);
            });
            std::mem::swap(&mut self.buf_a, &mut self.buf_b);
            stride *= s;
        }
        let cop: Vec<u128> = (0..self.multisets).map(|m| self.buf_a[self.tuple_of[m] as usize]).collect();
        let board = self.board;
        let speed = self.inst.speed;
        let robber: Vec<u128> = (0..self.multisets)
            .into_par_iter()
            .map(|m| {
                let blocked = self.occupied[m];
                let won = cop[m];
                let mut out = blocked;
                let mut free = board.full & !blocked;
                while free != 0 {
                    let r0 = free.trailing_zeros() as usize;
                    free &= free - 1;
                    if board.reach(blocked, r0, speed) & !won == 0 {
                        out |= 1 << r0;
                    }
                }
                out
            })
            .collect();
        (cop, robber)
    }
}

/// Solves the instance after checking the budget.
pub fn solve(inst: SolverInstance, budget: u128) -> Result<WinTable, SolverError> {
    inst.check_budget(budget)?;
    let board = Board::new(inst.n);
    let s = board.squares;
    let binom = binomials(s + inst.cops);
    let multisets = binom[s + inst.cops - 1][inst.cops] as usize;
    let mut passes = Passes::new(inst, &board, &binom, multisets);

    let mut robber_mask = passes.occupied.clone();
    let mut cop_mask = vec![0u128; multisets];
    let mut robber_depth = vec![NOT_WON; multisets * s];
    let mut cop_depth = vec![NOT_WON; multisets * s];
    for (m, &occ) in robber_mask.iter().enumerate() {
        for q in 0..s {
            if occ >> q & 1 == 1 {
                robber_depth[m * s + q] = 0;
            }
        }
    }
    let mut d: u32 = 0;
    loop {
        d += 1;
        if d >= NOT_WON as u32 {
            return Err(SolverError::Instance("depth overflow".into()));
        }
        let (cop, robber) = passes.pass(&robber_mask);
        if cop == cop_mask && robber == robber_mask {
            break;
        }
        for m in 0..multisets {
            let mark = |depth: &mut [u16], mut fresh: u128| {
                while fresh != 0 {
                    let q = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    depth[m * s + q] = d as u16;
                }
            };
            mark(&mut cop_depth, cop[m] & !cop_mask[m]);
            mark(&mut robber_depth, robber[m] & !robber_mask[m]);
        }
        cop_mask = cop;
        robber_mask = robber;
    }
    drop(passes);
    Ok(WinTable { inst, board, binom, multisets, cop_mask, robber_mask, cop_depth, robber_depth, passes: d })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CopNumber {
    Exact(usize),
    /// No count up to the given maximum wins.
    Exceeds(usize),
}

/// Least cop count up to `max_cops` that wins, solving one instance per count.
pub fn cop_number(n: i64, speed: i64, max_cops: usize, budget: u128) -> Result<CopNumber, SolverError> {
    for c in 1..=max_cops {
        let table = solve(SolverInstance::new(n, speed, c)?, budget)?;
        if table.cops_win() {
            return Ok(CopNumber::Exact(c));
        }
    }
    Ok(CopNumber::Exceeds(max_cops))
}

fn table_fault(e: SolverError) -> StrategyError {
    StrategyError::Fault(e.to_string())
}

fn check_spec(table: &WinTable, spec: &GridSpec) -> Result<(), StrategyError> {
    let inst = table.instance();
    if spec.n != inst.n || spec.speed != inst.speed {
        return Err(StrategyError::Fault(format!(
            "table is for n = {}, R = {}, grid is n = {}, R = {}",
            inst.n, inst.speed, spec.n, spec.speed
        )));
    }
    Ok(())
}

/// Optimal cops read off a table. From a won position each move lowers the
/// depth; from a lost position the cops stay put.
#[derive(Clone, Copy, Debug)]
pub struct TableCops<'t> {
    table: &'t WinTable,
}

impl<'t> TableCops<'t> {
    pub fn new(table: &'t WinTable) -> Self {
        TableCops { table }
    }
}

impl CopStrategy for TableCops<'_> {
    fn name(&self) -> &str {
        "table-cops"
    }

    /// The first winning placement by rank, else the placement leaving the
    /// fewest winning robber squares.
    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let t = self.table;
        check_spec(t, spec)?;
        if count != t.instance().cops {
            return Err(StrategyError::Fault(format!("table is for {} cops", t.instance().cops)));
        }
        let best = (0..t.multisets)
            .min_by_key(|&m| (t.board.full & !(t.cop_mask[m] | t.occupied(m))).count_ones())
            .expect("at least one multiset");
        Ok(t.unrank(best))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let t = self.table;
        check_spec(t, state.spec())?;
        let r = state.robber().ok_or_else(|| StrategyError::Fault("robber is not placed".into()))?;
        let cops = state.cops();
        let Some(depth) = t.cops_to_move(cops, r).map_err(table_fault)? else {
            return Ok(cops.to_vec());
        };
        let options: Vec<Vec<usize>> = cops.iter().map(|&c| t.board.moves(t.square_index(c))).collect();
        let rs = t.square_index(r);
        let mut pick = vec![0usize; cops.len()];
        loop {
            let mut squares: Vec<usize> = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            let dests: Vec<Coord> = squares.iter().map(|&q| t.square(q)).collect();
            squares.sort_unstable();
            if t.robber_depth_at(t.rank_sorted(&squares), rs) < depth {
                return Ok(dests);
            }
            // odometer over the cops' options
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                return Err(StrategyError::Fault("no move lowers the depth of a won position".into()));
            }
        }
    }
}

/// Optimal robber read off a table: moves to a square the cops do not win
/// from, otherwise to the one that delays capture longest. Ties go to the
/// current square, then to the lowest square index.
#[derive(Clone, Copy, Debug)]
pub struct TableRobber<'t> {
    table: &'t WinTable,
}

impl<'t> TableRobber<'t> {
    pub fn new(table: &'t WinTable) -> Self {
        TableRobber { table }
    }

    fn score(&self, m: usize, s: usize) -> u32 {
        // NOT_WON is the maximum, so higher is better for the robber
        self.table.cop_depth_at(m, s) as u32
    }
}

impl RobberStrategy for TableRobber<'_> {
    fn name(&self) -> &str {
        "table-robber"
    }

    fn place(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Coord, StrategyError> {
        let t = self.table;
        check_spec(t, state.spec())?;
        let m = t.check_cops(state.cops()).map_err(table_fault)?;
        let occ = t.occupied(m);
        (0..t.board.squares)
            .filter(|&s| occ >> s & 1 == 0)
            .max_by_key(|&s| (self.score(m, s), std::cmp::Reverse(s)))
            .map(|s| t.square(s))
            .ok_or(StrategyError::Resign)
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Walk, StrategyError> {
        let t = self.table;
        check_spec(t, state.spec())?;
        let r = state.robber().ok_or_else(|| StrategyError::Fault("robber is not placed".into()))?;
        let m = t.check_cops(state.cops()).map_err(table_fault)?;
        let tree = ReachTree::build(state.spec(), state.cops(), r);
        let here = t.square_index(r);
        let best = tree
            .endpoints()
            .map(|p| t.square_index(p))
            .max_by_key(|&s| (self.score(m, s), s == here, std::cmp::Reverse(s)))
            .expect("the robber's square is reachable");
        Ok(tree.walk_to(t.square(best)).expect("endpoint is reachable"))
    }
}

/// The strategy being checked against the table's optimal opponent.
pub enum Subject<'s> {
    Cops(&'s mut dyn CopStrategy),
    Robber(&'s mut dyn RobberStrategy),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict", content = "detail")]
pub enum Verdict {
    /// Started in its winning region and never left it.
    Preserved,
    /// Started in its winning region and moved out of it.
    Broken { round: u64 },
    /// Did not start in its winning region.
    NotWinning,
    NotApplicable(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub strategy: String,
    pub verdict: Verdict,
    pub outcome: Option<Outcome>,
    pub rounds: u64,
}

/// Plays `subject` against the optimal opponent from `table` and checks
/// every move of the subject against the table.
pub fn verify_strategy_against_table(
    table: &WinTable,
    subject: Subject<'_>,
    cfg: &MatchConfig,
) -> Result<VerifyReport, SolverError> {
    let inst = table.instance();
    if cfg.spec.n != inst.n || cfg.spec.speed != inst.speed || cfg.cop_count != inst.cops {
        return Err(SolverError::Mismatch(format!(
            "table is n = {}, R = {}, c = {}; match is n = {}, R = {}, c = {}",
            inst.n, inst.speed, inst.cops, cfg.spec.n, cfg.spec.speed, cfg.cop_count
        )));
    }
    let (side, name, result) = match subject {
        Subject::Cops(cops) => {
            let name = cops.name().to_string();
            let mut robber = TableRobber::new(table);
            (Actor::Cops, name, run_match(cfg, cops, &mut robber))
        }
        Subject::Robber(robber) => {
            let name = robber.name().to_string();
            if let Err(why) = robber.applicable(&cfg.spec, cfg.cop_count) {
                return Ok(VerifyReport { strategy: name, verdict: Verdict::NotApplicable(why), outcome: None, rounds: 0 });
            }
            let mut cops = TableCops::new(table);
            (Actor::Robber, name, run_match(cfg, &mut cops, robber))
        }
    };
    let report = result.map_err(|abort| SolverError::Mismatch(abort.to_string()))?;

    let cop_won = |cops: &[Coord], r: Coord, robber_to_move: bool| -> Result<bool, SolverError> {
        let d = if robber_to_move { table.robber_to_move(cops, r)? } else { table.cops_to_move(cops, r)? };
        Ok(d.is_some())
    };
    let records = &report.trace.records;
    let mut verdict = Verdict::NotWinning;
    let mut winning = false;
    for (i, rec) in records.iter().enumerate() {
        let Some(r) = rec.robber else { continue };
        if rec.actor == Actor::Robber && rec.event == Event::Placement {
            // cops to move now
            winning = cop_won(&rec.cops, r, false)? == (side == Actor::Cops);
            if winning {
                verdict = Verdict::Preserved;
            }
            continue;
        }
        if !winning || rec.actor != side || i == 0 {
            continue;
        }
        let prev = &records[i - 1];
        let prev_r = prev.robber.expect("robber placed before any move");
        let ok = match side {
            Actor::Cops => {
                !cop_won(&prev.cops, prev_r, false)? || rec.event == Event::Capture || cop_won(&rec.cops, r, true)?
            }
            Actor::Robber => cop_won(&prev.cops, prev_r, true)? || !cop_won(&rec.cops, r, false)?,
        };
        if !ok {
            verdict = Verdict::Broken { round: rec.round };
            break;
        }
    }
    Ok(VerifyReport { strategy: name, verdict, outcome: Some(report.outcome), rounds: report.rounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i64, y: i64) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn ranks_round_trip() {
        let t = solve(SolverInstance::new(3, 1, 3).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(t.multiset_count(), 165);
        for m in 0..t.multiset_count() {
            assert_eq!(t.rank(&t.unrank(m)), m);
        }
        assert_eq!(t.rank(&[c(3, 3), c(1, 1), c(2, 1)]), t.rank(&[c(2, 1), c(3, 3), c(1, 1)]));
    }

    #[test]
    fn two_by_two() {
        let inst = SolverInstance::new(2, 1, 2).unwrap();
        assert_eq!(inst.state_count(), Some(128));
        let t = solve(inst, DEFAULT_BUDGET).unwrap();
        let diag = [c(1, 1), c(2, 2)];
        assert_eq!(t.cops_to_move(&diag, c(1, 2)).unwrap(), Some(1));
        assert_eq!(t.robber_to_move(&diag, c(1, 1)).unwrap(), Some(0));
        for speed in 1..=4 {
            let t = solve(SolverInstance::new(2, speed, 1).unwrap(), DEFAULT_BUDGET).unwrap();
            assert_eq!(t.cops_to_move(&[c(1, 1)], c(2, 2)).unwrap(), None);
            assert!(!t.cops_win());
        }
    }

    #[test]
    fn small_cop_numbers() {
        assert_eq!(cop_number(3, 1, 3, DEFAULT_BUDGET).unwrap(), CopNumber::Exact(2));
        assert_eq!(cop_number(2, 3, 2, DEFAULT_BUDGET).unwrap(), CopNumber::Exact(2));
        assert_eq!(cop_number(2, 3, 1, DEFAULT_BUDGET).unwrap(), CopNumber::Exceeds(1));
    }

    #[test]
    fn budget_is_enforced() {
        let inst = SolverInstance::new(6, 2, 3).unwrap();
        assert!(matches!(solve(inst, 1000), Err(SolverError::Budget { .. })));
        assert!(SolverInstance::new(12, 1, 1).is_err());
    }

    #[test]
    fn fixed_point_is_stable() {
        let t = solve(SolverInstance::new(3, 2, 2).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(t.is_fixed_point());
    }

    #[test]
    fn binary_round_trip() {
        let t = solve(SolverInstance::new(3, 1, 2).unwrap(), DEFAULT_BUDGET).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"FRWT");
        let back = WinTable::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.cop_depth, t.cop_depth);
        assert_eq!(back.robber_mask, t.robber_mask);
        assert!(WinTable::read_binary(&b"NOPE"[..]).is_err());
        assert_eq!(t.summary_json()["anyCopWin"], true);
    }
}
