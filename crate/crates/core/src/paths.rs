//! Exact price paths on the time interval [0,1].
//!
//! Four representations share one piecewise-affine core:
//! * `StepPath` — right-continuous step functions (all slopes zero),
//! * `LinearPath` — continuous piecewise-linear functions,
//! * `CadlagPath` — general piecewise-affine càdlàg functions,
//! * `GadgetPath` — a step path carrying oscillation gadgets whose step times
//!   accumulate at a point from one side. Gadgets are the only finitely
//!   representable carriers of infinite (one-sided) variation; whether the
//!   accumulated log-variation diverges is declared by the gadget family,
//!   never inferred numerically.
//!
//! Everything is exact: evaluation, prefix comparison and the supremum of
//! prefix agreement are all decided from the representations.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logsum::LogSum;
use crate::rat::{format_rat, int, parse_rat, pow2, Rat};

/// End of a prefix interval: `[0,t]` when `closed`, `[0,t)` otherwise.
/// Ordered by inclusion.
pub type PrefixEnd = (Rat, bool);

pub fn prefix_lt(a: &PrefixEnd, b: &PrefixEnd) -> bool {
    a.0 < b.0 || (a.0 == b.0 && !a.1 && b.1)
}

pub fn prefix_min(a: PrefixEnd, b: PrefixEnd) -> PrefixEnd {
    if prefix_lt(&b, &a) {
        b
    } else {
        a
    }
}

// ---------------------------------------------------------------------------
// Piecewise-affine core
// ---------------------------------------------------------------------------

/// One affine piece: value `value + slope·(t − start)` on `[start, next_start)`
/// (the last piece extends through 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Rat,
    pub value: Rat,
    pub slope: Rat,
}

impl Piece {
    fn eval(&self, t: &Rat) -> Rat {
        &self.value + &self.slope * (t - &self.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piecewise {
    pieces: Vec<Piece>,
}

impl Piecewise {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidPath("no pieces".into()));
        }
        if !pieces[0].start.is_zero() {
            return Err(Error::InvalidPath("first piece must start at 0".into()));
        }
        let one = int(1);
        for w in pieces.windows(2) {
            if w[0].start >= w[1].start {
                return Err(Error::InvalidPath(
                    "piece starts must be strictly increasing".into(),
                ));
            }
        }
        if pieces.last().unwrap().start > one {
            return Err(Error::InvalidPath("piece start beyond 1".into()));
        }
        Ok(Piecewise { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Merges adjacent pieces that describe the same affine function.
    pub fn canonicalize(mut self) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in self.pieces.drain(..) {
            if let Some(prev) = out.last() {
                if prev.slope == p.slope && prev.eval(&p.start) == p.value {
                    continue;
                }
            }
            out.push(p);
        }
        Piecewise { pieces: out }
    }

    fn index_at(&self, t: &Rat) -> usize {
        match self.pieces.binary_search_by(|p| p.start.cmp(t)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    pub fn value_at(&self, t: &Rat) -> Rat {
        self.pieces[self.index_at(t)].eval(t)
    }

    /// Left limit at `t > 0`.
    pub fn left_limit_at(&self, t: &Rat) -> Rat {
        let i = self.index_at(t);
        if self.pieces[i].start == *t && i > 0 {
            self.pieces[i - 1].eval(t)
        } else {
            self.pieces[i].eval(t)
        }
    }

    pub fn is_step(&self) -> bool {
        self.pieces.iter().all(|p| p.slope.is_zero())
    }

    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .all(|w| w[0].eval(&w[1].start) == w[1].value)
    }

    /// Supremum of prefix agreement between two piecewise paths.
    pub fn agreement(&self, other: &Piecewise) -> PrefixEnd {
        let mut starts: Vec<&Rat> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .map(|p| &p.start)
            .collect();
        starts.sort();
        starts.dedup();
        let one = int(1);
        for t in starts {
            let (ia, ib) = (self.index_at(t), other.index_at(t));
            let (pa, pb) = (&self.pieces[ia], &other.pieces[ib]);
            if pa.eval(t) != pb.eval(t) {
                return (t.clone(), false);
            }
            if pa.slope != pb.slope && *t < one {
                return (t.clone(), true);
            }
        }
        (one, true)
    }
}

// ---------------------------------------------------------------------------
// Concrete path kinds
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepPath(Piecewise);

impl StepPath {
    /// Builds a step path from `(time, value)` points, merging repeated
    /// adjacent values.
    pub fn new(points: Vec<(Rat, Rat)>) -> Result<Self> {
        Ok(Self::new_raw(points)?.canonicalized())
    }

    /// Keeps repeated adjacent values as distinct pieces.
    pub fn new_raw(points: Vec<(Rat, Rat)>) -> Result<Self> {
        let pieces = points
            .into_iter()
            .map(|(start, value)| Piece {
                start,
                value,
                slope: Rat::zero(),
            })
            .collect();
        Ok(StepPath(Piecewise::new(pieces)?))
    }

    fn canonicalized(self) -> Self {
        StepPath(self.0.canonicalize())
    }

    pub fn constant(v: Rat) -> Self {
        StepPath::new(vec![(Rat::zero(), v)]).unwrap()
    }

    pub fn points(&self) -> Vec<(Rat, Rat)> {
        self.0
            .pieces()
            .iter()
            .map(|p| (p.start.clone(), p.value.clone()))
            .collect()
    }

    pub fn pw(&self) -> &Piecewise {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPath(Piecewise);

impl LinearPath {
    /// Piecewise-linear interpolation through nodes; constant after the last
    /// node. Continuity holds by construction.
    pub fn from_nodes(nodes: Vec<(Rat, Rat)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidPath("no nodes".into()));
        }
        let mut pieces = Vec::new();
        for i in 0..nodes.len() {
            let (t, v) = &nodes[i];
            if let Some((tn, vn)) = nodes.get(i + 1) {
                let slope = (vn - v) / (tn - t);
                pieces.push(Piece {
                    start: t.clone(),
                    value: v.clone(),
                    slope,
                });
            } else if *t < int(1) || pieces.is_empty() {
                pieces.push(Piece {
                    start: t.clone(),
                    value: v.clone(),
                    slope: Rat::zero(),
                });
            }
        }
        Ok(LinearPath(Piecewise::new(pieces)?.canonicalize()))
    }

    /// The identity path t ↦ t.
    pub fn identity() -> Self {
        LinearPath::from_nodes(vec![(Rat::zero(), Rat::zero()), (int(1), int(1))]).unwrap()
    }

    pub fn constant(v: Rat) -> Self {
        LinearPath::from_nodes(vec![(Rat::zero(), v)]).unwrap()
    }

    pub fn pw(&self) -> &Piecewise {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CadlagPath(Piecewise);

impl CadlagPath {
    pub fn from_pieces(pieces: Vec<(Rat, Rat, Rat)>) -> Result<Self> {
        let pieces = pieces
            .into_iter()
            .map(|(start, value, slope)| Piece {
                start,
                value,
                slope,
            })
            .collect();
        Ok(CadlagPath(Piecewise::new(pieces)?.canonicalize()))
    }

    pub fn pw(&self) -> &Piecewise {
        &self.0
    }
}

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Built-in oscillation families. Step `j` contributes an up factor `f(j)`
/// and a matching down factor `f(j)⁻¹`, so deviations from the base value
/// telescope away from the accumulation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetFamily {
    /// `f(j) = 1 + 1/j`; `Σ log f(j) = log(J+1) − log(first)` diverges.
    TelescopingHarmonic,
    /// `f(j) = 1 + 2^{-j}`; `Σ log f(j) ≤ Σ 2^{-j}` converges.
    TelescopingGeometric,
}

impl GadgetFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GadgetFamily::TelescopingHarmonic => "telescoping-harmonic",
            GadgetFamily::TelescopingGeometric => "telescoping-geometric",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "telescoping-harmonic" => Ok(GadgetFamily::TelescopingHarmonic),
            "telescoping-geometric" => Ok(GadgetFamily::TelescopingGeometric),
            other => Err(Error::InvalidParam(format!("unknown gadget family {other:?}"))),
        }
    }

    /// Whether the accumulated log deviation `Σ log f(j)` diverges.
    pub fn divergent(&self) -> bool {
        matches!(self, GadgetFamily::TelescopingHarmonic)
    }

    /// The up factor at index `j ≥ 1`.
    pub fn factor(&self, j: u32) -> Rat {
        match self {
            GadgetFamily::TelescopingHarmonic => crate::rat::rat(j as i64 + 1, j as i64),
            GadgetFamily::TelescopingGeometric => int(1) + pow2(-(j as i64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub at: Rat,
    pub side: Side,
    pub family: GadgetFamily,
    pub first_index: u32,
}

impl Gadget {
    /// Time offsets from the accumulation point: the up step of pair `j` sits
    /// at offset `2^{-2j}` and the down step at `2^{-2j-1}`.
    fn up_offset(&self, j: u32) -> Rat {
        pow2(-2 * (j as i64))
    }

    fn down_offset(&self, j: u32) -> Rat {
        pow2(-2 * (j as i64) - 1)
    }

    /// Step time of pair `j`, up or down leg.
    pub fn step_time(&self, j: u32, up: bool) -> Rat {
        let off = if up { self.up_offset(j) } else { self.down_offset(j) };
        match self.side {
            Side::Right => &self.at + off,
            Side::Left => &self.at - off,
        }
    }

    /// Interval on which the gadget deviates from the base value:
    /// `(at, at + 2^{-2·first}]` for a right gadget and
    /// `[at − 2^{-2·first}, at)` for a left one.
    pub fn active_interval(&self) -> (Rat, Rat) {
        match self.side {
            Side::Right => (self.at.clone(), &self.at + self.up_offset(self.first_index)),
            Side::Left => (&self.at - self.up_offset(self.first_index), self.at.clone()),
        }
    }

    /// Multiplicative deviation from the base at time `t`. This is the value
    /// defining the path: bump pair `j` raises the value by `f(j)` on the
    /// left-closed interval between its two step times, so the path jumps at
    /// step times and holds its value to the right of each of them.
    pub fn factor_at(&self, t: &Rat) -> Rat {
        self.factor_product(t, false)
    }

    /// Deviation of the left limit at `t`.
    pub fn factor_left_limit(&self, t: &Rat) -> Rat {
        self.factor_product(t, true)
    }

    fn factor_product(&self, t: &Rat, left_limit: bool) -> Rat {
        let mut acc = Rat::one();
        match self.side {
            Side::Right => {
                if *t <= self.at {
                    return acc;
                }
                // product of family factors over steps strictly beyond t
                // (at the left limit, steps at t itself are still beyond it)
                let beyond = |time: &Rat| -> bool {
                    if left_limit {
                        time >= t
                    } else {
                        time > t
                    }
                };
                let mut j = self.first_index;
                loop {
                    let up_t = self.step_time(j, true);
                    if !beyond(&up_t) {
                        break;
                    }
                    let f = self.family.factor(j);
                    acc *= &f;
                    if beyond(&self.step_time(j, false)) {
                        acc *= f.recip();
                    }
                    j += 1;
                }
            }
            Side::Left => {
                if *t >= self.at {
                    return acc;
                }
                let reached = |time: &Rat| -> bool {
                    if left_limit {
                        time < t
                    } else {
                        time <= t
                    }
                };
                let mut j = self.first_index;
                loop {
                    let up_t = self.step_time(j, true);
                    if !reached(&up_t) {
                        break;
                    }
                    let f = self.family.factor(j);
                    acc *= &f;
                    if reached(&self.step_time(j, false)) {
                        acc *= f.recip();
                    }
                    j += 1;
                }
            }
        }
        acc
    }

    /// `Σ_{j < first+count} log f(j)` as an exact formal log sum.
    pub fn partial_logsum(&self, count: u32) -> LogSum {
        let mut s = LogSum::zero();
        for j in self.first_index..self.first_index + count {
            s.push(self.family.factor(j), 1);
        }
        s
    }

    /// Step times inside `(lo, hi]`, each with `(time, up_flag, pair_index)`,
    /// sorted increasingly. `None` when infinitely many steps fall inside
    /// (the interval reaches the accumulation point from the active side).
    pub fn steps_in(&self, lo: &Rat, hi: &Rat) -> Option<Vec<(Rat, bool, u32)>> {
        let mut out = Vec::new();
        match self.side {
            Side::Right => {
                if *lo <= self.at && *hi > self.at {
                    return None;
                }
                if *hi <= self.at {
                    return Some(out);
                }
                let mut j = self.first_index;
                loop {
                    let up_t = self.step_time(j, true);
                    let down_t = self.step_time(j, false);
                    if up_t <= *lo {
                        break;
                    }
                    if up_t <= *hi {
                        out.push((up_t, true, j));
                    }
                    if down_t <= *lo {
                        break;
                    }
                    if down_t <= *hi {
                        out.push((down_t, false, j));
                    }
                    j += 1;
                }
            }
            Side::Left => {
                if *lo < self.at && *hi >= self.at {
                    return None;
                }
                if *lo >= self.at {
                    return Some(out);
                }
                let mut j = self.first_index;
                loop {
                    let up_t = self.step_time(j, true);
                    let down_t = self.step_time(j, false);
                    if up_t > *hi {
                        break;
                    }
                    if up_t > *lo {
                        out.push((up_t, true, j));
                    }
                    if down_t > *hi {
                        break;
                    }
                    if down_t > *lo {
                        out.push((down_t, false, j));
                    }
                    j += 1;
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Some(out)
    }
}

/// Step path decorated with oscillation gadgets. Activity intervals are
/// pairwise disjoint, contain no base breakpoint, and sit over a strictly
/// positive base value, so every certificate refers to genuine oscillation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPath {
    base: StepPath,
    gadgets: Vec<Gadget>,
}

impl GadgetPath {
    pub fn new(base: StepPath, gadgets: Vec<Gadget>) -> Result<Self> {
        let zero = Rat::zero();
        let one = int(1);
        for g in &gadgets {
            if g.first_index == 0 {
                return Err(Error::InvalidPath("gadget first_index must be ≥ 1".into()));
            }
            let (lo, hi) = g.active_interval();
            if lo < zero || hi > one {
                return Err(Error::InvalidPath(
                    "gadget activity extends outside [0,1]".into(),
                ));
            }
            for p in base.pw().pieces() {
                let inside = match g.side {
                    Side::Right => p.start > lo && p.start <= hi,
                    Side::Left => p.start >= lo && p.start < hi,
                };
                if inside {
                    return Err(Error::InvalidPath(
                        "base breakpoint inside gadget activity interval".into(),
                    ));
                }
            }
            let mid = (&lo + &hi) / int(2);
            if !base.pw().value_at(&mid).is_positive() {
                return Err(Error::InvalidPath(
                    "gadget over a non-positive base segment".into(),
                ));
            }
        }
        for (i, a) in gadgets.iter().enumerate() {
            for b in gadgets.iter().skip(i + 1) {
                let (alo, ahi) = a.active_interval();
                let (blo, bhi) = b.active_interval();
                if alo < bhi && blo < ahi {
                    return Err(Error::InvalidPath(
                        "overlapping gadget activity intervals".into(),
                    ));
                }
            }
        }
        Ok(GadgetPath { base, gadgets })
    }

    /// Right telescoping-harmonic gadget over a constant-1 base.
    pub fn harmonic_right(at: Rat) -> Result<Self> {
        GadgetPath::new(
            StepPath::constant(int(1)),
            vec![Gadget {
                at,
                side: Side::Right,
                family: GadgetFamily::TelescopingHarmonic,
                first_index: 1,
            }],
        )
    }

    /// Left telescoping-harmonic gadget over a constant-1 base.
    pub fn harmonic_left(at: Rat) -> Result<Self> {
        GadgetPath::new(
            StepPath::constant(int(1)),
            vec![Gadget {
                at,
                side: Side::Left,
                family: GadgetFamily::TelescopingHarmonic,
                first_index: 1,
            }],
        )
    }

    pub fn base(&self) -> &StepPath {
        &self.base
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn value_at(&self, t: &Rat) -> Rat {
        let mut v = self.base.pw().value_at(t);
        for g in &self.gadgets {
            v *= g.factor_at(t);
        }
        v
    }

    pub fn left_limit_at(&self, t: &Rat) -> Rat {
        let mut v = self.base.pw().left_limit_at(t);
        for g in &self.gadgets {
            v *= g.factor_left_limit(t);
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Unified path type
// ---------------------------------------------------------------------------

/// A gadget path frozen at a constant value from a splice time on. Used to
/// build probe continuations of paths whose oscillations cannot be expanded
/// into finitely many pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplicedGadget {
    pub inner: GadgetPath,
    pub at: Rat,
    pub value: Rat,
}

impl SplicedGadget {
    pub fn value_at(&self, t: &Rat) -> Rat {
        if *t < self.at {
            self.inner.value_at(t)
        } else {
            self.value.clone()
        }
    }

    pub fn left_limit_at(&self, t: &Rat) -> Rat {
        if *t <= self.at {
            self.inner.left_limit_at(t)
        } else {
            self.value.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Path {
    Step(StepPath),
    Linear(LinearPath),
    Cadlag(CadlagPath),
    Gadget(GadgetPath),
    Spliced(SplicedGadget),
}

impl Path {
    pub fn step(points: Vec<(Rat, Rat)>) -> Result<Path> {
        Ok(Path::Step(StepPath::new(points)?))
    }

    pub fn linear(nodes: Vec<(Rat, Rat)>) -> Result<Path> {
        Ok(Path::Linear(LinearPath::from_nodes(nodes)?))
    }

    pub fn cadlag(pieces: Vec<(Rat, Rat, Rat)>) -> Result<Path> {
        Ok(Path::Cadlag(CadlagPath::from_pieces(pieces)?))
    }

    pub fn plain(&self) -> Option<&Piecewise> {
        match self {
            Path::Step(p) => Some(p.pw()),
            Path::Linear(p) => Some(p.pw()),
            Path::Cadlag(p) => Some(p.pw()),
            Path::Gadget(_) | Path::Spliced(_) => None,
        }
    }

    pub fn gadget(&self) -> Option<&GadgetPath> {
        match self {
            Path::Gadget(g) => Some(g),
            _ => None,
        }
    }

    pub fn spliced(&self) -> Option<&SplicedGadget> {
        match self {
            Path::Spliced(s) => Some(s),
            _ => None,
        }
    }

    fn check_time(t: &Rat) -> Result<()> {
        if t.is_negative() || *t > int(1) {
            return Err(Error::TimeOutOfRange { t: format_rat(t) });
        }
        Ok(())
    }

    /// Exact value ω(t) for t ∈ [0,1].
    pub fn value_at(&self, t: &Rat) -> Result<Rat> {
        Self::check_time(t)?;
        Ok(match self {
            Path::Gadget(g) => g.value_at(t),
            Path::Spliced(s) => s.value_at(t),
            _ => self.plain().unwrap().value_at(t),
        })
    }

    /// Exact left limit ω(t−) for t ∈ (0,1].
    pub fn left_limit_at(&self, t: &Rat) -> Result<Rat> {
        Self::check_time(t)?;
        if t.is_zero() {
            return Err(Error::TimeOutOfRange { t: "0-".into() });
        }
        Ok(match self {
            Path::Gadget(g) => g.left_limit_at(t),
            Path::Spliced(s) => s.left_limit_at(t),
            _ => self.plain().unwrap().left_limit_at(t),
        })
    }

    /// Finitely many breakpoints of the non-gadget structure.
    pub fn base_breakpoints(&self) -> Vec<Rat> {
        let pw = match self {
            Path::Gadget(g) => g.base().pw(),
            Path::Spliced(s) => s.inner.base().pw(),
            _ => self.plain().unwrap(),
        };
        pw.pieces().iter().map(|p| p.start.clone()).collect()
    }

    /// Probe continuation: equals `self` strictly before `at`, then jumps to
    /// `ratio · ω(at−)` and stays constant. Plain paths materialize into a
    /// piecewise path; gadget paths are wrapped.
    pub fn splice_jump(&self, at: &Rat, ratio: &Rat) -> Result<Path> {
        Self::check_time(at)?;
        if at.is_zero() {
            return Err(Error::InvalidParam("cannot splice at 0".into()));
        }
        let new_value = self.left_limit_at(at)? * ratio;
        match self {
            Path::Gadget(g) => Ok(Path::Spliced(SplicedGadget {
                inner: g.clone(),
                at: at.clone(),
                value: new_value,
            })),
            Path::Spliced(s) => {
                if *at > s.at {
                    return Err(Error::InvalidParam(
                        "second splice must precede the first".into(),
                    ));
                }
                Ok(Path::Spliced(SplicedGadget {
                    inner: s.inner.clone(),
                    at: at.clone(),
                    value: new_value,
                }))
            }
            _ => {
                let pw = self.plain().unwrap();
                let mut pieces: Vec<(Rat, Rat, Rat)> = pw
                    .pieces()
                    .iter()
                    .filter(|p| p.start < *at)
                    .map(|p| (p.start.clone(), p.value.clone(), p.slope.clone()))
                    .collect();
                pieces.push((at.clone(), new_value, Rat::zero()));
                Path::cadlag(pieces)
            }
        }
    }

    /// Probe continuation for continuous markets: equals `self` through `at`,
    /// ramps linearly to `ratio · ω(at)` at time `until`, constant after.
    pub fn splice_kink(&self, at: &Rat, ratio: &Rat, until: &Rat) -> Result<Path> {
        Self::check_time(at)?;
        Self::check_time(until)?;
        if until <= at {
            return Err(Error::InvalidParam("kink needs until > at".into()));
        }
        let pw = self
            .plain()
            .ok_or_else(|| Error::InvalidParam("kink splices need a piecewise path".into()))?;
        let v_at = pw.value_at(at);
        let v_end = &v_at * ratio;
        let slope = (&v_end - &v_at) / (until - at);
        let mut pieces: Vec<(Rat, Rat, Rat)> = pw
            .pieces()
            .iter()
            .filter(|p| p.start < *at)
            .map(|p| (p.start.clone(), p.value.clone(), p.slope.clone()))
            .collect();
        pieces.push((at.clone(), v_at, slope));
        if *until < int(1) {
            pieces.push((until.clone(), v_end, Rat::zero()));
        }
        Path::cadlag(pieces)
    }
}

// ---------------------------------------------------------------------------
// Prefix comparison
// ---------------------------------------------------------------------------

/// Supremum of prefix agreement: the largest `(t, closed)` such that the two
/// paths coincide on `[0,t]` (closed) or `[0,t)` (open). `(1, true)` iff the
/// paths are identical as functions.
pub fn agreement_time(p1: &Path, p2: &Path) -> Result<PrefixEnd> {
    match (p1, p2) {
        (Path::Spliced(s), other) | (other, Path::Spliced(s)) => spliced_agreement(s, other),
        (Path::Gadget(a), Path::Gadget(b)) => gadget_gadget_agreement(a, b),
        (Path::Gadget(g), other) => gadget_plain_agreement(g, other.plain().unwrap()),
        (other, Path::Gadget(g)) => gadget_plain_agreement(g, other.plain().unwrap()),
        (a, b) => Ok(a.plain().unwrap().agreement(b.plain().unwrap())),
    }
}

fn spliced_agreement(s: &SplicedGadget, other: &Path) -> Result<PrefixEnd> {
    if matches!(other, Path::Spliced(_)) {
        return Err(Error::UnresolvedGadget(
            "prefix comparison of two spliced paths".into(),
        ));
    }
    let inner = Path::Gadget(s.inner.clone());
    let r = agreement_time(&inner, other)?;
    if prefix_lt(&r, &(s.at.clone(), false)) {
        return Ok(r);
    }
    // They agree strictly before the splice; from the splice on, the spliced
    // path is the constant `s.value`.
    if other.value_at(&s.at)? != s.value {
        return Ok((s.at.clone(), false));
    }
    constant_match_end(other, &s.at, &s.value)
}

/// Supremum `(t, closed)` such that `path ≡ v` on `[from, t]` / `[from, t)`,
/// assuming `path(from) == v`.
fn constant_match_end(path: &Path, from: &Rat, v: &Rat) -> Result<PrefixEnd> {
    let one = int(1);
    match path {
        Path::Gadget(g) => {
            if g.gadgets().len() != 1 {
                return Err(Error::UnresolvedGadget(
                    "constant comparison with a multi-gadget path".into(),
                ));
            }
            let gd = &g.gadgets()[0];
            if gd.side == Side::Left {
                return Err(Error::UnresolvedGadget(
                    "constant comparison with a left gadget".into(),
                ));
            }
            match gd.steps_in(from, &one) {
                Some(steps) => {
                    // finitely many value changes remain
                    for (t, _, _) in steps {
                        if g.value_at(&t) != *v {
                            return Ok((t, false));
                        }
                    }
                    constant_match_end(&Path::Step(g.base().clone()), from, v)
                }
                None => {
                    // the interval reaches the accumulation from the left;
                    // base must match up to it, oscillation breaks it after
                    let r = constant_match_end(&Path::Step(g.base().clone()), from, v)?;
                    Ok(prefix_min(r, (gd.at.clone(), true)))
                }
            }
        }
        Path::Spliced(_) => Err(Error::UnresolvedGadget(
            "constant comparison with a spliced path".into(),
        )),
        _ => {
            let pw = path.plain().unwrap();
            let pieces = pw.pieces();
            let mut i = match pieces.binary_search_by(|p| p.start.cmp(from)) {
                Ok(i) => i,
                Err(0) => 0,
                Err(i) => i - 1,
            };
            let mut u = from.clone();
            loop {
                let p = &pieces[i];
                let val = &p.value + &p.slope * (&u - &p.start);
                if val != *v {
                    return Ok((u, false));
                }
                if !p.slope.is_zero() {
                    return Ok((u, true));
                }
                match pieces.get(i + 1) {
                    None => return Ok((one, true)),
                    Some(next) => {
                        u = next.start.clone();
                        i += 1;
                    }
                }
            }
        }
    }
}

fn gadget_plain_agreement(g: &GadgetPath, p: &Piecewise) -> Result<PrefixEnd> {
    let mut bound: Option<PrefixEnd> = None;
    for gd in g.gadgets() {
        match gd.side {
            // A finitely piecewise path cannot follow oscillations that
            // accumulate from the right, so agreement cannot pass `at`.
            Side::Right => {
                let cap = (gd.at.clone(), true);
                bound = Some(match bound {
                    None => cap,
                    Some(b) => prefix_min(b, cap),
                });
            }
            Side::Left => {
                // Expand the gadget far enough that a difference with the
                // finitely piecewise path must show up, then compare exactly.
                // The expansion is a faithful copy of the gadget path on
                // [0, next unexpanded bump), so any agreement supremum found
                // strictly inside that region is the true answer.
                let j_max = last_expand_index(gd, p);
                let expanded = expand_left_gadget(g, gd, j_max)?;
                let r = expanded.agreement(p);
                let sound_to = gd.step_time(j_max + 1, true);
                if !prefix_lt(&r, &(sound_to, true)) {
                    return Err(Error::UnresolvedGadget(
                        "no difference found within the left-gadget expansion".into(),
                    ));
                }
                return Ok(r);
            }
        }
    }
    let r = g.base().pw().agreement(p);
    Ok(match bound {
        None => r,
        Some(b) => prefix_min(r, b),
    })
}

fn last_expand_index(gd: &Gadget, p: &Piecewise) -> u32 {
    // Expand until the steps pass the last breakpoint of `p` below the
    // accumulation point; beyond it `p` is a single affine piece and cannot
    // match a full oscillation. Two extra pairs guarantee a full bump lies
    // past that breakpoint.
    let beta = p
        .pieces()
        .iter()
        .map(|pc| &pc.start)
        .filter(|s| **s < gd.at)
        .max()
        .expect("pieces start at 0 < accumulation");
    let mut j = gd.first_index;
    while gd.step_time(j, true) <= *beta {
        j += 1;
        if j > gd.first_index + 20_000 {
            break;
        }
    }
    j + 2
}

fn expand_left_gadget(g: &GadgetPath, gd: &Gadget, j_max: u32) -> Result<Piecewise> {
    if g.gadgets().len() != 1 {
        return Err(Error::UnresolvedGadget(
            "prefix comparison supports a single gadget per path".into(),
        ));
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for bp in g.base().pw().pieces() {
        if bp.start < gd.step_time(gd.first_index, true) || bp.start >= gd.at {
            pieces.push(bp.clone());
        }
    }
    for j in gd.first_index..=j_max {
        let up_t = gd.step_time(j, true);
        let down_t = gd.step_time(j, false);
        let base_v = g.base().pw().value_at(&up_t);
        pieces.push(Piece {
            start: up_t,
            value: &base_v * gd.family.factor(j),
            slope: Rat::zero(),
        });
        pieces.push(Piece {
            start: down_t,
            value: base_v,
            slope: Rat::zero(),
        });
    }
    pieces.sort_by(|a, b| a.start.cmp(&b.start));
    Piecewise::new(pieces)
}

fn gadget_gadget_agreement(a: &GadgetPath, b: &GadgetPath) -> Result<PrefixEnd> {
    if a.gadgets() == b.gadgets() {
        return Ok(a.base().pw().agreement(b.base().pw()));
    }
    // Structurally different gadget sets: supported exactly when every
    // accumulation is right-sided, where agreement cannot pass the earliest
    // point at which exactly one of the two paths oscillates.
    if a.gadgets()
        .iter()
        .chain(b.gadgets())
        .all(|g| g.side == Side::Right)
    {
        let r = a.base().pw().agreement(b.base().pw());
        let mut best = r;
        for g in a.gadgets().iter().chain(b.gadgets()) {
            if !a.gadgets().contains(g) || !b.gadgets().contains(g) {
                best = prefix_min(best, (g.at.clone(), true));
            }
        }
        return Ok(best);
    }
    Err(Error::UnresolvedGadget(
        "prefix comparison of structurally different gadget paths".into(),
    ))
}

/// Whether the two paths coincide on `[0,t]` (`closed`) or `[0,t)`.
pub fn prefix_equal(p1: &Path, p2: &Path, t: &Rat, closed: bool) -> Result<bool> {
    Path::check_time(t)?;
    let (at, ac) = agreement_time(p1, p2)?;
    Ok(if closed {
        *t < at || (*t == at && ac)
    } else {
        *t <= at
    })
}

// ---------------------------------------------------------------------------
// Zero-behaviour classification
// ---------------------------------------------------------------------------

/// Classification of a positive path by its zero pattern: `A` stays bounded
/// away from 0, `B` hits 0 and never recovers, `C` hits 0 and recovers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroClass {
    A,
    B,
    C,
}

pub fn zero_class(path: &Path) -> Result<ZeroClass> {
    let step = match path {
        Path::Step(s) => s,
        Path::Gadget(g) => g.base(),
        _ => {
            return Err(Error::InvalidParam(
                "zero classification applies to step and gadget paths".into(),
            ))
        }
    };
    let values: Vec<&Rat> = step.pw().pieces().iter().map(|p| &p.value).collect();
    for (i, v) in values.iter().enumerate() {
        if v.is_negative() {
            return Err(Error::NotPositive {
                at: format_rat(&step.pw().pieces()[i].start),
            });
        }
    }
    if values.iter().all(|v| v.is_positive()) {
        return Ok(ZeroClass::A);
    }
    let first_zero = values.iter().position(|v| v.is_zero()).unwrap();
    if first_zero > 0 && values[first_zero..].iter().all(|v| v.is_zero()) {
        Ok(ZeroClass::B)
    } else {
        Ok(ZeroClass::C)
    }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PathDto {
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    points: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    segments: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gadgets: Vec<GadgetDto>,
}

#[derive(Serialize, Deserialize)]
struct GadgetDto {
    accumulation: String,
    side: Side,
    family: String,
    first_index: u32,
}

impl Path {
    pub fn to_json(&self) -> serde_json::Value {
        let dto = match self {
            Path::Step(s) => PathDto {
                kind: "step".into(),
                points: points_dto(s.pw()),
                segments: vec![],
                gadgets: vec![],
            },
            Path::Linear(l) => PathDto {
                kind: "linear".into(),
                points: points_dto(l.pw()),
                segments: vec![],
                gadgets: vec![],
            },
            Path::Cadlag(c) => PathDto {
                kind: "cadlag".into(),
                points: vec![],
                segments: c
                    .pw()
                    .pieces()
                    .iter()
                    .map(|p| (format_rat(&p.start), format_rat(&p.value), format_rat(&p.slope)))
                    .collect(),
                gadgets: vec![],
            },
            Path::Gadget(g) => PathDto {
                kind: "gadget".into(),
                points: points_dto(g.base().pw()),
                segments: vec![],
                gadgets: g
                    .gadgets()
                    .iter()
                    .map(|gd| GadgetDto {
                        accumulation: format_rat(&gd.at),
                        side: gd.side,
                        family: gd.family.name().into(),
                        first_index: gd.first_index,
                    })
                    .collect(),
            },
        };
        serde_json::to_value(dto).expect("path serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Path> {
        let dto: PathDto = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidPath(format!("malformed path JSON: {e}")))?;
        let parse_points = |pts: &[(String, String)]| -> Result<Vec<(Rat, Rat)>> {
            pts.iter()
                .map(|(t, v)| Ok((parse_rat(t)?, parse_rat(v)?)))
                .collect()
        };
        match dto.kind.as_str() {
            "step" => Path::step(parse_points(&dto.points)?),
            "linear" => Path::linear(parse_points(&dto.points)?),
            "cadlag" => {
                let pieces = dto
                    .segments
                    .iter()
                    .map(|(s, v, sl)| Ok((parse_rat(s)?, parse_rat(v)?, parse_rat(sl)?)))
                    .collect::<Result<Vec<_>>>()?;
                Path::cadlag(pieces)
            }
            "gadget" => {
                let base = StepPath::new(parse_points(&dto.points)?)?;
                let gadgets = dto
                    .gadgets
                    .iter()
                    .map(|g| {
                        Ok(Gadget {
                            at: parse_rat(&g.accumulation)?,
                            side: g.side,
                            family: GadgetFamily::from_name(&g.family)?,
                            first_index: g.first_index,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Path::Gadget(GadgetPath::new(base, gadgets)?))
            }
            other => Err(Error::InvalidPath(format!("unknown path kind {other:?}"))),
        }
    }
}

fn points_dto(pw: &Piecewise) -> Vec<(String, String)> {
    pw.pieces()
        .iter()
        .map(|p| (format_rat(&p.start), format_rat(&p.value)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn step(points: &[(i64, i64, i64, i64)]) -> Path {
        Path::step(
            points
                .iter()
                .map(|(tn, td, vn, vd)| (rat(*tn, *td), rat(*vn, *vd)))
                .collect(),
        )
        .unwrap()
    }

    /// The four paths used by the order-type-4 counterexample family.
    fn lemma5_paths() -> Vec<Path> {
        let w1 = Path::cadlag(vec![(rat(0, 1), int(1), int(0))]).unwrap();
        let w2 = Path::cadlag(vec![
            (rat(0, 1), int(1), int(0)),
            (rat(1, 4), int(1), int(1)),
        ])
        .unwrap();
        let w3 = Path::cadlag(vec![
            (rat(0, 1), int(1), int(0)),
            (rat(1, 4), int(1), int(1)),
            (rat(1, 2), int(1), int(0)),
        ])
        .unwrap();
        let w4 = Path::cadlag(vec![
            (rat(0, 1), int(1), int(0)),
            (rat(1, 4), int(1), int(1)),
            (rat(1, 2), int(1), int(0)),
            (rat(3, 4), int(1), int(1)),
        ])
        .unwrap();
        vec![w1, w2, w3, w4]
    }

    #[test]
    fn step_eval_before_jump() {
        let p = step(&[(0, 1, 1, 1), (1, 2, 2, 1)]);
        assert_eq!(p.value_at(&rat(1, 4)).unwrap(), int(1));
        assert_eq!(p.value_at(&rat(1, 2)).unwrap(), int(2));
        assert_eq!(p.left_limit_at(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(p.value_at(&int(1)).unwrap(), int(2));
    }

    #[test]
    fn linear_identity_eval() {
        let p = Path::Linear(LinearPath::identity());
        assert_eq!(p.value_at(&rat(3, 8)).unwrap(), rat(3, 8));
        assert_eq!(p.value_at(&int(1)).unwrap(), int(1));
        assert!(p.value_at(&rat(9, 8)).is_err());
    }

    #[test]
    fn gadget_eval_matches_finite_factor_products() {
        // Right telescoping-harmonic gadget at 1/4 over a constant-1 base:
        // bump pair j holds value (1+1/j) on [1/4+2^{-2j-1}, 1/4+2^{-2j}).
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        // inside bump 2: 1·(1+1/1)·(1+1/1)^{-1}·(1+1/2) = 3/2
        assert_eq!(g.value_at(&rat(9, 32)).unwrap(), rat(3, 2));
        // bump 2 is right-open: at its end the value is back at the base
        assert_eq!(g.value_at(&rat(5, 16)).unwrap(), int(1));
        // inside bump 1
        assert_eq!(g.value_at(&rat(3, 8)).unwrap(), int(2));
        assert_eq!(g.left_limit_at(&rat(3, 8)).unwrap(), int(1));
        // at and before the accumulation point, and past the last step
        assert_eq!(g.value_at(&rat(1, 4)).unwrap(), int(1));
        assert_eq!(g.value_at(&rat(1, 8)).unwrap(), int(1));
        assert_eq!(g.value_at(&rat(3, 4)).unwrap(), int(1));
        // right-continuity at a step time
        assert_eq!(g.value_at(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(g.left_limit_at(&rat(1, 2)).unwrap(), int(2));
    }

    #[test]
    fn left_gadget_mirrors_right() {
        let g = Path::Gadget(GadgetPath::harmonic_left(rat(1, 2)).unwrap());
        // bump 1 occupies [1/2-2^{-2}, 1/2-2^{-3}) at value 2
        assert_eq!(g.value_at(&rat(1, 4)).unwrap(), int(2));
        assert_eq!(g.value_at(&rat(3, 8)).unwrap(), int(1));
        assert_eq!(g.value_at(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(g.value_at(&rat(5, 16)).unwrap(), int(2));
        assert_eq!(g.left_limit_at(&rat(1, 4)).unwrap(), int(1));
    }

    #[test]
    fn prefix_examples() {
        let ws = lemma5_paths();
        // ω₂(1/2) = 5/4 while ω₄(1/2) = 1
        assert!(prefix_equal(&ws[1], &ws[3], &rat(1, 2), false).unwrap());
        assert!(!prefix_equal(&ws[1], &ws[3], &rat(1, 2), true).unwrap());
        assert_eq!(agreement_time(&ws[1], &ws[3]).unwrap(), (rat(1, 2), false));

        let idty = Path::Linear(LinearPath::identity());
        let zero = Path::Linear(LinearPath::constant(int(0)));
        assert!(prefix_equal(&idty, &zero, &int(0), true).unwrap());
        assert!(!prefix_equal(&idty, &zero, &rat(1, 10), true).unwrap());

        let a = step(&[(0, 1, 1, 1)]);
        let b = step(&[(0, 1, 1, 1), (3, 4, 2, 1)]);
        assert!(prefix_equal(&a, &b, &rat(3, 4), false).unwrap());
        assert!(!prefix_equal(&a, &b, &rat(3, 4), true).unwrap());
    }

    #[test]
    fn agreement_examples() {
        let a = step(&[(0, 1, 1, 1), (1, 2, 2, 1)]);
        assert_eq!(agreement_time(&a, &a).unwrap(), (int(1), true));
        let c = step(&[(0, 1, 2, 1)]);
        assert_eq!(agreement_time(&a, &c).unwrap(), (rat(0, 1), false));
        // identical functions built from different representations
        let fine = Path::step(vec![
            (rat(0, 1), int(1)),
            (rat(1, 2), int(1)),
            (rat(3, 4), int(2)),
        ])
        .unwrap();
        let coarse = step(&[(0, 1, 1, 1), (3, 4, 2, 1)]);
        assert_eq!(agreement_time(&fine, &coarse).unwrap(), (int(1), true));
    }

    #[test]
    fn gadget_vs_plain_agreement() {
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        let base = step(&[(0, 1, 1, 1)]);
        assert_eq!(agreement_time(&g, &base).unwrap(), (rat(1, 4), true));
        // base disagreement before the accumulation wins
        let other = step(&[(0, 1, 1, 1), (1, 8, 3, 1)]);
        assert_eq!(agreement_time(&g, &other).unwrap(), (rat(1, 8), false));

        let gl = Path::Gadget(GadgetPath::harmonic_left(rat(1, 2)).unwrap());
        // constant 1 agrees with the left gadget until its first bump
        assert_eq!(agreement_time(&gl, &base).unwrap(), (rat(1, 4), false));
        // a path matching bump 1 exactly agrees further
        let follows = step(&[(0, 1, 1, 1), (1, 4, 2, 1), (3, 8, 1, 1)]);
        assert_eq!(
            agreement_time(&gl, &follows).unwrap(),
            (rat(7, 16), false)
        );
    }

    #[test]
    fn gadget_gadget_agreement_cases() {
        let g1 = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        let g2 = Path::Gadget(GadgetPath::harmonic_right(rat(1, 2)).unwrap());
        assert_eq!(agreement_time(&g1, &g1.clone()).unwrap(), (int(1), true));
        assert_eq!(agreement_time(&g1, &g2).unwrap(), (rat(1, 4), true));
    }

    #[test]
    fn zero_classification() {
        assert_eq!(
            zero_class(&step(&[(0, 1, 1, 1), (1, 2, 2, 1)])).unwrap(),
            ZeroClass::A
        );
        assert_eq!(
            zero_class(&step(&[(0, 1, 1, 1), (1, 2, 0, 1)])).unwrap(),
            ZeroClass::B
        );
        assert_eq!(
            zero_class(&step(&[(0, 1, 1, 1), (1, 3, 0, 1), (2, 3, 1, 1)])).unwrap(),
            ZeroClass::C
        );
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        assert_eq!(zero_class(&g).unwrap(), ZeroClass::A);
    }

    #[test]
    fn json_round_trip() {
        let ws = lemma5_paths();
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        for p in ws.iter().chain([&g]) {
            let v = p.to_json();
            let back = Path::from_json(&v).unwrap();
            assert_eq!(&back, p);
        }
        let v = serde_json::json!({"kind":"step","points":[["0","1"],["1/2","2"]]});
        let p = Path::from_json(&v).unwrap();
        assert_eq!(p.value_at(&rat(1, 4)).unwrap(), int(1));
    }

    #[test]
    fn rejects_malformed_gadgets() {
        // breakpoint inside activity interval
        let base = StepPath::new(vec![(rat(0, 1), int(1)), (rat(3, 8), int(2))]).unwrap();
        let g = Gadget {
            at: rat(1, 4),
            side: Side::Right,
            family: GadgetFamily::TelescopingHarmonic,
            first_index: 1,
        };
        assert!(GadgetPath::new(base, vec![g.clone()]).is_err());
        // activity outside [0,1]
        let gg = Gadget {
            at: rat(15, 16),
            ..g
        };
        assert!(GadgetPath::new(StepPath::constant(int(1)), vec![gg]).is_err());
    }
}
