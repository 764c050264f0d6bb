//! Exact variation calculus over path intervals.
//!
//! Total and positive variation are computed from the piecewise structure:
//! the breakpoint partition attains the supremum for piecewise-affine paths,
//! so finite values are exact (rational, or a formal log sum for the log
//! view). Infinity is never inferred numerically — it comes only from a
//! divergent gadget certificate or from a log-view jump into or out of zero.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logsum::{LogSum, Scalar};
use crate::paths::{Gadget, GadgetPath, Path, Side};
use crate::rat::{format_rat, int, pow2, Rat};

/// Which function the variation is taken of: the path itself or its log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Value,
    Log,
}

/// How increments are aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Agg {
    Total,
    Positive,
    Negative,
}

/// Why a variation is known to be infinite (or only boundable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Certificate {
    #[serde(rename = "telescoping-harmonic")]
    TelescopingHarmonic,
    #[serde(rename = "telescoping-geometric")]
    TelescopingGeometric,
    #[serde(rename = "log-zero-drop")]
    ZeroDrop,
    #[serde(rename = "log-zero-recovery")]
    ZeroRecovery,
}

impl Certificate {
    fn from_family(name: &str) -> Certificate {
        match name {
            "telescoping-harmonic" => Certificate::TelescopingHarmonic,
            _ => Certificate::TelescopingGeometric,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Certificate::TelescopingHarmonic => "telescoping-harmonic",
            Certificate::TelescopingGeometric => "telescoping-geometric",
            Certificate::ZeroDrop => "log-zero-drop",
            Certificate::ZeroRecovery => "log-zero-recovery",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarValue {
    /// Exact value.
    Finite(Scalar),
    /// Certified finite but only enclosed: a convergent gadget tail
    /// contributes an amount known to lie between the bounds.
    FiniteBounded {
        lower: Scalar,
        upper: Scalar,
        certificate: Certificate,
    },
    Infinite { certificate: Certificate },
}

impl VarValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, VarValue::Infinite { .. })
    }

    pub fn exact(&self) -> Option<&Scalar> {
        match self {
            VarValue::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        fn scalar_json(s: &Scalar) -> serde_json::Value {
            match s {
                Scalar::Plain(r) => serde_json::json!({ "value": format_rat(r) }),
                Scalar::Log(l) => serde_json::json!({
                    "logsum": l
                        .terms()
                        .iter()
                        .map(|(q, e)| serde_json::json!([format_rat(q), e]))
                        .collect::<Vec<_>>()
                }),
            }
        }
        match self {
            VarValue::Finite(s) => {
                let mut v = serde_json::json!({ "var": "finite" });
                merge(&mut v, scalar_json(s));
                v
            }
            VarValue::FiniteBounded {
                lower,
                upper,
                certificate,
            } => serde_json::json!({
                "var": "finite-bounded",
                "lower": scalar_json(lower),
                "upper": scalar_json(upper),
                "certificate": certificate.label(),
            }),
            VarValue::Infinite { certificate } => serde_json::json!({
                "var": "infinite",
                "certificate": certificate.label(),
            }),
        }
    }
}

fn merge(target: &mut serde_json::Value, extra: serde_json::Value) {
    if let (Some(t), Some(e)) = (target.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            t.insert(k.clone(), v.clone());
        }
    }
}

/// Times whose one-sided (positive) log-variation is infinite.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InfiniteVariationSets {
    pub i_minus: BTreeSet<Rat>,
    pub i_plus: BTreeSet<Rat>,
    pub j_minus: BTreeSet<Rat>,
    pub j_plus: BTreeSet<Rat>,
}

// ---------------------------------------------------------------------------
// Increment table
// ---------------------------------------------------------------------------

enum Contribution {
    None,
    Add(Scalar),
    Infinite(Certificate),
}

fn contribution(view: View, agg: Agg, from: &Rat, to: &Rat, at: &Rat) -> Result<Contribution> {
    match view {
        View::Value => {
            let diff = to - from;
            let c = match agg {
                Agg::Total => diff.abs(),
                Agg::Positive => {
                    if diff.is_positive() {
                        diff
                    } else {
                        Rat::zero()
                    }
                }
                Agg::Negative => {
                    if diff.is_negative() {
                        -diff
                    } else {
                        Rat::zero()
                    }
                }
            };
            Ok(if c.is_zero() {
                Contribution::None
            } else {
                Contribution::Add(Scalar::Plain(c))
            })
        }
        View::Log => {
            if from.is_negative() || to.is_negative() {
                return Err(Error::NotPositive { at: format_rat(at) });
            }
            match (from.is_zero(), to.is_zero()) {
                (false, false) => {
                    let r = to / from;
                    let mut s = LogSum::zero();
                    match agg {
                        Agg::Total => {
                            if r > Rat::one() {
                                s.push(r, 1)
                            } else if r < Rat::one() {
                                s.push(r, -1)
                            }
                        }
                        Agg::Positive => {
                            if r > Rat::one() {
                                s.push(r, 1)
                            }
                        }
                        Agg::Negative => {
                            if r < Rat::one() {
                                s.push(r, -1)
                            }
                        }
                    }
                    Ok(if s.terms().is_empty() {
                        Contribution::None
                    } else {
                        Contribution::Add(Scalar::Log(s))
                    })
                }
                (false, true) => Ok(match agg {
                    Agg::Positive => Contribution::None,
                    _ => Contribution::Infinite(Certificate::ZeroDrop),
                }),
                (true, false) => Ok(match agg {
                    Agg::Negative => Contribution::None,
                    _ => Contribution::Infinite(Certificate::ZeroRecovery),
                }),
                (true, true) => Ok(Contribution::None),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Gadget tails
// ---------------------------------------------------------------------------

struct TailSplit {
    /// First pair index fully inside the accumulation tail.
    j_tail: u32,
    gadget: Gadget,
    base_value: Rat,
}

/// Splits gadget activity inside `[lo, hi]` into explicit head steps and a
/// fully contained tail. `Err` variant of the outer result reports the
/// divergent case via a certificate.
enum GadgetInInterval {
    Absent,
    FiniteSteps(Vec<Rat>),
    Divergent(Certificate),
    ConvergentTail { head_steps: Vec<Rat>, split: TailSplit },
}

fn gadget_in_interval(gp: &GadgetPath, g: &Gadget, lo: &Rat, hi: &Rat) -> GadgetInInterval {
    match g.steps_in(lo, hi) {
        Some(steps) => {
            if steps.is_empty() {
                GadgetInInterval::Absent
            } else {
                GadgetInInterval::FiniteSteps(steps.into_iter().map(|(t, _, _)| t).collect())
            }
        }
        None => {
            if g.family.divergent() {
                return GadgetInInterval::Divergent(Certificate::from_family(g.family.name()));
            }
            // Pick the split index: the tail pairs j ≥ j_tail must lie wholly
            // inside the interval on the accumulating side.
            let mut j = g.first_index;
            match g.side {
                Side::Right => {
                    while g.step_time(j, true) > *hi {
                        j += 1;
                    }
                }
                Side::Left => {
                    while g.step_time(j, true) <= *lo {
                        j += 1;
                    }
                }
            }
            let j_tail = j.max(g.first_index + 40);
            let mut head_steps = Vec::new();
            for k in g.first_index..j_tail {
                for up in [true, false] {
                    let t = g.step_time(k, up);
                    if t > *lo && t <= *hi {
                        head_steps.push(t);
                    }
                }
            }
            let mid = {
                let (alo, ahi) = g.active_interval();
                (&alo + &ahi) / int(2)
            };
            let base_value = gp.base().pw().value_at(&mid);
            GadgetInInterval::ConvergentTail {
                head_steps,
                split: TailSplit {
                    j_tail,
                    gadget: g.clone(),
                    base_value,
                },
            }
        }
    }
}

impl TailSplit {
    /// Exact tail sum in the value view: `Σ_{j≥j_tail} c·v·(f(j) − 1)` with
    /// `c = 2` for total variation and `c = 1` one-sided, geometric family.
    fn value_sum(&self, agg: Agg) -> Rat {
        let per_side = &self.base_value * pow2(-(self.j_tail as i64) + 1);
        match agg {
            Agg::Total => per_side * int(2) / int(2) * int(2),
            _ => per_side,
        }
    }

    /// Log-view enclosure `[0, bound]` of the tail contribution.
    fn log_upper(&self, agg: Agg) -> LogSum {
        // Σ_{j≥J} log(1+2^{-j}) ≤ 2^{-J+1} ≤ log(1+2^{-J+2}); doubled for
        // total variation.
        let e = match agg {
            Agg::Total => 3,
            _ => 2,
        };
        LogSum::ln(int(1) + pow2(-(self.j_tail as i64) + e))
    }
}

// ---------------------------------------------------------------------------
// Core engine
// ---------------------------------------------------------------------------

fn check_interval(lo: &Rat, hi: &Rat) -> Result<()> {
    if lo.is_negative() || *hi > int(1) || lo > hi {
        return Err(Error::InvalidParam(format!(
            "bad interval [{}, {}]",
            format_rat(lo),
            format_rat(hi)
        )));
    }
    Ok(())
}

fn variation_impl(path: &Path, view: View, lo: &Rat, hi: &Rat, agg: Agg) -> Result<VarValue> {
    check_interval(lo, hi)?;
    if lo == hi {
        return Ok(VarValue::Finite(match view {
            View::Value => Scalar::zero_plain(),
            View::Log => Scalar::zero_log(),
        }));
    }

    let mut nodes: BTreeSet<Rat> = path
        .base_breakpoints()
        .into_iter()
        .filter(|t| t > lo && t < hi)
        .collect();
    let mut tails: Vec<TailSplit> = Vec::new();

    if let Some(gp) = path.gadget() {
        for g in gp.gadgets() {
            match gadget_in_interval(gp, g, lo, hi) {
                GadgetInInterval::Absent => {}
                GadgetInInterval::Divergent(certificate) => {
                    return Ok(VarValue::Infinite { certificate })
                }
                GadgetInInterval::FiniteSteps(steps) => {
                    nodes.extend(steps.into_iter().filter(|t| t < hi));
                }
                GadgetInInterval::ConvergentTail { head_steps, split } => {
                    nodes.extend(head_steps.into_iter().filter(|t| t < hi));
                    tails.push(split);
                }
            }
        }
    }

    let mut acc = match view {
        View::Value => Scalar::zero_plain(),
        View::Log => Scalar::zero_log(),
    };
    let mut points: Vec<Rat> = Vec::with_capacity(nodes.len() + 2);
    points.push(lo.clone());
    points.extend(nodes);
    points.push(hi.clone());

    for w in points.windows(2) {
        let (t0, t1) = (&w[0], &w[1]);
        let v0 = path.value_at(t0)?;
        let pre = path.left_limit_at(t1)?;
        let post = path.value_at(t1)?;
        for (from, to, at) in [(&v0, &pre, t1), (&pre, &post, t1)] {
            match contribution(view, agg, from, to, at)? {
                Contribution::None => {}
                Contribution::Add(s) => acc.add_assign(&s),
                Contribution::Infinite(certificate) => {
                    return Ok(VarValue::Infinite { certificate })
                }
            }
        }
    }

    if tails.is_empty() {
        return Ok(VarValue::Finite(acc));
    }
    match view {
        View::Value => {
            for t in &tails {
                acc.add_assign(&Scalar::Plain(t.value_sum(agg)));
            }
            Ok(VarValue::Finite(acc))
        }
        View::Log => {
            let lower = acc.clone();
            let mut upper = acc;
            for t in &tails {
                upper.add_assign(&Scalar::Log(t.log_upper(agg)));
            }
            Ok(VarValue::FiniteBounded {
                lower,
                upper,
                certificate: Certificate::TelescopingGeometric,
            })
        }
    }
}

/// Supremum over partitions of `Σ |f(tᵢ) − f(tᵢ₋₁)|` on `[lo, hi]`.
pub fn total_variation(path: &Path, view: View, lo: &Rat, hi: &Rat) -> Result<VarValue> {
    variation_impl(path, view, lo, hi, Agg::Total)
}

/// Supremum over partitions of `Σ (f(tᵢ) − f(tᵢ₋₁))⁺`.
pub fn positive_variation(path: &Path, view: View, lo: &Rat, hi: &Rat) -> Result<VarValue> {
    variation_impl(path, view, lo, hi, Agg::Positive)
}

/// Supremum over partitions of `Σ (f(tᵢ) − f(tᵢ₋₁))⁻`.
pub fn negative_variation(path: &Path, view: View, lo: &Rat, hi: &Rat) -> Result<VarValue> {
    variation_impl(path, view, lo, hi, Agg::Negative)
}

/// One-sided local variation: the infimum over shrinking windows `[t', t]`
/// (left) or `[t, t']` (right) of the window variation.
pub fn local_variation(path: &Path, view: View, t: &Rat, side: Side) -> Result<VarValue> {
    let zero = match view {
        View::Value => Scalar::zero_plain(),
        View::Log => Scalar::zero_log(),
    };
    match side {
        Side::Left => {
            if t.is_zero() {
                return Ok(VarValue::Finite(zero));
            }
            if let Some(gp) = path.gadget() {
                for g in gp.gadgets() {
                    if g.side == Side::Left && g.at == *t && g.family.divergent() {
                        return Ok(VarValue::Infinite {
                            certificate: Certificate::from_family(g.family.name()),
                        });
                    }
                }
            }
            // every small enough window contains only the jump at t
            let pre = path.left_limit_at(t)?;
            let post = path.value_at(t)?;
            Ok(match contribution(view, Agg::Total, &pre, &post, t)? {
                Contribution::None => VarValue::Finite(zero),
                Contribution::Add(s) => VarValue::Finite(s),
                Contribution::Infinite(certificate) => VarValue::Infinite { certificate },
            })
        }
        Side::Right => {
            if *t == int(1) {
                return Ok(VarValue::Finite(zero));
            }
            if let Some(gp) = path.gadget() {
                for g in gp.gadgets() {
                    if g.side == Side::Right && g.at == *t && g.family.divergent() {
                        return Ok(VarValue::Infinite {
                            certificate: Certificate::from_family(g.family.name()),
                        });
                    }
                }
            }
            // paths here are right-continuous, so small right windows either
            // carry no movement at all or only a vanishing gadget tail
            Ok(VarValue::Finite(zero))
        }
    }
}

/// Exact finite sets of times with infinite one-sided (positive) variation of
/// `log ω`, read from gadget certificates and from the path's zero pattern.
pub fn infinite_variation_sets(path: &Path) -> Result<InfiniteVariationSets> {
    let mut sets = InfiniteVariationSets::default();
    if let Some(gp) = path.gadget() {
        for g in gp.gadgets() {
            if g.family.divergent() {
                match g.side {
                    Side::Right => {
                        sets.i_plus.insert(g.at.clone());
                        sets.j_plus.insert(g.at.clone());
                    }
                    Side::Left => {
                        sets.i_minus.insert(g.at.clone());
                        sets.j_minus.insert(g.at.clone());
                    }
                }
            }
        }
    }

    // Zero pattern: a transition between zero and positive values makes the
    // log jump to or from −∞.
    let pw = match path {
        Path::Gadget(g) => g.base().pw().clone(),
        _ => path.plain().unwrap().clone(),
    };
    let one = int(1);
    let mut events: Vec<Rat> = pw.pieces().iter().map(|p| p.start.clone()).collect();
    if !events.contains(&one) {
        events.push(one.clone());
    }
    for t in events {
        if t.is_zero() {
            continue;
        }
        let pre = pw.left_limit_at(&t);
        let post = pw.value_at(&t);
        if pre.is_negative() || post.is_negative() {
            return Err(Error::NotPositive { at: format_rat(&t) });
        }
        if pre.is_positive() && post.is_zero() {
            sets.i_minus.insert(t.clone());
        }
        if pre.is_zero() && post.is_positive() {
            sets.i_minus.insert(t.clone());
            sets.j_minus.insert(t.clone());
        }
    }
    // glide recoveries out of zero (continuous paths rising from a zero value)
    for (i, p) in pw.pieces().iter().enumerate() {
        if p.value.is_zero() && p.slope.is_positive() {
            sets.i_plus.insert(p.start.clone());
            sets.j_plus.insert(p.start.clone());
        }
        if p.slope.is_negative() {
            // a glide down to zero ends at the next piece start (or at 1)
            let end = pw
                .pieces()
                .get(i + 1)
                .map(|n| n.start.clone())
                .unwrap_or_else(|| one.clone());
            if p.eval_at(&end).is_zero() {
                sets.i_minus.insert(end);
            }
        }
    }
    Ok(sets)
}

/// Finite-cover decomposition: infinite total log-variation occurs exactly
/// when some point carries infinite one-sided log-variation. True for every
/// representable path.
pub fn decomposition_check(path: &Path) -> Result<bool> {
    let total = total_variation(path, View::Log, &Rat::zero(), &int(1))?;
    let sets = infinite_variation_sets(path)?;
    let any = !(sets.i_minus.is_empty() && sets.i_plus.is_empty());
    Ok(total.is_infinite() == any)
}

// small helper used above
trait PieceEval {
    fn eval_at(&self, t: &Rat) -> Rat;
}

impl PieceEval for crate::paths::Piece {
    fn eval_at(&self, t: &Rat) -> Rat {
        &self.value + &self.slope * (t - &self.start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{GadgetFamily, GadgetPath, LinearPath, StepPath};
    use crate::rat::rat;

    fn step_121() -> Path {
        Path::step(vec![
            (rat(0, 1), int(1)),
            (rat(1, 3), int(2)),
            (rat(2, 3), int(1)),
        ])
        .unwrap()
    }

    fn zero = () {}

    #[test]
    fn total_variation_examples() {
        let p = step_121();
        let v = total_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert_eq!(v.exact().unwrap(), &Scalar::Plain(int(2)));

        let idty = Path::Linear(LinearPath::identity());
        let v = total_variation(&idty, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert_eq!(v.exact().unwrap(), &Scalar::Plain(int(1)));

        let c = Path::Linear(LinearPath::constant(int(5)));
        let v = total_variation(&c, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert!(v.exact().unwrap().is_zero());
    }

    #[test]
    fn positive_variation_examples() {
        let p = step_121();
        let v = positive_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert_eq!(v.exact().unwrap(), &Scalar::Plain(int(1)));

        let dec = Path::step(vec![(rat(0, 1), int(1)), (rat(1, 2), rat(1, 2))]).unwrap();
        let v = positive_variation(&dec, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert!(v.exact().unwrap().is_zero());

        // log view: the only up log-jump is by a factor 2
        let v = positive_variation(&p, View::Log, &Rat::zero(), &int(1)).unwrap();
        assert_eq!(v.exact().unwrap(), &Scalar::Log(LogSum::ln(int(2))));
    }

    #[test]
    fn additivity_at_interior_point() {
        let p = step_121();
        let whole = total_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        let a = total_variation(&p, View::Value, &Rat::zero(), &rat(1, 2)).unwrap();
        let b = total_variation(&p, View::Value, &rat(1, 2), &int(1)).unwrap();
        let mut sum = a.exact().unwrap().clone();
        sum.add_assign(b.exact().unwrap());
        assert_eq!(whole.exact().unwrap(), &sum);
    }

    #[test]
    fn local_variation_examples() {
        let p = Path::step(vec![(rat(0, 1), int(1)), (rat(1, 2), int(2))]).unwrap();
        let v = local_variation(&p, View::Value, &rat(1, 2), Side::Left).unwrap();
        assert_eq!(v.exact().unwrap(), &Scalar::Plain(int(1)));
        let v = local_variation(&p, View::Value, &rat(1, 4), Side::Right).unwrap();
        assert!(v.exact().unwrap().is_zero());
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        let v = local_variation(&g, View::Log, &rat(1, 4), Side::Right).unwrap();
        assert!(v.is_infinite());
        let v = local_variation(&g, View::Log, &rat(1, 4), Side::Left).unwrap();
        assert!(!v.is_infinite());
    }

    #[test]
    fn gadget_variation_certificates() {
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        let v = total_variation(&g, View::Log, &Rat::zero(), &int(1)).unwrap();
        assert!(matches!(
            v,
            VarValue::Infinite {
                certificate: Certificate::TelescopingHarmonic
            }
        ));
        let sets = infinite_variation_sets(&g).unwrap();
        assert_eq!(sets.i_plus.iter().collect::<Vec<_>>(), vec![&rat(1, 4)]);
        assert_eq!(sets.j_plus.iter().collect::<Vec<_>>(), vec![&rat(1, 4)]);
        assert!(sets.i_minus.is_empty() && sets.j_minus.is_empty());

        let gl = Path::Gadget(GadgetPath::harmonic_left(rat(1, 2)).unwrap());
        let sets = infinite_variation_sets(&gl).unwrap();
        assert_eq!(sets.i_minus.iter().collect::<Vec<_>>(), vec![&rat(1, 2)]);
        assert_eq!(sets.j_minus.iter().collect::<Vec<_>>(), vec![&rat(1, 2)]);
        assert!(sets.i_plus.is_empty() && sets.j_plus.is_empty());
    }

    #[test]
    fn convergent_gadget_is_finite() {
        let g = Path::Gadget(
            GadgetPath::new(
                StepPath::constant(int(1)),
                vec![Gadget {
                    at: rat(1, 4),
                    side: Side::Right,
                    family: GadgetFamily::TelescopingGeometric,
                    first_index: 1,
                }],
            )
            .unwrap(),
        );
        let v = total_variation(&g, View::Log, &Rat::zero(), &int(1)).unwrap();
        assert!(!v.is_infinite());
        match &v {
            VarValue::FiniteBounded { lower, upper, .. } => {
                assert!(lower.cmp_same_kind(upper).unwrap() != std::cmp::Ordering::Greater);
            }
            other => panic!("expected bounded value, got {other:?}"),
        }
        // value view is exact
        let v = total_variation(&g, View::Value, &Rat::zero(), &int(1)).unwrap();
        assert!(v.exact().is_some());
        assert!(decomposition_check(&g).unwrap());
    }

    #[test]
    fn decomposition_examples() {
        assert!(decomposition_check(&step_121()).unwrap());
        let g = Path::Gadget(GadgetPath::harmonic_right(rat(1, 4)).unwrap());
        assert!(decomposition_check(&g).unwrap());
    }

    #[test]
    fn zero_pattern_sets() {
        // class B: drop to zero at 1/2
        let b = Path::step(vec![(rat(0, 1), int(1)), (rat(1, 2), int(0))]).unwrap();
        let sets = infinite_variation_sets(&b).unwrap();
        assert!(sets.i_minus.contains(&rat(1, 2)));
        assert!(sets.j_minus.is_empty());
        assert!(decomposition_check(&b).unwrap());
        // var⁺ of the log stays finite for class B
        let vp = positive_variation(&b, View::Log, &Rat::zero(), &int(1)).unwrap();
        assert!(!vp.is_infinite());

        // class C: recovery at 2/3
        let c = Path::step(vec![
            (rat(0, 1), int(1)),
            (rat(1, 3), int(0)),
            (rat(2, 3), int(1)),
        ])
        .unwrap();
        let sets = infinite_variation_sets(&c).unwrap();
        assert!(sets.i_minus.contains(&rat(1, 3)));
        assert!(sets.i_minus.contains(&rat(2, 3)));
        assert!(sets.j_minus.contains(&rat(2, 3)));
        let vp = positive_variation(&c, View::Log, &Rat::zero(), &int(1)).unwrap();
        assert!(vp.is_infinite());
        assert!(decomposition_check(&c).unwrap());
    }

    #[test]
    fn var_splits_into_positive_and_negative() {
        let p = step_121();
        let t = total_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        let pl = positive_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        let mn = negative_variation(&p, View::Value, &Rat::zero(), &int(1)).unwrap();
        let mut sum = pl.exact().unwrap().clone();
        sum.add_assign(mn.exact().unwrap());
        assert_eq!(t.exact().unwrap(), &sum);
    }
}
