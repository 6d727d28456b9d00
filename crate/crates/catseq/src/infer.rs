//! The bound-propagation engine: from user-asserted facts about one or more
//! spaces, bracket each sigma_X between a lower and an upper envelope by
//! running a fixed catalogue of monotone rules to a fixpoint, emitting a
//! derivation trace in which every step carries the statement that justifies
//! it. Also houses the interval-covering cat bound and trace replay.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::seq::{cat_bounds_from_length, CatBounds, SeqValue, Sequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InferError {
    #[error("invalid fact set for {name}: {reason}")]
    InvalidFactSet { name: String, reason: String },
    #[error("relation of {name} names unknown problem {peer}")]
    UnresolvedPeer { name: String, peer: String },
    #[error("unknown target problem {0}")]
    UnknownTarget(String),
    #[error("trace mismatch: {0}")]
    TraceMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RelationKind {
    RetractOf,
    WedgeSummands,
    RationalProductOf,
    FibrationTotal { a: u64, b: u64 },
    LoopSection,
    PiInjectiveMapTo,
}

/// A relation between this problem and others, by name. Peer order matters
/// for `FibrationTotal`: fiber first, then base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    #[serde(flatten)]
    pub kind: RelationKind,
    pub peers: Vec<String>,
}

/// User-asserted facts about one space.
#[derive(Debug, Clone)]
pub struct FactSet {
    pub name: String,
    pub simply_connected: bool,
    /// X is (c-1)-connected but not c-connected; c >= 2.
    pub connectivity: u64,
    /// Degrees with nonvanishing reduced cohomology for some coefficients,
    /// exhaustive up to `complete_up_to`.
    pub nonvanishing: Vec<u64>,
    pub complete_up_to: u64,
    /// Largest nonvanishing degree, when X is (up to homotopy) finite
    /// dimensional.
    pub formal_dimension: Option<u64>,
    /// Pairs (a, b): every cup product H^a (x) H^b -> H^{a+b} vanishes, for
    /// all coefficient choices.
    pub trivial_cups: Vec<(u64, u64)>,
    pub cohomology_algebras: Vec<GradedAlgebra>,
    pub model_algebras: Vec<GradedAlgebra>,
    pub rational: bool,
    pub known_cat: Option<u64>,
    pub relations: Vec<Relation>,
    pub index_cap: Option<u64>,
}

impl FactSet {
    pub fn validate(&self) -> Result<(), InferError> {
        let fail = |reason: String| {
            Err(InferError::InvalidFactSet { name: self.name.clone(), reason })
        };
        if self.connectivity < 2 {
            return fail(format!("connectivity must be >= 2, got {}", self.connectivity));
        }
        if !self.nonvanishing.contains(&self.connectivity) {
            return fail(format!(
                "connectivity {} must be a nonvanishing degree",
                self.connectivity
            ));
        }
        if let Some(&d) = self.nonvanishing.iter().find(|&&d| d > self.complete_up_to) {
            return fail(format!(
                "nonvanishing degree {d} exceeds complete_up_to {}",
                self.complete_up_to
            ));
        }
        if let Some(d) = self.formal_dimension {
            if d > self.complete_up_to {
                return fail(format!(
                    "formal dimension {d} exceeds complete_up_to {}",
                    self.complete_up_to
                ));
            }
        }
        if !self.simply_connected && (!self.trivial_cups.is_empty()) {
            return fail("trivial cup facts require a simply-connected space".into());
        }
        for &(a, b) in &self.trivial_cups {
            if a < self.connectivity || b < self.connectivity {
                return fail(format!(
                    "trivial cup ({a},{b}) lies below the connectivity {}",
                    self.connectivity
                ));
            }
        }
        if !self.model_algebras.is_empty() && !self.rational {
            return fail("model algebras are only meaningful for rational spaces".into());
        }
        for r in &self.relations {
            let arity_ok = match r.kind {
                RelationKind::RetractOf
                | RelationKind::LoopSection
                | RelationKind::PiInjectiveMapTo => r.peers.len() == 1,
                RelationKind::RationalProductOf => r.peers.len() == 2,
                RelationKind::FibrationTotal { .. } => r.peers.len() == 2,
                RelationKind::WedgeSummands => !r.peers.is_empty(),
            };
            if !arity_ok {
                return fail(format!("relation {:?} has the wrong number of peers", r.kind));
            }
            let rational_only = matches!(
                r.kind,
                RelationKind::RationalProductOf | RelationKind::PiInjectiveMapTo
            );
            if rational_only && !self.rational {
                return fail(format!("relation {:?} requires a rational space", r.kind));
            }
        }
        Ok(())
    }
}

/// One side of an envelope entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Bounds on sigma_X(k) for k = 1..=cap. Lower bounds may be an exact
/// number, "unknown above d" (no cohomological data past degree d), or a
/// proven infinity; upper bounds are a number or the trivial infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub lower: Vec<SeqValue>,
    pub upper: Vec<SeqValue>,
}

impl Envelope {
    fn fresh(cap: usize) -> Envelope {
        Envelope {
            lower: vec![SeqValue::Finite(0); cap],
            upper: vec![SeqValue::Infinite; cap],
        }
    }

    pub fn cap(&self) -> usize {
        self.lower.len()
    }

    /// lower(k) for k in 1..=cap.
    pub fn lower_at(&self, k: usize) -> SeqValue {
        if k == 0 {
            SeqValue::Finite(0)
        } else {
            self.lower[k - 1]
        }
    }

    pub fn upper_at(&self, k: usize) -> SeqValue {
        if k == 0 {
            SeqValue::Finite(0)
        } else {
            self.upper[k - 1]
        }
    }

    /// Indices where both sides agree on a finite value or on infinity.
    pub fn exact_indices(&self) -> Vec<usize> {
        (1..=self.cap())
            .filter(|&k| match (self.lower_at(k), self.upper_at(k)) {
                (SeqValue::Finite(a), SeqValue::Finite(b)) => a == b,
                (SeqValue::Infinite, SeqValue::Infinite) => true,
                _ => false,
            })
            .collect()
    }

    /// The sigma values pinned exactly, as a sequence prefix (stops at the
    /// first index that is not exact or not finite).
    pub fn exact_prefix(&self) -> Sequence {
        let mut finite = vec![0u64];
        for k in 1..=self.cap() {
            match (self.lower_at(k), self.upper_at(k)) {
                (SeqValue::Finite(a), SeqValue::Finite(b)) if a == b => finite.push(a),
                _ => break,
            }
        }
        Sequence::from_finite(finite).expect("exact prefix is strictly increasing")
    }

    fn contradiction_at(&self) -> Option<(usize, String)> {
        for k in 1..=self.cap() {
            let lo = self.lower_at(k);
            let up = self.upper_at(k);
            match (lo.lower_bound(), up) {
                (None, SeqValue::Finite(u)) => {
                    return Some((k, format!("sigma({k}) is forced infinite but bounded above by {u}")))
                }
                (Some(l), SeqValue::Finite(u)) if l > u => {
                    return Some((k, format!("sigma({k}) >= {l} contradicts sigma({k}) <= {u}")))
                }
                _ => {}
            }
        }
        // a finite upper bound after a forced infinity breaks monotonicity
        let first_inf = (1..=self.cap()).find(|&k| self.lower_at(k) == SeqValue::Infinite);
        if let Some(k0) = first_inf {
            for k in k0 + 1..=self.cap() {
                if let SeqValue::Finite(u) = self.upper_at(k) {
                    return Some((
                        k,
                        format!("sigma({k0}) = inf but sigma({k}) <= {u} claims a later finite value"),
                    ));
                }
            }
        }
        None
    }
}

/// One recorded bound improvement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub citation: String,
    pub problem: String,
    pub side: Side,
    pub index: u64,
    pub old: String,
    pub new: String,
    pub inputs: Vec<String>,
}

/// The ordered rule applications that produced the final envelopes.
/// Replaying the steps from fresh envelopes reproduces them bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub problem: String,
    pub index: u64,
    pub detail: String,
}

/// Result of a fixpoint run: either envelopes for every problem plus cat
/// bounds for the target, or a structured contradiction. Both carry the
/// trace that led there.
#[derive(Debug, Clone)]
pub enum Outcome {
    Success {
        target: String,
        envelopes: BTreeMap<String, Envelope>,
        cat: CatBounds,
        trace: DerivationTrace,
    },
    Contradiction { contradiction: Contradiction, trace: DerivationTrace },
}

/// Rule identifiers in firing order.
const RULE_ORDER: [RuleId; 15] = [
    RuleId::Init,
    RuleId::StrictIncrease,
    RuleId::Superadditive,
    RuleId::Nonvanishing,
    RuleId::TrivialCup,
    RuleId::DimensionKill,
    RuleId::CupLengthUpper,
    RuleId::ModelLower,
    RuleId::Retract,
    RuleId::Wedge,
    RuleId::ProductUpper,
    RuleId::Fibration,
    RuleId::LoopSection,
    RuleId::KnownCat,
    RuleId::SuperadditiveUpper,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    Init,
    StrictIncrease,
    Superadditive,
    Nonvanishing,
    TrivialCup,
    DimensionKill,
    CupLengthUpper,
    ModelLower,
    Retract,
    Wedge,
    ProductUpper,
    Fibration,
    LoopSection,
    KnownCat,
    SuperadditiveUpper,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::Init => "R1-init",
            RuleId::StrictIncrease => "R2-strict-increase",
            RuleId::Superadditive => "R3-superadditive",
            RuleId::Nonvanishing => "R4-nonvanishing",
            RuleId::TrivialCup => "R5-trivial-cup",
            RuleId::DimensionKill => "R6-dimension-kill",
            RuleId::CupLengthUpper => "R7-cup-length-upper",
            RuleId::ModelLower => "R8-model-lower",
            RuleId::Retract => "R9-retract",
            RuleId::Wedge => "R10-wedge",
            RuleId::ProductUpper => "R11-product-upper",
            RuleId::Fibration => "R12-fibration",
            RuleId::LoopSection => "R13-loop-section",
            RuleId::KnownCat => "R14-known-cat",
            RuleId::SuperadditiveUpper => "R15-superadditive-upper",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::Init => "sigma_X(0) = 0 and sigma_X(1) = c for a (c-1)-connected, not c-connected space",
            RuleId::StrictIncrease => "the finite values of sigma_X are strictly increasing",
            RuleId::Superadditive => "sigma_X(k+l) >= sigma_X(k) + sigma_X(l)",
            RuleId::Nonvanishing => "if X is simply-connected and sigma_X(k) = n then H^n(X;A) != 0 for some coefficient group A",
            RuleId::TrivialCup => "if X is simply-connected and sigma_X(k+l) = sigma_X(k) + sigma_X(l), some cup product H^a (x) H^b -> H^{a+b} with a = sigma_X(k), b = sigma_X(l) is nontrivial",
            RuleId::DimensionKill => "every finite sigma_X value is a nonvanishing degree, so it cannot exceed the formal dimension",
            RuleId::CupLengthUpper => "sigma_X <= sigma_{H^*(X;R)} for any ring R",
            RuleId::ModelLower => "sigma_X >= sigma_A for any model A of the simply-connected rational space X",
            RuleId::Retract => "a homotopy retract X of Y, or a pi_*-injective map of rational spaces X -> Y, gives sigma_X >= sigma_Y",
            RuleId::Wedge => "sigma over a wedge is the pointwise minimum of the summand sequences",
            RuleId::ProductUpper => "sigma_{X x Y} <= sigma_X * sigma_Y for simply-connected rational X and Y",
            RuleId::Fibration => "for a fibration F -> E -> B with a = cat(q), b = cat(p): sigma_E(k(a+1)) >= sigma_B(k) and sigma_E(k(b+1)) >= sigma_F(k)",
            RuleId::LoopSection => "if Omega p admits a section then sigma_E <= sigma_F",
            RuleId::KnownCat => "cat(X) equals the length of sigma_X when X is finite dimensional",
            RuleId::SuperadditiveUpper => "sigma_X(k) <= sigma_X(k+l) - sigma_X(l), rearranged superadditivity",
        }
    }
}

struct Engine<'a> {
    problems: &'a [FactSet],
    /// index by name into `problems`
    by_name: BTreeMap<&'a str, usize>,
    cap: usize,
    envelopes: Vec<Envelope>,
    /// per problem: product-length sequences of its cohomology algebras
    cup_sequences: Vec<Vec<Sequence>>,
    /// per problem: product-length sequences of its model algebras
    model_sequences: Vec<Vec<Sequence>>,
    trace: Vec<TraceStep>,
    contradiction: Option<Contradiction>,
}

fn fmt_bound(v: SeqValue) -> String {
    v.to_string()
}

impl<'a> Engine<'a> {
    fn new(problems: &'a [FactSet], cap: usize) -> Engine<'a> {
        let by_name = problems.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect();
        let cup_sequences = problems
            .iter()
            .map(|p| {
                p.cohomology_algebras
                    .iter()
                    .map(|a| a.product_length_sequence(cap as u64))
                    .collect()
            })
            .collect();
        let model_sequences = problems
            .iter()
            .map(|p| {
                p.model_algebras
                    .iter()
                    .map(|a| a.product_length_sequence(cap as u64))
                    .collect()
            })
            .collect();
        Engine {
            problems,
            by_name,
            cap,
            envelopes: vec![Envelope::fresh(cap); problems.len()],
            cup_sequences,
            model_sequences,
            trace: Vec::new(),
            contradiction: None,
        }
    }

    fn peer(&self, name: &str) -> usize {
        self.by_name[name]
    }

    /// Raise a lower bound if `new` is stronger; record the step.
    fn raise_lower(&mut self, rule: RuleId, p: usize, k: usize, new: SeqValue, inputs: Vec<String>) {
        let old = self.envelopes[p].lower_at(k);
        if !stronger_lower(old, new) {
            return;
        }
        self.envelopes[p].lower[k - 1] = new;
        self.trace.push(TraceStep {
            rule: rule.name().into(),
            citation: rule.citation().into(),
            problem: self.problems[p].name.clone(),
            side: Side::Lower,
            index: k as u64,
            old: fmt_bound(old),
            new: fmt_bound(new),
            inputs,
        });
        self.check(p);
    }

    /// Lower an upper bound if `new` is stronger; record the step.
    fn cut_upper(&mut self, rule: RuleId, p: usize, k: usize, new: u64, inputs: Vec<String>) {
        let old = self.envelopes[p].upper_at(k);
        let improves = match old {
            SeqValue::Finite(u) => new < u,
            SeqValue::Infinite => true,
            SeqValue::UnknownAbove(_) => unreachable!("upper bounds are never unknown"),
        };
        if !improves {
            return;
        }
        self.envelopes[p].upper[k - 1] = SeqValue::Finite(new);
        self.trace.push(TraceStep {
            rule: rule.name().into(),
            citation: rule.citation().into(),
            problem: self.problems[p].name.clone(),
            side: Side::Upper,
            index: k as u64,
            old: fmt_bound(old),
            new: fmt_bound(SeqValue::Finite(new)),
            inputs,
        });
        self.check(p);
    }

    fn check(&mut self, p: usize) {
        if self.contradiction.is_some() {
            return;
        }
        if let Some((k, detail)) = self.envelopes[p].contradiction_at() {
            self.contradiction = Some(Contradiction {
                problem: self.problems[p].name.clone(),
                index: k as u64,
                detail,
            });
        }
    }

    fn run(&mut self, order: &[RuleId]) {
        // R1 seeds both sides once; everything else iterates to a fixpoint
        loop {
            let steps_before = self.trace.len();
            for &rule in order {
                for p in 0..self.problems.len() {
                    self.apply(rule, p);
                    if self.contradiction.is_some() {
                        return;
                    }
                }
            }
            if self.trace.len() == steps_before {
                return;
            }
        }
    }

    fn apply(&mut self, rule: RuleId, p: usize) {
        match rule {
            RuleId::Init => self.rule_init(p),
            RuleId::StrictIncrease => self.rule_strict_increase(p),
            RuleId::Superadditive => self.rule_superadditive(p),
            RuleId::Nonvanishing => self.rule_nonvanishing(p),
            RuleId::TrivialCup => self.rule_trivial_cup(p),
            RuleId::DimensionKill => self.rule_dimension_kill(p),
            RuleId::CupLengthUpper => self.rule_cup_length_upper(p),
            RuleId::ModelLower => self.rule_model_lower(p),
            RuleId::Retract => self.rule_retract(p),
            RuleId::Wedge => self.rule_wedge(p),
            RuleId::ProductUpper => self.rule_product_upper(p),
            RuleId::Fibration => self.rule_fibration(p),
            RuleId::LoopSection => self.rule_loop_section(p),
            RuleId::KnownCat => self.rule_known_cat(p),
            RuleId::SuperadditiveUpper => self.rule_superadditive_upper(p),
        }
    }

    fn rule_init(&mut self, p: usize) {
        let c = self.problems[p].connectivity;
        let why = vec![format!("connectivity c = {c}")];
        self.raise_lower(RuleId::Init, p, 1, SeqValue::Finite(c), why.clone());
        self.cut_upper(RuleId::Init, p, 1, c, why);
    }

    fn rule_strict_increase(&mut self, p: usize) {
        for k in 2..=self.cap {
            let prev = self.envelopes[p].lower_at(k - 1);
            let bumped = match prev {
                SeqValue::Finite(n) => SeqValue::Finite(n + 1),
                SeqValue::UnknownAbove(d) => SeqValue::UnknownAbove(d + 1),
                // nothing finite can follow an infinite value
                SeqValue::Infinite => SeqValue::Infinite,
            };
            let why = vec![format!("lower({}) = {}", k - 1, fmt_bound(prev))];
            self.raise_lower(RuleId::StrictIncrease, p, k, bumped, why);
        }
    }

    fn rule_superadditive(&mut self, p: usize) {
        for k in 2..=self.cap {
            let mut best: Option<(SeqValue, usize)> = None;
            for i in 1..=k / 2 {
                let sum = self.envelopes[p].lower_at(i).add(self.envelopes[p].lower_at(k - i));
                let replace = match best {
                    None => true,
                    Some((b, _)) => stronger_lower(b, sum),
                };
                if replace {
                    best = Some((sum, i));
                }
            }
            if let Some((sum, i)) = best {
                let why = vec![
                    format!("lower({i}) = {}", fmt_bound(self.envelopes[p].lower_at(i))),
                    format!("lower({}) = {}", k - i, fmt_bound(self.envelopes[p].lower_at(k - i))),
                ];
                self.raise_lower(RuleId::Superadditive, p, k, sum, why);
            }
        }
    }

    fn rule_nonvanishing(&mut self, p: usize) {
        let fs = &self.problems[p];
        if !fs.simply_connected {
            return;
        }
        let d_cap = fs.complete_up_to;
        for k in 1..=self.cap {
            let SeqValue::Finite(m) = self.envelopes[p].lower_at(k) else { continue };
            if m > d_cap || fs.nonvanishing.contains(&m) {
                continue;
            }
            let next = fs.nonvanishing.iter().filter(|&&h| h >= m).min().copied();
            match next {
                Some(h) => {
                    let why = vec![format!(
                        "no nonvanishing degree in [{m},{}]; next is {h}",
                        h - 1
                    )];
                    self.raise_lower(RuleId::Nonvanishing, p, k, SeqValue::Finite(h), why);
                }
                None if fs.formal_dimension.is_some() => {
                    let why = vec![format!(
                        "no nonvanishing degree >= {m} and the space is finite dimensional"
                    )];
                    self.raise_lower(RuleId::Nonvanishing, p, k, SeqValue::Infinite, why);
                }
                None => {
                    let why = vec![format!(
                        "no nonvanishing degree in [{m},{d_cap}] and no data above {d_cap}"
                    )];
                    self.raise_lower(RuleId::Nonvanishing, p, k, SeqValue::UnknownAbove(d_cap), why);
                }
            }
        }
    }

    fn rule_trivial_cup(&mut self, p: usize) {
        let fs = &self.problems[p];
        if !fs.simply_connected || fs.trivial_cups.is_empty() {
            return;
        }
        for k in 2..=self.cap {
            let SeqValue::Finite(m) = self.envelopes[p].lower_at(k) else { continue };
            let mut witness = None;
            for i in 1..=k / 2 {
                let (SeqValue::Finite(a), SeqValue::Finite(b)) =
                    (self.envelopes[p].lower_at(i), self.envelopes[p].lower_at(k - i))
                else {
                    continue;
                };
                let pair = (a.min(b), a.max(b));
                if a + b == m && fs.trivial_cups.contains(&pair) {
                    witness = Some((i, k - i, a, b));
                    break;
                }
            }
            if let Some((i, j, a, b)) = witness {
                let why = vec![
                    format!("lower({i}) + lower({j}) = {a} + {b} = lower({k})"),
                    format!("the cup product H^{a} (x) H^{b} -> H^{} is trivial", a + b),
                ];
                self.raise_lower(RuleId::TrivialCup, p, k, SeqValue::Finite(m + 1), why);
            }
        }
    }

    fn rule_dimension_kill(&mut self, p: usize) {
        let Some(d) = self.problems[p].formal_dimension else { return };
        for k in 1..=self.cap {
            let SeqValue::Finite(m) = self.envelopes[p].lower_at(k) else { continue };
            if m > d {
                let why = vec![format!("lower({k}) = {m} exceeds the formal dimension {d}")];
                self.raise_lower(RuleId::DimensionKill, p, k, SeqValue::Infinite, why);
            }
        }
    }

    fn rule_cup_length_upper(&mut self, p: usize) {
        for (ai, sigma) in self.cup_sequences[p].clone().into_iter().enumerate() {
            for k in 1..=self.cap {
                if let SeqValue::Finite(n) = sigma.at(k) {
                    let why = vec![format!("cohomology algebra #{ai} has sigma({k}) = {n}")];
                    self.cut_upper(RuleId::CupLengthUpper, p, k, n, why);
                }
            }
        }
    }

    fn rule_model_lower(&mut self, p: usize) {
        if !self.problems[p].rational {
            return;
        }
        for (ai, sigma) in self.model_sequences[p].clone().into_iter().enumerate() {
            for k in 1..=self.cap {
                let v = sigma.at(k);
                let why = vec![format!("model algebra #{ai} has sigma({k}) = {}", fmt_bound(v))];
                self.raise_lower(RuleId::ModelLower, p, k, v, why);
            }
        }
    }

    /// Covers both retracts and pi_*-injective maps: sigma_X >= sigma_Y, so
    /// lower bounds flow from Y up to X and upper bounds from X down to Y.
    fn rule_retract(&mut self, p: usize) {
        let relations = self.problems[p].relations.clone();
        for r in relations {
            let applies = matches!(r.kind, RelationKind::RetractOf)
                || (matches!(r.kind, RelationKind::PiInjectiveMapTo) && self.problems[p].rational);
            if !applies {
                continue;
            }
            let y = self.peer(&r.peers[0]);
            for k in 1..=self.cap {
                let from = self.envelopes[y].lower_at(k);
                let why = vec![format!("{}.lower({k}) = {}", r.peers[0], fmt_bound(from))];
                self.raise_lower(RuleId::Retract, p, k, from, why);
                if let SeqValue::Finite(u) = self.envelopes[p].upper_at(k) {
                    let why = vec![format!(
                        "{}.upper({k}) = {u}",
                        self.problems[p].name
                    )];
                    self.cut_upper(RuleId::Retract, y, k, u, why);
                }
            }
        }
    }

    fn rule_wedge(&mut self, p: usize) {
        let relations = self.problems[p].relations.clone();
        for r in relations {
            if !matches!(r.kind, RelationKind::WedgeSummands) {
                continue;
            }
            let peers: Vec<usize> = r.peers.iter().map(|n| self.peer(n)).collect();
            for k in 1..=self.cap {
                // lower_X(k) >= min over summands of lower_{Y_i}(k)
                let lo = SeqValue::min_of(peers.iter().map(|&y| self.envelopes[y].lower_at(k)));
                let why = vec![format!(
                    "min of summand lower bounds at k = {k} is {}",
                    fmt_bound(lo)
                )];
                self.raise_lower(RuleId::Wedge, p, k, lo, why);
                // upper_X(k) <= min over summands of upper_{Y_i}(k)
                let ups: Vec<SeqValue> = peers.iter().map(|&y| self.envelopes[y].upper_at(k)).collect();
                if let SeqValue::Finite(u) = SeqValue::min_of(ups) {
                    let why = vec![format!("min of summand upper bounds at k = {k} is {u}")];
                    self.cut_upper(RuleId::Wedge, p, k, u, why);
                }
            }
        }
    }

    fn rule_product_upper(&mut self, p: usize) {
        if !self.problems[p].rational {
            return;
        }
        let relations = self.problems[p].relations.clone();
        for r in relations {
            if !matches!(r.kind, RelationKind::RationalProductOf) {
                continue;
            }
            let (y, z) = (self.peer(&r.peers[0]), self.peer(&r.peers[1]));
            for k in 1..=self.cap {
                let mut best: Option<(u64, usize)> = None;
                for i in 0..=k {
                    let (SeqValue::Finite(a), SeqValue::Finite(b)) =
                        (self.envelopes[y].upper_at(i), self.envelopes[z].upper_at(k - i))
                    else {
                        continue;
                    };
                    if best.map_or(true, |(v, _)| a + b < v) {
                        best = Some((a + b, i));
                    }
                }
                if let Some((v, i)) = best {
                    let why = vec![format!(
                        "{}.upper({i}) + {}.upper({}) = {v}",
                        r.peers[0],
                        r.peers[1],
                        k - i
                    )];
                    self.cut_upper(RuleId::ProductUpper, p, k, v, why);
                }
            }
        }
    }

    fn rule_fibration(&mut self, p: usize) {
        let relations = self.problems[p].relations.clone();
        for r in relations {
            let RelationKind::FibrationTotal { a, b } = r.kind else { continue };
            let fiber = self.peer(&r.peers[0]);
            let base = self.peer(&r.peers[1]);
            for m in 1..=self.cap {
                let kb = m / (a as usize + 1);
                if kb >= 1 {
                    let from = self.envelopes[base].lower_at(kb);
                    let why = vec![format!(
                        "{}.lower({kb}) = {} with a = {a}",
                        r.peers[1],
                        fmt_bound(from)
                    )];
                    self.raise_lower(RuleId::Fibration, p, m, from, why);
                }
                let kf = m / (b as usize + 1);
                if kf >= 1 {
                    let from = self.envelopes[fiber].lower_at(kf);
                    let why = vec![format!(
                        "{}.lower({kf}) = {} with b = {b}",
                        r.peers[0],
                        fmt_bound(from)
                    )];
                    self.raise_lower(RuleId::Fibration, p, m, from, why);
                }
            }
        }
    }

    fn rule_loop_section(&mut self, p: usize) {
        let relations = self.problems[p].relations.clone();
        for r in relations {
            if !matches!(r.kind, RelationKind::LoopSection) {
                continue;
            }
            let fiber = self.peer(&r.peers[0]);
            for k in 1..=self.cap {
                if let SeqValue::Finite(u) = self.envelopes[fiber].upper_at(k) {
                    let why = vec![format!("{}.upper({k}) = {u}", r.peers[0])];
                    self.cut_upper(RuleId::LoopSection, p, k, u, why);
                }
            }
        }
    }

    fn rule_known_cat(&mut self, p: usize) {
        let fs = &self.problems[p];
        let Some(m) = fs.known_cat else { return };
        let m = m as usize;
        if let Some(d) = fs.formal_dimension {
            // cat = length pins sigma(m) finite (at most d) and sigma(m+1) = inf
            if (1..=self.cap).contains(&m) {
                let why = vec![format!("cat = {m} and formal dimension {d}")];
                self.cut_upper(RuleId::KnownCat, p, m, d, why);
            }
            if m + 1 <= self.cap {
                let why = vec![format!("cat = {m} bounds the length of sigma")];
                self.raise_lower(RuleId::KnownCat, p, m + 1, SeqValue::Infinite, why);
            }
        }
        // without a formal dimension, cat only bounds the length within a
        // factor of two, which never pins an envelope entry
    }

    fn rule_superadditive_upper(&mut self, p: usize) {
        for k in 1..self.cap {
            let mut best: Option<(u64, usize)> = None;
            for l in 1..=self.cap - k {
                let SeqValue::Finite(u) = self.envelopes[p].upper_at(k + l) else { continue };
                let Some(lo) = self.envelopes[p].lower_at(l).lower_bound() else { continue };
                if lo > u {
                    continue; // contradiction handled elsewhere
                }
                let bound = u - lo;
                if best.map_or(true, |(v, _)| bound < v) {
                    best = Some((bound, l));
                }
            }
            if let Some((v, l)) = best {
                let why = vec![format!(
                    "upper({}) = {} and lower({l}) = {}",
                    k + l,
                    fmt_bound(self.envelopes[p].upper_at(k + l)),
                    fmt_bound(self.envelopes[p].lower_at(l))
                )];
                self.cut_upper(RuleId::SuperadditiveUpper, p, k, v, why);
            }
        }
    }

    /// cat bounds for one problem, once at the fixpoint.
    fn cat_bounds(&self, p: usize) -> Result<CatBounds, Contradiction> {
        let fs = &self.problems[p];
        let env = &self.envelopes[p];
        let finite_dimensional = fs.formal_dimension.is_some();
        // length >= k whenever sigma(k) is bounded above
        let cat_lower = (1..=self.cap)
            .filter(|&k| matches!(env.upper_at(k), SeqValue::Finite(_)))
            .max()
            .unwrap_or(0) as u64;
        // length <= first forced infinity - 1
        let length_cap = (1..=self.cap)
            .find(|&k| env.lower_at(k) == SeqValue::Infinite)
            .map(|k| (k - 1) as u64);
        let cat_upper = length_cap.map(|l| {
            cat_bounds_from_length(l, finite_dimensional)
                .upper
                .expect("lengths give finite upper bounds")
        });
        let mut bounds = CatBounds { lower: cat_lower, upper: cat_upper };
        if let Some(m) = fs.known_cat {
            let consistent = bounds.lower <= m && bounds.upper.map_or(true, |u| m <= u);
            if !consistent {
                return Err(Contradiction {
                    problem: fs.name.clone(),
                    index: 0,
                    detail: format!(
                        "asserted cat = {m} conflicts with derived bounds [{}, {}]",
                        bounds.lower,
                        bounds.upper.map_or("inf".into(), |u| u.to_string())
                    ),
                });
            }
            bounds = CatBounds { lower: m, upper: Some(m) };
        }
        Ok(bounds)
    }
}

/// Is `new` strictly more informative than `old` as a lower bound?
fn stronger_lower(old: SeqValue, new: SeqValue) -> bool {
    match (old, new) {
        (_, SeqValue::Infinite) => old != SeqValue::Infinite,
        (SeqValue::Infinite, _) => false,
        (a, b) => match (a.lower_bound().unwrap(), b.lower_bound().unwrap()) {
            (x, y) if y > x => true,
            (x, y) if y < x => false,
            // same numeric content: "unknown above" additionally records
            // that no cohomological data covers the value
            _ => {
                matches!(b, SeqValue::UnknownAbove(_)) && matches!(a, SeqValue::Finite(_))
            }
        },
    }
}

/// Run the rule catalogue over the joint problem set until no bound moves,
/// then read off cat bounds for `target`.
pub fn run_fixpoint(problems: &[FactSet], target: &str, index_cap: u64) -> Result<Outcome, InferError> {
    run_fixpoint_with_order(problems, target, index_cap, &RULE_ORDER)
}

/// Same, with an explicit rule priority order: the final envelopes do not
/// depend on it, only the trace does.
pub fn run_fixpoint_with_order(
    problems: &[FactSet],
    target: &str,
    index_cap: u64,
    order: &[RuleId],
) -> Result<Outcome, InferError> {
    for p in problems {
        p.validate()?;
        for r in &p.relations {
            for peer in &r.peers {
                if !problems.iter().any(|q| &q.name == peer) {
                    return Err(InferError::UnresolvedPeer {
                        name: p.name.clone(),
                        peer: peer.clone(),
                    });
                }
            }
        }
    }
    if !problems.iter().any(|p| p.name == target) {
        return Err(InferError::UnknownTarget(target.to_string()));
    }

    let mut engine = Engine::new(problems, index_cap as usize);
    engine.run(order);
    let trace = DerivationTrace { steps: engine.trace.clone() };
    if let Some(contradiction) = engine.contradiction.clone() {
        return Ok(Outcome::Contradiction { contradiction, trace });
    }
    let t = engine.peer(target);
    let cat = match engine.cat_bounds(t) {
        Ok(cat) => cat,
        Err(contradiction) => return Ok(Outcome::Contradiction { contradiction, trace }),
    };
    let envelopes = problems
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.clone(), engine.envelopes[i].clone()))
        .collect();
    Ok(Outcome::Success { target: target.to_string(), envelopes, cat, trace })
}

/// Reapply a recorded trace to fresh envelopes, verifying each step's
/// before-value, and return the resulting envelopes.
pub fn replay_trace(
    problems: &[FactSet],
    index_cap: u64,
    trace: &DerivationTrace,
) -> Result<BTreeMap<String, Envelope>, InferError> {
    let mut envelopes: BTreeMap<String, Envelope> = problems
        .iter()
        .map(|p| (p.name.clone(), Envelope::fresh(index_cap as usize)))
        .collect();
    for (i, step) in trace.steps.iter().enumerate() {
        let env = envelopes.get_mut(&step.problem).ok_or_else(|| {
            InferError::TraceMismatch(format!("step {i} names unknown problem {}", step.problem))
        })?;
        let k = step.index as usize;
        if k == 0 || k > env.cap() {
            return Err(InferError::TraceMismatch(format!(
                "step {i} has index {k} outside 1..={}",
                env.cap()
            )));
        }
        let slot = match step.side {
            Side::Lower => &mut env.lower[k - 1],
            Side::Upper => &mut env.upper[k - 1],
        };
        if fmt_bound(*slot) != step.old {
            return Err(InferError::TraceMismatch(format!(
                "step {i} expects {} before, found {}",
                step.old,
                fmt_bound(*slot)
            )));
        }
        *slot = parse_bound(&step.new).ok_or_else(|| {
            InferError::TraceMismatch(format!("step {i} has unreadable value {:?}", step.new))
        })?;
    }
    Ok(envelopes)
}

fn parse_bound(s: &str) -> Option<SeqValue> {
    if s == "inf" {
        Some(SeqValue::Infinite)
    } else if let Some(rest) = s.strip_prefix('>') {
        rest.parse().ok().map(SeqValue::UnknownAbove)
    } else {
        s.parse().ok().map(SeqValue::Finite)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaneaError {
    #[error("interval anchors must be strictly increasing and positive")]
    BadAnchors,
    #[error("nonvanishing data is only complete up to {have}, intervals reach {need}")]
    IncompleteData { have: u64, need: u64 },
    #[error("hypothesis fails: degree {degree} lies outside every interval")]
    HypothesisFails { degree: u64 },
}

/// Result of the interval-covering bound: cat(X) < `strict_bound`, with the
/// induction steps sigma(k*j) >= a_j recorded for the trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaneaBound {
    pub strict_bound: u64,
    pub intervals: Vec<(u64, u64)>,
    pub steps: Vec<TraceStep>,
}

/// If sigma_X(k) = n and every nonvanishing degree lies in one of the
/// intervals [a_j, a_j + n - 1], then cat(X) < k(l+1) where l counts the
/// intervals. The degrees given must be all of them: completeness must cover
/// at least the last interval's end.
pub fn ganea_bound(
    k: u64,
    n: u64,
    anchors: &[u64],
    nonvanishing: &[u64],
    complete_up_to: u64,
) -> Result<GaneaBound, GaneaError> {
    if k == 0 || n == 0 || anchors.is_empty() {
        return Err(GaneaError::BadAnchors);
    }
    if anchors[0] == 0 || anchors.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GaneaError::BadAnchors);
    }
    let l = anchors.len() as u64;
    let intervals: Vec<(u64, u64)> = anchors.iter().map(|&a| (a, a + n - 1)).collect();
    let need = intervals.last().unwrap().1;
    if complete_up_to < need {
        return Err(GaneaError::IncompleteData { have: complete_up_to, need });
    }
    if !nonvanishing.contains(&n) {
        return Err(GaneaError::HypothesisFails { degree: n });
    }
    for &h in nonvanishing {
        if !intervals.iter().any(|&(lo, hi)| lo <= h && h <= hi) {
            return Err(GaneaError::HypothesisFails { degree: h });
        }
    }
    // replay the induction sigma(k*j) >= a_j
    let mut steps = Vec::new();
    let mut prev = n;
    for (j, &(a_j, hi_j)) in intervals.iter().enumerate() {
        let j = j as u64 + 1;
        let inputs = if j == 1 {
            vec![format!("sigma({k}) = {n} lies in [{a_j},{hi_j}]")]
        } else {
            vec![format!(
                "sigma({k}*{j}) >= sigma({k}*{}) + sigma({k}) >= {} + {n} clears every earlier interval",
                j - 1,
                prev
            )]
        };
        steps.push(TraceStep {
            rule: "ganea-induction".into(),
            citation: RuleId::Superadditive.citation().into(),
            problem: String::new(),
            side: Side::Lower,
            index: k * j,
            old: "0".into(),
            new: format!("{a_j}"),
            inputs,
        });
        prev = a_j;
    }
    steps.push(TraceStep {
        rule: "ganea-conclusion".into(),
        citation: RuleId::Nonvanishing.citation().into(),
        problem: String::new(),
        side: Side::Lower,
        index: k * (l + 1),
        old: "0".into(),
        new: "inf".into(),
        inputs: vec![format!(
            "sigma({k}*{}) > {} + {n} lands above every interval, hence above every nonvanishing degree",
            l + 1,
            intervals.last().unwrap().0
        )],
    });
    Ok(GaneaBound { strict_bound: k * (l + 1), intervals, steps })
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Lower => write!(f, "lower"),
            Side::Upper => write!(f, "upper"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exterior_algebra, tensor, truncated_polynomial_algebra};
    use crate::field::Field;

    fn blank(name: &str, c: u64, h: &[u64], complete: u64) -> FactSet {
        FactSet {
            name: name.into(),
            simply_connected: true,
            connectivity: c,
            nonvanishing: h.to_vec(),
            complete_up_to: complete,
            formal_dimension: None,
            trivial_cups: Vec::new(),
            cohomology_algebras: Vec::new(),
            model_algebras: Vec::new(),
            rational: false,
            known_cat: None,
            relations: Vec::new(),
            index_cap: None,
        }
    }

    pub fn sp3_facts() -> FactSet {
        let mut fs = blank("sp3", 3, &[3, 7, 10, 11, 14, 18, 21], 21);
        fs.formal_dimension = Some(21);
        fs.trivial_cups = vec![(7, 7)];
        fs.cohomology_algebras =
            vec![exterior_algebra(Field::Rational, &[3, 7, 11]).unwrap()];
        fs
    }

    pub fn g2_facts() -> FactSet {
        let mut fs = blank("g2", 3, &[3, 5, 6, 8, 9, 11, 14], 14);
        fs.formal_dimension = Some(14);
        let f2 = Field::prime(2).unwrap();
        fs.cohomology_algebras = vec![tensor(
            &truncated_polynomial_algebra(f2, &[(3, 4)]).unwrap(),
            &exterior_algebra(f2, &[5]).unwrap(),
        )
        .unwrap()];
        fs
    }

    pub fn sp2_facts() -> FactSet {
        let mut fs = blank("sp2", 3, &[3, 7, 10], 10);
        fs.formal_dimension = Some(10);
        fs.cohomology_algebras = vec![exterior_algebra(Field::Rational, &[3, 7]).unwrap()];
        fs.known_cat = Some(3);
        fs
    }

    fn lower_values(env: &Envelope) -> Vec<SeqValue> {
        (1..=env.cap()).map(|k| env.lower_at(k)).collect()
    }

    #[test]
    fn sp3_reproduction() {
        let problems = vec![sp3_facts()];
        let Outcome::Success { envelopes, cat, trace, .. } =
            run_fixpoint(&problems, "sp3", 8).unwrap()
        else {
            panic!("expected success");
        };
        let env = &envelopes["sp3"];
        use SeqValue::*;
        assert_eq!(
            lower_values(env),
            vec![
                Finite(3),
                Finite(7),
                Finite(10),
                Finite(18),
                Finite(21),
                Infinite,
                Infinite,
                Infinite
            ]
        );
        assert_eq!(cat, CatBounds { lower: 3, upper: Some(5) });
        // the headline derivation steps all appear in the trace
        let has = |rule: &str, index: u64, new: &str| {
            trace
                .steps
                .iter()
                .any(|s| s.rule == rule && s.index == index && s.new == new)
        };
        assert!(has("R4-nonvanishing", 2, "7"));
        assert!(has("R5-trivial-cup", 4, "15"));
        assert!(has("R4-nonvanishing", 4, "18"));
        assert!(has("R3-superadditive", 5, "21"));
        assert!(has("R6-dimension-kill", 6, "inf"));
    }

    #[test]
    fn g2_reproduction_exact_everywhere() {
        let problems = vec![g2_facts()];
        let Outcome::Success { envelopes, cat, .. } = run_fixpoint(&problems, "g2", 6).unwrap()
        else {
            panic!("expected success");
        };
        let env = &envelopes["g2"];
        assert_eq!(env.exact_prefix().finite_values(), &[0, 3, 6, 9, 14]);
        assert_eq!(env.exact_indices(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(cat, CatBounds { lower: 4, upper: Some(4) });
    }

    #[test]
    fn sp2_reproduction_exact_everywhere() {
        let problems = vec![sp2_facts()];
        let Outcome::Success { envelopes, cat, .. } = run_fixpoint(&problems, "sp2", 6).unwrap()
        else {
            panic!("expected success");
        };
        let env = &envelopes["sp2"];
        assert_eq!(env.exact_prefix().finite_values(), &[0, 3, 7, 10]);
        assert_eq!(cat, CatBounds { lower: 3, upper: Some(3) });
    }

    #[test]
    fn contradiction_is_structured() {
        let mut fs = blank("broken", 3, &[3], 10);
        fs.formal_dimension = Some(10);
        fs.cohomology_algebras = vec![exterior_algebra(Field::Rational, &[3, 7]).unwrap()];
        let Outcome::Contradiction { contradiction, .. } =
            run_fixpoint(&[fs], "broken", 6).unwrap()
        else {
            panic!("expected contradiction");
        };
        assert_eq!(contradiction.index, 2);
    }

    #[test]
    fn order_independence() {
        let mut reversed: Vec<RuleId> = RULE_ORDER.to_vec();
        reversed.reverse();
        for facts in [sp3_facts(), g2_facts(), sp2_facts()] {
            let name = facts.name.clone();
            let problems = vec![facts];
            let a = run_fixpoint(&problems, &name, 8).unwrap();
            let b = run_fixpoint_with_order(&problems, &name, 8, &reversed).unwrap();
            match (a, b) {
                (
                    Outcome::Success { envelopes: ea, .. },
                    Outcome::Success { envelopes: eb, .. },
                ) => assert_eq!(ea, eb),
                _ => panic!("expected success on both orders"),
            }
        }
    }

    #[test]
    fn replay_reproduces_envelopes() {
        let problems = vec![sp3_facts()];
        let Outcome::Success { envelopes, trace, .. } =
            run_fixpoint(&problems, "sp3", 8).unwrap()
        else {
            panic!("expected success");
        };
        let replayed = replay_trace(&problems, 8, &trace).unwrap();
        assert_eq!(replayed, envelopes);

        // tampering with a step breaks the replay
        let mut bad = trace.clone();
        bad.steps[2].old = "99".into();
        assert!(matches!(
            replay_trace(&problems, 8, &bad),
            Err(InferError::TraceMismatch(_))
        ));

        // the empty trace reproduces fresh envelopes
        let fresh = replay_trace(&problems, 8, &DerivationTrace::default()).unwrap();
        assert_eq!(fresh["sp3"], Envelope::fresh(8));
    }

    #[test]
    fn step_count_stays_within_lattice_bound() {
        for facts in [sp3_facts(), g2_facts(), sp2_facts()] {
            let name = facts.name.clone();
            let d = facts.complete_up_to;
            let cap = 8u64;
            let problems = vec![facts];
            let Outcome::Success { trace, .. } = run_fixpoint(&problems, &name, cap).unwrap()
            else {
                panic!("expected success");
            };
            assert!((trace.steps.len() as u64) <= cap * (d + 2) * 2);
        }
    }

    #[test]
    fn ganea_examples() {
        let b = ganea_bound(1, 3, &[3, 7, 10], &[3, 7, 10], 12).unwrap();
        assert_eq!(b.strict_bound, 4);
        assert_eq!(b.intervals, vec![(3, 5), (7, 9), (10, 12)]);

        assert_eq!(
            ganea_bound(1, 3, &[3], &[3, 7], 5),
            Err(GaneaError::HypothesisFails { degree: 7 })
        );
        assert_eq!(
            ganea_bound(1, 3, &[3, 7], &[3, 7], 5),
            Err(GaneaError::IncompleteData { have: 5, need: 9 })
        );
        // classical dimension / connectivity bound as the k = 1 special case
        let c = ganea_bound(1, 3, &[3, 6, 9], &[3, 5, 6, 8, 9, 10], 11).unwrap();
        assert_eq!(c.strict_bound, 4);
    }

    #[test]
    fn relations_propagate_between_problems() {
        // y has a forced lower bound; x is a retract of y, so x inherits it
        let mut x = blank("x", 3, &[3, 7, 10, 14], 14);
        x.relations =
            vec![Relation { kind: RelationKind::RetractOf, peers: vec!["y".into()] }];
        let mut y = blank("y", 3, &[3, 7, 10, 14], 14);
        y.formal_dimension = Some(14);
        y.cohomology_algebras = vec![exterior_algebra(Field::Rational, &[3, 7]).unwrap()];
        let Outcome::Success { envelopes, .. } =
            run_fixpoint(&[x, y], "x", 4).unwrap()
        else {
            panic!("expected success");
        };
        // lower bounds flow from y to x; upper bounds from x (trivial here) do not hurt y
        assert_eq!(envelopes["x"].lower_at(2), envelopes["y"].lower_at(2));
    }

    #[test]
    fn loop_section_pulls_upper_from_fiber() {
        let mut fiber = blank("fiber", 2, &[2, 4, 6], 6);
        fiber.formal_dimension = Some(6);
        fiber.cohomology_algebras =
            vec![truncated_polynomial_algebra(Field::Rational, &[(2, 4)]).unwrap()];
        let mut total = blank("total", 2, &[2, 4, 6], 10);
        total.relations =
            vec![Relation { kind: RelationKind::LoopSection, peers: vec!["fiber".into()] }];
        let Outcome::Success { envelopes, .. } =
            run_fixpoint(&[fiber, total], "total", 4).unwrap()
        else {
            panic!("expected success");
        };
        assert_eq!(envelopes["total"].upper_at(2), SeqValue::Finite(4));
    }

    #[test]
    fn fibration_rule_uses_floor_indices() {
        let mut base = blank("base", 4, &[4, 8], 8);
        base.formal_dimension = Some(8);
        let mut total = blank("total", 2, &[2, 4, 6, 8, 10, 12], 20);
        total.relations = vec![Relation {
            kind: RelationKind::FibrationTotal { a: 1, b: 0 },
            peers: vec!["fiber".into(), "base".into()],
        }];
        let fiber = blank("fiber", 2, &[2, 4], 8);
        let Outcome::Success { envelopes, .. } =
            run_fixpoint(&[base, total, fiber], "total", 6).unwrap()
        else {
            panic!("expected success");
        };
        // sigma_E(4) >= sigma_B(2) >= 8 via floor(4 / (1+1)) = 2
        assert!(envelopes["total"].lower_at(4).lower_bound().unwrap() >= 8);
    }
}
