//! Theoremhood in the base modal logic K, and membership in finitely
//! axiomatized extensions.
//!
//! `is_k_theorem` is a terminating signed tableau: propositional saturation,
//! then one successor world per unsatisfied box demand, recursing with
//! strictly smaller modal depth.
//!
//! Membership `f ∈ K + axioms` is only semi-decidable in general, so
//! `membership_semi` enumerates finite sets of substitution instances of the
//! axioms in a fair staged order and asks the tableau whether a boxed prefix
//! of their conjunction implies `f`. For logics axiomatized by rooted
//! cycle-free frames the complementary search over finite countermodels makes
//! the question total, and `member_of_jankov_logic` dovetails the two sides
//! in strict alternation.

use std::collections::HashSet;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::DualAlgebra;
use crate::formula::{Formula, Substitution};
use crate::frame::{enumerate_frames, Frame, FrameFilter};
use crate::jankov::{frame_validates_logic, JankovAxiomSet};

/// Search bounds. Exhaustion is always reported as an explicit `unknown`,
/// never a silent miss.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Candidates examined per semi-procedure (per side of a dovetail).
    pub max_candidates: u64,
    /// Largest frame size enumerated by countermodel and witness searches.
    pub max_frame_size: usize,
    /// Connective depth of substitution images in the proof search.
    pub max_subst_depth: u32,
    /// Largest box prefix tried when replaying instances against a goal.
    pub max_prefix: u32,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_candidates: 100_000,
            max_frame_size: 5,
            max_subst_depth: 2,
            max_prefix: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

/// A replayable proof witness: `box_leq(prefix, conj(instances)) -> goal`
/// is a K-theorem, and every instance is a substitution instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofCertificate {
    pub prefix: u32,
    pub instances: Vec<Formula>,
}

impl ProofCertificate {
    /// The implication whose K-theoremhood the certificate asserts.
    pub fn obligation(&self, goal: &Formula) -> Formula {
        Formula::imp(
            Formula::box_leq(self.prefix, Formula::big_and(self.instances.iter().cloned())),
            goal.clone(),
        )
    }

    pub fn replays(&self, goal: &Formula) -> bool {
        is_k_theorem(&self.obligation(goal))
    }
}

impl Serialize for ProofCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            prefix: u32,
            instances: Vec<String>,
        }
        Wire {
            prefix: self.prefix,
            instances: self.instances.iter().map(|f| f.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProofCertificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ProofCertificate, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            prefix: u32,
            instances: Vec<String>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let instances = wire
            .instances
            .iter()
            .map(|s| Formula::parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(ProofCertificate {
            prefix: wire.prefix,
            instances,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Certificate(ProofCertificate),
    Countermodel { frame: Frame },
    Axioms { frames: JankovAxiomSet },
    /// Marker for verdicts settled by the inconsistent-logic branch, where
    /// both one-point algebras refute the formula.
    Inconsistency,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effort {
    pub pos_candidates: u64,
    pub neg_candidates: u64,
}

impl Effort {
    pub fn merged(self, other: Effort) -> Effort {
        Effort {
            pos_candidates: self.pos_candidates + other.pos_candidates,
            neg_candidates: self.neg_candidates + other.neg_candidates,
        }
    }
}

/// Outcome of a dovetailed search. A definite outcome always carries its
/// witness; `unknown` only reports the effort spent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub effort: Effort,
}

impl Verdict {
    pub fn yes(witness: Witness, effort: Effort) -> Verdict {
        Verdict {
            outcome: Outcome::Yes,
            witness: Some(witness),
            effort,
        }
    }

    pub fn no(witness: Witness, effort: Effort) -> Verdict {
        Verdict {
            outcome: Outcome::No,
            witness: Some(witness),
            effort,
        }
    }

    pub fn unknown(effort: Effort) -> Verdict {
        Verdict {
            outcome: Outcome::Unknown,
            witness: None,
            effort,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }
}

// ---------------------------------------------------------------------------
// Signed tableau for K.

#[derive(Clone, Default)]
struct Branch {
    pending: Vec<(bool, Formula)>,
    betas: Vec<(bool, Formula)>,
    processed: HashSet<(bool, Formula)>,
    true_vars: HashSet<u32>,
    false_vars: HashSet<u32>,
    /// `a` for each `T []a` and each `F <>a`: contents of every successor.
    box_content: Vec<(bool, Formula)>,
    /// `a` for each `F []a` (falsify in some successor) and `T <>a`
    /// (satisfy in some successor).
    demands: Vec<(bool, Formula)>,
}

fn satisfiable(mut branch: Branch) -> bool {
    while let Some((sign, f)) = branch.pending.pop() {
        if branch.processed.contains(&(sign, f.clone())) {
            continue;
        }
        branch.processed.insert((sign, f.clone()));
        match (sign, f) {
            (true, Formula::Top) | (false, Formula::Bot) => {}
            (true, Formula::Bot) | (false, Formula::Top) => return false,
            (true, Formula::Var(i)) => {
                if branch.false_vars.contains(&i) {
                    return false;
                }
                branch.true_vars.insert(i);
            }
            (false, Formula::Var(i)) => {
                if branch.true_vars.contains(&i) {
                    return false;
                }
                branch.false_vars.insert(i);
            }
            (sign, Formula::Not(a)) => branch.pending.push((!sign, *a)),
            (true, Formula::And(a, b)) => {
                branch.pending.push((true, *a));
                branch.pending.push((true, *b));
            }
            (false, Formula::Or(a, b)) => {
                branch.pending.push((false, *a));
                branch.pending.push((false, *b));
            }
            (false, Formula::Imp(a, b)) => {
                branch.pending.push((true, *a));
                branch.pending.push((false, *b));
            }
            (false, f @ Formula::And(..))
            | (true, f @ Formula::Or(..))
            | (true, f @ Formula::Imp(..))
            | (_, f @ Formula::Iff(..)) => branch.betas.push((sign, f)),
            (true, Formula::Box(a)) => branch.box_content.push((true, *a)),
            (false, Formula::Diamond(a)) => branch.box_content.push((false, *a)),
            (false, Formula::Box(a)) => branch.demands.push((false, *a)),
            (true, Formula::Diamond(a)) => branch.demands.push((true, *a)),
        }
    }

    if let Some((sign, f)) = branch.betas.pop() {
        let alternatives: Vec<Vec<(bool, Formula)>> = match (sign, &f) {
            (false, Formula::And(a, b)) => {
                vec![vec![(false, (**a).clone())], vec![(false, (**b).clone())]]
            }
            (true, Formula::Or(a, b)) => {
                vec![vec![(true, (**a).clone())], vec![(true, (**b).clone())]]
            }
            (true, Formula::Imp(a, b)) => {
                vec![vec![(false, (**a).clone())], vec![(true, (**b).clone())]]
            }
            (true, Formula::Iff(a, b)) => vec![
                vec![(true, (**a).clone()), (true, (**b).clone())],
                vec![(false, (**a).clone()), (false, (**b).clone())],
            ],
            (false, Formula::Iff(a, b)) => vec![
                vec![(true, (**a).clone()), (false, (**b).clone())],
                vec![(false, (**a).clone()), (true, (**b).clone())],
            ],
            _ => unreachable!("only branching formulas are deferred"),
        };
        return alternatives.into_iter().any(|alt| {
            let mut next = branch.clone();
            next.pending.extend(alt);
            satisfiable(next)
        });
    }

    // Propositionally saturated and clash-free: every successor demand must
    // be satisfiable together with the shared box contents. Each recursion
    // strictly decreases modal depth, so the tableau terminates.
    branch.demands.iter().all(|(sign, a)| {
        let mut world = Branch::default();
        world.pending.push((*sign, a.clone()));
        for (s, c) in &branch.box_content {
            world.pending.push((*s, c.clone()));
        }
        satisfiable(world)
    })
}

/// Sound and complete decision procedure for theoremhood in K.
pub fn is_k_theorem(f: &Formula) -> bool {
    let mut root = Branch::default();
    root.pending.push((false, f.clone()));
    !satisfiable(root)
}

// ---------------------------------------------------------------------------
// Staged substitution-instance proof search.

/// Substitution images ordered by connective depth: the depth-0 alphabet is
/// `T`, `F`, and the goal's variables; each further layer applies one more
/// connective over the previous layers.
struct ImagePool {
    images: Vec<Formula>,
    /// images[..layer_ends[d]] is exactly the depth-<=d fragment.
    layer_ends: Vec<usize>,
    max_depth: u32,
}

impl ImagePool {
    fn new(goal_vars: &[u32], max_depth: u32) -> ImagePool {
        let mut images = vec![Formula::Top, Formula::Bot];
        images.extend(goal_vars.iter().map(|&v| Formula::var(v)));
        ImagePool {
            layer_ends: vec![images.len()],
            images,
            max_depth,
        }
    }

    fn complete(&self) -> bool {
        self.layer_ends.len() as u32 > self.max_depth
    }

    /// Extend until `index` is available or the depth cap is reached.
    fn ensure(&mut self, index: usize) {
        while index >= self.images.len() && !self.complete() {
            let prev_end = *self.layer_ends.last().unwrap();
            let before = self.layer_ends.len().checked_sub(2).map(|d| self.layer_ends[d]);
            let lower_end = before.unwrap_or(0);
            let mut layer = Vec::new();
            for a in 0..prev_end {
                let sub = self.images[a].clone();
                layer.push(Formula::not(sub.clone()));
                layer.push(Formula::boxed(sub.clone()));
                layer.push(Formula::diamond(sub));
            }
            // Unary over lower layers was already emitted; drop duplicates.
            layer.drain(..lower_end * 3);
            for a in 0..prev_end {
                for b in 0..prev_end {
                    if a < lower_end && b < lower_end {
                        continue;
                    }
                    let (x, y) = (self.images[a].clone(), self.images[b].clone());
                    layer.push(Formula::and(x.clone(), y.clone()));
                    layer.push(Formula::or(x.clone(), y.clone()));
                    layer.push(Formula::imp(x.clone(), y.clone()));
                    layer.push(Formula::iff(x, y));
                }
            }
            self.images.extend(layer);
            self.layer_ends.push(self.images.len());
        }
    }

    fn len(&self) -> usize {
        self.images.len()
    }

    fn get(&self, index: usize) -> &Formula {
        &self.images[index]
    }
}

/// Digit vectors of a fixed length with a fixed sum and bounded entries, in
/// lexicographic order. Drives the fair enumeration of substitutions.
struct BoundedCompositions {
    sum: usize,
    bound: usize,
    digits: Vec<usize>,
    state: CompositionState,
}

#[derive(PartialEq)]
enum CompositionState {
    Fresh,
    Running,
    Done,
}

impl BoundedCompositions {
    fn new(sum: usize, len: usize, bound: usize) -> BoundedCompositions {
        let state = if sum > bound * len {
            CompositionState::Done
        } else {
            CompositionState::Fresh
        };
        BoundedCompositions {
            sum,
            bound,
            digits: vec![0; len],
            state,
        }
    }

    /// Minimal lexicographic completion of positions `from..` summing to
    /// `remaining`.
    fn fill_minimal(&mut self, from: usize, mut remaining: usize) {
        let len = self.digits.len();
        for j in from..len {
            let capacity_after = self.bound * (len - 1 - j);
            let d = remaining.saturating_sub(capacity_after);
            self.digits[j] = d;
            remaining -= d;
        }
    }

    fn next(&mut self) -> Option<&[usize]> {
        match self.state {
            CompositionState::Done => None,
            CompositionState::Fresh => {
                if self.digits.is_empty() && self.sum != 0 {
                    self.state = CompositionState::Done;
                    return None;
                }
                self.fill_minimal(0, self.sum);
                self.state = CompositionState::Running;
                Some(&self.digits)
            }
            CompositionState::Running => {
                let len = self.digits.len();
                if len == 0 {
                    self.state = CompositionState::Done;
                    return None;
                }
                let mut prefix: usize = self.digits.iter().take(len - 1).sum();
                for i in (0..len - 1).rev() {
                    prefix -= self.digits[i];
                    let candidate = self.digits[i] + 1;
                    let used = prefix + candidate;
                    if candidate <= self.bound && used <= self.sum {
                        let remaining = self.sum - used;
                        if remaining <= self.bound * (len - 1 - i) {
                            self.digits[i] = candidate;
                            self.fill_minimal(i + 1, remaining);
                            return Some(&self.digits);
                        }
                    }
                }
                self.state = CompositionState::Done;
                None
            }
        }
    }
}

const INSTANCE_BATCH: usize = 64;

enum ProofStep {
    Found(ProofCertificate),
    Progress,
    Exhausted,
}

/// Fair enumeration of certificate candidates. Instances accumulate across
/// stages; instances that are themselves K-theorems are pruned since boxed
/// theorems strengthen no antecedent.
struct ProofSearch {
    goal: Formula,
    axioms: Vec<Formula>,
    axiom_vars: Vec<Vec<u32>>,
    pool: ImagePool,
    max_prefix: u32,
    stage_sum: usize,
    axiom_index: usize,
    compositions: Option<BoundedCompositions>,
    instances: Vec<Formula>,
    instance_set: HashSet<Formula>,
    tried_direct: bool,
    exhausted: bool,
}

impl ProofSearch {
    fn new(axioms: Vec<Formula>, goal: Formula, budget: &Budget) -> ProofSearch {
        let goal_vars: Vec<u32> = goal.vars().into_iter().collect();
        let axiom_vars = axioms
            .iter()
            .map(|a| a.vars().into_iter().collect())
            .collect();
        ProofSearch {
            pool: ImagePool::new(&goal_vars, budget.max_subst_depth),
            goal,
            axioms,
            axiom_vars,
            max_prefix: budget.max_prefix,
            stage_sum: 0,
            axiom_index: 0,
            compositions: None,
            instances: Vec::new(),
            instance_set: HashSet::new(),
            tried_direct: false,
            exhausted: false,
        }
    }

    fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    fn digit_bound(&mut self) -> usize {
        self.pool.ensure(self.stage_sum);
        self.pool.len().saturating_sub(1).min(self.stage_sum)
    }

    /// Move to the next (stage, axiom) pair with work to do.
    fn advance_cursor(&mut self) {
        loop {
            self.axiom_index += 1;
            if self.axiom_index >= self.axioms.len() {
                self.axiom_index = 0;
                self.stage_sum += 1;
                // Every digit is bounded by the pool, so once the pool is
                // complete, sums beyond #vars * (len - 1) are unreachable.
                if self.pool.complete() {
                    let max_vars = self.axiom_vars.iter().map(Vec::len).max().unwrap_or(0);
                    if self.stage_sum > max_vars * self.pool.len().saturating_sub(1) {
                        self.exhausted = true;
                        return;
                    }
                }
            }
            let bound = self.digit_bound();
            let vars = self.axiom_vars[self.axiom_index].len();
            self.compositions = Some(BoundedCompositions::new(self.stage_sum, vars, bound));
            return;
        }
    }

    fn step(&mut self) -> ProofStep {
        if self.exhausted {
            return ProofStep::Exhausted;
        }
        if !self.tried_direct {
            self.tried_direct = true;
            if is_k_theorem(&self.goal) {
                return ProofStep::Found(ProofCertificate {
                    prefix: 0,
                    instances: Vec::new(),
                });
            }
            if self.axioms.is_empty() {
                self.exhausted = true;
            }
            return ProofStep::Progress;
        }

        if self.compositions.is_none() {
            let bound = self.digit_bound();
            let vars = self.axiom_vars[self.axiom_index].len();
            self.compositions = Some(BoundedCompositions::new(self.stage_sum, vars, bound));
        }

        let mut grew = false;
        let mut processed = 0;
        while processed < INSTANCE_BATCH {
            let digits = match self.compositions.as_mut().unwrap().next() {
                Some(d) => d.to_vec(),
                None => {
                    self.advance_cursor();
                    if self.exhausted {
                        break;
                    }
                    continue;
                }
            };
            processed += 1;
            let vars = &self.axiom_vars[self.axiom_index];
            let subst: Substitution = vars
                .iter()
                .zip(digits.iter())
                .map(|(&v, &d)| (v, self.pool.get(d).clone()))
                .collect();
            let instance = self.axioms[self.axiom_index].substitute(&subst);
            if self.instance_set.contains(&instance) {
                continue;
            }
            if is_k_theorem(&instance) {
                continue;
            }
            self.instance_set.insert(instance.clone());
            self.instances.push(instance);
            grew = true;
        }

        if grew {
            let conj = Formula::big_and(self.instances.iter().cloned());
            for prefix in 0..=self.max_prefix {
                let obligation = Formula::imp(
                    Formula::box_leq(prefix, conj.clone()),
                    self.goal.clone(),
                );
                if is_k_theorem(&obligation) {
                    return ProofStep::Found(ProofCertificate {
                        prefix,
                        instances: self.instances.clone(),
                    });
                }
            }
        }
        if self.exhausted {
            ProofStep::Exhausted
        } else {
            ProofStep::Progress
        }
    }
}

/// Semi-decision for `goal ∈ K + axioms`: `yes` with a replayable
/// certificate, or `unknown` on exhaustion. Never answers `no`.
pub fn membership_semi(axioms: &[Formula], goal: &Formula, budget: &Budget) -> Verdict {
    let mut search = ProofSearch::new(axioms.to_vec(), goal.clone(), budget);
    let mut effort = Effort::default();
    while effort.pos_candidates < budget.max_candidates && !search.is_exhausted() {
        effort.pos_candidates += 1;
        match search.step() {
            ProofStep::Found(cert) => return Verdict::yes(Witness::Certificate(cert), effort),
            ProofStep::Progress | ProofStep::Exhausted => {}
        }
    }
    Verdict::unknown(effort)
}

/// First frame (canonical order, `size <= max_size`) that validates the
/// logic of `s` structurally yet refutes `goal`; `None` if none exists
/// within the bound.
pub fn find_jankov_countermodel(
    s: &JankovAxiomSet,
    goal: &Formula,
    max_size: usize,
) -> Option<Frame> {
    enumerate_frames(max_size, FrameFilter::Any).find(|b| {
        frame_validates_logic(b, s) && !DualAlgebra::new(b.clone()).validates(goal)
    })
}

/// Total (in principle) membership decision for logics axiomatized by rooted
/// cycle-free frames: the proof search and the countermodel search alternate
/// strictly, one candidate each per round.
pub fn member_of_jankov_logic(s: &JankovAxiomSet, goal: &Formula, budget: &Budget) -> Verdict {
    let mut proof = ProofSearch::new(s.formulas(), goal.clone(), budget);
    let mut frames = enumerate_frames(budget.max_frame_size, FrameFilter::Any);
    let mut frames_done = false;
    let mut effort = Effort::default();
    loop {
        let proof_live = !proof.is_exhausted() && effort.pos_candidates < budget.max_candidates;
        if proof_live {
            effort.pos_candidates += 1;
            if let ProofStep::Found(cert) = proof.step() {
                return Verdict::yes(Witness::Certificate(cert), effort);
            }
        }
        let model_live = !frames_done && effort.neg_candidates < budget.max_candidates;
        if model_live {
            match frames.next() {
                None => frames_done = true,
                Some(b) => {
                    effort.neg_candidates += 1;
                    if frame_validates_logic(&b, s)
                        && !DualAlgebra::new(b.clone()).validates(goal)
                    {
                        return Verdict::no(Witness::Countermodel { frame: b }, effort);
                    }
                }
            }
        }
        let proof_stopped = proof.is_exhausted() || effort.pos_candidates >= budget.max_candidates;
        let model_stopped = frames_done || effort.neg_candidates >= budget.max_candidates;
        if proof_stopped && model_stopped {
            return Verdict::unknown(effort);
        }
    }
}
