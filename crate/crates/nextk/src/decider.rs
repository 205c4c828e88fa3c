//! Top-level deciders.
//!
//! Whether `K + f` is a union-splitting is settled by two dovetailed
//! enumerations. The positive side walks finite sets of rooted cycle-free
//! frames and accepts a set when every member refutes `f` and `f` is a
//! theorem of the set's logic — then the two logics coincide. The negative
//! side walks single frames and accepts one that refutes `f` even though all
//! of its rooted cycle-free generated subframes validate `f`; such a frame
//! separates `K + f` from every logic axiomatized by rooted cycle-free
//! frames. One side must eventually accept, so with exhausted budgets the
//! only honest answer is `unknown` plus a cursor to resume from.

use serde::{Deserialize, Serialize};

use crate::algebra::DualAlgebra;
use crate::formula::Formula;
use crate::frame::{enumerate_frames, frame_classes, Frame, FrameFilter};
use crate::jankov::{jankov_logic_equal, JankovAxiomSet};
use crate::prover::{
    member_of_jankov_logic, Budget, Effort, Outcome, ProofCertificate, Verdict, Witness,
};

/// Absolute positions in the two enumerations, for resuming an exhausted run
/// with a larger budget instead of restarting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    pub pos_examined: u64,
    pub neg_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionSplittingResult {
    pub verdict: Verdict,
    /// On yes: the accepted axiom set; the logic of these frames is `K + f`.
    pub axiomatization: Option<JankovAxiomSet>,
    /// On yes: the membership certificate showing `f` is a theorem of the
    /// axiomatization's logic.
    pub certificate: Option<ProofCertificate>,
    /// On no: a frame refuting `f` whose rooted cycle-free generated
    /// subframes all validate `f`.
    pub counterexample: Option<Frame>,
    pub cursor: Cursor,
}

/// Lexicographic-by-index subsets of a size-annotated pool with a fixed
/// size-sum and a fixed cardinality.
struct SubsetsWithSum {
    sizes: Vec<usize>,
    target: usize,
    count: usize,
    chosen: Vec<usize>,
    cursor: usize,
    current_sum: usize,
    done: bool,
}

impl SubsetsWithSum {
    fn new(sizes: Vec<usize>, target: usize, count: usize) -> SubsetsWithSum {
        SubsetsWithSum {
            sizes,
            target,
            count,
            chosen: Vec::new(),
            cursor: 0,
            current_sum: 0,
            done: false,
        }
    }

    fn backtrack(&mut self) {
        match self.chosen.pop() {
            None => self.done = true,
            Some(i) => {
                self.current_sum -= self.sizes[i];
                self.cursor = i + 1;
            }
        }
    }

    fn next(&mut self) -> Option<Vec<usize>> {
        while !self.done {
            if self.chosen.len() == self.count {
                let hit = (self.current_sum == self.target).then(|| self.chosen.clone());
                self.backtrack();
                if hit.is_some() {
                    return hit;
                }
                continue;
            }
            if self.cursor >= self.sizes.len() {
                self.backtrack();
                continue;
            }
            let s = self.sizes[self.cursor];
            if self.current_sum + s <= self.target {
                self.chosen.push(self.cursor);
                self.current_sum += s;
            }
            self.cursor += 1;
        }
        None
    }
}

/// Fair enumeration of finite sets of rooted cycle-free frames: ascending
/// total point count, then ascending set cardinality, then lexicographic on
/// the canonical encodings. Starts with the empty set.
struct AxiomSetEnumerator {
    max_frame_size: usize,
    pool: Vec<Frame>,
    pool_sizes: Vec<usize>,
    pool_loaded_size: usize,
    total: usize,
    count: usize,
    subsets: SubsetsWithSum,
    exhausted: bool,
}

impl AxiomSetEnumerator {
    fn new(max_frame_size: usize) -> AxiomSetEnumerator {
        AxiomSetEnumerator {
            max_frame_size: max_frame_size.max(1),
            pool: Vec::new(),
            pool_sizes: Vec::new(),
            pool_loaded_size: 0,
            total: 0,
            count: 0,
            subsets: SubsetsWithSum::new(Vec::new(), 0, 0),
            exhausted: false,
        }
    }

    fn ensure_pool(&mut self, up_to: usize) {
        while self.pool_loaded_size < up_to.min(self.max_frame_size) {
            let size = self.pool_loaded_size + 1;
            for f in frame_classes(size).iter() {
                if f.is_rooted() && f.is_cycle_free() {
                    self.pool.push(f.clone());
                    self.pool_sizes.push(size);
                }
            }
            self.pool_loaded_size = size;
        }
    }

    fn next(&mut self) -> Option<Vec<Frame>> {
        loop {
            if self.exhausted {
                return None;
            }
            if let Some(indices) = self.subsets.next() {
                return Some(indices.into_iter().map(|i| self.pool[i].clone()).collect());
            }
            // Advance (total, count).
            if self.count < self.total.min(self.pool.len()) {
                self.count += 1;
            } else {
                self.total += 1;
                self.ensure_pool(self.total);
                if self.total > self.pool_sizes.iter().sum::<usize>() {
                    self.exhausted = true;
                    return None;
                }
                self.count = 1;
            }
            self.subsets = SubsetsWithSum::new(self.pool_sizes.clone(), self.total, self.count);
        }
    }
}

fn refutes(frame: &Frame, f: &Formula) -> bool {
    !DualAlgebra::new(frame.clone()).validates(f)
}

/// The negative acceptance test: `c` refutes `f` while every rooted
/// cycle-free generated subframe of `c` validates `f`.
pub fn neg_witness_replays(c: &Frame, f: &Formula) -> bool {
    refutes(c, f)
        && c.rooted_cycle_free_generated_subframes()
            .iter()
            .all(|g| !refutes(g, f))
}

pub fn is_union_splitting(f: &Formula, budget: &Budget) -> UnionSplittingResult {
    is_union_splitting_from(f, budget, Cursor::default())
}

/// Resume the dovetailed search from a cursor produced by an earlier
/// exhausted run. The enumerations are deterministic, so skipping the
/// already-examined prefix is sound.
pub fn is_union_splitting_from(
    f: &Formula,
    budget: &Budget,
    start: Cursor,
) -> UnionSplittingResult {
    let mut pos = AxiomSetEnumerator::new(budget.max_frame_size);
    for _ in 0..start.pos_examined {
        if pos.next().is_none() {
            break;
        }
    }
    let mut neg = enumerate_frames(budget.max_frame_size, FrameFilter::Any)
        .skip(start.neg_examined as usize);

    let mut cursor = start;
    let mut effort = Effort::default();
    let mut pos_done = false;
    let mut neg_done = false;
    loop {
        if !pos_done && effort.pos_candidates < budget.max_candidates {
            match pos.next() {
                None => pos_done = true,
                Some(frames) => {
                    cursor.pos_examined += 1;
                    effort.pos_candidates += 1;
                    // Each axiom must refute f (so each axiom formula is a
                    // theorem of K + f); only then is the membership check
                    // worth running.
                    if frames.iter().all(|a| refutes(a, f)) {
                        let set = JankovAxiomSet::from_frames(frames)
                            .expect("pool frames are rooted and cycle-free");
                        let member = member_of_jankov_logic(&set, f, budget);
                        if member.is_yes() {
                            let certificate = match member.witness {
                                Some(Witness::Certificate(c)) => Some(c),
                                _ => None,
                            };
                            return UnionSplittingResult {
                                verdict: Verdict::yes(
                                    Witness::Axioms {
                                        frames: set.clone(),
                                    },
                                    effort,
                                ),
                                axiomatization: Some(set),
                                certificate,
                                counterexample: None,
                                cursor,
                            };
                        }
                    }
                }
            }
        } else {
            pos_done = true;
        }

        if !neg_done && effort.neg_candidates < budget.max_candidates {
            match neg.next() {
                None => neg_done = true,
                Some(c) => {
                    cursor.neg_examined += 1;
                    effort.neg_candidates += 1;
                    if neg_witness_replays(&c, f) {
                        return UnionSplittingResult {
                            verdict: Verdict::no(
                                Witness::Countermodel { frame: c.clone() },
                                effort,
                            ),
                            axiomatization: None,
                            certificate: None,
                            counterexample: Some(c),
                            cursor,
                        };
                    }
                }
            }
        } else {
            neg_done = true;
        }

        if pos_done && neg_done {
            return UnionSplittingResult {
                verdict: Verdict::unknown(effort),
                axiomatization: None,
                certificate: None,
                counterexample: None,
                cursor,
            };
        }
    }
}

/// Splitting test: a union-splitting axiomatized by a single frame of size
/// bounded by the largest frame in the computed axiomatization.
pub fn is_splitting(f: &Formula, budget: &Budget) -> Verdict {
    let us = is_union_splitting(f, budget);
    let effort = us.verdict.effort;
    match us.verdict.outcome {
        Outcome::Unknown => Verdict::unknown(effort),
        Outcome::No => Verdict::no(
            Witness::Countermodel {
                frame: us.counterexample.expect("no-verdicts carry a counterexample"),
            },
            effort,
        ),
        Outcome::Yes => {
            let set = us
                .axiomatization
                .expect("yes-verdicts carry an axiomatization");
            if set.is_empty() {
                // The logic is the base logic, the lattice bottom, which
                // splits nothing.
                return Verdict::no(Witness::Axioms { frames: set }, effort);
            }
            let bound = set.frames().map(Frame::size).max().unwrap();
            for b in enumerate_frames(bound, FrameFilter::RootedCycleFree) {
                let singleton =
                    JankovAxiomSet::from_frames([b]).expect("enumerated frames satisfy the filter");
                if jankov_logic_equal(&singleton, &set) {
                    return Verdict::yes(Witness::Axioms { frames: singleton }, effort);
                }
            }
            Verdict::no(Witness::Axioms { frames: set }, effort)
        }
    }
}

fn co_atom_frames() -> [Frame; 2] {
    [
        Frame::new(1, &[(0, 0)]).expect("static frame"),
        Frame::new(1, &[]).expect("static frame"),
    ]
}

/// `K + f` is consistent iff one of the two one-point algebras validates
/// `f`: the lattice of normal modal logics has exactly two co-atoms, the
/// logics of the reflexive point and of the irreflexive point.
pub fn is_consistent(f: &Formula) -> bool {
    co_atom_frames()
        .iter()
        .any(|frame| DualAlgebra::new(frame.clone()).validates(f))
}

/// What deciding "K + psi = K + f" takes, as a function of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomatizationProblem {
    /// `K + f` is inconsistent: equality means `psi` is inconsistent too.
    InconsistentLogic,
    /// `K + f` has a finite rooted cycle-free axiomatization: equality is
    /// decided by membership plus refutation on the axiom frames.
    UnionSplitting { axioms: JankovAxiomSet },
    /// Neither of the above: no decision procedure exists.
    Undecidable { counterexample: Frame },
    /// The union-splitting search exhausted its budget.
    Unknown { cursor: Cursor, effort: Effort },
}

pub fn axiomatization_problem(f: &Formula, budget: &Budget) -> AxiomatizationProblem {
    if !is_consistent(f) {
        return AxiomatizationProblem::InconsistentLogic;
    }
    let us = is_union_splitting(f, budget);
    match us.verdict.outcome {
        Outcome::Yes => AxiomatizationProblem::UnionSplitting {
            axioms: us.axiomatization.expect("yes-verdicts carry an axiomatization"),
        },
        Outcome::No => AxiomatizationProblem::Undecidable {
            counterexample: us.counterexample.expect("no-verdicts carry a counterexample"),
        },
        Outcome::Unknown => AxiomatizationProblem::Unknown {
            cursor: us.cursor,
            effort: us.verdict.effort,
        },
    }
}

impl AxiomatizationProblem {
    /// The decision function, when one exists: does `K + psi` equal the
    /// logic this problem was built for?
    pub fn decide(&self, psi: &Formula, budget: &Budget) -> Option<Verdict> {
        match self {
            AxiomatizationProblem::InconsistentLogic => {
                if is_consistent(psi) {
                    let separating = co_atom_frames()
                        .into_iter()
                        .find(|frame| DualAlgebra::new(frame.clone()).validates(psi))
                        .expect("consistency just produced a validating co-atom");
                    Some(Verdict::no(
                        Witness::Countermodel { frame: separating },
                        Effort::default(),
                    ))
                } else {
                    Some(Verdict::yes(Witness::Inconsistency, Effort::default()))
                }
            }
            AxiomatizationProblem::UnionSplitting { axioms } => {
                // Equality needs every axiom to be a theorem of K + psi —
                // equivalently each axiom frame refutes psi — and psi to be
                // a theorem of the axioms' logic.
                if let Some(validating) = axioms
                    .frames()
                    .find(|a| DualAlgebra::new((*a).clone()).validates(psi))
                {
                    return Some(Verdict::no(
                        Witness::Countermodel {
                            frame: validating.clone(),
                        },
                        Effort::default(),
                    ));
                }
                Some(member_of_jankov_logic(axioms, psi, budget))
            }
            AxiomatizationProblem::Undecidable { .. } | AxiomatizationProblem::Unknown { .. } => {
                None
            }
        }
    }
}

/// Decidable-formula status: settled by consistency or the union-splitting
/// verdict.
pub fn is_decidable_formula(f: &Formula, budget: &Budget) -> Verdict {
    if !is_consistent(f) {
        return Verdict::yes(Witness::Inconsistency, Effort::default());
    }
    let us = is_union_splitting(f, budget);
    match us.verdict.outcome {
        Outcome::Yes => Verdict::yes(
            Witness::Axioms {
                frames: us.axiomatization.expect("yes-verdicts carry an axiomatization"),
            },
            us.verdict.effort,
        ),
        Outcome::No => Verdict::no(
            Witness::Countermodel {
                frame: us.counterexample.expect("no-verdicts carry a counterexample"),
            },
            us.verdict.effort,
        ),
        Outcome::Unknown => Verdict::unknown(us.verdict.effort),
    }
}

/// The three equivalent statuses of a formula, which coincide whenever the
/// underlying search resolves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub consistent: bool,
    pub outcome: Outcome,
    pub axiomatization_problem_decidable: Option<bool>,
    pub decidable_formula: Option<bool>,
    pub union_splitting_or_inconsistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub effort: Effort,
}

pub fn equivalence_report(f: &Formula, budget: &Budget) -> EquivalenceReport {
    if !is_consistent(f) {
        return EquivalenceReport {
            consistent: false,
            outcome: Outcome::Yes,
            axiomatization_problem_decidable: Some(true),
            decidable_formula: Some(true),
            union_splitting_or_inconsistent: Some(true),
            witness: Some(Witness::Inconsistency),
            effort: Effort::default(),
        };
    }
    let us = is_union_splitting(f, budget);
    let status = match us.verdict.outcome {
        Outcome::Yes => Some(true),
        Outcome::No => Some(false),
        Outcome::Unknown => None,
    };
    EquivalenceReport {
        consistent: true,
        outcome: us.verdict.outcome,
        axiomatization_problem_decidable: status,
        decidable_formula: status,
        union_splitting_or_inconsistent: status,
        witness: us.verdict.witness,
        effort: us.verdict.effort,
    }
}
