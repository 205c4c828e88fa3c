//! Axioms associated with finite rooted cycle-free frames. The axiom of a
//! frame encodes the diagram of its dual algebra: a variable per carrier
//! element (indexed by the element's bit pattern), clauses forcing the
//! variables to behave like the join, complement, and diamond tables, and a
//! conclusion listing every non-top element under a bounded box prefix.
//!
//! The dual algebra always refutes its own axiom, and an arbitrary frame
//! refutes it exactly when the source algebra embeds into a subdirectly
//! irreducible homomorphic image — which is what `refutes` checks, without
//! ever evaluating the axiom formula itself.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{embeds_into_si_image, DualAlgebra, Valuation};
use crate::formula::Formula;
use crate::frame::Frame;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JankovError {
    #[error("axiom frames must be rooted")]
    NotRooted,
    #[error("axiom frames must be cycle-free")]
    NotCycleFree,
}

/// A rooted cycle-free frame together with its axiom formula and the height
/// bound `n` (the dual algebra validates `[]^{n+1} F`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JankovAxiom {
    frame: Frame,
    formula: Formula,
    height: u32,
}

impl JankovAxiom {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn height(&self) -> u32 {
        self.height
    }
}

/// Build the axiom of a rooted cycle-free frame.
pub fn jankov_formula(frame: &Frame) -> Result<JankovAxiom, JankovError> {
    if !frame.is_rooted() {
        return Err(JankovError::NotRooted);
    }
    let alg = DualAlgebra::new(frame.clone());
    let least_box_power = alg.finite_height().ok_or(JankovError::NotCycleFree)?;
    // finite_height is the least m with box^m 0 = 1; the height bound n
    // satisfies box^{n+1} 0 = 1, so n = m - 1.
    let n = least_box_power - 1;

    let top = alg.top();
    let var_of = |element: u64| Formula::var(element as u32);

    let mut diagram = Vec::new();
    for a in 0..=top {
        for b in 0..=top {
            diagram.push(Formula::iff(
                var_of(a | b),
                Formula::or(var_of(a), var_of(b)),
            ));
        }
    }
    for a in 0..=top {
        diagram.push(Formula::iff(
            var_of(alg.complement(a)),
            Formula::not(var_of(a)),
        ));
    }
    for a in 0..=top {
        diagram.push(Formula::iff(
            Formula::diamond(var_of(a)),
            var_of(alg.diamond(a)),
        ));
    }

    let antecedent = Formula::and(
        Formula::box_n(n + 1, Formula::Bot),
        Formula::box_leq(n, Formula::big_and(diagram)),
    );
    let conclusion = Formula::big_or((0..top).map(|a| Formula::box_leq(n, var_of(a))));
    let formula = Formula::imp(antecedent, conclusion);

    // The identity valuation sends the antecedent to 1 and the conclusion
    // below the opremum, so the frame's own algebra refutes the axiom.
    let identity: Valuation = (0..=top).map(|a| (a as u32, a)).collect();
    let value = alg
        .evaluate(&formula, &identity)
        .expect("identity valuation covers the diagram variables");
    debug_assert_ne!(value, alg.top(), "axiom not refuted by its own algebra");

    Ok(JankovAxiom {
        frame: frame.clone(),
        formula,
        height: n,
    })
}

/// Whether `b` refutes the axiom of `a`: some rooted generated subframe of
/// `b` maps onto `a`. `a` must be rooted and cycle-free.
pub fn refutes_jankov(b: &Frame, a: &Frame) -> Result<bool, JankovError> {
    if !a.is_rooted() {
        return Err(JankovError::NotRooted);
    }
    if !a.is_cycle_free() {
        return Err(JankovError::NotCycleFree);
    }
    Ok(embeds_into_si_image(a, b).expect("rootedness checked above"))
}

/// A finite axiom set, deduplicated up to isomorphism and kept in canonical
/// order; the empty set stands for the base logic with no extra axioms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JankovAxiomSet {
    axioms: Vec<JankovAxiom>,
}

impl JankovAxiomSet {
    pub fn empty() -> JankovAxiomSet {
        JankovAxiomSet::default()
    }

    /// Canonicalize, deduplicate, sort, and build the axiom of each frame.
    pub fn from_frames<I>(frames: I) -> Result<JankovAxiomSet, JankovError>
    where
        I: IntoIterator<Item = Frame>,
    {
        let mut canon: Vec<Frame> = frames.into_iter().map(|f| f.canonical_form()).collect();
        canon.sort_by_key(Frame::order_key);
        canon.dedup();
        let axioms = canon
            .into_iter()
            .map(|f| jankov_formula(&f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(JankovAxiomSet { axioms })
    }

    pub fn axioms(&self) -> &[JankovAxiom] {
        &self.axioms
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> {
        self.axioms.iter().map(JankovAxiom::frame)
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.axioms.iter().map(|a| a.formula.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}

/// Whether the axiom of `b` is a theorem of the logic axiomatized by `s`:
/// exactly when `b` refutes some axiom of `s`, by the splitting-pair
/// property of the individual axioms.
pub fn jankov_member(b: &Frame, s: &JankovAxiomSet) -> Result<bool, JankovError> {
    if !b.is_rooted() {
        return Err(JankovError::NotRooted);
    }
    if !b.is_cycle_free() {
        return Err(JankovError::NotCycleFree);
    }
    for axiom in s.axioms() {
        if refutes_jankov(b, axiom.frame())? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `b` validates the logic axiomatized by `s`, decided structurally:
/// `b` refutes none of the axioms. Equivalent to evaluating every axiom
/// formula on the dual algebra of `b`, but without touching the formulas,
/// whose variable count is exponential in the axiom frame.
pub fn frame_validates_logic(b: &Frame, s: &JankovAxiomSet) -> bool {
    s.axioms()
        .iter()
        .all(|ax| !refutes_jankov(b, ax.frame()).expect("axiom frames are rooted and cycle-free"))
}

/// Whether two axiom sets axiomatize the same logic: each side's axioms are
/// theorems of the other side's logic.
pub fn jankov_logic_equal(s: &JankovAxiomSet, t: &JankovAxiomSet) -> bool {
    s.frames()
        .all(|a| jankov_member(a, t).expect("axiom frames are rooted and cycle-free"))
        && t.frames()
            .all(|b| jankov_member(b, s).expect("axiom frames are rooted and cycle-free"))
}

impl Serialize for JankovAxiomSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let frames: Vec<&Frame> = self.frames().collect();
        frames.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JankovAxiomSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<JankovAxiomSet, D::Error> {
        let frames = Vec::<Frame>::deserialize(deserializer)?;
        JankovAxiomSet::from_frames(frames).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{enumerate_frames, FrameFilter};

    fn irreflexive_point() -> Frame {
        Frame::new(1, &[]).unwrap()
    }

    fn reflexive_point() -> Frame {
        Frame::new(1, &[(0, 0)]).unwrap()
    }

    fn two_chain() -> Frame {
        Frame::new(2, &[(0, 1)]).unwrap()
    }

    fn fixture() -> Frame {
        Frame::new(2, &[(0, 0), (0, 1)]).unwrap()
    }

    fn set(frames: &[Frame]) -> JankovAxiomSet {
        JankovAxiomSet::from_frames(frames.iter().cloned()).unwrap()
    }

    #[test]
    fn axiom_of_the_dead_end_unfolds_the_definition() {
        let axiom = jankov_formula(&irreflexive_point()).unwrap();
        assert_eq!(axiom.height(), 0);

        // Shape: ([]F & diagram) -> p0, with an eight-clause diagram over
        // the two-element carrier (four joins, two complements, two
        // diamonds) and no box prefix since n = 0.
        let Formula::Imp(antecedent, conclusion) = axiom.formula() else {
            panic!("axiom is not an implication");
        };
        assert_eq!(**conclusion, Formula::var(0));
        let Formula::And(first, diagram) = &**antecedent else {
            panic!("antecedent is not a conjunction");
        };
        assert_eq!(**first, Formula::boxed(Formula::Bot));
        let mut clause_count = 1;
        let mut rest: &Formula = diagram;
        while let Formula::And(_, tail) = rest {
            clause_count += 1;
            rest = tail;
        }
        assert_eq!(clause_count, 8);

        assert_eq!(axiom.formula().modal_depth(), 1);
        assert_eq!(axiom.formula().vars().len(), 2);

        // The dual algebra refutes it under the identity valuation, hence
        // refutes it outright.
        let alg = DualAlgebra::new(irreflexive_point());
        let identity: Valuation = (0..=alg.top()).map(|a| (a as u32, a)).collect();
        assert_ne!(alg.evaluate(axiom.formula(), &identity).unwrap(), alg.top());
        assert!(!alg.validates(axiom.formula()));
    }

    #[test]
    fn axiom_of_the_two_chain() {
        let axiom = jankov_formula(&two_chain()).unwrap();
        assert_eq!(axiom.height(), 1);
        assert_eq!(axiom.formula().modal_depth(), 2);
        assert_eq!(axiom.formula().vars().len(), 4);
        assert!(!DualAlgebra::new(two_chain()).validates(axiom.formula()));
    }

    #[test]
    fn axiom_preconditions() {
        assert_eq!(
            jankov_formula(&reflexive_point()),
            Err(JankovError::NotCycleFree)
        );
        let not_rooted = Frame::new(2, &[]).unwrap();
        assert_eq!(jankov_formula(&not_rooted), Err(JankovError::NotRooted));
    }

    #[test]
    fn refutation_examples() {
        assert_eq!(refutes_jankov(&fixture(), &irreflexive_point()), Ok(true));
        assert_eq!(
            refutes_jankov(&reflexive_point(), &irreflexive_point()),
            Ok(false)
        );
        let a = two_chain();
        assert_eq!(refutes_jankov(&a, &a), Ok(true));
        assert_eq!(
            refutes_jankov(&fixture(), &reflexive_point()),
            Err(JankovError::NotCycleFree)
        );
    }

    #[test]
    fn membership_examples() {
        let dead_end_set = set(&[irreflexive_point()]);
        assert_eq!(jankov_member(&irreflexive_point(), &dead_end_set), Ok(true));
        assert_eq!(jankov_member(&two_chain(), &dead_end_set), Ok(true));
        assert_eq!(
            jankov_member(&two_chain(), &JankovAxiomSet::empty()),
            Ok(false)
        );
        assert_eq!(
            jankov_member(&reflexive_point(), &dead_end_set),
            Err(JankovError::NotCycleFree)
        );
    }

    #[test]
    fn logic_equality_examples() {
        let s = set(&[irreflexive_point()]);
        let t = set(&[two_chain()]);
        assert!(jankov_logic_equal(&s, &s));
        // The point does not refute the chain's axiom: no surjection from a
        // one-point frame onto two points.
        assert!(!jankov_logic_equal(&s, &t));
        assert!(jankov_logic_equal(
            &JankovAxiomSet::empty(),
            &JankovAxiomSet::empty()
        ));
    }

    #[test]
    fn membership_is_monotone_in_the_axiom_set() {
        let frames: Vec<Frame> = enumerate_frames(3, FrameFilter::RootedCycleFree).collect();
        let small = set(&frames[..1]);
        let large = set(&frames);
        for b in enumerate_frames(3, FrameFilter::RootedCycleFree) {
            if jankov_member(&b, &small).unwrap() {
                assert!(jankov_member(&b, &large).unwrap());
            }
        }
    }

    #[test]
    fn logic_equality_is_an_equivalence_on_small_sets() {
        let frames: Vec<Frame> = enumerate_frames(2, FrameFilter::RootedCycleFree).collect();
        let sets: Vec<JankovAxiomSet> = vec![
            JankovAxiomSet::empty(),
            set(&frames[..1]),
            set(&frames[1..]),
            set(&frames),
        ];
        for s in &sets {
            assert!(jankov_logic_equal(s, s));
            for t in &sets {
                assert_eq!(jankov_logic_equal(s, t), jankov_logic_equal(t, s));
                for u in &sets {
                    if jankov_logic_equal(s, t) && jankov_logic_equal(t, u) {
                        assert!(jankov_logic_equal(s, u));
                    }
                }
            }
        }
    }

    /// The module's master oracle at unit scale: structural refutation agrees
    /// with direct semantic evaluation of the axiom. The acceptance suite
    /// widens this to frames of three points.
    #[test]
    fn structural_refutation_matches_semantic_refutation() {
        let axiom_frames: Vec<Frame> =
            enumerate_frames(2, FrameFilter::RootedCycleFree).collect();
        for b in enumerate_frames(2, FrameFilter::Any) {
            let alg = DualAlgebra::new(b.clone());
            for a in &axiom_frames {
                let axiom = jankov_formula(a).unwrap();
                assert_eq!(
                    refutes_jankov(&b, a).unwrap(),
                    !alg.validates(axiom.formula()),
                    "mismatch for b = {b:?}, a = {a:?}"
                );
            }
        }
    }

    #[test]
    fn self_refutation_for_small_axiom_frames() {
        for a in enumerate_frames(3, FrameFilter::RootedCycleFree) {
            let axiom = jankov_formula(&a).unwrap();
            let alg = DualAlgebra::new(a.clone());
            // The identity valuation refutes the axiom, which is enough to
            // falsify validity without scanning all valuations (three-point
            // frames already have eight diagram variables).
            let identity: Valuation = (0..=alg.top()).map(|e| (e as u32, e)).collect();
            assert_ne!(
                alg.evaluate(axiom.formula(), &identity).unwrap(),
                alg.top(),
                "axiom not self-refuted on {a:?}"
            );
            if a.size() <= 2 {
                assert!(!alg.validates(axiom.formula()));
            }
        }
    }

    #[test]
    fn axiom_sets_serialize_as_frame_lists() {
        let s = set(&[two_chain(), irreflexive_point(), two_chain()]);
        assert_eq!(s.len(), 2);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"[{"size":1,"edges":[]},{"size":2,"edges":[[0,1]]}]"#
        );
        let back: JankovAxiomSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<JankovAxiomSet>(r#"[{"size":1,"edges":[[0,0]]}]"#).is_err());
    }
}
