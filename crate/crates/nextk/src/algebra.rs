//! The dual powerset modal algebra of a finite frame. Carrier elements are
//! subsets of frame points packed into `u64` bitmasks; the modal operators
//! come from the frame relation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::frame::{exists_surjective_p_morphism, Frame};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("valuation does not cover variable p{0}")]
    UncoveredVariable(u32),
    #[error("frame is not rooted, so its algebra is not subdirectly irreducible")]
    NotRooted,
}

/// Assignment of carrier elements to propositional variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    map: BTreeMap<u32, u64>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn bind(&mut self, var: u32, element: u64) {
        self.map.insert(var, element);
    }

    pub fn get(&self, var: u32) -> Option<u64> {
        self.map.get(&var).copied()
    }
}

impl FromIterator<(u32, u64)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (u32, u64)>>(iter: I) -> Valuation {
        Valuation {
            map: iter.into_iter().collect(),
        }
    }
}

/// The powerset modal algebra of `frame`: 2^size elements, boolean structure
/// by bit operations, diamond from the relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualAlgebra {
    frame: Frame,
}

impl DualAlgebra {
    pub fn new(frame: Frame) -> DualAlgebra {
        DualAlgebra { frame }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn carrier_size(&self) -> usize {
        1usize << self.frame.size()
    }

    pub fn bottom(&self) -> u64 {
        0
    }

    pub fn top(&self) -> u64 {
        if self.frame.size() == 64 {
            u64::MAX
        } else {
            (1u64 << self.frame.size()) - 1
        }
    }

    pub fn complement(&self, a: u64) -> u64 {
        self.top() & !a
    }

    /// `{x : some successor of x lies in a}`.
    pub fn diamond(&self, a: u64) -> u64 {
        let mut out = 0u64;
        for x in 0..self.frame.size() {
            if self.frame.successors(x) & a != 0 {
                out |= 1 << x;
            }
        }
        out
    }

    /// `box a = ~<>~a`.
    pub fn box_op(&self, a: u64) -> u64 {
        self.complement(self.diamond(self.complement(a)))
    }

    /// Evaluate `f` under `v`; every variable of `f` must be covered.
    pub fn evaluate(&self, f: &Formula, v: &Valuation) -> Result<u64, AlgebraError> {
        match f {
            Formula::Var(i) => v.get(*i).ok_or(AlgebraError::UncoveredVariable(*i)),
            Formula::Top => Ok(self.top()),
            Formula::Bot => Ok(self.bottom()),
            Formula::Not(a) => Ok(self.complement(self.evaluate(a, v)?)),
            Formula::And(a, b) => Ok(self.evaluate(a, v)? & self.evaluate(b, v)?),
            Formula::Or(a, b) => Ok(self.evaluate(a, v)? | self.evaluate(b, v)?),
            Formula::Imp(a, b) => {
                Ok(self.complement(self.evaluate(a, v)?) | self.evaluate(b, v)?)
            }
            Formula::Iff(a, b) => {
                let x = self.evaluate(a, v)?;
                let y = self.evaluate(b, v)?;
                Ok(self.complement(x ^ y))
            }
            Formula::Box(a) => Ok(self.box_op(self.evaluate(a, v)?)),
            Formula::Diamond(a) => Ok(self.diamond(self.evaluate(a, v)?)),
        }
    }

    /// True iff `f` evaluates to the top element under every valuation of its
    /// variables. Exhaustive over `(2^size)^#vars` assignments.
    pub fn validates(&self, f: &Formula) -> bool {
        let vars: Vec<u32> = f.vars().into_iter().collect();
        let carrier = self.carrier_size() as u64;
        let mut assignment = vec![0u64; vars.len()];
        loop {
            let v: Valuation = vars
                .iter()
                .copied()
                .zip(assignment.iter().copied())
                .collect();
            let value = self
                .evaluate(f, &v)
                .expect("assignment covers all variables");
            if value != self.top() {
                return false;
            }
            // Odometer over assignments.
            let mut k = 0;
            loop {
                if k == assignment.len() {
                    return true;
                }
                assignment[k] += 1;
                if assignment[k] < carrier {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
        }
    }

    /// Least `n < |carrier|` with `box^n 0 = 1`, if any. Present exactly when
    /// the frame is cycle-free.
    pub fn finite_height(&self) -> Option<u32> {
        let mut cur = self.bottom();
        for n in 0..self.carrier_size() {
            if cur == self.top() {
                return Some(n as u32);
            }
            cur = self.box_op(cur);
        }
        None
    }

    /// The limit of `a & box a & ... & box^k a`, reached within `|carrier|`
    /// steps because the `box^k a` sequence cycles by then.
    fn box_leq_limit(&self, a: u64) -> u64 {
        let mut meet = a;
        let mut pow = a;
        for _ in 1..self.carrier_size() {
            pow = self.box_op(pow);
            meet &= pow;
        }
        meet
    }

    /// Opremum test: some `c != 1` lies above `box^{<=n} a` for every
    /// `a != 1` and suitable `n`. Since the prefix meets stabilize within
    /// `|carrier|` steps, the least workable `c` is the join of the limits,
    /// and an opremum exists iff that join is not the top element.
    pub fn is_subdirectly_irreducible(&self) -> bool {
        let top = self.top();
        let mut join = self.bottom();
        for a in 0..top {
            join |= self.box_leq_limit(a);
            if join == top {
                return false;
            }
        }
        true
    }
}

/// True iff some rooted generated subframe of `b` maps onto `a` by a
/// surjective p-morphism; dually, the algebra of `a` embeds into a
/// subdirectly irreducible homomorphic image of the algebra of `b`.
///
/// `a` must be rooted (its algebra must be s.i. for the question to make
/// sense); finite height of `a` is not required here.
pub fn embeds_into_si_image(a: &Frame, b: &Frame) -> Result<bool, AlgebraError> {
    if !a.is_rooted() {
        return Err(AlgebraError::NotRooted);
    }
    let mut seen = std::collections::BTreeSet::new();
    for x in 0..b.size() {
        let g = b.generated_subframe(x).expect("point index is in range");
        if g.size() < a.size() {
            continue;
        }
        let canon = g.canonical_form();
        if !seen.insert(canon.order_key()) {
            continue;
        }
        if exists_surjective_p_morphism(&canon, a) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{enumerate_frames, FrameFilter};

    fn alg(frame: &Frame) -> DualAlgebra {
        DualAlgebra::new(frame.clone())
    }

    fn irreflexive_point() -> Frame {
        Frame::new(1, &[]).unwrap()
    }

    fn reflexive_point() -> Frame {
        Frame::new(1, &[(0, 0)]).unwrap()
    }

    fn reflexive_root_with_dead_end() -> Frame {
        Frame::new(2, &[(0, 0), (0, 1)]).unwrap()
    }

    fn parse(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let a = alg(&reflexive_root_with_dead_end());
        assert_eq!(a.evaluate(&Formula::Top, &Valuation::new()).unwrap(), a.top());

        let dead_end = alg(&irreflexive_point());
        assert_eq!(
            dead_end.evaluate(&parse("<>T"), &Valuation::new()).unwrap(),
            0
        );

        // On the two-point fixture, []<>T holds exactly at the dead end.
        assert_eq!(a.evaluate(&parse("[]<>T"), &Valuation::new()).unwrap(), 0b10);
        assert_ne!(a.evaluate(&parse("[]<>T"), &Valuation::new()).unwrap(), a.top());

        assert_eq!(
            a.evaluate(&parse("p0"), &Valuation::new()),
            Err(AlgebraError::UncoveredVariable(0))
        );
    }

    #[test]
    fn validates_examples() {
        assert!(alg(&irreflexive_point()).validates(&parse("[]F")));
        assert!(!alg(&reflexive_root_with_dead_end()).validates(&parse("[]<>T")));
        assert!(alg(&reflexive_point()).validates(&parse("<>T")));
        // A formula with variables exercises the valuation odometer.
        assert!(alg(&reflexive_point()).validates(&parse("[](p0 -> p1) -> ([]p0 -> []p1)")));
        assert!(!alg(&reflexive_point()).validates(&parse("p0")));
    }

    #[test]
    fn finite_height_examples() {
        assert_eq!(alg(&irreflexive_point()).finite_height(), Some(1));
        assert_eq!(alg(&reflexive_point()).finite_height(), None);

        let two_chain = Frame::new(2, &[(0, 1)]).unwrap();
        let a = alg(&two_chain);
        // box 0 = {dead end}, box box 0 = everything.
        assert_eq!(a.box_op(0), 0b10);
        assert_eq!(a.box_op(0b10), 0b11);
        assert_eq!(a.finite_height(), Some(2));
    }

    #[test]
    fn subdirect_irreducibility_examples() {
        assert!(alg(&irreflexive_point()).is_subdirectly_irreducible());
        assert!(alg(&reflexive_root_with_dead_end()).is_subdirectly_irreducible());

        // Two isolated dead ends: every candidate opremum fails.
        let isolated = Frame::new(2, &[]).unwrap();
        assert!(!alg(&isolated).is_subdirectly_irreducible());
    }

    #[test]
    fn embeds_examples() {
        let dead_end = irreflexive_point();
        assert_eq!(
            embeds_into_si_image(&dead_end, &reflexive_root_with_dead_end()),
            Ok(true)
        );
        assert_eq!(embeds_into_si_image(&dead_end, &reflexive_point()), Ok(false));

        let fixture = reflexive_root_with_dead_end();
        assert_eq!(embeds_into_si_image(&fixture, &fixture), Ok(true));

        let not_rooted = Frame::new(2, &[]).unwrap();
        assert_eq!(
            embeds_into_si_image(&not_rooted, &fixture),
            Err(AlgebraError::NotRooted)
        );
    }

    #[test]
    fn box_diamond_duality_exhaustive() {
        for frame in enumerate_frames(3, FrameFilter::Any) {
            let a = alg(&frame);
            for elem in 0..=a.top() {
                assert_eq!(a.box_op(elem), a.complement(a.diamond(a.complement(elem))));
            }
        }
    }

    #[test]
    fn height_and_si_coincide_with_frame_predicates_up_to_three_points() {
        // The acceptance suite pushes this to four points.
        for frame in enumerate_frames(3, FrameFilter::Any) {
            let a = alg(&frame);
            assert_eq!(
                a.finite_height().is_some(),
                frame.is_cycle_free(),
                "height mismatch on {frame:?}"
            );
            assert_eq!(
                a.is_subdirectly_irreducible(),
                frame.is_rooted(),
                "s.i. mismatch on {frame:?}"
            );
        }
    }

    #[test]
    fn box_prefix_sequence_is_increasing_until_stable() {
        for frame in enumerate_frames(3, FrameFilter::Any) {
            let a = alg(&frame);
            let mut cur = a.bottom();
            let mut stabilized = false;
            for _ in 0..a.carrier_size() {
                let next = a.box_op(cur);
                if next == cur {
                    stabilized = true;
                    break;
                }
                // increasing under <=: cur is below next
                assert_eq!(cur & next, cur, "box^n 0 not increasing on {frame:?}");
                cur = next;
            }
            assert!(
                stabilized || a.box_op(cur) == cur,
                "box^n 0 did not stabilize within |carrier| steps on {frame:?}"
            );
        }
    }

    #[test]
    fn surjective_image_reflects_finite_height() {
        // If the whole frame maps onto a cycle-free frame, it is cycle-free:
        // dually, an algebra containing a finite-height subalgebra has
        // finite height.
        let frames: Vec<Frame> = enumerate_frames(3, FrameFilter::Any).collect();
        for b in &frames {
            for a in &frames {
                if a.is_cycle_free() && exists_surjective_p_morphism(b, a) {
                    assert!(
                        b.is_cycle_free(),
                        "height not reflected: {b:?} maps onto {a:?}"
                    );
                }
            }
        }
    }
}
