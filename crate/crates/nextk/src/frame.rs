//! Finite Kripke frames with loops allowed, used as duals of finite modal
//! algebras. Enumeration yields one representative per isomorphism class in a
//! fixed canonical order, which every search in the crate relies on for
//! reproducible witnesses.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hard cap on frame size. Canonical forms search all permutations and pack
/// the relation into a 128-bit key, so sizes beyond this are rejected up
/// front rather than silently degrading.
pub const MAX_POINTS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame must have at least one point")]
    Empty,
    #[error("frame size {0} exceeds the supported maximum of {MAX_POINTS}")]
    TooLarge(usize),
    #[error("edge ({0}, {1}) out of range for frame of size {2}")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("point {0} out of range for frame of size {1}")]
    PointOutOfRange(usize, usize),
}

/// A finite directed graph on points `0..size`, loops allowed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    size: usize,
    /// `adj[i]` has bit `j` set iff `i R j`.
    adj: Vec<u64>,
}

impl Frame {
    pub fn new(size: usize, edges: &[(usize, usize)]) -> Result<Frame, FrameError> {
        if size == 0 {
            return Err(FrameError::Empty);
        }
        if size > MAX_POINTS {
            return Err(FrameError::TooLarge(size));
        }
        let mut adj = vec![0u64; size];
        for &(i, j) in edges {
            if i >= size || j >= size {
                return Err(FrameError::EdgeOutOfRange(i, j, size));
            }
            if adj[i] & (1 << j) != 0 {
                return Err(FrameError::DuplicateEdge(i, j));
            }
            adj[i] |= 1 << j;
        }
        Ok(Frame { size, adj })
    }

    fn from_adj(adj: Vec<u64>) -> Frame {
        Frame {
            size: adj.len(),
            adj,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] & (1 << j) != 0
    }

    /// Successor set of `i` as a bitmask.
    pub fn successors(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn full_mask(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    /// Points reachable from `root` under the reflexive-transitive closure.
    pub fn reachable_from(&self, root: usize) -> u64 {
        let mut seen = 1u64 << root;
        let mut work = vec![root];
        while let Some(x) = work.pop() {
            let mut fresh = self.adj[x] & !seen;
            seen |= self.adj[x];
            while fresh != 0 {
                let y = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                work.push(y);
            }
        }
        seen
    }

    /// Restriction of the frame to the points reachable from `root`, with the
    /// surviving points renumbered in ascending order of their old indices.
    pub fn generated_subframe(&self, root: usize) -> Result<Frame, FrameError> {
        if root >= self.size {
            return Err(FrameError::PointOutOfRange(root, self.size));
        }
        let kept = self.reachable_from(root);
        let old_points: Vec<usize> = (0..self.size).filter(|&x| kept & (1 << x) != 0).collect();
        let mut new_index = vec![usize::MAX; self.size];
        for (new, &old) in old_points.iter().enumerate() {
            new_index[old] = new;
        }
        let mut adj = vec![0u64; old_points.len()];
        for &old in &old_points {
            let mut succ = self.adj[old] & kept;
            while succ != 0 {
                let y = succ.trailing_zeros() as usize;
                succ &= succ - 1;
                adj[new_index[old]] |= 1 << new_index[y];
            }
        }
        Ok(Frame::from_adj(adj))
    }

    /// True iff some point reaches every point under the reflexive-transitive
    /// closure. Dually: the algebra of the frame is subdirectly irreducible.
    pub fn is_rooted(&self) -> bool {
        let full = self.full_mask();
        (0..self.size).any(|x| self.reachable_from(x) == full)
    }

    /// True iff no point lies on a directed cycle (loops count as cycles).
    /// Dually: the algebra of the frame is of finite height.
    pub fn is_cycle_free(&self) -> bool {
        // Warshall closure over nonempty paths.
        let mut reach = self.adj.clone();
        for k in 0..self.size {
            for i in 0..self.size {
                if reach[i] & (1 << k) != 0 {
                    reach[i] |= reach[k];
                }
            }
        }
        (0..self.size).all(|i| reach[i] & (1 << i) == 0)
    }

    /// The cycle-free members of the point-generated subframes, deduplicated
    /// up to isomorphism and listed in canonical order. Point-generated
    /// subframes are rooted by construction.
    pub fn rooted_cycle_free_generated_subframes(&self) -> Vec<Frame> {
        let mut seen = BTreeSet::new();
        for x in 0..self.size {
            let g = self
                .generated_subframe(x)
                .expect("point index is in range");
            if g.is_cycle_free() {
                let c = g.canonical_form();
                seen.insert((c.order_key(), c));
            }
        }
        seen.into_iter().map(|(_, f)| f).collect()
    }

    /// Encoding of the relation as a bit pattern: bit `i*size + j` is set iff
    /// `i R j`. Canonical order on frames is (size, key) ascending.
    pub fn encoding_key(&self) -> u128 {
        let mut key = 0u128;
        for i in 0..self.size {
            for j in 0..self.size {
                if self.has_edge(i, j) {
                    key |= 1u128 << (i * self.size + j);
                }
            }
        }
        key
    }

    pub fn order_key(&self) -> (usize, u128) {
        (self.size, self.encoding_key())
    }

    /// The representative of this frame's isomorphism class: the relabeling
    /// whose encoding key is least over all point permutations.
    pub fn canonical_form(&self) -> Frame {
        let n = self.size;
        let edges = self.edges();
        let mut best: Option<u128> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut key = 0u128;
            for &(x, y) in &edges {
                key |= 1u128 << (p[x] * n + p[y]);
            }
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        });
        let key = best.unwrap_or(0);
        let mut adj = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if key & (1u128 << (i * n + j)) != 0 {
                    adj[i] |= 1 << j;
                }
            }
        }
        Frame::from_adj(adj)
    }

    pub fn is_isomorphic(&self, other: &Frame) -> bool {
        self.size == other.size && self.canonical_form() == other.canonical_form()
    }
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame(size={}, edges={:?})", self.size, self.edges())
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A verified p-morphism (bounded morphism) between two frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    map: Vec<usize>,
}

impl PMorphism {
    /// Validates the forth and back conditions for `map : source -> target`.
    pub fn new(source: &Frame, target: &Frame, map: Vec<usize>) -> Result<PMorphism, FrameError> {
        if map.len() != source.size() {
            return Err(FrameError::PointOutOfRange(map.len(), source.size()));
        }
        for &v in &map {
            if v >= target.size() {
                return Err(FrameError::PointOutOfRange(v, target.size()));
            }
        }
        if !forth_and_back(source, target, &map) {
            return Err(FrameError::PointOutOfRange(usize::MAX, target.size()));
        }
        Ok(PMorphism { map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self, target: &Frame) -> bool {
        let mut covered = 0u64;
        for &v in &self.map {
            covered |= 1 << v;
        }
        covered == target.full_mask()
    }
}

fn forth_and_back(source: &Frame, target: &Frame, map: &[usize]) -> bool {
    for x in 0..source.size() {
        // forth: x R y implies map(x) R map(y)
        let mut succ = source.successors(x);
        while succ != 0 {
            let y = succ.trailing_zeros() as usize;
            succ &= succ - 1;
            if !target.has_edge(map[x], map[y]) {
                return false;
            }
        }
        // back: map(x) R z implies some y with x R y and map(y) = z
        let mut demands = target.successors(map[x]);
        while demands != 0 {
            let z = demands.trailing_zeros() as usize;
            demands &= demands - 1;
            let mut ys = source.successors(x);
            let mut hit = false;
            while ys != 0 {
                let y = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                if map[y] == z {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return false;
            }
        }
    }
    true
}

/// Backtracking search for a total surjective map `source -> target`
/// satisfying the forth and back conditions. Points are assigned in order
/// with forth checked incrementally; back and surjectivity at the leaves.
pub fn find_surjective_p_morphism(source: &Frame, target: &Frame) -> Option<PMorphism> {
    if target.size() > source.size() {
        return None;
    }
    let mut map = vec![usize::MAX; source.size()];
    if assign(source, target, &mut map, 0) {
        Some(PMorphism {
            map,
        })
    } else {
        None
    }
}

fn assign(source: &Frame, target: &Frame, map: &mut Vec<usize>, x: usize) -> bool {
    if x == source.size() {
        let mut covered = 0u64;
        for &v in map.iter() {
            covered |= 1 << v;
        }
        return covered == target.full_mask() && forth_and_back(source, target, map);
    }
    for v in 0..target.size() {
        map[x] = v;
        // forth pruning against already-assigned points
        let mut ok = true;
        for w in 0..=x {
            if source.has_edge(w, x) && !target.has_edge(map[w], v) {
                ok = false;
                break;
            }
            if source.has_edge(x, w) && !target.has_edge(v, map[w]) {
                ok = false;
                break;
            }
        }
        if ok && assign(source, target, map, x + 1) {
            return true;
        }
    }
    map[x] = usize::MAX;
    false
}

pub fn exists_surjective_p_morphism(source: &Frame, target: &Frame) -> bool {
    find_surjective_p_morphism(source, target).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameFilter {
    Any,
    Rooted,
    RootedCycleFree,
}

impl FrameFilter {
    fn admits(&self, f: &Frame) -> bool {
        match self {
            FrameFilter::Any => true,
            FrameFilter::Rooted => f.is_rooted(),
            FrameFilter::RootedCycleFree => f.is_rooted() && f.is_cycle_free(),
        }
    }
}

static CLASS_CACHE: OnceLock<Mutex<Vec<Arc<Vec<Frame>>>>> = OnceLock::new();

/// All isomorphism classes of frames with exactly `size` points, canonical
/// representatives in ascending key order. Memoized per process.
pub fn frame_classes(size: usize) -> Arc<Vec<Frame>> {
    assert!(size >= 1 && size <= MAX_POINTS, "size out of range");
    let cache = CLASS_CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("class cache poisoned");
    while guard.len() < size {
        let n = guard.len() + 1;
        let next = if n == 1 {
            let mut classes = BTreeSet::new();
            classes.insert((
                Frame::new(1, &[]).unwrap().order_key(),
                Frame::new(1, &[]).unwrap(),
            ));
            classes.insert((
                Frame::new(1, &[(0, 0)]).unwrap().order_key(),
                Frame::new(1, &[(0, 0)]).unwrap(),
            ));
            classes
        } else {
            // Every class on n points arises by deleting the last point of
            // some labeling, so extending the canonical (n-1)-classes by a
            // fresh point with arbitrary in/out edges covers everything.
            let smaller = guard[n - 2].clone();
            let mut classes = BTreeSet::new();
            let new = n - 1;
            for base in smaller.iter() {
                for in_mask in 0u64..(1 << new) {
                    for out_mask in 0u64..(1 << n) {
                        let mut adj = base.adj.clone();
                        adj.push(out_mask);
                        for w in 0..new {
                            if in_mask & (1 << w) != 0 {
                                adj[w] |= 1 << new;
                            }
                        }
                        let c = Frame::from_adj(adj).canonical_form();
                        classes.insert((c.order_key(), c));
                    }
                }
            }
            classes
        };
        guard.push(Arc::new(next.into_iter().map(|(_, f)| f).collect()));
    }
    guard[size - 1].clone()
}

/// One representative per isomorphism class satisfying `filter`, sizes
/// ascending, canonical key order within a size.
pub fn enumerate_frames(max_size: usize, filter: FrameFilter) -> impl Iterator<Item = Frame> {
    let max = max_size.min(MAX_POINTS).max(1);
    (1..=max).flat_map(move |size| {
        let classes = frame_classes(size);
        (0..classes.len())
            .map(move |i| classes[i].clone())
            .filter(move |f| filter.admits(f))
    })
}

// JSON wire format: {"size": n, "edges": [[i, j], ...]}.

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            size: usize,
            edges: Vec<(usize, usize)>,
        }
        Wire {
            size: self.size,
            edges: self.edges(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Frame, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            size: usize,
            edges: Vec<(usize, usize)>,
        }
        let wire = Wire::deserialize(deserializer)?;
        Frame::new(wire.size, &wire.edges).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The running fixture from the two-point examples: a reflexive root `r`
    /// with an irreflexive child `d`.
    pub(crate) fn reflexive_root_with_dead_end() -> Frame {
        Frame::new(2, &[(0, 0), (0, 1)]).unwrap()
    }

    fn irreflexive_point() -> Frame {
        Frame::new(1, &[]).unwrap()
    }

    fn reflexive_point() -> Frame {
        Frame::new(1, &[(0, 0)]).unwrap()
    }

    fn two_chain() -> Frame {
        Frame::new(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(Frame::new(0, &[]), Err(FrameError::Empty));
        assert!(matches!(
            Frame::new(2, &[(0, 2)]),
            Err(FrameError::EdgeOutOfRange(0, 2, 2))
        ));
        assert!(matches!(
            Frame::new(2, &[(0, 1), (0, 1)]),
            Err(FrameError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Frame::new(MAX_POINTS + 1, &[]),
            Err(FrameError::TooLarge(_))
        ));
    }

    #[test]
    fn generated_subframe_examples() {
        let f = reflexive_root_with_dead_end();
        let from_dead_end = f.generated_subframe(1).unwrap();
        assert_eq!(from_dead_end, irreflexive_point());

        // A root reaching everything generates the whole frame.
        let whole = f.generated_subframe(0).unwrap();
        assert!(whole.is_isomorphic(&f));

        let chain = Frame::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.generated_subframe(1).unwrap(), two_chain());

        assert!(f.generated_subframe(2).is_err());
    }

    #[test]
    fn rootedness_examples() {
        assert!(reflexive_point().is_rooted());
        assert!(!Frame::new(2, &[]).unwrap().is_rooted());
        assert!(reflexive_root_with_dead_end().is_rooted());
    }

    #[test]
    fn cycle_freeness_examples() {
        assert!(irreflexive_point().is_cycle_free());
        assert!(!reflexive_point().is_cycle_free());
        assert!(!reflexive_root_with_dead_end().is_cycle_free());
        assert!(two_chain().is_cycle_free());
        // Longer cycle without loops.
        assert!(!Frame::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap().is_cycle_free());
    }

    #[test]
    fn rooted_cycle_free_subframes_examples() {
        assert_eq!(
            reflexive_root_with_dead_end().rooted_cycle_free_generated_subframes(),
            vec![irreflexive_point()]
        );
        assert_eq!(
            irreflexive_point().rooted_cycle_free_generated_subframes(),
            vec![irreflexive_point()]
        );
        assert_eq!(
            reflexive_point().rooted_cycle_free_generated_subframes(),
            Vec::<Frame>::new()
        );
    }

    /// Independent oracle: enumerate every total map and check the p-morphism
    /// conditions directly, with no backtracking or pruning.
    fn brute_force_surjective_p_morphism(source: &Frame, target: &Frame) -> bool {
        let n = source.size();
        let t = target.size();
        let total = (t as u64).pow(n as u32);
        'outer: for code in 0..total {
            let mut map = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                map.push((c % t as u64) as usize);
                c /= t as u64;
            }
            let mut covered = 0u64;
            for &v in &map {
                covered |= 1 << v;
            }
            if covered != target.full_mask() {
                continue;
            }
            for x in 0..n {
                for y in 0..n {
                    if source.has_edge(x, y) && !target.has_edge(map[x], map[y]) {
                        continue 'outer;
                    }
                }
                for z in 0..t {
                    if target.has_edge(map[x], z)
                        && !(0..n).any(|y| source.has_edge(x, y) && map[y] == z)
                    {
                        continue 'outer;
                    }
                }
            }
            return true;
        }
        false
    }

    #[test]
    fn p_morphism_examples() {
        let f = reflexive_root_with_dead_end();
        assert!(exists_surjective_p_morphism(&f, &f));

        // The chain's root has a successor but the target point has none,
        // so the forth condition kills every candidate map.
        assert!(!exists_surjective_p_morphism(&two_chain(), &irreflexive_point()));
        assert!(!brute_force_surjective_p_morphism(&two_chain(), &irreflexive_point()));

        assert!(!exists_surjective_p_morphism(&reflexive_point(), &irreflexive_point()));
        assert!(!brute_force_surjective_p_morphism(&reflexive_point(), &irreflexive_point()));
    }

    #[test]
    fn p_morphism_search_matches_brute_force_on_small_frames() {
        let frames: Vec<Frame> = enumerate_frames(2, FrameFilter::Any).collect();
        for g in &frames {
            for h in &frames {
                assert_eq!(
                    exists_surjective_p_morphism(g, h),
                    brute_force_surjective_p_morphism(g, h),
                    "mismatch for {g:?} -> {h:?}"
                );
            }
        }
    }

    #[test]
    fn p_morphism_composition_on_small_frames() {
        let frames: Vec<Frame> = enumerate_frames(2, FrameFilter::Any).collect();
        for g in &frames {
            for h in &frames {
                if !exists_surjective_p_morphism(g, h) {
                    continue;
                }
                for k in &frames {
                    if exists_surjective_p_morphism(h, k) {
                        assert!(
                            exists_surjective_p_morphism(g, k),
                            "composition failed: {g:?} -> {h:?} -> {k:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        let relabeled = Frame::new(2, &[(1, 0)]).unwrap();
        assert_eq!(relabeled.canonical_form(), two_chain());
        assert_eq!(reflexive_point().canonical_form(), reflexive_point());
    }

    #[test]
    fn validated_p_morphism_constructor() {
        let f = reflexive_root_with_dead_end();
        let identity = PMorphism::new(&f, &f, vec![0, 1]).unwrap();
        assert!(identity.is_surjective(&f));
        assert!(PMorphism::new(&two_chain(), &irreflexive_point(), vec![0, 0]).is_err());
    }

    /// Independent oracle: all labeled frames of exactly `size` points,
    /// quotiented by isomorphism via canonical forms.
    fn brute_force_classes(size: usize) -> BTreeSet<(usize, u128)> {
        let bits = size * size;
        let mut out = BTreeSet::new();
        for code in 0u32..(1 << bits) {
            let mut adj = vec![0u64; size];
            for i in 0..size {
                for j in 0..size {
                    if code & (1 << (i * size + j)) != 0 {
                        adj[i] |= 1 << j;
                    }
                }
            }
            out.insert(Frame::from_adj(adj).canonical_form().order_key());
        }
        out
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        assert_eq!(enumerate_frames(1, FrameFilter::Any).count(), 2);
        assert_eq!(enumerate_frames(2, FrameFilter::Any).count(), 12);
        assert_eq!(enumerate_frames(2, FrameFilter::RootedCycleFree).count(), 2);

        for size in 1..=3 {
            let enumerated: BTreeSet<(usize, u128)> = frame_classes(size)
                .iter()
                .map(|f| f.order_key())
                .collect();
            assert_eq!(enumerated, brute_force_classes(size), "size {size}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let all: Vec<Frame> = enumerate_frames(3, FrameFilter::Any).collect();
        for w in all.windows(2) {
            assert!(w[0].order_key() < w[1].order_key());
        }
        for f in &all {
            assert_eq!(f, &f.canonical_form());
        }
        // The irreflexive point sorts first.
        assert_eq!(all[0], irreflexive_point());
    }

    #[test]
    fn rooted_cycle_free_classes_up_to_two_points() {
        let classes: Vec<Frame> = enumerate_frames(2, FrameFilter::RootedCycleFree).collect();
        assert_eq!(classes, vec![irreflexive_point(), two_chain()]);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let f = reflexive_root_with_dead_end();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"size":2,"edges":[[0,0],[0,1]]}"#);
        let back: Frame = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);

        assert!(serde_json::from_str::<Frame>(r#"{"size":2,"edges":[[0,1],[0,1]]}"#).is_err());
        assert!(serde_json::from_str::<Frame>(r#"{"size":1,"edges":[[0,1]]}"#).is_err());
        assert!(serde_json::from_str::<Frame>(r#"{"size":0,"edges":[]}"#).is_err());
    }

    fn small_frame_strategy() -> impl Strategy<Value = Frame> {
        (1usize..=4)
            .prop_flat_map(|size| {
                proptest::collection::vec(proptest::bool::ANY, size * size)
                    .prop_map(move |bits| {
                        let mut adj = vec![0u64; size];
                        for i in 0..size {
                            for j in 0..size {
                                if bits[i * size + j] {
                                    adj[i] |= 1 << j;
                                }
                            }
                        }
                        Frame::from_adj(adj)
                    })
            })
    }

    proptest! {
        #[test]
        fn canonical_form_is_permutation_invariant(
            f in small_frame_strategy(),
            seed in 0usize..24,
        ) {
            let n = f.size();
            let mut perm: Vec<usize> = (0..n).collect();
            // Cheap deterministic shuffle from the seed.
            let mut s = seed;
            for i in (1..n).rev() {
                perm.swap(i, s % (i + 1));
                s = s.wrapping_mul(31).wrapping_add(7);
            }
            let mut adj = vec![0u64; n];
            for (x, y) in f.edges() {
                adj[perm[x]] |= 1 << perm[y];
            }
            let relabeled = Frame::from_adj(adj);
            prop_assert_eq!(f.canonical_form(), relabeled.canonical_form());
        }

        #[test]
        fn generated_subframes_of_cycle_free_frames_are_cycle_free(
            f in small_frame_strategy(),
        ) {
            if f.is_cycle_free() {
                for x in 0..f.size() {
                    prop_assert!(f.generated_subframe(x).unwrap().is_cycle_free());
                }
            }
        }

        #[test]
        fn generated_subframe_is_idempotent(f in small_frame_strategy()) {
            for x in 0..f.size() {
                let g = f.generated_subframe(x).unwrap();
                // The root lands at the new index of x: the number of kept
                // points below x.
                let kept = f.reachable_from(x);
                let new_root = (0..x).filter(|&w| kept & (1 << w) != 0).count();
                let again = g.generated_subframe(new_root).unwrap();
                prop_assert!(again.is_isomorphic(&g));
            }
        }
    }
}
