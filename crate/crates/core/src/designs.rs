//! Combinatorial block designs: generators for the three canonical
//! `(n, w, w−1)` families and the AGL(1,7) orbit design, axiom
//! verification, the incidence-graph condition behind the design-to-frame
//! construction, Hall matchings, and the construction itself.
//!
//! Points are 1-based everywhere. A [`BlockDesign`] stores a *multiset* of
//! blocks: the `w = n` family needs `n−1` copies of `[n]`.

use crate::exactlin::{Rational, Vector};
use crate::frames::{Frame, FrameMeta};
use crate::rng::SplitMix64;

/// Hard cap on the block count so incidence neighborhoods fit in a `u128`
/// bitmask.
const MAX_BLOCKS_FOR_INCIDENCE: usize = 128;

/// Default cap on `n` for the exhaustive incidence-condition search
/// (`3^n` subset pairs).
pub const DEFAULT_INCIDENCE_LIMIT: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum DesignError {
    #[error("dimension too small: need n >= {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("invalid design: {0}")]
    Invalid(String),
    #[error("blocks are not of uniform size: block {index} has size {size}, expected {expected}")]
    NotUniform { index: usize, size: usize, expected: usize },
    #[error("pair ({p}, {q}) lies in {count} blocks, expected λ = {expected}")]
    NotBalanced { p: usize, q: usize, count: usize, expected: usize },
    #[error("point {point} lies in {count} blocks, expected r = {expected}")]
    NotPointRegular { point: usize, count: usize, expected: usize },
    #[error("incidence search too large: n = {n} exceeds limit {limit} (raise the limit to override)")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Frame(#[from] crate::frames::FrameError),
}

/// Point set `[n]` plus an ordered multiset of blocks, each a sorted set
/// of points. Blocks are sorted lexicographically on construction so the
/// representation is canonical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockDesign {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// Verified parameters of a 2-design.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DesignParams {
    /// Block size.
    pub k: usize,
    /// Number of blocks containing any fixed pair of points.
    pub lambda: usize,
    /// Number of blocks containing any fixed point.
    pub r: usize,
    /// Number of blocks.
    pub b: usize,
}

impl BlockDesign {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        if n < 2 {
            return Err(DesignError::DimensionTooSmall { min: 2, got: n });
        }
        let mut canon = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(DesignError::Invalid(format!("block {i} is empty")));
            }
            block.sort_unstable();
            block.dedup();
            if block[0] == 0 || *block.last().unwrap() > n {
                return Err(DesignError::Invalid(format!(
                    "block {i} has points outside 1..={n}"
                )));
            }
            canon.push(block);
        }
        canon.sort();
        Ok(BlockDesign { n, blocks: canon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Checks the 2-design axioms: uniform block size, constant pair
/// replication λ and constant point replication r. Returns the verified
/// parameters.
pub fn verify_design(d: &BlockDesign) -> Result<DesignParams, DesignError> {
    let n = d.n;
    let b = d.blocks.len();
    if b == 0 {
        return Err(DesignError::Invalid("design has no blocks".into()));
    }
    let k = d.blocks[0].len();
    for (i, block) in d.blocks.iter().enumerate() {
        if block.len() != k {
            return Err(DesignError::NotUniform { index: i, size: block.len(), expected: k });
        }
    }

    let mut point_count = vec![0usize; n + 1];
    let mut pair_count = vec![0usize; (n + 1) * (n + 1)];
    for block in &d.blocks {
        for (a, &p) in block.iter().enumerate() {
            point_count[p] += 1;
            for &q in &block[a + 1..] {
                pair_count[p * (n + 1) + q] += 1;
            }
        }
    }

    let lambda = pair_count[(n + 1) + 2]; // pair (1, 2)
    for p in 1..=n {
        for q in (p + 1)..=n {
            let count = pair_count[p * (n + 1) + q];
            if count != lambda {
                return Err(DesignError::NotBalanced { p, q, count, expected: lambda });
            }
        }
    }

    let r = point_count[1];
    for p in 1..=n {
        if point_count[p] != r {
            return Err(DesignError::NotPointRegular {
                point: p,
                count: point_count[p],
                expected: r,
            });
        }
    }

    // Double-counting identities; these cannot fail once the axioms hold.
    debug_assert_eq!(b * k, n * r);
    debug_assert_eq!(r * (k - 1), lambda * (n - 1));

    Ok(DesignParams { k, lambda, r, b })
}

/// The `(n, 2, 1)` design: blocks are all pairs `{i, j}`.
pub fn design_pairs(n: usize) -> Result<BlockDesign, DesignError> {
    if n < 2 {
        return Err(DesignError::DimensionTooSmall { min: 2, got: n });
    }
    let mut blocks = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            blocks.push(vec![i, j]);
        }
    }
    BlockDesign::new(n, blocks)
}

/// The `(n, n−1, n−2)` design: blocks are the complements `[n] ∖ {i}`.
pub fn design_complements(n: usize) -> Result<BlockDesign, DesignError> {
    if n < 3 {
        return Err(DesignError::DimensionTooSmall { min: 3, got: n });
    }
    let blocks = (1..=n)
        .map(|i| (1..=n).filter(|&p| p != i).collect())
        .collect();
    BlockDesign::new(n, blocks)
}

/// The `(n, n, n−1)` design: `n−1` copies of the full block `[n]`.
pub fn design_complete(n: usize) -> Result<BlockDesign, DesignError> {
    if n < 2 {
        return Err(DesignError::DimensionTooSmall { min: 2, got: n });
    }
    let block: Vec<usize> = (1..=n).collect();
    BlockDesign::new(n, vec![block; n - 1])
}

/// The `(7, 3, 2)` design from the orbit of `B₀ = {0, 1, 3}` under the
/// affine group `x ↦ ax + b` over 𝔽₇, residues relabeled to points 1..=7.
/// The stabilizer of `B₀` has order 3, so the orbit has `42 / 3 = 14`
/// distinct blocks.
pub fn design_agl17() -> BlockDesign {
    let base = [0u64, 1, 3];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for a in 1..7u64 {
        for b in 0..7u64 {
            let mut img: Vec<usize> = base
                .iter()
                .map(|&x| ((a * x + b) % 7) as usize + 1)
                .collect();
            img.sort_unstable();
            if !blocks.contains(&img) {
                blocks.push(img);
            }
        }
    }
    BlockDesign::new(7, blocks).expect("orbit blocks are valid")
}

/// Outcome of the incidence-graph condition
/// `|N(S) ∩ N(T)| ≥ |S| + |T| − 1` over all disjoint nonempty point sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IncidenceOutcome {
    Holds,
    /// First violating pair in bitmask enumeration order.
    Violated { s: Vec<usize>, t: Vec<usize>, common_blocks: usize },
}

/// Brute-force check of the incidence condition over all `3^n` ordered
/// pairs of disjoint nonempty subsets. Exponential by construction;
/// refuses `n > limit`.
pub fn incidence_condition(
    d: &BlockDesign,
    limit: usize,
) -> Result<IncidenceOutcome, DesignError> {
    let n = d.n;
    if n > limit {
        return Err(DesignError::TooLarge { n, limit });
    }
    if d.blocks.len() > MAX_BLOCKS_FOR_INCIDENCE {
        return Err(DesignError::Invalid(format!(
            "incidence check supports at most {MAX_BLOCKS_FOR_INCIDENCE} blocks, got {}",
            d.blocks.len()
        )));
    }
    // Per-point bitmask over blocks.
    let mut membership = vec![0u128; n + 1];
    for (i, block) in d.blocks.iter().enumerate() {
        for &p in block {
            membership[p] |= 1 << i;
        }
    }
    let neighborhood = |set: u32| -> u128 {
        let mut acc = 0u128;
        for p in 1..=n {
            if set & (1 << (p - 1)) != 0 {
                acc |= membership[p];
            }
        }
        acc
    };
    let to_points = |set: u32| -> Vec<usize> {
        (1..=n).filter(|p| set & (1 << (p - 1)) != 0).collect()
    };

    let full: u32 = (1 << n) - 1;
    for s in 1..=full {
        let ns = neighborhood(s);
        let s_size = s.count_ones() as usize;
        // Nonempty subsets of the complement of s, descending bitmask order.
        let comp = full & !s;
        let mut t = comp;
        while t != 0 {
            let needed = s_size + t.count_ones() as usize - 1;
            let common = (ns & neighborhood(t)).count_ones() as usize;
            if common < needed {
                return Ok(IncidenceOutcome::Violated {
                    s: to_points(s),
                    t: to_points(t),
                    common_blocks: common,
                });
            }
            t = (t - 1) & comp;
        }
    }
    Ok(IncidenceOutcome::Holds)
}

/// Witness for a bipartite matching query: either a full matching of the
/// left vertices into the targets, or a Hall-violating set of left
/// vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MatchingWitness {
    /// `assignment[i]` is the target point matched to left vertex `i`.
    Matching { assignment: Vec<usize> },
    /// Left vertices whose joint neighborhood is smaller than the set
    /// itself.
    Deficiency { left: Vec<usize>, neighborhood: Vec<usize> },
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &j in &adj[i] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        if match_right[j].is_none() || augment(match_right[j].unwrap(), adj, match_right, visited)
        {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}

/// Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
/// Left vertex `i` is adjacent to every target point contained in
/// `supports[i]`. Returns a full matching of the left side, or a
/// deficiency set violating Hall's condition.
pub fn hall_matching(supports: &[Vec<usize>], targets: &[usize]) -> MatchingWitness {
    let right: Vec<usize> = targets.to_vec();
    let adj: Vec<Vec<usize>> = supports
        .iter()
        .map(|s| {
            right
                .iter()
                .enumerate()
                .filter(|(_, p)| s.contains(p))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut match_right: Vec<Option<usize>> = vec![None; right.len()];

    for i in 0..supports.len() {
        let mut visited = vec![false; right.len()];
        if !augment(i, &adj, &mut match_right, &mut visited) {
            // Hall violator: left vertices reachable from i by alternating
            // paths. Their joint neighborhood is fully matched to one
            // fewer vertex than the set size.
            let mut left_set = vec![i];
            let mut right_set: Vec<usize> = Vec::new();
            loop {
                let mut changed = false;
                for &l in left_set.clone().iter() {
                    for &j in &adj[l] {
                        if !right_set.contains(&j) {
                            right_set.push(j);
                            changed = true;
                            if let Some(owner) = match_right[j] {
                                if !left_set.contains(&owner) {
                                    left_set.push(owner);
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            left_set.sort_unstable();
            let mut neighborhood: Vec<usize> = right_set.iter().map(|&j| right[j]).collect();
            neighborhood.sort_unstable();
            return MatchingWitness::Deficiency { left: left_set, neighborhood };
        }
    }

    let mut assignment = vec![usize::MAX; supports.len()];
    for (j, owner) in match_right.iter().enumerate() {
        if let Some(i) = owner {
            assignment[*i] = right[j];
        }
    }
    MatchingWitness::Matching { assignment }
}

/// The design-to-frame construction: `{e_1, …, e_n} ∪ {v_1, …, v_b}` with
/// `v_i` supported exactly on block `B_i` and seeded random nonzero
/// rational coefficients, drawn block by block with coordinates ascending.
pub fn frame_from_design(d: &BlockDesign, seed: u64) -> Result<Frame<Rational>, DesignError> {
    let params = verify_design(d)?;
    let n = d.n;
    let mut rng = SplitMix64::new(seed);
    let mut vectors: Vec<Vector<Rational>> = Vec::new();
    let mut labels = Vec::new();
    for k in 0..n {
        vectors.push(Vector::basis(n, k));
        labels.push(format!("e{}", k + 1));
    }
    for (i, block) in d.blocks.iter().enumerate() {
        let mut v = Vector::zeros(n);
        for &p in block {
            v.set(p - 1, rng.nonzero_rational());
        }
        vectors.push(v);
        labels.push(format!("b{}", i + 1));
    }
    let meta = FrameMeta::new(
        &format!("design-{}-{}-{}", n, params.k, params.lambda),
        seed,
    );
    Ok(Frame::new(n, vectors, labels, meta)?)
}
