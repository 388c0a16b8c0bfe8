//! Set partitions, partial pairings, and the gluing identity.
//!
//! This module houses the combinatorial layer: partitions of a finite index
//! set `{0, .., k-1}` with their permutation sign and weight, the formal sum
//! `chi(k) = sum eps(pi) n(pi) pi` over all partitions, partial pairings
//! between two index sets, and the identity
//!
//! ```text
//! sum over pairings phi of pullback(chi(X glued along phi with Y))
//!     = chi(X) * chi(Y)
//! ```
//!
//! which is verified exhaustively by [`verify_pairing_identity`]. The
//! closed-form side of the same computation is the vanishing of the
//! hypergeometric sum checked by [`coefficient_polynomial_at_one`].
//!
//! Indexing convention for a disjoint union: the left set occupies indices
//! `0..left`, the right set `left..left+right`. Both sides of the identity
//! use it, and the pullback of a quotient partition expands each quotient
//! block into the union of its preimage indices under that convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::PartitionError;

/// Default upper bound on ground sizes for enumeration; Bell(10) = 115975
/// partitions keeps everything comfortably below a second.
pub const DEFAULT_GROUND_LIMIT: usize = 10;

/// Default per-side bound for [`verify_pairing_identity`].
pub const DEFAULT_PAIRING_SIDE_LIMIT: usize = 4;

// ---------------------------------------------------------------------------
// SetPartition
// ---------------------------------------------------------------------------

/// A partition of `{0, .., ground_size-1}` into disjoint nonempty blocks,
/// held in canonical form: indices ascend within each block and blocks are
/// sorted by least element. Equality is structural equality of the
/// canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SetPartition {
    ground_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Canonicalizes and validates `blocks` as a partition of
    /// `{0, .., ground_size-1}`.
    pub fn new(ground_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        if ground_size == 0 {
            return Err(PartitionError::Invalid(
                "ground size must be positive".into(),
            ));
        }
        let mut seen = vec![false; ground_size];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(PartitionError::Invalid("empty block".into()));
            }
            block.sort_unstable();
            for &i in &block {
                if i >= ground_size {
                    return Err(PartitionError::Invalid(format!(
                        "index {i} out of range for ground size {ground_size}"
                    )));
                }
                if seen[i] {
                    return Err(PartitionError::Invalid(format!("index {i} occurs twice")));
                }
                seen[i] = true;
            }
            canon.push(block);
        }
        if seen.iter().any(|&s| !s) {
            return Err(PartitionError::Invalid(
                "blocks do not cover the ground set".into(),
            ));
        }
        canon.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition {
            ground_size,
            blocks: canon,
        })
    }

    /// Builds from a block-id assignment: `assignment[i]` names the block of
    /// element `i` (ids need not be contiguous).
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut by_id: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &id) in assignment.iter().enumerate() {
            by_id.entry(id).or_default().push(i);
        }
        let mut blocks: Vec<Vec<usize>> = by_id.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition {
            ground_size: assignment.len(),
            blocks,
        }
    }

    /// The all-singletons partition.
    pub fn singletons(ground_size: usize) -> Self {
        SetPartition {
            ground_size,
            blocks: (0..ground_size).map(|i| vec![i]).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (bi, block) in self.blocks.iter().enumerate() {
            if bi > 0 {
                write!(f, "|")?;
            }
            for (i, x) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "}}")
    }
}

/// The orbit partition of a permutation given in one-line notation
/// (`perm[i]` is the image of `i`).
pub fn orbit_partition(perm: &[usize]) -> Result<SetPartition, PartitionError> {
    let k = perm.len();
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(PartitionError::Invalid("not a permutation".into()));
        }
        seen[p] = true;
    }
    let mut assignment = vec![usize::MAX; k];
    let mut next = 0;
    for start in 0..k {
        if assignment[start] != usize::MAX {
            continue;
        }
        let mut i = start;
        while assignment[i] == usize::MAX {
            assignment[i] = next;
            i = perm[i];
        }
        next += 1;
    }
    Ok(SetPartition::from_assignment(&assignment))
}

/// `eps(pi)`: the common sign of every permutation whose orbit partition is
/// `pi`, namely the product over blocks of `(-1)^(len-1)`.
pub fn partition_sign(pi: &SetPartition) -> i32 {
    let transpositions: usize = pi.blocks().iter().map(|b| b.len() - 1).sum();
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `n(pi)`: the number of permutations whose orbit partition is `pi`, namely
/// the product over blocks of `(len-1)!`.
pub fn partition_weight(pi: &SetPartition) -> BigInt {
    let mut w = BigInt::one();
    for block in pi.blocks() {
        for j in 1..block.len() {
            w *= BigInt::from(j);
        }
    }
    w
}

/// All partitions of `{0, .., k-1}` in canonical form, enumerated via
/// restricted growth strings. The count is the k-th Bell number.
pub fn enumerate_set_partitions(k: usize) -> Result<Vec<SetPartition>, PartitionError> {
    enumerate_set_partitions_with_limit(k, DEFAULT_GROUND_LIMIT)
}

/// As [`enumerate_set_partitions`] with a caller-chosen ground-size limit.
pub fn enumerate_set_partitions_with_limit(
    k: usize,
    limit: usize,
) -> Result<Vec<SetPartition>, PartitionError> {
    if k == 0 {
        return Err(PartitionError::Invalid(
            "ground size must be positive".into(),
        ));
    }
    if k > limit {
        return Err(PartitionError::SizeLimit {
            requested: k,
            limit,
        });
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; k];
    grow(&mut assignment, 1, 0, &mut out);
    Ok(out)
}

// Restricted growth: position i may use any block id up to max-so-far + 1.
fn grow(assignment: &mut [usize], pos: usize, max_used: usize, out: &mut Vec<SetPartition>) {
    if pos == assignment.len() {
        out.push(SetPartition::from_assignment(assignment));
        return;
    }
    for id in 0..=max_used + 1 {
        assignment[pos] = id;
        grow(assignment, pos + 1, max_used.max(id), out);
    }
}

// ---------------------------------------------------------------------------
// FormalPartitionSum
// ---------------------------------------------------------------------------

/// An integer-weighted formal sum of partitions of a common ground set: an
/// element of the free abelian group on partitions. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalPartitionSum {
    ground_size: usize,
    terms: BTreeMap<SetPartition, BigInt>,
}

impl FormalPartitionSum {
    pub fn zero(ground_size: usize) -> Self {
        FormalPartitionSum {
            ground_size,
            terms: BTreeMap::new(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SetPartition, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, pi: &SetPartition) -> BigInt {
        self.terms.get(pi).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `c * pi`, dropping the key if the coefficient cancels.
    pub fn add_term(&mut self, pi: SetPartition, c: BigInt) {
        debug_assert_eq!(pi.ground_size(), self.ground_size);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(pi);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &FormalPartitionSum) {
        debug_assert_eq!(other.ground_size, self.ground_size);
        for (pi, c) in &other.terms {
            self.add_term(pi.clone(), c.clone());
        }
    }

    /// The first key whose coefficients differ between `self` and `other`,
    /// if any, with both coefficients.
    pub fn first_difference(
        &self,
        other: &FormalPartitionSum,
    ) -> Option<(SetPartition, BigInt, BigInt)> {
        let keys = self.terms.keys().chain(other.terms.keys());
        let mut keys: Vec<&SetPartition> = keys.collect();
        keys.sort();
        keys.dedup();
        for pi in keys {
            let a = self.coefficient(pi);
            let b = other.coefficient(pi);
            if a != b {
                return Some((pi.clone(), a, b));
            }
        }
        None
    }

    /// Bilinear product landing on the disjoint union: each partition of the
    /// right factor is shifted up by the left ground size and concatenated
    /// block-wise with the left partition.
    pub fn disjoint_product(&self, other: &FormalPartitionSum) -> FormalPartitionSum {
        let left = self.ground_size;
        let mut out = FormalPartitionSum::zero(left + other.ground_size);
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let mut blocks = pa.blocks().to_vec();
                for block in pb.blocks() {
                    blocks.push(block.iter().map(|&i| i + left).collect());
                }
                let pi = SetPartition::new(out.ground_size, blocks)
                    .expect("shifted blocks partition the disjoint union");
                out.add_term(pi, ca * cb);
            }
        }
        out
    }
}

/// `chi(k)`: the formal sum `sum eps(pi) n(pi) pi` over all partitions of a
/// k-element set. The coefficient of the all-singletons partition is +1 and
/// the number of terms is the k-th Bell number.
pub fn chi(k: usize) -> Result<FormalPartitionSum, PartitionError> {
    chi_with_limit(k, DEFAULT_GROUND_LIMIT)
}

/// As [`chi`] with a caller-chosen ground-size limit.
pub fn chi_with_limit(k: usize, limit: usize) -> Result<FormalPartitionSum, PartitionError> {
    let mut sum = FormalPartitionSum::zero(k);
    for pi in enumerate_set_partitions_with_limit(k, limit)? {
        let c = BigInt::from(partition_sign(&pi)) * partition_weight(&pi);
        sum.add_term(pi, c);
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// PartialPairing
// ---------------------------------------------------------------------------

/// An injective partial map from a left index set into a right index set: a
/// bijection between a subset of each. The empty pairing is valid.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct PartialPairing {
    left_size: usize,
    right_size: usize,
    /// Pairs `(x, y)` sorted by `x`; `x` ranges over left indices and `y`
    /// over right indices.
    pairs: Vec<(usize, usize)>,
}

impl PartialPairing {
    pub fn new(
        left_size: usize,
        right_size: usize,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<Self, PartitionError> {
        if left_size == 0 || right_size == 0 {
            return Err(PartitionError::InvalidPairing(
                "sizes must be positive".into(),
            ));
        }
        pairs.sort_unstable();
        let mut used_right = vec![false; right_size];
        let mut last_left = None;
        for &(x, y) in &pairs {
            if x >= left_size || y >= right_size {
                return Err(PartitionError::InvalidPairing(format!(
                    "pair ({x},{y}) out of range"
                )));
            }
            if last_left == Some(x) {
                return Err(PartitionError::InvalidPairing(format!(
                    "left index {x} paired twice"
                )));
            }
            if used_right[y] {
                return Err(PartitionError::InvalidPairing(format!(
                    "right index {y} paired twice"
                )));
            }
            used_right[y] = true;
            last_left = Some(x);
        }
        Ok(PartialPairing {
            left_size,
            right_size,
            pairs,
        })
    }

    pub fn empty(left_size: usize, right_size: usize) -> Result<Self, PartitionError> {
        Self::new(left_size, right_size, Vec::new())
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Size of the glued quotient set `left + right - #pairs`.
    pub fn quotient_size(&self) -> usize {
        self.left_size + self.right_size - self.pairs.len()
    }

    /// The quotient map as a vector over disjoint-union indices: left
    /// indices first, then right indices shifted by `left_size`. Class ids
    /// are assigned in order of first appearance.
    fn quotient_map(&self) -> Vec<usize> {
        let total = self.left_size + self.right_size;
        let mut class = vec![usize::MAX; total];
        let mut next = 0;
        for c in class.iter_mut().take(self.left_size) {
            *c = next;
            next += 1;
        }
        for &(x, y) in &self.pairs {
            class[self.left_size + y] = class[x];
        }
        for c in class.iter_mut().skip(self.left_size) {
            if *c == usize::MAX {
                *c = next;
                next += 1;
            }
        }
        debug_assert_eq!(next, self.quotient_size());
        class
    }
}

/// Every injective partial map between `{0..left_size}` and
/// `{0..right_size}`, each exactly once. The count is
/// `sum over l of l! C(left, l) C(right, l)`.
pub fn enumerate_partial_pairings(
    left_size: usize,
    right_size: usize,
) -> Result<Vec<PartialPairing>, PartitionError> {
    if left_size == 0 || right_size == 0 {
        return Err(PartitionError::InvalidPairing(
            "sizes must be positive".into(),
        ));
    }
    if left_size + right_size > DEFAULT_GROUND_LIMIT {
        return Err(PartitionError::SizeLimit {
            requested: left_size + right_size,
            limit: DEFAULT_GROUND_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut used_right = vec![false; right_size];
    let mut pairs = Vec::new();
    pair_from(
        0,
        left_size,
        right_size,
        &mut used_right,
        &mut pairs,
        &mut out,
    );
    Ok(out)
}

// Each left index is either unpaired or paired to an unused right index.
fn pair_from(
    x: usize,
    left_size: usize,
    right_size: usize,
    used_right: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<PartialPairing>,
) {
    if x == left_size {
        out.push(PartialPairing {
            left_size,
            right_size,
            pairs: pairs.clone(),
        });
        return;
    }
    pair_from(x + 1, left_size, right_size, used_right, pairs, out);
    for y in 0..right_size {
        if !used_right[y] {
            used_right[y] = true;
            pairs.push((x, y));
            pair_from(x + 1, left_size, right_size, used_right, pairs, out);
            pairs.pop();
            used_right[y] = false;
        }
    }
}

/// Computes `chi` of the glued quotient set and pulls every term back along
/// the quotient map: each quotient block expands to the union of its
/// preimage indices in the disjoint union.
pub fn pairing_pullback_chi(phi: &PartialPairing) -> Result<FormalPartitionSum, PartitionError> {
    let q = phi.quotient_map();
    let total = phi.left_size + phi.right_size;
    let quotient_chi = chi(phi.quotient_size())?;
    let mut out = FormalPartitionSum::zero(total);
    for (pi, c) in quotient_chi.terms() {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); pi.num_blocks()];
        let mut class_to_block = vec![usize::MAX; phi.quotient_size()];
        for (bi, block) in pi.blocks().iter().enumerate() {
            for &cls in block {
                class_to_block[cls] = bi;
            }
        }
        for (i, &cls) in q.iter().enumerate() {
            blocks[class_to_block[cls]].push(i);
        }
        let pulled = SetPartition::new(total, blocks)
            .expect("preimages of quotient blocks partition the disjoint union");
        out.add_term(pulled, c.clone());
    }
    Ok(out)
}

/// Outcome of checking the gluing identity for one size pair.
#[derive(Clone, Debug, Serialize)]
pub struct PairingIdentityReport {
    pub left_size: usize,
    pub right_size: usize,
    pub equal: bool,
    pub pairings_summed: usize,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    /// First differing partition with (lhs, rhs) coefficients, when unequal.
    pub first_difference: Option<PairingDifference>,
}

/// One differing term of the identity, rendered for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct PairingDifference {
    pub partition: String,
    pub lhs_coefficient: String,
    pub rhs_coefficient: String,
}

/// Checks `sum over phi of pullback(chi(quotient)) = chi(left) * chi(right)`
/// by full enumeration of partial pairings.
pub fn verify_pairing_identity(
    left_size: usize,
    right_size: usize,
) -> Result<PairingIdentityReport, PartitionError> {
    verify_pairing_identity_with_limit(left_size, right_size, DEFAULT_PAIRING_SIDE_LIMIT)
}

/// As [`verify_pairing_identity`] with a caller-chosen per-side limit.
pub fn verify_pairing_identity_with_limit(
    left_size: usize,
    right_size: usize,
    side_limit: usize,
) -> Result<PairingIdentityReport, PartitionError> {
    for size in [left_size, right_size] {
        if size > side_limit {
            return Err(PartitionError::SizeLimit {
                requested: size,
                limit: side_limit,
            });
        }
    }
    let pairings = enumerate_partial_pairings(left_size, right_size)?;
    let mut lhs = FormalPartitionSum::zero(left_size + right_size);
    for phi in &pairings {
        lhs.add(&pairing_pullback_chi(phi)?);
    }
    let rhs = chi(left_size)?.disjoint_product(&chi(right_size)?);
    let diff = lhs.first_difference(&rhs);
    Ok(PairingIdentityReport {
        left_size,
        right_size,
        equal: diff.is_none(),
        pairings_summed: pairings.len(),
        lhs_terms: lhs.num_terms(),
        rhs_terms: rhs.num_terms(),
        first_difference: diff.map(|(pi, a, b)| PairingDifference {
            partition: pi.to_string(),
            lhs_coefficient: a.to_string(),
            rhs_coefficient: b.to_string(),
        }),
    })
}

// ---------------------------------------------------------------------------
// Hypergeometric vanishing
// ---------------------------------------------------------------------------

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k.min(n - k) {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Evaluates `P_{m,n}(1) = sum over l of d(m,n,l) (-1)^l` with
/// `d(m,n,l) = C(m,l) C(n,l) / C(m+n-1,l)` in exact rationals. The sum
/// vanishes for all `m, n >= 1`; this is the coefficient identity behind the
/// gluing formula.
pub fn coefficient_polynomial_at_one(m: usize, n: usize) -> BigRational {
    assert!(m >= 1 && n >= 1, "m and n must be positive");
    let mut acc = BigRational::zero();
    for l in 0..=m.min(n) {
        let d = BigRational::new(binomial(m, l) * binomial(n, l), binomial(m + n - 1, l));
        if l % 2 == 0 {
            acc += d;
        } else {
            acc -= d;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent Bell number oracle via the Bell triangle.
    fn bell(k: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 1..k {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let last = *next.last().unwrap();
                next.push(last + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    // All permutations of 0..k in one-line notation.
    fn permutations(k: usize) -> Vec<Vec<usize>> {
        fn rec(remaining: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if remaining.is_empty() {
                out.push(current.clone());
                return;
            }
            for i in 0..remaining.len() {
                let v = remaining.remove(i);
                current.push(v);
                rec(remaining, current, out);
                current.pop();
                remaining.insert(i, v);
            }
        }
        let mut out = Vec::new();
        rec(&mut (0..k).collect(), &mut Vec::new(), &mut out);
        out
    }

    // Permutation sign by counting inversions, independent of orbit data.
    fn inversion_sign(perm: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn enumeration_counts_match_bell_numbers() {
        assert_eq!(enumerate_set_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_set_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_set_partitions(4).unwrap().len(), 15);
        for k in 1..=8 {
            let parts = enumerate_set_partitions(k).unwrap();
            assert_eq!(parts.len() as u64, bell(k), "k={k}");
            // exactly once, in canonical form
            let mut sorted = parts.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), parts.len());
        }
        assert!(matches!(
            enumerate_set_partitions(11),
            Err(PartitionError::SizeLimit { .. })
        ));
    }

    #[test]
    fn sign_and_weight_match_permutation_oracle() {
        for k in 1..=6 {
            let mut counts: BTreeMap<SetPartition, u64> = BTreeMap::new();
            for perm in permutations(k) {
                let pi = orbit_partition(&perm).unwrap();
                assert_eq!(inversion_sign(&perm), partition_sign(&pi), "perm {perm:?}");
                *counts.entry(pi).or_insert(0) += 1;
            }
            let mut total = 0u64;
            for pi in enumerate_set_partitions(k).unwrap() {
                let expected = counts.get(&pi).copied().unwrap_or(0);
                assert_eq!(
                    partition_weight(&pi),
                    BigInt::from(expected),
                    "weight of {pi} at k={k}"
                );
                total += expected;
            }
            let factorial: u64 = (1..=k as u64).product();
            assert_eq!(total, factorial);
        }
    }

    #[test]
    fn sign_examples() {
        let k3_singletons = SetPartition::singletons(3);
        assert_eq!(partition_sign(&k3_singletons), 1);
        let pair = SetPartition::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(partition_sign(&pair), -1);
        let three_cycle = SetPartition::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(partition_sign(&three_cycle), 1);
        assert_eq!(partition_weight(&three_cycle), BigInt::from(2));
        let two_two = SetPartition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(partition_weight(&two_two), BigInt::from(1));
    }

    #[test]
    fn chi_small_cases() {
        let c1 = chi(1).unwrap();
        assert_eq!(c1.num_terms(), 1);
        assert_eq!(c1.coefficient(&SetPartition::singletons(1)), BigInt::one());

        let c2 = chi(2).unwrap();
        assert_eq!(c2.coefficient(&SetPartition::singletons(2)), BigInt::one());
        assert_eq!(
            c2.coefficient(&SetPartition::new(2, vec![vec![0, 1]]).unwrap()),
            BigInt::from(-1)
        );

        let c3 = chi(3).unwrap();
        assert_eq!(c3.num_terms(), 5);
        assert_eq!(c3.coefficient(&SetPartition::singletons(3)), BigInt::one());
        for pair in [[0, 1], [0, 2], [1, 2]] {
            let rest = (0..3).find(|i| !pair.contains(i)).unwrap();
            let pi = SetPartition::new(3, vec![pair.to_vec(), vec![rest]]).unwrap();
            assert_eq!(c3.coefficient(&pi), BigInt::from(-1));
        }
        let full = SetPartition::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(c3.coefficient(&full), BigInt::from(2));
    }

    #[test]
    fn chi_term_count_is_bell() {
        for k in 1..=7 {
            assert_eq!(chi(k).unwrap().num_terms() as u64, bell(k));
        }
    }

    #[test]
    fn pairing_enumeration_counts() {
        assert_eq!(enumerate_partial_pairings(1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_partial_pairings(2, 2).unwrap().len(), 7);
        assert_eq!(enumerate_partial_pairings(2, 3).unwrap().len(), 13);
        // sum over l of l! C(a,l) C(b,l) for (3,3): 1 + 9 + 18*2/2... compute
        // directly: l=0:1, l=1:9, l=2:3*3*2=18, l=3:6 -> 34
        assert_eq!(enumerate_partial_pairings(3, 3).unwrap().len(), 34);
        let all = enumerate_partial_pairings(3, 3).unwrap();
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn pullback_examples() {
        // full pairing of two singletons glues to one class
        let full = PartialPairing::new(1, 1, vec![(0, 0)]).unwrap();
        let pb = pairing_pullback_chi(&full).unwrap();
        assert_eq!(pb.num_terms(), 1);
        let merged = SetPartition::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(pb.coefficient(&merged), BigInt::one());

        // empty pairing: quotient map is the identity, so pullback is chi(2)
        let empty = PartialPairing::empty(1, 1).unwrap();
        assert_eq!(pairing_pullback_chi(&empty).unwrap(), chi(2).unwrap());

        // left=2, right=1, pairing 0 -> 0: quotient {merged, 1}
        let phi = PartialPairing::new(2, 1, vec![(0, 0)]).unwrap();
        let pb = pairing_pullback_chi(&phi).unwrap();
        assert_eq!(pb.num_terms(), 2);
        let split = SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        let all = SetPartition::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(pb.coefficient(&split), BigInt::one());
        assert_eq!(pb.coefficient(&all), BigInt::from(-1));
    }

    #[test]
    fn pairing_identity_small() {
        let r = verify_pairing_identity(1, 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.pairings_summed, 2);
        // both sides equal chi(1) x chi(1) = +1 * singletons
        assert_eq!(r.lhs_terms, r.rhs_terms);

        assert!(verify_pairing_identity(1, 2).unwrap().equal);
        assert!(verify_pairing_identity(3, 3).unwrap().equal);
    }

    #[test]
    fn pairing_identity_all_sizes_up_to_three() {
        for a in 1..=3 {
            for b in 1..=3 {
                assert!(verify_pairing_identity(a, b).unwrap().equal, "({a},{b})");
            }
        }
    }

    #[test]
    fn hypergeometric_vanishing_small() {
        assert_eq!(coefficient_polynomial_at_one(1, 1), BigRational::zero());
        assert_eq!(coefficient_polynomial_at_one(2, 1), BigRational::zero());
        assert_eq!(coefficient_polynomial_at_one(2, 2), BigRational::zero());
        for m in 1..=8 {
            for n in 1..=8 {
                assert_eq!(
                    coefficient_polynomial_at_one(m, n),
                    BigRational::zero(),
                    "({m},{n})"
                );
            }
        }
    }

    #[test]
    fn canonical_form_is_stable_under_input_order() {
        let a = SetPartition::new(4, vec![vec![2, 0], vec![3, 1]]).unwrap();
        let b = SetPartition::new(4, vec![vec![1, 3], vec![0, 2]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{0,2|1,3}");
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        assert!(SetPartition::new(2, vec![vec![0]]).is_err());
        assert!(SetPartition::new(2, vec![vec![0, 0], vec![1]]).is_err());
        assert!(SetPartition::new(2, vec![vec![0, 1], vec![1]]).is_err());
        assert!(SetPartition::new(1, vec![vec![0, 1]]).is_err());
        assert!(PartialPairing::new(2, 2, vec![(0, 0), (0, 1)]).is_err());
        assert!(PartialPairing::new(2, 2, vec![(0, 0), (1, 0)]).is_err());
    }
}
