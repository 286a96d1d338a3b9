//! Exact combinatorics of primitives in the rank two free group: Farey
//! fractions and triples, mod-2 classes, freely reduced words, basic triples
//! with `ABC = id`, the flip moves, and the trivalent superbasis tree.
//!
//! Everything here is integer arithmetic. Products go through 128-bit
//! intermediates and sums are checked, so a result is either exact or an
//! `IntegerOverflow` error.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::{GeomError, Result};

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Point of the rational projective line: `p/q` with `gcd(p,q) = 1`,
/// normalized so `q > 0`, or `q = 0` with `p = 1` (the point at infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FareyFraction {
    p: i64,
    q: i64,
}

/// Mod-2 classes of primitives: odd/even, even/odd, odd/odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mod2Class {
    Infinity,
    Zero,
    One,
}

impl FareyFraction {
    pub const INFINITY: FareyFraction = FareyFraction { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<FareyFraction> {
        if p == 0 && q == 0 {
            return Err(GeomError::InvalidCombinatorics("0/0 is not projective"));
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(FareyFraction { p, q })
    }

    #[inline]
    pub fn p(&self) -> i64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> i64 {
        self.q
    }

    /// `p1 q2 − p2 q1`, exact.
    pub fn det(&self, o: &FareyFraction) -> i64 {
        let d = self.p as i128 * o.q as i128 - o.p as i128 * self.q as i128;
        d as i64 // |entries| ≤ 2^63 ⇒ |d| < 2^127, and neighbors only need ±1
    }

    pub fn are_neighbors(&self, o: &FareyFraction) -> bool {
        let d = self.p as i128 * o.q as i128 - o.p as i128 * self.q as i128;
        d == 1 || d == -1
    }

    pub fn mod2_class(&self) -> Mod2Class {
        match (self.p.rem_euclid(2), self.q.rem_euclid(2)) {
            (1, 0) => Mod2Class::Infinity,
            (0, 1) => Mod2Class::Zero,
            (1, 1) => Mod2Class::One,
            _ => unreachable!("coprime pair cannot be even/even"),
        }
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Geometric intersection number of the corresponding curve classes:
/// `|p1 q2 − p2 q1|`.
pub fn intersection_number(x: &FareyFraction, y: &FareyFraction) -> i64 {
    x.det(y).abs()
}

/// The two extensions of a pair of Farey neighbors: the Farey sum
/// `(p1+p2)/(q1+q2)` and the Farey difference `(p1−p2)/(q1−q2)`.
pub fn farey_children(x: &FareyFraction, y: &FareyFraction) -> Result<(FareyFraction, FareyFraction)> {
    if !x.are_neighbors(y) {
        return Err(GeomError::InvalidCombinatorics("not Farey neighbors"));
    }
    let sum = FareyFraction::new(
        x.p.checked_add(y.p).ok_or(GeomError::IntegerOverflow)?,
        x.q.checked_add(y.q).ok_or(GeomError::IntegerOverflow)?,
    )?;
    let diff = FareyFraction::new(
        x.p.checked_sub(y.p).ok_or(GeomError::IntegerOverflow)?,
        x.q.checked_sub(y.q).ok_or(GeomError::IntegerOverflow)?,
    )?;
    Ok((sum, diff))
}

/// Ordered triple of pairwise Farey neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FareyTriple {
    f: [FareyFraction; 3],
}

impl FareyTriple {
    pub fn new(f: [FareyFraction; 3]) -> Result<FareyTriple> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if !f[i].are_neighbors(&f[j]) {
                    return Err(GeomError::InvalidCombinatorics("triple is not pairwise neighbors"));
                }
            }
        }
        Ok(FareyTriple { f })
    }

    pub const fn base() -> FareyTriple {
        FareyTriple {
            f: [
                FareyFraction { p: 1, q: 0 },
                FareyFraction { p: 0, q: 1 },
                FareyFraction { p: 1, q: 1 },
            ],
        }
    }

    #[inline]
    pub fn fractions(&self) -> &[FareyFraction; 3] {
        &self.f
    }

    /// The three mod-2 classes of a Farey triple are always distinct.
    pub fn mod2_classes(&self) -> [Mod2Class; 3] {
        [
            self.f[0].mod2_class(),
            self.f[1].mod2_class(),
            self.f[2].mod2_class(),
        ]
    }

    /// Reorder so the classes sit in positions (∞, 0, 1).
    pub fn canonical_order(&self) -> FareyTriple {
        let mut out = self.f;
        for x in self.f {
            match x.mod2_class() {
                Mod2Class::Infinity => out[0] = x,
                Mod2Class::Zero => out[1] = x,
                Mod2Class::One => out[2] = x,
            }
        }
        FareyTriple { f: out }
    }

    /// Key for duplicate detection: the unordered set of fractions.
    pub fn unordered_key(&self) -> [(i64, i64); 3] {
        let mut k = [
            (self.f[0].p, self.f[0].q),
            (self.f[1].p, self.f[1].q),
            (self.f[2].p, self.f[2].q),
        ];
        k.sort_unstable();
        k
    }
}

impl fmt::Display for FareyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.f[0], self.f[1], self.f[2])
    }
}

/// Generator letters of the free group, with inverses as capitals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

/// Freely reduced word over `{a, a⁻¹, b, b⁻¹}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Word {
    letters: Vec<Letter>,
}

impl F2Word {
    pub fn empty() -> F2Word {
        F2Word {
            letters: Vec::new(),
        }
    }

    pub fn gen_a() -> F2Word {
        F2Word {
            letters: alloc::vec![Letter::A],
        }
    }

    pub fn gen_b() -> F2Word {
        F2Word {
            letters: alloc::vec![Letter::B],
        }
    }

    pub fn parse(s: &str) -> Result<F2Word> {
        let mut w = F2Word::empty();
        for c in s.chars() {
            let l = Letter::from_char(c)
                .ok_or(GeomError::InvalidCombinatorics("word letter outside {a,A,b,B}"))?;
            w.push(l);
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn concat(&self, o: &F2Word) -> F2Word {
        let mut w = self.clone();
        for &l in &o.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> F2Word {
        F2Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Exponent sums of `a` and `b`.
    pub fn abelianize(&self) -> (i64, i64) {
        let mut ab = (0i64, 0i64);
        for l in &self.letters {
            match l {
                Letter::A => ab.0 += 1,
                Letter::AInv => ab.0 -= 1,
                Letter::B => ab.1 += 1,
                Letter::BInv => ab.1 -= 1,
            }
        }
        ab
    }

    /// Projective class of the abelianization, if primitive-compatible.
    pub fn label(&self) -> Result<FareyFraction> {
        let (p, q) = self.abelianize();
        FareyFraction::new(p, q)
    }

    /// Iterate letters as generator index (0 = a, 1 = b) plus inversion flag.
    pub fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.letters.iter().map(|l| match l {
            Letter::A => (0, false),
            Letter::AInv => (0, true),
            Letter::B => (1, false),
            Letter::BInv => (1, true),
        })
    }
}

impl fmt::Display for F2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Ordered triple `(A, B, C)` of words with `ABC = id` whose pairs are bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicTriple {
    pub a: F2Word,
    pub b: F2Word,
    pub c: F2Word,
}

impl BasicTriple {
    pub fn new(a: F2Word, b: F2Word, c: F2Word) -> Result<BasicTriple> {
        let t = BasicTriple { a, b, c };
        if !t.a.concat(&t.b).concat(&t.c).is_empty() {
            return Err(GeomError::InvalidCombinatorics("ABC does not reduce to the identity"));
        }
        let (a1, a2) = t.a.abelianize();
        let (b1, b2) = t.b.abelianize();
        let det = a1 as i128 * b2 as i128 - a2 as i128 * b1 as i128;
        if det != 1 && det != -1 {
            return Err(GeomError::InvalidCombinatorics("abelianized pair is not a basis"));
        }
        Ok(t)
    }

    /// `(a, b, b⁻¹a⁻¹)`, the triple labeling the base Farey triple.
    pub fn base() -> BasicTriple {
        let a = F2Word::gen_a();
        let b = F2Word::gen_b();
        let c = b.inverse().concat(&a.inverse());
        BasicTriple { a, b, c }
    }

    pub fn word(&self, slot: usize) -> &F2Word {
        match slot {
            0 => &self.a,
            1 => &self.b,
            _ => &self.c,
        }
    }

    /// Farey triple of the words' projectivized abelianizations.
    pub fn labels(&self) -> Result<FareyTriple> {
        FareyTriple::new([self.a.label()?, self.b.label()?, self.c.label()?])
    }

    /// Permutation action on basic triples generated by
    /// `(A,B,C) ↦ (B⁻¹,A⁻¹,C⁻¹)` and `(A,B,C) ↦ (A⁻¹,C⁻¹,B⁻¹)`.
    fn permute_12(&self) -> BasicTriple {
        BasicTriple {
            a: self.b.inverse(),
            b: self.a.inverse(),
            c: self.c.inverse(),
        }
    }

    fn permute_23(&self) -> BasicTriple {
        BasicTriple {
            a: self.a.inverse(),
            b: self.c.inverse(),
            c: self.b.inverse(),
        }
    }

    fn permute_13(&self) -> BasicTriple {
        // (13) = (12)(23)(12): (A,B,C) ↦ (C⁻¹, B⁻¹, A⁻¹).
        self.permute_12().permute_23().permute_12()
    }

    /// Flip in the last slot: `(A,B,C) ↦ (B⁻¹, A, A⁻¹B)`.
    fn flip_last(&self) -> BasicTriple {
        BasicTriple {
            a: self.b.inverse(),
            b: self.a.clone(),
            c: self.a.inverse().concat(&self.b),
        }
    }

    /// Replace the word in `slot` by the Farey-difference partner, keeping
    /// the other two (possibly permuted in place). The new word lands in the
    /// same slot.
    pub fn flip(&self, slot: usize) -> Result<BasicTriple> {
        let t = match slot {
            0 => self.permute_13().flip_last().permute_13(),
            1 => self.permute_23().flip_last().permute_23(),
            2 => self.flip_last(),
            _ => return Err(GeomError::InvalidCombinatorics("flip slot out of range")),
        };
        BasicTriple::new(t.a, t.b, t.c)
    }
}

impl fmt::Display for BasicTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Node of the superbasis tree.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub triple: FareyTriple,
    pub words: BasicTriple,
    /// Index of the parent node; `None` for the root.
    pub parent: Option<usize>,
    /// Slot flipped to reach this node from its parent (0 for the root).
    pub slot: usize,
    pub depth: usize,
}

/// Breadth-first closed ball of radius `depth` in the superbasis tree around
/// the base triple. Node count is `1 + 3(2^depth − 1)`.
pub fn enumerate_tree(depth: usize) -> Result<Vec<TreeNode>> {
    let root = TreeNode {
        triple: FareyTriple::base(),
        words: BasicTriple::base(),
        parent: None,
        slot: 0,
        depth: 0,
    };
    debug_assert_eq!(root.words.labels()?, root.triple);
    let mut nodes = alloc::vec![root];
    let mut seen: BTreeSet<[(i64, i64); 3]> = BTreeSet::new();
    seen.insert(nodes[0].triple.unordered_key());
    let mut frontier = alloc::vec![0usize];
    for level in 1..=depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let slots: &[usize] = if nodes[idx].parent.is_none() {
                &[0, 1, 2]
            } else {
                // The flipped word lands in the slot it replaced, so the
                // edge back to the parent reuses that slot.
                match nodes[idx].slot {
                    0 => &[1, 2],
                    1 => &[0, 2],
                    _ => &[0, 1],
                }
            };
            for &slot in slots {
                let words = nodes[idx].words.flip(slot)?;
                let triple = words.labels()?;
                if !seen.insert(triple.unordered_key()) {
                    return Err(GeomError::InvalidCombinatorics("duplicate triple in tree walk"));
                }
                next.push(nodes.len());
                nodes.push(TreeNode {
                    triple,
                    words,
                    parent: Some(idx),
                    slot,
                    depth: level,
                });
            }
        }
        frontier = next;
    }
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(p: i64, q: i64) -> FareyFraction {
        FareyFraction::new(p, q).unwrap()
    }

    #[test]
    fn neighbor_examples() {
        assert!(fr(0, 1).are_neighbors(&fr(1, 0)));
        assert!(fr(1, 2).are_neighbors(&fr(1, 3))); // 1·3 − 2·1 = 1
        assert!(!fr(1, 3).are_neighbors(&fr(2, 3))); // 3 − 6 = −3
    }

    #[test]
    fn children_examples() {
        let (s, d) = farey_children(&fr(0, 1), &fr(1, 0)).unwrap();
        assert_eq!(s, fr(1, 1));
        assert_eq!(d, fr(-1, 1));
        let (s, d) = farey_children(&fr(1, 1), &fr(1, 0)).unwrap();
        assert_eq!(s, fr(2, 1));
        assert_eq!(d, fr(0, 1));
        let (s, d) = farey_children(&fr(1, 2), &fr(1, 3)).unwrap();
        assert_eq!(s, fr(2, 5));
        assert_eq!(d, fr(0, 1));
        assert!(farey_children(&fr(1, 3), &fr(2, 3)).is_err());
    }

    #[test]
    fn mod2_classes() {
        assert_eq!(fr(1, 0).mod2_class(), Mod2Class::Infinity);
        assert_eq!(fr(0, 1).mod2_class(), Mod2Class::Zero);
        assert_eq!(fr(3, 5).mod2_class(), Mod2Class::One);
        assert_eq!(fr(-1, 1).mod2_class(), Mod2Class::One);
    }

    #[test]
    fn canonical_order_examples() {
        let t = FareyTriple::new([fr(0, 1), fr(1, 0), fr(1, 1)]).unwrap();
        assert_eq!(
            t.canonical_order().fractions(),
            &[fr(1, 0), fr(0, 1), fr(1, 1)]
        );
        let t = FareyTriple::new([fr(1, 1), fr(1, 2), fr(2, 3)]).unwrap();
        assert_eq!(
            t.canonical_order().fractions(),
            &[fr(1, 2), fr(2, 3), fr(1, 1)]
        );
        let c = t.canonical_order();
        assert_eq!(c.canonical_order(), c);
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(intersection_number(&fr(0, 1), &fr(1, 0)), 1);
        assert_eq!(intersection_number(&fr(1, 2), &fr(3, 5)), 1);
        assert_eq!(intersection_number(&fr(1, 3), &fr(2, 3)), 3);
    }

    #[test]
    fn word_arithmetic() {
        let a = F2Word::gen_a();
        let b = F2Word::gen_b();
        let comm = a
            .concat(&b)
            .concat(&a.inverse())
            .concat(&b.inverse());
        assert_eq!(comm.abelianize(), (0, 0));
        assert_eq!(F2Word::parse("aab").unwrap().abelianize(), (2, 1));
        assert_eq!(F2Word::empty().abelianize(), (0, 0));
        assert!(a.concat(&a.inverse()).is_empty());
        assert_eq!(F2Word::parse("abAB").unwrap().len(), 4);
        assert_eq!(alloc::format!("{}", comm), "abAB");
    }

    #[test]
    fn flip_fixture() {
        let base = BasicTriple::base();
        let flipped = base.flip(2).unwrap();
        assert_eq!(alloc::format!("{}", flipped), "(B, a, Ab)");
        // Abelianization of any valid triple sums to zero.
        for t in [&base, &flipped] {
            let (a1, a2) = t.a.abelianize();
            let (b1, b2) = t.b.abelianize();
            let (c1, c2) = t.c.abelianize();
            assert_eq!((a1 + b1 + c1, a2 + b2 + c2), (0, 0));
        }
        // Double flip restores the unordered label set.
        let back = flipped.flip(2).unwrap();
        assert_eq!(
            back.labels().unwrap().unordered_key(),
            base.labels().unwrap().unordered_key()
        );
    }

    #[test]
    fn flips_act_on_labels_as_farey_moves() {
        let base = BasicTriple::base();
        for slot in 0..3 {
            let child = base.flip(slot).unwrap();
            let before = base.labels().unwrap();
            let after = child.labels().unwrap();
            // The kept pair is the two other fractions.
            let keep: BTreeSet<_> = before
                .fractions()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != slot)
                .map(|(_, f)| (f.p(), f.q()))
                .collect();
            let now: BTreeSet<_> = after
                .fractions()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != slot)
                .map(|(_, f)| (f.p(), f.q()))
                .collect();
            assert_eq!(keep, now, "slot {slot} did not keep the other fractions");
            // The replaced fraction becomes the Farey difference partner.
            let kept: Vec<_> = before
                .fractions()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != slot)
                .map(|(_, f)| *f)
                .collect();
            let (sum, diff) = farey_children(&kept[0], &kept[1]).unwrap();
            let old = before.fractions()[slot];
            let new = after.fractions()[slot];
            if old == sum {
                assert_eq!(new, diff);
            } else {
                assert_eq!(old, diff);
                assert_eq!(new, sum);
            }
        }
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_tree(0).unwrap().len(), 1);
        assert_eq!(enumerate_tree(2).unwrap().len(), 10);
        assert_eq!(enumerate_tree(5).unwrap().len(), 1 + 3 * (32 - 1));
    }

    #[test]
    fn tree_adjacent_nodes_share_two_fractions() {
        let nodes = enumerate_tree(4).unwrap();
        for n in nodes.iter().skip(1) {
            let parent = &nodes[n.parent.unwrap()];
            let a: BTreeSet<_> = n.triple.unordered_key().into_iter().collect();
            let b: BTreeSet<_> = parent.triple.unordered_key().into_iter().collect();
            assert_eq!(a.intersection(&b).count(), 2);
        }
    }

    #[test]
    fn flip_is_an_involution_on_labels_everywhere() {
        for node in enumerate_tree(3).unwrap() {
            for slot in 0..3 {
                let back = node.words.flip(slot).unwrap().flip(slot).unwrap();
                assert_eq!(
                    back.labels().unwrap().unordered_key(),
                    node.triple.unordered_key()
                );
            }
        }
    }

    #[test]
    fn tree_labels_match_word_abelianizations() {
        for n in enumerate_tree(6).unwrap() {
            assert_eq!(n.words.labels().unwrap(), n.triple);
            let classes = n.triple.mod2_classes();
            assert!(classes[0] != classes[1] && classes[1] != classes[2] && classes[0] != classes[2]);
        }
    }
}
