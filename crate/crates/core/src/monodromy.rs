//! Branched covers of the line through permutation monodromy, towers of
//! double covers and the bigonal construction.
//!
//! Sheets are `0..d` internally and `1..=d` in cycle notation. The
//! monodromy product is taken left to right in branch order and must be the
//! identity.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::PolType;
use crate::rng;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm((0..d).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(Error::InvalidMonodromy(format!("not a permutation: {images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Disjoint cycles on `1..=degree`, e.g. `(13)(24)` or `(1 3)(2 4)`;
    /// `()` is the identity. Single digits may be run together only when
    /// `degree <= 9`.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let err = |m: String| Error::Parse(format!("{s:?}: {m}"));
        let t = s.trim();
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        if t == "()" {
            return Ok(Perm(images));
        }
        if t.is_empty() {
            return Err(err("empty".into()));
        }
        let mut rest = t;
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(err("expected '('".into()));
            };
            let Some(end) = body.find(')') else {
                return Err(err("unclosed cycle".into()));
            };
            let inner = &body[..end];
            rest = body[end + 1..].trim_start();
            let tokens: Vec<&str> = if inner.contains([' ', ',']) {
                inner.split([' ', ',']).filter(|x| !x.is_empty()).collect()
            } else if degree <= 9 {
                inner.char_indices().map(|(i, c)| &inner[i..i + c.len_utf8()]).collect()
            } else {
                vec![inner]
            };
            if tokens.is_empty() {
                return Err(err("empty cycle".into()));
            }
            let mut pts = Vec::with_capacity(tokens.len());
            for tok in tokens {
                let v: usize = tok.parse().map_err(|_| err(format!("bad point {tok:?}")))?;
                if v == 0 || v > degree {
                    return Err(err(format!("point {v} outside 1..{degree}")));
                }
                if used[v - 1] {
                    return Err(err(format!("point {v} repeated")));
                }
                used[v - 1] = true;
                pts.push(v - 1);
            }
            for k in 0..pts.len() {
                images[pts[k]] = pts[(k + 1) % pts.len()];
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `c^{-1} self c`, relabelling sheets along `c`.
    pub fn conjugate_by(&self, c: &Perm) -> Perm {
        c.inverse().then(self).then(c)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// All cycles including fixed points, each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().len()
    }

    /// Contribution `d - #cycles` to the branch divisor.
    pub fn ramification(&self) -> usize {
        self.degree() - self.num_cycles()
    }

    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..d).collect();
        permute(&mut cur, 0, &mut out);
        out.sort();
        out
    }
}

fn permute(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k == cur.len() {
        out.push(Perm(cur.clone()));
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permute(cur, k + 1, out);
        cur.swap(k, i);
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.degree() <= 9 { "" } else { " " };
        let mut any = false;
        for c in self.cycles().iter().filter(|c| c.len() > 1) {
            any = true;
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    pub label: String,
    pub perm: Perm,
}

impl BranchPoint {
    pub fn new(label: &str, perm: Perm) -> Self {
        BranchPoint { label: label.into(), perm }
    }
}

fn product(points: &[BranchPoint], d: usize) -> Perm {
    points.iter().fold(Perm::identity(d), |acc, b| acc.then(&b.perm))
}

fn is_transitive(perms: impl Iterator<Item = Perm> + Clone, d: usize) -> bool {
    if d == 0 {
        return false;
    }
    let mut reached = vec![false; d];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for p in perms.clone() {
            let y = p.apply(x);
            if !reached[y] {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

fn check_labels(points: &[BranchPoint]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for b in points {
        if b.label.is_empty() || !seen.insert(b.label.as_str()) {
            return Err(Error::InvalidMonodromy(format!("duplicate or empty label {:?}", b.label)));
        }
    }
    Ok(())
}

/// A connected cover of the line of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedCover {
    degree: usize,
    branch: Vec<BranchPoint>,
}

impl BranchedCover {
    pub fn new(degree: usize, branch: Vec<BranchPoint>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidMonodromy("degree 0".into()));
        }
        if let Some(b) = branch.iter().find(|b| b.perm.degree() != degree) {
            return Err(Error::InvalidMonodromy(format!("{} acts on {} sheets, expected {degree}", b.label, b.perm.degree())));
        }
        check_labels(&branch)?;
        if !product(&branch, degree).is_identity() {
            return Err(Error::InvalidMonodromy("product of the monodromy is not the identity".into()));
        }
        if !is_transitive(branch.iter().map(|b| b.perm.clone()), degree) {
            return Err(Error::InvalidMonodromy("monodromy is not transitive (disconnected cover)".into()));
        }
        Ok(BranchedCover { degree, branch })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn branch(&self) -> &[BranchPoint] {
        &self.branch
    }

    /// Degree of the ramification divisor, `Σ (d - #cycles)`.
    pub fn ramification_degree(&self) -> usize {
        self.branch.iter().map(|b| b.perm.ramification()).sum()
    }

    /// Riemann–Hurwitz over the line: `2g - 2 = -2d + deg R`.
    pub fn genus(&self) -> Result<usize> {
        let two_g = self.ramification_degree() as i64 - 2 * self.degree as i64 + 2;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(Error::NegativeGenus);
        }
        Ok((two_g / 2) as usize)
    }
}

/// How a degree-4 permutation meets the block system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalType {
    Unramified,
    /// Swaps the blocks as an involution: `φ` branches, `π` does not.
    Phi,
    /// A transposition inside one block: `π` branches, `φ` does not.
    Pi,
    /// Block preserving but both `φ` and `π` are involved.
    Mixed,
    BlockBreaking,
}

/// A degree-4 cover `D → P^1` factoring through `C → P^1` via a block
/// system of two blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerOf2Covers {
    branch: Vec<BranchPoint>,
    blocks: [[usize; 2]; 2],
}

pub const DEFAULT_BLOCKS: [[usize; 2]; 2] = [[0, 1], [2, 3]];

fn normalize_blocks(blocks: [[usize; 2]; 2]) -> Result<[[usize; 2]; 2]> {
    let mut b = blocks;
    for blk in b.iter_mut() {
        blk.sort();
    }
    b.sort();
    let mut all: Vec<usize> = b.iter().flatten().copied().collect();
    all.sort();
    if all != [0, 1, 2, 3] {
        return Err(Error::InvalidMonodromy(format!("blocks must partition 1..4, got {blocks:?}")));
    }
    Ok(b)
}

impl TowerOf2Covers {
    /// Unvalidated tower data; see [`validate_tower`].
    pub fn new(branch: Vec<BranchPoint>, blocks: [[usize; 2]; 2]) -> Result<Self> {
        if let Some(b) = branch.iter().find(|b| b.perm.degree() != 4) {
            return Err(Error::InvalidMonodromy(format!("{} must act on 4 sheets", b.label)));
        }
        check_labels(&branch)?;
        Ok(TowerOf2Covers { branch, blocks: normalize_blocks(blocks)? })
    }

    pub fn branch(&self) -> &[BranchPoint] {
        &self.branch
    }

    pub fn blocks(&self) -> [[usize; 2]; 2] {
        self.blocks
    }

    fn block_of(&self, x: usize) -> usize {
        usize::from(!self.blocks[0].contains(&x))
    }

    /// The involution of `D` over `C`: swap inside each block.
    pub fn iota(&self) -> Perm {
        let mut im = vec![0; 4];
        for [a, b] in self.blocks {
            im[a] = b;
            im[b] = a;
        }
        Perm(im)
    }

    pub fn preserves_blocks(&self, p: &Perm) -> bool {
        let t0 = self.block_of(p.apply(self.blocks[0][0]));
        t0 == self.block_of(p.apply(self.blocks[0][1]))
            && self.block_of(p.apply(self.blocks[1][0])) == self.block_of(p.apply(self.blocks[1][1]))
    }

    /// Permutation induced on the two blocks.
    pub fn block_action(&self, p: &Perm) -> Perm {
        let t = self.block_of(p.apply(self.blocks[0][0]));
        if t == 0 {
            Perm::identity(2)
        } else {
            Perm(vec![1, 0])
        }
    }

    pub fn local_type(&self, p: &Perm) -> LocalType {
        if !self.preserves_blocks(p) {
            return LocalType::BlockBreaking;
        }
        if p.is_identity() {
            return LocalType::Unramified;
        }
        let swaps = !self.block_action(p).is_identity();
        let involution = p.then(p).is_identity();
        let ram = p.ramification();
        match (swaps, involution, ram) {
            (true, true, 2) => LocalType::Phi,
            (false, true, 1) => LocalType::Pi,
            _ => LocalType::Mixed,
        }
    }

    /// `D → P^1`.
    pub fn top(&self) -> Result<BranchedCover> {
        BranchedCover::new(4, self.branch.clone())
    }

    /// `C → P^1`.
    pub fn base(&self) -> Result<BranchedCover> {
        let pts = self.branch.iter().map(|b| BranchPoint::new(&b.label, self.block_action(&b.perm))).collect();
        BranchedCover::new(2, pts)
    }

    /// Degree of the ramification of `D → C`: `Σ (ℓ/ℓ_0 - 1)` over cycles of
    /// length `ℓ` lying over block cycles of length `ℓ_0`.
    pub fn relative_ramification_degree(&self) -> usize {
        let mut total = 0;
        for b in &self.branch {
            let blocks = self.block_action(&b.perm);
            for c in b.perm.cycles() {
                let l0 = blocks.cycles().into_iter().find(|bc| bc.contains(&self.block_of(c[0]))).map_or(1, |bc| bc.len());
                total += c.len() / l0 - 1;
            }
        }
        total
    }

    /// Relabel sheets along `c` (blocks move with the sheets).
    pub fn conjugate_by(&self, c: &Perm) -> TowerOf2Covers {
        let branch = self.branch.iter().map(|b| BranchPoint::new(&b.label, b.perm.conjugate_by(c))).collect();
        let blocks = self.blocks.map(|blk| blk.map(|x| c.apply(x)));
        TowerOf2Covers { branch, blocks: normalize_blocks(blocks).expect("image of a partition") }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub product_identity: bool,
    pub blocks_preserved: bool,
    pub top_transitive: bool,
    pub base_transitive: bool,
    pub generic: bool,
    pub phi_points: Vec<String>,
    pub pi_points: Vec<String>,
    pub issues: Vec<String>,
}

impl TowerReport {
    pub fn valid(&self) -> bool {
        self.product_identity && self.blocks_preserved && self.top_transitive && self.base_transitive && self.generic
    }
}

pub fn validate_tower(t: &TowerOf2Covers) -> TowerReport {
    let mut issues = Vec::new();
    let product_identity = product(&t.branch, 4).is_identity();
    if !product_identity {
        issues.push("InvalidMonodromy: product is not the identity".into());
    }
    let mut blocks_preserved = true;
    let mut generic = true;
    let (mut phi, mut pi) = (Vec::new(), Vec::new());
    for b in &t.branch {
        match t.local_type(&b.perm) {
            LocalType::Phi => phi.push(b.label.clone()),
            LocalType::Pi => pi.push(b.label.clone()),
            LocalType::BlockBreaking => {
                blocks_preserved = false;
                issues.push(format!("NoBlockSystem: {} = {} breaks the blocks", b.label, b.perm));
            }
            LocalType::Mixed => {
                generic = false;
                issues.push(format!("NotGeneric: {} = {} mixes branching of both levels", b.label, b.perm));
            }
            LocalType::Unramified => {
                generic = false;
                issues.push(format!("NotGeneric: {} is not a branch point", b.label));
            }
        }
    }
    let top_transitive = is_transitive(t.branch.iter().map(|b| b.perm.clone()), 4);
    if !top_transitive {
        issues.push("InvalidMonodromy: D is disconnected".into());
    }
    let base_transitive = is_transitive(t.branch.iter().map(|b| t.block_action(&b.perm)), 2);
    if !base_transitive {
        issues.push("InvalidMonodromy: C is disconnected".into());
    }
    TowerReport { product_identity, blocks_preserved, top_transitive, base_transitive, generic, phi_points: phi, pi_points: pi, issues }
}

fn require_valid(t: &TowerOf2Covers) -> Result<TowerReport> {
    let rep = validate_tower(t);
    if !rep.blocks_preserved || !rep.product_identity || !rep.top_transitive || !rep.base_transitive {
        return Err(Error::InvalidMonodromy(rep.issues.join("; ")));
    }
    if !rep.generic {
        return Err(Error::NotGeneric(rep.issues.join("; ")));
    }
    Ok(rep)
}

/// Transversals `{a,c}, {a,d}, {b,c}, {b,d}` for blocks `{a<b}, {c<d}`,
/// labelled 1..4 in that order.
pub fn transversals(blocks: [[usize; 2]; 2]) -> [[usize; 2]; 4] {
    let [[a, b], [c, d]] = blocks;
    [[a, c], [a, d], [b, c], [b, d]]
}

/// The bigonal tower `Γ → Γ_0 → P^1`: each branch permutation acts on the
/// four sections by image sets. `Γ_0` is given by the orbits of `ι̃`.
pub fn bigonal(t: &TowerOf2Covers) -> Result<TowerOf2Covers> {
    require_valid(t)?;
    let ts = transversals(t.blocks);
    let index = |pair: [usize; 2]| {
        let mut s = pair;
        s.sort();
        ts.iter().position(|x| {
            let mut y = *x;
            y.sort();
            y == s
        })
    };
    let mut branch = Vec::with_capacity(t.branch.len());
    for b in &t.branch {
        let im = ts
            .iter()
            .map(|&[x, y]| index([b.perm.apply(x), b.perm.apply(y)]).expect("block preserving"))
            .collect();
        branch.push(BranchPoint::new(&b.label, Perm::from_images(im)?));
    }
    // ι̃ pairs {a,c}↔{b,d} and {a,d}↔{b,c}
    TowerOf2Covers::new(branch, [[0, 3], [1, 2]])
}

/// A sheet relabelling `c` with `t.conjugate_by(c)` having the same
/// monodromy as `u`, found by search over all 24 candidates.
pub fn find_conjugator(t: &TowerOf2Covers, u: &TowerOf2Covers) -> Option<Perm> {
    if t.branch.len() != u.branch.len() || t.branch.iter().zip(&u.branch).any(|(a, b)| a.label != b.label) {
        return None;
    }
    Perm::all(4).into_iter().find(|c| {
        t.branch.iter().zip(&u.branch).all(|(a, b)| a.perm.conjugate_by(c) == b.perm)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerGenera {
    pub top: usize,
    pub base: usize,
    /// `deg R` of the top curve over the line.
    pub ramification: usize,
    /// Ramification of the top curve over the base curve.
    pub relative_ramification: usize,
}

pub fn tower_genera(t: &TowerOf2Covers) -> Result<TowerGenera> {
    let top = t.top()?;
    let base = t.base()?;
    Ok(TowerGenera {
        top: top.genus()?,
        base: base.genus()?,
        ramification: top.ramification_degree(),
        relative_ramification: t.relative_ramification_degree(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymNumerics {
    pub dimension: usize,
    pub pol_type: PolType,
}

/// Dimension `g - 1 + r/2` and type `1^{r/2-1} 2^g` for a double cover of a
/// genus-`g` curve branched at `r` points.
pub fn prym_numerics(g: usize, r: usize) -> Result<PrymNumerics> {
    if r == 0 {
        return Err(Error::UnbranchedCover);
    }
    if r % 2 == 1 {
        return Err(Error::OddBranchCount(r));
    }
    let dimension = g + r / 2 - 1;
    if dimension == 0 {
        return Err(Error::InvalidGenus);
    }
    let mut d = vec![1u64; r / 2 - 1];
    d.extend(core::iter::repeat_n(2, g));
    Ok(PrymNumerics { dimension, pol_type: PolType::from_u64(&d)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrymDuality {
    pub original: PrymNumerics,
    pub bigonal: PrymNumerics,
    pub dual_of_original: PolType,
    pub dimensions_agree: bool,
    pub types_dual: bool,
}

impl PrymDuality {
    pub fn pass(&self) -> bool {
        self.dimensions_agree && self.types_dual
    }
}

pub fn tower_prym(t: &TowerOf2Covers) -> Result<PrymNumerics> {
    let g = tower_genera(t)?;
    prym_numerics(g.base, g.relative_ramification)
}

/// Prym numerics of a tower and of its bigonal image, and whether the two
/// types are dual.
pub fn prym_duality_check(t: &TowerOf2Covers) -> Result<PrymDuality> {
    let b = bigonal(t)?;
    let original = tower_prym(t)?;
    let other = tower_prym(&b)?;
    let dual = original.pol_type.dual()?;
    Ok(PrymDuality {
        dimensions_agree: original.dimension == other.dimension,
        types_dual: dual == other.pol_type,
        dual_of_original: dual,
        original,
        bigonal: other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliDimensions {
    pub prym_dimension: usize,
    pub siegel: usize,
    pub double_covers: usize,
    pub jacobian_locus: usize,
    pub prym_locus_is_divisor: bool,
    pub jacobian_locus_is_divisor: bool,
}

/// Dimensions of `A_g` (for the Prym dimension `g = g_C - 1 + r/2`), of the
/// space of double covers of genus-`g_C` curves branched at `r` points, and
/// of the Jacobian locus in `A_g`.
pub fn moduli_dimensions(g_c: usize, r: usize) -> Result<ModuliDimensions> {
    let g = prym_numerics(g_c, r)?.dimension;
    let siegel = g * (g + 1) / 2;
    let double_covers = (3 * g_c + r).saturating_sub(3);
    let jacobian_locus = (3 * g).saturating_sub(3);
    Ok(ModuliDimensions {
        prym_dimension: g,
        siegel,
        double_covers,
        jacobian_locus,
        prym_locus_is_divisor: siegel == double_covers + 1,
        jacobian_locus_is_divisor: siegel == jacobian_locus + 1,
    })
}

fn perm4(s: &str) -> Perm {
    Perm::parse(s, 4).expect("static cycle")
}

/// Six block-swapping points `w1..w6` then six `π`-points `b1..b6`.
/// `pi_sheets[i]` selects `(12)` (false) or `(34)` (true) at `b_{i+1}`.
pub fn reference_tower_with(pi_sheets: [bool; 6]) -> TowerOf2Covers {
    let mut branch: Vec<BranchPoint> = (1..=6).map(|i| BranchPoint::new(&format!("w{i}"), perm4("(13)(24)"))).collect();
    for (i, &upper) in pi_sheets.iter().enumerate() {
        branch.push(BranchPoint::new(&format!("b{}", i + 1), perm4(if upper { "(34)" } else { "(12)" })));
    }
    TowerOf2Covers::new(branch, DEFAULT_BLOCKS).expect("degree 4")
}

pub fn reference_tower() -> TowerOf2Covers {
    reference_tower_with([false; 6])
}

/// A random valid generic tower with `2 g_c + 2` block-swapping points and
/// `r` in-block transpositions, in random order.
pub fn random_generic_tower(g_c: usize, r: usize, seed: u64) -> Result<TowerOf2Covers> {
    if r == 0 {
        return Err(Error::UnbranchedCover);
    }
    if r % 2 == 1 {
        return Err(Error::OddBranchCount(r));
    }
    let phis = [perm4("(13)(24)"), perm4("(14)(23)")];
    let pis = [perm4("(12)"), perm4("(34)")];
    let mut rng = rng::seeded(seed);
    let mut kinds: Vec<bool> = core::iter::repeat_n(true, 2 * g_c + 2).chain(core::iter::repeat_n(false, r)).collect();
    loop {
        kinds.shuffle(&mut rng);
        let (mut nw, mut nb) = (0, 0);
        let branch: Vec<BranchPoint> = kinds
            .iter()
            .map(|&phi| {
                let pick = rng.gen_range(0..2);
                if phi {
                    nw += 1;
                    BranchPoint::new(&format!("w{nw}"), phis[pick].clone())
                } else {
                    nb += 1;
                    BranchPoint::new(&format!("b{nb}"), pis[pick].clone())
                }
            })
            .collect();
        let t = TowerOf2Covers::new(branch, DEFAULT_BLOCKS)?;
        if validate_tower(&t).valid() {
            return Ok(t);
        }
    }
}
