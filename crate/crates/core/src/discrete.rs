//! Finite truncations `Z_t` of the discrete series `A_b(λ)` of `SO_e(4,1)`.
//!
//! The `K`-types are `(n, m) = (m0 + l + k, n0 − l + k)` with `k ≥ 0` and
//! `0 ≤ l ≤ n0`, indexed by the lattice position `(k, l)` at level `k + l`.
//! Each K-type has basis `F1^i F2^j · v` for its highest weight vector `v`.
//!
//! The `p`-action on `v` is a sum over the four neighbouring K-types
//! `(n±1, m±1)`. Each neighbour contributes an edge scalar times a fixed
//! template vector, and the template is the unique solution of the
//! `k`-equivariance conditions. Edge scalars are found by imposing the
//! bracket relations level by level, in the gauge where every `(n+1, m+1)`
//! edge and the `(n+1, m−1)` edges at `k = 0` equal one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kmod::{act_k_basis, KRep, KTypeLabel};
use crate::lie::{basis_bracket, Basis};
use crate::linalg::{
    fmt_scalar, kernel_basis, parse_scalar, q, qf, rank_grouped, solve_linear, LinalgError,
    Scalar, SparseMatrix, SparseVec,
};
use crate::pbw::{self, UEnvElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscreteError {
    #[error("λ1 ≥ λ2 ≥ 0 required (got λ = ({0}, {1}))")]
    Inadmissible(i64, i64),
    #[error("cannot parse λ from {0:?}; expected integers L1,L2 with λ1 ≥ λ2 ≥ 0 required")]
    BadLambda(String),
    #[error("template for {ktype} in direction {dir} has kernel dimension {dim}")]
    Template {
        ktype: KTypeLabel,
        dir: Dir,
        dim: usize,
    },
    #[error("inconsistent transition-scalar system at stage {stage}")]
    Inconsistent { stage: u32 },
    #[error("underdetermined transition-scalar system at stage {stage}: {free} free parameters")]
    Underdetermined { stage: u32, free: usize },
    #[error("p-action requested on basis vector {index} outside the defined range")]
    LevelOverflow { index: usize },
    #[error("rank deficiency: rank {rank} of {expected} (gap {})", expected - rank)]
    RankDeficiency { rank: usize, expected: usize },
    #[error("malformed module record: {0}")]
    Record(String),
    #[error("Casimir does not act by a scalar")]
    NotScalar,
    #[error("identity failure: {0}")]
    IdentityFailure(String),
}

/// A highest weight `λ = (λ1, λ2)` with `λ1 ≥ λ2 ≥ 0` integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LambdaParam {
    pub l1: i64,
    pub l2: i64,
}

impl LambdaParam {
    pub fn new(l1: i64, l2: i64) -> Result<Self, DiscreteError> {
        if l1 >= l2 && l2 >= 0 {
            Ok(Self { l1, l2 })
        } else {
            Err(DiscreteError::Inadmissible(l1, l2))
        }
    }

    /// `λ1 + λ2 + 2`.
    pub fn m0(&self) -> u32 {
        (self.l1 + self.l2 + 2) as u32
    }

    /// `λ1 − λ2`.
    pub fn n0(&self) -> u32 {
        (self.l1 - self.l2) as u32
    }

    pub fn lowest_ktype(&self) -> KTypeLabel {
        KTypeLabel::new(self.m0(), self.n0())
    }

    pub fn label(&self, pos: KPos) -> KTypeLabel {
        KTypeLabel::new(self.m0() + pos.l + pos.k, self.n0() - pos.l + pos.k)
    }
}

impl FromStr for LambdaParam {
    type Err = DiscreteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DiscreteError::BadLambda(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let l1 = a.trim().parse().map_err(|_| bad())?;
        let l2 = b.trim().parse().map_err(|_| bad())?;
        Self::new(l1, l2)
    }
}

impl fmt::Display for LambdaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.l1, self.l2)
    }
}

/// Position `(k, l)` in the K-type lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KPos {
    pub k: u32,
    pub l: u32,
}

impl KPos {
    pub fn new(k: u32, l: u32) -> Self {
        Self { k, l }
    }

    pub fn level(&self) -> u32 {
        self.k + self.l
    }
}

/// The K-types of `Z_t`, ordered by level and then by `l`.
pub fn ktypes(lambda: LambdaParam, t: u32) -> Vec<KPos> {
    let mut out = Vec::new();
    for r in 0..=t {
        for l in 0..=r.min(lambda.n0()) {
            out.push(KPos::new(r - l, l));
        }
    }
    out
}

/// `(1/6)(n0+1)(3m0+2t+3)(t²+3t+2)`.
pub fn closed_form_dim(m0: u64, n0: u64, t: u64) -> u64 {
    (n0 + 1) * (3 * m0 + 2 * t + 3) * (t * t + 3 * t + 2) / 6
}

/// `Σ_{l=0}^{n0} Σ_{k=0}^{t−l} (m0+k+l+1)(n0+k−l+1)`, the size of `S_t`.
pub fn s_t_cardinality(m0: u64, n0: u64, t: u64) -> u64 {
    let mut total = 0;
    for l in 0..=n0.min(t) {
        for k in 0..=t - l {
            total += (m0 + k + l + 1) * (n0 + k - l + 1);
        }
    }
    total
}

/// Direction of a `p`-transition, as the shift of `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    PP,
    PM,
    MP,
    MM,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::PP, Dir::PM, Dir::MP, Dir::MM];

    pub fn shift(self) -> (i64, i64) {
        match self {
            Dir::PP => (1, 1),
            Dir::PM => (1, -1),
            Dir::MP => (-1, 1),
            Dir::MM => (-1, -1),
        }
    }

    pub fn is_up(self) -> bool {
        matches!(self, Dir::PP | Dir::PM)
    }

    /// The `p`-vector whose template coefficient is normalized to one.
    pub fn distinguished(self) -> Basis {
        match self {
            Dir::PP => Basis::E3,
            Dir::PM => Basis::E4,
            Dir::MP => Basis::F4,
            Dir::MM => Basis::F3,
        }
    }

    /// Target lattice position, if it belongs to `Γ`.
    pub fn target(self, pos: KPos, n0: u32) -> Option<KPos> {
        match self {
            Dir::PP => Some(KPos::new(pos.k + 1, pos.l)),
            Dir::PM => (pos.l < n0).then(|| KPos::new(pos.k, pos.l + 1)),
            Dir::MP => (pos.l > 0).then(|| KPos::new(pos.k, pos.l - 1)),
            Dir::MM => (pos.k > 0).then(|| KPos::new(pos.k - 1, pos.l)),
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.shift();
        let s = |x: i64| if x > 0 { "+1" } else { "-1" };
        write!(f, "(n{}, m{})", s(a), s(b))
    }
}

/// For each `x ∈ p` (in the order `E3, E4, F3, F4`), the coefficient `c` and
/// coordinates `(i, j)` with `x·v ↦ c F1^i F2^j v'` in the target K-type.
pub type Template = [Option<(Scalar, u32, u32)>; 4];

fn p_slot(x: Basis) -> usize {
    x.index()
}

/// Coordinates of the weight `hw(source) + wt(x)` in `target`, if present.
fn slot_coords(source: KTypeLabel, target: KTypeLabel, x: Basis) -> Option<(u32, u32)> {
    let (wa, wb) = x.ktype_weight();
    let di = target.n as i64 - source.n as i64 - wa;
    let dj = target.m as i64 - source.m as i64 - wb;
    if di % 2 != 0 || dj % 2 != 0 {
        return None;
    }
    let (i, j) = (di / 2, dj / 2);
    (0..=target.n as i64)
        .contains(&i)
        .then_some(())
        .and((0..=target.m as i64).contains(&j).then_some((i as u32, j as u32)))
}

fn shifted(label: KTypeLabel, dir: Dir) -> Option<KTypeLabel> {
    let (a, b) = dir.shift();
    let n = label.n as i64 + a;
    let m = label.m as i64 + b;
    (n >= 0 && m >= 0).then(|| KTypeLabel::new(n as u32, m as u32))
}

/// Solves `E·(x·v) = [E, x]·v` for `E ∈ {E1, E2}` within the target K-type.
pub fn template(source: KTypeLabel, dir: Dir) -> Result<Template, DiscreteError> {
    let err = |dim| DiscreteError::Template { ktype: source, dir, dim };
    let target = shifted(source, dir).ok_or_else(|| err(0))?;
    let slots: Vec<Option<(u32, u32)>> = Basis::P
        .iter()
        .map(|&x| slot_coords(source, target, x))
        .collect();
    let unknown: Vec<usize> = (0..4).filter(|&s| slots[s].is_some()).collect();
    let col_of = |s: usize| unknown.iter().position(|&u| u == s);

    let mut rows: BTreeMap<(usize, usize, u32, u32), usize> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut push = |key, col: usize, c: Scalar, entries: &mut Vec<(usize, usize, Scalar)>| {
        let n = rows.len();
        let r = *rows.entry(key).or_insert(n);
        entries.push((r, col, c));
    };
    for (ei, e) in [Basis::E1, Basis::E2].into_iter().enumerate() {
        for &x in &Basis::P {
            let xs = p_slot(x);
            if let (Some((i, j)), Some(col)) = (slots[xs], col_of(xs)) {
                for (c, i2, j2) in act_k_basis(e, target, i, j) {
                    push((ei, xs, i2, j2), col, c, &mut entries);
                }
            }
            for (&y, c) in basis_bracket(e, x) {
                let ys = p_slot(y);
                if let (Some((i, j)), Some(col)) = (slots[ys], col_of(ys)) {
                    push((ei, xs, i, j), col, -c.clone(), &mut entries);
                }
            }
        }
    }
    let mut m = SparseMatrix::zeros(rows.len().max(1), unknown.len());
    for (r, c, v) in entries {
        m.set(r, c, v);
    }
    let kernel = kernel_basis(&m);
    if kernel.len() != 1 {
        return Err(err(kernel.len()));
    }
    let v = &kernel[0];
    let norm = col_of(p_slot(dir.distinguished()))
        .map(|c| v[c].clone())
        .filter(|c| !c.is_zero())
        .ok_or_else(|| err(1))?;
    let mut out: Template = Default::default();
    for (col, &s) in unknown.iter().enumerate() {
        let c = &v[col] / &norm;
        if !c.is_zero() {
            let (i, j) = slots[s].expect("slot");
            out[s] = Some((c, i, j));
        }
    }
    Ok(out)
}

pub type Edge = (KPos, Dir);

/// Scalar-independent data of `Z_t`: basis layout and templates.
#[derive(Debug, Clone)]
struct Skeleton {
    lambda: LambdaParam,
    level: u32,
    positions: Vec<KPos>,
    labels: Vec<KTypeLabel>,
    offsets: Vec<usize>,
    pos_index: BTreeMap<KPos, usize>,
    coords: Vec<(usize, u32, u32)>,
    templates: BTreeMap<Edge, Template>,
    /// Number of basis vectors on levels `≤ t−1`, where the `p`-action is defined.
    p_dim: usize,
    /// `parts[idx][x][dir]`: contribution of edge `dir` of the K-type of
    /// `idx` to `x·e_idx`, before multiplying by the edge scalar.
    parts: Vec<[[SparseVec; 4]; 4]>,
}

impl Skeleton {
    fn new(lambda: LambdaParam, level: u32) -> Result<Self, DiscreteError> {
        let positions = ktypes(lambda, level);
        let labels: Vec<KTypeLabel> = positions.iter().map(|&p| lambda.label(p)).collect();
        let mut offsets = Vec::with_capacity(positions.len());
        let mut coords = Vec::new();
        let mut p_dim = 0;
        for (ki, (pos, label)) in positions.iter().zip(&labels).enumerate() {
            offsets.push(coords.len());
            for idx in 0..label.dim() {
                let (i, j) = label.coords(idx);
                coords.push((ki, i, j));
            }
            if pos.level() < level {
                p_dim = coords.len();
            }
        }
        let pos_index = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut sk = Self {
            lambda,
            level,
            positions,
            labels,
            offsets,
            pos_index,
            coords,
            templates: BTreeMap::new(),
            p_dim,
            parts: Vec::new(),
        };
        let mut cache: BTreeMap<(KTypeLabel, Dir), Template> = BTreeMap::new();
        for (ki, &pos) in sk.positions.iter().enumerate() {
            if pos.level() >= level {
                continue;
            }
            for dir in Dir::ALL {
                if dir.target(pos, lambda.n0()).is_some() {
                    let label = sk.labels[ki];
                    let tpl = match cache.get(&(label, dir)) {
                        Some(t) => t.clone(),
                        None => {
                            let t = template(label, dir)?;
                            cache.insert((label, dir), t.clone());
                            t
                        }
                    };
                    sk.templates.insert((pos, dir), tpl);
                }
            }
        }
        sk.build_parts();
        Ok(sk)
    }

    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn global(&self, pos: KPos, i: u32, j: u32) -> usize {
        let ki = self.pos_index[&pos];
        self.offsets[ki] + self.labels[ki].index(i, j)
    }

    fn k_action(&self, x: Basis, idx: usize) -> SparseVec {
        let (ki, i, j) = self.coords[idx];
        let off = self.offsets[ki];
        let label = self.labels[ki];
        act_k_basis(x, label, i, j)
            .into_iter()
            .map(|(c, i2, j2)| (off + label.index(i2, j2), c))
            .collect()
    }

    fn k_action_vec(&self, x: Basis, v: &SparseVec) -> SparseVec {
        v.map_linear(|&i| self.k_action(x, i))
    }

    fn build_parts(&mut self) {
        let n0 = self.lambda.n0();
        let mut parts: Vec<[[SparseVec; 4]; 4]> = Vec::with_capacity(self.p_dim);
        for idx in 0..self.p_dim {
            let (ki, i, j) = self.coords[idx];
            let pos = self.positions[ki];
            let mut cur: [[SparseVec; 4]; 4] = Default::default();
            if i == 0 && j == 0 {
                for (di, dir) in Dir::ALL.into_iter().enumerate() {
                    let Some(target) = dir.target(pos, n0) else { continue };
                    let tpl = &self.templates[&(pos, dir)];
                    for (xs, slot) in tpl.iter().enumerate() {
                        if let Some((c, ti, tj)) = slot {
                            cur[xs][di] = SparseVec::term(self.global(target, *ti, *tj), c.clone());
                        }
                    }
                }
            } else {
                // x·F u' = F(x·u') + [x, F]·u'
                let (lower, prev) = if i > 0 {
                    (Basis::F1, self.offsets[ki] + self.labels[ki].index(i - 1, j))
                } else {
                    (Basis::F2, self.offsets[ki] + self.labels[ki].index(0, j - 1))
                };
                for &x in &Basis::P {
                    let xs = p_slot(x);
                    for di in 0..4 {
                        let mut v = self.k_action_vec(lower, &parts[prev][xs][di]);
                        for (&y, c) in basis_bracket(x, lower) {
                            v.add_scaled(&parts[prev][p_slot(y)][di], c);
                        }
                        cur[xs][di] = v;
                    }
                }
            }
            parts.push(cur);
        }
        self.parts = parts;
    }

    /// Lattice position of the K-type containing a basis vector.
    fn pos_of(&self, idx: usize) -> KPos {
        self.positions[self.coords[idx].0]
    }
}

/// Gauge-fixed edge scalars: all `(n+1, m+1)` edges and the `(n+1, m−1)`
/// edges at `k = 0`.
fn tree_edges(sk: &Skeleton) -> BTreeMap<Edge, Scalar> {
    sk.templates
        .keys()
        .filter(|(pos, dir)| *dir == Dir::PP || (*dir == Dir::PM && pos.k == 0))
        .map(|&e| (e, Scalar::one()))
        .collect()
}

enum Sym<'a> {
    Known(&'a Scalar),
    Unknown,
    Missing,
}

fn classify<'a>(
    e: &Edge,
    known: &'a BTreeMap<Edge, Scalar>,
    unknown: &BTreeMap<Edge, usize>,
) -> Sym<'a> {
    if let Some(s) = known.get(e) {
        Sym::Known(s)
    } else if unknown.contains_key(e) {
        Sym::Unknown
    } else {
        Sym::Missing
    }
}

/// The bracket residual `x(y v) − y(x v) − [x,y] v` on the highest weight
/// vector of `pos`, as bilinear terms in edge scalars plus a constant, split
/// by the K-type of the result.
type Residual = BTreeMap<KPos, (Vec<(Edge, Edge, SparseVec)>, SparseVec)>;

fn bracket_residual(sk: &Skeleton, pos: KPos, x: Basis, y: Basis) -> Residual {
    let n0 = sk.lambda.n0();
    let h = sk.global(pos, 0, 0);
    let mut out: Residual = BTreeMap::new();
    for (first, second, sign) in [(y, x, q(1)), (x, y, q(-1))] {
        // sign · second(first · v)
        for (d1, dir1) in Dir::ALL.into_iter().enumerate() {
            let Some(t1) = dir1.target(pos, n0) else { continue };
            if t1.level() >= sk.level {
                // only reaches components the solver does not use
                continue;
            }
            let v1 = &sk.parts[h][p_slot(first)][d1];
            for (d2, dir2) in Dir::ALL.into_iter().enumerate() {
                let Some(t2) = dir2.target(t1, n0) else { continue };
                let mut acc = SparseVec::zero();
                for (&u, c) in v1 {
                    acc.add_scaled(&sk.parts[u][p_slot(second)][d2], &(c * &sign));
                }
                if !acc.is_zero() {
                    out.entry(t2)
                        .or_default()
                        .0
                        .push(((pos, dir1), (t1, dir2), acc));
                }
            }
        }
    }
    let mut k_part = SparseVec::zero();
    for (&z, c) in basis_bracket(x, y) {
        k_part.add_scaled(&sk.k_action(z, h), c);
    }
    if !k_part.is_zero() {
        out.entry(pos).or_default().1 -= &k_part;
    }
    out
}

fn solve_stage(
    sk: &Skeleton,
    stage: u32,
    known: &mut BTreeMap<Edge, Scalar>,
) -> Result<usize, DiscreteError> {
    let unknowns: Vec<Edge> = sk
        .templates
        .keys()
        .filter(|(pos, dir)| {
            pos.level() == stage + 1 && (!dir.is_up() || (*dir == Dir::PM && pos.k >= 1))
        })
        .copied()
        .collect();
    if unknowns.is_empty() {
        return Ok(0);
    }
    let unknown_index: BTreeMap<Edge, usize> =
        unknowns.iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let mut rows: Vec<(Vec<(usize, Scalar)>, Scalar)> = Vec::new();
    for &pos in &sk.positions {
        let lvl = pos.level();
        if lvl != stage && lvl != stage + 1 {
            continue;
        }
        for (a, &x) in Basis::P.iter().enumerate() {
            for &y in &Basis::P[a + 1..] {
                for (comp, (terms, constant)) in bracket_residual(sk, pos, x, y) {
                    if lvl == stage + 1 && comp.level() + 2 != lvl {
                        continue;
                    }
                    let mut linear: BTreeMap<usize, SparseVec> = BTreeMap::new();
                    let mut cst = constant;
                    let mut valid = true;
                    for (e1, e2, vec) in &terms {
                        match (
                            classify(e1, known, &unknown_index),
                            classify(e2, known, &unknown_index),
                        ) {
                            (Sym::Known(a), Sym::Known(b)) => cst.add_scaled(vec, &(a * b)),
                            (Sym::Known(a), Sym::Unknown) => linear
                                .entry(unknown_index[e2])
                                .or_default()
                                .add_scaled(vec, a),
                            (Sym::Unknown, Sym::Known(b)) => linear
                                .entry(unknown_index[e1])
                                .or_default()
                                .add_scaled(vec, b),
                            _ => {
                                valid = false;
                                break;
                            }
                        }
                    }
                    if !valid || linear.is_empty() {
                        continue;
                    }
                    let mut coords: BTreeMap<usize, (Vec<(usize, Scalar)>, Scalar)> =
                        BTreeMap::new();
                    for (&u, vec) in &linear {
                        for (&i, c) in vec {
                            coords.entry(i).or_default().0.push((u, c.clone()));
                        }
                    }
                    for (&i, c) in &cst {
                        coords.entry(i).or_default().1 = -c.clone();
                    }
                    rows.extend(coords.into_values());
                }
            }
        }
    }
    let mut m = SparseMatrix::zeros(rows.len().max(1), unknowns.len());
    let mut rhs = vec![Scalar::zero(); rows.len().max(1)];
    for (r, (entries, b)) in rows.into_iter().enumerate() {
        for (c, v) in entries {
            let cur = m.get(r, c);
            m.set(r, c, cur + v);
        }
        rhs[r] = b;
    }
    let sol = solve_linear(&m, &rhs).map_err(|e| match e {
        LinalgError::Inconsistent => DiscreteError::Inconsistent { stage },
        _ => DiscreteError::Inconsistent { stage },
    })?;
    if sol.null_dim > 0 {
        return Err(DiscreteError::Underdetermined {
            stage,
            free: sol.null_dim,
        });
    }
    for (e, v) in unknowns.iter().zip(sol.x) {
        if !v.is_zero() {
            known.insert(*e, v);
        }
    }
    Ok(unknowns.len())
}

/// Per-K-type scalars in the notation of the `p`-action formulas:
/// `E3·v = μ v⁺⁺`, `E4·v = α F2 v⁺⁺ + β v⁺⁻`,
/// `F3·v = γ F1F2 v⁺⁺ + δ F1 v⁺⁻ + ε F2 v⁻⁺ + η v⁻⁻`, `F4·v = ρ v⁻⁺ + ζ F1 v⁺⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionScalars {
    pub pos: KPos,
    pub ktype: KTypeLabel,
    pub mu: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
    pub epsilon: Scalar,
    pub eta: Scalar,
    pub rho: Scalar,
    pub zeta: Scalar,
}

/// Serialized form of one K-type's scalars; values are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRecord {
    pub ktype: [u32; 2],
    pub mu: String,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
    pub epsilon: String,
    pub eta: String,
    pub rho: String,
    pub zeta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub lambda: [i64; 2],
    pub level: u32,
    pub scalars: Vec<ScalarRecord>,
    pub dim: usize,
}

/// An exact truncation `Z_t` with the `g`-action on levels where it is defined.
#[derive(Debug, Clone)]
pub struct ModuleTruncation {
    sk: Skeleton,
    edges: BTreeMap<Edge, Scalar>,
    p_cols: Vec<[SparseVec; 4]>,
}

impl ModuleTruncation {
    fn assemble(sk: Skeleton, edges: BTreeMap<Edge, Scalar>) -> Self {
        let mut p_cols = Vec::with_capacity(sk.p_dim);
        for idx in 0..sk.p_dim {
            let pos = sk.pos_of(idx);
            let mut cols: [SparseVec; 4] = Default::default();
            for (xs, col) in cols.iter_mut().enumerate() {
                for (di, dir) in Dir::ALL.into_iter().enumerate() {
                    if let Some(s) = edges.get(&(pos, dir)) {
                        col.add_scaled(&sk.parts[idx][xs][di], s);
                    }
                }
            }
            p_cols.push(cols);
        }
        Self { sk, edges, p_cols }
    }

    pub fn lambda(&self) -> LambdaParam {
        self.sk.lambda
    }

    pub fn level(&self) -> u32 {
        self.sk.level
    }

    pub fn dim(&self) -> usize {
        self.sk.dim()
    }

    /// Dimension of `Z_r` inside this truncation.
    pub fn dim_up_to(&self, r: u32) -> usize {
        self.sk
            .coords
            .iter()
            .filter(|&&(ki, _, _)| self.sk.positions[ki].level() <= r)
            .count()
    }

    pub fn positions(&self) -> &[KPos] {
        &self.sk.positions
    }

    pub fn label(&self, pos: KPos) -> KTypeLabel {
        self.sk.lambda.label(pos)
    }

    pub fn index(&self, pos: KPos, i: u32, j: u32) -> usize {
        self.sk.global(pos, i, j)
    }

    pub fn hwv(&self, pos: KPos) -> SparseVec {
        SparseVec::basis(self.index(pos, 0, 0))
    }

    /// Lattice position and coordinates `(i, j)` of a basis vector.
    pub fn coords(&self, idx: usize) -> (KPos, u32, u32) {
        let (ki, i, j) = self.sk.coords[idx];
        (self.sk.positions[ki], i, j)
    }

    pub fn level_of(&self, idx: usize) -> u32 {
        self.sk.pos_of(idx).level()
    }

    pub fn edge_scalars(&self) -> &BTreeMap<Edge, Scalar> {
        &self.edges
    }

    pub fn act_basis(&self, x: Basis, idx: usize) -> Result<SparseVec, DiscreteError> {
        if x.is_compact() {
            Ok(self.sk.k_action(x, idx))
        } else if idx < self.sk.p_dim {
            Ok(self.p_cols[idx][p_slot(x)].clone())
        } else {
            Err(DiscreteError::LevelOverflow { index: idx })
        }
    }

    pub fn act(&self, x: Basis, v: &SparseVec) -> Result<SparseVec, DiscreteError> {
        let mut out = SparseVec::zero();
        for (&i, c) in v {
            out.add_scaled(&self.act_basis(x, i)?, c);
        }
        Ok(out)
    }

    /// Applies the letters of `word` right to left.
    pub fn act_word(&self, word: &[Basis], v: &SparseVec) -> Result<SparseVec, DiscreteError> {
        word.iter()
            .rev()
            .try_fold(v.clone(), |acc, &x| self.act(x, &acc))
    }

    pub fn act_u(&self, u: &UEnvElement, v: &SparseVec) -> Result<SparseVec, DiscreteError> {
        let mut out = SparseVec::zero();
        for (m, c) in u {
            out.add_scaled(&self.act_word(&m.letters(), v)?, c);
        }
        Ok(out)
    }

    pub fn transition_scalars(&self) -> Vec<TransitionScalars> {
        let get = |pos: KPos, dir: Dir, x: Basis| -> Scalar {
            let Some(s) = self.edges.get(&(pos, dir)) else {
                return Scalar::zero();
            };
            match self.sk.templates.get(&(pos, dir)).and_then(|t| t[p_slot(x)].as_ref()) {
                Some((c, _, _)) => s * c,
                None => Scalar::zero(),
            }
        };
        use Basis::*;
        self.sk
            .positions
            .iter()
            .filter(|p| p.level() < self.level())
            .map(|&pos| TransitionScalars {
                pos,
                ktype: self.label(pos),
                mu: get(pos, Dir::PP, E3),
                alpha: get(pos, Dir::PP, E4),
                gamma: get(pos, Dir::PP, F3),
                zeta: get(pos, Dir::PP, F4),
                beta: get(pos, Dir::PM, E4),
                delta: get(pos, Dir::PM, F3),
                rho: get(pos, Dir::MP, F4),
                epsilon: get(pos, Dir::MP, F3),
                eta: get(pos, Dir::MM, F3),
            })
            .collect()
    }

    pub fn to_record(&self) -> ModuleRecord {
        let f = fmt_scalar;
        ModuleRecord {
            lambda: [self.lambda().l1, self.lambda().l2],
            level: self.level(),
            scalars: self
                .transition_scalars()
                .iter()
                .map(|s| ScalarRecord {
                    ktype: [s.ktype.n, s.ktype.m],
                    mu: f(&s.mu),
                    alpha: f(&s.alpha),
                    beta: f(&s.beta),
                    gamma: f(&s.gamma),
                    delta: f(&s.delta),
                    epsilon: f(&s.epsilon),
                    eta: f(&s.eta),
                    rho: f(&s.rho),
                    zeta: f(&s.zeta),
                })
                .collect(),
            dim: self.dim(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("serializable")
    }

    /// Rebuilds a truncation from recorded scalars and checks every recorded
    /// value against the rebuilt module.
    pub fn from_record(record: &ModuleRecord) -> Result<Self, DiscreteError> {
        let bad = |m: String| DiscreteError::Record(m);
        let lambda = LambdaParam::new(record.lambda[0], record.lambda[1])?;
        let sk = Skeleton::new(lambda, record.level)?;
        let by_label: BTreeMap<KPos, &ScalarRecord> = sk
            .positions
            .iter()
            .filter_map(|&p| {
                let l = lambda.label(p);
                record
                    .scalars
                    .iter()
                    .find(|s| s.ktype == [l.n, l.m])
                    .map(|s| (p, s))
            })
            .collect();
        let parse = |s: &str| parse_scalar(s).ok_or_else(|| bad(format!("bad scalar {s:?}")));
        let mut edges = BTreeMap::new();
        for &(pos, dir) in sk.templates.keys() {
            let rec = by_label
                .get(&pos)
                .ok_or_else(|| bad(format!("missing K-type {}", lambda.label(pos))))?;
            let value = parse(match dir {
                Dir::PP => &rec.mu,
                Dir::PM => &rec.beta,
                Dir::MP => &rec.rho,
                Dir::MM => &rec.eta,
            })?;
            if !value.is_zero() {
                edges.insert((pos, dir), value);
            }
        }
        let mt = Self::assemble(sk, edges);
        let rebuilt = mt.to_record();
        if rebuilt.dim != record.dim {
            return Err(bad(format!("dim {} but rebuilt {}", record.dim, rebuilt.dim)));
        }
        for rec in &record.scalars {
            let ours = rebuilt.scalars.iter().find(|s| s.ktype == rec.ktype);
            let same = ours.map_or(false, |o| {
                let fields = |s: &ScalarRecord| {
                    [
                        &s.mu, &s.alpha, &s.beta, &s.gamma, &s.delta, &s.epsilon, &s.eta,
                        &s.rho, &s.zeta,
                    ]
                    .map(|x| parse_scalar(x))
                };
                fields(o) == fields(rec)
            });
            if !same {
                return Err(bad(format!("scalars for K-type {:?} disagree", rec.ktype)));
            }
        }
        Ok(mt)
    }

    pub fn from_json(text: &str) -> Result<Self, DiscreteError> {
        let record: ModuleRecord =
            serde_json::from_str(text).map_err(|e| DiscreteError::Record(e.to_string()))?;
        Self::from_record(&record)
    }
}

impl KRep for ModuleTruncation {
    fn dim(&self) -> usize {
        self.sk.dim()
    }

    fn weight(&self, idx: usize) -> (i64, i64) {
        let (ki, i, j) = self.sk.coords[idx];
        self.sk.labels[ki].weight_of(i, j)
    }

    fn act_k_on_basis(&self, x: Basis, idx: usize) -> SparseVec {
        self.sk.k_action(x, idx)
    }
}

/// Solves for the edge scalars of `Z_t` (levels `0..=t−2` give the stages).
pub fn solve_transition_scalars(
    lambda: LambdaParam,
    t: u32,
) -> Result<Vec<TransitionScalars>, DiscreteError> {
    Ok(build_truncation(lambda, t)?.transition_scalars())
}

pub fn build_truncation(lambda: LambdaParam, t: u32) -> Result<ModuleTruncation, DiscreteError> {
    let sk = Skeleton::new(lambda, t)?;
    let mut known = tree_edges(&sk);
    for stage in 0..t.saturating_sub(1) {
        solve_stage(&sk, stage, &mut known)?;
    }
    Ok(ModuleTruncation::assemble(sk, known))
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs: usize,
    pub vectors: usize,
    pub failures: Vec<(Basis, Basis, usize)>,
}

/// `x(yv) − y(xv) = [x,y]v` for all 45 basis pairs and every basis vector
/// of `Z_{t−2}`.
pub fn verify_module_axioms(mt: &ModuleTruncation) -> Result<AxiomReport, DiscreteError> {
    let limit = if mt.level() >= 2 {
        mt.dim_up_to(mt.level() - 2)
    } else {
        0
    };
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (a, &x) in Basis::ALL.iter().enumerate() {
        for &y in &Basis::ALL[a + 1..] {
            pairs += 1;
            for idx in 0..limit {
                let v = SparseVec::basis(idx);
                let lhs = mt.act(x, &mt.act(y, &v)?)? - mt.act(y, &mt.act(x, &v)?)?;
                let mut rhs = SparseVec::zero();
                for (&z, c) in basis_bracket(x, y) {
                    rhs.add_scaled(&mt.act(z, &v)?, c);
                }
                if lhs != rhs {
                    failures.push((x, y, idx));
                }
            }
        }
    }
    Ok(AxiomReport {
        pairs,
        vectors: limit,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisReport {
    pub vectors: usize,
    pub rank: usize,
    pub dim: usize,
}

fn weight_of(mt: &ModuleTruncation, v: &SparseVec) -> (i64, i64) {
    v.keys().next().map(|&i| mt.weight(i)).unwrap_or((i64::MAX, i64::MAX))
}

fn rank_report(
    mt: &ModuleTruncation,
    vectors: Vec<SparseVec>,
    expected: usize,
) -> Result<BasisReport, DiscreteError> {
    let count = vectors.len();
    let rank = rank_grouped(vectors.into_iter().map(|v| (weight_of(mt, &v), v)));
    if rank == expected && count == expected {
        Ok(BasisReport {
            vectors: count,
            rank,
            dim: expected,
        })
    } else {
        Err(DiscreteError::RankDeficiency { rank, expected })
    }
}

/// Applies `F1^a F2^b` for `a ≤ m0+k+l`, `b ≤ n0+k−l` to each vector.
fn lower_all(
    mt: &ModuleTruncation,
    k: u32,
    l: u32,
    v: &SparseVec,
) -> Result<Vec<SparseVec>, DiscreteError> {
    let (m0, n0) = (mt.lambda().m0(), mt.lambda().n0());
    let mut out = Vec::new();
    let mut vb = v.clone();
    for b in 0..=(n0 + k - l) {
        if b > 0 {
            vb = mt.act(Basis::F2, &vb)?;
        }
        let mut va = vb.clone();
        for a in 0..=(m0 + k + l) {
            if a > 0 {
                va = mt.act(Basis::F1, &va)?;
            }
            out.push(va.clone());
        }
    }
    Ok(out)
}

/// The three descriptions of a basis of `Z_t` built from `v0`:
/// `F1^a F2^b E3^k E4^l v0`, `F1^a F2^b (ad F2)^l E3^(k+l) v0` and
/// `F1^a F2^b E3^(k+l) F2^l v0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFamily {
    E3E4,
    AdF2,
    E3F2,
}

pub fn basis_family_vectors(
    mt: &ModuleTruncation,
    family: BasisFamily,
) -> Result<Vec<SparseVec>, DiscreteError> {
    let n0 = mt.lambda().n0();
    let t = mt.level();
    let v0 = mt.hwv(KPos::new(0, 0));
    let mut out = Vec::new();
    for l in 0..=n0.min(t) {
        for k in 0..=(t - l) {
            let core = match family {
                BasisFamily::E3E4 => {
                    let w: Vec<Basis> = std::iter::repeat(Basis::E3)
                        .take(k as usize)
                        .chain(std::iter::repeat(Basis::E4).take(l as usize))
                        .collect();
                    mt.act_word(&w, &v0)?
                }
                BasisFamily::AdF2 => {
                    let u = pbw::adjoint_power(
                        Basis::F2,
                        l as usize,
                        &pbw::u_power(Basis::E3, (k + l) as u16),
                    );
                    mt.act_u(&u, &v0)?
                }
                BasisFamily::E3F2 => {
                    let w: Vec<Basis> = std::iter::repeat(Basis::E3)
                        .take((k + l) as usize)
                        .chain(std::iter::repeat(Basis::F2).take(l as usize))
                        .collect();
                    mt.act_word(&w, &v0)?
                }
            };
            out.extend(lower_all(mt, k, l, &core)?);
        }
    }
    Ok(out)
}

/// Rank of `S_t` (and its two variants) equals `dim Z_t`.
pub fn verify_basis_family(
    mt: &ModuleTruncation,
    family: BasisFamily,
) -> Result<BasisReport, DiscreteError> {
    rank_report(mt, basis_family_vectors(mt, family)?, mt.dim())
}

/// `(ad F2)^l E3^(k+l) v0 = (k+l)!/k! · E3^k E4^l v0` for `k + l ≤ t`, `l ≤ n0`.
pub fn verify_adf2_identity(mt: &ModuleTruncation) -> Result<usize, DiscreteError> {
    let v0 = mt.hwv(KPos::new(0, 0));
    let mut checked = 0;
    for l in 0..=mt.lambda().n0().min(mt.level()) {
        for k in 0..=(mt.level() - l) {
            let u = pbw::adjoint_power(Basis::F2, l as usize, &pbw::u_power(Basis::E3, (k + l) as u16));
            let lhs = mt.act_u(&u, &v0)?;
            let word: Vec<Basis> = std::iter::repeat(Basis::E3)
                .take(k as usize)
                .chain(std::iter::repeat(Basis::E4).take(l as usize))
                .collect();
            let factor: i64 = ((k + 1)..=(k + l)).map(|x| x as i64).product();
            let rhs = mt.act_word(&word, &v0)?.scaled(&q(factor));
            if lhs != rhs {
                return Err(DiscreteError::IdentityFailure(format!(
                    "(ad F2)^{l} E3^{} v0 at k = {k}",
                    k + l
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Nonvanishing of the edge scalars used by the basis construction, with
/// gauge-invariant up-down products as supporting evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonvanishingReport {
    pub mu_all_nonzero: bool,
    pub beta_all_nonzero: bool,
    pub mu_checked: usize,
    pub beta_checked: usize,
    /// `μ_K · η_{K⁺⁺}` for each K-type whose `(n+1, m+1)` neighbour has a
    /// down edge back.
    pub mu_eta_products: Vec<(KTypeLabel, Scalar)>,
    /// `β_K · ρ_{K⁺⁻}`.
    pub beta_rho_products: Vec<(KTypeLabel, Scalar)>,
}

impl NonvanishingReport {
    pub fn passed(&self) -> bool {
        self.mu_all_nonzero && self.beta_all_nonzero
    }
}

pub fn verify_nonvanishing(mt: &ModuleTruncation) -> NonvanishingReport {
    let n0 = mt.lambda().n0();
    let mut rep = NonvanishingReport {
        mu_all_nonzero: true,
        beta_all_nonzero: true,
        mu_checked: 0,
        beta_checked: 0,
        mu_eta_products: vec![],
        beta_rho_products: vec![],
    };
    let edges = mt.edge_scalars();
    let get = |e: &Edge| edges.get(e).cloned().unwrap_or_else(Scalar::zero);
    for &pos in mt.positions() {
        if pos.level() >= mt.level() {
            continue;
        }
        let label = mt.label(pos);
        rep.mu_checked += 1;
        let mu = get(&(pos, Dir::PP));
        rep.mu_all_nonzero &= !mu.is_zero();
        let up = KPos::new(pos.k + 1, pos.l);
        if up.level() < mt.level() {
            rep.mu_eta_products.push((label, &mu * get(&(up, Dir::MM))));
        }
        if let Some(t) = Dir::PM.target(pos, n0) {
            rep.beta_checked += 1;
            let beta = get(&(pos, Dir::PM));
            rep.beta_all_nonzero &= !beta.is_zero();
            if t.level() < mt.level() {
                rep.beta_rho_products.push((label, &beta * get(&(t, Dir::MP))));
            }
        }
    }
    rep
}

/// The scalar by which the `g`-Casimir acts on `Z_{t−2}`.
pub fn casimir_scalar(mt: &ModuleTruncation) -> Result<Scalar, DiscreteError> {
    if mt.level() < 2 {
        return Err(DiscreteError::LevelOverflow { index: 0 });
    }
    let omega = crate::clifford::casimir_g();
    let limit = mt.dim_up_to(mt.level() - 2);
    let mut value: Option<Scalar> = None;
    for idx in 0..limit {
        let v = SparseVec::basis(idx);
        let w = mt.act_u(&omega, &v)?;
        let c = w.proportionality(&v).ok_or(DiscreteError::NotScalar)?;
        match &value {
            None => value = Some(c),
            Some(prev) if *prev == c => {}
            Some(_) => return Err(DiscreteError::NotScalar),
        }
    }
    value.ok_or(DiscreteError::NotScalar)
}

/// `|λ + ρ|² − |ρ|²` with `ρ = (3/2, 1/2)`, in the normalization of
/// [`crate::clifford::casimir_g`].
pub fn expected_casimir(lambda: LambdaParam) -> Scalar {
    let a = q(lambda.l1) + qf(3, 2);
    let b = q(lambda.l2) + qf(1, 2);
    &a * &a + &b * &b - qf(10, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(a: i64, b: i64) -> LambdaParam {
        LambdaParam::new(a, b).unwrap()
    }

    #[test]
    fn lambda_validation() {
        assert!(LambdaParam::new(0, 1).is_err());
        assert!(LambdaParam::new(1, -1).is_err());
        let l: LambdaParam = "2,1".parse().unwrap();
        assert_eq!((l.m0(), l.n0()), (5, 1));
        assert!("2".parse::<LambdaParam>().is_err());
    }

    #[test]
    fn ktype_examples() {
        let l = lam(1, 0);
        let labels = |t| {
            ktypes(l, t)
                .into_iter()
                .map(|p| l.label(p))
                .collect::<Vec<_>>()
        };
        assert_eq!(labels(0), vec![KTypeLabel::new(3, 1)]);
        let mut l1 = labels(1);
        l1.sort();
        assert_eq!(
            l1,
            vec![KTypeLabel::new(3, 1), KTypeLabel::new(4, 0), KTypeLabel::new(4, 2)]
        );
        let wide = lam(5, 0);
        for t in 0..=4u32 {
            let at_t = ktypes(wide, t).iter().filter(|p| p.level() == t).count();
            assert_eq!(at_t as u32, t + 1);
            let total = ktypes(wide, t).len() as u32;
            assert_eq!(total, (t + 1) * (t + 2) / 2);
        }
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_dim(3, 1, 2), 64);
        assert_eq!(closed_form_dim(3, 1, 0), 8);
        assert_eq!(s_t_cardinality(3, 1, 2), 64);
    }

    #[test]
    fn templates_are_unique() {
        let l = KTypeLabel::new(4, 2);
        for dir in Dir::ALL {
            let t = template(l, dir).unwrap();
            assert_eq!(t[p_slot(dir.distinguished())].as_ref().unwrap().0, q(1));
        }
        // E3 v = v⁺⁺, E4 v = (1/m') F2 v⁺⁺, F4 v = (1/n') F1 v⁺⁺, F3 v = −1/(n'm') F1F2 v⁺⁺
        let t = template(l, Dir::PP).unwrap();
        assert_eq!(t[1], Some((qf(1, 3), 0, 1)));
        assert_eq!(t[3], Some((qf(1, 5), 1, 0)));
        assert_eq!(t[2], Some((qf(-1, 15), 1, 1)));
    }

    #[test]
    fn small_truncations() {
        let mt = build_truncation(lam(1, 0), 0).unwrap();
        assert_eq!(mt.dim(), 8);
        let mt = build_truncation(lam(1, 0), 2).unwrap();
        assert_eq!(mt.dim(), 64);
        let r = verify_module_axioms(&mt).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(verify_basis_family(&mt, BasisFamily::E3E4).unwrap().rank, 64);
    }

    #[test]
    fn level_three_module() {
        let mt = build_truncation(lam(1, 0), 3).unwrap();
        let r = verify_module_axioms(&mt).unwrap();
        assert_eq!(r.pairs, 45);
        assert!(r.failures.is_empty(), "{:?}", &r.failures[..r.failures.len().min(5)]);
        assert!(verify_nonvanishing(&mt).passed());
        assert_eq!(casimir_scalar(&mt).unwrap(), expected_casimir(lam(1, 0)));
        verify_adf2_identity(&mt).unwrap();
        for fam in [BasisFamily::E3E4, BasisFamily::AdF2, BasisFamily::E3F2] {
            verify_basis_family(&mt, fam).unwrap();
        }
    }

    #[test]
    fn record_round_trip() {
        let mt = build_truncation(lam(2, 1), 3).unwrap();
        let json = mt.to_json();
        let back = ModuleTruncation::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.edge_scalars(), mt.edge_scalars());
    }
}
