//! Loops, loop sequences and the splitting / twisting / merger / deformation /
//! expansion operations that appear in the master loop equation.
//!
//! A location is an index into the canonical edge sequence of a loop.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxSpec, DirectedEdge, Lattice, Plaquette};

/// Non-backtracking closed path, stored as its lexicographically minimal rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    edges: Vec<DirectedEdge>,
}

impl Loop {
    /// Validates a closed non-backtracking edge sequence and canonicalizes it.
    pub fn new(edges: Vec<DirectedEdge>, lat: &Lattice) -> Result<Loop> {
        check_closed(&edges, lat)?;
        let n = edges.len();
        if let Some(i) = (0..n).find(|&i| edges[(i + 1) % n] == edges[i].reverse()) {
            return Err(Error::InvalidLoop(format!(
                "backtrack at position {i}: {}",
                lat.describe(edges[i])
            )));
        }
        Ok(Loop::canonical(edges))
    }

    pub fn from_plaquette(p: &Plaquette) -> Loop {
        Loop::canonical(p.edges().to_vec())
    }

    fn canonical(mut edges: Vec<DirectedEdge>) -> Loop {
        let n = edges.len();
        let mut best = 0;
        for r in 1..n {
            let less = (0..n)
                .map(|k| (edges[(r + k) % n], edges[(best + k) % n]))
                .find(|(a, b)| a != b)
                .is_some_and(|(a, b)| a < b);
            if less {
                best = r;
            }
        }
        edges.rotate_left(best);
        Loop { edges }
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The same loop traversed in the opposite direction.
    #[must_use]
    pub fn reverse(&self) -> Loop {
        Loop::canonical(self.edges.iter().rev().map(|e| e.reverse()).collect())
    }

    /// Edges after location `x` going around until just before `x`.
    fn rest_after(&self, x: usize) -> Vec<DirectedEdge> {
        let mut v = self.edges[x + 1..].to_vec();
        v.extend_from_slice(&self.edges[..x]);
        v
    }

    /// Edges strictly between locations `x` and `y`, walking forward cyclically.
    fn segment(&self, x: usize, y: usize) -> Vec<DirectedEdge> {
        let n = self.len();
        let mut out = Vec::new();
        let mut k = (x + 1) % n;
        while k != y {
            out.push(self.edges[k]);
            k = (k + 1) % n;
        }
        out
    }

    /// Vertex indices visited, starting at the start of the first edge.
    pub fn vertices(&self, lat: &Lattice) -> Vec<usize> {
        self.edges.iter().map(|&e| lat.start(e)).collect()
    }

    /// Text form accepted by [`parse_loop`].
    pub fn to_text(&self, lat: &Lattice) -> String {
        let base = lat.vertex_coords(lat.start(self.edges[0]));
        let coords: Vec<String> = base.iter().map(|c| c.to_string()).collect();
        let mut out = format!("({}):", coords.join(","));
        for &e in &self.edges {
            let mu = lat.direction(e);
            let sign = if e.is_positive() { '+' } else { '-' };
            out.push(' ');
            out.push(sign);
            out.push_str(&axis_name(mu));
        }
        out
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn check_closed(edges: &[DirectedEdge], lat: &Lattice) -> Result<()> {
    if edges.is_empty() {
        return Err(Error::InvalidLoop("empty edge sequence".into()));
    }
    if let Some(e) = edges.iter().find(|e| !lat.contains_edge(**e)) {
        return Err(Error::EdgeNotInLattice(e.to_string()));
    }
    let n = edges.len();
    for i in 0..n {
        if lat.end(edges[i]) != lat.start(edges[(i + 1) % n]) {
            return Err(Error::NotClosed(format!(
                "edge {i} ends at {:?} but edge {} starts at {:?}",
                lat.vertex_coords(lat.end(edges[i])),
                (i + 1) % n,
                lat.vertex_coords(lat.start(edges[(i + 1) % n]))
            )));
        }
    }
    Ok(())
}

/// Removes backtracks from a closed edge sequence, including across the seam.
/// Returns `None` for a null cycle.
pub fn backtrack_erase(cycle: &[DirectedEdge], lat: &Lattice) -> Result<Option<Loop>> {
    check_closed(cycle, lat)?;
    Ok(reduce(cycle.iter().copied()))
}

fn reduce(word: impl IntoIterator<Item = DirectedEdge>) -> Option<Loop> {
    let mut stack: Vec<DirectedEdge> = Vec::new();
    for e in word {
        if stack.last() == Some(&e.reverse()) {
            stack.pop();
        } else {
            stack.push(e);
        }
    }
    let (mut lo, mut hi) = (0, stack.len());
    while hi - lo >= 2 && stack[lo] == stack[hi - 1].reverse() {
        lo += 1;
        hi -= 1;
    }
    if lo == hi {
        None
    } else {
        Some(Loop::canonical(stack[lo..hi].to_vec()))
    }
}

fn inverse_path(path: &[DirectedEdge]) -> impl Iterator<Item = DirectedEdge> + '_ {
    path.iter().rev().map(|e| e.reverse())
}

/// Ordered collection of non-null loops.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopSequence {
    loops: Vec<Loop>,
}

impl LoopSequence {
    pub fn new(loops: Vec<Loop>) -> Self {
        LoopSequence { loops }
    }

    pub fn single(l: Loop) -> Self {
        LoopSequence { loops: vec![l] }
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    /// Number of loops `m`.
    pub fn count(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Total length `|s|`.
    pub fn total_length(&self) -> usize {
        self.loops.iter().map(Loop::len).sum()
    }

    /// Order-independent representative (loops sorted).
    #[must_use]
    pub fn sorted(&self) -> LoopSequence {
        let mut loops = self.loops.clone();
        loops.sort();
        LoopSequence { loops }
    }

    fn replacing(&self, i: usize, new: impl IntoIterator<Item = Option<Loop>>) -> LoopSequence {
        let mut loops = Vec::with_capacity(self.loops.len() + 1);
        loops.extend_from_slice(&self.loops[..i]);
        loops.extend(new.into_iter().flatten());
        loops.extend_from_slice(&self.loops[i + 1..]);
        LoopSequence { loops }
    }

    fn merging(&self, i: usize, j: usize, merged: Option<Loop>) -> LoopSequence {
        let mut loops = Vec::with_capacity(self.loops.len());
        for (k, l) in self.loops.iter().enumerate() {
            if k == i.min(j) {
                loops.extend(merged.clone());
            } else if k != i.max(j) {
                loops.push(l.clone());
            }
        }
        LoopSequence { loops }
    }

    fn appending(&self, l: Loop) -> LoopSequence {
        let mut loops = self.loops.clone();
        loops.push(l);
        LoopSequence { loops }
    }

    pub fn to_text(&self, lat: &Lattice) -> String {
        let parts: Vec<String> = self.loops.iter().map(|l| l.to_text(lat)).collect();
        parts.join("; ")
    }
}

impl fmt::Display for LoopSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.loops.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Signed edge counts `t_i(e)` per positive edge, and their totals `t(e)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WindingTable {
    per_loop: BTreeMap<usize, Vec<i64>>,
}

impl WindingTable {
    pub fn new(s: &LoopSequence) -> Self {
        let m = s.count();
        let mut per_loop: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (i, l) in s.loops().iter().enumerate() {
            for e in l.edges() {
                let t = per_loop.entry(e.id()).or_insert_with(|| vec![0; m]);
                t[i] += if e.is_positive() { 1 } else { -1 };
            }
        }
        WindingTable { per_loop }
    }

    /// `(t_1(e), ..., t_m(e))`, or `None` if no loop touches `e`.
    pub fn per_loop(&self, edge_id: usize) -> Option<&[i64]> {
        self.per_loop.get(&edge_id).map(|v| v.as_slice())
    }

    pub fn total(&self, edge_id: usize) -> i64 {
        self.per_loop(edge_id).map_or(0, |t| t.iter().sum())
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.per_loop.keys().copied()
    }

    /// `l(s) = sum over positive edges of t(e)^2`.
    pub fn ell(&self) -> i64 {
        self.per_loop
            .values()
            .map(|t| t.iter().sum::<i64>().pow(2))
            .sum()
    }
}

/// `(|s|, windings, l(s))`.
pub fn lengths_and_windings(s: &LoopSequence) -> (usize, WindingTable, i64) {
    let table = WindingTable::new(s);
    let ell = table.ell();
    (s.total_length(), table, ell)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

enum Pairing {
    Same,
    Opposite,
}

fn pairing(l: &Loop, x: usize, l2: &Loop, y: usize) -> Option<Pairing> {
    let (ex, ey) = (*l.edges.get(x)?, *l2.edges.get(y)?);
    if ex == ey {
        Some(Pairing::Same)
    } else if ex == ey.reverse() {
        Some(Pairing::Opposite)
    } else {
        None
    }
}

fn check_pair(l: &Loop, x: usize, y: usize) -> Result<Pairing> {
    if x == y {
        return Err(Error::MismatchedLocations { x, y });
    }
    pairing(l, x, l, y).ok_or(Error::MismatchedLocations { x, y })
}

/// Splitting at two locations of one loop. Positive when both locations carry
/// the same edge, negative when they carry opposite edges.
pub fn split(l: &Loop, x: usize, y: usize) -> Result<(Option<Loop>, Option<Loop>)> {
    let kind = check_pair(l, x, y)?;
    let b = l.segment(x, y);
    let r = l.segment(y, x);
    Ok(match kind {
        Pairing::Same => {
            let first = reduce(std::iter::once(l.edges[x]).chain(r));
            let second = reduce(b.into_iter().chain(std::iter::once(l.edges[y])));
            (first, second)
        }
        Pairing::Opposite => (reduce(r), reduce(b)),
    })
}

/// Twisting at two locations of one loop. Negative for the same edge,
/// positive for opposite edges.
pub fn twist(l: &Loop, x: usize, y: usize) -> Result<Option<Loop>> {
    let kind = check_pair(l, x, y)?;
    let b = l.segment(x, y);
    let r = l.segment(y, x);
    Ok(match kind {
        Pairing::Same => reduce(r.iter().copied().chain(inverse_path(&b))),
        Pairing::Opposite => reduce(
            std::iter::once(l.edges[x])
                .chain(inverse_path(&b))
                .chain(std::iter::once(l.edges[y]))
                .chain(r),
        ),
    })
}

/// Merger of `l` at location `x` with `l2` at location `y`.
pub fn merge(l: &Loop, l2: &Loop, x: usize, y: usize, sign: Sign) -> Result<Option<Loop>> {
    let kind = pairing(l, x, l2, y).ok_or(Error::MismatchedLocations { x, y })?;
    let e = l.edges[x];
    let b = l.rest_after(x);
    let d = l2.rest_after(y);
    let one = std::iter::once(e);
    Ok(match (kind, sign) {
        (Pairing::Same, Sign::Plus) => {
            reduce(one.clone().chain(d).chain(one).chain(b))
        }
        (Pairing::Same, Sign::Minus) => reduce(inverse_path(&d).chain(b)),
        (Pairing::Opposite, Sign::Plus) => {
            reduce(one.clone().chain(inverse_path(&d)).chain(one).chain(b))
        }
        (Pairing::Opposite, Sign::Minus) => reduce(d.into_iter().chain(b)),
    })
}

/// Deformation of `l` at location `x` by a plaquette through the edge at `x`
/// or its reverse.
pub fn deform(l: &Loop, x: usize, p: &Plaquette, sign: Sign) -> Result<Option<Loop>> {
    let e = *l.edges.get(x).ok_or(Error::MismatchedLocations { x, y: 0 })?;
    let pl = Loop::from_plaquette(p);
    let y = pl
        .edges
        .iter()
        .position(|f| f.id() == e.id())
        .ok_or_else(|| Error::InvalidLoop(format!("plaquette does not pass through {e}")))?;
    merge(l, &pl, x, y, sign)
}

/// Checks that every vertex within distance one of the sequence lies in the box.
pub fn check_padding(s: &LoopSequence, lat: &Lattice) -> Result<()> {
    for l in s.loops() {
        if let Some(e) = l.edges().iter().find(|e| !lat.contains_edge(**e)) {
            return Err(Error::EdgeNotInLattice(e.to_string()));
        }
        for v in l.vertices(lat) {
            for mu in 0..lat.dim() {
                for fwd in [true, false] {
                    if lat.shift(v, mu, fwd).is_none() {
                        return Err(Error::PaddingViolated(format!(
                            "neighbor of {:?} in direction {}{} is outside the box",
                            lat.vertex_coords(v),
                            if fwd { '+' } else { '-' },
                            axis_name(mu)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Positive and negative expansions of `l`: the plaquettes through `e^-1`
/// (positive) and through `e` (negative) at every location, as `(l, p)` pairs.
pub fn expansion_sets(l: &Loop, lat: &Lattice) -> Result<(Vec<(Loop, Loop)>, Vec<(Loop, Loop)>)> {
    check_padding(&LoopSequence::single(l.clone()), lat)?;
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for &e in l.edges() {
        for p in lat.plaquettes_through(e.reverse())? {
            pos.push((l.clone(), Loop::from_plaquette(p)));
        }
        for p in lat.plaquettes_through(e)? {
            neg.push((l.clone(), Loop::from_plaquette(p)));
        }
    }
    Ok((pos, neg))
}

/// Labels for the operation multisets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    #[serde(rename = "S+")]
    SplitPlus,
    #[serde(rename = "S-")]
    SplitMinus,
    #[serde(rename = "T+")]
    TwistPlus,
    #[serde(rename = "T-")]
    TwistMinus,
    #[serde(rename = "M+")]
    MergePlus,
    #[serde(rename = "M-")]
    MergeMinus,
    #[serde(rename = "MU+")]
    MergeUPlus,
    #[serde(rename = "MU-")]
    MergeUMinus,
    #[serde(rename = "D+")]
    DeformPlus,
    #[serde(rename = "D-")]
    DeformMinus,
    #[serde(rename = "E+")]
    ExpandPlus,
    #[serde(rename = "E-")]
    ExpandMinus,
}

impl OpKind {
    pub const ALL: [OpKind; 12] = [
        OpKind::SplitPlus,
        OpKind::SplitMinus,
        OpKind::TwistPlus,
        OpKind::TwistMinus,
        OpKind::MergePlus,
        OpKind::MergeMinus,
        OpKind::MergeUPlus,
        OpKind::MergeUMinus,
        OpKind::DeformPlus,
        OpKind::DeformMinus,
        OpKind::ExpandPlus,
        OpKind::ExpandMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            OpKind::SplitPlus => "S+",
            OpKind::SplitMinus => "S-",
            OpKind::TwistPlus => "T+",
            OpKind::TwistMinus => "T-",
            OpKind::MergePlus => "M+",
            OpKind::MergeMinus => "M-",
            OpKind::MergeUPlus => "MU+",
            OpKind::MergeUMinus => "MU-",
            OpKind::DeformPlus => "D+",
            OpKind::DeformMinus => "D-",
            OpKind::ExpandPlus => "E+",
            OpKind::ExpandMinus => "E-",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Multisets of loop sequences produced by each operation type.
#[derive(Clone, Debug, Default)]
pub struct OperationSets {
    sets: BTreeMap<OpKind, Vec<LoopSequence>>,
}

impl OperationSets {
    pub fn get(&self, kind: OpKind) -> &[LoopSequence] {
        self.sets.get(&kind).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, kind: OpKind) -> usize {
        self.get(kind).len()
    }

    pub fn counts(&self) -> BTreeMap<OpKind, usize> {
        OpKind::ALL.iter().map(|&k| (k, self.count(k))).collect()
    }

    fn push(&mut self, kind: OpKind, s: LoopSequence) {
        self.sets.entry(kind).or_default().push(s);
    }
}

/// Enumerates every operation on a padded loop sequence.
///
/// Splittings and twistings run over ordered location pairs, so `(x, y)` and
/// `(y, x)` both contribute. Mergers run over ordered loop pairs `(i, j)`.
pub fn build_operation_sets(s: &LoopSequence, lat: &Lattice) -> Result<OperationSets> {
    check_padding(s, lat)?;
    let mut out = OperationSets::default();
    for (i, l) in s.loops().iter().enumerate() {
        let n = l.len();
        for x in 0..n {
            for y in (0..n).filter(|&y| y != x) {
                let Some(kind) = pairing(l, x, l, y) else {
                    continue;
                };
                let (a, b) = split(l, x, y)?;
                let split_seq = s.replacing(i, [a, b]);
                let twist_seq = s.replacing(i, [twist(l, x, y)?]);
                match kind {
                    Pairing::Same => {
                        out.push(OpKind::SplitPlus, split_seq);
                        out.push(OpKind::TwistMinus, twist_seq);
                    }
                    Pairing::Opposite => {
                        out.push(OpKind::SplitMinus, split_seq);
                        out.push(OpKind::TwistPlus, twist_seq);
                    }
                }
            }
            let e = l.edges[x];
            for p in lat.plaquettes_through(e)? {
                let pl = Loop::from_plaquette(p);
                let y = pl.edges.iter().position(|&f| f == e).expect("plaquette starts at e");
                out.push(OpKind::DeformPlus, s.replacing(i, [merge(l, &pl, x, y, Sign::Plus)?]));
                out.push(OpKind::DeformMinus, s.replacing(i, [merge(l, &pl, x, y, Sign::Minus)?]));
                out.push(OpKind::ExpandMinus, s.appending(pl));
            }
            for p in lat.plaquettes_through(e.reverse())? {
                out.push(OpKind::ExpandPlus, s.appending(Loop::from_plaquette(p)));
            }
        }
    }
    for (i, l) in s.loops().iter().enumerate() {
        for (j, l2) in s.loops().iter().enumerate().filter(|&(j, _)| j != i) {
            for x in 0..l.len() {
                for y in 0..l2.len() {
                    let Some(kind) = pairing(l, x, l2, y) else {
                        continue;
                    };
                    let plus = s.merging(i, j, merge(l, l2, x, y, Sign::Plus)?);
                    let minus = s.merging(i, j, merge(l, l2, x, y, Sign::Minus)?);
                    match kind {
                        Pairing::Same => out.push(OpKind::MergeUPlus, plus.clone()),
                        Pairing::Opposite => out.push(OpKind::MergeUMinus, minus.clone()),
                    }
                    out.push(OpKind::MergePlus, plus);
                    out.push(OpKind::MergeMinus, minus);
                }
            }
        }
    }
    Ok(out)
}

fn axis_name(mu: usize) -> String {
    match mu {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        _ => mu.to_string(),
    }
}

fn parse_axis(s: &str) -> Option<usize> {
    match s {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => s.parse().ok(),
    }
}

struct LoopText {
    base: Vec<i64>,
    /// `(axis, forward, token)` per step.
    steps: Vec<(usize, bool, String)>,
}

fn tokenize_loop(text: &str) -> Result<LoopText> {
    let syntax = |m: &str| Error::LoopSyntax(format!("{m} in {text:?}"));
    let (base, steps) = text.split_once(':').ok_or_else(|| syntax("missing ':'"))?;
    let base = base.trim().trim_start_matches('(').trim_end_matches(')');
    let base: Vec<i64> = base
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| syntax("bad base vertex"))?;
    let mut out = Vec::new();
    for tok in steps.split_whitespace() {
        let tok = tok.replace('\u{2212}', "-");
        let (fwd, axis) = if let Some(a) = tok.strip_prefix('+') {
            (true, a)
        } else if let Some(a) = tok.strip_prefix('-') {
            (false, a)
        } else {
            return Err(syntax(&format!("step {tok:?} needs a sign")));
        };
        let mu = parse_axis(axis)
            .filter(|&mu| mu < base.len())
            .ok_or_else(|| syntax(&format!("unknown axis {axis:?}")))?;
        out.push((mu, fwd, tok));
    }
    Ok(LoopText { base, steps: out })
}

/// Parses `"(x0,x1,...): +x +y -x -y"`: a base vertex followed by unit steps.
/// Axes are `x y z w` or numeric; `-` and the Unicode minus are both accepted.
/// Backtracks are erased; a path that erases to nothing is rejected.
pub fn parse_loop(text: &str, lat: &Lattice) -> Result<Loop> {
    let parsed = tokenize_loop(text)?;
    if parsed.base.len() != lat.dim() {
        return Err(Error::LoopSyntax(format!(
            "base vertex has {} coordinates, lattice has dimension {} in {text:?}",
            parsed.base.len(),
            lat.dim()
        )));
    }
    let start = lat
        .vertex_index(&parsed.base)
        .ok_or_else(|| Error::InvalidLoop(format!("base vertex {:?} is outside the box", parsed.base)))?;
    let mut v = start;
    let mut edges = Vec::new();
    for (k, (mu, fwd, tok)) in parsed.steps.iter().enumerate() {
        let e = lat.step(v, *mu, *fwd).ok_or_else(|| {
            Error::EdgeNotInLattice(format!("step {} ({tok}) from {:?}", k + 1, lat.vertex_coords(v)))
        })?;
        v = lat.end(e);
        edges.push(e);
    }
    if v != start {
        let (k, tok) = parsed
            .steps
            .last()
            .map_or((0, ""), |(_, _, t)| (parsed.steps.len(), t.as_str()));
        return Err(Error::NotClosed(format!(
            "last step {k} ({tok}) ends at {:?}, not at the base vertex {:?}",
            lat.vertex_coords(v),
            parsed.base
        )));
    }
    backtrack_erase(&edges, lat)?
        .ok_or_else(|| Error::InvalidLoop(format!("{text:?} erases to a null cycle")))
}

/// Smallest box in dimension `d` containing every vertex visited by the loop
/// texts, widened by `pad` on each side. Texts are `;`-separated sequences.
pub fn padded_box(texts: &[&str], d: usize, pad: i64) -> Result<BoxSpec> {
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for t in texts.iter().flat_map(|t| t.split(';')).filter(|t| !t.trim().is_empty()) {
        let parsed = tokenize_loop(t)?;
        if parsed.base.len() != d {
            return Err(Error::LoopSyntax(format!("{t:?} is not a loop in dimension {d}")));
        }
        let mut x = parsed.base.clone();
        let mut visit = |x: &[i64]| {
            for mu in 0..d {
                lo[mu] = lo[mu].min(x[mu]);
                hi[mu] = hi[mu].max(x[mu]);
            }
        };
        visit(&x);
        for (mu, fwd, _) in &parsed.steps {
            x[*mu] += if *fwd { 1 } else { -1 };
            visit(&x);
        }
    }
    if lo[0] == i64::MAX {
        return Err(Error::Config("no loops given".into()));
    }
    Ok(BoxSpec {
        d,
        lo: lo.iter().map(|v| v - pad).collect(),
        hi: hi.iter().map(|v| v + pad).collect(),
    })
}

/// Parses loops separated by `;`.
pub fn parse_sequence(text: &str, lat: &Lattice) -> Result<LoopSequence> {
    let loops = text
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_loop(t, lat))
        .collect::<Result<Vec<_>>>()?;
    Ok(LoopSequence::new(loops))
}
