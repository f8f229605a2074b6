use std::collections::{HashSet, VecDeque};
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde_json::{json, Value};

use super::tree::{tree_to_partition, Realizer, Tree};
use super::TreeError;
use crate::exactnum::FieldElem;
use crate::json::{self, FormatError};
use crate::plmaps::{from_partition_pair, PartitionPair, PlMap};
use crate::subdivision::{
    enumerate_carets, BetaContext, CaretShape, Ctx, SubdivisionPolynomial, DEFAULT_CARET_CAP,
};

pub const DEFAULT_COMPOSE_BUDGET: usize = 10_000;

/// Deepest cell the composition search will create.
const MAX_DEPTH: u32 = 1024;

#[derive(Clone, Debug)]
pub struct TreePair {
    ctx: Ctx,
    left: Tree,
    right: Tree,
}

impl PartialEq for TreePair {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.poly() == other.ctx.poly() && self.left == other.left && self.right == other.right
    }
}

fn check_fits(ctx: &BetaContext, t: &Tree) -> Result<(), TreeError> {
    match t.shapes().into_iter().find(|s| !s.fits(ctx)) {
        Some(s) => Err(TreeError::ShapeNotInContext { shape: s.to_string() }),
        None => Ok(()),
    }
}

impl TreePair {
    pub fn new(ctx: &Ctx, left: Tree, right: Tree) -> Result<Self, TreeError> {
        check_fits(ctx, &left)?;
        check_fits(ctx, &right)?;
        let (l, r) = (left.leaves(), right.leaves());
        if l != r {
            return Err(TreeError::LeafCountMismatch { left: l, right: r });
        }
        Ok(TreePair { ctx: ctx.clone(), left, right })
    }

    pub fn identity(ctx: &Ctx) -> Self {
        TreePair { ctx: ctx.clone(), left: Tree::Leaf, right: Tree::Leaf }
    }

    /// Parse both trees from their `Display` form.
    pub fn parse(ctx: &Ctx, left: &str, right: &str) -> Result<Self, TreeError> {
        TreePair::new(ctx, Tree::parse(left)?, Tree::parse(right)?)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn left(&self) -> &Tree {
        &self.left
    }

    pub fn right(&self) -> &Tree {
        &self.right
    }

    pub fn leaves(&self) -> usize {
        self.left.leaves()
    }

    pub fn inverse(&self) -> TreePair {
        TreePair { ctx: self.ctx.clone(), left: self.right.clone(), right: self.left.clone() }
    }

    pub fn to_plmap(&self) -> PlMap {
        treepair_to_plmap(self)
    }

    /// `{"context", "left", "right"}`; trees are preorder tokens, `"."` for
    /// a leaf and the caret's index in the context's sorted shape list
    /// otherwise.
    pub fn to_json(&self) -> Value {
        let shapes = enumerate_carets(&self.ctx, DEFAULT_CARET_CAP).unwrap_or_default();
        json!({
            "context": json::context(&self.ctx),
            "left": tokens(&self.left, &shapes),
            "right": tokens(&self.right, &shapes),
        })
    }

    /// Accepts index tokens as written by `to_json`, and also explicit
    /// shapes such as `"(2,1)"`.
    pub fn from_json(v: &Value) -> Result<TreePair, TreeError> {
        let ctx = json::parse_context(json::get(v, "context")?)?;
        let shapes = enumerate_carets(&ctx, DEFAULT_CARET_CAP)?;
        let side = |key: &str| -> Result<Tree, TreeError> {
            let toks = json::array(json::get(v, key)?, key)?
                .iter()
                .map(|t| json::str_of(t, "tree token").map(str::to_string))
                .collect::<Result<Vec<_>, _>>()?;
            let mut pos = 0;
            let t = parse_tokens(&toks, &mut pos, &shapes)?;
            if pos != toks.len() {
                return Err(FormatError::new(format!("{key}: {} unused tokens", toks.len() - pos)).into());
            }
            Ok(t)
        };
        TreePair::new(&ctx, side("left")?, side("right")?)
    }

    /// Graphviz source: one cluster per tree, edge `minlen` equal to the leg
    /// length, leaves labelled by depth.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  node [shape=point];\n");
        for (tag, t) in [("l", &self.left), ("r", &self.right)] {
            let _ = writeln!(out, "  subgraph cluster_{tag} {{\n    label=\"{}\";", if tag == "l" { "domain" } else { "range" });
            let mut next = 0;
            dot_node(t, tag, 0, &mut next, &mut out);
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

fn dot_node(t: &Tree, tag: &str, depth: u32, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    match t {
        Tree::Leaf => {
            let _ = writeln!(out, "    {tag}{id} [shape=plaintext, label=\"{depth}\"];");
        }
        Tree::Node(s, cs) => {
            let _ = writeln!(out, "    {tag}{id};");
            for (l, c) in s.legs().iter().zip(cs) {
                let child = dot_node(c, tag, depth + l, next, out);
                let _ = writeln!(out, "    {tag}{id} -> {tag}{child} [minlen={l}, label=\"{l}\", arrowhead=none];");
            }
        }
    }
    id
}

fn tokens(t: &Tree, shapes: &[CaretShape]) -> Vec<Value> {
    let mut out = Vec::new();
    fn go(t: &Tree, shapes: &[CaretShape], out: &mut Vec<Value>) {
        match t {
            Tree::Leaf => out.push(Value::String(".".into())),
            Tree::Node(s, cs) => {
                let tok = match shapes.iter().position(|x| x == s) {
                    Some(i) => i.to_string(),
                    None => s.to_string(),
                };
                out.push(Value::String(tok));
                cs.iter().for_each(|c| go(c, shapes, out));
            }
        }
    }
    go(t, shapes, &mut out);
    out
}

fn parse_tokens(toks: &[String], pos: &mut usize, shapes: &[CaretShape]) -> Result<Tree, TreeError> {
    let tok = toks.get(*pos).ok_or_else(|| FormatError::new("tree tokens end early"))?;
    *pos += 1;
    if tok == "." {
        return Ok(Tree::Leaf);
    }
    let shape = if tok.starts_with('(') {
        match Tree::parse(tok)? {
            Tree::Node(s, _) => s,
            Tree::Leaf => unreachable!("a shape token parses to a caret"),
        }
    } else {
        let i: usize = tok.parse().map_err(|_| FormatError::new(format!("bad tree token {tok:?}")))?;
        shapes
            .get(i)
            .cloned()
            .ok_or_else(|| FormatError::new(format!("shape index {i} out of range")))?
    };
    let children = (0..shape.arity())
        .map(|_| parse_tokens(toks, pos, shapes))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tree::Node(shape, children))
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.left, self.right)
    }
}

pub fn treepair_to_plmap(tp: &TreePair) -> PlMap {
    let pp = PartitionPair::new(tree_to_partition(&tp.ctx, &tp.left), tree_to_partition(&tp.ctx, &tp.right))
        .expect("equal leaf counts");
    from_partition_pair(&pp)
}

/// Carets whose children are all leaves, by the index of their first leaf.
fn exposed(t: &Tree) -> Vec<(usize, CaretShape)> {
    fn go(t: &Tree, next: &mut usize, out: &mut Vec<(usize, CaretShape)>) {
        match t {
            Tree::Leaf => *next += 1,
            Tree::Node(s, cs) => {
                if cs.iter().all(Tree::is_leaf) {
                    out.push((*next, s.clone()));
                    *next += cs.len();
                } else {
                    cs.iter().for_each(|c| go(c, next, out));
                }
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut 0, &mut out);
    out
}

/// Replace the exposed caret whose first leaf is `start` by a leaf.
fn collapse(t: &Tree, start: usize) -> Tree {
    fn go(t: &Tree, start: usize, next: &mut usize) -> Tree {
        match t {
            Tree::Leaf => {
                *next += 1;
                Tree::Leaf
            }
            Tree::Node(_, cs) if *next == start && cs.iter().all(Tree::is_leaf) => {
                *next += cs.len();
                Tree::Leaf
            }
            Tree::Node(s, cs) => Tree::Node(s.clone(), cs.iter().map(|c| go(c, start, next)).collect()),
        }
    }
    go(t, start, &mut 0)
}

/// Merge the leftmost shortest block of at least two cells on which the map
/// is affine (right depth minus left depth constant) and whose left cells
/// tile a cell of length `β^d`, provided both merged sequences are still
/// tree sequences.
fn merge_once(ctx: &Ctx, shapes: &[CaretShape], ld: &[u32], rd: &[u32]) -> Option<(Vec<u32>, Vec<u32>, Tree, Tree)> {
    let pow = |d: u32| FieldElem::beta_pow(ctx, d as i64);
    for i in 0..ld.len() {
        let shift = rd[i] as i64 - ld[i] as i64;
        let mut sum = pow(ld[i]);
        let mut min = ld[i];
        for j in i + 1..ld.len() {
            if rd[j] as i64 - ld[j] as i64 != shift {
                break;
            }
            sum = &sum + &pow(ld[j]);
            min = min.min(ld[j]);
            // β^d grows as d falls, so at most one d < min can match
            let Some(d) = (0..min).rev().find(|&d| pow(d) >= sum) else { break };
            if pow(d) != sum || (d as i64 + shift) < 0 {
                continue;
            }
            let splice = |v: &[u32], b: u32| -> Vec<u32> {
                let mut out = v[..i].to_vec();
                out.push(b);
                out.extend_from_slice(&v[j + 1..]);
                out
            };
            let (nl, nr) = (splice(ld, d), splice(rd, (d as i64 + shift) as u32));
            let tl = Realizer::new(shapes, &nl).realize(0, nl.len(), 0);
            let tr = Realizer::new(shapes, &nr).realize(0, nr.len(), 0);
            if let (Some(tl), Some(tr)) = (tl, tr) {
                return Some((nl, nr, tl, tr));
            }
        }
    }
    None
}

/// Remove redundant caret pairs. Exposed carets of equal shape at equal leaf
/// positions are removed first, keeping the remaining structure; then
/// blocks of cells on which the map is affine are merged, rebuilding the trees from
/// their depth sequences if anything merged.
pub fn reduce(tp: &TreePair) -> TreePair {
    let (mut l, mut r) = (tp.left.clone(), tp.right.clone());
    loop {
        let er = exposed(&r);
        let hit = exposed(&l).into_iter().find(|e| er.contains(e));
        match hit {
            Some((i, _)) => {
                l = collapse(&l, i);
                r = collapse(&r, i);
            }
            None => break,
        }
    }
    let shapes = enumerate_carets(&tp.ctx, DEFAULT_CARET_CAP).expect("context shapes are enumerable");
    let (mut ld, mut rd) = (l.leaf_depths(), r.leaf_depths());
    while let Some((nl, nr, tl, tr)) = merge_once(&tp.ctx, &shapes, &ld, &rd) {
        (ld, rd, l, r) = (nl, nr, tl, tr);
    }
    TreePair { ctx: tp.ctx.clone(), left: l, right: r }
}

/// Whether two pairs represent the same map. Equal reduced leaf-depth
/// sequences decide it directly. Reduced forms need not be unique once the
/// context has several caret shapes, so otherwise `a * b^-1` is built and
/// its two leaf-depth sequences compared: they agree exactly when it is the
/// identity.
pub fn equivalent(a: &TreePair, b: &TreePair) -> Result<bool, TreeError> {
    if a.ctx.poly() != b.ctx.poly() {
        return Err(TreeError::ContextMismatch);
    }
    let (ra, rb) = (reduce(a), reduce(b));
    if ra.left.leaf_depths() == rb.left.leaf_depths() && ra.right.leaf_depths() == rb.right.leaf_depths() {
        return Ok(true);
    }
    let h = compose_pairs(&ra, &rb.inverse(), DEFAULT_COMPOSE_BUDGET)?;
    Ok(h.left.leaf_depths() == h.right.leaf_depths())
}

#[derive(Clone)]
struct Expansion {
    second: bool,
    leaf: usize,
    shape: usize,
}

struct SearchState {
    r1: Vec<u32>,
    l2: Vec<u32>,
    pos: usize,
    log: Vec<Expansion>,
}

/// `f * g`: apply `f`, then `g`. Carets are added to the range tree of `f`
/// and the domain tree of `g` until the two agree, and mirrored onto the
/// other tree of each pair. The search is breadth first over caret shapes,
/// so it finds a refinement with fewest added carets; `budget` bounds the
/// number of expansions tried.
pub fn compose_pairs(f: &TreePair, g: &TreePair, budget: usize) -> Result<TreePair, TreeError> {
    if f.ctx.poly() != g.ctx.poly() {
        return Err(TreeError::ContextMismatch);
    }
    let shapes = enumerate_carets(&f.ctx, DEFAULT_CARET_CAP)?;
    let max_leg = shapes.iter().flat_map(|s| s.legs().iter().copied()).max().unwrap_or(1);
    let mut queue = VecDeque::from([SearchState {
        r1: f.right.leaf_depths(),
        l2: g.left.leaf_depths(),
        pos: 0,
        log: Vec::new(),
    }]);
    let mut seen: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    let mut spent = 0usize;
    while let Some(mut st) = queue.pop_front() {
        while st.pos < st.r1.len() && st.pos < st.l2.len() && st.r1[st.pos] == st.l2[st.pos] {
            st.pos += 1;
        }
        if st.pos == st.r1.len() || st.pos == st.l2.len() {
            // equal total length forces both to end together
            debug_assert_eq!(st.r1.len(), st.l2.len());
            return Ok(replay(f, g, &shapes, &st.log));
        }
        let p = st.pos;
        let second = st.l2[p] < st.r1[p];
        let d = if second { st.l2[p] } else { st.r1[p] };
        if d + max_leg > MAX_DEPTH {
            continue;
        }
        for (k, s) in shapes.iter().enumerate() {
            spent += 1;
            if spent > budget {
                return Err(TreeError::BudgetExceeded { budget });
            }
            let (mut r1, mut l2) = (st.r1.clone(), st.l2.clone());
            let side = if second { &mut l2 } else { &mut r1 };
            side.splice(p..=p, s.legs().iter().map(|l| d + l));
            if !seen.insert((r1[p..].to_vec(), l2[p..].to_vec())) {
                continue;
            }
            let mut log = st.log.clone();
            log.push(Expansion { second, leaf: p, shape: k });
            queue.push_back(SearchState { r1, l2, pos: p, log });
        }
    }
    Err(TreeError::NoCommonRefinement { depth: MAX_DEPTH })
}

fn replay(f: &TreePair, g: &TreePair, shapes: &[CaretShape], log: &[Expansion]) -> TreePair {
    let (mut l1, mut r1, mut l2, mut r2) = (f.left.clone(), f.right.clone(), g.left.clone(), g.right.clone());
    for e in log {
        let s = &shapes[e.shape];
        if e.second {
            l2 = l2.expand_leaf(e.leaf, s);
            r2 = r2.expand_leaf(e.leaf, s);
        } else {
            l1 = l1.expand_leaf(e.leaf, s);
            r1 = r1.expand_leaf(e.leaf, s);
        }
    }
    debug_assert_eq!(r1.leaf_depths(), l2.leaf_depths());
    TreePair { ctx: f.ctx.clone(), left: l1, right: r2 }
}

fn to_bigint(c: &[BigUint]) -> Vec<BigInt> {
    c.iter().cloned().map(BigInt::from).collect()
}

/// The context of `Q` when `ctx` is the context of `Q(x^k)`.
pub fn power_base(ctx: &Ctx, k: u32) -> Result<Ctx, TreeError> {
    let c = ctx.poly().coeffs();
    let ku = k as usize;
    let err = || TreeError::NotAPowerContext { poly: ctx.poly().to_string(), k };
    if ku == 0 || !c.len().is_multiple_of(ku) || c.iter().enumerate().any(|(i, a)| !(i + 1).is_multiple_of(ku) && !a.is_zero()) {
        return Err(err());
    }
    let base: Vec<BigUint> = c.iter().skip(ku - 1).step_by(ku).cloned().collect();
    Ok(BetaContext::new(SubdivisionPolynomial::new(&to_bigint(&base))?))
}

/// Multiply every leg by `k`, moving the pair to the context of `P(x^k)`.
pub fn power_map_up(tp: &TreePair, k: u32) -> Result<TreePair, TreeError> {
    if k == 0 {
        return Err(TreeError::IndivisibleLeg { leg: 0, k });
    }
    let ctx = BetaContext::new(tp.ctx.poly().compose_power(k as usize));
    let up = |t: &Tree| t.map_shapes(&|s| Ok::<_, TreeError>(s.scaled(k)));
    TreePair::new(&ctx, up(&tp.left)?, up(&tp.right)?)
}

/// Divide every leg by `k`, moving the pair from the context of `Q(x^k)` to
/// that of `Q`.
pub fn power_map_down(tp: &TreePair, k: u32) -> Result<TreePair, TreeError> {
    let base = power_base(&tp.ctx, k)?;
    let down = |t: &Tree| {
        t.map_shapes(&|s| {
            s.legs()
                .iter()
                .map(|&l| if l % k == 0 { Ok(l / k) } else { Err(TreeError::IndivisibleLeg { leg: l, k }) })
                .collect::<Result<Vec<u32>, _>>()
                .map(CaretShape)
        })
    };
    TreePair::new(&base, down(&tp.left)?, down(&tp.right)?)
}

/// Whether scaling legs by `k` maps the shapes of `ctx` onto the shapes of
/// its `x^k` context.
pub fn caret_bijection(ctx: &Ctx, k: u32) -> Result<bool, TreeError> {
    let up = BetaContext::new(ctx.poly().compose_power(k as usize));
    let mut scaled: Vec<CaretShape> = enumerate_carets(ctx, DEFAULT_CARET_CAP)?.iter().map(|s| s.scaled(k)).collect();
    scaled.sort();
    Ok(scaled == enumerate_carets(&up, DEFAULT_CARET_CAP)?)
}
