use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::BigRational;

use super::TreeError;
use crate::exactnum::FieldElem;
use crate::plmaps::Partition;
use crate::subdivision::{enumerate_carets, BetaContext, CaretShape, Ctx, DEFAULT_CARET_CAP};

/// A tree of carets; each node has one child per leg.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(CaretShape, Vec<Tree>),
}

impl Tree {
    pub fn caret(legs: &[u32]) -> Tree {
        Tree::Node(CaretShape(legs.to_vec()), vec![Tree::Leaf; legs.len()])
    }

    pub fn node(legs: &[u32], children: Vec<Tree>) -> Tree {
        assert_eq!(legs.len(), children.len(), "one child per leg");
        Tree::Node(CaretShape(legs.to_vec()), children)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, cs) => cs.iter().map(Tree::leaves).sum(),
        }
    }

    pub fn carets(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(_, cs) => 1 + cs.iter().map(Tree::carets).sum::<usize>(),
        }
    }

    fn depths_into(&self, d: u32, out: &mut Vec<u32>) {
        match self {
            Tree::Leaf => out.push(d),
            Tree::Node(s, cs) => {
                for (l, c) in s.legs().iter().zip(cs) {
                    c.depths_into(d + l, out);
                }
            }
        }
    }

    /// Left-to-right leaf depths, a leaf's depth being the sum of the leg
    /// lengths on its root path.
    pub fn leaf_depths(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.depths_into(0, &mut out);
        out
    }

    /// Every caret is a shape of the context.
    pub fn fits(&self, ctx: &BetaContext) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(s, cs) => s.fits(ctx) && cs.iter().all(|c| c.fits(ctx)),
        }
    }

    /// Shapes in preorder.
    pub fn shapes(&self) -> Vec<&CaretShape> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Tree, out: &mut Vec<&'a CaretShape>) {
            if let Tree::Node(s, cs) = t {
                out.push(s);
                cs.iter().for_each(|c| go(c, out));
            }
        }
        go(self, &mut out);
        out
    }

    /// Replace leaf `j` (left to right) by a caret.
    pub fn expand_leaf(&self, j: usize, shape: &CaretShape) -> Tree {
        fn go(t: &Tree, j: &mut usize, shape: &CaretShape) -> Tree {
            match t {
                Tree::Leaf => {
                    let out = if *j == 0 {
                        Tree::Node(shape.clone(), vec![Tree::Leaf; shape.arity()])
                    } else {
                        Tree::Leaf
                    };
                    *j = j.wrapping_sub(1);
                    out
                }
                Tree::Node(s, cs) => Tree::Node(s.clone(), cs.iter().map(|c| go(c, j, shape)).collect()),
            }
        }
        assert!(j < self.leaves(), "leaf index out of range");
        let mut j = j;
        go(self, &mut j, shape)
    }

    pub fn map_shapes<E>(&self, f: &impl Fn(&CaretShape) -> Result<CaretShape, E>) -> Result<Tree, E> {
        match self {
            Tree::Leaf => Ok(Tree::Leaf),
            Tree::Node(s, cs) => Ok(Tree::Node(
                f(s)?,
                cs.iter().map(|c| c.map_shapes(f)).collect::<Result<_, _>>()?,
            )),
        }
    }

    /// Parse the `Display` form, e.g. `(2,1)[L,(2,1)[L,L]]`.
    pub fn parse(s: &str) -> Result<Tree, TreeError> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_at(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(TreeError::Parse(format!("trailing input at offset {pos}")));
        }
        Ok(t)
    }
}

fn parse_at(c: &[char], pos: &mut usize) -> Result<Tree, TreeError> {
    let err = |m: &str, p: usize| TreeError::Parse(format!("{m} at offset {p}"));
    match c.get(*pos) {
        Some('L') => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some('(') => {
            let close = c[*pos..].iter().position(|&x| x == ')').ok_or_else(|| err("unclosed shape", *pos))? + *pos;
            let legs = c[*pos + 1..close]
                .iter()
                .collect::<String>()
                .split(',')
                .map(|x| x.parse::<u32>().ok().filter(|&l| l > 0))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| err("bad leg list", *pos))?;
            *pos = close + 1;
            if c.get(*pos) != Some(&'[') {
                return Ok(Tree::caret(&legs));
            }
            *pos += 1;
            let mut children = Vec::new();
            loop {
                children.push(parse_at(c, pos)?);
                match c.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(']') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(err("expected ',' or ']'", *pos)),
                }
            }
            if children.len() != legs.len() {
                return Err(err("child count differs from leg count", *pos));
            }
            Ok(Tree::Node(CaretShape(legs), children))
        }
        _ => Err(err("expected 'L' or '('", *pos)),
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "L"),
            Tree::Node(s, cs) => {
                write!(f, "{s}[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Cells of length `β^depth` laid out left to right.
pub fn depths_to_partition(ctx: &Ctx, depths: &[u32]) -> Result<Partition, TreeError> {
    let lengths: Vec<FieldElem> = depths.iter().map(|&d| FieldElem::beta_pow(ctx, d as i64)).collect();
    Partition::from_lengths(ctx, &lengths).map_err(|_| TreeError::NotAPartition)
}

pub fn tree_to_partition(ctx: &Ctx, t: &Tree) -> Partition {
    depths_to_partition(ctx, &t.leaf_depths()).expect("tree cells tile [0, 1]")
}

pub fn leaf_depths(t: &Tree) -> Vec<u32> {
    t.leaf_depths()
}

/// Builds trees for depth sequences. Shapes are tried in lexicographic
/// order and children take the shortest feasible prefix, so the result is
/// deterministic.
pub struct Realizer<'a> {
    shapes: Vec<CaretShape>,
    depths: &'a [u32],
    memo: HashMap<(usize, usize, u32), Option<Tree>>,
}

impl<'a> Realizer<'a> {
    pub fn new(shapes: &[CaretShape], depths: &'a [u32]) -> Self {
        Realizer { shapes: shapes.to_vec(), depths, memo: HashMap::new() }
    }

    /// A tree rooted at depth `d` whose leaves have `depths[s..e]`.
    pub fn realize(&mut self, s: usize, e: usize, d: u32) -> Option<Tree> {
        if let Some(t) = self.memo.get(&(s, e, d)) {
            return t.clone();
        }
        let out = self.compute(s, e, d);
        self.memo.insert((s, e, d), out.clone());
        out
    }

    fn compute(&mut self, s: usize, e: usize, d: u32) -> Option<Tree> {
        if e - s == 1 && self.depths[s] == d {
            return Some(Tree::Leaf);
        }
        if e - s < 2 || self.depths[s..e].iter().any(|&x| x <= d) {
            return None;
        }
        for k in 0..self.shapes.len() {
            let shape = self.shapes[k].clone();
            if e - s < shape.arity() {
                continue;
            }
            if let Some(children) = self.split(&shape, 0, s, e, d) {
                return Some(Tree::Node(shape, children));
            }
        }
        None
    }

    fn split(&mut self, shape: &CaretShape, j: usize, s: usize, e: usize, d: u32) -> Option<Vec<Tree>> {
        let legs = shape.legs();
        let rest = legs.len() - j - 1;
        if rest == 0 {
            return self.realize(s, e, d + legs[j]).map(|t| vec![t]);
        }
        for q in s + 1..=e - rest {
            if let Some(t) = self.realize(s, q, d + legs[j]) {
                if let Some(mut tail) = self.split(shape, j + 1, q, e, d) {
                    tail.insert(0, t);
                    return Some(tail);
                }
            }
        }
        None
    }
}

/// A tree with the given leaf depths, if one exists.
pub fn realize(ctx: &Ctx, depths: &[u32]) -> Result<Option<Tree>, TreeError> {
    let shapes = enumerate_carets(ctx, DEFAULT_CARET_CAP)?;
    if depths.is_empty() {
        return Ok(None);
    }
    Ok(Realizer::new(&shapes, depths).realize(0, depths.len(), 0))
}

/// Number of trees whose leaves all have depth at most `bound`.
pub fn count_trees(ctx: &Ctx, bound: u32) -> Result<num_bigint::BigUint, TreeError> {
    let shapes = enumerate_carets(ctx, DEFAULT_CARET_CAP)?;
    let mut t = vec![num_bigint::BigUint::from(1u32); bound as usize + 1];
    for d in (0..=bound).rev() {
        for s in &shapes {
            if s.legs().iter().all(|&l| d + l <= bound) {
                let prod = s.legs().iter().fold(num_bigint::BigUint::from(1u32), |acc, &l| acc * &t[(d + l) as usize]);
                t[d as usize] += prod;
            }
        }
    }
    Ok(t[0].clone())
}

/// Every tree whose leaves all have depth at most `bound`, in a fixed order.
pub fn enumerate_trees(ctx: &Ctx, bound: u32, cap: usize) -> Result<Vec<Tree>, TreeError> {
    let count = count_trees(ctx, bound)?;
    if count > num_bigint::BigUint::from(cap) {
        return Err(TreeError::TooManyTrees { count, cap });
    }
    let shapes = enumerate_carets(ctx, DEFAULT_CARET_CAP)?;
    let mut by_depth: Vec<Vec<Tree>> = vec![Vec::new(); bound as usize + 1];
    for d in (0..=bound).rev() {
        let mut out = vec![Tree::Leaf];
        for s in &shapes {
            if !s.legs().iter().all(|&l| d + l <= bound) {
                continue;
            }
            let mut partial: Vec<Vec<Tree>> = vec![Vec::new()];
            for &l in s.legs() {
                let opts = &by_depth[(d + l) as usize];
                partial = partial
                    .iter()
                    .flat_map(|p| {
                        opts.iter().map(move |o| {
                            let mut q = p.clone();
                            q.push(o.clone());
                            q
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(|cs| Tree::Node(s.clone(), cs)));
        }
        by_depth[d as usize] = out;
    }
    Ok(std::mem::take(&mut by_depth[0]))
}

/// A tree whose leaves refine a partition; `leaf_cells[j]` is the index of
/// the partition cell containing leaf `j`. Leaves sharing a cell are the
/// redundant ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTree {
    pub tree: Tree,
    pub leaf_cells: Vec<usize>,
}

type Key = (Vec<BigRational>, u32);

struct PartitionSearch<'a> {
    ctx: &'a Ctx,
    shapes: Vec<CaretShape>,
    interior: Vec<FieldElem>,
    bound: u32,
    memo: HashMap<Key, Option<(usize, Tree)>>,
}

impl PartitionSearch<'_> {
    fn search(&mut self, start: &FieldElem, d: u32) -> Option<(usize, Tree)> {
        let key = (start.coeffs(), d);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let end = start + &FieldElem::beta_pow(self.ctx, d as i64);
        let cut = self.interior.iter().any(|p| p > start && *p < end);
        let out = if !cut {
            Some((1, Tree::Leaf))
        } else {
            let mut best: Option<(usize, Tree)> = None;
            for shape in self.shapes.clone() {
                if shape.legs().iter().any(|&l| d + l > self.bound) {
                    continue;
                }
                let mut pos = start.clone();
                let mut children = Vec::new();
                let mut leaves = 0;
                for &l in shape.legs() {
                    match self.search(&pos, d + l) {
                        Some((n, t)) => {
                            leaves += n;
                            children.push(t);
                        }
                        None => break,
                    }
                    pos = &pos + &FieldElem::beta_pow(self.ctx, (d + l) as i64);
                }
                if children.len() == shape.arity() && best.as_ref().is_none_or(|b| leaves < b.0) {
                    best = Some((leaves, Tree::Node(shape, children)));
                }
            }
            best
        };
        self.memo.insert(key, out.clone());
        out
    }

    /// Boundary points of all cells reachable within the bound.
    fn reachable(&self) -> Vec<FieldElem> {
        let mut seen: HashSet<Key> = HashSet::new();
        let mut pts: Vec<FieldElem> = Vec::new();
        let mut stack = vec![(FieldElem::zero(self.ctx), 0u32)];
        while let Some((s, d)) = stack.pop() {
            if !seen.insert((s.coeffs(), d)) {
                continue;
            }
            if !pts.contains(&s) {
                pts.push(s.clone());
            }
            for shape in &self.shapes {
                if shape.legs().iter().any(|&l| d + l > self.bound) {
                    continue;
                }
                let mut pos = s.clone();
                for &l in shape.legs() {
                    stack.push((pos.clone(), d + l));
                    pos = &pos + &FieldElem::beta_pow(self.ctx, (d + l) as i64);
                }
            }
        }
        pts
    }
}

/// Search for a tree whose leaf boundaries include every breakpoint of `p`,
/// preferring fewest leaves, then lexicographically smallest shapes.
pub fn partition_to_tree(p: &Partition, depth_bound: u32) -> Result<PartitionTree, TreeError> {
    let ctx = p.context().clone();
    let shapes = enumerate_carets(&ctx, DEFAULT_CARET_CAP)?;
    let pts = p.points();
    let interior = pts[1..pts.len() - 1].to_vec();
    let mut s = PartitionSearch { ctx: &ctx, shapes, interior, bound: depth_bound, memo: HashMap::new() };
    match s.search(&FieldElem::zero(&ctx), 0) {
        Some((_, tree)) => {
            let cells = tree_to_partition(&ctx, &tree);
            let mut leaf_cells = Vec::with_capacity(tree.leaves());
            let mut cell = 0;
            for start in &cells.points()[..cells.points().len() - 1] {
                while *start >= pts[cell + 1] {
                    cell += 1;
                }
                leaf_cells.push(cell);
            }
            Ok(PartitionTree { tree, leaf_cells })
        }
        None => {
            let reach = s.reachable();
            let offender = s
                .interior
                .iter()
                .find(|p| !reach.contains(p))
                .or(s.interior.first())
                .cloned()
                .expect("a partition without breakpoints is a single leaf");
            Err(TreeError::Unrepresentable { breakpoint: offender, bound: depth_bound })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::validate_subdivision_u64;

    fn tau() -> Ctx {
        validate_subdivision_u64(&[1, 1]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s = "(2,1)[L,(2,1)[L,L]]";
        let t = Tree::parse(s).unwrap();
        assert_eq!(t.to_string(), s);
        assert_eq!(Tree::parse("(1,2)").unwrap(), Tree::caret(&[1, 2]));
        assert!(Tree::parse("(1,2)[L]").is_err());
        assert!(Tree::parse("(0,2)").is_err());
        assert!(Tree::parse("L,").is_err());
    }

    #[test]
    fn equitree_depths_and_partitions() {
        let ctx = tau();
        let a = Tree::parse("(2,1)[L,(2,1)[L,L]]").unwrap();
        let b = Tree::parse("(1,2)[(1,2)[L,L],L]").unwrap();
        assert_eq!(a.leaf_depths(), vec![2, 3, 2]);
        assert_eq!(b.leaf_depths(), vec![2, 3, 2]);
        let pa = tree_to_partition(&ctx, &a);
        assert_eq!(pa, tree_to_partition(&ctx, &b));
        let t = |k| FieldElem::beta_pow(&ctx, k);
        assert_eq!(pa.lengths(), vec![t(2), t(3), t(2)]);
    }

    #[test]
    fn cubic_relation_trees() {
        let ctx = validate_subdivision_u64(&[1, 0, 1]).unwrap();
        let a = Tree::parse("(3,1)[L,(3,1)[(1,3)[L,L],(3,1)[L,L]]]").unwrap();
        let b = Tree::parse("(1,3)[(1,3)[(1,3)[L,L],(3,1)[L,L]],L]").unwrap();
        assert!(a.fits(&ctx) && b.fits(&ctx));
        assert_eq!(a.leaf_depths(), vec![3, 5, 7, 5, 3]);
        assert_eq!(b.leaf_depths(), vec![3, 5, 7, 5, 3]);
    }

    #[test]
    fn single_caret_partitions() {
        let ctx = tau();
        let p = tree_to_partition(&ctx, &Tree::caret(&[2, 1]));
        assert_eq!(p.points()[1], FieldElem::beta_pow(&ctx, 2));
        let f = validate_subdivision_u64(&[2]).unwrap();
        let p = tree_to_partition(&f, &Tree::caret(&[1, 1]));
        assert_eq!(p.points()[1].as_rational().unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(Tree::caret(&[1, 2]).leaf_depths(), vec![1, 2]);
    }

    #[test]
    fn realize_finds_trees() {
        let ctx = tau();
        let t = realize(&ctx, &[2, 3, 2]).unwrap().unwrap();
        assert_eq!(t.leaf_depths(), vec![2, 3, 2]);
        assert!(realize(&ctx, &[1, 1]).unwrap().is_none());
        assert!(realize(&ctx, &[3, 2]).unwrap().is_none());
        assert_eq!(realize(&ctx, &[0]).unwrap(), Some(Tree::Leaf));
    }

    #[test]
    fn partition_to_tree_examples() {
        let f = validate_subdivision_u64(&[2]).unwrap();
        let p = tree_to_partition(&f, &Tree::caret(&[1, 1]));
        assert_eq!(partition_to_tree(&p, 8).unwrap().tree, Tree::caret(&[1, 1]));

        let ctx = tau();
        let p = tree_to_partition(&ctx, &Tree::caret(&[2, 1]));
        let r = partition_to_tree(&p, 8).unwrap();
        assert_eq!(r.tree, Tree::caret(&[2, 1]));
        assert_eq!(r.leaf_cells, vec![0, 1]);
    }

    #[test]
    fn sqrt_tau_is_not_a_leaf_boundary() {
        let ctx = validate_subdivision_u64(&[0, 1, 0, 1]).unwrap();
        let g = FieldElem::beta(&ctx);
        let p = Partition::new(&ctx, vec![FieldElem::zero(&ctx), g.clone(), FieldElem::one(&ctx)]).unwrap();
        match partition_to_tree(&p, 12) {
            Err(TreeError::Unrepresentable { breakpoint, bound }) => {
                assert_eq!(breakpoint, g);
                assert_eq!(bound, 12);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn refinement_marks_redundant_leaves() {
        let ctx = tau();
        let t = |k| FieldElem::beta_pow(&ctx, k);
        let p = Partition::new(&ctx, vec![FieldElem::zero(&ctx), t(1), t(0)]).unwrap();
        let r = partition_to_tree(&p, 3).unwrap();
        assert_eq!(r.tree, Tree::caret(&[1, 2]));
        // τ^2 + τ^4 needs the (2,1) caret's right leaf split again
        let p = Partition::new(&ctx, vec![FieldElem::zero(&ctx), t(2), &t(2) + &t(4), t(0)]).unwrap();
        let r = partition_to_tree(&p, 6).unwrap();
        let cells = tree_to_partition(&ctx, &r.tree);
        for q in p.points() {
            assert!(cells.points().contains(q));
        }
        assert_eq!(r.leaf_cells.len(), r.tree.leaves());
    }

    #[test]
    fn quartic_trees_have_even_depths() {
        let ctx = validate_subdivision_u64(&[0, 1, 0, 1]).unwrap();
        assert_eq!(count_trees(&ctx, 12).unwrap(), num_bigint::BigUint::from(51_859u32));
        let trees = enumerate_trees(&ctx, 6, 1000).unwrap();
        assert_eq!(trees.len(), 7);
        assert!(trees.iter().all(|t| t.leaf_depths().iter().all(|d| d % 2 == 0)));
        assert!(enumerate_trees(&ctx, 12, 100).is_err());
    }

    #[test]
    fn expand_leaf_replaces_the_indexed_leaf() {
        let t = Tree::caret(&[1, 2]).expand_leaf(1, &CaretShape(vec![2, 1]));
        assert_eq!(t.to_string(), "(1,2)[L,(2,1)[L,L]]");
        assert_eq!(t.leaf_depths(), vec![1, 4, 3]);
    }
}
