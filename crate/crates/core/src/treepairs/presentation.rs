use std::collections::HashMap;
use std::fmt;

use super::pair::TreePair;
use super::tree::Tree;
use super::TreeError;
use crate::plmaps::{ftau_generator, tau_context, GenKind, PlMap};
use crate::subdivision::quadratic_tree_pair_defined;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub kind: GenKind,
    pub index: u32,
}

impl Letter {
    pub fn x(index: u32) -> Letter {
        Letter { kind: GenKind::X, index }
    }

    pub fn y(index: u32) -> Letter {
        Letter { kind: GenKind::Y, index }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// `f_j g_i = g_i f_{j+a+b-1}` for `i < j`.
    Conjugation,
    /// Rewriting one caret of each type as the other.
    Caret,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn word(w: &[Letter]) -> String {
    w.iter().map(Letter::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", word(&self.lhs), word(&self.rhs))
    }
}

/// Relations of the group for `ax^2 + bx - 1` with generator indices up to
/// `max_index`: conjugations for all `i < j <= max_index` and the caret
/// relation `x_i x_{i+a} ... x_{i+2a-1} = y_i ... y_{i+a-1} y_i` for
/// `i <= max_index`. Words read left to right.
pub fn emit_presentation(a: u64, b: u64, max_index: u32) -> Result<Vec<Relation>, TreeError> {
    if a == 0 || !quadratic_tree_pair_defined(a, b) {
        return Err(TreeError::Undefined { a, b });
    }
    let shift = (a + b - 1) as u32;
    let a = a as u32;
    let kinds = [GenKind::X, GenKind::Y];
    let mut out = Vec::new();
    for i in 0..max_index {
        for j in i + 1..=max_index {
            for f in kinds {
                for g in kinds {
                    let (fj, gi) = (Letter { kind: f, index: j }, Letter { kind: g, index: i });
                    out.push(Relation {
                        kind: RelationKind::Conjugation,
                        lhs: vec![fj, gi],
                        rhs: vec![gi, Letter { kind: f, index: j + shift }],
                    });
                }
            }
        }
    }
    for i in 0..=max_index {
        let mut lhs = vec![Letter::x(i)];
        lhs.extend((i + a..i + 2 * a).map(Letter::x));
        let mut rhs: Vec<Letter> = (i..i + a).map(Letter::y).collect();
        rhs.push(Letter::y(i));
        out.push(Relation { kind: RelationKind::Caret, lhs, rhs });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `(fg)(t) = g(f(t))`
    LeftToRight,
    /// `(fg)(t) = f(g(t))`
    RightToLeft,
}

/// The map of a word in the `x_i, y_i` generators of the golden-ratio group.
pub fn evaluate_word(w: &[Letter], conv: Convention, cache: &mut HashMap<Letter, PlMap>) -> PlMap {
    let mut out = PlMap::identity(&tau_context());
    for l in w {
        let g = cache.entry(*l).or_insert_with(|| ftau_generator(l.kind, l.index));
        out = match conv {
            Convention::LeftToRight => out.compose(g),
            Convention::RightToLeft => g.compose(&out),
        }
        .expect("same context");
    }
    out
}

/// The pair for `x_i` or `y_i`: a right spine of `i` carets `(2,1)` ending
/// in the pair for index 0.
pub fn ftau_treepair(kind: GenKind, i: u32) -> TreePair {
    fn spine(i: u32, tail: Tree) -> Tree {
        (0..i).fold(tail, |t, _| Tree::node(&[2, 1], vec![Tree::Leaf, t]))
    }
    let (l, r) = match kind {
        GenKind::X => (
            Tree::node(&[2, 1], vec![Tree::caret(&[2, 1]), Tree::Leaf]),
            Tree::node(&[2, 1], vec![Tree::Leaf, Tree::caret(&[2, 1])]),
        ),
        GenKind::Y => (Tree::caret(&[2, 1]), Tree::caret(&[1, 2])),
    };
    TreePair::new(&tau_context(), spine(i, l), spine(i, r)).expect("golden-ratio shapes")
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: Relation,
    pub holds_left_to_right: bool,
    pub holds_right_to_left: bool,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self, conv: Convention) -> bool {
        self.checks.iter().all(|c| match conv {
            Convention::LeftToRight => c.holds_left_to_right,
            Convention::RightToLeft => c.holds_right_to_left,
        })
    }

    /// The convention under which every relation holds, if exactly one does.
    pub fn convention(&self) -> Option<Convention> {
        match (self.all_hold(Convention::LeftToRight), self.all_hold(Convention::RightToLeft)) {
            (true, false) => Some(Convention::LeftToRight),
            (false, true) => Some(Convention::RightToLeft),
            _ => None,
        }
    }
}

pub fn check_relations(rels: &[Relation]) -> RelationReport {
    let mut cache = HashMap::new();
    let mut holds = |r: &Relation, conv| evaluate_word(&r.lhs, conv, &mut cache) == evaluate_word(&r.rhs, conv, &mut cache);
    let checks = rels
        .iter()
        .map(|r| RelationCheck {
            relation: r.clone(),
            holds_left_to_right: holds(r, Convention::LeftToRight),
            holds_right_to_left: holds(r, Convention::RightToLeft),
        })
        .collect();
    RelationReport { checks }
}

/// Evaluate the golden-ratio relations with indices up to `max_i` as exact
/// maps under both composition conventions.
pub fn check_ftau_relations(max_i: u32) -> RelationReport {
    check_relations(&emit_presentation(1, 1, max_i).expect("(1,1) is defined"))
}
