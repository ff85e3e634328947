//! Symbolic quantum automorphism groups.
//!
//! Expressions are built from the trivial group, Wang's quantum symmetric
//! groups `S_n^+`, opaque atoms for small base graphs, free products and
//! free wreath products with `S_d^+`. Values are kept in a normal form by
//! the smart constructors, so structural equality is equality of normal
//! forms.
//!
//! `S_n^+` has a commutative function algebra exactly for `n ≤ 3`; from
//! `n = 4` on it is noncommutative and infinite dimensional.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::canonical::{psi, rooted_forest_shape, small_graph_key, CanonKey, RootedForest, RootedShape};
use crate::decomposition::{decompose, BaseClass, DecompTree, LeafClass, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::schmidt::{factorial, small_summary};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub key: CanonKey,
    pub aut_order: BigUint,
    pub schmidt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QExpr {
    Trivial,
    /// `S_n^+`, `n ≥ 2`.
    SPlus(usize),
    /// `Qu(G)` of a small base graph with no further structure.
    Atom(Atom),
    /// At least two nontrivial factors, none a free product, sorted by text.
    FreeProd(Vec<QExpr>),
    /// `q ≀ S_d^+`, `d ≥ 2`, `q` nontrivial.
    Wreath(Box<QExpr>, usize),
}

impl QExpr {
    pub fn splus(n: usize) -> QExpr {
        if n <= 1 {
            QExpr::Trivial
        } else {
            QExpr::SPlus(n)
        }
    }

    /// Atoms of asymmetric graphs are trivial: in the supported classes an
    /// asymmetric graph has no quantum symmetry either.
    pub fn atom(key: CanonKey, aut_order: BigUint, schmidt: bool) -> QExpr {
        if aut_order.is_one() {
            QExpr::Trivial
        } else {
            QExpr::Atom(Atom {
                key,
                aut_order,
                schmidt,
            })
        }
    }

    pub fn free(factors: Vec<QExpr>) -> QExpr {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                QExpr::Trivial => {}
                QExpr::FreeProd(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => QExpr::Trivial,
            1 => flat.pop().expect("one factor"),
            _ => {
                flat.sort_by_cached_key(|e| e.to_string());
                QExpr::FreeProd(flat)
            }
        }
    }

    /// `q ≀ S_d^+`; `d = 0` gives the trivial group (no copies).
    pub fn wreath(q: QExpr, d: usize) -> QExpr {
        match (q, d) {
            (_, 0) => QExpr::Trivial,
            (q, 1) => q,
            (QExpr::Trivial, d) => QExpr::SPlus(d),
            (q, d) => QExpr::Wreath(Box::new(q), d),
        }
    }

    /// Rebuilds through the smart constructors.
    pub fn normalize(&self) -> QExpr {
        match self {
            QExpr::Trivial => QExpr::Trivial,
            QExpr::SPlus(n) => QExpr::splus(*n),
            QExpr::Atom(a) => QExpr::atom(a.key.clone(), a.aut_order.clone(), a.schmidt),
            QExpr::FreeProd(fs) => QExpr::free(fs.iter().map(QExpr::normalize).collect()),
            QExpr::Wreath(q, d) => QExpr::wreath(q.normalize(), *d),
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == QExpr::Trivial
    }

    /// Whether the function algebra is commutative, i.e. whether there is
    /// no quantum symmetry. Expects normal form.
    pub fn is_commutative(&self) -> bool {
        match self {
            QExpr::Trivial => true,
            QExpr::SPlus(n) => *n <= 3,
            QExpr::Atom(a) => !a.schmidt,
            // nontrivial factors: the free product surjects onto a free
            // product of two nontrivial groups, which is noncommutative
            QExpr::FreeProd(_) => false,
            // d ≥ 2 copies of a nontrivial factor already give a free product
            QExpr::Wreath(_, _) => false,
        }
    }

    /// Order of the classical group with the abelianised function algebra.
    pub fn classical_order(&self) -> BigUint {
        match self {
            QExpr::Trivial => BigUint::one(),
            QExpr::SPlus(n) => factorial(*n),
            QExpr::Atom(a) => a.aut_order.clone(),
            QExpr::FreeProd(fs) => fs.iter().map(QExpr::classical_order).product(),
            QExpr::Wreath(q, d) => q.classical_order().pow(*d as u32) * factorial(*d),
        }
    }

    /// Built from the trivial group by free and wreath products alone.
    pub fn in_jordan_grammar(&self) -> bool {
        match self {
            QExpr::Trivial | QExpr::SPlus(_) => true,
            QExpr::Atom(_) => false,
            QExpr::FreeProd(fs) => fs.iter().all(QExpr::in_jordan_grammar),
            QExpr::Wreath(q, _) => q.in_jordan_grammar(),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        match self {
            QExpr::Trivial | QExpr::SPlus(_) => vec![],
            QExpr::Atom(a) => vec![a],
            QExpr::FreeProd(fs) => fs.iter().flat_map(QExpr::atoms).collect(),
            QExpr::Wreath(q, _) => q.atoms(),
        }
    }
}

pub fn qexpr_equal(a: &QExpr, b: &QExpr) -> bool {
    a.normalize() == b.normalize()
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QExpr::Trivial => f.write_str("1"),
            QExpr::SPlus(n) => write!(f, "S+({n})"),
            QExpr::Atom(a) => write!(
                f,
                "Atom({},aut={},schmidt={})",
                a.key.to_hex(),
                a.aut_order,
                u8::from(a.schmidt)
            ),
            QExpr::FreeProd(fs) => {
                f.write_str("Free[")?;
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
            QExpr::Wreath(q, d) => write!(f, "Wr({q},{d})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::ExprParse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, lit: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected {lit:?}"))
        }
    }

    fn peek(&self, lit: &str) -> bool {
        self.s[self.pos..].starts_with(lit.as_bytes())
    }

    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn number(&mut self) -> Result<usize> {
        let at = self.pos;
        self.digits()?.parse().map_err(|_| Error::ExprParse {
            pos: at,
            msg: "number too large".into(),
        })
    }

    fn expr(&mut self) -> Result<QExpr> {
        if self.peek("1") && !self.s.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
            Ok(QExpr::Trivial)
        } else if self.peek("S+(") {
            self.eat("S+(")?;
            let n = self.number()?;
            self.eat(")")?;
            Ok(QExpr::SPlus(n))
        } else if self.peek("Atom(") {
            self.eat("Atom(")?;
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_hexdigit() {
                self.pos += 1;
            }
            let hex = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
            let key = CanonKey::from_hex(hex).map_err(|_| Error::ExprParse {
                pos: start,
                msg: "bad atom key".into(),
            })?;
            self.eat(",aut=")?;
            let aut: BigUint = self.digits()?.parse().expect("digits parse");
            self.eat(",schmidt=")?;
            let schmidt = match self.digits()? {
                "0" => false,
                "1" => true,
                _ => return self.err("schmidt flag must be 0 or 1"),
            };
            self.eat(")")?;
            Ok(QExpr::Atom(Atom {
                key,
                aut_order: aut,
                schmidt,
            }))
        } else if self.peek("Free[") {
            self.eat("Free[")?;
            let mut fs = vec![self.expr()?];
            while self.peek(",") {
                self.eat(",")?;
                fs.push(self.expr()?);
            }
            self.eat("]")?;
            Ok(QExpr::FreeProd(fs))
        } else if self.peek("Wr(") {
            self.eat("Wr(")?;
            let q = self.expr()?;
            self.eat(",")?;
            let d = self.number()?;
            self.eat(")")?;
            Ok(QExpr::Wreath(Box::new(q), d))
        } else {
            self.err("expected an expression")
        }
    }
}

impl FromStr for QExpr {
    type Err = Error;

    /// Parses and normalises.
    fn from_str(s: &str) -> Result<QExpr> {
        let mut p = Parser {
            s: s.trim().as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.s.len() {
            return p.err("trailing input");
        }
        Ok(e.normalize())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum QExprJson {
    Trivial,
    Splus { n: usize },
    Atom { key: String, aut: String, schmidt: bool },
    Free { factors: Vec<QExprJson> },
    Wreath { base: Box<QExprJson>, d: usize },
}

impl From<&QExpr> for QExprJson {
    fn from(e: &QExpr) -> Self {
        match e {
            QExpr::Trivial => QExprJson::Trivial,
            QExpr::SPlus(n) => QExprJson::Splus { n: *n },
            QExpr::Atom(a) => QExprJson::Atom {
                key: a.key.to_hex(),
                aut: a.aut_order.to_string(),
                schmidt: a.schmidt,
            },
            QExpr::FreeProd(fs) => QExprJson::Free {
                factors: fs.iter().map(QExprJson::from).collect(),
            },
            QExpr::Wreath(q, d) => QExprJson::Wreath {
                base: Box::new(QExprJson::from(&**q)),
                d: *d,
            },
        }
    }
}

impl TryFrom<QExprJson> for QExpr {
    type Error = Error;

    fn try_from(j: QExprJson) -> Result<QExpr> {
        Ok(match j {
            QExprJson::Trivial => QExpr::Trivial,
            QExprJson::Splus { n } => QExpr::SPlus(n),
            QExprJson::Atom { key, aut, schmidt } => QExpr::Atom(Atom {
                key: CanonKey::from_hex(&key)?,
                aut_order: aut.parse().map_err(|_| Error::ExprParse {
                    pos: 0,
                    msg: format!("bad order {aut:?}"),
                })?,
                schmidt,
            }),
            QExprJson::Free { factors } => QExpr::FreeProd(
                factors
                    .into_iter()
                    .map(QExpr::try_from)
                    .collect::<Result<_>>()?,
            ),
            QExprJson::Wreath { base, d } => QExpr::Wreath(Box::new(QExpr::try_from(*base)?), d),
        })
    }
}

impl Serialize for QExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QExprJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QExprJson::deserialize(d)?;
        QExpr::try_from(j)
            .map(|e| e.normalize())
            .map_err(serde::de::Error::custom)
    }
}

fn qu_shape_forest(children: &[(RootedShape, usize)]) -> QExpr {
    QExpr::free(
        children
            .iter()
            .map(|(c, m)| QExpr::wreath(qu_shape_forest(&c.children), *m))
            .collect(),
    )
}

/// `Qu(F, r)` for a rooted forest: the free product over rooted isomorphism
/// classes of components, each wreathed with `S_a^+` for its multiplicity;
/// a rooted tree has the quantum group of the forest below its root.
pub fn qu_rooted(f: &RootedForest) -> QExpr {
    qu_shape_forest(&rooted_forest_shape(f))
}

fn qu_tree(t: &Graph) -> QExpr {
    let rooted = psi(t).expect("leaf is a tree");
    qu_rooted(&rooted.remove_root())
}

fn qu_leaf(g: &Graph, class: LeafClass) -> QExpr {
    match class {
        LeafClass::SingleVertex => QExpr::Trivial,
        LeafClass::Tree => qu_tree(g),
        LeafClass::CoTree => qu_tree(&g.complement()),
        LeafClass::Complete | LeafClass::Edgeless => QExpr::splus(g.n()),
        LeafClass::Small => match decompose(g, BaseClass::TreeCograph) {
            Some(d) => qu_decomp(&d),
            None => {
                let s = small_summary(g);
                QExpr::atom(small_graph_key(g), s.aut_order, s.satisfies_schmidt)
            }
        },
    }
}

/// `Qu` from a decomposition tree. Summands are grouped by isomorphism,
/// where the sum formula asks for grouping by quantum isomorphism; the two
/// agree inside every class this crate decomposes.
pub fn qu_decomp(d: &DecompTree) -> QExpr {
    match d.kind() {
        NodeKind::Leaf(class) => qu_leaf(d.graph(), *class),
        NodeKind::Sum(children) | NodeKind::CoSum(children) => QExpr::free(
            children
                .iter()
                .map(|c| QExpr::wreath(qu_decomp(&c.tree), c.mult))
                .collect(),
        ),
    }
}

/// `Qu(g)` for forests, cographs, tree-cographs and closures of graphs on at
/// most five vertices.
pub fn qu_expr(g: &Graph) -> Result<QExpr> {
    for base in [BaseClass::TreeCograph, BaseClass::G5] {
        if let Some(d) = decompose(g, base) {
            return Ok(qu_decomp(&d));
        }
    }
    Err(Error::Unsupported(format!(
        "no quantum automorphism rule for this graph on {} vertices",
        g.n()
    )))
}
