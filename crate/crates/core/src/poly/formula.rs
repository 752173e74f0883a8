//! Negation-free Boolean formulas over closed sign conditions.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::interval::{interval_evaluate_f64, Interval};
use crate::poly::polynomial::Polynomial;
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    /// Whether a value with the given sign (-1, 0, 1) satisfies the relation.
    pub fn holds_for_sign(self, sign: i8) -> bool {
        match self {
            Relation::Ge => sign >= 0,
            Relation::Le => sign <= 0,
            Relation::Eq => sign == 0,
        }
    }
}

/// `poly rel 0` with `rel` one of the three closed relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignAtom {
    pub poly: Polynomial,
    pub relation: Relation,
}

/// AND/OR tree. There is deliberately no negation variant.
#[derive(Clone, Debug, PartialEq)]
pub enum FormulaNode<A> {
    Atom(A),
    And(Vec<FormulaNode<A>>),
    Or(Vec<FormulaNode<A>>),
}

impl<A> FormulaNode<A> {
    pub fn evaluate_with(&self, eval_atom: &mut impl FnMut(&A) -> bool) -> bool {
        match self {
            FormulaNode::Atom(a) => eval_atom(a),
            FormulaNode::And(children) => children.iter().all(|c| c.evaluate_with(eval_atom)),
            FormulaNode::Or(children) => children.iter().any(|c| c.evaluate_with(eval_atom)),
        }
    }

    pub fn try_map<B, E>(&self, f: &mut impl FnMut(&A) -> Result<B, E>) -> Result<FormulaNode<B>, E> {
        Ok(match self {
            FormulaNode::Atom(a) => FormulaNode::Atom(f(a)?),
            FormulaNode::And(cs) => FormulaNode::And(cs.iter().map(|c| c.try_map(f)).collect::<Result<_, _>>()?),
            FormulaNode::Or(cs) => FormulaNode::Or(cs.iter().map(|c| c.try_map(f)).collect::<Result<_, _>>()?),
        })
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            FormulaNode::Atom(a) => out.push(a),
            FormulaNode::And(cs) | FormulaNode::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    /// Node-type skeleton, e.g. `and(atom,or(atom,atom))`.
    pub fn shape(&self) -> String {
        match self {
            FormulaNode::Atom(_) => "atom".into(),
            FormulaNode::And(cs) => format!("and({})", cs.iter().map(|c| c.shape()).collect::<Vec<_>>().join(",")),
            FormulaNode::Or(cs) => format!("or({})", cs.iter().map(|c| c.shape()).collect::<Vec<_>>().join(",")),
        }
    }
}

/// A formula describing a closed semi-algebraic set: atoms are `P >= 0`,
/// `P <= 0` or `P = 0`, combined with AND/OR only. `polynomials` holds the
/// distinct atom polynomials in first-appearance order.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormula {
    var_count: usize,
    var_prefix: String,
    tree: FormulaNode<SignAtom>,
    polynomials: Vec<Polynomial>,
}

impl ClosedFormula {
    pub fn from_tree(var_count: usize, var_prefix: &str, tree: FormulaNode<SignAtom>) -> Result<Self> {
        if var_count == 0 {
            return Err(Error::InvalidArgument("formulas need at least one variable".into()));
        }
        let mut seen = HashSet::new();
        let mut polynomials = Vec::new();
        for atom in tree.atoms() {
            if atom.poly.var_count() != var_count {
                return Err(Error::DimensionMismatch { expected: var_count, got: atom.poly.var_count() });
            }
            if seen.insert(&atom.poly) {
                polynomials.push(atom.poly.clone());
            }
        }
        Ok(ClosedFormula { var_count, var_prefix: var_prefix.to_string(), tree, polynomials })
    }

    pub fn atom(poly: Polynomial, relation: Relation) -> Result<Self> {
        let n = poly.var_count();
        ClosedFormula::from_tree(n, "x", FormulaNode::Atom(SignAtom { poly, relation }))
    }

    pub fn and(parts: Vec<ClosedFormula>) -> Result<Self> {
        Self::combine(parts, FormulaNode::And)
    }

    pub fn or(parts: Vec<ClosedFormula>) -> Result<Self> {
        Self::combine(parts, FormulaNode::Or)
    }

    fn combine(parts: Vec<ClosedFormula>, node: fn(Vec<FormulaNode<SignAtom>>) -> FormulaNode<SignAtom>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("empty connective".into()))?;
        let (n, prefix) = (first.var_count, first.var_prefix.clone());
        if parts.len() == 1 {
            return Ok(parts.into_iter().next().unwrap());
        }
        let trees = parts.into_iter().map(|p| p.tree).collect();
        ClosedFormula::from_tree(n, &prefix, node(trees))
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn var_prefix(&self) -> &str {
        &self.var_prefix
    }

    pub fn with_prefix(mut self, prefix: &str) -> Self {
        self.var_prefix = prefix.to_string();
        self
    }

    pub fn tree(&self) -> &FormulaNode<SignAtom> {
        &self.tree
    }

    /// The family of distinct polynomials appearing in atoms.
    pub fn polynomial_set(&self) -> &[Polynomial] {
        &self.polynomials
    }

    /// `s = card(P)`.
    pub fn polynomial_count(&self) -> usize {
        self.polynomials.len()
    }

    pub fn atom_count(&self) -> usize {
        self.tree.atoms().len()
    }

    pub fn max_degree(&self) -> u32 {
        self.polynomials.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// Exact satisfaction test.
    pub fn evaluate(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.var_count {
            return Err(Error::DimensionMismatch { expected: self.var_count, got: x.len() });
        }
        let mut err = None;
        let value = self.tree.evaluate_with(&mut |a: &SignAtom| match a.poly.evaluate(x) {
            Ok(v) => a.relation.holds_for_sign(sign_of(&v)),
            Err(e) => {
                err = Some(e);
                false
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    /// Replaces every atom polynomial, keeping the tree and relations.
    pub fn map_polynomials(&self, var_count: usize, var_prefix: &str, mut f: impl FnMut(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let tree = self.tree.try_map(&mut |a: &SignAtom| Ok::<_, Error>(SignAtom { poly: f(&a.poly)?, relation: a.relation }))?;
        ClosedFormula::from_tree(var_count, var_prefix, tree)
    }

    /// JSON export `{"k": n, "tree": ...}`.
    pub fn to_json(&self) -> Value {
        json!({ "k": self.var_count, "tree": node_json(&self.tree, &self.var_prefix) })
    }

    /// Structural check that the tree matches the stored polynomial set.
    pub fn check_invariants(&self) -> bool {
        let leafs: HashSet<&Polynomial> = self.tree.atoms().into_iter().map(|a| &a.poly).collect();
        let stored: HashSet<&Polynomial> = self.polynomials.iter().collect();
        leafs == stored && stored.len() == self.polynomials.len()
    }
}

fn sign_of(v: &Rational) -> i8 {
    use num_traits::Signed;
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn node_json(node: &FormulaNode<SignAtom>, prefix: &str) -> Value {
    match node {
        FormulaNode::Atom(a) => {
            let terms: Vec<Value> = a
                .poly
                .terms()
                .rev()
                .map(|(m, c)| json!({ "coeff": format_rational(c), "exp": m.exponents() }))
                .collect();
            json!({ "atom": { "poly": a.poly.display_with(prefix), "rel": a.relation.symbol(), "terms": terms } })
        }
        FormulaNode::And(cs) => json!({ "and": cs.iter().map(|c| node_json(c, prefix)).collect::<Vec<_>>() }),
        FormulaNode::Or(cs) => json!({ "or": cs.iter().map(|c| node_json(c, prefix)).collect::<Vec<_>>() }),
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &FormulaNode<SignAtom>, prefix: &str) -> fmt::Result {
    match node {
        FormulaNode::Atom(a) => write!(f, "{} {} 0", a.poly.display_with(prefix), a.relation.symbol()),
        FormulaNode::And(cs) | FormulaNode::Or(cs) => {
            let word = if matches!(node, FormulaNode::And(_)) { " and " } else { " or " };
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(word)?;
                }
                if matches!(c, FormulaNode::Atom(_)) {
                    write_node(f, c, prefix)?;
                } else {
                    f.write_str("(")?;
                    write_node(f, c, prefix)?;
                    f.write_str(")")?;
                }
            }
            Ok(())
        }
    }
}

impl fmt::Display for ClosedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.tree, &self.var_prefix)
    }
}

/// Floating-point atom with a slack: `P = 0` holds when `|P| <= slack`,
/// `P >= 0` when `P >= -slack`, `P <= 0` when `P <= slack`.
///
/// With a nonzero `radius` the slack at `x` grows by
/// `radius * sup |∇P|` over the cube `x ± radius`.
#[derive(Clone, Debug)]
pub struct NumericAtom<S: Scalar = f64> {
    pub poly: Polynomial<S>,
    pub relation: Relation,
    pub slack: S,
    pub radius: S,
    gradient: Vec<Polynomial<S>>,
}

impl NumericAtom<f64> {
    pub fn new(poly: Polynomial<f64>, relation: Relation, slack: f64) -> Self {
        NumericAtom { poly, relation, slack, radius: 0.0, gradient: Vec::new() }
    }

    /// An atom whose slack is the local gradient bound over `x ± radius`, times `radius`.
    pub fn local(poly: Polynomial<f64>, relation: Relation, radius: f64) -> Self {
        let gradient = (0..poly.var_count()).map(|v| poly.partial_derivative(v)).collect();
        NumericAtom { poly, relation, slack: 0.0, radius, gradient }
    }

    fn slack_at(&self, x: &[f64]) -> f64 {
        if self.radius == 0.0 {
            return self.slack;
        }
        let cube: Vec<Interval<f64>> = x.iter().map(|&v| Interval::new(v - self.radius, v + self.radius)).collect();
        let sq: f64 = self
            .gradient
            .iter()
            .map(|g| interval_evaluate_f64(g, &cube).map(|i| i.mag()).unwrap_or(f64::INFINITY).powi(2))
            .sum();
        self.slack + self.radius * sq.sqrt()
    }
}

/// A [`ClosedFormula`] compiled to floating point for grid sampling.
#[derive(Clone, Debug)]
pub struct NumericFormula {
    var_count: usize,
    tree: FormulaNode<NumericAtom>,
}

impl NumericFormula {
    /// Compiles with equality atoms thickened locally by `radius` (see
    /// [`NumericAtom::local`]) and other atoms exact.
    pub fn compile_local(f: &ClosedFormula, radius: f64) -> Result<Self> {
        let tree = f.tree.try_map(&mut |a: &SignAtom| {
            Ok::<_, Error>(match a.relation {
                Relation::Eq => NumericAtom::local(a.poly.to_f64(), a.relation, radius),
                _ => NumericAtom::new(a.poly.to_f64(), a.relation, 0.0),
            })
        })?;
        Ok(NumericFormula { var_count: f.var_count, tree })
    }

    pub fn compile(f: &ClosedFormula, mut slack: impl FnMut(&SignAtom) -> Result<f64>) -> Result<Self> {
        let tree = f.tree.try_map(&mut |a: &SignAtom| {
            Ok::<_, Error>(NumericAtom::new(a.poly.to_f64(), a.relation, slack(a)?))
        })?;
        Ok(NumericFormula { var_count: f.var_count, tree })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// Adds `extra` as a further conjunct.
    pub fn and_also(self, extra: Vec<NumericAtom>) -> Self {
        let mut children = vec![self.tree];
        children.extend(extra.into_iter().map(FormulaNode::Atom));
        NumericFormula { var_count: self.var_count, tree: FormulaNode::And(children) }
    }

    pub fn evaluate(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.var_count);
        self.tree.evaluate_with(&mut |a: &NumericAtom| {
            let v = a.poly.evaluate(x).unwrap_or(f64::NAN);
            match a.relation {
                Relation::Eq => v.abs() <= a.slack_at(x),
                Relation::Ge => v >= -a.slack,
                Relation::Le => v <= a.slack,
            }
        })
    }
}
