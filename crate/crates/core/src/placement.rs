//! Placement expressions such as `C_{12'} ⊗ C_{2''3}`.
//!
//! Each operand names a comodule and gives one index per leg. An index is a
//! target `1..=9` with an order mark (primes `′ ″ ‴ '`, `^k` with one digit,
//! or `^{k}`). Realizing an
//! expression takes the exterior product of the operands, sorts the legs by
//! `(target, order)` and multiplies, left to right, the legs sharing a
//! target. Underlying spaces are ordered by each operand's smallest index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::comod::{exterior_all, intertwines, restrict_ot, same_hopf, ComodMorphism, Comodule};
use crate::error::{Error, Result};
use crate::exactla::{kron_all, permute_factors, Matrix};
use crate::hopf::HopfAlgebra;

/// Reserved name of the unit object; it has exactly one index.
pub const UNIT: &str = "I";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub target: usize,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operand {
    pub name: String,
    pub indices: Vec<Index>,
}

impl Operand {
    fn min_key(&self) -> Index {
        *self.indices.iter().min().unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separator {
    /// `⊗` or `(x)`
    Tensor,
    /// `⊙` or `(.)`
    Exterior,
}

#[derive(Clone, Debug)]
pub struct PlacementExpr {
    pub operands: Vec<Operand>,
    pub separators: Vec<Separator>,
    /// Character offset of each operand in the source text.
    pub positions: Vec<usize>,
}

impl PartialEq for PlacementExpr {
    fn eq(&self, o: &Self) -> bool {
        self.operands == o.operands && self.separators == o.separators
    }
}

impl Eq for PlacementExpr {}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            write!(f, "{}", self.target)
        } else if self.order > 9 {
            write!(f, "{}^{{{}}}", self.target, self.order)
        } else {
            write!(f, "{}^{}", self.target, self.order)
        }
    }
}

impl fmt::Display for PlacementExpr {
    /// Normal form: braces around every index group, orders as `^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, op) in self.operands.iter().enumerate() {
            if k > 0 {
                let sep = match self.separators[k - 1] {
                    Separator::Tensor => " ⊗ ",
                    Separator::Exterior => " ⊙ ",
                };
                f.write_str(sep)?;
            }
            write!(f, "{}_{{", op.name)?;
            for i in &op.indices {
                write!(f, "{i}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::ParseError { position: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.chars.get(self.pos + k) == Some(&c))
    }

    fn separator(&mut self) -> Option<Separator> {
        match self.peek() {
            Some('⊗') => {
                self.pos += 1;
                Some(Separator::Tensor)
            }
            Some('⊙') => {
                self.pos += 1;
                Some(Separator::Exterior)
            }
            _ if self.starts_with("(x)") => {
                self.pos += 3;
                Some(Separator::Tensor)
            }
            _ if self.starts_with("(.)") => {
                self.pos += 3;
                Some(Separator::Exterior)
            }
            _ => None,
        }
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn index(&mut self) -> Result<Index> {
        let c = self.peek().ok_or_else(|| self.err("expected an index"))?;
        let target = c.to_digit(10).filter(|&d| d > 0).ok_or_else(|| self.err(format!("expected a target 1-9, found `{c}`")))?;
        self.pos += 1;
        let mut order = 0;
        loop {
            match self.peek() {
                Some('′') | Some('\'') => order += 1,
                Some('″') => order += 2,
                Some('‴') => order += 3,
                Some('^') => {
                    self.pos += 1;
                    let braced = self.peek() == Some('{');
                    if braced {
                        self.pos += 1;
                    }
                    // unbraced orders are one digit: `2^52^6` is `2^5 2^6`
                    let k = if braced {
                        self.number()
                    } else {
                        self.peek().and_then(|c| c.to_digit(10)).map(|d| {
                            self.pos += 1;
                            d as usize
                        })
                    }
                    .ok_or_else(|| self.err("expected an order after `^`"))?;
                    if k == 0 {
                        return Err(self.err("order must be positive"));
                    }
                    if braced {
                        if self.peek() != Some('}') {
                            return Err(self.err("expected `}` closing the order"));
                        }
                        self.pos += 1;
                    }
                    order += k;
                    continue;
                }
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Index { target: target as usize, order })
    }

    fn operand(&mut self) -> Result<Operand> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return Err(self.err(format!("expected an operand name, found `{c}`"))),
            None => return Err(self.err("expected an operand name")),
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if self.peek() != Some('_') {
            return Err(self.err(format!("expected `_` after `{name}`")));
        }
        self.pos += 1;
        let mut indices = Vec::new();
        if self.peek() == Some('{') {
            self.pos += 1;
            self.skip_ws();
            while self.peek() != Some('}') {
                if self.peek().is_none() {
                    return Err(self.err("unterminated index group"));
                }
                indices.push(self.index()?);
                self.skip_ws();
            }
            self.pos += 1;
            if indices.is_empty() {
                return Err(Error::ParseError { position: self.pos - 1, message: "empty index group".into() });
            }
        } else {
            indices.push(self.index()?);
        }
        Ok(Operand { name, indices })
    }
}

/// Parses and validates a placement expression.
pub fn parse(text: &str) -> Result<PlacementExpr> {
    let mut lx = Lexer { chars: text.chars().collect(), pos: 0 };
    let mut operands = Vec::new();
    let mut separators = Vec::new();
    let mut positions = Vec::new();
    lx.skip_ws();
    loop {
        positions.push(lx.pos);
        operands.push(lx.operand()?);
        lx.skip_ws();
        if lx.peek().is_none() {
            break;
        }
        let sep = lx.separator().ok_or_else(|| lx.err("expected `⊗`, `⊙`, `(x)` or `(.)`"))?;
        separators.push(sep);
        lx.skip_ws();
    }
    let expr = PlacementExpr { operands, separators, positions };
    validate(&expr)?;
    Ok(expr)
}

fn validate(e: &PlacementExpr) -> Result<()> {
    let mut seen = BTreeSet::new();
    let mut by_target: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    // first operand touching each target
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, op) in e.operands.iter().enumerate() {
        let position = e.positions[k];
        if op.name == UNIT && op.indices.len() != 1 {
            return Err(Error::ArityMismatch { name: UNIT.into(), expected: 1, found: op.indices.len() });
        }
        for &i in &op.indices {
            if !seen.insert(i) {
                return Err(Error::DuplicateIndex { position, target: i.target, order: i.order });
            }
            by_target.entry(i.target).or_default().push(i.order);
            first.entry(i.target).or_insert(position);
        }
    }
    let targets: Vec<usize> = by_target.keys().copied().collect();
    if let Some((_, &t)) = targets.iter().enumerate().find(|&(k, &t)| t != k + 1) {
        return Err(Error::NonContiguousTargets { position: first[&t], targets });
    }
    for (t, mut orders) in by_target {
        orders.sort_unstable();
        let ok = orders == [0] || orders.iter().enumerate().all(|(k, &o)| o == k + 1);
        if !ok {
            return Err(Error::BadOrderSet { position: first[&t], target: t, orders });
        }
    }
    Ok(())
}

impl PlacementExpr {
    /// Number of distinct targets, the level of the realization.
    pub fn arity(&self) -> usize {
        self.operands.iter().flat_map(|o| o.indices.iter().map(|i| i.target)).max().unwrap_or(0)
    }

    /// Operand indices sorted by smallest `(target, order)`.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.operands.len()).collect();
        idx.sort_by_key(|&k| self.operands[k].min_key());
        idx
    }
}

/// How the realization was assembled.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    /// `canonical[k]` is the text position of the `k`-th underlying factor.
    pub canonical: Vec<usize>,
    /// Underlying dimension of each operand, in text order.
    pub dims: Vec<usize>,
    /// Leg `k` of the exterior product (canonical operand order) goes to
    /// sorted slot `slot_sigma[k]`.
    pub slot_sigma: Vec<usize>,
    /// Number of slots merged into each target.
    pub merges: Vec<usize>,
    /// Permutation from the text-order underlying space to the realization's.
    pub to_canonical: Matrix,
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub comodule: Comodule,
    pub trace: Trace,
}

pub type Bindings = BTreeMap<String, Comodule>;

fn operand_comodule(op: &Operand, hopf: &Arc<HopfAlgebra>, bind: &Bindings) -> Result<Comodule> {
    let c = if op.name == UNIT {
        Comodule::unit(hopf, 1)
    } else {
        bind.get(&op.name).cloned().ok_or_else(|| Error::UnboundName(op.name.clone()))?
    };
    if !same_hopf(&c.hopf, hopf) {
        return Err(Error::HopfMismatch);
    }
    if c.level != op.indices.len() {
        return Err(Error::ArityMismatch { name: op.name.clone(), expected: c.level, found: op.indices.len() });
    }
    Ok(c)
}

pub fn realize(expr: &PlacementExpr, hopf: &Arc<HopfAlgebra>, bind: &Bindings) -> Result<Realization> {
    let comods: Vec<Comodule> = expr.operands.iter().map(|o| operand_comodule(o, hopf, bind)).collect::<Result<_>>()?;
    let canonical = expr.canonical_order();
    let ordered: Vec<&Comodule> = canonical.iter().map(|&k| &comods[k]).collect();
    let ext = exterior_all(&ordered)?;
    let keys: Vec<Index> = canonical.iter().flat_map(|&k| expr.operands[k].indices.iter().copied()).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    let slot_sigma: Vec<usize> = keys.iter().map(|k| sorted.iter().position(|s| s == k).unwrap()).collect();
    let mut c = ext.permute(&slot_sigma)?;
    let p = expr.arity();
    let mut merges = Vec::with_capacity(p);
    for t in 1..=p {
        let count = sorted.iter().filter(|i| i.target == t).count();
        for _ in 1..count {
            c = restrict_ot(&c, t)?;
        }
        merges.push(count);
    }
    let dims: Vec<usize> = comods.iter().map(|c| c.dim).collect();
    let mut sigma = vec![0; canonical.len()];
    for (pos, &k) in canonical.iter().enumerate() {
        sigma[k] = pos;
    }
    let to_canonical = permute_factors(hopf.field, &dims, &sigma)?;
    Ok(Realization { comodule: c, trace: Trace { canonical, dims, slot_sigma, merges, to_canonical } })
}

pub fn realize_str(text: &str, hopf: &Arc<HopfAlgebra>, bind: &Bindings) -> Result<Realization> {
    realize(&parse(text)?, hopf, bind)
}

/// Morphism between realizations from a linear map written in the text
/// order of both expressions' operands.
pub fn realize_linear(
    src: &str,
    dst: &str,
    hopf: &Arc<HopfAlgebra>,
    bind: &Bindings,
    linear: &Matrix,
) -> Result<ComodMorphism> {
    let s = realize_str(src, hopf, bind)?;
    let t = realize_str(dst, hopf, bind)?;
    let sd: usize = s.trace.dims.iter().product();
    let td: usize = t.trace.dims.iter().product();
    if linear.shape() != (td, sd) {
        return Err(Error::ShapeMismatch(format!(
            "map is {}x{}, `{dst}` <- `{src}` needs {td}x{sd}",
            linear.rows(),
            linear.cols()
        )));
    }
    let m = &(&t.trace.to_canonical * linear) * &s.trace.to_canonical.transpose();
    if s.comodule.level != t.comodule.level {
        return Err(Error::ShapeMismatch(format!("`{src}` has arity {}, `{dst}` has {}", s.comodule.level, t.comodule.level)));
    }
    match intertwines(&s.comodule, &t.comodule, &m)? {
        None => Ok(ComodMorphism { src: s.comodule, dst: t.comodule, matrix: m }),
        Some(w) => Err(Error::NotAMorphism { context: format!("`{src}` -> `{dst}`"), witness: w }),
    }
}

/// Morphism obtained by replacing each source operand with its entry in
/// `base_maps` (identity when absent), in text order.
pub fn realize_morphism(
    src: &str,
    dst: &str,
    hopf: &Arc<HopfAlgebra>,
    bind: &Bindings,
    base_maps: &BTreeMap<String, Matrix>,
) -> Result<ComodMorphism> {
    let e = parse(src)?;
    let mut blocks = Vec::new();
    for op in &e.operands {
        let c = operand_comodule(op, hopf, bind)?;
        blocks.push(base_maps.get(&op.name).cloned().unwrap_or_else(|| c.id()));
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    realize_linear(src, dst, hopf, bind, &kron_all(hopf.field, &refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comod::{exterior, Comodule};
    use crate::exactla::Field;
    use crate::hopf::builtin;

    const Q: Field = Field::Rational;

    #[test]
    fn parse_primes_and_powers() {
        let e = parse("C_{12′} ⊗ C_{2″3}").unwrap();
        assert_eq!(e.operands.len(), 2);
        assert_eq!(e.operands[0].indices, vec![Index { target: 1, order: 0 }, Index { target: 2, order: 1 }]);
        assert_eq!(e.operands[1].indices[0], Index { target: 2, order: 2 });
        let f = parse("C_{12^1}(x)C_{2^2 3}").unwrap();
        assert_eq!(e, f);
        assert_eq!(e.to_string(), "C_{12^1} ⊗ C_{2^23}");
        let g = parse("X_{1^{4}1'''1''1'}").unwrap();
        assert_eq!(g.operands[0].indices[0].order, 4);
    }

    #[test]
    fn parse_errors_are_positioned() {
        assert_eq!(parse("C_{11'}").unwrap_err(), Error::BadOrderSet { position: 0, target: 1, orders: vec![0, 1] });
        assert_eq!(parse("C_{13}").unwrap_err(), Error::NonContiguousTargets { position: 0, targets: vec![1, 3] });
        assert_eq!(parse("C_{12} ⊗ D_{2}").unwrap_err(), Error::DuplicateIndex { position: 9, target: 2, order: 0 });
        assert!(matches!(parse("C_{12} ⊗"), Err(Error::ParseError { position: 8, .. })));
        assert!(matches!(parse("C{12}"), Err(Error::ParseError { position: 1, .. })));
        assert!(matches!(parse("I_{12}"), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn realize_coproduct_target() {
        let h = builtin("kZ2", Q).unwrap();
        let odd = Comodule::grouplike(&h, 1).unwrap();
        let c = exterior(&odd, &odd).unwrap();
        let mut bind = Bindings::new();
        bind.insert("C".into(), c.clone());
        let r = realize_str("C_{12'} ⊗ C_{2''3}", &h, &bind).unwrap();
        assert_eq!(r.comodule.level, 3);
        assert!(r.comodule.check().passed());
        // swapping operand order in the text does not change the realization
        let r2 = realize_str("C_{2''3} ⊗ C_{12'}", &h, &bind).unwrap();
        assert_eq!(r.comodule, r2.comodule);
        assert_eq!(r2.trace.canonical, vec![1, 0]);
    }

    #[test]
    fn counit_placement_is_ot() {
        let h = builtin("sweedler4", Q).unwrap();
        let x = crate::comod::tests::sweedler_two(&h);
        let c = exterior(&x, &crate::comod::dual(&x, crate::comod::Side::Right).unwrap()).unwrap();
        let mut bind = Bindings::new();
        bind.insert("C".into(), c.clone());
        let r = realize_str("C_{1'1''}", &h, &bind).unwrap();
        assert_eq!(r.comodule, restrict_ot(&c, 1).unwrap());
        let ev = crate::comod::ev_matrix(Q, 2);
        let mut maps = BTreeMap::new();
        maps.insert("C".to_string(), ev);
        realize_morphism("C_{1'1''}", "I_1", &h, &bind, &maps).unwrap();
        // the flipped merge is not a morphism into I
        assert!(matches!(realize_morphism("C_{1''1'}", "I_1", &h, &bind, &maps), Err(Error::NotAMorphism { .. })));
    }
}
