//! Modal formulas: AST, parsing, printing, substitution.
//!
//! The connective set keeps the derived connectives (`|`, `->`, `<->`, `<>`)
//! as first-class nodes so that constructed axioms print in their natural
//! shape instead of a desugared normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A modal formula over propositional variables `p0, p1, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(u32),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    pub fn var(index: u32) -> Formula {
        Formula::Var(index)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn diamond(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    /// Right-nested conjunction of `parts`; `T` when empty.
    pub fn big_and<I>(parts: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Formula::Top,
            Some(last) => iter.fold(last, |acc, f| Formula::and(f, acc)),
        }
    }

    /// Right-nested disjunction of `parts`; `F` when empty.
    pub fn big_or<I>(parts: I) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Formula::Bot,
            Some(last) => iter.fold(last, |acc, f| Formula::or(f, acc)),
        }
    }

    /// `[]^n f`: the formula prefixed by `n` boxes.
    pub fn box_n(n: u32, f: Formula) -> Formula {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// `f & []f & ... & []^n f`, right-nested in increasing degree order.
    pub fn box_leq(n: u32, f: Formula) -> Formula {
        Formula::big_and((0..=n).map(|k| Formula::box_n(k, f.clone())))
    }

    /// Maximal nesting of `[]`/`<>`.
    pub fn modal_depth(&self) -> u32 {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(a) | Formula::Diamond(a) => 1 + a.modal_depth(),
        }
    }

    /// Nesting depth counting every connective, boolean and modal alike.
    /// Atoms have depth 0.
    pub fn connective_depth(&self) -> u32 {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) | Formula::Box(a) | Formula::Diamond(a) => 1 + a.connective_depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => 1 + a.connective_depth().max(b.connective_depth()),
        }
    }

    /// The set of variable indices occurring in the formula.
    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(i) => {
                out.insert(*i);
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(a) | Formula::Box(a) | Formula::Diamond(a) => a.collect_vars(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Imp(a, b)
            | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Apply `subst` simultaneously: mapped variables are replaced by their
    /// images, and the images are never re-substituted into.
    pub fn substitute(&self, subst: &Substitution) -> Formula {
        match self {
            Formula::Var(i) => match subst.get(*i) {
                Some(image) => image.clone(),
                None => Formula::Var(*i),
            },
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Not(a) => Formula::not(a.substitute(subst)),
            Formula::And(a, b) => Formula::and(a.substitute(subst), b.substitute(subst)),
            Formula::Or(a, b) => Formula::or(a.substitute(subst), b.substitute(subst)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(subst), b.substitute(subst)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(subst), b.substitute(subst)),
            Formula::Box(a) => Formula::boxed(a.substitute(subst)),
            Formula::Diamond(a) => Formula::diamond(a.substitute(subst)),
        }
    }

    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: text.chars().count(),
        };
        let formula = parser.parse_iff()?;
        match parser.tokens.get(parser.pos) {
            None => Ok(formula),
            Some((at, _)) => Err(ParseError {
                position: *at,
                message: "unexpected trailing input".into(),
            }),
        }
    }
}

/// A finite map from variable indices to formulas, applied simultaneously.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn bind(&mut self, var: u32, image: Formula) {
        self.map.insert(var, image);
    }

    pub fn get(&self, var: u32) -> Option<&Formula> {
        self.map.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Formula)> {
        self.map.iter().map(|(k, v)| (*k, v))
    }

    /// The composite `self` then `other`: maps `v` in the domain of `self`
    /// to `other` applied to its image, and acts as `other` elsewhere.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<u32, Formula> = self
            .map
            .iter()
            .map(|(v, image)| (*v, image.substitute(other)))
            .collect();
        for (v, image) in &other.map {
            map.entry(*v).or_insert_with(|| image.clone());
        }
        Substitution { map }
    }
}

impl FromIterator<(u32, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (u32, Formula)>>(iter: I) -> Substitution {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input, 0-based.
    pub position: usize,
    pub message: String,
}

// Printing. Precedence: <-> (1) < -> (2) < | (3) < & (4) < unary (5).
// Binary connectives print right-associatively, matching the parser.

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Imp(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) | Formula::Box(..) | Formula::Diamond(..) => 5,
        Formula::Var(_) | Formula::Top | Formula::Bot => 6,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, min_prec: u8) -> fmt::Result {
            if precedence(child) < min_prec {
                write!(f, "(")?;
                write_node(f, child)?;
                write!(f, ")")
            } else {
                write_node(f, child)
            }
        }

        fn write_node(f: &mut fmt::Formatter<'_>, node: &Formula) -> fmt::Result {
            match node {
                Formula::Var(i) => write!(f, "p{i}"),
                Formula::Top => write!(f, "T"),
                Formula::Bot => write!(f, "F"),
                Formula::Not(a) => {
                    write!(f, "~")?;
                    write_child(f, a, 5)
                }
                Formula::Box(a) => {
                    write!(f, "[]")?;
                    write_child(f, a, 5)
                }
                Formula::Diamond(a) => {
                    write!(f, "<>")?;
                    write_child(f, a, 5)
                }
                Formula::And(a, b) => {
                    write_child(f, a, 5)?;
                    write!(f, " & ")?;
                    write_child(f, b, 4)
                }
                Formula::Or(a, b) => {
                    write_child(f, a, 4)?;
                    write!(f, " | ")?;
                    write_child(f, b, 3)
                }
                Formula::Imp(a, b) => {
                    write_child(f, a, 3)?;
                    write!(f, " -> ")?;
                    write_child(f, b, 2)
                }
                Formula::Iff(a, b) => {
                    write_child(f, a, 2)?;
                    write!(f, " <-> ")?;
                    write_child(f, b, 1)
                }
            }
        }

        write_node(f, self)
    }
}

// Parsing. Grammar (ASCII, with unicode aliases folded in by the lexer):
//
//   iff   := imp ('<->' iff)?
//   imp   := or  ('->' imp)?
//   or    := and ('|' or)?
//   and   := un  ('&' and)?
//   un    := '~' un | '[]' un | '<>' un | atom
//   atom  := 'p' digits | 'T' | 'F' | '(' iff ')'

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Var(u32),
    Top,
    Bot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    BoxOp,
    DiamondOp,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        let token = match chars[i] {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            'T' | '⊤' => {
                i += 1;
                Token::Top
            }
            'F' | '⊥' => {
                i += 1;
                Token::Bot
            }
            '~' | '¬' => {
                i += 1;
                Token::Not
            }
            '&' | '∧' => {
                i += 1;
                Token::And
            }
            '|' | '∨' => {
                i += 1;
                Token::Or
            }
            '→' => {
                i += 1;
                Token::Imp
            }
            '↔' => {
                i += 1;
                Token::Iff
            }
            '□' => {
                i += 1;
                Token::BoxOp
            }
            '◇' => {
                i += 1;
                Token::DiamondOp
            }
            '(' => {
                i += 1;
                Token::LParen
            }
            ')' => {
                i += 1;
                Token::RParen
            }
            '[' => {
                if chars.get(i + 1) == Some(&']') {
                    i += 2;
                    Token::BoxOp
                } else {
                    return Err(ParseError {
                        position: start,
                        message: "expected ']' after '['".into(),
                    });
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'>') {
                    i += 2;
                    Token::DiamondOp
                } else if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    i += 3;
                    Token::Iff
                } else {
                    return Err(ParseError {
                        position: start,
                        message: "expected '<>' or '<->'".into(),
                    });
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    i += 2;
                    Token::Imp
                } else {
                    return Err(ParseError {
                        position: start,
                        message: "expected '->'".into(),
                    });
                }
            }
            'p' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(ParseError {
                        position: start,
                        message: "expected digits after 'p'".into(),
                    });
                }
                let digits: String = chars[i + 1..j].iter().collect();
                let index = digits.parse::<u32>().map_err(|_| ParseError {
                    position: start,
                    message: format!("variable index too large: p{digits}"),
                })?;
                i = j;
                Token::Var(index)
            }
            other => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                });
            }
        };
        tokens.push((start, token));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|(_, t)| *t)
    }

    fn advance(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).copied();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_imp()?;
        if self.peek() == Some(Token::Iff) {
            self.pos += 1;
            let right = self.parse_iff()?;
            Ok(Formula::iff(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_or()?;
        if self.peek() == Some(Token::Imp) {
            self.pos += 1;
            let right = self.parse_imp()?;
            Ok(Formula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_and()?;
        if self.peek() == Some(Token::Or) {
            self.pos += 1;
            let right = self.parse_or()?;
            Ok(Formula::or(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let left = self.parse_unary()?;
        if self.peek() == Some(Token::And) {
            self.pos += 1;
            let right = self.parse_and()?;
            Ok(Formula::and(left, right))
        } else {
            Ok(left)
        }
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match self.advance() {
            Some((_, Token::Not)) => Ok(Formula::not(self.parse_unary()?)),
            Some((_, Token::BoxOp)) => Ok(Formula::boxed(self.parse_unary()?)),
            Some((_, Token::DiamondOp)) => Ok(Formula::diamond(self.parse_unary()?)),
            Some((_, Token::Var(i))) => Ok(Formula::Var(i)),
            Some((_, Token::Top)) => Ok(Formula::Top),
            Some((_, Token::Bot)) => Ok(Formula::Bot),
            Some((_, Token::LParen)) => {
                let inner = self.parse_iff()?;
                match self.advance() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((at, _)) => Err(ParseError {
                        position: at,
                        message: "expected ')'".into(),
                    }),
                    None => Err(ParseError {
                        position: self.end,
                        message: "unclosed '('".into(),
                    }),
                }
            }
            Some((at, t)) => Err(ParseError {
                position: at,
                message: format!("unexpected token {t:?}"),
            }),
            None => Err(ParseError {
                position: self.end,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(i: u32) -> Formula {
        Formula::var(i)
    }

    #[test]
    fn parse_base_cases() {
        assert_eq!(Formula::parse("<>T").unwrap(), Formula::diamond(Formula::Top));
        assert_eq!(
            Formula::parse("[]<>T").unwrap(),
            Formula::boxed(Formula::diamond(Formula::Top))
        );
        assert_eq!(Formula::parse("p7").unwrap(), p(7));
    }

    #[test]
    fn parse_reports_position_on_malformed_input() {
        let err = Formula::parse("p0 ->").unwrap_err();
        assert_eq!(err.position, 5);
        assert!(Formula::parse("p0 -> (p1").is_err());
        assert!(Formula::parse("p").is_err());
        assert!(Formula::parse("p0 p1").is_err());
        assert!(Formula::parse("[p0").is_err());
    }

    #[test]
    fn parse_precedence_and_associativity() {
        assert_eq!(
            Formula::parse("p0 & p1 | p2").unwrap(),
            Formula::or(Formula::and(p(0), p(1)), p(2))
        );
        assert_eq!(
            Formula::parse("p0 -> p1 -> p2").unwrap(),
            Formula::imp(p(0), Formula::imp(p(1), p(2)))
        );
        assert_eq!(
            Formula::parse("~[]p0 & p1").unwrap(),
            Formula::and(Formula::not(Formula::boxed(p(0))), p(1))
        );
        assert_eq!(
            Formula::parse("p0 <-> p1 -> p2").unwrap(),
            Formula::iff(p(0), Formula::imp(p(1), p(2)))
        );
    }

    #[test]
    fn parse_unicode_aliases() {
        assert_eq!(
            Formula::parse("□◇⊤").unwrap(),
            Formula::parse("[]<>T").unwrap()
        );
        assert_eq!(
            Formula::parse("¬(p0 ∧ p1) ↔ ¬p0 ∨ ¬p1").unwrap(),
            Formula::parse("~(p0 & p1) <-> ~p0 | ~p1").unwrap()
        );
    }

    #[test]
    fn box_leq_unfolds() {
        assert_eq!(Formula::box_leq(0, p(0)), p(0));
        assert_eq!(
            Formula::box_leq(2, p(0)),
            Formula::and(
                p(0),
                Formula::and(Formula::boxed(p(0)), Formula::boxed(Formula::boxed(p(0))))
            )
        );
        assert_eq!(
            Formula::box_leq(1, Formula::Bot),
            Formula::and(Formula::Bot, Formula::boxed(Formula::Bot))
        );
    }

    #[test]
    fn substitution_examples() {
        let s: Substitution = [(0, Formula::Top)].into_iter().collect();
        assert_eq!(
            Formula::and(p(0), p(1)).substitute(&s),
            Formula::and(Formula::Top, p(1))
        );

        // No re-substitution into images.
        let s: Substitution = [(0, Formula::diamond(p(0)))].into_iter().collect();
        assert_eq!(
            Formula::boxed(p(0)).substitute(&s),
            Formula::boxed(Formula::diamond(p(0)))
        );

        assert_eq!(p(0).substitute(&Substitution::new()), p(0));
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(p(0).modal_depth(), 0);
        assert_eq!(Formula::parse("[]<>T").unwrap().modal_depth(), 2);
        assert_eq!(Formula::box_leq(3, p(0)).modal_depth(), 3);
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0u32..6).prop_map(Formula::var),
            Just(Formula::Top),
            Just(Formula::Bot),
        ];
        leaf.prop_recursive(5, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::boxed),
                inner.clone().prop_map(Formula::diamond),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
            ]
        })
    }

    fn substitution_strategy() -> impl Strategy<Value = Substitution> {
        proptest::collection::btree_map(0u32..6, formula_strategy(), 0..4)
            .prop_map(|map| map.into_iter().collect())
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in formula_strategy()) {
            let printed = f.to_string();
            let reparsed = Formula::parse(&printed).unwrap();
            prop_assert_eq!(reparsed, f);
        }

        #[test]
        fn box_leq_adds_modal_depth(f in formula_strategy(), n in 0u32..5) {
            prop_assert_eq!(
                Formula::box_leq(n, f.clone()).modal_depth(),
                f.modal_depth() + n
            );
        }

        #[test]
        fn substitution_composes(
            f in formula_strategy(),
            s in substitution_strategy(),
            t in substitution_strategy(),
        ) {
            let two_step = f.substitute(&s).substitute(&t);
            let one_step = f.substitute(&s.then(&t));
            prop_assert_eq!(two_step, one_step);
        }
    }
}
