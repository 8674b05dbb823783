//! A small expression language for naming groups.
//!
//! ```text
//! expr  := term (('x' | 'Y') term)*
//! term  := name '(' [arg (',' arg)*] ')' | '(' expr ')'
//! arg   := integer | 'p' | 'p2' | 'p^2' | expr
//! ```
//!
//! `x` is the direct product and `Y` the central product; both associate to
//! the left. `direct(a, b)` and `central(a, b)` are the function forms.

use std::fmt;

use thiserror::Error;

use crate::group::{Builder, ExtraspecialKind, GroupError, PGroup};
use crate::prime::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic { p: u32, n: u32 },
    ElemAbelian { p: u32, k: u32 },
    Extraspecial { p: u32, kind: ExtraspecialKind },
    Modular { p: u32, n: u32 },
    Dihedral8,
    Quaternion8,
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    Central(Box<GroupSpec>, Box<GroupSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error("`{name}` takes {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl GroupSpec {
    pub fn evaluate(&self, builder: &Builder) -> Result<PGroup, GroupError> {
        let prime = |p: u32| Prime::new(p).map_err(GroupError::from);
        let g = match self {
            GroupSpec::Cyclic { p, n } => builder.cyclic(prime(*p)?, *n)?,
            GroupSpec::ElemAbelian { p, k } => builder.elementary_abelian(prime(*p)?, *k)?,
            GroupSpec::Extraspecial { p, kind } => builder.extraspecial(prime(*p)?, *kind)?,
            GroupSpec::Modular { p, n } => builder.modular(prime(*p)?, *n)?,
            GroupSpec::Dihedral8 => builder.dihedral8()?,
            GroupSpec::Quaternion8 => builder.quaternion8()?,
            GroupSpec::Direct(a, b) => builder.direct(&a.evaluate(builder)?, &b.evaluate(builder)?)?,
            GroupSpec::Central(a, b) => builder.central(&a.evaluate(builder)?, &b.evaluate(builder)?, None)?,
        };
        Ok(g.with_label(self.to_string()))
    }

    fn is_product(&self) -> bool {
        matches!(self, GroupSpec::Direct(..) | GroupSpec::Central(..))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { p, n } => write!(f, "cyclic({p},{n})"),
            GroupSpec::ElemAbelian { p, k } => write!(f, "elem_abelian({p},{k})"),
            GroupSpec::Extraspecial { p, kind: ExtraspecialKind::ExponentP } => write!(f, "extraspecial({p},p)"),
            GroupSpec::Extraspecial { p, kind: ExtraspecialKind::ExponentP2 } => write!(f, "extraspecial({p},p^2)"),
            GroupSpec::Modular { p, n } => write!(f, "modular({p},{n})"),
            GroupSpec::Dihedral8 => write!(f, "dihedral8()"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8()"),
            GroupSpec::Direct(a, b) | GroupSpec::Central(a, b) => {
                let op = if matches!(self, GroupSpec::Direct(..)) { "x" } else { "Y" };
                if b.is_product() {
                    write!(f, "{a} {op} ({b})")
                } else {
                    write!(f, "{a} {op} {b}")
                }
            }
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_spec(s)
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, ParseError> {
    let mut parser = Parser { chars: text.chars().collect(), pos: 0 };
    let spec = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(
            parser.error_at(parser.pos, ParseErrorKind::Syntax(format!("unexpected `{}`", parser.chars[parser.pos])))
        );
    }
    Ok(spec)
}

#[derive(Debug)]
enum Arg {
    Int(u32),
    Exp(ExtraspecialKind),
    Spec(GroupSpec),
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let (mut line, mut column) = (1, 1);
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError { line, column, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax(msg.into()))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.syntax(format!("expected `{c}`, found `{d}`"))),
            None => Err(self.syntax(format!("expected `{c}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// An infix operator is a lone `x` or `Y` not followed by an identifier character.
    fn infix(&mut self) -> Option<char> {
        let c = self.peek()?;
        if c != 'x' && c != 'Y' {
            return None;
        }
        let next = self.chars.get(self.pos + 1);
        if next.is_some_and(|n| n.is_ascii_alphanumeric() || *n == '_') {
            return None;
        }
        self.pos += 1;
        Some(c)
    }

    fn expr(&mut self) -> Result<GroupSpec, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.infix() {
            let rhs = self.term()?;
            lhs = if op == 'x' {
                GroupSpec::Direct(Box::new(lhs), Box::new(rhs))
            } else {
                GroupSpec::Central(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<GroupSpec, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                self.expect('(')?;
                let mut args = Vec::new();
                if self.peek() == Some(')') {
                    self.pos += 1;
                } else {
                    loop {
                        args.push(self.arg()?);
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some(')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.syntax("expected `,` or `)`")),
                        }
                    }
                }
                self.construct(start, name, args)
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.ident();
                digits
                    .parse()
                    .map(Arg::Int)
                    .map_err(|_| self.error_at(start, ParseErrorKind::Syntax(format!("bad integer `{digits}`"))))
            }
            Some('p') => {
                let save = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "p" if self.chars.get(self.pos) == Some(&'^') => {
                        self.pos += 1;
                        if self.ident() == "2" {
                            Ok(Arg::Exp(ExtraspecialKind::ExponentP2))
                        } else {
                            Err(self.syntax("expected `p^2`"))
                        }
                    }
                    "p" => Ok(Arg::Exp(ExtraspecialKind::ExponentP)),
                    "p2" => Ok(Arg::Exp(ExtraspecialKind::ExponentP2)),
                    _ => {
                        self.pos = save;
                        self.expr().map(Arg::Spec)
                    }
                }
            }
            _ => self.expr().map(Arg::Spec),
        }
    }

    fn construct(&self, start: usize, name: String, args: Vec<Arg>) -> Result<GroupSpec, ParseError> {
        let expected = match name.as_str() {
            "cyclic" | "elem_abelian" | "extraspecial" | "modular" | "direct" | "central" => 2,
            "dihedral8" | "quaternion8" => 0,
            _ => return Err(self.error_at(start, ParseErrorKind::UnknownConstructor(name))),
        };
        if args.len() != expected {
            return Err(self.error_at(start, ParseErrorKind::Arity { name, expected, found: args.len() }));
        }
        let bad = |what: &str| self.error_at(start, ParseErrorKind::Syntax(format!("`{name}` expects {what}")));
        let mut it = args.into_iter();
        let spec = match name.as_str() {
            "dihedral8" => GroupSpec::Dihedral8,
            "quaternion8" => GroupSpec::Quaternion8,
            "direct" | "central" => {
                let (Some(Arg::Spec(a)), Some(Arg::Spec(b))) = (it.next(), it.next()) else {
                    return Err(bad("two group expressions"));
                };
                if name == "direct" {
                    GroupSpec::Direct(Box::new(a), Box::new(b))
                } else {
                    GroupSpec::Central(Box::new(a), Box::new(b))
                }
            }
            "extraspecial" => match (it.next(), it.next()) {
                (Some(Arg::Int(p)), Some(Arg::Exp(kind))) => GroupSpec::Extraspecial { p, kind },
                _ => return Err(bad("a prime and an exponent `p` or `p^2`")),
            },
            _ => {
                let (Some(Arg::Int(p)), Some(Arg::Int(n))) = (it.next(), it.next()) else {
                    return Err(bad("two integers"));
                };
                match name.as_str() {
                    "cyclic" => GroupSpec::Cyclic { p, n },
                    "elem_abelian" => GroupSpec::ElemAbelian { p, k: n },
                    _ => GroupSpec::Modular { p, n },
                }
            }
        };
        Ok(spec)
    }
}
