//! Reader for the textual term syntax.
//!
//! ```text
//! term    := '\' ident ':' type '.' term | postfix
//! postfix := unary ('(' term (',' term)* ')')*
//! unary   := '^' operand | '!' operand | primary
//! operand := '\' ... | unary
//! primary := ident | '(' term ')' | Q '(' ident ',' term ',' term ')'
//! ```
//!
//! `!P(z)` reads as `(!P)(z)`. A constant of quantifier type applied to
//! three arguments whose first is a bare identifier is the `Q(x, R, S)`
//! sugar and binds `x` in `R` and `S`.

use super::{Name, Signature, SimpleType, Term, Var};
use crate::syntax::{Cursor, ParseError, Tok};

pub fn parse_type(src: &str) -> Result<SimpleType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let ty = parse_type_at(&mut cur)?;
    cur.finish()?;
    Ok(ty)
}

pub(crate) fn parse_type_at(cur: &mut Cursor) -> Result<SimpleType, ParseError> {
    let dom = match cur.peek().clone() {
        Tok::LParen => {
            cur.bump();
            let t = parse_type_at(cur)?;
            cur.expect(&Tok::RParen)?;
            t
        }
        Tok::Ident(s) => {
            let t = match s.as_str() {
                "e" => SimpleType::E,
                "t" => SimpleType::T,
                "s" => SimpleType::S,
                other => return Err(cur.error(format!("unknown base type `{other}`"))),
            };
            cur.bump();
            t
        }
        other => return Err(cur.error(format!("expected a type, found {other}"))),
    };
    if cur.eat(&Tok::Arrow) {
        Ok(SimpleType::arrow(dom, parse_type_at(cur)?))
    } else {
        Ok(dom)
    }
}

/// Parses a closed term over the constants of `sig`.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, ParseError> {
    parse_term_in(src, sig, &[])
}

/// Parses a term whose free variables are drawn from `env`.
pub fn parse_term_in(
    src: &str,
    sig: &Signature,
    env: &[(Name, SimpleType)],
) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut scope: Vec<(String, SimpleType)> = env
        .iter()
        .map(|(n, t)| (n.to_string(), t.clone()))
        .collect();
    let start = cur.offset();
    let t = parse_term_at(&mut cur, sig, &mut scope)?;
    cur.finish()?;
    t.type_of()
        .map_err(|e| ParseError::at(src, start, e.to_string()))?;
    Ok(t)
}

/// Parses one term at the cursor; `scope` holds variables visible to it.
pub(crate) fn parse_term_at(
    cur: &mut Cursor,
    sig: &Signature,
    scope: &mut Vec<(String, SimpleType)>,
) -> Result<Term, ParseError> {
    TermReader { sig, scope }.term(cur)
}

struct TermReader<'a> {
    sig: &'a Signature,
    scope: &'a mut Vec<(String, SimpleType)>,
}

impl TermReader<'_> {
    fn term(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        if matches!(cur.peek(), Tok::Lambda) {
            return self.lambda(cur);
        }
        self.postfix(cur)
    }

    fn lambda(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        cur.expect(&Tok::Lambda)?;
        let name = cur.ident()?;
        cur.expect(&Tok::Colon)?;
        let ty = parse_type_at(cur)?;
        cur.expect(&Tok::Dot)?;
        self.scope.push((name.clone(), ty.clone()));
        let body = self.term(cur);
        self.scope.pop();
        Ok(Term::lam(Var::new(name, ty), body?))
    }

    fn postfix(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        let mut base = self.unary(cur)?;
        while matches!(cur.peek(), Tok::LParen) {
            cur.bump();
            let mut args = vec![self.term(cur)?];
            while cur.eat(&Tok::Comma) {
                args.push(self.term(cur)?);
            }
            cur.expect(&Tok::RParen)?;
            base = Term::apps(base, args);
        }
        Ok(base)
    }

    fn unary(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        match cur.peek() {
            Tok::Caret => {
                cur.bump();
                Ok(Term::int(self.operand(cur)?))
            }
            Tok::Bang => {
                cur.bump();
                Ok(Term::ext(self.operand(cur)?))
            }
            _ => self.primary(cur),
        }
    }

    fn operand(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        if matches!(cur.peek(), Tok::Lambda) {
            self.lambda(cur)
        } else {
            self.unary(cur)
        }
    }

    fn primary(&mut self, cur: &mut Cursor) -> Result<Term, ParseError> {
        match cur.peek().clone() {
            Tok::LParen => {
                cur.bump();
                let t = self.term(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(name) => {
                let offset = cur.offset();
                cur.bump();
                if let Some((_, ty)) = self.scope.iter().rev().find(|(n, _)| *n == name) {
                    return Ok(Term::var(name, ty.clone()));
                }
                let Some(ty) = self.sig.get(&name).cloned() else {
                    return Err(ParseError::at(
                        cur.src,
                        offset,
                        format!("unknown symbol `{name}`"),
                    ));
                };
                let head = Term::constant(name, ty.clone());
                match ty.quantifier_domain() {
                    Some(dom)
                        if matches!(cur.peek(), Tok::LParen)
                            && matches!(cur.peek_at(1), Tok::Ident(_))
                            && matches!(cur.peek_at(2), Tok::Comma) =>
                    {
                        self.quantifier_sugar(cur, head, dom.clone())
                    }
                    _ => Ok(head),
                }
            }
            other => Err(cur.error(format!("expected a term, found {other}"))),
        }
    }

    fn quantifier_sugar(
        &mut self,
        cur: &mut Cursor,
        q: Term,
        dom: SimpleType,
    ) -> Result<Term, ParseError> {
        cur.expect(&Tok::LParen)?;
        let x = cur.ident()?;
        cur.expect(&Tok::Comma)?;
        self.scope.push((x.clone(), dom.clone()));
        let parts = (|| {
            let r = self.term(cur)?;
            cur.expect(&Tok::Comma)?;
            let s = self.term(cur)?;
            Ok::<_, ParseError>((r, s))
        })();
        self.scope.pop();
        let (r, s) = parts?;
        cur.expect(&Tok::RParen)?;
        Ok(Term::quantified(q, Var::new(x, dom), r, s))
    }
}
