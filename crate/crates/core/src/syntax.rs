//! Tokenizer shared by the term, glue-formula and f-structure readers.

use std::fmt;

use thiserror::Error;

/// A syntax error with a 1-based line/column position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, col) = line_col(src, offset);
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in src.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Quoted(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Lambda,
    Caret,
    Bang,
    Arrow,
    Lolli,
    Star,
    LeadsTo,
    Forall,
    Up,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Quoted(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LeadsTo => f.write_str("`~>`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Up => f.write_str("`up`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens paired with their byte offsets.
///
/// A `-` continues an identifier when it is followed by an alphanumeric
/// character, except for `-o` standing alone, which is linear implication.
/// This keeps names such as `conv-with` and `OBL-WITH` single tokens.
pub fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let peek = |j: usize| chars.get(j).map(|&(_, c)| c);
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '\\' | 'λ' => Some(Tok::Lambda),
            '^' | 'ˆ' => Some(Tok::Caret),
            '!' | 'ˇ' => Some(Tok::Bang),
            '*' | '⊗' => Some(Tok::Star),
            '⊸' => Some(Tok::Lolli),
            '↝' => Some(Tok::LeadsTo),
            '→' => Some(Tok::Arrow),
            '∀' => Some(Tok::Forall),
            '↑' => Some(Tok::Up),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, off));
            i += 1;
            continue;
        }
        match c {
            '-' if peek(i + 1) == Some('>') => {
                out.push((Tok::Arrow, off));
                i += 2;
            }
            '-' if peek(i + 1) == Some('o') && !peek(i + 2).is_some_and(is_ident_char) => {
                out.push((Tok::Lolli, off));
                i += 2;
            }
            '~' if peek(i + 1) == Some('>') => {
                out.push((Tok::LeadsTo, off));
                i += 2;
            }
            '\'' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].1 != '\'' {
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(ParseError::at(src, off, "unterminated quoted symbol"));
                }
                let s: String = chars[start..j].iter().map(|&(_, c)| c).collect();
                out.push((Tok::Quoted(s), off));
                i = j + 1;
            }
            c if is_ident_start(c) => {
                let mut j = i;
                let mut s = String::new();
                while j < chars.len() {
                    let cj = chars[j].1;
                    if is_ident_char(cj) {
                        s.push(cj);
                        j += 1;
                    } else if cj == '-'
                        && peek(j + 1).is_some_and(|n| n.is_alphanumeric())
                        && !(peek(j + 1) == Some('o') && !peek(j + 2).is_some_and(is_ident_char))
                    {
                        s.push('-');
                        j += 1;
                    } else {
                        break;
                    }
                }
                let tok = match s.as_str() {
                    "forall" => Tok::Forall,
                    "up" => Tok::Up,
                    _ => Tok::Ident(s),
                };
                out.push((tok, off));
                i = j;
            }
            _ => {
                return Err(ParseError::at(
                    src,
                    off,
                    format!("unexpected character `{c}`"),
                ))
            }
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// Cursor over a token stream.
pub struct Cursor<'s> {
    pub src: &'s str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'s> Cursor<'s> {
    pub fn new(src: &'s str) -> Result<Self, ParseError> {
        Ok(Cursor {
            src,
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {t}, found {}", self.peek())))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {other}"))),
        }
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing {}", self.peek())))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, self.offset(), message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn hyphenated_names_and_lolli() {
        assert_eq!(
            kinds("conv-with(Z,X) -o h"),
            vec![
                Tok::Ident("conv-with".into()),
                Tok::LParen,
                Tok::Ident("Z".into()),
                Tok::Comma,
                Tok::Ident("X".into()),
                Tok::RParen,
                Tok::Lolli,
                Tok::Ident("h".into()),
                Tok::Eof
            ]
        );
        assert_eq!(kinds("X-o Y")[1], Tok::Lolli);
        assert_eq!(kinds("OBL-WITH")[0], Tok::Ident("OBL-WITH".into()));
        assert_eq!(kinds("e->t")[1], Tok::Arrow);
    }

    #[test]
    fn error_positions() {
        let err = tokenize("f:[PRED\n  $]").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }
}
