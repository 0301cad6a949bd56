use super::{ExtAxiomSet, ExtVar, Formula, PVar, Query, Sequent, Sort, SyntaxError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    LParen,
    RParen,
    Comma,
    Turnstile,
    Assign,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    /// Next token with the position where it starts.
    fn next(&mut self) -> Result<(Tok, usize, usize), SyntaxError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        if self.pos >= self.src.len() {
            return Ok((Tok::End, line, col));
        }
        let c = self.src[self.pos];
        let tok = match c {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b'|' if self.src.get(self.pos + 1) == Some(&b'-') => {
                self.bump();
                self.bump();
                Tok::Turnstile
            }
            b':' if self.src.get(self.pos + 1) == Some(&b'=') => {
                self.bump();
                self.bump();
                Tok::Assign
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.bump();
                }
                match &self.src[start..self.pos] {
                    b"0" => Tok::Zero,
                    b"1" => Tok::One,
                    other => {
                        return Err(SyntaxError::Parse {
                            line,
                            col,
                            msg: format!("unexpected `{}`", String::from_utf8_lossy(other)),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            _ => {
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or('?');
                return Err(self.err(format!("unexpected character `{ch}`")));
            }
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

enum Item {
    F(Formula),
    Q(Query),
}

impl Item {
    fn query(self) -> Query {
        match self {
            Item::F(f) => Query::base(f),
            Item::Q(q) => q,
        }
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, line: usize) -> Result<Parser<'a>, SyntaxError> {
        let mut lex = Lexer::new(src, line);
        let (tok, line, col) = lex.next()?;
        Ok(Parser { lex, tok, line, col })
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn advance(&mut self) -> Result<Tok, SyntaxError> {
        let (t, l, c) = self.lex.next()?;
        self.line = l;
        self.col = c;
        Ok(std::mem::replace(&mut self.tok, t))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.tok == t {
            self.advance()?;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn end(&mut self) -> Result<(), SyntaxError> {
        if self.tok == Tok::End {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn pvar(&mut self) -> Result<PVar, SyntaxError> {
        match &self.tok {
            Tok::Ident(s) if s.len() > 1 && s.starts_with('p') && !is_keyword(s) => {
                let p = PVar::new(s);
                self.advance()?;
                Ok(p)
            }
            _ => Err(self.err("expected propositional variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        match self.item(false)? {
            Item::F(f) => Ok(f),
            Item::Q(_) => Err(self.err("expected formula")),
        }
    }

    fn query(&mut self) -> Result<Query, SyntaxError> {
        Ok(self.item(true)?.query())
    }

    fn item(&mut self, allow_query: bool) -> Result<Item, SyntaxError> {
        let (line, col) = (self.line, self.col);
        let here = |msg: &str| SyntaxError::Parse { line, col, msg: msg.to_string() };
        match self.advance()? {
            Tok::Zero => Ok(Item::F(Formula::zero())),
            Tok::One => Ok(Item::F(Formula::one())),
            Tok::Ident(s) => match s.as_str() {
                "dec" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let a = self.formula()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let p = self.pvar()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Item::F(Formula::dec(a, p, b)))
                }
                "or" | "and" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let a = self.item(allow_query)?;
                    self.expect(Tok::Comma, "`,`")?;
                    let b = self.item(allow_query)?;
                    self.expect(Tok::RParen, "`)`")?;
                    let or = s == "or";
                    Ok(match (a, b) {
                        (Item::F(a), Item::F(b)) => {
                            Item::F(if or { Formula::or(a, b) } else { Formula::and(a, b) })
                        }
                        (a, b) => {
                            let (a, b) = (a.query(), b.query());
                            Item::Q(if or { Query::or(a, b) } else { Query::and(a, b) })
                        }
                    })
                }
                "not" | "qor" | "qand" if allow_query => {
                    self.expect(Tok::LParen, "`(`")?;
                    let a = self.query()?;
                    let q = if s == "not" {
                        Query::not(a)
                    } else {
                        self.expect(Tok::Comma, "`,`")?;
                        let b = self.query()?;
                        if s == "qor" {
                            Query::or(a, b)
                        } else {
                            Query::and(a, b)
                        }
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Item::Q(q))
                }
                "not" | "qor" | "qand" => Err(here("Boolean connective inside a formula")),
                _ if s.len() > 1 && s.starts_with('p') => Ok(Item::F(Formula::var(PVar::new(&s)))),
                _ => {
                    let mut cs = s.chars();
                    match (cs.next().and_then(Sort::from_letter), cs.as_str()) {
                        (Some(sort), rest) if !rest.is_empty() => {
                            Ok(Item::F(Formula::ext(ExtVar::named(sort, rest))))
                        }
                        _ => Err(here(&format!("unknown identifier `{s}`"))),
                    }
                }
            },
            Tok::End => Err(here("unexpected end of input")),
            t => Err(here(&format!("unexpected {}", tok_name(&t)))),
        }
    }

    fn cedent(&mut self) -> Result<Vec<Query>, SyntaxError> {
        let mut out = Vec::new();
        if matches!(self.tok, Tok::Turnstile | Tok::End) {
            return Ok(out);
        }
        out.push(self.query()?);
        while self.tok == Tok::Comma {
            self.advance()?;
            out.push(self.query()?);
        }
        Ok(out)
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "dec" | "or" | "and" | "not" | "qor" | "qand")
}

fn tok_name(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::Comma => "`,`",
        Tok::Turnstile => "`|-`",
        Tok::Assign => "`:=`",
        _ => "token",
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, 1)?;
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

pub fn parse_query(text: &str) -> Result<Query, SyntaxError> {
    let mut p = Parser::new(text, 1)?;
    let q = p.query()?;
    p.end()?;
    Ok(q)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(text, 1)?;
    let ante = p.cedent()?;
    p.expect(Tok::Turnstile, "`|-`")?;
    let succ = p.cedent()?;
    p.end()?;
    Ok(Sequent { ante, succ })
}

/// Result of reading an axiom file.
#[derive(Clone, Debug, Default)]
pub struct ParsedAxioms {
    pub set: ExtAxiomSet,
    /// Name-map comments, `(name, description)`.
    pub names: Vec<(String, String)>,
}

/// Reads an axiom file and validates well-foundedness.
pub fn parse_axioms(text: &str) -> Result<ParsedAxioms, SyntaxError> {
    let mut pairs = Vec::new();
    let mut names = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let (body, comment) = match raw.find('#') {
            Some(k) => (&raw[..k], Some(raw[k + 1..].trim())),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(rest) = c.strip_prefix("name ") {
                if let Some((n, d)) = rest.split_once('=') {
                    names.push((n.trim().to_string(), d.trim().to_string()));
                }
            }
        }
        if body.trim().is_empty() {
            continue;
        }
        let mut p = Parser::new(body, i + 1)?;
        let (line, col) = (p.line, p.col);
        let v = match p.formula()?.as_ext() {
            Some(v) => v,
            None => {
                return Err(SyntaxError::Parse { line, col, msg: "expected extension variable".into() })
            }
        };
        p.expect(Tok::Assign, "`:=`")?;
        let f = p.formula()?;
        p.end()?;
        pairs.push((v, f));
    }
    Ok(ParsedAxioms { set: ExtAxiomSet::from_pairs(&pairs)?, names })
}
