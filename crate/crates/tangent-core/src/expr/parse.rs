//! Lexer and recursive-descent parser for the expression grammar.

use super::{BinOp, ExprAst, Func, Node, ParseError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    offset: usize,
}

const ATOM_EXPECTED: &str = "a number, function, variable, or '('";

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let offset = i;
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                // Scientific notation, only when the mantissa is really
                // followed by an exponent ("1e-3"), so that "2*e" still
                // reads `e` as the constant.
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        j = k;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let text = &src[i..j];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset,
                    expected: format!("a numeric literal (could not parse '{text}')"),
                })?;
                i = j;
                Tok::Num(value)
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let name = src[i..j].to_owned();
                i = j;
                Tok::Ident(name)
            }
            _ => {
                return Err(ParseError {
                    offset,
                    expected: format!("a number, name, operator, or parenthesis (found '{c}')"),
                })
            }
        };
        out.push(Lexed { tok, offset });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    end: usize,
    var: Option<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |l| l.offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(&Tok::Plus) {
                BinOp::Add
            } else if self.eat(&Tok::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat(&Tok::Star) {
                BinOp::Mul
            } else if self.eat(&Tok::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.factor()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Node, ParseError> {
        if self.eat(&Tok::Minus) {
            Ok(Node::Neg(Box::new(self.power()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            // Right-associative; the exponent may itself carry a sign.
            let exponent = self.factor()?;
            Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Node::Number(v)),
            Some(Tok::Ident(name)) => self.ident(name, offset),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.eat(&Tok::RParen) {
                    Ok(inner)
                } else {
                    Err(ParseError {
                        offset: self.offset(),
                        expected: "')'".to_owned(),
                    })
                }
            }
            _ => Err(ParseError {
                offset,
                expected: ATOM_EXPECTED.to_owned(),
            }),
        }
    }

    fn ident(&mut self, name: String, offset: usize) -> Result<Node, ParseError> {
        match name.as_str() {
            "pi" => return Ok(Node::Number(std::f64::consts::PI)),
            "e" => return Ok(Node::Number(std::f64::consts::E)),
            _ => {}
        }
        if let Some(func) = Func::from_name(&name) {
            if self.eat(&Tok::LParen) {
                let arg = self.expr()?;
                if self.eat(&Tok::RParen) {
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                return Err(ParseError {
                    offset: self.offset(),
                    expected: "')'".to_owned(),
                });
            }
            return Err(ParseError {
                offset: self.offset(),
                expected: format!("'(' after function name '{name}'"),
            });
        }
        match &self.var {
            None => {
                self.var = Some(name);
                Ok(Node::Var)
            }
            Some(v) if *v == name => Ok(Node::Var),
            Some(v) => Err(ParseError {
                offset,
                expected: format!(
                    "the variable '{v}' (expressions use a single variable, found '{name}')"
                ),
            }),
        }
    }
}

pub(super) fn parse(src: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
        var: None,
    };
    let root = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ParseError {
            offset: p.offset(),
            expected: "end of input or an operator".to_owned(),
        });
    }
    Ok(ExprAst::from_parts(root, p.var))
}
