//! Tokenizer and recursive-descent parser.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | 'pi' | var | func '(' expr ')' | '(' expr ')'
//! ```

use super::{BinOp, DslError, DslErrorKind, Expr, Func, Node, NodeKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| {
                    DslError::new(DslErrorKind::BadNumber(s.to_string()), start)
                })?;
                out.push(Token { tok: Tok::Num(v), offset: start });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset: start });
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => Tok::Op(c as char),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(DslError::new(DslErrorKind::UnexpectedChar(ch), start));
            }
        };
        i += 1;
        out.push(Token { tok, offset: start });
    }
    out.push(Token { tok: Tok::End, offset: text.len() });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: &Token) -> DslError {
        let kind = match &t.tok {
            Tok::End => DslErrorKind::UnexpectedEnd,
            other => DslErrorKind::UnexpectedToken(describe(other)),
        };
        DslError::new(kind, t.offset)
    }

    fn expr(&mut self) -> Result<Node, DslError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = self.peek().tok {
            let t = self.bump();
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Node::new(NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)), t.offset);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, DslError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = self.peek().tok {
            let t = self.bump();
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Node::new(NodeKind::Binary(op, Box::new(lhs), Box::new(rhs)), t.offset);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, DslError> {
        if self.peek().tok == Tok::Op('-') {
            let t = self.bump();
            let inner = self.unary()?;
            return Ok(Node::new(NodeKind::Neg(Box::new(inner)), t.offset));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, DslError> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Op('^') {
            let t = self.bump();
            let exp = self.unary()?;
            return Ok(Node::new(
                NodeKind::Binary(BinOp::Pow, Box::new(base), Box::new(exp)),
                t.offset,
            ));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, DslError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok(Node::new(NodeKind::Const(v), t.offset)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(ref name) => {
                if self.peek().tok == Tok::LParen {
                    return self.call(name, t.offset);
                }
                if let Some(idx) = self.vars.iter().position(|v| v == name) {
                    return Ok(Node::new(NodeKind::Var(idx), t.offset));
                }
                if name == "pi" {
                    return Ok(Node::new(NodeKind::Const(std::f64::consts::PI), t.offset));
                }
                let kind = if Func::from_name(name).is_some() {
                    DslErrorKind::Arity { name: name.clone(), expected: 1, found: 0 }
                } else {
                    DslErrorKind::UnknownVariable(name.clone())
                };
                Err(DslError::new(kind, t.offset))
            }
            _ => Err(self.unexpected(&t)),
        }
    }

    fn call(&mut self, name: &str, offset: usize) -> Result<Node, DslError> {
        let func = Func::from_name(name)
            .ok_or_else(|| DslError::new(DslErrorKind::UnknownFunction(name.to_string()), offset))?;
        self.bump(); // '('
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            args.push(self.expr()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                args.push(self.expr()?);
            }
        }
        self.expect_rparen()?;
        if args.len() != 1 {
            return Err(DslError::new(
                DslErrorKind::Arity { name: name.to_string(), expected: 1, found: args.len() },
                offset,
            ));
        }
        let arg = args.pop().expect("one argument");
        Ok(Node::new(NodeKind::Call(func, Box::new(arg)), offset))
    }

    fn expect_rparen(&mut self) -> Result<(), DslError> {
        let t = self.bump();
        if t.tok == Tok::RParen {
            Ok(())
        } else {
            Err(self.unexpected(&t))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => v.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Comma => ",".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses `text` over the declared variable names (positional).
pub fn parse_expr(text: &str, vars: &[&str]) -> Result<Expr, DslError> {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars: &vars };
    let root = p.expr()?;
    let end = p.peek().clone();
    if end.tok != Tok::End {
        return Err(p.unexpected(&end));
    }
    Ok(Expr { root, vars })
}
