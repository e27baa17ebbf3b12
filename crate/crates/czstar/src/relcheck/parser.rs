//! Recursive-descent parser for relation lines.
//!
//! ```text
//! relation := expr "==" expr ["for" binding ("," binding)*]
//! binding  := VAR "in" ["-"] INT ".." ["-"] INT
//! expr     := term (("+" | "-") term)*
//! term     := unary ("*" unary)*
//! unary    := "-" unary | factor
//! factor   := INT | "q^(" iexpr ")" | "qb(" iexpr ")" | NAME "{" [iexpr ("," iexpr)*] "}"
//!           | "[" expr "," expr "]" ("_(" iexpr ["," iexpr] ")" | "_*") | "(" expr ")"
//! iexpr    := iterm (("+" | "-") iterm)*
//! iterm    := iunary ("*" iunary | "/2")*
//! iunary   := "-" iunary | INT | VAR | "(" iexpr ")"
//! ```
//!
//! A name may end in primes and, directly before `{`, a `+` or `-` sign.

use crate::error::{Error, Result};

use super::ast::{Binding, BracketKind, Expr, IExpr, Relation};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

const SYMBOLS: [&str; 16] = [
    "==", "..", "+", "-", "*", "/", "(", ")", "[", "]", "{", "}", ",", "_", "^", "=",
];

fn lex(src: &str, line: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, what: &str| Error::Syntax {
        line,
        col,
        expected: vec![what.to_string()],
    };
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<i64>().map_err(|_| err(col, "integer within i64 range"))?;
            out.push(Token { tok: Tok::Int(v), col });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            if i + 1 < chars.len() && (chars[i] == '+' || chars[i] == '-') && chars[i + 1] == '{' {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| err(col, "operator, name or number"))?;
            i += sym.chars().count();
            out.push(Token { tok: Tok::Sym(sym), col });
        }
    }
    out.push(Token {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.toks[self.pos].col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &'static str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(&[sym]))
        }
    }

    fn relation(&mut self) -> Result<Relation> {
        let lhs = self.expr()?;
        if !self.eat("==") {
            return Err(self.error(&["==", "+", "-", "*"]));
        }
        let rhs = self.expr()?;
        let mut bindings = Vec::new();
        if matches!(self.peek(), Tok::Ident(s) if s == "for") {
            self.pos += 1;
            loop {
                bindings.push(self.binding()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        if *self.peek() != Tok::End {
            let mut exp = vec!["end of relation", "+", "-", "*"];
            if bindings.is_empty() {
                exp.push("for");
            } else {
                exp.push(",");
            }
            return Err(self.error(&exp));
        }
        Ok(Relation { lhs, rhs, bindings })
    }

    fn binding(&mut self) -> Result<Binding> {
        let var = match self.peek().clone() {
            Tok::Ident(v) if is_var(&v) => v,
            _ => return Err(self.error(&["variable"])),
        };
        self.pos += 1;
        if !matches!(self.peek(), Tok::Ident(s) if s == "in") {
            return Err(self.error(&["in"]));
        }
        self.pos += 1;
        let lo = self.signed_int()?;
        self.expect("..")?;
        let hi_pos = self.pos;
        let hi = self.signed_int()?;
        if hi < lo {
            self.pos = hi_pos;
            return Err(self.error(&["upper bound not below lower bound"]));
        }
        Ok(Binding { var, lo, hi })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        match *self.peek() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat("-") {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while self.eat("*") {
            acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        const START: [&str; 6] = ["integer", "q^(", "qb(", "NAME{", "[", "("];
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) => {
                if name == "q" && *self.peek2() == Tok::Sym("^") {
                    self.pos += 2;
                    self.expect("(")?;
                    let e = self.iexpr()?;
                    self.expect(")")?;
                    return Ok(Expr::QPow(e));
                }
                if name == "qb" && *self.peek2() == Tok::Sym("(") {
                    self.pos += 2;
                    let e = self.iexpr()?;
                    self.expect(")")?;
                    return Ok(Expr::QBracket(e));
                }
                if is_keyword(&name) {
                    return Err(self.error(&START));
                }
                self.pos += 1;
                self.expect("{")?;
                let mut args = Vec::new();
                if !self.eat("}") {
                    loop {
                        args.push(self.iexpr()?);
                        if self.eat("}") {
                            break;
                        }
                        if !self.eat(",") {
                            return Err(self.error(&[",", "}"]));
                        }
                    }
                }
                Ok(Expr::Op { name, args })
            }
            Tok::Sym("[") => {
                self.pos += 1;
                let left = self.expr()?;
                self.expect(",")?;
                let right = self.expr()?;
                self.expect("]")?;
                self.expect("_")?;
                let kind = if self.eat("*") {
                    BracketKind::Star
                } else if self.eat("(") {
                    let x = self.iexpr()?;
                    let k = if self.eat(",") {
                        BracketKind::Pair(x, self.iexpr()?)
                    } else {
                        BracketKind::Deformed(x)
                    };
                    if !self.eat(")") {
                        return Err(self.error(&[",", ")"]));
                    }
                    k
                } else {
                    return Err(self.error(&["(", "*"]));
                };
                Ok(Expr::Bracket {
                    left: Box::new(left),
                    right: Box::new(right),
                    kind,
                })
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.error(&START)),
        }
    }

    fn iexpr(&mut self) -> Result<IExpr> {
        let mut acc = self.iterm()?;
        loop {
            if self.eat("+") {
                acc = IExpr::Add(Box::new(acc), Box::new(self.iterm()?));
            } else if self.eat("-") {
                acc = IExpr::Sub(Box::new(acc), Box::new(self.iterm()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn iterm(&mut self) -> Result<IExpr> {
        let mut acc = self.iunary()?;
        loop {
            if self.eat("*") {
                acc = IExpr::Mul(Box::new(acc), Box::new(self.iunary()?));
            } else if self.eat("/") {
                if *self.peek() != Tok::Int(2) {
                    return Err(self.error(&["2"]));
                }
                self.pos += 1;
                acc = IExpr::Half(Box::new(acc));
            } else {
                return Ok(acc);
            }
        }
    }

    fn iunary(&mut self) -> Result<IExpr> {
        if self.eat("-") {
            return Ok(IExpr::Neg(Box::new(self.iunary()?)));
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(IExpr::Int(v))
            }
            Tok::Ident(v) if is_var(&v) => {
                self.pos += 1;
                Ok(IExpr::Var(v))
            }
            Tok::Sym("(") => {
                self.pos += 1;
                let e = self.iexpr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.error(&["integer", "variable", "("])),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    s == "for" || s == "in"
}

/// Variables are plain identifiers: no primes, no sign, not a keyword.
fn is_var(s: &str) -> bool {
    !is_keyword(s) && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse one relation; `line` is used for error positions.
pub fn parse_relation_at(text: &str, line: usize) -> Result<Relation> {
    let mut p = Parser {
        toks: lex(text, line)?,
        pos: 0,
        line,
    };
    p.relation()
}

pub fn parse_relation(text: &str) -> Result<Relation> {
    parse_relation_at(text, 1)
}

/// One relation per non-blank line; `#` starts a comment.
pub fn parse_suite_text(text: &str) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse_relation_at(body, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> Relation {
        let r = parse_relation(s).unwrap();
        let printed = r.to_string();
        assert_eq!(parse_relation(&printed).unwrap(), r, "{s} -> {printed}");
        r
    }

    #[test]
    fn cz_plus_example() {
        let r = rt("[L+{n},L+{m}]_(m-n) == qb(n-m)*L+{n+m} for n in -2..2, m in -2..2");
        assert_eq!(r.bindings.len(), 2);
        assert_eq!(r.bindings[0], Binding { var: "n".into(), lo: -2, hi: 2 });
        match &r.lhs {
            Expr::Bracket { left, kind, .. } => {
                assert!(matches!(**left, Expr::Op { ref name, .. } if name == "L+"));
                assert!(matches!(kind, BracketKind::Deformed(IExpr::Sub(..))));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalar_node_exponent() {
        let r = rt("q^(2)*L+{1} == 0");
        match r.lhs {
            Expr::Mul(a, _) => assert_eq!(*a, Expr::QPow(IExpr::Int(2))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_and_pair_brackets() {
        rt("[T{n,k},T{m,l}]_* == 0 for n in -1..1");
        rt("[Q{2},L+{n}]_(n,-n) == 0");
        rt("[L'-{n},L'-{m}]_(n-m) == qb(n-m)*L'-{n+m}");
        rt("-(a{}*b{}) + --c{} == (x{} - y{}) - (z{} - w{})");
        rt("X{} == qb((n*(l-2)-m*(k-2))/2)*T{n+m,k+l} - 3*S0{}");
        rt("E{} == q^(-n/2*k)*F{-(n+1)} + q^(-(n-m)/2/2)*G{}");
    }

    #[test]
    fn name_sign_only_before_brace() {
        let r = parse_relation("a{}+b{} == c{}-d{}").unwrap();
        assert!(matches!(r.lhs, Expr::Add(..)));
        assert!(matches!(r.rhs, Expr::Sub(..)));
    }

    #[test]
    fn error_positions() {
        let e = parse_relation("[L+{n},L+{m}]_(m-n) = 0").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 1, col: 21, .. }), "{e:?}");
        let e = parse_relation("L+{n} == ").unwrap_err();
        match e {
            Error::Syntax { col, expected, .. } => {
                assert_eq!(col, 10);
                assert!(expected.contains(&"q^(".to_string()));
            }
            other => panic!("{other:?}"),
        }
        let e = parse_relation("L{n} == L{n} for n in 3..1").unwrap_err();
        assert!(matches!(e, Error::Syntax { col: 26, .. }), "{e:?}");
        let e = parse_relation("L{n/3} == 0").unwrap_err();
        assert!(matches!(e, Error::Syntax { col: 5, .. }), "{e:?}");
        assert!(parse_relation("L{99999999999999999999} == 0").is_err());
        assert!(parse_relation("L{n} == 0 for").is_err());
        assert!(parse_relation("L{n} == 0 0").is_err());
        assert!(parse_relation("L == 0").is_err());
        assert!(parse_relation("L{n} == 0 # x").is_err());
    }

    #[test]
    fn suite_text_lines() {
        let text = "# header\n\n[A{},B{}]_* == 0  # trailing\nA{} == A{}\n";
        assert_eq!(parse_suite_text(text).unwrap().len(), 2);
        let e = parse_suite_text("A{} == 0\nA{} == ==\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, col: 8, .. }), "{e:?}");
    }
}
