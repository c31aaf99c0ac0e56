//! Sweep axis grammar.
//!
//! ```text
//! axis  := item (',' item)*
//! item  := 'geom(' a ',' b ',' count ')' | 'lin(' a ',' b ',' count ')'
//!        | 'list(' expr (',' expr)* ')' | expr
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'n' digit | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Functions: `pow sqrt exp ln floor ceil round min max`. An expression may
//! refer to earlier axes only.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Item {
    Geom(Expr, Expr, Expr),
    Lin(Expr, Expr, Expr),
    List(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxisSpec {
    items: Vec<Item>,
    source: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || chars[i] == 'e'
                    || chars[i] == 'E'
                    || ((chars[i] == '-' || chars[i] == '+')
                        && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {text:?} in {s:?}")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in sweep axis {:?}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.eat(',') {
            args.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn item(&mut self) -> Result<Item> {
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            if matches!(name.as_str(), "geom" | "lin" | "list") {
                self.pos += 1;
                let mut args = self.args()?;
                return match name.as_str() {
                    "list" => Ok(Item::List(args)),
                    _ if args.len() != 3 => Err(self.err(&format!("{name} takes (a, b, count)"))),
                    _ => {
                        let c = args.pop().unwrap();
                        let b = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        Ok(if name == "geom" {
                            Item::Geom(a, b, c)
                        } else {
                            Item::Lin(a, b, c)
                        })
                    }
                };
            }
        }
        Ok(Item::List(vec![self.expr()?]))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(j) = name.strip_prefix('n').and_then(|d| d.parse::<usize>().ok()) {
                    if j == 0 {
                        return Err(self.err("axes are numbered from n1"));
                    }
                    return Ok(Expr::Var(j));
                }
                let arity = match name.as_str() {
                    "pow" | "min" | "max" => 2,
                    "sqrt" | "exp" | "ln" | "floor" | "ceil" | "round" => 1,
                    _ => return Err(self.err(&format!("unknown function {name:?}"))),
                };
                let args = self.args()?;
                if args.len() != arity {
                    return Err(self.err(&format!("{name} takes {arity} argument(s)")));
                }
                Ok(Expr::Call(name, args))
            }
            _ => Err(self.err("expected a number, axis or function")),
        }
    }
}

impl Expr {
    fn max_var(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::Var(j) => *j,
            Expr::Neg(e) => e.max_var(),
            Expr::Bin(_, a, b) => a.max_var().max(b.max_var()),
            Expr::Call(_, args) => args.iter().map(Expr::max_var).max().unwrap_or(0),
        }
    }

    fn eval(&self, ctx: &[f64]) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(j) => ctx[j - 1],
            Expr::Neg(e) => -e.eval(ctx),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(ctx), b.eval(ctx));
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    '/' => x / y,
                    _ => x.powf(y),
                }
            }
            Expr::Call(name, args) => {
                let a: Vec<f64> = args.iter().map(|e| e.eval(ctx)).collect();
                match name.as_str() {
                    "pow" => a[0].powf(a[1]),
                    "min" => a[0].min(a[1]),
                    "max" => a[0].max(a[1]),
                    "sqrt" => a[0].sqrt(),
                    "exp" => a[0].exp(),
                    "ln" => a[0].ln(),
                    "floor" => a[0].floor(),
                    "ceil" => a[0].ceil(),
                    _ => a[0].round(),
                }
            }
        }
    }
}

/// Snaps values within `1e-12` relative of an integer, so that `geom(16,256,5)`
/// yields exactly 32, 64 and 128.
fn tidy(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() <= 1e-12 * v.abs().max(1.0) {
        r
    } else {
        v
    }
}

fn count(e: &Expr, ctx: &[f64]) -> Result<usize> {
    let c = e.eval(ctx);
    if c.fract() != 0.0 || c < 1.0 || c > 1e6 {
        return Err(Error::Parse(format!("grid count must be a positive integer, got {c}")));
    }
    Ok(c as usize)
}

impl AxisSpec {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            toks: lex(src)?,
            pos: 0,
            src,
        };
        if p.toks.is_empty() {
            return Err(p.err("empty axis"));
        }
        let mut items = vec![p.item()?];
        while p.eat(',') {
            items.push(p.item()?);
        }
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Self {
            items,
            source: src.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn max_var(&self) -> usize {
        self.items
            .iter()
            .map(|it| match it {
                Item::Geom(a, b, c) | Item::Lin(a, b, c) => {
                    a.max_var().max(b.max_var()).max(c.max_var())
                }
                Item::List(v) => v.iter().map(Expr::max_var).max().unwrap_or(0),
            })
            .max()
            .unwrap_or(0)
    }

    /// Values of this axis given the values of the earlier axes.
    pub fn values(&self, ctx: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for it in &self.items {
            match it {
                Item::List(v) => out.extend(v.iter().map(|e| tidy(e.eval(ctx)))),
                Item::Geom(a, b, c) => {
                    let (a, b, m) = (a.eval(ctx), b.eval(ctx), count(c, ctx)?);
                    if !(a > 0.0 && b > 0.0) {
                        return Err(Error::Parse("geom needs positive end points".into()));
                    }
                    for i in 0..m {
                        let t = if m == 1 { 0.0 } else { i as f64 / (m - 1) as f64 };
                        out.push(tidy(a * (b / a).powf(t)));
                    }
                }
                Item::Lin(a, b, c) => {
                    let (a, b, m) = (a.eval(ctx), b.eval(ctx), count(c, ctx)?);
                    for i in 0..m {
                        let t = if m == 1 { 0.0 } else { i as f64 / (m - 1) as f64 };
                        out.push(tidy(a + (b - a) * t));
                    }
                }
            }
        }
        if let Some(bad) = out.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("axis {:?} produced {bad}", self.source)));
        }
        Ok(out)
    }
}

/// All points of the sweep in lexicographic axis order.
pub fn expand_sweep(axes: &[AxisSpec]) -> Result<Vec<Vec<f64>>> {
    for (j, a) in axes.iter().enumerate() {
        if a.max_var() > j {
            return Err(Error::Parse(format!(
                "axis n{} = {:?} refers to a later axis",
                j + 1,
                a.source
            )));
        }
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::new();
        for p in &points {
            for v in axis.values(p)? {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}
