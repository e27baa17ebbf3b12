//! Negative controls: a relation with one phase deliberately broken.

use super::ast::{BracketKind, Expr, IExpr, Relation};

fn mutate_expr(e: &Expr) -> Expr {
    let b = |x: &Expr| Box::new(mutate_expr(x));
    match e {
        Expr::Bracket { left, right, kind } => Expr::Bracket {
            left: b(left),
            right: b(right),
            kind: match kind {
                BracketKind::Deformed(x) => BracketKind::Deformed(x.clone().plus(1)),
                BracketKind::Pair(x, y) => BracketKind::Pair(x.clone().plus(1), y.clone()),
                BracketKind::Star => BracketKind::Deformed(IExpr::Int(0)),
            },
        },
        Expr::Neg(x) => Expr::Neg(b(x)),
        Expr::Add(x, y) => Expr::Add(b(x), b(y)),
        Expr::Sub(x, y) => Expr::Sub(b(x), b(y)),
        Expr::Mul(x, y) => Expr::Mul(b(x), b(y)),
        other => other.clone(),
    }
}

fn shift_phase(e: &Expr) -> Expr {
    Expr::Mul(Box::new(Expr::QPow(IExpr::Int(1))), Box::new(e.clone()))
}

/// Shift every bracket deformation by one power of q (`_*` becomes `_(0)`).
/// A relation without brackets gets a stray q^(1) on its right side, or on
/// its left side when the right side is the literal 0.
pub fn mutate(rel: &Relation) -> Relation {
    let mut out = rel.clone();
    if rel.lhs.has_bracket() || rel.rhs.has_bracket() {
        out.lhs = mutate_expr(&rel.lhs);
        out.rhs = mutate_expr(&rel.rhs);
    } else if rel.rhs == Expr::Int(0) {
        out.lhs = shift_phase(&rel.lhs);
    } else {
        out.rhs = shift_phase(&rel.rhs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcheck::parser::parse_relation;

    fn m(s: &str) -> String {
        mutate(&parse_relation(s).unwrap()).to_string()
    }

    #[test]
    fn rules() {
        assert_eq!(m("[A{n},B{m}]_(m-n) == qb(n)*C{}"), "[A{n},B{m}]_(m-n+1) == qb(n)*C{}");
        assert_eq!(m("[A{},B{}]_(n,-n) == 0"), "[A{},B{}]_(n+1,-n) == 0");
        assert_eq!(m("[A{},B{}]_* == 0"), "[A{},B{}]_(0) == 0");
        assert_eq!(m("A{}*B{} == B{}"), "A{}*B{} == q^(1)*B{}");
        assert_eq!(m("A{} - B{} == 0 for n in 0..1"), "q^(1)*(A{} - B{}) == 0 for n in 0..1");
    }
}
