//! Ordered products along the Y and X̃ lines of the quantum plane.
//!
//! A move carries k positive and l negative fluctuations. On a Y line the
//! ordered product of the moves is q^{l-k}Y^{2(k+l)}; on an X line the phase
//! is inverted, q^{k-l}X̃^{-2(k+l)}.

use serde_json::json;

use crate::czrep::star_exponent;
use crate::error::{Error, Result};
use crate::phase::{q_bracket, q_diff, HalfInt, Phase};
use crate::report::Report;
use crate::tbm::DmtMatrices;
use crate::weyl::{make_xtilde, make_y, rel_residual, CMatrix, MonomialMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    Y,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineMove {
    pub line: Line,
    pub pos_fluct: u32,
    pub neg_fluct: u32,
    /// +1 or -1.
    pub direction: i8,
}

impl LineMove {
    pub fn new(line: Line, pos_fluct: u32, neg_fluct: u32) -> Self {
        Self {
            line,
            pos_fluct,
            neg_fluct,
            direction: 1,
        }
    }

    pub fn reversed(self) -> Self {
        Self {
            direction: -self.direction,
            ..self
        }
    }

    pub fn displacement(&self) -> i64 {
        i64::from(self.direction) * i64::from(self.pos_fluct + self.neg_fluct)
    }
}

/// Phase q^e and the power of Y (Y line) or X̃ (X line).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineProduct {
    pub line: Line,
    pub phase_exponent: i64,
    pub power: i64,
}

impl LineProduct {
    pub fn phase(&self, q: Phase) -> Phase {
        q.pow(self.phase_exponent)
    }

    pub fn operator(&self, size: usize, q: Phase) -> Result<MonomialMatrix> {
        match self.line {
            Line::Y => Ok(make_y(size, q)?.pow(self.power)),
            Line::X => Ok(make_xtilde(size, q)?.pow(self.power)),
        }
    }
}

pub fn star_ordered_compose(moves: &[LineMove]) -> Result<LineProduct> {
    let line = moves.first().map_or(Line::Y, |m| m.line);
    if moves.iter().any(|m| m.line != line) {
        return Err(Error::MixedLines);
    }
    let (mut phase, mut disp) = (0i64, 0i64);
    for m in moves {
        let dir = i64::from(m.direction);
        let (k, l) = (i64::from(m.pos_fluct), i64::from(m.neg_fluct));
        phase += dir * (l - k);
        disp += m.displacement();
    }
    Ok(match line {
        Line::Y => LineProduct {
            line,
            phase_exponent: phase,
            power: 2 * disp,
        },
        Line::X => LineProduct {
            line,
            phase_exponent: -phase,
            power: -2 * disp,
        },
    })
}

/// Trivial CZ± generators L'⁺_n = -Y^{2n}/d and L'⁻_n = X̃^{-2n}/d.
fn line_generator(line: Line, n: i64, size: usize, q: Phase) -> Result<CMatrix> {
    let d = q_diff(q)?;
    Ok(match line {
        Line::Y => make_y(size, q)?.pow(2 * n).to_cmatrix().scale(-1.0 / d),
        Line::X => make_xtilde(size, q)?.pow(-2 * n).to_cmatrix().scale(1.0 / d),
    })
}

/// [L'_n, L'_m]* evaluated with the ordered-product phases.
pub fn line_star_bracket(line: Line, n: u32, m: u32, size: usize, q: Phase) -> Result<CMatrix> {
    let nm = star_ordered_compose(&[LineMove::new(line, n, m)])?;
    let mn = star_ordered_compose(&[LineMove::new(line, m, n)])?;
    let prod = &line_generator(line, n.into(), size, q)? * &line_generator(line, m.into(), size, q)?;
    Ok(&prod.scale(nm.phase(q).to_complex()) - &prod.scale(mn.phase(q).to_complex()))
}

/// Composite identities of the matrix DMT and the trivial reps they generate.
pub fn dmt_composite_check(size: usize, q: Phase) -> Result<Report> {
    let mut rep = Report::new("dmt-composites", size, q);
    let d = DmtMatrices::new(size, q)?;
    let y2 = make_y(size, q)?.pow(2);
    let xt2 = make_xtilde(size, q)?.pow(-2);
    let p = json!({});
    let pairs = [
        ("tyd-tx", d.ty_dag.mul(&d.tx)?, y2.scaled(q)?),
        ("tx-tyd", d.tx.mul(&d.ty_dag)?, y2.scaled(q.inv())?),
        ("tyd-txd", d.ty_dag.mul(&d.tx_dag)?, xt2.scaled(q.inv())?),
        ("txd-tyd", d.tx_dag.mul(&d.ty_dag)?, xt2.scaled(q)?),
        ("tx-ty", d.tx.mul(&d.ty)?, make_xtilde(size, q)?.pow(2).scaled(q)?),
    ];
    for (name, lhs, rhs) in pairs {
        rep.push_exact(name, p.clone(), lhs.same_matrix(&rhs));
    }
    // X̃⁻² moves the site index by two; Y² is diagonal
    rep.push_exact(
        "xtilde-displacement",
        p.clone(),
        xt2.shift() == (size + size - 2) % size && y2.shift() == 0,
    );
    for line in [Line::Y, Line::X] {
        for n in 0..=3u32 {
            for m in 0..=3u32 {
                let lhs = line_star_bracket(line, n, m, size, q)?;
                let rhs = line_generator(line, i64::from(n + m), size, q)?
                    .scale(q_bracket(i64::from(n) - i64::from(m), q)?);
                rep.push(
                    "trivial-cz",
                    json!({"line": format!("{line:?}"), "n": n, "m": m}),
                    rel_residual(&lhs, &rhs),
                    1e-12,
                );
            }
        }
    }
    Ok(rep)
}

/// Exponent e with A*B = q^e AB for the trivial generators of the line.
pub fn star_mul_phase(line: Line, k: i64, l: i64) -> Result<i64> {
    let w = match line {
        Line::Y => HalfInt::int(2),
        Line::X => HalfInt::int(-2),
    };
    let x = star_exponent(k, w, l, w);
    if !x.is_integer() {
        return Err(Error::PhaseNotRepresentable(format!("q^({x})")));
    }
    Ok(-x.to_integer())
}
