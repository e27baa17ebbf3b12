//! Operator registries: matrix families, Weyl/DMT matrices, the Laurent
//! realization and the U_q(sl₂) generators.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::czrep::{make_q_op, make_s0, make_t_substitution, Family, Sign};
use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::qcalc::{window_residual, Laurent, WindowOp};
use crate::tbm::{DmtMatrices, Uqsl2};
use crate::weyl::{make_x, make_xtilde, make_y, rel_residual, CMatrix, MonomialMatrix};

use super::eval::{arity, int_arg, Meta, Realization};

fn sign_suffix(name: &str) -> Option<(&str, Sign)> {
    if let Some(base) = name.strip_suffix('+') {
        Some((base, Sign::Plus))
    } else {
        name.strip_suffix('-').map(|b| (b, Sign::Minus))
    }
}

fn unknown<T>(name: &str) -> Result<T> {
    Err(Error::UnknownName(name.to_string()))
}

fn weyl_word(name: &str, args: &[Rational64], size: usize, q: Phase) -> Result<Option<MonomialMatrix>> {
    let base = match name {
        "X" => make_x(size, q.ring())?,
        "Y" => make_y(size, q)?,
        "Xt" => make_xtilde(size, q)?,
        "H" => make_x(size, q.ring())?.inverse(),
        "Q" => make_q_op(size, q)?,
        _ => return Ok(None),
    };
    arity(name, args, 1)?;
    Ok(Some(base.pow(int_arg(name, args, 0)?)))
}

macro_rules! cmatrix_ops {
    () => {
        fn identity(&self) -> CMatrix {
            CMatrix::identity(self.size())
        }
        fn add(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
            a.same_size(b)?;
            Ok(a + b)
        }
        fn mul(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
            a.checked_mul(b)
        }
        fn scale(&self, a: &CMatrix, c: Complex64) -> CMatrix {
            a.scale(c)
        }
        fn residual(&self, a: &CMatrix, b: &CMatrix) -> Result<f64> {
            a.same_size(b)?;
            Ok(rel_residual(a, b))
        }
    };
}

/// Generators of a matrix family plus the substitution matrices.
///
/// Names: `L±{n}`, `L'±{n}`, `S0±{}`, `T{n,k}` (k ∈ {0, ±2}), `Q{p}`, `H{p}`,
/// `X{p}`, `Y{p}`, `Xt{p}`. Generators carry (n, ±2), `T` carries (n, k),
/// `Q{p}` carries (0, p) and `H{p}` carries (p, 0).
#[derive(Clone, Debug)]
pub struct MatrixRealization {
    pub family: Family,
}

impl Realization for MatrixRealization {
    type Op = CMatrix;

    fn q(&self) -> Phase {
        self.family.algebra_q().unwrap_or(self.family.base_q())
    }

    fn size(&self) -> usize {
        self.family.size()
    }

    fn lookup(&self, name: &str, args: &[Rational64]) -> Result<(CMatrix, Option<Meta>)> {
        let size = self.size();
        let q = self.family.base_q();
        if let Some(m) = weyl_word(name, args, size, q)? {
            let p = int_arg(name, args, 0)?;
            let meta = match name {
                "Q" => Some(Meta::new(0, p)),
                "H" => Some(Meta::new(p, 0)),
                _ => None,
            };
            return Ok((m.to_cmatrix(), meta));
        }
        if name == "T" {
            arity(name, args, 2)?;
            let (n, k) = (int_arg(name, args, 0)?, int_arg(name, args, 1)?);
            let t = make_t_substitution(n, k, size, q)?;
            return Ok((t.mat, Some(Meta::new(n, k))));
        }
        let Some((base, sign)) = sign_suffix(name) else {
            return unknown(name);
        };
        let op = match base {
            "L" | "L'" => {
                arity(name, args, 1)?;
                let n = int_arg(name, args, 0)?;
                if base == "L" {
                    self.family.gen(n, sign)?
                } else {
                    self.family.primed(n, sign)?
                }
            }
            "S0" => {
                arity(name, args, 0)?;
                make_s0(sign, &self.family.gen(0, sign)?)
            }
            _ => return unknown(name),
        };
        let meta = Meta {
            mode: op.mode,
            weight: op.weight,
        };
        Ok((op.mat, Some(meta)))
    }

    cmatrix_ops!();
}

/// Weyl matrices and the matrix images of the magnetic translations.
///
/// Names: `X{p}`, `Y{p}`, `Xt{p}`, `H{p}`, `Q{p}`, `Tx{}`, `Ty{}`, `Txd{}`, `Tyd{}`.
/// None of them carries star metadata.
#[derive(Clone, Debug)]
pub struct WeylRealization {
    pub size: usize,
    pub q: Phase,
}

impl Realization for WeylRealization {
    type Op = CMatrix;

    fn q(&self) -> Phase {
        self.q
    }

    fn size(&self) -> usize {
        self.size
    }

    fn constant(&self, name: &str) -> Option<Rational64> {
        (name == "N").then(|| Rational64::from_integer(self.size as i64))
    }

    fn lookup(&self, name: &str, args: &[Rational64]) -> Result<(CMatrix, Option<Meta>)> {
        if let Some(m) = weyl_word(name, args, self.size, self.q)? {
            return Ok((m.to_cmatrix(), None));
        }
        let d = DmtMatrices::new(self.size, self.q)?;
        let m = match name {
            "Tx" => d.tx,
            "Ty" => d.ty,
            "Txd" => d.tx_dag,
            "Tyd" => d.ty_dag,
            _ => return unknown(name),
        };
        arity(name, args, 0)?;
        Ok((m.to_cmatrix(), None))
    }

    cmatrix_ops!();
}

/// Operators on the Laurent window.
///
/// Names: `L±{n}` (n, ±2), `T{n,k}` and `tau{n,k}` (n, k), `S0{k}` = q^{-2k z∂}
/// (0, 2k), `Dq{}`, `Dq2{}`, `a{}`, `ad{}`, `qN{}` = q^{-N̂}, `Losc{n}`.
/// The constant `D2` is 2Δ.
#[derive(Clone, Debug)]
pub struct LaurentRealization {
    pub laurent: Laurent,
}

impl Realization for LaurentRealization {
    type Op = WindowOp;

    fn q(&self) -> Phase {
        self.laurent.q
    }

    fn size(&self) -> usize {
        self.laurent.window.len()
    }

    fn constant(&self, name: &str) -> Option<Rational64> {
        (name == "D2").then(|| self.laurent.delta * 2)
    }

    fn lookup(&self, name: &str, args: &[Rational64]) -> Result<(WindowOp, Option<Meta>)> {
        let lr = &self.laurent;
        let int = |i| int_arg(name, args, i);
        match name {
            "T" | "tau" => {
                arity(name, args, 2)?;
                let (n, k) = (int(0)?, int(1)?);
                let op = if name == "T" { lr.t(n, k)? } else { lr.tau(n, k)? };
                return Ok((op, Some(Meta::new(n, k))));
            }
            "S0" => {
                arity(name, args, 1)?;
                let k = int(0)?;
                return Ok((lr.dilation(2 * k), Some(Meta::new(0, 2 * k))));
            }
            "Losc" => {
                arity(name, args, 1)?;
                let n = int(0)?;
                return Ok((lr.lhat_oscillator(n)?, Some(Meta::new(n, 2))));
            }
            "Dq" | "Dq2" | "a" | "ad" | "qN" => {
                arity(name, args, 0)?;
                let op = match name {
                    "Dq" => lr.dq()?,
                    "Dq2" => lr.dq2()?,
                    "a" => lr.a()?,
                    "ad" => lr.a_dagger(),
                    _ => lr.q_minus_number(),
                };
                return Ok((op, None));
            }
            _ => {}
        }
        match sign_suffix(name) {
            Some(("L", sign)) => {
                arity(name, args, 1)?;
                let n = int(0)?;
                Ok((lr.lhat(n, sign)?, Some(Meta::new(n, 2 * sign.eps()))))
            }
            _ => unknown(name),
        }
    }

    fn identity(&self) -> WindowOp {
        WindowOp::identity(self.laurent.q.ring())
    }

    fn add(&self, a: &WindowOp, b: &WindowOp) -> Result<WindowOp> {
        a.add(b)
    }

    fn mul(&self, a: &WindowOp, b: &WindowOp) -> Result<WindowOp> {
        a.compose(b)
    }

    fn scale(&self, a: &WindowOp, c: Complex64) -> WindowOp {
        a.scale(c)
    }

    fn residual(&self, a: &WindowOp, b: &WindowOp) -> Result<f64> {
        window_residual(a, b, self.laurent.window)
    }
}

/// Cleared U_q(sl₂) generators: `E+{}`, `E-{}`, `K{p}`, `Hm{}` (the Hamiltonian).
#[derive(Clone, Debug)]
pub struct Uqsl2Realization {
    pub gens: Uqsl2,
}

impl Realization for Uqsl2Realization {
    type Op = CMatrix;

    fn q(&self) -> Phase {
        self.gens.param
    }

    fn size(&self) -> usize {
        self.gens.k.dim()
    }

    fn lookup(&self, name: &str, args: &[Rational64]) -> Result<(CMatrix, Option<Meta>)> {
        let g = &self.gens;
        let m = match name {
            "E+" => g.e_plus.clone(),
            "E-" => g.e_minus.clone(),
            "Hm" => g.hamiltonian.clone(),
            "K" => {
                arity(name, args, 1)?;
                let p = int_arg(name, args, 0)?;
                let base = if p >= 0 { &g.k } else { &g.k_inv };
                return Ok((base.pow(p.unsigned_abs() as u32), None));
            }
            _ => return unknown(name),
        };
        arity(name, args, 0)?;
        Ok((m, None))
    }

    cmatrix_ops!();
}
