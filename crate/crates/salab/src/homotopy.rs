//! Radial homotopy operators: explicit primitives of closed polynomial forms.
//!
//! For an Euler field E and the weight w counting the variables and
//! differentials E scales, K = Σ_w (1/w) i_E on weight-w parts satisfies
//! dK + Kd = id away from weight 0.

use crate::coeff::Coeff;
use crate::error::{type_err, Result};
use crate::form::Form;
use crate::scalar::{Mono, Scalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// d, Euler field Σ zᵢ∂_{zᵢ} + z̄ᵢ∂_{z̄ᵢ}.
    D,
    /// ∂, Euler field Σ zᵢ∂_{zᵢ}; z̄ and dz̄ are inert.
    Del,
    /// ∂̄, Euler field Σ z̄ᵢ∂_{z̄ᵢ}; z and dz are inert.
    Delbar,
}

fn weight(dir: Direction, m: &Mono, p: usize, q: usize) -> u32 {
    match dir {
        Direction::D => m.z_degree() + m.zb_degree() + (p + q) as u32,
        Direction::Del => m.z_degree() + p as u32,
        Direction::Delbar => m.zb_degree() + q as u32,
    }
}

/// The homotopy operator K for the given direction.
pub fn homotopy(f: &Form, dir: Direction) -> Form {
    let mut scaled = Form::zero();
    for (b, m, c) in f.terms() {
        let w = weight(dir, &m, b.p(), b.q());
        if w > 0 {
            scaled.add_term(b, m, c * &Coeff::ratio(1, w as i64));
        }
    }
    let mut out = Form::zero();
    for i in 0..scaled.max_index() {
        if dir != Direction::Delbar {
            out = out.add(&scaled.contract_dz(i).mul_scalar(&Scalar::var(Var::Z(i))));
        }
        if dir != Direction::Del {
            out = out.add(&scaled.contract_dzb(i).mul_scalar(&Scalar::var(Var::Zb(i))));
        }
    }
    out
}

/// B ∈ Ω^{2,0} with dB = ρ, for a closed 3-form ρ ∈ Ω^{3,0} ⊕ Ω^{2,1}.
pub fn primitive_20(rho: &Form) -> Result<Form> {
    if !rho.sub(&rho.component(3, 0)).sub(&rho.component(2, 1)).is_zero() {
        return type_err("primitive_20 needs a 3-form of type (3,0)+(2,1)");
    }
    if !rho.d().is_zero() {
        return type_err("primitive_20 needs a closed form");
    }
    let beta = homotopy(rho, Direction::D);
    let gamma = homotopy(&beta.component(1, 1), Direction::Delbar);
    Ok(beta.component(2, 0).sub(&gamma.del()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_form;

    #[test]
    fn d_primitive_of_exact_form() {
        let b = parse_form("z1*zb2*dz1^dzb1 + zb1^2*dz2", 2).unwrap();
        let rho = b.d();
        assert_eq!(homotopy(&rho, Direction::D).d(), rho);
    }

    #[test]
    fn delbar_primitive() {
        let g = parse_form("z1*zb1^2*dz2 + zb2*dz1", 2).unwrap();
        let x = g.delbar();
        assert_eq!(homotopy(&x, Direction::Delbar).delbar(), x);
    }

    #[test]
    fn primitive_20_examples() {
        let b = parse_form("zb1*z2*dz1^dz2 + z1^2*dz1^dz2", 2).unwrap();
        let rho = b.d();
        let p = primitive_20(&rho).unwrap();
        assert!(p.has_bidegree(2, 0));
        assert_eq!(p.d(), rho);
        let h = parse_form("z1*z3*dz1^dz2^dz3", 3).unwrap();
        assert_eq!(primitive_20(&h).unwrap().d(), h);
        assert!(primitive_20(&parse_form("zb1*dz1^dz2^dz3", 3).unwrap()).is_err());
    }
}
