//! (1,0) vector fields Σ Vⁱ ∂/∂zᵢ with polynomial coefficients.

use crate::coeff::Coeff;
use crate::scalar::{Scalar, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField10 {
    c: Vec<Scalar>,
}

impl VectorField10 {
    pub fn new(c: Vec<Scalar>) -> Self {
        VectorField10 { c }
    }

    pub fn zero(n: usize) -> Self {
        VectorField10 { c: vec![Scalar::zero(); n] }
    }

    /// ∂/∂z_{i+1}
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = VectorField10::zero(n);
        v.c[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }

    /// V(f) = Σ Vⁱ ∂f/∂zᵢ.
    pub fn apply(&self, f: &Scalar) -> Scalar {
        let mut r = Scalar::zero();
        for (i, vi) in self.c.iter().enumerate() {
            if !vi.is_zero() {
                r = r.add(&vi.mul(&f.diff(Var::Z(i))));
            }
        }
        r
    }

    /// [V,W]ʲ = V(Wʲ) − W(Vʲ).
    pub fn bracket(&self, w: &VectorField10) -> VectorField10 {
        VectorField10 { c: (0..self.c.len()).map(|j| self.apply(&w.c[j]).sub(&w.apply(&self.c[j]))).collect() }
    }

    pub fn add(&self, o: &VectorField10) -> VectorField10 {
        VectorField10 { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &VectorField10) -> VectorField10 {
        VectorField10 { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> VectorField10 {
        VectorField10 { c: self.c.iter().map(Scalar::neg).collect() }
    }

    pub fn mul_scalar(&self, f: &Scalar) -> VectorField10 {
        VectorField10 { c: self.c.iter().map(|a| a.mul(f)).collect() }
    }

    pub fn scale(&self, k: &Coeff) -> VectorField10 {
        VectorField10 { c: self.c.iter().map(|a| a.scale(k)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_coordinate_fields() {
        let e1 = VectorField10::coordinate(2, 0);
        let v = VectorField10::new(vec![Scalar::z(0), Scalar::zero()]);
        // [∂1, z1 ∂1] = ∂1
        assert_eq!(e1.bracket(&v), e1);
        assert!(e1.bracket(&e1).is_zero());
    }
}
