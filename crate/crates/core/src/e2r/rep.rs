use crate::lie::LieAlgebra;
use crate::rational::{ratio, GaussRational, Rational};
use crate::symb::{Chart, DiffOp, Expr};

use super::E2RError;

/// `ℓ1 = ∂_q`, `ℓ2 = i(∂_q + εq)`, `ℓ3 = i(q∂_q + εq²/2 + J1)`, `ℓ4 = iJ2`
/// with `q = x_{q+1}` and the parameters given as expressions on `chart`.
pub fn lambda_ops(chart: Chart, q: usize, eps: &Expr, j1: &Expr, j2: &Expr) -> Vec<DiffOp> {
    let i = GaussRational::i();
    let qv = Expr::var(chart, q);
    let dq = DiffOp::derivative(chart, q);
    let l2 = dq.plus_function(&(eps * &qv)).scale(&i);
    let l3 = dq
        .left_mul(&qv)
        .plus_function(&(&(eps * &qv.pow(2)).scale_rational(&ratio(1, 2)) + j1))
        .scale(&i);
    let l4 = DiffOp::multiplication(j2.scale(&i));
    vec![dq, l2, l3, l4]
}

/// λ-representation of the extension of e(2)⊕ℝ by `e¹∧e²` on functions of
/// one complex variable `q`.
#[derive(Clone, Debug)]
pub struct LambdaRep {
    pub j1: Rational,
    pub j2: Rational,
    pub charge: Rational,
    pub ops: Vec<DiffOp>,
}

impl LambdaRep {
    pub fn chart() -> Chart {
        Chart::flat(1)
    }

    pub fn new(j1: Rational, j2: Rational, charge: Rational) -> Result<Self, E2RError> {
        if !j1.is_integer() {
            return Err(E2RError::NonIntegerJ1(j1.to_string()));
        }
        let c = Self::chart();
        let k = |r: &Rational| Expr::constant(c, r.clone());
        let ops = lambda_ops(c, 0, &k(&charge), &k(&j1), &k(&j2));
        Ok(LambdaRep { j1, j2, charge, ops })
    }

    /// Checks `[ℓ_a, ℓ_b] = C_ab^c ℓ_c + iε F_ab` with `F = e¹∧e²`.
    pub fn verify(&self) -> Result<(), E2RError> {
        let g = LieAlgebra::e2_plus_r();
        let c = Self::chart();
        for a in 0..4 {
            for b in a + 1..4 {
                let mut r = self.ops[a]
                    .commutator(&self.ops[b])
                    .map_err(|e| E2RError::Commutator {
                        a: a + 1,
                        b: b + 1,
                        residual: e.to_string(),
                    })?;
                for (k, op) in self.ops.iter().enumerate() {
                    let coeff = g.c(a, b, k);
                    r = r.sub(&op.scale(&GaussRational::real(coeff.clone())));
                }
                if (a, b) == (0, 1) {
                    r = r.sub(&DiffOp::constant(c, GaussRational::imag(self.charge.clone())));
                }
                if !r.is_zero() {
                    return Err(E2RError::Commutator {
                        a: a + 1,
                        b: b + 1,
                        residual: r.to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn commutators_reproduce_extension() {
        let rep = LambdaRep::new(rat(1), ratio(1, 2), rat(1)).unwrap();
        rep.verify().unwrap();
        let c = LambdaRep::chart();
        assert_eq!(
            rep.ops[0].commutator(&rep.ops[1]).unwrap(),
            DiffOp::constant(c, GaussRational::i())
        );
        assert_eq!(rep.ops[0].commutator(&rep.ops[2]).unwrap(), rep.ops[1]);
        for k in 0..3 {
            assert!(rep.ops[3].commutator(&rep.ops[k]).unwrap().is_zero());
        }
    }

    #[test]
    fn half_integer_j1_rejected() {
        assert!(matches!(
            LambdaRep::new(ratio(1, 2), rat(0), rat(1)),
            Err(E2RError::NonIntegerJ1(_))
        ));
    }
}
