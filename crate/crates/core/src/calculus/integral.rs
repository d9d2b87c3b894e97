//! Formal integrals over a Cauchy surface and its boundary.  The only
//! structure needed is the pair (bulk, boundary) with the Stokes moves
//! ∫_Σ d(x) = ∫_∂Σ x and ∫_∂Σ d(x) = 0; equality folds the boundary back
//! into the bulk through d, which builds both moves in.

use super::deriv::{exterior_d, variational_d, CalcError};
use crate::expr::{equals, normalize, Expr, Subst};
use crate::theories::Theory;

/// ∫_Σ bulk + ∫_∂Σ bdry.
#[derive(Debug, Clone, Default)]
pub struct IntExpr {
    pub bulk: Expr,
    pub bdry: Expr,
}

impl IntExpr {
    pub fn zero() -> Self {
        IntExpr::default()
    }

    pub fn bulk(e: Expr) -> Self {
        IntExpr { bulk: e, bdry: Expr::zero() }
    }

    pub fn boundary(e: Expr) -> Self {
        IntExpr { bulk: Expr::zero(), bdry: e }
    }

    pub fn add(&self, other: &IntExpr) -> IntExpr {
        IntExpr { bulk: self.bulk.add(&other.bulk), bdry: self.bdry.add(&other.bdry) }
    }

    pub fn sub(&self, other: &IntExpr) -> IntExpr {
        IntExpr { bulk: self.bulk.sub(&other.bulk), bdry: self.bdry.sub(&other.bdry) }
    }

    pub fn neg(&self) -> IntExpr {
        IntExpr { bulk: self.bulk.neg(), bdry: self.bdry.neg() }
    }

    pub fn normalize(&self, th: &Theory) -> IntExpr {
        IntExpr {
            bulk: normalize(&self.bulk, &th.sy),
            bdry: normalize(&self.bdry, &th.sy),
        }
    }

    /// Variational derivative acts componentwise.
    pub fn variational_d(&self, th: &Theory) -> Result<IntExpr, CalcError> {
        Ok(IntExpr {
            bulk: variational_d(&self.bulk, th)?,
            bdry: variational_d(&self.bdry, th)?,
        })
    }

    /// Fold into a single Σ-integrand: bulk + d(bdry).  ∂∂ = 0 comes for
    /// free (d of a d-exact boundary term dies).
    pub fn folded(&self, th: &Theory) -> Result<Expr, CalcError> {
        Ok(normalize(&self.bulk.add(&exterior_d(&self.bdry, th)?), &th.sy))
    }

    /// Mathematical equality modulo the Stokes moves.
    pub fn equals(&self, other: &IntExpr, th: &Theory) -> Result<bool, CalcError> {
        Ok(equals(&self.folded(th)?, &other.folded(th)?, &th.sy))
    }

    pub fn is_zero(&self, th: &Theory) -> Result<bool, CalcError> {
        Ok(self.folded(th)?.terms.is_empty())
    }

    pub fn substitute(&self, sub: &Subst, th: &Theory) -> IntExpr {
        IntExpr {
            bulk: crate::expr::substitute(&self.bulk, sub, &th.sy),
            bdry: crate::expr::substitute(&self.bdry, sub, &th.sy),
        }
    }
}
