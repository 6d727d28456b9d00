//! Formal sequences made constructive: sequences of products of spheres and
//! their wedges, realization of a formal sequence as a wedge of sphere
//! products, and the cohomology ring of such a wedge.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    self, exterior_algebra, truncated_polynomial_algebra, AlgebraError, GradedAlgebra,
};
use crate::field::Field;
use crate::seq::{optimal_sequence, Sequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("sequence {0} is not formal")]
    NotFormal(String),
    #[error("sequence has unknown entries above degree {0}")]
    HasUnknowns(u64),
    #[error("sequence {0} has no positive-length prefix to realize")]
    NothingToRealize(String),
    #[error("sphere dimensions must be at least 2 (got {0})")]
    BadDimension(u64),
    #[error("a product of spheres needs at least one factor")]
    EmptyProduct,
    #[error("a wedge needs at least one summand")]
    EmptyWedge,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A product of spheres, recorded by the multiset of factor dimensions,
/// kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereProduct {
    dims: Vec<u64>,
}

impl SphereProduct {
    pub fn new(mut dims: Vec<u64>) -> Result<SphereProduct, RealizeError> {
        if dims.is_empty() {
            return Err(RealizeError::EmptyProduct);
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(RealizeError::BadDimension(bad));
        }
        dims.sort_unstable();
        Ok(SphereProduct { dims })
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// sigma(k) = sum of the k smallest factor dimensions, infinite past the
    /// number of factors.
    pub fn sequence(&self) -> Sequence {
        let mut finite = vec![0u64];
        let mut acc = 0;
        for &d in &self.dims {
            acc += d;
            finite.push(acc);
        }
        Sequence::from_finite(finite).expect("sphere dimensions are positive")
    }

    /// Cohomology ring: the tensor of one two-class algebra per factor.
    pub fn cohomology(&self, field: Field) -> Result<GradedAlgebra, RealizeError> {
        let mut acc = exterior_algebra(field, &[])?;
        for &d in &self.dims {
            let sphere = if d % 2 == 1 && field.characteristic() != 2 {
                exterior_algebra(field, &[d])?
            } else {
                // an even sphere (or characteristic 2): one generator squaring to zero
                truncated_polynomial_algebra(field, &[(d, 2)])?
            };
            acc = algebra::tensor(&acc, &sphere)?;
        }
        Ok(acc)
    }
}

/// A formal wedge of products of spheres.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeOfSphereProducts {
    summands: Vec<SphereProduct>,
}

impl WedgeOfSphereProducts {
    pub fn new(summands: Vec<SphereProduct>) -> Result<WedgeOfSphereProducts, RealizeError> {
        if summands.is_empty() {
            return Err(RealizeError::EmptyWedge);
        }
        Ok(WedgeOfSphereProducts { summands })
    }

    pub fn summands(&self) -> &[SphereProduct] {
        &self.summands
    }

    /// Pointwise minimum of the summand sequences.
    pub fn sequence(&self) -> Sequence {
        let mut it = self.summands.iter().map(SphereProduct::sequence);
        let first = it.next().expect("wedge is nonempty");
        it.fold(first, |acc, s| acc.min(&s))
    }

    /// Direct sum of the summand rings identified at the unit; positive
    /// products across summands vanish.
    pub fn cohomology(&self, field: Field) -> Result<GradedAlgebra, RealizeError> {
        let parts: Result<Vec<GradedAlgebra>, RealizeError> =
            self.summands.iter().map(|p| p.cohomology(field)).collect();
        Ok(algebra::wedge_sum(&parts?)?)
    }
}

/// Realize a formal sequence as a wedge of products of spheres, one product
/// summand per prefix length: the stage-k summand is the product with s
/// factors S^x and r factors S^(x+1), where sigma(k) = kx + r and s = k - r.
/// The wedge's sequence reproduces the input exactly.
pub fn realize_formal(sigma: &Sequence) -> Result<WedgeOfSphereProducts, RealizeError> {
    if let Some(d) = sigma.cap_note() {
        return Err(RealizeError::HasUnknowns(d));
    }
    if !sigma.is_formal() {
        return Err(RealizeError::NotFormal(sigma.to_string()));
    }
    let len = sigma.length().expect("no cap note") as usize;
    if len == 0 {
        return Err(RealizeError::NothingToRealize(sigma.to_string()));
    }
    let values = sigma.finite_values();
    let mut summands = Vec::with_capacity(len);
    for k in 1..=len {
        let n = values[k];
        let tau = optimal_sequence(k as u64, n).expect("formal values satisfy n >= 2k > 0");
        // read the factor dimensions off tau's steps
        let steps = tau.finite_values();
        let dims: Vec<u64> = (1..steps.len()).map(|i| steps[i] - steps[i - 1]).collect();
        summands.push(SphereProduct::new(dims)?);
    }
    let wedge = WedgeOfSphereProducts::new(summands)?;
    debug_assert_eq!(&wedge.sequence(), sigma);
    Ok(wedge)
}
