//! JSON schema for operators, used by CLI fixtures and golden files.
//!
//! Operators serialize as `{"layout":[d1,...],"re":[[...]],"im":[[...]]}`
//! with row-major entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QsteinError;
use crate::Result;

use super::hermitian::HermitianOp;
use super::layout::DimLayout;
use super::state::{BinaryTest, DensityOp};

/// Wire format for a complex operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub layout: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn from_hermitian(op: &HermitianOp) -> Self {
        let d = op.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        for r in 0..d {
            for c in 0..d {
                re[r][c] = op.matrix()[(r, c)].re;
                im[r][c] = op.matrix()[(r, c)].im;
            }
        }
        Self {
            layout: op.layout().factors().to_vec(),
            re,
            im,
        }
    }

    pub fn to_hermitian(&self) -> Result<HermitianOp> {
        let layout = DimLayout::new(self.layout.clone())?;
        let d = layout.total_dim();
        if self.re.len() != d || self.im.len() != d {
            return Err(QsteinError::ShapeMismatch(format!(
                "serialized matrix rows {} vs layout dim {}",
                self.re.len(),
                d
            )));
        }
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for r in 0..d {
            if self.re[r].len() != d || self.im[r].len() != d {
                return Err(QsteinError::ShapeMismatch(format!(
                    "serialized matrix row {r} has wrong length"
                )));
            }
            for c in 0..d {
                m[(r, c)] = Complex64::new(self.re[r][c], self.im[r][c]);
            }
        }
        HermitianOp::new(m, layout)
    }

    pub fn to_density(&self) -> Result<DensityOp> {
        DensityOp::new(self.to_hermitian()?)
    }

    pub fn to_test(&self) -> Result<BinaryTest> {
        BinaryTest::new(self.to_hermitian()?)
    }
}

impl HermitianOp {
    pub fn to_json(&self) -> OperatorJson {
        OperatorJson::from_hermitian(self)
    }
}

impl DensityOp {
    pub fn to_json(&self) -> OperatorJson {
        OperatorJson::from_hermitian(self.op())
    }

    pub fn from_json(j: &OperatorJson) -> Result<Self> {
        j.to_density()
    }
}
