//! Wire formats: JSON encodings for matrices, states, channels,
//! measurement trees, magmas, rational geometry, and pairings, plus the
//! composition-request envelope the CLI dispatches on.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::channels::{FormalChannelSum, TreeKrausChannel};
use crate::cmatrix::CMatrix;
use crate::density::DensityMatrix;
use crate::loops::FiniteMagma;
use crate::measurement::MeasurementTree;
use crate::prob::ProbVector;
use crate::squares::{ColoredSquare, LittleSquareTuple, Rat, RationalRect};
use crate::symplectic::{self, AlmostSymplectic};
use crate::trees::PlanarTree;
use crate::{qstate, Error, Result};

/// Complex matrix as separate real and imaginary row-major grids.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDto {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixDto {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.rows();
        MatrixDto {
            dim: n,
            re: (0..n)
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).re).collect())
                .collect(),
            im: (0..n)
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).im).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let shape_ok = |g: &Vec<Vec<f64>>| g.len() == n && g.iter().all(|row| row.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Json(format!("matrix grids are not {n}x{n}")));
        }
        let mut m = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, Complex64::new(self.re[r][c], self.im[r][c]));
            }
        }
        Ok(m)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?)
    }
}

/// Channel node: the edge operator into this vertex sits on the vertex
/// itself; the root instead carries the ambient dimension (needed when
/// the tree has no edges at all).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelNodeDto {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ChannelNodeDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub op: Option<MatrixDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl ChannelNodeDto {
    pub fn from_channel(c: &TreeKrausChannel) -> Self {
        fn build(c: &TreeKrausChannel, tree: &PlanarTree, pos: &mut usize) -> ChannelNodeDto {
            let id = *pos;
            *pos += 1;
            let op = c.edge_op(id).map(MatrixDto::from_matrix);
            let children = tree.children().iter().map(|ch| build(c, ch, pos)).collect();
            ChannelNodeDto {
                children,
                op,
                dim: None,
            }
        }
        let mut pos = 0usize;
        let mut root = build(c, c.tree(), &mut pos);
        root.dim = Some(c.dim());
        root
    }

    pub fn to_channel(&self) -> Result<TreeKrausChannel> {
        fn build(node: &ChannelNodeDto, ops: &mut Vec<Option<CMatrix>>) -> Result<PlanarTree> {
            ops.push(match &node.op {
                Some(m) => Some(m.to_matrix()?),
                None => None,
            });
            let mut children = Vec::with_capacity(node.children.len());
            for c in &node.children {
                children.push(build(c, ops)?);
            }
            Ok(if children.is_empty() {
                PlanarTree::leaf()
            } else {
                PlanarTree::node(children)
            })
        }
        let mut ops = Vec::new();
        let tree = build(self, &mut ops)?;
        let dim = match (self.dim, ops.iter().flatten().next()) {
            (Some(d), _) => d,
            (None, Some(m)) => m.rows(),
            (None, None) => return Err(Error::Json("channel without dim or edges".into())),
        };
        TreeKrausChannel::new(dim, tree, ops)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormalSumDto {
    pub terms: Vec<FormalTermDto>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormalTermDto {
    pub w: f64,
    pub channel: ChannelNodeDto,
}

impl FormalSumDto {
    pub fn from_sum(s: &FormalChannelSum) -> Self {
        FormalSumDto {
            terms: s
                .terms
                .iter()
                .map(|(w, c)| FormalTermDto {
                    w: *w,
                    channel: ChannelNodeDto::from_channel(c),
                })
                .collect(),
        }
    }

    pub fn to_sum(&self) -> Result<FormalChannelSum> {
        Ok(FormalChannelSum {
            terms: self
                .terms
                .iter()
                .map(|t| Ok((t.w, t.channel.to_channel()?)))
                .collect::<Result<_>>()?,
        })
    }
}

/// Measurement-tree node: leaves carry `block: [start, len]` or an
/// explicit projector; internal projectors default to the sum of their
/// children.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementNodeDto {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<MeasurementNodeDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projector: Option<MatrixDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<(usize, usize)>,
}

impl MeasurementNodeDto {
    pub fn to_measurement_tree(&self, dim: usize) -> Result<MeasurementTree> {
        fn shape(node: &MeasurementNodeDto) -> PlanarTree {
            if node.children.is_empty() {
                PlanarTree::leaf()
            } else {
                PlanarTree::node(node.children.iter().map(shape).collect())
            }
        }
        fn fill(
            node: &MeasurementNodeDto,
            dim: usize,
            out: &mut Vec<Option<CMatrix>>,
        ) -> Result<usize> {
            let id = out.len();
            out.push(None);
            let explicit = match (&node.projector, &node.block) {
                (Some(m), _) => Some(m.to_matrix()?),
                (None, Some(b)) => {
                    let (start, len) = *b;
                    if start + len > dim {
                        return Err(Error::Json(format!(
                            "block [{start},{len}] exceeds dimension {dim}"
                        )));
                    }
                    let mut p = CMatrix::zeros(dim, dim);
                    for t in 0..len {
                        p.set(start + t, start + t, Complex64::new(1.0, 0.0));
                    }
                    Some(p)
                }
                (None, None) => None,
            };
            let mut kid_ids = Vec::new();
            for c in &node.children {
                kid_ids.push(fill(c, dim, out)?);
            }
            let proj = match explicit {
                Some(p) => p,
                None if node.children.is_empty() => {
                    return Err(Error::Json("leaf without projector or block".into()));
                }
                None => {
                    let mut sum = CMatrix::zeros(dim, dim);
                    for &k in &kid_ids {
                        sum = sum.add(out[k].as_ref().expect("children filled"));
                    }
                    sum
                }
            };
            out[id] = Some(proj);
            Ok(id)
        }
        let tree = shape(self);
        let mut out = Vec::new();
        fill(self, dim, &mut out)?;
        let projectors: Vec<CMatrix> = out.into_iter().map(|p| p.expect("filled")).collect();
        MeasurementTree::from_projectors(tree, projectors)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MagmaDto {
    pub size: usize,
    pub table: Vec<Vec<usize>>,
}

impl MagmaDto {
    pub fn from_magma(m: &FiniteMagma) -> Self {
        MagmaDto {
            size: m.size(),
            table: m.table().to_vec(),
        }
    }

    pub fn to_magma(&self) -> Result<FiniteMagma> {
        if self.table.len() != self.size {
            return Err(Error::Json("table size disagrees with `size`".into()));
        }
        FiniteMagma::new(self.table.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatDto {
    pub n: i64,
    pub d: i64,
}

impl RatDto {
    pub fn from_rat(r: &Rat) -> Result<Self> {
        let n = r
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Json("numerator overflow".into()))?;
        let d = r
            .denom()
            .to_i64()
            .ok_or_else(|| Error::Json("denominator overflow".into()))?;
        Ok(RatDto { n, d })
    }

    pub fn to_rat(&self) -> Result<Rat> {
        if self.d == 0 {
            return Err(Error::Json("zero denominator".into()));
        }
        Ok(BigRational::new(BigInt::from(self.n), BigInt::from(self.d)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RectDto {
    pub x: [RatDto; 2],
    pub y: [RatDto; 2],
}

impl RectDto {
    pub fn from_rect(r: &RationalRect) -> Result<Self> {
        Ok(RectDto {
            x: [RatDto::from_rat(&r.x().0)?, RatDto::from_rat(&r.x().1)?],
            y: [RatDto::from_rat(&r.y().0)?, RatDto::from_rat(&r.y().1)?],
        })
    }

    pub fn to_rect(&self) -> Result<RationalRect> {
        RationalRect::new(
            (self.x[0].to_rat()?, self.x[1].to_rat()?),
            (self.y[0].to_rat()?, self.y[1].to_rat()?),
        )
    }
}

pub fn tuple_to_dto(t: &LittleSquareTuple) -> Result<Vec<RectDto>> {
    t.rects().iter().map(RectDto::from_rect).collect()
}

pub fn tuple_from_dto(rects: &[RectDto]) -> Result<LittleSquareTuple> {
    LittleSquareTuple::new(rects.iter().map(RectDto::to_rect).collect::<Result<_>>()?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColoredDto {
    pub p: usize,
    pub regions: Vec<Vec<RectDto>>,
}

impl ColoredDto {
    pub fn from_colored(c: &ColoredSquare) -> Result<Self> {
        Ok(ColoredDto {
            p: c.p(),
            regions: c
                .regions()
                .iter()
                .map(|rs| rs.iter().map(RectDto::from_rect).collect())
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_colored(&self) -> Result<ColoredSquare> {
        ColoredSquare::new(
            self.p,
            self.regions
                .iter()
                .map(|rs| rs.iter().map(RectDto::to_rect).collect())
                .collect::<Result<_>>()?,
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaDto {
    pub p: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub table: Vec<Vec<u32>>,
}

impl OmegaDto {
    pub fn from_omega(w: &AlmostSymplectic) -> Self {
        OmegaDto {
            p: w.p(),
            n: w.exponent(),
            table: w.table().to_vec(),
        }
    }

    /// Shape/range validation only; degeneracy is the caller's concern.
    pub fn to_omega(&self) -> Result<AlmostSymplectic> {
        AlmostSymplectic::new_unchecked(self.p, self.n, self.table.clone())
    }
}

/// Composition request: `op` selects the operation, the remaining fields
/// are operation specific.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op")]
pub enum ComposeEnvelope {
    #[serde(rename = "gammaP")]
    GammaP {
        root: MatrixDto,
        parts: Vec<MatrixDto>,
    },
    #[serde(rename = "gammaLambda")]
    GammaLambda {
        root: MatrixDto,
        parts: Vec<MatrixDto>,
    },
    #[serde(rename = "insertP")]
    InsertP {
        root: MatrixDto,
        parts: Vec<MatrixDto>,
        i: usize,
    },
    #[serde(rename = "insertLambda")]
    InsertLambda {
        root: MatrixDto,
        parts: Vec<MatrixDto>,
        i: usize,
    },
    #[serde(rename = "composeSquares")]
    ComposeSquares {
        square: Vec<RectDto>,
        i: usize,
        other: Vec<RectDto>,
    },
    #[serde(rename = "composeColored")]
    ComposeColored {
        colored: ColoredDto,
        i: usize,
        other: ColoredDto,
    },
    #[serde(rename = "algebraAction")]
    AlgebraAction {
        square: ColoredDto,
        omegas: Vec<OmegaDto>,
    },
}

impl ComposeEnvelope {
    pub fn op_name(&self) -> &'static str {
        match self {
            ComposeEnvelope::GammaP { .. } => "gammaP",
            ComposeEnvelope::GammaLambda { .. } => "gammaLambda",
            ComposeEnvelope::InsertP { .. } => "insertP",
            ComposeEnvelope::InsertLambda { .. } => "insertLambda",
            ComposeEnvelope::ComposeSquares { .. } => "composeSquares",
            ComposeEnvelope::ComposeColored { .. } => "composeColored",
            ComposeEnvelope::AlgebraAction { .. } => "algebraAction",
        }
    }

    /// Runs the requested composition and returns the result payload.
    pub fn dispatch(&self) -> Result<serde_json::Value> {
        fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
            serde_json::to_value(v).map_err(|e| Error::Json(e.to_string()))
        }
        match self {
            ComposeEnvelope::GammaP { root, parts } => {
                let rho = root.to_density()?;
                let parts = parts
                    .iter()
                    .map(MatrixDto::to_density)
                    .collect::<Result<Vec<_>>>()?;
                let out = qstate::gamma_p(&rho, &parts)?;
                to_value(&MatrixDto::from_matrix(out.matrix()))
            }
            ComposeEnvelope::GammaLambda { root, parts } => {
                let rho = root.to_density()?;
                let parts = parts
                    .iter()
                    .map(MatrixDto::to_density)
                    .collect::<Result<Vec<_>>>()?;
                let out = qstate::gamma_lambda(&rho, &parts)?;
                to_value(&MatrixDto::from_matrix(out.matrix()))
            }
            ComposeEnvelope::InsertP { root, parts, i } => {
                let rho = root.to_density()?;
                let part = parts
                    .first()
                    .ok_or_else(|| Error::Json("insert needs one part".into()))?
                    .to_density()?;
                let out = qstate::insert_p(&rho, *i, &part)?;
                to_value(&MatrixDto::from_matrix(out.matrix()))
            }
            ComposeEnvelope::InsertLambda { root, parts, i } => {
                let rho = root.to_density()?;
                let part = parts
                    .first()
                    .ok_or_else(|| Error::Json("insert needs one part".into()))?
                    .to_density()?;
                let out = qstate::insert_lambda(&rho, *i, &part)?;
                to_value(&MatrixDto::from_matrix(out.matrix()))
            }
            ComposeEnvelope::ComposeSquares { square, i, other } => {
                let c = tuple_from_dto(square)?;
                let d = tuple_from_dto(other)?;
                let out = c.compose(*i, &d)?;
                to_value(&tuple_to_dto(&out)?)
            }
            ComposeEnvelope::ComposeColored { colored, i, other } => {
                let c = colored.to_colored()?;
                let d = other.to_colored()?;
                let out = c.compose(*i, &d)?;
                to_value(&ColoredDto::from_colored(&out)?)
            }
            ComposeEnvelope::AlgebraAction { square, omegas } => {
                let c = square.to_colored()?;
                let parts = omegas
                    .iter()
                    .map(OmegaDto::to_omega)
                    .collect::<Result<Vec<_>>>()?;
                let out = symplectic::algebra_action(&c, &parts)?;
                to_value(&OmegaDto::from_omega(&out))
            }
        }
    }
}

pub fn prob_to_json(p: &ProbVector) -> serde_json::Value {
    serde_json::json!(p.as_slice())
}
