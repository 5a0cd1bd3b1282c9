use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Per-head projections of the model input to queries, keys and values.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadProjection {
    pub w_q: Matrix,
    pub w_k: Matrix,
    pub w_v: Matrix,
}

/// Parameters of the position-wise ReLU feed-forward layer.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedForward {
    pub w1: Matrix,
    pub b1: Vec<f64>,
    pub w2: Matrix,
    pub b2: Vec<f64>,
}

/// One attention block: heads, output projection and feed-forward layer.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionWeights {
    pub heads: Vec<HeadProjection>,
    pub w_h: Matrix,
    pub ff: FeedForward,
}

impl AttentionWeights {
    /// Checks that every shape in the block chains for inputs of width
    /// `d_model`.
    pub fn validate(&self, d_model: usize) -> Result<()> {
        let mut concat = 0;
        for (i, h) in self.heads.iter().enumerate() {
            if h.w_q.rows() != d_model || h.w_k.rows() != d_model || h.w_v.rows() != d_model {
                return Err(Error::Dimension(format!(
                    "head {i} projections must have {d_model} rows"
                )));
            }
            if h.w_q.cols() != h.w_k.cols() {
                return Err(Error::Dimension(format!(
                    "head {i}: query and key widths differ"
                )));
            }
            concat += h.w_v.cols();
        }
        if self.w_h.rows() != concat {
            return Err(Error::Dimension(format!(
                "output projection has {} rows, heads produce {concat}",
                self.w_h.rows()
            )));
        }
        let ff = &self.ff;
        if ff.w1.rows() != self.w_h.cols()
            || ff.b1.len() != ff.w1.cols()
            || ff.w2.rows() != ff.w1.cols()
            || ff.b2.len() != ff.w2.cols()
        {
            return Err(Error::Dimension("feed-forward shapes do not chain".into()));
        }
        Ok(())
    }

    /// Multi-head attention followed by the feed-forward layer.
    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        self.validate(x.cols())?;
        let z = multi_head_attention(x, &self.heads, &self.w_h)?;
        position_wise_ff(&z, &self.ff)
    }
}

/// Row-wise softmax of `q kᵀ / sqrt(d_k)`.
pub fn attention_weights(q: &Matrix, k: &Matrix) -> Result<Matrix> {
    if q.cols() != k.cols() {
        return Err(Error::Dimension(format!(
            "query width {} differs from key width {}",
            q.cols(),
            k.cols()
        )));
    }
    let scale = 1.0 / (q.cols() as f64).sqrt();
    let mut logits = q.matmul(&k.transpose())?;
    for r in 0..logits.rows() {
        let row = logits.row_mut(r);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = ((*v - max) * scale).exp();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    Ok(logits)
}

pub fn self_attention(q: &Matrix, k: &Matrix, v: &Matrix) -> Result<Matrix> {
    if k.rows() != v.rows() {
        return Err(Error::Dimension(format!(
            "{} keys but {} values",
            k.rows(),
            v.rows()
        )));
    }
    if k.rows() == 0 {
        return Err(Error::Dimension("attention needs at least one key".into()));
    }
    attention_weights(q, k)?.matmul(v)
}

/// `[Z_1, ..., Z_h] W_h` with `Z_i = self_attention(x W_q_i, x W_k_i, x W_v_i)`.
pub fn multi_head_attention(x: &Matrix, heads: &[HeadProjection], w_h: &Matrix) -> Result<Matrix> {
    if heads.is_empty() {
        return Err(Error::Dimension(
            "multi-head attention needs at least one head".into(),
        ));
    }
    let zs = heads
        .iter()
        .map(|h| {
            let q = x.matmul(&h.w_q)?;
            let k = x.matmul(&h.w_k)?;
            let v = x.matmul(&h.w_v)?;
            self_attention(&q, &k, &v)
        })
        .collect::<Result<Vec<_>>>()?;
    let concat = Matrix::hconcat(&zs)?;
    if concat.cols() != w_h.rows() {
        return Err(Error::Dimension(format!(
            "output projection has {} rows, heads produce {}",
            w_h.rows(),
            concat.cols()
        )));
    }
    concat.matmul(w_h)
}

fn add_bias(m: &mut Matrix, b: &[f64]) -> Result<()> {
    if b.len() != m.cols() {
        return Err(Error::Dimension(format!(
            "bias of length {} for width {}",
            b.len(),
            m.cols()
        )));
    }
    for r in 0..m.rows() {
        for (v, bi) in m.row_mut(r).iter_mut().zip(b) {
            *v += bi;
        }
    }
    Ok(())
}

/// `max(0, z W1 + b1) W2 + b2`, applied to each row independently.
pub fn position_wise_ff(z: &Matrix, ff: &FeedForward) -> Result<Matrix> {
    let mut hidden = z.matmul(&ff.w1)?;
    add_bias(&mut hidden, &ff.b1)?;
    let hidden = hidden.map(|v| v.max(0.0));
    let mut out = hidden.matmul(&ff.w2)?;
    add_bias(&mut out, &ff.b2)?;
    Ok(out)
}

/// Sinusoidal encoding: `(n, 2i) = sin(n / 10000^(2i/d))`, `(n, 2i+1)` the
/// cosine of the same angle.
pub fn positional_encoding(max_pos: usize, d_model: usize) -> Result<Matrix> {
    if d_model == 0 || !d_model.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "d_model must be even and positive, got {d_model}"
        )));
    }
    if max_pos == 0 {
        return Err(Error::invalid("max_pos must be at least 1"));
    }
    let mut data = Vec::with_capacity(max_pos * d_model);
    for n in 0..max_pos {
        for i in 0..d_model / 2 {
            let angle = n as f64 / 10000f64.powf((2 * i) as f64 / d_model as f64);
            data.push(angle.sin());
            data.push(angle.cos());
        }
    }
    Matrix::new(max_pos, d_model, data)
}
