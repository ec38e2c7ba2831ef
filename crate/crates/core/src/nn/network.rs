use serde::{Deserialize, Serialize};

use super::grid::{dyadic_exponent, from_pair, to_pair, WeightGrid, MAX_EXPONENT};
use crate::{Error, Result};

pub const NETWORK_FORMAT_VERSION: u32 = 1;

/// Row-sparse matrix. Zero entries are never stored; each row is kept
/// sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, f64)>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i].push((i, 1.0));
        }
        m
    }

    /// Row-major dense data.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "dense data has wrong length");
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = data[r * cols + c];
                if v != 0.0 {
                    m.entries[r].push((c, v));
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_dense(rows.len(), cols, &flat)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, f64)] {
        &self.entries[r]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r].iter().find(|(j, _)| *j == c).map_or(0.0, |e| e.1)
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) if v == 0.0 => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = v,
            Err(_) if v == 0.0 => {}
            Err(i) => row.insert(i, (c, v)),
        }
    }

    /// Iterator over `(row, col, value)` of stored entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            out[r][c] = v;
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|row| row.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc = vec![0.0; other.cols];
            let mut touched = Vec::new();
            for &(k, a) in &self.entries[r] {
                for &(c, b) in &other.entries[k] {
                    if acc[c] == 0.0 {
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            out.entries[r] = touched.into_iter().filter(|&c| acc[c] != 0.0).map(|c| (c, acc[c])).collect();
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        let mut out = self.clone();
        for row in &mut out.entries {
            for e in row.iter_mut() {
                e.1 *= s;
            }
        }
        out
    }

    /// Rows of `a` followed by rows of `b`.
    pub fn vstack(a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols, b.cols, "column counts differ");
        let mut entries = a.entries.clone();
        entries.extend(b.entries.iter().cloned());
        Matrix { rows: a.rows + b.rows, cols: a.cols, entries }
    }

    /// Columns of `a` followed by columns of `b`.
    pub fn hstack(a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.rows, b.rows, "row counts differ");
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(ra, rb)| {
                let mut row = ra.clone();
                row.extend(rb.iter().map(|&(c, v)| (c + a.cols, v)));
                row
            })
            .collect();
        Matrix { rows: a.rows, cols: a.cols + b.cols, entries }
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        let top = Matrix::hstack(a, &Matrix::zeros(a.rows, b.cols));
        let bottom = Matrix::hstack(&Matrix::zeros(b.rows, a.cols), b);
        Matrix::vstack(&top, &bottom)
    }
}

/// One hidden layer: `y ↦ σ(W y − b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub weights: Matrix,
    pub shifts: Vec<f64>,
}

impl Layer {
    pub fn new(weights: Matrix, shifts: Vec<f64>) -> Self {
        assert_eq!(weights.rows(), shifts.len(), "shift length differs from layer width");
        Self { weights, shifts }
    }

    pub fn unshifted(weights: Matrix) -> Self {
        let n = weights.rows();
        Self::new(weights, vec![0.0; n])
    }
}

/// `x ↦ W_{L+1} σ_{b_L} W_L ⋯ σ_{b_1} W_1 x` with `σ_b(y) = max(y − b, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
    output: Matrix,
    grid: WeightGrid,
}

fn check_entry(v: f64) -> Result<u32> {
    match dyadic_exponent(v) {
        Some(c) if v.abs() <= 1.0 => Ok(c),
        _ => Err(Error::OffGrid { value: v, c: MAX_EXPONENT }),
    }
}

impl Network {
    /// Validates shapes and entries. The declared grid is the smallest one
    /// containing every entry.
    pub fn new(layers: Vec<Layer>, output: Matrix) -> Result<Self> {
        let mut c = 0;
        let mut cols = layers.first().map_or(output.cols(), |l| l.weights.cols());
        for layer in &layers {
            if layer.weights.cols() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: layer.weights.cols() });
            }
            for (_, _, v) in layer.weights.iter() {
                c = c.max(check_entry(v)?);
            }
            for &b in &layer.shifts {
                c = c.max(check_entry(b)?);
            }
            cols = layer.weights.rows();
        }
        if output.cols() != cols {
            return Err(Error::DimensionMismatch { expected: cols, got: output.cols() });
        }
        for (_, _, v) in output.iter() {
            c = c.max(check_entry(v)?);
        }
        Ok(Self { layers, output, grid: WeightGrid::new(c) })
    }

    /// Declare a coarser-than-needed grid is an error; a finer one is kept.
    pub fn with_grid(mut self, c: u32) -> Result<Self> {
        if c < self.grid.c {
            return Err(Error::OffGrid { value: self.grid.step(), c });
        }
        self.grid = WeightGrid::new(c);
        Ok(self)
    }

    /// Realization of a plain linear map (L = 0).
    pub fn linear(w: Matrix) -> Result<Self> {
        Self::new(Vec::new(), w)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn output(&self) -> &Matrix {
        &self.output
    }

    pub fn grid(&self) -> WeightGrid {
        self.grid
    }

    pub fn into_parts(self) -> (Vec<Layer>, Matrix) {
        (self.layers, self.output)
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(self.output.cols(), |l| l.weights.cols())
    }

    pub fn output_dim(&self) -> usize {
        self.output.rows()
    }

    /// `(m_0, …, m_{L+1})`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.input_dim()];
        d.extend(self.layers.iter().map(|l| l.weights.rows()));
        d.push(self.output_dim());
        d
    }

    /// Number of nonzero weights and shifts.
    pub fn sparsity(&self) -> usize {
        let hidden: usize =
            self.layers.iter().map(|l| l.weights.nnz() + l.shifts.iter().filter(|b| **b != 0.0).count()).sum();
        hidden + self.output.nnz()
    }

    pub fn realize(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), got: x.len() });
        }
        Ok(self.eval(x))
    }

    /// Realization without the dimension check.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for layer in &self.layers {
            y = layer.weights.apply(&y);
            for (v, b) in y.iter_mut().zip(&layer.shifts) {
                *v = (*v - b).max(0.0);
            }
        }
        self.output.apply(&y)
    }

    pub fn realize_scalar(&self, x: &[f64]) -> Result<f64> {
        if self.output_dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.output_dim() });
        }
        Ok(self.realize(x)?[0])
    }

    /// `x ↦ A · R(self)(x)`; no new layer is added.
    pub fn postcompose_linear(&self, a: &Matrix) -> Result<Self> {
        if a.cols() != self.output_dim() {
            return Err(Error::DimensionMismatch { expected: self.output_dim(), got: a.cols() });
        }
        Self::new(self.layers.clone(), a.mul(&self.output))
    }

    /// `x ↦ R(self)(A x)`; the first matrix absorbs `A`.
    pub fn precompose_linear(&self, a: &Matrix) -> Result<Self> {
        if a.rows() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), got: a.rows() });
        }
        let mut layers = self.layers.clone();
        let output = if let Some(first) = layers.first_mut() {
            first.weights = first.weights.mul(a);
            self.output.clone()
        } else {
            self.output.mul(a)
        };
        Self::new(layers, output)
    }

    pub fn to_doc(&self) -> NetworkDoc {
        let pair = |v: f64| {
            let (k, c) = to_pair(v).expect("validated entry");
            [k, c as i64]
        };
        let mat = |m: &Matrix| -> Vec<Vec<[i64; 2]>> {
            m.to_dense().into_iter().map(|r| r.into_iter().map(pair).collect()).collect()
        };
        NetworkDoc {
            version: NETWORK_FORMAT_VERSION,
            depth: self.depth(),
            dims: self.dims(),
            grid_c: self.grid.c,
            layers: self
                .layers
                .iter()
                .map(|l| LayerDoc { w: mat(&l.weights), b: l.shifts.iter().map(|&b| pair(b)).collect() })
                .collect(),
            final_w: mat(&self.output),
        }
    }

    pub fn from_doc(doc: &NetworkDoc) -> Result<Self> {
        if doc.version != NETWORK_FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!("unsupported network format version {}", doc.version)));
        }
        let val = |p: &[i64; 2]| -> Result<f64> {
            if !(0..=MAX_EXPONENT as i64).contains(&p[1]) {
                return Err(Error::InvalidArgument(format!("bad exponent {}", p[1])));
            }
            Ok(from_pair(p[0], p[1] as u32))
        };
        let mat = |rows: &[Vec<[i64; 2]>], cols: usize| -> Result<Matrix> {
            let mut flat = Vec::with_capacity(rows.len() * cols);
            for r in rows {
                if r.len() != cols {
                    return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
                }
                for p in r {
                    flat.push(val(p)?);
                }
            }
            Ok(Matrix::from_dense(rows.len(), cols, &flat))
        };
        if doc.dims.len() != doc.depth + 2 || doc.layers.len() != doc.depth {
            return Err(Error::InvalidArgument("layer count disagrees with dims".into()));
        }
        let mut layers = Vec::new();
        for (i, l) in doc.layers.iter().enumerate() {
            let w = mat(&l.w, doc.dims[i])?;
            let b = l.b.iter().map(val).collect::<Result<Vec<_>>>()?;
            if w.rows() != doc.dims[i + 1] || b.len() != w.rows() {
                return Err(Error::DimensionMismatch { expected: doc.dims[i + 1], got: w.rows() });
            }
            layers.push(Layer::new(w, b));
        }
        let out = mat(&doc.final_w, doc.dims[doc.depth])?;
        Self::new(layers, out)?.with_grid(doc.grid_c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(s)?)
    }
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(s)
    }
}

/// Versioned JSON form. Entries are exact dyadic pairs `[k, c]` meaning `k·2^-c`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NetworkDoc {
    pub version: u32,
    #[serde(rename = "L")]
    pub depth: usize,
    pub dims: Vec<usize>,
    pub grid_c: u32,
    pub layers: Vec<LayerDoc>,
    #[serde(rename = "final_W")]
    pub final_w: Vec<Vec<[i64; 2]>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LayerDoc {
    #[serde(rename = "W")]
    pub w: Vec<Vec<[i64; 2]>>,
    pub b: Vec<[i64; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_realization_and_sparsity() {
        let net = Network::linear(Matrix::identity(2)).unwrap();
        assert_eq!(net.realize(&[0.3, 0.7]).unwrap(), vec![0.3, 0.7]);
        assert_eq!(net.sparsity(), 2);
        assert_eq!(net.depth(), 0);
        assert!(net.realize(&[0.3]).is_err());
    }

    #[test]
    fn zero_net() {
        let net = Network::new(vec![Layer::unshifted(Matrix::zeros(3, 2))], Matrix::zeros(1, 3)).unwrap();
        assert_eq!(net.realize(&[0.4, -2.0]).unwrap(), vec![0.0]);
        assert_eq!(net.sparsity(), 0);
    }

    #[test]
    fn shift_is_subtracted() {
        // σ(x − (−1)) = x + 1 for x ≥ −1
        let net = Network::new(
            vec![Layer::new(Matrix::from_rows(&[vec![1.0]]), vec![-1.0])],
            Matrix::from_rows(&[vec![1.0]]),
        )
        .unwrap();
        assert_eq!(net.realize_scalar(&[-0.5]).unwrap(), 0.5);
        assert_eq!(net.realize_scalar(&[-3.0]).unwrap(), 0.0);
    }

    #[test]
    fn off_grid_entries_rejected() {
        assert!(Network::linear(Matrix::from_rows(&[vec![0.1]])).is_err());
        assert!(Network::linear(Matrix::from_rows(&[vec![2.0]])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let net = Network::new(
            vec![Layer::new(Matrix::from_rows(&[vec![0.5, -0.25], vec![0.0, 1.0]]), vec![0.125, 0.0])],
            Matrix::from_rows(&[vec![1.0, -0.75]]),
        )
        .unwrap();
        let s = net.to_json();
        assert!(s.contains("\"final_W\""));
        let back = Network::from_json(&s).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.grid().c, 3);
    }

    #[test]
    fn matrix_products() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]);
        let b = Matrix::from_rows(&[vec![1.0, -1.0], vec![1.0, 0.0]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![3.0, -1.0], vec![1.0, 0.0]]);
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 1, 3.0);
        m.set(0, 0, 1.0);
        assert_eq!(m.row(0), &[(0, 1.0), (1, 3.0)]);
        m.set(0, 1, 0.0);
        assert_eq!(m.nnz(), 1);
    }
}
