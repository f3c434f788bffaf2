use std::ops::{Index, IndexMut};

/// Real-valued function on the vertex set, stored densely in vertex-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexField(Vec<f64>);

impl VertexField {
    pub fn zeros(len: usize) -> Self {
        VertexField(vec![0.0; len])
    }

    pub fn constant(len: usize, value: f64) -> Self {
        VertexField(vec![value; len])
    }

    pub fn from_vec(values: Vec<f64>) -> Self {
        VertexField(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn scaled(&self, a: f64) -> VertexField {
        VertexField(self.0.iter().map(|x| a * x).collect())
    }

    /// `a * self + b * other`
    pub fn combine(&self, a: f64, other: &VertexField, b: f64) -> VertexField {
        debug_assert_eq!(self.len(), other.len());
        VertexField(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn sub(&self, other: &VertexField) -> VertexField {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &VertexField) -> VertexField {
        self.combine(1.0, other, 1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Largest pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &VertexField) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    }
}

impl Index<usize> for VertexField {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for VertexField {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for VertexField {
    fn from(values: Vec<f64>) -> Self {
        VertexField(values)
    }
}

impl<'a> IntoIterator for &'a VertexField {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
