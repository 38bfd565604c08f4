//! Dense integer matrices derived from graphs.

use faer::Mat;

use crate::graph::Graph;

/// Square row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i32>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Self {
        let dim = rows.len();
        let mut m = IntMatrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            m.data[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i32) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[i32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: i32) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += shift;
        }
        out
    }

    pub fn abs(&self) -> Self {
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x.abs()).collect(),
        }
    }

    /// Exact integer matrix–vector product.
    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a as i64 * x)
                    .sum()
            })
            .collect()
    }

    pub fn to_mat(&self) -> Mat<f64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as f64)
    }
}

pub fn adjacency_matrix(g: &Graph) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.vertex_count());
    for &(u, v) in g.edges() {
        m.set(u, v, 1);
        m.set(v, u, 1);
    }
    m
}

pub fn degree_matrix(g: &Graph) -> IntMatrix {
    let mut m = IntMatrix::zeros(g.vertex_count());
    for (v, d) in g.degrees().into_iter().enumerate() {
        m.set(v, v, d as i32);
    }
    m
}

/// `D - A`.
pub fn laplacian(g: &Graph) -> IntMatrix {
    combine(g, -1)
}

/// `D + A`.
pub fn signless_laplacian(g: &Graph) -> IntMatrix {
    combine(g, 1)
}

fn combine(g: &Graph, off_diagonal: i32) -> IntMatrix {
    let mut m = degree_matrix(g);
    for &(u, v) in g.edges() {
        m.set(u, v, off_diagonal);
        m.set(v, u, off_diagonal);
    }
    m
}
