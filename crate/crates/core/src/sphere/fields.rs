//! Node-valued fields on a [`SurfaceGrid`] and their CSV form.

use std::io::{self, Write};

use crate::scalar::Real;
use crate::sphere::SurfaceGrid;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<T> {
    pub values: Vec<T>,
}

/// 1-form in parameter components `(omega_theta, omega_phi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormField<T> {
    pub theta: Vec<T>,
    pub phi: Vec<T>,
}

/// Symmetric 2-tensor in parameter components.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTwoTensorField<T> {
    pub tt: Vec<T>,
    pub tp: Vec<T>,
    pub pp: Vec<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![T::zero(); n] }
    }

    pub fn constant(n: usize, c: T) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn from_fn<F: Fn(T, T) -> T>(grid: &SurfaceGrid<T>, f: F) -> Self {
        Self { values: grid.sample(f) }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with<F: Fn(T, T) -> T>(&self, o: &Self, f: F) -> Self {
        Self { values: self.values.iter().zip(&o.values).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn write_csv<W: Write>(&self, grid: &SurfaceGrid<T>, name: &str, w: W) -> io::Result<()> {
        write_columns(grid, &[name], &[&self.values], w)
    }
}

impl<T: Real> OneFormField<T> {
    pub fn new(theta: Vec<T>, phi: Vec<T>) -> Self {
        Self { theta, phi }
    }

    pub fn zeros(n: usize) -> Self {
        Self { theta: vec![T::zero(); n], phi: vec![T::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            theta: self.theta.iter().map(|&v| v * c).collect(),
            phi: self.phi.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            theta: self.theta.iter().zip(&o.theta).map(|(&a, &b)| a + b).collect(),
            phi: self.phi.iter().zip(&o.phi).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scaled(-T::one()))
    }

    pub fn write_csv<W: Write>(&self, grid: &SurfaceGrid<T>, name: &str, w: W) -> io::Result<()> {
        let a = format!("{name}_theta");
        let b = format!("{name}_phi");
        write_columns(grid, &[&a, &b], &[&self.theta, &self.phi], w)
    }
}

impl<T: Real> SymTwoTensorField<T> {
    pub fn new(tt: Vec<T>, tp: Vec<T>, pp: Vec<T>) -> Self {
        Self { tt, tp, pp }
    }

    pub fn zeros(n: usize) -> Self {
        Self { tt: vec![T::zero(); n], tp: vec![T::zero(); n], pp: vec![T::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.tt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tt.is_empty()
    }

    /// Components at node `k` as a 2x2 matrix.
    pub fn at(&self, k: usize) -> [[T; 2]; 2] {
        [[self.tt[k], self.tp[k]], [self.tp[k], self.pp[k]]]
    }

    pub fn write_csv<W: Write>(&self, grid: &SurfaceGrid<T>, name: &str, w: W) -> io::Result<()> {
        let a = format!("{name}_thetatheta");
        let b = format!("{name}_thetaphi");
        let c = format!("{name}_phiphi");
        write_columns(grid, &[&a, &b, &c], &[&self.tt, &self.tp, &self.pp], w)
    }
}

/// Writes node columns in row-major `theta`-then-`phi` order.
pub fn write_columns<T: Real, W: Write>(
    grid: &SurfaceGrid<T>,
    names: &[&str],
    cols: &[&[T]],
    mut w: W,
) -> io::Result<()> {
    write!(w, "i,j,theta,phi")?;
    for n in names {
        write!(w, ",{n}")?;
    }
    writeln!(w)?;
    for k in 0..grid.len() {
        let (t, p) = grid.angles(k);
        write!(w, "{},{},{:.17e},{:.17e}", k / grid.n_phi(), k % grid.n_phi(), t.to_f64_lossy(), p.to_f64_lossy())?;
        for c in cols {
            write!(w, ",{:.17e}", c[k].to_f64_lossy())?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_rows() {
        let g = SurfaceGrid::<f64>::new(8, 16).unwrap();
        let f = ScalarField::from_fn(&g, |t, _| t.cos());
        let mut buf = Vec::new();
        f.write_csv(&g, "f", &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "i,j,theta,phi,f");
        assert_eq!(lines.len(), 1 + g.len());
        assert!(lines[17].starts_with("1,0,"));
    }
}
