//! Sublattices of ℤⁿ: echelon (Hermite-style) bases, membership by
//! reduction, and separating functionals from a diagonal form.
//!
//! Everything is generic over the integer type so the same code runs on
//! `BigInt` (the default, overflow-free) and on `i64` (fast, for small
//! inputs and as a cross-check).

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

/// A linear functional `f` together with a modulus `m ≥ 0`; values are
/// compared in `ℤ/mℤ` (plain integers when `m = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functional<T> {
    pub coefficients: Vec<T>,
    pub modulus: T,
}

impl<T: Integer + Signed + Clone> Functional<T> {
    pub fn evaluate(&self, v: &[T]) -> T {
        dot(&self.coefficients, v)
    }

    pub fn is_zero_mod(&self, value: &T) -> bool {
        if self.modulus.is_zero() {
            value.is_zero()
        } else {
            value.mod_floor(&self.modulus).is_zero()
        }
    }

    /// Whether `f(a) ≡ f(b)`.
    pub fn agrees(&self, a: &[T], b: &[T]) -> bool {
        self.is_zero_mod(&(self.evaluate(a) - self.evaluate(b)))
    }
}

impl<T: fmt::Display> fmt::Display for Functional<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

fn dot<T: Integer + Clone>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn axpy<T: Integer + Clone>(target: &mut [T], k: &T, row: &[T]) {
    for (t, r) in target.iter_mut().zip(row) {
        *t = t.clone() - k.clone() * r.clone();
    }
}

/// The subgroup of ℤⁿ spanned by a finite set of vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice<T> {
    dim: usize,
    /// `by_pivot[c]` is the basis row whose leading entry sits in column `c`.
    by_pivot: Vec<Option<Vec<T>>>,
}

impl<T: Integer + Signed + Clone> IntegerLattice<T> {
    pub fn new(dim: usize) -> Self {
        IntegerLattice {
            dim,
            by_pivot: vec![None; dim],
        }
    }

    pub fn from_generators<I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = Vec<T>>,
    {
        let mut lattice = Self::new(dim);
        for g in gens {
            lattice.insert(g);
        }
        lattice.reduce_above_pivots();
        lattice
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.by_pivot.iter().filter(|r| r.is_some()).count()
    }

    /// Basis rows in pivot order.
    pub fn basis(&self) -> Vec<&[T]> {
        self.by_pivot
            .iter()
            .flatten()
            .map(|r| r.as_slice())
            .collect()
    }

    fn insert(&mut self, mut v: Vec<T>) {
        assert_eq!(v.len(), self.dim, "generator has the wrong length");
        for col in 0..self.dim {
            if v[col].is_zero() {
                continue;
            }
            let Some(row) = self.by_pivot[col].take() else {
                if v[col].is_negative() {
                    v.iter_mut().for_each(|x| *x = -x.clone());
                }
                self.by_pivot[col] = Some(v);
                return;
            };
            let (a, b) = (row[col].clone(), v[col].clone());
            let e = a.extended_gcd(&b);
            let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
            if g.is_negative() {
                g = -g;
                x = -x;
                y = -y;
            }
            let (a_g, b_g) = (a / g.clone(), b / g);
            let combined: Vec<T> = row
                .iter()
                .zip(&v)
                .map(|(r, w)| x.clone() * r.clone() + y.clone() * w.clone())
                .collect();
            let remainder: Vec<T> = row
                .iter()
                .zip(&v)
                .map(|(r, w)| a_g.clone() * w.clone() - b_g.clone() * r.clone())
                .collect();
            self.by_pivot[col] = Some(combined);
            v = remainder;
        }
    }

    fn reduce_above_pivots(&mut self) {
        for col in 0..self.dim {
            let Some(pivot_row) = self.by_pivot[col].clone() else {
                continue;
            };
            let p = pivot_row[col].clone();
            for upper in 0..col {
                if let Some(row) = self.by_pivot[upper].as_mut() {
                    let q = row[col].div_floor(&p);
                    if !q.is_zero() {
                        axpy(row, &q, &pivot_row);
                    }
                }
            }
        }
    }

    /// Remainder of `v` after subtracting lattice vectors greedily along
    /// the pivots; zero exactly when `v` lies in the lattice.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim, "vector has the wrong length");
        let mut v = v.to_vec();
        for (col, row) in self.by_pivot.iter().enumerate() {
            if let Some(row) = row {
                let q = v[col].div_floor(&row[col]);
                if !q.is_zero() {
                    axpy(&mut v, &q, row);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn diagonal_form(&self) -> DiagonalForm<T> {
        DiagonalForm::new(self)
    }

    /// A functional vanishing on the lattice (mod its modulus) that does not
    /// vanish on `v`; `None` when `v` is a lattice vector.
    pub fn separating_functional(&self, v: &[T]) -> Option<Functional<T>> {
        self.diagonal_form().separate(v, false)
    }

    /// A functional vanishing exactly on the lattice over ℤ with nonzero
    /// value on `v`; exists iff `v` has infinite order modulo the lattice.
    pub fn rational_separator(&self, v: &[T]) -> Option<Functional<T>> {
        self.diagonal_form().separate(v, true)
    }
}

/// `B·V = D` for the basis matrix `B` (rows), unimodular row operations
/// left implicit, `V` unimodular and `D` diagonal.
#[derive(Debug, Clone)]
pub struct DiagonalForm<T> {
    pub diagonal: Vec<T>,
    /// `columns[i]` is column `i` of `V`.
    pub columns: Vec<Vec<T>>,
}

impl<T: Integer + Signed + Clone> DiagonalForm<T> {
    fn new(lattice: &IntegerLattice<T>) -> Self {
        let n = lattice.dim;
        let mut m: Vec<Vec<T>> = lattice.basis().into_iter().map(|r| r.to_vec()).collect();
        let r = m.len();
        let mut cols: Vec<Vec<T>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();

        for t in 0..r {
            loop {
                // smallest nonzero entry of the trailing block goes to (t, t)
                let mut best: Option<(usize, usize)> = None;
                for (i, row) in m.iter().enumerate().skip(t) {
                    for (j, x) in row.iter().enumerate().skip(t) {
                        if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let (bi, bj) = best.expect("basis rows are independent");
                m.swap(t, bi);
                if bj != t {
                    for row in m.iter_mut() {
                        row.swap(t, bj);
                    }
                    cols.swap(t, bj);
                }
                let p = m[t][t].clone();
                let mut clean = true;
                for i in t + 1..r {
                    let q = m[i][t].div_floor(&p);
                    if !q.is_zero() {
                        let pivot_row = m[t].clone();
                        axpy(&mut m[i], &q, &pivot_row);
                    }
                    clean &= m[i][t].is_zero();
                }
                for j in t + 1..n {
                    let q = m[t][j].div_floor(&p);
                    if !q.is_zero() {
                        for row in m.iter_mut() {
                            let sub = q.clone() * row[t].clone();
                            row[j] = row[j].clone() - sub;
                        }
                        let col_t = cols[t].clone();
                        axpy(&mut cols[j], &q, &col_t);
                    }
                    clean &= m[t][j].is_zero();
                }
                if clean {
                    break;
                }
            }
        }
        let diagonal = (0..r).map(|t| m[t][t].abs()).collect();
        DiagonalForm {
            diagonal,
            columns: cols,
        }
    }

    fn separate(&self, v: &[T], rational_only: bool) -> Option<Functional<T>> {
        let r = self.diagonal.len();
        let start = if rational_only { r } else { 0 };
        (start..self.columns.len()).find_map(|i| {
            let f = Functional {
                coefficients: self.columns[i].clone(),
                modulus: if i < r {
                    self.diagonal[i].clone()
                } else {
                    T::zero()
                },
            };
            let value = f.evaluate(v);
            (!f.is_zero_mod(&value)).then_some(f)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_of_simple_lattice() {
        let l = IntegerLattice::<i64>::from_generators(2, vec![vec![2, 4], vec![3, 5]]);
        assert_eq!(l.rank(), 2);
        // determinant ±2, so index 2 in ℤ²
        assert!(l.contains(&[1, 1]));
        assert!(!l.contains(&[1, 0]));
        assert!(l.contains(&[0, 2]));
    }

    #[test]
    fn zero_lattice_separates_everything_but_zero() {
        let l = IntegerLattice::<i64>::new(1);
        assert!(l.contains(&[0]));
        let f = l.separating_functional(&[-1]).unwrap();
        assert_eq!(f.modulus, 0);
        assert!(!f.agrees(&[1], &[2]));
    }

    #[test]
    fn separating_functional_vanishes_on_generators() {
        let gens = vec![vec![1, -2, 1], vec![0, 3, -3], vec![2, 2, -4]];
        let l = IntegerLattice::<i64>::from_generators(3, gens.clone());
        for target in [[1, 0, 0], [0, 1, 0], [1, 1, 1], [0, 0, 1]] {
            match l.separating_functional(&target) {
                Some(f) => {
                    for g in &gens {
                        assert!(f.is_zero_mod(&f.evaluate(g)));
                    }
                    assert!(!f.is_zero_mod(&f.evaluate(&target)));
                    assert!(!l.contains(&target));
                }
                None => assert!(l.contains(&target)),
            }
        }
    }

    #[test]
    fn torsion_class_has_no_rational_separator() {
        // ℤ/2 quotient: (1) has order 2
        let l = IntegerLattice::<i64>::from_generators(1, vec![vec![2]]);
        assert!(l.rational_separator(&[1]).is_none());
        let f = l.separating_functional(&[1]).unwrap();
        assert_eq!(f.modulus, 2);
        // rank-deficient lattice in ℤ²
        let l = IntegerLattice::<i64>::from_generators(2, vec![vec![1, -1]]);
        let f = l.rational_separator(&[1, 1]).unwrap();
        assert_eq!(f.evaluate(&[1, -1]), 0);
        assert_ne!(f.evaluate(&[1, 1]), 0);
    }

    #[test]
    fn bigint_matches_machine_integers() {
        let gens = vec![vec![6, 10, 15], vec![4, -6, 8], vec![0, 9, 3]];
        let small = IntegerLattice::<i64>::from_generators(3, gens.clone());
        let large = IntegerLattice::<BigInt>::from_generators(3, gens.iter().map(|g| big(g)));
        for a in -3..=3 {
            for b in -3..=3 {
                let v = [a, b, 1];
                assert_eq!(small.contains(&v), large.contains(&big(&v)));
            }
        }
        assert_eq!(small.rank(), large.rank());
    }
}
