//! Exact integer matrices: row Hermite normal form, Smith normal form with
//! unimodular transforms, and lattice membership.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix. Panics if a row has the wrong length.
    pub fn from_rows<T: Into<BigInt>>(cols: usize, rows: impl IntoIterator<Item = Vec<T>>) -> Self {
        let mut data = Vec::new();
        let mut count = 0;
        for row in rows {
            assert_eq!(
                row.len(),
                cols,
                "row {count} has {} entries, expected {cols}",
                row.len()
            );
            data.extend(row.into_iter().map(Into::into));
            count += 1;
        }
        IntMatrix {
            rows: count,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += x * self.get(i, j);
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let d = s * k;
                self.data[dst * self.cols + j] += d;
            }
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let d = s * k;
                self.data[i * self.cols + dst] += d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = -std::mem::take(x);
        }
    }

    /// Keeps only the first `rows` rows.
    fn truncate_rows(&mut self, rows: usize) {
        self.rows = rows.min(self.rows);
        self.data.truncate(self.rows * self.cols);
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(BigInt::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|x| format!("{:>width$}", x.to_string()))
                .collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized as an array of rows of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(BigInt::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(D::Error::custom("ragged matrix"));
            }
            parsed.push(
                row.iter()
                    .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(IntMatrix::from_rows(cols, parsed))
    }
}

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot in `[0, pivot)`, zero rows dropped. Two matrices have the same row
/// lattice iff their HNFs are equal.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            let pivot = (r..a.rows)
                .filter(|&i| !a.get(i, c).is_zero())
                .min_by(|&x, &y| a.get(x, c).abs().cmp(&a.get(y, c).abs()).then(x.cmp(&y)));
            let Some(p) = pivot else { break };
            a.swap_rows(r, p);
            let mut clear = true;
            for i in r + 1..a.rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = a.get(i, c).div_floor(a.get(r, c));
                a.add_row(i, r, &-q);
                clear &= a.get(i, c).is_zero();
            }
            if clear {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a.get(i, c).div_floor(a.get(r, c));
            a.add_row(i, r, &-q);
        }
        r += 1;
    }
    a.truncate_rows(r);
    a
}

/// `U · T · V = S` with `U`, `V` unimodular and `S` diagonal with
/// `d_1 | d_2 | ...`, all `d_k >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The full diagonal of `S`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    /// The nonzero diagonal entries.
    pub fn divisors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        self.v.swap_cols(x, y);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
    }

    /// Moves the entry at `(i, j)` to `(t, t)`.
    fn bring_to(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Smallest nonzero entry by absolute value among `cells`, first one on ties.
    fn least(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for (i, j) in cells {
            let x = self.a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
        best.map(|(pos, _)| pos)
    }
}

/// Smith normal form with transforms.
///
/// Each stage pivots on the least nonzero entry (by absolute value, ties to
/// the smallest row then column) of the remaining block, clears its row and
/// column by division with remainder, and restores divisibility by adding the
/// offending row into the pivot row.
pub fn snf_with_transforms(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut st = SnfState {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let block = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        let Some(pos) = st.least(block) else { break };
        st.bring_to(t, pos);
        loop {
            let mut clear = true;
            for i in t + 1..rows {
                if !st.a.get(i, t).is_zero() {
                    let q = st.a.get(i, t) / st.a.get(t, t);
                    st.add_row(i, t, &-q);
                    clear &= st.a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !st.a.get(t, j).is_zero() {
                    let q = st.a.get(t, j) / st.a.get(t, t);
                    st.add_col(j, t, &-q);
                    clear &= st.a.get(t, j).is_zero();
                }
            }
            if !clear {
                let cross = (t + 1..rows)
                    .map(|i| (i, t))
                    .chain((t + 1..cols).map(|j| (t, j)));
                let pos = st.least(cross).expect("a nonzero remainder remains");
                st.bring_to(t, pos);
                continue;
            }
            let pivot = st.a.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !st.a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a.get(t, t).is_negative() {
            st.a.negate_row(t);
            st.u.negate_row(t);
        }
    }
    SnfResult {
        u: st.u,
        s: st.a,
        v: st.v,
    }
}

/// Abelian invariants of `Z^m / rowspace(rows)`: the nonzero Smith divisors
/// (ones included) and the free rank.
pub fn quotient_invariants(m: usize, rows: &IntMatrix) -> (Vec<BigInt>, usize) {
    assert_eq!(rows.cols, m, "relation rows must have {m} columns");
    let divisors = snf_with_transforms(rows).divisors();
    let free = m - divisors.len();
    (divisors, free)
}

/// Whether `v` lies in the row lattice of `l`, which must be in HNF.
pub fn lattice_contains(l: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), l.cols, "vector length does not match the lattice");
    let mut rest = v.to_vec();
    for r in 0..l.rows {
        let row = l.row(r);
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if rest[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, rem) = rest[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

/// Whether the row lattices of `a` and `b` coincide.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    hnf(a) == hnf(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows.iter().map(|r| r.to_vec()))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_single_row() {
        assert_eq!(hnf(&mat(2, &[&[2, 1]])), mat(2, &[&[2, 1]]));
        assert_eq!(hnf(&mat(2, &[&[-2, -1]])), mat(2, &[&[2, 1]]));
    }

    #[test]
    fn hnf_small_lattice() {
        let h = hnf(&mat(2, &[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(h, mat(2, &[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_of_zero_matrix_is_empty() {
        let h = hnf(&IntMatrix::zeros(3, 4));
        assert_eq!(h.rows(), 0);
        assert_eq!(h.cols(), 4);
    }

    #[test]
    fn membership() {
        let l = mat(2, &[&[1, 1], &[0, 2]]);
        assert!(lattice_contains(&l, &big(&[1, 3])));
        assert!(lattice_contains(&l, &big(&[0, 0])));
        assert!(!lattice_contains(&l, &big(&[0, 1])));
        let l = mat(2, &[&[2, 1]]);
        assert!(!lattice_contains(&l, &big(&[1, 0])));
        assert!(lattice_contains(&l, &big(&[-4, -2])));
        assert!(lattice_contains(&IntMatrix::zeros(0, 3), &big(&[0, 0, 0])));
    }

    #[test]
    fn snf_of_diagonal() {
        let r = snf_with_transforms(&mat(2, &[&[2, 0], &[0, 2]]));
        assert_eq!(r.s, mat(2, &[&[2, 0], &[0, 2]]));
        assert_eq!(r.u.determinant().abs(), BigInt::one());
        assert_eq!(r.v.determinant().abs(), BigInt::one());
    }

    #[test]
    fn snf_fixes_divisibility() {
        let t = mat(2, &[&[2, 0], &[0, 3]]);
        let r = snf_with_transforms(&t);
        assert_eq!(r.diagonal(), big(&[1, 6]));
        assert_eq!(r.u.mul(&t).mul(&r.v), r.s);
    }

    #[test]
    fn snf_rectangular_and_empty() {
        let t = mat(3, &[&[0, 4, 6], &[0, 6, 4]]);
        let r = snf_with_transforms(&t);
        assert_eq!(r.divisors(), big(&[2, 10]));
        assert_eq!(r.u.mul(&t).mul(&r.v), r.s);
        let e = IntMatrix::zeros(0, 3);
        let r = snf_with_transforms(&e);
        assert!(r.divisors().is_empty());
        assert_eq!(r.v, IntMatrix::identity(3));
    }

    #[test]
    fn quotient_examples() {
        assert_eq!(quotient_invariants(7, &IntMatrix::zeros(0, 7)), (vec![], 7));
        assert_eq!(quotient_invariants(2, &mat(2, &[&[2, 0]])), (big(&[2]), 1));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(mat(2, &[&[1, 2], &[3, 4]]).determinant(), BigInt::from(-2));
        assert_eq!(
            mat(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant(),
            BigInt::from(-5)
        );
        assert_eq!(mat(2, &[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
    }

    #[test]
    fn json_uses_decimal_strings() {
        let m = mat(2, &[&[1, -2]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[["1","-2"]]"#);
        let back: IntMatrix = serde_json::from_str(r#"[["1","-2"]]"#).unwrap();
        assert_eq!(back, m);
    }
}
