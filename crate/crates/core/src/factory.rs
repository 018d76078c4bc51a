//! Finite truncations of the operator family `Z(delta, gamma)` and the
//! operators derived from it.
//!
//! `Z(delta, gamma)` is `i` times a real symmetric matrix with zero
//! diagonal whose `(k, j)` entry depends only on `m = max(k, j)` (one-based):
//! it is `-delta^(m/2)` for even `m` and `gamma^((m-1)/2)` for odd `m`.
//! From it we build
//!
//! * `Z1`, the same matrix with its first row and column removed,
//! * `D0`, the diagonal that makes every column orthogonal to the first,
//! * `Zo`, the matrix whose first row and column are rescaled so that the
//!   first column has norm `|Z1 + D0|`,
//! * `Z2 = Zo + D0`, a minimal operator whose norm is attained on its
//!   first column.
//!
//! Everything the factory returns is wrapped in [`Truncated`], which keeps
//! the truncation parameters and a bound on the discarded block next to
//! the matrix.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{column, spectral_norm, vec_norm, AntiHermitianOp, CMat, ComplexMatrix, C64, I};

/// Truncation dimension and the two decay parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
}

impl TruncationSpec {
    pub fn new(n: usize, gamma: f64, delta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("truncation dimension must be positive".into()));
        }
        for (name, v) in [("gamma", gamma), ("delta", delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidInput(format!("{name} = {v} is not in (0, 1)")));
            }
        }
        Ok(Self { n, gamma, delta })
    }

    /// `gamma = 1/2`, `delta = 1/4`.
    pub fn standard(n: usize) -> Self {
        Self {
            n,
            gamma: 0.5,
            delta: 0.25,
        }
    }

    /// Whether `gamma^2 = delta` and `delta^2 < gamma`, the regime in which
    /// `D0` oscillates.
    pub fn constraint_ok(&self) -> bool {
        (self.gamma * self.gamma - self.delta).abs() <= 1e-12 && self.delta * self.delta < self.gamma
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if (self.gamma * self.gamma - self.delta).abs() > 1e-12 {
            w.push(format!(
                "gamma^2 = {} differs from delta = {}",
                self.gamma * self.gamma,
                self.delta
            ));
        }
        if self.delta * self.delta >= self.gamma {
            w.push(format!(
                "delta^2 = {} is not below gamma = {}",
                self.delta * self.delta,
                self.gamma
            ));
        }
        w
    }

    /// Real coefficient `a_m` of the one-based index `m >= 2`.
    fn coefficient(&self, m: usize) -> f64 {
        if m % 2 == 0 {
            -self.delta.powi((m / 2) as i32)
        } else {
            self.gamma.powi(((m - 1) / 2) as i32)
        }
    }

    /// Entry `(i, j)` (zero-based) of the infinite matrix.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        if i == j {
            C64::new(0.0, 0.0)
        } else {
            I * self.coefficient(i.max(j) + 1)
        }
    }
}

/// Whether a diagonal holds real or purely imaginary entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HermitianKind {
    Hermitian,
    AntiHermitian,
}

/// Diagonal matrix stored as its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOp {
    entries: Vec<C64>,
    kind: HermitianKind,
}

impl DiagonalOp {
    pub fn new(entries: Vec<C64>, kind: HermitianKind) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("diagonal must have at least one entry".into()));
        }
        for (k, z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite diagonal entry {k}")));
            }
            let stray = match kind {
                HermitianKind::Hermitian => z.im.abs(),
                HermitianKind::AntiHermitian => z.re.abs(),
            };
            if stray > 1e-12 * z.norm().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry {k} = {z} does not fit {kind:?}"
                )));
            }
        }
        Ok(Self { entries, kind })
    }

    pub fn hermitian(values: &[f64]) -> Result<Self> {
        Self::new(
            values.iter().map(|&v| C64::new(v, 0.0)).collect(),
            HermitianKind::Hermitian,
        )
    }

    /// `i * diag(values)`.
    pub fn anti_hermitian(values: &[f64]) -> Result<Self> {
        Self::new(
            values.iter().map(|&v| C64::new(0.0, v)).collect(),
            HermitianKind::AntiHermitian,
        )
    }

    pub fn zeros(n: usize, kind: HermitianKind) -> Self {
        Self {
            entries: vec![C64::new(0.0, 0.0); n],
            kind,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn kind(&self) -> HermitianKind {
        self.kind
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> C64 {
        self.entries[k]
    }

    /// Real parts for Hermitian diagonals, imaginary parts otherwise.
    pub fn values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|z| match self.kind {
                HermitianKind::Hermitian => z.re,
                HermitianKind::AntiHermitian => z.im,
            })
            .collect()
    }

    pub fn to_matrix(&self) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for (k, z) in self.entries.iter().enumerate() {
            m[(k, k)] = *z;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// First pair of (numerically) equal entries, if any.
    pub fn repeated_pair(&self) -> Option<(usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.entries[i] == self.entries[j] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The diagonal of an anti-Hermitian operator.
    pub fn diagonal_of(a: &AntiHermitianOp) -> Self {
        Self {
            entries: a.diagonal().iter().map(|z| C64::new(0.0, z.im)).collect(),
            kind: HermitianKind::AntiHermitian,
        }
    }

    /// `a + self` for an anti-Hermitian diagonal.
    pub fn add_to(&self, a: &AntiHermitianOp) -> Result<AntiHermitianOp> {
        if self.kind != HermitianKind::AntiHermitian {
            return Err(Error::InvalidInput(
                "only anti-Hermitian diagonals can shift a lift".into(),
            ));
        }
        a.add_imaginary_diagonal(&self.values())
    }
}

/// A factory product together with its truncation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub op: T,
    pub spec: TruncationSpec,
    /// Upper bound on the spectral norm of the discarded block.
    pub tail_bound: f64,
}

impl<T> Deref for Truncated<T> {
    type Target = T;
    fn deref(&self) -> &T {
        &self.op
    }
}

impl<T> Truncated<T> {
    pub fn into_inner(self) -> T {
        self.op
    }
}

/// Leading `n x n` block of `Z(delta, gamma)`.
pub fn build_zdg(spec: &TruncationSpec) -> Result<Truncated<AntiHermitianOp>> {
    if spec.n < 2 {
        return Err(Error::Size {
            dim: spec.n,
            reason: "Z(delta, gamma) truncations need n >= 2".into(),
        });
    }
    let m = ComplexMatrix::from_fn(spec.n, |i, j| spec.entry(i, j))?;
    Ok(Truncated {
        op: AntiHermitianOp::new(m)?,
        spec: *spec,
        tail_bound: tail_bound(spec),
    })
}

/// Copy of `z` with the first row and column zeroed.
pub fn strip_first(z: &AntiHermitianOp) -> Result<AntiHermitianOp> {
    let n = z.dim();
    if n < 2 {
        return Err(Error::Size {
            dim: n,
            reason: "nothing left after removing the first row and column".into(),
        });
    }
    let mut m = z.matrix().clone();
    for k in 0..n {
        m[(0, k)] = C64::new(0.0, 0.0);
        m[(k, 0)] = C64::new(0.0, 0.0);
    }
    AntiHermitianOp::new(ComplexMatrix::new(m)?)
}

/// Anti-Hermitian diagonal `D` with `D[j0, j0] = 0` such that every column
/// of `z + D` other than `j0` is orthogonal to column `j0`.
///
/// Requires `z[j0, j0] = 0` and `z[j, j0] != 0` for all `j != j0`.
pub fn orthogonalizing_diagonal(z: &AntiHermitianOp, j0: usize) -> Result<DiagonalOp> {
    let n = z.dim();
    if j0 >= n {
        return Err(Error::Index { index: j0, dim: n });
    }
    let m = z.matrix();
    if m[(j0, j0)].norm() > 1e-12 * z.as_complex().max_abs().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "entry ({j0}, {j0}) must vanish, found {}",
            m[(j0, j0)]
        )));
    }
    let mut entries = vec![C64::new(0.0, 0.0); n];
    for j in (0..n).filter(|&j| j != j0) {
        let pivot = m[(j, j0)];
        if pivot.norm() == 0.0 {
            return Err(Error::DegenerateColumn { row: j, col: j0 });
        }
        // <c_j, c_j0> with row j left out; row j contributes (z_jj + D_jj) conj(z_j,j0).
        let mut s = C64::new(0.0, 0.0);
        for k in (0..n).filter(|&k| k != j) {
            s += m[(k, j)] * m[(k, j0)].conj();
        }
        let target = -s / pivot.conj();
        let shift = target - m[(j, j)];
        if shift.re.abs() > 1e-9 * shift.norm().max(1e-300) && shift.re.abs() > 1e-14 {
            return Err(Error::InvalidInput(format!(
                "orthogonalizing entry {j} = {shift} is not purely imaginary"
            )));
        }
        entries[j] = C64::new(0.0, shift.im);
    }
    DiagonalOp::new(entries, HermitianKind::AntiHermitian)
}

/// All operators of the `Z2` construction, computed once.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    pub spec: TruncationSpec,
    pub zdg: AntiHermitianOp,
    pub z1: AntiHermitianOp,
    pub d0: DiagonalOp,
    pub zo: AntiHermitianOp,
    pub z2: AntiHermitianOp,
    /// Factor applied to the first row and column of `Z(delta, gamma)`.
    pub first_column_scale: f64,
    pub tail_bound: f64,
}

impl OperatorFamily {
    pub fn build(spec: &TruncationSpec) -> Result<Self> {
        let zdg = build_zdg(spec)?;
        let z1 = strip_first(&zdg)?;
        let d0_dg = orthogonalizing_diagonal(&zdg, 0)?;
        let z1d = d0_dg.add_to(&z1)?;
        let first = column(zdg.as_complex(), 0)?;
        let scale = spectral_norm(z1d.as_complex()) / vec_norm(&first);
        let zo = zdg.sub(&z1)?.scale(scale).add(&z1)?;
        let d0 = orthogonalizing_diagonal(&zo, 0)?;
        let z2 = d0.add_to(&zo)?;
        Ok(Self {
            spec: *spec,
            tail_bound: zdg.tail_bound * scale.max(1.0),
            zdg: zdg.into_inner(),
            z1,
            d0,
            zo,
            z2,
            first_column_scale: scale,
        })
    }

    fn wrap<T>(&self, op: T) -> Truncated<T> {
        Truncated {
            op,
            spec: self.spec,
            tail_bound: self.tail_bound,
        }
    }
}

/// `Zo = (|Z1 + D0| / |c_1(Z)|) (Z - Z1) + Z1`.
///
/// The tail bound of rescaled operators is the `Z(delta, gamma)` bound
/// multiplied by the rescaling factor when that exceeds one.
pub fn build_zo(spec: &TruncationSpec) -> Result<Truncated<AntiHermitianOp>> {
    let fam = OperatorFamily::build(spec)?;
    let zo = fam.zo.clone();
    Ok(fam.wrap(zo))
}

/// `Z2 = Zo + D0`.
pub fn build_z2(spec: &TruncationSpec) -> Result<Truncated<AntiHermitianOp>> {
    let fam = OperatorFamily::build(spec)?;
    let z2 = fam.z2.clone();
    Ok(fam.wrap(z2))
}

/// Base point `b = diag(1, 1/2, ..., 1/n)`.
pub fn build_b(n: usize) -> Result<DiagonalOp> {
    if n < 2 {
        return Err(Error::Size {
            dim: n,
            reason: "the base point needs at least two distinct entries".into(),
        });
    }
    let v: Vec<f64> = (1..=n).map(|i| 1.0 / i as f64).collect();
    DiagonalOp::hermitian(&v)
}

/// Base point from user-supplied values, which must be pairwise distinct.
pub fn build_b_from_values(values: &[f64]) -> Result<DiagonalOp> {
    if values.len() < 2 {
        return Err(Error::Size {
            dim: values.len(),
            reason: "the base point needs at least two distinct entries".into(),
        });
    }
    let b = DiagonalOp::hermitian(values)?;
    if let Some((i, j)) = b.repeated_pair() {
        return Err(Error::DegenerateBase { i, j });
    }
    Ok(b)
}

/// Parity-class tail statistics of a diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    /// Trimmed mean over even one-based indices of the tail.
    pub even_estimate: [f64; 2],
    /// Trimmed mean over odd one-based indices of the tail.
    pub odd_estimate: [f64; 2],
    pub gap: f64,
    /// Relative change of the gap against the profile of the leading half,
    /// when that half is long enough to be profiled.
    pub stability: Option<f64>,
}

impl OscillationProfile {
    pub fn even(&self) -> C64 {
        C64::new(self.even_estimate[0], self.even_estimate[1])
    }

    pub fn odd(&self) -> C64 {
        C64::new(self.odd_estimate[0], self.odd_estimate[1])
    }
}

/// Zero-based index range of the trailing `tail_fraction` of `n` entries.
pub fn tail_range(n: usize, tail_fraction: f64) -> std::ops::Range<usize> {
    let len = ((tail_fraction * n as f64).ceil() as usize).min(n);
    (n - len)..n
}

fn parity_means(entries: &[C64], tail_fraction: f64) -> Result<(C64, C64)> {
    let n = entries.len();
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for k in tail_range(n, tail_fraction) {
        // one-based index k + 1
        if (k + 1) % 2 == 0 {
            even.push(entries[k]);
        } else {
            odd.push(entries[k]);
        }
    }
    if even.len() < 2 || odd.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "tail holds {} even and {} odd samples, need 2 of each",
            even.len(),
            odd.len()
        )));
    }
    Ok((trimmed_mean(&even), trimmed_mean(&odd)))
}

/// Share of samples dropped per parity class, farthest from the class median first.
const TRIM_FRACTION: f64 = 0.2;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Mean after dropping the samples farthest from the componentwise median.
/// The last few entries of a truncated diagonal carry a boundary layer that
/// would otherwise bias a plain mean by a term proportional to `1 / n`.
fn trimmed_mean(v: &[C64]) -> C64 {
    let center = C64::new(
        median(v.iter().map(|z| z.re).collect()),
        median(v.iter().map(|z| z.im).collect()),
    );
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| (a - center).norm().total_cmp(&(b - center).norm()));
    let keep = (v.len() - (TRIM_FRACTION * v.len() as f64).floor() as usize).max(1);
    sorted[..keep].iter().sum::<C64>() / keep as f64
}

pub fn oscillation_profile(d: &DiagonalOp, tail_fraction: f64) -> Result<OscillationProfile> {
    if d.dim() < 8 {
        return Err(Error::InsufficientData(format!(
            "oscillation profile needs dim >= 8, got {}",
            d.dim()
        )));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 0.5) {
        return Err(Error::InvalidInput(format!(
            "tail fraction {tail_fraction} not in (0, 0.5]"
        )));
    }
    let (even, odd) = parity_means(d.entries(), tail_fraction)?;
    let gap = (even - odd).norm();
    let half = &d.entries()[..d.dim() / 2];
    let stability = if half.len() >= 8 {
        parity_means(half, tail_fraction).ok().map(|(e, o)| {
            let g = (e - o).norm();
            if gap > 0.0 {
                (gap - g).abs() / gap
            } else {
                g
            }
        })
    } else {
        None
    };
    Ok(OscillationProfile {
        even_estimate: [even.re, even.im],
        odd_estimate: [odd.re, odd.im],
        gap,
        stability,
    })
}

/// `sum_{p >= start} q^p`.
fn geometric_tail(start: usize, q: f64) -> f64 {
    q.powi(start as i32) / (1.0 - q)
}

/// `sum_{p >= start} p q^p`.
fn weighted_geometric_tail(start: usize, q: f64) -> f64 {
    let p = start as f64;
    q.powi(start as i32) * (p * (1.0 - q) + q) / ((1.0 - q) * (1.0 - q))
}

/// Frobenius norm of every entry of `Z(delta, gamma)` outside the leading
/// `n x n` block, in closed form. It bounds the spectral norm of the
/// discarded part.
///
/// Entries with `max(k, j) = m` number `2(m - 1)` off the diagonal.
pub fn tail_bound(spec: &TruncationSpec) -> f64 {
    let n = spec.n;
    // even m = 2p > n, weight 2(2p - 1), |a_m|^2 = delta^(2p)
    let pe = n / 2 + 1;
    let qe = spec.delta * spec.delta;
    let even = 4.0 * weighted_geometric_tail(pe, qe) - 2.0 * geometric_tail(pe, qe);
    // odd m = 2p + 1 > n, weight 4p, |a_m|^2 = gamma^(2p)
    let po = n.saturating_sub(1) / 2 + 1;
    let qo = spec.gamma * spec.gamma;
    let odd = 4.0 * weighted_geometric_tail(po, qo);
    (even + odd).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn std_spec(n: usize) -> TruncationSpec {
        TruncationSpec::standard(n)
    }

    #[test]
    fn zdg_entries_follow_the_display() {
        let z = build_zdg(&std_spec(8)).unwrap();
        // one-based (2,1) = -i/4 and (3,1) = i/2
        assert_eq!(z.get(1, 0), C64::new(0.0, -0.25));
        assert_eq!(z.get(2, 0), C64::new(0.0, 0.5));
        let row: Vec<f64> = (0..8).map(|j| z.get(0, j).im).collect();
        assert_eq!(row, vec![0.0, -0.25, 0.5, -0.0625, 0.25, -0.015625, 0.125, -0.00390625]);
        assert!((0..8).all(|k| z.get(k, k) == C64::new(0.0, 0.0)));
        // i times a real symmetric matrix
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(z.get(i, j).re, 0.0);
                assert_eq!(z.get(i, j), z.get(j, i));
            }
        }
    }

    #[test]
    fn zdg_rejects_tiny_truncation() {
        assert!(matches!(build_zdg(&std_spec(1)), Err(Error::Size { .. })));
    }

    #[test]
    fn first_column_norm_approaches_two_fifths() {
        // geometric series: sum delta^2k + gamma^2k = 1/15 + 1/3
        let expect = 1.0 / 15.0 + 1.0 / 3.0;
        let mut last = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let z = build_zdg(&std_spec(n)).unwrap();
            let c = column(z.as_complex(), 0).unwrap();
            let err = (c.norm_squared() - expect).abs();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-15);
    }

    #[test]
    fn strip_first_cases() {
        let z = build_zdg(&std_spec(6)).unwrap();
        let s = strip_first(&z).unwrap();
        assert!(column(s.as_complex(), 0).unwrap().iter().all(|v| v.norm() == 0.0));
        for i in 1..6 {
            for j in 1..6 {
                assert_eq!(s.get(i, j), z.get(i, j));
            }
        }
        assert_eq!(strip_first(&s).unwrap(), s);
    }

    #[test]
    fn orthogonalizing_diagonal_zero_when_already_orthogonal() {
        // columns 2 and 3 of i*[[0,1,1],[1,0,x],[1,x,0]] are orthogonal to column 1 iff x = 0... use
        // a matrix whose off-first block is zero: c_j = i e_1 (j>1), c_1 = i(e_2 + e_3): orthogonal.
        let m = CMat::from_fn(3, 3, |i, j| if (i == 0) != (j == 0) { I } else { C64::new(0.0, 0.0) });
        let z = AntiHermitianOp::new(ComplexMatrix::new(m).unwrap()).unwrap();
        let d = orthogonalizing_diagonal(&z, 0).unwrap();
        assert!(d.max_abs() == 0.0);
    }

    #[test]
    fn orthogonalizing_diagonal_three_by_three_by_hand() {
        // Z = i[[0,-d,g],[-d,0,g],[g,g,0]]; solving <c_2 + i x e_2, c_1> = 0 by hand gives
        // x = g^2/d, and for column 3: <c_3 + i y e_3, c_1> = -g d... + y g ... = 0 gives y = d.
        let spec = std_spec(3);
        let z = build_zdg(&spec).unwrap();
        let d = orthogonalizing_diagonal(&z, 0).unwrap();
        let (g, dl) = (spec.gamma, spec.delta);
        assert!((d.get(1) - C64::new(0.0, g * g / dl)).norm() < 1e-15);
        assert!((d.get(2) - C64::new(0.0, dl)).norm() < 1e-15);
        assert_eq!(d.get(0), C64::new(0.0, 0.0));
        assert!(d.entries().iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn orthogonalizing_diagonal_makes_columns_orthogonal() {
        let z = build_zdg(&std_spec(8)).unwrap();
        let d = orthogonalizing_diagonal(&z, 0).unwrap();
        let v = d.add_to(&z).unwrap();
        let c1 = column(v.as_complex(), 0).unwrap();
        for j in 1..8 {
            let r = inner(&column(v.as_complex(), j).unwrap(), &c1).norm();
            assert!(r < 1e-13, "column {j}: {r}");
        }
    }

    #[test]
    fn orthogonalizing_diagonal_degenerate_column() {
        let mut m = build_zdg(&std_spec(4)).unwrap().matrix().clone();
        m[(2, 0)] = C64::new(0.0, 0.0);
        m[(0, 2)] = C64::new(0.0, 0.0);
        let z = AntiHermitianOp::new(ComplexMatrix::new(m).unwrap()).unwrap();
        assert_eq!(
            orthogonalizing_diagonal(&z, 0),
            Err(Error::DegenerateColumn { row: 2, col: 0 })
        );
    }

    #[test]
    fn zo_rescales_only_the_first_row_and_column() {
        let fam = OperatorFamily::build(&std_spec(16)).unwrap();
        for i in 1..16 {
            for j in 1..16 {
                assert_eq!(fam.zo.get(i, j), fam.z1.get(i, j));
            }
        }
        let c1 = vec_norm(&column(fam.zo.as_complex(), 0).unwrap());
        let target = spectral_norm(fam.d0.add_to(&fam.z1).unwrap().as_complex());
        assert!((c1 - target).abs() < 1e-12);
        let c = column(fam.zo.as_complex(), 0).unwrap();
        let d0 = orthogonalizing_diagonal(&fam.zo, 0).unwrap();
        let v = d0.add_to(&fam.zo).unwrap();
        for j in 1..16 {
            assert!(inner(&column(v.as_complex(), j).unwrap(), &c).norm() < 1e-13);
        }
    }

    #[test]
    fn z2_norm_attained_on_first_column() {
        let z2 = build_z2(&std_spec(64)).unwrap();
        let c1 = vec_norm(&column(z2.as_complex(), 0).unwrap());
        assert!((z2.norm() - c1).abs() <= 1e-8);
        assert_eq!(z2.get(0, 0), C64::new(0.0, 0.0));
        assert!((1..64).all(|j| z2.get(j, 0).norm() > 0.0));
    }

    #[test]
    fn base_point() {
        let b = build_b(3).unwrap();
        assert_eq!(b.values(), vec![1.0, 0.5, 1.0 / 3.0]);
        assert_eq!(b.kind(), HermitianKind::Hermitian);
        assert!(b.repeated_pair().is_none());
        assert!(build_b(1).is_err());
        assert_eq!(
            build_b_from_values(&[1.0, 0.5, 1.0]),
            Err(Error::DegenerateBase { i: 0, j: 2 })
        );
    }

    #[test]
    fn oscillation_profile_synthetic() {
        let constant = DiagonalOp::anti_hermitian(&[0.3; 16]).unwrap();
        assert_eq!(oscillation_profile(&constant, 0.5).unwrap().gap, 0.0);

        let alt: Vec<f64> = (0..16).map(|k| if k % 2 == 0 { 0.7 } else { -0.2 }).collect();
        let p = oscillation_profile(&DiagonalOp::anti_hermitian(&alt).unwrap(), 0.5).unwrap();
        assert!((p.gap - 0.9).abs() < 1e-15);
        // one-based even indices hold the zero-based odd entries
        assert_eq!(p.even(), C64::new(0.0, -0.2));
        assert_eq!(p.odd(), C64::new(0.0, 0.7));
    }

    #[test]
    fn oscillation_profile_ignores_a_boundary_layer() {
        let mut alt: Vec<f64> = (0..40).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        alt[39] = 1.0;
        alt[37] = 0.0;
        let p = oscillation_profile(&DiagonalOp::anti_hermitian(&alt).unwrap(), 0.5).unwrap();
        assert!((p.gap - 2.0).abs() < 1e-15);
    }

    #[test]
    fn oscillation_profile_errors() {
        let short = DiagonalOp::anti_hermitian(&[0.0; 7]).unwrap();
        assert!(matches!(
            oscillation_profile(&short, 0.5),
            Err(Error::InsufficientData(_))
        ));
        let d = DiagonalOp::anti_hermitian(&[0.0; 8]).unwrap();
        assert!(matches!(oscillation_profile(&d, 0.1), Err(Error::InsufficientData(_))));
        assert!(matches!(oscillation_profile(&d, 0.6), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn d0_oscillates_between_two_nonzero_limits() {
        let fam = OperatorFamily::build(&std_spec(128)).unwrap();
        let p = oscillation_profile(&fam.d0, 0.5).unwrap();
        assert!(p.gap > 0.0);
        assert!(p.even().norm() > 0.1 && p.odd().norm() > 0.1);
        let fam2 = OperatorFamily::build(&std_spec(256)).unwrap();
        let p2 = oscillation_profile(&fam2.d0, 0.5).unwrap();
        assert!((p2.gap - p.gap).abs() / p.gap < 0.01, "{} vs {}", p.gap, p2.gap);
    }

    /// Direct sum of |entry|^2 over the discarded entries up to index `cap`.
    fn tail_bound_by_summation(spec: &TruncationSpec, cap: usize) -> f64 {
        let mut s = 0.0;
        for i in 0..cap {
            for j in 0..cap {
                if i.max(j) >= spec.n {
                    s += spec.entry(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    #[test]
    fn tail_bound_matches_direct_summation() {
        for n in [2, 3, 5, 8, 13] {
            for (g, d) in [(0.5, 0.25), (0.7, 0.3)] {
                let spec = TruncationSpec::new(n, g, d).unwrap();
                let closed = tail_bound(&spec);
                let direct = tail_bound_by_summation(&spec, 400);
                assert!(
                    (closed - direct).abs() <= 1e-12 * direct.max(1e-300),
                    "n={n}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn tail_bound_decays_and_dominates_explicit_tails() {
        let mut prev = f64::INFINITY;
        for n in 2..80 {
            let b = tail_bound(&std_spec(n));
            assert!(b <= prev);
            if n % 2 == 1 {
                assert!(b < prev);
            }
            prev = b;
        }
        assert!(tail_bound(&std_spec(64)) < 1e-8);
        for n in [8, 16] {
            let big = build_zdg(&std_spec(2 * n)).unwrap();
            let mut diff = big.matrix().clone();
            for i in 0..n {
                for j in 0..n {
                    diff[(i, j)] = C64::new(0.0, 0.0);
                }
            }
            let s = spectral_norm(&ComplexMatrix::new(diff).unwrap());
            assert!(tail_bound(&std_spec(n)) >= s);
        }
    }

    #[test]
    fn constraint_flag() {
        assert!(std_spec(4).constraint_ok());
        let s = TruncationSpec::new(4, 0.6, 0.25).unwrap();
        assert!(!s.constraint_ok());
        assert_eq!(s.warnings().len(), 1);
        assert!(TruncationSpec::new(4, 1.0, 0.5).is_err());
    }
}
