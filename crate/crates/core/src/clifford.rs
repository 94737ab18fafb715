//! Spin modules and gamma matrices of the complex Clifford algebra.
//!
//! For `n = 2m` or `n = 2m + 1` the spinor space is the exterior algebra `∧W` of the
//! isotropic space `W = span{f_1, …, f_m}`, with basis the blades `f_α`, `α ⊆ {1..m}`.
//! Even `n` splits it into `S+ = ∧^even W` and `S- = ∧^odd W`; odd `n` keeps the whole
//! space on both sides. Blades are encoded as bitmasks (bit `j-1` set when `j ∈ α`) and
//! every basis is ordered by cardinality, then lexicographically.
//!
//! The generators act by
//! `γ_{2j-1} = γ(f_j) - γ(f̄_j)`, `γ_{2j} = -i(γ(f_j) + γ(f̄_j))` and, for odd `n`,
//! `γ_{2m+1} = -i·γ(f_{m+1})`, where `γ(f_j)` is left wedging by `f_j`, `γ(f̄_j)` is
//! contraction and `γ(f_{m+1})` multiplies `f_α` by `(-1)^|α|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, ExactMatrixJson};
use crate::scalar::{GaussianRational, Scalar};

/// Which part of `∧W` a spinor space covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Full,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Full => "full",
        }
    }

    /// Parity reached after one gamma matrix.
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Full => Parity::Full,
        }
    }

    /// `S+` for the given `n`: even blades, or the full space for odd `n`.
    pub fn plus(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Full
        }
    }

    /// `S-` for the given `n`.
    pub fn minus(n: usize) -> Self {
        Self::plus(n).flip()
    }

    fn admits(self, blade: u32) -> bool {
        match self {
            Parity::Even => blade.count_ones().is_multiple_of(2),
            Parity::Odd => blade.count_ones() % 2 == 1,
            Parity::Full => true,
        }
    }
}

/// A blade together with a sign, or zero.
pub type SignedBlade = Option<(i8, u32)>;

/// Basis enumeration of a spin module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorSpace {
    n: usize,
    parity: Parity,
    blades: Vec<u32>,
}

impl SpinorSpace {
    pub fn new(n: usize, parity: Parity) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if (parity == Parity::Full) != (n % 2 == 1) {
            return Err(Error::ParityMismatch {
                n,
                parity: parity.name(),
            });
        }
        let m = n / 2;
        let mut blades: Vec<u32> = (0..1u32 << m).filter(|&b| parity.admits(b)).collect();
        blades.sort_by_key(|&b| (b.count_ones(), blade_elements(b)));
        Ok(Self { n, parity, blades })
    }

    /// The whole exterior algebra `∧W`, regardless of the parity of `n`.
    fn exterior(n: usize) -> Self {
        let m = n / 2;
        let mut blades: Vec<u32> = (0..1u32 << m).collect();
        blades.sort_by_key(|&b| (b.count_ones(), blade_elements(b)));
        Self {
            n,
            parity: Parity::Full,
            blades,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.n / 2
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.blades.len()
    }

    pub fn blades(&self) -> &[u32] {
        &self.blades
    }

    pub fn index_of(&self, blade: u32) -> Option<usize> {
        self.blades.iter().position(|&b| b == blade)
    }
}

/// Dimension of `S±` (equal for both signs), `2^(m-1)` for even `n`, `2^m` for odd `n`.
pub fn spinor_dim(n: usize) -> usize {
    let m = n / 2;
    if n.is_multiple_of(2) {
        1 << (m - 1)
    } else {
        1 << m
    }
}

/// Sorted elements of a bitmask blade, 1-based.
pub fn blade_elements(blade: u32) -> Vec<u32> {
    (0..32).filter(|i| blade & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn blade_from_elements(elements: &[u32]) -> u32 {
    elements.iter().fold(0, |acc, &e| acc | (1 << (e - 1)))
}

/// `f_j ∧ f_α`: zero when `j ∈ α`, otherwise `α ∪ {j}` with the sign of moving `f_j`
/// past the elements of `α` smaller than `j`.
pub fn wedge_action(j: u32, blade: u32) -> SignedBlade {
    let bit = 1u32 << (j - 1);
    if blade & bit != 0 {
        return None;
    }
    let below = (blade & (bit - 1)).count_ones();
    Some((if below.is_multiple_of(2) { 1 } else { -1 }, blade | bit))
}

/// `f̄_j(f_α)`: zero when `j ∉ α`; if `j` is the `t`-th element, `(-1)^(t+1) f_{α∖{j}}`.
pub fn contraction_action(j: u32, blade: u32) -> SignedBlade {
    let bit = 1u32 << (j - 1);
    if blade & bit == 0 {
        return None;
    }
    let t = (blade & (bit - 1)).count_ones() + 1;
    Some((if (t + 1).is_multiple_of(2) { 1 } else { -1 }, blade & !bit))
}

fn action_matrix(space: &SpinorSpace, act: impl Fn(u32) -> SignedBlade) -> ExactMatrix {
    let dim = space.dim();
    let mut m = ExactMatrix::zeros(dim, dim);
    for (col, &b) in space.blades().iter().enumerate() {
        if let Some((sign, target)) = act(b) {
            let row = space.index_of(target).expect("blade outside the exterior algebra");
            m.set(row, col, GaussianRational::from_i64(sign as i64));
        }
    }
    m
}

/// `γ_j` acting on the whole exterior algebra `∧W`.
pub fn gamma_full(n: usize, j: usize) -> Result<ExactMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    let space = SpinorSpace::exterior(n);
    let m = n / 2;
    let minus_i = -GaussianRational::i();
    if j == 2 * m + 1 {
        let chirality = action_matrix(&space, |b| {
            Some((if b.count_ones() % 2 == 0 { 1 } else { -1 }, b))
        });
        return Ok(chirality.scale(&minus_i));
    }
    let k = j.div_ceil(2) as u32;
    let wedge = action_matrix(&space, |b| wedge_action(k, b));
    let contract = action_matrix(&space, |b| contraction_action(k, b));
    Ok(if j % 2 == 1 {
        &wedge - &contract
    } else {
        (&wedge + &contract).scale(&minus_i)
    })
}

/// `γ_j` restricted to the spin module of parity `from`, landing in `from.flip()`.
pub fn gamma(n: usize, j: usize, from: Parity) -> Result<ExactMatrix> {
    let src = SpinorSpace::new(n, from)?;
    let dst = SpinorSpace::new(n, from.flip())?;
    let full = gamma_full(n, j)?;
    let ext = SpinorSpace::exterior(n);
    let rows: Vec<usize> = dst.blades().iter().map(|&b| ext.index_of(b).unwrap()).collect();
    let cols: Vec<usize> = src.blades().iter().map(|&b| ext.index_of(b).unwrap()).collect();
    Ok(full.submatrix(&rows, &cols))
}

/// All `n` gamma matrices from the given parity.
pub fn gammas(n: usize, from: Parity) -> Result<Vec<ExactMatrix>> {
    (1..=n).map(|j| gamma(n, j, from)).collect()
}

/// Conjugate transpose for the inner product `<f_α, f_β> = δ_αβ`.
pub fn adjoint(m: &ExactMatrix) -> ExactMatrix {
    m.adjoint()
}

/// Sparse form of a gamma matrix: each column has exactly one nonzero entry.
#[derive(Clone, Debug)]
pub struct GammaPattern {
    /// `(row, value)` for each column.
    pub columns: Vec<(usize, num_complex::Complex64)>,
}

impl GammaPattern {
    pub fn from_matrix(m: &ExactMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|c| {
                let r = (0..m.rows())
                    .find(|&r| !m.get(r, c).is_zero())
                    .expect("gamma column without entry");
                (r, m.get(r, c).to_complex())
            })
            .collect();
        Self { columns }
    }
}

/// Clifford vectors `Σ_j y_j γ_j` acting between the two spin modules.
#[derive(Clone, Debug)]
pub struct CliffordVectors {
    dim_plus: usize,
    dim_minus: usize,
    /// `γ_j: S- → S+`.
    patterns: Vec<GammaPattern>,
}

impl CliffordVectors {
    pub fn new(n: usize) -> Result<Self> {
        let g = gammas(n, Parity::minus(n))?;
        Ok(Self {
            dim_plus: g[0].rows(),
            dim_minus: g[0].cols(),
            patterns: g.iter().map(GammaPattern::from_matrix).collect(),
        })
    }

    pub fn dim_plus(&self) -> usize {
        self.dim_plus
    }

    pub fn dim_minus(&self) -> usize {
        self.dim_minus
    }

    /// `out += scale · Σ_j y_j γ_j v` for `v ∈ S-`.
    #[inline]
    pub fn minus_to_plus_into(&self, y: &[f64], scale: f64, v: &[num_complex::Complex64], out: &mut [num_complex::Complex64]) {
        for (pat, &yj) in self.patterns.iter().zip(y) {
            let c = scale * yj;
            for (col, &(row, val)) in pat.columns.iter().enumerate() {
                out[row] += val * v[col] * c;
            }
        }
    }

    /// `Σ_j y_j γ_j s` for `s ∈ S+`.
    pub fn plus_to_minus(&self, y: &[f64], s: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        // On S+ the generator is −(γ_j: S- → S+)^*.
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); self.dim_minus];
        for (pat, &yj) in self.patterns.iter().zip(y) {
            for (col, &(row, val)) in pat.columns.iter().enumerate() {
                out[col] -= val.conj() * s[row] * yj;
            }
        }
        out
    }

    /// Complex coefficients: `Σ_j z_j γ_j s` for `s ∈ S+`.
    pub fn plus_to_minus_complex(&self, z: &[num_complex::Complex64], s: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); self.dim_minus];
        for (pat, &zj) in self.patterns.iter().zip(z) {
            for (col, &(row, val)) in pat.columns.iter().enumerate() {
                out[col] -= val.conj() * s[row] * zj;
            }
        }
        out
    }
}

/// JSON report entry for one gamma matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaJson {
    pub n: usize,
    pub j: usize,
    #[serde(flatten)]
    pub matrix: ExactMatrixJson,
}

impl GammaJson {
    pub fn new(n: usize, j: usize) -> Result<Self> {
        let m = gamma(n, j, Parity::plus(n))?;
        Ok(Self {
            n,
            j,
            matrix: ExactMatrixJson::from(&m),
        })
    }
}

/// Outcome of the algebraic checks for one `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraCheck {
    pub n: usize,
    pub anticommutation: bool,
    pub skew_adjoint: bool,
    pub unitary: bool,
    pub grading: bool,
    pub entry_alphabet: bool,
}

impl AlgebraCheck {
    pub fn passed(&self) -> bool {
        self.anticommutation && self.skew_adjoint && self.unitary && self.grading && self.entry_alphabet
    }
}

/// Exact check of `γ_jγ_k + γ_kγ_j = -2δ_jk`, `γ* = -γ`, `γ*γ = 1`, the grading and the
/// `{0, ±1, ±i}` entry alphabet, on the full exterior algebra and on each parity block.
pub fn check_algebra(n: usize) -> Result<AlgebraCheck> {
    let full: Vec<ExactMatrix> = (1..=n).map(|j| gamma_full(n, j)).collect::<Result<_>>()?;
    let dim = full[0].rows();
    let id = ExactMatrix::identity(dim);
    let minus_two = GaussianRational::from_i64(-2);

    let mut anticommutation = true;
    for j in 0..n {
        for k in 0..n {
            let ac = &(&full[j] * &full[k]) + &(&full[k] * &full[j]);
            let expect = if j == k { id.scale(&minus_two) } else { ExactMatrix::zeros(dim, dim) };
            anticommutation &= ac == expect;
        }
    }
    // Block form: γ_j (S∓ → S±) composed with γ_k (S± → S∓).
    let from = Parity::plus(n);
    let fwd = gammas(n, from)?;
    let back = gammas(n, from.flip())?;
    let d = fwd[0].cols();
    for j in 0..n {
        for k in 0..n {
            let ac = &(&back[j] * &fwd[k]) + &(&back[k] * &fwd[j]);
            let expect = if j == k {
                ExactMatrix::identity(d).scale(&minus_two)
            } else {
                ExactMatrix::zeros(d, d)
            };
            anticommutation &= ac == expect;
        }
    }

    let skew_adjoint = full.iter().all(|g| adjoint(g) == -g)
        && fwd.iter().zip(&back).all(|(f, b)| adjoint(f) == -b);
    let unitary = full.iter().all(|g| &adjoint(g) * g == id);
    let entry_alphabet = full.iter().all(|g| g.entries().iter().all(GaussianRational::is_unit_or_zero));

    let grading = if n.is_multiple_of(2) {
        let ext = SpinorSpace::exterior(n);
        full.iter().all(|g| {
            (0..dim).all(|r| {
                (0..dim).all(|c| {
                    g.get(r, c).is_zero()
                        || (ext.blades()[r].count_ones() + ext.blades()[c].count_ones()) % 2 == 1
                })
            })
        })
    } else {
        true
    };

    Ok(AlgebraCheck {
        n,
        anticommutation,
        skew_adjoint,
        unitary,
        grading,
        entry_alphabet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    /// Wedge `f_j` onto the front of a word and bubble-sort it, counting swaps.
    fn brute_force_wedge(j: u32, blade: u32) -> SignedBlade {
        let mut word = vec![j];
        word.extend(blade_elements(blade));
        let mut sign = 1i8;
        for i in 0..word.len() {
            for k in 0..word.len() - 1 - i {
                if word[k] == word[k + 1] {
                    return None;
                }
                if word[k] > word[k + 1] {
                    word.swap(k, k + 1);
                    sign = -sign;
                }
            }
        }
        if word.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, blade_from_elements(&word)))
    }

    #[test]
    fn spinor_space_enumeration() {
        let s = SpinorSpace::new(4, Parity::Even).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.blades(), &[0b00, 0b11]);
        let s = SpinorSpace::new(4, Parity::Odd).unwrap();
        assert_eq!(s.blades(), &[0b01, 0b10]);
        let s = SpinorSpace::new(5, Parity::Full).unwrap();
        assert_eq!(s.blades(), &[0b00, 0b01, 0b10, 0b11]);
        // card-then-lex order for m = 3: {1,2} < {1,3} < {2,3}
        let s = SpinorSpace::new(6, Parity::Even).unwrap();
        assert_eq!(s.blades(), &[0b000, 0b011, 0b101, 0b110]);
    }

    #[test]
    fn spinor_space_errors() {
        assert!(matches!(SpinorSpace::new(1, Parity::Full), Err(Error::InvalidDimension(1))));
        assert!(SpinorSpace::new(4, Parity::Full).is_err());
        assert!(SpinorSpace::new(5, Parity::Even).is_err());
    }

    #[test]
    fn dims() {
        for n in 2..=8 {
            assert_eq!(SpinorSpace::new(n, Parity::plus(n)).unwrap().dim(), spinor_dim(n));
            assert_eq!(SpinorSpace::new(n, Parity::minus(n)).unwrap().dim(), spinor_dim(n));
        }
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge_action(1, 0), Some((1, 0b1)));
        assert_eq!(wedge_action(1, 0b1), None);
        assert_eq!(wedge_action(2, 0b1), brute_force_wedge(2, 0b1));
        assert_eq!(wedge_action(2, 0b1), Some((-1, 0b11)));
    }

    #[test]
    fn wedge_matches_brute_force() {
        for j in 1..=5 {
            for blade in 0..32 {
                assert_eq!(wedge_action(j, blade), brute_force_wedge(j, blade), "j={j} blade={blade:b}");
            }
        }
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(contraction_action(1, 0b11), Some((1, 0b10)));
        assert_eq!(contraction_action(2, 0b11), Some((-1, 0b01)));
        assert_eq!(contraction_action(1, 0b10), None);
    }

    #[test]
    fn contraction_undoes_wedge() {
        // f̄_j(f_j ∧ f_α) = f_α whenever j ∉ α
        for j in 1..=4 {
            for blade in 0..16u32 {
                if let Some((s1, b1)) = wedge_action(j, blade) {
                    let (s2, b2) = contraction_action(j, b1).unwrap();
                    assert_eq!((s1 * s2, b2), (1, blade));
                }
            }
        }
    }

    #[test]
    fn gamma_one_for_n4() {
        let g1 = gamma(4, 1, Parity::Even).unwrap();
        // columns: ∅, {1,2}; rows: {1}, {2}
        assert_eq!(g1.get(0, 0), &g(1, 0));
        assert_eq!(g1.get(1, 0), &g(0, 0));
        assert_eq!(g1.get(1, 1), &g(-1, 0));
        assert_eq!(g1.get(0, 1), &g(0, 0));
    }

    #[test]
    fn gamma_last_for_odd_n() {
        let g5 = gamma_full(5, 5).unwrap();
        let s = SpinorSpace::new(5, Parity::Full).unwrap();
        let i = s.index_of(0b01).unwrap();
        assert_eq!(g5.get(i, i), &g(0, 1));
    }

    #[test]
    fn gamma_index_out_of_range() {
        assert!(matches!(gamma_full(4, 5), Err(Error::IndexOutOfRange { .. })));
        assert!(gamma_full(4, 0).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&ExactMatrix::identity(3)), ExactMatrix::identity(3));
        let g1 = gamma_full(4, 1).unwrap();
        let ig1 = g1.scale(&GaussianRational::i());
        assert_eq!(adjoint(&ig1), ig1);
    }

    #[test]
    fn algebra_holds_for_small_n() {
        for n in 2..=8 {
            let c = check_algebra(n).unwrap();
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn gamma_pattern_is_monomial() {
        let g2 = gamma(6, 2, Parity::Even).unwrap();
        let p = GammaPattern::from_matrix(&g2);
        assert_eq!(p.columns.len(), 4);
        for (c, (r, v)) in p.columns.iter().enumerate() {
            assert_eq!(g2.get(*r, c).to_complex(), *v);
        }
    }
}
