//! Harmonic maps `f(z) = Σ a_n z^n + Σ conj(b_n) conj(z)^n` as truncated series.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::grid::Grid;
use crate::Complex;

/// Threshold on `λ_f` below which the distortion ratio is declared unbounded.
pub const MIN_STRETCH_FLOOR: f64 = 1e-14;

/// A harmonic map `h + conj(g)` with `h = Σ_{n=0}^N a_n z^n` and
/// `g = Σ_{n=1}^N b_n z^n`.
///
/// `a` has `N + 1` entries (`a_0..a_N`); `b` has `N` entries (`b_1..b_N`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapFile", into = "MapFile")]
pub struct HarmonicMap {
    a: Vec<Complex>,
    b: Vec<Complex>,
}

/// On-disk layout: `{"a": [[re, im], ...], "b": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
}

impl TryFrom<MapFile> for HarmonicMap {
    type Error = Error;

    fn try_from(file: MapFile) -> Result<Self> {
        let conv = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        HarmonicMap::new(conv(file.a), conv(file.b))
    }
}

impl From<HarmonicMap> for MapFile {
    fn from(map: HarmonicMap) -> Self {
        let conv = |v: Vec<Complex>| v.into_iter().map(|c| [c.re, c.im]).collect();
        MapFile {
            a: conv(map.a),
            b: conv(map.b),
        }
    }
}

impl HarmonicMap {
    pub fn new(a: Vec<Complex>, b: Vec<Complex>) -> Result<Self> {
        if a.len() < 2 {
            return Err(invalid(format!(
                "analytic part needs coefficients a_0..a_N with N >= 1, got {} entries",
                a.len()
            )));
        }
        if b.len() + 1 != a.len() {
            return Err(invalid(format!(
                "co-analytic part must hold b_1..b_N ({} entries), got {}",
                a.len() - 1,
                b.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(invalid("map coefficients must be finite"));
        }
        Ok(Self { a, b })
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::affine(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// `f(z) = α z + β conj(z)`. Note `b_1 = conj(β)`.
    pub fn affine(alpha: Complex, beta: Complex) -> Self {
        Self {
            a: vec![Complex::new(0.0, 0.0), alpha],
            b: vec![beta.conj()],
        }
    }

    /// `f(z) ≡ c`, stored with degree 1 and vanishing linear terms.
    pub fn constant(c: Complex) -> Self {
        Self {
            a: vec![c, Complex::new(0.0, 0.0)],
            b: vec![Complex::new(0.0, 0.0)],
        }
    }

    /// Builds a map from real-world `(n, coefficient)` lists; unspecified
    /// coefficients are zero. Entries of `conj_terms` are the coefficients
    /// `c_n` of `conj(z)^n`, i.e. `b_n = conj(c_n)`.
    pub fn from_terms(
        degree: usize,
        z_terms: &[(usize, Complex)],
        conj_terms: &[(usize, Complex)],
    ) -> Result<Self> {
        let mut a = vec![Complex::new(0.0, 0.0); degree + 1];
        let mut b = vec![Complex::new(0.0, 0.0); degree];
        for &(n, c) in z_terms {
            if n > degree {
                return Err(invalid(format!("term z^{n} exceeds degree {degree}")));
            }
            a[n] += c;
        }
        for &(n, c) in conj_terms {
            if n == 0 || n > degree {
                return Err(invalid(format!("term conj(z)^{n} outside 1..={degree}")));
            }
            b[n - 1] += c.conj();
        }
        Self::new(a, b)
    }

    pub fn degree(&self) -> usize {
        self.b.len()
    }

    /// Coefficients `a_0..a_N` of `h`.
    pub fn analytic(&self) -> &[Complex] {
        &self.a
    }

    /// Coefficients `b_1..b_N` of `g` (index 0 holds `b_1`).
    pub fn co_analytic(&self) -> &[Complex] {
        &self.b
    }

    pub fn a(&self, n: usize) -> Complex {
        self.a.get(n).copied().unwrap_or_default()
    }

    /// `b_n` for `n >= 1`; zero for `n = 0` and beyond the degree.
    pub fn b(&self, n: usize) -> Complex {
        if n == 0 {
            return Complex::default();
        }
        self.b.get(n - 1).copied().unwrap_or_default()
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a: self.a.iter().map(|x| x * c).collect(),
            b: self.b.iter().map(|x| x * c).collect(),
        }
    }

    /// `|b_n| <= |a_n|` for all `n >= 1`, with relative slack `rel`.
    pub fn has_coeff_dominance(&self, rel: f64) -> bool {
        (1..=self.degree()).all(|n| self.b(n).norm() <= self.a(n).norm() * (1.0 + rel))
    }

    pub fn is_analytic(&self) -> bool {
        self.b.iter().all(|c| *c == Complex::default())
    }

    /// `f(z)`. Fails on non-finite `z` or `|z| > 1`.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        check_point(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Wirtinger derivatives and distortion data at `z`.
    pub fn derivatives(&self, z: Complex) -> Result<PointwiseData> {
        check_point(z)?;
        Ok(self.derivatives_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex) -> Complex {
        let h = horner(&self.a, z);
        // g(z) = z · Σ b_n z^{n-1}
        let g = z * horner(&self.b, z);
        h + g.conj()
    }

    pub(crate) fn derivatives_unchecked(&self, z: Complex) -> PointwiseData {
        let (hp, gp) = self.wirtinger_unchecked(z);
        PointwiseData::from_wirtinger(hp, gp.conj())
    }

    /// `(h'(z), g'(z))`.
    pub(crate) fn wirtinger_unchecked(&self, z: Complex) -> (Complex, Complex) {
        let n = self.degree();
        let mut hp = Complex::default();
        let mut gp = Complex::default();
        for k in (1..=n).rev() {
            let kf = k as f64;
            hp = hp * z + self.a[k] * kf;
            gp = gp * z + self.b[k - 1] * kf;
        }
        (hp, gp)
    }

    /// Canonical compact JSON (shortest round-trip float formatting).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("malformed map JSON: {e}")))
    }
}

fn horner(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs
        .iter()
        .rev()
        .fold(Complex::default(), |acc, c| acc * z + c)
}

fn check_point(z: Complex) -> Result<()> {
    ensure_finite("z.re", z.re)?;
    ensure_finite("z.im", z.im)?;
    if z.norm() > 1.0 + 1e-12 {
        return Err(invalid(format!(
            "point {z} lies outside the closed unit disk"
        )));
    }
    Ok(())
}

/// Pointwise distortion quantities of a harmonic map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseData {
    /// `f_z = h'(z)`.
    pub fz: Complex,
    /// `f_{z̄}`, with `conj(fzbar) = g'(z)`.
    pub fzbar: Complex,
    /// `Λ_f = |f_z| + |f_{z̄}|`.
    pub max_stretch: f64,
    /// `λ_f = ||f_z| - |f_{z̄}||`.
    pub min_stretch: f64,
    pub jacobian: f64,
    /// `|f_{z̄}| / |f_z|`, undefined where `f_z = 0`.
    pub dilatation_modulus: Option<f64>,
}

impl PointwiseData {
    pub fn from_wirtinger(fz: Complex, fzbar: Complex) -> Self {
        let p = fz.norm();
        let q = fzbar.norm();
        Self {
            fz,
            fzbar,
            max_stretch: p + q,
            min_stretch: (p - q).abs(),
            jacobian: (p - q) * (p + q),
            dilatation_modulus: (p > 0.0).then(|| q / p),
        }
    }
}

/// Outcome of a sense-preservation scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensePreservation {
    pub preserving: bool,
    pub min_jacobian: f64,
    /// Node of minimal Jacobian.
    pub witness: Complex,
}

/// True iff `J_f > tol` at every grid node.
pub fn is_sense_preserving(f: &HarmonicMap, grid: &Grid, tol: f64) -> Result<SensePreservation> {
    grid.validate()?;
    ensure_finite("tol", tol)?;
    let mut witness = Complex::default();
    let mut min_jacobian = f64::INFINITY;
    for z in grid.nodes() {
        let j = f.derivatives_unchecked(z).jacobian;
        if j < min_jacobian {
            min_jacobian = j;
            witness = z;
        }
    }
    Ok(SensePreservation {
        preserving: min_jacobian > tol,
        min_jacobian,
        witness,
    })
}

/// Quasiconformality constant estimate `max Λ_f / λ_f` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QcConstant {
    Bounded {
        k: f64,
        witness: Complex,
    },
    /// `λ_f` fell below [`MIN_STRETCH_FLOOR`] at `witness`.
    Unbounded {
        witness: Complex,
    },
}

impl QcConstant {
    pub fn value(&self) -> Option<f64> {
        match self {
            QcConstant::Bounded { k, .. } => Some(*k),
            QcConstant::Unbounded { .. } => None,
        }
    }
}

pub fn qc_constant(f: &HarmonicMap, grid: &Grid) -> Result<QcConstant> {
    grid.validate()?;
    let mut k = 1.0_f64;
    let mut witness = Complex::default();
    let mut reversing = None;
    for z in grid.nodes() {
        let d = f.derivatives_unchecked(z);
        if d.min_stretch < MIN_STRETCH_FLOOR {
            return Ok(QcConstant::Unbounded { witness: z });
        }
        if d.jacobian <= 0.0 && reversing.is_none() {
            reversing = Some(z);
        }
        let ratio = d.max_stretch / d.min_stretch;
        if ratio > k {
            k = ratio;
            witness = z;
        }
    }
    if let Some(z) = reversing {
        return Err(Error::PreconditionViolated(format!(
            "map is not sense-preserving: Jacobian <= 0 at {z}"
        )));
    }
    Ok(QcConstant::Bounded { k, witness })
}

/// Recovers `(a_n, b_n)` from Cauchy integrals of `f_z` and `conj(f_{z̄})`
/// over `|z| = r`, discretized by the `m`-node trapezoid rule.
pub fn coeff_from_contour(
    f: &HarmonicMap,
    n: usize,
    r: f64,
    m: usize,
) -> Result<(Complex, Complex)> {
    let degree = f.degree();
    if n < 1 || n > degree {
        return Err(invalid(format!(
            "coefficient index {n} outside 1..={degree}"
        )));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!(
            "contour radius must lie in (0, 1), got {r}"
        )));
    }
    if m < 4 * degree {
        return Err(invalid(format!(
            "need at least {} contour nodes, got {m}",
            4 * degree
        )));
    }
    // n a_n = (1/2πi) ∮ f_z z^{-n} dz = (1/2π) ∫ f_z(z) z^{1-n} dθ
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let power = 1 - n as i32;
    let mut re_a = Vec::with_capacity(m);
    let mut im_a = Vec::with_capacity(m);
    let mut re_b = Vec::with_capacity(m);
    let mut im_b = Vec::with_capacity(m);
    for k in 0..m {
        let z = Complex::from_polar(r, k as f64 * step);
        let (hp, gp) = f.wirtinger_unchecked(z);
        let w = z.powi(power);
        let ta = hp * w;
        let tb = gp * w;
        re_a.push(ta.re);
        im_a.push(ta.im);
        re_b.push(tb.re);
        im_b.push(tb.im);
    }
    use crate::quadrature::pairwise_sum as sum;
    let scale = 1.0 / (m as f64 * n as f64);
    let a_n = Complex::new(sum(&re_a), sum(&im_a)) * scale;
    let b_n = Complex::new(sum(&re_b), sum(&im_b)) * scale;
    Ok((a_n, b_n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_small_examples() {
        let id = HarmonicMap::identity();
        assert_eq!(id.eval(c(0.0, 0.5)).unwrap(), c(0.0, 0.5));
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        assert_abs_diff_eq!((aff.eval(c(1.0, 0.0)).unwrap() - c(1.5, 0.0)).norm(), 0.0);
        let quad = HarmonicMap::from_terms(2, &[(1, c(1.0, 0.0))], &[(2, c(0.3, 0.0))]).unwrap();
        assert_abs_diff_eq!(
            (quad.eval(c(0.5, 0.0)).unwrap() - c(0.575, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn affine_distortion_data() {
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let d = aff.derivatives(c(0.3, -0.2)).unwrap();
        assert_abs_diff_eq!(d.max_stretch, 1.5);
        assert_abs_diff_eq!(d.min_stretch, 0.5);
        assert_abs_diff_eq!(d.jacobian, 0.75);
        assert_abs_diff_eq!(d.dilatation_modulus.unwrap(), 0.5);
        let id = HarmonicMap::identity().derivatives(c(0.1, 0.1)).unwrap();
        assert_eq!(
            (id.max_stretch, id.min_stretch, id.jacobian),
            (1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn dilatation_undefined_at_critical_point() {
        let sq = HarmonicMap::from_terms(2, &[(2, c(1.0, 0.0))], &[]).unwrap();
        assert_eq!(
            sq.derivatives(c(0.0, 0.0)).unwrap().dilatation_modulus,
            None
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let id = HarmonicMap::identity();
        assert!(id.eval(c(f64::NAN, 0.0)).is_err());
        assert!(id.derivatives(c(1.5, 0.0)).is_err());
        assert!(HarmonicMap::new(vec![c(0.0, 0.0)], vec![]).is_err());
        assert!(HarmonicMap::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![]).is_err());
        assert!(
            HarmonicMap::new(vec![c(0.0, 0.0), c(f64::INFINITY, 0.0)], vec![c(0.0, 0.0)]).is_err()
        );
    }

    #[test]
    fn sense_preservation_examples() {
        let grid = Grid::new(8, 16, 0.9).unwrap();
        let id = is_sense_preserving(&HarmonicMap::identity(), &grid, 0.0).unwrap();
        assert!(id.preserving);
        assert_eq!(id.min_jacobian, 1.0);
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let s = is_sense_preserving(&aff, &grid, 0.0).unwrap();
        assert!(s.preserving);
        assert_abs_diff_eq!(s.min_jacobian, 0.75);
        let fold = HarmonicMap::affine(c(1.0, 0.0), c(1.0, 0.0));
        assert!(!is_sense_preserving(&fold, &grid, 0.0).unwrap().preserving);
    }

    #[test]
    fn qc_constant_examples() {
        let grid = Grid::new(8, 16, 0.9).unwrap();
        assert_eq!(
            qc_constant(&HarmonicMap::identity(), &grid)
                .unwrap()
                .value(),
            Some(1.0)
        );
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        assert_abs_diff_eq!(
            qc_constant(&aff, &grid).unwrap().value().unwrap(),
            3.0,
            epsilon = 1e-15
        );
        let fold = HarmonicMap::affine(c(1.0, 0.0), c(1.0, 0.0));
        assert!(matches!(
            qc_constant(&fold, &grid).unwrap(),
            QcConstant::Unbounded { .. }
        ));
        let reversing = HarmonicMap::affine(c(0.5, 0.0), c(1.0, 0.0));
        assert!(matches!(
            qc_constant(&reversing, &grid),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn contour_recovers_affine_coefficients() {
        let id = HarmonicMap::identity();
        let (a1, b1) = coeff_from_contour(&id, 1, 0.5, 256).unwrap();
        assert_abs_diff_eq!((a1 - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b1.norm(), 0.0, epsilon = 1e-12);
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.0));
        let (a1, b1) = coeff_from_contour(&aff, 1, 0.5, 256).unwrap();
        assert_abs_diff_eq!((a1 - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((b1 - c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert!(coeff_from_contour(&aff, 1, 0.5, 3).is_err());
        assert!(coeff_from_contour(&aff, 2, 0.5, 64).is_err());
    }

    #[test]
    fn json_layout() {
        let aff = HarmonicMap::affine(c(1.0, 0.0), c(0.5, 0.25));
        let text = aff.to_json();
        assert_eq!(text, r#"{"a":[[0.0,0.0],[1.0,0.0]],"b":[[0.5,-0.25]]}"#);
        assert_eq!(HarmonicMap::from_json(&text).unwrap(), aff);
        assert!(HarmonicMap::from_json(r#"{"a":[[0,0]],"b":[]}"#).is_err());
        assert!(HarmonicMap::from_json("{").is_err());
    }
}
