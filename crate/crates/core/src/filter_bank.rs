//! Interpolation filter derivation.
//!
//! A filter for fractional displacement `s` holds `N` taps `h_1..h_N`, where
//! tap `i` (1-based) weights the sample at integer offset `i - N/2` from the
//! interpolation anchor. At `s = 0` every filter is the unit impulse at tap
//! `N/2`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Linear interpolation, rows are taps, columns multiply `s^0, s^1`.
const B_LIN: [[f64; 2]; 2] = [[1.0, -1.0], [0.0, 1.0]];

/// Cubic interpolation, scaled by [`B_CUB_SCALE`].
const B_CUB: [[f64; 4]; 4] = [
    [0.0, -3.0, 6.0, -3.0],
    [4.0, 0.0, -9.0, 5.0],
    [0.0, 3.0, 6.0, -5.0],
    [0.0, 0.0, -3.0, 3.0],
];
const B_CUB_SCALE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Polynomial,
    WindowedSinc,
}

impl FilterKind {
    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Polynomial => "poly",
            FilterKind::WindowedSinc => "sinc",
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for FilterKind {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poly" | "polynomial" => Ok(FilterKind::Polynomial),
            "sinc" | "windowed-sinc" => Ok(FilterKind::WindowedSinc),
            other => Err(Error::config(format!(
                "unknown filter kind `{other}` (expected `poly` or `sinc`)"
            ))),
        }
    }
}

/// Human readable list of the supported (kind, taps) combinations.
pub const SUPPORTED_MATRIX: &str = "poly: N in {2, 4}; sinc: even N >= 2";

/// A validated filter family and length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterSpec {
    kind: FilterKind,
    taps: usize,
    normalize: bool,
}

impl FilterSpec {
    /// Builds a spec, rejecting odd lengths and polynomial lengths other
    /// than 2 and 4. `normalize` only affects windowed-sinc filters.
    pub fn new(kind: FilterKind, taps: usize, normalize: bool) -> Result<Self> {
        check_taps(kind, taps)?;
        Ok(FilterSpec {
            kind,
            taps,
            normalize: normalize && kind == FilterKind::WindowedSinc,
        })
    }

    pub fn polynomial(taps: usize) -> Result<Self> {
        Self::new(FilterKind::Polynomial, taps, false)
    }

    /// Normalized windowed sinc.
    pub fn sinc(taps: usize) -> Result<Self> {
        Self::new(FilterKind::WindowedSinc, taps, true)
    }

    /// Default family for a filter length: polynomial for 2 and 4 taps,
    /// normalized windowed sinc otherwise.
    pub fn for_taps(taps: usize) -> Result<Self> {
        match taps {
            2 | 4 => Self::polynomial(taps),
            _ => Self::sinc(taps),
        }
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn normalize(&self) -> bool {
        self.normalize
    }

    /// Derives the filter for fraction `s`.
    pub fn derive(&self, s: f64) -> Filter {
        check_fraction(s).expect("fraction outside [0, 1)");
        let mut coefficients = vec![0.0; self.taps];
        match self.kind {
            FilterKind::Polynomial => polynomial_taps(s, &mut coefficients),
            FilterKind::WindowedSinc => sinc_taps(s, self.normalize, &mut coefficients),
        }
        Filter {
            coefficients,
            fraction: s,
        }
    }
}

fn check_taps(kind: FilterKind, taps: usize) -> Result<()> {
    let ok = match kind {
        FilterKind::Polynomial => taps == 2 || taps == 4,
        FilterKind::WindowedSinc => taps >= 2 && taps.is_multiple_of(2),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(format!(
            "unsupported {kind} filter length {taps} (supported: {SUPPORTED_MATRIX})"
        )))
    }
}

fn check_fraction(s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::config(format!("fraction {s} outside [0, 1)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub coefficients: Vec<f64>,
    pub fraction: f64,
}

impl Filter {
    pub fn taps(&self) -> usize {
        self.coefficients.len()
    }

    pub fn sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }
}

/// `h = B s` with `s = [1, s, ..., s^(N-1)]`, for `N` in {2, 4}.
pub fn derive_polynomial_filter(taps: usize, s: f64) -> Result<Filter> {
    check_taps(FilterKind::Polynomial, taps)?;
    check_fraction(s)?;
    Ok(FilterSpec::polynomial(taps)?.derive(s))
}

/// Cosine-windowed sinc, `h_i = cos((s - k_i) pi / N) sinc(s - k_i)` with
/// `k_i = i - N/2`. With `normalize` the taps are rescaled to unit sum.
pub fn derive_sinc_filter(taps: usize, s: f64, normalize: bool) -> Result<Filter> {
    check_taps(FilterKind::WindowedSinc, taps)?;
    check_fraction(s)?;
    Ok(FilterSpec::new(FilterKind::WindowedSinc, taps, normalize)?.derive(s))
}

fn polynomial_taps(s: f64, out: &mut [f64]) {
    let powers = [1.0, s, s * s, s * s * s];
    match out.len() {
        2 => mat_vec(&B_LIN, &powers[..2], 1.0, out),
        4 => mat_vec(&B_CUB, &powers, B_CUB_SCALE, out),
        n => unreachable!("polynomial filter with {n} taps"),
    }
}

fn mat_vec<const N: usize>(m: &[[f64; N]; N], v: &[f64], scale: f64, out: &mut [f64]) {
    for (row, h) in m.iter().zip(out.iter_mut()) {
        let dot: f64 = row.iter().zip(v).map(|(b, p)| b * p).sum();
        *h = scale * dot;
    }
}

fn sinc_taps(s: f64, normalize: bool, out: &mut [f64]) {
    let n = out.len();
    let half = (n / 2) as f64;
    for (i, h) in out.iter_mut().enumerate() {
        let kappa = (i + 1) as f64 - half;
        let u = s - kappa;
        *h = (u * PI / n as f64).cos() * sinc(u);
    }
    if normalize {
        let sum: f64 = out.iter().sum();
        assert!(sum != 0.0, "windowed sinc taps sum to zero");
        out.iter_mut().for_each(|h| *h /= sum);
    }
}

/// Normalized sinc, `sin(pi u) / (pi u)`, exactly 1 at 0 and exactly 0 at
/// the other integers.
pub fn sinc(u: f64) -> f64 {
    let a = u.abs();
    if a == 0.0 {
        1.0
    } else if a.fract() == 0.0 {
        0.0
    } else {
        (PI * a).sin() / (PI * a)
    }
}

/// All filters of one family for the fractions `q / delta`, `q < delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterTable {
    spec: FilterSpec,
    delta: u32,
    filters: Vec<Filter>,
}

impl FilterTable {
    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    /// Taps for quantized fraction index `q`.
    #[inline]
    pub fn taps_for(&self, q: u32) -> &[f64] {
        &self.filters[q as usize].coefficients
    }

    pub fn coefficient_count(&self) -> usize {
        self.filters.iter().map(Filter::taps).sum()
    }
}

/// Fraction represented by index `q` of a table with `delta` entries.
#[inline]
pub fn table_fraction(q: u32, delta: u32) -> f64 {
    q as f64 / delta as f64
}

pub fn build_filter_table(spec: FilterSpec, delta: u32) -> Result<FilterTable> {
    if delta == 0 {
        return Err(Error::config("filter table needs delta >= 1"));
    }
    let filters = (0..delta)
        .map(|q| spec.derive(table_fraction(q, delta)))
        .collect();
    Ok(FilterTable {
        spec,
        delta,
        filters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [(FilterKind, usize); 6] = [
        (FilterKind::Polynomial, 2),
        (FilterKind::Polynomial, 4),
        (FilterKind::WindowedSinc, 2),
        (FilterKind::WindowedSinc, 4),
        (FilterKind::WindowedSinc, 8),
        (FilterKind::WindowedSinc, 12),
    ];

    /// Keys cubic convolution kernel with a = -0.75, an independent closed
    /// form of the 4-tap polynomial filter.
    fn keys(x: f64) -> f64 {
        let a = -0.75;
        let x = x.abs();
        if x <= 1.0 {
            (a + 2.0) * x.powi(3) - (a + 3.0) * x * x + 1.0
        } else if x < 2.0 {
            a * x.powi(3) - 5.0 * a * x * x + 8.0 * a * x - 4.0 * a
        } else {
            0.0
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(
            derive_polynomial_filter(2, 0.0).unwrap().coefficients,
            [1.0, 0.0]
        );
        assert_eq!(
            derive_polynomial_filter(2, 0.5).unwrap().coefficients,
            [0.5, 0.5]
        );
        assert_eq!(
            derive_polynomial_filter(4, 0.0).unwrap().coefficients,
            [0.0, 1.0, 0.0, 0.0]
        );
        assert_eq!(
            derive_polynomial_filter(4, 0.5).unwrap().coefficients,
            [-0.09375, 0.59375, 0.59375, -0.09375]
        );
    }

    #[test]
    fn cubic_matches_keys_kernel() {
        for k in 0..1000 {
            let s = k as f64 / 1000.0;
            let h = derive_polynomial_filter(4, s).unwrap();
            for (i, &hi) in h.coefficients.iter().enumerate() {
                let offset = i as f64 - 1.0;
                assert!((hi - keys(s - offset)).abs() < 1e-12, "s={s} i={i}");
            }
        }
    }

    #[test]
    fn polynomial_rejects_other_lengths() {
        for n in [0, 1, 3, 6, 8] {
            let err = derive_polynomial_filter(n, 0.2).unwrap_err();
            assert!(err.to_string().contains("{2, 4}"), "{err}");
        }
    }

    #[test]
    fn sinc_rejects_odd_lengths() {
        assert!(derive_sinc_filter(7, 0.1, true).is_err());
        assert!(derive_sinc_filter(0, 0.1, true).is_err());
    }

    #[test]
    fn fraction_out_of_range() {
        assert!(derive_sinc_filter(8, 1.0, true).is_err());
        assert!(derive_polynomial_filter(4, -0.1).is_err());
    }

    #[test]
    fn sinc_examples() {
        for normalize in [false, true] {
            let h = derive_sinc_filter(8, 0.0, normalize).unwrap();
            let mut expected = [0.0; 8];
            expected[3] = 1.0;
            assert_eq!(h.coefficients, expected);
        }
        assert_eq!(
            derive_sinc_filter(2, 0.5, true).unwrap().coefficients,
            [0.5, 0.5]
        );
        let h = derive_sinc_filter(8, 0.5, true).unwrap().coefficients;
        for i in 0..8 {
            assert!((h[i] - h[7 - i]).abs() < 1e-12);
        }
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raw_sinc_matches_direct_formula() {
        let s = 0.3;
        let h = derive_sinc_filter(8, s, false).unwrap().coefficients;
        for (i, hi) in h.iter().enumerate() {
            let kappa = (i + 1) as f64 - 4.0;
            let u = s - kappa;
            let expected = ((u * PI) / 8.0).cos() * (PI * u).sin() / (PI * u);
            assert!((hi - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_at_zero_for_all_kinds() {
        for (kind, n) in KINDS {
            let h = FilterSpec::new(kind, n, true).unwrap().derive(0.0);
            for (i, &hi) in h.coefficients.iter().enumerate() {
                let expected = if i + 1 == n / 2 { 1.0 } else { 0.0 };
                assert_eq!(hi, expected, "{kind} N={n}");
            }
        }
    }

    #[test]
    fn polynomial_shift_consistency_at_one() {
        let mut h = [0.0; 4];
        polynomial_taps(1.0, &mut h);
        assert_eq!(h, [0.0, 0.0, 1.0, 0.0]);
        let mut h = [0.0; 2];
        polynomial_taps(1.0, &mut h);
        assert_eq!(h, [0.0, 1.0]);
    }

    #[test]
    fn palindromic_at_half() {
        for (kind, n) in KINDS {
            for normalize in [false, true] {
                let h = FilterSpec::new(kind, n, normalize).unwrap().derive(0.5);
                let c = &h.coefficients;
                for i in 0..n {
                    assert!((c[i] - c[n - 1 - i]).abs() < 1e-12, "{kind} N={n}");
                }
            }
        }
    }

    #[test]
    fn table_sizes_and_entries() {
        let t = build_filter_table(FilterSpec::sinc(8).unwrap(), 64).unwrap();
        assert_eq!(t.coefficient_count(), 512);
        assert_eq!(t.filters().len(), 64);

        let t = build_filter_table(FilterSpec::polynomial(2).unwrap(), 1).unwrap();
        assert_eq!(t.filters().len(), 1);
        assert_eq!(t.taps_for(0), [1.0, 0.0]);

        let t = build_filter_table(FilterSpec::polynomial(4).unwrap(), 4).unwrap();
        assert_eq!(
            t.taps_for(2),
            derive_polynomial_filter(4, 0.5)
                .unwrap()
                .coefficients
                .as_slice()
        );

        assert!(build_filter_table(FilterSpec::sinc(8).unwrap(), 0).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(
            "poly".parse::<FilterKind>().unwrap(),
            FilterKind::Polynomial
        );
        assert_eq!(
            "SINC".parse::<FilterKind>().unwrap(),
            FilterKind::WindowedSinc
        );
        assert!("lanczos".parse::<FilterKind>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn partition_of_unity(s in 0.0f64..1.0, idx in 0usize..6) {
                let (kind, n) = KINDS[idx];
                let h = FilterSpec::new(kind, n, true).unwrap().derive(s);
                prop_assert!((h.sum() - 1.0).abs() < 1e-12);
            }

            #[test]
            fn table_matches_direct(delta in 1u32..130, idx in 0usize..6) {
                let (kind, n) = KINDS[idx];
                let spec = FilterSpec::new(kind, n, true).unwrap();
                let t = build_filter_table(spec, delta).unwrap();
                for q in 0..delta {
                    let direct = spec.derive(q as f64 / delta as f64);
                    prop_assert_eq!(t.taps_for(q), direct.coefficients.as_slice());
                }
            }
        }
    }
}
