//! Exact and asymptotic counting of simple closed geodesics of length at
//! most L, with the totient-sum machinery behind the coprime-pair census.
//!
//! `N(L, alpha)` counts every realized geodesic: each canonical type
//! contributes three copies. The enumeration window comes from the affine
//! bound on `p + q` in terms of `L`, which in turn comes from the weakened
//! per-segment chord bounds.

use num::integer::gcd;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_collect, Mode};
use crate::formulas;
use crate::geodesic::{geodesic_length, GeodesicType};
use crate::tetra::Surface;

/// Euler's totient via trial-division factorization.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::BadInput("totient of 0 is undefined".into()));
    }
    let mut n_left = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n_left {
        if n_left % p == 0 {
            while n_left % p == 0 {
                n_left /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n_left > 1 {
        result -= result / n_left;
    }
    Ok(result)
}

/// Totients of 0..=n by sieve (index 0 unused).
pub fn totient_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for p in 2..=n {
        if phi[p] == p as u64 {
            let mut k = p;
            while k <= n {
                phi[k] -= phi[k] / p as u64;
                k += p;
            }
        }
    }
    phi
}

/// psi(x): the number of coprime pairs (p, q) with p < q and p + q <= x,
/// including (0, 1). Direct enumeration; quadratic in x.
pub fn psi_enumeration(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    *psi_enumeration_table(x).last().unwrap()
}

/// psi(y) for all y in 0..=x by one brute-force pass over all pairs,
/// bucketed by p + q.
pub fn psi_enumeration_table(x: u64) -> Vec<u64> {
    let mut by_sum = vec![0u64; x as usize + 1];
    if x >= 1 {
        by_sum[1] = 1; // (0, 1)
    }
    for q in 2..=x {
        for p in 1..q {
            if p + q > x {
                break;
            }
            if gcd(p, q) == 1 {
                by_sum[(p + q) as usize] += 1;
            }
        }
    }
    let mut acc = 0;
    by_sum
        .iter()
        .map(|&c| {
            acc += c;
            acc
        })
        .collect()
}

/// psi(y) for all y in 0..=x via one totient sieve.
pub fn psi_totient_table(x: u64) -> Vec<u64> {
    let phi = totient_sieve(x.max(1));
    let mut out = Vec::with_capacity(x as usize + 1);
    let mut acc = 0u64;
    for y in 0..=x as usize {
        acc += match y {
            0 | 2 => 0,
            1 => 1, // the (0, 1) pair; phi is odd at y = 1, 2
            _ => phi[y] / 2,
        };
        out.push(acc);
    }
    out
}

/// psi(x) by totient summation: pairs with sum y biject with the residues
/// coprime to y paired as (k, y - k), so there are phi(y)/2 of them for
/// y >= 3. The formula misreads y = 1 and y = 2 (phi is odd there); those
/// terms contribute exactly the single pair (0, 1).
pub fn psi_totient_sum(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let phi = totient_sieve(x);
    let mut total = 1u64; // the (0, 1) pair, from y = 1, 2
    for y in 3..=x as usize {
        total += phi[y] / 2;
    }
    total
}

/// psi(x), dispatching to enumeration for small x and the totient sum for
/// large x. Both routes are exact; the acceptance suite compares them.
pub fn psi(x: u64) -> u64 {
    if x <= 10_000 {
        psi_enumeration(x)
    } else {
        psi_totient_sum(x)
    }
}

/// The quadratic-growth coefficient `c(alpha)` of the count
/// `N(L, alpha) = c(alpha) L^2 + O(L ln L)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CAlpha {
    pub alpha: f64,
    pub value: f64,
}

/// Denominator `ln(...) + ln((3 pi - 3a)/(pi + 3a))` shared by `c(alpha)`
/// and the (p+q) bound; tends to ln 3 as alpha -> 0 and to 0 as
/// alpha -> pi/3.
fn log_denominator(alpha: f64) -> Result<f64> {
    Ok(formulas::short_segment_bound_log(alpha)? + formulas::cross_chord_bound_log(alpha)?)
}

pub fn c_alpha(alpha: f64) -> Result<CAlpha> {
    let d = log_denominator(alpha)?;
    let value = 27.0 / (32.0 * std::f64::consts::PI.powi(2)) / (d * d);
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvariantViolation(format!(
            "c(alpha) = {value} not positive at alpha = {alpha}"
        )));
    }
    Ok(CAlpha { alpha, value })
}

/// Every simple closed geodesic of length <= L has
/// `p + q <= (3/4)(L - 2 B_catch_weak) / (B_short_weak + B_cross_weak) + 2`;
/// returns the floor of the right-hand side.
pub fn max_pq_bound(l: f64, alpha: f64) -> Result<i64> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::BadInput(format!("L = {l} must be positive")));
    }
    let num = l - formulas::catch_chord_bound_log(alpha)? * 2.0;
    let bound = 0.75 * num / log_denominator(alpha)? + 2.0;
    Ok(bound.floor() as i64)
}

/// Lower bound for the length of the type-(p,q) geodesic:
/// `4 (p+q-2)/3 (B_short_weak + B_cross_weak) + 2 B_catch_weak`.
pub fn length_lower_bound(ty: GeodesicType, alpha: f64) -> Result<f64> {
    let w = ty.weight() as f64;
    Ok(4.0 * (w - 2.0) / 3.0 * log_denominator(alpha)?
        + 2.0 * formulas::catch_chord_bound_log(alpha)?)
}

/// Canonical coprime types with `p + q <= max_weight`, ordered by
/// (p + q, p); the deterministic enumeration order of all drivers.
pub fn canonical_types(max_weight: u32) -> Vec<GeodesicType> {
    let mut out = Vec::new();
    for w in 1..=max_weight {
        for p in 0..w {
            let q = w - p;
            if p < q && gcd(p as u64, q as u64) == 1 {
                out.push(GeodesicType::new(p, q).expect("canonical by construction"));
            }
        }
    }
    out.sort_by_key(|t| (t.weight(), t.p()));
    out
}

/// Lengths of all canonical types with `p + q <= max_weight`; the
/// data-parallel inner loop of the counting pipeline.
pub fn length_table(
    surface: &Surface,
    max_weight: u32,
    mode: Mode,
) -> Result<Vec<(GeodesicType, f64)>> {
    let types = canonical_types(max_weight);
    let rows = map_collect(mode, &types, |ty| {
        geodesic_length(surface, *ty).map(|len| (*ty, len))
    });
    rows.into_iter().collect()
}

/// One row of the counting table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CountRow {
    pub alpha: f64,
    pub l: f64,
    /// 3 x number of canonical types with length <= L.
    pub n_exact: u64,
    /// c(alpha) L^2.
    pub n_pred: f64,
    /// 3 psi(max_pq): cap implied by the (p+q) bound.
    pub n_cap: u64,
    pub max_pq: i64,
}

/// Counts geodesics of length at most `l` by enumerating all types within
/// the (p+q) bound and building each geodesic.
pub fn count_exact(surface: &Surface, l: f64) -> Result<CountRow> {
    Ok(count_rows(surface, &[l], Mode::Auto)?[0])
}

/// Counting table for several length thresholds, enumerating once up to
/// the largest bound. Deterministic for a fixed input regardless of mode.
pub fn count_rows(surface: &Surface, ls: &[f64], mode: Mode) -> Result<Vec<CountRow>> {
    let alpha = surface.alpha();
    let c = c_alpha(alpha)?.value;
    let mut bounds = Vec::with_capacity(ls.len());
    for &l in ls {
        bounds.push(max_pq_bound(l, alpha)?);
    }
    let max_bound = bounds.iter().copied().max().unwrap_or(0).max(0) as u32;
    let table = length_table(surface, max_bound, mode)?;

    let mut rows = Vec::with_capacity(ls.len());
    for (&l, &b) in ls.iter().zip(&bounds) {
        let mut n_types = 0u64;
        for (ty, len) in &table {
            if *len <= l {
                if (ty.weight() as i64) > b {
                    return Err(Error::InvariantViolation(format!(
                        "type {ty} of length {len} violates the (p+q) bound {b} at L = {l}"
                    )));
                }
                n_types += 1;
            }
        }
        let n_cap = 3 * psi(b.max(0) as u64);
        let n_exact = 3 * n_types;
        if n_exact > n_cap {
            return Err(Error::InvariantViolation(format!(
                "n_exact {n_exact} exceeds cap {n_cap} at L = {l}"
            )));
        }
        rows.push(CountRow {
            alpha,
            l,
            n_exact,
            n_pred: c * l * l,
            n_cap,
            max_pq: b,
        });
    }
    Ok(rows)
}

/// CSV header for count rows.
pub const COUNT_CSV_HEADER: &str = "alpha,L,n_exact,n_pred,n_cap,max_pq";

/// Serializes rows as CSV, deterministically (Rust's shortest round-trip
/// float formatting).
pub fn rows_to_csv(rows: &[CountRow]) -> String {
    let mut out = String::from(COUNT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.alpha, r.l, r.n_exact, r.n_pred, r.n_cap, r.max_pq
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tetra::TetraParams;
    use std::f64::consts::PI;

    #[test]
    fn totient_small_values() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(12).unwrap(), 4);
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(totient(p).unwrap(), p - 1);
        }
        assert!(totient(0).is_err());
    }

    #[test]
    fn totient_matches_gcd_census() {
        // brute-force oracle on a sample
        for n in (1..2000u64).step_by(97).chain([1u64, 2, 3, 4]) {
            let brute = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(totient(n).unwrap(), brute, "phi({n})");
        }
        let sieve = totient_sieve(500);
        for n in 1..=500u64 {
            assert_eq!(sieve[n as usize], totient(n).unwrap());
        }
    }

    #[test]
    fn phi_is_even_beyond_two() {
        let sieve = totient_sieve(10_000);
        for y in 3..=10_000usize {
            assert_eq!(sieve[y] % 2, 0, "phi({y}) must be even");
        }
        assert_eq!(sieve[1] % 2, 1);
        assert_eq!(sieve[2] % 2, 1);
    }

    #[test]
    fn psi_small_values() {
        assert_eq!(psi(1), 1); // only (0, 1)
        assert_eq!(psi(2), 1);
        assert_eq!(psi(5), 5); // (0,1),(1,2),(1,3),(1,4),(2,3)
        assert_eq!(psi_enumeration(5), 5);
        assert_eq!(psi_totient_sum(5), 5);
    }

    #[test]
    fn psi_routes_agree_on_a_sample() {
        for x in [1u64, 2, 3, 10, 97, 500, 1234] {
            assert_eq!(psi_enumeration(x), psi_totient_sum(x), "psi({x})");
        }
        let enum_t = psi_enumeration_table(800);
        let tot_t = psi_totient_table(800);
        assert_eq!(enum_t, tot_t);
    }

    #[test]
    fn c_alpha_limits_and_monotonicity() {
        let c0 = 27.0 / (32.0 * PI * PI * 3f64.ln().powi(2));
        assert!((c0 - 0.0708312873816).abs() < 1e-12);
        let near_zero = c_alpha(1e-6).unwrap().value;
        assert!((near_zero / c0 - 1.0).abs() < 1e-4);
        assert!(c_alpha(PI / 3.0 - 1e-6).unwrap().value > 1e3);
        assert!(c_alpha(0.1).unwrap().value < c_alpha(1.0).unwrap().value);
        assert!((c_alpha(PI / 6.0).unwrap().value - 0.322919123725).abs() < 1e-12);
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(PI / 3.0).is_err());
    }

    #[test]
    fn max_pq_bound_is_affine_increasing_in_l() {
        let alpha = PI / 6.0;
        let mut prev = i64::MIN;
        for l in [0.5, 1.0, 5.0, 20.0, 50.0, 135.0] {
            let b = max_pq_bound(l, alpha).unwrap();
            assert!(b >= prev);
            prev = b;
        }
        assert!(max_pq_bound(0.0, alpha).is_err());
        assert!(max_pq_bound(-1.0, alpha).is_err());
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let types = canonical_types(6);
        let weights: Vec<u32> = types.iter().map(|t| t.weight()).collect();
        let mut sorted = weights.clone();
        sorted.sort_unstable();
        assert_eq!(weights, sorted);
        assert_eq!(types.len() as u64, psi(6));
    }

    #[test]
    fn count_rows_basic_properties() {
        let s = Surface::build(TetraParams::new(PI / 6.0).unwrap()).unwrap();
        // below the shortest geodesic: zero count
        let low = count_exact(&s, 1.0).unwrap();
        assert_eq!(low.n_exact, 0);
        // counts are non-decreasing, divisible by three, and capped
        let ls = [3.0, 5.0, 10.0, 16.0, 22.0];
        let rows = count_rows(&s, &ls, Mode::Auto).unwrap();
        let mut prev = 0;
        for r in &rows {
            assert_eq!(r.n_exact % 3, 0);
            assert!(r.n_exact >= prev);
            assert!(r.n_exact <= r.n_cap);
            prev = r.n_exact;
        }
        // L = 10 captures exactly (0,1) [len 3.326] and (1,2) [len 9.249]
        assert_eq!(rows[2].n_exact, 6);
        // sequential and parallel agree byte for byte
        let rows_seq = count_rows(&s, &ls, Mode::Sequential).unwrap();
        assert_eq!(rows_to_csv(&rows), rows_to_csv(&rows_seq));
    }

    #[test]
    fn counted_lengths_respect_lvs1() {
        let s = Surface::build(TetraParams::new(PI / 6.0).unwrap()).unwrap();
        let table = length_table(&s, 8, Mode::Auto).unwrap();
        for (ty, len) in table {
            assert!(len >= length_lower_bound(ty, PI / 6.0).unwrap());
            assert!((ty.weight() as i64) <= max_pq_bound(len, PI / 6.0).unwrap());
        }
    }

    #[test]
    fn csv_header_contract() {
        assert_eq!(COUNT_CSV_HEADER, "alpha,L,n_exact,n_pred,n_cap,max_pq");
    }
}
