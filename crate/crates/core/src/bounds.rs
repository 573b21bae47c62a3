//! Edge-density bounds for deque, rique and stack layouts and the page lower
//! bounds obtained by inverting them. All arithmetic is exact integer
//! arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::LayoutKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("out of range: {0}")]
    OutOfRange(String),
}

fn check(n: u64, k: u64) -> Result<(), BoundsError> {
    if n < 3 {
        return Err(BoundsError::OutOfRange(format!("need n >= 3, got {n}")));
    }
    if k < 1 {
        return Err(BoundsError::OutOfRange(format!("need k >= 1, got {k}")));
    }
    Ok(())
}

/// Ceiling of `num / den` for a nonnegative numerator and positive denominator.
pub fn ceil_div(num: u64, den: u64) -> u64 {
    num.div_ceil(den)
}

/// Most edges an `n`-vertex graph with a `k`-deque layout can have:
/// `(2k+1)n - 5k - 1`.
pub fn max_edges_deque(n: u64, k: u64) -> Result<i64, BoundsError> {
    check(n, k)?;
    let (n, k) = (n as i128, k as i128);
    Ok(((2 * k + 1) * n - 5 * k - 1) as i64)
}

/// Most edges an `n`-vertex graph with a `k`-rique layout can have:
/// `(2n+2)k - k^2 + (n-3)`.
pub fn max_edges_rique(n: u64, k: u64) -> Result<i64, BoundsError> {
    check(n, k)?;
    let (n, k) = (n as i128, k as i128);
    Ok(((2 * n + 2) * k - k * k + (n - 3)) as i64)
}

/// Most edges of an `n`-vertex graph with a `k`-stack layout: every page is
/// outerplanar and the `n` boundary edges of the spine cycle are shared,
/// giving `n + k(n - 3)`.
pub fn max_edges_stack(n: u64, k: u64) -> Result<i64, BoundsError> {
    check(n, k)?;
    let (n, k) = (n as i128, k as i128);
    Ok((n + k * (n - 3)) as i64)
}

/// `ceil((n^2 - 3n + 2) / (4n - 10))`, the deque lower bound for `K_n`.
pub fn deque_lower_bound_kn(n: u64) -> Result<u64, BoundsError> {
    if n < 3 {
        return Err(BoundsError::OutOfRange(format!("need n >= 3, got {n}")));
    }
    Ok(ceil_div(n * n - 3 * n + 2, 4 * n - 10))
}

/// True iff `ceil((n^2-3n+2)/(4n-10)) == ceil(n/4)` for every `3 <= n <= n_max`.
pub fn check_ceiling_identity(n_max: u64) -> Result<bool, BoundsError> {
    if n_max < 3 {
        return Err(BoundsError::OutOfRange(format!("need n_max >= 3, got {n_max}")));
    }
    Ok((3..=n_max).all(|n| deque_lower_bound_kn(n).unwrap() == ceil_div(n, 4)))
}

/// Least number of pages `k >= 1` whose density bound admits `m` edges on `n`
/// vertices.
///
/// Deque and rique use their own density formulas. The rique formula is a
/// downward parabola in `k`; only the increasing branch `k <= n + 1` is
/// searched. Stack uses the outerplanar bound; queue pages are riques, so the
/// rique bound applies. `m = 0` yields 1 since a layout has at least one page.
pub fn density_lower_bound(n: u64, m: u64, kind: LayoutKind) -> Result<u64, BoundsError> {
    check(n, 1)?;
    let m = m as i64;
    let fits = |k: u64| -> i64 {
        match kind {
            LayoutKind::Deque => max_edges_deque(n, k).unwrap(),
            LayoutKind::Rique | LayoutKind::Queue => max_edges_rique(n, k).unwrap(),
            LayoutKind::Stack => max_edges_stack(n, k).unwrap(),
        }
    };
    match kind {
        LayoutKind::Deque => {
            // (2k+1)n - 5k - 1 >= m  <=>  k(2n-5) >= m - n + 1
            let need = m - n as i64 + 1;
            let k = if need <= 0 {
                1
            } else {
                ceil_div(need as u64, 2 * n - 5).max(1)
            };
            debug_assert!(fits(k) >= m && (k == 1 || fits(k - 1) < m));
            Ok(k)
        }
        LayoutKind::Stack => {
            // n + k(n-3) >= m
            let need = m - n as i64;
            if n == 3 {
                return if need <= 0 {
                    Ok(1)
                } else {
                    Err(BoundsError::OutOfRange(format!("{m} edges on 3 vertices")))
                };
            }
            Ok(if need <= 0 {
                1
            } else {
                ceil_div(need as u64, n - 3).max(1)
            })
        }
        LayoutKind::Rique | LayoutKind::Queue => (1..=n + 1)
            .find(|&k| fits(k) >= m)
            .ok_or_else(|| BoundsError::OutOfRange(format!("{m} edges exceed every rique density on {n} vertices"))),
    }
}

/// Graph family accepted by [`bounds_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Kn,
    Knn,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kn" => Ok(Family::Kn),
            "knn" => Ok(Family::Knn),
            _ => Err(format!("unknown family '{s}' (kn or knn)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxEdgesEntry {
    pub k: u64,
    pub max_edges: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub family: Family,
    /// Family parameter: `K_n` or `K_{n,n}`.
    pub n: u64,
    pub num_vertices: u64,
    pub m: Option<u64>,
    pub kind: LayoutKind,
    /// Density bound for `k = 1..=lower_bound_pages`.
    pub max_edges: Vec<MaxEdgesEntry>,
    pub lower_bound_pages: u64,
    /// Whether the closed-form `K_n` deque bound was confirmed to equal
    /// `ceil(n/4)` for this `n`.
    pub identity_checked: bool,
}

pub fn bounds_report(family: Family, n: u64, kind: LayoutKind) -> Result<BoundsReport, BoundsError> {
    let (num_vertices, m) = match family {
        Family::Kn => (n, n * n.saturating_sub(1) / 2),
        Family::Knn => (2 * n, n * n),
    };
    let lower_bound_pages = density_lower_bound(num_vertices, m, kind)?;
    let max_edges = (1..=lower_bound_pages)
        .map(|k| {
            let max_edges = match kind {
                LayoutKind::Deque => max_edges_deque(num_vertices, k),
                LayoutKind::Rique | LayoutKind::Queue => max_edges_rique(num_vertices, k),
                LayoutKind::Stack => max_edges_stack(num_vertices, k),
            }?;
            Ok(MaxEdgesEntry { k, max_edges })
        })
        .collect::<Result<_, BoundsError>>()?;
    let identity_checked = family == Family::Kn
        && kind == LayoutKind::Deque
        && deque_lower_bound_kn(n)? == ceil_div(n, 4)
        && lower_bound_pages == ceil_div(n, 4);
    Ok(BoundsReport {
        family,
        n,
        num_vertices,
        m: Some(m),
        kind,
        max_edges,
        lower_bound_pages,
        identity_checked,
    })
}
