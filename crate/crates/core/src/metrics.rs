//! Closed-form maximal ROC/AUPR scores over labeled cells, average
//! precision, curve construction with hyperbolic PR interpolation, and
//! negative downsampling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive/negative counts of one equivalence cell.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub p: u64,
    pub n: u64,
}

impl Cell {
    pub fn t(&self) -> u64 {
        self.p + self.n
    }
}

/// Cells in an externally meaningful order (partition order, or a caller's
/// chosen ranking). Every cell is non-empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCells {
    cells: Vec<Cell>,
}

impl LabeledCells {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        if cells.iter().any(|c| c.t() == 0) {
            return Err(Error::Inconsistent("empty cell (p = n = 0)".into()));
        }
        Ok(LabeledCells { cells })
    }

    /// Convenience constructor for (p, n) literals; panics on empty cells.
    pub fn from_counts(counts: &[(u64, u64)]) -> Self {
        LabeledCells::new(counts.iter().map(|&(p, n)| Cell { p, n }).collect())
            .expect("cells must be non-empty")
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total_positives(&self) -> u64 {
        self.cells.iter().map(|c| c.p).sum()
    }

    pub fn total_negatives(&self) -> u64 {
        self.cells.iter().map(|c| c.n).sum()
    }
}

/// Exact non-negative rational, kept reduced.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den); // >= 1 since den > 0
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Cells sorted by descending positive density with exact integer
/// comparisons, equal-density cells merged, and cumulative sums attached.
#[derive(Clone, Debug)]
pub struct OrderedCells {
    cells: Vec<Cell>,
    cum_p: Vec<u64>,
    cum_n: Vec<u64>,
    cum_t: Vec<u64>,
    p_total: u64,
    n_total: u64,
}

impl OrderedCells {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn total_positives(&self) -> u64 {
        self.p_total
    }

    pub fn total_negatives(&self) -> u64 {
        self.n_total
    }

    pub fn total(&self) -> u64 {
        self.p_total + self.n_total
    }

    /// Inclusive cumulative sums; index 0 gives the first cell's counts.
    fn prefix(&self, i: usize) -> (u64, u64, u64) {
        if i == 0 {
            (0, 0, 0)
        } else {
            (self.cum_p[i - 1], self.cum_n[i - 1], self.cum_t[i - 1])
        }
    }

    /// The merged, sorted cells as a `LabeledCells` (for AP evaluation in
    /// sorted order).
    pub fn as_labeled(&self) -> LabeledCells {
        LabeledCells {
            cells: self.cells.clone(),
        }
    }
}

/// Sort cells by positive density (descending, exact cross-multiplication),
/// merging cells with exactly equal densities: identical scores are
/// indistinguishable to any threshold.
///
/// Errors with a degenerate signal when there are no positives or no
/// negatives overall; the bound formulas are undefined there.
pub fn sort_cells(cells: &LabeledCells) -> Result<OrderedCells> {
    if cells.is_empty() {
        return Err(Error::Inconsistent("no cells".into()));
    }
    let p_total = cells.total_positives();
    let n_total = cells.total_negatives();
    if p_total == 0 {
        return Err(Error::NoPositives);
    }
    if n_total == 0 {
        return Err(Error::NoNegatives);
    }

    let mut sorted: Vec<Cell> = cells.cells.clone();
    // density p/t descending: compare p_a * t_b vs p_b * t_a exactly
    sorted.sort_by(|a, b| {
        let lhs = a.p as u128 * b.t() as u128;
        let rhs = b.p as u128 * a.t() as u128;
        rhs.cmp(&lhs)
    });

    let mut merged: Vec<Cell> = Vec::with_capacity(sorted.len());
    for cell in sorted {
        if let Some(last) = merged.last_mut() {
            if cell.p as u128 * last.t() as u128 == last.p as u128 * cell.t() as u128 {
                last.p += cell.p;
                last.n += cell.n;
                continue;
            }
        }
        merged.push(cell);
    }

    let mut cum_p = Vec::with_capacity(merged.len());
    let mut cum_n = Vec::with_capacity(merged.len());
    let mut cum_t = Vec::with_capacity(merged.len());
    let (mut p, mut n, mut t) = (0u64, 0u64, 0u64);
    for cell in &merged {
        p += cell.p;
        n += cell.n;
        t += cell.t();
        cum_p.push(p);
        cum_n.push(n);
        cum_t.push(t);
    }

    Ok(OrderedCells {
        cells: merged,
        cum_p,
        cum_n,
        cum_t,
        p_total,
        n_total,
    })
}

/// Maximal ROC score: the tie-aware rank statistic
/// `sum_i p_i (2N - N_i - N_{i-1}) / (2 N P)` over the descending order
/// (concordant pairs plus half-ties over `P*N`).
pub fn max_roc(oc: &OrderedCells) -> f64 {
    max_roc_rational(oc).to_f64()
}

/// `max_roc` as an exact rational.
pub fn max_roc_rational(oc: &OrderedCells) -> Ratio {
    let n_total = oc.n_total as u128;
    let mut num: u128 = 0;
    for i in 0..oc.len() {
        let (_, n_prev, _) = oc.prefix(i);
        let n_i = oc.cum_n[i];
        num += oc.cells[i].p as u128 * (2 * n_total - n_i as u128 - n_prev as u128);
    }
    Ratio::new(num, 2 * n_total * oc.p_total as u128)
}

/// Maximal AUPR score under proper (hyperbolic) interpolation:
/// `sum_i (p_i/P)(p_i/t_i)(1 + (P_{i-1}/p_i - T_{i-1}/t_i) ln(T_i/T_{i-1}))`,
/// where a `p_i = 0` term contributes 0 and the first term contributes
/// `(p_1/P)(p_1/t_1)` exactly.
pub fn max_aupr(oc: &OrderedCells) -> f64 {
    aupr_closed_form(oc.cells(), oc.p_total)
}

/// Closed-form AUPR of the properly interpolated PR curve for cells in the
/// given order (the maximum is attained on the density-sorted order).
pub(crate) fn aupr_closed_form(cells: &[Cell], p_total: u64) -> f64 {
    let p_total = p_total as f64;
    let mut sum = 0.0;
    let (mut p_prev, mut t_prev) = (0u64, 0u64);
    for cell in cells {
        let t_i = t_prev + cell.t();
        if cell.p > 0 {
            let p = cell.p as f64;
            let t = cell.t() as f64;
            let lead = (p / p_total) * (p / t);
            let term = if t_prev == 0 {
                lead
            } else {
                let slope = p_prev as f64 / p - t_prev as f64 / t;
                lead * (1.0 + slope * (t_i as f64 / t_prev as f64).ln())
            };
            sum += term;
        }
        p_prev += cell.p;
        t_prev = t_i;
    }
    sum
}

/// Average Precision over cells in the order given (AP is
/// ordering-sensitive and is not maximized by density sorting):
/// `sum_i (p_i/P) * (P_i/T_i)`.
pub fn average_precision(cells: &LabeledCells) -> Result<f64> {
    let p_total = cells.total_positives();
    if p_total == 0 {
        return Err(Error::NoPositives);
    }
    let mut sum = 0.0;
    let (mut p_cum, mut t_cum) = (0u64, 0u64);
    for cell in cells.cells() {
        p_cum += cell.p;
        t_cum += cell.t();
        if cell.p > 0 {
            sum += (cell.p as f64 / p_total as f64) * (p_cum as f64 / t_cum as f64);
        }
    }
    Ok(sum)
}

/// Certified AP upper bound (the optimal-AUPR value dominates AP under any
/// ordering), plus the AP of the sorted order as a lower witness.
#[derive(Copy, Clone, Debug, Serialize, Deserialize)]
pub struct ApBound {
    pub bound: f64,
    pub sorted_order_ap: f64,
}

pub fn max_ap_bound(oc: &OrderedCells) -> ApBound {
    let bound = max_aupr(oc);
    let sorted_order_ap =
        average_precision(&oc.as_labeled()).expect("ordered cells have positives");
    debug_assert!(sorted_order_ap <= bound + 1e-12);
    ApBound {
        bound,
        sorted_order_ap,
    }
}

/// Retain `round(P / ratio)` negatives chosen uniformly without replacement
/// across all cells (per-cell counts follow the multivariate hypergeometric
/// law); positives are untouched; cells left empty are dropped.
///
/// `ratio` is positives-per-negative: 1.0 is the 1:1 case.
pub fn downsample_negatives<R: Rng>(
    cells: &LabeledCells,
    ratio: f64,
    rng: &mut R,
) -> Result<LabeledCells> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::Inconsistent(format!(
            "downsample ratio must be positive, got {ratio}"
        )));
    }
    let p_total = cells.total_positives();
    let n_total = cells.total_negatives();
    let target = (p_total as f64 / ratio).round() as u64;
    if target > n_total {
        return Err(Error::InsufficientNegatives {
            need: target,
            have: n_total,
        });
    }
    if target == n_total {
        return Ok(cells.clone());
    }

    // Sample a uniform `target`-subset of the global negative indices; when
    // the target is large, sample the complement instead.
    let sample_complement = target > n_total / 2;
    let draws = if sample_complement {
        n_total - target
    } else {
        target
    };
    let mut picked = std::collections::HashSet::with_capacity(draws as usize);
    while (picked.len() as u64) < draws {
        picked.insert(rng.gen_range(0..n_total));
    }

    let mut kept: Vec<Cell> = Vec::with_capacity(cells.len());
    let mut offset = 0u64;
    for cell in cells.cells() {
        let in_cell = (offset..offset + cell.n)
            .filter(|i| picked.contains(i))
            .count() as u64;
        let kept_n = if sample_complement {
            cell.n - in_cell
        } else {
            in_cell
        };
        offset += cell.n;
        if cell.p > 0 || kept_n > 0 {
            kept.push(Cell {
                p: cell.p,
                n: kept_n,
            });
        }
    }
    LabeledCells::new(kept)
}

/// Base points of the optimal curves, in both ROC space `(fpr, tpr)` and PR
/// space `(recall, precision)`. PR interpolation between base points is
/// hyperbolic (classifier mixtures), never linear.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurvePoints {
    pub roc: Vec<(f64, f64)>,
    pub pr: Vec<(f64, f64)>,
    pub interpolation: String,
}

pub fn curve_points(oc: &OrderedCells) -> CurvePoints {
    let p = oc.p_total as f64;
    let n = oc.n_total as f64;
    let mut roc = Vec::with_capacity(oc.len() + 1);
    let mut pr = Vec::with_capacity(oc.len() + 1);
    roc.push((0.0, 0.0));
    // precision at zero recall: the limit of the interpolated curve
    pr.push((0.0, oc.cells[0].p as f64 / oc.cells[0].t() as f64));
    for i in 0..oc.len() {
        roc.push((oc.cum_n[i] as f64 / n, oc.cum_p[i] as f64 / p));
        pr.push((
            oc.cum_p[i] as f64 / p,
            oc.cum_p[i] as f64 / oc.cum_t[i] as f64,
        ));
    }
    CurvePoints {
        roc,
        pr,
        interpolation: "hyperbolic".to_string(),
    }
}

/// All bound values for one cell labeling, plus the curve base points they
/// were computed from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub max_roc: f64,
    pub max_aupr: f64,
    /// Certified upper bound on AP under any ordering (equals `max_aupr`).
    pub max_ap: f64,
    /// AP of the density-sorted order: a lower witness for the AP bound.
    pub ap_sorted_order: f64,
    pub curve: CurvePoints,
}

pub fn bound_report(cells: &LabeledCells) -> Result<BoundReport> {
    let oc = sort_cells(cells)?;
    let ap = max_ap_bound(&oc);
    Ok(BoundReport {
        max_roc: max_roc(&oc),
        max_aupr: max_aupr(&oc),
        max_ap: ap.bound,
        ap_sorted_order: ap.sorted_order_ap,
        curve: curve_points(&oc),
    })
}

/// Write the cells exchange format: one `p,n` row per cell.
pub fn write_cells_csv<W: std::io::Write>(cells: &LabeledCells, mut w: W) -> std::io::Result<()> {
    for cell in cells.cells() {
        writeln!(w, "{},{}", cell.p, cell.n)?;
    }
    Ok(())
}

/// Parse the cells exchange format: one `p,n` row per cell; blank lines and
/// `#` comments are skipped.
pub fn parse_cells_csv(text: &str) -> Result<LabeledCells> {
    let mut cells = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split(',');
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.map(str::trim)
                .filter(|s| !s.is_empty())
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected 'p,n' with non-negative integers, got '{trimmed}'"),
                })
        };
        let p = parse(parts.next())?;
        let n = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "expected exactly two fields".into(),
            });
        }
        cells.push(Cell { p, n });
    }
    if cells.is_empty() {
        return Err(Error::Inconsistent("no cells in input".into()));
    }
    LabeledCells::new(cells)
}
