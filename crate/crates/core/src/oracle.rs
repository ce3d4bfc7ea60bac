//! Independent brute-force verifiers: exhaustive automorphism enumeration,
//! exhaustive cell orderings, numeric PR-curve integration, and pair-counting
//! ROC. Test and audit support; never on the implementation path it checks.

use crate::canon::GeneratorSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::metrics::{Cell, LabeledCells, Ratio};

/// Budgets for the exhaustive searches.
#[derive(Copy, Clone, Debug)]
pub struct OracleBudget {
    /// Maximum node count for n! permutation searches.
    pub max_nodes: usize,
    /// Maximum cell count for ordering searches.
    pub max_cells: usize,
    /// Target absolute error of the quadrature.
    pub integration_tolerance: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 8,
            max_cells: 8,
            integration_tolerance: 1e-9,
        }
    }
}

/// Enumerate all n! permutations and return exactly those preserving the
/// edge set: the full automorphism group as an explicit list.
pub fn brute_automorphisms(g: &Graph, budget: &OracleBudget) -> Result<GeneratorSet> {
    let n = g.node_count();
    if n > budget.max_nodes {
        return Err(Error::BudgetExceeded(format!(
            "{n} nodes exceeds permutation-search budget {}",
            budget.max_nodes
        )));
    }
    let mut generators = Vec::new();
    let mut image: Vec<u32> = (0..n as u32).collect();
    permute_all(&mut image, 0, &mut |image| {
        let pi = Permutation::new(image.to_vec()).expect("generated images are bijections");
        if pi.is_automorphism(g) {
            generators.push(pi);
        }
    });
    Ok(GeneratorSet { generators })
}

fn permute_all(items: &mut [u32], start: usize, visit: &mut impl FnMut(&[u32])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute_all(items, start + 1, visit);
        items.swap(start, i);
    }
}

/// Multiply generators to closure, returning every element of the generated
/// group (identity included). Errs when the group exceeds `limit`.
pub fn generated_group(gens: &GeneratorSet, n: usize, limit: usize) -> Result<Vec<Permutation>> {
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    let mut queue = vec![Permutation::identity(n)];
    seen.insert(queue[0].image().to_vec());
    let mut i = 0;
    while i < queue.len() {
        let cur = queue[i].clone();
        i += 1;
        for gen in &gens.generators {
            let next = gen.compose(&cur);
            if seen.insert(next.image().to_vec()) {
                if seen.len() > limit {
                    return Err(Error::BudgetExceeded(format!(
                        "group closure exceeds {limit} elements"
                    )));
                }
                queue.push(next);
            }
        }
    }
    Ok(queue)
}

/// Brute-force colored-isomorphism check: some bijection maps edges to edges
/// and preserves colors.
pub fn brute_colored_isomorphic(
    g1: &Graph,
    c1: &crate::canon::Coloring,
    g2: &Graph,
    c2: &crate::canon::Coloring,
    budget: &OracleBudget,
) -> Result<bool> {
    if g1.node_count() != g2.node_count()
        || g1.edge_count() != g2.edge_count()
        || g1.directed() != g2.directed()
    {
        return Ok(false);
    }
    let n = g1.node_count();
    if n > budget.max_nodes {
        return Err(Error::BudgetExceeded(format!(
            "{n} nodes exceeds permutation-search budget {}",
            budget.max_nodes
        )));
    }
    let mut image: Vec<u32> = (0..n as u32).collect();
    let mut found = false;
    permute_all(&mut image, 0, &mut |image| {
        if found {
            return;
        }
        let colors_ok = (0..n as u32).all(|v| c1.color(v) == c2.color(image[v as usize]));
        if !colors_ok {
            return;
        }
        let edges_ok = g1.edges().iter().all(|&(a, b)| {
            let p = crate::graph::PairRef::new(
                image[a as usize],
                image[b as usize],
                g2.directed(),
            );
            g2.has_edge(p.a, p.b)
        });
        if edges_ok {
            found = true;
        }
    });
    Ok(found)
}

/// Which curve functional an ordering is scored by.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum OrderingMetric {
    Roc,
    Aupr,
    Ap,
}

impl std::str::FromStr for OrderingMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roc" => Ok(OrderingMetric::Roc),
            "aupr" => Ok(OrderingMetric::Aupr),
            "ap" => Ok(OrderingMetric::Ap),
            other => Err(Error::Inconsistent(format!("unknown metric '{other}'"))),
        }
    }
}

/// Result of an exhaustive ordering search.
#[derive(Clone, Debug)]
pub struct BestOrdering {
    pub value: f64,
    /// Exact value when the metric admits rational arithmetic (ROC).
    pub exact: Option<Ratio>,
    /// Indices into the input cells, best-first.
    pub order: Vec<usize>,
}

/// Evaluate the metric's curve under every permutation of the cells and
/// return the maximum. ROC is evaluated by exact pair counting, AUPR by
/// numeric integration of the properly interpolated curve, AP by the
/// rightmost-precision sum.
pub fn best_ordering_exhaustive(
    cells: &LabeledCells,
    metric: OrderingMetric,
    budget: &OracleBudget,
) -> Result<BestOrdering> {
    let k = cells.len();
    if k > budget.max_cells {
        return Err(Error::BudgetExceeded(format!(
            "{k} cells exceeds ordering-search budget {}",
            budget.max_cells
        )));
    }
    if cells.total_positives() == 0 {
        return Err(Error::NoPositives);
    }
    if metric == OrderingMetric::Roc && cells.total_negatives() == 0 {
        return Err(Error::NoNegatives);
    }

    let base = cells.cells();
    let mut order: Vec<u32> = (0..k as u32).collect();
    let mut best: Option<BestOrdering> = None;
    let mut scratch: Vec<Cell> = Vec::with_capacity(k);
    let tol = budget.integration_tolerance;

    let mut err: Option<Error> = None;
    permute_all(&mut order, 0, &mut |order| {
        if err.is_some() {
            return;
        }
        scratch.clear();
        scratch.extend(order.iter().map(|&i| base[i as usize]));
        let (value, exact) = match metric {
            OrderingMetric::Roc => match roc_pair_count(&scratch) {
                Ok(r) => (r.to_f64(), Some(r)),
                Err(e) => {
                    err = Some(e);
                    return;
                }
            },
            OrderingMetric::Aupr => match aupr_numeric(&scratch, tol) {
                Ok(v) => (v, None),
                Err(e) => {
                    err = Some(e);
                    return;
                }
            },
            OrderingMetric::Ap => (ap_sum(&scratch), None),
        };
        let improves = match &best {
            None => true,
            Some(b) => match (&exact, &b.exact) {
                (Some(x), Some(y)) => x > y,
                _ => value > b.value,
            },
        };
        if improves {
            best = Some(BestOrdering {
                value,
                exact,
                order: order.iter().map(|&i| i as usize).collect(),
            });
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(best.expect("at least one ordering"))
}

/// Rightmost-precision AP sum for a given order, written out independently
/// of the metrics module.
fn ap_sum(cells: &[Cell]) -> f64 {
    let p_total: u64 = cells.iter().map(|c| c.p).sum();
    let (mut p_cum, mut t_cum) = (0u64, 0u64);
    let mut sum = 0.0;
    for c in cells {
        p_cum += c.p;
        t_cum += c.t();
        if c.p > 0 {
            sum += (c.p as f64 / p_total as f64) * (p_cum as f64 / t_cum as f64);
        }
    }
    sum
}

/// Tie-aware rank-statistic ROC for cells in the given order, as an exact
/// rational: (2 * concordant + ties) / (2 * P * N).
pub fn roc_pair_count(cells: &[Cell]) -> Result<Ratio> {
    let p_total: u128 = cells.iter().map(|c| c.p as u128).sum();
    let n_total: u128 = cells.iter().map(|c| c.n as u128).sum();
    if p_total == 0 {
        return Err(Error::NoPositives);
    }
    if n_total == 0 {
        return Err(Error::NoNegatives);
    }
    let mut num: u128 = 0;
    let mut n_seen: u128 = 0;
    for c in cells {
        n_seen += c.n as u128;
        // positives here beat all negatives ranked below; ties count half
        num += 2 * c.p as u128 * (n_total - n_seen) + c.p as u128 * c.n as u128;
    }
    Ok(Ratio::new(num, 2 * p_total * n_total))
}

/// Area under the properly interpolated PR curve for cells in the given
/// order, by adaptive Simpson quadrature over each classifier-mixture
/// segment. The per-segment budget is `tol / segments`.
pub fn aupr_numeric(cells: &[Cell], tol: f64) -> Result<f64> {
    let p_total: u64 = cells.iter().map(|c| c.p).sum();
    if p_total == 0 {
        return Err(Error::NoPositives);
    }
    let segments = cells.iter().filter(|c| c.p > 0).count().max(1);
    let seg_tol = tol / segments as f64;

    let mut area = 0.0;
    let (mut p_prev, mut t_prev) = (0u64, 0u64);
    for c in cells {
        if c.p > 0 {
            let p0 = p_prev as f64;
            let t0 = t_prev as f64;
            let p = c.p as f64;
            let t = c.t() as f64;
            // precision along the mixture; at t0 = 0 the alpha -> 0 limit is p/t
            let f = |alpha: f64| -> f64 {
                let denom = t0 + alpha * t;
                if denom == 0.0 {
                    p / t
                } else {
                    (p0 + alpha * p) / denom
                }
            };
            let integral = adaptive_simpson(&f, 0.0, 1.0, seg_tol);
            area += (p / p_total as f64) * integral;
        }
        p_prev += c.p;
        t_prev += c.t();
    }
    Ok(area)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fb, fm, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
            + simpson_step(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig_residual;
    use crate::metrics::{max_aupr, max_roc_rational, sort_cells};

    #[test]
    fn brute_fig_has_eight_automorphisms() {
        let g = fig_residual();
        let group = brute_automorphisms(&g, &OracleBudget::default()).unwrap();
        assert_eq!(group.generators.len(), 8);
    }

    #[test]
    fn brute_directed_two_cycle() {
        let g = Graph::from_edges(2, true, false, [(0, 1), (1, 0)]).unwrap();
        let group = brute_automorphisms(&g, &OracleBudget::default()).unwrap();
        assert_eq!(group.generators.len(), 2);
    }

    #[test]
    fn brute_path_p3() {
        let g = Graph::from_edges(3, false, false, [(0, 1), (1, 2)]).unwrap();
        let group = brute_automorphisms(&g, &OracleBudget::default()).unwrap();
        assert_eq!(group.generators.len(), 2);
    }

    #[test]
    fn brute_budget_refusal() {
        let g = Graph::from_edges(9, false, false, [(0, 1)]).unwrap();
        assert!(matches!(
            brute_automorphisms(&g, &OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn appendix_ap_prefers_listed_order() {
        let cells = LabeledCells::from_counts(&[(10, 0), (2, 2), (9, 7)]);
        let best = best_ordering_exhaustive(&cells, OrderingMetric::Ap, &OracleBudget::default())
            .unwrap();
        assert_eq!(best.order, vec![0, 1, 2]);
        assert!((best.value - 0.858).abs() < 5e-4);
    }

    #[test]
    fn roc_best_order_is_density_sorted() {
        let cells = LabeledCells::from_counts(&[(1, 5), (4, 1), (2, 2)]);
        let best = best_ordering_exhaustive(&cells, OrderingMetric::Roc, &OracleBudget::default())
            .unwrap();
        let oc = sort_cells(&cells).unwrap();
        assert_eq!(best.exact.unwrap(), max_roc_rational(&oc));
    }

    #[test]
    fn single_cell_unique_ordering() {
        let cells = LabeledCells::from_counts(&[(3, 4)]);
        for metric in [OrderingMetric::Roc, OrderingMetric::Aupr, OrderingMetric::Ap] {
            let best =
                best_ordering_exhaustive(&cells, metric, &OracleBudget::default()).unwrap();
            assert_eq!(best.order, vec![0]);
            let expected = match metric {
                OrderingMetric::Roc => 0.5,
                _ => 3.0 / 7.0,
            };
            assert!((best.value - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn roc_pair_count_basics() {
        assert_eq!(
            roc_pair_count(&[Cell { p: 1, n: 1 }]).unwrap(),
            Ratio::new(1, 2)
        );
        assert_eq!(
            roc_pair_count(&[Cell { p: 1, n: 0 }, Cell { p: 0, n: 1 }]).unwrap(),
            Ratio::new(1, 1)
        );
    }

    #[test]
    fn aupr_numeric_matches_closed_form_fig() {
        let cells = [Cell { p: 2, n: 2 }, Cell { p: 1, n: 3 }];
        let numeric = aupr_numeric(&cells, 1e-9).unwrap();
        let closed = max_aupr(&sort_cells(&LabeledCells::new(cells.to_vec()).unwrap()).unwrap());
        assert!((numeric - closed).abs() < 1e-9, "{numeric} vs {closed}");
    }

    #[test]
    fn aupr_numeric_limits() {
        assert!((aupr_numeric(&[Cell { p: 3, n: 9 }], 1e-9).unwrap() - 0.25).abs() < 1e-9);
        let sep = [Cell { p: 5, n: 0 }, Cell { p: 0, n: 7 }];
        assert!((aupr_numeric(&sep, 1e-9).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn generated_group_budget() {
        let g = fig_residual();
        let gens = brute_automorphisms(&g, &OracleBudget::default()).unwrap();
        assert!(matches!(
            generated_group(&gens, 6, 4),
            Err(Error::BudgetExceeded(_))
        ));
        assert_eq!(generated_group(&gens, 6, 100).unwrap().len(), 8);
    }
}
