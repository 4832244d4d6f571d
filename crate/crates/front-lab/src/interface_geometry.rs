//! Level-set extraction and interface measurements: the three set distances
//! (closest pair, the min-of-sups distance, Hausdorff), global mean-speed
//! estimation from interface histories, planarity fits, polyline
//! simplification and the transition-front certification table.

use crate::numerics::fit_line;
use crate::rd_engine::ScalarField;
use crate::{FrontLabError, Result};

/// A level set `Γ = {u = λ}` at one time: sub-cell accurate points, with
/// optional segment connectivity for polylines.
#[derive(Debug, Clone)]
pub struct InterfaceSet {
    pub t: f64,
    pub level: f64,
    pub points: Vec<[f64; 2]>,
    pub segments: Vec<[usize; 2]>,
}

impl InterfaceSet {
    pub fn from_points(t: f64, level: f64, points: Vec<[f64; 2]>) -> Self {
        InterfaceSet { t, level, points, segments: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Translate every point (used to map comoving-frame extractions into
    /// the lab frame).
    pub fn translated(&self, dx: f64, dy: f64) -> InterfaceSet {
        let mut out = self.clone();
        for p in &mut out.points {
            p[0] += dx;
            p[1] += dy;
        }
        out
    }

    /// Distance from a point to the set: to the segment polyline when
    /// connectivity is present, to the point cloud otherwise.
    pub fn distance_to_point(&self, x: f64, y: f64) -> f64 {
        if self.segments.is_empty() {
            self.points
                .iter()
                .map(|p| ((p[0] - x).powi(2) + (p[1] - y).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        } else {
            self.segments
                .iter()
                .map(|s| point_segment_distance(x, y, self.points[s[0]], self.points[s[1]]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

fn point_segment_distance(x: f64, y: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x - a[0]) * dx + (y - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    let (px, py) = (a[0] + t * dx, a[1] + t * dy);
    ((x - px).powi(2) + (y - py).powi(2)).sqrt()
}

/// Extract `{u = λ}` with sub-cell accuracy.
///
/// 1D: linear interpolation at every sign change of `u - λ`. 2D:
/// marching squares with linear edge interpolation, cells scanned
/// row-major (deterministic ordering). Returns an empty set when `u - λ`
/// has constant sign.
pub fn extract_level_set(u: &ScalarField, level: f64) -> InterfaceSet {
    assert!(level > 0.0 && level < 1.0, "level must lie in (0,1)");
    if u.dim == 1 {
        let mut pts = Vec::new();
        for i in 0..u.nx - 1 {
            let (a, b) = (u.values[i] - level, u.values[i + 1] - level);
            if a == 0.0 {
                pts.push([u.x1(i), 0.0]);
            } else if a * b < 0.0 {
                let s = a / (a - b);
                pts.push([u.x1(i) + s * u.h, 0.0]);
            }
        }
        if u.values[u.nx - 1] == level {
            pts.push([u.x1(u.nx - 1), 0.0]);
        }
        return InterfaceSet::from_points(u.t, level, pts);
    }
    marching_squares(u, level)
}

fn marching_squares(u: &ScalarField, level: f64) -> InterfaceSet {
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut segments: Vec<[usize; 2]> = Vec::new();
    let nx = u.nx;
    // Edge-point cache so shared cell edges reuse one point index.
    // Key: (node index, axis): axis 0 = edge to (i+1,j), 1 = edge to (i,j+1).
    let mut cache: std::collections::HashMap<(usize, u8), usize> = std::collections::HashMap::new();

    for j in 0..u.ny - 1 {
        for i in 0..u.nx - 1 {
            let k = i + j * nx;
            let corners = [k, k + 1, k + nx, k + 1 + nx];
            let mut code = 0usize;
            for (bit, &c) in corners.iter().enumerate() {
                if u.values[c] > level {
                    code |= 1 << bit;
                }
            }
            if code == 0 || code == 15 {
                continue;
            }
            // Cell edges: 0 bottom, 1 right, 2 top, 3 left; each described
            // by (lower node, axis).
            let edge_keys = [(k, 0u8), (k + 1, 1u8), (k + nx, 0u8), (k, 1u8)];
            let mut e = [None; 4];
            for (slot, &(kk, axis)) in edge_keys.iter().enumerate() {
                let k2 = if axis == 0 { kk + 1 } else { kk + nx };
                let (a, b) = (u.values[kk] - level, u.values[k2] - level);
                if a == 0.0 && b == 0.0 || a * b > 0.0 {
                    continue;
                }
                let idx = *cache.entry((kk, axis)).or_insert_with(|| {
                    let s = a / (a - b);
                    let (ii, jj) = (kk % nx, kk / nx);
                    let p = if axis == 0 {
                        [u.x1(ii) + s * u.h, u.x2(jj)]
                    } else {
                        [u.x1(ii), u.x2(jj) + s * u.h]
                    };
                    points.push(p);
                    points.len() - 1
                });
                e[slot] = Some(idx);
            }
            let mut connect = |a: usize, b: usize, segments: &mut Vec<[usize; 2]>| {
                if let (Some(pa), Some(pb)) = (e[a], e[b]) {
                    segments.push([pa, pb]);
                }
            };
            match code {
                1 | 14 => connect(0, 3, &mut segments),
                2 | 13 => connect(0, 1, &mut segments),
                4 | 11 => connect(2, 3, &mut segments),
                8 | 7 => connect(1, 2, &mut segments),
                3 | 12 => connect(1, 3, &mut segments),
                6 | 9 => connect(0, 2, &mut segments),
                5 | 10 => {
                    // Saddle: resolve by the cell-center average.
                    let avg = corners.iter().map(|&c| u.values[c]).sum::<f64>() / 4.0;
                    let flip = (avg > level) == (code == 5);
                    if flip {
                        connect(0, 1, &mut segments);
                        connect(2, 3, &mut segments);
                    } else {
                        connect(0, 3, &mut segments);
                        connect(1, 2, &mut segments);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    InterfaceSet { t: u.t, level, points, segments }
}

/// Level curve of a vertically monotone field as a graph over `x₁`: one
/// crossing per grid column, ordered left to right with consecutive
/// connectivity. Columns without a crossing are skipped.
pub fn extract_graph_interface(u: &ScalarField, level: f64) -> InterfaceSet {
    assert_eq!(u.dim, 2);
    let mut pts = Vec::new();
    for i in 0..u.nx {
        let mut found = None;
        for j in 0..u.ny - 1 {
            let a = u.values[u.idx(i, j)] - level;
            let b = u.values[u.idx(i, j + 1)] - level;
            if a == 0.0 {
                found = Some(u.x2(j));
                break;
            }
            if a * b < 0.0 {
                let s = a / (a - b);
                found = Some(u.x2(j) + s * u.h);
                break;
            }
        }
        if let Some(y) = found {
            pts.push([u.x1(i), y]);
        }
    }
    let segments = (1..pts.len()).map(|k| [k - 1, k]).collect();
    InterfaceSet { t: u.t, level, points: pts, segments }
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// Uniform-bucket spatial index over a point set for exact nearest-neighbor
/// queries.
struct BucketIndex<'a> {
    pts: &'a [[f64; 2]],
    cell: f64,
    min: [f64; 2],
    nx: i64,
    ny: i64,
    buckets: Vec<Vec<u32>>,
}

impl<'a> BucketIndex<'a> {
    fn new(pts: &'a [[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extent = ((hi[0] - lo[0]).max(hi[1] - lo[1])).max(1e-12);
        let target = (pts.len() as f64).sqrt().max(1.0);
        let cell = (extent / target).max(1e-12);
        let nx = (((hi[0] - lo[0]) / cell).floor() as i64 + 1).max(1);
        let ny = (((hi[1] - lo[1]) / cell).floor() as i64 + 1).max(1);
        let mut buckets = vec![Vec::new(); (nx * ny) as usize];
        for (n, p) in pts.iter().enumerate() {
            let bi = (((p[0] - lo[0]) / cell) as i64).clamp(0, nx - 1);
            let bj = (((p[1] - lo[1]) / cell) as i64).clamp(0, ny - 1);
            buckets[(bi + bj * nx) as usize].push(n as u32);
        }
        BucketIndex { pts, cell, min: lo, nx, ny, buckets }
    }

    /// Exact distance from `q` to the nearest indexed point.
    fn nearest(&self, q: [f64; 2]) -> f64 {
        let qi = ((q[0] - self.min[0]) / self.cell).floor() as i64;
        let qj = ((q[1] - self.min[1]) / self.cell).floor() as i64;
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            for bj in (qj - ring).max(0)..=(qj + ring).min(self.ny - 1) {
                for bi in (qi - ring).max(0)..=(qi + ring).min(self.nx - 1) {
                    if (bi - qi).abs() < ring && (bj - qj).abs() < ring {
                        continue; // interior already visited
                    }
                    for &n in &self.buckets[(bi + bj * self.nx) as usize] {
                        let p = self.pts[n as usize];
                        let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
                        best = best.min(d);
                    }
                }
            }
            // Cells on ring r+1 lie at least r·cell away from q's cell.
            if best <= ring as f64 * self.cell {
                return best;
            }
            if ring > self.nx + self.ny && best.is_finite() {
                return best;
            }
            ring += 1;
        }
    }
}

fn require_nonempty(a: &InterfaceSet, b: &InterfaceSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(FrontLabError::domain("distance of an empty interface set"));
    }
    Ok(())
}

/// `d(A,B) = inf |x - y|` over pairs — the closest-pair distance,
/// accelerated by a bucket index; equals the brute-force value exactly.
pub fn dist_inf(a: &InterfaceSet, b: &InterfaceSet) -> Result<f64> {
    require_nonempty(a, b)?;
    // Index the larger set, scan the smaller.
    let (scan, indexed) = if a.points.len() <= b.points.len() { (a, b) } else { (b, a) };
    let index = BucketIndex::new(&indexed.points);
    let mut best = f64::INFINITY;
    for p in &scan.points {
        best = best.min(index.nearest(*p));
        if best == 0.0 {
            break;
        }
    }
    Ok(best)
}

fn directed_sup(from: &InterfaceSet, to: &InterfaceSet) -> f64 {
    let index = BucketIndex::new(&to.points);
    from.points.iter().map(|p| index.nearest(*p)).fold(0.0, f64::max)
}

/// `d~(A,B) = min( sup_{x∈A} d(x,B), sup_{y∈B} d(y,A) )`.
pub fn dist_tilde(a: &InterfaceSet, b: &InterfaceSet) -> Result<f64> {
    require_nonempty(a, b)?;
    Ok(directed_sup(a, b).min(directed_sup(b, a)))
}

/// Hausdorff distance: max of the two directed sups.
pub fn dist_hausdorff(a: &InterfaceSet, b: &InterfaceSet) -> Result<f64> {
    require_nonempty(a, b)?;
    Ok(directed_sup(a, b).max(directed_sup(b, a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Inf,
    Tilde,
    Hausdorff,
}

impl DistanceKind {
    pub fn apply(self, a: &InterfaceSet, b: &InterfaceSet) -> Result<f64> {
        match self {
            DistanceKind::Inf => dist_inf(a, b),
            DistanceKind::Tilde => dist_tilde(a, b),
            DistanceKind::Hausdorff => dist_hausdorff(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Inf => "inf",
            DistanceKind::Tilde => "tilde",
            DistanceKind::Hausdorff => "hausdorff",
        }
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = FrontLabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(DistanceKind::Inf),
            "tilde" => Ok(DistanceKind::Tilde),
            "hausdorff" => Ok(DistanceKind::Hausdorff),
            other => Err(FrontLabError::config(format!("unknown distance kind `{other}`"))),
        }
    }
}

/// Global mean-speed estimate fitted from pairwise interface distances.
#[derive(Debug, Clone)]
pub struct SpeedEstimate {
    pub gamma_hat: f64,
    pub kind: DistanceKind,
    pub window: (f64, f64),
    pub fit_residual: f64,
    /// The `(τ, D(τ))` pairs that entered the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Estimate the global mean speed from a time-ordered interface family.
///
/// Distances `D(τ) = d(Γ_t, Γ_{t+τ})` are computed for anchors in the
/// earliest third of the window against every later snapshot; the speed is
/// the least-squares slope over the largest 50% of the `τ` values (the
/// limit is asymptotic, so small separations carry transient bias).
pub fn mean_speed(sets: &[InterfaceSet], kind: DistanceKind) -> Result<SpeedEstimate> {
    if sets.len() < 5 {
        return Err(FrontLabError::domain("mean_speed needs at least 5 snapshots"));
    }
    let t0 = sets.first().unwrap().t;
    let t1 = sets.last().unwrap().t;
    if t1 - t0 < 10.0 {
        return Err(FrontLabError::domain(format!(
            "mean_speed window must span at least 10 time units, got {}",
            t1 - t0
        )));
    }
    let anchor_cut = t0 + (t1 - t0) / 3.0;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for (ia, a) in sets.iter().enumerate() {
        if a.t > anchor_cut {
            break;
        }
        for b in sets.iter().skip(ia + 1) {
            let tau = b.t - a.t;
            if tau <= 0.0 {
                continue;
            }
            pairs.push((tau, kind.apply(a, b)?));
        }
    }
    if pairs.is_empty() {
        return Err(FrontLabError::domain("no usable snapshot pairs"));
    }
    let mut taus: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    taus.sort_by(f64::total_cmp);
    let tau_min = taus[taus.len() / 2];
    let used: Vec<(f64, f64)> = pairs.iter().copied().filter(|p| p.0 >= tau_min).collect();
    let xs: Vec<f64> = used.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    let fit_residual = used
        .iter()
        .map(|&(tau, d)| ((d - (slope * tau + intercept)) / tau).abs())
        .fold(0.0, f64::max);
    Ok(SpeedEstimate { gamma_hat: slope.abs(), kind, window: (t0, t1), fit_residual, samples: used })
}

/// Total-least-squares line fit of an interface.
#[derive(Debug, Clone)]
pub struct PlanarFit {
    /// Unit normal (canonical orientation: positive second component, or
    /// positive first when horizontal).
    pub normal: [f64; 2],
    /// The fitted line is `x·normal = offset`.
    pub offset: f64,
    /// Maximum point-to-line distance.
    pub residual: f64,
}

pub fn planarity(g: &InterfaceSet) -> Result<PlanarFit> {
    if g.points.is_empty() {
        return Err(FrontLabError::domain("planarity of an empty set"));
    }
    if g.points.len() == 1 {
        return Ok(PlanarFit { normal: [1.0, 0.0], offset: g.points[0][0], residual: 0.0 });
    }
    let n = g.points.len() as f64;
    let (mx, my) = g.points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
    let (mx, my) = (mx / n, my / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &g.points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Smallest eigenvector of the 2x2 scatter matrix is the line normal.
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let lam = 0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt();
    let mut normal = if sxy.abs() > 1e-300 {
        let v = [lam - syy, sxy];
        let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / len, v[1] / len]
    } else if sxx <= syy {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    if normal[1] < 0.0 || (normal[1] == 0.0 && normal[0] < 0.0) {
        normal = [-normal[0], -normal[1]];
    }
    let offset = mx * normal[0] + my * normal[1];
    let residual = g
        .points
        .iter()
        .map(|p| (p[0] * normal[0] + p[1] * normal[1] - offset).abs())
        .fold(0.0, f64::max);
    Ok(PlanarFit { normal, offset, residual })
}

/// Recursive-split (Ramer-Douglas-Peucker) simplification of an ordered
/// polyline. Endpoints are kept; the number of maximal linear pieces is
/// `len - 1`.
pub fn simplify_polyline(points: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    let mut stack = vec![(0usize, points.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let (mut worst, mut at) = (0.0, a);
        for (k, p) in points.iter().enumerate().take(b).skip(a + 1) {
            let d = point_segment_distance(p[0], p[1], points[a], points[b]);
            if d > worst {
                worst = d;
                at = k;
            }
        }
        if worst > tol {
            keep[at] = true;
            stack.push((a, at));
            stack.push((at, b));
        }
    }
    points
        .iter()
        .zip(&keep)
        .filter_map(|(p, &k)| if k { Some(*p) } else { None })
        .collect()
}

/// One row of the transition-certification table: the smallest measurable
/// `M` for a given `ε`, or `None` when unachievable inside the domain.
#[derive(Debug, Clone, Copy)]
pub struct TransitionBound {
    pub eps: f64,
    pub m: Option<f64>,
}

/// Certify the interface-uniformity condition: for each `ε`, the smallest
/// `M` such that over all snapshots, nodes on the `u > 1/2` side at distance
/// `≥ M` from the reference interface satisfy `u ≥ 1-ε`, and nodes on the
/// other side satisfy `u ≤ ε`. Side membership is the sign of `u - 1/2`;
/// the references enter only through distances. Nodes within
/// `lateral_margin` of the lateral edges are ignored (wall-contact layer of
/// the truncated domain).
pub fn verify_transition(
    snapshots: &[&ScalarField],
    refs: &[InterfaceSet],
    eps_grid: &[f64],
    lateral_margin: f64,
) -> Result<Vec<TransitionBound>> {
    if snapshots.len() != refs.len() {
        return Err(FrontLabError::domain("need one reference interface per snapshot"));
    }
    let mut out = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let mut worst_violation: f64 = 0.0;
        let mut max_available: f64 = 0.0;
        for (u, gamma) in snapshots.iter().zip(refs) {
            let x_lo = u.x1(0) + lateral_margin;
            let x_hi = u.x1(u.nx - 1) - lateral_margin;
            for j in 0..u.ny {
                for i in 0..u.nx {
                    let x = u.x1(i);
                    if x < x_lo || x > x_hi {
                        continue;
                    }
                    let v = u.values[u.idx(i, j)];
                    let d = gamma.distance_to_point(x, u.x2(j));
                    max_available = max_available.max(d);
                    let violates = if v > 0.5 { v < 1.0 - eps } else { v > eps };
                    if violates {
                        worst_violation = worst_violation.max(d);
                    }
                }
            }
        }
        let m = if worst_violation > max_available - 2.0 * snapshots[0].h && worst_violation > 0.0 {
            None
        } else {
            Some(worst_violation)
        };
        out.push(TransitionBound { eps, m });
    }
    Ok(out)
}
