//! Subshifts of finite type with vector edge weights: the rotation set as
//! the hull of simple-cycle means, and periodic orbits with bounded
//! deviation from a rational rotation vector. All arithmetic is exact.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::SftError;

pub type Q = BigRational;

/// Exact plane vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVec(pub Q, pub Q);

impl QVec {
    pub fn zero() -> Self {
        QVec(Q::zero(), Q::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        QVec(Q::from_integer(x.into()), Q::from_integer(y.into()))
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        QVec(
            Q::new(xn.into(), xd.into()),
            Q::new(yn.into(), yd.into()),
        )
    }

    pub fn add(&self, o: &QVec) -> QVec {
        QVec(&self.0 + &o.0, &self.1 + &o.1)
    }

    pub fn sub(&self, o: &QVec) -> QVec {
        QVec(&self.0 - &o.0, &self.1 - &o.1)
    }

    pub fn scale(&self, s: &Q) -> QVec {
        QVec(&self.0 * s, &self.1 * s)
    }

    pub fn cross(&self, o: &QVec) -> Q {
        &self.0 * &o.1 - &self.1 * &o.0
    }

    pub fn norm_sq(&self) -> Q {
        &self.0 * &self.0 + &self.1 * &self.1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [q_f64(&self.0), q_f64(&self.1)]
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

impl Serialize for QVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.to_string(), self.1.to_string()].serialize(s)
    }
}

pub fn q_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn q_sqrt_f64(q: &Q) -> f64 {
    q_f64(q).sqrt()
}

/// Parse `p`, `p/q` or a finite decimal such as `-0.25` exactly.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int}{frac}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Q::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: QVec,
}

/// Directed multigraph on `0..vertices` with an exact weight per edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSft {
    pub vertices: usize,
    pub edges: Vec<Edge>,
}

impl WeightedSft {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self, SftError> {
        for e in &edges {
            if e.from >= vertices || e.to >= vertices {
                return Err(SftError::VertexOutOfRange(e.from, e.to, vertices));
            }
        }
        let g = Self { vertices, edges };
        if g.simple_cycles(1).0.is_empty() {
            return Err(SftError::Acyclic);
        }
        Ok(g)
    }

    /// `vertices N` header, then `i j wx wy` per edge; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SftError> {
        let mut vertices: Option<usize> = None;
        let mut edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SftError::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if vertices.is_none() {
                if toks.len() != 2 || toks[0] != "vertices" {
                    return Err(err("expected header `vertices N`".into()));
                }
                let n = toks[1]
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad vertex count `{}`", toks[1])))?;
                vertices = Some(n);
                continue;
            }
            if toks.len() != 4 {
                return Err(err(format!("expected `i j wx wy`, got {} fields", toks.len())));
            }
            let idx = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| err(format!("bad vertex index `{t}`")))
            };
            let num = |t: &str| parse_rational(t).ok_or_else(|| err(format!("bad weight `{t}`")));
            edges.push(Edge {
                from: idx(toks[0])?,
                to: idx(toks[1])?,
                weight: QVec(num(toks[2])?, num(toks[3])?),
            });
        }
        let n = vertices.ok_or(SftError::Parse {
            line: 0,
            msg: "missing header `vertices N`".into(),
        })?;
        Self::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.vertices);
        for e in &self.edges {
            s.push_str(&format!("{} {} {} {}\n", e.from, e.to, e.weight.0, e.weight.1));
        }
        s
    }

    /// 0/1 transition matrix.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.vertices]; self.vertices];
        for e in &self.edges {
            a[e.from][e.to] = 1;
        }
        a
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push(i);
        }
        for o in &mut out {
            o.sort_by_key(|&i| (self.edges[i].to, i));
        }
        out
    }

    /// Simple cycles as edge-index lists, each starting at its smallest
    /// vertex, in deterministic depth-first order. The flag is true when
    /// the cap stopped the enumeration.
    pub fn simple_cycles(&self, cap: usize) -> (Vec<Vec<usize>>, bool) {
        let out = self.out_edges();
        let mut cycles = Vec::new();
        let mut on_path = vec![false; self.vertices];
        for s in 0..self.vertices {
            let mut path: Vec<usize> = Vec::new();
            // Stack of (vertex, next out-edge position).
            let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
            on_path[s] = true;
            while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
                if *pos >= out[v].len() {
                    stack.pop();
                    on_path[v] = false;
                    path.pop();
                    continue;
                }
                let e = out[v][*pos];
                *pos += 1;
                let w = self.edges[e].to;
                if w == s {
                    let mut c = path.clone();
                    c.push(e);
                    cycles.push(c);
                    if cycles.len() >= cap {
                        return (cycles, true);
                    }
                } else if w > s && !on_path[w] {
                    on_path[w] = true;
                    path.push(e);
                    stack.push((w, 0));
                }
            }
        }
        (cycles, false)
    }

    pub fn walk_sum(&self, walk: &[usize]) -> QVec {
        walk.iter()
            .fold(QVec::zero(), |acc, &e| acc.add(&self.edges[e].weight))
    }

    pub fn mean(&self, walk: &[usize]) -> QVec {
        let n = Q::from_integer((walk.len() as i64).into());
        self.walk_sum(walk).scale(&n.recip())
    }

    pub fn is_closed_walk(&self, walk: &[usize]) -> bool {
        if walk.is_empty() {
            return false;
        }
        let n = walk.len();
        (0..n).all(|i| self.edges[walk[i]].to == self.edges[walk[(i + 1) % n]].from)
    }

    pub fn max_weight_norm(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| q_sqrt_f64(&e.weight.norm_sq()))
            .fold(0.0, f64::max)
    }

    /// Shortest path `from → to` as edge indices, ties broken by the
    /// smallest (target, edge index) at each breadth-first expansion.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        if from == to {
            return Some(Vec::new());
        }
        let out = self.out_edges();
        let mut prev: Vec<Option<usize>> = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &e in &out[v] {
                let w = self.edges[e].to;
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(e);
                    if w == to {
                        let mut path = Vec::new();
                        let mut cur = to;
                        while cur != from {
                            let e = prev[cur].unwrap();
                            path.push(e);
                            cur = self.edges[e].from;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleMean {
    pub edges: Vec<usize>,
    pub mean: QVec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleHull {
    pub cycles: Vec<CycleMean>,
    /// Counterclockwise hull vertices, no collinear points.
    pub hull: Vec<QVec>,
    /// The cycle cap stopped enumeration; the hull may be too small.
    pub partial: bool,
}

impl CycleHull {
    pub fn dimension(&self) -> usize {
        self.hull.len().min(3).saturating_sub(1)
    }
}

fn orient(a: &QVec, b: &QVec, c: &QVec) -> Q {
    b.sub(a).cross(&c.sub(a))
}

/// Exact monotone chain.
pub fn exact_hull(points: &[QVec]) -> Vec<QVec> {
    let mut p: Vec<QVec> = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<QVec> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], q).is_positive() {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<QVec> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], q).is_positive() {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn cycle_rotation_hull(sft: &WeightedSft, cycle_cap: usize) -> Result<CycleHull, SftError> {
    if cycle_cap < sft.vertices {
        return Err(SftError::CapTooSmall {
            cap: cycle_cap,
            vertices: sft.vertices,
        });
    }
    let (cycles, partial) = sft.simple_cycles(cycle_cap);
    if cycles.is_empty() {
        return Err(SftError::Acyclic);
    }
    let cycles: Vec<CycleMean> = cycles
        .into_iter()
        .map(|c| CycleMean {
            mean: sft.mean(&c),
            edges: c,
        })
        .collect();
    let means: Vec<QVec> = cycles.iter().map(|c| c.mean.clone()).collect();
    Ok(CycleHull {
        hull: exact_hull(&means),
        cycles,
        partial,
    })
}

/// Strictly inside the counterclockwise polygon.
fn strictly_inside(hull: &[QVec], p: &QVec) -> bool {
    let n = hull.len();
    n >= 3 && (0..n).all(|i| orient(&hull[i], &hull[(i + 1) % n], p).is_positive())
}

/// Strictly between the two endpoints of a segment, and on it.
fn strictly_between(a: &QVec, b: &QVec, p: &QVec) -> Option<Q> {
    if !orient(a, b, p).is_zero() {
        return None;
    }
    let d = b.sub(a);
    let t = if !d.0.is_zero() {
        (&p.0 - &a.0) / &d.0
    } else if !d.1.is_zero() {
        (&p.1 - &a.1) / &d.1
    } else {
        return None;
    };
    (t.is_positive() && t < Q::one()).then_some(t)
}

/// Barycentric coordinates of `p` in triangle `abc`.
fn barycentric(a: &QVec, b: &QVec, c: &QVec, p: &QVec) -> Option<[Q; 3]> {
    let area = orient(a, b, c);
    if area.is_zero() {
        return None;
    }
    let la = orient(p, b, c) / &area;
    let lb = orient(a, p, c) / &area;
    let lc = Q::one() - &la - &lb;
    Some([la, lb, lc])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedDeviationOrbit {
    /// Closed walk of edge indices, repeated periodically.
    pub word: Vec<usize>,
    pub target: QVec,
    /// Cycles used and their convex weights.
    pub cycles: Vec<Vec<usize>>,
    pub weights: Vec<String>,
    pub deviation_bound: f64,
    pub verified_horizon: u64,
    pub max_deviation: f64,
}

/// Cycles with strictly positive convex weights whose means average to `rho`.
fn convex_representation(hull: &CycleHull, rho: &QVec) -> Result<Vec<(usize, Q)>, SftError> {
    if let Some(i) = hull.cycles.iter().position(|c| &c.mean == rho) {
        return Ok(vec![(i, Q::one())]);
    }
    let vertex_cycle = |v: &QVec| hull.cycles.iter().position(|c| &c.mean == v).unwrap();
    match hull.hull.len() {
        0 | 1 => Err(SftError::NotInterior),
        2 => {
            let t = strictly_between(&hull.hull[0], &hull.hull[1], rho).ok_or(SftError::NotInterior)?;
            Ok(vec![
                (vertex_cycle(&hull.hull[0]), Q::one() - &t),
                (vertex_cycle(&hull.hull[1]), t),
            ])
        }
        n => {
            if !strictly_inside(&hull.hull, rho) {
                return Err(SftError::NotInterior);
            }
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let (a, b, c) = (&hull.hull[i], &hull.hull[j], &hull.hull[k]);
                        if let Some(l) = barycentric(a, b, c, rho) {
                            if l.iter().all(|x| x.is_positive()) {
                                let [la, lb, lc] = l;
                                return Ok(vec![
                                    (vertex_cycle(a), la),
                                    (vertex_cycle(b), lb),
                                    (vertex_cycle(c), lc),
                                ]);
                            }
                        }
                    }
                }
            }
            // Every vertex triangle has `rho` on an edge: mix the centroid
            // in so that all hull vertices carry positive weight.
            all_vertex_weights(&hull.hull, rho).map(|w| {
                w.into_iter()
                    .enumerate()
                    .map(|(i, x)| (vertex_cycle(&hull.hull[i]), x))
                    .collect()
            })
        }
    }
}

fn all_vertex_weights(hull: &[QVec], rho: &QVec) -> Result<Vec<Q>, SftError> {
    let n = hull.len();
    let nq = Q::from_integer((n as i64).into());
    let centroid = hull.iter().fold(QVec::zero(), |a, v| a.add(v)).scale(&nq.recip());
    let mut s = Q::one();
    for _ in 0..64 {
        let pushed = rho.add(&rho.sub(&centroid).scale(&s));
        for j in 1..n - 1 {
            if let Some(l) = barycentric(&hull[0], &hull[j], &hull[j + 1], &pushed) {
                if l.iter().all(|x| !x.is_negative()) {
                    let mut w = vec![Q::zero(); n];
                    w[0] += &l[0];
                    w[j] += &l[1];
                    w[j + 1] += &l[2];
                    let denom = Q::one() + &s;
                    let share = &s / &nq;
                    return Ok(w.into_iter().map(|x| (x + &share) / &denom).collect());
                }
            }
        }
        s /= Q::from_integer(2.into());
    }
    Err(SftError::NotInterior)
}

/// Periodic orbit whose Birkhoff sums stay within a bounded distance of
/// `n·rho`, for `rho` in the relative interior of the cycle hull or equal
/// to a cycle mean.
pub fn bounded_deviation_orbit(
    sft: &WeightedSft,
    rho: &QVec,
    horizon: u64,
    cycle_cap: usize,
) -> Result<BoundedDeviationOrbit, SftError> {
    let hull = cycle_rotation_hull(sft, cycle_cap)?;
    let mut rep = convex_representation(&hull, rho)?;
    rep.sort_by_key(|(i, _)| *i);
    let cycles: Vec<&Vec<usize>> = rep.iter().map(|(i, _)| &hull.cycles[*i].edges).collect();
    let starts: Vec<usize> = cycles.iter().map(|c| sft.edges[c[0]].from).collect();
    let m = cycles.len();

    // Tour through the cycle start vertices.
    let mut legs: Vec<Vec<usize>> = Vec::with_capacity(m);
    for i in 0..m {
        let leg = if m == 1 {
            Vec::new()
        } else {
            sft.shortest_path(starts[i], starts[(i + 1) % m])
                .ok_or(SftError::NotConnected)?
        };
        legs.push(leg);
    }
    let tour: Vec<usize> = legs.concat();

    // Solve Σ c_i u_i = −u_T with u = S − L·rho, then shift along the
    // positive null vector n_i = λ_i / L_i until every count is ≥ 1.
    let len_q = |n: usize| Q::from_integer((n as i64).into());
    let u: Vec<QVec> = cycles
        .iter()
        .map(|c| sft.walk_sum(c).sub(&rho.scale(&len_q(c.len()))))
        .collect();
    let u_tour = sft.walk_sum(&tour).sub(&rho.scale(&len_q(tour.len())));
    let null: Vec<Q> = rep
        .iter()
        .zip(&cycles)
        .map(|((_, w), c)| w / len_q(c.len()))
        .collect();
    let target = QVec(-&u_tour.0, -&u_tour.1);
    let particular = particular_solution(&u, &target).ok_or(SftError::NotConnected)?;
    let mut tau = Q::zero();
    for (p, n) in particular.iter().zip(&null) {
        let need = (Q::one() - p) / n;
        if need > tau {
            tau = need;
        }
    }
    let counts: Vec<Q> = particular
        .iter()
        .zip(&null)
        .map(|(p, n)| p + &tau * n)
        .collect();
    let lcm = counts
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let scale = Q::from_integer(lcm.clone());
    let int_counts: Vec<usize> = counts
        .iter()
        .map(|c| (c * &scale).to_integer().to_usize().unwrap_or(usize::MAX))
        .collect();
    let repeats = lcm.to_usize().unwrap_or(usize::MAX);
    if int_counts.iter().chain([&repeats]).any(|&c| c == usize::MAX) {
        return Err(SftError::NotConnected);
    }

    let mut word = Vec::new();
    for i in 0..m {
        for _ in 0..int_counts[i] {
            word.extend_from_slice(cycles[i]);
        }
        word.extend_from_slice(&legs[i]);
    }
    for _ in 1..repeats {
        word.extend_from_slice(&tour);
    }
    debug_assert!(sft.is_closed_walk(&word));
    debug_assert_eq!(&sft.mean(&word), rho);

    let mut orbit = BoundedDeviationOrbit {
        deviation_bound: word.len() as f64 * sft.max_weight_norm(),
        word,
        target: rho.clone(),
        cycles: cycles.into_iter().cloned().collect(),
        weights: rep.iter().map(|(_, w)| w.to_string()).collect(),
        verified_horizon: 0,
        max_deviation: 0.0,
    };
    orbit.max_deviation = verify_deviation(sft, &orbit, horizon)?;
    orbit.verified_horizon = horizon;
    Ok(orbit)
}

fn particular_solution(u: &[QVec], target: &QVec) -> Option<Vec<Q>> {
    let m = u.len();
    let mut c = vec![Q::zero(); m];
    if target.is_zero() {
        return Some(c);
    }
    // Two independent columns: 2×2 solve.
    for i in 0..m {
        for j in i + 1..m {
            let det = u[i].cross(&u[j]);
            if !det.is_zero() {
                c[i] = target.cross(&u[j]) / &det;
                c[j] = u[i].cross(target) / &det;
                return Some(c);
            }
        }
    }
    // Collinear columns: the target must lie on their common line.
    let i = u.iter().position(|v| !v.is_zero())?;
    if !u[i].cross(target).is_zero() {
        return None;
    }
    c[i] = if !u[i].0.is_zero() {
        &target.0 / &u[i].0
    } else {
        &target.1 / &u[i].1
    };
    Some(c)
}

/// Largest `‖Σ_{j<n} ψ(σʲx) − n·ρ‖` over `1 ≤ n ≤ n_max`, from exact partial
/// sums. Fails if it exceeds the orbit's deviation bound.
pub fn verify_deviation(
    sft: &WeightedSft,
    orbit: &BoundedDeviationOrbit,
    n_max: u64,
) -> Result<f64, SftError> {
    let profile = deviation_profile(sft, orbit, n_max);
    let (n, worst) = profile
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bn, b), (i, &d)| if d > b { (i + 1, d) } else { (bn, b) });
    if worst > orbit.deviation_bound * (1.0 + 1e-12) {
        return Err(SftError::BoundViolated {
            observed: worst,
            bound: orbit.deviation_bound,
            n: n as u64,
        });
    }
    Ok(worst)
}

/// Running maximum of the deviation for `n = 1..=n_max`.
pub fn deviation_profile(sft: &WeightedSft, orbit: &BoundedDeviationOrbit, n_max: u64) -> Vec<f64> {
    let period = orbit.word.len();
    let mut out = Vec::with_capacity(n_max as usize);
    if period == 0 {
        return out;
    }
    // Deviations repeat with the word period, so one period of exact sums
    // determines every n.
    let mut sum = QVec::zero();
    let mut per_phase = Vec::with_capacity(period);
    for (k, &e) in orbit.word.iter().enumerate() {
        sum = sum.add(&sft.edges[e].weight);
        let n = Q::from_integer(((k + 1) as i64).into());
        per_phase.push(q_sqrt_f64(&sum.sub(&orbit.target.scale(&n)).norm_sq()));
    }
    let mut run: f64 = 0.0;
    for n in 1..=n_max as usize {
        run = run.max(per_phase[(n - 1) % period]);
        out.push(run);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn two_loops() -> WeightedSft {
        WeightedSft::parse("vertices 1\n0 0 1 0\n0 0 0 1\n").unwrap()
    }

    fn triangle() -> WeightedSft {
        WeightedSft::parse(
            "# two vertices\nvertices 2\n0 0 1 0\n1 1 0 1\n0 1 0 0\n1 0 0 0\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_rationals_and_decimals() {
        assert_eq!(parse_rational("1/3"), Some(q(1, 3)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational("1.5e1"), Some(q(15, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = WeightedSft::parse("vertices 1\n0 0 1\n").unwrap_err();
        assert!(matches!(e, SftError::Parse { line: 2, .. }));
        let e = WeightedSft::parse("vertices 1\n0 3 1 1\n").unwrap_err();
        assert_eq!(e, SftError::VertexOutOfRange(0, 3, 1));
        let e = WeightedSft::parse("vertices 2\n0 1 1 1\n").unwrap_err();
        assert_eq!(e, SftError::Acyclic);
    }

    #[test]
    fn two_loop_hull_is_segment() {
        let h = cycle_rotation_hull(&two_loops(), 10).unwrap();
        assert_eq!(h.hull, vec![QVec::from_ints(0, 1), QVec::from_ints(1, 0)]);
        assert!(!h.partial);
    }

    #[test]
    fn zero_loop_hull_is_point() {
        let g = WeightedSft::parse("vertices 1\n0 0 0 0\n").unwrap();
        let h = cycle_rotation_hull(&g, 1).unwrap();
        assert_eq!(h.hull, vec![QVec::zero()]);
    }

    #[test]
    fn two_vertex_triangle() {
        let h = cycle_rotation_hull(&triangle(), 10).unwrap();
        assert_eq!(h.cycles.len(), 3);
        assert_eq!(
            h.hull,
            vec![QVec::from_ints(0, 0), QVec::from_ints(1, 0), QVec::from_ints(0, 1)]
        );
    }

    #[test]
    fn cap_below_vertex_count() {
        assert_eq!(
            cycle_rotation_hull(&triangle(), 1),
            Err(SftError::CapTooSmall { cap: 1, vertices: 2 })
        );
        let h = cycle_rotation_hull(&triangle(), 2).unwrap();
        assert!(h.partial);
    }

    #[test]
    fn half_half_alternates() {
        let g = two_loops();
        let o = bounded_deviation_orbit(&g, &QVec::ratio(1, 2, 1, 2), 10_000, 100).unwrap();
        assert_eq!(o.word, vec![0, 1]);
        assert!((o.max_deviation - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(o.deviation_bound, 2.0);
    }

    #[test]
    fn third_two_thirds_word() {
        let g = two_loops();
        let o = bounded_deviation_orbit(&g, &QVec::ratio(1, 3, 2, 3), 10_000, 100).unwrap();
        assert_eq!(o.word, vec![0, 1, 1]);
        assert!((o.max_deviation - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!(o.max_deviation <= 2.0 * g.max_weight_norm());
    }

    #[test]
    fn single_cycle_target() {
        let g = triangle();
        let o = bounded_deviation_orbit(&g, &QVec::from_ints(0, 0), 1000, 100).unwrap();
        assert_eq!(o.word.len(), 2);
        assert!(o.max_deviation <= 2.0 * g.max_weight_norm());
    }

    #[test]
    fn interior_point_uses_connecting_paths() {
        let g = triangle();
        let rho = QVec::ratio(1, 4, 1, 4);
        let o = bounded_deviation_orbit(&g, &rho, 10_000, 100).unwrap();
        assert!(g.is_closed_walk(&o.word));
        assert_eq!(g.mean(&o.word), rho);
        assert_eq!(o.cycles.len(), 3);
    }

    #[test]
    fn boundary_point_is_rejected() {
        let g = triangle();
        let e = bounded_deviation_orbit(&g, &QVec::ratio(1, 2, 1, 2), 100, 100);
        assert_eq!(e.unwrap_err(), SftError::NotInterior);
        let e = bounded_deviation_orbit(&two_loops(), &QVec::from_ints(1, 1), 100, 100);
        assert_eq!(e.unwrap_err(), SftError::NotInterior);
    }

    #[test]
    fn square_center_needs_all_vertices() {
        let g = WeightedSft::parse("vertices 1\n0 0 0 0\n0 0 1 0\n0 0 1 1\n0 0 0 1\n").unwrap();
        let rho = QVec::ratio(1, 2, 1, 2);
        let o = bounded_deviation_orbit(&g, &rho, 1000, 100).unwrap();
        assert_eq!(g.mean(&o.word), rho);
        assert_eq!(o.cycles.len(), 4);
    }

    #[test]
    fn zero_loop_deviation_is_zero() {
        let g = WeightedSft::parse("vertices 1\n0 0 0 0\n").unwrap();
        let o = bounded_deviation_orbit(&g, &QVec::zero(), 100, 10).unwrap();
        assert_eq!(o.max_deviation, 0.0);
    }

    #[test]
    fn tampered_bound_is_reported() {
        let g = two_loops();
        let mut o = bounded_deviation_orbit(&g, &QVec::ratio(1, 2, 1, 2), 10, 10).unwrap();
        o.deviation_bound = 0.1;
        assert!(matches!(
            verify_deviation(&g, &o, 10),
            Err(SftError::BoundViolated { n: 1, .. })
        ));
    }
}
