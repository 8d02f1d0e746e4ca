//! Euclidean TSP: instances, tours, nearest-neighbour construction and the
//! 2-opt neighbourhood.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::solvers::{Problem, ReplicaProblem};

pub const DEFAULT_RANGE: f64 = 200.0;

/// City layout with a precomputed (exactly symmetric) distance matrix.
#[derive(Clone, Debug)]
pub struct TspInstance {
    coords: Vec<(f64, f64)>,
    range: f64,
    dist: Vec<f64>,
}

impl PartialEq for TspInstance {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.range == other.range
    }
}

impl TspInstance {
    pub fn new(coords: Vec<(f64, f64)>, range: f64) -> Result<Self> {
        let n = coords.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need at least 3 cities, got {n}")));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::InvalidArgument(format!("range must be positive, got {range}")));
        }
        if let Some(&(x, y)) = coords
            .iter()
            .find(|&&(x, y)| !(0.0..=range).contains(&x) || !(0.0..=range).contains(&y))
        {
            return Err(Error::InvalidArgument(format!(
                "city ({x}, {y}) outside [0, {range}]^2"
            )));
        }
        let mut dist = vec![0.0; n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let (dx, dy) = (coords[a].0 - coords[b].0, coords[a].1 - coords[b].1);
                let d = dx.hypot(dy);
                dist[a * n + b] = d;
                dist[b * n + a] = d;
            }
        }
        Ok(Self {
            coords,
            range,
            dist,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.coords.len() + b]
    }

    /// Upper bound on any tour cost: every edge is at most the square's diagonal.
    pub fn cost_bound(&self) -> f64 {
        self.len() as f64 * self.range * std::f64::consts::SQRT_2
    }

    /// Text form: `n` on the first line, then one `x y` pair per line using
    /// shortest round-trip decimal formatting.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.len())?;
        for &(x, y) in &self.coords {
            writeln!(w, "{x} {y}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).map_err(|e| Error::io(path, e))?;
        fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    /// Parses the text form. The range is [`DEFAULT_RANGE`] unless a
    /// coordinate exceeds it, in which case the largest coordinate is used.
    pub fn read_from(r: impl BufRead, origin: &Path) -> Result<Self> {
        let schema = |message: String| Error::Schema {
            path: origin.to_path_buf(),
            message,
        };
        let mut lines = r.lines().enumerate();
        let n: usize = loop {
            match lines.next() {
                Some((_, Ok(l))) if l.trim().is_empty() => continue,
                Some((i, Ok(l))) => {
                    break l
                        .trim()
                        .parse()
                        .map_err(|_| schema(format!("line {}: expected city count", i + 1)))?
                }
                Some((_, Err(e))) => return Err(Error::io(origin, e)),
                None => return Err(schema("empty instance file".into())),
            }
        };
        let mut coords = Vec::with_capacity(n);
        for (i, line) in lines {
            let line = line.map_err(|e| Error::io(origin, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<f64> {
                parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| schema(format!("line {}: expected `x y`", i + 1)))
            };
            let (x, y) = (next()?, next()?);
            if parts.next().is_some() {
                return Err(schema(format!("line {}: trailing fields", i + 1)));
            }
            coords.push((x, y));
        }
        if coords.len() != n {
            return Err(schema(format!("header says {n} cities, found {}", coords.len())));
        }
        let max = coords
            .iter()
            .flat_map(|&(x, y)| [x, y])
            .fold(0.0f64, f64::max);
        Self::new(coords, DEFAULT_RANGE.max(max))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file), path)
    }
}

/// `n` cities i.i.d. uniform on `[0, range)^2`. Deterministic in `seed`.
pub fn generate_instance(n: usize, range: f64, seed: u64) -> Result<TspInstance> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 cities, got {n}")));
    }
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::InvalidArgument(format!("range must be positive, got {range}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .map(|_| (rng.random::<f64>() * range, rng.random::<f64>() * range))
        .collect();
    TspInstance::new(coords, range)
}

/// A permutation of city indices, read cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n {
                return Err(Error::IndexOutOfRange { index: c, n });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidArgument(format!("city {c} visited twice")));
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_move(&self, i: usize, j: usize) -> Result<()> {
        let n = self.0.len();
        if i > j || j >= n || (i == 0 && j == n - 1 && n > 1) {
            return Err(Error::InvalidMove { i, j, n });
        }
        Ok(())
    }

    /// Reverses positions `i..=j` in place.
    pub fn reverse_segment(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_move(i, j)?;
        self.0[i..=j].reverse();
        Ok(())
    }

    /// Number of positions at which two tours hold different cities.
    pub fn position_distance(&self, other: &Tour) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

pub fn tour_cost(inst: &TspInstance, tour: &Tour) -> Result<f64> {
    if tour.len() != inst.len() {
        return Err(Error::LengthMismatch {
            tour: tour.len(),
            instance: inst.len(),
        });
    }
    Ok(cycle_cost(inst, tour.order()))
}

fn cycle_cost(inst: &TspInstance, order: &[usize]) -> f64 {
    let n = order.len();
    (0..n).map(|k| inst.dist(order[k], order[(k + 1) % n])).sum()
}

/// Greedy nearest-unvisited-neighbour tour from `start`; ties go to the lower
/// city index.
pub fn nn_tour(inst: &TspInstance, start: usize) -> Result<Tour> {
    let n = inst.len();
    if start >= n {
        return Err(Error::IndexOutOfRange { index: start, n });
    }
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    order.push(cur);
    for _ in 1..n {
        let mut best: Option<(usize, f64)> = None;
        for (c, _) in visited.iter().enumerate().filter(|(_, &v)| !v) {
            let d = inst.dist(cur, c);
            // strict < keeps the lowest index on ties
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((c, d));
            }
        }
        let (next, _) = best.expect("unvisited city remains");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    Ok(Tour(order))
}

pub fn two_opt_apply(tour: &Tour, i: usize, j: usize) -> Result<Tour> {
    let mut out = tour.clone();
    out.reverse_segment(i, j)?;
    Ok(out)
}

/// Cost change of reversing positions `i..=j`, from the two replaced edges.
pub fn two_opt_delta(inst: &TspInstance, tour: &Tour, i: usize, j: usize) -> Result<f64> {
    if tour.len() != inst.len() {
        return Err(Error::LengthMismatch {
            tour: tour.len(),
            instance: inst.len(),
        });
    }
    tour.check_move(i, j)?;
    Ok(delta_unchecked(inst, tour.order(), i, j))
}

#[inline]
fn delta_unchecked(inst: &TspInstance, order: &[usize], i: usize, j: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    let n = order.len();
    let prev = order[(i + n - 1) % n];
    let next = order[(j + 1) % n];
    let (a, b) = (order[i], order[j]);
    (inst.dist(prev, b) + inst.dist(a, next)) - (inst.dist(prev, a) + inst.dist(b, next))
}

/// Reversals whose two replaced edges coincide or share a city. They only
/// mirror the cycle: `(0, n-1)` reverses everything, `(0, n-2)` and
/// `(1, n-1)` everything but one city. No edge changes.
pub fn is_mirror_move(n: usize, i: usize, j: usize) -> bool {
    (i == 0 && j + 2 >= n) || (i == 1 && j + 1 == n)
}

/// A 2-opt segment reversal `i..=j` (positions, `i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoOptMove {
    pub i: usize,
    pub j: usize,
}

/// The TSP as an optimization problem: uniform random 2-opt moves from a
/// fixed starting tour.
#[derive(Clone, Debug)]
pub struct TspProblem<'a> {
    inst: &'a TspInstance,
    start: Tour,
}

impl<'a> TspProblem<'a> {
    pub fn new(inst: &'a TspInstance, start: Tour) -> Result<Self> {
        if start.len() != inst.len() {
            return Err(Error::LengthMismatch {
                tour: start.len(),
                instance: inst.len(),
            });
        }
        Ok(Self { inst, start })
    }

    /// Starts from the nearest-neighbour tour out of city 0.
    pub fn from_nn(inst: &'a TspInstance) -> Result<Self> {
        Self::new(inst, nn_tour(inst, 0)?)
    }

    pub fn instance(&self) -> &TspInstance {
        self.inst
    }
}

impl Problem for TspProblem<'_> {
    type State = Tour;
    type Move = TwoOptMove;

    fn initial(&self) -> Tour {
        self.start.clone()
    }

    fn evaluate(&self, state: &Tour) -> f64 {
        cycle_cost(self.inst, state.order())
    }

    fn propose<R: Rng + ?Sized>(&self, _state: &Tour, rng: &mut R) -> TwoOptMove {
        let n = self.inst.len();
        loop {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j || is_mirror_move(n, i, j) {
                continue;
            }
            return TwoOptMove { i, j };
        }
    }

    fn apply(&self, state: &mut Tour, mv: &TwoOptMove) {
        state.0[mv.i..=mv.j].reverse();
    }

    fn candidate_cost(&self, state: &Tour, current: f64, mv: &TwoOptMove) -> f64 {
        current + delta_unchecked(self.inst, state.order(), mv.i, mv.j)
    }

    fn value_bound(&self) -> Option<f64> {
        Some(self.inst.cost_bound())
    }
}

impl ReplicaProblem for TspProblem<'_> {
    fn replica_distance(&self, a: &Tour, b: &Tour) -> usize {
        a.position_distance(b)
    }

    fn distance_change(&self, state: &Tour, mv: &TwoOptMove, other: &Tour) -> i64 {
        let (s, o) = (state.order(), other.order());
        let mut change = 0i64;
        for p in mv.i..=mv.j {
            let moved = s[mv.i + mv.j - p];
            change += (moved != o[p]) as i64 - (s[p] != o[p]) as i64;
        }
        change
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn square() -> TspInstance {
        TspInstance::new(vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)], 1.0).unwrap()
    }

    fn collinear() -> TspInstance {
        TspInstance::new(vec![(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], 3.0).unwrap()
    }

    fn tour(v: &[usize]) -> Tour {
        Tour::new(v.to_vec()).unwrap()
    }

    #[test]
    fn generation_is_deterministic_and_bounded() {
        let a = generate_instance(100, 200.0, 42).unwrap();
        let b = generate_instance(100, 200.0, 42).unwrap();
        assert_eq!(a, b);
        let bits = |i: &TspInstance| {
            i.coords()
                .iter()
                .map(|&(x, y)| (x.to_bits(), y.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(a, generate_instance(100, 200.0, 43).unwrap());
        let small = generate_instance(3, 1.0, 7).unwrap();
        assert_eq!(small.len(), 3);
        assert!(small
            .coords()
            .iter()
            .all(|&(x, y)| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)));
        assert!(generate_instance(2, 1.0, 7).is_err());
        assert!(generate_instance(5, 0.0, 7).is_err());
    }

    #[test]
    fn cost_examples() {
        assert_eq!(tour_cost(&square(), &tour(&[0, 1, 2, 3])).unwrap(), 4.0);
        assert_eq!(tour_cost(&collinear(), &tour(&[0, 1, 2])).unwrap(), 6.0);
        assert!(matches!(
            tour_cost(&square(), &tour(&[0, 1, 2])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn tour_rejects_non_permutations() {
        assert!(Tour::new(vec![0, 0, 1]).is_err());
        assert!(Tour::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn nn_examples() {
        assert_eq!(nn_tour(&collinear(), 0).unwrap().order(), &[0, 1, 2]);
        assert!(matches!(nn_tour(&collinear(), 3), Err(Error::IndexOutOfRange { .. })));
        // cities 1 and 2 are both at distance 1 from city 0
        let tie = TspInstance::new(vec![(1.0, 1.0), (2.0, 1.0), (0.0, 1.0), (1.0, 3.0)], 3.0).unwrap();
        assert_eq!(nn_tour(&tie, 0).unwrap().order()[1], 1);
    }

    #[test]
    fn two_opt_examples() {
        let t = tour(&[0, 1, 2, 3]);
        assert_eq!(two_opt_apply(&t, 1, 2).unwrap().order(), &[0, 2, 1, 3]);
        assert_eq!(two_opt_apply(&t, 1, 3).unwrap().order(), &[0, 3, 2, 1]);
        assert_eq!(two_opt_apply(&t, 2, 2).unwrap(), t);
        assert!(matches!(two_opt_apply(&t, 0, 3), Err(Error::InvalidMove { .. })));
        assert!(two_opt_apply(&t, 2, 1).is_err());
        assert!(two_opt_apply(&t, 1, 4).is_err());
        assert_eq!(two_opt_delta(&square(), &t, 2, 2).unwrap(), 0.0);
        let d = two_opt_delta(&square(), &t, 1, 2).unwrap();
        assert!((d - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn mirror_moves_change_no_edges() {
        let inst = generate_instance(9, 200.0, 2).unwrap();
        let t = nn_tour(&inst, 0).unwrap();
        let edges = |t: &Tour| {
            let o = t.order();
            let mut e: Vec<_> = (0..o.len())
                .map(|k| {
                    let (a, b) = (o[k], o[(k + 1) % o.len()]);
                    (a.min(b), a.max(b))
                })
                .collect();
            e.sort();
            e
        };
        for (i, j) in [(0, 7), (1, 8)] {
            assert!(is_mirror_move(9, i, j));
            assert_eq!(edges(&two_opt_apply(&t, i, j).unwrap()), edges(&t));
            assert_eq!(two_opt_delta(&inst, &t, i, j).unwrap(), 0.0);
        }
        assert!(!is_mirror_move(9, 1, 7));
        assert!(!is_mirror_move(9, 0, 6));
        let p = TspProblem::from_nn(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..2000 {
            let mv = p.propose(&t, &mut rng);
            assert!(mv.i < mv.j && !is_mirror_move(9, mv.i, mv.j));
        }
    }

    #[test]
    fn delta_matches_recompute_exhaustively() {
        let inst = generate_instance(8, 200.0, 3).unwrap();
        let t = nn_tour(&inst, 0).unwrap();
        let base = tour_cost(&inst, &t).unwrap();
        for i in 0..8 {
            for j in i..8 {
                if i == 0 && j == 7 {
                    continue;
                }
                let full = tour_cost(&inst, &two_opt_apply(&t, i, j).unwrap()).unwrap() - base;
                let d = two_opt_delta(&inst, &t, i, j).unwrap();
                assert!((full - d).abs() < 1e-9, "({i},{j}): {full} vs {d}");
            }
        }
    }

    #[test]
    fn distance_change_matches_recount() {
        let inst = generate_instance(9, 200.0, 5).unwrap();
        let p = TspProblem::from_nn(&inst).unwrap();
        let a = p.initial();
        let other = tour(&[3, 1, 4, 0, 5, 8, 2, 7, 6]);
        for i in 0..9 {
            for j in (i + 1)..9 {
                if i == 0 && j == 8 {
                    continue;
                }
                let mv = TwoOptMove { i, j };
                let mut b = a.clone();
                p.apply(&mut b, &mv);
                let expect = b.position_distance(&other) as i64 - a.position_distance(&other) as i64;
                assert_eq!(p.distance_change(&a, &mv, &other), expect);
            }
        }
    }

    #[test]
    fn instance_file_round_trips() {
        let inst = generate_instance(20, 200.0, 11).unwrap();
        let mut buf = Vec::new();
        inst.write_to(&mut buf).unwrap();
        let back = TspInstance::read_from(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(inst, back);
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn instance_file_errors() {
        let bad = b"3\n0 0\n1 1\n";
        assert!(matches!(
            TspInstance::read_from(&bad[..], Path::new("x")),
            Err(Error::Schema { .. })
        ));
        let bad = b"3\n0 0\n1 1\n2 x\n";
        assert!(TspInstance::read_from(&bad[..], Path::new("x")).is_err());
    }

    fn perm_strategy() -> impl Strategy<Value = (u64, Vec<usize>, usize, usize)> {
        (5usize..30).prop_flat_map(|n| {
            (
                any::<u64>(),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                0..n,
                0..n,
            )
        })
    }

    proptest! {
        #[test]
        fn two_opt_is_involution_and_keeps_permutation((seed, order, a, b) in perm_strategy()) {
            let n = order.len();
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            prop_assume!(!(i == 0 && j == n - 1));
            let inst = generate_instance(n, 200.0, seed).unwrap();
            let t = Tour::new(order).unwrap();
            let once = two_opt_apply(&t, i, j).unwrap();
            prop_assert!(Tour::new(once.order().to_vec()).is_ok());
            prop_assert_eq!(two_opt_apply(&once, i, j).unwrap(), t.clone());
            let d = two_opt_delta(&inst, &t, i, j).unwrap();
            let full = tour_cost(&inst, &once).unwrap() - tour_cost(&inst, &t).unwrap();
            prop_assert!((d - full).abs() < 1e-9);
        }

        #[test]
        fn cost_invariant_under_rotation_and_reversal((seed, order, r, _b) in perm_strategy()) {
            let inst = generate_instance(order.len(), 200.0, seed).unwrap();
            let t = Tour::new(order.clone()).unwrap();
            let c = tour_cost(&inst, &t).unwrap();
            prop_assert!(c >= 0.0);
            let mut rot = order.clone();
            rot.rotate_left(r);
            let mut rev = order;
            rev.reverse();
            prop_assert!((tour_cost(&inst, &Tour::new(rot).unwrap()).unwrap() - c).abs() < 1e-9);
            prop_assert!((tour_cost(&inst, &Tour::new(rev).unwrap()).unwrap() - c).abs() < 1e-9);
        }
    }
}
