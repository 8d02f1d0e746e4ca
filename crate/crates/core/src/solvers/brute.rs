use crate::error::{Error, Result};
use crate::tsp::{tour_cost, Tour, TspInstance};

pub const BRUTE_FORCE_MAX: usize = 10;

/// Exact optimum by enumeration: city 0 is fixed first and each direction of
/// travel is visited once (`order[1] < order[n-1]`).
pub fn brute_force_tsp(inst: &TspInstance) -> Result<(Tour, f64)> {
    let n = inst.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge(n));
    }
    let mut order = vec![0usize; n];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = (Vec::new(), f64::INFINITY);
    extend(inst, 1, &mut order, &mut used, &mut best);
    let (order, cost) = best;
    let tour = Tour::new(order)?;
    debug_assert_eq!(tour_cost(inst, &tour).ok(), Some(cost));
    Ok((tour, cost))
}

fn extend(
    inst: &TspInstance,
    pos: usize,
    order: &mut [usize],
    used: &mut [bool],
    best: &mut (Vec<usize>, f64),
) {
    let n = order.len();
    if pos == n {
        if order[1] < order[n - 1] {
            let tour = Tour::new(order.to_vec()).expect("enumeration yields permutations");
            let c = tour_cost(inst, &tour).expect("sizes match");
            if c < best.1 {
                *best = (order.to_vec(), c);
            }
        }
        return;
    }
    for c in 1..n {
        if !used[c] {
            used[c] = true;
            order[pos] = c;
            extend(inst, pos + 1, order, used, best);
            used[c] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::{generate_instance, nn_tour};

    #[test]
    fn square_and_collinear() {
        let sq = TspInstance::new(vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)], 1.0).unwrap();
        let (t, c) = brute_force_tsp(&sq).unwrap();
        assert_eq!(c, 4.0);
        assert_eq!(t.order(), &[0, 1, 2, 3]);
        let line = TspInstance::new(vec![(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)], 3.0).unwrap();
        assert_eq!(brute_force_tsp(&line).unwrap().1, 6.0);
    }

    #[test]
    fn too_large() {
        let inst = generate_instance(11, 200.0, 1).unwrap();
        assert!(matches!(brute_force_tsp(&inst), Err(Error::TooLarge(11))));
    }

    #[test]
    fn nn_never_beats_optimum() {
        for seed in 0..30 {
            let n = 4 + (seed as usize % 5);
            let inst = generate_instance(n, 200.0, seed).unwrap();
            let (_, opt) = brute_force_tsp(&inst).unwrap();
            for start in 0..n {
                let nn = tour_cost(&inst, &nn_tour(&inst, start).unwrap()).unwrap();
                assert!(nn >= opt - 1e-9);
            }
        }
    }
}
