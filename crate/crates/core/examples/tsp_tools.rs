//! Instances, tours, 2-opt moves and the exact oracle for small instances.

use qopt::solvers::brute_force_tsp;
use qopt::tsp::{generate_instance, is_mirror_move, nn_tour, tour_cost, two_opt_apply, two_opt_delta, TspInstance};

fn main() -> qopt::Result<()> {
    let inst = generate_instance(9, 200.0, 7)?;
    let path = std::env::temp_dir().join("qopt-example-9.txt");
    inst.save(&path)?;
    let back = TspInstance::load(&path)?;
    assert_eq!(back, inst);
    println!("wrote and re-read {}", path.display());

    let nn = nn_tour(&inst, 0)?;
    let nn_cost = tour_cost(&inst, &nn)?;
    println!("nearest-neighbour tour {:?} cost {nn_cost:.3}", nn.order());

    let mut best = (0, 0, 0.0);
    for i in 0..inst.len() {
        for j in i + 1..inst.len() {
            if is_mirror_move(inst.len(), i, j) {
                continue;
            }
            let d = two_opt_delta(&inst, &nn, i, j)?;
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    let (i, j, d) = best;
    let improved = two_opt_apply(&nn, i, j)?;
    println!("best 2-opt move reverses {i}..={j}: delta {d:.3}, new cost {:.3}", tour_cost(&inst, &improved)?);

    let (opt, cost) = brute_force_tsp(&inst)?;
    println!("optimum {:?} cost {cost:.3} ({:.2}% below nearest neighbour)", opt.order(), 100.0 * (nn_cost - cost) / nn_cost);
    Ok(())
}
