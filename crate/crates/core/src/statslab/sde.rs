use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::schedules::{h_log, ScheduleSpec};

/// Noise amplitude `sigma(t)` multiplying `sqrt(c_q) dW`.
#[derive(Clone, Debug, PartialEq)]
pub enum NoiseSchedule {
    Constant(f64),
    /// `c_o / ln(t + 2)`.
    Log { c_o: f64 },
    /// Grid spacing `b^-(eta_pow + h_log(floor(t)))` of the log schedule.
    Quantized {
        base: u32,
        eta_pow: i32,
        spec: ScheduleSpec,
    },
}

impl NoiseSchedule {
    pub fn sigma(&self, t: f64) -> f64 {
        match self {
            NoiseSchedule::Constant(s) => *s,
            NoiseSchedule::Log { c_o } => c_o / (t + 2.0).ln(),
            NoiseSchedule::Quantized {
                base,
                eta_pow,
                spec,
            } => {
                let h = h_log(t.max(0.0) as u64, *base, spec) as i32;
                (*base as f64).powi(-(eta_pow + h))
            }
        }
    }
}

/// Euler–Maruyama setup for `dX = -grad f(X) dt + sqrt(c_q) sigma(t) dW`.
pub struct SdeParams<G> {
    /// Writes `grad f(x)` into the second argument.
    pub grad: G,
    pub c_q: f64,
    pub noise: NoiseSchedule,
    pub dt: f64,
    pub steps: usize,
    pub x0: Vec<f64>,
    /// Abort with [`Error::Divergence`] once `|X|` exceeds this.
    pub guard_radius: f64,
    /// Keep every `record_every`-th state; 0 keeps only the endpoints.
    pub record_every: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory has the initial state")
    }
}

impl<G: Fn(&[f64], &mut [f64])> SdeParams<G> {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps < 1 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if !(self.c_q > 0.0) {
            return Err(Error::InvalidArgument(format!("c_q must be positive, got {}", self.c_q)));
        }
        if self.x0.is_empty() {
            return Err(Error::InvalidArgument("x0 must not be empty".into()));
        }
        Ok(())
    }
}

pub fn langevin_simulate<G: Fn(&[f64], &mut [f64])>(
    params: &SdeParams<G>,
    seed: u64,
) -> Result<Trajectory> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = params.x0.len();
    let mut x = params.x0.clone();
    let mut g = vec![0.0; dim];
    let amp = params.c_q.sqrt() * params.dt.sqrt();

    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x.clone()],
    };
    for k in 0..params.steps {
        let t = k as f64 * params.dt;
        let sigma = params.noise.sigma(t);
        (params.grad)(&x, &mut g);
        for i in 0..dim {
            let z: f64 = StandardNormal.sample(&mut rng);
            x[i] += -g[i] * params.dt + amp * sigma * z;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm <= params.guard_radius) {
            return Err(Error::Divergence {
                step: k + 1,
                norm,
                radius: params.guard_radius,
            });
        }
        let step = k + 1;
        let keep = step == params.steps || (params.record_every > 0 && step % params.record_every == 0);
        if keep {
            traj.times.push(step as f64 * params.dt);
            traj.states.push(x.clone());
        }
    }
    Ok(traj)
}
