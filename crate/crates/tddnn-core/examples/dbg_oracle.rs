use tddnn_core::oracle::{monolithic_solve, ModeData};
use tddnn_core::problem::ControlProblem;

fn main() {
    let p = ControlProblem::new(0.5, 2.0, 1.0, 0.4).unwrap();
    let mode = p.mode(1.5).unwrap();
    for nt in [64usize, 128, 256, 512, 1024] {
        let data = ModeData::from_target_fn(1.0, 1.0, nt, |t| (3.0 * t).cos()).unwrap();
        let sol = monolithic_solve(&mode, &data).unwrap();
        let tau = 1.0 / nt as f64;
        let mut worst: f64 = 0.0;
        for j in 1..nt {
            let dmu = (sol.mu[j + 1] - sol.mu[j - 1]) / (2.0 * tau);
            let res = dmu - sol.z[j] - mode.d() * sol.mu[j] + data.target()[j];
            worst = worst.max(res.abs());
        }
        println!("nt={nt:5} dual-residual={worst:.6e}");
    }
}
