//! Step-kernel discretization gap against the closed form as T grows.
use bstar::kernel::*;
fn main() {
    for t in [10_000usize, 100_000, 1_000_000, 4_000_000] {
        let s = std::time::Instant::now();
        let k1 = PiecewiseLinearKernel::step_kernel(t).unwrap();
        let v = k1.tail_norm(0, 4.0 / 3.0).unwrap().value.powi(-4);
        println!("T={t} {v:.8} diff {:.2e} ({:?})", v - k1_closed_form(), s.elapsed());
    }
}
