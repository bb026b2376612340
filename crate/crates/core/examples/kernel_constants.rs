//! Prints the kernel constants and the certificate at T = 10⁴.

use std::time::Instant;

use bstar::kernel::*;

fn main() {
    let p = 4.0 / 3.0;
    let t0 = Instant::now();
    let k4 = PiecewiseLinearKernel::arctan_family(10_000).unwrap();
    println!("K4 khat0 {:.10} tail1 {:.10} tail0 {:.10} ({:?})", k4.khat0(), k4.tail_norm(1, p).unwrap().value, k4.tail_norm(0, p).unwrap().value, t0.elapsed());
    let t0 = Instant::now();
    let k6 = PiecewiseLinearKernel::power_family(10_000).unwrap();
    println!("K6 khat0 {:.10} khat1 {:.10} tail2 {:.10} ({:?})", k6.khat0(), k6.khat(1), k6.tail_norm(2, p).unwrap().value, t0.elapsed());
    let cert = BoundCertificate::from_kernels(&k6, &k4).unwrap();
    println!("phi {:.10}", cert.phi);
    let t0 = Instant::now();
    let c = delta_lower_certificate(&cert, 1e-6, 1.182778).unwrap();
    println!("{:?} ({:?})", c, t0.elapsed());
    println!("{:?}", theta_quadratic_check(&cert, 1.182778, THETA_RANGE_END, 10000).unwrap());
    let k1 = PiecewiseLinearKernel::step_kernel(10_000).unwrap();
    println!("k1 closed {:.10} discrete {:.10}", k1_closed_form(), k1.tail_norm(0, p).unwrap().value.powi(-4));
}
