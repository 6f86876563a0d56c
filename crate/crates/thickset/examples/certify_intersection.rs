//! Certify that countably many translated thick sets meet at once.
//!
//! The per-set weights combine through `a^c = sum_i a_i^c`. The conditions
//! then mirror the pattern certificate with `M` dropped: the combined budget
//! must fit under `delta^2 (1 - (prod beta)^(1-c))` and a separation margin
//! must survive the floor exponent `floor(delta / a)`.

use thickset::certificates::check_intersection;

fn main() {
    let betas = [0.1, 0.1];
    let c = 0.5;
    let delta = 1e-5;

    for alphas in [vec![1e-30, 1e-30], vec![1e-30; 8], vec![1e-3, 1e-3]] {
        let cert = check_intersection(&betas, &alphas, c, delta).expect("well-formed inputs");
        print!(
            "{} sets with weight {:.1e}: combined alpha = {:.3e}, slack1 = {:.3e}, \
             slack2 = {:.6}, ",
            alphas.len(),
            alphas[0],
            cert.alpha_combined,
            cert.slack1,
            cert.slack2
        );
        if cert.valid {
            println!("valid, K_1 = {:.3e}, dim bound {:.9}", cert.k1, cert.dim_bound);
        } else {
            println!("invalid ({:?})", cert.reason.expect("invalid has a reason"));
        }
    }
}
