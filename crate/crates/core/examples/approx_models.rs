//! The breakpoint/decay model with the 3GPP and 5GCM parameter pairs.

use a2g_los::approx::{FIVE_GCM, THREE_GPP};
use a2g_los::p_los_approx;

fn main() {
    println!("d,3gpp,5gcm");
    for d in (0..=300).step_by(20) {
        let d = d as f64;
        println!(
            "{d},{:.4},{:.4}",
            p_los_approx(d, &THREE_GPP),
            p_los_approx(d, &FIVE_GCM)
        );
    }
}
