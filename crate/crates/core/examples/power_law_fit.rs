//! Exponent recovery from synthetic degree samples.

use imscale::evaluate::fit_power_law;
use imscale::generators::power_law_degrees;
use imscale::rng;

fn main() -> imscale::Result<()> {
    for alpha in [2.0, 2.5, 3.0] {
        let mut r = rng::stream(8, &[]);
        let d = power_law_degrees(20_000, alpha, 1, 1000, &mut r);
        let fit = fit_power_law(&d)?;
        println!(
            "alpha {alpha}: fitted {:.3} from d_min {} ({} samples in tail, KS {:.4})",
            fit.alpha, fit.d_min, fit.tail, fit.ks
        );
    }
    Ok(())
}
