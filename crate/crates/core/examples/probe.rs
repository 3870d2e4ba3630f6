use opgraph::complexity::{Horizon, SweepWorld};
use opgraph::context::AdmissibleContext;
use opgraph::eval::Fuel;
use opgraph::levin::{mass_table_parallel, sample};
use opgraph::zipf::{fit_power_law_auto, rank_frequency, FitMethod};
use std::collections::BTreeMap;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let bare = AdmissibleContext::bare();
    for bits in [16u32, 20, 24, 28] {
        let t = Instant::now();
        let world = SweepWorld::prepare(&bare, Horizon::bits(bits));
        println!("bare  bits={bits:2} programs={:8} in {:?}", world.enumeration.len(), t.elapsed());
    }
    let num = AdmissibleContext::with_numerals(4096);
    for bits in [16u32, 20, 24, 28] {
        let t = Instant::now();
        let world = SweepWorld::prepare(&num, Horizon::bits(bits));
        println!("num   bits={bits:2} programs={:8} in {:?}", world.enumeration.len(), t.elapsed());
    }
    // default-truncation mass table in the numeral context
    let t = Instant::now();
    let world = SweepWorld::prepare(&num, Horizon::bits(28));
    let fuel = Fuel::with_budget(10_000);
    let table = mass_table_parallel(&world, &num, fuel, 8);
    println!("mass table: {} values, scanned {}, halting {}, total {} ~ {:.6}, built in {:?}",
        table.len(), table.scanned, table.halting, table.total(), table.total().to_f64(), t.elapsed());
    // peaks
    for k in 5..=10u32 {
        let p = 1u64 << k;
        println!("  2^{k}: m({})={:.3e}  m({})={:.3e}  m({})={:.3e}", p-1, table.mass(p-1).to_f64(), p, table.mass(p).to_f64(), p+1, table.mass(p+1).to_f64());
    }
    // sampling + fit
    let support = table.top_support(512);
    println!("support size {}", support.len());
    let counts = sample(&support, 100_000, 42).unwrap();
    let named: BTreeMap<String, u64> = counts.iter().map(|(&v, &c)| (format!("n{v:07}"), c)).collect();
    println!("distinct sampled tokens: {}", named.len());
    let ranked = rank_frequency(&named).unwrap();
    let t = Instant::now();
    let ls = fit_power_law_auto(&ranked, FitMethod::LsLogLog).unwrap();
    let mle = fit_power_law_auto(&ranked, FitMethod::DiscreteMle).unwrap();
    println!("LS  exponent {:.4} (rmin {} rmax {} ks {:.4})", ls.exponent, ls.r_min, ls.r_max, ls.ks_stat);
    println!("MLE exponent {:.4} (rmin {} rmax {} ks {:.4}) in {:?}", mle.exponent, mle.r_min, mle.r_max, mle.ks_stat, t.elapsed());
    println!("total {:?}", t0.elapsed());
}
