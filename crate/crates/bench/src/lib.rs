//! Instance families shared by the criterion benches.

use lotdp_core::gen::sized_instance;
use lotdp_core::{Instance, Mode};

pub const SEED: u64 = 1;

/// Fixed `n = 5`, `c_hold = 1`, varying demand.
pub fn demand_family(demand: i64) -> Instance {
    sized_instance(5, demand, 1, Mode::Single, SEED).expect("valid family parameters")
}

/// Fixed `P = 50`, `c_hold = 1`, varying supplier count.
pub fn supplier_family(n: usize) -> Instance {
    sized_instance(n, 50, 1, Mode::Single, SEED).expect("valid family parameters")
}

/// Small multi-delivery instances for comparing the two strategies.
pub fn multi_family(demand: i64) -> Instance {
    sized_instance(3, demand, 1, Mode::Multi, SEED).expect("valid family parameters")
}
