// Frozen assertion constants, set to 2× the worst ratio observed by
// `cargo run --release -p spherex --example calibrate`:
//
//   nnc worst ratio            1.294189  (seed 38, q 4)   → limit 2.588378
//   general worst ratio        1.183576  (seed 40, q 8)   → limit 2.367152
//   weak decoupling worst C    1.450435  (seed 27)        → limit 2.900870
//
// Suites: nnc seeds 1001..=1050 at q ∈ {4,8}; general seeds 2001..=2050 at
// q = 8; weak decoupling seeds 3001..=3050. All n = 5 (decoupling n = 4),
// d = 4, default grids, oracle restarts 1000.
const CAL_NNC_LIMIT: f64 = 2.588378;
const CAL_GENERAL_LIMIT: f64 = 2.367152;
const CAL_WEAK_DECOUPLING_LIMIT: f64 = 2.900870;
