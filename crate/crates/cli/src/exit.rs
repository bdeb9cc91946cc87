//! Process exit codes. Every run ends with exactly one of these.

pub const OK: i32 = 0;
pub const INCONCLUSIVE: i32 = 1;
/// Not stable, or the necessary condition fails.
pub const NOT_DSTABLE: i32 = 2;
pub const COUNTEREXAMPLE: i32 = 3;
pub const REPLAY_REJECTED: i32 = 4;
pub const USAGE: i32 = 64;
pub const DATA: i32 = 65;
pub const NO_INPUT: i32 = 66;
/// Every eigenvalue computation in an oracle run failed.
pub const SOFTWARE: i32 = 70;
pub const CANT_CREATE: i32 = 73;
pub const IO: i32 = 74;
