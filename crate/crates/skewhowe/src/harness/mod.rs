//! Monte Carlo estimation of the correlation kernel and the comparison of the
//! empirical, exact and sine-kernel curves, with CSV/JSON output.

mod compare;
mod output;
mod sampling;
mod stats;

pub use compare::{anchor_coordinate, compare_curves, Comparison, ComparisonRow};
pub use output::{read_records, write_records, Format, Metadata};
pub use sampling::{run_sampling, ReplicateCounts, SampleBatch, SAMPLING_LIMIT};
pub use stats::{empirical_kernel_ratio, BoxSummary, EmpiricalRow, EmpiricalStats};
