//! Matrix files, generators and the experiment driver.

mod driver;
mod generators;
mod io;
mod record;

pub use driver::{
    build_suite, error_tag, run_experiment, run_row, toeplitz_geometric_log, ExperimentInput,
    ExperimentKind, SizeRange, SuiteConfig, ACOS_DIAGONAL, CROSS_TOL, SMALLDIAG_DIAGONAL,
    SMALLDIAG_OFFDIAG, TOEPLITZ_BASE,
};
pub use generators::{
    gen_paper_matrix, gen_random_smalldiag, gen_toeplitz_geometric, MAX_DIAGONAL_ARG,
    PAPER_MATRIX_IDS,
};
pub use io::{format_entry, format_matrix, parse_entry, parse_matrix, read_matrix, write_matrix};
pub use record::{
    read_records, summary_table, write_records, ExperimentRecord, CSV_COLUMNS, MISSING,
};
