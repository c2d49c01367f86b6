//! The weight 1/2 and 3/2 bases, mock modular forms, Zagier's Eisenstein
//! series, and exact integer oracles.

mod forms;
pub mod oracle;
mod qseries;

pub use forms::{
    duality_check, f_coefficient, f_series, g_coefficient, g_mock_series, g_mock_series_default,
    g_series_neg, zagier_eisenstein, BasisSeries, DualityReport, MockForm,
};
pub use qseries::{format_17, number, QSeries};
