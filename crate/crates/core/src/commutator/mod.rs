//! Commutator calculus on truncations: iterated commutators, the two forms of
//! the one-period momentum drift, mollification, the second-difference
//! seminorm, BCH and power-growth bounds, and Fourier functional calculus.

mod algebra;
mod bt;
mod regularity;

pub use algebra::{ad_k, ad_k_compressed, bch_check, fourier_calculus, power_growth, smoothed_arc_indicator, BchReport, FourierCalculus, PowerGrowth};
pub use bt::{commutator_bt, commutator_bt_with, BtReport};
pub use regularity::{
    c11_seminorm, derivative_sup, gauss_hermite, mollifier_rate, mollify, potential_derivative, second_difference_l1, InnerGrid, MollifierRate,
    RegularitySeminorm, DEFAULT_T_MIN, T_NODES_PER_DECADE,
};
