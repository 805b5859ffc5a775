//! Exact multi-qubit statevectors with projective (Lüders) measurement.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: state vectors, dense operators and a Hermitian eigensolver;
//! - [`states`]: product kets, singlets, the four-qubit spin-zero basis and η̃;
//! - [`observables`]: observables as spectral data, embeddings, functional
//!   dependence and rotation audits;
//! - [`measurement`]: Born probabilities, collapse, sequences, joint
//!   distributions and sampling;
//! - [`scenario`]: the `.qsc` language and the single-spin protocol checks;
//! - [`cli`]: the commands behind the `luders` binary.
//!
//! All thresholds come from [`Config`].
//!
//! ```
//! use luders::measurement::born_distribution;
//! use luders::observables::{embed, observable_f};
//! use luders::states::eta_tilde;
//! use luders::Config;
//!
//! let f = embed(&observable_f(), &[1, 2, 3, 4], 8).unwrap();
//! let d = born_distribution(&eta_tilde(), &f, &Config::default()).unwrap();
//! assert!((d.prob_of(1.0) - 1.0 / 12.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod config;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod observables;
pub mod scenario;
pub mod states;

pub use config::Config;
pub use error::{Error, Result};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

book_chapters! {
    book_introduction => "introduction.md",
    book_linear_algebra => "linear-algebra.md",
    book_states => "states.md",
    book_observables => "observables.md",
    book_measurement => "measurement.md",
    book_functional_dependence => "functional-dependence.md",
    book_invariance => "invariance.md",
    book_scenario_language => "scenario-language.md",
    book_cli => "cli.md",
}
