//! Command-line surface: subcommands, flags, and the output format switch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact computations in lattice Heisenberg modules and their coinvariants.
#[derive(Parser, Debug)]
#[command(name = "coinv", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// How reports are rendered on stdout.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Canonical JSON with sorted keys (byte-stable across runs).
    Json,
    /// Plain fixed-width text.
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify bracket, Virasoro, and grading identities by exhaustive sweep.
    Axioms {
        /// Lattice: a preset (`A1`, `A2`, `A1^k`), inline JSON `{"gram": [[..]]}`,
        /// or a path to such a JSON file.
        #[arg(long)]
        lattice: String,
        /// Top monomial degree swept by every check.
        #[arg(long, default_value_t = 6)]
        ndeg: i64,
        /// Write the report (with timing) to this file as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },

    /// Filtered coinvariant dimensions of a module against an outgoing span.
    Coinv {
        #[arg(long)]
        lattice: String,
        /// Module level: 0 or 1.
        #[arg(long)]
        level: u8,
        /// Report dimensions for filtration degrees 0..=NDEG.
        #[arg(long)]
        ndeg: i64,
        /// Margins as `M_POLE,M_DEG,N_TRUNC`; defaults scale with --ndeg.
        #[arg(long)]
        margins: Option<String>,
        /// Siegel point JSON file (source of the outgoing span).
        #[arg(long)]
        point: Option<PathBuf>,
        /// Hyperelliptic curve: preset name, inline JSON, or JSON file.
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },

    /// Act on a Siegel point by a word in the symplectic generators S and T
    /// and compare the resulting coinvariant reports.
    Orbit {
        /// Word over the alphabet {S, T}, applied left to right; empty means
        /// the identity.
        #[arg(default_value = "")]
        word: String,
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 1)]
        level: u8,
        #[arg(long)]
        ndeg: i64,
        #[arg(long)]
        margins: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },

    /// Expand curve functions at the point at infinity and report the
    /// Weierstrass gap set.
    CurveExpand {
        #[arg(long)]
        curve: String,
        /// Margins as `M_POLE,M_DEG,N_TRUNC` (the middle slot is unused here);
        /// defaults scale with the genus.
        #[arg(long)]
        margins: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },

    /// Check that every residue pairing on an outgoing span vanishes.
    Isotropy {
        #[arg(long)]
        point: Option<PathBuf>,
        #[arg(long)]
        curve: Option<String>,
        /// Margins as `M_POLE,M_DEG,N_TRUNC` (the middle slot is unused here).
        #[arg(long)]
        margins: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },

    /// Verify nilpotent quadratic exponentials terminate and invert.
    ExpCheck {
        #[arg(long)]
        lattice: String,
        /// Top monomial degree the exponentials are tested on.
        #[arg(long, default_value_t = 6)]
        ndeg: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}
