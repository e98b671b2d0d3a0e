use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;

use commands::Failure;

/// Exact conservation-law toolkit for solved-form PDE systems.
#[derive(Parser, Debug)]
#[command(name = "clawforge", version)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Also print the raw vectors and the trivial parts stripped from them.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check candidate laws: exit 0 iff every residual is zero.
    ///
    /// Without LAWS, the model's own laws are checked against their recorded
    /// status instead.
    Verify {
        /// Model file or built-in model name.
        model: String,
        /// File with a `[laws]` section.
        laws: Option<String>,
    },
    /// Solve for multipliers polynomial in t, x, u (and first jets).
    Multipliers {
        model: String,
        /// Highest jet order in the ansatz, 0 or 1.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Run the mixed ψ/H method for one generator or a numeric combination.
    Mixed {
        model: String,
        /// Generator label or combination such as `2*X1 + X3`.
        #[arg(long, short)]
        generator: String,
        #[arg(long)]
        psi_degree: Option<u32>,
        #[arg(long)]
        h_degree: Option<u32>,
        /// Highest jet order in the ψ and H ansatz.
        #[arg(long)]
        jet_order: Option<usize>,
        /// Degree of the potential ansatz used to detect trivial laws.
        #[arg(long)]
        theta_degree: Option<u32>,
        /// Exit 1 when no nontrivial law is found.
        #[arg(long)]
        require_laws: bool,
    },
    /// List the built-in models.
    Models,
    /// Apply the Euler operator.
    Euler {
        expr: String,
        #[arg(long, short, default_value = "kdv")]
        model: String,
        /// Dependent variable; all of them when omitted.
        #[arg(long)]
        dep: Option<String>,
    },
    /// Apply a total derivative.
    Tderiv {
        /// Independent variable.
        var: String,
        expr: String,
        #[arg(long, short, default_value = "kdv")]
        model: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::Output {
        json: cli.json,
        verbose: cli.verbose,
    };
    let result = match cli.command {
        Command::Verify { model, laws } => commands::verify(&out, &model, laws.as_deref()),
        Command::Multipliers {
            model,
            order,
            degree,
        } => commands::multipliers(&out, &model, order, degree),
        Command::Mixed {
            model,
            generator,
            psi_degree,
            h_degree,
            jet_order,
            theta_degree,
            require_laws,
        } => commands::mixed(
            &out,
            &model,
            &generator,
            commands::MixedArgs {
                psi_degree,
                h_degree,
                jet_order,
                theta_degree,
                require_laws,
            },
        ),
        Command::Models => commands::models(&out),
        Command::Euler { expr, model, dep } => commands::euler(&out, &model, &expr, dep.as_deref()),
        Command::Tderiv { var, expr, model } => commands::tderiv(&out, &model, &var, &expr),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
