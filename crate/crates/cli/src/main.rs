//! `orbistring`: command-line access to the orbistring-core computations.
//!
//! Exit status: 0 on success, 1 on a domain error (JSON description on
//! stderr), 2 on a usage error.

mod commands;
mod inputs;
mod output;
mod selftest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbistring_core::gchord::DEFAULT_SEARCH_CAP;

use inputs::{int_pair, load_group, CliError, RingChoice};
use output::{Format, Output};

#[derive(Parser)]
#[command(name = "orbistring", version, about = "Exact orbifold string topology for finite global quotients")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for randomized property runs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Catalog name (Z1..Z8, S3, S4, D4, Q8, Z2xZ2, ...), a JSON file or inline JSON.
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct RingArgs {
    /// Lens space ring L(n,p), given as `n,p`.
    #[arg(long, value_parser = int_pair, conflicts_with_all = ["sphere", "center"])]
    lens: Option<(i64, i64)>,
    /// Ring of [S²/Z_p].
    #[arg(long, conflicts_with = "center")]
    sphere: Option<u32>,
    /// Center of the group algebra of a group, concentrated in degree 0.
    #[arg(long)]
    center: Option<String>,
    /// Degree window `lo,hi`.
    #[arg(long, value_parser = int_pair, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
}

impl RingArgs {
    fn choice(&self) -> Result<RingChoice, CliError> {
        match (&self.lens, self.sphere, &self.center) {
            (Some((n, p)), _, _) => {
                let p = u32::try_from(*p).map_err(|_| CliError::new("bv", format!("p = {p} is out of range")))?;
                Ok(RingChoice::Lens(*n, p))
            }
            (_, Some(p), _) => Ok(RingChoice::Sphere(p)),
            (_, _, Some(g)) => Ok(RingChoice::Center(load_group(g)?)),
            _ => Err(CliError::new("usage", "choose a ring with --lens, --sphere or --center")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Multiplication table and basic data of a group.
    Group(GroupArg),
    /// Conjugacy classes with centralizers.
    Classes(GroupArg),
    /// The Dijkgraaf–Witten algebra Z(Q[G]) on class sums.
    Dw(GroupArg),
    /// Discrete torsion τ(g,h) = α(g,h)/α(h,h⁻¹gh) of a cocycle.
    Torsion {
        #[command(flatten)]
        group: GroupArg,
        /// Catalog cocycle name, a JSON file or inline JSON.
        #[arg(long, default_value = "trivial")]
        cocycle: String,
    },
    /// Center of the α-twisted group algebra.
    TwistedCenter {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value = "trivial")]
        cocycle: String,
    },
    /// Orbifold string ring of a G-set: a JSON G-set, the cosets of a
    /// subgroup, or a point.
    StringRing {
        #[arg(long, conflicts_with = "group")]
        gset: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// Generators of a subgroup H; the G-set is then G/H.
        #[arg(long, num_args = 1.., requires = "group")]
        cosets: Vec<String>,
    },
    /// Compares string rings: [G/H ⟳ G] against [•/H], or two G-sets.
    Morita {
        #[arg(long)]
        group: Option<String>,
        /// Generators of H.
        #[arg(long, num_args = 1..)]
        gens: Vec<String>,
        #[arg(long, requires = "right")]
        left: Option<String>,
        #[arg(long, requires = "left")]
        right: Option<String>,
    },
    /// Validates an input document of the given kind.
    Validate {
        /// group, gset, cocycle, diagram, cactus or gdiagram.
        kind: String,
        input: String,
    },
    /// Operad composition of marked chord diagrams.
    Compose {
        #[arg(long)]
        outer: String,
        #[arg(long, num_args = 0..)]
        parts: Vec<String>,
    },
    /// The cactus of a chord diagram.
    Cactus {
        #[arg(long)]
        diagram: String,
    },
    /// A chord diagram representing a cactus.
    Uncactus {
        #[arg(long)]
        cactus: String,
    },
    /// Incoming holonomies of a G-decorated diagram.
    Ih {
        #[arg(long)]
        diagram: String,
    },
    /// Outgoing holonomy of a G-decorated diagram.
    Oh {
        #[arg(long)]
        diagram: String,
    },
    /// G-graded composition; parts must match the incoming holonomies.
    Gcompose {
        #[arg(long)]
        base: String,
        #[arg(long, num_args = 0..)]
        parts: Vec<String>,
    },
    /// Decorated classes over a base diagram with a given outer holonomy.
    Enumerate {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        outer: String,
        /// Restrict to these incoming holonomies.
        #[arg(long, num_args = 1..)]
        inner: Vec<String>,
        /// Largest number of decorations to run through.
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: u128,
        /// Report class and orbit counts instead of listing classes.
        #[arg(long)]
        fiber: bool,
    },
    /// A graded ring and its multiplication table over a degree window.
    Ring(RingArgs),
    /// Checks the BV axioms for an operator Δ (zero by default).
    Bvcheck {
        #[command(flatten)]
        ring: RingArgs,
        /// Sparse matrix `{"entries": [[row, col, value], ...]}`.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Runs the seeded property suite.
    Selftest,
}

fn run(cli: &Cli) -> Result<(Output, bool), CliError> {
    let ok = |o: Output| Ok((o, true));
    match &cli.command {
        Command::Group(g) => ok(commands::group(&g.group)?),
        Command::Classes(g) => ok(commands::classes(&g.group)?),
        Command::Dw(g) => ok(commands::dw(&g.group)?),
        Command::Torsion { group, cocycle } => ok(commands::torsion(&group.group, cocycle)?),
        Command::TwistedCenter { group, cocycle } => ok(commands::twisted(&group.group, cocycle)?),
        Command::StringRing { gset, group, cosets } => ok(commands::string_ring(gset.as_deref(), group.as_deref(), cosets)?),
        Command::Morita { group, gens, left, right } => {
            ok(commands::morita(group.as_deref(), gens, left.as_deref(), right.as_deref())?)
        }
        Command::Validate { kind, input } => ok(commands::validate(kind, input)?),
        Command::Compose { outer, parts } => ok(commands::compose_cmd(outer, parts)?),
        Command::Cactus { diagram } => ok(commands::cactus(diagram)?),
        Command::Uncactus { cactus } => ok(commands::uncactus(cactus)?),
        Command::Ih { diagram } => ok(commands::ih(diagram)?),
        Command::Oh { diagram } => ok(commands::oh(diagram)?),
        Command::Gcompose { base, parts } => ok(commands::gcompose(base, parts)?),
        Command::Enumerate { diagram, group, outer, inner, cap, fiber } => ok(commands::enumerate(&commands::EnumerateArgs {
            diagram,
            group,
            outer,
            inner,
            cap: *cap,
            fiber: *fiber,
        })?),
        Command::Ring(r) => ok(commands::ring(&r.choice()?, r.window)?),
        Command::Bvcheck { ring, delta } => ok(commands::bvcheck(&ring.choice()?, ring.window, delta.as_deref())?),
        Command::Selftest => Ok(selftest::run(cli.seed)),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, passed)) => {
            println!("{}", out.render(cli.format));
            if passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", serde_json::json!({ "error": "selftest", "message": "some checks failed" }));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(if e.kind == "usage" { 2 } else { 1 })
        }
    }
}
