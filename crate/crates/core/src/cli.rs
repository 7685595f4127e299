//! The `omega` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;

use crate::buchi::{buchi_to_strong, morphism_to_buchi, weak_to_strong};
use crate::conjugacy::{close_under_conjugation, conjugacy_classes};
use crate::error::{Error, Result};
use crate::format;
use crate::inclusion::{inclusion_test, is_strong, universal, InclusionResult};
use crate::langops::{complement, intersection, inverse_project, language_inclusion, project, union};
use crate::mso::{self, families, Compiler};
use crate::recognizer::{Mode, Recognizer};
use crate::semigroup::ClosureOptions;
use crate::syntactic::syntactic_morphism;
use crate::testgen;

#[derive(Parser, Debug)]
#[command(name = "omega", version, about = "Strongly recognizing morphisms for infinite words")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print |S| |F| |P| of the result.
    #[arg(long, global = true)]
    stats: bool,
    /// Audit associativity of every table and strongness of every result.
    #[arg(long, global = true)]
    audit: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the syntactic morphism.
    Minimize {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether the accepting set is closed under conjugation up to language.
    CheckStrong { file: PathBuf },
    /// Decide L(left) ⊆ L(right).
    Include { left: PathBuf, right: PathBuf },
    /// Decide L(left) = L(right).
    Equiv { left: PathBuf, right: PathBuf },
    /// Decide whether the language contains every word.
    Universal { file: PathBuf },
    /// Print the conjugacy classes of linked pairs.
    Conjugacy { file: PathBuf },
    Complement {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    Union {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    Intersect {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Image under a letter map, or preimage with --inverse.
    Project {
        file: PathBuf,
        map: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Convert a recognizer into a Büchi automaton.
    ToBuchi {
        file: PathBuf,
        /// Drop states that are not both accessible and co-accessible.
        #[arg(long)]
        trim: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Convert a Büchi automaton into a strong recognizer.
    ToMorphism {
        file: PathBuf,
        #[arg(long)]
        minimize: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Formulas of monadic second-order logic.
    #[command(subcommand)]
    Mso(MsoCommand),
    /// Same as `mso table1`.
    Table1(TableArgs),
    /// The adversarial conjugacy instance for parameter n.
    GenAdversarial {
        n: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum MsoCommand {
    /// Compile a formula file to a strong recognizer.
    Compile {
        file: PathBuf,
        /// Write the recognizer here.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Compare with the direct evaluator on this many random words.
        #[arg(long, default_value_t = 0)]
        check: usize,
        /// Print this many models.
        #[arg(long, default_value_t = 0)]
        models: usize,
    },
    /// Compile the three benchmark families.
    Table1(TableArgs),
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Largest parameter k.
    #[arg(long, default_value_t = 6)]
    max_k: usize,
}

/// Exit status of a command.
pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

struct Ctx<'a> {
    global: &'a Global,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn options(&self) -> ClosureOptions {
        if self.global.audit {
            ClosureOptions {
                audit_bound: usize::MAX,
                ..ClosureOptions::unaudited()
            }
        } else {
            ClosureOptions::unaudited()
        }
    }

    fn read(&self, path: &Path) -> Result<String> {
        Ok(fs::read_to_string(path)?)
    }

    fn recognizer(&self, path: &Path) -> Result<Recognizer> {
        format::read_recognizer(&self.read(path)?, self.options())
    }

    fn strong(&self, path: &Path) -> Result<Recognizer> {
        let r = self.recognizer(path)?;
        match r.mode() {
            Mode::Strong => Ok(r),
            Mode::Weak => weak_to_strong(&r),
        }
    }

    fn emit(&mut self, text: &str, out: &Output) -> Result<()> {
        match &out.output {
            Some(path) => fs::write(path, text)?,
            None => self.out.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn result(&mut self, r: &Recognizer, out: &Output) -> Result<i32> {
        if self.global.audit && r.mode() == Mode::Strong && !is_strong(r.morphism(), r.accepting())? {
            return Err(Error::NotStrong);
        }
        if self.global.stats {
            writeln!(self.out, "{}", r.stats())?;
            if out.output.is_none() {
                return Ok(EXIT_TRUE);
            }
        }
        self.emit(&format::write_recognizer(r), out)?;
        Ok(EXIT_TRUE)
    }

    fn verdict(&mut self, res: &InclusionResult, alphabet: &crate::recognizer::Alphabet) -> Result<i32> {
        if let Some(w) = &res.witness {
            writeln!(self.out, "{}", w.display(alphabet))?;
            return Ok(EXIT_FALSE);
        }
        writeln!(self.out, "true")?;
        Ok(EXIT_TRUE)
    }
}

fn include(left: &Recognizer, right: &Recognizer) -> Result<InclusionResult> {
    if left.morphism() == right.morphism() {
        inclusion_test(left.morphism(), left.accepting(), right.accepting())
    } else {
        let to_strong = |r: &Recognizer| match r.mode() {
            Mode::Strong => Ok(r.clone()),
            Mode::Weak => weak_to_strong(r),
        };
        language_inclusion(&to_strong(left)?, &to_strong(right)?)
    }
}

fn table(ctx: &mut Ctx, args: &TableArgs) -> Result<i32> {
    writeln!(ctx.out, "# k  phi: |S| |F| |P|  psi: |S| |F| |P|  chi: |S| |F| |P|")?;
    let mut mismatches = 0;
    for k in 2..=args.max_k {
        let row = families::table_row(k)?;
        let got = [row.phi, row.psi, row.chi];
        let cells: Vec<String> = got
            .iter()
            .map(|s| format!("{} {} {}", s.size, s.linked_pairs, s.accepting))
            .collect();
        writeln!(ctx.out, "{k}  {}", cells.join("  "))?;
        if let Some(want) = families::published(k) {
            mismatches += got
                .iter()
                .zip(want)
                .filter(|(g, w)| (g.size, g.linked_pairs, g.accepting) != *w)
                .count();
        }
        let times: Vec<String> = row.elapsed.iter().map(|t| format!("{:.3}s", t.as_secs_f64())).collect();
        writeln!(ctx.err, "k={k} time phi {} psi {} chi {}", times[0], times[1], times[2])?;
    }
    writeln!(ctx.err, "{mismatches} triples differ from the published table")?;
    Ok(EXIT_TRUE)
}

fn mso_compile(ctx: &mut Ctx, file: &Path, emit: &Option<PathBuf>, check: usize, models: usize) -> Result<i32> {
    let f = mso::parse(&ctx.read(file)?)?;
    let start = Instant::now();
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    let c = Compiler::new().compile_declared(&f, &vars)?;
    let elapsed = start.elapsed();
    let r = &c.recognizer;
    if ctx.global.stats {
        writeln!(ctx.out, "{}", r.stats())?;
        writeln!(ctx.err, "compiled in {:.3}s", elapsed.as_secs_f64())?;
    }
    if let Some(path) = emit {
        fs::write(path, format::write_recognizer(r))?;
    }
    for w in mso::sample_models(r, models) {
        writeln!(ctx.out, "{}", w.display(c.vars.alphabet()))?;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.global.seed);
    for _ in 0..check {
        let w = testgen::random_upword(&mut rng, c.vars.alphabet().len(), 5, 5);
        if mso::evaluate(&f, &c.vars, &w)? != r.member(&w)? {
            writeln!(ctx.out, "{}", w.display(c.vars.alphabet()))?;
            return Ok(EXIT_FALSE);
        }
    }
    if !ctx.global.stats && emit.is_none() && models == 0 && check == 0 {
        ctx.out.write_all(format::write_recognizer(r).as_bytes())?;
    }
    Ok(EXIT_TRUE)
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<i32> {
    match cmd {
        Command::Minimize { file, out } => {
            let r = ctx.recognizer(file)?;
            let m = match r.mode() {
                Mode::Strong => syntactic_morphism(&r)?.recognizer,
                Mode::Weak => weak_to_strong(&r)?,
            };
            ctx.result(&m, out)
        }
        Command::CheckStrong { file } => {
            let r = ctx.recognizer(file)?;
            let closed = close_under_conjugation(r.morphism(), r.accepting())?;
            let res = inclusion_test(r.morphism(), &closed, r.accepting())?;
            ctx.verdict(&res, r.alphabet())
        }
        Command::Include { left, right } => {
            let (l, r) = (ctx.recognizer(left)?, ctx.recognizer(right)?);
            let res = include(&l, &r)?;
            ctx.verdict(&res, l.alphabet())
        }
        Command::Equiv { left, right } => {
            let (l, r) = (ctx.recognizer(left)?, ctx.recognizer(right)?);
            let res = include(&l, &r)?;
            if !res.holds {
                return ctx.verdict(&res, l.alphabet());
            }
            let res = include(&r, &l)?;
            ctx.verdict(&res, l.alphabet())
        }
        Command::Universal { file } => {
            let r = ctx.recognizer(file)?;
            let res = universal(&r)?;
            ctx.verdict(&res, r.alphabet())
        }
        Command::Conjugacy { file } => {
            let r = ctx.recognizer(file)?;
            let part = conjugacy_classes(r.morphism());
            writeln!(ctx.out, "classes {}", part.class_count())?;
            for class in part.classes() {
                let members: Vec<String> = class
                    .iter()
                    .map(|(s, e)| format!("({} {})", s.index(), e.index()))
                    .collect();
                writeln!(ctx.out, "{}", members.join(" "))?;
            }
            if ctx.global.stats {
                writeln!(
                    ctx.out,
                    "linked pairs {} unions {} finds {}",
                    part.linked_pairs().len(),
                    part.unions,
                    part.finds
                )?;
            }
            Ok(EXIT_TRUE)
        }
        Command::Complement { file, out } => {
            let r = complement(&ctx.strong(file)?)?;
            let r = syntactic_morphism(&r)?.recognizer;
            ctx.result(&r, out)
        }
        Command::Union { left, right, out } => {
            let r = union(&ctx.strong(left)?, &ctx.strong(right)?)?;
            ctx.result(&r, out)
        }
        Command::Intersect { left, right, out } => {
            let r = intersection(&ctx.strong(left)?, &ctx.strong(right)?)?;
            ctx.result(&r, out)
        }
        Command::Project {
            file,
            map,
            inverse,
            out,
        } => {
            let r = ctx.strong(file)?;
            let pi = format::read_letter_map(&ctx.read(map)?)?;
            let r = if *inverse {
                inverse_project(&r, &pi)?
            } else {
                project(&r, &pi)?
            };
            ctx.result(&r, out)
        }
        Command::ToBuchi { file, trim, out } => {
            let r = ctx.recognizer(file)?;
            let mut b = morphism_to_buchi(&r);
            if *trim {
                b = b.trim();
            }
            if ctx.global.stats {
                writeln!(ctx.out, "states {} transitions {}", b.states(), b.transitions().len())?;
            }
            ctx.emit(&format::write_buchi(&b), out)?;
            Ok(EXIT_TRUE)
        }
        Command::ToMorphism { file, minimize, out } => {
            let b = format::read_buchi(&ctx.read(file)?)?;
            let mut r = buchi_to_strong(&b, ctx.options())?;
            if *minimize {
                r = syntactic_morphism(&r)?.recognizer;
            }
            ctx.result(&r, out)
        }
        Command::Mso(MsoCommand::Compile {
            file,
            emit,
            check,
            models,
        }) => mso_compile(ctx, file, emit, *check, *models),
        Command::Mso(MsoCommand::Table1(args)) | Command::Table1(args) => table(ctx, args),
        Command::GenAdversarial { n, out } => {
            let fx = testgen::adversarial_fixture(*n)?;
            let r = Recognizer::new(fx.morphism.clone(), fx.family.clone(), Mode::Weak)?;
            if ctx.global.stats {
                writeln!(
                    ctx.err,
                    "|T|={} |D|={} |S|={} family {}",
                    fx.t.elements.len(),
                    fx.t.d.len(),
                    r.semigroup().size(),
                    fx.family.len()
                )?;
            }
            ctx.emit(&format::write_recognizer(&r), out)?;
            Ok(EXIT_TRUE)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        global: &cli.global,
        out,
        err,
    };
    match dispatch(&cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_DATA
        }
    }
}
