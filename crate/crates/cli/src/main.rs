use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use stallings_core::case_engine::{fuzz_theorem, verify_tables};
use stallings_core::functor::core_f_phi;
use stallings_core::parallel::Execution;
use stallings_core::stallings::{contains, gamma, inclusion_morphism, onto_base, parse_subgroup, Subgroup};
use stallings_core::whitehead::{format_restrictions, is_fgr_morphism, parse_restrictions, whitehead_graph, FgrObject};
use stallings_core::words::{parse_hom, Alphabet, GroupHom, Word};

#[derive(Parser)]
#[command(name = "stallings", version, about = "Stallings core graphs and FGR case splitting for free groups")]
struct Cli {
    /// Run batch work on the current thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical core graph of a subgroup.
    Core {
        subgroup: PathBuf,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide membership of a word.
    Member { subgroup: PathBuf, word: String },
    /// Classify the morphism Γ(H) → Γ(K).
    Morphism { h: PathBuf, k: PathBuf },
    /// Conjugate H ≤ K so that Γ(H) → Γ(K) is onto.
    OntoBase { h: PathBuf, k: PathBuf },
    /// Print Core(F_φ(Γ(H))).
    Fphi {
        hom: PathBuf,
        subgroup: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the Whitehead graph of Γ(H).
    Whitehead { subgroup: PathBuf },
    /// Check whether a homomorphism is an FGR morphism between restricted objects.
    FgrCheck { hom: PathBuf, src: PathBuf, dst: PathBuf },
    /// Verify the injectivity case tables and print a TSV report.
    CaseTable,
    /// Sample homomorphisms F_{a,b} → F_X and check injectivity of the root morphism.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn subgroup(path: &Path) -> Result<Subgroup> {
    parse_subgroup(&read(path)?, None).with_context(|| format!("parsing {}", path.display()))
}

fn hom(path: &Path) -> Result<GroupHom> {
    parse_hom(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_dot(path: &Option<PathBuf>, dot: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, dot).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// An optional `alphabet: a b c` line followed by comma- or line-separated edges.
fn restricted_object(path: &Path, base: &Alphabet) -> Result<FgrObject> {
    let mut alphabet = base.clone();
    let mut edges = Vec::new();
    for line in read(path)?.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if let Some(names) = line.strip_prefix("alphabet:") {
            let words: Vec<Word> = names.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
            alphabet = alphabet.union(&Alphabet::from_words(&words));
        } else if !line.is_empty() {
            edges.push(line.to_string());
        }
    }
    let set = parse_restrictions(&edges.join(",")).with_context(|| format!("parsing {}", path.display()))?;
    for e in &set {
        for g in e.generators() {
            alphabet.insert(g.clone());
        }
    }
    Ok(FgrObject::new(alphabet, set)?)
}

fn run(cli: Cli) -> Result<bool> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Core { subgroup: path, dot } => {
            let g = gamma(&subgroup(&path)?);
            print!("{}", g.to_canonical_text());
            write_dot(&dot, &g.to_dot())?;
            Ok(true)
        }
        Command::Member { subgroup: path, word } => {
            let h = subgroup(&path)?;
            let w: Word = word.parse().with_context(|| format!("parsing word {word:?}"))?;
            let member = contains(&h, &w);
            println!("{member}");
            Ok(member)
        }
        Command::Morphism { h, k } => {
            let (h, k) = (subgroup(&h)?, subgroup(&k)?);
            match inclusion_morphism(&h, &k) {
                Some(m) => {
                    println!("{}", m.classify());
                    Ok(true)
                }
                None => {
                    println!("H is not contained in K");
                    Ok(false)
                }
            }
        }
        Command::OntoBase { h, k } => {
            let (h, k) = (subgroup(&h)?, subgroup(&k)?);
            match onto_base(&h, &k) {
                Ok(r) => {
                    let class = r.morphism.classify();
                    println!("u: {}", r.conjugator);
                    println!("surjective: {}", class.surjective());
                    println!("injective: {}", class.injective());
                    Ok(class.surjective())
                }
                Err(e) => {
                    println!("{e}");
                    Ok(false)
                }
            }
        }
        Command::Fphi { hom: hp, subgroup: sp, dot } => {
            let phi = hom(&hp)?;
            let h = parse_subgroup(&read(&sp)?, Some(phi.source()))
                .with_context(|| format!("parsing {} over {}", sp.display(), phi.source()))?;
            let g = core_f_phi(&phi, &gamma(&h))?;
            print!("{}", g.to_canonical_text());
            write_dot(&dot, &g.to_dot())?;
            Ok(true)
        }
        Command::Whitehead { subgroup: path } => {
            let g = gamma(&subgroup(&path)?);
            println!("{}", format_restrictions(&whitehead_graph(g.graph())));
            Ok(true)
        }
        Command::FgrCheck { hom: hp, src, dst } => {
            let phi = hom(&hp)?;
            let src = restricted_object(&src, phi.source())?;
            let dst = restricted_object(&dst, phi.target())?;
            let report = is_fgr_morphism(&src, &dst, &phi)?;
            println!("valid: {}", report.is_valid());
            for v in &report.violations {
                println!("{v}");
            }
            Ok(report.is_valid())
        }
        Command::CaseTable => {
            let report = verify_tables(exec)?;
            log::info!("case table: {} failing rows", report.failures().count());
            print!("{}", report.to_tsv());
            Ok(report.all_listed_pass())
        }
        Command::Fuzz { trials, alphabet_size, max_len, seed } => {
            if alphabet_size == 0 || max_len == 0 {
                bail!("--alphabet-size and --max-len must be positive");
            }
            log::info!("fuzz: {trials} trials, |X| = {alphabet_size}, max length {max_len}, seed {seed}");
            let report = fuzz_theorem(trials, alphabet_size, max_len, seed, exec);
            println!("trials: {}", report.trials);
            println!("counterexamples: {}", report.counterexamples.len());
            println!("errors: {}", report.errors.len());
            for phi in &report.counterexamples {
                println!("counterexample: {phi}");
            }
            for e in &report.errors {
                println!("error: {e}");
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("STALLINGS_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restricted_object_reads_alphabet_and_edges() {
        let dir = std::env::temp_dir().join(format!("stallings-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join("m.txt");
        fs::write(&p, "alphabet: x y z\n# edges\nx.y^-1, y.y^-1\nz.x\n").unwrap();
        let base = Alphabet::new(&["x"]).unwrap();
        let obj = restricted_object(&p, &base).unwrap();
        assert_eq!(obj.alphabet.len(), 3);
        assert_eq!(obj.restrictions, parse_restrictions("x.y^-1, y.y^-1, z.x").unwrap());
        fs::remove_dir_all(dir).unwrap();
    }
}
