//! Command-line front-end: one subcommand per construction, canonical JSON
//! documents in and out, deterministic reports on standard output.
//!
//! Exit codes: 0 success / property true, 1 property false (with a violation
//! report), 2 invalid input, 3 search budget exceeded. The default budget of
//! 10^6 candidates can be overridden by `--budget` / `--search-budget` or the
//! `RBEXT_BUDGET` environment variable (the flag wins).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rbext::assoc::{verify_algebra, verify_bimodule};
use rbext::dend::verify_dendriform;
use rbext::dendext::{
    build_dend_extension, canonical_dend_section, check_dend_wells_exactness, dend_inducible,
    dend_wells, extract_dend_cocycle, search_dend_equivalence, verify_dend_cocycle,
    verify_dend_equivalence, verify_dend_extension, DendAut, DendAutPair,
};
use rbext::doc::{
    emit_document, emit_matrix, emit_matrix_compact, parse_document, parse_matrix_text, Document,
};
use rbext::ext::{
    build_extension, canonical_section, extract_cocycle, induced_bimodule, search_equivalence,
    semidirect, verify_cocycle, verify_equivalence, verify_extension,
};
use rbext::cohomology::{classify_abelian, cohomology_dim};
use rbext::rb::{verify_rb, verify_rb_bimodule};
use rbext::wells::{
    check_wells_exactness, enumerate_aut, inducible, wells_map, AutPair, RBAut,
};
use rbext::{Error, VerificationReport};

const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "rbext",
    about = "Exact extension theory of Rota-Baxter and dendriform algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Algebra,
    RbAlgebra,
    RbBimodule,
    Dendriform,
    Cocycle,
    DendCocycle,
    Extension,
    DendExtension,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the defining axioms of a document and report every violation
    Verify { kind: VerifyKind, file: PathBuf },
    /// Build the extension determined by a cocycle document
    #[command(alias = "dend-extend")]
    Extend { file: PathBuf },
    /// Extract the cocycle of an extension along a section
    #[command(alias = "dend-extract")]
    Extract {
        file: PathBuf,
        /// Section matrix file, or "auto" for the canonical section
        #[arg(long, default_value = "auto")]
        section: String,
    },
    /// Decide whether two cocycle documents are equivalent
    #[command(alias = "dend-equivalent")]
    Equivalent {
        first: PathBuf,
        second: PathBuf,
        /// Verify this witness matrix instead of searching
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        search_budget: Option<u64>,
    },
    /// Dimension of the operator-algebra cohomology in a given degree
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        degree: usize,
    },
    /// Decide whether an abelian extension represents the zero class
    Classify { file: PathBuf },
    /// Build the split extension of a bimodule document
    Semidirect { file: PathBuf },
    /// List the automorphism group of an algebra over a prime field
    #[command(alias = "dend-enumerate-aut")]
    EnumerateAut {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide whether an automorphism pair lifts to the extension
    #[command(alias = "dend-inducible")]
    Inducible {
        file: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Evaluate the lifting obstruction of an automorphism pair
    #[command(alias = "dend-wells")]
    Wells {
        file: PathBuf,
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exhaustively check exactness of the lifting sequence
    #[command(alias = "dend-wells-exactness")]
    WellsExactness {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_, _) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn budget_from(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("RBEXT_BUDGET")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_BUDGET)
}

fn load(path: &Path) -> Result<Document, Error> {
    parse_document(&fs::read_to_string(path)?)
}

fn report_outcome(report: &VerificationReport) -> u8 {
    print!("{report}");
    u8::from(!report.ok())
}

/// Validation failure of a command input that must hold before computing.
fn invalid(what: &str) -> Error {
    Error::Validation(what.to_string())
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Verify { kind, file } => {
            let report = match (kind, load(&file)?) {
                (VerifyKind::Algebra, Document::Algebra(a)) => verify_algebra(&a),
                (VerifyKind::RbAlgebra, Document::RBAlgebra(a)) => verify_rb(&a),
                (VerifyKind::RbBimodule, Document::RBBimodule { base, module }) => {
                    let mut r = verify_bimodule(&module.module);
                    r.merge(verify_rb_bimodule(&base, &module));
                    r
                }
                (VerifyKind::Dendriform, Document::DendAlgebra(d)) => verify_dendriform(&d),
                (VerifyKind::Cocycle, Document::RBCocycle(c)) => verify_cocycle(&c),
                (VerifyKind::DendCocycle, Document::DendCocycle(c)) => verify_dend_cocycle(&c),
                (VerifyKind::Extension, Document::Extension(x)) => verify_extension(&x)?,
                (VerifyKind::DendExtension, Document::DendExtension(x)) => {
                    verify_dend_extension(&x)?
                }
                (_, doc) => {
                    return Err(invalid(&format!(
                        "document kind {:?} does not match the requested check",
                        doc.kind()
                    )))
                }
            };
            Ok(report_outcome(&report))
        }
        Cmd::Extend { file } => match load(&file)? {
            Document::RBCocycle(c) => {
                let report = verify_cocycle(&c);
                if !report.ok() {
                    return Ok(report_outcome(&report));
                }
                print!("{}", emit_document(&Document::Extension(build_extension(&c)?)));
                Ok(0)
            }
            Document::DendCocycle(c) => {
                let report = verify_dend_cocycle(&c);
                if !report.ok() {
                    return Ok(report_outcome(&report));
                }
                print!(
                    "{}",
                    emit_document(&Document::DendExtension(build_dend_extension(&c)?))
                );
                Ok(0)
            }
            _ => Err(invalid("extend needs a cocycle document")),
        },
        Cmd::Extract { file, section } => match load(&file)? {
            Document::Extension(x) => {
                require_ok(&verify_extension(&x)?, "extension")?;
                let s = match section.as_str() {
                    "auto" => canonical_section(&x)?,
                    path => parse_matrix_text(&fs::read_to_string(path)?, &x.a.alg.field)?,
                };
                let c = extract_cocycle(&x, &s)?;
                print!("{}", emit_document(&Document::RBCocycle(c)));
                Ok(0)
            }
            Document::DendExtension(x) => {
                require_ok(&verify_dend_extension(&x)?, "extension")?;
                let s = match section.as_str() {
                    "auto" => canonical_dend_section(&x)?,
                    path => parse_matrix_text(&fs::read_to_string(path)?, &x.a.field)?,
                };
                let c = extract_dend_cocycle(&x, &s)?;
                print!("{}", emit_document(&Document::DendCocycle(c)));
                Ok(0)
            }
            _ => Err(invalid("extract needs an extension document")),
        },
        Cmd::Equivalent {
            first,
            second,
            witness,
            search_budget,
        } => {
            let budget = budget_from(search_budget);
            match (load(&first)?, load(&second)?) {
                (Document::RBCocycle(c), Document::RBCocycle(c2)) => {
                    require_ok(&verify_cocycle(&c), "first cocycle")?;
                    require_ok(&verify_cocycle(&c2), "second cocycle")?;
                    match witness {
                        Some(path) => {
                            let w =
                                parse_matrix_text(&fs::read_to_string(path)?, &c.field())?;
                            answer_equivalent(verify_equivalence(&c, &c2, &w)?, None)
                        }
                        None => {
                            let w = search_equivalence(&c, &c2, budget)?;
                            answer_equivalent(w.is_some(), w)
                        }
                    }
                }
                (Document::DendCocycle(c), Document::DendCocycle(c2)) => {
                    require_ok(&verify_dend_cocycle(&c), "first cocycle")?;
                    require_ok(&verify_dend_cocycle(&c2), "second cocycle")?;
                    match witness {
                        Some(path) => {
                            let w =
                                parse_matrix_text(&fs::read_to_string(path)?, &c.field())?;
                            answer_equivalent(verify_dend_equivalence(&c, &c2, &w)?, None)
                        }
                        None => {
                            let w = search_dend_equivalence(&c, &c2, budget)?;
                            answer_equivalent(w.is_some(), w)
                        }
                    }
                }
                _ => Err(invalid("equivalent needs two cocycle documents of one kind")),
            }
        }
        Cmd::Cohomology {
            file,
            module,
            degree,
        } => {
            let Document::RBAlgebra(a) = load(&file)? else {
                return Err(invalid("cohomology needs an operator algebra document"));
            };
            let Document::RBBimodule { base, module } = load(&module)? else {
                return Err(invalid("--module needs a bimodule document"));
            };
            require_ok(&verify_rb(&a), "algebra")?;
            if base != a {
                return Err(invalid("bimodule base differs from the given algebra"));
            }
            require_ok(&verify_rb_bimodule(&a, &module), "bimodule")?;
            let dim = cohomology_dim(&a, &module, degree)?;
            println!("dim H^{degree} = {dim}");
            Ok(0)
        }
        Cmd::Classify { file } => {
            let Document::Extension(x) = load(&file)? else {
                return Err(invalid("classify needs an extension document"));
            };
            require_ok(&verify_extension(&x)?, "extension")?;
            let bs = induced_bimodule(&x)?;
            let class = classify_abelian(&x, &bs)?;
            if class.is_trivial() {
                println!("class: zero");
                Ok(0)
            } else {
                println!("class: nonzero");
                Ok(1)
            }
        }
        Cmd::Semidirect { file } => {
            let Document::RBBimodule { base, module } = load(&file)? else {
                return Err(invalid("semidirect needs a bimodule document"));
            };
            let x = semidirect(&base, &module)?;
            print!("{}", emit_document(&Document::Extension(x)));
            Ok(0)
        }
        Cmd::EnumerateAut { file, budget } => {
            let budget = budget_from(budget);
            let matrices: Vec<String> = match load(&file)? {
                Document::RBAlgebra(a) => {
                    require_ok(&verify_rb(&a), "algebra")?;
                    enumerate_aut(&a, budget)?
                        .iter()
                        .map(|g| emit_matrix_compact(&g.m))
                        .collect()
                }
                Document::DendAlgebra(d) => {
                    require_ok(&verify_dendriform(&d), "algebra")?;
                    rbext::dendext::enumerate_dend_aut(&d, budget)?
                        .iter()
                        .map(|g| emit_matrix_compact(&g.m))
                        .collect()
                }
                _ => return Err(invalid("enumerate-aut needs an algebra document")),
            };
            println!("{} automorphisms", matrices.len());
            for m in matrices {
                println!("{m}");
            }
            Ok(0)
        }
        Cmd::Inducible { file, pair, budget } => {
            let budget = budget_from(budget);
            match load(&file)? {
                Document::Extension(x) => {
                    require_ok(&verify_extension(&x)?, "extension")?;
                    let p = rb_pair(&x, &load(&pair)?)?;
                    answer_bool(inducible(&x, &p, budget)?, "inducible", "not inducible")
                }
                Document::DendExtension(x) => {
                    require_ok(&verify_dend_extension(&x)?, "extension")?;
                    let p = dend_pair(&x, &load(&pair)?)?;
                    answer_bool(
                        dend_inducible(&x, &p, budget)?,
                        "inducible",
                        "not inducible",
                    )
                }
                _ => Err(invalid("inducible needs an extension document")),
            }
        }
        Cmd::Wells { file, pair, budget } => {
            let budget = budget_from(budget);
            match load(&file)? {
                Document::Extension(x) => {
                    require_ok(&verify_extension(&x)?, "extension")?;
                    let p = rb_pair(&x, &load(&pair)?)?;
                    let w = wells_map(&x, &p, budget)?;
                    if let Some(phi) = w.witness {
                        println!("obstruction vanishes; witness:");
                        print!("{}", emit_matrix(&phi));
                        Ok(0)
                    } else {
                        println!("obstruction nonzero");
                        Ok(1)
                    }
                }
                Document::DendExtension(x) => {
                    require_ok(&verify_dend_extension(&x)?, "extension")?;
                    let p = dend_pair(&x, &load(&pair)?)?;
                    let w = dend_wells(&x, &p, budget)?;
                    if let Some(phi) = w.witness {
                        println!("obstruction vanishes; witness:");
                        print!("{}", emit_matrix(&phi));
                        Ok(0)
                    } else {
                        println!("obstruction nonzero");
                        Ok(1)
                    }
                }
                _ => Err(invalid("wells needs an extension document")),
            }
        }
        Cmd::WellsExactness { file, budget } => {
            let budget = budget_from(budget);
            let report = match load(&file)? {
                Document::Extension(x) => {
                    require_ok(&verify_extension(&x)?, "extension")?;
                    check_wells_exactness(&x, budget)?
                }
                Document::DendExtension(x) => {
                    require_ok(&verify_dend_extension(&x)?, "extension")?;
                    check_dend_wells_exactness(&x, budget)?
                }
                _ => return Err(invalid("wells-exactness needs an extension document")),
            };
            for node in &report.nodes {
                println!("{}: {}", node.name, if node.ok { "ok" } else { "FAIL" });
            }
            Ok(u8::from(!report.ok()))
        }
    }
}

/// Rejects an input whose axioms fail before any computation runs.
fn require_ok(report: &VerificationReport, what: &str) -> Result<(), Error> {
    if report.ok() {
        Ok(())
    } else {
        Err(invalid(&format!("{what} fails its axioms:\n{report}")))
    }
}

fn rb_pair(x: &rbext::ext::Extension, doc: &Document) -> Result<AutPair, Error> {
    let Document::AutPair { field, beta, alpha } = doc else {
        return Err(invalid("--pair needs an automorphism pair document"));
    };
    if *field != x.a.alg.field {
        return Err(invalid("pair field differs from the extension field"));
    }
    Ok(AutPair {
        beta: RBAut::new(x.b.clone(), beta.clone())?,
        alpha: RBAut::new(x.a.clone(), alpha.clone())?,
    })
}

fn dend_pair(
    x: &rbext::dendext::DendExtension,
    doc: &Document,
) -> Result<DendAutPair, Error> {
    let Document::AutPair { field, beta, alpha } = doc else {
        return Err(invalid("--pair needs an automorphism pair document"));
    };
    if *field != x.a.field {
        return Err(invalid("pair field differs from the extension field"));
    }
    Ok(DendAutPair {
        beta: DendAut::new(x.b.clone(), beta.clone())?,
        alpha: DendAut::new(x.a.clone(), alpha.clone())?,
    })
}

fn answer_equivalent(yes: bool, witness: Option<rbext::Matrix>) -> Result<u8, Error> {
    if yes {
        match witness {
            Some(w) => {
                println!("equivalent; witness:");
                print!("{}", emit_matrix(&w));
            }
            None => println!("equivalent"),
        }
        Ok(0)
    } else {
        println!("not equivalent");
        Ok(1)
    }
}

fn answer_bool(yes: bool, if_true: &str, if_false: &str) -> Result<u8, Error> {
    if yes {
        println!("{if_true}");
        Ok(0)
    } else {
        println!("{if_false}");
        Ok(1)
    }
}
