//! Regenerates the canonical JSON fixture corpus in `fixtures/`.
//!
//! Run with `cargo run -p rbext --example gen_fixtures`. Output is canonical,
//! so a clean checkout regenerates byte-identical files.

use std::fs;
use std::path::PathBuf;

use rbext::doc::{emit_document, Document};
use rbext::fixtures::*;
use rbext::{Field, Matrix};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(&dir).unwrap();

    let q = Field::Rationals;
    let f2 = Field::prime(2).unwrap();

    let docs: Vec<(&str, Document)> = vec![
        ("fix_a.json", Document::RBAlgebra(fix_a(&q))),
        ("fix_a0.json", Document::RBAlgebra(fix_a0(&q))),
        ("fix_a_f2.json", Document::RBAlgebra(fix_a(&f2))),
        ("fix_a0_f2.json", Document::RBAlgebra(fix_a0(&f2))),
        (
            "fix_b0.json",
            Document::RBBimodule {
                base: fix_a(&q),
                module: fix_b0_over(&fix_a(&q)),
            },
        ),
        (
            "fix_b0_a0.json",
            Document::RBBimodule {
                base: fix_a0(&q),
                module: fix_b0_over(&fix_a0(&q)),
            },
        ),
        (
            "fix_b0_f2.json",
            Document::RBBimodule {
                base: fix_a(&f2),
                module: fix_b0_over(&fix_a(&f2)),
            },
        ),
        ("fix_sd_cocycle.json", Document::RBCocycle(fix_sd_cocycle(&q))),
        ("fix_sd.json", Document::Extension(fix_sd(&q))),
        ("fix_sd_f2.json", Document::Extension(fix_sd(&f2))),
        ("fix_phi_cocycle.json", Document::RBCocycle(fix_phi_cocycle(&q))),
        (
            "fix_ns_cocycle_f2.json",
            Document::RBCocycle(fix_ns_cocycle_f2()),
        ),
        ("fix_ns_f2.json", Document::Extension(fix_ns_f2())),
        ("fix_d.json", Document::DendAlgebra(fix_d(&q))),
        ("fix_d_f2.json", Document::DendAlgebra(fix_d(&f2))),
        (
            "fix_dreg_cocycle.json",
            Document::DendCocycle(fix_dreg_cocycle(&q)),
        ),
        ("fix_dsd_f2.json", Document::DendExtension(fix_dsd(&f2))),
        ("fix_dns_f2.json", Document::DendExtension(fix_dns_f2())),
        (
            "id_pair_f2.json",
            Document::AutPair {
                field: f2,
                beta: Matrix::identity(1, &f2),
                alpha: Matrix::identity(2, &f2),
            },
        ),
    ];

    for (name, doc) in docs {
        fs::write(dir.join(name), emit_document(&doc)).unwrap();
        println!("wrote {name}");
    }
}
