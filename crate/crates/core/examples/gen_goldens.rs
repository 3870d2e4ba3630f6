//! Regenerates the committed golden fixtures. Run from the crate root:
//! cargo run -p opgraph --example gen_goldens
use opgraph::codec::{enumerate, CodeSpace};
use opgraph::programs;
use opgraph::text;

fn main() {
    let space = CodeSpace::bare();
    let e = enumerate(&space, 28);
    let mut table = String::from("rank\tcode\tprogram\n");
    for (rank, code, program) in e.iter().take(200) {
        table.push_str(&format!("{}\t{}\t{}\n", rank.0, code, text::serialize_compact(program)));
    }
    std::fs::write("crates/core/tests/golden/first_200_ranks.tsv", table).unwrap();
    std::fs::write(
        "crates/core/tests/golden/add_program.txt",
        text::serialize(&programs::add_program()),
    )
    .unwrap();
    println!("goldens written");
}
