//! Golden-file checks: the canonical text of the stock shifted-addition
//! program and the first 200 ranks of the bare-space enumeration are
//! committed fixtures; any drift in the wire formats shows up here.

use opgraph::codec::{enumerate, CodeSpace};
use opgraph::text;

#[test]
fn add_program_text_matches_golden() {
    let expected = include_str!("golden/add_program.txt");
    let got = text::serialize(&opgraph::programs::add_program());
    assert_eq!(got, expected, "canonical text of the add program changed");
    // and the golden parses back to the same program
    let parsed = text::parse(expected).unwrap();
    assert_eq!(parsed, opgraph::programs::add_program().canonicalize());
}

#[test]
fn first_200_ranks_match_golden() {
    let expected = include_str!("golden/first_200_ranks.tsv");
    let space = CodeSpace::bare();
    let e = enumerate(&space, 28);
    let mut got = String::from("rank\tcode\tprogram\n");
    for (rank, code, program) in e.iter().take(200) {
        got.push_str(&format!("{}\t{}\t{}\n", rank.0, code, text::serialize_compact(program)));
    }
    assert_eq!(got, expected, "rank table changed; codes or ordering drifted");
}
