//! Property tests over randomly drawn valid programs: wire-format round
//! trips, refusal of silent reinterpretation under token mutation, and
//! fuel monotonicity of the evaluator.

use opgraph::codec::{decode, encode, enumerate, CodeSpace};
use opgraph::context::AdmissibleContext;
use opgraph::eval::{eval, EvalOutcome, Fuel, Value};
use opgraph::graph::Program;
use opgraph::{programs, text};
use proptest::prelude::*;
use std::sync::OnceLock;

/// Pool of valid canonical programs: the enumerated world up to 20 bits
/// plus the larger stock constructions.
fn pool() -> &'static Vec<Program> {
    static POOL: OnceLock<Vec<Program>> = OnceLock::new();
    POOL.get_or_init(|| {
        let space = CodeSpace::bare();
        let mut all: Vec<Program> =
            enumerate(&space, 20).iter().map(|(_, _, p)| p.clone()).collect();
        all.push(programs::add_program());
        all.push(programs::mul_shifted_program());
        all.push(programs::pred_program());
        all.push(programs::const_program(5));
        all
    })
}

fn arb_program() -> impl Strategy<Value = Program> {
    (0usize..pool().len()).prop_map(|i| pool()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_round_trip(p in arb_program()) {
        let s = text::serialize(&p);
        let q = text::parse(&s).unwrap();
        prop_assert_eq!(&q, &p.canonicalize());
        prop_assert_eq!(text::serialize(&q), s);
    }

    #[test]
    fn binary_round_trip(p in arb_program()) {
        let space = CodeSpace::bare();
        let code = encode(&p, &space).unwrap();
        let q = decode(&code, &space).unwrap();
        prop_assert_eq!(q, p.canonicalize());
    }

    #[test]
    fn mutated_number_never_reinterprets_silently(p in arb_program(), pick in any::<u32>()) {
        let s = text::serialize(&p);
        // locate numeric tokens and bump one of them by one
        let mut numbers = Vec::new();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                numbers.push((start, i));
            } else {
                i += 1;
            }
        }
        prop_assume!(!numbers.is_empty());
        let (start, end) = numbers[pick as usize % numbers.len()];
        let old: u64 = s[start..end].parse().unwrap();
        let mutated = format!("{}{}{}", &s[..start], old + 1, &s[end..]);
        match text::parse(&mutated) {
            Err(_) => {}
            Ok(q) => prop_assert_ne!(q.canonicalize(), p.canonicalize(),
                "mutation at {}..{} was silently absorbed", start, end),
        }
    }

    #[test]
    fn fuel_monotonicity(p in arb_program(), seed in 1u64..500, b1 in 1u64..150, extra in 1u64..150) {
        let ctx = AdmissibleContext::bare();
        let m = p.arity().m as usize;
        let comps: Vec<u64> = (0..m).map(|i| 1 + (seed.wrapping_mul(i as u64 + 3)) % 5).collect();
        let args = Value::new(comps).unwrap();
        let b2 = b1 + extra;
        let small = eval(&p, &args, Fuel::with_budget(b1), &ctx).unwrap();
        let large = eval(&p, &args, Fuel::with_budget(b2), &ctx).unwrap();
        if let EvalOutcome::Defined(v) = small {
            prop_assert_eq!(large, EvalOutcome::Defined(v));
        }
    }

    #[test]
    fn serialize_is_isomorphism_invariant(p in arb_program()) {
        // re-presenting the same tree through the split graph+binding
        // constructor must serialize identically
        let canon = p.canonicalize();
        let s1 = text::serialize(&canon);
        let rebuilt = Program::with_binding(canon.graph.clone(), vec![]).unwrap();
        prop_assert_eq!(text::serialize(&rebuilt), s1);
    }
}
