//! Stock program constructions used across tests, sweeps, and the CLI.

use crate::basic::BasicFunc;
use crate::graph::Program;

fn leaf(bf: BasicFunc) -> Program {
    Program::leaf(bf).expect("stock leaf")
}

/// The identity `(1,1)`-program: `pr_1^1`.
pub fn identity_program() -> Program {
    leaf(BasicFunc::Proj(1, 1))
}

/// The `(0,1)` constant program for `x`: a successor tower over `one 0`.
pub fn const_program(x: u64) -> Program {
    assert!(x >= 1);
    let mut p = leaf(BasicFunc::One(0));
    for _ in 1..x {
        p = Program::compose(p, leaf(BasicFunc::Suc)).expect("const tower");
    }
    p
}

/// Shifted addition built by primitive recursion:
/// `h(x,1) = x`, `h(x,k+1) = h(x,k) + 1`, hence `h(x,y) = x + y - 1`.
/// This is addition conjugated by the shift `x ↦ x - 1`.
pub fn add_program() -> Program {
    let base = leaf(BasicFunc::Proj(1, 1));
    let step = Program::compose(leaf(BasicFunc::Proj(3, 3)), leaf(BasicFunc::Suc))
        .expect("step of add");
    Program::prim_rec(base, step).expect("add program")
}

/// Shifted multiplication built by iterating shifted addition:
/// `h(x,1) = x`, `h(x,k+1) = x + h(x,k) - 1`, hence `h(x,y) = y(x-1) + 1`.
/// This is multiplication conjugated by the same shift.
pub fn mul_shifted_program() -> Program {
    let pick = Program::tuple(vec![leaf(BasicFunc::Proj(3, 1)), leaf(BasicFunc::Proj(3, 3))])
        .expect("argument pair");
    let step = Program::compose(pick, add_program()).expect("step of mul");
    Program::prim_rec(leaf(BasicFunc::Proj(1, 1)), step).expect("mul program")
}

/// Truncated predecessor by primitive recursion over no parameters:
/// `h(1) = 1`, `h(k+1) = k`, hence `h(x) = max(x-1, 1)`.
pub fn pred_program() -> Program {
    Program::prim_rec(leaf(BasicFunc::One(0)), leaf(BasicFunc::Proj(2, 1))).expect("pred program")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::AdmissibleContext;
    use crate::eval::{eval, EvalOutcome, Fuel, Value};

    #[test]
    fn const_program_values() {
        let ctx = AdmissibleContext::bare();
        for x in 1..=6 {
            let out = eval(&const_program(x), &Value::empty(), Fuel::default(), &ctx).unwrap();
            assert_eq!(out, EvalOutcome::Defined(Value::single(x)));
        }
    }

    #[test]
    fn mul_shifted_small_values() {
        let ctx = AdmissibleContext::bare();
        let p = mul_shifted_program();
        for (x, y, want) in [(1, 5, 1), (2, 4, 5), (3, 3, 7), (5, 2, 9)] {
            let args = Value::new(vec![x, y]).unwrap();
            let out = eval(&p, &args, Fuel::default(), &ctx).unwrap();
            assert_eq!(out, EvalOutcome::Defined(Value::single(want)), "at ({x},{y})");
        }
    }

    #[test]
    fn pred_matches_closed_form_on_prefix() {
        let ctx = AdmissibleContext::bare();
        let p = pred_program();
        for x in 1..=50u64 {
            let out = eval(&p, &Value::single(x), Fuel::default(), &ctx).unwrap();
            assert_eq!(out, EvalOutcome::Defined(Value::single(x.saturating_sub(1).max(1))));
        }
    }
}
