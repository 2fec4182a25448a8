//! Bundled problem documents used by the examples, the test suites, and as
//! ready-made CLI inputs. The JSON sources live under `fixtures/` in the
//! crate root and are embedded at compile time.

use crate::document::{load_instance, ProblemDocument};
use crate::problem::MoqpInstance;

pub const EX51_JSON: &str = include_str!("../fixtures/ex51.json");
pub const EX52_JSON: &str = include_str!("../fixtures/ex52.json");
pub const PORTFOLIO_JSON: &str = include_str!("../fixtures/portfolio.json");

fn parse(json: &str) -> MoqpInstance {
    load_instance(&ProblemDocument::from_json(json).expect("embedded fixture parses"))
        .expect("embedded fixture validates")
}

/// Two decision variables, four nonconvex objectives, one budget row.
pub fn example_51() -> MoqpInstance {
    parse(EX51_JSON)
}

/// Five decision variables, five dense nonconvex objectives, four equality
/// rows.
pub fn example_52() -> MoqpInstance {
    parse(EX52_JSON)
}

/// Ten-asset portfolio selection: one quadratic risk objective plus two
/// linear objectives (negated return and liquidity), unit budget.
pub fn portfolio() -> MoqpInstance {
    parse(PORTFOLIO_JSON)
}

/// The order-5 matrix that is doubly nonnegative yet not completely
/// positive; equality of the two cones stops at order 4.
pub fn diananda_matrix() -> crate::linalg::SymMatrix {
    crate::linalg::SymMatrix::from_rows(&[
        vec![1.0, 1.0, 0.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0, 0.0],
        vec![0.0, 1.0, 2.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0, 2.0, 1.0],
        vec![1.0, 0.0, 0.0, 1.0, 6.0],
    ])
    .expect("constant matrix is well-formed")
}
