//! Named sample functions used by tests, benchmarks and the CLI docs.

use super::{parse, ExtendedExpr};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exemplar {
    pub name: &'static str,
    pub source: &'static str,
    pub zero_extend: bool,
    /// A domain on which the function (and its derivative) is defined.
    pub domain: (f64, f64),
}

impl Exemplar {
    pub fn expr(&self) -> ExtendedExpr {
        ExtendedExpr::new(parse(self.source).expect("exemplar parses"), self.zero_extend)
    }
}

pub const EXEMPLARS: &[Exemplar] = &[
    Exemplar { name: "half-square", source: "x^2/2", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "third-cube", source: "x^3/3", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "cube", source: "x^3", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "sine", source: "sin(x)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "sine-product", source: "x * sin(3*x) + cos(x)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "exponential", source: "exp(x)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "gaussian", source: "exp(-x^2/2)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "log-shift", source: "log(x + 3)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "sqrt-shift", source: "sqrt(x^2 + 1)", zero_extend: false, domain: (-2.0, 2.0) },
    Exemplar { name: "flat-1", source: "exp(-1/x)", zero_extend: true, domain: (0.0, 1.0) },
    Exemplar { name: "flat-2", source: "exp(-2/x)", zero_extend: true, domain: (0.0, 1.0) },
    Exemplar { name: "flat-5", source: "exp(-5/x)", zero_extend: true, domain: (0.0, 1.0) },
];

/// The nonzero flat exemplars `exp(-a/x)`, `a ∈ {1, 2, 5}`.
pub fn flat_family() -> impl Iterator<Item = &'static Exemplar> {
    EXEMPLARS.iter().filter(|e| e.name.starts_with("flat-"))
}
