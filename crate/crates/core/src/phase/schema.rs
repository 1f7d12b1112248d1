use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

/// A decomposition scheme with mean offspring `E(u) = a u / (b u + c)`
/// below its critical weight.
#[derive(Clone, Debug, Serialize)]
pub struct SchemaRow {
    pub name: &'static str,
    /// Critical weight as `(numerator, denominator)`.
    pub u_critical: (i64, i64),
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl SchemaRow {
    pub fn mean(&self, u: f64) -> f64 {
        self.a as f64 * u / (self.b as f64 * u + self.c as f64)
    }

    pub fn mean_exact(&self, u: &BigRational) -> BigRational {
        let a = BigRational::from_integer(BigInt::from(self.a));
        let b = BigRational::from_integer(BigInt::from(self.b));
        let c = BigRational::from_integer(BigInt::from(self.c));
        &a * u / (&b * u + c)
    }

    pub fn u_critical_f64(&self) -> f64 {
        self.u_critical.0 as f64 / self.u_critical.1 as f64
    }

    pub fn u_critical_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.u_critical.0), BigInt::from(self.u_critical.1))
    }
}

/// Critical weights of the block decompositions between classes of maps.
pub fn schema_table() -> Vec<SchemaRow> {
    let row = |name, u_critical, a, b, c| SchemaRow { name, u_critical, a, b, c };
    vec![
        row("M2/M3", (81, 17), 32, 15, 81),
        row("M1/M4", (9, 5), 8, 3, 9),
        row("M4-Z/M5", (135, 7), 32, 25, 135),
        row("B1/B2", (36, 11), 20, 9, 36),
        row("B1/B4", (52, 27), 40, 13, 52),
        row("B4/B5", (68, 3), 20, 17, 68),
        row("T1/(Z+ZT2)", (16, 7), 9, 2, 16),
        row("T2/T3", (64, 37), 27, -10, 64),
    ]
}
