//! Violation reports shared by every checker.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// One failing instance of an identity: which identity, on which chain, and
/// the nonzero residual on the output basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub relation: String,
    pub arity: usize,
    pub objects: Vec<String>,
    pub inputs: Vec<String>,
    pub residual: Vec<(String, Scalar)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub checked_arity: usize,
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn new(checked_arity: usize) -> Self {
        RelationReport {
            checked_arity,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.checked_arity = self.checked_arity.max(other.checked_arity);
        self.violations.extend(other.violations);
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Violations at the given arity.
    pub fn at_arity(&self, n: usize) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.arity == n)
    }

    /// Plain-text rendering, one line per violation.
    pub fn render(&self) -> String {
        let mut out = format!(
            "checked up to arity {}: {} violation(s)\n",
            self.checked_arity,
            self.violations.len()
        );
        for v in &self.violations {
            let residual: Vec<String> =
                v.residual.iter().map(|(l, x)| format!("{x}*{l}")).collect();
            out.push_str(&format!(
                "  [{}] n={} objects ({}) inputs ({}) residual {}\n",
                v.relation,
                v.arity,
                v.objects.join(", "),
                v.inputs.join(", "),
                residual.join(" + ")
            ));
        }
        out
    }
}

/// Coefficient field in which residuals are judged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldMode {
    #[default]
    Rationals,
    /// Residuals are reduced modulo the prime before being judged zero.
    Prime(u64),
}

impl FieldMode {
    /// Parses `q` or `p:<prime>`.
    pub fn parse(s: &str) -> crate::Result<Self> {
        if s == "q" {
            return Ok(FieldMode::Rationals);
        }
        let p = s
            .strip_prefix("p:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| {
                crate::Error::Parse(format!("field {s:?} is neither q nor p:<prime>"))
            })?;
        if !is_prime(p) {
            return Err(crate::Error::Parse(format!("{p} is not prime")));
        }
        Ok(FieldMode::Prime(p))
    }

    /// Whether `x` is zero in this field; `None` when `x` has no image.
    pub fn vanishes(self, x: &Scalar) -> Option<bool> {
        match self {
            FieldMode::Rationals => Some(x.is_zero()),
            FieldMode::Prime(p) => x.reduce_mod(p).map(|r| r == 0),
        }
    }

    /// Drops residual coefficients that vanish in the field, and violations
    /// left with no residual. Errors when a coefficient has no image.
    pub fn reduce(self, report: RelationReport) -> crate::Result<RelationReport> {
        let mut out = RelationReport::new(report.checked_arity);
        for mut v in report.violations {
            let mut kept = Vec::new();
            for (l, x) in v.residual {
                match self.vanishes(&x) {
                    Some(true) => {}
                    Some(false) => kept.push((l, x)),
                    None => {
                        return Err(crate::Error::Parse(format!(
                            "coefficient {x} has no image in {self}"
                        )))
                    }
                }
            }
            if !kept.is_empty() {
                v.residual = kept;
                out.push(v);
            }
        }
        Ok(out)
    }
}

impl std::fmt::Display for FieldMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldMode::Rationals => write!(f, "q"),
            FieldMode::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_modes() {
        assert_eq!(FieldMode::parse("q").unwrap(), FieldMode::Rationals);
        assert_eq!(FieldMode::parse("p:7").unwrap(), FieldMode::Prime(7));
        assert!(FieldMode::parse("p:8").is_err());
        assert!(FieldMode::parse("r").is_err());
        let f = FieldMode::Prime(3);
        assert_eq!(f.vanishes(&Scalar::from_int(6)), Some(true));
        assert_eq!(f.vanishes(&Scalar::new(1, 3).unwrap()), None);
        let mut r = RelationReport::new(2);
        r.push(Violation {
            relation: "t".into(),
            arity: 2,
            objects: vec![],
            inputs: vec![],
            residual: vec![("a".into(), Scalar::from_int(3))],
        });
        assert!(f.reduce(r.clone()).unwrap().passed());
        assert!(!FieldMode::Rationals.reduce(r).unwrap().passed());
    }
}
