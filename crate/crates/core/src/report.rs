//! Certified inequality records shared by the checking operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactnum::interval::Interval;
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Undecided,
}

/// `lhs ≤ rhs` (or `<` when `strict`) with both sides given as enclosures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub lhs: Interval,
    pub rhs: Interval,
    pub strict: bool,
    pub verdict: Verdict,
}

impl Inequality {
    pub fn le(label: impl Into<String>, lhs: Interval, rhs: Interval) -> Self {
        Self::build(label.into(), lhs, rhs, false)
    }

    pub fn lt(label: impl Into<String>, lhs: Interval, rhs: Interval) -> Self {
        Self::build(label.into(), lhs, rhs, true)
    }

    pub fn le_exact(label: impl Into<String>, lhs: Rational, rhs: Rational) -> Self {
        Self::le(label, Interval::point(lhs), Interval::point(rhs))
    }

    fn build(label: String, lhs: Interval, rhs: Interval, strict: bool) -> Self {
        let verdict = if strict {
            if lhs.hi < rhs.lo {
                Verdict::Holds
            } else if lhs.lo >= rhs.hi {
                Verdict::Violated
            } else {
                Verdict::Undecided
            }
        } else if lhs.hi <= rhs.lo {
            Verdict::Holds
        } else if lhs.lo > rhs.hi {
            Verdict::Violated
        } else {
            Verdict::Undecided
        };
        Inequality { label, lhs, rhs, strict, verdict }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Certified lower bound on `rhs − lhs`.
    pub fn slack(&self) -> Rational {
        &self.rhs.lo - &self.lhs.hi
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.strict { "<" } else { "<=" };
        write!(
            f,
            "{}: [{:.6e}, {:.6e}] {op} [{:.6e}, {:.6e}] {:?}",
            self.label,
            crate::exactnum::rational::to_f64(&self.lhs.lo),
            crate::exactnum::rational::to_f64(&self.lhs.hi),
            crate::exactnum::rational::to_f64(&self.rhs.lo),
            crate::exactnum::rational::to_f64(&self.rhs.hi),
            self.verdict
        )
    }
}

/// Retries `f` at doubling precision until the verdict is decided or `cap` is reached.
pub fn decide(cap: u64, mut f: impl FnMut(u64) -> Inequality) -> Inequality {
    let mut bits = 64;
    loop {
        let ineq = f(bits);
        if ineq.verdict != Verdict::Undecided || bits >= cap {
            return ineq;
        }
        bits = (bits * 2).min(cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    #[test]
    fn verdicts() {
        assert!(Inequality::le_exact("a", int(1), int(1)).holds());
        assert!(!Inequality::lt("b", Interval::int(1), Interval::int(1)).holds());
        let u = Inequality::le("c", Interval::new(int(0), int(2)), Interval::int(1));
        assert_eq!(u.verdict, Verdict::Undecided);
        assert_eq!(Inequality::le_exact("d", int(3), int(1)).verdict, Verdict::Violated);
        assert_eq!(Inequality::le_exact("e", rat(1, 2), int(1)).slack(), rat(1, 2));
    }
}
