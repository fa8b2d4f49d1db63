//! Enumeration of every vertex pattern with positive or vanishing curvature.
//!
//! Patterns are nondecreasing sequences `a_1 ≤ … ≤ a_N`, `a_i ≥ 3`,
//! `3 ≤ N ≤ 6`. For a fixed prefix `a_1..a_{N-1}` the curvature is
//! `base + 1/k` in the last entry `k`, so all patterns sharing a prefix form
//! one family with a contiguous range of `k`. Only the last slot can be
//! unbounded: with two or more open slots the base is already negative,
//! which bounds every slot but the last.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::curvature::Pattern;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Zero,
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(Sign::Positive),
            "zero" => Ok(Sign::Zero),
            _ => Err(Error::InvalidArgument(format!("unknown sign {s:?}"))),
        }
    }
}

/// Patterns `(prefix..., k)` for `k` in `lo..=hi` (`hi = None`: unbounded),
/// all with curvature `offset + 1/k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    prefix: Vec<usize>,
    lo: usize,
    hi: Option<usize>,
    offset: Rational,
    parametric: bool,
}

impl PatternFamily {
    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> Option<usize> {
        self.hi
    }

    /// Constant term of the curvature form `offset + 1/k`.
    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// Families from the zero table are single patterns.
    pub fn is_parametric(&self) -> bool {
        self.parametric
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_k(&self, k: usize) -> bool {
        k >= self.lo && self.hi.is_none_or(|hi| k <= hi)
    }

    /// The explicit pattern at parameter `k`.
    pub fn instantiate(&self, k: usize) -> Result<Pattern> {
        if !self.contains_k(k) {
            return Err(Error::InvalidArgument(format!("k = {k} outside {}", self.range_text())));
        }
        let mut degs = self.prefix.clone();
        degs.push(k);
        Pattern::new(degs)
    }

    pub fn contains(&self, p: &Pattern) -> bool {
        let d = p.degrees();
        d.len() == self.len() && d[..d.len() - 1] == self.prefix[..] && self.contains_k(d[d.len() - 1])
    }

    pub fn range_text(&self) -> String {
        match self.hi {
            None => format!("k≥{}", self.lo),
            Some(hi) if hi == self.lo => format!("k={hi}"),
            Some(hi) => format!("{}≤k≤{}", self.lo, hi),
        }
    }

    /// `1/6+1/k`, `1/k` or `1/k-1/42`.
    pub fn form_text(&self) -> String {
        match self.offset.cmp(&Rational::zero()) {
            Ordering::Greater => format!("{}+1/k", self.offset),
            Ordering::Equal => "1/k".to_string(),
            Ordering::Less => format!("1/k-{}", -self.offset.clone()),
        }
    }

    pub fn pattern_text(&self) -> String {
        let mut parts: Vec<String> = self.prefix.iter().map(usize::to_string).collect();
        if self.parametric {
            parts.push("k".into());
        } else {
            parts.push(self.lo.to_string());
        }
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parametric {
            write!(f, "{}\t{}\t{}", self.pattern_text(), self.range_text(), self.form_text())
        } else {
            f.write_str(&self.pattern_text())
        }
    }
}

#[derive(Serialize)]
struct FamilyJson {
    pattern: String,
    fixed: Vec<usize>,
    lo: usize,
    hi: Option<usize>,
    #[serde(with = "rational::serde_str")]
    offset: Rational,
    curvature: String,
}

impl Serialize for PatternFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyJson {
            pattern: self.pattern_text(),
            fixed: self.prefix.clone(),
            lo: self.lo,
            hi: self.hi,
            offset: self.offset.clone(),
            curvature: if self.parametric { self.form_text() } else { "0".into() },
        }
        .serialize(s)
    }
}

/// Evaluates the curvature form of `f` at `k`.
pub fn family_curvature(f: &PatternFamily, k: usize) -> Result<Rational> {
    if !f.contains_k(k) {
        return Err(Error::InvalidArgument(format!("k = {k} outside {}", f.range_text())));
    }
    Ok(f.offset.clone() + rational::recip(k))
}

fn floor_usize(r: &Rational) -> usize {
    let fl: BigInt = rational::floor(r);
    fl.to_usize().unwrap_or(usize::MAX)
}

fn extend(sign: Sign, n: usize, prefix: &mut Vec<usize>, base: Rational, out: &mut Vec<PatternFamily>) {
    let remaining = n - prefix.len();
    let min = prefix.last().copied().unwrap_or(3);
    if remaining == 1 {
        let offset = base;
        match sign {
            Sign::Positive => {
                let hi = if !offset.is_negative() {
                    None
                } else {
                    // offset + 1/k > 0  <=>  k < 1/(-offset)
                    let bound = Rational::from_integer(BigInt::from(1)) / -offset.clone();
                    let hi = if bound.is_integer() { floor_usize(&bound) - 1 } else { floor_usize(&bound) };
                    if hi < min {
                        return;
                    }
                    Some(hi)
                };
                out.push(PatternFamily { prefix: prefix.clone(), lo: min, hi, offset, parametric: true });
            }
            Sign::Zero => {
                if !offset.is_negative() {
                    return;
                }
                let k = Rational::from_integer(BigInt::from(1)) / -offset.clone();
                if k.is_integer() {
                    let k = floor_usize(&k);
                    if k >= min {
                        out.push(PatternFamily {
                            prefix: prefix.clone(),
                            lo: k,
                            hi: Some(k),
                            offset,
                            parametric: false,
                        });
                    }
                }
            }
        }
        return;
    }
    // Two or more open slots: the base must already be negative, otherwise
    // two slots could grow without bound.
    assert!(base.is_negative(), "prefix {prefix:?} of length-{n} pattern leaves base {base} >= 0");
    // With every open slot at least a: Φ ≤ base + remaining/a.
    let max = floor_usize(&(rational::int(remaining as i64) / -base.clone()));
    for a in min..=max {
        prefix.push(a);
        extend(sign, n, prefix, base.clone() + rational::recip(a), out);
        prefix.pop();
    }
}

/// All families with the given curvature sign, ordered by length and then
/// lexicographically.
pub fn enumerate_families(sign: Sign) -> Vec<PatternFamily> {
    let mut out = Vec::new();
    for n in 3..=6 {
        let base = rational::frac(2 - n as i64, 2);
        extend(sign, n, &mut Vec::new(), base, &mut out);
    }
    out.sort_by(|a, b| (a.len(), &a.prefix, a.lo).cmp(&(b.len(), &b.prefix, b.lo)));
    out
}

static POSITIVE: OnceLock<Vec<PatternFamily>> = OnceLock::new();
static ZERO: OnceLock<Vec<PatternFamily>> = OnceLock::new();

/// Cached output of [`enumerate_families`].
pub fn table(sign: Sign) -> &'static [PatternFamily] {
    match sign {
        Sign::Positive => POSITIVE.get_or_init(|| enumerate_families(Sign::Positive)),
        Sign::Zero => ZERO.get_or_init(|| enumerate_families(Sign::Zero)),
    }
}

/// Position of the family containing a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyHandle {
    pub sign: Sign,
    pub index: usize,
}

impl FamilyHandle {
    pub fn family(&self) -> &'static PatternFamily {
        &table(self.sign)[self.index]
    }
}

/// The unique family containing `p`, or `None` when `Φ(p) < 0`.
pub fn match_pattern(p: &Pattern) -> Option<FamilyHandle> {
    [Sign::Positive, Sign::Zero].into_iter().find_map(|sign| {
        table(sign)
            .iter()
            .position(|f| f.contains(p))
            .map(|index| FamilyHandle { sign, index })
    })
}

/// Text rendering, one family per line.
pub fn render_text(sign: Sign) -> String {
    table(sign).iter().map(|f| format!("{f}\n")).collect()
}

pub fn render_json(sign: Sign) -> String {
    serde_json::to_string_pretty(table(sign)).expect("families always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn find(sign: Sign, prefix: &[usize]) -> &'static PatternFamily {
        table(sign).iter().find(|f| f.prefix() == prefix).unwrap()
    }

    #[test]
    fn table_sizes() {
        assert_eq!(table(Sign::Positive).len(), 20);
        assert_eq!(table(Sign::Zero).len(), 17);
        assert!(table(Sign::Positive).iter().all(|f| f.len() <= 5));
        assert!(table(Sign::Zero).iter().all(|f| f.len() <= 6));
    }

    #[test]
    fn family_curvature_values() {
        assert_eq!(family_curvature(find(Sign::Positive, &[3, 11]), 13).unwrap(), frac(1, 858));
        assert_eq!(family_curvature(find(Sign::Positive, &[3, 3]), 3).unwrap(), frac(1, 2));
        assert_eq!(family_curvature(find(Sign::Positive, &[4, 4]), 43).unwrap(), frac(1, 43));
        assert!(family_curvature(find(Sign::Positive, &[3, 11]), 14).is_err());
        assert!(family_curvature(find(Sign::Positive, &[3, 11]), 10).is_err());
    }

    #[test]
    fn matching() {
        let m = match_pattern(&"(3,3,4,11)".parse().unwrap()).unwrap();
        assert_eq!(m.sign, Sign::Positive);
        assert_eq!(m.family().pattern_text(), "(3,3,4,k)");
        assert_eq!(m.family().range_text(), "4≤k≤11");
        assert_eq!(match_pattern(&"(3,7,43)".parse().unwrap()), None);
        let z = match_pattern(&"(4,8,8)".parse().unwrap()).unwrap();
        assert_eq!(z.sign, Sign::Zero);
        assert_eq!(z.family().to_string(), "(4,8,8)");
    }

    #[test]
    fn rendering() {
        assert_eq!(find(Sign::Positive, &[3, 3]).to_string(), "(3,3,k)\tk≥3\t1/6+1/k");
        assert_eq!(find(Sign::Positive, &[3, 6]).to_string(), "(3,6,k)\tk≥6\t1/k");
        assert_eq!(find(Sign::Positive, &[3, 10]).to_string(), "(3,10,k)\t10≤k≤14\t1/k-1/15");
    }
}
