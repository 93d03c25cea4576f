//! Finite-range checks of the three conditions on a class of advice bounds.

use std::fmt;
use std::sync::Arc;

use super::bounds::{ceil_log2, BoundFunction};

/// `coef * n^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coef: usize,
    pub degree: u32,
}

impl Monomial {
    pub fn eval(&self, n: usize) -> usize {
        self.coef.saturating_mul(n.saturating_pow(self.degree))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}n^{}", self.coef, self.degree)
    }
}

type WitnessFn = dyn Fn(usize, &Monomial) -> Option<BoundFunction> + Send + Sync;

/// A finite presentation of a class: sample members, a dominating member for
/// each, and a generator of closure witnesses `g >= f . p`.
#[derive(Clone)]
pub struct AdviceClass {
    pub name: String,
    pub members: Vec<BoundFunction>,
    /// `dominator[i]` indexes a polynomial-time member `>= members[i]`.
    pub dominator: Vec<usize>,
    witness: Arc<WitnessFn>,
}

impl AdviceClass {
    pub fn new(
        name: impl Into<String>,
        members: Vec<BoundFunction>,
        dominator: Vec<usize>,
        witness: impl Fn(usize, &Monomial) -> Option<BoundFunction> + Send + Sync + 'static,
    ) -> Self {
        AdviceClass {
            name: name.into(),
            members,
            dominator,
            witness: Arc::new(witness),
        }
    }

    /// Members self-dominating, no closure witnesses.
    pub fn bare(members: Vec<BoundFunction>) -> Self {
        let dominator = (0..members.len()).collect();
        Self::new("bare", members, dominator, |_, _| None)
    }

    /// Members `a * ceil(log2 n)^k + b` for each `(a, b)`. Closure uses
    /// `ceil(log2(c n^d)) <= ceil(log2 c) + d ceil(log2 n)` and
    /// `(x + y)^k <= 2^(k-1) (x^k + y^k)`.
    pub fn polylog(k: u32, coefficients: &[(usize, usize)]) -> Self {
        assert!(k >= 1);
        let members: Vec<_> = coefficients
            .iter()
            .map(|&(a, b)| polylog_member(k, a, b))
            .collect();
        let coefficients = coefficients.to_vec();
        let dominator = (0..members.len()).collect();
        Self::new(format!("polylog^{k}"), members, dominator, move |i, p| {
            let (a, b) = coefficients[i];
            let spread = 1usize << (k - 1);
            let lead = a * spread * (p.degree as usize).pow(k);
            let constant = a * spread * ceil_log2(p.coef).pow(k) + b;
            Some(polylog_member(k, lead, constant))
        })
    }

    pub fn witness(&self, member: usize, p: &Monomial) -> Option<BoundFunction> {
        (self.witness)(member, p)
    }
}

fn polylog_member(k: u32, a: usize, b: usize) -> BoundFunction {
    BoundFunction::new(format!("{a}*log2^{k}+{b}"), move |n| {
        a * ceil_log2(n).pow(k) + b
    })
}

/// Largest failing `n` in `0..=n_max`, if any.
fn last_failure(n_max: usize, fails: impl Fn(usize) -> bool) -> Option<usize> {
    (0..=n_max).rev().find(|&n| fails(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCheck {
    pub member: String,
    pub poly: Monomial,
    pub witness: Option<String>,
    /// First `n` with `f(p(n)) > witness(n)`.
    pub exceeded_at: Option<usize>,
    /// Witness satisfies `g(n) <= n` on `witness_sublinear_from..=n_max`.
    pub witness_sublinear_from: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberCheck {
    pub member: String,
    /// First `n` with `f(n) > n`.
    pub first_superlinear: Option<usize>,
    /// `f(n) <= n` on `sublinear_from..=n_max`.
    pub sublinear_from: usize,
    pub dominated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReasonableReport {
    pub class: String,
    pub n_max: usize,
    pub members: Vec<MemberCheck>,
    pub closure: Vec<ClosureCheck>,
}

impl ReasonableReport {
    /// Sub-linearity must hold on a nonempty tail of the range; dominance and
    /// closure must hold everywhere on it. Witness sub-linearity is reported
    /// but not required, since polylog witnesses only become sub-linear far
    /// beyond desk-scale ranges.
    pub fn passed(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.sublinear_from <= self.n_max && m.dominated)
            && self
                .closure
                .iter()
                .all(|c| c.witness.is_some() && c.exceeded_at.is_none())
    }
}

/// Checks sub-linearity, dominance by a polynomial-time member, and closure
/// under right composition with each of `polys`, on `0..=n_max`.
pub fn validate_reasonable(
    class: &AdviceClass,
    n_max: usize,
    polys: &[Monomial],
) -> ReasonableReport {
    let members = class
        .members
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let fails = |n: usize| f.eval(n) > n;
            let dom = class.dominator.get(i).and_then(|&j| class.members.get(j));
            MemberCheck {
                member: f.name().to_string(),
                first_superlinear: (0..=n_max).find(|&n| fails(n)),
                sublinear_from: last_failure(n_max, fails).map_or(0, |n| n + 1),
                dominated: dom
                    .is_some_and(|g| g.poly_time && (0..=n_max).all(|n| f.eval(n) <= g.eval(n))),
            }
        })
        .collect();
    let mut closure = vec![];
    for (i, f) in class.members.iter().enumerate() {
        for p in polys {
            let w = class.witness(i, p);
            closure.push(ClosureCheck {
                member: f.name().to_string(),
                poly: *p,
                witness: w.as_ref().map(|g| g.name().to_string()),
                exceeded_at: w
                    .as_ref()
                    .and_then(|g| (0..=n_max).find(|&n| f.eval(p.eval(n)) > g.eval(n))),
                witness_sublinear_from: w.as_ref().map_or(n_max + 1, |g| {
                    last_failure(n_max, |n| g.eval(n) > n).map_or(0, |n| n + 1)
                }),
            });
        }
    }
    ReasonableReport {
        class: class.name.clone(),
        n_max,
        members,
        closure,
    }
}
