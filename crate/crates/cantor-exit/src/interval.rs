//! Exact rational intervals and symbolic branch enumeration for the shift.
//!
//! A branch records a domain on which every one of the first `steps`
//! symbols is constant, together with the composed affine map
//! `θ ↦ 3^steps · θ - offset` whose image is the range of `θ_steps`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::orbit::Symbol;
use crate::surd::QuadraticSurd;
use crate::util::{ratio, three_pow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("interval endpoints out of order or empty")]
    BadEndpoints,
    #[error("clearance radius must satisfy 0 < lower < 1/18, got {0}")]
    BadLower(BigRational),
    #[error("band radius must satisfy lower <= upper <= 1/18, got {0}")]
    BadUpper(BigRational),
    #[error("domain must lie inside [0,1]")]
    DomainOutOfRange,
}

/// Closed, half-open or open rational interval; a point interval must be
/// closed on both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RatInterval {
    pub fn new(
        lo: BigRational,
        hi: BigRational,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self, IntervalError> {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(IntervalError::BadEndpoints);
        }
        Ok(RatInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Result<Self, IntervalError> {
        Self::new(lo, hi, true, true)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        let lo_ok = x > &self.lo || (self.lo_closed && x == &self.lo);
        let hi_ok = x < &self.hi || (self.hi_closed && x == &self.hi);
        lo_ok && hi_ok
    }

    pub fn contains_surd(&self, x: &QuadraticSurd) -> bool {
        let lo_cmp = x.compare_to_rational(&self.lo);
        let hi_cmp = x.compare_to_rational(&self.hi);
        let lo_ok = lo_cmp == Ordering::Greater || (self.lo_closed && lo_cmp == Ordering::Equal);
        let hi_ok = hi_cmp == Ordering::Less || (self.hi_closed && hi_cmp == Ordering::Equal);
        lo_ok && hi_ok
    }
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

/// Clearance sets around the level-2 grid `E_2 = {k/9 : 0 ≤ k ≤ 9}`.
///
/// Without `upper`: `X = {θ ∈ [0,1] : dist(θ, E_2) ≥ lower}`, a union of
/// nine closed intervals `[k/9 + lower, (k+1)/9 - lower]`.
///
/// With `upper`: the band `{lower ≤ dist(θ, E_2) < upper}`, half-open at
/// the outer radius — two components per interior grid point, one-sided at
/// `k = 0` and `k = 9` (eighteen in all). `lower == upper` yields the
/// empty set.
pub fn clearance_set(
    lower: &BigRational,
    upper: Option<&BigRational>,
) -> Result<Vec<RatInterval>, IntervalError> {
    let one_eighteenth = ratio(1, 18);
    if !lower.is_positive() || lower >= &one_eighteenth {
        return Err(IntervalError::BadLower(lower.clone()));
    }
    match upper {
        None => (0..9)
            .map(|k| RatInterval::closed(ratio(k, 9) + lower, ratio(k + 1, 9) - lower))
            .collect(),
        Some(u) => {
            if u < lower || u > &one_eighteenth {
                return Err(IntervalError::BadUpper(u.clone()));
            }
            if u == lower {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            for k in 0..=9i64 {
                let center = ratio(k, 9);
                if k > 0 {
                    out.push(RatInterval::new(&center - u, &center - lower, false, true)?);
                }
                if k < 9 {
                    out.push(RatInterval::new(&center + lower, &center + u, true, false)?);
                }
            }
            out.sort_by(|x, y| x.lo.cmp(&y.lo));
            Ok(out)
        }
    }
}

/// A domain on which the first `steps` symbols are constant, with the
/// composed affine map `θ ↦ 3^steps · θ - offset` (image inside `[0,1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicBranch {
    pub domain: RatInterval,
    pub steps: usize,
    pub offset: BigInt,
    pub symbols: Vec<Symbol>,
}

impl SymbolicBranch {
    /// The scale `3^steps` of the affine map.
    pub fn scale(&self) -> BigInt {
        three_pow(self.steps)
    }

    /// Range of `θ_steps` over the domain.
    pub fn image(&self) -> RatInterval {
        affine(&self.domain, self.steps, &self.offset)
    }

    /// Range of `θ_j` over the domain, `0 ≤ j ≤ steps`, replayed from the
    /// symbol prefix.
    pub fn image_at(&self, j: usize) -> RatInterval {
        assert!(j <= self.steps);
        let mut offset = BigInt::zero();
        for i in 0..j {
            offset = offset * 3 + BigInt::from(self.symbols[i].digit());
        }
        affine(&self.domain, j, &offset)
    }

    pub fn symbols_string(&self) -> String {
        self.symbols.iter().map(|s| s.letter()).collect()
    }
}

fn affine(domain: &RatInterval, steps: usize, offset: &BigInt) -> RatInterval {
    let scale = BigRational::from(three_pow(steps));
    let shift = BigRational::from(offset.clone());
    RatInterval {
        lo: &domain.lo * &scale - &shift,
        hi: &domain.hi * &scale - &shift,
        lo_closed: domain.lo_closed,
        hi_closed: domain.hi_closed,
    }
}

fn preimage(piece: &RatInterval, steps: usize, offset: &BigInt) -> RatInterval {
    let scale = BigRational::from(three_pow(steps));
    let shift = BigRational::from(offset.clone());
    RatInterval {
        lo: (&piece.lo + &shift) / &scale,
        hi: (&piece.hi + &shift) / &scale,
        lo_closed: piece.lo_closed,
        hi_closed: piece.hi_closed,
    }
}

fn classify(piece: &RatInterval) -> Symbol {
    let one_third = ratio(1, 3);
    let two_thirds = ratio(2, 3);
    if piece.is_point() {
        // half-open rule for a degenerate image; the point 1 wraps to 0
        if piece.lo == BigRational::one() {
            return Symbol::L;
        }
        let d = (&piece.lo * ratio(3, 1)).floor().to_integer();
        return Symbol::from_digit(num_traits::ToPrimitive::to_u8(&d).expect("digit"));
    }
    if piece.hi <= one_third {
        Symbol::L
    } else if piece.lo >= two_thirds {
        Symbol::R
    } else {
        debug_assert!(piece.lo >= one_third && piece.hi <= two_thirds);
        Symbol::M
    }
}

/// Split an image interval at whichever of 1/3, 2/3 lie strictly inside,
/// assigning each piece its symbol. Shared cut points stay in both pieces.
fn split_lmr(image: &RatInterval) -> Vec<(RatInterval, Symbol)> {
    let mut pieces = Vec::with_capacity(3);
    let mut cur = image.clone();
    for cut in [ratio(1, 3), ratio(2, 3)] {
        if cur.lo < cut && cut < cur.hi {
            let left = RatInterval {
                lo: cur.lo.clone(),
                hi: cut.clone(),
                lo_closed: cur.lo_closed,
                hi_closed: true,
            };
            pieces.push(left);
            cur = RatInterval {
                lo: cut,
                hi: cur.hi,
                lo_closed: true,
                hi_closed: cur.hi_closed,
            };
        }
    }
    pieces.push(cur);
    pieces
        .into_iter()
        .map(|p| {
            let s = classify(&p);
            (p, s)
        })
        .collect()
}

/// Recursively splits `domain ⊆ [0,1]` at preimages of 1/3 and 2/3 so that
/// every returned branch has a constant symbol at each of the first
/// `depth` steps. Branches come back sorted by domain left endpoint; at
/// most `3^depth` of them.
pub fn iterate_symbolic(
    domain: &RatInterval,
    depth: usize,
) -> Result<Vec<SymbolicBranch>, IntervalError> {
    if domain.lo.is_negative() || domain.hi > BigRational::one() {
        return Err(IntervalError::DomainOutOfRange);
    }
    struct Partial {
        dom: RatInterval,
        offset: BigInt,
        symbols: Vec<Symbol>,
    }
    let mut done = Vec::new();
    let mut stack = vec![Partial {
        dom: domain.clone(),
        offset: BigInt::zero(),
        symbols: Vec::new(),
    }];
    while let Some(p) = stack.pop() {
        let j = p.symbols.len();
        if j == depth {
            done.push(SymbolicBranch {
                domain: p.dom,
                steps: depth,
                offset: p.offset,
                symbols: p.symbols,
            });
            continue;
        }
        let img = affine(&p.dom, j, &p.offset);
        for (piece, sym) in split_lmr(&img).into_iter().rev() {
            let sub = preimage(&piece, j, &p.offset);
            let offset = &p.offset * 3 + BigInt::from(sym.digit());
            let mut symbols = p.symbols.clone();
            symbols.push(sym);
            stack.push(Partial {
                dom: sub,
                offset,
                symbols,
            });
        }
    }
    done.sort_by(|x, y| x.domain.lo.cmp(&y.domain.lo));
    Ok(done)
}
