use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::Game;

/// Parameters of the alternating game `C(n, d, H)`; `n = d.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingGameSpec {
    pub d: Vec<i8>,
    pub h: Rational,
}

impl AlternatingGameSpec {
    pub fn new(d: Vec<i8>, h: impl Into<Rational>) -> Result<Self> {
        let spec = AlternatingGameSpec { d, h: h.into() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// Trace of the payoff matrix.
    pub fn trace(&self) -> i64 {
        self.d.iter().map(|&x| i64::from(x)).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.trace() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 3 || n % 2 == 0 {
            return Err(Error::input(format!("alternating game size must be odd and at least 3, got {n}")));
        }
        if let Some(x) = self.d.iter().find(|x| !(-1..=1).contains(*x)) {
            return Err(Error::input(format!("diagonal entries must lie in {{-1,0,1}}, got {x}")));
        }
        if self.h < Rational::one() {
            return Err(Error::input(format!("H must be at least 1, got {}", self.h)));
        }
        Ok(())
    }
}

/// Off-diagonal entry `m(a, b)` of an alternating pattern with magnitude `h`.
pub(super) fn alternating_entry(a: usize, b: usize, h: &Rational) -> Rational {
    debug_assert_ne!(a, b);
    if a < b {
        if (b - a - 1) % 2 == 0 {
            h.clone()
        } else {
            -h
        }
    } else {
        -alternating_entry(b, a, h)
    }
}

pub fn alternating_game(spec: &AlternatingGameSpec) -> Result<Game> {
    spec.validate()?;
    let n = spec.n();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::from(i64::from(spec.d[i]))
                    } else {
                        alternating_entry(i, j, &spec.h)
                    }
                })
                .collect()
        })
        .collect();
    Game::new(rows)
}

/// Closed form `(∏(d_i − H) + ∏(d_i + H)) / 2`.
///
/// The odd powers of `H` cancel and the even ones appear twice, hence the halving.
pub fn alternating_determinant(spec: &AlternatingGameSpec) -> Result<Rational> {
    spec.validate()?;
    let mut minus = Rational::one();
    let mut plus = Rational::one();
    for &x in &spec.d {
        let x = Rational::from(i64::from(x));
        minus *= &x - &spec.h;
        plus *= &x + &spec.h;
    }
    Ok((minus + plus) / Rational::from(2))
}
