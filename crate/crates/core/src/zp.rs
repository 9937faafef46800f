//! The cyclic group `Z_p = {ω, ω², …, ω^p}` and general finite groups.
//!
//! Group elements of `Z_p` are residues: residue `k` stands for `ω^k`, so
//! residue 0 is `ω^p`, the identity. Displays use the exponent in `1..=p`,
//! and canonical orderings compare elements by that exponent, which puts
//! `ω¹` first and the identity last.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A modulus `p ≥ 2` for the cyclic group action.
///
/// Constructions that need a prime reject non-prime moduli unless they were
/// created through [`Modulus::experimental`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: usize,
    prime: bool,
}

impl Modulus {
    pub fn prime(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::ModulusTooSmall(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Modulus { p, prime: true })
    }

    /// Any `p ≥ 2`; non-prime values are flagged as experimental.
    pub fn experimental(p: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::ModulusTooSmall(p));
        }
        Ok(Modulus { p, prime: is_prime(p) })
    }

    pub fn get(self) -> usize {
        self.p
    }

    pub fn is_prime(self) -> bool {
        self.prime
    }
}

/// Ordering key of a residue: its exponent in `1..=p`.
pub fn exponent(residue: usize, p: usize) -> usize {
    if residue.is_multiple_of(p) {
        p
    } else {
        residue % p
    }
}

/// `ω^k` notation for a residue.
pub fn omega(residue: usize, p: usize) -> String {
    format!("ω^{}", exponent(residue, p))
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    cyclic: bool,
}

impl FiniteGroup {
    pub fn cyclic(p: usize) -> Self {
        let mul = (0..p).map(|a| (0..p).map(|b| (a + b) % p).collect()).collect();
        FiniteGroup { mul, cyclic: true }
    }

    /// Builds a group from a Cayley table, checking the group axioms.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n < 2 || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidParameters("malformed Cayley table".into()));
        }
        let identity_ok = (0..n).all(|a| mul[0][a] == a && mul[a][0] == a);
        let inverses_ok = (0..n).all(|a| (0..n).any(|b| mul[a][b] == 0));
        let assoc_ok = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul[mul[a][b]][c] == mul[a][mul[b][c]])));
        if !(identity_ok && inverses_ok && assoc_ok) {
            return Err(Error::InvalidParameters("table is not a group with identity 0".into()));
        }
        Ok(FiniteGroup { mul, cyclic: false })
    }

    /// The Klein four-group `Z_2 × Z_2`.
    pub fn klein_four() -> Self {
        let mul = (0..4).map(|a: usize| (0..4).map(|b: usize| a ^ b).collect()).collect();
        FiniteGroup { mul, cyclic: false }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul[a][b] == 0).expect("group element without inverse")
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.cyclic
    }

    /// Label used in displays: `ω^k` for cyclic groups, `g<i>` otherwise.
    pub fn label(&self, g: usize) -> String {
        if self.cyclic {
            omega(g, self.order())
        } else {
            format!("g{g}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..20).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(Modulus::prime(4).is_err());
        assert!(!Modulus::experimental(4).unwrap().is_prime());
        assert_eq!(Modulus::prime(1), Err(Error::ModulusTooSmall(1)));
    }

    #[test]
    fn omega_notation_uses_exponent_one_to_p() {
        assert_eq!(omega(0, 3), "ω^3");
        assert_eq!(omega(1, 3), "ω^1");
        assert_eq!(exponent(0, 2), 2);
    }

    #[test]
    fn group_tables() {
        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inverse(1), 2);
        let k4 = FiniteGroup::klein_four();
        assert!(FiniteGroup::from_table(k4.mul.clone()).is_ok());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}
