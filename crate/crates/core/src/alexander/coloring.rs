//! Fox colorings and dihedral quotients.

use serde::{Deserialize, Serialize};

use super::modp::{nullspace_mod_p, rank_mod_p};
use super::{alexander_matrix_at_minus_one, is_odd_prime};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{Homomorphism, Word};

/// Element `v ↦ ±v + shift` of the dihedral group `D_p` acting on `ℤ_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Affine {
    pub reflect: bool,
    pub shift: u64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        reflect: false,
        shift: 0,
    };

    /// The reflection `v ↦ 2c − v` attached to color `c`.
    pub fn reflection(c: u64, p: u64) -> Self {
        Affine {
            reflect: true,
            shift: 2 * c % p,
        }
    }

    /// Composition `self ∘ other`.
    pub fn compose(self, other: Affine, p: u64) -> Affine {
        let b2 = if self.reflect {
            (p - other.shift) % p
        } else {
            other.shift
        };
        Affine {
            reflect: self.reflect ^ other.reflect,
            shift: (b2 + self.shift) % p,
        }
    }

    pub fn inverse(self, p: u64) -> Affine {
        if self.reflect {
            self
        } else {
            Affine {
                reflect: false,
                shift: (p - self.shift) % p,
            }
        }
    }
}

/// Kernel of `A(−1)` mod `p`: assignments of colors to meridians that
/// satisfy every relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringSpace {
    pub prime: u64,
    pub dimension: usize,
    pub basis: Vec<Vec<u64>>,
}

fn require_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Linear condition on colors imposed by one relator: the translation part
/// of the product of reflections, as a coefficient vector.
fn relator_condition(r: &Word, gen_count: usize) -> Vec<i64> {
    // Track the map v ↦ εv + Σ b_g c_g.
    let mut eps = 1i64;
    let mut b = vec![0i64; gen_count];
    for l in r.letters() {
        // (ε, b) ∘ (−1, 2c_g) = (−ε, ε·2c_g + b)
        b[l.gen.index()] += 2 * eps;
        eps = -eps;
    }
    b
}

pub fn coloring_space(p: &Presentation, prime: u64) -> Result<ColoringSpace> {
    require_prime(prime)?;
    p.require_all_meridian()?;
    let n = p.gen_count();
    let rows: Vec<Vec<i64>> = p
        .relators()
        .iter()
        .map(|r| relator_condition(r, n))
        .collect();
    let basis = nullspace_mod_p(&rows, n, prime);
    Ok(ColoringSpace {
        prime,
        dimension: basis.len(),
        basis,
    })
}

/// A Fox coloring with the distinguished meridian colored 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralColoring {
    pub prime: u64,
    pub colors: Vec<u64>,
}

impl DihedralColoring {
    pub fn image(&self, g: usize) -> Affine {
        Affine::reflection(self.colors[g], self.prime)
    }

    pub fn evaluate(&self, w: &Word) -> Affine {
        let p = self.prime;
        w.syllables().iter().fold(Affine::IDENTITY, |acc, s| {
            let img = self.image(s.gen.index());
            let img = if s.exp < 0 { img.inverse(p) } else { img };
            (0..s.exp.unsigned_abs()).fold(acc, |a, _| a.compose(img, p))
        })
    }

    /// Homomorphism onto `D_p = ⟨s, r⟩` (`s = x0`, `r = x1`), sending the
    /// meridian of color `c` to `r^{2c}·s`.
    pub fn homomorphism(&self) -> Homomorphism {
        let images = self
            .colors
            .iter()
            .map(|&c| &Word::power(1usize, (2 * c % self.prime) as i64) * &Word::gen(0usize))
            .collect();
        Homomorphism::new(images, 2).expect("two target generators")
    }

    /// The presentation of `D_p` the homomorphism lands in.
    pub fn target(&self) -> Presentation {
        let (s, r) = (Word::gen(0usize), Word::gen(1usize));
        Presentation::new(
            2,
            [s.pow(2), r.pow(self.prime as i64), (&s * &r).pow(2)],
            vec![true, false],
            0usize.into(),
        )
        .expect("valid")
    }
}

/// A surjection onto `D_p` with the distinguished meridian sent to the
/// reflection `v ↦ −v`, or `None` when only constant colorings exist.
pub fn dihedral_surjection(p: &Presentation, prime: u64) -> Result<Option<DihedralColoring>> {
    let space = coloring_space(p, prime)?;
    let x = p.distinguished().index();
    let Some(v) = space.basis.iter().find(|v| v.iter().any(|&c| c != v[0])) else {
        return Ok(None);
    };
    let colors: Vec<u64> = v.iter().map(|&c| (c + prime - v[x]) % prime).collect();
    let col = DihedralColoring { prime, colors };
    let hits_rotation = col.colors.iter().any(|&c| c != 0);
    let kills = p
        .relators()
        .iter()
        .all(|r| col.evaluate(r) == Affine::IDENTITY);
    if !(hits_rotation && kills) {
        return Err(Error::CertificateRejected(
            "coloring failed verification".into(),
        ));
    }
    Ok(Some(col))
}

/// `(n−1) − rank_p A(−1)` with the distinguished meridian's column removed.
pub fn nakanishi_lower_bound(p: &Presentation, prime: u64) -> Result<usize> {
    require_prime(prime)?;
    let a = alexander_matrix_at_minus_one(p)?;
    let x = p.distinguished().index();
    let reduced: Vec<Vec<i64>> = a
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != x)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect();
    let n = p.gen_count();
    Ok((n - 1) - rank_mod_p(&reduced, n - 1, prime))
}
