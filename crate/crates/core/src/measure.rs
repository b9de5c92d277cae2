//! Probability measures on the vertex set, with exact rational masses.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::rational::{ratio_usize, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    mass: Vec<Rational>,
}

impl Measure {
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.iter().any(Signed::is_negative) {
            return Err(Error::input("measure has a negative mass"));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(Error::input(format!("measure has total mass {total}, not 1")));
        }
        Ok(Measure { mass })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("no uniform measure on an empty vertex set"));
        }
        Ok(Measure {
            mass: vec![ratio_usize(1, n); n],
        })
    }

    pub fn point(n: usize, x: Vertex) -> Result<Self> {
        if x >= n {
            return Err(Error::InvalidVertex { vertex: x, count: n });
        }
        let mut mass = vec![Rational::zero(); n];
        mass[x] = Rational::one();
        Ok(Measure { mass })
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn mass(&self, x: Vertex) -> &Rational {
        &self.mass[x]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }

    pub fn of_set(&self, set: &VertexSet) -> Rational {
        set.iter().map(|v| &self.mass[v]).sum()
    }

    pub fn of_mask(&self, mask: &[bool]) -> Rational {
        self.mass
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(w, _)| w)
            .sum()
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.mass.len() != g.vertex_count() {
            return Err(Error::input(format!(
                "measure has {} vertices, graph has {}",
                self.mass.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }
}
