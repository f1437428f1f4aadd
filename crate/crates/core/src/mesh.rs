//! Meshes `L_h`: the components with `diam ≤ h` whose parent has `diam > h`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ifs::{le_tol, Address, Attractor, Component};

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    attractor: Attractor,
    h: f64,
    elements: Vec<Component>,
}

impl Mesh {
    /// Generates `L_h` by depth-first descent, children in map order.
    pub fn new(attractor: &Attractor, h: f64) -> Result<Self> {
        if !(h > 0.0 && le_tol(h, attractor.diam())) {
            return Err(Error::Domain(alloc::format!(
                "mesh width {h} not in (0, diam = {}]",
                attractor.diam()
            )));
        }
        let mut elements = Vec::new();
        attractor.partition_into(&attractor.root(), h, &mut elements);
        Ok(Mesh {
            attractor: attractor.clone(),
            h,
            elements,
        })
    }

    /// `L_h` with `h = diam(Γ) ρ_max^ℓ`; for homogeneous attractors this is
    /// the full level `ℓ` with `M^ℓ` elements.
    pub fn level(attractor: &Attractor, level: usize) -> Result<Self> {
        let h = attractor.diam() * libm::pow(attractor.rho_max(), level as f64);
        Self::new(attractor, h)
    }

    pub fn attractor(&self) -> &Attractor {
        &self.attractor
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn elements(&self) -> &[Component] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn measures(&self) -> Vec<f64> {
        self.elements.iter().map(|e| e.measure).collect()
    }

    pub fn addresses(&self) -> Vec<Address> {
        self.elements.iter().map(|e| e.address.clone()).collect()
    }

    /// For each element of `fine`, the index of the element of `self` that
    /// contains it.
    pub fn parent_map(&self, fine: &Mesh) -> Result<Vec<usize>> {
        let index: BTreeMap<&Address, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| (&e.address, i))
            .collect();
        let mut out = Vec::with_capacity(fine.len());
        for e in fine.elements() {
            let mut a = e.address.clone();
            loop {
                if let Some(&i) = index.get(&a) {
                    out.push(i);
                    break;
                }
                match a.parent() {
                    Some(p) => a = p,
                    None => {
                        return Err(Error::NotNested(alloc::format!(
                            "element {} has no ancestor in the coarse mesh",
                            e.address
                        )))
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::SimilarityMap;
    use alloc::vec;

    fn fig3() -> Attractor {
        Attractor::new(
            vec![
                SimilarityMap::scalar(0.4, 0.0).unwrap(),
                SimilarityMap::scalar(0.15, 0.5).unwrap(),
                SimilarityMap::scalar(0.25, 0.75).unwrap(),
            ],
            1,
            Some(1.0),
        )
        .unwrap()
    }

    #[test]
    fn fig3_mesh_includes_equal_diameter_component() {
        let m = Mesh::new(&fig3(), 0.25).unwrap();
        let want: Vec<Address> = [&[1, 1][..], &[1, 2], &[1, 3], &[2], &[3]]
            .iter()
            .map(|a| Address::from_one_based(a))
            .collect();
        assert_eq!(m.addresses(), want);
    }

    #[test]
    fn cantor_levels() {
        let a = Attractor::cantor_set(1.0 / 3.0).unwrap();
        for l in 0..8 {
            let m = Mesh::new(&a, 3f64.powi(-(l as i32))).unwrap();
            assert_eq!(m.len(), 1 << l);
            assert!(m.elements().iter().all(|e| e.address.len() == l));
            assert_eq!(Mesh::level(&a, l).unwrap().addresses(), m.addresses());
        }
        assert_eq!(Mesh::new(&a, 1.0).unwrap().len(), 1);
        assert!(Mesh::new(&a, 1.5).is_err());
        assert!(Mesh::new(&a, 0.0).is_err());
    }

    #[test]
    fn parent_map_detects_nesting() {
        let a = Attractor::cantor_dust(1.0 / 3.0).unwrap();
        let c = Mesh::level(&a, 1).unwrap();
        let f = Mesh::level(&a, 2).unwrap();
        let p = c.parent_map(&f).unwrap();
        assert_eq!(p.len(), 16);
        assert_eq!(p[5], 1);
        assert!(matches!(f.parent_map(&c), Err(Error::NotNested(_))));
    }
}
