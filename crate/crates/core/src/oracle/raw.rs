//! Normalization-free oracle for small `q`: every generating pair of twisted
//! elements with `(xy)^2 = 1`, grouped into orbits under the whole extended group.

use std::collections::HashMap;

use rayon::prelude::*;

use super::level::closure_size;
use crate::twisted_group::{TwElem, TwistedGroup};

/// Orbits of generating pairs `(x, y)`, both of twist 1, with `xy` an involution.
/// Returns the orbit sizes in order of first appearance.
pub fn raw_generating_orbits(g: &TwistedGroup) -> Vec<usize> {
    let full = g.order_of_g() as usize;
    let twisted: Vec<TwElem> = g.all_g_elements().filter(|x| x.twist == 1).collect();
    let involutions: Vec<TwElem> = g
        .all_g_elements()
        .filter(|z| !g.is_identity(z) && g.is_identity(&g.mul(z, z)))
        .collect();
    let mut pairs: Vec<(TwElem, TwElem)> = twisted
        .par_iter()
        .flat_map_iter(|x| {
            let xi = g.inv(x);
            involutions
                .iter()
                .map(move |z| (*x, g.mul(&xi, z)))
                .filter(|(_, y)| y.twist == 1)
                .filter(|(x, y)| closure_size(g, &[*x, *y], full) == Some(full))
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.sort_unstable_by_key(|(x, y)| (x.mat, y.mat));

    let index: HashMap<(TwElem, TwElem), usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let ext: Vec<TwElem> = g.all_elements().collect();
    let mut seen = vec![false; pairs.len()];
    let mut sizes = Vec::new();
    for i in 0..pairs.len() {
        if seen[i] {
            continue;
        }
        let (x, y) = pairs[i];
        let mut size = 0;
        for h in &ext {
            let img = (g.conjugate(&x, h), g.conjugate(&y, h));
            let j = index[&img];
            if !seen[j] {
                seen[j] = true;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes
}
