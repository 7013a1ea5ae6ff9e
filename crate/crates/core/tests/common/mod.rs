//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use permlat_core::{Elem, FiniteLattice, LambdaSpace};

/// Closes a symmetric matrix under `d(x,z) ← d(x,z) ∧ (d(x,y) ∨ d(y,z))`,
/// which makes it satisfy the join-triangle inequality.
pub fn triangle_closure(lat: &FiniteLattice, n: usize, d: &mut [Elem]) {
    loop {
        let mut changed = false;
        for y in 0..n {
            for x in 0..n {
                for z in 0..n {
                    let new = lat.meet(d[x * n + z], lat.join(d[x * n + y], d[y * n + z]));
                    if new != d[x * n + z] {
                        d[x * n + z] = new;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A space on points `0..n` from arbitrary bytes: nonzero distances picked
/// from `raw`, then closed. `None` when the closure forces a zero distance.
pub fn space_from_bytes(lat: Arc<FiniteLattice>, n: usize, raw: &[u8]) -> Option<LambdaSpace> {
    let nonzero: Vec<Elem> = lat.elements().filter(|&e| e != lat.bottom()).collect();
    let mut d = vec![lat.bottom(); n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let v = nonzero[raw[k % raw.len()] as usize % nonzero.len()];
            d[i * n + j] = v;
            d[j * n + i] = v;
            k += 1;
        }
    }
    triangle_closure(&lat, n, &mut d);
    let s = LambdaSpace::new(lat, (0..n as u32).collect(), d).ok()?;
    s.is_valid().then_some(s)
}
