//! Spin-flip closed forms for two-qubit roofs.

use super::MeasureValue;
use crate::math::sqrt;
use crate::tensor::{hermitian_eig, singular_values_rows, MixedState};
use crate::{tol, Error, Result, C64};
use alloc::format;
use alloc::vec::Vec;

/// Square roots of the eigenvalues of `rho (sy x sy) rho* (sy x sy)`, descending.
///
/// With `rho = F F†` these are the singular values of `F^T (sy x sy) F`, which
/// avoids the non-Hermitian product.
fn spin_flip_spectrum(rho: &MixedState) -> Result<[f64; 4]> {
    if rho.dims() != [2, 2] {
        return Err(Error::Shape(format!("two-qubit closed form needs dims [2, 2], got {:?}", rho.dims())));
    }
    let eig = hermitian_eig(rho.matrix())?;
    let factors: Vec<Vec<C64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > tol::RANK)
        .map(|(k, &mu)| eig.vector(k).into_iter().map(|z| z * sqrt(mu)).collect())
        .collect();
    let r = factors.len();
    // (sy x sy) maps |00> -> -|11>, |01> -> |10>, |10> -> |01>, |11> -> -|00>
    let flip = |f: &[C64]| [-f[3], f[2], f[1], -f[0]];
    let mut tau = Vec::with_capacity(r * r);
    for fl in &factors {
        for fk in &factors {
            let g = flip(fk);
            tau.push((0..4).map(|i| fl[i] * g[i]).sum::<C64>());
        }
    }
    let mut out = [0.0; 4];
    if r > 0 {
        for (slot, s) in out.iter_mut().zip(singular_values_rows(&mut tau, r, r)) {
            *slot = s;
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// `max(0, l1 - l2 - l3 - l4)` over the spin-flip spectrum.
pub fn wootters_concurrence(rho: &MixedState) -> Result<MeasureValue> {
    let l = spin_flip_spectrum(rho)?;
    Ok(MeasureValue::exact((l[0] - l[1] - l[2] - l[3]).max(0.0)))
}

/// Concurrence of assistance `l1 + l2 + l3 + l4`; exact for every two-qubit state.
pub fn coa_closed_form(rho: &MixedState) -> Result<MeasureValue> {
    let l = spin_flip_spectrum(rho)?;
    Ok(MeasureValue::exact(l.iter().sum()))
}
