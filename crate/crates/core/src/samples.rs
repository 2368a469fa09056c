//! The stock structures used throughout the tests and the corpus: the
//! semidirect sum over F_2, the generalized matrix ring M_2(F_2) with
//! diagonal Γ, and small Krasner graded rings regarded as gamma rings.

use crate::finabel::FiniteAbelianGroup;
use crate::gammaring::{
    build_generalized_matrix_ring, build_semidirect_sum, gamma_from_graded_ring, GradedGammaRing,
    MoritaContext, RingTable,
};
use crate::grading::Graduation;

/// `R = S ⊕ I` with `S = F_2`, `I = F_2`, `I² = 0`, `si = is = i`;
/// `Γ = S`. Its anneid is the three-element structure `{0, s, i}`.
pub fn semidirect_f2() -> GradedGammaRing {
    let s = RingTable::field(2);
    let i = RingTable::zero_ring(2);
    let si = vec![0u16, 0, 0, 1];
    let is_ = vec![0u16, 0, 0, 1];
    build_semidirect_sum(&s, &i, &si, &is_).expect("stock semidirect sum is a ring")
}

/// `M_2(F_2)` from the Morita context `(F_2, F_2, F_2, F_2)` with field
/// multiplication everywhere; `Γ` the diagonal blocks.
pub fn matrix_f2() -> GradedGammaRing {
    build_generalized_matrix_ring(&MoritaContext::square(RingTable::field(2)))
        .expect("stock Morita context is compatible")
}

/// `F_2[x]/(x²)` graded by `{0,1}` and `{0,x}`, as a gamma ring over
/// itself (Nobusawa: the ring is unital, hence faithful).
pub fn dual_numbers_f2() -> GradedGammaRing {
    let group = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
    // id encoding: bit 0 the constant part, bit 1 the x part.
    let ring = RingTable::from_fn(group.clone(), |x, y| {
        let (a, b) = (x & 1, x >> 1);
        let (c, d) = (y & 1, y >> 1);
        (a * c) | (((a * d + b * c) & 1) << 1)
    })
    .unwrap();
    let one = group.subgroup_from_ids(&[1]);
    let xs = group.subgroup_from_ids(&[2]);
    let grad = Graduation::new(group, vec![one, xs]).unwrap();
    gamma_from_graded_ring(&ring, &grad).expect("dual numbers are Krasner graded")
}

/// `F_2 × F_2` graded by its two factors, as a gamma ring over itself.
pub fn f2xf2_graded() -> GradedGammaRing {
    let group = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
    let ring = RingTable::from_fn(group.clone(), |x, y| {
        ((x & 1) * (y & 1)) | (((x >> 1) * (y >> 1)) << 1)
    })
    .unwrap();
    let a = group.subgroup_from_ids(&[1]);
    let b = group.subgroup_from_ids(&[2]);
    let grad = Graduation::new(group, vec![a, b]).unwrap();
    gamma_from_graded_ring(&ring, &grad).expect("product ring is Krasner graded")
}

/// The 2×2 upper triangular matrices over F_2, trivially graded as a
/// gamma ring over itself. Its radical is the strictly upper block.
pub fn upper_triangular_f2() -> GradedGammaRing {
    let group = FiniteAbelianGroup::new(vec![2, 2, 2]).unwrap();
    // id encoding: bit 0 = e11, bit 1 = e12, bit 2 = e22.
    let ring = RingTable::from_fn(group.clone(), |x, y| {
        let (a, b, c) = (x & 1, (x >> 1) & 1, (x >> 2) & 1);
        let (d, e, f) = (y & 1, (y >> 1) & 1, (y >> 2) & 1);
        // (a e11 + b e12 + c e22)(d e11 + e e12 + f e22)
        let r11 = a * d;
        let r12 = (a * e + b * f) & 1;
        let r22 = c * f;
        r11 | (r12 << 1) | (r22 << 2)
    })
    .unwrap();
    let grad = Graduation::trivial(group);
    gamma_from_graded_ring(&ring, &grad).expect("ring is associative")
}

/// `Z_n` trivially graded as a gamma ring over itself.
pub fn modular_ring(n: u64) -> GradedGammaRing {
    let ring = RingTable::modular(n);
    let grad = Graduation::trivial(ring.group.clone());
    gamma_from_graded_ring(&ring, &grad).expect("Z_n is a ring")
}
