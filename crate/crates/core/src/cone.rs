//! The surgery mapping cone: two copies of a complex A mapping to a single
//! tower B, with the involution swapping the copies and fixing B, and the
//! explicit change-of-basis reduction of that cone to a rank-one model.

use num_traits::Zero;

use crate::complex::{Grading, GradedComplex, Generator};
use crate::error::Error;
use crate::iota::IotaComplex;
use crate::reduce::reduce;
use crate::umap::UMap;
use crate::upoly::{Mat, UPoly};

/// A cone A_l ⊕ A_r ⊕ B with differential carrying v from each copy of A
/// into B. Construction data is kept alongside the iota-complex so the
/// reduction argument can replay it.
#[derive(Debug, Clone)]
pub struct SurgeryCone {
    pub a: GradedComplex,
    pub b: GradedComplex,
    pub v: UMap,
    pub shift: Grading,
    pub iota: IotaComplex,
}

/// Build the cone. B-copy generators sit one grading below their own
/// grading (minus the even degree of v), the overall shift is applied last,
/// and the involution swaps the two A copies identically while fixing B.
pub fn surgery_cone(
    a: &GradedComplex,
    b: &GradedComplex,
    v: &UMap,
    shift: Grading,
) -> Result<SurgeryCone, Error> {
    if v.source != *a || v.target != *b {
        return Err(Error::InvalidCone(
            "v must map the given A to the given B".into(),
        ));
    }
    if v.degree % 2 != 0 {
        return Err(Error::InvalidCone(format!(
            "v must have even degree, got {}",
            v.degree
        )));
    }
    if !v.is_homogeneous() || !v.is_chain_map() {
        return Err(Error::InvalidCone("v is not a homogeneous chain map".into()));
    }
    match reduce(b) {
        Ok(r) => {
            if !r.normal_form.steps.is_empty() {
                return Err(Error::InvalidCone(
                    "B must reduce to a single bare tower".into(),
                ));
            }
        }
        Err(e) => {
            return Err(Error::InvalidCone(format!(
                "B must reduce to a single tower: {e}"
            )))
        }
    }

    let na = a.rank();
    let nb = b.rank();
    let n = 2 * na + nb;
    let b_drop = Grading::from_integer(1 + v.degree);

    let mut gens: Vec<Generator> = Vec::with_capacity(n);
    for g in &a.gens {
        gens.push(Generator { id: format!("l:{}", g.id), grading: g.grading + shift });
    }
    for g in &a.gens {
        gens.push(Generator { id: format!("r:{}", g.id), grading: g.grading + shift });
    }
    for g in &b.gens {
        gens.push(Generator {
            id: format!("b:{}", g.id),
            grading: g.grading - b_drop + shift,
        });
    }

    let l_off = 0;
    let r_off = na;
    let b_off = 2 * na;
    let mut d = Mat::zero(n, n);
    for i in 0..na {
        for j in 0..na {
            let e = a.d.get(i, j);
            if !e.is_zero() {
                d.set(l_off + i, l_off + j, e.clone());
                d.set(r_off + i, r_off + j, e.clone());
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            let e = b.d.get(i, j);
            if !e.is_zero() {
                d.set(b_off + i, b_off + j, e.clone());
            }
        }
    }
    for i in 0..nb {
        for j in 0..na {
            let e = v.mat.get(i, j);
            if !e.is_zero() {
                d.set(b_off + i, l_off + j, e.clone());
                d.set(b_off + i, r_off + j, e.clone());
            }
        }
    }

    let complex = GradedComplex { name: format!("cone({})", a.name), gens, d };
    let mut iota = Mat::zero(n, n);
    for i in 0..na {
        iota.set(l_off + i, r_off + i, UPoly::one());
        iota.set(r_off + i, l_off + i, UPoly::one());
    }
    for i in 0..nb {
        iota.set(b_off + i, b_off + i, UPoly::one());
    }

    let iota_complex = IotaComplex::new(complex, iota);
    debug_assert!(iota_complex.complex.is_valid());
    Ok(SurgeryCone {
        a: a.clone(),
        b: b.clone(),
        v: v.clone(),
        shift,
        iota: iota_complex,
    })
}

/// Result of reducing a cone to its rank-one model: the model itself and
/// local maps in both directions.
#[derive(Debug, Clone)]
pub struct ConeReduction {
    pub model: IotaComplex,
    pub to_model: UMap,
    pub from_model: UMap,
}

/// Reduce a surgery cone with d(A) = 0 to the rank-one model `(F[U]_shift, id)`
/// by the explicit argument: normalize A, check v is a unit on the towers,
/// clear v on each two-step top by adding a multiple of the tower generator
/// (mirrored on both copies), split off the two-step debris, and cancel the
/// remaining three-generator core down to one tower.
pub fn reduce_cone(cone: &SurgeryCone) -> Result<ConeReduction, Error> {
    let ra = reduce(&cone.a)?;
    if !ra.normal_form.tower_grading.is_zero() {
        return Err(Error::HypothesisFailed(format!(
            "d(A) = {} but the reduction requires d(A) = 0",
            ra.normal_form.tower_grading
        )));
    }
    let rb = reduce(&cone.b)?;
    if !rb.normal_form.steps.is_empty() {
        return Err(Error::HypothesisFailed(
            "B does not reduce to a bare tower".into(),
        ));
    }

    let a_red = {
        let mut c = ra.reduced.clone();
        c.name = format!("{}·norm", cone.a.name);
        c
    };
    let b_red = {
        let mut c = rb.reduced.clone();
        c.name = format!("{}·norm", cone.b.name);
        c
    };
    // v in the normalized bases
    let v_red_mat = rb.project.mat.mul(&cone.v.mat).mul(&ra.include.mat);
    let v_red = UMap {
        source: a_red.clone(),
        target: b_red.clone(),
        degree: cone.v.degree,
        mat: v_red_mat,
    };
    debug_assert!(v_red.is_chain_map());

    let xa = ra.tower_index;
    let unit = v_red.mat.get(0, xa).clone();
    if unit != UPoly::one() {
        return Err(Error::HypothesisFailed(format!(
            "v on the tower generator is {unit}, not a unit"
        )));
    }

    // cone over the normalized pieces
    let cone1 = surgery_cone(&a_red, &b_red, &v_red, cone.shift)?;

    // Phi: cone -> cone1 with correction block K = proj_B ∘ v ∘ h_A on both
    // A columns; Psi: cone1 -> cone with K' = h_B ∘ v ∘ inc_A.
    let na = cone.a.rank();
    let nb = cone.b.rank();
    let na1 = a_red.rank();
    let nb1 = 1usize;
    let phi = {
        let mut m = Mat::zero(2 * na1 + nb1, 2 * na + nb);
        let k_block = rb.project.mat.mul(&cone.v.mat).mul(&ra.homotopy.mat);
        for i in 0..na1 {
            for j in 0..na {
                let e = ra.project.mat.get(i, j);
                if !e.is_zero() {
                    m.set(i, j, e.clone());
                    m.set(na1 + i, na + j, e.clone());
                }
            }
        }
        for i in 0..nb1 {
            for j in 0..nb {
                let e = rb.project.mat.get(i, j);
                if !e.is_zero() {
                    m.set(2 * na1 + i, 2 * na + j, e.clone());
                }
            }
        }
        for i in 0..nb1 {
            for j in 0..na {
                let e = k_block.get(i, j);
                if !e.is_zero() {
                    m.set(2 * na1 + i, j, e.clone());
                    m.set(2 * na1 + i, na + j, e.clone());
                }
            }
        }
        UMap {
            source: cone.iota.complex.clone(),
            target: cone1.iota.complex.clone(),
            degree: 0,
            mat: m,
        }
    };
    let psi = {
        let mut m = Mat::zero(2 * na + nb, 2 * na1 + nb1);
        let k_block = rb.homotopy.mat.mul(&cone.v.mat).mul(&ra.include.mat);
        for i in 0..na {
            for j in 0..na1 {
                let e = ra.include.mat.get(i, j);
                if !e.is_zero() {
                    m.set(i, j, e.clone());
                    m.set(na + i, na1 + j, e.clone());
                }
            }
        }
        for i in 0..nb {
            for j in 0..nb1 {
                let e = rb.include.mat.get(i, j);
                if !e.is_zero() {
                    m.set(2 * na + i, 2 * na1 + j, e.clone());
                }
            }
        }
        for i in 0..nb {
            for j in 0..na1 {
                let e = k_block.get(i, j);
                if !e.is_zero() {
                    m.set(2 * na + i, j, e.clone());
                    m.set(2 * na + i, na1 + j, e.clone());
                }
            }
        }
        UMap {
            source: cone1.iota.complex.clone(),
            target: cone.iota.complex.clone(),
            degree: 0,
            mat: m,
        }
    };
    debug_assert!(phi.is_chain_map(), "cone comparison map must be a chain map");
    debug_assert!(psi.is_chain_map());

    // Identify the two-step tops of A_red and the bottoms (targets).
    let n1 = a_red.rank();
    let mut is_top = vec![false; n1];
    for j in 0..n1 {
        for i in 0..n1 {
            if !a_red.d.get(i, j).is_zero() {
                is_top[j] = true;
                let bot_val = &v_red.mat.get(0, i);
                debug_assert!(
                    bot_val.is_zero(),
                    "v must vanish on two-step bottoms (chain map)"
                );
            }
        }
    }

    // v2: v_red with the two-step tops cleared; G: cone2 -> cone1 the
    // mirrored change of basis top <- top + c · tower.
    let mut v2 = v_red.clone();
    let mut coeffs: Vec<(usize, UPoly)> = Vec::new();
    for j in 0..n1 {
        if is_top[j] {
            let c = v_red.mat.get(0, j).clone();
            if !c.is_zero() {
                v2.mat.set(0, j, UPoly::zero());
                coeffs.push((j, c));
            }
        }
    }
    v2.source = a_red.clone();
    let cone2 = surgery_cone(&a_red, &b_red, &v2, cone.shift)?;
    let n_cone1 = 2 * n1 + 1;
    let g_mat = {
        let mut m = Mat::identity(n_cone1, UPoly::one());
        for (j, c) in &coeffs {
            m.set(xa, *j, c.clone());
            m.set(n1 + xa, n1 + *j, c.clone());
        }
        m
    };
    let g_12 = UMap {
        source: cone2.iota.complex.clone(),
        target: cone1.iota.complex.clone(),
        degree: 0,
        mat: g_mat.clone(),
    };
    let g_21 = UMap {
        source: cone1.iota.complex.clone(),
        target: cone2.iota.complex.clone(),
        degree: 0,
        mat: g_mat,
    };
    debug_assert!(g_12.is_chain_map());
    debug_assert!(g_21.is_chain_map());

    // Core = spans of the two tower copies and the B generator; everything
    // else in cone2 is split two-step debris.
    let l_x = xa;
    let r_x = n1 + xa;
    let b_y = 2 * n1;
    let core_complex = GradedComplex::new(
        format!("core({})", cone.a.name),
        vec![
            (
                cone2.iota.complex.gens[l_x].id.clone(),
                cone2.iota.complex.grading(l_x),
            ),
            (
                cone2.iota.complex.gens[r_x].id.clone(),
                cone2.iota.complex.grading(r_x),
            ),
            (
                cone2.iota.complex.gens[b_y].id.clone(),
                cone2.iota.complex.grading(b_y),
            ),
        ],
        &[],
    );
    let mut core = core_complex;
    core.d.set(2, 0, UPoly::one());
    core.d.set(2, 1, UPoly::one());
    let core_indices = [l_x, r_x, b_y];
    let mut p_core = UMap::zero(&cone2.iota.complex, &core, 0);
    let mut i_core = UMap::zero(&core, &cone2.iota.complex, 0);
    for (ci, &full) in core_indices.iter().enumerate() {
        p_core.mat.set(ci, full, UPoly::one());
        i_core.mat.set(full, ci, UPoly::one());
    }
    debug_assert!(p_core.is_chain_map());
    debug_assert!(i_core.is_chain_map());

    // Cancel the pair (B target, left tower source) in the core.
    let model_complex =
        GradedComplex::free_rank_one("model", "t", cone2.iota.complex.grading(r_x));
    let model = IotaComplex::with_identity_involution(model_complex.clone());
    let mut p_model = UMap::zero(&core, &model_complex, 0);
    p_model.mat.set(0, 1, UPoly::one());
    let mut i_model = UMap::zero(&model_complex, &core, 0);
    i_model.mat.set(0, 0, UPoly::one());
    i_model.mat.set(1, 0, UPoly::one());
    debug_assert!(p_model.is_chain_map());
    debug_assert!(i_model.is_chain_map());

    let to_model = p_model
        .compose(&p_core)?
        .compose(&g_21)?
        .compose(&phi)?;
    let from_model = psi
        .compose(&g_12)?
        .compose(&i_core)?
        .compose(&i_model)?;

    Ok(ConeReduction { model, to_model, from_model })
}
