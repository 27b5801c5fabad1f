//! Canonical interpolations `R_h` (full DOF set) and `I_h` (edge moments
//! only), and point evaluation of discrete fields.

use std::sync::Arc;

use rayon::prelude::*;

use crate::assembly_solve::SolutionField;
use crate::error::{Error, Result};
use crate::fespace::{apply_physical_dof, CellBasis, FESpace, SpaceKind};
use crate::reference_element::{shared_dual_basis, shared_nedelec_basis, ReferenceElementBasis};

/// Reference basis behind a `V(r)` or `Ned(r)` space.
pub fn basis_for(space: &FESpace) -> Result<&'static ReferenceElementBasis> {
    match space.kind() {
        SpaceKind::V(r) => shared_dual_basis(r),
        SpaceKind::Ned(r) => shared_nedelec_basis(r),
        k => Err(Error::InvalidArgument(format!("no vector basis for {k:?}"))),
    }
}

/// First `(cell, local index)` touching each global DOF.
fn owners(space: &FESpace) -> Vec<(usize, usize)> {
    let mut owner = vec![(usize::MAX, 0); space.ndofs()];
    for c in 0..space.mesh().num_cells() {
        for (i, &g) in space.cell_dofs(c).iter().enumerate() {
            if owner[g].0 == usize::MAX {
                owner[g] = (c, i);
            }
        }
    }
    owner
}

/// `R_h u`: every DOF of `V(r)` (or `Ned(r)`) applied to the analytic field
/// by `n`-point Gauss quadrature on its physical edge or face. Boundary DOFs
/// are kept, so the result is the interpolant in the space without boundary
/// conditions.
pub fn interpolate_r(
    u: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    curl: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    space: Arc<FESpace>,
    n: usize,
) -> Result<SolutionField> {
    let basis = basis_for(&space)?;
    let mesh = space.mesh();
    let coeffs = owners(&space)
        .par_iter()
        .map(|&(c, i)| apply_physical_dof(&mesh.cell_geometry(c), &basis.dofs[i], u, curl, n))
        .collect();
    Ok(SolutionField { space, coeffs })
}

/// `I_h v` for a field given cell by cell (`v(cell, x)`): edge moments are
/// averaged over the cells sharing each edge, which is exact whenever the
/// moments are single-valued.
pub fn interpolate_i_cellwise(
    v: &(dyn Fn(usize, [f64; 3]) -> [f64; 3] + Sync),
    ned: Arc<FESpace>,
    n: usize,
) -> Result<SolutionField> {
    if !matches!(ned.kind(), SpaceKind::Ned(_)) {
        return Err(Error::InvalidArgument(format!("I_h maps into Ned(r), got {:?}", ned.kind())));
    }
    let basis = basis_for(&ned)?;
    let mesh = ned.mesh();
    let local: Vec<Vec<f64>> = (0..mesh.num_cells())
        .into_par_iter()
        .map(|c| {
            let geom = mesh.cell_geometry(c);
            basis
                .dofs
                .iter()
                .map(|d| apply_physical_dof(&geom, d, |x| v(c, x), |_| [0.0; 3], n))
                .collect()
        })
        .collect();
    let mut sum = vec![0.0; ned.ndofs()];
    let mut count = vec![0usize; ned.ndofs()];
    for (c, vals) in local.iter().enumerate() {
        for (i, &g) in ned.cell_dofs(c).iter().enumerate() {
            sum[g] += vals[i];
            count[g] += 1;
        }
    }
    let coeffs = sum.iter().zip(&count).map(|(s, &k)| s / k.max(1) as f64).collect();
    Ok(SolutionField { space: ned, coeffs })
}

pub fn interpolate_i(
    u: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    ned: Arc<FESpace>,
    n: usize,
) -> Result<SolutionField> {
    interpolate_i_cellwise(&|_, x| u(x), ned, n)
}

/// `I_h v_h` for `v_h ∈ V_h`: the edge DOFs of `v_h` are exactly the edge
/// moments, so the image keeps the edge coefficients.
pub fn interpolate_i_discrete(v: &SolutionField, ned: Arc<FESpace>) -> Result<SolutionField> {
    match (v.space.kind(), ned.kind()) {
        (SpaceKind::V(r), SpaceKind::Ned(s)) if r == s && v.space.mesh().divisions() == ned.mesh().divisions() => {
            let coeffs = v.coeffs[..ned.ndofs()].to_vec();
            Ok(SolutionField { space: ned, coeffs })
        }
        (a, b) => Err(Error::InvalidArgument(format!("cannot map {a:?} into {b:?}"))),
    }
}

/// Value, curl and curl Jacobian of a discrete field at a point of cell `c`.
pub fn evaluate_field(u: &SolutionField, c: usize, x: [f64; 3]) -> Result<([f64; 3], [f64; 3], [[f64; 3]; 3])> {
    let basis = basis_for(&u.space)?;
    let cb = CellBasis::new(basis, u.space.mesh().cell_geometry(c));
    let mut v = [0.0; 3];
    let mut w = [0.0; 3];
    let mut g = [[0.0; 3]; 3];
    for (j, &dof) in u.space.cell_dofs(c).iter().enumerate() {
        let a = u.coeffs[dof];
        if a == 0.0 {
            continue;
        }
        let (bv, bc, bg) = (cb.value(j, x), cb.curl(j, x), cb.grad_curl(j, x));
        for i in 0..3 {
            v[i] += a * bv[i];
            w[i] += a * bc[i];
            for k in 0..3 {
                g[i][k] += a * bg[i][k];
            }
        }
    }
    Ok((v, w, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fespace::build_space;
    use crate::mesh::{build_box_mesh, Mesh};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mesh() -> Arc<Mesh> {
        Arc::new(build_box_mesh([0.0; 3], [1.0, 1.5, 0.75], [2, 3, 2]).unwrap())
    }

    fn random_point(m: &Mesh, c: usize, rng: &mut ChaCha8Rng) -> [f64; 3] {
        m.cell_geometry(c).to_physical(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn constants_reproduced() {
        let m = mesh();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in [1, 2] {
            let v = Arc::new(build_space(m.clone(), SpaceKind::V(r)).unwrap());
            let k = [0.4, -1.0, 2.5];
            let uh = interpolate_r(&|_| k, &|_| [0.0; 3], v, 6).unwrap();
            for c in 0..m.num_cells() {
                let x = random_point(&m, c, &mut rng);
                let (val, curl, _) = evaluate_field(&uh, c, x).unwrap();
                for i in 0..3 {
                    assert!((val[i] - k[i]).abs() < 1e-12);
                    assert!(curl[i].abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gradient_of_xyz_reproduced_for_r2() {
        let m = mesh();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = Arc::new(build_space(m.clone(), SpaceKind::V(2)).unwrap());
        let g = |x: [f64; 3]| [x[1] * x[2], x[0] * x[2], x[0] * x[1]];
        let uh = interpolate_r(&g, &|_| [0.0; 3], v, 6).unwrap();
        for c in 0..m.num_cells() {
            let x = random_point(&m, c, &mut rng);
            let (val, curl, _) = evaluate_field(&uh, c, x).unwrap();
            let e = g(x);
            for i in 0..3 {
                assert!((val[i] - e[i]).abs() < 1e-12, "{val:?} vs {e:?}");
                assert!(curl[i].abs() < 1e-11);
            }
        }
    }

    #[test]
    fn low_degree_fields_reproduced() {
        // Constants, rotations and ∇(xyz) lie in V for r = 1; all of P1
        // lies in V for r = 2.
        let m = mesh();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rot = |x: [f64; 3]| [1.0 - 2.0 * x[2] - 0.5 * x[1] + x[1] * x[2], 0.5 * x[0] - x[2] + x[0] * x[2], x[1] + 2.0 * x[0] + x[0] * x[1]];
        let rot_curl = |_: [f64; 3]| [2.0, -4.0, 1.0];
        let lin = |x: [f64; 3]| [1.0 + 2.0 * x[1] - x[2], 0.5 * x[0] + x[2] + 4.0 * x[0], 3.0 * x[1] - x[0]];
        let lin_curl = |_: [f64; 3]| [2.0, 0.0, 2.5];
        type Field = fn([f64; 3]) -> [f64; 3];
        let cases: [(usize, Field, Field); 3] = [(1, rot, rot_curl), (2, rot, rot_curl), (2, lin, lin_curl)];
        for (r, u, cu) in cases {
            let v = Arc::new(build_space(m.clone(), SpaceKind::V(r)).unwrap());
            let uh = interpolate_r(&u, &cu, v, 6).unwrap();
            for c in 0..m.num_cells() {
                let x = random_point(&m, c, &mut rng);
                let (val, curl, _) = evaluate_field(&uh, c, x).unwrap();
                let (e, ec) = (u(x), cu(x));
                for i in 0..3 {
                    assert!((val[i] - e[i]).abs() < 1e-12, "r={r}: {val:?} vs {e:?}");
                    assert!((curl[i] - ec[i]).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn i_h_is_identity_on_its_image() {
        let m = mesh();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for r in [1, 2] {
            let ned = Arc::new(build_space(m.clone(), SpaceKind::Ned(r)).unwrap());
            let coeffs: Vec<f64> = (0..ned.ndofs()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w = SolutionField {
                space: ned.clone(),
                coeffs: coeffs.clone(),
            };
            let iw = interpolate_i_cellwise(&|c, x| evaluate_field(&w, c, x).unwrap().0, ned, 4).unwrap();
            for (a, b) in iw.coeffs.iter().zip(&coeffs) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn i_h_keeps_curl_free_discrete_fields() {
        // curl_h v_h = 0 per cell ⇒ I_h v_h = v_h; gradients of serendipity
        // functions are such fields.
        let m = mesh();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for r in [1, 2] {
            let v = Arc::new(build_space(m.clone(), SpaceKind::V(r)).unwrap());
            let ned = Arc::new(build_space(m.clone(), SpaceKind::Ned(r)).unwrap());
            // ∇(xyz + x²)
            let grad = |x: [f64; 3]| [x[1] * x[2] + 2.0 * x[0], x[0] * x[2], x[0] * x[1]];
            let vh = interpolate_r(&grad, &|_| [0.0; 3], v, 6).unwrap();
            let ivh = interpolate_i_discrete(&vh, ned).unwrap();
            for c in 0..m.num_cells() {
                let x = random_point(&m, c, &mut rng);
                let (a, ca, _) = evaluate_field(&vh, c, x).unwrap();
                let (b, _, _) = evaluate_field(&ivh, c, x).unwrap();
                for i in 0..3 {
                    assert!(ca[i].abs() < 1e-11);
                    assert!((a[i] - b[i]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn nedelec_space_dimension_per_cell() {
        let m = Arc::new(Mesh::unit_cube(1).unwrap());
        for (r, dim) in [(1, 12), (2, 24)] {
            let ned = build_space(m.clone(), SpaceKind::Ned(r)).unwrap();
            assert_eq!(ned.local_size(), dim);
            assert_eq!(basis_for(&ned).unwrap().len(), dim);
        }
    }
}
