use gctet::tetrahedra::{dualize_tet, from_angles, recover_parameters};
use gctet::volumes::{ideal_volume, lightlike_volume};
use gctet::{Isometry, Kind, Lambda, Mat2, Tetrahedron};
use proptest::prelude::*;

fn lambda() -> impl Strategy<Value = Lambda> {
    prop::sample::select(Lambda::ALL.to_vec())
}

fn pose(lam: Lambda) -> impl Strategy<Value = Isometry> {
    prop::array::uniform8(-1.0..1.0f64).prop_filter_map("well conditioned", move |v| {
        let m = Mat2::from_parts(lam, [[1.5 + v[0], v[1]], [v[2], 1.5 + v[3]]], [[v[4], v[5]], [v[6], v[7]]]);
        let split_ok = |sg: f64| {
            let (a, b, c, d) = (1.5 + v[0] + sg * v[4], v[1] + sg * v[5], v[2] + sg * v[6], 1.5 + v[3] + sg * v[7]);
            (a * d - b * c).abs() > 0.2
        };
        if lam == Lambda::Neg && !(split_ok(1.0) && split_ok(-1.0)) {
            return None;
        }
        Isometry::new(m).ok()
    })
}

fn volume(t: &Tetrahedron) -> f64 {
    match t.kind() {
        Kind::Lightlike => lightlike_volume(t.lambda(), t.alpha(), t.beta()).unwrap(),
        Kind::Ideal => ideal_volume(t.lambda(), t.alpha(), t.beta()).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posed_dual_and_recovery_agree(
        (lam, g) in lambda().prop_flat_map(|l| (Just(l), pose(l))),
        a in 0.15..1.4f64,
        b in 0.15..1.4f64,
        lightlike in any::<bool>(),
    ) {
        let kind = if lightlike { Kind::Lightlike } else { Kind::Ideal };
        let t = from_angles(kind, lam, a, b).unwrap().transformed(&g);
        let r = recover_parameters(t.vertices(), lam).unwrap();
        prop_assert!((r.alpha - a).abs() < 1e-9 && (r.beta - b).abs() < 1e-9);
        let d = dualize_tet(&t).unwrap();
        prop_assert_eq!(d.kind(), kind.dual());
        prop_assert!((d.alpha() - a).abs() < 1e-9 && (d.beta() - b).abs() < 1e-9);
        let rebuilt = Tetrahedron::from_vertices(t.vertices(), lam).unwrap();
        prop_assert!((volume(&rebuilt) - volume(&t)).abs() <= 1e-9 * volume(&t).abs().max(1.0));
    }
}
