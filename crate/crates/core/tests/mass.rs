mod common;

use common::{integrate_tail, parameter_sets, region_masses, typical_scale};

#[test]
fn univariate_densities_integrate_to_one() {
    for model in parameter_sets() {
        for law in [model.component(1), model.max_law()] {
            let s = typical_scale(&model);
            let mass = integrate_tail(|x| law.pdf(x), 0.0, s, 1e-11);
            assert!((mass - 1.0).abs() < 1e-8, "{law:?}: {mass}");
        }
    }
}

#[test]
fn pieces_of_the_joint_law_carry_the_right_mass() {
    for model in parameter_sets() {
        let (lower, upper, line) = region_masses(&model, 1e-10);
        assert!((lower + upper + line - 1.0).abs() < 1e-6, "{model:?}");
        assert!((line - model.singular_weight()).abs() < 1e-6, "{model:?}");
        // P(X1 < X2) = α2/Σα: U2 is the overall max
        assert!((lower - model.alpha2() / model.total_shape()).abs() < 1e-6);
    }
}
