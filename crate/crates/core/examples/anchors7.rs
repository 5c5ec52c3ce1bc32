// scratch: criterion-7 anchors with full precision
use delone_ids::geometry::{generate, GeneratorSpec, Window};
use delone_ids::mld::{build_gfin, decorate};
use delone_ids::operators::{decorated_rule, nn_adjacency_rule};
use delone_ids::patterns::PatternClass;
use delone_ids::spectra::{ids_curve, sup_distance};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

fn main() {
    let g = build_gfin(0.42).unwrap();
    let base = generate(&GeneratorSpec::SquareLattice { spacing: 1.0 }, &Window::centered_box(2, 21.0), 0).unwrap();
    let omega = decorate(&base, &PatternClass::singleton(2, 0.4), &g).unwrap();
    let dec = decorated_rule(&g, 1.0).unwrap();
    let nn = nn_adjacency_rule(1.0).unwrap();

    for (name, set, rule) in [("undecorated", &base, &nn), ("decorated", &omega, &dec)] {
        let n4 = ids_curve(rule, set, &Window::centered_box(2, 4.0)).unwrap();
        let n8 = ids_curve(rule, set, &Window::centered_box(2, 8.0)).unwrap();
        let n16 = ids_curve(rule, set, &Window::centered_box(2, 16.0)).unwrap();
        let d48 = sup_distance(&n4, &n8);
        let d816 = sup_distance(&n8, &n16);
        println!("{name}: sup(N4,N8) = {d48:.17} sup(N8,N16) = {d816:.17}");

        // 4 seeded translates for the (4, 8) pair
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut max_t = 0.0f64;
        for _ in 0..4 {
            let t = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            let shifted = set.translate(&t);
            let m4 = ids_curve(rule, &shifted, &Window::centered_box(2, 4.0)).unwrap();
            let m8 = ids_curve(rule, &shifted, &Window::centered_box(2, 8.0)).unwrap();
            let d = sup_distance(&m4, &m8);
            println!("  translate ({:.4},{:.4}): sup = {d:.17}", t[0], t[1]);
            max_t = max_t.max(d);
        }
        println!("{name}: translate max {max_t:.17} vs base {d48:.17}: ratio {:.4}", max_t / d48);
    }
}
