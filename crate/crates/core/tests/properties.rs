use cosetrepair::repair::{repair_erased_at, repair_with_plan};
use cosetrepair::rs::inner_product;
use cosetrepair::{
    brute_dim, build_plan, classical_repair, encode, enumerate_cosets, gw_max_k, Felem, FieldCtx,
    Message, PlanDocument,
};
use proptest::prelude::*;
use proptest::sample::select;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: &[(u32, u32, u32)] = &[
    (2, 1, 2),
    (3, 1, 2),
    (2, 2, 2),
    (2, 1, 3),
    (2, 1, 4),
    (5, 1, 2),
    (2, 3, 2),
    (3, 1, 3),
    (2, 1, 6),
    (7, 1, 2),
];

fn field() -> impl Strategy<Value = FieldCtx> {
    select(FIELDS).prop_map(|(p, m, t)| FieldCtx::new(p, m, t).unwrap())
}

fn elem(ctx: &FieldCtx, seed: u64) -> Felem {
    ctx.element((seed % ctx.size()) as u32).unwrap()
}

fn sub_elem(ctx: &FieldCtx, seed: u64) -> Felem {
    let b = ctx.subfield_elements();
    b[(seed % b.len() as u64) as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_b_linear(ctx in field(), s in any::<[u64; 4]>()) {
        let (x, y) = (elem(&ctx, s[0]), elem(&ctx, s[1]));
        let (a, b) = (sub_elem(&ctx, s[2]), sub_elem(&ctx, s[3]));
        let lhs = ctx.trace(ctx.add(ctx.mul(a, x), ctx.mul(b, y)));
        let rhs = ctx.add(ctx.mul(a, ctx.trace(x)), ctx.mul(b, ctx.trace(y)));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(ctx.in_subfield(ctx.trace(x)));
    }

    #[test]
    fn b_coordinates_round_trip(ctx in field(), s in any::<u64>()) {
        let x = elem(&ctx, s);
        let coords = ctx.b_coordinates(x);
        prop_assert_eq!(coords.len(), ctx.t() as usize);
        prop_assert!(coords.iter().all(|&c| ctx.in_subfield(c)));
        prop_assert_eq!(ctx.from_b_coordinates(&coords), x);
    }

    #[test]
    fn field_axioms(ctx in field(), s in any::<[u64; 3]>()) {
        let (x, y, z) = (elem(&ctx, s[0]), elem(&ctx, s[1]), elem(&ctx, s[2]));
        prop_assert_eq!(ctx.mul(x, ctx.add(y, z)), ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        prop_assert_eq!(ctx.add(x, ctx.neg(x)), Felem::ZERO);
        if !x.is_zero() {
            prop_assert_eq!(ctx.mul(x, ctx.inv(x).unwrap()), Felem::ONE);
        }
    }

    #[test]
    fn cosets_partition_and_divide_t(ctx in field()) {
        let cc = enumerate_cosets(ctx.q(), ctx.t());
        let modulus = ctx.group_order();
        let mut seen = vec![false; modulus as usize];
        for c in cc.cosets() {
            prop_assert_eq!(ctx.t() as usize % c.size(), 0);
            for &e in c.elements() {
                prop_assert!(!seen[e as usize]);
                seen[e as usize] = true;
                prop_assert!(c.contains(e * ctx.q() % modulus));
            }
        }
        prop_assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn dim_is_monotone_and_removal_bounded(ctx in field()) {
        let cc = enumerate_cosets(ctx.q(), ctx.t());
        let n1 = ctx.group_order() as usize;
        let mut prev = usize::MAX;
        for k in 2..=n1 {
            let d = cc.dim_w(k).unwrap();
            prop_assert!(d <= prev);
            prev = d;
        }
        for k in 1..=gw_max_k(&ctx) {
            prop_assert!(n1 - cc.dim_w(k).unwrap() <= k * ctx.t() as usize);
        }
    }

    #[test]
    fn oracle_agrees(ctx in field(), k_seed in any::<u64>()) {
        let k = 1 + (k_seed % (ctx.size() - 1)) as usize;
        let cc = enumerate_cosets(ctx.q(), ctx.t());
        prop_assert_eq!(cc.dim_w(k).unwrap(), brute_dim(&ctx, k).unwrap());
    }

    #[test]
    fn repair_recovers_erased_symbol(ctx in field(), s in any::<[u64; 3]>()) {
        let k = 1 + (s[0] % gw_max_k(&ctx) as u64) as usize;
        let r = s[1] % ctx.group_order();
        let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k).unwrap();
        let plan = build_plan(&ctx, &fc, r).unwrap();
        prop_assert!(plan.factorization_holds(&ctx).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(s[2]);
        let msg = Message::random(&ctx, k, &mut rng);
        let cw = encode(&ctx, &msg).unwrap();
        let out = repair_with_plan(&ctx, &plan, &cw.clone().erase_zero().unwrap()).unwrap();
        prop_assert_eq!(out.value, msg.coeffs()[0]);
        prop_assert_eq!(out.report.b_symbols, ctx.group_order() as usize - fc.d());

        let pos = 1 + (s[2] % (ctx.size() - 1)) as usize;
        let moved = repair_erased_at(&ctx, &plan, &cw.clone().erase(pos).unwrap(), pos).unwrap();
        prop_assert_eq!(moved.value, cw.get(pos).unwrap());
    }

    #[test]
    fn dual_vectors_annihilate_codewords(ctx in field(), s in any::<[u64; 2]>()) {
        let k = 1 + (s[0] % gw_max_k(&ctx) as u64) as usize;
        let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k).unwrap();
        let plan = build_plan(&ctx, &fc, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(s[1]);
        let cw = encode(&ctx, &Message::random(&ctx, k, &mut rng)).unwrap();
        let values: Vec<Felem> = (0..cw.len()).map(|i| cw.get(i).unwrap()).collect();
        for poly in plan.trace_polys() {
            let ip = inner_product(&ctx, &poly.dual_codeword(&ctx), &values).unwrap();
            prop_assert!(ip.is_zero());
        }
    }

    #[test]
    fn classical_repair_uses_any_k_helpers(ctx in field(), s in any::<[u64; 2]>()) {
        let n = ctx.size() as usize;
        let k = 1 + (s[0] % (n as u64 - 1)) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(s[1]);
        let msg = Message::random(&ctx, k, &mut rng);
        let cw = encode(&ctx, &msg).unwrap().erase_zero().unwrap();
        let mut helpers: Vec<usize> = (1..n).collect();
        rand::seq::SliceRandom::shuffle(helpers.as_mut_slice(), &mut rng);
        let out = classical_repair(&ctx, &cw, k, &helpers[..k]).unwrap();
        prop_assert_eq!(out.value, msg.coeffs()[0]);
        prop_assert_eq!(out.b_symbols, k * ctx.t() as usize);
    }

    #[test]
    fn plan_json_round_trips(ctx in field(), s in any::<[u64; 2]>()) {
        let k = 1 + (s[0] % gw_max_k(&ctx) as u64) as usize;
        let r = s[1] % ctx.group_order();
        let fc = enumerate_cosets(ctx.q(), ctx.t()).filter(k).unwrap();
        let doc = build_plan(&ctx, &fc, r).unwrap().to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: PlanDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        let (_, plan) = back.into_plan().unwrap();
        prop_assert_eq!(plan.to_document(), doc);
    }
}

#[test]
fn repair_is_independent_of_window_gf9() {
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    let cc = enumerate_cosets(3, 2);
    for k in 1..=gw_max_k(&ctx) {
        let fc = cc.filter(k).unwrap();
        let plans: Vec<_> = (0..8).map(|r| build_plan(&ctx, &fc, r).unwrap()).collect();
        for idx in (0..9u64.pow(k as u32)).step_by(7) {
            let msg = Message::nth(&ctx, k, idx);
            let cw = encode(&ctx, &msg).unwrap().erase_zero().unwrap();
            for plan in &plans {
                assert_eq!(
                    repair_with_plan(&ctx, plan, &cw).unwrap().value,
                    msg.coeffs()[0]
                );
            }
        }
    }
}
