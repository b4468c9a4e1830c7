use proptest::prelude::*;

use skyselect_core::catalog::*;
use skyselect_core::pricing::*;
use skyselect_core::selection::*;
use skyselect_core::{select, Decimal};
use skyselect_testkit::gen::{self, scaled};
use skyselect_testkit::oracle::{
    brute_force_tiered, naive_select, offer_count_formulas, region_aware_simple_count, OracleRow,
};

fn as_oracle_rows(rows: &[Recommendation]) -> Vec<OracleRow> {
    rows.iter()
        .map(|r| OracleRow {
            provider: r.provider_name.clone(),
            region: r.region_name.clone(),
            storage: r.storage_offering.clone(),
            compute: r.compute_offerings.clone(),
            transfer: r.transfer_offering.clone(),
            storage_cost: r.breakdown.storage_cost,
            requests_cost: r.breakdown.requests_cost,
            data_in_cost: r.breakdown.data_in_cost,
            data_out_cost: r.breakdown.data_out_cost,
            compute_costs: r.breakdown.compute_costs.clone(),
            total: r.breakdown.total,
        })
        .collect()
}

fn usd() -> RateTable {
    RateTable::usd_only(chrono::NaiveDate::from_ymd_opt(2026, 1, 1).unwrap())
}

#[test]
fn generated_catalogs_are_valid() {
    for seed in 0..100 {
        let c = gen::catalog(&mut gen::rng(seed));
        assert!(validate(&c).is_empty(), "seed {seed}: {:?}", validate(&c));
        assert!(validate_request(&gen::request(&mut gen::rng(seed), &c)).is_empty());
    }
}

#[test]
fn tiered_cost_matches_brute_force() {
    let mut rng = gen::rng(7);
    for _ in 0..60 {
        let s = gen::schedule(&mut rng, 20, true);
        let q = scaled(&mut rng, 0, 25_000, 3);
        assert_eq!(tiered_cost(&s, q).ok(), brute_force_tiered(&s, q), "{s:?} at {q}");
    }
}

#[test]
fn select_matches_naive_oracle() {
    for seed in 0..60 {
        let mut rng = gen::rng(seed);
        let c = gen::catalog(&mut rng);
        let req = gen::request(&mut rng, &c);
        let got = select(&req, &c, &usd()).unwrap();
        assert_eq!(as_oracle_rows(&got), naive_select(&c, &req, Decimal::ONE), "seed {seed}");
    }
}

#[test]
fn select_is_deterministic() {
    let mut rng = gen::rng(99);
    let c = gen::catalog(&mut rng);
    let req = gen::request(&mut rng, &c);
    assert_eq!(select(&req, &c, &usd()).unwrap(), select(&req, &c, &usd()).unwrap());
}

#[test]
fn unfiltered_candidate_count_is_region_aware_simple_count() {
    for seed in 0..100 {
        let c = gen::catalog(&mut gen::rng(seed));
        let n = enumerate_candidates(&c, &gen::unfiltered_combined_request()).len() as u64;
        assert_eq!(n, region_aware_simple_count(&c), "seed {seed}");
        assert_eq!(offer_count(&c).candidate_rows, n);
    }
}

#[test]
fn offer_count_matches_formulas() {
    for seed in 0..100 {
        let c = gen::catalog(&mut gen::rng(seed));
        let r = offer_count(&c);
        assert_eq!((r.simple_count, r.detailed_count), offer_count_formulas(&c), "seed {seed}");
        assert!(r.detailed_count >= r.simple_count);
    }
}

#[test]
fn currency_does_not_change_order() {
    for seed in 0..40 {
        let mut rng = gen::rng(seed);
        let c = gen::catalog(&mut rng);
        let req = gen::request(&mut rng, &c);
        let rate = scaled(&mut rng, 1, 2_000_000, 4);
        let rates = usd().with_rate("JPY", rate);
        let base = select(&req, &c, &rates).unwrap();
        let other = select(&req.clone().with_currency("JPY"), &c, &rates).unwrap();
        let key = |r: &Recommendation| {
            (
                r.provider_name.clone(),
                r.region_name.clone(),
                r.storage_offering.clone(),
                r.compute_offerings.clone(),
                r.transfer_offering.clone(),
            )
        };
        assert_eq!(base.iter().map(key).collect::<Vec<_>>(), other.iter().map(key).collect::<Vec<_>>(), "seed {seed}");
        for (a, b) in base.iter().zip(&other) {
            assert_eq!(a.breakdown.total * rate, b.breakdown.total);
        }
    }
}

#[test]
fn adding_a_criterion_never_adds_candidates() {
    let extra = [
        Criterion::location(Location::Europe),
        Criterion::min(Parameter::Cores, Decimal::from(2)),
        Criterion::max(Parameter::StorageGb, Decimal::from(50)),
        Criterion::provider("P1"),
    ];
    for seed in 0..60 {
        let mut rng = gen::rng(seed);
        let c = gen::catalog(&mut rng);
        let req = gen::request(&mut rng, &c);
        let before = enumerate_candidates(&c, &req).len();
        for criterion in &extra {
            let mut narrowed = req.clone();
            narrowed.criteria.push(criterion.clone());
            assert!(enumerate_candidates(&c, &narrowed).len() <= before, "seed {seed} {criterion:?}");
        }
    }
}

#[test]
fn recommendations_honor_criteria() {
    for seed in 0..60 {
        let mut rng = gen::rng(seed);
        let c = gen::catalog(&mut rng);
        let req = gen::request(&mut rng, &c);
        for r in select(&req, &c, &usd()).unwrap() {
            let provider = c.provider(&r.provider_name).unwrap();
            let region = provider.region(&r.region_name).unwrap();
            if let Some(names) = &req.provider_filter {
                assert!(names.contains(&provider.name));
            }
            for criterion in &req.criteria {
                assert!(criterion.accepts_placement(provider, region));
                if let Some(s) = &r.storage_offering {
                    assert!(criterion.accepts_storage(region.storage.iter().find(|o| &o.name == s).unwrap()));
                }
            }
            for (name, requirement) in r.compute_offerings.iter().zip(&req.compute_requirements) {
                let o = region.compute.iter().find(|o| &o.name == name).unwrap();
                assert!(compute_matches(requirement, o));
                assert!(req.criteria.iter().all(|c| c.accepts_compute(o)));
            }
            assert!(r.breakdown.is_consistent());
        }
    }
}

#[test]
fn catalog_survives_serialization() {
    for seed in 0..50 {
        let c = gen::catalog(&mut gen::rng(seed));
        let back = load_catalog(&to_json(&c)).unwrap();
        assert_eq!(back, c, "seed {seed}");
    }
}

#[test]
fn merging_is_idempotent_and_keeps_offerings() {
    for seed in 0..100 {
        let c = gen::catalog(&mut gen::rng(seed));
        let merged = merge_all_regions(c.clone());
        assert_eq!(merge_all_regions(merged.clone()), merged);
        for (before, after) in c.providers.iter().zip(&merged.providers) {
            assert!(after.regions.len() <= before.regions.len());
            let names = |p: &Provider| {
                let mut v: Vec<String> =
                    p.regions.iter().flat_map(|r| r.compute.iter().map(|o| o.name.clone())).collect();
                v.sort();
                v.dedup();
                v
            };
            assert_eq!(names(before), names(after));
        }
        assert!(validate(&merged).is_empty());
    }
}

proptest! {
    #[test]
    fn storage_proration_doubles_quantity_halves_days(rate in 0i64..5000, g in 0i64..100_000) {
        let rate = Decimal::new(rate, 3);
        let g = Decimal::new(g, 2);
        let o = StorageOffering {
            name: "flat".into(),
            min_gb: Decimal::ZERO,
            max_gb: None,
            gb_month_tiers: TierSchedule::flat(rate),
            requests: vec![],
            plan_type: StoragePlanType::PayAsYouGo,
            plan: PlanPricing::on_demand(),
        };
        let half_month = Decimal::new(155, 1);
        prop_assert_eq!(
            storage_cost(&o, g * Decimal::TWO, half_month).unwrap(),
            storage_cost(&o, g, Decimal::from(31)).unwrap()
        );
    }

    #[test]
    fn ram_hour_law(rate in 0i64..1000, ram in 1i64..100_000, hours in 0i64..10_000, count in 1u32..10, cores in 1u32..32) {
        let billing = ComputeBilling::per_ram_gb(Decimal::new(rate, 3));
        let (ram, hours) = (Decimal::new(ram, 3), Decimal::new(hours, 1));
        prop_assert_eq!(
            compute_cost(&billing, ram, cores, hours, count),
            Decimal::new(rate, 3) * ram * hours * Decimal::from(count)
        );
    }
}
