use regex::Regex;
use serde::Serialize;

use super::model::*;
use super::validate::offering_problems;
use super::{CatalogError, Violation};

/// A flattened offering together with where it is offered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OfferingRow {
    pub provider: String,
    pub region: String,
    pub location: Location,
    pub offering: Offering,
}

/// Lists offerings of one service type, optionally filtered by a regular
/// expression over offering names and by provider names. An absent provider
/// list means every provider.
pub fn list_offerings(
    catalog: &Catalog,
    service_type: ServiceType,
    name_pattern: Option<&str>,
    providers: Option<&[String]>,
) -> Result<Vec<OfferingRow>, CatalogError> {
    let pattern = name_pattern.map(Regex::new).transpose()?;
    let mut rows = Vec::new();
    for provider in &catalog.providers {
        if let Some(list) = providers {
            if !list.iter().any(|p| p == &provider.name) {
                continue;
            }
        }
        for region in &provider.regions {
            let offerings: Vec<Offering> = match service_type {
                ServiceType::Compute => region.compute.iter().cloned().map(Offering::Compute).collect(),
                ServiceType::Storage => region.storage.iter().cloned().map(Offering::Storage).collect(),
                ServiceType::Transfer => region.transfer.iter().cloned().map(Offering::Transfer).collect(),
            };
            rows.extend(offerings.into_iter().filter(|o| pattern.as_ref().is_none_or(|re| re.is_match(o.name()))).map(
                |offering| OfferingRow {
                    provider: provider.name.clone(),
                    region: region.name.clone(),
                    location: region.location,
                    offering,
                },
            ));
        }
    }
    Ok(rows)
}

fn bump_version(version: &str) -> String {
    match version.rsplit_once("+r") {
        Some((base, n)) if n.parse::<u64>().is_ok() => {
            format!("{base}+r{}", n.parse::<u64>().unwrap() + 1)
        }
        _ => format!("{version}+r1"),
    }
}

/// Inserts or replaces an offering, keyed by (provider, region, type, name),
/// returning a new snapshot with a new version.
///
/// Unknown providers and regions are created; `region` defaults to `"Any"`.
pub fn upsert_offering(
    catalog: &Catalog,
    provider: &str,
    region: Option<&str>,
    offering: Offering,
) -> Result<Catalog, CatalogError> {
    let region_name = region.unwrap_or(ANY_REGION);
    let problems = offering_problems(&offering);
    if !problems.is_empty() {
        let location = format!(
            "{provider}/{region_name}/{}/{}",
            match offering.service_type() {
                ServiceType::Compute => "compute",
                ServiceType::Storage => "storage",
                ServiceType::Transfer => "transfer",
            },
            offering.name()
        );
        return Err(CatalogError::Invalid(
            problems.into_iter().map(|message| Violation { location: location.clone(), message }).collect(),
        ));
    }

    let mut next = catalog.clone();
    next.version = bump_version(&catalog.version);
    let provider_idx = match next.providers.iter().position(|p| p.name == provider) {
        Some(i) => i,
        None => {
            next.providers.push(Provider { name: provider.to_string(), regions: Vec::new() });
            next.providers.len() - 1
        }
    };
    let regions = &mut next.providers[provider_idx].regions;
    let region_idx = match regions.iter().position(|r| r.name == region_name) {
        Some(i) => i,
        None => {
            regions.push(Region::new(region_name, Location::Any));
            regions.len() - 1
        }
    };
    let target = &mut regions[region_idx];
    match offering {
        Offering::Compute(o) => replace_or_push(&mut target.compute, o, |x| &x.name),
        Offering::Storage(o) => replace_or_push(&mut target.storage, o, |x| &x.name),
        Offering::Transfer(o) => replace_or_push(&mut target.transfer, o, |x| &x.name),
    }
    Ok(next)
}

fn replace_or_push<T>(list: &mut Vec<T>, item: T, name: impl Fn(&T) -> &String) {
    match list.iter().position(|x| name(x) == name(&item)) {
        Some(i) => list[i] = item,
        None => list.push(item),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compute(name: &str, ram: rust_decimal::Decimal) -> ComputeOffering {
        ComputeOffering {
            name: name.into(),
            cores: 1,
            speed_ghz: dec!(2.0),
            ram_gb: ram,
            local_storage_gb: dec!(10),
            billing: ComputeBilling::per_instance(dec!(0.1)),
            plan: PlanPricing::on_demand(),
        }
    }

    fn catalog() -> Catalog {
        let mut region = Region::new("Any", Location::Any);
        region.compute = vec![compute("m1.small", dec!(1.7)), compute("c1.medium", dec!(1.7))];
        Catalog {
            base_currency: BASE_CURRENCY.into(),
            version: "v1".into(),
            providers: vec![Provider { name: "Amazon".into(), regions: vec![region] }],
        }
    }

    #[test]
    fn pattern_filter() {
        let rows = list_offerings(&catalog(), ServiceType::Compute, Some("^m1"), None).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].offering.name(), "m1.small");
    }

    #[test]
    fn invalid_pattern() {
        let err = list_offerings(&catalog(), ServiceType::Compute, Some("("), None).unwrap_err();
        assert!(matches!(err, CatalogError::Pattern(_)));
    }

    #[test]
    fn empty_catalog_lists_nothing() {
        assert!(list_offerings(&Catalog::empty(), ServiceType::Compute, None, None).unwrap().is_empty());
    }

    #[test]
    fn update_is_visible() {
        let c =
            upsert_offering(&catalog(), "Amazon", None, Offering::Compute(compute("m1.small", dec!(3.75)))).unwrap();
        assert_ne!(c.version, "v1");
        let rows = list_offerings(&c, ServiceType::Compute, Some("^m1"), None).unwrap();
        assert_eq!(rows.len(), 1);
        match &rows[0].offering {
            Offering::Compute(o) => assert_eq!(o.ram_gb, dec!(3.75)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_provider_gets_any_region() {
        let c = upsert_offering(&catalog(), "GoGrid", None, Offering::Compute(compute("1GB", dec!(1)))).unwrap();
        let provider = c.provider("GoGrid").unwrap();
        assert_eq!(provider.regions.len(), 1);
        assert_eq!(provider.regions[0].name, ANY_REGION);
        assert!(crate::catalog::validate(&c).is_empty());
        let rows = list_offerings(&c, ServiceType::Compute, None, Some(&["GoGrid".to_string()])).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn zero_cores_rejected() {
        let mut bad = compute("broken", dec!(1));
        bad.cores = 0;
        let err = upsert_offering(&catalog(), "Amazon", None, Offering::Compute(bad)).unwrap_err();
        assert_eq!(err.violations()[0].location, "Amazon/Any/compute/broken");
    }

    #[test]
    fn version_bumps() {
        assert_eq!(bump_version("2012-06"), "2012-06+r1");
        assert_eq!(bump_version("2012-06+r1"), "2012-06+r2");
    }
}
