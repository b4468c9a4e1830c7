use super::model::{Catalog, ComputeOffering, Provider, Region, StorageOffering, TransferOffering};

type PriceVector<'a> = (Vec<&'a ComputeOffering>, Vec<&'a StorageOffering>, Vec<&'a TransferOffering>);

fn price_vector(region: &Region) -> PriceVector<'_> {
    let mut compute: Vec<_> = region.compute.iter().collect();
    let mut storage: Vec<_> = region.storage.iter().collect();
    let mut transfer: Vec<_> = region.transfer.iter().collect();
    compute.sort_by(|a, b| a.name.cmp(&b.name));
    storage.sort_by(|a, b| a.name.cmp(&b.name));
    transfer.sort_by(|a, b| a.name.cmp(&b.name));
    (compute, storage, transfer)
}

/// Merges regions whose complete offering lists are identical into one region
/// named by joining the originals with `" and "`, in their original order.
pub fn merge_equal_price_regions(provider: Provider) -> Provider {
    let vectors: Vec<PriceVector<'_>> = provider.regions.iter().map(price_vector).collect();
    let mut group_of: Vec<Option<usize>> = vec![None; provider.regions.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..provider.regions.len() {
        if group_of[i].is_some() {
            continue;
        }
        let mut members = vec![i];
        for j in i + 1..provider.regions.len() {
            if group_of[j].is_none() && vectors[i] == vectors[j] {
                group_of[j] = Some(groups.len());
                members.push(j);
            }
        }
        group_of[i] = Some(groups.len());
        groups.push(members);
    }
    drop(vectors);

    let mut slots: Vec<Option<Region>> = provider.regions.into_iter().map(Some).collect();
    let regions = groups
        .into_iter()
        .map(|members| {
            let mut merged = slots[members[0]].take().expect("each region is consumed once");
            for &j in &members[1..] {
                let other = slots[j].take().expect("each region is consumed once");
                merged.name = format!("{} and {}", merged.name, other.name);
                for location in std::iter::once(other.location).chain(other.extra_locations) {
                    if location != merged.location && !merged.extra_locations.contains(&location) {
                        merged.extra_locations.push(location);
                    }
                }
            }
            merged
        })
        .collect();
    Provider { name: provider.name, regions }
}

/// Applies [`merge_equal_price_regions`] to every provider.
pub fn merge_all_regions(catalog: Catalog) -> Catalog {
    Catalog { providers: catalog.providers.into_iter().map(merge_equal_price_regions).collect(), ..catalog }
}
