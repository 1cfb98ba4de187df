//! Built-in groups and cocycles.

use std::sync::Arc;

use crate::cocycle::{Phase, TwoCocycle};
use crate::error::{CocycleError, GroupError};
use crate::group::FiniteGroup;

/// Names of the shipped groups (cyclic groups up to order 8 plus the small
/// nonabelian and Klein groups).
pub fn names() -> Vec<String> {
    let mut out: Vec<String> = (1..=8).map(|n| format!("Z{n}")).collect();
    out.extend(["S3", "S4", "D4", "Q8", "Z2xZ2"].map(String::from));
    out
}

fn cyclic_order(name: &str) -> Option<usize> {
    let n: usize = name.strip_prefix('Z')?.parse().ok()?;
    (1..=MAX_CYCLIC).contains(&n).then_some(n)
}

const MAX_CYCLIC: usize = 1000;

/// Looks up a group by name: `Z<n>`, `S3`, `S4`, `D4`, `Q8`, `trivial`,
/// or a product `A x B` of such names written `AxB`.
pub fn group(name: &str) -> Result<FiniteGroup, GroupError> {
    let g = match name {
        "trivial" => FiniteGroup::cyclic(1).with_name("trivial"),
        "S3" => FiniteGroup::symmetric(3),
        "S4" => FiniteGroup::symmetric(4),
        "D4" => FiniteGroup::dihedral4(),
        "Q8" => FiniteGroup::quaternion(),
        _ => {
            if let Some(n) = cyclic_order(name) {
                FiniteGroup::cyclic(n)
            } else if let Some((a, b)) = name.split_once('x') {
                let (ga, gb) = (group(a)?, group(b)?);
                if ga.order() * gb.order() > crate::group::MAX_ORDER {
                    return Err(GroupError::TooLarge { limit: crate::group::MAX_ORDER });
                }
                FiniteGroup::direct_product(&ga, &gb).with_name(name)
            } else {
                return Err(GroupError::UnknownGroup(name.to_string()));
            }
        }
    };
    Ok(g)
}

/// Shipped cocycles: `trivial` on every group and `nontrivial` on `Z2xZ2`,
/// `α((a1,a2),(b1,b2)) = exp(πi a1 b2)`.
pub fn cocycle(group: &Arc<FiniteGroup>, name: &str) -> Result<TwoCocycle, CocycleError> {
    match (name, group.name()) {
        ("trivial", _) => Ok(TwoCocycle::trivial(group.clone())),
        ("nontrivial", "Z2xZ2") => {
            let table: Vec<Vec<Phase>> = group
                .elements()
                .map(|a| group.elements().map(|b| Phase::new(((a / 2) * (b % 2)) as i64, 2)).collect())
                .collect();
            TwoCocycle::new(group.clone(), &table)
        }
        _ => Err(CocycleError::Unknown { group: group.name().to_string(), name: name.to_string() }),
    }
}

/// Names of the cocycles shipped for a group.
pub fn cocycle_names(group: &FiniteGroup) -> Vec<&'static str> {
    if group.name() == "Z2xZ2" {
        vec!["trivial", "nontrivial"]
    } else {
        vec!["trivial"]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        let expected = [1, 2, 3, 4, 5, 6, 7, 8, 6, 24, 8, 8, 4];
        for (name, n) in names().iter().zip(expected) {
            assert_eq!(group(name).unwrap().order(), n, "{name}");
        }
        assert!(group("Q8").map(|g| !g.is_abelian()).unwrap());
        assert!(group("Z2xZ2").unwrap().is_abelian());
        assert!(matches!(group("PSL27"), Err(GroupError::UnknownGroup(_))));
        assert!(group("Z0").is_err());
    }

    #[test]
    fn klein_indices() {
        let g = group("Z2xZ2").unwrap();
        assert_eq!(g.labels(), ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        assert!(g.elements().all(|x| g.element_order(x) <= 2));
    }
}
