//! Separating coordinate systems of the five superintegrable potentials.

use crate::output::Table;
use crate::Failure;

struct Entry {
    potential: &'static str,
    space: &'static str,
    /// `(system, solved by path integration)`
    systems: &'static [(&'static str, bool)],
}

const CATALOG: &[Entry] = &[
    Entry {
        potential: "V1",
        space: "KI",
        systems: &[
            ("Cartesian", true),
            ("Spherical", true),
            ("Circular Polar", true),
            ("Circular Elliptic", false),
            ("Conical", false),
            ("Oblate Spheroidal", false),
            ("Prolate Spheroidal", false),
            ("Ellipsoidal", false),
        ],
    },
    Entry {
        potential: "V2",
        space: "KII",
        systems: &[("Cartesian", true), ("Parabolic", false), ("Circular Polar", true), ("Circular Elliptic", false)],
    },
    Entry {
        potential: "V3",
        space: "KIII",
        systems: &[("Conical", false), ("Spherical", true), ("Parabolic", true), ("Prolate Spheroidal II", false)],
    },
    Entry {
        potential: "V4",
        space: "KIV",
        systems: &[
            ("Spherical", true),
            ("Circular Elliptic II", false),
            ("Circular Parabolic", true),
            ("Circular Polar", true),
        ],
    },
    Entry {
        potential: "V5",
        space: "KV",
        systems: &[
            ("Circular Polar", true),
            ("Circular Elliptic II", false),
            ("Circular Parabolic", true),
            ("Parabolic", false),
        ],
    },
];

/// Table for one potential/space id (`V1`…`V5`, `KI`…`KV`, any case) or all.
pub fn table(id: Option<&str>) -> Result<Table, Failure> {
    let entries: Vec<&Entry> = match id {
        None => CATALOG.iter().collect(),
        Some(id) => {
            let key = id.trim().to_ascii_uppercase().replace(['_', '-'], "");
            let hit: Vec<&Entry> = CATALOG.iter().filter(|e| e.potential == key || e.space == key).collect();
            if hit.is_empty() {
                return Err(Failure::config(format!("unknown potential or space '{id}' (expected V1..V5 or KI..KV)")));
            }
            hit
        }
    };
    let mut t = Table::new(&["potential", "space", "coordinate_system", "path_integral_solution"]);
    for e in entries {
        for (sys, solved) in e.systems {
            t.push(vec![e.potential.into(), e.space.into(), (*sys).into(), if *solved { "yes" } else { "no" }.into()]);
        }
    }
    Ok(t)
}
