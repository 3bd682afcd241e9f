//! Models shipped with the crate.

use crate::document::load_model;
use crate::model::RiskModel;

/// Data-center cooling failure: probability x impact x cooling redundancy x
/// maintenance status (5/5/4/3 levels).
pub const COOLING: &str = include_str!("../fixtures/cooling.ndpolar.json");

/// Three axes with four levels each.
pub const STYLISED: &str = include_str!("../fixtures/stylised.ndpolar.json");

/// A plain 5x5 likelihood x consequence matrix.
pub const CLASSIC_2D: &str = include_str!("../fixtures/classic2d.ndpolar.json");

/// `(name, document)` for every shipped fixture.
pub const ALL: [(&str, &str); 3] = [("cooling", COOLING), ("stylised", STYLISED), ("classic2d", CLASSIC_2D)];

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, doc)| *doc)
}

pub fn cooling() -> RiskModel {
    load_model(COOLING).expect("shipped fixture is valid")
}

pub fn stylised() -> RiskModel {
    load_model(STYLISED).expect("shipped fixture is valid")
}

pub fn classic_2d() -> RiskModel {
    load_model(CLASSIC_2D).expect("shipped fixture is valid")
}
