//! Script files shipped with the crate.

pub const CERTS: &str = include_str!("../../../fixtures/certs.fol");
pub const SUPERCERTS: &str = include_str!("../../../fixtures/supercerts.fol");
pub const EQREFL_GEN: &str = include_str!("../../../fixtures/eqrefl_gen.fol");
pub const IDENTITY: &str = include_str!("../../../fixtures/identity.fol");
pub const EQREFL_ALL: &str = include_str!("../../../fixtures/eqrefl_all.fol");
pub const MODALD: &str = include_str!("../../../fixtures/modald.fol");

/// Name and text of each bundled script.
pub const ALL: [(&str, &str); 6] = [
    ("certs.fol", CERTS),
    ("supercerts.fol", SUPERCERTS),
    ("eqrefl_gen.fol", EQREFL_GEN),
    ("identity.fol", IDENTITY),
    ("eqrefl_all.fol", EQREFL_ALL),
    ("modald.fol", MODALD),
];

pub fn get(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name || n.trim_end_matches(".fol") == name).map(|(_, t)| *t)
}
