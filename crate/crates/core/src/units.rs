//! Physical constants. Lengths are Bohr and energies Hartree internally.

pub const BOHR_PER_ANGSTROM: f64 = 1.8897259886;
pub const EV_PER_HARTREE: f64 = 27.211386;
pub const MEV_PER_HARTREE: f64 = EV_PER_HARTREE * 1000.0;

pub fn hartree_to_ev(e: f64) -> f64 {
    e * EV_PER_HARTREE
}
