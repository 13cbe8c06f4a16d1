pub mod prenorm;
pub mod probe;
pub mod search;
pub mod sets;
pub mod structure;
pub mod verify;
