pub mod analysis;
pub mod arithmetic;
pub mod diagram;
pub mod fulfil;
pub mod map;
pub mod verify;
