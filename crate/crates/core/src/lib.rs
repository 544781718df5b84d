pub mod algebra;
pub mod numerics;
pub mod adhm;
pub mod twistor;
pub mod bundles;
pub mod moduli;
pub mod localization;
pub mod nekrasov;
pub mod verify;
