pub mod geometric;
pub mod plancherel;
pub mod test_function;
pub mod transform;
