pub mod charpoly;
