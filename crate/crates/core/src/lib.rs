pub mod acceptance;
pub mod exactnum;
pub mod json;
pub mod plmaps;
pub mod representability;
pub mod subdivision;
pub mod treepairs;
