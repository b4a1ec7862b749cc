pub mod lowindex;
